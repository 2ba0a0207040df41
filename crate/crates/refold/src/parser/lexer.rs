//! Line lexer for the specification DSL. `--` starts a comment anywhere.

use crate::diag::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Tick,
    DotDot,
    Implies,
    AndAnd,
    OrOr,
    Eq,
    Neq,
    Lt,
    Le,
    Plus,
    Minus,
    Bang,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Tick => "`'`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Implies => "`==>`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Bang => "`!`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Tokenize one line (1-based `line` number). The comment tail after `--`
/// is dropped before scanning.
pub fn lex_line(file: &str, line_no: u32, raw: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let code = match raw.find("--") {
        Some(pos) => &raw[..pos],
        None => raw,
    };
    let mut out = Vec::new();
    let bytes = code.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let span = SourceSpan {
            file: file.to_string(),
            line: line_no,
            column: (i + 1) as u32,
        };
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '{' => {
                out.push(Spanned { tok: Tok::LBrace, span });
                i += 1;
            }
            '}' => {
                out.push(Spanned { tok: Tok::RBrace, span });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, span });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, span });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, span });
                i += 1;
            }
            ':' => {
                out.push(Spanned { tok: Tok::Colon, span });
                i += 1;
            }
            '\'' => {
                out.push(Spanned { tok: Tok::Tick, span });
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, span });
                i += 1;
            }
            '.' => {
                if bytes.get(i + 1) == Some(&b'.') {
                    out.push(Spanned { tok: Tok::DotDot, span });
                    i += 2;
                } else {
                    return Err(syntax(span, "expected `..`"));
                }
            }
            '=' => {
                if code[i..].starts_with("==>") {
                    out.push(Spanned { tok: Tok::Implies, span });
                    i += 3;
                } else {
                    out.push(Spanned { tok: Tok::Eq, span });
                    i += 1;
                }
            }
            '&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    out.push(Spanned { tok: Tok::AndAnd, span });
                    i += 2;
                } else {
                    return Err(syntax(span, "expected `&&`"));
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    out.push(Spanned { tok: Tok::OrOr, span });
                    i += 2;
                } else {
                    return Err(syntax(span, "expected `||`"));
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Spanned { tok: Tok::Neq, span });
                    i += 2;
                } else {
                    out.push(Spanned { tok: Tok::Bang, span });
                    i += 1;
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Spanned { tok: Tok::Le, span });
                    i += 2;
                } else {
                    out.push(Spanned { tok: Tok::Lt, span });
                    i += 1;
                }
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, span });
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let text = &code[start..i];
                let n: i64 = text
                    .parse()
                    .map_err(|_| syntax(span.clone(), format!("integer {text} out of range")))?;
                out.push(Spanned { tok: Tok::Int(n), span });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(code[start..i].to_string()),
                    span,
                });
            }
            _ => {
                return Err(syntax(span, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

fn syntax(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagCode::ESyntax, message).with_span(span)
}
