//! Recursive-descent parser for `.fspec` component files.

use std::collections::BTreeMap;

use crate::diag::{DiagCode, Diagnostic, SourceSpan};
use crate::model::{
    validate_component, Atom, AtomConstraint, BinaryOp, ChannelDecl, Component, Direction,
    Expression, ExprType, Formula, Literal, SymbolRole, Target, UnaryOp, Value, ValueDomain,
    VarDecl, VarKind,
};
use crate::parser::lexer::{lex_line, Spanned, Tok};

/// Parse a component file. On success the component passes
/// [`validate_component`]; on failure every diagnostic carries a span.
pub fn parse_component(text: &str, file: &str) -> Result<Component, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut comp: Option<Component> = None;
    let mut header_span = SourceSpan {
        file: file.to_string(),
        line: 1,
        column: 1,
    };
    let mut decl_spans: BTreeMap<String, SourceSpan> = BTreeMap::new();
    let mut label_spans: BTreeMap<String, SourceSpan> = BTreeMap::new();
    let mut in_gar = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = (idx + 1) as u32;
        let toks = match lex_line(file, line_no, raw) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, file, line_no);

        let head = match cur.peek_word() {
            Some(w) => w.to_string(),
            None => {
                diags.push(cur.err_here("expected a keyword at the start of the line"));
                continue;
            }
        };

        match (head.as_str(), &mut comp) {
            ("component" | "requirement", slot @ None) => {
                cur.bump();
                match cur.expect_word("component name") {
                    Ok((name, _)) => {
                        header_span = SourceSpan {
                            file: file.to_string(),
                            line: line_no,
                            column: 1,
                        };
                        *slot = Some(Component {
                            name,
                            channels: Vec::new(),
                            vars: Vec::new(),
                            formulas: Vec::new(),
                            pure_requirement: head == "requirement",
                        });
                        if let Err(d) = cur.expect_end() {
                            diags.push(d);
                        }
                    }
                    Err(d) => diags.push(d),
                }
            }
            ("component" | "requirement", Some(_)) => {
                diags.push(cur.err_here("only one component per file"));
            }
            (_, None) => {
                diags.push(cur.err_here("`component` header missing"));
                // Recover so later lines still produce useful diagnostics.
                comp = Some(Component {
                    name: "_unnamed".into(),
                    channels: Vec::new(),
                    vars: Vec::new(),
                    formulas: Vec::new(),
                    pure_requirement: false,
                });
                continue;
            }
            ("in" | "out" | "state" | "local", Some(c)) => {
                if in_gar {
                    diags.push(cur.err_here("declarations must come before the gar section"));
                    continue;
                }
                if let Err(d) = parse_decl(&mut cur, &head, c, &mut decl_spans, &mut diags) {
                    diags.push(d);
                }
            }
            ("gar", Some(_)) => {
                cur.bump();
                if let Err(d) = cur.expect_end() {
                    diags.push(d);
                }
                in_gar = true;
            }
            (_, Some(c)) => {
                if !in_gar {
                    diags.push(cur.err_here(format!(
                        "unknown declaration `{head}` (expected in/out/state/local/gar)"
                    )));
                    continue;
                }
                let shell = c.clone();
                match parse_formula(&mut cur, &shell) {
                    Ok(f) => {
                        let span = SourceSpan {
                            file: file.to_string(),
                            line: line_no,
                            column: 1,
                        };
                        if let Some(first) = label_spans.get(&f.label) {
                            diags.push(
                                Diagnostic::new(
                                    DiagCode::EDupLabel,
                                    format!("label {} first used here", f.label),
                                )
                                .with_span(first.clone()),
                            );
                            diags.push(
                                Diagnostic::new(
                                    DiagCode::EDupLabel,
                                    format!("duplicate formula label {}", f.label),
                                )
                                .with_span(span),
                            );
                        } else {
                            label_spans.insert(f.label.clone(), span);
                            c.formulas.push(f);
                        }
                    }
                    Err(d) => diags.push(d),
                }
            }
        }
    }

    let comp = match comp {
        Some(c) => c,
        None => {
            diags.push(
                Diagnostic::new(DiagCode::ESyntax, "`component` header missing").with_span(
                    SourceSpan {
                        file: file.to_string(),
                        line: 1,
                        column: 1,
                    },
                ),
            );
            return Err(diags);
        }
    };

    if !diags.is_empty() {
        return Err(diags);
    }

    // The grammar walk resolves names and types; validation still owns the
    // whole-component invariants (ranges, duplicate targets, output counts).
    let mut vdiags = validate_component(&comp);
    if vdiags.is_empty() {
        return Ok(comp);
    }
    for d in &mut vdiags {
        let span = d
            .label
            .as_ref()
            .and_then(|l| label_spans.get(l))
            .cloned()
            .unwrap_or_else(|| header_span.clone());
        d.span = Some(span);
    }
    Err(vdiags)
}

/// Parse formula lines (the body of a gar section) against an existing
/// component's declarations. Used for `group extend` delta files.
pub fn parse_delta_formulas(
    text: &str,
    context: &Component,
    file: &str,
) -> Result<Vec<Formula>, Vec<Diagnostic>> {
    let mut formulas = Vec::new();
    let mut diags = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = (idx + 1) as u32;
        let toks = match lex_line(file, line_no, raw) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, file, line_no);
        if cur.peek_word() == Some("gar") {
            cur.bump();
            if cur.at_end() {
                continue;
            }
        }
        match parse_formula(&mut cur, context) {
            Ok(f) => formulas.push(f),
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(formulas)
    } else {
        Err(diags)
    }
}

fn parse_decl(
    cur: &mut Cursor,
    head: &str,
    comp: &mut Component,
    decl_spans: &mut BTreeMap<String, SourceSpan>,
    diags: &mut Vec<Diagnostic>,
) -> Result<(), Diagnostic> {
    cur.bump();
    let (name, name_span) = cur.expect_word("a declaration name")?;
    cur.expect(&Tok::Colon)?;
    let domain = parse_domain(cur)?;

    if let Some(first) = decl_spans.get(&name) {
        diags.push(
            Diagnostic::new(DiagCode::EDupName, format!("{name} first declared here"))
                .with_span(first.clone()),
        );
        diags.push(
            Diagnostic::new(DiagCode::EDupName, format!("duplicate declaration of {name}"))
                .with_span(name_span),
        );
        cur.drain();
        return Ok(());
    }
    decl_spans.insert(name.clone(), name_span.clone());

    match head {
        "in" | "out" => {
            comp.channels.push(ChannelDecl {
                name,
                direction: if head == "in" {
                    Direction::Input
                } else {
                    Direction::Output
                },
                domain,
            });
        }
        "state" => {
            let (kw, kw_span) = cur.expect_word("`init`")?;
            if kw != "init" {
                return Err(Diagnostic::new(
                    DiagCode::ESyntax,
                    format!("expected `init`, found `{kw}`"),
                )
                .with_span(kw_span));
            }
            let init = parse_value_literal(cur, &domain, &name)?;
            comp.vars.push(VarDecl {
                name,
                kind: VarKind::State { init },
                domain,
            });
        }
        "local" => {
            comp.vars.push(VarDecl {
                name,
                kind: VarKind::Local,
                domain,
            });
        }
        _ => unreachable!(),
    }
    cur.expect_end()
}

fn parse_domain(cur: &mut Cursor) -> Result<ValueDomain, Diagnostic> {
    if cur.eat(&Tok::LBrace) {
        let mut labels = Vec::new();
        loop {
            let (label, _) = cur.expect_word("an enumeration label")?;
            labels.push(label);
            if cur.eat(&Tok::Comma) {
                continue;
            }
            cur.expect(&Tok::RBrace)?;
            break;
        }
        return Ok(ValueDomain::Enumeration(labels));
    }
    let (kw, kw_span) = cur.expect_word("a domain (`{a, b}` or `int lo..hi`)")?;
    if kw != "int" {
        return Err(Diagnostic::new(
            DiagCode::ESyntax,
            format!("expected a domain, found `{kw}`"),
        )
        .with_span(kw_span));
    }
    let lo = cur.expect_int()?;
    cur.expect(&Tok::DotDot)?;
    let hi = cur.expect_int()?;
    Ok(ValueDomain::BoundedInt { lo, hi })
}

/// A literal value in a declaration position (state init), resolved against
/// the declared domain.
fn parse_value_literal(
    cur: &mut Cursor,
    domain: &ValueDomain,
    owner: &str,
) -> Result<Value, Diagnostic> {
    let span = cur.here();
    if let Some(Tok::Word(_)) = cur.peek() {
        let (word, word_span) = cur.expect_word("a value")?;
        return domain.resolve(&word).ok_or_else(|| {
            Diagnostic::new(
                DiagCode::EBadInit,
                format!("value {word} outside the domain {domain} of {owner}"),
            )
            .with_span(word_span)
        });
    }
    let n = cur.expect_int()?;
    domain.resolve(&n.to_string()).ok_or_else(|| {
        Diagnostic::new(
            DiagCode::EBadInit,
            format!("value {n} outside the domain {domain} of {owner}"),
        )
        .with_span(span)
    })
}

fn parse_formula(cur: &mut Cursor, comp: &Component) -> Result<Formula, Diagnostic> {
    let (label, _) = cur.expect_word("a formula label")?;
    cur.expect(&Tok::Colon)?;
    let guard_raw = parse_expr(cur, 0)?;
    cur.expect(&Tok::Implies)?;

    let lower = Lower { comp };
    let (guard, _) = lower.lower(&guard_raw, Some(&ExprType::Bool))?;

    let mut consequent = Vec::new();
    loop {
        consequent.push(parse_atom(cur, comp, &lower)?);
        if cur.eat(&Tok::AndAnd) {
            continue;
        }
        break;
    }
    cur.expect_end()?;
    Ok(Formula {
        label,
        guard,
        consequent,
    })
}

fn parse_atom(cur: &mut Cursor, comp: &Component, lower: &Lower) -> Result<Atom, Diagnostic> {
    let (name, name_span) = cur.expect_word("an atom target")?;
    let next = cur.eat(&Tok::Tick);

    let role = comp.role_of(&name);
    match role {
        None => {
            return Err(Diagnostic::new(
                DiagCode::EUnknownSymbol,
                format!("unknown target {name}"),
            )
            .with_span(name_span));
        }
        Some(SymbolRole::Input) => {
            return Err(Diagnostic::new(
                DiagCode::ETargetInput,
                format!("input channel {name} cannot be a target"),
            )
            .with_span(name_span));
        }
        Some(SymbolRole::State) if !next => {
            return Err(Diagnostic::new(
                DiagCode::ETargetStateCurrent,
                format!("state variable {name} may only be targeted at the next tick ({name}')"),
            )
            .with_span(name_span));
        }
        Some(SymbolRole::Output) | Some(SymbolRole::Local) if next => {
            return Err(Diagnostic::new(
                DiagCode::EType,
                format!("next-tick marker is only legal on state variables, not {name}"),
            )
            .with_span(name_span));
        }
        _ => {}
    }
    let domain = comp.domain_of(&name).expect("role implies domain").clone();
    let target = Target { name, next };

    if cur.eat(&Tok::Eq) {
        let raw = parse_expr(cur, PREC_CMP + 1)?;
        let (rhs, _) = lower.lower(&raw, Some(&ExprType::of_domain(&domain)))?;
        return Ok(Atom {
            target,
            constraint: AtomConstraint::Equals(rhs),
        });
    }
    let (kw, kw_span) = cur.expect_word("`=` or `in`")?;
    if kw != "in" {
        return Err(Diagnostic::new(
            DiagCode::ESyntax,
            format!("expected `=` or `in`, found `{kw}`"),
        )
        .with_span(kw_span));
    }
    cur.expect(&Tok::LBrace)?;
    let mut values = Vec::new();
    loop {
        values.push(parse_value_literal(cur, &domain, &target.name)?);
        if cur.eat(&Tok::Comma) {
            continue;
        }
        cur.expect(&Tok::RBrace)?;
        break;
    }
    Ok(Atom {
        target,
        constraint: AtomConstraint::In(values),
    })
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum RawExpr {
    Int(i64, SourceSpan),
    Bool(bool, SourceSpan),
    Word(String, SourceSpan),
    Unary(UnaryOp, Box<RawExpr>),
    Binary(BinaryOp, Box<RawExpr>, Box<RawExpr>, SourceSpan),
    Cond(Box<RawExpr>, Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    fn span(&self) -> SourceSpan {
        match self {
            RawExpr::Int(_, s) | RawExpr::Bool(_, s) | RawExpr::Word(_, s) => s.clone(),
            RawExpr::Unary(_, e) => e.span(),
            RawExpr::Binary(_, _, _, s) => s.clone(),
            RawExpr::Cond(c, _, _) => c.span(),
        }
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_CMP: u8 = 3;
const PREC_ADD: u8 = 4;

fn binop_of(tok: &Tok) -> Option<(BinaryOp, u8)> {
    match tok {
        Tok::OrOr => Some((BinaryOp::Or, PREC_OR)),
        Tok::AndAnd => Some((BinaryOp::And, PREC_AND)),
        Tok::Eq => Some((BinaryOp::Eq, PREC_CMP)),
        Tok::Neq => Some((BinaryOp::Neq, PREC_CMP)),
        Tok::Lt => Some((BinaryOp::Lt, PREC_CMP)),
        Tok::Le => Some((BinaryOp::Le, PREC_CMP)),
        Tok::Plus => Some((BinaryOp::Add, PREC_ADD)),
        Tok::Minus => Some((BinaryOp::Sub, PREC_ADD)),
        _ => None,
    }
}

/// Precedence-climbing parser. Comparisons do not chain; `+`/`-` associate
/// to the left.
fn parse_expr(cur: &mut Cursor, min_prec: u8) -> Result<RawExpr, Diagnostic> {
    let mut lhs = parse_unary(cur)?;
    while let Some(tok) = cur.peek() {
        let Some((op, prec)) = binop_of(tok) else {
            break;
        };
        if prec < min_prec {
            break;
        }
        let span = cur.here();
        cur.bump();
        let rhs = parse_expr(cur, prec + 1)?;
        if prec == PREC_CMP {
            if let Some(t) = cur.peek() {
                if matches!(binop_of(t), Some((_, p)) if p == PREC_CMP) {
                    return Err(Diagnostic::new(
                        DiagCode::ESyntax,
                        "comparisons do not chain; parenthesize",
                    )
                    .with_span(cur.here()));
                }
            }
        }
        lhs = RawExpr::Binary(op, Box::new(lhs), Box::new(rhs), span);
    }
    Ok(lhs)
}

fn parse_unary(cur: &mut Cursor) -> Result<RawExpr, Diagnostic> {
    if cur.eat(&Tok::Bang) {
        let e = parse_unary(cur)?;
        return Ok(RawExpr::Unary(UnaryOp::Not, Box::new(e)));
    }
    if cur.eat(&Tok::Minus) {
        // A leading minus on an integer literal folds into the literal.
        if let Some(Tok::Int(_)) = cur.peek() {
            let span = cur.here();
            let n = cur.expect_int()?;
            return Ok(RawExpr::Int(-n, span));
        }
        let e = parse_unary(cur)?;
        return Ok(RawExpr::Unary(UnaryOp::Negate, Box::new(e)));
    }
    parse_primary(cur)
}

fn parse_primary(cur: &mut Cursor) -> Result<RawExpr, Diagnostic> {
    let span = cur.here();
    match cur.peek().cloned() {
        Some(Tok::Int(n)) => {
            cur.bump();
            Ok(RawExpr::Int(n, span))
        }
        Some(Tok::Word(w)) => {
            cur.bump();
            match w.as_str() {
                "true" => Ok(RawExpr::Bool(true, span)),
                "false" => Ok(RawExpr::Bool(false, span)),
                "if" => {
                    let cond = parse_expr(cur, 0)?;
                    cur.expect_kw("then")?;
                    let then_branch = parse_expr(cur, 0)?;
                    cur.expect_kw("else")?;
                    let else_branch = parse_expr(cur, 0)?;
                    Ok(RawExpr::Cond(
                        Box::new(cond),
                        Box::new(then_branch),
                        Box::new(else_branch),
                    ))
                }
                _ => {
                    if cur.eat(&Tok::Tick) {
                        return Err(Diagnostic::new(
                            DiagCode::ENextInGuard,
                            format!("next-tick read {w}' may only appear as an atom target"),
                        )
                        .with_span(span));
                    }
                    Ok(RawExpr::Word(w, span))
                }
            }
        }
        Some(Tok::LParen) => {
            cur.bump();
            let e = parse_expr(cur, 0)?;
            cur.expect(&Tok::RParen)?;
            Ok(e)
        }
        Some(tok) => Err(Diagnostic::new(
            DiagCode::ESyntax,
            format!("expected an expression, found {}", tok.describe()),
        )
        .with_span(span)),
        None => Err(Diagnostic::new(
            DiagCode::ESyntax,
            "expected an expression, found end of line",
        )
        .with_span(span)),
    }
}

// ---------------------------------------------------------------------------
// Lowering: resolve words to symbol reads or enumeration literals, checking
// types bidirectionally along the way.
// ---------------------------------------------------------------------------

struct Lower<'a> {
    comp: &'a Component,
}

impl Lower<'_> {
    fn lower(
        &self,
        raw: &RawExpr,
        expected: Option<&ExprType>,
    ) -> Result<(Expression, ExprType), Diagnostic> {
        let (expr, ty) = self.infer(raw, expected)?;
        if let Some(want) = expected {
            if &ty != want {
                return Err(Diagnostic::new(
                    DiagCode::EType,
                    format!("expected {}, found {}", describe(want), describe(&ty)),
                )
                .with_span(raw.span()));
            }
        }
        Ok((expr, ty))
    }

    fn infer(
        &self,
        raw: &RawExpr,
        expected: Option<&ExprType>,
    ) -> Result<(Expression, ExprType), Diagnostic> {
        match raw {
            RawExpr::Int(n, _) => Ok((
                Expression::Literal(Literal::Value(Value::Int(*n))),
                ExprType::Int,
            )),
            RawExpr::Bool(b, _) => Ok((Expression::Literal(Literal::Bool(*b)), ExprType::Bool)),
            RawExpr::Word(w, span) => {
                match self.comp.role_of(w) {
                    Some(SymbolRole::Output) => Err(Diagnostic::new(
                        DiagCode::EReadOutput,
                        format!("output channel {w} cannot be read"),
                    )
                    .with_span(span.clone())),
                    Some(_) => {
                        let ty = ExprType::of_domain(self.comp.domain_of(w).unwrap());
                        Ok((Expression::read(w.clone()), ty))
                    }
                    None => {
                        // Not a symbol: try an enumeration label of the
                        // expected domain.
                        if let Some(ExprType::Enum(labels)) = expected {
                            if let Some(ord) = labels.iter().position(|l| l == w) {
                                return Ok((
                                    Expression::Literal(Literal::Value(Value::sym(
                                        ord as u16,
                                        w.clone(),
                                    ))),
                                    ExprType::Enum(labels.clone()),
                                ));
                            }
                        }
                        Err(Diagnostic::new(
                            DiagCode::EUnknownSymbol,
                            format!("unknown symbol or label {w}"),
                        )
                        .with_span(span.clone()))
                    }
                }
            }
            RawExpr::Unary(op, inner) => match op {
                UnaryOp::Not => {
                    let (e, _) = self.lower(inner, Some(&ExprType::Bool))?;
                    Ok((
                        Expression::Unary {
                            op: UnaryOp::Not,
                            expr: Box::new(e),
                        },
                        ExprType::Bool,
                    ))
                }
                UnaryOp::Negate => {
                    let (e, _) = self.lower(inner, Some(&ExprType::Int))?;
                    Ok((
                        Expression::Unary {
                            op: UnaryOp::Negate,
                            expr: Box::new(e),
                        },
                        ExprType::Int,
                    ))
                }
            },
            RawExpr::Binary(op, lhs, rhs, span) => match op {
                BinaryOp::And | BinaryOp::Or => {
                    let (l, _) = self.lower(lhs, Some(&ExprType::Bool))?;
                    let (r, _) = self.lower(rhs, Some(&ExprType::Bool))?;
                    Ok((Expression::binary(*op, l, r), ExprType::Bool))
                }
                BinaryOp::Eq | BinaryOp::Neq => {
                    let (l, r, ty) = match self.lower(lhs, None) {
                        Ok((l, ty)) => {
                            let (r, _) = self.lower(rhs, Some(&ty))?;
                            (l, r, ty)
                        }
                        Err(lhs_err) => match self.lower(rhs, None) {
                            Ok((r, ty)) => {
                                let (l, _) = self.lower(lhs, Some(&ty))?;
                                (l, r, ty)
                            }
                            // Neither side infers on its own; the left error
                            // is the likelier root cause.
                            Err(_) => return Err(lhs_err),
                        },
                    };
                    if ty == ExprType::Bool {
                        return Err(Diagnostic::new(
                            DiagCode::EType,
                            "equality compares domain values, not booleans",
                        )
                        .with_span(span.clone()));
                    }
                    Ok((Expression::binary(*op, l, r), ExprType::Bool))
                }
                BinaryOp::Lt | BinaryOp::Le => {
                    let (l, _) = self.lower(lhs, Some(&ExprType::Int))?;
                    let (r, _) = self.lower(rhs, Some(&ExprType::Int))?;
                    Ok((Expression::binary(*op, l, r), ExprType::Bool))
                }
                BinaryOp::Add | BinaryOp::Sub => {
                    let (l, _) = self.lower(lhs, Some(&ExprType::Int))?;
                    let (r, _) = self.lower(rhs, Some(&ExprType::Int))?;
                    Ok((Expression::binary(*op, l, r), ExprType::Int))
                }
            },
            RawExpr::Cond(cond, then_raw, else_raw) => {
                let (c, _) = self.lower(cond, Some(&ExprType::Bool))?;
                let (t, e, ty) = match expected {
                    Some(want) => {
                        let (t, _) = self.lower(then_raw, Some(want))?;
                        let (e, _) = self.lower(else_raw, Some(want))?;
                        (t, e, want.clone())
                    }
                    None => match self.lower(then_raw, None) {
                        Ok((t, ty)) => {
                            let (e, _) = self.lower(else_raw, Some(&ty))?;
                            (t, e, ty)
                        }
                        Err(_) => {
                            let (e, ty) = self.lower(else_raw, None)?;
                            let (t, _) = self.lower(then_raw, Some(&ty))?;
                            (t, e, ty)
                        }
                    },
                };
                Ok((
                    Expression::Conditional {
                        cond: Box::new(c),
                        then_branch: Box::new(t),
                        else_branch: Box::new(e),
                    },
                    ty,
                ))
            }
        }
    }
}

fn describe(ty: &ExprType) -> String {
    match ty {
        ExprType::Bool => "bool".into(),
        ExprType::Int => "int".into(),
        ExprType::Enum(labels) => format!("{{{}}}", labels.join(", ")),
    }
}

// ---------------------------------------------------------------------------
// Token cursor
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    file: &'a str,
    line: u32,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Spanned], file: &'a str, line: u32) -> Self {
        Cursor {
            toks,
            pos: 0,
            file,
            line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_word(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn drain(&mut self) {
        self.pos = self.toks.len();
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|s| s.span.clone()).unwrap_or(SourceSpan {
            file: self.file.to_string(),
            line: self.line,
            column: self
                .toks
                .last()
                .map(|s| s.span.column + 1)
                .unwrap_or(1),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), Diagnostic> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.describe_here()
            )))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek_word() {
            Some(w) if w == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.err_here(format!(
                "expected `{kw}`, found {}",
                self.describe_here()
            ))),
        }
    }

    fn expect_word(&mut self, what: &str) -> Result<(String, SourceSpan), Diagnostic> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.bump();
                Ok((w, span))
            }
            _ => Err(self.err_here(format!("expected {what}, found {}", self.describe_here()))),
        }
    }

    fn expect_int(&mut self) -> Result<i64, Diagnostic> {
        let negative = self.eat(&Tok::Minus);
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.bump();
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.err_here(format!(
                "expected an integer, found {}",
                self.describe_here()
            ))),
        }
    }

    fn expect_end(&mut self) -> Result<(), Diagnostic> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err_here(format!("unexpected {}", self.describe_here())))
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            Some(t) => t.describe(),
            None => "end of line".into(),
        }
    }

    fn err_here(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagCode::ESyntax, message).with_span(self.here())
    }
}
