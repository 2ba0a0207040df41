//! Diagnostics shared by validation, parsing and the transformation passes.

use std::fmt;

use serde::Serialize;

/// Position of a token or line in a source file, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

/// Stable diagnostic codes. The `Display` form is the wire name used in
/// reports and matched by tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(clippy::enum_variant_names)]
pub enum DiagCode {
    ESyntax,
    EType,
    EDupName,
    EDupLabel,
    ERange,
    ETargetInput,
    ETargetStateCurrent,
    EReadOutput,
    ENextInGuard,
    EUnknownSymbol,
    ENoOutput,
    EDupTarget,
    EBadInit,
    EBadDomain,
    EMissingFile,
    ELayerGap,
    ELayer1,
    ESize,
    EIface,
    EBadTarget,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::ESyntax => "E_SYNTAX",
            DiagCode::EType => "E_TYPE",
            DiagCode::EDupName => "E_DUP_NAME",
            DiagCode::EDupLabel => "E_DUP_LABEL",
            DiagCode::ERange => "E_RANGE",
            DiagCode::ETargetInput => "E_TARGET_INPUT",
            DiagCode::ETargetStateCurrent => "E_TARGET_STATE_CURRENT",
            DiagCode::EReadOutput => "E_READ_OUTPUT",
            DiagCode::ENextInGuard => "E_NEXT_IN_GUARD",
            DiagCode::EUnknownSymbol => "E_UNKNOWN_SYMBOL",
            DiagCode::ENoOutput => "E_NO_OUTPUT",
            DiagCode::EDupTarget => "E_DUP_TARGET",
            DiagCode::EBadInit => "E_BAD_INIT",
            DiagCode::EBadDomain => "E_BAD_DOMAIN",
            DiagCode::EMissingFile => "E_MISSING_FILE",
            DiagCode::ELayerGap => "E_LAYER_GAP",
            DiagCode::ELayer1 => "E_LAYER1",
            DiagCode::ESize => "E_SIZE",
            DiagCode::EIface => "E_IFACE",
            DiagCode::EBadTarget => "E_BAD_TARGET",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DiagCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Diagnostic weight. Warnings flag shape advice (a group layout that
/// strays from the usual figure); they never block loading or checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl Serialize for Severity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// One finding. Validation returns lists of these instead of failing fast so
/// a component author sees every problem at once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub severity: Severity,
    pub message: String,
    /// Formula label the finding is anchored to, when it concerns a formula.
    pub label: Option<String>,
    /// Source position, when the component came from a file.
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: Severity::Error,
            message: message.into(),
            label: None,
            span: None,
        }
    }

    pub fn warning(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::new(code, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.severity == Severity::Warning {
            f.write_str("warning ")?;
        }
        write!(f, "{}: {}", self.code, self.message)?;
        if let Some(label) = &self.label {
            write!(f, " (formula {label})")?;
        }
        if let Some(span) = &self.span {
            write!(f, " at {span}")?;
        }
        Ok(())
    }
}
