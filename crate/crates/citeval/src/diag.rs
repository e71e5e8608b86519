//! Parse and pipeline diagnostics carried alongside a document.

use serde::{Deserialize, Serialize};

use crate::types::Span;

/// Pipeline stage a diagnostic originated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Parse,
    Fetch,
    Judge,
    Runner,
}

/// A non-fatal condition worth surfacing to the operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub stage: Stage,
    /// Stable machine-readable code, e.g. `unterminated-fence`.
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn parse(code: &str, message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            stage: Stage::Parse,
            code: code.to_string(),
            message: message.into(),
            span,
        }
    }

    pub fn fetch(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            stage: Stage::Fetch,
            code: code.to_string(),
            message: message.into(),
            span: None,
        }
    }

    pub fn judge(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            stage: Stage::Judge,
            code: code.to_string(),
            message: message.into(),
            span: None,
        }
    }

    pub fn runner(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            stage: Stage::Runner,
            code: code.to_string(),
            message: message.into(),
            span: None,
        }
    }
}
