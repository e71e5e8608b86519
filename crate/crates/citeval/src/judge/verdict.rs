//! Judge output grammar: `SCORE: 0|1` on the first non-blank line, then
//! `EXPLANATION: ...` capturing the remainder.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgeVerdict {
    pub score: bool,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerdictError {
    #[error("missing SCORE line")]
    MissingScore,
    #[error("score out of range: {0}")]
    ScoreOutOfRange(String),
    #[error("missing EXPLANATION line")]
    MissingExplanation,
}

/// Renders a verdict through the grammar; `parse_judge_output` inverts this.
pub fn render_verdict(verdict: &JudgeVerdict) -> String {
    format!(
        "SCORE: {}\nEXPLANATION: {}",
        u8::from(verdict.score),
        verdict.explanation
    )
}

/// Parses a raw judge completion. The SCORE key is case-insensitive and may
/// be surrounded by whitespace; anything else is a parse failure.
pub fn parse_judge_output(raw: &str) -> Result<JudgeVerdict, VerdictError> {
    let mut lines = raw.lines();

    let score_line = lines
        .by_ref()
        .find(|l| !l.trim().is_empty())
        .ok_or(VerdictError::MissingScore)?;
    let score_value = match_key(score_line, "score").ok_or(VerdictError::MissingScore)?;
    let score = match score_value.trim() {
        "0" => false,
        "1" => true,
        other => return Err(VerdictError::ScoreOutOfRange(other.to_string())),
    };

    let explanation_line = lines
        .by_ref()
        .find(|l| !l.trim().is_empty())
        .ok_or(VerdictError::MissingExplanation)?;
    let first = match_key(explanation_line, "explanation")
        .ok_or(VerdictError::MissingExplanation)?;

    let mut explanation = first.trim_start().to_string();
    for rest in lines {
        explanation.push('\n');
        explanation.push_str(rest);
    }
    let explanation = explanation.trim_end().to_string();
    if explanation.is_empty() {
        return Err(VerdictError::MissingExplanation);
    }

    Ok(JudgeVerdict { score, explanation })
}

/// `KEY: value` with case-insensitive key; returns the value part.
fn match_key<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let trimmed = line.trim();
    let (k, v) = trimmed.split_once(':')?;
    if k.trim().eq_ignore_ascii_case(key) {
        Some(v)
    } else {
        None
    }
}
