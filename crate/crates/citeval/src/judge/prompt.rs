//! Rubric prompt construction. Templates are versioned text files shipped
//! with the crate; the judge must answer in a two-line grammar that
//! [`super::verdict::parse_judge_output`] accepts.

/// Template version identifiers, embedded in artifact config echoes.
pub const RELEVANCE_TEMPLATE_VERSION: &str = "relevance_v1";
pub const FACTCHECK_TEMPLATE_VERSION: &str = "factcheck_v1";

const RELEVANCE_TEMPLATE: &str = include_str!("../../prompts/relevance_v1.txt");
const FACTCHECK_TEMPLATE: &str = include_str!("../../prompts/factcheck_v1.txt");

/// Appended to the prompt when the judge's reply failed the grammar.
pub const GRAMMAR_REMINDER: &str = "\nREMINDER: your previous reply did not follow the required format. \
Respond with exactly two lines: `SCORE: 0` or `SCORE: 1` on the first line, \
then `EXPLANATION: <one paragraph>` on the second.\n";

/// Section fences used by the templates; the heuristic stub relies on them.
pub const CLAIM_OPEN: &str = "<<<CLAIM\n";
pub const CLAIM_CLOSE: &str = "\nCLAIM>>>";
pub const CONTENT_OPEN: &str = "<<<CONTENT\n";
pub const CONTENT_CLOSE: &str = "\nCONTENT>>>";

/// Topical-alignment rubric prompt. `content` must already be truncated.
pub fn build_relevance_prompt(claim: &str, content: &str) -> String {
    debug_assert!(!claim.is_empty(), "empty claims are rejected upstream");
    fill(RELEVANCE_TEMPLATE, claim, content)
}

/// Factual-support rubric prompt. `content` must already be truncated.
pub fn build_factcheck_prompt(claim: &str, content: &str) -> String {
    debug_assert!(!claim.is_empty(), "empty claims are rejected upstream");
    fill(FACTCHECK_TEMPLATE, claim, content)
}

fn fill(template: &str, claim: &str, content: &str) -> String {
    template
        .replacen("{claim}", claim, 1)
        .replacen("{content}", content, 1)
}

/// Recovers (claim, content) from a prompt built by this module. Used by the
/// offline heuristic judge.
pub fn extract_sections(prompt: &str) -> Option<(String, String)> {
    let claim = between(prompt, CLAIM_OPEN, CLAIM_CLOSE)?;
    let content = between(prompt, CONTENT_OPEN, CONTENT_CLOSE)?;
    Some((claim, content))
}

fn between(text: &str, open: &str, close: &str) -> Option<String> {
    let start = text.find(open)? + open.len();
    let end = text[start..].find(close)? + start;
    Some(text[start..end].to_string())
}
