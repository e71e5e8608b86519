//! Inline marker scan: finds citation usages inside prose block content.
//!
//! Recognized syntaxes: bare bracketed numbers `[1]`, ranges `[1-3]`
//! (expanded here, one marker per member, all sharing the range's span),
//! footnote references `[^label]`, inline links `[text](url)` and autolinks
//! `<https://...>`. Everything else is literal text.

use crate::diag::Diagnostic;
use crate::types::{CitationMarker, MarkerKind, Span};

/// Ranges wider than this are reduced to their endpoints with a diagnostic.
const MAX_RANGE_WIDTH: u64 = 999;

#[derive(Debug, Default)]
pub struct ScanOutcome {
    pub markers: Vec<CitationMarker>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Scans one content span of masked text, emitting markers in document order.
pub fn scan_markers(chars: &[char], content: Span) -> ScanOutcome {
    let mut out = ScanOutcome::default();
    let mut i = content.start;
    let end = content.end;

    while i < end {
        match chars[i] {
            '\\' => i += 2,
            '!' if i + 1 < end && chars[i + 1] == '[' => {
                // image: consume the whole construct, alt text is not a citation
                if let Some(link) = parse_bracket(chars, i + 1, end) {
                    if matches!(link, Bracket::InlineLink { .. }) {
                        i = bracket_end(&link);
                        continue;
                    }
                }
                i += 1;
            }
            '[' => match parse_bracket(chars, i, end) {
                Some(bracket) => {
                    let next = bracket_end(&bracket);
                    emit(bracket, &mut out);
                    i = next;
                }
                None => i += 1,
            },
            '<' => {
                if let Some((url, close)) = parse_autolink(chars, i, end) {
                    out.markers.push(CitationMarker {
                        kind: MarkerKind::Autolink,
                        label: url.clone(),
                        url: Some(url),
                        span: Span::new(i, close),
                    });
                    i = close;
                } else {
                    i += 1;
                }
            }
            _ => i += 1,
        }
    }
    out
}

enum Bracket {
    Numbered { label: String, span: Span },
    Range { from: u64, to: u64, span: Span },
    Footnote { label: String, span: Span },
    InlineLink { anchor: String, url: String, span: Span },
    /// Bracket that is not citation syntax; scanning resumes inside it.
    Literal { open: usize },
}

fn bracket_end(b: &Bracket) -> usize {
    match b {
        Bracket::Numbered { span, .. }
        | Bracket::Range { span, .. }
        | Bracket::Footnote { span, .. }
        | Bracket::InlineLink { span, .. } => span.end,
        Bracket::Literal { open } => open + 1,
    }
}

fn emit(bracket: Bracket, out: &mut ScanOutcome) {
    match bracket {
        Bracket::Numbered { label, span } => out.markers.push(CitationMarker {
            kind: MarkerKind::Numbered,
            label,
            url: None,
            span,
        }),
        Bracket::Range { from, to, span } => {
            if from > to {
                out.diagnostics.push(Diagnostic::parse(
                    "descending-range",
                    format!("range [{from}-{to}] is descending; emitting endpoints only"),
                    Some(span),
                ));
                for v in [from, to] {
                    out.markers.push(numbered(v, span));
                }
            } else if to - from > MAX_RANGE_WIDTH {
                out.diagnostics.push(Diagnostic::parse(
                    "range-too-large",
                    format!("range [{from}-{to}] too wide; emitting endpoints only"),
                    Some(span),
                ));
                for v in [from, to] {
                    out.markers.push(numbered(v, span));
                }
            } else {
                for v in from..=to {
                    out.markers.push(numbered(v, span));
                }
            }
        }
        Bracket::Footnote { label, span } => out.markers.push(CitationMarker {
            kind: MarkerKind::Footnote,
            label,
            url: None,
            span,
        }),
        Bracket::InlineLink { anchor, url, span } => out.markers.push(CitationMarker {
            kind: MarkerKind::InlineLink,
            label: anchor,
            url: Some(url),
            span,
        }),
        Bracket::Literal { .. } => {}
    }
}

fn numbered(value: u64, span: Span) -> CitationMarker {
    CitationMarker {
        kind: MarkerKind::Numbered,
        label: value.to_string(),
        url: None,
        span,
    }
}

fn parse_bracket(chars: &[char], open: usize, end: usize) -> Option<Bracket> {
    let mut j = open + 1;
    while j < end {
        match chars[j] {
            ']' => break,
            '\n' => return None,
            '\\' => j += 2,
            _ => j += 1,
        }
    }
    if j >= end {
        return None;
    }
    let inner: String = chars[open + 1..j].iter().collect();
    let after = j + 1;

    // `[text](url)` — takes priority over the bare-number reading
    if after < end && chars[after] == '(' {
        if let Some((url, close)) = parse_link_target(chars, after, end) {
            return Some(Bracket::InlineLink {
                anchor: inner,
                url,
                span: Span::new(open, close),
            });
        }
    }

    // `[label]:` is definition syntax, not a usage
    if after < end && chars[after] == ':' {
        return Some(Bracket::Literal { open });
    }

    let span = Span::new(open, after);
    if !inner.is_empty() && inner.chars().all(|c| c.is_ascii_digit()) {
        return Some(Bracket::Numbered { label: inner, span });
    }
    if let Some((a, b)) = parse_range(&inner) {
        return Some(Bracket::Range { from: a, to: b, span });
    }
    if let Some(rest) = inner.strip_prefix('^') {
        if !rest.is_empty() && !rest.contains(char::is_whitespace) {
            return Some(Bracket::Footnote { label: inner, span });
        }
    }
    Some(Bracket::Literal { open })
}

fn parse_range(inner: &str) -> Option<(u64, u64)> {
    let (a, b) = inner.split_once('-')?;
    if a.is_empty() || b.is_empty() {
        return None;
    }
    if !a.chars().all(|c| c.is_ascii_digit()) || !b.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Parses `(url ...)` allowing balanced parentheses inside the URL.
/// Returns the URL and the offset just past the closing paren.
fn parse_link_target(chars: &[char], open_paren: usize, end: usize) -> Option<(String, usize)> {
    let mut depth = 1;
    let mut j = open_paren + 1;
    while j < end {
        match chars[j] {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            '\n' => return None,
            _ => {}
        }
        j += 1;
    }
    if j >= end || depth != 0 {
        return None;
    }
    let raw: String = chars[open_paren + 1..j].iter().collect();
    let url = raw.trim();
    // drop an optional quoted title
    let url = url.split_whitespace().next().unwrap_or("");
    let url = url.strip_prefix('<').unwrap_or(url);
    let url = url.strip_suffix('>').unwrap_or(url);
    if url.is_empty() {
        return None;
    }
    Some((url.to_string(), j + 1))
}

/// `<http(s)://...>` with no spaces inside. HTML-looking tags are not markers.
fn parse_autolink(chars: &[char], open: usize, end: usize) -> Option<(String, usize)> {
    let mut j = open + 1;
    while j < end && chars[j] != '>' {
        if chars[j].is_whitespace() {
            return None;
        }
        j += 1;
    }
    if j >= end {
        return None;
    }
    let url: String = chars[open + 1..j].iter().collect();
    if url.starts_with("http://") || url.starts_with("https://") {
        Some((url, j + 1))
    } else {
        None
    }
}
