//! Code masking: fenced blocks and inline code spans are blanked out so the
//! marker scan cannot match citation-looking text inside code, while every
//! character offset stays valid.

use crate::diag::Diagnostic;
use crate::types::Span;

pub struct MaskOutcome {
    /// Canonical text with code content replaced by spaces, same length.
    pub masked: Vec<char>,
    /// Regions whose content was blanked, for audit.
    pub mask_spans: Vec<Span>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Blanks the interior of fenced code blocks (``` / ~~~) and single-line
/// inline code spans. Fence marker lines and backtick delimiters survive so
/// block structure stays recognizable downstream.
///
/// An unterminated fence masks the rest of the document and records a
/// `unterminated-fence` warning.
pub fn mask_code(canonical: &str) -> MaskOutcome {
    let mut masked: Vec<char> = canonical.chars().collect();
    let mut mask_spans = Vec::new();
    let mut diagnostics = Vec::new();

    let lines = line_spans(&masked);
    let mut fence: Option<Fence> = None;
    let mut interior_start: Option<usize> = None;

    for line in &lines {
        let text: String = masked[line.start..line.end].iter().collect();
        match &fence {
            Some(open) => {
                if is_fence_close(&text, open) {
                    if let Some(start) = interior_start.take() {
                        if start < line.start {
                            mask_spans.push(Span::new(start, line.start.saturating_sub(1)));
                        }
                    }
                    fence = None;
                } else {
                    if interior_start.is_none() {
                        interior_start = Some(line.start);
                    }
                    blank(&mut masked, line.start, line.end);
                }
            }
            None => {
                if let Some(open) = parse_fence_open(&text) {
                    fence = Some(Fence {
                        marker: open.0,
                        len: open.1,
                        open_span: *line,
                    });
                } else {
                    mask_inline_code(&mut masked, line, &mut mask_spans);
                }
            }
        }
    }

    if let Some(open) = fence {
        if let Some(start) = interior_start {
            if start < masked.len() {
                mask_spans.push(Span::new(start, masked.len()));
            }
        }
        diagnostics.push(Diagnostic::parse(
            "unterminated-fence",
            "code fence opened but never closed; remainder treated as code",
            Some(open.open_span),
        ));
    }

    MaskOutcome {
        masked,
        mask_spans,
        diagnostics,
    }
}

struct Fence {
    marker: char,
    len: usize,
    open_span: Span,
}

/// Char spans of each line, not including the trailing newline.
pub fn line_spans(text: &[char]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut start = 0;
    for (i, &c) in text.iter().enumerate() {
        if c == '\n' {
            spans.push(Span::new(start, i));
            start = i + 1;
        }
    }
    if start < text.len() {
        spans.push(Span::new(start, text.len()));
    }
    spans
}

fn parse_fence_open(line: &str) -> Option<(char, usize)> {
    let trimmed = line.trim_start_matches(' ');
    if line.len() - trimmed.len() > 3 {
        return None;
    }
    let mut chars = trimmed.chars();
    let first = chars.next()?;
    if first != '`' && first != '~' {
        return None;
    }
    let run = 1 + chars.clone().take_while(|&c| c == first).count();
    if run < 3 {
        return None;
    }
    // backtick fences cannot carry backticks in the info string
    if first == '`' && trimmed[run..].contains('`') {
        return None;
    }
    Some((first, run))
}

fn is_fence_close(line: &str, open: &Fence) -> bool {
    let trimmed = line.trim_start_matches(' ');
    if line.len() - trimmed.len() > 3 {
        return false;
    }
    let run = trimmed.chars().take_while(|&c| c == open.marker).count();
    run >= open.len && trimmed[run..].trim().is_empty()
}

fn blank(chars: &mut [char], start: usize, end: usize) {
    for c in chars[start..end].iter_mut() {
        if *c != '\n' {
            *c = ' ';
        }
    }
}

/// Masks `` `code` `` spans within one line. The opening run must be matched
/// by an identical closing run on the same line; otherwise it is literal text.
fn mask_inline_code(chars: &mut Vec<char>, line: &Span, mask_spans: &mut Vec<Span>) {
    let mut i = line.start;
    while i < line.end {
        if chars[i] == '\\' {
            i += 2;
            continue;
        }
        if chars[i] != '`' {
            i += 1;
            continue;
        }
        let run_len = run_length(chars, i, line.end, '`');
        let content_start = i + run_len;
        let mut j = content_start;
        let mut close = None;
        while j < line.end {
            if chars[j] == '`' {
                let close_len = run_length(chars, j, line.end, '`');
                if close_len == run_len {
                    close = Some(j);
                    break;
                }
                j += close_len;
            } else {
                j += 1;
            }
        }
        match close {
            Some(close_at) if close_at > content_start => {
                for c in chars[content_start..close_at].iter_mut() {
                    *c = ' ';
                }
                mask_spans.push(Span::new(content_start, close_at));
                i = close_at + run_len;
            }
            Some(close_at) => {
                i = close_at + run_len;
            }
            None => {
                i = content_start;
            }
        }
    }
}

fn run_length(chars: &[char], at: usize, end: usize, which: char) -> usize {
    chars[at..end].iter().take_while(|&&c| c == which).count()
}
