//! Rule-based sentence segmentation over one block's text.
//!
//! Boundaries sit at terminal punctuation (`.` `!` `?`) followed by
//! whitespace and an opener (uppercase, digit, or opening bracket), guarded
//! by a fixed abbreviation list and by decimal numbers. Trailing citation
//! markers after the terminal punctuation are absorbed into the preceding
//! sentence, which is what makes `Claim. [1]` a single sentence.

use crate::types::Span;

/// Words (lowercased, may contain inner dots or a space) whose trailing dot
/// never ends a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "dr", "mr", "mrs", "ms", "prof", "fig", "figs", "vs", "etc", "e.g", "i.e", "et al", "cf",
    "st", "vol", "pp", "ca", "approx",
];

/// Splits a block's text into sentence spans in document coordinates.
/// Spans are non-overlapping, ordered, and cover all non-whitespace text.
pub fn segment_sentences(chars: &[char], block: Span) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut sent_start = skip_ws(chars, block.start, block.end);
    if sent_start >= block.end {
        return spans;
    }

    let mut i = sent_start;
    while i < block.end {
        let c = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        if c == '.' && (is_abbreviation_before(chars, sent_start, i) || is_decimal(chars, block, i))
        {
            i += 1;
            continue;
        }

        // include closing quotes/parens right after the punctuation
        let mut end = i + 1;
        while end < block.end && is_closer(chars[end]) {
            end += 1;
        }

        // absorb trailing citation markers: `Claim. [1][2]`
        let after_markers = absorb_markers(chars, end, block.end);
        let absorbed = after_markers > end;
        if absorbed {
            end = after_markers;
        } else if end < block.end && !chars[end].is_whitespace() {
            // mid-token punctuation, e.g. `v1.2` or `e.g.x`
            i = end;
            continue;
        }

        let next = skip_ws(chars, end, block.end);
        if next >= block.end {
            spans.push(trim_span(chars, sent_start, end));
            sent_start = block.end;
            break;
        }
        if absorbed || is_opener(chars[next]) {
            spans.push(trim_span(chars, sent_start, end));
            sent_start = next;
            i = next;
        } else {
            i = end;
        }
    }

    if sent_start < block.end {
        let span = trim_span(chars, sent_start, block.end);
        if !span.is_empty() {
            spans.push(span);
        }
    }
    spans.retain(|s| !s.is_empty());
    spans
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, ')' | '"' | '\'')
}

fn is_opener(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || matches!(c, '[' | '(' | '"')
}

fn skip_ws(chars: &[char], mut i: usize, end: usize) -> usize {
    while i < end && chars[i].is_whitespace() {
        i += 1;
    }
    i
}

fn trim_span(chars: &[char], start: usize, end: usize) -> Span {
    let mut s = start;
    let mut e = end;
    while s < e && chars[s].is_whitespace() {
        s += 1;
    }
    while e > s && chars[e - 1].is_whitespace() {
        e -= 1;
    }
    Span::new(s, e)
}

/// `3.14` — digit on both sides of the dot.
fn is_decimal(chars: &[char], block: Span, dot: usize) -> bool {
    dot > block.start
        && dot + 1 < block.end
        && chars[dot - 1].is_ascii_digit()
        && chars[dot + 1].is_ascii_digit()
}

/// True when the token ending at `dot` is a guarded abbreviation or a
/// single-letter initial.
fn is_abbreviation_before(chars: &[char], start: usize, dot: usize) -> bool {
    let mut s = dot;
    while s > start {
        let c = chars[s - 1];
        if c.is_alphanumeric() || c == '.' {
            s -= 1;
        } else {
            break;
        }
    }
    if s == dot {
        return false;
    }
    let word: String = chars[s..dot].iter().collect::<String>().to_lowercase();
    let word = word.trim_end_matches('.');
    if word.len() == 1 && word.chars().all(char::is_alphabetic) {
        return true;
    }
    if ABBREVIATIONS.contains(&word) {
        return true;
    }
    // multi-word entries like "et al"
    if s > start + 1 && chars[s - 1] == ' ' {
        let mut p = s - 1;
        while p > start && chars[p - 1].is_alphanumeric() {
            p -= 1;
        }
        let prev: String = chars[p..s - 1].iter().collect::<String>().to_lowercase();
        let combined = format!("{prev} {word}");
        if ABBREVIATIONS.contains(&combined.as_str()) {
            return true;
        }
    }
    false
}

/// Consumes a run of citation-marker tokens (`[1]`, `[2-4]`, `[^x]`)
/// separated by whitespace or commas, starting at `i`. Returns the position
/// after the last token, or `i` when none was found.
fn absorb_markers(chars: &[char], i: usize, end: usize) -> usize {
    let mut pos = i;
    let mut last_token_end = i;
    loop {
        let mut p = pos;
        while p < end && (chars[p].is_whitespace() || chars[p] == ',') {
            p += 1;
        }
        match marker_token_end(chars, p, end) {
            Some(te) => {
                last_token_end = te;
                pos = te;
            }
            None => break,
        }
    }
    last_token_end
}

/// End of a marker-shaped token at `i`, if one starts there.
fn marker_token_end(chars: &[char], i: usize, end: usize) -> Option<usize> {
    if i >= end || chars[i] != '[' {
        return None;
    }
    let mut j = i + 1;
    while j < end && chars[j] != ']' && !chars[j].is_whitespace() {
        j += 1;
    }
    if j >= end || chars[j] != ']' {
        return None;
    }
    let inner: String = chars[i + 1..j].iter().collect();
    // a token followed by `(` or `:` is a link or definition, not a bare marker
    if j + 1 < end && matches!(chars[j + 1], '(' | ':') {
        return None;
    }
    let ok = (!inner.is_empty() && inner.chars().all(|c| c.is_ascii_digit()))
        || is_range(&inner)
        || (inner.starts_with('^') && inner.len() > 1);
    if ok {
        Some(j + 1)
    } else {
        None
    }
}

fn is_range(inner: &str) -> bool {
    match inner.split_once('-') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.chars().all(|c| c.is_ascii_digit())
                && b.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}
