//! Backward attribution: assigns citation ids to sentences within one block.
//!
//! A sentence carrying markers cites those markers' sources. A marker at a
//! sentence's end additionally propagates backward through the contiguous
//! run of immediately-preceding sentences that carry no marker of their own.
//! Propagation never crosses block boundaries; mid-sentence markers do not
//! propagate.

use std::collections::BTreeMap;

use crate::types::{CitationMarker, MarkerKind, Span};

#[derive(Debug, Clone, PartialEq)]
pub struct PendingAttribution {
    pub span: Span,
    pub citation_ids: Vec<u64>,
    pub text_nocite: String,
}

/// Attributes one block's sentences given its markers and their registry ids.
pub fn backward_attribute(
    canonical: &[char],
    sentences: &[Span],
    markers: &[(CitationMarker, Option<u64>)],
) -> Vec<PendingAttribution> {
    let n = sentences.len();
    let mut own_markers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (mi, (marker, _)) in markers.iter().enumerate() {
        if let Some(si) = sentences.iter().position(|s| {
            marker.span.start >= s.start && marker.span.start < s.end
        }) {
            own_markers[si].push(mi);
        }
    }

    let mut ids: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut final_ids: Vec<Vec<u64>> = vec![Vec::new(); n];
    for si in 0..n {
        for &mi in &own_markers[si] {
            let (marker, cid) = &markers[mi];
            let Some(cid) = cid else { continue };
            ids[si].push(*cid);
            if is_sentence_final(canonical, sentences[si], marker, &own_markers[si], markers) {
                final_ids[si].push(*cid);
            }
        }
    }

    // backward propagation from each cited sentence through uncited ones
    for si in 0..n {
        if final_ids[si].is_empty() {
            continue;
        }
        let mut j = si;
        while j > 0 && own_markers[j - 1].is_empty() {
            j -= 1;
            ids[j].extend(final_ids[si].iter().copied());
        }
    }

    let mut out = Vec::new();
    for si in 0..n {
        if ids[si].is_empty() {
            continue;
        }
        let mut cids = ids[si].clone();
        cids.sort_unstable();
        cids.dedup();
        let text = text_without_markers(canonical, sentences[si], &own_markers[si], markers);
        out.push(PendingAttribution {
            span: sentences[si],
            citation_ids: cids,
            text_nocite: text,
        });
    }
    out
}

/// A marker is sentence-final when everything after it inside the sentence is
/// whitespace, punctuation, or other markers.
fn is_sentence_final(
    chars: &[char],
    sentence: Span,
    marker: &CitationMarker,
    sentence_markers: &[usize],
    all: &[(CitationMarker, Option<u64>)],
) -> bool {
    let mut pos = marker.span.end;
    'outer: while pos < sentence.end {
        let c = chars[pos];
        if c.is_whitespace() || matches!(c, '.' | '!' | '?' | ',' | ';' | ')' | '"' | '\'') {
            pos += 1;
            continue;
        }
        for &mi in sentence_markers {
            let other = &all[mi].0.span;
            if pos >= other.start && pos < other.end {
                pos = other.end;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Sentence text with marker syntax removed and whitespace collapsed.
/// Inline links keep their anchor text; other marker kinds are deleted.
fn text_without_markers(
    chars: &[char],
    sentence: Span,
    sentence_markers: &[usize],
    all: &[(CitationMarker, Option<u64>)],
) -> String {
    // expanded range markers share one span; dedup by span
    let mut replacements: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for &mi in sentence_markers {
        let (marker, _) = &all[mi];
        let replacement = match marker.kind {
            MarkerKind::InlineLink => marker.label.clone(),
            _ => String::new(),
        };
        replacements.insert((marker.span.start, marker.span.end), replacement);
    }

    let mut raw = String::new();
    let mut pos = sentence.start;
    for (&(start, end), replacement) in &replacements {
        if start < pos {
            continue;
        }
        raw.extend(&chars[pos..start.min(sentence.end)]);
        raw.push_str(replacement);
        pos = end.min(sentence.end);
    }
    if pos < sentence.end {
        raw.extend(&chars[pos..sentence.end]);
    }
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}
