//! Label resolution: maps extracted markers to URLs.
//!
//! Numbered labels resolve against link reference definitions first, then
//! against ordered-list items under a references-style heading. Footnote
//! labels resolve to the first URL in the matching definition. Inline links
//! and autolinks are self-resolving.

use std::collections::{BTreeSet, HashMap};

use crate::diag::Diagnostic;
use crate::types::{CitationMarker, MarkerKind, Span};

use super::blocks::{Ast, BlockKind};
use super::inline::scan_markers;
use super::urlnorm::normalize_url;

/// Heading titles that introduce a bibliography-style list.
pub const REFERENCE_HEADINGS: &[&str] = &["references", "sources", "citations", "bibliography"];

/// A marker plus the normalized URL it resolved to, if any.
#[derive(Debug, Clone)]
pub struct ResolvedMarker {
    pub marker: CitationMarker,
    pub url: Option<String>,
}

/// Bibliography data mined from the block tree.
#[derive(Debug, Default)]
pub struct ReferenceIndex {
    /// Block indices of reference-list entries; these are resolution data,
    /// not prose, and are excluded from marker extraction and attribution.
    pub entry_blocks: BTreeSet<usize>,
    /// Ordinal of a reference-list item -> raw URL of its single link.
    pub by_ordinal: HashMap<u64, String>,
    /// `[label]: url` definitions, first definition wins.
    pub definitions: HashMap<String, String>,
    /// Footnote label (no caret) -> first raw URL in the definition body.
    pub footnotes: HashMap<String, String>,
}

/// Walks the block tree collecting definitions, footnote URLs, and
/// references-section list entries.
pub fn build_reference_index(ast: &Ast, masked: &[char]) -> ReferenceIndex {
    let mut index = ReferenceIndex::default();
    let mut in_reference_section = false;

    for (bi, block) in ast.blocks.iter().enumerate() {
        match &block.kind {
            BlockKind::Heading { text, .. } => {
                let title = text.trim().trim_end_matches(':').trim().to_lowercase();
                in_reference_section = REFERENCE_HEADINGS.contains(&title.as_str());
            }
            BlockKind::RefDef { label, url } => {
                index
                    .definitions
                    .entry(label.clone())
                    .or_insert_with(|| url.clone());
            }
            BlockKind::FootnoteDef { label } => {
                if let Some(url) = first_url_in(masked, block.content) {
                    index.footnotes.entry(label.clone()).or_insert(url);
                }
            }
            BlockKind::ListItem { ordinal: Some(n) } if in_reference_section => {
                index.entry_blocks.insert(bi);
                if let Some(url) = single_link_url(masked, block.content) {
                    index.by_ordinal.entry(*n).or_insert(url);
                }
            }
            _ => {}
        }
    }
    index
}

/// Resolves each marker to a normalized URL or records why it could not be.
pub fn resolve_references(
    markers: &[CitationMarker],
    index: &ReferenceIndex,
) -> (Vec<ResolvedMarker>, Vec<Diagnostic>) {
    let mut resolved = Vec::with_capacity(markers.len());
    let mut diagnostics = Vec::new();

    for marker in markers {
        let raw_url = match marker.kind {
            MarkerKind::InlineLink | MarkerKind::Autolink => marker.url.clone(),
            MarkerKind::Numbered => lookup_numbered(&marker.label, index),
            MarkerKind::Footnote => marker
                .label
                .strip_prefix('^')
                .and_then(|l| index.footnotes.get(l).cloned()),
        };

        let url = match raw_url {
            Some(raw) => match normalize_url(&raw) {
                Ok(u) => Some(u),
                Err(e) => {
                    diagnostics.push(Diagnostic::parse(
                        "invalid-url",
                        format!("marker `{}` resolved to unusable URL: {e}", marker.label),
                        Some(marker.span),
                    ));
                    None
                }
            },
            None => {
                diagnostics.push(Diagnostic::parse(
                    "unresolved-label",
                    format!("no definition found for marker `{}`", marker.label),
                    Some(marker.span),
                ));
                None
            }
        };

        resolved.push(ResolvedMarker {
            marker: marker.clone(),
            url,
        });
    }
    (resolved, diagnostics)
}

fn lookup_numbered(label: &str, index: &ReferenceIndex) -> Option<String> {
    if let Some(url) = index.definitions.get(label) {
        return Some(url.clone());
    }
    let n: u64 = label.parse().ok()?;
    index.by_ordinal.get(&n).cloned()
}

/// First URL in a span: a link or autolink marker, or a bare http(s) token.
fn first_url_in(masked: &[char], content: Span) -> Option<String> {
    let scan = scan_markers(masked, content);
    if let Some(url) = scan.markers.iter().find_map(|m| m.url.clone()) {
        return Some(url);
    }
    bare_url(masked, content)
}

/// URL of the item's single link; `None` when the item has zero or several.
fn single_link_url(masked: &[char], content: Span) -> Option<String> {
    let scan = scan_markers(masked, content);
    let links: Vec<&str> = scan
        .markers
        .iter()
        .filter_map(|m| m.url.as_deref())
        .collect();
    match links[..] {
        [only] => Some(only.to_string()),
        _ => bare_url_single(masked, content),
    }
}

fn bare_url(masked: &[char], content: Span) -> Option<String> {
    bare_urls(masked, content).into_iter().next()
}

fn bare_url_single(masked: &[char], content: Span) -> Option<String> {
    let urls = bare_urls(masked, content);
    match urls.len() {
        1 => urls.into_iter().next(),
        _ => None,
    }
}

fn bare_urls(masked: &[char], content: Span) -> Vec<String> {
    let text: String = masked[content.start..content.end].iter().collect();
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let token = token.trim_start_matches(['(', '<', '[']);
        let token = token.trim_end_matches([')', '>', ']', '.', ',', ';']);
        if token.starts_with("http://") || token.starts_with("https://") {
            out.push(token.to_string());
        }
    }
    out
}
