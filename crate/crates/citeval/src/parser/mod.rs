//! Markdown parsing pipeline: raw report text in, attribution document out.
//!
//! Stages: canonicalize -> mask code -> block tree -> marker scan ->
//! label resolution -> registry -> sentence segmentation -> backward
//! attribution. Deterministic, no network, no inference; parsing never
//! fails — pathological input degrades to an empty document plus
//! diagnostics.

mod attribute;
mod blocks;
mod canonical;
mod inline;
mod mask;
mod registry;
mod resolve;
mod segment;
mod urlnorm;

pub use attribute::backward_attribute;
pub use blocks::{build_ast, Ast, Block, BlockKind};
pub use canonical::canonicalize;
pub use inline::{scan_markers, ScanOutcome};
pub use mask::{mask_code, MaskOutcome};
pub use registry::build_registry;
pub use resolve::{
    build_reference_index, resolve_references, ReferenceIndex, ResolvedMarker,
    REFERENCE_HEADINGS,
};
pub use segment::{segment_sentences, ABBREVIATIONS};
pub use urlnorm::{normalize_url, UrlError};

use crate::diag::Diagnostic;
use crate::types::{
    Attribution, AttributionDocument, CitationMarker, SourceDocument, Span, SCHEMA_VERSION,
};

/// Parses a Markdown report into its attribution document. Total: any input
/// yields a document, possibly empty, with diagnostics explaining what was
/// skipped or could not be resolved.
pub fn parse_document(raw: &str, origin: &str) -> AttributionDocument {
    let canonical_text = canonicalize(raw);
    let canonical: Vec<char> = canonical_text.chars().collect();

    let mut mask = mask_code(&canonical_text);
    let ast = build_ast(&mask.masked);
    let index = build_reference_index(&ast, &mask.masked);

    let mut diagnostics = std::mem::take(&mut mask.diagnostics);

    // marker scan over prose blocks, skipping bibliography entries
    let mut block_markers: Vec<(usize, Vec<CitationMarker>)> = Vec::new();
    for (bi, block) in ast.blocks.iter().enumerate() {
        if !block.is_prose() || index.entry_blocks.contains(&bi) {
            continue;
        }
        let mut scan = scan_markers(&mask.masked, block.content);
        diagnostics.append(&mut scan.diagnostics);
        block_markers.push((bi, scan.markers));
    }

    // resolve all markers in document order
    let flat: Vec<CitationMarker> = block_markers
        .iter()
        .flat_map(|(_, ms)| ms.iter().cloned())
        .collect();
    let (resolved, mut resolve_diags) = resolve_references(&flat, &index);
    diagnostics.append(&mut resolve_diags);

    let (citations, marker_cids) = build_registry(&resolved);

    // segment and attribute per block
    let mut attributions = Vec::new();
    let mut cursor = 0;
    for (bi, markers) in &block_markers {
        let block = &ast.blocks[*bi];
        let with_ids: Vec<(CitationMarker, Option<u64>)> = markers
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), marker_cids[cursor + k]))
            .collect();
        cursor += markers.len();

        let sentences = segment_sentences(&mask.masked, block.content);
        for pending in backward_attribute(&canonical, &sentences, &with_ids) {
            if pending.text_nocite.is_empty() {
                diagnostics.push(Diagnostic::parse(
                    "empty-claim",
                    "sentence consists only of citation markers; skipped",
                    Some(pending.span),
                ));
                continue;
            }
            attributions.push(Attribution {
                id: attributions.len() as u64 + 1,
                text_nocite: pending.text_nocite,
                span: pending.span,
                citation_ids: pending.citation_ids,
                passage_id: *bi as u64 + 1,
            });
        }
    }

    AttributionDocument {
        schema: SCHEMA_VERSION,
        citations,
        attributions,
        evals: Vec::new(),
        diagnostics,
        source: SourceDocument {
            raw_text: raw.to_string(),
            canonical_text,
            origin: origin.to_string(),
        },
    }
}

/// Slice of canonical text covered by a span, for tests and tooling.
pub fn span_text(doc: &AttributionDocument, span: Span) -> String {
    doc.source
        .canonical_text
        .chars()
        .skip(span.start)
        .take(span.end - span.start)
        .collect()
}
