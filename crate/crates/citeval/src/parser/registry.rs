//! Registry building: deduplicates resolved markers into the citation list.

use std::collections::HashMap;

use crate::types::Citation;

use super::resolve::ResolvedMarker;

/// One Citation per distinct normalized URL, ids dense from 1 in
/// first-appearance order. Returns the registry plus, for each input marker,
/// the citation id it maps to (`None` for unresolved markers).
pub fn build_registry(resolved: &[ResolvedMarker]) -> (Vec<Citation>, Vec<Option<u64>>) {
    let mut citations: Vec<Citation> = Vec::new();
    let mut by_url: HashMap<String, u64> = HashMap::new();
    let mut marker_ids = Vec::with_capacity(resolved.len());

    for rm in resolved {
        let Some(url) = &rm.url else {
            marker_ids.push(None);
            continue;
        };
        let id = match by_url.get(url) {
            Some(&id) => id,
            None => {
                let id = citations.len() as u64 + 1;
                by_url.insert(url.clone(), id);
                citations.push(Citation {
                    id,
                    url: url.clone(),
                    raw_labels: Vec::new(),
                    url_content: None,
                    fetch_outcome: None,
                });
                id
            }
        };
        let citation = &mut citations[(id - 1) as usize];
        if !citation.raw_labels.iter().any(|l| l == &rm.marker.label) {
            citation.raw_labels.push(rm.marker.label.clone());
        }
        marker_ids.push(Some(id));
    }

    (citations, marker_ids)
}
