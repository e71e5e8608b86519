//! Block structure: splits masked canonical text into paragraphs, headings,
//! list items, reference definitions, footnote definitions and code blocks,
//! each carrying its source span.
//!
//! Markdown has no fatal parse errors; anything unrecognized degrades to
//! paragraph text.

use crate::types::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    Paragraph,
    Heading { level: u8, text: String },
    /// `ordinal` carries the literal number of an ordered-list item.
    ListItem { ordinal: Option<u64> },
    /// `[label]: url` link reference definition.
    RefDef { label: String, url: String },
    /// `[^label]: ...` footnote definition; label stored without the caret.
    FootnoteDef { label: String },
    CodeBlock,
    Break,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub kind: BlockKind,
    /// Full construct, fence markers and list prefixes included.
    pub span: Span,
    /// Inline-text region scanned for markers and sentences.
    pub content: Span,
}

impl Block {
    pub fn is_prose(&self) -> bool {
        matches!(
            self.kind,
            BlockKind::Paragraph | BlockKind::ListItem { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ast {
    pub blocks: Vec<Block>,
}

/// Builds the block tree from masked canonical text.
pub fn build_ast(masked: &[char]) -> Ast {
    let lines = super::mask::line_spans(masked);
    let mut blocks = Vec::new();
    let mut i = 0;

    while i < lines.len() {
        let line = lines[i];
        let text = slice(masked, line);

        if text.trim().is_empty() {
            i += 1;
            continue;
        }

        if let Some((marker, len)) = fence_open(&text) {
            let mut j = i + 1;
            while j < lines.len() {
                let lt = slice(masked, lines[j]);
                if fence_close(&lt, marker, len) {
                    break;
                }
                j += 1;
            }
            let end_line = if j < lines.len() { j } else { lines.len() - 1 };
            blocks.push(Block {
                kind: BlockKind::CodeBlock,
                span: Span::new(line.start, lines[end_line].end),
                content: Span::new(line.start, line.start),
            });
            i = end_line + 1;
            continue;
        }

        if let Some((level, text_span)) = heading(&text, line) {
            let heading_text = slice(masked, text_span).trim().to_string();
            blocks.push(Block {
                kind: BlockKind::Heading {
                    level,
                    text: heading_text,
                },
                span: line,
                content: text_span,
            });
            i += 1;
            continue;
        }

        if thematic_break(&text) {
            blocks.push(Block {
                kind: BlockKind::Break,
                span: line,
                content: Span::new(line.start, line.start),
            });
            i += 1;
            continue;
        }

        if let Some((label, url)) = ref_definition(&text) {
            if let Some(stripped) = label.strip_prefix('^') {
                // footnote definition; content may continue on indented lines
                let colon = text.find(':').unwrap();
                let content_start = line.start + text[..colon + 1].chars().count();
                let mut j = i;
                while j + 1 < lines.len() {
                    let lt = slice(masked, lines[j + 1]);
                    if lt.starts_with("  ") && !lt.trim().is_empty() {
                        j += 1;
                    } else {
                        break;
                    }
                }
                blocks.push(Block {
                    kind: BlockKind::FootnoteDef {
                        label: stripped.to_string(),
                    },
                    span: Span::new(line.start, lines[j].end),
                    content: Span::new(content_start, lines[j].end),
                });
                i = j + 1;
            } else {
                blocks.push(Block {
                    kind: BlockKind::RefDef { label, url },
                    span: line,
                    content: Span::new(line.start, line.start),
                });
                i += 1;
            }
            continue;
        }

        if let Some((ordinal, offset)) = list_item_prefix(&text) {
            let content_start = line.start + offset;
            let mut j = i;
            while j + 1 < lines.len() && continues_block(&slice(masked, lines[j + 1])) {
                j += 1;
            }
            blocks.push(Block {
                kind: BlockKind::ListItem { ordinal },
                span: Span::new(line.start, lines[j].end),
                content: Span::new(content_start, lines[j].end),
            });
            i = j + 1;
            continue;
        }

        // paragraph: accumulate until blank line or a new block construct
        let mut j = i;
        while j + 1 < lines.len() && continues_block(&slice(masked, lines[j + 1])) {
            j += 1;
        }
        let span = Span::new(line.start, lines[j].end);
        blocks.push(Block {
            kind: BlockKind::Paragraph,
            span,
            content: span,
        });
        i = j + 1;
    }

    Ast { blocks }
}

fn slice(chars: &[char], span: Span) -> String {
    chars[span.start..span.end].iter().collect()
}

fn fence_open(line: &str) -> Option<(char, usize)> {
    let trimmed = line.trim_start_matches(' ');
    if line.len() - trimmed.len() > 3 {
        return None;
    }
    let first = trimmed.chars().next()?;
    if first != '`' && first != '~' {
        return None;
    }
    let run = trimmed.chars().take_while(|&c| c == first).count();
    if run < 3 {
        return None;
    }
    if first == '`' && trimmed[run..].contains('`') {
        return None;
    }
    Some((first, run))
}

fn fence_close(line: &str, marker: char, len: usize) -> bool {
    let trimmed = line.trim_start_matches(' ');
    if line.len() - trimmed.len() > 3 {
        return false;
    }
    let run = trimmed.chars().take_while(|&c| c == marker).count();
    run >= len && trimmed[run..].trim().is_empty()
}

/// ATX heading. Returns level and the span of the heading text within `line`.
fn heading(text: &str, line: Span) -> Option<(u8, Span)> {
    let trimmed = text.trim_start_matches(' ');
    let indent = text.len() - trimmed.len();
    if indent > 3 {
        return None;
    }
    let hashes = trimmed.chars().take_while(|&c| c == '#').count();
    if hashes == 0 || hashes > 6 {
        return None;
    }
    let rest = &trimmed[hashes..];
    if !rest.is_empty() && !rest.starts_with(' ') {
        return None;
    }
    let body = rest.trim_start_matches(' ');
    let body = body.trim_end_matches(' ').trim_end_matches('#').trim_end();
    let text_start = line.start + indent + hashes + (rest.len() - rest.trim_start_matches(' ').len());
    Some((hashes as u8, Span::new(text_start, text_start + body.chars().count())))
}

fn thematic_break(text: &str) -> bool {
    let trimmed = text.trim();
    if trimmed.len() < 3 {
        return false;
    }
    for marker in ['-', '*', '_'] {
        let stripped: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
        if stripped.len() >= 3 && stripped.chars().all(|c| c == marker) {
            return true;
        }
    }
    false
}

/// `[label]: destination` — returns (label, destination). The destination may
/// be wrapped in angle brackets.
fn ref_definition(text: &str) -> Option<(String, String)> {
    let trimmed = text.trim_start_matches(' ');
    if text.len() - trimmed.len() > 3 || !trimmed.starts_with('[') {
        return None;
    }
    let close = trimmed.find(']')?;
    let label = &trimmed[1..close];
    if label.is_empty() || label.contains('[') {
        return None;
    }
    let after = &trimmed[close + 1..];
    let dest = after.strip_prefix(':')?.trim_start();
    let url = dest.split_whitespace().next()?;
    let url = url.strip_prefix('<').unwrap_or(url);
    let url = url.strip_suffix('>').unwrap_or(url);
    if url.is_empty() {
        return None;
    }
    Some((label.to_string(), url.to_string()))
}

/// Returns (ordinal for ordered items, char offset of the content within the
/// line text).
fn list_item_prefix(text: &str) -> Option<(Option<u64>, usize)> {
    let trimmed = text.trim_start_matches(' ');
    let indent = text.len() - trimmed.len();
    if indent > 3 {
        return None;
    }
    let mut it = trimmed.chars();
    let first = it.next()?;
    if matches!(first, '-' | '*' | '+') {
        let rest = &trimmed[1..];
        if rest.starts_with(' ') {
            let spaces = rest.len() - rest.trim_start_matches(' ').len();
            return Some((None, indent + 1 + spaces));
        }
        return None;
    }
    if first.is_ascii_digit() {
        let digits: String = trimmed.chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.len() > 9 {
            return None;
        }
        let after = &trimmed[digits.len()..];
        if let Some(rest) = after.strip_prefix(['.', ')']) {
            if rest.starts_with(' ') {
                let spaces = rest.len() - rest.trim_start_matches(' ').len();
                let ordinal = digits.parse().ok()?;
                return Some((Some(ordinal), indent + digits.len() + 1 + spaces));
            }
        }
    }
    None
}

/// Whether a line continues the current paragraph or list item.
fn continues_block(line: &str) -> bool {
    !line.trim().is_empty()
        && fence_open(line).is_none()
        && heading(line, Span::new(0, 0)).is_none()
        && !thematic_break(line)
        && ref_definition(line).is_none()
        && list_item_prefix(line).is_none()
}
