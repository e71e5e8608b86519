//! Body-to-text extraction and truncation.

/// Elements whose entire subtree is invisible boilerplate.
const SKIP_TAGS: &[&str] = &[
    "script", "style", "nav", "noscript", "head", "svg", "template", "iframe",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub text: String,
    pub notes: Vec<String>,
}

/// Converts a response body to judge-ready text.
///
/// HTML becomes visible text with script/style/nav content removed and
/// whitespace collapsed; plain text and Markdown pass through; PDF and other
/// binary types yield empty text with a `binary-content` note. Undecodable
/// bytes are replaced and flagged `lossy-decode`.
pub fn extract_text(body: &[u8], content_type: Option<&str>) -> Extracted {
    let mut notes = Vec::new();
    let ct = content_type.unwrap_or("").to_lowercase();

    if is_binary_type(&ct) {
        notes.push("binary-content".to_string());
        return Extracted {
            text: String::new(),
            notes,
        };
    }

    let decoded = String::from_utf8_lossy(body);
    if decoded.contains('\u{FFFD}') {
        notes.push("lossy-decode".to_string());
    }

    let looks_html = ct.contains("html")
        || (ct.is_empty() && {
            let head: String = decoded.chars().take(512).collect::<String>().to_lowercase();
            head.contains("<html") || head.contains("<!doctype html")
        });

    let text = if looks_html {
        html_to_text(&decoded)
    } else {
        decoded.into_owned()
    };

    if text.is_empty() {
        notes.push("empty-content".to_string());
    }
    Extracted { text, notes }
}

fn is_binary_type(ct: &str) -> bool {
    ct.contains("pdf")
        || ct.starts_with("image/")
        || ct.starts_with("audio/")
        || ct.starts_with("video/")
        || ct.contains("octet-stream")
        || ct.contains("zip")
        || ct.contains("msword")
}

/// Returns the first `limit` characters; always a prefix of the input.
pub fn truncate(text: &str, limit: usize) -> &str {
    match text.char_indices().nth(limit) {
        Some((byte_idx, _)) => &text[..byte_idx],
        None => text,
    }
}

/// Tag-stripping text extraction with subtree skipping and entity decoding.
pub fn html_to_text(html: &str) -> String {
    let chars: Vec<char> = html.chars().collect();
    let mut out = String::with_capacity(html.len() / 2);
    let mut i = 0;

    while i < chars.len() {
        match chars[i] {
            '<' => {
                if starts_with(&chars, i, "<!--") {
                    i = find_seq(&chars, i + 4, "-->").map_or(chars.len(), |p| p + 3);
                    continue;
                }
                // declarations like <!DOCTYPE html>
                if chars.get(i + 1) == Some(&'!') {
                    i = (i + 2..chars.len())
                        .find(|&k| chars[k] == '>')
                        .map_or(chars.len(), |p| p + 1);
                    out.push(' ');
                    continue;
                }
                match read_tag(&chars, i) {
                    Some(tag) => {
                        if !tag.closing && SKIP_TAGS.contains(&tag.name.as_str()) {
                            i = skip_subtree(&chars, tag.end, &tag.name);
                        } else {
                            out.push(' ');
                            i = tag.end;
                        }
                    }
                    None => {
                        out.push('<');
                        i += 1;
                    }
                }
            }
            '&' => {
                let (decoded, next) = decode_entity(&chars, i);
                out.push_str(&decoded);
                i = next;
            }
            c => {
                out.push(c);
                i += 1;
            }
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

struct Tag {
    name: String,
    closing: bool,
    /// Offset just past `>`.
    end: usize,
}

fn read_tag(chars: &[char], at: usize) -> Option<Tag> {
    let mut i = at + 1;
    let closing = chars.get(i) == Some(&'/');
    if closing {
        i += 1;
    }
    let name_start = i;
    while i < chars.len() && (chars[i].is_ascii_alphanumeric()) {
        i += 1;
    }
    if i == name_start {
        return None;
    }
    let name: String = chars[name_start..i].iter().collect::<String>().to_lowercase();
    // advance to `>`, honoring quoted attribute values
    let mut quote: Option<char> = None;
    while i < chars.len() {
        let c = chars[i];
        match quote {
            Some(q) => {
                if c == q {
                    quote = None;
                }
            }
            None => match c {
                '"' | '\'' => quote = Some(c),
                '>' => {
                    return Some(Tag {
                        name,
                        closing,
                        end: i + 1,
                    })
                }
                _ => {}
            },
        }
        i += 1;
    }
    None
}

/// Position past the matching close tag, with nesting of the same element.
fn skip_subtree(chars: &[char], mut i: usize, name: &str) -> usize {
    let mut depth = 1;
    while i < chars.len() {
        if chars[i] == '<' {
            if let Some(tag) = read_tag(chars, i) {
                if tag.name == name {
                    if tag.closing {
                        depth -= 1;
                        if depth == 0 {
                            return tag.end;
                        }
                    } else {
                        depth += 1;
                    }
                }
                i = tag.end;
                continue;
            }
        }
        i += 1;
    }
    chars.len()
}

fn starts_with(chars: &[char], at: usize, needle: &str) -> bool {
    needle
        .chars()
        .enumerate()
        .all(|(k, c)| chars.get(at + k) == Some(&c))
}

fn find_seq(chars: &[char], from: usize, needle: &str) -> Option<usize> {
    let n: Vec<char> = needle.chars().collect();
    if chars.len() < n.len() {
        return None;
    }
    (from..=chars.len() - n.len()).find(|&i| chars[i..i + n.len()] == n[..])
}

fn decode_entity(chars: &[char], at: usize) -> (String, usize) {
    let end = (at + 1..chars.len().min(at + 12))
        .find(|&k| chars[k] == ';')
        .unwrap_or(0);
    if end == 0 {
        return ("&".to_string(), at + 1);
    }
    let entity: String = chars[at + 1..end].iter().collect();
    let decoded = match entity.as_str() {
        "amp" => Some("&".to_string()),
        "lt" => Some("<".to_string()),
        "gt" => Some(">".to_string()),
        "quot" => Some("\"".to_string()),
        "apos" => Some("'".to_string()),
        "nbsp" => Some(" ".to_string()),
        _ => {
            if let Some(num) = entity.strip_prefix("#x").or_else(|| entity.strip_prefix("#X")) {
                u32::from_str_radix(num, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .map(String::from)
            } else if let Some(num) = entity.strip_prefix('#') {
                num.parse::<u32>()
                    .ok()
                    .and_then(char::from_u32)
                    .map(String::from)
            } else {
                None
            }
        }
    };
    match decoded {
        Some(s) => (s, end + 1),
        None => ("&".to_string(), at + 1),
    }
}
