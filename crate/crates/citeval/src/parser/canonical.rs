//! Text canonicalization: the first parse stage.

/// Normalizes line endings to LF and strips trailing whitespace per line.
///
/// Tabs inside lines are preserved; only trailing spaces and tabs are
/// removed. Total and idempotent.
pub fn canonicalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut line = String::new();
    let mut chars = raw.chars().peekable();
    loop {
        match chars.next() {
            Some('\r') => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
                flush_line(&mut out, &mut line, true);
            }
            Some('\n') => flush_line(&mut out, &mut line, true),
            Some(c) => line.push(c),
            None => {
                if !line.is_empty() {
                    flush_line(&mut out, &mut line, false);
                }
                break;
            }
        }
    }
    out
}

fn flush_line(out: &mut String, line: &mut String, newline: bool) {
    let trimmed = line.trim_end_matches([' ', '\t']);
    out.push_str(trimmed);
    if newline {
        out.push('\n');
    }
    line.clear();
}
