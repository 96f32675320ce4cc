//! Shared test helpers.

/// Minimal XML well-formedness check: balanced, properly nested tags and
/// quoted attribute values. Enough to catch malformed SVG output.
pub fn assert_well_formed_xml(text: &str) {
    let bytes = text.as_bytes();
    let mut stack: Vec<String> = Vec::new();
    let mut pos = 0usize;
    let mut seen_element = false;
    while pos < bytes.len() {
        match bytes[pos] {
            b'<' => {
                let close = find_tag_end(text, pos).unwrap_or_else(|| {
                    panic!("unterminated tag at byte {pos}");
                });
                let tag = &text[pos + 1..close];
                if let Some(rest) = tag.strip_prefix('?') {
                    assert!(rest.ends_with('?'), "malformed declaration: {tag}");
                } else if tag.starts_with("!--") {
                    assert!(tag.ends_with("--"), "malformed comment: {tag}");
                } else if let Some(name) = tag.strip_prefix('/') {
                    let open = stack.pop().unwrap_or_else(|| {
                        panic!("closing </{name}> with nothing open");
                    });
                    assert_eq!(open, name.trim(), "mismatched closing tag");
                } else {
                    let self_closing = tag.ends_with('/');
                    let body = tag.trim_end_matches('/');
                    let name = body
                        .split_whitespace()
                        .next()
                        .unwrap_or_else(|| panic!("empty tag at byte {pos}"));
                    assert!(
                        name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-'),
                        "bad tag name {name:?}"
                    );
                    seen_element = true;
                    if !self_closing {
                        stack.push(name.to_string());
                    }
                }
                pos = close + 1;
            }
            b'>' => panic!("stray '>' at byte {pos}"),
            _ => pos += 1,
        }
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    assert!(seen_element, "no elements found");
}

/// Position of the '>' ending the tag opened at `start`, skipping quoted
/// attribute values.
fn find_tag_end(text: &str, start: usize) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut in_quote = false;
    for (off, &b) in bytes[start..].iter().enumerate() {
        match b {
            b'"' => in_quote = !in_quote,
            b'>' if !in_quote => return Some(start + off),
            _ => {}
        }
    }
    None
}
