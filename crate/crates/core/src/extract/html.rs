//! Lenient HTML tokenization and charset handling.
//!
//! This is not a conforming HTML5 parser; it is a tolerant tokenizer good
//! enough to walk tag soup, separate markup from text, and account for how
//! many input characters each side consumed.

/// One lexical event. `raw` spans the full source slice of the token so
/// callers can measure markup length.
#[derive(Debug, PartialEq)]
pub enum Token<'a> {
    StartTag {
        name: String,
        raw: &'a str,
        self_closing: bool,
    },
    EndTag {
        name: String,
        raw: &'a str,
    },
    Text(&'a str),
    Comment(&'a str),
    Declaration(&'a str),
}

/// Elements whose contents are raw text up to the matching close tag.
const RAW_TEXT_ELEMENTS: &[&str] = &["script", "style", "textarea", "title"];

pub fn tokenize(html: &str) -> Vec<Token<'_>> {
    let bytes = html.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut text_start = 0;

    while pos < bytes.len() {
        if bytes[pos] != b'<' {
            pos += 1;
            continue;
        }
        let rest = &bytes[pos..];
        if rest.starts_with(b"<!--") {
            flush_text(html, text_start, pos, &mut tokens);
            let end = find_sub(bytes, pos + 4, b"-->").map(|i| i + 3).unwrap_or(bytes.len());
            tokens.push(Token::Comment(&html[pos..end]));
            pos = end;
            text_start = pos;
        } else if rest.starts_with(b"<!") || rest.starts_with(b"<?") {
            flush_text(html, text_start, pos, &mut tokens);
            let end = find_byte(bytes, pos + 2, b'>').map(|i| i + 1).unwrap_or(bytes.len());
            tokens.push(Token::Declaration(&html[pos..end]));
            pos = end;
            text_start = pos;
        } else if rest.len() > 1 && (rest[1].is_ascii_alphabetic() || rest[1] == b'/') {
            let closing = rest[1] == b'/';
            if closing && !(rest.len() > 2 && rest[2].is_ascii_alphabetic()) {
                pos += 1; // "</" not followed by a letter is text
                continue;
            }
            flush_text(html, text_start, pos, &mut tokens);
            let end = tag_end(bytes, pos).unwrap_or(bytes.len());
            let raw = &html[pos..end];
            let name = tag_name(raw, closing);
            if closing {
                tokens.push(Token::EndTag { name, raw });
            } else {
                let self_closing = raw.trim_end_matches('>').ends_with('/');
                let is_raw_text = RAW_TEXT_ELEMENTS.contains(&name.as_str());
                tokens.push(Token::StartTag {
                    name: name.clone(),
                    raw,
                    self_closing,
                });
                if is_raw_text && !self_closing {
                    // Swallow everything to the matching close tag.
                    let close = format!("</{name}");
                    let content_end = find_sub_ci(bytes, end, close.as_bytes()).unwrap_or(bytes.len());
                    if content_end > end {
                        tokens.push(Token::Comment(&html[end..content_end]));
                    }
                    pos = content_end;
                    text_start = pos;
                    continue;
                }
            }
            pos = end;
            text_start = pos;
        } else {
            pos += 1; // lone '<' is text
        }
    }
    flush_text(html, text_start, bytes.len(), &mut tokens);
    tokens
}

fn flush_text<'a>(html: &'a str, start: usize, end: usize, tokens: &mut Vec<Token<'a>>) {
    if end > start {
        tokens.push(Token::Text(&html[start..end]));
    }
}

/// Find the '>' terminating a tag, skipping quoted attribute values.
fn tag_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut quote: Option<u8> = None;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        match quote {
            Some(q) => {
                if b == q {
                    quote = None;
                }
            }
            None => match b {
                b'"' | b'\'' => quote = Some(b),
                b'>' => return Some(i + 1),
                _ => {}
            },
        }
    }
    None
}

fn tag_name(raw: &str, closing: bool) -> String {
    let inner = raw.trim_start_matches('<').trim_start_matches('/');
    let skip = if closing { 0 } else { 0 };
    inner[skip..]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

fn find_byte(bytes: &[u8], from: usize, needle: u8) -> Option<usize> {
    bytes[from.min(bytes.len())..].iter().position(|&b| b == needle).map(|i| i + from)
}

fn find_sub(bytes: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    let from = from.min(bytes.len());
    bytes[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|i| i + from)
}

fn find_sub_ci(bytes: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    let from = from.min(bytes.len());
    if needle.is_empty() || bytes.len() < needle.len() {
        return None;
    }
    bytes[from..]
        .windows(needle.len())
        .position(|w| w.eq_ignore_ascii_case(needle))
        .map(|i| i + from)
}

/// Decode the common named entities and numeric character references.
/// Unknown entities pass through untouched.
pub fn decode_entities(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c != '&' {
            out.push(c);
            continue;
        }
        let rest = &text[i + 1..];
        let semi = rest.char_indices().take(12).find(|&(_, c)| c == ';').map(|(j, _)| j);
        let Some(semi) = semi else {
            out.push('&');
            continue;
        };
        let entity = &rest[..semi];
        let decoded = match entity {
            "amp" => Some('&'),
            "lt" => Some('<'),
            "gt" => Some('>'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            "nbsp" => Some('\u{a0}'),
            _ => {
                if let Some(num) = entity.strip_prefix("#x").or_else(|| entity.strip_prefix("#X")) {
                    u32::from_str_radix(num, 16).ok().and_then(char::from_u32)
                } else if let Some(num) = entity.strip_prefix('#') {
                    num.parse::<u32>().ok().and_then(char::from_u32)
                } else {
                    None
                }
            }
        };
        match decoded {
            Some(d) => {
                out.push(d);
                for _ in 0..=semi {
                    chars.next();
                }
            }
            None => out.push('&'),
        }
    }
    out
}

/// Decode raw page bytes to a string: BOM, then meta charset, then UTF-8
/// with replacement. Returns the text and whether replacement happened.
pub fn decode_html(html: &[u8]) -> (String, bool) {
    if html.starts_with(&[0xef, 0xbb, 0xbf]) {
        return utf8_lossy_flag(&html[3..]);
    }
    if html.starts_with(&[0xff, 0xfe]) {
        return (utf16_decode(&html[2..], true), false);
    }
    if html.starts_with(&[0xfe, 0xff]) {
        return (utf16_decode(&html[2..], false), false);
    }
    match sniff_meta_charset(html).as_deref() {
        Some("iso-8859-1") | Some("latin1") | Some("us-ascii") => (latin1_decode(html, false), false),
        Some("windows-1252") | Some("cp1252") => (latin1_decode(html, true), false),
        // utf-8 or anything we do not handle: lenient UTF-8.
        _ => utf8_lossy_flag(html),
    }
}

fn utf8_lossy_flag(bytes: &[u8]) -> (String, bool) {
    match std::str::from_utf8(bytes) {
        Ok(s) => (s.to_string(), false),
        Err(_) => (String::from_utf8_lossy(bytes).into_owned(), true),
    }
}

fn latin1_decode(bytes: &[u8], cp1252: bool) -> String {
    bytes
        .iter()
        .map(|&b| {
            if cp1252 && (0x80..0xa0).contains(&b) {
                CP1252_HIGH[(b - 0x80) as usize]
            } else {
                b as char
            }
        })
        .collect()
}

// Windows-1252 codepoints 0x80..0x9F.
const CP1252_HIGH: [char; 32] = [
    '€', '\u{81}', '‚', 'ƒ', '„', '…', '†', '‡', 'ˆ', '‰', 'Š', '‹', 'Œ', '\u{8d}', 'Ž', '\u{8f}',
    '\u{90}', '‘', '’', '“', '”', '•', '–', '—', '˜', '™', 'š', '›', 'œ', '\u{9d}', 'ž', 'Ÿ',
];

fn utf16_decode(bytes: &[u8], little_endian: bool) -> String {
    let units: Vec<u16> = bytes
        .chunks_exact(2)
        .map(|c| {
            if little_endian {
                u16::from_le_bytes([c[0], c[1]])
            } else {
                u16::from_be_bytes([c[0], c[1]])
            }
        })
        .collect();
    String::from_utf16_lossy(&units)
}

/// Look for `charset=` inside the first 1024 bytes.
fn sniff_meta_charset(html: &[u8]) -> Option<String> {
    let head = &html[..html.len().min(1024)];
    let lower: Vec<u8> = head.iter().map(|b| b.to_ascii_lowercase()).collect();
    let idx = find_sub(&lower, 0, b"charset=")?;
    let after = &lower[idx + 8..];
    let value: Vec<u8> = after
        .iter()
        .skip_while(|&&b| b == b'"' || b == b'\'' || b == b' ')
        .take_while(|&&b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
        .copied()
        .collect();
    if value.is_empty() {
        None
    } else {
        Some(String::from_utf8_lossy(&value).into_owned())
    }
}
