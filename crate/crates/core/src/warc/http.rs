//! Minimal HTTP/1.x response parsing for WARC response payloads.

/// A parsed HTTP response: status code, headers, body bytes.
#[derive(Debug)]
pub struct HttpResponse {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl HttpResponse {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

/// Split an HTTP response payload at the first blank line and parse the
/// status line and headers. Chunked bodies are de-chunked. Returns `None`
/// when no parseable status line is present.
pub fn parse_response(payload: &[u8]) -> Option<HttpResponse> {
    let (head, body) = split_head(payload)?;
    let head_str = String::from_utf8_lossy(head);
    let mut lines = head_str.split('\n').map(|l| l.trim_end_matches('\r'));

    let status_line = lines.next()?;
    let status = parse_status_line(status_line)?;

    let mut headers = Vec::new();
    for line in lines {
        if let Some(colon) = line.find(':') {
            let name = line[..colon].trim().to_string();
            let value = line[colon + 1..].trim().to_string();
            if !name.is_empty() {
                headers.push((name, value));
            }
        }
    }

    let chunked = headers
        .iter()
        .any(|(n, v)| n.eq_ignore_ascii_case("transfer-encoding") && v.to_ascii_lowercase().contains("chunked"));
    let body = if chunked {
        dechunk(body).unwrap_or_else(|| body.to_vec())
    } else {
        body.to_vec()
    };

    Some(HttpResponse { status, headers, body })
}

fn parse_status_line(line: &str) -> Option<u16> {
    let mut parts = line.split_ascii_whitespace();
    let version = parts.next()?;
    if !version.starts_with("HTTP/") {
        return None;
    }
    parts.next()?.parse().ok()
}

/// Find the first blank line (CRLFCRLF or LFLF) and split head from body.
fn split_head(payload: &[u8]) -> Option<(&[u8], &[u8])> {
    for i in 0..payload.len() {
        if payload[i..].starts_with(b"\r\n\r\n") {
            return Some((&payload[..i], &payload[i + 4..]));
        }
        if payload[i..].starts_with(b"\n\n") {
            return Some((&payload[..i], &payload[i + 2..]));
        }
    }
    // Headers with no body at all.
    if !payload.is_empty() {
        return Some((payload, &[]));
    }
    None
}

/// Reassemble a chunked transfer-encoded body. Trailers are discarded.
fn dechunk(body: &[u8]) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    let mut pos = 0;
    loop {
        let line_end = find_crlf(body, pos)?;
        let size_line = std::str::from_utf8(&body[pos..line_end]).ok()?;
        let size_field = size_line.split(';').next()?.trim();
        let size = usize::from_str_radix(size_field, 16).ok()?;
        pos = line_end + 2;
        if size == 0 {
            return Some(out);
        }
        if pos + size > body.len() {
            return None;
        }
        out.extend_from_slice(&body[pos..pos + size]);
        pos += size;
        // chunk data is followed by CRLF
        if body[pos..].starts_with(b"\r\n") {
            pos += 2;
        }
    }
}

fn find_crlf(body: &[u8], from: usize) -> Option<usize> {
    (from..body.len().saturating_sub(1)).find(|&i| body[i] == b'\r' && body[i + 1] == b'\n')
}

/// The MIME type (before any parameters), lowercased and trimmed.
pub fn mime_essence(content_type: &str) -> String {
    content_type
        .split(';')
        .next()
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase()
}

/// True for the HTML content types kept by record selection.
pub fn is_html_mime(content_type: &str) -> bool {
    matches!(mime_essence(content_type).as_str(), "text/html" | "application/xhtml+xml")
}
