//! Shared test fixtures. The WARC writer here is an independent oracle:
//! it builds archive bytes from first principles (format spec), never via
//! the parser under test.

#![allow(dead_code)]

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compression {
    None,
    Gzip,
    Zstd,
}

#[derive(Debug, Clone)]
pub struct RecordSpec {
    pub record_type: &'static str,
    pub uri: String,
    pub date: String,
    pub content_type: String,
    pub payload: Vec<u8>,
    pub compression: Compression,
    /// When true the Content-Length header is replaced with garbage.
    pub corrupt_length: bool,
}

impl RecordSpec {
    pub fn new(record_type: &'static str, uri: &str, date: &str, content_type: &str, payload: Vec<u8>) -> Self {
        RecordSpec {
            record_type,
            uri: uri.to_string(),
            date: date.to_string(),
            content_type: content_type.to_string(),
            payload,
            compression: Compression::None,
            corrupt_length: false,
        }
    }

    pub fn compressed(mut self, c: Compression) -> Self {
        self.compression = c;
        self
    }

    pub fn corrupted(mut self) -> Self {
        self.corrupt_length = true;
        self
    }
}

/// Serialize one record per the WARC/1.0 grammar.
pub fn encode_record(spec: &RecordSpec) -> Vec<u8> {
    let mut head = String::new();
    head.push_str("WARC/1.0\r\n");
    head.push_str(&format!("WARC-Type: {}\r\n", spec.record_type));
    if !spec.uri.is_empty() {
        head.push_str(&format!("WARC-Target-URI: {}\r\n", spec.uri));
    }
    head.push_str(&format!("WARC-Date: {}\r\n", spec.date));
    head.push_str(&format!("Content-Type: {}\r\n", spec.content_type));
    if spec.corrupt_length {
        head.push_str("Content-Length: not-a-number\r\n");
    } else {
        head.push_str(&format!("Content-Length: {}\r\n", spec.payload.len()));
    }
    head.push_str("\r\n");

    let mut plain = head.into_bytes();
    plain.extend_from_slice(&spec.payload);
    plain.extend_from_slice(b"\r\n\r\n");

    match spec.compression {
        Compression::None => plain,
        Compression::Gzip => {
            let mut enc = flate2::write::GzEncoder::new(Vec::new(), flate2::Compression::default());
            enc.write_all(&plain).unwrap();
            enc.finish().unwrap()
        }
        Compression::Zstd => zstd::encode_all(plain.as_slice(), 3).unwrap(),
    }
}

/// Build a whole WARC file; returns the bytes and each record's offset.
pub fn write_warc(specs: &[RecordSpec]) -> (Vec<u8>, Vec<u64>) {
    let mut out = Vec::new();
    let mut offsets = Vec::new();
    for spec in specs {
        offsets.push(out.len() as u64);
        out.extend_from_slice(&encode_record(spec));
    }
    (out, offsets)
}

/// An HTTP/1.1 response payload wrapping `body`.
pub fn http_response(status: u16, content_type: &str, body: &[u8]) -> Vec<u8> {
    let mut p = format!(
        "HTTP/1.1 {status} STATUS\r\nContent-Type: {content_type}\r\nServer: fixture\r\n\r\n"
    )
    .into_bytes();
    p.extend_from_slice(body);
    p
}

/// Response record carrying an HTML page.
pub fn html_response_record(url: &str, date: &str, html: &str) -> RecordSpec {
    RecordSpec::new(
        "response",
        url,
        date,
        "application/http; msgtype=response",
        http_response(200, "text/html; charset=utf-8", html.as_bytes()),
    )
}

/// Resource record carrying a robots.txt body.
pub fn robots_record(host: &str, date: &str, body: &str) -> RecordSpec {
    RecordSpec::new(
        "resource",
        &format!("https://{host}/robots.txt"),
        date,
        "text/plain",
        body.as_bytes().to_vec(),
    )
}
