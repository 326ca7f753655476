//! Streaming WARC ingestion: record parsing, HTML selection, trash-URL
//! filtering and robots.txt capture.
//!
//! Records may be individually gzip- or zstd-compressed (detected by magic
//! bytes) or stored plain. Malformed records are skipped and counted, never
//! fatal; the reader resynchronizes on the next record magic.

pub mod http;

use std::collections::HashMap;
use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];
const ZSTD_MAGIC: [u8; 4] = [0x28, 0xb5, 0x2f, 0xfd];
const WARC_MAGIC: &[u8] = b"WARC/1.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordType {
    Warcinfo,
    Request,
    Response,
    Resource,
    Metadata,
    Other(String),
}

impl RecordType {
    fn from_header(value: &str) -> Self {
        match value.to_ascii_lowercase().as_str() {
            "warcinfo" => RecordType::Warcinfo,
            "request" => RecordType::Request,
            "response" => RecordType::Response,
            "resource" => RecordType::Resource,
            "metadata" => RecordType::Metadata,
            other => RecordType::Other(other.to_string()),
        }
    }
}

/// One parsed WARC record.
#[derive(Debug, Clone)]
pub struct WarcRecord {
    pub record_type: RecordType,
    pub target_uri: String,
    pub date: String,
    pub content_type: String,
    pub payload: Vec<u8>,
    pub source_file: String,
    pub record_offset: u64,
}

/// An HTML page selected for extraction. `html` is the undecoded body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HtmlCapture {
    pub url: String,
    #[serde(with = "b64_bytes")]
    pub html: Vec<u8>,
    pub warc_file: String,
    pub record_offset: u64,
    pub timestamp: String,
    pub content_type: String,
}

mod b64_bytes {
    use base64::engine::general_purpose::STANDARD;
    use base64::Engine;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], ser: S) -> Result<S::Ok, S::Error> {
        STANDARD.encode(bytes).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(de)?;
        STANDARD.decode(s).map_err(serde::de::Error::custom)
    }
}

/// A robots.txt body captured for one host. One capture per host; when a
/// host appears more than once the latest timestamp wins.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotsCapture {
    pub host: String,
    pub body: String,
    pub timestamp: String,
    pub lossy: bool,
}

#[derive(Debug, Error)]
pub enum WarcError {
    #[error("unreadable stream header in {path}")]
    StreamHeader { path: String },
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// Counters accumulated while streaming one WARC file.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct StreamStats {
    pub yielded: u64,
    pub skipped: u64,
    pub truncated: bool,
}

/// Streaming reader over one WARC file.
pub struct WarcStream<R> {
    reader: R,
    source_file: String,
    stats: StreamStats,
    done: bool,
}

impl WarcStream<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self, WarcError> {
        let file = File::open(path).map_err(|source| WarcError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::new(BufReader::new(file), &path.display().to_string())
    }
}

impl<R: BufRead + Seek> WarcStream<R> {
    /// Checks that the stream begins with a recognizable record magic
    /// (empty input is fine) before returning a reader.
    pub fn new(mut reader: R, source_file: &str) -> Result<Self, WarcError> {
        let io_err = |source| WarcError::Io {
            path: source_file.to_string(),
            source,
        };
        let head = peek_bytes(&mut reader, 7).map_err(io_err)?;
        if !head.is_empty() && detect_kind(&head).is_none() {
            return Err(WarcError::StreamHeader {
                path: source_file.to_string(),
            });
        }
        Ok(WarcStream {
            reader,
            source_file: source_file.to_string(),
            stats: StreamStats::default(),
            done: false,
        })
    }

    pub fn stats(&self) -> StreamStats {
        self.stats
    }

    /// The next well-formed record, or `None` at end of stream. Malformed
    /// records are skipped and counted in [`StreamStats`].
    pub fn next_record(&mut self) -> Result<Option<WarcRecord>, WarcError> {
        loop {
            if self.done {
                return Ok(None);
            }
            match self.try_next() {
                Ok(Some(rec)) => {
                    self.stats.yielded += 1;
                    return Ok(Some(rec));
                }
                Ok(None) => continue,
                Err(ReadErr::Eof) => {
                    self.done = true;
                    return Ok(None);
                }
                Err(ReadErr::Io(source)) => {
                    self.done = true;
                    return Err(WarcError::Io {
                        path: self.source_file.clone(),
                        source,
                    });
                }
            }
        }
    }

    /// Attempts one record; `Ok(None)` means a malformed region was skipped.
    fn try_next(&mut self) -> Result<Option<WarcRecord>, ReadErr> {
        self.skip_newlines()?;
        let offset = self.reader.stream_position().map_err(ReadErr::Io)?;
        let head = peek_bytes(&mut self.reader, 4).map_err(ReadErr::Io)?;
        if head.is_empty() {
            return Err(ReadErr::Eof);
        }
        match detect_kind(&head) {
            Some(Kind::Gzip) => {
                let mut out = Vec::new();
                let res = flate2::bufread::GzDecoder::new(&mut self.reader).read_to_end(&mut out);
                self.member_result(res.map(|_| out), offset)
            }
            Some(Kind::Zstd) => {
                let res = (|| {
                    let mut out = Vec::new();
                    zstd::stream::read::Decoder::with_buffer(&mut self.reader)?
                        .single_frame()
                        .read_to_end(&mut out)?;
                    Ok(out)
                })();
                self.member_result(res, offset)
            }
            Some(Kind::Plain) => {
                let mut limit = TakeAll(&mut self.reader);
                match parse_record(&mut limit, &self.source_file, offset) {
                    Ok(rec) => Ok(Some(rec)),
                    Err(RecordErr::ShortPayload) => {
                        // Ran off the end of the file mid-record.
                        self.stats.truncated = true;
                        self.done = true;
                        Ok(None)
                    }
                    Err(RecordErr::Malformed(_)) => {
                        self.stats.skipped += 1;
                        self.resync(offset + 1)?;
                        Ok(None)
                    }
                    Err(RecordErr::Io(e)) => Err(ReadErr::Io(e)),
                }
            }
            None => {
                self.stats.skipped += 1;
                self.resync(offset + 1)?;
                Ok(None)
            }
        }
    }

    /// Handle the outcome of decompressing one gzip/zstd member.
    fn member_result(
        &mut self,
        res: io::Result<Vec<u8>>,
        offset: u64,
    ) -> Result<Option<WarcRecord>, ReadErr> {
        match res {
            Ok(bytes) => {
                let mut cursor = io::Cursor::new(bytes.as_slice());
                match parse_record(&mut cursor, &self.source_file, offset) {
                    Ok(rec) => Ok(Some(rec)),
                    Err(RecordErr::ShortPayload) if self.at_eof()? => {
                        self.stats.truncated = true;
                        self.done = true;
                        Ok(None)
                    }
                    Err(_) => {
                        self.stats.skipped += 1;
                        Ok(None)
                    }
                }
            }
            Err(_) => {
                if self.at_eof()? {
                    self.stats.truncated = true;
                    self.done = true;
                    Ok(None)
                } else {
                    self.stats.skipped += 1;
                    self.resync(offset + 1)?;
                    Ok(None)
                }
            }
        }
    }

    fn at_eof(&mut self) -> Result<bool, ReadErr> {
        Ok(self.reader.fill_buf().map_err(ReadErr::Io)?.is_empty())
    }

    fn skip_newlines(&mut self) -> Result<(), ReadErr> {
        loop {
            let buf = self.reader.fill_buf().map_err(ReadErr::Io)?;
            if buf.is_empty() {
                return Ok(());
            }
            let n = buf.iter().take_while(|&&b| b == b'\r' || b == b'\n').count();
            self.reader.consume(n);
            if n < 1 {
                return Ok(());
            }
        }
    }

    /// Seek forward from `from` to the next plausible record magic.
    fn resync(&mut self, from: u64) -> Result<(), ReadErr> {
        self.reader.seek(SeekFrom::Start(from)).map_err(ReadErr::Io)?;
        let mut window: Vec<u8> = Vec::new();
        let mut base = from;
        loop {
            let buf = self.reader.fill_buf().map_err(ReadErr::Io)?;
            if buf.is_empty() {
                self.done = true;
                return Ok(());
            }
            let n = buf.len();
            window.extend_from_slice(buf);
            self.reader.consume(n);
            if let Some(idx) = find_magic(&window) {
                let abs = base + idx as u64;
                self.reader.seek(SeekFrom::Start(abs)).map_err(ReadErr::Io)?;
                return Ok(());
            }
            let keep = window.len().min(WARC_MAGIC.len() - 1);
            base += (window.len() - keep) as u64;
            window.drain(..window.len() - keep);
        }
    }
}

impl<R: BufRead + Seek> Iterator for WarcStream<R> {
    type Item = Result<WarcRecord, WarcError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_record().transpose()
    }
}

enum ReadErr {
    Eof,
    Io(io::Error),
}

enum Kind {
    Gzip,
    Zstd,
    Plain,
}

fn detect_kind(head: &[u8]) -> Option<Kind> {
    if head.starts_with(&GZIP_MAGIC) {
        Some(Kind::Gzip)
    } else if head.starts_with(&ZSTD_MAGIC) {
        Some(Kind::Zstd)
    } else if head.starts_with(&WARC_MAGIC[..head.len().min(WARC_MAGIC.len())]) && head.len() >= 4 {
        Some(Kind::Plain)
    } else {
        None
    }
}

fn find_magic(window: &[u8]) -> Option<usize> {
    (0..window.len()).find(|&i| {
        let rest = &window[i..];
        (rest.len() >= 2 && rest[..2] == GZIP_MAGIC)
            || (rest.len() >= 4 && rest[..4] == ZSTD_MAGIC)
            || (rest.len() >= WARC_MAGIC.len() && rest.starts_with(WARC_MAGIC))
    })
}

/// Read up to `n` bytes and seek back to where we started.
fn peek_bytes<R: Read + Seek>(reader: &mut R, n: usize) -> io::Result<Vec<u8>> {
    let pos = reader.stream_position()?;
    let mut buf = vec![0u8; n];
    let mut filled = 0;
    while filled < n {
        let got = reader.read(&mut buf[filled..])?;
        if got == 0 {
            break;
        }
        filled += got;
    }
    buf.truncate(filled);
    reader.seek(SeekFrom::Start(pos))?;
    Ok(buf)
}

// Newtype so the plain path and the decompressed path share one parser.
struct TakeAll<'a, R>(&'a mut R);

impl<R: BufRead> Read for TakeAll<'_, R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.0.read(buf)
    }
}
impl<R: BufRead> BufRead for TakeAll<'_, R> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        self.0.fill_buf()
    }
    fn consume(&mut self, amt: usize) {
        self.0.consume(amt)
    }
}

enum RecordErr {
    Malformed(&'static str),
    ShortPayload,
    Io(io::Error),
}

/// Parse one WARC record: version line, headers, Content-Length payload.
fn parse_record<R: BufRead>(
    reader: &mut R,
    source_file: &str,
    record_offset: u64,
) -> Result<WarcRecord, RecordErr> {
    let version = read_line(reader)?;
    if !version.starts_with("WARC/1.") {
        return Err(RecordErr::Malformed("bad version line"));
    }

    let mut headers: HashMap<String, String> = HashMap::new();
    loop {
        let line = read_line(reader)?;
        if line.is_empty() {
            break;
        }
        let Some(colon) = line.find(':') else {
            return Err(RecordErr::Malformed("header without colon"));
        };
        headers.insert(
            line[..colon].trim().to_ascii_lowercase(),
            line[colon + 1..].trim().to_string(),
        );
    }

    let length: usize = headers
        .get("content-length")
        .and_then(|v| v.parse().ok())
        .ok_or(RecordErr::Malformed("missing or bad content-length"))?;

    let mut payload = vec![0u8; length];
    read_exactly(reader, &mut payload)?;

    let target_uri = headers
        .get("warc-target-uri")
        .map(|u| u.trim_start_matches('<').trim_end_matches('>').to_string())
        .unwrap_or_default();

    Ok(WarcRecord {
        record_type: headers
            .get("warc-type")
            .map(|t| RecordType::from_header(t))
            .unwrap_or(RecordType::Other(String::new())),
        target_uri,
        date: headers.get("warc-date").cloned().unwrap_or_default(),
        content_type: headers.get("content-type").cloned().unwrap_or_default(),
        payload,
        source_file: source_file.to_string(),
        record_offset,
    })
}

fn read_line<R: BufRead>(reader: &mut R) -> Result<String, RecordErr> {
    let mut buf = Vec::new();
    reader.read_until(b'\n', &mut buf).map_err(RecordErr::Io)?;
    if buf.is_empty() {
        return Err(RecordErr::ShortPayload);
    }
    while buf.last() == Some(&b'\n') || buf.last() == Some(&b'\r') {
        buf.pop();
    }
    String::from_utf8(buf).map_err(|_| RecordErr::Malformed("non-utf8 header line"))
}

fn read_exactly<R: Read>(reader: &mut R, buf: &mut [u8]) -> Result<(), RecordErr> {
    let mut filled = 0;
    while filled < buf.len() {
        let got = reader.read(&mut buf[filled..]).map_err(RecordErr::Io)?;
        if got == 0 {
            return Err(RecordErr::ShortPayload);
        }
        filled += got;
    }
    Ok(())
}

/// Outcome of HTML record selection over a record sequence.
#[derive(Debug, Default)]
pub struct HtmlSelection {
    pub captures: Vec<HtmlCapture>,
    pub skipped_bad_http: u64,
}

/// Per-record selection decision.
#[derive(Debug)]
pub enum SelectDecision {
    Kept(Box<HtmlCapture>),
    WrongType,
    BadHttp,
    NotOk,
    NotHtml,
}

/// Keep response/resource records with HTTP status 200 and an HTML content
/// type; HTTP headers are stripped from the payload.
pub fn select_html_record(record: &WarcRecord) -> SelectDecision {
    let (status, content_type, body): (u16, String, Vec<u8>) = match record.record_type {
        RecordType::Response => match http::parse_response(&record.payload) {
            Some(resp) => {
                let ct = resp.header("content-type").unwrap_or("").to_string();
                (resp.status, ct, resp.body)
            }
            None => return SelectDecision::BadHttp,
        },
        RecordType::Resource => (200, record.content_type.clone(), record.payload.clone()),
        _ => return SelectDecision::WrongType,
    };
    if status != 200 {
        return SelectDecision::NotOk;
    }
    if !http::is_html_mime(&content_type) {
        return SelectDecision::NotHtml;
    }
    SelectDecision::Kept(Box::new(HtmlCapture {
        url: record.target_uri.clone(),
        html: body,
        warc_file: record.source_file.clone(),
        record_offset: record.record_offset,
        timestamp: record.date.clone(),
        content_type,
    }))
}

pub fn select_html_records(records: impl IntoIterator<Item = WarcRecord>) -> HtmlSelection {
    let mut out = HtmlSelection::default();
    for record in records {
        match select_html_record(&record) {
            SelectDecision::Kept(capture) => out.captures.push(*capture),
            SelectDecision::BadHttp => out.skipped_bad_http += 1,
            _ => {}
        }
    }
    out
}

/// Known-trash URL list: bare host patterns and URL prefix patterns, one
/// per line, `#` comments tolerated.
#[derive(Debug, Default, Clone)]
pub struct TrashList {
    hosts: HashSet<String>,
    prefixes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrashDecision {
    Keep,
    DropListed,
    DropUnparseable,
}

impl TrashList {
    pub fn parse(text: &str) -> Self {
        let mut list = TrashList::default();
        for line in text.lines() {
            let entry = line.split('#').next().unwrap_or("").trim();
            if entry.is_empty() {
                continue;
            }
            if entry.contains("://") {
                list.prefixes.push(entry.to_string());
            } else {
                list.hosts.insert(entry.to_ascii_lowercase());
            }
        }
        list
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn is_empty(&self) -> bool {
        self.hosts.is_empty() && self.prefixes.is_empty()
    }

    /// Drop iff the URL host equals a listed host or the URL starts with a
    /// listed prefix. Unparseable URLs are dropped and counted separately.
    pub fn decide(&self, url: &str) -> TrashDecision {
        let parsed = match url::Url::parse(url) {
            Ok(u) => u,
            Err(_) => return TrashDecision::DropUnparseable,
        };
        if let Some(host) = parsed.host_str() {
            if self.hosts.contains(&host.to_ascii_lowercase()) {
                return TrashDecision::DropListed;
            }
        } else {
            return TrashDecision::DropUnparseable;
        }
        if self.prefixes.iter().any(|p| url.starts_with(p.as_str())) {
            return TrashDecision::DropListed;
        }
        TrashDecision::Keep
    }
}

/// Collect robots.txt bodies: 200-status records whose URL path is exactly
/// `/robots.txt`, one capture per host, latest timestamp wins.
pub fn capture_robots(records: impl IntoIterator<Item = WarcRecord>) -> Vec<RobotsCapture> {
    let mut by_host: HashMap<String, RobotsCapture> = HashMap::new();
    for record in records {
        let Some(capture) = robots_from_record(&record) else {
            continue;
        };
        match by_host.get(&capture.host) {
            Some(existing) if existing.timestamp.as_str() > capture.timestamp.as_str() => {}
            _ => {
                by_host.insert(capture.host.clone(), capture);
            }
        }
    }
    let mut out: Vec<RobotsCapture> = by_host.into_values().collect();
    out.sort_by(|a, b| a.host.cmp(&b.host));
    out
}

pub fn robots_from_record(record: &WarcRecord) -> Option<RobotsCapture> {
    let url = url::Url::parse(&record.target_uri).ok()?;
    if url.path() != "/robots.txt" {
        return None;
    }
    let body_bytes: Vec<u8> = match record.record_type {
        RecordType::Response => {
            let resp = http::parse_response(&record.payload)?;
            if resp.status != 200 {
                return None;
            }
            resp.body
        }
        RecordType::Resource => record.payload.clone(),
        _ => return None,
    };
    let host = url.host_str()?.to_ascii_lowercase();
    let host = match url.port() {
        Some(port) => format!("{host}:{port}"),
        None => host,
    };
    let (body, lossy) = match String::from_utf8(body_bytes) {
        Ok(s) => (s, false),
        Err(e) => (String::from_utf8_lossy(e.as_bytes()).into_owned(), true),
    };
    Some(RobotsCapture {
        host,
        body,
        timestamp: record.date.clone(),
        lossy,
    })
}
