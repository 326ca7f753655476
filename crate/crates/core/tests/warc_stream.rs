mod common;

use std::io::Cursor;

use common::{html_response_record, robots_record, write_warc, Compression, RecordSpec};
use webcorpus::warc::{RecordType, WarcStream};

fn read_all(bytes: Vec<u8>, name: &str) -> (Vec<webcorpus::warc::WarcRecord>, webcorpus::warc::StreamStats) {
    let mut stream = WarcStream::new(Cursor::new(bytes), name).expect("stream header");
    let mut records = Vec::new();
    while let Some(rec) = stream.next_record().expect("io") {
        records.push(rec);
    }
    (records, stream.stats())
}

#[test]
fn three_records_in_order() {
    let specs = vec![
        html_response_record("http://site.example/page", "2019-03-01T10:00:00Z", "<html><body>hi</body></html>"),
        RecordSpec::new(
            "request",
            "http://site.example/page",
            "2019-03-01T10:00:00Z",
            "application/http; msgtype=request",
            b"GET /page HTTP/1.1\r\nHost: site.example\r\n\r\n".to_vec(),
        ),
        robots_record("site.example", "2019-03-01T10:00:01Z", "User-agent: *\nDisallow:"),
    ];
    let (bytes, _) = write_warc(&specs);
    let (records, stats) = read_all(bytes, "fixture.warc");
    assert_eq!(records.len(), 3);
    assert_eq!(records[0].record_type, RecordType::Response);
    assert_eq!(records[1].record_type, RecordType::Request);
    assert_eq!(records[2].record_type, RecordType::Resource);
    assert_eq!(stats.skipped, 0);
    assert!(!stats.truncated);
}

#[test]
fn roundtrip_is_field_identical_across_compressions() {
    for compression in [Compression::None, Compression::Gzip, Compression::Zstd] {
        let specs = vec![
            html_response_record("http://a.example/1", "2020-05-05T00:00:00Z", "<html>one</html>").compressed(compression),
            html_response_record("http://a.example/2", "2020-05-05T00:00:01Z", "<html>two</html>").compressed(compression),
            robots_record("a.example", "2020-05-05T00:00:02Z", "User-agent: *\nDisallow: /private/").compressed(compression),
        ];
        let (bytes, offsets) = write_warc(&specs);
        let (records, stats) = read_all(bytes, "mix.warc");
        assert_eq!(records.len(), specs.len(), "{compression:?}");
        for ((rec, spec), offset) in records.iter().zip(&specs).zip(&offsets) {
            assert_eq!(rec.target_uri, spec.uri);
            assert_eq!(rec.date, spec.date);
            assert_eq!(rec.content_type, spec.content_type);
            assert_eq!(rec.payload, spec.payload);
            assert_eq!(rec.record_offset, *offset);
            assert_eq!(rec.source_file, "mix.warc");
        }
        assert_eq!(stats.yielded, 3);
        assert_eq!(stats.skipped, 0);
    }
}

#[test]
fn corrupt_length_header_skipped_then_valid_record_parsed() {
    let specs = vec![
        html_response_record("http://bad.example/", "2020-01-01T00:00:00Z", "<html>bad</html>").corrupted(),
        html_response_record("http://good.example/", "2020-01-01T00:00:01Z", "<html>good</html>"),
    ];
    let (bytes, _) = write_warc(&specs);
    let (records, stats) = read_all(bytes, "corrupt.warc");
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].target_uri, "http://good.example/");
    assert_eq!(stats.skipped, 1);
}

#[test]
fn corrupt_gzip_member_skipped() {
    let specs = vec![
        html_response_record("http://one.example/", "2020-01-01T00:00:00Z", "<html>1</html>").compressed(Compression::Gzip),
        html_response_record("http://two.example/", "2020-01-01T00:00:01Z", "<html>2</html>").compressed(Compression::Gzip),
    ];
    let (mut bytes, offsets) = write_warc(&specs);
    // Stomp on the middle of the first member, past its gzip header.
    let hit = offsets[0] as usize + 14;
    for b in &mut bytes[hit..hit + 4] {
        *b ^= 0xff;
    }
    let (records, stats) = read_all(bytes, "gz-corrupt.warc");
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].target_uri, "http://two.example/");
    assert_eq!(stats.skipped, 1);
}

#[test]
fn truncated_final_record_is_partial_result() {
    let specs = vec![
        html_response_record("http://one.example/", "2020-01-01T00:00:00Z", "<html>1</html>"),
        html_response_record("http://two.example/", "2020-01-01T00:00:01Z", "<html>2</html>"),
    ];
    let (bytes, _) = write_warc(&specs);
    let cut = bytes.len() - 40;
    let (records, stats) = read_all(bytes[..cut].to_vec(), "trunc.warc");
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].target_uri, "http://one.example/");
    assert!(stats.truncated);
}

#[test]
fn skip_plus_yield_accounts_for_all_boundaries() {
    let specs = vec![
        html_response_record("http://a.example/", "2020-01-01T00:00:00Z", "<html>a</html>"),
        html_response_record("http://b.example/", "2020-01-01T00:00:01Z", "<html>b</html>").corrupted(),
        html_response_record("http://c.example/", "2020-01-01T00:00:02Z", "<html>c</html>").compressed(Compression::Zstd),
        html_response_record("http://d.example/", "2020-01-01T00:00:03Z", "<html>d</html>").corrupted(),
        html_response_record("http://e.example/", "2020-01-01T00:00:04Z", "<html>e</html>").compressed(Compression::Gzip),
    ];
    let (bytes, _) = write_warc(&specs);
    let (records, stats) = read_all(bytes, "mixed.warc");
    assert_eq!(stats.yielded + stats.skipped, specs.len() as u64);
    assert_eq!(records.len(), 3);
}

#[test]
fn parse_then_select_is_deterministic() {
    let specs = vec![
        html_response_record("http://a.example/", "2020-01-01T00:00:00Z", "<html>a</html>").compressed(Compression::Gzip),
        robots_record("a.example", "2020-01-01T00:00:01Z", "User-agent: *\nDisallow: /x"),
        html_response_record("http://b.example/", "2020-01-01T00:00:02Z", "<html>b</html>"),
    ];
    let (bytes, _) = write_warc(&specs);
    let (records1, _) = read_all(bytes.clone(), "det.warc");
    let (records2, _) = read_all(bytes, "det.warc");
    let sel1 = webcorpus::warc::select_html_records(records1);
    let sel2 = webcorpus::warc::select_html_records(records2);
    assert_eq!(sel1.captures.len(), sel2.captures.len());
    for (a, b) in sel1.captures.iter().zip(&sel2.captures) {
        assert_eq!(a.url, b.url);
        assert_eq!(a.html, b.html);
        assert_eq!(a.record_offset, b.record_offset);
    }
}
