//! Construction of monolingual and parallel text corpora from web archives.
//!
//! The crate is organized as a pipeline over WARC crawl data:
//!
//! - [`warc`] — stream WARC files, select HTML records, drop trash URLs,
//!   capture robots.txt bodies.
//! - [`extract`] — main-content extraction, machine-translation markup
//!   detection, language identification.
//! - [`dedup`] — MinHash/LSH near-duplicate detection and disjoint-set
//!   clustering at crawl level.
//! - [`clean`] — robots.txt enforcement, quality/length/adult gates,
//!   document IDs, segment-level LID, PII offsets.
//! - [`bitext`] — sentence splitting with persistent identifiers, pair
//!   filtering/deduplication, pivoting, bitext/TMX output.
//! - [`analytics`] — descriptive statistics, restricted frequent n-grams,
//!   domain/TLD reports, stratified inspection samples.
//! - [`pipeline`] — configuration, orchestration and sharded execution.

pub mod analytics;
pub mod bitext;
pub mod clean;
pub mod dedup;
pub mod extract;
pub mod pipeline;
pub mod psl;
pub mod util;
pub mod warc;
