//! Data files shipped with the crate: the survey facts and the small
//! sum-free partitions, embedded at compile time so library consumers need
//! no filesystem setup. These are data, not constants baked into code — the
//! same files parse through the public format APIs.

use crate::construct::SumFreePartition;
use crate::engine::KnowledgeBase;
use crate::formats::{assert_facts, parse_facts_file, parse_partition_file, FactLine};

/// Survey of small known bounds: the diagonal clique-3 table, exact small
/// two-color values, open two-color cases, and the multicolor lower bounds
/// for off-diagonal adjacent pairs.
pub const SURVEY_SMALL_FACTS: &str = include_str!("../data/survey_small.facts");

/// The five-vertex two-coloring in cyclic format; parses to the `c5`
/// builtin.
pub const C5_CYCLIC: &str = include_str!("../data/c5.cyclic");

/// Maximal sum-free partitions of `1..=n` for one through four parts
/// (n = 1, 4, 13, 44); each yields a triangle-free coloring one vertex
/// short of forcing.
pub const SCHUR_PARTITIONS: [&str; 4] = [
    include_str!("../data/schur_s1.partition"),
    include_str!("../data/schur_s2.partition"),
    include_str!("../data/schur_s3.partition"),
    include_str!("../data/schur_s4.partition"),
];

/// The shipped survey, parsed. Shipped data failing to parse is a build
/// defect, hence the panic-on-error contract.
pub fn survey_facts() -> Vec<FactLine> {
    parse_facts_file(SURVEY_SMALL_FACTS).expect("shipped survey facts parse")
}

/// A fresh base loaded with the survey facts (no closure run, default
/// budget, no assumptions).
pub fn survey_kb() -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    assert_facts(&mut kb, &survey_facts());
    kb
}

/// The shipped sum-free partition with `parts` parts, for `1 <= parts <= 4`.
pub fn schur_partition(parts: usize) -> Option<SumFreePartition> {
    let text = SCHUR_PARTITIONS.get(parts.checked_sub(1)?)?;
    Some(parse_partition_file(text).expect("shipped partition parses"))
}
