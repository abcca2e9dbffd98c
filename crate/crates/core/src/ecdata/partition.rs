//! Filtering, deduplication, amalgamation and the summary tables.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{normalize_zeros, zero_scale, CurveRecord, ZeroDataset};
use crate::error::{Error, Result};
use crate::stats::{
    descriptive, pooled_t_summary, spacing_differences, unpooled_t_summary, GroupSummary,
    SampleSummary, Tail,
};

pub const ALL_CURVES: &str = "All Curves";
pub const DISTINCT_CURVES: &str = "Distinct Curves";

/// Keep records with `lo ≤ log C < hi` and (optionally) the given rank;
/// with `dedup`, only the first record per Weierstrass tuple survives.
pub fn filter_partition(
    ds: &ZeroDataset,
    lo: f64,
    hi: f64,
    rank: Option<u32>,
    dedup: bool,
) -> Result<ZeroDataset> {
    if !(lo < hi) {
        return Err(Error::InvalidParameters(format!(
            "log-conductor range needs lo < hi (got [{lo}, {hi}))"
        )));
    }
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for r in &ds.records {
        let l = r.log_conductor()?;
        if !(lo <= l && l < hi) || rank.is_some_and(|k| k != r.rank) {
            continue;
        }
        if dedup && !seen.insert(r.weierstrass) {
            continue;
        }
        records.push(r.clone());
    }
    Ok(ZeroDataset {
        records,
        provenance: ds.provenance.clone(),
    })
}

/// First-occurrence deduplication by Weierstrass tuple.
pub fn dedup(records: &[CurveRecord]) -> Vec<CurveRecord> {
    let mut seen = HashSet::new();
    records
        .iter()
        .filter(|r| seen.insert(r.weierstrass))
        .cloned()
        .collect()
}

/// A Weierstrass tuple that occurs more than once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateEntry {
    pub weierstrass: [i64; 5],
    pub occurrences: usize,
    /// Families containing the tuple, in order of first appearance.
    pub families: Vec<String>,
}

pub fn duplicate_report(records: &[CurveRecord]) -> Vec<DuplicateEntry> {
    let mut order = Vec::new();
    let mut map: HashMap<[i64; 5], DuplicateEntry> = HashMap::new();
    for r in records {
        let e = map.entry(r.weierstrass).or_insert_with(|| {
            order.push(r.weierstrass);
            DuplicateEntry {
                weierstrass: r.weierstrass,
                occurrences: 0,
                families: Vec::new(),
            }
        });
        e.occurrences += 1;
        if !e.families.contains(&r.family_id) {
            e.families.push(r.family_id.clone());
        }
    }
    order
        .into_iter()
        .filter_map(|k| map.remove(&k))
        .filter(|e| e.occurrences > 1)
        .collect()
}

/// Concatenate datasets, keeping every record and provenance entry.
pub fn amalgamate(datasets: &[ZeroDataset]) -> (ZeroDataset, Vec<DuplicateEntry>) {
    let mut out = ZeroDataset::default();
    for ds in datasets {
        out.records.extend(ds.records.iter().cloned());
        out.provenance.extend(ds.provenance.iter().cloned());
    }
    let report = duplicate_report(&out.records);
    (out, report)
}

/// One row of a first-normalized-zero table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub median: f64,
    pub mean: f64,
    pub stdev: f64,
    pub log_conductor_min: f64,
    pub log_conductor_max: f64,
    pub count: usize,
}

/// Summary of the first normalized zero; `None` for no records.
pub fn first_zero_row(label: &str, records: &[CurveRecord]) -> Result<Option<TableRow>> {
    if records.is_empty() {
        return Ok(None);
    }
    let mut firsts = Vec::with_capacity(records.len());
    let mut lmin = f64::INFINITY;
    let mut lmax = f64::NEG_INFINITY;
    for r in records {
        firsts.push(normalize_zeros(r)?[0]);
        let l = r.log_conductor()?;
        lmin = lmin.min(l);
        lmax = lmax.max(l);
    }
    let s = descriptive(&firsts)?;
    Ok(Some(TableRow {
        label: label.to_string(),
        median: s.median,
        mean: s.mean,
        stdev: s.stdev,
        log_conductor_min: lmin,
        log_conductor_max: lmax,
        count: s.n,
    }))
}

/// Per-family rows followed by the all-curves and distinct-curves rows.
pub fn family_table(ds: &ZeroDataset) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for fam in ds.families() {
        let members: Vec<CurveRecord> = ds
            .records
            .iter()
            .filter(|r| r.family_id == fam)
            .cloned()
            .collect();
        rows.extend(first_zero_row(&fam, &members)?);
    }
    rows.extend(first_zero_row(ALL_CURVES, &ds.records)?);
    rows.extend(first_zero_row(DISTINCT_CURVES, &dedup(&ds.records))?);
    Ok(rows)
}

/// One spacing quantity across groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingRow {
    /// `z2-z1`, `z3-z2` or `z3-z1`.
    pub quantity: String,
    pub groups: Vec<SampleSummary>,
    /// Two-sample t between the first two groups.
    pub t_statistic: Option<f64>,
}

/// Spacing summaries for each group; records with fewer than three zeros
/// are left out.
pub fn spacing_table(groups: &[&ZeroDataset], unpooled: bool) -> Result<Vec<SpacingRow>> {
    let mut per_group: Vec<[Vec<f64>; 3]> = Vec::new();
    for g in groups {
        let mut cols: [Vec<f64>; 3] = Default::default();
        for r in g.records.iter().filter(|r| r.zeros.len() >= 3) {
            let d = spacing_differences(&r.zeros, zero_scale(r)?)?;
            for k in 0..3 {
                cols[k].push(d[k]);
            }
        }
        if cols[0].is_empty() {
            return Err(Error::EmptyInput(
                "a spacing group has no record with three zeros".into(),
            ));
        }
        per_group.push(cols);
    }
    let names = ["z2-z1", "z3-z2", "z3-z1"];
    let mut rows = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let summaries = per_group
            .iter()
            .map(|cols| descriptive(&cols[k]))
            .collect::<Result<Vec<_>>>()?;
        let t_statistic = if summaries.len() >= 2 && summaries[0].n >= 2 && summaries[1].n >= 2 {
            let (a, b) = (
                GroupSummary::from(summaries[0]),
                GroupSummary::from(summaries[1]),
            );
            let r = if unpooled {
                unpooled_t_summary(a, b, Tail::TwoSided)
            } else {
                pooled_t_summary(a, b, Tail::TwoSided)
            };
            r.ok().map(|r| r.statistic)
        } else {
            None
        };
        rows.push(SpacingRow {
            quantity: name.to_string(),
            groups: summaries,
            t_statistic,
        });
    }
    Ok(rows)
}
