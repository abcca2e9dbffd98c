use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;
use zerorep::ecdata::{
    duplicate_report, family_table, filter_partition, parse_dataset, spacing_table, DataFormat,
    ParseMode, TableRow, ZeroDataset, DISTINCT_CURVES,
};

use crate::artifacts::Artifacts;
use crate::config::{resolve_output, Range, RunConfig, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Zero dataset (CSV or JSON).
    #[arg(long)]
    pub data: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Skip malformed records instead of failing.
    #[arg(long)]
    pub lenient: bool,
    #[arg(long)]
    pub rank: Option<u32>,
    /// Half-open log-conductor range lo:hi.
    #[arg(long)]
    pub logcond: Option<Range>,
    /// Add the distinct-curves row and a duplicate report.
    #[arg(long)]
    pub dedup: bool,
    /// Spacing table of the first three normalized zeros.
    #[arg(long)]
    pub spacing: bool,
    /// Second spacing group: the same filters with this rank.
    #[arg(long, requires = "spacing")]
    pub versus_rank: Option<u32>,
    /// Welch's t for the spacing comparison.
    #[arg(long, requires = "versus_rank")]
    pub unpooled: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "analyze_")]
    pub prefix: String,
}

#[derive(Serialize)]
struct SpacingCsvRow {
    quantity: String,
    group: String,
    n: usize,
    median: f64,
    mean: f64,
    stdev: f64,
    t_statistic: Option<f64>,
}

fn group_label(rank: Option<u32>) -> String {
    match rank {
        Some(r) => format!("rank{r}"),
        None => "all ranks".to_string(),
    }
}

pub fn run(a: AnalyzeArgs) -> Result<()> {
    let format = a.format.map(|f| match f {
        FormatArg::Csv => DataFormat::Csv,
        FormatArg::Json => DataFormat::Json,
    });
    let mode = if a.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let parsed = parse_dataset(&a.data, format, mode)
        .with_context(|| format!("cannot load {}", a.data.display()))?;
    for d in &parsed.skipped {
        eprintln!("warning: line {}: skipped: {}", d.line, d.message);
    }
    for d in &parsed.warnings {
        eprintln!("warning: line {}: {}", d.line, d.message);
    }
    let (lo, hi) = a
        .logcond
        .as_ref()
        .map_or((f64::NEG_INFINITY, f64::INFINITY), |r| (r.lo, r.hi));

    let output = resolve_output(a.output.clone());
    let params = json!({
        "data": a.data, "provenance": parsed.dataset.provenance, "lenient": a.lenient,
        "rank": a.rank, "logcond": a.logcond.as_ref().map(|r| [r.lo, r.hi]),
        "dedup": a.dedup, "spacing": a.spacing, "versus_rank": a.versus_rank,
        "unpooled": a.unpooled,
    });
    let mut run = RunConfig::new("analyze", params, DEFAULT_SEED, output.clone());
    run.format = vec!["csv", "json"];

    let selected = filter_partition(&parsed.dataset, lo, hi, a.rank, false)?;
    if selected.is_empty() {
        eprintln!("warning: no records match the filters");
    }
    let rows: Vec<TableRow> = family_table(&selected)?
        .into_iter()
        .filter(|r| a.dedup || r.label != DISTINCT_CURVES)
        .collect();

    let mut out = Artifacts::new(&output, &a.prefix)?;
    out.stage("table.csv", |w| write_table(w, &rows))?;
    let duplicates = a.dedup.then(|| duplicate_report(&selected.records));
    if let Some(d) = &duplicates {
        out.stage_json("duplicates.json", d)?;
    }

    let mut spacing = Vec::new();
    if a.spacing {
        let mut groups: Vec<(Option<u32>, ZeroDataset)> = vec![(
            a.rank,
            filter_partition(&parsed.dataset, lo, hi, a.rank, a.dedup)?,
        )];
        if let Some(r) = a.versus_rank {
            groups.push((
                Some(r),
                filter_partition(&parsed.dataset, lo, hi, Some(r), a.dedup)?,
            ));
        }
        let refs: Vec<&ZeroDataset> = groups.iter().map(|g| &g.1).collect();
        for row in spacing_table(&refs, a.unpooled)? {
            for (g, s) in groups.iter().zip(&row.groups) {
                spacing.push(SpacingCsvRow {
                    quantity: row.quantity.clone(),
                    group: group_label(g.0),
                    n: s.n,
                    median: s.median,
                    mean: s.mean,
                    stdev: s.stdev,
                    t_statistic: row.t_statistic,
                });
            }
        }
        out.stage("spacing.csv", |w| super::write_rows(w, &spacing))?;
    }

    out.stage_json(
        "summary.json",
        &json!({
            "config": run,
            "records": parsed.dataset.len(),
            "selected": selected.len(),
            "skipped": parsed.skipped.len(),
            "warnings": parsed.warnings.len(),
            "duplicates": duplicates.as_ref().map(Vec::len),
            "table": rows,
        }),
    )?;
    let files = out.commit(&run)?;
    for r in &rows {
        println!(
            "{:<40} n {:>6} median {:.4} mean {:.4} stdev {:.4}",
            r.label, r.count, r.median, r.mean, r.stdev
        );
    }
    super::report(&files);
    Ok(())
}

/// Header is always written, even with no rows.
fn write_table(w: &mut dyn std::io::Write, rows: &[TableRow]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record([
        "label",
        "median",
        "mean",
        "stdev",
        "log_conductor_min",
        "log_conductor_max",
        "count",
    ])?;
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
