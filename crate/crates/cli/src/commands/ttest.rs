use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;
use zerorep::stats::{pooled_t_summary, sign_test, unpooled_t_summary, z_test, GroupSummary, Tail};

use crate::config::{parse_list, parse_triple, resolve_output, RunConfig, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    TwoSided,
    Lower,
    Upper,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::TwoSided => Tail::TwoSided,
            TailArg::Lower => Tail::Lower,
            TailArg::Upper => Tail::Upper,
        }
    }
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["summary", "csv", "sign", "z"]))]
pub struct TtestArgs {
    /// Two group summaries, each n,mean,sd.
    #[arg(long, num_args = 2, value_names = ["N,MEAN,SD", "N,MEAN,SD"])]
    pub summary: Option<Vec<String>>,
    /// CSV file holding the two samples as columns.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Column names, a,b (defaults to the first two columns).
    #[arg(long, requires = "csv")]
    pub columns: Option<String>,
    /// Welch's test instead of the pooled-variance test.
    #[arg(long)]
    pub unpooled: bool,
    #[arg(long, value_enum, default_value = "two-sided")]
    pub tail: TailArg,
    /// Sign test: k of n observations fall below, as k,n.
    #[arg(long)]
    pub sign: Option<String>,
    /// Normal tail probability of a z statistic.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
}

fn read_columns(path: &PathBuf, columns: Option<&str>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let idx = match columns {
        Some(c) => {
            let names: Vec<&str> = c.split(',').map(str::trim).collect();
            if names.len() != 2 {
                bail!("--columns needs two names, got {c:?}");
            }
            let find = |n: &str| {
                headers
                    .iter()
                    .position(|h| h == n)
                    .with_context(|| format!("column {n:?} not found in {}", path.display()))
            };
            [find(names[0])?, find(names[1])?]
        }
        None if headers.len() >= 2 => [0, 1],
        None => bail!("{} has fewer than two columns", path.display()),
    };
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (col, dst) in idx.iter().zip([&mut a, &mut b]) {
            match rec.get(*col) {
                None | Some("") => {}
                Some(v) => {
                    dst.push(v.parse::<f64>().with_context(|| {
                        format!("line {}: cannot parse {v:?} as a number", i + 2)
                    })?)
                }
            }
        }
    }
    Ok((a, b))
}

pub fn run(a: TtestArgs) -> Result<()> {
    let tail: Tail = a.tail.into();
    let params = json!({
        "summary": a.summary, "csv": a.csv, "columns": a.columns,
        "unpooled": a.unpooled, "tail": tail, "sign": a.sign, "z": a.z,
    });
    let mut run = RunConfig::new("ttest", params, DEFAULT_SEED, resolve_output(None));
    run.format = vec!["json"];

    let t = |x: GroupSummary, y: GroupSummary| {
        if a.unpooled {
            unpooled_t_summary(x, y, tail)
        } else {
            pooled_t_summary(x, y, tail)
        }
    };
    let result = if let Some(s) = &a.summary {
        let (n1, m1, s1) = parse_triple(&s[0])?;
        let (n2, m2, s2) = parse_triple(&s[1])?;
        t(GroupSummary::new(n1, m1, s1), GroupSummary::new(n2, m2, s2))?
    } else if let Some(path) = &a.csv {
        let (x, y) = read_columns(path, a.columns.as_deref())?;
        t(GroupSummary::from_data(&x)?, GroupSummary::from_data(&y)?)?
    } else if let Some(s) = &a.sign {
        let v: Vec<u64> = parse_list(s, "--sign")?;
        if v.len() != 2 {
            bail!("--sign needs k,n");
        }
        sign_test(v[0], v[1])?
    } else if let Some(z) = a.z {
        z_test(z)
    } else {
        unreachable!("clap requires one input")
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({ "config": run, "result": result }))?
    );
    Ok(())
}
