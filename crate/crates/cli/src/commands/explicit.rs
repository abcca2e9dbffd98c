use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::json;
use zerorep::ecdata::{
    explicit_formula_prime_side, parse_dataset, zero_side_sum, FejerPair, ParseMode,
};

use zerorep::ecdata::MAX_PRIME;

use crate::config::{parse_list, resolve_output, RunConfig, DEFAULT_SEED};

#[derive(Args, Debug)]
pub struct ExplicitArgs {
    /// Weierstrass coefficients a1,a2,a3,a4,a6.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, conflicts_with = "conductor")]
    pub log_conductor: Option<f64>,
    #[arg(long)]
    pub conductor: Option<u64>,
    /// Support of the Fejér test function's transform.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Largest prime summed; defaults to the support cutoff C^σ.
    #[arg(long)]
    pub prime_cutoff: Option<u64>,
    /// Dataset to take the curve and its zeros from.
    #[arg(long, requires = "index")]
    pub data: Option<PathBuf>,
    /// 1-based record number in --data.
    #[arg(long, requires = "data")]
    pub index: Option<usize>,
}

pub fn run(a: ExplicitArgs) -> Result<()> {
    let record = match (&a.data, a.index) {
        (Some(path), Some(i)) => {
            let parsed = parse_dataset(path, None, ParseMode::Strict)
                .with_context(|| format!("cannot load {}", path.display()))?;
            let n = parsed.dataset.len();
            if i == 0 || i > n {
                bail!("--index {i} is outside 1..={n}");
            }
            Some(parsed.dataset.records[i - 1].clone())
        }
        _ => None,
    };
    let weierstrass: [i64; 5] = match (&a.curve, &record) {
        (Some(c), _) => {
            let v: Vec<i64> = parse_list(c, "--curve")?;
            v.try_into().map_err(|v: Vec<i64>| {
                anyhow::anyhow!("--curve needs 5 coefficients, got {}", v.len())
            })?
        }
        (None, Some(r)) => r.weierstrass,
        (None, None) => bail!("give --curve or --data with --index"),
    };
    let log_conductor = match (a.log_conductor, a.conductor, &record) {
        (Some(l), _, _) => l,
        (None, Some(c), _) => (c as f64).ln(),
        (None, None, Some(r)) => r.log_conductor()?,
        (None, None, None) => bail!("give --log-conductor or --conductor"),
    };
    let tf = FejerPair::new(a.sigma)?;
    let support = (a.sigma * log_conductor).exp();
    let cutoff = match a.prime_cutoff {
        Some(c) => c,
        None if support <= MAX_PRIME as f64 => support.ceil().max(2.0) as u64,
        None => bail!(
            "support cutoff C^σ = {support:.3e} exceeds {MAX_PRIME}; pass --prime-cutoff to truncate"
        ),
    };
    let prime = explicit_formula_prime_side(weierstrass, log_conductor, &tf, cutoff)?;
    let zero = record
        .as_ref()
        .filter(|r| !r.zeros.is_empty())
        .map(|r| zero_side_sum(r, &tf))
        .transpose()?;

    let params = json!({
        "curve": weierstrass, "log_conductor": log_conductor, "sigma": a.sigma,
        "test_function": "fejer", "prime_cutoff": cutoff,
        "data": a.data, "index": a.index,
    });
    let mut run = RunConfig::new("explicit", params, DEFAULT_SEED, resolve_output(None));
    run.format = vec!["json"];
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "config": run,
            "prime_side": prime,
            "zero_side": zero,
        }))?
    );
    Ok(())
}
