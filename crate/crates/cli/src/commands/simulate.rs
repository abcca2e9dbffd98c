use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;
use zerorep::ensembles::{
    simulate_first_angle_stats, AngleScale, EnsembleSpec, McmcConfig, SimulationConfig,
};
use zerorep::fredholm::spacing_density;

use crate::artifacts::Artifacts;
use crate::config::{resolve_output, resolve_seed, Range, RunConfig, SeedArg};
use crate::svg::histogram_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Haar,
    Independent,
    Interaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    So,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Pairs,
    HalfDimension,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "haar")]
    pub model: Model,
    #[arg(long, value_enum, default_value = "so")]
    pub group: Group,
    /// Matrix size for the Haar model.
    #[arg(long)]
    pub size: Option<usize>,
    /// Eigenvalue pairs N (independent) or free level pairs (interaction).
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Forced pairs r of the independent model.
    #[arg(long, default_value_t = 0)]
    pub forced: usize,
    /// Hardness of the interaction model.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Integer seed or `random`.
    #[arg(long)]
    pub seed: Option<SeedArg>,
    #[arg(long, value_enum, default_value = "pairs")]
    pub scale: Scale,
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
    /// Histogram range lo:hi.
    #[arg(long, default_value = "0:3")]
    pub range: Range,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub thinning: Option<u64>,
    #[arg(long)]
    pub proposal_width: Option<f64>,
    /// Draws per chain for the interaction model.
    #[arg(long, default_value_t = 1000)]
    pub chain_length: usize,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write an SVG histogram.
    #[arg(long)]
    pub svg: bool,
    /// Overlay the limiting first-level density on the SVG.
    #[arg(long, requires = "svg")]
    pub overlay: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "simulate_")]
    pub prefix: String,
}

fn build_spec(a: &SimulateArgs) -> Result<EnsembleSpec> {
    Ok(match a.model {
        Model::Haar => EnsembleSpec::Haar {
            size: a.size.context("--size is required for the haar model")?,
        },
        Model::Independent => EnsembleSpec::Independent {
            pairs: a
                .pairs
                .context("--pairs is required for the independent model")?,
            forced: a.forced,
        },
        Model::Interaction => {
            let pairs = a
                .pairs
                .context("--pairs is required for the interaction model")?;
            let d = McmcConfig::for_pairs(pairs, 0);
            EnsembleSpec::Interaction {
                pairs,
                m: a.m.context("--m is required for the interaction model")?,
                burn_in: a.burn_in.unwrap_or(d.burn_in),
                thinning: a.thinning.unwrap_or(d.thinning),
                proposal_width: a.proposal_width.unwrap_or(d.proposal_width),
            }
        }
    })
}

/// Hardness of the limiting edge for the first free level.
fn limiting_hardness(spec: &EnsembleSpec) -> u32 {
    match *spec {
        EnsembleSpec::Haar { size } => (size % 2) as u32,
        EnsembleSpec::Independent { .. } => 0,
        EnsembleSpec::Interaction { m, .. } => m,
    }
}

pub fn run(a: SimulateArgs) -> Result<()> {
    let spec = build_spec(&a)?;
    spec.validate()?;
    if a.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let seed = resolve_seed(a.seed);
    let output = resolve_output(a.output.clone());
    let mut cfg = SimulationConfig::new(spec, a.samples, seed);
    cfg.scale = match a.scale {
        Scale::Pairs => AngleScale::Pairs,
        Scale::HalfDimension => AngleScale::HalfDimension,
    };
    cfg.bins = a.bins;
    cfg.hist_lo = a.range.lo;
    cfg.hist_hi = a.range.hi;
    cfg.chain_length = a.chain_length;

    let mut run = RunConfig::new(
        "simulate",
        json!({ "simulation": cfg, "group": "so", "svg": a.svg, "overlay": a.overlay }),
        seed,
        output.clone(),
    );
    run.format = if a.svg {
        vec!["csv", "json", "svg"]
    } else {
        vec!["csv", "json"]
    };

    let stats = match a.threads {
        Some(n) => rayon_pool(n)?.install(|| simulate_first_angle_stats(&cfg))?,
        None => simulate_first_angle_stats(&cfg)?,
    };
    let hist = stats
        .histogram
        .clone()
        .context("simulation returned no histogram")?;

    let mut out = Artifacts::new(&output, &a.prefix)?;
    out.stage("histogram.csv", |w| Ok(hist.write_csv(w)?))?;
    out.stage_json(
        "summary.json",
        &json!({
            "config": run,
            "summary": stats,
            "underflow": hist.underflow,
            "overflow": hist.overflow,
        }),
    )?;
    if a.svg {
        let reference = if a.overlay {
            let m = limiting_hardness(&spec);
            let n = 120;
            (1..=n)
                .map(|i| {
                    let s = a.range.lo + (a.range.hi - a.range.lo) * i as f64 / n as f64;
                    spacing_density(m, 0, s.max(1e-6)).map(|p| (s, p))
                })
                .collect::<zerorep::Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let title = format!("first normalized angle, n = {}", stats.n);
        let desc = serde_json::to_string(&run)?;
        let svg = histogram_svg(&hist, &title, &reference, &desc);
        out.stage("histogram.svg", |w| Ok(w.write_all(svg.as_bytes())?))?;
    }
    let files = out.commit(&run)?;
    println!(
        "mean {:.6} median {:.6} stdev {:.6} n {} forced {}",
        stats.mean, stats.median, stats.stdev, stats.n, stats.forced_multiplicity
    );
    super::report(&files);
    Ok(())
}

fn rayon_pool(n: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .context("cannot build the worker pool")
}
