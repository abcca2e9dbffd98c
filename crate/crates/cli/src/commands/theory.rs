use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use serde_json::json;
use zerorep::fredholm::{
    finite_n_mean, first_level_mean_with, gap_probability, spacing_density_for, MeanEstimate,
    DEFAULT_ORDER,
};
use zerorep::kernels::{
    one_level_density, one_level_density_fourier, one_level_density_fourier_numerical, KernelSpec,
};

use crate::artifacts::Artifacts;
use crate::config::{resolve_output, Grid, RunConfig, DEFAULT_SEED};

/// Window for the numerical Fourier transform when no closed form exists.
const FT_WINDOW: f64 = 200.0;

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("quantity").required(true).args(["density", "gap", "mean", "ft"]))]
pub struct TheoryArgs {
    /// 1-level density over --grid.
    #[arg(long)]
    pub density: bool,
    /// Gap probability E(k; s) and spacing density p(k; s) over --grid.
    #[arg(long)]
    pub gap: bool,
    /// Mean of the first normalized level.
    #[arg(long)]
    pub mean: bool,
    /// Fourier transform of the 1-level density at --u or over --grid.
    #[arg(long)]
    pub ft: bool,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    /// start:stop:step (stop excluded).
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Quadrature order of the Fredholm discretization.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Finite-N mean for a matrix with this many eigenvalue pairs.
    #[arg(long, requires = "mean")]
    pub finite_n: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "theory_")]
    pub prefix: String,
}

#[derive(Serialize)]
struct DensityRow {
    x: f64,
    smooth: f64,
    point_mass_at_zero: u32,
}

#[derive(Serialize)]
struct GapRow {
    s: f64,
    #[serde(rename = "E")]
    e: f64,
    p: f64,
}

#[derive(Serialize)]
struct FtRow {
    u: f64,
    smooth: f64,
    delta_mass: f64,
}

fn grid(a: &TheoryArgs) -> Result<Vec<f64>> {
    match &a.grid {
        Some(g) => Ok(g.points()),
        None => bail!("--grid start:stop:step is required"),
    }
}

/// Smooth density with the origin given by its one-sided limit.
fn density_at(m: u32, x: f64) -> Result<DensityRow> {
    if x == 0.0 {
        return Ok(DensityRow {
            x,
            smooth: if m == 0 { 2.0 } else { 0.0 },
            point_mass_at_zero: m,
        });
    }
    let d = one_level_density(m, x)?;
    Ok(DensityRow {
        x,
        smooth: d.smooth,
        point_mass_at_zero: d.point_mass_at_zero,
    })
}

/// One-sided limits at `s = 0`: no level can lie in an empty interval, and
/// the first level is distributed like the 1-level density near the origin.
fn gap_at_origin(m: u32, k: usize) -> GapRow {
    GapRow {
        s: 0.0,
        e: if k == 0 { 1.0 } else { 0.0 },
        p: if k == 0 && m == 0 { 2.0 } else { 0.0 },
    }
}

fn fourier_at(m: u32, u: f64) -> Result<(FtRow, &'static str)> {
    let (v, method) = if m <= 2 {
        (one_level_density_fourier(m, u)?, "closed-form")
    } else {
        (
            one_level_density_fourier_numerical(m, u, FT_WINDOW)?,
            "numerical",
        )
    };
    Ok((
        FtRow {
            u,
            smooth: v.smooth,
            delta_mass: v.delta_mass,
        },
        method,
    ))
}

pub fn run(a: TheoryArgs) -> Result<()> {
    let output = resolve_output(a.output.clone());
    let params = json!({
        "density": a.density, "gap": a.gap, "mean": a.mean, "ft": a.ft,
        "m": a.m, "grid": a.grid.as_ref().map(|g| [g.start, g.stop, g.step]),
        "u": a.u, "k": a.k, "order": a.order, "finite_n": a.finite_n,
    });
    let mut run = RunConfig::new("theory", params, DEFAULT_SEED, output.clone());
    let mut out = Artifacts::new(&output, &a.prefix)?;

    if a.density {
        run.format = vec!["csv"];
        let rows = grid(&a)?
            .into_iter()
            .map(|x| density_at(a.m, x))
            .collect::<Result<Vec<_>>>()?;
        out.stage("density.csv", |w| super::write_rows(w, &rows))?;
    } else if a.gap {
        run.format = vec!["csv"];
        let rows = grid(&a)?
            .into_iter()
            .map(|s| -> Result<GapRow> {
                if s == 0.0 {
                    return Ok(gap_at_origin(a.m, a.k));
                }
                Ok(GapRow {
                    s,
                    e: gap_probability(a.m, a.k, s, a.order)?.probability,
                    p: spacing_density_for(KernelSpec::LimitingHard { m: a.m }, a.k, s, a.order)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.stage("gap.csv", |w| super::write_rows(w, &rows))?;
    } else if a.mean {
        run.format = vec!["json"];
        let (est, model): (MeanEstimate, _) = match a.finite_n {
            Some(n) => (finite_n_mean(n, a.m as f64 - 0.5, -0.5)?, "finite"),
            None => (first_level_mean_with(a.m, a.order)?, "limiting"),
        };
        let value = json!({ "config": run, "model": model, "result": est });
        out.stage_json("mean.json", &value)?;
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        match (a.u, &a.grid) {
            (Some(u), _) => {
                run.format = vec!["json"];
                let (row, method) = fourier_at(a.m, u)?;
                let value = json!({ "config": run, "method": method, "result": row });
                out.stage_json("ft.json", &value)?;
                println!("{}", serde_json::to_string_pretty(&value)?);
            }
            (None, Some(_)) => {
                run.format = vec!["csv"];
                let rows = grid(&a)?
                    .into_iter()
                    .map(|u| fourier_at(a.m, u).map(|r| r.0))
                    .collect::<Result<Vec<_>>>()?;
                out.stage("ft.csv", |w| super::write_rows(w, &rows))?;
            }
            (None, None) => bail!("--ft needs --u or --grid"),
        }
    }
    let files = out.commit(&run)?;
    if !(a.mean || a.u.is_some()) {
        super::report(&files);
    }
    Ok(())
}
