//! Run configuration, seeds, grids and output locations.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ZEROREP_OUTPUT_DIR";

/// The fully resolved invocation, embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: Value,
    pub seed: u64,
    pub output: PathBuf,
    pub format: Vec<&'static str>,
    pub version: &'static str,
}

impl RunConfig {
    pub fn new(command: &'static str, params: Value, seed: u64, output: PathBuf) -> Self {
        Self {
            command,
            params,
            seed,
            output,
            format: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// `--seed N` or `--seed random`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl std::str::FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(Self::Random);
        }
        s.parse::<u64>()
            .map(Self::Fixed)
            .map_err(|_| format!("seed must be a non-negative integer or `random`, got {s:?}"))
    }
}

pub fn resolve_seed(arg: Option<SeedArg>) -> u64 {
    match arg {
        None => DEFAULT_SEED,
        Some(SeedArg::Fixed(s)) => s,
        Some(SeedArg::Random) => rand::random(),
    }
}

pub fn resolve_output(arg: Option<PathBuf>) -> PathBuf {
    arg.or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// `start:stop:step`, start included, stop excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step - 1e-9)
            .ceil()
            .max(0.0) as usize;
        (0..n)
            .map(|i| self.start + i as f64 * self.step)
            .filter(|&x| x < self.stop)
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must look like start:stop:step, got {s:?}"));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {p:?} in grid {s:?}"))
        };
        let g = Grid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(g.step > 0.0)
            || !(g.start < g.stop)
            || ![g.start, g.stop, g.step].iter().all(|v| v.is_finite())
        {
            return Err(format!("grid needs start < stop and step > 0, got {s:?}"));
        }
        Ok(g)
    }
}

/// `lo:hi` as a half-open range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("range must look like lo:hi, got {s:?}"))?;
        let lo = a
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number {a:?}"))?;
        let hi = b
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number {b:?}"))?;
        if !(lo < hi) {
            return Err(format!("range needs lo < hi, got {s:?}"));
        }
        Ok(Range { lo, hi })
    }
}

/// Comma-separated numbers.
pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .ok()
                .with_context(|| format!("{what}: cannot parse {p:?}"))
        })
        .collect()
}

/// `n,mean,sd`.
pub fn parse_triple(s: &str) -> Result<(usize, f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("summary must look like n,mean,sd, got {s:?}");
    }
    Ok((
        parts[0]
            .parse()
            .with_context(|| format!("bad count {:?}", parts[0]))?,
        parts[1]
            .parse()
            .with_context(|| format!("bad mean {:?}", parts[1]))?,
        parts[2]
            .parse()
            .with_context(|| format!("bad sd {:?}", parts[2]))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_excludes_stop() {
        let g: Grid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75]);
        let g: Grid = "0:5:0.01".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 500);
        assert!(*p.last().unwrap() < 5.0);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!("42".parse::<SeedArg>().unwrap(), SeedArg::Fixed(42));
        assert_eq!("random".parse::<SeedArg>().unwrap(), SeedArg::Random);
        assert!("-1".parse::<SeedArg>().is_err());
        assert_eq!(resolve_seed(None), DEFAULT_SEED);
    }

    #[test]
    fn triples_and_ranges() {
        assert_eq!(parse_triple("350,1.97,0.37").unwrap(), (350, 1.97, 0.37));
        assert!(parse_triple("350,1.97").is_err());
        let r: Range = "15:16".parse().unwrap();
        assert_eq!((r.lo, r.hi), (15.0, 16.0));
        assert!("16:15".parse::<Range>().is_err());
    }
}
