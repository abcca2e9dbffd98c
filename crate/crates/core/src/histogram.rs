//! Fixed-width histograms with CSV output.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    bin_left: f64,
    bin_right: f64,
    count: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "histogram needs lo < hi and bins > 0 (got [{lo}, {hi}), {bins} bins)"
            )));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn from_values(lo: f64, hi: f64, bins: usize, values: &[f64]) -> Result<Self> {
        let mut h = Self::new(lo, hi, bins)?;
        for &v in values {
            h.add(v);
        }
        Ok(h)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w)
    }

    /// Bins are half-open `[left, right)`.
    pub fn add(&mut self, v: f64) {
        if v < self.lo {
            self.underflow += 1;
        } else if v >= self.hi {
            self.overflow += 1;
        } else {
            let i = (((v - self.lo) / self.width()) as usize).min(self.bins() - 1);
            self.counts[i] += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    /// Counts divided by `total · width`.
    pub fn density(&self) -> Vec<f64> {
        let norm = self.total() as f64 * self.width();
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }

    /// CSV with columns `bin_left, bin_right, count`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for (i, &count) in self.counts.iter().enumerate() {
            let (bin_left, bin_right) = self.edges(i);
            out.serialize(Row {
                bin_left,
                bin_right,
                count,
            })?;
        }
        out.flush().map_err(|e| Error::Io {
            path: "<histogram>".into(),
            source: e,
        })?;
        Ok(())
    }

    /// Read back a CSV written by [`Histogram::write_csv`]. Under- and
    /// overflow are not stored and come back as zero.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for row in csv::Reader::from_reader(r).deserialize::<Row>() {
            rows.push(row?);
        }
        let (first, last) = match (rows.first(), rows.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::EmptyInput("histogram CSV has no rows".into())),
        };
        let mut h = Self::new(first.bin_left, last.bin_right, rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            h.counts[i] = row.count;
        }
        Ok(h)
    }
}
