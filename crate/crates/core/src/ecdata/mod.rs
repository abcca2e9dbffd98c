//! Elliptic-curve zero data: records, ingestion, partitioning, Fourier
//! coefficients by point counting, and both sides of the explicit formula.

mod ap;
mod explicit;
mod io;
mod partition;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ap::{
    ap_point_count, discriminant_mod, is_prime, primes_up_to, ApValue, Reduction, MAX_PRIME,
};
pub use explicit::{
    explicit_formula_prime_side, validate_test_function, zero_side_sum, ExplicitFormulaValue,
    FejerPair, TestFunction, ZeroSideValue,
};
pub use io::{
    parse_csv_str, parse_dataset, parse_json_str, write_csv, write_json, DataFormat, Diagnostic,
    ParseMode, ParsedDataset,
};
pub use partition::{
    amalgamate, duplicate_report, family_table, filter_partition, first_zero_row, spacing_table,
    DuplicateEntry, SpacingRow, TableRow, ALL_CURVES, DISTINCT_CURVES,
};

/// One curve `y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆` with its first zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    /// `[a₁, a₂, a₃, a₄, a₆]`.
    pub weierstrass: [i64; 5],
    pub conductor: Option<u64>,
    /// Natural log of the conductor; may stand in for an overflowing
    /// conductor.
    pub log_conductor: Option<f64>,
    pub rank: u32,
    pub sign: i8,
    pub family_id: String,
    pub t_param: Option<i64>,
    /// Imaginary parts of the zeros above the central point, ascending.
    pub zeros: Vec<f64>,
}

impl CurveRecord {
    /// `log C`, from the stored log-conductor if present.
    pub fn log_conductor(&self) -> Result<f64> {
        match (self.log_conductor, self.conductor) {
            (Some(l), _) => Ok(l),
            (None, Some(c)) => Ok((c as f64).ln()),
            (None, None) => Err(Error::Validation("record has no conductor".into())),
        }
    }

    /// Hard invariants; the returned strings are soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Validation(format!(
                "sign must be +1 or -1, got {}",
                self.sign
            )));
        }
        if self.zeros.is_empty() {
            return Err(Error::Validation("record has no zeros".into()));
        }
        if self.zeros.iter().any(|z| !(z.is_finite() && *z > 0.0)) {
            return Err(Error::Validation(
                "zeros must be finite and positive".into(),
            ));
        }
        if self.zeros.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "zeros must be strictly increasing".into(),
            ));
        }
        if self.conductor == Some(0) {
            return Err(Error::Validation("conductor must be positive".into()));
        }
        if let Some(l) = self.log_conductor {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::Validation(format!("invalid log-conductor {l}")));
            }
        }
        if let (Some(c), Some(l)) = (self.conductor, self.log_conductor) {
            let ln = (c as f64).ln();
            if (ln - l).abs() > 1e-6 * ln.max(1.0) {
                warnings.push(format!(
                    "log_conductor {l} differs from ln(conductor) = {ln}"
                ));
            }
        }
        self.log_conductor()?;
        let expected = if self.rank % 2 == 0 { 1 } else { -1 };
        if self.sign != expected {
            warnings.push(format!(
                "sign {:+} does not match the parity of rank {}",
                self.sign, self.rank
            ));
        }
        Ok(warnings)
    }
}

/// Where a dataset came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Hex SHA-256 of the source bytes.
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ZeroDataset {
    pub records: Vec<CurveRecord>,
    pub provenance: Vec<Provenance>,
}

impl ZeroDataset {
    pub fn new(records: Vec<CurveRecord>) -> Self {
        Self {
            records,
            provenance: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Family ids in order of first appearance.
    pub fn families(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        for r in &self.records {
            if !seen.contains(&r.family_id) {
                seen.push(r.family_id.clone());
            }
        }
        seen
    }
}

/// `γ_j · log C / 2π` for every stored zero.
pub fn normalize_zeros(record: &CurveRecord) -> Result<Vec<f64>> {
    let scale = zero_scale(record)?;
    Ok(record.zeros.iter().map(|g| g * scale).collect())
}

/// `log C / 2π`.
pub fn zero_scale(record: &CurveRecord) -> Result<f64> {
    let l = record.log_conductor()?;
    if !(l > 0.0) {
        return Err(Error::Domain(format!(
            "normalization needs conductor > 1 (log-conductor {l})"
        )));
    }
    Ok(l / TAU)
}


#[cfg(test)]
mod tests {
    use super::fixtures::record;
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalization_examples() {
        let r = record([0, 0, 0, -1, 0], TAU, 0, "f", &[1.0, 2.5]);
        assert_eq!(normalize_zeros(&r).unwrap(), vec![1.0, 2.5]);
        let r = record([0, 0, 0, -1, 0], PI, 0, "f", &[2.0]);
        assert!((normalize_zeros(&r).unwrap()[0] - 1.0).abs() < 1e-15);
        let mut r = record([0; 5], 0.0, 0, "f", &[1.0]);
        assert!(normalize_zeros(&r).is_err());
        r.log_conductor = None;
        r.conductor = Some(1);
        assert!(normalize_zeros(&r).is_err());
        r.conductor = Some(389);
        assert!((normalize_zeros(&r).unwrap()[0] - 389f64.ln() / TAU).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let good = record([0, 1, 1, 1, 5], 15.2, 0, "f", &[0.5, 1.0]);
        assert!(good.validate().unwrap().is_empty());
        let mut bad = good.clone();
        bad.zeros = vec![1.0, 0.5];
        assert!(bad.validate().is_err());
        bad.zeros = vec![0.0, 0.5];
        assert!(bad.validate().is_err());
        let mut odd = good.clone();
        odd.sign = -1;
        assert_eq!(odd.validate().unwrap().len(), 1);
        odd.sign = 0;
        assert!(odd.validate().is_err());
    }
}
