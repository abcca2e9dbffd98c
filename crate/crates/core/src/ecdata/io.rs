//! CSV and JSON ingestion with line diagnostics.
//!
//! Columns: `a1,a2,a3,a4,a6,conductor,log_conductor,rank,sign,family_id,t,z1,z2,...`.
//! `conductor` may be empty when `log_conductor` is given and vice versa;
//! `t` may be empty; zero columns past `z1` may be empty at the end of a row.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use super::{CurveRecord, Provenance, ZeroDataset};
use crate::error::{Error, Result};

const FIXED: [&str; 11] = [
    "a1",
    "a2",
    "a3",
    "a4",
    "a6",
    "conductor",
    "log_conductor",
    "rank",
    "sign",
    "family_id",
    "t",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

impl DataFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
        {
            Some(e) if e == "csv" => Ok(Self::Csv),
            Some(e) if e == "json" => Ok(Self::Json),
            _ => Err(Error::InvalidParameters(format!(
                "cannot infer dataset format from {}",
                path.display()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Abort on the first malformed record.
    #[default]
    Strict,
    /// Skip malformed records and report them.
    Lenient,
}

/// A problem tied to a location: the file line for CSV, the 1-based record
/// index for JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDataset {
    pub dataset: ZeroDataset,
    pub skipped: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

/// Read, checksum and validate a dataset file.
pub fn parse_dataset(
    path: &Path,
    format: Option<DataFormat>,
    mode: ParseMode,
) -> Result<ParsedDataset> {
    let format = match format {
        Some(f) => f,
        None => DataFormat::from_path(path)?,
    };
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let source = path.display().to_string();
    let mut parsed = match format {
        DataFormat::Csv => parse_csv_str(&text, &source, mode)?,
        DataFormat::Json => parse_json_str(&text, &source, mode)?,
    };
    parsed.dataset.provenance = vec![Provenance {
        source,
        sha256: hex::encode(Sha256::digest(&bytes)),
    }];
    Ok(parsed)
}

struct Collector<'a> {
    source: &'a str,
    mode: ParseMode,
    records: Vec<CurveRecord>,
    skipped: Vec<Diagnostic>,
    warnings: Vec<Diagnostic>,
}

impl<'a> Collector<'a> {
    fn new(source: &'a str, mode: ParseMode) -> Self {
        Self {
            source,
            mode,
            records: Vec::new(),
            skipped: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, line: u64, parsed: std::result::Result<CurveRecord, String>) -> Result<()> {
        let checked = parsed.and_then(|r| match r.validate() {
            Ok(w) => Ok((r, w)),
            Err(e) => Err(e.to_string()),
        });
        match checked {
            Ok((record, warnings)) => {
                self.warnings.extend(
                    warnings
                        .into_iter()
                        .map(|message| Diagnostic { line, message }),
                );
                self.records.push(record);
                Ok(())
            }
            Err(message) => match self.mode {
                ParseMode::Strict => Err(Error::Parse {
                    path: self.source.to_string(),
                    line,
                    message,
                }),
                ParseMode::Lenient => {
                    self.skipped.push(Diagnostic { line, message });
                    Ok(())
                }
            },
        }
    }

    fn finish(self) -> Result<ParsedDataset> {
        if self.records.is_empty() {
            return Err(Error::EmptyInput(format!(
                "no valid records in {}",
                self.source
            )));
        }
        Ok(ParsedDataset {
            dataset: ZeroDataset::new(self.records),
            skipped: self.skipped,
            warnings: self.warnings,
        })
    }
}

fn field<T: std::str::FromStr>(raw: &str, name: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| format!("column {name}: cannot parse {raw:?}: {e}"))
}

fn optional<T: std::str::FromStr>(raw: &str, name: &str) -> std::result::Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    if raw.is_empty() {
        Ok(None)
    } else {
        field(raw, name).map(Some)
    }
}

fn parse_sign(raw: &str) -> std::result::Result<i8, String> {
    match raw {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("column sign: expected +1 or -1, got {raw:?}")),
    }
}

fn collect_zeros(cells: &[&str]) -> std::result::Result<Vec<f64>, String> {
    let used = cells
        .iter()
        .rposition(|c| !c.is_empty())
        .map_or(0, |i| i + 1);
    cells[..used]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.is_empty() {
                Err(format!(
                    "column z{}: missing zero before later zeros",
                    i + 1
                ))
            } else {
                field::<f64>(c, &format!("z{}", i + 1))
            }
        })
        .collect()
}

/// Parse CSV text; `source` names the input in diagnostics.
pub fn parse_csv_str(text: &str, source: &str, mode: ParseMode) -> Result<ParsedDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let header_error = |message: String| Error::Parse {
        path: source.to_string(),
        line: 1,
        message,
    };
    let mut index = [0usize; 11];
    for (slot, name) in index.iter_mut().zip(FIXED) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| header_error(format!("missing column {name}")))?;
    }
    let mut zero_cols = Vec::new();
    for k in 1.. {
        match headers.iter().position(|h| h == format!("z{k}")) {
            Some(i) => zero_cols.push(i),
            None => break,
        }
    }
    if zero_cols.is_empty() {
        return Err(header_error("missing column z1".into()));
    }
    let mut out = Collector::new(source, mode);
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let cell = |i: usize| row.get(i).unwrap_or("");
        let parsed = (|| -> std::result::Result<CurveRecord, String> {
            let mut weierstrass = [0i64; 5];
            for (k, w) in weierstrass.iter_mut().enumerate() {
                *w = field(cell(index[k]), FIXED[k])?;
            }
            let zero_cells: Vec<&str> = zero_cols.iter().map(|&i| cell(i)).collect();
            Ok(CurveRecord {
                weierstrass,
                conductor: optional(cell(index[5]), "conductor")?,
                log_conductor: optional(cell(index[6]), "log_conductor")?,
                rank: field(cell(index[7]), "rank")?,
                sign: parse_sign(cell(index[8]))?,
                family_id: cell(index[9]).to_string(),
                t_param: optional(cell(index[10]), "t")?,
                zeros: collect_zeros(&zero_cells)?,
            })
        })();
        out.push(line, parsed)?;
    }
    out.finish()
}

fn json_record(v: &Value) -> std::result::Result<CurveRecord, String> {
    let obj = v.as_object().ok_or("record is not an object")?;
    let int = |name: &str| -> std::result::Result<i64, String> {
        obj.get(name)
            .and_then(Value::as_i64)
            .ok_or_else(|| format!("field {name}: expected an integer"))
    };
    let opt = |name: &str| obj.get(name).filter(|v| !v.is_null());
    let mut weierstrass = [0i64; 5];
    for (k, w) in weierstrass.iter_mut().enumerate() {
        *w = int(FIXED[k])?;
    }
    let conductor = match opt("conductor") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or("field conductor: expected a positive integer")?,
        ),
    };
    let log_conductor = match opt("log_conductor") {
        None => None,
        Some(v) => Some(v.as_f64().ok_or("field log_conductor: expected a number")?),
    };
    let rank = obj
        .get("rank")
        .and_then(Value::as_u64)
        .and_then(|r| u32::try_from(r).ok())
        .ok_or("field rank: expected a non-negative integer")?;
    let sign = match obj.get("sign") {
        Some(Value::Number(n)) => parse_sign(&n.to_string())?,
        Some(Value::String(s)) => parse_sign(s)?,
        _ => return Err("field sign: expected +1 or -1".into()),
    };
    let family_id = obj
        .get("family_id")
        .and_then(Value::as_str)
        .ok_or("field family_id: expected a string")?
        .to_string();
    let t_param = match opt("t") {
        None => None,
        Some(v) => Some(v.as_i64().ok_or("field t: expected an integer")?),
    };
    let mut zeros = Vec::new();
    for k in 1.. {
        match opt(&format!("z{k}")) {
            Some(v) => zeros.push(
                v.as_f64()
                    .ok_or_else(|| format!("field z{k}: expected a number"))?,
            ),
            None => break,
        }
    }
    if zeros.is_empty() {
        return Err("field z1 missing".into());
    }
    Ok(CurveRecord {
        weierstrass,
        conductor,
        log_conductor,
        rank,
        sign,
        family_id,
        t_param,
        zeros,
    })
}

/// Parse a JSON array of records with the CSV field names.
pub fn parse_json_str(text: &str, source: &str, mode: ParseMode) -> Result<ParsedDataset> {
    let value: Value = serde_json::from_str(text)?;
    let items = value.as_array().ok_or_else(|| Error::Parse {
        path: source.to_string(),
        line: 0,
        message: "expected a JSON array of records".into(),
    })?;
    let mut out = Collector::new(source, mode);
    for (i, item) in items.iter().enumerate() {
        out.push(i as u64 + 1, json_record(item))?;
    }
    out.finish()
}

fn max_zeros(ds: &ZeroDataset) -> usize {
    ds.records
        .iter()
        .map(|r| r.zeros.len())
        .max()
        .unwrap_or(1)
        .max(1)
}

fn io_error(source: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source,
    }
}

/// Write records as CSV; floats use the shortest representation that
/// reads back exactly.
pub fn write_csv<W: Write>(ds: &ZeroDataset, w: W) -> Result<()> {
    let zcount = max_zeros(ds);
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = FIXED.iter().map(|s| s.to_string()).collect();
    header.extend((1..=zcount).map(|k| format!("z{k}")));
    out.write_record(&header)?;
    for r in &ds.records {
        let mut row: Vec<String> = r.weierstrass.iter().map(|a| a.to_string()).collect();
        row.push(r.conductor.map(|c| c.to_string()).unwrap_or_default());
        row.push(r.log_conductor.map(|l| l.to_string()).unwrap_or_default());
        row.push(r.rank.to_string());
        row.push(if r.sign > 0 { "+1" } else { "-1" }.into());
        row.push(r.family_id.clone());
        row.push(r.t_param.map(|t| t.to_string()).unwrap_or_default());
        for k in 0..zcount {
            row.push(r.zeros.get(k).map(|z| z.to_string()).unwrap_or_default());
        }
        out.write_record(&row)?;
    }
    out.flush().map_err(io_error)
}

/// Write records as a pretty-printed JSON array.
pub fn write_json<W: Write>(ds: &ZeroDataset, mut w: W) -> Result<()> {
    let items: Vec<Value> = ds
        .records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, a) in r.weierstrass.iter().enumerate() {
                m.insert(FIXED[k].into(), Value::from(*a));
            }
            m.insert(
                "conductor".into(),
                r.conductor.map_or(Value::Null, Value::from),
            );
            m.insert(
                "log_conductor".into(),
                r.log_conductor
                    .and_then(Number::from_f64)
                    .map_or(Value::Null, Value::Number),
            );
            m.insert("rank".into(), Value::from(r.rank));
            m.insert("sign".into(), Value::from(r.sign));
            m.insert("family_id".into(), Value::from(r.family_id.clone()));
            m.insert("t".into(), r.t_param.map_or(Value::Null, Value::from));
            for (k, z) in r.zeros.iter().enumerate() {
                m.insert(format!("z{}", k + 1), Value::from(*z));
            }
            Value::Object(m)
        })
        .collect();
    serde_json::to_writer_pretty(&mut w, &Value::Array(items))?;
    w.write_all(b"\n").map_err(io_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "a1,a2,a3,a4,a6,conductor,log_conductor,rank,sign,family_id,t,z1,z2,z3\n";

    #[test]
    fn parses_a_row() {
        let text = format!("{HEADER}0,1,1,1,5,389,,0,+1,fam1,5,2.08,3.5,\n");
        let p = parse_csv_str(&text, "mem", ParseMode::Strict).unwrap();
        let r = &p.dataset.records[0];
        assert_eq!(r.weierstrass, [0, 1, 1, 1, 5]);
        assert_eq!(r.conductor, Some(389));
        assert_eq!(r.log_conductor, None);
        assert_eq!(r.t_param, Some(5));
        assert_eq!(r.zeros, vec![2.08, 3.5]);
    }

    #[test]
    fn strict_and_lenient_modes() {
        let text =
            format!("{HEADER}0,1,1,1,5,389,,0,+1,f,,2.08,1.5,\n0,1,1,1,6,,15.2,0,+1,f,,0.4,,\n");
        match parse_csv_str(&text, "mem", ParseMode::Strict) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("increasing"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let p = parse_csv_str(&text, "mem", ParseMode::Lenient).unwrap();
        assert_eq!(p.dataset.len(), 1);
        assert_eq!(p.skipped.len(), 1);
        assert_eq!(p.skipped[0].line, 2);
    }

    #[test]
    fn rejects_gaps_and_bad_signs() {
        let gap = format!("{HEADER}0,1,1,1,5,389,,0,+1,f,,1.0,,2.0\n");
        assert!(parse_csv_str(&gap, "mem", ParseMode::Strict).is_err());
        let sign = format!("{HEADER}0,1,1,1,5,389,,0,0,f,,1.0,,\n");
        assert!(parse_csv_str(&sign, "mem", ParseMode::Strict).is_err());
        let header = "a1,a2,a3,a4,a6,conductor,rank,sign,family_id,t,z1\n";
        assert!(parse_csv_str(header, "mem", ParseMode::Strict).is_err());
    }

    #[test]
    fn parity_mismatch_is_a_warning() {
        let text = format!("{HEADER}0,1,1,1,5,389,,2,-1,f,,1.0,,\n");
        let p = parse_csv_str(&text, "mem", ParseMode::Strict).unwrap();
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let text = format!(
            "{HEADER}0,1,1,1,5,389,,0,+1,f,,0.1,0.30000000000000004,7\n1,0,0,-1,17,,15.123456789,2,+1,g,-3,1e-3,,\n"
        );
        let first = parse_csv_str(&text, "mem", ParseMode::Strict)
            .unwrap()
            .dataset;
        let mut buf = Vec::new();
        write_csv(&first, &mut buf).unwrap();
        let again = parse_csv_str(std::str::from_utf8(&buf).unwrap(), "mem", ParseMode::Strict)
            .unwrap()
            .dataset;
        assert_eq!(first.records, again.records);
        let mut js = Vec::new();
        write_json(&first, &mut js).unwrap();
        let from_json = parse_json_str(std::str::from_utf8(&js).unwrap(), "mem", ParseMode::Strict)
            .unwrap()
            .dataset;
        assert_eq!(first.records, from_json.records);
    }
}
