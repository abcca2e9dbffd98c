use std::path::PathBuf;

use proptest::prelude::*;
use zerorep::ecdata::{
    explicit_formula_prime_side, family_table, filter_partition, parse_csv_str, parse_dataset,
    spacing_table, write_csv, write_json, CurveRecord, DataFormat, FejerPair, ParseMode,
    TestFunction, ZeroDataset, ALL_CURVES, DISTINCT_CURVES,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load(name: &str) -> ZeroDataset {
    parse_dataset(&fixture(name), None, ParseMode::Strict)
        .unwrap()
        .dataset
}

fn golden(name: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(fixture(name)).unwrap();
    r.records()
        .map(|row| row.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn fixture_round_trips_through_csv_and_json() {
    let ds = load("family_zeros.csv");
    assert_eq!(ds.len(), 996);
    assert_eq!(ds.provenance.len(), 1);
    assert_eq!(ds.provenance[0].sha256.len(), 64);
    let mut csv_out = Vec::new();
    write_csv(&ds, &mut csv_out).unwrap();
    let back = parse_csv_str(
        std::str::from_utf8(&csv_out).unwrap(),
        "mem",
        ParseMode::Strict,
    )
    .unwrap()
    .dataset;
    assert_eq!(back.records, ds.records);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.json");
    let mut js = Vec::new();
    write_json(&ds, &mut js).unwrap();
    std::fs::write(&path, &js).unwrap();
    let from_json = parse_dataset(&path, Some(DataFormat::Json), ParseMode::Strict)
        .unwrap()
        .dataset;
    assert_eq!(from_json.records, ds.records);
}

#[test]
fn synthetic_table_matches_golden_rows() {
    let ds = load("family_zeros.csv");
    let part = filter_partition(&ds, 15.0, 16.0, Some(0), false).unwrap();
    assert_eq!(part.len(), 996);
    let rows = family_table(&part).unwrap();
    let want = golden("family_zeros_golden.csv");
    assert_eq!(rows.len(), want.len());
    for (row, g) in rows.iter().zip(&want) {
        assert_eq!(row.label, g[0]);
        assert_eq!(row.count, g[1].parse::<usize>().unwrap(), "{}", row.label);
        let vals = [
            row.median,
            row.mean,
            row.stdev,
            row.log_conductor_min,
            row.log_conductor_max,
        ];
        for (v, s) in vals.iter().zip(&g[2..]) {
            let w: f64 = s.parse().unwrap();
            assert!((v - w).abs() < 1e-12, "{}: {v} vs {w}", row.label);
        }
    }
    let all = rows.iter().find(|r| r.label == ALL_CURVES).unwrap();
    let distinct = rows.iter().find(|r| r.label == DISTINCT_CURVES).unwrap();
    assert_eq!((all.count, distinct.count), (996, 863));
    let deduped = filter_partition(&ds, 15.0, 16.0, Some(0), true).unwrap();
    assert_eq!(deduped.len(), 863);
}

#[test]
fn spacing_fixture_reproduces_golden_values_exactly() {
    let ds = load("rank_spacing.csv");
    let g0 = filter_partition(&ds, 0.0, 100.0, Some(0), true).unwrap();
    let g2 = filter_partition(&ds, 0.0, 100.0, Some(2), true).unwrap();
    let rows = spacing_table(&[&g0, &g2], true).unwrap();
    for g in golden("rank_spacing_golden.csv") {
        let row = rows.iter().find(|r| r.quantity == g[0]).unwrap();
        let idx = if g[1] == "rank0" { 0 } else { 1 };
        assert_eq!(
            row.groups[idx].median,
            g[2].parse::<f64>().unwrap(),
            "{g:?}"
        );
        assert_eq!(row.groups[idx].mean, g[3].parse::<f64>().unwrap(), "{g:?}");
    }
    // a common shift of all normalized zeros leaves the table unchanged
    let mut shifted = ds.clone();
    for r in &mut shifted.records {
        for z in &mut r.zeros {
            *z += 0.5;
        }
    }
    let s0 = filter_partition(&shifted, 0.0, 100.0, Some(0), true).unwrap();
    let s2 = filter_partition(&shifted, 0.0, 100.0, Some(2), true).unwrap();
    assert_eq!(spacing_table(&[&s0, &s2], true).unwrap(), rows);
}

fn brute_ap(a: [i64; 5], p: u64) -> f64 {
    let p = p as i128;
    let [a1, a2, a3, a4, a6] = a.map(|x| x as i128);
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let v = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6);
            if v.rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    (p + 1 - n) as f64
}

fn naive_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[test]
fn prime_side_matches_direct_summation() {
    let curve = [0, -1, 1, -10, -20];
    let log_c = 7.0;
    let tf = FejerPair::new(1.0).unwrap();
    let cutoff = 1200;
    let v = explicit_formula_prime_side(curve, log_c, &tf, cutoff).unwrap();
    let mut direct = tf.phi_hat(0.0) + tf.phi(0.0);
    for p in (2..=cutoff).filter(|&n| naive_prime(n)) {
        let lp = (p as f64).ln();
        let lam = brute_ap(curve, p) / (p as f64).sqrt();
        direct -= 2.0 * lp / log_c * tf.phi_hat(lp / log_c) * lam / (p as f64).sqrt();
        direct -= 2.0 * lp / log_c * tf.phi_hat(2.0 * lp / log_c) * lam * lam / p as f64;
    }
    assert!((v.value - direct).abs() < 1e-12, "{} vs {direct}", v.value);
    assert!(v.complete);
    // beyond C^σ nothing changes
    for extra in [1500, 5000] {
        let w = explicit_formula_prime_side(curve, log_c, &tf, extra).unwrap();
        assert_eq!(w.value, v.value);
    }
    let partial = explicit_formula_prime_side(curve, log_c, &tf, 100).unwrap();
    assert!(!partial.complete);
}

fn arb_record() -> impl Strategy<Value = CurveRecord> {
    (
        prop::array::uniform5(-1000i64..1000),
        prop::option::of(2u64..1_000_000_000),
        prop::option::of(0.1f64..50.0),
        0u32..4,
        "[a-z0-9][a-z0-9: \\[\\],-]{0,10}[a-z0-9\\]]",
        prop::option::of(-5000i64..5000),
        prop::collection::vec(0.001f64..3.0, 1..6),
    )
        .prop_filter("needs a conductor", |t| t.1.is_some() || t.2.is_some())
        .prop_map(|(a, c, l, rank, fam, t, gaps)| {
            let mut zeros = Vec::new();
            let mut z = 0.0;
            for g in gaps {
                z += g;
                zeros.push(z);
            }
            CurveRecord {
                weierstrass: a,
                conductor: c,
                log_conductor: l,
                rank,
                sign: if rank % 2 == 0 { 1 } else { -1 },
                family_id: fam,
                t_param: t,
                zeros,
            }
        })
}

proptest! {
    #[test]
    fn serialization_round_trip(records in prop::collection::vec(arb_record(), 1..20)) {
        let ds = ZeroDataset::new(records);
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = parse_csv_str(std::str::from_utf8(&buf).unwrap(), "mem", ParseMode::Lenient).unwrap();
        prop_assert_eq!(&back.dataset.records, &ds.records);
        let mut js = Vec::new();
        write_json(&ds, &mut js).unwrap();
        let back = zerorep::ecdata::parse_json_str(std::str::from_utf8(&js).unwrap(), "mem", ParseMode::Lenient).unwrap();
        prop_assert_eq!(&back.dataset.records, &ds.records);
    }
}
