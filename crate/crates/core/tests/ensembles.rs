use std::f64::consts::PI;

use zerorep::ensembles::{
    derive_seed, haar_sample_so, interaction_expectation, sample_independent_model,
    simulate_first_angle_stats, EnsembleSpec, InteractionChain, McmcConfig, SimulationConfig,
};
use zerorep::quadrature::GaussLegendre;
use zerorep::stats::{chi_square_test, descriptive};

const SAMPLES: usize = 100_000;

fn first_angles(n: usize, samples: usize, seed: u64) -> Vec<f64> {
    (0..samples)
        .map(|i| {
            haar_sample_so(n, derive_seed(seed, i as u64))
                .unwrap()
                .angles[0]
        })
        .collect()
}

fn binned(values: &[f64], bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    for &t in values {
        let i = ((t / PI * bins as f64) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
}

#[test]
fn so2_angle_is_uniform() {
    let bins = 20;
    let counts = binned(&first_angles(2, SAMPLES, 1), bins);
    let r = chi_square_test(&counts, &vec![1.0 / bins as f64; bins]).unwrap();
    assert!(r.p_value > 0.01, "p = {}", r.p_value);
}

#[test]
fn so3_angle_follows_sine_squared() {
    let bins = 20;
    let counts = binned(&first_angles(3, SAMPLES, 2), bins);
    let cdf = |t: f64| (t - t.sin()) / PI;
    let probs: Vec<f64> = (0..bins)
        .map(|i| {
            let (a, b) = (
                PI * i as f64 / bins as f64,
                PI * (i + 1) as f64 / bins as f64,
            );
            cdf(b) - cdf(a)
        })
        .collect();
    let r = chi_square_test(&counts, &probs).unwrap();
    assert!(r.p_value > 0.01, "p = {}", r.p_value);
}

#[test]
fn so4_joint_density_has_squared_level_repulsion() {
    let g = 8;
    let mut observed = vec![0u64; g * g];
    for i in 0..SAMPLES {
        let a = haar_sample_so(4, derive_seed(3, i as u64)).unwrap().angles;
        let b1 = ((a[0] / PI * g as f64) as usize).min(g - 1);
        let b2 = ((a[1] / PI * g as f64) as usize).min(g - 1);
        observed[b1.min(b2) * g + b1.max(b2)] += 1;
    }
    let width = PI / g as f64;
    let cell = |i: usize, j: usize| {
        let ri = GaussLegendre::on_interval(12, i as f64 * width, (i + 1) as f64 * width);
        let rj = GaussLegendre::on_interval(12, j as f64 * width, (j + 1) as f64 * width);
        ri.integrate(|s| rj.integrate(|t| (s.cos() - t.cos()).powi(2)))
    };
    let mut obs = Vec::new();
    let mut probs = Vec::new();
    for i in 0..g {
        for j in i..g {
            let p = if i == j { cell(i, i) } else { 2.0 * cell(i, j) };
            obs.push(observed[i * g + j]);
            probs.push(p);
        }
    }
    // merge sparse cells into one bucket
    let total = SAMPLES as f64;
    let mass: f64 = probs.iter().sum();
    let (mut o2, mut p2, mut so, mut sp) = (Vec::new(), Vec::new(), 0u64, 0.0);
    for (o, p) in obs.into_iter().zip(probs) {
        if total * p / mass < 5.0 {
            so += o;
            sp += p;
        } else {
            o2.push(o);
            p2.push(p);
        }
    }
    if sp > 0.0 {
        o2.push(so);
        p2.push(sp);
    }
    let r = chi_square_test(&o2, &p2).unwrap();
    assert!(r.p_value > 0.01, "p = {}", r.p_value);
}

#[test]
fn independent_model_matches_smaller_group_in_distribution() {
    let model: Vec<f64> = (0..20_000)
        .map(|i| {
            sample_independent_model(4, 2, derive_seed(4, i))
                .unwrap()
                .angles[0]
        })
        .collect();
    let plain = first_angles(4, 20_000, 4);
    assert_eq!(model, plain);
}

fn mcmc_check(pairs: usize, m: u32) {
    let chains = 60;
    let draws = 1000;
    let mut means: Vec<Vec<f64>> = vec![Vec::new(); pairs];
    for c in 0..chains {
        let mut chain =
            InteractionChain::new(pairs, m, McmcConfig::for_pairs(pairs, derive_seed(99, c)))
                .unwrap();
        let mut sums = vec![0.0; pairs];
        for _ in 0..draws {
            let v = chain.draw();
            for (s, x) in sums.iter_mut().zip(&v.levels) {
                *s += x;
            }
        }
        for (k, s) in sums.into_iter().enumerate() {
            means[k].push(s / draws as f64);
        }
    }
    for (k, batch) in means.iter().enumerate() {
        let s = descriptive(batch).unwrap();
        let se = s.stdev / (chains as f64).sqrt();
        let exact = interaction_expectation(pairs, m, 60, |x| x[k]).unwrap();
        assert!(
            (s.mean - exact).abs() < 3.0 * se,
            "pairs {pairs} m {m} level {k}: {} vs {exact} (se {se})",
            s.mean
        );
    }
}

#[test]
fn mcmc_level_marginals_match_quadrature() {
    for pairs in 1..=2 {
        for m in 0..=2 {
            mcmc_check(pairs, m);
        }
    }
}

#[test]
fn forced_eigenvalues_repel_in_interaction_model() {
    let samples = 20_000;
    let inter = simulate_first_angle_stats(&SimulationConfig::new(
        EnsembleSpec::interaction(5, 2),
        samples,
        5,
    ))
    .unwrap();
    let indep = simulate_first_angle_stats(&SimulationConfig::new(
        EnsembleSpec::Independent {
            pairs: 6,
            forced: 1,
        },
        samples,
        5,
    ))
    .unwrap();
    let se = (inter.standard_error.powi(2) + indep.standard_error.powi(2)).sqrt();
    assert!(
        inter.mean - indep.mean > 3.0 * se,
        "interaction {} vs independent {} (se {se})",
        inter.mean,
        indep.mean
    );
}

#[test]
fn batch_simulation_is_reproducible() {
    for spec in [
        EnsembleSpec::Haar { size: 6 },
        EnsembleSpec::Independent {
            pairs: 3,
            forced: 1,
        },
        EnsembleSpec::interaction(2, 1),
    ] {
        let cfg = SimulationConfig::new(spec, 2_000, 7);
        let a = simulate_first_angle_stats(&cfg).unwrap();
        let b = simulate_first_angle_stats(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.values, b.values);
        assert_eq!(a.histogram, b.histogram);
    }
}
