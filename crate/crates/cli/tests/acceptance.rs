//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its runtime (`cargo test --test acceptance -- --nocapture`).
//!
//! The oracles used here (factorial-expansion permanent, moment-recursion
//! cumulants) are re-implemented locally and kept independent of the
//! library code paths they check.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command as ProcessCommand;
use std::time::{Duration, Instant};

use bosonbench_core::distributions::{
    enumerate_patterns, ideal_distribution, noisy_postselected_distribution,
    partial_dist_distribution, prob_dark, prob_ideal, prob_lossy, prob_noisy_postselected,
    prob_partial_dist, tvd,
};
use bosonbench_core::linalg::{haar_unitary, permanent, submatrix, ComplexMatrix};
use bosonbench_core::rng::derive_seed;
use bosonbench_core::sampler::{
    extend_network, sample_ideal, sample_noisy_postselected, sample_partial_dist, NoiseConfig,
};
use bosonbench_core::stats::{all_correlators, cloud, gamma, spearman, CloudParams, MomentSource};
use bosonbench_core::{OccupationPattern, SampleSet};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn single_photon_input(m: usize, n: usize) -> OccupationPattern {
    OccupationPattern::single_photons(m, &(0..n).collect::<Vec<_>>())
}

fn report(number: u32, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {number} over budget: {elapsed:?} >= {budget:?}"
    );
    println!("ACCEPTANCE {number:02} {name}: PASS ({elapsed:.2?})");
}

// ---------------------------------------------------------------------
// 1. Permanent oracle equivalence
// ---------------------------------------------------------------------

/// O(k!) factorial-expansion permanent, independent of the Ryser kernel.
fn naive_permanent(matrix: &ComplexMatrix) -> Complex64 {
    fn visit(matrix: &ComplexMatrix, row: usize, used: &mut Vec<bool>) -> Complex64 {
        let k = matrix.rows();
        if row == k {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..k {
            if !used[col] {
                used[col] = true;
                acc += matrix.get(row, col) * visit(matrix, row + 1, used);
                used[col] = false;
            }
        }
        acc
    }
    visit(matrix, 0, &mut vec![false; matrix.rows()])
}

#[test]
fn criterion_01_permanent_matches_factorial_expansion() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0001);
    for dim in 2..=7 {
        for _ in 0..50 {
            let entries: Vec<Complex64> = (0..dim * dim)
                .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
                .collect();
            let matrix = ComplexMatrix::from_entries(dim, dim, entries).unwrap();
            let fast = permanent(&matrix).unwrap();
            let slow = naive_permanent(&matrix);
            let relative = (fast - slow).norm() / slow.norm().max(1e-30);
            assert!(relative <= 1e-10, "dim {dim}: relative error {relative}");
        }
    }
    report(
        1,
        "permanent oracle equivalence",
        started,
        Duration::from_secs(5),
    );
}

// ---------------------------------------------------------------------
// 2. Distribution normalization
// ---------------------------------------------------------------------

#[test]
fn criterion_02_distributions_normalize() {
    let started = Instant::now();
    for (n, m) in [(2usize, 4usize), (3, 5)] {
        let matrix = haar_unitary(m, 0xACCE_0002 + n as u64).unwrap();
        let input = single_photon_input(m, n);

        let n_photon = enumerate_patterns(m, n as u32).unwrap();
        let sum: f64 = n_photon
            .iter()
            .map(|t| prob_ideal(&matrix, &input, t).unwrap())
            .sum();
        assert!((sum - 1.0).abs() <= 1e-8, "ideal ({n},{m}): {sum}");

        for x in [0.0, 0.3, 0.7, 1.0] {
            let sum: f64 = n_photon
                .iter()
                .map(|t| prob_partial_dist(&matrix, &input, t, x).unwrap())
                .sum();
            assert!((sum - 1.0).abs() <= 1e-8, "partial x={x} ({n},{m}): {sum}");
        }

        let mut lossy_sum = 0.0;
        for k in 0..=n as u32 {
            for t in enumerate_patterns(m, k).unwrap() {
                lossy_sum += prob_lossy(&matrix, &input, &t, 0.8).unwrap();
            }
        }
        assert!(
            (lossy_sum - 1.0).abs() <= 1e-8,
            "lossy ({n},{m}): {lossy_sum}"
        );

        let mut dark_sum = 0.0;
        for k in n as u32..=(n + m) as u32 {
            for t in enumerate_patterns(m, k).unwrap() {
                dark_sum += prob_dark(&matrix, &input, &t, 0.1).unwrap();
            }
        }
        assert!((dark_sum - 1.0).abs() <= 1e-8, "dark ({n},{m}): {dark_sum}");

        let noisy_sum: f64 = n_photon
            .iter()
            .map(|t| prob_noisy_postselected(&matrix, &input, t, 0.9, 0.1).unwrap())
            .sum();
        assert!(
            (noisy_sum - 1.0).abs() <= 1e-8,
            "postselected ({n},{m}): {noisy_sum}"
        );
    }
    report(
        2,
        "distribution normalization",
        started,
        Duration::from_secs(60),
    );
}

// ---------------------------------------------------------------------
// 3. Noise-limit identities
// ---------------------------------------------------------------------

#[test]
fn criterion_03_noise_limits_reduce_to_closed_forms() {
    let started = Instant::now();
    let (n, m) = (3usize, 5usize);
    let matrix = haar_unitary(m, 0xACCE_0003).unwrap();
    let input = single_photon_input(m, n);
    let classical_matrix = ComplexMatrix::from_entries(
        m,
        m,
        matrix
            .entries()
            .iter()
            .map(|z| Complex64::new(z.norm_sqr(), 0.0))
            .collect(),
    )
    .unwrap();

    for t in enumerate_patterns(m, n as u32).unwrap() {
        let ideal = prob_ideal(&matrix, &input, &t).unwrap();

        let full = prob_partial_dist(&matrix, &input, &t, 1.0).unwrap();
        assert!((full - ideal).abs() <= 1e-10, "x=1 at {:?}", t.counts());

        let zero = prob_partial_dist(&matrix, &input, &t, 0.0).unwrap();
        let norm: f64 = t
            .counts()
            .iter()
            .map(|&c| (2..=c).map(f64::from).product::<f64>())
            .product();
        let classical = permanent(&submatrix(&classical_matrix, &input, &t).unwrap())
            .unwrap()
            .re
            / norm;
        assert!((zero - classical).abs() <= 1e-10, "x=0 at {:?}", t.counts());

        let lossless = prob_lossy(&matrix, &input, &t, 1.0).unwrap();
        assert!(
            (lossless - ideal).abs() <= 1e-10,
            "eta=1 at {:?}",
            t.counts()
        );

        let no_dark = prob_dark(&matrix, &input, &t, 0.0).unwrap();
        assert!(
            (no_dark - ideal).abs() <= 1e-10,
            "p_dc=0 at {:?}",
            t.counts()
        );
    }
    report(
        3,
        "noise-limit identities",
        started,
        Duration::from_secs(60),
    );
}

// ---------------------------------------------------------------------
// 4. Sampler-vs-oracle total variation distance
// ---------------------------------------------------------------------

#[test]
fn criterion_04_samplers_match_their_oracles() {
    let started = Instant::now();
    let (n, m) = (3usize, 5usize);
    let samples = 100_000;
    let matrix = haar_unitary(m, 0xACCE_0004).unwrap();
    let input = single_photon_input(m, n);

    let ideal_exact = ideal_distribution(&matrix, &input).unwrap();
    let ideal_set = sample_ideal(&matrix, &input, samples, 40).unwrap();
    let d = tvd(&ideal_set.empirical_distribution(), &ideal_exact);
    assert!(d <= 0.03, "ideal sampler TVD = {d}");

    for (i, x) in [0.0, 0.5, 1.0].into_iter().enumerate() {
        let exact = partial_dist_distribution(&matrix, &input, x).unwrap();
        let set = sample_partial_dist(&matrix, &input, x, samples, 41 + i as u64).unwrap();
        let d = tvd(&set.empirical_distribution(), &exact);
        assert!(d <= 0.03, "dilution sampler at x={x}: TVD = {d}");
    }

    let exact = noisy_postselected_distribution(&matrix, &input, 0.9, 0.1).unwrap();
    let config = NoiseConfig::new(1.0, 0.9, 0.1).unwrap();
    let set = sample_noisy_postselected(&matrix, &input, &config, samples, 44).unwrap();
    let d = tvd(&set.empirical_distribution(), &exact);
    assert!(d <= 0.03, "post-selected sampler TVD = {d}");

    report(
        4,
        "sampler-vs-oracle TVD",
        started,
        Duration::from_secs(300),
    );
}

// ---------------------------------------------------------------------
// 5. Extended-network oracle
// ---------------------------------------------------------------------

#[test]
fn criterion_05_extended_network_structure() {
    let started = Instant::now();
    let (m, n) = (4usize, 2u32);
    let matrix = haar_unitary(m, 0xACCE_0005).unwrap();

    for x in [0.0, 0.25, 0.5, 1.0] {
        let network = extend_network(&matrix, n, x).unwrap();
        assert_eq!(network.rows(), m * (n as usize + 1));
        assert_eq!(network.rows(), 12);
        let deviation = network.unitarity_deviation();
        assert!(deviation <= 1e-10, "x={x}: deviation {deviation}");
    }

    let block_diagonal = extend_network(&matrix, n, 1.0).unwrap();
    for r in 0..12 {
        for c in 0..12 {
            let expected = if r / m == c / m {
                matrix.get(r % m, c % m)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((block_diagonal.get(r, c) - expected).norm() <= 1e-10);
        }
    }
    report(
        5,
        "extended-network oracle",
        started,
        Duration::from_secs(60),
    );
}

// ---------------------------------------------------------------------
// 6. Cumulant correctness
// ---------------------------------------------------------------------

/// Moment-recursion cumulant κ(S) = m(S) − Σ_{B∋first, B⊊S} κ(B)·m(S\B);
/// an implementation route with no set partitions in it.
fn recursion_cumulant<S: MomentSource>(source: &S, modes: &[usize]) -> f64 {
    if modes.len() == 1 {
        return source.raw_moment(modes).unwrap();
    }
    let rest = &modes[1..];
    let mut kappa = source.raw_moment(modes).unwrap();
    for mask in 0..(1u32 << rest.len()) - 1 {
        let mut subset = vec![modes[0]];
        let mut complement = Vec::new();
        for (i, &mode) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                subset.push(mode);
            } else {
                complement.push(mode);
            }
        }
        kappa -= recursion_cumulant(source, &subset) * source.raw_moment(&complement).unwrap();
    }
    kappa
}

#[test]
fn criterion_06_cumulants_match_the_moment_recursion() {
    let started = Instant::now();
    let (n, m) = (3usize, 5usize);
    let matrix = haar_unitary(m, 0xACCE_0006).unwrap();
    let input = single_photon_input(m, n);
    let dist = ideal_distribution(&matrix, &input).unwrap();

    for t in 1..=4usize {
        let family = all_correlators(&dist, t).unwrap();
        for (modes, &kappa) in family.entries() {
            let oracle = recursion_cumulant(&dist, modes);
            assert!(
                (kappa - oracle).abs() <= 1e-10,
                "t={t} modes {modes:?}: {kappa} vs {oracle}"
            );
        }
    }

    let firsts = all_correlators(&dist, 1).unwrap();
    assert!(
        (firsts.sum() - n as f64).abs() <= 1e-10,
        "first-order sum rule: {}",
        firsts.sum()
    );
    report(6, "cumulant correctness", started, Duration::from_secs(60));
}

// ---------------------------------------------------------------------
// 7. Deviation-ratio trend along the distinguishability grid
// ---------------------------------------------------------------------

/// Seed-averaged γ per order across a noise grid. `sample_for(value, seed)`
/// generates the test-side samples.
fn gamma_curves(
    m: usize,
    n: usize,
    orders: &[usize],
    grid: &[f64],
    seeds: &[u64],
    samples: usize,
    sample_for: impl Fn(&ComplexMatrix, &OccupationPattern, f64, u64) -> SampleSet,
) -> BTreeMap<usize, Vec<f64>> {
    let input = single_photon_input(m, n);
    let mut sums: BTreeMap<usize, Vec<f64>> =
        orders.iter().map(|&t| (t, vec![0.0; grid.len()])).collect();
    for &seed in seeds {
        let matrix = haar_unitary(m, derive_seed(seed, &[1])).unwrap();
        let comparison = sample_ideal(&matrix, &input, samples, derive_seed(seed, &[2])).unwrap();
        for (gi, &value) in grid.iter().enumerate() {
            let test = sample_for(&matrix, &input, value, derive_seed(seed, &[3, gi as u64]));
            for &t in orders {
                let test_set = all_correlators(&test, t).unwrap();
                let comp_set = all_correlators(&comparison, t).unwrap();
                sums.get_mut(&t).unwrap()[gi] += gamma(&test_set, &comp_set).unwrap();
            }
        }
    }
    for curve in sums.values_mut() {
        for value in curve.iter_mut() {
            *value /= seeds.len() as f64;
        }
    }
    sums
}

#[test]
fn criterion_07_gamma_rises_with_indistinguishability() {
    let started = Instant::now();
    let (m, n) = (10usize, 5usize);
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let seeds = [70, 71, 72, 73, 74];
    let curves = gamma_curves(
        m,
        n,
        &[2, 3],
        &grid,
        &seeds,
        10_000,
        |matrix, input, x, seed| sample_partial_dist(matrix, input, x, 10_000, seed).unwrap(),
    );

    let mut ranges = BTreeMap::new();
    for (&t, curve) in &curves {
        let rank = spearman(&grid, curve).unwrap();
        assert!(
            rank >= 0.9,
            "t={t}: Spearman({grid:?}, {curve:?}) = {rank} < 0.9"
        );
        let endpoint = *curve.last().unwrap();
        assert!(
            (0.9..=1.1).contains(&endpoint),
            "t={t}: gamma(1) = {endpoint}"
        );
        let min = curve.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = curve.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ranges.insert(t, max - min);
    }
    assert!(
        ranges[&3] > ranges[&2],
        "order-3 range {} should exceed order-2 range {}",
        ranges[&3],
        ranges[&2]
    );
    report(
        7,
        "gamma trend vs distinguishability",
        started,
        Duration::from_secs(600),
    );
}

// ---------------------------------------------------------------------
// 8. Deviation-ratio trend along the coupled loss/dark grid
// ---------------------------------------------------------------------

#[test]
fn criterion_08_gamma_falls_with_coupled_noise() {
    let started = Instant::now();
    let (m, n) = (10usize, 5usize);
    let grid = [0.0, 0.1, 0.2, 0.3];
    let seeds = [80, 81, 82, 83, 84];
    let curves = gamma_curves(
        m,
        n,
        &[2, 3],
        &grid,
        &seeds,
        10_000,
        |matrix, input, p, seed| {
            let config = NoiseConfig::coupled(p).unwrap();
            sample_noisy_postselected(matrix, input, &config, 10_000, seed).unwrap()
        },
    );
    for (&t, curve) in &curves {
        let rank = spearman(&grid, curve).unwrap();
        assert!(
            rank <= -0.8,
            "t={t}: Spearman({grid:?}, {curve:?}) = {rank} > -0.8"
        );
    }
    report(
        8,
        "gamma trend vs coupled loss/dark noise",
        started,
        Duration::from_secs(600),
    );
}

// ---------------------------------------------------------------------
// 9. Deviation-distance shape on the two noise axes
// ---------------------------------------------------------------------

#[test]
fn criterion_09_deviation_distance_shape() {
    let started = Instant::now();
    let (m, n) = (8usize, 4usize);
    let matrix = haar_unitary(m, 0xACCE_0009).unwrap();
    let input = single_photon_input(m, n);
    let ideal = ideal_distribution(&matrix, &input).unwrap();

    let p_grid = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3];
    let d_of_p: Vec<f64> = p_grid
        .iter()
        .map(|&p| {
            if p == 0.0 {
                0.0
            } else {
                let noisy = noisy_postselected_distribution(&matrix, &input, 1.0 - p, p).unwrap();
                tvd(&noisy, &ideal)
            }
        })
        .collect();
    for pair in d_of_p.windows(2) {
        assert!(
            pair[1] >= pair[0] - 1e-12,
            "D(p_noise) must be non-decreasing: {d_of_p:?}"
        );
    }

    // Finite-difference slopes at grid step 0.05 from the noiseless points.
    let slope_p = d_of_p[1] / 0.05;
    let near_one = partial_dist_distribution(&matrix, &input, 0.95).unwrap();
    let slope_x = tvd(&near_one, &ideal) / 0.05;
    assert!(
        slope_p < slope_x,
        "loss/dark onset slope {slope_p} should undercut distinguishability onset slope {slope_x}"
    );
    report(
        9,
        "deviation-distance shape",
        started,
        Duration::from_secs(300),
    );
}

// ---------------------------------------------------------------------
// 10. Cloud separation between quantum and classical photons
// ---------------------------------------------------------------------

#[test]
fn criterion_10_clouds_separate_the_noise_extremes() {
    let started = Instant::now();
    let (m, n) = (12usize, 3u32);
    let matrix = haar_unitary(m, 0xACCE_0010).unwrap();

    let mean_and_se = |values: &[f64]| {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
        (mean, (var / values.len() as f64).sqrt())
    };

    // Centroid displacement of the cloud in the (CV, CS) plane, per order.
    let mut displacement: BTreeMap<usize, f64> = BTreeMap::new();
    for &t in &[2usize, 3] {
        // Both noise extremes scan the same 200 input combinations (same
        // seed), so the comparison is paired combo by combo.
        let cloud_at = |x: f64| {
            cloud(
                &matrix,
                &CloudParams {
                    photons: n,
                    order: t,
                    noise: NoiseConfig::distinguishability(x).unwrap(),
                    samples_per_combo: 5_000,
                    combo_budget: Some(200),
                    seed: derive_seed(0xACCE_0010, &[7]),
                },
            )
            .unwrap()
        };
        let classical = cloud_at(0.0);
        let quantum = cloud_at(1.0);
        assert_eq!(classical.len(), 200);
        assert_eq!(quantum.len(), 200);
        for (a, b) in classical.iter().zip(&quantum) {
            assert_eq!(a.input_modes, b.input_modes, "clouds must share combos");
        }

        let paired_separation = |pick: fn(&bosonbench_core::stats::CloudPoint) -> Option<f64>| {
            let diffs: Vec<f64> = classical
                .iter()
                .zip(&quantum)
                .map(|(a, b)| pick(b).unwrap() - pick(a).unwrap())
                .collect();
            let (mean, se) = mean_and_se(&diffs);
            (mean, mean.abs() / se)
        };
        let (cv_shift, cv_separation) = paired_separation(|p| p.cv);
        let (cs_shift, cs_separation) = paired_separation(|p| p.cs);
        assert!(
            cv_separation >= 3.0,
            "t={t}: mean CV shift {cv_shift} is only {cv_separation} standard errors"
        );
        assert!(
            cs_separation >= 3.0,
            "t={t}: mean CS shift {cs_shift} is only {cs_separation} standard errors"
        );
        displacement.insert(t, (cv_shift * cv_shift + cs_shift * cs_shift).sqrt());
    }
    assert!(
        displacement[&3] >= displacement[&2],
        "cloud displacement should grow with the order: {displacement:?}"
    );
    report(10, "cloud separation", started, Duration::from_secs(900));
}

// ---------------------------------------------------------------------
// 11. End-to-end determinism of every subcommand
// ---------------------------------------------------------------------

fn run_cli(args: &[&str], dir: &Path) -> std::process::Output {
    ProcessCommand::new(env!("CARGO_BIN_EXE_bosonbench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        out.insert(
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    out
}

#[test]
fn criterion_11_reruns_are_byte_identical_across_worker_counts() {
    let started = Instant::now();
    let workspace = tempfile::tempdir().unwrap();
    let dir = workspace.path();
    std::fs::write(
        dir.join("config.json"),
        r#"{
            "m": 5, "n": 2, "samples": 400,
            "x_ind_grid": [0.0, 1.0], "p_noise_grid": [0.0, 0.2],
            "orders": [2], "seed": 11, "matrices": 2,
            "n_grid": [2, 3], "combo_budget": 30
        }"#,
    )
    .unwrap();
    std::fs::write(
        dir.join("cloud.json"),
        r#"{
            "m": 9, "n": 2, "samples": 300,
            "x_ind_grid": [0.0, 1.0], "orders": [2],
            "seed": 11, "combo_budget": 30
        }"#,
    )
    .unwrap();

    for command in [
        "scatter",
        "coefficients",
        "scaling",
        "cloud",
        "distributions",
    ] {
        let config = if command == "cloud" {
            "cloud.json"
        } else {
            "config.json"
        };
        // Re-run with the identical invocation (same output directory),
        // varying only the worker count; snapshot the files in between.
        let out = format!("{command}_out");
        let run_a = run_cli(
            &[command, "--config", config, "--out", &out, "--workers", "1"],
            dir,
        );
        assert!(
            run_a.status.success(),
            "{command} failed: {}",
            String::from_utf8_lossy(&run_a.stderr)
        );
        let bytes_a = read_dir_bytes(&dir.join(&out));
        let run_b = run_cli(
            &[command, "--config", config, "--out", &out, "--workers", "4"],
            dir,
        );
        assert!(run_b.status.success());
        let bytes_b = read_dir_bytes(&dir.join(&out));
        assert_eq!(
            run_a.stdout, run_b.stdout,
            "{command}: summary lines differ"
        );
        assert!(!bytes_a.is_empty(), "{command} wrote no files");
        assert_eq!(bytes_a, bytes_b, "{command}: outputs differ across workers");
    }
    report(
        11,
        "byte-identical reruns across worker counts",
        started,
        Duration::from_secs(600),
    );
}
