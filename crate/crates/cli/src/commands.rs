//! The five experiment subcommands. Grid points are scheduled across the
//! ambient rayon pool; every point derives its seeds from the master seed
//! and its grid coordinates, so outputs are byte-identical for a given
//! config regardless of worker count.

use std::collections::BTreeMap;
use std::path::PathBuf;

use bosonbench_core::distributions::{
    ideal_distribution, noisy_postselected_distribution, partial_dist_distribution,
    sorted_background, tvd,
};
use bosonbench_core::linalg::haar_unitary;
use bosonbench_core::rng::derive_seed;
use bosonbench_core::sampler::{
    sample_ideal, sample_noisy_postselected, sample_partial_dist, NoiseConfig, SampleSet,
};
use bosonbench_core::stats::{
    all_correlators, cloud, gamma, pearson, spearman, CloudParams, CloudPoint, CorrelatorSet,
};
use bosonbench_core::{ComplexMatrix, Error, OccupationPattern};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, ExperimentConfig, NoiseAxis};
use crate::error::AppResult;
use crate::output::{
    distribution_rows, float_field, modes_field, optional_float_field, pattern_field, scatter_rows,
    OutputWriter,
};

// Seed-derivation tags; grid coordinates are appended after the tag.
const TAG_MATRIX: u64 = 1;
const TAG_COMP: u64 = 2;
const TAG_TEST: u64 = 3;
const TAG_CLOUD: u64 = 4;
const TAG_DIST: u64 = 5;

/// Machine-readable run summary printed to standard output.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub config_hash: String,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub files: Vec<String>,
}

fn axis_label(axis: NoiseAxis) -> &'static str {
    match axis {
        NoiseAxis::Xind => "xind",
        NoiseAxis::Pnoise => "pnoise",
    }
}

fn input_pattern(m: usize, n: u32) -> OccupationPattern {
    OccupationPattern::single_photons(m, &(0..n as usize).collect::<Vec<_>>())
}

/// Noise configuration of one sweep point on the selected axis.
fn noise_at(axis: NoiseAxis, value: f64) -> AppResult<NoiseConfig> {
    Ok(match axis {
        NoiseAxis::Xind => NoiseConfig::distinguishability(value)?,
        NoiseAxis::Pnoise => NoiseConfig::coupled(value)?,
    })
}

/// Test-side samples at one sweep point. Distinguishability runs keep all
/// photons; coupled loss/dark runs go through n-photon post-selection.
fn sample_at(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    axis: NoiseAxis,
    value: f64,
    count: usize,
    seed: u64,
) -> Result<SampleSet, Error> {
    match axis {
        NoiseAxis::Xind => sample_partial_dist(matrix, input, value, count, seed),
        NoiseAxis::Pnoise => {
            let config = NoiseConfig::coupled(value)?;
            sample_noisy_postselected(matrix, input, &config, count, seed)
        }
    }
}

fn axis_grid(config: &ExperimentConfig, axis: NoiseAxis) -> &[f64] {
    match axis {
        NoiseAxis::Xind => &config.x_ind_grid,
        NoiseAxis::Pnoise => &config.p_noise_grid,
    }
}

pub fn run_command(
    command: Command,
    axis: NoiseAxis,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
) -> AppResult<()> {
    match command {
        Command::Scatter => cmd_scatter(config, writer),
        Command::Coefficients => cmd_coefficients(config, axis, writer),
        Command::Scaling => cmd_scaling(config, writer),
        Command::Cloud => cmd_cloud(config, axis, writer),
        Command::Distributions => cmd_distributions(config, writer),
    }
}

/// Test-vs-comparison correlator pairs per (x_ind, order): the scatter
/// data whose diagonal is the ideal-device reference.
fn cmd_scatter(config: &ExperimentConfig, writer: &mut OutputWriter) -> AppResult<()> {
    let seed = config.seed;
    let matrix = haar_unitary(config.m, derive_seed(seed, &[TAG_MATRIX, 0]))?;
    let input = input_pattern(config.m, config.n);
    let comparison = sample_ideal(
        &matrix,
        &input,
        config.samples,
        derive_seed(seed, &[TAG_COMP]),
    )?;
    let comp_sets: BTreeMap<usize, CorrelatorSet> = config
        .orders
        .iter()
        .map(|&t| Ok((t, all_correlators(&comparison, t)?)))
        .collect::<Result<_, Error>>()?;

    let per_point: Vec<(String, Vec<String>)> = config
        .x_ind_grid
        .par_iter()
        .enumerate()
        .map(|(xi, &x)| -> AppResult<Vec<(String, Vec<String>)>> {
            let test = sample_partial_dist(
                &matrix,
                &input,
                x,
                config.samples,
                derive_seed(seed, &[TAG_TEST, xi as u64]),
            )?;
            let mut files = Vec::new();
            for &t in &config.orders {
                let test_set = all_correlators(&test, t)?;
                let rows = scatter_rows(&test_set, &comp_sets[&t]).collect();
                files.push((format!("scatter_x{x}_t{t}.csv"), rows));
            }
            Ok(files)
        })
        .collect::<AppResult<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    for (name, rows) in per_point {
        writer.write_csv(&name, "modes,kappa_test,kappa_comp", rows)?;
    }
    eprintln!(
        "scatter: {} grid points x {} orders done",
        config.x_ind_grid.len(),
        config.orders.len()
    );
    Ok(())
}

/// Evaluate γ with the near-zero-denominator case reported as a row flag
/// instead of an error.
fn gamma_or_flag(test: &CorrelatorSet, comp: &CorrelatorSet) -> AppResult<(f64, &'static str)> {
    match gamma(test, comp) {
        Ok(value) => Ok((value, "")),
        Err(Error::GammaDenominatorNearZero { .. }) => Ok((f64::NAN, "near-zero-denominator")),
        Err(other) => Err(other.into()),
    }
}

/// Pearson/Spearman/γ between test and ideal correlators across the noise
/// grid.
fn cmd_coefficients(
    config: &ExperimentConfig,
    axis: NoiseAxis,
    writer: &mut OutputWriter,
) -> AppResult<()> {
    let seed = config.seed;
    let matrix = haar_unitary(config.m, derive_seed(seed, &[TAG_MATRIX, 0]))?;
    let input = input_pattern(config.m, config.n);
    let comparison = sample_ideal(
        &matrix,
        &input,
        config.samples,
        derive_seed(seed, &[TAG_COMP]),
    )?;
    let comp_sets: BTreeMap<usize, CorrelatorSet> = config
        .orders
        .iter()
        .map(|&t| Ok((t, all_correlators(&comparison, t)?)))
        .collect::<Result<_, Error>>()?;

    let grid = axis_grid(config, axis);
    let rows: Vec<String> = grid
        .par_iter()
        .enumerate()
        .map(|(vi, &value)| -> AppResult<Vec<String>> {
            let test = sample_at(
                &matrix,
                &input,
                axis,
                value,
                config.samples,
                derive_seed(seed, &[TAG_TEST, vi as u64]),
            )?;
            let mut rows = Vec::with_capacity(config.orders.len());
            for &t in &config.orders {
                let test_set = all_correlators(&test, t)?;
                let comp_set = &comp_sets[&t];
                let (gamma_value, flag) = gamma_or_flag(&test_set, comp_set)?;
                let test_values = test_set.values();
                let comp_values = comp_set.values();
                rows.push(format!(
                    "{},{t},{},{},{},{flag}",
                    float_field(value),
                    float_field(pearson(&test_values, &comp_values)?),
                    float_field(spearman(&test_values, &comp_values)?),
                    float_field(gamma_value),
                ));
            }
            Ok(rows)
        })
        .collect::<AppResult<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    writer.write_csv(
        &format!("coefficients_{}.csv", axis_label(axis)),
        "noise_value,order,pearson,spearman,gamma,flag",
        rows,
    )?;
    eprintln!("coefficients: {} grid points done", grid.len());
    Ok(())
}

/// γ versus the distinguishability grid at several problem scales, with
/// mean and standard deviation over independent interferometer draws.
fn cmd_scaling(config: &ExperimentConfig, writer: &mut OutputWriter) -> AppResult<()> {
    let seed = config.seed;
    let over_photons = !config.n_grid.is_empty();
    let scales: Vec<(usize, u32)> = if over_photons {
        config.n_grid.iter().map(|&n| (config.m, n)).collect()
    } else {
        config.m_grid.iter().map(|&m| (m, config.n)).collect()
    };

    // One work unit per (scale, matrix draw); the x grid and orders are
    // swept inside so the ideal comparison run is shared.
    let units: Vec<(usize, usize)> = (0..scales.len())
        .flat_map(|s| (0..config.matrices).map(move |k| (s, k)))
        .collect();
    type PointKey = (usize, usize, usize);
    let results: Vec<BTreeMap<PointKey, Option<f64>>> = units
        .par_iter()
        .map(|&(s, k)| -> AppResult<BTreeMap<PointKey, Option<f64>>> {
            let (m, n) = scales[s];
            let matrix = haar_unitary(m, derive_seed(seed, &[TAG_MATRIX, s as u64, k as u64]))?;
            let input = input_pattern(m, n);
            let comparison = sample_ideal(
                &matrix,
                &input,
                config.samples,
                derive_seed(seed, &[TAG_COMP, s as u64, k as u64]),
            )?;
            let mut out = BTreeMap::new();
            for (xi, &x) in config.x_ind_grid.iter().enumerate() {
                let test = sample_partial_dist(
                    &matrix,
                    &input,
                    x,
                    config.samples,
                    derive_seed(seed, &[TAG_TEST, s as u64, xi as u64, k as u64]),
                )?;
                for &t in &config.orders {
                    let test_set = all_correlators(&test, t)?;
                    let comp_set = all_correlators(&comparison, t)?;
                    let (value, flag) = gamma_or_flag(&test_set, &comp_set)?;
                    out.insert((s, xi, t), if flag.is_empty() { Some(value) } else { None });
                }
            }
            Ok(out)
        })
        .collect::<AppResult<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (s, &(m, n)) in scales.iter().enumerate() {
        let scale_value = if over_photons { n as usize } else { m };
        for (xi, &x) in config.x_ind_grid.iter().enumerate() {
            for &t in &config.orders {
                let gammas: Vec<f64> = results
                    .iter()
                    .filter_map(|unit| unit.get(&(s, xi, t)).copied().flatten())
                    .collect();
                let degenerate = config.matrices - gammas.len();
                let (mean, std) = if gammas.is_empty() {
                    (f64::NAN, f64::NAN)
                } else {
                    let mean = gammas.iter().sum::<f64>() / gammas.len() as f64;
                    let std = if gammas.len() > 1 {
                        (gammas.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>()
                            / (gammas.len() - 1) as f64)
                            .sqrt()
                    } else {
                        f64::NAN
                    };
                    (mean, std)
                };
                rows.push(format!(
                    "{scale_value},{},{t},{},{},{},{degenerate}",
                    float_field(x),
                    float_field(mean),
                    float_field(std),
                    gammas.len(),
                ));
            }
        }
    }
    let name = if over_photons {
        "scaling_n.csv"
    } else {
        "scaling_m.csv"
    };
    writer.write_csv(
        name,
        "scale,x_ind,order,gamma_mean,gamma_std,matrices,degenerate",
        rows,
    )?;
    eprintln!(
        "scaling: {} scales x {} matrices done",
        scales.len(),
        config.matrices
    );
    Ok(())
}

fn point_flag(point: &CloudPoint) -> &'static str {
    if point.cv.is_none() || point.cs.is_none() {
        "degenerate"
    } else {
        ""
    }
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, (var / values.len() as f64).sqrt())
}

/// Per-input-combination (CV, CS) clouds across the noise grid, plus a
/// mean/stderr summary per grid value and order.
fn cmd_cloud(
    config: &ExperimentConfig,
    axis: NoiseAxis,
    writer: &mut OutputWriter,
) -> AppResult<()> {
    let seed = config.seed;
    let matrix = haar_unitary(config.m, derive_seed(seed, &[TAG_MATRIX, 0]))?;
    let grid = axis_grid(config, axis);

    struct ValueResult {
        files: Vec<(String, Vec<String>)>,
        summary_rows: Vec<String>,
    }
    let per_value: Vec<ValueResult> = grid
        .par_iter()
        .enumerate()
        .map(|(vi, &value)| -> AppResult<ValueResult> {
            let noise = noise_at(axis, value)?;
            let cloud_seed = derive_seed(seed, &[TAG_CLOUD, vi as u64]);
            let mut files = Vec::new();
            let mut summary_rows = Vec::new();
            for &t in &config.orders {
                let points = cloud(
                    &matrix,
                    &CloudParams {
                        photons: config.n,
                        order: t,
                        noise,
                        samples_per_combo: config.samples,
                        combo_budget: Some(config.combo_budget),
                        seed: cloud_seed,
                    },
                )?;
                let rows = points
                    .iter()
                    .map(|p| {
                        format!(
                            "{},{},{},{}",
                            modes_field(&p.input_modes),
                            optional_float_field(p.cv),
                            optional_float_field(p.cs),
                            point_flag(p)
                        )
                    })
                    .collect();
                files.push((format!("cloud_{}{value}_t{t}.csv", axis_label(axis)), rows));

                let cvs: Vec<f64> = points.iter().filter_map(|p| p.cv).collect();
                let css: Vec<f64> = points.iter().filter_map(|p| p.cs).collect();
                let degenerate = points
                    .iter()
                    .filter(|p| point_flag(p) == "degenerate")
                    .count();
                let (mean_cv, stderr_cv) = mean_and_stderr(&cvs);
                let (mean_cs, stderr_cs) = mean_and_stderr(&css);
                summary_rows.push(format!(
                    "{},{t},{},{},{},{},{},{degenerate}",
                    float_field(value),
                    float_field(mean_cv),
                    float_field(stderr_cv),
                    float_field(mean_cs),
                    float_field(stderr_cs),
                    points.len(),
                ));
            }
            Ok(ValueResult {
                files,
                summary_rows,
            })
        })
        .collect::<AppResult<Vec<_>>>()?;

    let mut summary = Vec::new();
    for value_result in per_value {
        for (name, rows) in value_result.files {
            writer.write_csv(&name, "combo,cv,cs,flag", rows)?;
        }
        summary.extend(value_result.summary_rows);
    }
    writer.write_csv(
        "cloud_summary.csv",
        "noise_value,order,mean_cv,stderr_cv,mean_cs,stderr_cs,points,degenerate",
        summary,
    )?;
    eprintln!("cloud: {} grid points done", grid.len());
    Ok(())
}

/// Sorted exact background, empirical post-selected distributions per
/// p_noise, and deviation curves against the ideal law on both noise axes.
fn cmd_distributions(config: &ExperimentConfig, writer: &mut OutputWriter) -> AppResult<()> {
    let seed = config.seed;
    let matrix = haar_unitary(config.m, derive_seed(seed, &[TAG_MATRIX, 0]))?;
    let input = input_pattern(config.m, config.n);
    let ideal = ideal_distribution(&matrix, &input)?;
    let background = sorted_background(&ideal);
    writer.write_csv(
        "background.csv",
        "pattern,prob",
        distribution_rows(&background),
    )?;

    struct PnoisePoint {
        empirical_file: (String, Vec<String>),
        tvd_row: String,
    }
    let pnoise_points: Vec<PnoisePoint> = config
        .p_noise_grid
        .par_iter()
        .enumerate()
        .map(|(pi, &p)| -> AppResult<PnoisePoint> {
            let noise = NoiseConfig::coupled(p)?;
            let samples = sample_noisy_postselected(
                &matrix,
                &input,
                &noise,
                config.samples,
                derive_seed(seed, &[TAG_DIST, 0, pi as u64]),
            )?;
            let empirical = samples.empirical_distribution();
            let lookup: BTreeMap<_, _> = empirical.iter().map(|(k, v)| (k.clone(), v)).collect();
            let rows = background
                .patterns()
                .iter()
                .map(|pattern| {
                    format!(
                        "{},{}",
                        pattern_field(pattern),
                        float_field(lookup.get(pattern).copied().unwrap_or(0.0))
                    )
                })
                .collect();
            let exact = noisy_postselected_distribution(&matrix, &input, 1.0 - p, p)?;
            let tvd_row = format!(
                "{},{},{}",
                float_field(p),
                float_field(tvd(&empirical, &ideal)),
                float_field(tvd(&exact, &ideal)),
            );
            Ok(PnoisePoint {
                empirical_file: (format!("empirical_pnoise{p}.csv"), rows),
                tvd_row,
            })
        })
        .collect::<AppResult<Vec<_>>>()?;

    let mut tvd_rows = Vec::new();
    for point in pnoise_points {
        let (name, rows) = point.empirical_file;
        writer.write_csv(&name, "pattern,prob", rows)?;
        tvd_rows.push(point.tvd_row);
    }
    writer.write_csv("tvd_pnoise.csv", "p_noise,d_empirical,d_exact", tvd_rows)?;

    if !config.x_ind_grid.is_empty() {
        let xind_rows: Vec<String> = config
            .x_ind_grid
            .par_iter()
            .enumerate()
            .map(|(xi, &x)| -> AppResult<String> {
                let samples = sample_partial_dist(
                    &matrix,
                    &input,
                    x,
                    config.samples,
                    derive_seed(seed, &[TAG_DIST, 1, xi as u64]),
                )?;
                let exact = partial_dist_distribution(&matrix, &input, x)?;
                Ok(format!(
                    "{},{},{}",
                    float_field(x),
                    float_field(tvd(&samples.empirical_distribution(), &ideal)),
                    float_field(tvd(&exact, &ideal)),
                ))
            })
            .collect::<AppResult<Vec<_>>>()?;
        writer.write_csv("tvd_xind.csv", "x_ind,d_empirical,d_exact", xind_rows)?;
    }
    eprintln!(
        "distributions: {} p_noise and {} x_ind points done",
        config.p_noise_grid.len(),
        config.x_ind_grid.len()
    );
    Ok(())
}
