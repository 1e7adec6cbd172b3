//! File emission: CSV with provenance header comments, JSON sidecars, and
//! the text encodings of the core types.
//!
//! All files are UTF-8 with LF line endings. CSV headers carry the toolkit
//! version, the command, the config hash, and the master seed as
//! '#'-prefixed comment lines, so every artifact names the run that
//! produced it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bosonbench_core::distributions::ExactDistribution;
use bosonbench_core::linalg::ComplexMatrix;
use bosonbench_core::sampler::SampleSet;
use bosonbench_core::stats::CorrelatorSet;
use bosonbench_core::OccupationPattern;
use serde::Serialize;

use crate::error::{AppError, AppResult};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes run artifacts into one output directory with a shared
/// provenance header.
pub struct OutputWriter {
    dir: PathBuf,
    command: String,
    config_hash: String,
    master_seed: u64,
    files: Vec<String>,
}

impl OutputWriter {
    pub fn new(dir: &Path, command: &str, config_hash: &str, master_seed: u64) -> AppResult<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| AppError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            config_hash: config_hash.to_string(),
            master_seed,
            files: Vec::new(),
        })
    }

    fn header(&self) -> String {
        format!(
            "# bosonbench {TOOLKIT_VERSION}\n# command: {}\n# config_hash: {}\n# master_seed: {}\n",
            self.command, self.config_hash, self.master_seed
        )
    }

    pub fn write_csv(
        &mut self,
        name: &str,
        columns: &str,
        rows: impl IntoIterator<Item = String>,
    ) -> AppResult<PathBuf> {
        let mut body = self.header();
        body.push_str(columns);
        body.push('\n');
        for row in rows {
            body.push_str(&row);
            body.push('\n');
        }
        self.write_raw(name, &body)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> AppResult<PathBuf> {
        let mut body = serde_json::to_string_pretty(value)
            .map_err(|e| AppError::Io(format!("{name}: {e}")))?;
        body.push('\n');
        self.write_raw(name, &body)
    }

    fn write_raw(&mut self, name: &str, body: &str) -> AppResult<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(path)
    }

    /// Names of everything written so far, sorted.
    pub fn file_names(&self) -> Vec<String> {
        let mut names = self.files.clone();
        names.sort();
        names
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            toolkit_version: TOOLKIT_VERSION,
            command: self.command.clone(),
            config_hash: self.config_hash.clone(),
            master_seed: self.master_seed,
        }
    }
}

/// Provenance block embedded in JSON artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub toolkit_version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub master_seed: u64,
}

/// Colon-separated counts, the pattern wire format: (2,0,1,0) → "2:0:1:0".
pub fn pattern_field(pattern: &OccupationPattern) -> String {
    let mut out = String::new();
    for (i, c) in pattern.counts().iter().enumerate() {
        if i > 0 {
            out.push(':');
        }
        write!(out, "{c}").expect("string write");
    }
    out
}

/// Dash-separated 1-based mode list, the subset wire format: {0,3,6} → "1-4-7".
pub fn modes_field(modes: &[usize]) -> String {
    let mut out = String::new();
    for (i, m) in modes.iter().enumerate() {
        if i > 0 {
            out.push('-');
        }
        write!(out, "{}", m + 1).expect("string write");
    }
    out
}

/// A float CSV cell; NaN renders as "nan".
pub fn float_field(value: f64) -> String {
    if value.is_nan() {
        "nan".to_string()
    } else {
        format!("{value}")
    }
}

pub fn optional_float_field(value: Option<f64>) -> String {
    value.map_or_else(|| "nan".to_string(), float_field)
}

/// Matrix JSON: row-major real and imaginary parts as parallel arrays.
#[derive(Debug, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(matrix: &ComplexMatrix) -> Self {
        Self {
            rows: matrix.rows(),
            cols: matrix.cols(),
            re: matrix.entries().iter().map(|z| z.re).collect(),
            im: matrix.entries().iter().map(|z| z.im).collect(),
        }
    }
}

/// Distribution JSON: parallel pattern/probability arrays.
#[derive(Debug, Serialize)]
pub struct DistributionJson {
    pub patterns: Vec<String>,
    pub probs: Vec<f64>,
}

impl From<&ExactDistribution> for DistributionJson {
    fn from(dist: &ExactDistribution) -> Self {
        Self {
            patterns: dist.patterns().iter().map(pattern_field).collect(),
            probs: dist.probs().to_vec(),
        }
    }
}

/// "pattern,prob" rows of a distribution.
pub fn distribution_rows(dist: &ExactDistribution) -> impl Iterator<Item = String> + '_ {
    dist.iter()
        .map(|(pattern, prob)| format!("{},{}", pattern_field(pattern), float_field(prob)))
}

/// One pattern per line, colon-separated counts.
pub fn sample_rows(samples: &SampleSet) -> impl Iterator<Item = String> + '_ {
    samples.patterns.iter().map(pattern_field)
}

/// The JSON sidecar of a sample CSV.
#[derive(Debug, Serialize)]
pub struct SampleSidecar {
    pub m: usize,
    pub n: u32,
    pub seed: u64,
    pub config: NoiseConfigJson,
    pub acceptance_rate: f64,
    #[serde(rename = "N")]
    pub count: usize,
    #[serde(flatten)]
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseConfigJson {
    pub x_ind: f64,
    pub eta_t: f64,
    pub p_dc: f64,
}

impl From<&bosonbench_core::NoiseConfig> for NoiseConfigJson {
    fn from(config: &bosonbench_core::NoiseConfig) -> Self {
        Self {
            x_ind: config.x_ind(),
            eta_t: config.eta_t(),
            p_dc: config.p_dc(),
        }
    }
}

impl SampleSidecar {
    pub fn new(samples: &SampleSet, provenance: Provenance) -> Self {
        Self {
            m: samples.m,
            n: samples.n,
            seed: samples.seed,
            config: NoiseConfigJson::from(&samples.config),
            acceptance_rate: samples.acceptance_rate,
            count: samples.len(),
            provenance,
        }
    }
}

/// JSON form of an evaluation report.
#[derive(Debug, Serialize)]
pub struct EvaluationReportJson {
    pub pearson: f64,
    pub spearman: f64,
    pub gamma: f64,
    pub mean_cv: Option<f64>,
    pub mean_cs: Option<f64>,
    pub per_order: Vec<OrderEvaluationJson>,
    pub orders: Vec<usize>,
    pub test_samples: Option<usize>,
    pub reference_samples: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct OrderEvaluationJson {
    pub order: usize,
    pub pearson: f64,
    pub spearman: f64,
    pub gamma: f64,
    pub cv: Option<f64>,
    pub cs: Option<f64>,
}

impl From<&bosonbench_core::EvaluationReport> for EvaluationReportJson {
    fn from(report: &bosonbench_core::EvaluationReport) -> Self {
        Self {
            pearson: report.pearson,
            spearman: report.spearman,
            gamma: report.gamma,
            mean_cv: report.mean_cv,
            mean_cs: report.mean_cs,
            per_order: report
                .per_order
                .iter()
                .map(|o| OrderEvaluationJson {
                    order: o.order,
                    pearson: o.pearson,
                    spearman: o.spearman,
                    gamma: o.gamma,
                    cv: o.cv,
                    cs: o.cs,
                })
                .collect(),
            orders: report.orders.clone(),
            test_samples: report.test_samples,
            reference_samples: report.reference_samples,
        }
    }
}

/// "modes,kappa" rows of a correlator family.
pub fn correlator_rows(set: &CorrelatorSet) -> impl Iterator<Item = String> + '_ {
    set.entries()
        .iter()
        .map(|(modes, kappa)| format!("{},{}", modes_field(modes), float_field(*kappa)))
}

/// "modes,kappa_test,kappa_comp" rows for scatter artifacts; both sets
/// must share their key family.
pub fn scatter_rows<'a>(
    test: &'a CorrelatorSet,
    comp: &'a CorrelatorSet,
) -> impl Iterator<Item = String> + 'a {
    test.entries()
        .iter()
        .zip(comp.entries().values())
        .map(|((modes, kappa_test), kappa_comp)| {
            format!(
                "{},{},{}",
                modes_field(modes),
                float_field(*kappa_test),
                float_field(*kappa_comp)
            )
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_formats() {
        let pattern = OccupationPattern::new(vec![2, 0, 1, 0]);
        assert_eq!(pattern_field(&pattern), "2:0:1:0");
        assert_eq!(modes_field(&[0, 3, 6]), "1-4-7");
        assert_eq!(float_field(0.25), "0.25");
        assert_eq!(float_field(f64::NAN), "nan");
    }

    #[test]
    fn csv_files_carry_the_provenance_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut writer = OutputWriter::new(dir.path(), "scatter", "abc123", 7).unwrap();
        let path = writer
            .write_csv("demo.csv", "a,b", vec!["1,2".to_string()])
            .unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with(&format!("# bosonbench {TOOLKIT_VERSION}\n")));
        assert!(text.contains("# command: scatter\n"));
        assert!(text.contains("# config_hash: abc123\n"));
        assert!(text.contains("# master_seed: 7\n"));
        assert!(text.ends_with("a,b\n1,2\n"));
        assert!(!text.contains('\r'));
    }
}
