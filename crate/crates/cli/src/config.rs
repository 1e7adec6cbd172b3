//! Experiment configuration: desk-scale defaults per subcommand, JSON
//! config files, the paper-scale presets, and flag overrides.
//!
//! Precedence, lowest to highest: built-in desk defaults, the JSON config
//! file, `--paper-scale` (which restores the full experimental scale),
//! then the individual flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

/// Which noise axis a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseAxis {
    /// Photon partial distinguishability x_ind.
    Xind,
    /// Coupled loss/dark level p_noise (1 − eta_t = p_dc = p_noise).
    Pnoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Scatter,
    Coefficients,
    Scaling,
    Cloud,
    Distributions,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Scatter => "scatter",
            Command::Coefficients => "coefficients",
            Command::Scaling => "scaling",
            Command::Cloud => "cloud",
            Command::Distributions => "distributions",
        }
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: u32,
    pub x_ind_grid: Vec<f64>,
    pub p_noise_grid: Vec<f64>,
    pub orders: Vec<usize>,
    /// Samples per grid point (per input combination for clouds).
    pub samples: usize,
    /// Interferometer draws per scale point (scaling sweeps only).
    pub matrices: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Max input combinations per cloud.
    pub combo_budget: usize,
    /// Scaling sweep: photon numbers to visit (mode count fixed at `m`).
    pub n_grid: Vec<u32>,
    /// Scaling sweep: mode counts to visit (photon number fixed at `n`).
    pub m_grid: Vec<usize>,
}

/// The optional JSON config file: any subset of the experiment fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub m: Option<usize>,
    pub n: Option<u32>,
    pub x_ind_grid: Option<Vec<f64>>,
    pub p_noise_grid: Option<Vec<f64>>,
    pub orders: Option<Vec<usize>>,
    pub samples: Option<usize>,
    pub matrices: Option<usize>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub combo_budget: Option<usize>,
    pub n_grid: Option<Vec<u32>>,
    pub m_grid: Option<Vec<usize>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| AppError::Usage(format!("config {}: {e}", path.display())))
    }
}

const DEFAULT_X_GRID: &[f64] = &[0.0, 0.25, 0.5, 0.75, 1.0];
const DEFAULT_P_GRID: &[f64] = &[0.0, 0.1, 0.2, 0.3];

impl ExperimentConfig {
    /// Desk-scale defaults: small enough to finish in seconds to minutes.
    pub fn desk_default(command: Command) -> Self {
        let base = Self {
            m: 8,
            n: 4,
            x_ind_grid: DEFAULT_X_GRID.to_vec(),
            p_noise_grid: DEFAULT_P_GRID.to_vec(),
            orders: vec![2, 3],
            samples: 5_000,
            matrices: 5,
            seed: 17,
            output_dir: PathBuf::from("out"),
            combo_budget: 100,
            n_grid: Vec::new(),
            m_grid: Vec::new(),
        };
        match command {
            Command::Scatter => Self {
                orders: vec![2, 3, 4],
                ..base
            },
            Command::Coefficients => Self {
                m: 10,
                n: 5,
                samples: 10_000,
                ..base
            },
            Command::Scaling => Self {
                m: 10,
                orders: vec![3],
                samples: 2_000,
                x_ind_grid: vec![0.0, 0.5, 1.0],
                n_grid: vec![3, 4, 5],
                ..base
            },
            Command::Cloud => Self {
                m: 12,
                n: 3,
                samples: 2_000,
                x_ind_grid: vec![0.0, 0.5, 1.0],
                ..base
            },
            Command::Distributions => Self {
                samples: 100_000,
                p_noise_grid: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
                x_ind_grid: vec![0.5, 0.7, 0.9, 1.0],
                ..base
            },
        }
    }

    /// Restore the full experimental scale for the scale-defining fields.
    pub fn apply_paper_scale(&mut self, command: Command) {
        match command {
            Command::Scatter => {
                self.m = 15;
                self.n = 10;
                self.samples = 10_000;
                self.orders = vec![2, 3, 4];
            }
            Command::Coefficients => {
                self.m = 15;
                self.n = 10;
                self.samples = 20_000;
                self.orders = vec![2, 3, 4];
            }
            Command::Scaling => {
                self.m = 15;
                self.samples = 10_000;
                self.matrices = 100;
                self.orders = vec![3];
                if self.n_grid.is_empty() && self.m_grid.is_empty() {
                    self.n_grid = vec![4, 6, 8, 10];
                }
            }
            Command::Cloud => {
                self.m = 16;
                self.n = 4;
                self.samples = 10_000;
                self.combo_budget = 1_820;
                self.orders = vec![2, 3];
            }
            Command::Distributions => {
                self.m = 10;
                self.n = 5;
                self.samples = 1_000_000;
            }
        }
    }

    pub fn overlay(&mut self, file: &ConfigFile) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(value) = &file.$field {
                    self.$field = value.clone();
                }
            };
        }
        take!(m);
        take!(n);
        take!(x_ind_grid);
        take!(p_noise_grid);
        take!(orders);
        take!(samples);
        take!(matrices);
        take!(seed);
        take!(output_dir);
        take!(combo_budget);
        take!(n_grid);
        take!(m_grid);
    }

    pub fn validate(&self, command: Command, axis: NoiseAxis) -> AppResult<()> {
        let usage = |msg: String| Err(AppError::Usage(msg));
        if self.m == 0 {
            return usage("m must be at least 1".into());
        }
        if self.n == 0 {
            return usage("n must be at least 1".into());
        }
        if self.n as usize > self.m {
            return usage(format!(
                "n = {} single-photon inputs do not fit into m = {} modes",
                self.n, self.m
            ));
        }
        if self.samples == 0 {
            return usage("samples must be at least 1".into());
        }
        if self.orders.is_empty() {
            return usage("orders must not be empty".into());
        }
        if let Some(&bad) = self.orders.iter().find(|&&t| t == 0 || t > 8) {
            return usage(format!("order {bad} outside the supported range 1..=8"));
        }
        for &x in &self.x_ind_grid {
            if !(0.0..=1.0).contains(&x) {
                return usage(format!("x_ind value {x} outside [0, 1]"));
            }
        }
        for &p in &self.p_noise_grid {
            if !(0.0..1.0).contains(&p) {
                return usage(format!("p_noise value {p} outside [0, 1)"));
            }
        }
        let axis_grid = match axis {
            NoiseAxis::Xind => &self.x_ind_grid,
            NoiseAxis::Pnoise => &self.p_noise_grid,
        };
        match command {
            Command::Scatter => {
                if self.x_ind_grid.is_empty() {
                    return usage("scatter needs a non-empty x_ind grid".into());
                }
            }
            Command::Coefficients | Command::Cloud => {
                if axis_grid.is_empty() {
                    return usage(format!(
                        "{} needs a non-empty grid on the selected noise axis",
                        command.name()
                    ));
                }
            }
            Command::Scaling => {
                if self.x_ind_grid.is_empty() {
                    return usage("scaling needs a non-empty x_ind grid".into());
                }
                if self.n_grid.is_empty() == self.m_grid.is_empty() {
                    return usage(
                        "scaling needs exactly one of n_grid (m fixed) or m_grid (n fixed)".into(),
                    );
                }
                if self.matrices == 0 {
                    return usage("matrices must be at least 1".into());
                }
                for &n in &self.n_grid {
                    if n == 0 || n as usize > self.m {
                        return usage(format!("n_grid value {n} does not fit into m = {}", self.m));
                    }
                }
                for &m in &self.m_grid {
                    if m < self.n as usize {
                        return usage(format!(
                            "m_grid value {m} cannot host n = {} photons",
                            self.n
                        ));
                    }
                }
            }
            Command::Distributions => {
                if self.p_noise_grid.is_empty() {
                    return usage("distributions needs a non-empty p_noise grid".into());
                }
                let count = bosonbench_core::distributions::pattern_count(self.m, self.n);
                if count > bosonbench_core::distributions::DEFAULT_PATTERN_CAP {
                    return usage(format!(
                        "C(m+n-1, n) = {count} patterns exceed the enumeration cap; \
                         pick a smaller (m, n)"
                    ));
                }
                if !self.x_ind_grid.is_empty()
                    && self.n > bosonbench_core::distributions::PARTIAL_DIST_MAX_PHOTONS
                {
                    return usage(format!(
                        "the x_ind deviation inset needs n <= {} for the exact oracle",
                        bosonbench_core::distributions::PARTIAL_DIST_MAX_PHOTONS
                    ));
                }
            }
        }
        if command == Command::Cloud && self.combo_budget < 30 {
            return usage(format!(
                "combo_budget {} below the minimum of 30",
                self.combo_budget
            ));
        }
        Ok(())
    }
}

/// Hash over everything that determines the numbers (not where they are
/// written or how many workers produce them).
pub fn config_hash(command: Command, axis: NoiseAxis, config: &ExperimentConfig) -> String {
    use sha2::{Digest, Sha256};

    #[derive(Serialize)]
    struct Hashed<'a> {
        command: &'static str,
        axis: NoiseAxis,
        m: usize,
        n: u32,
        x_ind_grid: &'a [f64],
        p_noise_grid: &'a [f64],
        orders: &'a [usize],
        samples: usize,
        matrices: usize,
        seed: u64,
        combo_budget: usize,
        n_grid: &'a [u32],
        m_grid: &'a [usize],
    }
    let canonical = serde_json::to_string(&Hashed {
        command: command.name(),
        axis,
        m: config.m,
        n: config.n,
        x_ind_grid: &config.x_ind_grid,
        p_noise_grid: &config.p_noise_grid,
        orders: &config.orders,
        samples: config.samples,
        matrices: config.matrices,
        seed: config.seed,
        combo_budget: config.combo_budget,
        n_grid: &config.n_grid,
        m_grid: &config.m_grid,
    })
    .expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("hex formatting");
    }
    hex
}
