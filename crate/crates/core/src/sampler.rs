//! Pattern generators: exact chain-rule sampling of ideal outputs, the
//! per-photon dilution scheme for partial distinguishability, loss and
//! dark-count channels, and n-photon post-selection.
//!
//! Every sampler derives one independent random stream per shot index from
//! the master seed (see [`crate::rng`]), so a sample set is a pure function
//! of `(matrix, input, config, count, seed)` regardless of how shots are
//! scheduled.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods cover the std build; no_std goes through the trait.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{permanent, ComplexMatrix};
use crate::pattern::OccupationPattern;
use crate::rng::shot_rng;

/// Hard photon cap for the chain-rule sampler; per-sample cost grows as
/// n²·2^n, so anything beyond this refuses rather than silently degrading.
pub const CHAIN_RULE_MAX_PHOTONS: u32 = 16;

/// Raw-shot count after which the post-selection acceptance rate is
/// checked against [`POST_SELECTION_FLOOR`].
pub const POST_SELECTION_MIN_RAW: u64 = 100_000;

/// Minimum tolerated acceptance rate for post-selected sampling.
pub const POST_SELECTION_FLOOR: f64 = 1e-4;

/// The three noise channels: photon indistinguishability `x_ind`, per-mode
/// transmission `eta_t`, and per-detector dark-count probability `p_dc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    x_ind: f64,
    eta_t: f64,
    p_dc: f64,
}

impl NoiseConfig {
    pub fn new(x_ind: f64, eta_t: f64, p_dc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x_ind) {
            return Err(Error::ParameterOutOfRange {
                name: "x_ind",
                value: x_ind,
            });
        }
        if !(0.0..=1.0).contains(&eta_t) {
            return Err(Error::ParameterOutOfRange {
                name: "eta_t",
                value: eta_t,
            });
        }
        if !(0.0..1.0).contains(&p_dc) {
            return Err(Error::ParameterOutOfRange {
                name: "p_dc",
                value: p_dc,
            });
        }
        Ok(Self { x_ind, eta_t, p_dc })
    }

    /// Ideal device: full interference, no loss, dark counts off.
    pub fn noiseless() -> Self {
        Self {
            x_ind: 1.0,
            eta_t: 1.0,
            p_dc: 0.0,
        }
    }

    /// Distinguishability noise only.
    pub fn distinguishability(x_ind: f64) -> Result<Self> {
        Self::new(x_ind, 1.0, 0.0)
    }

    /// The coupled loss/dark setting `1 − eta_t = p_dc = p_noise`, with
    /// photons kept fully indistinguishable.
    pub fn coupled(p_noise: f64) -> Result<Self> {
        Self::new(1.0, 1.0 - p_noise, p_noise)
    }

    pub fn x_ind(&self) -> f64 {
        self.x_ind
    }

    pub fn eta_t(&self) -> f64 {
        self.eta_t
    }

    pub fn p_dc(&self) -> f64 {
        self.p_dc
    }

    pub fn is_noiseless(&self) -> bool {
        self.x_ind == 1.0 && self.eta_t == 1.0 && self.p_dc == 0.0
    }
}

/// An ordered collection of sampled output patterns plus the generation
/// metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    /// Mode count of every pattern.
    pub m: usize,
    /// Nominal photon number of the input.
    pub n: u32,
    /// Patterns in shot order.
    pub patterns: Vec<OccupationPattern>,
    /// Master seed the per-shot streams were derived from.
    pub seed: u64,
    /// Noise configuration the samples were generated under.
    pub config: NoiseConfig,
    /// Fraction of raw shots surviving post-selection (1 when no
    /// post-selection took place).
    pub acceptance_rate: f64,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Empirical frequencies of the sampled patterns, in ascending pattern
    /// order.
    pub fn empirical_distribution(&self) -> crate::distributions::ExactDistribution {
        let mut counts: alloc::collections::BTreeMap<&OccupationPattern, usize> =
            alloc::collections::BTreeMap::new();
        for pattern in &self.patterns {
            *counts.entry(pattern).or_insert(0) += 1;
        }
        let total = self.patterns.len().max(1) as f64;
        let (patterns, probs) = counts
            .into_iter()
            .map(|(p, c)| (p.clone(), c as f64 / total))
            .unzip();
        crate::distributions::ExactDistribution::new(patterns, probs)
            .expect("frequencies are non-negative")
    }
}

/// Exact sampler for ideal boson sampling via the photon-by-photon chain
/// rule.
///
/// Photons are placed one at a time; the conditional weight of putting the
/// next photon into mode r is |Perm(A_k,r)|², where A_k,r stacks the rows
/// chosen so far plus row r against the first k (uniformly permuted) input
/// columns. The permanents are evaluated through a single Laplace
/// expansion along the candidate row, so each step costs k permanents of
/// size k−1 plus O(m·k) weight assembly.
struct ChainRuleSampler {
    /// m × n matrix whose columns are the input-mode columns of the
    /// interferometer.
    columns: ComplexMatrix,
}

impl ChainRuleSampler {
    fn new(matrix: &ComplexMatrix, input_modes: &[usize]) -> Result<Self> {
        let n = input_modes.len() as u32;
        if n > CHAIN_RULE_MAX_PHOTONS {
            return Err(Error::PhotonCountTooLarge {
                n,
                max: CHAIN_RULE_MAX_PHOTONS,
            });
        }
        let m = matrix.rows();
        let mut columns = ComplexMatrix::zeros(m, input_modes.len());
        for (c, &mode) in input_modes.iter().enumerate() {
            for r in 0..m {
                columns.set(r, c, matrix.get(r, mode));
            }
        }
        Ok(Self { columns })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<OccupationPattern> {
        let m = self.columns.rows();
        let n = self.columns.cols();
        let mut pattern = OccupationPattern::zeros(m);
        if n == 0 {
            return Ok(pattern);
        }

        // Uniform random order of the input columns; required for the
        // prefix marginals below to be the true marginals.
        let mut col_order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            col_order.swap(i, j);
        }

        let mut chosen_rows: Vec<usize> = Vec::with_capacity(n);
        let mut weights = vec![0.0f64; m];
        for k in 1..=n {
            let active = &col_order[..k];
            // Laplace minors: permanent over the chosen rows with one
            // active column dropped.
            let mut minors = vec![Complex64::new(0.0, 0.0); k];
            for (drop, minor) in minors.iter_mut().enumerate() {
                let mut sub = ComplexMatrix::zeros(k - 1, k - 1);
                for (rr, &row) in chosen_rows.iter().enumerate() {
                    let mut cc = 0;
                    for (idx, &col) in active.iter().enumerate() {
                        if idx == drop {
                            continue;
                        }
                        sub.set(rr, cc, self.columns.get(row, col));
                        cc += 1;
                    }
                }
                *minor = permanent(&sub)?;
            }

            let mut total = 0.0;
            for (r, weight) in weights.iter_mut().enumerate() {
                let mut amp = Complex64::new(0.0, 0.0);
                for (idx, &col) in active.iter().enumerate() {
                    amp += self.columns.get(r, col) * minors[idx];
                }
                *weight = amp.norm_sqr();
                total += *weight;
            }
            if total.is_nan() || total <= 0.0 {
                return Err(Error::DegenerateInput(alloc::format!(
                    "chain-rule weights vanished at photon {k}"
                )));
            }

            let mut u = rng.gen::<f64>() * total;
            let mut choice = m - 1;
            for (r, &w) in weights.iter().enumerate() {
                if u < w {
                    choice = r;
                    break;
                }
                u -= w;
            }
            chosen_rows.push(choice);
            pattern.counts_mut()[choice] += 1;
        }
        Ok(pattern)
    }
}

fn collision_free_input_modes(input: &OccupationPattern) -> Result<Vec<usize>> {
    if !input.is_collision_free() {
        return Err(Error::CollisionInput);
    }
    Ok(input.occupied_modes())
}

/// Draw `count` i.i.d. samples from the ideal output distribution.
pub fn sample_ideal(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    let modes = collision_free_input_modes(input)?;
    let sampler = ChainRuleSampler::new(matrix, &modes)?;
    let mut patterns = Vec::with_capacity(count);
    for shot in 0..count {
        let mut rng = shot_rng(seed, shot as u64);
        patterns.push(sampler.sample(&mut rng)?);
    }
    Ok(SampleSet {
        m: matrix.rows(),
        n: input.total(),
        patterns,
        seed,
        config: NoiseConfig::noiseless(),
        acceptance_rate: 1.0,
    })
}

/// Split of the photons into the jointly-interfering coherent set and the
/// individually-routed distinguished ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhotonPartition {
    pub coherent: Vec<usize>,
    pub distinguished: Vec<usize>,
}

/// Independently mark each photon coherent with probability `x_ind`,
/// distinguished otherwise.
pub fn collapse_photon_labels<R: Rng + ?Sized>(
    photons: u32,
    x_ind: f64,
    rng: &mut R,
) -> Result<PhotonPartition> {
    if !(0.0..=1.0).contains(&x_ind) {
        return Err(Error::ParameterOutOfRange {
            name: "x_ind",
            value: x_ind,
        });
    }
    let mut coherent = Vec::new();
    let mut distinguished = Vec::new();
    for photon in 0..photons as usize {
        if rng.gen::<f64>() < x_ind {
            coherent.push(photon);
        } else {
            distinguished.push(photon);
        }
    }
    Ok(PhotonPartition {
        coherent,
        distinguished,
    })
}

/// One-shot generator for partially distinguishable photons.
///
/// Per shot: collapse the photon labels, sample the coherent subset
/// jointly through the chain rule on the corresponding columns, and route
/// every distinguished photon independently with the single-photon law
/// |M_{j,i}|² of its input mode i.
struct DilutionSampler<'a> {
    matrix: &'a ComplexMatrix,
    input_modes: Vec<usize>,
    x_ind: f64,
    /// Cumulative single-photon output law per photon.
    single_photon_cdf: Vec<Vec<f64>>,
}

impl<'a> DilutionSampler<'a> {
    fn new(matrix: &'a ComplexMatrix, input: &OccupationPattern, x_ind: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x_ind) {
            return Err(Error::ParameterOutOfRange {
                name: "x_ind",
                value: x_ind,
            });
        }
        let input_modes = collision_free_input_modes(input)?;
        let n = input_modes.len() as u32;
        if n > CHAIN_RULE_MAX_PHOTONS {
            return Err(Error::PhotonCountTooLarge {
                n,
                max: CHAIN_RULE_MAX_PHOTONS,
            });
        }
        let m = matrix.rows();
        let mut single_photon_cdf = Vec::with_capacity(input_modes.len());
        for &mode in &input_modes {
            let mut cdf = Vec::with_capacity(m);
            let mut acc = 0.0;
            for r in 0..m {
                acc += matrix.get(r, mode).norm_sqr();
                cdf.push(acc);
            }
            single_photon_cdf.push(cdf);
        }
        Ok(Self {
            matrix,
            input_modes,
            x_ind,
            single_photon_cdf,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<OccupationPattern> {
        let n = self.input_modes.len() as u32;
        let partition = collapse_photon_labels(n, self.x_ind, rng)?;
        let mut pattern = if partition.coherent.is_empty() {
            OccupationPattern::zeros(self.matrix.rows())
        } else {
            let coherent_modes: Vec<usize> = partition
                .coherent
                .iter()
                .map(|&p| self.input_modes[p])
                .collect();
            ChainRuleSampler::new(self.matrix, &coherent_modes)?.sample(rng)?
        };
        for &photon in &partition.distinguished {
            let cdf = &self.single_photon_cdf[photon];
            let u = rng.gen::<f64>() * cdf.last().copied().unwrap_or(1.0);
            let mode = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            pattern.counts_mut()[mode] += 1;
        }
        Ok(pattern)
    }
}

/// Draw `count` samples with partial distinguishability `x_ind` via the
/// per-photon dilution scheme.
pub fn sample_partial_dist(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    x_ind: f64,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    let sampler = DilutionSampler::new(matrix, input, x_ind)?;
    let mut patterns = Vec::with_capacity(count);
    for shot in 0..count {
        let mut rng = shot_rng(seed, shot as u64);
        patterns.push(sampler.sample(&mut rng)?);
    }
    Ok(SampleSet {
        m: matrix.rows(),
        n: input.total(),
        patterns,
        seed,
        config: NoiseConfig::new(x_ind, 1.0, 0.0)?,
        acceptance_rate: 1.0,
    })
}

/// Each photon independently survives with probability `eta`.
pub fn apply_loss<R: Rng + ?Sized>(
    pattern: &OccupationPattern,
    eta: f64,
    rng: &mut R,
) -> OccupationPattern {
    let mut out = OccupationPattern::zeros(pattern.modes());
    for (mode, &count) in pattern.counts().iter().enumerate() {
        let mut kept = 0;
        for _ in 0..count {
            if rng.gen::<f64>() < eta {
                kept += 1;
            }
        }
        out.counts_mut()[mode] = kept;
    }
    out
}

/// Each detector independently registers one spurious count with
/// probability `p_dc`.
pub fn apply_dark_counts<R: Rng + ?Sized>(
    pattern: &OccupationPattern,
    p_dc: f64,
    rng: &mut R,
) -> OccupationPattern {
    let mut out = pattern.clone();
    for mode in 0..out.modes() {
        if rng.gen::<f64>() < p_dc {
            out.counts_mut()[mode] += 1;
        }
    }
    out
}

/// Run the full noisy pipeline — dilution, loss, dark counts — keeping
/// only shots whose total equals the input photon number, until
/// `accepted_count` patterns are collected.
///
/// Raw shots are indexed by their own stream, so the accepted set does not
/// depend on how acceptance interleaves with generation. If after
/// [`POST_SELECTION_MIN_RAW`] raw shots the acceptance rate sits below
/// [`POST_SELECTION_FLOOR`], the configuration is reported as infeasible.
pub fn sample_noisy_postselected(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    config: &NoiseConfig,
    accepted_count: usize,
    seed: u64,
) -> Result<SampleSet> {
    let sampler = DilutionSampler::new(matrix, input, config.x_ind())?;
    let n = input.total();
    let mut patterns = Vec::with_capacity(accepted_count);
    let mut raw: u64 = 0;
    while patterns.len() < accepted_count {
        let mut rng = shot_rng(seed, raw);
        raw += 1;
        let generated = sampler.sample(&mut rng)?;
        let lossy = apply_loss(&generated, config.eta_t(), &mut rng);
        let observed = apply_dark_counts(&lossy, config.p_dc(), &mut rng);
        if observed.total() == n {
            patterns.push(observed);
        }
        if raw >= POST_SELECTION_MIN_RAW
            && (patterns.len() as f64) < POST_SELECTION_FLOOR * raw as f64
        {
            return Err(Error::InfeasiblePostSelection {
                accepted: patterns.len() as u64,
                raw,
            });
        }
    }
    let acceptance_rate = if raw == 0 {
        1.0
    } else {
        patterns.len() as f64 / raw as f64
    };
    Ok(SampleSet {
        m: matrix.rows(),
        n,
        patterns,
        seed,
        config: *config,
        acceptance_rate,
    })
}

/// Build the extended optical network that realizes distinguishability
/// noise with virtual modes.
///
/// The result is the m(n+1)-dimensional unitary combining n+1 diagonal
/// copies of `matrix` (the actual interferometer plus one virtual copy per
/// photon) with n beam splitters; the splitter for photon i couples actual
/// mode i to mode i of virtual block i with reflectivity cos ω = √x_ind.
/// Kept as a structural cross-check for the dilution sampler, which never
/// builds this matrix.
pub fn extend_network(matrix: &ComplexMatrix, photons: u32, x_ind: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&x_ind) {
        return Err(Error::ParameterOutOfRange {
            name: "x_ind",
            value: x_ind,
        });
    }
    if !matrix.is_square() {
        return Err(Error::InvalidDimension(alloc::format!(
            "extended network of a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let m = matrix.rows();
    if photons == 0 || photons as usize > m {
        return Err(Error::InvalidDimension(alloc::format!(
            "{photons} photons on {m} modes (each photon occupies its own input mode)"
        )));
    }
    let n = photons as usize;
    let dim = m * (n + 1);
    let mut network = ComplexMatrix::zeros(dim, dim);
    for block in 0..=n {
        for r in 0..m {
            for c in 0..m {
                network.set(block * m + r, block * m + c, matrix.get(r, c));
            }
        }
    }
    let cos_w = x_ind.sqrt();
    let sin_w = (1.0 - x_ind).sqrt();
    // The splitters act on disjoint mode pairs, so left-multiplying them
    // in any order gives the same product.
    for photon in (0..n).rev() {
        let actual = photon;
        let virtual_mode = (photon + 1) * m + photon;
        for c in 0..dim {
            let top = network.get(actual, c);
            let bottom = network.get(virtual_mode, c);
            network.set(actual, c, cos_w * top - sin_w * bottom);
            network.set(virtual_mode, c, sin_w * top + cos_w * bottom);
        }
    }
    Ok(network)
}

/// Single-photon output law through an extended network, with every
/// virtual block folded back onto the actual mode labels: entry j is the
/// probability that a photon injected into `input_mode` ends up on a
/// detector labelled j.
pub fn folded_single_photon_law(
    network: &ComplexMatrix,
    modes: usize,
    input_mode: usize,
) -> Vec<f64> {
    let blocks = network.rows() / modes;
    let mut law = vec![0.0; modes];
    for block in 0..blocks {
        for (j, value) in law.iter_mut().enumerate() {
            *value += network.get(block * modes + j, input_mode).norm_sqr();
        }
    }
    law
}
