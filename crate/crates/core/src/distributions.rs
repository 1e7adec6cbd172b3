//! Exact brute-force probability oracles for all supported output
//! distributions, pattern enumeration, and total variation distance.
//!
//! Everything here enumerates; cost grows combinatorially with modes and
//! photons. These oracles are the ground truth the samplers are validated
//! against at small scale, and the back end of the exact deviation curves.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods cover the std build; no_std goes through the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::combinatorics::{binomial, factorial, for_each_combination, for_each_permutation};
use crate::error::{Error, Result};
use crate::linalg::{column_permute_conjugate, permanent, submatrix, ComplexMatrix};
use crate::pattern::OccupationPattern;

/// Default ceiling on the number of enumerated patterns.
pub const DEFAULT_PATTERN_CAP: u64 = 1_000_000;

/// Largest photon number accepted by the permutation-sum oracle
/// [`prob_partial_dist`] (cost grows as n!·n·2^n).
pub const PARTIAL_DIST_MAX_PHOTONS: u32 = 9;

/// Negative probabilities no larger than this in magnitude are treated as
/// floating-point cancellation and clamped to zero; anything worse is an
/// internal-consistency error.
pub const PROB_CLAMP: f64 = 1e-12;

/// Imaginary residue tolerated when a probability is assembled from
/// complex arithmetic.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

pub(crate) fn clamp_probability(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -PROB_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeProbability { value })
    }
}

fn real_probability(value: Complex64) -> Result<f64> {
    if value.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::NonRealProbability {
            imaginary: value.im,
        });
    }
    clamp_probability(value.re)
}

/// Pairwise photon distinguishability, parameterized by a single
/// indistinguishability value in [0, 1].
///
/// The implied tensor element is `x_ind` off the diagonal and 1 on it:
/// photons interfere fully with themselves and with strength `x_ind`
/// with every other photon. 1 means ideal interference, 0 classical
/// distinguishable transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishabilityTensor {
    x_ind: f64,
}

impl DistinguishabilityTensor {
    pub fn new(x_ind: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x_ind) {
            return Err(Error::ParameterOutOfRange {
                name: "x_ind",
                value: x_ind,
            });
        }
        Ok(Self { x_ind })
    }

    pub fn x_ind(&self) -> f64 {
        self.x_ind
    }

    /// Tensor element for photon pair (i, j).
    pub fn element(&self, i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            self.x_ind
        }
    }
}

/// A finite distribution over occupation patterns.
///
/// Probabilities are clamped at construction: values in `[-1e-12, 0)` are
/// rounded up to zero, anything more negative is rejected. The pattern
/// list need not be complete; [`total_mass`](Self::total_mass) tells how
/// much probability the listed support carries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    patterns: Vec<OccupationPattern>,
    probs: Vec<f64>,
}

impl ExactDistribution {
    pub fn new(patterns: Vec<OccupationPattern>, probs: Vec<f64>) -> Result<Self> {
        if patterns.len() != probs.len() {
            return Err(Error::InvalidDimension(alloc::format!(
                "{} patterns with {} probabilities",
                patterns.len(),
                probs.len()
            )));
        }
        let probs = probs
            .into_iter()
            .map(clamp_probability)
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { patterns, probs })
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[OccupationPattern] {
        &self.patterns
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationPattern, f64)> {
        self.patterns.iter().zip(self.probs.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability of one pattern, zero when absent from the support.
    pub fn prob_of(&self, pattern: &OccupationPattern) -> f64 {
        self.patterns
            .iter()
            .position(|p| p == pattern)
            .map_or(0.0, |i| self.probs[i])
    }

    pub fn mode_count(&self) -> Option<usize> {
        self.patterns.first().map(OccupationPattern::modes)
    }
}

/// Number of occupation patterns over `m` modes with total `n`
/// (saturating).
pub fn pattern_count(modes: usize, photons: u32) -> u64 {
    if modes == 0 {
        return u64::from(photons == 0);
    }
    binomial(modes as u64 + u64::from(photons) - 1, u64::from(photons))
}

/// All patterns over `modes` modes totalling `photons`, under the default
/// cap. See [`enumerate_patterns_capped`] for the order contract.
pub fn enumerate_patterns(modes: usize, photons: u32) -> Result<Vec<OccupationPattern>> {
    enumerate_patterns_capped(modes, photons, DEFAULT_PATTERN_CAP)
}

/// All C(m+n−1, n) patterns over `modes` modes totalling `photons`.
///
/// Patterns are produced in lexicographically decreasing count order,
/// starting from everything in mode 0: for two modes and two photons the
/// sequence is (2,0), (1,1), (0,2). Errors when the count exceeds `cap`.
pub fn enumerate_patterns_capped(
    modes: usize,
    photons: u32,
    cap: u64,
) -> Result<Vec<OccupationPattern>> {
    if modes == 0 {
        return Err(Error::InvalidDimension(alloc::format!(
            "cannot enumerate patterns over {modes} modes"
        )));
    }
    let count = pattern_count(modes, photons);
    if count > cap {
        return Err(Error::PatternCountTooLarge { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut counts = alloc::vec![0u32; modes];
    counts[0] = photons;
    loop {
        out.push(OccupationPattern::new(counts.clone()));
        // Move one photon right past the rightmost non-final occupied mode,
        // collecting everything beyond it back onto that position.
        let Some(pivot) = counts[..modes - 1].iter().rposition(|&c| c > 0) else {
            break;
        };
        let tail: u32 = counts[pivot + 1..].iter().sum();
        counts[pivot] -= 1;
        for c in counts[pivot + 1..].iter_mut() {
            *c = 0;
        }
        counts[pivot + 1] = tail + 1;
    }
    Ok(out)
}

fn pattern_normalization(input: &OccupationPattern, output: &OccupationPattern) -> f64 {
    let mut norm = 1.0;
    for &s in input.counts() {
        norm *= factorial(s);
    }
    for &t in output.counts() {
        norm *= factorial(t);
    }
    norm
}

/// Ideal output probability: |Perm(M^{S,T})|² over the input/output
/// factorial normalization.
pub fn prob_ideal(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
) -> Result<f64> {
    let sub = submatrix(matrix, input, output)?;
    let perm = permanent(&sub)?;
    clamp_probability(perm.norm_sqr() / pattern_normalization(input, output))
}

/// Output probability for partially distinguishable photons.
///
/// Literal permutation sum: for each permutation σ of the photons, the
/// permanent of `M^{S,T} ⊙ conj(M^{S,T})` with the conjugated columns
/// reordered by σ, weighted by the product of distinguishability tensor
/// elements along σ. Inputs must be collision-free and the photon number
/// is capped by [`PARTIAL_DIST_MAX_PHOTONS`] (the sum has n! terms).
pub fn prob_partial_dist(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
    x_ind: f64,
) -> Result<f64> {
    let tensor = DistinguishabilityTensor::new(x_ind)?;
    if !input.is_collision_free() {
        return Err(Error::CollisionInput);
    }
    let n = input.total();
    if n > PARTIAL_DIST_MAX_PHOTONS {
        return Err(Error::PhotonCountTooLarge {
            n,
            max: PARTIAL_DIST_MAX_PHOTONS,
        });
    }
    let sub = submatrix(matrix, input, output)?;
    let mut total = Complex64::new(0.0, 0.0);
    for_each_permutation(n as usize, |sigma| {
        let mut weight = 1.0;
        for (j, &sj) in sigma.iter().enumerate() {
            weight *= tensor.element(sj, j);
        }
        if weight == 0.0 {
            return Ok(());
        }
        let rearranged = column_permute_conjugate(&sub, sigma)?;
        let product = sub.hadamard(&rearranged)?;
        total += permanent(&product)? * weight;
        Ok(())
    })?;
    real_probability(total / pattern_normalization(input, output))
}

/// Visit every thinned pattern `t ≤ from` together with its binomial
/// thinning weight at transmission `eta`.
fn for_each_thinning<F>(from: &OccupationPattern, eta: f64, mut f: F) -> Result<()>
where
    F: FnMut(&[u32], f64) -> Result<()>,
{
    let m = from.modes();
    let mut current = alloc::vec![0u32; m];
    fn recurse<F>(
        from: &OccupationPattern,
        eta: f64,
        mode: usize,
        weight: f64,
        current: &mut Vec<u32>,
        f: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[u32], f64) -> Result<()>,
    {
        if mode == from.modes() {
            return f(current, weight);
        }
        let available = from.count(mode);
        for kept in 0..=available {
            let w = binomial(u64::from(available), u64::from(kept)) as f64
                * eta.powi(kept as i32)
                * (1.0 - eta).powi((available - kept) as i32);
            current[mode] = kept;
            recurse(from, eta, mode + 1, weight * w, current, f)?;
        }
        current[mode] = 0;
        Ok(())
    }
    recurse(from, eta, 0, 1.0, &mut current, &mut f)
}

/// Output probability under balanced loss: every photon independently
/// survives with probability `eta`, so each ideal n-photon pattern is
/// binomially thinned mode by mode.
pub fn prob_lossy(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
    eta: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::ParameterOutOfRange {
            name: "eta_t",
            value: eta,
        });
    }
    let n = input.total();
    if output.total() > n {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for ideal_pattern in enumerate_patterns(output.modes(), n)? {
        if ideal_pattern
            .counts()
            .iter()
            .zip(output.counts())
            .any(|(&full, &kept)| full < kept)
        {
            continue;
        }
        let mut weight = 1.0;
        for (&full, &kept) in ideal_pattern.counts().iter().zip(output.counts()) {
            weight *= binomial(u64::from(full), u64::from(kept)) as f64
                * eta.powi(kept as i32)
                * (1.0 - eta).powi((full - kept) as i32);
        }
        if weight == 0.0 {
            continue;
        }
        total += prob_ideal(matrix, input, &ideal_pattern)? * weight;
    }
    clamp_probability(total)
}

/// Output probability with dark counts: each of the m detectors fires
/// spuriously (at most once per shot) with probability `p_dc`, adding one
/// count to its mode on top of the ideal pattern.
pub fn prob_dark(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
    p_dc: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&p_dc) {
        return Err(Error::ParameterOutOfRange {
            name: "p_dc",
            value: p_dc,
        });
    }
    let m = output.modes();
    let n = input.total();
    let observed = output.total();
    if observed < n {
        return Ok(0.0);
    }
    let extra = (observed - n) as usize;
    if extra > m {
        return Ok(0.0);
    }
    // Every compatible ideal pattern differs from `output` by one count on
    // a set of `extra` occupied modes.
    let candidates: Vec<usize> = output.occupied_modes();
    if candidates.len() < extra {
        return Ok(0.0);
    }
    let prefactor = p_dc.powi(extra as i32) * (1.0 - p_dc).powi((m - extra) as i32);
    let mut total = 0.0;
    for_each_combination(candidates.len(), extra, |subset| {
        let mut counts = output.counts().to_vec();
        for &pick in subset {
            counts[candidates[pick]] -= 1;
        }
        total += prob_ideal(matrix, input, &OccupationPattern::new(counts))?;
        Ok(())
    })?;
    clamp_probability(prefactor * total)
}

/// Exact ideal distribution over all n-photon patterns, in enumeration
/// order.
pub fn ideal_distribution(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
) -> Result<ExactDistribution> {
    let patterns = enumerate_patterns(matrix.rows(), input.total())?;
    let probs = patterns
        .iter()
        .map(|t| prob_ideal(matrix, input, t))
        .collect::<Result<Vec<f64>>>()?;
    ExactDistribution::new(patterns, probs)
}

/// Exact partially-distinguishable distribution over all n-photon
/// patterns, in enumeration order.
pub fn partial_dist_distribution(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    x_ind: f64,
) -> Result<ExactDistribution> {
    let patterns = enumerate_patterns(matrix.rows(), input.total())?;
    let probs = patterns
        .iter()
        .map(|t| prob_partial_dist(matrix, input, t, x_ind))
        .collect::<Result<Vec<f64>>>()?;
    ExactDistribution::new(patterns, probs)
}

/// Full-support loss distribution (totals 0..=n), assembled by pushing
/// ideal mass forward through the thinning channel instead of calling the
/// per-pattern oracle once per output pattern.
pub fn lossy_distribution(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    eta: f64,
) -> Result<ExactDistribution> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::ParameterOutOfRange {
            name: "eta_t",
            value: eta,
        });
    }
    let ideal = ideal_distribution(matrix, input)?;
    let mut mass: BTreeMap<OccupationPattern, f64> = BTreeMap::new();
    for (pattern, prob) in ideal.iter() {
        if prob == 0.0 {
            continue;
        }
        for_each_thinning(pattern, eta, |kept, weight| {
            if weight != 0.0 {
                *mass
                    .entry(OccupationPattern::new(kept.to_vec()))
                    .or_insert(0.0) += prob * weight;
            }
            Ok(())
        })?;
    }
    let m = matrix.rows();
    let mut patterns = Vec::new();
    for k in 0..=input.total() {
        patterns.extend(enumerate_patterns(m, k)?);
    }
    let probs = patterns
        .iter()
        .map(|p| mass.get(p).copied().unwrap_or(0.0))
        .collect();
    ExactDistribution::new(patterns, probs)
}

/// Full-support dark-count distribution (totals n..=n+m); same forward
/// construction as [`lossy_distribution`].
pub fn dark_distribution(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    p_dc: f64,
) -> Result<ExactDistribution> {
    if !(0.0..1.0).contains(&p_dc) {
        return Err(Error::ParameterOutOfRange {
            name: "p_dc",
            value: p_dc,
        });
    }
    let m = matrix.rows();
    let n = input.total();
    let ideal = ideal_distribution(matrix, input)?;
    let mut mass: BTreeMap<OccupationPattern, f64> = BTreeMap::new();
    for (pattern, prob) in ideal.iter() {
        if prob == 0.0 {
            continue;
        }
        for extra in 0..=m {
            let weight = p_dc.powi(extra as i32) * (1.0 - p_dc).powi((m - extra) as i32);
            if weight == 0.0 {
                continue;
            }
            for_each_combination(m, extra, |fired| {
                let mut counts = pattern.counts().to_vec();
                for &mode in fired {
                    counts[mode] += 1;
                }
                *mass.entry(OccupationPattern::new(counts)).or_insert(0.0) += prob * weight;
                Ok(())
            })?;
        }
    }
    let mut patterns = Vec::new();
    for k in n..=n + m as u32 {
        patterns.extend(enumerate_patterns(m, k)?);
    }
    let probs = patterns
        .iter()
        .map(|p| mass.get(p).copied().unwrap_or(0.0))
        .collect();
    ExactDistribution::new(patterns, probs)
}

/// Exact distribution of the loss + dark-count pipeline post-selected on
/// n-photon outputs, in enumeration order over n-photon patterns.
///
/// Ideal mass is thinned by loss, completed back to n photons by dark
/// counts (one per mode at most), and renormalized by the probability of
/// the n-photon event. A zero normalization — possible only when every
/// photon is lost and dark counts are off — is a degenerate configuration.
pub fn noisy_postselected_distribution(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    eta: f64,
    p_dc: f64,
) -> Result<ExactDistribution> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::ParameterOutOfRange {
            name: "eta_t",
            value: eta,
        });
    }
    if !(0.0..1.0).contains(&p_dc) {
        return Err(Error::ParameterOutOfRange {
            name: "p_dc",
            value: p_dc,
        });
    }
    let m = matrix.rows();
    let n = input.total();
    let ideal = ideal_distribution(matrix, input)?;

    // Loss stage: mass over thinned patterns with totals 0..=n.
    let mut after_loss: BTreeMap<OccupationPattern, f64> = BTreeMap::new();
    for (pattern, prob) in ideal.iter() {
        if prob == 0.0 {
            continue;
        }
        for_each_thinning(pattern, eta, |kept, weight| {
            if weight != 0.0 {
                *after_loss
                    .entry(OccupationPattern::new(kept.to_vec()))
                    .or_insert(0.0) += prob * weight;
            }
            Ok(())
        })?;
    }

    // Dark stage, keeping only completions that land exactly on n photons.
    let mut accepted: BTreeMap<OccupationPattern, f64> = BTreeMap::new();
    for (pattern, mass) in &after_loss {
        let missing = (n - pattern.total()) as usize;
        if missing > m {
            continue;
        }
        let weight = p_dc.powi(missing as i32) * (1.0 - p_dc).powi((m - missing) as i32);
        if weight == 0.0 || *mass == 0.0 {
            continue;
        }
        for_each_combination(m, missing, |fired| {
            let mut counts = pattern.counts().to_vec();
            for &mode in fired {
                counts[mode] += 1;
            }
            *accepted
                .entry(OccupationPattern::new(counts))
                .or_insert(0.0) += mass * weight;
            Ok(())
        })?;
    }

    let normalization: f64 = accepted.values().sum();
    if normalization <= 0.0 {
        return Err(Error::DegenerateConfig);
    }
    let patterns = enumerate_patterns(m, n)?;
    let probs = patterns
        .iter()
        .map(|p| accepted.get(p).copied().unwrap_or(0.0) / normalization)
        .collect();
    ExactDistribution::new(patterns, probs)
}

/// Post-selected probability of a single n-photon pattern under the
/// loss + dark-count pipeline. Builds the full post-selected distribution
/// internally; callers needing many patterns should use
/// [`noisy_postselected_distribution`] directly.
pub fn prob_noisy_postselected(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
    eta: f64,
    p_dc: f64,
) -> Result<f64> {
    let n = input.total();
    if output.total() != n {
        return Err(Error::PhotonNumberMismatch {
            input: n,
            output: output.total(),
        });
    }
    let dist = noisy_postselected_distribution(matrix, input, eta, p_dc)?;
    Ok(dist.prob_of(output))
}

/// Total variation distance: half the L1 distance after aligning the two
/// supports (missing patterns carry zero mass).
pub fn tvd(p: &ExactDistribution, q: &ExactDistribution) -> f64 {
    let mut joined: BTreeMap<&OccupationPattern, (f64, f64)> = BTreeMap::new();
    for (pattern, prob) in p.iter() {
        joined.entry(pattern).or_insert((0.0, 0.0)).0 += prob;
    }
    for (pattern, prob) in q.iter() {
        joined.entry(pattern).or_insert((0.0, 0.0)).1 += prob;
    }
    0.5 * joined.values().map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// The same distribution with patterns reordered by descending
/// probability; ties keep the pattern enumeration order.
pub fn sorted_background(dist: &ExactDistribution) -> ExactDistribution {
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| {
        dist.probs()[b]
            .partial_cmp(&dist.probs()[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| dist.patterns()[b].cmp(&dist.patterns()[a]))
    });
    let patterns = order.iter().map(|&i| dist.patterns()[i].clone()).collect();
    let probs = order.iter().map(|&i| dist.probs()[i]).collect();
    ExactDistribution { patterns, probs }
}
