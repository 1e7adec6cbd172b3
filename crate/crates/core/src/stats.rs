//! The statistical-benchmark layer: photon-number correlators of order t
//! assembled from set-partition cumulants, correlation coefficients and
//! the deviation ratio γ against a reference, and the cloud statistics
//! (CV/CS over single-photon input combinations).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

// Inherent float methods cover the std build; no_std goes through the trait.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, factorial, for_each_combination};
use crate::distributions::ExactDistribution;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pattern::OccupationPattern;
use crate::rng::derive_seed;
use crate::sampler::{sample_noisy_postselected, NoiseConfig, SampleSet};

/// Partition enumeration cap; Bell(8) = 4140 partitions.
pub const MAX_CORRELATOR_ORDER: usize = 8;

/// Default ceiling on the number of mode subsets per correlator sweep.
pub const DEFAULT_SUBSET_CAP: u64 = 1_000_000;

/// Denominator floor for the deviation ratio γ.
pub const GAMMA_DENOMINATOR_FLOOR: f64 = 1e-9;

/// The CV of a value list whose mean is below this fraction of the largest
/// magnitude is reported as degenerate rather than blown up.
pub const CV_MEAN_FLOOR: f64 = 1e-12;

/// A partition of {0,…,t−1} into disjoint non-empty blocks; blocks are
/// ordered by their smallest element, elements ascending within a block.
pub type SetPartition = Vec<Vec<usize>>;

/// All Bell(t) partitions of {0,…,t−1}, in lexicographic order of their
/// restricted-growth strings (the all-in-one-block partition first, the
/// all-singletons partition last).
pub fn set_partitions(order: usize) -> Result<Vec<SetPartition>> {
    if order == 0 || order > MAX_CORRELATOR_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_CORRELATOR_ORDER,
        });
    }
    let mut out = Vec::new();
    let mut assignment = alloc::vec![0usize; order];
    fn recurse(
        position: usize,
        block_count: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<SetPartition>,
    ) {
        if position == assignment.len() {
            let mut blocks: SetPartition = alloc::vec![Vec::new(); block_count];
            for (element, &block) in assignment.iter().enumerate() {
                blocks[block].push(element);
            }
            out.push(blocks);
            return;
        }
        for block in 0..=block_count {
            assignment[position] = block;
            recurse(position + 1, block_count.max(block + 1), assignment, out);
        }
    }
    assignment[0] = 0;
    recurse(1, 1, &mut assignment, &mut out);
    Ok(out)
}

/// Anything that can produce raw photon-number moments: a sampled set
/// (empirical means) or an exact distribution (exact expectations).
pub trait MomentSource {
    /// Mode count of the underlying patterns.
    fn mode_count(&self) -> Result<usize>;

    /// Expectation of the product of photon counts over the given modes
    /// (0-based, non-empty).
    fn raw_moment(&self, modes: &[usize]) -> Result<f64>;

    /// Number of samples behind the estimate; `None` for exact sources.
    fn sample_count(&self) -> Option<usize>;
}

fn check_moment_modes(modes: &[usize], mode_count: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::InvalidModes("empty mode subset".into()));
    }
    if let Some(&bad) = modes.iter().find(|&&m| m >= mode_count) {
        return Err(Error::InvalidModes(format!(
            "mode {bad} out of range for {mode_count} modes"
        )));
    }
    Ok(())
}

impl MomentSource for SampleSet {
    fn mode_count(&self) -> Result<usize> {
        if self.patterns.is_empty() {
            return Err(Error::EmptySource);
        }
        Ok(self.m)
    }

    fn raw_moment(&self, modes: &[usize]) -> Result<f64> {
        let mode_count = self.mode_count()?;
        check_moment_modes(modes, mode_count)?;
        let mut sum = 0.0;
        for pattern in &self.patterns {
            let mut product = 1.0;
            for &mode in modes {
                product *= f64::from(pattern.count(mode));
            }
            sum += product;
        }
        Ok(sum / self.patterns.len() as f64)
    }

    fn sample_count(&self) -> Option<usize> {
        Some(self.patterns.len())
    }
}

impl MomentSource for ExactDistribution {
    fn mode_count(&self) -> Result<usize> {
        self.mode_count().ok_or(Error::EmptySource)
    }

    fn raw_moment(&self, modes: &[usize]) -> Result<f64> {
        let mode_count = MomentSource::mode_count(self)?;
        check_moment_modes(modes, mode_count)?;
        let mut sum = 0.0;
        for (pattern, prob) in self.iter() {
            let mut product = prob;
            for &mode in modes {
                product *= f64::from(pattern.count(mode));
            }
            sum += product;
        }
        Ok(sum)
    }

    fn sample_count(&self) -> Option<usize> {
        None
    }
}

fn cached_moment<S: MomentSource + ?Sized>(
    source: &S,
    modes: &[usize],
    cache: &mut BTreeMap<Vec<usize>, f64>,
) -> Result<f64> {
    if let Some(&value) = cache.get(modes) {
        return Ok(value);
    }
    let value = source.raw_moment(modes)?;
    cache.insert(modes.to_vec(), value);
    Ok(value)
}

fn correlator_with_cache<S: MomentSource + ?Sized>(
    source: &S,
    modes: &[usize],
    partitions: &[SetPartition],
    cache: &mut BTreeMap<Vec<usize>, f64>,
) -> Result<f64> {
    let mut kappa = 0.0;
    for partition in partitions {
        let blocks = partition.len();
        let mut term = factorial(blocks as u32 - 1);
        if blocks % 2 == 0 {
            term = -term;
        }
        for block in partition {
            let block_modes: Vec<usize> = block.iter().map(|&i| modes[i]).collect();
            term *= cached_moment(source, &block_modes, cache)?;
        }
        kappa += term;
    }
    Ok(kappa)
}

fn check_correlator_modes(modes: &[usize], mode_count: usize) -> Result<()> {
    check_moment_modes(modes, mode_count)?;
    if !modes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidModes(
            "correlator modes must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Joint cumulant of the photon numbers in the given modes: the signed
/// set-partition sum of raw-moment products, with weight (|π|−1)!(−1)^{|π|−1}
/// per partition π.
pub fn correlator<S: MomentSource + ?Sized>(source: &S, modes: &[usize]) -> Result<f64> {
    check_correlator_modes(modes, source.mode_count()?)?;
    let partitions = set_partitions(modes.len())?;
    let mut cache = BTreeMap::new();
    correlator_with_cache(source, modes, &partitions, &mut cache)
}

/// A complete (or explicitly partial) family of order-t correlators keyed
/// by strictly increasing mode subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSet {
    order: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl CorrelatorSet {
    pub fn new(order: usize, entries: BTreeMap<Vec<usize>, f64>) -> Result<Self> {
        for key in entries.keys() {
            if key.len() != order || !key.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidModes(format!(
                    "key {key:?} is not a strictly increasing {order}-subset"
                )));
            }
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, f64> {
        &self.entries
    }

    pub fn get(&self, modes: &[usize]) -> Option<f64> {
        self.entries.get(modes).copied()
    }

    /// Values in deterministic (ascending key) order.
    pub fn values(&self) -> Vec<f64> {
        self.entries.values().copied().collect()
    }

    pub fn sum(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn same_keys(&self, other: &Self) -> bool {
        self.order == other.order
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .keys()
                .zip(other.entries.keys())
                .all(|(a, b)| a == b)
    }
}

/// Every order-t correlator of the source, keyed by mode subset, under the
/// default subset cap.
pub fn all_correlators<S: MomentSource + ?Sized>(
    source: &S,
    order: usize,
) -> Result<CorrelatorSet> {
    all_correlators_capped(source, order, DEFAULT_SUBSET_CAP)
}

/// Every order-t correlator of the source; errors with the subset count
/// when C(m, t) exceeds `cap`.
pub fn all_correlators_capped<S: MomentSource + ?Sized>(
    source: &S,
    order: usize,
    cap: u64,
) -> Result<CorrelatorSet> {
    let m = source.mode_count()?;
    if order == 0 || order > MAX_CORRELATOR_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_CORRELATOR_ORDER,
        });
    }
    let count = binomial(m as u64, order as u64);
    if count > cap {
        return Err(Error::SubsetCountExceedsCap { count, cap });
    }
    let partitions = set_partitions(order)?;
    let mut cache = BTreeMap::new();
    let mut entries = BTreeMap::new();
    for_each_combination(m, order, |subset| {
        let kappa = correlator_with_cache(source, subset, &partitions, &mut cache)?;
        entries.insert(subset.to_vec(), kappa);
        Ok(())
    })?;
    Ok(CorrelatorSet { order, entries })
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "need two equal-length lists of at least 2 values, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite value".into()));
    }
    Ok(())
}

/// Pearson product-moment correlation. Constant input lists are rejected.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x) * (a - mean_x);
        var_y += (b - mean_y) * (b - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::DegenerateInput("constant value list".into()));
    }
    Ok((cov / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0))
}

/// Ranks with ties averaged: (1, 2, 2, 3) ranks to (1, 2.5, 2.5, 4).
pub(crate) fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j share the mean of their 1-based ranks.
        let rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson on average-ranked values.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Deviation ratio γ: the plain (signed) sum of test correlators over the
/// plain sum of comparison correlators.
///
/// Both sets must cover the same mode subsets. A comparison sum closer to
/// zero than [`GAMMA_DENOMINATOR_FLOOR`] is reported as an error carrying
/// both sums rather than returning an arbitrarily large ratio.
pub fn gamma(test: &CorrelatorSet, comp: &CorrelatorSet) -> Result<f64> {
    if !test.same_keys(comp) {
        return Err(Error::CorrelatorKeyMismatch);
    }
    let test_sum = test.sum();
    let comp_sum = comp.sum();
    if comp_sum.abs() < GAMMA_DENOMINATOR_FLOOR {
        return Err(Error::GammaDenominatorNearZero { test_sum, comp_sum });
    }
    Ok(test_sum / comp_sum)
}

/// Coefficient of variation and coefficient of skewness of a value list;
/// either is `None` when undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvCs {
    /// s/μ with the (k−1)-normalized sample standard deviation; `None`
    /// when the mean is negligible against the value scale.
    pub cv: Option<f64>,
    /// Standardized third moment (1/k)Σ((v−μ)/s)³, uncorrected; `None`
    /// when s = 0.
    pub cs: Option<f64>,
}

impl CvCs {
    pub fn is_degenerate(&self) -> bool {
        self.cv.is_none() || self.cs.is_none()
    }
}

/// Reduce a list of at least three values to its (CV, CS) pair.
pub fn cv_cs(values: &[f64]) -> Result<CvCs> {
    if values.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 values for CV/CS, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite value".into()));
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
    let std = var.sqrt();
    if std == 0.0 {
        return Ok(CvCs { cv: None, cs: None });
    }
    let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cv = if mean.abs() < CV_MEAN_FLOOR * max_abs {
        None
    } else {
        Some(std / mean)
    };
    let cs = values
        .iter()
        .map(|v| ((v - mean) / std).powi(3))
        .sum::<f64>()
        / k;
    Ok(CvCs { cv, cs: Some(cs) })
}

/// One point of a noise-evaluation cloud: the (CV, CS) of all order-t
/// correlators obtained from one single-photon input combination.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudPoint {
    /// Input modes holding the single photons (0-based, increasing).
    pub input_modes: Vec<usize>,
    pub cv: Option<f64>,
    pub cs: Option<f64>,
}

/// Cloud sweep parameters.
#[derive(Debug, Clone)]
pub struct CloudParams {
    /// Photons per input combination.
    pub photons: u32,
    /// Correlator order the cloud is built from.
    pub order: usize,
    pub noise: NoiseConfig,
    pub samples_per_combo: usize,
    /// `None` (or a budget at least C(m, n)) sweeps every combination;
    /// otherwise a seed-deterministic uniform subset of this size.
    pub combo_budget: Option<usize>,
    pub seed: u64,
}

fn select_combos(
    modes: usize,
    photons: usize,
    budget: Option<usize>,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let total = binomial(modes as u64, photons as u64);
    let take_all = match budget {
        None => true,
        Some(b) => b as u64 >= total,
    };
    if take_all {
        let mut combos = Vec::with_capacity(total as usize);
        for_each_combination(modes, photons, |combo| {
            combos.push(combo.to_vec());
            Ok(())
        })?;
        return Ok(combos);
    }
    let budget = budget.expect("budget checked above");
    // Rejection-sample distinct combinations; the sorted-set order makes
    // the output independent of the draw order.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0x636f6d62]));
    let mut chosen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut pool: Vec<usize> = (0..modes).collect();
    while chosen.len() < budget {
        for i in 0..photons {
            let j = rng.gen_range(i..modes);
            pool.swap(i, j);
        }
        let mut combo = pool[..photons].to_vec();
        combo.sort_unstable();
        chosen.insert(combo);
    }
    Ok(chosen.into_iter().collect())
}

/// Sweep single-photon input combinations, sampling each under the noise
/// configuration and reducing its complete order-t correlator family to
/// one (CV, CS) point.
pub fn cloud(matrix: &ComplexMatrix, params: &CloudParams) -> Result<Vec<CloudPoint>> {
    let m = matrix.rows();
    let n = params.photons as usize;
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "{n} single-photon inputs on {m} modes"
        )));
    }
    let combos = select_combos(m, n, params.combo_budget, params.seed)?;
    let mut points = Vec::with_capacity(combos.len());
    for combo in combos {
        // Seed keyed by the combination content, so a combo's samples do
        // not depend on which other combos were selected.
        let mut tags: Vec<u64> = alloc::vec![0x73686f74];
        tags.extend(combo.iter().map(|&c| c as u64));
        let combo_seed = derive_seed(params.seed, &tags);
        let input = OccupationPattern::single_photons(m, &combo);
        let samples = sample_noisy_postselected(
            matrix,
            &input,
            &params.noise,
            params.samples_per_combo,
            combo_seed,
        )?;
        let correlators = all_correlators(&samples, params.order)?;
        let stats = cv_cs(&correlators.values())?;
        points.push(CloudPoint {
            input_modes: combo,
            cv: stats.cv,
            cs: stats.cs,
        });
    }
    Ok(points)
}

/// Per-order comparison of a test sample set against a reference source.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderEvaluation {
    pub order: usize,
    pub pearson: f64,
    pub spearman: f64,
    pub gamma: f64,
    /// CV/CS of the test-side correlator values.
    pub cv: Option<f64>,
    pub cs: Option<f64>,
}

/// Bundled evaluation across correlator orders. The top-level scalars are
/// plain means of the per-order values; `per_order` carries the detail.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub pearson: f64,
    pub spearman: f64,
    pub gamma: f64,
    pub mean_cv: Option<f64>,
    pub mean_cs: Option<f64>,
    pub per_order: Vec<OrderEvaluation>,
    pub orders: Vec<usize>,
    pub test_samples: Option<usize>,
    pub reference_samples: Option<usize>,
}

/// Compare test samples against a reference source order by order:
/// complete correlator families on both sides, then Pearson, Spearman and
/// γ on the aligned value vectors.
pub fn evaluate<R: MomentSource + ?Sized>(
    test: &SampleSet,
    reference: &R,
    orders: &[usize],
) -> Result<EvaluationReport> {
    if orders.is_empty() {
        return Err(Error::InvalidModes("no correlator orders requested".into()));
    }
    let test_modes = MomentSource::mode_count(test)?;
    let reference_modes = reference.mode_count()?;
    if test_modes != reference_modes {
        return Err(Error::InvalidModes(format!(
            "test has {test_modes} modes, reference {reference_modes}"
        )));
    }
    let mut per_order = Vec::with_capacity(orders.len());
    for &order in orders {
        let test_set = all_correlators(test, order)?;
        let reference_set = all_correlators(reference, order)?;
        let test_values = test_set.values();
        let reference_values = reference_set.values();
        let stats = cv_cs(&test_values)?;
        per_order.push(OrderEvaluation {
            order,
            pearson: pearson(&test_values, &reference_values)?,
            spearman: spearman(&test_values, &reference_values)?,
            gamma: gamma(&test_set, &reference_set)?,
            cv: stats.cv,
            cs: stats.cs,
        });
    }
    let count = per_order.len() as f64;
    let mean_of = |extract: fn(&OrderEvaluation) -> Option<f64>| {
        let values: Vec<f64> = per_order.iter().filter_map(extract).collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    };
    Ok(EvaluationReport {
        pearson: per_order.iter().map(|o| o.pearson).sum::<f64>() / count,
        spearman: per_order.iter().map(|o| o.spearman).sum::<f64>() / count,
        gamma: per_order.iter().map(|o| o.gamma).sum::<f64>() / count,
        mean_cv: mean_of(|o| o.cv),
        mean_cs: mean_of(|o| o.cs),
        per_order,
        orders: orders.to_vec(),
        test_samples: MomentSource::sample_count(test),
        reference_samples: reference.sample_count(),
    })
}
