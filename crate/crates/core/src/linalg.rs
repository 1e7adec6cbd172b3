//! Complex-matrix primitives: Haar-random unitaries, pattern submatrices,
//! and the permanent kernel.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods cover the std build; no_std goes through the trait.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pattern::OccupationPattern;

/// Largest square dimension accepted by [`permanent`].
///
/// The Ryser kernel walks 2^k subsets; past this point a single call takes
/// minutes and the caller almost certainly wants a different tool.
pub const PERMANENT_MAX_DIM: usize = 24;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row-major entries. Errors when the entry count does not
    /// match the dimensions.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Elementwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Elementwise product with another matrix of identical shape.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidDimension(format!(
                "elementwise product of {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidDimension(format!(
                "product of {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Max-norm of `M·M† − I`; zero for a perfect unitary.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.rows {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    dot += self.get(r, k) * self.get(c, k).conj();
                }
                let target = if r == c { 1.0 } else { 0.0 };
                let dev = (dot - Complex64::new(target, 0.0)).norm();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_deviation() <= tol
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Draw an `m × m` Haar-random unitary, deterministically from `seed`.
///
/// A matrix of standard complex Gaussians is orthonormalized column by
/// column with twice-iterated Gram-Schmidt. Each diagonal of the implied
/// triangular factor is the (real, positive) residual norm, so the phase
/// convention that makes QR-based sampling Haar is satisfied by
/// construction.
pub fn haar_unitary(modes: usize, seed: u64) -> Result<ComplexMatrix> {
    if modes == 0 {
        return Err(Error::InvalidDimension(format!(
            "cannot draw a unitary on {modes} modes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ginibre = ComplexMatrix::zeros(modes, modes);
    for r in 0..modes {
        for c in 0..modes {
            ginibre.set(r, c, complex_gaussian(&mut rng));
        }
    }

    // Column j of `q` is the orthonormalized column j of the Gaussian draw.
    let mut q = ginibre;
    for j in 0..modes {
        let mut v: Vec<Complex64> = (0..modes).map(|r| q.get(r, j)).collect();
        // Two passes keep orthogonality at the 1e-14 level even for
        // ill-conditioned draws.
        for _ in 0..2 {
            for i in 0..j {
                let mut overlap = Complex64::new(0.0, 0.0);
                for (r, value) in v.iter().enumerate() {
                    overlap += q.get(r, i).conj() * value;
                }
                for (r, value) in v.iter_mut().enumerate() {
                    *value -= overlap * q.get(r, i);
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (r, value) in v.iter().enumerate() {
            q.set(r, j, value / norm);
        }
    }
    Ok(q)
}

/// Permanent of a square matrix by Ryser's formula with Gray-code updates.
///
/// Column subsets are visited in the standard binary-reflected Gray order
/// (`g ^ (g >> 1)` for `g = 1..2^k`), updating one cached row sum per step,
/// so the summation order — and therefore the floating-point result on a
/// given platform — is fixed. The empty (0×0) matrix has permanent 1.
pub fn permanent(matrix: &ComplexMatrix) -> Result<Complex64> {
    if !matrix.is_square() {
        return Err(Error::InvalidDimension(format!(
            "permanent of a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let k = matrix.rows();
    if k > PERMANENT_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: k,
            max: PERMANENT_MAX_DIM,
        });
    }
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); k];
    let mut total = Complex64::new(0.0, 0.0);
    let mut popcount = 0u32;
    let mut prev_gray = 0u64;
    for g in 1..(1u64 << k) {
        let gray = g ^ (g >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            popcount += 1;
            for (r, sum) in row_sums.iter_mut().enumerate() {
                *sum += matrix.get(r, col);
            }
        } else {
            popcount -= 1;
            for (r, sum) in row_sums.iter_mut().enumerate() {
                *sum -= matrix.get(r, col);
            }
        }
        prev_gray = gray;

        let mut product = Complex64::new(1.0, 0.0);
        for sum in &row_sums {
            product *= sum;
        }
        if (k as u32 - popcount).is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    Ok(total)
}

/// Build the `n × n` pattern submatrix of `matrix`.
///
/// Column `j` of `matrix` is repeated `input.count(j)` times and row `i`
/// is repeated `output.count(i)` times, both in increasing mode order:
/// columns are keyed by the input pattern, rows by the output pattern.
pub fn submatrix(
    matrix: &ComplexMatrix,
    input: &OccupationPattern,
    output: &OccupationPattern,
) -> Result<ComplexMatrix> {
    if input.modes() != matrix.cols() || output.modes() != matrix.rows() {
        return Err(Error::InvalidDimension(format!(
            "patterns of length {} and {} against a {}x{} matrix",
            input.modes(),
            output.modes(),
            matrix.rows(),
            matrix.cols()
        )));
    }
    let n_in = input.total();
    let n_out = output.total();
    if n_in != n_out {
        return Err(Error::PhotonNumberMismatch {
            input: n_in,
            output: n_out,
        });
    }
    let col_modes = input.photon_modes();
    let row_modes = output.photon_modes();
    let n = col_modes.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &row_mode) in row_modes.iter().enumerate() {
        for (c, &col_mode) in col_modes.iter().enumerate() {
            out.set(r, c, matrix.get(row_mode, col_mode));
        }
    }
    Ok(out)
}

/// Verify that `perm` is a permutation of `0..len`.
pub fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::InvalidPermutation { len });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(Error::InvalidPermutation { len });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Conjugate of `matrix` with columns reordered by `perm`: output column
/// `j` is the conjugate of input column `perm[j]`.
pub fn column_permute_conjugate(matrix: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
    if !matrix.is_square() {
        return Err(Error::InvalidDimension(format!(
            "column permutation of a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let n = matrix.rows();
    check_permutation(perm, n)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for (c, &src) in perm.iter().enumerate() {
            out.set(r, c, matrix.get(r, src).conj());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn haar_one_mode_is_a_phase() {
        let u = haar_unitary(1, 3).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(15, 7).unwrap();
        assert!(u.unitarity_deviation() <= 1e-10);
    }

    #[test]
    fn haar_is_deterministic() {
        let a = haar_unitary(9, 42).unwrap();
        let b = haar_unitary(9, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn haar_rejects_zero_modes() {
        assert!(matches!(
            haar_unitary(0, 1),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn permanent_base_cases() {
        let one = ComplexMatrix::from_entries(1, 1, vec![c(2.5, -1.0)]).unwrap();
        assert_eq!(permanent(&one).unwrap(), c(2.5, -1.0));

        let two = ComplexMatrix::from_entries(
            2,
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
        )
        .unwrap();
        assert!((permanent(&two).unwrap() - c(10.0, 0.0)).norm() <= 1e-12);

        let empty = ComplexMatrix::zeros(0, 0);
        assert_eq!(permanent(&empty).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn permanent_all_ones_counts_permutations() {
        let ones = ComplexMatrix::from_entries(4, 4, vec![c(1.0, 0.0); 16]).unwrap();
        assert!((permanent(&ones).unwrap() - c(24.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn permanent_zero_row_and_identity() {
        let mut m = ComplexMatrix::identity(5);
        assert!((permanent(&m).unwrap() - c(1.0, 0.0)).norm() <= 1e-12);
        for col in 0..5 {
            m.set(2, col, c(0.0, 0.0));
        }
        m.set(2, 2, c(0.0, 0.0));
        assert!(permanent(&m).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn permanent_rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(permanent(&m), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn submatrix_full_selection_is_identity_map() {
        let u = haar_unitary(4, 11).unwrap();
        let all = OccupationPattern::new(vec![1, 1, 1, 1]);
        let sub = submatrix(&u, &all, &all).unwrap();
        assert_eq!(sub, u);
    }

    #[test]
    fn submatrix_repeats_rows_for_collisions() {
        let m =
            ComplexMatrix::from_entries(3, 3, (0..9).map(|k| c(k as f64, 0.0)).collect()).unwrap();
        let input = OccupationPattern::new(vec![1, 1, 0]);
        let output = OccupationPattern::new(vec![2, 0, 0]);
        let sub = submatrix(&m, &input, &output).unwrap();
        assert_eq!(sub.rows(), 2);
        assert_eq!(sub.cols(), 2);
        // Row 0 of m appears twice; columns 0 and 1 selected.
        assert_eq!(sub.get(0, 0), m.get(0, 0));
        assert_eq!(sub.get(0, 1), m.get(0, 1));
        assert_eq!(sub.get(1, 0), m.get(0, 0));
        assert_eq!(sub.get(1, 1), m.get(0, 1));
    }

    #[test]
    fn submatrix_rejects_total_mismatch() {
        let u = haar_unitary(3, 5).unwrap();
        let s = OccupationPattern::new(vec![1, 1, 0]);
        let t = OccupationPattern::new(vec![1, 0, 0]);
        assert!(matches!(
            submatrix(&u, &s, &t),
            Err(Error::PhotonNumberMismatch { .. })
        ));
    }

    #[test]
    fn column_permute_conjugate_identity_is_conjugation() {
        let u = haar_unitary(4, 2).unwrap();
        let id = [0, 1, 2, 3];
        assert_eq!(column_permute_conjugate(&u, &id).unwrap(), u.conjugate());
    }

    #[test]
    fn column_permute_conjugate_is_an_involution() {
        let u = haar_unitary(4, 8).unwrap();
        let perm = [2, 0, 3, 1];
        let mut inverse = [0usize; 4];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let once = column_permute_conjugate(&u, &perm).unwrap();
        let twice = column_permute_conjugate(&once, &inverse).unwrap();
        for r in 0..4 {
            for c_ in 0..4 {
                assert!((twice.get(r, c_) - u.get(r, c_)).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn column_permute_conjugate_rejects_non_permutation() {
        let u = haar_unitary(3, 1).unwrap();
        assert!(matches!(
            column_permute_conjugate(&u, &[0, 0, 2]),
            Err(Error::InvalidPermutation { .. })
        ));
        assert!(matches!(
            column_permute_conjugate(&u, &[0, 1]),
            Err(Error::InvalidPermutation { .. })
        ));
    }
}
