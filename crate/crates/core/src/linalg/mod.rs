//! Dense complex linear-algebra primitives shared by every other module.

mod joint;
mod radius;
mod schur;
mod sqrt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use joint::{joint_spectrum, joint_spectrum_with_rng};
pub use radius::numerical_radius;
pub use schur::Schur;
pub use sqrt::{primary_sqrt, psd_sqrt, EigenCluster, PrimarySqrtPlan, Sign};

/// Dense complex matrix, row/column counts carried by the storage.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from row-major `(re, im)` pairs.
pub fn cmat(rows: usize, cols: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows * cols");
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&(re, im)| c64(re, im)))
}

/// Builds a matrix from row-major real entries.
pub fn rmat(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows * cols");
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&re| c64(re, 0.0)))
}

pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn scale(a: &ComplexMatrix, factor: f64) -> ComplexMatrix {
    a * c64(factor, 0.0)
}

/// Numerical tolerances threaded through every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalue/singular-value cutoff for rank decisions.
    pub rank_cutoff: f64,
    /// Tolerance for asserted identities.
    pub assert_tol: f64,
    /// Relative tolerance for commutation checks.
    pub comm_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank_cutoff: 1e-10, assert_tol: 1e-8, comm_tol: 1e-10 }
    }
}

impl Tolerances {
    pub fn new(rank_cutoff: f64, assert_tol: f64, comm_tol: f64) -> Result<Self> {
        let all_positive = [rank_cutoff, assert_tol, comm_tol].iter().all(|t| t.is_finite() && *t > 0.0);
        if !all_positive {
            return Err(Error::InvalidArgument("tolerances must be finite and strictly positive".into()));
        }
        if rank_cutoff > assert_tol {
            return Err(Error::InvalidArgument("rank_cutoff must not exceed assert_tol".into()));
        }
        Ok(Self { rank_cutoff, assert_tol, comm_tol })
    }

    /// Same tolerances with a different `assert_tol`; `rank_cutoff` is
    /// lowered if needed to keep the ordering invariant.
    pub fn with_assert_tol(self, assert_tol: f64) -> Result<Self> {
        Self::new(self.rank_cutoff.min(assert_tol), assert_tol, self.comm_tol)
    }
}

pub fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(a.nrows())
}

pub fn ensure_finite(a: &ComplexMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    ensure_square(a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let schur = Schur::new(a)?;
    Ok(schur.eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_square(a)?;
    Ok(Schur::new(a)?.eigenvalues())
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// `‖AB − BA‖ ≤ comm_tol · (1 + ‖A‖‖B‖)`, returning the commutator norm on failure.
pub fn check_commute(a: &ComplexMatrix, b: &ComplexMatrix, comm_tol: f64) -> Result<f64> {
    let c = op_norm(&commutator(a, b));
    if c <= comm_tol * (1.0 + op_norm(a) * op_norm(b)) {
        Ok(c)
    } else {
        Err(Error::NotCommuting { commutator: c })
    }
}

/// Scale-invariant Hermitian defect `‖A − A*‖ / (1 + ‖A‖)`.
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    op_norm(&(a - a.adjoint())) / (1.0 + op_norm(a))
}

/// Hermitian eigendecomposition: eigenvalues ascending with matching
/// orthonormal eigenvector columns. The input is symmetrized first.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    let h = (a + a.adjoint()) * c64(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_max_eigenvalue(a: &ComplexMatrix) -> f64 {
    match a.nrows() {
        0 => f64::NEG_INFINITY,
        1 => a[(0, 0)].re,
        2 => {
            // Closed form keeps the numerical-radius scan cheap for 2x2 inputs.
            let p = a[(0, 0)].re;
            let q = a[(1, 1)].re;
            let off = (a[(0, 1)].norm() + a[(1, 0)].norm()) * 0.5;
            0.5 * (p + q) + (0.25 * (p - q) * (p - q) + off * off).sqrt()
        }
        _ => hermitian_eigen(a).0.last().copied().unwrap_or(f64::NEG_INFINITY),
    }
}

pub fn hermitian_min_eigenvalue(a: &ComplexMatrix) -> f64 {
    match a.nrows() {
        0 => f64::INFINITY,
        1 => a[(0, 0)].re,
        2 => {
            let p = a[(0, 0)].re;
            let q = a[(1, 1)].re;
            let off = (a[(0, 1)].norm() + a[(1, 0)].norm()) * 0.5;
            0.5 * (p + q) - (0.25 * (p - q) * (p - q) + off * off).sqrt()
        }
        _ => hermitian_eigen(a).0.first().copied().unwrap_or(f64::INFINITY),
    }
}

/// Block-diagonal direct sum `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Assembles a 2x2 block matrix.
pub fn block2(a11: &ComplexMatrix, a12: &ComplexMatrix, a21: &ComplexMatrix, a22: &ComplexMatrix) -> ComplexMatrix {
    let (r1, c1) = a11.shape();
    let (r2, c2) = a22.shape();
    assert_eq!(a12.shape(), (r1, c2), "block (1,2) shape");
    assert_eq!(a21.shape(), (r2, c1), "block (2,1) shape");
    let mut out = ComplexMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a11);
    out.view_mut((0, c1), (r1, c2)).copy_from(a12);
    out.view_mut((r1, 0), (r2, c1)).copy_from(a21);
    out.view_mut((r1, c1), (r2, c2)).copy_from(a22);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&identity(3)) - 1.0).abs() < 1e-14);
        let z = rmat(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert!((op_norm(&z) - 2.0).abs() < 1e-14);
        // SVD oracle by hand: [[1,1],[0,0]] has singular values √2, 0.
        let s = rmat(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!((op_norm(&s) - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn op_norm_matches_gram_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let a = sample::gaussian_matrix(&mut rng, n, n);
            let gram = a.adjoint() * &a;
            let oracle = hermitian_max_eigenvalue(&gram).sqrt();
            assert!((op_norm(&a) - oracle).abs() <= 1e-10 * oracle);
        }
    }

    #[test]
    fn spectral_radius_examples() {
        assert!(spectral_radius(&rmat(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap() < 1e-14);
        let d = rmat(2, 2, &[0.3, 0.0, 0.0, -0.9]);
        assert!((spectral_radius(&d).unwrap() - 0.9).abs() < 1e-14);
        let eps = 1.0 / 1.3;
        let s_eps = rmat(2, 2, &[eps, eps, 0.0, 0.0]);
        assert!((spectral_radius(&s_eps).unwrap() - eps).abs() < 1e-14);
    }

    #[test]
    fn spectral_radius_rejects_rectangular() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(spectral_radius(&a), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::new(1e-10, 1e-8, 1e-10).is_ok());
        assert!(Tolerances::new(1e-6, 1e-8, 1e-10).is_err());
        assert!(Tolerances::new(0.0, 1e-8, 1e-10).is_err());
        assert!(Tolerances::new(1e-10, f64::NAN, 1e-10).is_err());
    }

    #[test]
    fn hermitian_closed_forms_match_general_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = sample::gaussian_matrix(&mut rng, 2, 2);
            let h = &g + g.adjoint();
            let (vals, _) = hermitian_eigen(&h);
            assert!((hermitian_max_eigenvalue(&h) - vals[1]).abs() < 1e-12);
            assert!((hermitian_min_eigenvalue(&h) - vals[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = sample::gaussian_matrix(&mut rng, 5, 5);
        let h = &g + g.adjoint();
        let (vals, vecs) = hermitian_eigen(&h);
        let d = diag(&vals.iter().map(|&v| c64(v, 0.0)).collect::<Vec<_>>());
        assert!((&vecs * d * vecs.adjoint() - &h).norm() < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn block_helpers() {
        let a = rmat(1, 1, &[1.0]);
        let b = rmat(2, 2, &[2.0, 3.0, 4.0, 5.0]);
        let s = direct_sum(&a, &b);
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(s[(2, 2)], c64(5.0, 0.0));
        assert_eq!(s[(0, 1)], c64(0.0, 0.0));
        let z12 = ComplexMatrix::zeros(1, 2);
        let z21 = ComplexMatrix::zeros(2, 1);
        assert_eq!(block2(&a, &z12, &z21, &b), s);
    }
}
