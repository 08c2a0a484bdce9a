//! Seeded random generators for test matrices and operator pairs.
//!
//! Used by the property suites and the acceptance harness; every generator
//! takes the RNG explicitly so runs are reproducible.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{op_norm, ComplexMatrix};

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniform point of the closed disc of the given radius.
pub fn disc_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random::<f64>() * TAU)
}

pub fn circle_point(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * TAU)
}

/// Random matrix rescaled to operator norm `norm`.
pub fn matrix_with_norm(rng: &mut impl Rng, n: usize, norm: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let g_norm = op_norm(&g);
    if g_norm == 0.0 {
        return g;
    }
    g * Complex64::new(norm / g_norm, 0.0)
}

/// Haar-like random unitary (QR of a Gaussian matrix with phases fixed).
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Evaluates the polynomial with coefficients `coeffs` (constant first) at `x`.
pub fn polynomial(x: &ComplexMatrix, coeffs: &[Complex64]) -> ComplexMatrix {
    let n = x.nrows();
    let mut acc = ComplexMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = &acc * x + ComplexMatrix::identity(n, n) * *c;
    }
    acc
}

/// Commuting contractions `(T1, T2)`, both polynomials in one random
/// contraction, each rescaled to a random norm in `(0, 1]`.
pub fn commuting_contractions(rng: &mut impl Rng, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let norm = rng.random_range(0.3..1.0);
    let x = matrix_with_norm(rng, n, norm);
    let mut factor = || {
        let degree = rng.random_range(1..=3);
        let coeffs: Vec<Complex64> = (0..=degree).map(|_| gaussian(rng)).collect();
        let t = polynomial(&x, &coeffs);
        let norm = op_norm(&t);
        let target = rng.random_range(0.2..=1.0);
        if norm > 0.0 {
            t * Complex64::new(target / norm, 0.0)
        } else {
            t
        }
    };
    let t1 = factor();
    let t2 = factor();
    (t1, t2)
}

/// Commuting unitaries `U1 = V D1 V*`, `U2 = V D2 V*`.
pub fn commuting_unitaries(rng: &mut impl Rng, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let v = unitary(rng, n);
    let d1 = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| circle_point(rng)));
    let d2 = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| circle_point(rng)));
    (&v * d1 * v.adjoint(), &v * d2 * v.adjoint())
}
