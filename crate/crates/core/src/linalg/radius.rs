//! Numerical radius `ω(A) = max_θ λ_max((e^{iθ}A + e^{-iθ}A*)/2)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{hermitian_max_eigenvalue, ComplexMatrix};

const GRID: usize = 1024;
/// Grid maxima within this gap of the best one are refined.
const REFINE_GAP: f64 = 1e-6;
const REFINE_WIDTH: f64 = 1e-12;
/// Cap on refined brackets; a plateau within `REFINE_GAP` has every grid
/// point as a candidate and refining more of them cannot change the value.
const MAX_REFINED: usize = 32;

fn rotated_real_part(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let rot = Complex64::from_polar(1.0, theta);
    let m = a * rot;
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn support(a: &ComplexMatrix, theta: f64) -> f64 {
    hermitian_max_eigenvalue(&rotated_real_part(a, theta))
}

/// Ternary search for the maximum of `f` on `[lo, hi]`.
fn ternary_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > REFINE_WIDTH {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    f(0.5 * (lo + hi))
}

/// Numerical radius of a square matrix; `0` for the empty matrix.
///
/// Scans a 1024-point θ grid and ternary-refines every local grid maximum
/// within `1e-6` of the best. The support function is Lipschitz in θ with
/// constant at most `‖A‖`.
pub fn numerical_radius(a: &ComplexMatrix) -> f64 {
    assert!(a.is_square(), "numerical radius needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return a[(0, 0)].norm();
    }
    let step = TAU / GRID as f64;
    let values: Vec<f64> = (0..GRID).map(|k| support(a, k as f64 * step)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut candidates: Vec<usize> = (0..GRID)
        .filter(|&k| {
            let prev = values[(k + GRID - 1) % GRID];
            let next = values[(k + 1) % GRID];
            values[k] >= prev && values[k] >= next && values[k] >= best - REFINE_GAP
        })
        .collect();
    candidates.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    candidates.truncate(MAX_REFINED);

    candidates
        .into_iter()
        .map(|k| {
            let centre = k as f64 * step;
            ternary_max(|t| support(a, t), centre - step, centre + step)
        })
        .fold(best, f64::max)
}
