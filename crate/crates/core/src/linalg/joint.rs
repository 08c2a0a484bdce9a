//! Joint spectrum of a commuting pair by simultaneous triangularization.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{c64, check_commute, ensure_square, op_norm, ComplexMatrix, Schur, Tolerances};
use crate::error::{Error, Result};
use crate::sample::circle_point;

/// Seed used by [`joint_spectrum`] for its generic combination.
const DEFAULT_SEED: u64 = 0x5eed_2f0c;
/// Generic combinations tried before falling back to deflation.
const ATTEMPTS: usize = 5;
/// Relative singular-value threshold for eigenspaces in the fallback.
const NULL_REL: f64 = 1e-7;

/// Joint eigenvalues `(λ_k, μ_k)` of commuting `S`, `P` with a fixed seed.
pub fn joint_spectrum(s: &ComplexMatrix, p: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<(Complex64, Complex64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    joint_spectrum_with_rng(s, p, tol, &mut rng)
}

/// Joint eigenvalues drawing the generic combination `S + tP` from `rng`.
///
/// A unitary `Q` triangularizing `S + tP` for generic `t` triangularizes
/// both; the pairs are then read off the diagonals. If every attempt
/// leaves a large strictly-lower part, common eigenvectors are deflated
/// one at a time instead.
pub fn joint_spectrum_with_rng(
    s: &ComplexMatrix,
    p: &ComplexMatrix,
    tol: &Tolerances,
    rng: &mut impl Rng,
) -> Result<Vec<(Complex64, Complex64)>> {
    let n = ensure_square(s)?;
    if ensure_square(p)? != n {
        return Err(Error::DimensionMismatch(format!("S is {n}x{n} but P is {}x{}", p.nrows(), p.ncols())));
    }
    check_commute(s, p, tol.comm_tol)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let s_floor = tol.assert_tol * (1.0 + op_norm(s));
    let p_floor = tol.assert_tol * (1.0 + op_norm(p));

    let mut best = f64::INFINITY;
    for _ in 0..ATTEMPTS {
        let t = circle_point(rng);
        let schur = Schur::new(&(s + p * t))?;
        let ts = schur.q.adjoint() * s * &schur.q;
        let tp = schur.q.adjoint() * p * &schur.q;
        let (ls, lp) = (strict_lower_norm(&ts), strict_lower_norm(&tp));
        if ls <= s_floor && lp <= p_floor {
            return Ok((0..n).map(|i| (ts[(i, i)], tp[(i, i)])).collect());
        }
        best = best.min(ls.max(lp));
    }

    let q = deflate(s, p)?;
    let ts = q.adjoint() * s * &q;
    let tp = q.adjoint() * p * &q;
    let (ls, lp) = (strict_lower_norm(&ts), strict_lower_norm(&tp));
    if ls <= s_floor && lp <= p_floor {
        Ok((0..n).map(|i| (ts[(i, i)], tp[(i, i)])).collect())
    } else {
        Err(Error::TriangularizationFailed { residual: best.min(ls.max(lp)) })
    }
}

fn strict_lower_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for j in 0..n {
        for i in j + 1..n {
            sum += a[(i, j)].norm_sqr();
        }
    }
    sum.sqrt()
}

/// Unitary `Q` whose leading columns are successive common eigenvectors.
fn deflate(s: &ComplexMatrix, p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = s.nrows();
    if n == 1 {
        return Ok(ComplexMatrix::identity(1, 1));
    }
    let lambda = Schur::new(s)?.eigenvalues()[0];
    let shifted = s - ComplexMatrix::identity(n, n) * lambda;
    let null = null_space(&shifted, NULL_REL * (1.0 + op_norm(s)));
    // P maps the eigenspace of S into itself; an eigenvector of the
    // compression is a common eigenvector.
    let compressed = null.adjoint() * p * &null;
    let inner = Schur::new(&compressed)?;
    let v = &null * inner.q.column(0);
    let h = householder_to_e1(&v);

    let s1 = h.adjoint() * s * &h;
    let p1 = h.adjoint() * p * &h;
    let rest_s = s1.view((1, 1), (n - 1, n - 1)).into_owned();
    let rest_p = p1.view((1, 1), (n - 1, n - 1)).into_owned();
    let q_rest = deflate(&rest_s, &rest_p)?;
    let mut embed = ComplexMatrix::identity(n, n);
    embed.view_mut((1, 1), (n - 1, n - 1)).copy_from(&q_rest);
    Ok(h * embed)
}

/// Orthonormal basis of the numerical null space; at least one vector.
fn null_space(a: &ComplexMatrix, threshold: f64) -> ComplexMatrix {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let mut picked: Vec<usize> = order.iter().copied().filter(|&i| sv[i] <= threshold).collect();
    if picked.is_empty() {
        picked.push(order[0]);
    }
    ComplexMatrix::from_fn(n, picked.len(), |r, c| v_t[(picked[c], r)].conj())
}

/// Unitary Householder-type matrix whose first column is the unit vector `v / ‖v‖`.
fn householder_to_e1(v: &nalgebra::DVector<Complex64>) -> ComplexMatrix {
    let n = v.len();
    let norm = v.norm();
    let u = v / c64(norm, 0.0);
    let phase = if u[0].norm() > 0.0 { u[0] / u[0].norm() } else { c64(1.0, 0.0) };
    // w = u - phase e1; H = (I - 2 w w*/‖w‖²) maps phase e1 to u, so
    // H * phase has u as its first column.
    let mut w = u.clone();
    w[0] -= phase;
    let wn = w.norm_squared();
    let mut h = ComplexMatrix::identity(n, n);
    if wn > 0.0 {
        h -= &w * w.adjoint() * c64(2.0 / wn, 0.0);
    }
    h * phase
}
