//! Passing between commuting pairs `(T1, T2)` and their symmetrizations
//! `(S, P) = (T1 + T2, T1 T2)`: decomposition through a square root `Δ` of
//! `S² − 4P`, the always-available embedding on `H ⊕ H`, and a Newton
//! search for all factorizations.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, check_commute, commutator, direct_sum, identity, op_norm, scale, ComplexMatrix, PrimarySqrtPlan, Sign,
};
use crate::pair::{is_gamma_contraction, OperatorPair};
use crate::sample;

/// Largest number of nonzero eigenvalue clusters searched exhaustively.
pub const MAX_BRANCH_CLUSTERS: usize = 12;
/// Bound on `‖[T1, T2]‖` for an accepted decomposition.
const DECOMPOSE_COMMUTATOR_TOL: f64 = 1e-8;

/// `(T1 + T2, T1 T2)` for commuting `T1`, `T2` (no norm condition).
pub fn symmetrize_ops(t1: &ComplexMatrix, t2: &ComplexMatrix, tol: &crate::linalg::Tolerances) -> Result<OperatorPair> {
    if t1.shape() != t2.shape() {
        return Err(Error::DimensionMismatch(format!("T1 is {:?} but T2 is {:?}", t1.shape(), t2.shape())));
    }
    check_commute(t1, t2, tol.comm_tol)?;
    OperatorPair::new(t1 + t2, t1 * t2, *tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecompositionStatus {
    Ok,
    NoSqrt,
    CommutantFail,
    NormBoundFail,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub status: DecompositionStatus,
    pub t1: Option<ComplexMatrix>,
    pub t2: Option<ComplexMatrix>,
    pub delta: Option<ComplexMatrix>,
    /// `(‖S + Δ‖, ‖S − Δ‖)` for the accepted branch, or the best one tried.
    pub norms: (f64, f64),
    pub branches_tried: usize,
    pub note: Option<String>,
}

impl DecompositionResult {
    fn failed(status: DecompositionStatus, branches_tried: usize, note: String) -> Self {
        Self { status, t1: None, t2: None, delta: None, norms: (f64::NAN, f64::NAN), branches_tried, note: Some(note) }
    }
}

/// Looks for `Δ` with `Δ² = S² − 4P`, commuting with `S` and `P`, and
/// `‖S ± Δ‖ ≤ 2`; then `T1,2 = (S ± Δ)/2` are commuting contractions.
///
/// Only primary square roots are enumerated: the principal one, or with
/// `branch_search` every sign choice over the nonzero eigenvalue clusters
/// (up to `2^12`). A failure status means none was found among those.
pub fn decompose(pair: &OperatorPair, branch_search: bool) -> DecompositionResult {
    let tol = pair.tol;
    let s = &pair.s;
    let m = s * s - &pair.p * c64(4.0, 0.0);
    let plan = match PrimarySqrtPlan::new(&m, &tol) {
        Ok(plan) => plan,
        Err(e) => return DecompositionResult::failed(DecompositionStatus::NoSqrt, 0, e.to_string()),
    };
    let clusters = plan.clusters();
    let nonzero: Vec<usize> = (0..clusters.len()).filter(|&i| !clusters[i].is_zero).collect();
    let mut note = None;
    let masks: u64 = if !branch_search {
        1
    } else if nonzero.len() <= MAX_BRANCH_CLUSTERS {
        1 << nonzero.len()
    } else {
        note = Some("principal branch only".to_string());
        1
    };

    let mut best: Option<(f64, ComplexMatrix, (f64, f64))> = None;
    let mut tried = 0;
    for mask in 0..masks {
        let mut signs = vec![Sign::Plus; clusters.len()];
        for (bit, &c) in nonzero.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                signs[c] = Sign::Minus;
            }
        }
        tried += 1;
        let delta = match plan.root(Some(&signs)) {
            Ok(d) => d,
            Err(e) => return DecompositionResult::failed(DecompositionStatus::NoSqrt, tried, e.to_string()),
        };
        // A primary root is a polynomial in S² − 4P, so these hold up to the
        // recurrence's rounding; asserted rather than assumed.
        if check_commute(&delta, s, tol.assert_tol).is_err() || check_commute(&delta, &pair.p, tol.assert_tol).is_err()
        {
            return DecompositionResult::failed(
                DecompositionStatus::CommutantFail,
                tried,
                "square root does not commute with S and P".into(),
            );
        }
        let norms = (op_norm(&(s + &delta)), op_norm(&(s - &delta)));
        let worst = norms.0.max(norms.1);
        if worst <= 2.0 + tol.assert_tol {
            let t1 = scale(&(s + &delta), 0.5);
            let t2 = scale(&(s - &delta), 0.5);
            let comm = op_norm(&commutator(&t1, &t2));
            if comm > DECOMPOSE_COMMUTATOR_TOL {
                return DecompositionResult::failed(
                    DecompositionStatus::CommutantFail,
                    tried,
                    format!("‖[T1, T2]‖ = {comm:e}"),
                );
            }
            return DecompositionResult {
                status: DecompositionStatus::Ok,
                t1: Some(t1),
                t2: Some(t2),
                delta: Some(delta),
                norms,
                branches_tried: tried,
                note,
            };
        }
        if best.as_ref().is_none_or(|(w, _, _)| worst < *w) {
            best = Some((worst, delta, norms));
        }
    }
    let (_, delta, norms) = best.expect("at least one branch is always tried");
    DecompositionResult {
        status: DecompositionStatus::NormBoundFail,
        t1: None,
        t2: None,
        delta: Some(delta),
        norms,
        branches_tried: tried,
        note,
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    /// `[[S/2, M/4], [I, S/2]]` with `M = S² − 4P`, on `H ⊕ H`.
    pub t1: ComplexMatrix,
    /// `[[S/2, −M/4], [−I, S/2]]`.
    pub t2: ComplexMatrix,
    pub block_layout: String,
    /// `‖T1 + T2 − S ⊕ S‖`.
    pub sum_residual: f64,
    /// `max(‖T1T2 − P ⊕ P‖, ‖T2T1 − P ⊕ P‖)`.
    pub product_residual: f64,
    pub norms: (f64, f64),
}

/// Writes a Γ-contraction `(S, P)` on `H` as the restriction of the
/// symmetrization of commuting `T1`, `T2` on `H ⊕ H` with `‖Ti‖ ≤ 2`.
pub fn embed_and_split(pair: &OperatorPair) -> Result<EmbeddingResult> {
    let report = is_gamma_contraction(pair)?;
    if !report.is_certified() {
        return Err(Error::NotGammaContraction(format!("{:?}: {}", report.overall, report.violations.join("; "))));
    }
    let result = embed_blocks(pair);
    let t = pair.tol.assert_tol;
    if result.norms.0 > 2.0 + t || result.norms.1 > 2.0 + t {
        return Err(Error::NormBoundViolated(format!("‖T1‖ = {}, ‖T2‖ = {}", result.norms.0, result.norms.1)));
    }
    let scale_sp = 1.0 + op_norm(&pair.s) + op_norm(&pair.p);
    if result.sum_residual > t * scale_sp || result.product_residual > t * scale_sp {
        return Err(Error::NormBoundViolated(format!(
            "block identities fail: sum {:e}, product {:e}",
            result.sum_residual, result.product_residual
        )));
    }
    let doubled = OperatorPair::new(&result.t1 + &result.t2, &result.t1 * &result.t2, pair.tol)?;
    let again = is_gamma_contraction(&doubled)?;
    if !again.is_certified() {
        return Err(Error::NotGammaContraction(format!("embedded pair: {:?}", again.overall)));
    }
    Ok(result)
}

/// The block construction without any certification.
pub fn embed_blocks(pair: &OperatorPair) -> EmbeddingResult {
    let n = pair.dim();
    let s = &pair.s;
    let half = scale(s, 0.5);
    let quarter_m = scale(&(s * s - scale(&pair.p, 4.0)), 0.25);
    let id = identity(n);
    let t1 = crate::linalg::block2(&half, &quarter_m, &id, &half);
    let t2 = crate::linalg::block2(&half, &(-&quarter_m), &(-&id), &half);
    let ss = direct_sum(s, s);
    let pp = direct_sum(&pair.p, &pair.p);
    let sum_residual = op_norm(&(&t1 + &t2 - ss));
    let product_residual = op_norm(&(&t1 * &t2 - &pp)).max(op_norm(&(&t2 * &t1 - &pp)));
    let norms = (op_norm(&t1), op_norm(&t2));
    EmbeddingResult {
        t1,
        t2,
        block_layout: format!("H ⊕ H with H of dimension {n}; the first summand carries (S, P)"),
        sum_residual,
        product_residual,
        norms,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HalfDirection {
    /// `(S, P) ↦ (S/2, P/4)`.
    ToHalf,
    /// `(S, P) ↦ (2S, 4P)`.
    FromHalf,
}

pub fn half_scale(pair: &OperatorPair, direction: HalfDirection) -> OperatorPair {
    let (a, b) = match direction {
        HalfDirection::ToHalf => (0.5, 0.25),
        HalfDirection::FromHalf => (2.0, 4.0),
    };
    OperatorPair { s: scale(&pair.s, a), p: scale(&pair.p, b), tol: pair.tol }
}

const NEWTON_ITERATIONS: usize = 40;
const NEWTON_MIN_STEP: f64 = 1e-14;
const DEDUP_DISTANCE: f64 = 1e-6;
pub const MAX_SEARCH_DIM: usize = 8;

/// All factorizations `(T1, S − T1)` found by Gauss–Newton from random
/// starts on `T1 ↦ (T1² − T1 S + P, T1 S − S T1)`.
///
/// Each trial uses its own seeded generator and runs twice: once on the
/// equations alone, which finds isolated roots, and once with an extra
/// random affine equation `⟨C, T1⟩ = c`, which picks a point on any
/// positive-dimensional family of roots (plain Newton on a homogeneous
/// system only contracts towards the origin). Candidates are then polished
/// with the residual in double-double arithmetic (see [`polish`]), and kept
/// when they satisfy the equations and lie farther than `1e-6` from every
/// earlier one.
pub fn factorization_search(
    pair: &OperatorPair,
    trials: usize,
    seed: u64,
) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    let n = pair.dim();
    if n > MAX_SEARCH_DIM {
        return Err(Error::InvalidArgument(format!("factorization search supports dimension ≤ {MAX_SEARCH_DIM}")));
    }
    let s = &pair.s;
    let radius = 1.0 + op_norm(s);
    let mut found: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let start = ComplexMatrix::from_fn(n, n, |_, _| sample::disc_point(&mut rng, radius));
        let c = ComplexMatrix::from_fn(n, n, |_, _| sample::gaussian(&mut rng));
        let offset = sample::disc_point(&mut rng, radius);
        let candidates = [newton(s, &pair.p, start.clone(), None), newton(s, &pair.p, start, Some((&c, offset)))];
        for x in candidates {
            let Some(x) = polish(s, &pair.p, &x) else { continue };
            if residual(s, &pair.p, &x) > accept_tol(pair) {
                continue;
            }
            if found.iter().any(|(t1, _)| (t1 - &x).norm() <= DEDUP_DISTANCE) {
                continue;
            }
            let t2 = s - &x;
            found.push((x, t2));
        }
    }
    Ok(found)
}

/// Whether `(T1, S − T1)` symmetrizes to the pair: `T1² − T1 S + P = 0` and
/// `[T1, S] = 0` within `assert_tol` (scaled), and `T1` is within `1e-6`
/// of the root that [`polish`] finds from it.
///
/// A small residual alone is not enough when the problem is
/// ill-conditioned: long shallow valleys carry residuals near rounding
/// level far from any root.
pub fn verify_factorization(pair: &OperatorPair, t1: &ComplexMatrix) -> bool {
    residual(&pair.s, &pair.p, t1) <= accept_tol(pair)
        && polish(&pair.s, &pair.p, t1).is_some_and(|x| (x - t1).norm() <= DEDUP_DISTANCE)
}

fn accept_tol(pair: &OperatorPair) -> f64 {
    let radius = 1.0 + op_norm(&pair.s);
    pair.tol.assert_tol * (1.0 + radius * radius + op_norm(&pair.p))
}

fn equations(s: &ComplexMatrix, p: &ComplexMatrix, x: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (x * x - x * s + p, commutator(x, s))
}

fn residual(s: &ComplexMatrix, p: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let (a, b) = equations(s, p, x);
    a.norm().max(b.norm())
}

/// Extra holomorphic equation `Σ C_ij X_ij = c`.
type Slice<'a> = (&'a ComplexMatrix, Complex64);

fn slice_residual(x: &ComplexMatrix, slice: Option<Slice>) -> Complex64 {
    slice.map_or(Complex64::new(0.0, 0.0), |(c, offset)| c.component_mul(x).sum() - offset)
}

fn total_residual_sq(s: &ComplexMatrix, p: &ComplexMatrix, x: &ComplexMatrix, slice: Option<Slice>) -> f64 {
    let (a, b) = equations(s, p, x);
    a.norm_squared() + b.norm_squared() + slice_residual(x, slice).norm_sqr()
}

/// Jacobian of the equations at `x` acting on column-major `vec δ`, with
/// the slice row appended if present.
fn jacobian(s: &ComplexMatrix, x: &ComplexMatrix, slice: Option<Slice>) -> ComplexMatrix {
    let n = s.nrows();
    let nn = n * n;
    let id = identity(n);
    let st = s.transpose();
    // vec(Xδ) = (I ⊗ X) vec δ, vec(δX) = (Xᵀ ⊗ I) vec δ.
    let j1 = id.kronecker(x) + x.transpose().kronecker(&id) - st.kronecker(&id);
    let j2 = st.kronecker(&id) - id.kronecker(s);
    let mut jac = ComplexMatrix::zeros(2 * nn + usize::from(slice.is_some()), nn);
    jac.view_mut((0, 0), (nn, nn)).copy_from(&j1);
    jac.view_mut((nn, 0), (nn, nn)).copy_from(&j2);
    if let Some((c, _)) = slice {
        for (k, v) in c.as_slice().iter().enumerate() {
            jac[(2 * nn, k)] = *v;
        }
    }
    jac
}

/// Least-squares step `J⁺ r` with relative singular-value cutoff `rcond`.
fn solve_step(jac: ComplexMatrix, rhs: &ComplexMatrix, n: usize, rcond: f64) -> Option<ComplexMatrix> {
    let svd = jac.svd(true, true);
    let cutoff = rcond * svd.singular_values.max().max(f64::MIN_POSITIVE);
    let step = svd.solve(rhs, cutoff).ok()?;
    Some(ComplexMatrix::from_column_slice(n, n, step.as_slice()))
}

/// Undamped Gauss–Newton step at `x`, or `None` if the solve fails.
fn gauss_newton_step(
    s: &ComplexMatrix,
    p: &ComplexMatrix,
    x: &ComplexMatrix,
    slice: Option<Slice>,
    rcond: f64,
) -> Option<ComplexMatrix> {
    let n = s.nrows();
    let nn = n * n;
    let (a, b) = equations(s, p, x);
    let mut rhs = ComplexMatrix::zeros(2 * nn + usize::from(slice.is_some()), 1);
    rhs.view_mut((0, 0), (nn, 1)).copy_from_slice(a.as_slice());
    rhs.view_mut((nn, 0), (nn, 1)).copy_from_slice(b.as_slice());
    if slice.is_some() {
        rhs[(2 * nn, 0)] = slice_residual(x, slice);
    }
    solve_step(jacobian(s, x, slice), &rhs, n, rcond)
}

/// Relative singular-value cutoff of the Gauss–Newton iteration.
const STEP_RCOND: f64 = 1e-12;

/// Gauss–Newton, halving a step that would increase the residual. All
/// iterations run: at singular roots convergence is only linear.
fn newton(s: &ComplexMatrix, p: &ComplexMatrix, mut x: ComplexMatrix, slice: Option<Slice>) -> ComplexMatrix {
    for _ in 0..NEWTON_ITERATIONS {
        let current = total_residual_sq(s, p, &x, slice);
        if current == 0.0 {
            break;
        }
        let Some(step) = gauss_newton_step(s, p, &x, slice, STEP_RCOND) else { break };
        let mut next = &x - &step;
        if total_residual_sq(s, p, &next, slice) > current {
            next = &x - &step * Complex64::new(0.5, 0.0);
        }
        let moved = (&next - &x).norm();
        x = next;
        if moved < NEWTON_MIN_STEP {
            break;
        }
    }
    x
}

const POLISH_ITERATIONS: usize = 20;
/// Near machine precision: roots of `S_r`-like pairs have relative
/// Jacobian conditioning around `1e-14`.
const POLISH_RCOND: f64 = 1e-15;
/// Residual, relative to `1 + ‖X‖² + ‖S‖‖X‖ + ‖P‖`, that only points
/// within double-double reach of an actual root attain.
const POLISH_RESIDUAL: f64 = 1e-22;

/// Mixed-precision refinement of an approximate root: undamped
/// Gauss–Newton with the residual evaluated in double-double and the solve
/// in `f64`. Returns the refined root once the residual is below
/// `POLISH_RESIDUAL` (relative), or `None` if that never happens.
///
/// Plain `f64` cannot separate an ill-conditioned root from nearby valley
/// points whose residual is itself at rounding level; in double-double the
/// former converges and the latter stall or run off. Steps are not damped
/// because the way out of such a valley passes through larger residuals.
fn polish(s: &ComplexMatrix, p: &ComplexMatrix, x: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = s.nrows();
    let (sd, pd) = (dd::Matrix::from(s), dd::Matrix::from(p));
    let (norm_s, norm_p) = (op_norm(s), op_norm(p));
    let mut xd = dd::Matrix::from(x);
    for _ in 0..=POLISH_ITERATIONS {
        let hi = xd.round();
        let res = dd::residual(&sd, &pd, &xd);
        let size = res.norm();
        if !size.is_finite() || !hi.iter().all(|z| z.is_finite()) {
            return None;
        }
        if size <= POLISH_RESIDUAL * (1.0 + hi.norm_squared() + norm_s * hi.norm() + norm_p) {
            return Some(hi);
        }
        let step = solve_step(jacobian(s, &hi, None), &res, n, POLISH_RCOND)?;
        xd = xd.minus(&step);
    }
    None
}

/// Complex double-double matrices, just enough for the residual.
mod dd {
    use twofloat::TwoFloat;

    use crate::linalg::{c64, ComplexMatrix};

    #[derive(Clone, Copy, Default)]
    struct Cdd {
        re: TwoFloat,
        im: TwoFloat,
    }

    impl Cdd {
        fn add(self, o: Cdd) -> Cdd {
            Cdd { re: self.re + o.re, im: self.im + o.im }
        }
        fn sub(self, o: Cdd) -> Cdd {
            Cdd { re: self.re - o.re, im: self.im - o.im }
        }
        fn mul(self, o: Cdd) -> Cdd {
            Cdd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
        }
    }

    /// Column-major `n × n`.
    #[derive(Clone)]
    pub struct Matrix {
        n: usize,
        data: Vec<Cdd>,
    }

    impl From<&ComplexMatrix> for Matrix {
        fn from(m: &ComplexMatrix) -> Self {
            let data = m.iter().map(|z| Cdd { re: TwoFloat::from(z.re), im: TwoFloat::from(z.im) }).collect();
            Matrix { n: m.nrows(), data }
        }
    }

    impl Matrix {
        fn at(&self, i: usize, j: usize) -> Cdd {
            self.data[i + j * self.n]
        }

        fn product(&self, o: &Matrix) -> Matrix {
            let n = self.n;
            let mut data = vec![Cdd::default(); n * n];
            for j in 0..n {
                for i in 0..n {
                    data[i + j * n] = (0..n).fold(Cdd::default(), |acc, k| acc.add(self.at(i, k).mul(o.at(k, j))));
                }
            }
            Matrix { n, data }
        }

        fn zip(&self, o: &Matrix, f: impl Fn(Cdd, Cdd) -> Cdd) -> Matrix {
            Matrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| f(*a, *b)).collect() }
        }

        /// `self − step` with `step` in `f64`.
        pub fn minus(&self, step: &ComplexMatrix) -> Matrix {
            self.zip(&Matrix::from(step), Cdd::sub)
        }

        pub fn round(&self) -> ComplexMatrix {
            ComplexMatrix::from_iterator(
                self.n,
                self.n,
                self.data.iter().map(|z| c64(f64::from(z.re), f64::from(z.im))),
            )
        }
    }

    /// Stacked `vec(X² − XS + P)`, `vec(XS − SX)`, rounded to `f64`.
    pub fn residual(s: &Matrix, p: &Matrix, x: &Matrix) -> ComplexMatrix {
        let xs = x.product(s);
        let a = x.product(x).zip(&xs, Cdd::sub).zip(p, Cdd::add);
        let b = xs.zip(&s.product(x), Cdd::sub);
        let (a, b) = (a.round(), b.round());
        ComplexMatrix::from_iterator(a.len() + b.len(), 1, a.iter().chain(b.iter()).copied())
    }
}
