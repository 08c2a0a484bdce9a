//! Certification of commuting matrix pairs `(S, P)`: Γ-contraction tests,
//! the fundamental operator, and Γ-unitary / Γ-isometry checks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{max_root_modulus, PointPair};
use crate::linalg::{
    c64, check_commute, diag, ensure_finite, ensure_square, hermitian_defect, hermitian_eigen,
    hermitian_min_eigenvalue, identity, joint_spectrum, numerical_radius, op_norm, psd_sqrt, spectral_radius,
    ComplexMatrix, Tolerances,
};

pub const VIOLATION_S_NORM: &str = "‖S‖ ≤ 2";
pub const VIOLATION_P_NORM: &str = "‖P‖ ≤ 1";
pub const VIOLATION_SPECTRUM: &str = "σ(S,P) ⊆ Γ";
pub const VIOLATION_SOLVABLE: &str = "S − S*P = D_P X D_P solvable";
pub const VIOLATION_OMEGA: &str = "ω(F) ≤ 1";
pub const VIOLATION_RHO: &str = "ρ(αS, α²P) ≥ 0";

/// Factor between the pass threshold and the edge of the inconclusive band.
const INCONCLUSIVE_FACTOR: f64 = 10.0;

/// A commuting pair of square matrices of equal size.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub s: ComplexMatrix,
    pub p: ComplexMatrix,
    pub tol: Tolerances,
}

impl OperatorPair {
    pub fn new(s: ComplexMatrix, p: ComplexMatrix, tol: Tolerances) -> Result<Self> {
        let n = ensure_square(&s)?;
        if ensure_square(&p)? != n {
            return Err(Error::DimensionMismatch(format!("S is {n}x{n} but P is {}x{}", p.nrows(), p.ncols())));
        }
        ensure_finite(&s)?;
        ensure_finite(&p)?;
        check_commute(&s, &p, tol.comm_tol)?;
        Ok(Self { s, p, tol })
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    /// `(S*, P*)`, which commutes whenever `(S, P)` does.
    pub fn adjoint(&self) -> Self {
        Self { s: self.s.adjoint(), p: self.p.adjoint(), tol: self.tol }
    }
}

fn rho_of(s: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
    let n = s.nrows();
    let sp = s - s.adjoint() * p;
    (identity(n) - p.adjoint() * p) * c64(2.0, 0.0) - &sp - sp.adjoint()
}

/// `ρ(S, P) = 2(I − P*P) − (S − S*P) − (S* − P*S)`.
pub fn rho(pair: &OperatorPair) -> ComplexMatrix {
    let r = rho_of(&pair.s, &pair.p);
    debug_assert!(hermitian_defect(&r) <= 1e-12);
    r
}

/// Default α-grid of the ρ scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { radial: 32, angular: 64 }
    }
}

const SCAN_R_MIN: f64 = 0.05;
const SCAN_R_MAX: f64 = 0.999;

/// Minimum over the α-grid of `λ_min(ρ(αS, α²P))`.
///
/// A sampler of a necessary condition, never a certificate.
pub fn rho_scan(pair: &OperatorPair, grid: ScanGrid) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..grid.radial {
        let r = if grid.radial == 1 {
            SCAN_R_MAX
        } else {
            SCAN_R_MIN + (SCAN_R_MAX - SCAN_R_MIN) * i as f64 / (grid.radial - 1) as f64
        };
        for k in 0..grid.angular {
            let alpha = Complex64::from_polar(r, TAU * k as f64 / grid.angular as f64);
            let m = rho_of(&(&pair.s * alpha), &(&pair.p * (alpha * alpha)));
            best = best.min(hermitian_min_eigenvalue(&m));
        }
    }
    best
}

/// Solution `F` of `S − S*P = D_P F D_P` on the defect space `𝒟_P`.
#[derive(Debug, Clone)]
pub struct FundamentalOp {
    /// `F` in the coordinates of `defect_basis`.
    pub f: ComplexMatrix,
    /// Orthonormal columns spanning `𝒟_P`.
    pub defect_basis: ComplexMatrix,
    /// Eigenvalues of `D_P` on the basis columns.
    pub defect_values: Vec<f64>,
    /// `D_P = (I − P*P)^{1/2}` on the full space.
    pub dp: ComplexMatrix,
    /// `‖D_P F̃ D_P − (S − S*P)‖` with `F̃ = V F V*`.
    pub residual: f64,
    pub omega: f64,
    /// Distance to the least-squares solution of the vectorized equation.
    pub path_gap: f64,
}

impl FundamentalOp {
    /// `F` extended by zero to the whole space, `V F V*`.
    pub fn full(&self) -> ComplexMatrix {
        &self.defect_basis * &self.f * self.defect_basis.adjoint()
    }

    pub fn defect_dim(&self) -> usize {
        self.f.nrows()
    }
}

/// Floor below which a `D_P` eigenvalue is indistinguishable from zero.
///
/// Rounding of order `n·eps` in `I − P*P` becomes `√(n·eps)` after the
/// square root, far above a fixed `1e-10`.
pub fn defect_cutoff(n: usize, tol: &Tolerances) -> f64 {
    tol.rank_cutoff.max((16.0 * n.max(1) as f64 * f64::EPSILON).sqrt())
}

/// Orthonormal basis of `𝒟_P` and `D_P` on it.
pub struct Defect {
    pub dp: ComplexMatrix,
    pub basis: ComplexMatrix,
    pub values: Vec<f64>,
}

/// Defect operator `D_P` of a contraction and an orthonormal basis of its range.
pub fn defect(p: &ComplexMatrix, tol: &Tolerances) -> Result<Defect> {
    let n = ensure_square(p)?;
    let norm = op_norm(p);
    if norm > 1.0 + tol.assert_tol {
        return Err(Error::NotContraction { norm });
    }
    // 1 − ‖P‖² can reach −2·assert_tol for admissible ‖P‖.
    let sqrt_tol = tol.with_assert_tol(3.0 * tol.assert_tol)?;
    let dp = psd_sqrt(&(identity(n) - p.adjoint() * p), &sqrt_tol)?;
    let (values, vectors) = hermitian_eigen(&dp);
    let cutoff = defect_cutoff(n, tol);
    let keep: Vec<usize> = (0..n).filter(|&i| values[i] > cutoff).collect();
    let basis = ComplexMatrix::from_fn(n, keep.len(), |r, c| vectors[(r, keep[c])]);
    let values = keep.iter().map(|&i| values[i]).collect();
    Ok(Defect { dp, basis, values })
}

/// Solves `S − S*P = D_P X D_P` for `X` on `𝒟_P`.
///
/// Primary path: `F = Λ⁻¹ V*(S − S*P)V Λ⁻¹` in the eigenbasis `V` of `D_P`.
/// Second path: least squares on `(Bᵀ ⊗ A) vec X = vec C` with
/// `A = D_P V`, `B = V* D_P`.
pub fn fundamental_operator(pair: &OperatorPair) -> Result<FundamentalOp> {
    let tol = &pair.tol;
    let d = defect(&pair.p, tol)?;
    let c = &pair.s - pair.s.adjoint() * &pair.p;
    let k = d.values.len();
    let inv = diag(&d.values.iter().map(|&v| c64(1.0 / v, 0.0)).collect::<Vec<_>>());
    let f = &inv * d.basis.adjoint() * &c * &d.basis * &inv;
    let f_full = &d.basis * &f * d.basis.adjoint();
    let residual = op_norm(&(&d.dp * &f_full * &d.dp - &c));
    if residual > tol.assert_tol {
        return Err(Error::NotSolvable { residual });
    }
    let alt = solve_vectorized(&d.dp, &d.basis, &c, defect_cutoff(pair.dim(), tol));
    let path_gap = if k == 0 { 0.0 } else { op_norm(&(&alt - &f)) };
    let omega = if k == 0 { 0.0 } else { numerical_radius(&f) };
    Ok(FundamentalOp { f, defect_basis: d.basis, defect_values: d.values, dp: d.dp, residual, omega, path_gap })
}

/// Least-squares solution of `A X B = C` with `A = D_P V`, `B = V* D_P`.
fn solve_vectorized(dp: &ComplexMatrix, basis: &ComplexMatrix, c: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let k = basis.ncols();
    let n = dp.nrows();
    if k == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let a = dp * basis;
    let b = basis.adjoint() * dp;
    // Column-major vec: vec(A X B) = (Bᵀ ⊗ A) vec X.
    let system = b.transpose().kronecker(&a);
    let rhs = ComplexMatrix::from_column_slice(n * n, 1, c.as_slice());
    let svd = system.svd(true, true);
    let x = svd.solve(&rhs, 0.5 * cutoff * cutoff).expect("both singular-vector sets were requested");
    ComplexMatrix::from_column_slice(k, k, x.as_slice())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CertifiedContraction,
    CertifiedNot,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSummary {
    pub residual: f64,
    pub omega: f64,
    pub path_gap: f64,
    pub defect_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrictCriterion {
    /// `ω(D_P⁻¹ (S − S*P) D_P⁻¹)`.
    pub value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub s_norm: f64,
    pub p_norm: f64,
    /// Largest root modulus over the joint spectrum; `None` if it could not be computed.
    pub spectrum_max_root: Option<f64>,
    pub rho_min: f64,
    pub fundamental: Option<FundamentalSummary>,
    /// Residual when the fundamental equation had no solution.
    pub unsolvable_residual: Option<f64>,
    pub strict: Option<StrictCriterion>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
    pub overall: Verdict,
}

impl GammaReport {
    pub fn is_certified(&self) -> bool {
        self.overall == Verdict::CertifiedContraction
    }
}

pub fn is_gamma_contraction(pair: &OperatorPair) -> Result<GammaReport> {
    is_gamma_contraction_with(pair, ScanGrid::default())
}

/// Runs every criterion in order; the norm bounds together with the
/// fundamental-operator equation and `ω(F) ≤ 1` decide. The joint spectrum
/// and ρ scan corroborate: if they fail while that criterion passes the
/// verdict is inconclusive.
pub fn is_gamma_contraction_with(pair: &OperatorPair, grid: ScanGrid) -> Result<GammaReport> {
    let tol = pair.tol;
    let t = tol.assert_tol;
    check_commute(&pair.s, &pair.p, tol.comm_tol)?;

    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let mut borderline = false;

    let s_norm = op_norm(&pair.s);
    let p_norm = op_norm(&pair.p);
    if s_norm > 2.0 + t {
        violations.push(VIOLATION_S_NORM.to_string());
    }
    if p_norm > 1.0 + t {
        violations.push(VIOLATION_P_NORM.to_string());
    }

    // Eigenvalues of defective pairs carry errors of order √eps, so the
    // spectral test uses a √tol band.
    let spectrum_max_root = match joint_spectrum(&pair.s, &pair.p, &tol) {
        Ok(js) => Some(js.iter().map(|&(l, m)| max_root_modulus(PointPair::new(l, m))).fold(0.0, f64::max)),
        Err(e) => {
            notes.push(format!("joint spectrum unavailable: {e}"));
            None
        }
    };
    let spectrum_ok = spectrum_max_root.is_none_or(|m| m <= 1.0 + t.sqrt());

    let mut fundamental = None;
    let mut unsolvable_residual = None;
    if p_norm <= 1.0 + t {
        match fundamental_operator(pair) {
            Ok(fo) => {
                if fo.omega > 1.0 + INCONCLUSIVE_FACTOR * t {
                    violations.push(VIOLATION_OMEGA.to_string());
                } else if fo.omega > 1.0 + t {
                    borderline = true;
                    notes.push(format!("ω(F) = {} is within the inconclusive band", fo.omega));
                }
                fundamental = Some(FundamentalSummary {
                    residual: fo.residual,
                    omega: fo.omega,
                    path_gap: fo.path_gap,
                    defect_dim: fo.defect_dim(),
                });
            }
            Err(Error::NotSolvable { residual }) => {
                unsolvable_residual = Some(residual);
                if residual > INCONCLUSIVE_FACTOR * t {
                    violations.push(VIOLATION_SOLVABLE.to_string());
                } else {
                    borderline = true;
                    notes.push(format!("fundamental equation residual {residual:e} is within the inconclusive band"));
                }
            }
            Err(e) => {
                borderline = true;
                notes.push(format!("fundamental operator unavailable: {e}"));
            }
        }
    }
    let criterion_passed = violations.is_empty() && !borderline && fundamental.is_some();

    let rho_min = rho_scan(pair, grid);
    let rho_ok = rho_min >= -t;

    let strict = is_gamma_contraction_strict(pair).ok();
    if let Some(sc) = strict {
        if sc.holds != criterion_passed && !borderline {
            notes.push("strict criterion disagrees with the fundamental-operator criterion".into());
            borderline = true;
        }
    }

    let overall = if criterion_passed {
        if !spectrum_ok || !rho_ok || borderline {
            if !spectrum_ok {
                notes.push(format!("{VIOLATION_SPECTRUM} fails while the operator criterion holds"));
            }
            if !rho_ok {
                notes.push(format!("{VIOLATION_RHO} fails while the operator criterion holds"));
            }
            Verdict::Inconclusive
        } else {
            Verdict::CertifiedContraction
        }
    } else {
        if !spectrum_ok {
            violations.push(VIOLATION_SPECTRUM.to_string());
        }
        if !rho_ok {
            violations.push(VIOLATION_RHO.to_string());
        }
        if violations.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::CertifiedNot
        }
    };

    Ok(GammaReport {
        s_norm,
        p_norm,
        spectrum_max_root,
        rho_min,
        fundamental,
        unsolvable_residual,
        strict,
        violations,
        notes,
        overall,
    })
}

/// Criterion for `‖P‖ < 1`, `r(S) < 2`: `(S, P)` is a Γ-contraction iff
/// `ω(D_P⁻¹ (S − S*P) D_P⁻¹) ≤ 1`.
pub fn is_gamma_contraction_strict(pair: &OperatorPair) -> Result<StrictCriterion> {
    let t = pair.tol.assert_tol;
    let p_norm = op_norm(&pair.p);
    if p_norm >= 1.0 - t {
        return Err(Error::StrictPreconditionFailed(format!("‖P‖ = {p_norm} is not below 1")));
    }
    let r = spectral_radius(&pair.s)?;
    if r >= 2.0 - t {
        return Err(Error::StrictPreconditionFailed(format!("r(S) = {r} is not below 2")));
    }
    let n = pair.dim();
    let dp = psd_sqrt(&(identity(n) - pair.p.adjoint() * &pair.p), &pair.tol)?;
    let inv = dp.try_inverse().ok_or_else(|| Error::StrictPreconditionFailed("D_P is singular".into()))?;
    let x = &inv * (&pair.s - pair.s.adjoint() * &pair.p) * &inv;
    let value = numerical_radius(&x);
    Ok(StrictCriterion { value, holds: value <= 1.0 + t })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UnitaryMethod {
    /// `P*P = I = PP*`, `P*S = S*`, `‖S‖ ≤ 2`.
    Algebraic,
    /// `P` normal, `S = S*P`, `|S² − 4P| + S*S = 4I`.
    NewChar,
}

/// Each defining relation of the chosen characterization with its violation.
pub fn gamma_unitary_violations(pair: &OperatorPair, method: UnitaryMethod) -> Vec<(&'static str, f64)> {
    let (s, p) = (&pair.s, &pair.p);
    let n = pair.dim();
    let id = identity(n);
    match method {
        UnitaryMethod::Algebraic => vec![
            ("P*P = I", op_norm(&(p.adjoint() * p - &id))),
            ("PP* = I", op_norm(&(p * p.adjoint() - &id))),
            ("P*S = S*", op_norm(&(p.adjoint() * s - s.adjoint()))),
            ("‖S‖ ≤ 2", (op_norm(s) - 2.0).max(0.0)),
        ],
        UnitaryMethod::NewChar => {
            let m = s * s - p * c64(4.0, 0.0);
            let modulus = psd_sqrt(&(m.adjoint() * &m), &pair.tol);
            let identity_gap = match modulus {
                Ok(abs_m) => op_norm(&(abs_m + s.adjoint() * s - &id * c64(4.0, 0.0))),
                Err(_) => f64::INFINITY,
            };
            vec![
                ("P normal", op_norm(&(p.adjoint() * p - p * p.adjoint()))),
                ("S = S*P", op_norm(&(s - s.adjoint() * p))),
                ("|S² − 4P| + S*S = 4I", identity_gap),
            ]
        }
    }
}

pub fn is_gamma_unitary(pair: &OperatorPair, method: UnitaryMethod) -> bool {
    gamma_unitary_violations(pair, method).iter().all(|&(_, v)| v <= pair.tol.assert_tol)
}

/// `P*P = I`, `P*S = S*`, `‖S‖ ≤ 2`.
pub fn is_gamma_isometry(pair: &OperatorPair) -> bool {
    let (s, p) = (&pair.s, &pair.p);
    let t = pair.tol.assert_tol;
    op_norm(&(p.adjoint() * p - identity(pair.dim()))) <= t
        && op_norm(&(p.adjoint() * s - s.adjoint())) <= t
        && op_norm(s) <= 2.0 + t
}

/// `‖(S*S − SS*) − S*(P*P − PP*)S‖`, which vanishes whenever `S = S*P`.
pub fn hyponormal_transfer_check(pair: &OperatorPair) -> Result<f64> {
    let (s, p) = (&pair.s, &pair.p);
    let gap = op_norm(&(s - s.adjoint() * p));
    if gap > pair.tol.assert_tol {
        return Err(Error::PreconditionFailed(format!("‖S − S*P‖ = {gap:e}")));
    }
    let lhs = s.adjoint() * s - s * s.adjoint();
    let rhs = s.adjoint() * (p.adjoint() * p - p * p.adjoint()) * s;
    Ok(op_norm(&(lhs - rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cmat, direct_sum, rmat};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, SQRT_2};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pair(s: ComplexMatrix, p: ComplexMatrix) -> OperatorPair {
        OperatorPair::new(s, p, tol()).unwrap()
    }

    fn s_eps(eps: f64) -> ComplexMatrix {
        rmat(2, 2, &[eps, eps, 0.0, 0.0])
    }

    fn zeros(n: usize) -> ComplexMatrix {
        ComplexMatrix::zeros(n, n)
    }

    fn symmetrized(t1: &ComplexMatrix, t2: &ComplexMatrix) -> OperatorPair {
        pair(t1 + t2, t1 * t2)
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let t = tol();
        assert!(matches!(OperatorPair::new(zeros(2), zeros(3), t), Err(Error::DimensionMismatch(_))));
        let s = rmat(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let p = rmat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(OperatorPair::new(s, p, t), Err(Error::NotCommuting { .. })));
        let nan = rmat(1, 1, &[f64::NAN]);
        assert!(matches!(OperatorPair::new(nan, zeros(1), t), Err(Error::NonFinite)));
    }

    #[test]
    fn rho_examples() {
        assert!((rho(&pair(zeros(2), zeros(2))) - identity(2) * c64(2.0, 0.0)).norm() < 1e-15);
        let r = rho(&pair(zeros(1), rmat(1, 1, &[0.5])));
        assert!((r[(0, 0)].re - 1.5).abs() < 1e-15);
        let r = rho(&pair(zeros(1), rmat(1, 1, &[-1.0])));
        assert!(r[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn rho_scan_examples() {
        // ρ(0, 0) = 2I at every α, above the 2(1 − 0.999⁴) floor.
        let m = rho_scan(&pair(zeros(2), zeros(2)), ScanGrid::default());
        assert!(m >= 2.0 * (1.0 - 0.999_f64.powi(4)));
        assert!((m - 2.0).abs() < 1e-14);
        assert!(rho_scan(&pair(s_eps(1.0 / 1.3), zeros(2)), ScanGrid::default()) >= -1e-8);
        // ρ(3α, 0) = 2 − 6 Re α: negative once Re α > 1/3.
        let m = rho_scan(&pair(identity(1) * c64(3.0, 0.0), zeros(1)), ScanGrid::default());
        assert!(m < -1e-8);
        assert!((m - (2.0 - 6.0 * 0.999)).abs() < 1e-12);
    }

    #[test]
    fn fundamental_operator_examples() {
        let eps = 1.0 / 1.3;
        let fo = fundamental_operator(&pair(s_eps(eps), zeros(2))).unwrap();
        assert!((fo.full() - s_eps(eps)).norm() < 1e-12);
        assert!((fo.omega - eps * (SQRT_2 + 1.0) / 2.0).abs() < 1e-10);
        assert!(fo.omega < 1.0);

        let fo = fundamental_operator(&pair(zeros(2), rmat(2, 2, &[0.3, 0.1, 0.0, 0.2]))).unwrap();
        assert!(fo.f.norm() < 1e-14 && fo.omega == 0.0);

        let p = rmat(1, 1, &[1.5]);
        assert!(matches!(fundamental_operator(&pair(zeros(1), p)), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn unitary_p_has_trivial_defect() {
        let s = rmat(1, 1, &[0.0]);
        let p = rmat(1, 1, &[-1.0]);
        let fo = fundamental_operator(&pair(s, p)).unwrap();
        assert_eq!(fo.defect_dim(), 0);
        assert_eq!(fo.omega, 0.0);
    }

    #[test]
    fn unsolvable_equation_is_reported() {
        // P unitary forces D_P = 0, but S − S*P = 2i ≠ 0 for S = i, P = 1.
        let s = cmat(1, 1, &[(0.0, 1.0)]);
        let p = rmat(1, 1, &[1.0]);
        assert!(matches!(fundamental_operator(&pair(s.clone(), p.clone())), Err(Error::NotSolvable { .. })));
        let report = is_gamma_contraction(&pair(s, p)).unwrap();
        assert_eq!(report.overall, Verdict::CertifiedNot);
        assert!(report.violations.iter().any(|v| v == VIOLATION_SOLVABLE));
    }

    #[test]
    fn gamma_contraction_examples() {
        let t1 = cmat(2, 2, &[(0.5, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.2)]);
        let t2 = rmat(2, 2, &[-0.1, 0.0, 0.0, 0.3]);
        assert!(is_gamma_contraction(&symmetrized(&t1, &t2)).unwrap().is_certified());

        let r = 0.005;
        let s_r = rmat(2, 2, &[r * r / 2.0, 2.0 - r, 0.0, r * r / 2.0]);
        assert!(is_gamma_contraction(&pair(s_r, zeros(2))).unwrap().is_certified());

        let report = is_gamma_contraction(&pair(identity(2) * c64(2.5, 0.0), zeros(2))).unwrap();
        assert_eq!(report.overall, Verdict::CertifiedNot);
        assert!(report.violations.iter().any(|v| v == VIOLATION_S_NORM));
    }

    #[test]
    fn just_above_norm_bound_is_named() {
        let report = is_gamma_contraction(&pair(identity(2) * c64(2.0001, 0.0), zeros(2))).unwrap();
        assert_eq!(report.overall, Verdict::CertifiedNot);
        assert!(report.violations.iter().any(|v| v == VIOLATION_S_NORM));
    }

    #[test]
    fn non_commuting_input_is_an_error() {
        let p = OperatorPair { s: rmat(2, 2, &[0.0, 1.0, 0.0, 0.0]), p: rmat(2, 2, &[1.0, 0.0, 0.0, 0.0]), tol: tol() };
        assert!(matches!(is_gamma_contraction(&p), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn strict_criterion_examples() {
        let eps = 1.0 / 1.3;
        let sc = is_gamma_contraction_strict(&pair(s_eps(eps), zeros(2))).unwrap();
        assert!(sc.holds);
        assert!((sc.value - eps * (SQRT_2 + 1.0) / 2.0).abs() < 1e-10);
        let sc = is_gamma_contraction_strict(&pair(zeros(1), rmat(1, 1, &[0.5]))).unwrap();
        assert!(sc.holds && sc.value.abs() < 1e-15);
        let sc = is_gamma_contraction_strict(&pair(rmat(1, 1, &[1.9]), zeros(1))).unwrap();
        assert!(!sc.holds && (sc.value - 1.9).abs() < 1e-12);
        assert!(matches!(
            is_gamma_contraction_strict(&pair(zeros(1), rmat(1, 1, &[1.0]))),
            Err(Error::StrictPreconditionFailed(_))
        ));
    }

    fn unitary_pair(u1: &ComplexMatrix, u2: &ComplexMatrix) -> OperatorPair {
        symmetrized(u1, u2)
    }

    #[test]
    fn gamma_unitary_examples() {
        let i = c64(0.0, 1.0);
        let u1 = diag(&[c64(1.0, 0.0), i]);
        let u2 = diag(&[c64(-1.0, 0.0), Complex64::from_polar(1.0, PI / 3.0)]);
        let pr = unitary_pair(&u1, &u2);
        assert!(is_gamma_unitary(&pr, UnitaryMethod::Algebraic));
        assert!(is_gamma_unitary(&pr, UnitaryMethod::NewChar));
        assert!(is_gamma_isometry(&pr));

        let scalar = pair(zeros(1), rmat(1, 1, &[-1.0]));
        assert!(is_gamma_unitary(&scalar, UnitaryMethod::Algebraic));
        assert!(is_gamma_unitary(&scalar, UnitaryMethod::NewChar));

        let not = pair(s_eps(1.0 / 1.3), zeros(2));
        assert!(!is_gamma_unitary(&not, UnitaryMethod::Algebraic));
        assert!(!is_gamma_unitary(&not, UnitaryMethod::NewChar));
        assert!(!is_gamma_isometry(&not));
    }

    #[test]
    fn joint_spectrum_of_unitary_example() {
        let i = c64(0.0, 1.0);
        let u1 = diag(&[c64(1.0, 0.0), i]);
        let u2 = diag(&[c64(-1.0, 0.0), i]);
        let pr = unitary_pair(&u1, &u2);
        let js = joint_spectrum(&pr.s, &pr.p, &pr.tol).unwrap();
        let expect = [(c64(0.0, 0.0), c64(-1.0, 0.0)), (c64(0.0, 2.0), c64(-1.0, 0.0))];
        for e in expect {
            assert!(js.iter().any(|&(l, m)| (l - e.0).norm() < 1e-12 && (m - e.1).norm() < 1e-12));
        }
    }

    #[test]
    fn unitary_methods_agree_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for trial in 0..100 {
            let n = 1 + trial % 4;
            let (u1, u2) = sample::commuting_unitaries(&mut rng, n);
            let pr = unitary_pair(&u1, &u2);
            assert!(is_gamma_unitary(&pr, UnitaryMethod::Algebraic));
            assert!(is_gamma_unitary(&pr, UnitaryMethod::NewChar));
            // Matrix Γ-isometries are Γ-unitaries.
            assert!(is_gamma_isometry(&pr));

            let (t1, t2) = sample::commuting_contractions(&mut rng, n);
            let np = symmetrized(&t1, &t2);
            let a = is_gamma_unitary(&np, UnitaryMethod::Algebraic);
            assert_eq!(a, is_gamma_unitary(&np, UnitaryMethod::NewChar));
            assert!(!a);
            assert!(!is_gamma_isometry(&np) || is_gamma_unitary(&np, UnitaryMethod::Algebraic));
        }
    }

    #[test]
    fn hyponormal_transfer_examples() {
        let i = c64(0.0, 1.0);
        let pr = unitary_pair(&diag(&[c64(1.0, 0.0), i]), &diag(&[c64(-1.0, 0.0), i]));
        assert!(hyponormal_transfer_check(&pr).unwrap() <= 1e-10);
        let p = rmat(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert_eq!(hyponormal_transfer_check(&pair(zeros(2), p.clone())).unwrap(), 0.0);

        // Non-normal block with a unimodular scalar summand: S = S*P holds
        // with S nonzero on the scalar part.
        let phi = 0.7_f64;
        let u = Complex64::from_polar(1.0, phi);
        let s0 = Complex64::from_polar(2.0 * (phi / 2.0).cos(), phi / 2.0);
        let big_p = direct_sum(&diag(&[u]), &p);
        let big_s = direct_sum(&diag(&[s0]), &zeros(2));
        assert!(hyponormal_transfer_check(&pair(big_s, big_p)).unwrap() <= 1e-10);

        let bad = pair(rmat(1, 1, &[0.5]), rmat(1, 1, &[0.5]));
        assert!(matches!(hyponormal_transfer_check(&bad), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn random_symmetrizations_certify() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for trial in 0..60 {
            let n = 1 + trial % 5;
            let (t1, t2) = sample::commuting_contractions(&mut rng, n);
            let pr = symmetrized(&t1, &t2);
            let report = is_gamma_contraction(&pr).unwrap();
            assert!(report.is_certified(), "trial {trial}: {report:?}");
            assert!(report.rho_min >= -1e-8);
            let fo = fundamental_operator(&pr).unwrap();
            assert!(fo.residual <= 1e-8 && fo.omega <= 1.0 + 1e-8 && fo.path_gap <= 1e-7);
            let fa = fundamental_operator(&pr.adjoint()).unwrap();
            assert!(fa.residual <= 1e-8 && fa.omega <= 1.0 + 1e-8);
            if let Ok(sc) = is_gamma_contraction_strict(&pr) {
                assert!(sc.holds);
            }
            // Joint-spectrum necessity.
            for (l, m) in joint_spectrum(&pr.s, &pr.p, &pr.tol).unwrap() {
                assert!(max_root_modulus(PointPair::new(l, m)) <= 1.0 + 1e-4);
            }
        }
    }

    #[test]
    fn strict_agrees_with_full_criterion_on_mixed_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let mut compared = 0;
        for trial in 0..80 {
            let n = 1 + trial % 3;
            let (t1, t2) = sample::commuting_contractions(&mut rng, n);
            // Inflate some pairs past the boundary.
            let k = 0.6 + 0.8 * (trial as f64 / 80.0);
            let pr = pair((&t1 + &t2) * c64(k, 0.0), &t1 * &t2 * c64(k * k * 0.9, 0.0));
            let report = is_gamma_contraction(&pr).unwrap();
            if let Ok(sc) = is_gamma_contraction_strict(&pr) {
                if report.overall != Verdict::Inconclusive {
                    assert_eq!(sc.holds, report.is_certified(), "trial {trial}: {report:?}");
                    compared += 1;
                }
            }
        }
        assert!(compared > 40);
    }
}
