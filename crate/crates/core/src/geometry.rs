//! Point geometry of the symmetrized bidisc `Γ = π(D̄²)`, `π(z1, z2) = (z1 + z2, z1 z2)`.
//!
//! Every inequality `x ≤ c` is tested as `x ≤ c + BAND` and every
//! equality as `|difference| ≤ BAND`, so points built from unimodular
//! fibers land on the distinguished boundary despite rounding.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance band on every scalar (in)equality.
pub const BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointPair {
    pub s: Complex64,
    pub p: Complex64,
}

impl PointPair {
    pub fn new(s: Complex64, p: Complex64) -> Self {
        Self { s, p }
    }

    /// `s - s̄p`, the quantity shared by most characterizations.
    fn moebius_numerator(&self) -> Complex64 {
        self.s - self.s.conj() * self.p
    }

    fn discriminant(&self) -> Complex64 {
        self.s * self.s - self.p * 4.0
    }
}

pub fn symmetrize_point(z1: Complex64, z2: Complex64) -> PointPair {
    PointPair::new(z1 + z2, z1 * z2)
}

/// Roots of `z² - sz + p`, as both orderings.
///
/// The larger root comes from `(s ± √disc)/2` with the sign avoiding
/// cancellation; the other is `p` divided by it.
pub fn fibers(pt: PointPair) -> ((Complex64, Complex64), (Complex64, Complex64)) {
    let (z1, z2) = roots(pt);
    ((z1, z2), (z2, z1))
}

fn roots(pt: PointPair) -> (Complex64, Complex64) {
    let sq = pt.discriminant().sqrt();
    let sq = if (pt.s.conj() * sq).re >= 0.0 { sq } else { -sq };
    let z1 = (pt.s + sq) * 0.5;
    if z1.norm() == 0.0 {
        // z1 = 0 forces s = 0 and disc = 0, hence p = 0.
        return (z1, z1);
    }
    (z1, pt.p / z1)
}

/// Largest root modulus of `z² - sz + p`; `pt ∈ Γ` iff it is at most 1.
pub fn max_root_modulus(pt: PointPair) -> f64 {
    root_moduli(pt).0
}

fn root_moduli(pt: PointPair) -> (f64, f64) {
    let (a, b) = roots(pt);
    let (a, b) = (a.norm(), b.norm());
    (a.max(b), a.min(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GammaMethod {
    /// Both roots of `z² - sz + p` in the closed unit disc.
    Roots,
    /// `|s - s̄p| + |p|² ≤ 1` and `|s| ≤ 2`.
    MoebiusIi,
    /// `2|s - s̄p| + |s² - 4p| + |s|² ≤ 4`.
    SumIii,
    /// `|p| ≤ 1` and `s = β + β̄p` for some `|β| ≤ 1`.
    BetaIv,
}

impl GammaMethod {
    pub const ALL: [GammaMethod; 4] = [Self::Roots, Self::MoebiusIi, Self::SumIii, Self::BetaIv];

    pub fn name(self) -> &'static str {
        match self {
            Self::Roots => "roots",
            Self::MoebiusIi => "moebius",
            Self::SumIii => "sum",
            Self::BetaIv => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryMethod {
    /// In `Γ` with `|p| = 1`.
    Modulus,
    /// `s = s̄p` and `|s² - 4p| + |s|² = 4`.
    NewLemma,
}

/// The witness `β` with `s = β + β̄p`, if one with `|β| ≤ 1 + BAND` exists.
///
/// For `|p| < 1` it is unique, `β = (s - s̄p)/(1 - |p|²)`. On `|p| = 1` the
/// formula degenerates and membership reduces to `s = s̄p, |s| ≤ 2`, where
/// `β = s/2` works.
pub fn beta_witness(pt: PointPair) -> Option<Complex64> {
    let modp = pt.p.norm();
    if (modp - 1.0).abs() <= BAND {
        let ok = pt.moebius_numerator().norm() <= BAND && pt.s.norm() <= 2.0 + BAND;
        return ok.then_some(pt.s * 0.5);
    }
    if modp > 1.0 {
        return None;
    }
    let beta = pt.moebius_numerator() / (1.0 - modp * modp);
    (beta.norm() <= 1.0 + BAND).then_some(beta)
}

pub fn in_gamma(pt: PointPair, method: GammaMethod) -> bool {
    match method {
        GammaMethod::Roots => root_moduli(pt).0 <= 1.0 + BAND,
        GammaMethod::MoebiusIi => {
            pt.moebius_numerator().norm() + pt.p.norm_sqr() <= 1.0 + BAND && pt.s.norm() <= 2.0 + BAND
        }
        GammaMethod::SumIii => {
            2.0 * pt.moebius_numerator().norm() + pt.discriminant().norm() + pt.s.norm_sqr() <= 4.0 + BAND
        }
        GammaMethod::BetaIv => beta_witness(pt).is_some(),
    }
}

pub fn in_b_gamma(pt: PointPair, method: BoundaryMethod) -> bool {
    match method {
        BoundaryMethod::Modulus => in_gamma(pt, GammaMethod::Roots) && (pt.p.norm() - 1.0).abs() <= BAND,
        BoundaryMethod::NewLemma => {
            pt.moebius_numerator().norm() <= BAND && (pt.discriminant().norm() + pt.s.norm_sqr() - 4.0).abs() <= BAND
        }
    }
}

/// `Γ ∖ bΓ`: `|p| ≠ 1` and `|s - s̄p| + |p|² ≤ 1`.
pub fn in_gamma_minus_b(pt: PointPair) -> bool {
    (pt.p.norm() - 1.0).abs() > BAND && pt.moebius_numerator().norm() + pt.p.norm_sqr() <= 1.0 + BAND
}

/// Symmetrized half-bidisc: `(s, p) ∈ Γ̂` iff `(2s, 4p) ∈ Γ`.
pub fn in_half_gamma(pt: PointPair) -> bool {
    in_gamma(PointPair::new(pt.s * 2.0, pt.p * 4.0), GammaMethod::Roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    OpenG,
    DistBoundary,
    GammaNotB,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub s: Complex64,
    pub p: Complex64,
    pub region: Region,
    /// `β` with `s = β + β̄p`.
    pub beta_witness: Option<Complex64>,
    /// The same witness in the convention `s = β̄ + βp` (its conjugate).
    pub beta_witness_conjugate: Option<Complex64>,
    /// Root moduli of `z² - sz + p`, larger first.
    pub root_moduli: (f64, f64),
    pub per_method_verdicts: BTreeMap<String, bool>,
}

pub fn classify(pt: PointPair) -> MembershipReport {
    let moduli = root_moduli(pt);
    let region = if moduli.0 < 1.0 - BAND {
        Region::OpenG
    } else if in_b_gamma(pt, BoundaryMethod::Modulus) {
        Region::DistBoundary
    } else if moduli.0 <= 1.0 + BAND {
        Region::GammaNotB
    } else {
        Region::Outside
    };
    let beta = beta_witness(pt);
    let mut verdicts = BTreeMap::new();
    for m in GammaMethod::ALL {
        verdicts.insert(format!("gamma_{}", m.name()), in_gamma(pt, m));
    }
    // Existence of β is symmetric under conjugation, so both conventions
    // share one verdict; it is recorded twice for traceability.
    verdicts.insert("gamma_beta_conjugate".into(), beta.map(|b| b.conj()).is_some());
    verdicts.insert("b_gamma_modulus".into(), in_b_gamma(pt, BoundaryMethod::Modulus));
    verdicts.insert("b_gamma_new_lemma".into(), in_b_gamma(pt, BoundaryMethod::NewLemma));
    verdicts.insert("gamma_minus_b".into(), in_gamma_minus_b(pt));
    verdicts.insert("half_gamma".into(), in_half_gamma(pt));
    MembershipReport {
        s: pt.s,
        p: pt.p,
        region,
        beta_witness: beta,
        beta_witness_conjugate: beta.map(|b| b.conj()),
        root_moduli: moduli,
        per_method_verdicts: verdicts,
    }
}

/// Distance of `pt` from the nearest defining equality of any
/// characterization. Points closer than a chosen band are where rounding
/// may legitimately split the methods.
pub fn boundary_margin(pt: PointPair) -> f64 {
    let num = pt.moebius_numerator().norm();
    let modp = pt.p.norm();
    let mut margins = vec![
        (root_moduli(pt).0 - 1.0).abs(),
        (num + modp * modp - 1.0).abs(),
        (pt.s.norm() - 2.0).abs(),
        (2.0 * num + pt.discriminant().norm() + pt.s.norm_sqr() - 4.0).abs(),
        (modp - 1.0).abs(),
    ];
    if modp < 1.0 {
        margins.push((num / (1.0 - modp * modp) - 1.0).abs());
    }
    margins.into_iter().fold(f64::INFINITY, f64::min)
}
