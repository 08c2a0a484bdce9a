//! Matrix square roots: the PSD root of a Hermitian matrix and primary
//! square roots of general matrices via Schur form and the Parlett-type
//! recurrence `R_ij = (T_ij - Σ R_ik R_kj) / (R_ii + R_jj)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{c64, diag, ensure_square, hermitian_defect, hermitian_eigen, op_norm, ComplexMatrix, Schur, Tolerances};
use crate::error::{Error, Result};

/// Eigenvalues closer than this relative distance share a branch.
const CLUSTER_REL_TOL: f64 = 1e-8;

/// Unique PSD square root of a Hermitian matrix.
///
/// Eigenvalues in `[-assert_tol, 0)` are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    ensure_square(a)?;
    let defect = hermitian_defect(a);
    if defect > tol.assert_tol {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = hermitian_eigen(a);
    if let Some(&min) = values.first() {
        if min < -tol.assert_tol {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let roots: Vec<Complex64> = values.iter().map(|&v| c64(v.max(0.0).sqrt(), 0.0)).collect();
    Ok(&vectors * diag(&roots) * vectors.adjoint())
}

/// Branch selector for one eigenvalue cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Sign::Plus => z,
            Sign::Minus => -z,
        }
    }
}

/// A group of (numerically) equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    pub center: Complex64,
    pub multiplicity: usize,
    /// Cluster at the origin; its square root is zero on every branch.
    pub is_zero: bool,
}

/// Reordered Schur form of `M` with eigenvalue clusters made contiguous,
/// ready to evaluate any branch of the primary square root.
#[derive(Debug, Clone)]
pub struct PrimarySqrtPlan {
    m: ComplexMatrix,
    schur: Schur,
    /// Cluster index of each diagonal position of `schur.t`.
    labels: Vec<usize>,
    clusters: Vec<EigenCluster>,
    m_norm: f64,
    tol: Tolerances,
}

/// Principal square root with the branch cut on the negative real axis;
/// a negative zero imaginary part is treated as positive.
fn principal_sqrt(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 { c64(z.re, 0.0) } else { z };
    z.sqrt()
}

impl PrimarySqrtPlan {
    pub fn new(m: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = ensure_square(m)?;
        let mut schur = Schur::new(m)?;
        let m_norm = op_norm(m);
        let eigs = schur.eigenvalues();
        let zero_floor = 64.0 * f64::EPSILON * (n as f64) * m_norm.max(f64::MIN_POSITIVE);

        // Single-linkage clustering.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        let near = |a: Complex64, b: Complex64| {
            let both_zero = a.norm() <= zero_floor && b.norm() <= zero_floor;
            both_zero || (a - b).norm() <= CLUSTER_REL_TOL * a.norm().max(b.norm())
        };
        for i in 0..n {
            for j in i + 1..n {
                if near(eigs[i], eigs[j]) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &r) in roots.iter().enumerate() {
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, members)) => members.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        let mut clusters: Vec<(EigenCluster, Vec<usize>)> = groups
            .into_iter()
            .map(|(_, members)| {
                let sum: Complex64 = members.iter().map(|&i| eigs[i]).sum();
                let center = sum / members.len() as f64;
                let is_zero = members.iter().all(|&i| eigs[i].norm() <= zero_floor);
                (EigenCluster { center, multiplicity: members.len(), is_zero }, members)
            })
            .collect();
        // Canonical order: zero cluster first, then by (re, im).
        clusters.sort_by(|(a, _), (b, _)| {
            b.is_zero
                .cmp(&a.is_zero)
                .then(a.center.re.total_cmp(&b.center.re))
                .then(a.center.im.total_cmp(&b.center.im))
        });
        let mut labels = vec![0usize; n];
        for (idx, (_, members)) in clusters.iter().enumerate() {
            for &i in members {
                labels[i] = idx;
            }
        }

        // Bubble the diagonal into cluster order; equal labels are never
        // swapped (ill-conditioned and unnecessary).
        for pass in 0..n {
            let mut swapped = false;
            for k in 0..n.saturating_sub(1 + pass) {
                if labels[k] > labels[k + 1] {
                    schur.swap(k);
                    labels.swap(k, k + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }

        Ok(Self {
            m: m.clone(),
            schur,
            labels,
            clusters: clusters.into_iter().map(|(c, _)| c).collect(),
            m_norm,
            tol: *tol,
        })
    }

    /// Eigenvalue clusters in the order branch signs refer to.
    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    /// Primary square root on the branch selected per cluster
    /// (`None` = principal branch everywhere).
    pub fn root(&self, signs: Option<&[Sign]>) -> Result<ComplexMatrix> {
        if let Some(s) = signs {
            if s.len() != self.clusters.len() {
                return Err(Error::InvalidArgument(format!(
                    "expected {} branch signs, got {}",
                    self.clusters.len(),
                    s.len()
                )));
            }
        }
        let t = &self.schur.t;
        let n = t.nrows();
        let mut r = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let label = self.labels[i];
            if self.clusters[label].is_zero {
                continue;
            }
            let sign = signs.map_or(Sign::Plus, |s| s[label]);
            r[(i, i)] = sign.apply(principal_sqrt(t[(i, i)]));
        }
        let numerator_floor = self.tol.assert_tol * (1.0 + self.m_norm);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut num = t[(i, j)];
                for k in i + 1..j {
                    num -= r[(i, k)] * r[(k, j)];
                }
                let den = r[(i, i)] + r[(j, j)];
                if den.norm() < self.tol.rank_cutoff {
                    let same_cluster = self.labels[i] == self.labels[j];
                    if same_cluster && num.norm() <= numerator_floor {
                        // Semisimple zero eigenvalue: the root vanishes here.
                        continue;
                    }
                    return Err(Error::NoPrimarySqrt(format!(
                        "recurrence divisor {:.3e} below cutoff at ({i}, {j})",
                        den.norm()
                    )));
                }
                r[(i, j)] = num / den;
            }
        }
        let q = &self.schur.q;
        let root = q * r * q.adjoint();
        let err = op_norm(&(&root * &root - &self.m));
        if err > self.tol.assert_tol * (1.0 + self.m_norm) {
            return Err(Error::NoPrimarySqrt(format!("square of computed root misses M by {err:.3e}")));
        }
        Ok(root)
    }
}

/// Primary square root of `m`; `branch_signs` selects ± per eigenvalue
/// cluster (see [`PrimarySqrtPlan::clusters`]), default all `+`.
pub fn primary_sqrt(m: &ComplexMatrix, branch_signs: Option<&[Sign]>, tol: &Tolerances) -> Result<ComplexMatrix> {
    PrimarySqrtPlan::new(m, tol)?.root(branch_signs)
}
