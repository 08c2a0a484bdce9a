//! Complex Schur decomposition `A = Q T Q*` with `T` upper triangular.
//!
//! Householder reduction to Hessenberg form followed by single-shift
//! implicit QR sweeps (Wilkinson shift, exceptional shifts every tenth
//! iteration on a stalled window). Adjacent diagonal entries can be swapped
//! afterwards with [`Schur::swap`] to reorder eigenvalues.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Iteration budget per eigenvalue before giving up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary Schur vectors.
    pub q: ComplexMatrix,
    /// Upper-triangular Schur form.
    pub t: ComplexMatrix,
}

/// Plane rotation `[[c, s], [-conj(s), c]]` with real `c`.
#[derive(Debug, Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    /// Rotation sending `(x, y)` to `(r, 0)`.
    fn zeroing(x: Complex64, y: Complex64) -> Self {
        let ax = x.norm();
        let ay = y.norm();
        if ay == 0.0 {
            return Self { c: 1.0, s: ZERO };
        }
        if ax == 0.0 {
            return Self { c: 0.0, s: Complex64::new(1.0, 0.0) };
        }
        let rho = ax.hypot(ay);
        let phase = x / ax;
        Self { c: ax / rho, s: phase * y.conj() / rho }
    }

    /// `M <- G M` on rows `i`, `i + 1`, columns in `cols`.
    fn apply_rows(&self, m: &mut ComplexMatrix, i: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let a = m[(i, j)];
            let b = m[(i + 1, j)];
            m[(i, j)] = a * self.c + self.s * b;
            m[(i + 1, j)] = -self.s.conj() * a + b * self.c;
        }
    }

    /// `M <- M G*` on columns `j`, `j + 1`, rows in `rows`.
    fn apply_cols(&self, m: &mut ComplexMatrix, j: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let a = m[(i, j)];
            let b = m[(i, j + 1)];
            m[(i, j)] = a * self.c + b * self.s.conj();
            m[(i, j + 1)] = -a * self.s + b * self.c;
        }
    }
}

impl Schur {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::NotSquare { rows: n, cols: a.ncols() });
        }
        let (mut t, mut q) = hessenberg(a);
        if n > 1 {
            qr_iterate(&mut t, &mut q)?;
        }
        // Clean the strictly lower part left over from deflation.
        for j in 0..n {
            for i in j + 1..n {
                t[(i, j)] = ZERO;
            }
        }
        Ok(Self { q, t })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diagonal().iter().copied().collect()
    }

    /// Swaps the adjacent diagonal entries `k` and `k + 1`, keeping
    /// `Q T Q*` invariant.
    pub fn swap(&mut self, k: usize) {
        let n = self.t.nrows();
        assert!(k + 1 < n, "swap index out of range");
        let a = self.t[(k, k)];
        let b = self.t[(k + 1, k + 1)];
        // (t, b - a) spans the eigenvector of the 2x2 block for b.
        let g = Givens::zeroing(self.t[(k, k + 1)], b - a);
        g.apply_rows(&mut self.t, k, k..n);
        g.apply_cols(&mut self.t, k, 0..k + 2);
        g.apply_cols(&mut self.q, k, 0..n);
        self.t[(k, k)] = b;
        self.t[(k + 1, k + 1)] = a;
        self.t[(k + 1, k)] = ZERO;
    }
}

/// Householder reduction `A = Q H Q*` with `H` upper Hessenberg.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n, n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let beta = 2.0 / vnorm2;

        // H <- (I - beta v v*) H on rows k+1..n
        for j in 0..n {
            let mut dot = ZERO;
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + idx, j)];
            }
            let dot = dot * beta;
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= vi * dot;
            }
        }
        // H <- H (I - beta v v*), Q <- Q (I - beta v v*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut dot = ZERO;
                for (idx, vi) in v.iter().enumerate() {
                    dot += m[(i, k + 1 + idx)] * vi;
                }
                let dot = dot * beta;
                for (idx, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + idx)] -= dot * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let mu1 = mid + disc;
    let mu2 = mid - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<()> {
    let n = h.nrows();
    let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE * n as f64 / eps;
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total = 0usize;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;

    while hi > 0 {
        // Locate the start of the active unreduced window.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= eps * diag || sub <= tiny {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }

        stalled += 1;
        total += 1;
        if total > budget {
            return Err(Error::SchurFailed);
        }

        let mu = if stalled.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        // Implicit single-shift sweep over lo..=hi.
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let g = Givens::zeroing(x, y);
            let first_col = if k > lo { k - 1 } else { k };
            g.apply_rows(h, k, first_col..n);
            let last_row = (k + 2).min(hi);
            g.apply_cols(h, k, 0..last_row + 1);
            g.apply_cols(q, k, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    Ok(())
}
