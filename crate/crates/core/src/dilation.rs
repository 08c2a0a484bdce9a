//! Truncations of the minimal Γ-unitary dilation `(T0, U0)` built from the
//! fundamental operators of `(S, P)` and `(S*, P*)`.
//!
//! The dilation space is `… ⊕ 𝒟_P ⊕ 𝒟_P ⊕ H ⊕ 𝒟_{P*} ⊕ 𝒟_{P*} ⊕ …`. Blocks
//! are indexed `−N..=N` with `H` at 0; defect blocks are written in the
//! orthonormal defect bases, so a block of index `j < 0` has dimension
//! `dim 𝒟_P` and one of index `j > 0` has dimension `dim 𝒟_{P*}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, diag, identity, op_norm, ComplexMatrix};
use crate::pair::{fundamental_operator, FundamentalOp, OperatorPair};

#[derive(Debug, Clone)]
pub struct DilationTruncation {
    /// Number of defect blocks on each side of `H`.
    pub blocks: usize,
    pub t0: ComplexMatrix,
    pub u0: ComplexMatrix,
    /// Row/column index where the `H` block starts.
    pub center_offset: usize,
    pub dim_h: usize,
    pub f: FundamentalOp,
    pub fstar: FundamentalOp,
}

impl DilationTruncation {
    pub fn dim(&self) -> usize {
        self.t0.nrows()
    }

    /// Index range of block `j` (`−N ≤ j ≤ N`).
    pub fn block_range(&self, j: isize) -> std::ops::Range<usize> {
        layout(self.blocks, self.f.defect_dim(), self.dim_h, self.fstar.defect_dim(), j)
    }
}

fn layout(blocks: usize, k: usize, n: usize, kstar: usize, j: isize) -> std::ops::Range<usize> {
    let nb = blocks as isize;
    assert!((-nb..=nb).contains(&j), "block {j} outside −{blocks}..={blocks}");
    let left = blocks * k;
    if j < 0 {
        let start = (j + nb) as usize * k;
        start..start + k
    } else if j == 0 {
        left..left + n
    } else {
        let start = left + n + (j as usize - 1) * kstar;
        start..start + kstar
    }
}

/// Assembles `T0` and `U0` cut to blocks `−N..=N`.
///
/// `F` and `F*` are computed here; an unsolvable fundamental equation for
/// either pair is returned as `NotSolvable`. Certification of the pair is
/// the caller's business.
pub fn build_dilation(pair: &OperatorPair, blocks: usize) -> Result<DilationTruncation> {
    if blocks == 0 {
        return Err(Error::InvalidArgument("need at least one block on each side".into()));
    }
    let f = fundamental_operator(pair)?;
    let fstar = fundamental_operator(&pair.adjoint())?;
    let (n, k, kstar) = (pair.dim(), f.defect_dim(), fstar.defect_dim());
    let total = blocks * (k + kstar) + n;
    let range = |j: isize| layout(blocks, k, n, kstar, j);

    let v = &f.defect_basis;
    let vs = &fstar.defect_basis;
    let lambda = diag(&f.defect_values.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
    let lambda_s = diag(&fstar.defect_values.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
    // D_P : H → 𝒟_P, D_{P*} : 𝒟_{P*} → H and P* : 𝒟_{P*} → 𝒟_P in coordinates.
    let dp = &lambda * v.adjoint();
    let dps = vs * &lambda_s;
    let p_adj = v.adjoint() * pair.p.adjoint() * vs;
    let f_adj = f.f.adjoint();
    let fs_adj = fstar.f.adjoint();

    let mut t0 = ComplexMatrix::zeros(total, total);
    let mut u0 = ComplexMatrix::zeros(total, total);
    let put = |m: &mut ComplexMatrix, i: isize, j: isize, block: &ComplexMatrix| {
        let (r, c) = (range(i), range(j));
        m.view_mut((r.start, c.start), (r.len(), c.len())).copy_from(block);
    };
    let nb = blocks as isize;
    for j in -nb..=-2 {
        put(&mut t0, j, j, &f.f);
        put(&mut t0, j, j + 1, &f_adj);
        put(&mut u0, j, j + 1, &identity(k));
    }
    put(&mut t0, -1, -1, &f.f);
    put(&mut t0, -1, 0, &(&f_adj * &dp));
    put(&mut t0, -1, 1, &-(&f_adj * &p_adj));
    put(&mut u0, -1, 0, &dp);
    put(&mut u0, -1, 1, &-&p_adj);

    put(&mut t0, 0, 0, &pair.s);
    put(&mut t0, 0, 1, &(&dps * &fstar.f));
    put(&mut u0, 0, 0, &pair.p);
    put(&mut u0, 0, 1, &dps);

    for j in 1..=nb {
        put(&mut t0, j, j, &fs_adj);
        if j < nb {
            put(&mut t0, j, j + 1, &fstar.f);
            put(&mut u0, j, j + 1, &identity(kstar));
        }
    }
    Ok(DilationTruncation { blocks, t0, u0, center_offset: blocks * k, dim_h: n, f, fstar })
}

/// Largest `‖P_H w(T0, U0)|_H − w(S, P)‖` over all words `w` in two letters
/// of length at most `max_total_degree`.
pub fn verify_dilation(pair: &OperatorPair, blocks: usize, max_total_degree: usize) -> Result<f64> {
    if max_total_degree >= blocks {
        return Err(Error::DegreeTooHigh { degree: max_total_degree, blocks });
    }
    let trunc = build_dilation(pair, blocks)?;
    Ok(compression_residual(&trunc, &pair.s, &pair.p, max_total_degree))
}

/// Same as [`verify_dilation`] on an already built truncation.
pub fn compression_residual(
    trunc: &DilationTruncation,
    s: &ComplexMatrix,
    p: &ComplexMatrix,
    max_degree: usize,
) -> f64 {
    let h = trunc.block_range(0);
    let mut start = ComplexMatrix::zeros(trunc.dim(), h.len());
    start.view_mut((h.start, 0), (h.len(), h.len())).copy_from(&identity(h.len()));
    let mut worst = 0.0_f64;
    // Depth-first over words; `big` is w(T0, U0) applied to the H columns.
    let mut stack = vec![(start, identity(h.len()), 0usize)];
    while let Some((big, small, depth)) = stack.pop() {
        let compressed = big.rows(h.start, h.len());
        worst = worst.max(op_norm(&(compressed - &small)));
        if depth < max_degree {
            stack.push((&trunc.t0 * &big, s * &small, depth + 1));
            stack.push((&trunc.u0 * &big, p * &small, depth + 1));
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralCheck {
    /// `‖U0*U0 − I‖` on the central blocks.
    pub isometry: f64,
    /// `‖U0U0* − I‖`.
    pub co_isometry: f64,
    /// `‖U0*T0 − T0*‖`.
    pub adjoint_relation: f64,
    /// `‖T0U0 − U0T0‖`.
    pub commutator: f64,
    pub t0_norm: f64,
    pub u0_norm: f64,
    pub max_violation: f64,
}

/// Γ-unitary relations of `(T0, U0)` restricted to the blocks at distance
/// at least one from either end of the truncation. Every product entry
/// there only involves blocks inside the window, so the values are those
/// of the untruncated operators.
pub fn central_gamma_unitary_check(trunc: &DilationTruncation) -> CentralCheck {
    let nb = trunc.blocks as isize;
    let inner = (nb - 1).max(0);
    let lo = trunc.block_range(-inner).start;
    let hi = trunc.block_range(inner).end;
    let len = hi - lo;
    let central = |m: ComplexMatrix| m.view((lo, lo), (len, len)).into_owned();
    let id = identity(len);
    let (t0, u0) = (&trunc.t0, &trunc.u0);
    let isometry = op_norm(&(central(u0.adjoint() * u0) - &id));
    let co_isometry = op_norm(&(central(u0 * u0.adjoint()) - &id));
    let adjoint_relation = op_norm(&(central(u0.adjoint() * t0) - central(t0.adjoint())));
    let commutator = op_norm(&central(t0 * u0 - u0 * t0));
    let max_violation = isometry.max(co_isometry).max(adjoint_relation).max(commutator);
    CentralCheck {
        isometry,
        co_isometry,
        adjoint_relation,
        commutator,
        t0_norm: op_norm(t0),
        u0_norm: op_norm(u0),
        max_violation,
    }
}
