use serde::Serialize;

use super::matrix::DVRMatrix;
use super::poly::{ValPoly, EXACT};
use crate::error::{Error, Result};

/// Valuations of the nonzero invariant factors plus the free rank of the cokernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantFactors {
    pub exponents: Vec<u32>,
    pub free_rank: usize,
}

/// Full Smith decomposition `U · m · V = diag(d_1, ..., d_rank, 0, ...)`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Pivot valuations in elimination order (nondecreasing).
    pub exponents: Vec<u32>,
    pub pivots: Vec<ValPoly>,
    pub rank: usize,
    pub u: DVRMatrix,
    pub v: DVRMatrix,
    pub v_inv: DVRMatrix,
    /// True when the unreduced block is exactly zero rather than zero to working precision.
    pub tail_exact: bool,
}

impl Smith {
    pub fn compute(m: &DVRMatrix) -> Result<Smith> {
        let trunc = m.trunc();
        let (r, c) = (m.rows(), m.cols());
        let mut a = m.clone();
        let mut u = DVRMatrix::identity(r, trunc);
        let mut v = DVRMatrix::identity(c, trunc);
        let mut v_inv = DVRMatrix::identity(c, trunc);
        let mut exponents = Vec::new();
        let mut pivots = Vec::new();
        let mut k = 0;
        while k < r.min(c) {
            // minimal-valuation pivot, lexicographic tie-break
            let mut best: Option<(u32, usize, usize)> = None;
            let mut min_unknown = EXACT;
            for i in k..r {
                for j in k..c {
                    let e = a.get(i, j);
                    match e.valuation() {
                        Some(val) => {
                            if best.map_or(true, |(bv, _, _)| val < bv) {
                                best = Some((val, i, j));
                            }
                        }
                        None => min_unknown = min_unknown.min(e.precision()),
                    }
                }
            }
            let Some((val, pi, pj)) = best else { break };
            if min_unknown < val || val + 1 >= trunc {
                return Err(Error::TruncationUnstable(trunc));
            }
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            v_inv.swap_rows(k, pj);
            let p = a.get(k, k).clone();
            for i in k + 1..r {
                let e = a.get(i, k);
                if e.is_exact_zero() {
                    continue;
                }
                let f = e.div(&p, trunc).ok_or(Error::TruncationUnstable(trunc))?;
                a.row_axpy(i, k, &f, k);
                u.row_axpy(i, k, &f, 0);
                a.set(i, k, ValPoly::zero());
            }
            for j in k + 1..c {
                let e = a.get(k, j);
                if e.is_exact_zero() {
                    continue;
                }
                let f = e.div(&p, trunc).ok_or(Error::TruncationUnstable(trunc))?;
                v.col_axpy(j, k, &f);
                // inverse of a column operation is the opposite row operation
                v_inv.row_axpy(k, j, &f.neg(), 0);
                a.set(k, j, ValPoly::zero());
            }
            exponents.push(val);
            pivots.push(p);
            k += 1;
        }
        let mut tail_exact = true;
        for i in k..r {
            for j in k..c {
                if !a.get(i, j).is_exact_zero() {
                    tail_exact = false;
                }
            }
        }
        Ok(Smith { exponents, pivots, rank: k, u, v, v_inv, tail_exact })
    }
}

/// Invariant factors of `m`; fails when the cokernel cannot be pinned down at this precision.
pub fn smith_over_dvr(m: &DVRMatrix) -> Result<InvariantFactors> {
    let s = Smith::compute(m)?;
    if !s.tail_exact {
        return Err(Error::TruncationUnstable(m.trunc()));
    }
    Ok(InvariantFactors { exponents: s.exponents, free_rank: m.cols() - s.rank })
}

/// A free basis of the kernel, as columns. Entries indistinguishable from zero
/// at working precision count as zero.
pub fn kernel_basis(m: &DVRMatrix) -> Result<Vec<Vec<ValPoly>>> {
    let s = Smith::compute(m)?;
    Ok((s.rank..m.cols()).map(|j| s.v.column(j)).collect())
}

/// One solution of `m · x = rhs`, or `None` when no integral solution exists.
pub fn solve_linear(m: &DVRMatrix, rhs: &[ValPoly]) -> Result<Option<Vec<ValPoly>>> {
    let s = Smith::compute(m)?;
    solve_with(&s, m, rhs)
}

pub(crate) fn solve_with(s: &Smith, m: &DVRMatrix, rhs: &[ValPoly]) -> Result<Option<Vec<ValPoly>>> {
    let trunc = m.trunc();
    let ub = s.u.mul_vec(rhs);
    let mut w = vec![ValPoly::zero(); m.cols()];
    for i in 0..s.rank {
        match ub[i].div(&s.pivots[i], trunc) {
            Some(q) => w[i] = q,
            None if ub[i].is_zero() => {}
            None => return Ok(None),
        }
    }
    if ub[s.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(s.v.mul_vec(&w)))
}
