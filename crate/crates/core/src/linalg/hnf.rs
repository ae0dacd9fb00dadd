use super::matrix::Matrix;
use crate::error::{LabError, Result};
use crate::padic::LocalScalar;

/// Canonical basis of the `O`-module spanned by a set of column vectors.
#[derive(Clone)]
pub struct Hnf<S> {
    /// `m x r` basis; column `j` has `p^{k_j}` in row `pivot_rows[j]`, exact
    /// zeros above it, and entries below reduced to digits under the pivot of
    /// their row.
    pub basis: Matrix<S>,
    pub pivot_rows: Vec<usize>,
    pub exponents: Vec<i64>,
}

impl<S: LocalScalar> Hnf<S> {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.pivot_rows.len() == self.basis.rows()
    }
}

impl<S: LocalScalar> std::fmt::Debug for Hnf<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hnf({:?}, exponents {:?})", self.basis, self.exponents)
    }
}

/// Column Hermite form over the valuation ring.
///
/// Rows are processed top to bottom. In each row the column of minimal
/// valuation (first such column on ties) becomes the pivot, is normalized to
/// `p^k`, and clears the row in the remaining columns. Afterwards each entry
/// below a pivot row is replaced by its residue mod that pivot, which makes the
/// basis a canonical function of the module.
pub fn hnf_basis<S: LocalScalar>(gens: &Matrix<S>) -> Result<Hnf<S>> {
    let field = gens.field().clone();
    let m = gens.rows();
    let mut pending: Vec<Vec<S>> = gens.columns();
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut exponents = Vec::new();
    for i in 0..m {
        let best = pending
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c[i].valuation().map(|v| (v, j)))
            .min();
        let Some((k, j)) = best else {
            if pending.iter().any(|c| !c[i].is_exact_zero()) {
                return Err(LabError::PrecisionExhausted("lattice generators degenerate at precision"));
            }
            continue;
        };
        let mut col = pending.remove(j);
        let unit_inv = col[i].scale_p(-k).inv()?;
        for x in col.iter_mut() {
            *x = x.mul_ref(&unit_inv);
        }
        col[i] = S::p_pow(&field, k);
        let pivot_inv = col[i].inv()?;
        for other in pending.iter_mut() {
            if other[i].is_exact_zero() {
                continue;
            }
            let t = other[i].mul_ref(&pivot_inv);
            for r in i..m {
                other[r] = other[r].sub_ref(&t.mul_ref(&col[r]));
            }
            other[i] = S::zero(&field);
        }
        for x in col.iter_mut().take(i) {
            *x = S::zero(&field);
        }
        basis.push(col);
        pivot_rows.push(i);
        exponents.push(k);
    }
    for c in &pending {
        if c.iter().any(|x| !x.is_zero()) {
            return Err(LabError::PrecisionExhausted("residual generator after elimination"));
        }
    }
    let r = basis.len();
    for j in 0..r {
        for l in j + 1..r {
            let row = pivot_rows[l];
            let k = exponents[l];
            let x = basis[j][row].clone();
            let t = x.truncate(k)?;
            let s = x.sub_ref(&t).scale_p(-k);
            if !s.is_zero() {
                let (head, tail) = basis.split_at_mut(l);
                for (dst, src) in head[j][row..].iter_mut().zip(&tail[0][row..]) {
                    *dst = dst.sub_ref(&s.mul_ref(src));
                }
            }
            basis[j][row] = t;
        }
    }
    Ok(Hnf { basis: Matrix::from_columns(&field, m, &basis), pivot_rows, exponents })
}
