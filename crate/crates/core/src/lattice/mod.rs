//! Lattices over `O_F` and `O_E` with canonical bases, and enumeration of
//! stable and self-dual lattices.

mod enumerate;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{LabError, Result};
use crate::linalg::{hnf_basis, Hnf, Matrix};
use crate::padic::{Field, LocalScalar, PAdic, Quad, ScalarKey};

pub use enumerate::{
    enumerate_selfdual_stable, enumerate_stable_between, lattices_in_box, DEFAULT_GUARD_EXPONENT,
};

/// Finitely generated module in `F^m` or `E^m`, stored by its canonical basis.
#[derive(Clone)]
pub struct Lattice<S> {
    hnf: Hnf<S>,
    key: ScalarKey,
}

pub type LatticeF = Lattice<PAdic>;
pub type HermitianLattice = Lattice<Quad>;

impl<S: LocalScalar> Lattice<S> {
    /// The module spanned by the columns of `gens`.
    pub fn from_generators(gens: &Matrix<S>) -> Result<Self> {
        let hnf = hnf_basis(gens)?;
        let mut key = vec![(hnf.basis.rows() as i64, hnf.rank().into())];
        for x in hnf.basis.entries() {
            key.extend(x.key());
        }
        Ok(Lattice { hnf, key })
    }

    pub fn standard(field: &Field, m: usize) -> Self {
        Self::from_generators(&Matrix::identity(field, m)).expect("identity is canonical")
    }

    pub fn field(&self) -> &Field {
        self.hnf.basis.field()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.hnf.basis
    }

    pub fn ambient(&self) -> usize {
        self.hnf.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.hnf.is_full_rank()
    }

    /// Exponents `k_i` of the pivots `p^{k_i}`.
    pub fn exponents(&self) -> &[i64] {
        &self.hnf.exponents
    }

    /// Valuation of the determinant of the canonical basis (over the
    /// coefficient field, so `Σ k_i`).
    pub fn val_det(&self) -> i64 {
        self.hnf.exponents.iter().sum()
    }

    /// `(-1)^{val det}` of the canonical basis.
    pub fn index_sign(&self) -> i64 {
        if self.val_det().rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn key(&self) -> &ScalarKey {
        &self.key
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in its span.
    fn coordinates(&self, v: &[S]) -> Result<Option<Vec<S>>> {
        if v.len() != self.ambient() {
            return Err(LabError::Dimension("vector length differs from ambient rank".into()));
        }
        let b = &self.hnf.basis;
        let mut x: Vec<S> = Vec::with_capacity(self.rank());
        for (j, &row) in self.hnf.pivot_rows.iter().enumerate() {
            let mut acc = v[row].clone();
            for (i, xi) in x.iter().enumerate() {
                acc = acc.sub_ref(&xi.mul_ref(&b[(row, i)]));
            }
            x.push(acc.scale_p(-self.hnf.exponents[j]));
        }
        for (r, vr) in v.iter().enumerate() {
            let mut acc = vr.clone();
            for (i, xi) in x.iter().enumerate() {
                acc = acc.sub_ref(&xi.mul_ref(&b[(r, i)]));
            }
            if !acc.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(x))
    }

    pub fn contains(&self, v: &[S]) -> Result<bool> {
        match self.coordinates(v)? {
            None => Ok(false),
            Some(x) => {
                for c in &x {
                    if !integral(c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn contains_lattice(&self, other: &Self) -> Result<bool> {
        for col in other.hnf.basis.columns() {
            if !self.contains(&col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let mut cols = self.hnf.basis.columns();
        cols.extend(other.hnf.basis.columns());
        Self::from_generators(&Matrix::from_columns(self.field(), self.ambient(), &cols))
    }

    /// `p^k L`.
    pub fn scale(&self, k: i64) -> Result<Self> {
        Self::from_generators(&self.hnf.basis.map(|x| x.scale_p(k)))
    }

    /// `T L`.
    pub fn image(&self, t: &Matrix<S>) -> Result<Self> {
        Self::from_generators(&t.mul(&self.hnf.basis))
    }

    pub fn is_stable(&self, t: &Matrix<S>) -> Result<bool> {
        let tb = t.mul(&self.hnf.basis);
        for col in tb.columns() {
            if !self.contains(&col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dual lattice `{v : <v, L> ⊆ O}` for the standard pairing: bilinear
    /// over `F`, hermitian `Σ σ(v_i) w_i` over `E`.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_full_rank() {
            return Err(LabError::Dimension("dual of a lattice that is not of full rank".into()));
        }
        Self::from_generators(&self.hnf.basis.adjoint().inverse()?)
    }

    /// Gram matrix `B^* B` of the standard form on the canonical basis.
    pub fn gram(&self) -> Matrix<S> {
        self.hnf.basis.adjoint().mul(&self.hnf.basis)
    }

    /// `L ⊆ L^∨`.
    pub fn is_integral_form(&self) -> Result<bool> {
        self.gram().is_integral()
    }

    pub fn is_selfdual(&self) -> Result<bool> {
        Ok(self.is_full_rank() && self.val_det() == 0 && self.is_integral_form()?)
    }
}

fn integral<S: LocalScalar>(x: &S) -> Result<bool> {
    match x.valuation() {
        Some(v) => Ok(v >= 0),
        None if x.abs_precision().is_none_or(|a| a >= 0) => Ok(true),
        None => Err(LabError::PrecisionExhausted("integrality undecidable")),
    }
}

/// The `O`-module generated by `v, Tv, ..., T^{m-1} v`.
pub fn module_closure<S: LocalScalar>(t: &Matrix<S>, v: &[S]) -> Result<Lattice<S>> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(LabError::ZeroModule);
    }
    let m = v.len();
    let mut cols = vec![v.to_vec()];
    for k in 1..m {
        let next = t.mul_vec(&cols[k - 1]);
        cols.push(next);
    }
    Lattice::from_generators(&Matrix::from_columns(t.field(), m, &cols))
}

impl<S: LocalScalar> PartialEq for Lattice<S> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl<S: LocalScalar> Eq for Lattice<S> {}

impl<S: LocalScalar> Hash for Lattice<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl<S: LocalScalar> PartialOrd for Lattice<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: LocalScalar> Ord for Lattice<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl<S: LocalScalar> fmt::Debug for Lattice<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.hnf.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MatrixF;
    use crate::padic::FieldConfig;

    fn f3() -> Field {
        Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap()
    }

    fn ints(f: &Field, v: &[i64]) -> Vec<PAdic> {
        v.iter().map(|&x| PAdic::from_int(f, x)).collect()
    }

    #[test]
    fn containment_examples() {
        let f = f3();
        let std = LatticeF::standard(&f, 2);
        assert!(std.contains(&ints(&f, &[1, 0])).unwrap());
        assert!(!std.scale(1).unwrap().contains(&ints(&f, &[1, 0])).unwrap());
        let l = LatticeF::from_generators(&MatrixF::from_ints(&f, &[&[1, 0], &[1, 3]])).unwrap();
        assert!(l.contains(&ints(&f, &[3, 0])).unwrap());
        assert!(!l.contains(&ints(&f, &[1, 0])).unwrap());
    }

    #[test]
    fn dual_examples() {
        let f = f3();
        let std = LatticeF::standard(&f, 3);
        assert_eq!(std.dual().unwrap(), std);
        let l = LatticeF::from_generators(&MatrixF::from_ints(&f, &[&[3, 0], &[0, 1]])).unwrap();
        let d = l.dual().unwrap();
        assert_eq!(d.exponents(), &[-1, 0]);
        assert_eq!(d.val_det(), -l.val_det());
        let e = HermitianLattice::standard(&f, 2);
        assert_eq!(e.dual().unwrap(), e);
        assert!(e.is_selfdual().unwrap());
    }

    #[test]
    fn closure_examples() {
        let f = f3();
        let nil = MatrixF::from_ints(&f, &[&[0, 0], &[1, 0]]);
        let l = module_closure(&nil, &ints(&f, &[1, 0])).unwrap();
        assert_eq!(l, LatticeF::standard(&f, 2));
        let d = MatrixF::from_ints(&f, &[&[2, 0], &[0, 5]]);
        let line = module_closure(&d, &ints(&f, &[1, 0])).unwrap();
        assert_eq!(line.rank(), 1);
        assert!(line.contains(&ints(&f, &[7, 0])).unwrap());
        assert!(!line.contains(&ints(&f, &[0, 1])).unwrap());
        assert_eq!(module_closure(&d, &ints(&f, &[0, 0])).unwrap_err(), LabError::ZeroModule);
    }

    #[test]
    fn index_sign_examples() {
        let f = f3();
        assert_eq!(LatticeF::standard(&f, 2).index_sign(), 1);
        let l = LatticeF::from_generators(&MatrixF::from_ints(&f, &[&[3, 0], &[0, 1]])).unwrap();
        assert_eq!(l.index_sign(), -1);
        assert_eq!(LatticeF::standard(&f, 2).scale(1).unwrap().index_sign(), 1);
    }
}
