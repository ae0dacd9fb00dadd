//! Orbital integrals of the unit functions `1_{h_n(O)}` and `1_{gl_n(O)}` as
//! finite lattice counts, an independent oracle, and the comparisons of the
//! fundamental lemma and of its reduction step.

mod compare;
mod oracle;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geometry::{GlnElement, HnElement, Side};
use crate::lattice::{enumerate_selfdual_stable, enumerate_stable_between, module_closure, Lattice};
use crate::linalg::Matrix;
use crate::padic::LocalScalar;

pub use compare::{fl_compare, lemma1_check, lemma1_normal_form_gl, lemma1_normal_form_u, FlComparison, Lemma1Outcome};
pub use oracle::{orbital_oracle, DEFAULT_ORACLE_BOUND, MAX_ORACLE_RANK};

/// Value of one orbital integral with the lattices that contribute to it.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitalResult {
    pub side: Side,
    pub value: i64,
    /// `ω(Y)` on the general linear side.
    pub omega: Option<i64>,
    pub lattice_count: usize,
    /// Canonical basis of each contributing lattice with its sign, in
    /// canonical order.
    pub contributions: Vec<(String, i64)>,
}

impl OrbitalResult {
    fn zero(side: Side, omega: Option<i64>) -> Self {
        OrbitalResult { side, value: 0, omega, lattice_count: 0, contributions: Vec::new() }
    }

    fn point(side: Side, integral: bool) -> Self {
        let value = i64::from(integral);
        OrbitalResult { side, value, omega: (side == Side::Gl).then_some(1), lattice_count: value as usize, contributions: Vec::new() }
    }
}

fn is_integral<S: LocalScalar>(x: &S) -> Result<bool> {
    match x.valuation() {
        Some(v) => Ok(v >= 0),
        None if x.abs_precision().is_none_or(|a| a >= 0) => Ok(true),
        None => Err(LabError::PrecisionExhausted("integrality undecidable")),
    }
}

/// `Λ_min = O[T] b` when it is a `T`-stable lattice; `None` when no `T`-stable
/// lattice contains `b`.
fn lower_bound<S: LocalScalar>(t: &Matrix<S>, b: &[S]) -> Result<Option<Lattice<S>>> {
    let l = match module_closure(t, b) {
        Ok(l) => l,
        Err(LabError::ZeroModule) => return Err(LabError::NotRss),
        Err(e) => return Err(e),
    };
    if !l.is_full_rank() {
        return Err(LabError::NotRss);
    }
    Ok(l.is_stable(t)?.then_some(l))
}

/// `O(X, 1_{h_n(O)})`: the number of self-dual `O_E`-lattices `L` with
/// `X'L ⊆ L` and `b ∈ L`, or `0` when `λ ∉ O`.
pub fn orbital_u_unit(x: &HnElement, guard: u32) -> Result<OrbitalResult> {
    let bl = x.blocks();
    if x.n() == 1 {
        return Ok(OrbitalResult::point(Side::U, is_integral(&bl.lambda)?));
    }
    if !x.is_rss()? {
        return Err(LabError::NotRss);
    }
    if !is_integral(&bl.lambda)? {
        return Ok(OrbitalResult::zero(Side::U, None));
    }
    let Some(lmin) = lower_bound(&bl.corner, &bl.b)? else {
        return Ok(OrbitalResult::zero(Side::U, None));
    };
    let found = enumerate_selfdual_stable(&lmin, &bl.corner, guard)?;
    Ok(OrbitalResult {
        side: Side::U,
        value: found.len() as i64,
        omega: None,
        lattice_count: found.len(),
        contributions: found.iter().map(|l| (format!("{:?}", l.basis()), 1)).collect(),
    })
}

/// `O(Y, 1_{gl_n(O)}) = ω(Y) Σ (-1)^{val det L}` over lattices `L` with
/// `Y'L ⊆ L`, `b ∈ L` and `cL ⊆ O`, or `0` when `λ ∉ O`.
pub fn orbital_gl_unit(y: &GlnElement, guard: u32) -> Result<OrbitalResult> {
    let bl = y.blocks();
    if y.n() == 1 {
        return Ok(OrbitalResult::point(Side::Gl, is_integral(&bl.lambda)?));
    }
    if !y.is_rss()? {
        return Err(LabError::NotRss);
    }
    let omega = y.transfer_sign()?.omega;
    if !is_integral(&bl.lambda)? {
        return Ok(OrbitalResult::zero(Side::Gl, Some(omega)));
    }
    let Some(lmin) = lower_bound(&bl.corner, &bl.b)? else {
        return Ok(OrbitalResult::zero(Side::Gl, Some(omega)));
    };
    let Some(lc) = lower_bound(&bl.corner.transpose(), &bl.c)? else {
        return Ok(OrbitalResult::zero(Side::Gl, Some(omega)));
    };
    let lmax = lc.dual()?;
    if !lmax.contains_lattice(&lmin)? {
        return Ok(OrbitalResult::zero(Side::Gl, Some(omega)));
    }
    let found = enumerate_stable_between(&lmin, &lmax, &bl.corner, guard)?;
    let contributions: Vec<(String, i64)> = found.iter().map(|l| (format!("{:?}", l.basis()), l.index_sign())).collect();
    let total: i64 = contributions.iter().map(|(_, s)| s).sum();
    Ok(OrbitalResult { side: Side::Gl, value: omega * total, omega: Some(omega), lattice_count: found.len(), contributions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_GUARD_EXPONENT as G;
    use crate::linalg::{MatrixE, MatrixF};
    use crate::padic::{Field, FieldConfig, PAdic, Quad};

    fn f3() -> Field {
        Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap()
    }

    fn gl(f: &Field, rows: &[&[i64]]) -> GlnElement {
        GlnElement::new(MatrixF::from_ints(f, rows)).unwrap()
    }

    #[test]
    fn gl_examples() {
        let f = f3();
        assert_eq!(orbital_gl_unit(&gl(&f, &[&[1, 1], &[1, 0]]), G).unwrap().value, 1);
        let r = orbital_gl_unit(&gl(&f, &[&[1, 1], &[3, 0]]), G).unwrap();
        assert_eq!((r.value, r.lattice_count, r.omega), (0, 2, Some(-1)));
        let r = orbital_gl_unit(&gl(&f, &[&[1, 1], &[9, 0]]), G).unwrap();
        assert_eq!((r.value, r.lattice_count, r.omega), (1, 3, Some(1)));
    }

    #[test]
    fn u_examples() {
        let f = f3();
        let w = Quad::omega(&f);
        let x = MatrixE::from_rows(&f, vec![vec![Quad::one(&f), w.clone()], vec![w.neg(), Quad::zero(&f)]]).unwrap();
        assert_eq!(orbital_u_unit(&HnElement::new(x).unwrap(), G).unwrap().value, 1);
        let third = Quad::new(PAdic::zero(&f), PAdic::from_rational(&f, 1, 3).unwrap());
        let x = MatrixE::from_rows(&f, vec![vec![Quad::one(&f), third.clone()], vec![third.neg(), Quad::zero(&f)]])
            .unwrap();
        assert_eq!(orbital_u_unit(&HnElement::new(x).unwrap(), G).unwrap().value, 0);
        let lam = Quad::from_base(PAdic::from_rational(&f, 1, 3).unwrap());
        let x = MatrixE::from_rows(&f, vec![vec![Quad::one(&f), w.clone()], vec![w.neg(), lam]]).unwrap();
        assert_eq!(orbital_u_unit(&HnElement::new(x).unwrap(), G).unwrap().value, 0);
    }

    #[test]
    fn n_equals_one() {
        let f = f3();
        assert_eq!(orbital_gl_unit(&gl(&f, &[&[5]]), G).unwrap().value, 1);
        let third = MatrixF::from_rows(&f, vec![vec![PAdic::from_rational(&f, 1, 3).unwrap()]]).unwrap();
        assert_eq!(orbital_gl_unit(&GlnElement::new(third).unwrap(), G).unwrap().value, 0);
    }
}
