//! Block decomposition, invariants, transfer factor and matching for the
//! actions of `U_{n-1}` on `h_n` and `GL_{n-1}` on `gl_n`.

mod invariants;
mod sample;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{Matrix, MatrixE, MatrixF};
use crate::padic::{Field, LocalScalar, PAdic, Quad};

pub use invariants::{gl_representative, u_representative, InvariantPoint};
pub use sample::{
    random_gl, random_unitary, sample_hermitian, sample_matched_pair, sample_nonhermitian_point, small_rational,
    MatchedPair, MAX_REJECTIONS,
};

/// Which of the two actions an element or computation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `U_{n-1}` acting on `h_n`.
    U,
    /// `GL_{n-1}` acting on `gl_n`.
    Gl,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::U => "u",
            Side::Gl => "gl",
        })
    }
}

impl FromStr for Side {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(Side::U),
            "gl" => Ok(Side::Gl),
            other => Err(LabError::Parse(format!("unknown side {other:?}, expected u or gl"))),
        }
    }
}

/// Element of `gl_n(F)` acted on by `GL_{n-1}(F)`.
#[derive(Clone, Debug)]
pub struct GlnElement {
    y: MatrixF,
}

/// Element of `h_n(F)`, a hermitian matrix over `E`, acted on by `U_{n-1}(F)`.
#[derive(Clone, Debug)]
pub struct HnElement {
    x: MatrixE,
}

/// Either side, as read from input files.
#[derive(Clone, Debug)]
pub enum Element {
    U(HnElement),
    Gl(GlnElement),
}

/// `v(Y)` and `ω(Y) = (-1)^{v(Y)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferSign {
    pub v: i64,
    pub omega: i64,
}

/// The blocks `(X', b, c, λ)` of a square matrix.
pub struct Blocks<S> {
    pub corner: Matrix<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub lambda: S,
}

pub fn blocks<S: LocalScalar>(x: &Matrix<S>) -> Blocks<S> {
    let n = x.rows();
    let m = n - 1;
    Blocks {
        corner: x.submatrix(0..m, 0..m),
        b: (0..m).map(|i| x[(i, m)].clone()).collect(),
        c: (0..m).map(|j| x[(m, j)].clone()).collect(),
        lambda: x[(m, m)].clone(),
    }
}

pub fn assemble<S: LocalScalar>(corner: &Matrix<S>, b: &[S], c: &[S], lambda: &S) -> Matrix<S> {
    let m = corner.rows();
    let mut x = Matrix::zeros(corner.field(), m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            x[(i, j)] = corner[(i, j)].clone();
        }
        x[(i, m)] = b[i].clone();
        x[(m, i)] = c[i].clone();
    }
    x[(m, m)] = lambda.clone();
    x
}

/// `diag(g, 1)`.
pub fn embed<S: LocalScalar>(g: &Matrix<S>) -> Matrix<S> {
    let m = g.rows();
    let z = vec![S::zero(g.field()); m];
    assemble(g, &z, &z, &S::one(g.field()))
}

/// `diag(g, 1) X diag(g, 1)^{-1}`.
pub fn conjugate<S: LocalScalar>(x: &Matrix<S>, g: &Matrix<S>) -> Result<Matrix<S>> {
    let big = embed(g);
    Ok(big.mul(x).mul(&big.inverse()?))
}

/// `d_j = c X'^j b` for `0 <= j < count`.
pub fn moment_sequence<S: LocalScalar>(x: &Matrix<S>, count: usize) -> Vec<S> {
    let bl = blocks(x);
    let mut v = bl.b.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(bl.c.iter().zip(&v).fold(S::zero(x.field()), |acc, (c, b)| acc.add_ref(&c.mul_ref(b))));
        v = bl.corner.mul_vec(&v);
    }
    out
}

/// Hankel matrix `(d_{i+j})` of size `m x m`.
pub fn hankel<S: LocalScalar>(field: &Field, d: &[S], m: usize) -> Matrix<S> {
    let mut h = Matrix::zeros(field, m, m);
    for i in 0..m {
        for j in 0..m {
            h[(i, j)] = d[i + j].clone();
        }
    }
    h
}

fn moment_hankel<S: LocalScalar>(x: &Matrix<S>) -> Matrix<S> {
    let m = x.rows() - 1;
    let d = moment_sequence(x, (2 * m).saturating_sub(1));
    hankel(x.field(), &d, m)
}

/// Moments `e_n^* X^i e_n` for `1 <= i < n`.
fn moments<S: LocalScalar>(x: &Matrix<S>) -> Vec<S> {
    let n = x.rows();
    let mut v: Vec<S> = (0..n).map(|i| if i == n - 1 { S::one(x.field()) } else { S::zero(x.field()) }).collect();
    let mut out = Vec::with_capacity(n - 1);
    for _ in 1..n {
        v = x.mul_vec(&v);
        out.push(v[n - 1].clone());
    }
    out
}

impl GlnElement {
    pub fn new(y: MatrixF) -> Result<Self> {
        if !y.is_square() || y.rows() == 0 {
            return Err(LabError::Dimension("element must be a nonempty square matrix".into()));
        }
        Ok(GlnElement { y })
    }

    pub fn matrix(&self) -> &MatrixF {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.y.rows()
    }

    pub fn field(&self) -> &Field {
        self.y.field()
    }

    pub fn blocks(&self) -> Blocks<PAdic> {
        blocks(&self.y)
    }

    /// `q(Y) = c b`.
    pub fn q(&self) -> PAdic {
        let bl = self.blocks();
        bl.c.iter().zip(&bl.b).fold(PAdic::zero(self.field()), |acc, (c, b)| acc.add(&c.mul(b)))
    }

    pub fn hankel(&self) -> MatrixF {
        moment_hankel(&self.y)
    }

    pub fn is_rss(&self) -> Result<bool> {
        Ok(self.hankel().val_det()?.is_some())
    }

    pub fn invariants(&self) -> InvariantPoint {
        let cp = self.y.charpoly();
        InvariantPoint::new(self.n(), cp[1..].to_vec(), moments(&self.y))
    }

    /// `v(Y) = val det(e_n^*, e_n^* Y, ..., e_n^* Y^{n-1})`.
    pub fn transfer_sign(&self) -> Result<TransferSign> {
        let n = self.n();
        let f = self.field();
        let mut row: Vec<PAdic> = (0..n).map(|i| if i == n - 1 { PAdic::one(f) } else { PAdic::zero(f) }).collect();
        let mut rows = Vec::with_capacity(n);
        let yt = self.y.transpose();
        for _ in 0..n {
            rows.push(row.clone());
            row = yt.mul_vec(&row);
        }
        let k = Matrix::from_rows(f, rows)?;
        let v = k.val_det()?.ok_or(LabError::NotRss)?;
        Ok(TransferSign { v, omega: if v.rem_euclid(2) == 0 { 1 } else { -1 } })
    }

    pub fn conjugate(&self, g: &MatrixF) -> Result<Self> {
        Ok(GlnElement { y: conjugate(&self.y, g)? })
    }
}

impl HnElement {
    /// Fails unless `X` equals `ᵗX^σ` to working precision.
    pub fn new(x: MatrixE) -> Result<Self> {
        if !x.is_square() || x.rows() == 0 {
            return Err(LabError::Dimension("element must be a nonempty square matrix".into()));
        }
        if !x.is_hermitian() {
            return Err(LabError::Dimension("matrix is not hermitian".into()));
        }
        Ok(HnElement { x })
    }

    pub fn matrix(&self) -> &MatrixE {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn field(&self) -> &Field {
        self.x.field()
    }

    pub fn blocks(&self) -> Blocks<Quad> {
        blocks(&self.x)
    }

    /// `q(X) = ᵗb^σ b`, an element of `F`.
    pub fn q(&self) -> PAdic {
        let bl = self.blocks();
        bl.b.iter().fold(PAdic::zero(self.field()), |acc, b| acc.add(&b.norm()))
    }

    pub fn hankel(&self) -> MatrixE {
        moment_hankel(&self.x)
    }

    pub fn is_rss(&self) -> Result<bool> {
        Ok(self.hankel().val_det()?.is_some())
    }

    /// Invariants; the coordinates lie in `F` for hermitian `X`.
    pub fn invariants(&self) -> InvariantPoint {
        let cp = self.x.charpoly();
        let re = |v: &[Quad]| v.iter().map(|z| z.re.clone()).collect::<Vec<_>>();
        InvariantPoint::new(self.n(), re(&cp[1..]), re(&moments(&self.x)))
    }

    pub fn conjugate(&self, g: &MatrixE) -> Result<Self> {
        Ok(HnElement { x: conjugate(&self.x, g)? })
    }
}

impl Element {
    pub fn side(&self) -> Side {
        match self {
            Element::U(_) => Side::U,
            Element::Gl(_) => Side::Gl,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Element::U(x) => x.n(),
            Element::Gl(y) => y.n(),
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Element::U(x) => x.field(),
            Element::Gl(y) => y.field(),
        }
    }

    pub fn q(&self) -> PAdic {
        match self {
            Element::U(x) => x.q(),
            Element::Gl(y) => y.q(),
        }
    }

    pub fn is_rss(&self) -> Result<bool> {
        match self {
            Element::U(x) => x.is_rss(),
            Element::Gl(y) => y.is_rss(),
        }
    }

    pub fn invariants(&self) -> InvariantPoint {
        match self {
            Element::U(x) => x.invariants(),
            Element::Gl(y) => y.invariants(),
        }
    }

    /// Only defined on the general linear side.
    pub fn transfer_sign(&self) -> Result<TransferSign> {
        match self {
            Element::U(_) => Err(LabError::SideError),
            Element::Gl(y) => y.transfer_sign(),
        }
    }
}

/// `X ↔ Y`: both rss with equal invariants.
pub fn matches(x: &HnElement, y: &GlnElement) -> Result<bool> {
    if !x.is_rss()? || !y.is_rss()? {
        return Err(LabError::NotRss);
    }
    Ok(x.invariants().approx_eq(&y.invariants()))
}

impl fmt::Display for TransferSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v = {}, omega = {:+}", self.v, self.omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldConfig;

    fn f3() -> Field {
        Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap()
    }

    fn x_example(f: &Field) -> HnElement {
        let w = Quad::omega(f);
        let m = Matrix::from_rows(f, vec![vec![Quad::one(f), w.clone()], vec![w.neg(), Quad::zero(f)]]).unwrap();
        HnElement::new(m).unwrap()
    }

    #[test]
    fn q_examples() {
        let f = f3();
        let id = GlnElement::new(MatrixF::identity(&f, 2)).unwrap();
        assert!(id.q().is_exact_zero());
        assert_eq!(x_example(&f).q().to_string(), "1");
        let y = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(y.q().to_string(), "1");
    }

    #[test]
    fn rss_examples() {
        let f = f3();
        let y = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[1, 0]])).unwrap();
        assert!(y.is_rss().unwrap());
        let b0 = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 2, 0], &[3, 1, 0], &[1, 1, 5]])).unwrap();
        assert!(!b0.is_rss().unwrap());
        let one = GlnElement::new(MatrixF::from_ints(&f, &[&[4]])).unwrap();
        assert!(one.is_rss().unwrap());
    }

    #[test]
    fn invariants_examples() {
        let f = f3();
        let a = x_example(&f).invariants();
        assert_eq!(a.charpoly.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["-1", "-1"]);
        assert_eq!(a.moments[0].to_string(), "0");
        let d = GlnElement::new(MatrixF::from_ints(&f, &[&[2, 0, 0], &[0, 5, 0], &[0, 0, 7]])).unwrap();
        let m: Vec<String> = d.invariants().moments.iter().map(|x| x.to_string()).collect();
        assert_eq!(m, ["7", "49"]);
    }

    #[test]
    fn transfer_sign_examples() {
        let f = f3();
        let y = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(y.transfer_sign().unwrap(), TransferSign { v: 0, omega: 1 });
        let y3 = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[3, 0]])).unwrap();
        assert_eq!(y3.transfer_sign().unwrap(), TransferSign { v: 1, omega: -1 });
        assert_eq!(Element::U(x_example(&f)).transfer_sign().unwrap_err(), LabError::SideError);
    }

    #[test]
    fn matching_example() {
        let f = f3();
        let x = x_example(&f);
        let y = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[1, 0]])).unwrap();
        assert!(matches(&x, &y).unwrap());
        let y2 = GlnElement::new(MatrixF::from_ints(&f, &[&[1, 1], &[1, 1]])).unwrap();
        assert!(!matches(&x, &y2).unwrap());
    }
}
