use super::{is_integral, orbital_gl_unit, orbital_u_unit};
use crate::error::{LabError, Result};
use crate::geometry::{blocks, conjugate, gl_representative, u_representative, GlnElement, HnElement, InvariantPoint};
use crate::linalg::{hermitian_split, Matrix, MatrixE, MatrixF};
use crate::padic::{solve_norm_equation, Field, LocalScalar, PAdic, Quad};

/// Both orbital integrals at an rss invariant point.
#[derive(Clone, Debug)]
pub struct FlComparison {
    pub o_u: i64,
    pub o_gl: i64,
    pub hermitian_exists: bool,
    pub equal: bool,
    pub x: Option<HnElement>,
    pub y: GlnElement,
}

/// `O(a, 1)` on both sides; the unitary side is `0` when the fiber in
/// `h_n(F)` is empty.
pub fn fl_compare(a: &InvariantPoint, guard: u32) -> Result<FlComparison> {
    let y = gl_representative(a)?;
    let o_gl = orbital_gl_unit(&y, guard)?.value;
    let (x, o_u) = match u_representative(a) {
        Ok(x) => {
            let v = orbital_u_unit(&x, guard)?.value;
            (Some(x), v)
        }
        Err(LabError::NoHermitianOrbit) => (None, 0),
        Err(e) => return Err(e),
    };
    Ok(FlComparison { o_u, o_gl, hermitian_exists: x.is_some(), equal: o_u == o_gl, x, y })
}

/// Both sides of the reduction identities `O(X) = 1_O(λ) O(X')` and
/// `O(Y) = 1_O(λ) O(Y')` for `X`, `Y` in normal form.
#[derive(Clone, Debug)]
pub struct Lemma1Outcome {
    pub u_lhs: i64,
    pub u_rhs: i64,
    pub gl_lhs: i64,
    pub gl_rhs: i64,
    pub holds: bool,
}

fn negligible<S: LocalScalar>(x: &S, field: &Field) -> bool {
    x.is_zero() || x.valuation().is_some_and(|v| v >= field.precision() as i64 / 2)
}

fn argmin_valuation<S: LocalScalar>(v: &[S]) -> Option<usize> {
    v.iter().enumerate().filter_map(|(i, x)| x.valuation().map(|k| (k, i))).min().map(|(_, i)| i)
}

/// Conjugates `X` by a unitary `g` so that `b` becomes `ν e_{n-1}` with
/// `N(ν) = q(X)`. Returns the conjugate and `ν`.
pub fn lemma1_normal_form_u(x: &HnElement) -> Result<(HnElement, Quad)> {
    let f = x.field().clone();
    let m = x.n() - 1;
    let q = x.q();
    if q.valuation() != Some(0) {
        return Err(LabError::NormalFormFailure("q(X) is not a unit"));
    }
    let nu = solve_norm_equation(&q)?;
    let nu_inv = nu.inv()?;
    let u: Vec<Quad> = x.blocks().b.iter().map(|z| z.mul(&nu_inv)).collect();
    let j0 = argmin_valuation(&u).ok_or(LabError::NormalFormFailure("b vanishes"))?;
    // orthonormal basis of u^⊥: project e_i (i != j0), then split the Gram matrix
    let mut cols: Vec<Vec<Quad>> = Vec::with_capacity(m);
    for i in (0..m).filter(|&i| i != j0) {
        let s = u[i].sigma();
        let mut w: Vec<Quad> = u.iter().map(|z| z.mul(&s).neg()).collect();
        w[i] = w[i].add(&Quad::one(&f));
        cols.push(w);
    }
    let mut q_mat = if cols.is_empty() {
        MatrixE::zeros(&f, m, 0)
    } else {
        let w = Matrix::from_columns(&f, m, &cols);
        let a = hermitian_split(&w.adjoint().mul(&w))?;
        w.mul(&a.inverse()?)
    };
    let mut all = q_mat.columns();
    all.push(u);
    q_mat = Matrix::from_columns(&f, m, &all);
    let g = q_mat.adjoint();
    let conj = conjugate(x.matrix(), &g)?;
    let bl = blocks(&conj);
    for (i, z) in bl.b.iter().enumerate() {
        let target = if i == m - 1 { nu.clone() } else { Quad::zero(&f) };
        if !negligible(&z.sub(&target), &f) {
            return Err(LabError::NormalFormFailure("b did not reach the last basis vector"));
        }
    }
    // remove rounding so the result is hermitian on the nose
    let half = Quad::from_base(PAdic::from_rational(&f, 1, 2)?);
    let sym = conj.add(&conj.adjoint()).scale(&half);
    Ok((HnElement::new(sym)?, nu))
}

/// Conjugates `Y` by `g ∈ GL_{n-1}(F)` so that `c = e_{n-1}^*` and
/// `b = q(Y) e_{n-1}`.
pub fn lemma1_normal_form_gl(y: &GlnElement) -> Result<GlnElement> {
    let f = y.field().clone();
    let m = y.n() - 1;
    let q = y.q();
    if q.valuation() != Some(0) {
        return Err(LabError::NormalFormFailure("q(Y) is not a unit"));
    }
    let bl = y.blocks();
    let j0 = argmin_valuation(&bl.c).ok_or(LabError::NormalFormFailure("c vanishes"))?;
    let cj = bl.c[j0].inv()?;
    // g^{-1} = [basis of ker c | b / q]
    let mut cols: Vec<Vec<PAdic>> = Vec::with_capacity(m);
    for i in (0..m).filter(|&i| i != j0) {
        let mut k = vec![PAdic::zero(&f); m];
        k[i] = PAdic::one(&f);
        k[j0] = bl.c[i].mul(&cj).neg();
        cols.push(k);
    }
    let q_inv = q.inv()?;
    cols.push(bl.b.iter().map(|z| z.mul(&q_inv)).collect());
    let ginv = MatrixF::from_columns(&f, m, &cols);
    let conj = conjugate(y.matrix(), &ginv.inverse()?)?;
    let nb = blocks(&conj);
    for i in 0..m {
        let (tb, tc) = if i == m - 1 { (q.clone(), PAdic::one(&f)) } else { (PAdic::zero(&f), PAdic::zero(&f)) };
        if !negligible(&nb.b[i].sub(&tb), &f) || !negligible(&nb.c[i].sub(&tc), &f) {
            return Err(LabError::NormalFormFailure("b, c did not reach the last basis vectors"));
        }
    }
    GlnElement::new(conj)
}

/// Checks the reduction identities for `X` with unit `q(X)` and for the
/// matching `Y` built from the invariants of `X`.
pub fn lemma1_check(x: &HnElement, guard: u32) -> Result<Lemma1Outcome> {
    if x.n() < 2 {
        return Err(LabError::Dimension("the reduction needs n >= 2".into()));
    }
    let lam_ok = is_integral(&x.blocks().lambda)?;
    let ind = i64::from(lam_ok);
    let u_lhs = orbital_u_unit(x, guard)?.value;
    let (xn, _) = lemma1_normal_form_u(x)?;
    let x_corner = HnElement::new(xn.blocks().corner)?;
    let u_rhs = ind * orbital_u_unit(&x_corner, guard)?.value;

    let y = gl_representative(&x.invariants())?;
    let gl_lhs = orbital_gl_unit(&y, guard)?.value;
    let yn = lemma1_normal_form_gl(&y)?;
    let y_corner = GlnElement::new(yn.blocks().corner)?;
    let gl_rhs = ind * orbital_gl_unit(&y_corner, guard)?.value;
    Ok(Lemma1Outcome { u_lhs, u_rhs, gl_lhs, gl_rhs, holds: u_lhs == u_rhs && gl_lhs == gl_rhs })
}
