use super::{assemble, hankel, GlnElement, HnElement};
use crate::error::{LabError, Result};
use crate::linalg::{hermitian_split, MatrixE, MatrixF};
use crate::padic::{Field, LocalScalar, PAdic, Quad};

/// A point of the common quotient: the characteristic polynomial of `X`
/// (coefficients below the leading one, highest degree first) together with
/// the moments `a_i = e_n^* X^i e_n` for `1 <= i < n`.
#[derive(Clone, Debug)]
pub struct InvariantPoint {
    pub n: usize,
    pub charpoly: Vec<PAdic>,
    pub moments: Vec<PAdic>,
}

/// Quantities attached to the corner block, recovered from the invariants.
#[derive(Clone, Debug)]
pub struct Derived {
    pub lambda: PAdic,
    /// `d_j = c X'^j b` for `0 <= j <= 2n - 4`.
    pub d: Vec<PAdic>,
    /// Characteristic polynomial of `X'`, constant term first, leading one omitted.
    pub corner_charpoly: Vec<PAdic>,
}

impl InvariantPoint {
    pub fn new(n: usize, charpoly: Vec<PAdic>, moments: Vec<PAdic>) -> Self {
        assert_eq!(charpoly.len(), n, "charpoly length");
        assert_eq!(moments.len(), n - 1, "moment count");
        InvariantPoint { n, charpoly, moments }
    }

    pub fn field(&self) -> &Field {
        self.charpoly[0].field()
    }

    /// Coefficient of `t^k` in the characteristic polynomial.
    fn coeff(&self, k: usize) -> PAdic {
        if k == self.n {
            PAdic::one(self.field())
        } else {
            self.charpoly[self.n - 1 - k].clone()
        }
    }

    /// Solves for `λ`, the moments `d_j` and the corner characteristic
    /// polynomial. With `S(t) = e_n^*(t - X)^{-1} e_n = 1 / (t - λ - D(t))`
    /// and `D(t) = c (t - X')^{-1} b`, the moments give `λ, d_0, ..., d_{n-3}`,
    /// and `det(t - X) = χ'(t)(t - λ) - χ'(t) D(t)` gives `χ'` from the top
    /// coefficient down and finally `d_{n-2}`.
    pub fn derived(&self) -> Derived {
        let f = self.field().clone();
        let n = self.n;
        if n == 1 {
            return Derived { lambda: self.charpoly[0].neg(), d: Vec::new(), corner_charpoly: Vec::new() };
        }
        let m = n - 1;
        let lambda = self.moments[0].clone();
        let mut a = vec![PAdic::one(&f)];
        a.extend(self.moments.iter().cloned());
        // a_{k+1} = λ a_k + Σ_{j<k} d_j a_{k-1-j}
        let mut d: Vec<PAdic> = Vec::with_capacity(2 * m);
        for k in 1..m {
            let mut rest = a[k + 1].sub(&lambda.mul(&a[k]));
            for j in 0..k - 1 {
                rest = rest.sub(&d[j].mul(&a[k - 1 - j]));
            }
            d.push(rest);
        }
        // e_i: coefficients of χ', with e_m = 1
        let mut e = vec![PAdic::zero(&f); m + 1];
        e[m] = PAdic::one(&f);
        e[m - 1] = self.coeff(m).add(&lambda);
        for k in (1..m).rev() {
            let mut r = PAdic::zero(&f);
            for i in k + 1..=m {
                r = r.add(&e[i].mul(&d[i - k - 1]));
            }
            e[k - 1] = self.coeff(k).add(&lambda.mul(&e[k])).add(&r);
        }
        let mut last = self.coeff(0).neg().sub(&lambda.mul(&e[0]));
        for i in 1..m {
            last = last.sub(&e[i].mul(&d[i - 1]));
        }
        d.push(last);
        // Cayley-Hamilton for X': d_{j+m} = -Σ_{i<m} e_i d_{j+i}
        while d.len() < 2 * m - 1 {
            let j = d.len() - m;
            let mut s = PAdic::zero(&f);
            for i in 0..m {
                s = s.sub(&e[i].mul(&d[j + i]));
            }
            d.push(s);
        }
        e.truncate(m);
        Derived { lambda, d, corner_charpoly: e }
    }

    /// `q = d_0 = a_2 - a_1^2`.
    pub fn q(&self) -> Option<PAdic> {
        (self.n >= 2).then(|| self.derived().d[0].clone())
    }

    pub fn hankel(&self) -> MatrixF {
        let m = self.n - 1;
        hankel(self.field(), &self.derived().d, m)
    }

    pub fn hankel_val_det(&self) -> Result<Option<i64>> {
        self.hankel().val_det()
    }

    pub fn is_rss(&self) -> Result<bool> {
        Ok(self.hankel_val_det()?.is_some())
    }

    /// Whether the fiber in `h_n(F)` is nonempty, for rss points.
    pub fn hermitian_exists(&self) -> Result<bool> {
        match self.hankel_val_det()? {
            None => Err(LabError::NotRss),
            Some(v) => Ok(v.rem_euclid(2) == 0),
        }
    }

    /// Coordinate-wise equality, allowing the last two known digits to differ.
    pub fn approx_eq(&self, o: &Self) -> bool {
        self.n == o.n
            && self.charpoly.iter().zip(&o.charpoly).chain(self.moments.iter().zip(&o.moments)).all(|(x, y)| {
                let diff = x.sub(y);
                match (diff.valuation(), x.abs_precision(), y.abs_precision()) {
                    (None, _, _) => true,
                    (Some(v), Some(a), Some(b)) => v >= a.min(b) - 2,
                    (Some(v), Some(a), None) | (Some(v), None, Some(a)) => v >= a - 2,
                    (Some(_), None, None) => false,
                }
            })
    }
}

/// Companion matrix with `C e_i = e_{i+1}` and last column `-(e_0, ..., e_{m-1})`.
fn companion<S: LocalScalar>(field: &Field, coeffs: &[S]) -> crate::linalg::Matrix<S> {
    let m = coeffs.len();
    let mut c = crate::linalg::Matrix::zeros(field, m, m);
    for i in 0..m {
        if i + 1 < m {
            c[(i + 1, i)] = S::one(field);
        }
        c[(i, m - 1)] = coeffs[i].neg_ref();
    }
    c
}

/// The element `(C(χ'), e_1; (d_0, ..., d_{n-2}), λ)` of the rss fiber over `a`.
pub fn gl_representative(a: &InvariantPoint) -> Result<GlnElement> {
    let f = a.field();
    if !a.is_rss()? {
        return Err(LabError::NotRss);
    }
    let dv = a.derived();
    let m = a.n - 1;
    let y = if m == 0 {
        MatrixF::from_rows(f, vec![vec![dv.lambda.clone()]])?
    } else {
        let cmat = companion(f, &dv.corner_charpoly);
        let mut b = vec![PAdic::zero(f); m];
        b[0] = PAdic::one(f);
        assemble(&cmat, &b, &dv.d[..m], &dv.lambda)
    };
    let y = GlnElement::new(y)?;
    if !y.invariants().approx_eq(a) {
        return Err(LabError::PrecisionExhausted("representative does not reproduce the invariants"));
    }
    Ok(y)
}

/// A hermitian element over `a`, built from a splitting `A^* A = H` of the
/// moment Hankel matrix: `X' = A C(χ') A^{-1}` and `b = A e_1`, so that the
/// Krylov basis of `b` has Gram matrix `H`. Exists iff `val det H` is even.
pub fn u_representative(a: &InvariantPoint) -> Result<HnElement> {
    let f = a.field();
    let v = a.hankel_val_det()?.ok_or(LabError::NotRss)?;
    if v.rem_euclid(2) == 1 {
        return Err(LabError::NoHermitianOrbit);
    }
    let dv = a.derived();
    let m = a.n - 1;
    let lam = Quad::from_base(dv.lambda.clone());
    let x = if m == 0 {
        MatrixE::from_rows(f, vec![vec![lam]])?
    } else {
        let h = a.hankel().to_quad();
        let am = hermitian_split(&h)?;
        let cq: Vec<Quad> = dv.corner_charpoly.iter().map(|x| Quad::from_base(x.clone())).collect();
        let corner = am.mul(&companion(f, &cq)).mul(&am.inverse()?);
        // symmetrize away rounding so the result is hermitian on the nose
        let half = Quad::from_base(PAdic::from_rational(f, 1, 2)?);
        let corner = corner.add(&corner.adjoint()).scale(&half);
        let b = am.column(0);
        let c: Vec<Quad> = b.iter().map(Quad::sigma).collect();
        assemble(&corner, &b, &c, &lam)
    };
    let x = HnElement::new(x)?;
    if !x.invariants().approx_eq(a) {
        return Err(LabError::PrecisionExhausted("representative does not reproduce the invariants"));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldConfig;

    fn f3() -> Field {
        Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap()
    }

    fn point(f: &Field, cp: &[i64], mo: &[i64]) -> InvariantPoint {
        let c = cp.iter().map(|&x| PAdic::from_int(f, x)).collect();
        let m = mo.iter().map(|&x| PAdic::from_int(f, x)).collect();
        InvariantPoint::new(cp.len(), c, m)
    }

    #[test]
    fn gl_representative_example() {
        let f = f3();
        let a = point(&f, &[-1, -1], &[0]);
        let y = gl_representative(&a).unwrap();
        assert_eq!(format!("{:?}", y.matrix()), "[[1, 1], [1, 0]]");
    }

    #[test]
    fn u_representative_examples() {
        let f = f3();
        let a = point(&f, &[-1, -1], &[0]);
        let x = u_representative(&a).unwrap();
        assert!(x.invariants().approx_eq(&a));
        // λ = 0, x' = 1, d_0 = 3: charpoly t^2 - t - 3
        let odd = point(&f, &[-1, -3], &[0]);
        assert_eq!(odd.q().unwrap().to_string(), "3");
        assert_eq!(u_representative(&odd).unwrap_err(), LabError::NoHermitianOrbit);
        // d_0 = 0: not rss
        let flat = point(&f, &[-1, 0], &[0]);
        assert_eq!(u_representative(&flat).unwrap_err(), LabError::NotRss);
        assert_eq!(gl_representative(&flat).unwrap_err(), LabError::NotRss);
    }

    #[test]
    fn derived_quantities_match_blocks() {
        let f = f3();
        let y = GlnElement::new(MatrixF::from_ints(&f, &[&[2, 1, 4, 1], &[0, 3, 1, -2], &[5, 1, 1, 7], &[1, 2, 3, 4]]))
            .unwrap();
        let dv = y.invariants().derived();
        let direct = super::super::moment_sequence(y.matrix(), 5);
        for (x, z) in dv.d.iter().zip(&direct) {
            assert!(x.approx_eq(z), "{x} vs {z}");
        }
        let corner = y.blocks().corner.charpoly();
        for (i, e) in dv.corner_charpoly.iter().enumerate() {
            assert!(e.approx_eq(&corner[3 - i]));
        }
    }
}
