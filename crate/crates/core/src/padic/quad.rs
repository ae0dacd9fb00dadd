use std::fmt;

use num_bigint::BigUint;

use super::field::Field;
use super::scalar::PAdic;
use crate::error::{LabError, Result};

/// An element `re + im*w` of the unramified quadratic extension `E = F(w)`,
/// `w^2 = u`.
#[derive(Clone, PartialEq)]
pub struct Quad {
    pub re: PAdic,
    pub im: PAdic,
}

impl Quad {
    pub fn new(re: PAdic, im: PAdic) -> Self {
        Quad { re, im }
    }

    pub fn from_base(re: PAdic) -> Self {
        let im = PAdic::zero(re.field());
        Quad { re, im }
    }

    pub fn zero(field: &Field) -> Self {
        Quad::from_base(PAdic::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Quad::from_base(PAdic::one(field))
    }

    /// The generator `w`.
    pub fn omega(field: &Field) -> Self {
        Quad { re: PAdic::zero(field), im: PAdic::one(field) }
    }

    pub fn from_ints(field: &Field, re: i64, im: i64) -> Self {
        Quad { re: PAdic::from_int(field, re), im: PAdic::from_int(field, im) }
    }

    pub fn field(&self) -> &Field {
        self.re.field()
    }

    fn u(&self) -> PAdic {
        PAdic::from_int(self.field(), self.field().u())
    }

    /// `val(re + im w) = min(val re, val im)` since `E/F` is unramified.
    pub fn valuation(&self) -> Option<i64> {
        match (self.re.valuation(), self.im.valuation()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn abs_precision(&self) -> Option<i64> {
        match (self.re.abs_precision(), self.im.abs_precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Quad { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quad { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Quad { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).add(&self.u().mul(&self.im.mul(&o.im)));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Quad { re, im }
    }

    pub fn mul_base(&self, c: &PAdic) -> Self {
        Quad { re: self.re.mul(c), im: self.im.mul(c) }
    }

    /// The Galois conjugate: `w -> -w`.
    pub fn sigma(&self) -> Self {
        Quad { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn trace(&self) -> PAdic {
        self.re.add(&self.re)
    }

    pub fn norm(&self) -> PAdic {
        self.re.mul(&self.re).sub(&self.u().mul(&self.im.mul(&self.im)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(LabError::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(self.sigma().mul_base(&n))
    }

    pub fn scale_p(&self, k: i64) -> Self {
        Quad { re: self.re.scale_p(k), im: self.im.scale_p(k) }
    }

    pub fn truncate(&self, k: i64) -> Result<Self> {
        Ok(Quad { re: self.re.truncate(k)?, im: self.im.truncate(k)? })
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn inexact(self) -> Self {
        Quad { re: self.re.inexact(), im: self.im.inexact() }
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.re.approx_eq(&o.re) && self.im.approx_eq(&o.im)
    }

    pub fn key(&self) -> ((i64, BigUint), (i64, BigUint)) {
        (self.re.key(), self.im.key())
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = self.im.to_string();
        let im_term = match im.as_str() {
            "1" => "w".to_string(),
            "-1" => "-w".to_string(),
            s => format!("{s}*w"),
        };
        if self.re.is_zero() {
            write!(f, "{im_term}")
        } else if im_term.starts_with('-') {
            write!(f, "{}{}", self.re, im_term)
        } else {
            write!(f, "{}+{}", self.re, im_term)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldConfig;

    fn f3() -> Field {
        Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap()
    }

    #[test]
    fn galois_examples() {
        let f = f3();
        let x = Quad::from_ints(&f, 2, 1);
        assert!(x.sigma().approx_eq(&Quad::from_ints(&f, 2, -1)));
        assert_eq!(Quad::omega(&f).norm().to_string(), "1");
        assert_eq!(Quad::from_ints(&f, 1, 1).norm().to_string(), "2");
        assert_eq!(x.trace().to_string(), "4");
        assert_eq!(x.to_string(), "2+w");
        assert_eq!(x.sigma().to_string(), "2-w");
    }

    #[test]
    fn inverse_and_valuation() {
        let f = f3();
        let x = Quad::from_ints(&f, 3, 6);
        assert_eq!(x.valuation(), Some(1));
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-1));
        assert!(x.mul(&y).approx_eq(&Quad::one(&f)));
    }
}
