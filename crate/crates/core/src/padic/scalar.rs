use std::cmp::min;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Field;
use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `None` is the exact zero; `Some(a)` is `O(p^a)`.
    Zero { abs: Option<i64> },
    /// `p^val * unit`, `unit` a residue mod `p^rel` prime to `p`.
    Unit {
        val: i64,
        unit: BigUint,
        rel: u32,
        exact: bool,
    },
}

/// A truncated element of `Q_p`.
///
/// Precision is tracked as relative precision of the unit part, capped at the
/// working precision of the field. Values marked `exact` came from rational
/// inputs through ring operations; when such values cancel completely the
/// result is certified to be the exact zero.
#[derive(Clone)]
pub struct PAdic {
    field: Field,
    repr: Repr,
}

impl PAdic {
    pub fn zero(field: &Field) -> Self {
        PAdic { field: field.clone(), repr: Repr::Zero { abs: None } }
    }

    /// Zero known only modulo `p^abs`.
    pub fn approx_zero(field: &Field, abs: i64) -> Self {
        PAdic { field: field.clone(), repr: Repr::Zero { abs: Some(abs) } }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: &Field, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(field);
        }
        let p = BigUint::from(field.p());
        let mut mag = n.magnitude().clone();
        let mut val = 0i64;
        loop {
            let (q, r) = mag.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            mag = q;
            val += 1;
        }
        let d = field.precision();
        let modulus = field.pow(d);
        let mut unit = mag % &modulus;
        if n.sign() == Sign::Minus {
            unit = &modulus - unit;
        }
        PAdic { field: field.clone(), repr: Repr::Unit { val, unit, rel: d, exact: true } }
    }

    /// Image of `num/den`, exact, with full working precision.
    pub fn from_rational(field: &Field, num: i64, den: i64) -> Result<Self> {
        Self::from_big_rational(field, &BigInt::from(num), &BigInt::from(den))
    }

    pub fn from_big_rational(field: &Field, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(LabError::DivisionByZero);
        }
        let n = Self::from_bigint(field, num);
        let d = Self::from_bigint(field, den);
        Ok(n.mul(&d.inv()?))
    }

    /// `p^k`, exact.
    pub fn p_pow(field: &Field, k: i64) -> Self {
        PAdic {
            field: field.clone(),
            repr: Repr::Unit { val: k, unit: BigUint::one(), rel: field.precision(), exact: true },
        }
    }

    fn from_parts(field: &Field, mut val: i64, unit: BigUint, mut rel: u32, exact: bool) -> Self {
        let d = field.precision();
        let mut x = unit;
        if rel > d {
            x %= field.pow(d);
            rel = d;
        }
        if x.is_zero() || rel == 0 {
            let abs = if exact && rel > 0 { None } else { Some(val + rel as i64) };
            return PAdic { field: field.clone(), repr: Repr::Zero { abs } };
        }
        let p = BigUint::from(field.p());
        loop {
            let (q, r) = x.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            x = q;
            val += 1;
            rel -= 1;
        }
        PAdic { field: field.clone(), repr: Repr::Unit { val, unit: x, rel, exact } }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` when the value is zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// Absolute precision; `None` for the exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    pub fn relative_precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { rel, .. } => *rel,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Zero { abs } => abs.is_none(),
            Repr::Unit { exact, .. } => *exact,
        }
    }

    /// Marks the value as approximate (used for Hensel-lifted roots).
    pub fn inexact(mut self) -> Self {
        match &mut self.repr {
            Repr::Zero { abs } => {
                if abs.is_none() {
                    *abs = Some(self.field.precision() as i64);
                }
            }
            Repr::Unit { exact, .. } => *exact = false,
        }
        self
    }

    /// The unit part as a residue mod `p^rel`.
    pub fn unit(&self) -> Option<(&BigUint, u32)> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, rel, .. } => Some((unit, *rel)),
        }
    }

    pub fn is_integral(&self) -> Result<bool> {
        match &self.repr {
            Repr::Zero { abs: None } => Ok(true),
            Repr::Zero { abs: Some(a) } => {
                if *a >= 0 {
                    Ok(true)
                } else {
                    Err(LabError::PrecisionExhausted("integrality undecidable"))
                }
            }
            Repr::Unit { val, .. } => Ok(*val >= 0),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { val, unit, rel, exact } => {
                let m = self.field.pow(*rel);
                PAdic {
                    field: self.field.clone(),
                    repr: Repr::Unit { val: *val, unit: m - unit, rel: *rel, exact: *exact },
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        use Repr::*;
        match (&self.repr, &other.repr) {
            (Zero { abs: None }, _) => other.clone(),
            (_, Zero { abs: None }) => self.clone(),
            (Zero { abs: Some(a) }, Zero { abs: Some(b) }) => Self::approx_zero(&self.field, min(*a, *b)),
            (Zero { abs: Some(a) }, Unit { .. }) => other.reduce_abs(*a),
            (Unit { .. }, Zero { abs: Some(a) }) => self.reduce_abs(*a),
            (
                Unit { val: v1, unit: u1, rel: r1, exact: e1 },
                Unit { val: v2, unit: u2, rel: r2, exact: e2 },
            ) => {
                let abs = min(v1 + *r1 as i64, v2 + *r2 as i64);
                let v = min(*v1, *v2);
                let width = (abs - v) as u32;
                let m = self.field.pow(width);
                let a = u1 * self.field.pow((v1 - v) as u32);
                let b = u2 * self.field.pow((v2 - v) as u32);
                let s = (a + b) % &m;
                Self::from_parts(&self.field, v, s, width, *e1 && *e2)
            }
        }
    }

    /// Forget all digits at or beyond `p^abs`.
    fn reduce_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs: a } => {
                let a = a.map_or(abs, |a| min(a, abs));
                Self::approx_zero(&self.field, a)
            }
            Repr::Unit { val, unit, rel, .. } => {
                if *val >= abs {
                    return Self::approx_zero(&self.field, abs);
                }
                let r = min(*rel as i64, abs - val) as u32;
                let u = unit % self.field.pow(r);
                PAdic { field: self.field.clone(), repr: Repr::Unit { val: *val, unit: u, rel: r, exact: false } }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        use Repr::*;
        match (&self.repr, &other.repr) {
            (Zero { abs: None }, _) | (_, Zero { abs: None }) => Self::zero(&self.field),
            (Zero { abs: Some(a) }, Zero { abs: Some(b) }) => Self::approx_zero(&self.field, a + b),
            (Zero { abs: Some(a) }, Unit { val, .. }) | (Unit { val, .. }, Zero { abs: Some(a) }) => {
                Self::approx_zero(&self.field, a + val)
            }
            (
                Unit { val: v1, unit: u1, rel: r1, exact: e1 },
                Unit { val: v2, unit: u2, rel: r2, exact: e2 },
            ) => {
                let r = min(*r1, *r2);
                let m = self.field.pow(r);
                let u = (u1 * u2) % m;
                PAdic {
                    field: self.field.clone(),
                    repr: Unit { val: v1 + v2, unit: u, rel: r, exact: *e1 && *e2 },
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { abs: None } => Err(LabError::DivisionByZero),
            Repr::Zero { .. } => Err(LabError::PrecisionExhausted("inverse of a value indistinguishable from zero")),
            Repr::Unit { val, unit, rel, exact } => {
                let m = self.field.pow(*rel);
                let inv = unit.modinv(&m).expect("unit is prime to p");
                Ok(PAdic {
                    field: self.field.clone(),
                    repr: Repr::Unit { val: -val, unit: inv, rel: *rel, exact: *exact },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiply by `p^k` without precision loss.
    pub fn scale_p(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs: None } => self.clone(),
            Repr::Zero { abs: Some(a) } => Self::approx_zero(&self.field, a + k),
            Repr::Unit { val, unit, rel, exact } => PAdic {
                field: self.field.clone(),
                repr: Repr::Unit { val: val + k, unit: unit.clone(), rel: *rel, exact: *exact },
            },
        }
    }

    /// `x / p^{val(x)}`.
    pub fn unit_part(&self) -> Option<Self> {
        self.valuation().map(|v| self.scale_p(-v))
    }

    /// Canonical representative of `x mod p^k`: the digits of `x` strictly
    /// below `p^k`. The result is exact.
    pub fn truncate(&self, k: i64) -> Result<Self> {
        match &self.repr {
            Repr::Zero { abs: None } => Ok(self.clone()),
            Repr::Zero { abs: Some(a) } => {
                if *a >= k {
                    Ok(Self::zero(&self.field))
                } else {
                    Err(LabError::PrecisionExhausted("truncation below known digits"))
                }
            }
            Repr::Unit { val, unit, rel, .. } => {
                if *val >= k {
                    return Ok(Self::zero(&self.field));
                }
                if val + (*rel as i64) < k {
                    return Err(LabError::PrecisionExhausted("truncation below known digits"));
                }
                let w = (k - val) as u32;
                let u = unit % self.field.pow(w);
                Ok(PAdic {
                    field: self.field.clone(),
                    repr: Repr::Unit { val: *val, unit: u, rel: self.field.precision(), exact: true },
                })
            }
        }
    }

    /// For `x` with `val(x) >= 0`: the integer `x mod p^k` in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        match &self.repr {
            Repr::Zero { abs: None } => Ok(BigUint::zero()),
            Repr::Zero { abs: Some(a) } => {
                if *a >= k as i64 {
                    Ok(BigUint::zero())
                } else {
                    Err(LabError::PrecisionExhausted("residue below known digits"))
                }
            }
            Repr::Unit { val, unit, rel, .. } => {
                if *val < 0 {
                    return Err(LabError::Dimension("residue of a non-integral element".into()));
                }
                if *val >= k as i64 {
                    return Ok(BigUint::zero());
                }
                if val + (*rel as i64) < k as i64 {
                    return Err(LabError::PrecisionExhausted("residue below known digits"));
                }
                let w = k - *val as u32;
                Ok((unit % self.field.pow(w)) * self.field.pow(*val as u32))
            }
        }
    }

    /// Residue mod `p` of an integral element, as a small integer.
    pub fn residue_mod_p(&self) -> Result<u64> {
        Ok(self.residue(1)?.to_u64().unwrap_or(0))
    }

    /// Square root of a unit by Newton iteration from the residue root `x0`.
    pub fn sqrt_from(&self, x0: u64) -> Result<Self> {
        let field = &self.field;
        let p = field.p();
        if self.valuation() != Some(0) || x0.is_multiple_of(p) {
            return Err(LabError::Dimension("square root needs a unit radicand and unit seed".into()));
        }
        if !(x0 * x0 + p - self.residue_mod_p()?).is_multiple_of(p) {
            return Err(LabError::Dimension("seed is not a residue square root".into()));
        }
        let two = Self::from_int(field, 2);
        let mut x = Self::from_int(field, x0 as i64);
        // Only an exact seed can certify the root: later iterates agree with
        // the true root to working precision but are not equal to it.
        let certified = self.is_exact() && x.mul(&x).sub(self).is_exact_zero();
        let target = self.relative_precision();
        let mut known = 1u32;
        while !certified && known < target {
            let err = x.mul(&x).sub(self);
            x = x.sub(&err.div(&two.mul(&x))?);
            known = known.saturating_mul(2);
        }
        let x = x.reduce_rel(target);
        Ok(if certified { x } else { x.inexact() })
    }

    fn reduce_rel(self, r: u32) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, rel, exact } if *rel > r => PAdic {
                repr: Repr::Unit { val: *val, unit: unit % self.field.pow(r), rel: r, exact: *exact },
                field: self.field,
            },
            _ => self,
        }
    }

    /// Structural key of a canonical (exact, truncated) value.
    pub fn key(&self) -> (i64, BigUint) {
        match &self.repr {
            Repr::Zero { .. } => (i64::MAX, BigUint::zero()),
            Repr::Unit { val, unit, .. } => (*val, unit.clone()),
        }
    }

    /// Equality up to the joint precision of both values.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// A rational `num/den` with `den > 0` congruent to `self` at its precision.
    /// Small-height rationals are recovered exactly; otherwise the balanced
    /// integer digit expansion is used.
    pub fn to_rational(&self) -> (BigInt, BigInt) {
        match &self.repr {
            Repr::Zero { .. } => (BigInt::zero(), BigInt::one()),
            Repr::Unit { val, unit, rel, .. } => {
                let m = BigInt::from(self.field.pow(*rel));
                let u = BigInt::from(unit.clone());
                let (mut num, mut den) = reconstruct(&u, &m).unwrap_or_else(|| {
                    let half: BigInt = &m / 2;
                    if u > half {
                        (u.clone() - &m, BigInt::one())
                    } else {
                        (u.clone(), BigInt::one())
                    }
                });
                let p = BigInt::from(self.field.p());
                if *val >= 0 {
                    num *= p.pow(*val as u32);
                } else {
                    den *= p.pow((-val) as u32);
                }
                (num, den)
            }
        }
    }
}

/// Small `a/b` with `a = b*u mod m`, if one with both sides below `10^6` and
/// within the classical reconstruction bound exists.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let limit = BigInt::from(1_000_000u32);
    let bound: BigInt = (m / 2u32).sqrt();
    let bound = if bound < limit { bound } else { limit };
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (mut a, mut b) = (r1, t1);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    let g = a.gcd(&b);
    if !g.is_one() {
        return None;
    }
    Some((a, b))
}

impl PartialEq for PAdic {
    /// Structural equality; use [`PAdic::approx_eq`] for numerical comparison.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.repr == other.repr
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs: None } => write!(f, "0"),
            Repr::Zero { abs: Some(a) } => write!(f, "O({}^{})", self.field.p(), a),
            Repr::Unit { .. } => {
                write!(f, "{} + O({}^{})", self, self.field.p(), self.abs_precision().unwrap_or(0))
            }
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_rational();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
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
    fn from_rational_examples() {
        let f = f3();
        let x = PAdic::from_rational(&f, 10, 1).unwrap();
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.residue(48).unwrap(), BigUint::from(10u32));
        let y = PAdic::from_rational(&f, 9, 2).unwrap();
        assert_eq!(y.valuation(), Some(2));
        let (u, _) = y.unit().unwrap();
        // 2^{-1} mod 9 = 5
        assert_eq!(u % BigUint::from(9u32), BigUint::from(5u32));
        // 2 * unit == 1 mod 3^48
        assert_eq!((u * 2u32) % f.pow(48), BigUint::one());
        let z = PAdic::from_rational(&f, 0, 1).unwrap();
        assert!(z.is_exact_zero());
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn arithmetic_examples() {
        let f = f3();
        let three = PAdic::from_int(&f, 3);
        let inv = three.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.unit().unwrap().0, &BigUint::one());
        assert_eq!(three.mul(&inv).valuation(), Some(0));
        let s = PAdic::from_int(&f, 4).add(&PAdic::from_int(&f, -4));
        assert!(s.is_exact_zero());
        assert_eq!(PAdic::zero(&f).inv().unwrap_err(), LabError::DivisionByZero);
        let t = PAdic::from_int(&f, 4).add(&PAdic::from_int(&f, -4).inexact());
        assert!(t.is_zero() && !t.is_exact_zero());
        assert!(matches!(t.inv(), Err(LabError::PrecisionExhausted(_))));
    }

    #[test]
    fn truncation_and_display() {
        let f = f3();
        let x = PAdic::from_rational(&f, 7, 3).unwrap(); // 7/3 = 1/3 + 2
        assert_eq!(x.truncate(0).unwrap().to_string(), "1/3");
        assert_eq!(x.truncate(1).unwrap().to_string(), "7/3");
        assert!(x.truncate(-1).unwrap().is_exact_zero());
        assert_eq!(PAdic::from_rational(&f, -5, 7).unwrap().to_string(), "-5/7");
        assert_eq!(PAdic::from_rational(&f, 2, 9).unwrap().to_string(), "2/9");
    }

    #[test]
    fn sqrt_lifts() {
        let f = f3();
        let seven = PAdic::from_int(&f, 7);
        let r = seven.sqrt_from(1).unwrap();
        assert!(r.mul(&r).approx_eq(&seven));
        assert!(!r.is_exact());
        let four = PAdic::from_int(&f, 4);
        let two = four.sqrt_from(2).unwrap();
        assert!(two.is_exact());
        assert_eq!(two.to_string(), "2");
    }
}
