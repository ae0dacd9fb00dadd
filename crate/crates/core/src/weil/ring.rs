use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{LabError, Result};
use crate::padic::{PAdic, Quad};

/// `Z[ζ, 1/p]` for `ζ` a primitive `p^m`-th root of unity.
///
/// Elements are integer coefficient vectors on `1, ζ, ..., ζ^{φ-1}` (reduced
/// mod the `p^m`-th cyclotomic polynomial) over a power of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterRing {
    p: u64,
    m: u32,
    order: usize,
    phi: usize,
}

/// Element of a [`CharacterRing`] in canonical form: trailing zero
/// coefficients dropped and the denominator exponent minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cyc {
    coeffs: Vec<i128>,
    den: u32,
}

impl CharacterRing {
    pub fn new(p: u64, m: u32) -> Self {
        assert!(m >= 1, "conductor exponent must be positive");
        let order = (p as usize).pow(m);
        CharacterRing { p, m, order, phi: order - order / p as usize }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Conductor exponent `m`.
    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// `p^m`, the order of `ζ`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Cyc {
        Cyc::default()
    }

    pub fn one(&self) -> Cyc {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Cyc {
        self.normalize(vec![k as i128], 0)
    }

    /// `ζ^k`.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let mut acc = self.accumulator();
        acc.add_rotated(self, &self.one(), k);
        acc.finish(self)
    }

    fn normalize(&self, mut coeffs: Vec<i128>, mut den: u32) -> Cyc {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Cyc::default();
        }
        let p = self.p as i128;
        while den > 0 && coeffs.iter().all(|c| c % p == 0) {
            for c in coeffs.iter_mut() {
                *c /= p;
            }
            den -= 1;
        }
        Cyc { coeffs, den }
    }

    /// Rewrites a coefficient vector on `ζ^0, ..., ζ^{p^m - 1}` in the
    /// canonical basis, using `ζ^{φ + r} = -Σ_{i < p-1} ζ^{i p^{m-1} + r}`.
    fn reduce(&self, mut buf: Vec<i128>, den: u32) -> Cyc {
        let block = self.order / self.p as usize;
        for k in self.phi..self.order {
            let c = buf[k];
            if c != 0 {
                let r = k - self.phi;
                for i in 0..self.p as usize - 1 {
                    buf[i * block + r] -= c;
                }
                buf[k] = 0;
            }
        }
        buf.truncate(self.phi);
        self.normalize(buf, den)
    }

    pub(crate) fn accumulator(&self) -> Accumulator {
        Accumulator { buf: vec![0; self.order], den: 0 }
    }

    fn align(&self, x: &Cyc, den: u32) -> Vec<i128> {
        let f = (self.p as i128).pow(den - x.den);
        x.coeffs.iter().map(|c| c * f).collect()
    }

    pub fn add(&self, x: &Cyc, y: &Cyc) -> Cyc {
        let den = x.den.max(y.den);
        let (a, b) = (self.align(x, den), self.align(y, den));
        let len = a.len().max(b.len());
        let v = (0..len).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect();
        self.normalize(v, den)
    }

    pub fn neg(&self, x: &Cyc) -> Cyc {
        Cyc { coeffs: x.coeffs.iter().map(|c| -c).collect(), den: x.den }
    }

    pub fn sub(&self, x: &Cyc, y: &Cyc) -> Cyc {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Cyc, y: &Cyc) -> Cyc {
        if x.coeffs.is_empty() || y.coeffs.is_empty() {
            return Cyc::default();
        }
        let mut buf = vec![0i128; self.order];
        for (i, a) in x.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                buf[(i + j) % self.order] += a * b;
            }
        }
        self.reduce(buf, x.den + y.den)
    }

    /// `x * p^e`.
    pub fn scale_p(&self, x: &Cyc, e: i64) -> Cyc {
        if e >= 0 {
            let f = (self.p as i128).pow(e as u32);
            self.normalize(x.coeffs.iter().map(|c| c * f).collect(), x.den)
        } else {
            self.normalize(x.coeffs.clone(), x.den + (-e) as u32)
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, x: &Cyc) -> Cyc {
        let mut buf = vec![0i128; self.order];
        for (i, c) in x.coeffs.iter().enumerate() {
            buf[(self.order - i) % self.order] += c;
        }
        self.reduce(buf, x.den)
    }

    /// `ψ(x) = ζ^k` with `k/p^m` the fractional part of `x`; `ψ` is trivial on
    /// `O_F` exactly.
    pub fn psi(&self, x: &PAdic) -> Result<Cyc> {
        match x.valuation() {
            None => Ok(self.one()),
            Some(v) if v >= 0 => Ok(self.one()),
            Some(v) if v < -(self.m as i64) => Err(LabError::ConductorExceeded),
            Some(_) => {
                let k = x.scale_p(self.m as i64).residue(self.m)?;
                Ok(self.zeta_pow(k.to_i64().expect("residue below p^m")))
            }
        }
    }

    /// `ψ_E = ψ ∘ Tr_{E/F}`.
    pub fn psi_e(&self, z: &Quad) -> Result<Cyc> {
        self.psi(&z.trace())
    }
}

/// Sum of rotated elements, reduced once at the end.
pub(crate) struct Accumulator {
    buf: Vec<i128>,
    den: u32,
}

impl Accumulator {
    /// Adds `x ζ^k`.
    pub(crate) fn add_rotated(&mut self, ring: &CharacterRing, x: &Cyc, k: i64) {
        if x.coeffs.is_empty() {
            return;
        }
        if x.den > self.den {
            let f = (ring.p as i128).pow(x.den - self.den);
            for c in self.buf.iter_mut() {
                *c *= f;
            }
            self.den = x.den;
        }
        let f = (ring.p as i128).pow(self.den - x.den);
        let n = ring.order;
        let shift = k.rem_euclid(n as i64) as usize;
        for (i, c) in x.coeffs.iter().enumerate() {
            let j = (i + shift) % n;
            self.buf[j] += c * f;
        }
    }

    pub(crate) fn finish(self, ring: &CharacterRing) -> Cyc {
        ring.reduce(self.buf, self.den)
    }
}

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients on `1, ζ, ζ^2, ...` (trailing zeros dropped).
    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    /// Exponent `e` of the denominator `p^e`.
    pub fn denominator_exponent(&self) -> u32 {
        self.den
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if self.den == 0 {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "({})/p^{}", terms.join(" + "), self.den)
        }
    }
}
