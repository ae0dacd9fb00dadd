use std::fmt;

use num_bigint::BigUint;

use super::field::Field;
use super::quad::Quad;
use super::scalar::PAdic;
use crate::error::Result;

/// Hashable identity of a canonical (exact, truncated) scalar.
pub type ScalarKey = Vec<(i64, BigUint)>;

/// Common surface of `F` and `E` used by matrices and lattices, which are
/// generic over the coefficient field of a complete DVR with uniformizer `p`.
pub trait LocalScalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Residue degree: `1` for `F`, `2` for `E`.
    const DEGREE: u32;

    fn field(&self) -> &Field;
    fn zero(field: &Field) -> Self;
    fn one(field: &Field) -> Self;
    fn from_base(x: PAdic) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// Galois conjugation (identity on `F`).
    fn conj(&self) -> Self;
    fn valuation(&self) -> Option<i64>;
    fn abs_precision(&self) -> Option<i64>;
    fn is_zero(&self) -> bool;
    fn is_exact_zero(&self) -> bool;
    fn scale_p(&self, k: i64) -> Self;
    fn truncate(&self, k: i64) -> Result<Self>;
    fn approx_eq(&self, o: &Self) -> bool;
    fn key(&self) -> ScalarKey;
    /// Representatives of the residue field, zero first.
    fn residue_reps(field: &Field) -> Vec<Self>;

    fn div_ref(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_ref(&o.inv()?))
    }

    fn p_pow(field: &Field, k: i64) -> Self {
        Self::from_base(PAdic::p_pow(field, k))
    }
}

impl LocalScalar for PAdic {
    const DEGREE: u32 = 1;

    fn field(&self) -> &Field {
        PAdic::field(self)
    }
    fn zero(field: &Field) -> Self {
        PAdic::zero(field)
    }
    fn one(field: &Field) -> Self {
        PAdic::one(field)
    }
    fn from_base(x: PAdic) -> Self {
        x
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv(&self) -> Result<Self> {
        PAdic::inv(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn valuation(&self) -> Option<i64> {
        PAdic::valuation(self)
    }
    fn abs_precision(&self) -> Option<i64> {
        PAdic::abs_precision(self)
    }
    fn is_zero(&self) -> bool {
        PAdic::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        PAdic::is_exact_zero(self)
    }
    fn scale_p(&self, k: i64) -> Self {
        PAdic::scale_p(self, k)
    }
    fn truncate(&self, k: i64) -> Result<Self> {
        PAdic::truncate(self, k)
    }
    fn approx_eq(&self, o: &Self) -> bool {
        PAdic::approx_eq(self, o)
    }
    fn key(&self) -> ScalarKey {
        vec![PAdic::key(self)]
    }
    fn residue_reps(field: &Field) -> Vec<Self> {
        (0..field.p() as i64).map(|k| PAdic::from_int(field, k)).collect()
    }
}

impl LocalScalar for Quad {
    const DEGREE: u32 = 2;

    fn field(&self) -> &Field {
        Quad::field(self)
    }
    fn zero(field: &Field) -> Self {
        Quad::zero(field)
    }
    fn one(field: &Field) -> Self {
        Quad::one(field)
    }
    fn from_base(x: PAdic) -> Self {
        Quad::from_base(x)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv(&self) -> Result<Self> {
        Quad::inv(self)
    }
    fn conj(&self) -> Self {
        self.sigma()
    }
    fn valuation(&self) -> Option<i64> {
        Quad::valuation(self)
    }
    fn abs_precision(&self) -> Option<i64> {
        Quad::abs_precision(self)
    }
    fn is_zero(&self) -> bool {
        Quad::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        Quad::is_exact_zero(self)
    }
    fn scale_p(&self, k: i64) -> Self {
        Quad::scale_p(self, k)
    }
    fn truncate(&self, k: i64) -> Result<Self> {
        Quad::truncate(self, k)
    }
    fn approx_eq(&self, o: &Self) -> bool {
        Quad::approx_eq(self, o)
    }
    fn key(&self) -> ScalarKey {
        let (a, b) = Quad::key(self);
        vec![a, b]
    }
    fn residue_reps(field: &Field) -> Vec<Self> {
        let p = field.p() as i64;
        (0..p)
            .flat_map(|b| (0..p).map(move |a| (a, b)))
            .map(|(a, b)| Quad::from_ints(field, a, b))
            .collect()
    }
}
