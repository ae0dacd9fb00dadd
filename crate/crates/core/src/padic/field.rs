use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const DEFAULT_PRECISION: u32 = 48;
const MIN_PRECISION: u32 = 8;

/// User-facing description of `F = Q_p` and `E = F(w)`, `w^2 = u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u64,
    pub u: i64,
    pub precision: u32,
}

impl FieldConfig {
    /// Configuration with the smallest positive non-residue as `u`.
    pub fn new(p: u64) -> Result<Self> {
        let u = smallest_nonresidue(p)?;
        Self::with_u(p, u, DEFAULT_PRECISION)
    }

    pub fn with_u(p: u64, u: i64, precision: u32) -> Result<Self> {
        let cfg = FieldConfig { p, u, precision };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || !is_prime(self.p) {
            return Err(LabError::InvalidConfig("p must be an odd prime".into()));
        }
        if self.precision < MIN_PRECISION {
            return Err(LabError::InvalidConfig(format!(
                "precision must be at least {MIN_PRECISION}"
            )));
        }
        let r = self.u.rem_euclid(self.p as i64) as u64;
        if r == 0 || is_square_mod(r, self.p) {
            return Err(LabError::InvalidConfig(format!(
                "u = {} is not a quadratic non-residue mod {}",
                self.u, self.p
            )));
        }
        Ok(())
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn is_square_mod(r: u64, p: u64) -> bool {
    (0..p).any(|x| x * x % p == r % p)
}

pub fn smallest_nonresidue(p: u64) -> Result<i64> {
    if p < 3 || !is_prime(p) {
        return Err(LabError::InvalidConfig("p must be an odd prime".into()));
    }
    Ok((2..p).find(|&r| !is_square_mod(r, p)).expect("odd prime has a non-residue") as i64)
}

struct Inner {
    cfg: FieldConfig,
    powers: Vec<BigUint>,
}

/// Shared, immutable arithmetic context: the configuration plus a table of
/// powers of `p`. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl Field {
    pub fn new(cfg: FieldConfig) -> Result<Self> {
        cfg.validate()?;
        let base = BigUint::from(cfg.p);
        let mut powers = Vec::with_capacity(4 * cfg.precision as usize + 1);
        let mut acc = BigUint::from(1u32);
        for _ in 0..=4 * cfg.precision {
            powers.push(acc.clone());
            acc *= &base;
        }
        Ok(Field(Arc::new(Inner { cfg, powers })))
    }

    pub fn config(&self) -> FieldConfig {
        self.0.cfg
    }

    pub fn p(&self) -> u64 {
        self.0.cfg.p
    }

    pub fn u(&self) -> i64 {
        self.0.cfg.u
    }

    pub fn precision(&self) -> u32 {
        self.0.cfg.precision
    }

    /// `p^k` as an integer.
    pub fn pow(&self, k: u32) -> BigUint {
        match self.0.powers.get(k as usize) {
            Some(v) => v.clone(),
            None => BigUint::from(self.p()).pow(k),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.cfg == other.0.cfg
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.config();
        write!(f, "Field(p={}, u={}, D={})", c.p, c.u, c.precision)
    }
}
