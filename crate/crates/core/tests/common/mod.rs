#![allow(dead_code)]

use fllab::geometry::HnElement;
use fllab::linalg::MatrixE;
use fllab::padic::{Field, FieldConfig, Quad};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn field(p: u64) -> Field {
    Field::new(FieldConfig::new(p).unwrap()).unwrap()
}

pub fn field_u(p: u64, u: i64) -> Field {
    Field::new(FieldConfig::with_u(p, u, 48).unwrap()).unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `v_p` of a nonzero rational.
pub fn rat_valuation(x: &BigRational, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut v = 0;
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    while (&n % &p) == BigInt::from(0) {
        n /= &p;
        v += 1;
    }
    while (&d % &p) == BigInt::from(0) {
        d /= &p;
        v -= 1;
    }
    v
}

/// Hermitian element with integral entries and `b` divisible by `p^k`,
/// `k` random in `0..3`: the orbital integrals of such elements take many
/// different values. `None` when the draw is not rss.
pub fn stress_hermitian<R: Rng + ?Sized>(rng: &mut R, f: &Field, n: usize) -> Option<HnElement> {
    let mut x = MatrixE::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let k = if j == n - 1 && i < n - 1 { rng.gen_range(0..3) } else { 0 };
            let im = if i == j { 0 } else { rng.gen_range(-6..=6) };
            let z = Quad::from_ints(f, rng.gen_range(-6..=6), im).scale_p(k);
            x[(j, i)] = z.sigma();
            x[(i, j)] = z;
        }
    }
    let x = HnElement::new(x).unwrap();
    x.is_rss().unwrap().then_some(x)
}
