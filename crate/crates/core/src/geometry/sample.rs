use rand::Rng;

use super::{gl_representative, GlnElement, HnElement, InvariantPoint};
use crate::error::{LabError, Result};
use crate::linalg::{Matrix, MatrixE, MatrixF};
use crate::padic::{Field, PAdic, Quad};

/// Rejection-sampling budget per requested element.
pub const MAX_REJECTIONS: usize = 1000;

/// A sampled rss hermitian element, its invariants, and the matching element
/// on the general linear side.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub x: HnElement,
    pub y: GlnElement,
    pub a: InvariantPoint,
}

/// Uniform over `{m / p^e : |m| <= height, e ∈ {0, 1}}`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R, field: &Field, height: i64) -> PAdic {
    let m = rng.gen_range(-height..=height);
    let e = rng.gen_range(0..=1);
    PAdic::from_int(field, m).scale_p(-e)
}

fn small_quad<R: Rng + ?Sized>(rng: &mut R, field: &Field, height: i64) -> Quad {
    Quad::new(small_rational(rng, field, height), small_rational(rng, field, height))
}

fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, field: &Field, n: usize, height: i64) -> MatrixE {
    let mut x = MatrixE::zeros(field, n, n);
    for i in 0..n {
        x[(i, i)] = Quad::from_base(small_rational(rng, field, height));
        for j in i + 1..n {
            let z = small_quad(rng, field, height);
            x[(j, i)] = z.sigma();
            x[(i, j)] = z;
        }
    }
    x
}

/// A random rss element of `h_n(F)`.
pub fn sample_hermitian<R: Rng + ?Sized>(rng: &mut R, field: &Field, n: usize, height: i64) -> Result<HnElement> {
    for _ in 0..MAX_REJECTIONS {
        let x = HnElement::new(random_hermitian(rng, field, n, height))?;
        if x.is_rss()? {
            return Ok(x);
        }
    }
    Err(LabError::SamplingExhausted(MAX_REJECTIONS))
}

/// Samples `X ∈ h_n^rs(F)`, sets `a` to its invariants and `Y` to the
/// general linear representative of `a`.
pub fn sample_matched_pair<R: Rng + ?Sized>(
    rng: &mut R,
    field: &Field,
    n: usize,
    height: i64,
) -> Result<MatchedPair> {
    if !(1..=4).contains(&n) {
        return Err(LabError::InvalidConfig(format!("n must be between 1 and 4, got {n}")));
    }
    let x = sample_hermitian(rng, field, n, height)?;
    let a = x.invariants();
    let y = gl_representative(&a)?;
    Ok(MatchedPair { x, y, a })
}

/// A random rss `Y ∈ gl_n(F)` whose invariants have no hermitian fiber.
pub fn sample_nonhermitian_point<R: Rng + ?Sized>(
    rng: &mut R,
    field: &Field,
    n: usize,
    height: i64,
) -> Result<(GlnElement, InvariantPoint)> {
    if n < 2 {
        return Err(LabError::InvalidConfig("every point has a hermitian fiber when n = 1".into()));
    }
    for _ in 0..MAX_REJECTIONS {
        let mut y = MatrixF::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                y[(i, j)] = small_rational(rng, field, height);
            }
        }
        let y = GlnElement::new(y)?;
        let a = y.invariants();
        if let Some(v) = a.hankel_val_det()? {
            if v.rem_euclid(2) == 1 {
                return Ok((y, a));
            }
        }
    }
    Err(LabError::SamplingExhausted(MAX_REJECTIONS))
}

/// Cayley transform `(I + A)(I - A)^{-1}` of a random anti-hermitian `A`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, field: &Field, m: usize, height: i64) -> Result<MatrixE> {
    for _ in 0..MAX_REJECTIONS {
        let mut a = MatrixE::zeros(field, m, m);
        for i in 0..m {
            a[(i, i)] = Quad::new(PAdic::zero(field), small_rational(rng, field, height));
            for j in i + 1..m {
                let z = small_quad(rng, field, height);
                a[(j, i)] = z.sigma().neg();
                a[(i, j)] = z;
            }
        }
        let id = Matrix::identity(field, m);
        match id.sub(&a).inverse() {
            Ok(inv) => return Ok(id.add(&a).mul(&inv)),
            Err(LabError::SingularSystem) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(LabError::SamplingExhausted(MAX_REJECTIONS))
}

/// A random invertible matrix over `F` with entries `m p^e`, `e ∈ {-1, 0, 1}`.
pub fn random_gl<R: Rng + ?Sized>(rng: &mut R, field: &Field, m: usize, height: i64) -> Result<MatrixF> {
    for _ in 0..MAX_REJECTIONS {
        let mut g = MatrixF::zeros(field, m, m);
        for i in 0..m {
            for j in 0..m {
                let k = rng.gen_range(-height..=height);
                g[(i, j)] = PAdic::from_int(field, k).scale_p(rng.gen_range(-1..=1));
            }
        }
        if g.val_det()?.is_some() {
            return Ok(g);
        }
    }
    Err(LabError::SamplingExhausted(MAX_REJECTIONS))
}
