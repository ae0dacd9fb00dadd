use super::quad::Quad;
use super::scalar::PAdic;
use crate::error::{LabError, Result};

/// Finds `nu` in `E` with `N(nu) = mu`.
///
/// The residue equation `x^2 - u y^2 = mu` is solved by search over `F_p`
/// (scanning `y` first so that `mu = 1` yields `nu = 1`); the coordinate with
/// a nonzero residue is then lifted by Newton iteration while the other is
/// kept fixed.
pub fn solve_norm_equation(mu: &PAdic) -> Result<Quad> {
    let field = mu.field().clone();
    if mu.is_exact_zero() {
        return Ok(Quad::zero(&field));
    }
    let v = mu
        .valuation()
        .ok_or(LabError::PrecisionExhausted("norm equation for a value indistinguishable from zero"))?;
    if v.rem_euclid(2) == 1 {
        return Err(LabError::OddValuation);
    }
    let unit = mu.scale_p(-v);
    let p = field.p();
    let u_mod = field.u().rem_euclid(p as i64) as u64;
    let r = unit.residue_mod_p()?;
    let (x0, y0) = (0..p)
        .flat_map(|y| (0..p).map(move |x| (x, y)))
        .find(|&(x, y)| (x * x + p * p - (u_mod * y % p) * y % p) % p == r && (x, y) != (0, 0))
        .expect("the residue norm map is surjective");
    let u = PAdic::from_int(&field, field.u());
    let nu = if x0 != 0 {
        // x^2 = mu + u y0^2
        let y = PAdic::from_int(&field, y0 as i64);
        let x = unit.add(&u.mul(&y).mul(&y)).sqrt_from(x0)?;
        Quad::new(x, y)
    } else {
        // y^2 = -mu / u
        let rhs = unit.neg().div(&u)?;
        let y = rhs.sqrt_from(y0)?;
        Quad::new(PAdic::zero(&field), y)
    };
    Ok(nu.scale_p(v / 2))
}
