use crate::error::{LabError, Result};
use crate::geometry::{blocks, conjugate, Element};
use crate::lattice::{lattices_in_box, module_closure, Lattice};
use crate::linalg::Matrix;
use crate::padic::LocalScalar;

/// Default bound `p^4` on the order of the box `p^lo O^m / p^hi O^m`.
pub const DEFAULT_ORACLE_BOUND: u32 = 4;

/// Largest rank `m = n - 1` the oracle accepts.
pub const MAX_ORACLE_RANK: usize = 2;

/// Orbital integral computed by brute force: every canonical basis `B` in a
/// box containing all candidate lattices is tried as `g^{-1}`, and
/// `g X g^{-1}` is tested for integrality entry by entry. On the unitary side
/// `B` must also span a self-dual lattice; on the general linear side each
/// hit contributes `(-1)^{val det g}` and the sum is multiplied by `ω(Y)`.
pub fn orbital_oracle(element: &Element, bound: u32) -> Result<i64> {
    match element {
        Element::U(x) => oracle_sum(x.matrix(), true, bound),
        Element::Gl(y) => {
            if y.n() == 1 {
                return oracle_sum(y.matrix(), false, bound);
            }
            let omega = y.transfer_sign()?.omega;
            Ok(omega * oracle_sum(y.matrix(), false, bound)?)
        }
    }
}

fn oracle_sum<S: LocalScalar>(x: &Matrix<S>, unitary: bool, bound: u32) -> Result<i64> {
    let field = x.field().clone();
    let n = x.rows();
    if n == 1 {
        return Ok(i64::from(x.is_integral()?));
    }
    let m = n - 1;
    let bl = blocks(x);
    // every admissible L contains O[X'] b and lies in the dual of O[ᵗX'] ᵗc
    let lmin = module_closure(&bl.corner, &bl.b)?;
    if !lmin.is_full_rank() {
        return Err(LabError::NotRss);
    }
    let lmax = if unitary {
        lmin.dual()?
    } else {
        let lc = module_closure(&bl.corner.transpose(), &bl.c)?;
        if !lc.is_full_rank() {
            return Err(LabError::NotRss);
        }
        lc.dual()?
    };
    let lo = lmax.basis().min_valuation().expect("nonzero basis");
    let hi = -lmin.basis().inverse()?.min_valuation().expect("nonzero inverse");
    if lo > hi {
        return Ok(0);
    }
    let exponent = S::DEGREE as i64 * m as i64 * (hi - lo);
    if m > MAX_ORACLE_RANK || exponent > bound as i64 {
        return Err(LabError::OracleTooLarge { rank: m, exponent: exponent.min(u32::MAX as i64) as u32, bound });
    }
    let mut total = 0i64;
    for lat in lattices_in_box::<S>(&field, m, lo, hi)? {
        let ginv = lat.basis();
        if unitary && !selfdual(&lat)? {
            continue;
        }
        let g = ginv.inverse()?;
        if !conjugate(x, &g)?.is_integral()? {
            continue;
        }
        if unitary {
            total += 1;
        } else {
            let v = g.val_det()?.ok_or(LabError::SingularSystem)?;
            total += if v.rem_euclid(2) == 0 { 1 } else { -1 };
        }
    }
    Ok(total)
}

/// Gram matrix of the standard form on `L` is integral and unimodular.
fn selfdual<S: LocalScalar>(l: &Lattice<S>) -> Result<bool> {
    let gram = l.gram();
    Ok(gram.is_integral()? && gram.val_det()? == Some(0))
}
