use std::collections::{HashSet, VecDeque};

use super::{module_closure, Lattice};
use crate::error::{LabError, Result};
use crate::linalg::Matrix;
use crate::padic::{Field, LocalScalar};

/// Default bound `p^12` on the order of the quotients being enumerated.
pub const DEFAULT_GUARD_EXPONENT: u32 = 12;

fn check_guard<S: LocalScalar>(index: i64, bound: u32) -> Result<()> {
    let exponent = index.max(0) as u64 * S::DEGREE as u64;
    if exponent > bound as u64 {
        return Err(LabError::ExplosionGuard { exponent: exponent.min(u32::MAX as u64) as u32, bound });
    }
    Ok(())
}

/// Nonzero residue vectors up to scaling, normalized so that the first nonzero
/// coordinate is `1`.
fn projective_points<S: LocalScalar>(field: &Field, m: usize) -> Vec<Vec<S>> {
    let reps = S::residue_reps(field);
    let q = reps.len();
    let mut out = Vec::new();
    for lead in 0..m {
        let free = m - lead - 1;
        let count = q.pow(free as u32);
        for mut idx in 0..count {
            let mut v = vec![S::zero(field); m];
            v[lead] = S::one(field);
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = reps[idx % q].clone();
                idx /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Breadth-first search from `start` over `T`-stable lattices, where each step
/// adjoins `O[T] v` for some `v ∈ p^{-1} L \ L` passing `admissible`. Every
/// stable `L' ⊋ L` inside the admissible region contains such a `v` (an
/// element of order `p` in `L'/L`), so the search is complete.
fn stable_search<S: LocalScalar>(
    start: &Lattice<S>,
    t: &Matrix<S>,
    admissible_vector: impl Fn(&Lattice<S>, &[S]) -> Result<bool>,
    admissible_lattice: impl Fn(&Lattice<S>) -> Result<bool>,
) -> Result<Vec<Lattice<S>>> {
    let field = start.field().clone();
    let m = start.ambient();
    let points = projective_points::<S>(&field, m);
    let mut seen: HashSet<Lattice<S>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(l) = queue.pop_front() {
        let scaled = l.basis().map(|x| x.scale_p(-1));
        for x in &points {
            let v = scaled.mul_vec(x);
            if !admissible_vector(&l, &v)? {
                continue;
            }
            let next = l.sum(&module_closure(t, &v)?)?;
            if seen.contains(&next) || !admissible_lattice(&next)? {
                continue;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    let mut out: Vec<Lattice<S>> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// All `T`-stable lattices `L` with `L0 ⊆ L ⊆ L1`, sorted by canonical basis.
///
/// Both bounds must be `T`-stable and of full rank. Fails with
/// `ExplosionGuard` when `|L1 / L0|` exceeds `p^guard`.
pub fn enumerate_stable_between<S: LocalScalar>(
    l0: &Lattice<S>,
    l1: &Lattice<S>,
    t: &Matrix<S>,
    guard: u32,
) -> Result<Vec<Lattice<S>>> {
    if !l1.contains_lattice(l0)? {
        return Ok(Vec::new());
    }
    check_guard::<S>(l0.val_det() - l1.val_det(), guard)?;
    stable_search(l0, t, |_, v| l1.contains(v), |_| Ok(true))
}

/// All self-dual `T`-stable lattices containing `lmin` for the standard
/// hermitian form, sorted by canonical basis.
///
/// Only integral lattices are visited, so the search never leaves
/// `lmin^∨`. Fails with `ExplosionGuard` when `|L / lmin|` for a self-dual
/// `L` would exceed `p^guard`.
pub fn enumerate_selfdual_stable<S: LocalScalar>(
    lmin: &Lattice<S>,
    t: &Matrix<S>,
    guard: u32,
) -> Result<Vec<Lattice<S>>> {
    if !lmin.is_full_rank() {
        return Err(LabError::Dimension("lower bound is not of full rank".into()));
    }
    if !lmin.is_integral_form()? {
        return Ok(Vec::new());
    }
    check_guard::<S>(lmin.val_det(), guard)?;
    let found = stable_search(
        lmin,
        t,
        |l, v| {
            // v must pair integrally with L and with itself
            let pairing = l.basis().adjoint().mul_vec(v);
            let norm = v.iter().fold(S::zero(l.field()), |acc, x| acc.add_ref(&x.conj().mul_ref(x)));
            Ok(pairing.iter().all(|x| x.valuation().is_none_or(|k| k >= 0)) && norm.valuation().is_none_or(|k| k >= 0))
        },
        |l| l.is_integral_form(),
    )?;
    let mut out = Vec::new();
    for l in found {
        if l.is_selfdual()? {
            out.push(l);
        }
    }
    Ok(out)
}

/// Every full-rank lattice `L` with `p^hi O^m ⊆ L ⊆ p^lo O^m`, generated
/// directly from the shape of canonical bases: pivots `p^{k_i}` with
/// `lo ≤ k_i ≤ hi` and entries below a pivot ranging over
/// `p^lo O / p^{k_l} O`.
pub fn lattices_in_box<S: LocalScalar>(field: &Field, m: usize, lo: i64, hi: i64) -> Result<Vec<Lattice<S>>> {
    let reps = S::residue_reps(field);
    let q = reps.len();
    let mut out = Vec::new();
    let widths = (hi - lo + 1) as usize;
    let mut ks = vec![lo; m];
    for mut code in 0..widths.pow(m as u32) {
        for k in ks.iter_mut() {
            *k = lo + (code % widths) as i64;
            code /= widths;
        }
        // (row, col) slots strictly below the diagonal, each with k_row - lo digits
        let slots: Vec<(usize, usize)> = (0..m).flat_map(|j| (j + 1..m).map(move |l| (l, j))).collect();
        let digits: Vec<u32> = slots.iter().map(|&(l, _)| (ks[l] - lo) as u32).collect();
        let total: u32 = digits.iter().sum();
        for mut choice in 0..q.pow(total) {
            let mut b = Matrix::<S>::zeros(field, m, m);
            for (i, k) in ks.iter().enumerate() {
                b[(i, i)] = S::p_pow(field, *k);
            }
            for (&(l, j), &d) in slots.iter().zip(&digits) {
                let mut x = S::zero(field);
                for t in 0..d {
                    let r = &reps[choice % q];
                    choice /= q;
                    x = x.add_ref(&r.mul_ref(&S::p_pow(field, lo + t as i64)));
                }
                b[(l, j)] = x;
            }
            let lat = Lattice::from_generators(&b)?;
            let inner = (0..m).all(|i| {
                let mut e = vec![S::zero(field); m];
                e[i] = S::p_pow(field, hi);
                lat.contains(&e).unwrap_or(false)
            });
            if inner {
                out.push(lat);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
