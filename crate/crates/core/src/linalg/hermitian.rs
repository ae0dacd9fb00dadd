use super::matrix::Matrix;
use crate::error::{LabError, Result};
use crate::padic::{solve_norm_equation, PAdic, Quad};

/// Finds `A` with `ᵗA^σ A = M` for a nonsingular hermitian `M`.
///
/// The form is first diagonalized by hermitian Gram-Schmidt with a minimal
/// valuation pivot; when only an off-diagonal entry attains the minimum, the
/// vector `e_i + z e_j` with `z` in `{1, w}` is used instead. Diagonal entries
/// of even valuation are norms. Entries of odd valuation are paired: the
/// plane `d1|x|^2 + d2|y|^2` contains a vector of even length, and its
/// orthogonal complement then also has even length.
pub fn hermitian_split(m: &Matrix<Quad>) -> Result<Matrix<Quad>> {
    let field = m.field().clone();
    let n = m.rows();
    if !m.is_square() {
        return Err(LabError::Dimension("hermitian_split needs a square matrix".into()));
    }
    match m.val_det()? {
        None => return Err(LabError::SingularSystem),
        Some(v) if v.rem_euclid(2) == 1 => return Err(LabError::NotSplit),
        _ => {}
    }
    let gram = |b: &Matrix<Quad>| b.adjoint().mul(m).mul(b);
    let mut basis = Matrix::<Quad>::identity(&field, n);
    for k in 0..n {
        let g = gram(&basis);
        let mut best: Option<(i64, bool, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = g[(i, j)].valuation() {
                    // prefer diagonal entries on ties
                    let cand = (v, i != j, i, j);
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let (v, off_diag, i, j) =
            best.ok_or(LabError::PrecisionExhausted("hermitian form degenerate at precision"))?;
        if off_diag {
            let mut done = false;
            for z in [Quad::one(&field), Quad::omega(&field)] {
                let mut cand = basis.clone();
                for r in 0..n {
                    cand[(r, i)] = basis[(r, i)].add(&z.mul(&basis[(r, j)]));
                }
                if gram(&cand)[(i, i)].valuation() == Some(v) {
                    basis = cand;
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(LabError::PrecisionExhausted("no anisotropic pivot found"));
            }
        }
        basis.swap_cols(k, i);
        let g = gram(&basis);
        let pivot_inv = g[(k, k)].inv()?;
        for j in k + 1..n {
            let t = g[(k, j)].mul(&pivot_inv);
            for r in 0..n {
                let d = t.mul(&basis[(r, k)]);
                basis[(r, j)] = basis[(r, j)].sub(&d);
            }
        }
    }
    let g = gram(&basis);
    let diag: Vec<PAdic> = (0..n).map(|k| g[(k, k)].re.clone()).collect();
    let mut odd: Vec<usize> = Vec::new();
    for k in 0..n {
        let v = diag[k].valuation().ok_or(LabError::PrecisionExhausted("zero pivot"))?;
        if v.rem_euclid(2) == 0 {
            let nu = solve_norm_equation(&diag[k])?;
            let nu_inv = nu.inv()?;
            for r in 0..n {
                basis[(r, k)] = basis[(r, k)].mul(&nu_inv);
            }
        } else {
            odd.push(k);
        }
    }
    if odd.len() % 2 == 1 {
        return Err(LabError::NotSplit);
    }
    for pair in odd.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        split_odd_plane(&mut basis, a, b, &diag[a], &diag[b])?;
    }
    // columns of `basis` are orthonormal, so A = basis^{-1}
    basis.inverse()
}

/// Replaces basis columns `a`, `b` (orthogonal, lengths `d1`, `d2` of odd
/// valuation) by an orthonormal pair spanning the same plane.
fn split_odd_plane(basis: &mut Matrix<Quad>, a: usize, b: usize, d1: &PAdic, d2: &PAdic) -> Result<()> {
    let field = basis.field().clone();
    let k = d1.valuation().expect("nonzero");
    let l = d2.valuation().expect("nonzero");
    let u1 = d1.scale_p(-k);
    let u2 = d2.scale_p(-l);
    // N(z) = -u1/u2 + p makes d1 + d2 N(y) = p^{k+1} u2 for y = p^{(k-l)/2} z.
    let target = u1.neg().div(&u2)?.add(&PAdic::from_int(&field, field.p() as i64));
    let z = solve_norm_equation(&target)?;
    let y = z.scale_p((k - l) / 2);
    let s = d1.add(&d2.mul(&y.norm()));
    let n = basis.rows();
    let col_a = basis.column(a);
    let col_b = basis.column(b);
    let d1q = Quad::from_base(d1.clone());
    let d2q = Quad::from_base(d2.clone());
    // w = e_a + y e_b, w' = σ(y) d2 e_a - d1 e_b
    let w: Vec<Quad> = (0..n).map(|r| col_a[r].add(&y.mul(&col_b[r]))).collect();
    let c = y.sigma().mul(&d2q);
    let w2: Vec<Quad> = (0..n).map(|r| c.mul(&col_a[r]).sub(&d1q.mul(&col_b[r]))).collect();
    let s2 = d1.mul(d2).mul(&s);
    let nu1 = solve_norm_equation(&s)?.inv()?;
    let nu2 = solve_norm_equation(&s2)?.inv()?;
    for r in 0..n {
        basis[(r, a)] = w[r].mul(&nu1);
        basis[(r, b)] = w2[r].mul(&nu2);
    }
    Ok(())
}
