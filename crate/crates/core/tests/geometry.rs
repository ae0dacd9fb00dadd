mod common;

use common::field;
use fllab::geometry::{
    blocks, gl_representative, matches, random_gl, random_unitary, sample_matched_pair, u_representative, GlnElement,
    HnElement,
};
use fllab::linalg::{MatrixE, MatrixF};
use fllab::padic::{PAdic, Quad};
use fllab::LabError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `a + b √u` with rational `a, b`.
#[derive(Clone, Debug, PartialEq)]
struct Qu {
    a: BigRational,
    b: BigRational,
}

impl Qu {
    fn int(a: i64, b: i64) -> Self {
        Qu { a: BigRational::from_integer(a.into()), b: BigRational::from_integer(b.into()) }
    }
    fn zero() -> Self {
        Qu::int(0, 0)
    }
    fn add(&self, o: &Self) -> Self {
        Qu { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub(&self, o: &Self) -> Self {
        Qu { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul(&self, o: &Self, u: i64) -> Self {
        let u = BigRational::from_integer(u.into());
        Qu { a: &self.a * &o.a + u * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn mat_vec(m: &[Vec<Qu>], v: &[Qu], u: i64) -> Vec<Qu> {
    m.iter().map(|r| r.iter().zip(v).fold(Qu::zero(), |acc, (x, y)| acc.add(&x.mul(y, u)))).collect()
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<Qu>], u: i64) -> Qu {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Qu::zero();
    for j in 0..n {
        let minor: Vec<Vec<Qu>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = m[0][j].mul(&det(&minor, u), u);
        total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

/// `X` is rss iff `b` is cyclic for `X'` and `c` is cyclic for `ᵗX'`:
/// both Krylov matrices are invertible.
fn rss_oracle(x: &[Vec<Qu>], u: i64) -> bool {
    let n = x.len();
    let m = n - 1;
    let corner: Vec<Vec<Qu>> = x[..m].iter().map(|r| r[..m].to_vec()).collect();
    let corner_t: Vec<Vec<Qu>> = (0..m).map(|i| (0..m).map(|j| corner[j][i].clone()).collect()).collect();
    let b: Vec<Qu> = (0..m).map(|i| x[i][m].clone()).collect();
    let c: Vec<Qu> = (0..m).map(|j| x[m][j].clone()).collect();
    let krylov = |t: &[Vec<Qu>], v: Vec<Qu>| {
        let mut cols = vec![v];
        for _ in 1..m {
            let next = mat_vec(t, cols.last().unwrap(), u);
            cols.push(next);
        }
        let rows: Vec<Vec<Qu>> = (0..m).map(|i| cols.iter().map(|col| col[i].clone()).collect()).collect();
        !det(&rows, u).is_zero()
    };
    krylov(&corner, b) && krylov(&corner_t, c)
}

/// Dimension of `{A ∈ gl_{n-1}(Q) : AX' = X'A, Ab = 0, cA = 0}`.
fn centralizer_dim(x: &[Vec<i64>]) -> usize {
    let n = x.len();
    let m = n - 1;
    let var = |i: usize, j: usize| i * m + j;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let r = |k: i64| BigRational::from_integer(BigInt::from(k));
    for i in 0..m {
        for j in 0..m {
            let mut eq = vec![BigRational::zero(); m * m];
            for k in 0..m {
                eq[var(i, k)] += r(x[k][j]);
                eq[var(k, j)] -= r(x[i][k]);
            }
            rows.push(eq);
        }
        let mut eq = vec![BigRational::zero(); m * m];
        for k in 0..m {
            eq[var(i, k)] += r(x[k][m]);
        }
        rows.push(eq);
    }
    for j in 0..m {
        let mut eq = vec![BigRational::zero(); m * m];
        for k in 0..m {
            eq[var(k, j)] += r(x[m][k]);
        }
        rows.push(eq);
    }
    m * m - rank(rows)
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rk, p);
        let inv = BigRational::one() / rows[rk][c].clone();
        let pivot: Vec<BigRational> = rows[rk].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rk && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[rk] = pivot;
        rk += 1;
    }
    rk
}

fn tiny<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-1..=1)
}

#[test]
fn rss_agrees_with_krylov_oracle_on_gl() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mut yes, mut no) = (0, 0);
    for k in 0..100 {
        let n = 2 + k % 2;
        let ints: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| tiny(&mut rng)).collect()).collect();
        let rows: Vec<&[i64]> = ints.iter().map(|r| r.as_slice()).collect();
        let y = GlnElement::new(MatrixF::from_ints(&f, &rows)).unwrap();
        let q: Vec<Vec<Qu>> = ints.iter().map(|r| r.iter().map(|&a| Qu::int(a, 0)).collect()).collect();
        let expect = rss_oracle(&q, f.u());
        assert_eq!(y.is_rss().unwrap(), expect, "{ints:?}");
        if expect {
            yes += 1;
            // rss forces a trivial centralizer
            assert_eq!(centralizer_dim(&ints), 0, "{ints:?}");
        } else {
            no += 1;
        }
    }
    assert!(yes >= 20 && no >= 20, "{yes} rss, {no} not");
}

#[test]
fn trivial_centralizer_does_not_imply_rss() {
    // b = 1, c = 0: the centralizer is zero but c is not cyclic
    let ints = vec![vec![0, 1], vec![0, 0]];
    assert_eq!(centralizer_dim(&ints), 0);
    let f = field(3);
    let y = GlnElement::new(MatrixF::from_ints(&f, &[&[0, 1], &[0, 0]])).unwrap();
    assert!(!y.is_rss().unwrap());
}

#[test]
fn rss_agrees_with_krylov_oracle_on_hermitian() {
    let f = field(5);
    let u = f.u();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (mut yes, mut no) = (0, 0);
    for k in 0..100 {
        let n = 2 + k % 2;
        let mut x = MatrixE::zeros(&f, n, n);
        let mut q = vec![vec![Qu::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let sparse = rng.gen_bool(0.3);
                let a = if sparse { 0 } else { tiny(&mut rng) };
                let b = if sparse || i == j { 0 } else { tiny(&mut rng) };
                x[(i, j)] = Quad::from_ints(&f, a, b);
                x[(j, i)] = Quad::from_ints(&f, a, -b);
                q[i][j] = Qu::int(a, b);
                q[j][i] = Qu::int(a, -b);
            }
        }
        let x = HnElement::new(x).unwrap();
        let expect = rss_oracle(&q, u);
        assert_eq!(x.is_rss().unwrap(), expect);
        if expect {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 20 && no >= 20, "{yes} rss, {no} not");
}

#[test]
fn invariants_are_conjugation_invariant() {
    for p in [3u64, 5] {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(23 + p);
        for k in 0..100 {
            let n = 2 + k % 2;
            let pair = sample_matched_pair(&mut rng, &f, n, 20).unwrap();
            let g = random_unitary(&mut rng, &f, n - 1, 5).unwrap();
            let gx = pair.x.conjugate(&g).unwrap();
            assert!(gx.invariants().approx_eq(&pair.a));
            let h = random_gl(&mut rng, &f, n - 1, 5).unwrap();
            let hy = pair.y.conjugate(&h).unwrap();
            assert!(hy.invariants().approx_eq(&pair.a));
            assert!(matches(&gx, &hy).unwrap());
        }
    }
}

#[test]
fn transfer_sign_cocycle() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for k in 0..100 {
        let n = 2 + k % 2;
        let pair = sample_matched_pair(&mut rng, &f, n, 20).unwrap();
        let g = random_gl(&mut rng, &f, n - 1, 5).unwrap();
        let v = g.val_det().unwrap().unwrap();
        let w0 = pair.y.transfer_sign().unwrap().omega;
        let w1 = pair.y.conjugate(&g).unwrap().transfer_sign().unwrap().omega;
        assert_eq!(w1, w0 * if v.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    assert_eq!(
        fllab::geometry::Element::U(sample_matched_pair(&mut rng, &f, 2, 20).unwrap().x).transfer_sign().unwrap_err(),
        LabError::SideError
    );
}

#[test]
fn q_is_shared_and_given_by_moments() {
    let f = field(5);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for k in 0..60 {
        let n = 2 + k % 3;
        let pair = sample_matched_pair(&mut rng, &f, n, 30).unwrap();
        let q = pair.a.q().unwrap();
        assert!(pair.x.q().approx_eq(&q));
        assert!(pair.y.q().approx_eq(&q));
        // q = c b = a_2 - a_1^2
        let bl = blocks(pair.y.matrix());
        let cb = bl.c.iter().zip(&bl.b).fold(PAdic::zero(&f), |acc, (c, b)| acc.add(&c.mul(b)));
        assert!(cb.approx_eq(&q));
        if n >= 3 {
            let a = &pair.a.moments;
            assert!(a[1].sub(&a[0].mul(&a[0])).approx_eq(&q));
        }
    }
}

#[test]
fn transpose_and_representatives_round_trip() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for k in 0..60 {
        let n = 2 + k % 3;
        let pair = sample_matched_pair(&mut rng, &f, n, 30).unwrap();
        let xt = HnElement::new(pair.x.matrix().transpose()).unwrap();
        assert!(xt.invariants().approx_eq(&pair.a));
        assert!(gl_representative(&pair.a).unwrap().invariants().approx_eq(&pair.a));
        assert!(pair.a.hermitian_exists().unwrap());
        let x2 = u_representative(&pair.a).unwrap();
        assert!(x2.matrix().is_hermitian());
        assert!(x2.invariants().approx_eq(&pair.a));
    }
}
