mod common;

use std::f64::consts::TAU;

use common::field;
use fllab::geometry::Side;
use fllab::padic::PAdic;
use fllab::weil::{
    fourier_order_check, psi_value, sl2_relation_check, unit_selfdual_check, CharacterRing, Cyc,
    FiniteLevelFunction, WeilGenerator, WeilModel,
};
use fllab::LabError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eval(ring: &CharacterRing, c: &Cyc) -> Complex64 {
    let order = ring.order() as f64;
    let sum: Complex64 =
        c.coefficients().iter().enumerate().map(|(i, &k)| Complex64::from_polar(k as f64, TAU * i as f64 / order)).sum();
    sum / (ring.p() as f64).powi(c.denominator_exponent() as i32)
}

/// `e^{2πi k / d}`.
fn root(k: i128, d: i128) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k.rem_euclid(d) as f64 / d as f64)
}

fn close(x: Complex64, y: Complex64) -> bool {
    (x - y).norm() < 1e-8
}

/// `B(x, y) = q(x + y) - q(x) - q(y)` on integer coordinates.
fn pairing(side: Side, u: i64, x: &[i64], y: &[i64]) -> i128 {
    let q = |z: &[i128]| -> i128 {
        let m = z.len() / 2;
        match side {
            Side::Gl => (0..m).map(|i| z[i] * z[i + m]).sum(),
            Side::U => (0..m).map(|i| z[2 * i] * z[2 * i] - u as i128 * z[2 * i + 1] * z[2 * i + 1]).sum(),
        }
    };
    let xi: Vec<i128> = x.iter().map(|&v| v as i128).collect();
    let yi: Vec<i128> = y.iter().map(|&v| v as i128).collect();
    let s: Vec<i128> = xi.iter().zip(&yi).map(|(a, b)| a + b).collect();
    q(&s) - q(&xi) - q(&yi)
}

fn grid(dim: usize, l: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|t| (0..l).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// `(Ff)(y) = Σ_x f(x) ψ(B(x, y)) p^{-b dim}` in floating point.
fn fourier_oracle(model: &WeilModel, u: i64, f: &FiniteLevelFunction, y: &[i64]) -> Complex64 {
    let (a, b) = f.level();
    let p = f.ring().p() as i64;
    let l = p.pow(a + b);
    let mut sum = Complex64::new(0.0, 0.0);
    for x in grid(f.dim(), l) {
        // x = t p^{-a}, y = s p^{-b}
        sum += eval(f.ring(), f.value_at(&x)) * root(pairing(model.side(), u, &x, y), l as i128);
    }
    sum / (p as f64).powi((b as usize * f.dim()) as i32)
}

#[test]
fn psi_matches_exponential() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let m = rng.gen_range(1..=4u32);
        let j = rng.gen_range(0..=m);
        let k: i64 = rng.gen_range(-500..500);
        let d = 3i64.pow(j);
        let x = PAdic::from_rational(&f, k, d).unwrap();
        let ring = CharacterRing::new(3, m);
        let v = psi_value(&x, m).unwrap();
        assert!(close(eval(&ring, &v), root(k as i128, d as i128)), "{k}/{d}");
    }
    assert_eq!(psi_value(&PAdic::from_rational(&f, 1, 27).unwrap(), 2).unwrap_err(), LabError::ConductorExceeded);
}

#[test]
fn fourier_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (p, n, a, b) in [(3, 2, 1, 0), (3, 2, 0, 1), (3, 2, 1, 1), (5, 2, 1, 0), (3, 3, 1, 0)] {
        let f = field(p);
        for side in [Side::Gl, Side::U] {
            let model = WeilModel::new(&f, side, n).unwrap();
            let g = model.random(a, b, &mut rng);
            let h = model.fourier(&g).unwrap();
            assert_eq!(h.level(), (b, a));
            let l = (p as i64).pow(a + b);
            for y in grid(g.dim(), l) {
                assert!(close(eval(h.ring(), h.value_at(&y)), fourier_oracle(&model, f.u(), &g, &y)), "{side:?} {y:?}");
            }
        }
    }
}

#[test]
fn n_action_matches_direct_product() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for side in [Side::Gl, Side::U] {
        let model = WeilModel::new(&f, side, 2).unwrap();
        for (b, k, d) in [(1u32, 1i64, 1i64), (1, -2, 1), (2, 1, 3), (2, 4, 3)] {
            let g = model.random(1, b, &mut rng);
            let l = 3i64.pow(1 + b);
            let t = PAdic::from_rational(&f, k, d).unwrap();
            let h = model.n_action(&t, &g).unwrap();
            for x in grid(g.dim(), l) {
                // ψ(t q(x)) with q(x) = B(x, x) / 2 and x = t p^{-1}
                let qx = pairing(side, f.u(), &x, &x) / 2;
                let expect = eval(g.ring(), g.value_at(&x)) * root(k as i128 * qx, 9 * d as i128);
                assert!(close(eval(h.ring(), h.value_at(&x)), expect));
            }
        }
        let g = model.random(1, 1, &mut rng);
        assert_eq!(model.n_action(&PAdic::from_rational(&f, 1, 3).unwrap(), &g).unwrap_err(), LabError::ConductorExceeded);
    }
}

#[test]
fn plancherel_and_exchange() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for p in [3u64, 5] {
        let f = field(p);
        for side in [Side::Gl, Side::U] {
            let model = WeilModel::new(&f, side, 2).unwrap();
            for (a, b) in [(1, 0), (0, 1), (1, 1)] {
                let g = model.random(a, b, &mut rng);
                let h = model.fourier(&g).unwrap();
                assert_eq!(h.norm_squared(), g.norm_squared());
                let v: Vec<i64> = (0..g.dim()).map(|_| rng.gen_range(0..20)).collect();
                let lhs = model.fourier(&g.translate(&v)).unwrap();
                assert_eq!(lhs, model.modulate(&h, &v).unwrap());
            }
        }
    }
}

#[test]
fn fourier_and_n_do_not_commute() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for side in [Side::Gl, Side::U] {
        let model = WeilModel::new(&f, side, 2).unwrap();
        let g = model.random(1, 1, &mut rng);
        let one = WeilGenerator::N(PAdic::one(&f));
        let wn = model.apply(&[WeilGenerator::W, one.clone()], &g).unwrap();
        let nw = model.apply(&[one, WeilGenerator::W], &g).unwrap();
        assert_ne!(wn, nw);
    }
}

#[test]
fn values_do_not_depend_on_representatives() {
    let f = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let model = WeilModel::new(&f, Side::U, 3).unwrap();
    let g = model.random(1, 0, &mut rng);
    for t in grid(4, 3) {
        let shifted: Vec<i64> = t.iter().map(|x| x + 3 * rng.gen_range(-5..5)).collect();
        assert_eq!(g.value_at(&t), g.value_at(&shifted));
    }
}

#[test]
fn identities_hold_across_primes_and_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for p in [3u64, 5] {
        let f = field(p);
        for n in [2, 3] {
            for side in [Side::Gl, Side::U] {
                let model = WeilModel::new(&f, side, n).unwrap();
                assert!(unit_selfdual_check(&model).unwrap(), "p={p} n={n} {side:?}");
                if n == 2 || p == 3 {
                    assert!(fourier_order_check(&model, 1, 0, 2, &mut rng).unwrap());
                }
                if n == 2 {
                    assert!(sl2_relation_check(&model, 1, 2, &mut rng).unwrap());
                }
            }
        }
    }
}
