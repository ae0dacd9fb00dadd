//! Weil representation on finite-level functions of the `(b, c)` coordinates:
//! the partial Fourier transform, the action of `n(t)`, and exact checks of
//! the `SL_2` relations with values in a cyclotomic ring.

mod ring;

use rand::Rng;

use crate::error::{LabError, Result};
use crate::geometry::Side;
use crate::padic::{Field, PAdic};

pub use ring::{CharacterRing, Cyc};

/// Generators of `SL_2(F)` acting through [`WeilModel::apply`].
#[derive(Clone, Debug)]
pub enum WeilGenerator {
    /// `w = [[0, -1], [1, 0]]`, acting by the inverse partial Fourier
    /// transform `f ↦ (Ff)(-y)`; `F` itself realizes `w^{-1}` for the kernel
    /// `ψ(B(x, y))`.
    W,
    /// `n(t) = [[1, t], [0, 1]]`, acting by multiplication with `ψ(t q)`.
    N(PAdic),
}

/// A function on `F^{2m}` (the `b, c` coordinates over `F`, or the real and
/// imaginary parts of `b ∈ E^m`) supported on `p^{-a}O` and constant on
/// cosets of `p^b O` in each coordinate. Values are stored for the grid
/// points `x_k = t_k p^{-a}` with `0 <= t_k < p^{a+b}`, first coordinate
/// fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLevelFunction {
    side: Side,
    m: usize,
    a: u32,
    b: u32,
    ring: CharacterRing,
    values: Vec<Cyc>,
}

impl FiniteLevelFunction {
    pub fn side(&self) -> Side {
        self.side
    }

    /// `(a, b)`: support `p^{-a}O`, constant modulo `p^b O`.
    pub fn level(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    /// Number of coordinates over `F`.
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn ring(&self) -> &CharacterRing {
        &self.ring
    }

    pub fn values(&self) -> &[Cyc] {
        &self.values
    }

    fn side_len(&self) -> usize {
        (self.ring.p() as usize).pow(self.a + self.b)
    }

    fn coords(&self, mut idx: usize) -> Vec<i64> {
        let l = self.side_len();
        (0..self.dim())
            .map(|_| {
                let t = idx % l;
                idx /= l;
                t as i64
            })
            .collect()
    }

    fn index(&self, t: &[i64]) -> usize {
        let l = self.side_len() as i64;
        t.iter().rev().fold(0usize, |acc, x| acc * l as usize + x.rem_euclid(l) as usize)
    }

    /// Value at the grid point with integer coordinates `t` (`x_k = t_k p^{-a}`);
    /// any representative of `t_k` modulo `p^{a+b}` is accepted.
    pub fn value_at(&self, t: &[i64]) -> &Cyc {
        &self.values[self.index(t)]
    }

    fn map_cells(&self, mut f: impl FnMut(&[i64], &Cyc) -> Cyc) -> Self {
        let values = self.values.iter().enumerate().map(|(i, v)| f(&self.coords(i), v)).collect();
        FiniteLevelFunction { values, ..self.clone() }
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        self.map_cells(|t, _| {
            let neg: Vec<i64> = t.iter().map(|x| -x).collect();
            self.value_at(&neg).clone()
        })
    }

    /// `f(x - v)` for `v_k = v[k] p^{-a}`.
    pub fn translate(&self, v: &[i64]) -> Self {
        self.map_cells(|t, _| {
            let s: Vec<i64> = t.iter().zip(v).map(|(x, y)| x - y).collect();
            self.value_at(&s).clone()
        })
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        self.map_cells(|_, v| self.ring.mul(c, v))
    }

    /// `Σ |f(x)|^2 vol`, with `vol = p^{-b}` per coordinate.
    pub fn norm_squared(&self) -> Cyc {
        let r = &self.ring;
        let sum = self.values.iter().fold(r.zero(), |acc, v| r.add(&acc, &r.mul(v, &r.conj(v))));
        r.scale_p(&sum, -((self.b as usize * self.dim()) as i64))
    }
}

/// The quadratic space `(b, c)` with `q = c b` on the general linear side,
/// or `b ∈ E^{n-1}` with `q = b^* b` on the unitary side, and a fixed
/// character `ψ` of conductor `O`.
///
/// `psi_shift` replaces `ψ` by `x ↦ ψ(p^s x)` and `fourier_twist` multiplies
/// the Fourier transform by `ψ(t)`; both exist to exercise the checks.
#[derive(Clone, Debug)]
pub struct WeilModel {
    field: Field,
    side: Side,
    n: usize,
    pub psi_shift: i64,
    pub fourier_twist: Option<PAdic>,
}

impl WeilModel {
    pub fn new(field: &Field, side: Side, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(LabError::Dimension("the Weil model needs n >= 2".into()));
        }
        Ok(WeilModel { field: field.clone(), side, n, psi_shift: 0, fourier_twist: None })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn ring(&self, a: u32, b: u32) -> CharacterRing {
        CharacterRing::new(self.field.p(), a + b + 2)
    }

    pub fn from_fn(&self, a: u32, b: u32, mut f: impl FnMut(&[i64]) -> Cyc) -> FiniteLevelFunction {
        let ring = self.ring(a, b);
        let mut out = FiniteLevelFunction { side: self.side, m: self.n - 1, a, b, ring, values: Vec::new() };
        let cells = out.side_len().pow(out.dim() as u32);
        out.values = (0..cells).map(|i| f(&out.coords(i))).collect();
        out
    }

    /// Indicator of `O^{2m}` on the grid of level `(a, b)`.
    pub fn unit_box(&self, a: u32, b: u32) -> FiniteLevelFunction {
        let pa = (self.field.p() as i64).pow(a);
        let ring = self.ring(a, b);
        self.from_fn(a, b, |t| ring.from_int(i64::from(t.iter().all(|x| x % pa == 0))))
    }

    /// Random integer values in `[-2, 2]`.
    pub fn random<R: Rng + ?Sized>(&self, a: u32, b: u32, rng: &mut R) -> FiniteLevelFunction {
        let ring = self.ring(a, b);
        self.from_fn(a, b, |_| ring.from_int(rng.gen_range(-2..=2)))
    }

    fn check(&self, f: &FiniteLevelFunction) -> Result<()> {
        if f.side != self.side || f.m + 1 != self.n {
            return Err(LabError::Dimension("function does not live on this model".into()));
        }
        Ok(())
    }

    /// Coefficient `κ_k` and partner coordinate `π(k)` with
    /// `B(x, y) = Σ κ_k x_k y_{π(k)}`, `B(x, y) = q(x + y) - q(x) - q(y)`.
    fn pairing(&self, k: usize) -> (i64, usize) {
        let m = self.n - 1;
        match self.side {
            Side::Gl => (1, if k < m { k + m } else { k - m }),
            Side::U => (if k.is_multiple_of(2) { 2 } else { -2 * self.field.u() }, k),
        }
    }

    /// `q(x) p^{2a}` for grid coordinates `t`.
    fn q_numerator(&self, t: &[i64]) -> i128 {
        let m = self.n - 1;
        match self.side {
            Side::Gl => (0..m).map(|i| t[i] as i128 * t[i + m] as i128).sum(),
            Side::U => (0..m)
                .map(|i| {
                    let (x, y) = (t[2 * i] as i128, t[2 * i + 1] as i128);
                    x * x - self.field.u() as i128 * y * y
                })
                .sum(),
        }
    }

    /// `(Ff)(y) = ∫ f(x) ψ(B(x, y)) dx` with the self-dual measure. A function
    /// of level `(a, b)` goes to one of level `(b, a)`.
    pub fn fourier(&self, f: &FiniteLevelFunction) -> Result<FiniteLevelFunction> {
        self.check(f)?;
        let ring = f.ring;
        let order = ring.order() as i128;
        let shift = ring.conductor() as i64 + self.psi_shift - (f.a + f.b) as i64;
        if shift < 0 {
            return Err(LabError::ConductorExceeded);
        }
        let unit = (ring.p() as i128).pow(shift as u32) % order;
        let l = f.side_len();
        let dim = f.dim();
        let mut cur = f.values.clone();
        for k in 0..dim {
            let stride = l.pow(k as u32);
            let kappa = self.pairing(k).0 as i128;
            let mut next = vec![ring.zero(); cur.len()];
            for (idx, slot) in next.iter_mut().enumerate() {
                let s = (idx / stride) % l;
                let base = idx - s * stride;
                let mut acc = ring.accumulator();
                for t in 0..l {
                    let e = (kappa * unit % order) * ((t * s) as i128 % order) % order;
                    acc.add_rotated(&ring, &cur[base + t * stride], e as i64);
                }
                *slot = ring.scale_p(&acc.finish(&ring), -(f.b as i64));
            }
            cur = next;
        }
        let mut out = FiniteLevelFunction { a: f.b, b: f.a, values: Vec::new(), ..f.clone() };
        let twist = match &self.fourier_twist {
            Some(t) => Some(ring.psi(t)?),
            None => None,
        };
        // output coordinate π(k) carries the dual variable of input axis k
        out.values = (0..cur.len())
            .map(|i| {
                let y = out.coords(i);
                let z: Vec<i64> = (0..dim).map(|k| y[self.pairing(k).1]).collect();
                let v = cur[out.index(&z)].clone();
                match &twist {
                    Some(c) => ring.mul(c, &v),
                    None => v,
                }
            })
            .collect();
        Ok(out)
    }

    /// `f ↦ ψ(t q) f`; needs `val(t) >= a - b` for the product to be constant
    /// on the cells of the grid.
    pub fn n_action(&self, t: &PAdic, f: &FiniteLevelFunction) -> Result<FiniteLevelFunction> {
        self.check(f)?;
        let Some(v) = t.valuation() else {
            return Ok(f.clone());
        };
        if v < f.a as i64 - f.b as i64 {
            return Err(LabError::ConductorExceeded);
        }
        let ring = f.ring;
        let e = ring.conductor() as i64 + self.psi_shift - 2 * f.a as i64;
        if v + e < 0 {
            return Err(LabError::ConductorExceeded);
        }
        let r = t.scale_p(e).residue(ring.conductor())?;
        let r: i128 = num_traits::ToPrimitive::to_i128(&r).expect("residue below p^m");
        let order = ring.order() as i128;
        Ok(f.map_cells(|x, val| {
            let k = (r * self.q_numerator(x).rem_euclid(order)) % order;
            let mut acc = ring.accumulator();
            acc.add_rotated(&ring, val, k as i64);
            acc.finish(&ring)
        }))
    }

    /// Applies `W(g_1) W(g_2) ... W(g_k)` for the word `[g_1, ..., g_k]`, so
    /// the last generator acts first, as in the product `g_1 g_2 ... g_k`.
    pub fn apply(&self, word: &[WeilGenerator], f: &FiniteLevelFunction) -> Result<FiniteLevelFunction> {
        let mut cur = f.clone();
        for g in word.iter().rev() {
            cur = match g {
                WeilGenerator::W => self.fourier(&cur)?.reflect(),
                WeilGenerator::N(t) => self.n_action(t, &cur)?,
            };
        }
        Ok(cur)
    }

    /// `g ↦ ψ(B(v, y)) g(y)` for `v_k = v[k] p^{-b}` on a function of level
    /// `(a, b)`, so that `F(τ_v f) = M_v(F f)` when `f` has level `(b, a)`.
    pub fn modulate(&self, g: &FiniteLevelFunction, v: &[i64]) -> Result<FiniteLevelFunction> {
        self.check(g)?;
        let ring = g.ring;
        let shift = ring.conductor() as i64 + self.psi_shift - (g.a + g.b) as i64;
        if shift < 0 {
            return Err(LabError::ConductorExceeded);
        }
        let order = ring.order() as i128;
        let unit = (ring.p() as i128).pow(shift as u32) % order;
        Ok(g.map_cells(|y, val| {
            let mut e: i128 = 0;
            for (k, vk) in v.iter().enumerate() {
                let (kappa, j) = self.pairing(k);
                e = (e + (kappa as i128 * *vk as i128).rem_euclid(order) * (y[j] as i128 % order)) % order;
            }
            let mut acc = ring.accumulator();
            acc.add_rotated(&ring, val, (e * unit % order) as i64);
            acc.finish(&ring)
        }))
    }
}

/// `ψ(x)` in `Z[ζ_{p^m}]`.
pub fn psi_value(x: &PAdic, m: u32) -> Result<Cyc> {
    CharacterRing::new(x.field().p(), m).psi(x)
}

/// `F 1_O = 1_O` on the grids `(0, 0)` and `(0, 1) → (1, 0)`.
pub fn unit_selfdual_check(model: &WeilModel) -> Result<bool> {
    for (a, b) in [(0, 0), (0, 1)] {
        if model.fourier(&model.unit_box(a, b))? != model.unit_box(b, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `F^4 = id` and `F^2 f = f(-x)` on random functions of level `(a, b)`.
pub fn fourier_order_check<R: Rng + ?Sized>(model: &WeilModel, a: u32, b: u32, trials: usize, rng: &mut R) -> Result<bool> {
    for _ in 0..trials {
        let f = model.random(a, b, rng);
        let f2 = model.fourier(&model.fourier(&f)?)?;
        if f2 != f.reflect() || model.fourier(&model.fourier(&f2)?)? != f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(W(w) W(n(1)))^3 = W(w)^2` on random functions of level `(a, a)`.
/// With `fourier_twist = Some(t)` this fails unless `ψ(t) = 1`.
pub fn sl2_relation_check<R: Rng + ?Sized>(model: &WeilModel, a: u32, trials: usize, rng: &mut R) -> Result<bool> {
    let one = WeilGenerator::N(PAdic::one(&model.field));
    let lhs: Vec<WeilGenerator> = (0..3).flat_map(|_| [WeilGenerator::W, one.clone()]).collect();
    let rhs = [WeilGenerator::W, WeilGenerator::W];
    for _ in 0..trials {
        let f = model.random(a, a, rng);
        if model.apply(&lhs, &f)? != model.apply(&rhs, &f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> Field {
        Field::new(FieldConfig::new(p).unwrap()).unwrap()
    }

    #[test]
    fn unit_box_is_self_dual() {
        for side in [Side::Gl, Side::U] {
            let m = WeilModel::new(&field(3), side, 2).unwrap();
            assert!(unit_selfdual_check(&m).unwrap());
            let mut shifted = m.clone();
            shifted.psi_shift = 1;
            assert!(!unit_selfdual_check(&shifted).unwrap());
        }
    }

    #[test]
    fn fourier_has_order_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for side in [Side::Gl, Side::U] {
            let m = WeilModel::new(&field(3), side, 2).unwrap();
            assert!(fourier_order_check(&m, 1, 0, 3, &mut rng).unwrap());
            assert!(fourier_order_check(&m, 1, 1, 3, &mut rng).unwrap());
        }
    }

    #[test]
    fn sl2_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for side in [Side::Gl, Side::U] {
            let m = WeilModel::new(&field(3), side, 2).unwrap();
            assert!(sl2_relation_check(&m, 1, 3, &mut rng).unwrap());
            let mut twisted = m.clone();
            twisted.fourier_twist = Some(PAdic::from_rational(&field(3), 1, 3).unwrap());
            assert!(!sl2_relation_check(&twisted, 1, 1, &mut rng).unwrap());
        }
    }

    #[test]
    fn n_action_needs_fine_enough_grid() {
        let f = field(3);
        let m = WeilModel::new(&f, Side::Gl, 2).unwrap();
        let g = m.unit_box(1, 0);
        assert_eq!(m.n_action(&PAdic::one(&f), &g).unwrap_err(), LabError::ConductorExceeded);
    }
}
