//! Finite abelian groups `G = Z_{N_1} x ... x Z_{N_d}`, the self-dual pairing,
//! and the finite reduced Heisenberg group `G x Ĝ x Z_M`.
//!
//! Elements are residue tuples. Enumeration is mixed-radix lexicographic: the
//! first coordinate is the most significant digit. That order is part of the
//! on-disk format of every CSV written by this crate.
//!
//! All phases are kept as exact integers. A pairing `<ω, x>` is an element of
//! `Z_L` (`L = lcm N_i`, one unit = `1/L` of a turn); the Heisenberg phase and
//! the half-phases `e^{πi x·ω}` live in `Z_M` with `M = 2L`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by [`GroupSpec::new`].
pub const DEFAULT_ORDER_CAP: usize = 65_536;

/// `e^{2πi k/m}`.
pub fn unit_root(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % m) as f64 / m as f64)
}

/// Table of the `m`-th roots of unity, indexed by exponent.
pub fn root_table(m: usize) -> Vec<Complex64> {
    (0..m).map(|k| unit_root(k, m)).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A finite abelian group given as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    moduli: Vec<usize>,
    order: usize,
    lcm: usize,
    strides: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    moduli: Vec<usize>,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;
    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        GroupSpec::new(&r.moduli)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRepr { moduli: g.moduli }
    }
}

impl GroupSpec {
    pub fn new(moduli: &[usize]) -> Result<Self> {
        Self::with_cap(moduli, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(moduli: &[usize], cap: usize) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup(
                "at least one cyclic factor is required".into(),
            ));
        }
        let mut order: usize = 1;
        let mut lcm: usize = 1;
        for &n in moduli {
            if n < 2 {
                return Err(Error::InvalidGroup(format!("modulus {n} < 2")));
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= cap)
                .ok_or_else(|| Error::InvalidGroup(format!("order exceeds cap {cap}")))?;
            lcm = lcm / gcd(lcm, n) * n;
        }
        let mut strides = vec![1; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(GroupSpec {
            moduli: moduli.to_vec(),
            order,
            lcm,
            strides,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lcm(&self) -> usize {
        self.lcm
    }

    /// Phase modulus `M = 2·lcm` used for half-phases.
    pub fn phase_modulus(&self) -> usize {
        2 * self.lcm
    }

    pub fn is_valid(&self, x: &[usize]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.moduli).all(|(&xi, &n)| xi < n)
    }

    pub fn check(&self, x: &[usize]) -> Result<()> {
        if self.is_valid(x) {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!(
                "{x:?} is not an element of Z{:?}",
                self.moduli
            )))
        }
    }

    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn element(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.rank()];
        self.decode_into(idx, &mut out);
        out
    }

    pub fn decode_into(&self, idx: usize, out: &mut [usize]) {
        for ((o, &s), &n) in out.iter_mut().zip(&self.strides).zip(&self.moduli) {
            *o = (idx / s) % n;
        }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn zero(&self) -> Vec<usize> {
        vec![0; self.rank()]
    }

    pub fn add(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn neg(&self, x: &[usize]) -> Vec<usize> {
        x.iter()
            .zip(&self.moduli)
            .map(|(a, n)| (n - a) % n)
            .collect()
    }

    pub fn sub(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), n)| (a + n - b) % n)
            .collect()
    }

    /// Index of `x + y`, both given by index.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.moduli) {
            out += ((i / s % n + j / s % n) % n) * s;
        }
        out
    }

    /// Index of `x - y`, both given by index.
    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.moduli) {
            out += ((i / s % n + n - j / s % n) % n) * s;
        }
        out
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.sub_index(0, i)
    }

    /// `Σ_i min(u_i, N_i - u_i)`: the ℓ¹ length of the symmetric representative.
    pub fn circular_distance(&self, u: &[usize]) -> usize {
        u.iter()
            .zip(&self.moduli)
            .map(|(&a, &n)| a.min(n - a))
            .sum()
    }

    pub fn circular_distance_index(&self, i: usize) -> usize {
        self.strides
            .iter()
            .zip(&self.moduli)
            .map(|(&s, &n)| {
                let a = i / s % n;
                a.min(n - a)
            })
            .sum()
    }

    /// Largest circular distance attained in the group.
    pub fn max_distance(&self) -> usize {
        self.moduli.iter().map(|n| n / 2).sum()
    }

    /// Exponent `p` with `<ω, x> = e^{2πi p / L}`; exact, in `Z_L`.
    pub fn pairing_units(&self, x: &[usize], omega: &[usize]) -> usize {
        let l = self.lcm;
        x.iter()
            .zip(omega)
            .zip(&self.moduli)
            .map(|((&a, &b), &n)| (a * b % n) * (l / n))
            .sum::<usize>()
            % l
    }

    pub fn pairing_units_index(&self, ix: usize, iw: usize) -> usize {
        let l = self.lcm;
        let mut acc = 0;
        for (&s, &n) in self.strides.iter().zip(&self.moduli) {
            acc += (ix / s % n) * (iw / s % n) % n * (l / n);
        }
        acc % l
    }

    /// Half-product exponent `q` with `e^{πi x·ω} = e^{2πi q / M}`, using the
    /// canonical representatives in `[0, N_i)`.
    pub fn half_product_index(&self, ix: usize, iw: usize) -> usize {
        let l = self.lcm;
        let m = 2 * l;
        let mut acc = 0;
        for (&s, &n) in self.strides.iter().zip(&self.moduli) {
            acc += (ix / s % n) * (iw / s % n) % (2 * n) * (l / n);
        }
        acc % m
    }

    /// `<ω, x>` as a unit complex number.
    pub fn pair(&self, x: &[usize], omega: &[usize]) -> Result<Complex64> {
        self.check(x)?;
        self.check(omega)?;
        Ok(unit_root(self.pairing_units(x, omega), self.lcm))
    }

    /// Phase exponent `c ∈ Z_M` of the time-frequency shifts
    /// `ρ(x, ω) = e^{-πi x·ω} T_{-x} M_ω`:
    /// `ρ(z) ρ(z') = e^{2πi c(z, z') / M} ρ(z + z')`.
    ///
    /// Whenever no coordinate sum wraps, `c/M` turns equals `(x·ω' - ω·x')/2`.
    pub fn operator_cocycle(&self, ix: usize, iw: usize, jx: usize, jw: usize) -> usize {
        let m = self.phase_modulus();
        let sx = self.add_index(ix, jx);
        let sw = self.add_index(iw, jw);
        let q_sum = self.half_product_index(sx, sw);
        let q_a = self.half_product_index(ix, iw);
        let q_b = self.half_product_index(jx, jw);
        let cross = 2 * self.pairing_units_index(jx, iw);
        (q_sum + 3 * m - q_a - q_b - cross % m) % m
    }
}

/// The finite reduced Heisenberg group `G x Ĝ x Z_M`, `M = 2·lcm(N_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HeisSpecRepr", into = "HeisSpecRepr")]
pub struct HeisSpec {
    base: GroupSpec,
}

#[derive(Serialize, Deserialize)]
struct HeisSpecRepr {
    moduli: Vec<usize>,
    phase_modulus: usize,
}

impl TryFrom<HeisSpecRepr> for HeisSpec {
    type Error = Error;
    fn try_from(r: HeisSpecRepr) -> Result<Self> {
        let h = HeisSpec::new(GroupSpec::new(&r.moduli)?);
        if h.phase_modulus() != r.phase_modulus {
            return Err(Error::InvalidGroup(format!(
                "phase_modulus {} does not equal 2·lcm = {}",
                r.phase_modulus,
                h.phase_modulus()
            )));
        }
        Ok(h)
    }
}

impl From<HeisSpec> for HeisSpecRepr {
    fn from(h: HeisSpec) -> Self {
        let phase_modulus = h.phase_modulus();
        HeisSpecRepr {
            moduli: h.base.moduli,
            phase_modulus,
        }
    }
}

/// Element `(x, ω, e^{2πik/M})` of the Heisenberg group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeisElement {
    pub x: Vec<usize>,
    pub omega: Vec<usize>,
    pub k: usize,
}

impl HeisElement {
    pub fn new(x: Vec<usize>, omega: Vec<usize>, k: usize) -> Self {
        HeisElement { x, omega, k }
    }
}

impl HeisSpec {
    pub fn new(base: GroupSpec) -> Self {
        HeisSpec { base }
    }

    pub fn over(moduli: &[usize]) -> Result<Self> {
        Ok(Self::new(GroupSpec::new(moduli)?))
    }

    pub fn base(&self) -> &GroupSpec {
        &self.base
    }

    pub fn phase_modulus(&self) -> usize {
        self.base.phase_modulus()
    }

    /// `|G|² · M`.
    pub fn order(&self) -> usize {
        self.base.order() * self.base.order() * self.phase_modulus()
    }

    pub fn identity(&self) -> HeisElement {
        HeisElement::new(self.base.zero(), self.base.zero(), 0)
    }

    pub fn check(&self, h: &HeisElement) -> Result<()> {
        self.base.check(&h.x)?;
        self.base.check(&h.omega)?;
        if h.k >= self.phase_modulus() {
            return Err(Error::InvalidElement(format!(
                "phase index {} outside Z_{}",
                h.k,
                self.phase_modulus()
            )));
        }
        Ok(())
    }

    /// Enumeration index: `((idx x)·|G| + idx ω)·M + k`.
    pub fn index(&self, h: &HeisElement) -> usize {
        let g = self.base.order();
        (self.base.index(&h.x) * g + self.base.index(&h.omega)) * self.phase_modulus() + h.k
    }

    pub fn element(&self, idx: usize) -> HeisElement {
        let m = self.phase_modulus();
        let g = self.base.order();
        let z = idx / m;
        HeisElement::new(self.base.element(z / g), self.base.element(z % g), idx % m)
    }

    /// Phase exponent of the group law,
    /// `(x,ω,k)(x',ω',k') = (x+x', ω+ω', k+k'+c_H)`.
    ///
    /// `c_H` is the negated operator cocycle, so that `h ↦ e^{-2πik/M} ρ(x,ω)`
    /// is a faithful representation and the law is exactly associative. With
    /// no coordinate wraparound `c_H/M` turns is `(x'·ω - x·ω')/2`.
    pub fn law_phase_index(&self, ix: usize, iw: usize, jx: usize, jw: usize) -> usize {
        let m = self.phase_modulus();
        (m - self.base.operator_cocycle(ix, iw, jx, jw)) % m
    }

    /// Product of two elements given by enumeration index.
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let m = self.phase_modulus();
        let g = self.base.order();
        let (za, ka) = (a / m, a % m);
        let (zb, kb) = (b / m, b % m);
        let (ax, aw) = (za / g, za % g);
        let (bx, bw) = (zb / g, zb % g);
        let k = (ka + kb + self.law_phase_index(ax, aw, bx, bw)) % m;
        let x = self.base.add_index(ax, bx);
        let w = self.base.add_index(aw, bw);
        (x * g + w) * m + k
    }

    pub fn inv_index(&self, a: usize) -> usize {
        let m = self.phase_modulus();
        let g = self.base.order();
        let (z, k) = (a / m, a % m);
        let (ax, aw) = (z / g, z % g);
        let nx = self.base.neg_index(ax);
        let nw = self.base.neg_index(aw);
        let c = self.law_phase_index(ax, aw, nx, nw);
        let kk = (2 * m - k - c) % m;
        (nx * g + nw) * m + kk
    }

    pub fn mul(&self, h: &HeisElement, h2: &HeisElement) -> Result<HeisElement> {
        self.check(h)?;
        self.check(h2)?;
        Ok(self.element(self.mul_index(self.index(h), self.index(h2))))
    }

    pub fn inv(&self, h: &HeisElement) -> Result<HeisElement> {
        self.check(h)?;
        Ok(self.element(self.inv_index(self.index(h))))
    }
}

/// Functional aliases.
pub fn make_group(moduli: &[usize]) -> Result<GroupSpec> {
    GroupSpec::new(moduli)
}

pub fn pair(x: &[usize], omega: &[usize], g: &GroupSpec) -> Result<Complex64> {
    g.pair(x, omega)
}

pub fn heis_mul(h: &HeisElement, h2: &HeisElement, spec: &HeisSpec) -> Result<HeisElement> {
    spec.mul(h, h2)
}

pub fn heis_inv(h: &HeisElement, spec: &HeisSpec) -> Result<HeisElement> {
    spec.inv(h)
}
