//! Dense complex functions on `G`, `G x Ĝ` or the Heisenberg group.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, HeisSpec};

/// Index space of a [`GroupFunction`] or an operator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum Domain {
    /// The base group `G`.
    Group(GroupSpec),
    /// The time-frequency plane `G x Ĝ`, enumerated `(x, ω)`.
    PhaseSpace(GroupSpec),
    /// The Heisenberg group `G x Ĝ x Z_M`, enumerated `(x, ω, k)`.
    Heisenberg(HeisSpec),
}

impl Domain {
    pub fn base(&self) -> &GroupSpec {
        match self {
            Domain::Group(g) | Domain::PhaseSpace(g) => g,
            Domain::Heisenberg(h) => h.base(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Domain::Group(g) => g.order(),
            Domain::PhaseSpace(g) => g.order() * g.order(),
            Domain::Heisenberg(h) => h.order(),
        }
    }

    /// Measure of a single point: 1, except `1/M` on the Heisenberg group so
    /// that the phase circle has total measure 1.
    pub fn point_measure(&self) -> f64 {
        match self {
            Domain::Heisenberg(h) => 1.0 / h.phase_modulus() as f64,
            _ => 1.0,
        }
    }

    /// Number of phase points folded into each `(x, ω)` cell (1 unless Heisenberg).
    pub fn phase_points(&self) -> usize {
        match self {
            Domain::Heisenberg(h) => h.phase_modulus(),
            _ => 1,
        }
    }

    /// Index of the identity element.
    pub fn identity_index(&self) -> usize {
        0
    }

    /// The ℓ¹ distance used by weights: circular distance of `x` (and `ω`),
    /// ignoring the phase coordinate.
    pub fn distance_index(&self, i: usize) -> usize {
        match self {
            Domain::Group(g) => g.circular_distance_index(i),
            Domain::PhaseSpace(g) => {
                let n = g.order();
                g.circular_distance_index(i / n) + g.circular_distance_index(i % n)
            }
            Domain::Heisenberg(h) => {
                let g = h.base();
                let z = i / h.phase_modulus();
                g.circular_distance_index(z / g.order()) + g.circular_distance_index(z % g.order())
            }
        }
    }

    pub fn max_distance(&self) -> usize {
        match self {
            Domain::Group(g) => g.max_distance(),
            Domain::PhaseSpace(g) => 2 * g.max_distance(),
            Domain::Heisenberg(h) => 2 * h.base().max_distance(),
        }
    }

    /// Moduli of the abelian group underlying the domain, coordinate by
    /// coordinate (Heisenberg: the phase coordinate comes last).
    pub fn coordinate_moduli(&self) -> Vec<usize> {
        match self {
            Domain::Group(g) => g.moduli().to_vec(),
            Domain::PhaseSpace(g) => [g.moduli(), g.moduli()].concat(),
            Domain::Heisenberg(h) => {
                let mut m = [h.base().moduli(), h.base().moduli()].concat();
                m.push(h.phase_modulus());
                m
            }
        }
    }

    /// Difference used for kernel envelopes: `t - s` on abelian domains,
    /// `t⁻¹ s` on the Heisenberg group.
    pub fn kernel_offset(&self, t: usize, s: usize) -> usize {
        match self {
            Domain::Group(g) => g.sub_index(t, s),
            Domain::PhaseSpace(g) => {
                let n = g.order();
                g.sub_index(t / n, s / n) * n + g.sub_index(t % n, s % n)
            }
            Domain::Heisenberg(h) => h.mul_index(h.inv_index(t), s),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::Group(_) => "group",
            Domain::PhaseSpace(_) => "phase_space",
            Domain::Heisenberg(_) => "heisenberg",
        }
    }
}

/// A complex-valued function stored densely in enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupFunctionRepr")]
pub struct GroupFunction {
    domain: Domain,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct GroupFunctionRepr {
    domain: Domain,
    values: Vec<Complex64>,
}

impl TryFrom<GroupFunctionRepr> for GroupFunction {
    type Error = Error;

    fn try_from(r: GroupFunctionRepr) -> Result<Self> {
        GroupFunction::new(r.domain, r.values)
    }
}

impl GroupFunction {
    pub fn new(domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.order() {
            return Err(Error::DomainMismatch(format!(
                "{} values for a domain of order {}",
                values.len(),
                domain.order()
            )));
        }
        Ok(GroupFunction { domain, values })
    }

    pub fn zeros(domain: Domain) -> Self {
        let n = domain.order();
        GroupFunction {
            domain,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(domain: Domain, f: impl Fn(usize) -> Complex64) -> Self {
        let values = (0..domain.order()).map(f).collect();
        GroupFunction { domain, values }
    }

    /// Unit-mass point mass: value `1 / point_measure` at index `i`.
    pub fn delta_at(domain: Domain, i: usize) -> Self {
        let mut f = Self::zeros(domain);
        f.values[i] = Complex64::new(1.0 / f.domain.point_measure(), 0.0);
        f
    }

    /// Unit-mass point mass at the identity; the algebra identity.
    pub fn delta(domain: Domain) -> Self {
        Self::delta_at(domain, 0)
    }

    /// Entries drawn uniformly from the square `[-1,1]²`.
    pub fn random(domain: Domain, rng: &mut impl Rng) -> Self {
        Self::from_fn_mut(domain, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn from_fn_mut(domain: Domain, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..domain.order()).map(&mut f).collect();
        GroupFunction { domain, values }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ensure_same_domain(&self, other: &GroupFunction) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GroupFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: Complex64, other: &GroupFunction, b: Complex64) -> Result<Self> {
        self.ensure_same_domain(other)?;
        Ok(GroupFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn add(&self, other: &GroupFunction) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        self.lin_comb(one, other, one)
    }

    pub fn sub(&self, other: &GroupFunction) -> Result<Self> {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn abs(&self) -> Self {
        GroupFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .map(|v| Complex64::new(v.norm(), 0.0))
                .collect(),
        }
    }

    /// `Σ |f|` under the domain measure.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.domain.point_measure()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.domain.point_measure()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_i |f_i - g_i|`.
    pub fn max_abs_diff(&self, other: &GroupFunction) -> Result<f64> {
        self.ensure_same_domain(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Writes `index,re,im` rows in enumeration order.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "index,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{i},{:e},{:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("index,re,im\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{i},{:e},{:e}", v.re, v.im);
        }
        s
    }

    /// Reads the CSV written by [`write_csv`](Self::write_csv). Missing
    /// indices are zero.
    pub fn read_csv(domain: Domain, r: impl BufRead) -> Result<Self> {
        let mut f = Self::zeros(domain);
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("index")) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected 3 columns",
                    lineno + 1
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let idx: usize = cols[0]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if idx >= f.values.len() {
                return Err(Error::Parse(format!(
                    "line {}: index {idx} out of range",
                    lineno + 1
                )));
            }
            f.values[idx] = Complex64::new(parse(cols[1])?, parse(cols[2])?);
        }
        Ok(f)
    }
}

impl std::ops::Index<usize> for GroupFunction {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for GroupFunction {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.values[i]
    }
}

fn require_group(f: &GroupFunction) -> Result<&GroupSpec> {
    match f.domain() {
        Domain::Group(g) => Ok(g),
        other => Err(Error::DomainMismatch(format!(
            "expected a function on G, got {}",
            other.kind_name()
        ))),
    }
}

/// `T_x f(y) = f(y - x)`.
pub fn translate(f: &GroupFunction, x: &[usize]) -> Result<GroupFunction> {
    let g = require_group(f)?;
    g.check(x)?;
    let xi = g.index(x);
    Ok(GroupFunction::from_fn(f.domain().clone(), |y| {
        f[g.sub_index(y, xi)]
    }))
}

/// `M_ω f(y) = <ω, y> f(y)`.
pub fn modulate(f: &GroupFunction, omega: &[usize]) -> Result<GroupFunction> {
    let g = require_group(f)?;
    g.check(omega)?;
    let wi = g.index(omega);
    let roots = crate::group::root_table(g.lcm());
    Ok(GroupFunction::from_fn(f.domain().clone(), |y| {
        roots[g.pairing_units_index(y, wi)] * f[y]
    }))
}
