//! Weight families and a finite-window admissibility check.
//!
//! Every weight here is radial in the ℓ¹ length: on the finite group the length
//! of `u` is its circular distance, on the covering lattice `Z^d` it is `Σ|n_i|`.
//! Symmetry, submultiplicativity and the GRS rate are certified on the covering
//! lattice, where orbits `n·x` do not wrap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::Domain;
use crate::group::GroupSpec;

/// Relative slack for the floating-point comparisons in the admissibility check.
const LOG_SLACK: f64 = 1e-12;

/// A weight `v(u) = φ(|u|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightFn {
    /// `1`.
    Constant,
    /// `(1 + d)^s`.
    Polynomial { s: f64 },
    /// `e^{a d^b}`, `0 < b < 1`.
    Subexponential { a: f64, b: f64 },
    /// `e^{a d}`. Violates GRS; kept for counter-experiments.
    Exponential { a: f64 },
}

impl WeightFn {
    pub fn polynomial(s: f64) -> Self {
        WeightFn::Polynomial { s }
    }

    pub fn subexponential(a: f64, b: f64) -> Self {
        WeightFn::Subexponential { a, b }
    }

    pub fn exponential(a: f64) -> Self {
        WeightFn::Exponential { a }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightFn::Constant => true,
            WeightFn::Polynomial { s } => s.is_finite() && s >= 0.0,
            WeightFn::Subexponential { a, b } => {
                a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0 && b < 1.0
            }
            WeightFn::Exponential { a } => a.is_finite() && a > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "bad weight parameters: {self:?}"
            )))
        }
    }

    /// `log v` at ℓ¹ length `d`.
    pub fn log_at_distance(&self, d: f64) -> f64 {
        match *self {
            WeightFn::Constant => 0.0,
            WeightFn::Polynomial { s } => s * (1.0 + d).ln(),
            WeightFn::Subexponential { a, b } => a * d.powf(b),
            WeightFn::Exponential { a } => a * d,
        }
    }

    pub fn at_distance(&self, d: f64) -> f64 {
        match *self {
            WeightFn::Constant => 1.0,
            WeightFn::Polynomial { s } => (1.0 + d).powf(s),
            _ => self.log_at_distance(d).exp(),
        }
    }

    /// Weight of the domain element with enumeration index `i`; the phase
    /// coordinate of a Heisenberg element is ignored.
    pub fn eval_index(&self, domain: &Domain, i: usize) -> f64 {
        self.at_distance(domain.distance_index(i) as f64)
    }

    /// Weight table over a whole domain, in enumeration order.
    pub fn table(&self, domain: &Domain) -> Vec<f64> {
        (0..domain.order())
            .map(|i| self.eval_index(domain, i))
            .collect()
    }

    /// Weight of an element of the covering lattice `Z^d`.
    pub fn eval_lattice(&self, n: &[i64]) -> f64 {
        self.at_distance(n.iter().map(|v| v.unsigned_abs()).sum::<u64>() as f64)
    }

    fn log_lattice(&self, n: &[i64]) -> f64 {
        self.log_at_distance(n.iter().map(|v| v.unsigned_abs()).sum::<u64>() as f64)
    }
}

/// `v(u)` at the circular distance of `u` in `G`.
pub fn eval_weight(w: &WeightFn, u: &[usize], g: &GroupSpec) -> Result<f64> {
    w.validate()?;
    g.check(u)?;
    Ok(w.at_distance(g.circular_distance(u) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub weight: WeightFn,
    pub symmetric: bool,
    pub normalized: bool,
    pub submultiplicative: bool,
    /// `max v(m+n) / (v(m) v(n))` over the tested window.
    pub worst_violation_ratio: f64,
    /// `v(n e_i)^{1/n}` at `n = 1, 2, 4, …, n_max`, keyed by generator `e_i`.
    pub grs_rates: BTreeMap<String, Vec<(u64, f64)>>,
    pub grs: bool,
    pub window_radius: i64,
    pub method: String,
    pub verdict: Verdict,
}

/// Finite-window admissibility check on the covering lattice of `g`.
///
/// Submultiplicativity is tested on all pairs with `|n_i| ≤ 4·max N_i` when
/// that is small enough to enumerate; otherwise every reachable triple of
/// ℓ¹ lengths `(|m|, |n|, |m+n|)` is tested, which is equivalent for radial
/// weights.
pub fn check_admissible(w: &WeightFn, g: &GroupSpec, n_max: u64) -> Result<AdmissibilityReport> {
    w.validate()?;
    if n_max < 8 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} < 8")));
    }
    let d = g.rank();
    let radius = 4 * *g.moduli().iter().max().unwrap_or(&2) as i64;

    let finite_symmetric = (0..g.order()).all(|i| {
        let a = w.at_distance(g.circular_distance_index(i) as f64);
        let b = w.at_distance(g.circular_distance_index(g.neg_index(i)) as f64);
        a == b
    });
    let lattice_symmetric = (-radius..=radius).all(|t| {
        (0..d).all(|axis| {
            let mut n = vec![0i64; d];
            n[axis] = t;
            let a = w.log_lattice(&n);
            n[axis] = -t;
            a == w.log_lattice(&n)
        })
    });
    let symmetric = finite_symmetric && lattice_symmetric;
    let normalized = w.at_distance(0.0) == 1.0 && w.eval_lattice(&vec![0; d]) == 1.0;

    let side = (2 * radius + 1) as u128;
    let pairs = side.pow(2 * d as u32);
    let ((worst_log, worst_scaled), method) = if pairs <= 20_000_000 {
        (
            submult_exhaustive(w, d, radius),
            "exhaustive pairs on the covering-lattice window",
        )
    } else {
        (
            submult_radial(w, d, radius),
            "all reachable ℓ¹ length triples on the covering-lattice window",
        )
    };
    let submultiplicative = worst_scaled <= LOG_SLACK;

    let mut grs_rates = BTreeMap::new();
    let mut grs = true;
    for axis in 0..d {
        let mut seq = Vec::new();
        let mut n = 1u64;
        while n <= n_max {
            let mut e = vec![0i64; d];
            e[axis] = n as i64;
            seq.push((n, (w.log_lattice(&e) / n as f64).exp()));
            n *= 2;
        }
        grs &= grs_trend_ok(&seq);
        grs_rates.insert(format!("e{axis}"), seq);
    }

    let verdict = if symmetric && normalized && submultiplicative && grs {
        Verdict::Admissible
    } else {
        Verdict::NotAdmissible
    };
    Ok(AdmissibilityReport {
        weight: *w,
        symmetric,
        normalized,
        submultiplicative,
        worst_violation_ratio: worst_log.exp(),
        grs_rates,
        grs,
        window_radius: radius,
        method: format!("finite surrogate: {method}; GRS rates on Z^{d} up to n = {n_max}"),
        verdict,
    })
}

/// GRS at finite scale: the log-rates are non-increasing and either already
/// vanish or are still strictly decaying at the last rung of the ladder.
fn grs_trend_ok(seq: &[(u64, f64)]) -> bool {
    let logs: Vec<f64> = seq.iter().map(|&(_, r)| r.ln()).collect();
    let monotone = logs
        .windows(2)
        .all(|p| p[1] <= p[0] * (1.0 + LOG_SLACK) + 1e-300);
    let last = *logs.last().unwrap_or(&0.0);
    if last.abs() <= LOG_SLACK {
        return monotone;
    }
    let prev = logs[logs.len() - 2];
    monotone && last < prev * (1.0 - 1e-6)
}

/// Returns `(max log-gap, max log-gap relative to the operand magnitudes)`.
fn submult_exhaustive(w: &WeightFn, d: usize, radius: i64) -> (f64, f64) {
    let side = (2 * radius + 1) as usize;
    let count = side.pow(d as u32);
    let decode = |mut i: usize, out: &mut [i64]| {
        for o in out.iter_mut() {
            *o = (i % side) as i64 - radius;
            i /= side;
        }
    };
    let logs: Vec<f64> = (0..count)
        .map(|i| {
            let mut n = vec![0; d];
            decode(i, &mut n);
            w.log_lattice(&n)
        })
        .collect();
    let mut worst = f64::NEG_INFINITY;
    let mut worst_scaled = f64::NEG_INFINITY;
    let mut m = vec![0; d];
    let mut n = vec![0; d];
    let mut s = vec![0; d];
    for i in 0..count {
        decode(i, &mut m);
        for j in 0..count {
            decode(j, &mut n);
            for k in 0..d {
                s[k] = m[k] + n[k];
            }
            let gap = w.log_lattice(&s) - logs[i] - logs[j];
            let scale = 1.0f64.max(logs[i].abs() + logs[j].abs());
            worst = worst.max(gap);
            worst_scaled = worst_scaled.max(gap / scale);
        }
    }
    (worst, worst_scaled)
}

fn submult_radial(w: &WeightFn, d: usize, radius: i64) -> (f64, f64) {
    let max_len = radius * d as i64;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_scaled = f64::NEG_INFINITY;
    for a in 0..=max_len {
        for b in 0..=max_len {
            let la = w.log_at_distance(a as f64);
            let lb = w.log_at_distance(b as f64);
            let scale = 1.0f64.max(la.abs() + lb.abs());
            let reachable: Box<dyn Iterator<Item = i64>> = if d == 1 {
                Box::new([a + b, (a - b).abs()].into_iter())
            } else {
                Box::new(((a - b).abs()..=a + b).step_by(2))
            };
            for c in reachable {
                let gap = w.log_at_distance(c as f64) - la - lb;
                worst = worst.max(gap);
                worst_scaled = worst_scaled.max(gap / scale);
            }
        }
    }
    (worst, worst_scaled)
}
