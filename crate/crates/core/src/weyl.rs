//! Discrete Weyl transform.
//!
//! `L_σ = Σ_{(ω,x)} σ̂(ω,x) ρ(x,ω)` with `ρ(x,ω) = e^{-πi x·ω} T_{-x} M_ω`,
//! so that `L_σ L_τ = L_{σ̂ ♮ τ̂}`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::twisted_convolve;
use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::group::{root_table, GroupSpec};
use crate::matrix::OperatorMatrix;

/// Operators are dense; beyond this order they are refused.
pub const MAX_WEYL_ORDER: usize = 1024;

/// Spreading function on `Ĝ x G`, stored in `(ω, x)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadingFunction {
    spec: GroupSpec,
    values: Vec<Complex64>,
}

impl SpreadingFunction {
    pub fn new(spec: GroupSpec, values: Vec<Complex64>) -> Result<Self> {
        let n = spec.order();
        if values.len() != n * n {
            return Err(Error::DomainMismatch(format!(
                "spreading function needs {} values, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(SpreadingFunction { spec, values })
    }

    pub fn zeros(spec: GroupSpec) -> Self {
        let n = spec.order();
        SpreadingFunction {
            spec,
            values: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Point mass at `(ω, x)` given by element indices.
    pub fn point(spec: GroupSpec, omega: usize, x: usize, c: Complex64) -> Self {
        let n = spec.order();
        let mut s = Self::zeros(spec);
        s.values[omega * n + x] = c;
        s
    }

    pub fn random(spec: GroupSpec, rng: &mut impl Rng) -> Self {
        let n = spec.order();
        let values = (0..n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SpreadingFunction { spec, values }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, omega: usize, x: usize) -> Complex64 {
        self.values[omega * self.spec.order() + x]
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn max_abs_diff(&self, other: &SpreadingFunction) -> Result<f64> {
        self.same_spec(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn lin_comb(&self, a: Complex64, other: &SpreadingFunction, b: Complex64) -> Result<Self> {
        self.same_spec(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(SpreadingFunction {
            spec: self.spec.clone(),
            values,
        })
    }

    fn same_spec(&self, other: &SpreadingFunction) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::DomainMismatch(
                "spreading functions over different groups".into(),
            ));
        }
        Ok(())
    }

    /// Transposes into a function on `G x Ĝ` in `(x, ω)` order.
    pub fn to_phase_space(&self) -> GroupFunction {
        let n = self.spec.order();
        let domain = Domain::PhaseSpace(self.spec.clone());
        GroupFunction::from_fn(domain, |i| self.values[(i % n) * n + i / n])
    }

    /// Inverse of [`SpreadingFunction::to_phase_space`].
    pub fn from_phase_space(f: &GroupFunction) -> Result<Self> {
        let Domain::PhaseSpace(spec) = f.domain() else {
            return Err(Error::DomainMismatch(format!(
                "expected a function on G x Ĝ, got {}",
                f.domain().kind_name()
            )));
        };
        let n = spec.order();
        let values = (0..n * n).map(|j| f[(j % n) * n + j / n]).collect();
        Ok(SpreadingFunction {
            spec: spec.clone(),
            values,
        })
    }

    /// `σ̂ ♮ τ̂`, computed on `G x Ĝ`.
    pub fn twisted(&self, other: &SpreadingFunction) -> Result<Self> {
        self.same_spec(other)?;
        Self::from_phase_space(&twisted_convolve(
            &self.to_phase_space(),
            &other.to_phase_space(),
        )?)
    }
}

fn check_order(spec: &GroupSpec) -> Result<()> {
    if spec.order() > MAX_WEYL_ORDER {
        return Err(Error::InvalidParameter(format!(
            "group order {} exceeds the dense limit {MAX_WEYL_ORDER}",
            spec.order()
        )));
    }
    Ok(())
}

/// Phase exponent in `Z_M` of `ρ(x, ω)` at kernel entry `(t, s = t + x)`:
/// `2<ω, s> - q(x, ω)`.
fn kernel_phase(spec: &GroupSpec, omega: usize, x: usize, s: usize) -> usize {
    let m = spec.phase_modulus();
    (2 * spec.pairing_units_index(s, omega) + m - spec.half_product_index(x, omega)) % m
}

/// Kernel `K(t, s) = Σ_ω σ̂(ω, s - t) e^{2πi (2<ω,s> - q(s-t, ω)) / M}`.
pub fn weyl_operator(sigma: &SpreadingFunction) -> Result<OperatorMatrix> {
    let spec = sigma.spec();
    check_order(spec)?;
    let n = spec.order();
    let roots = root_table(spec.phase_modulus());
    Ok(OperatorMatrix::from_fn(
        Domain::Group(spec.clone()),
        |t, s| {
            let x = spec.sub_index(s, t);
            (0..n)
                .map(|w| sigma.get(w, x) * roots[kernel_phase(spec, w, x, s)])
                .sum()
        },
    ))
}

/// `σ̂(ω, x) = (1/|G|) Σ_t A(t, t + x) e^{-2πi (2<ω,t+x> - q(x, ω)) / M}`.
pub fn spreading_of(a: &OperatorMatrix) -> Result<SpreadingFunction> {
    let Domain::Group(spec) = a.domain() else {
        return Err(Error::DomainMismatch(format!(
            "Weyl analysis needs an operator on G, got {}",
            a.domain().kind_name()
        )));
    };
    check_order(spec)?;
    let n = spec.order();
    let m = spec.phase_modulus();
    let roots = root_table(m);
    let scale = 1.0 / n as f64;
    let values = (0..n * n)
        .into_par_iter()
        .map(|j| {
            let (w, x) = (j / n, j % n);
            let acc: Complex64 = (0..n)
                .map(|t| {
                    let s = spec.add_index(t, x);
                    a.get(t, s) * roots[(m - kernel_phase(spec, w, x, s)) % m]
                })
                .sum();
            acc * scale
        })
        .collect();
    SpreadingFunction::new(spec.clone(), values)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComposeReport {
    /// `‖L_σ L_τ - L_{σ̂♮τ̂}‖_max`.
    pub defect: f64,
    pub tolerance: f64,
    pub sigma_l1: f64,
    pub tau_l1: f64,
    pub holds: bool,
}

/// Compares the operator product with the Weyl operator of the twisted convolution.
pub fn compose_check(sigma: &SpreadingFunction, tau: &SpreadingFunction) -> Result<ComposeReport> {
    let lhs = weyl_operator(sigma)?.matmul(&weyl_operator(tau)?)?;
    let rhs = weyl_operator(&sigma.twisted(tau)?)?;
    let defect = lhs.max_abs_diff(&rhs)?;
    let sigma_l1 = sigma.l1_norm();
    let tau_l1 = tau.l1_norm();
    let tolerance = 1e-10 * (1.0 + sigma_l1 * tau_l1);
    Ok(ComposeReport {
        defect,
        tolerance,
        sigma_l1,
        tau_l1,
        holds: defect <= tolerance,
    })
}

/// `‖f‖_p` under counting measure, `p ∈ [1, ∞]`.
pub fn lp_norm(f: &GroupFunction, p: f64) -> f64 {
    let vals = f.values().iter().map(|v| v.norm());
    if p.is_infinite() {
        vals.fold(0.0, f64::max)
    } else {
        vals.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖L_σ f‖_p ≤ ‖σ̂‖₁ ‖f‖_p` for `p = 1, 2, ∞`, with absolute slack `1e-12`.
pub fn lp_bound_check(sigma: &SpreadingFunction, f: &GroupFunction) -> Result<Vec<BoundReport>> {
    let op = weyl_operator(sigma)?;
    let g = op.apply(f)?;
    let l1 = sigma.l1_norm();
    Ok([1.0, 2.0, f64::INFINITY]
        .into_iter()
        .map(|p| {
            let lhs = lp_norm(&g, p);
            let rhs = l1 * lp_norm(f, p);
            BoundReport {
                p,
                lhs,
                rhs,
                holds: lhs <= rhs + 1e-12,
            }
        })
        .collect())
}
