//! Partitions, amalgam norms, kernel envelopes and the block norms used to
//! measure off-diagonal decay.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::matrix::OperatorMatrix;
use crate::weights::WeightFn;

/// Envelope values at or below this are treated as zero when fitting.
pub const FIT_FLOOR: f64 = 1e-300;

/// `Σ |f| v` under the domain measure.
pub fn weighted_l1(f: &GroupFunction, w: &WeightFn) -> f64 {
    let d = f.domain();
    f.values()
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm() * w.eval_index(d, i))
        .sum::<f64>()
        * d.point_measure()
}

/// `sup |f| v`.
pub fn weighted_sup(f: &GroupFunction, w: &WeightFn) -> f64 {
    let d = f.domain();
    f.values()
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm() * w.eval_index(d, i))
        .fold(0.0, f64::max)
}

/// `(x, ω)` coordinates of a domain index with the phase dropped.
fn cell_coords(domain: &Domain, i: usize, out: &mut Vec<usize>) {
    out.clear();
    let g = domain.base();
    let mut push = |idx: usize| out.extend(g.element(idx));
    match domain {
        Domain::Group(_) => push(i),
        Domain::PhaseSpace(g0) => {
            let n = g0.order();
            push(i / n);
            push(i % n);
        }
        Domain::Heisenberg(h) => {
            let z = i / h.phase_modulus();
            let n = g.order();
            push(z / n);
            push(z % n);
        }
    }
}

/// A block partition of a domain: coordinate `i` is cut into runs of
/// `B_i`; the Heisenberg phase coordinate always lies inside one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    domain: Domain,
    block_sizes: Vec<usize>,
    grid: Vec<usize>,
    /// Block index of every domain element.
    #[serde(skip)]
    assignment: Vec<usize>,
}

impl Partition {
    /// `block_sizes` has one entry per coordinate: `d` for `G`, `2d`
    /// (x-coordinates then ω-coordinates) for `G x Ĝ` and the Heisenberg group.
    pub fn new(domain: Domain, block_sizes: &[usize]) -> Result<Self> {
        let moduli: Vec<usize> = match &domain {
            Domain::Group(g) => g.moduli().to_vec(),
            _ => [domain.base().moduli(), domain.base().moduli()].concat(),
        };
        if block_sizes.len() != moduli.len() {
            return Err(Error::InvalidParameter(format!(
                "{} block sizes for {} coordinates",
                block_sizes.len(),
                moduli.len()
            )));
        }
        for (&b, &n) in block_sizes.iter().zip(&moduli) {
            if b == 0 || n % b != 0 {
                return Err(Error::InvalidParameter(format!(
                    "block size {b} does not divide modulus {n}"
                )));
            }
        }
        let grid: Vec<usize> = moduli.iter().zip(block_sizes).map(|(n, b)| n / b).collect();
        let mut assignment = Vec::with_capacity(domain.order());
        let mut coords = Vec::new();
        for i in 0..domain.order() {
            cell_coords(&domain, i, &mut coords);
            let mut idx = 0;
            for ((c, b), g) in coords.iter().zip(block_sizes).zip(&grid) {
                idx = idx * g + c / b;
            }
            assignment.push(idx);
        }
        Ok(Partition {
            domain,
            block_sizes: block_sizes.to_vec(),
            grid,
            assignment,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// Moduli of the quotient grid `Z_{N_i / B_i}`.
    pub fn grid(&self) -> &[usize] {
        &self.grid
    }

    pub fn num_blocks(&self) -> usize {
        self.grid.iter().product()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Members of each block, in enumeration order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.assignment.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.grid.len()];
        for (o, &g) in out.iter_mut().zip(&self.grid).rev() {
            *o = idx % g;
            idx /= g;
        }
        out
    }

    /// `μ - ν` on the quotient grid.
    pub fn grid_sub(&self, mu: usize, nu: usize) -> usize {
        let a = self.decode(mu);
        let b = self.decode(nu);
        let mut idx = 0;
        for ((x, y), &g) in a.iter().zip(&b).zip(&self.grid) {
            idx = idx * g + (x + g - y) % g;
        }
        idx
    }

    /// Circular ℓ¹ length of a grid index.
    pub fn grid_distance(&self, gamma: usize) -> usize {
        self.decode(gamma)
            .iter()
            .zip(&self.grid)
            .map(|(&a, &g)| a.min(g - a))
            .sum()
    }

    /// Weight of a block index, evaluated on the quotient grid.
    pub fn block_weight(&self, w: &WeightFn, gamma: usize) -> f64 {
        w.at_distance(self.grid_distance(gamma) as f64)
    }
}

pub fn make_partition(domain: Domain, block_sizes: &[usize]) -> Result<Partition> {
    Partition::new(domain, block_sizes)
}

fn lp_combine(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `‖f‖_{W(L^p, l^q_v)} = ( Σ_i ‖f‖^q_{L^p(iU)} v(i)^q )^{1/q}`, with the weight
/// evaluated at the block index on the quotient grid.
pub fn amalgam_norm(
    f: &GroupFunction,
    p: f64,
    q: f64,
    w: &WeightFn,
    part: &Partition,
) -> Result<f64> {
    for e in [p, q] {
        if e.is_nan() || e < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "exponent {e} outside [1, ∞]"
            )));
        }
    }
    if f.domain() != part.domain() {
        return Err(Error::DomainMismatch(
            "partition and function domains differ".into(),
        ));
    }
    let mu = f.domain().point_measure();
    let local: Vec<f64> = part
        .blocks()
        .iter()
        .map(|members| {
            let vals = members.iter().map(|&i| f[i].norm());
            if p.is_infinite() {
                vals.fold(0.0, f64::max)
            } else {
                (vals.map(|v| v.powf(p)).sum::<f64>() * mu).powf(1.0 / p)
            }
        })
        .collect();
    Ok(lp_combine(
        local
            .iter()
            .enumerate()
            .map(|(gamma, l)| l * part.block_weight(w, gamma)),
        q,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayModel {
    /// `β(d) ≈ C (1 + d)^{-s}`.
    Polynomial,
    /// `β(d) ≈ C e^{-a d}`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub rate: f64,
    pub intercept: f64,
    /// RMS of the log-domain residual.
    pub residual: f64,
    pub points: usize,
}

impl DecayFit {
    pub fn predict(&self, d: f64) -> f64 {
        let x = match self.model {
            DecayModel::Polynomial => (1.0 + d).ln(),
            DecayModel::Exponential => d,
        };
        (self.intercept - self.rate * x).exp()
    }
}

/// Envelope `β(u) = max_{offset(t,s) = u} |A(t, s)|` and its radial profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayProfile {
    /// Indexed by domain element.
    pub envelope: Vec<f64>,
    /// `max{β(u) : |u| = d}`, indexed by distance `d`.
    pub radial: Vec<f64>,
    pub polynomial: Option<DecayFit>,
    pub exponential: Option<DecayFit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecaySummary {
    pub model: Option<DecayModel>,
    pub rate: Option<f64>,
    pub residual: Option<f64>,
    pub polynomial: Option<DecayFit>,
    pub exponential: Option<DecayFit>,
}

impl DecayProfile {
    /// Builds the radial profile and fits it over `1 ≤ d ≤ max_distance / 2`.
    pub fn from_envelope(domain: &Domain, envelope: Vec<f64>) -> Self {
        let maxd = domain.max_distance();
        let mut radial = vec![0.0f64; maxd + 1];
        for (u, &b) in envelope.iter().enumerate() {
            let d = domain.distance_index(u);
            radial[d] = radial[d].max(b);
        }
        let hi = (maxd / 2).max(1);
        let polynomial = fit(&radial, hi, DecayModel::Polynomial);
        let exponential = fit(&radial, hi, DecayModel::Exponential);
        DecayProfile {
            envelope,
            radial,
            polynomial,
            exponential,
        }
    }

    /// Fit with the smaller log-residual.
    pub fn best(&self) -> Option<DecayFit> {
        match (self.polynomial, self.exponential) {
            (Some(p), Some(e)) => Some(if e.residual <= p.residual { e } else { p }),
            (p, e) => p.or(e),
        }
    }

    /// `max{β(u) : |u| > k}`.
    pub fn tail_max(&self, k: usize) -> f64 {
        self.radial.iter().skip(k + 1).copied().fold(0.0, f64::max)
    }

    pub fn summary(&self) -> DecaySummary {
        let best = self.best();
        DecaySummary {
            model: best.map(|b| b.model),
            rate: best.map(|b| b.rate),
            residual: best.map(|b| b.residual),
            polynomial: self.polynomial,
            exponential: self.exponential,
        }
    }

    /// `distance,envelope,fitted` rows over the radial profile.
    pub fn to_csv(&self) -> String {
        let best = self.best();
        let mut s = String::from("distance,envelope,fitted\n");
        for (d, b) in self.radial.iter().enumerate() {
            let fitted = best.map(|f| f.predict(d as f64)).unwrap_or(f64::NAN);
            let _ = writeln!(s, "{d},{b:e},{fitted:e}");
        }
        s
    }
}

fn fit(radial: &[f64], hi: usize, model: DecayModel) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = (1..=hi.min(radial.len().saturating_sub(1)))
        .filter(|&d| radial[d] > FIT_FLOOR)
        .map(|d| {
            let x = match model {
                DecayModel::Polynomial => (1.0 + d as f64).ln(),
                DecayModel::Exponential => d as f64,
            };
            (x, radial[d].ln())
        })
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let rate = -slope;
    rate.is_finite().then_some(DecayFit {
        model,
        rate,
        intercept,
        residual,
        points: pts.len(),
    })
}

/// Minimal majorant of the kernel along generalized diagonals.
pub fn envelope(a: &OperatorMatrix) -> DecayProfile {
    let d = a.domain();
    let n = a.dim();
    let mut beta = vec![0.0f64; n];
    for t in 0..n {
        for (s, v) in a.row(t).iter().enumerate() {
            let u = d.kernel_offset(t, s);
            let m = v.norm();
            if m > beta[u] {
                beta[u] = m;
            }
        }
    }
    DecayProfile::from_envelope(d, beta)
}

/// Envelope of a function (its own modulus), for decay fits of convolution kernels.
pub fn function_profile(f: &GroupFunction) -> DecayProfile {
    DecayProfile::from_envelope(f.domain(), f.values().iter().map(|v| v.norm()).collect())
}

/// `Σ_u β(u) v(u)`.
pub fn n1v_norm(a: &OperatorMatrix, w: &WeightFn) -> f64 {
    let prof = envelope(a);
    prof.envelope
        .iter()
        .enumerate()
        .map(|(u, b)| b * w.eval_index(a.domain(), u))
        .sum()
}

fn check_partition(a: &OperatorMatrix, part: &Partition) -> Result<()> {
    if a.domain() != part.domain() {
        return Err(Error::DomainMismatch(
            "partition does not match the operator's domain".into(),
        ));
    }
    Ok(())
}

/// `α_γ = max_{μ-ν=γ} ‖A_{μν}‖` for a per-block norm computed by `block_norm`.
fn diagonal_sups(part: &Partition, block_norms: &[f64]) -> Vec<f64> {
    let nb = part.num_blocks();
    let mut alpha = vec![0.0f64; nb];
    for mu in 0..nb {
        for nu in 0..nb {
            let g = part.grid_sub(mu, nu);
            alpha[g] = alpha[g].max(block_norms[mu * nb + nu]);
        }
    }
    alpha
}

fn weighted_grid_sum(part: &Partition, alpha: &[f64], w: &WeightFn) -> f64 {
    alpha
        .iter()
        .enumerate()
        .map(|(g, a)| a * part.block_weight(w, g))
        .sum()
}

/// Max absolute entry of each block `(μ, ν)`, row-major in `(μ, ν)`.
fn block_max_entries(a: &OperatorMatrix, part: &Partition) -> Vec<f64> {
    let nb = part.num_blocks();
    let mut out = vec![0.0f64; nb * nb];
    for t in 0..a.dim() {
        let mu = part.block_of(t);
        for (s, v) in a.row(t).iter().enumerate() {
            let k = mu * nb + part.block_of(s);
            out[k] = out[k].max(v.norm());
        }
    }
    out
}

/// Per-block ℓ^∞→ℓ^∞ (max row sum) norms.
fn block_row_sums(a: &OperatorMatrix, part: &Partition) -> Vec<f64> {
    let nb = part.num_blocks();
    let mut out = vec![0.0f64; nb * nb];
    let mut acc = vec![0.0f64; nb];
    for t in 0..a.dim() {
        acc.iter_mut().for_each(|x| *x = 0.0);
        for (s, v) in a.row(t).iter().enumerate() {
            acc[part.block_of(s)] += v.norm();
        }
        let mu = part.block_of(t);
        for nu in 0..nb {
            out[mu * nb + nu] = out[mu * nb + nu].max(acc[nu]);
        }
    }
    out
}

/// Per-block ℓ¹→ℓ¹ (max column sum) norms.
fn block_col_sums(a: &OperatorMatrix, part: &Partition) -> Vec<f64> {
    let nb = part.num_blocks();
    let n = a.dim();
    let mut out = vec![0.0f64; nb * nb];
    let mut acc = vec![0.0f64; nb];
    for s in 0..n {
        acc.iter_mut().for_each(|x| *x = 0.0);
        for t in 0..n {
            acc[part.block_of(t)] += a.get(t, s).norm();
        }
        let nu = part.block_of(s);
        for mu in 0..nb {
            out[mu * nb + nu] = out[mu * nb + nu].max(acc[mu]);
        }
    }
    out
}

/// `Σ_γ sup_{μ-ν=γ} ‖A_{μν}: ℓ¹ → ℓ^∞‖ v(γ)`, the block ℓ¹→ℓ^∞ norm being the
/// largest absolute entry under counting measure.
pub fn ninf_block_norm(a: &OperatorMatrix, part: &Partition, w: &WeightFn) -> Result<f64> {
    check_partition(a, part)?;
    let alpha = diagonal_sups(part, &block_max_entries(a, part));
    Ok(weighted_grid_sum(part, &alpha, w))
}

/// `Σ_γ sup_{μ-ν=γ} ‖T_{μν}: ℓ^p → ℓ^p‖ v(γ)` for `p = 1` and `p = ∞`.
pub fn block_operator_norms(
    t: &OperatorMatrix,
    part: &Partition,
    w: &WeightFn,
) -> Result<(f64, f64)> {
    check_partition(t, part)?;
    let one = weighted_grid_sum(part, &diagonal_sups(part, &block_col_sums(t, part)), w);
    let inf = weighted_grid_sum(part, &diagonal_sups(part, &block_row_sums(t, part)), w);
    Ok((one, inf))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealReport {
    /// `‖N‖_{𝒩^∞_v}`.
    pub n_norm: f64,
    /// Weighted block ℓ¹→ℓ¹ norm of `T`.
    pub t_one: f64,
    /// Weighted block ℓ^∞→ℓ^∞ norm of `T`.
    pub t_inf: f64,
    pub nt_lhs: f64,
    pub nt_rhs: f64,
    pub nt_ratio: f64,
    pub tn_lhs: f64,
    pub tn_rhs: f64,
    pub tn_ratio: f64,
    pub holds: bool,
}

/// Two-sided ideal inequalities for the block norm:
/// `‖NT‖ ≤ ‖T‖_{1→1} ‖N‖` and `‖TN‖ ≤ ‖T‖_{∞→∞} ‖N‖`, where `‖T‖_{p→p}` is
/// the weighted sum over block diagonals of the largest `ℓ^p → ℓ^p` block norm.
pub fn ideal_inequality_check(
    n: &OperatorMatrix,
    t: &OperatorMatrix,
    part: &Partition,
    w: &WeightFn,
) -> Result<IdealReport> {
    let n_norm = ninf_block_norm(n, part, w)?;
    let (t_one, t_inf) = block_operator_norms(t, part, w)?;
    let nt_lhs = ninf_block_norm(&n.matmul(t)?, part, w)?;
    let tn_lhs = ninf_block_norm(&t.matmul(n)?, part, w)?;
    let nt_rhs = t_one * n_norm;
    let tn_rhs = t_inf * n_norm;
    let ratio = |l: f64, r: f64| {
        if r > 0.0 {
            l / r
        } else if l > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    let nt_ratio = ratio(nt_lhs, nt_rhs);
    let tn_ratio = ratio(tn_lhs, tn_rhs);
    Ok(IdealReport {
        n_norm,
        t_one,
        t_inf,
        nt_lhs,
        nt_rhs,
        nt_ratio,
        tn_lhs,
        tn_rhs,
        tn_ratio,
        holds: nt_ratio <= 1.0 + 1e-12 && tn_ratio <= 1.0 + 1e-12,
    })
}

/// `‖N: L¹(block) → L^∞(block)‖ = max|A| / λ` when each point of the block
/// carries measure `λ`. For the identity this is `1/λ`, which is unbounded as
/// the block measure shrinks.
pub fn identity_block_norm(points: usize, block_measure: f64) -> f64 {
    let lambda = block_measure / points as f64;
    1.0 / lambda
}

/// Zeroes every entry whose offset lies farther than `k` from the diagonal.
pub fn band_truncate(a: &OperatorMatrix, k: usize) -> OperatorMatrix {
    let d = a.domain().clone();
    let dd = d.clone();
    OperatorMatrix::from_fn(d, move |t, s| {
        if dd.distance_index(dd.kernel_offset(t, s)) <= k {
            a.get(t, s)
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    })
}

/// Number of entries kept by [`band_truncate`].
pub fn band_entries(domain: &Domain, k: usize) -> usize {
    let n = domain.order();
    let per_row = (0..n).filter(|&u| domain.distance_index(u) <= k).count();
    match domain {
        Domain::Heisenberg(_) => (0..n)
            .map(|t| {
                (0..n)
                    .filter(|&s| domain.distance_index(domain.kernel_offset(t, s)) <= k)
                    .count()
            })
            .sum(),
        _ => n * per_row,
    }
}
