//! Doubly dispersive channels on one cyclic symbol window `Z_N`, and their
//! equalization by banded truncations of the inverse.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::group::{root_table, GroupSpec};
use crate::matrix::{dense_inverse, OperatorMatrix};
use crate::norms::{band_entries, band_truncate, envelope, DecaySummary};
use crate::weyl::{weyl_operator, SpreadingFunction};

/// Magnitude law of the delayed copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DelayProfile {
    /// `e^{-a d}`.
    Exponential { a: f64 },
    /// `(1 + d)^{-s}`.
    Polynomial { s: f64 },
}

impl DelayProfile {
    pub fn magnitude(&self, d: usize) -> f64 {
        match *self {
            DelayProfile::Exponential { a } => (-a * d as f64).exp(),
            DelayProfile::Polynomial { s } => (1.0 + d as f64).powf(-s),
        }
    }

    pub fn rate(&self) -> f64 {
        match *self {
            DelayProfile::Exponential { a } => a,
            DelayProfile::Polynomial { s } => s,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rate() >= 0.0 && self.rate().is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delay profile rate {} must be ≥ 0",
                self.rate()
            )));
        }
        Ok(())
    }
}

/// Construction parameters; together with the seed they determine the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub n: usize,
    pub doppler_bound: usize,
    pub profile: DelayProfile,
    pub total_mass: f64,
    pub seed: u64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            n: 64,
            doppler_bound: 2,
            profile: DelayProfile::Exponential { a: 0.8 },
            total_mass: 0.5,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelModel {
    pub params: ChannelParams,
    pub spreading: SpreadingFunction,
}

/// `H f(t) = Σ_{d, ω} h(d, ω) e^{2πi ω(t-d)/N} f(t - d)`: delays `d ∈ [0, N/2)`,
/// Doppler shifts `|ω| ≤ D`, magnitudes `profile(d)` and uniform random phases,
/// scaled so that `‖σ̂‖₁ = total_mass`.
pub fn make_channel(
    n: usize,
    doppler_bound: usize,
    profile: DelayProfile,
    total_mass: f64,
    seed: u64,
) -> Result<ChannelModel> {
    let spec = GroupSpec::cyclic(n)?;
    if 2 * doppler_bound >= n {
        return Err(Error::InvalidParameter(format!(
            "Doppler bound {doppler_bound} must be below N/2 = {}",
            n / 2
        )));
    }
    if !(0.0..1.0).contains(&total_mass) {
        return Err(Error::InvalidParameter(format!(
            "total mass {total_mass} must lie in [0, 1)"
        )));
    }
    profile.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots = root_table(spec.phase_modulus());
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let dopplers: Vec<usize> = (0..n).filter(|&w| w.min(n - w) <= doppler_bound).collect();
    let mut mass = 0.0;
    for d in 0..n.div_ceil(2) {
        let x = (n - d) % n;
        let m = profile.magnitude(d);
        for &w in &dopplers {
            let phase: f64 = rng.gen_range(0.0..TAU);
            // the channel form absorbs e^{-πi x·ω}; put it back
            values[w * n + x] =
                Complex64::from_polar(m, phase) * roots[spec.half_product_index(x, w)];
            mass += m;
        }
    }
    let scale = if mass > 0.0 { total_mass / mass } else { 0.0 };
    for v in &mut values {
        *v *= scale;
    }
    Ok(ChannelModel {
        params: ChannelParams {
            n,
            doppler_bound,
            profile,
            total_mass,
            seed,
        },
        spreading: SpreadingFunction::new(spec, values)?,
    })
}

impl ChannelModel {
    pub fn from_params(p: &ChannelParams) -> Result<Self> {
        make_channel(p.n, p.doppler_bound, p.profile, p.total_mass, p.seed)
    }

    pub fn domain(&self) -> Domain {
        Domain::Group(self.spreading.spec().clone())
    }

    /// `I + L_σ`.
    pub fn operator(&self) -> Result<OperatorMatrix> {
        Ok(weyl_operator(&self.spreading)?.shift_diagonal(Complex64::new(1.0, 0.0)))
    }

    pub fn inverse(&self) -> Result<OperatorMatrix> {
        dense_inverse(&self.operator()?)
    }

    /// `omega,x,re,im` rows in `(ω, x)` order.
    pub fn spreading_csv(&self) -> String {
        let n = self.params.n;
        let mut s = String::from("omega,x,re,im\n");
        for (j, v) in self.spreading.values().iter().enumerate() {
            s += &format!("{},{},{:e},{:e}\n", j / n, j % n, v.re, v.im);
        }
        s
    }
}

/// Applies the inverse, truncated to `k` diagonals on each side, to `received`.
pub fn equalize(model: &ChannelModel, received: &GroupFunction, k: usize) -> Result<GroupFunction> {
    band_truncate(&model.inverse()?, k).apply(received)
}

/// Unit-modulus QPSK symbols.
pub fn qpsk_symbols(domain: Domain, seed: u64) -> GroupFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Complex64> = (0..domain.order())
        .map(|_| {
            let re = if rng.gen::<bool>() {
                FRAC_1_SQRT_2
            } else {
                -FRAC_1_SQRT_2
            };
            let im = if rng.gen::<bool>() {
                FRAC_1_SQRT_2
            } else {
                -FRAC_1_SQRT_2
            };
            Complex64::new(re, im)
        })
        .collect();
    GroupFunction::new(domain, values).expect("length matches the domain")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub kept: usize,
    /// `‖ŝ - s‖² / ‖s‖²`.
    pub mse: f64,
    /// `(τ_k ‖r‖_∞)²`, with `τ_k` the envelope mass of the inverse beyond band `k`
    /// and `r` the received signal; an upper bound on the noiseless `mse`.
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub params: ChannelParams,
    pub symbol_seed: u64,
    pub noise_level: f64,
    pub rows: Vec<SweepRow>,
    pub inverse_decay: DecaySummary,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,kept,mse,bound\n");
        for r in &self.rows {
            s += &format!("{},{},{:e},{:e}\n", r.k, r.kept, r.mse, r.bound);
        }
        s
    }
}

/// Sends seeded QPSK symbols through the channel, adds complex Gaussian noise of
/// standard deviation `noise_level` per component, and equalizes at each band width.
pub fn equalization_sweep(
    model: &ChannelModel,
    ks: &[usize],
    symbol_seed: u64,
    noise_level: f64,
) -> Result<SweepReport> {
    if noise_level.is_nan() || noise_level < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise level {noise_level} must be ≥ 0"
        )));
    }
    let domain = model.domain();
    let h = model.operator()?;
    let inv = dense_inverse(&h)?;
    let prof = envelope(&inv);
    let s = qpsk_symbols(domain.clone(), symbol_seed);
    let mut r = h.apply(&s)?;
    if noise_level > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(symbol_seed.wrapping_add(1));
        let normal =
            Normal::new(0.0, noise_level).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for v in r.values_mut() {
            *v += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
    }
    let r_sup = r.sup_norm();
    let s_energy: f64 = s.values().iter().map(|v| v.norm_sqr()).sum();
    let rows = ks
        .par_iter()
        .map(|&k| -> Result<SweepRow> {
            let est = band_truncate(&inv, k).apply(&r)?;
            let err: f64 = est
                .values()
                .iter()
                .zip(s.values())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            let tail: f64 = prof
                .envelope
                .iter()
                .enumerate()
                .filter(|&(u, _)| domain.distance_index(u) > k)
                .map(|(_, b)| b)
                .sum();
            Ok(SweepRow {
                k,
                kept: band_entries(&domain, k),
                mse: err / s_energy,
                bound: (tail * r_sup).powi(2),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        params: model.params,
        symbol_seed,
        noise_level,
        rows,
        inverse_decay: prof.summary(),
    })
}
