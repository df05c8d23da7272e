//! Inverting `αδ + f` in the convolution algebras, and the experiments that
//! watch how the inverse's decay behaves as the group grows.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::{convolution_matrix, convolve, ConvolutionKind};
use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::group::GroupSpec;
use crate::matrix::{dense_inverse, OperatorMatrix};
use crate::norms::{function_profile, weighted_l1, DecayProfile};
use crate::weights::WeightFn;
use crate::weyl::{spreading_of, weyl_operator, SpreadingFunction};

/// `αδ + f`.
pub fn shifted(alpha: Complex64, f: &GroupFunction) -> GroupFunction {
    let mut a = f.clone();
    let d = GroupFunction::delta(f.domain().clone());
    a.values_mut()[0] += alpha * d[0];
    a
}

/// Matrix of `φ ↦ (αδ + f) ∗ φ`.
pub fn convolver_matrix(
    alpha: Complex64,
    f: &GroupFunction,
    kind: ConvolutionKind,
) -> Result<OperatorMatrix> {
    convolution_matrix(kind, &shifted(alpha, f))
}

fn singular_diagnostic(e: Error, alpha: Complex64, f: &GroupFunction) -> Error {
    match e {
        Error::Singular {
            column,
            pivot,
            threshold,
            ..
        } => Error::Singular {
            column,
            pivot,
            threshold,
            diagnostic: format!("; ‖f‖₁ = {:.6} vs |α| = {:.6}", f.l1_norm(), alpha.norm()),
        },
        other => other,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseReport {
    pub kind: ConvolutionKind,
    pub alpha: Complex64,
    /// `(αδ + f)^{-1}` as one algebra element (the identity part is not split off).
    pub theta: GroupFunction,
    pub weight: WeightFn,
    /// `‖f‖_{1,v}`.
    pub input_norm: f64,
    /// `‖θ‖_{1,v}`.
    pub output_norm: f64,
    pub envelope_in: DecayProfile,
    pub envelope_out: DecayProfile,
    /// `max |A^{-1} - C_θ|` with `C_θ` the convolution matrix of `θ`.
    pub circulant_defect: f64,
    /// `circulant_defect / max |A^{-1}|`.
    pub circulant_defect_rel: f64,
    /// `max |(αδ+f) ∗ θ - δ| / max |δ|`.
    pub left_residual: f64,
    /// `max |θ ∗ (αδ+f) - δ| / max |δ|`.
    pub right_residual: f64,
    /// `max |A A^{-1} - I|`.
    pub matrix_residual: f64,
}

/// Inverts `αδ + f` through its dense operator matrix and reads off the kernel
/// of the inverse as `θ = A^{-1} δ`.
pub fn invert_convolver(
    alpha: Complex64,
    f: &GroupFunction,
    kind: ConvolutionKind,
    weight: &WeightFn,
) -> Result<InverseReport> {
    kind.check(f.domain())?;
    let a = convolver_matrix(alpha, f, kind)?;
    let inv = dense_inverse(&a).map_err(|e| singular_diagnostic(e, alpha, f))?;
    let delta = GroupFunction::delta(f.domain().clone());
    let theta = inv.apply(&delta)?;

    let circ = convolution_matrix(kind, &theta)?;
    let circulant_defect = inv.max_abs_diff(&circ)?;
    let inv_max = inv.max_abs();

    let a_fn = shifted(alpha, f);
    let dmax = delta.sup_norm();
    let left_residual = convolve(kind, &a_fn, &theta)?.max_abs_diff(&delta)? / dmax;
    let right_residual = convolve(kind, &theta, &a_fn)?.max_abs_diff(&delta)? / dmax;

    Ok(InverseReport {
        kind,
        alpha,
        weight: *weight,
        input_norm: weighted_l1(f, weight),
        output_norm: weighted_l1(&theta, weight),
        envelope_in: function_profile(f),
        envelope_out: function_profile(&theta),
        circulant_defect,
        circulant_defect_rel: if inv_max > 0.0 {
            circulant_defect / inv_max
        } else {
            0.0
        },
        left_residual,
        right_residual,
        matrix_residual: a.identity_residual(&inv)?,
        theta,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeumannResult {
    pub theta: GroupFunction,
    /// Number of series terms summed.
    pub terms: usize,
    pub last_term_norm: f64,
}

/// Consecutive non-decreasing term norms after which the series is declared divergent.
pub const DIVERGENCE_WINDOW: usize = 10;

/// `Σ_k (-1)^k α^{-k-1} f^{∗k}`, stopped once a term's ℓ¹ norm drops below `tol`.
pub fn neumann_inverse(
    alpha: Complex64,
    f: &GroupFunction,
    kind: ConvolutionKind,
    tol: f64,
    max_iter: usize,
) -> Result<NeumannResult> {
    kind.check(f.domain())?;
    if alpha == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter("α must be nonzero".into()));
    }
    let step = -alpha.inv();
    let mut term = GroupFunction::delta(f.domain().clone()).scale(alpha.inv());
    let mut sum = term.clone();
    let mut last = term.l1_norm();
    let mut rising = 0;
    for k in 1..max_iter {
        term = convolve(kind, f, &term)?.scale(step);
        let norm = term.l1_norm();
        if norm < tol {
            return Ok(NeumannResult {
                theta: sum,
                terms: k,
                last_term_norm: norm,
            });
        }
        sum = sum.add(&term)?;
        rising = if norm >= last { rising + 1 } else { 0 };
        if rising >= DIVERGENCE_WINDOW {
            return Err(Error::Divergence {
                iterations: k + 1,
                last_norm: norm,
            });
        }
        last = norm;
    }
    Err(Error::NotConverged { tol, max_iter })
}

/// Signed pattern on the integers, windowed into `Z_N` over `(-N/2, N/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum Pattern {
    Zero,
    /// `amplitude · sign^n · (1 + |n|)^{-s}` with `sign = -1` when `alternating`.
    PowerLaw {
        amplitude: f64,
        s: f64,
        alternating: bool,
    },
    /// `c · δ_1`.
    Shift {
        c: f64,
    },
}

impl Pattern {
    pub fn at(&self, n: i64) -> f64 {
        match *self {
            Pattern::Zero => 0.0,
            Pattern::PowerLaw {
                amplitude,
                s,
                alternating,
            } => {
                let sign = if alternating && n.rem_euclid(2) == 1 {
                    -1.0
                } else {
                    1.0
                };
                amplitude * sign * (1.0 + n.unsigned_abs() as f64).powf(-s)
            }
            Pattern::Shift { c } => {
                if n == 1 {
                    c
                } else {
                    0.0
                }
            }
        }
    }

    /// Restriction to `Z_N`, with index `i` read as `i` or `i - N` so that it lies in `(-N/2, N/2]`.
    pub fn window(&self, n: usize) -> Result<GroupFunction> {
        let domain = Domain::Group(GroupSpec::cyclic(n)?);
        Ok(GroupFunction::from_fn(domain, |i| {
            let k = if 2 * i <= n {
                i as i64
            } else {
                i as i64 - n as i64
            };
            Complex64::new(self.at(k), 0.0)
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    pub f_norm: f64,
    pub g_norm: Option<f64>,
    pub f_rate: Option<f64>,
    pub g_rate: Option<f64>,
    pub circulant_defect_rel: Option<f64>,
    pub singular: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub pattern: Pattern,
    pub alpha: Complex64,
    pub weight: WeightFn,
    pub rows: Vec<DecayRow>,
    /// `(N, ‖g‖_v(2N) / ‖g‖_v(N))` for consecutive ladder points that double.
    pub ratios: Vec<(usize, f64)>,
}

impl DecayReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,f_norm,g_norm,f_rate,g_rate,ratio\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            let ratio = self.ratios.iter().find(|(n, _)| *n == r.n).map(|p| p.1);
            s += &format!(
                "{},{:e},{},{},{},{}\n",
                r.n,
                r.f_norm,
                opt(r.g_norm),
                opt(r.f_rate),
                opt(r.g_rate),
                opt(ratio)
            );
        }
        s
    }
}

/// Inverts `αδ + f_N` for every `N` of the ladder on `Z_N` and tracks `‖g‖_{ℓ¹_v}`.
/// Singular instances are recorded in the row rather than aborting the run.
pub fn decay_preservation_experiment(
    pattern: Pattern,
    alpha: Complex64,
    w: &WeightFn,
    ladder: &[usize],
    kind: ConvolutionKind,
) -> Result<DecayReport> {
    if kind != ConvolutionKind::Plain {
        return Err(Error::InvalidParameter(
            "integer patterns embed into Z_N, which carries only the plain kind".into(),
        ));
    }
    w.validate()?;
    let rows: Vec<DecayRow> = ladder
        .par_iter()
        .map(|&n| -> Result<DecayRow> {
            let f = pattern.window(n)?;
            let f_norm = weighted_l1(&f, w);
            let f_rate = function_profile(&f).best().map(|b| b.rate);
            Ok(match invert_convolver(alpha, &f, kind, w) {
                Ok(r) => DecayRow {
                    n,
                    f_norm,
                    g_norm: Some(r.output_norm),
                    f_rate,
                    g_rate: r.envelope_out.best().map(|b| b.rate),
                    circulant_defect_rel: Some(r.circulant_defect_rel),
                    singular: None,
                },
                Err(e @ Error::Singular { .. }) => DecayRow {
                    n,
                    f_norm,
                    g_norm: None,
                    f_rate,
                    g_rate: None,
                    circulant_defect_rel: None,
                    singular: Some(e.to_string()),
                },
                Err(e) => return Err(e),
            })
        })
        .collect::<Result<_>>()?;
    let ratios = rows
        .windows(2)
        .filter(|p| p[1].n == 2 * p[0].n)
        .filter_map(|p| Some((p[0].n, p[1].g_norm? / p[0].g_norm?)))
        .collect();
    Ok(DecayReport {
        pattern,
        alpha,
        weight: *w,
        rows,
        ratios,
    })
}

/// `θ(n) = (-c)^n / (1 - (-c)^N)` for `n ∈ [0, N)`, the inverse of `δ + c δ_1` on `Z_N`.
pub fn geometric_inverse(c: f64, n: usize) -> Vec<f64> {
    let denom = 1.0 - (-c).powi(n as i32);
    (0..n).map(|k| (-c).powi(k as i32) / denom).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrsRow {
    pub weight: WeightFn,
    pub n: usize,
    pub norm: f64,
    pub closed_form: f64,
    /// `max_k |θ(k) - closed form|`.
    pub kernel_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrsSeries {
    pub weight: WeightFn,
    /// `norm(N_last) / norm(N_first)`.
    pub growth: f64,
    /// Exponential rate against `|log c|`; `None` for the other kinds.
    pub exceeds_inverse_rate: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrsReport {
    pub c: f64,
    pub inverse_rate: f64,
    pub rows: Vec<GrsRow>,
    pub series: Vec<GrsSeries>,
}

/// Weighted norms of the inverse of `δ + c δ_1` on `Z_N` for each weight and size.
pub fn grs_experiment(c: f64, weights: &[WeightFn], ladder: &[usize]) -> Result<GrsReport> {
    if c.is_nan() || c.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "|c| = {} must be below 1",
            c.abs()
        )));
    }
    if ladder.is_empty() {
        return Err(Error::InvalidParameter("empty size ladder".into()));
    }
    for w in weights {
        w.validate()?;
    }
    let pattern = Pattern::Shift { c };
    let thetas: Vec<(usize, GroupFunction)> = ladder
        .par_iter()
        .map(|&n| {
            let f = pattern.window(n)?;
            let a = convolver_matrix(Complex64::new(1.0, 0.0), &f, ConvolutionKind::Plain)?;
            let theta = dense_inverse(&a)?.apply(&GroupFunction::delta(f.domain().clone()))?;
            Ok((n, theta))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for w in weights {
        let mut norms = Vec::new();
        for (n, theta) in &thetas {
            let exact = geometric_inverse(c, *n);
            let closed_form = exact
                .iter()
                .enumerate()
                .map(|(k, t)| t.abs() * w.eval_index(theta.domain(), k))
                .sum();
            let kernel_error = exact
                .iter()
                .zip(theta.values())
                .map(|(e, t)| (t - e).norm())
                .fold(0.0, f64::max);
            let norm = weighted_l1(theta, w);
            norms.push(norm);
            rows.push(GrsRow {
                weight: *w,
                n: *n,
                norm,
                closed_form,
                kernel_error,
            });
        }
        series.push(GrsSeries {
            weight: *w,
            growth: norms[norms.len() - 1] / norms[0],
            exceeds_inverse_rate: match w {
                WeightFn::Exponential { a } => Some(*a > -c.abs().ln()),
                _ => None,
            },
        });
    }
    Ok(GrsReport {
        c,
        inverse_rate: -c.abs().ln(),
        rows,
        series,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylClosureReport {
    pub sigma_l1: f64,
    /// `‖τ̂‖_{1,v}` on `G x Ĝ`, where `(I + L_σ)^{-1} = I + L_τ`.
    pub tau_weighted_l1: f64,
    /// `max |(δ + σ̂) ♮ (δ + τ̂) - δ|`.
    pub left_residual: f64,
    /// `max |(δ + τ̂) ♮ (δ + σ̂) - δ|`.
    pub right_residual: f64,
    pub tau: SpreadingFunction,
}

/// Inverts `I + L_σ` densely and reads the inverse back as `I + L_τ`.
pub fn weyl_inverse_closure(sigma: &SpreadingFunction, w: &WeightFn) -> Result<WeylClosureReport> {
    let spec = sigma.spec().clone();
    let a = weyl_operator(sigma)?.shift_diagonal(Complex64::new(1.0, 0.0));
    let gamma = spreading_of(&dense_inverse(&a)?)?;
    let one = Complex64::new(1.0, 0.0);
    let delta = SpreadingFunction::point(spec, 0, 0, one);
    let tau = gamma.lin_comb(one, &delta, -one)?;
    let lhs = delta.lin_comb(one, sigma, one)?;
    let left_residual = lhs.twisted(&gamma)?.max_abs_diff(&delta)?;
    let right_residual = gamma.twisted(&lhs)?.max_abs_diff(&delta)?;
    Ok(WeylClosureReport {
        sigma_l1: sigma.l1_norm(),
        tau_weighted_l1: weighted_l1(&tau.to_phase_space(), w),
        left_residual,
        right_residual,
        tau,
    })
}
