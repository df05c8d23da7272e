//! Invariant suite run by `heislab verify`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{equalization_sweep, ChannelModel, ChannelParams};
use crate::convolution::{convolution_matrix, convolve, heis_convolve, ConvolutionKind};
use crate::error::Result;
use crate::function::{Domain, GroupFunction};
use crate::group::{GroupSpec, HeisSpec};
use crate::inversion::{invert_convolver, neumann_inverse};
use crate::matrix::OperatorMatrix;
use crate::norms::{ideal_inequality_check, Partition};
use crate::weights::{check_admissible, Verdict, WeightFn};
use crate::weyl::{compose_check, lp_bound_check, spreading_of, weyl_operator, SpreadingFunction};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances per randomized check.
    pub trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            trials: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    /// Largest observed defect, in the check's own units.
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<SuiteCheck>,
}

fn check(name: &str, worst: f64, tolerance: f64) -> SuiteCheck {
    SuiteCheck {
        name: name.into(),
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

fn rel(a: &GroupFunction, b: &GroupFunction) -> Result<f64> {
    Ok(a.max_abs_diff(b)? / b.sup_norm().max(f64::MIN_POSITIVE))
}

fn scaled(f: GroupFunction, l1: f64) -> GroupFunction {
    let s = l1 / f.l1_norm();
    f.scale(Complex64::new(s, 0.0))
}

fn group_axioms() -> SuiteCheck {
    let h = HeisSpec::over(&[4]).expect("Z_4 is valid");
    let n = h.order();
    let mut bad = 0usize;
    for a in 0..n {
        if h.mul_index(a, 0) != a || h.mul_index(0, a) != a || h.mul_index(a, h.inv_index(a)) != 0 {
            bad += 1;
        }
        for b in 0..n {
            let ab = h.mul_index(a, b);
            for c in 0..n {
                if h.mul_index(ab, c) != h.mul_index(a, h.mul_index(b, c)) {
                    bad += 1;
                }
            }
        }
    }
    check("heisenberg group axioms on Z_4", bad as f64, 0.0)
}

fn algebra(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<SuiteCheck>> {
    let domains = [
        (ConvolutionKind::Plain, Domain::Group(GroupSpec::cyclic(8)?)),
        (
            ConvolutionKind::Twisted,
            Domain::PhaseSpace(GroupSpec::cyclic(4)?),
        ),
        (
            ConvolutionKind::Heisenberg,
            Domain::Heisenberg(HeisSpec::over(&[3])?),
        ),
    ];
    let mut ident = 0.0f64;
    let mut assoc = 0.0f64;
    let mut matrix = 0.0f64;
    for _ in 0..trials.max(1) {
        for (kind, d) in &domains {
            let f = GroupFunction::random(d.clone(), rng);
            let g = GroupFunction::random(d.clone(), rng);
            let h = GroupFunction::random(d.clone(), rng);
            let delta = GroupFunction::delta(d.clone());
            ident = ident.max(rel(&convolve(*kind, &delta, &f)?, &f)?);
            ident = ident.max(rel(&convolve(*kind, &f, &delta)?, &f)?);
            let l = convolve(*kind, &convolve(*kind, &f, &g)?, &h)?;
            let r = convolve(*kind, &f, &convolve(*kind, &g, &h)?)?;
            assoc = assoc.max(rel(&l, &r)?);
            let direct = match kind {
                ConvolutionKind::Heisenberg => heis_convolve(&f, &g)?,
                _ => convolution_matrix(*kind, &f)?.apply(&g)?,
            };
            matrix = matrix.max(rel(&convolve(*kind, &f, &g)?, &direct)?);
        }
    }
    Ok(vec![
        check("convolution δ-identity", ident, 1e-12),
        check("convolution associativity", assoc, 1e-12),
        check("fast convolution against direct sums", matrix, 1e-12),
    ])
}

fn domination(rng: &mut ChaCha8Rng, trials: usize) -> Result<SuiteCheck> {
    let d = Domain::PhaseSpace(GroupSpec::cyclic(8)?);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let f = GroupFunction::random(d.clone(), rng);
        let g = GroupFunction::random(d.clone(), rng);
        let tw = convolve(ConvolutionKind::Twisted, &f, &g)?;
        let pl = convolve(ConvolutionKind::Plain, &f.abs(), &g.abs())?;
        for (a, b) in tw.values().iter().zip(pl.values()) {
            worst = worst.max(a.norm() - b.re * (1.0 + 1e-12));
        }
    }
    Ok(check(
        "twisted convolution dominated by plain",
        worst.max(0.0),
        0.0,
    ))
}

fn weyl(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<SuiteCheck>> {
    let g = GroupSpec::cyclic(8)?;
    let mut compose = 0.0f64;
    let mut trip = 0.0f64;
    let mut bound = f64::NEG_INFINITY;
    for _ in 0..trials {
        let s = SpreadingFunction::random(g.clone(), rng);
        let t = SpreadingFunction::random(g.clone(), rng);
        let r = compose_check(&s, &t)?;
        compose = compose.max(r.defect / r.tolerance);
        trip = trip.max(spreading_of(&weyl_operator(&s)?)?.max_abs_diff(&s)?);
        let f = GroupFunction::random(Domain::Group(g.clone()), rng);
        for b in lp_bound_check(&s, &f)? {
            bound = bound.max(b.lhs - b.rhs);
        }
    }
    Ok(vec![
        check("Weyl composition rule (defect / tolerance)", compose, 1.0),
        check("Weyl round trip", trip, 1e-12),
        check("Lp boundedness of Weyl operators", bound.max(0.0), 1e-12),
    ])
}

fn inverses(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<SuiteCheck>> {
    let domains = [
        (
            ConvolutionKind::Plain,
            Domain::Group(GroupSpec::cyclic(16)?),
        ),
        (
            ConvolutionKind::Twisted,
            Domain::PhaseSpace(GroupSpec::cyclic(4)?),
        ),
        (
            ConvolutionKind::Heisenberg,
            Domain::Heisenberg(HeisSpec::over(&[3])?),
        ),
    ];
    let one = Complex64::new(1.0, 0.0);
    let mut closure = 0.0f64;
    let mut neumann = 0.0f64;
    for _ in 0..trials {
        for (kind, d) in &domains {
            let f = scaled(GroupFunction::random(d.clone(), rng), 0.8);
            let r = invert_convolver(one, &f, *kind, &WeightFn::Constant)?;
            closure = closure
                .max(r.circulant_defect_rel)
                .max(r.left_residual)
                .max(r.right_residual);
            let n = neumann_inverse(one, &f, *kind, 1e-13, 2000)?;
            neumann = neumann.max(n.theta.max_abs_diff(&r.theta)?);
        }
    }
    Ok(vec![
        check("inverse is a convolution operator", closure, 1e-10),
        check("Neumann series against dense inverse", neumann, 1e-9),
    ])
}

fn ideal(rng: &mut ChaCha8Rng, trials: usize) -> Result<SuiteCheck> {
    let d = Domain::Group(GroupSpec::cyclic(8)?);
    let p = Partition::new(d.clone(), &[2])?;
    let w = WeightFn::polynomial(1.0);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let rand_op = |rng: &mut ChaCha8Rng| {
            let cols: Vec<GroupFunction> = (0..8)
                .map(|_| GroupFunction::random(d.clone(), rng))
                .collect();
            OperatorMatrix::from_fn(d.clone(), |t, s| cols[s][t])
        };
        let n = rand_op(rng);
        let t = rand_op(rng);
        let r = ideal_inequality_check(&n, &t, &p, &w)?;
        worst = worst.max(r.nt_ratio).max(r.tn_ratio);
    }
    Ok(check(
        "block-norm ideal inequalities (ratio)",
        worst,
        1.0 + 1e-12,
    ))
}

fn weights() -> Result<SuiteCheck> {
    let g = GroupSpec::cyclic(64)?;
    let expected = [
        (WeightFn::Constant, Verdict::Admissible),
        (WeightFn::polynomial(2.0), Verdict::Admissible),
        (WeightFn::subexponential(1.0, 0.5), Verdict::Admissible),
        (WeightFn::exponential(1.0), Verdict::NotAdmissible),
    ];
    let wrong = expected
        .iter()
        .filter(|(w, v)| {
            check_admissible(w, &g, 64)
                .map(|r| r.verdict != *v)
                .unwrap_or(true)
        })
        .count();
    Ok(check("admissibility verdicts", wrong as f64, 0.0))
}

fn channel() -> Result<SuiteCheck> {
    let model = ChannelModel::from_params(&ChannelParams::default())?;
    let sweep = equalization_sweep(&model, &[1, 2, 4, 8, 16, 32], 11, 0.0)?;
    let rises = sweep
        .rows
        .windows(2)
        .filter(|p| p[1].mse >= p[0].mse)
        .count();
    let last = sweep.rows.last().map(|r| r.mse).unwrap_or(f64::INFINITY);
    Ok(check(
        "channel MSE strictly decreasing to rounding level",
        if rises == 0 { last } else { f64::INFINITY },
        1e-18,
    ))
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = cfg.trials.max(1);
    let mut checks = vec![group_axioms()];
    checks.extend(algebra(&mut rng, t.min(3))?);
    checks.push(domination(&mut rng, t)?);
    checks.extend(weyl(&mut rng, t)?);
    checks.extend(inverses(&mut rng, t)?);
    checks.push(ideal(&mut rng, t)?);
    checks.push(weights()?);
    checks.push(channel()?);
    Ok(SuiteReport {
        seed: cfg.seed,
        trials: t,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
