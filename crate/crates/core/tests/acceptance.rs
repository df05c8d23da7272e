//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::f64::consts::TAU;
use std::time::Instant;

use common::{circ_dist, lp, matmul, max_abs, max_diff, rel_diff, Grp, Heis, ZERO};
use heislab::channel::{equalization_sweep, make_channel, DelayProfile};
use heislab::cli::{fixture_mismatches, DecayFixture};
use heislab::convolution::{convolve, twisted_convolve, ConvolutionKind};
use heislab::inversion::{
    decay_preservation_experiment, grs_experiment, invert_convolver, neumann_inverse, Pattern,
};
use heislab::norms::{band_truncate, ideal_inequality_check, Partition};
use heislab::weyl::{compose_check, spreading_of, weyl_operator, SpreadingFunction};
use heislab::{Domain, Error, GroupFunction, GroupSpec, HeisSpec, OperatorMatrix, WeightFn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rand_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 1: Exhaustive group axioms on the Heisenberg group over Z_4, law cross-checked
/// against the one read off from the time-frequency shifts.
fn c01() -> Outcome {
    let start = Instant::now();
    let h = HeisSpec::over(&[4]).unwrap();
    let n = h.order();
    let oracle = Heis::new(&[4]);
    let mut law_mismatch = 0;
    for a in 0..n {
        for b in 0..n {
            law_mismatch += usize::from(h.mul_index(a, b) != oracle.op(a, b));
        }
    }
    let mut assoc = 0usize;
    let mut unit = 0usize;
    for a in 0..n {
        unit += usize::from(h.mul_index(a, 0) != a || h.mul_index(0, a) != a);
        unit +=
            usize::from(h.mul_index(a, h.inv_index(a)) != 0 || h.mul_index(h.inv_index(a), a) != 0);
        for b in 0..n {
            let ab = h.mul_index(a, b);
            for c in 0..n {
                assoc += usize::from(h.mul_index(ab, c) != h.mul_index(a, h.mul_index(b, c)));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        n == 128 && law_mismatch == 0 && assoc == 0 && unit == 0 && secs < 10.0,
        format!("|H| = {n}, {} triples, associativity violations {assoc}, identity/inverse violations {unit}, law mismatches vs representation {law_mismatch}, {secs:.2} s (limit 10 s)", n * n * n),
    )
}

/// Criterion 2: δ-identity and associativity for ⋆ and ♮ against triple-sum oracles.
fn c02() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for moduli in [vec![8], vec![2, 4], vec![2, 3]] {
        let g = Grp::new(&moduli);
        let spec = GroupSpec::new(&moduli).unwrap();
        let d = Domain::PhaseSpace(spec);
        let n = g.order() * g.order();
        let (f, u, v) = (
            rand_vec(n, &mut rng),
            rand_vec(n, &mut rng),
            rand_vec(n, &mut rng),
        );
        let wrap = |x: &[Complex64]| GroupFunction::new(d.clone(), x.to_vec()).unwrap();
        let lib =
            twisted_convolve(&twisted_convolve(&wrap(&f), &wrap(&u)).unwrap(), &wrap(&v)).unwrap();
        let lib_r =
            twisted_convolve(&wrap(&f), &twisted_convolve(&wrap(&u), &wrap(&v)).unwrap()).unwrap();
        let ora = g.twisted(&g.twisted(&f, &u), &v);
        let ora_r = g.twisted(&f, &g.twisted(&u, &v));
        worst = worst
            .max(rel_diff(lib.values(), &ora))
            .max(rel_diff(lib_r.values(), &ora_r))
            .max(rel_diff(&ora_r, &ora));
        let mut delta = vec![ZERO; n];
        delta[0] = Complex64::new(1.0, 0.0);
        let lib_d = twisted_convolve(&wrap(&delta), &wrap(&f)).unwrap();
        let lib_d2 = twisted_convolve(&wrap(&f), &wrap(&delta)).unwrap();
        worst = worst
            .max(rel_diff(lib_d.values(), &f))
            .max(rel_diff(lib_d2.values(), &f));
    }
    for moduli in [vec![4], vec![2, 3]] {
        let oracle = Heis::new(&moduli);
        let d = Domain::Heisenberg(HeisSpec::over(&moduli).unwrap());
        let n = oracle.size();
        let (f, u, v) = (
            rand_vec(n, &mut rng),
            rand_vec(n, &mut rng),
            rand_vec(n, &mut rng),
        );
        let wrap = |x: &[Complex64]| GroupFunction::new(d.clone(), x.to_vec()).unwrap();
        let k = ConvolutionKind::Heisenberg;
        let lib = convolve(k, &convolve(k, &wrap(&f), &wrap(&u)).unwrap(), &wrap(&v)).unwrap();
        let lib_r = convolve(k, &wrap(&f), &convolve(k, &wrap(&u), &wrap(&v)).unwrap()).unwrap();
        let ora = oracle.convolve(&oracle.convolve(&f, &u), &v);
        worst = worst
            .max(rel_diff(lib.values(), &ora))
            .max(rel_diff(lib_r.values(), &ora));
        let delta = GroupFunction::delta(d.clone());
        let lib_d = convolve(k, &delta, &wrap(&f)).unwrap();
        let lib_d2 = convolve(k, &wrap(&f), &delta).unwrap();
        let ora_d = oracle.convolve(delta.values(), &f);
        worst = worst
            .max(rel_diff(lib_d.values(), &f))
            .max(rel_diff(lib_d2.values(), &f))
            .max(rel_diff(&ora_d, &f));
    }
    ensure(worst <= 1e-12, format!("max relative error {worst:.2e} (limit 1e-12), base orders 8, 8, 6 for ♮ and 4, 6 for ⋆"))
}

/// Criterion 3: |F♮G| ≤ |F|∗|G| pointwise on Z_8 x Z_8.
fn c03() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Grp::new(&[8, 8]);
    let d = Domain::PhaseSpace(GroupSpec::cyclic(8).unwrap());
    let mut violations = 0usize;
    let mut min_slack = f64::INFINITY;
    for _ in 0..100 {
        let f = GroupFunction::random(d.clone(), &mut rng);
        let u = GroupFunction::random(d.clone(), &mut rng);
        let tw = twisted_convolve(&f, &u).unwrap();
        let fa: Vec<Complex64> = f
            .values()
            .iter()
            .map(|z| Complex64::new(z.norm(), 0.0))
            .collect();
        let ua: Vec<Complex64> = u
            .values()
            .iter()
            .map(|z| Complex64::new(z.norm(), 0.0))
            .collect();
        // G x Ĝ as the abelian group Z_8 x Z_8 in (x, ω) order
        let dom = g.plain(&fa, &ua);
        for (a, b) in tw.values().iter().zip(&dom) {
            let slack = b.re - a.norm();
            min_slack = min_slack.min(slack / b.re);
            if slack < -1e-12 * b.re {
                violations += 1;
            }
        }
    }
    ensure(
        violations == 0,
        format!("100 pairs, {violations} violations, smallest relative slack {min_slack:.3e}"),
    )
}

/// Criterion 4: ‖L_σ L_τ - L_{σ̂♮τ̂}‖_max ≤ 1e-10 (1 + ‖σ̂‖₁‖τ̂‖₁).
fn c04() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ratio = 0.0f64;
    let mut fails = 0;
    let mut pairs = 0;
    for n in [8usize, 16, 64] {
        let g = Grp::new(&[n]);
        let spec = GroupSpec::cyclic(n).unwrap();
        for _ in 0..100 {
            let s = SpreadingFunction::random(spec.clone(), &mut rng);
            let t = SpreadingFunction::random(spec.clone(), &mut rng);
            let prod = matmul(&g.weyl(s.values()), &g.weyl(t.values()), n);
            let lib = weyl_operator(&s.twisted(&t).unwrap()).unwrap();
            let tol = 1e-10 * (1.0 + s.l1_norm() * t.l1_norm());
            let defect = max_diff(lib.data(), &prod);
            let r = compose_check(&s, &t).unwrap();
            worst_ratio = worst_ratio.max(defect / tol).max(r.defect / r.tolerance);
            fails += usize::from(defect > tol || !r.holds);
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        fails == 0 && secs < 60.0,
        format!("{pairs} pairs over N = 8, 16, 64, worst defect/tolerance {worst_ratio:.2e}, {secs:.1} s (limit 60 s)"),
    )
}

/// Criterion 5: spreading_of ∘ weyl_operator = id.
fn c05() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut count = 0;
    for moduli in [
        vec![8],
        vec![16],
        vec![2, 3],
        vec![4, 4],
        vec![32],
        vec![64],
    ] {
        let spec = GroupSpec::new(&moduli).unwrap();
        let g = Grp::new(&moduli);
        for _ in 0..10 {
            let s = SpreadingFunction::random(spec.clone(), &mut rng);
            let op = weyl_operator(&s).unwrap();
            worst = worst.max(max_diff(op.data(), &g.weyl(s.values())) / max_abs(op.data()));
            let back = spreading_of(&op).unwrap();
            worst = worst.max(back.max_abs_diff(&s).unwrap());
            count += 1;
        }
    }
    ensure(
        worst <= 1e-12,
        format!("{count} spreading functions, N ≤ 64, max error {worst:.2e} (limit 1e-12)"),
    )
}

/// Criterion 6: ‖L_σ f‖_p ≤ ‖σ̂‖₁ ‖f‖_p, p = 1, 2, ∞.
fn c06() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100 {
        let n = [8usize, 12, 16][i % 3];
        let g = Grp::new(&[n]);
        let spec = GroupSpec::cyclic(n).unwrap();
        let mut s = SpreadingFunction::random(spec, &mut rng);
        if i % 2 == 0 {
            // sparse spreading makes the bound tighter
            let vals: Vec<Complex64> = s
                .values()
                .iter()
                .enumerate()
                .map(|(j, v)| if j % 7 == 0 { *v } else { ZERO })
                .collect();
            s = SpreadingFunction::new(s.spec().clone(), vals).unwrap();
        }
        let k = g.weyl(s.values());
        let f = rand_vec(n, &mut rng);
        let lf: Vec<Complex64> = (0..n)
            .map(|t| (0..n).map(|j| k[t * n + j] * f[j]).sum())
            .collect();
        for p in [1.0, 2.0, f64::INFINITY] {
            let gap = lp(&lf, p) - s.l1_norm() * lp(&f, p);
            worst = worst.max(gap);
            violations += usize::from(gap > 1e-12);
        }
    }
    ensure(
        violations == 0,
        format!("100 instances x 3 norms, {violations} violations, max (lhs - rhs) {worst:.3e}"),
    )
}

fn kind_domains() -> Vec<(ConvolutionKind, Domain)> {
    vec![
        (
            ConvolutionKind::Plain,
            Domain::Group(GroupSpec::cyclic(16).unwrap()),
        ),
        (
            ConvolutionKind::Twisted,
            Domain::PhaseSpace(GroupSpec::new(&[2, 3]).unwrap()),
        ),
        (
            ConvolutionKind::Heisenberg,
            Domain::Heisenberg(HeisSpec::over(&[4]).unwrap()),
        ),
    ]
}

fn oracle_convolve(
    kind: ConvolutionKind,
    d: &Domain,
    f: &[Complex64],
    g: &[Complex64],
    heis: &Heis,
) -> Vec<Complex64> {
    match kind {
        ConvolutionKind::Plain => Grp::new(d.base().moduli()).plain(f, g),
        ConvolutionKind::Twisted => Grp::new(d.base().moduli()).twisted(f, g),
        ConvolutionKind::Heisenberg => heis.convolve(f, g),
    }
}

/// Criterion 7: Inverse of αδ + f is a convolution operator of the same kind.
fn c07() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let heis = Heis::new(&[4]);
    let mut worst_defect = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut singular = 0;
    for (kind, d) in kind_domains() {
        let mut done = 0;
        while done < 20 {
            let alpha = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
            let f = GroupFunction::random(d.clone(), &mut rng);
            let f = f.scale(Complex64::new(
                rng.gen_range(0.2..2.0) * alpha.norm() / f.l1_norm(),
                0.0,
            ));
            let r = match invert_convolver(alpha, &f, kind, &WeightFn::Constant) {
                Ok(r) => r,
                Err(Error::Singular { .. }) => {
                    singular += 1;
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            let mut a = f.clone();
            a.values_mut()[0] += alpha / d.point_measure();
            let delta = GroupFunction::delta(d.clone());
            let left = oracle_convolve(kind, &d, a.values(), r.theta.values(), &heis);
            let right = oracle_convolve(kind, &d, r.theta.values(), a.values(), &heis);
            let dmax = max_abs(delta.values());
            worst_res = worst_res
                .max(max_diff(&left, delta.values()) / dmax)
                .max(max_diff(&right, delta.values()) / dmax);
            worst_defect = worst_defect.max(r.circulant_defect_rel);
            done += 1;
        }
    }
    ensure(
        worst_defect <= 1e-10 && worst_res <= 1e-10,
        format!("60 instances (20 per kind, {singular} singular draws redrawn), circulant defect {worst_defect:.2e}, two-sided residual {worst_res:.2e} (limits 1e-10)"),
    )
}

/// Criterion 8: Neumann series agrees with the dense inverse when ‖f‖₁ ≤ 0.8|α|.
fn c08() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let doms = kind_domains();
    for i in 0..50 {
        let (kind, d) = doms[i % 3].clone();
        let alpha = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
        let f = GroupFunction::random(d.clone(), &mut rng);
        let f = f.scale(Complex64::new(
            rng.gen_range(0.0..0.8) * alpha.norm() / f.l1_norm(),
            0.0,
        ));
        let dense =
            invert_convolver(alpha, &f, kind, &WeightFn::Constant).map_err(|e| e.to_string())?;
        let series = neumann_inverse(alpha, &f, kind, 1e-13, 5000).map_err(|e| e.to_string())?;
        worst = worst.max(series.theta.max_abs_diff(&dense.theta).unwrap());
    }
    ensure(
        worst <= 1e-9,
        format!("50 instances, max |Neumann - dense| {worst:.2e} (limit 1e-9)"),
    )
}

/// Criterion 9: ‖g‖_{ℓ¹_v}(2N) / ‖g‖_{ℓ¹_v}(N) ∈ [0.9, 1.1] for N ≥ 128, plus the stored fixture.
fn c09() -> Outcome {
    let start = Instant::now();
    let pattern = Pattern::PowerLaw {
        amplitude: 0.5,
        s: 3.0,
        alternating: true,
    };
    let w = WeightFn::polynomial(1.0);
    let one = Complex64::new(1.0, 0.0);
    let r = decay_preservation_experiment(
        pattern,
        one,
        &w,
        &[64, 128, 256, 512],
        ConvolutionKind::Plain,
    )
    .map_err(|e| e.to_string())?;
    // independent check of one kernel against the definition
    let f = pattern.window(64).unwrap();
    let theta = invert_convolver(one, &f, ConvolutionKind::Plain, &w)
        .unwrap()
        .theta;
    let g = Grp::new(&[64]);
    let mut a = f.values().to_vec();
    a[0] += one;
    let res = max_diff(
        &g.plain(&a, theta.values()),
        GroupFunction::delta(f.domain().clone()).values(),
    );
    let oracle_norm: f64 = theta
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm() * (1.0 + circ_dist(&g, i) as f64))
        .sum();
    let norm_err = (oracle_norm - r.rows[0].g_norm.unwrap()).abs() / oracle_norm;

    let ratios: Vec<(usize, f64)> = r
        .ratios
        .iter()
        .copied()
        .filter(|(n, _)| *n >= 128)
        .collect();
    let in_band = ratios.len() == 2 && ratios.iter().all(|(_, x)| (0.9..=1.1).contains(x));
    let fixture: DecayFixture =
        serde_json::from_str(include_str!("fixtures/decay_regression.json"))
            .map_err(|e| e.to_string())?;
    let bad = fixture_mismatches(&r, &fixture);
    let secs = start.elapsed().as_secs_f64();
    let norms: Vec<String> = r
        .rows
        .iter()
        .map(|row| format!("{}:{:.6}", row.n, row.g_norm.unwrap_or(f64::NAN)))
        .collect();
    let rs: Vec<String> = ratios
        .iter()
        .map(|(n, x)| format!("r({n}) = {x:.5}"))
        .collect();
    ensure(
        in_band && bad.is_empty() && res < 1e-12 && norm_err < 1e-12 && secs < 300.0,
        format!(
            "‖f‖₁ = {:.4}, ‖g‖_v {}, {}, fixture mismatches {}, {secs:.1} s (limit 300 s)",
            f.l1_norm(),
            norms.join(" "),
            rs.join(", "),
            bad.len()
        ),
    )
}

/// Criterion 10: c = 0.3: exponential a = 1.0 is N-stable, a = 1.5 grows ≥ 10x from 64 to 512.
fn c10() -> Outcome {
    let c = 0.3;
    let ladder = [64usize, 128, 256, 512];
    let r = grs_experiment(
        c,
        &[WeightFn::exponential(1.0), WeightFn::exponential(1.5)],
        &ladder,
    )
    .map_err(|e| e.to_string())?;
    let closed = |a: f64, n: usize| -> f64 {
        let denom = 1.0 - (-c).powi(n as i32);
        (0..n)
            .map(|k| c.powi(k as i32) / denom.abs() * (a * k.min(n - k) as f64).exp())
            .sum()
    };
    let mut worst_cf = 0.0f64;
    for row in &r.rows {
        let a = match row.weight {
            WeightFn::Exponential { a } => a,
            _ => unreachable!(),
        };
        worst_cf = worst_cf.max((row.norm - closed(a, row.n)).abs() / closed(a, row.n));
    }
    let norms = |a: f64| -> Vec<f64> {
        r.rows
            .iter()
            .filter(|x| x.weight == WeightFn::exponential(a))
            .map(|x| x.norm)
            .collect()
    };
    let (low, high) = (norms(1.0), norms(1.5));
    let spread = low
        .iter()
        .fold(0.0f64, |m, x| m.max((x / low[0] - 1.0).abs()));
    let growth = high[3] / high[0];
    ensure(
        spread <= 1e-2 && growth >= 10.0 && worst_cf <= 1e-10,
        format!(
            "|log c| = {:.3}; a = 1.0 norms vary by {spread:.2e} across N = 64..512 (limit 1e-2); a = 1.5 grows {growth:.3e}x (limit ≥ 10); closed-form error {worst_cf:.1e}",
            -c.ln()
        ),
    )
}

/// Block norms written out directly for Z_8 with blocks of two.
fn block_norms(a: &[Complex64], n: usize, b: usize) -> (f64, f64, f64) {
    let nb = n / b;
    let v = |gamma: usize| 1.0 + gamma.min(nb - gamma) as f64;
    let (mut ent, mut col, mut row) = (vec![0.0f64; nb], vec![0.0f64; nb], vec![0.0f64; nb]);
    for mu in 0..nb {
        for nu in 0..nb {
            let gamma = (mu + nb - nu) % nb;
            let (mut e, mut c, mut r) = (0.0f64, 0.0f64, 0.0f64);
            for t in mu * b..(mu + 1) * b {
                r = r.max((nu * b..(nu + 1) * b).map(|s| a[t * n + s].norm()).sum());
                for s in nu * b..(nu + 1) * b {
                    e = e.max(a[t * n + s].norm());
                }
            }
            for s in nu * b..(nu + 1) * b {
                c = c.max((mu * b..(mu + 1) * b).map(|t| a[t * n + s].norm()).sum());
            }
            ent[gamma] = ent[gamma].max(e);
            col[gamma] = col[gamma].max(c);
            row[gamma] = row[gamma].max(r);
        }
    }
    let sum = |x: &[f64]| x.iter().enumerate().map(|(g, y)| y * v(g)).sum::<f64>();
    (sum(&ent), sum(&col), sum(&row))
}

/// Criterion 11: ‖NT‖ ≤ ‖T‖_{1→1} ‖N‖ and ‖TN‖ ≤ ‖T‖_{∞→∞} ‖N‖ in the block norm.
fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = Domain::Group(GroupSpec::cyclic(8).unwrap());
    let part = Partition::new(d.clone(), &[2]).unwrap();
    let w = WeightFn::polynomial(1.0);
    let mut worst = 0.0f64;
    let mut lib_gap = 0.0f64;
    for i in 0..50 {
        let mut nm = rand_vec(64, &mut rng);
        let tm = rand_vec(64, &mut rng);
        if i % 2 == 0 {
            // banded N exercises the weighted diagonals
            for t in 0..8 {
                for s in 0..8 {
                    let k = (t + 8 - s) % 8;
                    if k.min(8 - k) > 1 {
                        nm[t * 8 + s] = ZERO;
                    }
                }
            }
        }
        let (n_norm, _, _) = block_norms(&nm, 8, 2);
        let (_, t_one, t_inf) = block_norms(&tm, 8, 2);
        let (nt, _, _) = block_norms(&matmul(&nm, &tm, 8), 8, 2);
        let (tn, _, _) = block_norms(&matmul(&tm, &nm, 8), 8, 2);
        worst = worst.max(nt / (t_one * n_norm)).max(tn / (t_inf * n_norm));
        let r = ideal_inequality_check(
            &OperatorMatrix::from_data(d.clone(), nm).unwrap(),
            &OperatorMatrix::from_data(d.clone(), tm).unwrap(),
            &part,
            &w,
        )
        .unwrap();
        lib_gap = lib_gap
            .max((r.nt_ratio - nt / (t_one * n_norm)).abs())
            .max((r.tn_ratio - tn / (t_inf * n_norm)).abs());
        worst = worst.max(r.nt_ratio).max(r.tn_ratio);
    }
    ensure(
        worst <= 1.0 + 1e-12 && lib_gap <= 1e-12,
        format!("50 pairs, Z_8, blocks of 2, worst ratio {worst:.4} (limit 1 + 1e-12), library vs oracle {lib_gap:.1e}"),
    )
}

/// Criterion 12: Zero-noise sweep on the fixture channel.
fn c12() -> Outcome {
    let model = make_channel(64, 2, DelayProfile::Exponential { a: 0.8 }, 0.5, 7)
        .map_err(|e| e.to_string())?;
    let ks = [1usize, 2, 4, 8, 16, 32];
    let sweep = equalization_sweep(&model, &ks, 11, 0.0).map_err(|e| e.to_string())?;
    let mse: Vec<f64> = sweep.rows.iter().map(|r| r.mse).collect();
    // recompute one point by hand
    let h = model.operator().unwrap();
    let inv = heislab::matrix::dense_inverse(&h).unwrap();
    let s = heislab::channel::qpsk_symbols(model.domain(), 11);
    let r = h.apply(&s).unwrap();
    let est = band_truncate(&inv, 4).apply(&r).unwrap();
    let by_hand = est
        .values()
        .iter()
        .zip(s.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        / 64.0;
    let agree = (by_hand - mse[2]).abs() <= 1e-12 * by_hand;
    let decreasing = mse.windows(2).all(|p| p[1] < p[0]);
    let list: Vec<String> = ks
        .iter()
        .zip(&mse)
        .map(|(k, m)| format!("{k}:{m:.3e}"))
        .collect();
    ensure(
        decreasing && mse[5] <= 1e-18 && agree,
        format!(
            "MSE by k {} (strictly decreasing: {decreasing}, MSE(32) limit 1e-18)",
            list.join(" ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("heisenberg group axioms", c01),
        ("algebra identities for ⋆ and ♮", c02),
        ("twisted convolution domination", c03),
        ("Weyl composition rule", c04),
        ("Weyl round trip", c05),
        ("Lp boundedness", c06),
        ("inverse-closedness signature", c07),
        ("Neumann vs dense inverse", c08),
        ("decay stabilization", c09),
        ("GRS boundary", c10),
        ("ideal inequalities", c11),
        ("channel sweep", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("acceptance {:02} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:02} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
