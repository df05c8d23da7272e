//! Plain convolution on abelian domains, twisted convolution `♮` on `G x Ĝ`,
//! and convolution `⋆` on the Heisenberg group.
//!
//! The twist of `♮` is the exact phase cocycle of the time-frequency shifts
//! `ρ(x, ω) = e^{-πi x·ω} T_{-x} M_ω` (see [`GroupSpec::operator_cocycle`]),
//! so `L_σ L_τ = L_{σ̂ ♮ τ̂}` holds exactly on the finite group. When no
//! coordinate sum wraps it is `e^{πi(x·ω₀ - ω·x₀)}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::group::{root_table, GroupSpec, HeisSpec};
use crate::matrix::OperatorMatrix;
use crate::norms::{weighted_l1, weighted_sup};
use crate::weights::{check_admissible, Verdict, WeightFn};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvolutionKind {
    /// Abelian convolution on `G` (or on `G x Ĝ` viewed as an abelian group).
    Plain,
    /// `♮` on `G x Ĝ`.
    Twisted,
    /// `⋆` on the Heisenberg group.
    Heisenberg,
}

impl ConvolutionKind {
    /// Whether this kind acts on functions over `domain`.
    pub fn accepts(&self, domain: &Domain) -> bool {
        matches!(
            (self, domain),
            (ConvolutionKind::Plain, Domain::Group(_))
                | (ConvolutionKind::Plain, Domain::PhaseSpace(_))
                | (ConvolutionKind::Twisted, Domain::PhaseSpace(_))
                | (ConvolutionKind::Heisenberg, Domain::Heisenberg(_))
        )
    }

    pub fn check(&self, domain: &Domain) -> Result<()> {
        if self.accepts(domain) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{self:?} convolution does not act on a {} domain",
                domain.kind_name()
            )))
        }
    }
}

fn pair_check(a: &GroupFunction, b: &GroupFunction, kind: ConvolutionKind) -> Result<()> {
    a.ensure_same_domain(b)?;
    kind.check(a.domain())
}

/// Index helper for the abelian group underlying `Group` / `PhaseSpace`.
fn abelian_sub(domain: &Domain) -> impl Fn(usize, usize) -> usize + Sync + '_ {
    move |t, s| domain.kernel_offset(t, s)
}

/// `(f * g)(t) = Σ_s f(s) g(t - s)` under counting measure.
pub fn plain_convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    pair_check(f, g, ConvolutionKind::Plain)?;
    let domain = f.domain();
    let sub = abelian_sub(domain);
    let (fv, gv) = (f.values(), g.values());
    let n = domain.order();
    let values = (0..n)
        .into_par_iter()
        .map(|t| {
            let mut acc = ZERO;
            for (s, &a) in fv.iter().enumerate() {
                if a != ZERO {
                    acc += a * gv[sub(t, s)];
                }
            }
            acc
        })
        .collect();
    GroupFunction::new(domain.clone(), values)
}

/// Precomputed phase data for `m`-twisted convolutions on `G x Ĝ`.
struct TwistTables {
    g: usize,
    modulus: usize,
    /// `q(x, ω)` in `Z_M`, indexed `x·|G| + ω`.
    half: Vec<usize>,
    /// `p(ω, x)` in `Z_L`, indexed `ω·|G| + x`.
    pairing: Vec<usize>,
    add: Vec<usize>,
    sub: Vec<usize>,
    /// Bit `i` set when coordinate `i` of `b` exceeds that of `a`, indexed `a·|G| + b`.
    borrow: Vec<u64>,
    /// Bit `i` set when coordinate `i` is odd.
    odd: Vec<u64>,
    /// Bit `i` set when `N_i` is odd.
    odd_moduli: u64,
}

impl TwistTables {
    fn new(spec: &GroupSpec) -> Self {
        let g = spec.order();
        let mut half = vec![0; g * g];
        let mut pairing = vec![0; g * g];
        let mut add = vec![0; g * g];
        let mut sub = vec![0; g * g];
        let moduli = spec.moduli();
        assert!(moduli.len() <= 64, "at most 64 coordinates");
        let digits: Vec<Vec<usize>> = (0..g)
            .map(|a| {
                let mut d = vec![0; moduli.len()];
                spec.decode_into(a, &mut d);
                d
            })
            .collect();
        let mask = |f: &dyn Fn(usize) -> bool| {
            (0..moduli.len())
                .filter(|&i| f(i))
                .fold(0u64, |m, i| m | 1 << i)
        };
        let mut borrow = vec![0u64; g * g];
        for a in 0..g {
            for b in 0..g {
                borrow[a * g + b] = mask(&|i| digits[b][i] > digits[a][i]);
            }
        }
        let odd = (0..g).map(|a| mask(&|i| digits[a][i] % 2 == 1)).collect();
        let odd_moduli = mask(&|i| moduli[i] % 2 == 1);
        for a in 0..g {
            for b in 0..g {
                half[a * g + b] = spec.half_product_index(a, b);
                pairing[a * g + b] = spec.pairing_units_index(b, a);
                add[a * g + b] = spec.add_index(a, b);
                sub[a * g + b] = spec.sub_index(a, b);
            }
        }
        TwistTables {
            g,
            modulus: spec.phase_modulus(),
            half,
            pairing,
            add,
            sub,
            borrow,
            odd,
            odd_moduli,
        }
    }

    /// Operator cocycle `c((x,ω), (x',ω'))` in `Z_M`.
    #[inline]
    fn cocycle(&self, x: usize, w: usize, x2: usize, w2: usize) -> usize {
        let g = self.g;
        let m = self.modulus;
        let sx = self.add[x * g + x2];
        let sw = self.add[w * g + w2];
        (self.half[sx * g + sw] + 3 * m
            - self.half[x * g + w]
            - self.half[x2 * g + w2]
            - (2 * self.pairing[w * g + x2]) % m)
            % m
    }
}

/// `Σ_z F(z) G(z₀ - z) e^{2πi·twist·c(z, z₀-z)/M}` on `G x Ĝ` (counting measure).
///
/// With representatives in `[0, N_i)` the cocycle splits as
/// `c = q(x, ω') - q(x', ω) + L·(δ·x₀ + ε·ω₀ + ε·δ·N)` where `ε`, `δ` flag the
/// coordinates on which `x + x'` and `ω + ω'` wrap. For fixed `x₀, x` the sum
/// over `ω` is then a product of one-sided phases and a sign.
fn twisted_kernel(
    spec: &GroupSpec,
    tables: &TwistTables,
    f: &[Complex64],
    h: &[Complex64],
    twist: usize,
) -> Vec<Complex64> {
    let g = spec.order();
    let m = tables.modulus;
    let roots = root_table(m);
    let signed = twist % 2 == 1;
    let mut out = vec![ZERO; g * g];
    let mut a = vec![ZERO; g];
    let mut b = vec![ZERO; g];
    for x in 0..g {
        let row = &f[x * g..(x + 1) * g];
        if row.iter().all(|v| *v == ZERO) {
            continue;
        }
        for x0 in 0..g {
            let x2 = tables.sub[x0 * g + x];
            let col = &h[x2 * g..(x2 + 1) * g];
            if col.iter().all(|v| *v == ZERO) {
                continue;
            }
            for w in 0..g {
                a[w] = row[w] * roots[(m - twist * tables.half[x2 * g + w] % m) % m];
                b[w] = col[w] * roots[twist * tables.half[x * g + w] % m];
            }
            let eps = tables.borrow[x0 * g + x];
            let bits = tables.odd[x0] ^ (eps & tables.odd_moduli);
            let target = &mut out[x0 * g..(x0 + 1) * g];
            for (w0, t) in target.iter_mut().enumerate() {
                let mut acc = ZERO;
                for w in 0..g {
                    let mut term = a[w] * b[tables.sub[w0 * g + w]];
                    if signed && (tables.borrow[w0 * g + w] & bits).count_ones() % 2 == 1 {
                        term = -term;
                    }
                    acc += term;
                }
                if signed && (eps & tables.odd[w0]).count_ones() % 2 == 1 {
                    acc = -acc;
                }
                *t += acc;
            }
        }
    }
    out
}

/// Twisted convolution `F ♮ G` on `G x Ĝ`.
pub fn twisted_convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    pair_check(f, g, ConvolutionKind::Twisted)?;
    let spec = f.domain().base();
    let tables = TwistTables::new(spec);
    let values = twisted_kernel(spec, &tables, f.values(), g.values(), 1);
    GroupFunction::new(f.domain().clone(), values)
}

/// Reference Heisenberg convolution
/// `(F₁ ⋆ F₂)(h₀) = (1/M) Σ_h F₁(h) F₂(h⁻¹ h₀)`.
pub fn heis_convolve(f1: &GroupFunction, f2: &GroupFunction) -> Result<GroupFunction> {
    pair_check(f1, f2, ConvolutionKind::Heisenberg)?;
    let Domain::Heisenberg(spec) = f1.domain() else {
        unreachable!()
    };
    let n = spec.order();
    let inv: Vec<usize> = (0..n).map(|i| spec.inv_index(i)).collect();
    let measure = f1.domain().point_measure();
    let (a, b) = (f1.values(), f2.values());
    let nz: Vec<usize> = (0..n).filter(|&i| a[i] != ZERO).collect();
    let values = (0..n)
        .into_par_iter()
        .map(|h0| {
            let mut acc = ZERO;
            for &h in &nz {
                acc += a[h] * b[spec.mul_index(inv[h], h0)];
            }
            acc * measure
        })
        .collect();
    GroupFunction::new(f1.domain().clone(), values)
}

/// Phase-Fourier components `F̂_m(x, ω) = (1/M) Σ_k F(x, ω, k) e^{-2πimk/M}`,
/// returned as `M` arrays over `G x Ĝ`.
pub fn phase_components(f: &GroupFunction) -> Result<Vec<Vec<Complex64>>> {
    let Domain::Heisenberg(spec) = f.domain() else {
        return Err(Error::DomainMismatch(
            "phase components need a Heisenberg function".into(),
        ));
    };
    let m = spec.phase_modulus();
    let cells = spec.base().order().pow(2);
    let roots = root_table(m);
    let v = f.values();
    Ok((0..m)
        .map(|mode| {
            (0..cells)
                .map(|z| {
                    let mut acc = ZERO;
                    for k in 0..m {
                        acc += v[z * m + k] * roots[(m - (mode * k) % m) % m];
                    }
                    acc / m as f64
                })
                .collect()
        })
        .collect())
}

fn from_phase_components(spec: &HeisSpec, comps: &[Vec<Complex64>]) -> Vec<Complex64> {
    let m = spec.phase_modulus();
    let cells = spec.base().order().pow(2);
    let roots = root_table(m);
    let mut out = vec![ZERO; cells * m];
    for z in 0..cells {
        for k in 0..m {
            let mut acc = ZERO;
            for (mode, comp) in comps.iter().enumerate() {
                acc += comp[z] * roots[(mode * k) % m];
            }
            out[z * m + k] = acc;
        }
    }
    out
}

/// Heisenberg convolution through the phase-Fourier decomposition: component
/// `m` of the output is the `m`-twisted convolution of the `m`-th components.
/// Cost `M·|G x Ĝ|²` instead of `|ℍ|²`.
pub fn heis_convolve_fast(f1: &GroupFunction, f2: &GroupFunction) -> Result<GroupFunction> {
    pair_check(f1, f2, ConvolutionKind::Heisenberg)?;
    let Domain::Heisenberg(spec) = f1.domain() else {
        unreachable!()
    };
    let base = spec.base();
    let tables = TwistTables::new(base);
    let a = phase_components(f1)?;
    let b = phase_components(f2)?;
    // law phase is -c, and e^{-2πi m (-c)/M} = e^{2πi m c/M}
    let comps: Vec<Vec<Complex64>> = (0..spec.phase_modulus())
        .map(|mode| twisted_kernel(base, &tables, &a[mode], &b[mode], mode))
        .collect();
    GroupFunction::new(f1.domain().clone(), from_phase_components(spec, &comps))
}

/// Dispatches on `kind`.
pub fn convolve(
    kind: ConvolutionKind,
    f: &GroupFunction,
    g: &GroupFunction,
) -> Result<GroupFunction> {
    match kind {
        ConvolutionKind::Plain => plain_convolve(f, g),
        ConvolutionKind::Twisted => twisted_convolve(f, g),
        ConvolutionKind::Heisenberg => heis_convolve_fast(f, g),
    }
}

/// Matrix of `φ ↦ F ∗ φ` for the given kind.
pub fn convolution_matrix(kind: ConvolutionKind, f: &GroupFunction) -> Result<OperatorMatrix> {
    kind.check(f.domain())?;
    let domain = f.domain().clone();
    let v = f.values();
    match kind {
        ConvolutionKind::Plain => {
            let d = domain.clone();
            Ok(OperatorMatrix::from_fn(domain, move |t, s| {
                v[d.kernel_offset(t, s)]
            }))
        }
        ConvolutionKind::Twisted => {
            let spec = domain.base().clone();
            let tables = TwistTables::new(&spec);
            let g = spec.order();
            let roots = root_table(tables.modulus);
            Ok(OperatorMatrix::from_fn(domain, move |t, s| {
                let (x0, w0) = (t / g, t % g);
                let (xs, ws) = (s / g, s % g);
                let dx = tables.sub[x0 * g + xs];
                let dw = tables.sub[w0 * g + ws];
                let a = v[dx * g + dw];
                if a == ZERO {
                    return ZERO;
                }
                a * roots[tables.cocycle(dx, dw, xs, ws)]
            }))
        }
        ConvolutionKind::Heisenberg => {
            let Domain::Heisenberg(spec) = &domain else {
                unreachable!()
            };
            let spec = spec.clone();
            let measure = domain.point_measure();
            Ok(OperatorMatrix::from_fn(domain, move |t, s| {
                v[spec.mul_index(t, spec.inv_index(s))] * measure
            }))
        }
    }
}

/// Both sides of the weighted Young inequalities for one pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubmultReport {
    pub kind: ConvolutionKind,
    pub weight: WeightFn,
    /// `‖F₁ ∗ F₂‖_{1,v}`.
    pub l1_lhs: f64,
    /// `‖F₁‖_{1,v} ‖F₂‖_{1,v}`.
    pub l1_rhs: f64,
    pub l1_ratio: f64,
    /// `‖F₁ ∗ F₂‖_{∞,v}`.
    pub sup_lhs: f64,
    /// `‖F₁‖_{1,v} ‖F₂‖_{∞,v}`.
    pub sup_rhs: f64,
    pub sup_ratio: f64,
    pub holds: bool,
    pub warning: Option<String>,
}

/// Checks `‖F₁∗F₂‖_{1,v} ≤ ‖F₁‖_{1,v}‖F₂‖_{1,v}` and
/// `‖F₁∗F₂‖_{∞,v} ≤ ‖F₁‖_{1,v}‖F₂‖_{∞,v}` with slack `1e-12`.
pub fn weighted_l1_submult_check(
    f1: &GroupFunction,
    f2: &GroupFunction,
    w: &WeightFn,
    kind: ConvolutionKind,
) -> Result<SubmultReport> {
    pair_check(f1, f2, kind)?;
    let report = check_admissible(w, f1.domain().base(), 64)?;
    let warning = (report.verdict != Verdict::Admissible)
        .then(|| format!("weight {w:?} is not admissible; inequality is not guaranteed"));
    let prod = convolve(kind, f1, f2)?;
    let ratio = |lhs: f64, rhs: f64| {
        if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    };
    let l1_lhs = weighted_l1(&prod, w);
    let l1_rhs = weighted_l1(f1, w) * weighted_l1(f2, w);
    let sup_lhs = weighted_sup(&prod, w);
    let sup_rhs = weighted_l1(f1, w) * weighted_sup(f2, w);
    let l1_ratio = ratio(l1_lhs, l1_rhs);
    let sup_ratio = ratio(sup_lhs, sup_rhs);
    Ok(SubmultReport {
        kind,
        weight: *w,
        l1_lhs,
        l1_rhs,
        l1_ratio,
        sup_lhs,
        sup_rhs,
        sup_ratio,
        holds: l1_ratio <= 1.0 + 1e-12 && sup_ratio <= 1.0 + 1e-12,
        warning,
    })
}
