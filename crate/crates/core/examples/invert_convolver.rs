//! Dense and Neumann inverses of αδ + f for each convolution kind.

use heislab::convolution::ConvolutionKind;
use heislab::inversion::{invert_convolver, neumann_inverse, weyl_inverse_closure, Pattern};
use heislab::weyl::SpreadingFunction;
use heislab::{Domain, GroupFunction, GroupSpec, HeisSpec, Result, WeightFn};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let w = WeightFn::polynomial(1.0);

    let f = Pattern::Shift { c: 0.3 }.window(16)?;
    let r = invert_convolver(one, &f, ConvolutionKind::Plain, &w)?;
    let first: Vec<String> = r.theta.values()[..4]
        .iter()
        .map(|v| format!("{:.5}", v.re))
        .collect();
    println!("(δ + 0.3δ_1)^-1 on Z_16 starts {}", first.join(", "));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (kind, d) in [
        (
            ConvolutionKind::Twisted,
            Domain::PhaseSpace(GroupSpec::cyclic(4)?),
        ),
        (
            ConvolutionKind::Heisenberg,
            Domain::Heisenberg(HeisSpec::over(&[3])?),
        ),
    ] {
        let f = GroupFunction::random(d, &mut rng);
        let f = f.scale(Complex64::new(0.5 / f.l1_norm(), 0.0));
        let r = invert_convolver(one, &f, kind, &w)?;
        let n = neumann_inverse(one, &f, kind, 1e-13, 500)?;
        println!(
            "{kind:?}: ‖f‖_v = {:.3}, ‖θ‖_v = {:.3}, circulant defect {:.1e}, Neumann gap {:.1e} after {} terms",
            r.input_norm,
            r.output_norm,
            r.circulant_defect_rel,
            n.theta.max_abs_diff(&r.theta)?,
            n.terms
        );
    }

    let s = SpreadingFunction::random(GroupSpec::cyclic(8)?, &mut rng);
    let s = s.lin_comb(
        Complex64::new(0.5 / s.l1_norm(), 0.0),
        &s,
        Complex64::new(0.0, 0.0),
    )?;
    let c = weyl_inverse_closure(&s, &w)?;
    println!(
        "(I + L_σ)^-1 = I + L_τ: ‖τ̂‖_v = {:.4}, residual {:.1e}",
        c.tau_weighted_l1, c.left_residual
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
