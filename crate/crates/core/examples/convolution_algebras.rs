//! Plain, twisted and Heisenberg convolution, and the weighted Young inequalities.

use heislab::convolution::{convolve, weighted_l1_submult_check, ConvolutionKind};
use heislab::{Domain, GroupFunction, GroupSpec, HeisSpec, Result, WeightFn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ps = Domain::PhaseSpace(GroupSpec::cyclic(8)?);
    let f = GroupFunction::random(ps.clone(), &mut rng);
    let g = GroupFunction::random(ps, &mut rng);

    let tw = convolve(ConvolutionKind::Twisted, &f, &g)?;
    let rev = convolve(ConvolutionKind::Twisted, &g, &f)?;
    let dom = convolve(ConvolutionKind::Plain, &f.abs(), &g.abs())?;
    let slack = tw
        .values()
        .iter()
        .zip(dom.values())
        .map(|(a, b)| b.re - a.norm())
        .fold(f64::INFINITY, f64::min);
    println!("F♮G - G♮F: max {:.3e}", tw.max_abs_diff(&rev)?);
    println!("min (|F|*|G| - |F♮G|) = {slack:.3e}");

    let h = Domain::Heisenberg(HeisSpec::over(&[4])?);
    let a = GroupFunction::random(h.clone(), &mut rng);
    let b = GroupFunction::random(h, &mut rng);
    for w in [
        WeightFn::polynomial(1.0),
        WeightFn::subexponential(1.0, 0.5),
    ] {
        let r = weighted_l1_submult_check(&a, &b, &w, ConvolutionKind::Heisenberg)?;
        println!(
            "{w:?}: ‖F⋆G‖/‖F‖‖G‖ = {:.4}, sup ratio = {:.4}",
            r.l1_ratio, r.sup_ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
