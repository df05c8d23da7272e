//! Weyl operators from spreading functions, and L_σ L_τ = L_{σ̂♮τ̂}.

use heislab::weyl::{
    compose_check, lp_bound_check, spreading_of, weyl_operator, SpreadingFunction,
};
use heislab::{Domain, GroupFunction, GroupSpec, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [8, 16, 64] {
        let g = GroupSpec::cyclic(n)?;
        let s = SpreadingFunction::random(g.clone(), &mut rng);
        let t = SpreadingFunction::random(g.clone(), &mut rng);
        let r = compose_check(&s, &t)?;
        let back = spreading_of(&weyl_operator(&s)?)?.max_abs_diff(&s)?;
        println!(
            "N = {n}: composition defect {:.2e} (tol {:.2e}), round trip {back:.2e}",
            r.defect, r.tolerance
        );
        let f = GroupFunction::random(Domain::Group(g), &mut rng);
        for b in lp_bound_check(&s, &f)? {
            println!("  p = {}: ‖L_σ f‖ = {:.3}  ≤  {:.3}", b.p, b.lhs, b.rhs);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
