//! Admissibility reports for the standard weight families.

use heislab::weights::check_admissible;
use heislab::{GroupSpec, Result, WeightFn};

pub fn run_example() -> Result<()> {
    let g = GroupSpec::new(&[64])?;
    for w in [
        WeightFn::Constant,
        WeightFn::polynomial(2.0),
        WeightFn::subexponential(1.0, 0.5),
        WeightFn::exponential(1.0),
    ] {
        let r = check_admissible(&w, &g, 256)?;
        let last = r.grs_rates["e0"].last().copied().unwrap_or((0, f64::NAN));
        println!(
            "{w:?}: {:?}, v(n)^(1/n) at n = {} is {:.4}",
            r.verdict, last.0, last.1
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
