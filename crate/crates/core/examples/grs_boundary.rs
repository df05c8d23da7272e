//! Exponential weights faster than the inverse's decay blow up with N.

use heislab::inversion::grs_experiment;
use heislab::{Result, WeightFn};

pub fn run_example() -> Result<()> {
    let weights = [
        WeightFn::polynomial(2.0),
        WeightFn::exponential(1.0),
        WeightFn::exponential(1.5),
    ];
    let r = grs_experiment(0.3, &weights, &[64, 128, 256, 512])?;
    println!("inverse decays at rate |log c| = {:.4}", r.inverse_rate);
    for row in &r.rows {
        println!(
            "{:?} N = {}: {:.6e} (closed form {:.6e})",
            row.weight, row.n, row.norm, row.closed_form
        );
    }
    for s in &r.series {
        println!("{:?}: growth 64 → 512 = {:.3e}", s.weight, s.growth);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
