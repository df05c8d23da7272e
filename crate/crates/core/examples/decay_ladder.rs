//! Weighted norm of the inverse kernel as the group grows.

use heislab::convolution::ConvolutionKind;
use heislab::inversion::{decay_preservation_experiment, Pattern};
use heislab::{Result, WeightFn};
use num_complex::Complex64;

pub fn run_example() -> Result<()> {
    let pattern = Pattern::PowerLaw {
        amplitude: 0.5,
        s: 3.0,
        alternating: true,
    };
    let one = Complex64::new(1.0, 0.0);
    for w in [WeightFn::polynomial(1.0), WeightFn::exponential(2.0)] {
        let r = decay_preservation_experiment(
            pattern,
            one,
            &w,
            &[64, 128, 256, 512],
            ConvolutionKind::Plain,
        )?;
        println!("{w:?}");
        print!("{}", r.to_csv());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
