//! Banded equalization of a doubly dispersive channel.

use heislab::channel::{equalization_sweep, make_channel, DelayProfile};
use heislab::Result;

pub fn run_example() -> Result<()> {
    let model = make_channel(64, 2, DelayProfile::Exponential { a: 0.8 }, 0.5, 7)?;
    println!("‖σ̂‖₁ = {:.12}", model.spreading.l1_norm());
    let sweep = equalization_sweep(&model, &[0, 1, 2, 4, 8, 16, 32], 11, 0.0)?;
    print!("{}", sweep.to_csv());
    println!(
        "inverse envelope: {:?} rate {:.4}",
        sweep.inverse_decay.model,
        sweep.inverse_decay.rate.unwrap_or(f64::NAN)
    );
    let noisy = equalization_sweep(&model, &[2, 8, 32], 11, 1e-3)?;
    print!("noise 1e-3\n{}", noisy.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
