//! Amalgam norms, envelopes, block norms and banded truncation.

use heislab::norms::{
    amalgam_norm, band_truncate, envelope, ideal_inequality_check, n1v_norm, ninf_block_norm,
    Partition,
};
use heislab::{Domain, GroupFunction, GroupSpec, OperatorMatrix, Result, WeightFn};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<()> {
    let d = Domain::Group(GroupSpec::cyclic(32)?);
    let w = WeightFn::polynomial(1.0);
    let part = Partition::new(d.clone(), &[4])?;

    let f = GroupFunction::delta_at(d.clone(), 5);
    println!(
        "W(L¹, ℓ¹_v) norm of δ_5, blocks of 4: {}",
        amalgam_norm(&f, 1.0, 1.0, &w, &part)?
    );

    let a = OperatorMatrix::from_fn(d.clone(), |t, s| {
        let u = (t + 32 - s) % 32;
        let dist = u.min(32 - u) as f64;
        Complex64::from_polar((-0.5 * dist).exp(), 0.1 * dist)
    });
    let prof = envelope(&a);
    let fit = prof.best().expect("enough points to fit");
    println!(
        "envelope fit: {:?} rate {:.4}, residual {:.1e}",
        fit.model, fit.rate, fit.residual
    );
    println!(
        "N¹_v = {:.4}, N^∞_v = {:.4}",
        n1v_norm(&a, &w),
        ninf_block_norm(&a, &part, &w)?
    );
    for k in [1, 4, 8] {
        println!(
            "k = {k}: ‖A - A_k‖_max = {:.3e}",
            a.max_abs_diff(&band_truncate(&a, k))?
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d8 = Domain::Group(GroupSpec::cyclic(8)?);
    let p8 = Partition::new(d8.clone(), &[2])?;
    let rand_op = |rng: &mut ChaCha8Rng| {
        let cols: Vec<GroupFunction> = (0..8)
            .map(|_| GroupFunction::random(d8.clone(), rng))
            .collect();
        OperatorMatrix::from_fn(d8.clone(), |t, s| cols[s][t])
    };
    let (n, t) = (rand_op(&mut rng), rand_op(&mut rng));
    let r = ideal_inequality_check(&n, &t, &p8, &w)?;
    println!("ideal ratios: NT {:.4}, TN {:.4}", r.nt_ratio, r.tn_ratio);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
