//! Group law, inverses and the translation/modulation commutation phase.

use heislab::function::{modulate, translate};
use heislab::group::{heis_inv, heis_mul, make_group, pair};
use heislab::{Domain, GroupFunction, HeisElement, HeisSpec, Result};

pub fn run_example() -> Result<()> {
    let g = make_group(&[2, 3])?;
    println!(
        "G = Z_2 x Z_3, |G| = {}, <(1,1),(1,1)> = {:.4}",
        g.order(),
        pair(&[1, 1], &[1, 1], &g)?
    );

    let h = HeisSpec::over(&[4])?;
    let a = HeisElement::new(vec![1], vec![1], 0);
    let b = HeisElement::new(vec![1], vec![0], 0);
    println!("phase modulus M = {}", h.phase_modulus());
    println!("(1,1,0)(1,0,0) = {:?}", heis_mul(&a, &b, &h)?);
    println!("(1,0,0)(1,1,0) = {:?}", heis_mul(&b, &a, &h)?);
    let c = HeisElement::new(vec![1], vec![2], 3);
    let ci = heis_inv(&c, &h)?;
    println!(
        "inv(1,2,3) = {ci:?}, product = {:?}",
        heis_mul(&c, &ci, &h)?
    );

    let d = Domain::Group(make_group(&[4])?);
    let f = GroupFunction::from_fn(d, |i| num_complex::Complex64::new(i as f64 + 1.0, 0.0));
    let tm = translate(&modulate(&f, &[1])?, &[1])?;
    let mt = modulate(&translate(&f, &[1])?, &[1])?;
    println!("M_1 T_1 f = {:.4} · T_1 M_1 f", mt[2] / tm[2]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
