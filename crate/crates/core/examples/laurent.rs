//! Laurent polynomials, rational functions, the Weyl action and evaluation
//! at a character.

use kmhecke::coxeter::RootDatum;
use kmhecke::laurent::{Character, Laurent, RatFn};
use kmhecke::scalars::Fe;

fn main() -> kmhecke::Result<()> {
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )?;
    let theta = Laurent::monomial(&[1, 0]).add(&Laurent::term(&[0, -1], Fe::int(3)));
    let s1 = rd.simple_reflection(0);
    println!("theta = {theta}");
    println!("theta^s1 = {}", theta.weyl_act(&s1));

    // (1 − Z^{2y₁})/(1 − Z^{y₁}) reduces to 1 + Z^{y₁}
    let one = Laurent::one(2);
    let r = RatFn::reduce(one.sub(&Laurent::monomial(&[2, 0])), one.sub(&Laurent::monomial(&[1, 0])))?;
    println!("reduced: {r}");

    let tau = Character::new(vec![Fe::int(2), Fe::int(3)])?;
    println!("theta(tau) = {}", theta.evaluate(tau.values()));
    println!("(s1.tau) = {}", tau.act(&rd, &s1));
    Ok(())
}
