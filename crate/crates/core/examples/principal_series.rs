//! Truncated principal series: ξ_w, generalized weight spaces and the
//! intertwining map Υ.

use std::sync::Arc;

use kmhecke::coxeter::RootDatum;
use kmhecke::hecke::Hecke;
use kmhecke::laurent::Character;
use kmhecke::scalars::{cyclotomic_field, Fe};
use kmhecke::series::PrincipalSeries;

fn main() -> kmhecke::Result<()> {
    let field = cyclotomic_field(4)?;
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )?;
    let h = Arc::new(Hecke::new(Arc::new(rd), field.clone()));
    let rd = h.root_datum();

    let tau = Character::new(vec![Fe::int(2), Fe::int(3)])?;
    let ps = PrincipalSeries::new(h.clone(), tau.clone(), 4);
    for w in rd.bruhat_ball(2) {
        println!("xi_{w} = {}", ps.xi(&w)?);
    }

    // a non-regular character: the weight of 1 has a larger generalized space
    let z = field.zeta();
    let tau = Character::new(vec![z.clone(), z])?;
    let ps = PrincipalSeries::new(h.clone(), tau.clone(), 4);
    for w in rd.bruhat_ball(4) {
        let gen = ps.generalized_weight_space(&tau, &w)?.len();
        let honest = ps.weight_space(&tau, &w)?.len();
        println!("below {w}: generalized dim {gen}, weight dim {honest}");
    }
    Ok(())
}
