//! Irreducibility verdicts for the standard characters, with reasons.

use std::sync::Arc;

use kmhecke::coxeter::RootDatum;
use kmhecke::criteria::Criteria;
use kmhecke::hecke::Hecke;
use kmhecke::laurent::Character;
use kmhecke::scalars::{cyclotomic_field, Fe};

fn main() -> kmhecke::Result<()> {
    let field = cyclotomic_field(4)?;
    let z = field.zeta();
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )?;
    let crit = Criteria::new(Arc::new(Hecke::new(Arc::new(rd), field)));
    let chars = [
        ("trivial", vec![Fe::one(), Fe::one()]),
        ("regular", vec![Fe::int(2), Fe::int(3)]),
        ("(z, z)", vec![z.clone(), z]),
        ("at q", vec![Fe::int(2), Fe::one()]),
    ];
    for (name, vals) in chars {
        let tau = Character::new(vals)?;
        let v = crit.verdict(&tau, 6)?;
        println!("{name}: {}", v.status);
        for r in &v.reasons {
            println!("  [{}] {}", r.citation, r.criterion);
        }
    }
    Ok(())
}
