//! The trivial and Steinberg representations and the quotient line.

use std::sync::Arc;

use kmhecke::coxeter::RootDatum;
use kmhecke::criteria::one_dim_reps;
use kmhecke::hecke::Hecke;
use kmhecke::scalars::{cyclotomic_field, Fe};

fn main() -> kmhecke::Result<()> {
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )?;
    let h = Arc::new(Hecke::new(Arc::new(rd), cyclotomic_field(4)?));
    let report = one_dim_reps(&h, 3)?;
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
    println!("all relations hold: {}", report.all_hold());
    Ok(())
}
