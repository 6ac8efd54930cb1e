//! The indicator of a non-spherical face of the Tits cone is multiplicative
//! on lattice points of the cone.

use kmhecke::coxeter::RootDatum;
use kmhecke::criteria::degenerate_character_demo;
use kmhecke::scalars::Fe;

fn main() -> kmhecke::Result<()> {
    let a = vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]];
    let pairing: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| a[j][i]).collect()).collect();
    let id: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
    let rd = RootDatum::new(a, pairing, id, vec![Fe::int(2); 3], vec![Fe::int(2); 3])?;
    let report = degenerate_character_demo(&rd, &[0, 1], 200, 4, 7)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}
