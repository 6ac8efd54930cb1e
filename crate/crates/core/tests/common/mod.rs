#![allow(dead_code)]

use std::sync::Arc;

use kmhecke::coxeter::RootDatum;
use kmhecke::hecke::Hecke;
use kmhecke::laurent::Character;
use kmhecke::scalars::{cyclotomic_field, Fe, Field};

pub fn f4() -> Field {
    cyclotomic_field(4).unwrap()
}

/// A = [[2,−2],[−4,2]], Y = ℤy₁⊕ℤy₂ with the δ-pairing, σ = σ′ = 2.
pub fn f1_datum() -> RootDatum {
    RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )
    .unwrap()
}

pub fn f1() -> Arc<Hecke> {
    Arc::new(Hecke::new(Arc::new(f1_datum()), f4()))
}

/// A = [[2,−2],[−6,2]] on the coroot lattice.
pub fn a2() -> Arc<Hecke> {
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-6, 2]],
        vec![vec![2, -6], vec![-2, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )
    .unwrap();
    Arc::new(Hecke::new(Arc::new(rd), f4()))
}

/// The rank-3 matrix with all off-diagonal entries −2, on the coroot lattice.
pub fn a3_datum() -> RootDatum {
    let a = vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]];
    let pairing: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| a[j][i]).collect()).collect();
    let id = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
    RootDatum::new(a, pairing, id, vec![Fe::int(2); 3], vec![Fe::int(2); 3]).unwrap()
}

pub fn chr(vals: Vec<Fe>) -> Character {
    Character::new(vals).unwrap()
}

pub fn tau_reg() -> Character {
    chr(vec![Fe::int(2), Fe::int(3)])
}

pub fn tau_b3() -> Character {
    let z = f4().zeta();
    chr(vec![z.clone(), z])
}

/// τ(α₁∨) = −ζ₄, τ(α₂∨) = ζ₄ on the coroot lattice of [`a2`].
pub fn tau_z() -> Character {
    let z = f4().zeta();
    chr(vec![-z.clone(), z])
}
