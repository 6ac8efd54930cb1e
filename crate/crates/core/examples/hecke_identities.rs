//! The quadratic relation, intertwiners F_w and their products, and the
//! T-expansion of F_w.

use std::sync::Arc;

use kmhecke::coxeter::RootDatum;
use kmhecke::hecke::Hecke;
use kmhecke::laurent::RatFn;
use kmhecke::scalars::{cyclotomic_field, Fe};

fn main() -> kmhecke::Result<()> {
    let rd = RootDatum::new(
        vec![vec![2, -2], vec![-4, 2]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, -2], vec![-4, 2]],
        vec![Fe::int(2); 2],
        vec![Fe::int(2); 2],
    )?;
    let h = Hecke::new(Arc::new(rd), cyclotomic_field(4)?);
    let rd = h.root_datum();

    let hs = h.h_simple(0);
    let sg = rd.sigma(0).clone();
    let rel = h.mul(&hs.sub(&h.constant(sg.clone())), &hs.add(&h.constant(sg.inv()?)));
    println!("(H_s1 - sigma)(H_s1 + 1/sigma) = 0: {}", rel.is_zero());

    println!("F_s1 F_s1 = {}", h.f_square(0)?);
    let w = rd.from_word(&[0, 1, 0]);
    println!("F_{w} intertwines Z^(1,0): {}", h.intertwine_check(&RatFn::monomial(&[1, 0]), &w));
    for (v, c) in h.f_in_t(&w)? {
        println!("  F_{w} has T_{v} coefficient {c}");
    }
    let p = h.f_product_scalar(&rd.from_word(&[0]), &rd.from_word(&[0, 1]))?;
    println!("F_s1 F_(s1.s2) = F_s2 * ({p})");
    Ok(())
}
