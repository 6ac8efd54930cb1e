//! Canonical words, lengths, inversion sets and Bruhat intervals in a
//! rank-3 hyperbolic Weyl group.

use kmhecke::coxeter::RootDatum;
use kmhecke::scalars::Fe;

fn main() -> kmhecke::Result<()> {
    let a = vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]];
    let pairing: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| a[j][i]).collect()).collect();
    let id: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
    let rd = RootDatum::new(a, pairing, id, vec![Fe::int(2); 3], vec![Fe::int(2); 3])?;

    for n in 0..=4 {
        println!("elements of length {n}: {}", rd.shell(n).len());
    }
    let word = [0, 1, 1, 2, 1, 0, 2, 0];
    let w = rd.from_word(&word);
    println!("{} reduces to {w} (length {})", kmhecke::coxeter::word_string(&word), w.len());
    println!("reduced words: {}", rd.reduced_words(&w).len());
    for b in rd.inversion_set(&w) {
        println!("  inversion {b}");
    }
    let below = rd.lower_interval(&w);
    println!("[1, {w}] has {} elements", below.len());
    let v = rd.from_word(&[0, 2]);
    println!("{v} <= {w}: {}", rd.bruhat_leq(&v, &w));
    Ok(())
}
