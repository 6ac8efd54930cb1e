//! Exact arithmetic in cyclotomic fields.

use kmhecke::scalars::cyclotomic_field;

fn main() -> kmhecke::Result<()> {
    let field = cyclotomic_field(12)?;
    let z = field.zeta();
    println!("Q(z_12) has degree {}", field.degree());
    println!("z^4 + z^-4 = {}", &z.pow(4)? + &z.pow(-4)?);
    println!("order of z^3: {:?}", z.pow(3)?.is_root_of_unity_order(64));

    let x = field.parse("3/2 + z^2")?;
    println!("x = {x}, 1/x = {}", x.inv()?);
    println!("x * (1/x) = {}", &x * &x.inv()?);

    let four = cyclotomic_field(4)?.parse("-4")?;
    let roots = four.nth_roots(2, &cyclotomic_field(4)?)?;
    println!("square roots of -4 in Q(z_4): {roots:?}");
    Ok(())
}
