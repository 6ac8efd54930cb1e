//! Exact coefficient fields: the rationals and cyclotomic fields ℚ(ζ_n).
//!
//! An element is a polynomial in ζ_n of degree below φ(n) with big-rational
//! coefficients. Elements whose representation has degree zero are plain
//! rationals and combine with elements of any cyclotomic field; two elements
//! living in different nontrivial cyclotomic fields never combine.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense univariate polynomials over ℚ, lowest degree first, no trailing zeros.
mod upoly {
    use super::Q;
    use num_traits::Zero;

    pub fn trim(mut p: Vec<Q>) -> Vec<Q> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = a.len().max(b.len());
        let mut out = vec![Q::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    /// Quotient and remainder; `b` nonzero.
    pub fn divmod(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lb = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut quo = vec![Q::zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = &r[r.len() - 1] / &lb;
            for (j, y) in b.iter().enumerate() {
                let t = &c * y;
                r[k + j] -= t;
            }
            quo[k] = c;
            r = trim(r);
        }
        (trim(quo), r)
    }

    /// Returns u with u·a ≡ gcd(a, m) (mod m), the gcd made monic.
    pub fn inverse_mod(a: &[Q], m: &[Q]) -> Option<Vec<Q>> {
        let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
        let (mut t0, mut t1): (Vec<Q>, Vec<Q>) = (Vec::new(), vec![Q::from_integer(1.into())]);
        while !r1.is_empty() {
            let (qq, r) = divmod(&r0, &r1);
            let t = sub(&t0, &mul(&qq, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.len() != 1 {
            return None;
        }
        let inv = &Q::from_integer(1.into()) / &r0[0];
        let u: Vec<Q> = t0.iter().map(|c| c * &inv).collect();
        Some(divmod(&u, m).1)
    }
}

fn cyclotomic_registry() -> &'static RwLock<HashMap<u32, Arc<Vec<Q>>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<Vec<Q>>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Φ_n by dividing xⁿ − 1 by Φ_d for every proper divisor d of n.
fn cyclotomic_poly(n: u32) -> Arc<Vec<Q>> {
    if let Some(p) = cyclotomic_registry().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = vec![Q::zero(); n as usize + 1];
    p[0] = q(-1);
    p[n as usize] = q(1);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            let (quo, rem) = upoly::divmod(&p, &phi_d);
            debug_assert!(rem.is_empty());
            p = quo;
        }
    }
    let p = Arc::new(p);
    cyclotomic_registry().write().unwrap().insert(n, p.clone());
    p
}

fn phi_of(n: u32) -> Arc<Vec<Q>> {
    cyclotomic_poly(n)
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// A field descriptor ℚ(ζ_n); `n = 1` is ℚ itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    n: u32,
    degree: usize,
}

/// Builds ℚ(ζ_n) and registers its cyclotomic polynomial.
pub fn cyclotomic_field(n: u32) -> Result<Field> {
    if n == 0 {
        return Err(Error::Config("cyclotomic order must be positive".into()));
    }
    let phi = cyclotomic_poly(n);
    Ok(Field {
        n,
        degree: phi.len() - 1,
    })
}

impl Field {
    pub fn rationals() -> Field {
        Field { n: 1, degree: 1 }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Degree of the field over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The cyclotomic polynomial Φ_n, lowest degree first.
    pub fn cyclotomic_polynomial(&self) -> Vec<BigRational> {
        phi_of(self.n).as_ref().clone()
    }

    pub fn zero(&self) -> Fe {
        Fe::zero()
    }

    pub fn one(&self) -> Fe {
        Fe::one()
    }

    /// The primitive root ζ_n.
    pub fn zeta(&self) -> Fe {
        match self.degree {
            1 => {
                // Φ_n = x − c, so ζ_n = c
                let phi = phi_of(self.n);
                Fe::rational(-phi[0].clone())
            }
            _ => Fe::from_coeffs(self.n, vec![q(0), q(1)]),
        }
    }

    pub fn from_coeffs(&self, c: Vec<BigRational>) -> Fe {
        Fe::from_coeffs(self.n, c)
    }

    /// Every root of unity of the field, ζ_N^k for N = lcm(2, n), listed by k.
    pub fn roots_of_unity(&self) -> Vec<Fe> {
        let n_all = self.n.lcm(&2);
        let z = self.zeta();
        let mut out = Vec::new();
        let mut cur = Fe::one();
        for _ in 0..self.n {
            out.push(cur.clone());
            cur = &cur * &z;
        }
        if n_all != self.n {
            let neg: Vec<Fe> = out.iter().map(|x| -x).collect();
            // order as powers of −ζ_n, which generates μ_{2n} for odd n
            let g = -&z;
            let mut ordered = Vec::new();
            let mut cur = Fe::one();
            for _ in 0..n_all {
                ordered.push(cur.clone());
                cur = &cur * &g;
            }
            debug_assert!(ordered.iter().all(|x| out.contains(x) || neg.contains(x)));
            return ordered;
        }
        out
    }

    /// Parses "p/q", or "c0 + c1*z + c2*z^2 - ..." where z is ζ_n.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        parse_element(self, s)
    }
}

/// An element of ℚ(ζ_n) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fe {
    n: u32,
    c: Vec<Q>,
}

impl Fe {
    pub fn zero() -> Fe {
        Fe { n: 1, c: Vec::new() }
    }

    pub fn one() -> Fe {
        Fe::rational(q(1))
    }

    pub fn int(v: i64) -> Fe {
        Fe::rational(q(v))
    }

    pub fn ratio(a: i64, b: i64) -> Fe {
        Fe::rational(Q::new(a.into(), b.into()))
    }

    pub fn rational(r: BigRational) -> Fe {
        Fe::from_coeffs(1, vec![r])
    }

    fn from_coeffs(n: u32, c: Vec<Q>) -> Fe {
        let c = upoly::trim(c);
        let deg = phi_of(n).len() - 1;
        let c = if c.len() > deg {
            upoly::divmod(&c, &phi_of(n)).1
        } else {
            c
        };
        let n = if c.len() <= 1 { 1 } else { n };
        Fe { n, c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// The rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(Q::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    /// Coefficients in the power basis of ζ_n.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// Cyclotomic order of the smallest context the element needs.
    pub fn context(&self) -> u32 {
        self.n
    }

    fn join(&self, other: &Fe) -> Result<u32> {
        match (self.n, other.n) {
            (1, m) | (m, 1) => Ok(m),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::FieldMismatch(a, b)),
        }
    }

    pub fn try_add(&self, other: &Fe) -> Result<Fe> {
        let n = self.join(other)?;
        let len = self.c.len().max(other.c.len());
        let mut out = vec![Q::zero(); len];
        for (i, x) in self.c.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in other.c.iter().enumerate() {
            out[i] += y;
        }
        Ok(Fe::from_coeffs(n, out))
    }

    pub fn try_sub(&self, other: &Fe) -> Result<Fe> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Fe) -> Result<Fe> {
        let n = self.join(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Fe::zero());
        }
        if self.c.len() == 1 || other.c.len() == 1 {
            let (s, v) = if self.c.len() == 1 {
                (&self.c[0], other)
            } else {
                (&other.c[0], self)
            };
            return Ok(Fe {
                n: v.n,
                c: v.c.iter().map(|x| x * s).collect(),
            });
        }
        Ok(Fe::from_coeffs(n, upoly::mul(&self.c, &other.c)))
    }

    pub fn try_div(&self, other: &Fe) -> Result<Fe> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Fe> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.c.len() == 1 {
            return Ok(Fe::rational(self.c[0].recip()));
        }
        let phi = phi_of(self.n);
        let u = upoly::inverse_mod(&self.c, &phi).ok_or(Error::DivisionByZero)?;
        Ok(Fe::from_coeffs(self.n, u))
    }

    pub fn pow(&self, e: i64) -> Result<Fe> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Fe::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Least k ≤ bound with selfᵏ = 1.
    pub fn is_root_of_unity_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            if r.is_one() {
                return Some(1);
            }
            return (r == q(-1) && bound >= 2).then_some(2);
        }
        // roots of unity in ℚ(ζ_n) have order dividing lcm(2, n)
        let cap = bound.min(u64::from(self.n.lcm(&2)));
        let mut cur = self.clone();
        for k in 1..=cap {
            if cur.is_one() {
                return Some(k);
            }
            cur = &cur * self;
        }
        None
    }

    /// All k-th roots of self that lie in `field`, for elements of the form
    /// (positive rational)·(root of unity); other shapes are rejected.
    pub fn nth_roots(&self, k: u32, field: &Field) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Ok(vec![Fe::zero()]);
        }
        if k == 0 {
            return Err(Error::Config("zeroth root requested".into()));
        }
        let units = field.roots_of_unity();
        for u in &units {
            let r = match self.try_div(u)?.as_rational() {
                Some(r) if r.is_positive() => r,
                _ => continue,
            };
            let Some(rr) = rational_root(&r, k) else {
                return Err(Error::FieldTooSmall(format!(
                    "{r} has no rational {k}-th root; choose parameters with exact roots"
                )));
            };
            let mut out = Vec::new();
            for v in &units {
                if v.pow(i64::from(k))? == *u {
                    out.push(&Fe::rational(rr.clone()) * v);
                }
            }
            if out.is_empty() {
                return Err(Error::FieldTooSmall(format!(
                    "a {k}-th root of {u} needs a larger cyclotomic order than {}",
                    field.order()
                )));
            }
            return Ok(out);
        }
        Err(Error::FieldTooSmall(format!(
            "{self} is not a rational multiple of a root of unity in Q(z_{})",
            field.order()
        )))
    }
}

fn rational_root(r: &Q, k: u32) -> Option<Q> {
    let root_int = |x: &BigInt| -> Option<BigInt> {
        let y = x.nth_root(k);
        (num_traits::pow(y.clone(), k as usize) == *x).then_some(y)
    };
    Some(Q::new(root_int(r.numer())?, root_int(r.denom())?))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Fe> for &Fe {
            type Output = Fe;
            fn $m(self, rhs: &Fe) -> Fe {
                self.$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                (&self).$f(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<&Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: &Fe) -> Fe {
                (&self).$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}

impl From<i64> for Fe {
    fn from(v: i64) -> Fe {
        Fe::int(v)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_element(field: &Field, s: &str) -> Result<Fe> {
    let src = s.replace(' ', "");
    if src.is_empty() {
        return Err(Error::Parse("empty field element".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in src.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    let z = field.zeta();
    let mut acc = Fe::zero();
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(Error::Parse(format!("bad field element '{s}'")));
        }
        let value = match t.find('z') {
            None => Fe::rational(parse_rational(&t)?),
            Some(pos) => {
                let coef = t[..pos].trim_end_matches('*');
                let coef = if coef.is_empty() {
                    q(1)
                } else {
                    parse_rational(coef)?
                };
                let rest = &t[pos + 1..];
                let e: i64 = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| Error::Parse(format!("bad power in '{t}'")))?
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad power in '{t}'")))?
                };
                &Fe::rational(coef) * &z.pow(e)?
            }
        };
        acc = if neg { &acc - &value } else { &acc + &value };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn cyclotomic_polynomials() {
        let show = |n| {
            cyclotomic_field(n)
                .unwrap()
                .cyclotomic_polynomial()
                .iter()
                .map(|c| c.to_integer().to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(1), vec![-1, 1]);
        assert_eq!(show(4), vec![1, 0, 1]);
        assert_eq!(show(6), vec![1, -1, 1]);
        assert_eq!(show(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_orders() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let f = cyclotomic_field(n).unwrap();
            let z = f.zeta();
            let order = z.is_root_of_unity_order(1000).unwrap();
            let expect = if n == 1 { 1 } else { u64::from(n) };
            assert_eq!(order, expect, "n = {n}");
        }
    }

    #[test]
    fn parse_and_print() {
        let f = cyclotomic_field(4).unwrap();
        let a = f.parse("3 + 2*z").unwrap();
        assert_eq!(a.to_string(), "3 + 2*z");
        assert_eq!(f.parse("z^2").unwrap(), Fe::int(-1));
        assert_eq!(f.parse("-1/2").unwrap(), Fe::ratio(-1, 2));
        assert_eq!(f.parse("-z").unwrap(), -f.zeta());
        assert!(f.parse("1/0").is_err());
    }

    #[test]
    fn roots() {
        let f = cyclotomic_field(4).unwrap();
        let r = Fe::int(-4).nth_roots(2, &f).unwrap();
        assert_eq!(r.len(), 2);
        for x in &r {
            assert_eq!(x.pow(2).unwrap(), Fe::int(-4));
        }
        assert!(Fe::int(2).nth_roots(2, &f).is_err());
        let q = Field::rationals();
        assert_eq!(Fe::ratio(1, 16).nth_roots(2, &q).unwrap().len(), 2);
    }

    #[test]
    fn mixing_contexts_is_an_error() {
        let a = cyclotomic_field(4).unwrap().zeta();
        let b = cyclotomic_field(3).unwrap().zeta();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(4, 3))));
        assert!(a.try_add(&Fe::int(2)).is_ok());
    }
}
