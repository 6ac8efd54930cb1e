//! Laurent polynomials 𝔽[Y], rational functions 𝔽(Y), the Weyl action on
//! exponents and evaluation at characters.
//!
//! Variables are the basis monomials Z^{y_j}. A rational function is kept
//! as num/den with den a product of polynomials in single monomials Z^μ,
//! one per primitive direction μ, each with constant term 1 and coprime
//! to num.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::coxeter::{RootDatum, WeylElement};
use crate::error::{Error, Result};
use crate::scalars::Fe;

/// An exponent vector λ ∈ ℤᵈ, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<i32>);

impl Mono {
    pub fn zero(d: usize) -> Mono {
        Mono(vec![0; d])
    }

    fn degree(&self) -> i64 {
        self.0.iter().map(|&e| i64::from(e)).sum()
    }

    fn add(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A Laurent polynomial in d variables; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    nvars: usize,
    terms: BTreeMap<Mono, Fe>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Laurent {
        Laurent { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Fe) -> Laurent {
        let mut p = Laurent::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Laurent {
        Laurent::constant(nvars, Fe::one())
    }

    /// The monomial Z^λ.
    pub fn monomial(lambda: &[i64]) -> Laurent {
        Laurent::term(lambda, Fe::one())
    }

    pub fn term(lambda: &[i64], c: Fe) -> Laurent {
        let mut p = Laurent::zero(lambda.len());
        if !c.is_zero() {
            p.terms
                .insert(Mono(lambda.iter().map(|&e| e as i32).collect()), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Fe)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn leading(&self) -> Option<(&Mono, &Fe)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Fe) -> Laurent {
        if k.is_zero() {
            return Laurent::zero(self.nvars);
        }
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.add(m2), c1 * c2);
            }
        }
        out
    }

    /// Multiplication by Z^m.
    pub fn shift(&self, m: &Mono) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.add(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Laurent {
        (0..e).fold(Laurent::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Componentwise minimum of the exponents.
    pub fn min_exponents(&self) -> Mono {
        let mut m = vec![i32::MAX; self.nvars];
        for k in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(&k.0) {
                *a = (*a).min(b);
            }
        }
        if self.terms.is_empty() {
            m.fill(0);
        }
        Mono(m)
    }

    /// Exponents transformed by λ ↦ Mλ.
    pub fn transform(&self, m: &[Vec<i64>]) -> Laurent {
        let mut out = Laurent::zero(self.nvars);
        for (k, c) in &self.terms {
            let img: Vec<i32> = m
                .iter()
                .map(|row| row.iter().zip(&k.0).map(|(a, &b)| a * i64::from(b)).sum::<i64>() as i32)
                .collect();
            out.add_term(Mono(img), c.clone());
        }
        out
    }

    /// θ^w: Z^λ ↦ Z^{w.λ}.
    pub fn weyl_act(&self, w: &WeylElement) -> Laurent {
        if w.is_identity() {
            return self.clone();
        }
        self.transform(w.y_matrix())
    }

    /// f(τ) = Σ c_λ τ(λ).
    pub fn evaluate(&self, tau: &[Fe]) -> Fe {
        let mut acc = Fe::zero();
        for (k, c) in &self.terms {
            let mut v = c.clone();
            for (e, t) in k.0.iter().zip(tau) {
                if *e != 0 {
                    v = &v * &t.pow(i64::from(*e)).expect("character values are nonzero");
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.0.iter().all(|&e| e >= 0))
    }

    /// Exponent vectors present, in increasing order.
    pub fn support(&self) -> Vec<Vec<i32>> {
        self.terms.keys().map(|k| k.0.clone()).collect()
    }

    fn monic(&self) -> Laurent {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    fn shifted_to_polynomial(&self) -> (Laurent, Mono) {
        let m = self.min_exponents();
        let neg = Mono(m.0.iter().map(|e| -e).collect());
        (self.shift(&neg), m)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.0.iter().all(|&e| e == 0) {
                    format!("({c})")
                } else {
                    let mono = format!(
                        "Z^[{}]",
                        m.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
                    );
                    if c.is_one() {
                        mono
                    } else {
                        format!("({c})*{mono}")
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact quotient of polynomials (nonnegative exponents), if b divides a.
fn div_exact_poly(a: &Laurent, b: &Laurent) -> Option<Laurent> {
    if b.is_zero() {
        return None;
    }
    let (bm, bc) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let binv = bc.inv().ok()?;
    if let Some(c) = b.as_constant() {
        return Some(a.scale(&c.inv().ok()?));
    }
    let mut r = a.clone();
    let mut q = Laurent::zero(a.nvars);
    while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
        if !bm.divides(&rm) {
            return None;
        }
        let tm = rm.sub(&bm);
        let tc = &rc * &binv;
        let t = Laurent { nvars: a.nvars, terms: BTreeMap::from([(tm, tc)]) };
        r = r.sub(&t.mul(b));
        q = q.add(&t);
    }
    Some(q)
}

fn degree_in(p: &Laurent, v: usize) -> i32 {
    p.terms.keys().map(|k| k.0[v]).max().unwrap_or(0)
}

/// Coefficients of p as a polynomial in variable v.
fn coeffs_in(p: &Laurent, v: usize) -> BTreeMap<i32, Laurent> {
    let mut out: BTreeMap<i32, Laurent> = BTreeMap::new();
    for (k, c) in &p.terms {
        let mut m = k.clone();
        let e = m.0[v];
        m.0[v] = 0;
        out.entry(e)
            .or_insert_with(|| Laurent::zero(p.nvars))
            .add_term(m, c.clone());
    }
    out
}

fn content_in(p: &Laurent, v: usize) -> Laurent {
    coeffs_in(p, v)
        .values()
        .fold(Laurent::zero(p.nvars), |g, c| poly_gcd(&g, c))
}

fn primitive_part_in(p: &Laurent, v: usize) -> Laurent {
    let c = content_in(p, v);
    div_exact_poly(p, &c).expect("content divides")
}

/// Pseudo-remainder of a by b as polynomials in v.
fn pseudo_rem(a: &Laurent, b: &Laurent, v: usize) -> Laurent {
    let db = degree_in(b, v);
    let lb = coeffs_in(b, v).remove(&db).unwrap();
    let mut r = a.clone();
    while !r.is_zero() && degree_in(&r, v) >= db {
        let dr = degree_in(&r, v);
        let lr = coeffs_in(&r, v).remove(&dr).unwrap();
        let mut mono = Mono::zero(a.nvars);
        mono.0[v] = dr - db;
        r = r.mul(&lb).sub(&lr.mul(b).shift(&mono));
    }
    r
}

/// Monic gcd of two polynomials by the recursive primitive Euclidean
/// algorithm; gcd(0, 0) = 0.
pub fn poly_gcd(a: &Laurent, b: &Laurent) -> Laurent {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let nv = a.nvars;
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let mono = Mono(ma.0.iter().zip(&mb.0).map(|(x, y)| *x.min(y)).collect());
    let a = a.shift(&Mono(ma.0.iter().map(|e| -e).collect()));
    let b = b.shift(&Mono(mb.0.iter().map(|e| -e).collect()));
    let mono_poly = Laurent::term(&mono.0.iter().map(|&e| i64::from(e)).collect::<Vec<_>>(), Fe::one());
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return mono_poly;
    }
    let present = |p: &Laurent, v: usize| p.terms.keys().any(|k| k.0[v] != 0);
    let Some(v) = (0..nv).rev().find(|&v| present(&a, v) || present(&b, v)) else {
        return mono_poly;
    };
    let g = match (present(&a, v), present(&b, v)) {
        (true, false) => poly_gcd(&content_in(&a, v), &b),
        (false, true) => poly_gcd(&a, &content_in(&b, v)),
        _ => {
            let (ca, cb) = (content_in(&a, v), content_in(&b, v));
            let c = poly_gcd(&ca, &cb);
            let mut r0 = div_exact_poly(&a, &ca).unwrap();
            let mut r1 = div_exact_poly(&b, &cb).unwrap();
            if degree_in(&r0, v) < degree_in(&r1, v) {
                std::mem::swap(&mut r0, &mut r1);
            }
            let g = loop {
                let r = pseudo_rem(&r0, &r1, v);
                if r.is_zero() {
                    break r1;
                }
                if degree_in(&r, v) == 0 {
                    break Laurent::one(nv);
                }
                r0 = r1;
                r1 = primitive_part_in(&r, v);
            };
            c.mul(&primitive_part_in(&g, v))
        }
    };
    g.mul(&mono_poly).monic()
}

/// Dense univariate polynomials over the coefficient field, lowest degree
/// first.
mod uni {
    use crate::scalars::Fe;

    pub type U = Vec<Fe>;

    pub fn trim(mut p: U) -> U {
        while p.last().is_some_and(Fe::is_zero) {
            p.pop();
        }
        p
    }

    pub fn deg(p: &[Fe]) -> usize {
        p.len().saturating_sub(1)
    }

    pub fn mul(a: &[Fe], b: &[Fe]) -> U {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fe::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        trim(out)
    }

    pub fn divmod(a: &[Fe], b: &[Fe]) -> (U, U) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lb = b.last().expect("nonzero divisor").inv().expect("nonzero leading coefficient");
        let mut q = vec![Fe::zero(); r.len() - b.len() + 1];
        while !r.is_empty() && r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * &lb;
            for (i, bi) in b.iter().enumerate() {
                if !bi.is_zero() {
                    r[shift + i] = &r[shift + i] - &(&c * bi);
                }
            }
            q[shift] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    /// p = c·p' with p'(0) = 1; p(0) must be nonzero.
    pub fn unit_constant(p: &[Fe]) -> (Fe, U) {
        let c = p[0].clone();
        let ci = c.inv().expect("nonzero constant term");
        (c, p.iter().map(|x| x * &ci).collect())
    }

    /// gcd normalized to constant term 1; both inputs have p(0) ≠ 0.
    pub fn gcd(a: &[Fe], b: &[Fe]) -> U {
        let mut r0 = trim(a.to_vec());
        let mut r1 = trim(b.to_vec());
        while !r1.is_empty() {
            let (_, r) = divmod(&r0, &r1);
            r0 = r1;
            r1 = r;
            if r1.len() == 1 {
                return vec![Fe::one()];
            }
        }
        unit_constant(&r0).1
    }

    pub fn eval(p: &[Fe], x: &Fe) -> Fe {
        p.iter().rev().fold(Fe::zero(), |acc, c| &(&acc * x) + c)
    }
}

fn igcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

/// Primitive direction with first nonzero coordinate positive.
fn canonical_direction(d: &[i64]) -> (Vec<i64>, i64) {
    let g = d.iter().fold(0, |g, &x| igcd(g, x));
    let sign = d.iter().find(|&&x| x != 0).map_or(1, |&x| x.signum());
    (d.iter().map(|&x| x * sign / g).collect(), g * sign)
}

fn mono_i64(m: &Mono) -> Vec<i64> {
    m.0.iter().map(|&e| i64::from(e)).collect()
}

fn mono_from(v: &[i64]) -> Mono {
    Mono(v.iter().map(|&e| e as i32).collect())
}

/// p = c·Z^m·U(Z^μ) with U(0) = 1, when the support of p lies on one line.
/// A monomial gives μ = ∅ and U = 1.
fn split_directional(p: &Laurent) -> Option<(Fe, Vec<i64>, Vec<i64>, uni::U)> {
    let mut it = p.terms.iter();
    let (e0, c0) = it.next()?;
    let e0 = mono_i64(e0);
    let Some((e1, _)) = it.next() else {
        return Some((c0.clone(), e0, Vec::new(), vec![Fe::one()]));
    };
    let diff: Vec<i64> = mono_i64(e1).iter().zip(&e0).map(|(a, b)| a - b).collect();
    let (mu, _) = canonical_direction(&diff);
    let piv = mu.iter().position(|&x| x != 0).unwrap();
    let mut ks = Vec::with_capacity(p.len());
    for (e, c) in &p.terms {
        let d: Vec<i64> = mono_i64(e).iter().zip(&e0).map(|(a, b)| a - b).collect();
        if d[piv] % mu[piv] != 0 {
            return None;
        }
        let k = d[piv] / mu[piv];
        if d.iter().zip(&mu).any(|(x, m)| *x != k * m) {
            return None;
        }
        ks.push((k, c.clone()));
    }
    let kmin = ks.iter().map(|x| x.0).min().unwrap();
    let kmax = ks.iter().map(|x| x.0).max().unwrap();
    let mut u = vec![Fe::zero(); (kmax - kmin + 1) as usize];
    for (k, c) in ks {
        u[(k - kmin) as usize] = c;
    }
    let (c, u) = uni::unit_constant(&u);
    let m: Vec<i64> = e0.iter().zip(&mu).map(|(a, b)| a + kmin * b).collect();
    Some((c, m, mu, u))
}

/// U(Z^μ) as a Laurent polynomial.
fn expand_directional(mu: &[i64], u: &[Fe], nvars: usize) -> Laurent {
    let mut out = Laurent::zero(nvars);
    for (k, c) in u.iter().enumerate() {
        let e: Vec<i64> = mu.iter().map(|m| m * k as i64).collect();
        out.add_term(mono_from(&e), c.clone());
    }
    out
}

/// The decomposition p = Σ_r Z^r·C_r(Z^μ) over the classes r of Y/ℤμ,
/// each C_r stored as (lowest power, dense coefficients).
fn fibers(p: &Laurent, mu: &[i64]) -> BTreeMap<Vec<i64>, (i64, uni::U)> {
    let piv = mu.iter().position(|&x| x != 0).unwrap();
    let mut raw: BTreeMap<Vec<i64>, BTreeMap<i64, Fe>> = BTreeMap::new();
    for (e, c) in &p.terms {
        let e = mono_i64(e);
        let k = e[piv].div_euclid(mu[piv]);
        let r: Vec<i64> = e.iter().zip(mu).map(|(a, b)| a - k * b).collect();
        raw.entry(r).or_default().insert(k, c.clone());
    }
    raw.into_iter()
        .map(|(r, ks)| {
            let kmin = *ks.keys().next().unwrap();
            let kmax = *ks.keys().next_back().unwrap();
            let mut u = vec![Fe::zero(); (kmax - kmin + 1) as usize];
            for (k, c) in ks {
                u[(k - kmin) as usize] = c;
            }
            (r, (kmin, u))
        })
        .collect()
}

fn unfiber(f: &BTreeMap<Vec<i64>, (i64, uni::U)>, mu: &[i64], nvars: usize) -> Laurent {
    let mut out = Laurent::zero(nvars);
    for (r, (kmin, u)) in f {
        for (i, c) in u.iter().enumerate() {
            let k = kmin + i as i64;
            let e: Vec<i64> = r.iter().zip(mu).map(|(a, b)| a + k * b).collect();
            out.add_term(mono_from(&e), c.clone());
        }
    }
    out
}

/// Removes from p and U(Z^μ) their greatest common factor.
fn cancel_direction(p: &Laurent, mu: &[i64], u: &[Fe]) -> (Laurent, uni::U) {
    if p.is_zero() {
        return (p.clone(), vec![Fe::one()]);
    }
    let f = fibers(p, mu);
    let mut g = u.to_vec();
    for (_, fu) in f.values() {
        if uni::deg(&g) == 0 {
            return (p.clone(), u.to_vec());
        }
        // fibers can start with zero constant term only through x-powers,
        // which the stored lowest power already removed
        g = uni::gcd(&g, fu);
    }
    if uni::deg(&g) == 0 {
        return (p.clone(), u.to_vec());
    }
    let divided: BTreeMap<Vec<i64>, (i64, uni::U)> = f
        .into_iter()
        .map(|(r, (k, fu))| {
            let (q, rem) = uni::divmod(&fu, &g);
            debug_assert!(rem.is_empty());
            (r, (k, q))
        })
        .collect();
    let (q, _) = uni::divmod(u, &g);
    (unfiber(&divided, mu, p.nvars), q)
}

/// Denominators: one univariate factor D_μ(Z^μ) per primitive direction μ,
/// normalized by D_μ(0) = 1 and of positive degree.
type Den = BTreeMap<Vec<i64>, uni::U>;

/// A reduced fraction of Laurent polynomials.
///
/// The denominator is a product of polynomials in single monomials Z^μ,
/// one per direction, times a residual polynomial `rest` that stays 1
/// unless a caller divides by a polynomial without that shape.
#[derive(Clone)]
pub struct RatFn {
    num: Laurent,
    den: Den,
    rest: Laurent,
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        if self.rest.is_one() && o.rest.is_one() {
            return self.num == o.num && self.den == o.den;
        }
        let (n1, d1) = self.parts();
        let (n2, d2) = o.parts();
        n1.mul(&d2) == n2.mul(&d1)
    }
}

impl Eq for RatFn {}

impl RatFn {
    pub fn zero(nvars: usize) -> RatFn {
        RatFn { num: Laurent::zero(nvars), den: Den::new(), rest: Laurent::one(nvars) }
    }

    pub fn one(nvars: usize) -> RatFn {
        RatFn::constant(nvars, Fe::one())
    }

    pub fn constant(nvars: usize, c: Fe) -> RatFn {
        RatFn::from(Laurent::constant(nvars, c))
    }

    pub fn monomial(lambda: &[i64]) -> RatFn {
        RatFn::from(Laurent::monomial(lambda))
    }

    /// Coprime canonical form of num/den.
    pub fn reduce(num: Laurent, den: Laurent) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nv = den.nvars;
        if num.is_zero() {
            return Ok(RatFn::zero(nv));
        }
        match split_directional(&den) {
            Some((c, m, mu, u)) => {
                let num = num
                    .shift(&mono_from(&m.iter().map(|e| -e).collect::<Vec<_>>()))
                    .scale(&c.inv()?);
                let mut d = Den::new();
                if uni::deg(&u) > 0 {
                    d.insert(mu, u);
                }
                Ok(RatFn::assemble(num, d, Laurent::one(nv)))
            }
            None => {
                let (den, m) = den.shifted_to_polynomial();
                let num = num.shift(&Mono(m.0.iter().map(|e| -e).collect()));
                Ok(RatFn::assemble(num, Den::new(), den))
            }
        }
    }

    /// Cancels num against every denominator factor.
    fn assemble(num: Laurent, den: Den, rest: Laurent) -> RatFn {
        let nv = num.nvars;
        if num.is_zero() {
            return RatFn::zero(nv);
        }
        let mut num = num;
        let mut out = Den::new();
        for (mu, u) in den {
            let (n, u) = cancel_direction(&num, &mu, &u);
            num = n;
            if uni::deg(&u) > 0 {
                out.insert(mu, u);
            }
        }
        let mut r = RatFn { num, den: out, rest: Laurent::one(nv) };
        if !rest.is_one() {
            r.absorb_rest(rest);
        }
        r
    }

    fn absorb_rest(&mut self, rest: Laurent) {
        let (np, nm) = self.num.shifted_to_polynomial();
        let g = poly_gcd(&np, &rest);
        let (np, rest) = if g.as_constant().is_some() {
            (np, rest)
        } else {
            (div_exact_poly(&np, &g).unwrap(), div_exact_poly(&rest, &g).unwrap())
        };
        let lc = rest.leading().unwrap().1.inv().unwrap();
        self.num = np.shift(&nm).scale(&lc);
        self.rest = rest.scale(&lc);
    }

    /// Numerator and denominator as Laurent polynomials, shifted together
    /// so that the denominator is a polynomial without monomial factor.
    pub fn parts(&self) -> (Laurent, Laurent) {
        let nv = self.nvars();
        let den = self
            .den
            .iter()
            .fold(self.rest.clone(), |acc, (mu, u)| acc.mul(&expand_directional(mu, u, nv)));
        let (den, m) = den.shifted_to_polynomial();
        (self.num.shift(&Mono(m.0.iter().map(|e| -e).collect())), den)
    }

    pub fn numerator(&self) -> Laurent {
        self.parts().0
    }

    pub fn denominator(&self) -> Laurent {
        self.parts().1
    }

    /// The directional factors (μ, coefficients of D_μ).
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Vec<i64>, &Vec<Fe>)> {
        self.den.iter()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_is_one(&self) -> bool {
        self.den.is_empty() && self.rest.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.den_is_one() && self.num.is_one()
    }

    /// The Laurent polynomial, when the denominator is 1.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        self.den_is_one().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Fe> {
        if self.den_is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone(), rest: self.rest.clone() }
    }

    pub fn scale(&self, k: &Fe) -> RatFn {
        if k.is_zero() {
            return RatFn::zero(self.nvars());
        }
        RatFn { num: self.num.scale(k), den: self.den.clone(), rest: self.rest.clone() }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let nv = self.nvars();
        if self.den_is_one() && o.den_is_one() {
            return RatFn::from(self.num.add(&o.num));
        }
        // lcm per direction; only its factors can cancel afterwards
        let mut lcm = Den::new();
        let mut m1 = Laurent::one(nv);
        let mut m2 = Laurent::one(nv);
        let dirs: std::collections::BTreeSet<&Vec<i64>> = self.den.keys().chain(o.den.keys()).collect();
        for mu in dirs {
            match (self.den.get(mu), o.den.get(mu)) {
                (Some(a), Some(b)) => {
                    if a == b {
                        lcm.insert(mu.clone(), a.clone());
                        continue;
                    }
                    let g = uni::gcd(a, b);
                    let (a1, _) = uni::divmod(a, &g);
                    let (b1, _) = uni::divmod(b, &g);
                    m1 = m1.mul(&expand_directional(mu, &b1, nv));
                    m2 = m2.mul(&expand_directional(mu, &a1, nv));
                    lcm.insert(mu.clone(), uni::mul(a, &b1));
                }
                (Some(a), None) => {
                    m2 = m2.mul(&expand_directional(mu, a, nv));
                    lcm.insert(mu.clone(), a.clone());
                }
                (None, Some(b)) => {
                    m1 = m1.mul(&expand_directional(mu, b, nv));
                    lcm.insert(mu.clone(), b.clone());
                }
                (None, None) => unreachable!(),
            }
        }
        let (rest, r1, r2) = if self.rest == o.rest {
            (self.rest.clone(), Laurent::one(nv), Laurent::one(nv))
        } else {
            let g = poly_gcd(&self.rest, &o.rest);
            let a1 = div_exact_poly(&self.rest, &g).unwrap();
            let b1 = div_exact_poly(&o.rest, &g).unwrap();
            (self.rest.mul(&b1), b1, a1)
        };
        let num = self.num.mul(&m1).mul(&r1).add(&o.num.mul(&m2).mul(&r2));
        RatFn::assemble(num, lcm, rest)
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero(self.nvars());
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if self.den_is_one() && o.den_is_one() {
            return RatFn::from(self.num.mul(&o.num));
        }
        // cross cancellation: each numerator is already coprime to its own
        // denominator
        let mut n1 = self.num.clone();
        let mut d2 = Den::new();
        for (mu, u) in &o.den {
            let (n, u) = cancel_direction(&n1, mu, u);
            n1 = n;
            if uni::deg(&u) > 0 {
                d2.insert(mu.clone(), u);
            }
        }
        let mut n2 = o.num.clone();
        let mut den = Den::new();
        for (mu, u) in &self.den {
            let (n, u) = cancel_direction(&n2, mu, u);
            n2 = n;
            if uni::deg(&u) > 0 {
                den.insert(mu.clone(), u);
            }
        }
        for (mu, u) in d2 {
            match den.get_mut(&mu) {
                Some(v) => *v = uni::mul(v, &u),
                None => {
                    den.insert(mu, u);
                }
            }
        }
        let num = n1.mul(&n2);
        if self.rest.is_one() && o.rest.is_one() {
            return RatFn { num, den, rest: Laurent::one(self.nvars()) };
        }
        let mut r = RatFn { num, den, rest: Laurent::one(self.nvars()) };
        r.absorb_rest(self.rest.mul(&o.rest));
        r
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (n, d) = self.parts();
        RatFn::reduce(d, n)
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&o.inv()?))
    }

    /// θ^w: exponents move by the matrix of w on Y.
    pub fn weyl_act(&self, w: &WeylElement) -> RatFn {
        if w.is_identity() || self.as_constant().is_some() {
            return self.clone();
        }
        let nv = self.nvars();
        let mut num = self.num.weyl_act(w);
        if self.den_is_one() {
            return RatFn::from(num);
        }
        let mut den = Den::new();
        for (mu, u) in &self.den {
            let img = w.act_y(mu);
            let (dir, g) = canonical_direction(&img);
            debug_assert_eq!(g.abs(), 1);
            if g > 0 {
                den.insert(dir, u.clone());
            } else {
                // U(x⁻¹) = x^{−deg}·Ũ(x) with Ũ the reversed polynomial
                let rev: Vec<Fe> = u.iter().rev().cloned().collect();
                let (c, rev) = uni::unit_constant(&rev);
                let shift: Vec<i64> = dir.iter().map(|m| m * uni::deg(u) as i64).collect();
                num = num.shift(&mono_from(&shift)).scale(&c.inv().unwrap());
                den.insert(dir, rev);
            }
        }
        if self.rest.is_one() {
            return RatFn { num, den, rest: Laurent::one(nv) };
        }
        let (rest, m) = self.rest.weyl_act(w).shifted_to_polynomial();
        let num = num.shift(&Mono(m.0.iter().map(|e| -e).collect()));
        let lc = rest.leading().unwrap().1.inv().unwrap();
        RatFn { num: num.scale(&lc), den, rest: rest.scale(&lc) }
    }

    fn den_value(&self, tau: &[Fe]) -> Fe {
        self.den.iter().fold(self.rest.evaluate(tau), |acc, (mu, u)| {
            let x = Laurent::monomial(mu).evaluate(tau);
            &acc * &uni::eval(u, &x)
        })
    }

    /// θ(τ); fails when the reduced denominator vanishes at τ.
    pub fn evaluate(&self, tau: &[Fe]) -> Result<Fe> {
        let d = self.den_value(tau);
        if d.is_zero() {
            return Err(Error::Singular(format!("denominator {} vanishes", self.denominator())));
        }
        Ok(&self.num.evaluate(tau) / &d)
    }

    pub fn is_regular_at(&self, tau: &[Fe]) -> bool {
        !self.den_value(tau).is_zero()
    }
}

impl From<Laurent> for RatFn {
    fn from(p: Laurent) -> RatFn {
        let nv = p.nvars;
        RatFn { num: p, den: Den::new(), rest: Laurent::one(nv) }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_is_one() {
            write!(f, "{}", self.num)
        } else {
            let (n, d) = self.parts();
            write!(f, "({n}) / ({d})")
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A character τ ∈ Hom(Y, 𝔽^×), stored by its values on the basis (y_j).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Character(Vec<Fe>);

impl Character {
    pub fn new(values: Vec<Fe>) -> Result<Character> {
        if values.iter().any(Fe::is_zero) {
            return Err(Error::Config("character values must be nonzero".into()));
        }
        Ok(Character(values))
    }

    /// The trivial character 𝟙.
    pub fn trivial(d: usize) -> Character {
        Character(vec![Fe::one(); d])
    }

    pub fn values(&self) -> &[Fe] {
        &self.0
    }

    /// τ(λ).
    pub fn value(&self, lambda: &[i64]) -> Fe {
        Laurent::monomial(lambda).evaluate(&self.0)
    }

    /// τ(α∨) for a coroot in simple-coroot coordinates.
    pub fn coroot_value(&self, rd: &RootDatum, beta: &[i64]) -> Fe {
        self.value(&rd.coroot_to_y(beta))
    }

    /// w.τ, with (w.τ)(λ) = τ(w⁻¹.λ).
    pub fn act(&self, rd: &RootDatum, w: &WeylElement) -> Character {
        Character(rd.act_character(w, &self.0))
    }

    /// A character with prescribed values τ(α_s∨) = γ_s, through a Smith
    /// normal form of the coroot matrix. Needed roots must lie in `field`.
    pub fn from_coroot_values(
        rd: &RootDatum,
        gamma: &[Fe],
        field: &crate::scalars::Field,
    ) -> Result<Character> {
        let l = rd.rank();
        let d = rd.rank_y();
        let c: Vec<Vec<i64>> = (0..l).map(|s| rd.coroot_y(s).to_vec()).collect();
        let (u, diag, v) = crate::linalg::smith_normal_form(&c);
        let mut x = vec![Fe::one(); d];
        for i in 0..l {
            let rhs = (0..l).fold(Fe::one(), |acc, s| {
                &acc * &gamma[s].pow(u[i][s]).expect("nonzero target values")
            });
            let roots = rhs.nth_roots(diag[i] as u32, field)?;
            x[i] = roots[0].clone();
        }
        let values: Vec<Fe> = (0..d)
            .map(|j| {
                (0..d).fold(Fe::one(), |acc, i| &acc * &x[i].pow(v[j][i]).unwrap())
            })
            .collect();
        let tau = Character(values);
        for (s, g) in gamma.iter().enumerate() {
            if tau.value(rd.coroot_y(s)) != *g {
                return Err(Error::Assertion(format!(
                    "constructed character misses the value at alpha_{}",
                    s + 1
                )));
            }
        }
        Ok(tau)
    }

    /// Regular means trivial stabilizer; checked within the length-L ball.
    pub fn is_regular_within(&self, rd: &RootDatum, l: usize) -> bool {
        rd.bruhat_ball(l)
            .iter()
            .skip(1)
            .all(|w| self.act(rd, w) != *self)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", v.join(", "))
    }
}
