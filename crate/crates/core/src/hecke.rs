//! The Bernstein-Lusztig-Hecke algebra with coefficients in 𝔽(Y).
//!
//! Elements are finite sums Σ X_w·θ_w with the rational-function
//! coefficient on the right of the basis vector X_w ∈ {H_w, T_w, B_w, F_w}.
//! Products are computed in the H basis from the quadratic relation and the
//! commutation rule θ·H_s = H_s·θ^s + Q_s(θ − θ^s).
//!
//! F_w is the product F_{s₁}⋯F_{s_k} along a reduced word s₁⋯s_k of w, so
//! that θ·F_w = F_w·θ^{w⁻¹} and F_w − T_w lies below w.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::coxeter::{Coroot, RootDatum, WeylElement};
use crate::error::{Error, Result};
use crate::laurent::{Character, Laurent, RatFn};
use crate::scalars::{Fe, Field};

/// Which family of basis vectors the coefficients refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Basis {
    H,
    T,
    B,
    F,
}

/// Σ X_w·θ_w for the basis X named by `basis`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    basis: Basis,
    nvars: usize,
    terms: BTreeMap<WeylElement, RatFn>,
}

impl HeckeElement {
    pub fn zero(basis: Basis, nvars: usize) -> HeckeElement {
        HeckeElement { basis, nvars, terms: BTreeMap::new() }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylElement, &RatFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &WeylElement) -> RatFn {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| RatFn::zero(self.nvars))
    }

    pub fn support(&self) -> Vec<WeylElement> {
        self.terms.keys().cloned().collect()
    }

    /// Adds X_w·θ.
    pub fn add_term(&mut self, w: &WeylElement, theta: &RatFn) {
        if theta.is_zero() {
            return;
        }
        match self.terms.get_mut(w) {
            Some(c) => {
                let s = c.add(theta);
                if s.is_zero() {
                    self.terms.remove(w);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(w.clone(), theta.clone());
            }
        }
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        assert_eq!(self.basis, o.basis, "adding elements written in different bases");
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, o: &HeckeElement) -> HeckeElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HeckeElement {
        HeckeElement {
            basis: self.basis,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    /// Right multiplication of every coefficient by θ.
    pub fn mul_coeff(&self, theta: &RatFn) -> HeckeElement {
        let mut out = HeckeElement::zero(self.basis, self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w, &c.mul(theta));
        }
        out
    }

    pub fn scale(&self, k: &Fe) -> HeckeElement {
        let mut out = HeckeElement::zero(self.basis, self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w, &c.scale(k));
        }
        out
    }

    /// Support elements of maximal length.
    pub fn max_length_support(&self) -> Vec<WeylElement> {
        let m = self.terms.keys().map(WeylElement::len).max().unwrap_or(0);
        self.terms.keys().filter(|w| w.len() == m).cloned().collect()
    }

    /// True when every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let tag = match self.basis {
            Basis::H => "H",
            Basis::T => "T",
            Basis::B => "B",
            Basis::F => "F",
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{tag}[{w}]·({c})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which factor of the denominator menu was chosen for ζ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DenChoice {
    /// 1 − Z^{−α∨}
    OneMinus,
    /// 1 + Z^{−α∨}
    OnePlus,
    /// 1 − Z^{−2α∨}
    OneMinusSquare,
}

/// ζ for one simple reflection as a function of x = Z^{−α_s∨}.
#[derive(Clone, Debug)]
struct ZetaUni {
    zeta: RatFn,
    num: Laurent,
    den: Laurent,
    choice: DenChoice,
}

/// ζ_{α∨} for a positive real coroot, with its chosen numerator and
/// denominator.
#[derive(Clone, Debug)]
pub struct ZetaData {
    pub coroot: Coroot,
    /// The simple reflection r_{α∨} is conjugate to.
    pub simple: usize,
    pub zeta: RatFn,
    pub num: RatFn,
    pub den: RatFn,
    pub choice: DenChoice,
    pub sigma: Fe,
    pub sigma_prime: Fe,
}

/// The algebra attached to a root datum, with caches for F_w, B_w and ζ.
pub struct Hecke {
    rd: Arc<RootDatum>,
    field: Field,
    d: usize,
    q: Vec<RatFn>,
    zeta_uni: Vec<ZetaUni>,
    zeta_cache: Mutex<HashMap<Coroot, Arc<ZetaData>>>,
    f_cache: Mutex<HashMap<WeylElement, HeckeElement>>,
    b_cache: Mutex<HashMap<WeylElement, HeckeElement>>,
    tau0: std::result::Result<Character, Error>,
}

fn x_uni(k: i64) -> Laurent {
    Laurent::monomial(&[k])
}

fn c_uni(c: Fe) -> Laurent {
    Laurent::constant(1, c)
}

/// x^k ↦ Z^{−kβ} for β ∈ Y.
fn lift(p: &Laurent, beta_y: &[i64]) -> Laurent {
    let mut out = Laurent::zero(beta_y.len());
    for (m, c) in p.terms() {
        let k = i64::from(m.0[0]);
        let lam: Vec<i64> = beta_y.iter().map(|b| -k * b).collect();
        out = out.add(&Laurent::term(&lam, c.clone()));
    }
    out
}

fn lift_rat(r: &RatFn, beta_y: &[i64]) -> RatFn {
    RatFn::reduce(lift(&r.numerator(), beta_y), lift(&r.denominator(), beta_y))
        .expect("lifted denominators stay nonzero")
}

impl Hecke {
    pub fn new(rd: Arc<RootDatum>, field: Field) -> Hecke {
        let d = rd.rank_y();
        let mut q = Vec::new();
        let mut zeta_uni = Vec::new();
        for s in 0..rd.rank() {
            let sg = rd.sigma(s).clone();
            let sp = rd.sigma_prime(s).clone();
            let a = &sg - &sg.inv().unwrap();
            let b = &sp - &sp.inv().unwrap();
            // Q_s(x) = (a + b x)/(1 − x²)
            let qn = c_uni(a).add(&x_uni(1).scale(&b));
            let qd = c_uni(Fe::one()).sub(&x_uni(2));
            let q_uni = RatFn::reduce(qn, qd).unwrap();
            // ζ_s = −σ_s Q_s + σ_s²
            let zeta = q_uni
                .scale(&-&sg)
                .add(&RatFn::constant(1, &sg * &sg));
            let menu = [
                (DenChoice::OneMinus, c_uni(Fe::one()).sub(&x_uni(1))),
                (DenChoice::OnePlus, c_uni(Fe::one()).add(&x_uni(1))),
                (DenChoice::OneMinusSquare, c_uni(Fe::one()).sub(&x_uni(2))),
            ];
            let (choice, den, num) = menu
                .into_iter()
                .find_map(|(ch, den)| {
                    let prod = zeta.mul(&RatFn::from(den.clone()));
                    prod.as_laurent().cloned().map(|n| (ch, den, n))
                })
                .expect("(1 − x²)·ζ is a polynomial");
            q.push(lift_rat(&q_uni, rd.coroot_y(s)));
            zeta_uni.push(ZetaUni { zeta, num, den, choice });
        }
        let gamma: Vec<Fe> = (0..rd.rank())
            .map(|s| rd.sigma(s) * rd.sigma_prime(s))
            .collect();
        let tau0 = Character::from_coroot_values(&rd, &gamma, &field);
        Hecke {
            rd,
            field,
            d,
            q,
            zeta_uni,
            zeta_cache: Mutex::new(HashMap::new()),
            f_cache: Mutex::new(HashMap::new()),
            b_cache: Mutex::new(HashMap::new()),
            tau0,
        }
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn root_datum_arc(&self) -> Arc<RootDatum> {
        self.rd.clone()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.d
    }

    /// Q_s(Z).
    pub fn q_s(&self, s: usize) -> &RatFn {
        &self.q[s]
    }

    /// σ_w along a reduced word.
    pub fn sigma_w(&self, w: &WeylElement) -> Fe {
        w.word()
            .iter()
            .fold(Fe::one(), |acc, &s| &acc * self.rd.sigma(s as usize))
    }

    // ----- constructors -------------------------------------------------

    pub fn h(&self, w: &WeylElement) -> HeckeElement {
        let mut e = HeckeElement::zero(Basis::H, self.d);
        e.add_term(w, &RatFn::one(self.d));
        e
    }

    pub fn h_simple(&self, s: usize) -> HeckeElement {
        self.h(&self.rd.simple_reflection(s))
    }

    /// θ viewed as H_1·θ.
    pub fn theta(&self, theta: &RatFn) -> HeckeElement {
        let mut e = HeckeElement::zero(Basis::H, self.d);
        e.add_term(&self.rd.identity(), theta);
        e
    }

    pub fn monomial(&self, lambda: &[i64]) -> HeckeElement {
        self.theta(&RatFn::monomial(lambda))
    }

    pub fn constant(&self, c: Fe) -> HeckeElement {
        self.theta(&RatFn::constant(self.d, c))
    }

    /// A single basis vector X_w in its own basis.
    pub fn basis_vector(&self, basis: Basis, w: &WeylElement) -> HeckeElement {
        let mut e = HeckeElement::zero(basis, self.d);
        e.add_term(w, &RatFn::one(self.d));
        e
    }

    /// T_w = σ_w H_w.
    pub fn t(&self, w: &WeylElement) -> HeckeElement {
        self.h(w).scale(&self.sigma_w(w))
    }

    /// F_s = B_s + ζ_s = σ_s(H_s − Q_s) in the H basis.
    pub fn f_simple(&self, s: usize) -> HeckeElement {
        let sg = self.rd.sigma(s);
        let mut e = HeckeElement::zero(Basis::H, self.d);
        e.add_term(&self.rd.simple_reflection(s), &RatFn::constant(self.d, sg.clone()));
        e.add_term(&self.rd.identity(), &self.q[s].scale(&-sg));
        e
    }

    /// F_w in the H basis, the product of the F_s along the canonical word.
    pub fn f(&self, w: &WeylElement) -> HeckeElement {
        if let Some(e) = self.f_cache.lock().unwrap().get(w) {
            return e.clone();
        }
        let out = if w.is_identity() {
            self.h(w)
        } else {
            let s = *w.word().last().unwrap() as usize;
            let prefix = self.rd.mul_simple(w, s);
            self.mul(&self.f(&prefix), &self.f_simple(s))
        };
        self.f_cache.lock().unwrap().insert(w.clone(), out.clone());
        out
    }

    /// F_{s₁}⋯F_{s_k} for an arbitrary word.
    pub fn f_word(&self, word: &[u8]) -> HeckeElement {
        word.iter().fold(self.h(&self.rd.identity()), |acc, &s| {
            self.mul(&acc, &self.f_simple(s as usize))
        })
    }

    /// The character with τ₀(α_s∨) = σ_sσ'_s, when the field contains it.
    pub fn tau0(&self) -> Result<&Character> {
        self.tau0.as_ref().map_err(|e| match e {
            Error::FieldTooSmall(m) => Error::FieldTooSmall(format!(
                "no character with tau0(alpha_s^vee) = sigma_s*sigma'_s: {m}"
            )),
            other => other.clone(),
        })
    }

    /// B_w = F_w(τ₀), an element with constant coefficients.
    pub fn b(&self, w: &WeylElement) -> Result<HeckeElement> {
        if let Some(e) = self.b_cache.lock().unwrap().get(w) {
            return Ok(e.clone());
        }
        let tau0 = self.tau0()?.clone();
        let out = self.ev_at(&self.f(w), &tau0)?;
        self.b_cache.lock().unwrap().insert(w.clone(), out.clone());
        Ok(out)
    }

    // ----- ζ --------------------------------------------------------------

    /// ζ data for a positive real coroot, lifted from the simple case along
    /// x ↦ Z^{−β}.
    pub fn zeta(&self, beta: &Coroot) -> Result<Arc<ZetaData>> {
        if let Some(z) = self.zeta_cache.lock().unwrap().get(beta) {
            return Ok(z.clone());
        }
        let s = self.rd.coroot_type(beta)?;
        let by = self.rd.coroot_to_y(&beta.0);
        let u = &self.zeta_uni[s];
        let data = Arc::new(ZetaData {
            coroot: beta.clone(),
            simple: s,
            zeta: lift_rat(&u.zeta, &by),
            num: RatFn::from(lift(&u.num, &by)),
            den: RatFn::from(lift(&u.den, &by)),
            choice: u.choice,
            sigma: self.rd.sigma(s).clone(),
            sigma_prime: self.rd.sigma_prime(s).clone(),
        });
        self.zeta_cache.lock().unwrap().insert(beta.clone(), data.clone());
        Ok(data)
    }

    pub fn zeta_simple(&self, s: usize) -> Arc<ZetaData> {
        let mut e = vec![0; self.rd.rank()];
        e[s] = 1;
        self.zeta(&Coroot(e)).expect("simple coroots are real")
    }

    /// τ(ζ^num_β), computed from the univariate numerator at τ(β)⁻¹.
    pub fn zeta_num_at(&self, beta: &Coroot, tau: &Character) -> Result<Fe> {
        let s = self.rd.coroot_type(beta)?;
        let v = tau.coroot_value(&self.rd, &beta.0).inv()?;
        Ok(self.zeta_uni[s].num.evaluate(&[v]))
    }

    /// τ(ζ^den_β).
    pub fn zeta_den_at(&self, beta: &Coroot, tau: &Character) -> Result<Fe> {
        let s = self.rd.coroot_type(beta)?;
        let v = tau.coroot_value(&self.rd, &beta.0).inv()?;
        Ok(self.zeta_uni[s].den.evaluate(&[v]))
    }

    /// The univariate numerator N_s(x) of ζ_s, x = Z^{−α_s∨}.
    pub fn zeta_num_uni(&self, s: usize) -> &Laurent {
        &self.zeta_uni[s].num
    }

    pub fn zeta_den_uni(&self, s: usize) -> &Laurent {
        &self.zeta_uni[s].den
    }

    /// ζ_w = Π_{β ∈ N(w)} ζ_β.
    pub fn zeta_w(&self, w: &WeylElement) -> Result<RatFn> {
        let mut acc = RatFn::one(self.d);
        for beta in self.rd.inversion_set(w) {
            acc = acc.mul(&self.zeta(&beta)?.zeta);
        }
        Ok(acc)
    }

    // ----- products -------------------------------------------------------

    /// a·H_s for a in the H basis.
    pub fn mul_h_s_right(&self, a: &HeckeElement, s: usize) -> HeckeElement {
        debug_assert_eq!(a.basis, Basis::H);
        let sref = self.rd.simple_reflection(s);
        let cs = {
            let sg = self.rd.sigma(s);
            RatFn::constant(self.d, sg - &sg.inv().unwrap())
        };
        let mut out = HeckeElement::zero(Basis::H, self.d);
        for (u, theta) in &a.terms {
            let ts = theta.weyl_act(&sref);
            let us = self.rd.mul_simple(u, s);
            if ts != *theta {
                out.add_term(u, &self.q[s].mul(&theta.sub(&ts)));
            }
            if u.has_right_descent(s) {
                out.add_term(u, &cs.mul(&ts));
            }
            out.add_term(&us, &ts);
        }
        out
    }

    /// H_s·a for a in the H basis.
    pub fn mul_h_s_left(&self, s: usize, a: &HeckeElement) -> HeckeElement {
        debug_assert_eq!(a.basis, Basis::H);
        let sg = self.rd.sigma(s);
        let cs = sg - &sg.inv().unwrap();
        let mut out = HeckeElement::zero(Basis::H, self.d);
        for (u, theta) in &a.terms {
            let su = self.rd.simple_mul(s, u);
            if u.has_left_descent(s) {
                out.add_term(u, &theta.scale(&cs));
            }
            out.add_term(&su, theta);
        }
        out
    }

    /// a·b, returned in the H basis.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let a = self.to_h(a);
        let b = self.to_h(b);
        let mut memo: HashMap<WeylElement, HeckeElement> = HashMap::new();
        memo.insert(self.rd.identity(), a.clone());
        let mut out = HeckeElement::zero(Basis::H, self.d);
        for (w, phi) in &b.terms {
            let aw = self.mul_by_h(&mut memo, w);
            out = out.add(&aw.mul_coeff(phi));
        }
        out
    }

    fn mul_by_h(&self, memo: &mut HashMap<WeylElement, HeckeElement>, w: &WeylElement) -> HeckeElement {
        if let Some(e) = memo.get(w) {
            return e.clone();
        }
        let s = *w.word().last().unwrap() as usize;
        let prefix = self.rd.mul_simple(w, s);
        let p = self.mul_by_h(memo, &prefix);
        let out = self.mul_h_s_right(&p, s);
        memo.insert(w.clone(), out.clone());
        out
    }

    pub fn mul_all(&self, factors: &[HeckeElement]) -> HeckeElement {
        factors
            .iter()
            .fold(self.h(&self.rd.identity()), |acc, f| self.mul(&acc, f))
    }

    // ----- bases ----------------------------------------------------------

    /// X_w expanded in the H basis.
    pub fn basis_in_h(&self, basis: Basis, w: &WeylElement) -> Result<HeckeElement> {
        match basis {
            Basis::H => Ok(self.h(w)),
            Basis::T => Ok(self.t(w)),
            Basis::F => Ok(self.f(w)),
            Basis::B => self.b(w),
        }
    }

    /// The same element written in the H basis.
    pub fn to_h(&self, a: &HeckeElement) -> HeckeElement {
        if a.basis == Basis::H {
            return a.clone();
        }
        let mut out = HeckeElement::zero(Basis::H, self.d);
        for (w, theta) in &a.terms {
            let xw = self
                .basis_in_h(a.basis, w)
                .expect("basis vectors of an existing element are available");
            out = out.add(&xw.mul_coeff(theta));
        }
        out
    }

    /// Change of basis; triangular with leading coefficient σ_w.
    pub fn convert(&self, a: &HeckeElement, target: Basis) -> Result<HeckeElement> {
        let mut rest = self.to_h(a);
        if target == Basis::H {
            return Ok(rest);
        }
        let mut out = HeckeElement::zero(target, self.d);
        while let Some((w, theta)) = rest.terms.iter().next_back().map(|(w, t)| (w.clone(), t.clone())) {
            let xw = self.basis_in_h(target, &w)?;
            let c = theta.scale(&self.sigma_w(&w).inv()?);
            rest = rest.sub(&xw.mul_coeff(&c));
            if rest.terms.contains_key(&w) {
                return Err(Error::Assertion(format!(
                    "{target:?}_{w} is not unitriangular over T_{w}"
                )));
            }
            out.add_term(&w, &c);
        }
        Ok(out)
    }

    /// Coefficientwise evaluation at τ; the result has constant coefficients
    /// and keeps the basis tag.
    pub fn ev_at(&self, a: &HeckeElement, tau: &Character) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero(a.basis, self.d);
        for (w, theta) in &a.terms {
            let v = theta.evaluate(tau.values()).map_err(|_| {
                Error::Singular(format!(
                    "coefficient of {:?}[{w}] is {theta}, not regular at {tau}",
                    a.basis
                ))
            })?;
            out.add_term(w, &RatFn::constant(self.d, v));
        }
        Ok(out)
    }

    /// Evaluated coefficients as field scalars, in the element's own basis.
    pub fn ev_coeffs(&self, a: &HeckeElement, tau: &Character) -> Result<BTreeMap<WeylElement, Fe>> {
        let e = self.ev_at(a, tau)?;
        Ok(e.terms
            .iter()
            .map(|(w, c)| (w.clone(), c.as_constant().unwrap()))
            .collect())
    }

    /// True when every coefficient is a Laurent polynomial supported on Y ∩ 𝒯.
    pub fn in_iwahori_hecke(&self, a: &HeckeElement) -> bool {
        let a = self.to_h(a);
        a.terms.values().all(|c| {
            let Some(p) = c.as_laurent() else { return false };
            p.support().iter().all(|lam| {
                let x: Vec<num_rational::BigRational> = lam
                    .iter()
                    .map(|&e| num_rational::BigRational::from_integer(e.into()))
                    .collect();
                matches!(self.rd.to_dominant(&x, None), crate::coxeter::Dominance::Decided { .. })
            })
        })
    }

    // ----- identities ------------------------------------------------------

    /// θ·H_w − H_w·θ^{w⁻¹}; errors unless supported strictly below w.
    pub fn commutator_defect(&self, theta: &RatFn, w: &WeylElement) -> Result<HeckeElement> {
        let winv = self.rd.inverse(w);
        let lhs = self.mul(&self.theta(theta), &self.h(w));
        let rhs = self.h(w).mul_coeff(&theta.weyl_act(&winv));
        let defect = lhs.sub(&rhs);
        for v in defect.terms.keys() {
            if v == w || !self.rd.bruhat_leq(v, w) {
                return Err(Error::Assertion(format!(
                    "commutator of {theta} with H_{w} has {v} in its support"
                )));
            }
        }
        Ok(defect)
    }

    /// θ·F_w = F_w·θ^{w⁻¹}.
    pub fn intertwine_check(&self, theta: &RatFn, w: &WeylElement) -> bool {
        let fw = self.f(w);
        let winv = self.rd.inverse(w);
        let lhs = self.mul(&self.theta(theta), &fw);
        let rhs = fw.mul_coeff(&theta.weyl_act(&winv));
        lhs == rhs
    }

    /// F_s·F_s, which must be the scalar ζ_s·ζ_s^s.
    pub fn f_square(&self, s: usize) -> Result<RatFn> {
        let fs = self.f_simple(s);
        let sq = self.mul(&fs, &fs);
        let one = self.rd.identity();
        if sq.terms.keys().any(|w| *w != one) {
            return Err(Error::Assertion(format!("F_s{}^2 is not a scalar: {sq}", s + 1)));
        }
        let value = sq.coeff(&one);
        let z = &self.zeta_simple(s).zeta;
        let expect = z.mul(&z.weyl_act(&self.rd.simple_reflection(s)));
        if value != expect {
            return Err(Error::Assertion(format!(
                "F_s{}^2 = {value} differs from zeta_s zeta_s^s = {expect}",
                s + 1
            )));
        }
        Ok(value)
    }

    /// K_r = F_r − ζ_{α_r∨} for a reflection r.
    pub fn k_reflection(&self, r: &WeylElement) -> Result<HeckeElement> {
        let beta = self.rd.coroot_of_reflection(r)?;
        let z = self.zeta(&beta)?;
        let mut k = self.f(r);
        k.add_term(&self.rd.identity(), &z.zeta.neg());
        Ok(k)
    }

    /// K_{r₁}⋯K_{r_k}.
    pub fn k_word(&self, reflections: &[WeylElement]) -> Result<HeckeElement> {
        let mut acc = self.h(&self.rd.identity());
        for r in reflections {
            acc = self.mul(&acc, &self.k_reflection(r)?);
        }
        Ok(acc)
    }

    /// θ·K_r − K_r·θ^r = (θ^r − θ)·ζ_r.
    pub fn k_commutation_check(&self, theta: &RatFn, r: &WeylElement) -> Result<bool> {
        let k = self.k_reflection(r)?;
        let beta = self.rd.coroot_of_reflection(r)?;
        let z = self.zeta(&beta)?;
        let tr = theta.weyl_act(r);
        let lhs = self.mul(&self.theta(theta), &k).sub(&k.mul_coeff(&tr));
        let rhs = self.theta(&tr.sub(theta).mul(&z.zeta));
        Ok(lhs == rhs)
    }

    /// P_{v,w,λ}: Z^λ·T_w = Σ_v T_v·P_{v,w,λ}. Every coefficient must be a
    /// Laurent polynomial.
    pub fn p_expansion(&self, lambda: &[i64], w: &WeylElement) -> Result<BTreeMap<WeylElement, Laurent>> {
        let prod = self.mul(&self.monomial(lambda), &self.t(w));
        let in_t = self.convert(&prod, Basis::T)?;
        let mut out = BTreeMap::new();
        for (v, c) in in_t.terms() {
            let p = c.as_laurent().ok_or_else(|| {
                Error::Assertion(format!("P_{{{v},{w}}} = {c} is not a Laurent polynomial"))
            })?;
            out.insert(v.clone(), p.clone());
        }
        Ok(out)
    }

    /// Q_{v,w,λ} for v ∈ [1, w] by decreasing recursion, λ dominant regular.
    pub fn q_recursion(&self, lambda: &[i64], w: &WeylElement) -> Result<BTreeMap<WeylElement, RatFn>> {
        for i in 0..self.rd.rank() {
            if self.rd.alpha_y(i, lambda) <= 0 {
                return Err(Error::NotDominant(format!(
                    "alpha_{}({lambda:?}) = {} is not positive",
                    i + 1,
                    self.rd.alpha_y(i, lambda)
                )));
            }
        }
        let interval = self.rd.lower_interval(w);
        let mut p: HashMap<WeylElement, BTreeMap<WeylElement, Laurent>> = HashMap::new();
        for u in &interval {
            p.insert(u.clone(), self.p_expansion(lambda, u)?);
        }
        let winv = self.rd.inverse(w);
        let top = Laurent::monomial(&winv.act_y(lambda));
        let mut q: BTreeMap<WeylElement, RatFn> = BTreeMap::new();
        q.insert(w.clone(), RatFn::one(self.d));
        for v in interval.iter().rev().filter(|v| *v != w) {
            let mut acc = RatFn::zero(self.d);
            for (u, qu) in &q {
                if let Some(pv) = p[u].get(v) {
                    acc = acc.add(&qu.mul(&RatFn::from(pv.clone())));
                }
            }
            let vinv = self.rd.inverse(v);
            let den = top.sub(&Laurent::monomial(&vinv.act_y(lambda)));
            let val = acc.mul(&RatFn::reduce(Laurent::one(self.d), den)?);
            q.insert(v.clone(), val);
        }
        q.retain(|_, c| !c.is_zero());
        Ok(q)
    }

    /// T-basis coefficients of F_w.
    pub fn f_in_t(&self, w: &WeylElement) -> Result<BTreeMap<WeylElement, RatFn>> {
        let e = self.convert(&self.f(w), Basis::T)?;
        Ok(e.terms.into_iter().collect())
    }

    /// π^B_1(F_w), which equals ζ_w.
    pub fn f_constant_term_b(&self, w: &WeylElement) -> Result<RatFn> {
        Ok(self.convert(&self.f(w), Basis::B)?.coeff(&self.rd.identity()))
    }

    /// Solves F_{w₁}·F_{w₂} = F_{w₁w₂}·P for the scalar P and verifies it.
    pub fn f_product_scalar(&self, w1: &WeylElement, w2: &WeylElement) -> Result<RatFn> {
        let prod = self.mul(&self.f(w1), &self.f(w2));
        let w = self.rd.mul(w1, w2);
        let in_t = self.convert(&prod, Basis::T)?;
        let p = in_t.coeff(&w);
        let expect = self.f(&w).mul_coeff(&p);
        if expect != prod {
            return Err(Error::Assertion(format!(
                "F_{w1} F_{w2} is not a right multiple of F_{w}"
            )));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> Hecke {
        let rd = RootDatum::new(
            vec![vec![2, -2], vec![-4, 2]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![2, -2], vec![-4, 2]],
            vec![Fe::int(2), Fe::int(2)],
            vec![Fe::int(2), Fe::int(2)],
        )
        .unwrap();
        Hecke::new(Arc::new(rd), Field::rationals())
    }

    #[test]
    fn quadratic_relation() {
        let h = f1();
        let hs = h.h_simple(0);
        let sq = h.mul(&hs, &hs);
        let expect = hs.scale(&Fe::ratio(3, 2)).add(&h.constant(Fe::one()));
        assert_eq!(sq, expect);
    }

    #[test]
    fn equal_parameter_zeta() {
        let h = f1();
        let z = h.zeta_simple(0);
        assert_eq!(z.choice, DenChoice::OneMinus);
        let x = Laurent::monomial(&[-2, 2]);
        let one = Laurent::one(2);
        let expect = RatFn::reduce(one.sub(&x.scale(&Fe::int(4))), one.sub(&x)).unwrap();
        assert_eq!(z.zeta, expect);
    }

    #[test]
    fn f_square_and_intertwining() {
        let h = f1();
        let v = h.f_square(0).unwrap();
        let tau = Character::new(vec![Fe::one(), Fe::ratio(1, 2)]).unwrap();
        // τ(α₁∨) = 1·4 = 4 would vanish; here τ(α₁∨) = (1/2)^{-2} = 4 too
        assert!(v.evaluate(tau.values()).unwrap().is_zero());
        let w = h.root_datum().from_word(&[0, 1]);
        assert!(h.intertwine_check(&RatFn::monomial(&[0, 1]), &w));
    }

    #[test]
    fn tau0_is_rational_in_f1() {
        let h = f1();
        let t = h.tau0().unwrap();
        assert_eq!(t.values(), &[Fe::ratio(1, 4), Fe::ratio(1, 8)]);
        let s = h.root_datum().simple_reflection(0);
        let bs = h.b(&s).unwrap();
        let expect = h.t(&s).sub(&h.constant(Fe::int(4)));
        assert_eq!(bs, expect);
    }
}
