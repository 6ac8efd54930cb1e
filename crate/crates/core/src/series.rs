//! Principal series I_τ with basis (H_w ⊗_τ 1), truncated to elements of
//! length at most L.
//!
//! Z^λ acts through the recursion
//! Z^λ·(H_{sv}⊗1) = H_s·(Z^{s.λ}·(H_v⊗1)) + (Q_s(Z^λ − Z^{s.λ}))·(H_v⊗1),
//! whose correction term is a Laurent polynomial, so only polynomial data is
//! ever evaluated at τ. The span of any Bruhat-lower set of basis vectors is
//! stable under 𝔽[Y], so weight spaces computed on such a set are exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::coxeter::WeylElement;
use crate::error::{Error, Result};
use crate::hecke::{Hecke, HeckeElement};
use crate::laurent::{Character, Laurent, RatFn};
use crate::linalg::{self, Matrix};
use crate::scalars::Fe;

/// Σ x_w·(H_w ⊗ 1); zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SeriesVector {
    coords: BTreeMap<WeylElement, Fe>,
}

impl SeriesVector {
    pub fn zero() -> SeriesVector {
        SeriesVector::default()
    }

    pub fn basis(w: &WeylElement) -> SeriesVector {
        let mut v = SeriesVector::zero();
        v.add_term(w, &Fe::one());
        v
    }

    pub fn from_map(m: BTreeMap<WeylElement, Fe>) -> SeriesVector {
        let mut v = SeriesVector::zero();
        for (w, c) in m {
            v.add_term(&w, &c);
        }
        v
    }

    pub fn add_term(&mut self, w: &WeylElement, c: &Fe) {
        if c.is_zero() {
            return;
        }
        match self.coords.get_mut(w) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.coords.remove(w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.coords.insert(w.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, o: &SeriesVector) -> SeriesVector {
        let mut out = self.clone();
        for (w, c) in &o.coords {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, o: &SeriesVector) -> SeriesVector {
        self.add(&o.scale(&Fe::int(-1)))
    }

    pub fn scale(&self, k: &Fe) -> SeriesVector {
        if k.is_zero() {
            return SeriesVector::zero();
        }
        SeriesVector {
            coords: self.coords.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, w: &WeylElement) -> Fe {
        self.coords.get(w).cloned().unwrap_or_else(Fe::zero)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&WeylElement, &Fe)> {
        self.coords.iter()
    }

    pub fn support(&self) -> Vec<WeylElement> {
        self.coords.keys().cloned().collect()
    }

    /// Largest length in the support; 0 for the zero vector.
    pub fn max_len(&self) -> usize {
        self.coords.keys().map(WeylElement::len).max().unwrap_or(0)
    }

    /// Bruhat-maximal elements of the support.
    pub fn max_support(&self, rd: &crate::coxeter::RootDatum) -> Vec<WeylElement> {
        let supp = self.support();
        supp.iter()
            .filter(|v| !supp.iter().any(|u| u != *v && rd.bruhat_leq(v, u)))
            .cloned()
            .collect()
    }

    /// Coordinates in the order of `basis`.
    pub fn to_column(&self, basis: &[WeylElement]) -> Vec<Fe> {
        basis.iter().map(|w| self.coeff(w)).collect()
    }

    pub fn from_column(basis: &[WeylElement], col: &[Fe]) -> SeriesVector {
        let mut v = SeriesVector::zero();
        for (w, c) in basis.iter().zip(col) {
            v.add_term(w, c);
        }
        v
    }
}

impl fmt::Display for SeriesVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coords.iter().map(|(w, c)| format!("({c})·H[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SeriesVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// I_τ restricted to the length-L ball.
pub struct PrincipalSeries {
    hecke: Arc<Hecke>,
    tau: Character,
    l: usize,
    z_cache: Mutex<HashMap<(Vec<i64>, WeylElement), SeriesVector>>,
    p_cache: Mutex<HashMap<(usize, Vec<i64>), Laurent>>,
}

impl PrincipalSeries {
    pub fn new(hecke: Arc<Hecke>, tau: Character, l: usize) -> PrincipalSeries {
        PrincipalSeries {
            hecke,
            tau,
            l,
            z_cache: Mutex::new(HashMap::new()),
            p_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    pub fn tau(&self) -> &Character {
        &self.tau
    }

    pub fn truncation(&self) -> usize {
        self.l
    }

    pub fn ball(&self) -> Vec<WeylElement> {
        self.hecke.root_datum().bruhat_ball(self.l)
    }

    /// The same character with a different truncation.
    pub fn with_truncation(&self, l: usize) -> PrincipalSeries {
        PrincipalSeries::new(self.hecke.clone(), self.tau.clone(), l)
    }

    /// 1 ⊗_τ 1.
    pub fn one(&self) -> SeriesVector {
        SeriesVector::basis(&self.hecke.root_datum().identity())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.l {
            return Err(Error::Truncation { needed: n, have: self.l });
        }
        Ok(())
    }

    /// H_s·x.
    pub fn act_h_s(&self, s: usize, x: &SeriesVector) -> Result<SeriesVector> {
        let rd = self.hecke.root_datum();
        let sg = rd.sigma(s);
        let cs = sg - &sg.inv()?;
        let mut out = SeriesVector::zero();
        for (u, c) in &x.coords {
            let su = rd.simple_mul(s, u);
            self.check_len(su.len())?;
            if u.has_left_descent(s) {
                out.add_term(u, &(c * &cs));
            }
            out.add_term(&su, c);
        }
        Ok(out)
    }

    /// H_w·x, applying the letters of w from the right.
    pub fn act_h_w(&self, w: &WeylElement, x: &SeriesVector) -> Result<SeriesVector> {
        let mut y = x.clone();
        for &s in w.word().iter().rev() {
            y = self.act_h_s(s as usize, &y)?;
        }
        Ok(y)
    }

    fn correction(&self, s: usize, lambda: &[i64]) -> Laurent {
        let key = (s, lambda.to_vec());
        if let Some(p) = self.p_cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let rd = self.hecke.root_datum();
        let sl = rd.simple_reflection(s).act_y(lambda);
        let diff = RatFn::monomial(lambda).sub(&RatFn::monomial(&sl));
        let p = self
            .hecke
            .q_s(s)
            .mul(&diff)
            .as_laurent()
            .cloned()
            .expect("Q_s(Z^λ − Z^{s.λ}) is a Laurent polynomial");
        self.p_cache.lock().unwrap().insert(key, p.clone());
        p
    }

    /// Z^λ·(H_v ⊗ 1).
    pub fn z_on_basis(&self, lambda: &[i64], v: &WeylElement) -> Result<SeriesVector> {
        let key = (lambda.to_vec(), v.clone());
        if let Some(x) = self.z_cache.lock().unwrap().get(&key) {
            return Ok(x.clone());
        }
        self.check_len(v.len())?;
        let out = if v.is_identity() {
            SeriesVector::basis(v).scale(&self.tau.value(lambda))
        } else {
            let rd = self.hecke.root_datum();
            let s = v.word()[0] as usize;
            let rest = rd.simple_mul(s, v);
            let sl = rd.simple_reflection(s).act_y(lambda);
            let mut out = self.act_h_s(s, &self.z_on_basis(&sl, &rest)?)?;
            for (m, c) in self.correction(s, lambda).terms() {
                let mu: Vec<i64> = m.0.iter().map(|&e| i64::from(e)).collect();
                out = out.add(&self.z_on_basis(&mu, &rest)?.scale(c));
            }
            out
        };
        self.z_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Z^λ·x.
    pub fn act_z(&self, lambda: &[i64], x: &SeriesVector) -> Result<SeriesVector> {
        let mut out = SeriesVector::zero();
        for (v, c) in &x.coords {
            out = out.add(&self.z_on_basis(lambda, v)?.scale(c));
        }
        Ok(out)
    }

    /// θ·x for a Laurent polynomial θ.
    pub fn act_laurent(&self, theta: &Laurent, x: &SeriesVector) -> Result<SeriesVector> {
        let mut out = SeriesVector::zero();
        for (m, c) in theta.terms() {
            let mu: Vec<i64> = m.0.iter().map(|&e| i64::from(e)).collect();
            out = out.add(&self.act_z(&mu, x)?.scale(c));
        }
        Ok(out)
    }

    /// h·x for h with Laurent coefficients: Σ H_w θ_w acts as H_w after θ_w.
    pub fn act(&self, h: &HeckeElement, x: &SeriesVector) -> Result<SeriesVector> {
        let h = self.hecke.to_h(h);
        let mut out = SeriesVector::zero();
        for (w, theta) in h.terms() {
            let p = theta.as_laurent().ok_or_else(|| {
                Error::Hypothesis(format!("coefficient {theta} of H[{w}] is not a Laurent polynomial"))
            })?;
            let y = self.act_laurent(p, x)?;
            out = out.add(&self.act_h_w(w, &y)?);
        }
        Ok(out)
    }

    /// h·x through the symbolic product h·H_v and evaluation at τ; the
    /// independent route for `act`.
    pub fn act_symbolic(&self, h: &HeckeElement, x: &SeriesVector) -> Result<SeriesVector> {
        let mut out = SeriesVector::zero();
        for (v, c) in &x.coords {
            let prod = self.hecke.mul(h, &self.hecke.h(v));
            for (u, theta) in prod.terms() {
                self.check_len(u.len())?;
                let p = theta.as_laurent().ok_or_else(|| {
                    Error::Hypothesis(format!("coefficient {theta} of H[{u}] is not a Laurent polynomial"))
                })?;
                out.add_term(u, &(&p.evaluate(self.tau.values()) * c));
            }
        }
        Ok(out)
    }

    /// ev_τ(h) ⊗_τ 1, for h with coefficients regular at τ.
    pub fn ev_vector(&self, h: &HeckeElement) -> Result<SeriesVector> {
        let h = self.hecke.to_h(h);
        let coeffs = self.hecke.ev_coeffs(&h, &self.tau)?;
        for w in coeffs.keys() {
            self.check_len(w.len())?;
        }
        Ok(SeriesVector::from_map(coeffs))
    }

    /// Matrix of Z^λ on the span of `basis`, which must be Bruhat-lower closed.
    pub fn z_matrix(&self, lambda: &[i64], basis: &[WeylElement]) -> Result<Matrix> {
        let n = basis.len();
        let index: HashMap<&WeylElement, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = vec![vec![Fe::zero(); n]; n];
        for (j, v) in basis.iter().enumerate() {
            for (u, c) in &self.z_on_basis(lambda, v)?.coords {
                let i = *index.get(u).ok_or_else(|| {
                    Error::Assertion(format!("Z^{lambda:?} H[{v}] leaves the span through H[{u}]"))
                })?;
                m[i][j] = c.clone();
            }
        }
        Ok(m)
    }

    fn basis_vectors(&self, d: usize) -> Vec<Vec<i64>> {
        (0..d)
            .map(|j| (0..d).map(|k| i64::from(j == k)).collect())
            .collect()
    }

    /// Stacked (Z^{y_j} − χ(y_j))^power on the span of `basis`.
    fn stacked(&self, chi: &Character, basis: &[WeylElement], power: usize) -> Result<Matrix> {
        let n = basis.len();
        let mut rows = Vec::new();
        for (j, y) in self.basis_vectors(self.hecke.nvars()).iter().enumerate() {
            let mut m = self.z_matrix(y, basis)?;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = &row[i] - &chi.values()[j];
            }
            let mut p = linalg::identity(n);
            for _ in 0..power {
                p = linalg::mat_mul(&p, &m);
            }
            rows.extend(p);
        }
        Ok(rows)
    }

    /// Basis of the χ-weight space of the span of `basis` (Bruhat-lower closed).
    pub fn weight_space_on(&self, chi: &Character, basis: &[WeylElement]) -> Result<Vec<SeriesVector>> {
        let m = self.stacked(chi, basis, 1)?;
        Ok(linalg::kernel(&m, basis.len())
            .iter()
            .map(|c| SeriesVector::from_column(basis, c))
            .collect())
    }

    /// Basis of the generalized χ-weight space of the span of `basis`.
    pub fn generalized_weight_space_on(
        &self,
        chi: &Character,
        basis: &[WeylElement],
    ) -> Result<Vec<SeriesVector>> {
        let m = self.stacked(chi, basis, basis.len().max(1))?;
        Ok(linalg::kernel(&m, basis.len())
            .iter()
            .map(|c| SeriesVector::from_column(basis, c))
            .collect())
    }

    /// I_τ(χ) ∩ I_τ^{≤w}.
    pub fn weight_space(&self, chi: &Character, w: &WeylElement) -> Result<Vec<SeriesVector>> {
        self.check_len(w.len())?;
        self.weight_space_on(chi, &self.hecke.root_datum().lower_interval(w))
    }

    /// I_τ(χ, gen) ∩ I_τ^{≤w}.
    pub fn generalized_weight_space(&self, chi: &Character, w: &WeylElement) -> Result<Vec<SeriesVector>> {
        self.check_len(w.len())?;
        self.generalized_weight_space_on(chi, &self.hecke.root_datum().lower_interval(w))
    }

    /// True when Z^{y_j}·x = χ(y_j)·x for every j.
    pub fn is_weight_vector(&self, chi: &Character, x: &SeriesVector) -> Result<bool> {
        for (j, y) in self.basis_vectors(self.hecke.nvars()).iter().enumerate() {
            if self.act_z(y, x)? != x.scale(&chi.values()[j]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when every (Z^{y_j} − χ(y_j)) is nilpotent on x.
    pub fn is_generalized_weight_vector(&self, chi: &Character, x: &SeriesVector) -> Result<bool> {
        let cap = self.ball().len() + 1;
        for (j, y) in self.basis_vectors(self.hecke.nvars()).iter().enumerate() {
            let mut v = x.clone();
            let mut k = 0;
            while !v.is_zero() {
                if k == cap {
                    return Ok(false);
                }
                v = self.act_z(y, &v)?.sub(&v.scale(&chi.values()[j]));
                k += 1;
            }
        }
        Ok(true)
    }

    /// ξ_w ∈ I_τ^{≤w}(w.τ, gen) with coefficient 1 at H_w.
    pub fn xi(&self, w: &WeylElement) -> Result<SeriesVector> {
        let rd = self.hecke.root_datum();
        let chi = self.tau.act(rd, w);
        let space = self.generalized_weight_space(&chi, w)?;
        let x = space
            .iter()
            .find(|x| !x.coeff(w).is_zero())
            .ok_or_else(|| Error::Assertion(format!("no generalized weight vector reaches H[{w}]")))?;
        let x = x.scale(&x.coeff(w).inv()?);
        let minimal = rd
            .lower_interval(w)
            .iter()
            .all(|v| v == w || self.tau.act(rd, v) != chi);
        if minimal && !self.is_weight_vector(&chi, &x)? {
            return Err(Error::Assertion(format!(
                "xi_{w} is not an honest weight vector although {w} is minimal"
            )));
        }
        Ok(x)
    }

    /// Υ_x : I_source → self for a source-character weight vector x of self.
    pub fn upsilon(&self, source: &Character, x: SeriesVector) -> Result<Upsilon<'_>> {
        if !self.is_weight_vector(source, &x)? {
            return Err(Error::NotWeightVector(format!("{x} is not a {source}-weight vector")));
        }
        Ok(Upsilon { target: self, x })
    }

    /// The scalar c with φ(s.τ,τ)∘φ(τ,s.τ) = c·Id on basis vectors of length
    /// at most L − 1, checked against τ(ζ_sζ_s^s).
    pub fn phi_composition(&self, s: usize) -> Result<Fe> {
        let rd = self.hecke.root_datum();
        let sref = rd.simple_reflection(s);
        let alpha = {
            let mut e = vec![0; rd.rank()];
            e[s] = 1;
            crate::coxeter::Coroot(e)
        };
        let stau = self.tau.act(rd, &sref);
        let d1 = self.hecke.zeta_den_at(&alpha, &self.tau)?;
        let d2 = self.hecke.zeta_den_at(&alpha, &stau)?;
        if (&d1 * &d2).is_zero() {
            return Err(Error::Hypothesis(format!(
                "zeta^den of s{} vanishes at tau or s.tau",
                s + 1
            )));
        }
        // the composite passes through vectors one step longer than its input
        let big = self.l + 1;
        let here = self.with_truncation(big);
        let there = PrincipalSeries::new(self.hecke.clone(), stau.clone(), big);
        let fs = self.hecke.f_simple(s);
        let x1 = there.ev_vector(&fs)?;
        let x2 = here.ev_vector(&fs)?;
        let phi1 = there.upsilon(&self.tau, x1)?;
        let phi2 = here.upsilon(&stau, x2)?;
        let z = &self.hecke.zeta_simple(s).zeta;
        let expect = z.mul(&z.weyl_act(&sref)).evaluate(self.tau.values())?;
        let mut scalar: Option<Fe> = None;
        for v in rd.bruhat_ball(self.l.saturating_sub(1)) {
            let e = SeriesVector::basis(&v);
            let img = phi2.apply(&phi1.apply(&e)?)?;
            let c = img.coeff(&v);
            if img != e.scale(&c) {
                return Err(Error::Assertion(format!("composite is not scalar on H[{v}]: {img}")));
            }
            match &scalar {
                Some(prev) if *prev != c => {
                    return Err(Error::Assertion(format!("composite scalar changes at H[{v}]")));
                }
                _ => scalar = Some(c),
            }
        }
        let scalar = scalar.unwrap_or(expect.clone());
        if scalar != expect {
            return Err(Error::Assertion(format!(
                "composite scalar {scalar} differs from tau(zeta_s zeta_s^s) = {expect}"
            )));
        }
        Ok(scalar)
    }

    /// ev_τ(K_{w̲}) ⊗ 1 for each (w, reflection word of w), checked to be
    /// generalized τ-weight vectors with max support {w}.
    pub fn k_weight_basis(&self, words: &[(WeylElement, Vec<WeylElement>)]) -> Result<Vec<SeriesVector>> {
        let rd = self.hecke.root_datum();
        let mut out = Vec::with_capacity(words.len());
        for (w, refl) in words {
            let k = self.hecke.k_word(refl)?;
            let v = self.ev_vector(&k).map_err(|e| match e {
                Error::Singular(m) => Error::Assertion(format!("K for {w} is not regular at tau: {m}")),
                other => other,
            })?;
            if v.max_support(rd) != vec![w.clone()] {
                return Err(Error::Assertion(format!("max supp of K({w})(tau) is not {{{w}}}: {v}")));
            }
            if !self.is_generalized_weight_vector(&self.tau, &v)? {
                return Err(Error::Assertion(format!("K({w})(tau) is not a generalized tau-weight vector")));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// π^K_w: the coordinate of x along the K-vector of w.
    pub fn pi_k(&self, x: &SeriesVector, kbasis: &[(WeylElement, SeriesVector)], w: &WeylElement) -> Result<Fe> {
        let idx = kbasis
            .iter()
            .position(|(v, _)| v == w)
            .ok_or_else(|| Error::OutsideSpan(format!("{w} has no K-vector")))?;
        let mut rows: Vec<WeylElement> = kbasis.iter().flat_map(|(_, k)| k.support()).collect();
        rows.extend(x.support());
        rows.sort();
        rows.dedup();
        let m: Matrix = rows
            .iter()
            .map(|u| kbasis.iter().map(|(_, k)| k.coeff(u)).collect())
            .collect();
        let sol = linalg::solve(&m, kbasis.len(), &x.to_column(&rows))
            .ok_or_else(|| Error::OutsideSpan(format!("{x} is not in the span of the K-vectors")))?;
        Ok(sol[idx].clone())
    }

    /// Applies H_s with sw > w for a maximal-length support element w, `steps`
    /// times, and returns the successive maximal support lengths.
    pub fn growth_probe(&self, x: &SeriesVector, steps: usize) -> Result<Vec<usize>> {
        if x.is_zero() {
            return Err(Error::Hypothesis("growth probe needs a nonzero vector".into()));
        }
        let rd = self.hecke.root_datum();
        let mut v = x.clone();
        let mut lens = vec![v.max_len()];
        for _ in 0..steps {
            let top = v.coords.keys().rev().find(|w| w.len() == v.max_len()).unwrap().clone();
            let s = (0..rd.rank())
                .find(|&s| !top.has_left_descent(s))
                .ok_or_else(|| Error::Assertion(format!("{top} has every simple reflection as a left descent")))?;
            v = self.act_h_s(s, &v)?;
            let n = v.max_len();
            if n <= *lens.last().unwrap() {
                return Err(Error::Assertion(format!("max support length did not grow past {n}")));
            }
            lens.push(n);
        }
        Ok(lens)
    }
}

/// The module map Υ_x : H_w ⊗ 1 ↦ H_w·x.
pub struct Upsilon<'a> {
    target: &'a PrincipalSeries,
    x: SeriesVector,
}

impl Upsilon<'_> {
    pub fn vector(&self) -> &SeriesVector {
        &self.x
    }

    pub fn apply(&self, v: &SeriesVector) -> Result<SeriesVector> {
        let mut out = SeriesVector::zero();
        for (w, c) in &v.coords {
            out = out.add(&self.target.act_h_w(w, &self.x)?.scale(c));
        }
        Ok(out)
    }
}
