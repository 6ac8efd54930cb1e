//! Root generating systems, the Weyl group acting on the coroot lattice,
//! Bruhat order, inversion sets, real coroots and Tits-cone dominance.
//!
//! Conventions used throughout the crate:
//!
//! * `pairing[i][j] = α_i(y_j)` for the chosen basis `(y_j)` of Y;
//! * `coroots[i]` holds the coordinates of `α_i∨` in that basis;
//! * a Weyl element carries its matrix on Q∨ in the `(α_i∨)` basis and its
//!   matrix on Y, together with their inverses;
//! * elements are identified by their lexicographically smallest reduced
//!   word, which is a function of the Q∨ matrix alone.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::Fe;

type IMat = Vec<Vec<i64>>;

struct WInner {
    word: Vec<u8>,
    q: IMat,
    qinv: IMat,
    y: IMat,
    yinv: IMat,
}

/// An element of W^v.
#[derive(Clone)]
pub struct WeylElement(Arc<WInner>);

impl WeylElement {
    /// The lexicographically smallest reduced word, letters 0-based.
    pub fn word(&self) -> &[u8] {
        &self.0.word
    }

    pub fn len(&self) -> usize {
        self.0.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.word.is_empty()
    }

    /// Matrix on Q∨ in the simple-coroot basis: column j is w.α_j∨.
    pub fn coroot_matrix(&self) -> &[Vec<i64>] {
        &self.0.q
    }

    pub fn coroot_matrix_inv(&self) -> &[Vec<i64>] {
        &self.0.qinv
    }

    /// Matrix on Y in the (y_j) basis: column j is w.y_j.
    pub fn y_matrix(&self) -> &[Vec<i64>] {
        &self.0.y
    }

    pub fn y_matrix_inv(&self) -> &[Vec<i64>] {
        &self.0.yinv
    }

    /// w.λ for λ ∈ Y.
    pub fn act_y(&self, lambda: &[i64]) -> Vec<i64> {
        mat_vec_i(&self.0.y, lambda)
    }

    /// w⁻¹.λ for λ ∈ Y.
    pub fn act_y_inv(&self, lambda: &[i64]) -> Vec<i64> {
        mat_vec_i(&self.0.yinv, lambda)
    }

    /// w.β for β in simple-coroot coordinates.
    pub fn act_coroot(&self, beta: &[i64]) -> Vec<i64> {
        mat_vec_i(&self.0.q, beta)
    }

    pub fn act_coroot_inv(&self, beta: &[i64]) -> Vec<i64> {
        mat_vec_i(&self.0.qinv, beta)
    }

    /// True when ℓ(ws) < ℓ(w).
    pub fn has_right_descent(&self, s: usize) -> bool {
        self.0.q.iter().any(|row| row[s] < 0)
    }

    /// True when ℓ(sw) < ℓ(w).
    pub fn has_left_descent(&self, s: usize) -> bool {
        self.0.qinv.iter().any(|row| row[s] < 0)
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.word == other.0.word
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.word.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// (length, reduced word) order, the fixed order of every table.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), &self.0.word).cmp(&(other.len(), &other.0.word))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_string(&self.0.word))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders a 0-based word as "s1.s2.s1"; the empty word is "1".
pub fn word_string(word: &[u8]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|i| format!("s{}", i + 1))
        .collect::<Vec<_>>()
        .join(".")
}

/// Parses "s1.s2", "1", "12" or "[1,2]" into a 0-based word.
pub fn parse_word(s: &str, rank: usize) -> Result<Vec<u8>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() || t == "1" || t == "e" {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if t.contains('.') || t.contains(',') || t.contains(' ') {
        t.split(['.', ',', ' ']).filter(|p| !p.is_empty()).collect()
    } else if t.starts_with('s') {
        t.split('s').filter(|p| !p.is_empty()).collect()
    } else {
        t.split("").filter(|p| !p.is_empty()).collect()
    };
    parts
        .iter()
        .map(|p| {
            let k: usize = p
                .trim_start_matches('s')
                .parse()
                .map_err(|_| Error::Parse(format!("bad word '{s}'")))?;
            if k == 0 || k > rank {
                return Err(Error::Parse(format!("letter {k} out of range in '{s}'")));
            }
            Ok((k - 1) as u8)
        })
        .collect()
}

fn mat_vec_i(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// A real coroot in simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coroot(pub Vec<i64>);

impl Coroot {
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Coroot {
        Coroot(self.0.iter().map(|c| -c).collect())
    }

    pub fn simple_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] != 0).collect();
        (nz.len() == 1 && self.0[nz[0]] == 1).then(|| nz[0])
    }
}

impl fmt::Display for Coroot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, &c)| match c {
                1 => format!("a{}", i + 1),
                -1 => format!("-a{}", i + 1),
                _ => format!("{c}a{}", i + 1),
            })
            .collect();
        write!(f, "{}", terms.join("+").replace("+-", "-"))
    }
}

/// A positive real coroot found by orbit enumeration, with the data of its
/// reflection: β = w.α_s∨ and r_β = w s w⁻¹.
#[derive(Clone, Debug)]
pub struct PositiveCoroot {
    pub coroot: Coroot,
    pub simple: usize,
    pub reflection: WeylElement,
    /// Number of simple reflections separating β from a simple coroot.
    pub depth: usize,
}

/// Outcome of the dominance search in the Tits cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// x = w.x⁺ with x⁺ dominant and `face` = {i : α_i(x⁺) = 0}.
    Decided {
        w: WeylElement,
        face: Vec<usize>,
        dominant: Vec<BigRational>,
    },
    NotDecided,
}

/// A root generating system with Hecke parameters and Weyl-group caches.
pub struct RootDatum {
    a: IMat,
    d: usize,
    pairing: IMat,
    coroots: IMat,
    sigma: Vec<Fe>,
    sigma_prime: Vec<Fe>,
    s_q: Vec<IMat>,
    s_y: Vec<IMat>,
    identity: WeylElement,
    right_mul: Mutex<HashMap<(Vec<u8>, u8), WeylElement>>,
    bruhat: Mutex<HashMap<(Vec<u8>, Vec<u8>), bool>>,
    shells: Mutex<Vec<Vec<WeylElement>>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("a", &self.a)
            .field("pairing", &self.pairing)
            .field("coroots", &self.coroots)
            .field("sigma", &self.sigma)
            .field("sigma_prime", &self.sigma_prime)
            .finish()
    }
}

impl RootDatum {
    /// Validates and builds a root generating system.
    pub fn new(
        a: Vec<Vec<i64>>,
        pairing: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        sigma: Vec<Fe>,
        sigma_prime: Vec<Fe>,
    ) -> Result<RootDatum> {
        let l = a.len();
        if l == 0 || a.iter().any(|r| r.len() != l) {
            return Err(Error::Config("Kac-Moody matrix must be square and nonempty".into()));
        }
        if l > u8::MAX as usize {
            return Err(Error::Config("too many simple reflections".into()));
        }
        for i in 0..l {
            if a[i][i] != 2 {
                return Err(Error::Config(format!("a[{i}][{i}] must be 2")));
            }
            for j in 0..l {
                if i != j && a[i][j] > 0 {
                    return Err(Error::Config(format!("a[{i}][{j}] must be <= 0")));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::Config(format!(
                        "a[{i}][{j}] and a[{j}][{i}] must vanish together"
                    )));
                }
            }
        }
        let d = pairing.first().map_or(0, Vec::len);
        if pairing.len() != l || coroots.len() != l || d == 0 {
            return Err(Error::Config("pairing and coroots need one row per simple root".into()));
        }
        if pairing.iter().chain(&coroots).any(|r| r.len() != d) {
            return Err(Error::Config("pairing and coroot rows must have length rankY".into()));
        }
        for i in 0..l {
            for j in 0..l {
                let v: i64 = (0..d).map(|k| pairing[j][k] * coroots[i][k]).sum();
                if v != a[i][j] {
                    return Err(Error::Config(format!(
                        "alpha_{}(alpha_{}^vee) = {v} but a[{i}][{j}] = {}",
                        j + 1,
                        i + 1,
                        a[i][j]
                    )));
                }
            }
        }
        let cm: Vec<Vec<Fe>> = coroots
            .iter()
            .map(|r| r.iter().map(|&x| Fe::int(x)).collect())
            .collect();
        if linalg::rank(&cm, d) != l {
            return Err(Error::NotFree(
                "the simple coroots are linearly dependent in Y".into(),
            ));
        }
        if sigma.len() != l || sigma_prime.len() != l {
            return Err(Error::Config("one sigma and one sigma' per simple reflection".into()));
        }
        for s in 0..l {
            let (x, xp) = (&sigma[s], &sigma_prime[s]);
            if x.is_zero() || xp.is_zero() {
                return Err(Error::ParameterConstraint(format!("parameters of s{} must be nonzero", s + 1)));
            }
            let g = pairing[s].iter().fold(0i64, |g, &x| g.gcd(&x));
            if g == 1 && x != xp {
                return Err(Error::ParameterConstraint(format!(
                    "alpha_{}(Y) = Z forces sigma = sigma'",
                    s + 1
                )));
            }
            let xinv = x.inv()?;
            if *xp == xinv || *xp == -x || *xp == -&xinv {
                return Err(Error::ParameterConstraint(format!(
                    "sigma'_{} must avoid sigma^-1, -sigma and -sigma^-1",
                    s + 1
                )));
            }
            for t in 0..l {
                if t != s && a[s][t] == -1 && a[t][s] == -1 {
                    let all = [&sigma[s], &sigma_prime[s], &sigma[t], &sigma_prime[t]];
                    if all.iter().any(|v| *v != all[0]) {
                        return Err(Error::ParameterConstraint(format!(
                            "s{} and s{} are braid-linked by 3, so all four parameters must agree",
                            s + 1,
                            t + 1
                        )));
                    }
                }
            }
        }
        let s_q = (0..l)
            .map(|i| {
                let mut m = linalg::iidentity(l);
                for j in 0..l {
                    m[i][j] -= a[j][i];
                }
                m
            })
            .collect();
        let s_y = (0..l)
            .map(|i| {
                let mut m = linalg::iidentity(d);
                for (ra, row) in m.iter_mut().enumerate() {
                    for (b, e) in row.iter_mut().enumerate() {
                        *e -= coroots[i][ra] * pairing[i][b];
                    }
                }
                m
            })
            .collect();
        let identity = WeylElement(Arc::new(WInner {
            word: Vec::new(),
            q: linalg::iidentity(l),
            qinv: linalg::iidentity(l),
            y: linalg::iidentity(d),
            yinv: linalg::iidentity(d),
        }));
        Ok(RootDatum {
            a,
            d,
            pairing,
            coroots,
            sigma,
            sigma_prime,
            s_q,
            s_y,
            identity: identity.clone(),
            right_mul: Mutex::new(HashMap::new()),
            bruhat: Mutex::new(HashMap::new()),
            shells: Mutex::new(vec![vec![identity]]),
        })
    }

    /// Number of simple reflections.
    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// Rank of Y.
    pub fn rank_y(&self) -> usize {
        self.d
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn pairing(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    /// α_s∨ in the (y_j) basis.
    pub fn coroot_y(&self, s: usize) -> &[i64] {
        &self.coroots[s]
    }

    pub fn sigma(&self, s: usize) -> &Fe {
        &self.sigma[s]
    }

    pub fn sigma_prime(&self, s: usize) -> &Fe {
        &self.sigma_prime[s]
    }

    pub fn equal_parameters(&self, s: usize) -> bool {
        self.sigma[s] == self.sigma_prime[s]
    }

    /// The positive generator of α_s(Y) ⊂ ℤ.
    pub fn alpha_index(&self, s: usize) -> i64 {
        self.pairing[s].iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// Rank two with a₁₂a₂₁ ≥ 4, the infinite dihedral case.
    pub fn is_infinite_dihedral(&self) -> bool {
        self.rank() == 2 && self.a[0][1] * self.a[1][0] >= 4
    }

    /// α_i(λ) for λ ∈ Y.
    pub fn alpha_y(&self, i: usize, lambda: &[i64]) -> i64 {
        self.pairing[i].iter().zip(lambda).map(|(a, b)| a * b).sum()
    }

    /// α_i(β) for β in simple-coroot coordinates.
    pub fn alpha_coroot(&self, i: usize, beta: &[i64]) -> i64 {
        beta.iter().enumerate().map(|(j, b)| b * self.a[j][i]).sum()
    }

    /// Coordinates in Y of a coroot given in simple-coroot coordinates.
    pub fn coroot_to_y(&self, beta: &[i64]) -> Vec<i64> {
        (0..self.d)
            .map(|k| beta.iter().enumerate().map(|(i, b)| b * self.coroots[i][k]).sum())
            .collect()
    }

    pub fn identity(&self) -> WeylElement {
        self.identity.clone()
    }

    pub fn simple_reflection(&self, s: usize) -> WeylElement {
        self.mul_simple(&self.identity, s)
    }

    fn build(&self, q: IMat, qinv: IMat, y: IMat, yinv: IMat) -> WeylElement {
        let word = self.canonical_word(&qinv);
        WeylElement(Arc::new(WInner { word, q, qinv, y, yinv }))
    }

    /// Greedy smallest left descents of the element whose inverse is `qinv`.
    fn canonical_word(&self, qinv: &IMat) -> Vec<u8> {
        let l = self.rank();
        let mut cur = qinv.clone();
        let mut word = Vec::new();
        loop {
            let Some(i) = (0..l).find(|&i| cur.iter().any(|row| row[i] < 0)) else {
                return word;
            };
            word.push(i as u8);
            cur = linalg::imul(&cur, &self.s_q[i]);
            assert!(word.len() < 100_000, "descent stripping does not terminate");
        }
    }

    /// w·s, memoized.
    pub fn mul_simple(&self, w: &WeylElement, s: usize) -> WeylElement {
        let key = (w.word().to_vec(), s as u8);
        if let Some(v) = self.right_mul.lock().unwrap().get(&key) {
            return v.clone();
        }
        let q = linalg::imul(&w.0.q, &self.s_q[s]);
        let qinv = linalg::imul(&self.s_q[s], &w.0.qinv);
        let y = linalg::imul(&w.0.y, &self.s_y[s]);
        let yinv = linalg::imul(&self.s_y[s], &w.0.yinv);
        let out = self.build(q, qinv, y, yinv);
        self.right_mul.lock().unwrap().insert(key, out.clone());
        out
    }

    /// s·w.
    pub fn simple_mul(&self, s: usize, w: &WeylElement) -> WeylElement {
        self.inverse(&self.mul_simple(&self.inverse(w), s))
    }

    /// The product of the letters of an arbitrary word.
    pub fn from_word(&self, word: &[u8]) -> WeylElement {
        word.iter()
            .fold(self.identity(), |acc, &s| self.mul_simple(&acc, s as usize))
    }

    pub fn mul(&self, u: &WeylElement, v: &WeylElement) -> WeylElement {
        v.word()
            .iter()
            .fold(u.clone(), |acc, &s| self.mul_simple(&acc, s as usize))
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let rev: Vec<u8> = w.word().iter().rev().copied().collect();
        self.from_word(&rev)
    }

    /// Length and a reduced word obtained by stripping right descents.
    pub fn length_and_reduced_word(&self, w: &WeylElement) -> (usize, Vec<u8>) {
        let mut cur = w.clone();
        let mut rev = Vec::new();
        while let Some(s) = (0..self.rank()).find(|&s| cur.has_right_descent(s)) {
            rev.push(s as u8);
            cur = self.mul_simple(&cur, s);
        }
        rev.reverse();
        (rev.len(), rev)
    }

    /// Every reduced word of w.
    pub fn reduced_words(&self, w: &WeylElement) -> Vec<Vec<u8>> {
        if w.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for s in 0..self.rank() {
            if w.has_right_descent(s) {
                for mut p in self.reduced_words(&self.mul_simple(w, s)) {
                    p.push(s as u8);
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    /// N(w) from the reduced word s₁⋯s_r: α_{s_r}∨, s_r.α_{s_{r−1}}∨, ….
    pub fn inversion_set_from_word(&self, word: &[u8]) -> Vec<Coroot> {
        let l = self.rank();
        let mut out = Vec::with_capacity(word.len());
        let mut suffix = self.identity();
        for &s in word.iter().rev() {
            let mut e = vec![0; l];
            e[s as usize] = 1;
            out.push(Coroot(suffix.act_coroot_inv(&e)));
            suffix = self.simple_mul(s as usize, &suffix);
        }
        out
    }

    /// The positive coroots sent to negative ones by w, sorted.
    pub fn inversion_set(&self, w: &WeylElement) -> BTreeSet<Coroot> {
        self.inversion_set_from_word(w.word()).into_iter().collect()
    }

    /// Bruhat order by the descent recursion, memoized.
    pub fn bruhat_leq(&self, v: &WeylElement, w: &WeylElement) -> bool {
        if v.len() > w.len() {
            return false;
        }
        if v == w || v.is_identity() {
            return true;
        }
        if v.len() == w.len() {
            return false;
        }
        let key = (v.word().to_vec(), w.word().to_vec());
        if let Some(&b) = self.bruhat.lock().unwrap().get(&key) {
            return b;
        }
        let s = *w.word().last().unwrap() as usize;
        let ws = self.mul_simple(w, s);
        let out = if v.has_right_descent(s) {
            self.bruhat_leq(&self.mul_simple(v, s), &ws)
        } else {
            self.bruhat_leq(v, &ws)
        };
        self.bruhat.lock().unwrap().insert(key, out);
        out
    }

    /// Elements of length exactly n, sorted by reduced word.
    pub fn shell(&self, n: usize) -> Vec<WeylElement> {
        loop {
            {
                let shells = self.shells.lock().unwrap();
                if shells.len() > n {
                    return shells[n].clone();
                }
            }
            let last = self.shells.lock().unwrap().last().unwrap().clone();
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for w in &last {
                for s in 0..self.rank() {
                    if !w.has_right_descent(s) {
                        let ws = self.mul_simple(w, s);
                        if seen.insert(ws.word().to_vec()) {
                            next.push(ws);
                        }
                    }
                }
            }
            next.sort();
            self.shells.lock().unwrap().push(next);
        }
    }

    /// All elements of length ≤ L in (length, word) order.
    pub fn bruhat_ball(&self, l: usize) -> Vec<WeylElement> {
        (0..=l).flat_map(|n| self.shell(n)).collect()
    }

    /// True when the whole group has length ≤ L.
    pub fn is_finite_within(&self, l: usize) -> bool {
        self.shell(l + 1).is_empty()
    }

    /// The interval [1, w].
    pub fn lower_interval(&self, w: &WeylElement) -> Vec<WeylElement> {
        self.bruhat_ball(w.len())
            .into_iter()
            .filter(|v| self.bruhat_leq(v, w))
            .collect()
    }

    /// The reflection r_β for a positive real coroot β.
    pub fn reflection_of_coroot(&self, beta: &Coroot) -> Result<WeylElement> {
        if !beta.is_positive() {
            return Err(Error::NotReflection(format!("{beta} is not a positive coroot")));
        }
        let mut cur = beta.0.clone();
        let mut path = Vec::new();
        let cap = 64 * (1 + cur.iter().sum::<i64>() as usize);
        while Coroot(cur.clone()).simple_index().is_none() {
            let Some(i) = (0..self.rank()).find(|&i| self.alpha_coroot(i, &cur) > 0) else {
                return Err(Error::NotReflection(format!("{beta} is not a real coroot")));
            };
            cur = self.s_q[i].iter().map(|row| row.iter().zip(&cur).map(|(a, b)| a * b).sum()).collect();
            path.push(i as u8);
            if !Coroot(cur.clone()).is_positive() || path.len() > cap {
                return Err(Error::NotReflection(format!("{beta} is not a real coroot")));
            }
        }
        let s = Coroot(cur).simple_index().unwrap();
        let w = self.from_word(&path);
        let winv = self.inverse(&w);
        Ok(self.mul(&self.mul_simple(&w, s), &winv))
    }

    /// The positive coroot of a reflection, verified by the round trip.
    pub fn coroot_of_reflection(&self, r: &WeylElement) -> Result<Coroot> {
        let bad = || Error::NotReflection(format!("{r} is not a reflection"));
        if r.len() % 2 == 0 || !self.mul(r, r).is_identity() {
            return Err(bad());
        }
        let l = self.rank();
        let q = r.coroot_matrix();
        // I − r has rank one with image spanned by β
        let col = (0..l)
            .map(|j| (0..l).map(|i| i64::from(i == j) - q[i][j]).collect::<Vec<i64>>())
            .find(|c| c.iter().any(|&x| x != 0))
            .ok_or_else(bad)?;
        let g = col.iter().fold(0i64, |g, &x| g.gcd(&x));
        let sign = if col.iter().any(|&x| x < 0) { -1 } else { 1 };
        let beta = Coroot(col.iter().map(|x| sign * x / g).collect());
        if !beta.is_positive() || self.reflection_of_coroot(&beta)? != *r {
            return Err(bad());
        }
        Ok(beta)
    }

    pub fn is_reflection(&self, r: &WeylElement) -> bool {
        self.coroot_of_reflection(r).is_ok()
    }

    /// Positive real coroots with reflection length ≤ 2L+1, by orbit
    /// closure of the simple coroots; sorted by (depth, coordinates).
    pub fn positive_coroots(&self, l: usize) -> Vec<PositiveCoroot> {
        let n = self.rank();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            let mut e = vec![0; n];
            e[s] = 1;
            seen.insert(e.clone());
            queue.push_back((e, s, 0usize));
        }
        while let Some((beta, s, depth)) = queue.pop_front() {
            let c = Coroot(beta.clone());
            let reflection = self
                .reflection_of_coroot(&c)
                .expect("orbit of a simple coroot is real");
            out.push(PositiveCoroot { coroot: c, simple: s, reflection, depth });
            if depth == l {
                continue;
            }
            for j in 0..n {
                let img: Vec<i64> = self.s_q[j]
                    .iter()
                    .map(|row| row.iter().zip(&beta).map(|(a, b)| a * b).sum())
                    .collect();
                if Coroot(img.clone()).is_positive() && seen.insert(img.clone()) {
                    queue.push_back((img, s, depth + 1));
                }
            }
        }
        out.sort_by(|a, b| (a.depth, &a.coroot).cmp(&(b.depth, &b.coroot)));
        out
    }

    /// The simple reflection conjugate to r_β, for a positive real coroot.
    pub fn coroot_type(&self, beta: &Coroot) -> Result<usize> {
        let mut cur = beta.0.clone();
        let mut steps = 0;
        while Coroot(cur.clone()).simple_index().is_none() {
            let i = (0..self.rank())
                .find(|&i| self.alpha_coroot(i, &cur) > 0)
                .ok_or_else(|| Error::NotReflection(format!("{beta} is not real")))?;
            cur = self.s_q[i].iter().map(|row| row.iter().zip(&cur).map(|(a, b)| a * b).sum()).collect();
            steps += 1;
            if steps > 100_000 {
                return Err(Error::NotReflection(format!("{beta} is not real")));
            }
        }
        Ok(Coroot(cur).simple_index().unwrap())
    }

    /// Dominance search: while some α_i(x) < 0 (smallest i), replace x by
    /// s_i.x and w by w·s_i. Default cap 10·(‖x‖₁ + 1).
    pub fn to_dominant(&self, x: &[BigRational], cap: Option<usize>) -> Dominance {
        let norm: BigRational = x.iter().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b);
        let default_cap = num_traits::ToPrimitive::to_f64(&norm).unwrap_or(1e6);
        let cap = cap.unwrap_or((10.0 * (default_cap + 1.0)).ceil() as usize);
        let alpha = |v: &[BigRational], i: usize| -> BigRational {
            self.pairing[i]
                .iter()
                .zip(v)
                .map(|(p, c)| c * BigRational::from_integer((*p).into()))
                .fold(BigRational::zero(), |a, b| a + b)
        };
        let mut cur = x.to_vec();
        let mut w = self.identity();
        for _ in 0..=cap {
            let Some(i) = (0..self.rank()).find(|&i| alpha(&cur, i).is_negative()) else {
                let face = (0..self.rank()).filter(|&i| alpha(&cur, i).is_zero()).collect();
                return Dominance::Decided { w, face, dominant: cur };
            };
            let ai = alpha(&cur, i);
            for (k, c) in cur.iter_mut().enumerate() {
                *c -= &ai * BigRational::from_integer(self.coroots[i][k].into());
            }
            w = self.mul_simple(&w, i);
        }
        Dominance::NotDecided
    }

    /// (w.τ)(y_j) = τ(w⁻¹.y_j).
    pub fn act_character(&self, w: &WeylElement, tau: &[Fe]) -> Vec<Fe> {
        let yinv = w.y_matrix_inv();
        (0..self.d)
            .map(|j| {
                (0..self.d).fold(Fe::one(), |acc, k| {
                    let e = yinv[k][j];
                    if e == 0 {
                        acc
                    } else {
                        &acc * &tau[k].pow(e).expect("character values are nonzero")
                    }
                })
            })
            .collect()
    }

    /// τ(λ) = Π τ(y_j)^{λ_j}.
    pub fn eval_character(&self, tau: &[Fe], lambda: &[i64]) -> Fe {
        lambda.iter().zip(tau).fold(Fe::one(), |acc, (&e, t)| {
            if e == 0 {
                acc
            } else {
                &acc * &t.pow(e).expect("character values are nonzero")
            }
        })
    }

    /// τ(β) for β in simple-coroot coordinates.
    pub fn eval_coroot(&self, tau: &[Fe], beta: &[i64]) -> Fe {
        self.eval_character(tau, &self.coroot_to_y(beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> RootDatum {
        RootDatum::new(
            vec![vec![2, -2], vec![-4, 2]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![2, -2], vec![-4, 2]],
            vec![Fe::int(2), Fe::int(2)],
            vec![Fe::int(2), Fe::int(2)],
        )
        .unwrap()
    }

    #[test]
    fn simple_reflection_images() {
        let r = f1();
        let s1 = r.simple_reflection(0);
        let s2 = r.simple_reflection(1);
        assert_eq!(s1.act_coroot(&[1, 0]), vec![-1, 0]);
        assert_eq!(s1.act_coroot(&[0, 1]), vec![4, 1]);
        assert_eq!(s2.act_coroot(&[1, 0]), vec![1, 2]);
        assert!(r.mul(&s1, &s1).is_identity());
    }

    #[test]
    fn words_and_lengths() {
        let r = f1();
        let w = r.from_word(&[0, 1, 0]);
        assert_eq!(r.length_and_reduced_word(&w), (3, vec![0, 1, 0]));
        assert!(r.from_word(&[0, 1, 1, 0]).is_identity());
        assert_eq!(r.bruhat_ball(5).len(), 11);
        let names: Vec<String> = r.bruhat_ball(2).iter().map(|w| w.to_string()).collect();
        assert_eq!(names, vec!["1", "s1", "s2", "s1.s2", "s2.s1"]);
    }

    #[test]
    fn inversion_sets() {
        let r = f1();
        let w = r.from_word(&[0, 1]);
        let n: Vec<Coroot> = r.inversion_set(&w).into_iter().collect();
        assert_eq!(n, vec![Coroot(vec![0, 1]), Coroot(vec![1, 2])]);
    }

    #[test]
    fn reflections_round_trip() {
        let r = f1();
        let beta = Coroot(vec![1, 2]);
        let refl = r.reflection_of_coroot(&beta).unwrap();
        assert_eq!(refl.word(), &[1, 0, 1]);
        assert_eq!(r.coroot_of_reflection(&refl).unwrap(), beta);
        assert!(r.coroot_of_reflection(&r.from_word(&[0, 1])).is_err());
    }

    #[test]
    fn bruhat_small() {
        let r = f1();
        let s1 = r.simple_reflection(0);
        let s2 = r.simple_reflection(1);
        assert!(r.bruhat_leq(&s1, &r.from_word(&[1, 0])));
        assert!(!r.bruhat_leq(&s1, &s2) && !r.bruhat_leq(&s2, &s1));
    }

    #[test]
    fn dominance() {
        let r = f1();
        let q = |a: i64| BigRational::from_integer(a.into());
        match r.to_dominant(&[q(0), q(0)], None) {
            Dominance::Decided { w, face, .. } => {
                assert!(w.is_identity());
                assert_eq!(face, vec![0, 1]);
            }
            Dominance::NotDecided => panic!(),
        }
        let s1 = r.simple_reflection(0);
        let x = s1.act_y(&[1, 1]);
        match r.to_dominant(&[q(x[0]), q(x[1])], None) {
            Dominance::Decided { w, face, .. } => {
                assert_eq!(w, s1);
                assert!(face.is_empty());
            }
            Dominance::NotDecided => panic!(),
        }
    }
}
