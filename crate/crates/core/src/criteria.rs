//! The decision layer: membership in the non-vanishing locus of the ζ
//! numerators, stabilizers W_τ and reflection subgroups W_(τ), τ-simple
//! reflections, irreducibility verdicts with witnesses, the two
//! one-dimensional representations and degenerate monoid characters.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::coxeter::{Coroot, Dominance, RootDatum, WeylElement};
use crate::error::{Error, Result};
use crate::hecke::Hecke;
use crate::laurent::{Character, Laurent, RatFn};
use crate::linalg;
use crate::scalars::Fe;
use crate::series::{PrincipalSeries, SeriesVector};

/// Largest rotation period handled by the exact rank-2 route.
const MAX_PERIOD: i64 = 64;
/// Largest basis used for the weight-space cross-check of a verdict.
const MAX_DIM_BALL: usize = 160;

// ----- infinite dihedral normal forms ---------------------------------------

/// An element of the infinite dihedral group as t^j or s₁t^j, t = s₁s₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dihedral {
    pub reflection: bool,
    pub j: i64,
}

impl Dihedral {
    pub const ONE: Dihedral = Dihedral { reflection: false, j: 0 };

    pub fn letter(s: u8) -> Dihedral {
        Dihedral { reflection: true, j: i64::from(s) }
    }

    pub fn mul(self, o: Dihedral) -> Dihedral {
        match (self.reflection, o.reflection) {
            (false, false) => Dihedral { reflection: false, j: self.j + o.j },
            (false, true) => Dihedral { reflection: true, j: o.j - self.j },
            (true, false) => Dihedral { reflection: true, j: self.j + o.j },
            (true, true) => Dihedral { reflection: false, j: o.j - self.j },
        }
    }

    pub fn of(w: &WeylElement) -> Dihedral {
        w.word().iter().fold(Dihedral::ONE, |acc, &s| acc.mul(Dihedral::letter(s)))
    }

    /// The reduced word; letters 0 = s₁ and 1 = s₂.
    pub fn word(self) -> Vec<u8> {
        let m = self.j.unsigned_abs() as usize;
        match (self.reflection, self.j) {
            (false, j) if j >= 0 => [0u8, 1].repeat(m),
            (false, _) => [1u8, 0].repeat(m),
            (true, j) if j >= 1 => {
                let mut w = vec![1u8];
                w.extend([0u8, 1].repeat(m - 1));
                w
            }
            (true, _) => {
                let mut w = vec![0u8];
                w.extend([1u8, 0].repeat(m));
                w
            }
        }
    }

    pub fn len(self) -> usize {
        self.word().len()
    }

    pub fn element(self, rd: &RootDatum) -> WeylElement {
        rd.from_word(&self.word())
    }
}

/// A subgroup of the infinite dihedral group: rotations t^{pℤ} (none when
/// `period` is `None`) and, when `reflection` is `Some(c)`, the reflections
/// s₁t^{c+pℤ}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralSubgroup {
    pub period: Option<i64>,
    pub reflection: Option<i64>,
}

/// The classified shapes of subgroups of the infinite dihedral group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum Shape {
    Trivial,
    /// ⟨s₁t^j⟩
    Reflection { j: i64 },
    /// Z_k = ⟨t^k⟩
    Rotation { k: i64 },
    /// R_{k,m} = ⟨s₁t^{−k}, s₁t^{m+1}⟩
    Dihedral { k: i64, m: i64 },
    Whole,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Trivial => write!(f, "{{1}}"),
            Shape::Reflection { j } => write!(f, "<s1 t^{j}>"),
            Shape::Rotation { k } => write!(f, "Z_{k}"),
            Shape::Dihedral { k, m } => write!(f, "R_{{{k},{m}}}"),
            Shape::Whole => write!(f, "W"),
        }
    }
}

impl DihedralSubgroup {
    pub const TRIVIAL: DihedralSubgroup = DihedralSubgroup { period: None, reflection: None };

    /// The subgroup generated by a set of elements.
    pub fn generated_by(elems: &[Dihedral]) -> DihedralSubgroup {
        let mut g = 0i64;
        let mut base: Option<i64> = None;
        for e in elems {
            if e.reflection {
                match base {
                    None => base = Some(e.j),
                    Some(c) => g = g.gcd(&(e.j - c)),
                }
            } else {
                g = g.gcd(&e.j);
            }
        }
        let period = (g != 0).then_some(g);
        let reflection = base.map(|c| match period {
            Some(p) => c.rem_euclid(p),
            None => c,
        });
        DihedralSubgroup { period, reflection }
    }

    pub fn contains(&self, e: Dihedral) -> bool {
        let hits = |j: i64, c: i64| match self.period {
            Some(p) => (j - c).rem_euclid(p) == 0,
            None => j == c,
        };
        if e.reflection {
            self.reflection.is_some_and(|c| hits(e.j, c))
        } else {
            hits(e.j, 0)
        }
    }

    pub fn shape(&self) -> Shape {
        match (self.period, self.reflection) {
            (None, None) => Shape::Trivial,
            (None, Some(j)) => Shape::Reflection { j },
            (Some(k), None) => Shape::Rotation { k },
            (Some(1), Some(_)) => Shape::Whole,
            (Some(p), Some(c)) => {
                let k = (-c).rem_euclid(p);
                Shape::Dihedral { k, m: p - 1 - k }
            }
        }
    }

    pub fn generators(&self) -> Vec<Dihedral> {
        match self.shape() {
            Shape::Trivial => vec![],
            Shape::Reflection { j } => vec![Dihedral { reflection: true, j }],
            Shape::Rotation { k } => vec![Dihedral { reflection: false, j: k }],
            Shape::Whole => vec![Dihedral::letter(0), Dihedral::letter(1)],
            Shape::Dihedral { k, m } => vec![
                Dihedral { reflection: true, j: -k },
                Dihedral { reflection: true, j: m + 1 },
            ],
        }
    }

    pub fn is_subgroup_of(&self, o: &DihedralSubgroup) -> bool {
        self.generators().into_iter().all(|g| o.contains(g))
    }
}

// ----- 𝒰 membership ----------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UMembership {
    /// Every coroot value lies in a finite group of roots of unity on which
    /// no ζ numerator vanishes.
    CertifiedYes { group_order: usize },
    YesUpTo(usize),
    No { coroot: Coroot },
}

impl UMembership {
    pub fn is_no(&self) -> bool {
        matches!(self, UMembership::No { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, UMembership::CertifiedYes { .. })
    }
}

impl Serialize for UMembership {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UMembership::CertifiedYes { group_order } => {
                json!({"status": "certified-yes", "value_group_order": group_order}).serialize(s)
            }
            UMembership::YesUpTo(l) => json!({"status": "yes-up-to-L", "L": l}).serialize(s),
            UMembership::No { coroot } => {
                json!({"status": "no", "coroot": coroot.0}).serialize(s)
            }
        }
    }
}

// ----- fixers ----------------------------------------------------------------

/// How the rank-2 subgroups were determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method")]
pub enum Rank2Method {
    /// τ has a finite t-orbit of the given period; both subgroups are exact.
    Periodic { period: i64 },
    /// The ball scan matched a classified subgroup generated by elements of
    /// length at most L − 2.
    Stabilized,
    Unstable,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rank2Fixers {
    pub stabilizer: DihedralSubgroup,
    pub stabilizer_shape: Shape,
    pub reflection: DihedralSubgroup,
    pub reflection_shape: Shape,
    pub method: Rank2Method,
}

/// W_τ and W_(τ) as seen from the length-L ball, plus the rank-2
/// classification when available.
#[derive(Clone, Debug)]
pub struct FixerData {
    pub truncation: usize,
    /// {w ∈ ball : w.τ = τ}
    pub stabilizer_in_ball: Vec<WeylElement>,
    pub stabilizer_generators: Vec<WeylElement>,
    /// Φ∨_(τ) among coroots with reflection length ≤ 2L+1.
    pub reflection_coroots: Vec<Coroot>,
    pub reflections: Vec<WeylElement>,
    /// W_(τ) ∩ ball.
    pub reflection_subgroup_in_ball: Vec<WeylElement>,
    pub reflection_generators: Vec<WeylElement>,
    pub rank2: Option<Rank2Fixers>,
}

impl FixerData {
    /// True when both subgroups are known beyond the ball.
    pub fn exact(&self) -> bool {
        self.rank2
            .as_ref()
            .is_some_and(|r| r.method != Rank2Method::Unstable)
    }

    pub fn in_reflection_subgroup(&self, w: &WeylElement) -> bool {
        match &self.rank2 {
            Some(r) => r.reflection.contains(Dihedral::of(w)),
            None => self.reflection_subgroup_in_ball.contains(w),
        }
    }

    /// W_τ = W_(τ), exactly in rank 2 and on the ball otherwise.
    pub fn equal_subgroups(&self) -> bool {
        match &self.rank2 {
            Some(r) => r.stabilizer == r.reflection,
            None => self.stabilizer_in_ball == self.reflection_subgroup_in_ball,
        }
    }

    pub fn to_json(&self) -> Value {
        let words = |v: &[WeylElement]| v.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        json!({
            "truncation": self.truncation,
            "W_tau_in_ball": words(&self.stabilizer_in_ball),
            "W_tau_generators": words(&self.stabilizer_generators),
            "reflection_coroots": self.reflection_coroots.iter().map(|c| c.0.clone()).collect::<Vec<_>>(),
            "W_(tau)_in_ball": words(&self.reflection_subgroup_in_ball),
            "W_(tau)_generators": words(&self.reflection_generators),
            "rank2": self.rank2,
            "exact": self.exact(),
        })
    }
}

/// 𝒮_τ and reduced 𝒮_τ-words for W_(τ) ∩ ball.
#[derive(Clone, Debug)]
pub struct TauSimple {
    pub reflections: Vec<WeylElement>,
    pub words: Vec<(WeylElement, Vec<WeylElement>)>,
}

impl TauSimple {
    /// ℓ_τ(w) when w was reached.
    pub fn tau_length(&self, w: &WeylElement) -> Option<usize> {
        self.words.iter().find(|(v, _)| v == w).map(|(_, r)| r.len())
    }
}

// ----- verdicts ----------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    IrreducibleExact,
    ReducibleExact,
    NoObstructionUpTo(usize),
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::IrreducibleExact => write!(f, "Irreducible-exact"),
            Status::ReducibleExact => write!(f, "Reducible-exact"),
            Status::NoObstructionUpTo(l) => write!(f, "NoObstructionUpTo({l})"),
            Status::Undecided => write!(f, "Undecided"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reason {
    pub criterion: String,
    /// A stable tag naming the argument used.
    pub citation: String,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub truncation: usize,
    pub reasons: Vec<Reason>,
    pub weight_dims: BTreeMap<String, usize>,
}

impl Verdict {
    fn push(&mut self, criterion: &str, citation: &str, witness: Value) {
        self.reasons.push(Reason {
            criterion: criterion.into(),
            citation: citation.into(),
            witness,
        });
    }
}

// ----- the engine ------------------------------------------------------------

/// Criteria evaluated over one algebra.
pub struct Criteria {
    hecke: Arc<Hecke>,
}

impl Criteria {
    pub fn new(hecke: Arc<Hecke>) -> Criteria {
        Criteria { hecke }
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    fn rd(&self) -> &RootDatum {
        self.hecke.root_datum()
    }

    fn is_rank2_infinite(&self) -> bool {
        self.rd().rank() == 2 && self.rd().is_infinite_dihedral()
    }

    /// Membership of τ in the locus where no τ(ζ^num_β) vanishes.
    pub fn in_u(&self, tau: &Character, l: usize) -> Result<UMembership> {
        let rd = self.rd();
        for pc in rd.positive_coroots(l) {
            if self.hecke.zeta_num_at(&pc.coroot, tau)?.is_zero() {
                return Ok(UMembership::No { coroot: pc.coroot });
            }
        }
        let bound = 2 * u64::from(self.hecke.field().order().max(1));
        let gens: Vec<Fe> = (0..rd.rank())
            .map(|s| {
                let mut e = vec![0; rd.rank()];
                e[s] = 1;
                tau.coroot_value(rd, &e)
            })
            .collect();
        if gens.iter().any(|g| g.is_root_of_unity_order(bound).is_none()) {
            return Ok(UMembership::YesUpTo(l));
        }
        // the finite group generated by the simple coroot values
        let mut group = vec![Fe::one()];
        let mut seen: HashSet<String> = HashSet::from([Fe::one().to_string()]);
        let mut i = 0;
        while i < group.len() {
            for g in &gens {
                let x = &group[i] * g;
                if seen.insert(x.to_string()) {
                    group.push(x);
                }
            }
            i += 1;
        }
        for s in 0..rd.rank() {
            let num = self.hecke.zeta_num_uni(s);
            if group.iter().any(|g| num.evaluate(std::slice::from_ref(g)).is_zero()) {
                return Ok(UMembership::YesUpTo(l));
            }
        }
        Ok(UMembership::CertifiedYes { group_order: group.len() })
    }

    /// Φ∨_(τ) within reflection length 2L+1, with the reflections.
    fn tau_coroots(&self, tau: &Character, l: usize) -> Result<Vec<(Coroot, WeylElement)>> {
        let rd = self.rd();
        let mut out = Vec::new();
        for pc in rd.positive_coroots(l) {
            if self.hecke.zeta_den_at(&pc.coroot, tau)?.is_zero() {
                if rd.act_character(&pc.reflection, tau.values()) != tau.values() {
                    return Err(Error::Assertion(format!(
                        "reflection {} has a vanishing zeta denominator but moves tau",
                        pc.reflection
                    )));
                }
                out.push((pc.coroot, pc.reflection));
            }
        }
        Ok(out)
    }

    /// W_τ and W_(τ) as far as the ball of radius L determines them.
    pub fn fixers(&self, tau: &Character, l: usize) -> Result<FixerData> {
        let rd = self.rd();
        let ball = rd.bruhat_ball(l);
        let stab: Vec<WeylElement> = ball
            .iter()
            .filter(|w| rd.act_character(w, tau.values()) == tau.values())
            .cloned()
            .collect();
        let refl = self.tau_coroots(tau, l)?;
        let reflection_coroots: Vec<Coroot> = refl.iter().map(|(c, _)| c.clone()).collect();
        let reflections: Vec<WeylElement> = refl.iter().map(|(_, r)| r.clone()).collect();

        if self.is_rank2_infinite() {
            let r2 = self.rank2_fixers(tau, l, &stab, &reflections)?;
            let in_ball = |g: &DihedralSubgroup| -> Vec<WeylElement> {
                ball.iter().filter(|w| g.contains(Dihedral::of(w))).cloned().collect()
            };
            if r2.method != Rank2Method::Unstable && in_ball(&r2.stabilizer) != stab {
                return Err(Error::Assertion("stabilizer scan disagrees with its classification".into()));
            }
            let gens = |g: &DihedralSubgroup| g.generators().iter().map(|d| d.element(rd)).collect();
            return Ok(FixerData {
                truncation: l,
                stabilizer_generators: gens(&r2.stabilizer),
                reflection_subgroup_in_ball: in_ball(&r2.reflection),
                reflection_generators: gens(&r2.reflection),
                stabilizer_in_ball: stab,
                reflection_coroots,
                reflections,
                rank2: Some(r2),
            });
        }

        let closure = reflection_closure(rd, &reflections, l);
        let stabilizer_generators = minimal_generators(rd, &stab, l);
        let reflection_generators = minimal_generators(rd, &closure, l);
        Ok(FixerData {
            truncation: l,
            stabilizer_in_ball: stab,
            stabilizer_generators,
            reflection_coroots,
            reflections,
            reflection_subgroup_in_ball: closure,
            reflection_generators,
            rank2: None,
        })
    }

    fn rank2_fixers(
        &self,
        tau: &Character,
        l: usize,
        stab: &[WeylElement],
        reflections: &[WeylElement],
    ) -> Result<Rank2Fixers> {
        let rd = self.rd();
        let t = rd.from_word(&[0, 1]);
        // t-orbit of τ; (t^j.τ)_j for j < P
        let mut orbit = vec![tau.values().to_vec()];
        let mut period = None;
        let bound = 2 * u64::from(self.hecke.field().order().max(1));
        let finite = tau.values().iter().all(|x| x.is_root_of_unity_order(bound).is_some());
        while finite && (orbit.len() as i64) <= MAX_PERIOD {
            let next = rd.act_character(&t, orbit.last().unwrap());
            if next == tau.values() {
                period = Some(orbit.len() as i64);
                break;
            }
            orbit.push(next);
        }
        if let Some(p) = period {
            let s1 = rd.simple_reflection(0);
            let s1tau = rd.act_character(&s1, tau.values());
            // s₁t^j fixes τ iff t^j.τ = s₁.τ
            let j0 = orbit.iter().position(|c| *c == s1tau).map(|j| j as i64);
            let stabilizer = DihedralSubgroup { period: Some(p), reflection: j0 };
            // reflections of W_(τ) are 2P-periodic in j
            let mut found = Vec::new();
            for j in 0..2 * p {
                let d = Dihedral { reflection: true, j };
                let r = d.element(rd);
                let beta = rd.coroot_of_reflection(&r)?;
                if self.hecke.zeta_den_at(&beta, tau)?.is_zero() {
                    if !stabilizer.contains(d) {
                        return Err(Error::Assertion(format!(
                            "reflection {r} has a vanishing zeta denominator but moves tau"
                        )));
                    }
                    found.push(d);
                    found.push(Dihedral { reflection: true, j: j + 2 * p });
                }
            }
            let reflection = DihedralSubgroup::generated_by(&found);
            return Ok(Rank2Fixers {
                stabilizer_shape: stabilizer.shape(),
                reflection_shape: reflection.shape(),
                stabilizer,
                reflection,
                method: Rank2Method::Periodic { period: p },
            });
        }

        // no short period: read both subgroups off the ball
        let short = |len: usize, v: &[WeylElement]| -> Vec<Dihedral> {
            v.iter().filter(|w| w.len() <= len).map(Dihedral::of).collect()
        };
        let all_stab = DihedralSubgroup::generated_by(&short(l, stab));
        let early_stab = DihedralSubgroup::generated_by(&short(l.saturating_sub(2), stab));
        let all_refl = DihedralSubgroup::generated_by(&short(2 * l + 1, reflections));
        let early_refl =
            DihedralSubgroup::generated_by(&short((2 * l + 1).saturating_sub(4), reflections));
        let ball = rd.bruhat_ball(l);
        let matches = ball
            .iter()
            .filter(|w| all_stab.contains(Dihedral::of(w)))
            .cloned()
            .collect::<Vec<_>>()
            == stab;
        let stable = matches && all_stab == early_stab && all_refl == early_refl;
        Ok(Rank2Fixers {
            stabilizer_shape: all_stab.shape(),
            reflection_shape: all_refl.shape(),
            stabilizer: all_stab,
            reflection: all_refl,
            method: if stable { Rank2Method::Stabilized } else { Rank2Method::Unstable },
        })
    }

    /// The τ-simple reflections and breadth-first 𝒮_τ-words for W_(τ) ∩ ball.
    pub fn tau_simple(&self, tau: &Character, fix: &FixerData) -> Result<TauSimple> {
        let rd = self.rd();
        let in_phi = |beta: &Coroot| -> Result<bool> {
            Ok(self.hecke.zeta_den_at(beta, tau)?.is_zero())
        };
        let mut simple = Vec::new();
        for (beta, r) in fix.reflection_coroots.iter().zip(&fix.reflections) {
            let mut ok = true;
            for g in rd.inversion_set(r) {
                if g != *beta && in_phi(&g)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                simple.push(r.clone());
            }
        }
        simple.sort();
        simple.dedup();

        let l = fix.truncation;
        let cap = 2 * l + 1;
        let mut words: BTreeMap<WeylElement, Vec<WeylElement>> = BTreeMap::new();
        words.insert(rd.identity(), vec![]);
        let mut queue = VecDeque::from([rd.identity()]);
        while let Some(w) = queue.pop_front() {
            let word = words[&w].clone();
            for r in &simple {
                let v = rd.mul(&w, r);
                if v.len() > cap || words.contains_key(&v) {
                    continue;
                }
                let mut nw = word.clone();
                nw.push(r.clone());
                words.insert(v.clone(), nw);
                queue.push_back(v);
            }
        }
        let mut out: Vec<(WeylElement, Vec<WeylElement>)> = words
            .into_iter()
            .filter(|(w, _)| w.len() <= l)
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        for w in &fix.reflection_subgroup_in_ball {
            if !out.iter().any(|(v, _)| v == w) {
                return Err(Error::Assertion(format!(
                    "tau-simple reflections do not reach {w} of W_(tau)"
                )));
            }
        }
        Ok(TauSimple { reflections: simple, words: out })
    }

    /// The irreducibility verdict for I_τ with truncation L.
    pub fn verdict(&self, tau: &Character, l: usize) -> Result<Verdict> {
        let rd = self.rd();
        let mut v = Verdict {
            status: Status::Undecided,
            truncation: l,
            reasons: vec![],
            weight_dims: BTreeMap::new(),
        };

        let u = self.in_u(tau, l)?;
        if let UMembership::No { coroot } = &u {
            let val = self.hecke.zeta_num_at(coroot, tau)?;
            v.push(
                "tau lies outside U",
                "necessary-condition-U",
                json!({"coroot": coroot.0, "zeta_num_at_tau": val.to_string()}),
            );
            v.status = Status::ReducibleExact;
            return Ok(v);
        }
        v.push("U membership", "definition-U", serde_json::to_value(&u).unwrap());

        let fix = self.fixers(tau, l)?;
        v.push("fixers", "stabilizer-scan", fix.to_json());

        // an element of W_τ ∖ W_(τ) of minimal length
        if let Some(w) = fix
            .stabilizer_in_ball
            .iter()
            .find(|w| !fix.in_reflection_subgroup(w))
        {
            if let Some(witness) = self.f_witness(tau, w)? {
                v.weight_dims.insert(format!("I_tau(tau) below {w}"), witness.1);
                v.push(
                    "W_tau differs from W_(tau)",
                    "extra-weight-vector",
                    json!({"w": w.to_string(), "vector": witness.0.to_string(), "dim_below_w": witness.1}),
                );
                v.status = Status::ReducibleExact;
                return Ok(v);
            }
        }
        let mut dl = l;
        while dl > 0 && rd.bruhat_ball(dl).len() > MAX_DIM_BALL {
            dl -= 1;
        }
        let ps = PrincipalSeries::new(self.hecke.clone(), tau.clone(), dl);
        let ball = rd.bruhat_ball(dl);
        let space = ps.weight_space_on(tau, &ball)?;
        v.weight_dims.insert(format!("I_tau(tau) on ball {dl}"), space.len());

        if space.len() >= 2 {
            let one = ps.one();
            let extra = space
                .iter()
                .find(|x| !proportional(x, &one))
                .expect("a two-dimensional space leaves the line of 1");
            v.push(
                "I_tau(tau) exceeds the line of 1",
                "weight-space-dimension",
                json!({"vector": extra.to_string(), "dim": space.len()}),
            );
            v.status = Status::ReducibleExact;
            return Ok(v);
        }

        let certified = u.is_certified();
        if let Some(r2) = &fix.rank2 {
            if certified && fix.exact() && r2.stabilizer == r2.reflection {
                v.push(
                    "rank two: U certified and W_tau = W_(tau)",
                    "rank-two-criterion",
                    json!({"shape": r2.stabilizer_shape.to_string(), "method": r2.method}),
                );
                v.status = Status::IrreducibleExact;
                return Ok(v);
            }
        }
        if rd.is_finite_within(l) && certified {
            if fix.stabilizer_in_ball.len() == 1 {
                v.push("regular character in U", "regular-criterion", json!({}));
                v.status = Status::IrreducibleExact;
                return Ok(v);
            }
            if fix.stabilizer_in_ball.len() == 2 && fix.equal_subgroups() {
                v.push(
                    "single reflection fixer in U",
                    "single-reflection-criterion",
                    json!({"t": fix.stabilizer_in_ball[1].to_string()}),
                );
                v.status = Status::IrreducibleExact;
                return Ok(v);
            }
        }
        let decided = fix.rank2.as_ref().is_none_or(|r| r.method != Rank2Method::Unstable);
        v.status = if decided && space.len() == 1 {
            Status::NoObstructionUpTo(l)
        } else {
            Status::Undecided
        };
        Ok(v)
    }

    /// F_w(τ)⊗1 for w ∈ W_τ, returned with dim I_τ(τ)^{≤w} when it is an
    /// honest τ-weight vector off the line of 1⊗1.
    pub fn f_witness(&self, tau: &Character, w: &WeylElement) -> Result<Option<(SeriesVector, usize)>> {
        let ps = PrincipalSeries::new(self.hecke.clone(), tau.clone(), w.len());
        let x = match ps.ev_vector(&self.hecke.f(w)) {
            Ok(x) => x,
            Err(Error::Singular(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if x.coeff(w).is_zero() || !ps.is_weight_vector(tau, &x)? {
            return Ok(None);
        }
        let dim = ps.weight_space(tau, w)?.len();
        if dim < 2 {
            return Err(Error::Assertion(format!(
                "F_{w}(tau) is a weight vector but the kernel below {w} is a line"
            )));
        }
        Ok(Some((x, dim)))
    }
}

fn proportional(x: &SeriesVector, one: &SeriesVector) -> bool {
    let c = x.coeff(&one.support()[0]);
    x.sub(&one.scale(&c)).is_zero()
}

/// Elements of the ball generated by `gens`, allowing intermediate lengths
/// up to 2L+1.
fn reflection_closure(rd: &RootDatum, gens: &[WeylElement], l: usize) -> Vec<WeylElement> {
    let cap = 2 * l + 1;
    let mut seen: BTreeSet<WeylElement> = BTreeSet::from([rd.identity()]);
    let mut queue = VecDeque::from([rd.identity()]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let v = rd.mul(&w, g);
            if v.len() <= cap && seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().filter(|w| w.len() <= l).collect()
}

/// Greedy generators: scan by (length, word) and keep elements outside
/// the closure of the ones kept so far.
fn minimal_generators(rd: &RootDatum, elems: &[WeylElement], l: usize) -> Vec<WeylElement> {
    let mut gens: Vec<WeylElement> = Vec::new();
    let mut span: BTreeSet<WeylElement> = BTreeSet::from([rd.identity()]);
    for w in elems {
        if !span.contains(w) {
            gens.push(w.clone());
            span = reflection_closure(rd, &gens, l).into_iter().collect();
        }
    }
    gens
}

// ----- one-dimensional representations -------------------------------------

/// A one-dimensional representation: scalars for H_s and a character.
#[derive(Clone, Debug)]
pub struct OneDimRep {
    pub name: String,
    pub h: Vec<Fe>,
    pub tau: Character,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneDimCheck {
    pub rep: String,
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientCheck {
    pub epsilon: i64,
    pub w: String,
    pub coefficient: String,
    pub expected: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct OneDimReport {
    pub reps: Vec<OneDimRep>,
    pub checks: Vec<OneDimCheck>,
    pub quotient: Vec<QuotientCheck>,
}

impl OneDimReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds) && self.quotient.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> Value {
        let reps: Vec<Value> = self
            .reps
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "H_s": r.h.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "tau_on_Y": r.tau.values().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"reps": reps, "checks": self.checks, "quotient_line": self.quotient})
    }
}

/// triv and St, their relation checks, and for equal parameters the
/// quotient-line action of H_w for ℓ(w) ≤ `qlen`.
pub fn one_dim_reps(hecke: &Arc<Hecke>, qlen: usize) -> Result<OneDimReport> {
    let rd = hecke.root_datum();
    let n = rd.rank();
    let tau0 = hecke.tau0()?.clone();
    let st_tau = Character::new(tau0.values().iter().map(|x| x.inv()).collect::<Result<_>>()?)?;
    let reps = vec![
        OneDimRep {
            name: "triv".into(),
            h: (0..n).map(|s| rd.sigma(s).clone()).collect(),
            tau: tau0.clone(),
        },
        OneDimRep {
            name: "St".into(),
            h: (0..n).map(|s| -rd.sigma(s).inv().unwrap()).collect::<Vec<_>>(),
            tau: st_tau.clone(),
        },
    ];
    let mut checks = Vec::new();
    let d = hecke.nvars();
    for rep in &reps {
        for s in 0..n {
            let sig = rd.sigma(s);
            let h = &rep.h[s];
            let a = sig - &sig.inv()?;
            let bl2 = &(h * h) == &(&(&a * h) + &Fe::one());
            checks.push(OneDimCheck {
                rep: rep.name.clone(),
                relation: format!("H_s{}^2 = (sigma - sigma^-1) H_s{} + 1", s + 1, s + 1),
                holds: bl2,
            });
            let sref = rd.simple_reflection(s);
            for j in 0..d {
                let mut lam = vec![0i64; d];
                lam[j] = 1;
                let th = Laurent::monomial(&lam);
                let diff = th.sub(&th.weyl_act(&sref));
                let rhs = hecke.q_s(s).mul(&RatFn::from(diff));
                let rhs = rhs
                    .as_laurent()
                    .ok_or_else(|| Error::Assertion("Q_s(Z^y - Z^{s y}) is not a Laurent polynomial".into()))?
                    .evaluate(rep.tau.values());
                let lhs = h * &(&rep.tau.value(&lam) - &rep.tau.value(&sref.act_y(&lam)));
                checks.push(OneDimCheck {
                    rep: rep.name.clone(),
                    relation: format!("Z^y{} H_s{} - H_s{} Z^(s y{}) = Q_s(...) at y{}", j + 1, s + 1, s + 1, j + 1, j + 1),
                    holds: lhs == rhs,
                });
            }
            checks.push(OneDimCheck {
                rep: rep.name.clone(),
                relation: format!("tau(alpha_{}^vee) = sigma sigma' to the power +-1", s + 1),
                holds: {
                    let v = rep.tau.coroot_value(rd, &unit(n, s));
                    let q = sig * rd.sigma_prime(s);
                    v == q || v == q.inv()?
                },
            });
        }
    }

    let mut quotient = Vec::new();
    let equal = (0..n).all(|s| rd.sigma(s) == rd.sigma(0) && rd.sigma_prime(s) == rd.sigma(0));
    if equal {
        let sigma = rd.sigma(0).clone();
        for (eps, tau) in [(1i64, &tau0), (-1i64, &st_tau)] {
            let ps = PrincipalSeries::new(hecke.clone(), tau.clone(), qlen);
            let ball = rd.bruhat_ball(qlen);
            let xis: Vec<SeriesVector> = ball.iter().map(|v| ps.xi(v)).collect::<Result<_>>()?;
            let m: linalg::Matrix = ball
                .iter()
                .map(|u| xis.iter().map(|x| x.coeff(u)).collect())
                .collect();
            let per_step = if eps == 1 { sigma.clone() } else { -sigma.inv()? };
            for w in &ball {
                let hw = ps.act_h_w(w, &ps.one())?;
                let sol = linalg::solve(&m, ball.len(), &hw.to_column(&ball))
                    .ok_or_else(|| Error::Assertion(format!("H[{w}] is outside the xi span")))?;
                let expected = per_step.pow(w.len() as i64)?;
                quotient.push(QuotientCheck {
                    epsilon: eps,
                    w: w.to_string(),
                    coefficient: sol[0].to_string(),
                    expected: expected.to_string(),
                    holds: sol[0] == expected,
                });
            }
        }
    }
    Ok(OneDimReport { reps, checks, quotient })
}

fn unit(n: usize, s: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[s] = 1;
    e
}

// ----- degenerate monoid characters ----------------------------------------

/// Outcome of the sampling checks for the indicator of the closure of a
/// non-spherical face.
#[derive(Clone, Debug, Serialize)]
pub struct DegenerateReport {
    pub face: Vec<usize>,
    pub box_radius: i64,
    pub box_points_in_tits_cone: usize,
    pub box_points_undecided: usize,
    pub face_points: Vec<Vec<i64>>,
    pub pairs_checked: usize,
    pub pairs_on_face: usize,
    pub multiplicativity_failures: usize,
    pub undecided_skipped: usize,
    pub open_cone_points: usize,
    pub open_cone_nonzero: usize,
    pub identity_value: u8,
}

/// Whether the parabolic subgroup W_J is finite, via positive definiteness
/// of its cosine form.
pub fn is_spherical(a: &[Vec<i64>], j: &[usize]) -> bool {
    let n = j.len();
    let mut b = vec![vec![0f64; n]; n];
    for (x, &p) in j.iter().enumerate() {
        for (y, &q) in j.iter().enumerate() {
            b[x][y] = if p == q {
                1.0
            } else {
                let m = match a[p][q] * a[q][p] {
                    0 => 2.0,
                    1 => 3.0,
                    2 => 4.0,
                    3 => 6.0,
                    _ => return false,
                };
                -(std::f64::consts::PI / m).cos()
            };
        }
    }
    // leading principal minors by Gaussian elimination
    for k in 0..n {
        if b[k][k] <= 1e-9 {
            return false;
        }
        for r in k + 1..n {
            let f = b[r][k] / b[k][k];
            for c in k..n {
                b[r][c] -= f * b[k][c];
            }
        }
    }
    true
}

/// τ⁺ = indicator of the closure of the face F^v(J): 1 exactly on dominant
/// x with α_j(x) = 0 for j ∈ J, found through the dominance search.
pub fn degenerate_value(rd: &RootDatum, face: &[usize], x: &[i64]) -> Option<u8> {
    let xr: Vec<BigRational> = x.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    match rd.to_dominant(&xr, None) {
        Dominance::Decided { w, face: f, .. } => {
            Some(u8::from(w.is_identity() && face.iter().all(|j| f.contains(j))))
        }
        Dominance::NotDecided => None,
    }
}

/// Samples lattice points of the Tits cone in a box and checks that the
/// indicator of the closed face J is multiplicative on the monoid Y ∩ 𝒯
/// and vanishes on the open Tits cone.
pub fn degenerate_character_demo(
    rd: &RootDatum,
    face: &[usize],
    samples: usize,
    radius: i64,
    seed: u64,
) -> Result<DegenerateReport> {
    let a = rd.cartan();
    if is_spherical(a, face) {
        return Err(Error::Hypothesis(format!("face {face:?} is spherical")));
    }
    let d = rd.rank_y();
    let mut tits = Vec::new();
    let mut face_pts = Vec::new();
    let mut undecided_box = 0;
    let mut open_points = 0;
    let mut open_nonzero = 0;
    let side = (2 * radius + 1) as usize;
    for idx in 0..side.pow(d as u32) {
        let mut k = idx;
        let x: Vec<i64> = (0..d)
            .map(|_| {
                let c = (k % side) as i64 - radius;
                k /= side;
                c
            })
            .collect();
        let xr: Vec<BigRational> = x.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        match rd.to_dominant(&xr, None) {
            Dominance::Decided { w, face: f, .. } => {
                let val = u8::from(w.is_identity() && face.iter().all(|j| f.contains(j)));
                if is_spherical(a, &f) {
                    open_points += 1;
                    open_nonzero += usize::from(val);
                }
                if val == 1 {
                    face_pts.push(x.clone());
                }
                tits.push(x);
            }
            Dominance::NotDecided => undecided_box += 1,
        }
    }
    let identity_value = degenerate_value(rd, face, &vec![0; d]).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        if !face_pts.is_empty() && rng.gen_bool(0.3) {
            face_pts[rng.gen_range(0..face_pts.len())].clone()
        } else {
            tits[rng.gen_range(0..tits.len())].clone()
        }
    };
    let (mut checked, mut on_face, mut failures, mut skipped) = (0, 0, 0, 0);
    let mut attempts = 0;
    while checked < samples && attempts < 100 * samples.max(1) {
        attempts += 1;
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        let sum: Vec<i64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        let (Some(vx), Some(vy), Some(vs)) = (
            degenerate_value(rd, face, &x),
            degenerate_value(rd, face, &y),
            degenerate_value(rd, face, &sum),
        ) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        on_face += usize::from(vx * vy == 1);
        if vs != vx * vy {
            failures += 1;
        }
    }
    Ok(DegenerateReport {
        face: face.to_vec(),
        box_radius: radius,
        box_points_in_tits_cone: tits.len(),
        box_points_undecided: undecided_box,
        face_points: face_pts,
        pairs_checked: checked,
        pairs_on_face: on_face,
        multiplicativity_failures: failures,
        undecided_skipped: skipped,
        open_cone_points: open_points,
        open_cone_nonzero: open_nonzero,
        identity_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{cyclotomic_field, Field};

    fn f1(field: Field) -> Arc<Hecke> {
        let rd = RootDatum::new(
            vec![vec![2, -2], vec![-4, 2]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![2, -2], vec![-4, 2]],
            vec![Fe::int(2); 2],
            vec![Fe::int(2); 2],
        )
        .unwrap();
        Arc::new(Hecke::new(Arc::new(rd), field))
    }

    #[test]
    fn dihedral_normal_forms_round_trip() {
        let h = f1(Field::rationals());
        let rd = h.root_datum();
        for w in rd.bruhat_ball(7) {
            let d = Dihedral::of(&w);
            assert_eq!(d.len(), w.len());
            assert_eq!(d.element(rd), w);
        }
    }

    #[test]
    fn subgroup_shapes() {
        let r01 = DihedralSubgroup::generated_by(&[
            Dihedral::letter(0),
            Dihedral { reflection: true, j: 2 },
        ]);
        assert_eq!(r01.shape(), Shape::Dihedral { k: 0, m: 1 });
        assert_eq!(
            DihedralSubgroup::generated_by(&[Dihedral::letter(0), Dihedral::letter(1)]).shape(),
            Shape::Whole
        );
        assert_eq!(
            DihedralSubgroup::generated_by(&[Dihedral { reflection: false, j: 3 }]).shape(),
            Shape::Rotation { k: 3 }
        );
    }

    #[test]
    fn b3_fixture_is_dihedral() {
        let field = cyclotomic_field(4).unwrap();
        let z = field.zeta();
        let h = f1(field);
        let c = Criteria::new(h.clone());
        let tau = Character::new(vec![z.clone(), z]).unwrap();
        let fix = c.fixers(&tau, 6).unwrap();
        let r2 = fix.rank2.as_ref().unwrap();
        assert_eq!(r2.stabilizer_shape, Shape::Dihedral { k: 0, m: 1 });
        assert_eq!(r2.stabilizer, r2.reflection);
        let words: Vec<String> = fix.stabilizer_generators.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["s1", "s2.s1.s2"]);
        let ts = c.tau_simple(&tau, &fix).unwrap();
        let words: Vec<String> = ts.reflections.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["s1", "s2.s1.s2"]);
        assert!(c.in_u(&tau, 6).unwrap().is_certified());
    }

    #[test]
    fn trivial_character_has_simple_tau_simple_set() {
        let h = f1(Field::rationals());
        let c = Criteria::new(h.clone());
        let tau = Character::trivial(2);
        let fix = c.fixers(&tau, 5).unwrap();
        assert_eq!(fix.rank2.as_ref().unwrap().reflection_shape, Shape::Whole);
        let ts = c.tau_simple(&tau, &fix).unwrap();
        assert_eq!(ts.reflections.len(), 2);
        assert!(ts.reflections.iter().all(|r| r.len() == 1));
    }

    #[test]
    fn u_fails_at_q() {
        let h = f1(Field::rationals());
        let c = Criteria::new(h.clone());
        let tau = Character::from_coroot_values(h.root_datum(), &[Fe::int(4), Fe::int(3)], h.field());
        if let Ok(tau) = tau {
            let u = c.in_u(&tau, 3).unwrap();
            assert_eq!(u, UMembership::No { coroot: Coroot(vec![1, 0]) });
        }
    }
}
