//! Property tests for the structural invariants of every module.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use kmhecke::cli::{cmd_fixers, cmd_verdict, Session, SessionConfig};
use kmhecke::coxeter::{Coroot, RootDatum, WeylElement};
use kmhecke::criteria::{Criteria, Status};
use kmhecke::hecke::{Hecke, HeckeElement};
use kmhecke::laurent::{Character, Laurent, RatFn};
use kmhecke::scalars::{cyclotomic_field, Fe, Field};
use kmhecke::series::{PrincipalSeries, SeriesVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::*;

fn light() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn heavy() -> ProptestConfig {
    ProptestConfig { cases: 10, ..ProptestConfig::default() }
}

fn rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// A random element of ℚ(ζ_n) given by up to 2·deg coefficients, so that
/// reduction modulo the cyclotomic polynomial is exercised.
fn elem(field: Field) -> impl Strategy<Value = Fe> {
    let k = 2 * field.degree();
    proptest::collection::vec(rat(), 1..=k).prop_map(move |c| field.from_coeffs(c))
}

fn word(rank: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..rank, 0..=max)
}

fn laurent(d: usize) -> impl Strategy<Value = Laurent> {
    proptest::collection::vec((proptest::collection::vec(-2i64..=2, d), -3i64..=3), 0..=4).prop_map(
        move |terms| {
            terms.into_iter().fold(Laurent::zero(d), |acc, (lam, c)| {
                acc.add(&Laurent::term(&lam, Fe::int(c)))
            })
        },
    )
}

fn simple(rd: &RootDatum, s: usize) -> Vec<i64> {
    let mut e = vec![0; rd.rank()];
    e[s] = 1;
    e
}

// ----- scalars -------------------------------------------------------------

proptest! {
    #![proptest_config(light())]

    #[test]
    fn field_axioms((field, a, b, c) in prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]).prop_flat_map(|n| {
        let field = cyclotomic_field(n).unwrap();
        (Just(field.clone()), elem(field.clone()), elem(field.clone()), elem(field))
    })) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &a), &field.zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        // canonical form: fewer coefficients than the degree, equality by value
        prop_assert!(a.coeffs().len() <= field.degree());
        let again = field.from_coeffs(a.coeffs().to_vec());
        prop_assert_eq!(again, a);
    }
}

#[test]
fn zeta_has_exact_order() {
    for n in [1u32, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15] {
        let field = cyclotomic_field(n).unwrap();
        let z = field.zeta();
        assert_eq!(z.is_root_of_unity_order(64), Some(u64::from(n)), "zeta_{n}");
        assert!(z.pow(i64::from(n)).unwrap().is_one());
    }
}

// ----- coxeter ----------------------------------------------------------------

proptest! {
    #![proptest_config(light())]

    /// ℓ(ws) = ℓ(w) ± 1, with the + sign exactly when w.α_s∨ is positive.
    #[test]
    fn length_changes_by_one(w in word(3, 8), s in 0usize..3) {
        let rd = a3_datum();
        let w = rd.from_word(&w);
        let ws = rd.mul_simple(&w, s);
        let up = ws.len() == w.len() + 1;
        prop_assert!(up || ws.len() + 1 == w.len());
        let img = Coroot(w.act_coroot(&simple(&rd, s)));
        prop_assert_eq!(up, img.is_positive());
        prop_assert_eq!(up, !w.has_right_descent(s));
    }

    #[test]
    fn inversion_set_ignores_the_reduced_word(w in word(3, 7)) {
        let rd = a3_datum();
        let w = rd.from_word(&w);
        let expect = rd.inversion_set(&w);
        prop_assert_eq!(expect.len(), w.len());
        for r in rd.reduced_words(&w) {
            let n: BTreeSet<Coroot> = rd.inversion_set_from_word(&r).into_iter().collect();
            prop_assert_eq!(&n, &expect);
        }
    }

    /// N(w) = {β > 0 : w.β < 0}. In this convention N(vs) = s.N(v) ⊔ {α_s∨}
    /// and N(sv) = N(v) ⊔ {v⁻¹.α_s∨} whenever the product is longer.
    #[test]
    fn inversion_set_recursion(v in word(3, 7), s in 0usize..3) {
        let rd = a3_datum();
        let v = rd.from_word(&v);
        let n_v = rd.inversion_set(&v);
        let sref = rd.simple_reflection(s);
        let alpha = Coroot(simple(&rd, s));

        let vs = rd.mul_simple(&v, s);
        if vs.len() > v.len() {
            let mut expect: BTreeSet<Coroot> = n_v.iter().map(|b| Coroot(sref.act_coroot(&b.0))).collect();
            prop_assert!(expect.insert(alpha.clone()));
            prop_assert_eq!(rd.inversion_set(&vs), expect);
        }
        let sv = rd.simple_mul(s, &v);
        if sv.len() > v.len() {
            let mut expect = n_v.clone();
            prop_assert!(expect.insert(Coroot(v.act_coroot_inv(&alpha.0))));
            prop_assert_eq!(rd.inversion_set(&sv), expect);
        }
    }
}

#[test]
fn bruhat_is_a_partial_order() {
    let rd = a3_datum();
    let ball = rd.bruhat_ball(3);
    let leq = |a: &WeylElement, b: &WeylElement| rd.bruhat_leq(a, b);
    for a in &ball {
        assert!(leq(a, a));
        for b in &ball {
            if a != b && leq(a, b) {
                assert!(!leq(b, a), "{a} and {b}");
                assert!(a.len() < b.len());
            }
            for c in &ball {
                if leq(a, b) && leq(b, c) {
                    assert!(leq(a, c), "{a} <= {b} <= {c}");
                }
            }
        }
    }
}

// ----- laurent ----------------------------------------------------------------

proptest! {
    #![proptest_config(light())]

    #[test]
    fn weyl_action_is_a_ring_map(a in laurent(3), b in laurent(3), w in word(3, 5), v in word(3, 3)) {
        let rd = a3_datum();
        let w = rd.from_word(&w);
        let v = rd.from_word(&v);
        prop_assert_eq!(a.mul(&b).weyl_act(&w), a.weyl_act(&w).mul(&b.weyl_act(&w)));
        prop_assert_eq!(a.add(&b).weyl_act(&w), a.weyl_act(&w).add(&b.weyl_act(&w)));
        // a left action: (θ^v)^w = θ^{wv}
        prop_assert_eq!(a.weyl_act(&v).weyl_act(&w), a.weyl_act(&rd.mul(&w, &v)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in laurent(2), b in laurent(2), i in 0usize..4, j in 0usize..4) {
        let units = f4().roots_of_unity();
        let tau = vec![&units[i] * &Fe::int(2), units[j].clone()];
        prop_assert_eq!(a.mul(&b).evaluate(&tau), &a.evaluate(&tau) * &b.evaluate(&tau));
        prop_assert_eq!(a.add(&b).evaluate(&tau), &a.evaluate(&tau) + &b.evaluate(&tau));
    }

    #[test]
    fn reduction_is_idempotent(n in laurent(2), d in laurent(2)) {
        prop_assume!(!d.is_zero());
        let r = RatFn::reduce(n.clone(), d.clone()).unwrap();
        let (n2, d2) = r.parts();
        let again = RatFn::reduce(n2.clone(), d2.clone()).unwrap();
        prop_assert_eq!(again.parts(), (n2, d2));
        // the reduced form represents the same function: n·d2 = n2·d
        let (n2, d2) = r.parts();
        prop_assert_eq!(n.mul(&d2), n2.mul(&d));
    }
}

// ----- hecke -------------------------------------------------------------------

/// Σ H_{w_i}·c_i Z^{λ_i} with words of length ≤ 2.
fn hecke_elem() -> impl Strategy<Value = Vec<(Vec<u8>, Vec<i64>, i64)>> {
    proptest::collection::vec((word(2, 2), proptest::collection::vec(-1i64..=1, 2), -2i64..=2), 1..=2)
}

fn build(h: &Hecke, spec: &[(Vec<u8>, Vec<i64>, i64)]) -> HeckeElement {
    let rd = h.root_datum();
    spec.iter().fold(HeckeElement::zero(kmhecke::hecke::Basis::H, 2), |acc, (w, lam, c)| {
        let term = h.h(&rd.from_word(w)).mul_coeff(&RatFn::from(Laurent::term(lam, Fe::int(*c))));
        acc.add(&term)
    })
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn multiplication_is_associative(a in hecke_elem(), b in hecke_elem(), c in hecke_elem()) {
        let h = f1();
        let (a, b, c) = (build(&h, &a), build(&h, &b), build(&h, &c));
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
    }

    #[test]
    fn intertwining(lam in proptest::collection::vec(-2i64..=2, 2), w in word(2, 4)) {
        let h = f1();
        let w = h.root_datum().from_word(&w);
        prop_assert!(h.intertwine_check(&RatFn::monomial(&lam), &w));
    }

    #[test]
    fn commutator_defect_lies_below(lam in proptest::collection::vec(-2i64..=2, 2), w in word(2, 4)) {
        let h = f1();
        let w = h.root_datum().from_word(&w);
        let defect = h.commutator_defect(&RatFn::monomial(&lam), &w).unwrap();
        for v in defect.support() {
            prop_assert!(v != w && h.root_datum().bruhat_leq(&v, &w));
        }
    }

    #[test]
    fn f_products(w1 in word(2, 2), w2 in word(2, 2)) {
        let h = f1();
        let rd = h.root_datum();
        let (w1, w2) = (rd.from_word(&w1), rd.from_word(&w2));
        let p = h.f_product_scalar(&w1, &w2).unwrap();
        if rd.mul(&w1, &w2).len() == w1.len() + w2.len() {
            prop_assert!(p.is_one());
        }
    }
}

#[test]
fn quadratic_relation() {
    for h in [f1(), a2()] {
        let rd = h.root_datum();
        for s in 0..rd.rank() {
            let sg = rd.sigma(s).clone();
            let hs = h.h_simple(s);
            let lhs = hs.sub(&h.constant(sg.clone()));
            let rhs = hs.add(&h.constant(sg.inv().unwrap()));
            assert!(h.mul(&lhs, &rhs).is_zero());
        }
    }
}

// ----- series --------------------------------------------------------------------

fn vector(entries: &[(Vec<u8>, i64)], rd: &RootDatum) -> SeriesVector {
    let mut x = SeriesVector::zero();
    for (w, c) in entries {
        x.add_term(&rd.from_word(w), &Fe::int(*c));
    }
    x
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn module_action(a in hecke_elem(), b in hecke_elem(), x in proptest::collection::vec((word(2, 2), -3i64..=3), 1..=3)) {
        let h = f1();
        let ps = PrincipalSeries::new(h.clone(), tau_reg(), 6);
        let x = vector(&x, h.root_datum());
        let (a, b) = (build(&h, &a), build(&h, &b));
        let lhs = ps.act(&h.mul(&a, &b), &x).unwrap();
        let rhs = ps.act(&a, &ps.act(&b, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// dim I_τ(w.τ, gen)^{≤v} = |{u ≤ v : u.τ = w.τ}| on the length-4 ball.
#[test]
fn generalized_weight_dimensions() {
    let cases: Vec<(Arc<Hecke>, Character)> = vec![
        (f1(), tau_reg()),
        (f1(), tau_b3()),
        (f1(), Character::trivial(2)),
        (a2(), tau_z()),
    ];
    for (h, tau) in cases {
        let rd = h.root_datum();
        let ps = PrincipalSeries::new(h.clone(), tau.clone(), 4);
        for v in rd.bruhat_ball(4) {
            let below = rd.lower_interval(&v);
            let mut chars: Vec<Character> = Vec::new();
            for u in &below {
                let chi = tau.act(rd, u);
                if !chars.contains(&chi) {
                    chars.push(chi);
                }
            }
            for chi in chars {
                let expect = below.iter().filter(|u| tau.act(rd, u) == chi).count();
                let got = ps.generalized_weight_space(&chi, &v).unwrap().len();
                assert_eq!(got, expect, "tau = {tau}, chi = {chi}, v = {v}");
            }
        }
    }
}

/// For regular τ the ξ_w span the truncation and carry distinct weights.
#[test]
fn regular_series_splits() {
    let h = f1();
    let rd = h.root_datum();
    let ps = PrincipalSeries::new(h.clone(), tau_reg(), 4);
    let ball = rd.bruhat_ball(4);
    let mut weights: Vec<Character> = Vec::new();
    let mut cols = Vec::new();
    for w in &ball {
        let x = ps.xi(w).unwrap();
        let chi = tau_reg().act(rd, w);
        assert!(ps.is_weight_vector(&chi, &x).unwrap());
        assert!(!weights.contains(&chi));
        weights.push(chi);
        cols.push(x.to_column(&ball));
    }
    assert_eq!(kmhecke::linalg::rank(&cols, ball.len()), ball.len());
}

/// Υ_x for x = ξ_w is nonzero and sends weight vectors to nonzero vectors.
#[test]
fn upsilon_is_injective_on_weight_vectors() {
    let h = f1();
    let rd = h.root_datum();
    let target = PrincipalSeries::new(h.clone(), tau_reg(), 5);
    for w in rd.bruhat_ball(2) {
        let source = tau_reg().act(rd, &w);
        let ups = target.upsilon(&source, target.xi(&w).unwrap()).unwrap();
        let one = SeriesVector::basis(&rd.identity());
        assert_eq!(ups.apply(&one).unwrap(), *ups.vector());
        let sps = PrincipalSeries::new(h.clone(), source.clone(), 3);
        for u in rd.bruhat_ball(3) {
            let y = sps.xi(&u).unwrap();
            assert!(!ups.apply(&y).unwrap().is_zero(), "Upsilon kills xi_{u} for w = {w}");
        }
    }
}

// ----- criteria --------------------------------------------------------------

fn check_character(h: &Arc<Hecke>, tau: &Character, l: usize) {
    let crit = Criteria::new(h.clone());
    let fix = crit.fixers(tau, l).unwrap();
    let stab: BTreeSet<&WeylElement> = fix.stabilizer_in_ball.iter().collect();
    for w in &fix.reflection_subgroup_in_ball {
        assert!(stab.contains(w), "{w} in W_(tau) but not W_tau for {tau}");
    }
    for r in &fix.reflections {
        assert!(h.root_datum().is_reflection(r));
    }
    let ts = crit.tau_simple(tau, &fix).unwrap();
    for w in &fix.reflection_subgroup_in_ball {
        assert!(ts.tau_length(w).is_some(), "{w} not reached by tau-simple words");
    }

    let v = crit.verdict(tau, l).unwrap();
    if v.status == Status::IrreducibleExact {
        assert!(v.weight_dims.values().all(|&d| d == 1), "{tau}: {:?}", v.weight_dims);
    }
    for r in &v.reasons {
        if r.citation == "extra-weight-vector" {
            let rd = h.root_datum();
            let word = kmhecke::coxeter::parse_word(r.witness["w"].as_str().unwrap(), rd.rank()).unwrap();
            let w = rd.from_word(&word);
            assert_eq!(tau.act(rd, &w), *tau);
            assert!(!fix.in_reflection_subgroup(&w));
            let (x, dim) = crit.f_witness(tau, &w).unwrap().expect("witness re-validates");
            assert!(dim >= 2);
            let ps = PrincipalSeries::new(h.clone(), tau.clone(), w.len());
            assert!(ps.is_weight_vector(tau, &x).unwrap());
        }
    }
}

#[test]
fn fixture_characters() {
    check_character(&f1(), &tau_reg(), 5);
    check_character(&f1(), &tau_b3(), 5);
    check_character(&f1(), &Character::trivial(2), 5);
    check_character(&a2(), &tau_z(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn random_root_of_unity_characters(i in 0i64..12, j in 0i64..12) {
        let rd = f1_datum();
        let field = cyclotomic_field(12).unwrap();
        let z = field.zeta();
        let h = Arc::new(Hecke::new(Arc::new(rd), field));
        let tau = chr(vec![z.pow(i).unwrap(), z.pow(j).unwrap()]);
        check_character(&h, &tau, 4);
    }
}

// ----- cli ------------------------------------------------------------------------

#[test]
fn json_output_is_deterministic() {
    let run = || {
        let sess = Session::load(SessionConfig::default_f1()).unwrap();
        let names: Vec<String> = sess.characters.keys().cloned().collect();
        names
            .iter()
            .map(|n| {
                let v = cmd_verdict(&sess, n).unwrap();
                let f = cmd_fixers(&sess, n).unwrap();
                (serde_json::to_string(&v).unwrap(), serde_json::to_string(&f).unwrap())
            })
            .collect::<Vec<_>>()
    };
    let first = run();
    assert_eq!(first, run());
    for (v, _) in &first {
        let v: serde_json::Value = serde_json::from_str(v).unwrap();
        for key in ["status", "truncation", "reasons", "weight_dims"] {
            assert!(v.get(key).is_some(), "verdict JSON lacks {key}");
        }
    }
}
