//! Property tests for the graded algebra, plus an independent word-based
//! Grassmann implementation used as an oracle for products, Δ and the bracket.

use std::collections::BTreeMap;
use std::sync::Arc;

use bv_core::algebra::random::{random_parity, random_superfunction, trial_rng, RandomShape};
use bv_core::algebra::{Context, Generator, GeneratorKind, Parity, Superfunction};
use bv_core::geom::{contract, DifferentialForm, PolyvectorField, ScalarExpr};
use bv_core::operators::{bv_delta, bv_delta_omega, schouten_bracket};
use num::rational::Rational64;
use num::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn ctx() -> Arc<Context> {
    Context::new(2, 1)
}

fn draw(seed: u64, stream: u64, parity: Option<Parity>) -> Superfunction {
    let mut rng = trial_rng(seed, stream, 0);
    random_superfunction(&mut rng, &ctx(), &RandomShape::default(), parity)
}

fn parity_sign(a: &Superfunction, b: &Superfunction) -> i64 {
    if a.parity() == Some(Parity::Odd) && b.parity() == Some(Parity::Odd) {
        -1
    } else {
        1
    }
}

// ---- word oracle -------------------------------------------------------

/// Generators by `(kind rank, index)`; the rank order matches the canonical one.
type Letter = (u8, usize);
type Words = BTreeMap<Vec<Letter>, Rational64>;

fn odd(l: Letter) -> bool {
    l.0 == 1 || l.0 == 2
}

fn letter(g: Generator) -> Letter {
    let rank = match g.kind {
        GeneratorKind::Field => 0,
        GeneratorKind::Ghost => 1,
        GeneratorKind::Antifield => 2,
        GeneratorKind::Antighost => 3,
    };
    (rank, g.index)
}

fn token(l: Letter) -> String {
    let t = ["x", "c", "xs", "cs"][l.0 as usize];
    format!("{t}{}", l.1 + 1)
}

/// Bubble sort with a sign flip for every swap of two odd letters.
fn canonical(word: &[Letter]) -> Option<(Vec<Letter>, i64)> {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if odd(w[j]) && odd(w[j + 1]) {
                    sign = -sign;
                }
                w.swap(j, j + 1);
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && odd(p[0])) {
        return None;
    }
    Some((w, sign))
}

fn add_word(out: &mut Words, word: &[Letter], c: Rational64) {
    if let Some((w, s)) = canonical(word) {
        *out.entry(w).or_insert_with(Rational64::zero) += c * Rational64::from_integer(s);
    }
}

fn clean(mut w: Words) -> Words {
    w.retain(|_, c| !c.is_zero());
    w
}

fn left_d(f: &Words, g: Letter) -> Words {
    let mut out = Words::new();
    for (w, c) in f {
        for p in 0..w.len() {
            if w[p] == g {
                let before = w[..p].iter().filter(|&&l| odd(l)).count();
                let s = if odd(g) && before % 2 == 1 { -1 } else { 1 };
                let mut rest = w.clone();
                rest.remove(p);
                add_word(&mut out, &rest, *c * Rational64::from_integer(s));
            }
        }
    }
    clean(out)
}

fn right_d(f: &Words, g: Letter) -> Words {
    let mut out = Words::new();
    for (w, c) in f {
        for p in 0..w.len() {
            if w[p] == g {
                let after = w[p + 1..].iter().filter(|&&l| odd(l)).count();
                let s = if odd(g) && after % 2 == 1 { -1 } else { 1 };
                let mut rest = w.clone();
                rest.remove(p);
                add_word(&mut out, &rest, *c * Rational64::from_integer(s));
            }
        }
    }
    clean(out)
}

fn mul(a: &Words, b: &Words) -> Words {
    let mut out = Words::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            add_word(&mut out, &w, ca * cb);
        }
    }
    clean(out)
}

fn add(a: &Words, b: &Words, sign: i64) -> Words {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert_with(Rational64::zero) +=
            c * Rational64::from_integer(sign);
    }
    clean(out)
}

fn oracle_delta(f: &Words, n: usize, m: usize) -> Words {
    let mut out = Words::new();
    for i in 0..n {
        out = add(&out, &left_d(&left_d(f, (2, i)), (0, i)), 1);
    }
    for a in 0..m {
        out = add(&out, &left_d(&left_d(f, (3, a)), (1, a)), -1);
    }
    out
}

fn oracle_bracket(f: &Words, g: &Words, n: usize, m: usize) -> Words {
    let mut out = Words::new();
    let pairs = (0..n)
        .map(|i| ((0, i), (2, i)))
        .chain((0..m).map(|a| ((1, a), (3, a))));
    for (x, xs) in pairs {
        out = add(&out, &mul(&right_d(f, x), &left_d(g, xs)), 1);
        out = add(&out, &mul(&right_d(f, xs), &left_d(g, x)), -1);
    }
    out
}

fn random_words(rng: &mut impl Rng, n: usize, m: usize) -> Vec<(Vec<Letter>, i64)> {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let len = rng.gen_range(0..=4);
            let word = (0..len)
                .map(|_| {
                    let kind = rng.gen_range(0..4u8);
                    let range = if kind == 0 || kind == 2 { n } else { m };
                    (kind, rng.gen_range(0..range))
                })
                .collect();
            (word, rng.gen_range(-3..=3i64))
        })
        .collect()
}

/// Engine input built by parsing the words in their raw (unsorted) order.
fn engine_from_words(words: &[(Vec<Letter>, i64)], ctx: &Arc<Context>) -> Superfunction {
    let text: Vec<String> = words
        .iter()
        .map(|(w, c)| {
            let mut factors = vec![format!("({c})")];
            factors.extend(w.iter().map(|&l| token(l)));
            factors.join("*")
        })
        .collect();
    Superfunction::parse(&text.join(" + "), ctx).unwrap()
}

fn oracle_from_words(words: &[(Vec<Letter>, i64)]) -> Words {
    let mut out = Words::new();
    for (w, c) in words {
        add_word(&mut out, w, Rational64::from_integer(*c));
    }
    clean(out)
}

fn to_words(f: &Superfunction) -> Words {
    let mut out = Words::new();
    for (m, c) in f.terms() {
        let r = c.as_rational().expect("real rational coefficients");
        let mut w = Vec::new();
        for (g, e) in f.factors_of(m) {
            for _ in 0..e {
                w.push(letter(g));
            }
        }
        let r = Rational64::new(
            r.numer().try_into().expect("small numerator"),
            r.denom().try_into().expect("small denominator"),
        );
        out.insert(w, r);
    }
    out
}

#[test]
fn grassmann_oracle_agrees_on_products_delta_and_bracket() {
    let (n, m) = (2, 2);
    let ctx = Context::new(n, m);
    for trial in 0..400 {
        let mut rng = trial_rng(99, 0, trial);
        let fw = random_words(&mut rng, n, m);
        let gw = random_words(&mut rng, n, m);
        let (f, g) = (engine_from_words(&fw, &ctx), engine_from_words(&gw, &ctx));
        let (fo, go) = (oracle_from_words(&fw), oracle_from_words(&gw));
        assert_eq!(to_words(&f), fo, "parse of {fw:?}");
        assert_eq!(to_words(&(&f * &g)), mul(&fo, &go), "product {f} * {g}");
        assert_eq!(to_words(&bv_delta(&f)), oracle_delta(&fo, n, m), "Δ({f})");
        assert_eq!(
            to_words(&schouten_bracket(&f, &g)),
            oracle_bracket(&fo, &go, n, m),
            "{{{f}, {g}}}"
        );
    }
}

#[test]
fn oracle_reproduces_the_hand_values() {
    let one: Words = [(vec![], Rational64::one())].into_iter().collect();
    let w = |v: Vec<Letter>| -> Words { [(v, Rational64::one())].into_iter().collect() };
    assert_eq!(oracle_delta(&w(vec![(0, 0), (2, 0)]), 1, 1), one);
    assert_eq!(
        oracle_delta(&w(vec![(1, 0), (3, 0)]), 1, 1),
        add(&Words::new(), &one, -1)
    );
    assert_eq!(
        oracle_bracket(&w(vec![(0, 0)]), &w(vec![(2, 0)]), 1, 1),
        one
    );
    assert_eq!(
        oracle_bracket(&w(vec![(1, 0)]), &w(vec![(3, 0)]), 1, 1),
        one
    );
}

// ---- properties ---------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1, 0);
        let (pa, pb) = (random_parity(&mut rng), random_parity(&mut rng));
        let a = draw(seed, 2, Some(pa));
        let b = draw(seed, 3, Some(pb));
        prop_assert_eq!(&a * &b, (&b * &a).scale_int(parity_sign(&a, &b)));
    }

    #[test]
    fn associativity(seed in any::<u64>()) {
        let (a, b, c) = (draw(seed, 4, None), draw(seed, 5, None), draw(seed, 6, None));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn ghost_degree_is_additive(seed in any::<u64>()) {
        let (a, b) = (draw(seed, 7, None), draw(seed, 8, None));
        if let (bv_core::algebra::GhostDegree::Homogeneous(da), bv_core::algebra::GhostDegree::Homogeneous(db)) =
            (a.ghost_degree(), b.ghost_degree())
        {
            let ab = &a * &b;
            if !ab.is_zero() {
                prop_assert_eq!(ab.ghost_degree(), bv_core::algebra::GhostDegree::Homogeneous(da + db));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let f = draw(seed, 9, None);
        let text = f.to_string();
        prop_assert_eq!(Superfunction::parse(&text, &ctx()).unwrap(), f);
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let f = draw(seed, 10, None);
        let once = f.recanonicalize();
        prop_assert_eq!(&once, &f);
        prop_assert_eq!(once.recanonicalize(), once);
    }

    #[test]
    fn left_derivatives_graded_commute(seed in any::<u64>(), gi in 0usize..6, hi in 0usize..6) {
        let f = draw(seed, 11, None);
        let gens = [
            Generator::field(0), Generator::field(1), Generator::ghost(0),
            Generator::antifield(0), Generator::antifield(1), Generator::antighost(0),
        ];
        let (g, h) = (gens[gi], gens[hi]);
        let odd = |x: Generator| matches!(x.kind, GeneratorKind::Ghost | GeneratorKind::Antifield);
        let sign = if odd(g) && odd(h) { -1 } else { 1 };
        let gh = f.left_derivative(h).left_derivative(g);
        let hg = f.left_derivative(g).left_derivative(h);
        prop_assert_eq!(gh, hg.scale_int(sign));
    }

    #[test]
    fn twisted_laplacian_squares_to_zero(seed in any::<u64>()) {
        let ctx = ctx();
        let mut rng = trial_rng(seed, 12, 0);
        let f = random_superfunction(&mut rng, &ctx, &RandomShape::default(), None);
        let shape = RandomShape { hbar_probability: 0.0, ..RandomShape::default() };
        let log = random_superfunction(&mut rng, &ctx, &shape, Some(Parity::Even))
            .filter_terms(|factors| factors.iter().all(|(g, _)| g.kind == GeneratorKind::Field));
        let once = bv_delta_omega(&f, &log).unwrap();
        prop_assert!(bv_delta_omega(&once, &log).unwrap().is_zero());
    }
}

fn random_form_terms(
    rng: &mut impl Rng,
    dim: usize,
    degree: usize,
) -> Vec<(Vec<usize>, ScalarExpr)> {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut idx: Vec<usize> = (0..dim).collect();
            for i in (1..dim).rev() {
                idx.swap(i, rng.gen_range(0..=i));
            }
            idx.truncate(degree);
            idx.sort_unstable();
            let mut c = ScalarExpr::from_int(rng.gen_range(-3..=3));
            for _ in 0..rng.gen_range(0..=2) {
                c = &c * &ScalarExpr::x(rng.gen_range(0..dim));
            }
            (idx, c)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn contraction_of_a_wedge_is_iterated(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = trial_rng(seed, 13, 0);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim - p);
        let r = rng.gen_range(p + q..=dim);
        let a = PolyvectorField::from_terms(dim, p, random_form_terms(&mut rng, dim, p)).unwrap();
        let b = PolyvectorField::from_terms(dim, q, random_form_terms(&mut rng, dim, q)).unwrap();
        let w = DifferentialForm::from_terms(dim, r, random_form_terms(&mut rng, dim, r)).unwrap();
        let lhs = contract(&a.wedge(&b).unwrap(), &w).unwrap();
        let rhs = contract(&a, &contract(&b, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_is_multiplicative(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = trial_rng(seed, 14, 0);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim - p);
        let a = PolyvectorField::from_terms(dim, p, random_form_terms(&mut rng, dim, p)).unwrap();
        let b = PolyvectorField::from_terms(dim, q, random_form_terms(&mut rng, dim, q)).unwrap();
        let ctx = Context::new(dim, 0);
        let lhs = a.wedge(&b).unwrap().to_superfunction_in(&ctx).unwrap();
        let rhs = &a.to_superfunction_in(&ctx).unwrap() * &b.to_superfunction_in(&ctx).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_round_trips(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = trial_rng(seed, 15, 0);
        let p = rng.gen_range(0..=dim);
        let a = PolyvectorField::from_terms(dim, p, random_form_terms(&mut rng, dim, p)).unwrap();
        let back = PolyvectorField::from_superfunction(&a.to_superfunction().unwrap(), p).unwrap();
        prop_assert_eq!(back, a);
    }
}
