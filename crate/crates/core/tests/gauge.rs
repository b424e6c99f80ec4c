use bv_core::algebra::random::{random_superfunction, trial_rng, RandomShape};
use bv_core::algebra::{Context, Generator, GhostDegree, Parity, Superfunction};
use bv_core::gauge::catalog::{self, su2};
use bv_core::gauge::*;
use bv_core::operators::bv_delta;
use bv_core::Error;

#[test]
fn su2_solves_both_master_equations() {
    let model = su2();
    let s = build_bv_action(&model);
    assert_eq!(s.parity(), Some(Parity::Even));
    assert_eq!(s.ghost_degree(), GhostDegree::Homogeneous(0));
    let r = check_model(&model);
    assert!(r.bracket.is_zero(), "{r}");
    assert!(r.delta.is_zero(), "{r}");
    assert!(r.qme_holds());
    assert!(r.diagnoses.is_empty());
    assert!(check_theorem_hypotheses(&model).all_hold());
}

#[test]
fn su2_action_term_counts() {
    let parts = action_parts(&su2());
    assert_eq!(parts.s_e.len(), 3);
    assert_eq!(parts.s_r.len(), 6);
    assert_eq!(
        parts.s0,
        Superfunction::parse(
            "x1^4 + x2^4 + x3^4 + 2*x1^2*x2^2 + 2*x1^2*x3^2 + 2*x2^2*x3^2",
            su2().context()
        )
        .unwrap()
    );
}

#[test]
fn literal_epsilon_representation_breaks_the_classical_equation() {
    // (rho_a)_ij = +eps_aij is the transpose of the adjoint and represents
    // the opposite bracket.
    let model = su2();
    let rho: Vec<Matrix> = (0..3)
        .map(|a| {
            model
                .rho(a)
                .iter()
                .map(|row| row.iter().map(|v| -v.clone()).collect())
                .collect()
        })
        .collect();
    let flipped = model.with_rho(rho).unwrap();
    let r = check_model(&flipped);
    assert!(!r.cme_holds());
    assert_eq!(r.diagnoses, vec![Diagnosis::RhoNotHomomorphism]);
    assert!(!check_theorem_hypotheses(&flipped)
        .get(Hypothesis::Homomorphism)
        .holds());
}

#[test]
fn nonunimodular_fails_with_trace_residual() {
    let model = catalog::nonunimodular();
    let r = check_model(&model);
    assert!(r.cme_holds(), "{r}");
    assert!(!r.qme_holds());
    assert_eq!(r.diagnoses, vec![Diagnosis::NotUnimodular]);
    // Only C^b_{1b} = 1 is nonzero, and the ghost term gives +C^b_{ab} c^a.
    let c1 = Superfunction::var(model.context(), Generator::ghost(0));
    assert_eq!(r.delta, c1, "{r}");
    let h = check_theorem_hypotheses(&model);
    assert!(!h.get(Hypothesis::Unimodular).holds());
    assert!(h.get(Hypothesis::MeasurePreserving).holds());
    assert_eq!(h.diagnoses(), vec![Diagnosis::NotUnimodular]);
}

#[test]
fn adjoint_defects_cancel() {
    let model = catalog::nonunimodular_adjoint();
    let h = check_theorem_hypotheses(&model);
    assert!(!h.get(Hypothesis::Unimodular).holds());
    assert!(!h.get(Hypothesis::MeasurePreserving).holds());
    let parts = action_parts(&model);
    assert!(!bv_delta(&parts.s_e).is_zero());
    assert!(!bv_delta(&parts.s_r).is_zero());
    let r = check_model(&model);
    assert!(r.delta.is_zero(), "{r}");
    assert!(r.qme_holds());
}

#[test]
fn broken_models_are_diagnosed() {
    let r = check_model(&catalog::broken_invariance());
    assert_eq!(r.diagnoses, vec![Diagnosis::S0NotInvariant]);
    let r = check_model(&catalog::broken_homomorphism());
    assert!(r.diagnoses.contains(&Diagnosis::RhoNotHomomorphism), "{r}");
}

#[test]
fn jacobi_failure_is_diagnosed() {
    // C^2_{12} = C^1_{23} = 1, other brackets zero: Jacobi fails on (1,2,3).
    let structure = [
        (0, 1, 1, 1.into()),
        (1, 0, 1, (-1).into()),
        (1, 2, 0, 1.into()),
        (2, 1, 0, (-1).into()),
    ]
    .map(|(a, b, g, v): (usize, usize, usize, num::BigInt)| {
        (a, b, g, num::BigRational::from_integer(v))
    });
    let ctx = Context::new(1, 3);
    let model = GaugeModel::new(
        "bad_jacobi",
        1,
        3,
        &structure,
        vec![],
        &Superfunction::zero(&ctx),
    )
    .unwrap();
    assert!(!check_theorem_hypotheses(&model)
        .get(Hypothesis::Jacobi)
        .holds());
    let r = check_model(&model);
    assert_eq!(diagnose_bracket(&r.bracket), vec![Diagnosis::JacobiFails]);
    // C^2_{12} = 1 also makes the algebra non-unimodular.
    assert_eq!(
        r.diagnoses,
        vec![Diagnosis::JacobiFails, Diagnosis::NotUnimodular]
    );
}

#[test]
fn cme_iff_closure_hypotheses_and_delta_iff_trace_hypotheses() {
    for model in catalog::catalog() {
        let r = check_model(&model);
        let h = check_theorem_hypotheses(&model);
        let closure = [
            Hypothesis::Invariance,
            Hypothesis::Homomorphism,
            Hypothesis::Jacobi,
        ]
        .iter()
        .all(|&x| h.get(x).holds());
        assert_eq!(r.cme_holds(), closure, "{}", model.name());
        if model.name() != "nonunimodular_adjoint" {
            let traces = h.get(Hypothesis::MeasurePreserving).holds()
                && h.get(Hypothesis::Unimodular).holds();
            assert_eq!(r.delta_vanishes(), traces, "{}", model.name());
        }
    }
}

#[test]
fn abelian_trivial_action_is_s0() {
    let model = catalog::abelian();
    assert_eq!(build_bv_action(&model), *model.s0());
    assert!(check_model(&model).qme_holds());
    assert!(check_theorem_hypotheses(&model).all_hold());
}

#[test]
fn exp_check_on_su2_and_random_even() {
    let s = build_bv_action(&su2());
    let r = exp_check(&s, 6).unwrap();
    assert!(r.holds(), "{r}");

    let ctx = Context::new(2, 1);
    let shape = RandomShape::default();
    for t in 0..100 {
        let s = random_superfunction(&mut trial_rng(11, 0, t), &ctx, &shape, Some(Parity::Even));
        let r = exp_check(&s, 6).unwrap();
        assert!(r.holds(), "trial {t}: {r}");
    }
    assert!(matches!(exp_check(&s, 1), Err(Error::Precondition(_))));
    let odd = Superfunction::parse("xs1", &ctx).unwrap();
    assert!(exp_check(&odd, 3).is_err());
}

#[test]
fn exp_check_n2_example() {
    let ctx = Context::new(2, 0);
    let s = Superfunction::parse("x1*x2*xs1*xs2 + x1^2", &ctx).unwrap();
    let r = exp_check(&s, 2).unwrap();
    assert!(r.holds());
    let ds = bv_delta(&s);
    assert!(!ds.is_zero());
    assert!(!bbracket(&s).is_zero());
    let lhs = bv_delta(&(&s * &s));
    assert_eq!(lhs, &(&s * &ds).scale_int(2) + &bbracket(&s));
}

fn bbracket(s: &Superfunction) -> Superfunction {
    bv_core::operators::schouten_bracket(s, s)
}

#[test]
fn observables_on_su2() {
    let model = su2();
    let s = build_bv_action(&model);
    let ctx = model.context();
    assert!(check_observable(&s, &Superfunction::one(ctx)).is_observable());
    let radial = Superfunction::parse("x1^2 + x2^2 + x3^2", ctx).unwrap();
    assert!(check_observable(&s, &radial).is_observable());
    let x1 = Superfunction::parse("x1", ctx).unwrap();
    assert!(!check_observable(&s, &x1).is_observable());
}

#[test]
fn quantum_differential_squares_to_zero() {
    let model = su2();
    let s = build_bv_action(&model);
    let shape = RandomShape {
        degree_bound: 3,
        max_terms: 3,
        hbar_probability: 0.2,
    };
    for t in 0..200 {
        let f = random_superfunction(&mut trial_rng(5, 9, t), model.context(), &shape, None);
        let oo = quantum_differential(&s, &quantum_differential(&s, &f));
        assert!(oo.is_zero(), "trial {t}: F = {f}, residual {oo}");
        assert!(volume_twist_residual(&s, &f).is_zero());
    }
}

#[test]
fn model_file_parsing() {
    let src = r#"
name = "su2"
n = 3
m = 3
structure_constants = [
  [1, 2, 3, 1], [2, 1, 3, -1],
  [2, 3, 1, 1], [3, 2, 1, -1],
  [3, 1, 2, 1], [1, 3, 2, -1],
]
rho = [
  [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
  [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
  [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
]
S0 = "x1^4 + x2^4 + x3^4 + 2*x1^2*x2^2 + 2*x1^2*x3^2 + 2*x2^2*x3^2"
"#;
    let model = GaugeModel::parse(src).unwrap();
    assert_eq!(build_bv_action(&model), build_bv_action(&su2()));

    let bad = src.replace("[2, 1, 3, -1]", "[2, 1, 3, \"1/2\"]");
    match GaugeModel::parse(&bad) {
        Err(Error::Parse { message, line, .. }) => {
            assert!(message.contains("antisymmetric"), "{message}");
            assert_eq!(line, 5);
        }
        other => panic!("{other:?}"),
    }
    let bad_s0 = src.replace(
        "x1^4 + x2^4 + x3^4 + 2*x1^2*x2^2 + 2*x1^2*x3^2 + 2*x2^2*x3^2",
        "x1 + q2",
    );
    match GaugeModel::parse(&bad_s0) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (15, 12)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        GaugeModel::parse("n = "),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        GaugeModel::parse("n = 2\nm = 1\nrho = [[[1]]]"),
        Err(Error::Contract(_))
    ));
}

#[test]
fn shipped_model_files_match_the_catalog() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models");
    for model in catalog::catalog() {
        let path = dir.join(format!("{}.model", model.name()));
        let src = std::fs::read_to_string(&path).unwrap();
        let parsed = GaugeModel::parse(&src).unwrap();
        assert_eq!(parsed.name(), model.name());
        assert_eq!(
            build_bv_action(&parsed),
            build_bv_action(&model),
            "{}",
            path.display()
        );
    }
    let src = std::fs::read_to_string(dir.join("not_antisymmetric.model")).unwrap();
    assert!(matches!(
        GaugeModel::parse(&src),
        Err(Error::Parse { line: 5, .. })
    ));
}
