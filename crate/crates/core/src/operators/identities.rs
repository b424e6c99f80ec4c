use std::fmt;
use std::sync::Arc;

use num::BigRational;
use rayon::prelude::*;

use super::{schouten_bracket, Laplacian};
use crate::algebra::random::{random_parity, random_superfunction, trial_rng, RandomShape};
use crate::algebra::{Context, Superfunction};
use crate::error::{Error, Result};

/// Counterexamples kept verbatim per report; the failure count is exact.
const KEPT_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Debug)]
pub struct IdentityConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_fields: usize,
    pub n_ghosts: usize,
    pub shape: RandomShape,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            seed: 1,
            trials: 1000,
            n_fields: 2,
            n_ghosts: 1,
            shape: RandomShape {
                degree_bound: 4,
                ..RandomShape::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub inputs: Vec<(&'static str, Superfunction)>,
    pub residual: Superfunction,
}

/// Outcome of one randomized exact identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    /// The first few failing trials, in trial order.
    pub counterexamples: Vec<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Residual of the first failing trial, or `None` when all vanished.
    pub fn first_residual(&self) -> Option<&Superfunction> {
        self.counterexamples.first().map(|c| &c.residual)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity={}", self.name)?;
        writeln!(f, "result={}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "trials={}", self.trials)?;
        writeln!(f, "failures={}", self.failures)?;
        for c in &self.counterexamples {
            writeln!(f, "counterexample.trial={}", c.trial)?;
            for (name, value) in &c.inputs {
                writeln!(f, "counterexample.{name}={value}")?;
            }
            writeln!(f, "counterexample.residual={}", c.residual)?;
        }
        Ok(())
    }
}

fn sign(bits: u32, f: &Superfunction) -> Superfunction {
    if bits % 2 == 1 {
        -f
    } else {
        f.clone()
    }
}

pub(crate) fn run<F>(
    name: &'static str,
    stream: u64,
    seed: u64,
    trials: usize,
    trial: F,
) -> IdentityReport
where
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng) -> Option<Counterexample> + Sync,
{
    let failing: Vec<Counterexample> = (0..trials)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = trial_rng(seed, stream, t as u64);
            trial(t, &mut rng)
        })
        .collect();
    IdentityReport {
        name,
        trials,
        seed,
        failures: failing.len(),
        counterexamples: failing.into_iter().take(KEPT_COUNTEREXAMPLES).collect(),
    }
}

pub(crate) fn check(
    t: usize,
    residual: Superfunction,
    inputs: Vec<(&'static str, Superfunction)>,
) -> Option<Counterexample> {
    (!residual.is_zero()).then_some(Counterexample {
        trial: t,
        inputs,
        residual,
    })
}

/// Runs the six odd-Poisson / BV-algebra identities with the canonical
/// Laplacian.
pub fn verify_identities(cfg: &IdentityConfig) -> Result<Vec<IdentityReport>> {
    verify_identities_with(cfg, &Laplacian::Canonical)
}

/// Same as [`verify_identities`] with an arbitrary Laplacian in the
/// identities that involve one: nilpotency, product rule, compatibility.
pub fn verify_identities_with(
    cfg: &IdentityConfig,
    delta: &Laplacian,
) -> Result<Vec<IdentityReport>> {
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let ctx = Context::new(cfg.n_fields, cfg.n_ghosts);
    Ok(vec![
        nilpotency(cfg, &ctx, delta),
        product_rule(cfg, &ctx, delta),
        antisymmetry(cfg, &ctx),
        jacobi(cfg, &ctx),
        leibniz(cfg, &ctx),
        compatibility(cfg, &ctx, delta),
    ])
}

fn draw(
    rng: &mut rand_chacha::ChaCha8Rng,
    ctx: &Arc<Context>,
    shape: &RandomShape,
) -> (Superfunction, u32) {
    let p = random_parity(rng);
    let f = random_superfunction(rng, ctx, shape, Some(p));
    (f, p.bit())
}

/// (a) `Δ²F = 0`.
pub(crate) fn nilpotency(
    cfg: &IdentityConfig,
    ctx: &Arc<Context>,
    delta: &Laplacian,
) -> IdentityReport {
    run("nilpotency", 1, cfg.seed, cfg.trials, |t, rng| {
        let f = random_superfunction(rng, ctx, &cfg.shape, None);
        let r = delta.apply(&delta.apply(&f));
        check(t, r, vec![("F", f)])
    })
}

/// (b) `Δ(fg) = (Δf)g + (-1)^{|f|} f(Δg) + (-1)^{|f|}{f,g}`.
pub(crate) fn product_rule(
    cfg: &IdentityConfig,
    ctx: &Arc<Context>,
    delta: &Laplacian,
) -> IdentityReport {
    run("product_rule", 2, cfg.seed, cfg.trials, |t, rng| {
        let (f, pf) = draw(rng, ctx, &cfg.shape);
        let (g, _) = draw(rng, ctx, &cfg.shape);
        let lhs = delta.apply(&(&f * &g));
        let rhs = &(&(&delta.apply(&f) * &g) + &sign(pf, &(&f * &delta.apply(&g))))
            + &sign(pf, &schouten_bracket(&f, &g));
        check(t, &lhs - &rhs, vec![("f", f), ("g", g)])
    })
}

/// (c) `{F,G} = -(-1)^{(|F|+1)(|G|+1)} {G,F}`.
pub(crate) fn antisymmetry(cfg: &IdentityConfig, ctx: &Arc<Context>) -> IdentityReport {
    run("antisymmetry", 3, cfg.seed, cfg.trials, |t, rng| {
        let (f, pf) = draw(rng, ctx, &cfg.shape);
        let (g, pg) = draw(rng, ctx, &cfg.shape);
        let r = &schouten_bracket(&f, &g) + &sign((pf + 1) * (pg + 1), &schouten_bracket(&g, &f));
        check(t, r, vec![("F", f), ("G", g)])
    })
}

/// (d) `(-1)^{(|F|+1)(|H|+1)}{F,{G,H}} + cyclic = 0`.
pub(crate) fn jacobi(cfg: &IdentityConfig, ctx: &Arc<Context>) -> IdentityReport {
    run("jacobi", 4, cfg.seed, cfg.trials, |t, rng| {
        let (f, pf) = draw(rng, ctx, &cfg.shape);
        let (g, pg) = draw(rng, ctx, &cfg.shape);
        let (h, ph) = draw(rng, ctx, &cfg.shape);
        let term = |a: &Superfunction, pa: u32, b: &Superfunction, c: &Superfunction, pc: u32| {
            sign(
                (pa + 1) * (pc + 1),
                &schouten_bracket(a, &schouten_bracket(b, c)),
            )
        };
        let r =
            &(&term(&f, pf, &g, &h, ph) + &term(&g, pg, &h, &f, pf)) + &term(&h, ph, &f, &g, pg);
        check(t, r, vec![("F", f), ("G", g), ("H", h)])
    })
}

/// (e) `{F, GH} = {F,G}H + (-1)^{(|F|+1)|G|} G{F,H}`.
pub(crate) fn leibniz(cfg: &IdentityConfig, ctx: &Arc<Context>) -> IdentityReport {
    run("leibniz", 5, cfg.seed, cfg.trials, |t, rng| {
        let (f, pf) = draw(rng, ctx, &cfg.shape);
        let (g, pg) = draw(rng, ctx, &cfg.shape);
        let (h, _) = draw(rng, ctx, &cfg.shape);
        let lhs = schouten_bracket(&f, &(&g * &h));
        let rhs = &(&schouten_bracket(&f, &g) * &h)
            + &sign((pf + 1) * pg, &(&g * &schouten_bracket(&f, &h)));
        check(t, &lhs - &rhs, vec![("F", f), ("G", g), ("H", h)])
    })
}

/// (f) `Δ{F,G} = {ΔF,G} + (-1)^{|F|+1}{F,ΔG}`.
pub(crate) fn compatibility(
    cfg: &IdentityConfig,
    ctx: &Arc<Context>,
    delta: &Laplacian,
) -> IdentityReport {
    run("compatibility", 6, cfg.seed, cfg.trials, |t, rng| {
        let (f, pf) = draw(rng, ctx, &cfg.shape);
        let (g, _) = draw(rng, ctx, &cfg.shape);
        let lhs = delta.apply(&schouten_bracket(&f, &g));
        let rhs = &schouten_bracket(&delta.apply(&f), &g)
            + &sign(pf + 1, &schouten_bracket(&f, &delta.apply(&g)));
        check(t, &lhs - &rhs, vec![("F", f), ("G", g)])
    })
}

/// What the product rule and nilpotency say about one deformed Laplacian.
#[derive(Clone, Debug)]
pub struct PerturbationOutcome {
    pub perturbation: Laplacian,
    pub product_rule: IdentityReport,
    pub nilpotency: IdentityReport,
}

impl PerturbationOutcome {
    pub fn breaks_product_rule(&self) -> bool {
        !self.product_rule.passed()
    }
}

/// Deforms the field-sector Laplacian by each template term of the general
/// translation-invariant second-order operator lowering polyvector rank by
/// one, and records which identities notice.
///
/// The first-order template `b ∂/∂x*_i` is a derivation, so it cannot be
/// detected by the product rule; it is the twist `Δ + {b·x, -}` of the
/// exponential density `e^{b·x}`.
pub fn gwilliam_perturbation_check(cfg: &IdentityConfig) -> Result<Vec<PerturbationOutcome>> {
    if cfg.n_fields < 2 {
        return Err(Error::Precondition(
            "perturbation templates need at least two fields".into(),
        ));
    }
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let ctx = Context::new(cfg.n_fields, cfg.n_ghosts);
    let one = BigRational::from_integer(1.into());
    let templates = vec![
        Laplacian::Mixed {
            field: 0,
            antifield: 0,
            coefficient: one.clone(),
        },
        Laplacian::Mixed {
            field: 0,
            antifield: 1,
            coefficient: one.clone(),
        },
        Laplacian::Cubic {
            i: 0,
            j: 1,
            k: 0,
            coefficient: one.clone(),
        },
        Laplacian::FirstOrder {
            antifield: 0,
            coefficient: one,
        },
    ];
    Ok(templates
        .into_iter()
        .map(|d| PerturbationOutcome {
            product_rule: product_rule(cfg, &ctx, &d),
            nilpotency: nilpotency(cfg, &ctx, &d),
            perturbation: d,
        })
        .collect())
}
