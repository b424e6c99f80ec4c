use std::fmt;

use num::{BigRational, Zero};

use super::model::{GaugeModel, Matrix};
use crate::algebra::{Coefficient, Generator, GeneratorKind, Parity, Superfunction};
use crate::error::{Error, Result};
use crate::operators::{bv_delta, schouten_bracket};

/// The three pieces of the BV action of a gauge model.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionParts {
    pub s0: Superfunction,
    /// `Σ_{α<β} C^γ_{αβ} c^α c^β c*_γ`.
    pub s_e: Superfunction,
    /// `Σ ρ^i_{αj} x^j c^α x*_i`.
    pub s_r: Superfunction,
}

impl ActionParts {
    pub fn total(&self) -> Superfunction {
        &(&self.s0 + &self.s_e) + &self.s_r
    }
}

pub fn action_parts(model: &GaugeModel) -> ActionParts {
    let ctx = model.context();
    let (n, m) = (model.n(), model.m());
    let mut e_terms = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for g in 0..m {
                let v = model.c(a, b, g);
                if !v.is_zero() {
                    e_terms.push((
                        Coefficient::from_rational(v.clone()),
                        vec![
                            (Generator::ghost(a), 1),
                            (Generator::ghost(b), 1),
                            (Generator::antighost(g), 1),
                        ],
                    ));
                }
            }
        }
    }
    let mut r_terms = Vec::new();
    for a in 0..m {
        let rho = model.rho(a);
        for (i, row) in rho.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    r_terms.push((
                        Coefficient::from_rational(v.clone()),
                        vec![
                            (Generator::field(j), 1),
                            (Generator::ghost(a), 1),
                            (Generator::antifield(i), 1),
                        ],
                    ));
                }
            }
        }
    }
    debug_assert!(n == ctx.n_fields());
    ActionParts {
        s0: model.s0().clone(),
        s_e: Superfunction::from_products(ctx, e_terms)
            .expect("generators exist in the model context"),
        s_r: Superfunction::from_products(ctx, r_terms)
            .expect("generators exist in the model context"),
    }
}

/// `S = S₀ + S_E + S_R`.
pub fn build_bv_action(model: &GaugeModel) -> Superfunction {
    action_parts(model).total()
}

/// A named reason for a failing master equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diagnosis {
    S0NotInvariant,
    RhoNotHomomorphism,
    JacobiFails,
    OpenClosure,
    NotUnimodular,
    NotMeasurePreserving,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::S0NotInvariant => "S0 not invariant",
            Diagnosis::RhoNotHomomorphism => "rho not a homomorphism",
            Diagnosis::JacobiFails => "Jacobi fails for C",
            Diagnosis::OpenClosure => "open closure",
            Diagnosis::NotUnimodular => "not unimodular",
            Diagnosis::NotMeasurePreserving => "not measure-preserving",
        })
    }
}

/// Classifies the terms of a nonzero `{S,S}` by antifield content.
pub fn diagnose_bracket(residual: &Superfunction) -> Vec<Diagnosis> {
    let mut out = Vec::new();
    for (mono, _) in residual.terms() {
        let factors = residual.factors_of(mono);
        let count = |kind| {
            factors
                .iter()
                .filter(|(g, _)| g.kind == kind)
                .map(|(_, e)| *e)
                .sum::<u32>()
        };
        let d = match (
            count(GeneratorKind::Antifield),
            count(GeneratorKind::Antighost),
        ) {
            (0, 0) => Diagnosis::S0NotInvariant,
            (1, 0) => Diagnosis::RhoNotHomomorphism,
            (0, 1) => Diagnosis::JacobiFails,
            _ => Diagnosis::OpenClosure,
        };
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out.sort();
    out
}

/// Residuals of the classical and quantum master equations.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterEquationReport {
    /// `{S,S}`.
    pub bracket: Superfunction,
    /// `ΔS`.
    pub delta: Superfunction,
    /// `{S,S} − iħΔS`.
    pub qme: Superfunction,
    /// `(i/ħ)ΔS − (1/2ħ²){S,S}`, the coefficient of `e^{iS/ħ}` in
    /// `Δe^{iS/ħ}`.
    pub qme_exponential: Superfunction,
    pub diagnoses: Vec<Diagnosis>,
}

impl MasterEquationReport {
    pub fn cme_holds(&self) -> bool {
        self.bracket.is_zero()
    }

    pub fn delta_vanishes(&self) -> bool {
        self.delta.is_zero()
    }

    /// Both normalizations of the quantum master equation must vanish.
    pub fn qme_holds(&self) -> bool {
        self.qme.is_zero() && self.qme_exponential.is_zero()
    }
}

impl fmt::Display for MasterEquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bracket_SS={}", self.bracket)?;
        writeln!(f, "delta_S={}", self.delta)?;
        writeln!(f, "qme_residual={}", self.qme)?;
        writeln!(f, "qme_exponential_residual={}", self.qme_exponential)?;
        writeln!(f, "cme={}", verdict(self.cme_holds()))?;
        writeln!(f, "qme={}", verdict(self.qme_holds()))?;
        for d in &self.diagnoses {
            writeln!(f, "diagnosis={d}")?;
        }
        Ok(())
    }
}

pub(crate) fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn require_even(s: &Superfunction) -> Result<()> {
    if s.parity() != Some(Parity::Even) {
        return Err(Error::Precondition(format!(
            "the action must be even, got {s}"
        )));
    }
    Ok(())
}

fn qme_residuals(bracket: &Superfunction, delta: &Superfunction) -> (Superfunction, Superfunction) {
    let i_hbar = &Coefficient::i() * &Coefficient::hbar(1);
    let qme = bracket - &delta.scale(&i_hbar);
    let i_over_hbar = &Coefficient::i() * &Coefficient::hbar(-1);
    let half_over_hbar2 = Coefficient::hbar(-2).scale(&BigRational::new(1.into(), 2.into()));
    let exp = &delta.scale(&i_over_hbar) - &bracket.scale(&half_over_hbar2);
    (qme, exp)
}

/// `{S,S}` with the antifield-content diagnosis; `ΔS` is reported but not
/// part of the verdict.
pub fn check_cme(s: &Superfunction) -> Result<MasterEquationReport> {
    check_qme(s)
}

/// Both master equations at once. Without a model, `ΔS` cannot be split
/// by hypothesis, so only the bracket residual is diagnosed.
pub fn check_qme(s: &Superfunction) -> Result<MasterEquationReport> {
    require_even(s)?;
    let bracket = schouten_bracket(s, s);
    let delta = bv_delta(s);
    let (qme, qme_exponential) = qme_residuals(&bracket, &delta);
    Ok(MasterEquationReport {
        diagnoses: diagnose_bracket(&bracket),
        bracket,
        delta,
        qme,
        qme_exponential,
    })
}

/// Builds `S` and checks it, attributing a nonzero `ΔS` to the gauge
/// algebra (`ΔS_E`) or to the representation (`ΔS_R`).
pub fn check_model(model: &GaugeModel) -> MasterEquationReport {
    let parts = action_parts(model);
    let s = parts.total();
    let mut report = check_qme(&s).expect("a built action is even");
    if !report.delta.is_zero() {
        if !bv_delta(&parts.s_e).is_zero() {
            report.diagnoses.push(Diagnosis::NotUnimodular);
        }
        if !bv_delta(&parts.s_r).is_zero() {
            report.diagnoses.push(Diagnosis::NotMeasurePreserving);
        }
        report.diagnoses.sort();
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hypothesis {
    /// `tr ρ_α = 0`.
    MeasurePreserving,
    /// `C^β_{αβ} = 0`.
    Unimodular,
    /// `ρ(e_α) S₀ = 0`.
    Invariance,
    /// `[ρ_α, ρ_β] = C^γ_{αβ} ρ_γ`.
    Homomorphism,
    Jacobi,
}

impl Hypothesis {
    pub fn diagnosis(self) -> Diagnosis {
        match self {
            Hypothesis::MeasurePreserving => Diagnosis::NotMeasurePreserving,
            Hypothesis::Unimodular => Diagnosis::NotUnimodular,
            Hypothesis::Invariance => Diagnosis::S0NotInvariant,
            Hypothesis::Homomorphism => Diagnosis::RhoNotHomomorphism,
            Hypothesis::Jacobi => Diagnosis::JacobiFails,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Hypothesis::MeasurePreserving => "measure_preserving",
            Hypothesis::Unimodular => "unimodular",
            Hypothesis::Invariance => "invariance",
            Hypothesis::Homomorphism => "homomorphism",
            Hypothesis::Jacobi => "jacobi",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisCheck {
    pub hypothesis: Hypothesis,
    /// Human-readable nonzero entries; empty when the hypothesis holds.
    pub violations: Vec<String>,
}

impl HypothesisCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn get(&self, h: Hypothesis) -> &HypothesisCheck {
        self.checks
            .iter()
            .find(|c| c.hypothesis == h)
            .expect("every hypothesis is checked")
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(HypothesisCheck::holds)
    }

    pub fn diagnoses(&self) -> Vec<Diagnosis> {
        self.checks
            .iter()
            .filter(|c| !c.holds())
            .map(|c| c.hypothesis.diagnosis())
            .collect()
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "hypothesis.{}={}",
                c.hypothesis.key(),
                verdict(c.holds())
            )?;
            for v in &c.violations {
                writeln!(f, "hypothesis.{}.violation={v}", c.hypothesis.key())?;
            }
        }
        Ok(())
    }
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = super::model::zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// `X_α = ρ^i_{αj} x^j ∂/∂x^i` applied to `f`.
pub fn vector_field_action(model: &GaugeModel, alpha: usize, f: &Superfunction) -> Superfunction {
    let ctx = model.context();
    let mut out = Superfunction::zero(ctx);
    for (i, row) in model.rho(alpha).iter().enumerate() {
        let di = f.right_derivative(Generator::field(i));
        if di.is_zero() {
            continue;
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                let xj = Superfunction::var(ctx, Generator::field(j));
                out = &out + &(&xj * &di).scale_rational(v);
            }
        }
    }
    out
}

/// Checks the five hypotheses independently.
pub fn check_theorem_hypotheses(model: &GaugeModel) -> HypothesisReport {
    let (n, m) = (model.n(), model.m());
    let mut measure = Vec::new();
    let mut unimodular = Vec::new();
    let mut invariance = Vec::new();
    let mut homomorphism = Vec::new();
    let mut jacobi = Vec::new();

    for a in 0..m {
        let tr: BigRational = (0..n).map(|i| model.rho(a)[i][i].clone()).sum();
        if !tr.is_zero() {
            measure.push(format!("tr rho_{} = {tr}", a + 1));
        }
        let c: BigRational = (0..m).map(|b| model.c(a, b, b).clone()).sum();
        if !c.is_zero() {
            unimodular.push(format!("C^b_{{{} b}} = {c}", a + 1));
        }
        let x = vector_field_action(model, a, model.s0());
        if !x.is_zero() {
            invariance.push(format!("X_{} S0 = {x}", a + 1));
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let ab = mat_mul(model.rho(a), model.rho(b));
            let ba = mat_mul(model.rho(b), model.rho(a));
            for i in 0..n {
                for j in 0..n {
                    let mut r = &ab[i][j] - &ba[i][j];
                    for g in 0..m {
                        r -= model.c(a, b, g) * &model.rho(g)[i][j];
                    }
                    if !r.is_zero() {
                        homomorphism.push(format!(
                            "([rho_{0},rho_{1}] - C^g_{{{0}{1}}} rho_g)[{2}][{3}] = {r}",
                            a + 1,
                            b + 1,
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for g in b + 1..m {
                for e in 0..m {
                    let mut r = BigRational::zero();
                    for d in 0..m {
                        r += model.c(a, b, d) * model.c(d, g, e);
                        r += model.c(b, g, d) * model.c(d, a, e);
                        r += model.c(g, a, d) * model.c(d, b, e);
                    }
                    if !r.is_zero() {
                        jacobi.push(format!(
                            "Jacobi({},{},{}) component {} = {r}",
                            a + 1,
                            b + 1,
                            g + 1,
                            e + 1
                        ));
                    }
                }
            }
        }
    }
    HypothesisReport {
        checks: vec![
            HypothesisCheck {
                hypothesis: Hypothesis::MeasurePreserving,
                violations: measure,
            },
            HypothesisCheck {
                hypothesis: Hypothesis::Unimodular,
                violations: unimodular,
            },
            HypothesisCheck {
                hypothesis: Hypothesis::Invariance,
                violations: invariance,
            },
            HypothesisCheck {
                hypothesis: Hypothesis::Homomorphism,
                violations: homomorphism,
            },
            HypothesisCheck {
                hypothesis: Hypothesis::Jacobi,
                violations: jacobi,
            },
        ],
    }
}
