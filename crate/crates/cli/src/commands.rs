use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use bv_core::algebra::random::RandomShape;
use bv_core::algebra::{
    parse_raw, Context, Generator, GeneratorKind, Parity, RawExpr, Superfunction,
};
use bv_core::gauge::catalog::catalog;
use bv_core::gauge::{
    build_bv_action, check_model, check_theorem_hypotheses, exp_check, GaugeModel,
};
use bv_core::geom::{
    bv_integral, cross_check_coordinate_vs_geometric, homology_invariance_check, level_set_sweep,
    stokes_residual, CrossCheckConfig, Fixture, QuadratureSpec,
};
use bv_core::operators::{
    bv_delta, schouten_bracket, verify_identities_with, IdentityConfig, Laplacian,
};
use bv_core::{Error, Result};

use crate::output::Out;
use crate::{AlgebraOp, Cli, Command, Outcome};

const IDENTITY_TRIALS: usize = 1000;
const CROSS_CHECK_TRIALS: usize = 200;

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut out = Out::new(cli.format);
    let passed = match &cli.command {
        Command::Check { model } => check(cli, model, &mut out)?,
        Command::Algebra { op } => {
            algebra(op, &mut out)?;
            true
        }
        Command::Integrate {
            fixture,
            surface,
            stokes,
            homology,
            sweep,
        } => {
            let quad = QuadratureSpec::new(cli.points, cli.subdivisions)?;
            let fixture = Fixture::load(fixture)?;
            if *stokes {
                integrate_stokes(&fixture, surface.as_deref(), &quad, &mut out)?
            } else if let Some(pair) = homology {
                integrate_homology(&fixture, &pair[0], &pair[1], &quad, &mut out)?
            } else if *sweep {
                integrate_sweep(&fixture, &quad, &mut out)?
            } else {
                integrate(&fixture, surface.as_deref(), &quad, &mut out)?
            }
        }
        Command::Selftest { inject_sign_bug } => selftest(cli, *inject_sign_bug, &mut out)?,
    };
    out.human(if passed { "PASS" } else { "FAIL" });
    Ok(Outcome {
        text: out.finish(),
        passed,
    })
}

fn resolve_model(cli: &Cli, path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    let Some(dir) = &cli.model_dir else {
        return path.to_path_buf();
    };
    let candidate = dir.join(path);
    if !candidate.exists() && path.extension().is_none() {
        let with_ext = candidate.with_extension("model");
        if with_ext.exists() {
            return with_ext;
        }
    }
    candidate
}

fn check(cli: &Cli, path: &Path, out: &mut Out) -> Result<bool> {
    let model = GaugeModel::load(&resolve_model(cli, path))?;
    let s = build_bv_action(&model);
    let report = check_model(&model);
    out.kv("model", model.name());
    out.kv("S", &s);
    out.block(&report);
    out.block(check_theorem_hypotheses(&model));
    Ok(report.qme_holds())
}

fn bind_all(exprs: &[&str]) -> Result<Vec<Superfunction>> {
    let raws: Vec<RawExpr> = exprs.iter().map(|e| parse_raw(e)).collect::<Result<_>>()?;
    let (n, m) = raws
        .iter()
        .map(RawExpr::required_shape)
        .fold((0, 0), |(n, m), (a, b)| (n.max(a), m.max(b)));
    let ctx = Context::new(n, m);
    raws.iter().map(|r| r.bind(&ctx)).collect()
}

fn algebra(op: &AlgebraOp, out: &mut Out) -> Result<()> {
    match op {
        AlgebraOp::Delta { expr } => {
            let f = bind_all(&[expr])?.remove(0);
            out.result(bv_delta(&f));
        }
        AlgebraOp::Bracket { f, g } => {
            let v = bind_all(&[f, g])?;
            out.result(schouten_bracket(&v[0], &v[1]));
        }
        AlgebraOp::Degree { expr } => {
            let f = bind_all(&[expr])?.remove(0);
            out.result(f.ghost_degree());
        }
        AlgebraOp::Restrict { expr, psi } => {
            let v = bind_all(&[expr, psi])?;
            out.result(restrict(&v[0], &v[1])?);
        }
    }
    Ok(())
}

/// Substitutes `x*_i → ∂Ψ/∂x^i` and `c*_a → ∂ᴸΨ/∂c^a`.
fn restrict(f: &Superfunction, psi: &Superfunction) -> Result<Superfunction> {
    if !psi.is_zero() && psi.parity() != Some(Parity::Odd) {
        return Err(Error::Precondition(format!(
            "gauge-fixing function {psi} must be odd"
        )));
    }
    if psi.contains_kind(GeneratorKind::Antifield) || psi.contains_kind(GeneratorKind::Antighost) {
        return Err(Error::Precondition(format!(
            "gauge-fixing function {psi} must depend on fields and ghosts only"
        )));
    }
    let ctx: &Arc<Context> = f.context();
    let mut assignment = BTreeMap::new();
    for i in 0..ctx.n_fields() {
        assignment.insert(
            Generator::antifield(i),
            psi.left_derivative(Generator::field(i)),
        );
    }
    for a in 0..ctx.n_ghosts() {
        assignment.insert(
            Generator::antighost(a),
            psi.left_derivative(Generator::ghost(a)),
        );
    }
    f.substitute(&assignment)
}

fn pick<'a>(fixture: &'a Fixture, surface: Option<&str>) -> Result<&'a bv_core::geom::Surface> {
    match surface {
        Some(name) => fixture.surface(name),
        None => fixture.default_surface(),
    }
}

fn expected_matches(fixture: &Fixture, value: f64, out: &mut Out) -> bool {
    match fixture.expected {
        Some(e) => {
            out.kv("expected", format!("{e:.12e}"));
            out.kv("tolerance", format!("{:.1e}", fixture.tolerance));
            (value - e).abs() < fixture.tolerance
        }
        None => true,
    }
}

fn integrate(
    fixture: &Fixture,
    surface: Option<&str>,
    quad: &QuadratureSpec,
    out: &mut Out,
) -> Result<bool> {
    let sigma = pick(fixture, surface)?;
    let est = bv_integral(&fixture.alpha, sigma, &fixture.density, quad)?;
    out.kv("fixture", &fixture.name);
    out.kv("surface", sigma.name());
    out.human(est);
    out.kv("value", format!("{:.12e}", est.value));
    out.kv("error_estimate", format!("{:.3e}", est.error));
    Ok(expected_matches(fixture, est.value, out))
}

fn integrate_stokes(
    fixture: &Fixture,
    surface: Option<&str>,
    quad: &QuadratureSpec,
    out: &mut Out,
) -> Result<bool> {
    let sigma = pick(fixture, surface)?;
    let r = stokes_residual(&fixture.alpha, sigma, &fixture.density, quad)?;
    out.kv("fixture", &fixture.name);
    out.kv("surface", sigma.name());
    out.block(&r);
    let balanced = r.residual < fixture.tolerance;
    Ok(expected_matches(fixture, r.interior, out) && balanced)
}

fn integrate_homology(
    fixture: &Fixture,
    s1: &str,
    s2: &str,
    quad: &QuadratureSpec,
    out: &mut Out,
) -> Result<bool> {
    let r = homology_invariance_check(
        &fixture.alpha,
        fixture.surface(s1)?,
        fixture.surface(s2)?,
        &fixture.density,
        quad,
        fixture.tolerance,
    )?;
    out.kv("fixture", &fixture.name);
    out.kv("surfaces", format!("{s1} {s2}"));
    out.block(&r);
    Ok(r.passed())
}

fn integrate_sweep(fixture: &Fixture, quad: &QuadratureSpec, out: &mut Out) -> Result<bool> {
    let family = fixture.sweep.as_ref().ok_or_else(|| {
        Error::Precondition(format!("fixture {} has no [sweep] section", fixture.name))
    })?;
    let r = level_set_sweep(
        &fixture.alpha,
        family,
        &fixture.density,
        quad,
        fixture.tolerance,
    )?;
    out.kv("fixture", &fixture.name);
    out.block(&r);
    Ok(r.passed())
}

fn selftest(cli: &Cli, inject_sign_bug: bool, out: &mut Out) -> Result<bool> {
    let cfg = IdentityConfig {
        seed: cli.seed,
        trials: cli.trials.unwrap_or(IDENTITY_TRIALS),
        n_fields: 3,
        n_ghosts: 2,
        shape: RandomShape {
            degree_bound: 4,
            ..RandomShape::default()
        },
    };
    let laplacian = if inject_sign_bug {
        Laplacian::GhostSignFlipped
    } else {
        Laplacian::Canonical
    };
    let mut passed = true;
    for r in verify_identities_with(&cfg, &laplacian)? {
        passed &= r.passed();
        out.block(&r);
    }
    let cross = CrossCheckConfig {
        seed: cli.seed,
        trials: cli.trials.unwrap_or(CROSS_CHECK_TRIALS),
        ..CrossCheckConfig::default()
    };
    for r in cross_check_coordinate_vs_geometric(&cross)? {
        passed &= r.passed();
        out.block(&r);
    }
    for model in catalog() {
        let r = exp_check(&build_bv_action(&model), cli.order)?;
        passed &= r.holds();
        out.kv("exp_check.model", model.name());
        out.block(&r);
    }
    out.kv("selftest", if passed { "pass" } else { "fail" });
    Ok(passed)
}
