use std::fmt;

use num::{BigInt, BigRational, One};

use super::master::verdict;
use crate::algebra::{Coefficient, Parity, Superfunction};
use crate::error::{Error, Result};
use crate::operators::{bv_delta, schouten_bracket};

/// `ΔSⁿ = nSⁿ⁻¹ΔS + n(n−1)/2 Sⁿ⁻²{S,S}` for `n = 1..=order`, and the
/// matching statement for the truncated exponential.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpCheckReport {
    pub order: u32,
    /// Residual of the power identity for `n = 1..=order`.
    pub power_residuals: Vec<Superfunction>,
    /// `Δ T_N − T_{N−1}(i/ħ)ΔS + T_{N−2}(1/2ħ²){S,S}` with
    /// `T_N = Σ_{n≤N} (iS/ħ)ⁿ/n!`.
    pub series_residual: Superfunction,
}

impl ExpCheckReport {
    pub fn holds(&self) -> bool {
        self.power_residuals.iter().all(Superfunction::is_zero) && self.series_residual.is_zero()
    }
}

impl fmt::Display for ExpCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order={}", self.order)?;
        for (k, r) in self.power_residuals.iter().enumerate() {
            writeln!(f, "power_residual.{}={r}", k + 1)?;
        }
        writeln!(f, "series_residual={}", self.series_residual)?;
        writeln!(f, "result={}", verdict(self.holds()))
    }
}

fn truncated_exponential(powers: &[Superfunction], order: usize) -> Superfunction {
    let ctx = powers[0].context();
    let mut out = Superfunction::zero(ctx);
    let mut factorial = BigInt::one();
    for (n, p) in powers.iter().enumerate().take(order + 1) {
        if n > 0 {
            factorial *= n;
        }
        // (i/ħ)^n / n!
        let mut c = Coefficient::monomial(-(n as i32), crate::algebra::real(BigRational::one()));
        for _ in 0..n % 4 {
            c = &c * &Coefficient::i();
        }
        let c = c.scale(&BigRational::new(1.into(), factorial.clone()));
        out = &out + &p.scale(&c);
    }
    out
}

pub fn exp_check(s: &Superfunction, order: u32) -> Result<ExpCheckReport> {
    if s.parity() != Some(Parity::Even) {
        return Err(Error::Precondition(format!(
            "exp_check needs an even S, got {s}"
        )));
    }
    if order < 2 {
        return Err(Error::Precondition(
            "truncation order must be at least 2".into(),
        ));
    }
    let ctx = s.context();
    let ds = bv_delta(s);
    let ss = schouten_bracket(s, s);
    let mut powers = vec![Superfunction::one(ctx)];
    for n in 1..=order as usize {
        let next = &powers[n - 1] * s;
        powers.push(next);
    }
    let mut power_residuals = Vec::with_capacity(order as usize);
    for n in 1..=order as usize {
        let lhs = bv_delta(&powers[n]);
        let mut rhs = (&powers[n - 1] * &ds).scale_int(n as i64);
        if n >= 2 {
            let k = (n * (n - 1) / 2) as i64;
            rhs = &rhs + &(&powers[n - 2] * &ss).scale_int(k);
        }
        power_residuals.push(&lhs - &rhs);
    }
    let n = order as usize;
    let lhs = bv_delta(&truncated_exponential(&powers, n));
    let i_over_hbar = &Coefficient::i() * &Coefficient::hbar(-1);
    let minus_half_over_hbar2 =
        Coefficient::hbar(-2).scale(&BigRational::new((-1).into(), 2.into()));
    let rhs = &(&truncated_exponential(&powers, n - 1) * &ds.scale(&i_over_hbar))
        + &(&truncated_exponential(&powers, n - 2) * &ss.scale(&minus_half_over_hbar2));
    Ok(ExpCheckReport {
        order,
        power_residuals,
        series_residual: &lhs - &rhs,
    })
}

/// `𝒪F = {S,F} − iħΔF`.
pub fn quantum_differential(s: &Superfunction, f: &Superfunction) -> Superfunction {
    let i_hbar = &Coefficient::i() * &Coefficient::hbar(1);
    &schouten_bracket(s, f) - &bv_delta(f).scale(&i_hbar)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObservableReport {
    pub residual: Superfunction,
}

impl ObservableReport {
    pub fn is_observable(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn check_observable(s: &Superfunction, f: &Superfunction) -> ObservableReport {
    ObservableReport {
        residual: quantum_differential(s, f),
    }
}

/// With `Ω = e^{iS/ħ}Ω₀` the twisted Laplacian is `Δ + (i/ħ){S,−}`; this
/// returns `−iħ(ΔF + (i/ħ){S,F}) − 𝒪F`, which vanishes identically.
pub fn volume_twist_residual(s: &Superfunction, f: &Superfunction) -> Superfunction {
    let i_over_hbar = &Coefficient::i() * &Coefficient::hbar(-1);
    let twisted = &bv_delta(f) + &schouten_bracket(&s.scale(&i_over_hbar), f);
    let minus_i_hbar = (&Coefficient::i() * &Coefficient::hbar(1)).scale_int(-1);
    &twisted.scale(&minus_i_hbar) - &quantum_differential(s, f)
}
