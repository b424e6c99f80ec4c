use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::coefficient::{gaussian, rational, Coefficient};
use super::context::{Context, GenId, Parity};
use super::monomial::Monomial;
use super::superfunction::Superfunction;

/// Shape of randomly drawn superfunctions.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    /// Maximum total polynomial degree of a monomial.
    pub degree_bound: u32,
    /// Maximum number of terms drawn (duplicates merge).
    pub max_terms: usize,
    /// Probability that a coefficient carries a factor of ħ or ħ⁻¹.
    pub hbar_probability: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            degree_bound: 3,
            max_terms: 3,
            hbar_probability: 0.1,
        }
    }
}

/// Deterministic per-trial generator: the stream depends only on the seed,
/// a stream label, and the trial index.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos((trial as u128) << 20);
    rng
}

fn small_coefficient(rng: &mut impl Rng, shape: &RandomShape) -> Coefficient {
    const REALS: [(i64, i64); 7] = [(1, 1), (-1, 1), (2, 1), (1, 2), (-3, 2), (3, 1), (-2, 3)];
    let g = match rng.gen_range(0..10) {
        0 => gaussian(rational(0, 1), rational(1, 1)),
        1 => gaussian(rational(1, 1), rational(-1, 1)),
        2 => gaussian(rational(1, 2), rational(2, 1)),
        _ => {
            let (p, q) = REALS[rng.gen_range(0..REALS.len())];
            gaussian(rational(p, q), rational(0, 1))
        }
    };
    let mut c = Coefficient::from_gaussian(g);
    if rng.gen_bool(shape.hbar_probability) {
        c = &c * &Coefficient::hbar(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    c
}

fn random_monomial(rng: &mut impl Rng, ctx: &Context, degree: u32) -> Monomial {
    let mut exps = vec![0u32; ctx.len()];
    for _ in 0..degree {
        let id = rng.gen_range(0..ctx.len());
        if ctx.parity(id as GenId).is_odd() {
            // Odd generators enter with probability one half and at most once.
            if exps[id] == 0 && rng.gen_bool(0.5) {
                exps[id] = 1;
            }
        } else {
            exps[id] += 1;
        }
    }
    Monomial(
        exps.into_iter()
            .enumerate()
            .filter(|&(_, e)| e > 0)
            .map(|(id, e)| (id as GenId, e))
            .collect(),
    )
}

/// A random superfunction of the requested parity (or mixed if `None`).
pub fn random_superfunction(
    rng: &mut impl Rng,
    ctx: &Arc<Context>,
    shape: &RandomShape,
    parity: Option<Parity>,
) -> Superfunction {
    if ctx.is_empty() {
        return Superfunction::constant(ctx, small_coefficient(rng, shape));
    }
    let n_terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        // Rejection keeps the requested parity; a constant is always even.
        let mut found = None;
        for _ in 0..32 {
            let degree = rng.gen_range(0..=shape.degree_bound);
            let m = random_monomial(rng, ctx, degree);
            let p = if m.is_odd(ctx) {
                Parity::Odd
            } else {
                Parity::Even
            };
            if parity.is_none_or(|want| want == p) {
                found = Some(m);
                break;
            }
        }
        if let Some(m) = found {
            terms.push((m, small_coefficient(rng, shape)));
        }
    }
    Superfunction::from_raw_terms(ctx, terms)
}

pub fn random_parity(rng: &mut impl Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}
