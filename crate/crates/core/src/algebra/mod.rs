//! Graded commutative polynomial algebra on the shifted cotangent bundle
//! coordinates `(x^i, c^a, x*_i, c*_a)`.
//!
//! | kind      | token | ghost degree | parity |
//! |-----------|-------|--------------|--------|
//! | field     | `x`   | 0            | even   |
//! | ghost     | `c`   | +1           | odd    |
//! | antifield | `xs`  | -1           | odd    |
//! | antighost | `cs`  | -2           | even   |

mod coefficient;
mod context;
mod monomial;
pub mod random;
mod superfunction;
mod text;

pub use coefficient::{gaussian, rational, real, Coefficient, Gaussian};
pub use context::{Context, GenId, Generator, GeneratorInfo, GeneratorKind, Parity};
pub use monomial::Monomial;
pub use superfunction::{GhostDegree, Superfunction};
pub use text::{parse_raw, RawExpr};
