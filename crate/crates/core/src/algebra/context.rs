use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Grading mod 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_degree(degree: i32) -> Self {
        if degree.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// 0 or 1, for use in sign exponents.
    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The four families of coordinates on the shifted cotangent bundle of
/// `X x Πg`. The declaration order is the canonical monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    Field,
    Ghost,
    Antifield,
    Antighost,
}

impl GeneratorKind {
    /// Token prefix in the superfunction text format.
    pub fn token(self) -> &'static str {
        match self {
            GeneratorKind::Field => "x",
            GeneratorKind::Ghost => "c",
            GeneratorKind::Antifield => "xs",
            GeneratorKind::Antighost => "cs",
        }
    }

    pub fn is_base(self) -> bool {
        matches!(self, GeneratorKind::Field | GeneratorKind::Ghost)
    }

    /// Field <-> antifield, ghost <-> antighost.
    pub fn conjugate(self) -> Self {
        match self {
            GeneratorKind::Field => GeneratorKind::Antifield,
            GeneratorKind::Ghost => GeneratorKind::Antighost,
            GeneratorKind::Antifield => GeneratorKind::Field,
            GeneratorKind::Antighost => GeneratorKind::Ghost,
        }
    }
}

/// A coordinate, identified by kind and zero-based index.
///
/// The text format is one-based: `Generator::field(0)` prints as `x1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub index: usize,
}

impl Generator {
    pub fn new(kind: GeneratorKind, index: usize) -> Self {
        Generator { kind, index }
    }

    pub fn field(index: usize) -> Self {
        Generator::new(GeneratorKind::Field, index)
    }

    pub fn ghost(index: usize) -> Self {
        Generator::new(GeneratorKind::Ghost, index)
    }

    pub fn antifield(index: usize) -> Self {
        Generator::new(GeneratorKind::Antifield, index)
    }

    pub fn antighost(index: usize) -> Self {
        Generator::new(GeneratorKind::Antighost, index)
    }

    pub fn conjugate(self) -> Self {
        Generator::new(self.kind.conjugate(), self.index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.token(), self.index + 1)
    }
}

/// Position of a generator in its context's table, which is also its rank in
/// the canonical monomial order.
pub type GenId = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub generator: Generator,
    pub degree: i32,
    pub parity: Parity,
}

/// The generator table of a shifted cotangent bundle `ΠT*(X x Πg)`.
///
/// Standard ghosts have degree +1 and their antighosts degree -2. Ghosts of
/// higher level `k` (degree `k`, antighost degree `-(k+1)`) fit the same
/// table through [`Context::with_ghost_degrees`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    n_fields: usize,
    n_ghosts: usize,
    table: Vec<GeneratorInfo>,
}

impl Context {
    pub fn new(n_fields: usize, n_ghosts: usize) -> Arc<Self> {
        Self::build(n_fields, vec![1; n_ghosts]).expect("standard degrees are valid")
    }

    pub fn with_ghost_degrees(n_fields: usize, ghost_degrees: Vec<i32>) -> Result<Arc<Self>> {
        Self::build(n_fields, ghost_degrees)
    }

    fn build(n_fields: usize, ghost_degrees: Vec<i32>) -> Result<Arc<Self>> {
        let n_ghosts = ghost_degrees.len();
        if 2 * (n_fields + n_ghosts) > GenId::MAX as usize {
            return Err(Error::contract("too many generators for one context"));
        }
        if let Some(d) = ghost_degrees.iter().find(|&&d| d < 1) {
            return Err(Error::contract(format!(
                "ghost degree must be positive, got {d}"
            )));
        }
        let mut table = Vec::with_capacity(2 * (n_fields + n_ghosts));
        let info = |generator, degree| GeneratorInfo {
            generator,
            degree,
            parity: Parity::from_degree(degree),
        };
        for i in 0..n_fields {
            table.push(info(Generator::field(i), 0));
        }
        for (a, &d) in ghost_degrees.iter().enumerate() {
            table.push(info(Generator::ghost(a), d));
        }
        for i in 0..n_fields {
            table.push(info(Generator::antifield(i), -1));
        }
        for (a, &d) in ghost_degrees.iter().enumerate() {
            table.push(info(Generator::antighost(a), -(d + 1)));
        }
        Ok(Arc::new(Context {
            n_fields,
            n_ghosts,
            table,
        }))
    }

    pub fn n_fields(&self) -> usize {
        self.n_fields
    }

    pub fn n_ghosts(&self) -> usize {
        self.n_ghosts
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = &GeneratorInfo> {
        self.table.iter()
    }

    pub fn id(&self, g: Generator) -> Option<GenId> {
        let (n, m) = (self.n_fields, self.n_ghosts);
        let (offset, bound) = match g.kind {
            GeneratorKind::Field => (0, n),
            GeneratorKind::Ghost => (n, m),
            GeneratorKind::Antifield => (n + m, n),
            GeneratorKind::Antighost => (2 * n + m, m),
        };
        (g.index < bound).then(|| (offset + g.index) as GenId)
    }

    pub fn require(&self, g: Generator) -> Result<GenId> {
        self.id(g)
            .ok_or_else(|| Error::contract(format!("generator {g} is not in this context")))
    }

    pub fn info(&self, id: GenId) -> &GeneratorInfo {
        &self.table[id as usize]
    }

    pub fn generator(&self, id: GenId) -> Generator {
        self.table[id as usize].generator
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.table[id as usize].parity
    }

    pub fn degree(&self, id: GenId) -> i32 {
        self.table[id as usize].degree
    }

    /// `(base, dual)` id pairs: `(x^i, x*_i)` then `(c^a, c*_a)`.
    pub fn conjugate_pairs(&self) -> impl Iterator<Item = (GenId, GenId)> + '_ {
        let (n, m) = (self.n_fields, self.n_ghosts);
        (0..n + m).map(move |k| (k as GenId, (n + m + k) as GenId))
    }
}
