use super::context::{Context, GenId};

/// A canonical monomial: `(generator id, exponent)` pairs sorted by id.
///
/// Odd generators always carry exponent 1; the product is read left to right
/// in id order, which fixes the Koszul sign of every stored term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub(crate) Vec<(GenId, u32)>);

/// `(sign is negative, monomial)`.
pub(crate) type Signed = (bool, Monomial);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.0
    }

    pub fn exponent(&self, id: GenId) -> u32 {
        self.0
            .binary_search_by_key(&id, |&(g, _)| g)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn degree(&self, ctx: &Context) -> i32 {
        self.0.iter().map(|&(g, e)| ctx.degree(g) * e as i32).sum()
    }

    pub fn odd_count(&self, ctx: &Context) -> usize {
        self.0
            .iter()
            .filter(|&&(g, _)| ctx.parity(g).is_odd())
            .count()
    }

    pub fn is_odd(&self, ctx: &Context) -> bool {
        self.odd_count(ctx) % 2 == 1
    }

    /// Product of two canonical monomials, or `None` if an odd generator
    /// would appear twice.
    pub(crate) fn mul(&self, rhs: &Monomial, ctx: &Context) -> Option<Signed> {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        // Odd factors of `a` not yet emitted; each odd factor taken from `b`
        // has to move left past all of them.
        let mut odd_left_in_a = a.iter().filter(|&&(g, _)| ctx.parity(g).is_odd()).count();
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                if ctx.parity(a[i].0).is_odd() {
                    odd_left_in_a -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else if take_b {
                if ctx.parity(b[j].0).is_odd() && odd_left_in_a % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j]);
                j += 1;
            } else {
                let g = a[i].0;
                if ctx.parity(g).is_odd() {
                    return None;
                }
                out.push((g, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Some((negative, Monomial(out)))
    }

    /// Removes one power of `id`: returns `(multiplicity, sign, rest)`.
    ///
    /// For an odd generator the sign counts the odd factors standing to its
    /// right (`from_right`) or to its left, i.e. the transpositions needed to
    /// bring it to that end of the product.
    pub(crate) fn strip(
        &self,
        id: GenId,
        ctx: &Context,
        from_right: bool,
    ) -> Option<(u32, bool, Monomial)> {
        let k = self.0.binary_search_by_key(&id, |&(g, _)| g).ok()?;
        let (g, e) = self.0[k];
        let mut rest = self.0.clone();
        if ctx.parity(g).is_odd() {
            let passed = if from_right {
                self.0[k + 1..]
                    .iter()
                    .filter(|&&(h, _)| ctx.parity(h).is_odd())
                    .count()
            } else {
                self.0[..k]
                    .iter()
                    .filter(|&&(h, _)| ctx.parity(h).is_odd())
                    .count()
            };
            rest.remove(k);
            Some((1, passed % 2 == 1, Monomial(rest)))
        } else {
            if e == 1 {
                rest.remove(k);
            } else {
                rest[k].1 = e - 1;
            }
            Some((e, false, Monomial(rest)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::context::Generator;

    #[test]
    fn odd_swap_sign() {
        let ctx = Context::new(2, 0);
        let s1 = ctx.id(Generator::antifield(0)).unwrap();
        let s2 = ctx.id(Generator::antifield(1)).unwrap();
        let m1 = Monomial(vec![(s1, 1)]);
        let m2 = Monomial(vec![(s2, 1)]);
        let (neg12, p12) = m1.mul(&m2, &ctx).unwrap();
        let (neg21, p21) = m2.mul(&m1, &ctx).unwrap();
        assert_eq!(p12, p21);
        assert!(!neg12);
        assert!(neg21);
        assert!(m1.mul(&m1, &ctx).is_none());
    }

    #[test]
    fn even_exponents_add() {
        let ctx = Context::new(1, 1);
        let x = ctx.id(Generator::field(0)).unwrap();
        let cs = ctx.id(Generator::antighost(0)).unwrap();
        let a = Monomial(vec![(x, 2), (cs, 1)]);
        let b = Monomial(vec![(x, 1)]);
        let (neg, p) = a.mul(&b, &ctx).unwrap();
        assert!(!neg);
        assert_eq!(p, Monomial(vec![(x, 3), (cs, 1)]));
    }
}
