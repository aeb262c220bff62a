//! Span certificates for the generator list: exact linear algebra in each
//! graded piece decides, for every flagged generator, whether it lies in the
//! subalgebra the remaining generators span over the Burnside coefficients.
//! At ranks one and two every flagged generator is essential; at rank three
//! the classes gamma1_2 and gamma2_1 are algebraically redundant.

use crate::error::{Error, Result};
use crate::gamma::{gamma_expand, GenMonomial};
use crate::linalg::RowSpace;
use crate::monomial::Monomial;
use crate::pair::PairPoly;

const RANK_LIMIT: usize = 3;

/// Size of the generator list `{u, e_1..e_n, gamma_{s,j}}` at rank `n`.
pub fn generator_count(n: usize) -> usize {
    1 + n + n * (n - 1) / 2
}

/// Per-generator outcome of the span checks at one rank.
#[derive(Debug, Clone)]
pub struct MinimalityReport {
    n: usize,
    essential: Vec<(usize, usize)>,
    redundant: Vec<(usize, usize)>,
}

impl MinimalityReport {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// Flagged generators certified to be outside the span of the rest.
    pub fn essential(&self) -> &[(usize, usize)] {
        &self.essential
    }

    /// Flagged generators that do lie in the subalgebra of the rest.
    pub fn redundant(&self) -> &[(usize, usize)] {
        &self.redundant
    }

    /// Whether the full list is a minimal generating set.
    pub fn is_minimal(&self) -> bool {
        self.redundant.is_empty()
    }

    /// Size of the generator list itself, `1 + n + n(n-1)/2`.
    pub fn cardinality(&self) -> usize {
        generator_count(self.n)
    }
}

// Generator keys other than `excluded`, as (key, degree): the idempotent u,
// the elementary symmetric classes, and the flagged classes.
fn generator_keys(n: usize, excluded: Option<(usize, usize)>) -> Vec<((usize, usize), usize)> {
    let mut keys = vec![((0, 1), 0)];
    for t in 1..=n {
        keys.push(((t, 0), t));
    }
    for t in 1..n {
        for l in 1..=(n - t) {
            keys.push(((t, l), t));
        }
    }
    keys.retain(|(key, _)| Some(*key) != excluded);
    keys
}

// All monomials in the listed generators of exact total degree `degree`,
// with the idempotent's exponent capped at n (higher powers are rational
// combinations of lower ones).
fn products_of_degree(
    n: usize,
    degree: usize,
    excluded: Option<(usize, usize)>,
) -> Vec<GenMonomial> {
    let keys = generator_keys(n, excluded);
    let mut out = Vec::new();
    let mut acc: Vec<((usize, usize), u32)> = Vec::new();
    fn rec(
        n: usize,
        keys: &[((usize, usize), usize)],
        budget: usize,
        acc: &mut Vec<((usize, usize), u32)>,
        out: &mut Vec<GenMonomial>,
    ) {
        let Some((&(key, deg), rest)) = keys.split_first() else {
            if budget == 0 {
                out.push(GenMonomial::from_powers(n, acc.iter().copied()).expect("in range"));
            }
            return;
        };
        let max_mult = if deg == 0 { n } else { budget / deg };
        for mult in 0..=max_mult {
            if mult > 0 {
                acc.push((key, mult as u32));
            }
            rec(n, rest, budget - deg * mult, acc, out);
            if mult > 0 {
                acc.pop();
            }
        }
    }
    rec(n, &keys, degree, &mut acc, &mut out);
    out
}

fn pair_rows(p: &PairPoly) -> Vec<((u8, Monomial), crate::coeff::Rational)> {
    let (y_part, x_part) = p.parts();
    y_part
        .terms()
        .map(|(m, c)| ((0u8, m.clone()), c.clone()))
        .chain(x_part.terms().map(|(m, c)| ((1u8, m.clone()), c.clone())))
        .collect()
}

// Whether gamma_{s,j} lies in the Burnside span of degree-s products of the
// generators, optionally with itself excluded.
fn lies_in_span(n: usize, s: usize, j: usize, excluded: Option<(usize, usize)>) -> Result<bool> {
    let x = PairPoly::x(n);
    let mut space = RowSpace::new();
    for gm in products_of_degree(n, s, excluded) {
        let p = PairPoly::from_q(&gm.expand_q()?);
        space.insert(pair_rows(&p));
        space.insert(pair_rows(&x.mul(&p)?));
    }
    let target = PairPoly::from_q(&gamma_expand(n, s, j)?);
    Ok(space.contains(pair_rows(&target)))
}

/// Decide, for every flagged generator at rank `n`, whether it lies in the
/// subalgebra generated by the remaining generators.
pub fn minimality_certificate(n: usize) -> Result<MinimalityReport> {
    if n > RANK_LIMIT {
        return Err(Error::ResourceGuard {
            what: "minimality certificate".into(),
            size: n,
            limit: RANK_LIMIT,
        });
    }
    let mut essential = Vec::new();
    let mut redundant = Vec::new();
    for s in 1..n {
        for j in 1..=(n - s) {
            if lies_in_span(n, s, j, Some((s, j)))? {
                redundant.push((s, j));
            } else {
                essential.push((s, j));
            }
        }
    }
    Ok(MinimalityReport {
        n,
        essential,
        redundant,
    })
}
