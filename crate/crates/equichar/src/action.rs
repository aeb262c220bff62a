//! Weyl-group actions on the torus ring: signed permutations of the variable
//! pairs, orbit sums, invariance tests, and the brute-force invariant
//! dimension oracle.

use crate::coeff::{CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::linalg::RowSpace;
use crate::monomial::Monomial;
use crate::par::par_map;
use crate::poly::TorusPoly;

/// Which group of signed permutations acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// Permutations only; all signs `+1`.
    Symmetric,
    /// The full hyperoctahedral group: all permutations, all signs.
    Hyperoctahedral,
    /// All permutations, sign vectors with an even number of `-1` entries.
    EvenSigned,
    /// Identity permutation, all signs.
    SignOnly,
}

impl GroupKind {
    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Symmetric => "the symmetric group",
            GroupKind::Hyperoctahedral => "the hyperoctahedral group",
            GroupKind::EvenSigned => "the even-signed permutation group",
            GroupKind::SignOnly => "the sign-change group",
        }
    }

    pub fn order(&self, n: usize) -> usize {
        let fact: usize = (1..=n).product::<usize>().max(1);
        match self {
            GroupKind::Symmetric => fact,
            GroupKind::Hyperoctahedral => fact << n,
            GroupKind::EvenSigned => {
                if n == 0 {
                    1
                } else {
                    (fact << n) / 2
                }
            }
            GroupKind::SignOnly => 1 << n,
        }
    }

    /// Enumerate every element as a signed permutation.
    pub fn elements(&self, n: usize) -> Vec<SignedPerm> {
        let perms: Vec<Vec<usize>> = match self {
            GroupKind::SignOnly => vec![(0..n).collect()],
            _ => permutations(n),
        };
        let mut out = Vec::with_capacity(self.order(n));
        for perm in &perms {
            for mask in 0u32..(1 << n) {
                let keep = match self {
                    GroupKind::Symmetric => mask == 0,
                    GroupKind::Hyperoctahedral | GroupKind::SignOnly => true,
                    GroupKind::EvenSigned => mask.count_ones() % 2 == 0,
                };
                if keep {
                    out.push(SignedPerm::new(perm.clone(), mask));
                }
            }
        }
        out
    }

    /// A generating set: adjacent transpositions plus, for the signed kinds,
    /// one sign generator.
    pub fn generators(&self, n: usize) -> Vec<SignedPerm> {
        let mut gens = Vec::new();
        if !matches!(self, GroupKind::SignOnly) {
            for i in 0..n.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(i, i + 1);
                gens.push(SignedPerm::new(perm, 0));
            }
        }
        let id: Vec<usize> = (0..n).collect();
        match self {
            GroupKind::Symmetric => {}
            GroupKind::Hyperoctahedral | GroupKind::SignOnly => {
                for i in 0..n {
                    gens.push(SignedPerm::new(id.clone(), 1 << i));
                }
            }
            GroupKind::EvenSigned => {
                if n >= 2 {
                    gens.push(SignedPerm::new(id.clone(), 0b11));
                }
            }
        }
        gens
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// One signed permutation: `w_i -> sign(perm[i]) * w_{perm[i]}`,
/// `u_i -> u_{perm[i]}` (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    perm: Vec<usize>,
    /// Bit `j` set means the sign attached to slot `j` is `-1`.
    neg_mask: u32,
}

impl SignedPerm {
    pub fn new(perm: Vec<usize>, neg_mask: u32) -> Self {
        SignedPerm { perm, neg_mask }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Image of a monic monomial along with whether the sign is `-1`.
    pub fn apply_monomial(&self, m: &Monomial) -> (Monomial, bool) {
        let n = self.perm.len();
        let mut out = Monomial::one(n);
        let mut negative = false;
        for i in 0..n {
            let j = self.perm[i];
            out.w[j] = m.w[i];
            out.u[j] = m.u[i];
            if self.neg_mask >> j & 1 == 1 && m.w[i] % 2 == 1 {
                negative = !negative;
            }
        }
        (out, negative)
    }

    pub fn apply_poly<C: CoeffRing>(&self, p: &TorusPoly<C>) -> Result<TorusPoly<C>> {
        if p.rank() != self.rank() {
            return Err(Error::RankMismatch { left: p.rank(), right: self.rank() });
        }
        let mut out = TorusPoly::zero(p.rank());
        for (m, c) in p.terms() {
            let (image, negative) = self.apply_monomial(m);
            let c = if negative { c.neg_ref() } else { c.clone() };
            out.add_term(image, c);
        }
        Ok(out)
    }
}

/// The plain group sum over every element of the group (no averaging), so a
/// single monomial with a nontrivial stabilizer picks up a multiplicity.
pub fn symmetrize<C: CoeffRing>(
    p: &TorusPoly<C>,
    kind: GroupKind,
) -> Result<TorusPoly<C>> {
    let n = p.rank();
    let images = par_map(kind.elements(n), |g| g.apply_poly(p));
    let mut out = TorusPoly::zero(n);
    for image in images {
        out = out.add(&image?)?;
    }
    Ok(out)
}

/// Invariance under the whole group, checked on a generating set.
pub fn is_invariant<C: CoeffRing>(p: &TorusPoly<C>, kind: GroupKind) -> Result<bool> {
    for g in kind.generators(p.rank()) {
        if &g.apply_poly(p)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All monic monomials of the given total degree; `with_u` includes every
/// subset of the idempotent variables, otherwise only `u`-free monomials.
pub fn monomials_of_degree(n: usize, d: usize, with_u: bool) -> Vec<Monomial> {
    let mut exps = Vec::new();
    let mut current = vec![0u32; n];
    compositions(d, 0, &mut current, &mut exps);
    let mut out = Vec::new();
    for w in exps {
        if with_u {
            for mask in 0u32..(1 << n) {
                let u = (0..n).map(|i| mask >> i & 1 == 1).collect();
                out.push(Monomial { w: w.clone(), u });
            }
        } else {
            out.push(Monomial { w: w.clone(), u: vec![false; n] });
        }
    }
    out
}

fn compositions(rest: usize, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let n = current.len();
    if idx + 1 == n {
        current[idx] = rest as u32;
        out.push(current.clone());
        return;
    }
    if n == 0 {
        if rest == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for a in 0..=rest {
        current[idx] = a as u32;
        compositions(rest - a, idx + 1, current, out);
    }
}

const DIMENSION_GUARD: usize = 2_000_000;

/// Dimension over `Q` of the invariant subspace of the degree-`d` graded
/// piece, by exact row reduction of all monomial orbit sums. `with_u`
/// restricts to the `u`-free subring when false.
pub fn invariant_dimension_of(
    kind: GroupKind,
    n: usize,
    d: usize,
    with_u: bool,
) -> Result<usize> {
    let monomials = monomials_of_degree(n, d, with_u);
    let size = monomials.len().saturating_mul(kind.order(n));
    if size > DIMENSION_GUARD {
        return Err(Error::ResourceGuard {
            what: "invariant dimension oracle".into(),
            size,
            limit: DIMENSION_GUARD,
        });
    }
    let elements = kind.elements(n);
    let rows: Vec<TorusPoly<Rational>> = par_map(monomials, |m| {
        let mut sum = TorusPoly::zero(n);
        for g in &elements {
            let (image, negative) = g.apply_monomial(&m);
            let c = crate::coeff::rat_int(if negative { -1 } else { 1 });
            sum.add_term(image, c);
        }
        sum
    });
    let mut space = RowSpace::new();
    for row in rows {
        space.insert(row.terms().map(|(m, c)| (m.clone(), c.clone())));
    }
    Ok(space.rank())
}

/// The standard oracle over the full torus ring.
pub fn invariant_dimension(kind: GroupKind, n: usize, d: usize) -> Result<usize> {
    invariant_dimension_of(kind, n, d, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;
    use crate::poly::QPoly;

    #[test]
    fn orders_and_element_counts() {
        for n in 0..=3 {
            for kind in [
                GroupKind::Symmetric,
                GroupKind::Hyperoctahedral,
                GroupKind::EvenSigned,
                GroupKind::SignOnly,
            ] {
                assert_eq!(kind.elements(n).len(), kind.order(n), "{kind:?} at n={n}");
            }
        }
        assert_eq!(GroupKind::Symmetric.order(4), 24);
        assert_eq!(GroupKind::Hyperoctahedral.order(4), 384);
        assert_eq!(GroupKind::EvenSigned.order(4), 192);
        assert_eq!(GroupKind::SignOnly.order(4), 16);
    }

    #[test]
    fn action_examples() {
        // Transposition sends w1*u2 to w2*u1.
        let g = SignedPerm::new(vec![1, 0], 0);
        let m = Monomial::var_w(2, 1).mul(&Monomial::var_u(2, 2));
        let (image, neg) = g.apply_monomial(&m);
        assert_eq!(image, Monomial::var_w(2, 2).mul(&Monomial::var_u(2, 1)));
        assert!(!neg);
        // Sign vector (-1, +1) negates w1 but not w2.
        let s = SignedPerm::new(vec![0, 1], 0b01);
        let p = QPoly::var_w(2, 1).unwrap().add(&QPoly::var_w(2, 2).unwrap()).unwrap();
        let q = s.apply_poly(&p).unwrap();
        let expected = QPoly::var_w(2, 2)
            .unwrap()
            .sub(&QPoly::var_w(2, 1).unwrap())
            .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn symmetrize_examples() {
        let w1 = QPoly::var_w(2, 1).unwrap();
        let sym = symmetrize(&w1, GroupKind::Symmetric).unwrap();
        let expected = w1.add(&QPoly::var_w(2, 2).unwrap()).unwrap();
        assert_eq!(sym, expected);
        assert!(is_invariant(&sym, GroupKind::Symmetric).unwrap());

        // Full sign group at n=1 kills an odd power.
        let w = QPoly::var_w(1, 1).unwrap();
        assert!(symmetrize(&w, GroupKind::Hyperoctahedral).unwrap().is_zero());

        // Stabilizers contribute multiplicity: w1*w2 has orbit sum 2*w1*w2.
        let m = Monomial::var_w(2, 1).mul(&Monomial::var_w(2, 2));
        let p = QPoly::from_term(m.clone(), rat_int(1));
        let sym = symmetrize(&p, GroupKind::Symmetric).unwrap();
        assert_eq!(sym, QPoly::from_term(m, rat_int(2)));
    }

    #[test]
    fn invariance_examples() {
        let even = crate::text::parse_qpoly(2, "w1^2 + w2^2").unwrap();
        assert!(is_invariant(&even, GroupKind::Hyperoctahedral).unwrap());
        let w1 = QPoly::var_w(2, 1).unwrap();
        assert!(!is_invariant(&w1, GroupKind::Symmetric).unwrap());
    }

    #[test]
    fn invariant_dimension_examples() {
        assert_eq!(invariant_dimension(GroupKind::Symmetric, 1, 0).unwrap(), 2);
        assert_eq!(invariant_dimension(GroupKind::Symmetric, 2, 1).unwrap(), 4);
        assert_eq!(invariant_dimension(GroupKind::Hyperoctahedral, 1, 1).unwrap(), 0);
        // u-free variant sees only the elementary symmetric polynomials.
        assert_eq!(invariant_dimension_of(GroupKind::Symmetric, 2, 1, false).unwrap(), 1);
    }
}
