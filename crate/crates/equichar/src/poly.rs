//! Sparse polynomials in the torus ring `k[w1..wn, u1..un]/(ui^2 = ui)`,
//! generic over the coefficient ring.

use crate::coeff::{BurnsideCoeff, CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Cached result of the homogeneity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeView {
    /// The zero polynomial.
    Zero,
    /// Every term has this degree.
    Homogeneous(usize),
    /// Two witness degrees that both occur.
    Mixed { lo: usize, hi: usize },
}

/// A sparse torus polynomial over `C` at a fixed rank.
///
/// Terms live in a hash map; every consumer that needs a reproducible order
/// (printing, serialization, dominant-term search) sorts by the monomial
/// dominance order on demand.
#[derive(Debug, Clone)]
pub struct TorusPoly<C: CoeffRing> {
    n: usize,
    terms: HashMap<Monomial, C>,
    degree: OnceLock<DegreeView>,
}

pub type QPoly = TorusPoly<Rational>;
pub type BPoly = TorusPoly<BurnsideCoeff>;

impl<C: CoeffRing> PartialEq for TorusPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}
impl<C: CoeffRing> Eq for TorusPoly<C> {}

impl<C: CoeffRing> TorusPoly<C> {
    pub fn zero(n: usize) -> Self {
        TorusPoly { n, terms: HashMap::new(), degree: OnceLock::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut p = TorusPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        TorusPoly::constant(n, C::one())
    }

    pub fn var_w(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, rank: n });
        }
        Ok(TorusPoly::from_term(Monomial::var_w(n, i), C::one()))
    }

    pub fn var_u(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, rank: n });
        }
        Ok(TorusPoly::from_term(Monomial::var_u(n, i), C::one()))
    }

    pub fn from_term(m: Monomial, c: C) -> Self {
        let mut p = TorusPoly::zero(m.rank());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = TorusPoly::zero(n);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Terms sorted by descending dominance order; the canonical iteration
    /// used by the printer and all serializers.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp(a.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Add `c * m`, stripping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        self.degree = OnceLock::new();
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                e.get_mut().add_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_rank(rhs)?;
        let mut out = self.clone();
        out.degree = OnceLock::new();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect();
        TorusPoly { n: self.n, terms, degree: OnceLock::new() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_rank(rhs)?;
        let mut out = TorusPoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if num::traits::Zero::is_zero(q) {
            return TorusPoly::zero(self.n);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect();
        TorusPoly { n: self.n, terms, degree: OnceLock::new() }
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        let mut out = TorusPoly::zero(self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = TorusPoly::one(self.n);
        for _ in 0..k {
            out = out.mul(self).expect("same rank");
        }
        out
    }

    /// Lazily computed, cached homogeneity information.
    pub fn degree_info(&self) -> DegreeView {
        *self.degree.get_or_init(|| {
            let mut seen: Option<usize> = None;
            for m in self.terms.keys() {
                let d = m.degree();
                match seen {
                    None => seen = Some(d),
                    Some(d0) if d0 != d => {
                        return DegreeView::Mixed { lo: d0.min(d), hi: d0.max(d) };
                    }
                    _ => {}
                }
            }
            match seen {
                None => DegreeView::Zero,
                Some(d) => DegreeView::Homogeneous(d),
            }
        })
    }

    /// `Ok(None)` for the zero polynomial, `Ok(Some(d))` when homogeneous of
    /// degree `d`, and the two offending degrees otherwise.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        match self.degree_info() {
            DegreeView::Zero => Ok(None),
            DegreeView::Homogeneous(d) => Ok(Some(d)),
            DegreeView::Mixed { lo, hi } => Err(Error::NotHomogeneous { lo, hi }),
        }
    }

    /// The part of total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TorusPoly { n: self.n, terms, degree: OnceLock::new() }
    }

    /// All degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// The dominance-greatest monomial with its coefficient.
    pub fn dominant_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| a.0.cmp(b.0))
    }

    /// True if every term is `u`-free.
    pub fn is_u_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_u_free())
    }

    /// Substitute `u_i := 0` for every `i`: keeps only the `u`-free terms.
    pub fn kill_u(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.is_u_free())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TorusPoly { n: self.n, terms, degree: OnceLock::new() }
    }

    /// Apply a rational-linear map to every coefficient.
    pub fn map_coeffs<D: CoeffRing>(&self, f: impl Fn(&C) -> D) -> TorusPoly<D> {
        let mut out = TorusPoly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl QPoly {
    /// Promote rational coefficients into the Burnside ring.
    pub fn promote(&self) -> BPoly {
        self.map_coeffs(|c| BurnsideCoeff::from_rational(c.clone()))
    }

    /// True when `p * p == p`.
    pub fn is_idempotent(&self) -> bool {
        match self.mul(self) {
            Ok(sq) => &sq == self,
            Err(_) => false,
        }
    }
}

impl BPoly {
    /// True when `p * p == p`.
    pub fn is_idempotent(&self) -> bool {
        match self.mul(self) {
            Ok(sq) => &sq == self,
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    fn w(n: usize, i: usize) -> QPoly {
        QPoly::var_w(n, i).unwrap()
    }
    fn u(n: usize, i: usize) -> QPoly {
        QPoly::var_u(n, i).unwrap()
    }

    #[test]
    fn arithmetic_with_idempotents() {
        let p = u(2, 1).add(&u(2, 2)).unwrap();
        let sq = p.mul(&p).unwrap();
        // (u1+u2)^2 = u1 + u2 + 2 u1 u2
        let expected = p
            .add(&u(2, 1).mul(&u(2, 2)).unwrap().scale(&rat_int(2)))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn homogeneity_diagnostics() {
        let p = w(2, 1).add(&w(2, 1).mul(&w(2, 2)).unwrap()).unwrap();
        match p.homogeneous_degree() {
            Err(Error::NotHomogeneous { lo: 1, hi: 2 }) => {}
            other => panic!("expected mixed degrees, got {other:?}"),
        }
        assert_eq!(w(2, 1).homogeneous_degree().unwrap(), Some(1));
        assert_eq!(QPoly::zero(2).homogeneous_degree().unwrap(), None);
        assert_eq!(u(2, 1).homogeneous_degree().unwrap(), Some(0));
    }

    #[test]
    fn dominant_term_of_square() {
        // gamma_{1,1} at n=3: dominant of the square is w1^2*u2*u3, not (w1*u2)^2.
        let n = 3;
        let mut g = QPoly::zero(n);
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    g = g.add(&w(n, i).mul(&u(n, j)).unwrap()).unwrap();
                }
            }
        }
        let sq = g.mul(&g).unwrap();
        let (m, c) = sq.dominant_term().unwrap();
        assert_eq!(m.w, vec![2, 0, 0]);
        assert_eq!(m.u, vec![false, true, true]);
        assert_eq!(c, &rat_int(2));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        assert!(matches!(
            w(2, 1).add(&w(3, 1)),
            Err(Error::RankMismatch { left: 2, right: 3 })
        ));
    }
}
