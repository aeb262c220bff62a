//! Split model of the Burnside-coefficient polynomial ring. An element is a
//! pair `(f, g)`: `f` lives in the idempotent polynomial ring and `g` is
//! `u`-free, under `w -> (w, w)`, `u -> (u, 0)`, `x -> (0, 2)`. The relation
//! `x*u = 0` is built in and all ring operations act componentwise, which
//! makes products, substitutions, and membership tests cheap and exact.

use crate::coeff::{rat, BurnsideCoeff, Rational};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{BPoly, QPoly};

/// A Burnside-ring polynomial stored as its two split components.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPoly {
    y_part: QPoly,
    x_part: QPoly,
}

impl PairPoly {
    /// Build from explicit components; the `x` component must be `u`-free.
    pub fn from_parts(y_part: QPoly, x_part: QPoly) -> Result<Self> {
        if y_part.rank() != x_part.rank() {
            return Err(Error::RankMismatch { left: y_part.rank(), right: x_part.rank() });
        }
        if !x_part.is_u_free() {
            return Err(Error::BadSubstitution {
                what: "x component".into(),
                reason: "contains idempotent variables".into(),
            });
        }
        Ok(PairPoly { y_part, x_part })
    }

    pub fn zero(n: usize) -> Self {
        PairPoly { y_part: QPoly::zero(n), x_part: QPoly::zero(n) }
    }

    pub fn one(n: usize) -> Self {
        PairPoly { y_part: QPoly::one(n), x_part: QPoly::one(n) }
    }

    /// The class of `x`: `(0, 2)`.
    pub fn x(n: usize) -> Self {
        PairPoly { y_part: QPoly::zero(n), x_part: QPoly::constant(n, rat(2, 1)) }
    }

    /// The idempotent `y = 1 - x/2`: `(1, 0)`.
    pub fn y(n: usize) -> Self {
        PairPoly { y_part: QPoly::one(n), x_part: QPoly::zero(n) }
    }

    pub fn var_w(n: usize, i: usize) -> Result<Self> {
        Ok(PairPoly { y_part: QPoly::var_w(n, i)?, x_part: QPoly::var_w(n, i)? })
    }

    pub fn var_u(n: usize, i: usize) -> Result<Self> {
        Ok(PairPoly { y_part: QPoly::var_u(n, i)?, x_part: QPoly::zero(n) })
    }

    pub fn constant(n: usize, q: Rational) -> Self {
        PairPoly { y_part: QPoly::constant(n, q.clone()), x_part: QPoly::constant(n, q) }
    }

    pub fn rank(&self) -> usize {
        self.y_part.rank()
    }

    pub fn parts(&self) -> (&QPoly, &QPoly) {
        (&self.y_part, &self.x_part)
    }

    pub fn is_zero(&self) -> bool {
        self.y_part.is_zero() && self.x_part.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(PairPoly {
            y_part: self.y_part.add(&rhs.y_part)?,
            x_part: self.x_part.add(&rhs.x_part)?,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(PairPoly {
            y_part: self.y_part.sub(&rhs.y_part)?,
            x_part: self.x_part.sub(&rhs.x_part)?,
        })
    }

    pub fn neg(&self) -> Self {
        PairPoly { y_part: self.y_part.neg(), x_part: self.x_part.neg() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(PairPoly {
            y_part: self.y_part.mul(&rhs.y_part)?,
            x_part: self.x_part.mul(&rhs.x_part)?,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        PairPoly { y_part: self.y_part.pow(k), x_part: self.x_part.pow(k) }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        PairPoly { y_part: self.y_part.scale(q), x_part: self.x_part.scale(q) }
    }

    /// Multiply by a Burnside scalar, which acts on the components by its
    /// evaluations at `x = 0` and `x = 2` respectively.
    pub fn scale_burnside(&self, c: &BurnsideCoeff) -> Self {
        let (at_two, at_zero) = c.split();
        PairPoly {
            y_part: self.y_part.scale(&at_zero),
            x_part: self.x_part.scale(&at_two),
        }
    }

    /// Lift a plain polynomial along `q -> (q, q|_{u=0})`, the image of the
    /// rational subring.
    pub fn from_q(p: &QPoly) -> Self {
        PairPoly { y_part: p.clone(), x_part: p.kill_u() }
    }

    /// Decode a Burnside-coefficient polynomial into its split components.
    pub fn from_bpoly(p: &BPoly) -> Self {
        let n = p.rank();
        let mut y_part = QPoly::zero(n);
        let mut x_part = QPoly::zero(n);
        for (m, c) in p.terms() {
            let (at_two, at_zero) = c.split();
            y_part.add_term(m.clone(), at_zero);
            if m.is_u_free() {
                x_part.add_term(m.clone(), at_two);
            }
        }
        PairPoly { y_part, x_part }
    }

    /// Re-encode as a Burnside-coefficient polynomial. The `u`-containing
    /// monomials carry their `y`-component verbatim; `u`-free monomials
    /// recover `qx = (g_m - f_m) / 2`.
    pub fn to_bpoly(&self) -> BPoly {
        let n = self.rank();
        let mut out = BPoly::zero(n);
        let mut keys: Vec<&Monomial> = self.y_part.terms().map(|(m, _)| m).collect();
        keys.extend(self.x_part.terms().map(|(m, _)| m));
        keys.sort();
        keys.dedup();
        for m in keys {
            let f = self.y_part.coeff(m);
            let c = if m.is_u_free() {
                BurnsideCoeff::from_split(self.x_part.coeff(m), f)
            } else {
                BurnsideCoeff::new(f, rat(0, 1))
            };
            out.add_term(m.clone(), c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_bpoly;

    #[test]
    fn ring_constants_satisfy_the_burnside_relations() {
        let n = 2;
        let x = PairPoly::x(n);
        let y = PairPoly::y(n);
        // x^2 = 2x, y^2 = y, x*y = 0, x + 2y = 2.
        assert_eq!(x.mul(&x).unwrap(), x.scale(&rat(2, 1)));
        assert_eq!(y.mul(&y).unwrap(), y);
        assert!(x.mul(&y).unwrap().is_zero());
        let two = PairPoly::constant(n, rat(2, 1));
        assert_eq!(x.add(&y.scale(&rat(2, 1))).unwrap(), two);
        // x * u = 0 and u is idempotent.
        let u = PairPoly::var_u(n, 1).unwrap();
        assert!(x.mul(&u).unwrap().is_zero());
        assert_eq!(u.mul(&u).unwrap(), u);
    }

    #[test]
    fn round_trip_through_burnside_coefficients() {
        let p = parse_bpoly(2, "(1 + 2 x)*w1^2 + (3 - x)*w1*w2 + 5*u1*w2 + x*u2").unwrap();
        // x*u2 dies: the round trip normalizes it away.
        let pair = PairPoly::from_bpoly(&p);
        let back = pair.to_bpoly();
        let expected = parse_bpoly(2, "(1 + 2 x)*w1^2 + (3 - x)*w1*w2 + 5*u1*w2").unwrap();
        assert_eq!(back, expected);
        assert_eq!(PairPoly::from_bpoly(&back), pair);
    }

    #[test]
    fn multiplication_matches_the_coefficient_ring() {
        let a = parse_bpoly(1, "(1 + x) + 2*u1").unwrap();
        let b = parse_bpoly(1, "(2 - x) + u1").unwrap();
        let via_pairs = PairPoly::from_bpoly(&a).mul(&PairPoly::from_bpoly(&b)).unwrap();
        let direct = a.mul(&b).unwrap();
        assert_eq!(via_pairs, PairPoly::from_bpoly(&direct));
    }

    #[test]
    fn x_component_must_be_u_free() {
        let f = QPoly::var_u(1, 1).unwrap();
        assert!(PairPoly::from_parts(f.clone(), f).is_err());
    }
}
