//! Coefficient rings: exact rationals and the rational Burnside ring of the
//! two-element group, `A = Q[x]/(x^2 = 2x)`.

use num::{BigInt, BigRational};
use num::traits::{One, Signed, Zero};
use std::fmt;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for small integers as rationals.
pub fn rat_int(num: i64) -> Rational {
    Rational::from(BigInt::from(num))
}

/// Tag identifying which coefficient ring a polynomial carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    /// The rational numbers.
    Q,
    /// The rational Burnside ring `Q[x]/(x^2 = 2x)`.
    Burnside,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Q => write!(f, "Q"),
            RingTag::Burnside => write!(f, "A_Q"),
        }
    }
}

/// Ring operations required of polynomial coefficients.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const TAG: RingTag;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
    /// Exact multiplication by a rational scalar.
    fn scale(&self, q: &Rational) -> Self;
    /// Canonical text form; parenthesized exactly when `needs_parens` says so.
    fn print(&self) -> String;
    /// True when the printed form requires no `(...)` wrapper in a term.
    fn is_plain_rational(&self) -> Option<&Rational>;
}

impl CoeffRing for Rational {
    const TAG: RingTag = RingTag::Q;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn print(&self) -> String {
        self.to_string()
    }
    fn is_plain_rational(&self) -> Option<&Rational> {
        Some(self)
    }
}

/// Element `q + qx*x` of the rational Burnside ring `Q[x]/(x^2 = 2x)`.
///
/// The idempotents are `x/2` and `y = 1 - x/2`; the ring splits as `Q x Q`
/// via evaluation at `x = 2` and `x = 0` (see [`BurnsideCoeff::split`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideCoeff {
    pub q: Rational,
    pub qx: Rational,
}

impl BurnsideCoeff {
    pub fn new(q: Rational, qx: Rational) -> Self {
        BurnsideCoeff { q, qx }
    }

    /// The transfer element `x`.
    pub fn x() -> Self {
        BurnsideCoeff::new(Zero::zero(), One::one())
    }

    /// The idempotent `y = 1 - x/2`.
    pub fn y() -> Self {
        BurnsideCoeff::new(One::one(), rat(-1, 2))
    }

    /// Image under the splitting `A ~ Q x Q`, `(q, qx) -> (q + 2qx, q)`:
    /// first the evaluation at `x = 2`, then at `x = 0`.
    pub fn split(&self) -> (Rational, Rational) {
        (&self.q + &self.qx * rat_int(2), self.q.clone())
    }

    /// Inverse of [`BurnsideCoeff::split`].
    pub fn from_split(at_two: Rational, at_zero: Rational) -> Self {
        let qx = (at_two - &at_zero) / rat_int(2);
        BurnsideCoeff::new(at_zero, qx)
    }
}

impl CoeffRing for BurnsideCoeff {
    const TAG: RingTag = RingTag::Burnside;

    fn zero() -> Self {
        BurnsideCoeff::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        BurnsideCoeff::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.q) && Zero::is_zero(&self.qx)
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.q) && Zero::is_zero(&self.qx)
    }
    fn add_ref(&mut self, rhs: &Self) {
        self.q += &rhs.q;
        self.qx += &rhs.qx;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        // (q1 + x1 x)(q2 + x2 x) = q1 q2 + (q1 x2 + x1 q2 + 2 x1 x2) x
        let q = &self.q * &rhs.q;
        let qx = &self.q * &rhs.qx + &self.qx * &rhs.q + &self.qx * &rhs.qx * rat_int(2);
        BurnsideCoeff::new(q, qx)
    }
    fn neg_ref(&self) -> Self {
        BurnsideCoeff::new(-&self.q, -&self.qx)
    }
    fn from_rational(q: Rational) -> Self {
        BurnsideCoeff::new(q, Zero::zero())
    }
    fn scale(&self, q: &Rational) -> Self {
        BurnsideCoeff::new(&self.q * q, &self.qx * q)
    }
    fn print(&self) -> String {
        if Zero::is_zero(&self.qx) {
            self.q.to_string()
        } else if self.qx.is_negative() {
            format!("({} - {} x)", self.q, -&self.qx)
        } else {
            format!("({} + {} x)", self.q, self.qx)
        }
    }
    fn is_plain_rational(&self) -> Option<&Rational> {
        if Zero::is_zero(&self.qx) {
            Some(&self.q)
        } else {
            None
        }
    }
}

impl fmt::Display for BurnsideCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print())
    }
}
