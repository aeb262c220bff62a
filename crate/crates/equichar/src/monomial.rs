//! Monic monomials `w1^a1 ... wn^an u1^e1 ... un^en` in the torus ring, with
//! the idempotent reduction `ui^2 = ui` built into multiplication.

use serde::{Deserialize, Serialize};

/// A monic monomial over `n` variable pairs. `w[i]` is the exponent of the
/// degree-1 variable `w_{i+1}`; `u[i]` records whether the degree-0 idempotent
/// `u_{i+1}` is present.
///
/// The derived order is lexicographic on the tuple `(a_1..a_n, e_1..e_n)`,
/// which is the dominance order used by the decomposition algorithm. It is
/// only compared between monomials of the same rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub w: Vec<u32>,
    pub u: Vec<bool>,
}

impl Monomial {
    /// The empty monomial (constant 1) at rank `n`.
    pub fn one(n: usize) -> Self {
        Monomial { w: vec![0; n], u: vec![false; n] }
    }

    pub fn rank(&self) -> usize {
        self.w.len()
    }

    /// Total degree: the sum of the `w` exponents (`u`'s have degree 0).
    pub fn degree(&self) -> usize {
        self.w.iter().map(|&a| a as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.w.iter().all(|&a| a == 0) && self.u.iter().all(|&e| !e)
    }

    /// True if no `u` variable occurs.
    pub fn is_u_free(&self) -> bool {
        self.u.iter().all(|&e| !e)
    }

    /// Product with idempotent reduction: `w` exponents add, `u` flags union.
    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), rhs.rank());
        Monomial {
            w: self.w.iter().zip(&rhs.w).map(|(a, b)| a + b).collect(),
            u: self.u.iter().zip(&rhs.u).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// The monomial `w_i` (1-indexed).
    pub fn var_w(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.w[i - 1] = 1;
        m
    }

    /// The monomial `u_i` (1-indexed).
    pub fn var_u(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.u[i - 1] = true;
        m
    }
}
