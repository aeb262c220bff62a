//! Canonical text form for torus polynomials and its parser.
//!
//! Terms are printed in descending dominance order, joined by ` + ` / ` - `;
//! a term is `coeff*w<i>^<a>*...*u<j>*...` with 1-indexed variables, `^1`
//! omitted, and a unit coefficient omitted unless the term is constant.
//! Burnside coefficients with a nonzero `x`-part print parenthesized as
//! `(p/q + r/s x)`. The round trip `parse(print(p)) == p` is bit-exact.

use crate::coeff::{BurnsideCoeff, CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{BPoly, QPoly, TorusPoly};
use num::traits::{One, Signed, Zero};
use num::BigInt;

/// Render the variable part of a monomial, or `""` for the constant monomial.
pub fn print_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &a) in m.w.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("w{}", i + 1)),
            _ => parts.push(format!("w{}^{}", i + 1, a)),
        }
    }
    for (j, &e) in m.u.iter().enumerate() {
        if e {
            parts.push(format!("u{}", j + 1));
        }
    }
    parts.join("*")
}

/// Canonical text form of a polynomial.
pub fn print_poly<C: CoeffRing>(p: &TorusPoly<C>) -> String {
    join_terms(
        p.sorted_terms()
            .into_iter()
            .map(|(m, c)| term_body(&print_monomial(m), c)),
    )
}

/// Join signed term bodies with ` + ` / ` - `, or `"0"` when empty.
pub(crate) fn join_terms(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (negative, body)) in parts.into_iter().enumerate() {
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Render one term given the variable part's text; returns (negative, body).
pub(crate) fn term_body<C: CoeffRing>(mono: &str, c: &C) -> (bool, String) {
    if let Some(q) = c.is_plain_rational() {
        let negative = q.is_negative();
        let abs = if negative { -q } else { q.clone() };
        let body = if mono.is_empty() {
            abs.to_string()
        } else if One::is_one(&abs) {
            mono.to_string()
        } else {
            format!("{abs}*{mono}")
        };
        (negative, body)
    } else {
        let body = if mono.is_empty() {
            c.print()
        } else {
            format!("{}*{}", c.print(), mono)
        };
        (false, body)
    }
}

/// Parse a polynomial over the Burnside ring.
pub fn parse_bpoly(n: usize, input: &str) -> Result<BPoly> {
    Parser::new(n, input, true).parse_poly()
}

/// Parse a polynomial over the rationals; `x` and `y` are rejected.
pub fn parse_qpoly(n: usize, input: &str) -> Result<QPoly> {
    let b = Parser::new(n, input, false).parse_poly()?;
    Ok(b.map_coeffs(|c| c.q.clone()))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
    allow_x: bool,
}

impl<'a> Parser<'a> {
    fn new(n: usize, input: &'a str, allow_x: bool) -> Self {
        Parser { bytes: input.as_bytes(), pos: 0, n, allow_x }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_poly(mut self) -> Result<BPoly> {
        let mut out = BPoly::zero(self.n);
        self.skip_ws();
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            self.skip_ws();
            let (m, c) = self.parse_term()?;
            let c = if negative { c.neg_ref() } else { c };
            out.add_term(m, c);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(Monomial, BurnsideCoeff)> {
        let mut coeff = BurnsideCoeff::one();
        let mut mono = Monomial::one(self.n);
        let mut first = true;
        loop {
            self.skip_ws();
            if !first && !self.eat(b'*') {
                break;
            }
            self.skip_ws();
            match self.peek() {
                Some(b'0'..=b'9') => {
                    let q = self.parse_rational()?;
                    coeff = coeff.mul_ref(&BurnsideCoeff::from_rational(q));
                }
                Some(b'(') => {
                    let c = self.parse_paren_coeff()?;
                    coeff = coeff.mul_ref(&c);
                }
                Some(b'w') | Some(b'u') => {
                    let (var, idx, exp) = self.parse_var()?;
                    if idx == 0 || idx > self.n {
                        return Err(Error::Parse {
                            pos: self.pos,
                            msg: format!("variable index {idx} out of range 1..={}", self.n),
                        });
                    }
                    if var == b'w' {
                        let m = &mut mono.w[idx - 1];
                        *m = m
                            .checked_add(exp)
                            .ok_or(Error::Parse { pos: self.pos, msg: "exponent overflow".into() })?;
                    } else if exp > 0 {
                        mono.u[idx - 1] = true;
                    }
                }
                Some(b'x') if self.allow_x => {
                    self.pos += 1;
                    coeff = coeff.mul_ref(&BurnsideCoeff::x());
                }
                Some(b'y') if self.allow_x => {
                    self.pos += 1;
                    coeff = coeff.mul_ref(&BurnsideCoeff::y());
                }
                _ if first => return self.err("expected a term"),
                _ => return self.err("expected a factor after `*`"),
            }
            first = false;
        }
        Ok((mono, coeff))
    }

    /// `( srat )` or `( srat +/- [rat] x )`.
    fn parse_paren_coeff(&mut self) -> Result<BurnsideCoeff> {
        debug_assert_eq!(self.peek(), Some(b'('));
        self.pos += 1;
        self.skip_ws();
        let neg_q = self.eat(b'-');
        self.skip_ws();
        let mut q = self.parse_rational()?;
        if neg_q {
            q = -q;
        }
        self.skip_ws();
        let mut qx: Rational = Zero::zero();
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            if !self.allow_x {
                return self.err("`x` coefficients are not valid here");
            }
            self.pos += 1;
            self.skip_ws();
            let mag = if matches!(self.peek(), Some(b'0'..=b'9')) {
                let r = self.parse_rational()?;
                self.skip_ws();
                self.eat(b'*');
                self.skip_ws();
                r
            } else {
                One::one()
            };
            if !self.eat(b'x') {
                return self.err("expected `x` in coefficient");
            }
            qx = if sign == b'-' { -mag } else { mag };
            self.skip_ws();
        }
        if !self.eat(b')') {
            return self.err("expected `)`");
        }
        Ok(BurnsideCoeff::new(q, qx))
    }

    fn parse_var(&mut self) -> Result<(u8, usize, u32)> {
        let var = self.bump().expect("caller peeked");
        let idx = self.parse_usize()?;
        let exp = if self.eat(b'^') { self.parse_u32()? } else { 1 };
        Ok((var, idx, exp))
    }

    fn parse_digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn parse_usize(&mut self) -> Result<usize> {
        let s = self.parse_digits()?;
        s.parse().map_err(|_| Error::Parse { pos: self.pos, msg: "index too large".into() })
    }

    fn parse_u32(&mut self) -> Result<u32> {
        let s = self.parse_digits()?;
        s.parse().map_err(|_| Error::Parse { pos: self.pos, msg: "exponent too large".into() })
    }

    fn parse_rational(&mut self) -> Result<Rational> {
        let num: BigInt = self
            .parse_digits()?
            .parse()
            .expect("digit string is a valid integer");
        if self.eat(b'/') {
            let den: BigInt = self
                .parse_digits()?
                .parse()
                .expect("digit string is a valid integer");
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from(num))
        }
    }
}
