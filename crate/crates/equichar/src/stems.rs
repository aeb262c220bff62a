//! The bigraded rational stable stems of the order-two group: two finitely
//! presented ring levels linked by restriction, transfer, and the Weyl
//! action, with the degreewise group table and the two-generator circle
//! comparison solved exactly.

use std::collections::BTreeMap;

use crate::coeff::{rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::text;

/// Mackey level of a stems element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StemLevel {
    /// The equivariant level, a module over the Burnside ring.
    Top,
    /// The underlying nonequivariant level, a Laurent ring in one class.
    Bottom,
}

/// Canonical basis class of the bigraded stems. Indices on the four top
/// families are at least 1; the bottom exponent is any nonzero integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StemBasisClass {
    /// The unit, present at both levels, bidegree (0, 0).
    One,
    /// The free-orbit class at the top level, bidegree (0, 0).
    X,
    /// Powers of the orientation class of the doubled sign representation,
    /// bidegree (2j, 2j).
    U2sPow(u32),
    /// The dual orientation family, bidegree (-2j, -2j).
    XOverU2s(u32),
    /// Powers of the Euler class, bidegree (0, -j).
    AsPow(u32),
    /// The dual Euler family, bidegree (0, j).
    YOverAs(u32),
    /// Bottom-level orientation powers, bidegree (m, m).
    UsPow(i64),
}

impl StemBasisClass {
    /// Homology bidegree (k, n) of the class.
    pub fn bidegree(&self) -> (i64, i64) {
        match *self {
            StemBasisClass::One | StemBasisClass::X => (0, 0),
            StemBasisClass::U2sPow(j) => (2 * j as i64, 2 * j as i64),
            StemBasisClass::XOverU2s(j) => (-2 * j as i64, -2 * j as i64),
            StemBasisClass::AsPow(j) => (0, -(j as i64)),
            StemBasisClass::YOverAs(j) => (0, j as i64),
            StemBasisClass::UsPow(m) => (m, m),
        }
    }

    /// True when the class exists at the given level.
    pub fn valid_at(&self, level: StemLevel) -> bool {
        match self {
            StemBasisClass::One => true,
            StemBasisClass::UsPow(_) => level == StemLevel::Bottom,
            _ => level == StemLevel::Top,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StemBasisClass::One | StemBasisClass::X => true,
            StemBasisClass::U2sPow(j)
            | StemBasisClass::XOverU2s(j)
            | StemBasisClass::AsPow(j)
            | StemBasisClass::YOverAs(j) => j >= 1,
            StemBasisClass::UsPow(m) => m != 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Internal("stem class index out of its family range".into()))
        }
    }

    /// Display name; first powers drop the exponent.
    pub fn name(&self) -> String {
        fn pow(base: &str, j: i64) -> String {
            if j == 1 {
                base.to_string()
            } else {
                format!("{base}^{j}")
            }
        }
        match *self {
            StemBasisClass::One => "1".to_string(),
            StemBasisClass::X => "x".to_string(),
            StemBasisClass::U2sPow(j) => pow("u_2s", j as i64),
            StemBasisClass::XOverU2s(j) => pow("x/u_2s", j as i64),
            StemBasisClass::AsPow(j) => pow("a_s", j as i64),
            StemBasisClass::YOverAs(j) => pow("y/a_s", j as i64),
            StemBasisClass::UsPow(m) => pow("u_s", m),
        }
    }
}

/// A homogeneous rational combination of basis classes at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct StemElement {
    level: StemLevel,
    terms: BTreeMap<StemBasisClass, Rational>,
}

impl StemElement {
    pub fn zero(level: StemLevel) -> Self {
        StemElement { level, terms: BTreeMap::new() }
    }

    pub fn one(level: StemLevel) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(StemBasisClass::One, rat_int(1));
        StemElement { level, terms }
    }

    /// A single basis class at the given level.
    pub fn class_at(class: StemBasisClass, level: StemLevel) -> Result<Self> {
        class.validate()?;
        if !class.valid_at(level) {
            return Err(Error::StemLevelMismatch);
        }
        let mut terms = BTreeMap::new();
        terms.insert(class, rat_int(1));
        Ok(StemElement { level, terms })
    }

    /// A single basis class at its natural level: bottom for the
    /// orientation powers, top otherwise.
    pub fn class(class: StemBasisClass) -> Result<Self> {
        let level = if matches!(class, StemBasisClass::UsPow(_)) {
            StemLevel::Bottom
        } else {
            StemLevel::Top
        };
        StemElement::class_at(class, level)
    }

    /// The idempotent complementary to half the free-orbit class.
    pub fn y() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(StemBasisClass::One, rat_int(1));
        terms.insert(StemBasisClass::X, rat(-1, 2));
        StemElement { level: StemLevel::Top, terms }
    }

    pub fn level(&self) -> StemLevel {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StemBasisClass, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, class: &StemBasisClass) -> Rational {
        self.terms.get(class).cloned().unwrap_or_else(|| rat_int(0))
    }

    /// Common bidegree of the terms; `None` for zero.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        self.terms.keys().next().map(|c| c.bidegree())
    }

    fn insert(&mut self, class: StemBasisClass, c: Rational) {
        use std::collections::btree_map::Entry;
        if c == rat_int(0) {
            return;
        }
        match self.terms.entry(class) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == rat_int(0) {
                    e.remove();
                }
            }
        }
    }

    /// Sum within one bidegree. Adding zero is unconstrained.
    pub fn add(&self, other: &StemElement) -> Result<StemElement> {
        if self.level != other.level {
            return Err(Error::StemLevelMismatch);
        }
        if let (Some((k1, n1)), Some((k2, n2))) = (self.bidegree(), other.bidegree()) {
            if (k1, n1) != (k2, n2) {
                return Err(Error::StemBidegreeMismatch { k1, n1, k2, n2 });
            }
        }
        let mut out = self.clone();
        for (cls, c) in &other.terms {
            out.insert(*cls, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &StemElement) -> Result<StemElement> {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> StemElement {
        if *c == rat_int(0) {
            return StemElement::zero(self.level);
        }
        let terms = self.terms.iter().map(|(cls, q)| (*cls, q * c)).collect();
        StemElement { level: self.level, terms }
    }

    /// Product; bidegrees add, and products landing in a vanishing degree
    /// are zero.
    pub fn mul(&self, other: &StemElement) -> Result<StemElement> {
        if self.level != other.level {
            return Err(Error::StemLevelMismatch);
        }
        let mut out = StemElement::zero(self.level);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                for (cls, k) in mul_basis(*a, *b) {
                    out.insert(cls, ca * cb * k);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<StemElement> {
        let mut acc = StemElement::one(self.level);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Render as a signed sum of named classes.
    pub fn print(&self) -> String {
        text::join_terms(self.terms.iter().map(|(cls, c)| {
            let mono = if *cls == StemBasisClass::One { String::new() } else { cls.name() };
            text::term_body(&mono, c)
        }))
    }
}

// Product of two basis classes at a shared level, as a short combination.
// The pair is taken in declaration order, so each rule is written once.
fn mul_basis(a: StemBasisClass, b: StemBasisClass) -> Vec<(StemBasisClass, Rational)> {
    use std::cmp::Ordering;
    use StemBasisClass::*;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        (One, c) => vec![(c, rat_int(1))],
        (X, X) => vec![(X, rat_int(2))],
        (X, U2sPow(j)) => vec![(U2sPow(j), rat_int(2))],
        (X, XOverU2s(j)) => vec![(XOverU2s(j), rat_int(2))],
        (X, AsPow(_)) | (X, YOverAs(_)) => vec![],
        (U2sPow(i), U2sPow(j)) => vec![(U2sPow(i + j), rat_int(1))],
        (U2sPow(i), XOverU2s(j)) => match i.cmp(&j) {
            Ordering::Less => vec![(XOverU2s(j - i), rat_int(1))],
            Ordering::Equal => vec![(X, rat_int(1))],
            Ordering::Greater => vec![(U2sPow(i - j), rat_int(2))],
        },
        (U2sPow(_), AsPow(_)) | (U2sPow(_), YOverAs(_)) => vec![],
        (XOverU2s(i), XOverU2s(j)) => vec![(XOverU2s(i + j), rat_int(2))],
        (XOverU2s(_), AsPow(_)) | (XOverU2s(_), YOverAs(_)) => vec![],
        (AsPow(i), AsPow(j)) => vec![(AsPow(i + j), rat_int(1))],
        (AsPow(i), YOverAs(j)) => match i.cmp(&j) {
            Ordering::Less => vec![(YOverAs(j - i), rat_int(1))],
            Ordering::Equal => vec![(One, rat_int(1)), (X, rat(-1, 2))],
            Ordering::Greater => vec![(AsPow(i - j), rat_int(1))],
        },
        (YOverAs(i), YOverAs(j)) => vec![(YOverAs(i + j), rat_int(1))],
        (UsPow(i), UsPow(j)) => {
            if i + j == 0 {
                vec![(One, rat_int(1))]
            } else {
                vec![(UsPow(i + j), rat_int(1))]
            }
        }
        _ => unreachable!("class pairs at one level are covered in order"),
    }
}

/// Product of two elements at a shared level.
pub fn stem_mul(a: &StemElement, b: &StemElement) -> Result<StemElement> {
    a.mul(b)
}

/// The four module shapes occurring in the stems, plus the zero module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MackeyName {
    Burnside,
    M0,
    M0Minus,
    M1,
    Zero,
}

impl MackeyName {
    pub fn name(&self) -> &'static str {
        match self {
            MackeyName::Burnside => "A_Q",
            MackeyName::M0 => "M_0",
            MackeyName::M0Minus => "M_0^-",
            MackeyName::M1 => "M_1",
            MackeyName::Zero => "0",
        }
    }
}

/// The stems group in one bidegree: its module shape and the basis classes
/// at each level.
#[derive(Debug, Clone, PartialEq)]
pub struct StemGroupDesc {
    pub k: i64,
    pub n: i64,
    pub functor: MackeyName,
    pub top_basis: Vec<StemBasisClass>,
    pub bottom_basis: Vec<StemBasisClass>,
}

impl StemGroupDesc {
    pub fn print(&self) -> String {
        if self.functor == MackeyName::Zero {
            return "0".to_string();
        }
        let names = |v: &[StemBasisClass]| {
            v.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
        };
        format!(
            "{}: top {{{}}}, bottom {{{}}}",
            self.functor.name(),
            names(&self.top_basis),
            names(&self.bottom_basis)
        )
    }
}

/// The group in homology bidegree (k, n): the Burnside ring on the
/// diagonal origin, orientation modules on the even and odd diagonals,
/// Euler modules on the twisted axis, zero elsewhere.
pub fn stem_group(k: i64, n: i64) -> StemGroupDesc {
    let (functor, top_basis, bottom_basis) = if k == 0 && n == 0 {
        (
            MackeyName::Burnside,
            vec![StemBasisClass::One, StemBasisClass::X],
            vec![StemBasisClass::One],
        )
    } else if k == n && k % 2 == 0 {
        let top = if k > 0 {
            StemBasisClass::U2sPow((k / 2) as u32)
        } else {
            StemBasisClass::XOverU2s((-k / 2) as u32)
        };
        (MackeyName::M0, vec![top], vec![StemBasisClass::UsPow(k)])
    } else if k == n {
        (MackeyName::M0Minus, vec![], vec![StemBasisClass::UsPow(k)])
    } else if k == 0 {
        let top = if n < 0 {
            StemBasisClass::AsPow((-n) as u32)
        } else {
            StemBasisClass::YOverAs(n as u32)
        };
        (MackeyName::M1, vec![top], vec![])
    } else {
        (MackeyName::Zero, vec![], vec![])
    };
    StemGroupDesc { k, n, functor, top_basis, bottom_basis }
}

/// Restriction to the underlying level. The orientation classes restrict
/// to the matching power, the dual ones pick up a factor of 2, the Euler
/// families die.
pub fn res(a: &StemElement) -> Result<StemElement> {
    if a.level() != StemLevel::Top {
        return Err(Error::StemLevelMismatch);
    }
    let mut out = StemElement::zero(StemLevel::Bottom);
    for (cls, c) in a.terms() {
        let image: Vec<(StemBasisClass, Rational)> = match *cls {
            StemBasisClass::One => vec![(StemBasisClass::One, rat_int(1))],
            StemBasisClass::X => vec![(StemBasisClass::One, rat_int(2))],
            StemBasisClass::U2sPow(j) => vec![(StemBasisClass::UsPow(2 * j as i64), rat_int(1))],
            StemBasisClass::XOverU2s(j) => {
                vec![(StemBasisClass::UsPow(-2 * (j as i64)), rat_int(2))]
            }
            StemBasisClass::AsPow(_) | StemBasisClass::YOverAs(_) => vec![],
            StemBasisClass::UsPow(_) => unreachable!("top element"),
        };
        for (img, k) in image {
            out.insert(img, c * k);
        }
    }
    Ok(out)
}

/// Transfer to the equivariant level: even orientation powers go to the
/// matching class (doubled on the positive side), odd ones die.
pub fn tr(a: &StemElement) -> Result<StemElement> {
    if a.level() != StemLevel::Bottom {
        return Err(Error::StemLevelMismatch);
    }
    let mut out = StemElement::zero(StemLevel::Top);
    for (cls, c) in a.terms() {
        let image: Vec<(StemBasisClass, Rational)> = match *cls {
            StemBasisClass::One => vec![(StemBasisClass::X, rat_int(1))],
            StemBasisClass::UsPow(m) if m % 2 == 0 => {
                if m > 0 {
                    vec![(StemBasisClass::U2sPow((m / 2) as u32), rat_int(2))]
                } else {
                    vec![(StemBasisClass::XOverU2s((-m / 2) as u32), rat_int(1))]
                }
            }
            StemBasisClass::UsPow(_) => vec![],
            _ => unreachable!("bottom element"),
        };
        for (img, k) in image {
            out.insert(img, c * k);
        }
    }
    Ok(out)
}

/// The Weyl action: trivial on the top level, sign of the exponent on the
/// bottom orientation powers.
pub fn weyl(a: &StemElement) -> StemElement {
    if a.level() == StemLevel::Top {
        return a.clone();
    }
    let mut out = StemElement::zero(StemLevel::Bottom);
    for (cls, c) in a.terms() {
        let s = match *cls {
            StemBasisClass::UsPow(m) if m % 2 != 0 => rat_int(-1),
            _ => rat_int(1),
        };
        out.insert(*cls, c * s);
    }
    out
}

/// Level-directed structure map: restriction of a top element, transfer of
/// a bottom one.
pub fn res_tr(a: &StemElement) -> StemElement {
    match a.level() {
        StemLevel::Top => res(a).expect("top input"),
        StemLevel::Bottom => tr(a).expect("bottom input"),
    }
}

/// Parse a class name. The four equivariant families, `1`, `x`, and `y`
/// parse at the top level; orientation powers `u_s^m` at the bottom.
pub fn parse_stem(input: &str) -> Result<StemElement> {
    let s = input.trim();
    if s == "y" {
        return Ok(StemElement::y());
    }
    let (body, exp) = match s.split_once('^') {
        Some((b, e)) => (b, Some(e)),
        None => (s, None),
    };
    let unknown = || Error::StemUnknownName { name: input.trim().to_string() };
    let pos_exp = |exp: Option<&str>| -> Result<u32> {
        match exp {
            None => Ok(1),
            Some(e) => {
                let j: u32 = e.parse().map_err(|_| unknown())?;
                if j == 0 {
                    return Err(unknown());
                }
                Ok(j)
            }
        }
    };
    match body {
        "1" if exp.is_none() => Ok(StemElement::one(StemLevel::Top)),
        "x" if exp.is_none() => StemElement::class(StemBasisClass::X),
        "u_2s" => StemElement::class(StemBasisClass::U2sPow(pos_exp(exp)?)),
        "x/u_2s" => StemElement::class(StemBasisClass::XOverU2s(pos_exp(exp)?)),
        "a_s" => StemElement::class(StemBasisClass::AsPow(pos_exp(exp)?)),
        "y/a_s" => StemElement::class(StemBasisClass::YOverAs(pos_exp(exp)?)),
        "u_s" => {
            let m: i64 = match exp {
                None => 1,
                Some(e) => e.parse().map_err(|_| unknown())?,
            };
            if m == 0 {
                Ok(StemElement::one(StemLevel::Bottom))
            } else {
                StemElement::class(StemBasisClass::UsPow(m))
            }
        }
        _ => Err(unknown()),
    }
}

// An element of the circle ring with stems coefficients: terms indexed by
// the weight exponent and the idempotent flag. Coefficients of idempotent
// terms are reduced modulo the transfer ideal, which kills the free-orbit
// class and both orientation families.
#[derive(Debug, Clone, PartialEq)]
struct CircleElem {
    terms: BTreeMap<(u32, bool), StemElement>,
}

fn reduce_transfer(s: &StemElement) -> StemElement {
    let mut out = StemElement::zero(StemLevel::Top);
    for (cls, c) in s.terms() {
        match cls {
            StemBasisClass::X | StemBasisClass::U2sPow(_) | StemBasisClass::XOverU2s(_) => {}
            _ => out.insert(*cls, c.clone()),
        }
    }
    out
}

impl CircleElem {
    fn zero() -> Self {
        CircleElem { terms: BTreeMap::new() }
    }

    fn term(w: u32, u: bool, s: StemElement) -> Self {
        let mut out = CircleElem::zero();
        out.insert(w, u, s);
        out
    }

    fn insert(&mut self, w: u32, u: bool, s: StemElement) {
        use std::collections::btree_map::Entry;
        let s = if u { reduce_transfer(&s) } else { s };
        if s.is_zero() {
            return;
        }
        match self.terms.entry((w, u)) {
            Entry::Vacant(e) => {
                e.insert(s);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&s).expect("homogeneous circle coefficient");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &CircleElem) -> CircleElem {
        let mut out = self.clone();
        for ((w, u), s) in &other.terms {
            out.insert(*w, *u, s.clone());
        }
        out
    }

    fn scale(&self, c: &Rational) -> CircleElem {
        let mut out = CircleElem::zero();
        for ((w, u), s) in &self.terms {
            out.insert(*w, *u, s.scale(c));
        }
        out
    }

    fn sub(&self, other: &CircleElem) -> CircleElem {
        self.add(&other.scale(&rat_int(-1)))
    }

    fn mul(&self, other: &CircleElem) -> Result<CircleElem> {
        let mut out = CircleElem::zero();
        for ((w1, u1), s1) in &self.terms {
            for ((w2, u2), s2) in &other.terms {
                out.insert(w1 + w2, *u1 || *u2, s1.mul(s2)?);
            }
        }
        Ok(out)
    }

    fn scale_stem(&self, s: &StemElement) -> Result<CircleElem> {
        self.mul(&CircleElem::term(0, false, s.clone()))
    }
}

// Write `target` as a rational multiple of `vector`, exactly.
fn solve_ratio(target: &CircleElem, vector: &CircleElem) -> Result<Rational> {
    let ((w, u), pivot) = vector
        .terms
        .iter()
        .next()
        .ok_or_else(|| Error::Internal("cannot solve against a zero vector".into()))?;
    let (cls, c) = pivot.terms().next().expect("stored coefficients are nonzero");
    let k = target.terms.get(&(*w, *u)).map(|s| s.coeff(cls)).unwrap_or_else(|| rat_int(0)) / c;
    if target.sub(&vector.scale(&k)).is_zero() {
        Ok(k)
    } else {
        Err(Error::Internal("target is not a multiple of the solve vector".into()))
    }
}

/// Outcome of the circle comparison: writing the degree-four generator of
/// the two-generator circle presentation as a combination of the
/// weight-and-orientation classes.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleComparison {
    /// Coefficient of the squared-weight orientation term, pinned by the
    /// defining quadratic relation.
    pub lead_coeff: Rational,
    /// Whether the defining relation also pins the linear term.
    pub linear_pinned: bool,
    /// The linear coefficient forced by inverting the generator
    /// correspondence.
    pub linear_for_inverse: Rational,
}

impl CircleComparison {
    pub fn print(&self) -> String {
        format!(
            "b = {}*w^2*u_2s + t*w*a_s^2; the quadratic relation leaves t {}; \
             inverting the generator correspondence forces t = {}",
            self.lead_coeff,
            if self.linear_pinned { "pinned" } else { "free" },
            self.linear_for_inverse
        )
    }
}

/// Solve the circle comparison. The degree-two circle class `c` is
/// `w u_2s + u a_s^2`; the quadratic relation `c^2 = a_s^2 c + u_2s b`
/// determines `b` within the span of `w^2 u_2s` and `w a_s^2` only up to
/// the linear term, which the inverse correspondence then fixes.
pub fn circle_comparison() -> Result<CircleComparison> {
    let one = StemElement::one(StemLevel::Top);
    let u2s = StemElement::class(StemBasisClass::U2sPow(1))?;
    let a2 = StemElement::class(StemBasisClass::AsPow(2))?;
    let x_over = StemElement::class(StemBasisClass::XOverU2s(1))?;
    let y_over2 = StemElement::class(StemBasisClass::YOverAs(2))?;

    let w = CircleElem::term(1, false, one.clone());
    let u_cls = CircleElem::term(0, true, one);
    let c = w.scale_stem(&u2s)?.add(&u_cls.scale_stem(&a2)?);

    // The u-recovery sanity check: c * y/a_s^2 collapses to the idempotent.
    if c.scale_stem(&y_over2)? != u_cls {
        return Err(Error::Internal("circle idempotent fails to round-trip".into()));
    }

    let lhs = c.mul(&c)?.sub(&c.scale_stem(&a2)?);
    let span_lead = CircleElem::term(2, false, u2s.clone());
    let span_linear = CircleElem::term(1, false, a2);
    let against_lead = span_lead.scale_stem(&u2s)?;
    let against_linear = span_linear.scale_stem(&u2s)?;
    let linear_pinned = !against_linear.is_zero();
    let lead_coeff = solve_ratio(&lhs, &against_lead)?;

    // Round-trip side: c * (x/u_2s) / 2 + b * (y/a_s^2) must return w.
    let base = c
        .scale_stem(&x_over)?
        .scale(&rat(1, 2))
        .add(&span_lead.scale(&lead_coeff).scale_stem(&y_over2)?);
    let linear_part = span_linear.scale_stem(&y_over2)?;
    let linear_for_inverse = solve_ratio(&w.sub(&base), &linear_part)?;

    Ok(CircleComparison { lead_coeff, linear_pinned, linear_for_inverse })
}
