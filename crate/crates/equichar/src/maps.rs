//! Ring maps induced by bundle operations: stabilizations, sums, the line
//! tensor, conjugation, and the passages between the complex, quaternionic,
//! and orthogonal families, with verified closed forms and the bounded
//! evidence checker for the doubly stable subring.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::basis::burnside_basis;
use crate::coeff::{rat_int, BurnsideCoeff, CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::gamma::{
    decompose, e_expand, factor_for_dominant, gamma_expand, GenMonomial, GenPoly, NameScheme,
    SCHEME_SO, SCHEME_SP, SCHEME_U,
};
use crate::linalg::RowSpace;
use crate::monomial::Monomial;
use crate::pair::PairPoly;
use crate::poly::QPoly;
use crate::present::{
    family_style, mono_text, poly_text, square_w, torus_realization, Family, GroupId,
};
use crate::subst::Substitution;
use crate::text;

/// The bundle operation inducing a map of characteristic class rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// Add a trivial line; restricts `U(n+1)` classes to rank `n`.
    OplusOne,
    /// Add a sign line; the twisted restriction of `U(n+1)` classes.
    OplusSigma,
    /// Add two sign lines on the orthogonal side: `SO(2n+2)` to `SO(2n)`.
    OplusTwoSigma,
    /// Split a sum of two bundles: `U(n+m)` classes in `U(n) (x) U(m)`.
    WhitneySum,
    /// Tensor two line bundles: `U(1)` classes in `U(1) (x) U(1)`.
    TensorLine,
    /// Complex conjugation of the tautological bundle over `U(n)`.
    Conjugation,
    /// Underlying complex bundle of a quaternionic one: `U(2n)` classes
    /// read in `Sp(n)`.
    ForgetSpToU,
    /// Quaternionification of a complex bundle: `Sp(n)` classes read in
    /// `U(n)`.
    QuatUToSp,
    /// Complexification of a real bundle: `U(2n)` classes read in `SO(2n)`.
    ComplexifySOToU,
    /// Underlying real bundle of a complex one: `SO(2n)` classes read in
    /// `U(n)`.
    ForgetUToSO,
}

/// Every supported map kind, in presentation order.
pub const ALL_MAP_KINDS: [MapKind; 10] = [
    MapKind::OplusOne,
    MapKind::OplusSigma,
    MapKind::OplusTwoSigma,
    MapKind::WhitneySum,
    MapKind::TensorLine,
    MapKind::Conjugation,
    MapKind::ForgetSpToU,
    MapKind::QuatUToSp,
    MapKind::ComplexifySOToU,
    MapKind::ForgetUToSO,
];

impl MapKind {
    /// Command-line tag.
    pub fn tag(&self) -> &'static str {
        match self {
            MapKind::OplusOne => "oplus-one",
            MapKind::OplusSigma => "oplus-sigma",
            MapKind::OplusTwoSigma => "oplus-two-sigma",
            MapKind::WhitneySum => "whitney-sum",
            MapKind::TensorLine => "tensor-line",
            MapKind::Conjugation => "conjugation",
            MapKind::ForgetSpToU => "forget-sp-to-u",
            MapKind::QuatUToSp => "quat-u-to-sp",
            MapKind::ComplexifySOToU => "complexify-so-to-u",
            MapKind::ForgetUToSO => "forget-u-to-so",
        }
    }

    /// Parse a command-line tag.
    pub fn from_tag(tag: &str) -> Option<MapKind> {
        ALL_MAP_KINDS.iter().copied().find(|k| k.tag() == tag)
    }

    /// True when the target is a tensor of two presentations.
    pub fn is_tensor(&self) -> bool {
        matches!(self, MapKind::WhitneySum | MapKind::TensorLine)
    }
}

/// Target of an induced map: one presentation or a tensor of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapTarget {
    Single(GroupId),
    Tensor(GroupId, GroupId),
}

/// Image of one source generator, in canonical decomposed form.
#[derive(Debug, Clone)]
pub enum MapImage {
    Single(GenPoly<BurnsideCoeff>),
    Tensor(TensorGenPoly),
}

/// An induced ring map: each source generator with its image in the target
/// presentation.
#[derive(Debug, Clone)]
pub struct RingMapResult {
    pub kind: MapKind,
    pub source: GroupId,
    pub target: MapTarget,
    pub images: Vec<(String, MapImage)>,
}

impl RingMapResult {
    /// One `generator -> image` line per source generator.
    pub fn print(&self) -> String {
        let lines: Vec<String> = self
            .images
            .iter()
            .map(|(name, img)| format!("{} -> {}", name, image_text(&self.target, img)))
            .collect();
        lines.join("\n")
    }

    /// Machine-readable form of the map.
    pub fn to_json(&self) -> Value {
        let group_json = |g: &GroupId| json!({ "family": g.family().tag(), "rank": g.rank() });
        let target = match &self.target {
            MapTarget::Single(g) => group_json(g),
            MapTarget::Tensor(l, r) => json!({ "left": group_json(l), "right": group_json(r) }),
        };
        let images: Vec<Value> = self
            .images
            .iter()
            .map(|(name, img)| {
                json!({ "generator": name, "polynomial": image_text(&self.target, img) })
            })
            .collect();
        json!({
            "kind": self.kind.tag(),
            "source": group_json(&self.source),
            "target": target,
            "images": images,
        })
    }
}

fn image_text(target: &MapTarget, image: &MapImage) -> String {
    match (target, image) {
        (MapTarget::Single(g), MapImage::Single(p)) => {
            let (scheme, _, _, chi_at) = family_style(g);
            poly_text(p, scheme, chi_at)
        }
        (MapTarget::Tensor(_, _), MapImage::Tensor(t)) => t.print(),
        _ => unreachable!("image shape always matches the target shape"),
    }
}

/// A sum of split tensors of generator monomials with Burnside coefficients,
/// the canonical form for images landing in a tensor of two presentations.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGenPoly {
    left: usize,
    right: usize,
    terms: BTreeMap<(GenMonomial, GenMonomial), BurnsideCoeff>,
}

impl TensorGenPoly {
    pub fn zero(left: usize, right: usize) -> Self {
        TensorGenPoly { left, right, terms: BTreeMap::new() }
    }

    /// Engine ranks of the two factors.
    pub fn ranks(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(GenMonomial, GenMonomial), &BurnsideCoeff)> {
        self.terms.iter()
    }

    /// Add one split tensor, merging with an existing term and dropping
    /// coefficients that cancel.
    pub fn add_term(&mut self, key: (GenMonomial, GenMonomial), c: BurnsideCoeff) {
        if c.is_zero() {
            return;
        }
        let mut merged = self.terms.remove(&key).unwrap_or_else(BurnsideCoeff::zero);
        merged.add_ref(&c);
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    /// Terms in descending order of the factors' formal dominant products.
    pub fn sorted_terms(&self) -> Vec<(&(GenMonomial, GenMonomial), &BurnsideCoeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let ka = (a.0 .0.sort_monomial(), a.0 .1.sort_monomial());
            let kb = (b.0 .0.sort_monomial(), b.0 .1.sort_monomial());
            kb.cmp(&ka).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    /// Expand into the joint torus ring on `left + right` variable blocks.
    pub fn expand_pair(&self) -> Result<PairPoly> {
        let total = self.left + self.right;
        let mut acc = PairPoly::zero(total);
        for ((lm, rm), c) in &self.terms {
            let lq = embed(&lm.expand_q()?, total, 0);
            let rq = embed(&rm.expand_q()?, total, self.left);
            let term = PairPoly::from_q(&lq.mul(&rq)?).scale_burnside(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Render with the given name schemes for the two factors.
    pub fn print_with(&self, ls: &NameScheme, rs: &NameScheme) -> String {
        text::join_terms(self.sorted_terms().into_iter().map(|((lm, rm), c)| {
            let body = format!("{}(x){}", mono_text(lm, ls, None), mono_text(rm, rs, None));
            text::term_body(&body, c)
        }))
    }

    /// Render with the complex-family names on both factors.
    pub fn print(&self) -> String {
        self.print_with(&SCHEME_U, &SCHEME_U)
    }
}

// A monomial has no idempotent content when every key is elementary; only
// those terms carry a transfer component.
fn is_pure(gm: &GenMonomial) -> bool {
    gm.powers().all(|((_, i), _)| i == 0)
}

// Re-index a polynomial into a wider ring, its variable block starting at
// `shift`.
fn embed(p: &QPoly, total: usize, shift: usize) -> QPoly {
    let mut out = QPoly::zero(total);
    for (m, c) in p.terms() {
        let mut w = vec![0u32; total];
        let mut u = vec![false; total];
        for (k, &e) in m.w.iter().enumerate() {
            w[shift + k] = e;
        }
        for (k, &b) in m.u.iter().enumerate() {
            u[shift + k] = b;
        }
        out.add_term(Monomial { w, u }, c.clone());
    }
    out
}

fn split_monomial(m: &Monomial, left: usize) -> (Monomial, Monomial) {
    let lm = Monomial { w: m.w[..left].to_vec(), u: m.u[..left].to_vec() };
    let rm = Monomial { w: m.w[left..].to_vec(), u: m.u[left..].to_vec() };
    (lm, rm)
}

// Greedy decomposition of a polynomial invariant for the product of the two
// block symmetric groups: peel the dominant term, factor each block half,
// subtract, and insist on strict decrease.
fn split_decompose(p: &QPoly, left: usize, right: usize) -> Result<Vec<(GenMonomial, GenMonomial, Rational)>> {
    let mut rem = p.clone();
    let mut out = Vec::new();
    while let Some((m, c)) = rem.dominant_term() {
        let (m, c) = (m.clone(), c.clone());
        let (lm, rm) = split_monomial(&m, left);
        let lg = factor_for_dominant(&lm)?;
        let rg = factor_for_dominant(&rm)?;
        let piece = embed(&lg.expand_q()?, left + right, 0)
            .mul(&embed(&rg.expand_q()?, left + right, left))?
            .scale(&c);
        let next = rem.sub(&piece)?;
        if let Some((m2, _)) = next.dominant_term() {
            if *m2 >= m {
                return Err(Error::Internal("tensor decomposition failed to reduce".into()));
            }
        }
        out.push((lg, rg, c));
        rem = next;
    }
    Ok(out)
}

// Assemble the canonical Burnside-coefficient form of a pair: one component
// supplies the evaluation at zero, the other at two, and keys with
// idempotent content keep only their rational part.
fn decompose_pair(p: &PairPoly) -> Result<GenPoly<BurnsideCoeff>> {
    let (py, px) = p.parts();
    let mut out = GenPoly::zero(p.rank());
    for (gm, q) in decompose(py)?.terms() {
        let c = if is_pure(gm) {
            BurnsideCoeff::from_split(rat_int(0), q.clone())
        } else {
            BurnsideCoeff::from_rational(q.clone())
        };
        out.add_term(gm.clone(), c);
    }
    for (gm, q) in decompose(px)?.terms() {
        if !is_pure(gm) {
            return Err(Error::Internal("idempotent key in a reduced component".into()));
        }
        out.add_term(gm.clone(), BurnsideCoeff::from_split(q.clone(), rat_int(0)));
    }
    Ok(out)
}

// The tensor-target analogue of [`decompose_pair`].
fn decompose_tensor(p: &PairPoly, left: usize, right: usize) -> Result<TensorGenPoly> {
    let (py, px) = p.parts();
    let mut out = TensorGenPoly::zero(left, right);
    for (lg, rg, q) in split_decompose(py, left, right)? {
        let c = if is_pure(&lg) && is_pure(&rg) {
            BurnsideCoeff::from_split(rat_int(0), q)
        } else {
            BurnsideCoeff::from_rational(q)
        };
        out.add_term((lg, rg), c);
    }
    for (lg, rg, q) in split_decompose(px, left, right)? {
        if !is_pure(&lg) || !is_pure(&rg) {
            return Err(Error::Internal("idempotent key in a reduced component".into()));
        }
        out.add_term((lg, rg), BurnsideCoeff::from_split(q, rat_int(0)));
    }
    Ok(out)
}

// Halve every variable weight, undoing the doubled grading of the
// quaternionic and orthogonal realizations.
fn unsquare_q(p: &QPoly) -> Result<QPoly> {
    let mut out = QPoly::zero(p.rank());
    for (m, c) in p.terms() {
        let mut w = m.w.clone();
        for e in &mut w {
            if *e % 2 != 0 {
                return Err(Error::Internal("odd weight in a doubled-grading image".into()));
            }
            *e /= 2;
        }
        out.add_term(Monomial { w, u: m.u.clone() }, c.clone());
    }
    Ok(out)
}

fn unsquare_pair(p: &PairPoly) -> Result<PairPoly> {
    let (py, px) = p.parts();
    PairPoly::from_parts(unsquare_q(py)?, unsquare_q(px)?)
}

// The flag class with the boundary conventions of the closed forms: zero
// past the rank, the idempotent summand of the elementary class at second
// index zero, and the idempotent summand of one at `(0, 0)`.
fn conv_gamma_pair(t: usize, s: usize, i: usize) -> Result<PairPoly> {
    if s + i > t {
        return Ok(PairPoly::zero(t));
    }
    if i == 0 {
        if s == 0 {
            return Ok(PairPoly::y(t));
        }
        return PairPoly::from_parts(e_expand(t, s)?, QPoly::zero(t));
    }
    PairPoly::from_parts(gamma_expand(t, s, i)?, QPoly::zero(t))
}

// The full elementary class, zero past the rank.
fn elem_pair(t: usize, i: usize) -> Result<PairPoly> {
    if i == 0 {
        return Ok(PairPoly::one(t));
    }
    if i > t {
        return Ok(PairPoly::zero(t));
    }
    Ok(PairPoly::from_q(&e_expand(t, i)?))
}

// The degree-zero idempotent sum.
fn idem_pair(t: usize) -> Result<PairPoly> {
    Ok(PairPoly::from_q(&gamma_expand(t, 0, 1)?))
}

/// A substitution applied to the two summands of a pair: the full component
/// keeps the given idempotent images, the reduced component sends every
/// idempotent variable to zero.
struct PairSub {
    full: Substitution<Rational>,
    reduced: Substitution<Rational>,
}

impl PairSub {
    fn new(source: usize, target: usize, w_images: Vec<QPoly>, u_images: Vec<QPoly>) -> Result<Self> {
        let reduced_u = vec![QPoly::zero(target); source];
        let reduced = Substitution::new(source, target, w_images.clone(), reduced_u)?;
        let full = Substitution::new(source, target, w_images, u_images)?;
        Ok(PairSub { full, reduced })
    }

    // Image of the class of a plain polynomial.
    fn apply(&self, p: &QPoly) -> Result<PairPoly> {
        PairPoly::from_parts(self.full.apply(p)?, self.reduced.apply(p)?)
    }

    fn apply_pair(&self, p: &PairPoly) -> Result<PairPoly> {
        let (py, px) = p.parts();
        PairPoly::from_parts(self.full.apply(py)?, self.reduced.apply(px)?)
    }
}

// Forget the last variable block, sending its idempotent to `last_u`.
fn drop_last_sub(target: usize, last_u: QPoly) -> Result<PairSub> {
    let source = target + 1;
    let mut w = Vec::with_capacity(source);
    let mut u = Vec::with_capacity(source);
    for i in 1..=target {
        w.push(QPoly::var_w(target, i)?);
        u.push(QPoly::var_u(target, i)?);
    }
    w.push(QPoly::zero(target));
    u.push(last_u);
    PairSub::new(source, target, w, u)
}

// Fold `2n` variables onto `n`: the second block carries the negated
// weights and the same idempotents.
fn forget_sub(n: usize) -> Result<PairSub> {
    let mut w = Vec::with_capacity(2 * n);
    let mut u = Vec::with_capacity(2 * n);
    for i in 1..=n {
        w.push(QPoly::var_w(n, i)?);
        u.push(QPoly::var_u(n, i)?);
    }
    for i in 1..=n {
        w.push(QPoly::var_w(n, i)?.neg());
        u.push(QPoly::var_u(n, i)?);
    }
    PairSub::new(2 * n, n, w, u)
}

fn identity_sub(n: usize) -> Result<PairSub> {
    let mut w = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for i in 1..=n {
        w.push(QPoly::var_w(n, i)?);
        u.push(QPoly::var_u(n, i)?);
    }
    PairSub::new(n, n, w, u)
}

fn negate_w_sub(n: usize) -> Result<PairSub> {
    let mut w = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for i in 1..=n {
        w.push(QPoly::var_w(n, i)?.neg());
        u.push(QPoly::var_u(n, i)?);
    }
    PairSub::new(n, n, w, u)
}

// The idempotent of a product of two lines: `u1 u2 + (1 - u1)(1 - u2)`.
fn line_u_combo(rank: usize, i: usize, j: usize) -> Result<QPoly> {
    let ui = QPoly::var_u(rank, i)?;
    let uj = QPoly::var_u(rank, j)?;
    let mut out = QPoly::one(rank).sub(&ui)?.sub(&uj)?;
    out = out.add(&ui.mul(&uj)?.scale(&rat_int(2)))?;
    Ok(out)
}

fn line_product_sub() -> Result<PairSub> {
    let w = QPoly::var_w(2, 1)?.add(&QPoly::var_w(2, 2)?)?;
    PairSub::new(1, 2, vec![w], vec![line_u_combo(2, 1, 2)?])
}

fn unsupported(kind: MapKind, rank: usize, reason: &str) -> Error {
    Error::UnsupportedMap { kind: kind.tag().into(), rank, reason: reason.into() }
}

fn require_range(kind: MapKind, n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(unsupported(kind, n, &format!("rank must be between {lo} and {hi}")));
    }
    Ok(())
}

fn plain_map(
    kind: MapKind,
    source: GroupId,
    target: GroupId,
    sub: &PairSub,
    undouble: bool,
) -> Result<RingMapResult> {
    let mut images = Vec::new();
    for (name, p) in torus_realization(&source)? {
        let mut img = sub.apply(&p)?;
        if undouble {
            img = unsquare_pair(&img)?;
        }
        images.push((name, MapImage::Single(decompose_pair(&img)?)));
    }
    Ok(RingMapResult { kind, source, target: MapTarget::Single(target), images })
}

/// Compute the induced ring map for `kind`. The second rank applies only to
/// the two-bundle sum; every other kind takes the single rank parameter
/// described on the variant.
pub fn induced_map(kind: MapKind, n: usize, m: Option<usize>) -> Result<RingMapResult> {
    if kind != MapKind::WhitneySum && m.is_some() {
        return Err(unsupported(kind, n, "a second rank only applies to the two-bundle sum"));
    }
    match kind {
        MapKind::OplusOne | MapKind::OplusSigma => {
            require_range(kind, n, 1, 3)?;
            let source = GroupId::new(Family::U, n + 1)?;
            let target = GroupId::new(Family::U, n)?;
            let last = if kind == MapKind::OplusOne { QPoly::one(n) } else { QPoly::zero(n) };
            plain_map(kind, source, target, &drop_last_sub(n, last)?, false)
        }
        MapKind::OplusTwoSigma => {
            require_range(kind, n, 1, 3)?;
            let source = GroupId::new(Family::SO, 2 * n + 2)?;
            let target = GroupId::new(Family::SO, 2 * n)?;
            plain_map(kind, source, target, &drop_last_sub(n, QPoly::zero(n))?, true)
        }
        MapKind::WhitneySum => {
            let m = m.ok_or_else(|| unsupported(kind, n, "needs the rank of the second factor"))?;
            if n < 1 || m < 1 || n + m > 4 {
                return Err(unsupported(
                    kind,
                    n,
                    "factor ranks must be at least 1 with total at most 4",
                ));
            }
            let source = GroupId::new(Family::U, n + m)?;
            let left = GroupId::new(Family::U, n)?;
            let right = GroupId::new(Family::U, m)?;
            let mut images = Vec::new();
            for (name, p) in torus_realization(&source)? {
                let img = decompose_tensor(&PairPoly::from_q(&p), n, m)?;
                images.push((name, MapImage::Tensor(img)));
            }
            Ok(RingMapResult { kind, source, target: MapTarget::Tensor(left, right), images })
        }
        MapKind::TensorLine => {
            if n != 1 {
                return Err(unsupported(kind, n, "defined for a pair of line bundles"));
            }
            let source = GroupId::new(Family::U, 1)?;
            let factor = GroupId::new(Family::U, 1)?;
            let sub = line_product_sub()?;
            let mut images = Vec::new();
            for (name, p) in torus_realization(&source)? {
                let img = decompose_tensor(&sub.apply(&p)?, 1, 1)?;
                images.push((name, MapImage::Tensor(img)));
            }
            Ok(RingMapResult { kind, source, target: MapTarget::Tensor(factor, factor), images })
        }
        MapKind::Conjugation => {
            require_range(kind, n, 1, 4)?;
            let g = GroupId::new(Family::U, n)?;
            plain_map(kind, g, g, &negate_w_sub(n)?, false)
        }
        MapKind::ForgetSpToU => {
            require_range(kind, n, 1, 2)?;
            let source = GroupId::new(Family::U, 2 * n)?;
            let target = GroupId::new(Family::Sp, n)?;
            plain_map(kind, source, target, &forget_sub(n)?, true)
        }
        MapKind::QuatUToSp => {
            require_range(kind, n, 1, 4)?;
            let source = GroupId::new(Family::Sp, n)?;
            let target = GroupId::new(Family::U, n)?;
            plain_map(kind, source, target, &identity_sub(n)?, false)
        }
        MapKind::ComplexifySOToU => {
            require_range(kind, n, 1, 2)?;
            let source = GroupId::new(Family::U, 2 * n)?;
            let target = GroupId::new(Family::SO, 2 * n)?;
            plain_map(kind, source, target, &forget_sub(n)?, true)
        }
        MapKind::ForgetUToSO => {
            require_range(kind, n, 1, 4)?;
            let source = GroupId::new(Family::SO, 2 * n)?;
            let target = GroupId::new(Family::U, n)?;
            plain_map(kind, source, target, &identity_sub(n)?, false)
        }
    }
}

/// The conjugation map on the complex family at rank `n`.
pub fn conjugation_map(n: usize) -> Result<RingMapResult> {
    induced_map(MapKind::Conjugation, n, None)
}

/// How a computed image compares against its closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormStatus {
    /// The image equals the closed form exactly.
    Exact,
    /// The closed form pins the leading term only, and it matches.
    LeadingTerm,
    Mismatch { expected: String, got: String },
}

/// Comparison of a whole induced map against its closed forms.
#[derive(Debug, Clone)]
pub struct ClosedFormReport {
    pub kind: MapKind,
    pub ranks: (usize, Option<usize>),
    pub entries: Vec<(String, FormStatus)>,
}

impl ClosedFormReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|(_, s)| !matches!(s, FormStatus::Mismatch { .. }))
    }

    pub fn print(&self) -> String {
        let lines: Vec<String> = self
            .entries
            .iter()
            .map(|(name, st)| {
                let tail = match st {
                    FormStatus::Exact => "exact".to_string(),
                    FormStatus::LeadingTerm => "leading term".to_string(),
                    FormStatus::Mismatch { expected, got } => {
                        format!("MISMATCH expected {expected}, got {got}")
                    }
                };
                format!("{name}: {tail}")
            })
            .collect();
        lines.join("\n")
    }
}

// What a closed form pins down for one generator image.
enum Expect {
    Pair(PairPoly),
    Lead(GenMonomial),
    Tensor(TensorGenPoly),
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

fn binomial_int(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1i64;
    for j in 0..k {
        acc = acc * (n - j) as i64 / (j + 1) as i64;
    }
    acc
}

fn pair_of_single(p: &GenPoly<BurnsideCoeff>) -> Result<PairPoly> {
    Ok(PairPoly::from_bpoly(&p.expand()?))
}

fn render_pair(p: &PairPoly, g: &GroupId) -> Result<String> {
    let (scheme, _, _, chi_at) = family_style(g);
    Ok(poly_text(&decompose_pair(p)?, scheme, chi_at))
}

// Closed forms for the two complex stabilizations, source rank `n + 1`.
fn oplus_expected(n: usize, add_trivial: bool) -> Result<Vec<(String, Expect)>> {
    let mut u_img = idem_pair(n)?;
    if add_trivial {
        u_img = u_img.add(&PairPoly::y(n))?;
    }
    let mut out = vec![("u".to_string(), Expect::Pair(u_img))];
    for i in 1..=n + 1 {
        out.push((SCHEME_U.key_name(i, 0), Expect::Pair(elem_pair(n, i)?)));
    }
    for s in 1..=n {
        for j in 1..=(n + 1 - s) {
            let mut want = conv_gamma_pair(n, s, j)?;
            if add_trivial {
                want = want.add(&conv_gamma_pair(n, s, j - 1)?)?;
            }
            out.push((SCHEME_U.key_name(s, j), Expect::Pair(want)));
        }
    }
    Ok(out)
}

// Closed forms for the orthogonal stabilization, source matrix size
// `2n + 2`: every class restricts, the Euler class dies.
fn oplus_two_sigma_expected(n: usize) -> Result<Vec<(String, Expect)>> {
    let mut out = vec![("u".to_string(), Expect::Pair(idem_pair(n)?))];
    for i in 1..=n {
        out.push((SCHEME_SO.key_name(i, 0), Expect::Pair(elem_pair(n, i)?)));
    }
    for s in 1..=n {
        for j in 1..=(n + 1 - s) {
            out.push((SCHEME_SO.key_name(s, j), Expect::Pair(conv_gamma_pair(n, s, j)?)));
        }
    }
    out.push(("chi".to_string(), Expect::Pair(PairPoly::zero(n))));
    Ok(out)
}

fn conjugation_expected(n: usize) -> Result<Vec<(String, Expect)>> {
    let mut out = vec![("u".to_string(), Expect::Pair(idem_pair(n)?))];
    for i in 1..=n {
        out.push((SCHEME_U.key_name(i, 0), Expect::Pair(elem_pair(n, i)?.scale(&sign(i)))));
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            out.push((
                SCHEME_U.key_name(s, j),
                Expect::Pair(conv_gamma_pair(n, s, j)?.scale(&sign(s))),
            ));
        }
    }
    Ok(out)
}

// Closed forms for the two folding maps out of the rank-`2n` complex ring:
// the idempotent doubles, odd classes die, and even classes collect into
// the half-rank presentation with alternating signs.
fn forget_expected(n: usize) -> Result<Vec<(String, Expect)>> {
    let mut out = vec![("u".to_string(), Expect::Pair(idem_pair(n)?.scale(&rat_int(2))))];
    for i in 1..=2 * n {
        let want = if i % 2 == 1 {
            PairPoly::zero(n)
        } else {
            elem_pair(n, i / 2)?.scale(&sign(i / 2))
        };
        out.push((SCHEME_U.key_name(i, 0), Expect::Pair(want)));
    }
    for s in 1..2 * n {
        for j in 1..=(2 * n - s) {
            let want = if s % 2 == 1 {
                PairPoly::zero(n)
            } else {
                let half = s / 2;
                let mut acc = PairPoly::zero(n);
                for t in j.div_ceil(2)..=j {
                    let coeff = rat_int(binomial_int(t, j - t) * (1i64 << (2 * t - j)));
                    acc = acc.add(&conv_gamma_pair(n, half, t)?.scale(&coeff))?;
                }
                acc.scale(&sign(half))
            };
            out.push((SCHEME_U.key_name(s, j), Expect::Pair(want)));
        }
    }
    Ok(out)
}

// Closed forms for the identity-torus passages out of the quaternionic and
// orthogonal presentations: elementary classes expand as signed convolution
// squares, the first flag row is exact, higher rows pin their leading term.
fn quat_like_expected(
    scheme: &NameScheme,
    n: usize,
    e_top: usize,
    with_chi: bool,
) -> Result<Vec<(String, Expect)>> {
    let mut out = vec![("u".to_string(), Expect::Pair(idem_pair(n)?))];
    for i in 1..=e_top {
        let mut acc = PairPoly::zero(n);
        for a in 0..=2 * i {
            let b = 2 * i - a;
            let term = elem_pair(n, a)?.mul(&elem_pair(n, b)?)?;
            acc = acc.add(&term.scale(&sign(a + i)))?;
        }
        out.push((scheme.key_name(i, 0), Expect::Pair(acc)));
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            let expect = if s == 1 {
                let mut acc = elem_pair(n, 1)?.mul(&conv_gamma_pair(n, 1, j)?)?;
                acc = acc.sub(&idem_pair(n)?.mul(&conv_gamma_pair(n, 2, j - 1)?)?)?;
                acc = acc.add(&conv_gamma_pair(n, 2, j)?.scale(&rat_int(j as i64 - 2)))?;
                acc = acc.add(&conv_gamma_pair(n, 2, j - 1)?.scale(&rat_int(j as i64 - 1)))?;
                Expect::Pair(acc)
            } else {
                Expect::Lead(GenMonomial::from_powers(n, [((s, 0), 1), ((s, j), 1)])?)
            };
            out.push((scheme.key_name(s, j), expect));
        }
    }
    if with_chi {
        out.push(("chi".to_string(), Expect::Pair(elem_pair(n, n)?)));
    }
    Ok(out)
}

// A generator key as a monomial of the given rank, `None` past the rank.
fn tensor_key(rank: usize, s: usize, i: usize) -> Result<Option<GenMonomial>> {
    if s == 0 && i == 0 {
        return Ok(Some(GenMonomial::one(rank)));
    }
    if s + i > rank {
        return Ok(None);
    }
    GenMonomial::generator(rank, s, i).map(Some)
}

// Closed forms for the two-bundle sum: every generator is grouplike for the
// evident convolution, with out-of-rank halves dropped.
fn whitney_expected(n: usize, m: usize) -> Result<Vec<(String, Expect)>> {
    let mut out = Vec::new();
    let mut tu = TensorGenPoly::zero(n, m);
    tu.add_term(
        (GenMonomial::generator(n, 0, 1)?, GenMonomial::one(m)),
        BurnsideCoeff::one(),
    );
    tu.add_term(
        (GenMonomial::one(n), GenMonomial::generator(m, 0, 1)?),
        BurnsideCoeff::one(),
    );
    out.push(("u".to_string(), Expect::Tensor(tu)));
    for i in 1..=n + m {
        let mut t = TensorGenPoly::zero(n, m);
        for a in 0..=i {
            if let (Some(lg), Some(rg)) = (tensor_key(n, a, 0)?, tensor_key(m, i - a, 0)?) {
                t.add_term((lg, rg), BurnsideCoeff::one());
            }
        }
        out.push((SCHEME_U.key_name(i, 0), Expect::Tensor(t)));
    }
    for s in 1..n + m {
        for j in 1..=(n + m - s) {
            let mut t = TensorGenPoly::zero(n, m);
            for s1 in 0..=s {
                for j1 in 0..=j {
                    if let (Some(lg), Some(rg)) =
                        (tensor_key(n, s1, j1)?, tensor_key(m, s - s1, j - j1)?)
                    {
                        t.add_term((lg, rg), BurnsideCoeff::one());
                    }
                }
            }
            out.push((SCHEME_U.key_name(s, j), Expect::Tensor(t)));
        }
    }
    Ok(out)
}

fn tensor_line_expected() -> Result<Vec<(String, Expect)>> {
    let one = GenMonomial::one(1);
    let ug = GenMonomial::generator(1, 0, 1)?;
    let e1 = GenMonomial::generator(1, 1, 0)?;
    let mut tu = TensorGenPoly::zero(1, 1);
    tu.add_term((one.clone(), one.clone()), BurnsideCoeff::y());
    tu.add_term((ug.clone(), one.clone()), BurnsideCoeff::from_rational(rat_int(-1)));
    tu.add_term((one.clone(), ug.clone()), BurnsideCoeff::from_rational(rat_int(-1)));
    tu.add_term((ug.clone(), ug), BurnsideCoeff::from_rational(rat_int(2)));
    let mut te = TensorGenPoly::zero(1, 1);
    te.add_term((e1.clone(), one.clone()), BurnsideCoeff::one());
    te.add_term((one, e1), BurnsideCoeff::one());
    Ok(vec![("u".to_string(), Expect::Tensor(tu)), ("e1".to_string(), Expect::Tensor(te))])
}

fn expected_forms(kind: MapKind, n: usize, m: Option<usize>) -> Result<Vec<(String, Expect)>> {
    match kind {
        MapKind::OplusOne => oplus_expected(n, true),
        MapKind::OplusSigma => oplus_expected(n, false),
        MapKind::OplusTwoSigma => oplus_two_sigma_expected(n),
        MapKind::WhitneySum => {
            let m = m.ok_or_else(|| unsupported(kind, n, "needs the rank of the second factor"))?;
            whitney_expected(n, m)
        }
        MapKind::TensorLine => tensor_line_expected(),
        MapKind::Conjugation => conjugation_expected(n),
        MapKind::ForgetSpToU | MapKind::ComplexifySOToU => forget_expected(n),
        MapKind::QuatUToSp => quat_like_expected(&SCHEME_SP, n, n, false),
        MapKind::ForgetUToSO => quat_like_expected(&SCHEME_SO, n, n - 1, true),
    }
}

/// Compare the computed induced map against its closed forms and report the
/// match status per generator. Rank bounds error; differences report.
pub fn verify_closed_form(kind: MapKind, n: usize, m: Option<usize>) -> Result<ClosedFormReport> {
    let map = induced_map(kind, n, m)?;
    let expected = expected_forms(kind, n, m)?;
    if expected.len() != map.images.len() {
        return Err(Error::Internal("closed-form table size mismatch".into()));
    }
    let mut entries = Vec::new();
    for ((name, image), (want_name, want)) in map.images.iter().zip(&expected) {
        if name != want_name {
            return Err(Error::Internal(format!("generator order drift: {name} vs {want_name}")));
        }
        let status = match (want, image) {
            (Expect::Pair(wp), MapImage::Single(p)) => {
                let got = pair_of_single(p)?;
                if got == *wp {
                    FormStatus::Exact
                } else {
                    let g = match &map.target {
                        MapTarget::Single(g) => g,
                        MapTarget::Tensor(_, _) => unreachable!("pair form targets one ring"),
                    };
                    FormStatus::Mismatch {
                        expected: render_pair(wp, g)?,
                        got: render_pair(&got, g)?,
                    }
                }
            }
            (Expect::Lead(wgm), MapImage::Single(p)) => {
                let (scheme, _, _, chi_at) = match &map.target {
                    MapTarget::Single(g) => family_style(g),
                    MapTarget::Tensor(_, _) => unreachable!("leading form targets one ring"),
                };
                match p.sorted_terms().into_iter().next() {
                    Some((gm, c)) if gm == wgm && *c == BurnsideCoeff::one() => {
                        FormStatus::LeadingTerm
                    }
                    _ => FormStatus::Mismatch {
                        expected: format!("leading term {}", mono_text(wgm, scheme, chi_at)),
                        got: poly_text(p, scheme, chi_at),
                    },
                }
            }
            (Expect::Tensor(wt), MapImage::Tensor(t)) => {
                if t == wt {
                    FormStatus::Exact
                } else {
                    FormStatus::Mismatch { expected: wt.print(), got: t.print() }
                }
            }
            _ => return Err(Error::Internal("closed-form shape mismatch".into())),
        };
        entries.push((name.clone(), status));
    }
    Ok(ClosedFormReport { kind, ranks: (n, m), entries })
}

/// The classes fixed by both stabilizations in the unstable range: the key
/// polynomials `e_i u - gamma_{i,1}` for `i` below the rank, in generator
/// form.
pub fn stable_classes(n: usize) -> Result<Vec<GenPoly<Rational>>> {
    if n < 2 {
        return Err(Error::UnsupportedMap {
            kind: "stable-classes".into(),
            rank: n,
            reason: "the stable range needs rank at least 2".into(),
        });
    }
    let mut out = Vec::new();
    for i in 1..n {
        let mut p = GenPoly::zero(n);
        p.add_term(GenMonomial::from_powers(n, [((i, 0), 1), ((0, 1), 1)])?, rat_int(1));
        p.add_term(GenMonomial::generator(n, i, 1)?, rat_int(-1));
        out.push(p);
    }
    Ok(out)
}

// The expansion of the stable class at the given rank, with out-of-range
// pieces dropped.
fn stable_pair(t: usize, i: usize) -> Result<PairPoly> {
    if i > t {
        return Ok(PairPoly::zero(t));
    }
    let mut p = e_expand(t, i)?.mul(&gamma_expand(t, 0, 1)?)?;
    if i + 1 <= t {
        p = p.sub(&gamma_expand(t, i, 1)?)?;
    }
    PairPoly::from_parts(p, QPoly::zero(t))
}

/// Check that every stable class restricts to the stable class one rank
/// down under both stabilizations, in the plain and in the doubled-weight
/// reading, for all source ranks from 2 through `n`.
pub fn stable_classes_fixed(n: usize) -> Result<bool> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedMap {
            kind: "stability".into(),
            rank: n,
            reason: "checked for ranks 2 through 4".into(),
        });
    }
    for r in 2..=n {
        let t = r - 1;
        let add_trivial = drop_last_sub(t, QPoly::one(t))?;
        let add_sign = drop_last_sub(t, QPoly::zero(t))?;
        for i in 1..r {
            let src = e_expand(r, i)?
                .mul(&gamma_expand(r, 0, 1)?)?
                .sub(&gamma_expand(r, i, 1)?)?;
            let want = stable_pair(t, i)?;
            let want_doubled = {
                let (py, px) = want.parts();
                PairPoly::from_parts(square_w(py), square_w(px))?
            };
            for sub in [&add_trivial, &add_sign] {
                if sub.apply(&src)? != want {
                    return Ok(false);
                }
                if sub.apply(&square_w(&src))? != want_doubled {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Check the stable effect of the quaternionic folding map: the even stable
/// class at index `2s` lands on twice the signed half-rank stable class and
/// the odd ones die.
pub fn stable_forget_correspondence(n: usize) -> Result<bool> {
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedMap {
            kind: "stability".into(),
            rank: n,
            reason: "checked for ranks 1 and 2".into(),
        });
    }
    let fold = forget_sub(n)?;
    for i in 1..2 * n {
        let src = e_expand(2 * n, i)?
            .mul(&gamma_expand(2 * n, 0, 1)?)?
            .sub(&gamma_expand(2 * n, i, 1)?)?;
        let img = unsquare_pair(&fold.apply(&src)?)?;
        let want = if i % 2 == 1 {
            PairPoly::zero(n)
        } else {
            let s = i / 2;
            stable_pair(n, s)?.scale(&(sign(s) * rat_int(2)))
        };
        if img != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension evidence for polynomial generation of the doubly stable
/// subring in one degree: the subspace with equal images under the two
/// stabilizations versus the span of products of elementary and stable
/// classes. Reports numbers; asserts nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureEvidence {
    pub rank: usize,
    pub degree: usize,
    pub stable_dim: usize,
    pub generated_dim: usize,
    pub contained: bool,
}

impl ConjectureEvidence {
    /// True when the two dimensions agree.
    pub fn agrees(&self) -> bool {
        self.stable_dim == self.generated_dim
    }
}

fn exponent_lists(degs: &[usize], target: usize) -> Vec<Vec<u32>> {
    fn go(degs: &[usize], target: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match degs.split_first() {
            None => {
                if target == 0 {
                    out.push(acc.clone());
                }
            }
            Some((&d, rest)) => {
                for k in 0..=(target / d) as u32 {
                    acc.push(k);
                    go(rest, target - (k as usize) * d, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(degs, target, &mut Vec::new(), &mut out);
    out
}

/// Compute [`ConjectureEvidence`] at the given rank and degree.
pub fn conjecture_evidence(rank: usize, degree: usize) -> Result<ConjectureEvidence> {
    if !(2..=4).contains(&rank) || degree > 6 {
        return Err(Error::UnsupportedMap {
            kind: "stability-evidence".into(),
            rank,
            reason: "checked for ranks 2 through 4 and degrees up to 6".into(),
        });
    }
    let t = rank - 1;
    let add_trivial = drop_last_sub(t, QPoly::one(t))?;
    let add_sign = drop_last_sub(t, QPoly::zero(t))?;
    let difference = |p: &PairPoly| -> Result<PairPoly> {
        add_trivial.apply_pair(p)?.sub(&add_sign.apply_pair(p)?)
    };
    let rows = |p: &PairPoly| -> Vec<((u8, Monomial), Rational)> {
        let (py, px) = p.parts();
        let mut v: Vec<_> = py.terms().map(|(m, c)| ((0u8, m.clone()), c.clone())).collect();
        v.extend(px.terms().map(|(m, c)| ((1u8, m.clone()), c.clone())));
        v
    };
    // The transfer companion of a class with no idempotent content.
    let companion = |p: &PairPoly| -> Result<PairPoly> {
        let (_, px) = p.parts();
        PairPoly::from_parts(QPoly::zero(rank), px.scale(&rat_int(2)))
    };
    let mut vectors = Vec::new();
    for gm in burnside_basis(rank, degree) {
        let cls = PairPoly::from_q(&gm.expand_q()?);
        if is_pure(&gm) {
            vectors.push(companion(&cls)?);
        }
        vectors.push(cls);
    }
    let mut image = RowSpace::new();
    for v in &vectors {
        image.insert(rows(&difference(v)?));
    }
    let stable_dim = vectors.len() - image.rank();

    // Products of the elementary and stable classes in this degree.
    let mut factors: Vec<(usize, bool, PairPoly)> = Vec::new();
    for i in 1..=rank {
        factors.push((i, true, PairPoly::from_q(&e_expand(rank, i)?)));
    }
    for (idx, c) in stable_classes(rank)?.iter().enumerate() {
        factors.push((idx + 1, false, PairPoly::from_q(&c.expand()?)));
    }
    let degs: Vec<usize> = factors.iter().map(|(d, _, _)| *d).collect();
    let mut span = RowSpace::new();
    let mut generated_dim = 0;
    let mut contained = true;
    for exps in exponent_lists(&degs, degree) {
        let mut prod = PairPoly::one(rank);
        let mut pure = true;
        for (k, (_, elementary, cls)) in exps.iter().zip(&factors) {
            if *k > 0 {
                prod = prod.mul(&cls.pow(*k))?;
                pure &= *elementary;
            }
        }
        if !difference(&prod)?.is_zero() {
            contained = false;
        }
        if span.insert(rows(&prod)) {
            generated_dim += 1;
        }
        if pure && span.insert(rows(&companion(&prod)?)) {
            generated_dim += 1;
        }
    }
    Ok(ConjectureEvidence { rank, degree, stable_dim, generated_dim, contained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::present::s_relation_list;

    fn single(img: &MapImage) -> &GenPoly<BurnsideCoeff> {
        match img {
            MapImage::Single(p) => p,
            MapImage::Tensor(_) => panic!("expected a single-ring image"),
        }
    }

    fn tensor(img: &MapImage) -> &TensorGenPoly {
        match img {
            MapImage::Tensor(t) => t,
            MapImage::Single(_) => panic!("expected a tensor image"),
        }
    }

    fn image_of<'a>(map: &'a RingMapResult, name: &str) -> &'a MapImage {
        &map.images.iter().find(|(n2, _)| n2 == name).expect("generator present").1
    }

    fn printed(map: &RingMapResult, name: &str) -> String {
        image_text(&map.target, image_of(map, name))
    }

    fn image_pair(img: &MapImage) -> PairPoly {
        match img {
            MapImage::Single(p) => pair_of_single(p).expect("expandable image"),
            MapImage::Tensor(t) => t.expand_pair().expect("expandable tensor image"),
        }
    }

    fn target_rank(t: &MapTarget) -> usize {
        match t {
            MapTarget::Single(g) => g.engine_rank(),
            MapTarget::Tensor(l, r) => l.engine_rank() + r.engine_rank(),
        }
    }

    // Source keys in presentation order paired with image pairs; the even
    // orthogonal Euler class enters squared as the top elementary key.
    fn key_images(map: &RingMapResult) -> BTreeMap<(usize, usize), PairPoly> {
        let engine = map.source.engine_rank();
        let (_, _, _, chi_at) = family_style(&map.source);
        let e_top = if chi_at.is_some() { engine - 1 } else { engine };
        let mut keys = vec![(0, 1)];
        for i in 1..=e_top {
            keys.push((i, 0));
        }
        for s in 1..engine {
            for j in 1..=(engine - s) {
                keys.push((s, j));
            }
        }
        let mut out = BTreeMap::new();
        for (idx, (name, img)) in map.images.iter().enumerate() {
            let pair = image_pair(img);
            if idx < keys.len() {
                out.insert(keys[idx], pair);
            } else {
                assert_eq!(name, "chi");
                out.insert((engine, 0), pair.pow(2));
            }
        }
        out
    }

    fn eval_monomial(
        gm: &GenMonomial,
        imgs: &BTreeMap<(usize, usize), PairPoly>,
        rank: usize,
    ) -> PairPoly {
        let mut acc = PairPoly::one(rank);
        for ((s, i), k) in gm.powers() {
            let base = imgs.get(&(s, i)).expect("image for every source key");
            acc = acc.mul(&base.pow(k)).expect("image product");
        }
        acc
    }

    fn eval_poly(
        p: &GenPoly<Rational>,
        imgs: &BTreeMap<(usize, usize), PairPoly>,
        rank: usize,
    ) -> PairPoly {
        let mut acc = PairPoly::zero(rank);
        for (gm, c) in p.terms() {
            acc = acc.add(&eval_monomial(gm, imgs, rank).scale(c)).expect("image sum");
        }
        acc
    }

    fn all_exact(report: &ClosedFormReport) {
        for (name, st) in &report.entries {
            assert_eq!(
                *st,
                FormStatus::Exact,
                "{} at {:?}: {}",
                name,
                report.ranks,
                report.print()
            );
        }
    }

    #[test]
    fn kind_tags_round_trip() {
        for kind in ALL_MAP_KINDS {
            assert_eq!(MapKind::from_tag(kind.tag()), Some(kind));
        }
        assert_eq!(MapKind::from_tag("nope"), None);
        assert!(MapKind::WhitneySum.is_tensor());
        assert!(!MapKind::Conjugation.is_tensor());
    }

    #[test]
    fn rank_bounds_are_enforced() {
        let cases = [
            induced_map(MapKind::OplusOne, 4, None),
            induced_map(MapKind::OplusTwoSigma, 4, None),
            induced_map(MapKind::TensorLine, 2, None),
            induced_map(MapKind::ForgetSpToU, 3, None),
            induced_map(MapKind::ComplexifySOToU, 0, None),
            induced_map(MapKind::WhitneySum, 1, None),
            induced_map(MapKind::WhitneySum, 3, Some(2)),
            induced_map(MapKind::OplusOne, 1, Some(1)),
        ];
        for case in cases {
            assert!(matches!(case, Err(Error::UnsupportedMap { .. })));
        }
    }

    #[test]
    fn add_line_collapses_one_variable() {
        let map = induced_map(MapKind::OplusOne, 1, None).unwrap();
        assert_eq!(map.source.name(), "U(2)");
        assert_eq!(map.target, MapTarget::Single(GroupId::new(Family::U, 1).unwrap()));
        assert_eq!(printed(&map, "u"), "u + (1 - 1/2 x)");
        assert_eq!(printed(&map, "e1"), "e1");
        assert_eq!(printed(&map, "e2"), "0");
        assert_eq!(printed(&map, "gamma1_1"), "(1 - 1/2 x)*e1");

        let twisted = induced_map(MapKind::OplusSigma, 1, None).unwrap();
        assert_eq!(printed(&twisted, "u"), "u");
        assert_eq!(printed(&twisted, "e1"), "e1");
        assert_eq!(printed(&twisted, "gamma1_1"), "0");
    }

    #[test]
    fn stabilization_closed_forms() {
        for n in 1..=3 {
            all_exact(&verify_closed_form(MapKind::OplusOne, n, None).unwrap());
            all_exact(&verify_closed_form(MapKind::OplusSigma, n, None).unwrap());
        }
        for n in 1..=2 {
            all_exact(&verify_closed_form(MapKind::OplusTwoSigma, n, None).unwrap());
        }
    }

    #[test]
    fn conjugation_closed_form_and_involution() {
        for n in 1..=4 {
            all_exact(&verify_closed_form(MapKind::Conjugation, n, None).unwrap());
        }
        let sub = negate_w_sub(3).unwrap();
        let class = gamma_expand(3, 2, 1).unwrap();
        let twice = sub.apply_pair(&sub.apply(&class).unwrap()).unwrap();
        assert_eq!(twice, PairPoly::from_q(&class));
    }

    #[test]
    fn sum_closed_forms() {
        all_exact(&verify_closed_form(MapKind::WhitneySum, 1, Some(1)).unwrap());
        all_exact(&verify_closed_form(MapKind::WhitneySum, 2, Some(1)).unwrap());
        let map = induced_map(MapKind::WhitneySum, 2, Some(1)).unwrap();
        assert_eq!(printed(&map, "gamma1_1"), "gamma1_1(x)1 + e1(x)u + u(x)e1");
        assert_eq!(printed(&map, "e3"), "e2(x)e1");

        // Swapping the factor ranks mirrors every term.
        let left = induced_map(MapKind::WhitneySum, 1, Some(2)).unwrap();
        let right = induced_map(MapKind::WhitneySum, 2, Some(1)).unwrap();
        for ((name_l, img_l), (name_r, img_r)) in left.images.iter().zip(&right.images) {
            assert_eq!(name_l, name_r);
            let tl = tensor(img_l);
            let tr = tensor(img_r);
            let mut mirrored = TensorGenPoly::zero(1, 2);
            for ((lm, rm), c) in tr.terms() {
                mirrored.add_term((rm.clone(), lm.clone()), c.clone());
            }
            assert_eq!(*tl, mirrored, "factor swap at {name_l}");
        }
    }

    #[test]
    fn line_tensor_closed_form() {
        all_exact(&verify_closed_form(MapKind::TensorLine, 1, None).unwrap());
        let map = induced_map(MapKind::TensorLine, 1, None).unwrap();
        assert_eq!(printed(&map, "u"), "2*u(x)u - u(x)1 - 1(x)u + (1 - 1/2 x)*1(x)1");
        assert_eq!(printed(&map, "e1"), "e1(x)1 + 1(x)e1");

        // The idempotent image squares to itself and the transfer kills it.
        let u_img = tensor(image_of(&map, "u")).expand_pair().unwrap();
        assert_eq!(u_img.mul(&u_img).unwrap(), u_img);
        assert!(u_img.scale_burnside(&BurnsideCoeff::x()).is_zero());
    }

    #[test]
    fn forgetful_closed_forms_and_pins() {
        for n in 1..=2 {
            all_exact(&verify_closed_form(MapKind::ForgetSpToU, n, None).unwrap());
            all_exact(&verify_closed_form(MapKind::ComplexifySOToU, n, None).unwrap());
        }
        let f1 = induced_map(MapKind::ForgetSpToU, 1, None).unwrap();
        assert_eq!(printed(&f1, "u"), "2*u");
        assert_eq!(printed(&f1, "e1"), "0");
        assert_eq!(printed(&f1, "e2"), "-k1");
        let f2 = induced_map(MapKind::ForgetSpToU, 2, None).unwrap();
        assert_eq!(printed(&f2, "gamma1_1"), "0");
        assert_eq!(printed(&f2, "gamma2_1"), "-2*kappa1_1");
        assert_eq!(printed(&f2, "gamma2_2"), "-kappa1_1");
        let c1 = induced_map(MapKind::ComplexifySOToU, 1, None).unwrap();
        assert_eq!(printed(&c1, "u"), "2*u");
        assert_eq!(printed(&c1, "e2"), "-chi^2");
        let c2 = induced_map(MapKind::ComplexifySOToU, 2, None).unwrap();
        assert_eq!(printed(&c2, "gamma2_1"), "-2*pi1_1");
        assert_eq!(printed(&c2, "e4"), "chi^2");
    }

    #[test]
    fn quaternionic_closed_forms() {
        for n in 1..=3 {
            let report = verify_closed_form(MapKind::QuatUToSp, n, None).unwrap();
            assert!(report.all_match(), "{}", report.print());
            for (name, st) in &report.entries {
                if name.starts_with("kappa") && !name.starts_with("kappa1") {
                    assert_eq!(*st, FormStatus::LeadingTerm, "{name}");
                } else {
                    assert_eq!(*st, FormStatus::Exact, "{name}");
                }
            }
        }
        for n in 1..=2 {
            all_exact(&verify_closed_form(MapKind::ForgetUToSO, n, None).unwrap());
        }
        let quat = induced_map(MapKind::QuatUToSp, 2, None).unwrap();
        assert_eq!(printed(&quat, "k1"), "e1^2 - 2*e2");
        let real = induced_map(MapKind::ForgetUToSO, 2, None).unwrap();
        assert_eq!(printed(&real, "chi"), "e2");

        // The flag rows of the two identity-torus maps agree entirely.
        let quat3 = induced_map(MapKind::QuatUToSp, 3, None).unwrap();
        let real3 = induced_map(MapKind::ForgetUToSO, 3, None).unwrap();
        for (s, j) in [(1, 1), (1, 2), (2, 1)] {
            let k = single(image_of(&quat3, &format!("kappa{s}_{j}")));
            let p = single(image_of(&real3, &format!("pi{s}_{j}")));
            assert_eq!(k.sorted_terms(), p.sorted_terms(), "flag ({s},{j})");
        }
    }

    #[test]
    fn relation_preservation() {
        let cases = [
            induced_map(MapKind::OplusOne, 2, None).unwrap(),
            induced_map(MapKind::OplusSigma, 2, None).unwrap(),
            induced_map(MapKind::OplusTwoSigma, 2, None).unwrap(),
            induced_map(MapKind::Conjugation, 3, None).unwrap(),
            induced_map(MapKind::ForgetSpToU, 1, None).unwrap(),
            induced_map(MapKind::ForgetSpToU, 2, None).unwrap(),
            induced_map(MapKind::ComplexifySOToU, 1, None).unwrap(),
            induced_map(MapKind::QuatUToSp, 3, None).unwrap(),
            induced_map(MapKind::ForgetUToSO, 3, None).unwrap(),
            induced_map(MapKind::WhitneySum, 2, Some(1)).unwrap(),
            induced_map(MapKind::TensorLine, 1, None).unwrap(),
        ];
        for map in cases {
            let engine = map.source.engine_rank();
            let imgs = key_images(&map);
            let rank = target_rank(&map.target);
            for rel in s_relation_list(engine).unwrap() {
                let lhs = eval_monomial(&rel.lhs, &imgs, rank);
                let rhs = eval_poly(&rel.rhs, &imgs, rank);
                assert_eq!(
                    lhs,
                    rhs,
                    "relation broken under {} from {}",
                    map.kind.tag(),
                    map.source.name()
                );
            }
        }
    }

    #[test]
    fn forgetful_composites_agree() {
        // Reading a rank-2n complex class through the quaternionic (or
        // orthogonal) presentation and then back in half-rank complex
        // classes equals the direct variable folding.
        for n in 1..=2 {
            let fold = forget_sub(n).unwrap();
            for (through, back) in [
                (MapKind::ForgetSpToU, MapKind::QuatUToSp),
                (MapKind::ComplexifySOToU, MapKind::ForgetUToSO),
            ] {
                let first = induced_map(through, n, None).unwrap();
                let second = induced_map(back, n, None).unwrap();
                let imgs = key_images(&second);
                let source = GroupId::new(Family::U, 2 * n).unwrap();
                for ((name, img), (rname, real)) in
                    first.images.iter().zip(torus_realization(&source).unwrap())
                {
                    assert_eq!(*name, rname);
                    let direct = fold.apply(&real).unwrap();
                    let mut composite = PairPoly::zero(n);
                    for (gm, c) in single(img).terms() {
                        let term = eval_monomial(gm, &imgs, n).scale_burnside(c);
                        composite = composite.add(&term).unwrap();
                    }
                    assert_eq!(composite, direct, "{} via {}", name, back.tag());
                }
            }
        }
    }

    // Evaluate a rank-one generator monomial at the added line: weights die,
    // and the idempotent takes the given value on the full component.
    fn ev_rank1(r: &GenMonomial, u_val: &Rational) -> BurnsideCoeff {
        let q = r.expand_q().expect("rank-one expansion");
        let mut at_zero = rat_int(0);
        let mut at_two = rat_int(0);
        for (m, c) in q.terms() {
            if m.w[0] != 0 {
                continue;
            }
            if m.u[0] {
                at_zero += c * u_val;
            } else {
                at_zero += c;
                at_two += c;
            }
        }
        BurnsideCoeff::from_split(at_two, at_zero)
    }

    #[test]
    fn sum_counit_recovers_stabilizations() {
        for n in 1..=2 {
            let whitney = induced_map(MapKind::WhitneySum, n, Some(1)).unwrap();
            for (u_val, kind) in [(rat_int(1), MapKind::OplusOne), (rat_int(0), MapKind::OplusSigma)]
            {
                let plain = induced_map(kind, n, None).unwrap();
                for ((wname, wimg), (pname, pimg)) in whitney.images.iter().zip(&plain.images) {
                    assert_eq!(wname, pname);
                    let mut collapsed = GenPoly::zero(n);
                    for ((l, r), c) in tensor(wimg).terms() {
                        let mut merged = c.mul_ref(&ev_rank1(r, &u_val));
                        if !is_pure(l) {
                            merged = BurnsideCoeff::from_rational(merged.q.clone());
                        }
                        collapsed.add_term(l.clone(), merged);
                    }
                    let want = single(pimg);
                    assert_eq!(
                        collapsed.sorted_terms(),
                        want.sorted_terms(),
                        "{} collapsed at {}",
                        wname,
                        kind.tag()
                    );
                }
            }
        }
    }

    #[test]
    fn sum_coassociativity() {
        // Either order of splitting three line bundles flattens to the same
        // triple tensor form.
        type Triple = BTreeMap<(GenMonomial, GenMonomial, GenMonomial), BurnsideCoeff>;
        fn add3(out: &mut Triple, key: (GenMonomial, GenMonomial, GenMonomial), c: BurnsideCoeff) {
            let settled = if is_pure(&key.0) && is_pure(&key.1) && is_pure(&key.2) {
                c
            } else {
                BurnsideCoeff::from_rational(c.q.clone())
            };
            if settled.is_zero() {
                return;
            }
            let mut merged = out.remove(&key).unwrap_or_else(BurnsideCoeff::zero);
            merged.add_ref(&settled);
            if !merged.is_zero() {
                out.insert(key, merged);
            }
        }
        // Split any rank-two class into two lines, the Whitney operation.
        let split = |gm: &GenMonomial| -> TensorGenPoly {
            let pair = PairPoly::from_q(&gm.expand_q().expect("rank-two expansion"));
            decompose_tensor(&pair, 1, 1).expect("line split")
        };
        let first = induced_map(MapKind::WhitneySum, 1, Some(2)).unwrap();
        let second = induced_map(MapKind::WhitneySum, 2, Some(1)).unwrap();
        for ((name_a, img_a), (name_b, img_b)) in first.images.iter().zip(&second.images) {
            assert_eq!(name_a, name_b);
            let mut via_right: Triple = BTreeMap::new();
            for ((l, r), c) in tensor(img_a).terms() {
                for ((rl, rr), c2) in split(r).terms() {
                    add3(&mut via_right, (l.clone(), rl.clone(), rr.clone()), c.mul_ref(c2));
                }
            }
            let mut via_left: Triple = BTreeMap::new();
            for ((l, r), c) in tensor(img_b).terms() {
                for ((ll, lr), c2) in split(l).terms() {
                    add3(&mut via_left, (ll.clone(), lr.clone(), r.clone()), c.mul_ref(c2));
                }
            }
            assert_eq!(via_right, via_left, "coassociativity at {name_a}");
        }
    }

    #[test]
    fn iterated_line_tensor() {
        // Tensoring three lines in either bracketing gives the same
        // idempotent image, an alternating sum of idempotent symmetric
        // functions.
        let base = line_product_sub().unwrap();
        let expand_second = PairSub::new(
            2,
            3,
            vec![
                QPoly::var_w(3, 1).unwrap(),
                QPoly::var_w(3, 2).unwrap().add(&QPoly::var_w(3, 3).unwrap()).unwrap(),
            ],
            vec![QPoly::var_u(3, 1).unwrap(), line_u_combo(3, 2, 3).unwrap()],
        )
        .unwrap();
        let expand_first = PairSub::new(
            2,
            3,
            vec![
                QPoly::var_w(3, 1).unwrap().add(&QPoly::var_w(3, 2).unwrap()).unwrap(),
                QPoly::var_w(3, 3).unwrap(),
            ],
            vec![line_u_combo(3, 1, 2).unwrap(), QPoly::var_u(3, 3).unwrap()],
        )
        .unwrap();
        let u_class = gamma_expand(1, 0, 1).unwrap();
        let pair2 = base.apply(&u_class).unwrap();
        let a = expand_second.apply_pair(&pair2).unwrap();
        let b = expand_first.apply_pair(&pair2).unwrap();
        assert_eq!(a, b);
        let want = gamma_expand(3, 0, 1)
            .unwrap()
            .sub(&gamma_expand(3, 0, 2).unwrap().scale(&rat_int(2)))
            .unwrap()
            .add(&gamma_expand(3, 0, 3).unwrap().scale(&rat_int(4)))
            .unwrap();
        assert_eq!(a, PairPoly::from_parts(want, QPoly::zero(3)).unwrap());
    }

    #[test]
    fn stable_classes_shape_and_stability() {
        assert!(matches!(stable_classes(1), Err(Error::UnsupportedMap { .. })));
        let classes = stable_classes(4).unwrap();
        assert_eq!(classes.len(), 3);
        assert_eq!(poly_text(&classes[0], &SCHEME_U, None), "e1*u - gamma1_1");
        assert_eq!(poly_text(&classes[2], &SCHEME_U, None), "e3*u - gamma3_1");
        assert!(stable_classes_fixed(4).unwrap());
        assert!(stable_forget_correspondence(1).unwrap());
        assert!(stable_forget_correspondence(2).unwrap());
    }

    #[test]
    fn stability_evidence_reports() {
        for degree in 0..=3 {
            let ev = conjecture_evidence(2, degree).unwrap();
            assert!(ev.contained, "generated classes stay stable at degree {degree}");
            assert!(
                ev.stable_dim >= ev.generated_dim,
                "span cannot exceed the kernel at degree {degree}"
            );
        }
        let ev = conjecture_evidence(2, 1).unwrap();
        assert_eq!(ev.stable_dim, 3);
        assert_eq!(ev.generated_dim, 3);
        assert!(ev.agrees());
        let ev3 = conjecture_evidence(3, 2).unwrap();
        assert!(ev3.contained);
        assert!(matches!(conjecture_evidence(5, 1), Err(Error::UnsupportedMap { .. })));
        assert!(matches!(conjecture_evidence(2, 7), Err(Error::UnsupportedMap { .. })));
    }

    #[test]
    fn map_serialization_shape() {
        let map = induced_map(MapKind::OplusOne, 1, None).unwrap();
        let js = map.to_json();
        assert_eq!(js["kind"], "oplus-one");
        assert_eq!(js["source"]["family"], "U");
        assert_eq!(js["source"]["rank"], 2);
        assert_eq!(js["target"]["rank"], 1);
        assert_eq!(js["images"][0]["generator"], "u");
        assert_eq!(js["images"][0]["polynomial"], "u + (1 - 1/2 x)");
        let sum = induced_map(MapKind::WhitneySum, 1, Some(1)).unwrap();
        let js = sum.to_json();
        assert_eq!(js["target"]["left"]["rank"], 1);
        assert_eq!(js["target"]["right"]["family"], "U");
        assert!(map.print().contains("gamma1_1 -> (1 - 1/2 x)*e1"));
    }
}
