//! Ring presentations for the classical families over the Burnside
//! coefficients: generator tables with torus realizations, relation lists
//! rendered on the presentation generators, restriction data, and graded
//! dimension counts checked against independent invariant oracles.

use crate::action::{invariant_dimension_of, is_invariant, GroupKind};
use crate::basis::{burnside_basis, dim_u, partition_p, weighted_count};
use crate::coeff::{rat_int, CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::gamma::{
    decompose, e_expand, gamma_expand, GenMonomial, GenPoly, NameScheme, SCHEME_SO, SCHEME_SP,
    SCHEME_U,
};
use crate::monomial::Monomial;
use crate::pair::PairPoly;
use crate::poly::QPoly;
use crate::relations::relation;
use crate::subst::Substitution;
use crate::text;

/// How the transfer is recovered from the restriction table.
pub const TRANSFER_RULE: &str = "Tr(a) = x*b where Res(b) = a";

const MAX_ENGINE_RANK: usize = 4;

/// Classical group family tags. The orthogonal family covers odd matrix
/// sizes; even orthogonal groups are handled separately as quotient data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    U,
    Sp,
    SO,
    OOdd,
    SU,
}

impl Family {
    /// Display tag, also used as the `group` field of the JSON form.
    pub fn tag(&self) -> &'static str {
        match self {
            Family::U => "U",
            Family::Sp => "Sp",
            Family::SO => "SO",
            Family::OOdd => "O",
            Family::SU => "SU",
        }
    }

    /// Parse a lowercase command-line tag.
    pub fn from_tag(tag: &str) -> Option<Family> {
        match tag.to_ascii_lowercase().as_str() {
            "u" => Some(Family::U),
            "sp" => Some(Family::Sp),
            "so" => Some(Family::SO),
            "o" => Some(Family::OOdd),
            "su" => Some(Family::SU),
            _ => None,
        }
    }
}

/// A group family member. For SO the rank is the matrix size (even or odd);
/// for the orthogonal family it is the odd matrix size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupId {
    family: Family,
    rank: usize,
}

impl GroupId {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let unsupported = |reason: &str| {
            Err(Error::UnsupportedGroup {
                group: format!("{}({})", family.tag(), rank),
                reason: reason.into(),
            })
        };
        match family {
            Family::U | Family::Sp => {
                if rank < 1 || rank > MAX_ENGINE_RANK {
                    return unsupported("rank must be between 1 and 4");
                }
            }
            Family::SO => {
                if rank < 2 || rank > 2 * MAX_ENGINE_RANK + 1 {
                    return unsupported("matrix size must be between 2 and 9");
                }
            }
            Family::OOdd => {
                if rank % 2 == 0 {
                    return unsupported("only odd matrix sizes have a full presentation");
                }
                if rank > 2 * MAX_ENGINE_RANK + 1 {
                    return unsupported("matrix size must be at most 9");
                }
            }
            Family::SU => {
                if rank < 2 {
                    return unsupported("the determinant-one quotient needs rank at least 2");
                }
                if rank > MAX_ENGINE_RANK {
                    return unsupported("rank must be at most 4");
                }
            }
        }
        Ok(GroupId { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Display name such as `U(2)`.
    pub fn name(&self) -> String {
        format!("{}({})", self.family.tag(), self.rank)
    }

    /// Rank of the torus ring backing the generator expansions.
    pub fn engine_rank(&self) -> usize {
        match self.family {
            Family::U | Family::Sp | Family::SU => self.rank,
            Family::SO => self.rank / 2,
            Family::OOdd => (self.rank - 1) / 2,
        }
    }

    /// The Weyl action on the torus variables.
    pub fn weyl(&self) -> GroupKind {
        match self.family {
            Family::U | Family::SU => GroupKind::Symmetric,
            Family::SO if self.rank % 2 == 0 => GroupKind::EvenSigned,
            Family::Sp | Family::SO | Family::OOdd => GroupKind::Hyperoctahedral,
        }
    }
}

/// One generator row of a presentation. The degree-zero class `delta` of the
/// orthogonal family has no torus coordinate, so its image is absent.
#[derive(Debug, Clone)]
pub struct GenInfo {
    pub name: String,
    pub degree: usize,
    pub torus_image: Option<String>,
}

/// A presented family member: generator table, relation strings, restriction
/// image table, and the completeness flag of the relation list.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub group: GroupId,
    pub generators: Vec<GenInfo>,
    pub weyl: GroupKind,
    pub torus_rank: usize,
    pub relations: Vec<String>,
    pub restriction_images: Vec<(String, String)>,
    pub restriction_bottom: String,
    pub relations_complete: bool,
}

impl Presentation {
    /// Canonical JSON form with alphabetically ordered keys.
    pub fn to_json(&self) -> serde_json::Value {
        let generators: Vec<serde_json::Value> = self
            .generators
            .iter()
            .map(|g| {
                serde_json::json!({
                    "name": g.name,
                    "degree": g.degree,
                    "torus_image": g.torus_image,
                })
            })
            .collect();
        let mut images = serde_json::Map::new();
        for (name, image) in &self.restriction_images {
            images.insert(name.clone(), image.clone().into());
        }
        images.insert("x".into(), "2".into());
        images.insert("y".into(), "0".into());
        serde_json::json!({
            "group": self.group.family().tag(),
            "rank": self.group.rank(),
            "coefficient_ring": "A_Q",
            "generators": generators,
            "relations": self.relations,
            "restriction": {
                "bottom": self.restriction_bottom,
                "images": images,
                "transfer": TRANSFER_RULE,
            },
            "relations_complete": self.relations_complete,
        })
    }
}

/// Restriction to the nonequivariant ring: the presentation, the target
/// polynomial ring, the generator image table extended by the coefficient
/// rows, and the rule recovering the transfer.
#[derive(Debug, Clone)]
pub struct RestrictionData {
    pub top: Presentation,
    pub bottom: String,
    pub res: Vec<(String, String)>,
    pub tr: &'static str,
}

pub fn restriction(g: &GroupId) -> Result<RestrictionData> {
    let top = presentation(g)?;
    let mut res = top.restriction_images.clone();
    res.push(("x".into(), "2".into()));
    res.push(("y".into(), "0".into()));
    Ok(RestrictionData { bottom: top.restriction_bottom.clone(), res, tr: TRANSFER_RULE, top })
}

// Product of two generator polynomials, term by term.
fn gp_mul(a: &GenPoly<Rational>, b: &GenPoly<Rational>) -> Result<GenPoly<Rational>> {
    let mut out = GenPoly::zero(a.rank());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out.add_term(ma.times(mb)?, ca.clone() * cb.clone());
        }
    }
    Ok(out)
}

// The degree-zero flag sigma_j(u_1..u_n) as a polynomial in the generator u:
// (1/j!) u (u-1) ... (u-j+1).
fn sigma_u_as_u_poly(n: usize, j: usize) -> Result<GenPoly<Rational>> {
    let u = GenMonomial::generator(n, 0, 1)?;
    let mut out = GenPoly::from_term(GenMonomial::one(n), rat_int(1));
    let mut factorial = rat_int(1);
    for k in 0..j {
        let mut factor = GenPoly::from_term(u.clone(), rat_int(1));
        factor.add_term(GenMonomial::one(n), rat_int(-(k as i64)));
        out = gp_mul(&out, &factor)?;
        factorial = factorial * rat_int(k as i64 + 1);
    }
    Ok(out.map_coeffs(|c| c.clone() / factorial.clone()))
}

/// Rewrite a decomposition on the presentation generators: each degree-zero
/// flag with index two or more becomes its rational polynomial in `u`,
/// leaving only `u`, the elementary classes, and the flags with `s >= 1`.
pub(crate) fn presentation_form(p: &GenPoly<Rational>) -> Result<GenPoly<Rational>> {
    let n = p.rank();
    let mut out = GenPoly::zero(n);
    for (gm, c) in p.terms() {
        let mut kept: Vec<((usize, usize), u32)> = Vec::new();
        let mut acc = GenPoly::from_term(GenMonomial::one(n), c.clone());
        for ((s, i), mult) in gm.powers() {
            if s == 0 && i >= 2 {
                let poly = sigma_u_as_u_poly(n, i)?;
                for _ in 0..mult {
                    acc = gp_mul(&acc, &poly)?;
                }
            } else {
                kept.push(((s, i), mult));
            }
        }
        let rest = GenPoly::from_term(GenMonomial::from_powers(n, kept)?, rat_int(1));
        out = out.add(&gp_mul(&acc, &rest)?)?;
    }
    Ok(out)
}

// One presentation-level relation: dominant product on the left, remainder
// on the right in presentation form.
pub(crate) struct SRelation {
    pub(crate) lhs: GenMonomial,
    pub(crate) rhs: GenPoly<Rational>,
}

// The finite relation list at rank n: the idempotent product relation on u,
// the u-power relations against each flag, and one relation per unordered
// pair of flags, in ascending (s, t, i, j) order.
pub(crate) fn s_relation_list(n: usize) -> Result<Vec<SRelation>> {
    let mut out = Vec::new();
    let u = GenMonomial::generator(n, 0, 1)?;
    // u(u-1)...(u-n) = 0, rendered with u^{n+1} dominant.
    let lhs = GenMonomial::from_powers(n, [((0, 1), n as u32 + 1)])?;
    let mut product = GenPoly::from_term(GenMonomial::one(n), rat_int(1));
    for k in 0..=n {
        let mut factor = GenPoly::from_term(u.clone(), rat_int(1));
        factor.add_term(GenMonomial::one(n), rat_int(-(k as i64)));
        product = gp_mul(&product, &factor)?;
    }
    let rhs = GenPoly::from_term(lhs.clone(), rat_int(1)).sub(&product)?;
    out.push(SRelation { lhs, rhs });
    // u^s times the flag at (s, i).
    for s in 1..n {
        for i in 1..=(n - s) {
            let lhs = GenMonomial::from_powers(n, [((0, 1), s as u32), ((s, i), 1)])?;
            let torus = gamma_expand(n, 0, 1)?.pow(s as u32).mul(&gamma_expand(n, s, i)?)?;
            let rhs = presentation_form(&decompose(&torus)?)?;
            out.push(SRelation { lhs, rhs });
        }
    }
    // Flag products; for equal first index keep one of each symmetric pair.
    for s in 1..n {
        for t in s..n {
            for i in 1..=(n - s) {
                if t > s + i {
                    continue;
                }
                for j in 1..=(n - t) {
                    if s == t && j < i {
                        continue;
                    }
                    let entry = relation(n, s, i, t, j)?;
                    out.push(SRelation {
                        lhs: entry.lhs(),
                        rhs: presentation_form(&entry.rhs())?,
                    });
                }
            }
        }
    }
    Ok(out)
}

// Print a generator product, rewriting the top elementary class as the
// square of the Euler class when `chi_at` names its index.
pub(crate) fn mono_text(gm: &GenMonomial, scheme: &NameScheme, chi_at: Option<usize>) -> String {
    if gm.is_one() {
        return "1".to_string();
    }
    let mut keys: Vec<((usize, usize), u32)> = gm.powers().collect();
    keys.sort_by_key(|&((s, i), _)| (usize::from(i != 0), s, i));
    let parts: Vec<String> = keys
        .into_iter()
        .map(|((s, i), mult)| {
            let (name, mult) = match chi_at {
                Some(top) if i == 0 && s == top => ("chi".to_string(), 2 * mult),
                _ => (scheme.key_name(s, i), mult),
            };
            if mult == 1 {
                name
            } else {
                format!("{name}^{mult}")
            }
        })
        .collect();
    parts.join("*")
}

pub(crate) fn poly_text<C: CoeffRing>(p: &GenPoly<C>, scheme: &NameScheme, chi_at: Option<usize>) -> String {
    text::join_terms(p.sorted_terms().into_iter().map(|(gm, c)| {
        let mono = if gm.is_one() { String::new() } else { mono_text(gm, scheme, chi_at) };
        text::term_body(&mono, c)
    }))
}

fn equation_text(rel: &SRelation, scheme: &NameScheme, chi_at: Option<usize>) -> String {
    format!("{} = {}", mono_text(&rel.lhs, scheme, chi_at), poly_text(&rel.rhs, scheme, chi_at))
}

// Image of a plain polynomial under w_i -> w_i^2, the degree doubling used
// by the symplectic and orthogonal families.
pub(crate) fn square_w(p: &QPoly) -> QPoly {
    let mut out = QPoly::zero(p.rank());
    for (m, c) in p.terms() {
        let doubled = Monomial { w: m.w.iter().map(|a| a * 2).collect(), u: m.u.clone() };
        out.add_term(doubled, c.clone());
    }
    out
}

// The Euler class on the torus: the product of all w variables.
fn chi_poly(n: usize) -> QPoly {
    let mut out = QPoly::zero(n);
    out.add_term(Monomial { w: vec![1; n], u: vec![false; n] }, rat_int(1));
    out
}

// Scheme, cohomological degree per engine degree, squared-variable flag, and
// the elementary index rendered through the Euler class (even SO only).
pub(crate) fn family_style(g: &GroupId) -> (&'static NameScheme, usize, bool, Option<usize>) {
    match g.family {
        Family::U | Family::SU => (&SCHEME_U, 2, false, None),
        Family::Sp => (&SCHEME_SP, 4, true, None),
        Family::SO if g.rank % 2 == 0 => (&SCHEME_SO, 4, true, Some(g.engine_rank())),
        Family::SO | Family::OOdd => (&SCHEME_SO, 4, true, None),
    }
}

// Generator rows plus restriction images, in presentation order.
fn generator_table(g: &GroupId) -> Result<(Vec<GenInfo>, Vec<(String, String)>)> {
    let n = g.engine_rank();
    let (scheme, wdeg, squared, chi_at) = family_style(g);
    let adjust = |p: QPoly| if squared { square_w(&p) } else { p };
    let mut gens = Vec::new();
    let mut res = Vec::new();
    gens.push(GenInfo {
        name: "u".into(),
        degree: 0,
        torus_image: Some(text::print_poly(&gamma_expand(n, 0, 1)?)),
    });
    res.push(("u".to_string(), "0".to_string()));
    if g.family == Family::OOdd {
        gens.push(GenInfo { name: "delta".into(), degree: 0, torus_image: None });
        res.push(("delta".to_string(), "0".to_string()));
    }
    let e_top = if chi_at.is_some() { n - 1 } else { n };
    for i in 1..=e_top {
        let name = scheme.key_name(i, 0);
        let bottom = match g.family {
            Family::U => format!("c{i}"),
            Family::SU if i == 1 => "0".to_string(),
            Family::SU => format!("c{i}"),
            _ => name.clone(),
        };
        gens.push(GenInfo {
            name: name.clone(),
            degree: wdeg * i,
            torus_image: Some(text::print_poly(&adjust(e_expand(n, i)?))),
        });
        res.push((name, bottom));
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            let name = scheme.key_name(s, j);
            gens.push(GenInfo {
                name: name.clone(),
                degree: wdeg * s,
                torus_image: Some(text::print_poly(&adjust(gamma_expand(n, s, j)?))),
            });
            res.push((name, "0".to_string()));
        }
    }
    if chi_at.is_some() {
        gens.push(GenInfo {
            name: "chi".into(),
            degree: g.rank,
            torus_image: Some(text::print_poly(&chi_poly(n))),
        });
        res.push(("chi".to_string(), "chi".to_string()));
    }
    Ok((gens, res))
}

fn bottom_ring(g: &GroupId) -> String {
    let n = g.engine_rank();
    let names: Vec<String> = match g.family {
        Family::U => (1..=n).map(|i| format!("c{i}")).collect(),
        Family::SU => (2..=n).map(|i| format!("c{i}")).collect(),
        Family::Sp => (1..=n).map(|i| format!("k{i}")).collect(),
        Family::SO if g.rank % 2 == 0 => {
            (1..n).map(|i| format!("p{i}")).chain(["chi".to_string()]).collect()
        }
        Family::SO | Family::OOdd => (1..=n).map(|i| format!("p{i}")).collect(),
    };
    if names.is_empty() {
        "Q".to_string()
    } else {
        format!("Q[{}]", names.join(", "))
    }
}

/// Build the presentation for a family member.
pub fn presentation(g: &GroupId) -> Result<Presentation> {
    if g.family == Family::OOdd && g.rank == 1 {
        return Ok(Presentation {
            group: *g,
            generators: vec![GenInfo { name: "delta".into(), degree: 0, torus_image: None }],
            weyl: GroupKind::Symmetric,
            torus_rank: 0,
            relations: vec!["x*delta = 0".into(), "delta^2 = delta".into()],
            restriction_images: vec![("delta".into(), "0".into())],
            restriction_bottom: "Q".into(),
            relations_complete: true,
        });
    }
    let n = g.engine_rank();
    let (scheme, _, _, chi_at) = family_style(g);
    let (generators, restriction_images) = generator_table(g)?;
    let mut relations = vec!["x*u = 0".to_string()];
    if g.family == Family::OOdd {
        relations.push("x*delta = 0".into());
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            relations.push(format!("x*{} = 0", scheme.key_name(s, j)));
        }
    }
    if g.family == Family::OOdd {
        relations.push("delta^2 = delta".into());
    }
    if g.family == Family::SU {
        relations.push("e1 = 0".into());
        relations.push(format!("{} = 0", scheme.key_name(1, n - 1)));
        if n == 2 {
            relations.push("u^2 = 2*u".into());
        }
    } else {
        for rel in s_relation_list(n)? {
            relations.push(equation_text(&rel, scheme, chi_at));
        }
    }
    Ok(Presentation {
        group: *g,
        generators,
        weyl: g.weyl(),
        torus_rank: if g.family == Family::SU { n - 1 } else { n },
        relations,
        restriction_images,
        restriction_bottom: bottom_ring(g),
        relations_complete: g.family != Family::SU || n == 2,
    })
}

/// Generator torus images in presentation order. The class `delta` has no
/// torus coordinate and is omitted; the special unitary images are those of
/// the ambient unitary family, with the determinant-one quotient verified by
/// `su_check`.
pub fn torus_realization(g: &GroupId) -> Result<Vec<(String, QPoly)>> {
    let n = g.engine_rank();
    let (scheme, _, squared, chi_at) = family_style(g);
    let adjust = |p: QPoly| if squared { square_w(&p) } else { p };
    let mut out = Vec::new();
    if g.family == Family::OOdd && g.rank == 1 {
        return Ok(out);
    }
    out.push(("u".to_string(), gamma_expand(n, 0, 1)?));
    let e_top = if chi_at.is_some() { n - 1 } else { n };
    for i in 1..=e_top {
        out.push((scheme.key_name(i, 0), adjust(e_expand(n, i)?)));
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            out.push((scheme.key_name(s, j), adjust(gamma_expand(n, s, j)?)));
        }
    }
    if chi_at.is_some() {
        out.push(("chi".to_string(), chi_poly(n)));
    }
    Ok(out)
}

// Rational dimension of degree 2m of the polynomial characteristic-class
// ring of the rank-r real orthogonal group.
fn bo_dim(r: usize, m: usize) -> u64 {
    if m % 2 == 0 {
        partition_p(r / 2, m / 2)
    } else {
        0
    }
}

// Fixed-point component oracle for an orthogonal matrix size: one summand
// per splitting into a fixed and a sign-twisted part, plus the restriction
// summand.
fn o_component_oracle(matrix: usize, m: usize) -> u64 {
    let mut total = bo_dim(matrix, m);
    for a in 0..=matrix {
        for m1 in 0..=m {
            total += bo_dim(a, m1) * bo_dim(matrix - a, m - m1);
        }
    }
    total
}

// Weighted module-basis count for the families presented on squared torus
// variables: every class sits in a degree divisible by four.
fn doubled_basis_count(n: usize, m: usize) -> u64 {
    if m % 2 != 0 {
        0
    } else {
        weighted_count(&burnside_basis(n, m / 2))
    }
}

// Module-basis count for even SO: Euler powers times basis elements free of
// the top elementary class, which that square replaces.
fn so_even_basis_count(n: usize, m: usize) -> u64 {
    let mut total = 0;
    for e in 0..=(m / n) {
        let rem = m - n * e;
        if rem % 2 != 0 {
            continue;
        }
        for gm in burnside_basis(n, rem / 2) {
            if gm.powers().any(|((s, i), _)| i == 0 && s == n) {
                continue;
            }
            total += if gm.powers().all(|((_, i), _)| i == 0) { 2 } else { 1 };
        }
    }
    total
}

// Module-basis count for an odd orthogonal group: the special orthogonal
// basis tensored with the span of one idempotent.
fn o_odd_basis_count(n: usize, m: usize) -> u64 {
    if n == 0 {
        return if m == 0 { 3 } else { 0 };
    }
    if m % 2 != 0 {
        return 0;
    }
    let b = burnside_basis(n, m / 2);
    weighted_count(&b) + b.len() as u64
}

fn dimension_mismatch(g: &GroupId, m: usize, a: u64, b: u64) -> Error {
    Error::Internal(format!(
        "graded dimension of {} at 2m = {}: basis count {} disagrees with oracle {}",
        g.name(),
        2 * m,
        a,
        b
    ))
}

/// Dimension over `Q` of `H^{2m}`, computed from the module basis of the
/// presentation and checked against an independent oracle: the Weyl-invariant
/// dimension of the torus ring, or the fixed-point component count for the
/// odd orthogonal family. Disagreement is an error, not a value.
pub fn graded_dimension(g: &GroupId, m: usize) -> Result<u64> {
    let n = g.engine_rank();
    let weyl_oracle = |kind: GroupKind| -> Result<u64> {
        Ok((invariant_dimension_of(kind, n, m, true)?
            + invariant_dimension_of(kind, n, m, false)?) as u64)
    };
    let (from_basis, from_oracle) = match g.family {
        Family::U => {
            let a = weighted_count(&burnside_basis(n, m));
            if a != dim_u(n, m) {
                return Err(dimension_mismatch(g, m, a, dim_u(n, m)));
            }
            (a, weyl_oracle(GroupKind::Symmetric)?)
        }
        Family::SU => {
            return Err(Error::UnsupportedGroup {
                group: g.name(),
                reason: "graded dimensions are not emitted for the flagged-partial quotient"
                    .into(),
            });
        }
        Family::Sp => (doubled_basis_count(n, m), weyl_oracle(GroupKind::Hyperoctahedral)?),
        Family::SO if g.rank % 2 == 0 => {
            (so_even_basis_count(n, m), weyl_oracle(GroupKind::EvenSigned)?)
        }
        Family::SO => (doubled_basis_count(n, m), weyl_oracle(GroupKind::Hyperoctahedral)?),
        Family::OOdd => (o_odd_basis_count(n, m), o_component_oracle(g.rank, m)),
    };
    if from_basis != from_oracle {
        return Err(dimension_mismatch(g, m, from_basis, from_oracle));
    }
    Ok(from_basis)
}

/// Dimension over `Q` of `H^{2m}` for the even orthogonal group of matrix
/// size two, from its quotient presentation and from the fixed-point
/// component oracle.
pub fn o2_graded_dimension(m: usize) -> Result<u64> {
    // Degree zero is spanned by 1, x, u, delta; positive degrees 4k by the
    // top Pontryagin power with its x- and u-multiples.
    let from_basis = if m == 0 {
        4
    } else if m % 2 == 0 {
        3
    } else {
        0
    };
    let from_oracle = o_component_oracle(2, m);
    if from_basis != from_oracle {
        return Err(Error::Internal(format!(
            "even orthogonal dimension at 2m = {}: {} disagrees with oracle {}",
            2 * m,
            from_basis,
            from_oracle
        )));
    }
    Ok(from_basis)
}

// Degree-zero idempotent points of the odd orthogonal ring at engine rank n:
// the u-value ranges over 0..=n and delta over 0..=1.
fn o_odd_h0_points(n: usize) -> Vec<(usize, usize)> {
    let mut points = Vec::new();
    for v in 0..=n {
        for d in 0..2 {
            points.push((v, d));
        }
    }
    points
}

// Value of u(u-1)...(u-n+1)(1-delta) at a degree-zero point.
fn o_even_cut(n: usize, point: (usize, usize)) -> i64 {
    let (v, d) = point;
    let mut value: i64 = 1 - d as i64;
    for k in 0..n {
        value *= v as i64 - k as i64;
    }
    value
}

/// Dimension over `Q` of degree zero for the even orthogonal matrix size
/// `2n`, via the stated quotient of the odd ring and via the fixed-point
/// component count.
pub fn o_even_h0_dimension(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_ENGINE_RANK {
        return Err(Error::UnsupportedGroup {
            group: format!("O({})", 2 * n),
            reason: "matrix size must be between 2 and 8".into(),
        });
    }
    let surviving =
        o_odd_h0_points(n).into_iter().filter(|&p| o_even_cut(n, p) == 0).count() as u64;
    let from_quotient = surviving + 1;
    let from_components = o_component_oracle(2 * n, 0);
    if from_quotient != from_components {
        return Err(Error::Internal(format!(
            "degree-zero count for O({}): {} disagrees with component count {}",
            2 * n,
            from_quotient,
            from_components
        )));
    }
    Ok(from_quotient)
}

/// Verification report for the determinant-one quotient at rank `n`.
#[derive(Debug, Clone)]
pub struct SuReport {
    pub n: usize,
    /// The first elementary class maps to zero.
    pub e1_vanishes: bool,
    /// The flag at (1, n-1) maps to zero.
    pub top_flag_vanishes: bool,
    /// The substituted last idempotent coordinate squares to itself.
    pub quotient_idempotent: bool,
    /// Generator images are fixed by the permutations of the remaining
    /// coordinates and by the twisted transposition with the last one.
    pub twisted_invariance: bool,
    /// Rank two only: the image of u satisfies u^2 = 2u.
    pub u_doubling: Option<bool>,
    /// Rank two only: mapping e2 to the rank-one symplectic class and u to
    /// twice the symplectic u kills the quotient relations.
    pub sp1_ring_map: Option<bool>,
    /// Rank two only: the torus image of e2 is the negative of the rank-one
    /// symplectic class, so the identification twists that generator's sign.
    pub e2_sign_flip: Option<bool>,
}

impl SuReport {
    /// True when every check performed for this rank succeeded.
    pub fn all_hold(&self) -> bool {
        self.e1_vanishes
            && self.top_flag_vanishes
            && self.quotient_idempotent
            && self.twisted_invariance
            && self.u_doubling.unwrap_or(true)
            && self.sp1_ring_map.unwrap_or(true)
            && self.e2_sign_flip.unwrap_or(true)
    }
}

// The substituted last idempotent coordinate at quotient rank r, with the
// idempotent summand of the coefficient ring evaluated at one.
fn su_last_u(n: usize, r: usize) -> Result<QPoly> {
    let mut out = QPoly::zero(r);
    if n % 2 == 1 {
        out = out.add(&QPoly::one(r))?;
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut geometric = 1i64;
    for i in 1..=r {
        out = out.add(&gamma_expand(r, 0, i)?.scale(&rat_int(sign * geometric)))?;
        geometric *= -2;
    }
    Ok(out)
}

// The negated sum of the quotient w variables, the image of the last one.
fn su_last_w(r: usize) -> Result<QPoly> {
    let mut out = QPoly::zero(r);
    for i in 1..=r {
        out = out.sub(&QPoly::var_w(r, i)?)?;
    }
    Ok(out)
}

/// Verify the determinant-one quotient of the rank-`n` unitary family by
/// substituting away the last torus coordinate pair.
pub fn su_check(n: usize) -> Result<SuReport> {
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedGroup {
            group: format!("SU({n})"),
            reason: "the quotient verification covers ranks 2 and 3".into(),
        });
    }
    let r = n - 1;
    let mut w_images: Vec<QPoly> = Vec::new();
    for i in 1..=r {
        w_images.push(QPoly::var_w(r, i)?);
    }
    w_images.push(su_last_w(r)?);
    let mut u_images: Vec<QPoly> = Vec::new();
    for i in 1..=r {
        u_images.push(QPoly::var_u(r, i)?);
    }
    let last_u = su_last_u(n, r)?;
    u_images.push(last_u.clone());
    let sub_y = Substitution::new(n, r, w_images.clone(), u_images)?;
    let sub_x = Substitution::new(n, r, w_images, vec![QPoly::zero(r); n])?;
    let image = |p: &QPoly| -> Result<PairPoly> {
        PairPoly::from_parts(sub_y.apply(p)?, sub_x.apply(&p.kill_u())?)
    };

    let quotient_idempotent = last_u.mul(&last_u)? == last_u;
    let e1_vanishes = image(&e_expand(n, 1)?)?.is_zero();
    let top_flag_vanishes = image(&gamma_expand(n, 1, n - 1)?)?.is_zero();

    // Twisted transposition with the last coordinate, on the quotient ring.
    let mut tau_w: Vec<QPoly> = Vec::new();
    for i in 1..=r {
        tau_w.push(QPoly::var_w(r, i)?);
    }
    tau_w[r - 1] = su_last_w(r)?;
    let mut tau_u: Vec<QPoly> = Vec::new();
    for i in 1..=r {
        tau_u.push(QPoly::var_u(r, i)?);
    }
    tau_u[r - 1] = su_last_u(n, r)?;
    let tau_y = Substitution::new(r, r, tau_w.clone(), tau_u)?;
    let tau_x = Substitution::new(r, r, tau_w, vec![QPoly::zero(r); r])?;
    let mut ambient: Vec<QPoly> = vec![gamma_expand(n, 0, 1)?];
    for i in 1..=n {
        ambient.push(e_expand(n, i)?);
    }
    for s in 1..n {
        for j in 1..=(n - s) {
            ambient.push(gamma_expand(n, s, j)?);
        }
    }
    let mut twisted_invariance = true;
    for p in &ambient {
        let (py, px) = {
            let pair = image(p)?;
            (pair.parts().0.clone(), pair.parts().1.clone())
        };
        twisted_invariance &= is_invariant(&py, GroupKind::Symmetric)?
            && is_invariant(&px, GroupKind::Symmetric)?
            && tau_y.apply(&py)? == py
            && tau_x.apply(&px)? == px;
    }

    let (u_doubling, sp1_ring_map, e2_sign_flip) = if n == 2 {
        let u_img = image(&gamma_expand(2, 0, 1)?)?;
        let doubling = u_img.mul(&u_img)? == u_img.scale(&rat_int(2));
        let sp_u = PairPoly::var_u(1, 1)?;
        let two_u = sp_u.scale(&rat_int(2));
        let rel = two_u.mul(&two_u)?.sub(&two_u.scale(&rat_int(2)))?;
        let kill = PairPoly::x(1).mul(&two_u)?;
        let ring_map = rel.is_zero() && kill.is_zero();
        let e2_img = image(&e_expand(2, 2)?)?;
        let k1 = PairPoly::from_q(&square_w(&e_expand(1, 1)?));
        let sign_flip = e2_img == k1.neg();
        (Some(doubling), Some(ring_map), Some(sign_flip))
    } else {
        (None, None, None)
    };

    Ok(SuReport {
        n,
        e1_vanishes,
        top_flag_vanishes,
        quotient_idempotent,
        twisted_invariance,
        u_doubling,
        sp1_ring_map,
        e2_sign_flip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{relation_set, RelationCache};
    use std::collections::BTreeMap;

    fn gid(family: Family, rank: usize) -> GroupId {
        GroupId::new(family, rank).expect("valid group")
    }

    // Evaluate a generator polynomial through a torus image table.
    fn eval_genpoly(
        images: &BTreeMap<(usize, usize), QPoly>,
        p: &GenPoly<Rational>,
        rank: usize,
    ) -> QPoly {
        let mut out = QPoly::zero(rank);
        for (gm, c) in p.terms() {
            let mut term = QPoly::one(rank);
            for ((s, i), mult) in gm.powers() {
                let img = images.get(&(s, i)).expect("image for key");
                term = term.mul(&img.pow(mult)).expect("rank match");
            }
            out = out.add(&term.scale(c)).expect("rank match");
        }
        out
    }

    #[test]
    fn group_id_validation() {
        assert!(GroupId::new(Family::U, 1).is_ok());
        assert!(GroupId::new(Family::U, 5).is_err());
        assert!(GroupId::new(Family::SO, 1).is_err());
        assert!(GroupId::new(Family::SO, 9).is_ok());
        assert!(GroupId::new(Family::OOdd, 2).is_err());
        assert!(GroupId::new(Family::OOdd, 1).is_ok());
        assert!(GroupId::new(Family::SU, 1).is_err());
        assert_eq!(gid(Family::SO, 7).engine_rank(), 3);
        assert_eq!(gid(Family::OOdd, 5).engine_rank(), 2);
        assert_eq!(Family::from_tag("sp"), Some(Family::Sp));
        assert_eq!(Family::from_tag("q"), None);
    }

    #[test]
    fn rank_one_presentations() {
        let u1 = presentation(&gid(Family::U, 1)).unwrap();
        assert_eq!(u1.relations, vec!["x*u = 0", "u^2 = u"]);
        let names: Vec<&str> = u1.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["u", "e1"]);
        assert_eq!(u1.generators[1].degree, 2);

        let sp1 = presentation(&gid(Family::Sp, 1)).unwrap();
        assert_eq!(sp1.relations, vec!["x*u = 0", "u^2 = u"]);
        assert_eq!(sp1.generators[1].name, "k1");
        assert_eq!(sp1.generators[1].degree, 4);
        assert_eq!(sp1.generators[1].torus_image.as_deref(), Some("w1^2"));

        let o1 = presentation(&gid(Family::OOdd, 1)).unwrap();
        assert_eq!(o1.relations, vec!["x*delta = 0", "delta^2 = delta"]);
        assert_eq!(o1.generators.len(), 1);
        assert_eq!(o1.restriction_bottom, "Q");

        let so2 = presentation(&gid(Family::SO, 2)).unwrap();
        let names: Vec<&str> = so2.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["u", "chi"]);
        assert_eq!(so2.generators[1].degree, 2);
        assert_eq!(so2.generators[1].torus_image.as_deref(), Some("w1"));
        assert_eq!(so2.relations, vec!["x*u = 0", "u^2 = u"]);
    }

    #[test]
    fn unitary_rank_two_relation_list() {
        let p = presentation(&gid(Family::U, 2)).unwrap();
        assert_eq!(
            p.relations,
            vec![
                "x*u = 0",
                "x*gamma1_1 = 0",
                "u^3 = 3*u^2 - 2*u",
                "u*gamma1_1 = 1/2*e1*u^2 - 1/2*e1*u + gamma1_1",
                "gamma1_1^2 = e1*gamma1_1 + e2*u^2 - 2*e2*u",
            ]
        );
        assert!(p.relations_complete);
        assert_eq!(p.restriction_bottom, "Q[c1, c2]");
    }

    #[test]
    fn so_even_relations_use_euler_square() {
        let p = presentation(&gid(Family::SO, 4)).unwrap();
        assert!(p.relations.contains(&"u*pi1_1 = 1/2*p1*u^2 - 1/2*p1*u + pi1_1".to_string()));
        assert!(p
            .relations
            .contains(&"pi1_1^2 = p1*pi1_1 + chi^2*u^2 - 2*chi^2*u".to_string()));
        let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["u", "p1", "pi1_1", "chi"]);
        assert_eq!(p.generators[3].degree, 4);
    }

    #[test]
    fn odd_orthogonal_presentation() {
        let p = presentation(&gid(Family::OOdd, 3)).unwrap();
        let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["u", "delta", "p1"]);
        assert_eq!(
            p.relations,
            vec!["x*u = 0", "x*delta = 0", "delta^2 = delta", "u^2 = u"]
        );
        assert!(p.generators[1].torus_image.is_none());
    }

    #[test]
    fn su_presentations_flag_completeness() {
        let su2 = presentation(&gid(Family::SU, 2)).unwrap();
        assert!(su2.relations_complete);
        assert!(su2.relations.contains(&"u^2 = 2*u".to_string()));
        assert!(su2.relations.contains(&"e1 = 0".to_string()));
        assert!(su2.relations.contains(&"gamma1_1 = 0".to_string()));
        assert_eq!(su2.restriction_bottom, "Q[c2]");
        assert_eq!(su2.torus_rank, 1);

        let su3 = presentation(&gid(Family::SU, 3)).unwrap();
        assert!(!su3.relations_complete);
        assert!(su3.relations.contains(&"gamma1_2 = 0".to_string()));
    }

    #[test]
    fn presentation_relations_expand_to_zero() {
        for n in 1..=3 {
            for rel in s_relation_list(n).unwrap() {
                let lhs = rel.lhs.expand_q().unwrap();
                let rhs = rel.rhs.expand().unwrap();
                assert_eq!(lhs, rhs, "relation {} at rank {n}", rel.lhs.print());
                for (gm, _) in rel.rhs.terms() {
                    assert!(
                        gm.powers().any(|((_, i), _)| i != 0),
                        "pure elementary term {} would survive restriction",
                        gm.print()
                    );
                }
            }
        }
    }

    #[test]
    fn json_shape_is_canonical() {
        let p = presentation(&gid(Family::U, 2)).unwrap();
        let value = p.to_json();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            [
                "coefficient_ring",
                "generators",
                "group",
                "rank",
                "relations",
                "relations_complete",
                "restriction"
            ]
        );
        assert_eq!(value["generators"][0]["name"], "u");
        assert_eq!(value["generators"][0]["torus_image"], "u1 + u2");
        assert_eq!(value["restriction"]["images"]["e1"], "c1");
        assert_eq!(value["restriction"]["images"]["x"], "2");
    }

    #[test]
    fn torus_images_are_weyl_invariant() {
        for g in [
            gid(Family::U, 3),
            gid(Family::Sp, 2),
            gid(Family::SO, 4),
            gid(Family::SO, 5),
            gid(Family::OOdd, 5),
        ] {
            for (name, img) in torus_realization(&g).unwrap() {
                assert!(
                    is_invariant(&img, g.weyl()).unwrap(),
                    "{name} of {} is not invariant",
                    g.name()
                );
            }
        }
    }

    #[test]
    fn relabeled_relations_hold_through_squared_torus() {
        for n in 1..=3usize {
            let mut images: BTreeMap<(usize, usize), QPoly> = BTreeMap::new();
            for i in 1..=n {
                images.insert((0, i), gamma_expand(n, 0, i).unwrap());
            }
            for i in 1..=n {
                images.insert((i, 0), square_w(&e_expand(n, i).unwrap()));
            }
            for s in 1..n {
                for j in 1..=(n - s) {
                    images.insert((s, j), square_w(&gamma_expand(n, s, j).unwrap()));
                }
            }
            // The even special orthogonal reading replaces the top elementary
            // image by the square of the Euler class; the polynomials agree.
            let chi_sq = chi_poly(n).pow(2);
            assert_eq!(chi_sq, images[&(n, 0)]);
            for entry in relation_set(n, &RelationCache::disabled()).unwrap() {
                let lhs = eval_genpoly(
                    &images,
                    &GenPoly::from_term(entry.lhs(), rat_int(1)),
                    n,
                );
                let rhs = eval_genpoly(&images, &entry.rhs(), n);
                let (s, i, t, j) = entry.indices();
                assert_eq!(lhs, rhs, "relabeled relation ({s},{i},{t},{j}) at rank {n}");
            }
        }
    }

    #[test]
    fn graded_dimensions_double_entry() {
        for g in [
            gid(Family::U, 1),
            gid(Family::U, 2),
            gid(Family::U, 3),
            gid(Family::Sp, 1),
            gid(Family::Sp, 2),
            gid(Family::Sp, 3),
            gid(Family::SO, 2),
            gid(Family::SO, 3),
            gid(Family::SO, 4),
            gid(Family::OOdd, 1),
            gid(Family::OOdd, 3),
        ] {
            for m in 0..=8 {
                graded_dimension(&g, m)
                    .unwrap_or_else(|e| panic!("{} at {m}: {e}", g.name()));
            }
        }
        assert_eq!(graded_dimension(&gid(Family::U, 1), 0).unwrap(), 3);
        assert_eq!(graded_dimension(&gid(Family::U, 2), 1).unwrap(), 5);
        assert_eq!(graded_dimension(&gid(Family::SO, 4), 2).unwrap(), 9);
        assert_eq!(graded_dimension(&gid(Family::SO, 2), 5).unwrap(), 3);
        assert_eq!(graded_dimension(&gid(Family::OOdd, 3), 0).unwrap(), 5);
        assert!(graded_dimension(&gid(Family::SU, 2), 0).is_err());
    }

    #[test]
    fn restriction_tables_split() {
        let data = restriction(&gid(Family::U, 2)).unwrap();
        assert_eq!(data.bottom, "Q[c1, c2]");
        let lookup: BTreeMap<_, _> = data.res.iter().cloned().collect();
        assert_eq!(lookup["e1"], "c1");
        assert_eq!(lookup["gamma1_1"], "0");
        assert_eq!(lookup["u"], "0");
        assert_eq!(lookup["x"], "2");
        assert_eq!(lookup["y"], "0");
        assert_eq!(data.tr, TRANSFER_RULE);
        // Every named bottom generator is hit, so the table splits.
        for name in ["c1", "c2"] {
            assert!(data.res.iter().any(|(_, img)| img == name));
        }
    }

    #[test]
    fn euler_class_squares_to_top_pontryagin() {
        for n in 1..=3 {
            assert_eq!(chi_poly(n).pow(2), square_w(&e_expand(n, n).unwrap()));
        }
    }

    #[test]
    fn even_orthogonal_quotient_data() {
        assert_eq!(o2_graded_dimension(0).unwrap(), 4);
        assert_eq!(o2_graded_dimension(2).unwrap(), 3);
        assert_eq!(o2_graded_dimension(4).unwrap(), 3);
        assert_eq!(o2_graded_dimension(1).unwrap(), 0);
        assert_eq!(o_even_h0_dimension(1).unwrap(), 4);
        assert_eq!(o_even_h0_dimension(2).unwrap(), 6);
        // The surviving points match the component labels (half the twisted
        // dimension, its parity) of the even fixed-point decomposition.
        for n in 1..=2usize {
            let surviving: Vec<(usize, usize)> = o_odd_h0_points(n)
                .into_iter()
                .filter(|&p| o_even_cut(n, p) == 0)
                .collect();
            let mut expected: Vec<(usize, usize)> =
                (0..=2 * n).map(|b| (b / 2, usize::from(b % 2 == 0))).collect();
            expected.sort_unstable();
            expected.dedup();
            let mut got = surviving.clone();
            got.sort_unstable();
            assert_eq!(got, expected, "surviving points at n = {n}");
        }
    }

    #[test]
    fn even_orthogonal_extra_relations_supports() {
        // At matrix size four the stated extra relations annihilate exactly
        // one surviving component each, and restrict to zero.
        let n = 2;
        let survivors: Vec<(usize, usize)> = o_odd_h0_points(n)
            .into_iter()
            .filter(|&p| o_even_cut(n, p) == 0)
            .collect();
        let first = |&(v, d): &(usize, usize)| (v * v) as i64 * (1 - d as i64);
        let second = |&(v, d): &(usize, usize)| (1 - d as i64) * (1 - v as i64);
        let first_support: Vec<_> = survivors.iter().filter(|p| first(p) != 0).collect();
        assert_eq!(first_support, [&(1, 0)]);
        let second_support: Vec<_> = survivors.iter().filter(|p| second(p) != 0).collect();
        assert_eq!(second_support, [&(0, 0)]);
    }

    #[test]
    fn su_reports_hold() {
        let two = su_check(2).unwrap();
        assert!(two.all_hold(), "{two:?}");
        assert_eq!(two.u_doubling, Some(true));
        assert_eq!(two.e2_sign_flip, Some(true));
        let three = su_check(3).unwrap();
        assert!(three.all_hold(), "{three:?}");
        assert_eq!(three.u_doubling, None);
        assert!(su_check(4).is_err());
    }
}
