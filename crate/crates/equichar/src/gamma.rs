//! The invariant generators `gamma_{s,i}`, admissible products of them, and
//! the dominant-term decomposition of symmetric polynomials.
//!
//! `gamma_{s,i}` is the orbit sum of `w_1...w_s * u_{s+1}...u_{s+i}` over
//! pairs of disjoint index sets; `gamma_{s,0} = e_s` is the elementary
//! symmetric polynomial and `gamma_{0,1} = u` the sum of the idempotents.
//! Every symmetric polynomial decomposes uniquely as a combination of
//! admissible products, found greedily by peeling dominant terms.

use crate::action::{is_invariant, GroupKind};
use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{QPoly, TorusPoly};
use crate::text;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

const EXPANSION_GUARD: usize = 4_000_000;

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(pool: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for idx in start..=pool.len().saturating_sub(needed) {
            current.push(pool[idx]);
            rec(pool, k, idx + 1, current, out);
            current.pop();
        }
    }
    if k <= pool.len() {
        rec(pool, k, 0, &mut current, &mut out);
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The expansion of `gamma_{s,i}` at rank `n`: the sum of
/// `w_{m_1}...w_{m_s} u_{l_1}...u_{l_i}` over disjoint index sets.
pub fn gamma_expand(n: usize, s: usize, i: usize) -> Result<QPoly> {
    if s + i > n {
        return Err(Error::GammaOutOfRange { s, i, rank: n });
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), QPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("expansion cache lock").get(&(n, s, i)) {
        return Ok(p.clone());
    }
    let size = binomial(n, s).saturating_mul(binomial(n - s, i));
    if size > EXPANSION_GUARD {
        return Err(Error::ResourceGuard {
            what: format!("expansion of gamma_{s}_{i} at rank {n}"),
            size,
            limit: EXPANSION_GUARD,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut p = QPoly::zero(n);
    for m_set in combinations(&all, s) {
        let rest: Vec<usize> = all.iter().copied().filter(|j| !m_set.contains(j)).collect();
        for l_set in combinations(&rest, i) {
            let mut m = Monomial::one(n);
            for &j in &m_set {
                m.w[j] = 1;
            }
            for &j in &l_set {
                m.u[j] = true;
            }
            p.add_term(m, crate::coeff::rat_int(1));
        }
    }
    cache
        .lock()
        .expect("expansion cache lock")
        .insert((n, s, i), p.clone());
    Ok(p)
}

/// The elementary symmetric polynomial `e_m = gamma_{m,0}`.
pub fn e_expand(n: usize, m: usize) -> Result<QPoly> {
    gamma_expand(n, m, 0)
}

/// How generator keys are rendered: `(s,0) -> e<s>`, `(0,1) -> u`,
/// `(s,i) -> <flag><s>_<i>`.
#[derive(Debug, Clone, Copy)]
pub struct NameScheme {
    pub e: &'static str,
    pub flag: &'static str,
    pub u: &'static str,
}

pub const SCHEME_U: NameScheme = NameScheme { e: "e", flag: "gamma", u: "u" };
pub const SCHEME_SP: NameScheme = NameScheme { e: "k", flag: "kappa", u: "u" };
pub const SCHEME_SO: NameScheme = NameScheme { e: "p", flag: "pi", u: "u" };

impl NameScheme {
    pub fn key_name(&self, s: usize, i: usize) -> String {
        if i == 0 {
            format!("{}{}", self.e, s)
        } else if s == 0 && i == 1 {
            self.u.to_string()
        } else {
            format!("{}{}_{}", self.flag, s, i)
        }
    }
}

/// A product of generators `prod gamma_{s,i}^{mult}`, stored as a sorted
/// multiset of `(s, i)` keys. `(s, 0)` keys are powers of `e_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenMonomial {
    n: usize,
    powers: BTreeMap<(usize, usize), u32>,
}

impl GenMonomial {
    pub fn one(n: usize) -> Self {
        GenMonomial { n, powers: BTreeMap::new() }
    }

    pub fn from_powers(
        n: usize,
        powers: impl IntoIterator<Item = ((usize, usize), u32)>,
    ) -> Result<Self> {
        let mut gm = GenMonomial::one(n);
        for ((s, i), mult) in powers {
            gm.mul_key(s, i, mult)?;
        }
        Ok(gm)
    }

    /// A single generator `gamma_{s,i}`.
    pub fn generator(n: usize, s: usize, i: usize) -> Result<Self> {
        GenMonomial::from_powers(n, [((s, i), 1)])
    }

    /// Multiply by `gamma_{s,i}^{mult}` in place.
    pub fn mul_key(&mut self, s: usize, i: usize, mult: u32) -> Result<()> {
        if s + i > self.n {
            return Err(Error::GammaOutOfRange { s, i, rank: self.n });
        }
        if mult == 0 || (s, i) == (0, 0) {
            return Ok(());
        }
        *self.powers.entry((s, i)).or_insert(0) += mult;
        Ok(())
    }

    pub fn times(&self, other: &GenMonomial) -> Result<GenMonomial> {
        if self.n != other.n {
            return Err(Error::RankMismatch { left: self.n, right: other.n });
        }
        let mut out = self.clone();
        for (&(s, i), &mult) in &other.powers {
            out.mul_key(s, i, mult)?;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    /// Keys with their multiplicities, sorted by `(s, i)`.
    pub fn powers(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.powers.iter().map(|(&k, &m)| (k, m))
    }

    /// Total degree of the expansion: each `gamma_{s,i}` has degree `s`.
    pub fn degree(&self) -> usize {
        self.powers.iter().map(|(&(s, _), &m)| s * m as usize).sum()
    }

    /// True when no key with `i >= 1` repeats and, sorted by `s`, each flag
    /// starts past the previous flag's `u`-interval: `s' > s + i`. Powers of
    /// the `e_m` never obstruct admissibility.
    pub fn is_admissible(&self) -> bool {
        let mut prev: Option<(usize, usize)> = None;
        for (&(s, i), &mult) in &self.powers {
            if i == 0 {
                continue;
            }
            if mult != 1 {
                return false;
            }
            if let Some((ps, pi)) = prev {
                if s <= ps + pi {
                    return false;
                }
            }
            prev = Some((s, i));
        }
        true
    }

    /// The formal product of the factors' dominant terms. For an admissible
    /// product this is the dominant term of the expansion; in general it is
    /// only used as a deterministic sort key.
    pub fn sort_monomial(&self) -> Monomial {
        let mut m = Monomial::one(self.n);
        for (&(s, i), &mult) in &self.powers {
            for slot in 0..s {
                m.w[slot] += mult;
            }
            for slot in s..s + i {
                m.u[slot] = true;
            }
        }
        m
    }

    /// Multiply out the expansions of the factors.
    pub fn expand_q(&self) -> Result<QPoly> {
        let mut out = QPoly::one(self.n);
        for (&(s, i), &mult) in &self.powers {
            let factor = gamma_expand(self.n, s, i)?;
            for _ in 0..mult {
                out = out.mul(&factor)?;
            }
        }
        Ok(out)
    }

    pub fn print(&self) -> String {
        self.print_with(&SCHEME_U)
    }

    pub fn print_with(&self, scheme: &NameScheme) -> String {
        if self.powers.is_empty() {
            return "1".to_string();
        }
        let mut keys: Vec<((usize, usize), u32)> = self.powers().collect();
        // e-powers first, then the flags, each by ascending index.
        keys.sort_by_key(|&((s, i), _)| (usize::from(i != 0), s, i));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|((s, i), mult)| {
                let name = scheme.key_name(s, i);
                if mult == 1 {
                    name
                } else {
                    format!("{name}^{mult}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// JSON form: the sorted list `[[s, i, mult], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.powers()
                .map(|((s, i), mult)| serde_json::json!([s, i, mult]))
                .collect(),
        )
    }

    pub fn from_json(n: usize, value: &serde_json::Value) -> Result<Self> {
        let rows = value.as_array().ok_or_else(|| Error::CacheCorrupt {
            key: "generator monomial".into(),
            reason: "expected an array".into(),
        })?;
        let mut powers = Vec::new();
        for row in rows {
            let triple = row
                .as_array()
                .filter(|t| t.len() == 3)
                .and_then(|t| {
                    Some((
                        t[0].as_u64()? as usize,
                        t[1].as_u64()? as usize,
                        t[2].as_u64()? as u32,
                    ))
                })
                .ok_or_else(|| Error::CacheCorrupt {
                    key: "generator monomial".into(),
                    reason: "expected [s, i, mult] rows".into(),
                })?;
            powers.push(((triple.0, triple.1), triple.2));
        }
        GenMonomial::from_powers(n, powers)
    }
}

/// A linear combination of generator products.
#[derive(Debug, Clone)]
pub struct GenPoly<C: CoeffRing> {
    n: usize,
    terms: HashMap<GenMonomial, C>,
}

impl<C: CoeffRing> PartialEq for GenPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}
impl<C: CoeffRing> Eq for GenPoly<C> {}

impl<C: CoeffRing> GenPoly<C> {
    pub fn zero(n: usize) -> Self {
        GenPoly { n, terms: HashMap::new() }
    }

    pub fn from_term(gm: GenMonomial, c: C) -> Self {
        let mut p = GenPoly::zero(gm.rank());
        p.add_term(gm, c);
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

    pub fn add_term(&mut self, gm: GenMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(gm) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&GenMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, gm: &GenMonomial) -> C {
        self.terms.get(gm).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in descending order of the factors' formal dominant product,
    /// which for admissible terms is the peel order of the decomposition.
    pub fn sorted_terms(&self) -> Vec<(&GenMonomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            b.0.sort_monomial()
                .cmp(&a.0.sort_monomial())
                .then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::RankMismatch { left: self.n, right: rhs.n });
        }
        let mut out = self.clone();
        for (gm, c) in &rhs.terms {
            out.add_term(gm.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(g, c)| (g.clone(), c.neg_ref())).collect();
        GenPoly { n: self.n, terms }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn map_coeffs<D: CoeffRing>(&self, f: impl Fn(&C) -> D) -> GenPoly<D> {
        let mut out = GenPoly::zero(self.n);
        for (gm, c) in &self.terms {
            out.add_term(gm.clone(), f(c));
        }
        out
    }

    /// Expand every generator product back into the torus ring.
    pub fn expand(&self) -> Result<TorusPoly<C>> {
        let mut out = TorusPoly::zero(self.n);
        for (gm, c) in &self.terms {
            let q = gm.expand_q()?;
            out = out.add(&q.map_coeffs(|r| c.scale(r)))?;
        }
        Ok(out)
    }

    pub fn print(&self) -> String {
        self.print_with(&SCHEME_U)
    }

    pub fn print_with(&self, scheme: &NameScheme) -> String {
        text::join_terms(self.sorted_terms().into_iter().map(|(gm, c)| {
            let mono = if gm.is_one() { String::new() } else { gm.print_with(scheme) };
            text::term_body(&mono, c)
        }))
    }
}

/// Check the local conditions for a monomial to be the greatest element of
/// its symmetric-group orbit.
pub fn check_orbit_maximal(m: &Monomial) -> Result<()> {
    let n = m.rank();
    let s = m.w.iter().filter(|&&a| a > 0).count();
    let fail = |reason: String| Err(Error::NotOrbitMaximal { reason });
    for slot in 0..n {
        let inside = slot < s;
        if inside && m.w[slot] == 0 {
            return fail(format!("w-support skips position {}", slot + 1));
        }
        if inside && slot > 0 && m.w[slot] > m.w[slot - 1] {
            return fail(format!("w-exponents increase at position {}", slot + 1));
        }
    }
    // Beyond the w-support the idempotents must fill a block starting at s+1.
    let mut seen_gap = false;
    for slot in s..n {
        if m.u[slot] {
            if seen_gap {
                return fail(format!("u-block beyond the w-support skips to position {}", slot + 1));
            }
        } else {
            seen_gap = true;
        }
    }
    // Within a block of equal w-exponents the u-flags must be decreasing.
    for slot in 1..s {
        if m.w[slot] == m.w[slot - 1] && m.u[slot] && !m.u[slot - 1] {
            return fail(format!(
                "u-flag at position {} precedes one at position {} with equal w-exponents",
                slot + 1,
                slot
            ));
        }
    }
    Ok(())
}

pub fn is_orbit_maximal(m: &Monomial) -> bool {
    check_orbit_maximal(m).is_ok()
}

/// Reference implementation by scanning the whole orbit; test oracle only.
pub fn orbit_maximal_scan(m: &Monomial) -> bool {
    GroupKind::Symmetric
        .elements(m.rank())
        .iter()
        .all(|g| g.apply_monomial(m).0 <= *m)
}

/// The unique admissible generator product whose expansion has dominant
/// term `m` (with coefficient 1), for an orbit-maximal `m`.
///
/// Each maximal run `[p, q]` of the idempotent positions forces the factor
/// `gamma_{p-1, q-p+1}`; the leftover `w`-exponent profile must then be
/// weakly decreasing and is realized by elementary symmetric factors.
pub fn factor_for_dominant(m: &Monomial) -> Result<GenMonomial> {
    check_orbit_maximal(m)?;
    let n = m.rank();
    let s = m.w.iter().filter(|&&a| a > 0).count();
    // Maximal runs of consecutive u-positions (0-based [start, end]).
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for slot in 0..n {
        if m.u[slot] {
            match runs.last_mut() {
                Some((_, end)) if *end + 1 == slot => *end = slot,
                _ => runs.push((slot, slot)),
            }
        }
    }
    let mut gm = GenMonomial::one(n);
    for &(start, end) in &runs {
        gm.mul_key(start, end - start + 1, 1)?;
    }
    // Forced profile: flags cover slot l once per run starting past it.
    let mut b = Vec::with_capacity(s);
    for l in 0..s {
        let covered = runs.iter().filter(|&&(start, _)| start > l).count();
        let a = m.w[l] as usize;
        if covered > a {
            return Err(Error::NotOrbitMaximal {
                reason: format!(
                    "forced flags cover position {} more often than its w-exponent",
                    l + 1
                ),
            });
        }
        b.push(a - covered);
    }
    for l in 1..s {
        if b[l] > b[l - 1] {
            return Err(Error::NotOrbitMaximal {
                reason: format!("leftover w-profile increases at position {}", l + 1),
            });
        }
    }
    for l in 0..s {
        let next = if l + 1 < s { b[l + 1] } else { 0 };
        let mult = (b[l] - next) as u32;
        gm.mul_key(l + 1, 0, mult)?;
    }
    debug_assert!(gm.is_admissible(), "forced factorization must be admissible");
    debug_assert_eq!(gm.sort_monomial(), *m);
    Ok(gm)
}

/// Decompose a symmetric polynomial into admissible generator products by
/// repeatedly peeling the dominant term of each homogeneous part. The
/// inverse of [`GenPoly::expand`] on symmetric inputs.
pub fn decompose<C: CoeffRing>(p: &TorusPoly<C>) -> Result<GenPoly<C>> {
    if !is_invariant(p, GroupKind::Symmetric)? {
        return Err(Error::NotInvariant { action: GroupKind::Symmetric.name().into() });
    }
    let mut out = GenPoly::zero(p.rank());
    for d in p.degrees() {
        let mut rest = p.homogeneous_part(d);
        while let Some((m, c)) = rest.dominant_term() {
            let m = m.clone();
            let c = c.clone();
            let gm = factor_for_dominant(&m)?;
            let expansion = gm.expand_q()?;
            rest = rest.sub(&expansion.map_coeffs(|r| c.scale(r)))?;
            if let Some((m2, _)) = rest.dominant_term() {
                if *m2 >= m {
                    return Err(Error::Internal(format!(
                        "dominant term did not decrease: {} stayed under {}",
                        text::print_monomial(m2),
                        text::print_monomial(&m),
                    )));
                }
            }
            out.add_term(gm, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::symmetrize;
    use crate::coeff::rat_int;
    use crate::text::{parse_qpoly, print_poly};

    #[test]
    fn expansions() {
        assert_eq!(print_poly(&gamma_expand(2, 1, 1).unwrap()), "w1*u2 + w2*u1");
        assert_eq!(print_poly(&gamma_expand(2, 2, 0).unwrap()), "w1*w2");
        assert_eq!(print_poly(&gamma_expand(2, 0, 0).unwrap()), "1");
        assert_eq!(print_poly(&gamma_expand(2, 0, 1).unwrap()), "u1 + u2");
        assert_eq!(print_poly(&gamma_expand(3, 0, 2).unwrap()), "u1*u2 + u1*u3 + u2*u3");
        assert!(matches!(
            gamma_expand(2, 2, 1),
            Err(Error::GammaOutOfRange { s: 2, i: 1, rank: 2 })
        ));
    }

    #[test]
    fn dominant_terms_of_generators() {
        for n in 1..=4 {
            for s in 0..=n {
                for i in 0..=(n - s) {
                    if s + i == 0 {
                        continue;
                    }
                    let g = gamma_expand(n, s, i).unwrap();
                    let (dom, c) = g.dominant_term().unwrap();
                    let expected = GenMonomial::generator(n, s, i).unwrap().sort_monomial();
                    assert_eq!(*dom, expected);
                    assert_eq!(*c, rat_int(1));
                }
            }
        }
    }

    #[test]
    fn admissibility() {
        let n = 4;
        let ok = GenMonomial::from_powers(n, [((0, 1), 1), ((2, 1), 1)]).unwrap();
        assert!(ok.is_admissible());
        let overlapping = GenMonomial::from_powers(n, [((0, 2), 1), ((2, 1), 1)]).unwrap();
        assert!(!overlapping.is_admissible());
        let squared = GenMonomial::from_powers(n, [((1, 1), 2)]).unwrap();
        assert!(!squared.is_admissible());
        let e_heavy = GenMonomial::from_powers(n, [((1, 0), 5), ((3, 0), 2), ((1, 2), 1)]).unwrap();
        assert!(e_heavy.is_admissible());
    }

    #[test]
    fn orbit_maximality_local_equals_scan() {
        for n in 1..=3 {
            for d in 0..=3 {
                for m in crate::action::monomials_of_degree(n, d, true) {
                    assert_eq!(
                        is_orbit_maximal(&m),
                        orbit_maximal_scan(&m),
                        "disagreement at {m:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn factorization_examples() {
        // w1*w2*u1*u2 is orbit-maximal and factors through the full u-run.
        let m = parse_qpoly(2, "w1*w2*u1*u2").unwrap().dominant_term().unwrap().0.clone();
        let gm = factor_for_dominant(&m).unwrap();
        assert_eq!(gm.print(), "e2*gamma0_2");

        // Dominant term of gamma_{1,1} itself.
        let m = parse_qpoly(2, "w1*u2").unwrap().dominant_term().unwrap().0.clone();
        assert_eq!(factor_for_dominant(&m).unwrap().print(), "gamma1_1");

        // A u-gap inside the w-support splits into two flags.
        let m = parse_qpoly(3, "w1^2*w2*u1*u3").unwrap().dominant_term().unwrap().0.clone();
        let gm = factor_for_dominant(&m).unwrap();
        assert_eq!(gm.print(), "e1*u*gamma2_1");

        // Not orbit-maximal: the u sits on the smaller exponent.
        let m = parse_qpoly(2, "w1*w2*u2").unwrap().dominant_term().unwrap().0.clone();
        assert!(factor_for_dominant(&m).is_err());
    }

    #[test]
    fn decompose_examples() {
        // (u1+u2)(w1*u2+w2*u1) = e1*gamma0_2 + gamma1_1.
        let p = parse_qpoly(2, "(1)*w1*u1*u2 + w2*u1*u2 + w1*u2 + w2*u1").unwrap();
        let d = decompose(&p).unwrap();
        assert_eq!(d.print(), "e1*gamma0_2 + gamma1_1");
        assert_eq!(d.expand().unwrap(), p);

        // u^2 = u + 2 gamma0_2 at n = 2.
        let u = gamma_expand(2, 0, 1).unwrap();
        let d = decompose(&u.mul(&u).unwrap()).unwrap();
        assert_eq!(d.print(), "2*gamma0_2 + u");

        // Non-symmetric input is rejected.
        assert!(matches!(
            decompose(&parse_qpoly(2, "w1").unwrap()),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn decompose_round_trip_on_symmetrized_inputs() {
        let n = 3;
        let seeds = [
            "w1^2*u2", "w1*w2*u3", "w1*u1*u2", "w1^3", "u1*u2*u3", "w1*w2*w3*u1",
            "2*w1^2*w2*u1*u3 - 3*w1*u2",
        ];
        for seed in seeds {
            let p = symmetrize(&parse_qpoly(n, seed).unwrap(), GroupKind::Symmetric).unwrap();
            let d = decompose(&p).unwrap();
            assert_eq!(d.expand().unwrap(), p, "round trip for seed {seed}");
            for (gm, _) in d.terms() {
                assert!(gm.is_admissible());
            }
        }
    }

    #[test]
    fn gen_monomial_json_round_trip() {
        let gm = GenMonomial::from_powers(4, [((1, 0), 3), ((0, 1), 1), ((2, 2), 1)]).unwrap();
        let v = gm.to_json();
        assert_eq!(v.to_string(), "[[0,1,1],[1,0,3],[2,2,1]]");
        assert_eq!(GenMonomial::from_json(4, &v).unwrap(), gm);
    }
}
