//! Product relations between the invariant generators: for every index
//! quadruple with overlapping `u`-intervals the product `gamma_{s,i} *
//! gamma_{t,j}` rewrites as a binomial multiple of `e_t * gamma_{s,m}`,
//! `m = min(i+j, n-s)`, plus an integer-coefficient tail of admissible
//! products. The leading coefficient is the pair count
//! `C(s+m-t, s+i-t) * C(s+i-t, i+j-m)`, which collapses to the single
//! binomial `C(i+j+s-t, j)` whenever `i+j+s <= n`. Entries are computed by
//! decomposing the expanded product and can be cached on disk.

use crate::coeff::{rat_int, Rational};
use crate::error::{Error, Result};
use crate::gamma::{decompose, gamma_expand, GenMonomial, GenPoly, NameScheme, SCHEME_U};
use crate::par::par_map;
use num::traits::One;
use std::path::{Path, PathBuf};

fn binomial_rat(n: usize, k: usize) -> Rational {
    if k > n {
        return rat_int(0);
    }
    let mut acc = Rational::one();
    for j in 0..k.min(n - k) {
        acc = acc * rat_int((n - j) as i64) / rat_int((j + 1) as i64);
    }
    acc
}

/// One rewriting rule `gamma_{s,i} * gamma_{t,j} = lead_coeff * lead + tail`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationEntry {
    n: usize,
    s: usize,
    i: usize,
    t: usize,
    j: usize,
    lead_coeff: Rational,
    lead: GenMonomial,
    tail: GenPoly<Rational>,
}

impl RelationEntry {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> (usize, usize, usize, usize) {
        (self.s, self.i, self.t, self.j)
    }

    /// The leading coefficient `C(s+m-t, s+i-t) * C(s+i-t, i+j-m)` where
    /// `m = min(i+j, n-s)`; equal to `C(i+j+s-t, j)` when `i+j+s <= n`.
    pub fn lead_coeff(&self) -> &Rational {
        &self.lead_coeff
    }

    /// The leading product `e_t * gamma_{s, min(i+j, n-s)}`.
    pub fn lead(&self) -> &GenMonomial {
        &self.lead
    }

    pub fn tail(&self) -> &GenPoly<Rational> {
        &self.tail
    }

    /// The left-hand product as a generator monomial.
    pub fn lhs(&self) -> GenMonomial {
        GenMonomial::from_powers(self.n, [((self.s, self.i), 1), ((self.t, self.j), 1)])
            .expect("window-checked indices")
    }

    /// The full right-hand side `lead_coeff * lead + tail`.
    pub fn rhs(&self) -> GenPoly<Rational> {
        GenPoly::from_term(self.lead.clone(), self.lead_coeff.clone())
            .add(&self.tail)
            .expect("same rank")
    }

    pub fn print(&self) -> String {
        self.print_with(&SCHEME_U)
    }

    pub fn print_with(&self, scheme: &NameScheme) -> String {
        format!(
            "{} = {}",
            self.lhs().print_with(scheme),
            self.rhs().print_with(scheme)
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tail: Vec<serde_json::Value> = self
            .tail
            .sorted_terms()
            .into_iter()
            .map(|(gm, c)| serde_json::json!([c.to_string(), gm.to_json()]))
            .collect();
        serde_json::json!({
            "n": self.n,
            "s": self.s,
            "i": self.i,
            "t": self.t,
            "j": self.j,
            "lead_coeff": self.lead_coeff.to_string(),
            "lead": self.lead.to_json(),
            "tail": tail,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let corrupt = |reason: &str| Error::CacheCorrupt {
            key: "relation entry".into(),
            reason: reason.into(),
        };
        let get = |field: &str| value.get(field).ok_or_else(|| corrupt("missing field"));
        let get_idx = |field: &str| -> Result<usize> {
            get(field)?
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| corrupt("index is not an integer"))
        };
        let n = get_idx("n")?;
        let (s, i, t, j) = (get_idx("s")?, get_idx("i")?, get_idx("t")?, get_idx("j")?);
        check_window(n, s, i, t, j)?;
        let lead_coeff: Rational = get("lead_coeff")?
            .as_str()
            .and_then(|txt| txt.parse().ok())
            .ok_or_else(|| corrupt("bad leading coefficient"))?;
        let lead = GenMonomial::from_json(n, get("lead")?)?;
        let mut tail = GenPoly::zero(n);
        for row in get("tail")?.as_array().ok_or_else(|| corrupt("tail is not an array"))? {
            let pair = row.as_array().filter(|p| p.len() == 2).ok_or_else(|| corrupt("bad tail row"))?;
            let c: Rational = pair[0]
                .as_str()
                .and_then(|txt| txt.parse().ok())
                .ok_or_else(|| corrupt("bad tail coefficient"))?;
            tail.add_term(GenMonomial::from_json(n, &pair[1])?, c);
        }
        Ok(RelationEntry { n, s, i, t, j, lead_coeff, lead, tail })
    }
}

fn check_window(n: usize, s: usize, i: usize, t: usize, j: usize) -> Result<()> {
    let ok = s <= t && t <= s + i && i >= 1 && s + i <= n && j >= 1 && t + j <= n;
    if ok {
        Ok(())
    } else {
        Err(Error::RelationWindow { s, i, t, j, rank: n })
    }
}

/// All quadruples `(s, i, t, j)` of the overlap window at rank `n`, ordered
/// by ascending `(s, t, i, j)`.
pub fn relation_window(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for s in 0..n {
        for t in s..=n.saturating_sub(1) {
            for i in 1..=(n - s) {
                if t > s + i {
                    continue;
                }
                for j in 1..=(n - t) {
                    out.push((s, i, t, j));
                }
            }
        }
    }
    out
}

/// The closed-form leading coefficient of the relation at `(s, i, t, j)`:
/// with `m = min(i+j, n-s)` it counts the ways the two `u`-index sets can
/// tile the block right after position `s`, giving
/// `C(s+m-t, s+i-t) * C(s+i-t, i+j-m)`.
pub fn lead_coeff_formula(n: usize, s: usize, i: usize, t: usize, j: usize) -> Rational {
    let m = (i + j).min(n - s);
    binomial_rat(s + m - t, s + i - t) * binomial_rat(s + i - t, i + j - m)
}

/// Compute one relation entry from scratch.
pub fn relation(n: usize, s: usize, i: usize, t: usize, j: usize) -> Result<RelationEntry> {
    check_window(n, s, i, t, j)?;
    let product = gamma_expand(n, s, i)?.mul(&gamma_expand(n, t, j)?)?;
    let rhs = decompose(&product)?;
    let m = (i + j).min(n - s);
    let lead = GenMonomial::from_powers(n, [((t, 0), 1), ((s, m), 1)])?;
    let lead_coeff = lead_coeff_formula(n, s, i, t, j);
    let measured = rhs.coeff(&lead);
    if measured != lead_coeff {
        return Err(Error::Internal(format!(
            "leading coefficient of gamma{s}_{i}*gamma{t}_{j} at rank {n} is {measured}, expected {lead_coeff}"
        )));
    }
    match rhs.sorted_terms().first() {
        Some((top, _)) if **top == lead => {}
        other => {
            return Err(Error::Internal(format!(
                "leading product of gamma{s}_{i}*gamma{t}_{j} at rank {n} is {:?}, expected {}",
                other.map(|(gm, _)| gm.print()),
                lead.print()
            )));
        }
    }
    let tail = rhs.sub(&GenPoly::from_term(lead.clone(), lead_coeff.clone()))?;
    for (gm, c) in tail.terms() {
        if !c.is_integer() {
            return Err(Error::Internal(format!(
                "non-integer tail coefficient {c} at {} in gamma{s}_{i}*gamma{t}_{j}",
                gm.print()
            )));
        }
    }
    Ok(RelationEntry { n, s, i, t, j, lead_coeff, lead, tail })
}

/// Compute through the cache when one is configured.
pub fn relation_cached(
    cache: &RelationCache,
    n: usize,
    s: usize,
    i: usize,
    t: usize,
    j: usize,
) -> Result<RelationEntry> {
    if let Some(entry) = cache.load(n, s, i, t, j)? {
        return Ok(entry);
    }
    let entry = relation(n, s, i, t, j)?;
    cache.store(&entry)?;
    Ok(entry)
}

/// Every relation of the window at rank `n`, in canonical order. Entries are
/// computed independently (in parallel under the default feature) and merged
/// in window order.
pub fn relation_set(n: usize, cache: &RelationCache) -> Result<Vec<RelationEntry>> {
    let quads = relation_window(n);
    par_map(quads, |(s, i, t, j)| relation_cached(cache, n, s, i, t, j))
        .into_iter()
        .collect()
}

/// Disk store for relation entries, one JSON file per quadruple under
/// `<dir>/rel/n<k>/s<s>i<i>t<t>j<j>.json`, written atomically.
#[derive(Debug, Clone, Default)]
pub struct RelationCache {
    dir: Option<PathBuf>,
}

impl RelationCache {
    pub fn disabled() -> Self {
        RelationCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        RelationCache { dir: Some(dir.into()) }
    }

    /// Use the `EQUICHAR_CACHE` environment variable when set and nonempty.
    pub fn from_env() -> Self {
        match std::env::var_os("EQUICHAR_CACHE") {
            Some(dir) if !dir.is_empty() => RelationCache::at(PathBuf::from(dir)),
            _ => RelationCache::disabled(),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(&self, n: usize, s: usize, i: usize, t: usize, j: usize) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|dir| dir.join("rel").join(format!("n{n}")).join(format!("s{s}i{i}t{t}j{j}.json")))
    }

    fn key(n: usize, s: usize, i: usize, t: usize, j: usize) -> String {
        format!("relation n={n} (s,i,t,j)=({s},{i},{t},{j})")
    }

    pub fn load(&self, n: usize, s: usize, i: usize, t: usize, j: usize) -> Result<Option<RelationEntry>> {
        let Some(path) = self.path(n, s, i, t, j) else {
            return Ok(None);
        };
        let text = match std::fs::read_to_string(&path) {
            Ok(text) => text,
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(err) => return Err(Error::CacheIo { key: Self::key(n, s, i, t, j), source: err }),
        };
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|err| Error::CacheCorrupt {
            key: Self::key(n, s, i, t, j),
            reason: err.to_string(),
        })?;
        let entry = RelationEntry::from_json(&value)?;
        if (entry.n, entry.s, entry.i, entry.t, entry.j) != (n, s, i, t, j) {
            return Err(Error::CacheCorrupt {
                key: Self::key(n, s, i, t, j),
                reason: "entry indices do not match its path".into(),
            });
        }
        Ok(Some(entry))
    }

    pub fn store(&self, entry: &RelationEntry) -> Result<()> {
        let (n, s, i, t, j) = (entry.n, entry.s, entry.i, entry.t, entry.j);
        let Some(path) = self.path(n, s, i, t, j) else {
            return Ok(());
        };
        let io_err = |err| Error::CacheIo { key: Self::key(n, s, i, t, j), source: err };
        let parent = path.parent().expect("cache paths have parents");
        std::fs::create_dir_all(parent).map_err(io_err)?;
        let tmp = tmp_sibling(&path);
        let payload = serde_json::to_string_pretty(&entry.to_json()).expect("value serializes");
        std::fs::write(&tmp, payload).map_err(io_err)?;
        std::fs::rename(&tmp, &path).map_err(io_err)?;
        Ok(())
    }
}

fn tmp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().expect("cache file name").to_os_string();
    name.push(format!(".{}.tmp", std::process::id()));
    path.with_file_name(name)
}
