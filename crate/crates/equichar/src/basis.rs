//! Module bases for the invariant ring: admissible generator products of a
//! fixed degree, the partition counts behind their dimension formulas, and
//! the Burnside-level variant where idempotent powers replace the flag at
//! position zero.

use crate::gamma::GenMonomial;

/// Number of partitions of `m` into at most `n` parts, via the recursion
/// `p(n, m) = p(n, m-n) + p(n-1, m)`.
pub fn partition_p(n: usize, m: usize) -> u64 {
    let mut table = vec![vec![0u64; m + 1]; n + 1];
    table[0][0] = 1;
    for k in 1..=n {
        for v in 0..=m {
            table[k][v] = table[k - 1][v] + if v >= k { table[k][v - k] } else { 0 };
        }
    }
    table[n][m]
}

/// Rational dimension of the degree-`m` piece of the rank-`n` ring over the
/// Burnside coefficients: `p(n,m) + sum_{i,j} p(i,j) p(n-i, m-j)`.
pub fn dim_u(n: usize, m: usize) -> u64 {
    let mut total = partition_p(n, m);
    for i in 0..=n {
        for j in 0..=m {
            total += partition_p(i, j) * partition_p(n - i, m - j);
        }
    }
    total
}

// All flag chains ((s1,i1),...,(sr,ir)) with s ascending, each i >= 1,
// s+i <= n, consecutive gaps s+i < s', total flag degree <= max_degree,
// and s >= min_s throughout.
fn flag_chains(n: usize, max_degree: usize, min_s: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for s in min_s..n {
        if s > max_degree {
            break;
        }
        for i in 1..=(n - s) {
            for mut chain in flag_chains(n, max_degree - s, s + i + 1) {
                chain.insert(0, (s, i));
                out.push(chain);
            }
        }
    }
    out
}

// All sparse exponent lists [(s, r_s)] with r_s > 0 and sum s*r_s = d,
// over positions 1..=n.
fn e_fills(n: usize, d: usize) -> Vec<Vec<(usize, u32)>> {
    fn rec(s: usize, d: usize, acc: &mut Vec<(usize, u32)>, out: &mut Vec<Vec<(usize, u32)>>) {
        if s == 0 {
            if d == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for r in 0..=(d / s) {
            if r > 0 {
                acc.push((s, r as u32));
            }
            rec(s - 1, d - s * r, acc, out);
            if r > 0 {
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn assemble(
    n: usize,
    chains: &[Vec<(usize, usize)>],
    with_idempotent_powers: bool,
    d: usize,
) -> Vec<GenMonomial> {
    let mut out = Vec::new();
    for chain in chains {
        let flag_degree: usize = chain.iter().map(|(s, _)| s).sum();
        if flag_degree > d {
            continue;
        }
        let a_max = if with_idempotent_powers {
            chain.first().map(|&(s, _)| s - 1).unwrap_or(n)
        } else {
            0
        };
        for fill in e_fills(n, d - flag_degree) {
            for a in 0..=a_max {
                let powers = chain
                    .iter()
                    .map(|&(s, i)| ((s, i), 1u32))
                    .chain(fill.iter().map(|&(s, r)| ((s, 0), r)))
                    .chain((a > 0).then_some(((0, 1), a as u32)));
                let gm = GenMonomial::from_powers(n, powers).expect("indices are in range");
                debug_assert!(with_idempotent_powers || gm.is_admissible());
                out.push(gm);
            }
        }
    }
    out.sort_by(|x, y| (y.sort_monomial(), y).cmp(&(x.sort_monomial(), x)));
    out
}

/// All admissible generator products of degree `d` at rank `n`, in
/// descending dominance order. Their expansions form a basis of the
/// degree-`d` invariant piece.
pub fn basis(n: usize, d: usize) -> Vec<GenMonomial> {
    assemble(n, &flag_chains(n, d, 0), false, d)
}

/// The Burnside-level counterpart: products `u^a * e-part * flags` with
/// `0 <= a <= n`, every flag at position `s > a`, and the same gap rule
/// between flags. Same cardinality as `basis(n, d)`.
pub fn burnside_basis(n: usize, d: usize) -> Vec<GenMonomial> {
    assemble(n, &flag_chains(n, d, 1), true, d)
}

/// Count with weight 2 for elements free of idempotent content (their
/// `x`-multiples stay independent) and weight 1 otherwise; agrees with
/// `dim_u` on both basis variants.
pub fn weighted_count(elems: &[GenMonomial]) -> u64 {
    elems
        .iter()
        .map(|gm| if gm.powers().all(|((_, i), _)| i == 0) { 2 } else { 1 })
        .sum()
}
