//! Library-wide error type.

use crate::coeff::RingTag;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingTag, right: RingTag },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("polynomial is not homogeneous: degrees {lo} and {hi} both occur")]
    NotHomogeneous { lo: usize, hi: usize },

    #[error("polynomial is not invariant under {action}")]
    NotInvariant { action: String },

    #[error("invalid generator gamma_{s}_{i} at rank {rank}: requires s + i <= rank")]
    GammaOutOfRange { s: usize, i: usize, rank: usize },

    #[error("relation indices (s,i,t,j) = ({s},{i},{t},{j}) outside the window at rank {rank}")]
    RelationWindow { s: usize, i: usize, t: usize, j: usize, rank: usize },

    #[error("monomial is not orbit-maximal: {reason}")]
    NotOrbitMaximal { reason: String },

    #[error("no admissible product has dominant term {monomial}")]
    NoFactorization { monomial: String },

    #[error("substitution image for {what} is invalid: {reason}")]
    BadSubstitution { what: String, reason: String },

    #[error("{group} is unsupported: {reason}")]
    UnsupportedGroup { group: String, reason: String },

    #[error("map {kind} is undefined for rank {rank}: {reason}")]
    UnsupportedMap { kind: String, rank: usize, reason: String },

    #[error("relation cache entry {key} is corrupt: {reason}")]
    CacheCorrupt { key: String, reason: String },

    #[error("cache i/o for {key}: {source}")]
    CacheIo {
        key: String,
        #[source]
        source: std::io::Error,
    },

    #[error("stem elements live on different levels")]
    StemLevelMismatch,

    #[error("stem addition across bidegrees: ({k1},{n1}) vs ({k2},{n2})")]
    StemBidegreeMismatch { k1: i64, n1: i64, k2: i64, n2: i64 },

    #[error("unknown stem class name: {name}")]
    StemUnknownName { name: String },

    #[error("resource guard tripped for {what}: size {size} exceeds limit {limit}")]
    ResourceGuard { what: String, size: usize, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
