//! Exact computer algebra for rational `C2`-equivariant characteristic class
//! rings: symmetric decomposition over idempotent torus rings, ring
//! presentations for the classical families, induced maps, and the
//! zero-dimensional stable stems.

pub mod action;
pub mod basis;
pub mod coeff;
pub mod error;
pub mod gamma;
pub mod linalg;
pub mod maps;
pub mod minimal;
pub mod monomial;
pub mod pair;
pub mod par;
pub mod poly;
pub mod present;
pub mod relations;
pub mod stems;
pub mod subst;
pub mod text;

pub use action::{invariant_dimension, is_invariant, symmetrize, GroupKind, SignedPerm};
pub use basis::{basis, burnside_basis, dim_u, partition_p};
pub use coeff::{rat, rat_int, BurnsideCoeff, CoeffRing, Rational, RingTag};
pub use error::{Error, Result};
pub use gamma::{decompose, factor_for_dominant, gamma_expand, GenMonomial, GenPoly};
pub use maps::{
    conjecture_evidence, conjugation_map, induced_map, stable_classes, stable_classes_fixed,
    stable_forget_correspondence, verify_closed_form, ClosedFormReport, ConjectureEvidence,
    FormStatus, MapImage, MapKind, MapTarget, RingMapResult, ALL_MAP_KINDS,
};
pub use minimal::{generator_count, minimality_certificate, MinimalityReport};
pub use monomial::Monomial;
pub use pair::PairPoly;
pub use poly::{BPoly, DegreeView, QPoly, TorusPoly};
pub use present::{
    graded_dimension, o2_graded_dimension, o_even_h0_dimension, presentation, restriction,
    su_check, torus_realization, Family, GenInfo, GroupId, Presentation, RestrictionData, SuReport,
};
pub use relations::{relation, relation_set, RelationCache, RelationEntry};
pub use stems::{
    circle_comparison, parse_stem, res, res_tr, stem_group, stem_mul, tr, weyl, CircleComparison,
    MackeyName, StemBasisClass, StemElement, StemGroupDesc, StemLevel,
};
pub use subst::Substitution;
