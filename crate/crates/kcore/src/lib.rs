//! Finitely generated subgroups of free products of two finite groups.
//!
//! A subgroup `H` of `G = A * B` (with `A`, `B` finite) is represented by a
//! finite complex of coset data: vertices stand for the cosets `Hg` that the
//! generators of `H` visit, and for each factor the vertices fall into
//! components carrying a stabilizer subgroup together with one canonical
//! right-coset coordinate per vertex. Everything else — membership testing,
//! the index of `H`, its Kurosh rank, and explicit normal subgroups witnessing
//! separation or non-trivial intersection — is computed from that structure
//! without ever materialising the (usually infinite) full coset graph.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] — finite factor groups given by multiplication tables, their
//!   subgroups and canonical right-coset representatives;
//! * [`word`] — words over the two factors, free-product reduction and
//!   cyclic reduction;
//! * [`complex`] — the core complex itself: folding a generator bouquet into
//!   coset-structured components, membership, index, pruning and rebasing;
//! * [`kurosh`] — the bipartite component graph and Kurosh rank;
//! * [`monodromy`] — partial vertex permutations induced by words;
//! * [`separation`] — rank-zero descent, separating witnesses `⟨⟨g⁶⟩⟩` and
//!   finite-index intersection witnesses;
//! * [`oracle`] — independent brute-force checks: ball enumeration, coset
//!   enumeration of the full cover, seeded random sampling of normal
//!   closures, and a spelling diagnostic;
//! * [`dot`] — Graphviz export.

pub mod complex;
pub mod dot;
pub mod group;
pub mod kurosh;
pub mod monodromy;
pub mod oracle;
pub mod separation;
pub mod word;

pub use complex::{build_core, CoreComplex, FactorComponent, Index, VertexId};
pub use dot::export_dot;
pub use group::{
    canonical_coset_rep, load_group_file, subgroup_closure, Factor, FactorGroup, GroupPair,
    GroupSpec, Subgroup,
};
pub use kurosh::{gamma_graph, kurosh_rank, GammaGraph, KuroshData};
pub use monodromy::{monodromy, rank, PartialVertexPermutation};
pub use oracle::{
    enumerate_ball, evaluate_recipe, full_cover_bfs, nielsen_free_rank, sample_closure,
    spelling_check, verify_separation, ClosureSample, FullCover, SampleParams, VerificationReport,
};
pub use separation::{
    boundary_vertices, find_rank_zero, intersection_witness, separating_witness, well_situate,
    IntersectionWitness, SeparationWitness, WITNESS_EXPONENT,
};
pub use word::{
    concat_reduce, cyclic_conjugates, cyclically_reduce, invert, parse_generators, parse_word,
    reduce, CyclicallyReducedWord, ReducedWord, Syllable, Word,
};

/// Crate-wide error type. The CLI maps input errors to exit code 2 and
/// property failures (nothing to witness) to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A group table failed validation; the message names the violated axiom.
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    /// A word failed to parse or referenced an out-of-range element.
    #[error("invalid word: {0}")]
    InvalidWord(String),
    /// A serialized core complex failed validation; the message names the rule.
    #[error("invalid core: {0}")]
    InvalidCore(String),
    /// Asked for a separating witness of a finite-index subgroup.
    #[error("finite index: no separating normal subgroup exists")]
    FiniteIndex,
    /// Asked for an intersection witness of an infinite-index subgroup.
    #[error("index infinite: intersection witness requires a finite-index subgroup")]
    InfiniteIndex,
    /// Asked for an intersection witness of the identity.
    #[error("word reduces to the identity")]
    IdentityWord,
    /// A core was requested for an empty generating list.
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
