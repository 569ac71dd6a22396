//! The partial permutation a word induces on core vertices.
//!
//! Reading a reduced word from a vertex either stays inside the complex all
//! the way (the vertex is in the domain) or falls off at a missing
//! transition. Because single-syllable steps are injective, the whole map is
//! a partial bijection of the vertex set.

use crate::complex::{CoreComplex, VertexId};
use crate::word::{invert, reduce, ReducedWord, Word};

/// The monodromy data of one word: the set of `(v, v·w)` pairs over all
/// vertices `v` whose lift of `w` stays inside the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialVertexPermutation {
    word: ReducedWord,
    /// Sorted by domain vertex; both projections are injective.
    pairs: Vec<(VertexId, VertexId)>,
}

impl PartialVertexPermutation {
    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn dom(&self) -> Vec<VertexId> {
        self.pairs.iter().map(|&(v, _)| v).collect()
    }

    pub fn ran(&self) -> Vec<VertexId> {
        let mut r: Vec<VertexId> = self.pairs.iter().map(|&(_, w)| w).collect();
        r.sort_unstable();
        r
    }

    /// Image of a single vertex, when defined.
    pub fn apply(&self, v: VertexId) -> Option<VertexId> {
        self.pairs
            .binary_search_by_key(&v, |&(d, _)| d)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// True when the map is defined everywhere and is the identity.
    pub fn is_identity_on(&self, vertex_count: usize) -> bool {
        self.pairs.len() == vertex_count && self.pairs.iter().all(|&(v, w)| v == w)
    }
}

/// Monodromy of `w` (reduced internally) on the vertices of `c`.
pub fn monodromy(c: &CoreComplex, w: &Word) -> PartialVertexPermutation {
    let red = reduce(c.groups(), w);
    let mut pairs = Vec::new();
    for v in 0..c.vertex_count() {
        let (path, complete) = c.lift(v, &red);
        if complete {
            pairs.push((v, *path.last().unwrap()));
        }
    }
    debug_assert!({
        let mut ran: Vec<VertexId> = pairs.iter().map(|&(_, w)| w).collect();
        ran.sort_unstable();
        ran.windows(2).all(|p| p[0] != p[1])
    });
    PartialVertexPermutation { word: red, pairs }
}

/// Number of vertices whose lift of `w` stays inside the complex.
pub fn rank(c: &CoreComplex, w: &Word) -> usize {
    monodromy(c, w).rank()
}

/// Rank of a word already in reduced form, without re-reducing.
pub fn rank_reduced(c: &CoreComplex, w: &ReducedWord) -> usize {
    (0..c.vertex_count()).filter(|&v| c.lift(v, w).1).count()
}

/// The inverse partial permutation, which is the monodromy of the inverse
/// word.
pub fn inverse(c: &CoreComplex, p: &PartialVertexPermutation) -> PartialVertexPermutation {
    let word = invert(c.groups(), p.word());
    let mut pairs: Vec<(VertexId, VertexId)> = p.pairs().iter().map(|&(v, w)| (w, v)).collect();
    pairs.sort_unstable();
    PartialVertexPermutation { word, pairs }
}
