//! Separating witnesses: words whose normal closure misses a subgroup.
//!
//! For an infinite-index subgroup presented by its core complex, some
//! transition at some vertex is missing. Starting from a word that uses one
//! missing transition at the base, a descent loop multiplies on the right to
//! knock vertices out of the domain of the monodromy one at a time, ending
//! with a cyclically reduced word `g` of monodromy rank zero. No element of
//! the normal closure of any power of `g` then lies in the subgroup except
//! the identity.
//!
//! For a finite-index subgroup the complex is complete and the roles flip:
//! every word acts as a genuine permutation of the vertices, and repeating a
//! cyclically reduced word until its permutation is trivial produces an
//! infinite-order element of the subgroup, witnessing that the intersection
//! with the cyclic subgroup it generates is nontrivial.

use crate::complex::{CoreComplex, VertexId};
use crate::monodromy::{monodromy, rank_reduced};
use crate::word::{
    concat_reduce, invert, reduce, CyclicallyReducedWord, ReducedWord, Syllable, Word,
};
use crate::{Error, Result};

/// The exponent applied to the witness before taking the normal closure.
/// Six is enough for every pair of factor groups.
pub const WITNESS_EXPONENT: u32 = 6;

/// Vertex/syllable pairs with no transition, in vertex order then canonical
/// syllable order. Empty exactly when the complex is complete.
pub fn boundary_vertices(c: &CoreComplex) -> Vec<(VertexId, Syllable)> {
    let mut out = Vec::new();
    for v in 0..c.vertex_count() {
        for s in c.groups().syllables() {
            if c.trans(v, s).is_none() {
                out.push((v, s));
            }
        }
    }
    out
}

/// A separating witness for an infinite-index subgroup: the cyclically
/// reduced word `g`, the descent that produced it, and the conjugator used
/// if the complex had to be rebased to put a missing transition at the
/// base.
#[derive(Debug, Clone)]
pub struct SeparationWitness {
    /// Cyclically reduced word of monodromy rank zero on the rebased
    /// complex.
    pub g: CyclicallyReducedWord,
    /// Power of `g` whose normal closure avoids the subgroup.
    pub exponent: u32,
    /// Successive right multiplications with their monodromy ranks; the
    /// ranks decrease strictly to zero.
    pub descent_trace: Vec<(ReducedWord, usize)>,
    /// Word `c` such that the subgroup read off the rebased complex is
    /// `c·H·c⁻¹`. Empty when no rebase was needed.
    pub rebase_conjugator: ReducedWord,
}

/// Rebase the complex so its base vertex is missing a transition.
///
/// Returns the rebased complex together with the conjugating word: reading
/// the new complex's loops gives `c·H·c⁻¹` where `c` is the returned word.
/// Fails with [`Error::FiniteIndex`] when the complex is complete.
pub fn well_situate(c: &CoreComplex) -> Result<(CoreComplex, ReducedWord)> {
    let boundary = boundary_vertices(c);
    let (v, _) = *boundary.first().ok_or(Error::FiniteIndex)?;
    if v == c.base() {
        return Ok((c.clone(), ReducedWord::empty()));
    }
    // Loops at v read the words c·h·c⁻¹ where c labels a path from v back
    // to the old base.
    let conjugator = c
        .reduced_path(v, c.base(), None)
        .expect("core complexes are connected");
    Ok((c.rebase(v), conjugator))
}

/// First syllable in canonical order with no transition at the base.
fn first_missing_at_base(c: &CoreComplex) -> Option<Syllable> {
    c.groups()
        .syllables()
        .into_iter()
        .find(|&s| c.trans(c.base(), s).is_none())
}

/// Drive a word's monodromy rank to zero by right multiplication.
///
/// Requires a missing transition at the base vertex (see [`well_situate`]).
/// Returns the resulting cyclically reduced word and the trace of
/// intermediate words with their strictly decreasing ranks.
pub fn find_rank_zero(
    c: &CoreComplex,
) -> Result<(CyclicallyReducedWord, Vec<(ReducedWord, usize)>)> {
    let x0 = first_missing_at_base(c).ok_or(Error::FiniteIndex)?;
    let f0 = x0.tag;
    let f1 = f0.other();
    let groups = c.groups();
    let pad = ReducedWord::single(Syllable::new(f1, 1));
    let x0_word = ReducedWord::single(x0);

    // The working word always ends with a syllable in the factor opposite
    // x0, so appending x0 or a path starting in that factor never cancels.
    let mut g = pad.clone();
    let mut trace = Vec::new();
    loop {
        let m = monodromy(c, &g.as_word());
        trace.push((g.clone(), m.rank()));
        if m.rank() == 0 {
            break;
        }
        let &(v, image) = m.pairs().first().unwrap();
        g = if image == c.base() {
            concat_reduce(groups, &g, &x0_word)
        } else {
            // Route the surviving vertex back to the base first, entering
            // through the factor of x0 so the appended x0 cannot cancel.
            let q = c
                .reduced_path(image, c.base(), Some(f0))
                .expect("a complete path into the base exists from every vertex");
            let gq = concat_reduce(groups, &g, &q);
            concat_reduce(groups, &gq, &x0_word)
        };
        // Keep the invariant that g ends opposite to x0's factor.
        g = concat_reduce(groups, &g, &pad);
        debug_assert_eq!(g.last().map(|s| s.tag), Some(f1));
        debug_assert!(v < c.vertex_count());
    }

    // One more x0 makes the word start in F1 and end in F0: cyclically
    // reduced of length at least two. Appending it keeps rank zero because
    // the domain only shrinks under right multiplication by a reduced
    // extension.
    let g = concat_reduce(groups, &g, &x0_word);
    debug_assert_eq!(rank_reduced(c, &g), 0);
    let g = CyclicallyReducedWord::new(g).expect("ends in distinct factors");
    debug_assert!(g.len() >= 2);
    Ok((g, trace))
}

/// Produce a separating witness for the subgroup presented by `c`.
///
/// The witness `g` is cyclically reduced with monodromy rank zero on the
/// rebased complex; the normal closure of `g^exponent` intersects the
/// subgroup trivially. Fails with [`Error::FiniteIndex`] when the subgroup
/// has finite index, in which case no such witness exists.
pub fn separating_witness(c: &CoreComplex) -> Result<SeparationWitness> {
    let (situated, conjugator) = well_situate(c)?;
    let (g, descent_trace) = find_rank_zero(&situated)?;
    Ok(SeparationWitness {
        g,
        exponent: WITNESS_EXPONENT,
        descent_trace,
        rebase_conjugator: conjugator,
    })
}

/// A nontrivial element of the subgroup that is provably of infinite order,
/// witnessing a nontrivial intersection with the cyclic group it generates.
#[derive(Debug, Clone)]
pub struct IntersectionWitness {
    /// The witness element, a power of a cyclically reduced word.
    pub h: ReducedWord,
    /// `h` as a product of conjugates: pairs `(t, e)` meaning `t·x^e·t⁻¹`,
    /// multiplied left to right.
    pub expression: Vec<(ReducedWord, i8)>,
}

/// For a finite-index subgroup and a nonidentity `x`, find a power of a
/// conjugate-product of `x` that lies in the subgroup.
///
/// Fails with [`Error::InfiniteIndex`] when the complex is not complete and
/// with [`Error::IdentityWord`] when `x` reduces to the identity.
pub fn intersection_witness(c: &CoreComplex, x: &Word) -> Result<IntersectionWitness> {
    if c.index() == crate::complex::Index::Infinite {
        return Err(Error::InfiniteIndex);
    }
    let groups = c.groups();
    let red = reduce(groups, x);
    if red.is_empty() {
        return Err(Error::IdentityWord);
    }

    // Build a cyclically reduced word z of length ≥ 2 from x: either x
    // itself, or t·x·t⁻¹·x for the first syllable t that works. When the
    // reduction of x starts and ends in the same factor, any syllable from
    // the other factor works and no cancellation occurs.
    let (z, base_expression): (CyclicallyReducedWord, Vec<(ReducedWord, i8)>) =
        match CyclicallyReducedWord::new(red.clone()) {
            Some(z) if z.len() >= 2 => (z, vec![(ReducedWord::empty(), 1)]),
            _ => {
                let mut found = None;
                for t in groups.syllables() {
                    let tw = ReducedWord::single(t);
                    let conj = conjugate(groups, &tw, &red);
                    let cand = concat_reduce(groups, &conj, &red);
                    if let Some(z) = CyclicallyReducedWord::new(cand) {
                        if z.len() >= 2 {
                            found = Some((z, tw));
                            break;
                        }
                    }
                }
                let (z, tw) = found.expect("a syllable from the opposite factor always works");
                (z, vec![(tw, 1), (ReducedWord::empty(), 1)])
            }
        };

    // z acts as a genuine permutation of the vertices; its order k is the
    // least power fixing every vertex, so z^k lifts to a loop at the base.
    let n = c.vertex_count();
    let zw = z.as_reduced().as_word();
    let mut k = 1usize;
    let mut acc = monodromy(c, &zw);
    while !acc.is_identity_on(n) {
        let next_word = concat_reduce(groups, acc.word(), z.as_reduced());
        acc = monodromy(c, &next_word.as_word());
        k += 1;
        assert!(k <= (1..=n).product::<usize>(), "order exceeds n!");
    }

    let h = z.repeat(k);
    debug_assert!(c.member(&h.as_word()));
    let mut expression = Vec::with_capacity(base_expression.len() * k);
    for _ in 0..k {
        expression.extend(base_expression.iter().cloned());
    }
    Ok(IntersectionWitness { h, expression })
}

/// Evaluate a conjugate-product expression back into a reduced word.
pub fn evaluate_expression(
    c: &CoreComplex,
    x: &Word,
    expression: &[(ReducedWord, i8)],
) -> ReducedWord {
    let groups = c.groups();
    let red = reduce(groups, x);
    let x_inv = invert(groups, &red);
    let mut acc = ReducedWord::empty();
    for (t, e) in expression {
        let body = if *e >= 0 { &red } else { &x_inv };
        let conj = conjugate(groups, t, body);
        acc = concat_reduce(groups, &acc, &conj);
    }
    acc
}

/// `t·w·t⁻¹` as a reduced word.
fn conjugate(groups: &crate::group::GroupPair, t: &ReducedWord, w: &ReducedWord) -> ReducedWord {
    let tw = concat_reduce(groups, t, w);
    concat_reduce(groups, &tw, &invert(groups, t))
}
