//! Words over a free product `A * B` and their normal forms.
//!
//! A reduced word alternates between the two factors and contains no identity
//! syllables; reduced words are exactly the normal forms of group elements.
//! A cyclically reduced word is additionally reduced "around the corner":
//! its first and last syllables come from different factors (or its length is
//! at most 1), which makes every power of it reduced as written.

use std::fmt;

use crate::group::{Factor, GroupPair, IDENTITY};
use crate::{Error, Result};

/// One letter of a word: a non-identity element of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub tag: Factor,
    pub elem: usize,
}

impl Syllable {
    pub fn new(tag: Factor, elem: usize) -> Syllable {
        assert_ne!(elem, IDENTITY, "syllables carry non-identity elements");
        Syllable { tag, elem }
    }

    pub fn inverse(self, groups: &GroupPair) -> Syllable {
        Syllable::new(self.tag, groups.factor(self.tag).inv(self.elem))
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.tag.letter(), self.elem)
    }
}

/// An arbitrary (not necessarily reduced) word.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn new(syllables: Vec<Syllable>) -> Word {
        Word(syllables)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<ReducedWord> for Word {
    fn from(w: ReducedWord) -> Word {
        Word(w.0)
    }
}

fn fmt_syllables(syllables: &[Syllable], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, s) in syllables.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(&self.0, f)
    }
}

/// A word in normal form: tags alternate and no syllable is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord(Vec<Syllable>);

impl ReducedWord {
    pub fn empty() -> ReducedWord {
        ReducedWord(Vec::new())
    }

    /// Wrap a single syllable.
    pub fn single(s: Syllable) -> ReducedWord {
        ReducedWord(vec![s])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Syllable> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Syllable> {
        self.0.last().copied()
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    /// True when the first and last syllables come from different factors
    /// (vacuously for length ≤ 1).
    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() <= 1 || self.0[0].tag != self.0[self.0.len() - 1].tag
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(&self.0, f)
    }
}

/// A reduced word whose first and last syllables lie in different factors
/// (or of length ≤ 1). Powers of such a word are reduced as written.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicallyReducedWord(ReducedWord);

impl CyclicallyReducedWord {
    /// Wrap a reduced word, checking the corner condition.
    pub fn new(w: ReducedWord) -> Option<CyclicallyReducedWord> {
        w.is_cyclically_reduced()
            .then_some(CyclicallyReducedWord(w))
    }

    pub fn as_reduced(&self) -> &ReducedWord {
        &self.0
    }

    pub fn syllables(&self) -> &[Syllable] {
        self.0.syllables()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `k`-th power, reduced as written (no cancellation can occur).
    pub fn repeat(&self, k: usize) -> ReducedWord {
        if self.is_empty() || k == 0 {
            return ReducedWord::empty();
        }
        debug_assert!(
            self.len() == 1 || k <= 1 || self.0 .0[0].tag != self.0 .0[self.len() - 1].tag
        );
        if self.len() == 1 && k > 1 {
            // A single syllable only stays reduced under powers via the group.
            panic!("repeat is only defined for length-zero or alternating-corner words");
        }
        let mut out = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            out.extend_from_slice(self.syllables());
        }
        ReducedWord(out)
    }
}

impl fmt::Display for CyclicallyReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Parse a word: space-separated syllables `a<k>` / `b<k>` with
/// `1 ≤ k < order` of the named factor; the empty string is the empty word.
pub fn parse_word(groups: &GroupPair, text: &str) -> Result<Word> {
    let mut syllables = Vec::new();
    for token in text.split_whitespace() {
        let mut chars = token.chars();
        let tag = match chars.next() {
            Some('a') => Factor::A,
            Some('b') => Factor::B,
            _ => {
                return Err(Error::InvalidWord(format!(
                    "syllable {token:?} must start with 'a' or 'b'"
                )))
            }
        };
        let digits = chars.as_str();
        let elem: usize = digits.parse().map_err(|_| {
            Error::InvalidWord(format!("syllable {token:?} needs a decimal element index"))
        })?;
        if elem == IDENTITY {
            return Err(Error::InvalidWord(format!(
                "syllable {token:?}: element index must be at least 1"
            )));
        }
        let order = groups.factor(tag).order();
        if elem >= order {
            return Err(Error::InvalidWord(format!(
                "syllable {token:?}: element index must be below the factor order {order}"
            )));
        }
        syllables.push(Syllable::new(tag, elem));
    }
    Ok(Word(syllables))
}

/// Parse a `;`-separated list of generator words.
pub fn parse_generators(groups: &GroupPair, text: &str) -> Result<Vec<Word>> {
    text.split(';')
        .map(|part| parse_word(groups, part))
        .collect()
}

/// Free-product normal form: cancel inverse pairs and merge adjacent
/// syllables of the same factor until the word alternates.
pub fn reduce(groups: &GroupPair, w: &Word) -> ReducedWord {
    let mut stack: Vec<Syllable> = Vec::with_capacity(w.len());
    for &s in w.syllables() {
        push_reduced(groups, &mut stack, s);
    }
    ReducedWord(stack)
}

fn push_reduced(groups: &GroupPair, stack: &mut Vec<Syllable>, s: Syllable) {
    match stack.last() {
        Some(&top) if top.tag == s.tag => {
            let m = groups.factor(s.tag).mul(top.elem, s.elem);
            stack.pop();
            if m != IDENTITY {
                stack.push(Syllable::new(s.tag, m));
            }
        }
        _ => stack.push(s),
    }
}

/// Reduced product of two reduced words.
pub fn concat_reduce(groups: &GroupPair, u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    let mut stack = u.0.clone();
    for &s in v.syllables() {
        push_reduced(groups, &mut stack, s);
    }
    ReducedWord(stack)
}

/// The inverse word: syllables reversed and inverted. Stays reduced.
pub fn invert(groups: &GroupPair, w: &ReducedWord) -> ReducedWord {
    ReducedWord(w.0.iter().rev().map(|s| s.inverse(groups)).collect())
}

/// Split `w` as a conjugate `u · z · u⁻¹` with `z` cyclically reduced.
///
/// While the first and last syllables share a factor, the first syllable is
/// rotated to the end and absorbed; it joins the conjugator `u`. The word
/// `b1 a1 b1` over Z2 * Z3, for example, yields `u = b1`, `z = a1 b2`.
pub fn cyclically_reduce(
    groups: &GroupPair,
    w: &ReducedWord,
) -> (ReducedWord, CyclicallyReducedWord) {
    let mut u: Vec<Syllable> = Vec::new();
    let mut z = w.clone();
    while z.len() > 1 && z.0[0].tag == z.0[z.len() - 1].tag {
        let head = z.0[0];
        u.push(head);
        let mut rest = z.0[1..].to_vec();
        push_reduced(groups, &mut rest, head);
        z = ReducedWord(rest);
    }
    let u = ReducedWord(u);
    debug_assert!(z.is_cyclically_reduced());
    debug_assert!(u.len() <= 1 || u.0.windows(2).all(|p| p[0].tag != p[1].tag));
    (u, CyclicallyReducedWord(z))
}

/// All rotations of a cyclically reduced word, duplicates kept. Every
/// rotation is again cyclically reduced. The empty word has one rotation.
pub fn cyclic_conjugates(z: &CyclicallyReducedWord) -> Vec<CyclicallyReducedWord> {
    if z.is_empty() {
        return vec![z.clone()];
    }
    let n = z.len();
    (0..n)
        .map(|i| {
            let mut rot = z.syllables().to_vec();
            rot.rotate_left(i);
            let w = ReducedWord(rot);
            debug_assert!(w.is_cyclically_reduced());
            CyclicallyReducedWord(w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FactorGroup;
    use proptest::prelude::*;

    fn z2z3() -> GroupPair {
        GroupPair::new(
            FactorGroup::cyclic(Factor::A, 2).unwrap(),
            FactorGroup::cyclic(Factor::B, 3).unwrap(),
        )
    }

    fn w(groups: &GroupPair, text: &str) -> Word {
        parse_word(groups, text).unwrap()
    }

    fn r(groups: &GroupPair, text: &str) -> ReducedWord {
        reduce(groups, &w(groups, text))
    }

    #[test]
    fn parse_and_display() {
        let g = z2z3();
        assert_eq!(w(&g, "a1 b2").to_string(), "a1 b2");
        assert_eq!(w(&g, "").to_string(), "");
        assert_eq!(w(&g, "  a1   b1 ").to_string(), "a1 b1");

        for bad in ["c1", "a0", "a2", "b3", "a", "1a", "a1x"] {
            let err = parse_word(&g, bad).unwrap_err();
            assert!(matches!(err, Error::InvalidWord(_)), "{bad}: {err}");
        }
    }

    #[test]
    fn parse_generator_lists() {
        let g = z2z3();
        let gens = parse_generators(&g, "a1 b1; b2").unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].to_string(), "a1 b1");
        assert_eq!(gens[1].to_string(), "b2");
        assert_eq!(parse_generators(&g, "").unwrap(), vec![Word::empty()]);
    }

    #[test]
    fn reduce_examples() {
        let g = z2z3();
        assert_eq!(r(&g, "a1 a1").to_string(), "");
        assert_eq!(r(&g, "b1 b1").to_string(), "b2");
        assert_eq!(r(&g, "a1 b1 b2 a1").to_string(), "");
        assert_eq!(r(&g, "a1 b1 b1 b1 a1").to_string(), "");
        assert_eq!(r(&g, "b1 a1 a1 b1").to_string(), "b2");
    }

    #[test]
    fn concat_examples() {
        let g = z2z3();
        let ab = r(&g, "a1 b1");
        let ba = r(&g, "b2 a1");
        assert_eq!(concat_reduce(&g, &ab, &ba).to_string(), "");
        assert_eq!(concat_reduce(&g, &ab, &ab).to_string(), "a1 b1 a1 b1");
    }

    #[test]
    fn invert_examples() {
        let g = z2z3();
        assert_eq!(invert(&g, &r(&g, "a1 b1")).to_string(), "b2 a1");
        assert_eq!(invert(&g, &ReducedWord::empty()).to_string(), "");
    }

    #[test]
    fn cyclic_reduction_examples() {
        let g = z2z3();
        let (u, z) = cyclically_reduce(&g, &r(&g, "b1 a1 b1"));
        assert_eq!(u.to_string(), "b1");
        assert_eq!(z.to_string(), "a1 b2");

        let (u, z) = cyclically_reduce(&g, &r(&g, "b1 a1 b2"));
        assert_eq!(u.to_string(), "b1");
        assert_eq!(z.to_string(), "a1");

        let (u, z) = cyclically_reduce(&g, &r(&g, "a1 b1"));
        assert_eq!(u.to_string(), "");
        assert_eq!(z.to_string(), "a1 b1");

        let (u, z) = cyclically_reduce(&g, &r(&g, "b1"));
        assert_eq!(u.to_string(), "");
        assert_eq!(z.to_string(), "b1");
    }

    #[test]
    fn cyclic_conjugate_examples() {
        let g = z2z3();
        let (_, z) = cyclically_reduce(&g, &r(&g, "a1 b1"));
        let rots: Vec<String> = cyclic_conjugates(&z)
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(rots, ["a1 b1", "b1 a1"]);

        let empty = CyclicallyReducedWord::new(ReducedWord::empty()).unwrap();
        assert_eq!(cyclic_conjugates(&empty).len(), 1);

        let (_, z4) = cyclically_reduce(&g, &r(&g, "a1 b1 a1 b2"));
        assert_eq!(cyclic_conjugates(&z4).len(), 4);
    }

    #[test]
    fn repeat_powers() {
        let g = z2z3();
        let (_, z) = cyclically_reduce(&g, &r(&g, "a1 b1"));
        assert_eq!(z.repeat(3).to_string(), "a1 b1 a1 b1 a1 b1");
        assert_eq!(z.repeat(0).to_string(), "");
    }

    /// Strategy: an arbitrary word over Z2 * Z3 of length ≤ 12.
    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((prop::bool::ANY, 1usize..3), 0..12).prop_map(|parts| {
            Word::new(
                parts
                    .into_iter()
                    .map(|(is_a, e)| {
                        if is_a {
                            Syllable::new(Factor::A, 1)
                        } else {
                            Syllable::new(Factor::B, e)
                        }
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(word in arb_word()) {
            let g = z2z3();
            let once = reduce(&g, &word);
            let twice = reduce(&g, &once.as_word());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn reduced_words_alternate(word in arb_word()) {
            let g = z2z3();
            let red = reduce(&g, &word);
            prop_assert!(red.syllables().windows(2).all(|p| p[0].tag != p[1].tag));
            prop_assert!(red.syllables().iter().all(|s| s.elem != 0));
        }

        #[test]
        fn inversion_is_an_involution(word in arb_word()) {
            let g = z2z3();
            let red = reduce(&g, &word);
            prop_assert_eq!(invert(&g, &invert(&g, &red)), red.clone());
            prop_assert!(concat_reduce(&g, &red, &invert(&g, &red)).is_empty());
        }

        #[test]
        fn concat_agrees_with_reduce(u in arb_word(), v in arb_word()) {
            let g = z2z3();
            let mut joined = u.syllables().to_vec();
            joined.extend_from_slice(v.syllables());
            let via_word = reduce(&g, &Word::new(joined));
            let via_concat = concat_reduce(&g, &reduce(&g, &u), &reduce(&g, &v));
            prop_assert_eq!(via_word, via_concat);
        }

        #[test]
        fn cyclic_reduction_conjugates(word in arb_word()) {
            let g = z2z3();
            let red = reduce(&g, &word);
            let (u, z) = cyclically_reduce(&g, &red);
            // w = u z u^{-1} as group elements
            let back = concat_reduce(
                &g,
                &concat_reduce(&g, &u, z.as_reduced()),
                &invert(&g, &u),
            );
            prop_assert_eq!(back, red);
            prop_assert!(z.as_reduced().is_cyclically_reduced());
            // powers of the core stay reduced as written
            if !z.is_empty() && z.len() > 1 {
                prop_assert_eq!(z.repeat(2).len(), 2 * z.len());
            }
        }

        #[test]
        fn rotations_stay_cyclically_reduced(word in arb_word()) {
            let g = z2z3();
            let (_, z) = cyclically_reduce(&g, &reduce(&g, &word));
            let rots = cyclic_conjugates(&z);
            prop_assert_eq!(rots.len(), z.len().max(1));
            for rot in rots {
                prop_assert!(rot.as_reduced().is_cyclically_reduced());
            }
        }
    }
}
