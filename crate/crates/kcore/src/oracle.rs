//! Independent brute-force checks for the core machinery.
//!
//! Everything here recomputes facts by elementary means — multiplying words
//! out, enumerating cosets, sampling random products — so that bugs in the
//! complex/folding code cannot hide behind their own arithmetic. All of it
//! is desk-scale: fine for factor orders up to six and a handful of
//! generators, useless beyond that.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{CoreComplex, VertexId};
use crate::group::{Factor, GroupPair};
use crate::separation::SeparationWitness;
use crate::word::{
    concat_reduce, cyclically_reduce, invert, reduce, CyclicallyReducedWord, ReducedWord, Syllable,
    Word,
};

/// All reduced forms of products of at most `radius` generators and
/// inverses. Sound for positive membership (everything in the ball lies in
/// the subgroup), never complete for a fixed radius.
pub fn enumerate_ball(groups: &GroupPair, gens: &[Word], radius: usize) -> BTreeSet<ReducedWord> {
    let mut steps: Vec<ReducedWord> = Vec::new();
    for g in gens {
        let r = reduce(groups, g);
        steps.push(invert(groups, &r));
        steps.push(r);
    }
    let mut ball = BTreeSet::new();
    ball.insert(ReducedWord::empty());
    let mut frontier = vec![ReducedWord::empty()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &steps {
                let p = concat_reduce(groups, w, s);
                if ball.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    ball
}

/// Outcome of bounded coset enumeration: either the subgroup has finite
/// index with the given transition table (canonically numbered, all entries
/// defined), or the table outgrew the cap — inconclusive, the index may be
/// infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FullCover {
    Complete { table: Vec<Vec<Option<VertexId>>> },
    CapExceeded,
}

impl FullCover {
    pub fn index(&self) -> Option<usize> {
        match self {
            FullCover::Complete { table } => Some(table.len()),
            FullCover::CapExceeded => None,
        }
    }

    pub fn table(&self) -> Option<&[Vec<Option<VertexId>>]> {
        match self {
            FullCover::Complete { table } => Some(table),
            FullCover::CapExceeded => None,
        }
    }
}

/// Coset enumeration over the factor-group presentation, relative to the
/// subgroup generated by `gens`, allocating at most `cap` cosets.
///
/// This is an independent check on [`build_core`](crate::complex::build_core):
/// when it completes, the table is the full finite cover and must agree
/// with the core's transition table entry for entry.
pub fn full_cover_bfs(groups: &GroupPair, gens: &[Word], cap: usize) -> FullCover {
    let mut table = CosetTable::new(groups, cap);
    for g in gens {
        let w = reduce(groups, g);
        if !table.scan(0, w.syllables()) {
            return FullCover::CapExceeded;
        }
    }
    let relators = factor_relators(groups);
    let mut i = 0;
    while i < table.len() {
        if table.find(i) == i {
            for r in &relators {
                if !table.scan(i, r) {
                    return FullCover::CapExceeded;
                }
                if table.find(i) != i {
                    break;
                }
            }
        }
        i += 1;
    }
    FullCover::Complete {
        table: table.canonical_table(),
    }
}

/// One relator per pair of nonidentity elements within a factor:
/// `x y (xy)⁻¹`, shortened to `x y` when the product is the identity.
fn factor_relators(groups: &GroupPair) -> Vec<Vec<Syllable>> {
    let mut relators = Vec::new();
    for tag in [Factor::A, Factor::B] {
        let f = groups.factor(tag);
        for x in 1..f.order() {
            for y in 1..f.order() {
                let z = f.mul(x, y);
                let mut r = vec![Syllable::new(tag, x), Syllable::new(tag, y)];
                if z != 0 {
                    r.push(Syllable::new(tag, f.inv(z)));
                }
                relators.push(r);
            }
        }
    }
    relators
}

/// Coset table with union-find coincidence handling. Entries may hold dead
/// coset ids; every read resolves through `find`.
struct CosetTable<'g> {
    groups: &'g GroupPair,
    sylls: Vec<Syllable>,
    next: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    cap: usize,
}

impl<'g> CosetTable<'g> {
    fn new(groups: &'g GroupPair, cap: usize) -> Self {
        let sylls = groups.syllables();
        let width = sylls.len();
        CosetTable {
            groups,
            sylls,
            next: vec![vec![None; width]],
            parent: vec![0],
            cap,
        }
    }

    fn len(&self) -> usize {
        self.next.len()
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn pos(&self, s: Syllable) -> usize {
        match s.tag {
            Factor::A => s.elem - 1,
            Factor::B => self.groups.factor(Factor::A).order() - 1 + s.elem - 1,
        }
    }

    fn inv_syll(&self, s: Syllable) -> Syllable {
        Syllable::new(s.tag, self.groups.factor(s.tag).inv(s.elem))
    }

    /// Trace the word from `start`, filling gaps with fresh cosets and
    /// closing the loop back at `start`. Returns false when the cap is hit.
    fn scan(&mut self, start: usize, word: &[Syllable]) -> bool {
        let n = word.len();
        let mut f = self.find(start);
        let mut i = 0;
        while i < n {
            match self.next[f][self.pos(word[i])] {
                Some(g) => {
                    f = self.find(g);
                    i += 1;
                }
                None => break,
            }
        }
        if i == n {
            let s = self.find(start);
            self.union(f, s);
            return true;
        }
        let mut b = self.find(start);
        let mut j = n;
        while j > i + 1 {
            match self.next[b][self.pos(self.inv_syll(word[j - 1]))] {
                Some(g) => {
                    b = self.find(g);
                    j -= 1;
                }
                None => break,
            }
        }
        while j > i + 1 {
            match self.define(f, word[i]) {
                Some(nf) => {
                    f = nf;
                    i += 1;
                }
                None => return false,
            }
        }
        self.deduce(f, word[i], b);
        true
    }

    fn define(&mut self, a: usize, s: Syllable) -> Option<usize> {
        if self.next.len() >= self.cap {
            return None;
        }
        let b = self.next.len();
        self.next.push(vec![None; self.sylls.len()]);
        self.parent.push(b);
        let fwd = self.pos(s);
        let bwd = self.pos(self.inv_syll(s));
        self.next[a][fwd] = Some(b);
        self.next[b][bwd] = Some(a);
        Some(b)
    }

    /// Record `a·s = b` for representatives `a`, `b`, merging whatever the
    /// slots already claim.
    fn deduce(&mut self, a: usize, s: Syllable, b: usize) {
        let mut pending = vec![(a, s, b)];
        while let Some((a, s, b)) = pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            let fwd = self.pos(s);
            let bwd = self.pos(self.inv_syll(s));
            match self.next[a][fwd] {
                None => self.next[a][fwd] = Some(b),
                Some(g) => {
                    let g = self.find(g);
                    if g != b {
                        self.union_with(g, b, &mut pending);
                        continue;
                    }
                }
            }
            match self.next[b][bwd] {
                None => self.next[b][bwd] = Some(a),
                Some(x) => {
                    let x = self.find(x);
                    if x != a {
                        self.union_with(x, a, &mut pending);
                    }
                }
            }
        }
    }

    fn union(&mut self, x: usize, y: usize) {
        let mut pending = Vec::new();
        self.union_with(x, y, &mut pending);
        while let Some((a, s, b)) = pending.pop() {
            self.deduce(a, s, b);
        }
    }

    /// Merge the classes of `x` and `y`; the smaller representative
    /// survives. The dead row's entries are queued for re-insertion, which
    /// may cascade into further merges.
    fn union_with(&mut self, x: usize, y: usize, pending: &mut Vec<(usize, Syllable, usize)>) {
        let x = self.find(x);
        let y = self.find(y);
        if x == y {
            return;
        }
        let (keep, kill) = if x < y { (x, y) } else { (y, x) };
        self.parent[kill] = keep;
        let row = std::mem::take(&mut self.next[kill]);
        for (p, entry) in row.into_iter().enumerate() {
            if let Some(g) = entry {
                pending.push((keep, self.sylls[p], g));
            }
        }
    }

    /// Renumber live cosets by breadth-first search from the class of the
    /// subgroup coset, following syllables in canonical order. Panics if
    /// the table is not closed, which cannot happen after every relator has
    /// been scanned at every live coset.
    fn canonical_table(&mut self) -> Vec<Vec<Option<VertexId>>> {
        let root = self.find(0);
        let live = (0..self.len()).filter(|&i| self.find(i) == i).count();
        let mut number = vec![usize::MAX; self.len()];
        number[root] = 0;
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for p in 0..self.sylls.len() {
                let g = self.next[c][p].expect("closed table");
                let g = self.find(g);
                if number[g] == usize::MAX {
                    number[g] = order.len();
                    order.push(g);
                }
            }
        }
        assert_eq!(order.len(), live, "every live coset is reachable");
        order
            .iter()
            .map(|&c| {
                (0..self.sylls.len())
                    .map(|p| {
                        let g = self.find(self.next[c][p].expect("closed table"));
                        Some(number[g])
                    })
                    .collect()
            })
            .collect()
    }
}

/// Greedy Nielsen-style reduction: repeatedly replace a generator by a
/// strictly shorter product with another generator, dropping identities.
/// The surviving count is the free rank whenever the subgroup meets no
/// conjugate of a factor (all core stabilizers trivial) and the greedy
/// search reaches a reduced set — true for the desk-scale sets the tests
/// feed it, not a theorem for arbitrary input.
pub fn nielsen_free_rank(groups: &GroupPair, gens: &[Word]) -> usize {
    let mut set: Vec<ReducedWord> = gens
        .iter()
        .map(|w| reduce(groups, w))
        .filter(|w| !w.is_empty())
        .collect();
    loop {
        let mut shorter: Option<(usize, ReducedWord)> = None;
        'search: for j in 0..set.len() {
            for i in 0..set.len() {
                if i == j {
                    continue;
                }
                let u = set[i].clone();
                let ui = invert(groups, &u);
                for cand in [
                    concat_reduce(groups, &u, &set[j]),
                    concat_reduce(groups, &ui, &set[j]),
                    concat_reduce(groups, &set[j], &u),
                    concat_reduce(groups, &set[j], &ui),
                ] {
                    if cand.len() < set[j].len() {
                        shorter = Some((j, cand));
                        break 'search;
                    }
                }
            }
        }
        match shorter {
            Some((j, w)) if w.is_empty() => {
                set.remove(j);
            }
            Some((j, w)) => set[j] = w,
            None => return set.len(),
        }
    }
}

/// Parameters for normal-closure sampling.
#[derive(Debug, Clone, Copy)]
pub struct SampleParams {
    pub samples: u64,
    pub max_conjugates: usize,
    pub max_conjugator_len: usize,
    pub seed: u64,
}

/// One sampled element of the normal closure of `g⁶`, with the recipe that
/// reproduces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSample {
    pub z: ReducedWord,
    /// Pairs `(w, ε)`: the sample is the reduced product of `w·g^{6ε}·w⁻¹`.
    pub recipe: Vec<(ReducedWord, i8)>,
}

/// Uniform reduced word of exactly `len` syllables.
fn random_reduced_word(groups: &GroupPair, rng: &mut ChaCha8Rng, len: usize) -> ReducedWord {
    let mut sylls: Vec<Syllable> = Vec::with_capacity(len);
    for _ in 0..len {
        let tag = match sylls.last() {
            Some(s) => s.tag.other(),
            None => {
                if rng.gen::<bool>() {
                    Factor::A
                } else {
                    Factor::B
                }
            }
        };
        let elem = rng.gen_range(1..groups.factor(tag).order());
        sylls.push(Syllable::new(tag, elem));
    }
    reduce(groups, &Word::new(sylls))
}

/// Draw the sample at position `index` of the stream determined by the
/// seed. Streams are independent, so samples can be generated in any order
/// or in parallel and always agree.
pub fn sample_closure(
    groups: &GroupPair,
    g: &CyclicallyReducedWord,
    params: &SampleParams,
    index: u64,
) -> ClosureSample {
    assert!(
        g.len() >= 2,
        "closure sampling needs a witness of length two or more"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    let count = rng.gen_range(1..=params.max_conjugates);
    let mut recipe = Vec::with_capacity(count);
    for _ in 0..count {
        let sign: i8 = if rng.gen::<bool>() { 1 } else { -1 };
        let len = rng.gen_range(0..=params.max_conjugator_len);
        recipe.push((random_reduced_word(groups, &mut rng, len), sign));
    }
    let z = evaluate_recipe(groups, g, &recipe);
    ClosureSample { z, recipe }
}

/// Multiply a recipe back out: the reduced product of `wᵢ·g^{6εᵢ}·wᵢ⁻¹`.
pub fn evaluate_recipe(
    groups: &GroupPair,
    g: &CyclicallyReducedWord,
    recipe: &[(ReducedWord, i8)],
) -> ReducedWord {
    let power = g.repeat(crate::separation::WITNESS_EXPONENT as usize);
    let power_inv = invert(groups, &power);
    let mut acc = ReducedWord::empty();
    for (w, sign) in recipe {
        let body = if *sign >= 0 { &power } else { &power_inv };
        let part = concat_reduce(groups, w, body);
        let part = concat_reduce(groups, &part, &invert(groups, w));
        acc = concat_reduce(groups, &acc, &part);
    }
    acc
}

/// Whether some cyclic conjugate of `z` contains a contiguous run of at
/// least `3ℓ(g)−1` syllables that also occurs in a cyclic conjugate of
/// `g⁶` or `g⁻⁶`. Elements of the normal closure of `g⁶` are expected to
/// pass; a failure is a diagnostic, not a verdict.
pub fn spelling_check(
    groups: &GroupPair,
    z: &CyclicallyReducedWord,
    g: &CyclicallyReducedWord,
) -> bool {
    let window = 3 * g.len() - 1;
    if z.len() < window {
        return false;
    }
    let power = g.repeat(crate::separation::WITNESS_EXPONENT as usize);
    let mut targets: BTreeSet<Vec<Syllable>> = BTreeSet::new();
    for seq in [power.syllables().to_vec(), {
        let inv = invert(groups, &power);
        inv.syllables().to_vec()
    }] {
        let mut doubled = seq.clone();
        doubled.extend_from_slice(&seq);
        for start in 0..seq.len() {
            targets.insert(doubled[start..start + window].to_vec());
        }
    }
    let mut doubled = z.syllables().to_vec();
    doubled.extend_from_slice(z.syllables());
    (0..z.len()).any(|start| targets.contains(&doubled[start..start + window]))
}

/// Details of one sample, serialized for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub sample: u64,
    pub z: String,
    pub recipe: Vec<(String, i8)>,
}

/// Outcome of a sampling run against a separating witness.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub rng: String,
    pub seed: u64,
    pub samples: u64,
    pub nontrivial: u64,
    pub violations: u64,
    pub violation_recipes: Vec<SampleRecord>,
    pub spelling_checked: u64,
    pub spelling_warnings: Vec<SampleRecord>,
}

fn record(index: u64, sample: &ClosureSample) -> SampleRecord {
    SampleRecord {
        sample: index,
        z: sample.z.as_word().to_string(),
        recipe: sample
            .recipe
            .iter()
            .map(|(w, e)| (w.as_word().to_string(), *e))
            .collect(),
    }
}

/// Sample the normal closure of `witness.g⁶` and test every nontrivial
/// sample for membership in the subgroup presented by `c`; membership is a
/// violation. With `spelling` set, each nontrivial sample is also run
/// through [`spelling_check`] after cyclic reduction, recording failures
/// as warnings.
///
/// The subgroup generated by a conjugate of `witness.g` misses the normal
/// closure exactly when the original subgroup does, so the report is valid
/// against `c` even though the witness was produced on a rebased complex.
pub fn verify_separation(
    c: &CoreComplex,
    witness: &SeparationWitness,
    params: &SampleParams,
    spelling: bool,
) -> VerificationReport {
    let groups = c.groups();
    let mut nontrivial = 0;
    let mut violation_recipes = Vec::new();
    let mut spelling_checked = 0;
    let mut spelling_warnings = Vec::new();
    for index in 0..params.samples {
        let sample = sample_closure(groups, &witness.g, params, index);
        debug_assert_eq!(
            evaluate_recipe(groups, &witness.g, &sample.recipe),
            sample.z
        );
        if sample.z.is_empty() {
            continue;
        }
        nontrivial += 1;
        if c.member(&sample.z.as_word()) {
            violation_recipes.push(record(index, &sample));
        }
        if spelling {
            let (_, zc) = cyclically_reduce(groups, &sample.z);
            if !zc.is_empty() {
                spelling_checked += 1;
                if !spelling_check(groups, &zc, &witness.g) {
                    spelling_warnings.push(record(index, &sample));
                }
            }
        }
    }
    VerificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        rng: "chacha8".to_string(),
        seed: params.seed,
        samples: params.samples,
        nontrivial,
        violations: violation_recipes.len() as u64,
        violation_recipes,
        spelling_checked,
        spelling_warnings,
    }
}
