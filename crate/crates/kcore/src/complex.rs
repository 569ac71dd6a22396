//! The core complex of a finitely generated subgroup `H ≤ A * B`.
//!
//! Vertices stand for the right cosets `Hg` that reduced words of `H`-elements
//! visit when read from the base vertex. Per factor, the vertices split into
//! components; a component holds a stabilizer subgroup `S` of that factor and,
//! for each member vertex, a canonical representative of a right coset of `S`.
//! Edges are never stored: the transition of a vertex under a syllable is
//! coset arithmetic (`trans` below), which automatically satisfies the edge
//! involution and the triangle closure `v·x·y = v·(xy)`.
//!
//! [`build_core`] folds the loops spelled by the generators into this shape.
//! A finished complex is immutable; queries ([`CoreComplex::member`],
//! [`CoreComplex::index`], lifts, paths) never mutate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::group::{
    canonical_coset_rep, subgroup_closure, Factor, FactorGroup, GroupPair, GroupSpec, Subgroup,
    IDENTITY,
};
use crate::word::{reduce, ReducedWord, Syllable, Word};
use crate::{Error, Result};

pub type VertexId = usize;

/// The index of the subgroup in the ambient free product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// One connected piece of the complex inside a single factor.
///
/// Members are exactly the vertices reachable from one another by edges of
/// this factor. `coord_of` assigns each member the canonical representative
/// of a right coset of `stabilizer`; `occupied` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorComponent {
    stabilizer: Subgroup,
    coord_of: BTreeMap<VertexId, usize>,
    occupied: BTreeMap<usize, VertexId>,
}

impl FactorComponent {
    fn new(stabilizer: Subgroup, coord_of: BTreeMap<VertexId, usize>) -> Result<FactorComponent> {
        let mut occupied = BTreeMap::new();
        for (&v, &c) in &coord_of {
            if let Some(prev) = occupied.insert(c, v) {
                return Err(Error::InvalidCore(format!(
                    "vertices {prev} and {v} occupy the same right coset (coordinate {c})"
                )));
            }
        }
        Ok(FactorComponent {
            stabilizer,
            coord_of,
            occupied,
        })
    }

    pub fn stabilizer(&self) -> &Subgroup {
        &self.stabilizer
    }

    /// Member vertices in ascending order.
    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.coord_of.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coord_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coord_of.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.coord_of.contains_key(&v)
    }

    /// The smallest member id; its coordinate is the identity coset.
    pub fn root(&self) -> VertexId {
        *self
            .coord_of
            .keys()
            .next()
            .expect("components are nonempty")
    }

    pub fn coord(&self, v: VertexId) -> Option<usize> {
        self.coord_of.get(&v).copied()
    }

    /// Right multiplication on coset coordinates; `None` when the target
    /// coset is not occupied by any vertex.
    fn trans(&self, group: &FactorGroup, v: VertexId, elem: usize) -> Option<VertexId> {
        let c = self.coord_of.get(&v)?;
        let target = canonical_coset_rep(group, &self.stabilizer, group.mul(*c, elem));
        self.occupied.get(&target).copied()
    }

    /// True when every right coset of the stabilizer is occupied.
    pub fn is_complete(&self, group: &FactorGroup) -> bool {
        self.occupied.len() * self.stabilizer.len() == group.order()
    }
}

/// A pre-canonical component: stabilizer plus coordinates keyed by loose
/// (possibly sparse, possibly stale) vertex ids.
struct LooseComponent {
    stabilizer: Subgroup,
    coord: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreComplex {
    groups: GroupPair,
    base: VertexId,
    vertex_count: usize,
    a_components: Vec<FactorComponent>,
    b_components: Vec<FactorComponent>,
    a_component_of: Vec<usize>,
    b_component_of: Vec<usize>,
}

impl CoreComplex {
    pub fn groups(&self) -> &GroupPair {
        &self.groups
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn components(&self, tag: Factor) -> &[FactorComponent] {
        match tag {
            Factor::A => &self.a_components,
            Factor::B => &self.b_components,
        }
    }

    /// Index into `components(tag)` of the component containing `v`.
    pub fn component_id(&self, tag: Factor, v: VertexId) -> usize {
        match tag {
            Factor::A => self.a_component_of[v],
            Factor::B => self.b_component_of[v],
        }
    }

    pub fn component_of(&self, tag: Factor, v: VertexId) -> &FactorComponent {
        &self.components(tag)[self.component_id(tag, v)]
    }

    /// The endpoint of the edge labelled `x` out of `v`, if that edge exists.
    pub fn trans(&self, v: VertexId, x: Syllable) -> Option<VertexId> {
        debug_assert!(v < self.vertex_count);
        self.component_of(x.tag, v)
            .trans(self.groups.factor(x.tag), v, x.elem)
    }

    /// Follow `w` syllable by syllable from `start`. Returns the visited
    /// vertices (starting with `start`) and whether every step was defined.
    pub fn lift(&self, start: VertexId, w: &ReducedWord) -> (Vec<VertexId>, bool) {
        let mut path = vec![start];
        for &s in w.syllables() {
            match self.trans(*path.last().unwrap(), s) {
                Some(next) => path.push(next),
                None => return (path, false),
            }
        }
        (path, true)
    }

    /// True iff the reduced form of `w` labels a loop at the base.
    pub fn member(&self, w: &Word) -> bool {
        let red = reduce(&self.groups, w);
        let (path, complete) = self.lift(self.base, &red);
        complete && *path.last().unwrap() == self.base
    }

    /// True when every transition is defined at every vertex.
    pub fn is_complete(&self) -> bool {
        let a = self.groups.factor(Factor::A);
        let b = self.groups.factor(Factor::B);
        self.a_components.iter().all(|c| c.is_complete(a))
            && self.b_components.iter().all(|c| c.is_complete(b))
    }

    /// Finite (= vertex count) exactly when the complex is complete.
    pub fn index(&self) -> Index {
        if self.is_complete() {
            Index::Finite(self.vertex_count)
        } else {
            Index::Infinite
        }
    }

    /// Transitions as a table: one row per vertex, one column per syllable in
    /// canonical order (`a1, a2, …, b1, …`).
    pub fn transition_table(&self) -> Vec<Vec<Option<VertexId>>> {
        let sylls = self.groups.syllables();
        (0..self.vertex_count)
            .map(|v| sylls.iter().map(|&s| self.trans(v, s)).collect())
            .collect()
    }

    /// Shortest reduced path from `from` to `to`, optionally constrained to
    /// start with a syllable of the given factor. Ties are broken by
    /// canonical syllable order, so the result is deterministic.
    pub fn reduced_path(
        &self,
        from: VertexId,
        to: VertexId,
        first_tag: Option<Factor>,
    ) -> Option<ReducedWord> {
        if from == to && first_tag.is_none() {
            return Some(ReducedWord::empty());
        }
        let sylls = self.groups.syllables();
        // BFS over (vertex, tag of the last syllable used).
        let mut parent: BTreeMap<(VertexId, Factor), Option<((VertexId, Factor), Syllable)>> =
            BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in &sylls {
            if first_tag.is_some_and(|t| t != s.tag) {
                continue;
            }
            if let Some(w) = self.trans(from, s) {
                let state = (w, s.tag);
                if !parent.contains_key(&state) {
                    parent.insert(state, None);
                    queue.push_back((state, s));
                }
            }
        }
        let mut goal = None;
        'search: for &s in &sylls {
            if first_tag.is_some_and(|t| t != s.tag) {
                continue;
            }
            if self.trans(from, s) == Some(to) {
                goal = Some((to, s.tag));
                break 'search;
            }
        }
        if goal.is_none() {
            while let Some((state, _)) = queue.pop_front() {
                let (v, last) = state;
                for &s in &sylls {
                    if s.tag == last {
                        continue;
                    }
                    if let Some(w) = self.trans(v, s) {
                        let next = (w, s.tag);
                        if !parent.contains_key(&next) {
                            parent.insert(next, Some((state, s)));
                            if w == to {
                                goal = Some(next);
                                queue.clear();
                                break;
                            }
                            queue.push_back((next, s));
                        }
                    }
                }
                if goal.is_some() {
                    break;
                }
            }
        }
        let mut state = goal?;
        // Rebuild the label back to front.
        let mut label = Vec::new();
        loop {
            match parent.get(&state) {
                Some(Some((prev, s))) => {
                    label.push(*s);
                    state = *prev;
                }
                Some(None) => {
                    // Initial states record their syllable implicitly: re-derive it.
                    let (v, tag) = state;
                    let s = sylls
                        .iter()
                        .copied()
                        .find(|s| s.tag == tag && self.trans(from, *s) == Some(v))
                        .expect("initial state has a generating syllable");
                    label.push(s);
                    break;
                }
                None => unreachable!("goal state always has a parent entry"),
            }
        }
        label.reverse();
        let word = Word::new(label);
        let red = reduce(&self.groups, &word);
        debug_assert_eq!(red.len(), word.len(), "BFS paths are reduced as written");
        Some(red)
    }

    /// Vertices that lie on some reduced loop at `base`: forward-reachable by
    /// a reduced path ending in one factor and backward-reachable by a
    /// reduced path starting in the other.
    fn spanned_from(&self, base: VertexId) -> BTreeSet<VertexId> {
        let sylls = self.groups.syllables();
        // Forward: (v, t) = a reduced path base → v ends with tag t.
        let mut fwd: BTreeSet<(VertexId, Factor)> = BTreeSet::new();
        let mut queue: VecDeque<(VertexId, Factor)> = VecDeque::new();
        for &s in &sylls {
            if let Some(w) = self.trans(base, s) {
                if fwd.insert((w, s.tag)) {
                    queue.push_back((w, s.tag));
                }
            }
        }
        while let Some((v, last)) = queue.pop_front() {
            for &s in &sylls {
                if s.tag == last {
                    continue;
                }
                if let Some(w) = self.trans(v, s) {
                    if fwd.insert((w, s.tag)) {
                        queue.push_back((w, s.tag));
                    }
                }
            }
        }
        // Reverse adjacency: rev[w] lists (v, s) with v·s = w.
        let mut rev: Vec<Vec<(VertexId, Syllable)>> = vec![Vec::new(); self.vertex_count];
        for v in 0..self.vertex_count {
            for &s in &sylls {
                if let Some(w) = self.trans(v, s) {
                    rev[w].push((v, s));
                }
            }
        }
        // Backward: (v, t) = a reduced path v → base starts with tag t.
        let mut bwd: BTreeSet<(VertexId, Factor)> = BTreeSet::new();
        let mut queue: VecDeque<(VertexId, Factor)> = VecDeque::new();
        for &(v, s) in &rev[base] {
            if bwd.insert((v, s.tag)) {
                queue.push_back((v, s.tag));
            }
        }
        while let Some((w, first)) = queue.pop_front() {
            for &(v, s) in &rev[w] {
                if s.tag == first {
                    continue;
                }
                if bwd.insert((v, s.tag)) {
                    queue.push_back((v, s.tag));
                }
            }
        }
        let mut keep = BTreeSet::new();
        keep.insert(base);
        for v in 0..self.vertex_count {
            let spanned = (fwd.contains(&(v, Factor::A)) && bwd.contains(&(v, Factor::B)))
                || (fwd.contains(&(v, Factor::B)) && bwd.contains(&(v, Factor::A)));
            if spanned {
                keep.insert(v);
            }
        }
        keep
    }

    fn restrict_and_canonicalize(&self, new_base: VertexId) -> CoreComplex {
        let keep = self.spanned_from(new_base);
        let filter = |comps: &[FactorComponent]| -> Vec<LooseComponent> {
            comps
                .iter()
                .filter_map(|c| {
                    let coord: BTreeMap<usize, usize> = c
                        .coord_of
                        .iter()
                        .filter(|(v, _)| keep.contains(v))
                        .map(|(&v, &x)| (v, x))
                        .collect();
                    (!coord.is_empty()).then(|| LooseComponent {
                        stabilizer: c.stabilizer.clone(),
                        coord,
                    })
                })
                .collect()
        };
        canonicalize(
            self.groups.clone(),
            new_base,
            filter(&self.a_components),
            filter(&self.b_components),
        )
        .expect("restriction of a valid complex stays valid")
    }

    /// Drop every vertex that lies on no reduced loop at the base. Idempotent;
    /// freshly built complexes are already fixed by it.
    pub fn prune_to_span(&self) -> CoreComplex {
        self.restrict_and_canonicalize(self.base)
    }

    /// The complex of the conjugate subgroup obtained by moving the base to
    /// `v` (and pruning). The conjugating element is the label of any reduced
    /// path from `v` to the old base.
    pub fn rebase(&self, v: VertexId) -> CoreComplex {
        assert!(v < self.vertex_count, "rebase target must be a vertex");
        self.restrict_and_canonicalize(v)
    }

    pub fn to_json_string(&self) -> String {
        let comp_json = |c: &FactorComponent| ComponentJson {
            stabilizer: c.stabilizer.elements().to_vec(),
            members: c
                .coord_of
                .iter()
                .map(|(v, x)| (v.to_string(), x.to_string()))
                .collect(),
        };
        let table_spec = |g: &FactorGroup| GroupSpec::Table {
            order: g.order(),
            table: g.table().clone(),
        };
        let json = CoreJson {
            base: self.base,
            vertices: self.vertex_count,
            a_components: self.a_components.iter().map(comp_json).collect(),
            b_components: self.b_components.iter().map(comp_json).collect(),
            groups: GroupsJson {
                a: table_spec(self.groups.factor(Factor::A)),
                b: table_spec(self.groups.factor(Factor::B)),
            },
        };
        let mut text = serde_json::to_string(&json).expect("complex serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<CoreComplex> {
        let json: CoreJson = serde_json::from_str(text)?;
        let groups = GroupPair::new(
            json.groups.a.build(Factor::A)?,
            json.groups.b.build(Factor::B)?,
        );
        let parse_comps = |comps: &[ComponentJson], tag: Factor| -> Result<Vec<LooseComponent>> {
            let group = groups.factor(tag);
            comps
                .iter()
                .map(|c| {
                    let stabilizer = Subgroup::from_elements(group, c.stabilizer.clone())?;
                    let mut coord = BTreeMap::new();
                    for (k, val) in &c.members {
                        let v: usize = k.parse().map_err(|_| {
                            Error::InvalidCore(format!("member key {k:?} is not a vertex id"))
                        })?;
                        let x: usize = val.parse().map_err(|_| {
                            Error::InvalidCore(format!(
                                "coordinate {val:?} is not an element index"
                            ))
                        })?;
                        if x >= group.order() {
                            return Err(Error::InvalidCore(format!(
                                "coordinate {x} is out of range for a factor of order {}",
                                group.order()
                            )));
                        }
                        if canonical_coset_rep(group, &stabilizer, x) != x {
                            return Err(Error::InvalidCore(format!(
                                "coordinate {x} is not the canonical representative of its coset"
                            )));
                        }
                        if coord.insert(v, x).is_some() {
                            return Err(Error::InvalidCore(format!(
                                "vertex {v} listed twice in one component"
                            )));
                        }
                    }
                    Ok(LooseComponent { stabilizer, coord })
                })
                .collect()
        };
        let a = parse_comps(&json.a_components, Factor::A)?;
        let b = parse_comps(&json.b_components, Factor::B)?;
        let ids: BTreeSet<usize> = a.iter().flat_map(|c| c.coord.keys().copied()).collect();
        if ids.len() != json.vertices || ids.iter().max().is_some_and(|&m| m + 1 != json.vertices) {
            return Err(Error::InvalidCore(format!(
                "vertex ids must be exactly 0..{}",
                json.vertices
            )));
        }
        if !ids.contains(&json.base) {
            return Err(Error::InvalidCore(format!(
                "base {} is not a vertex",
                json.base
            )));
        }
        let complex = canonicalize(groups, json.base, a, b)?;
        let pruned = complex.prune_to_span();
        if pruned != complex {
            return Err(Error::InvalidCore(
                "a vertex lies on no reduced loop at the base (complex is not a span)".to_string(),
            ));
        }
        Ok(complex)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CoreComplex> {
        let text = std::fs::read_to_string(path)?;
        CoreComplex::from_json_str(&text)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentJson {
    stabilizer: Vec<usize>,
    members: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupsJson {
    #[serde(rename = "A")]
    a: GroupSpec,
    #[serde(rename = "B")]
    b: GroupSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoreJson {
    base: usize,
    vertices: usize,
    #[serde(rename = "A_components")]
    a_components: Vec<ComponentJson>,
    #[serde(rename = "B_components")]
    b_components: Vec<ComponentJson>,
    groups: GroupsJson,
}

/// Build the core complex of the subgroup generated by `gens`.
///
/// Generators are reduced first; ones that reduce to the identity are
/// dropped. An empty *list* is an error, but a list whose members all reduce
/// to the identity yields the one-vertex complex of the trivial subgroup.
pub fn build_core(groups: &GroupPair, gens: &[Word]) -> Result<CoreComplex> {
    if gens.is_empty() {
        return Err(Error::NoGenerators);
    }
    for w in gens {
        for s in w.syllables() {
            let order = groups.factor(s.tag).order();
            if s.elem >= order {
                return Err(Error::InvalidWord(format!(
                    "syllable {s} is out of range for a factor of order {order}"
                )));
            }
        }
    }
    let reduced: Vec<ReducedWord> = gens
        .iter()
        .map(|w| reduce(groups, w))
        .filter(|r| !r.is_empty())
        .collect();

    // Spell each generator as a loop of fresh vertices at the base.
    let mut vertex_count = 1; // vertex 0 is the base
    let mut edges: Vec<(usize, Syllable, usize)> = Vec::new();
    for g in &reduced {
        let n = g.len();
        let mut cur = 0;
        for (i, &s) in g.syllables().iter().enumerate() {
            let next = if i + 1 == n {
                0
            } else {
                vertex_count += 1;
                vertex_count - 1
            };
            edges.push((cur, s, next));
            cur = next;
        }
    }

    let (base, a, b) = fold(groups, vertex_count, edges);
    canonicalize(groups.clone(), base, a, b)
}

/// Identify vertices forced equal by determinism and coset closure until the
/// edge set describes a genuine coset structure per factor component.
fn fold(
    groups: &GroupPair,
    vertex_count: usize,
    edges: Vec<(usize, Syllable, usize)>,
) -> (usize, Vec<LooseComponent>, Vec<LooseComponent>) {
    let mut uf = UnionFind::new(vertex_count);
    loop {
        let edge_set: BTreeSet<(usize, Syllable, usize)> = edges
            .iter()
            .map(|&(u, s, v)| (uf.find(u), s, uf.find(v)))
            .collect();
        let reps: BTreeSet<usize> = (0..vertex_count).map(|v| uf.find(v)).collect();
        let mut merged = false;
        let mut out: [Vec<LooseComponent>; 2] = [Vec::new(), Vec::new()];
        for (slot, tag) in [(0, Factor::A), (1, Factor::B)] {
            let group = groups.factor(tag);
            // Undirected adjacency restricted to this factor's edges.
            let mut adj: BTreeMap<usize, Vec<(usize, usize, bool)>> = BTreeMap::new();
            for &(u, s, v) in &edge_set {
                if s.tag != tag {
                    continue;
                }
                adj.entry(u).or_default().push((v, s.elem, true));
                adj.entry(v).or_default().push((u, s.elem, false));
            }
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for &r in &reps {
                if seen.contains(&r) {
                    continue;
                }
                // Spanning-tree coordinates from the component root.
                let mut coord: BTreeMap<usize, usize> = BTreeMap::new();
                coord.insert(r, IDENTITY);
                let mut queue = VecDeque::from([r]);
                while let Some(u) = queue.pop_front() {
                    for &(w, x, forward) in adj.get(&u).into_iter().flatten() {
                        if coord.contains_key(&w) {
                            continue;
                        }
                        let c = if forward {
                            group.mul(coord[&u], x)
                        } else {
                            group.mul(coord[&u], group.inv(x))
                        };
                        coord.insert(w, c);
                        queue.push_back(w);
                    }
                }
                seen.extend(coord.keys().copied());
                // Every edge of the component closes a stabilizer relation.
                let mut seed = Vec::new();
                for (&u, nbrs) in adj.iter().filter(|(u, _)| coord.contains_key(*u)) {
                    for &(v, x, forward) in nbrs {
                        if !forward {
                            continue;
                        }
                        seed.push(group.mul(group.mul(coord[&u], x), group.inv(coord[&v])));
                    }
                }
                let stabilizer = subgroup_closure(group, &seed);
                // Vertices in one right coset are the same vertex.
                let mut canonical: BTreeMap<usize, usize> = BTreeMap::new();
                let mut by_coset: BTreeMap<usize, usize> = BTreeMap::new();
                for (&v, &c) in &coord {
                    let rep = canonical_coset_rep(group, &stabilizer, c);
                    canonical.insert(v, rep);
                    if let Some(&other) = by_coset.get(&rep) {
                        if uf.union(other, v) {
                            merged = true;
                        }
                    } else {
                        by_coset.insert(rep, v);
                    }
                }
                out[slot].push(LooseComponent {
                    stabilizer,
                    coord: canonical,
                });
            }
        }
        if !merged {
            let [a, b] = out;
            return (uf.find(0), a, b);
        }
    }
}

/// Renumber vertices by BFS from the base (factor A before B, elements in
/// index order), re-root every component at its smallest member, and sort
/// components by root. Canonical complexes are equal iff their serializations
/// are byte-identical.
fn canonicalize(
    groups: GroupPair,
    base: usize,
    a: Vec<LooseComponent>,
    b: Vec<LooseComponent>,
) -> Result<CoreComplex> {
    // Loose lookup tables for the BFS.
    let mut comp_of: [BTreeMap<usize, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut occupied: [Vec<BTreeMap<usize, usize>>; 2] = [Vec::new(), Vec::new()];
    for (slot, comps) in [(0, &a), (1, &b)] {
        for (i, comp) in comps.iter().enumerate() {
            let mut occ = BTreeMap::new();
            for (&v, &c) in &comp.coord {
                if let Some(prev) = occ.insert(c, v) {
                    return Err(Error::InvalidCore(format!(
                        "vertices {prev} and {v} occupy the same right coset (coordinate {c})"
                    )));
                }
                if comp_of[slot].insert(v, i).is_some() {
                    return Err(Error::InvalidCore(format!(
                        "vertex {v} belongs to two components of one factor"
                    )));
                }
            }
            occupied[slot].push(occ);
        }
    }
    let ids_a: BTreeSet<usize> = comp_of[0].keys().copied().collect();
    let ids_b: BTreeSet<usize> = comp_of[1].keys().copied().collect();
    if ids_a != ids_b {
        return Err(Error::InvalidCore(
            "every vertex must belong to one component of each factor".to_string(),
        ));
    }
    if !ids_a.contains(&base) {
        return Err(Error::InvalidCore("the base is not a vertex".to_string()));
    }
    let comps_for = |slot: usize| if slot == 0 { &a } else { &b };
    let trans_loose = |v: usize, s: Syllable| -> Option<usize> {
        let slot = if s.tag == Factor::A { 0 } else { 1 };
        let group = groups.factor(s.tag);
        let i = comp_of[slot][&v];
        let comp = &comps_for(slot)[i];
        let c = comp.coord[&v];
        let target = canonical_coset_rep(group, &comp.stabilizer, group.mul(c, s.elem));
        occupied[slot][i].get(&target).copied()
    };

    let sylls = groups.syllables();
    let mut new_id: BTreeMap<usize, usize> = BTreeMap::new();
    new_id.insert(base, 0);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &s in &sylls {
            if let Some(w) = trans_loose(v, s) {
                if !new_id.contains_key(&w) {
                    new_id.insert(w, new_id.len());
                    queue.push_back(w);
                }
            }
        }
    }
    if new_id.len() != ids_a.len() {
        return Err(Error::InvalidCore(
            "complex is not connected from the base".to_string(),
        ));
    }
    let vertex_count = new_id.len();

    let rebuild = |comps: Vec<LooseComponent>, tag: Factor| -> Result<Vec<FactorComponent>> {
        let group = groups.factor(tag);
        let mut rebuilt: Vec<FactorComponent> = comps
            .into_iter()
            .map(|comp| {
                let members: BTreeMap<usize, usize> =
                    comp.coord.iter().map(|(&v, &c)| (new_id[&v], c)).collect();
                let root = *members.keys().next().expect("components are nonempty");
                let shift = group.inv(members[&root]);
                let stabilizer = comp.stabilizer.conjugate(group, group.inv(shift));
                let coord_of: BTreeMap<usize, usize> = members
                    .into_iter()
                    .map(|(v, c)| {
                        (
                            v,
                            canonical_coset_rep(group, &stabilizer, group.mul(shift, c)),
                        )
                    })
                    .collect();
                FactorComponent::new(stabilizer, coord_of)
            })
            .collect::<Result<_>>()?;
        rebuilt.sort_by_key(|c| c.root());
        Ok(rebuilt)
    };
    let a_components = rebuild(a, Factor::A)?;
    let b_components = rebuild(b, Factor::B)?;
    let component_index = |comps: &[FactorComponent]| -> Vec<usize> {
        let mut of = vec![usize::MAX; vertex_count];
        for (i, c) in comps.iter().enumerate() {
            for v in c.members() {
                of[v] = i;
            }
        }
        of
    };
    let a_component_of = component_index(&a_components);
    let b_component_of = component_index(&b_components);
    Ok(CoreComplex {
        groups,
        base: 0,
        vertex_count,
        a_components,
        b_components,
        a_component_of,
        b_component_of,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Returns true when the two elements were in different classes. The
    /// smaller root wins, keeping vertex names stable across rounds.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = (rx.min(ry), rx.max(ry));
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_generators, parse_word};

    fn groups(a_order: usize, b_order: usize) -> GroupPair {
        GroupPair::new(
            FactorGroup::cyclic(Factor::A, a_order).unwrap(),
            FactorGroup::cyclic(Factor::B, b_order).unwrap(),
        )
    }

    fn core(g: &GroupPair, gens: &str) -> CoreComplex {
        build_core(g, &parse_generators(g, gens).unwrap()).unwrap()
    }

    fn syll(g: &GroupPair, text: &str) -> Syllable {
        parse_word(g, text).unwrap().syllables()[0]
    }

    #[test]
    fn dihedral_fixture_is_complete() {
        let g = groups(2, 2);
        let c = core(&g, "a1 b1");
        assert_eq!(c.vertex_count(), 2);
        assert!(c.is_complete());
        assert_eq!(c.index(), Index::Finite(2));
        assert_eq!(c.index().to_string(), "2");
        assert!(c.member(&parse_word(&g, "a1 b1").unwrap()));
        assert!(c.member(&parse_word(&g, "b1 a1").unwrap()));
        assert!(!c.member(&parse_word(&g, "a1").unwrap()));
    }

    #[test]
    fn two_vertex_incomplete_fixture() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        assert_eq!(c.vertex_count(), 2);
        assert!(!c.is_complete());
        assert_eq!(c.index(), Index::Infinite);
        assert_eq!(c.index().to_string(), "infinite");

        assert_eq!(c.trans(0, syll(&g, "a1")), Some(1));
        assert_eq!(c.trans(0, syll(&g, "b1")), None);
        assert_eq!(c.trans(0, syll(&g, "b2")), Some(1));
        assert_eq!(c.trans(1, syll(&g, "b1")), Some(0));
        assert_eq!(c.trans(1, syll(&g, "b2")), None);

        assert!(c.member(&parse_word(&g, "a1 b1").unwrap()));
        assert!(c.member(&parse_word(&g, "a1 b1 a1 b1").unwrap()));
        assert!(!c.member(&parse_word(&g, "b1 a1").unwrap()));
        // Unreduced input is reduced before lifting.
        assert!(c.member(&parse_word(&g, "a1 a1 a1 b1").unwrap()));
    }

    #[test]
    fn lift_examples() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        let red = |s: &str| reduce(&g, &parse_word(&g, s).unwrap());
        assert_eq!(c.lift(0, &red("")), (vec![0], true));
        assert_eq!(c.lift(0, &red("a1 b1")), (vec![0, 1, 0], true));
        assert_eq!(c.lift(0, &red("b1 a1")), (vec![0], false));
    }

    #[test]
    fn folding_merges_inner_vertices() {
        // Generators a and b a b²: the two interior vertices of the second
        // loop collapse, and both survivors carry the full A-stabilizer.
        let g = groups(2, 3);
        let c = core(&g, "a1; b1 a1 b2");
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.components(Factor::A).len(), 2);
        for comp in c.components(Factor::A) {
            assert_eq!(comp.stabilizer().elements(), &[0, 1]);
            assert_eq!(comp.len(), 1);
        }
        assert_eq!(c.components(Factor::B).len(), 1);
        assert!(c.components(Factor::B)[0].stabilizer().is_trivial());
        assert_eq!(c.trans(0, syll(&g, "a1")), Some(0));
        assert_eq!(c.trans(1, syll(&g, "a1")), Some(1));
        assert_eq!(c.trans(0, syll(&g, "b1")), Some(1));
        assert_eq!(c.trans(0, syll(&g, "b2")), None);
        assert_eq!(c.trans(1, syll(&g, "b1")), None);
        assert!(c.member(&parse_word(&g, "a1").unwrap()));
        assert!(c.member(&parse_word(&g, "b1 a1 b2").unwrap()));
        assert!(!c.member(&parse_word(&g, "b1").unwrap()));
    }

    #[test]
    fn whole_group_and_trivial_subgroup() {
        let g = groups(2, 3);
        let whole = core(&g, "a1; b1");
        assert_eq!(whole.vertex_count(), 1);
        assert_eq!(whole.index(), Index::Finite(1));

        let trivial = core(&g, "a1 a1; b1 b2");
        assert_eq!(trivial.vertex_count(), 1);
        assert_eq!(trivial.index(), Index::Infinite);
        assert!(trivial.member(&parse_word(&g, "").unwrap()));
        assert!(!trivial.member(&parse_word(&g, "a1").unwrap()));

        assert!(matches!(build_core(&g, &[]), Err(Error::NoGenerators)));
    }

    #[test]
    fn squared_generator_gives_index_four() {
        let g = groups(2, 2);
        let c = core(&g, "a1 b1 a1 b1");
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.index(), Index::Finite(4));
        assert!(c.member(&parse_word(&g, "a1 b1 a1 b1").unwrap()));
        assert!(!c.member(&parse_word(&g, "a1 b1").unwrap()));
    }

    #[test]
    fn stabilizer_from_powers() {
        // ⟨a²⟩ in Z₄ * Z₂: one vertex, A-stabilizer {0, 2}, no B-edges.
        let g = groups(4, 2);
        let c = core(&g, "a2");
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.components(Factor::A)[0].stabilizer().elements(), &[0, 2]);
        assert!(c.components(Factor::B)[0].stabilizer().is_trivial());
        assert_eq!(c.trans(0, syll(&g, "a2")), Some(0));
        assert_eq!(c.trans(0, syll(&g, "a1")), None);
        assert_eq!(c.trans(0, syll(&g, "b1")), None);
        assert!(c.member(&parse_word(&g, "a2").unwrap()));
        assert!(!c.member(&parse_word(&g, "a1").unwrap()));
    }

    #[test]
    fn transition_table_shape() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        assert_eq!(
            c.transition_table(),
            vec![vec![Some(1), None, Some(1)], vec![Some(0), Some(0), None],]
        );
    }

    #[test]
    fn reduced_paths_are_shortest_and_deterministic() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        let path = |from, to, tag| c.reduced_path(from, to, tag).map(|w| w.to_string());
        assert_eq!(path(0, 0, None), Some(String::new()));
        assert_eq!(path(1, 0, None), Some("a1".to_string()));
        assert_eq!(path(1, 0, Some(Factor::B)), Some("b1".to_string()));
        assert_eq!(path(0, 1, Some(Factor::B)), Some("b2".to_string()));
        // No path out of vertex 0 may start with b1: that edge is missing.
        let via_b = c.reduced_path(0, 1, Some(Factor::B)).unwrap();
        assert_eq!(via_b.first().unwrap().tag, Factor::B);
    }

    #[test]
    fn build_is_deterministic_and_order_independent() {
        let g = groups(2, 3);
        let c1 = core(&g, "a1; b1 a1 b2");
        let c2 = core(&g, "b1 a1 b2; a1");
        assert_eq!(c1, c2);
        assert_eq!(c1.to_json_string(), c2.to_json_string());
    }

    #[test]
    fn redundant_generators_do_not_change_the_complex() {
        let g = groups(2, 3);
        let c1 = core(&g, "a1 b1");
        let c2 = core(&g, "a1 b1; a1 b1 a1 b1");
        assert_eq!(c1, c2);
    }

    #[test]
    fn prune_fixes_built_complexes() {
        let g = groups(2, 3);
        for gens in ["a1 b1", "a1; b1 a1 b2", "a1 b1 a1 b1 a1 b2"] {
            let c = core(&g, gens);
            assert_eq!(c.prune_to_span(), c, "gens = {gens}");
        }
    }

    #[test]
    fn prune_removes_pendant_vertex() {
        // Extend the two-vertex ⟨ab⟩ complex over Z₂ * Z₃ with a third vertex
        // hanging off the B-component. Its only edges are B-edges, so no
        // reduced loop at the base can turn around there.
        let g = groups(2, 3);
        let a = vec![
            LooseComponent {
                stabilizer: Subgroup::trivial(Factor::A),
                coord: BTreeMap::from([(0, 0), (1, 1)]),
            },
            LooseComponent {
                stabilizer: Subgroup::trivial(Factor::A),
                coord: BTreeMap::from([(2, 0)]),
            },
        ];
        let b = vec![LooseComponent {
            stabilizer: Subgroup::trivial(Factor::B),
            coord: BTreeMap::from([(0, 0), (1, 2), (2, 1)]),
        }];
        let padded = canonicalize(g.clone(), 0, a, b).unwrap();
        assert_eq!(padded.vertex_count(), 3);
        let pruned = padded.prune_to_span();
        assert_eq!(pruned, core(&g, "a1 b1"));
        assert_eq!(pruned.prune_to_span(), pruned);
    }

    #[test]
    fn rebase_at_base_is_identity() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        assert_eq!(c.rebase(0), c);
    }

    #[test]
    fn rebase_preserves_completeness_and_count() {
        let g = groups(2, 2);
        let c = core(&g, "a1 b1");
        let r = c.rebase(1);
        assert_eq!(r.vertex_count(), 2);
        assert!(r.is_complete());
    }

    #[test]
    fn rebase_moves_to_the_conjugate_subgroup() {
        // Moving the base of the ⟨ab⟩ complex to the other vertex gives the
        // complex of a⟨ab⟩a⁻¹ = ⟨ba⟩.
        let g = groups(2, 3);
        let c = core(&g, "a1 b1").rebase(1);
        assert_eq!(c.vertex_count(), 2);
        assert!(!c.is_complete());
        assert!(c.member(&parse_word(&g, "b1 a1").unwrap()));
        assert!(!c.member(&parse_word(&g, "a1 b1").unwrap()));
        assert_eq!(c, core(&g, "b1 a1"));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let g = groups(2, 3);
        for gens in ["a1 b1", "a1; b1 a1 b2", "a1 a1"] {
            let c = core(&g, gens);
            let text = c.to_json_string();
            let back = CoreComplex::from_json_str(&text).unwrap();
            assert_eq!(back, c, "gens = {gens}");
            assert_eq!(back.to_json_string(), text, "gens = {gens}");
        }
    }

    #[test]
    fn json_golden_output() {
        let g = groups(2, 3);
        let c = core(&g, "a1 b1");
        let expected = concat!(
            "{\"base\":0,\"vertices\":2,",
            "\"A_components\":[{\"stabilizer\":[0],\"members\":{\"0\":\"0\",\"1\":\"1\"}}],",
            "\"B_components\":[{\"stabilizer\":[0],\"members\":{\"0\":\"0\",\"1\":\"2\"}}],",
            "\"groups\":{\"A\":{\"kind\":\"table\",\"order\":2,\"table\":[[0,1],[1,0]]},",
            "\"B\":{\"kind\":\"table\",\"order\":3,\"table\":[[0,1,2],[1,2,0],[2,0,1]]}}}\n",
        );
        assert_eq!(c.to_json_string(), expected);
    }

    #[test]
    fn invalid_json_is_rejected_with_the_rule_named() {
        let g = groups(2, 3);
        let good = core(&g, "a1 b1").to_json_string();

        // A coordinate that is not the minimum of its coset: with stabilizer
        // {0,2} in Z₄ the coset of element 2 is {0,2}, canonically named 0.
        let bad_coord = concat!(
            "{\"base\":0,\"vertices\":1,",
            "\"A_components\":[{\"stabilizer\":[0,2],\"members\":{\"0\":\"2\"}}],",
            "\"B_components\":[{\"stabilizer\":[0],\"members\":{\"0\":\"0\"}}],",
            "\"groups\":{\"A\":{\"kind\":\"cyclic\",\"order\":4},",
            "\"B\":{\"kind\":\"cyclic\",\"order\":2}}}\n",
        );
        let err = CoreComplex::from_json_str(bad_coord).unwrap_err();
        assert!(err.to_string().contains("canonical"), "{err}");

        // Two vertices in one coset.
        let collision = good.replace("{\"0\":\"0\",\"1\":\"2\"}", "{\"0\":\"0\",\"1\":\"0\"}");
        let err = CoreComplex::from_json_str(&collision).unwrap_err();
        assert!(err.to_string().contains("same right coset"), "{err}");

        // Vertex missing from the B-side.
        let uncovered = good.replace("{\"0\":\"0\",\"1\":\"2\"}", "{\"0\":\"0\"}");
        let err = CoreComplex::from_json_str(&uncovered).unwrap_err();
        assert!(
            err.to_string().contains("component of each factor"),
            "{err}"
        );

        // Stabilizer set that is not closed.
        let bad_stab = good.replacen("\"stabilizer\":[0]", "\"stabilizer\":[0,1]", 2);
        let err = CoreComplex::from_json_str(&bad_stab).unwrap_err();
        assert!(matches!(err, Error::InvalidCore(_)), "{err}");

        // A pendant vertex: structurally fine but not spanned.
        let padded = concat!(
            "{\"base\":0,\"vertices\":3,",
            "\"A_components\":[{\"stabilizer\":[0],\"members\":{\"0\":\"0\",\"1\":\"1\"}},",
            "{\"stabilizer\":[0],\"members\":{\"2\":\"0\"}}],",
            "\"B_components\":[{\"stabilizer\":[0],\"members\":{\"0\":\"0\",\"1\":\"2\",\"2\":\"1\"}}],",
            "\"groups\":{\"A\":{\"kind\":\"table\",\"order\":2,\"table\":[[0,1],[1,0]]},",
            "\"B\":{\"kind\":\"table\",\"order\":3,\"table\":[[0,1,2],[1,2,0],[2,0,1]]}}}\n",
        );
        let err = CoreComplex::from_json_str(padded).unwrap_err();
        assert!(err.to_string().contains("span"), "{err}");
    }

    #[test]
    fn component_lookup_is_consistent() {
        let g = groups(2, 3);
        let c = core(&g, "a1; b1 a1 b2");
        for v in 0..c.vertex_count() {
            for tag in [Factor::A, Factor::B] {
                let comp = c.component_of(tag, v);
                assert!(comp.contains(v));
                let root = comp.root();
                assert_eq!(comp.coord(root), Some(0));
            }
        }
    }

    #[test]
    fn within_component_any_two_vertices_are_joined() {
        let g = groups(2, 3);
        for gens in ["a1 b1", "a1 b1 a1 b2", "a1; b1 a1 b2"] {
            let c = core(&g, gens);
            let sylls = g.syllables();
            for tag in [Factor::A, Factor::B] {
                for comp in c.components(tag) {
                    let members: Vec<_> = comp.members().collect();
                    for &u in &members {
                        for &v in &members {
                            if u == v {
                                continue;
                            }
                            let joined = sylls
                                .iter()
                                .filter(|s| s.tag == tag)
                                .any(|&s| c.trans(u, s) == Some(v));
                            assert!(joined, "{gens}: {u} and {v} not joined");
                        }
                    }
                }
            }
        }
    }
}
