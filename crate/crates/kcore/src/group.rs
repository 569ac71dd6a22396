//! Finite factor groups, their subgroups, and right-coset representatives.
//!
//! Elements are indices `0..order` with `0` fixed as the identity. A group is
//! a full multiplication table; the axioms are checked exhaustively whenever a
//! table enters the system, so everything downstream may assume they hold.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index of the identity element in every factor group.
pub const IDENTITY: usize = 0;

/// Which of the two free factors an element or syllable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::A => Factor::B,
            Factor::B => Factor::A,
        }
    }

    /// Lower-case letter used in the word syntax (`a3`, `b1`).
    pub fn letter(self) -> char {
        match self {
            Factor::A => 'a',
            Factor::B => 'b',
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::A => write!(f, "A"),
            Factor::B => write!(f, "B"),
        }
    }
}

/// A finite group as a validated multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGroup {
    tag: Factor,
    order: usize,
    mul_table: Vec<Vec<usize>>,
    inv_table: Vec<usize>,
}

impl FactorGroup {
    /// Cyclic group of the given order; element `i` is the `i`-th power of
    /// the generator.
    pub fn cyclic(tag: Factor, order: usize) -> Result<FactorGroup> {
        if order < 2 {
            return Err(Error::InvalidGroup(format!(
                "order must be at least 2 (got {order})"
            )));
        }
        let table = (0..order)
            .map(|i| (0..order).map(|j| (i + j) % order).collect())
            .collect();
        FactorGroup::from_table(tag, table)
    }

    /// Symmetric group on `degree` points. Elements are the permutations of
    /// `0..degree` in lexicographic order (so the identity is element 0), and
    /// `mul(p, q)` applies `p` first, then `q`.
    pub fn symmetric(tag: Factor, degree: usize) -> Result<FactorGroup> {
        if !(2..=6).contains(&degree) {
            return Err(Error::InvalidGroup(format!(
                "symmetric degree must be between 2 and 6 (got {degree})"
            )));
        }
        let perms = permutations(degree);
        let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let composed: Vec<usize> = p.iter().map(|&i| q[i]).collect();
                        index_of(&composed)
                    })
                    .collect()
            })
            .collect();
        FactorGroup::from_table(tag, table)
    }

    /// Build a group from an explicit table, `table[i][j] = i * j`.
    /// Fails with a message naming the first violated axiom.
    pub fn from_table(tag: Factor, table: Vec<Vec<usize>>) -> Result<FactorGroup> {
        let order = table.len();
        if order < 2 {
            return Err(Error::InvalidGroup(format!(
                "order must be at least 2 (got {order})"
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "table must be square: row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                if e >= order {
                    return Err(Error::InvalidGroup(format!(
                        "table entry out of range: mul({i}, {j}) = {e} but order is {order}"
                    )));
                }
            }
        }
        for x in 0..order {
            if table[IDENTITY][x] != x {
                return Err(Error::InvalidGroup(format!(
                    "identity axiom violated: mul(0, {x}) = {}",
                    table[IDENTITY][x]
                )));
            }
            if table[x][IDENTITY] != x {
                return Err(Error::InvalidGroup(format!(
                    "identity axiom violated: mul({x}, 0) = {}",
                    table[x][IDENTITY]
                )));
            }
        }
        let mut inv_table = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order).find(|&y| table[x][y] == IDENTITY && table[y][x] == IDENTITY);
            match y {
                Some(y) => inv_table[x] = y,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "inverse axiom violated: element {x} has no two-sided inverse"
                    )))
                }
            }
        }
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity violated: ({x}*{y})*{z} = {} but {x}*({y}*{z}) = {}",
                            table[table[x][y]][z], table[x][table[y][z]]
                        )));
                    }
                }
            }
        }
        Ok(FactorGroup {
            tag,
            order,
            mul_table: table,
            inv_table,
        })
    }

    pub fn tag(&self) -> Factor {
        self.tag
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul_table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv_table[x]
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.mul_table
    }
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// The two factors of a free product `A * B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPair {
    a: FactorGroup,
    b: FactorGroup,
}

impl GroupPair {
    pub fn new(a: FactorGroup, b: FactorGroup) -> GroupPair {
        assert_eq!(a.tag(), Factor::A);
        assert_eq!(b.tag(), Factor::B);
        GroupPair { a, b }
    }

    pub fn factor(&self, tag: Factor) -> &FactorGroup {
        match tag {
            Factor::A => &self.a,
            Factor::B => &self.b,
        }
    }

    /// All syllables in canonical order: factor A before factor B, element
    /// indices ascending. This order fixes every deterministic traversal in
    /// the crate.
    pub fn syllables(&self) -> Vec<crate::word::Syllable> {
        let mut out = Vec::new();
        for tag in [Factor::A, Factor::B] {
            for elem in 1..self.factor(tag).order() {
                out.push(crate::word::Syllable::new(tag, elem));
            }
        }
        out
    }
}

/// A subgroup of one factor, kept as a sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    tag: Factor,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(tag: Factor) -> Subgroup {
        Subgroup {
            tag,
            elements: vec![IDENTITY],
        }
    }

    /// Validate an untrusted element list (e.g. from a core file): sorted,
    /// in range, containing the identity, closed under product and inverse.
    pub fn from_elements(group: &FactorGroup, elements: Vec<usize>) -> Result<Subgroup> {
        let bad = |m: String| Error::InvalidCore(format!("stabilizer {elements:?}: {m}"));
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("elements must be strictly sorted".into()));
        }
        if elements.iter().any(|&e| e >= group.order()) {
            return Err(bad(format!(
                "element out of range for order {}",
                group.order()
            )));
        }
        if elements.first() != Some(&IDENTITY) {
            return Err(bad("must contain the identity".into()));
        }
        for &x in &elements {
            if elements.binary_search(&group.inv(x)).is_err() {
                return Err(bad(format!("not closed under inverse: {x}")));
            }
            for &y in &elements {
                if elements.binary_search(&group.mul(x, y)).is_err() {
                    return Err(bad(format!("not closed under product: {x} * {y}")));
                }
            }
        }
        assert_eq!(group.order() % elements.len(), 0, "Lagrange");
        Ok(Subgroup {
            tag: group.tag(),
            elements,
        })
    }

    pub fn tag(&self) -> Factor {
        self.tag
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The conjugate subgroup `c⁻¹ S c`.
    pub fn conjugate(&self, group: &FactorGroup, c: usize) -> Subgroup {
        let ci = group.inv(c);
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&s| group.mul(group.mul(ci, s), c))
            .collect();
        elements.sort_unstable();
        Subgroup {
            tag: self.tag,
            elements,
        }
    }
}

/// Smallest subgroup containing every element of `seed`. The result is the
/// same for any ordering of the seed; an empty seed yields the trivial
/// subgroup.
pub fn subgroup_closure(group: &FactorGroup, seed: &[usize]) -> Subgroup {
    let mut set: BTreeSet<usize> = BTreeSet::new();
    set.insert(IDENTITY);
    let mut queue: Vec<usize> = Vec::new();
    for &s in seed {
        if set.insert(s) {
            queue.push(s);
        }
    }
    while let Some(x) = queue.pop() {
        let mut found: Vec<usize> = Vec::new();
        for &y in &set {
            for p in [group.mul(x, y), group.mul(y, x)] {
                if !set.contains(&p) {
                    found.push(p);
                }
            }
        }
        for p in found {
            if set.insert(p) {
                queue.push(p);
            }
        }
    }
    let elements: Vec<usize> = set.into_iter().collect();
    assert_eq!(group.order() % elements.len(), 0, "Lagrange");
    Subgroup {
        tag: group.tag(),
        elements,
    }
}

/// Canonical representative of the right coset `S·x`: the minimum element
/// index in the coset. Two elements get the same representative exactly when
/// they lie in the same right coset.
pub fn canonical_coset_rep(group: &FactorGroup, sub: &Subgroup, x: usize) -> usize {
    debug_assert_eq!(group.tag(), sub.tag());
    sub.elements
        .iter()
        .map(|&s| group.mul(s, x))
        .min()
        .expect("subgroup is never empty")
}

/// On-disk description of one factor group.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        order: usize,
    },
    Symmetric {
        degree: usize,
    },
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn build(&self, tag: Factor) -> Result<FactorGroup> {
        match self {
            GroupSpec::Cyclic { order } => FactorGroup::cyclic(tag, *order),
            GroupSpec::Symmetric { degree } => FactorGroup::symmetric(tag, *degree),
            GroupSpec::Table { order, table } => {
                if table.len() != *order {
                    return Err(Error::InvalidGroup(format!(
                        "declared order {order} but table has {} rows",
                        table.len()
                    )));
                }
                FactorGroup::from_table(tag, table.clone())
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    #[serde(rename = "A")]
    a: GroupSpec,
    #[serde(rename = "B")]
    b: GroupSpec,
}

/// Load a `{"A": <spec>, "B": <spec>}` group file and validate both tables.
pub fn load_group_file(path: &Path) -> Result<GroupPair> {
    let text = std::fs::read_to_string(path)?;
    group_pair_from_json(&text)
}

pub fn group_pair_from_json(text: &str) -> Result<GroupPair> {
    let file: GroupFile = serde_json::from_str(text)?;
    Ok(GroupPair::new(
        file.a.build(Factor::A)?,
        file.b.build(Factor::B)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        let g = FactorGroup::cyclic(Factor::A, 3).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 2), 0);
        assert_eq!(g.mul(2, 2), 1);
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn order_one_rejected() {
        let err = FactorGroup::cyclic(Factor::A, 1).unwrap_err();
        assert!(err.to_string().contains("order must be at least 2"));
    }

    #[test]
    fn symmetric_three() {
        let g = FactorGroup::symmetric(Factor::A, 3).unwrap();
        assert_eq!(g.order(), 6);
        // lexicographic order: 0=[012], 1=[021], 2=[102], 3=[120], 4=[201], 5=[210]
        assert_eq!(g.mul(2, 2), 0); // a transposition squares to the identity
        assert_eq!(g.mul(3, 3), 4); // the 3-cycles are mutually inverse
        assert_eq!(g.inv(3), 4);
    }

    #[test]
    fn table_validation_names_axiom() {
        // mul(1,1) = 1 leaves element 1 without an inverse.
        let err = FactorGroup::from_table(Factor::A, vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("inverse axiom"), "{err}");

        let err = FactorGroup::from_table(Factor::A, vec![vec![0, 1], vec![1]]).unwrap_err();
        assert!(err.to_string().contains("square"), "{err}");

        let err = FactorGroup::from_table(Factor::A, vec![vec![0, 1], vec![1, 9]]).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");

        let err = FactorGroup::from_table(Factor::A, vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(err.to_string().contains("identity axiom"), "{err}");

        // Latin square with identity and inverses that is not associative:
        // the "subtraction table" of Z3, mul(i, j) = i - j.
        let err =
            FactorGroup::from_table(Factor::A, vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]])
                .unwrap_err();
        assert!(
            err.to_string().contains("identity axiom") || err.to_string().contains("associativity"),
            "{err}"
        );
    }

    #[test]
    fn closure_examples() {
        let z3 = FactorGroup::cyclic(Factor::B, 3).unwrap();
        assert_eq!(subgroup_closure(&z3, &[]).elements(), &[0]);
        assert_eq!(subgroup_closure(&z3, &[1]).elements(), &[0, 1, 2]);

        let s3 = FactorGroup::symmetric(Factor::A, 3).unwrap();
        assert_eq!(subgroup_closure(&s3, &[2]).elements(), &[0, 2]);
        assert_eq!(subgroup_closure(&s3, &[3]).elements(), &[0, 3, 4]);
        assert_eq!(subgroup_closure(&s3, &[2, 3]).len(), 6);
    }

    #[test]
    fn closure_is_seed_order_independent() {
        let s3 = FactorGroup::symmetric(Factor::A, 3).unwrap();
        assert_eq!(
            subgroup_closure(&s3, &[2, 3]).elements(),
            subgroup_closure(&s3, &[3, 2]).elements()
        );
    }

    #[test]
    fn coset_reps() {
        let z4 = FactorGroup::cyclic(Factor::A, 4).unwrap();
        let s = subgroup_closure(&z4, &[2]); // {0, 2}
        assert_eq!(s.elements(), &[0, 2]);
        assert_eq!(canonical_coset_rep(&z4, &s, 0), 0);
        assert_eq!(canonical_coset_rep(&z4, &s, 2), 0);
        assert_eq!(canonical_coset_rep(&z4, &s, 1), 1);
        assert_eq!(canonical_coset_rep(&z4, &s, 3), 1);

        let triv = Subgroup::trivial(Factor::A);
        for x in 0..4 {
            assert_eq!(canonical_coset_rep(&z4, &triv, x), x);
        }
    }

    #[test]
    fn conjugate_subgroup() {
        let s3 = FactorGroup::symmetric(Factor::A, 3).unwrap();
        let s = subgroup_closure(&s3, &[2]); // {id, (01)}
        let c = s.conjugate(&s3, 3); // conjugate by a 3-cycle: another transposition
        assert_eq!(c.len(), 2);
        assert!(c.contains(0));
        assert_ne!(c.elements(), s.elements());
    }

    #[test]
    fn group_file_kinds() {
        let pair = group_pair_from_json(
            r#"{"A":{"kind":"cyclic","order":2},"B":{"kind":"symmetric","degree":3}}"#,
        )
        .unwrap();
        assert_eq!(pair.factor(Factor::A).order(), 2);
        assert_eq!(pair.factor(Factor::B).order(), 6);

        let pair = group_pair_from_json(
            r#"{"A":{"kind":"table","order":2,"table":[[0,1],[1,0]]},"B":{"kind":"cyclic","order":3}}"#,
        )
        .unwrap();
        assert_eq!(pair.factor(Factor::A).mul(1, 1), 0);

        assert!(
            group_pair_from_json(r#"{"A":{"kind":"nope"},"B":{"kind":"cyclic","order":3}}"#)
                .is_err()
        );
    }

    #[test]
    fn syllable_order_is_a_then_b() {
        let pair = GroupPair::new(
            FactorGroup::cyclic(Factor::A, 2).unwrap(),
            FactorGroup::cyclic(Factor::B, 3).unwrap(),
        );
        let syls: Vec<String> = pair.syllables().iter().map(|s| s.to_string()).collect();
        assert_eq!(syls, ["a1", "b1", "b2"]);
    }
}
