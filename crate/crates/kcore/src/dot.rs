//! DOT rendering of core complexes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::complex::CoreComplex;

/// Render the complex as a DOT digraph. The base vertex is double-circled.
/// Parallel transitions between the same ordered vertex pair within one
/// factor (which arise from nontrivial stabilizers) collapse to a single
/// edge labeled with the least syllable, so the drawing shows the coset
/// structure rather than every group element. Output is deterministic.
pub fn export_dot(c: &CoreComplex) -> String {
    let mut out = String::new();
    out.push_str("digraph core {\n");
    for v in 0..c.vertex_count() {
        let shape = if v == c.base() {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {v} [shape={shape}];").unwrap();
    }
    let mut drawn = BTreeSet::new();
    for v in 0..c.vertex_count() {
        for s in c.groups().syllables() {
            if let Some(w) = c.trans(v, s) {
                if drawn.insert((v, s.tag, w)) {
                    writeln!(out, "  {v} -> {w} [label=\"{s}\"];").unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
