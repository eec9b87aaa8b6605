//! Friedman–Smith degenerations, detected combinatorially.
//!
//! A graph degenerates from a Friedman–Smith example with 2n nodes when its
//! vertices split into two involution-invariant parts, each inducing a
//! connected subgraph, such that every edge between the parts is exchanged
//! by the involution and there are 2n of them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bold_subgraph, EquivariantGraph};

/// Default cap on vertex orbits for the bipartition search.
pub const DEFAULT_ORBIT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FsWitness {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    /// Exchanged edge pairs crossing between the parts, `(rep, partner)`.
    pub crossing_orbits: Vec<(usize, usize)>,
    pub crossing_count: usize,
}

/// Two disjoint vertex sets, each inducing a connected invariant subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphPair {
    pub first: BTreeSet<usize>,
    pub second: BTreeSet<usize>,
}

fn induces_connected(g: &EquivariantGraph, part: &[bool]) -> bool {
    g.components_where(|v| part[v], |_| true).len() == 1
}

fn is_invariant(g: &EquivariantGraph, part: &[bool]) -> bool {
    (0..g.vertex_count()).all(|v| part[v] == part[g.vertex_image(v)])
}

fn crossing_edges(g: &EquivariantGraph, part1: &[bool], part2: &[bool]) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| (part1[e.tail] && part2[e.head]) || (part2[e.tail] && part1[e.head]))
        .map(|(i, _)| i)
        .collect()
}

fn mask(g: &EquivariantGraph, vertices: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut m = vec![false; g.vertex_count()];
    for v in vertices {
        m[v] = true;
    }
    m
}

/// Builds a witness from a bipartition mask, or `None` if the bipartition
/// does not meet the requirements.
fn witness_for(g: &EquivariantGraph, in_part1: &[bool]) -> Option<FsWitness> {
    let in_part2: Vec<bool> = in_part1.iter().map(|b| !b).collect();
    if !in_part1.contains(&true) || !in_part2.contains(&true) {
        return None;
    }
    if !is_invariant(g, in_part1) || !induces_connected(g, in_part1) || !induces_connected(g, &in_part2) {
        return None;
    }
    let crossing = crossing_edges(g, in_part1, &in_part2);
    if crossing.iter().any(|&e| g.is_fixed_edge(e)) {
        return None;
    }
    let crossing_orbits = crossing
        .iter()
        .filter(|&&e| e < g.edge_image(e))
        .map(|&e| (e, g.edge_image(e)))
        .collect();
    Some(FsWitness {
        part1: (0..g.vertex_count()).filter(|&v| in_part1[v]).collect(),
        part2: (0..g.vertex_count()).filter(|&v| in_part2[v]).collect(),
        crossing_orbits,
        crossing_count: crossing.len(),
    })
}

/// All equivariant bipartitions with connected parts and only exchanged
/// crossing edges. The part holding the smallest vertex is `part1`, so each
/// bipartition appears once.
pub fn fs_bipartitions(g: &EquivariantGraph, orbit_cap: usize) -> Result<Vec<FsWitness>> {
    let orbits = g.vertex_orbits();
    if orbits.len() > orbit_cap {
        return Err(Error::CapExceeded { what: "vertex orbit count", cap: orbit_cap });
    }
    if orbits.len() < 2 {
        return Ok(Vec::new());
    }
    // orbits[0] contains vertex 0 and always sits in part1
    let free = orbits.len() - 1;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << free) - 1 {
        let mut in_part1 = vec![false; g.vertex_count()];
        for (k, &(a, b)) in orbits.iter().enumerate() {
            if k == 0 || bits >> (k - 1) & 1 == 1 {
                in_part1[a] = true;
                in_part1[b] = true;
            }
        }
        if let Some(w) = witness_for(g, &in_part1) {
            out.push(w);
        }
    }
    Ok(out)
}

/// The bipartition with the most crossing edges among those with at least
/// `min_edges`; ties go to the first in enumeration order.
pub fn is_fs_degeneration(g: &EquivariantGraph, min_edges: usize, orbit_cap: usize) -> Result<Option<FsWitness>> {
    if min_edges < 2 || !min_edges.is_multiple_of(2) {
        return Err(Error::BadArgument(format!("minimum edge count must be even and at least 2, got {min_edges}")));
    }
    let mut best: Option<FsWitness> = None;
    for w in fs_bipartitions(g, orbit_cap)? {
        if w.crossing_count >= min_edges && best.as_ref().is_none_or(|b| w.crossing_count > b.crossing_count) {
            best = Some(w);
        }
    }
    Ok(best)
}

/// Independent re-check of every witness requirement.
pub fn check_witness(g: &EquivariantGraph, w: &FsWitness) -> std::result::Result<(), String> {
    let p1 = mask(g, w.part1.iter().copied());
    let p2 = mask(g, w.part2.iter().copied());
    if (0..g.vertex_count()).any(|v| p1[v] == p2[v]) {
        return Err("parts do not partition the vertex set".into());
    }
    if w.part1.is_empty() || w.part2.is_empty() {
        return Err("empty part".into());
    }
    if !is_invariant(g, &p1) || !is_invariant(g, &p2) {
        return Err("part not invariant under the involution".into());
    }
    if !induces_connected(g, &p1) || !induces_connected(g, &p2) {
        return Err("part does not induce a connected subgraph".into());
    }
    let crossing = crossing_edges(g, &p1, &p2);
    if let Some(&e) = crossing.iter().find(|&&e| g.is_fixed_edge(e)) {
        return Err(format!("bold edge `{}` crosses between the parts", g.edge_id(e)));
    }
    if crossing.len() != w.crossing_count || crossing.len() != 2 * w.crossing_orbits.len() {
        return Err(format!(
            "crossing count {} disagrees with {} crossing edges in {} orbits",
            w.crossing_count,
            crossing.len(),
            w.crossing_orbits.len()
        ));
    }
    Ok(())
}

/// Enlarges two equivariant subgraphs, joined by at least `min_edges`
/// exchanged edges and by no bold path, into a bipartition witness.
///
/// Bold components meeting a part are absorbed into it; then each
/// component of the rest is absorbed into the only part it touches, and
/// everything left over joins the second part.
pub fn complete_subgraph_pair(g: &EquivariantGraph, pair: &SubgraphPair, min_edges: usize) -> Result<FsWitness> {
    let bad = |msg: String| Err(Error::BadArgument(msg));
    let mut p1 = mask(g, pair.first.iter().copied());
    let mut p2 = mask(g, pair.second.iter().copied());
    if pair.first.is_empty() || pair.second.is_empty() {
        return bad("both subgraphs must be nonempty".into());
    }
    if pair.first.intersection(&pair.second).next().is_some() {
        return bad("subgraphs are not disjoint".into());
    }
    if pair.first.iter().chain(&pair.second).any(|&v| v >= g.vertex_count()) {
        return bad("vertex index out of range".into());
    }
    for part in [&p1, &p2] {
        if !is_invariant(g, part) || !induces_connected(g, part) {
            return bad("each subgraph must be connected and invariant".into());
        }
    }
    let initial = crossing_edges(g, &p1, &p2).into_iter().filter(|&e| !g.is_fixed_edge(e)).count();
    if initial < min_edges {
        return bad(format!("subgraphs are joined by {initial} ordinary edges, need {min_edges}"));
    }

    let bold = bold_subgraph(g);
    for comp in &bold.components {
        let meets1 = comp.iter().any(|&v| p1[v]);
        let meets2 = comp.iter().any(|&v| p2[v]);
        match (meets1, meets2) {
            (true, true) => return bad("a bold path joins the subgraphs".into()),
            (true, false) => comp.iter().for_each(|&v| p1[v] = true),
            (false, true) => comp.iter().for_each(|&v| p2[v] = true),
            (false, false) => {}
        }
    }

    let rest = g.components_where(|v| !p1[v] && !p2[v], |_| true);
    for comp in rest {
        let in_comp = mask(g, comp.iter().copied());
        let touches = |part: &[bool]| {
            g.edges()
                .iter()
                .any(|e| (in_comp[e.tail] && part[e.head]) || (in_comp[e.head] && part[e.tail]))
        };
        match (touches(&p1), touches(&p2)) {
            (true, false) => comp.iter().for_each(|&v| p1[v] = true),
            (false, true) => comp.iter().for_each(|&v| p2[v] = true),
            _ => {}
        }
    }

    // everything not in the enlarged first part forms the second part
    let witness = witness_for(g, &p1).ok_or_else(|| {
        Error::Invariant("completed subgraph pair does not form a valid bipartition".into())
    })?;
    debug_assert!(witness.crossing_count >= initial);
    Ok(witness)
}

/// Genus splittings (g₁', g₂') of the quotient components indexing the
/// irreducible components of the Friedman–Smith locus with 2n nodes.
pub fn fs_component_genera(genus: i64, n: i64) -> Result<Vec<(i64, i64)>> {
    if n < 2 || genus < n - 1 {
        return Err(Error::BadArgument(format!("need n >= 2 and g >= n - 1, got g = {genus}, n = {n}")));
    }
    let total = genus - n + 1;
    Ok((0..=total / 2).map(|k| (k, total - k)).collect())
}
