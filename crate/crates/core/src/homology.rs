//! Cycle space of the dual graph, the involution acting on it, and the
//! anti-invariant lattice X⁻ = { (ω − i(ω))/2 : ω an integral cycle }.
//!
//! Every value of an edge coordinate on X⁻ lies in ½ℤ, so chains are
//! stored in doubled units: the stored integer is twice the true
//! coefficient.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{require_valid, EquivariantGraph};
use crate::intmat::{gcd_all, hermite_normal_form};

/// Default cap on the number of simple cycles enumerated per graph.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// A 1-chain in doubled units, indexed by edge index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    pub coords: Vec<i64>,
}

impl Chain {
    pub fn zero(edges: usize) -> Self {
        Chain { coords: vec![0; edges] }
    }

    /// Builds a chain from true (undoubled) integer coefficients.
    pub fn from_integral(coeffs: &[i64]) -> Self {
        Chain { coords: coeffs.iter().map(|c| 2 * c).collect() }
    }

    /// True coefficient at `edge`, if it is an integer.
    pub fn integral_at(&self, edge: usize) -> Option<i64> {
        let c = self.coords[edge];
        (c % 2 == 0).then_some(c / 2)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c % 2 == 0)
    }

    pub fn negated(&self) -> Self {
        Chain { coords: self.coords.iter().map(|c| -c).collect() }
    }

    /// Boundary in doubled units, indexed by vertex.
    pub fn boundary(&self, g: &EquivariantGraph) -> Vec<i64> {
        let mut out = vec![0; g.vertex_count()];
        for (edge, &c) in g.edges().iter().zip(&self.coords) {
            out[edge.head] += c;
            out[edge.tail] -= c;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub chains: Vec<Chain>,
    pub tree_edges: Vec<usize>,
    /// The chord closing each cycle, parallel to `chains`.
    pub chords: Vec<usize>,
}

/// Fundamental cycle basis from a BFS spanning forest.
///
/// BFS starts from the smallest vertex of each component and scans
/// incident edges in index order. Each chord gets coefficient +1 and is
/// closed by the tree path from its head back to its tail.
pub fn fundamental_cycles(g: &EquivariantGraph) -> CycleBasis {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        incident[edge.tail].push(e);
        if edge.head != edge.tail {
            incident[edge.head].push(e);
        }
    }

    // path_to_root[v]: signed tree path from the component root to v
    let mut path_to_root: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut is_tree = vec![false; m];
    for root in 0..n {
        if path_to_root[root].is_some() {
            continue;
        }
        path_to_root[root] = Some(vec![0; m]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                let edge = &g.edges()[e];
                let (other, sign) = if edge.tail == v { (edge.head, 1) } else { (edge.tail, -1) };
                if path_to_root[other].is_some() {
                    continue;
                }
                let mut p = path_to_root[v].clone().expect("visited");
                p[e] += sign;
                path_to_root[other] = Some(p);
                is_tree[e] = true;
                queue.push_back(other);
            }
        }
    }

    let mut chains = Vec::new();
    let mut chords = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if is_tree[e] {
            continue;
        }
        let to_tail = path_to_root[edge.tail].as_ref().expect("spanning forest");
        let to_head = path_to_root[edge.head].as_ref().expect("spanning forest");
        let mut coeffs: Vec<i64> = to_tail.iter().zip(to_head).map(|(t, h)| t - h).collect();
        coeffs[e] += 1;
        chains.push(Chain::from_integral(&coeffs));
        chords.push(e);
    }
    CycleBasis {
        chains,
        tree_edges: (0..m).filter(|&e| is_tree[e]).collect(),
        chords,
    }
}

/// Pushes a chain forward along the involution: the coefficient of the
/// image at edge i(j) is the coefficient of `c` at j. Requires a
/// compatible orientation.
pub fn involution_on_chain(g: &EquivariantGraph, c: &Chain) -> Chain {
    let mut out = Chain::zero(c.coords.len());
    for (j, &x) in c.coords.iter().enumerate() {
        out.coords[g.edge_image(j)] = x;
    }
    out
}

/// Canonical basis of X⁻ with per-edge image data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntiInvariantLattice {
    /// Hermite normal form rows; row k stores 2·x_k for a generator x_k.
    pub basis: Vec<Chain>,
    pub rank: usize,
    /// gcd over the basis of each doubled edge coordinate.
    pub edge_gcds: Vec<i64>,
}

impl AntiInvariantLattice {
    pub fn basis_rows(&self) -> Vec<Vec<i64>> {
        self.basis.iter().map(|c| c.coords.clone()).collect()
    }

    /// Doubled values of the edge coordinate `edge` on the basis.
    pub fn edge_values(&self, edge: usize) -> Vec<i64> {
        self.basis.iter().map(|c| c.coords[edge]).collect()
    }
}

/// Computes X⁻ from the images (ω − i(ω)) of a fundamental cycle basis.
///
/// Works on any compatibly oriented equivariant graph, connected or not.
pub fn anti_invariant_lattice(g: &EquivariantGraph) -> Result<AntiInvariantLattice> {
    if !g.is_compatibly_oriented() {
        return Err(Error::NotOriented);
    }
    let basis = fundamental_cycles(g);
    let generators: Vec<Vec<i64>> = basis
        .chains
        .iter()
        .map(|omega| {
            let image = involution_on_chain(g, omega);
            // (2ω − 2i(ω))/2 = 2·(ω − i(ω))/2
            omega.coords.iter().zip(&image.coords).map(|(a, b)| (a - b) / 2).collect()
        })
        .collect();
    let mut rows = generators;
    if rows.is_empty() {
        rows.push(vec![0; g.edge_count()]);
    }
    let hnf = hermite_normal_form(&rows);
    let edge_gcds = (0..g.edge_count()).map(|j| gcd_all(hnf.iter().map(|r| r[j]))).collect();
    Ok(AntiInvariantLattice {
        rank: hnf.len(),
        basis: hnf.into_iter().map(|coords| Chain { coords }).collect(),
        edge_gcds,
    })
}

/// `n_e − c_e` for a valid connected graph.
pub fn rank_formula(g: &EquivariantGraph) -> Result<i64> {
    let counts = require_valid(g)?;
    Ok(counts.n_e as i64 - counts.c_e as i64)
}

/// Image type of an edge coordinate functional restricted to X⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeType {
    /// Identically zero on X⁻.
    Vanishing = 1,
    /// Image ℤ.
    Integral = 2,
    /// Image ½ℤ.
    HalfIntegral = 3,
}

impl EdgeType {
    pub fn number(self) -> u8 {
        self as u8
    }

    /// Multiplier used in condition (*): 1 for type 2, 2 for type 3.
    pub fn multiplier(self) -> Option<i64> {
        match self {
            EdgeType::Vanishing => None,
            EdgeType::Integral => Some(1),
            EdgeType::HalfIntegral => Some(2),
        }
    }

    fn from_gcd(gcd: i64) -> Option<Self> {
        match gcd {
            0 => Some(EdgeType::Vanishing),
            2 => Some(EdgeType::Integral),
            1 => Some(EdgeType::HalfIntegral),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub orbit_rep: usize,
    pub partner: usize,
    pub edge_type: EdgeType,
    pub gcd: i64,
}

impl EdgeClass {
    pub fn multiplier(&self) -> Option<i64> {
        self.edge_type.multiplier()
    }
}

/// One class per edge orbit, from the gcd of the coordinate over the HNF
/// basis. A gcd outside {0, 1, 2} is reported as an invariant violation.
pub fn classify_edges(lat: &AntiInvariantLattice, g: &EquivariantGraph) -> Result<Vec<EdgeClass>> {
    g.edge_orbits()
        .into_iter()
        .map(|(rep, partner)| {
            let gcd = lat.edge_gcds[rep];
            let edge_type = EdgeType::from_gcd(gcd).ok_or_else(|| {
                Error::Invariant(format!("edge `{}` has coordinate gcd {gcd} on X⁻", g.edge_id(rep)))
            })?;
            Ok(EdgeClass { orbit_rep: rep, partner, edge_type, gcd })
        })
        .collect()
}

/// Every simple cycle of the graph exactly once up to sign and rotation.
///
/// Each cycle is reported starting from its lowest-index edge, traversed
/// along that edge's orientation, and continued through higher-index edges
/// only; this fixes both the rotation and the direction.
pub fn simple_cycles(g: &EquivariantGraph, cap: usize) -> Result<Vec<Chain>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        if !edge.is_loop() {
            incident[edge.tail].push(e);
            incident[edge.head].push(e);
        }
    }

    let mut out = Vec::new();
    for (start, edge) in g.edges().iter().enumerate() {
        let mut coeffs = vec![0i64; m];
        coeffs[start] = 1;
        if edge.is_loop() {
            push_capped(&mut out, Chain::from_integral(&coeffs), cap)?;
            continue;
        }
        let mut on_path = vec![false; n];
        on_path[edge.tail] = true;
        on_path[edge.head] = true;
        let mut search = CycleSearch { g, incident: &incident, start, target: edge.tail, cap, coeffs, on_path, out: &mut out };
        search.extend(edge.head)?;
    }
    Ok(out)
}

struct CycleSearch<'a> {
    g: &'a EquivariantGraph,
    incident: &'a [Vec<usize>],
    start: usize,
    target: usize,
    cap: usize,
    coeffs: Vec<i64>,
    on_path: Vec<bool>,
    out: &'a mut Vec<Chain>,
}

impl CycleSearch<'_> {
    fn extend(&mut self, v: usize) -> Result<()> {
        for &e in &self.incident[v] {
            if e <= self.start || self.coeffs[e] != 0 {
                continue;
            }
            let edge = &self.g.edges()[e];
            let (next, sign) = if edge.tail == v { (edge.head, 1) } else { (edge.tail, -1) };
            if next == self.target {
                self.coeffs[e] = sign;
                push_capped(self.out, Chain::from_integral(&self.coeffs), self.cap)?;
                self.coeffs[e] = 0;
            } else if !self.on_path[next] {
                self.coeffs[e] = sign;
                self.on_path[next] = true;
                self.extend(next)?;
                self.on_path[next] = false;
                self.coeffs[e] = 0;
            }
        }
        Ok(())
    }
}

fn push_capped(out: &mut Vec<Chain>, c: Chain, cap: usize) -> Result<()> {
    if out.len() >= cap {
        return Err(Error::CapExceeded { what: "simple cycle count", cap });
    }
    out.push(c);
    Ok(())
}

/// Types an edge from the simple cycles through it: type 3 when some simple
/// cycle meets the edge once and misses its partner, type 1 when every
/// cycle gives z_j((ω − i(ω))/2) = 0, type 2 otherwise.
pub fn classify_edge_by_cycles(g: &EquivariantGraph, edge: usize, cap: usize) -> Result<EdgeType> {
    let cycles = simple_cycles(g, cap)?;
    Ok(classify_with_cycles(g, edge, &cycles))
}

/// As [`classify_edge_by_cycles`], over a precomputed cycle list.
pub fn classify_with_cycles(g: &EquivariantGraph, edge: usize, cycles: &[Chain]) -> EdgeType {
    let partner = g.edge_image(edge);
    let mut vanishing = true;
    for omega in cycles {
        let (a, b) = (omega.coords[edge] / 2, omega.coords[partner] / 2);
        if a.abs() == 1 && b == 0 {
            return EdgeType::HalfIntegral;
        }
        if a != b {
            vanishing = false;
        }
    }
    if vanishing {
        EdgeType::Vanishing
    } else {
        EdgeType::Integral
    }
}
