//! Exhaustive generation of small equivariant graphs and cross-checking of
//! every criterion against every other on each of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dicing::{
    deletion_leaves_no_anti_invariants, dicing_bruteforce, is_dicing, rows_independent, star_matrix,
    star_star_matrix, verify_witness, Analysis, FunctionalMatrix, LatticeTag,
};
use crate::error::{Error, Result};
use crate::fs_detect::{check_witness, fs_bipartitions, DEFAULT_ORBIT_CAP};
use crate::graph::{auto_orient, require_valid, EdgeDoc, EquivariantGraph, GraphDocument, InvolutionDoc, VertexDoc};
use crate::homology::{
    anti_invariant_lattice, classify_edges, classify_with_cycles, involution_on_chain, simple_cycles, EdgeType,
    DEFAULT_CYCLE_CAP,
};
use crate::intmat::{hermite_normal_form, rank};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest rank for which the brute-force dicing oracle runs.
pub const ORACLE_MAX_RANK: usize = 4;
pub const MAX_VERTEX_ORBITS: usize = 6;
pub const MAX_EDGE_ORBITS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub max_fixed_vertices: usize,
    pub max_vertex_pairs: usize,
    pub max_fixed_edges: usize,
    pub max_edge_pairs: usize,
    /// Cap on fixed edges plus exchanged pairs together.
    pub max_edge_orbits: Option<usize>,
    pub allow_loops: bool,
    pub dedup: bool,
}

impl Default for GenSpec {
    /// The acceptance family: ≤ 2 fixed vertices, ≤ 1 exchanged vertex
    /// pair, ≤ 4 edge orbits, loops allowed.
    fn default() -> Self {
        GenSpec {
            max_fixed_vertices: 2,
            max_vertex_pairs: 1,
            max_fixed_edges: 4,
            max_edge_pairs: 4,
            max_edge_orbits: Some(4),
            allow_loops: true,
            dedup: false,
        }
    }
}

impl GenSpec {
    pub fn empty() -> Self {
        GenSpec {
            max_fixed_vertices: 0,
            max_vertex_pairs: 0,
            max_fixed_edges: 0,
            max_edge_pairs: 0,
            max_edge_orbits: None,
            allow_loops: false,
            dedup: false,
        }
    }

    pub fn check_caps(&self) -> Result<()> {
        if self.max_fixed_vertices + self.max_vertex_pairs > MAX_VERTEX_ORBITS {
            return Err(Error::CapExceeded { what: "vertex orbit bound", cap: MAX_VERTEX_ORBITS });
        }
        if self.edge_orbit_bound() > MAX_EDGE_ORBITS {
            return Err(Error::CapExceeded { what: "edge orbit bound", cap: MAX_EDGE_ORBITS });
        }
        Ok(())
    }

    fn edge_orbit_bound(&self) -> usize {
        let sum = self.max_fixed_edges + self.max_edge_pairs;
        self.max_edge_orbits.map_or(sum, |t| t.min(sum))
    }
}

/// Abstract vertex: fixed vertices are `0..f`, pair `k` is `f + 2k` and
/// `f + 2k + 1`.
#[derive(Clone, Copy)]
struct Shape {
    fixed: usize,
    pairs: usize,
}

impl Shape {
    fn n(self) -> usize {
        self.fixed + 2 * self.pairs
    }

    fn sigma(self, v: usize) -> usize {
        if v < self.fixed {
            v
        } else {
            self.fixed + ((v - self.fixed) ^ 1)
        }
    }

    fn name(self, v: usize) -> String {
        if v < self.fixed {
            format!("v{}", v + 1)
        } else {
            let k = (v - self.fixed) / 2 + 1;
            if (v - self.fixed).is_multiple_of(2) {
                format!("u{k}")
            } else {
                format!("w{k}")
            }
        }
    }
}

/// Edge orbit type: a fixed edge between two fixed vertices, or an
/// exchanged pair `{a -> b, σa -> σb}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Slot {
    Fixed(usize, usize),
    Pair(usize, usize),
}

fn canonical_slot(shape: Shape, slot: Slot) -> Slot {
    let sorted = |a: usize, b: usize| if a <= b { (a, b) } else { (b, a) };
    match slot {
        Slot::Fixed(a, b) => {
            let (a, b) = sorted(a, b);
            Slot::Fixed(a, b)
        }
        Slot::Pair(a, b) => {
            let x = sorted(a, b);
            let y = sorted(shape.sigma(a), shape.sigma(b));
            let (a, b) = x.min(y);
            Slot::Pair(a, b)
        }
    }
}

fn slot_types(shape: Shape, allow_loops: bool) -> Vec<Slot> {
    let mut types = BTreeSet::new();
    for a in 0..shape.n() {
        for b in a..shape.n() {
            if a == b && !allow_loops {
                continue;
            }
            if a < shape.fixed && b < shape.fixed {
                types.insert(Slot::Fixed(a, b));
            }
            types.insert(canonical_slot(shape, Slot::Pair(a, b)));
        }
    }
    types.into_iter().collect()
}

fn build_graph(shape: Shape, slots: &[Slot]) -> EquivariantGraph {
    let vertices = (0..shape.n()).map(|v| VertexDoc { id: shape.name(v), genus: None }).collect();
    let mut edges = Vec::new();
    let mut edge_map = BTreeMap::new();
    for (k, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Fixed(a, b) => {
                let id = format!("b{:02}", k + 1);
                edges.push(EdgeDoc { id: id.clone(), from: shape.name(a), to: shape.name(b) });
                edge_map.insert(id.clone(), id);
            }
            Slot::Pair(a, b) => {
                let (e, f) = (format!("e{:02}", k + 1), format!("f{:02}", k + 1));
                edges.push(EdgeDoc { id: e.clone(), from: shape.name(a), to: shape.name(b) });
                edges.push(EdgeDoc {
                    id: f.clone(),
                    from: shape.name(shape.sigma(a)),
                    to: shape.name(shape.sigma(b)),
                });
                edge_map.insert(e.clone(), f.clone());
                edge_map.insert(f, e);
            }
        }
    }
    let doc = GraphDocument {
        vertices,
        edges,
        involution: InvolutionDoc {
            vertices: (0..shape.n()).map(|v| (shape.name(v), shape.name(shape.sigma(v)))).collect(),
            edges: edge_map,
        },
    };
    EquivariantGraph::from_document(&doc).expect("generated documents are well formed")
}

/// Smallest slot list over all vertex relabelings commuting with σ.
fn canonical_key(shape: Shape, slots: &[Slot]) -> Vec<Slot> {
    let mut best: Option<Vec<Slot>> = None;
    for fixed_perm in (0..shape.fixed).permutations(shape.fixed) {
        for pair_perm in (0..shape.pairs).permutations(shape.pairs) {
            for flips in 0u32..(1 << shape.pairs) {
                let relabel = |v: usize| -> usize {
                    if v < shape.fixed {
                        fixed_perm[v]
                    } else {
                        let k = (v - shape.fixed) / 2;
                        let side = ((v - shape.fixed) % 2) ^ (flips >> k & 1) as usize;
                        shape.fixed + 2 * pair_perm[k] + side
                    }
                };
                let mut key: Vec<Slot> = slots
                    .iter()
                    .map(|&s| match s {
                        Slot::Fixed(a, b) => canonical_slot(shape, Slot::Fixed(relabel(a), relabel(b))),
                        Slot::Pair(a, b) => canonical_slot(shape, Slot::Pair(relabel(a), relabel(b))),
                    })
                    .collect();
                key.sort_unstable();
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// All connected equivariant multigraphs within the bounds, in a fixed
/// order: by fixed-vertex count, then pair count, then edge multiset.
pub fn enumerate_graphs(spec: &GenSpec) -> Result<Vec<EquivariantGraph>> {
    spec.check_caps()?;
    let mut out = Vec::new();
    for fixed in 0..=spec.max_fixed_vertices {
        for pairs in 0..=spec.max_vertex_pairs {
            if fixed + pairs == 0 {
                continue;
            }
            let shape = Shape { fixed, pairs };
            let types = slot_types(shape, spec.allow_loops);
            let mut seen = BTreeSet::new();
            for size in 0..=spec.edge_orbit_bound() {
                for slots in types.iter().copied().combinations_with_replacement(size) {
                    let fixed_count = slots.iter().filter(|s| matches!(s, Slot::Fixed(..))).count();
                    if fixed_count > spec.max_fixed_edges || size - fixed_count > spec.max_edge_pairs {
                        continue;
                    }
                    if spec.dedup && !seen.insert(canonical_key(shape, &slots)) {
                        continue;
                    }
                    let g = build_graph(shape, &slots);
                    if g.is_connected() {
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Checker configuration; `mutant` deliberately corrupts the (**) matrix so
/// the harness can prove it detects failures.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub cycle_cap: usize,
    pub orbit_cap: usize,
    pub mutant: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { cycle_cap: DEFAULT_CYCLE_CAP, orbit_cap: DEFAULT_ORBIT_CAP, mutant: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRecord {
    pub graph_encoding: String,
    pub d: usize,
    pub n_e: usize,
    pub c_e: usize,
    pub star: bool,
    pub starstar: bool,
    pub fs2: bool,
    pub fs4: bool,
    pub has_type2: bool,
    pub has_loops: bool,
    pub checks: BTreeMap<String, bool>,
}

impl ConsistencyRecord {
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k.as_str()).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

/// Runs every criterion on one graph and records how they relate. Failing
/// checks are data; only invalid input and exceeded caps are errors.
pub fn check_graph(g: &EquivariantGraph, opts: &CheckOptions) -> Result<ConsistencyRecord> {
    let counts = require_valid(g)?;
    let graph = auto_orient(g);
    let lattice = anti_invariant_lattice(&graph)?;
    let d = lattice.rank;
    let mut record = ConsistencyRecord {
        graph_encoding: g.encode(),
        d,
        n_e: counts.n_e,
        c_e: counts.c_e,
        star: false,
        starstar: false,
        fs2: false,
        fs4: false,
        has_type2: false,
        has_loops: g.has_loops(),
        checks: BTreeMap::new(),
    };
    let mut check = |name: &str, ok: bool| {
        record.checks.insert(name.to_string(), ok);
    };

    check("rank", d as i64 == counts.n_e as i64 - counts.c_e as i64);
    check(
        "antisymmetry",
        lattice
            .basis
            .iter()
            .all(|row| (0..graph.edge_count()).all(|j| row.coords[j] == -row.coords[graph.edge_image(j)])),
    );
    check(
        "cycle_conservation",
        lattice.basis.iter().all(|row| row.boundary(&graph).iter().all(|&b| b == 0)),
    );

    let classes = match classify_edges(&lattice, &graph) {
        Ok(c) => c,
        Err(_) => {
            record.checks.insert("gcd_bound".into(), false);
            return Ok(record);
        }
    };
    check("gcd_bound", true);
    check(
        "bold_type1",
        classes
            .iter()
            .filter(|c| c.orbit_rep == c.partner)
            .all(|c| c.edge_type == EdgeType::Vanishing),
    );

    let cycles = simple_cycles(&graph, opts.cycle_cap)?;
    check(
        "classifier_agreement",
        classes.iter().all(|c| classify_with_cycles(&graph, c.orbit_rep, &cycles) == c.edge_type),
    );
    // X⁻ generated by all simple cycles equals X⁻ from the fundamental ones
    let mut from_all: Vec<Vec<i64>> = cycles
        .iter()
        .map(|omega| {
            let image = involution_on_chain(&graph, omega);
            omega.coords.iter().zip(&image.coords).map(|(a, b)| (a - b) / 2).collect()
        })
        .collect();
    from_all.push(vec![0; graph.edge_count()]);
    check("simple_cycle_generation", hermite_normal_form(&from_all) == lattice.basis_rows());

    let star = star_matrix(&lattice, &classes);
    let mut star_star = star_star_matrix(&lattice, &classes);
    if opts.mutant {
        star_star = FunctionalMatrix { tag: LatticeTag::StarStar, ..star.clone() };
    }
    let star_verdict = is_dicing(&star, &lattice);
    let star_star_verdict = is_dicing(&star_star, &lattice);
    let analysis = Analysis {
        graph: graph.clone(),
        n_e: counts.n_e,
        c_e: counts.c_e,
        lattice: lattice.clone(),
        classes: classes.clone(),
        star: star.clone(),
        star_star: star_star.clone(),
        star_verdict: star_verdict.clone(),
        star_star_verdict: star_star_verdict.clone(),
    };
    let has_type2 = analysis.has_type2();

    check("full_rank", rank(&star.row_values()) == d && rank(&star_star.row_values()) == d);
    check(
        "row_scaling",
        star.rows.iter().zip(&star_star.rows).all(|((rep, s), (_, ss))| {
            let gcd = classes.iter().find(|c| c.orbit_rep == *rep).map_or(0, |c| c.gcd);
            s.iter().zip(ss).all(|(a, b)| a * gcd == *b)
        }),
    );
    let witnesses_ok = [(&star_verdict, LatticeTag::Star), (&star_star_verdict, LatticeTag::StarStar)]
        .into_iter()
        .all(|(v, tag)| match &v.witness {
            None => v.is_dicing,
            Some(w) => !v.is_dicing && verify_witness(w, &lattice, &classes, tag).is_ok(),
        });
    check("witness_soundness", witnesses_ok);
    if d <= ORACLE_MAX_RANK {
        let oracle_star = dicing_bruteforce(&star, ORACLE_MAX_RANK)?;
        let oracle_star_star = dicing_bruteforce(&star_star, ORACLE_MAX_RANK)?;
        check(
            "oracle_dicing",
            oracle_star == star_verdict.is_dicing && oracle_star_star == star_star_verdict.is_dicing,
        );
    }

    let reps: Vec<usize> = star.rows.iter().map(|(r, _)| *r).collect();
    let mut deletion_ok = true;
    for subset in reps.iter().copied().combinations(d) {
        if deletion_leaves_no_anti_invariants(&analysis, &subset)? != rows_independent(&star, &subset) {
            deletion_ok = false;
            break;
        }
    }
    check("deletion_criterion", deletion_ok);

    let bipartitions = fs_bipartitions(&graph, opts.orbit_cap)?;
    check("fs_witness", bipartitions.iter().all(|w| check_witness(&graph, w).is_ok() && w.crossing_count % 2 == 0));
    let fs2 = bipartitions.iter().any(|w| w.crossing_count >= 2);
    let fs4 = bipartitions.iter().any(|w| w.crossing_count >= 4);
    let star_ok = star_verdict.is_dicing;
    let star_star_ok = star_star_verdict.is_dicing;

    check("star_iff_no_fs4", star_ok == !fs4);
    check("starstar_iff_no_fs2", star_star_ok == !fs2);
    check("starstar_iff_star_without_type2", star_star_ok == (star_ok && !has_type2));
    check("starstar_implies_star", !star_star_ok || star_ok);
    check("type2_blocks_starstar", !(has_type2 && d >= 1) || !star_star_ok);
    check("fs_monotone", !fs4 || fs2);

    record.star = star_ok;
    record.starstar = star_star_ok;
    record.fs2 = fs2;
    record.fs4 = fs4;
    record.has_type2 = has_type2;
    Ok(record)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub schema_version: u32,
    pub spec: GenSpec,
    pub graphs: usize,
    pub failed_graphs: usize,
    pub graphs_with_loops: usize,
    pub checks: BTreeMap<String, CheckTally>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub summary: SuiteSummary,
    pub report_path: PathBuf,
    pub summary_path: PathBuf,
    pub counterexample_path: PathBuf,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.summary.failed_graphs == 0
    }
}

/// A counterexample line: the graph document plus the failing checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(flatten)]
    pub graph: GraphDocument,
    pub failed_checks: Vec<String>,
}

pub fn summary_path_for(report: &Path) -> PathBuf {
    suffixed(report, ".summary.json")
}

pub fn counterexample_path_for(report: &Path) -> PathBuf {
    suffixed(report, ".counterexamples.jsonl")
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Checks every enumerated graph and writes the newline-delimited report,
/// a summary document, and a counterexample file beside it.
pub fn run_suite(spec: &GenSpec, report_path: &Path, opts: &CheckOptions) -> Result<SuiteReport> {
    let graphs = enumerate_graphs(spec)?;
    let records: Vec<ConsistencyRecord> = graphs
        .par_iter()
        .map(|g| check_graph(g, opts))
        .collect::<Result<_>>()?;

    let mut checks: BTreeMap<String, CheckTally> = BTreeMap::new();
    let mut report = BufWriter::new(File::create(report_path)?);
    let counterexample_path = counterexample_path_for(report_path);
    let mut counter = BufWriter::new(File::create(&counterexample_path)?);
    let mut failed_graphs = 0;
    for (g, rec) in graphs.iter().zip(&records) {
        serde_json::to_writer(&mut report, rec).map_err(std::io::Error::from)?;
        report.write_all(b"\n")?;
        for (name, &ok) in &rec.checks {
            let tally = checks.entry(name.clone()).or_default();
            if ok {
                tally.pass += 1;
            } else {
                tally.fail += 1;
            }
        }
        if !rec.passed() {
            failed_graphs += 1;
            let line = Counterexample {
                graph: g.to_document(),
                failed_checks: rec.failed_checks().into_iter().map(String::from).collect(),
            };
            serde_json::to_writer(&mut counter, &line).map_err(std::io::Error::from)?;
            counter.write_all(b"\n")?;
        }
    }
    report.flush()?;
    counter.flush()?;

    let summary = SuiteSummary {
        schema_version: SCHEMA_VERSION,
        spec: spec.clone(),
        graphs: records.len(),
        failed_graphs,
        graphs_with_loops: records.iter().filter(|r| r.has_loops).count(),
        checks,
    };
    let summary_path = summary_path_for(report_path);
    let mut out = serde_json::to_string_pretty(&summary).map_err(std::io::Error::from)?;
    out.push('\n');
    std::fs::write(&summary_path, out)?;
    Ok(SuiteReport { summary, report_path: report_path.to_path_buf(), summary_path, counterexample_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_family() {
        let spec = GenSpec { max_fixed_vertices: 1, ..GenSpec::empty() };
        let graphs = enumerate_graphs(&spec).unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].vertex_count(), 1);
        assert_eq!(graphs[0].edge_count(), 0);
    }

    #[test]
    fn empty_spec_is_empty() {
        assert!(enumerate_graphs(&GenSpec::empty()).unwrap().is_empty());
    }

    #[test]
    fn caps_are_enforced() {
        let spec = GenSpec { max_fixed_vertices: 5, max_vertex_pairs: 2, ..GenSpec::default() };
        assert!(matches!(enumerate_graphs(&spec), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn dedup_keeps_one_per_class() {
        // two fixed vertices, one exchanged pair between them: relabeling
        // v1 <-> v2 identifies nothing new, but loops at v1 vs v2 coincide
        let spec = GenSpec {
            max_fixed_vertices: 2,
            max_edge_pairs: 2,
            allow_loops: true,
            ..GenSpec::empty()
        };
        let all = enumerate_graphs(&spec).unwrap();
        let dedup = enumerate_graphs(&GenSpec { dedup: true, ..spec }).unwrap();
        assert!(dedup.len() < all.len());
        let encodings: BTreeSet<String> = dedup.iter().map(EquivariantGraph::encode).collect();
        assert_eq!(encodings.len(), dedup.len());
    }

    #[test]
    fn sigma_swaps_pairs() {
        let s = Shape { fixed: 2, pairs: 2 };
        assert_eq!((0..s.n()).map(|v| s.sigma(v)).collect::<Vec<_>>(), vec![0, 1, 3, 2, 5, 4]);
        assert_eq!(s.name(3), "w1");
    }
}
