//! Structured, id-based reports of an analysis. These are what the CLI
//! prints in structured mode; field order is fixed, so output is
//! byte-reproducible.

use serde::{Deserialize, Serialize};

use crate::dicing::{analyze, Analysis, DicingVerdict, FunctionalMatrix};
use crate::error::Result;
use crate::fs_detect::{fs_bipartitions, FsWitness};
use crate::graph::{validate, EquivariantGraph, Violation};
use crate::verify::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub code: String,
    pub message: String,
}

impl From<&Violation> for ViolationReport {
    fn from(v: &Violation) -> Self {
        ViolationReport { code: v.code.to_string(), message: v.message.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub representative: String,
    pub partner: String,
    #[serde(rename = "type")]
    pub edge_type: u8,
    pub m: Option<i64>,
    pub gcd: i64,
    /// Values of the coordinate on the X⁻ basis, doubled units.
    pub values_doubled: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub d: usize,
    pub n_e: usize,
    pub c_e: usize,
    pub orbits: Vec<OrbitReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub subset: Vec<String>,
    pub determinant: i64,
    /// Edge whose hyperplane carries right-hand side 1.
    pub rhs: String,
    pub lattice_coords: Vec<String>,
    /// `(edge, 2·coordinate)` for every edge.
    pub point_doubled: Vec<(String, String)>,
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub condition: String,
    pub d: usize,
    pub rows: usize,
    pub cols: usize,
    pub is_dicing: bool,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsWitnessReport {
    pub part1: Vec<String>,
    pub part2: Vec<String>,
    pub crossing_orbits: Vec<(String, String)>,
    pub crossing_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdVerdict {
    pub min_edges: usize,
    pub present: bool,
    pub witness: Option<FsWitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsReport {
    pub schema_version: u32,
    pub thresholds: Vec<ThresholdVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub valid: bool,
    pub violations: Vec<ViolationReport>,
    pub classification: ClassificationReport,
    pub star: VerdictReport,
    pub starstar: VerdictReport,
    pub fs: FsReport,
    /// In the indeterminacy locus iff (*) fails.
    pub indeterminacy: bool,
}

pub fn classification_report(a: &Analysis) -> ClassificationReport {
    let g = &a.graph;
    ClassificationReport {
        schema_version: SCHEMA_VERSION,
        d: a.dim(),
        n_e: a.n_e,
        c_e: a.c_e,
        orbits: a
            .classes
            .iter()
            .map(|c| OrbitReport {
                representative: g.edge_id(c.orbit_rep).to_string(),
                partner: g.edge_id(c.partner).to_string(),
                edge_type: c.edge_type.number(),
                m: c.multiplier(),
                gcd: c.gcd,
                values_doubled: a.lattice.edge_values(c.orbit_rep),
            })
            .collect(),
    }
}

pub fn verdict_report(g: &EquivariantGraph, m: &FunctionalMatrix, v: &DicingVerdict) -> VerdictReport {
    VerdictReport {
        condition: m.tag.condition_name().to_string(),
        d: m.dim,
        rows: m.rows.len(),
        cols: m.dim,
        is_dicing: v.is_dicing,
        witness: v.witness.as_ref().map(|w| WitnessReport {
            subset: w.row_subset.iter().map(|&e| g.edge_id(e).to_string()).collect(),
            determinant: w.determinant,
            rhs: g.edge_id(w.row_subset[w.rhs]).to_string(),
            lattice_coords: w.coords.iter().map(ToString::to_string).collect(),
            point_doubled: w
                .point_doubled
                .iter()
                .enumerate()
                .map(|(e, x)| (g.edge_id(e).to_string(), x.to_string()))
                .collect(),
            defect: w.membership_defect.clone(),
        }),
    }
}

pub fn fs_witness_report(g: &EquivariantGraph, w: &FsWitness) -> FsWitnessReport {
    FsWitnessReport {
        part1: w.part1.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
        part2: w.part2.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
        crossing_orbits: w
            .crossing_orbits
            .iter()
            .map(|&(a, b)| (g.edge_id(a).to_string(), g.edge_id(b).to_string()))
            .collect(),
        crossing_count: w.crossing_count,
    }
}

/// FS verdicts at each even threshold, each with the best witness.
pub fn fs_report(g: &EquivariantGraph, thresholds: &[usize], orbit_cap: usize) -> Result<FsReport> {
    let all = fs_bipartitions(g, orbit_cap)?;
    let thresholds = thresholds
        .iter()
        .map(|&min_edges| {
            let mut best: Option<&FsWitness> = None;
            for w in all.iter().filter(|w| w.crossing_count >= min_edges) {
                if best.is_none_or(|b| w.crossing_count > b.crossing_count) {
                    best = Some(w);
                }
            }
            ThresholdVerdict {
                min_edges,
                present: best.is_some(),
                witness: best.map(|w| fs_witness_report(g, w)),
            }
        })
        .collect();
    Ok(FsReport { schema_version: SCHEMA_VERSION, thresholds })
}

/// The full analysis of one graph. Fails with [`crate::Error::Invalid`] on
/// an invalid graph.
pub fn check_report(g: &EquivariantGraph, thresholds: &[usize], orbit_cap: usize) -> Result<CheckReport> {
    let validation = validate(g);
    let a = analyze(g)?;
    Ok(CheckReport {
        schema_version: SCHEMA_VERSION,
        valid: validation.ok,
        violations: validation.violations.iter().map(ViolationReport::from).collect(),
        classification: classification_report(&a),
        star: verdict_report(&a.graph, &a.star, &a.star_verdict),
        starstar: verdict_report(&a.graph, &a.star_star, &a.star_star_verdict),
        fs: fs_report(&a.graph, thresholds, orbit_cap)?,
        indeterminacy: !a.star_verdict.is_dicing,
    })
}
