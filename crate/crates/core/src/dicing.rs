//! Dicing tests for the edge functionals on X⁻ and on 2X⁻.
//!
//! A family of integral functionals dices a lattice iff every nonsingular
//! d×d system `f_k = n_k` has its solution in the lattice. In coordinates
//! where the lattice is ℤ^d this holds iff every maximal minor of the
//! functional matrix is 0 or ±1.

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{auto_orient, require_valid, EquivariantGraph};
use crate::homology::{anti_invariant_lattice, classify_edges, AntiInvariantLattice, EdgeClass, EdgeType};
use crate::intmat::{bareiss_determinant, hnf_coordinates, is_integral, rank, solve_rational, Rational};

/// Largest rank accepted by [`dicing_bruteforce`].
pub const DEFAULT_BRUTEFORCE_RANK: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatticeTag {
    /// `m_j z_j` against X⁻: condition (*).
    #[serde(rename = "STAR")]
    Star,
    /// `z_j` against 2X⁻: condition (**).
    #[serde(rename = "STARSTAR")]
    StarStar,
}

impl LatticeTag {
    pub fn condition_name(self) -> &'static str {
        match self {
            LatticeTag::Star => "(*)",
            LatticeTag::StarStar => "(**)",
        }
    }
}

/// Functionals written in the canonical basis of the tagged lattice; one
/// row per non-vanishing edge orbit, sorted by representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalMatrix {
    pub rows: Vec<(usize, Vec<i64>)>,
    pub tag: LatticeTag,
    pub dim: usize,
}

impl FunctionalMatrix {
    pub fn row_values(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    fn submatrix(&self, subset: &[usize]) -> Vec<Vec<i64>> {
        subset.iter().map(|&k| self.rows[k].1.clone()).collect()
    }
}

/// `m_j z_j` on the HNF basis of X⁻: the doubled coordinate divided by G_j.
pub fn star_matrix(lat: &AntiInvariantLattice, classes: &[EdgeClass]) -> FunctionalMatrix {
    build_matrix(lat, classes, LatticeTag::Star)
}

/// `z_j` on the basis 2·(HNF basis of X⁻) of 2X⁻: the doubled coordinate.
pub fn star_star_matrix(lat: &AntiInvariantLattice, classes: &[EdgeClass]) -> FunctionalMatrix {
    build_matrix(lat, classes, LatticeTag::StarStar)
}

fn build_matrix(lat: &AntiInvariantLattice, classes: &[EdgeClass], tag: LatticeTag) -> FunctionalMatrix {
    let rows = classes
        .iter()
        .filter(|c| c.edge_type != EdgeType::Vanishing)
        .map(|c| {
            let values = lat.edge_values(c.orbit_rep);
            let row = match tag {
                LatticeTag::Star => values.iter().map(|v| v / c.gcd).collect(),
                LatticeTag::StarStar => values,
            };
            (c.orbit_rep, row)
        })
        .collect();
    FunctionalMatrix { rows, tag, dim: lat.rank }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DicingWitness {
    /// Orbit representatives (edge indices) of the selected rows.
    pub row_subset: Vec<usize>,
    pub determinant: i64,
    /// Position within `row_subset` of the unit right-hand side.
    pub rhs: usize,
    /// Solution in the basis of the tagged lattice; some entry is
    /// non-integral.
    #[serde(serialize_with = "ser_rationals")]
    pub coords: Vec<Rational>,
    /// The solution point in edge coordinates, doubled units.
    #[serde(serialize_with = "ser_rationals")]
    pub point_doubled: Vec<Rational>,
    pub membership_defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DicingVerdict {
    pub is_dicing: bool,
    pub witness: Option<DicingWitness>,
}

pub(crate) fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// Minor criterion with witness extraction.
///
/// Row subsets are scanned in lexicographic order; the first with
/// |det| ≥ 2 yields the witness, solved against the first unit
/// right-hand side whose solution leaves the lattice.
pub fn is_dicing(m: &FunctionalMatrix, lat: &AntiInvariantLattice) -> DicingVerdict {
    let d = m.dim;
    for subset in (0..m.rows.len()).combinations(d) {
        let a = m.submatrix(&subset);
        let det = bareiss_determinant(&a);
        if det.abs() < 2 {
            continue;
        }
        for rhs in 0..d {
            let coords = cramer_unit_solve(&a, det, rhs);
            if coords.iter().all(is_integral) {
                continue;
            }
            let point_doubled = lattice_point_doubled(lat, m.tag, &coords);
            let membership_defect = format!(
                "lattice coordinates ({}) are not all integers",
                coords.iter().map(ToString::to_string).join(", ")
            );
            return DicingVerdict {
                is_dicing: false,
                witness: Some(DicingWitness {
                    row_subset: subset.iter().map(|&k| m.rows[k].0).collect(),
                    determinant: det,
                    rhs,
                    coords,
                    point_doubled,
                    membership_defect,
                }),
            };
        }
        unreachable!("an integral inverse forces |det| = 1");
    }
    DicingVerdict { is_dicing: true, witness: None }
}

/// Column `rhs` of `a⁻¹`, by Cramer's rule.
fn cramer_unit_solve(a: &[Vec<i64>], det: i64, rhs: usize) -> Vec<Rational> {
    let d = a.len();
    (0..d)
        .map(|col| {
            let replaced: Vec<Vec<i64>> = a
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let mut row = row.clone();
                    row[col] = i64::from(r == rhs);
                    row
                })
                .collect();
            Rational::new(bareiss_determinant(&replaced), det)
        })
        .collect()
}

/// Doubled edge coordinates of the point with the given coordinates in the
/// tagged lattice basis.
fn lattice_point_doubled(lat: &AntiInvariantLattice, tag: LatticeTag, coords: &[Rational]) -> Vec<Rational> {
    // X⁻ basis x_k has doubled coords h_k; 2X⁻ basis 2x_k has doubled coords 2h_k
    let scale = match tag {
        LatticeTag::Star => Rational::one(),
        LatticeTag::StarStar => Rational::from_integer(2),
    };
    let edges = lat.basis.first().map_or(0, |b| b.coords.len());
    (0..edges)
        .map(|j| {
            lat.basis
                .iter()
                .zip(coords)
                .map(|(row, &t)| t * scale * Rational::from_integer(row.coords[j]))
                .sum()
        })
        .collect()
}

/// Re-checks a witness without the determinant machinery: substitutes the
/// point into the selected hyperplane equations and solves for it against
/// the HNF basis to confirm it is not a lattice point.
pub fn verify_witness(
    w: &DicingWitness,
    lat: &AntiInvariantLattice,
    classes: &[EdgeClass],
    tag: LatticeTag,
) -> std::result::Result<(), String> {
    if w.determinant.abs() < 2 {
        return Err(format!("witness determinant {} is unimodular", w.determinant));
    }
    for (k, &edge) in w.row_subset.iter().enumerate() {
        let class = classes
            .iter()
            .find(|c| c.orbit_rep == edge)
            .ok_or_else(|| format!("edge {edge} is not an orbit representative"))?;
        let z = w.point_doubled[edge] / Rational::from_integer(2);
        let value = match tag {
            LatticeTag::Star => z * Rational::from_integer(class.multiplier().ok_or("type-1 row in witness")?),
            LatticeTag::StarStar => z,
        };
        let expected = Rational::from_integer(i64::from(k == w.rhs));
        if value != expected {
            return Err(format!("hyperplane {k}: functional is {value}, expected {expected}"));
        }
    }
    // Doubled point p = 2x. x ∈ X⁻ iff p ∈ span_ℤ(h); x ∈ 2X⁻ iff p ∈ span_ℤ(2h).
    let coeffs = hnf_coordinates(&lat.basis_rows(), &w.point_doubled)
        .ok_or("witness point is not in the real span of X⁻")?;
    let in_lattice = match tag {
        LatticeTag::Star => coeffs.iter().all(is_integral),
        LatticeTag::StarStar => coeffs.iter().all(|c| is_integral(&(c / Rational::from_integer(2)))),
    };
    if in_lattice {
        return Err("witness point lies in the lattice".into());
    }
    Ok(())
}

/// Definition-level dicing test: for every nonsingular d-subset of rows and
/// every unit right-hand side, solve exactly and test integrality.
pub fn dicing_bruteforce(m: &FunctionalMatrix, max_rank: usize) -> Result<bool> {
    let d = m.dim;
    if d > max_rank {
        return Err(Error::CapExceeded { what: "brute-force dicing rank", cap: max_rank });
    }
    for subset in (0..m.rows.len()).combinations(d) {
        let a: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&k| m.rows[k].1.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        for rhs in 0..d {
            let b: Vec<Rational> = (0..d).map(|k| if k == rhs { Rational::one() } else { Rational::zero() }).collect();
            match solve_rational(&a, &b) {
                None => break,
                Some(t) if !t.iter().all(is_integral) => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(true)
}

/// Results of the whole pipeline for one graph.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: EquivariantGraph,
    pub n_e: usize,
    pub c_e: usize,
    pub lattice: AntiInvariantLattice,
    pub classes: Vec<EdgeClass>,
    pub star: FunctionalMatrix,
    pub star_star: FunctionalMatrix,
    pub star_verdict: DicingVerdict,
    pub star_star_verdict: DicingVerdict,
}

impl Analysis {
    pub fn dim(&self) -> usize {
        self.lattice.rank
    }

    pub fn has_type2(&self) -> bool {
        self.classes.iter().any(|c| c.edge_type == EdgeType::Integral)
    }
}

/// Validate, orient, compute X⁻, classify, and run both dicing tests.
pub fn analyze(g: &EquivariantGraph) -> Result<Analysis> {
    let counts = require_valid(g)?;
    let graph = auto_orient(g);
    let lattice = anti_invariant_lattice(&graph)?;
    let classes = classify_edges(&lattice, &graph)?;
    let star = star_matrix(&lattice, &classes);
    let star_star = star_star_matrix(&lattice, &classes);
    let star_verdict = is_dicing(&star, &lattice);
    let star_star_verdict = is_dicing(&star_star, &lattice);
    Ok(Analysis {
        graph,
        n_e: counts.n_e,
        c_e: counts.c_e,
        lattice,
        classes,
        star,
        star_star,
        star_verdict,
        star_star_verdict,
    })
}

pub fn condition_star(g: &EquivariantGraph) -> Result<DicingVerdict> {
    Ok(analyze(g)?.star_verdict)
}

pub fn condition_star_star(g: &EquivariantGraph) -> Result<DicingVerdict> {
    Ok(analyze(g)?.star_star_verdict)
}

/// Deletes both edges of each chosen orbit and reports whether the
/// anti-invariant lattice of what remains is zero.
///
/// `orbit_reps` must name exactly `d` edge orbits, none of type 1.
pub fn deletion_criterion(g: &EquivariantGraph, orbit_reps: &[usize]) -> Result<bool> {
    let analysis = analyze(g)?;
    if orbit_reps.len() != analysis.dim() {
        return Err(Error::BadArgument(format!(
            "deletion needs exactly d = {} orbits, got {}",
            analysis.dim(),
            orbit_reps.len()
        )));
    }
    deletion_leaves_no_anti_invariants(&analysis, orbit_reps)
}

pub(crate) fn deletion_leaves_no_anti_invariants(analysis: &Analysis, orbit_reps: &[usize]) -> Result<bool> {
    let g = &analysis.graph;
    let mut drop = Vec::with_capacity(2 * orbit_reps.len());
    for &rep in orbit_reps {
        let class = analysis
            .classes
            .iter()
            .find(|c| c.orbit_rep == rep)
            .ok_or_else(|| Error::BadArgument(format!("edge `{}` is not an orbit representative", g.edge_id(rep))))?;
        if class.edge_type == EdgeType::Vanishing {
            return Err(Error::BadArgument(format!("edge `{}` is of type 1", g.edge_id(rep))));
        }
        drop.push(class.orbit_rep);
        if class.partner != class.orbit_rep {
            drop.push(class.partner);
        }
    }
    let remainder = g.without_edges(&drop);
    Ok(anti_invariant_lattice(&remainder)?.rank == 0)
}

/// Whether the rows of `m` for the given orbit representatives are
/// linearly independent.
pub fn rows_independent(m: &FunctionalMatrix, orbit_reps: &[usize]) -> bool {
    let rows: Vec<Vec<i64>> = orbit_reps
        .iter()
        .filter_map(|rep| m.rows.iter().find(|(r, _)| r == rep).map(|(_, v)| v.clone()))
        .collect();
    rows.len() == orbit_reps.len() && rank(&rows) == rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn matrix(rows: &[&[i64]], tag: LatticeTag) -> FunctionalMatrix {
        FunctionalMatrix {
            rows: rows.iter().enumerate().map(|(k, r)| (k, r.to_vec())).collect(),
            tag,
            dim: rows.first().map_or(0, |r| r.len()),
        }
    }

    #[test]
    fn empty_matrix_dices() {
        let m = FunctionalMatrix { rows: vec![], tag: LatticeTag::Star, dim: 0 };
        assert!(dicing_bruteforce(&m, 4).unwrap());
        let lat = AntiInvariantLattice { basis: vec![], rank: 0, edge_gcds: vec![] };
        assert!(is_dicing(&m, &lat).is_dicing);
    }

    #[test]
    fn bruteforce_rank_cap() {
        let m = matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], LatticeTag::Star);
        assert!(matches!(dicing_bruteforce(&m, 2), Err(Error::CapExceeded { .. })));
        assert!(dicing_bruteforce(&m, 3).unwrap());
    }

    #[test]
    fn bruteforce_finds_half_points() {
        assert!(!dicing_bruteforce(&matrix(&[&[1, 0], &[-1, 2]], LatticeTag::Star), 4).unwrap());
        assert!(dicing_bruteforce(&matrix(&[&[1, 0], &[1, 1], &[0, 1]], LatticeTag::Star), 4).unwrap());
    }

    #[test]
    fn deletion_rejects_wrong_sizes() {
        let g = parse_graph(
            r#"{"vertices":[{"id":"v1"},{"id":"v2"}],
            "edges":[{"id":"e1","from":"v1","to":"v2"},{"id":"e2","from":"v1","to":"v2"}],
            "involution":{"vertices":{"v1":"v1","v2":"v2"},"edges":{"e1":"e2","e2":"e1"}}}"#,
        )
        .unwrap();
        assert!(matches!(deletion_criterion(&g, &[]), Err(Error::BadArgument(_))));
        assert!(deletion_criterion(&g, &[0]).unwrap());
    }
}
