//! Equivariant multigraphs: the dual graph of a nodal curve together with
//! the involution it inherits.
//!
//! Vertices and edges are kept sorted by id, so every index-based structure
//! built on top of a graph (chains, matrices, reports) has a reproducible
//! column order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: Option<u32>,
}

/// An edge oriented from `tail` to `head`; both are vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl OrientedEdge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantGraph {
    vertices: Vec<Vertex>,
    edges: Vec<OrientedEdge>,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
    oriented: bool,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
}

// ---------------------------------------------------------------------------
// Document format

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionDoc {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

/// The JSON graph document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub involution: InvolutionDoc,
}

/// Parses a graph document. The result is neither validated nor oriented.
pub fn parse_graph(text: &str) -> Result<EquivariantGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    EquivariantGraph::from_document(&doc)
}

impl EquivariantGraph {
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let mut vertices: Vec<Vertex> = doc
            .vertices
            .iter()
            .map(|v| Vertex { id: v.id.clone(), genus: v.genus })
            .collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let mut vertex_lookup = HashMap::with_capacity(vertices.len());
        for (idx, v) in vertices.iter().enumerate() {
            if vertex_lookup.insert(v.id.clone(), idx).is_some() {
                return Err(Error::DuplicateId { kind: "vertex", id: v.id.clone() });
            }
        }

        let resolve_vertex = |id: &str, ctx: &str| {
            vertex_lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::DanglingReference(format!("{ctx} refers to unknown vertex `{id}`")))
        };

        let mut edge_docs: Vec<&EdgeDoc> = doc.edges.iter().collect();
        edge_docs.sort_by(|a, b| a.id.cmp(&b.id));
        let mut edges = Vec::with_capacity(edge_docs.len());
        let mut edge_lookup = HashMap::with_capacity(edge_docs.len());
        for (idx, e) in edge_docs.iter().enumerate() {
            if edge_lookup.insert(e.id.clone(), idx).is_some() {
                return Err(Error::DuplicateId { kind: "edge", id: e.id.clone() });
            }
            let ctx = format!("edge `{}`", e.id);
            edges.push(OrientedEdge {
                id: e.id.clone(),
                tail: resolve_vertex(&e.from, &ctx)?,
                head: resolve_vertex(&e.to, &ctx)?,
            });
        }

        let mut vertex_map = vec![usize::MAX; vertices.len()];
        for (src, dst) in &doc.involution.vertices {
            let s = resolve_vertex(src, "involution vertex map")?;
            let d = resolve_vertex(dst, "involution vertex map")?;
            vertex_map[s] = d;
        }
        if let Some(v) = vertex_map.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Malformed(format!(
                "involution vertex map has no entry for `{}`",
                vertices[v].id
            )));
        }

        let resolve_edge = |id: &str| {
            edge_lookup.get(id).copied().ok_or_else(|| {
                Error::DanglingReference(format!("involution edge map refers to unknown edge `{id}`"))
            })
        };
        let mut edge_map = vec![usize::MAX; edges.len()];
        for (src, dst) in &doc.involution.edges {
            edge_map[resolve_edge(src)?] = resolve_edge(dst)?;
        }
        if let Some(e) = edge_map.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Malformed(format!(
                "involution edge map has no entry for `{}`",
                edges[e].id
            )));
        }

        Ok(EquivariantGraph {
            vertices,
            edges,
            vertex_map,
            edge_map,
            oriented: false,
            vertex_lookup,
            edge_lookup,
        })
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), genus: v.genus })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: self.vertices[e.tail].id.clone(),
                    to: self.vertices[e.head].id.clone(),
                })
                .collect(),
            involution: InvolutionDoc {
                vertices: self
                    .vertices
                    .iter()
                    .enumerate()
                    .map(|(v, vx)| (vx.id.clone(), self.vertices[self.vertex_map[v]].id.clone()))
                    .collect(),
                edges: self
                    .edges
                    .iter()
                    .enumerate()
                    .map(|(e, ex)| (ex.id.clone(), self.edges[self.edge_map[e]].id.clone()))
                    .collect(),
            },
        }
    }

    /// Compact canonical JSON text of the graph document.
    pub fn encode(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("graph documents always serialize")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[OrientedEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge_image(&self, e: usize) -> usize {
        self.edge_map[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn is_fixed_vertex(&self, v: usize) -> bool {
        self.vertex_map[v] == v
    }

    pub fn is_fixed_edge(&self, e: usize) -> bool {
        self.edge_map[e] == e
    }

    /// True once `auto_orient` has normalized this graph.
    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    /// Whether `i(tail -> head) = (i(tail) -> i(head))` holds for every edge.
    pub fn is_compatibly_oriented(&self) -> bool {
        self.edges.iter().enumerate().all(|(e, edge)| {
            let image = &self.edges[self.edge_map[e]];
            image.tail == self.vertex_map[edge.tail] && image.head == self.vertex_map[edge.head]
        })
    }

    /// Edge orbits as `(representative, partner)`, representative being the
    /// smaller index; fixed edges appear as `(e, e)`.
    pub fn edge_orbits(&self) -> Vec<(usize, usize)> {
        orbits(&self.edge_map)
    }

    pub fn vertex_orbits(&self) -> Vec<(usize, usize)> {
        orbits(&self.vertex_map)
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(OrientedEdge::is_loop)
    }

    /// Connected components, as sorted vertex index lists, of the subgraph
    /// keeping the vertices for which `keep_vertex` holds and the edges for
    /// which `keep_edge` holds with both endpoints kept.
    pub fn components_where(
        &self,
        keep_vertex: impl Fn(usize) -> bool,
        keep_edge: impl Fn(usize) -> bool,
    ) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for (e, edge) in self.edges.iter().enumerate() {
            if keep_edge(e) && keep_vertex(edge.tail) && keep_vertex(edge.head) {
                uf.union(edge.tail, edge.head);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in (0..n).filter(|&v| keep_vertex(v)) {
            by_root.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
        comps.sort();
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_where(|_| true, |_| true).len() == 1
    }

    /// The same graph with some edges dropped (the involution restricted).
    /// `drop` must be closed under the involution.
    pub fn without_edges(&self, drop: &[usize]) -> EquivariantGraph {
        let mut doc = self.to_document();
        let dropped: std::collections::HashSet<&str> = drop.iter().map(|&e| self.edge_id(e)).collect();
        doc.edges.retain(|e| !dropped.contains(e.id.as_str()));
        doc.involution.edges.retain(|k, _| !dropped.contains(k.as_str()));
        let mut g = EquivariantGraph::from_document(&doc).expect("subgraph of a well-formed graph");
        g.oriented = self.oriented;
        g
    }

    /// Renames every vertex and edge. `vertex_names[v]` is the new id of
    /// vertex `v`; likewise for edges. Structure is unchanged.
    pub fn relabeled(&self, vertex_names: &[String], edge_names: &[String]) -> Result<EquivariantGraph> {
        if vertex_names.len() != self.vertex_count() || edge_names.len() != self.edge_count() {
            return Err(Error::BadArgument("relabeling has the wrong length".into()));
        }
        let doc = GraphDocument {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(v, vx)| VertexDoc { id: vertex_names[v].clone(), genus: vx.genus })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, ex)| EdgeDoc {
                    id: edge_names[e].clone(),
                    from: vertex_names[ex.tail].clone(),
                    to: vertex_names[ex.head].clone(),
                })
                .collect(),
            involution: InvolutionDoc {
                vertices: (0..self.vertex_count())
                    .map(|v| (vertex_names[v].clone(), vertex_names[self.vertex_map[v]].clone()))
                    .collect(),
                edges: (0..self.edge_count())
                    .map(|e| (edge_names[e].clone(), edge_names[self.edge_map[e]].clone()))
                    .collect(),
            },
        };
        EquivariantGraph::from_document(&doc)
    }
}

fn orbits(map: &[usize]) -> Vec<(usize, usize)> {
    (0..map.len()).filter(|&x| map[x] >= x).map(|x| (x, map[x])).collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeps component roots deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Counts filled in only for a valid graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedCounts {
    pub bold_vertices: Vec<usize>,
    pub bold_edges: Vec<usize>,
    /// Number of exchanged edge pairs.
    pub n_e: usize,
    /// Number of exchanged vertex pairs.
    pub c_e: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub derived: Option<DerivedCounts>,
}

pub fn validate(g: &EquivariantGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |code: &'static str, message: String| violations.push(Violation { code, message });

    if g.vertex_count() == 0 {
        push("empty", "graph has no vertices".into());
    }
    for v in 0..g.vertex_count() {
        if g.vertex_map[g.vertex_map[v]] != v {
            push(
                "vertex_map_not_involution",
                format!("i(i({})) != {}", g.vertex_id(v), g.vertex_id(v)),
            );
        }
    }
    let mut edge_map_ok = true;
    for e in 0..g.edge_count() {
        if g.edge_map[g.edge_map[e]] != e {
            edge_map_ok = false;
            push(
                "edge_map_not_involution",
                format!("i(i({})) != {}", g.edge_id(e), g.edge_id(e)),
            );
        }
    }
    for (e, edge) in g.edges.iter().enumerate() {
        let image = &g.edges[g.edge_map[e]];
        let mut expected = [g.vertex_map[edge.tail], g.vertex_map[edge.head]];
        let mut actual = [image.tail, image.head];
        expected.sort_unstable();
        actual.sort_unstable();
        if expected != actual {
            push(
                "incidence",
                format!(
                    "endpoints of i({}) = {} are not the image of the endpoints of {}",
                    edge.id, image.id, edge.id
                ),
            );
        }
        if g.edge_map[e] == e && !(g.is_fixed_vertex(edge.tail) && g.is_fixed_vertex(edge.head)) {
            push(
                "type2_node",
                format!("type-2 node unsupported: fixed edge {} has exchanged endpoints", edge.id),
            );
        }
    }
    if g.vertex_count() > 0 && !g.is_connected() {
        push("disconnected", "graph must be connected".into());
    }

    let ok = violations.is_empty();
    let derived = (ok && edge_map_ok).then(|| DerivedCounts {
        bold_vertices: (0..g.vertex_count()).filter(|&v| g.is_fixed_vertex(v)).collect(),
        bold_edges: (0..g.edge_count()).filter(|&e| g.is_fixed_edge(e)).collect(),
        n_e: (0..g.edge_count()).filter(|&e| !g.is_fixed_edge(e)).count() / 2,
        c_e: (0..g.vertex_count()).filter(|&v| !g.is_fixed_vertex(v)).count() / 2,
    });
    ValidationReport { ok, violations, derived }
}

/// Validates and returns the derived counts, or the full violation list.
pub fn require_valid(g: &EquivariantGraph) -> Result<DerivedCounts> {
    let report = validate(g);
    match report.derived {
        Some(d) if report.ok => Ok(d),
        _ => Err(Error::Invalid(report.violations)),
    }
}

/// Normalizes the orientation so that it is compatible with the involution.
///
/// In each exchanged edge pair the edge with the smaller id keeps its
/// orientation and its partner is re-oriented to the image. Fixed edges are
/// untouched (their endpoints are fixed, so any orientation is compatible).
pub fn auto_orient(g: &EquivariantGraph) -> EquivariantGraph {
    let mut out = g.clone();
    for (rep, partner) in g.edge_orbits() {
        if rep == partner {
            continue;
        }
        let src = &g.edges[rep];
        out.edges[partner].tail = g.vertex_map[src.tail];
        out.edges[partner].head = g.vertex_map[src.head];
    }
    out.oriented = true;
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoldSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Connected components of B(Γ), each a sorted vertex list.
    pub components: Vec<Vec<usize>>,
}

/// The subgraph of fixed ("bold") vertices and fixed edges.
pub fn bold_subgraph(g: &EquivariantGraph) -> BoldSubgraph {
    let vertices: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.is_fixed_vertex(v)).collect();
    let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| g.is_fixed_edge(e)).collect();
    let components = g.components_where(|v| g.is_fixed_vertex(v), |e| g.is_fixed_edge(e));
    BoldSubgraph { vertices, edges, components }
}

/// Arithmetic genus of the nodal curve: sum of component genera plus the
/// first Betti number of the dual graph.
pub fn arithmetic_genus(g: &EquivariantGraph) -> Result<i64> {
    let mut total = 0i64;
    for v in &g.vertices {
        total += i64::from(v.genus.ok_or_else(|| Error::MissingGenus(v.id.clone()))?);
    }
    Ok(total + g.edge_count() as i64 - g.vertex_count() as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs2_text(e2_from: &str, e2_to: &str) -> String {
        format!(
            r#"{{"vertices":[{{"id":"v1"}},{{"id":"v2"}}],
               "edges":[{{"id":"e1","from":"v1","to":"v2"}},{{"id":"e2","from":"{e2_from}","to":"{e2_to}"}}],
               "involution":{{"vertices":{{"v1":"v1","v2":"v2"}},"edges":{{"e1":"e2","e2":"e1"}}}}}}"#
        )
    }

    #[test]
    fn parses_fs2() {
        let g = parse_graph(&fs2_text("v1", "v2")).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_oriented());
    }

    #[test]
    fn dangling_edge_map_is_rejected() {
        let text = fs2_text("v1", "v2").replace(r#""e1":"e2""#, r#""e1":"e9""#);
        assert!(matches!(parse_graph(&text), Err(Error::DanglingReference(_))));
    }

    #[test]
    fn duplicate_and_missing_entries_are_rejected() {
        let dup = fs2_text("v1", "v2").replace(r#"{"id":"v2"}"#, r#"{"id":"v1"}"#);
        assert!(matches!(parse_graph(&dup), Err(Error::DuplicateId { kind: "vertex", .. })));
        let partial = fs2_text("v1", "v2").replace(r#","v2":"v2""#, "");
        assert!(matches!(parse_graph(&partial), Err(Error::Malformed(_))));
        assert!(matches!(parse_graph("{not json"), Err(Error::Malformed(_))));
    }

    #[test]
    fn auto_orient_flips_partner() {
        let g = parse_graph(&fs2_text("v2", "v1")).unwrap();
        assert!(!g.is_compatibly_oriented());
        let o = auto_orient(&g);
        let e2 = &o.edges()[o.edge_index("e2").unwrap()];
        assert_eq!((o.vertex_id(e2.tail), o.vertex_id(e2.head)), ("v1", "v2"));
        assert!(o.is_compatibly_oriented());
        assert_eq!(auto_orient(&o), o);
    }

    #[test]
    fn type2_node_is_a_violation() {
        let text = r#"{"vertices":[{"id":"u"},{"id":"w"}],
            "edges":[{"id":"e","from":"u","to":"w"}],
            "involution":{"vertices":{"u":"w","w":"u"},"edges":{"e":"e"}}}"#;
        let report = validate(&parse_graph(text).unwrap());
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.code == "type2_node"));
        assert!(report.derived.is_none());
    }

    #[test]
    fn disconnected_is_a_violation() {
        let text = r#"{"vertices":[{"id":"a"},{"id":"b"}],"edges":[],
            "involution":{"vertices":{"a":"a","b":"b"},"edges":{}}}"#;
        let report = validate(&parse_graph(text).unwrap());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].message, "graph must be connected");
    }

    #[test]
    fn non_involutive_maps_are_violations() {
        let text = r#"{"vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "edges":[{"id":"x","from":"a","to":"b"},{"id":"y","from":"b","to":"c"}],
            "involution":{"vertices":{"a":"b","b":"c","c":"a"},"edges":{"x":"y","y":"y"}}}"#;
        let report = validate(&parse_graph(text).unwrap());
        let codes: Vec<_> = report.violations.iter().map(|v| v.code).collect();
        assert!(codes.contains(&"vertex_map_not_involution"));
        assert!(codes.contains(&"edge_map_not_involution"));
        assert!(codes.contains(&"incidence"));
    }

    #[test]
    fn genus_needs_labels() {
        let g = parse_graph(&fs2_text("v1", "v2")).unwrap();
        assert!(matches!(arithmetic_genus(&g), Err(Error::MissingGenus(_))));
        let single = r#"{"vertices":[{"id":"v","genus":3}],"edges":[],
            "involution":{"vertices":{"v":"v"},"edges":{}}}"#;
        assert_eq!(arithmetic_genus(&parse_graph(single).unwrap()).unwrap(), 3);
    }
}
