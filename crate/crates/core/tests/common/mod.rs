#![allow(dead_code)]

use std::path::PathBuf;

use prym_locus::graph::auto_orient;
use prym_locus::{parse_graph, EquivariantGraph};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> EquivariantGraph {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_graph(&text).unwrap()
}

pub fn oriented(name: &str) -> EquivariantGraph {
    auto_orient(&fixture(name))
}

pub fn edge(g: &EquivariantGraph, id: &str) -> usize {
    g.edge_index(id).unwrap_or_else(|| panic!("no edge {id}"))
}

pub fn vertex(g: &EquivariantGraph, id: &str) -> usize {
    g.vertex_index(id).unwrap_or_else(|| panic!("no vertex {id}"))
}

pub fn vertex_ids(g: &EquivariantGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.vertex_id(v).to_string()).collect()
}

pub const FIXTURES: [&str; 5] = ["fs2", "fs4", "boldbanana", "square", "fs4tail"];
