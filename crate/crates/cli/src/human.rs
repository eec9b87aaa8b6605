use std::fmt::Write;

use prym_locus::report::{CheckReport, ClassificationReport, FsReport, ThresholdVerdict, VerdictReport};
use prym_locus::verify::SuiteSummary;

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

pub fn classification(out: &mut String, r: &ClassificationReport) {
    writeln!(out, "d = {} (n_e = {}, c_e = {})", r.d, r.n_e, r.c_e).unwrap();
    writeln!(out, "edge orbits (values on the X⁻ basis, doubled units ×½):").unwrap();
    for o in &r.orbits {
        let m = o.m.map_or_else(|| "-".to_string(), |m| m.to_string());
        writeln!(
            out,
            "  {}/{}  type {}  m {}  G {}  values {:?}",
            o.representative, o.partner, o.edge_type, m, o.gcd, o.values_doubled
        )
        .unwrap();
    }
}

pub fn verdict(out: &mut String, v: &VerdictReport) {
    writeln!(
        out,
        "condition {}: {} ({}x{} functional matrix)",
        v.condition,
        if v.is_dicing { "HOLDS" } else { "FAILS" },
        v.rows,
        v.cols
    )
    .unwrap();
    if let Some(w) = &v.witness {
        writeln!(out, "  witness rows {{{}}}, determinant {}", w.subset.join(", "), w.determinant).unwrap();
        writeln!(out, "  right-hand side 1 on {}, 0 elsewhere", w.rhs).unwrap();
        writeln!(out, "  lattice coordinates ({})", w.lattice_coords.join(", ")).unwrap();
        let point: Vec<String> = w.point_doubled.iter().map(|(e, x)| format!("{e}: {x}")).collect();
        writeln!(out, "  point (doubled units ×½) {{{}}}", point.join(", ")).unwrap();
        writeln!(out, "  {}", w.defect).unwrap();
    }
}

fn threshold(out: &mut String, t: &ThresholdVerdict) {
    write!(out, "FS degeneration with >= {} edges: {}", t.min_edges, yes_no(t.present)).unwrap();
    if let Some(w) = &t.witness {
        let orbits: Vec<String> = w.crossing_orbits.iter().map(|(a, b)| format!("{a}/{b}")).collect();
        write!(
            out,
            " [{{{}}} | {{{}}}, {} crossing edges: {}]",
            w.part1.join(", "),
            w.part2.join(", "),
            w.crossing_count,
            orbits.join(" ")
        )
        .unwrap();
    }
    out.push('\n');
}

pub fn fs(out: &mut String, r: &FsReport) {
    for t in &r.thresholds {
        threshold(out, t);
    }
}

pub fn check(r: &CheckReport) -> String {
    let mut out = String::new();
    writeln!(out, "validation: {}", if r.valid { "ok" } else { "FAILED" }).unwrap();
    classification(&mut out, &r.classification);
    verdict(&mut out, &r.star);
    verdict(&mut out, &r.starstar);
    fs(&mut out, &r.fs);
    writeln!(out, "indeterminacy: {}", yes_no(r.indeterminacy)).unwrap();
    out
}

pub fn components(g: i64, n: i64, pairs: &[(i64, i64)]) -> String {
    let mut out = String::new();
    writeln!(out, "g = {g}, n = {n}: genus splittings (g1', g2') of the quotient").unwrap();
    for (a, b) in pairs {
        writeln!(out, "  ({a}, {b})").unwrap();
    }
    writeln!(out, "components: {}", pairs.len()).unwrap();
    out
}

pub fn suite(s: &SuiteSummary) -> String {
    let mut out = String::new();
    writeln!(out, "graphs checked: {} ({} with loops)", s.graphs, s.graphs_with_loops).unwrap();
    for (name, t) in &s.checks {
        writeln!(out, "  {name:<24} pass {:>6}  fail {:>6}", t.pass, t.fail).unwrap();
    }
    writeln!(out, "graphs with failures: {}", s.failed_graphs).unwrap();
    out
}
