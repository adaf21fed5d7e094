//! Serialization of reports and graphs: JSON, LaTeX arrays, CSV and DOT.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DecoratedGraph;
use crate::homology::IntMatrix;

use super::pipeline::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Latex,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Latex => "tex",
            OutputFormat::Csv => "csv",
        }
    }
}

/// One output file: a name without extension and its contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Labelled matrices of a report, in a fixed order.
fn labelled_matrices(report: &Report) -> Vec<(&'static str, &IntMatrix, Vec<String>, Vec<String>)> {
    let mut out = Vec::new();
    if let Some(m) = &report.matrices {
        let edges = m.basis.edge_labels();
        let reps = m.basis.repeller_labels();
        if let Some(d1) = &m.d1 {
            out.push(("d1", d1, reps.clone(), edges.clone()));
        }
        if let Some(b0) = &m.b0 {
            out.push(("b0", b0, reps.clone(), reps.clone()));
        }
        if let Some(b1) = &m.b1 {
            out.push(("b1", b1, edges.clone(), edges.clone()));
        }
        if let Some(v) = &m.v {
            out.push(("v", v, edges.clone(), edges.clone()));
        }
    }
    if let Some(h) = &report.homology {
        let cycles: Vec<String> = (1..=h.rank_h1).map(|k| format!("z{k}")).collect();
        out.push(("m_h", &h.m_h, cycles.clone(), cycles.clone()));
        out.push(("var_h", &h.var_h, cycles.clone(), cycles));
    }
    out
}

fn latex_array(name: &str, m: &IntMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "% {name}: {} x {}", m.rows(), m.cols());
    let _ = write!(s, "\\[\n{} = \\left(\\begin{{array}}{{{}}}\n", latex_name(name), "r".repeat(m.cols()));
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        let _ = writeln!(s, "{} \\\\", row.join(" & "));
    }
    s.push_str("\\end{array}\\right)\n\\]\n");
    s
}

fn latex_name(name: &str) -> &'static str {
    match name {
        "d1" => "d_1",
        "b0" => "B_0",
        "b1" => "B_1",
        "v" => "V",
        "m_h" => "M_H",
        "var_h" => "\\mathrm{Var}_H",
        _ => "A",
    }
}

pub fn to_latex(report: &Report) -> String {
    let mut s = format!("% theta = {}\n", report.metadata.theta);
    if let Some(g) = &report.graph {
        s.push_str("\\begin{tabular}{l|rrrrrr}\nvertex & $b$ & $c_0$ & $m$ & $h$ & $\\varsigma$ & $\\varsigma^\\vee$ \\\\\n\\hline\n");
        for v in &g.vertices {
            let _ = writeln!(
                s,
                "{} & {} & {} & {} & ${}$ & ${}$ & ${}$ \\\\",
                v.id, v.euler, v.c0, v.m, v.hironaka, v.weight, v.dual_weight
            );
        }
        s.push_str("\\end{tabular}\n");
    }
    if let Some(m) = &report.matrices {
        let _ = writeln!(s, "% basis of C_1: {}", m.basis.edge_labels().join(", "));
    }
    for (name, m, _, _) in labelled_matrices(report) {
        s.push_str(&latex_array(name, m));
    }
    if let Some(h) = &report.homology {
        let _ = writeln!(s, "% characteristic polynomial of M_H: {}", h.char_poly);
    }
    if let Some(z) = &report.zeta {
        let _ = writeln!(s, "% predicted zeta: {} (matches: {})", z.predicted_zeta, z.matches);
    }
    s
}

fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One CSV per table or matrix. Matrices carry their basis labels as the
/// header row and first column.
pub fn to_csv(report: &Report) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    if let Some(g) = &report.graph {
        let header: Vec<String> = ["vertex", "b", "c0", "m", "h", "weight", "dual_weight"]
            .iter()
            .map(ToString::to_string)
            .collect();
        let rows = g.vertices.iter().map(|v| {
            vec![
                v.id.clone(),
                v.euler.to_string(),
                v.c0.to_string(),
                v.m.to_string(),
                v.hironaka.clone(),
                v.weight.clone(),
                v.dual_weight.clone(),
            ]
        });
        out.push(Artifact { name: "graph".into(), contents: csv_text(&header, rows)? });
    }
    for (name, m, rows, cols) in labelled_matrices(report) {
        let mut header = vec![String::new()];
        header.extend(cols);
        let body = (0..m.rows()).map(|i| {
            let mut row = vec![rows[i].clone()];
            row.extend((0..m.cols()).map(|j| m.get(i, j).to_string()));
            row
        });
        out.push(Artifact { name: name.to_string(), contents: csv_text(&header, body)? });
    }
    Ok(out)
}

/// Artifacts for a report in the given format.
pub fn render_report(report: &Report, format: OutputFormat) -> Result<Vec<Artifact>> {
    Ok(match format {
        OutputFormat::Json => vec![Artifact { name: "report".into(), contents: to_json(report) }],
        OutputFormat::Latex => vec![Artifact { name: "report".into(), contents: to_latex(report) }],
        OutputFormat::Csv => to_csv(report)?,
    })
}

/// Resolution graph in DOT: vertices labelled `(-b, m, c0)`, arrowheads
/// drawn as arrows to point nodes, edges directed away from the root.
pub fn graph_dot(dg: &DecoratedGraph) -> String {
    let mut s = String::from("digraph resolution {\n  node [shape=circle];\n");
    for v in 0..dg.nv {
        let _ = writeln!(
            s,
            "  v{v} [label=\"{}\\n(-{}, {}, {})\"{}];",
            dg.name(v),
            dg.euler(v),
            dg.m[v],
            dg.c0[v],
            if v == dg.root() { ", peripheries=2" } else { "" }
        );
    }
    for a in dg.nv..dg.node_count() {
        let _ = writeln!(s, "  n{a} [shape=point, label=\"\"];");
    }
    for node in dg.vertex_order.iter().copied() {
        let Some(p) = dg.parent[node] else { continue };
        if dg.is_arrow(node) {
            let _ = writeln!(
                s,
                "  v{p} -> n{node} [arrowhead=normal, label=\"{} ({})\"];",
                dg.name(node),
                dg.m[node]
            );
        } else {
            let _ = writeln!(s, "  v{p} -> v{node} [arrowhead=none];");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::graph::direct_and_order;
    use crate::io::pipeline::{run, Emit, RunConfig};
    use crate::Turn;

    #[test]
    fn cusp_outputs() {
        let config = RunConfig::with_emit(
            Turn::from_fraction(1, 100),
            &[Emit::Graph, Emit::Matrices, Emit::Homology],
        );
        let report = run(&examples::cusp(), &config).unwrap();
        let latex = to_latex(&report);
        assert!(latex.contains("M_H = \\left(\\begin{array}{rr}"));
        let csv = to_csv(&report).unwrap();
        let names: Vec<&str> = csv.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["graph", "d1", "b0", "b1", "v", "m_h", "var_h"]);
        assert!(csv[0].contents.starts_with("vertex,b,c0,m,h,weight,dual_weight\n"));
        assert_eq!(to_json(&report), to_json(&run(&examples::cusp(), &config).unwrap()));
    }

    #[test]
    fn dot_draws_every_node() {
        let dg = direct_and_order(&examples::two_pairs()).unwrap();
        let dot = graph_dot(&dg);
        assert_eq!(dot.matches(" -> ").count(), dg.node_count() - 1);
        assert!(dot.contains("arrowhead=normal"));
    }
}
