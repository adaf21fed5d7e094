//! From a resolution graph and a run configuration to one report.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dynamics::{nongeneric_angles, saddle_connection_angles};
use crate::error::{Error, Result};
use crate::graph::{adjunction_residuals, direct_and_order, hironaka_table, DecoratedGraph, ResolutionGraph};
use crate::gyrograph::{build_gyrograph, prong_label, Gyrograph};
use crate::homology::{assemble, determinant, determinant_from_char_poly, Check, IntMatrix, MatrixBundle, Poly};
use crate::turn::{fmt_q, Turn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Graph,
    Spine,
    Nongeneric,
    Matrices,
    Homology,
    Zeta,
    Verify,
}

impl Emit {
    pub const ALL: [Emit; 7] = [
        Emit::Graph,
        Emit::Spine,
        Emit::Nongeneric,
        Emit::Matrices,
        Emit::Homology,
        Emit::Zeta,
        Emit::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Emit::Graph => "graph",
            Emit::Spine => "spine",
            Emit::Nongeneric => "nongeneric",
            Emit::Matrices => "matrices",
            Emit::Homology => "homology",
            Emit::Zeta => "zeta",
            Emit::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Result<Emit> {
        Emit::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::SchemaError(format!("unknown emission `{s}`")))
    }

    fn needs_spine(self) -> bool {
        !matches!(self, Emit::Graph | Emit::Nongeneric)
    }
}

/// The chain-level matrices a run reports under `matrices`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainMatrix {
    Differential,
    Monodromy,
    Variation,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub theta: Turn,
    pub emit: BTreeSet<Emit>,
    pub chain_matrices: BTreeSet<ChainMatrix>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta: Turn::from_fraction(1, 100),
            emit: Emit::ALL.into_iter().collect(),
            chain_matrices: [ChainMatrix::Differential, ChainMatrix::Monodromy, ChainMatrix::Variation]
                .into_iter()
                .collect(),
        }
    }
}

impl RunConfig {
    pub fn with_emit(theta: Turn, emit: &[Emit]) -> Self {
        RunConfig { theta, emit: emit.iter().copied().collect(), ..RunConfig::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisElement {
    pub vertex: String,
    pub slot: usize,
    pub sheet: usize,
}

/// Row and column labels of every chain-level matrix.
#[derive(Debug, Clone, Serialize)]
pub struct BasisLabels {
    pub repellers: Vec<usize>,
    pub edges: Vec<BasisElement>,
}

impl BasisLabels {
    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| format!("{}:{}:{}", e.vertex, e.slot, e.sheet)).collect()
    }

    pub fn repeller_labels(&self) -> Vec<String> {
        self.repellers.iter().map(|r| format!("R{r}")).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub theta: Turn,
    /// Arrow ids from the smallest branch to the largest.
    pub branch_order: Vec<String>,
    /// `input` when the graph or the command line fixed the order,
    /// `default` for the depth-first traversal in input order.
    pub branch_order_source: &'static str,
    pub vertex_order: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexRow {
    pub id: String,
    pub euler: i128,
    pub c0: i128,
    pub m: i128,
    pub hironaka: String,
    pub weight: String,
    pub dual_weight: String,
    pub parent: Option<String>,
    pub invariant: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArrowRow {
    pub id: String,
    pub vertex: String,
    pub mult: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSection {
    pub vertices: Vec<VertexRow>,
    pub arrows: Vec<ArrowRow>,
    pub adjunction_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProngEnd {
    pub prong: String,
    pub repeller: usize,
    pub angle: Turn,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpineSection {
    pub repellers: usize,
    pub prongs: Vec<ProngEnd>,
    /// Prong labels in counterclockwise order around each repeller circle.
    pub circles: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NongenericSection {
    /// Angles solving some saddle-connection congruence.
    pub candidates: Vec<Turn>,
    /// Candidates at which a connection actually occurs.
    pub connections: Vec<Turn>,
    pub theta_is_generic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatricesSection {
    pub basis: BasisLabels,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b0: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b1: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<IntMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologySection {
    pub rank_d1: usize,
    pub invariant_factors: Vec<String>,
    pub rank_h1: usize,
    /// Columns of `W` spanning the cycles, in chain basis coordinates.
    pub cycle_basis: IntMatrix,
    pub m_h: IntMatrix,
    pub var_h: IntMatrix,
    pub char_poly: String,
    /// `det(t I - M_H)`, coefficients from degree 0 upwards.
    pub char_poly_coefficients: Poly,
    pub det_m_h: String,
    pub det_var_h: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaSection {
    pub predicted_zeta: String,
    pub predicted_char_poly: String,
    pub char_poly_m_h: String,
    pub predicted_char_poly_coefficients: Poly,
    pub char_poly_m_h_coefficients: Poly,
    pub matches: bool,
    pub euler_characteristic: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub metadata: Metadata,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spine: Option<SpineSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nongeneric: Option<NongenericSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<MatricesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<Vec<Check>>,
}

fn metadata(dg: &DecoratedGraph, theta: Turn) -> Metadata {
    Metadata {
        theta,
        branch_order: dg.branch_order.iter().map(|&k| dg.name(dg.nv + k)).collect(),
        branch_order_source: if dg.default_branch_order { "default" } else { "input" },
        vertex_order: dg.vertex_order.iter().filter(|&&v| v < dg.nv).map(|&v| dg.name(v)).collect(),
    }
}

fn graph_section(dg: &DecoratedGraph) -> GraphSection {
    let upsilon = dg.invariant_vertices();
    let vertices = hironaka_table(dg)
        .into_iter()
        .enumerate()
        .map(|(i, (euler, c0, m, h, w, dw))| VertexRow {
            id: dg.name(i),
            euler,
            c0,
            m,
            hironaka: fmt_q(h),
            weight: fmt_q(w),
            dual_weight: fmt_q(dw),
            parent: dg.parent[i].map(|p| dg.name(p)),
            invariant: upsilon.contains(&i),
        })
        .collect();
    let arrows = (dg.nv..dg.node_count())
        .map(|a| ArrowRow {
            id: dg.name(a),
            vertex: dg.name(dg.parent[a].expect("arrowheads hang below a vertex")),
            mult: dg.m[a],
        })
        .collect();
    GraphSection {
        vertices,
        arrows,
        adjunction_holds: adjunction_residuals(dg).iter().all(|&r| r == (0, 0)),
    }
}

fn spine_section(gg: &Gyrograph) -> SpineSection {
    let dg = gg.model.dg;
    SpineSection {
        repellers: gg.repellers,
        prongs: gg
            .prongs
            .iter()
            .map(|&p| ProngEnd {
                prong: prong_label(dg, p),
                repeller: gg.ends[&p].circle,
                angle: gg.ends[&p].angle,
                weight: fmt_q(gg.weight(p)),
            })
            .collect(),
        circles: gg
            .circles
            .iter()
            .map(|c| c.iter().map(|&(_, p)| prong_label(dg, p)).collect())
            .collect(),
    }
}

fn basis_labels(dg: &DecoratedGraph, bundle: &MatrixBundle) -> BasisLabels {
    BasisLabels {
        repellers: bundle.basis.i0.clone(),
        edges: bundle
            .basis
            .i1
            .iter()
            .map(|&(i, slot, sheet)| BasisElement { vertex: dg.name(i), slot, sheet })
            .collect(),
    }
}

fn factors(f: &[BigInt]) -> Vec<String> {
    f.iter().map(ToString::to_string).collect()
}

/// Everything the configuration asks for. Sections that need the spine
/// fail with `NonGenericAngle` at a non-generic angle; the graph table and
/// the non-generic set do not depend on the angle.
pub fn run(graph: &ResolutionGraph, config: &RunConfig) -> Result<Report> {
    let dg = direct_and_order(graph)?;
    run_decorated(&dg, config)
}

pub fn run_decorated(dg: &DecoratedGraph, config: &RunConfig) -> Result<Report> {
    let theta = config.theta;
    let mut report = Report {
        metadata: metadata(dg, theta),
        graph: None,
        spine: None,
        nongeneric: None,
        matrices: None,
        homology: None,
        zeta: None,
        verify: None,
    };
    if config.emit.contains(&Emit::Graph) {
        report.graph = Some(graph_section(dg));
    }
    if config.emit.contains(&Emit::Nongeneric) {
        let candidates = nongeneric_angles(dg);
        let connections = saddle_connection_angles(dg)?;
        report.nongeneric = Some(NongenericSection {
            theta_is_generic: !candidates.contains(&theta),
            candidates: candidates.into_iter().collect(),
            connections: connections.into_iter().collect(),
        });
    }
    if !config.emit.iter().any(|e| e.needs_spine()) {
        return Ok(report);
    }

    let gg = build_gyrograph(dg, theta)?;
    if config.emit.contains(&Emit::Spine) {
        report.spine = Some(spine_section(&gg));
    }
    let bundle = assemble(&gg)?;
    let want = |e: Emit| config.emit.contains(&e);
    let chain = |c: ChainMatrix| config.chain_matrices.contains(&c);
    if want(Emit::Matrices) {
        report.matrices = Some(MatricesSection {
            basis: basis_labels(dg, &bundle),
            d1: chain(ChainMatrix::Differential).then(|| bundle.d1.clone()),
            b0: chain(ChainMatrix::Monodromy).then(|| bundle.b0.clone()),
            b1: chain(ChainMatrix::Monodromy).then(|| bundle.b1.clone()),
            v: chain(ChainMatrix::Variation).then(|| bundle.v.clone()),
        });
    }
    if want(Emit::Homology) {
        let n = bundle.basis.i1.len();
        report.homology = Some(HomologySection {
            rank_d1: bundle.snf.rank,
            invariant_factors: factors(&bundle.snf.invariant_factors),
            rank_h1: bundle.m_h.rows(),
            cycle_basis: bundle.snf.w.block(0, n, bundle.snf.rank, n),
            m_h: bundle.m_h.clone(),
            var_h: bundle.var_h.clone(),
            char_poly: bundle.char_poly_m_h.to_string(),
            char_poly_coefficients: bundle.char_poly_m_h.clone(),
            det_m_h: determinant_from_char_poly(&bundle.char_poly_m_h).to_string(),
            det_var_h: determinant(&bundle.var_h).to_string(),
        });
    }
    if want(Emit::Zeta) {
        report.zeta = Some(ZetaSection {
            predicted_zeta: bundle.zeta.predicted.to_string(),
            predicted_char_poly: bundle.zeta.predicted_char_poly.to_string(),
            char_poly_m_h: bundle.char_poly_m_h.to_string(),
            predicted_char_poly_coefficients: bundle.zeta.predicted_char_poly.clone(),
            char_poly_m_h_coefficients: bundle.char_poly_m_h.clone(),
            matches: bundle.char_poly_m_h == bundle.zeta.predicted_char_poly,
            euler_characteristic: bundle.zeta.euler_graph,
        });
    }
    if want(Emit::Verify) {
        let mut checks = vec![
            Check {
                name: "absolute gyrograph property".into(),
                passed: true,
                detail: "checked while building the spine".into(),
            },
            Check {
                name: "relative gyrograph property".into(),
                passed: true,
                detail: "checked while building the spine".into(),
            },
            Check {
                name: "gyrations agree with arc pushing".into(),
                passed: true,
                detail: "checked while assembling B1 and V".into(),
            },
        ];
        checks.extend(bundle.checks.iter().cloned());
        report.verify = Some(checks);
    }
    Ok(report)
}

/// Closest angle `k/d` to `theta`, for `d` in 100, 1000, 10000, at which the
/// spine can be built; `None` if there is none.
pub fn nearest_generic(dg: &DecoratedGraph, theta: Turn) -> Option<Turn> {
    let (num, den) = theta.parts();
    for d in [100i128, 1000, 10000] {
        // Nearest multiple of 1/d, then outwards on both sides.
        let centre = (num * d + den / 2).div_euclid(den);
        for step in 0..d {
            for k in [centre + step, centre - step] {
                let t = Turn::from_fraction(k, d);
                if t != theta && build_gyrograph(dg, t).is_ok() {
                    return Some(t);
                }
            }
        }
    }
    None
}
