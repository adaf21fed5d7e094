//! The invariant spine as a gyrograph: prong ends on the repeller circles,
//! weights from Hironaka numbers, and gyrations that rebuild the monodromy
//! and variation from those data alone, without pushing any arcs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::dynamics::{FlowModel, Prong, ProngChain, Side};
use crate::error::{Error, Result};
use crate::graph::DecoratedGraph;
use crate::turn::{fmt_q, frac, qi, Turn, Q};

/// A point of the repeller circles: circle index (1-based) and angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CirclePoint {
    pub circle: usize,
    pub angle: Turn,
}

#[derive(Debug, Clone)]
pub struct Gyrograph<'a> {
    pub model: FlowModel<'a>,
    pub prongs: Vec<Prong>,
    pub ends: BTreeMap<Prong, CirclePoint>,
    /// Prong ends on each circle sorted by angle, index 0 for circle 1.
    pub circles: Vec<Vec<(Turn, Prong)>>,
    pub repellers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TurnRecord {
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub time: Q,
    pub edge: Prong,
    pub took_turn: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gyration {
    pub start: CirclePoint,
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub length: Q,
    pub turn_log: Vec<TurnRecord>,
    pub end: CirclePoint,
    /// Set when the gyration stops exactly on a prong end.
    pub end_edge: Option<Prong>,
}

impl Gyration {
    /// Turns actually taken, as `(edge turned along, edge followed back)`.
    pub fn turns<'g>(&self, gg: &Gyrograph<'g>) -> Vec<(Prong, Prong)> {
        self.turn_log
            .iter()
            .filter(|r| r.took_turn)
            .map(|r| (r.edge, gg.model.next_ccw(r.edge)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpoorKind {
    Monodromy,
    Variation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spoor {
    pub kind: SpoorKind,
    pub edge: Prong,
    pub gyrations: Vec<Gyration>,
    /// Signed count of stable prongs crossed.
    pub crossings: Vec<(Prong, i64)>,
}

impl Spoor {
    pub fn chain(&self) -> ProngChain {
        let mut out = ProngChain::new();
        for &(p, c) in &self.crossings {
            *out.entry(p).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Where a gyration starts relative to the prong end it sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Offset {
    JustBefore,
    JustAfter,
}

/// When a gyration turns along the prong it meets.
#[derive(Debug, Clone, Copy)]
enum Rule {
    /// Turn while `t` is below `length - weight(f)`.
    Absolute,
    /// Turn while `t` is below `dual_weight(f)`.
    Relative,
}

/// Builds the gyrograph of the spine at a generic angle.
pub fn build_gyrograph<'a>(dg: &'a DecoratedGraph, theta: Turn) -> Result<Gyrograph<'a>> {
    let model = FlowModel::new(dg, theta)?;
    let prongs = model.stable_prongs();
    let repellers = dg.m[dg.root()] as usize;
    let mut ends = BTreeMap::new();
    let mut circles = vec![Vec::new(); repellers];
    for (p, (circle, angle)) in model.prong_endpoints()? {
        ends.insert(p, CirclePoint { circle, angle });
        circles[circle - 1].push((angle, p));
    }
    for c in &mut circles {
        c.sort();
        if c.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::NonGenericAngle {
                theta,
                reason: "two prongs end at the same point of a repeller circle".to_string(),
            });
        }
    }
    let gg = Gyrograph { model, prongs, ends, circles, repellers };
    gg.check_absolute_property()?;
    gg.check_relative_property()?;
    Ok(gg)
}

impl<'a> Gyrograph<'a> {
    fn dg(&self) -> &'a DecoratedGraph {
        self.model.dg
    }

    /// `1/h_0 - 1/h_i` for the vertex carrying the prong.
    pub fn weight(&self, p: Prong) -> Q {
        self.dg().weight(p.vertex)
    }

    /// `1/h_i` for the vertex carrying the prong.
    pub fn dual_weight(&self, p: Prong) -> Q {
        self.dg().dual_weight(p.vertex)
    }

    /// Rotation of the circles by the root monodromy.
    pub fn k_theta(&self, x: CirclePoint) -> CirclePoint {
        CirclePoint { circle: x.circle % self.repellers + 1, angle: x.angle }
    }

    /// Ribbon automorphism shifting sheets.
    pub fn k_p(&self, p: Prong) -> Prong {
        self.model.next_sheet(p)
    }

    /// Walks the circles from `start` for `length`, jumping along prongs
    /// according to `rule`.
    fn gyrate(
        &self,
        start: CirclePoint,
        offset: Offset,
        length: Q,
        threshold: Q,
        rule: Rule,
    ) -> Result<Gyration> {
        let theta = self.model.theta;
        let mut pos = start;
        let mut inclusive = offset == Offset::JustBefore;
        let mut t = Q::zero();
        let mut log = Vec::new();
        let limit = 4 * self.prongs.len() + 8;
        loop {
            if log.len() > limit {
                return Err(Error::PropertyViolation("gyration does not terminate".to_string()));
            }
            let circle = &self.circles[pos.circle - 1];
            let next = circle
                .iter()
                .map(|&(a, p)| (frac(a.value() - pos.angle.value()), p))
                .filter(|&(d, _)| inclusive || !d.is_zero())
                .min();
            let Some((dist, f)) = next else {
                let end = CirclePoint { circle: pos.circle, angle: pos.angle + (length - t) };
                return Ok(Gyration { start, length, turn_log: log, end, end_edge: None });
            };
            if t + dist > length {
                let end = CirclePoint { circle: pos.circle, angle: pos.angle + (length - t) };
                return Ok(Gyration { start, length, turn_log: log, end, end_edge: None });
            }
            t += dist;
            if t == length {
                return Ok(Gyration {
                    start,
                    length,
                    turn_log: log,
                    end: self.ends[&f],
                    end_edge: Some(f),
                });
            }
            let bound = match rule {
                Rule::Absolute => threshold - self.weight(f),
                Rule::Relative => self.dual_weight(f),
            };
            if t == bound {
                return Err(Error::NonGenericAngle {
                    theta,
                    reason: format!("gyration meets {f:?} exactly at its turn threshold"),
                });
            }
            let took_turn = t < bound;
            log.push(TurnRecord { time: t, edge: f, took_turn });
            pos = if took_turn { self.ends[&self.model.next_ccw(f)] } else { self.ends[&f] };
            inclusive = false;
        }
    }

    /// Gyration of length `weight(e)` from just after the end of `k_p(e)`.
    pub fn absolute_gyration(&self, e: Prong) -> Result<Gyration> {
        let length = self.weight(e);
        self.gyrate(self.ends[&self.k_p(e)], Offset::JustAfter, length, length, Rule::Absolute)
    }

    /// The two relative gyrations of `e`, from just after and just before
    /// its end, of length `dual_weight(e)`.
    pub fn relative_gyration(&self, e: Prong) -> Result<(Gyration, Gyration)> {
        let length = self.dual_weight(e);
        let start = self.ends[&e];
        let after = self.gyrate(start, Offset::JustAfter, length, length, Rule::Relative)?;
        let before = self.gyrate(start, Offset::JustBefore, length, length, Rule::Relative)?;
        Ok((after, before))
    }

    /// Every absolute gyration must end at `k_theta` of its edge's end.
    pub fn check_absolute_property(&self) -> Result<()> {
        for &e in &self.prongs {
            let g = self.absolute_gyration(e)?;
            let want = self.k_theta(self.ends[&e]);
            if g.end != want {
                return Err(Error::PropertyViolation(format!(
                    "absolute gyration of {e:?} ends at {:?}, expected {want:?}",
                    g.end
                )));
            }
        }
        Ok(())
    }

    /// Singular point a prong belongs to.
    pub fn singular_point(&self, p: Prong) -> (usize, usize, usize) {
        match p.side {
            Side::Multi => {
                let lifts = self.model.multiprong_lifts(p.vertex).expect("multiprong vertex") as usize;
                (p.vertex, 0, (p.sheet - 1) % lifts + 1)
            }
            _ => (p.vertex, p.slot, p.sheet),
        }
    }

    /// Prong a relative gyration stops on, which must lead by a safe walk
    /// through its singular point to `k_p(e)`.
    fn relative_end(&self, e: Prong, g: &Gyration) -> Result<Prong> {
        let target = self.k_p(e);
        match g.end_edge {
            Some(f) if self.singular_point(f) == self.singular_point(target) => Ok(f),
            _ => Err(Error::PropertyViolation(format!(
                "relative gyration of {e:?} ends at {:?}, away from the singular point of {target:?}",
                g.end
            ))),
        }
    }

    /// Both relative gyrations of every edge must stop on a prong sharing
    /// its singular point with `k_p(e)`.
    pub fn check_relative_property(&self) -> Result<()> {
        for &e in &self.prongs {
            let (after, before) = self.relative_gyration(e)?;
            self.relative_end(e, &after)?;
            self.relative_end(e, &before)?;
        }
        Ok(())
    }

    /// Image of `e` under the monodromy: `k_p(e)` plus a detour for every
    /// turn of its absolute gyration.
    pub fn monodromy_spoor(&self, e: Prong) -> Result<Spoor> {
        let g = self.absolute_gyration(e)?;
        let mut crossings = vec![(self.k_p(e), 1)];
        for (f, back) in g.turns(self) {
            crossings.push((back, 1));
            crossings.push((f, -1));
        }
        Ok(Spoor { kind: SpoorKind::Monodromy, edge: e, gyrations: vec![g], crossings })
    }

    /// Variation of the segment dual to `e`: the path of the gyration
    /// starting just after its end minus that of the one just before, each
    /// closed by a safe walk to `k_p(e)`.
    pub fn variation_spoor(&self, e: Prong) -> Result<Spoor> {
        let (after, before) = self.relative_gyration(e)?;
        let target = self.k_p(e);
        let mut crossings = Vec::new();
        for (g, sign) in [(&after, 1), (&before, -1)] {
            for (f, back) in g.turns(self) {
                crossings.push((back, sign));
                crossings.push((f, -sign));
            }
            let last = self.relative_end(e, g)?;
            crossings.push((target, sign));
            crossings.push((last, -sign));
        }
        Ok(Spoor { kind: SpoorKind::Variation, edge: e, gyrations: vec![before, after], crossings })
    }

    /// DOT rendering of the blown-up gyrograph: singular points, repeller
    /// circles as cycles of ports, and prongs joining them.
    pub fn to_dot(&self) -> String {
        let dg = self.dg();
        let mut out = String::from("graph gyrograph {\n  node [shape=point];\n");
        for (r, circle) in self.circles.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_r{} {{\n    label=\"repeller {}\";", r + 1, r + 1);
            for (k, (angle, _)) in circle.iter().enumerate() {
                let _ = writeln!(out, "    r{}_{} [label=\"{}\", shape=circle];", r + 1, k, angle);
            }
            for k in 0..circle.len() {
                let _ = writeln!(
                    out,
                    "    r{}_{} -- r{}_{} [style=dotted];",
                    r + 1,
                    k,
                    r + 1,
                    (k + 1) % circle.len()
                );
            }
            out.push_str("  }\n");
        }
        for &p in &self.prongs {
            let (circle, k) = self.port(p);
            let _ = writeln!(
                out,
                "  {} -- r{}_{} [label=\"{}\", weight=\"{}\"];",
                self.point_id(p),
                circle,
                k,
                prong_label(dg, p),
                fmt_q(self.weight(p))
            );
        }
        out.push_str("}\n");
        out
    }

    fn port(&self, p: Prong) -> (usize, usize) {
        let end = self.ends[&p];
        let k = self.circles[end.circle - 1]
            .iter()
            .position(|&(_, q)| q == p)
            .expect("every prong ends on its circle");
        (end.circle, k)
    }

    fn point_id(&self, p: Prong) -> String {
        match p.side {
            Side::Multi => {
                let lifts = self.model.multiprong_lifts(p.vertex).unwrap_or(1) as usize;
                format!("q{}_0_{}", p.vertex, (p.sheet - 1) % lifts + 1)
            }
            _ => format!("q{}_{}_{}", p.vertex, p.slot, p.sheet),
        }
    }
}

/// Short label such as `P-[3]` or `P[5]`, prefixed by the vertex name.
pub fn prong_label(dg: &DecoratedGraph, p: Prong) -> String {
    let side = match p.side {
        Side::Minus => "-",
        Side::Plus => "+",
        Side::Multi => "",
    };
    if p.side == Side::Multi {
        format!("{}:P[{}]", dg.name(p.vertex), p.sheet)
    } else {
        format!("{}:{}P{}[{}]", dg.name(p.vertex), p.slot, side, p.sheet)
    }
}

/// Sanity check for weights: nonnegative, zero exactly at the root.
pub fn check_weights(dg: &DecoratedGraph) -> Result<()> {
    for v in dg.invariant_vertices() {
        let w = dg.weight(v);
        let ok = if v == dg.root() { w.is_zero() } else { w.is_positive() };
        if !ok {
            return Err(Error::PropertyViolation(format!(
                "weight of {} is {}",
                dg.name(v),
                fmt_q(w)
            )));
        }
        if dg.dual_weight(v) != qi(1) / dg.hironaka(v).expect("invariant vertex") {
            return Err(Error::PropertyViolation(format!("dual weight of {}", dg.name(v))));
        }
    }
    Ok(())
}
