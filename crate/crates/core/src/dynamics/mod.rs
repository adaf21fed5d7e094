//! Exact angular dynamics of the flow on the fiber at a fixed angle: the
//! fiber equation on each divisor, the maps between boundary tori, flow
//! singularities and the itineraries of their separatrices.
//!
//! Conventions. On the base divisor of a vertex `i` the children sit at their
//! labels on the real line and the parent at infinity. A point of a boundary
//! torus between a parent `j` and a child `i` is written `(alpha, beta)` in
//! the coordinates of `j`: `alpha` is the fiber angle on `j`, `beta` the angle
//! around the point of `i`. The same point seen from `i` near infinity has
//! coordinates `(alpha_i, beta_i)` with
//! `alpha = -beta_i` and `beta = alpha_i + b_i * beta_i`.

mod engine;
mod nongeneric;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DecoratedGraph;
use crate::turn::{floor_int, frac, q, qi, Turn, Q};

pub use engine::{BasisChain, ProngChain};
pub use nongeneric::{
    defining_congruences, nongeneric_angles, saddle_connection_angles, separatrix_constants,
    Congruence, SeparatrixConstant,
};

/// Interval of the real axis of a base divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Left of every child (left of 0 with a dead child, else left of 1).
    Left,
    /// The interval just right of the given child's label.
    After(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Half {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingularityKind {
    Saddle,
    Multiprong,
    Repeller,
}

/// One lift of a zero of the flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowSingularity {
    pub kind: SingularityKind,
    pub vertex: usize,
    /// Saddle slot `1..=p_i`, 0 for the multiprong, -1 for repellers.
    pub slot: i64,
    /// Sheet index of a saddle, lift index of a multiprong or repeller.
    pub sheet: usize,
    /// Fiber angle of the lift (for a multiprong, that of its first prong).
    pub alpha: Turn,
}

/// Which separatrix of a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Minus,
    Plus,
    Multi,
}

/// A stable prong: `P^-`/`P^+` of saddle `(vertex, slot)` on sheet `sheet`,
/// or prong `sheet` of the multiprong at `vertex` (slot 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Prong {
    pub vertex: usize,
    pub slot: usize,
    pub side: Side,
    pub sheet: usize,
}

/// Crossing of a boundary torus, in parent coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub parent: usize,
    pub child: usize,
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub alpha: Q,
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub beta: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Terminus {
    /// Point `(repeller, angle)` on the blown-up repeller circles.
    Repeller { index: usize, angle: Turn },
    /// An unstable prong ends at a branch.
    Arrow(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProngItinerary {
    pub prong: Prong,
    pub stable: bool,
    pub hops: Vec<Hop>,
    pub terminus: Terminus,
}

/// Sheet containing a fiber angle, 1-based.
pub fn sheet_of(alpha: Q, m: i128) -> usize {
    (floor_int(frac(alpha) * qi(m)) + 1) as usize
}

/// Fiber angle solving `m_i alpha = theta - M/2` on the given region,
/// principal value in `[0, 1/m_i)`. Sheet `b` adds `(b-1)/m_i`.
pub fn divisor_alpha(dg: &DecoratedGraph, i: usize, region: Region, theta: Turn) -> Result<Turn> {
    if i >= dg.nv || !dg.upsilon[i] {
        return Err(Error::RegionUndefined { vertex: dg.name(i) });
    }
    let constant = match region {
        Region::Left => dg.m_total(i),
        Region::After(k) => {
            if dg.parent.get(k).copied().flatten() != Some(i) {
                return Err(Error::EdgeNotDirected {
                    from: dg.name(i),
                    to: k.to_string(),
                });
            }
            dg.m_edge[k]
        }
    };
    Ok(Turn::new(principal_alpha(theta.value(), constant, dg.m[i])))
}

fn principal_alpha(theta: Q, constant: i128, m: i128) -> Q {
    let base = theta - q(constant, 2);
    frac(base) / qi(m)
}

/// Angle at infinity of the base divisor of `i` reached backwards from the
/// point of child `k` at angle `beta`, on the given half.
pub fn delta_hat(dg: &DecoratedGraph, i: usize, k: usize, beta: Turn, half: Half) -> Result<Q> {
    let rel = half_representative(beta, half)?;
    check_edge(dg, i, k)?;
    Ok(delta_map(dg, i, k, rel, half == Half::Upper).0)
}

/// Fiber angle on `i` at infinity reached from the torus point `(alpha, beta)`
/// near child `k`.
pub fn alpha_shift(
    dg: &DecoratedGraph,
    i: usize,
    k: usize,
    point: (Turn, Turn),
    half: Half,
) -> Result<Turn> {
    let rel = half_representative(point.1, half)?;
    check_edge(dg, i, k)?;
    let (_, darg) = delta_map(dg, i, k, rel, half == Half::Upper);
    Ok(Turn::new(point.0.value() - darg / qi(dg.m[i])))
}

fn check_edge(dg: &DecoratedGraph, i: usize, k: usize) -> Result<()> {
    if k >= dg.node_count() || dg.parent[k] != Some(i) {
        return Err(Error::EdgeNotDirected {
            from: dg.name(i),
            to: k.to_string(),
        });
    }
    Ok(())
}

fn half_representative(beta: Turn, half: Half) -> Result<Q> {
    let v = beta.value();
    if beta.is_half_integer() {
        return Err(Error::OnSeparatrix { beta });
    }
    match half {
        Half::Upper if v < q(1, 2) => Ok(v),
        Half::Lower if v > q(1, 2) => Ok(v - qi(1)),
        _ => Err(Error::OnSeparatrix { beta }),
    }
}

/// Sum of `n_{i,l}` over live children with label above `a`.
fn n_above(dg: &DecoratedGraph, i: usize, a: usize) -> i128 {
    dg.live_children(i)
        .iter()
        .filter(|&&l| dg.label[l] > a)
        .map(|&l| dg.n(i, l))
        .sum()
}

/// Backward map from the neighbourhood of child `k` to infinity on the base
/// divisor of `i`. `rel` is the angle around `k` in `[-1/2, 1/2]`, on the
/// upper (`rel >= 0`) or lower half. Returns the angle at infinity and the
/// change of `arg g_i` along the trajectory, both in turns.
pub(crate) fn delta_map(dg: &DecoratedGraph, i: usize, k: usize, rel: Q, upper: bool) -> (Q, Q) {
    let a = dg.label[k];
    let pole = qi(dg.pole_order(i));
    let sign = if upper { qi(1) } else { qi(-1) };
    let beta_inf = (qi(dg.n(i, k)) * rel + sign * q(n_above(dg, i, a), 2)) / pole;
    (beta_inf, arg_change(dg, i, k, rel, beta_inf, upper))
}

/// Change of `arg g_i` from the neighbourhood of child `k` (angle `rel`) to
/// infinity (angle `beta_inf`).
fn arg_change(dg: &DecoratedGraph, i: usize, k: usize, rel: Q, beta_inf: Q, upper: bool) -> Q {
    let a = dg.label[k];
    let half = if upper { q(1, 2) } else { q(-1, 2) };
    dg.children[i]
        .iter()
        .map(|&l| {
            let start = if l == k {
                rel
            } else if dg.label[l] > a {
                half
            } else {
                Q::zero()
            };
            qi(dg.m[l]) * (beta_inf - start)
        })
        .sum()
}

/// Forward map from infinity on the base divisor of `i` to the child whose
/// basin contains the angle. Returns `(child, rel, arg change)`, or `None`
/// when the angle lies on a stable separatrix.
fn delta_inverse(dg: &DecoratedGraph, i: usize, beta_inf: Q) -> Option<(usize, Q, Q)> {
    let pole = qi(dg.pole_order(i));
    let mut rep = frac(beta_inf);
    if rep > q(1, 2) {
        rep -= qi(1);
    }
    let live = dg.live_children(i);
    if rep.is_zero() {
        let k = *live.last()?;
        return Some((k, Q::zero(), arg_change(dg, i, k, Q::zero(), Q::zero(), true)));
    }
    if rep == q(1, 2) {
        if dg.dead_child[i].is_some() {
            return None;
        }
        let k = live[0];
        return Some((k, q(1, 2), arg_change(dg, i, k, q(1, 2), rep, true)));
    }
    let upper = rep.is_positive();
    let target = rep.abs() * qi(2) * pole;
    for &k in live {
        let above = qi(n_above(dg, i, dg.label[k]));
        let upto = above + qi(dg.n(i, k));
        if target == above && !above.is_zero() {
            return None;
        }
        if target > above && target < upto {
            let sign = if upper { qi(1) } else { qi(-1) };
            let rel = (pole * rep - sign * above / qi(2)) / qi(dg.n(i, k));
            return Some((k, rel, arg_change(dg, i, k, rel, rep, upper)));
        }
    }
    None
}

/// Flow model of the fiber at a fixed generic angle.
#[derive(Debug, Clone)]
pub struct FlowModel<'a> {
    pub dg: &'a DecoratedGraph,
    pub theta: Turn,
}

impl<'a> FlowModel<'a> {
    /// Rejects angles in the non-generic candidate set.
    pub fn new(dg: &'a DecoratedGraph, theta: Turn) -> Result<Self> {
        if let Some(hit) = nongeneric::candidate_hit(dg, theta) {
            return Err(Error::NonGenericAngle {
                theta,
                reason: hit,
            });
        }
        Ok(FlowModel { dg, theta })
    }

    /// Model without the genericity check, for oracles that need to probe
    /// arbitrary angles.
    pub fn unchecked(dg: &'a DecoratedGraph, theta: Turn) -> Self {
        FlowModel { dg, theta }
    }

    fn non_generic(&self, reason: impl Into<String>) -> Error {
        Error::NonGenericAngle {
            theta: self.theta,
            reason: reason.into(),
        }
    }

    fn m(&self, node: usize) -> Q {
        qi(self.dg.m[node])
    }

    /// Fiber angle of sheet `b` over the given region of vertex `i`.
    pub fn sheet_alpha(&self, i: usize, region: Region, b: usize) -> Q {
        let constant = match region {
            Region::Left => self.dg.m_total(i),
            Region::After(k) => self.dg.m_edge[k],
        };
        principal_alpha(self.theta.value(), constant, self.dg.m[i]) + q(b as i128 - 1, self.dg.m[i])
    }

    /// Number of saddle slots at a vertex of the invariant subgraph.
    pub fn saddle_slots(&self, i: usize) -> usize {
        self.dg.live_count(i).saturating_sub(1)
    }

    /// `gcd(m_i, m_d)` for the dead child `d`, the number of multiprong lifts.
    pub fn multiprong_lifts(&self, i: usize) -> Option<i128> {
        self.dg.dead_child[i].map(|d| self.dg.m[i].gcd(&self.dg.m[d]))
    }

    /// Index of the last prong in the lift containing prong `b`.
    pub fn top_prong(&self, i: usize, b: usize) -> usize {
        let lifts = self.multiprong_lifts(i).expect("multiprong vertex") as usize;
        let m = self.dg.m[i] as usize;
        m - lifts + (b - 1) % lifts + 1
    }

    /// Every lift of every zero of the flow, in the nice vertex order.
    pub fn singularities(&self) -> Vec<FlowSingularity> {
        let dg = self.dg;
        let mut out = Vec::new();
        for i in dg.invariant_vertices() {
            if i == dg.root() {
                for r in 1..=dg.m[i] {
                    out.push(FlowSingularity {
                        kind: SingularityKind::Repeller,
                        vertex: i,
                        slot: -1,
                        sheet: r as usize,
                        alpha: Turn::new((self.theta.value() + qi(r - 1)) / self.m(i)),
                    });
                }
            }
            if let Some(lifts) = self.multiprong_lifts(i) {
                for c in 1..=lifts as usize {
                    out.push(FlowSingularity {
                        kind: SingularityKind::Multiprong,
                        vertex: i,
                        slot: 0,
                        sheet: c,
                        alpha: Turn::new(self.sheet_alpha(i, Region::Left, c)),
                    });
                }
            }
            for a in 1..=self.saddle_slots(i) {
                let k = dg.child_with_label(i, a);
                for b in 1..=dg.m[i] as usize {
                    out.push(FlowSingularity {
                        kind: SingularityKind::Saddle,
                        vertex: i,
                        slot: a as i64,
                        sheet: b,
                        alpha: Turn::new(self.sheet_alpha(i, Region::After(k), b)),
                    });
                }
            }
        }
        out
    }

    /// Every stable prong, ordered by vertex order, slot, sheet, side.
    pub fn stable_prongs(&self) -> Vec<Prong> {
        let dg = self.dg;
        let mut out = Vec::new();
        for i in dg.invariant_vertices() {
            let m = dg.m[i] as usize;
            if dg.dead_child[i].is_some() {
                for b in 1..=m {
                    out.push(Prong { vertex: i, slot: 0, side: Side::Multi, sheet: b });
                }
            }
            for a in 1..=self.saddle_slots(i) {
                for b in 1..=m {
                    for side in [Side::Minus, Side::Plus] {
                        out.push(Prong { vertex: i, slot: a, side, sheet: b });
                    }
                }
            }
        }
        out
    }

    /// The same prong on the next sheet.
    pub fn next_sheet(&self, p: Prong) -> Prong {
        let m = self.dg.m[p.vertex] as usize;
        Prong { sheet: p.sheet % m + 1, ..p }
    }

    /// The next stable prong counterclockwise around the singular point of `p`.
    pub fn next_ccw(&self, p: Prong) -> Prong {
        match p.side {
            Side::Minus => Prong { side: Side::Plus, ..p },
            Side::Plus => Prong { side: Side::Minus, ..p },
            Side::Multi => {
                let m = self.dg.m[p.vertex];
                let d = self.dg.dead_child[p.vertex].expect("multiprong vertex");
                let b = (p.sheet as i128 - 1 - self.dg.m[d]).rem_euclid(m) + 1;
                Prong { sheet: b as usize, ..p }
            }
        }
    }

    /// Point `(alpha, beta)` at infinity of the base divisor of the prong's
    /// vertex where the stable prong arrives (backwards in time).
    fn prong_start(&self, p: Prong) -> (Q, Q) {
        let dg = self.dg;
        let i = p.vertex;
        match p.side {
            Side::Multi => (self.sheet_alpha(i, Region::Left, p.sheet), q(1, 2)),
            Side::Minus | Side::Plus => {
                let k = dg.child_with_label(i, p.slot);
                let alpha_q = self.sheet_alpha(i, Region::After(k), p.sheet);
                let sign = if p.side == Side::Plus { qi(1) } else { qi(-1) };
                let above = n_above(dg, i, p.slot);
                let beta = sign * q(above, 2 * dg.pole_order(i));
                let m_above: i128 = dg
                    .live_children(i)
                    .iter()
                    .filter(|&&l| dg.label[l] > p.slot)
                    .map(|&l| dg.m[l])
                    .sum();
                let m_all: i128 = dg.children[i].iter().map(|&l| dg.m[l]).sum();
                let darg = qi(m_all) * beta - sign * q(m_above, 2);
                (alpha_q - darg / self.m(i), beta)
            }
        }
    }

    /// Itinerary of a stable prong down to the repeller circles.
    pub fn stable_itinerary(&self, p: Prong) -> Result<ProngItinerary> {
        let dg = self.dg;
        let (mut alpha, mut beta) = self.prong_start(p);
        let mut v = p.vertex;
        let mut hops = Vec::new();
        loop {
            match dg.parent[v] {
                None => {
                    let alpha_r = alpha + qi(dg.euler(v)) * beta;
                    let angle = Turn::new(-beta);
                    let scaled = alpha_r * self.m(v) - self.theta.value();
                    if !scaled.is_integer() {
                        return Err(Error::PropertyViolation(format!(
                            "prong {p:?} reaches the root off the repeller fibers"
                        )));
                    }
                    let index = sheet_of(alpha_r, dg.m[v]);
                    return Ok(ProngItinerary {
                        prong: p,
                        stable: true,
                        hops,
                        terminus: Terminus::Repeller { index, angle },
                    });
                }
                Some(j) => {
                    let a_j = -beta;
                    let b_ji = alpha + qi(dg.euler(v)) * beta;
                    self.check_level_set(j, v, a_j, b_ji)?;
                    hops.push(Hop { parent: j, child: v, alpha: a_j, beta: b_ji });
                    let mut rel = frac(b_ji);
                    // Along the real axis the trajectory only meets a
                    // separatrix if a live sibling (or, at 1/2, the dead
                    // child) lies on that side of `v`.
                    let live = dg.live_children(j);
                    let on_separatrix = (rel.is_zero() && live.last() != Some(&v))
                        || (rel == q(1, 2) && (live.first() != Some(&v) || dg.dead_child[j].is_some()));
                    if on_separatrix {
                        return Err(self.non_generic(format!(
                            "stable prong {p:?} meets a separatrix at the torus {}-{}",
                            dg.name(j),
                            dg.name(v)
                        )));
                    }
                    if rel > q(1, 2) {
                        rel -= qi(1);
                    }
                    let (beta_inf, darg) = delta_map(dg, j, v, rel, rel.is_positive());
                    alpha = a_j - darg / self.m(j);
                    beta = beta_inf;
                    v = j;
                }
            }
        }
    }

    /// Level-set law on the torus between `j` and its child `i`.
    pub fn check_level_set(&self, j: usize, i: usize, alpha: Q, beta: Q) -> Result<()> {
        let lhs = self.m(j) * alpha + self.m(i) * beta;
        let rhs = self.theta.value() - q(self.dg.m_edge[i], 2);
        if (lhs - rhs).is_integer() {
            Ok(())
        } else {
            Err(Error::PropertyViolation(format!(
                "level set violated on torus {}-{}: m_j*alpha + m_i*beta = {lhs}, expected {rhs} mod 1",
                self.dg.name(j),
                self.dg.name(i)
            )))
        }
    }

    /// Forward itinerary from the torus point `(alpha, beta)` between `i`
    /// and its child `k`, up to an arrowhead. Each entry is a torus crossing
    /// `(parent, child, alpha, beta)`.
    pub fn forward_hops(&self, i: usize, k: usize, alpha: Q, beta: Q) -> Result<Vec<Hop>> {
        let dg = self.dg;
        let mut hops = vec![Hop { parent: i, child: k, alpha, beta }];
        let (mut x, mut y, mut a, mut b) = (i, k, alpha, beta);
        while !dg.is_arrow(y) {
            self.check_level_set(x, y, a, b)?;
            let beta_inf = -a;
            let alpha_inf = b + qi(dg.euler(y)) * a;
            let (child, rel, darg) = delta_inverse(dg, y, beta_inf).ok_or_else(|| {
                self.non_generic(format!(
                    "forward trajectory meets a stable separatrix on {}",
                    dg.name(y)
                ))
            })?;
            let alpha_child = alpha_inf + darg / self.m(y);
            hops.push(Hop { parent: y, child, alpha: alpha_child, beta: rel });
            x = y;
            y = child;
            a = alpha_child;
            b = rel;
        }
        let _ = x;
        Ok(hops)
    }

    /// Starting torus point of the unstable separatrix `side` of a singular
    /// point, with the side offset used when pushing arcs.
    pub fn unstable_start(&self, p: Prong) -> (usize, usize, Q, Q, i8) {
        let dg = self.dg;
        let i = p.vertex;
        match p.side {
            Side::Minus => {
                let k = dg.child_with_label(i, p.slot);
                let alpha = self.sheet_alpha(i, Region::After(k), p.sheet);
                (i, k, alpha, Q::zero(), -1)
            }
            Side::Plus => {
                let k = dg.child_with_label(i, p.slot);
                let next = dg.child_with_label(i, p.slot + 1);
                let alpha = self.sheet_alpha(i, Region::After(k), p.sheet);
                (i, next, alpha, q(1, 2), 1)
            }
            Side::Multi => {
                let d = dg.dead_child[i].expect("multiprong vertex");
                let k1 = dg.child_with_label(i, 1);
                let alpha = self.sheet_alpha(i, Region::After(d), p.sheet);
                (i, k1, alpha, q(1, 2), 0)
            }
        }
    }

    /// Itineraries of every stable and unstable prong.
    pub fn itineraries(&self) -> Result<Vec<ProngItinerary>> {
        let mut out = Vec::new();
        for p in self.stable_prongs() {
            out.push(self.stable_itinerary(p)?);
        }
        for p in self.unstable_prongs() {
            let (i, k, alpha, beta, _) = self.unstable_start(p);
            let hops = self.forward_hops(i, k, alpha, beta)?;
            let last = hops.last().expect("at least one hop").child;
            out.push(ProngItinerary {
                prong: p,
                stable: false,
                hops,
                terminus: Terminus::Arrow(last - self.dg.nv),
            });
        }
        Ok(out)
    }

    /// Unstable prongs: `R^-`/`R^+` per saddle sheet, and the prongs of each
    /// multiprong leaving towards the first live child (indexed by sheet).
    pub fn unstable_prongs(&self) -> Vec<Prong> {
        let dg = self.dg;
        let mut out = Vec::new();
        for i in dg.invariant_vertices() {
            let m = dg.m[i] as usize;
            if dg.dead_child[i].is_some() {
                for b in 1..=m {
                    out.push(Prong { vertex: i, slot: 0, side: Side::Multi, sheet: b });
                }
            }
            for a in 1..=self.saddle_slots(i) {
                for b in 1..=m {
                    for side in [Side::Minus, Side::Plus] {
                        out.push(Prong { vertex: i, slot: a, side, sheet: b });
                    }
                }
            }
        }
        out
    }

    /// Endpoints of all stable prongs on the repeller circles.
    pub fn prong_endpoints(&self) -> Result<BTreeMap<Prong, (usize, Turn)>> {
        let mut out = BTreeMap::new();
        for p in self.stable_prongs() {
            let it = self.stable_itinerary(p)?;
            if let Terminus::Repeller { index, angle } = it.terminus {
                out.insert(p, (index, angle));
            }
        }
        Ok(out)
    }
}

/// Enumerates every flow singularity at a generic angle.
pub fn enumerate_singularities(dg: &DecoratedGraph, theta: Turn) -> Result<Vec<FlowSingularity>> {
    Ok(FlowModel::new(dg, theta)?.singularities())
}

/// Itineraries of every prong at a generic angle.
pub fn prong_itineraries(dg: &DecoratedGraph, theta: Turn) -> Result<Vec<ProngItinerary>> {
    FlowModel::new(dg, theta)?.itineraries()
}

#[cfg(test)]
mod tests;
