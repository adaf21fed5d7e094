//! Non-generic angles.
//!
//! `arg x` is a global function on the fiber. Along a separatrix lying over
//! a region of the base divisor of `v` it equals
//! `(c_v * theta - K) / m_v` modulo `gcd(c_v, m_v) / m_v`, where
//! `K = (c_v * M - m_v * C) / 2` collects the arguments of `f_v` and of
//! `x` on that region.
//! A connection from an unstable separatrix at `u` to a stable one at a
//! descendant `v` forces the two values to agree, which is a linear
//! congruence in `theta`. The union of its solutions is a finite superset of
//! the non-generic angles.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{FlowModel, Region};
use crate::error::{Error, Result};
use crate::graph::DecoratedGraph;
use crate::turn::{frac, q, qi, rational_gcd, Turn, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparatrixConstant {
    pub vertex: usize,
    pub stable: bool,
    /// `K` with `arg x = (c_v theta - K) / m_v` along the separatrix, in turns.
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub constant: Q,
}

/// `K` reduced modulo `gcd(c_v, m_v)`, the precision `arg x` needs after
/// dividing by `m_v`.
fn region_constant(dg: &DecoratedGraph, v: usize, region: Region) -> Q {
    let (big_m, big_c) = match region {
        Region::Left => (dg.m_total(v), dg.c_total(v)),
        Region::After(k) => (dg.m_edge[k], dg.c_edge[k]),
    };
    let modulus = qi(dg.c0[v].gcd(&dg.m[v]));
    frac(q(dg.c0[v] * big_m - dg.m[v] * big_c, 2) / modulus) * modulus
}

/// Constants of every separatrix family of every saddle and multiprong.
pub fn separatrix_constants(dg: &DecoratedGraph) -> Vec<SeparatrixConstant> {
    let mut out = Vec::new();
    for v in dg.invariant_vertices() {
        let slots = dg.live_count(v).saturating_sub(1);
        for a in 1..=slots {
            let k = dg.child_with_label(v, a);
            let constant = region_constant(dg, v, Region::After(k));
            for stable in [true, false] {
                out.push(SeparatrixConstant { vertex: v, stable, constant });
            }
        }
        if let Some(d) = dg.dead_child[v] {
            out.push(SeparatrixConstant {
                vertex: v,
                stable: true,
                constant: region_constant(dg, v, Region::Left),
            });
            out.push(SeparatrixConstant {
                vertex: v,
                stable: false,
                constant: region_constant(dg, v, Region::After(d)),
            });
        }
    }
    out
}

fn is_proper_ancestor(dg: &DecoratedGraph, u: usize, v: usize) -> bool {
    dg.path_to_root(v).iter().skip(1).any(|&x| x == u)
}

/// `lambda * theta = delta (mod step)`: the condition for an unstable
/// separatrix family at `unstable_vertex` to meet a stable family at its
/// descendant `stable_vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Congruence {
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub lambda: Q,
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub delta: Q,
    #[serde(serialize_with = "crate::turn::serialize_q")]
    pub step: Q,
    pub unstable_vertex: usize,
    pub stable_vertex: usize,
}

impl Congruence {
    pub fn holds(&self, theta: Turn) -> bool {
        ((self.lambda * theta.value() - self.delta) / self.step).is_integer()
    }

    /// Distance between consecutive solutions, `None` when `lambda = 0`.
    pub fn spacing(&self) -> Option<Q> {
        (!self.lambda.is_zero()).then(|| self.step / self.lambda.abs())
    }
}

/// One congruence per pair of an unstable family at `u` and a stable
/// family at a descendant `v`.
pub fn defining_congruences(dg: &DecoratedGraph) -> Vec<Congruence> {
    let constants = separatrix_constants(dg);
    let mut out = Vec::new();
    for p in constants.iter().filter(|c| !c.stable) {
        for s in constants.iter().filter(|c| c.stable) {
            let (u, v) = (p.vertex, s.vertex);
            if !is_proper_ancestor(dg, u, v) {
                continue;
            }
            out.push(Congruence {
                lambda: dg.inverse_hironaka(v) - dg.inverse_hironaka(u),
                delta: s.constant / qi(dg.m[v]) - p.constant / qi(dg.m[u]),
                step: rational_gcd(
                    q(dg.c0[u].gcd(&dg.m[u]), dg.m[u]),
                    q(dg.c0[v].gcd(&dg.m[v]), dg.m[v]),
                ),
                unstable_vertex: u,
                stable_vertex: v,
            });
        }
    }
    out
}

/// First congruence `theta` satisfies, described for error messages.
pub(crate) fn candidate_hit(dg: &DecoratedGraph, theta: Turn) -> Option<String> {
    defining_congruences(dg).into_iter().find(|c| c.holds(theta)).map(|c| {
        format!(
            "an unstable separatrix on {} may meet a stable separatrix on {}",
            dg.name(c.unstable_vertex),
            dg.name(c.stable_vertex)
        )
    })
}

/// The finite candidate set of non-generic angles.
pub fn nongeneric_angles(dg: &DecoratedGraph) -> BTreeSet<Turn> {
    let mut out = BTreeSet::new();
    for c in defining_congruences(dg) {
        let Some(spacing) = c.spacing() else { continue };
        let count = (qi(1) / spacing).to_integer();
        let first = c.delta / c.lambda;
        for k in 0..count {
            out.insert(Turn::new(first + spacing * qi(k)));
        }
    }
    out
}

/// Affine function `slope * s + offset` of the sweep parameter.
#[derive(Debug, Clone, Copy)]
struct Affine {
    slope: Q,
    offset: Q,
}

impl Affine {
    fn at(&self, s: Q) -> Q {
        self.slope * s + self.offset
    }

    fn scale(self, by: Q) -> Affine {
        Affine { slope: self.slope * by, offset: self.offset * by }
    }

    fn plus(self, other: Affine) -> Affine {
        Affine { slope: self.slope + other.slope, offset: self.offset + other.offset }
    }

    fn constant(c: Q) -> Affine {
        Affine { slope: Q::zero(), offset: c }
    }

    /// Parameters in `(lo, hi)` where the function is congruent to `value`
    /// modulo one.
    fn solve(&self, value: Q, lo: Q, hi: Q) -> Vec<Q> {
        if self.slope.is_zero() {
            return Vec::new();
        }
        let (a, b) = (self.at(lo), self.at(hi));
        let (min, max) = if a < b { (a, b) } else { (b, a) };
        let mut t = (min - value).ceil();
        let mut out = Vec::new();
        while value + t <= max {
            let s = (value + t - self.offset) / self.slope;
            if s > lo && s < hi {
                out.push(s);
            }
            t += qi(1);
        }
        out
    }
}

struct Sweep<'a> {
    dg: &'a DecoratedGraph,
    source: usize,
    start_child: usize,
    start_beta: Q,
    region_m: i128,
    found: BTreeSet<Turn>,
}

impl<'a> Sweep<'a> {
    fn theta_at(&self, s: Q) -> Turn {
        Turn::new(qi(self.dg.m[self.source]) * s + q(self.region_m, 2))
    }

    /// Follows the family over the parameter interval `(lo, hi)` from the
    /// torus above `y`, where `alpha` is the fiber angle of its parent.
    fn follow(&mut self, y: usize, alpha: Affine, beta: Affine, lo: Q, hi: Q) -> Result<()> {
        let dg = self.dg;
        if dg.is_arrow(y) {
            return Ok(());
        }
        let beta_inf = alpha.scale(qi(-1));
        let alpha_inf = beta.plus(alpha.scale(qi(dg.euler(y))));
        let pole = dg.pole_order(y);
        let live = dg.live_children(y);

        let mut separatrices: Vec<Q> = Vec::new();
        for &k in &live[..live.len().saturating_sub(1)] {
            let above = super::n_above(dg, y, dg.label[k]);
            separatrices.push(q(above, 2 * pole));
            separatrices.push(q(-above, 2 * pole));
        }
        let mut cuts: Vec<Q> = Vec::new();
        for &v in &separatrices {
            for s in beta_inf.solve(v, lo, hi) {
                self.found.insert(self.theta_at(s));
                cuts.push(s);
            }
        }
        for v in [Q::zero(), q(1, 2)] {
            for s in beta_inf.solve(v, lo, hi) {
                if v == q(1, 2) && dg.dead_child[y].is_some() {
                    self.found.insert(self.theta_at(s));
                } else {
                    self.check_point(s)?;
                }
                cuts.push(s);
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut bounds = vec![lo];
        bounds.extend(cuts);
        bounds.push(hi);
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = (a + b) / qi(2);
            let value = beta_inf.at(mid);
            let shift = {
                let f = frac(value);
                value - if f > q(1, 2) { f - qi(1) } else { f }
            };
            let rep = beta_inf.plus(Affine::constant(-shift));
            let (k, _, _) = super::delta_inverse(dg, y, value).ok_or_else(|| {
                Error::Mismatch("sweep midpoint lies on a separatrix".to_string())
            })?;
            let upper = rep.at(mid).is_positive();
            let sign = if upper { qi(1) } else { qi(-1) };
            let above = qi(super::n_above(dg, y, dg.label[k]));
            let rel = rep
                .scale(qi(pole))
                .plus(Affine::constant(-sign * above / qi(2)))
                .scale(qi(1) / qi(dg.n(y, k)));
            let half = sign / qi(2);
            let mut darg = Affine::constant(Q::zero());
            for &l in &dg.children[y] {
                let start = if l == k {
                    rel
                } else if dg.label[l] > dg.label[k] {
                    Affine::constant(half)
                } else {
                    Affine::constant(Q::zero())
                };
                darg = darg.plus(rep.plus(start.scale(qi(-1))).scale(qi(dg.m[l])));
            }
            let alpha_child = alpha_inf.plus(darg.scale(q(1, dg.m[y])));
            self.follow(k, alpha_child, rel, a, b)?;
        }
        Ok(())
    }

    /// A parameter where the path meets a basin boundary that is not a
    /// separatrix: decide by following that single trajectory exactly.
    fn check_point(&mut self, s: Q) -> Result<()> {
        let theta = self.theta_at(s);
        let model = FlowModel::unchecked(self.dg, theta);
        match model.forward_hops(self.source, self.start_child, s, self.start_beta) {
            Ok(_) => Ok(()),
            Err(Error::NonGenericAngle { .. }) => {
                self.found.insert(theta);
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

/// Exact set of angles at which some unstable separatrix runs into a stable
/// one, found by sweeping each unstable family over all angles at once.
/// Independent of the congruences behind [`nongeneric_angles`].
pub fn saddle_connection_angles(dg: &DecoratedGraph) -> Result<BTreeSet<Turn>> {
    let mut found = BTreeSet::new();
    for u in dg.invariant_vertices() {
        let mut families: Vec<(usize, Q, i128)> = Vec::new();
        let slots = dg.live_count(u).saturating_sub(1);
        for a in 1..=slots {
            let k = dg.child_with_label(u, a);
            let next = dg.child_with_label(u, a + 1);
            families.push((k, Q::zero(), dg.m_edge[k]));
            families.push((next, q(1, 2), dg.m_edge[k]));
        }
        if let Some(d) = dg.dead_child[u] {
            families.push((dg.child_with_label(u, 1), q(1, 2), dg.m_edge[d]));
        }
        for (child, beta, region_m) in families {
            let mut sweep = Sweep {
                dg,
                source: u,
                start_child: child,
                start_beta: beta,
                region_m,
                found: BTreeSet::new(),
            };
            // The parameter is the fiber angle at the source, over one full
            // turn; its endpoint is probed on its own.
            sweep.check_point(Q::zero())?;
            sweep.follow(
                child,
                Affine { slope: qi(1), offset: Q::zero() },
                Affine::constant(beta),
                Q::zero(),
                qi(1),
            )?;
            found.extend(sweep.found);
        }
    }
    Ok(found)
}
