//! Direct computation of monodromy and variation chains by pushing arcs of
//! boundary tori down to the repeller circles and recording every time an
//! arc has to wrap around a singular point.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::{sheet_of, FlowModel, Prong, Region, Side};
use crate::error::{Error, Result};
use crate::turn::{frac, q, qi, Q};

/// Integer combination of stable prongs.
pub type ProngChain = BTreeMap<Prong, i64>;

/// Integer combination of basis chains keyed by `(vertex, slot, sheet)`.
pub type BasisChain = BTreeMap<(usize, usize, usize), i64>;

pub(crate) fn add_term<K: Ord>(chain: &mut BTreeMap<K, i64>, key: K, coef: i64) {
    match chain.entry(key) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += coef;
            if *e.get() == 0 {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if coef != 0 {
                e.insert(coef);
            }
        }
    }
}

/// A piece of an arc between two consecutive split points. `sigma` marks an
/// endpoint that sits infinitesimally below (-1) or above (+1) its value.
#[derive(Debug, Clone, Copy)]
struct Piece {
    start: Q,
    start_sigma: i8,
    end: Q,
    end_sigma: i8,
}

impl<'a> FlowModel<'a> {
    /// Chain of stable prongs the saddle or multiprong excursion at a
    /// crossing contributes, if any.
    fn crossing_event(&self, j: usize, i: usize, c: Q, alpha_c: Q) -> Result<Vec<(Prong, i64)>> {
        let dg = self.dg;
        let a = dg.label[i];
        let live = dg.live_count(j);
        let on_half = !c.is_integer();
        let check = |region: Region, alpha: Q, b: usize| -> Result<()> {
            if frac(alpha - self.sheet_alpha(j, region, b)).is_zero() {
                Ok(())
            } else {
                Err(Error::PropertyViolation(format!(
                    "crossing on {} near {} does not match a singular fiber",
                    dg.name(j),
                    dg.name(i)
                )))
            }
        };
        if !on_half && a >= 1 && a < live {
            let b = sheet_of(alpha_c, dg.m[j]);
            check(Region::After(i), alpha_c, b)?;
            return Ok(vec![
                (Prong { vertex: j, slot: a, side: Side::Minus, sheet: b }, 1),
                (Prong { vertex: j, slot: a, side: Side::Plus, sheet: b }, -1),
            ]);
        }
        if on_half && a >= 2 {
            let b = sheet_of(alpha_c, dg.m[j]);
            let k = dg.child_with_label(j, a - 1);
            check(Region::After(k), alpha_c, b)?;
            return Ok(vec![
                (Prong { vertex: j, slot: a - 1, side: Side::Plus, sheet: b }, 1),
                (Prong { vertex: j, slot: a - 1, side: Side::Minus, sheet: b }, -1),
            ]);
        }
        if on_half && a == 1 {
            if let Some(d) = dg.dead_child[j] {
                let offset = q(dg.m[d], 2 * dg.m[j]);
                let left = alpha_c - offset;
                let right = alpha_c + offset;
                let b_left = sheet_of(left, dg.m[j]);
                let b_right = sheet_of(right, dg.m[j]);
                check(Region::Left, left, b_left)?;
                check(Region::Left, right, b_right)?;
                return Ok(vec![
                    (Prong { vertex: j, slot: 0, side: Side::Multi, sheet: b_left }, 1),
                    (Prong { vertex: j, slot: 0, side: Side::Multi, sheet: b_right }, -1),
                ]);
            }
        }
        Ok(Vec::new())
    }

    /// Pushes the arc of the torus between `j` and its child `i` running from
    /// `beta = lo` (fiber angle `alpha_lo`) to `beta = hi` down to the root,
    /// adding `coef` times every excursion to `acc`.
    #[allow(clippy::too_many_arguments)]
    fn push_arc(
        &self,
        j: usize,
        i: usize,
        alpha_lo: Q,
        lo: Q,
        hi: Q,
        sigma_lo: i8,
        sigma_hi: i8,
        coef: i64,
        acc: &mut ProngChain,
    ) -> Result<()> {
        let dg = self.dg;
        let slope = -q(dg.m[i], dg.m[j]);
        let alpha_at = |x: Q| alpha_lo + slope * (x - lo);

        let mut cuts: Vec<Q> = Vec::new();
        let mut c = (lo * qi(2)).ceil() / qi(2);
        while c <= hi {
            let at_lo = c == lo;
            let at_hi = c == hi;
            let events = self.crossing_event(j, i, c, alpha_at(c))?;
            let counted = if at_lo && sigma_lo == 0 || at_hi && sigma_hi == 0 {
                if !events.is_empty() {
                    return Err(self.non_generic(format!(
                        "an arc endpoint lies on a separatrix near {} on {}",
                        dg.name(i),
                        dg.name(j)
                    )));
                }
                false
            } else if at_lo {
                sigma_lo < 0
            } else if at_hi {
                sigma_hi > 0
            } else {
                true
            };
            if counted {
                for (p, e) in events {
                    add_term(acc, p, coef * e);
                }
                cuts.push(c);
            }
            c += q(1, 2);
        }

        if dg.parent[j].is_none() {
            return Ok(());
        }

        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        let (mut start, mut start_sigma) = (lo, sigma_lo);
        for &cut in &cuts {
            pieces.push(Piece { start, start_sigma, end: cut, end_sigma: -1 });
            start = cut;
            start_sigma = 1;
        }
        pieces.push(Piece { start, start_sigma, end: hi, end_sigma: sigma_hi });

        let p = dg.parent[j].expect("checked above");
        let b_j = qi(dg.euler(j));
        let ratio = q(dg.m[j], dg.m[p]);
        for piece in pieces {
            let h = half_index(&piece);
            let upper = h % 2 == 0;
            let base = if upper { q(h, 2) } else { q(h + 1, 2) };
            let image = |x: Q| {
                let (beta_inf, darg) = super::delta_map(dg, j, i, x - base, upper);
                let alpha = alpha_at(x) - darg / qi(dg.m[j]);
                (-beta_inf, alpha + b_j * beta_inf)
            };
            let (a0, b0) = image(piece.start);
            let (a1, b1) = image(piece.end);
            if b1 < b0 || (a1 - a0) != -ratio * (b1 - b0) {
                return Err(Error::PropertyViolation(format!(
                    "arc image on torus {}-{} is not a level-set segment",
                    dg.name(p),
                    dg.name(j)
                )));
            }
            self.push_arc(p, j, a0, b0, b1, piece.start_sigma, piece.end_sigma, coef, acc)?;
        }
        Ok(())
    }

    /// Monodromy image of a stable prong as a chain of stable prongs: the
    /// prong on the next sheet plus the excursions of the twisted arcs at
    /// every torus the prong crosses.
    pub fn prong_monodromy(&self, p: Prong) -> Result<ProngChain> {
        let dg = self.dg;
        let mut acc = ProngChain::new();
        add_term(&mut acc, self.next_sheet(p), 1);
        let it = self.stable_itinerary(p)?;
        for hop in &it.hops {
            let lo = hop.beta;
            let hi = lo + q(1, dg.m[hop.child]);
            let alpha = hop.alpha + q(1, dg.m[hop.parent]);
            self.push_arc(hop.parent, hop.child, alpha, lo, hi, 0, 0, 1, &mut acc)?;
        }
        Ok(acc)
    }

    /// Excursions collected along the forward path leaving the torus point
    /// `(alpha, beta)` between `i` and `k`, offset by `sigma`.
    fn forward_excursions(
        &self,
        i: usize,
        k: usize,
        alpha: Q,
        beta: Q,
        sigma: i8,
        coef: i64,
        acc: &mut ProngChain,
    ) -> Result<()> {
        let dg = self.dg;
        let hops = self.forward_hops(i, k, alpha, beta)?;
        // Both ends of every arc sit on the same side of the unstable path,
        // so both inherit the side offset at every torus.
        for hop in &hops {
            let lo = hop.beta;
            let hi = lo + q(1, dg.m[hop.child]);
            let start_alpha = hop.alpha + q(1, dg.m[hop.parent]);
            self.push_arc(hop.parent, hop.child, start_alpha, lo, hi, sigma, sigma, coef, acc)?;
        }
        Ok(())
    }

    /// Two stable prongs whose difference is the basis chain `(i, a, b)`.
    pub fn chain_prongs(&self, i: usize, a: usize, b: usize) -> (Prong, Prong) {
        if a == 0 {
            let top = self.top_prong(i, b);
            (
                Prong { vertex: i, slot: 0, side: Side::Multi, sheet: b },
                Prong { vertex: i, slot: 0, side: Side::Multi, sheet: top },
            )
        } else {
            (
                Prong { vertex: i, slot: a, side: Side::Minus, sheet: b },
                Prong { vertex: i, slot: a, side: Side::Plus, sheet: b },
            )
        }
    }

    /// Monodromy image of the basis chain `(i, a, b)`.
    pub fn chain_monodromy(&self, i: usize, a: usize, b: usize) -> Result<BasisChain> {
        let (first, second) = self.chain_prongs(i, a, b);
        let mut chain = self.prong_monodromy(first)?;
        for (p, c) in self.prong_monodromy(second)? {
            add_term(&mut chain, p, -c);
        }
        self.to_basis(&chain)
    }

    /// Variation of the dual of the basis chain `(i, a, b)`: the excursions
    /// of the arcs along the left-hand side of its unstable path minus those
    /// along the right-hand side.
    pub fn chain_variation(&self, i: usize, a: usize, b: usize) -> Result<BasisChain> {
        let dg = self.dg;
        let mut acc = ProngChain::new();
        if a == 0 {
            let d = dg.dead_child[i].expect("multiprong vertex");
            let k1 = dg.child_with_label(i, 1);
            let alpha = self.sheet_alpha(i, Region::Left, b);
            let offset = q(dg.m[d], 2 * dg.m[i]);
            self.forward_excursions(i, k1, alpha + offset, q(1, 2), -1, 1, &mut acc)?;
            self.forward_excursions(i, k1, alpha - offset, q(1, 2), 1, -1, &mut acc)?;
        } else {
            let left = dg.child_with_label(i, a);
            let right = dg.child_with_label(i, a + 1);
            let alpha = self.sheet_alpha(i, Region::After(left), b);
            self.forward_excursions(i, left, alpha, Q::zero(), -1, 1, &mut acc)?;
            self.forward_excursions(i, right, alpha, q(1, 2), 1, -1, &mut acc)?;
        }
        self.to_basis(&acc)
    }

    /// Rewrites a chain of stable prongs in the basis `S = P^- - P^+` and
    /// `S[b] = P[b] - P[top(b)]`. Fails unless the coefficients at every
    /// singular point sum to zero.
    pub fn to_basis(&self, chain: &ProngChain) -> Result<BasisChain> {
        let mut out = BasisChain::new();
        let mut totals: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
        for (&p, &c) in chain {
            match p.side {
                Side::Minus => {
                    add_term(&mut out, (p.vertex, p.slot, p.sheet), c);
                    *totals.entry((p.vertex, p.slot, p.sheet)).or_insert(0) += c;
                }
                Side::Plus => {
                    *totals.entry((p.vertex, p.slot, p.sheet)).or_insert(0) += c;
                }
                Side::Multi => {
                    let top = self.top_prong(p.vertex, p.sheet);
                    if p.sheet != top {
                        add_term(&mut out, (p.vertex, 0, p.sheet), c);
                    }
                    *totals.entry((p.vertex, 0, top)).or_insert(0) += c;
                }
            }
        }
        if let Some((key, total)) = totals.iter().find(|(_, &t)| t != 0) {
            return Err(Error::PropertyViolation(format!(
                "chain is not a sum of basis chains: coefficient {total} left at singular point {key:?}"
            )));
        }
        Ok(out)
    }
}

fn half_index(piece: &Piece) -> i128 {
    if piece.start < piece.end {
        return (piece.start + piece.end).floor().to_integer();
    }
    let twice = piece.start * qi(2);
    if twice.is_integer() {
        let sigma = if piece.start_sigma != 0 { piece.start_sigma } else { piece.end_sigma };
        twice.to_integer() - i128::from(sigma < 0)
    } else {
        twice.floor().to_integer()
    }
}
