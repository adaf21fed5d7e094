//! The chain complex of the spine, its integer matrices, and their
//! restriction to homology.

mod matrix;
mod modular;
mod poly;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::dynamics::FlowModel;
use crate::error::{Error, Result};
use crate::graph::DecoratedGraph;
use crate::gyrograph::Gyrograph;

pub use matrix::IntMatrix;
pub use poly::{char_poly, Poly};
pub use snf::{smith_normal_form, SnfResult};

/// Generators of the chain groups: repellers, and triples
/// `(vertex, slot, sheet)` with slot 0 for a multiprong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBasis {
    pub i0: Vec<usize>,
    pub i1: Vec<(usize, usize, usize)>,
}

impl ChainBasis {
    pub fn position(&self, key: (usize, usize, usize)) -> Option<usize> {
        self.i1.iter().position(|&k| k == key)
    }
}

/// I1 in the order (vertex order, slot with 0 first, sheet).
pub fn build_basis(model: &FlowModel) -> ChainBasis {
    let dg = model.dg;
    let mut i1 = Vec::new();
    for i in dg.invariant_vertices() {
        if let Some(lifts) = model.multiprong_lifts(i) {
            for b in 1..=(dg.m[i] - lifts) as usize {
                i1.push((i, 0, b));
            }
        }
        for a in 1..=model.saddle_slots(i) {
            for b in 1..=dg.m[i] as usize {
                i1.push((i, a, b));
            }
        }
    }
    ChainBasis { i0: (1..=dg.m[dg.root()] as usize).collect(), i1 }
}

/// Column of chain `(i, a, b)` is `r(first prong) - r(second prong)`.
pub fn differential(gg: &Gyrograph, basis: &ChainBasis) -> IntMatrix {
    let mut d = IntMatrix::zeros(basis.i0.len(), basis.i1.len());
    for (col, &(i, a, b)) in basis.i1.iter().enumerate() {
        let (first, second) = gg.model.chain_prongs(i, a, b);
        d.add_to(gg.ends[&first].circle - 1, col, 1);
        d.add_to(gg.ends[&second].circle - 1, col, -1);
    }
    d
}

/// Cyclic permutation of the repellers: column `r` has its one in row `r + 1`.
pub fn monodromy_b0(basis: &ChainBasis) -> IntMatrix {
    let n = basis.i0.len();
    let mut b = IntMatrix::zeros(n, n);
    for r in 0..n {
        b.add_to((r + 1) % n, r, 1);
    }
    b
}

fn fill_column(
    m: &mut IntMatrix,
    basis: &ChainBasis,
    col: usize,
    chain: &crate::dynamics::BasisChain,
) -> Result<()> {
    for (&key, &c) in chain {
        let row = basis
            .position(key)
            .ok_or_else(|| Error::Mismatch(format!("chain {key:?} is not a basis element")))?;
        m.add_to(row, col, c);
    }
    Ok(())
}

/// Monodromy on C1 from the monodromy spoors of both prongs of each chain.
pub fn monodromy_b1(gg: &Gyrograph, basis: &ChainBasis) -> Result<IntMatrix> {
    let n = basis.i1.len();
    let mut b = IntMatrix::zeros(n, n);
    for (col, &(i, a, bb)) in basis.i1.iter().enumerate() {
        let (first, second) = gg.model.chain_prongs(i, a, bb);
        let mut chain = gg.monodromy_spoor(first)?.chain();
        for (p, c) in gg.monodromy_spoor(second)?.chain() {
            *chain.entry(p).or_insert(0) -= c;
        }
        chain.retain(|_, c| *c != 0);
        fill_column(&mut b, basis, col, &gg.model.to_basis(&chain)?)?;
    }
    Ok(b)
}

/// Variation on the dual basis from the variation spoor of each chain's
/// first prong.
pub fn variation_v(gg: &Gyrograph, basis: &ChainBasis) -> Result<IntMatrix> {
    let n = basis.i1.len();
    let mut v = IntMatrix::zeros(n, n);
    for (col, &(i, a, b)) in basis.i1.iter().enumerate() {
        let (first, _) = gg.model.chain_prongs(i, a, b);
        let chain = gg.variation_spoor(first)?.chain();
        fill_column(&mut v, basis, col, &gg.model.to_basis(&chain)?)?;
    }
    Ok(v)
}

/// The same two matrices computed by pushing arcs through the tori.
pub fn engine_matrices(model: &FlowModel, basis: &ChainBasis) -> Result<(IntMatrix, IntMatrix)> {
    let n = basis.i1.len();
    let mut b = IntMatrix::zeros(n, n);
    let mut v = IntMatrix::zeros(n, n);
    for (col, &(i, a, bb)) in basis.i1.iter().enumerate() {
        fill_column(&mut b, basis, col, &model.chain_monodromy(i, a, bb)?)?;
        fill_column(&mut v, basis, col, &model.chain_variation(i, a, bb)?)?;
    }
    Ok((b, v))
}

/// `(W^-1 B W)[r.., r..]` and `(W^-1 V W^-T)[r.., r..]`. Fails with
/// `CycleLeak` when `B` moves a cycle out of the kernel of `d1`.
pub fn homology_restriction(
    snf: &SnfResult,
    b1: &IntMatrix,
    v: &IntMatrix,
) -> Result<(IntMatrix, IntMatrix)> {
    let n = b1.rows();
    let r = snf.rank;
    let conj = &(&snf.w_inv * b1) * &snf.w;
    let leak = conj.block(0, r, r, n);
    if !leak.is_zero() {
        return Err(Error::CycleLeak(format!(
            "monodromy has a nonzero {r}x{} block off the cycle space",
            n - r
        )));
    }
    let var = &(&snf.w_inv * v) * &snf.w_inv.transpose();
    Ok((conj.block(r, n, r, n), var.block(r, n, r, n)))
}

/// One named identity and whether it held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaReport {
    /// `det(I - t M_H)` predicted from the resolution graph.
    pub predicted: Poly,
    /// `det(t I - M_H)` predicted, i.e. the reversal of the above.
    pub predicted_char_poly: Poly,
    pub euler_graph: i128,
    pub euler_complex: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixBundle {
    pub basis: ChainBasis,
    pub d1: IntMatrix,
    pub b0: IntMatrix,
    pub b1: IntMatrix,
    pub v: IntMatrix,
    pub snf: SnfResult,
    pub m_h: IntMatrix,
    pub var_h: IntMatrix,
    pub char_poly_m_h: Poly,
    pub zeta: ZetaReport,
    pub checks: Vec<Check>,
}

/// `(1 - t) * prod (1 - t^m_i)^-(2 - valency_i)` over the vertices.
pub fn zeta_prediction(dg: &DecoratedGraph) -> Result<Poly> {
    let mut num = Poly::one_minus_power(1);
    let mut den = Poly::one();
    for v in 0..dg.nv {
        let chi = 2 - dg.valency(v) as i64;
        let factor = Poly::one_minus_power(dg.m[v] as usize);
        if chi < 0 {
            num = num.mul(&factor.pow((-chi) as u32));
        } else if chi > 0 {
            den = den.mul(&factor.pow(chi as u32));
        }
    }
    // Products of `1 - t^k` have leading coefficient +-1.
    let (q, r) = num
        .div_rem(&den)
        .ok_or_else(|| Error::Mismatch("zeta denominator has a non-unit leading term".to_string()))?;
    if !r.is_zero() {
        return Err(Error::Mismatch(format!("zeta function {num} / {den} is not a polynomial")));
    }
    Ok(q)
}

/// Assembles every matrix at a generic angle and runs the identities. The
/// gyrograph route fills `b1` and `v`; the arc-pushing route must agree.
pub fn assemble(gg: &Gyrograph) -> Result<MatrixBundle> {
    let dg = gg.model.dg;
    let basis = build_basis(&gg.model);
    let d1 = differential(gg, &basis);
    let b0 = monodromy_b0(&basis);
    let b1 = monodromy_b1(gg, &basis)?;
    let v = variation_v(gg, &basis)?;
    let (engine_b1, engine_v) = engine_matrices(&gg.model, &basis)?;
    if engine_b1 != b1 {
        return Err(Error::Mismatch("monodromy from gyrations and from arc pushing differ".into()));
    }
    if engine_v != v {
        return Err(Error::Mismatch("variation from gyrations and from arc pushing differ".into()));
    }

    let snf = smith_normal_form(&d1);
    let (m_h, var_h) = homology_restriction(&snf, &b1, &v)?;
    let char_poly_m_h = char_poly(&m_h);
    let predicted = zeta_prediction(dg)?;
    let predicted_char_poly = predicted.reversed(m_h.rows() + 1);
    let euler_graph: i128 = (0..dg.nv).map(|i| dg.m[i] * (2 - dg.valency(i) as i128)).sum();
    let euler_complex = basis.i0.len() as i128 - basis.i1.len() as i128;
    let zeta = ZetaReport { predicted, predicted_char_poly, euler_graph, euler_complex };
    let checks = run_checks(dg, &basis, &d1, &b0, &b1, &v, &snf, &m_h, &var_h, &char_poly_m_h, &zeta);
    Ok(MatrixBundle { basis, d1, b0, b1, v, snf, m_h, var_h, char_poly_m_h, zeta, checks })
}

/// `det A = (-1)^n det(0 I - A)`.
pub fn determinant_from_char_poly(char_poly: &Poly) -> BigInt {
    let n = char_poly.degree().unwrap_or(0);
    let c0 = char_poly.coeffs().first().cloned().unwrap_or_default();
    if n % 2 == 0 {
        c0
    } else {
        -c0
    }
}

pub fn determinant(a: &IntMatrix) -> BigInt {
    modular::det(a)
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[allow(clippy::too_many_arguments)]
fn run_checks(
    dg: &DecoratedGraph,
    basis: &ChainBasis,
    d1: &IntMatrix,
    b0: &IntMatrix,
    b1: &IntMatrix,
    v: &IntMatrix,
    snf: &SnfResult,
    m_h: &IntMatrix,
    var_h: &IntMatrix,
    char_m_h: &Poly,
    zeta: &ZetaReport,
) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::new(
        "chain map d1 B1 = B0 d1",
        &(d1 * b1) == &(b0 * d1),
        "",
    ));
    out.push(Check::new("B1 V^T = V", &(b1 * &v.transpose()) == v, ""));
    out.push(Check::new("M_H Var_H^T = Var_H", &(m_h * &var_h.transpose()) == var_h, ""));
    let det_var = modular::det(var_h);
    out.push(Check::new("det Var_H = +-1", is_unit(&det_var), det_var.to_string()));
    let det_m = determinant_from_char_poly(char_m_h);
    out.push(Check::new("det M_H = +-1", is_unit(&det_m), det_m.to_string()));
    let snf_ok = &(&snf.u * d1) * &snf.w == snf.d
        && is_unit(&snf.u.det())
        && is_unit(&snf.w.det())
        && snf.invariant_factors.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
    out.push(Check::new("Smith form U d1 W = D", snf_ok, format!("rank {}", snf.rank)));
    out.push(Check::new(
        "Euler characteristic",
        zeta.euler_graph == zeta.euler_complex,
        format!("graph {} complex {}", zeta.euler_graph, zeta.euler_complex),
    ));
    out.push(Check::new(
        "char poly of M_H matches zeta",
        *char_m_h == zeta.predicted_char_poly,
        format!("{char_m_h} vs {}", zeta.predicted_char_poly),
    ));
    let n = (0..dg.nv).fold(1i128, |l, i| l.lcm(&dg.m[i]));
    let base = Poly::power_minus_one_mod(n as u64, char_m_h);
    out.push(Check::new(
        "char poly divides (t^N - 1)^|I1|",
        char_m_h.divides_power(&base, basis.i1.len() as u64),
        format!("N = {n}"),
    ));
    let m0 = basis.i0.len() as u32;
    out.push(Check::new("B0^m0 = I", b0.power(m0) == IntMatrix::identity(m0 as usize), ""));
    out
}

#[cfg(test)]
mod tests;
