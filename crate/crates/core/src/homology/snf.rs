//! Smith normal form with both transforms and their inverses.
//!
//! Pivot strategy: the nonzero entry of least absolute value in the active
//! submatrix, ties broken by the first in row-major order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

#[derive(Debug, Clone, Serialize)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    #[serde(skip)]
    pub u_inv: IntMatrix,
    pub w: IntMatrix,
    #[serde(skip)]
    pub w_inv: IntMatrix,
    pub rank: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub invariant_factors: Vec<BigInt>,
}

fn serialize_factors<S: serde::Serializer>(f: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<String> = f.iter().map(ToString::to_string).collect();
    v.serialize(s)
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    w: IntMatrix,
    w_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.w.swap_cols(i, j);
        self.w_inv.swap_rows(i, j);
    }

    /// `row[i] += k * row[j]`.
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_row(i, j, k);
        self.u.add_row(i, j, k);
        self.u_inv.add_col(j, i, &-k);
    }

    /// `col[i] += k * col[j]`.
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_col(i, j, k);
        self.w.add_col(i, j, k);
        self.w_inv.add_row(j, i, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `t` outside the pivot, and makes the pivot
    /// divide the rest of the active submatrix.
    fn reduce_at(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.smallest_entry(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let mut dirty = false;
            for i in t + 1..self.a.rows() {
                if self.a.get(i, t).is_zero() {
                    continue;
                }
                let q = self.a.get(i, t).div_floor(self.a.get(t, t));
                self.add_row(i, t, &-q);
                dirty |= !self.a.get(i, t).is_zero();
            }
            for j in t + 1..self.a.cols() {
                if self.a.get(t, j).is_zero() {
                    continue;
                }
                let q = self.a.get(t, j).div_floor(self.a.get(t, t));
                self.add_col(j, t, &-q);
                dirty |= !self.a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let pivot = self.a.get(t, t).clone();
            let offender = (t + 1..self.a.rows()).find(|&i| {
                (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => self.add_row(t, i, &BigInt::from(1)),
                None => {
                    if pivot.is_negative() {
                        self.negate_row(t);
                    }
                    return true;
                }
            }
        }
    }
}

/// `U * A * W = D` with `D` diagonal, nonnegative, each entry dividing the next.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        w: IntMatrix::identity(n),
        w_inv: IntMatrix::identity(n),
    };
    let mut rank = 0;
    while rank < m.min(n) && r.reduce_at(rank) {
        rank += 1;
    }
    let invariant_factors = (0..rank).map(|i| r.a.get(i, i).clone()).collect();
    SnfResult {
        d: r.a,
        u: r.u,
        u_inv: r.u_inv,
        w: r.w,
        w_inv: r.w_inv,
        rank,
        invariant_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.w, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        assert_eq!(&s.w * &s.w_inv, IntMatrix::identity(a.cols()));
        s
    }

    #[test]
    fn identity_is_its_own_form() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.w, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check(&IntMatrix::from_rows(&[vec![0, 0, 0], vec![0, 4, 6]], 3));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2)]);
        let z = check(&IntMatrix::zeros(2, 3));
        assert_eq!(z.rank, 0);
    }
}
