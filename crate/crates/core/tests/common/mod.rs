//! Random realizable graphs and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use plane_monodromy::homology::{IntMatrix, Poly};
use plane_monodromy::ResolutionGraph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Point to be blown up: the origin, a free point of one divisor, or the
/// crossing of two.
#[derive(Debug, Clone, Copy)]
enum Point {
    Origin,
    Free(usize),
    Crossing(usize, usize),
}

/// Where a branch goes after a blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Next {
    /// Meets the new divisor transversally at a point of its own.
    Done,
    /// One of a few shared free points of the new divisor.
    Free(u8),
    /// The crossing of the new divisor with an older one.
    Crossing(usize),
}

struct Blowups {
    euler: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
    arrows: Vec<usize>,
    max_vertices: usize,
}

impl Blowups {
    /// Blows up `p`, through which `branches` branches pass. A lone branch
    /// at a free point is `pending`: blowing it up only pays off if the
    /// branch later passes through a crossing, so it may not stop yet.
    fn blow_up(&mut self, rng: &mut StdRng, p: Point, branches: usize, pending: bool) -> Option<()> {
        let e = self.euler.len();
        if e >= self.max_vertices {
            return None;
        }
        self.euler.push(1);
        let old: Vec<usize> = match p {
            Point::Origin => vec![],
            Point::Free(i) => vec![i],
            Point::Crossing(i, j) => {
                self.edges.remove(&(i.min(j), i.max(j)));
                vec![i, j]
            }
        };
        for &i in &old {
            self.euler[i] += 1;
            self.edges.insert((i.min(e), i.max(e)));
        }
        let mut choices = Vec::with_capacity(branches);
        for _ in 0..branches {
            let roll: f64 = rng.gen();
            let next = if roll < 0.4 && !pending {
                Next::Done
            } else if roll < 0.75 && !old.is_empty() {
                Next::Crossing(old[rng.gen_range(0..old.len())])
            } else {
                Next::Free(rng.gen_range(0..2))
            };
            choices.push(next);
        }
        choices.sort();
        let mut k = 0;
        while k < choices.len() {
            let c = choices[k];
            let n = choices[k..].iter().take_while(|&&x| x == c).count();
            match c {
                Next::Done => {
                    for _ in 0..n {
                        self.arrows.push(e);
                    }
                }
                Next::Free(_) => self.blow_up(rng, Point::Free(e), n, n == 1)?,
                Next::Crossing(i) => self.blow_up(rng, Point::Crossing(e, i), n, false)?,
            }
            k += n;
        }
        Some(())
    }
}

/// The resolution graph of a random reduced plane curve germ with at most
/// `max_vertices` divisors, built by simulating point blow-ups. Vertex 0 is
/// the first blow-up.
pub fn random_graph(seed: u64, max_vertices: usize) -> ResolutionGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let mut b = Blowups { euler: vec![], edges: BTreeSet::new(), arrows: vec![], max_vertices };
        let branches = rng.gen_range(1..=3);
        if b.blow_up(&mut rng, Point::Origin, branches, false).is_some() {
            let edges: Vec<(usize, usize)> = b.edges.into_iter().collect();
            let arrows: Vec<(usize, i64)> = b.arrows.into_iter().map(|v| (v, 1)).collect();
            return ResolutionGraph::new(b.euler, &edges, &arrows, 0);
        }
    }
}

/// Determinant of `k I - A` by fraction-free elimination, for an integer `k`.
fn det_shifted(a: &IntMatrix, k: i64) -> BigInt {
    let n = a.rows();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { BigInt::from(k) - a.get(i, j) } else { -a.get(i, j) };
            m.set(i, j, v);
        }
    }
    m.det()
}

/// `det(t I - A)` by evaluating at `0..=n` and Lagrange interpolation.
pub fn char_poly_by_interpolation(a: &IntMatrix) -> Poly {
    let n = a.rows();
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys: Vec<BigInt> = xs.iter().map(|&x| det_shifted(a, x)).collect();
    let mut coeffs = vec![num_rational::BigRational::zero(); n + 1];
    for (i, &xi) in xs.iter().enumerate() {
        let mut basis = vec![num_rational::BigRational::one()];
        let mut denom = BigInt::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![num_rational::BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c.clone();
                next[d] -= c.clone() * BigInt::from(xj);
            }
            basis = next;
            denom *= BigInt::from(xi - xj);
        }
        for (d, c) in basis.into_iter().enumerate() {
            coeffs[d] += c * num_rational::BigRational::new(ys[i].clone(), denom.clone());
        }
    }
    Poly::new(
        coeffs
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolated coefficient {c} is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// `(1 - t) prod (1 - t^m_v)^(valency_v - 2)` as a rational function,
/// returned as numerator and denominator.
pub fn zeta_by_hand(m: &[i128], valency: &[usize]) -> (Poly, Poly) {
    let mut num = Poly::one_minus_power(1);
    let mut den = Poly::one();
    for (&mv, &val) in m.iter().zip(valency) {
        let f = Poly::one_minus_power(mv as usize);
        for _ in 2..val {
            num = num.mul(&f);
        }
        for _ in val..2 {
            den = den.mul(&f);
        }
    }
    (num, den)
}

/// Invariant factors by alternating row and column Hermite reductions,
/// then fixing the diagonal into a divisibility chain with gcd and lcm.
pub fn invariant_factors_naive(a: &IntMatrix) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).clone()).collect()).collect();
    loop {
        hermite_rows(&mut m);
        let mut t = transpose(&m);
        hermite_rows(&mut t);
        m = transpose(&t);
        let diagonal = m.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| i == j || x.is_zero())
        });
        if diagonal {
            break;
        }
    }
    let mut d: Vec<BigInt> = (0..m.len().min(m.first().map_or(0, Vec::len)))
        .map(|i| m[i][i].abs())
        .filter(|x| !x.is_zero())
        .collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn transpose(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Row echelon form by repeated Euclid on each column.
fn hermite_rows(m: &mut [Vec<BigInt>]) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r..rows).filter(|&i| !m[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&i) = nonzero.first() {
                    m.swap(r, i);
                    r += 1;
                }
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            for i in r + 1..rows {
                let q = m[i][c].div_floor(&m[r][c]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let v = &m[r][j] * &q;
                    m[i][j] -= v;
                }
            }
        }
    }
}

/// Random integer matrix with entries in `-9..=9`.
pub fn random_matrix(rng: &mut StdRng, max_dim: usize) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let density: f64 = rng.gen_range(0.2..1.0);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-9..=9) } else { 0 })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&data, cols)
}
