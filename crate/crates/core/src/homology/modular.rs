//! Characteristic polynomials by Hessenberg reduction modulo word-size
//! primes, lifted to the integers by Chinese remaindering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (0..).map(|k| (1u64 << 62) - 1 - 2 * k).filter(|&n| is_prime(n))
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// `det(t I - A) mod p`, coefficients from degree 0 upwards.
fn char_poly_mod(a: &IntMatrix, p: u64) -> Vec<u64> {
    let n = a.rows();
    let mut h: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| reduce(a.get(i, j), p)).collect()).collect();
    let sub = |x: u64, y: u64| if x >= y { x - y } else { x + p - y };
    // Similarity transform to upper Hessenberg form.
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else { continue };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let inv = pow_mod(h[k + 1][k], p - 2, p);
        for i in k + 2..n {
            if h[i][k] == 0 {
                continue;
            }
            let f = mul_mod(h[i][k], inv, p);
            // row_i -= f * row_{k+1}, then col_{k+1} += f * col_i.
            for j in 0..n {
                let v = mul_mod(f, h[k + 1][j], p);
                h[i][j] = sub(h[i][j], v);
            }
            for row in h.iter_mut() {
                let v = mul_mod(f, row[i], p);
                row[k + 1] = (row[k + 1] + v) % p;
            }
        }
    }
    // chars[k] is the characteristic polynomial of the leading k x k block.
    let mut chars: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &chars[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = sub(next[d], mul_mod(h[k][k], c, p));
        }
        let mut product = 1u64;
        for i in (0..k).rev() {
            product = mul_mod(product, h[i + 1][i], p);
            if product == 0 {
                break;
            }
            let f = mul_mod(product, h[i][k], p);
            for (d, &c) in chars[i].iter().enumerate() {
                next[d] = sub(next[d], mul_mod(f, c, p));
            }
        }
        chars.push(next);
    }
    chars.pop().expect("at least the empty block")
}

/// Bound on the absolute value of every coefficient: each is an
/// elementary symmetric function of eigenvalues bounded by the row-sum norm.
fn coefficient_bound(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).abs()).sum::<BigInt>())
        .max()
        .unwrap_or_else(BigInt::zero);
    num_traits::pow(norm + BigInt::one(), n)
}

/// `det(t I - A)`, coefficients from degree 0 upwards.
pub fn char_poly_coeffs(a: &IntMatrix) -> Vec<BigInt> {
    assert!(a.is_square());
    lift(a.rows() + 1, &coefficient_bound(a), |p| char_poly_mod(a, p))
}

fn det_mod(a: &IntMatrix, p: u64) -> u64 {
    let n = a.rows();
    let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| reduce(a.get(i, j), p)).collect()).collect();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else { return 0 };
        if piv != k {
            m.swap(piv, k);
            det = p - det;
        }
        det = mul_mod(det, m[k][k], p);
        let inv = pow_mod(m[k][k], p - 2, p);
        for i in k + 1..n {
            if m[i][k] == 0 {
                continue;
            }
            let f = mul_mod(m[i][k], inv, p);
            for j in k..n {
                let v = mul_mod(f, m[k][j], p);
                m[i][j] = if m[i][j] >= v { m[i][j] - v } else { m[i][j] + p - v };
            }
        }
    }
    det % p
}

/// Lifts values known modulo a growing product of primes until the product
/// exceeds twice `bound`, then takes symmetric representatives.
fn lift(count: usize, bound: &BigInt, residues_mod: impl Fn(u64) -> Vec<u64>) -> Vec<BigInt> {
    let bound = bound * 2;
    let mut modulus = BigInt::one();
    let mut values = vec![BigInt::zero(); count];
    for p in primes() {
        let residues = residues_mod(p);
        let pb = BigInt::from(p);
        // x = c mod M and x = r mod p: x = c + M * ((r - c) / M mod p).
        let m_inv = BigInt::from(pow_mod(reduce(&modulus, p), p - 2, p));
        for (c, &r) in values.iter_mut().zip(&residues) {
            let t = ((BigInt::from(r) - &*c) * &m_inv).mod_floor(&pb);
            *c += &modulus * t;
        }
        modulus *= pb;
        if modulus > bound {
            break;
        }
    }
    let half = &modulus / 2;
    for c in values.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }
    values
}

/// Determinant, bounded by the product of the row sums of absolute values.
pub fn det(a: &IntMatrix) -> BigInt {
    assert!(a.is_square());
    let n = a.rows();
    let bound: BigInt = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).abs()).sum::<BigInt>())
        .product();
    lift(1, &bound, |p| vec![det_mod(a, p)]).pop().expect("one value")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn hessenberg_with_zero_pivots() {
        let a = IntMatrix::from_rows(
            &[vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 1, 0, 0]],
            4,
        );
        // The 3-cycle on coordinates 0, 1, 3 and a zero: t (t^3 - 1).
        let want: Vec<BigInt> = [0, -1, 0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(char_poly_coeffs(&a), want);
    }

    #[test]
    fn determinant_agrees_with_elimination() {
        let a = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]], 3);
        assert_eq!(det(&a), a.det());
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        assert_eq!(det(&b), BigInt::from(-1));
        assert!(det(&IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 2)).is_zero());
    }
}
