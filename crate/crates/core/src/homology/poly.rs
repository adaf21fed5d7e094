use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;

/// Integer polynomial, coefficients from degree 0 upwards, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    /// `1 - t^k`.
    pub fn one_minus_power(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] += 1;
        c[k] -= 1;
        Poly::new(c)
    }

    /// `t^k - 1`.
    pub fn power_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] -= 1;
        c[k] += 1;
        Poly::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Coefficients in reverse order over `degree + 1` slots:
    /// `t^n p(1/t)` with `n = size - 1`.
    pub fn reversed(&self, size: usize) -> Poly {
        let mut c = vec![BigInt::zero(); size];
        for (i, a) in self.0.iter().enumerate() {
            c[size - 1 - i] = a.clone();
        }
        Poly::new(c)
    }

    /// Quotient and remainder by a divisor whose leading coefficient is a
    /// unit; `None` for other divisors.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let lead = divisor.0.last()?;
        if !lead.abs().is_one() {
            return None;
        }
        let dd = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return Some((Poly(Vec::new()), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Whether `self` divides `other` exactly over the integers: the
    /// content divides and the primitive part divides over the rationals.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        let content = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !other.0.iter().all(|c| c.is_multiple_of(&content)) {
            return false;
        }
        let divisor: Vec<BigRational> =
            self.0.iter().map(|c| BigRational::from_integer(c / &content)).collect();
        let mut rem: Vec<BigRational> =
            other.0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let dd = divisor.len() - 1;
        let lead = divisor[dd].clone();
        while rem.len() > dd {
            let top = rem.pop().expect("nonempty") / &lead;
            let k = rem.len() - dd;
            for (j, d) in divisor[..dd].iter().enumerate() {
                rem[k + j] -= &top * d;
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    /// Remainder modulo a monic polynomial.
    fn rem_monic(&self, modulus: &Poly) -> Poly {
        self.div_rem(modulus).expect("monic modulus").1
    }

    /// Whether `self`, monic, divides `base^k`. Works in `Z[t]/(self)` by
    /// repeated squaring, so `base^k` is never expanded.
    pub fn divides_power(&self, base: &Poly, mut k: u64) -> bool {
        assert!(self.0.last().is_some_and(One::is_one), "divisor must be monic");
        let mut acc = Poly::one().rem_monic(self);
        let mut b = base.rem_monic(self);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b).rem_monic(self);
            }
            b = b.mul(&b).rem_monic(self);
            k >>= 1;
        }
        acc.is_zero()
    }

    /// `t^n - 1` reduced modulo a monic polynomial, by repeated squaring.
    pub fn power_minus_one_mod(n: u64, modulus: &Poly) -> Poly {
        let mut acc = Poly::one().rem_monic(modulus);
        let mut t = Poly::from_i64(&[0, 1]).rem_monic(modulus);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&t).rem_monic(modulus);
            }
            t = t.mul(&t).rem_monic(modulus);
            e >>= 1;
        }
        let mut c = acc.0;
        if c.is_empty() {
            c.push(BigInt::zero());
        }
        c[0] -= 1;
        Poly::new(c).rem_monic(modulus)
    }
}

/// `det(t I - A)`.
pub fn char_poly(a: &IntMatrix) -> Poly {
    Poly::new(super::modular::char_poly_coeffs(a))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        v.serialize(serializer)
    }
}
