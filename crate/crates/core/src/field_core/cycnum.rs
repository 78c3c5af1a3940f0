//! Exact elements of the cyclotomic field `Q(zeta_p)`.
//!
//! An element is stored in the power basis `1, zeta, ..., zeta^{p-2}` with
//! arbitrary-precision rational coefficients. Because the basis is a genuine
//! `Q`-basis, coefficient equality is value equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u32,
    coeffs: Vec<BigRational>,
}

/// Reduce a vector indexed by `zeta^0..zeta^{p-1}` using `zeta^{p-1} = -(1 + ... + zeta^{p-2})`.
fn reduce(mut full: Vec<BigRational>) -> Vec<BigRational> {
    let top = full.pop().expect("length p");
    if !top.is_zero() {
        for c in full.iter_mut() {
            *c -= &top;
        }
    }
    full
}

impl CycNum {
    pub fn zero(p: u32) -> Self {
        CycNum {
            p,
            coeffs: vec![BigRational::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: u32, r: BigRational) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(p: u32, k: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(k.into()))
    }

    /// `zeta_p^k`.
    pub fn zeta_pow(p: u32, k: u32) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[(k % p) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// `sum_e counts[e] zeta^e` for `counts` of length `p`.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c - top)))
            .collect();
        CycNum { p, coeffs }
    }

    /// As [`from_exponent_counts`](Self::from_exponent_counts) with wide counters.
    pub fn from_wide_counts(p: u32, counts: &[i128]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c) - BigInt::from(top)))
            .collect();
        CycNum { p, coeffs }
    }

    /// `sum_e slots[e] zeta^e` for rational `slots` of length `p`.
    pub fn from_unreduced(p: u32, slots: Vec<BigRational>) -> Self {
        assert_eq!(slots.len(), p as usize);
        CycNum {
            p,
            coeffs: reduce(slots),
        }
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn unreduced(&self) -> Vec<BigRational> {
        let mut v = self.coeffs.clone();
        v.push(BigRational::zero());
        v
    }

    /// Multiply by `zeta^k`.
    pub fn mul_zeta_pow(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        let src = self.unreduced();
        let mut out = vec![BigRational::zero(); p];
        for (i, c) in src.into_iter().enumerate() {
            out[(i + k) % p] = c;
        }
        CycNum::from_unreduced(self.p, out)
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let src = self.unreduced();
        let mut out = vec![BigRational::zero(); p];
        for (i, c) in src.into_iter().enumerate() {
            out[(p - i) % p] = c;
        }
        CycNum::from_unreduced(self.p, out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycNum::one(self.p);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `|z|^2 = z conj(z)`; lies in the real subfield.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// Embedding `zeta -> e^{2 pi i / p}`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let a = c.to_f64().unwrap_or(f64::NAN);
                let th = 2.0 * std::f64::consts::PI * i as f64 / p;
                Complex64::new(a * th.cos(), a * th.sin())
            })
            .sum()
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.p, other.p,
            "cyclotomic elements of different orders cannot be combined"
        );
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{mag}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.check_order(rhs);
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(self, rhs: CycNum) -> CycNum {
        &self + &rhs
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.check_order(rhs);
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, rhs: CycNum) -> CycNum {
        &self - &rhs
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.check_order(rhs);
        let p = self.p as usize;
        let mut out = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(i + j) % p] += a * b;
            }
        }
        CycNum::from_unreduced(self.p, out)
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: CycNum) -> CycNum {
        &self * &rhs
    }
}

/// Accumulates `sum c_i zeta^{e_i}` in the unreduced basis, reducing once at the end.
pub struct CycAccumulator {
    p: u32,
    slots: Vec<BigRational>,
}

impl CycAccumulator {
    pub fn new(p: u32) -> Self {
        CycAccumulator {
            p,
            slots: vec![BigRational::zero(); p as usize],
        }
    }

    /// Add `z * zeta^k`.
    pub fn add_rotated(&mut self, z: &CycNum, k: u32) {
        let p = self.p as usize;
        let k = k as usize % p;
        for (i, c) in z.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.slots[(i + k) % p] += c;
            }
        }
    }

    pub fn finish(self) -> CycNum {
        CycNum::from_unreduced(self.p, self.slots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zeta_relation() {
        for p in [3u32, 5, 7] {
            let mut s = CycNum::zero(p);
            for k in 0..p {
                s += &CycNum::zeta_pow(p, k);
            }
            assert!(s.is_zero());
            assert_eq!(CycNum::zeta_pow(p, p), CycNum::one(p));
            let z = CycNum::zeta_pow(p, 1);
            let mut acc = CycNum::one(p);
            for _ in 0..p {
                acc = &acc * &z;
            }
            assert_eq!(acc, CycNum::one(p));
        }
    }

    #[test]
    fn conjugation_inverts_zeta() {
        let p = 5;
        for k in 0..p {
            let z = CycNum::zeta_pow(p, k);
            assert_eq!(z.conj(), CycNum::zeta_pow(p, p - k));
            assert_eq!(&z * &z.conj(), CycNum::one(p));
        }
        let w = CycNum::from_exponent_counts(5, &[1, -2, 0, 3, 7]);
        assert_eq!(w.conj().conj(), w);
    }

    #[test]
    fn rational_detection() {
        let p = 3;
        let x = CycNum::from_rational(p, q(4, 9));
        assert_eq!(x.as_rational(), Some(&q(4, 9)));
        // zeta + zeta^2 = -1
        let y = &CycNum::zeta_pow(p, 1) + &CycNum::zeta_pow(p, 2);
        assert_eq!(y.as_rational(), Some(&q(-1, 1)));
        assert!(CycNum::zeta_pow(p, 1).as_rational().is_none());
    }

    #[test]
    fn float_embedding() {
        let z = CycNum::from_exponent_counts(7, &[2, 0, -1, 0, 3, 0, 1]);
        let w = z.to_complex();
        let mut expect = Complex64::new(0.0, 0.0);
        for (e, c) in [2.0, 0.0, -1.0, 0.0, 3.0, 0.0, 1.0].iter().enumerate() {
            expect += Complex64::from_polar(*c, 2.0 * std::f64::consts::PI * e as f64 / 7.0);
        }
        assert!((w - expect).norm() < 1e-12);
    }

    #[test]
    fn accumulator_matches_direct_sum() {
        let p = 5;
        let z = CycNum::from_exponent_counts(p, &[1, 2, 0, 0, -1]).scale(&q(1, 3));
        let mut acc = CycAccumulator::new(p);
        let mut direct = CycNum::zero(p);
        for k in [0u32, 3, 4, 9] {
            acc.add_rotated(&z, k);
            direct += &z.mul_zeta_pow(k);
        }
        assert_eq!(acc.finish(), direct);
    }

    #[test]
    fn display_is_readable() {
        let z = CycNum::from_exponent_counts(3, &[0, 1, -1]);
        // zeta - zeta^2 = 1 + 2 zeta in the reduced basis
        assert_eq!(z.to_string(), "1 + 2*z^1");
        assert_eq!(CycNum::zero(3).to_string(), "0");
    }
}
