//! Arithmetic in `F_q`, `q = p^n`, `p` odd.
//!
//! Elements are encoded as integers `0..q`: the integer `e` stands for the
//! polynomial `sum_i c_i x^i` where `c_i` is the `i`-th base-`p` digit of `e`.
//! This encoding is part of the set-file contract, so it must stay stable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the field order, `13^4`.
pub const DEFAULT_FIELD_CAP: u64 = 28_561;

/// Above this order the dense addition table is not built.
const ADD_TABLE_MAX_Q: u32 = 512;

struct Tables {
    p: u32,
    n: u32,
    q: u32,
    /// Low coefficients `c_0..c_{n-1}` of the monic modulus.
    modulus: Vec<u32>,
    generator: u32,
    twist: u32,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    chi: Vec<u32>,
    eta: Vec<i8>,
}

/// A finite field `F_{p^n}` with a fixed canonical modulus and additive character.
///
/// Cloning is cheap; all tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.t.p)
            .field("n", &self.t.n)
            .field("modulus", &self.t.modulus)
            .field("twist", &self.t.twist)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.n == other.t.n && self.t.twist == other.t.twist
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// `F_{p^n}` with the default order cap.
pub fn make_field(p: u32, n: u32) -> Result<Field> {
    Field::with_cap(p, n, DEFAULT_FIELD_CAP)
}

fn digits(mut e: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(e % p);
        e /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo `b` over `F_p`; `b` must have a nonzero leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - f * bi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = (b % p) as u64;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
fn is_irreducible(full: &[u32], p: u32) -> bool {
    let n = full.len() - 1;
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut cand = digits(low as u32, p, deg as u32);
            cand.push(1);
            if poly_rem(full, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `n` whose low coefficients, read as a base-`p`
/// integer `sum c_i p^i`, are smallest.
fn canonical_modulus(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0];
    }
    let count = p.pow(n);
    for low in 0..count {
        let mut full = digits(low, p, n);
        if full[0] == 0 {
            continue;
        }
        full.push(1);
        if is_irreducible(&full, p) {
            full.pop();
            return full;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn slow_mul(a: u32, b: u32, p: u32, n: u32, modulus: &[u32]) -> u32 {
    let da = digits(a, p, n);
    let db = digits(b, p, n);
    let mut prod = vec![0u32; 2 * n as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut full = modulus.to_vec();
    full.push(1);
    let mut r = poly_rem(&prod, &full, p);
    r.resize(n as usize, 0);
    undigits(&r, p)
}

fn slow_add(a: u32, b: u32, p: u32, n: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    let (mut a, mut b) = (a, b);
    for _ in 0..n {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

impl Field {
    pub fn with_cap(p: u32, n: u32, cap: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::BadParams("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if q > cap as u128 || q > u32::MAX as u128 {
            return Err(Error::TooLarge {
                size: q,
                cap: cap as u128,
            });
        }
        Ok(Self::build(p, n, q as u32, 1))
    }

    /// Factor `q = p^n` and build the field.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::BadParams(format!("{q} is not a prime power")));
        }
        let mut p = 2u64;
        while q % p != 0 {
            p += 1;
        }
        let mut n = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::BadParams(format!("{q} is not a prime power")));
        }
        if q > DEFAULT_FIELD_CAP {
            return Err(Error::TooLarge {
                size: q as u128,
                cap: DEFAULT_FIELD_CAP as u128,
            });
        }
        make_field(p as u32, n)
    }

    fn build(p: u32, n: u32, q: u32, twist: u32) -> Field {
        let modulus = canonical_modulus(p, n);
        let add = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = slow_add(a, b, p, n);
                }
            }
            t
        });
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, n).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p)
            })
            .collect();

        // Smallest primitive element, then exp/log tables.
        let order = q - 1;
        let mut generator = 0;
        let mut exp = vec![0u32; order as usize];
        for g in 1..q {
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                exp[i as usize] = x;
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                x = slow_mul(x, g, p, n, &modulus);
            }
            if ok && x == 1 {
                generator = g;
                break;
            }
        }
        if q == 2 {
            generator = 1;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let mul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                0
            } else {
                exp[((log[a as usize] + log[b as usize]) % order) as usize]
            }
        };
        let pow = |a: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(acc, base);
                }
                base = mul(base, base);
                e >>= 1;
            }
            acc
        };
        let addf = |a: u32, b: u32| slow_add(a, b, p, n);

        // Tr(x) = x + x^p + ... + x^{p^{n-1}}
        let trace: Vec<u32> = (0..q)
            .map(|x| {
                let mut acc = 0u32;
                let mut y = x;
                for _ in 0..n {
                    acc = addf(acc, y);
                    y = pow(y, p as u64);
                }
                debug_assert!(acc < p, "trace must land in the prime field");
                acc
            })
            .collect();
        let chi: Vec<u32> = (0..q).map(|x| trace[mul(twist, x) as usize]).collect();
        let half = (q as u64 - 1) / 2;
        let eta: Vec<i8> = (0..q)
            .map(|s| {
                if s == 0 {
                    0
                } else if pow(s, half) == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();

        Field {
            t: Arc::new(Tables {
                p,
                n,
                q,
                modulus,
                generator,
                twist,
                add,
                neg,
                exp,
                log,
                trace,
                chi,
                eta,
            }),
        }
    }

    /// The same field with the character `x -> chi(a x)`.
    pub fn twisted(&self, a: u32) -> Result<Field> {
        if a == 0 || a >= self.q() {
            return Err(Error::BadParams(format!(
                "twist must be a nonzero element of F_{}",
                self.q()
            )));
        }
        let twist = self.mul(self.t.twist, a);
        Ok(Self::build(self.t.p, self.t.n, self.t.q, twist))
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }
    pub fn n(&self) -> u32 {
        self.t.n
    }
    pub fn q(&self) -> u32 {
        self.t.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }
    pub fn generator(&self) -> u32 {
        self.t.generator
    }
    pub fn twist(&self) -> u32 {
        self.t.twist
    }

    pub fn check(&self, x: u64) -> Result<u32> {
        if x < self.q() as u64 {
            Ok(x as u32)
        } else {
            Err(Error::ElementOutOfRange {
                value: x,
                q: self.q(),
            })
        }
    }

    /// Base-`p` coefficient vector of an encoded element, lowest degree first.
    pub fn coefficients(&self, x: u32) -> Vec<u32> {
        digits(x, self.t.p, self.t.n)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.t.n as usize || c.iter().any(|&d| d >= self.t.p) {
            return Err(Error::BadParams(format!(
                "expected {} coefficients below {}",
                self.t.n, self.t.p
            )));
        }
        Ok(undigits(c, self.t.p))
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.t.add {
            Some(t) => t[(a * self.t.q + b) as usize],
            None if self.t.n == 1 => (a + b) % self.t.p,
            None => slow_add(a, b, self.t.p, self.t.n),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.t.q - 1;
        self.t.exp[((self.t.log[a as usize] + self.t.log[b as usize]) % order) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.t.q - 1;
        Some(self.t.exp[((order - self.t.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of the integer `k` in `F_q`.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.t.p as i64) as u32
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    #[inline]
    pub fn trace(&self, x: u32) -> u32 {
        self.t.trace[x as usize]
    }

    /// Exponent `e` with `chi(x) = zeta_p^e`.
    #[inline]
    pub fn chi_exponent(&self, x: u32) -> u32 {
        self.t.chi[x as usize]
    }

    /// Quadratic character, with `eta(0) = 0`.
    #[inline]
    pub fn eta(&self, s: u32) -> i8 {
        self.t.eta[s as usize]
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.t.q
    }

    /// Some `i` with `i^2 = -1`, the smallest encoding if several.
    pub fn sqrt_minus_one(&self) -> Option<u32> {
        let m1 = self.neg(1);
        self.elements().find(|&i| self.mul(i, i) == m1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.trace(2), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(2, 1), Err(Error::EvenCharacteristic)));
        assert!(matches!(make_field(9, 1), Err(Error::NonPrime(9))));
        assert!(matches!(make_field(3, 10), Err(Error::TooLarge { .. })));
        assert!(matches!(make_field(3, 0), Err(Error::BadParams(_))));
        assert!(make_field(13, 4).is_ok());
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0]);
        // Exhaustive root check: x^2 + 1 has no root in F_3.
        for r in 0..3u32 {
            assert_ne!((r * r + 1) % 3, 0);
        }
        // x = encoding 3 satisfies x^2 = -1.
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn f25_modulus() {
        let f = make_field(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0]);
    }

    #[test]
    fn from_order_factors() {
        assert_eq!(Field::from_order(9).unwrap().n(), 2);
        assert_eq!(Field::from_order(13).unwrap().p(), 13);
        assert!(Field::from_order(12).is_err());
        assert!(Field::from_order(8).is_err());
    }

    #[test]
    fn f9_trace_via_frobenius() {
        let f = make_field(3, 2).unwrap();
        for x in f.elements() {
            let frob = f.pow(x, 3);
            assert_eq!(f.add(x, frob), f.trace(x));
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (5, 2), (3, 3), (11, 2)] {
            let f = make_field(p, n).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            // Associativity and distributivity on a strided sample of triples,
            // exhaustive for q <= 27.
            let step = if q <= 27 { 1 } else { 7 };
            for a in (0..q).step_by(step) {
                for b in (0..q).step_by(step) {
                    for c in (0..q).step_by(step) {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_linear_and_onto() {
        for (p, n) in [(3, 2), (5, 2), (3, 3)] {
            let f = make_field(p, n).unwrap();
            let mut hit = vec![false; p as usize];
            for a in f.elements() {
                hit[f.trace(a) as usize] = true;
                for b in f.elements() {
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p);
                }
                for c in 0..p {
                    assert_eq!(f.trace(f.mul(c, a)), c * f.trace(a) % p);
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn quadratic_character() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.eta(1), 1);
        assert_eq!(f3.eta(2), -1);
        assert_eq!(f3.eta(0), 0);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.eta(f9.generator()), -1);
        for f in [f3, f9, make_field(13, 1).unwrap()] {
            let squares: std::collections::HashSet<u32> =
                f.elements().skip(1).map(|x| f.mul(x, x)).collect();
            let mut total = 0i32;
            for a in f.elements() {
                total += f.eta(a) as i32;
                if a != 0 {
                    assert_eq!(f.eta(a) == 1, squares.contains(&a));
                }
                for b in f.elements() {
                    assert_eq!(f.eta(f.mul(a, b)), f.eta(a) * f.eta(b));
                }
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn sqrt_of_minus_one() {
        assert_eq!(make_field(5, 1).unwrap().sqrt_minus_one(), Some(2));
        assert_eq!(make_field(13, 1).unwrap().sqrt_minus_one(), Some(5));
        assert_eq!(make_field(3, 1).unwrap().sqrt_minus_one(), None);
        assert!(make_field(3, 2).unwrap().sqrt_minus_one().is_some());
    }

    #[test]
    fn twist_composes() {
        let f = make_field(5, 1).unwrap();
        let g = f.twisted(2).unwrap();
        for x in f.elements() {
            assert_eq!(g.chi_exponent(x), f.chi_exponent(f.mul(2, x)));
        }
        assert!(f.twisted(0).is_err());
    }
}
