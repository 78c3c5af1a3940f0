//! The vector space `F_q^d` with vectors encoded as indices `0..q^d`.
//!
//! Index `i` stands for `(x_0, ..., x_{d-1})` with `i = ((x_0 q + x_1) q + ...) q + x_{d-1}`,
//! so `x_{d-1}` varies fastest.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field_core::Field;

/// Default cap on `q^d` for dense grids.
pub const DEFAULT_GRID_CAP: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct Space {
    field: Field,
    d: usize,
    size: usize,
    coords: Arc<Vec<u32>>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.d == other.d
    }
}

impl Space {
    pub fn new(field: &Field, d: usize) -> Result<Space> {
        Self::with_cap(field, d, DEFAULT_GRID_CAP)
    }

    pub fn with_cap(field: &Field, d: usize, cap: u64) -> Result<Space> {
        if d == 0 {
            return Err(Error::BadParams("dimension must be at least 1".into()));
        }
        let q = field.q() as u128;
        let size = q.checked_pow(d as u32).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::TooLarge {
                size,
                cap: cap as u128,
            });
        }
        let size = size as usize;
        let mut coords = vec![0u32; size * d];
        for i in 0..size {
            let mut rest = i as u32;
            for j in (0..d).rev() {
                coords[i * d + j] = rest % field.q();
                rest /= field.q();
            }
        }
        Ok(Space {
            field: field.clone(),
            d,
            size,
            coords: Arc::new(coords),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    /// `q^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn coords(&self, i: usize) -> &[u32] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn encode(&self, x: &[u32]) -> Result<usize> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                x.len(),
                self.d
            )));
        }
        let q = self.q();
        let mut idx = 0usize;
        for &c in x {
            if c >= q {
                return Err(Error::ElementOutOfRange {
                    value: c as u64,
                    q,
                });
            }
            idx = idx * q as usize + c as usize;
        }
        Ok(idx)
    }

    #[inline]
    fn encode_unchecked(&self, mut coord: impl FnMut(usize) -> u32) -> usize {
        let q = self.q() as usize;
        let mut idx = 0usize;
        for j in 0..self.d {
            idx = idx * q + coord(j) as usize;
        }
        idx
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.encode_unchecked(|j| self.field.add(ca[j], cb[j]))
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.encode_unchecked(|j| self.field.sub(ca[j], cb[j]))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let ca = self.coords(a);
        self.encode_unchecked(|j| self.field.neg(ca[j]))
    }

    #[inline]
    pub fn dot(&self, a: usize, b: usize) -> u32 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter()
            .zip(cb)
            .fold(0, |acc, (&x, &y)| self.field.add(acc, self.field.mul(x, y)))
    }

    /// `||x|| = x_1^2 + ... + x_d^2`.
    #[inline]
    pub fn norm(&self, a: usize) -> u32 {
        self.coords(a)
            .iter()
            .fold(0, |acc, &x| self.field.add(acc, self.field.mul(x, x)))
    }

    /// Character exponent of `m . x`, i.e. `chi(m . x) = zeta^e`.
    #[inline]
    pub fn chi_dot(&self, a: usize, b: usize) -> u32 {
        self.field.chi_exponent(self.dot(a, b))
    }
}

/// Above this order the character table is computed on the fly.
const CHAR_TABLE_MAX_Q: usize = 2048;

/// Table `T[a][b] = e` with `chi(a b) = zeta^e`, used by the transform kernels.
pub struct CharTable {
    field: Field,
    q: usize,
    p: u32,
    table: Option<Vec<u16>>,
}

impl CharTable {
    pub fn new(field: &Field) -> Self {
        let q = field.q() as usize;
        let table = (q <= CHAR_TABLE_MAX_Q).then(|| {
            let mut table = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = field.chi_exponent(field.mul(a as u32, b as u32)) as u16;
                }
            }
            table
        });
        CharTable {
            field: field.clone(),
            q,
            p: field.p(),
            table,
        }
    }

    #[inline]
    pub fn get(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.q + b as usize] as u32,
            None => self.field.chi_exponent(self.field.mul(a, b)),
        }
    }

    /// Exponent of `chi(x . m)` summed coordinatewise.
    #[inline]
    pub fn dot(&self, x: &[u32], m: &[u32]) -> u32 {
        let mut e = 0u32;
        for (&a, &b) in x.iter().zip(m) {
            e += self.get(a, b);
        }
        e % self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_core::make_field;

    #[test]
    fn encode_round_trip() {
        let f = make_field(5, 1).unwrap();
        let s = Space::new(&f, 3).unwrap();
        assert_eq!(s.size(), 125);
        for i in 0..s.size() {
            assert_eq!(s.encode(s.coords(i)).unwrap(), i);
        }
        assert_eq!(s.coords(1), &[0, 0, 1]);
        assert!(s.encode(&[0, 5, 0]).is_err());
        assert!(s.encode(&[0, 1]).is_err());
    }

    #[test]
    fn group_operations() {
        let f = make_field(3, 2).unwrap();
        let s = Space::new(&f, 2).unwrap();
        for a in 0..s.size() {
            assert_eq!(s.add(a, s.neg(a)), 0);
            for b in (0..s.size()).step_by(5) {
                assert_eq!(s.sub(s.add(a, b), b), a);
                assert_eq!(s.dot(a, b), s.dot(b, a));
            }
        }
    }

    #[test]
    fn grid_cap() {
        let f = make_field(13, 1).unwrap();
        assert!(matches!(Space::new(&f, 6), Err(Error::TooLarge { .. })));
        assert!(Space::new(&f, 0).is_err());
    }

    #[test]
    fn char_table_matches_field() {
        let f = make_field(3, 2).unwrap();
        let s = Space::new(&f, 2).unwrap();
        let t = CharTable::new(&f);
        for a in 0..s.size() {
            for b in 0..s.size() {
                assert_eq!(t.dot(s.coords(a), s.coords(b)), s.chi_dot(a, b));
            }
        }
    }
}
