//! Integer cyclotomic values in the unreduced basis `1, zeta, ..., zeta^{p-1}`.
//!
//! Two slot vectors denote the same element iff they differ by a constant
//! vector, since `1 + zeta + ... + zeta^{p-1} = 0`. Arithmetic is checked.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field_core::CycNum;

#[derive(Clone, Debug)]
pub struct CycInt {
    slots: Vec<i128>,
}

fn overflow() -> Error {
    Error::TooLarge {
        size: i128::MAX as u128,
        cap: i128::MAX as u128,
    }
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            slots: vec![0; p as usize],
        }
    }

    pub fn from_slots(slots: Vec<i128>) -> Self {
        CycInt { slots }
    }

    pub fn order(&self) -> u32 {
        self.slots.len() as u32
    }

    pub fn slots(&self) -> &[i128] {
        &self.slots
    }

    #[inline]
    pub fn bump(&mut self, e: u32, by: i128) {
        self.slots[e as usize] += by;
    }

    pub fn checked_add_assign(&mut self, rhs: &CycInt) -> Result<()> {
        for (a, b) in self.slots.iter_mut().zip(&rhs.slots) {
            *a = a.checked_add(*b).ok_or_else(overflow)?;
        }
        Ok(())
    }

    pub fn checked_mul(&self, rhs: &CycInt) -> Result<CycInt> {
        let p = self.slots.len();
        let mut out = vec![0i128; p];
        for (i, &a) in self.slots.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.slots.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let t = a.checked_mul(b).ok_or_else(overflow)?;
                let k = (i + j) % p;
                out[k] = out[k].checked_add(t).ok_or_else(overflow)?;
            }
        }
        Ok(CycInt { slots: out })
    }

    pub fn conj(&self) -> CycInt {
        let p = self.slots.len();
        let mut out = vec![0i128; p];
        for (i, &c) in self.slots.iter().enumerate() {
            out[(p - i) % p] = c;
        }
        CycInt { slots: out }
    }

    /// Subtract the last slot everywhere, giving a unique representative.
    pub fn normalized(&self) -> Vec<i128> {
        let top = *self.slots.last().unwrap();
        self.slots.iter().map(|&c| c - top).collect()
    }

    pub fn same_value(&self, other: &CycInt) -> bool {
        self.normalized() == other.normalized()
    }

    /// The integer value if the element is rational.
    pub fn as_integer(&self) -> Option<i128> {
        let rest = &self.slots[1..];
        if rest.iter().all(|&c| c == rest[0]) {
            Some(self.slots[0] - rest[0])
        } else {
            None
        }
    }

    pub fn to_cycnum(&self) -> CycNum {
        let p = self.order();
        let slots = self
            .slots
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        CycNum::from_unreduced(p, slots)
    }
}
