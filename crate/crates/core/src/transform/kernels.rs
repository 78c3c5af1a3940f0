//! Character-sum kernels `out[y] = sum_x v[x] zeta^{s * e(x . y)}` with `s = +-1`.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::field_core::{CharTable, CycAccumulator, CycInt, CycNum, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    #[inline]
    pub(crate) fn apply(self, e: u32, p: u32) -> u32 {
        match self {
            Sign::Plus => e,
            Sign::Minus => (p - e) % p,
        }
    }
}

pub(crate) fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|e| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / p as f64))
        .collect()
}

/// Integer inputs fitting `i64`, if every value is one.
fn as_small_integers(vals: &[CycNum]) -> Option<Vec<i64>> {
    vals.iter()
        .map(|z| {
            let r = z.as_rational()?;
            if !r.is_integer() {
                return None;
            }
            r.to_integer().to_i64()
        })
        .collect()
}

/// Exact kernel on integer inputs, returning unreduced slot vectors.
pub(crate) fn char_sum_int(space: &Space, vals: &[i64], sign: Sign) -> Vec<CycInt> {
    let table = CharTable::new(space.field());
    let p = space.field().p();
    let support: Vec<(usize, i64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| (i, v))
        .collect();
    (0..space.size())
        .into_par_iter()
        .map(|y| {
            let cy = space.coords(y);
            let mut acc = CycInt::zero(p);
            for &(x, v) in &support {
                let e = table.dot(space.coords(x), cy);
                acc.bump(sign.apply(e, p), v as i128);
            }
            acc
        })
        .collect()
}

/// Exact kernel on indicator inputs given by their support.
pub(crate) fn char_sum_support(space: &Space, support: &[usize], sign: Sign) -> Vec<CycInt> {
    let table = CharTable::new(space.field());
    let p = space.field().p();
    (0..space.size())
        .into_par_iter()
        .map(|y| {
            let cy = space.coords(y);
            let mut acc = CycInt::zero(p);
            for &x in support {
                let e = table.dot(space.coords(x), cy);
                acc.bump(sign.apply(e, p), 1);
            }
            acc
        })
        .collect()
}

pub(crate) fn char_sum_exact(space: &Space, vals: &[CycNum], sign: Sign) -> Vec<CycNum> {
    if let Some(ints) = as_small_integers(vals) {
        return char_sum_int(space, &ints, sign)
            .iter()
            .map(CycInt::to_cycnum)
            .collect();
    }
    let table = CharTable::new(space.field());
    let p = space.field().p();
    let support: Vec<usize> = (0..vals.len()).filter(|&i| !vals[i].is_zero()).collect();
    (0..space.size())
        .into_par_iter()
        .map(|y| {
            let cy = space.coords(y);
            let mut acc = CycAccumulator::new(p);
            for &x in &support {
                let e = table.dot(space.coords(x), cy);
                acc.add_rotated(&vals[x], sign.apply(e, p));
            }
            acc.finish()
        })
        .collect()
}

pub(crate) fn char_sum_float(space: &Space, vals: &[Complex64], sign: Sign) -> Vec<Complex64> {
    let table = CharTable::new(space.field());
    let p = space.field().p();
    let w = roots_of_unity(p);
    (0..space.size())
        .into_par_iter()
        .map(|y| {
            let cy = space.coords(y);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, v) in vals.iter().enumerate() {
                let e = table.dot(space.coords(x), cy);
                acc += v * w[sign.apply(e, p) as usize];
            }
            acc
        })
        .collect()
}

/// Axis-factorized kernel: `chi(x . y)` splits as a product over coordinates,
/// so the transform is `d` passes of a `q x q` matrix along each axis.
pub(crate) fn char_sum_axis(space: &Space, vals: &[Complex64], sign: Sign) -> Vec<Complex64> {
    let q = space.q() as usize;
    let d = space.dim();
    let p = space.field().p();
    let table = CharTable::new(space.field());
    let w = roots_of_unity(p);
    let mut kernel = vec![Complex64::new(0.0, 0.0); q * q];
    for a in 0..q {
        for b in 0..q {
            kernel[b * q + a] = w[sign.apply(table.get(a as u32, b as u32), p) as usize];
        }
    }
    let mut cur = vals.to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for axis in 0..d {
        let stride = q.pow((d - 1 - axis) as u32);
        let block = stride * q;
        let src = &cur;
        let kern = &kernel;
        let apply_block = |(bi, out): (usize, &mut [Complex64])| {
            let base = bi * block;
            for inner in 0..stride {
                for b in 0..q {
                    let row = &kern[b * q..(b + 1) * q];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (a, k) in row.iter().enumerate() {
                        acc += src[base + a * stride + inner] * k;
                    }
                    out[b * stride + inner] = acc;
                }
            }
        };
        if cur.len() >= PARALLEL_MIN {
            next.par_chunks_mut(block).enumerate().for_each(apply_block);
        } else {
            next.chunks_mut(block).enumerate().for_each(apply_block);
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Below this many points the axis passes run on the calling thread.
const PARALLEL_MIN: usize = 1 << 14;
