use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gridfn::p_pow;
use super::{hat, inverse, GridFn, Mode, Point, Side, Values};
use crate::error::{Error, Result};
use crate::field_core::CycNum;

/// Both sides of `sum_m |f^(m)|^2 = q^{-d} sum_x |f(x)|^2`, exactly. Exact mode only.
pub fn plancherel_sides(f: &GridFn<Point>) -> Result<(CycNum, CycNum)> {
    let Values::Exact { numer, denom_exp } = f.values() else {
        return Err(Error::ModeMismatch);
    };
    let fh = hat(f)?;
    let Values::Exact {
        numer: hn,
        denom_exp: hd,
    } = fh.values()
    else {
        unreachable!()
    };
    let p = f.space().field().p();
    let qd = f.space().field().n() * f.space().dim() as u32;
    let sum_sq = |vals: &[CycNum]| {
        let mut acc = CycNum::zero(p);
        for z in vals {
            if !z.is_zero() {
                acc += &z.norm_sqr();
            }
        }
        acc
    };
    let lhs = sum_sq(hn).scale(&BigRational::from_integer(p_pow(p, 2 * hd)).recip());
    let rhs = sum_sq(numer).scale(&BigRational::from_integer(p_pow(p, 2 * denom_exp + qd)).recip());
    Ok((lhs, rhs))
}

/// `|sum_m |f^(m)|^2 - q^{-d} sum_x |f(x)|^2|`; exactly zero in exact mode.
pub fn plancherel_defect(f: &GridFn<Point>) -> Result<f64> {
    match f.mode() {
        Mode::Exact => {
            let (lhs, rhs) = plancherel_sides(f)?;
            Ok((&lhs - &rhs).to_complex().norm())
        }
        Mode::Float => {
            let fh = hat(f)?;
            let lhs: f64 = fh.to_complex_vec().iter().map(|z| z.norm_sqr()).sum();
            let qd = f.len() as f64;
            let rhs: f64 = f.to_complex_vec().iter().map(|z| z.norm_sqr()).sum::<f64>() / qd;
            Ok((lhs - rhs).abs())
        }
    }
}

/// `(f * g)(s) = sum_a f(a) g(s - a)`, computed as `q^d (f^ g^)^vee`.
pub fn convolve(f: &GridFn<Point>, g: &GridFn<Point>) -> Result<GridFn<Point>> {
    if f.space() != g.space() {
        return Err(Error::DimensionMismatch("convolution across grids".into()));
    }
    if f.mode() != g.mode() {
        return Err(Error::ModeMismatch);
    }
    let prod = hat(f)?.mul_pointwise(&hat(g)?)?;
    let k = (f.space().field().n() * f.space().dim() as u32) as i64;
    Ok(inverse(&prod)?.scale_p_pow(k))
}

/// Direct double-sum convolution; the oracle for [`convolve`].
pub fn convolve_direct(f: &GridFn<Point>, g: &GridFn<Point>) -> Result<GridFn<Point>> {
    if f.space() != g.space() {
        return Err(Error::DimensionMismatch("convolution across grids".into()));
    }
    let space = f.space();
    let n = space.size();
    match (f.exact_values(), g.exact_values()) {
        (Some(a), Some(b)) => {
            let p = space.field().p();
            let mut out = vec![CycNum::zero(p); n];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    if bj.is_zero() {
                        continue;
                    }
                    out[space.add(i, j)] += &(ai * bj);
                }
            }
            GridFn::new(space, Values::Exact { numer: out, denom_exp: 0 })
        }
        (None, None) => {
            let a = f.to_complex_vec();
            let b = g.to_complex_vec();
            let mut out = vec![Complex64::zero(); n];
            for i in 0..n {
                for j in 0..n {
                    out[space.add(i, j)] += a[i] * b[j];
                }
            }
            GridFn::from_complex(space, out)
        }
        _ => Err(Error::ModeMismatch),
    }
}

/// Both sides of `sum |f_1 ... f_k| <= prod ||f_i||_{p_i}` over the whole grid
/// with counting measure. Requires `sum 1/p_i = 1` exactly.
pub fn gen_holder_check<S: Side>(fns: &[GridFn<S>], exps: &[Rational64]) -> Result<(f64, f64)> {
    if fns.is_empty() || fns.len() != exps.len() {
        return Err(Error::BadExponents(format!(
            "{} functions with {} exponents",
            fns.len(),
            exps.len()
        )));
    }
    if exps.iter().any(|e| !e.is_positive()) {
        return Err(Error::BadExponents("exponents must be positive".into()));
    }
    let total: Rational64 = exps.iter().map(|e| e.recip()).sum();
    if !total.is_one() {
        return Err(Error::BadExponents(format!("sum of reciprocals is {total}")));
    }
    let space = fns[0].space();
    if fns.iter().any(|f| f.space() != space) {
        return Err(Error::DimensionMismatch("functions on different grids".into()));
    }
    let mods: Vec<Vec<f64>> = fns
        .iter()
        .map(|f| f.to_complex_vec().iter().map(|z| z.norm()).collect())
        .collect();
    let lhs: f64 = (0..space.size())
        .map(|i| mods.iter().map(|m| m[i]).product::<f64>())
        .sum();
    let rhs: f64 = mods
        .iter()
        .zip(exps)
        .map(|(m, e)| {
            let p = e.to_f64().unwrap();
            m.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
        })
        .product();
    Ok((lhs, rhs))
}

/// Both sides of `sum_m prod_j |E_j^(m)| <= q^{-dk+d} (prod |E_j|)^{(k-1)/k}`.
pub fn lemma21_check(sets: &[GridFn<Point>]) -> Result<(f64, f64)> {
    let k = sets.len();
    if k < 2 {
        return Err(Error::BadParams("need at least two sets".into()));
    }
    let space = sets[0].space();
    if sets.iter().any(|e| e.space() != space) {
        return Err(Error::DimensionMismatch("sets on different grids".into()));
    }
    let hats: Vec<Vec<f64>> = sets
        .iter()
        .map(|e| {
            hat(&e.to_float()).map(|h| h.to_complex_vec().iter().map(|z| z.norm()).collect())
        })
        .collect::<Result<_>>()?;
    let lhs: f64 = (0..space.size())
        .map(|m| hats.iter().map(|h| h[m]).product::<f64>())
        .sum();
    let sizes: f64 = sets
        .iter()
        .map(|e| e.to_complex_vec().iter().map(|z| z.re).sum::<f64>())
        .product();
    let qd = space.size() as f64;
    let kf = k as f64;
    let rhs = qd.powf(1.0 - kf) * sizes.powf((kf - 1.0) / kf);
    Ok((lhs, rhs))
}
