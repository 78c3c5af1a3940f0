use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use super::Exponent;
use crate::error::{Error, Result};

/// `d_f(a) = |{x : |f(x)| > a}| / |S_t|`.
pub fn dist_fn(f: &[f64], a: f64) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    f.iter().filter(|v| v.abs() > a).count() as f64 / f.len() as f64
}

/// Decreasing rearrangement of `|f|` on a probability space with `n` atoms:
/// `f*(s) = v[j]` for `s in [j/n, (j+1)/n)`, zero for `s >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rearrangement {
    pub values: Vec<f64>,
}

impl Rearrangement {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, s: f64) -> f64 {
        let n = self.values.len();
        if s < 0.0 || n == 0 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let j = (s * n as f64).floor() as usize;
        self.values.get(j).copied().unwrap_or(0.0)
    }

    /// Breakpoints `j/n` with their step values.
    pub fn steps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.values.len() as f64;
        self.values.iter().enumerate().map(move |(j, &v)| ((j + 1) as f64 / n, v))
    }
}

pub fn rearrangement(f: &[f64]) -> Rearrangement {
    let mut values: Vec<f64> = f.iter().map(|v| v.abs()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Rearrangement { values }
}

/// `(r int_0^inf s^{r-1} d_f(s) ds)^{1/r}`, summed exactly over the level sets.
pub fn layer_cake_norm(f: &[f64], r: f64) -> f64 {
    let n = f.len();
    if n == 0 {
        return 0.0;
    }
    let v = rearrangement(f).values;
    // on [v_{i+1}, v_i) the distribution function equals (i+1)/n
    let mut acc = 0.0;
    for (i, &u) in v.iter().enumerate() {
        let below = v.get(i + 1).copied().unwrap_or(0.0);
        acc += (i + 1) as f64 / n as f64 * (u.powf(r) - below.powf(r));
    }
    acc.powf(1.0 / r)
}

/// Validated Lorentz indices: `p in (0, inf]`, `r in [1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LorentzParams {
    pub p: Exponent,
    pub r: Exponent,
}

impl LorentzParams {
    pub fn new(p: Exponent, r: Exponent) -> Result<LorentzParams> {
        if let Exponent::Finite(v) = p {
            if !v.is_positive() {
                return Err(Error::BadExponent(format!("p = {p} must be positive")));
            }
        }
        r.check_lebesgue()?;
        if p.is_infinite() && !r.is_infinite() {
            return Err(Error::BadExponent(format!("L^(inf,{r}) is not a norm")));
        }
        Ok(LorentzParams { p, r })
    }

    pub fn is_lebesgue(&self) -> bool {
        self.p == self.r
    }
}

/// `sup_s s^{1/p} f*(s)`.
pub fn weak_norm(f: &[f64], p: Exponent) -> Result<f64> {
    lorentz_norm(f, p, Exponent::Infinite)
}

/// `||f||_{L^{p,r}(S_t, dsigma)}` with `f` given on the `|S_t|` sphere points.
pub fn lorentz_norm(f: &[f64], p: Exponent, r: Exponent) -> Result<f64> {
    let params = LorentzParams::new(p, r)?;
    let star = rearrangement(f);
    if star.is_empty() {
        return Ok(0.0);
    }
    let ip = params.p.recip();
    let ipf = to_f64(ip);
    match params.r {
        Exponent::Infinite => {
            // the sup over each step is approached at its right end
            Ok(star
                .steps()
                .map(|(s, v)| if ipf == 0.0 { v } else { v * s.powf(ipf) })
                .fold(0.0, f64::max))
        }
        Exponent::Finite(rv) => {
            let rf = to_f64(rv);
            // int_a^b s^{r/p - 1} ds = (p/r)(b^{r/p} - a^{r/p})
            let e = to_f64(ip * rv);
            let mut acc = 0.0;
            let mut prev = 0.0f64;
            for (s, v) in star.steps() {
                let cur = s.powf(e);
                acc += v.powf(rf) * (cur - prev) / e;
                prev = cur;
            }
            Ok(acc.powf(1.0 / rf))
        }
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
