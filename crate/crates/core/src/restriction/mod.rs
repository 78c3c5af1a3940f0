//! Norms under the three measures, Lorentz norms on `(S_t, dsigma)`, the
//! extension operator, interpolation bounds and exponent audits.

mod audit;
mod extension;
mod interp;
mod lorentz;


use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use audit::{
    exponent_audit, interpolate_power, lemma61_estimate, lemma62_estimate, lemma63_estimate,
    shparlinski_branch_check, threshold_6d2, threshold_9d18, PowerBound, RestrictionEstimate,
    ShparlinskiReport,
};
pub use extension::{
    duality_gap, duality_iteration, extension, extension_exact, extension_ratio,
    restrict_to_sphere, DualityReport,
};
pub use interp::{
    interpolate_bound, interpolation_weights, lemma52_check, lemma54_check, lemma54_with,
    nested_layers, rti_audit, rti_audit_with, weak_type_probe, InterpWeights, Lemma52Report,
    Lemma54Report, ProbeRow, RtiReport, WeakProbeReport,
};
pub use lorentz::{
    dist_fn, layer_cake_norm, lorentz_norm, rearrangement, weak_norm, LorentzParams,
    Rearrangement,
};

/// A Lebesgue exponent in `[1, inf]` (or `(0, inf]` for Lorentz first indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational64),
    Infinite,
}

impl Exponent {
    pub fn new(num: i64, den: i64) -> Exponent {
        Exponent::Finite(Rational64::new(num, den))
    }

    pub fn int(n: i64) -> Exponent {
        Exponent::Finite(Rational64::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/r`, with `1/inf = 0`.
    pub fn recip(&self) -> Rational64 {
        match self {
            Exponent::Finite(r) if r.is_zero() => Rational64::zero(),
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinite => Rational64::zero(),
        }
    }

    pub fn to_big(&self) -> Option<BigRational> {
        match self {
            Exponent::Finite(r) => Some(BigRational::new((*r.numer()).into(), (*r.denom()).into())),
            Exponent::Infinite => None,
        }
    }

    /// Holder conjugate, computed exactly.
    pub fn conjugate(&self) -> Result<Exponent> {
        match self {
            Exponent::Infinite => Ok(Exponent::int(1)),
            Exponent::Finite(r) if *r == Rational64::one() => Ok(Exponent::Infinite),
            Exponent::Finite(r) if *r > Rational64::one() => Ok(Exponent::Finite(r / (r - 1))),
            _ => Err(Error::BadExponent(format!("no conjugate for {self}"))),
        }
    }

    /// Rejects anything below 1.
    pub fn check_lebesgue(&self) -> Result<()> {
        match self {
            Exponent::Finite(r) if *r < Rational64::one() => {
                Err(Error::BadExponent(format!("{self} is below 1")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exponent> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let bad = || Error::BadExponent(format!("cannot parse exponent {s:?}"));
        let r = match s.split_once('/') {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Rational64::new(a, b)
            }
            None => Rational64::from_integer(s.parse().map_err(|_| bad())?),
        };
        if !r.is_positive() {
            return Err(Error::BadExponent(format!("{s} is not positive")));
        }
        Ok(Exponent::Finite(r))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The three measures in play: counting on the dual space, normalized counting
/// on the point space, normalized surface measure on a sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureSpace {
    DualCounting,
    /// Normalized counting measure on `F_q^d` with `q^d` points.
    SpaceNormalized { size: usize },
    /// `dsigma` on a sphere with `size` points.
    Sphere { size: usize },
}

impl MeasureSpace {
    pub fn weight(&self) -> f64 {
        match self {
            MeasureSpace::DualCounting => 1.0,
            MeasureSpace::SpaceNormalized { size } | MeasureSpace::Sphere { size } => {
                1.0 / *size as f64
            }
        }
    }

    pub fn total_mass(&self, len: usize) -> f64 {
        self.weight() * len as f64
    }
}

/// `||f||_{L^r(mu)}` for values given by modulus.
pub fn norm_abs(f: &[f64], mu: MeasureSpace, r: Exponent) -> Result<f64> {
    r.check_lebesgue()?;
    match r {
        Exponent::Infinite => Ok(f.iter().fold(0.0, |a, &b| a.max(b.abs()))),
        Exponent::Finite(_) => {
            let e = r.to_f64();
            let s: f64 = if e == 1.0 {
                f.iter().map(|v| v.abs()).sum()
            } else if e == 2.0 {
                f.iter().map(|v| v * v).sum()
            } else {
                f.iter().map(|v| v.abs().powf(e)).sum()
            };
            Ok((mu.weight() * s).powf(1.0 / e))
        }
    }
}

/// `||f||_{L^r(mu)}`.
pub fn norm(f: &[Complex64], mu: MeasureSpace, r: Exponent) -> Result<f64> {
    let abs: Vec<f64> = f.iter().map(|z| z.norm()).collect();
    norm_abs(&abs, mu, r)
}

fn check_radius(t: u32) -> Result<()> {
    if t == 0 {
        Err(Error::ZeroRadius)
    } else {
        Ok(())
    }
}
