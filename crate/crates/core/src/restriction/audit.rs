use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::resultant::{delta_set, PointSet};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn as_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// `||E~||_{L^k(S_r, dsigma)} <~ q^alpha ||E||_{L^ell(dm)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionEstimate {
    pub k: usize,
    #[serde(serialize_with = "as_string")]
    pub ell: BigRational,
    #[serde(serialize_with = "as_string")]
    pub alpha: BigRational,
    pub tag: String,
}

impl RestrictionEstimate {
    pub fn new(k: usize, ell: BigRational, alpha: BigRational, tag: &str) -> Result<Self> {
        if ell < BigRational::one() {
            return Err(Error::BadParams(format!("ell = {ell} is below 1")));
        }
        Ok(RestrictionEstimate {
            k,
            ell,
            alpha,
            tag: tag.into(),
        })
    }
}

/// A bound of the shape `q^{q_exp} |E|^{e_exp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerBound {
    pub q_exp: BigRational,
    pub e_exp: BigRational,
}

impl PowerBound {
    pub fn new(q_exp: BigRational, e_exp: BigRational) -> Self {
        PowerBound { q_exp, e_exp }
    }
}

/// Interpolates two power bounds: `b0^{1 - theta} b1^theta`.
pub fn interpolate_power(b0: &PowerBound, r0: &BigRational, b1: &PowerBound, r1: Option<&BigRational>, r: &BigRational) -> Result<PowerBound> {
    let one = BigRational::one();
    let inv1 = r1.map(|x| x.recip()).unwrap_or_else(BigRational::zero);
    if *r0 < one || r <= r0 || r1.is_some_and(|x| x <= r) {
        return Err(Error::BadExponents(format!("need 1 <= r0 < r < r1, got r0 = {r0}, r = {r}")));
    }
    let theta = (r0.recip() - r.recip()) / (r0.recip() - inv1);
    let w0 = &one - &theta;
    Ok(PowerBound {
        q_exp: &w0 * &b0.q_exp + &theta * &b1.q_exp,
        e_exp: &w0 * &b0.e_exp + &theta * &b1.e_exp,
    })
}

fn weak_source(d: i64) -> (PowerBound, BigRational) {
    // ||E~||_{L^{r0,inf}} <~ |E|^{3/4}
    (PowerBound::new(BigRational::zero(), rat(3, 4)), rat(12 * d - 8, 3 * d + 4))
}

fn to_estimate(k: usize, b: PowerBound, tag: &str) -> Result<RestrictionEstimate> {
    if !b.e_exp.is_positive() {
        return Err(Error::BadParams("degenerate interpolation".into()));
    }
    RestrictionEstimate::new(k, b.e_exp.recip(), b.q_exp, tag)
}

fn check_even(d: usize, min: usize) -> Result<i64> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    if d < min {
        return Err(Error::TooSmallDimension { d, min });
    }
    Ok(d as i64)
}

/// `L^3` estimate from the weak bound and the trivial `L^inf` bound (d = 4, 6).
pub fn lemma61_estimate(d: usize) -> Result<RestrictionEstimate> {
    let d = check_even(d, 4)?;
    let (w, r0) = weak_source(d);
    let trivial = PowerBound::new(BigRational::zero(), BigRational::one());
    let b = interpolate_power(&w, &r0, &trivial, None, &rat(3, 1))?;
    to_estimate(3, b, "weak-trivial-l3")
}

/// `L^4` estimate from the same pair, any even `d >= 4`.
pub fn lemma62_estimate(d: usize) -> Result<RestrictionEstimate> {
    let d = check_even(d, 4)?;
    let (w, r0) = weak_source(d);
    let trivial = PowerBound::new(BigRational::zero(), BigRational::one());
    let b = interpolate_power(&w, &r0, &trivial, None, &rat(4, 1))?;
    to_estimate(4, b, "weak-trivial-l4")
}

/// `L^3` estimate interpolating the `L^2` bound `q^{-(d-1)/4}|E|` with the weak bound, `d >= 8`.
pub fn lemma63_estimate(d: usize) -> Result<RestrictionEstimate> {
    let d = check_even(d, 8)?;
    let (w, r1) = weak_source(d);
    let l2 = PowerBound::new(rat(-(d - 1), 4), BigRational::one());
    let b = interpolate_power(&l2, &rat(2, 1), &w, Some(&r1), &rat(3, 1))?;
    to_estimate(3, b, "l2-weak-l3")
}

/// `k((d+1)/2 - 1/(6d+2))`.
pub fn threshold_6d2(d: usize, k: usize) -> BigRational {
    let d = d as i64;
    rat(k as i64, 1) * (rat(d + 1, 2) - rat(1, 6 * d + 2))
}

/// `(9d^2 - 9d - 20)/(6d - 12)`, equal to `3((d+1)/2 - 1/(9d-18))`.
pub fn threshold_9d18(d: usize) -> BigRational {
    let d = d as i64;
    rat(9 * d * d - 9 * d - 20, 6 * d - 12)
}

/// `e = gamma((k+1)/k - 1/ell) - (k alpha + d - 1)`: the power of `q` in the
/// lower bound for `|Delta_k|` at product size `q^gamma`.
pub fn exponent_audit(d: usize, k: usize, estimate: &RestrictionEstimate, gamma: &BigRational) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::BadParams(format!("k = {k} must be at least 2")));
    }
    if estimate.k != k {
        return Err(Error::BadParams(format!(
            "estimate is for L^{} on the sphere, audit asks for k = {k}",
            estimate.k
        )));
    }
    if estimate.ell < BigRational::one() {
        return Err(Error::BadParams(format!("ell = {} is below 1", estimate.ell)));
    }
    let kk = rat(k as i64, 1);
    let gain = rat(k as i64 + 1, k as i64) - estimate.ell.recip();
    Ok(gamma * gain - (&kk * &estimate.alpha + rat(d as i64 - 1, 1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShparlinskiReport {
    pub d: usize,
    /// `gamma - (d-1)/2` for the three-set threshold.
    #[serde(serialize_with = "as_string")]
    pub exponent: BigRational,
    /// `(d+1) + (3d-7)/(3d-6)`.
    #[serde(serialize_with = "as_string")]
    pub closed_form: BigRational,
    pub matches: bool,
    pub exceeds: bool,
    /// `(|Delta_2(E_1, E_2)|, |Delta_3(E_1, E_2, E_3)|)` when sets are given.
    pub measured: Option<(usize, usize)>,
}

/// If `|E_3| < q^{(d-1)/2}` the other two sets carry more than `q^{d+1}`.
pub fn shparlinski_branch_check(d: usize, sets: Option<&[PointSet]>) -> Result<ShparlinskiReport> {
    if d < 3 {
        return Err(Error::BadParams(format!("threshold undefined for d = {d}")));
    }
    let di = d as i64;
    let exponent = threshold_9d18(d) - rat(di - 1, 2);
    let closed_form = rat(di + 1, 1) + rat(3 * di - 7, 3 * di - 6);
    let measured = match sets {
        Some(s) if s.len() == 3 => Some((delta_set(&s[..2])?.len(), delta_set(s)?.len())),
        Some(_) => return Err(Error::BadParams("branch measurement takes three sets".into())),
        None => None,
    };
    Ok(ShparlinskiReport {
        d,
        matches: exponent == closed_form,
        exceeds: exponent > rat(di + 1, 1),
        exponent,
        closed_form,
        measured,
    })
}
