use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::{check_radius, norm, Exponent, MeasureSpace};
use crate::error::{Error, Result};
use crate::sphere::SphereTable;
use crate::transform::{inverse, tilde, Dual, GridFn, Values};

fn sphere_points(table: &SphereTable, t: u32, len: usize) -> Result<&[usize]> {
    check_radius(t)?;
    let t = table.field().check(t as u64)?;
    let pts = table.sphere(t);
    if pts.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "{len} values for a sphere of {} points",
            pts.len()
        )));
    }
    Ok(pts)
}

/// `(f dsigma)^v(m) = |S_t|^{-1} sum_{x in S_t} f(x) chi(m.x)`, float.
pub fn extension(table: &SphereTable, t: u32, f: &[Complex64]) -> Result<GridFn<Dual>> {
    let pts = sphere_points(table, t, f.len())?;
    let space = table.space();
    let mut full = vec![Complex64::new(0.0, 0.0); space.size()];
    for (&x, &v) in pts.iter().zip(f) {
        full[x] = v;
    }
    // chi(m.x) is symmetric in m and x, so the inverse transform evaluates the sum
    let raw = inverse(&GridFn::<Dual>::from_complex(space, full)?)?;
    let n = pts.len() as f64;
    let vals = raw.to_complex_vec().into_iter().map(|z| z / n).collect();
    GridFn::from_complex(space, vals)
}

/// Exact extension of a rational-valued function on `S_t`.
pub fn extension_exact(table: &SphereTable, t: u32, f: &[BigRational]) -> Result<GridFn<Dual>> {
    let pts = sphere_points(table, t, f.len())?;
    let space = table.space();
    let mut full = vec![BigRational::from_integer(0.into()); space.size()];
    for (&x, v) in pts.iter().zip(f) {
        full[x] = v.clone();
    }
    let raw = inverse(&GridFn::<Dual>::from_rationals(space, full)?)?;
    let Values::Exact { numer, denom_exp } = raw.into_values() else {
        unreachable!("rational input stays exact")
    };
    let inv = BigRational::new(BigInt::from(1), BigInt::from(pts.len()));
    GridFn::new(
        space,
        Values::Exact {
            numer: numer.iter().map(|z| z.scale(&inv)).collect(),
            denom_exp,
        },
    )
}

/// `g~` restricted to `S_t`, in sphere order.
pub fn restrict_to_sphere(table: &SphereTable, t: u32, g: &GridFn<Dual>) -> Result<Vec<Complex64>> {
    check_radius(t)?;
    let t = table.field().check(t as u64)?;
    let gt = tilde(g)?;
    Ok(table.sphere(t).iter().map(|&x| gt.complex_value(x)).collect())
}

/// `||(f dsigma)^v||_{L^r(dm)} / ||f||_{L^p(dsigma)}`.
pub fn extension_ratio(table: &SphereTable, t: u32, f: &[Complex64], p: Exponent, r: Exponent) -> Result<f64> {
    let ext = extension(table, t, f)?;
    let top = norm(&ext.to_complex_vec(), MeasureSpace::DualCounting, r)?;
    let bottom = norm(f, MeasureSpace::Sphere { size: f.len() }, p)?;
    if bottom == 0.0 {
        return Err(Error::BadParams("zero function".into()));
    }
    Ok(top / bottom)
}

/// `||g~||_{L^{p'}(S_t, dsigma)} / ||g||_{L^{r'}(dm)}` for the extension pair `(p, r)`.
pub fn duality_gap(table: &SphereTable, t: u32, g: &GridFn<Dual>, p: Exponent, r: Exponent) -> Result<f64> {
    let (pc, rc) = (p.conjugate()?, r.conjugate()?);
    let restricted = restrict_to_sphere(table, t, g)?;
    let top = norm(&restricted, MeasureSpace::Sphere { size: restricted.len() }, pc)?;
    let bottom = norm(&g.to_complex_vec(), MeasureSpace::DualCounting, rc)?;
    if bottom == 0.0 {
        return Err(Error::BadParams("zero function".into()));
    }
    Ok(top / bottom)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub t: u32,
    pub p: Exponent,
    pub r: Exponent,
    /// Last extension ratio.
    pub extension_ratio: f64,
    /// Last restriction ratio.
    pub restriction_ratio: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Whether the ratios interleaved as the pairing argument requires.
    pub monotone: bool,
}

fn duality_map(h: &[Complex64], s: f64) -> Vec<Complex64> {
    h.iter()
        .map(|&z| {
            let a = z.norm();
            if a == 0.0 {
                z
            } else {
                z * a.powf(s - 2.0)
            }
        })
        .collect()
}

/// Alternates extension and restriction through the duality maps; the two
/// ratios interleave and meet at a common critical value.
pub fn duality_iteration(
    table: &SphereTable,
    t: u32,
    p: Exponent,
    r: Exponent,
    start: &[Complex64],
    max_iter: usize,
    tol: f64,
) -> Result<DualityReport> {
    let (pc, rc) = (p.conjugate()?, r.conjugate()?);
    for e in [p, r, pc, rc] {
        if e.is_infinite() || e.to_f64() <= 1.0 {
            return Err(Error::BadExponent(format!("duality iteration needs 1 < p, r < inf, got {e}")));
        }
    }
    let space = table.space();
    let sigma = MeasureSpace::Sphere { size: start.len() };
    let mut f = start.to_vec();
    let mut report = DualityReport {
        t,
        p,
        r,
        extension_ratio: 0.0,
        restriction_ratio: 0.0,
        gap: f64::INFINITY,
        iterations: 0,
        converged: false,
        monotone: true,
    };
    let slack = 1e-9;
    for it in 1..=max_iter {
        let h = extension(table, t, &f)?.to_complex_vec();
        let fnorm = norm(&f, sigma, p)?;
        if fnorm == 0.0 {
            return Err(Error::BadParams("zero function".into()));
        }
        let r1 = norm(&h, MeasureSpace::DualCounting, r)? / fnorm;
        if r1 < report.restriction_ratio * (1.0 - slack) {
            report.monotone = false;
        }
        let g = GridFn::<Dual>::from_complex(space, duality_map(&h, r.to_f64()))?;
        let u = restrict_to_sphere(table, t, &g)?;
        let r2 = norm(&u, sigma, pc)? / norm(&g.to_complex_vec(), MeasureSpace::DualCounting, rc)?;
        if r2 < r1 * (1.0 - slack) {
            report.monotone = false;
        }
        report.extension_ratio = r1;
        report.restriction_ratio = r2;
        report.gap = (r2 - r1).abs() / r2.max(f64::MIN_POSITIVE);
        report.iterations = it;
        if report.gap <= tol {
            report.converged = true;
            break;
        }
        f = duality_map(&u, pc.to_f64());
        let scale = norm(&f, sigma, p)?;
        f.iter_mut().for_each(|z| *z /= scale);
    }
    Ok(report)
}
