use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    check_radius, extension, lorentz_norm, norm, norm_abs, restrict_to_sphere, weak_norm, Exponent,
    MeasureSpace,
};
use crate::error::{Error, Result};
use crate::resultant::PointSet;
use crate::sphere::{max_nonzero_hat, SphereTable};
use crate::transform::{Dual, GridFn, Mode};

/// Solution of `1/r = (1 - theta)/r0 + theta/r1`; `on_a0 = 1 - theta`, `on_a1 = theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpWeights {
    pub theta: Rational64,
    pub on_a0: Rational64,
    pub on_a1: Rational64,
}

fn check_triple(r0: Exponent, r1: Exponent, r: Exponent) -> Result<()> {
    let bad = || Error::BadExponents(format!("need 1 <= r0 < r < r1 <= inf, got ({r0}, {r}, {r1})"));
    let (Exponent::Finite(a), Exponent::Finite(b)) = (r0, r) else {
        return Err(bad());
    };
    if a < Rational64::one() || b <= a {
        return Err(bad());
    }
    if let Exponent::Finite(c) = r1 {
        if c <= b {
            return Err(bad());
        }
    }
    Ok(())
}

pub fn interpolation_weights(r0: Exponent, r1: Exponent, r: Exponent) -> Result<InterpWeights> {
    check_triple(r0, r1, r)?;
    let theta = (r0.recip() - r.recip()) / (r0.recip() - r1.recip());
    Ok(InterpWeights {
        theta,
        on_a0: Rational64::one() - theta,
        on_a1: theta,
    })
}

fn f(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Right-hand side of the interpolation inequality with its explicit constant.
/// For `r1 = inf` the second layer vanishes above `A1` and the constant is
/// `(r/(r - r0))^{1/r}`.
pub fn interpolate_bound(a0: f64, r0: Exponent, a1: f64, r1: Exponent, r: Exponent) -> Result<f64> {
    let w = interpolation_weights(r0, r1, r)?;
    if !(a0 > 0.0 && a1 > 0.0) {
        return Err(Error::BadExponents(format!("bounds must be positive, got A0 = {a0}, A1 = {a1}")));
    }
    let (rv, r0v) = (r.to_f64(), r0.to_f64());
    let c = match r1 {
        Exponent::Infinite => rv / (rv - r0v),
        Exponent::Finite(_) => {
            let r1v = r1.to_f64();
            (2.0 * rv / (rv - r0v)).max(2.0 * rv / (r1v - rv))
        }
    };
    Ok(c.powf(1.0 / rv) * a0.powf(f(w.on_a0)) * a1.powf(f(w.on_a1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct RtiReport {
    pub r0: Exponent,
    pub r: Exponent,
    pub r1: Exponent,
    pub a0: f64,
    pub a1: f64,
    pub norm: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

fn tilde_moduli(table: &SphereTable, e: &PointSet, t: u32) -> Result<Vec<f64>> {
    if e.space() != table.space() {
        return Err(Error::DimensionMismatch("set and sphere table on different grids".into()));
    }
    let g = GridFn::<Dual>::indicator(e.space(), e.indices(), Mode::Float)?;
    Ok(restrict_to_sphere(table, t, &g)?.iter().map(|z| z.norm()).collect())
}

/// Measures both weak norms of `E~` on `S_t` and checks the interpolated bound.
pub fn rti_audit(table: &SphereTable, e: &PointSet, t: u32, r0: Exponent, r1: Exponent, r: Exponent) -> Result<RtiReport> {
    check_radius(t)?;
    rti_audit_with(&tilde_moduli(table, e, t)?, r0, r1, r)
}

/// Same audit for precomputed moduli on the sphere.
pub fn rti_audit_with(vals: &[f64], r0: Exponent, r1: Exponent, r: Exponent) -> Result<RtiReport> {
    check_triple(r0, r1, r)?;
    let a0 = weak_norm(vals, r0)?;
    let a1 = weak_norm(vals, r1)?;
    let norm = norm_abs(vals, MeasureSpace::Sphere { size: vals.len() }, r)?;
    let bound = if a0 == 0.0 || a1 == 0.0 {
        0.0
    } else {
        interpolate_bound(a0, r0, a1, r1, r)?
    };
    Ok(RtiReport {
        r0,
        r,
        r1,
        a0,
        a1,
        norm,
        bound,
        ratio: if bound > 0.0 { norm / bound } else { 0.0 },
        pass: norm <= bound + 1e-9 * bound.max(1.0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma54Report {
    pub t: u32,
    pub size: usize,
    /// `sum_{x in S_t} |E~(x)|^2`.
    pub lhs: f64,
    /// `|E||S_t| + |E|^2 q^d max_{n != 0} |S_t^(n)|`.
    pub rhs: f64,
    pub pass: bool,
    /// `lhs / (q^{(d-1)/2} |E|^2)`, reported when `|E| >= q^{(d-1)/2}`.
    pub ratio: Option<f64>,
}

pub fn lemma54_check(table: &SphereTable, e: &PointSet, t: u32) -> Result<Lemma54Report> {
    let max = max_nonzero_hat(table, t)?.max;
    lemma54_with(table, e, t, max)
}

pub fn lemma54_with(table: &SphereTable, e: &PointSet, t: u32, max_hat: f64) -> Result<Lemma54Report> {
    check_radius(t)?;
    let vals = tilde_moduli(table, e, t)?;
    let lhs: f64 = vals.iter().map(|v| v * v).sum();
    let n = e.len() as f64;
    let qd = table.space().size() as f64;
    let rhs = n * vals.len() as f64 + n * n * qd * max_hat;
    let q = table.q() as f64;
    let big = q.powf((table.dim() as f64 - 1.0) / 2.0);
    Ok(Lemma54Report {
        t,
        size: e.len(),
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-9) + 1e-9,
        ratio: (n >= big && n > 0.0).then(|| lhs / (big * n * n)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub family: String,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakProbeReport {
    pub q: u32,
    pub d: usize,
    pub t: u32,
    pub r0: Exponent,
    pub rows: Vec<ProbeRow>,
    pub max_ratio: f64,
    pub argmax: String,
}

/// Lower bounds for `sup_g ||g~||_{L^{r0,inf}(S_t)} / ||g||_{L^{4/3}(dm)}`,
/// `r0 = (12d - 8)/(3d + 4)`, over a fixed seeded family of test functions.
pub fn weak_type_probe(table: &SphereTable, t: u32, seed: u64) -> Result<WeakProbeReport> {
    let d = table.dim();
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    if d < 4 {
        return Err(Error::TooSmallDimension { d, min: 4 });
    }
    check_radius(t)?;
    let t = table.field().check(t as u64)?;
    let di = d as i64;
    let r0 = Exponent::new(12 * di - 8, 3 * di + 4);
    let dual = Exponent::new(4, 3);
    let space = table.space();
    let n = space.size();
    let ratio = |g: &[Complex64]| -> Result<f64> {
        let bottom = norm(g, MeasureSpace::DualCounting, dual)?;
        if bottom == 0.0 {
            return Ok(0.0);
        }
        let gf = GridFn::<Dual>::from_complex(space, g.to_vec())?;
        let vals: Vec<f64> = restrict_to_sphere(table, t, &gf)?.iter().map(|z| z.norm()).collect();
        Ok(weak_norm(&vals, r0)? / bottom)
    };
    let mut rows = Vec::new();

    // singletons: |g~| is a unimodular wave, evaluated directly
    let sphere = table.sphere(t);
    let mut best_single = 0.0f64;
    let roots: Vec<Complex64> = (0..table.field().p())
        .map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / table.field().p() as f64))
        .collect();
    for m in 0..n {
        let vals: Vec<f64> = sphere.iter().map(|&x| roots[space.chi_dot(x, m) as usize].norm()).collect();
        best_single = best_single.max(weak_norm(&vals, r0)?);
    }
    rows.push(ProbeRow { family: "singletons".into(), ratio: best_single });

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    rows.push(ProbeRow { family: "full".into(), ratio: ratio(&vec![one; n])? });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 1..=6u32 {
        let size = (n >> i).max(1);
        let mut best = 0.0f64;
        for _ in 0..4 {
            let mut g = vec![zero; n];
            for j in sample(&mut rng, n, size) {
                g[j] = one;
            }
            best = best.max(ratio(&g)?);
        }
        rows.push(ProbeRow { family: format!("random-density-2^-{i}"), ratio: best });
    }
    let mut best = 0.0f64;
    for _ in 0..4 {
        let g: Vec<Complex64> = (0..n).map(|_| if rng.gen::<bool>() { one } else { -one }).collect();
        best = best.max(ratio(&g)?);
    }
    rows.push(ProbeRow { family: "random-signs".into(), ratio: best });

    for r in table.field().elements() {
        let shell: Vec<Complex64> = (0..n).map(|m| if table.norm(m) == r { one } else { zero }).collect();
        rows.push(ProbeRow { family: format!("dual-sphere-{r}"), ratio: ratio(&shell)? });
        let cap: Vec<Complex64> = (0..n)
            .map(|m| if table.norm(m) == r && space.coords(m)[0] == 0 { one } else { zero })
            .collect();
        rows.push(ProbeRow { family: format!("sphere-cap-{r}"), ratio: ratio(&cap)? });
    }

    let (argmax, max_ratio) = rows
        .iter()
        .fold((String::new(), 0.0f64), |acc, row| if row.ratio > acc.1 { (row.family.clone(), row.ratio) } else { acc });
    Ok(WeakProbeReport {
        q: table.q(),
        d,
        t,
        r0,
        rows,
        max_ratio,
        argmax,
    })
}

/// Nested layers `F_1 ⊃ F_2 ⊃ ...` of sphere positions with positive heights.
pub fn nested_layers(sphere_len: usize, levels: usize, seed: u64) -> Vec<(f64, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current: Vec<usize> = (0..sphere_len).collect();
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        if current.is_empty() {
            break;
        }
        let keep = rng.gen_range(1..=current.len());
        let picked = sample(&mut rng, current.len(), keep).into_vec();
        let mut next: Vec<usize> = picked.into_iter().map(|i| current[i]).collect();
        next.sort_unstable();
        out.push((rng.gen_range(0.1..2.0), next.clone()));
        current = next;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma52Report {
    pub p: Exponent,
    /// `||(f dsigma)^v||_{L^4(dm)}`.
    pub lhs: f64,
    /// `sum_j a_j ||(F_j dsigma)^v||_{L^4(dm)}`.
    pub triangle: f64,
    pub triangle_holds: bool,
    pub lorentz: f64,
    /// `p sum_j a_j (|F_j|/|S_t|)^{1/p}`.
    pub layer_formula: f64,
    pub constant: f64,
}

/// The simple-function step behind the `L^{p,1}` upgrade, `p = (12d - 8)/(9d - 12)`.
pub fn lemma52_check(table: &SphereTable, t: u32, layers: &[(f64, Vec<usize>)]) -> Result<Lemma52Report> {
    check_radius(t)?;
    let t = table.field().check(t as u64)?;
    let len = table.size(t);
    let di = table.dim() as i64;
    let p = Exponent::new(12 * di - 8, 9 * di - 12);
    let four = Exponent::int(4);
    let mut f = vec![0.0f64; len];
    let mut triangle = 0.0;
    let mut layer_formula = 0.0;
    let pv = p.to_f64();
    for (a, idx) in layers {
        if *a <= 0.0 || idx.iter().any(|&i| i >= len) {
            return Err(Error::BadParams("layers need positive heights and sphere positions".into()));
        }
        let mut ind = vec![Complex64::zero(); len];
        for &i in idx {
            ind[i] = Complex64::one();
            f[i] += a;
        }
        let e = extension(table, t, &ind)?;
        triangle += a * norm(&e.to_complex_vec(), MeasureSpace::DualCounting, four)?;
        layer_formula += pv * a * (idx.len() as f64 / len as f64).powf(1.0 / pv);
    }
    let fc: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let lhs = norm(&extension(table, t, &fc)?.to_complex_vec(), MeasureSpace::DualCounting, four)?;
    let lorentz = lorentz_norm(&f, p, Exponent::int(1))?;
    Ok(Lemma52Report {
        p,
        lhs,
        triangle,
        triangle_holds: lhs <= triangle * (1.0 + 1e-9) + 1e-12,
        lorentz,
        layer_formula,
        constant: if lorentz > 0.0 { lhs / lorentz } else { 0.0 },
    })
}
