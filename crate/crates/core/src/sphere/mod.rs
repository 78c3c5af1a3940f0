//! Spheres `S_t = {x : x_1^2 + ... + x_d^2 = t}` and their Fourier transforms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_core::{gauss_sum, CharTable, CycInt, CycNum, Field, Space};
use crate::transform::{fast_axis_transform, p_pow, Dual, GridFn, Mode, Point, TransformKind, Values};

/// Point lists of every sphere in `F_q^d`.
#[derive(Clone, Debug)]
pub struct SphereTable {
    space: Space,
    norms: Vec<u32>,
    members: Vec<Vec<usize>>,
}

pub fn build_spheres(field: &Field, d: usize) -> Result<SphereTable> {
    SphereTable::new(&Space::new(field, d)?)
}

impl SphereTable {
    pub fn new(space: &Space) -> Result<SphereTable> {
        let q = space.q() as usize;
        let norms: Vec<u32> = (0..space.size()).map(|i| space.norm(i)).collect();
        let mut members = vec![Vec::new(); q];
        for (i, &r) in norms.iter().enumerate() {
            members[r as usize].push(i);
        }
        Ok(SphereTable {
            space: space.clone(),
            norms,
            members,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    #[inline]
    pub fn norm(&self, i: usize) -> u32 {
        self.norms[i]
    }

    pub fn norms(&self) -> &[u32] {
        &self.norms
    }

    pub fn sphere(&self, t: u32) -> &[usize] {
        &self.members[t as usize]
    }

    pub fn size(&self, t: u32) -> usize {
        self.members[t as usize].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// One nonzero vector of each norm, if any exists. Every function of the
    /// form `m -> F(S_t)^(m)` is constant on `{m != 0 : ||m|| = r}`.
    pub fn punctured_reps(&self) -> Vec<Option<usize>> {
        self.members
            .iter()
            .map(|s| s.iter().copied().find(|&i| i != 0))
            .collect()
    }

    /// `q^d S_t^(m)` for every `t`, as unreduced integer slot vectors.
    pub fn hat_numerators(&self, m: usize) -> Vec<CycInt> {
        let table = CharTable::new(self.field());
        self.hat_numerators_with(&table, m)
    }

    fn hat_numerators_with(&self, table: &CharTable, m: usize) -> Vec<CycInt> {
        let p = self.field().p();
        let q = self.q() as usize;
        let cm = self.space.coords(m);
        let mut out = vec![CycInt::zero(p); q];
        for x in 0..self.space.size() {
            let e = table.dot(self.space.coords(x), cm);
            out[self.norms[x] as usize].bump((p - e) % p, 1);
        }
        out
    }

    fn qd_exp(&self) -> u32 {
        self.field().n() * self.dim() as u32
    }
}

fn inv_p_pow(p: u32, e: u32) -> BigRational {
    BigRational::from_integer(p_pow(p, e)).recip()
}

/// `S_t^(m) = q^{-d} sum_{x in S_t} chi(-x.m)` by direct summation.
pub fn sphere_hat_direct(table: &SphereTable, t: u32, m: usize) -> CycNum {
    let f = table.field();
    let p = f.p();
    let chars = CharTable::new(f);
    let cm = table.space.coords(m);
    let mut num = CycInt::zero(p);
    for &x in table.sphere(t) {
        let e = chars.dot(table.space.coords(x), cm);
        num.bump((p - e) % p, 1);
    }
    num.to_cycnum().scale(&inv_p_pow(p, table.qd_exp()))
}

/// The Gauss-sum formula for `S_t^(m)`, even `d` only.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    field: Field,
    d: usize,
    g_pow_d: CycNum,
    inv4: u32,
}

/// Signature of a sphere-transform formula `(form, t, ||m||, m == 0) -> value`.
pub type SphereFormula = fn(&ClosedForm, u32, u32, bool) -> CycNum;

impl ClosedForm {
    pub fn new(field: &Field, d: usize) -> Result<ClosedForm> {
        if d % 2 != 0 {
            return Err(Error::OddDimension(d));
        }
        let g = gauss_sum(field);
        let inv4 = field.inv(field.from_int(4)).expect("p is odd");
        Ok(ClosedForm {
            field: field.clone(),
            d,
            g_pow_d: g.pow(d as u32),
            inv4,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `G^d`; rational for even `d`.
    pub fn g_pow_d(&self) -> &CycNum {
        &self.g_pow_d
    }

    /// `q^{-1} delta_0(m) + q^{-d-1} G^d sum_{l != 0} chi(t l + ||m|| / (4 l))`.
    pub fn value(&self, t: u32, norm_m: u32, m_is_zero: bool) -> CycNum {
        let f = &self.field;
        let p = f.p();
        let mut counts = vec![0i64; p as usize];
        for l in 1..f.q() {
            let il = f.inv(l).unwrap();
            let arg = f.add(f.mul(t, l), f.mul(norm_m, f.mul(self.inv4, il)));
            counts[f.chi_exponent(arg) as usize] += 1;
        }
        let ksum = CycNum::from_exponent_counts(p, &counts);
        let n = f.n();
        let mut v = (&self.g_pow_d * &ksum).scale(&inv_p_pow(p, n * (self.d as u32 + 1)));
        if m_is_zero {
            v += &CycNum::from_rational(p, inv_p_pow(p, n));
        }
        v
    }
}

/// The closed form at a given `m`.
pub fn sphere_hat_closed(field: &Field, d: usize, t: u32, m: &[u32]) -> Result<CycNum> {
    let form = ClosedForm::new(field, d)?;
    let space = Space::new(field, d)?;
    let mi = space.encode(m)?;
    let t = field.check(t as u64)?;
    Ok(form.value(t, space.norm(mi), mi == 0))
}

/// Outcome of comparing a formula with direct summation on one sphere.
#[derive(Clone, Debug)]
pub struct SphereCheckRow {
    pub t: u32,
    pub size: usize,
    /// Dual vectors where the formula disagrees with direct summation.
    pub mismatches: Vec<usize>,
}

impl SphereCheckRow {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `formula` with direct summation at every `(t, m)`.
pub fn closed_form_suite(table: &SphereTable, formula: SphereFormula) -> Result<Vec<SphereCheckRow>> {
    let form = ClosedForm::new(table.field(), table.dim())?;
    let q = table.q();
    let p = table.field().p();
    let mut cache = Vec::with_capacity(q as usize);
    for t in 0..q {
        let row: Vec<(CycNum, CycNum)> = (0..q)
            .map(|r| (formula(&form, t, r, false), formula(&form, t, r, true)))
            .collect();
        cache.push(row);
    }
    let scale = inv_p_pow(p, table.qd_exp());
    let chars = CharTable::new(table.field());
    let bad: Vec<Vec<usize>> = (0..table.space.size())
        .into_par_iter()
        .map(|m| {
            let nums = table.hat_numerators_with(&chars, m);
            let r = table.norm(m) as usize;
            (0..q as usize)
                .filter(|&t| {
                    let direct = nums[t].to_cycnum().scale(&scale);
                    let closed = if m == 0 { &cache[t][r].1 } else { &cache[t][r].0 };
                    &direct != closed
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<SphereCheckRow> = (0..q)
        .map(|t| SphereCheckRow {
            t,
            size: table.size(t),
            mismatches: Vec::new(),
        })
        .collect();
    for (m, ts) in bad.into_iter().enumerate() {
        for t in ts {
            rows[t].mismatches.push(m);
        }
    }
    Ok(rows)
}

/// Check that `S_t^(m)` depends only on `||m||` once `m = 0` is set aside.
/// Returns the `(t, m)` pairs that disagree with their class representative.
pub fn punctured_constancy_violations(table: &SphereTable) -> Vec<(u32, usize)> {
    let reps = table.punctured_reps();
    let chars = CharTable::new(table.field());
    let rep_vals: Vec<Option<Vec<CycInt>>> = reps
        .iter()
        .map(|r| r.map(|m| table.hat_numerators_with(&chars, m)))
        .collect();
    let mut out: Vec<(u32, usize)> = (1..table.space.size())
        .into_par_iter()
        .flat_map_iter(|m| {
            let nums = table.hat_numerators_with(&chars, m);
            let rep = rep_vals[table.norm(m) as usize].as_ref().unwrap();
            nums.iter()
                .zip(rep)
                .enumerate()
                .filter(|(_, (a, b))| !a.same_value(b))
                .map(|(t, _)| (t as u32, m))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_unstable();
    out
}

fn pair_sum_rhs_scaled(table: &SphereTable, m: usize, v: usize) -> CycInt {
    // q^{2d} * (q^{-1} d0(m) d0(v) + q^{-d-1} sum_{s != 0} chi(s (||m|| - ||v||)))
    let f = table.field();
    let p = f.p();
    let qd = table.space.size() as i128;
    let q = f.q() as i128;
    let mut out = CycInt::zero(p);
    if m == 0 && v == 0 {
        out.bump(0, qd * qd / q);
    }
    let diff = f.sub(table.norm(m), table.norm(v));
    let w = qd / q;
    for s in 1..f.q() {
        out.bump(f.chi_exponent(f.mul(s, diff)), w);
    }
    out
}

fn pair_sum_lhs_scaled(a: &[CycInt], b: &[CycInt]) -> Result<CycInt> {
    let p = a[0].order();
    let mut acc = CycInt::zero(p);
    for (x, y) in a.iter().zip(b) {
        acc.checked_add_assign(&x.checked_mul(&y.conj())?)?;
    }
    Ok(acc)
}

/// Both sides of `sum_t S_t^(m) conj(S_t^(v)) = q^{-1} d0(m) d0(v) + q^{-d-1} sum_{s != 0} chi(s(||m|| - ||v||))`.
pub fn pair_sum_check(table: &SphereTable, m: usize, v: usize) -> Result<(CycNum, CycNum)> {
    let lhs = pair_sum_lhs_scaled(&table.hat_numerators(m), &table.hat_numerators(v))?;
    let rhs = pair_sum_rhs_scaled(table, m, v);
    let s = inv_p_pow(table.field().p(), 2 * table.qd_exp());
    Ok((lhs.to_cycnum().scale(&s), rhs.to_cycnum().scale(&s)))
}

/// Summary of the pair-sum identity over every `(m, v)`.
#[derive(Clone, Debug)]
pub struct PairSumSummary {
    pub pairs: u64,
    pub failures: Vec<(usize, usize)>,
}

pub fn pair_sum_suite(table: &SphereTable) -> Result<PairSumSummary> {
    let chars = CharTable::new(table.field());
    let n = table.space.size();
    let nums: Vec<Vec<CycInt>> = (0..n)
        .into_par_iter()
        .map(|m| table.hat_numerators_with(&chars, m))
        .collect();
    let failures: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|m| -> Result<Vec<(usize, usize)>> {
            let mut bad = Vec::new();
            for v in 0..n {
                let lhs = pair_sum_lhs_scaled(&nums[m], &nums[v])?;
                if !lhs.same_value(&pair_sum_rhs_scaled(table, m, v)) {
                    bad.push((m, v));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(PairSumSummary {
        pairs: (n as u64) * (n as u64),
        failures: failures.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub t: u32,
    /// `max_{n != 0} |S_t^(n)|`.
    pub max: f64,
    /// `max * q^{(d+1)/2}`.
    pub ratio: f64,
    pub argmax: usize,
}

/// Largest nonzero-frequency coefficient of a sphere, in float.
pub fn max_nonzero_hat(table: &SphereTable, t: u32) -> Result<DecayReport> {
    if t == 0 {
        return Err(Error::ZeroRadius);
    }
    let t = table.field().check(t as u64)?;
    let ind = GridFn::<Point>::indicator(&table.space, table.sphere(t), Mode::Float)?;
    let h = fast_axis_transform(&ind, TransformKind::Hat)?;
    let vals = h.to_complex_vec();
    let (mut best, mut arg) = (-1.0f64, 0usize);
    for (i, z) in vals.iter().enumerate().skip(1) {
        let a = z.norm();
        if a > best {
            best = a;
            arg = i;
        }
    }
    let q = table.q() as f64;
    Ok(DecayReport {
        t,
        max: best,
        ratio: best * q.powf((table.dim() as f64 + 1.0) / 2.0),
        argmax: arg,
    })
}

/// `W(r) = sum_{||m|| = r} F(m)`.
#[derive(Clone, Debug)]
pub enum NormSpectrum {
    Exact(Vec<CycNum>),
    Float(Vec<Complex64>),
}

impl NormSpectrum {
    pub fn len(&self) -> usize {
        match self {
            NormSpectrum::Exact(v) => v.len(),
            NormSpectrum::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complex(&self, r: u32) -> Complex64 {
        match self {
            NormSpectrum::Exact(v) => v[r as usize].to_complex(),
            NormSpectrum::Float(v) => v[r as usize],
        }
    }

    pub fn exact(&self, r: u32) -> Option<&CycNum> {
        match self {
            NormSpectrum::Exact(v) => Some(&v[r as usize]),
            NormSpectrum::Float(_) => None,
        }
    }
}

pub fn norm_spectrum(f: &GridFn<Dual>) -> NormSpectrum {
    let space = f.space();
    let q = space.q() as usize;
    let p = space.field().p();
    match f.values() {
        Values::Exact { numer, denom_exp } => {
            let mut w = vec![CycNum::zero(p); q];
            for (m, z) in numer.iter().enumerate() {
                if !z.is_zero() {
                    w[space.norm(m) as usize] += z;
                }
            }
            let s = inv_p_pow(p, *denom_exp);
            NormSpectrum::Exact(w.into_iter().map(|z| z.scale(&s)).collect())
        }
        Values::Float(v) => {
            let mut w = vec![Complex64::new(0.0, 0.0); q];
            for (m, z) in v.iter().enumerate() {
                w[space.norm(m) as usize] += z;
            }
            NormSpectrum::Float(w)
        }
    }
}

/// `| |S_t| - q^{d-1} |` for each `t`; at most `q^{d/2}` for even `d`.
pub fn size_deviation(table: &SphereTable) -> Vec<BigInt> {
    let q = BigInt::from(table.q());
    let base = num_traits::pow(q, table.dim() - 1);
    table
        .sizes()
        .iter()
        .map(|&s| {
            let diff = BigInt::from(s) - &base;
            if diff < BigInt::from(0) {
                -diff
            } else {
                diff
            }
        })
        .collect()
}
