use num_complex::Complex64;
use serde::Serialize;

use super::PointSet;
use crate::error::{Error, Result};
use crate::field_core::{CycInt, Space};
use crate::sphere::SphereTable;
use crate::transform::{hat, indicator_hat_numerators, Mode};

/// Tuples enumerated one by one up to this product size.
pub const DIRECT_LOOP_CAP: u128 = 1_000_000;
/// Default work cap for [`nu_brute`].
pub const BRUTE_CAP: u128 = 100_000_000;

/// `nu_k(t) = #{(x^1, ..., x^k) in E_1 x ... x E_k : ||x^1 + ... + x^k|| = t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuProfile {
    pub q: u32,
    pub k: usize,
    pub sizes: Vec<usize>,
    pub counts: Vec<u128>,
}

impl NuProfile {
    pub fn get(&self, t: u32) -> u128 {
        self.counts[t as usize]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn product(&self) -> u128 {
        self.sizes.iter().map(|&s| s as u128).product()
    }

    /// `sum_t nu(t) = prod |E_j|`.
    pub fn mass_ok(&self) -> bool {
        self.total() == self.product()
    }

    /// `Delta_k = {t : nu(t) > 0}`.
    pub fn delta(&self) -> Vec<u32> {
        (0..self.q).filter(|&t| self.get(t) > 0).collect()
    }
}

pub(crate) fn common_space(sets: &[PointSet]) -> Result<&Space> {
    let first = sets
        .first()
        .ok_or_else(|| Error::BadParams("need at least one set".into()))?;
    if sets.iter().any(|e| e.space() != first.space()) {
        return Err(Error::DimensionMismatch("sets on different grids".into()));
    }
    Ok(first.space())
}

fn product_size(sets: &[PointSet]) -> u128 {
    sets.iter()
        .map(|e| e.len() as u128)
        .try_fold(1u128, |acc, s| acc.checked_mul(s))
        .unwrap_or(u128::MAX)
}

fn profile(space: &Space, sets: &[PointSet], counts: Vec<u128>) -> NuProfile {
    NuProfile {
        q: space.q(),
        k: sets.len(),
        sizes: sets.iter().map(PointSet::len).collect(),
        counts,
    }
}

pub fn nu_brute(sets: &[PointSet]) -> Result<NuProfile> {
    nu_brute_with_cap(sets, BRUTE_CAP)
}

/// Fourier-free count: a direct loop over tuples for small products, otherwise
/// iterated sumset convolution followed by a norm histogram.
pub fn nu_brute_with_cap(sets: &[PointSet], cap: u128) -> Result<NuProfile> {
    let space = common_space(sets)?;
    let q = space.q() as usize;
    let prod = product_size(sets);
    let mut counts = vec![0u128; q];
    if prod <= DIRECT_LOOP_CAP.min(cap) {
        direct_loop(space, sets, 0, 0, &mut counts);
        return Ok(profile(space, sets, counts));
    }
    let work = space.size() as u128 * sets.iter().map(|e| e.len() as u128).sum::<u128>();
    if work > cap {
        return Err(Error::TooLarge { size: work, cap });
    }
    let mut cur = vec![0u128; space.size()];
    for &i in sets[0].indices() {
        cur[i] = 1;
    }
    for e in &sets[1..] {
        let mut next = vec![0u128; space.size()];
        for (s, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &a in e.indices() {
                next[space.add(s, a)] += c;
            }
        }
        cur = next;
    }
    for (s, &c) in cur.iter().enumerate() {
        counts[space.norm(s) as usize] += c;
    }
    Ok(profile(space, sets, counts))
}

fn direct_loop(space: &Space, sets: &[PointSet], j: usize, partial: usize, counts: &mut [u128]) {
    if j == sets.len() {
        counts[space.norm(partial) as usize] += 1;
        return;
    }
    for &x in sets[j].indices() {
        direct_loop(space, sets, j + 1, space.add(partial, x), counts);
    }
}

/// Dual vectors grouped as `{0}` followed by `{m != 0 : ||m|| = r}` for each `r`.
pub(crate) struct Classes {
    /// Class of each dual vector: 0 for the origin, `1 + r` otherwise.
    pub of: Vec<usize>,
    /// A representative per class, if the class is nonempty.
    pub reps: Vec<Option<usize>>,
}

impl Classes {
    pub fn new(table: &SphereTable) -> Classes {
        let q = table.q() as usize;
        let mut of = vec![0usize; table.space().size()];
        let mut reps = vec![None; q + 1];
        reps[0] = Some(0);
        for (m, slot) in of.iter_mut().enumerate().skip(1) {
            let c = 1 + table.norm(m) as usize;
            *slot = c;
            reps[c].get_or_insert(m);
        }
        Classes { of, reps }
    }
}

fn overflow_guard(space: &Space, k: usize) -> Result<()> {
    // class sums reach q^d * prod|E_j| <= q^{d(k+1)}, and the sphere factor adds q^d
    let bits = (space.size() as f64).log2() * (k as f64 + 2.0);
    if bits > 124.0 {
        return Err(Error::TooLarge {
            size: space.size() as u128,
            cap: 1u128 << (124.0 / (k as f64 + 2.0)) as u32,
        });
    }
    Ok(())
}

/// `nu_k(t) = q^{dk} sum_m S_t^(m) prod_j conj(E_j^(m))`, grouping `m` by sphere class.
pub fn nu_fourier(sets: &[PointSet], mode: Mode) -> Result<NuProfile> {
    let space = common_space(sets)?;
    let table = SphereTable::new(space)?;
    nu_fourier_with(&table, sets, mode)
}

pub fn nu_fourier_with(table: &SphereTable, sets: &[PointSet], mode: Mode) -> Result<NuProfile> {
    let space = common_space(sets)?;
    if space != table.space() {
        return Err(Error::DimensionMismatch("sphere table for another grid".into()));
    }
    match mode {
        Mode::Exact => nu_fourier_exact(table, sets),
        Mode::Float => nu_fourier_float(table, sets).map(|(p, _)| p),
    }
}

fn nu_fourier_exact(table: &SphereTable, sets: &[PointSet]) -> Result<NuProfile> {
    let space = table.space();
    overflow_guard(space, sets.len())?;
    let p = space.field().p();
    let q = table.q() as usize;
    let classes = Classes::new(table);
    let nums: Vec<Vec<CycInt>> = sets
        .iter()
        .map(|e| indicator_hat_numerators(space, e.indices()))
        .collect();
    // C(c) = sum_{m in c} prod_j conj(N_j(m))
    let mut class_sums = vec![CycInt::zero(p); q + 1];
    for m in 0..space.size() {
        let mut prod = nums[0][m].conj();
        for n in &nums[1..] {
            prod = prod.checked_mul(&n[m].conj())?;
        }
        class_sums[classes.of[m]].checked_add_assign(&prod)?;
    }
    let qd = space.size() as i128;
    let mut acc: Vec<CycInt> = vec![CycInt::zero(p); q];
    for (c, rep) in classes.reps.iter().enumerate() {
        let Some(rep) = rep else { continue };
        let sphere_nums = table.hat_numerators(*rep);
        for (t, sn) in sphere_nums.iter().enumerate() {
            acc[t].checked_add_assign(&sn.checked_mul(&class_sums[c])?)?;
        }
    }
    let counts = acc
        .iter()
        .enumerate()
        .map(|(t, z)| {
            let v = z
                .as_integer()
                .ok_or_else(|| Error::Inexact(format!("nu({t}) is not rational")))?;
            if v < 0 || v % qd != 0 {
                return Err(Error::Inexact(format!("nu({t}) = {v}/{qd} is not a count")));
            }
            Ok((v / qd) as u128)
        })
        .collect::<Result<_>>()?;
    Ok(profile(space, sets, counts))
}

/// Float evaluation; also returns the largest distance from an integer before rounding.
pub fn nu_fourier_float(table: &SphereTable, sets: &[PointSet]) -> Result<(NuProfile, f64)> {
    let space = common_space(sets)?;
    let q = table.q() as usize;
    let classes = Classes::new(table);
    let hats: Vec<Vec<Complex64>> = sets
        .iter()
        .map(|e| hat(&e.indicator(Mode::Float)).map(|h| h.to_complex_vec()))
        .collect::<Result<_>>()?;
    let mut class_sums = vec![Complex64::new(0.0, 0.0); q + 1];
    for m in 0..space.size() {
        let prod: Complex64 = hats.iter().map(|h| h[m].conj()).product();
        class_sums[classes.of[m]] += prod;
    }
    let qd = space.size() as f64;
    let scale = qd.powi(sets.len() as i32) / qd;
    let mut vals = vec![Complex64::new(0.0, 0.0); q];
    for (c, rep) in classes.reps.iter().enumerate() {
        let Some(rep) = rep else { continue };
        for (t, sn) in table.hat_numerators(*rep).iter().enumerate() {
            vals[t] += sn.to_cycnum().to_complex() * class_sums[c];
        }
    }
    let mut worst = 0.0f64;
    let mut counts = Vec::with_capacity(q);
    for v in vals {
        let x = v.re * scale;
        let r = x.round();
        worst = worst.max((x - r).abs()).max((v.im * scale).abs());
        if r < 0.0 || worst > 0.25 {
            return Err(Error::Inexact(format!("float count {x} cannot be rounded")));
        }
        counts.push(r as u128);
    }
    Ok((profile(space, sets, counts), worst))
}

/// Brute force when affordable, otherwise the exact Fourier path.
pub fn nu_auto(sets: &[PointSet]) -> Result<NuProfile> {
    match nu_brute(sets) {
        Err(Error::TooLarge { .. }) => nu_fourier(sets, Mode::Exact),
        other => other,
    }
}

/// `Delta_k(E_1, ..., E_k)`.
pub fn delta_set(sets: &[PointSet]) -> Result<Vec<u32>> {
    Ok(nu_auto(sets)?.delta())
}
