use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::nu::{common_space, nu_fourier_with};
use super::{NuProfile, PointSet};
use crate::error::Result;
use crate::field_core::{gauss_sum, CycInt, CycNum, Space};
use crate::sphere::SphereTable;
use crate::transform::{hat, indicator_hat_numerators, Mode};

/// A claim-side quantity: exact when it is rational, otherwise its float value.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(BigRational),
    Approx(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Quantity::Approx(x) => *x,
        }
    }

    fn from_cyc(z: &CycNum) -> Quantity {
        match z.as_rational() {
            Some(r) => Quantity::Exact(r.clone()),
            None => Quantity::Approx(z.to_complex().re),
        }
    }

    /// `self <= other`, exactly when both are exact.
    pub fn le(&self, other: &Quantity) -> bool {
        match (self, other) {
            (Quantity::Exact(a), Quantity::Exact(b)) => a <= b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                a <= b + 1e-9 * b.abs().max(1.0)
            }
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Exact(r) => write!(f, "{r}"),
            Quantity::Approx(x) => write!(f, "~{x}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(r) => s.serialize_str(&r.to_string()),
            Quantity::Approx(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim: u8,
    /// Whether the claim's size hypothesis holds; the claim is only asserted then.
    pub hypothesis: bool,
    pub lhs: Quantity,
    pub rhs: Quantity,
    /// The claim's main inequality in its stated orientation.
    pub holds: bool,
    /// Intermediate steps of the argument, checked exactly.
    pub checks: Vec<SubCheck>,
}

impl ClaimReport {
    pub fn pass(&self) -> bool {
        self.holds && self.checks.iter().all(|c| c.holds)
    }

    pub fn violation(&self) -> bool {
        self.hypothesis && !self.pass()
    }
}

fn int(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn q_pow(q: u32, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// `x <= c + q^{two_a / 2} P^{(k-1)/k}`, decided by raising to the power `2k`.
fn below_root_bound(x: &BigRational, c: &BigRational, q: u32, two_a: i64, prod: &BigRational, k: usize) -> bool {
    let diff = x - c;
    if !diff.is_positive() {
        return true;
    }
    let lhs = num_traits::pow(diff, 2 * k);
    let rhs = q_pow(q, two_a * k as i64) * num_traits::pow(prod.clone(), 2 * (k - 1));
    lhs <= rhs
}

/// Everything the claims need, computed once per instance.
pub struct ClaimData {
    space: Space,
    k: usize,
    d: usize,
    prod: BigRational,
    nu: NuProfile,
    /// `W'(r) = sum_{||v|| = r} prod_j N_j(v)` where `E_j^(v) = q^{-d} N_j(v)`.
    w: Vec<CycNum>,
    /// `sum_v prod_j N_j(v)`.
    total: CycNum,
}

impl ClaimData {
    pub fn new(sets: &[PointSet]) -> Result<ClaimData> {
        let space = common_space(sets)?.clone();
        let table = SphereTable::new(&space)?;
        Self::with_table(&table, sets)
    }

    pub fn with_table(table: &SphereTable, sets: &[PointSet]) -> Result<ClaimData> {
        let space = common_space(sets)?.clone();
        let nu = nu_fourier_with(table, sets, Mode::Exact)?;
        let p = space.field().p();
        let q = space.q() as usize;
        let nums: Vec<Vec<CycInt>> = sets
            .iter()
            .map(|e| indicator_hat_numerators(&space, e.indices()))
            .collect();
        let mut w = vec![CycInt::zero(p); q];
        for v in 0..space.size() {
            let mut prod = nums[0][v].clone();
            for n in &nums[1..] {
                prod = prod.checked_mul(&n[v])?;
            }
            w[table.norm(v) as usize].checked_add_assign(&prod)?;
        }
        let w: Vec<CycNum> = w.iter().map(CycInt::to_cycnum).collect();
        let mut total = CycNum::zero(p);
        for z in &w {
            total += z;
        }
        Ok(ClaimData {
            prod: int(nu.product()),
            d: space.dim(),
            k: sets.len(),
            space,
            nu,
            w,
            total,
        })
    }

    pub fn nu(&self) -> &NuProfile {
        &self.nu
    }

    fn q(&self) -> u32 {
        self.space.q()
    }

    fn qd_exp(&self) -> i64 {
        (self.space.field().n() as usize * self.d) as i64
    }

    fn nu0(&self) -> BigRational {
        int(self.nu.get(0))
    }

    fn even(&self) -> bool {
        self.d % 2 == 0
    }

    /// `q^d` as a rational power of `q = p^n`, expressed through `p`.
    fn inv_qd(&self, extra: i64) -> BigRational {
        let p = self.space.field().p();
        q_pow(p, -(self.qd_exp() + extra * self.space.field().n() as i64))
    }

    /// `(A, B)` with `nu(0) = A + B`, even `d` only.
    fn a_b(&self) -> (CycNum, CycNum) {
        let p = self.space.field().p();
        let gd = gauss_sum(self.space.field()).pow(self.d as u32);
        let q = BigRational::from_integer(self.q().into());
        let a = &CycNum::from_rational(p, &self.prod / &q)
            - &(&gd * &self.total.conj()).scale(&self.inv_qd(1));
        let b = (&gd * &self.w[0].conj()).scale(&self.inv_qd(0));
        (a, b)
    }

    /// `(prod - nu(0))^2 >= prod^2 / 9` when `prod >= 3^k q^{dk/2}`.
    pub fn claim1(&self) -> ClaimReport {
        let k = self.k;
        let q = self.q();
        let prod = &self.prod;
        let nu0 = self.nu0();
        let hyp_rhs = q_pow(9, k as i64) * q_pow(q, (self.d * k) as i64);
        let hypothesis = self.even() && prod * prod >= hyp_rhs;
        let lhs = num_traits::pow(prod - &nu0, 2);
        let rhs = prod * prod / int(9);
        let mut checks = Vec::new();
        if self.even() {
            let c = prod / int(q as u128);
            checks.push(SubCheck {
                name: "nu0 <= P/q + q^{d/2} P^{(k-1)/k}".into(),
                holds: below_root_bound(&nu0, &c, q, self.d as i64, prod, k),
            });
        }
        ClaimReport {
            claim: 1,
            hypothesis,
            holds: lhs >= rhs,
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            checks,
        }
    }

    /// `sum_t nu(t)^2 <= P^2/q + q^{2dk-d} sum_r |W(r)|^2`, unconditional.
    pub fn claim2(&self) -> ClaimReport {
        let p = self.space.field().p();
        let q = int(self.q() as u128);
        let lhs: BigRational = self.nu.counts.iter().map(|&c| int(c) * int(c)).sum();
        let mut wsq = CycNum::zero(p);
        for z in &self.w {
            wsq += &z.norm_sqr();
        }
        let wterm = wsq.scale(&self.inv_qd(0));
        let base = &self.prod * &self.prod / &q;
        let rhs = &CycNum::from_rational(p, base) + &wterm;
        let correction = self.total.norm_sqr().scale(&self.inv_qd(1));
        let identity = &rhs - &correction;
        let rhs_q = Quantity::from_cyc(&rhs);
        let lhs_q = Quantity::Exact(lhs.clone());
        ClaimReport {
            claim: 2,
            hypothesis: true,
            holds: lhs_q.le(&rhs_q),
            checks: vec![
                SubCheck {
                    name: "rhs is rational".into(),
                    holds: matches!(rhs_q, Quantity::Exact(_)),
                },
                SubCheck {
                    name: "sum nu^2 = P^2/q + q^{2dk-d} sum|W|^2 - q^{2dk-d-1}|sum W|^2".into(),
                    holds: identity == CycNum::from_rational(p, lhs),
                },
            ],
            lhs: lhs_q,
            rhs: rhs_q,
        }
    }

    /// `q^{2dk-d} |W(0)|^2 - nu(0)^2 <= 4 P^2 / q` when `prod >= q^{dk/2}`.
    pub fn claim3(&self) -> ClaimReport {
        let p = self.space.field().p();
        let k = self.k;
        let q = self.q();
        let prod = &self.prod;
        let nu0 = self.nu0();
        let hypothesis = self.even() && prod * prod >= q_pow(q, (self.d * k) as i64);
        let w0 = self.w[0].norm_sqr().scale(&self.inv_qd(0));
        let lhs = &w0 - &CycNum::from_rational(p, &nu0 * &nu0);
        let rhs = int(4) * prod * prod / int(q as u128);
        let mut checks = Vec::new();
        if self.even() {
            let (a, b) = self.a_b();
            checks.push(SubCheck {
                name: "A + B = nu0".into(),
                holds: &a + &b == CycNum::from_rational(p, nu0.clone()),
            });
            match (a.as_rational(), b.as_rational()) {
                (Some(a), Some(b)) => {
                    let c = prod / int(q as u128);
                    checks.push(SubCheck {
                        name: "|A| <= P/q + q^{d/2-1} P^{(k-1)/k}".into(),
                        holds: below_root_bound(&a.abs(), &c, q, self.d as i64 - 2, prod, k),
                    });
                    checks.push(SubCheck {
                        name: "|B| <= q^{d/2} P^{(k-1)/k}".into(),
                        holds: below_root_bound(&b.abs(), &BigRational::zero(), q, self.d as i64, prod, k),
                    });
                }
                _ => checks.push(SubCheck {
                    name: "A, B rational".into(),
                    holds: false,
                }),
            }
        }
        let lhs_q = Quantity::from_cyc(&lhs);
        let rhs_q = Quantity::Exact(rhs);
        ClaimReport {
            claim: 3,
            hypothesis,
            holds: lhs_q.le(&rhs_q),
            lhs: lhs_q,
            rhs: rhs_q,
            checks,
        }
    }
}

pub fn claim1_check(sets: &[PointSet]) -> Result<ClaimReport> {
    Ok(ClaimData::new(sets)?.claim1())
}

pub fn claim2_check(sets: &[PointSet]) -> Result<ClaimReport> {
    Ok(ClaimData::new(sets)?.claim2())
}

pub fn claim3_check(sets: &[PointSet]) -> Result<ClaimReport> {
    Ok(ClaimData::new(sets)?.claim3())
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem31Report {
    pub delta_size: usize,
    pub nu0: u128,
    pub product: u128,
    /// `|Delta| * sum_{t != 0} nu(t)^2`.
    pub cs_lhs: String,
    /// `(prod - nu(0))^2`.
    pub cs_rhs: String,
    pub cs_holds: bool,
    /// `prod >= 3^k q^{dk/2}`.
    pub hypothesis: bool,
    pub bound: f64,
    /// `|Delta| / bound`.
    pub ratio: f64,
}

/// Cauchy-Schwarz lower bound for `|Delta_k|` and the final displayed bound.
pub fn theorem31_chain(sets: &[PointSet], nu: &NuProfile) -> Result<Theorem31Report> {
    let space = common_space(sets)?;
    let table = SphereTable::new(space)?;
    theorem31_with(&table, sets, nu)
}

pub fn theorem31_with(table: &SphereTable, sets: &[PointSet], nu: &NuProfile) -> Result<Theorem31Report> {
    let space = common_space(sets)?;
    let q = space.q();
    let k = sets.len();
    let d = space.dim();
    let delta = nu.delta();
    let prod = nu.product();
    let sq: BigInt = nu.counts[1..].iter().map(|&c| BigInt::from(c) * BigInt::from(c)).sum();
    let lhs = sq * BigInt::from(delta.len());
    let rhs = num_traits::pow(BigInt::from(prod) - BigInt::from(nu.get(0)), 2);
    let hyp = int(prod) * int(prod) >= q_pow(9, k as i64) * q_pow(q, (d * k) as i64);
    let hats: Vec<Vec<f64>> = sets
        .iter()
        .map(|e| hat(&e.indicator(Mode::Float)).map(|h| h.to_complex_vec().iter().map(|z| z.norm()).collect()))
        .collect::<Result<_>>()?;
    let kf = k as f64;
    let mut worst = 0.0f64;
    for r in 1..q {
        let val: f64 = hats
            .iter()
            .map(|h| {
                table
                    .sphere(r)
                    .iter()
                    .map(|&v| h[v].powf(kf))
                    .sum::<f64>()
                    .powf(1.0 / kf)
            })
            .product();
        worst = worst.max(val);
    }
    let qf = q as f64;
    let bound = if worst > 0.0 {
        let b = (prod as f64).powf((kf + 1.0) / kf) / ((space.size() as f64).powf(kf) * worst);
        b.min(qf)
    } else {
        qf
    };
    Ok(Theorem31Report {
        delta_size: delta.len(),
        nu0: nu.get(0),
        product: prod,
        cs_holds: lhs >= rhs,
        cs_lhs: lhs.to_string(),
        cs_rhs: rhs.to_string(),
        hypothesis: hyp,
        bound,
        ratio: delta.len() as f64 / bound,
    })
}
