use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_core::{CycNum, Space};

/// Which of the two measure conventions a function lives on.
pub trait Side: Copy + Send + Sync + fmt::Debug + 'static {
    const NAME: &'static str;
    type Flip: Side;
}

/// Point space `(F_q^d, dx)`.
#[derive(Clone, Copy, Debug)]
pub struct Point;

/// Dual space `(F_q^d, dm)`.
#[derive(Clone, Copy, Debug)]
pub struct Dual;

impl Side for Point {
    const NAME: &'static str = "point";
    type Flip = Dual;
}

impl Side for Dual {
    const NAME: &'static str = "dual";
    type Flip = Point;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[default]
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::ConfigInvalid(format!("unknown mode {other:?}"))),
        }
    }
}

/// Exact values are `numer[i] / p^denom_exp`.
#[derive(Clone, Debug)]
pub enum Values {
    Exact { numer: Vec<CycNum>, denom_exp: u32 },
    Float(Vec<Complex64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact { numer, .. } => numer.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            Values::Exact { .. } => Mode::Exact,
            Values::Float(_) => Mode::Float,
        }
    }
}

/// A function on `F_q^d`, tagged with its side.
#[derive(Clone, Debug)]
pub struct GridFn<S: Side> {
    space: Space,
    values: Values,
    side: PhantomData<S>,
}

pub(crate) fn p_pow(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

impl<S: Side> GridFn<S> {
    pub fn new(space: &Space, values: Values) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a grid of size {}",
                values.len(),
                space.size()
            )));
        }
        if let Values::Exact { numer, .. } = &values {
            if numer.iter().any(|z| z.order() != space.field().p()) {
                return Err(Error::DimensionMismatch(
                    "cyclotomic order differs from the characteristic".into(),
                ));
            }
        }
        Ok(GridFn {
            space: space.clone(),
            values,
            side: PhantomData,
        })
    }

    pub fn zero(space: &Space, mode: Mode) -> Self {
        let p = space.field().p();
        let values = match mode {
            Mode::Exact => Values::Exact {
                numer: vec![CycNum::zero(p); space.size()],
                denom_exp: 0,
            },
            Mode::Float => Values::Float(vec![Complex64::zero(); space.size()]),
        };
        GridFn {
            space: space.clone(),
            values,
            side: PhantomData,
        }
    }

    /// `1_E` for the listed indices.
    pub fn indicator(space: &Space, idx: &[usize], mode: Mode) -> Result<Self> {
        let mut f = Self::zero(space, mode);
        let p = space.field().p();
        for &i in idx {
            if i >= space.size() {
                return Err(Error::DimensionMismatch(format!(
                    "index {i} outside grid of size {}",
                    space.size()
                )));
            }
            match &mut f.values {
                Values::Exact { numer, .. } => numer[i] = CycNum::one(p),
                Values::Float(v) => v[i] = Complex64::one(),
            }
        }
        Ok(f)
    }

    pub fn delta(space: &Space, i: usize, mode: Mode) -> Result<Self> {
        Self::indicator(space, &[i], mode)
    }

    pub fn constant(space: &Space, c: i64, mode: Mode) -> Self {
        let p = space.field().p();
        let values = match mode {
            Mode::Exact => Values::Exact {
                numer: vec![CycNum::from_int(p, c); space.size()],
                denom_exp: 0,
            },
            Mode::Float => Values::Float(vec![Complex64::new(c as f64, 0.0); space.size()]),
        };
        GridFn {
            space: space.clone(),
            values,
            side: PhantomData,
        }
    }

    pub fn from_rationals(space: &Space, vals: Vec<BigRational>) -> Result<Self> {
        let p = space.field().p();
        let numer = vals.into_iter().map(|r| CycNum::from_rational(p, r)).collect();
        Self::new(space, Values::Exact { numer, denom_exp: 0 })
    }

    pub fn from_complex(space: &Space, vals: Vec<Complex64>) -> Result<Self> {
        Self::new(space, Values::Float(vals))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn side(&self) -> &'static str {
        S::NAME
    }

    pub fn mode(&self) -> Mode {
        self.values.mode()
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn into_values(self) -> Values {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact value at `i`, or `None` in float mode.
    pub fn exact_value(&self, i: usize) -> Option<CycNum> {
        match &self.values {
            Values::Exact { numer, denom_exp } => {
                if *denom_exp == 0 {
                    Some(numer[i].clone())
                } else {
                    let den = BigRational::from_integer(p_pow(self.space.field().p(), *denom_exp));
                    Some(numer[i].scale(&den.recip()))
                }
            }
            Values::Float(_) => None,
        }
    }

    pub fn exact_values(&self) -> Option<Vec<CycNum>> {
        match &self.values {
            Values::Exact { numer, denom_exp } => {
                let den = BigRational::from_integer(p_pow(self.space.field().p(), *denom_exp));
                let inv = den.recip();
                Some(numer.iter().map(|z| z.scale(&inv)).collect())
            }
            Values::Float(_) => None,
        }
    }

    pub fn complex_value(&self, i: usize) -> Complex64 {
        match &self.values {
            Values::Exact { numer, denom_exp } => {
                numer[i].to_complex() / (self.space.field().p() as f64).powi(*denom_exp as i32)
            }
            Values::Float(v) => v[i],
        }
    }

    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        match &self.values {
            Values::Float(v) => v.clone(),
            Values::Exact { .. } => (0..self.len()).map(|i| self.complex_value(i)).collect(),
        }
    }

    pub fn to_float(&self) -> GridFn<S> {
        GridFn {
            space: self.space.clone(),
            values: Values::Float(self.to_complex_vec()),
            side: PhantomData,
        }
    }

    /// Multiply every value by `p^k` (k may be negative).
    pub fn scale_p_pow(&self, k: i64) -> GridFn<S> {
        let p = self.space.field().p();
        let values = match &self.values {
            Values::Exact { numer, denom_exp } => {
                let e = *denom_exp as i64 - k;
                if e >= 0 {
                    Values::Exact {
                        numer: numer.clone(),
                        denom_exp: e as u32,
                    }
                } else {
                    let m = BigRational::from_integer(p_pow(p, (-e) as u32));
                    Values::Exact {
                        numer: numer.iter().map(|z| z.scale(&m)).collect(),
                        denom_exp: 0,
                    }
                }
            }
            Values::Float(v) => {
                let m = (p as f64).powi(k as i32);
                Values::Float(v.iter().map(|z| z * m).collect())
            }
        };
        GridFn {
            space: self.space.clone(),
            values,
            side: PhantomData,
        }
    }

    fn check_compatible(&self, other: &GridFn<S>) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "functions live on different grids".into(),
            ));
        }
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch);
        }
        Ok(())
    }

    pub fn mul_pointwise(&self, other: &GridFn<S>) -> Result<GridFn<S>> {
        self.check_compatible(other)?;
        let values = match (&self.values, &other.values) {
            (
                Values::Exact { numer: a, denom_exp: da },
                Values::Exact { numer: b, denom_exp: db },
            ) => Values::Exact {
                numer: a.iter().zip(b).map(|(x, y)| x * y).collect(),
                denom_exp: da + db,
            },
            (Values::Float(a), Values::Float(b)) => {
                Values::Float(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => unreachable!(),
        };
        Ok(GridFn {
            space: self.space.clone(),
            values,
            side: PhantomData,
        })
    }

    pub fn add(&self, other: &GridFn<S>) -> Result<GridFn<S>> {
        self.check_compatible(other)?;
        let values = match (&self.values, &other.values) {
            (
                Values::Exact { numer: a, denom_exp: da },
                Values::Exact { numer: b, denom_exp: db },
            ) => {
                let p = self.space.field().p();
                let e = (*da).max(*db);
                let sa = BigRational::from_integer(p_pow(p, e - da));
                let sb = BigRational::from_integer(p_pow(p, e - db));
                Values::Exact {
                    numer: a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| &x.scale(&sa) + &y.scale(&sb))
                        .collect(),
                    denom_exp: e,
                }
            }
            (Values::Float(a), Values::Float(b)) => {
                Values::Float(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!(),
        };
        Ok(GridFn {
            space: self.space.clone(),
            values,
            side: PhantomData,
        })
    }

    /// Exact equality of values; `false` if either side is in float mode.
    pub fn exact_eq(&self, other: &GridFn<S>) -> bool {
        match (self.exact_values(), other.exact_values()) {
            (Some(a), Some(b)) => self.space == other.space && a == b,
            _ => false,
        }
    }

    pub fn max_abs_diff(&self, other: &GridFn<S>) -> f64 {
        (0..self.len().min(other.len()))
            .map(|i| (self.complex_value(i) - other.complex_value(i)).norm())
            .fold(0.0, f64::max)
    }

    /// Retag the same values onto the other side, for sets used on both sides at once.
    pub fn reinterpret<T: Side>(self) -> GridFn<T> {
        GridFn {
            space: self.space,
            values: self.values,
            side: PhantomData,
        }
    }
}
