//! Normalized and unnormalized Fourier transforms on `F_q^d`.
//!
//! `hat`: `f^(m) = q^{-d} sum_x f(x) chi(-x.m)` (point -> dual).
//! `tilde`: `g~(x) = sum_m g(m) chi(-x.m)` (dual -> point).
//! `inverse`: `f(x) = sum_m f^(m) chi(m.x)` (dual -> point).

mod gridfn;
mod kernels;
mod ops;

use crate::error::{Error, Result};
use crate::field_core::{CycInt, Space};

pub use gridfn::{Dual, GridFn, Mode, Point, Side, Values};
pub use kernels::Sign;
pub use ops::{
    convolve, convolve_direct, gen_holder_check, lemma21_check, plancherel_defect,
    plancherel_sides,
};

pub(crate) use gridfn::p_pow;

/// Float-mode evaluation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Direct `O(q^{2d})` summation.
    Naive,
    /// Per-axis length-`q` passes, `O(d q^{d+1})`.
    Axis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Hat,
    Tilde,
    Inverse,
}

impl TransformKind {
    fn source_side(self) -> &'static str {
        match self {
            TransformKind::Hat => Point::NAME,
            TransformKind::Tilde | TransformKind::Inverse => Dual::NAME,
        }
    }

    fn sign(self) -> Sign {
        match self {
            TransformKind::Hat | TransformKind::Tilde => Sign::Minus,
            TransformKind::Inverse => Sign::Plus,
        }
    }

    /// Power of `p` the raw character sum is divided by.
    fn denom_exp(self, space: &Space) -> u32 {
        match self {
            TransformKind::Hat => space.field().n() * space.dim() as u32,
            _ => 0,
        }
    }
}

fn run<S: Side>(f: &GridFn<S>, kind: TransformKind, engine: Engine) -> Result<GridFn<S::Flip>> {
    if S::NAME != kind.source_side() {
        return Err(Error::SideMismatch {
            expected: kind.source_side(),
            found: S::NAME,
        });
    }
    let space = f.space();
    let shift = kind.denom_exp(space);
    let values = match f.values() {
        Values::Exact { numer, denom_exp } => {
            if engine == Engine::Axis {
                return Err(Error::ExactModeUnsupported);
            }
            Values::Exact {
                numer: kernels::char_sum_exact(space, numer, kind.sign()),
                denom_exp: denom_exp + shift,
            }
        }
        Values::Float(v) => {
            let mut out = match engine {
                Engine::Naive => kernels::char_sum_float(space, v, kind.sign()),
                Engine::Axis => kernels::char_sum_axis(space, v, kind.sign()),
            };
            if shift > 0 {
                let s = (space.field().p() as f64).powi(shift as i32);
                for z in out.iter_mut() {
                    *z /= s;
                }
            }
            Values::Float(out)
        }
    };
    GridFn::new(space, values)
}

fn default_engine<S: Side>(f: &GridFn<S>) -> Engine {
    match f.mode() {
        Mode::Exact => Engine::Naive,
        Mode::Float => Engine::Axis,
    }
}

/// Normalized transform. Exact inputs use direct summation, float inputs the axis path.
pub fn hat(f: &GridFn<Point>) -> Result<GridFn<Dual>> {
    run(f, TransformKind::Hat, default_engine(f))
}

/// Unnormalized transform of a dual-side function.
pub fn tilde(g: &GridFn<Dual>) -> Result<GridFn<Point>> {
    run(g, TransformKind::Tilde, default_engine(g))
}

pub fn inverse(fh: &GridFn<Dual>) -> Result<GridFn<Point>> {
    run(fh, TransformKind::Inverse, default_engine(fh))
}

pub fn hat_with(f: &GridFn<Point>, engine: Engine) -> Result<GridFn<Dual>> {
    run(f, TransformKind::Hat, engine)
}

pub fn tilde_with(g: &GridFn<Dual>, engine: Engine) -> Result<GridFn<Point>> {
    run(g, TransformKind::Tilde, engine)
}

pub fn inverse_with(fh: &GridFn<Dual>, engine: Engine) -> Result<GridFn<Point>> {
    run(fh, TransformKind::Inverse, engine)
}

/// Axis-factorized transform; float mode only.
pub fn fast_axis_transform<S: Side>(f: &GridFn<S>, kind: TransformKind) -> Result<GridFn<S::Flip>> {
    run(f, kind, Engine::Axis)
}

/// Naive transform in either mode; the oracle for [`fast_axis_transform`].
pub fn naive_transform<S: Side>(f: &GridFn<S>, kind: TransformKind) -> Result<GridFn<S::Flip>> {
    run(f, kind, Engine::Naive)
}

/// Numerators `sum_{x in E} zeta^{-e(x.m)}` for every `m`, so that
/// `E^(m) = q^{-d} * numer[m]`. Exact, integer arithmetic.
pub fn indicator_hat_numerators(space: &Space, support: &[usize]) -> Vec<CycInt> {
    kernels::char_sum_support(space, support, Sign::Minus)
}

/// A grid function whose side is only known at run time.
#[derive(Clone, Debug)]
pub enum DynGridFn {
    Point(GridFn<Point>),
    Dual(GridFn<Dual>),
}

impl DynGridFn {
    pub fn side(&self) -> &'static str {
        match self {
            DynGridFn::Point(_) => Point::NAME,
            DynGridFn::Dual(_) => Dual::NAME,
        }
    }

    pub fn hat(&self) -> Result<DynGridFn> {
        match self {
            DynGridFn::Point(f) => Ok(DynGridFn::Dual(hat(f)?)),
            DynGridFn::Dual(_) => Err(Error::SideMismatch {
                expected: Point::NAME,
                found: Dual::NAME,
            }),
        }
    }

    pub fn tilde(&self) -> Result<DynGridFn> {
        match self {
            DynGridFn::Dual(g) => Ok(DynGridFn::Point(tilde(g)?)),
            DynGridFn::Point(_) => Err(Error::SideMismatch {
                expected: Dual::NAME,
                found: Point::NAME,
            }),
        }
    }

    pub fn inverse(&self) -> Result<DynGridFn> {
        match self {
            DynGridFn::Dual(g) => Ok(DynGridFn::Point(inverse(g)?)),
            DynGridFn::Point(_) => Err(Error::SideMismatch {
                expected: Dual::NAME,
                found: Point::NAME,
            }),
        }
    }

    pub fn to_complex_vec(&self) -> Vec<num_complex::Complex64> {
        match self {
            DynGridFn::Point(f) => f.to_complex_vec(),
            DynGridFn::Dual(f) => f.to_complex_vec(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            DynGridFn::Point(f) => f.mode(),
            DynGridFn::Dual(f) => f.mode(),
        }
    }

    pub fn space(&self) -> &Space {
        match self {
            DynGridFn::Point(f) => f.space(),
            DynGridFn::Dual(f) => f.space(),
        }
    }
}

#[cfg(test)]
mod tests;
