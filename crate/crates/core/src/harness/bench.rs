use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{derive_seed, field_label, ExperimentConfig};
use crate::error::{Error, Result};
use crate::resultant::{nu_brute_with_cap, nu_fourier_with, random_set};
use crate::sphere::SphereTable;
use crate::transform::{fast_axis_transform, naive_transform, GridFn, Mode, Point, TransformKind};

#[derive(Clone, Debug, Serialize)]
pub struct TransformTiming {
    pub q: String,
    pub d: usize,
    pub naive_ms: f64,
    pub axis_ms: f64,
    pub speedup: f64,
    pub max_diff: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuTiming {
    pub q: String,
    pub d: usize,
    pub k: usize,
    pub size: usize,
    pub brute_ms: f64,
    pub fourier_ms: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub transforms: Vec<TransformTiming>,
    pub nu: Vec<NuTiming>,
}

impl BenchReport {
    pub fn agree(&self) -> bool {
        self.transforms.iter().all(|t| t.agree) && self.nu.iter().all(|n| n.agree)
    }
}

/// Best of several runs, repeating each until at least `floor_ms` elapsed.
fn time_ms<T>(mut f: impl FnMut() -> Result<T>) -> Result<f64> {
    let floor_ms = 20.0;
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        let mut reps = 0u32;
        loop {
            std::hint::black_box(f()?);
            reps += 1;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            if ms >= floor_ms || reps >= 1000 {
                best = best.min(ms / reps as f64);
                break;
            }
        }
    }
    Ok(best)
}

/// Times naive vs axis transforms and brute vs Fourier counting.
/// Agreement is checked first; a timing without agreement is reported as such.
pub fn run_bench(config: &ExperimentConfig) -> Result<BenchReport> {
    config.validate()?;
    if config.mode == Mode::Exact {
        return Err(Error::ExactModeUnsupported);
    }
    let mut transforms = Vec::new();
    let mut nu = Vec::new();
    for (fi, field) in config.field_list()?.iter().enumerate() {
        for &d in &config.dims {
            let space = config.space(field, d)?;
            let n = space.size();
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &[fi as u64, d as u64]));
            let vals: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let f = GridFn::<Point>::from_complex(&space, vals)?;
            let (a, b) = config.install(|| -> Result<_> {
                Ok((naive_transform(&f, TransformKind::Hat)?, fast_axis_transform(&f, TransformKind::Hat)?))
            })??;
            let max_diff = a.max_abs_diff(&b);
            let agree = max_diff <= 1e-9;
            let (naive_ms, axis_ms) = if agree {
                config.install(|| -> Result<_> {
                    Ok((
                        time_ms(|| naive_transform(&f, TransformKind::Hat))?,
                        time_ms(|| fast_axis_transform(&f, TransformKind::Hat))?,
                    ))
                })??
            } else {
                (f64::NAN, f64::NAN)
            };
            transforms.push(TransformTiming {
                q: field_label(field),
                d,
                naive_ms,
                axis_ms,
                speedup: naive_ms / axis_ms,
                max_diff,
                agree,
            });

            let table = SphereTable::new(&space)?;
            for &k in &config.ks {
                // largest size whose brute-force work fits the cap
                let cap = config.caps.brute as f64;
                let size = (cap.powf(1.0 / k as f64).floor() as usize).clamp(1, n);
                let sets = (0..k)
                    .map(|j| random_set(&space, size, derive_seed(config.seed, &[fi as u64, d as u64, k as u64, j as u64])))
                    .collect::<Result<Vec<_>>>()?;
                let brute = match nu_brute_with_cap(&sets, config.caps.brute as u128) {
                    Ok(b) => b,
                    Err(Error::TooLarge { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let fourier = config.install(|| nu_fourier_with(&table, &sets, Mode::Float))??;
                let agree = brute == fourier;
                let (brute_ms, fourier_ms) = if agree {
                    config.install(|| -> Result<_> {
                        Ok((
                            time_ms(|| nu_brute_with_cap(&sets, config.caps.brute as u128))?,
                            time_ms(|| nu_fourier_with(&table, &sets, Mode::Float))?,
                        ))
                    })??
                } else {
                    (f64::NAN, f64::NAN)
                };
                nu.push(NuTiming {
                    q: field_label(field),
                    d,
                    k,
                    size,
                    brute_ms,
                    fourier_ms,
                    agree,
                });
            }
        }
    }
    Ok(BenchReport { transforms, nu })
}
