use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::verify::rti_triples;
use super::{derive_seed, field_label, ExperimentConfig};
use crate::error::{Error, Result};
use crate::restriction::{
    layer_cake_norm, lemma54_with, lorentz_norm, norm_abs, rti_audit, weak_norm, weak_type_probe,
    Exponent, MeasureSpace,
};
use crate::resultant::random_set;
use crate::sphere::{max_nonzero_hat, SphereTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictSuite {
    Lorentz,
    Rti,
    WeakProbe,
    Lemma54,
}

impl std::fmt::Display for RestrictSuite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RestrictSuite::Lorentz => "lorentz",
            RestrictSuite::Rti => "rti",
            RestrictSuite::WeakProbe => "weak-probe",
            RestrictSuite::Lemma54 => "lemma54",
        })
    }
}

impl std::str::FromStr for RestrictSuite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lorentz" => Ok(RestrictSuite::Lorentz),
            "rti" => Ok(RestrictSuite::Rti),
            "weak-probe" => Ok(RestrictSuite::WeakProbe),
            "lemma54" => Ok(RestrictSuite::Lemma54),
            other => Err(Error::ConfigInvalid(format!("unknown restrict suite {other:?}"))),
        }
    }
}

/// One measured instance. `bound` and `pass` are empty for pure probes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictRow {
    pub instance: String,
    pub suite: RestrictSuite,
    pub q: String,
    pub d: usize,
    pub t: u32,
    /// Set size, or sphere size for function suites.
    pub size: usize,
    pub params: String,
    pub norm: f64,
    pub a0: Option<f64>,
    pub a1: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: f64,
    pub pass: Option<bool>,
}

fn row(instance: String, suite: RestrictSuite, table: &SphereTable, t: u32, size: usize, params: String) -> RestrictRow {
    RestrictRow {
        instance,
        suite,
        q: field_label(table.field()),
        d: table.dim(),
        t,
        size,
        params,
        norm: 0.0,
        a0: None,
        a1: None,
        bound: None,
        ratio: 0.0,
        pass: None,
    }
}

fn within(norm: f64, bound: f64) -> bool {
    norm <= bound + 1e-9 * bound.max(1.0)
}

/// Runs one restriction suite over the configured grid and radii.
pub fn run_restrict(config: &ExperimentConfig) -> Result<Vec<RestrictRow>> {
    config.validate()?;
    let suite = config
        .restrict_suite
        .ok_or_else(|| Error::ConfigInvalid("no restriction suite selected".into()))?;
    let mut rows = Vec::new();
    for (fi, field) in config.field_list()?.iter().enumerate() {
        for &d in &config.dims {
            if suite == RestrictSuite::WeakProbe && (d % 2 == 1 || d < 4) {
                continue;
            }
            let space = config.space(field, d)?;
            let table = SphereTable::new(&space)?;
            let radii: Vec<u32> = if config.radii.is_empty() {
                (1..field.q()).collect()
            } else {
                config.radii.clone()
            };
            for &t in &radii {
                if t == 0 {
                    return Err(Error::ConfigInvalid("radius 0 is not allowed".into()));
                }
                field.check(t as u64).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
                let base = format!("{}-d{d}-t{t}", field_label(field));
                let key = |trial: usize| derive_seed(config.seed, &[fi as u64, d as u64, t as u64, trial as u64]);
                match suite {
                    RestrictSuite::Lorentz => lorentz_rows(config, &table, t, &base, &key, &mut rows)?,
                    RestrictSuite::Rti => {
                        for trial in 0..config.trials {
                            let mut rng = ChaCha8Rng::seed_from_u64(key(trial));
                            let e = random_set(&space, rng.gen_range(1..=space.size()), rng.gen())?;
                            for (i, (r0, r, r1)) in rti_triples(d).into_iter().enumerate() {
                                let rep = rti_audit(&table, &e, t, r0, r1, r)?;
                                let mut x = row(format!("{base}-r{trial}-x{i}"), suite, &table, t, e.len(), format!("({r0},{r},{r1})"));
                                x.norm = rep.norm;
                                x.a0 = Some(rep.a0);
                                x.a1 = Some(rep.a1);
                                x.bound = Some(rep.bound);
                                x.ratio = rep.ratio;
                                x.pass = Some(rep.pass);
                                rows.push(x);
                            }
                        }
                    }
                    RestrictSuite::WeakProbe => {
                        let rep = weak_type_probe(&table, t, key(0))?;
                        for p in rep.rows {
                            let mut x = row(format!("{base}-{}", p.family), suite, &table, t, table.size(t), format!("r0={}", rep.r0));
                            x.norm = p.ratio;
                            x.ratio = p.ratio;
                            rows.push(x);
                        }
                    }
                    RestrictSuite::Lemma54 => {
                        let max = max_nonzero_hat(&table, t)?.max;
                        for trial in 0..config.trials {
                            let mut rng = ChaCha8Rng::seed_from_u64(key(trial));
                            let e = random_set(&space, rng.gen_range(1..=space.size()), rng.gen())?;
                            let rep = lemma54_with(&table, &e, t, max)?;
                            let mut x = row(format!("{base}-r{trial}"), suite, &table, t, e.len(), "L2(S_t)".into());
                            x.norm = rep.lhs;
                            x.bound = Some(rep.rhs);
                            x.ratio = if rep.rhs > 0.0 { rep.lhs / rep.rhs } else { 0.0 };
                            x.pass = Some(rep.pass);
                            rows.push(x);
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn lorentz_rows(
    config: &ExperimentConfig,
    table: &SphereTable,
    t: u32,
    base: &str,
    key: &dyn Fn(usize) -> u64,
    rows: &mut Vec<RestrictRow>,
) -> Result<()> {
    let suite = RestrictSuite::Lorentz;
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(key(trial));
        let f: Vec<f64> = (0..table.size(t)).map(|_| rng.gen_range(0.0..2.0)).collect();
        let sigma = MeasureSpace::Sphere { size: f.len() };
        let mut push = |tag: &str, norm: f64, bound: f64, equal: bool| {
            let mut x = row(format!("{base}-r{trial}-{tag}"), suite, table, t, f.len(), tag.to_string());
            x.norm = norm;
            x.bound = Some(bound);
            x.ratio = if bound > 0.0 { norm / bound } else { 0.0 };
            x.pass = Some(if equal {
                (norm - bound).abs() <= 1e-9 * norm.abs().max(bound.abs()).max(1.0)
            } else {
                within(norm, bound)
            });
            rows.push(x);
        };
        for r in [Exponent::int(1), Exponent::new(4, 3), Exponent::int(2), Exponent::int(3), Exponent::int(4)] {
            push(&format!("layer-cake-{r}"), layer_cake_norm(&f, r.to_f64()), norm_abs(&f, sigma, r)?, true);
        }
        for p in [Exponent::new(4, 3), Exponent::int(2), Exponent::int(3)] {
            let strong = norm_abs(&f, sigma, p)?;
            push(&format!("lorentz-{p}-{p}"), lorentz_norm(&f, p, p)?, strong, true);
            push(&format!("weak-{p}"), weak_norm(&f, p)?, strong, false);
        }
    }
    Ok(())
}
