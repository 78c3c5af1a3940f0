use rayon::prelude::*;
use serde::Serialize;

use super::{derive_seed, field_label, read_set_file, ExperimentConfig, SetSource};
use crate::error::{Error, Result};
use crate::field_core::{Field, Space};
use crate::resultant::{
    isotropic_line, nu_brute_with_cap, nu_fourier_with, random_set, subfield_sets, theorem31_with,
    NuProfile, PointSet,
};
use crate::sphere::SphereTable;

/// One probed instance. Every row is reproducible from `(seed, instance)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub instance: String,
    pub q: String,
    pub d: usize,
    pub k: usize,
    pub source: String,
    /// Sizes joined by `;`.
    pub sizes: String,
    pub product: String,
    pub delta_size: usize,
    pub nu0: String,
    /// Lower bound for `|Delta_k|` from the Cauchy-Schwarz chain, capped at `q`.
    pub bound: f64,
    /// `|Delta_k| / q`.
    pub ratio: f64,
    /// Whether the product meets the counting hypothesis.
    pub hypothesis: bool,
}

/// Smallest sampled size whose median `|Delta_k|` reaches `0.9 q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub q: String,
    pub d: usize,
    pub k: usize,
    pub size: Option<usize>,
    pub product: Option<String>,
    /// `log_q` of the product.
    pub gamma: Option<f64>,
    /// Median `|Delta_k|` at each sampled size, `size:median` joined by `;`.
    pub curve: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub thresholds: Vec<ThresholdRow>,
}

/// `round(q^{dj/8})` for `j = 0..=8`, deduplicated.
pub(crate) fn auto_sizes(space: &Space) -> Vec<usize> {
    let n = space.size() as f64;
    let mut s: Vec<usize> = (0..=8)
        .map(|j| n.powf(j as f64 / 8.0).round().clamp(1.0, n) as usize)
        .collect();
    s.dedup();
    s
}

struct Job {
    instance: String,
    source: String,
    group: usize,
    size: Option<usize>,
    sets: Vec<PointSet>,
}

fn count(config: &ExperimentConfig, table: &SphereTable, sets: &[PointSet]) -> Result<NuProfile> {
    match nu_brute_with_cap(sets, config.caps.brute as u128) {
        Err(Error::TooLarge { .. }) => nu_fourier_with(table, sets, config.mode),
        other => other,
    }
}

fn structured(field: &Field, space: &Space, d: usize, k: usize, name: &str) -> Result<Option<Vec<PointSet>>> {
    Ok(match name {
        "full" => Some(vec![PointSet::full(space); k]),
        "subfield" if field.n() == 2 => Some(subfield_sets(field.p(), d, k)?),
        "isotropic-line" if d == 2 && field.sqrt_minus_one().is_some() => {
            Some(vec![isotropic_line(field, d)?; k])
        }
        _ => None,
    })
}

/// Sweeps random-set sizes per `(q, d, k)` and adds structured instances.
pub fn run_probe(config: &ExperimentConfig) -> Result<ProbeReport> {
    config.validate()?;
    let fields = config.field_list()?;
    let mut jobs = Vec::new();
    let mut groups = Vec::new();
    let mut tables = Vec::new();
    for (fi, field) in fields.iter().enumerate() {
        for &d in &config.dims {
            let space = config.space(field, d)?;
            let ti = tables.len();
            tables.push(SphereTable::new(&space)?);
            for &k in &config.ks {
                let group = groups.len();
                groups.push((ti, field_label(field), d, k));
                let base = format!("{}-d{d}-k{k}", field_label(field));
                match &config.source {
                    SetSource::Random { sizes } => {
                        let sizes = if sizes.is_empty() { auto_sizes(&space) } else { sizes.clone() };
                        for &size in &sizes {
                            for trial in 0..config.trials {
                                let seed = derive_seed(config.seed, &[fi as u64, d as u64, k as u64, size as u64, trial as u64]);
                                let sets = (0..k)
                                    .map(|j| random_set(&space, size, derive_seed(seed, &[j as u64])))
                                    .collect::<Result<_>>()?;
                                jobs.push(Job {
                                    instance: format!("{base}-s{size}-r{trial}"),
                                    source: "random".into(),
                                    group,
                                    size: Some(size),
                                    sets,
                                });
                            }
                        }
                        for name in ["subfield", "isotropic-line", "full"] {
                            if let Some(sets) = structured(field, &space, d, k, name)? {
                                jobs.push(Job { instance: format!("{base}-{name}"), source: name.into(), group, size: None, sets });
                            }
                        }
                    }
                    SetSource::Construction { name } => {
                        if let Some(sets) = structured(field, &space, d, k, name)? {
                            jobs.push(Job { instance: format!("{base}-{name}"), source: name.clone(), group, size: None, sets });
                        }
                    }
                    SetSource::File { path } => {
                        let (fspace, sets) = read_set_file(path)?;
                        if fspace != space {
                            continue;
                        }
                        let sets = match sets.len() {
                            1 => vec![sets[0].clone(); k],
                            m if m == k => sets,
                            _ => continue,
                        };
                        jobs.push(Job { instance: format!("{base}-file"), source: "file".into(), group, size: None, sets });
                    }
                }
            }
        }
    }

    let computed: Vec<ProbeRow> = config.install(|| {
        jobs.par_iter()
            .map(|job| -> Result<ProbeRow> {
                let (ti, ref q, d, k) = groups[job.group];
                let table = &tables[ti];
                let nu = count(config, table, &job.sets)?;
                let r = theorem31_with(table, &job.sets, &nu)?;
                Ok(ProbeRow {
                    instance: job.instance.clone(),
                    q: q.clone(),
                    d,
                    k,
                    source: job.source.clone(),
                    sizes: nu.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";"),
                    product: nu.product().to_string(),
                    delta_size: r.delta_size,
                    nu0: r.nu0.to_string(),
                    bound: r.bound,
                    ratio: r.delta_size as f64 / table.q() as f64,
                    hypothesis: r.hypothesis,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut thresholds = Vec::new();
    if matches!(config.source, SetSource::Random { .. }) {
        for (g, (ti, q, d, k)) in groups.iter().enumerate() {
            let qf = tables[*ti].q() as f64;
            let mut by_size: Vec<(usize, Vec<usize>)> = Vec::new();
            for (job, row) in jobs.iter().zip(&computed) {
                if job.group != g {
                    continue;
                }
                if let Some(s) = job.size {
                    match by_size.iter_mut().find(|(x, _)| *x == s) {
                        Some((_, v)) => v.push(row.delta_size),
                        None => by_size.push((s, vec![row.delta_size])),
                    }
                }
            }
            by_size.sort_by_key(|(s, _)| *s);
            let medians: Vec<(usize, f64)> = by_size.into_iter().map(|(s, v)| (s, median(v))).collect();
            let hit = medians.iter().find(|(_, m)| *m >= 0.9 * qf).map(|(s, _)| *s);
            let product = hit.map(|s| (s as u128).pow(*k as u32));
            thresholds.push(ThresholdRow {
                q: q.clone(),
                d: *d,
                k: *k,
                size: hit,
                product: product.map(|p| p.to_string()),
                gamma: product.map(|p| (p as f64).ln() / qf.ln()),
                curve: medians.iter().map(|(s, m)| format!("{s}:{m}")).collect::<Vec<_>>().join(";"),
            });
        }
    }
    Ok(ProbeReport { rows: computed, thresholds })
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}
