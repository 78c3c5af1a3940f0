//! Configuration, seeding, sweep orchestration and report persistence.

mod bench;
mod io;
mod probe;
mod restrict;
mod verify;


use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_core::{Field, Space, DEFAULT_FIELD_CAP, DEFAULT_GRID_CAP};
use crate::resultant::BRUTE_CAP;
use crate::transform::Mode;

pub use bench::{run_bench, BenchReport, NuTiming, TransformTiming};
pub use io::{csv_bytes, read_set_file, write_csv, write_json, write_set_file, SetFile};
pub use probe::{run_probe, ProbeReport, ProbeRow, ThresholdRow};
pub use restrict::{run_restrict, RestrictRow, RestrictSuite};
pub use verify::{
    run_nu, run_verify, run_verify_spheres, run_verify_with, NuReport, SphereRow, SuiteResult, VerifyReport,
};

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Where the sets of an experiment come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSource {
    /// Uniform random sets; an empty size list means an automatic sweep.
    Random {
        #[serde(default)]
        sizes: Vec<usize>,
    },
    File { path: PathBuf },
    /// `subfield`, `isotropic-line` or `full`.
    Construction { name: String },
}

impl Default for SetSource {
    fn default() -> Self {
        SetSource::Random { sizes: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest field order.
    pub field: u64,
    /// Largest grid `q^d`.
    pub grid: u64,
    /// Work cap for brute-force counting.
    pub brute: u64,
    /// Largest grid on which exact identity suites run.
    pub exact_grid: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            field: DEFAULT_FIELD_CAP,
            grid: DEFAULT_GRID_CAP,
            brute: BRUTE_CAP as u64,
            exact_grid: 729,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: String,
    /// `(p, n)` pairs.
    pub fields: Vec<[u32; 2]>,
    pub dims: Vec<usize>,
    pub ks: Vec<usize>,
    pub source: SetSource,
    pub seed: u64,
    pub mode: Mode,
    pub out: Option<PathBuf>,
    pub caps: Caps,
    /// Random instances per grid point.
    pub trials: usize,
    /// Radii for restriction suites; empty means every nonzero radius.
    pub radii: Vec<u32>,
    pub restrict_suite: Option<RestrictSuite>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Dimensions for the exponent audits.
    pub audit_dims: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: "verify".into(),
            fields: vec![[3, 1], [5, 1], [7, 1], [3, 2]],
            dims: vec![2, 3, 4],
            ks: vec![2, 3],
            source: SetSource::default(),
            seed: 0,
            mode: Mode::Float,
            out: None,
            caps: Caps::default(),
            trials: 10,
            radii: Vec::new(),
            restrict_suite: None,
            threads: None,
            audit_dims: vec![4, 6, 8, 10, 12],
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds every configured field, enforcing the caps.
    pub fn field_list(&self) -> Result<Vec<Field>> {
        self.fields
            .iter()
            .map(|&[p, n]| {
                Field::with_cap(p, n, self.caps.field)
                    .map_err(|e| Error::ConfigInvalid(format!("field ({p}, {n}): {e}")))
            })
            .collect()
    }

    pub fn space(&self, field: &Field, d: usize) -> Result<Space> {
        Space::with_cap(field, d, self.caps.grid)
    }

    /// Checks the parameters against the module caps before anything runs.
    pub fn validate(&self) -> Result<()> {
        self.field_list()?;
        if let Some(d) = self.dims.iter().find(|&&d| d == 0) {
            return Err(Error::ConfigInvalid(format!("dimension {d} is invalid")));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k < 2) {
            return Err(Error::ConfigInvalid(format!("k = {k} must be at least 2")));
        }
        if let Some(d) = self.audit_dims.iter().find(|&&d| d < 4 || d % 2 == 1) {
            return Err(Error::ConfigInvalid(format!("audit dimension {d} must be even and >= 4")));
        }
        if self.threads == Some(0) {
            return Err(Error::ConfigInvalid("threads must be positive".into()));
        }
        if let SetSource::Construction { name } = &self.source {
            if !matches!(name.as_str(), "subfield" | "isotropic-line" | "full") {
                return Err(Error::ConfigInvalid(format!("unknown construction {name:?}")));
            }
        }
        Ok(())
    }

    /// Runs `f` on a pool of the configured size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::ConfigInvalid(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-instance seed: SplitMix64 folded over the master seed and the
/// instance coordinates (`h <- mix((h + golden) ^ mix(c))`), so a row depends only on `(seed, coordinates)`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |h, &c| splitmix64(h.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ splitmix64(c)))
}

/// The wrapper written around every JSON report.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    /// Seconds since the epoch; the only field allowed to differ between runs.
    pub timestamp: u64,
    pub config: &'a ExperimentConfig,
    pub report: &'a T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(config: &'a ExperimentConfig, report: &'a T) -> Self {
        Envelope {
            tool: "ffres",
            version: VERSION,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
            report,
        }
    }
}

/// Exit code contract of the command line tool.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const ASSERTION: i32 = 2;
    pub const CONFIG: i32 = 3;
}

pub(crate) fn field_label(f: &Field) -> String {
    if f.n() == 1 {
        format!("{}", f.q())
    } else {
        format!("{}^{}", f.p(), f.n())
    }
}
