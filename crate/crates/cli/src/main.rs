use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ffres_core::field_core::Field;
use ffres_core::harness::{
    exit, read_set_file, run_bench, run_nu, run_probe, run_restrict, run_verify, run_verify_spheres,
    write_csv, write_json, Envelope, ExperimentConfig, RestrictSuite, SetSource,
};
use ffres_core::transform::Mode;
use ffres_core::Error;

#[derive(Parser, Debug)]
#[command(name = "ffres", version, about = "Finite-field k-resultant toolkit")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// exact or float.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Grid {
    /// Field orders, comma separated (prime powers).
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Vec<usize>,
    /// Random instances per grid point.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Identity and inequality suites (JSON), or `spheres` (CSV).
    Verify {
        #[arg(value_parser = ["all", "spheres"], default_value = "all")]
        what: String,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// nu_k of sets read from a set file.
    Nu {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sets: PathBuf,
    },
    /// Threshold sweeps over random and structured sets (CSV).
    Probe {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Set sizes to sweep; automatic when absent.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Only this construction: subfield, isotropic-line or full.
        #[arg(long, conflicts_with_all = ["sizes", "sets"])]
        construction: Option<String>,
        /// Set file instead of random sets.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
    /// Restriction suites on spheres (CSV).
    Restrict {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',')]
        t: Vec<u32>,
        #[arg(long)]
        suite: Option<RestrictSuite>,
    },
    /// Naive vs fast timings (JSON).
    Bench {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
    },
}

fn fields(qs: &[u64]) -> Result<Vec<[u32; 2]>, Error> {
    qs.iter()
        .map(|&q| {
            Field::from_order(q)
                .map(|f| [f.p(), f.n()])
                .map_err(|e| Error::ConfigInvalid(format!("q = {q}: {e}")))
        })
        .collect()
}

impl Cli {
    fn base_config(&self) -> Result<ExperimentConfig, Error> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(m) = self.mode {
            c.mode = m;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        Ok(c)
    }
}

fn apply_grid(c: &mut ExperimentConfig, g: &Grid) -> Result<(), Error> {
    if !g.q.is_empty() {
        c.fields = fields(&g.q)?;
    }
    if !g.d.is_empty() {
        c.dims = g.d.clone();
    }
    if let Some(t) = g.trials {
        c.trials = t;
    }
    Ok(())
}

fn apply_ks(c: &mut ExperimentConfig, k: &[usize]) {
    if !k.is_empty() {
        c.ks = k.to_vec();
    }
}

/// `<out>.<suffix>` next to the main output.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// CSV stays free of run metadata; config, version and timestamp go to a sidecar.
fn write_meta(c: &ExperimentConfig, summary: serde_json::Value) -> Result<(), Error> {
    if let Some(out) = &c.out {
        write_json(Some(&sibling(out, ".meta.json")), &Envelope::new(c, &summary))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut c = cli.base_config()?;
    match &cli.command {
        Command::Verify { what, grid, k } => {
            apply_grid(&mut c, grid)?;
            apply_ks(&mut c, k);
            c.suite = format!("verify-{what}");
            c.validate()?;
            if what == "spheres" {
                let rows = c.install(|| run_verify_spheres(&c))??;
                write_csv(c.out.as_deref(), &rows)?;
                let pass = rows.iter().all(|r| r.closed_form_match != Some(false));
                write_meta(&c, json!({ "rows": rows.len(), "pass": pass }))?;
                Ok(pass)
            } else {
                let report = c.install(|| run_verify(&c))??;
                write_json(c.out.as_deref(), &Envelope::new(&c, &report))?;
                for s in report.suites.iter().filter(|s| !s.pass) {
                    eprintln!(
                        "{} {} q={} d={}: {} of {} failed",
                        if s.asserted { "FAIL" } else { "note" },
                        s.suite,
                        s.q.as_deref().unwrap_or("-"),
                        s.d.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                        s.failure_count,
                        s.checked
                    );
                }
                Ok(report.pass)
            }
        }
        Command::Nu { q, d, k, sets } => {
            c.suite = "nu".into();
            c.ks = vec![*k];
            c.source = SetSource::File { path: sets.clone() };
            let (space, sets) = read_set_file(sets)?;
            if q.is_some_and(|q| q != space.q() as u64) || d.is_some_and(|d| d != space.dim()) {
                return Err(Error::ConfigInvalid(format!(
                    "set file is over F_{}^{}, flags disagree",
                    space.q(),
                    space.dim()
                )));
            }
            c.fields = vec![[space.field().p(), space.field().n()]];
            c.dims = vec![space.dim()];
            c.validate()?;
            let report = c.install(|| run_nu(&c, &space, sets, *k))??;
            write_json(c.out.as_deref(), &Envelope::new(&c, &report))?;
            Ok(report.mass_ok && report.brute_agrees != Some(false))
        }
        Command::Probe { grid, k, sizes, construction, sets } => {
            apply_grid(&mut c, grid)?;
            apply_ks(&mut c, k);
            c.suite = "probe".into();
            if let Some(name) = construction {
                c.source = SetSource::Construction { name: name.clone() };
            } else if let Some(path) = sets {
                c.source = SetSource::File { path: path.clone() };
            } else if !sizes.is_empty() {
                c.source = SetSource::Random { sizes: sizes.clone() };
            }
            let report = run_probe(&c)?;
            write_csv(c.out.as_deref(), &report.rows)?;
            if let Some(out) = &c.out {
                if !report.thresholds.is_empty() {
                    write_csv(Some(&sibling(out, ".thresholds.csv")), &report.thresholds)?;
                }
            }
            write_meta(&c, json!({ "rows": report.rows.len(), "thresholds": report.thresholds.len() }))?;
            Ok(true)
        }
        Command::Restrict { grid, t, suite } => {
            apply_grid(&mut c, grid)?;
            if !t.is_empty() {
                c.radii = t.clone();
            }
            if suite.is_some() {
                c.restrict_suite = *suite;
            }
            c.suite = "restrict".into();
            let rows = c.install(|| run_restrict(&c))??;
            write_csv(c.out.as_deref(), &rows)?;
            let failed = rows.iter().filter(|r| r.pass == Some(false)).count();
            write_meta(&c, json!({ "rows": rows.len(), "failed": failed }))?;
            Ok(failed == 0)
        }
        Command::Bench { grid, k } => {
            apply_grid(&mut c, grid)?;
            apply_ks(&mut c, k);
            c.suite = "bench".into();
            let report = run_bench(&c)?;
            write_json(c.out.as_deref(), &Envelope::new(&c, &report))?;
            Ok(report.agree())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::from(exit::PASS as u8),
        Ok(false) => ExitCode::from(exit::ASSERTION as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::CONFIG as u8)
        }
    }
}
