//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! `cargo test -p ffres-core --test acceptance [filter]`

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffres_core::field_core::{gauss_sum, is_prime, CycNum, Field, Space};
use ffres_core::harness::{csv_bytes, derive_seed, run_bench, run_probe, run_verify, ExperimentConfig};
use ffres_core::restriction::{
    exponent_audit, lemma54_with, lemma61_estimate, lemma62_estimate, lemma63_estimate, rti_audit,
    shparlinski_branch_check, threshold_6d2, threshold_9d18, Exponent, RestrictionEstimate,
};
use ffres_core::resultant::{
    delta_set, isotropic_line, nu_brute, nu_fourier_with, random_set, subfield_sets, theorem31_with,
    ClaimData, PointSet,
};
use ffres_core::sphere::{closed_form_suite, max_nonzero_hat, pair_sum_suite, ClosedForm, SphereTable};
use ffres_core::transform::Mode;

type Outcome = Result<String, String>;

const SEED: u64 = 20260917;

fn table(q: u64, d: usize) -> SphereTable {
    let f = Field::from_order(q).unwrap();
    SphereTable::new(&Space::new(&f, d).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, || format!("{what} took {spent:.1?}, limit {limit:?}"))
}

fn c1_closed_form() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for q in [3, 5, 7, 9] {
        for d in [2, 4] {
            let t = table(q, d);
            for row in closed_form_suite(&t, ClosedForm::value).map_err(|e| e.to_string())? {
                checked += t.space().size();
                ensure(row.matches(), || format!("q={q} d={d} t={} mismatches at {:?}", row.t, &row.mismatches[..row.mismatches.len().min(5)]))?;
            }
        }
    }
    within(start, Duration::from_secs(120), "closed form grid")?;
    Ok(format!("{checked} (t, m) pairs"))
}

fn c2_pair_sum() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for q in [3, 5] {
        for d in [2, 4] {
            let s = pair_sum_suite(&table(q, d)).map_err(|e| e.to_string())?;
            pairs += s.pairs;
            ensure(s.failures.is_empty(), || format!("q={q} d={d}: {} failing pairs", s.failures.len()))?;
        }
    }
    within(start, Duration::from_secs(120), "pair-sum grid")?;
    let mut odd = Vec::new();
    for q in [3, 5] {
        let s = pair_sum_suite(&table(q, 3)).map_err(|e| e.to_string())?;
        odd.push(format!("q={q} d=3: {} of {} fail", s.failures.len(), s.pairs));
    }
    Ok(format!("{pairs} pairs; recorded {}", odd.join(", ")))
}

struct Instance {
    label: String,
    table_idx: usize,
    sets: Vec<PointSet>,
}

/// 25 random instances per (q, d, k) over q in {3,5}, d in {2,3}, k in {2,3}.
fn counting_grid() -> (Vec<SphereTable>, Vec<Instance>) {
    let mut tables = Vec::new();
    let mut out = Vec::new();
    for q in [3u64, 5] {
        for d in [2usize, 3] {
            let t = table(q, d);
            let n = t.space().size();
            for k in [2usize, 3] {
                for i in 0..25u64 {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, &[3, q, d as u64, k as u64, i]));
                    let sets = (0..k)
                        .map(|_| random_set(t.space(), rng.gen_range(1..=n), rng.gen()).unwrap())
                        .collect();
                    out.push(Instance { label: format!("q={q} d={d} k={k} #{i}"), table_idx: tables.len(), sets });
                }
            }
            tables.push(t);
        }
    }
    (tables, out)
}

fn c3_nu_oracle() -> Outcome {
    let (tables, grid) = counting_grid();
    for inst in &grid {
        let brute = nu_brute(&inst.sets).map_err(|e| e.to_string())?;
        let fourier = nu_fourier_with(&tables[inst.table_idx], &inst.sets, Mode::Exact).map_err(|e| e.to_string())?;
        ensure(brute == fourier, || format!("{}: {:?} vs {:?}", inst.label, brute.counts, fourier.counts))?;
    }
    Ok(format!("{} instances", grid.len()))
}

fn c4_cs_mass() -> Outcome {
    let (tables, grid) = counting_grid();
    for inst in &grid {
        let nu = nu_brute(&inst.sets).map_err(|e| e.to_string())?;
        ensure(nu.mass_ok(), || format!("{}: mass {} vs {}", inst.label, nu.total(), nu.product()))?;
        let r = theorem31_with(&tables[inst.table_idx], &inst.sets, &nu).map_err(|e| e.to_string())?;
        ensure(r.cs_holds, || format!("{}: {} < {}", inst.label, r.cs_lhs, r.cs_rhs))?;
    }
    Ok(format!("{} instances", grid.len()))
}

fn c5_claims() -> Outcome {
    let (tables, mut grid) = counting_grid();
    let t5 = tables.iter().position(|t| t.q() == 5 && t.dim() == 2).unwrap();
    for i in 0..5u64 {
        let sets = (0..2).map(|j| random_set(tables[t5].space(), 15, derive_seed(SEED, &[5, i, j])).unwrap()).collect();
        grid.push(Instance { label: format!("boundary 15x15 #{i}"), table_idx: t5, sets });
    }
    let mut asserted = 0;
    for inst in &grid {
        let data = ClaimData::with_table(&tables[inst.table_idx], &inst.sets).map_err(|e| e.to_string())?;
        for c in [data.claim1(), data.claim2(), data.claim3()] {
            if inst.label.starts_with("boundary") && c.claim != 2 {
                ensure(c.hypothesis, || format!("{}: claim {} hypothesis not met", inst.label, c.claim))?;
            }
            if c.hypothesis {
                asserted += 1;
            }
            ensure(!c.violation(), || format!("{}: claim {} fails, lhs {} rhs {}", inst.label, c.claim, c.lhs, c.rhs))?;
        }
    }
    Ok(format!("{asserted} claim instances under hypothesis"))
}

fn rti_triples(d: usize) -> [(Exponent, Exponent, Exponent); 3] {
    let di = d as i64;
    [
        (Exponent::int(2), Exponent::int(3), Exponent::int(4)),
        (Exponent::int(2), Exponent::int(3), Exponent::Infinite),
        (Exponent::new(12 * di - 8, 3 * di + 4), Exponent::int(3), Exponent::Infinite),
    ]
}

fn c6_rti() -> Outcome {
    let mut audits = 0;
    for q in [3u64, 5, 7] {
        for d in [2usize, 4] {
            let t = table(q, d);
            let n = t.space().size();
            for i in 0..200u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, &[6, q, d as u64, i]));
                let e = random_set(t.space(), rng.gen_range(1..=n), rng.gen()).unwrap();
                let r = rng.gen_range(1..q as u32);
                for (r0, rr, r1) in rti_triples(d) {
                    let rep = rti_audit(&t, &e, r, r0, r1, rr).map_err(|e| e.to_string())?;
                    audits += 1;
                    ensure(rep.pass, || format!("q={q} d={d} t={r} |E|={} ({r0},{rr},{r1}): {} > {}", e.len(), rep.norm, rep.bound))?;
                }
            }
        }
    }
    Ok(format!("{audits} audits, 0 violations"))
}

fn c7_sphere_l2() -> Outcome {
    let tables: Vec<SphereTable> = [3u64, 5, 7].iter().flat_map(|&q| [2usize, 4].map(|d| table(q, d))).collect();
    let maxima: Vec<Vec<f64>> = tables
        .iter()
        .map(|t| (1..t.q()).map(|r| max_nonzero_hat(t, r).unwrap().max).collect())
        .collect();
    for i in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, &[7, i]));
        let ti = rng.gen_range(0..tables.len());
        let t = &tables[ti];
        let r = rng.gen_range(1..t.q());
        let e = random_set(t.space(), rng.gen_range(1..=t.space().size()), rng.gen()).unwrap();
        let rep = lemma54_with(t, &e, r, maxima[ti][r as usize - 1]).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("q={} d={} t={r} |E|={}: {} > {}", t.q(), t.dim(), e.len(), rep.lhs, rep.rhs))?;
    }
    Ok("500 instances, 0 violations".into())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c8_exponents() -> Outcome {
    let one = BigRational::one();
    let e = |d, k, est: &RestrictionEstimate, g: &BigRational| exponent_audit(d, k, est, g).map_err(|e| e.to_string());
    let mut notes = Vec::new();
    for d in [4usize, 6] {
        let v = e(d, 3, &lemma61_estimate(d).map_err(|e| e.to_string())?, &threshold_6d2(d, 3))?;
        ensure(v == one, || format!("d={d} k=3: e = {v}"))?;
    }
    for d in [8usize, 10, 12] {
        let v = e(d, 4, &lemma62_estimate(d).map_err(|e| e.to_string())?, &threshold_6d2(d, 4))?;
        ensure(v >= one, || format!("d={d} k=4: e = {v}"))?;
        notes.push(format!("d={d} k=4 e={v}"));
    }
    let est = lemma63_estimate(8).map_err(|e| e.to_string())?;
    ensure(est.alpha == rat(-7, 48) && est.ell == rat(48, 37), || format!("d=8 estimate alpha={} ell={}", est.alpha, est.ell))?;
    let v = e(8, 3, &est, &threshold_9d18(8))?;
    ensure(v == one, || format!("d=8 k=3: e = {v}"))?;
    for d in [8usize, 10, 12] {
        let r = shparlinski_branch_check(d, None).map_err(|e| e.to_string())?;
        ensure(r.matches && r.exceeds, || format!("d={d}: exponent {} vs d+1", r.exponent))?;
    }
    Ok(notes.join(", "))
}

fn c9_constructions() -> Outcome {
    for p in [3u32, 5] {
        for k in [2usize, 3] {
            let sets = subfield_sets(p, 2, k).map_err(|e| e.to_string())?;
            let n = delta_set(&sets).map_err(|e| e.to_string())?.len();
            ensure(n == p as usize, || format!("subfield p={p} k={k}: |Delta| = {n}"))?;
        }
    }
    for q in [5u64, 13] {
        let line = isotropic_line(&Field::from_order(q).unwrap(), 2).map_err(|e| e.to_string())?;
        let n = delta_set(&[line.clone(), line]).map_err(|e| e.to_string())?.len();
        ensure(n == 1, || format!("isotropic q={q}: |Delta_2| = {n}"))?;
    }
    Ok("subfield |Delta| = p, isotropic |Delta_2| = 1".into())
}

fn c10_decay() -> Outcome {
    let mut worst = 0.0f64;
    for q in [3u64, 5, 7, 9, 11, 13] {
        for d in [2usize, 4] {
            let t = table(q, d);
            for r in 1..t.q() {
                let rep = max_nonzero_hat(&t, r).map_err(|e| e.to_string())?;
                worst = worst.max(rep.ratio);
                ensure(rep.ratio <= 3.0, || format!("q={q} d={d} t={r}: ratio {}", rep.ratio))?;
            }
        }
    }
    Ok(format!("max ratio {worst:.4}"))
}

fn odd_prime_powers(limit: u64) -> Vec<u64> {
    (3..=limit)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).unwrap();
            let mut x = q;
            while x % p == 0 {
                x /= p;
            }
            p != 2 && x == 1 && is_prime(p)
        })
        .collect()
}

fn c11_gauss() -> Outcome {
    let qs = odd_prime_powers(121);
    for &q in &qs {
        let f = Field::from_order(q).map_err(|e| format!("q={q}: {e}"))?;
        let g = gauss_sum(&f);
        ensure(&g * &g.conj() == CycNum::from_int(f.p(), q as i64), || format!("q={q}"))?;
    }
    Ok(format!("{} field orders", qs.len()))
}

fn c12_performance() -> Outcome {
    let bench = ExperimentConfig { fields: vec![[7, 1]], dims: vec![4], ks: vec![], ..ExperimentConfig::default() };
    let r = run_bench(&bench).map_err(|e| e.to_string())?;
    let t = &r.transforms[0];
    ensure(t.agree, || format!("transforms disagree by {}", t.max_diff))?;
    ensure(t.speedup >= 50.0, || format!("speedup {:.1}", t.speedup))?;
    let start = Instant::now();
    let v = run_verify(&ExperimentConfig::default()).map_err(|e| e.to_string())?;
    ensure(v.pass, || "default verify grid has failures".into())?;
    within(start, Duration::from_secs(300), "default verify grid")?;
    Ok(format!("speedup {:.0}x, default verify {:.1?}", t.speedup, start.elapsed()))
}

fn c13_determinism() -> Outcome {
    let mut c = ExperimentConfig {
        fields: vec![[5, 1], [7, 1], [3, 2]],
        dims: vec![2],
        ks: vec![2, 3],
        trials: 4,
        seed: 99,
        ..ExperimentConfig::default()
    };
    let mut outputs = Vec::new();
    for threads in [Some(1), Some(4), None, Some(1)] {
        c.threads = threads;
        let r = run_probe(&c).map_err(|e| e.to_string())?;
        outputs.push((csv_bytes(&r.rows).unwrap(), csv_bytes(&r.thresholds).unwrap()));
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "probe CSV differs between runs".into())?;
    Ok(format!("{} byte CSV identical over 4 runs", outputs[0].0.len()))
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("closed form equals direct sums", c1_closed_form),
        ("pair-sum identity", c2_pair_sum),
        ("nu oracle equality", c3_nu_oracle),
        ("cauchy-schwarz and mass identity", c4_cs_mass),
        ("claims under hypotheses", c5_claims),
        ("interpolation bound", c6_rti),
        ("sphere L2 inequality", c7_sphere_l2),
        ("exponent audits", c8_exponents),
        ("structured constructions", c9_constructions),
        ("sphere decay ratio <= 3", c10_decay),
        ("gauss sum modulus", c11_gauss),
        ("performance", c12_performance),
        ("probe determinism", c13_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{label}: PASS ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("{label}: FAIL ({why}; {secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
