use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field_core::{make_field, Space};
use crate::sphere::SphereTable;
use crate::transform::Mode;
use crate::Error;

fn space(p: u32, n: u32, d: usize) -> Space {
    Space::new(&make_field(p, n).unwrap(), d).unwrap()
}

fn random_sets(s: &Space, k: usize, rng: &mut ChaCha8Rng) -> Vec<PointSet> {
    (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=s.size());
            random_set(s, size, rng.gen()).unwrap()
        })
        .collect()
}

#[test]
fn brute_examples() {
    let s = space(3, 1, 2);
    let z = PointSet::singleton(&s, 0).unwrap();
    let nu = nu_brute(&[z.clone(), z]).unwrap();
    assert_eq!(nu.counts, vec![1, 0, 0]);
    let full = PointSet::full(&s);
    let table = SphereTable::new(&s).unwrap();
    for k in 2..=3 {
        let nu = nu_brute(&vec![full.clone(); k]).unwrap();
        for t in 0..3 {
            assert_eq!(nu.get(t), 9u128.pow(k as u32 - 1) * table.size(t) as u128);
        }
    }
}

#[test]
fn brute_matches_pair_enumeration() {
    let s = space(3, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let sets = random_sets(&s, 2, &mut rng);
        let nu = nu_brute(&sets).unwrap();
        let mut expect = vec![0u128; 3];
        for &x in sets[0].indices() {
            for &y in sets[1].indices() {
                expect[s.norm(s.add(x, y)) as usize] += 1;
            }
        }
        assert_eq!(nu.counts, expect);
        assert!(nu.mass_ok());
    }
}

#[test]
fn brute_paths_agree() {
    // product above the direct-loop cap forces the convolution path
    let s = space(5, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sets: Vec<_> = (0..3).map(|_| random_set(&s, 110, rng.gen()).unwrap()).collect();
    let conv = nu_brute(&sets).unwrap();
    assert!(conv.mass_ok());
    assert_eq!(conv, nu_fourier(&sets, Mode::Exact).unwrap());
    let small: Vec<_> = sets.iter().map(|e| PointSet::new(&s, e.indices()[..40].to_vec()).unwrap()).collect();
    let direct = nu_brute(&small).unwrap();
    let via_conv = nu_brute_with_cap(&small, 10_000).unwrap_err();
    assert!(matches!(via_conv, Error::TooLarge { .. }));
    assert_eq!(direct, nu_fourier(&small, Mode::Exact).unwrap());
}

#[test]
fn fourier_matches_brute_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, n, d) in [(3, 1, 2), (5, 1, 2), (3, 1, 3), (3, 2, 2)] {
        let s = space(p, n, d);
        for k in 2..=3 {
            for _ in 0..5 {
                let sets = random_sets(&s, k, &mut rng);
                let b = nu_brute(&sets).unwrap();
                assert_eq!(nu_fourier(&sets, Mode::Exact).unwrap(), b);
                let table = SphereTable::new(&s).unwrap();
                let (f, dev) = nu_fourier_float(&table, &sets).unwrap();
                assert_eq!(f, b);
                assert!(dev < 1e-6);
            }
        }
    }
}

#[test]
fn fourier_singletons() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let pts: Vec<usize> = (0..3).map(|_| rng.gen_range(0..25)).collect();
        let sets: Vec<_> = pts.iter().map(|&i| PointSet::singleton(&s, i).unwrap()).collect();
        let sum = pts.iter().fold(0, |acc, &i| s.add(acc, i));
        let nu = nu_fourier(&sets, Mode::Exact).unwrap();
        for t in 0..5 {
            assert_eq!(nu.get(t), (s.norm(sum) == t) as u128);
        }
    }
}

#[test]
fn delta_examples() {
    let f5 = make_field(5, 1).unwrap();
    let line = isotropic_line(&f5, 2).unwrap();
    assert_eq!(line.len(), 5);
    assert_eq!(delta_set(&[line.clone(), line]).unwrap(), vec![0]);
    let f13 = make_field(13, 1).unwrap();
    assert_eq!(f13.sqrt_minus_one(), Some(5));
    let line = isotropic_line(&f13, 2).unwrap();
    assert_eq!(delta_set(&[line.clone(), line]).unwrap(), vec![0]);
    let f3 = make_field(3, 1).unwrap();
    assert!(matches!(isotropic_line(&f3, 2), Err(Error::MinusOneNotSquare(3))));
    let s = space(5, 1, 2);
    let full = PointSet::full(&s);
    assert_eq!(delta_set(&[full.clone(), full]).unwrap().len(), 5);
}

#[test]
fn subfield_examples() {
    for (p, k) in [(3u32, 2usize), (3, 3), (5, 2)] {
        let sets = subfield_sets(p, 2, k).unwrap();
        assert!(sets.iter().all(|e| e.len() == (p * p) as usize));
        assert_eq!(delta_set(&sets).unwrap().len(), p as usize);
    }
    assert!(matches!(subfield_sets(4, 2, 2), Err(Error::UnsupportedField(_))));
}

#[test]
fn random_set_contract() {
    let s = space(5, 1, 2);
    assert!(random_set(&s, 0, 1).unwrap().is_empty());
    assert_eq!(random_set(&s, 25, 1).unwrap(), PointSet::full(&s));
    assert_eq!(random_set(&s, 9, 42).unwrap(), random_set(&s, 9, 42).unwrap());
    assert!(matches!(random_set(&s, 26, 1), Err(Error::SizeOutOfRange { .. })));
}

#[test]
fn delta_grows_when_appending_zero_sets() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut sets = random_sets(&s, 2, &mut rng);
        let before = delta_set(&sets).unwrap();
        let extra = random_set(&s, rng.gen_range(1..10), rng.gen()).unwrap();
        sets.push(extra.union(&PointSet::singleton(&s, 0).unwrap()).unwrap());
        let after = delta_set(&sets).unwrap();
        assert!(before.iter().all(|t| after.contains(t)));
    }
}

#[test]
fn delta_symmetric_and_twist_invariant() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let sets = random_sets(&s, 3, &mut rng);
        let base = nu_fourier(&sets, Mode::Exact).unwrap();
        let mut rev = sets.clone();
        rev.reverse();
        assert_eq!(delta_set(&rev).unwrap(), base.delta());
        for a in 2..5 {
            let ts = Space::new(&s.field().twisted(a).unwrap(), 2).unwrap();
            let moved: Vec<_> = sets.iter().map(|e| PointSet::new(&ts, e.indices().to_vec()).unwrap()).collect();
            assert_eq!(nu_fourier(&moved, Mode::Exact).unwrap().counts, base.counts);
        }
    }
}

#[test]
fn difference_form() {
    let f = make_field(5, 1).unwrap();
    let s = Space::new(&f, 2).unwrap();
    let e = random_set(&s, 6, 9).unwrap();
    let d = delta_set(&[e.clone(), e.negated()]).unwrap();
    let mut expect: Vec<u32> = e
        .indices()
        .iter()
        .flat_map(|&x| e.indices().iter().map(move |&y| (x, y)))
        .map(|(x, y)| s.norm(s.sub(x, y)))
        .collect();
    expect.sort_unstable();
    expect.dedup();
    assert_eq!(d, expect);
}

#[test]
fn claim_examples() {
    let s = space(5, 1, 2);
    let full = PointSet::full(&s);
    let r1 = claim1_check(&[full.clone(), full.clone()]).unwrap();
    assert!(r1.hypothesis && r1.pass());
    let sets: Vec<_> = (0..2).map(|i| random_set(&s, 15, i).unwrap()).collect();
    let r1 = claim1_check(&sets).unwrap();
    assert!(r1.hypothesis, "225 = 3^2 5^2 is the boundary");
    assert!(r1.pass());
    let tiny: Vec<_> = (0..2).map(|i| random_set(&s, 3, i).unwrap()).collect();
    let r1 = claim1_check(&tiny).unwrap();
    assert!(!r1.hypothesis && !r1.violation());

    let s3 = space(3, 1, 2);
    let f3 = PointSet::full(&s3);
    let r3 = claim3_check(&[f3.clone(), f3]).unwrap();
    assert!(r3.hypothesis && r3.pass(), "{r3:?}");
    let big = vec![PointSet::full(&s), PointSet::full(&s), random_set(&s, 5, 3).unwrap()];
    let r3 = claim3_check(&big).unwrap();
    assert!(r3.hypothesis && r3.pass());
}

#[test]
fn claim2_singletons() {
    let s = space(3, 1, 2);
    for (a, b) in [(0usize, 0usize), (1, 2), (4, 5), (3, 6)] {
        let sets = vec![PointSet::singleton(&s, a).unwrap(), PointSet::singleton(&s, b).unwrap()];
        let r = claim2_check(&sets).unwrap();
        let sum = s.add(a, b);
        let expect = 1 + if s.norm(sum) == 0 { 3 } else { 0 };
        assert_eq!(r.lhs, Quantity::Exact(BigRational::from_integer(1.into())));
        assert_eq!(r.rhs, Quantity::Exact(BigRational::from_integer(expect.into())));
        assert!(r.pass());
    }
}

#[test]
fn claims_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, d) in [(3, 2), (5, 2), (3, 3), (3, 4)] {
        let s = space(p, 1, d);
        for k in 2..=3 {
            for _ in 0..4 {
                let sets = random_sets(&s, k, &mut rng);
                let data = ClaimData::new(&sets).unwrap();
                for r in [data.claim1(), data.claim2(), data.claim3()] {
                    assert!(!r.violation(), "q={p} d={d} k={k}: {r:?}");
                }
                let r2 = data.claim2();
                assert!(r2.pass(), "{r2:?}");
                if d % 2 == 0 {
                    assert!(data.claim3().checks.iter().all(|c| c.holds));
                    assert!(data.claim1().checks.iter().all(|c| c.holds));
                }
            }
        }
    }
}

#[test]
fn theorem31_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [3, 5] {
        let s = space(p, 1, 2);
        for k in 2..=3 {
            for _ in 0..10 {
                let sets = random_sets(&s, k, &mut rng);
                let nu = nu_brute(&sets).unwrap();
                let r = theorem31_chain(&sets, &nu).unwrap();
                assert!(r.cs_holds);
            }
        }
        let full = vec![PointSet::full(&s); 2];
        let r = theorem31_chain(&full, &nu_brute(&full).unwrap()).unwrap();
        assert_eq!(r.delta_size, p as usize);
        assert!(r.bound <= p as f64 + 1e-12);
    }
    let sets = subfield_sets(3, 2, 2).unwrap();
    let r = theorem31_chain(&sets, &nu_brute(&sets).unwrap()).unwrap();
    assert_eq!(r.delta_size, 3);
    assert!(r.cs_holds && r.bound > 0.0);
}
