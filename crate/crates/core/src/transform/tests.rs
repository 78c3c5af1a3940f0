use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field_core::{make_field, CycNum};

fn space(p: u32, n: u32, d: usize) -> Space {
    Space::new(&make_field(p, n).unwrap(), d).unwrap()
}

fn random_support(s: &Space, rng: &mut ChaCha8Rng, density: f64) -> Vec<usize> {
    (0..s.size()).filter(|_| rng.gen_bool(density)).collect()
}

fn random_complex(s: &Space, rng: &mut ChaCha8Rng) -> GridFn<Point> {
    let v = (0..s.size())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GridFn::from_complex(s, v).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn hat_of_origin_is_flat() {
    let s = space(3, 1, 2);
    let e = GridFn::<Point>::delta(&s, 0, Mode::Exact).unwrap();
    let h = hat(&e).unwrap();
    for m in 0..s.size() {
        assert_eq!(h.exact_value(m).unwrap(), CycNum::from_rational(3, rat(1, 9)));
    }
}

#[test]
fn hat_of_full_set_is_delta() {
    let s = space(3, 1, 2);
    let e = GridFn::<Point>::constant(&s, 1, Mode::Exact);
    let h = hat(&e).unwrap();
    assert_eq!(h.exact_value(0).unwrap(), CycNum::one(3));
    for m in 1..s.size() {
        assert!(h.exact_value(m).unwrap().is_zero());
    }
}

#[test]
fn hat_at_origin_counts_points() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut idx: Vec<usize> = (0..25).collect();
    for i in 0..7 {
        let j = rng.gen_range(i..25);
        idx.swap(i, j);
    }
    let e = GridFn::<Point>::indicator(&s, &idx[..7], Mode::Exact).unwrap();
    let h = hat(&e).unwrap();
    assert_eq!(h.exact_value(0).unwrap(), CycNum::from_rational(5, rat(7, 25)));
    let h0 = h.complex_value(0).norm();
    for m in 0..s.size() {
        assert!(h.complex_value(m).norm() <= h0 + 1e-12);
    }
}

#[test]
fn hat_matches_direct_definition() {
    let s = space(3, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sup = random_support(&s, &mut rng, 0.3);
    let e = GridFn::<Point>::indicator(&s, &sup, Mode::Exact).unwrap();
    let h = hat(&e).unwrap();
    let f = s.field();
    for m in [0usize, 5, 17, 80] {
        let mut acc = CycNum::zero(3);
        for &x in &sup {
            acc += &crate::field_core::add_char(f, f.neg(s.dot(x, m)));
        }
        assert_eq!(h.exact_value(m).unwrap(), acc.scale(&rat(1, 81)));
    }
}

#[test]
fn tilde_examples() {
    let s = space(3, 1, 2);
    let g = GridFn::<Dual>::delta(&s, 0, Mode::Exact).unwrap();
    let t = tilde(&g).unwrap();
    for x in 0..s.size() {
        assert_eq!(t.exact_value(x).unwrap(), CycNum::one(3));
    }
    let one = GridFn::<Dual>::constant(&s, 1, Mode::Exact);
    let t = tilde(&one).unwrap();
    assert_eq!(t.exact_value(0).unwrap(), CycNum::from_int(3, 9));
    for x in 1..s.size() {
        assert!(t.exact_value(x).unwrap().is_zero());
    }
}

#[test]
fn hat_is_scaled_tilde_on_indicators() {
    let s = space(3, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let sup = random_support(&s, &mut rng, 0.4);
        let e = GridFn::<Point>::indicator(&s, &sup, Mode::Exact).unwrap();
        let h = hat(&e).unwrap();
        let t = tilde(&e.clone().reinterpret::<Dual>()).unwrap();
        let scaled = t.scale_p_pow(-3).reinterpret::<Dual>();
        assert!(h.exact_eq(&scaled));
    }
}

#[test]
fn inversion_exact_on_indicators() {
    let s = space(3, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let sup = random_support(&s, &mut rng, 0.5);
        let e = GridFn::<Point>::indicator(&s, &sup, Mode::Exact).unwrap();
        let back = inverse(&hat(&e).unwrap()).unwrap();
        assert!(back.exact_eq(&e));
    }
}

#[test]
fn inversion_exact_on_rational_values_over_f9() {
    let s = space(3, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vals = (0..s.size())
        .map(|_| rat(rng.gen_range(-5..6), rng.gen_range(1..4)))
        .collect();
    let f = GridFn::<Point>::from_rationals(&s, vals).unwrap();
    let back = inverse(&hat(&f).unwrap()).unwrap();
    assert!(back.exact_eq(&f));
}

#[test]
fn inverse_of_delta_is_one() {
    let s = space(5, 1, 2);
    let d = GridFn::<Dual>::delta(&s, 0, Mode::Exact).unwrap();
    let f = inverse(&d).unwrap();
    assert!(f.exact_eq(&GridFn::constant(&s, 1, Mode::Exact)));
}

#[test]
fn inversion_float() {
    let s = space(5, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_complex(&s, &mut rng);
    let back = inverse(&hat(&f).unwrap()).unwrap();
    assert!(back.max_abs_diff(&f) < 1e-10);
}

#[test]
fn plancherel() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sup = random_support(&s, &mut rng, 0.3);
    let e = GridFn::<Point>::indicator(&s, &sup, Mode::Exact).unwrap();
    let (lhs, rhs) = plancherel_sides(&e).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(
        lhs,
        CycNum::from_rational(5, rat(sup.len() as i64, 25))
    );
    assert_eq!(plancherel_defect(&e).unwrap(), 0.0);
    assert_eq!(plancherel_defect(&GridFn::zero(&s, Mode::Exact)).unwrap(), 0.0);
    assert!(plancherel_defect(&random_complex(&s, &mut rng)).unwrap() < 1e-10);
    let vals = (0..s.size()).map(|i| rat(i as i64 % 7 - 3, 2)).collect();
    let f = GridFn::<Point>::from_rationals(&s, vals).unwrap();
    assert_eq!(plancherel_defect(&f).unwrap(), 0.0);
}

#[test]
fn convolution_matches_direct_sum() {
    let s = space(3, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let a = random_support(&s, &mut rng, 0.4);
        let b = random_support(&s, &mut rng, 0.4);
        let ea = GridFn::<Point>::indicator(&s, &a, Mode::Exact).unwrap();
        let eb = GridFn::<Point>::indicator(&s, &b, Mode::Exact).unwrap();
        let c = convolve(&ea, &eb).unwrap();
        assert!(c.exact_eq(&convolve_direct(&ea, &eb).unwrap()));
        for t in 0..s.size() {
            let count = a
                .iter()
                .flat_map(|&x| b.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| s.add(x, y) == t)
                .count();
            assert_eq!(c.exact_value(t).unwrap(), CycNum::from_int(3, count as i64));
        }
    }
}

#[test]
fn convolution_identities() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = random_complex(&s, &mut rng);
    let d0 = GridFn::<Point>::delta(&s, 0, Mode::Float).unwrap();
    assert!(convolve(&d0, &f).unwrap().max_abs_diff(&f) < 1e-10);
    let full = GridFn::<Point>::constant(&s, 1, Mode::Exact);
    let c = convolve(&full, &full).unwrap();
    assert!(c.exact_eq(&GridFn::constant(&s, 25, Mode::Exact)));
    let ff = full.to_float();
    assert!(matches!(convolve(&full, &ff), Err(crate::Error::ModeMismatch)));
}

#[test]
fn convolution_float_matches_direct() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = random_complex(&s, &mut rng);
    let g = random_complex(&s, &mut rng);
    let diff = convolve(&f, &g)
        .unwrap()
        .max_abs_diff(&convolve_direct(&f, &g).unwrap());
    assert!(diff < 1e-9);
}

#[test]
fn axis_transform_matches_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (p, n, d, reps) in [(5u32, 1u32, 3usize, 50usize), (3, 2, 2, 20), (7, 1, 2, 20)] {
        let s = space(p, n, d);
        for _ in 0..reps {
            let f = random_complex(&s, &mut rng);
            for kind in [TransformKind::Hat] {
                let a = fast_axis_transform(&f, kind).unwrap();
                let b = naive_transform(&f, kind).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-9);
            }
            let g = f.clone().reinterpret::<Dual>();
            for kind in [TransformKind::Tilde, TransformKind::Inverse] {
                let a = fast_axis_transform(&g, kind).unwrap();
                let b = naive_transform(&g, kind).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-9 * s.size() as f64);
            }
        }
    }
}

#[test]
fn axis_transform_q7_d4() {
    let s = space(7, 1, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let f = random_complex(&s, &mut rng);
    let a = fast_axis_transform(&f, TransformKind::Hat).unwrap();
    let b = naive_transform(&f, TransformKind::Hat).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-9);
}

#[test]
fn axis_transform_of_delta_is_constant() {
    let s = space(5, 1, 3);
    let d0 = GridFn::<Point>::delta(&s, 0, Mode::Float).unwrap();
    let h = fast_axis_transform(&d0, TransformKind::Hat).unwrap();
    for m in 0..s.size() {
        assert!((h.complex_value(m) - Complex64::new(1.0 / 125.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn axis_transform_rejects_exact_and_wrong_side() {
    let s = space(3, 1, 2);
    let e = GridFn::<Point>::delta(&s, 0, Mode::Exact).unwrap();
    assert!(matches!(
        fast_axis_transform(&e, TransformKind::Hat),
        Err(crate::Error::ExactModeUnsupported)
    ));
    let f = e.to_float();
    assert!(matches!(
        fast_axis_transform(&f, TransformKind::Tilde),
        Err(crate::Error::SideMismatch { .. })
    ));
    let dynf = DynGridFn::Dual(f.reinterpret());
    assert!(matches!(dynf.hat(), Err(crate::Error::SideMismatch { .. })));
}

#[test]
fn holder_checks() {
    let s = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let two = Rational64::from_integer(2);
    let three = Rational64::from_integer(3);
    for _ in 0..10 {
        let f = random_complex(&s, &mut rng);
        let g = random_complex(&s, &mut rng);
        let (l, r) = gen_holder_check(&[f, g], &[two, two]).unwrap();
        assert!(l <= r + 1e-9);
    }
    let f = random_complex(&s, &mut rng);
    let (l, r) = gen_holder_check(&[f.clone(), f.clone(), f], &[three; 3]).unwrap();
    assert!((l - r).abs() < 1e-9 * r);
    for _ in 0..10 {
        let fs: Vec<_> = (0..3)
            .map(|_| {
                let sup = random_support(&s, &mut rng, 0.5);
                GridFn::<Point>::indicator(&s, &sup, Mode::Float).unwrap()
            })
            .collect();
        let (l, r) = gen_holder_check(&fs, &[three; 3]).unwrap();
        assert!(l <= r + 1e-9);
    }
    let f = random_complex(&s, &mut rng);
    assert!(matches!(
        gen_holder_check(&[f.clone(), f], &[two, three]),
        Err(crate::Error::BadExponents(_))
    ));
}

#[test]
fn lemma21_examples() {
    let s = space(3, 1, 2);
    let full = GridFn::<Point>::constant(&s, 1, Mode::Float);
    let (l, r) = lemma21_check(&[full.clone(), full.clone(), full]).unwrap();
    assert!(l <= r + 1e-9);
    let singles: Vec<_> = [1usize, 4, 7]
        .iter()
        .map(|&i| GridFn::<Point>::delta(&s, i, Mode::Float).unwrap())
        .collect();
    let (l, r) = lemma21_check(&singles).unwrap();
    assert!((l - r).abs() < 1e-12);
    assert!((l - 9f64.powi(-2)).abs() < 1e-12);
    let s5 = space(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let sets: Vec<_> = (0..3)
            .map(|_| {
                let sup = random_support(&s5, &mut rng, 0.4);
                GridFn::<Point>::indicator(&s5, &sup, Mode::Exact).unwrap()
            })
            .collect();
        let (l, r) = lemma21_check(&sets).unwrap();
        assert!(l <= r + 1e-9);
    }
    let other = GridFn::<Point>::delta(&s5, 0, Mode::Float).unwrap();
    let here = GridFn::<Point>::delta(&s, 0, Mode::Float).unwrap();
    assert!(matches!(
        lemma21_check(&[here, other]),
        Err(crate::Error::DimensionMismatch(_))
    ));
}
