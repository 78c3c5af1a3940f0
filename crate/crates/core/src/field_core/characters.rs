//! The canonical additive character, orthogonality sums, and the Gauss sum.

use crate::error::Result;
use crate::field_core::{CycNum, Field, Space};

/// `chi(x) = zeta_p^{Tr(a x)}` where `a` is the field's twist (1 by default).
pub fn add_char(field: &Field, x: u32) -> CycNum {
    CycNum::zeta_pow(field.p(), field.chi_exponent(x))
}

/// `sum_{x in F_q^d} chi(m . x)`, computed by direct enumeration.
pub fn char_orthogonality_sum(field: &Field, d: usize, m: &[u32]) -> Result<CycNum> {
    let space = Space::new(field, d)?;
    let mi = space.encode(m)?;
    let p = field.p();
    let mut counts = vec![0i64; p as usize];
    for x in 0..space.size() {
        counts[space.chi_dot(mi, x) as usize] += 1;
    }
    Ok(CycNum::from_exponent_counts(p, &counts))
}

/// `eta(s)` in `{-1, 0, 1}`.
pub fn quad_char(field: &Field, s: u32) -> i8 {
    field.eta(s)
}

/// `G = sum_{s != 0} eta(s) chi(s)`.
pub fn gauss_sum(field: &Field) -> CycNum {
    let p = field.p();
    let mut counts = vec![0i64; p as usize];
    for s in 1..field.q() {
        counts[field.chi_exponent(s) as usize] += field.eta(s) as i64;
    }
    CycNum::from_exponent_counts(p, &counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_core::make_field;
    use num_rational::BigRational;

    #[test]
    fn character_values() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(add_char(&f3, 0), CycNum::one(3));
        assert_eq!(add_char(&f3, 1), CycNum::zeta_pow(3, 1));
        let f9 = make_field(3, 2).unwrap();
        let x = f9.elements().find(|&x| f9.trace(x) == 2).unwrap();
        assert_eq!(add_char(&f9, x), CycNum::zeta_pow(3, 2));
    }

    #[test]
    fn character_is_additive_and_nontrivial() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let f = make_field(p, n).unwrap();
            assert!(f.elements().any(|x| add_char(&f, x) != CycNum::one(p)));
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(&add_char(&f, x) * &add_char(&f, y), add_char(&f, f.add(x, y)));
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(
            char_orthogonality_sum(&f3, 2, &[0, 0]).unwrap(),
            CycNum::from_int(3, 9)
        );
        assert!(char_orthogonality_sum(&f3, 2, &[1, 0]).unwrap().is_zero());
        let f5 = make_field(5, 1).unwrap();
        assert!(char_orthogonality_sum(&f5, 1, &[2]).unwrap().is_zero());
        let f9 = make_field(3, 2).unwrap();
        assert!(char_orthogonality_sum(&f9, 2, &[4, 7]).unwrap().is_zero());
    }

    #[test]
    fn gauss_sum_q3_is_two_terms() {
        let f = make_field(3, 1).unwrap();
        // eta(1) chi(1) + eta(2) chi(2) = zeta - zeta^2
        let expect = &CycNum::zeta_pow(3, 1) - &CycNum::zeta_pow(3, 2);
        assert_eq!(gauss_sum(&f), expect);
    }

    #[test]
    fn gauss_sum_modulus_small() {
        for (p, n) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let f = make_field(p, n).unwrap();
            let g = gauss_sum(&f);
            let q = BigRational::from_integer(f.q().into());
            assert_eq!(g.norm_sqr().as_rational(), Some(&q));
        }
    }

    #[test]
    fn gauss_sum_invariant_under_twist_up_to_eta() {
        // G(chi_a) = eta(a) G(chi)
        let f = make_field(7, 1).unwrap();
        let g = gauss_sum(&f);
        for a in 1..7 {
            let ga = gauss_sum(&f.twisted(a).unwrap());
            let expect = if f.eta(a) == 1 { g.clone() } else { -&g };
            assert_eq!(ga, expect);
        }
    }
}
