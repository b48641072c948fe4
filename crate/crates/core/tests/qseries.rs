mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use qdilog::qseries::{poincare_p, LaurentPoly, QSeries};
use qdilog::Error;

use common::{poincare_dense, q_coeffs};

/// A series as plain data: coefficients of `t^lo..` known up to `t^hi`.
#[derive(Clone, Debug)]
struct Dense {
    lo: i64,
    hi: i64,
    coeffs: Vec<i64>,
}

impl Dense {
    fn series(&self) -> QSeries {
        QSeries::from_i64s(self.lo, self.hi, &self.coeffs)
    }

    fn at(&self, k: i64) -> i64 {
        let i = k - self.lo;
        if i < 0 || i >= self.coeffs.len() as i64 || k > self.hi {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// The first exponent where the stored coefficients are nonzero.
    fn valuation(&self) -> Option<i64> {
        (self.lo..=self.hi).find(|&k| self.at(k) != 0)
    }
}

fn dense() -> impl Strategy<Value = Dense> {
    (-6i64..6, prop::collection::vec(-9i64..10, 0..8), 0i64..12).prop_map(|(lo, coeffs, extra)| {
        let hi = lo + coeffs.len() as i64 + extra - 1;
        Dense { lo, hi, coeffs }
    })
}

/// The product of two dense series with the window rule applied to the
/// actual valuations.
fn reference_mul(a: &Dense, b: &Dense) -> Option<(i64, Vec<(i64, i64)>)> {
    let (va, vb) = (a.valuation()?, b.valuation()?);
    let hi = (a.hi + vb).min(b.hi + va);
    let terms = (va + vb..=hi).map(|k| (k, (va..=a.hi).map(|i| a.at(i) * b.at(k - i)).sum())).collect();
    Some((hi, terms))
}

fn check_terms(s: &QSeries, terms: &[(i64, i64)]) -> Result<(), TestCaseError> {
    for &(k, c) in terms {
        prop_assert_eq!(s.coeff(k).unwrap(), BigInt::from(c), "coefficient of t^{}", k);
    }
    Ok(())
}

proptest! {
    #[test]
    fn product_matches_reference(a in dense(), b in dense()) {
        let p = a.series().mul(&b.series());
        if let Some((hi, terms)) = reference_mul(&a, &b) {
            prop_assert_eq!(p.hi(), hi);
            check_terms(&p, &terms)?;
        } else {
            prop_assert!(p.is_zero());
        }
    }

    #[test]
    fn sum_matches_reference(a in dense(), b in dense()) {
        let s = a.series().add(&b.series());
        let hi = a.hi.min(b.hi);
        prop_assert_eq!(s.hi(), hi);
        let terms: Vec<(i64, i64)> = (a.lo.min(b.lo)..=hi).map(|k| (k, a.at(k) + b.at(k))).collect();
        check_terms(&s, &terms)?;
    }

    #[test]
    fn ring_axioms(a in dense(), b in dense(), c in dense()) {
        let (a, b, c) = (a.series(), b.series(), c.series());
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_of_units(lead in prop::sample::select(vec![-1i64, 1]), k in -4i64..4, rest in prop::collection::vec(-5i64..6, 0..6), extra in 0i64..10) {
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        let a = QSeries::from_i64s(k, k + coeffs.len() as i64 + extra, &coeffs);
        let inv = a.inverse_unit().unwrap();
        let prod = a.mul(&inv);
        prop_assert!(prod.hi() >= a.hi() - k);
        prop_assert!(prod.agrees_with(&QSeries::one(prod.hi())));
    }

    #[test]
    fn json_round_trip(a in dense()) {
        let s = a.series();
        prop_assert_eq!(QSeries::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn shift_is_multiplication_by_a_power(a in dense(), k in -6i64..6) {
        let s = a.series();
        let m = QSeries::monomial(1, k, k + 1000);
        prop_assert_eq!(s.shift(k), s.mul(&m));
    }

    #[test]
    fn involution_is_an_involutive_ring_map(a in prop::collection::vec(-9i64..10, 0..7), la in -5i64..5, b in prop::collection::vec(-9i64..10, 0..7), lb in -5i64..5) {
        let p = LaurentPoly::from_coeffs(la, a.into_iter().map(BigInt::from).collect());
        let q = LaurentPoly::from_coeffs(lb, b.into_iter().map(BigInt::from).collect());
        prop_assert_eq!(p.involute().involute(), p.clone());
        prop_assert_eq!((&p * &q).involute(), &p.involute() * &q.involute());
        prop_assert_eq!((&p + &q).involute(), &p.involute() + &q.involute());
    }
}

#[test]
fn poincare_series_count_bounded_partitions() {
    for j in 0..=6 {
        assert_eq!(q_coeffs(&poincare_p(j, 40), 20), poincare_dense(j as usize, 20), "P_{j}");
    }
}

#[test]
fn square_of_p1() {
    let p1 = poincare_p(1, 6);
    assert_eq!(q_coeffs(&p1.mul(&p1), 3), vec![1, 2, 3, 4]);
}

#[test]
fn one_minus_q_inverts_p1() {
    let p = QSeries::from_i64s(0, 30, &[1, 0, -1]).mul(&poincare_p(1, 30));
    assert!(p.agrees_with(&QSeries::one(30)));
}

#[test]
fn non_units_are_rejected() {
    let a = QSeries::from_i64s(0, 10, &[2, 1]);
    assert!(matches!(a.inverse_unit(), Err(Error::NonUnitLeadingCoefficient { .. })));
    assert!(QSeries::zero(5).inverse_unit().is_err());
}

#[test]
fn window_of_mixed_sum() {
    let a = QSeries::monomial(1, -1, 3);
    let b = QSeries::monomial(1, 1, 2);
    let s = a.add(&b);
    assert_eq!(s.hi(), 2);
    assert_eq!(s, QSeries::from_i64s(-1, 2, &[1, 0, 1]));
}

#[test]
fn involution_swaps_dilogarithm_terms() {
    for j in 0..=12 {
        assert!(qdilog::qseries::involution_swaps_terms(j), "term {j}");
    }
}
