use digitlaw::asymptotics::hill_prob;
use digitlaw::digit_core::{count_pth_digit_upto, count_pth_digit_upto_oracle, pow10};
use digitlaw::exact_law::{distribution_at, prob_exact, prob_scan, prob_via_recursion, Decimation};
use digitlaw::oracle::prob_oracle;
use digitlaw::sum::CompensatedSum;
use digitlaw::{Digit, ModelParams, Position};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn pos(p: u32) -> Position {
    Position::new(p).unwrap()
}

/// `(p, n)` with `n` at least `10^(p-1)` and at most `max`.
fn bound(ps: std::ops::RangeInclusive<u32>, max: u64) -> impl Strategy<Value = (u32, u64)> {
    ps.prop_flat_map(move |p| {
        let lo = pow10(p - 1);
        (Just(p), lo..=max.max(lo))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digits_partition_probability((p, n) in bound(2..=6, 400_000)) {
        let total: f64 = Digit::all()
            .map(|d| prob_exact(&ModelParams::new(n, pos(p), d).unwrap()).unwrap().value)
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-10, "{}", total);
    }

    #[test]
    fn smaller_digits_are_more_likely((p, n) in bound(2..=5, 150_000)) {
        let probs = distribution_at(n, pos(p)).unwrap();
        for d in 0..9 {
            if n >= pos(p).floor() + 9 {
                prop_assert!(probs[d] > probs[d + 1], "d={} {:?}", d, probs);
            } else {
                prop_assert!(probs[d] >= probs[d + 1], "d={} {:?}", d, probs);
            }
        }
    }

    #[test]
    fn recursion_matches_closed_form((p, n) in bound(2..=7, 5_000_000), d in 0u32..10) {
        let params = ModelParams::from_raw(n, p, d).unwrap();
        let a = prob_via_recursion(&params).value;
        let b = prob_exact(&params).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn counts_match_enumeration((p, m) in bound(3..=4, 300_000), d in 0u32..10) {
        let d = Digit::new(d).unwrap();
        let fast = count_pth_digit_upto(m, pos(p), d).unwrap().total();
        let slow = count_pth_digit_upto_oracle(m, pos(p), d, u64::MAX).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn closed_form_matches_direct_sum((p, n) in bound(2..=4, 60_000), d in 0u32..10) {
        let params = ModelParams::from_raw(n, p, d).unwrap();
        let a = prob_exact(&params).unwrap();
        let b = prob_oracle(&params).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-12);
        prop_assert!(a.abs_error_bound < 1e-12);
    }

    #[test]
    fn compensated_sum_respects_its_bound(xs in prop::collection::vec(-1e6f64..1e6, 1..400)) {
        let s: CompensatedSum = xs.iter().copied().collect();
        let exact = xs
            .iter()
            .map(|&x| BigRational::from_float(x).unwrap())
            .fold(BigRational::zero(), |acc, x| acc + x);
        let err = (exact - BigRational::from_float(s.value()).unwrap()).abs();
        prop_assert!(err.to_f64().unwrap() <= s.error_bound());
    }
}

#[test]
fn scan_checkpoints_match_closed_form() {
    for p in [2u32, 3] {
        let points: Vec<_> = prob_scan(pow10(6), pos(p), Decimation::default())
            .unwrap()
            .collect();
        for m in p..=6 {
            let n = pow10(m) - 1;
            let pt = points.iter().find(|pt| pt.n == n).expect("decade end kept");
            for d in Digit::all() {
                let exact = prob_exact(&ModelParams::new(n, pos(p), d).unwrap())
                    .unwrap()
                    .value;
                assert!(
                    (pt.probs[d.index()] - exact).abs() <= 1e-10,
                    "n={n} p={p} d={d}"
                );
            }
        }
    }
}

#[test]
fn hill_sums_telescope() {
    for p in 2..=6 {
        let total: f64 = Digit::all()
            .map(|d| hill_prob(d, pos(p)).unwrap().value)
            .sum();
        assert!((total - 1.0).abs() <= 1e-12, "p={p}: {total}");
    }
}
