use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use spectrum_core::exact::{int, rat};
use spectrum_core::slice::d_line_via_slices;
use spectrum_core::spectrum::certify::pair_value;
use spectrum_core::spectrum::ParamPair;
use spectrum_core::torus::all_slices;
use spectrum_core::{
    d_line_oracle, format_rational, parse_basis, parse_rational, Progression, ProgressionSet,
    Subtorus1D, Subtorus2D,
};

fn plane() -> impl Strategy<Value = Subtorus2D> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(-3i64..=3, n),
                proptest::collection::vec(-3i64..=3, n),
            )
        })
        .prop_filter_map("proper plane", |(u, v)| {
            let s = Subtorus2D::from_i64(&u, &v).ok()?;
            (s.is_proper() && s.projected().dim() >= 2).then_some(s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn basis_round_trip(u in proptest::collection::vec(-50i64..50, 1..6)) {
        let v: Vec<i64> = u.iter().map(|x| x + 1).collect();
        let text = |w: &[i64]| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let s = format!("{};{}", text(&u), text(&v));
        let (a, b) = parse_basis(&s).unwrap();
        prop_assert_eq!(a.to_i64().unwrap(), u);
        prop_assert_eq!(b.to_i64().unwrap(), v);
    }

    #[test]
    fn line_values_in_range(v in proptest::collection::vec(1i64..40, 1..6)) {
        let d = d_line_oracle(&Subtorus1D::from_i64(&v).unwrap()).unwrap();
        prop_assert!(d >= rat(0, 1) && d < rat(1, 2));
    }

    #[test]
    fn slices_agree_with_oracle(u in plane(), a in -6i64..=6, b in -6i64..=6) {
        prop_assume!(a.gcd(&b) == 1);
        let p = u.projected();
        let slices = all_slices(&p).unwrap();
        if let Some(direct) = pair_value(&p, a, b).unwrap() {
            prop_assert_eq!(d_line_via_slices(&slices, &int(a), &int(b)).unwrap(), direct);
        }
    }

    #[test]
    fn normalised_pairs(a in -50i64..50, b in -50i64..50) {
        prop_assume!(a != 0 || b != 0);
        let p = ParamPair::normalise(int(a), int(b)).unwrap();
        prop_assert!(ParamPair::new(p.a.clone(), p.b.clone()).is_ok());
        prop_assert!(ParamPair::normalise(int(-a), int(-b)).unwrap() == p);
    }

    #[test]
    fn normalised_progression_has_same_tail(an in 1i64..20, ad in 1i64..5, bn in 1i64..60, bd in 1i64..5) {
        let p = Progression::new(rat(an, ad), rat(bn, bd));
        let q = p.normalized();
        prop_assert!(q.beta > q.alpha && q.beta <= &q.alpha * rat(2, 1));
        let set = ProgressionSet::from_progressions(std::slice::from_ref(&q));
        for s in 0..10 {
            prop_assert!(set.contains(&p.value(&int(s))));
        }
        prop_assert!(!(&q.beta - &p.beta).is_zero() || q == p);
    }
}
