use proptest::prelude::*;
use surfcode::resource::{select_distance, total_report, FactoringParams, LogicalRateModel, Stage};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Every assembled report meets its error budgets.
    #[test]
    fn budgets_hold(n_bits in 100u64..5000, log_p in -5.0f64..-2.4) {
        let mut params = FactoringParams::reference();
        params.n_bits = n_bits;
        params.p = 10f64.powf(log_p);
        let r = total_report(&params).unwrap();
        prop_assert!(r.final_error < r.p_a);
        prop_assert!(r.stage1_distilled_error < r.p_a);
        prop_assert!(r.chain.p2 < r.p_a);
        prop_assert!(r.chain.p2 < r.chain.p1 && r.chain.p1 < r.chain.p_inject);
        prop_assert_eq!(r.total_qubits, r.factories_needed * r.factory.factory_qubits + r.computational_qubits);
        prop_assert!(r.factories_needed >= 1 && r.q1 > 0 && r.q2 > 0);
    }

    /// Lower physical error never needs a larger code or a larger machine.
    #[test]
    fn distance_monotone_in_p(log_p in -5.0f64..-2.3, shrink in 1.0f64..10.0) {
        let m = LogicalRateModel::factoring();
        let p = 10f64.powf(log_p);
        for stage in [Stage::Final, Stage::First] {
            let d = select_distance(&m, p, 1e-15, stage).unwrap();
            let d_low = select_distance(&m, p / shrink, 1e-15, stage).unwrap();
            prop_assert!(d_low <= d);
        }
        let mut hi = FactoringParams::reference();
        hi.p = p;
        let mut lo = hi;
        lo.p = p / shrink;
        let (a, b) = (total_report(&hi).unwrap(), total_report(&lo).unwrap());
        prop_assert!(b.chain.d1 <= a.chain.d1 && b.chain.d2 <= a.chain.d2);
    }
}
