use bops_core::consumer::{
    choose_channel, demand, utility_bops, utility_bops_after_stockout, utility_online,
};
use bops_core::equilibrium::{
    bops_full_stock_threshold, bops_stocking_threshold, effort_cost_threshold, global_equilibrium,
    optimal_q_given_mu,
};
use bops_core::inventory::{profit, stock_probability};
use bops_core::oracle::{argmax_channel, demand_by_integration, fixed_point_xi};
use bops_core::{Belief, Channel, ModelParams, SolutionRegion};
use proptest::prelude::*;

fn valid_params() -> impl Strategy<Value = ModelParams> {
    (0.5f64..6.0, 0.1f64..6.0, 1.0f64..20.0, 0.05f64..0.95, 0.0f64..0.999, 0.0f64..5.0).prop_map(
        |(co, extra_wait, p, c_frac, k_frac, margin)| {
            let m = co + extra_wait;
            ModelParams::new(p, c_frac * p, co, k_frac * p, m, Some(p + co + m + margin)).unwrap()
        },
    )
}

fn belief() -> impl Strategy<Value = Belief> {
    prop_oneof![
        1 => Just(Belief::HOPELESS),
        1 => Just(Belief::CERTAIN),
        8 => (0.0f64..=1.0).prop_map(|x| Belief::new(x).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn choice_ignores_valuation_shift(
        params in valid_params(), b in belief(), t in 0.0f64..15.0, mu in 0.0f64..1.0, shift in 0.0f64..50.0,
    ) {
        let mu_bar = mu * params.max_wait;
        let shifted = ModelParams { valuation: params.valuation + shift, ..params };
        prop_assert_eq!(
            choose_channel(&params, b, t, mu_bar).unwrap(),
            choose_channel(&shifted, b, t, mu_bar).unwrap()
        );
    }

    #[test]
    fn choice_is_utility_argmax(params in valid_params(), b in belief(), t in 0.0f64..15.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        prop_assert_eq!(
            choose_channel(&params, b, t, mu_bar).unwrap().channel(),
            argmax_channel(&params, b, t, mu_bar).unwrap()
        );
    }

    #[test]
    fn store_visitors_prefer_online_after_stockout(
        params in valid_params(), b in belief(), t in 0.0f64..15.0, mu in 0.0f64..1.0,
    ) {
        let mu_bar = mu * params.max_wait;
        let choice = choose_channel(&params, b, t, mu_bar).unwrap();
        if choice.channel() == Channel::Store {
            prop_assert!(mu_bar > params.delivery_fee);
            prop_assert!(utility_online(&params) >= utility_bops_after_stockout(&params, t, mu_bar));
        }
    }

    #[test]
    fn bops_utility_monotone(params in valid_params(), b in belief(), t in 0.0f64..10.0, dt in 1e-6f64..1.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.delivery_fee;
        let base = utility_bops(&params, b, t, mu_bar).unwrap();
        prop_assert!(utility_bops(&params, b, t + dt, mu_bar).unwrap() < base);
        let longer = (mu_bar + dt).min(params.max_wait);
        prop_assert!(utility_bops(&params, b, t, longer).unwrap() <= base);
    }

    #[test]
    fn demand_monotone_in_belief(params in valid_params(), x in 0.0f64..=1.0, y in 0.0f64..=1.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let d_lo = demand(&params, Belief::new(lo).unwrap(), mu_bar);
        let d_hi = demand(&params, Belief::new(hi).unwrap(), mu_bar);
        prop_assert!(d_lo <= d_hi);
    }

    #[test]
    fn demand_is_measure_of_buyers(params in valid_params(), b in belief(), mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let steps = 20_000;
        let integrated = demand_by_integration(&params, b, mu_bar, steps).unwrap();
        let h = 2.0 * params.delivery_fee / steps as f64;
        prop_assert!((integrated - demand(&params, b, mu_bar)).abs() <= h);
    }

    #[test]
    fn stock_probability_bounded_and_monotone(params in valid_params(), q in 0.0f64..12.0, dq in 0.0f64..2.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let xi = stock_probability(&params, q, mu_bar).unwrap().value();
        let more = stock_probability(&params, q + dq, mu_bar).unwrap().value();
        prop_assert!((0.0..=1.0).contains(&xi));
        prop_assert!(xi <= more);
    }

    #[test]
    fn stock_probability_is_a_fixed_point(params in valid_params(), q in 0.0f64..12.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let xi = stock_probability(&params, q, mu_bar).unwrap();
        if xi.value() > 0.0 && xi.value() < 1.0 {
            let d = demand(&params, xi.as_belief(), mu_bar);
            prop_assert!((xi.value() * d - q).abs() <= 1e-9);
        }
        let bisected = fixed_point_xi(&params, q, mu_bar, 1e-12);
        prop_assert!((xi.value() - bisected).abs() <= 1e-9);
    }

    #[test]
    fn surplus_stock_lowers_profit(params in valid_params(), extra in 1e-3f64..4.0, mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let full = params.delivery_fee;
        let at_full = profit(&params, full, mu_bar).unwrap();
        let over = profit(&params, full + extra, mu_bar).unwrap();
        prop_assert!(over < at_full);
    }

    /// The regional optimum beats every stock level on a fine 1-D grid, and
    /// its reported profit is what the profit function gives at that stock.
    #[test]
    fn regional_optimum_dominates_q_grid(params in valid_params(), mu in 0.0f64..1.0) {
        let mu_bar = mu * params.max_wait;
        let best = optimal_q_given_mu(&params, mu_bar).unwrap();
        let realised = profit(&params, best.q, mu_bar).unwrap();
        prop_assert!((realised - best.profit).abs() <= 1e-9 * best.profit.abs().max(1.0));
        let q_max = 2.0 * params.delivery_fee;
        for i in 0..=2000 {
            let q = q_max * i as f64 / 2000.0;
            prop_assert!(profit(&params, q, mu_bar).unwrap() <= best.profit + 1e-9 * best.profit.abs().max(1.0));
        }
    }

    #[test]
    fn regions_respect_price_condition(params in valid_params(), mu in 0.0f64..1.0) {
        let region = optimal_q_given_mu(&params, mu * params.max_wait).unwrap().region;
        prop_assert!(region.check_admissible(&params).is_ok());
    }

    #[test]
    fn bops_two_stock_matches_interior_closed_form(params in valid_params(), s in 0.01f64..0.99) {
        let lo = bops_stocking_threshold(&params);
        let hi = bops_full_stock_threshold(&params).min(params.delivery_fee);
        let mu_bar = lo + s * (hi - lo);
        let best = optimal_q_given_mu(&params, mu_bar).unwrap();
        prop_assert_eq!(best.region, SolutionRegion::BopsII);
        let (p, c, co) = (params.price, params.unit_cost, params.delivery_fee);
        let expected = ((p + c) / c * mu_bar - co) / (2.0 * mu_bar);
        let xi = stock_probability(&params, best.q, mu_bar).unwrap().value();
        prop_assert!((xi - expected).abs() <= 1e-9);
        prop_assert!(xi > 0.0 && xi < 1.0);
    }

    #[test]
    fn equilibrium_is_best_of_local_optima(params in valid_params()) {
        let eq = global_equilibrium(&params).unwrap();
        for region in SolutionRegion::ALL {
            if let Ok(mu) = bops_core::equilibrium::local_optimal_mu(&params, region) {
                let local = optimal_q_given_mu(&params, mu).unwrap();
                prop_assert!(local.profit <= eq.profit + 1e-9);
            }
        }
        let realised = profit(&params, eq.q, eq.mu_bar).unwrap();
        prop_assert!((realised - eq.profit).abs() <= 1e-9 * eq.profit.abs().max(1.0));
        prop_assert_eq!(eq.region == SolutionRegion::BopsIII, params.effort_cost <= effort_cost_threshold(&params));
    }
}
