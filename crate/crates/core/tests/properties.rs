use std::sync::Arc;

use otlab_core::*;
use proptest::prelude::*;
use rand::Rng;

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.0, 1.25, 1.5, 2.0, 3.0, 4.0])
}

fn exponent_above_one() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.25, 1.5, 2.0, 3.0, 4.0])
}

fn random_potential(space: &Arc<FiniteMetricSpace>, p: f64, seed: u64, scale: f64) -> Potential {
    let mut rng = otlab_core::rng::seeded(seed);
    let values = (0..space.len()).map(|_| rng.random_range(-scale..scale)).collect();
    Potential::finite(space.clone(), p, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_spaces_are_metric(n in 1usize..16, seed in any::<u64>()) {
        let a = random_metric_space(n, seed).unwrap();
        prop_assert!(validate_metric(a.dist().view()).is_ok());
        let b = random_euclidean_space(n, 3, seed).unwrap();
        prop_assert!(validate_metric(b.dist().view()).is_ok());
    }

    #[test]
    fn cost_matrix_respects_the_convexity_bound(n in 1usize..10, seed in any::<u64>(), p in exponent()) {
        let s = random_metric_space(n, seed).unwrap();
        let c = cost_matrix(&s, p).unwrap();
        let factor = 2f64.powf(p - 1.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let bound = factor * (c[[i, k]] + c[[k, j]]);
                    prop_assert!(c[[i, j]] <= bound * (1.0 + 1e-12) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn moments_are_bounded_by_the_diameter(seed in any::<u64>(), n in 1usize..10, p in exponent()) {
        let t = random_triple(SpaceKind::Euclidean { dim: 2 }, n, seed).unwrap();
        let cap = t.space.max_distance().powf(p);
        for x0 in 0..n {
            let m = p_moment(&t.mu, x0, p).unwrap();
            prop_assert!(m.is_finite() && m >= 0.0 && m <= cap * (1.0 + 1e-12));
        }
    }

    #[test]
    fn wasserstein_is_a_metric(seed in any::<u64>(), p in exponent()) {
        let t = sweep_triple(9, seed).unwrap();
        let lm = wasserstein_p(&t.lambda, &t.mu, p).unwrap();
        let ml = wasserstein_p(&t.mu, &t.lambda, p).unwrap();
        let mn = wasserstein_p(&t.mu, &t.nu, p).unwrap();
        let ln = wasserstein_p(&t.lambda, &t.nu, p).unwrap();
        prop_assert!((lm - ml).abs() <= 1e-9);
        prop_assert!(lm >= 0.0);
        prop_assert_eq!(wasserstein_p(&t.mu, &t.mu, p).unwrap(), 0.0);
        prop_assert!(ln <= lm + mn + 1e-8);
    }

    #[test]
    fn wasserstein_grows_with_the_exponent(seed in any::<u64>()) {
        let t = sweep_triple(8, seed).unwrap();
        let mut last = 0.0;
        for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let w = wasserstein_p(&t.lambda, &t.nu, p).unwrap();
            prop_assert!(w >= last - 1e-9, "W_{} = {} fell below {}", p, w, last);
            last = w;
        }
    }

    #[test]
    fn solutions_carry_a_certificate(seed in any::<u64>(), p in exponent()) {
        let t = sweep_triple(10, seed).unwrap();
        let sol = solve_transport(&t.lambda, &t.nu, p).unwrap();
        prop_assert!(sol.is_certified());
        prop_assert!(duality_gap(&sol).abs() <= 1e-7 * (1.0 + sol.value));
        prop_assert!(sol.slackness_violation() <= 1e-7);
        prop_assert!(sol.coupling.marginal_deviation() <= 1e-10);
        prop_assert!(sol.duals.max_violation() <= 1e-9);
    }

    #[test]
    fn weak_duality_against_arbitrary_feasible_pairs(seed in any::<u64>(), p in exponent()) {
        let t = sweep_triple(8, seed).unwrap();
        let value = solve_transport(&t.lambda, &t.nu, p).unwrap().value;
        let f = random_potential(&t.space, p, seed ^ 1, 3.0);
        let g = p_legendre(&f).unwrap();
        let duals = DualPair::new(t.space.clone(), p, f.to_finite().unwrap(), g.to_finite().unwrap()).unwrap();
        prop_assert!(duals.objective(&t.lambda, &t.nu) <= value + 1e-9);
        let product = Coupling::product(t.lambda.clone(), t.nu.clone()).unwrap();
        prop_assert!(product.cost(&cost_matrix(&t.space, p).unwrap()) >= value - 1e-9);
    }

    #[test]
    fn solver_matches_the_permutation_oracle(n in 1usize..=6, seed in any::<u64>(), p in exponent()) {
        let (mu, nu) = random_uniform_pair(n, 2, seed).unwrap();
        let exact = wasserstein_p(&mu, &nu, p).unwrap();
        let brute = permutation_oracle(&mu, &nu, p).unwrap();
        prop_assert!((exact - brute).abs() <= 1e-9, "{} vs {}", exact, brute);
    }

    #[test]
    fn transform_pairs_are_feasible(seed in any::<u64>(), n in 1usize..10, p in exponent()) {
        let s = Arc::new(random_euclidean_space(n, 2, seed).unwrap());
        let f = random_potential(&s, p, seed, 2.0);
        let g = p_legendre(&f).unwrap().to_finite().unwrap();
        let f = f.to_finite().unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert!(f[x] + g[y] <= s.d(x, y).powf(p) + 1e-12);
            }
        }
    }

    #[test]
    fn triple_transform_is_a_single_transform(seed in any::<u64>(), n in 1usize..10, p in exponent()) {
        let s = Arc::new(random_metric_space(n, seed).unwrap());
        let f = random_potential(&s, p, seed, 2.0);
        let once = p_legendre(&f).unwrap();
        let thrice = p_legendre(&p_legendre(&once).unwrap()).unwrap();
        prop_assert!(thrice.max_abs_diff(&once) <= 1e-9);
        prop_assert!(is_dp_concave(&once));
    }

    #[test]
    fn transform_reverses_order(seed in any::<u64>(), n in 1usize..10, p in exponent(), bump in 0.0f64..1.0) {
        let s = Arc::new(random_metric_space(n, seed).unwrap());
        let f = random_potential(&s, p, seed, 2.0);
        let mut rng = otlab_core::rng::seeded(seed ^ 7);
        let larger: Vec<f64> = f.to_finite().unwrap().iter().map(|v| v + bump * rng.random::<f64>()).collect();
        let g = Potential::finite(s.clone(), p, larger).unwrap();
        let tf = p_legendre(&f).unwrap().to_finite().unwrap();
        let tg = p_legendre(&g).unwrap().to_finite().unwrap();
        for (a, b) in tg.iter().zip(&tf) {
            prop_assert!(a <= &(b + 1e-12));
        }
    }

    #[test]
    fn normalization_never_lowers_the_objective(seed in any::<u64>(), p in exponent()) {
        let t = sweep_triple(8, seed).unwrap();
        // A feasible but far from optimal pair: a random a and b shifted down.
        let f = random_potential(&t.space, p, seed, 1.0);
        let mut b = p_legendre(&f).unwrap().to_finite().unwrap();
        b.iter_mut().for_each(|v| *v -= 0.3);
        let duals = DualPair::new(t.space.clone(), p, f.to_finite().unwrap(), b).unwrap();
        let better = conjugate_normalize(&duals).unwrap();
        prop_assert!(better.objective(&t.lambda, &t.nu) >= duals.objective(&t.lambda, &t.nu) - 1e-9);
        prop_assert!(better.max_violation() <= 1e-9);
    }

    #[test]
    fn beta_is_concave_and_splits_the_bound(seed in any::<u64>(), p in exponent_above_one(), eta in 1e-2f64..1e2) {
        let t = sweep_triple(8, seed).unwrap();
        let gamma = random_potential(&t.space, p, seed, 2.0);
        let gamma = p_legendre(&p_legendre(&gamma).unwrap()).unwrap();
        let alpha = p_legendre(&gamma).unwrap();
        let beta = beta_eta(&gamma, eta).unwrap();
        let k = 1.0 + f_eta(p, eta).unwrap();
        prop_assert!(is_dp_concave(&beta.scaled(1.0 / k)));
        let report = lemma_bound_check(&alpha, &beta, &gamma, eta).unwrap();
        prop_assert!(report.holds(), "violation {}", report.max_scaled_violation);
    }

    #[test]
    fn glueing_keeps_both_marginals(seed in any::<u64>(), p in exponent()) {
        let t = sweep_triple(8, seed).unwrap();
        let lm = solve_transport(&t.lambda, &t.mu, p).unwrap();
        let mn = solve_transport(&t.mu, &t.nu, p).unwrap();
        let glued = glue_couplings(&lm.coupling, &mn.coupling).unwrap();
        prop_assert!((glued.total_mass() - 1.0).abs() <= 1e-10);
        let rho13 = glued.marginal_13().unwrap();
        prop_assert!(rho13.marginal_deviation() <= 1e-10);
        let check = triangle_via_glueing(&t.lambda, &t.mu, &t.nu, p).unwrap();
        prop_assert!(check.ok);
    }

    #[test]
    fn p_two_reduces_to_the_reciprocal(log_eta in -4.0f64..4.0) {
        let eta = 10f64.powf(log_eta);
        let f = f_eta(2.0, eta).unwrap();
        prop_assert!((f * eta - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn scalar_inequality_on_random_samples(p in 1.05f64..6.0, log_eta in -3.0f64..3.0, seed in any::<u64>()) {
        let eta = 10f64.powf(log_eta);
        let mut rng = otlab_core::rng::seeded(seed);
        let samples: Vec<(f64, f64)> = (0..200)
            .map(|_| (10f64.powf(rng.random_range(-3.0..3.0)), 10f64.powf(rng.random_range(-3.0..3.0))))
            .collect();
        let report = lemma2_check(p, eta, &samples).unwrap();
        prop_assert!(report.holds(), "relative violation {}", report.max_relative_violation);
    }

    #[test]
    fn chosen_eta_collapses_the_bound(p in 1.05f64..6.0, log_z in -3.0f64..3.0) {
        let z = 10f64.powf(log_z);
        prop_assert!(collapse_identity_check(p, z).unwrap() <= 1e-10);
    }

    #[test]
    fn kr_potential_is_lipschitz(seed in any::<u64>()) {
        let t = sweep_triple(9, seed).unwrap();
        let sol = solve_transport(&t.lambda, &t.nu, 1.0).unwrap();
        let phi = kr_potential(&sol.duals).unwrap().to_finite().unwrap();
        for x in 0..phi.len() {
            for y in 0..phi.len() {
                prop_assert!((phi[x] - phi[y]).abs() <= t.space.d(x, y) * (1.0 + 1e-9) + 1e-12);
            }
        }
        let objective = t.lambda.integrate(&phi) - t.nu.integrate(&phi);
        prop_assert!((objective - sol.value).abs() <= 1e-8);
    }
}
