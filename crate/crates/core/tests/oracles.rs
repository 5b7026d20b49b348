//! Values checked against independent computations: closed-form Vasicek
//! bond prices via Monte Carlo, and an end-to-end deterministic price
//! frozen from a separate script that values the swap with flat-curve
//! exponentials rather than the affine bond formula.

use nsfr_fva::fva::price_simulation;
use nsfr_fva::ratesim::{simulate_paths, TimeGrid, VasicekParams};
use nsfr_fva::scenario::ScenarioConfig;
use nsfr_fva::{FundingQuote, Tenor};

fn rel_close(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol * expected.abs().max(1.0)
}

#[test]
fn bond_price_matches_monte_carlo() {
    let params = VasicekParams { r0: 0.03, mean_reversion: 0.5, long_run_mean: 0.01, volatility: 0.02 };
    let grid = TimeGrid::uniform(5.0, 96, 2).unwrap();
    let n = 20_000;
    let paths = simulate_paths(&params, &grid, n, 99).unwrap();
    for t in [1.0, 3.0, 5.0] {
        let end = grid.index_of(t).unwrap();
        // trapezoid keeps the time-discretisation bias far below the MC error
        let samples: Vec<f64> = paths
            .iter()
            .map(|p| {
                let integral: f64 = (0..end).map(|k| 0.5 * (p.rates[k] + p.rates[k + 1]) * grid.dt(k)).sum();
                (-integral).exp()
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let exact = params.zero_coupon_bond_price(params.r0, t);
        assert!(
            (mean - exact).abs() < 3.0 * se + 1e-6,
            "t={t}: mc {mean} exact {exact} se {se}"
        );
    }
}

fn deterministic(r0: f64, alpha: f64) -> (f64, f64, f64) {
    let mut config = ScenarioConfig::default();
    config.rates.r0 = r0;
    config.rates.volatility = 0.0;
    config.rates.n_paths = 3;
    let sim = config.simulation().unwrap();
    let quote = FundingQuote { tenor: Tenor::ONE_YEAR, spread: 0.0051, shortfall_spread: 0.0051, alpha };
    let f = price_simulation(&sim, &config.balance_config(), &quote).unwrap();
    (f.fva1, f.fva2, f.fca_baseline)
}

#[test]
fn deterministic_price_matches_frozen_oracle() {
    // (r0, alpha) -> (fva1, fva2, fca)
    let cases = [
        (0.01, 1.0, (7730.11541723385, 0.0, 0.0)),
        (0.01, 0.5, (15460.2308344677, 0.0, 0.0)),
        (0.03, 1.0, (71010.58688686426, 428.5676760082048, 64055.06195647838)),
        (0.03, 0.5, (142021.17377372851, 0.0, 64055.06195647838)),
    ];
    for (r0, alpha, (f1, f2, fca)) in cases {
        let (a1, a2, ac) = deterministic(r0, alpha);
        assert!(rel_close(a1, f1, 1e-9), "fva1 r0={r0} alpha={alpha}: {a1} vs {f1}");
        assert!(rel_close(a2, f2, 1e-9), "fva2 r0={r0} alpha={alpha}: {a2} vs {f2}");
        assert!(rel_close(ac, fca, 1e-9), "fca r0={r0} alpha={alpha}: {ac} vs {fca}");
    }
}
