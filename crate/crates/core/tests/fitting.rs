use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use spin_stirling::magnetometry::{
    fit_bleaney_bowers, ingest_csv, residual_jacobian, residuals, synthesize, GPolicy,
    SusceptibilityDataset, SusceptibilityPoint,
};

/// 2 K to 300 K, denser at low temperature where the coupling shows.
fn temperatures() -> Vec<f64> {
    (0..60)
        .map(|k| 2.0 * (150f64).powf(k as f64 / 59.0))
        .collect()
}

fn noisy(clean: &SusceptibilityDataset, sigma: f64, seed: u64) -> SusceptibilityDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).unwrap();
    let points = clean
        .points()
        .iter()
        .map(|p| SusceptibilityPoint {
            temperature: p.temperature,
            chi: p.chi * (1.0 + noise.sample(&mut rng)),
        })
        .collect();
    SusceptibilityDataset::new(points, clean.pressure_gpa(), clean.label()).unwrap()
}

#[test]
fn noiseless_roundtrip_free_g() {
    for j in [-100.0, -42.0, -32.0, 0.5, 50.0, 200.0] {
        let data = synthesize(j, 2.1, &temperatures(), None, "synthetic").unwrap();
        let fit = fit_bleaney_bowers(&data, GPolicy::Free { init: 2.0 }).unwrap();
        assert!(fit.converged, "J = {j}: {fit:?}");
        assert!(
            (fit.j_over_kb - j).abs() <= 1e-6 * j.abs(),
            "J = {j}: {fit:?}"
        );
        assert!((fit.g - 2.1).abs() <= 1e-8 * 2.1, "J = {j}: {fit:?}");
    }
}

#[test]
fn noiseless_roundtrip_fixed_g() {
    for j in [-100.0, -32.0, 0.5, 200.0] {
        let data = synthesize(j, 2.1, &temperatures(), None, "synthetic").unwrap();
        let fit = fit_bleaney_bowers(&data, GPolicy::default()).unwrap();
        assert!(fit.converged);
        assert!(
            (fit.j_over_kb - j).abs() <= 1e-6 * j.abs(),
            "J = {j}: {fit:?}"
        );
        assert_eq!(fit.g, 2.1);
    }
}

#[test]
fn scale_changes_g_but_not_j() {
    let data = synthesize(-32.0, 2.1, &temperatures(), None, "synthetic").unwrap();
    let base = fit_bleaney_bowers(&data, GPolicy::Free { init: 2.0 }).unwrap();
    for factor in [0.25, 1.7, 9.0] {
        let fit =
            fit_bleaney_bowers(&data.scaled(factor).unwrap(), GPolicy::Free { init: 2.0 }).unwrap();
        assert!((fit.j_over_kb - base.j_over_kb).abs() <= 1e-6 * base.j_over_kb.abs());
        assert!((fit.g - base.g * factor.sqrt()).abs() <= 1e-8 * fit.g);
    }
}

#[test]
fn one_percent_noise_median_error() {
    let clean = synthesize(-32.0, 2.1, &temperatures(), None, "synthetic").unwrap();
    let mut errors: Vec<f64> = (0..100)
        .map(|seed| {
            let fit = fit_bleaney_bowers(&noisy(&clean, 0.01, seed), GPolicy::Free { init: 2.0 })
                .unwrap();
            ((fit.j_over_kb + 32.0) / 32.0).abs()
        })
        .collect();
    errors.sort_by(f64::total_cmp);
    let median = 0.5 * (errors[49] + errors[50]);
    assert!(median <= 0.05, "median relative error {median}");
}

#[test]
fn fits_are_reproducible() {
    let data = noisy(
        &synthesize(-42.0, 2.1, &temperatures(), Some(0.84), "p").unwrap(),
        0.02,
        7,
    );
    let a = fit_bleaney_bowers(&data, GPolicy::Free { init: 2.1 }).unwrap();
    let b = fit_bleaney_bowers(&data, GPolicy::Free { init: 2.1 }).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn shipped_style_csv_roundtrip() {
    let data = synthesize(-32.0, 2.1, &temperatures(), Some(0.0), "ambient").unwrap();
    let mut buf = Vec::new();
    data.write_csv(&mut buf).unwrap();
    let back = ingest_csv(buf.as_slice()).unwrap();
    assert_eq!(back, data);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobian_matches_central_differences(
        j in prop_oneof![-300.0..-0.5f64, 0.5..300.0f64],
        g in 1.5..2.5f64,
    ) {
        let data = synthesize(-32.0, 2.1, &temperatures(), None, "synthetic").unwrap();
        let analytic = residual_jacobian(&data, j, g);
        let hj = 1e-6 * j.abs();
        let hg = 1e-6 * g;
        let rj_plus = residuals(&data, j + hj, g);
        let rj_minus = residuals(&data, j - hj, g);
        let rg_plus = residuals(&data, j, g + hg);
        let rg_minus = residuals(&data, j, g - hg);
        for col in 0..2 {
            let scale = analytic.iter().map(|row| row[col].abs()).fold(0.0, f64::max);
            for (i, row) in analytic.iter().enumerate() {
                let fd = if col == 0 {
                    (rj_plus[i] - rj_minus[i]) / (2.0 * hj)
                } else {
                    (rg_plus[i] - rg_minus[i]) / (2.0 * hg)
                };
                prop_assert!(
                    (row[col] - fd).abs() <= 1e-6 * scale,
                    "col {col} row {i}: analytic {}, fd {fd}",
                    row[col]
                );
            }
        }
    }
}
