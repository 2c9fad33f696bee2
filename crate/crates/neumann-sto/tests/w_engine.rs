use neumann_sto::wmu_engine::{big_omega, big_t_coeff, omega, tau_coeff, w_direct, w_general, w_sigma_large_order, BasicIntegralCache, WParams};
use neumann_sto::ExpansionSettings;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn omega_against_oracle() {
    assert!(rel(omega(30, 0, 1.0, 1.0).unwrap(), 2.290_623_304_239_651e-3) < 1e-13);
    assert!(rel(omega(50, 8, 5.0, 10.0).unwrap(), 9.806_873_207_814_97e-10) < 1e-13);
}

#[test]
fn big_omega_against_oracle() {
    assert!(rel(big_omega(5, 3, 1.0, 5.0).unwrap(), 3.262_277_796_502_395e-4) < 1e-13);
    assert!(rel(big_omega(-31, 2, 5.0, 10.0).unwrap(), 5.680_354_363_806_164e-10) < 1e-12);
}

#[test]
fn expansion_coefficients_against_oracle() {
    assert!(rel(tau_coeff(2, 40, 8, 1.0, 10.0).unwrap(), 3.411_750_919_587_624e-5) < 1e-12);
    assert!(rel(big_t_coeff(2, 40, 8, 1.0, 10.0).unwrap(), 2.374_499_025_200_342e-5) < 1e-12);
}

#[test]
fn general_w_against_oracle() {
    let s = ExpansionSettings::default();
    let a = w_general(0, 1, 1.0, 1.0, 30, &s).unwrap();
    assert!(a.converged);
    assert!(rel(a.value, 1.090_046_726_305_303e-4) < 1e-12);
    let b = w_general(2, 2, 1.0, 5.0, 40, &s).unwrap();
    assert!(rel(b.value, 5.367_367_326_196_624e-7) < 1e-12);
}

#[test]
fn sigma_raised_w_against_oracle() {
    let params = WParams::new(0, 0, 1, 1.0, 1.0, 30).unwrap();
    let mut cache = BasicIntegralCache::new(1.0, 1.0).unwrap();
    let out = w_sigma_large_order(&params, &mut cache, &ExpansionSettings::default()).unwrap();
    assert!(out.converged);
    assert!(rel(out.value, -1.012_477_137_538_286e-1) < 1e-10);
}

#[test]
fn direct_and_large_order_agree() {
    let s = ExpansionSettings::default();
    for (p, a1, a2, mu) in [(0, 1.0, 1.0, 30), (3, 2.0, 4.0, 28)] {
        let direct = w_direct(&WParams::new(p, 0, 0, a1, a2, mu).unwrap()).unwrap();
        let lo = w_general(p, 0, a1, a2, mu, &s).unwrap();
        assert!(rel(direct, lo.value) < 1e-11);
    }
}

#[test]
fn cache_rejects_foreign_exponents() {
    let params = WParams::new(0, 0, 0, 1.0, 2.0, 30).unwrap();
    let mut cache = BasicIntegralCache::new(1.0, 1.0).unwrap();
    assert!(w_sigma_large_order(&params, &mut cache, &ExpansionSettings::default()).is_err());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(WParams::new(0, 0, 0, -1.0, 1.0, 10).is_err());
    assert!(WParams::new(0, 0, 3, 1.0, 1.0, 2).is_err());
}
