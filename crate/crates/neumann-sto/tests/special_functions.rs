use neumann_sto::special_fn::{a_moment, b_coeff, bessel_i_seq, bessel_k_seq, digamma_int, exp_int, exp_int_neg_seq, stirling2};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn exponential_integral_against_oracle() {
    assert!(rel(exp_int(1, 1.0).unwrap(), 2.193_839_343_955_202_9e-1) < 1e-14);
}

#[test]
fn a_moment_against_oracle() {
    assert!(rel(a_moment(10, 2.0).unwrap(), 1.472_113_505_290_796_4e-2) < 1e-14);
}

#[test]
fn digamma_against_mpfr() {
    assert!(rel(digamma_int(10).unwrap(), 2.251_752_589_066_721) < 1e-15);
}

#[test]
fn stirling_triangle_rows() {
    let row: Vec<f64> = (1..=5).map(|k| stirling2(5, k).unwrap()).collect();
    assert_eq!(row, vec![1.0, 15.0, 25.0, 10.0, 1.0]);
    assert_eq!(stirling2(0, 0).unwrap(), 1.0);
}

#[test]
fn b_coeff_low_orders() {
    let z: f64 = 3.0;
    assert_eq!(b_coeff(0, z).unwrap(), 1.0);
    assert!(rel(b_coeff(1, z).unwrap(), z * z / 4.0) < 1e-15);
    assert!(rel(b_coeff(2, z).unwrap(), z.powi(4) / 32.0 - z * z / 4.0) < 1e-15);
}

proptest! {
    #[test]
    fn bessel_wronskian(mu in 0usize..80, z in 0.05f64..60.0) {
        let i = bessel_i_seq(mu + 1, z).unwrap();
        let k = bessel_k_seq(mu + 1, z).unwrap();
        let w = i[mu] * k[mu + 1] + i[mu + 1] * k[mu];
        let want = std::f64::consts::FRAC_PI_2 / (z * z);
        prop_assert!(rel(w, want) < 1e-12);
    }

    #[test]
    fn exp_int_neg_recurrence(z in 0.1f64..50.0) {
        // E_{-m}(z) = (e^{-z} + m E_{-m+1}(z))/z
        let e = exp_int_neg_seq(8, z).unwrap();
        for m in 1..=8 {
            let want = ((-z).exp() + m as f64 * e[m - 1]) / z;
            prop_assert!(rel(e[m], want) < 1e-14);
        }
    }
}
