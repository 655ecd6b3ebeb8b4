//! Published closed-form fidelities and output states for the probabilistic
//! protocol under correlated damping, on the noise-study channel.

use crate::error::Result;
use crate::noise::NoiseModel;
use crate::qmath::{ComplexMatrix, DensityMatrix, C64};

/// Amplitude-damping fidelity as a rational trigonometric expression.
pub fn closed_form_f_ad(theta1: f64, theta2: f64, eta: f64) -> f64 {
    let (t1, t2, e) = (theta1, theta2, eta);
    let e2 = e * e;
    let num = 64.0 - 128.0 * e + 66.0 * e2 - 2.0 * e2 * (4.0 * t1).cos()
        + e2 * (4.0 * (t1 - t2)).cos()
        - 2.0 * e2 * (4.0 * t2).cos()
        + e2 * (4.0 * (t1 + t2)).cos();
    let den = 16.0
        * (4.0 - 8.0 * e + 6.0 * e2 + 2.0 * e2 * (2.0 * t1).cos() + e2 * (2.0 * (t1 - t2)).cos()
            + 2.0 * e2 * (2.0 * t2).cos()
            + e2 * (2.0 * (t1 + t2)).cos());
    num / den
}

/// Phase-damping fidelity as a polynomial in `η` with trigonometric
/// coefficients.
pub fn closed_form_f_pd(theta1: f64, theta2: f64, eta: f64) -> f64 {
    let (t1, t2, e) = (theta1, theta2, eta);
    let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
    let c = f64::cos;
    let q = 2.0 - 4.0 * e + 3.0 * e2;
    (64.0 - 256.0 * e + 420.0 * e2 - 328.0 * e3 + 118.0 * e4
        + 6.0 * e2 * q * c(4.0 * t1)
        - 16.0 * e2 * q * c(2.0 * (t1 - t2))
        + 2.0 * e2 * c(4.0 * (t1 - t2))
        - 4.0 * e3 * c(4.0 * (t1 - t2))
        + 3.0 * e4 * c(4.0 * (t1 - t2))
        + 12.0 * e2 * c(4.0 * t2)
        - 24.0 * e3 * c(4.0 * t2)
        + 18.0 * e4 * c(4.0 * t2)
        - 32.0 * e2 * c(2.0 * (t1 + t2))
        + 64.0 * e3 * c(2.0 * (t1 + t2))
        - 48.0 * e4 * c(2.0 * (t1 + t2))
        + 2.0 * e2 * c(4.0 * (t1 + t2))
        - 4.0 * e3 * c(4.0 * (t1 + t2))
        + 3.0 * e4 * c(4.0 * (t1 + t2)))
        / 64.0
}

pub fn closed_form_fidelity(model: NoiseModel, theta1: f64, theta2: f64, eta: f64) -> f64 {
    match model {
        NoiseModel::Ad => closed_form_f_ad(theta1, theta2, eta),
        NoiseModel::Pd => closed_form_f_pd(theta1, theta2, eta),
    }
}

/// The published 4×4 output state on `(R1, R2)`.
pub fn closed_form_rho_out(
    model: NoiseModel,
    theta1: f64,
    theta2: f64,
    phi1: f64,
    phi2: f64,
    eta: f64,
) -> Result<DensityMatrix> {
    let rows = match model {
        NoiseModel::Ad => rho_ad(theta1, theta2, phi1, phi2, eta),
        NoiseModel::Pd => rho_pd(theta1, theta2, phi1, phi2, eta),
    };
    DensityMatrix::new(ComplexMatrix::from_rows(rows))
}

fn ph(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}

/// Shared off-diagonal pattern; `k` scales every off-diagonal entry and the
/// diagonal is supplied separately.
fn pattern(t1: f64, t2: f64, p1: f64, p2: f64, k: f64, diag: [f64; 4]) -> [[C64; 4]; 4] {
    let (s, c) = (f64::sin, f64::cos);
    let (p12, d) = (p1 + p2, p1 - p2);
    let r = |x: f64| C64::new(x, 0.0);
    let e01 = 2.0 * k * s(t1).powi(2) * s(2.0 * t2);
    let e02 = 2.0 * k * s(2.0 * t1) * s(t2).powi(2);
    let e03 = k * s(2.0 * t1) * s(2.0 * t2);
    let e12 = k * s(2.0 * t1) * s(2.0 * t2);
    let e13 = 2.0 * k * c(t2).powi(2) * s(2.0 * t1);
    let e23 = 2.0 * k * c(t1).powi(2) * s(2.0 * t2);
    [
        [r(diag[0]), ph(-p2) * e01, ph(-p1) * e02, ph(-p12) * e03],
        [ph(p2) * e01, r(diag[1]), ph(-d) * e12, ph(-p1) * e13],
        [ph(p1) * e02, ph(d) * e12, r(diag[2]), ph(-p2) * e23],
        [ph(p12) * e03, ph(p1) * e13, ph(p2) * e23, r(diag[3])],
    ]
}

fn rho_ad(t1: f64, t2: f64, p1: f64, p2: f64, e: f64) -> [[C64; 4]; 4] {
    let (s, c) = (f64::sin, f64::cos);
    let e2 = e * e;
    let den = 4.0 - 8.0 * e + 6.0 * e2 + 2.0 * e2 * c(2.0 * t1) + e2 * c(2.0 * (t1 - t2))
        + 2.0 * e2 * c(2.0 * t2)
        + e2 * c(2.0 * (t1 + t2));
    // ρ11 carries 1/(1-η)², which cancels against N ∝ (1-η)²; fold that in
    // so η = 1 stays finite.
    let r11_num = 2.0 - 4.0 * e + 6.0 * e2
        + 2.0 * (-1.0 + 2.0 * e + e2) * c(2.0 * t1)
        + (1.0 - 2.0 * e + 3.0 * e2) * c(2.0 * (t1 - t2))
        - 2.0 * c(2.0 * t2)
        + 4.0 * e * c(2.0 * t2)
        + 2.0 * e2 * c(2.0 * t2)
        + c(2.0 * (t1 + t2))
        - 2.0 * e * c(2.0 * (t1 + t2))
        + 3.0 * e2 * c(2.0 * (t1 + t2));
    let n = (1.0 - e).powi(2) / (2.0 * den);
    let diag = [
        r11_num / (2.0 * den),
        n * 8.0 * c(t2).powi(2) * s(t1).powi(2),
        n * 8.0 * c(t1).powi(2) * s(t2).powi(2),
        n * 8.0 * c(t1).powi(2) * c(t2).powi(2),
    ];
    pattern(t1, t2, p1, p2, 2.0 * n, diag)
}

fn rho_pd(t1: f64, t2: f64, p1: f64, p2: f64, e: f64) -> [[C64; 4]; 4] {
    let (s, c) = (f64::sin, f64::cos);
    let pre = (1.0 - e).powi(4) / 4.0;
    // the middle diagonal entries carry 4(1-2η+2η²)²/(1-η)⁴; multiplied by
    // the prefactor that is (1-2η+2η²)².
    let g = (1.0 - 2.0 * e + 2.0 * e * e).powi(2);
    let diag = [
        pre * 4.0 * s(t1).powi(2) * s(t2).powi(2),
        g * c(t2).powi(2) * s(t1).powi(2),
        g * c(t1).powi(2) * s(t2).powi(2),
        pre * 4.0 * c(t1).powi(2) * c(t2).powi(2),
    ];
    pattern(t1, t2, p1, p2, pre, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::tol;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn ad_spot_values() {
        assert!((closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, 0.0) - 1.0).abs() < tol::EXACT);
        assert!((closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, 0.5) - 0.75).abs() < tol::EXACT);
        assert!((closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, 1.0) - 0.25).abs() < tol::EXACT);
    }

    #[test]
    fn ad_reduces_to_rational_function_on_the_diagonal() {
        for k in 0..=20 {
            let e = k as f64 / 20.0;
            let reduced = (8.0 - 16.0 * e + 9.0 * e * e) / (8.0 - 16.0 * e + 12.0 * e * e);
            assert!((closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, e) - reduced).abs() < tol::EXACT);
        }
    }

    #[test]
    fn pd_spot_values() {
        assert!((closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, 0.0) - 1.0).abs() < tol::EXACT);
        assert!((closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, 0.5) - 0.0859375).abs() < tol::EXACT);
        assert!((closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, 1.0) - 0.125).abs() < tol::EXACT);
    }

    #[test]
    fn pd_reduces_to_quartic_on_the_diagonal() {
        for k in 0..=20 {
            let e = k as f64 / 20.0;
            let quartic = 1.0 - 4.0 * e + 6.25 * e.powi(2) - 4.5 * e.powi(3) + 1.375 * e.powi(4);
            assert!((closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, e) - quartic).abs() < tol::EXACT);
        }
    }

    #[test]
    fn noiseless_matrices_are_the_target_projector() {
        let (t1, t2, p1, p2): (f64, f64, f64, f64) = (FRAC_PI_8, 1.1, 0.4, 2.0);
        let target = [
            C64::new(t1.sin() * t2.sin(), 0.0),
            C64::from_polar(t1.sin() * t2.cos(), p2),
            C64::from_polar(t1.cos() * t2.sin(), p1),
            C64::from_polar(t1.cos() * t2.cos(), p1 + p2),
        ];
        let projector = ComplexMatrix::outer(&target, &target);
        for model in [NoiseModel::Ad, NoiseModel::Pd] {
            let rho = closed_form_rho_out(model, t1, t2, p1, p2, 0.0).unwrap();
            assert!(rho.matrix().max_abs_diff(&projector) < tol::EXACT, "{model}");
        }
    }

    #[test]
    fn ad_matrix_has_unit_trace_and_matches_fidelity() {
        let (t1, t2, p1, p2) = (FRAC_PI_8, 3.0 * FRAC_PI_8, 1.0, 0.2);
        for k in 0..=10 {
            let e = k as f64 / 10.0;
            let rho = closed_form_rho_out(NoiseModel::Ad, t1, t2, p1, p2, e).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-9, "η={e}");
        }
    }
}
