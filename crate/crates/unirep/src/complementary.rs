//! The complementary-series inner product in its Fourier form,
//!
//! ```text
//! (f, g) = 2^{-a} pi^{-1-a} Gamma(1+a) sin(pi |a|/2)
//!          int |k|^{-1-a} conj(fhat(k)) ghat(k) dk,   a = 2s - 2,
//! ```
//!
//! convergent and positive definite for `1/2 < s < 1` (the other half of the
//! interval is reached by the `s -> 1-s` functional relation, which is not
//! implemented here). Profiles are given in Fourier space with the
//! convention `f(x) = int fhat(k) exp(2 pi i k x) dk`.

use crate::gamma::gamma;
use crate::models::gauss_legendre;
use num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ComplementaryError {
    OutOfRange { s: f64 },
}

impl fmt::Display for ComplementaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplementaryError::OutOfRange { s } => write!(
                f,
                "direct Fourier form needs 1/2 < s < 1, got s = {s}"
            ),
        }
    }
}

impl std::error::Error for ComplementaryError {}

/// Numerical quadrature of the Fourier-side inner product. The singular
/// kernel `|k|^{-1-a}` with `-1-a` in `(-1, 0)` is removed exactly by the
/// substitution `k = u^{1/(-a)}`, leaving a smooth integrand truncated at
/// `|k| <= k_max`.
pub fn inner_product(
    fhat: &dyn Fn(f64) -> Complex64,
    ghat: &dyn Fn(f64) -> Complex64,
    s: f64,
    k_max: f64,
    n_nodes: usize,
) -> Result<Complex64, ComplementaryError> {
    if !(0.5 < s && s < 1.0) {
        return Err(ComplementaryError::OutOfRange { s });
    }
    let a = 2.0 * s - 2.0; // in (-1, 0)
    let p = 1.0 / (-a);
    let u_max = k_max.powf(1.0 / p);
    let nodes = gauss_legendre(n_nodes, 0.0, u_max);
    let mut integral = Complex64::new(0.0, 0.0);
    for &(u, w) in &nodes {
        let k = u.powf(p);
        // k^{-1-a} dk = p du after the substitution
        integral += (fhat(k).conj() * ghat(k) + fhat(-k).conj() * ghat(-k)) * (p * w);
    }
    let prefactor = 2f64.powf(-a)
        * std::f64::consts::PI.powf(-1.0 - a)
        * gamma(1.0 + a)
        * (std::f64::consts::PI * a.abs() / 2.0).sin();
    Ok(integral * prefactor)
}

/// Fourier-side action of `J3 = -(i/2)(1+x^2) d/dx - i s x`:
/// `J3hat fhat (k) = pi k fhat - (1/(4 pi)) (k fhat)'' + (s/(2 pi)) fhat'`,
/// with derivatives of the profile taken by central differences.
pub fn j3_on_profile<'a>(
    fhat: &'a dyn Fn(f64) -> Complex64,
    s: f64,
) -> impl Fn(f64) -> Complex64 + 'a {
    move |k: f64| {
        let h = 1e-4;
        let d1 = (fhat(k + h) - fhat(k - h)) / (2.0 * h);
        let d2 = (fhat(k + h) - 2.0 * fhat(k) + fhat(k - h)) / (h * h);
        // (k fhat)'' = k fhat'' + 2 fhat'
        let kf2 = k * d2 + 2.0 * d1;
        let pi = std::f64::consts::PI;
        pi * k * fhat(k) - kf2 / (4.0 * pi) + s / (2.0 * pi) * d1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(width: f64, shift: f64) -> impl Fn(f64) -> Complex64 {
        move |k: f64| Complex64::new((-(k - shift) * (k - shift) / (width * width)).exp(), 0.0)
    }

    #[test]
    fn positivity_on_gaussians() {
        let f = gaussian(1.0, 0.0);
        for s in [0.55, 0.75, 0.9] {
            let v = inner_product(&f, &f, s, 40.0, 400).unwrap();
            assert!(v.re > 0.0, "s = {s}: (f,f) = {v}");
            assert!(v.im.abs() < 1e-12 * v.re.max(1.0));
        }
    }

    #[test]
    fn sesquilinearity() {
        let f = gaussian(1.0, 0.3);
        let g = gaussian(0.7, -0.2);
        let s = 0.75;
        let lam = Complex64::new(0.6, -1.1);
        let fg = inner_product(&f, &g, s, 40.0, 400).unwrap();
        // linear in the second slot
        let scaled_g = |k: f64| lam * g(k);
        let v1 = inner_product(&f, &scaled_g, s, 40.0, 400).unwrap();
        assert!((v1 - lam * fg).norm() < 1e-10);
        // conjugate-linear in the first slot
        let scaled_f = |k: f64| lam * f(k);
        let v2 = inner_product(&scaled_f, &g, s, 40.0, 400).unwrap();
        assert!((v2 - lam.conj() * fg).norm() < 1e-10);
    }

    #[test]
    fn j3_hermitian() {
        let f = gaussian(1.0, 0.25);
        let g = gaussian(0.8, -0.4);
        let s = 0.75;
        let j3g = j3_on_profile(&g, s);
        let j3f = j3_on_profile(&f, s);
        let lhs = inner_product(&f, &j3g, s, 40.0, 500).unwrap();
        let rhs = inner_product(&j3f, &g, s, 40.0, 500).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-6,
            "hermiticity defect {}",
            (lhs - rhs).norm()
        );
    }

    #[test]
    fn out_of_range_s_rejected() {
        let f = gaussian(1.0, 0.0);
        assert!(inner_product(&f, &f, 0.4, 40.0, 200).is_err());
        assert!(inner_product(&f, &f, 1.0, 40.0, 200).is_err());
    }
}
