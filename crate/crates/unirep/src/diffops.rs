//! First-order differential-operator realization of the ladder algebra,
//!
//! ```text
//! J3 = -(i/2)(1+z^2) d/dz - i s z
//! J+ = (1/(2 sqrt2)) (-i (z-i)^2 d/dz - 2s(1+iz))
//! J- = (1/(2 sqrt2)) (-i (z+i)^2 d/dz + 2s(1-iz))
//! ```
//!
//! applied to sampled functions with Richardson-extrapolated central
//! differences, plus residual reports for the eigenvalue, ladder, Casimir
//! and commutator relations on a grid.

use num_complex::Complex64;

/// Derivative along a fixed complex direction by 4th-order central
/// differences with one Richardson step (effective 6th order).
pub fn derivative(
    f: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    dir: Complex64,
    h: f64,
) -> Complex64 {
    let d4 = |hh: f64| {
        let hc = dir * hh;
        (8.0 * (f(z + hc) - f(z - hc)) - (f(z + 2.0 * hc) - f(z - 2.0 * hc))) / (12.0 * hh)
    };
    let a = d4(h);
    let b = d4(h / 2.0);
    (16.0 * b - a) / 15.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    J3,
    JPlus,
    JMinus,
}

/// Applies one ladder operator to `f` at `z` numerically; `s` may be
/// complex (principal series). `dir` is the differentiation direction: the
/// real axis for line models, any fixed direction for holomorphic models.
pub fn apply(
    op: Ladder,
    s: Complex64,
    f: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    dir: Complex64,
    h: f64,
) -> Complex64 {
    let i = Complex64::i();
    let df = derivative(f, z, dir, h) / dir;
    let fz = f(z);
    let r2 = Complex64::new(2.0 * std::f64::consts::SQRT_2, 0.0);
    match op {
        Ladder::J3 => -i / 2.0 * (1.0 + z * z) * df - i * s * z * fz,
        Ladder::JPlus => (-i * (z - i) * (z - i) * df - 2.0 * s * (1.0 + i * z) * fz) / r2,
        Ladder::JMinus => (-i * (z + i) * (z + i) * df + 2.0 * s * (1.0 - i * z) * fz) / r2,
    }
}

/// Residual summary over a sample grid: maximum absolute deviations of the
/// eigenvalue, ladder, Casimir and bracket relations.
#[derive(Debug, Clone, Default)]
pub struct ResidualReport {
    pub eigen: f64,
    pub ladder: f64,
    pub casimir: f64,
    pub bracket: f64,
    pub points: usize,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.eigen.max(self.ladder).max(self.casimir).max(self.bracket)
    }
}

/// Checks the discrete-series relations on a half-plane grid:
/// `J3 phi_n = (s+n) phi_n`, `J+ phi_n = phi_{n+1}`, `J- phi_0 = 0`, the
/// Casimir value `s(s-1)` through the ladder identity
/// `Omega = J3(J3+1) - 2 J- J+`, and the bracket `[J3, J+] = J+` applied to
/// the sampled ground state.
pub fn check_discrete(s: f64, n_max: u32) -> ResidualReport {
    let model = crate::models::DiscreteModel::new(s).expect("s > 0");
    let sc = Complex64::new(s, 0.0);
    let dir = Complex64::new(1.0, 0.0);
    let h = 1e-3;
    let mut rep = ResidualReport::default();
    let grid: Vec<Complex64> = (0..5)
        .flat_map(|a| {
            (1..=4).map(move |b| Complex64::new(-0.8 + 0.4 * a as f64, 0.4 * b as f64 + 0.2))
        })
        .collect();
    for &z in &grid {
        rep.points += 1;
        for n in 0..=n_max {
            let phi = move |w: Complex64| model.phi(n, w).unwrap();
            let scale = model.phi(n, z).unwrap().norm().max(1e-6);
            // eigenvalue
            let j3 = apply(Ladder::J3, sc, &phi, z, dir, h);
            let expected = Complex64::new(s + n as f64, 0.0) * model.phi(n, z).unwrap();
            rep.eigen = rep.eigen.max((j3 - expected).norm() / scale);
            // raising: J+ phi_n = phi_{n+1} exactly in this normalization
            let jp = apply(Ladder::JPlus, sc, &phi, z, dir, h);
            let up = model.phi(n + 1, z).unwrap();
            rep.ladder = rep.ladder.max((jp - up).norm() / scale);
            // Casimir via J3(J3+1) - 2 J- J+, with J+ phi_n known in closed
            // form so only one numerical derivative is stacked
            let jm_up = apply(
                Ladder::JMinus,
                sc,
                &move |w| model.phi(n + 1, w).unwrap(),
                z,
                dir,
                h,
            );
            let j3j31 = Complex64::new((s + n as f64) * (s + n as f64 + 1.0), 0.0)
                * model.phi(n, z).unwrap();
            let omega = j3j31 - 2.0 * jm_up;
            let omega_expected = Complex64::new(s * (s - 1.0), 0.0) * model.phi(n, z).unwrap();
            rep.casimir = rep.casimir.max((omega - omega_expected).norm() / scale);
        }
        // lowering kills the ground state
        let jm0 = apply(
            Ladder::JMinus,
            sc,
            &move |w| model.phi(0, w).unwrap(),
            z,
            dir,
            h,
        );
        let scale0 = model.phi(0, z).unwrap().norm().max(1e-6);
        rep.ladder = rep.ladder.max(jm0.norm() / scale0);
        // bracket [J3, J+] = J+ on the sampled ground state (nested
        // numerics with a larger outer step)
        let hh = 2e-2;
        let f0 = move |w: Complex64| model.phi(0, w).unwrap();
        let jp_f = move |w: Complex64| apply(Ladder::JPlus, sc, &f0, w, dir, 1e-3);
        let j3_f = move |w: Complex64| apply(Ladder::J3, sc, &f0, w, dir, 1e-3);
        let comm = apply(Ladder::J3, sc, &jp_f, z, dir, hh)
            - apply(Ladder::JPlus, sc, &j3_f, z, dir, hh);
        let jp0 = model.phi(1, z).unwrap();
        rep.bracket = rep.bracket.max((comm - jp0).norm() / scale0);
    }
    rep
}

/// Checks the principal-series relations on the line:
/// `J3 phi_m = m phi_m` and `J+- phi_m = -((m +- s)/sqrt2) phi_{m +- 1}`,
/// for possibly fractional `m` (cover representations).
pub fn check_principal(q: f64, ms: &[f64]) -> ResidualReport {
    let model = crate::models::PrincipalModel::from_q(q);
    let s = model.s;
    let dir = Complex64::new(1.0, 0.0);
    let h = 1e-3;
    let mut rep = ResidualReport::default();
    let xs: Vec<f64> = (-8..=8).map(|k| 0.37 * k as f64 + 0.11).collect();
    for &x in &xs {
        rep.points += 1;
        let z = Complex64::new(x, 0.0);
        for &m in ms {
            // analytic continuation off the axis, valid near the real line
            // where the finite-difference stencil samples
            let phi = move |w: Complex64| {
                let base = crate::models::cpow(Complex64::new(1.0, 0.0) + w * w, -s);
                base * (Complex64::i() * 2.0 * m * w.atan()).exp()
                    / std::f64::consts::PI.sqrt()
            };
            let scale = model.phi(m, x).norm().max(1e-6);
            let j3 = apply(Ladder::J3, s, &phi, z, dir, h);
            rep.eigen = rep
                .eigen
                .max((j3 - Complex64::new(m, 0.0) * model.phi(m, x)).norm() / scale);
            let jp = apply(Ladder::JPlus, s, &phi, z, dir, h);
            let expect_p = -(Complex64::new(m, 0.0) + s) / Complex64::new(2f64.sqrt(), 0.0)
                * model.phi(m + 1.0, x);
            rep.ladder = rep.ladder.max((jp - expect_p).norm() / scale);
            let jm = apply(Ladder::JMinus, s, &phi, z, dir, h);
            let expect_m = -(Complex64::new(m, 0.0) - s) / Complex64::new(2f64.sqrt(), 0.0)
                * model.phi(m - 1.0, x);
            rep.ladder = rep.ladder.max((jm - expect_m).norm() / scale);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_accuracy() {
        let f = |z: Complex64| (z * z * z).exp();
        let z = Complex64::new(0.3, 0.4);
        let exact = 3.0 * z * z * (z * z * z).exp();
        let num = derivative(&f, z, Complex64::new(1.0, 0.0), 1e-3);
        assert!((num - exact).norm() < 1e-12);
    }

    #[test]
    fn discrete_relations_hold() {
        let rep = check_discrete(2.0, 3);
        assert!(rep.eigen < 1e-9, "eigen residual {}", rep.eigen);
        assert!(rep.ladder < 1e-9, "ladder residual {}", rep.ladder);
        assert!(rep.casimir < 1e-8, "casimir residual {}", rep.casimir);
        assert!(rep.bracket < 1e-8, "bracket residual {}", rep.bracket);
    }

    #[test]
    fn principal_relations_hold() {
        let q = 12f64.sqrt();
        let rep = check_principal(q, &[0.0, 1.0, -1.0, 0.5]);
        assert!(rep.eigen < 1e-9, "eigen residual {}", rep.eigen);
        assert!(rep.ladder < 1e-9, "ladder residual {}", rep.ladder);
    }

    #[test]
    fn fractional_s_relations() {
        // anyonic discrete series: s = 5/2 and s = 1/2 still satisfy the
        // operator relations pointwise
        for s in [2.5, 0.5] {
            let rep = check_discrete(s, 2);
            assert!(rep.eigen < 1e-9, "s = {s}: eigen {}", rep.eigen);
            assert!(rep.ladder < 1e-9, "s = {s}: ladder {}", rep.ladder);
        }
    }
}
