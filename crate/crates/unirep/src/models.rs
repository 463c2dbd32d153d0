//! Function-space models of the discrete and principal series, with the
//! quadrature machinery used to check norms and compute matrix elements.
//!
//! Discrete series (lowest weight, parameter `s > 0`): holomorphic functions
//! on the upper half-plane with basis
//! `phi_n(z) = A_n (z - i)^n / (z + i)^{2s + n}` and the weighted measure
//! `y^{2s-2} dx dy`. Principal series (`Re s = 1/2`): functions on the line
//! with basis `phi_m(x) = (1 + x^2)^{-s} exp(2 i m arctan x) / sqrt(pi)`.

use crate::gamma::gamma;
use crate::geometry::{cayley_inverse, GeometryError};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    OutOfDomain(String),
    BadParameter(String),
    Geometry(String),
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::OutOfDomain(m) => write!(f, "out of domain: {m}"),
            ModelError::BadParameter(m) => write!(f, "bad parameter: {m}"),
            ModelError::Geometry(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ModelError {}

impl From<GeometryError> for ModelError {
    fn from(e: GeometryError) -> Self {
        ModelError::Geometry(e.to_string())
    }
}

/// Principal branch complex power `b^e` for `b` off the negative real axis.
pub fn cpow(b: Complex64, e: Complex64) -> Complex64 {
    (e * b.ln()).exp()
}

/// Lowest-weight discrete-series model on the upper half-plane.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteModel {
    pub s: f64,
}

impl DiscreteModel {
    pub fn new(s: f64) -> Result<Self, ModelError> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(ModelError::BadParameter(format!(
                "discrete series requires s > 0, got {s}"
            )));
        }
        Ok(DiscreteModel { s })
    }

    /// The norm integral converges directly only for `s > 1`; for smaller
    /// `s` the basis values still make sense but the inner product needs
    /// analytic continuation.
    pub fn norm_integral_direct(&self) -> bool {
        self.s > 1.0
    }

    /// Ground-state constant `A_0 = sqrt((2s-1)/pi) 2^{2s-1}`.
    pub fn a0(&self) -> f64 {
        ((2.0 * self.s - 1.0) / std::f64::consts::PI).sqrt() * 2f64.powf(2.0 * self.s - 1.0)
    }

    /// `A_n = A_0 / sqrt(2^n) * prod_{k=0}^{n-1}(2s + k)`.
    pub fn a_n(&self, n: u32) -> f64 {
        let mut acc = self.a0() / 2f64.powf(n as f64 / 2.0);
        for k in 0..n {
            acc *= 2.0 * self.s + k as f64;
        }
        acc
    }

    /// `phi_n(z) = A_n (z-i)^n / (z+i)^{2s+n}` with the principal branch on
    /// the upper half-plane.
    pub fn phi(&self, n: u32, z: Complex64) -> Result<Complex64, ModelError> {
        if z.im <= 0.0 {
            return Err(ModelError::OutOfDomain(format!(
                "z = {z} is not in the upper half-plane"
            )));
        }
        let i = Complex64::i();
        let num = (z - i).powu(n);
        let den = cpow(z + i, Complex64::new(2.0 * self.s + n as f64, 0.0));
        Ok(self.a_n(n) * num / den)
    }

    /// Exact norm ratio `||phi_n||^2 / ||phi_0||^2
    /// = 2^{-n} Gamma(n+1) Gamma(2s+n) / Gamma(2s)`.
    pub fn norm_sq_ratio(&self, n: u32) -> f64 {
        let mut acc = 1.0;
        for k in 1..=n {
            // recursion ||phi_k||^2 = k (2s-1+k)/2 ||phi_{k-1}||^2
            acc *= k as f64 * (2.0 * self.s - 1.0 + k as f64) / 2.0;
        }
        acc
    }

    /// Normalized basis function `v_n = phi_n / ||phi_n||` (with
    /// `||phi_0|| = 1` in this normalization).
    pub fn v(&self, n: u32, z: Complex64) -> Result<Complex64, ModelError> {
        Ok(self.phi(n, z)? / self.norm_sq_ratio(n).sqrt())
    }
}

/// Principal-series model on the real line with `s = (1 + i q)/2`.
#[derive(Debug, Clone, Copy)]
pub struct PrincipalModel {
    pub s: Complex64,
}

impl PrincipalModel {
    pub fn new(s: Complex64) -> Result<Self, ModelError> {
        if (s.re - 0.5).abs() > 1e-12 {
            return Err(ModelError::BadParameter(format!(
                "principal series requires Re s = 1/2, got {s}"
            )));
        }
        Ok(PrincipalModel { s })
    }

    pub fn from_q(q: f64) -> Self {
        PrincipalModel {
            s: Complex64::new(0.5, q / 2.0),
        }
    }

    /// `phi_m(x) = pi^{-1/2} (1+x^2)^{-s} exp(2 i m arctan x)`; `m` may be
    /// fractional (cover representations).
    pub fn phi(&self, m: f64, x: f64) -> Complex64 {
        let base = cpow(Complex64::new(1.0 + x * x, 0.0), -self.s);
        let phase = Complex64::new(0.0, 2.0 * m * x.atan()).exp();
        base * phase / std::f64::consts::PI.sqrt()
    }
}

// ----------------------------------------------------------------------
// Quadrature
// ----------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // initial guess (Chebyshev-like), then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let xm = 0.5 * (b + a);
        let xl = 0.5 * (b - a);
        out.push((xm + xl * x, xl * w));
    }
    out.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    out
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor quadrature grid over the unit disk (Gauss-Legendre radial nodes
/// times uniform angles), mapped to the upper half-plane through the Cayley
/// transform. Used for all weighted half-plane integrals
/// `int y^{2s-2} conj(f) g dx dy`.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    /// (rho, Gauss-Legendre weight) radial pairs.
    pub radial: Vec<(f64, f64)>,
    pub n_angular: usize,
}

impl DiskGrid {
    pub fn new(n_radial: usize, n_angular: usize) -> Self {
        DiskGrid {
            radial: gauss_legendre(n_radial, 0.0, 1.0),
            n_angular,
        }
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * (k as f64 + 0.5) / self.n_angular as f64
    }

    /// Visits every node as `(w, z, measure)` where the measure already
    /// contains `rho drho dtheta`, the Cayley Jacobian `4/|1-w|^4`, and the
    /// half-plane weight `y^{2s-2}`.
    pub fn nodes(&self, s: f64) -> impl Iterator<Item = (Complex64, Complex64, f64)> + '_ {
        let dtheta = 2.0 * std::f64::consts::PI / self.n_angular as f64;
        self.radial.iter().flat_map(move |&(rho, wr)| {
            (0..self.n_angular).map(move |k| {
                let theta = self.angle(k);
                let w = Complex64::from_polar(rho, theta);
                let z = cayley_inverse(w).expect("interior points");
                let jac = 4.0 / (Complex64::new(1.0, 0.0) - w).norm_sqr().powi(2);
                let weight = z.im.powf(2.0 * s - 2.0) * jac * rho * wr * dtheta;
                (w, z, weight)
            })
        })
    }

    /// Weighted half-plane inner product of two functions of `z`.
    pub fn inner_uhp(
        &self,
        s: f64,
        f: impl Fn(Complex64) -> Complex64,
        g: impl Fn(Complex64) -> Complex64,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (_, z, weight) in self.nodes(s) {
            acc += f(z).conj() * g(z) * weight;
        }
        acc
    }

    /// Plain disk integral with weight `(1-|w|^2)^{2s-2}` of a function of
    /// `w` (the disk-model inner product core).
    pub fn disk_integral(&self, s: f64, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        let dtheta = 2.0 * std::f64::consts::PI / self.n_angular as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(rho, wr) in &self.radial {
            let wgt = (1.0 - rho * rho).powf(2.0 * s - 2.0) * rho * wr * dtheta;
            for k in 0..self.n_angular {
                let w = Complex64::from_polar(rho, self.angle(k));
                acc += f(w) * wgt;
            }
        }
        acc
    }
}

/// Midpoint grid on the line through `x = tan(theta/2)`; the basis-function
/// products become smooth periodic integrands in `theta`.
#[derive(Debug, Clone)]
pub struct LineGrid {
    pub n_theta: usize,
}

impl LineGrid {
    pub fn new(n_theta: usize) -> Self {
        LineGrid { n_theta }
    }

    /// Visits `(x, measure)` nodes with the substitution measure
    /// `dx = dtheta / (2 cos^2(theta/2))`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n_theta;
        let dtheta = 2.0 * std::f64::consts::PI / n as f64;
        (0..n).map(move |k| {
            let theta = -std::f64::consts::PI + (k as f64 + 0.5) * dtheta;
            let c = (theta / 2.0).cos();
            ((theta / 2.0).tan(), dtheta / (2.0 * c * c))
        })
    }

    /// `int conj(f) g dx` over the line.
    pub fn inner(
        &self,
        f: impl Fn(f64) -> Complex64,
        g: impl Fn(f64) -> Complex64,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes() {
            acc += f(x).conj() * g(x) * w;
        }
        acc
    }
}

/// Exact disk-model monomial norm
/// `int (1-|w|^2)^{2s-2} |w|^{2n} du dv = pi/(2s-1) * Gamma(2s)Gamma(n+1)/Gamma(2s+n)`.
pub fn disk_monomial_norm_exact(s: f64, n: u32) -> f64 {
    std::f64::consts::PI / (2.0 * s - 1.0) * gamma(2.0 * s) * gamma(n as f64 + 1.0)
        / gamma(2.0 * s + n as f64)
}
