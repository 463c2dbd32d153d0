//! Truncated matrices of the unitary group action on the function-space
//! models: `U_mn = (v_m, g . v_n)` by quadrature, with the angular part
//! reduced to Fourier-coefficient read-off, and an interior-block unitarity
//! defect as the quality certificate. The edge of a truncated infinite
//! unitary matrix cannot be unitary, so only the interior block (margin =
//! range/4 by default) is certified.

use crate::geometry::CoveredElement;
use crate::models::{cpow, DiscreteModel, DiskGrid, LineGrid, ModelError, PrincipalModel};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixError {
    Model(String),
    QuadratureDefect { defect: f64, tol: f64 },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::Model(m) => write!(f, "{m}"),
            MatrixError::QuadratureDefect { defect, tol } => write!(
                f,
                "quadrature did not certify unitarity: interior defect {defect:.3e} above tolerance {tol:.1e}"
            ),
        }
    }
}

impl std::error::Error for MatrixError {}

impl From<ModelError> for MatrixError {
    fn from(e: ModelError) -> Self {
        MatrixError::Model(e.to_string())
    }
}

/// Which function-space model the matrix acts on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Model {
    /// Lowest-weight discrete series with parameter `s`, disk-model
    /// quadrature; basis indices `0..=range`.
    Disk { s: f64 },
    /// Principal series with `s = (1+iq)/2`, line-model quadrature; basis
    /// indices `-range/2..=range/2` shifted by `p`.
    Line { q: f64, p: f64 },
}

/// A truncated operator matrix with its certification metadata.
#[derive(Debug, Clone)]
pub struct TruncatedOperatorMatrix {
    pub model: Model,
    pub range: usize,
    pub margin: usize,
    /// Row-major entries `U[m][n]`.
    pub entries: Vec<Vec<Complex64>>,
    /// Max abs deviation of `(U^H U - I)` over the interior block.
    pub defect: f64,
}

impl TruncatedOperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        self.margin..self.dim().saturating_sub(self.margin)
    }

    /// Max abs entry of `U^H U - I` over the interior indices.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut defect = 0f64;
        for m in self.interior() {
            for n in self.interior() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entries[k][m].conj() * self.entries[k][n];
                }
                let expected = if m == n { 1.0 } else { 0.0 };
                defect = defect.max((acc - expected).norm());
            }
        }
        defect
    }

    /// Max abs deviation from `other` over the interior block.
    pub fn interior_distance(&self, other: &TruncatedOperatorMatrix) -> f64 {
        let mut d = 0f64;
        for m in self.interior() {
            for n in self.interior() {
                d = d.max((self.entries[m][n] - other.entries[m][n]).norm());
            }
        }
        d
    }

    /// Matrix product truncated to the common dimension.
    pub fn matmul(&self, other: &TruncatedOperatorMatrix) -> TruncatedOperatorMatrix {
        let dim = self.dim();
        let mut entries = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for m in 0..dim {
            for n in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entries[m][k] * other.entries[k][n];
                }
                entries[m][n] = acc;
            }
        }
        TruncatedOperatorMatrix {
            model: self.model,
            range: self.range,
            margin: self.margin,
            entries,
            defect: f64::NAN,
        }
    }

    /// JSON form with complex entries as `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        json!({
            "version": 1,
            "model": match self.model {
                Model::Disk { s } => json!({"kind": "disk", "s": s}),
                Model::Line { q, p } => json!({"kind": "line", "q": q, "p": p}),
            },
            "range": self.range,
            "margin": self.margin,
            "defect": self.defect,
            "entries": self.entries.iter().map(|row| {
                row.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

/// Automorphy factor `j(T, z)^{-2s}` with the principal branch, including
/// the cover sheet phase `exp(-2 pi i sheet (2s)/n_cover)` selecting which
/// root of the factor is taken.
fn mobius_factor(t: &[[f64; 2]; 2], z: Complex64, two_s: f64, g: &CoveredElement) -> Complex64 {
    let j = Complex64::new(t[1][0], 0.0) * z + Complex64::new(t[1][1], 0.0);
    let principal = cpow(j, Complex64::new(-two_s, 0.0));
    if g.n_cover > 1 && g.sheet > 0 {
        let phase = -2.0 * std::f64::consts::PI * g.sheet as f64 * two_s / g.n_cover as f64;
        principal * Complex64::from_polar(1.0, phase)
    } else {
        principal
    }
}

fn mobius_apply(t: &[[f64; 2]; 2], z: Complex64) -> Complex64 {
    (Complex64::new(t[0][0], 0.0) * z + Complex64::new(t[0][1], 0.0))
        / (Complex64::new(t[1][0], 0.0) * z + Complex64::new(t[1][1], 0.0))
}

/// Computes `U_mn = (v_m, g . v_n)` on the chosen model without the
/// certification gate.
pub fn compute_matrix(
    model: Model,
    g: &CoveredElement,
    range: usize,
) -> Result<TruncatedOperatorMatrix, MatrixError> {
    match model {
        Model::Disk { s } => {
            let n_radial = (3 * range / 2).max(64);
            let n_angular = (8 * range).max(256).next_power_of_two();
            disk_matrix(s, g, range, n_radial, n_angular)
        }
        Model::Line { q, p } => line_matrix(q, p, g, range),
    }
}

/// Same with explicit quadrature sizes (disk model only).
pub fn compute_matrix_with_grid(
    model: Model,
    g: &CoveredElement,
    range: usize,
    n_radial: usize,
    n_angular: usize,
) -> Result<TruncatedOperatorMatrix, MatrixError> {
    match model {
        Model::Disk { s } => disk_matrix(s, g, range, n_radial, n_angular),
        Model::Line { q, p } => line_matrix(q, p, g, range),
    }
}

/// Computes the matrix and certifies the interior unitarity defect against
/// the tolerance; failure reports the achieved defect.
pub fn group_matrix(
    model: Model,
    g: &CoveredElement,
    range: usize,
    tol: f64,
) -> Result<TruncatedOperatorMatrix, MatrixError> {
    let m = compute_matrix(model, g, range)?;
    if m.defect > tol {
        return Err(MatrixError::QuadratureDefect {
            defect: m.defect,
            tol,
        });
    }
    Ok(m)
}

fn disk_matrix(
    s: f64,
    g: &CoveredElement,
    range: usize,
    n_radial: usize,
    n_angular: usize,
) -> Result<TruncatedOperatorMatrix, MatrixError> {
    let model = DiscreteModel::new(s)?;
    let dim = range + 1;
    let grid = DiskGrid::new(n_radial, n_angular);
    let t = g.inverse().s;
    let two_s = 2.0 * s;
    // prefactors: v_m(z(w)) = beta_m w^m (1-w)^{2s} / (2i)^{2s}
    let two_i_pow = cpow(Complex64::new(0.0, 2.0), Complex64::new(two_s, 0.0));
    let betas: Vec<f64> = (0..dim)
        .map(|m| model.a_n(m as u32) / model.norm_sq_ratio(m as u32).sqrt())
        .collect();
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let dtheta = 2.0 * std::f64::consts::PI / n_angular as f64;
    for n in 0..dim {
        // angular DFT accumulators per m
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for &(rho, wr) in &grid.radial {
            let mut ring = vec![Complex64::new(0.0, 0.0); dim];
            for k in 0..n_angular {
                let theta = grid.angle(k);
                let w = Complex64::from_polar(rho, theta);
                let z = crate::geometry::cayley_inverse(w).expect("interior");
                let jac = 4.0 / (Complex64::new(1.0, 0.0) - w).norm_sqr().powi(2);
                let weight = z.im.powf(two_s - 2.0) * jac;
                // transformed basis column
                let gz = mobius_apply(&t, z);
                let gv = model.v(n as u32, gz)? * mobius_factor(&t, z, two_s, g);
                let one_minus_w = Complex64::new(1.0, 0.0) - w;
                let base = (cpow(one_minus_w, Complex64::new(two_s, 0.0)) / two_i_pow).conj()
                    * gv
                    * weight;
                // conj(w)^m picked up by the angular DFT below
                let em = Complex64::from_polar(1.0, -theta);
                let mut wpow = Complex64::new(1.0, 0.0);
                for ring_m in ring.iter_mut() {
                    *ring_m += wpow * base;
                    wpow *= em;
                }
            }
            let ring_weight = rho * wr * dtheta;
            let mut rpow = 1.0;
            for (m, ring_m) in ring.iter().enumerate() {
                acc[m] += ring_m * ring_weight * rpow * betas[m];
                rpow *= rho;
            }
        }
        for m in 0..dim {
            entries[m][n] = acc[m];
        }
    }
    let mut out = TruncatedOperatorMatrix {
        model: Model::Disk { s },
        range,
        margin: (range / 4).max(1),
        entries,
        defect: 0.0,
    };
    out.defect = out.unitarity_defect();
    Ok(out)
}

fn line_matrix(
    q: f64,
    p: f64,
    g: &CoveredElement,
    range: usize,
) -> Result<TruncatedOperatorMatrix, MatrixError> {
    let model = PrincipalModel::from_q(q);
    let dim = range + 1;
    let half = (range / 2) as i64;
    let m_index = |i: usize| p + (i as i64 - half) as f64;
    let n_theta = (16 * range).max(1024);
    let grid = LineGrid::new(n_theta);
    let t = g.inverse().s;
    let s = model.s;
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for n in 0..dim {
        // evaluate the transformed column once per node
        let samples: Vec<(f64, f64, Complex64)> = grid
            .nodes()
            .map(|(x, wgt)| {
                let denom = t[1][0] * x + t[1][1];
                let gx = (t[0][0] * x + t[0][1]) / denom;
                // continuous series factor |cx+d|^{-2s}
                let factor = cpow(
                    Complex64::new(denom.abs(), 0.0),
                    -2.0 * s,
                );
                (x, wgt, model.phi(m_index(n), gx) * factor)
            })
            .collect();
        for m in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(x, wgt, gv) in &samples {
                acc += model.phi(m_index(m), x).conj() * gv * wgt;
            }
            entries[m][n] = acc;
        }
    }
    let mut out = TruncatedOperatorMatrix {
        model: Model::Line { q, p },
        range,
        margin: (range / 4).max(1),
        entries,
        defect: 0.0,
    };
    out.defect = out.unitarity_defect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rotation, sl2_from_params, GroupParams};

    #[test]
    fn identity_gives_identity_matrix() {
        let u = compute_matrix(Model::Disk { s: 2.0 }, &CoveredElement::identity(), 12).unwrap();
        for m in 0..u.dim() {
            for n in 0..u.dim() {
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (u.entries[m][n] - expected).norm() < 1e-10,
                    "U[{m}][{n}] = {}",
                    u.entries[m][n]
                );
            }
        }
        assert!(u.defect < 1e-10);
    }

    #[test]
    fn rotation_is_diagonal_with_phases() {
        let s = 2.0;
        let r = 0.37;
        let g = sl2_from_params(&GroupParams::new(Complex64::new(0.0, 0.0), r).unwrap());
        let u = compute_matrix(Model::Disk { s }, &g, 16).unwrap();
        for m in 0..u.dim() {
            for n in 0..u.dim() {
                if m == n {
                    // exp(i r J3) has eigenvalue exp(i r (s + n))
                    let expected = Complex64::from_polar(1.0, r * (s + n as f64));
                    assert!(
                        (u.entries[m][n] - expected).norm() < 1e-10,
                        "diag {n}: {} vs {expected}",
                        u.entries[n][n]
                    );
                } else {
                    assert!(u.entries[m][n].norm() < 1e-10);
                }
            }
        }
        // matches the rotation matrix route as well
        let k = rotation(r / 2.0);
        let u2 = compute_matrix(Model::Disk { s }, &k, 16).unwrap();
        assert!(u.interior_distance(&u2) < 1e-9);
    }

    #[test]
    fn random_element_interior_unitarity() {
        // the off-diagonal spread of U grows with the hyperbolic size of g,
        // so the margin certifies 1e-8 for elements of modest size
        let g = sl2_from_params(
            &GroupParams::new(Complex64::new(0.04, -0.03), 0.7).unwrap(),
        );
        let u = group_matrix(Model::Disk { s: 2.0 }, &g, 32, 1e-8).unwrap();
        assert!(u.defect < 1e-8, "defect {}", u.defect);
        // interior block is 17x17 at range 32
        assert_eq!(u.interior().len(), 17);
    }

    #[test]
    fn defect_decreases_with_range() {
        let g = sl2_from_params(
            &GroupParams::new(Complex64::new(0.05, 0.02), -0.25).unwrap(),
        );
        let defects: Vec<f64> = [8usize, 16, 24]
            .iter()
            .map(|&r| compute_matrix(Model::Disk { s: 2.0 }, &g, r).unwrap().defect)
            .collect();
        assert!(
            defects[0] > defects[1] && defects[1] > defects[2],
            "defects not decreasing: {defects:?}"
        );
    }

    #[test]
    fn composition_on_interior() {
        let g1 = sl2_from_params(&GroupParams::new(Complex64::new(0.03, 0.01), 0.3).unwrap());
        let g2 = sl2_from_params(&GroupParams::new(Complex64::new(-0.02, 0.03), -0.2).unwrap());
        let g12 = g1.matmul(&g2);
        let range = 24;
        let u1 = compute_matrix(Model::Disk { s: 2.0 }, &g1, range).unwrap();
        let u2 = compute_matrix(Model::Disk { s: 2.0 }, &g2, range).unwrap();
        let u12 = compute_matrix(Model::Disk { s: 2.0 }, &g12, range).unwrap();
        let prod = u1.matmul(&u2);
        assert!(
            u12.interior_distance(&prod) < 1e-6,
            "composition defect {}",
            u12.interior_distance(&prod)
        );
    }

    #[test]
    fn quadrature_failure_reported() {
        let g = sl2_from_params(&GroupParams::new(Complex64::new(0.3, 0.1), 0.2).unwrap());
        // absurd tolerance to force the explicit failure path
        match group_matrix(Model::Disk { s: 2.0 }, &g, 8, 1e-16) {
            Err(MatrixError::QuadratureDefect { defect, tol }) => {
                assert!(defect > tol);
            }
            other => panic!("expected defect failure, got {other:?}"),
        }
    }

    #[test]
    fn line_model_identity_and_rotation() {
        let q = 12f64.sqrt();
        let u = compute_matrix(Model::Line { q, p: 0.0 }, &CoveredElement::identity(), 8)
            .unwrap();
        for m in 0..u.dim() {
            for n in 0..u.dim() {
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((u.entries[m][n] - expected).norm() < 1e-8);
            }
        }
        // small random element stays unitary on the interior
        let g = sl2_from_params(&GroupParams::new(Complex64::new(0.1, 0.05), 0.2).unwrap());
        let u2 = compute_matrix(Model::Line { q, p: 0.0 }, &g, 16).unwrap();
        assert!(u2.defect < 1e-4, "line defect {}", u2.defect);
    }

    #[test]
    fn json_round_shape() {
        let u = compute_matrix(Model::Disk { s: 2.0 }, &CoveredElement::identity(), 4).unwrap();
        let v = u.to_json();
        assert_eq!(v["model"]["kind"], "disk");
        assert_eq!(v["range"], 4);
        assert!(v["entries"][0][0][0].as_f64().unwrap() - 1.0 < 1e-12);
    }
}
