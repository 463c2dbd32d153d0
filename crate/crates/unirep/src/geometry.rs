//! SL(2,R) group elements from exponential coordinates, the Iwasawa
//! factorization, and the Cayley transform between the upper half-plane and
//! the unit disk.

use num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    NotUnimodular { det: f64 },
    PoleInput(String),
    NonFinite,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NotUnimodular { det } => {
                write!(f, "matrix determinant {det} is not 1 within 1e-12")
            }
            GeometryError::PoleInput(msg) => write!(f, "input at a pole: {msg}"),
            GeometryError::NonFinite => write!(f, "non-finite parameter"),
        }
    }
}

impl std::error::Error for GeometryError {}

/// Exponential coordinates of a unitary group element:
/// `U(w, r) = exp(i w J+ + i conj(w) J- + i r J3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    pub w: Complex64,
    pub r: f64,
}

impl GroupParams {
    pub fn new(w: Complex64, r: f64) -> Result<Self, GeometryError> {
        if !w.re.is_finite() || !w.im.is_finite() || !r.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(GroupParams { w, r })
    }
}

/// A real 2x2 unimodular matrix together with cover data: the cover index
/// `n_cover` and the sheet (which n-th root of the automorphy factor is
/// taken).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveredElement {
    pub s: [[f64; 2]; 2],
    pub n_cover: u32,
    pub sheet: u32,
}

impl CoveredElement {
    pub fn new(s: [[f64; 2]; 2], n_cover: u32, sheet: u32) -> Result<Self, GeometryError> {
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        if (det - 1.0).abs() > 1e-12 {
            return Err(GeometryError::NotUnimodular { det });
        }
        Ok(CoveredElement {
            s,
            n_cover: n_cover.max(1),
            sheet: sheet % n_cover.max(1),
        })
    }

    pub fn identity() -> Self {
        CoveredElement {
            s: [[1.0, 0.0], [0.0, 1.0]],
            n_cover: 1,
            sheet: 0,
        }
    }

    pub fn matmul(&self, other: &CoveredElement) -> CoveredElement {
        let a = &self.s;
        let b = &other.s;
        CoveredElement {
            s: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
            n_cover: self.n_cover.max(other.n_cover),
            sheet: 0,
        }
    }

    pub fn inverse(&self) -> CoveredElement {
        let a = &self.s;
        CoveredElement {
            s: [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]],
            n_cover: self.n_cover,
            sheet: self.sheet,
        }
    }
}

/// Builds the group element whose function-space action realizes
/// `U(w, r) = exp(i w J+ + i conj(w) J- + i r J3)`: the argument of the
/// matrix exponential is the real combination
/// `X = (1/sqrt2)(u(e+f) - v h) - (r/2)(e - f)` for `w = u + iv`,
/// exponentiated in closed form by its trace classification. The sign of
/// the rotation part is fixed so that the action of the result on a
/// lowest-weight basis is diagonal with phases `exp(i r (s+n))`.
pub fn sl2_from_params(p: &GroupParams) -> CoveredElement {
    let u = p.w.re;
    let v = p.w.im;
    let s2 = std::f64::consts::SQRT_2;
    // X = [[-v/sqrt2, u/sqrt2 - r/2], [u/sqrt2 + r/2, v/sqrt2]]
    let x = [
        [-v / s2, u / s2 - p.r / 2.0],
        [u / s2 + p.r / 2.0, v / s2],
    ];
    let det = x[0][0] * x[1][1] - x[0][1] * x[1][0];
    let (c, k) = if det > 1e-14 {
        // elliptic: exp X = cos(t) I + sin(t)/t X
        let t = det.sqrt();
        (t.cos(), t.sin() / t)
    } else if det < -1e-14 {
        // hyperbolic
        let t = (-det).sqrt();
        (t.cosh(), t.sinh() / t)
    } else {
        (1.0, 1.0)
    };
    let m = [
        [c + k * x[0][0], k * x[0][1]],
        [k * x[1][0], c + k * x[1][1]],
    ];
    CoveredElement {
        s: m,
        n_cover: 1,
        sheet: 0,
    }
}

/// Iwasawa factorization `S = K(theta) A(a) N(n)` with `K` a rotation,
/// `A = diag(a, 1/a)` with `a > 0`, and `N` upper unitriangular.
pub fn iwasawa_decompose(s: &[[f64; 2]; 2]) -> Result<(f64, f64, f64), GeometryError> {
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    if (det - 1.0).abs() > 1e-12 {
        return Err(GeometryError::NotUnimodular { det });
    }
    let a = s[0][0].hypot(s[1][0]);
    let theta = s[1][0].atan2(s[0][0]);
    // K^{-1} S = [[a, x], [0, 1/a]]
    let (c, sn) = (theta.cos(), theta.sin());
    let x = c * s[0][1] + sn * s[1][1];
    Ok((theta, a, x / a))
}

pub fn rotation(theta: f64) -> CoveredElement {
    CoveredElement {
        s: [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]],
        n_cover: 1,
        sheet: 0,
    }
}

pub fn reassemble_iwasawa(theta: f64, a: f64, n: f64) -> [[f64; 2]; 2] {
    let k = rotation(theta).s;
    let an = [[a, a * n], [0.0, 1.0 / a]];
    [
        [
            k[0][0] * an[0][0] + k[0][1] * an[1][0],
            k[0][0] * an[0][1] + k[0][1] * an[1][1],
        ],
        [
            k[1][0] * an[0][0] + k[1][1] * an[1][0],
            k[1][0] * an[0][1] + k[1][1] * an[1][1],
        ],
    ]
}

/// Cayley transform `w = (z - i)/(z + i)`: upper half-plane to unit disk.
pub fn cayley(z: Complex64) -> Result<Complex64, GeometryError> {
    let i = Complex64::i();
    let den = z + i;
    if den.norm() < 1e-300 {
        return Err(GeometryError::PoleInput("z = -i".into()));
    }
    Ok((z - i) / den)
}

/// Inverse Cayley transform `z = i(1 + w)/(1 - w)`.
pub fn cayley_inverse(w: Complex64) -> Result<Complex64, GeometryError> {
    let one = Complex64::new(1.0, 0.0);
    let den = one - w;
    if den.norm() < 1e-300 {
        return Err(GeometryError::PoleInput("w = 1".into()));
    }
    Ok(Complex64::i() * (one + w) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let g = sl2_from_params(&GroupParams::new(Complex64::new(0.0, 0.0), 0.0).unwrap());
        assert_eq!(g.s, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn full_rotation_is_minus_identity() {
        let g = sl2_from_params(
            &GroupParams::new(Complex64::new(0.0, 0.0), 2.0 * std::f64::consts::PI).unwrap(),
        );
        assert!(close(g.s[0][0], -1.0, 1e-12));
        assert!(close(g.s[1][1], -1.0, 1e-12));
        assert!(close(g.s[0][1], 0.0, 1e-12));
        assert!(close(g.s[1][0], 0.0, 1e-12));
    }

    #[test]
    fn real_w_gives_symmetric_hyperbolic() {
        let u = 0.7;
        let g = sl2_from_params(&GroupParams::new(Complex64::new(u, 0.0), 0.0).unwrap());
        // exp of (u/sqrt2)(e+f): cosh on the diagonal, sinh off it
        let t = u / std::f64::consts::SQRT_2;
        assert!(close(g.s[0][0], t.cosh(), 1e-12));
        assert!(close(g.s[1][1], t.cosh(), 1e-12));
        assert!(close(g.s[0][1], t.sinh(), 1e-12));
        assert!(close(g.s[1][0], t.sinh(), 1e-12));
        let det = g.s[0][0] * g.s[1][1] - g.s[0][1] * g.s[1][0];
        assert!(close(det, 1.0, 1e-12));
    }

    #[test]
    fn iwasawa_reconstruction() {
        // identity and pure rotation
        assert_eq!(
            iwasawa_decompose(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(),
            (0.0, 1.0, 0.0)
        );
        let (theta, a, n) = iwasawa_decompose(&rotation(0.4).s).unwrap();
        assert!(close(theta, 0.4, 1e-14));
        assert!(close(a, 1.0, 1e-14));
        assert!(close(n, 0.0, 1e-14));
        // pseudo-random unimodular samples
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..50 {
            let p = GroupParams::new(Complex64::new(rnd() * 2.0, rnd() * 2.0), rnd() * 6.0)
                .unwrap();
            let g = sl2_from_params(&p);
            let (theta, a, n) = iwasawa_decompose(&g.s).unwrap();
            assert!(a > 0.0);
            let back = reassemble_iwasawa(theta, a, n);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        close(back[i][j], g.s[i][j], 1e-12),
                        "reconstruction failed: {back:?} vs {:?}",
                        g.s
                    );
                }
            }
        }
    }

    #[test]
    fn cayley_round_trip() {
        assert!((cayley(Complex64::i()).unwrap()).norm() < 1e-15);
        let w0 = cayley(Complex64::new(0.0, 0.0)).unwrap();
        assert!((w0 - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let mut state = 0x123456789abcdefu64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let z = Complex64::new((rnd() - 0.5) * 10.0, rnd() * 5.0 + 1e-3);
            let w = cayley(z).unwrap();
            assert!(w.norm() < 1.0);
            let back = cayley_inverse(w).unwrap();
            assert!((back - z).norm() < 1e-13 * (1.0 + z.norm()));
        }
        assert!(cayley(Complex64::new(0.0, -1.0)).is_err());
        assert!(cayley_inverse(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn covered_element_validation() {
        assert!(CoveredElement::new([[2.0, 0.0], [0.0, 1.0]], 1, 0).is_err());
        let g = CoveredElement::new([[2.0, 0.0], [0.0, 0.5]], 3, 7).unwrap();
        assert_eq!(g.sheet, 1); // reduced mod cover
        let gi = g.inverse();
        let prod = g.matmul(&gi);
        assert!((prod.s[0][0] - 1.0).abs() < 1e-14);
        assert!((prod.s[1][1] - 1.0).abs() < 1e-14);
    }
}
