//! Small helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar type used throughout the exact layer.
pub type Q = BigRational;

/// Rational from an integer pair.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn qi(num: i64) -> Q {
    Q::from(BigInt::from(num))
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

/// Renders `p/q`, or just `p` for integers. This is the wire format used in
/// all JSON reports.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `p/q` wire format.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from(n))
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Floor of a rational as a BigInt.
pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Solves the square linear system `m c = rhs` by Gaussian elimination.
/// Returns `None` when the matrix is singular.
pub fn solve_linear(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for entry in a[col][col..].iter_mut() {
            *entry /= p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Nullspace basis of an m x n matrix (vectors of length n).
pub fn nullspace(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let nrows = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        if let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) {
            a.swap(row, p);
            let piv = a[row][col].clone();
            for entry in a[row].iter_mut() {
                *entry /= piv.clone();
            }
            for r in 0..nrows {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..ncols {
                        let sub = &f * &a[row][c];
                        a[r][c] -= sub;
                    }
                }
            }
            pivot_of_col[col] = Some(row);
            row += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (col, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[col] = -a[*r][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial coefficients of a square rational matrix,
/// highest degree first (monic), via the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut coeffs = vec![Q::one()];
    let mut aux: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    let mut c = Q::one();
    for k in 1..=n {
        // aux = m * (aux + c * I)
        let mut shifted = aux.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &c;
        }
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for (l, srow) in shifted.iter().enumerate() {
                    s += &m[i][l] * &srow[j];
                }
                next[i][j] = s;
            }
        }
        let trace: Q = (0..n).map(|i| next[i][i].clone()).sum();
        c = -trace / qi(k as i64);
        coeffs.push(c.clone());
        aux = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_wire_format() {
        for (n, d) in [(1i64, 2i64), (-13, 4), (7, 1), (0, 1)] {
            let x = q(n, d);
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(sqrt_exact(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(sqrt_exact(&q(2, 1)), None);
        assert_eq!(sqrt_exact(&q(-1, 1)), None);
    }

    #[test]
    fn linear_solve_and_nullspace() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let sol = solve_linear(&m, &[qi(5), qi(10)]).unwrap();
        assert_eq!(sol, vec![qi(1), qi(3)]);

        let sing = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(solve_linear(&sing, &[qi(1), qi(1)]).is_none());
        let ns = nullspace(&sing, 2);
        assert_eq!(ns.len(), 1);
        // the kernel vector satisfies v0 + 2 v1 = 0
        assert!((&ns[0][0] + qi(2) * &ns[0][1]).is_zero());
    }

    #[test]
    fn char_poly_2x2() {
        // [[2,1],[1,2]] -> x^2 - 4x + 3
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(2)]];
        assert_eq!(char_poly(&m), vec![qi(1), qi(-4), qi(3)]);
    }
}
