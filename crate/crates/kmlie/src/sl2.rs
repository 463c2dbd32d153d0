//! Abstract representation theory of sl(2,R) and its covers: series labels,
//! Casimir values, exact norm recursions, finite-dimensional Clebsch-Gordan
//! arithmetic, and the change-of-basis matrices between the standard
//! realizations of the algebra.

use crate::ratio::{fmt_q, q, qi, sqrt_exact, Q};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    NonPositiveS(Q),
    NonUnitaryFactor { index: i64, factor: Q },
    MalformedString(String),
    InvalidLabel(String),
}

impl fmt::Display for Sl2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl2Error::NonPositiveS(s) => {
                write!(f, "discrete-series parameter s = {} must be positive", fmt_q(s))
            }
            Sl2Error::NonUnitaryFactor { index, factor } => write!(
                f,
                "norm factor at step {index} is {} <= 0: non-unitary parameters",
                fmt_q(factor)
            ),
            Sl2Error::MalformedString(msg) => write!(f, "malformed weight string: {msg}"),
            Sl2Error::InvalidLabel(msg) => write!(f, "invalid label: {msg}"),
        }
    }
}

impl std::error::Error for Sl2Error {}

/// Label of an irreducible unitary representation of a cover of SO(2,1),
/// plus the finite-dimensional (non-unitary except V(0)) modules V(m).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum IrrepLabel {
    Trivial,
    FiniteDim(u64),
    DiscreteLowest(Q),
    DiscreteHighest(Q),
    Principal { p: Q, omega: Q },
    Complementary { p: Q, omega: Q },
}

impl IrrepLabel {
    pub fn discrete_lowest(s: Q) -> Result<Self, Sl2Error> {
        if s.is_positive() {
            Ok(IrrepLabel::DiscreteLowest(s))
        } else {
            Err(Sl2Error::NonPositiveS(s))
        }
    }

    pub fn discrete_highest(s: Q) -> Result<Self, Sl2Error> {
        if s.is_positive() {
            Ok(IrrepLabel::DiscreteHighest(s))
        } else {
            Err(Sl2Error::NonPositiveS(s))
        }
    }

    pub fn principal(p: Q, omega: Q) -> Result<Self, Sl2Error> {
        if omega > q(-1, 4) {
            return Err(Sl2Error::InvalidLabel(format!(
                "principal series requires Omega <= -1/4, got {}",
                fmt_q(&omega)
            )));
        }
        Ok(IrrepLabel::Principal {
            p: normalize_p(p),
            omega,
        })
    }

    pub fn complementary(p: Q, omega: Q) -> Result<Self, Sl2Error> {
        if omega <= q(-1, 4) || !omega.is_negative() {
            return Err(Sl2Error::InvalidLabel(format!(
                "complementary series requires -1/4 < Omega < 0, got {}",
                fmt_q(&omega)
            )));
        }
        Ok(IrrepLabel::Complementary {
            p: normalize_p(p),
            omega,
        })
    }

    /// The Casimir eigenvalue: 0, m(m+2)/4, s(s-1), or the stored Omega.
    pub fn casimir(&self) -> Q {
        match self {
            IrrepLabel::Trivial => Q::zero(),
            IrrepLabel::FiniteDim(m) => {
                let m = qi(*m as i64);
                &m * (&m + qi(2)) / qi(4)
            }
            IrrepLabel::DiscreteLowest(s) | IrrepLabel::DiscreteHighest(s) => {
                s * &(s - Q::one())
            }
            IrrepLabel::Principal { omega, .. } | IrrepLabel::Complementary { omega, .. } => {
                omega.clone()
            }
        }
    }

    /// JSON form used by all reports; `mult` rides along with the label.
    pub fn to_json(&self, mult: u64) -> Value {
        match self {
            IrrepLabel::Trivial => json!({"kind": "trivial", "mult": mult}),
            IrrepLabel::FiniteDim(m) => json!({"kind": "finite", "m": m, "mult": mult}),
            IrrepLabel::DiscreteLowest(s) => {
                json!({"kind": "discrete_lowest", "s": fmt_q(s), "mult": mult})
            }
            IrrepLabel::DiscreteHighest(s) => {
                json!({"kind": "discrete_highest", "s": fmt_q(s), "mult": mult})
            }
            IrrepLabel::Principal { p, omega } => {
                let s = match s_from_casimir(omega) {
                    SRoots::ComplexPair { re, im2 } => {
                        json!({"re": fmt_q(&re), "im2": fmt_q(&im2)})
                    }
                    SRoots::RationalPair(s1, _) => json!(fmt_q(&s1)),
                    SRoots::SurdPair { re, disc } => {
                        json!({"re": fmt_q(&re), "disc": fmt_q(&disc)})
                    }
                };
                json!({"kind": "principal", "p": fmt_q(p), "omega": fmt_q(omega), "s": s, "mult": mult})
            }
            IrrepLabel::Complementary { p, omega } => {
                json!({"kind": "complementary", "p": fmt_q(p), "omega": fmt_q(omega), "mult": mult})
            }
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Trivial => write!(f, "trivial"),
            IrrepLabel::FiniteDim(m) => write!(f, "V({m})"),
            IrrepLabel::DiscreteLowest(s) => write!(f, "D+({})", fmt_q(s)),
            IrrepLabel::DiscreteHighest(s) => write!(f, "D-({})", fmt_q(s)),
            IrrepLabel::Principal { p, omega } => {
                write!(f, "P(p={}, Omega={})", fmt_q(p), fmt_q(omega))
            }
            IrrepLabel::Complementary { p, omega } => {
                write!(f, "C(p={}, Omega={})", fmt_q(p), fmt_q(omega))
            }
        }
    }
}

fn normalize_p(p: Q) -> Q {
    let f = p.floor();
    p - f
}

/// The two solutions of `s(s-1) = Omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SRoots {
    /// Both roots rational: `s` and `1 - s`.
    RationalPair(Q, Q),
    /// `s = re +- sqrt(disc)/2` with positive non-square discriminant.
    SurdPair { re: Q, disc: Q },
    /// `s = re +- i sqrt(im2)/2`, a complex-conjugate pair.
    ComplexPair { re: Q, im2: Q },
}

impl SRoots {
    /// `s(s-1)` recovered from either root; inverse of `s_from_casimir`.
    pub fn casimir(&self) -> Q {
        match self {
            SRoots::RationalPair(s, _) => s * &(s - Q::one()),
            // (s - 1/2)^2 - 1/4 with (s - 1/2)^2 = disc/4 resp. -im2/4
            SRoots::SurdPair { disc, .. } => (disc - Q::one()) / qi(4),
            SRoots::ComplexPair { im2, .. } => (-im2 - Q::one()) / qi(4),
        }
    }
}

/// Solves `s(s-1) = Omega` exactly: `s = (1 +- sqrt(1 + 4 Omega))/2`.
pub fn s_from_casimir(omega: &Q) -> SRoots {
    let disc = Q::one() + qi(4) * omega;
    let half = q(1, 2);
    if disc.is_negative() {
        SRoots::ComplexPair {
            re: half,
            im2: -disc,
        }
    } else if let Some(r) = sqrt_exact(&disc) {
        let s1 = (&r + Q::one()) / qi(2);
        let s2 = (Q::one() - &r) / qi(2);
        SRoots::RationalPair(s1, s2)
    } else {
        SRoots::SurdPair { re: half, disc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuousClass {
    Principal,
    Complementary,
    NotContinuousUnitary,
}

/// Principal for `Omega <= -1/4`, complementary on `-1/4 < Omega < 0`,
/// otherwise not a continuous unitary class.
pub fn classify_continuous(omega: &Q) -> ContinuousClass {
    if *omega <= q(-1, 4) {
        ContinuousClass::Principal
    } else if omega.is_negative() {
        ContinuousClass::Complementary
    } else {
        ContinuousClass::NotContinuousUnitary
    }
}

/// `||w_n||^2 = (n!/2^n) prod_{k=1}^n (2s-1+k)` for the n-th ladder state
/// over a lowest/highest weight state of parameter `s > 0`.
pub fn discrete_norm_sq(s: &Q, n: u64) -> Result<Q, Sl2Error> {
    if !s.is_positive() {
        return Err(Sl2Error::NonPositiveS(s.clone()));
    }
    let mut out = Q::one();
    let two_s_minus_1 = qi(2) * s - Q::one();
    for k in 1..=n {
        out *= qi(k as i64) * (&two_s_minus_1 + qi(k as i64)) / qi(2);
    }
    Ok(out)
}

/// `||w_{p +- n}||^2 = 2^{-n} prod_{k=0}^{n-1} [(p +- k)(p +- (k+1)) - Omega]`
/// along a continuous-series ladder; every factor must stay positive.
pub fn principal_norm_sq(p: &Q, omega: &Q, n: i64) -> Result<Q, Sl2Error> {
    let steps = n.unsigned_abs();
    let dir = if n >= 0 { Q::one() } else { -Q::one() };
    let mut out = Q::one();
    for k in 0..steps {
        let pk = p + &dir * qi(k as i64);
        let pk1 = p + &dir * qi(k as i64 + 1);
        let factor = &pk * &pk1 - omega;
        if !factor.is_positive() {
            return Err(Sl2Error::NonUnitaryFactor {
                index: if n >= 0 { k as i64 } else { -(k as i64) },
                factor,
            });
        }
        out *= factor / qi(2);
    }
    Ok(out)
}

// ----------------------------------------------------------------------
// Finite-dimensional arithmetic
// ----------------------------------------------------------------------

/// Clebsch-Gordan ladder: `V(m1) (x) V(m2) = sum_k V(m1+m2-2k)`,
/// `k = 0..min(m1,m2)`. Returned as `m -> count`.
pub fn clebsch_gordan(m1: u64, m2: u64) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for k in 0..=m1.min(m2) {
        *out.entry(m1 + m2 - 2 * k).or_insert(0) += 1;
    }
    out
}

fn weights_of_v(m: u64) -> Vec<i64> {
    // doubled J3 eigenvalues m, m-2, ..., -m
    (0..=m).map(|k| m as i64 - 2 * k as i64).collect()
}

fn decompose_weight_multiset(mut counts: BTreeMap<i64, i64>) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    while let Some((&top, &c)) = counts.iter().next_back() {
        if c == 0 {
            counts.remove(&top);
            continue;
        }
        assert!(c > 0 && top >= 0, "not a character of finite sl(2)-modules");
        *out.entry(top as u64).or_insert(0) += c as u64;
        let mut w = top;
        while w >= -top {
            let e = counts.entry(w).or_insert(0);
            *e -= c;
            if *e == 0 {
                counts.remove(&w);
            }
            w -= 2;
        }
    }
    out
}

/// Antisymmetric square via weight arithmetic.
pub fn wedge_square(m: u64) -> BTreeMap<u64, u64> {
    let ws = weights_of_v(m);
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            *counts.entry(ws[i] + ws[j]).or_insert(0) += 1;
        }
    }
    decompose_weight_multiset(counts)
}

/// Symmetric square via weight arithmetic.
pub fn sym_square(m: u64) -> BTreeMap<u64, u64> {
    let ws = weights_of_v(m);
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for i in 0..ws.len() {
        for j in i..ws.len() {
            *counts.entry(ws[i] + ws[j]).or_insert(0) += 1;
        }
    }
    decompose_weight_multiset(counts)
}

/// Decomposes a palindromic multiplicity list along a finite root string by
/// differencing from the ends inward: a list of length L with increments
/// `c_j = m_j - m_{j-1}` contains `c_j` copies of `V(L-1-2j)`.
pub fn finite_string_decompose(mults: &[u64]) -> Result<BTreeMap<u64, u64>, Sl2Error> {
    if mults.is_empty() {
        return Err(Sl2Error::MalformedString("empty list".into()));
    }
    let l = mults.len();
    for j in 0..l / 2 {
        if mults[j] != mults[l - 1 - j] {
            return Err(Sl2Error::MalformedString(format!(
                "not palindromic: entry {} is {} but entry {} is {}",
                j,
                mults[j],
                l - 1 - j,
                mults[l - 1 - j]
            )));
        }
    }
    let mut out = BTreeMap::new();
    let mut prev = 0u64;
    for j in 0..l.div_ceil(2) {
        if mults[j] < prev {
            return Err(Sl2Error::MalformedString(format!(
                "negative difference at position {j}: {} < {}",
                mults[j], prev
            )));
        }
        let c = mults[j] - prev;
        if c > 0 {
            out.insert((l - 1 - 2 * j) as u64, c);
        }
        prev = mults[j];
    }
    Ok(out)
}

// ----------------------------------------------------------------------
// Change of basis between sl(2) realizations
// ----------------------------------------------------------------------

/// Exact scalar in the field Q(i, sqrt(2)): `a + b i + c r + d i r` with
/// `r = sqrt(2)`. Closed under the change-of-basis matrices below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CScalar {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

impl CScalar {
    pub fn zero() -> Self {
        CScalar {
            a: Q::zero(),
            b: Q::zero(),
            c: Q::zero(),
            d: Q::zero(),
        }
    }

    pub fn one() -> Self {
        CScalar {
            a: Q::one(),
            ..CScalar::zero()
        }
    }

    pub fn rat(a: Q) -> Self {
        CScalar {
            a,
            ..CScalar::zero()
        }
    }

    /// `b i`.
    pub fn im(b: Q) -> Self {
        CScalar {
            b,
            ..CScalar::zero()
        }
    }

    /// `c sqrt(2)`.
    pub fn rt2(c: Q) -> Self {
        CScalar {
            c,
            ..CScalar::zero()
        }
    }

    /// `d i sqrt(2)`.
    pub fn imrt2(d: Q) -> Self {
        CScalar {
            d,
            ..CScalar::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        CScalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CScalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }

    pub fn neg(&self) -> Self {
        CScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        // (a1 + b1 i + c1 r + d1 i r)(a2 + b2 i + c2 r + d2 i r), r^2 = 2
        let two = qi(2);
        CScalar {
            a: &self.a * &o.a - &self.b * &o.b + &two * (&self.c * &o.c - &self.d * &o.d),
            b: &self.a * &o.b + &self.b * &o.a + &two * (&self.c * &o.d + &self.d * &o.c),
            c: &self.a * &o.c + &self.c * &o.a - &self.b * &o.d - &self.d * &o.b,
            d: &self.a * &o.d + &self.d * &o.a + &self.b * &o.c + &self.c * &o.b,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        // write x = u + v r with u = a + b i, v = c + d i in Q(i):
        // 1/x = (u - v r) / (u^2 - 2 v^2)
        let u = (self.a.clone(), self.b.clone());
        let v = (self.c.clone(), self.d.clone());
        let gm = |x: &(Q, Q), y: &(Q, Q)| (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0);
        let u2 = gm(&u, &u);
        let v2 = gm(&v, &v);
        let den = (&u2.0 - qi(2) * &v2.0, &u2.1 - qi(2) * &v2.1);
        let norm = &den.0 * &den.0 + &den.1 * &den.1;
        if norm.is_zero() {
            return None;
        }
        let den_inv = (&den.0 / &norm, -&den.1 / &norm);
        let top_u = gm(&u, &den_inv);
        let top_v = gm(&(-v.0.clone(), -v.1.clone()), &den_inv);
        Some(CScalar {
            a: top_u.0,
            b: top_u.1,
            c: top_v.0,
            d: top_v.1,
        })
    }
}

impl fmt::Display for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.a.is_zero() {
            parts.push(fmt_q(&self.a));
        }
        if !self.b.is_zero() {
            parts.push(format!("{} i", fmt_q(&self.b)));
        }
        if !self.c.is_zero() {
            parts.push(format!("{} r2", fmt_q(&self.c)));
        }
        if !self.d.is_zero() {
            parts.push(format!("{} i r2", fmt_q(&self.d)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The five realizations of sl(2) used throughout; each carries an exact
/// 3x3 matrix expressing its basis in `(e, f, h)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sl2Basis {
    /// Standard Chevalley basis (e, f, h).
    Efh,
    /// Antisymmetric rotation generators (M1, M2, M3).
    So3,
    /// Lorentz generators (J0, J1, J2).
    So21,
    /// Ladder form (J3, J+, J-) with `[J+, J-] = -J3`.
    Ladder,
    /// Conjugated su(1,1) ladder (j3, j+, j-).
    SuLadder,
}

pub const ALL_BASES: [Sl2Basis; 5] = [
    Sl2Basis::Efh,
    Sl2Basis::So3,
    Sl2Basis::So21,
    Sl2Basis::Ladder,
    Sl2Basis::SuLadder,
];

impl Sl2Basis {
    /// Columns are the basis vectors in `(e, f, h)` coordinates.
    pub fn to_efh_matrix(&self) -> [[CScalar; 3]; 3] {
        let z = CScalar::zero;
        match self {
            Sl2Basis::Efh => [
                [CScalar::one(), z(), z()],
                [z(), CScalar::one(), z()],
                [z(), z(), CScalar::one()],
            ],
            // M1 = -(i/2)(e+f), M2 = (f-e)/2, M3 = -(i/2) h
            Sl2Basis::So3 => [
                [CScalar::im(q(-1, 2)), CScalar::rat(q(-1, 2)), z()],
                [CScalar::im(q(-1, 2)), CScalar::rat(q(1, 2)), z()],
                [z(), z(), CScalar::im(q(-1, 2))],
            ],
            // J0 = (e-f)/2, J1 = (e+f)/2, J2 = -h/2
            Sl2Basis::So21 => [
                [CScalar::rat(q(1, 2)), CScalar::rat(q(1, 2)), z()],
                [CScalar::rat(q(-1, 2)), CScalar::rat(q(1, 2)), z()],
                [z(), z(), CScalar::rat(q(-1, 2))],
            ],
            // J3 = h/2, J+ = e/sqrt2, J- = -f/sqrt2
            Sl2Basis::Ladder => [
                [z(), CScalar::rt2(q(1, 2)), z()],
                [z(), z(), CScalar::rt2(q(-1, 2))],
                [CScalar::rat(q(1, 2)), z(), z()],
            ],
            // j3 = (i/2)(e-f), j+- = (1/(2 sqrt2)) (-i(e+f) +- h)
            Sl2Basis::SuLadder => [
                [CScalar::im(q(1, 2)), CScalar::imrt2(q(-1, 4)), CScalar::imrt2(q(-1, 4))],
                [CScalar::im(q(-1, 2)), CScalar::imrt2(q(-1, 4)), CScalar::imrt2(q(-1, 4))],
                [z(), CScalar::rt2(q(1, 4)), CScalar::rt2(q(-1, 4))],
            ],
        }
    }

    /// Expected structure constants: `[b_i, b_j] = sum_k c^k_ij b_k`.
    pub fn structure_constants(&self) -> [[[CScalar; 3]; 3]; 3] {
        let mut table: [[[CScalar; 3]; 3]; 3] = Default::default();
        let m = self.to_efh_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let col_i = [m[0][i].clone(), m[1][i].clone(), m[2][i].clone()];
                let col_j = [m[0][j].clone(), m[1][j].clone(), m[2][j].clone()];
                let br = bracket_efh(&col_i, &col_j);
                table[i][j] = convert_from_efh(&br, *self);
            }
        }
        table
    }
}

impl Default for CScalar {
    fn default() -> Self {
        CScalar::zero()
    }
}

/// Bracket of two vectors in `(e, f, h)` coordinates, using
/// `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn bracket_efh(x: &[CScalar; 3], y: &[CScalar; 3]) -> [CScalar; 3] {
    let two = CScalar::rat(qi(2));
    let e = two
        .mul(&x[2].mul(&y[0]).sub(&x[0].mul(&y[2])));
    let f = two
        .mul(&x[1].mul(&y[2]).sub(&x[2].mul(&y[1])));
    let h = x[0].mul(&y[1]).sub(&x[1].mul(&y[0]));
    [e, f, h]
}

fn mat_vec(m: &[[CScalar; 3]; 3], v: &[CScalar; 3]) -> [CScalar; 3] {
    let mut out = [CScalar::zero(), CScalar::zero(), CScalar::zero()];
    for (r, out_r) in out.iter_mut().enumerate() {
        for (c, vc) in v.iter().enumerate() {
            *out_r = out_r.add(&m[r][c].mul(vc));
        }
    }
    out
}

fn solve3(m: &[[CScalar; 3]; 3], rhs: &[CScalar; 3]) -> [CScalar; 3] {
    // Gaussian elimination over the exact field
    let mut a: Vec<Vec<CScalar>> = (0..3)
        .map(|r| {
            let mut row: Vec<CScalar> = m[r].to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    for col in 0..3 {
        let piv = (col..3)
            .find(|&r| !a[r][col].is_zero())
            .expect("change-of-basis matrices are invertible");
        a.swap(col, piv);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for c in col..4 {
            a[col][c] = a[col][c].mul(&inv);
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..4 {
                    let sub = f.mul(&a[col][c]);
                    a[r][c] = a[r][c].sub(&sub);
                }
            }
        }
    }
    [a[0][3].clone(), a[1][3].clone(), a[2][3].clone()]
}

/// Converts `(e,f,h)` coordinates to coordinates in the target basis.
pub fn convert_from_efh(v: &[CScalar; 3], to: Sl2Basis) -> [CScalar; 3] {
    solve3(&to.to_efh_matrix(), v)
}

/// Converts coordinates between any two of the five bases; the round trip
/// is the identity and brackets transform covariantly.
pub fn convert_basis(coords: &[CScalar; 3], from: Sl2Basis, to: Sl2Basis) -> [CScalar; 3] {
    let efh = mat_vec(&from.to_efh_matrix(), coords);
    convert_from_efh(&efh, to)
}
