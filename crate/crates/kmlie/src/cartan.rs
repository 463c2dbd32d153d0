//! Root-lattice geometry: Cartan matrix validation, inner products, Weyl
//! reflections and orbits, fundamental weights, and the coefficients of the
//! principal so(2,1).
//!
//! Everything here is exact: vectors in the simple-root basis carry integer
//! (roots) or rational (weights) coefficients, and inner products are taken
//! with the symmetric Cartan matrix as Gram matrix.

use crate::ratio::{fmt_q, qi, solve_linear, Q};
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartanError {
    NotSquare,
    NotSymmetric { i: usize, j: usize },
    BadDiagonal { i: usize },
    PositiveOffDiagonal { i: usize, j: usize },
    Singular,
    ZeroRank,
    RankMismatch { expected: usize, got: usize },
    IndexOutOfRange { index: usize, rank: usize },
    NotHyperbolic { reason: String },
    Parse(String),
}

impl fmt::Display for CartanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanError::NotSquare => write!(f, "Cartan matrix must be square"),
            CartanError::NotSymmetric { i, j } => {
                write!(f, "Cartan matrix must be symmetric (a[{i}][{j}] != a[{j}][{i}])")
            }
            CartanError::BadDiagonal { i } => {
                write!(f, "Cartan matrix must have 2 on the diagonal (entry {i})")
            }
            CartanError::PositiveOffDiagonal { i, j } => {
                write!(f, "off-diagonal Cartan entries must be <= 0 (a[{i}][{j}] > 0)")
            }
            CartanError::Singular => write!(f, "Cartan matrix must be non-degenerate"),
            CartanError::ZeroRank => write!(f, "rank must be positive"),
            CartanError::RankMismatch { expected, got } => {
                write!(f, "rank mismatch: expected {expected}, got {got}")
            }
            CartanError::IndexOutOfRange { index, rank } => {
                write!(f, "simple-root index {index} out of range 1..={rank}")
            }
            CartanError::NotHyperbolic { reason } => write!(f, "not hyperbolic: {reason}"),
            CartanError::Parse(msg) => write!(f, "cannot parse Cartan matrix: {msg}"),
        }
    }
}

impl std::error::Error for CartanError {}

/// Sign of the invariant norm of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormClass {
    Spacelike,
    Lightlike,
    Timelike,
}

/// A non-degenerate symmetric Cartan matrix with 2 on the diagonal and
/// non-positive off-diagonal integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    a: Vec<Vec<i64>>,
    inv: Vec<Vec<Q>>,
    det: Q,
}

#[derive(Deserialize)]
struct CartanJson {
    rank: usize,
    a: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let r = a.len();
        if r == 0 {
            return Err(CartanError::ZeroRank);
        }
        if a.iter().any(|row| row.len() != r) {
            return Err(CartanError::NotSquare);
        }
        for i in 0..r {
            if a[i][i] != 2 {
                return Err(CartanError::BadDiagonal { i });
            }
            for j in 0..r {
                if i != j {
                    if a[i][j] != a[j][i] {
                        return Err(CartanError::NotSymmetric { i, j });
                    }
                    if a[i][j] > 0 {
                        return Err(CartanError::PositiveOffDiagonal { i, j });
                    }
                }
            }
        }
        let aq: Vec<Vec<Q>> = a
            .iter()
            .map(|row| row.iter().map(|&x| qi(x)).collect())
            .collect();
        let det = det_q(&aq);
        if det.is_zero() {
            return Err(CartanError::Singular);
        }
        let mut inv = vec![vec![Q::zero(); r]; r];
        for col in 0..r {
            let mut rhs = vec![Q::zero(); r];
            rhs[col] = qi(1);
            let sol = solve_linear(&aq, &rhs).ok_or(CartanError::Singular)?;
            for (row, v) in sol.into_iter().enumerate() {
                inv[row][col] = v;
            }
        }
        Ok(CartanMatrix { a, inv, det })
    }

    /// The rank-2 matrix with off-diagonal entry `off` (must be negative).
    pub fn rank2(off: i64) -> Result<Self, CartanError> {
        Self::new(vec![vec![2, off], vec![off, 2]])
    }

    /// Parses the flag syntax: rows separated by ';', entries by ','.
    pub fn parse_flag(s: &str) -> Result<Self, CartanError> {
        let rows: Result<Vec<Vec<i64>>, _> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| e.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect();
        let rows = rows.map_err(|e| CartanError::Parse(e.to_string()))?;
        Self::new(rows)
    }

    /// Parses the JSON document `{"rank": r, "a": [[...]]}`.
    pub fn from_json_str(s: &str) -> Result<Self, CartanError> {
        let doc: CartanJson =
            serde_json::from_str(s).map_err(|e| CartanError::Parse(e.to_string()))?;
        if doc.a.len() != doc.rank {
            return Err(CartanError::Parse(format!(
                "declared rank {} does not match {} rows",
                doc.rank,
                doc.a.len()
            )));
        }
        Self::new(doc.a)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn det(&self) -> &Q {
        &self.det
    }

    pub fn inverse(&self) -> &Vec<Vec<Q>> {
        &self.inv
    }

    /// Signature `(positive, negative)` of the quadratic form, by congruence
    /// diagonalization over the rationals.
    pub fn signature(&self) -> (usize, usize) {
        let r = self.rank();
        let mut m: Vec<Vec<Q>> = self
            .a
            .iter()
            .map(|row| row.iter().map(|&x| qi(x)).collect())
            .collect();
        let (mut pos, mut neg) = (0usize, 0usize);
        for k in 0..r {
            if m[k][k].is_zero() {
                // det != 0 guarantees some usable pivot below; mixing row j
                // into row k makes the diagonal entry nonzero.
                if let Some(j) = (k + 1..r).find(|&j| !m[j][k].is_zero()) {
                    for c in 0..r {
                        let add = m[j][c].clone();
                        m[k][c] += add;
                    }
                    for row in m.iter_mut() {
                        let add = row[j].clone();
                        row[k] += add;
                    }
                }
            }
            let pivot = m[k][k].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for j in k + 1..r {
                if !m[j][k].is_zero() {
                    let f = &m[j][k] / &pivot;
                    for c in 0..r {
                        let sub = &f * &m[k][c];
                        m[j][c] -= sub;
                    }
                    for row in m.iter_mut() {
                        let sub = &f * &row[k];
                        row[j] -= sub;
                    }
                }
            }
        }
        (pos, neg)
    }

    /// Lorentzian signature with exactly one negative eigenvalue.
    pub fn is_hyperbolic(&self) -> bool {
        self.signature().1 == 1
    }

    fn check_rank(&self, len: usize) -> Result<(), CartanError> {
        if len != self.rank() {
            Err(CartanError::RankMismatch {
                expected: self.rank(),
                got: len,
            })
        } else {
            Ok(())
        }
    }

    fn check_index(&self, i: usize) -> Result<(), CartanError> {
        if i == 0 || i > self.rank() {
            Err(CartanError::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// Symmetric bilinear form on integer root vectors.
    pub fn inner_root(&self, x: &RootVector, y: &RootVector) -> Result<Q, CartanError> {
        self.check_rank(x.len())?;
        self.check_rank(y.len())?;
        Ok(qi(self.ip_int(&x.0, &y.0)))
    }

    /// Symmetric bilinear form on rational weight vectors.
    pub fn inner(&self, x: &Weight, y: &Weight) -> Result<Q, CartanError> {
        self.check_rank(x.len())?;
        self.check_rank(y.len())?;
        let mut s = Q::zero();
        for (i, xi) in x.0.iter().enumerate() {
            for (j, yj) in y.0.iter().enumerate() {
                s += xi * yj * qi(self.a[i][j]);
            }
        }
        Ok(s)
    }

    pub(crate) fn ip_int(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                s += xi * self.a[i][j] * yj;
            }
        }
        s
    }

    /// `beta(h_j)` for `beta` given in root coordinates: the eigenvalue of
    /// `ad h_j` on any weight-`beta` vector.
    pub(crate) fn pairing_h(&self, beta: &[i64], j: usize) -> i64 {
        beta.iter()
            .enumerate()
            .map(|(k, &n)| n * self.a[k][j])
            .sum()
    }

    pub fn classify_norm(&self, beta: &RootVector) -> Result<NormClass, CartanError> {
        let n2 = self.inner_root(beta, beta)?;
        Ok(if n2.is_positive() {
            NormClass::Spacelike
        } else if n2.is_zero() {
            NormClass::Lightlike
        } else {
            NormClass::Timelike
        })
    }

    /// Simple reflection `w_i` on a root vector (1-based index).
    pub fn reflect_root(&self, i: usize, beta: &RootVector) -> Result<RootVector, CartanError> {
        self.check_index(i)?;
        self.check_rank(beta.len())?;
        let alpha_i = RootVector::simple(i - 1, self.rank());
        let c = self.ip_int(&beta.0, &alpha_i.0);
        let mut out = beta.0.clone();
        out[i - 1] -= c;
        Ok(RootVector(out))
    }

    /// Simple reflection `w_i` on a weight (1-based index).
    pub fn reflect_weight(&self, i: usize, w: &Weight) -> Result<Weight, CartanError> {
        self.check_index(i)?;
        self.check_rank(w.len())?;
        let mut c = Q::zero();
        for (k, wk) in w.0.iter().enumerate() {
            c += wk * qi(self.a[k][i - 1]);
        }
        let mut out = w.0.clone();
        out[i - 1] -= c;
        Ok(Weight(out))
    }

    /// The Weyl-group orbit of `beta` truncated to `|height| <= max_height`.
    pub fn weyl_orbit(
        &self,
        beta: &RootVector,
        max_height: i64,
    ) -> Result<BTreeSet<RootVector>, CartanError> {
        self.check_rank(beta.len())?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        if beta.height().abs() <= max_height {
            seen.insert(beta.clone());
            queue.push_back(beta.clone());
        }
        while let Some(v) = queue.pop_front() {
            for i in 1..=self.rank() {
                let img = self.reflect_root(i, &v)?;
                if img.height().abs() <= max_height && seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        Ok(seen)
    }

    /// Fundamental weights in the simple-root basis: the columns of the
    /// inverse Cartan matrix, so that `Lambda_i . alpha_j = delta_ij`.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let r = self.rank();
        (0..r)
            .map(|col| Weight((0..r).map(|row| self.inv[row][col].clone()).collect()))
            .collect()
    }

    /// The Weyl vector `rho = sum_i Lambda_i`, satisfying `rho . alpha_i = 1`.
    pub fn weyl_vector(&self) -> Weight {
        let mut c = vec![Q::zero(); self.rank()];
        for w in self.fundamental_weights() {
            for (i, v) in w.0.iter().enumerate() {
                c[i] += v;
            }
        }
        Weight(c)
    }

    /// Coefficients `r_i = -sum_j b_ij` of the principal so(2,1); all must be
    /// strictly positive, which fails for non-hyperbolic input.
    pub fn principal_so21_coefficients(&self) -> Result<Vec<Q>, CartanError> {
        let r = self.rank();
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let mut s = Q::zero();
            for j in 0..r {
                s -= &self.inv[i][j];
            }
            if !s.is_positive() {
                return Err(CartanError::NotHyperbolic {
                    reason: format!("principal coefficient r_{} = {} is not positive", i + 1, fmt_q(&s)),
                });
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Reduced Weyl words of length `1..=max_len`, by breadth-first word
    /// enumeration with deduplication through the exact action on the root
    /// lattice.
    pub fn reduced_words(&self, max_len: usize) -> Vec<WeylWord> {
        let r = self.rank();
        let id: Vec<i64> = {
            let mut m = vec![0i64; r * r];
            for i in 0..r {
                m[i * r + i] = 1;
            }
            m
        };
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(id.clone());
        let mut frontier: Vec<(WeylWord, Vec<i64>)> = vec![(WeylWord::identity(), id)];
        let mut out = Vec::new();
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for (word, mat) in &frontier {
                for i in 1..=r {
                    let m2 = self.compose_reflection(mat, i);
                    if seen.insert(m2.clone()) {
                        let mut letters = word.letters.clone();
                        letters.push(i as u8);
                        let w = WeylWord { letters };
                        out.push(w.clone());
                        next.push((w, m2));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// Matrix of `w_i . m` acting on root coordinates (column-major on the
    /// flattened matrix `m`).
    fn compose_reflection(&self, m: &[i64], i: usize) -> Vec<i64> {
        let r = self.rank();
        let mut out = m.to_vec();
        // w_i(col) = col - (col . alpha_i) alpha_i ; alpha_i = e_{i-1}
        for col in 0..r {
            let v: Vec<i64> = (0..r).map(|row| m[row * r + col]).collect();
            let alpha: Vec<i64> = (0..r).map(|k| i64::from(k == i - 1)).collect();
            let c = self.ip_int(&v, &alpha);
            out[(i - 1) * r + col] -= c;
        }
        out
    }

    /// Applies a Weyl word (letters act right-to-left) to a weight.
    pub fn apply_word(&self, w: &WeylWord, x: &Weight) -> Result<Weight, CartanError> {
        let mut v = x.clone();
        for &i in w.letters.iter().rev() {
            v = self.reflect_weight(i as usize, &v)?;
        }
        Ok(v)
    }
}

fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = qi(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= piv.clone();
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &piv;
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    det
}

/// Integer vector in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn new(coeffs: Vec<i64>) -> Self {
        RootVector(coeffs)
    }

    pub fn simple(index0: usize, rank: usize) -> Self {
        let mut v = vec![0i64; rank];
        v[index0] = 1;
        RootVector(v)
    }

    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Signed height: the sum of the coefficients.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// All coefficients >= 0 and not all zero.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&x| x >= 0)
    }

    /// Sign-pure: all nonnegative or all nonpositive, and nonzero.
    pub fn is_sign_pure(&self) -> bool {
        !self.is_zero()
            && (self.0.iter().all(|&x| x >= 0) || self.0.iter().all(|&x| x <= 0))
    }

    pub fn neg(&self) -> Self {
        RootVector(self.0.iter().map(|&x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        RootVector(self.0.iter().map(|&x| k * x).collect())
    }

    pub fn to_weight(&self) -> Weight {
        Weight(self.0.iter().map(|&x| qi(x)).collect())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Rational vector in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<Q>);

impl Weight {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Weight(coeffs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn height(&self) -> Q {
        self.0.iter().cloned().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Q) -> Self {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn sub_root(&self, r: &RootVector) -> Self {
        Weight(
            self.0
                .iter()
                .zip(&r.0)
                .map(|(a, b)| a - qi(*b))
                .collect(),
        )
    }

    /// Integer root-vector form, when all coefficients are integers.
    pub fn as_root(&self) -> Option<RootVector> {
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            if !c.is_integer() {
                return None;
            }
            out.push(i64::try_from(c.to_integer()).ok()?);
        }
        Some(RootVector(out))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A word in the simple reflections; stored reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylWord {
    pub letters: Vec<u8>,
}

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord { letters: Vec::new() }
    }

    pub fn length(&self) -> usize {
        self.letters.len()
    }

    /// Sign `(-1)^{l(w)}`.
    pub fn sign(&self) -> i64 {
        if self.letters.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("w{i}")).collect();
        write!(f, "{}", parts.join(""))
    }
}
