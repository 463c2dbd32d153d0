//! Exact Kac-Moody algebra arithmetic.
//!
//! Elements are rational combinations of right-normed multi-bracket words
//! `e[i1,...,in] = [e_{i1},[e_{i2},...]]` (resp. `f[...]`) and Cartan
//! generators `h_i`. Brackets are reduced with the defining relations
//! `[e_i,f_j] = delta_ij h_i`, `[h_j,x_beta] = beta(h_j) x_beta`, and the
//! Jacobi identity; the Serre ideal is never materialized. Instead, every
//! weight space carries the contravariant Hermitian form, whose radical is
//! exactly the ideal, so canonical forms come from exact Gram-matrix solves
//! and multiplicities from Gram ranks. A Peterson-recursion backend computes
//! the same multiplicities along a completely different route and serves as
//! a cross-check.

use crate::cartan::{CartanError, CartanMatrix, RootVector};
use crate::ratio::{fmt_q, qi, solve_linear, Q};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    Cartan(CartanError),
    EmptyWord,
    LetterOutOfRange { letter: usize, rank: usize },
    NotSignPure(Vec<i64>),
    NotHomogeneous,
    WeightMismatch { expected: Vec<i64>, got: Vec<i64> },
    ExactHeightExceeded { height: i64, max: i64 },
    NotInRootSpace,
    Parse(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::Cartan(e) => write!(f, "{e}"),
            AlgebraError::EmptyWord => write!(f, "bracket words must be nonempty"),
            AlgebraError::LetterOutOfRange { letter, rank } => {
                write!(f, "generator index {letter} out of range 1..={rank}")
            }
            AlgebraError::NotSignPure(w) => {
                write!(f, "weight {w:?} has mixed signs: not a root candidate")
            }
            AlgebraError::NotHomogeneous => write!(f, "element is not weight-homogeneous"),
            AlgebraError::WeightMismatch { expected, got } => {
                write!(f, "weight mismatch: expected {expected:?}, got {got:?}")
            }
            AlgebraError::ExactHeightExceeded { height, max } => write!(
                f,
                "height {height} exceeds the exact-arithmetic bound {max}; only the Peterson backend runs there"
            ),
            AlgebraError::NotInRootSpace => {
                write!(f, "element is not in the root space (nonzero Gram residual)")
            }
            AlgebraError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for AlgebraError {}

impl From<CartanError> for AlgebraError {
    fn from(e: CartanError) -> Self {
        AlgebraError::Cartan(e)
    }
}

/// Basis symbol: a right-normed word on the positive or negative side, or a
/// Cartan generator. Letters are stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    E(Vec<u8>),
    F(Vec<u8>),
    H(u8),
}

impl Term {
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        match self {
            Term::E(w) => {
                let mut v = vec![0i64; rank];
                for &l in w {
                    v[l as usize] += 1;
                }
                v
            }
            Term::F(w) => {
                let mut v = vec![0i64; rank];
                for &l in w {
                    v[l as usize] -= 1;
                }
                v
            }
            Term::H(_) => vec![0; rank],
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::E(w) => {
                let parts: Vec<String> = w.iter().map(|l| (l + 1).to_string()).collect();
                write!(f, "e[{}]", parts.join(","))
            }
            Term::F(w) => {
                let parts: Vec<String> = w.iter().map(|l| (l + 1).to_string()).collect();
                write!(f, "f[{}]", parts.join(","))
            }
            Term::H(i) => write!(f, "h{}", i + 1),
        }
    }
}

/// Exact rational combination of basis symbols. The zero element stores no
/// terms; arithmetic never keeps zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<Term, Q>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn from_term(t: Term, c: Q) -> Self {
        let mut e = LieElement::zero();
        e.add_term(t, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, t: &Term) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, t: Term, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LieElement {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    /// Splits into weight-homogeneous components.
    pub fn weight_components(&self, rank: usize) -> BTreeMap<Vec<i64>, LieElement> {
        let mut out: BTreeMap<Vec<i64>, LieElement> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.weight(rank))
                .or_default()
                .add_term(t.clone(), c.clone());
        }
        out
    }

    /// The common weight of all terms when homogeneous; the zero element
    /// reports weight zero.
    pub fn weight(&self, rank: usize) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(vec![0; rank]),
            Some(t) => t.weight(rank),
        };
        for t in it {
            if t.weight(rank) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Cartan part as coefficients of `h_1..h_r`.
    pub fn h_coeffs(&self, rank: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); rank];
        for (t, c) in &self.terms {
            if let Term::H(i) = t {
                v[*i as usize] = c.clone();
            }
        }
        v
    }

    pub fn has_word_terms(&self) -> bool {
        self.terms
            .keys()
            .any(|t| matches!(t, Term::E(_) | Term::F(_)))
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            let (neg, mag) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mag.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{} {t}", fmt_q(&mag))?;
            }
        }
        Ok(())
    }
}

/// Canonical basis of one root space: greedily chosen words in lexicographic
/// order whose Gram matrix of the contravariant form is positive definite.
#[derive(Debug, Clone)]
pub struct RootSpaceBasis {
    pub root: Vec<i64>,
    /// Letters of the selected words; read as `f`-words for a negative root,
    /// as `e`-words otherwise.
    pub words: Vec<Vec<u8>>,
    pub gram: Vec<Vec<Q>>,
}

impl RootSpaceBasis {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn is_negative(&self) -> bool {
        self.root.iter().sum::<i64>() < 0
    }

    pub fn element(&self, i: usize) -> LieElement {
        let t = if self.is_negative() {
            Term::F(self.words[i].clone())
        } else {
            Term::E(self.words[i].clone())
        };
        LieElement::from_term(t, Q::one())
    }

    /// Rebuilds an element from coordinates in this basis.
    pub fn from_coords(&self, coords: &[Q]) -> LieElement {
        let mut out = LieElement::zero();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.element(i).scale(c));
            }
        }
        out
    }
}

type WordKey = Vec<u8>;

#[derive(Default)]
struct PetersonTable {
    done_height: i64,
    c: HashMap<Vec<i64>, Q>,
    mult: HashMap<Vec<i64>, BigUint>,
}

/// The algebra context: a Cartan matrix plus memo caches for bracket
/// reductions, Gram entries, root-space bases and multiplicities. Caches are
/// compute-once-publish; racing recomputations are benign because every
/// entry is deterministic.
pub struct Algebra {
    cm: CartanMatrix,
    max_exact_height: i64,
    ef_cache: Mutex<HashMap<(u8, WordKey), LieElement>>,
    gram_cache: Mutex<HashMap<(WordKey, WordKey), Q>>,
    basis_cache: Mutex<HashMap<Vec<i64>, Arc<RootSpaceBasis>>>,
    peterson: Mutex<PetersonTable>,
}

impl Algebra {
    pub fn new(cm: CartanMatrix) -> Self {
        let max_exact_height = if cm.rank() <= 2 { 12 } else { 8 };
        Algebra {
            cm,
            max_exact_height,
            ef_cache: Mutex::new(HashMap::new()),
            gram_cache: Mutex::new(HashMap::new()),
            basis_cache: Mutex::new(HashMap::new()),
            peterson: Mutex::new(PetersonTable::default()),
        }
    }

    pub fn with_max_exact_height(mut self, h: i64) -> Self {
        self.max_exact_height = h;
        self
    }

    pub fn max_exact_height(&self) -> i64 {
        self.max_exact_height
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cm
    }

    pub fn rank(&self) -> usize {
        self.cm.rank()
    }

    fn check_letters(&self, letters1: &[usize]) -> Result<Vec<u8>, AlgebraError> {
        if letters1.is_empty() {
            return Err(AlgebraError::EmptyWord);
        }
        letters1
            .iter()
            .map(|&l| {
                if l == 0 || l > self.rank() {
                    Err(AlgebraError::LetterOutOfRange {
                        letter: l,
                        rank: self.rank(),
                    })
                } else {
                    Ok((l - 1) as u8)
                }
            })
            .collect()
    }

    /// `e[i1,...,in]` from 1-based generator indices.
    pub fn e(&self, letters1: &[usize]) -> Result<LieElement, AlgebraError> {
        Ok(LieElement::from_term(
            Term::E(self.check_letters(letters1)?),
            Q::one(),
        ))
    }

    /// `f[i1,...,in]` from 1-based generator indices.
    pub fn f(&self, letters1: &[usize]) -> Result<LieElement, AlgebraError> {
        Ok(LieElement::from_term(
            Term::F(self.check_letters(letters1)?),
            Q::one(),
        ))
    }

    /// `h_i` from a 1-based index.
    pub fn h(&self, i1: usize) -> Result<LieElement, AlgebraError> {
        if i1 == 0 || i1 > self.rank() {
            return Err(AlgebraError::LetterOutOfRange {
                letter: i1,
                rank: self.rank(),
            });
        }
        Ok(LieElement::from_term(Term::H((i1 - 1) as u8), Q::one()))
    }

    /// `H(beta) = sum_j n^j h_j` for `beta = sum_j n^j alpha_j`.
    pub fn h_of_root(&self, beta: &RootVector) -> LieElement {
        let mut out = LieElement::zero();
        for (j, &n) in beta.0.iter().enumerate() {
            out.add_term(Term::H(j as u8), qi(n));
        }
        out
    }

    pub fn validate(&self, x: &LieElement) -> Result<(), AlgebraError> {
        for (t, _) in x.terms() {
            match t {
                Term::E(w) | Term::F(w) => {
                    if w.is_empty() {
                        return Err(AlgebraError::EmptyWord);
                    }
                    if let Some(&l) = w.iter().find(|&&l| l as usize >= self.rank()) {
                        return Err(AlgebraError::LetterOutOfRange {
                            letter: l as usize + 1,
                            rank: self.rank(),
                        });
                    }
                }
                Term::H(i) => {
                    if *i as usize >= self.rank() {
                        return Err(AlgebraError::LetterOutOfRange {
                            letter: *i as usize + 1,
                            rank: self.rank(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The Chevalley involution: `omega(e_w) = (-1)^|w| f_w`,
    /// `omega(h_i) = -h_i`; involutive automorphism.
    pub fn omega(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (t, c) in x.terms() {
            match t {
                Term::E(w) => {
                    let sign = if w.len() % 2 == 0 { 1 } else { -1 };
                    out.add_term(Term::F(w.clone()), c * qi(sign));
                }
                Term::F(w) => {
                    let sign = if w.len() % 2 == 0 { 1 } else { -1 };
                    out.add_term(Term::E(w.clone()), c * qi(sign));
                }
                Term::H(i) => out.add_term(Term::H(*i), -c.clone()),
            }
        }
        out
    }

    // ------------------------------------------------------------------
    // Bracket reduction
    // ------------------------------------------------------------------

    /// Bracket without final canonicalization: exact in the presentation
    /// algebra, where the positive and negative words span free Lie
    /// algebras.
    pub fn bracket_raw(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let tb = self.term_bracket(a, b);
                if !tb.is_zero() {
                    out = out.add(&tb.scale(&(ca * cb)));
                }
            }
        }
        out
    }

    /// Bracket with the result expressed in canonical root-space bases.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, AlgebraError> {
        self.validate(x)?;
        self.validate(y)?;
        self.canonicalize(&self.bracket_raw(x, y))
    }

    fn term_bracket(&self, a: &Term, b: &Term) -> LieElement {
        use Term::*;
        match (a, b) {
            (H(_), H(_)) => LieElement::zero(),
            (H(i), E(_) | F(_)) => {
                let c = self.cm.pairing_h(&b.weight(self.rank()), *i as usize);
                LieElement::from_term(b.clone(), qi(c))
            }
            (E(_) | F(_), H(i)) => {
                let c = self.cm.pairing_h(&a.weight(self.rank()), *i as usize);
                LieElement::from_term(a.clone(), qi(-c))
            }
            (E(w), E(u)) => {
                if w.len() == 1 {
                    let mut word = Vec::with_capacity(1 + u.len());
                    word.push(w[0]);
                    word.extend_from_slice(u);
                    LieElement::from_term(E(word), Q::one())
                } else if w.len() > u.len() {
                    self.term_bracket(b, a).neg()
                } else {
                    self.split_left(a, b)
                }
            }
            (F(w), F(u)) => {
                if w.len() == 1 {
                    let mut word = Vec::with_capacity(1 + u.len());
                    word.push(w[0]);
                    word.extend_from_slice(u);
                    LieElement::from_term(F(word), Q::one())
                } else if w.len() > u.len() {
                    self.term_bracket(b, a).neg()
                } else {
                    self.split_left(a, b)
                }
            }
            (E(w), F(u)) => {
                if w.len() == 1 {
                    self.ef_reduce(w[0], u)
                } else if w.len() > u.len() {
                    self.term_bracket(b, a).neg()
                } else {
                    self.split_left(a, b)
                }
            }
            (F(w), E(u)) => {
                if w.len() == 1 {
                    self.fe_reduce(w[0], u)
                } else if w.len() > u.len() {
                    self.term_bracket(b, a).neg()
                } else {
                    self.split_left(a, b)
                }
            }
        }
    }

    /// `[g_w, y] = [g_{w_1}, [g_{w'}, y]] - [g_{w'}, [g_{w_1}, y]]` for a
    /// multi-letter left word.
    fn split_left(&self, a: &Term, b: &Term) -> LieElement {
        let (head, tail) = match a {
            Term::E(w) => (Term::E(vec![w[0]]), Term::E(w[1..].to_vec())),
            Term::F(w) => (Term::F(vec![w[0]]), Term::F(w[1..].to_vec())),
            Term::H(_) => unreachable!("split_left is only called on words"),
        };
        let b_el = LieElement::from_term(b.clone(), Q::one());
        let head_el = LieElement::from_term(head, Q::one());
        let tail_el = LieElement::from_term(tail, Q::one());
        let t1 = self.bracket_raw(&head_el, &self.bracket_raw(&tail_el, &b_el));
        let t2 = self.bracket_raw(&tail_el, &self.bracket_raw(&head_el, &b_el));
        t1.sub(&t2)
    }

    /// `[e_i, f_u]` by Jacobi peeling, memoized. The result is a combination
    /// of length-(|u|-1) negative words, plus `h_i` when `|u| = 1`.
    fn ef_reduce(&self, i: u8, u: &[u8]) -> LieElement {
        if u.len() == 1 {
            return if u[0] == i {
                LieElement::from_term(Term::H(i), Q::one())
            } else {
                LieElement::zero()
            };
        }
        let key = (i, u.to_vec());
        if let Some(hit) = self.ef_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let tail = &u[1..];
        let mut out = LieElement::zero();
        if u[0] == i {
            let c = self
                .cm
                .pairing_h(&Term::F(tail.to_vec()).weight(self.rank()), i as usize);
            out.add_term(Term::F(tail.to_vec()), qi(c));
        }
        let inner = self.ef_reduce(i, tail);
        let fu0 = LieElement::from_term(Term::F(vec![u[0]]), Q::one());
        out = out.add(&self.bracket_raw(&fu0, &inner));
        self.ef_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `[f_i, e_u] = (-1)^{|u|+1} omega([e_i, f_u])`.
    fn fe_reduce(&self, i: u8, u: &[u8]) -> LieElement {
        let z = self.ef_reduce(i, u);
        let sign = if u.len() % 2 == 0 { -1 } else { 1 };
        self.omega(&z).scale(&qi(sign))
    }

    // ------------------------------------------------------------------
    // Contravariant Hermitian form
    // ------------------------------------------------------------------

    /// The contravariant form `(x,y) = -<x|omega(y)>`. Base cases
    /// `(e_i,e_j) = delta_ij` and `(h_i,h_j) = a_ij`; recursion through the
    /// adjointness `([e_i,u],v) = (u,[f_i,v])`. Symmetric over rational
    /// coefficients, positive semi-definite on each nonzero weight space
    /// with the Serre ideal as radical.
    pub fn contravariant_form(&self, x: &LieElement, y: &LieElement) -> Q {
        let rank = self.rank();
        let mut s = Q::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let v = match (a, b) {
                    (Term::H(i), Term::H(j)) => qi(self.cm.entry(*i as usize, *j as usize)),
                    (Term::E(w), Term::E(u)) | (Term::F(w), Term::F(u)) => {
                        if a.weight(rank) == b.weight(rank) {
                            self.gram_ee(w, u)
                        } else {
                            Q::zero()
                        }
                    }
                    _ => Q::zero(),
                };
                if !v.is_zero() {
                    s += v * ca * cb;
                }
            }
        }
        s
    }

    /// The invariant bilinear form `<x|y> = -(x, omega(y))`, normalized by
    /// `<e_i|f_j> = delta_ij` and `<h_i|h_j> = a_ij`.
    pub fn bilinear_form(&self, x: &LieElement, y: &LieElement) -> Q {
        -self.contravariant_form(x, &self.omega(y))
    }

    /// Gram entry `(e_w, e_u)` for words of equal weight; memoized on the
    /// ordered pair.
    fn gram_ee(&self, w: &[u8], u: &[u8]) -> Q {
        debug_assert_eq!(
            Term::E(w.to_vec()).weight(self.rank()),
            Term::E(u.to_vec()).weight(self.rank())
        );
        if w.len() == 1 {
            return if w == u { Q::one() } else { Q::zero() };
        }
        let key = if w <= u {
            (w.to_vec(), u.to_vec())
        } else {
            (u.to_vec(), w.to_vec())
        };
        if let Some(hit) = self.gram_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let (w, u) = (&key.0, &key.1);
        // (e_{i w'}, e_u) = (e_{w'}, [f_i, e_u])
        let reduced = self.fe_reduce(w[0], u);
        let mut s = Q::zero();
        for (t, c) in reduced.terms() {
            match t {
                Term::E(v) => {
                    let g = self.gram_ee(&w[1..], v);
                    if !g.is_zero() {
                        s += g * c;
                    }
                }
                // equal-weight words of length >= 2 never reduce to h-terms
                other => unreachable!("fe_reduce of a longer word produced {other}"),
            }
        }
        self.gram_cache.lock().unwrap().insert(key.clone(), s.clone());
        s
    }

    // ------------------------------------------------------------------
    // Root spaces and canonical form
    // ------------------------------------------------------------------

    /// All right-normed words of the given nonnegative weight, in
    /// lexicographic order (multiset permutations of the letters).
    pub fn words_of_weight(&self, beta: &[i64]) -> Vec<Vec<u8>> {
        fn rec(counts: &mut [i64], cur: &mut Vec<u8>, left: i64, out: &mut Vec<Vec<u8>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for l in 0..counts.len() {
                if counts[l] > 0 {
                    counts[l] -= 1;
                    cur.push(l as u8);
                    rec(counts, cur, left - 1, out);
                    cur.pop();
                    counts[l] += 1;
                }
            }
        }
        let mut counts: Vec<i64> = beta.to_vec();
        let total: i64 = counts.iter().sum();
        let mut out = Vec::new();
        if total <= 0 {
            return out;
        }
        let mut cur: Vec<u8> = Vec::with_capacity(total as usize);
        rec(&mut counts, &mut cur, total, &mut out);
        out
    }

    /// Canonical basis of the root space `g_beta` for sign-pure `beta`: the
    /// greedy rank-increasing subset of the words of weight `beta` in
    /// lexicographic order. The dimension equals `mult(beta)`; an empty
    /// basis means `beta` is not a root.
    pub fn root_space_basis(
        &self,
        beta: &RootVector,
    ) -> Result<Arc<RootSpaceBasis>, AlgebraError> {
        if beta.len() != self.rank() {
            return Err(AlgebraError::Cartan(CartanError::RankMismatch {
                expected: self.rank(),
                got: beta.len(),
            }));
        }
        if !beta.is_sign_pure() {
            return Err(AlgebraError::NotSignPure(beta.0.clone()));
        }
        let height = beta.height();
        if height.abs() > self.max_exact_height {
            return Err(AlgebraError::ExactHeightExceeded {
                height: height.abs(),
                max: self.max_exact_height,
            });
        }
        if let Some(hit) = self.basis_cache.lock().unwrap().get(&beta.0) {
            return Ok(hit.clone());
        }
        let positive: Vec<i64> = beta.0.iter().map(|&x| x.abs()).collect();
        let candidates = self.words_of_weight(&positive);
        let mut words: Vec<Vec<u8>> = Vec::new();
        let mut gram: Vec<Vec<Q>> = Vec::new();
        for w in candidates {
            let col: Vec<Q> = words.iter().map(|b| self.gram_ee(b, &w)).collect();
            let d = self.gram_ee(&w, &w);
            let schur = if words.is_empty() {
                d.clone()
            } else {
                let c =
                    solve_linear(&gram, &col).expect("selected Gram matrix is positive definite");
                let mut s = d.clone();
                for (ci, coli) in c.iter().zip(&col) {
                    s -= ci * coli;
                }
                s
            };
            assert!(
                !schur.is_negative(),
                "contravariant Gram matrix lost positive semidefiniteness at {beta}"
            );
            if schur.is_positive() {
                for (row, entry) in gram.iter_mut().zip(&col) {
                    row.push(entry.clone());
                }
                let mut new_row = col.clone();
                new_row.push(d);
                gram.push(new_row);
                words.push(w);
            }
        }
        let basis = Arc::new(RootSpaceBasis {
            root: beta.0.clone(),
            words,
            gram,
        });
        self.basis_cache
            .lock()
            .unwrap()
            .insert(beta.0.clone(), basis.clone());
        Ok(basis)
    }

    /// Coordinates of a weight-homogeneous element in a root-space basis,
    /// solving `G c = [(b_i, x)]`; the zero residual certifies membership.
    pub fn express_in_basis(
        &self,
        x: &LieElement,
        basis: &RootSpaceBasis,
    ) -> Result<Vec<Q>, AlgebraError> {
        let rank = self.rank();
        let wt = x.weight(rank).ok_or(AlgebraError::NotHomogeneous)?;
        if x.is_zero() {
            return Ok(vec![Q::zero(); basis.dim()]);
        }
        if wt != basis.root {
            return Err(AlgebraError::WeightMismatch {
                expected: basis.root.clone(),
                got: wt,
            });
        }
        // mirror negative components to the positive side
        let (x_pos, flip) = if basis.is_negative() {
            (self.omega(x), true)
        } else {
            (x.clone(), false)
        };
        let mut rhs = vec![Q::zero(); basis.dim()];
        let mut xx = Q::zero();
        let word_coeffs: Vec<(&Vec<u8>, &Q)> = x_pos
            .terms()
            .filter_map(|(t, c)| match t {
                Term::E(w) => Some((w, c)),
                _ => None,
            })
            .collect();
        for (w, cw) in &word_coeffs {
            for (u, cu) in &word_coeffs {
                let g = self.gram_ee(w, u);
                if !g.is_zero() {
                    xx += g * *cw * *cu;
                }
            }
            for (i, b) in basis.words.iter().enumerate() {
                let g = self.gram_ee(b, w);
                if !g.is_zero() {
                    rhs[i] += g * *cw;
                }
            }
        }
        let coords = if basis.dim() == 0 {
            Vec::new()
        } else {
            solve_linear(&basis.gram, &rhs).expect("root-space Gram matrix is invertible")
        };
        // residual (x - sum c_i b_i, x - sum c_i b_i) = (x,x) - 2 c.rhs + c^T G c
        let mut residual = xx;
        for (i, ci) in coords.iter().enumerate() {
            residual -= qi(2) * ci * &rhs[i];
            for (j, cj) in coords.iter().enumerate() {
                residual += ci * cj * &basis.gram[i][j];
            }
        }
        if !residual.is_zero() {
            return Err(AlgebraError::NotInRootSpace);
        }
        if flip {
            // coordinates were computed for omega(x) = sum (-1)^|w| c_w f_w
            let mut out = coords;
            for (i, w) in basis.words.iter().enumerate() {
                if w.len() % 2 == 1 {
                    out[i] = -out[i].clone();
                }
            }
            Ok(out)
        } else {
            Ok(coords)
        }
    }

    /// Rewrites every weight component in its canonical root-space basis;
    /// components lying in the radical of the form (the Serre ideal) drop to
    /// zero exactly.
    pub fn canonicalize(&self, x: &LieElement) -> Result<LieElement, AlgebraError> {
        let rank = self.rank();
        let mut out = LieElement::zero();
        for (wt, comp) in x.weight_components(rank) {
            if wt.iter().all(|&c| c == 0) {
                out = out.add(&comp);
                continue;
            }
            let rv = RootVector(wt.clone());
            if !rv.is_sign_pure() {
                // mixed-sign weights can only carry radical content
                if !self.contravariant_form(&comp, &comp).is_zero() {
                    return Err(AlgebraError::NotSignPure(wt));
                }
                continue;
            }
            let basis = self.root_space_basis(&rv)?;
            let coords = self.express_in_basis(&comp, &basis)?;
            out = out.add(&basis.from_coords(&coords));
        }
        Ok(out)
    }

    /// Exact zero test in the quotient algebra without picking bases: the
    /// Cartan part must vanish literally, word parts must lie in the radical
    /// of the contravariant form.
    pub fn is_zero_element(&self, x: &LieElement) -> bool {
        for (wt, comp) in x.weight_components(self.rank()) {
            if wt.iter().all(|&c| c == 0) {
                if !comp.is_zero() {
                    return false;
                }
            } else if !self.contravariant_form(&comp, &comp).is_zero() {
                return false;
            }
        }
        true
    }

    /// `(ad e_i)^{1-a_ij}(e_j)` in raw form; lies in the Serre ideal.
    pub fn serre_element(&self, i1: usize, j1: usize) -> Result<LieElement, AlgebraError> {
        let ei = self.e(&[i1])?;
        let mut acc = self.e(&[j1])?;
        let n = 1 - self.cm.entry(i1 - 1, j1 - 1);
        for _ in 0..n {
            acc = self.bracket_raw(&ei, &acc);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Multiplicities
    // ------------------------------------------------------------------

    /// Multiplicity as the Gram rank of the root space (primary path).
    pub fn root_multiplicity(&self, beta: &RootVector) -> Result<usize, AlgebraError> {
        Ok(self.root_space_basis(beta)?.dim())
    }

    /// Multiplicity from the Peterson recursion (independent oracle).
    pub fn peterson_multiplicity(&self, beta: &RootVector) -> BigUint {
        if !beta.is_sign_pure() || beta.is_zero() {
            return BigUint::zero();
        }
        let positive: Vec<i64> = beta.0.iter().map(|&x| x.abs()).collect();
        let h = positive.iter().sum::<i64>();
        self.peterson_extend(h);
        self.peterson
            .lock()
            .unwrap()
            .mult
            .get(&positive)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn peterson_multiplicity_u64(&self, beta: &RootVector) -> u64 {
        self.peterson_multiplicity(beta)
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    fn positive_vectors_of_height(&self, h: i64) -> Vec<Vec<i64>> {
        fn rec(idx: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if idx == cur.len() - 1 {
                cur[idx] = left;
                out.push(cur.clone());
                return;
            }
            for v in 0..=left {
                cur[idx] = v;
                rec(idx + 1, left - v, cur, out);
            }
        }
        let r = self.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        rec(0, h, &mut cur, &mut out);
        out
    }

    fn peterson_extend(&self, h: i64) {
        let mut table = self.peterson.lock().unwrap();
        if table.done_height >= h {
            return;
        }
        let two = qi(2);
        for height in table.done_height + 1..=h {
            for v in self.positive_vectors_of_height(height) {
                if height == 1 {
                    table.c.insert(v.clone(), Q::one());
                    table.mult.insert(v, BigUint::one());
                    continue;
                }
                // sum over ordered decompositions v = v' + v''
                let mut num = Q::zero();
                for vp in sub_vectors(&v) {
                    let cp = match table.c.get(&vp) {
                        Some(c) => c.clone(),
                        None => continue,
                    };
                    let vpp: Vec<i64> = v.iter().zip(&vp).map(|(a, b)| a - b).collect();
                    let cpp = match table.c.get(&vpp) {
                        Some(c) => c.clone(),
                        None => continue,
                    };
                    num += qi(self.cm.ip_int(&vp, &vpp)) * cp * cpp;
                }
                // corrections from proper multiples
                let mut corrections = Q::zero();
                let g = v.iter().fold(0i64, |acc, &x| gcd(acc, x));
                for n in 2..=g {
                    if g % n == 0 {
                        let divided: Vec<i64> = v.iter().map(|x| x / n).collect();
                        if let Some(m) = table.mult.get(&divided) {
                            corrections += Q::new(m.clone().into(), n.into());
                        }
                    }
                }
                let norm = qi(self.cm.ip_int(&v, &v));
                // rho . v = height(v) since rho . alpha_i = 1
                let denom = norm.clone() - two.clone() * qi(height);
                let c_v: Q;
                let mult_v: BigUint;
                if norm > two {
                    // norm above 2 cannot be a root: real roots have norm 2,
                    // imaginary ones nonpositive norm
                    mult_v = BigUint::zero();
                    c_v = corrections;
                } else {
                    assert!(
                        !denom.is_zero(),
                        "Peterson denominator vanished at {v:?} with norm <= 2"
                    );
                    c_v = num / denom;
                    let m = c_v.clone() - corrections;
                    assert!(
                        m.is_integer() && !m.is_negative(),
                        "Peterson recursion produced non-integral multiplicity {} at {v:?}",
                        fmt_q(&m)
                    );
                    mult_v = m.to_integer().to_biguint().expect("nonnegative");
                }
                if !c_v.is_zero() {
                    table.c.insert(v.clone(), c_v);
                }
                if !mult_v.is_zero() {
                    table.mult.insert(v, mult_v);
                }
            }
            table.done_height = height;
        }
    }

    /// All positive roots up to the height bound with their multiplicities
    /// (Peterson backend; negatives implied by symmetry).
    pub fn enumerate_roots(&self, max_height: i64) -> Vec<(RootVector, BigUint)> {
        let mut out = Vec::new();
        for h in 1..=max_height {
            for v in self.positive_vectors_of_height(h) {
                let rv = RootVector(v);
                let m = self.peterson_multiplicity(&rv);
                if !m.is_zero() {
                    out.push((rv, m));
                }
            }
        }
        out
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All vectors v' with 0 <= v'_i <= v_i, excluding 0 and v itself.
fn sub_vectors(v: &[i64]) -> Vec<Vec<i64>> {
    fn rec(idx: usize, v: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if idx == v.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=v[idx] {
            cur[idx] = x;
            rec(idx + 1, v, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; v.len()];
    rec(0, v, &mut cur, &mut out);
    out.retain(|w| w.iter().any(|&x| x > 0) && w != v);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;

    fn fib() -> Algebra {
        Algebra::new(CartanMatrix::rank2(-3).unwrap())
    }

    #[test]
    fn serre_base_relations() {
        let a = fib();
        let e1 = a.e(&[1]).unwrap();
        let f1 = a.f(&[1]).unwrap();
        let f2 = a.f(&[2]).unwrap();
        assert_eq!(a.bracket(&e1, &f1).unwrap(), a.h(1).unwrap());
        assert!(a.bracket(&e1, &f2).unwrap().is_zero());
        // [h_j, e_i] = a_ij e_i
        let h2 = a.h(2).unwrap();
        assert_eq!(a.bracket(&h2, &e1).unwrap(), e1.scale(&qi(-3)));
        let h1 = a.h(1).unwrap();
        assert_eq!(a.bracket(&h1, &h2).unwrap(), LieElement::zero());
    }

    #[test]
    fn paper_bracket_values() {
        let a = fib();
        // [e_{12}, f_{21}] = 3(h1 + h2)
        let lhs = a
            .bracket(&a.e(&[1, 2]).unwrap(), &a.f(&[2, 1]).unwrap())
            .unwrap();
        let expected = a.h(1).unwrap().scale(&qi(3)).add(&a.h(2).unwrap().scale(&qi(3)));
        assert_eq!(lhs, expected);
        // [f_{12}, e_{1212}] = 0
        let z = a
            .bracket(&a.f(&[1, 2]).unwrap(), &a.e(&[1, 2, 1, 2]).unwrap())
            .unwrap();
        assert!(z.is_zero());
        // [e_{1212}, f_{1212}] = -96 (h1 + h2)
        let b = a
            .bracket(&a.e(&[1, 2, 1, 2]).unwrap(), &a.f(&[1, 2, 1, 2]).unwrap())
            .unwrap();
        let expected96 = a
            .h(1)
            .unwrap()
            .scale(&qi(-96))
            .add(&a.h(2).unwrap().scale(&qi(-96)));
        assert_eq!(b, expected96);
        // [e_{21212}, f_{21212}] = 288 (2 h1 + 3 h2)
        let c = a
            .bracket(
                &a.e(&[2, 1, 2, 1, 2]).unwrap(),
                &a.f(&[2, 1, 2, 1, 2]).unwrap(),
            )
            .unwrap();
        let expected288 = a
            .h(1)
            .unwrap()
            .scale(&qi(576))
            .add(&a.h(2).unwrap().scale(&qi(864)));
        assert_eq!(c, expected288);
    }

    #[test]
    fn contravariant_form_values() {
        let a = fib();
        let e1 = a.e(&[1]).unwrap();
        let e2 = a.e(&[2]).unwrap();
        assert_eq!(a.contravariant_form(&e1, &e1), qi(1));
        assert_eq!(a.contravariant_form(&e1, &e2), qi(0));
        // N = (E,E) values from the worked examples
        let e12 = a.e(&[1, 2]).unwrap();
        assert_eq!(a.contravariant_form(&e12, &e12), qi(3));
        let e21212 = a.e(&[2, 1, 2, 1, 2]).unwrap();
        assert_eq!(a.contravariant_form(&e21212, &e21212), qi(288));
        // Cartan block carries the Cartan matrix itself
        let h1 = a.h(1).unwrap();
        let h2 = a.h(2).unwrap();
        assert_eq!(a.contravariant_form(&h1, &h1), qi(2));
        assert_eq!(a.contravariant_form(&h1, &h2), qi(-3));
        // bilinear form base cases
        assert_eq!(a.bilinear_form(&e1, &a.f(&[1]).unwrap()), qi(1));
        assert_eq!(a.bilinear_form(&e1, &a.f(&[2]).unwrap()), qi(0));
        assert_eq!(a.bilinear_form(&h1, &h2), qi(-3));
    }

    #[test]
    fn involution_identities() {
        let a = fib();
        let e12 = a.e(&[1, 2]).unwrap();
        // -omega(e_{12}) = -f_{12} = f_{21} up to the defining relations
        let m = a.omega(&e12).neg();
        let canon = a.canonicalize(&m).unwrap();
        let f21 = a.canonicalize(&a.f(&[2, 1]).unwrap()).unwrap();
        assert_eq!(canon, f21);
        // omega(omega(x)) = x
        let x = e12.add(&a.h(1).unwrap().scale(&q(5, 3)));
        assert_eq!(a.omega(&a.omega(&x)), x);
        // omega(e_1) = -f_1
        assert_eq!(a.omega(&a.e(&[1]).unwrap()), a.f(&[1]).unwrap().neg());
    }

    #[test]
    fn serre_relations_vanish() {
        let a = fib();
        for i in 1..=2 {
            for j in 1..=2 {
                if i != j {
                    let s = a.serre_element(i, j).unwrap();
                    assert!(a.is_zero_element(&s));
                    assert!(a.canonicalize(&s).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn known_root_space_dimensions() {
        let a = fib();
        let dim = |v: Vec<i64>| a.root_multiplicity(&RootVector::new(v)).unwrap();
        assert_eq!(dim(vec![1, 1]), 1);
        assert_eq!(dim(vec![2, 2]), 1);
        assert_eq!(dim(vec![3, 3]), 3);
        assert_eq!(dim(vec![3, 2]), 2);
        assert_eq!(dim(vec![2, 1]), 1);
        assert_eq!(dim(vec![4, 3]), 4);
        // basis of g_{3a1+3a2} is the stated word triple
        let b = a.root_space_basis(&RootVector::new(vec![3, 3])).unwrap();
        assert_eq!(
            b.words,
            vec![
                vec![0, 0, 1, 1, 0, 1],
                vec![0, 1, 0, 1, 0, 1],
                vec![1, 0, 0, 1, 0, 1]
            ]
        );
    }

    #[test]
    fn express_known_relation() {
        let a = fib();
        // e_{1212} = e_{2112} in the algebra
        let basis = a.root_space_basis(&RootVector::new(vec![2, 2])).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.words[0], vec![0, 1, 0, 1]);
        let e2112 = a.e(&[2, 1, 1, 2]).unwrap();
        let coords = a.express_in_basis(&e2112, &basis).unwrap();
        assert_eq!(coords, vec![qi(1)]);
        // an element of a different weight is rejected
        let err = a.express_in_basis(&a.e(&[1]).unwrap(), &basis);
        assert!(matches!(err, Err(AlgebraError::WeightMismatch { .. })));
    }

    #[test]
    fn multiplicities_match_peterson() {
        let a = fib();
        for h in 1..=8i64 {
            for n1 in 0..=h {
                let v = vec![n1, h - n1];
                let rv = RootVector::new(v);
                let gram_dim = a.root_multiplicity(&rv).unwrap();
                let pet = a.peterson_multiplicity(&rv);
                assert_eq!(
                    BigUint::from(gram_dim),
                    pet,
                    "multiplicity mismatch at {rv}"
                );
            }
        }
    }

    #[test]
    fn peterson_known_values() {
        let a = fib();
        let m = |v: Vec<i64>| a.peterson_multiplicity_u64(&RootVector::new(v));
        assert_eq!(m(vec![1, 0]), 1);
        assert_eq!(m(vec![2, 1]), 1);
        assert_eq!(m(vec![4, 3]), 4);
        assert_eq!(m(vec![3, 1]), 1); // real root
        assert_eq!(m(vec![4, 1]), 0); // not a root
        assert_eq!(m(vec![2, 0]), 0); // multiple of a real root
        // non-sign-pure input
        assert_eq!(m(vec![1, -1]), 0);
    }

    #[test]
    fn enumerate_small_roots() {
        let a = fib();
        let roots = a.enumerate_roots(2);
        let set: Vec<(Vec<i64>, u64)> = roots
            .iter()
            .map(|(r, m)| (r.0.clone(), m.to_u64().unwrap()))
            .collect();
        assert_eq!(
            set,
            vec![
                (vec![0, 1], 1),
                (vec![1, 0], 1),
                (vec![1, 1], 1),
            ]
        );
        assert!(a.enumerate_roots(0).is_empty());
        // height 4 includes the real root a2 + 3 a1
        let roots4 = a.enumerate_roots(4);
        assert!(roots4
            .iter()
            .any(|(r, m)| r.0 == vec![3, 1] && m.to_u64() == Some(1)));
    }

    #[test]
    fn display_and_weights() {
        let a = fib();
        let x = a
            .e(&[1, 2])
            .unwrap()
            .add(&a.f(&[2, 1]).unwrap().scale(&q(-1, 2)))
            .add(&a.h(1).unwrap().scale(&qi(3)));
        assert_eq!(x.to_string(), "e[1,2] - 1/2 f[2,1] + 3 h1");
        assert_eq!(x.weight(2), None);
        assert_eq!(a.e(&[1, 2]).unwrap().weight(2), Some(vec![1, 1]));
        assert_eq!(a.f(&[2, 1]).unwrap().weight(2), Some(vec![-1, -1]));
        let comps = x.weight_components(2);
        assert_eq!(comps.len(), 3);
    }

    #[test]
    fn rejects_foreign_elements() {
        let a = fib();
        let mut bad = LieElement::zero();
        bad.add_term(Term::E(vec![7]), qi(1));
        assert!(matches!(
            a.bracket(&bad, &a.e(&[1]).unwrap()),
            Err(AlgebraError::LetterOutOfRange { .. })
        ));
    }

    #[test]
    fn exact_height_bound() {
        let a = Algebra::new(CartanMatrix::rank2(-3).unwrap()).with_max_exact_height(4);
        let err = a.root_space_basis(&RootVector::new(vec![3, 2]));
        assert!(matches!(
            err,
            Err(AlgebraError::ExactHeightExceeded { height: 5, max: 4 })
        ));
        // Peterson still works beyond the bound
        assert_eq!(
            a.peterson_multiplicity_u64(&RootVector::new(vec![3, 3])),
            3
        );
    }
}

#[cfg(test)]
mod property_tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use crate::ratio::q;

    struct Rng(u64);

    impl Rng {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }

        fn below(&mut self, n: u64) -> u64 {
            self.next() % n
        }

        fn element(&mut self, alg: &Algebra) -> LieElement {
            let len = 1 + self.below(3);
            let word: Vec<usize> =
                (0..len).map(|_| 1 + self.below(alg.rank() as u64) as usize).collect();
            let base = if self.below(2) == 0 {
                alg.e(&word).unwrap()
            } else {
                alg.f(&word).unwrap()
            };
            let c = q(self.below(7) as i64 - 3, 1 + self.below(3) as i64);
            let mut out = base.scale(&if c.is_zero() { Q::one() } else { c });
            if self.below(4) == 0 {
                out = out.add(&alg.h(1 + self.below(alg.rank() as u64) as usize).unwrap());
            }
            out
        }
    }

    #[test]
    fn randomized_structure_identities() {
        for cm in [CartanMatrix::rank2(-3).unwrap(), CartanMatrix::rank2(-4).unwrap()] {
            let alg = Algebra::new(cm);
            let mut rng = Rng(0xabcdef1234567);
            for _ in 0..40 {
                let x = rng.element(&alg);
                let y = rng.element(&alg);
                let z = rng.element(&alg);
                // antisymmetry
                let anti = alg.bracket_raw(&x, &y).add(&alg.bracket_raw(&y, &x));
                assert!(alg.is_zero_element(&anti));
                // Jacobi
                let j = alg
                    .bracket_raw(&x, &alg.bracket_raw(&y, &z))
                    .add(&alg.bracket_raw(&y, &alg.bracket_raw(&z, &x)))
                    .add(&alg.bracket_raw(&z, &alg.bracket_raw(&x, &y)));
                assert!(alg.is_zero_element(&j));
                // invariance of the bilinear form
                assert_eq!(
                    alg.bilinear_form(&alg.bracket_raw(&x, &y), &z),
                    alg.bilinear_form(&x, &alg.bracket_raw(&y, &z))
                );
                // involution is an automorphism
                let equiv = alg
                    .omega(&alg.bracket_raw(&x, &y))
                    .sub(&alg.bracket_raw(&alg.omega(&x), &alg.omega(&y)));
                assert!(alg.is_zero_element(&equiv));
                // adjointness of the generator pair
                let i = 1 + rng.below(alg.rank() as u64) as usize;
                assert_eq!(
                    alg.contravariant_form(&alg.bracket_raw(&alg.e(&[i]).unwrap(), &x), &y),
                    alg.contravariant_form(&x, &alg.bracket_raw(&alg.f(&[i]).unwrap(), &y))
                );
            }
        }
    }
}
