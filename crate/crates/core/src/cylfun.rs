//! Cylinder functions: the functions on `Σ_A` that depend only on the first
//! `k` coordinates.
//!
//! A [`CylFun`] of depth `k` stores one exact scalar per admissible word of
//! length `k`, sparsely (absent words are zero). Binary operations refine both
//! operands to a common depth first, so every operation is total and exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::measure::TransferWeights;
use crate::scalar::{invert_monoradical, sqrt_nonneg_rational, RadScalar, Rational, ScalarError};
use crate::sft::{admissible_words, extensions, EvPerPoint, SftError, Symbol, TransitionMatrix, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CylError {
    #[error("functions live over different transition matrices")]
    MatrixMismatch,
    #[error("word {word} has length {len}, expected depth {depth}")]
    WrongLength { word: Word, len: usize, depth: usize },
    #[error("function table of depth {depth} is missing word {word}")]
    MissingWord { word: Word, depth: usize },
    #[error("pointwise inverse undefined: value at {0} is zero")]
    ZeroValue(Word),
    #[error("pointwise square root undefined at {word}: {reason}")]
    BadSqrt { word: Word, reason: String },
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub(crate) fn same_matrix(a: &Arc<TransitionMatrix>, b: &Arc<TransitionMatrix>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone)]
pub struct CylFun {
    matrix: Arc<TransitionMatrix>,
    depth: usize,
    values: BTreeMap<Word, RadScalar>,
}

impl CylFun {
    pub fn zero(a: &Arc<TransitionMatrix>) -> Self {
        CylFun { matrix: a.clone(), depth: 0, values: BTreeMap::new() }
    }

    pub fn constant(a: &Arc<TransitionMatrix>, c: RadScalar) -> Self {
        let mut values = BTreeMap::new();
        if !c.is_zero() {
            values.insert(Word::empty(), c);
        }
        CylFun { matrix: a.clone(), depth: 0, values }
    }

    pub fn one(a: &Arc<TransitionMatrix>) -> Self {
        Self::constant(a, RadScalar::one())
    }

    /// Indicator of the cylinder `[w]`.
    pub fn indicator(a: &Arc<TransitionMatrix>, w: &Word) -> Result<Self, CylError> {
        a.word(w.symbols())?;
        Ok(CylFun { matrix: a.clone(), depth: w.len(), values: BTreeMap::from([(w.clone(), RadScalar::one())]) })
    }

    /// Sparse constructor: every key must be an admissible word of length
    /// `depth`; missing words are zero.
    pub fn from_values(
        a: &Arc<TransitionMatrix>,
        depth: usize,
        values: impl IntoIterator<Item = (Word, RadScalar)>,
    ) -> Result<Self, CylError> {
        let mut map = BTreeMap::new();
        for (w, v) in values {
            if w.len() != depth {
                return Err(CylError::WrongLength { len: w.len(), word: w, depth });
            }
            a.word(w.symbols())?;
            if !v.is_zero() {
                map.insert(w, v);
            }
        }
        Ok(CylFun { matrix: a.clone(), depth, values: map })
    }

    /// Full table: the keys must be exactly the admissible words of `depth`.
    pub fn from_table(
        a: &Arc<TransitionMatrix>,
        depth: usize,
        table: BTreeMap<Word, RadScalar>,
    ) -> Result<Self, CylError> {
        for w in admissible_words(a, depth) {
            if !table.contains_key(&w) {
                return Err(CylError::MissingWord { word: w, depth });
            }
        }
        Self::from_values(a, depth, table)
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.matrix
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Nonzero entries in lexicographic word order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &RadScalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the cylinder of `w`; `w` must be at least `depth` long.
    pub fn value(&self, w: &Word) -> RadScalar {
        assert!(w.len() >= self.depth, "word {w} shorter than depth {}", self.depth);
        let key = if w.len() == self.depth { w.clone() } else { w.prefix(self.depth) };
        self.values.get(&key).cloned().unwrap_or_default()
    }

    pub fn eval_point(&self, x: &EvPerPoint) -> RadScalar {
        self.value(&x.prefix(self.depth))
    }

    /// Words of the current depth with nonzero value.
    pub fn support(&self) -> BTreeSet<Word> {
        self.values.keys().cloned().collect()
    }

    /// Same function presented at depth `k` (no-op when `k <= depth`).
    pub fn refine(&self, k: usize) -> CylFun {
        if k <= self.depth {
            return self.clone();
        }
        let mut values = BTreeMap::new();
        for (w, v) in &self.values {
            for e in extensions(&self.matrix, w, k) {
                values.insert(e, v.clone());
            }
        }
        CylFun { matrix: self.matrix.clone(), depth: k, values }
    }

    fn check_same(&self, other: &CylFun) -> Result<(), CylError> {
        if same_matrix(&self.matrix, &other.matrix) {
            Ok(())
        } else {
            Err(CylError::MatrixMismatch)
        }
    }

    fn zip_with(&self, other: &CylFun, keep_union: bool, op: impl Fn(&RadScalar, &RadScalar) -> RadScalar) -> CylFun {
        assert!(same_matrix(&self.matrix, &other.matrix), "functions over different matrices");
        let k = self.depth.max(other.depth);
        let (a, b) = (self.refine(k), other.refine(k));
        let zero = RadScalar::zero();
        let mut values = BTreeMap::new();
        let keys: BTreeSet<&Word> = if keep_union {
            a.values.keys().chain(b.values.keys()).collect()
        } else {
            a.values.keys().filter(|w| b.values.contains_key(*w)).collect()
        };
        for w in keys {
            let v = op(a.values.get(w).unwrap_or(&zero), b.values.get(w).unwrap_or(&zero));
            if !v.is_zero() {
                values.insert(w.clone(), v);
            }
        }
        CylFun { matrix: self.matrix.clone(), depth: k, values }
    }

    pub fn try_add(&self, other: &CylFun) -> Result<CylFun, CylError> {
        self.check_same(other)?;
        Ok(self.zip_with(other, true, |x, y| x + y))
    }

    pub fn try_mul(&self, other: &CylFun) -> Result<CylFun, CylError> {
        self.check_same(other)?;
        Ok(self.zip_with(other, false, |x, y| x * y))
    }

    /// Panics on mismatched matrices; see [`CylFun::try_add`].
    pub fn add(&self, other: &CylFun) -> CylFun {
        self.zip_with(other, true, |x, y| x + y)
    }

    pub fn sub(&self, other: &CylFun) -> CylFun {
        self.zip_with(other, true, |x, y| x - y)
    }

    pub fn mul(&self, other: &CylFun) -> CylFun {
        self.zip_with(other, false, |x, y| x * y)
    }

    pub fn scale(&self, c: &RadScalar) -> CylFun {
        self.map_values(|v| v * c)
    }

    pub fn neg(&self) -> CylFun {
        self.map_values(|v| -v)
    }

    /// Pointwise complex conjugate (the `*` of `C(X)`).
    pub fn conj(&self) -> CylFun {
        self.map_values(|v| v.conj())
    }

    fn map_values(&self, f: impl Fn(&RadScalar) -> RadScalar) -> CylFun {
        let values = self
            .values
            .iter()
            .filter_map(|(w, v)| {
                let r = f(v);
                (!r.is_zero()).then(|| (w.clone(), r))
            })
            .collect();
        CylFun { matrix: self.matrix.clone(), depth: self.depth, values }
    }

    /// `α(f) = f∘σ`, depth `k+1`.
    pub fn alpha(&self) -> CylFun {
        let a = &self.matrix;
        let mut values = BTreeMap::new();
        for (w, v) in &self.values {
            let preds: Vec<Symbol> = match w.first() {
                Some(c) => a.predecessors(c).collect(),
                None => a.symbols().collect(),
            };
            for b in preds {
                let mut key = vec![b];
                key.extend_from_slice(w.symbols());
                values.insert(Word(key), v.clone());
            }
        }
        CylFun { matrix: a.clone(), depth: self.depth + 1, values }
    }

    pub fn alpha_pow(&self, n: usize) -> CylFun {
        (0..n).fold(self.clone(), |f, _| f.alpha())
    }

    fn fiber_sum(&self, weight: impl Fn(Symbol, Symbol) -> Rational) -> CylFun {
        let f = self.refine(2);
        let mut acc: BTreeMap<Word, RadScalar> = BTreeMap::new();
        for (w, v) in &f.values {
            let s = w.symbols();
            let term = v.scale_rational(&weight(s[0], s[1]));
            let key = w.suffix_from(1);
            match acc.get_mut(&key) {
                Some(x) => *x += &term,
                None => {
                    acc.insert(key, term);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        CylFun { matrix: self.matrix.clone(), depth: f.depth - 1, values: acc }
    }

    /// Unnormalized fiber sum `𝓛(f)(x) = Σ_{b: A(b,x₀)=1} f(bx)`.
    pub fn transfer_unnormalized(&self) -> CylFun {
        let one = Rational::from_integer(BigInt::from(1));
        self.fiber_sum(|_, _| one.clone())
    }

    /// Normalized transfer operator. Without weights this is the fiber
    /// average `𝓛(1)⁻¹𝓛(f)`; with weights it is `Σ_b w(b, x₀)·f(bx)`.
    /// Output depth is `max(1, k-1)` and `L(1) = 1` in both cases.
    pub fn transfer(&self, weights: Option<&TransferWeights>) -> CylFun {
        match weights {
            None => {
                let a = self.matrix.clone();
                self.fiber_sum(|_, c| Rational::new(BigInt::from(1), BigInt::from(a.col_sum(c))))
            }
            Some(w) => {
                assert!(same_matrix(&self.matrix, w.matrix()), "weights over a different matrix");
                self.fiber_sum(|b, c| w.weight(b, c))
            }
        }
    }

    pub fn transfer_pow(&self, n: usize, weights: Option<&TransferWeights>) -> CylFun {
        (0..n).fold(self.clone(), |f, _| f.transfer(weights))
    }

    /// Conditional expectation `E_n = αⁿ∘Lⁿ` onto the range of `αⁿ`.
    pub fn expectation(&self, n: usize, weights: Option<&TransferWeights>) -> CylFun {
        self.transfer_pow(n, weights).alpha_pow(n)
    }

    /// Pointwise inverse; every admissible word of the current depth must
    /// carry a nonzero single-radical value.
    pub fn invert(&self) -> Result<CylFun, CylError> {
        let mut values = BTreeMap::new();
        for w in admissible_words(&self.matrix, self.depth) {
            let v = self.values.get(&w).ok_or_else(|| CylError::ZeroValue(w.clone()))?;
            values.insert(w, invert_monoradical(v)?);
        }
        Ok(CylFun { matrix: self.matrix.clone(), depth: self.depth, values })
    }

    /// Pointwise square root of a function with nonnegative rational values.
    pub fn sqrt(&self) -> Result<CylFun, CylError> {
        let mut values = BTreeMap::new();
        for (w, v) in &self.values {
            let q = v
                .as_rational()
                .ok_or_else(|| CylError::BadSqrt { word: w.clone(), reason: format!("{v} is not a rational") })?;
            let r =
                sqrt_nonneg_rational(&q).map_err(|e| CylError::BadSqrt { word: w.clone(), reason: e.to_string() })?;
            values.insert(w.clone(), r);
        }
        Ok(CylFun { matrix: self.matrix.clone(), depth: self.depth, values })
    }

    /// Restriction to sequences over `keep`, relabelled onto `sub` (the
    /// matrix `A` restricted to `keep`).
    pub fn restrict(&self, keep: &BTreeSet<Symbol>, sub: &Arc<TransitionMatrix>) -> CylFun {
        let relabel: BTreeMap<Symbol, Symbol> = keep.iter().enumerate().map(|(i, &s)| (s, i as Symbol)).collect();
        let values = self
            .values
            .iter()
            .filter_map(|(w, v)| {
                let mapped: Option<Vec<Symbol>> = w.symbols().iter().map(|s| relabel.get(s).copied()).collect();
                mapped.map(|m| (Word(m), v.clone()))
            })
            .collect();
        CylFun { matrix: sub.clone(), depth: self.depth, values }
    }

    /// Drops to the smallest depth presenting the same function.
    pub fn coarsen(&self) -> CylFun {
        let mut f = self.clone();
        while f.depth > 0 {
            let k = f.depth - 1;
            let mut values: BTreeMap<Word, RadScalar> = BTreeMap::new();
            let mut ok = true;
            for w in admissible_words(&f.matrix, k) {
                let vals: Vec<RadScalar> = extensions(&f.matrix, &w, f.depth).iter().map(|e| f.value(e)).collect();
                if vals.windows(2).any(|p| p[0] != p[1]) {
                    ok = false;
                    break;
                }
                if !vals[0].is_zero() {
                    values.insert(w, vals[0].clone());
                }
            }
            if !ok {
                break;
            }
            f = CylFun { matrix: f.matrix.clone(), depth: k, values };
        }
        f
    }
}

impl PartialEq for CylFun {
    fn eq(&self, other: &Self) -> bool {
        if !same_matrix(&self.matrix, &other.matrix) {
            return false;
        }
        let k = self.depth.max(other.depth);
        self.refine(k).values == other.refine(k).values
    }
}

impl fmt::Debug for CylFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CylFun(depth {}; {self})", self.depth)
    }
}

impl fmt::Display for CylFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.values.iter().map(|(w, v)| format!("[{w}]↦{v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Quasi-basis `{u_c}` for `E = α∘L` built from the partition of unity
/// `{1_[c]}`: `u_c = √(Λ·1_[c])` with `Λ = α(𝓛(1))`.
#[derive(Debug, Clone)]
pub struct QuasiBasis {
    matrix: Arc<TransitionMatrix>,
    u: Vec<CylFun>,
    lambda: CylFun,
}

impl QuasiBasis {
    /// When `σ` is injective (`Λ ≡ 1`) the family collapses to `{1}`.
    pub fn new(a: &Arc<TransitionMatrix>) -> Self {
        let lambda = CylFun::one(a).transfer_unnormalized().alpha();
        if a.symbols().all(|c| a.col_sum(c) == 1) {
            return QuasiBasis { matrix: a.clone(), u: vec![CylFun::one(a)], lambda: lambda.coarsen() };
        }
        let u = a
            .symbols()
            .map(|c| {
                let ind = CylFun::indicator(a, &Word(vec![c])).expect("single symbols are admissible");
                lambda.mul(&ind).sqrt().expect("Λ is a positive integer function")
            })
            .collect();
        QuasiBasis { matrix: a.clone(), u, lambda }
    }

    /// Arbitrary candidate family, e.g. to exercise [`QuasiBasis::check`].
    pub fn from_parts(a: &Arc<TransitionMatrix>, u: Vec<CylFun>, lambda: CylFun) -> Self {
        QuasiBasis { matrix: a.clone(), u, lambda }
    }

    pub fn u(&self) -> &[CylFun] {
        &self.u
    }

    /// `Λ(x) = #{t : σt = σx}`.
    pub fn lambda(&self) -> &CylFun {
        &self.lambda
    }

    /// `ind(E) = Σ u_c u_c*`.
    pub fn index(&self) -> CylFun {
        self.u.iter().fold(CylFun::zero(&self.matrix), |acc, u| acc.add(&u.mul(&u.conj())))
    }

    /// `I_n = Λ·α(Λ)⋯αⁿ⁻¹(Λ)`, `I_0 = 1`.
    pub fn i_n(&self, n: usize) -> CylFun {
        (0..n).fold(CylFun::one(&self.matrix), |acc, k| acc.mul(&self.lambda.alpha_pow(k)))
    }

    /// All `u_(i) = u_{i₀}α(u_{i₁})⋯αⁿ⁻¹(u_{i_{n-1}})` with their multi-indices.
    pub fn multi(&self, n: usize) -> Vec<(Vec<usize>, CylFun)> {
        let mut out = vec![(Vec::new(), CylFun::one(&self.matrix))];
        for k in 0..n {
            let shifted: Vec<CylFun> = self.u.iter().map(|u| u.alpha_pow(k)).collect();
            out = out
                .into_iter()
                .flat_map(|(idx, f)| {
                    shifted.iter().enumerate().map(move |(j, g)| {
                        let mut idx = idx.clone();
                        idx.push(j);
                        (idx, f.mul(g))
                    })
                })
                .collect();
        }
        out
    }

    /// `f == Σ_c u_c·E(u_c*·f)` with the uniform expectation `E = E_1`.
    pub fn check(&self, f: &CylFun) -> bool {
        let rebuilt = self
            .u
            .iter()
            .fold(CylFun::zero(&self.matrix), |acc, u| acc.add(&u.mul(&u.conj().mul(f).expectation(1, None))));
        rebuilt == *f
    }
}
