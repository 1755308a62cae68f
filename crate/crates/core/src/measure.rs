//! Fiber weights, the invariant measure they determine, and the state `φ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cylfun::{same_matrix, CylFun};
use crate::random::Sampler;
use crate::report::Report;
use crate::scalar::{RadScalar, Rational};
use crate::sft::{admissible_words, Symbol, TransitionMatrix, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("weight given for ({0},{1}) but A({0},{1}) = 0")]
    NotAnEdge(Symbol, Symbol),
    #[error("missing weight for edge ({0},{1})")]
    MissingEdge(Symbol, Symbol),
    #[error("weight on edge ({0},{1}) is not positive: {2}")]
    NonPositive(Symbol, Symbol, Rational),
    #[error("weights into symbol {col} sum to {sum}, expected 1")]
    ColumnNotNormalized { col: Symbol, sum: Rational },
    #[error("masses have wrong length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
}

/// Edge weights `w(b,c)`: `w(b, x₀)` is the mass the fiber measure `μ^x`
/// puts on the preimage `bx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferWeights {
    matrix: Arc<TransitionMatrix>,
    w: BTreeMap<(Symbol, Symbol), Rational>,
}

impl TransferWeights {
    pub fn new(a: &Arc<TransitionMatrix>, w: BTreeMap<(Symbol, Symbol), Rational>) -> Result<Self, MeasureError> {
        for (&(b, c), v) in &w {
            if (b as usize) >= a.n_symbols() || (c as usize) >= a.n_symbols() || !a.allowed(b, c) {
                return Err(MeasureError::NotAnEdge(b, c));
            }
            if !v.is_positive() {
                return Err(MeasureError::NonPositive(b, c, v.clone()));
            }
        }
        for c in a.symbols() {
            let mut sum = Rational::zero();
            for b in a.predecessors(c) {
                sum += w.get(&(b, c)).ok_or(MeasureError::MissingEdge(b, c))?;
            }
            if !sum.is_one() {
                return Err(MeasureError::ColumnNotNormalized { col: c, sum });
            }
        }
        Ok(TransferWeights { matrix: a.clone(), w })
    }

    /// Normalized counting measure on each fiber.
    pub fn uniform(a: &Arc<TransitionMatrix>) -> Self {
        let mut w = BTreeMap::new();
        for c in a.symbols() {
            let p = Rational::new(BigInt::one(), BigInt::from(a.col_sum(c)));
            for b in a.predecessors(c) {
                w.insert((b, c), p.clone());
            }
        }
        TransferWeights { matrix: a.clone(), w }
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.matrix
    }

    /// `w(b,c)`, zero off the edges of `A`.
    pub fn weight(&self, b: Symbol, c: Symbol) -> Rational {
        self.w.get(&(b, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Symbol, Symbol), &Rational)> {
        self.w.iter()
    }

    pub fn is_uniform(&self) -> bool {
        *self == Self::uniform(&self.matrix)
    }
}

#[derive(Debug, Clone)]
pub struct InvariantMeasure {
    weights: TransferWeights,
    m: Vec<Rational>,
    fully_supported: bool,
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of the kernel of `rows`, one vector per free column in increasing
/// column order.
fn kernel_basis(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = rref(&mut rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

fn stationary_kernel(weights: &TransferWeights, symbols: &[Symbol]) -> Vec<Vec<Rational>> {
    let idx: BTreeMap<Symbol, usize> = symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = symbols.len();
    let rows: Vec<Vec<Rational>> = symbols
        .iter()
        .map(|&c| {
            let mut row = vec![Rational::zero(); n];
            row[idx[&c]] -= Rational::one();
            for &b in symbols {
                row[idx[&b]] += weights.weight(c, b);
            }
            row
        })
        .collect();
    kernel_basis(rows, n)
}

fn normalize(v: Vec<Rational>) -> Option<Vec<Rational>> {
    if v.iter().any(|x| x.is_negative()) {
        return None;
    }
    let s: Rational = v.iter().cloned().sum();
    (!s.is_zero()).then(|| v.into_iter().map(|x| x / &s).collect())
}

impl InvariantMeasure {
    /// Exact solution of `m = Wm`, `Σm = 1`, `m ≥ 0`.
    ///
    /// The kernel of `W − I` is taken in reduced echelon form and the first
    /// nonnegative basis vector is returned. If no basis vector is
    /// nonnegative (possible for reducible `A`), the system is re-solved on
    /// the smallest predecessor-closed class, where the restricted weights are still stochastic.
    pub fn solve(weights: &TransferWeights) -> Self {
        let a = weights.matrix.clone();
        let all: Vec<Symbol> = a.symbols().collect();
        let m = stationary_kernel(weights, &all)
            .into_iter()
            .find_map(normalize)
            .unwrap_or_else(|| Self::solve_on_closed_class(weights));
        Self::with_masses_unchecked(weights, m)
    }

    fn solve_on_closed_class(weights: &TransferWeights) -> Vec<Rational> {
        let a = &weights.matrix;
        let closure = |s: Symbol| {
            let mut seen = vec![s];
            let mut i = 0;
            while i < seen.len() {
                for t in a.predecessors(seen[i]) {
                    if !seen.contains(&t) {
                        seen.push(t);
                    }
                }
                i += 1;
            }
            seen.sort_unstable();
            seen
        };
        let class = a.symbols().map(closure).min_by_key(|c| (c.len(), c.clone())).expect("nonempty alphabet");
        let sub = stationary_kernel(weights, &class)
            .into_iter()
            .find_map(normalize)
            .expect("a closed class carries a stationary vector");
        let mut m = vec![Rational::zero(); a.n_symbols()];
        for (s, v) in class.iter().zip(sub) {
            m[*s as usize] = v;
        }
        m
    }

    /// Validated constructor for caller-supplied masses.
    pub fn with_masses(weights: &TransferWeights, m: Vec<Rational>) -> Result<Self, MeasureError> {
        if m.len() != weights.matrix.n_symbols() {
            return Err(MeasureError::WrongLength { got: m.len(), expected: weights.matrix.n_symbols() });
        }
        Ok(Self::with_masses_unchecked(weights, m))
    }

    /// No stationarity check: used to exercise the invariance checker.
    pub fn with_masses_unchecked(weights: &TransferWeights, m: Vec<Rational>) -> Self {
        let fully_supported = m.iter().all(|x| x.is_positive());
        InvariantMeasure { weights: weights.clone(), m, fully_supported }
    }

    pub fn weights(&self) -> &TransferWeights {
        &self.weights
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.weights.matrix
    }

    pub fn masses(&self) -> &[Rational] {
        &self.m
    }

    pub fn fully_supported(&self) -> bool {
        self.fully_supported
    }

    /// Whether `m_c = Σ_b w(c,b)·m_b` for every `c` and `Σm = 1`.
    pub fn is_stationary(&self) -> bool {
        let a = self.matrix();
        let total: Rational = self.m.iter().cloned().sum();
        total.is_one()
            && a.symbols().all(|c| {
                let s: Rational = a.successors(c).map(|b| self.weights.weight(c, b) * &self.m[b as usize]).sum();
                s == self.m[c as usize]
            })
    }

    /// `μ[w₀…w_{k-1}] = w(w₀,w₁)⋯w(w_{k-2},w_{k-1})·m_{w_{k-1}}`; `μ[ε] = 1`.
    pub fn cylinder_mass(&self, w: &Word) -> Rational {
        let s = w.symbols();
        match s.last() {
            None => self.m.iter().cloned().sum(),
            Some(&last) => {
                let mut acc = self.m[last as usize].clone();
                for p in s.windows(2) {
                    acc *= self.weights.weight(p[0], p[1]);
                }
                acc
            }
        }
    }

    /// `φ(f) = Σ_w μ[w]·f(w)`.
    pub fn phi(&self, f: &CylFun) -> RadScalar {
        assert!(same_matrix(f.matrix(), self.matrix()), "function over a different matrix");
        f.entries().map(|(w, v)| v.scale_rational(&self.cylinder_mass(w))).sum()
    }

    /// `⟨f, g⟩ = φ(g*·f)`.
    pub fn inner(&self, f: &CylFun, g: &CylFun) -> RadScalar {
        self.phi(&g.conj().mul(f))
    }

    /// Fiber-weighted sum computed word by word, independent of
    /// [`CylFun::transfer`]: `∫ Σ_b w(b,x₀) f(bx) dμ(x)`.
    fn disintegrated(&self, f: &CylFun) -> RadScalar {
        let a = self.matrix();
        let k = f.depth().max(1);
        let mut total = RadScalar::zero();
        for x in admissible_words(a, k) {
            let x0 = x.first().expect("k >= 1");
            let mass = self.cylinder_mass(&x);
            for b in a.predecessors(x0) {
                let bx = Word(std::iter::once(b).chain(x.symbols().iter().copied()).collect());
                let c = self.weights.weight(b, x0) * &mass;
                total += &f.value(&bx).scale_rational(&c);
            }
        }
        total
    }
}

/// Exact invariance identities for `cases` seeded random functions of depth
/// at most `depth`, plus structural checks on the masses.
pub fn invariance_checks(mu: &InvariantMeasure, seed: u64, depth: usize, cases: usize) -> Report {
    let a = mu.matrix().clone();
    let mut report = Report::new("measure invariance");
    report.check("total mass is 1", mu.cylinder_mass(&Word::empty()).is_one(), || {
        format!("Σm = {}", mu.cylinder_mass(&Word::empty()))
    });
    let mut additive = true;
    for k in 0..=depth.max(1) {
        for w in admissible_words(&a, k) {
            let next: Vec<Symbol> = match w.last() {
                Some(l) => a.successors(l).collect(),
                None => a.symbols().collect(),
            };
            let ext: Rational = next.into_iter().map(|b| mu.cylinder_mass(&w.push(b))).sum();
            additive &= ext == mu.cylinder_mass(&w) && !mu.cylinder_mass(&w).is_negative();
        }
    }
    report.check("cylinder masses nonnegative and additive", additive, String::new);

    let mut sampler = Sampler::new(&a, seed);
    let (mut alpha_ok, mut l_ok, mut dis_ok) = (Vec::new(), Vec::new(), Vec::new());
    let w = mu.weights();
    for case in 0..cases {
        let f = sampler.cylfun(depth);
        let p = mu.phi(&f);
        if mu.phi(&f.alpha()) != p {
            alpha_ok.push(case);
        }
        if mu.phi(&f.transfer(Some(w))) != p {
            l_ok.push(case);
        }
        if mu.disintegrated(&f) != p {
            dis_ok.push(case);
        }
    }
    let fails = |v: &Vec<usize>| format!("failing cases {v:?}");
    report.check("φ∘α = φ", alpha_ok.is_empty(), || fails(&alpha_ok));
    report.check("φ∘L = φ", l_ok.is_empty(), || fails(&l_ok));
    report.check("fiber disintegration", dis_ok.is_empty(), || fails(&dis_ok));
    report
}
