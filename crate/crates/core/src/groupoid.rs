//! Cuntz–Krieger picture for matrices with constant column sum `p`.
//!
//! Elements are finite sums of `c·s_μ·s_ν*`, where `s_μ s_ν*` is the
//! characteristic function of the bisection
//! `Z(μ,ν) = {(x, |ν|−|μ|, y) : x ∈ [μ], y ∈ [ν], σ^{|μ|}x = σ^{|ν|}y}` of the
//! Deaconu groupoid. The crossed product maps onto this algebra by
//! `f ↦ Σ_w f(w)·s_w s_w*` and `S ↦ v = p^{-1/2}·Σ_c s_c`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::crossed::CrossedElement;
use crate::cylfun::{same_matrix, CylFun};
use crate::report::Report;
use crate::scalar::{invert_monoradical, RadScalar};
use crate::sft::{Symbol, TransitionMatrix, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("column sums are not constant ({0:?}); the Cuntz–Krieger picture needs a constant p")]
    NonConstantColumnSums(Vec<usize>),
    #[error("element lives over a different transition matrix")]
    MatrixMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkMonomial {
    pub mu: Word,
    pub nu: Word,
    pub coeff: RadScalar,
}

/// Constant column sum of `a`, if any.
pub fn constant_column_sum(a: &TransitionMatrix) -> Result<usize, GroupoidError> {
    let sums: Vec<usize> = a.symbols().map(|c| a.col_sum(c)).collect();
    if sums.windows(2).all(|w| w[0] == w[1]) {
        Ok(sums[0])
    } else {
        Err(GroupoidError::NonConstantColumnSums(sums))
    }
}

/// `Z(μ,ν)` is nonempty.
fn bisection_nonempty(a: &TransitionMatrix, mu: &Word, nu: &Word) -> bool {
    a.is_admissible(mu.symbols())
        && a.is_admissible(nu.symbols())
        && a.symbols().any(|b| mu.last().is_none_or(|l| a.allowed(l, b)) && nu.last().is_none_or(|l| a.allowed(l, b)))
}

#[derive(Clone)]
pub struct GroupoidElement {
    matrix: Arc<TransitionMatrix>,
    terms: BTreeMap<(Word, Word), RadScalar>,
}

impl GroupoidElement {
    pub fn zero(a: &Arc<TransitionMatrix>) -> Result<Self, GroupoidError> {
        constant_column_sum(a)?;
        Ok(GroupoidElement { matrix: a.clone(), terms: BTreeMap::new() })
    }

    pub fn unit(a: &Arc<TransitionMatrix>) -> Result<Self, GroupoidError> {
        Self::monomial(a, Word::empty(), Word::empty(), RadScalar::one())
    }

    /// `c·s_μ·s_ν*`; empty bisections give zero.
    pub fn monomial(a: &Arc<TransitionMatrix>, mu: Word, nu: Word, c: RadScalar) -> Result<Self, GroupoidError> {
        let mut x = Self::zero(a)?;
        x.push(mu, nu, c);
        Ok(x)
    }

    /// `s_c`.
    pub fn generator(a: &Arc<TransitionMatrix>, c: Symbol) -> Result<Self, GroupoidError> {
        Self::monomial(a, Word(vec![c]), Word::empty(), RadScalar::one())
    }

    fn push(&mut self, mu: Word, nu: Word, c: RadScalar) {
        if c.is_zero() || !bisection_nonempty(&self.matrix, &mu, &nu) {
            return;
        }
        let key = (mu, nu);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.matrix
    }

    pub fn terms(&self) -> impl Iterator<Item = CkMonomial> + '_ {
        self.terms.iter().map(|((mu, nu), c)| CkMonomial { mu: mu.clone(), nu: nu.clone(), coeff: c.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((mu, nu), c) in &other.terms {
            out.push(mu.clone(), nu.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RadScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &RadScalar) -> Self {
        let mut out = GroupoidElement { matrix: self.matrix.clone(), terms: BTreeMap::new() };
        for ((mu, nu), v) in &self.terms {
            out.push(mu.clone(), nu.clone(), v * c);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = GroupoidElement { matrix: self.matrix.clone(), terms: BTreeMap::new() };
        for ((mu, nu), c) in &self.terms {
            out.push(nu.clone(), mu.clone(), c.conj());
        }
        out
    }

    pub fn try_convolve(&self, other: &Self) -> Result<Self, GroupoidError> {
        if !same_matrix(&self.matrix, &other.matrix) {
            return Err(GroupoidError::MatrixMismatch);
        }
        Ok(self.convolve(other))
    }

    /// `s_μ s_ν* · s_ρ s_τ*` extended bilinearly.
    pub fn convolve(&self, other: &Self) -> Self {
        let a = self.matrix.clone();
        let mut out = GroupoidElement { matrix: a.clone(), terms: BTreeMap::new() };
        for ((mu, nu), c1) in &self.terms {
            for ((rho, tau), c2) in &other.terms {
                let c = c1 * c2;
                if nu == rho {
                    // s_ν* s_ν = Σ_b A(ν_last, b) s_b s_b*
                    for b in a.symbols().filter(|&b| nu.last().is_none_or(|l| a.allowed(l, b))) {
                        if a.extends(mu.symbols(), b) && a.extends(tau.symbols(), b) {
                            out.push(mu.push(b), tau.push(b), c.clone());
                        }
                    }
                } else if rho.len() > nu.len() && rho.prefix(nu.len()) == *nu {
                    let e = rho.suffix_from(nu.len());
                    let me = mu.concat(&e);
                    if a.is_admissible(me.symbols()) {
                        out.push(me, tau.clone(), c);
                    }
                } else if nu.len() > rho.len() && nu.prefix(rho.len()) == *rho {
                    let e = nu.suffix_from(rho.len());
                    let te = tau.concat(&e);
                    if a.is_admissible(te.symbols()) {
                        out.push(mu.clone(), te, c);
                    }
                }
            }
        }
        out
    }

    /// Every term raised to `|μ| = len` via
    /// `s_μ s_ν* = Σ_b A(μ_last,b)·A(ν_last,b)·s_{μb} s_{νb}*`.
    fn raised_to(&self, degree: i64, len: usize) -> BTreeMap<(Word, Word), RadScalar> {
        let a = &self.matrix;
        let mut cur: Vec<((Word, Word), RadScalar)> = self
            .terms
            .iter()
            .filter(|((mu, nu), _)| nu.len() as i64 - mu.len() as i64 == degree)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut done = BTreeMap::new();
        while let Some(((mu, nu), c)) = cur.pop() {
            if mu.len() == len {
                let e: &mut RadScalar = done.entry((mu, nu)).or_default();
                *e += &c;
                continue;
            }
            for b in a.symbols() {
                if a.extends(mu.symbols(), b) && a.extends(nu.symbols(), b) {
                    cur.push(((mu.push(b), nu.push(b)), c.clone()));
                }
            }
        }
        done.retain(|_, v: &mut RadScalar| !v.is_zero());
        done
    }

    /// Canonical coefficient maps per degree `|ν| − |μ|` at the given length
    /// of `μ` (default: the maximal one among the terms of that degree).
    pub fn normalized(&self) -> BTreeMap<i64, BTreeMap<(Word, Word), RadScalar>> {
        let mut lens: BTreeMap<i64, usize> = BTreeMap::new();
        for (mu, nu) in self.terms.keys() {
            let d = nu.len() as i64 - mu.len() as i64;
            let e = lens.entry(d).or_insert(0);
            *e = (*e).max(mu.len()).max((-d).max(0) as usize);
        }
        lens.into_iter().map(|(d, len)| (d, self.raised_to(d, len))).filter(|(_, m)| !m.is_empty()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().is_empty()
    }
}

impl fmt::Debug for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((mu, nu), c)| format!("{c}·s[{mu}]s[{nu}]*")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Equality after raising both sides to common lengths per degree.
pub fn normalize_equals(x: &GroupoidElement, y: &GroupoidElement) -> bool {
    x.sub(y).is_zero()
}

/// The isomorphism from the crossed product.
pub struct PhiIso {
    matrix: Arc<TransitionMatrix>,
    v: GroupoidElement,
}

impl PhiIso {
    pub fn new(a: &Arc<TransitionMatrix>) -> Result<Self, GroupoidError> {
        let p = constant_column_sum(a)?;
        let scale = invert_monoradical(&RadScalar::sqrt_int(p as u64)).expect("p > 0");
        let mut v = GroupoidElement::zero(a)?;
        for c in a.symbols() {
            v = v.add(&GroupoidElement::generator(a, c)?.scale(&scale));
        }
        Ok(PhiIso { matrix: a.clone(), v })
    }

    /// `v = p^{-1/2}·Σ_c s_c`.
    pub fn v(&self) -> &GroupoidElement {
        &self.v
    }

    /// `φ(f) = Σ_w f(w)·s_w s_w*`.
    pub fn fun(&self, f: &CylFun) -> GroupoidElement {
        let mut out = GroupoidElement { matrix: self.matrix.clone(), terms: BTreeMap::new() };
        for (w, c) in f.entries() {
            out.push(w.clone(), w.clone(), c.clone());
        }
        out
    }

    pub fn apply(&self, x: &CrossedElement) -> Result<GroupoidElement, GroupoidError> {
        if !same_matrix(x.matrix(), &self.matrix) {
            return Err(GroupoidError::MatrixMismatch);
        }
        let v_star = self.v.adjoint();
        let mut out = GroupoidElement { matrix: self.matrix.clone(), terms: BTreeMap::new() };
        for t in x.terms() {
            let mut term = self.fun(&t.a);
            for _ in 0..t.n {
                term = term.convolve(&self.v);
            }
            for _ in 0..t.m {
                term = term.convolve(&v_star);
            }
            out = out.add(&term.convolve(&self.fun(&t.b)));
        }
        Ok(out)
    }
}

/// `φ(x)` for constant column sums.
pub fn phi_iso(x: &CrossedElement) -> Result<GroupoidElement, GroupoidError> {
    PhiIso::new(x.matrix())?.apply(x)
}

/// Range projection of `v`, isometry, covariance and transfer relations, and
/// the main redundancy, checked on the supplied functions.
pub fn verify_groupoid_relations(a: &Arc<TransitionMatrix>, funcs: &[CylFun]) -> Result<Report, GroupoidError> {
    let p = constant_column_sum(a)?;
    let iso = PhiIso::new(a)?;
    let v = iso.v();
    let vs = v.adjoint();
    let unit = GroupoidElement::unit(a)?;
    let mut report = Report::new("groupoid relations");

    let mut expected = GroupoidElement::zero(a)?;
    let inv_p = RadScalar::ratio(1, p as i64);
    for c in a.symbols() {
        for d in a.symbols() {
            let term = GroupoidElement::generator(a, c)?.convolve(&GroupoidElement::generator(a, d)?.adjoint());
            expected = expected.add(&term.scale(&inv_p));
        }
    }
    report.check("v v* = p⁻¹ Σ s_c s_c′*", normalize_equals(&v.convolve(&vs), &expected), String::new);
    report.check("v* v = 1", normalize_equals(&vs.convolve(v), &unit), String::new);

    let (mut bad_cov, mut bad_l) = (Vec::new(), Vec::new());
    for (i, f) in funcs.iter().enumerate() {
        if !normalize_equals(&v.convolve(&iso.fun(f)), &iso.fun(&f.alpha()).convolve(v)) {
            bad_cov.push(i);
        }
        if !normalize_equals(&vs.convolve(&iso.fun(f)).convolve(v), &iso.fun(&f.transfer(None))) {
            bad_l.push(i);
        }
    }
    report.check("v φ(f) = φ(α(f)) v", bad_cov.is_empty(), || format!("failing cases {bad_cov:?}"));
    report.check("v* φ(f) v = φ(L(f))", bad_l.is_empty(), || format!("failing cases {bad_l:?}"));

    let qb = crate::cylfun::QuasiBasis::new(a);
    let vv = v.convolve(&vs);
    let red = qb
        .u()
        .iter()
        .fold(GroupoidElement::zero(a)?, |acc, u| acc.add(&iso.fun(u).convolve(&vv).convolve(&iso.fun(&u.conj()))));
    report.check("Σ u_c v v* u_c* = 1", normalize_equals(&red, &unit), String::new);
    Ok(report)
}
