//! One-sided subshifts of finite type.
//!
//! `Σ_A` is the space of infinite sequences over `{0, …, n-1}` whose
//! consecutive symbols are allowed by a 0/1 matrix `A`; `σ` drops the first
//! symbol. Everything here works on finite words and eventually periodic
//! points, which is all the rest of the crate needs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type Symbol = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error("transition matrix must be square and nonempty")]
    NotSquare,
    #[error("at most 255 symbols are supported, got {0}")]
    TooManySymbols(usize),
    #[error("entry ({row}, {col}) is {value}; entries must be 0 or 1")]
    NotBinary { row: usize, col: usize, value: u8 },
    #[error("row {0} is zero: symbol {0} is dead (no admissible successor)")]
    ZeroRow(usize),
    #[error("column {0} is zero: the shift is not surjective (symbol {0} has no predecessor)")]
    ZeroColumn(usize),
    #[error("symbol {0} out of range")]
    SymbolOutOfRange(usize),
    #[error("word {0} is not admissible")]
    Inadmissible(Word),
    #[error("periodic cycle must be nonempty")]
    EmptyCycle,
    #[error("cycle {0} is not cyclically admissible")]
    CycleNotClosed(Word),
}

/// Validated 0/1 transition matrix with no zero rows or columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<bool>,
}

impl TransitionMatrix {
    pub fn new(rows: &[Vec<u8>]) -> Result<Self, SftError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(SftError::NotSquare);
        }
        if n > Symbol::MAX as usize {
            return Err(SftError::TooManySymbols(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(SftError::NotBinary { row: i, col: j, value: v });
                }
                entries.push(v == 1);
            }
        }
        let m = TransitionMatrix { n, entries };
        for i in 0..n {
            if m.successors(i as Symbol).next().is_none() {
                return Err(SftError::ZeroRow(i));
            }
        }
        for j in 0..n {
            if m.col_sum(j as Symbol) == 0 {
                return Err(SftError::ZeroColumn(j));
            }
        }
        Ok(m)
    }

    /// Full shift on `n` symbols.
    pub fn full(n: usize) -> Self {
        Self::new(&vec![vec![1; n]; n]).expect("full shift is valid")
    }

    /// Golden-mean shift `[[1,1],[1,0]]`.
    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("valid")
    }

    /// Cyclic permutation `i -> i+1 mod n`.
    pub fn cyclic_permutation(n: usize) -> Self {
        let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(j == (i + 1) % n)).collect()).collect();
        Self::new(&rows).expect("valid")
    }

    pub fn n_symbols(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.n).map(|s| s as Symbol)
    }

    pub fn allowed(&self, a: Symbol, b: Symbol) -> bool {
        self.entries[a as usize * self.n + b as usize]
    }

    pub fn successors(&self, a: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(move |&b| self.allowed(a, b))
    }

    pub fn predecessors(&self, b: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(move |&a| self.allowed(a, b))
    }

    pub fn out_degree(&self, a: Symbol) -> usize {
        self.successors(a).count()
    }

    /// Number of `σ`-preimages of any point starting with `c`.
    pub fn col_sum(&self, c: Symbol) -> usize {
        self.predecessors(c).count()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n).map(|i| (0..self.n).map(|j| u8::from(self.entries[i * self.n + j])).collect()).collect()
    }

    pub fn check_symbol(&self, s: usize) -> Result<Symbol, SftError> {
        if s < self.n {
            Ok(s as Symbol)
        } else {
            Err(SftError::SymbolOutOfRange(s))
        }
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&s| (s as usize) < self.n) && w.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    /// Checks admissibility and wraps the symbols in a [`Word`].
    pub fn word(&self, symbols: &[Symbol]) -> Result<Word, SftError> {
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= self.n) {
            return Err(SftError::SymbolOutOfRange(s as usize));
        }
        let w = Word(symbols.to_vec());
        if self.is_admissible(symbols) {
            Ok(w)
        } else {
            Err(SftError::Inadmissible(w))
        }
    }

    /// Can `w` be followed by `s`? The empty word can be followed by anything.
    pub fn extends(&self, w: &[Symbol], s: Symbol) -> bool {
        w.last().is_none_or(|&l| self.allowed(l, s))
    }

    /// Submatrix on `keep` (relabelled `0..keep.len()` in increasing order).
    pub fn restrict(&self, keep: &BTreeSet<Symbol>) -> Result<TransitionMatrix, SftError> {
        let syms: Vec<Symbol> = keep.iter().copied().collect();
        let rows: Vec<Vec<u8>> =
            syms.iter().map(|&a| syms.iter().map(|&b| u8::from(self.allowed(a, b))).collect()).collect();
        TransitionMatrix::new(&rows)
    }
}

/// Finite sequence of symbols; admissibility is checked where words are
/// created from untrusted input.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, s: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word(v)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn suffix_from(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    /// Parses a string of decimal digits (`"0110"`), or dot-separated
    /// numbers when symbols exceed 9 (`"10.3.0"`).
    pub fn parse_digits(s: &str) -> Option<Word> {
        if s.contains('.') {
            s.split('.').map(|t| t.parse::<Symbol>().ok()).collect::<Option<Vec<_>>>().map(Word)
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as Symbol)).collect::<Option<Vec<_>>>().map(Word)
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Admissible words of length `k` in lexicographic order; `k = 0` gives `[ε]`.
pub fn admissible_words(a: &TransitionMatrix, k: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(words.len() * 2);
        for w in &words {
            for s in a.symbols() {
                if a.extends(&w.0, s) {
                    next.push(w.push(s));
                }
            }
        }
        words = next;
    }
    words
}

/// Admissible words of length `k` that start with `prefix` (or the prefix of
/// length `k` when `prefix` is longer).
pub fn extensions(a: &TransitionMatrix, prefix: &Word, k: usize) -> Vec<Word> {
    if prefix.len() >= k {
        return vec![prefix.prefix(k)];
    }
    let mut words = vec![prefix.clone()];
    for _ in prefix.len()..k {
        let mut next = Vec::with_capacity(words.len() * 2);
        for w in &words {
            for s in a.symbols() {
                if a.extends(&w.0, s) {
                    next.push(w.push(s));
                }
            }
        }
        words = next;
    }
    words
}

/// Eventually periodic point `preperiod · cycle · cycle · …`, kept in
/// canonical form: primitive cycle and shortest preperiod.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvPerPoint {
    preperiod: Word,
    cycle: Word,
}

impl EvPerPoint {
    pub fn new(a: &TransitionMatrix, preperiod: Word, cycle: Word) -> Result<Self, SftError> {
        if cycle.is_empty() {
            return Err(SftError::EmptyCycle);
        }
        let joined = preperiod.concat(&cycle);
        a.word(&joined.0)?;
        if !a.allowed(cycle.last().unwrap(), cycle.first().unwrap()) {
            return Err(SftError::CycleNotClosed(cycle));
        }
        Ok(Self::canonical(preperiod, cycle))
    }

    /// Parses `pre:cycle` in digit notation, e.g. `:01` or `0:1`.
    pub fn parse(a: &TransitionMatrix, text: &str) -> Option<Result<Self, SftError>> {
        let (pre, cyc) = text.split_once(':')?;
        let pre = if pre.is_empty() { Word::empty() } else { Word::parse_digits(pre)? };
        let cyc = Word::parse_digits(cyc)?;
        Some(Self::new(a, pre, cyc))
    }

    fn canonical(mut pre: Word, cycle: Word) -> Self {
        let c = &cycle.0;
        let p = (1..=c.len())
            .find(|&p| c.len().is_multiple_of(p) && (0..c.len()).all(|i| c[i] == c[i % p]))
            .expect("p = len always works");
        let mut cyc: Vec<Symbol> = c[..p].to_vec();
        while let (Some(&l), Some(&cl)) = (pre.0.last(), cyc.last()) {
            if l != cl {
                break;
            }
            pre.0.pop();
            cyc.rotate_right(1);
        }
        EvPerPoint { preperiod: pre, cycle: Word(cyc) }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    /// Symbol at position `i`.
    pub fn at(&self, i: usize) -> Symbol {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.0[i]
        } else {
            self.cycle.0[(i - p) % self.cycle.len()]
        }
    }

    /// First `k` symbols.
    pub fn prefix(&self, k: usize) -> Word {
        Word((0..k).map(|i| self.at(i)).collect())
    }

    /// `σ^k` of the point.
    pub fn shift(&self, k: usize) -> EvPerPoint {
        let p = self.preperiod.len();
        if k <= p {
            return EvPerPoint { preperiod: self.preperiod.suffix_from(k), cycle: self.cycle.clone() };
        }
        let mut cyc = self.cycle.0.clone();
        let r = (k - p) % cyc.len();
        cyc.rotate_left(r);
        EvPerPoint { preperiod: Word::empty(), cycle: Word(cyc) }
    }

    /// Is there `n, m` with `σⁿx = σᵐy`? Both tails must be the same cycle up
    /// to rotation.
    pub fn trajectory_equivalent(&self, other: &EvPerPoint) -> bool {
        least_rotation(&self.cycle.0) == least_rotation(&other.cycle.0)
    }

    /// `(σᵏx, x == y, x ~ y)`.
    pub fn point_ops(&self, other: &EvPerPoint, k: usize) -> (EvPerPoint, bool, bool) {
        (self.shift(k), self == other, self.trajectory_equivalent(other))
    }

    /// Preimages of the point under `σ`: `b·x` for each admissible `b`.
    pub fn preimages(&self, a: &TransitionMatrix) -> Vec<EvPerPoint> {
        let first = self.at(0);
        a.predecessors(first)
            .map(|b| {
                let mut pre = vec![b];
                pre.extend_from_slice(&self.preperiod.0);
                Self::canonical(Word(pre), self.cycle.clone())
            })
            .collect()
    }
}

impl fmt::Display for EvPerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = if self.preperiod.is_empty() { String::new() } else { self.preperiod.to_string() };
        write!(f, "{pre}({})^∞", self.cycle)
    }
}

fn least_rotation(c: &[Symbol]) -> Vec<Symbol> {
    (0..c.len())
        .map(|r| {
            let mut v = c.to_vec();
            v.rotate_left(r);
            v
        })
        .min()
        .unwrap_or_default()
}

/// A nonempty proper symbol set `V′` closed under predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSymbolSet {
    pub symbols: BTreeSet<Symbol>,
    /// `A` restricted to `V′` has no zero rows or columns.
    pub valid_subshift: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub column_sums: Vec<usize>,
    pub constant_p: Option<usize>,
    pub strongly_connected: bool,
    pub predecessor_closed: Vec<ClosedSymbolSet>,
    pub every_cycle_has_exit: bool,
}

impl AnalysisReport {
    /// Topological freeness as decided by the cycle-exit criterion.
    pub fn topologically_free(&self) -> bool {
        self.every_cycle_has_exit
    }

    /// No nontrivial predecessor-closed symbol set (irreducibility checked at
    /// the level of symbols only).
    pub fn symbol_level_irreducible(&self) -> bool {
        self.predecessor_closed.is_empty()
    }
}

fn reachable(a: &TransitionMatrix, from: Symbol, forward: bool) -> BTreeSet<Symbol> {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let next: Vec<Symbol> = if forward { a.successors(v).collect() } else { a.predecessors(v).collect() };
        for w in next {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Sets `V′` with every predecessor of `V′` inside `V′`, excluding `∅` and
/// the full alphabet. Every such set is a union of predecessor closures of
/// single symbols, so the family is generated from those.
pub fn predecessor_closed_sets(a: &TransitionMatrix) -> Vec<BTreeSet<Symbol>> {
    let closures: Vec<BTreeSet<Symbol>> = a.symbols().map(|s| reachable(a, s, false)).collect();
    let mut family: BTreeSet<BTreeSet<Symbol>> = closures.iter().cloned().collect();
    let mut frontier: Vec<BTreeSet<Symbol>> = family.iter().cloned().collect();
    while let Some(set) = frontier.pop() {
        for c in &closures {
            let u: BTreeSet<Symbol> = set.union(c).copied().collect();
            if family.insert(u.clone()) {
                frontier.push(u);
            }
        }
    }
    let mut out: Vec<BTreeSet<Symbol>> = family.into_iter().filter(|s| s.len() < a.n_symbols()).collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

/// Does some cycle lie entirely among symbols of out-degree one? Such a
/// cycle is an isolated periodic orbit whose cylinder is a single point.
fn has_exitless_cycle(a: &TransitionMatrix) -> bool {
    let unique_succ = |v: Symbol| -> Option<Symbol> {
        let mut it = a.successors(v);
        let s = it.next()?;
        if it.next().is_some() {
            None
        } else {
            Some(s)
        }
    };
    for start in a.symbols() {
        let mut v = start;
        for _ in 0..a.n_symbols() {
            match unique_succ(v) {
                Some(s) if s == start => return true,
                Some(s) => v = s,
                None => break,
            }
        }
    }
    false
}

pub fn analyze(a: &TransitionMatrix) -> AnalysisReport {
    let column_sums: Vec<usize> = a.symbols().map(|c| a.col_sum(c)).collect();
    let constant_p = column_sums.iter().all(|&c| c == column_sums[0]).then_some(column_sums[0]);
    let strongly_connected =
        reachable(a, 0, true).len() == a.n_symbols() && reachable(a, 0, false).len() == a.n_symbols();
    let predecessor_closed = predecessor_closed_sets(a)
        .into_iter()
        .map(|symbols| {
            let valid_subshift = a.restrict(&symbols).is_ok();
            ClosedSymbolSet { symbols, valid_subshift }
        })
        .collect();
    AnalysisReport {
        column_sums,
        constant_p,
        strongly_connected,
        predecessor_closed,
        every_cycle_has_exit: !has_exitless_cycle(a),
    }
}

/// Is the cylinder `[w]` contained in `{x : σⁿx = σᵐx}`?
///
/// With `p = |n - m|` and `lo = min(n, m)` the condition is
/// `x_j = x_{j+p}` for all `j >= lo`. Positions below `lo + p` are free, so
/// every admissible extension of `w` to length `lo + p` is examined; past
/// that point the sequence is forced to repeat with period `p`, and the
/// cylinder stays inside the set only if the forced successor is the unique
/// admissible one at every step of a full period.
pub fn cylinder_in_coincidence_set(a: &TransitionMatrix, w: &Word, n: usize, m: usize) -> bool {
    assert_ne!(n, m, "coincidence set needs n != m");
    let lo = n.min(m);
    let p = n.max(m) - lo;
    let w = &w.0;
    // internal equalities inside w
    for j in lo..w.len() {
        if j + p < w.len() && w[j] != w[j + p] {
            return false;
        }
    }
    let base = Word(w.clone());
    let starts = if base.len() >= lo + p { vec![base] } else { extensions(a, &base, lo + p) };
    for ext in starts {
        let mut seq = ext.0;
        let start = seq.len();
        for step in 0..p {
            let forced = seq[start + step - p];
            let last = *seq.last().unwrap();
            if a.out_degree(last) != 1 || !a.allowed(last, forced) {
                return false;
            }
            seq.push(forced);
        }
    }
    true
}

/// Brute-force witness that topological freeness fails for `(n, m)`: a word
/// `w` of length `1..=max_depth` whose cylinder lies inside
/// `{x : σⁿx = σᵐx}`.
pub fn topfree_bruteforce(a: &TransitionMatrix, n: usize, m: usize, max_depth: usize) -> Option<Word> {
    (1..=max_depth).flat_map(|k| admissible_words(a, k)).find(|w| cylinder_in_coincidence_set(a, w, n, m))
}

/// Do `[w]` and `σ⁻ⁿ(σᵐ[w])` intersect? Equivalently, are there
/// `y, z ∈ [w]` with `σⁿy = σᵐz`?
///
/// Writing `q = σⁿy = σᵐz`, `q` must begin with whatever part of `w` lies past
/// position `n` (resp. `m`), and `y`, `z` must be able to reach `q` from `w`.
pub fn cylinder_meets_return(a: &TransitionMatrix, w: &Word, n: usize, m: usize) -> bool {
    let k = w.len();
    let tail = |shift: usize| -> Word {
        if shift < k {
            w.suffix_from(shift)
        } else {
            Word::empty()
        }
    };
    // possible last symbols of the length-`shift` prefix; None = unconstrained
    let lasts = |shift: usize| -> Option<BTreeSet<Symbol>> {
        if shift == 0 {
            None
        } else if shift <= k {
            Some(BTreeSet::from([w.0[shift - 1]]))
        } else {
            Some(extensions(a, w, shift).into_iter().filter_map(|v| v.last()).collect())
        }
    };
    let (ty, tz) = (tail(n), tail(m));
    let q = if ty.len() >= tz.len() { &ty } else { &tz };
    let short = if ty.len() >= tz.len() { &tz } else { &ty };
    if q.0[..short.len()] != short.0[..] {
        return false;
    }
    let (ly, lz) = (lasts(n), lasts(m));
    let reach = |l: &Option<BTreeSet<Symbol>>, q0: Symbol| match l {
        None => true,
        Some(set) => set.iter().any(|&s| a.allowed(s, q0)),
    };
    let candidates: Vec<Symbol> = match q.first() {
        Some(s) => vec![s],
        None => a.symbols().collect(),
    };
    candidates.into_iter().any(|q0| reach(&ly, q0) && reach(&lz, q0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn red() -> TransitionMatrix {
        TransitionMatrix::new(&[vec![1, 1], vec![0, 1]]).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse_digits(s).unwrap()
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(TransitionMatrix::new(&[vec![1, 0], vec![1, 0]]), Err(SftError::ZeroColumn(1)));
        assert_eq!(TransitionMatrix::new(&[vec![1, 1], vec![0, 0]]), Err(SftError::ZeroRow(1)));
        assert_eq!(TransitionMatrix::new(&[vec![1, 1]]), Err(SftError::NotSquare));
        assert!(matches!(TransitionMatrix::new(&[vec![2]]), Err(SftError::NotBinary { .. })));
    }

    #[test]
    fn word_enumeration() {
        let f2 = TransitionMatrix::full(2);
        assert_eq!(admissible_words(&f2, 2), vec![w("00"), w("01"), w("10"), w("11")]);
        let fib = TransitionMatrix::golden_mean();
        assert_eq!(admissible_words(&fib, 2), vec![w("00"), w("01"), w("10")]);
        assert_eq!(admissible_words(&fib, 0), vec![Word::empty()]);
        // Fibonacci counts
        let counts: Vec<usize> = (1..=6).map(|k| admissible_words(&fib, k).len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn analysis_examples() {
        let f2 = analyze(&TransitionMatrix::full(2));
        assert_eq!(f2.constant_p, Some(2));
        assert!(f2.strongly_connected && f2.predecessor_closed.is_empty() && f2.every_cycle_has_exit);

        let r = analyze(&red());
        assert_eq!(r.column_sums, vec![1, 2]);
        assert_eq!(r.constant_p, None);
        assert!(!r.strongly_connected);
        assert_eq!(r.predecessor_closed, vec![ClosedSymbolSet { symbols: BTreeSet::from([0]), valid_subshift: true }]);
        assert!(!r.every_cycle_has_exit);

        let p3 = analyze(&TransitionMatrix::cyclic_permutation(3));
        assert_eq!(p3.constant_p, Some(1));
        assert!(p3.strongly_connected && !p3.every_cycle_has_exit);

        let fib = analyze(&TransitionMatrix::golden_mean());
        assert_eq!(fib.column_sums, vec![2, 1]);
        assert!(fib.every_cycle_has_exit && fib.strongly_connected);
    }

    #[test]
    fn invalid_closed_set_is_flagged() {
        // 0 -> 1 only, 1 -> {0,1,2}, 2 -> 2: {0,1} closed under predecessors?
        // preds(0) = {1}, preds(1) = {0,1}, preds(2) = {1,2}
        let a = TransitionMatrix::new(&[vec![0, 1, 0], vec![1, 1, 1], vec![0, 0, 1]]).unwrap();
        let sets = predecessor_closed_sets(&a);
        assert_eq!(sets, vec![BTreeSet::from([0, 1])]);
        assert!(analyze(&a).predecessor_closed[0].valid_subshift);
        // 0 -> {0,1}, 1 -> 2, 2 -> 2 : {0} is closed, {0,1} closed with 1 dead inside
        let b = TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 0, 1], vec![0, 0, 1]]).unwrap();
        let rep = analyze(&b);
        let by_set: Vec<_> = rep.predecessor_closed.iter().map(|c| (c.symbols.clone(), c.valid_subshift)).collect();
        assert_eq!(by_set, vec![(BTreeSet::from([0]), true), (BTreeSet::from([0, 1]), false)]);
    }

    #[test]
    fn bruteforce_witnesses() {
        assert_eq!(topfree_bruteforce(&red(), 1, 0, 2), Some(w("1")));
        assert_eq!(topfree_bruteforce(&TransitionMatrix::full(2), 1, 0, 6), None);
        let p3 = TransitionMatrix::cyclic_permutation(3);
        assert_eq!(topfree_bruteforce(&p3, 3, 0, 3).map(|w| w.len()), Some(1));
        assert_eq!(topfree_bruteforce(&p3, 1, 0, 3), None);
        assert_eq!(topfree_bruteforce(&p3, 0, 6, 3).map(|w| w.len()), Some(1));
    }

    #[test]
    fn coincidence_membership_details() {
        let r = red();
        // [01] contains 0111... (σ fixes 111... only from position 1 on)
        assert!(cylinder_in_coincidence_set(&r, &w("01"), 2, 1));
        assert!(!cylinder_in_coincidence_set(&r, &w("01"), 1, 0));
        assert!(!cylinder_in_coincidence_set(&r, &w("0"), 2, 1));
        let f2 = TransitionMatrix::full(2);
        assert!(!cylinder_in_coincidence_set(&f2, &w("0101"), 2, 0));
    }

    #[test]
    fn point_operations() {
        let f2 = TransitionMatrix::full(2);
        let x = EvPerPoint::new(&f2, Word::empty(), w("01")).unwrap();
        let (sx, _, _) = x.point_ops(&x, 1);
        assert_eq!(sx.preperiod(), &Word::empty());
        assert_eq!(sx.cycle(), &w("10"));
        assert_eq!(x.shift(2), x);

        let y = EvPerPoint::new(&f2, w("0"), w("1")).unwrap();
        let z = EvPerPoint::new(&f2, Word::empty(), w("1")).unwrap();
        let (_, eq, tr) = y.point_ops(&z, 0);
        assert!(!eq && tr);
        assert_eq!(y.shift(1), z);

        let zero = EvPerPoint::new(&f2, Word::empty(), w("0")).unwrap();
        assert!(!zero.trajectory_equivalent(&z));

        // canonical: 0(10)^∞ == (01)^∞, (0101)^∞ == (01)^∞
        let a = EvPerPoint::new(&f2, w("0"), w("10")).unwrap();
        let b = EvPerPoint::new(&f2, Word::empty(), w("0101")).unwrap();
        assert_eq!(a, x);
        assert_eq!(b, x);

        let fib = TransitionMatrix::golden_mean();
        assert!(EvPerPoint::new(&fib, Word::empty(), w("1")).is_err());
        assert!(EvPerPoint::new(&fib, w("1"), w("10")).is_err());
    }

    #[test]
    fn return_sets() {
        let fib = TransitionMatrix::golden_mean();
        assert!(cylinder_meets_return(&fib, &w("0"), 1, 0));
        assert!(!cylinder_meets_return(&fib, &w("01"), 1, 0));
        let f2 = TransitionMatrix::full(2);
        assert!(cylinder_meets_return(&f2, &w("01"), 2, 0));
        assert!(!cylinder_meets_return(&f2, &w("010"), 1, 0));
        assert!(cylinder_meets_return(&f2, &w("01"), 5, 3));
    }
}
