//! Named verification suites, selectable at runtime.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::crossed::{
    ck_generators, equals, expectation_f, expectation_g, expectation_g_checked, main_redundancy,
    verify_finite_index_identities, verify_relations, CrossedElement,
};
use crate::cylfun::{CylFun, QuasiBasis};
use crate::gns::{av_relation_checks, Gns};
use crate::groupoid::{constant_column_sum, normalize_equals, verify_groupoid_relations, PhiIso};
use crate::measure::{invariance_checks, InvariantMeasure};
use crate::random::Sampler;
use crate::report::Report;
use crate::scalar::RadScalar;
use crate::sft::{admissible_words, EvPerPoint, Symbol, TransitionMatrix, Word};

/// Everything a suite needs: the system, its measure, and sampling knobs.
pub struct SuiteContext {
    pub matrix: Arc<TransitionMatrix>,
    pub measure: InvariantMeasure,
    pub seed: u64,
    /// Maximal depth of random cylinder functions.
    pub depth: usize,
    /// Random cases per identity.
    pub cases: usize,
}

impl SuiteContext {
    fn sampler(&self, salt: u64) -> Sampler {
        Sampler::new(&self.matrix, self.seed.wrapping_mul(1_000_003).wrapping_add(salt))
    }

    /// Depth for random crossed-product coefficients; kept small so that
    /// products stay cheap to normalize.
    fn element_depth(&self) -> usize {
        self.depth.min(2)
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &SuiteContext) -> Report;
}

pub struct SuiteRegistry {
    suites: Vec<Box<dyn Suite>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        SuiteRegistry { suites: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(TransferSuite));
        r.register(Box::new(QuasiBasisSuite));
        r.register(Box::new(RedundancySuite));
        r.register(Box::new(CkSuite));
        r.register(Box::new(GnsSuite));
        r.register(Box::new(GroupoidSuite));
        r
    }

    pub fn register(&mut self, suite: Box<dyn Suite>) {
        assert!(self.get(suite.name()).is_none(), "suite {} registered twice", suite.name());
        self.suites.push(suite);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    /// Runs one suite, or every suite in registration order for `"all"`.
    pub fn run(&self, name: &str, ctx: &SuiteContext) -> Option<Vec<Report>> {
        if name == "all" {
            return Some(self.suites.iter().map(|s| s.run(ctx)).collect());
        }
        self.get(name).map(|s| vec![s.run(ctx)])
    }
}

fn fails(v: &[usize]) -> String {
    format!("failing cases {v:?}")
}

/// Pairs that are equal in the crossed product about two thirds of the time,
/// by construction rather than by accident.
pub fn sample_pair(s: &mut Sampler, case: usize, depth: usize) -> (CrossedElement, CrossedElement) {
    let a = s.matrix().clone();
    let x = s.element(2, depth, 1);
    let y = match case % 3 {
        0 => x.raise_level(),
        1 => {
            let defect = CrossedElement::one(&a).sub(&main_redundancy(&a));
            let l = CrossedElement::from_fun(&s.cylfun(depth));
            let r = CrossedElement::from_monomial(s.monomial(depth, 1));
            x.add(&l.mul(&defect).mul(&r))
        }
        _ => x.add(&CrossedElement::from_monomial(s.monomial(depth, 1))),
    };
    (x, y)
}

/// Eventually periodic points with preperiod at most 1 and cycle length at
/// most 3.
fn small_points(a: &TransitionMatrix) -> Vec<EvPerPoint> {
    let mut pts = BTreeSet::new();
    for clen in 1..=3 {
        for c in admissible_words(a, clen) {
            for pre in std::iter::once(Word::empty()).chain(admissible_words(a, 1)) {
                if let Ok(p) = EvPerPoint::new(a, pre, c.clone()) {
                    pts.insert(p);
                }
            }
        }
    }
    pts.into_iter().collect()
}

/// Transfer axiom, conditional expectations, support property, `Λ` as a
/// preimage count, and invariance of the measure.
pub struct TransferSuite;

impl Suite for TransferSuite {
    fn name(&self) -> &'static str {
        "transfer"
    }

    fn description(&self) -> &'static str {
        "transfer operators, conditional expectations E_n, invariant measure"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let a = &ctx.matrix;
        let mut s = ctx.sampler(1);
        let mut r = Report::new("transfer");
        let w = Some(ctx.measure.weights());

        let (mut bad_u, mut bad_w, mut bad_la) = (vec![], vec![], vec![]);
        for case in 0..ctx.cases {
            let f = s.cylfun(ctx.depth);
            let g = s.cylfun(ctx.depth);
            if f.mul(&g.alpha()).transfer(None) != f.transfer(None).mul(&g) {
                bad_u.push(case);
            }
            if f.mul(&g.alpha()).transfer(w) != f.transfer(w).mul(&g) {
                bad_w.push(case);
            }
            if g.alpha().transfer(None) != g || g.alpha().transfer(w) != g {
                bad_la.push(case);
            }
        }
        r.check("L(f·α(g)) = L(f)·g (uniform)", bad_u.is_empty(), || fails(&bad_u));
        r.check("L(f·α(g)) = L(f)·g (measure weights)", bad_w.is_empty(), || fails(&bad_w));
        r.check("L∘α = id", bad_la.is_empty(), || fails(&bad_la));
        r.check("L(1) = 1", CylFun::one(a).transfer(None) == CylFun::one(a), String::new);

        for n in 1..=3 {
            let (mut idem, mut bimod, mut range, mut pos) = (vec![], vec![], vec![], vec![]);
            for case in 0..ctx.cases {
                let f = s.cylfun(ctx.depth);
                let c = s.cylfun(ctx.depth);
                let e = f.expectation(n, None);
                if e.expectation(n, None) != e {
                    idem.push(case);
                }
                let ac = c.alpha_pow(n);
                if f.mul(&ac).expectation(n, None) != e.mul(&ac) || ac.mul(&f).expectation(n, None) != ac.mul(&e) {
                    bimod.push(case);
                }
                if ac.expectation(n, None) != ac {
                    range.push(case);
                }
                let sq = f.conj().mul(&f).expectation(n, None);
                if !sq.entries().all(|(_, v)| v.is_nonneg_real()) {
                    pos.push(case);
                }
            }
            r.check(format!("E_{n} idempotent"), idem.is_empty(), || fails(&idem));
            r.check(format!("E_{n} bimodular over αⁿ(A)"), bimod.is_empty(), || fails(&bimod));
            r.check(format!("E_{n} fixes αⁿ(A)"), range.is_empty(), || fails(&range));
            r.check(format!("E_{n} positive on squares"), pos.is_empty(), || fails(&pos));
            r.check(format!("E_{n}(1) = 1"), CylFun::one(a).expectation(n, None) == CylFun::one(a), String::new);
        }

        let mut bad_supp = vec![];
        for case in 0..ctx.cases {
            let f = s.cylfun(ctx.depth).refine(2);
            let supp = f.support();
            let alpha_ok = f.alpha().support().iter().all(|w| supp.contains(&w.suffix_from(1)));
            let suffixes: BTreeSet<Word> = supp.iter().map(|w| w.suffix_from(1)).collect();
            let l_ok = f.transfer(None).support().iter().all(|w| suffixes.contains(w));
            if !(alpha_ok && l_ok) {
                bad_supp.push(case);
            }
        }
        r.check("support of α(f) and L(f) follow support of f", bad_supp.is_empty(), || fails(&bad_supp));

        let lambda = QuasiBasis::new(a).lambda().clone();
        let bad_pts: Vec<String> = small_points(a)
            .into_iter()
            .filter(|x| {
                let count = x.shift(1).preimages(a).len() as i64;
                lambda.eval_point(x) != RadScalar::from_int(count)
            })
            .map(|x| x.to_string())
            .collect();
        r.check("Λ(x) = #σ⁻¹(σx) at periodic points", bad_pts.is_empty(), || bad_pts.join(", "));

        r.extend(invariance_checks(&ctx.measure, ctx.seed, ctx.depth, ctx.cases));
        r
    }
}

/// Quasi-basis identity, index, and multi-index sums.
pub struct QuasiBasisSuite;

impl Suite for QuasiBasisSuite {
    fn name(&self) -> &'static str {
        "quasibasis"
    }

    fn description(&self) -> &'static str {
        "quasi-basis reconstruction, ind(E) = Λ, Σ u_(i) u_(i)* = I_n"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let a = &ctx.matrix;
        let qb = QuasiBasis::new(a);
        let mut s = ctx.sampler(2);
        let mut r = Report::new("quasibasis");
        let bad: Vec<usize> = (0..ctx.cases).filter(|_| !qb.check(&s.cylfun(ctx.depth))).collect();
        r.check("f = Σ u_c E(u_c* f)", bad.is_empty(), || fails(&bad));
        r.check("ind(E) = Λ", qb.index() == *qb.lambda(), || format!("{} vs {}", qb.index(), qb.lambda()));
        for n in 0..=3 {
            let sum = qb.multi(n).iter().fold(CylFun::zero(a), |acc, (_, u)| acc.add(&u.mul(&u.conj())));
            r.check(format!("Σ u_(i) u_(i)* = I_{n}"), sum == qb.i_n(n), String::new);
        }
        let mut u = qb.u().to_vec();
        u[0] = u[0].scale(&RadScalar::from_int(2));
        let bad_qb = QuasiBasis::from_parts(a, u, qb.lambda().clone());
        r.check("perturbed family is rejected", !bad_qb.check(&CylFun::one(a)), String::new);
        r
    }
}

/// Redundancies, covariance relations, engine laws, and the expectations
/// `F` and `G`.
pub struct RedundancySuite;

impl Suite for RedundancySuite {
    fn name(&self) -> &'static str {
        "redundancy"
    }

    fn description(&self) -> &'static str {
        "main redundancy, multi-index identities, ring laws, expectations F and G"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let a = &ctx.matrix;
        let d = ctx.element_depth();
        let mut s = ctx.sampler(3);
        let mut r = Report::new("redundancy");
        r.extend(verify_finite_index_identities(a, ctx.depth.clamp(1, 3)));
        let funcs: Vec<CylFun> = (0..ctx.cases).map(|_| s.cylfun(ctx.depth)).collect();
        r.extend(verify_relations(a, &funcs, 3));

        let (mut raise, mut assoc, mut anti, mut degs) = (vec![], vec![], vec![], vec![]);
        for case in 0..ctx.cases {
            let x = CrossedElement::from_monomial(s.monomial(d, 1));
            let y = CrossedElement::from_monomial(s.monomial(d, 1));
            let z = CrossedElement::from_monomial(s.monomial(d, 1));
            if !equals(&x, &x.raise_level()) {
                raise.push(case);
            }
            if !equals(&x.mul(&y).mul(&z), &x.mul(&y.mul(&z))) {
                assoc.push(case);
            }
            if !equals(&x.mul(&y).adjoint(), &y.adjoint().mul(&x.adjoint())) {
                anti.push(case);
            }
            let sums: BTreeSet<i64> =
                x.degrees().iter().flat_map(|p| y.degrees().into_iter().map(move |q| p + q)).collect();
            if !x.mul(&y).degrees().is_subset(&sums) {
                degs.push(case);
            }
        }
        r.check("raise_level preserves the element", raise.is_empty(), || fails(&raise));
        r.check("(xy)z = x(yz)", assoc.is_empty(), || fails(&assoc));
        r.check("(xy)* = y* x*", anti.is_empty(), || fails(&anti));
        r.check("degrees add under products", degs.is_empty(), || fails(&degs));

        let (mut f_idem, mut f_bimod, mut g_f, mut g_bimod, mut g_v) = (vec![], vec![], vec![], vec![], vec![]);
        for case in 0..ctx.cases {
            let x = s.element(2, d, 1);
            let fa = CrossedElement::from_fun(&s.cylfun(d));
            let fb = CrossedElement::from_fun(&s.cylfun(d));
            let fx = expectation_f(&x);
            if !equals(&expectation_f(&fx), &fx) {
                f_idem.push(case);
            }
            if !equals(&expectation_f(&fa.mul(&x).mul(&fb)), &fa.mul(&fx).mul(&fb)) {
                f_bimod.push(case);
            }
            if expectation_g(&fx) != expectation_g(&x) {
                g_f.push(case);
            }
            let ga = expectation_g(&fa.mul(&x).mul(&fb));
            let lhs = expectation_g(&fa).mul(&expectation_g(&x)).mul(&expectation_g(&fb));
            if ga != lhs {
                g_bimod.push(case);
            }
            let z = s.degree_zero(2, d, 2);
            if expectation_g_checked(&z).is_err() {
                g_v.push(case);
            }
        }
        r.check("F idempotent", f_idem.is_empty(), || fails(&f_idem));
        r.check("F(axb) = aF(x)b", f_bimod.is_empty(), || fails(&f_bimod));
        r.check("G∘F = G", g_f.is_empty(), || fails(&g_f));
        r.check("G(axb) = aG(x)b", g_bimod.is_empty(), || fails(&g_bimod));
        r.check("G formula = v-form, Σ v v* = 1", g_v.is_empty(), || fails(&g_v));
        r.check("G(1) = 1", expectation_g(&CrossedElement::one(a)) == CylFun::one(a), String::new);

        let mut faithful = vec![];
        let mut nonzero = 0;
        for case in 0..ctx.cases {
            let l = s.degree_zero(2, d, 2);
            if equals(&l, &CrossedElement::zero(a)) {
                continue;
            }
            nonzero += 1;
            if expectation_g(&l.adjoint().mul(&l)).is_zero() {
                faithful.push(case);
            }
        }
        r.check(format!("G(l* l) ≠ 0 for {nonzero} nonzero l in K_2"), faithful.is_empty(), || fails(&faithful));
        r
    }
}

/// Cuntz–Krieger relations for `s_c = u_c·S`.
pub struct CkSuite;

impl Suite for CkSuite {
    fn name(&self) -> &'static str {
        "ck"
    }

    fn description(&self) -> &'static str {
        "Cuntz–Krieger relations for s_c = u_c S"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let a = &ctx.matrix;
        let mut r = Report::new("ck");
        let gens = ck_generators(a);
        let one = CrossedElement::one(a);
        if gens.len() != a.n_symbols() {
            let s = &gens[0];
            r.check("S* S = 1", equals(&s.adjoint().mul(s), &one), String::new);
            r.check("S S* = 1", equals(&s.mul(&s.adjoint()), &one), String::new);
            return r;
        }
        for (c, sc) in gens.iter().enumerate() {
            for (d, sd) in gens.iter().enumerate() {
                let lhs = sc.adjoint().mul(sd);
                let rhs = if c == d {
                    a.successors(c as Symbol)
                        .fold(CylFun::zero(a), |acc, b| acc.add(&CylFun::indicator(a, &Word(vec![b])).expect("symbol")))
                } else {
                    CylFun::zero(a)
                };
                let name =
                    if c == d { format!("s_{c}* s_{c} = Σ_b A({c},b) 1_[b]") } else { format!("s_{c}* s_{d} = 0") };
                r.check(name, equals(&lhs, &CrossedElement::from_fun(&rhs)), String::new);
            }
        }
        let range = gens.iter().fold(CrossedElement::zero(a), |acc, s| acc.add(&s.mul(&s.adjoint())));
        r.check("Σ s_c s_c* = 1", equals(&range, &one), String::new);
        r
    }
}

/// GNS relations and agreement of the matrix-element oracle with the normal
/// form.
pub struct GnsSuite;

impl Suite for GnsSuite {
    fn name(&self) -> &'static str {
        "gns"
    }

    fn description(&self) -> &'static str {
        "GNS representation relations and matrix-element oracle agreement"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let mut r = Report::new("gns");
        let gns = match Gns::new(&ctx.measure) {
            Ok(g) => g,
            Err(e) => {
                r.skip("GNS relations", e.to_string());
                return r;
            }
        };
        match av_relation_checks(&ctx.measure, ctx.seed, ctx.depth, ctx.cases) {
            Ok(rep) => r.extend(rep),
            Err(e) => r.fail("GNS relations", e.to_string()),
        }
        if !ctx.measure.weights().is_uniform() {
            r.skip("oracle agreement", "non-uniform weights");
            return r;
        }
        let mut s = ctx.sampler(5);
        let mut bad = vec![];
        for case in 0..ctx.cases {
            let (x, y) = sample_pair(&mut s, case, ctx.element_depth());
            if gns.equality_oracle(&x, &y) != Ok(equals(&x, &y)) {
                bad.push(case);
            }
        }
        r.check("matrix-element oracle agrees with normal form", bad.is_empty(), || fails(&bad));
        r
    }
}

/// Groupoid relations, homomorphism property of the isomorphism, and oracle
/// agreement, for constant column sums.
pub struct GroupoidSuite;

impl Suite for GroupoidSuite {
    fn name(&self) -> &'static str {
        "groupoid"
    }

    fn description(&self) -> &'static str {
        "groupoid model: v relations, φ homomorphism, oracle agreement"
    }

    fn run(&self, ctx: &SuiteContext) -> Report {
        let a = &ctx.matrix;
        let mut r = Report::new("groupoid");
        if let Err(e) = constant_column_sum(a) {
            r.skip("groupoid relations", e.to_string());
            return r;
        }
        let iso = PhiIso::new(a).expect("constant column sum");
        let mut s = ctx.sampler(6);
        let funcs: Vec<CylFun> = (0..ctx.cases).map(|_| s.cylfun(ctx.depth)).collect();
        r.extend(verify_groupoid_relations(a, &funcs).expect("constant column sum"));
        let d = ctx.element_depth();
        let (mut hom, mut star, mut agree) = (vec![], vec![], vec![]);
        for case in 0..ctx.cases {
            let x = s.element(2, d, 1);
            let y = s.element(2, d, 1);
            let (px, py) = (iso.apply(&x).expect("same matrix"), iso.apply(&y).expect("same matrix"));
            if !normalize_equals(&iso.apply(&x.mul(&y)).expect("same matrix"), &px.convolve(&py)) {
                hom.push(case);
            }
            if !normalize_equals(&iso.apply(&x.adjoint()).expect("same matrix"), &px.adjoint()) {
                star.push(case);
            }
            let (u, v) = sample_pair(&mut s, case, d);
            let g = normalize_equals(&iso.apply(&u).expect("same matrix"), &iso.apply(&v).expect("same matrix"));
            if g != equals(&u, &v) {
                agree.push(case);
            }
        }
        r.check("φ(xy) = φ(x)φ(y)", hom.is_empty(), || fails(&hom));
        r.check("φ(x*) = φ(x)*", star.is_empty(), || fails(&star));
        r.check("groupoid equality agrees with normal form", agree.is_empty(), || fails(&agree));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::TransferWeights;

    fn ctx(a: TransitionMatrix, depth: usize, cases: usize) -> SuiteContext {
        let a = Arc::new(a);
        let measure = InvariantMeasure::solve(&TransferWeights::uniform(&a));
        SuiteContext { matrix: a, measure, seed: 7, depth, cases }
    }

    #[test]
    fn registry_lookup() {
        let reg = SuiteRegistry::standard();
        assert_eq!(reg.names(), vec!["transfer", "quasibasis", "redundancy", "ck", "gns", "groupoid"]);
        assert!(reg.get("nope").is_none());
        let c = ctx(TransitionMatrix::full(2), 2, 3);
        assert_eq!(reg.run("all", &c).unwrap().len(), 6);
    }

    #[test]
    fn all_suites_pass_on_fixtures() {
        let reg = SuiteRegistry::standard();
        for a in [TransitionMatrix::full(2), TransitionMatrix::golden_mean(), TransitionMatrix::cyclic_permutation(3)] {
            let c = ctx(a, 3, 6);
            for rep in reg.run("all", &c).unwrap() {
                assert!(rep.all_passed(), "{rep}");
            }
        }
    }

    #[test]
    fn reducible_system_skips_gns() {
        let reg = SuiteRegistry::standard();
        let c = ctx(TransitionMatrix::new(&[vec![1, 1], vec![0, 1]]).unwrap(), 2, 3);
        let rep = &reg.run("gns", &c).unwrap()[0];
        assert!(rep.checks.iter().all(|c| matches!(c.outcome, crate::report::Outcome::Skipped(_))));
    }
}
