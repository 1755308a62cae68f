//! GNS representations on cylinder vectors.
//!
//! `H` is the completion of `C(Σ_A)` under `⟨f, g⟩ = φ(f*g)`. The plain
//! representation `π` lets `S` act as `Š = α` and `S*` as the weighted
//! transfer operator; the twisted representation `π̃ = π ⊗ bilateral shift`
//! acts on `H ⊗ ℓ²(ℤ)` and is faithful, which makes its matrix elements an
//! equality oracle.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::crossed::{block_shapes, natural_levels, CrossedElement};
use crate::cylfun::CylFun;
use crate::measure::InvariantMeasure;
use crate::random::Sampler;
use crate::report::Report;
use crate::scalar::RadScalar;
use crate::sft::{admissible_words, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GnsError {
    #[error("measure is not fully supported; the GNS representation is not faithful")]
    NotFaithful,
    #[error("oracle needs the uniform fiber weights; other weights represent a different crossed product")]
    WeightsNotUniform,
    #[error("element lives over a different transition matrix")]
    MatrixMismatch,
}

/// `Σ_k f_k ⊗ δ_k`.
#[derive(Clone, PartialEq, Default)]
pub struct GnsVector {
    parts: BTreeMap<i64, CylFun>,
}

impl GnsVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(f: CylFun, k: i64) -> Self {
        let mut v = Self::new();
        v.add_part(f, k);
        v
    }

    pub fn add_part(&mut self, f: CylFun, k: i64) {
        let merged = match self.parts.remove(&k) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !merged.is_zero() {
            self.parts.insert(k, merged);
        }
    }

    pub fn part(&self, k: i64) -> Option<&CylFun> {
        self.parts.get(&k)
    }

    pub fn parts(&self) -> impl Iterator<Item = (i64, &CylFun)> {
        self.parts.iter().map(|(k, f)| (*k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Debug for GnsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(k, g)| format!("({g})⊗δ{k}")).collect();
        write!(f, "GnsVector[{}]", parts.join(" + "))
    }
}

pub struct Gns {
    mu: InvariantMeasure,
}

impl Gns {
    pub fn new(mu: &InvariantMeasure) -> Result<Self, GnsError> {
        if !mu.fully_supported() {
            return Err(GnsError::NotFaithful);
        }
        Ok(Gns { mu: mu.clone() })
    }

    pub fn measure(&self) -> &InvariantMeasure {
        &self.mu
    }

    fn check(&self, x: &CrossedElement) -> Result<(), GnsError> {
        if **x.matrix() == **self.mu.matrix() {
            Ok(())
        } else {
            Err(GnsError::MatrixMismatch)
        }
    }

    /// `π(x)` on `H`: `(a,n,m,b)` sends `f` to `a·αⁿ(L_wᵐ(b·f))`.
    pub fn act_untwisted(&self, x: &CrossedElement, f: &CylFun) -> Result<CylFun, GnsError> {
        self.check(x)?;
        let w = Some(self.mu.weights());
        Ok(x.terms().iter().fold(CylFun::zero(self.mu.matrix()), |acc, t| {
            acc.add(&t.a.mul(&t.b.mul(f).transfer_pow(t.m, w).alpha_pow(t.n)))
        }))
    }

    /// `π̃(x)`: as [`Gns::act_untwisted`] with `δ_k ↦ δ_{k+n-m}`.
    pub fn act(&self, x: &CrossedElement, v: &GnsVector) -> Result<GnsVector, GnsError> {
        self.check(x)?;
        let w = Some(self.mu.weights());
        let mut out = GnsVector::new();
        for (k, f) in v.parts() {
            for t in x.terms() {
                let g = t.a.mul(&t.b.mul(f).transfer_pow(t.m, w).alpha_pow(t.n));
                out.add_part(g, k + t.degree());
            }
        }
        Ok(out)
    }

    /// `⟨f⊗δ_j, g⊗δ_k⟩ = δ_{jk}·φ(f*·g)`.
    pub fn inner(&self, u: &GnsVector, v: &GnsVector) -> RadScalar {
        u.parts().filter_map(|(k, f)| v.part(k).map(|g| self.mu.phi(&f.conj().mul(g)))).sum()
    }

    pub fn matrix_element(&self, x: &CrossedElement, u: &GnsVector, v: &GnsVector) -> Result<RadScalar, GnsError> {
        Ok(self.inner(u, &self.act(x, v)?))
    }

    /// Decides `x = y` from the matrix elements
    /// `⟨e_w⊗δ_d, π̃(x−y)(e_{w′}⊗δ₀)⟩` with `|w| = N+r`, `|w′| = M+r` taken
    /// from the normal-form shape of `x − y` in each degree `d`.
    pub fn equality_oracle(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool, GnsError> {
        if !self.mu.weights().is_uniform() {
            return Err(GnsError::WeightsNotUniform);
        }
        self.check(x)?;
        self.check(y)?;
        let z = x.sub(y);
        let shapes = block_shapes(&z, &natural_levels(&z), 1).expect("natural levels");
        let a = self.mu.matrix();
        for (&d, &(level, co, r)) in &shapes {
            let zd = z.degree_component(d);
            let rows = admissible_words(a, level + r);
            for wp in admissible_words(a, co + r) {
                let e = CylFun::indicator(a, &wp).expect("admissible");
                let image = self.act(&zd, &GnsVector::single(e, 0))?;
                let Some(g) = image.part(d) else { continue };
                for w in &rows {
                    let probe = GnsVector::single(CylFun::indicator(a, w).expect("admissible"), d);
                    if !self.inner(&probe, &GnsVector::single(g.clone(), d)).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The slot `⟨e_w⊗δ_{N−M}, π̃(e_w SᴺS*ᴹ e_{w′}) e_{w′}⊗δ₀⟩`.
    pub fn elementary_slot(&self, w: &Word, level: usize, co: usize, wp: &Word) -> Result<RadScalar, GnsError> {
        let a = self.mu.matrix();
        let ew = CylFun::indicator(a, w).expect("admissible");
        let ewp = CylFun::indicator(a, wp).expect("admissible");
        let x = CrossedElement::from_fun(&ew)
            .mul(&CrossedElement::s_power(a, level, co))
            .mul(&CrossedElement::from_fun(&ewp));
        let d = level as i64 - co as i64;
        self.matrix_element(&x, &GnsVector::single(ew, d), &GnsVector::single(ewp, 0))
    }
}

/// Relations between `Š`, multiplication operators and the bilateral shift
/// on seeded random cylinder vectors of depth at most `depth`.
pub fn av_relation_checks(mu: &InvariantMeasure, seed: u64, depth: usize, cases: usize) -> Result<Report, GnsError> {
    let gns = Gns::new(mu)?;
    let a = mu.matrix().clone();
    let w = Some(mu.weights());
    let s = CrossedElement::s(&a);
    let s_star = CrossedElement::s_star(&a);
    let mut sampler = Sampler::new(&a, seed);
    let mut report = Report::new("GNS relations");

    let xi = CylFun::one(&a);
    report.check("Š ξ = ξ", gns.act_untwisted(&s, &xi)? == xi, String::new);

    let (mut bad_av, mut bad_iso, mut bad_cov, mut bad_rep) = (vec![], vec![], vec![], vec![]);
    for case in 0..cases {
        let f = sampler.cylfun(depth);
        let v = sampler.cylfun(depth);
        let u = sampler.cylfun(depth);
        let fe = CrossedElement::from_fun(&f);
        // composed operator by operator: crossed products multiply with the
        // uniform transfer, which is not Š* for other weights
        let lhs = gns.act_untwisted(&s_star, &gns.act_untwisted(&fe, &gns.act_untwisted(&s, &v)?)?)?;
        if lhs != f.transfer(w).mul(&v) {
            bad_av.push(case);
        }
        let (su, sv) = (gns.act_untwisted(&s, &u)?, gns.act_untwisted(&s, &v)?);
        if mu.phi(&su.conj().mul(&sv)) != mu.phi(&u.conj().mul(&v)) {
            bad_iso.push(case);
        }
        let vec = GnsVector::single(v.clone(), sampler.range(0, 2) as i64 - 1);
        let l = gns.act(&s, &gns.act(&fe, &vec)?)?;
        let r = gns.act(&CrossedElement::from_fun(&f.alpha()), &gns.act(&s, &vec)?)?;
        if l != r {
            bad_cov.push(case);
        }
        let x = sampler.element(2, 2, 1);
        let y = sampler.element(2, 2, 1);
        if mu.weights().is_uniform() && gns.act(&x.mul(&y), &vec)? != gns.act(&x, &gns.act(&y, &vec)?)? {
            bad_rep.push(case);
        }
    }
    let fails = |v: &Vec<usize>| format!("failing cases {v:?}");
    report.check("Š* M_f Š = M_{L(f)}", bad_av.is_empty(), || fails(&bad_av));
    report.check("⟨Šu, Šv⟩ = ⟨u, v⟩", bad_iso.is_empty(), || fails(&bad_iso));
    report.check("π̃(S)π̃(a) = π̃(α(a))π̃(S)", bad_cov.is_empty(), || fails(&bad_cov));
    if mu.weights().is_uniform() {
        report.check("π̃(xy) = π̃(x)π̃(y)", bad_rep.is_empty(), || fails(&bad_rep));
    } else {
        report.skip("π̃(xy) = π̃(x)π̃(y)", "non-uniform weights");
    }

    let range = CrossedElement::s_power(&a, 1, 1);
    let one = CrossedElement::one(&a);
    report.check("π(SS*) ξ = π(1) ξ", gns.act_untwisted(&range, &xi)? == gns.act_untwisted(&one, &xi)?, String::new);
    if a.symbols().all(|c| a.col_sum(c) == 1) {
        report.skip("SS* ≠ 1 in the crossed product", "S is unitary");
    } else {
        report.check("SS* ≠ 1 in the crossed product", !crate::crossed::equals(&range, &one), String::new);
    }
    Ok(report)
}
