//! Discrete connections, horizontal lifts, splittings of the discrete
//! Atiyah sequence and the correspondences between them.
//!
//! Every map carries its domain: U for connections, U′ for horizontal
//! lifts, U/G for left splittings, U″ for right splittings. Evaluating
//! outside the domain is a [`Error::DomainViolation`].

use crate::bundles::{
    check_subset_type, hopf_domain, hopf_inner, in_u_prime, in_u_second, HopfBundle, PairSubset,
    PrincipalBundle, SubsetKind, TrivialBundle,
};
use crate::error::{Error, Result};
use crate::fbs::{
    check_semilocal, f1, f2, BasePair, BasePairBundle, ConjBundle, FbsObject, GaugeBundle,
    ProductBundle, ProductClass, SemiLocalMap,
};
use crate::groups::{Group, U1};
use crate::quotients::{conj_dist, gauge_dist, kappa2, lambda, ConjClass, Gauge, GaugeClass};
use crate::report::CheckReport;
use rand::RngCore;
use std::fmt::{self, Debug};
use std::sync::Arc;

type Form<B> = Arc<
    dyn Fn(&<B as PrincipalBundle>::Point, &<B as PrincipalBundle>::Point) -> Result<<B as PrincipalBundle>::Group>
        + Send
        + Sync,
>;

/// A G-valued map on U ⊂ Q×Q.
pub struct DiscreteConnection<B: PrincipalBundle> {
    pub name: String,
    pub bundle: B,
    pub domain: PairSubset<B>,
    form: Form<B>,
}

impl<B: PrincipalBundle> Clone for DiscreteConnection<B> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            bundle: self.bundle.clone(),
            domain: self.domain.clone(),
            form: self.form.clone(),
        }
    }
}

impl<B: PrincipalBundle> Debug for DiscreteConnection<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiscreteConnection({} on {})", self.name, self.bundle.name())
    }
}

impl<B: PrincipalBundle> DiscreteConnection<B> {
    pub fn new(
        name: impl Into<String>,
        bundle: B,
        domain: PairSubset<B>,
        form: impl Fn(&B::Point, &B::Point) -> B::Group + Send + Sync + 'static,
    ) -> Self {
        Self::fallible(name, bundle, domain, move |q0, q1| Ok(form(q0, q1)))
    }

    /// A connection whose evaluator may itself fail inside U.
    pub fn fallible(
        name: impl Into<String>,
        bundle: B,
        domain: PairSubset<B>,
        form: impl Fn(&B::Point, &B::Point) -> Result<B::Group> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            bundle,
            domain,
            form: Arc::new(form),
        }
    }

    pub fn contains(&self, q0: &B::Point, q1: &B::Point) -> bool {
        self.domain.contains(q0, q1)
    }

    pub fn eval(&self, q0: &B::Point, q1: &B::Point) -> Result<B::Group> {
        if !self.contains(q0, q1) {
            return Err(Error::DomainViolation(format!(
                "{}: ({q0:?}, {q1:?}) not in {}",
                self.name, self.domain.name
            )));
        }
        (self.form)(q0, q1)
    }

    /// (q₀, q₁) ∈ Hor, i.e. A(q₀, q₁) = e.
    pub fn is_horizontal(&self, q0: &B::Point, q1: &B::Point, tol: f64) -> bool {
        self.eval(q0, q1).map(|g| g.size() <= tol).unwrap_or(false)
    }

    /// Normalization, vertical values and G×G equivariance at sampled points.
    pub fn check_axioms(&self, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
        let b = &self.bundle;
        let mut rep = CheckReport::new(format!("connection axioms for {}", self.name));
        for _ in 0..samples {
            let q = b.sample_point(rng);
            let g = B::Group::sample(rng);
            match self.eval(&q, &q) {
                Ok(a) => rep.defect("A(q,q) = e", a.size(), tol, || format!("{q:?}")),
                Err(e) => rep.error("A(q,q) = e", e),
            }
            match self.eval(&q, &b.act(&g, &q)) {
                Ok(a) => rep.defect("A(q,gq) = g", a.distance(&g), tol, || format!("q = {q:?}, g = {g:?}")),
                Err(e) => rep.error("A(q,gq) = g", e),
            }
            let (q0, q1) = self.domain.sample_member(b, rng);
            let g0 = B::Group::sample(rng);
            let g1 = B::Group::sample(rng);
            match (self.eval(&b.act(&g0, &q0), &b.act(&g1, &q1)), self.eval(&q0, &q1)) {
                (Ok(lhs), Ok(a)) => {
                    let rhs = g1.mul(&a).mul(&g0.inv());
                    rep.defect("GxG equivariance", lhs.distance(&rhs), tol, || {
                        format!("({q0:?}, {q1:?}), g0 = {g0:?}, g1 = {g1:?}")
                    });
                }
                (Err(e), _) | (_, Err(e)) => rep.error("GxG equivariance", e),
            }
        }
        let mut sub = check_subset_type(b, &self.domain, SubsetKind::D, samples.min(1000), rng);
        sub.name = "domain".into();
        rep.merge(sub);
        rep.untested("the induced map on U is an injective local diffeomorphism");
        rep
    }
}

/// A = g₁ g₀⁻¹ on the trivial bundle.
pub fn flat_trivial<G: Group>(bundle: TrivialBundle<G>) -> DiscreteConnection<TrivialBundle<G>> {
    DiscreteConnection::new("flat", bundle, PairSubset::all(), |q0, q1| {
        q1.fiber.mul(&q0.fiber.inv())
    })
}

/// A = g₁ exp(i B f) g₀⁻¹ on R²×U(1) with f = (x₀y₁ − y₀x₁)/2.
pub fn magnetic(bundle: TrivialBundle<U1>, field: f64) -> DiscreteConnection<TrivialBundle<U1>> {
    DiscreteConnection::new(format!("magnetic(B = {field})"), bundle, PairSubset::all(), move |q0, q1| {
        let [x0, y0] = q0.base;
        let [x1, y1] = q1.base;
        let f = field * (x0 * y1 - y0 * x1) / 2.0;
        q1.fiber.mul(&U1::new(f)).mul(&q0.fiber.inv())
    })
}

/// A = phase⟨q₀, q₁⟩ on {⟨q₀, q₁⟩ ≠ 0}.
pub fn hopf_canonical(bundle: HopfBundle) -> DiscreteConnection<HopfBundle> {
    DiscreteConnection::new("hopf-canonical", bundle, hopf_domain(), |q0, q1| {
        U1::phase(hopf_inner(q0, q1))
    })
}

type LiftEval<B> = Arc<
    dyn Fn(&<B as PrincipalBundle>::Point, &<B as PrincipalBundle>::Base) -> Result<(<B as PrincipalBundle>::Point, <B as PrincipalBundle>::Point)>
        + Send
        + Sync,
>;

/// A section h of id×π over U′.
pub struct HorizontalLift<B: PrincipalBundle> {
    pub name: String,
    pub bundle: B,
    /// The D-type set U whose image is U′.
    pub domain: PairSubset<B>,
    eval: LiftEval<B>,
}

impl<B: PrincipalBundle> Clone for HorizontalLift<B> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            bundle: self.bundle.clone(),
            domain: self.domain.clone(),
            eval: self.eval.clone(),
        }
    }
}

impl<B: PrincipalBundle> Debug for HorizontalLift<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HorizontalLift({})", self.name)
    }
}

impl<B: PrincipalBundle> HorizontalLift<B> {
    pub fn new(
        name: impl Into<String>,
        bundle: B,
        domain: PairSubset<B>,
        eval: impl Fn(&B::Point, &B::Base) -> Result<(B::Point, B::Point)> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            bundle,
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn contains(&self, q: &B::Point, r: &B::Base) -> bool {
        in_u_prime(&self.bundle, &self.domain, q, r).unwrap_or(false)
    }

    pub fn apply(&self, q: &B::Point, r: &B::Base) -> Result<(B::Point, B::Point)> {
        if !self.contains(q, r) {
            return Err(Error::DomainViolation(format!("{}: ({q:?}, {r:?}) not in U'", self.name)));
        }
        (self.eval)(q, r)
    }

    /// (id×π)∘h = id, h(q, π q) = (q, q), and G-equivariance.
    pub fn check_axioms(&self, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
        let b = &self.bundle;
        let mut rep = CheckReport::new(format!("horizontal lift {}", self.name));
        for _ in 0..samples {
            let (q0, q1) = self.domain.sample_member(b, rng);
            let r = b.project(&q1);
            match self.apply(&q0, &r) {
                Ok((p0, p1)) => {
                    let d = b.point_dist(&p0, &q0) + b.base_dist(&b.project(&p1), &r);
                    rep.defect("(id x pi) o h = id", d, tol, || format!("({q0:?}, {r:?})"));
                    let g = B::Group::sample(rng);
                    match self.apply(&b.act(&g, &q0), &r) {
                        Ok((m0, m1)) => {
                            let d = b.point_dist(&m0, &b.act(&g, &p0)) + b.point_dist(&m1, &b.act(&g, &p1));
                            rep.defect("equivariance", d, tol, || format!("({q0:?}, {r:?}), g = {g:?}"));
                        }
                        Err(e) => rep.error("equivariance", e),
                    }
                }
                Err(e) => rep.error("(id x pi) o h = id", e),
            }
            match self.apply(&q0, &b.project(&q0)) {
                Ok((p0, p1)) => {
                    let d = b.point_dist(&p0, &q0) + b.point_dist(&p1, &q0);
                    rep.defect("h(q, pi q) = (q, q)", d, tol, || format!("{q0:?}"));
                }
                Err(e) => rep.error("h(q, pi q) = (q, q)", e),
            }
        }
        rep
    }
}

/// A semi-local map indexed by the D-type set U it is defined from.
pub struct Splitting<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> {
    pub bundle: B,
    pub subset: PairSubset<B>,
    pub map: SemiLocalMap<B, S, T>,
}

impl<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> Clone for Splitting<B, S, T> {
    fn clone(&self) -> Self {
        Self {
            bundle: self.bundle.clone(),
            subset: self.subset.clone(),
            map: self.map.clone(),
        }
    }
}

impl<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> Splitting<B, S, T> {
    pub fn apply(&self, v: &S::Value) -> Result<T::Value> {
        self.map.apply(v)
    }
}

/// s_L : U/G → (Q×G)/G
pub type LeftSplitting<B> = Splitting<B, GaugeBundle, ConjBundle>;
/// s_R : U″ → (Q×Q)/G
pub type RightSplitting<B> = Splitting<B, BasePairBundle, GaugeBundle>;
/// Φ : U/G → product bundle
pub type UMorphism<B> = Splitting<B, GaugeBundle, ProductBundle>;
/// Ψ : product bundle over U″ → (Q×Q)/G
pub type DMorphism<B> = Splitting<B, ProductBundle, GaugeBundle>;

fn gauge_domain<B: PrincipalBundle>(u: &PairSubset<B>) -> impl Fn(&Gauge<B>) -> bool + Send + Sync + 'static {
    let u = u.clone();
    move |a| u.contains(&a.rep0, &a.rep1)
}

fn pair_domain<B: PrincipalBundle>(b: &B, u: &PairSubset<B>) -> impl Fn(&BasePair<B>) -> bool + Send + Sync + 'static {
    let (b, u) = (b.clone(), u.clone());
    move |p| in_u_second(&b, &u, &p.0, &p.1).unwrap_or(false)
}

fn product_domain<B: PrincipalBundle>(b: &B, u: &PairSubset<B>) -> impl Fn(&ProductClass<B>) -> bool + Send + Sync + 'static {
    let (b, u) = (b.clone(), u.clone());
    move |v| in_u_prime(&b, &u, &v.0.q, &v.1).unwrap_or(false)
}

/// h(q₀, r) = (q₀, A(q₀, q₁)⁻¹ q₁) with q₁ = lift(r).
#[allow(non_snake_case)]
pub fn F_CH<B: PrincipalBundle>(a: &DiscreteConnection<B>) -> HorizontalLift<B> {
    let a2 = a.clone();
    HorizontalLift::new(format!("h[{}]", a.name), a.bundle.clone(), a.domain.clone(), move |q0, r| {
        let q1 = a2.bundle.lift(r)?;
        let g = a2.eval(q0, &q1)?;
        Ok((q0.clone(), a2.bundle.act(&g.inv(), &q1)))
    })
}

/// A(q₀, q₁) = κ(second slot of h(q₀, π q₁), q₁).
#[allow(non_snake_case)]
pub fn F_HC<B: PrincipalBundle>(h: &HorizontalLift<B>) -> DiscreteConnection<B> {
    let h2 = h.clone();
    let b = h.bundle.clone();
    DiscreteConnection::fallible(format!("A[{}]", h.name), h.bundle.clone(), h.domain.clone(), move |q0, q1| {
        let (_, p) = h2.apply(q0, &b.project(q1))?;
        b.kappa(&p, q1)
    })
}

/// s_L[q₀, q₁] = [q₀, A(q₀, q₁)].
#[allow(non_snake_case)]
pub fn F_CL<B: PrincipalBundle>(a: &DiscreteConnection<B>) -> LeftSplitting<B> {
    let a2 = a.clone();
    Splitting {
        bundle: a.bundle.clone(),
        subset: a.domain.clone(),
        map: SemiLocalMap::new(format!("s_L[{}]", a.name), gauge_domain(&a.domain), move |c: &Gauge<B>| {
            Ok(ConjClass::new(c.rep0.clone(), a2.eval(&c.rep0, &c.rep1)?))
        }),
    }
}

/// A(q₀, q₁) = κ₂(q₀, s_L[q₀, q₁]).
#[allow(non_snake_case)]
pub fn F_LC<B: PrincipalBundle>(s: &LeftSplitting<B>) -> DiscreteConnection<B> {
    let s2 = s.clone();
    DiscreteConnection::fallible(format!("A[{}]", s.map.name), s.bundle.clone(), s.subset.clone(), move |q0, q1| {
        let c = s2.apply(&GaugeClass::new(q0.clone(), q1.clone()))?;
        kappa2(&s2.bundle, q0, &c)
    })
}

/// s_R(r₀, r₁) = [h(lift r₀, r₁)].
#[allow(non_snake_case)]
pub fn F_HR<B: PrincipalBundle>(h: &HorizontalLift<B>) -> RightSplitting<B> {
    let h2 = h.clone();
    Splitting {
        bundle: h.bundle.clone(),
        subset: h.domain.clone(),
        map: SemiLocalMap::new(format!("s_R[{}]", h.name), pair_domain(&h.bundle, &h.domain), move |p: &BasePair<B>| {
            let (x, y) = h2.apply(&h2.bundle.lift(&p.0)?, &p.1)?;
            Ok(GaugeClass::new(x, y))
        }),
    }
}

/// h(q, r) = λ(q, s_R(π q, r)).
#[allow(non_snake_case)]
pub fn F_RH<B: PrincipalBundle>(s: &RightSplitting<B>) -> HorizontalLift<B> {
    let s2 = s.clone();
    HorizontalLift::new(format!("h[{}]", s.map.name), s.bundle.clone(), s.subset.clone(), move |q, r| {
        let a = s2.apply(&(s2.bundle.project(q), r.clone()))?;
        lambda(&s2.bundle, q, &a)
    })
}

/// Φ = (s_L, p₂∘F₂): [q₀, q₁] ↦ (s_L[q₀, q₁], π q₁).
#[allow(non_snake_case)]
pub fn F_LU<B: PrincipalBundle>(s: &LeftSplitting<B>) -> UMorphism<B> {
    let s2 = s.clone();
    Splitting {
        bundle: s.bundle.clone(),
        subset: s.subset.clone(),
        map: SemiLocalMap::new(format!("Phi[{}]", s.map.name), gauge_domain(&s.subset), move |a: &Gauge<B>| {
            Ok((s2.apply(a)?, s2.bundle.project(&a.rep1)))
        }),
    }
}

/// s_L = ŝ₁∘Φ.
#[allow(non_snake_case)]
pub fn F_UL<B: PrincipalBundle>(phi: &UMorphism<B>) -> LeftSplitting<B> {
    let p2 = phi.clone();
    Splitting {
        bundle: phi.bundle.clone(),
        subset: phi.subset.clone(),
        map: SemiLocalMap::new(format!("s_L[{}]", phi.map.name), gauge_domain(&phi.subset), move |a: &Gauge<B>| {
            Ok(p2.apply(a)?.0)
        }),
    }
}

/// Ψ([q, g], r) = [g acting on the second slot of λ(q, s_R(π q, r))].
#[allow(non_snake_case)]
pub fn F_RD<B: PrincipalBundle>(s: &RightSplitting<B>) -> DMorphism<B> {
    let s2 = s.clone();
    Splitting {
        bundle: s.bundle.clone(),
        subset: s.subset.clone(),
        map: SemiLocalMap::new(format!("Psi[{}]", s.map.name), product_domain(&s.bundle, &s.subset), move |v: &ProductClass<B>| {
            let b = &s2.bundle;
            let (c, r) = v;
            let a = s2.apply(&(b.project(&c.q), r.clone()))?;
            let (x, y) = lambda(b, &c.q, &a)?;
            Ok(GaugeClass::new(x, b.act(&c.g, &y)))
        }),
    }
}

/// s_R = Ψ∘ŝ₂: (r₀, r₁) ↦ Ψ([lift r₀, e], r₁).
#[allow(non_snake_case)]
pub fn F_DR<B: PrincipalBundle>(psi: &DMorphism<B>) -> RightSplitting<B> {
    let p2 = psi.clone();
    Splitting {
        bundle: psi.bundle.clone(),
        subset: psi.subset.clone(),
        map: SemiLocalMap::new(format!("s_R[{}]", psi.map.name), pair_domain(&psi.bundle, &psi.subset), move |p: &BasePair<B>| {
            let q = p2.bundle.lift(&p.0)?;
            p2.apply(&(ConjClass::new(q, B::Group::identity()), p.1.clone()))
        }),
    }
}

/// Φ_A[q₀, q₁] = ([q₀, A(q₀, q₁)], π q₁) and Ψ_A([q₀, w], r) = [q₀, w·p]
/// with (q₀, p) = h(q₀, r).
pub fn phi_psi_iso<B: PrincipalBundle>(a: &DiscreteConnection<B>) -> (UMorphism<B>, DMorphism<B>) {
    let a2 = a.clone();
    let phi = Splitting {
        bundle: a.bundle.clone(),
        subset: a.domain.clone(),
        map: SemiLocalMap::new(format!("Phi_A[{}]", a.name), gauge_domain(&a.domain), move |c: &Gauge<B>| {
            let g = a2.eval(&c.rep0, &c.rep1)?;
            Ok((ConjClass::new(c.rep0.clone(), g), a2.bundle.project(&c.rep1)))
        }),
    };
    let h = F_CH(a);
    let psi = Splitting {
        bundle: a.bundle.clone(),
        subset: a.domain.clone(),
        map: SemiLocalMap::new(format!("Psi_A[{}]", a.name), product_domain(&a.bundle, &a.domain), move |v: &ProductClass<B>| {
            let (c, r) = v;
            let (_, p) = h.apply(&c.q, r)?;
            Ok(GaugeClass::new(c.q.clone(), h.bundle.act(&c.g, &p)))
        }),
    };
    (phi, psi)
}

fn sample_gauge<B: PrincipalBundle>(b: &B, u: &PairSubset<B>, rng: &mut dyn RngCore) -> Gauge<B> {
    let (q0, q1) = u.sample_member(b, rng);
    GaugeClass::new(q0, q1)
}

fn sample_pair<B: PrincipalBundle>(b: &B, u: &PairSubset<B>, rng: &mut dyn RngCore) -> BasePair<B> {
    let (q0, q1) = u.sample_member(b, rng);
    (b.project(&q0), b.project(&q1))
}

fn sample_product<B: PrincipalBundle>(b: &B, u: &PairSubset<B>, rng: &mut dyn RngCore) -> ProductClass<B> {
    let (q0, q1) = u.sample_member(b, rng);
    (ConjClass::new(q0, B::Group::sample(rng)), b.project(&q1))
}

fn pair_dist<B: PrincipalBundle>(b: &B, x: &BasePair<B>, y: &BasePair<B>) -> f64 {
    b.base_dist(&x.0, &y.0) + b.base_dist(&x.1, &y.1)
}

/// Semi-local clauses plus s_L∘F₁ = id and representative independence.
pub fn check_left_splitting<B: PrincipalBundle>(s: &LeftSplitting<B>, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
    let b = &s.bundle;
    let mut rep = check_semilocal(b, &s.map, samples, tol, rng);
    for _ in 0..samples {
        let c = <ConjBundle as FbsObject<B>>::sample(b, rng);
        match s.apply(&f1(b, &c)) {
            Ok(back) => rep.defect("s_L o F1 = id", conj_dist(b, &back, &c), tol, || format!("{c:?}")),
            Err(e) => rep.error("s_L o F1 = id", e),
        }
        let a = sample_gauge(b, &s.subset, rng);
        let g = B::Group::sample(rng);
        let moved = GaugeClass::new(b.act(&g, &a.rep0), b.act(&g, &a.rep1));
        match (s.apply(&a), s.apply(&moved)) {
            (Ok(x), Ok(y)) => rep.defect("representative independence", conj_dist(b, &x, &y), tol, || format!("{a:?}")),
            (Err(e), _) | (_, Err(e)) => rep.error("representative independence", e),
        }
    }
    rep
}

/// Semi-local clauses plus F₂∘s_R = id.
pub fn check_right_splitting<B: PrincipalBundle>(s: &RightSplitting<B>, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
    let b = &s.bundle;
    let mut rep = check_semilocal(b, &s.map, samples, tol, rng);
    for _ in 0..samples {
        let p = sample_pair(b, &s.subset, rng);
        match s.apply(&p) {
            Ok(a) => rep.defect("F2 o s_R = id", pair_dist(b, &f2(b, &a), &p), tol, || format!("{p:?}")),
            Err(e) => rep.error("F2 o s_R = id", e),
        }
    }
    rep
}

/// Semi-local clauses plus Φ∘F₁ = F̂₁ and F̂₂∘Φ = F₂.
pub fn check_u_morphism<B: PrincipalBundle>(phi: &UMorphism<B>, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
    let b = &phi.bundle;
    let mut rep = check_semilocal(b, &phi.map, samples, tol, rng);
    for _ in 0..samples {
        let c = <ConjBundle as FbsObject<B>>::sample(b, rng);
        match phi.apply(&f1(b, &c)) {
            Ok(v) => {
                let hat = (c.clone(), b.project(&c.q));
                rep.defect("Phi o F1 = hatF1", ProductBundle::dist(b, &v, &hat), tol, || format!("{c:?}"))
            }
            Err(e) => rep.error("Phi o F1 = hatF1", e),
        }
        let a = sample_gauge(b, &phi.subset, rng);
        match phi.apply(&a) {
            Ok(v) => {
                let hat = (b.project(&v.0.q), v.1.clone());
                rep.defect("hatF2 o Phi = F2", pair_dist(b, &hat, &f2(b, &a)), tol, || format!("{a:?}"))
            }
            Err(e) => rep.error("hatF2 o Phi = F2", e),
        }
    }
    rep
}

/// Semi-local clauses plus Ψ∘F̂₁ = F₁ and F₂∘Ψ = F̂₂.
pub fn check_d_morphism<B: PrincipalBundle>(psi: &DMorphism<B>, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
    let b = &psi.bundle;
    let mut rep = check_semilocal(b, &psi.map, samples, tol, rng);
    for _ in 0..samples {
        let c = <ConjBundle as FbsObject<B>>::sample(b, rng);
        match psi.apply(&(c.clone(), b.project(&c.q))) {
            Ok(a) => rep.defect("Psi o hatF1 = F1", gauge_dist(b, &a, &f1(b, &c)), tol, || format!("{c:?}")),
            Err(e) => rep.error("Psi o hatF1 = F1", e),
        }
        let v = sample_product(b, &psi.subset, rng);
        match psi.apply(&v) {
            Ok(a) => {
                let hat = (b.project(&v.0.q), v.1.clone());
                rep.defect("F2 o Psi = hatF2", pair_dist(b, &f2(b, &a), &hat), tol, || format!("{v:?}"))
            }
            Err(e) => rep.error("F2 o Psi = hatF2", e),
        }
    }
    rep
}

/// Whether s̃_L(q₀, q₁) = (q₀, κ₂(q₀, s_L[q₀, q₁])) satisfies
/// s̃_L(q₀, g q₁) = (q₀, g · s̃_L(q₀, q₁)₂). Passes exactly on splittings that
/// come from connections.
pub fn check_left_splitting_equivariance<B: PrincipalBundle>(
    s: &LeftSplitting<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &s.bundle;
    let mut rep = CheckReport::new(format!("equivariance of the lift of {}", s.map.name));
    let lifted = |q0: &B::Point, q1: &B::Point| -> Result<B::Group> {
        kappa2(b, q0, &s.apply(&GaugeClass::new(q0.clone(), q1.clone()))?)
    };
    for i in 0..samples {
        let (q0, q1) = if i % 8 == 0 {
            let q = b.sample_point(rng);
            (q.clone(), q)
        } else {
            s.subset.sample_member(b, rng)
        };
        let g = B::Group::sample(rng);
        match (lifted(&q0, &b.act(&g, &q1)), lifted(&q0, &q1)) {
            (Ok(lhs), Ok(a)) => rep.defect("second-slot equivariance", lhs.distance(&g.mul(&a)), tol, || {
                format!("({q0:?}, {q1:?}), g = {g:?}")
            }),
            (Err(e), _) | (_, Err(e)) => rep.error("second-slot equivariance", e),
        }
    }
    rep
}

/// Whether Ψ̂(q, g, r) = λ(q, Ψ([q, g], r)) has second slot g · Ψ̂(q, e, r)₂.
/// Passes exactly on the image of F_RD.
pub fn check_d_morphism_equivariance<B: PrincipalBundle>(
    psi: &DMorphism<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &psi.bundle;
    let mut rep = CheckReport::new(format!("equivariance of the lift of {}", psi.map.name));
    let lifted = |q: &B::Point, g: &B::Group, r: &B::Base| -> Result<B::Point> {
        let a = psi.apply(&(ConjClass::new(q.clone(), g.clone()), r.clone()))?;
        Ok(lambda(b, q, &a)?.1)
    };
    for _ in 0..samples {
        let (q, q1) = psi.subset.sample_member(b, rng);
        let r = b.project(&q1);
        let g = B::Group::sample(rng);
        match (lifted(&q, &g, &r), lifted(&q, &B::Group::identity(), &r)) {
            (Ok(x), Ok(y)) => rep.defect("group-slot equivariance", b.point_dist(&x, &b.act(&g, &y)), tol, || {
                format!("q = {q:?}, g = {g:?}, r = {r:?}")
            }),
            (Err(e), _) | (_, Err(e)) => rep.error("group-slot equivariance", e),
        }
    }
    rep
}

/// All round trips between connections, lifts, splittings and Φ/Ψ at sampled points.
pub fn check_roundtrips<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &a.bundle;
    let u = &a.domain;
    let mut rep = CheckReport::new(format!("round trips for {}", a.name));

    let h = F_CH(a);
    let a_hc = F_HC(&h);
    let s_l = F_CL(a);
    let a_lc = F_LC(&s_l);
    let s_l_back = F_UL(&F_LU(&s_l));
    let s_r = F_HR(&h);
    let h_back = F_RH(&s_r);
    let s_r_back = F_DR(&F_RD(&s_r));
    let s_r_again = F_HR(&h_back);
    let a_full = F_HC(&h_back);
    let (phi, psi) = phi_psi_iso(a);

    for _ in 0..samples {
        let (q0, q1) = u.sample_member(b, rng);
        let w = || format!("({q0:?}, {q1:?})");
        let base = a.eval(&q0, &q1);
        let cmp = |rep: &mut CheckReport, clause: &str, other: Result<B::Group>| match (&base, other) {
            (Ok(x), Ok(y)) => rep.defect(clause, x.distance(&y), tol, w),
            (Err(e), _) => rep.error(clause, e),
            (_, Err(e)) => rep.error(clause, e),
        };
        cmp(&mut rep, "F_HC o F_CH", a_hc.eval(&q0, &q1));
        cmp(&mut rep, "F_LC o F_CL", a_lc.eval(&q0, &q1));
        cmp(&mut rep, "F_HC o F_RH o F_HR o F_CH", a_full.eval(&q0, &q1));

        let cls = GaugeClass::new(q0.clone(), q1.clone());
        match (s_l.apply(&cls), s_l_back.apply(&cls)) {
            (Ok(x), Ok(y)) => rep.defect("F_UL o F_LU", conj_dist(b, &x, &y), tol, w),
            (Err(e), _) | (_, Err(e)) => rep.error("F_UL o F_LU", e),
        }
        match phi.apply(&cls).and_then(|v| psi.apply(&v)) {
            Ok(back) => rep.defect("Psi_A o Phi_A", gauge_dist(b, &back, &cls), tol, w),
            Err(e) => rep.error("Psi_A o Phi_A", e),
        }

        let v = sample_product(b, u, rng);
        match psi.apply(&v).and_then(|x| phi.apply(&x)) {
            Ok(back) => rep.defect("Phi_A o Psi_A", ProductBundle::dist(b, &back, &v), tol, || format!("{v:?}")),
            Err(e) => rep.error("Phi_A o Psi_A", e),
        }

        let p = (b.project(&q0), b.project(&q1));
        match (s_r.apply(&p), s_r_back.apply(&p), s_r_again.apply(&p)) {
            (Ok(x), Ok(y), Ok(z)) => {
                rep.defect("F_DR o F_RD", gauge_dist(b, &x, &y), tol, || format!("{p:?}"));
                rep.defect("F_HR o F_RH", gauge_dist(b, &x, &z), tol, || format!("{p:?}"));
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => rep.error("F_DR o F_RD", e),
        }

        let r = b.project(&q1);
        match (h.apply(&q0, &r), h_back.apply(&q0, &r)) {
            (Ok(x), Ok(y)) => rep.defect("F_RH o F_HR", b.point_dist(&x.1, &y.1), tol, w),
            (Err(e), _) | (_, Err(e)) => rep.error("F_RH o F_HR", e),
        }

        // Hor = {A = e} is the image of h.
        if let Ok((_, p1)) = h.apply(&q0, &r) {
            match a.eval(&q0, &p1) {
                Ok(g) => rep.defect("A vanishes on h", g.size(), tol, w),
                Err(e) => rep.error("A vanishes on h", e),
            }
        }
    }
    rep
}
