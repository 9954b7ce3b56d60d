//! Fiber bundles with a section over Q/G, semi-local morphisms, and the
//! discrete Atiyah sequence (Q×G)/G → (Q×Q)/G → Q/G × Q/G.

use crate::bundles::{in_u_second, PairSubset, PrincipalBundle};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::quotients::{
    conj_dist, gauge_dist, sigma_conj, sigma_gauge, Conj, ConjClass, Gauge, GaugeClass,
};
use crate::report::CheckReport;
use rand::RngCore;
use std::fmt::{self, Debug};
use std::marker::PhantomData;
use std::sync::Arc;

/// The four value kinds that occur as objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbsKind {
    /// (Q×G)/G
    Conj,
    /// (Q×Q)/G
    Gauge,
    /// Q/G × Q/G
    BasePair,
    /// (Q×G)/G ×_{Q/G} (Q/G × Q/G), stored as (class, second base point)
    Product,
}

pub type BasePair<B> = (<B as PrincipalBundle>::Base, <B as PrincipalBundle>::Base);
pub type ProductClass<B> = (Conj<B>, <B as PrincipalBundle>::Base);

/// A fiber bundle over Q/G with a distinguished section.
pub trait FbsObject<B: PrincipalBundle>: Send + Sync + 'static {
    type Value: Clone + Debug + Send + Sync + 'static;
    const KIND: FbsKind;
    fn project(b: &B, v: &Self::Value) -> B::Base;
    fn section(b: &B, r: &B::Base) -> Result<Self::Value>;
    fn dist(b: &B, x: &Self::Value, y: &Self::Value) -> f64;
    fn sample(b: &B, rng: &mut dyn RngCore) -> Self::Value;
}

pub struct ConjBundle;
pub struct GaugeBundle;
pub struct BasePairBundle;
pub struct ProductBundle;

impl<B: PrincipalBundle> FbsObject<B> for ConjBundle {
    type Value = Conj<B>;
    const KIND: FbsKind = FbsKind::Conj;
    fn project(b: &B, v: &Conj<B>) -> B::Base {
        b.project(&v.q)
    }
    fn section(b: &B, r: &B::Base) -> Result<Conj<B>> {
        sigma_conj(b, r)
    }
    fn dist(b: &B, x: &Conj<B>, y: &Conj<B>) -> f64 {
        conj_dist(b, x, y)
    }
    fn sample(b: &B, rng: &mut dyn RngCore) -> Conj<B> {
        ConjClass::new(b.sample_point(rng), B::Group::sample(rng))
    }
}

impl<B: PrincipalBundle> FbsObject<B> for GaugeBundle {
    type Value = Gauge<B>;
    const KIND: FbsKind = FbsKind::Gauge;
    fn project(b: &B, v: &Gauge<B>) -> B::Base {
        b.project(&v.rep0)
    }
    fn section(b: &B, r: &B::Base) -> Result<Gauge<B>> {
        sigma_gauge(b, r)
    }
    fn dist(b: &B, x: &Gauge<B>, y: &Gauge<B>) -> f64 {
        gauge_dist(b, x, y)
    }
    fn sample(b: &B, rng: &mut dyn RngCore) -> Gauge<B> {
        GaugeClass::new(b.sample_point(rng), b.sample_point(rng))
    }
}

impl<B: PrincipalBundle> FbsObject<B> for BasePairBundle {
    type Value = BasePair<B>;
    const KIND: FbsKind = FbsKind::BasePair;
    fn project(_: &B, v: &BasePair<B>) -> B::Base {
        v.0.clone()
    }
    fn section(_: &B, r: &B::Base) -> Result<BasePair<B>> {
        Ok((r.clone(), r.clone()))
    }
    fn dist(b: &B, x: &BasePair<B>, y: &BasePair<B>) -> f64 {
        b.base_dist(&x.0, &y.0) + b.base_dist(&x.1, &y.1)
    }
    fn sample(b: &B, rng: &mut dyn RngCore) -> BasePair<B> {
        (b.sample_base(rng), b.sample_base(rng))
    }
}

impl<B: PrincipalBundle> FbsObject<B> for ProductBundle {
    type Value = ProductClass<B>;
    const KIND: FbsKind = FbsKind::Product;
    fn project(b: &B, v: &ProductClass<B>) -> B::Base {
        b.project(&v.0.q)
    }
    fn section(b: &B, r: &B::Base) -> Result<ProductClass<B>> {
        Ok((sigma_conj(b, r)?, r.clone()))
    }
    fn dist(b: &B, x: &ProductClass<B>, y: &ProductClass<B>) -> f64 {
        conj_dist(b, &x.0, &y.0) + b.base_dist(&x.1, &y.1)
    }
    fn sample(b: &B, rng: &mut dyn RngCore) -> ProductClass<B> {
        (
            ConjClass::new(b.sample_point(rng), B::Group::sample(rng)),
            b.sample_base(rng),
        )
    }
}

type Pred<V> = Arc<dyn Fn(&V) -> bool + Send + Sync>;
type Eval<V, W> = Arc<dyn Fn(&V) -> Result<W> + Send + Sync>;
type Arrow<V, W> = Arc<dyn Fn(&V) -> W + Send + Sync>;
type Kinds<B, S, T> = PhantomData<fn() -> (B, S, T)>;

/// A map S → T defined on a domain containing the section image.
pub struct SemiLocalMap<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> {
    pub name: String,
    domain: Pred<S::Value>,
    eval: Eval<S::Value, T::Value>,
    _kinds: Kinds<B, S, T>,
}

impl<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> Clone for SemiLocalMap<B, S, T> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            domain: self.domain.clone(),
            eval: self.eval.clone(),
            _kinds: PhantomData,
        }
    }
}

impl<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> Debug for SemiLocalMap<B, S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemiLocalMap({}: {:?} -> {:?})", self.name, S::KIND, T::KIND)
    }
}

impl<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>> SemiLocalMap<B, S, T> {
    /// `eval` is only called on values accepted by `domain`.
    pub fn new(
        name: impl Into<String>,
        domain: impl Fn(&S::Value) -> bool + Send + Sync + 'static,
        eval: impl Fn(&S::Value) -> Result<T::Value> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain: Arc::new(domain),
            eval: Arc::new(eval),
            _kinds: PhantomData,
        }
    }

    pub fn contains(&self, v: &S::Value) -> bool {
        (self.domain)(v)
    }

    pub fn apply(&self, v: &S::Value) -> Result<T::Value> {
        if !self.contains(v) {
            return Err(Error::DomainViolation(format!("{} at {v:?}", self.name)));
        }
        (self.eval)(v)
    }

    /// A sampled member of the domain.
    pub fn sample_domain(&self, b: &B, rng: &mut dyn RngCore) -> Option<S::Value> {
        (0..32).map(|_| S::sample(b, rng)).find(|v| self.contains(v))
    }
}

/// Checks φ₂∘Φ = φ₁ on the domain and Φ∘σ₁ = σ₂ on the base.
pub fn check_semilocal<B: PrincipalBundle, S: FbsObject<B>, T: FbsObject<B>>(
    b: &B,
    map: &SemiLocalMap<B, S, T>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let mut rep = CheckReport::new(format!("semi-local {}", map.name));
    for _ in 0..samples {
        match map.sample_domain(b, rng) {
            Some(v) => match map.apply(&v) {
                Ok(w) => {
                    let d = b.base_dist(&T::project(b, &w), &S::project(b, &v));
                    rep.defect("commutes with projections", d, tol, || format!("{v:?}"));
                }
                Err(e) => rep.error("commutes with projections", e),
            },
            None => rep.check("commutes with projections", false, || {
                "no domain member found".into()
            }),
        }
        let r = b.sample_base(rng);
        let (s1, s2) = match (S::section(b, &r), T::section(b, &r)) {
            (Ok(s1), Ok(s2)) => (s1, s2),
            (Err(e), _) | (_, Err(e)) => {
                rep.error("preserves sections", e);
                continue;
            }
        };
        rep.check("section image in domain", map.contains(&s1), || format!("{r:?}"));
        if let Ok(w) = map.apply(&s1) {
            rep.defect("preserves sections", T::dist(b, &w, &s2), tol, || format!("{r:?}"));
        }
    }
    rep.untested("domain is open");
    rep
}

/// F₁[q, g] = [q, g·q]
pub fn f1<B: PrincipalBundle>(b: &B, c: &Conj<B>) -> Gauge<B> {
    GaugeClass::new(c.q.clone(), b.act(&c.g, &c.q))
}

/// F₂[q₀, q₁] = (π q₀, π q₁)
pub fn f2<B: PrincipalBundle>(b: &B, a: &Gauge<B>) -> BasePair<B> {
    (b.project(&a.rep0), b.project(&a.rep1))
}

/// F₁ as a semi-local morphism.
pub fn f1_map<B: PrincipalBundle>(b: &B) -> SemiLocalMap<B, ConjBundle, GaugeBundle> {
    let b = b.clone();
    SemiLocalMap::new("F1", |_| true, move |c| Ok(f1(&b, c)))
}

/// F₂ as a semi-local morphism.
pub fn f2_map<B: PrincipalBundle>(b: &B) -> SemiLocalMap<B, GaugeBundle, BasePairBundle> {
    let b = b.clone();
    SemiLocalMap::new("F2", |_| true, move |a| Ok(f2(&b, a)))
}

/// Element (c, (r₀, r₁)) of the fiber product with π(c) = r₀.
pub type FiberProductValue<B> = (Conj<B>, BasePair<B>);

/// The fiber product sequence of the conjugate bundle and the base pair bundle,
/// with its identification with [`ProductBundle`] values.
pub struct FiberProduct<B: PrincipalBundle> {
    pub bundle: B,
}

impl<B: PrincipalBundle> FiberProduct<B> {
    pub fn new(bundle: B) -> Self {
        Self { bundle }
    }

    /// c ↦ (c, σ₂(φ₁(c)))
    pub fn fx1(&self, c: &Conj<B>) -> FiberProductValue<B> {
        let r = self.bundle.project(&c.q);
        (c.clone(), (r.clone(), r))
    }

    /// (c, p) ↦ p
    pub fn fx2(&self, v: &FiberProductValue<B>) -> BasePair<B> {
        v.1.clone()
    }

    /// (c, p) ↦ c
    pub fn sx1(&self, v: &FiberProductValue<B>) -> Conj<B> {
        v.0.clone()
    }

    /// p ↦ (σ₁(φ₂(p)), p)
    pub fn sx2(&self, p: &BasePair<B>) -> Result<FiberProductValue<B>> {
        Ok((sigma_conj(&self.bundle, &p.0)?, p.clone()))
    }

    /// (c, r) ↦ (c, (π c, r))
    pub fn theta(&self, v: &ProductClass<B>) -> FiberProductValue<B> {
        (v.0.clone(), (self.bundle.project(&v.0.q), v.1.clone()))
    }

    pub fn theta_inv(&self, v: &FiberProductValue<B>) -> ProductClass<B> {
        (v.0.clone(), (v.1).1.clone())
    }

    /// c ↦ (c, π c)
    pub fn hat_f1(&self, c: &Conj<B>) -> ProductClass<B> {
        (c.clone(), self.bundle.project(&c.q))
    }

    /// (c, r) ↦ (π c, r)
    pub fn hat_f2(&self, v: &ProductClass<B>) -> BasePair<B> {
        (self.bundle.project(&v.0.q), v.1.clone())
    }

    /// (c, r) ↦ c
    pub fn hat_s1(&self, v: &ProductClass<B>) -> Conj<B> {
        v.0.clone()
    }

    /// (r₀, r₁) ↦ ([lift r₀, e], r₁)
    pub fn hat_s2(&self, p: &BasePair<B>) -> Result<ProductClass<B>> {
        Ok((sigma_conj(&self.bundle, &p.0)?, p.1.clone()))
    }

    /// The four relations of the product sequence, for both presentations.
    pub fn check_relations(&self, samples: usize, tol: f64, rng: &mut dyn RngCore) -> CheckReport {
        let b = &self.bundle;
        let mut rep = CheckReport::new("fiber product relations");
        for _ in 0..samples {
            let c = <ConjBundle as FbsObject<B>>::sample(b, rng);
            let p = <BasePairBundle as FbsObject<B>>::sample(b, rng);
            let w = || format!("{c:?}, {p:?}");
            let pair_dist = |x: &BasePair<B>, y: &BasePair<B>| b.base_dist(&x.0, &y.0) + b.base_dist(&x.1, &y.1);

            rep.defect("sx1 o Fx1 = id", conj_dist(b, &self.sx1(&self.fx1(&c)), &c), tol, w);
            match self.sx2(&p) {
                Ok(v) => rep.defect("Fx2 o sx2 = id", pair_dist(&self.fx2(&v), &p), tol, w),
                Err(e) => rep.error("Fx2 o sx2 = id", e),
            }
            let r = b.project(&c.q);
            rep.defect("Fx2 o Fx1 = sigma2 o phi1", pair_dist(&self.fx2(&self.fx1(&c)), &(r.clone(), r.clone())), tol, w);
            if let Ok(v) = self.sx2(&p) {
                let s = sigma_conj(b, &p.0).expect("lift succeeded above");
                rep.defect("sx1 o sx2 = sigma1 o phi2", conj_dist(b, &self.sx1(&v), &s), tol, w);
            }

            rep.defect("hat_s1 o hatF1 = id", conj_dist(b, &self.hat_s1(&self.hat_f1(&c)), &c), tol, w);
            match self.hat_s2(&p) {
                Ok(v) => rep.defect("hatF2 o hat_s2 = id", pair_dist(&self.hat_f2(&v), &p), tol, w),
                Err(e) => rep.error("hatF2 o hat_s2 = id", e),
            }
            rep.defect("hatF2 o hatF1 = (pi, pi)", pair_dist(&self.hat_f2(&self.hat_f1(&c)), &(r.clone(), r)), tol, w);
            if let Ok(v) = self.hat_s2(&p) {
                let s = sigma_conj(b, &p.0).expect("lift succeeded above");
                rep.defect("hat_s1 o hat_s2 = sigma_conj o p1", conj_dist(b, &self.hat_s1(&v), &s), tol, w);
            }

            let v = (c.clone(), p.1.clone());
            let back = self.theta_inv(&self.theta(&v));
            rep.defect("theta invertible", conj_dist(b, &back.0, &v.0) + b.base_dist(&back.1, &v.1), tol, w);
        }
        rep
    }
}

/// A candidate sequence (Q×G)/G → (Q×Q)/G → Q/G × Q/G.
pub struct FbsSequence<B: PrincipalBundle> {
    pub f1: Arrow<Conj<B>, Gauge<B>>,
    pub f2: Arrow<Gauge<B>, BasePair<B>>,
}

impl<B: PrincipalBundle> FbsSequence<B> {
    /// The discrete Atiyah sequence.
    pub fn atiyah(b: &B) -> Self {
        let b1 = b.clone();
        let b2 = b.clone();
        Self {
            f1: Arc::new(move |c| f1(&b1, c)),
            f2: Arc::new(move |a| f2(&b2, a)),
        }
    }
}

/// Samples injectivity of F₁, surjectivity of F₂ onto U″ and im F₁ = ker F₂
/// with constructive preimages.
pub fn check_fbs_extension<B: PrincipalBundle>(
    b: &B,
    seq: &FbsSequence<B>,
    region: &PairSubset<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let mut rep = CheckReport::new("fbs extension");
    let pair_dist = |x: &BasePair<B>, y: &BasePair<B>| b.base_dist(&x.0, &y.0) + b.base_dist(&x.1, &y.1);
    for _ in 0..samples {
        // Injectivity on classes over one base point and on unrelated classes.
        let c1 = <ConjBundle as FbsObject<B>>::sample(b, rng);
        let moved = b.act(&B::Group::sample(rng), &c1.q);
        let c2 = ConjClass::new(moved, B::Group::sample(rng));
        let c3 = <ConjBundle as FbsObject<B>>::sample(b, rng);
        for other in [&c2, &c3] {
            if conj_dist(b, &c1, other) > 1e3 * tol {
                let d = gauge_dist(b, &(seq.f1)(&c1), &(seq.f1)(other));
                rep.check("F1 injective", d > tol, || format!("{c1:?} and {other:?}"));
            }
        }
        let g = B::Group::sample(rng);
        let c1_moved = ConjClass::new(b.act(&g, &c1.q), g.conjugate(&c1.g));
        let d = gauge_dist(b, &(seq.f1)(&c1), &(seq.f1)(&c1_moved));
        rep.defect("F1 well defined", d, tol, || format!("{c1:?}"));

        // Every F1 image is vertical.
        let img = (seq.f1)(&c1);
        let (r0, r1) = (seq.f2)(&img);
        rep.defect("im F1 in ker F2", b.base_dist(&r0, &r1), tol, || format!("{c1:?}"));

        // Every vertical class has the preimage [q, κ(q, q')].
        let q = b.sample_point(rng);
        let vq = b.act(&B::Group::sample(rng), &q);
        let vertical = GaugeClass::new(q.clone(), vq.clone());
        let (s0, s1) = (seq.f2)(&vertical);
        rep.defect("vertical classes in ker F2", b.base_dist(&s0, &s1), tol, || format!("{vertical:?}"));
        match b.kappa(&q, &vq) {
            Ok(k) => {
                let pre = ConjClass::new(q.clone(), k);
                let d = gauge_dist(b, &(seq.f1)(&pre), &vertical);
                rep.defect("ker F2 in im F1", d, tol, || format!("{vertical:?}"));
            }
            Err(e) => rep.error("ker F2 in im F1", e),
        }

        // A generic class lies in ker F2 exactly when it has a preimage.
        let a = <GaugeBundle as FbsObject<B>>::sample(b, rng);
        let (a0, a1) = (seq.f2)(&a);
        let in_ker = b.base_dist(&a0, &a1) <= tol;
        let has_pre = b
            .kappa(&a.rep0, &a.rep1)
            .map(|k| gauge_dist(b, &(seq.f1)(&ConjClass::new(a.rep0.clone(), k)), &a) <= tol)
            .unwrap_or(false);
        rep.check("ker F2 = im F1 at generic classes", in_ker == has_pre, || format!("{a:?}"));

        let a_moved = GaugeClass::new(b.act(&g, &a.rep0), b.act(&g, &a.rep1));
        rep.defect("F2 well defined", pair_dist(&(seq.f2)(&a), &(seq.f2)(&a_moved)), tol, || format!("{a:?}"));

        // Surjectivity onto U″ with preimage [lift r0, lift r1].
        let p = <BasePairBundle as FbsObject<B>>::sample(b, rng);
        match in_u_second(b, region, &p.0, &p.1) {
            Ok(true) => match (b.lift(&p.0), b.lift(&p.1)) {
                (Ok(l0), Ok(l1)) => {
                    let d = pair_dist(&(seq.f2)(&GaugeClass::new(l0, l1)), &p);
                    rep.defect("F2 onto U''", d, tol, || format!("{p:?}"));
                }
                (Err(e), _) | (_, Err(e)) => rep.error("F2 onto U''", e),
            },
            Ok(false) => {}
            Err(e) => rep.error("F2 onto U''", e),
        }
    }
    rep.touch("F2 onto U''");
    rep.untested("F1 is an embedding and F2 a submersion");
    rep
}
