//! Local Lie groupoids: partial multiplication on an explicit set G_m of
//! composable pairs, axiom and morphism checkers, the shipped instances,
//! restriction to open subsets, kernels and images, and extensions.

use crate::bundles::{in_u_second, PairSubset, PrincipalBundle};
use crate::error::{Error, Result};
use crate::fbs::{f1, f2};
use crate::groups::Group;
use crate::quotients::{
    act_conj, act_diag, conj_dist, gauge_dist, sigma_conj, sigma_gauge, Conj, ConjClass, Gauge,
    GaugeClass,
};
use crate::report::CheckReport;
use rand::RngCore;
use std::fmt::{self, Debug};
use std::sync::Arc;

/// Bounds shared by groupoid elements and base points.
pub trait Value: Clone + Debug + Send + Sync + 'static {}
impl<T: Clone + Debug + Send + Sync + 'static> Value for T {}

pub type Map<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;
pub type Map2<A, B> = Arc<dyn Fn(&A, &A) -> B + Send + Sync>;
pub type Sampler<T> = Arc<dyn Fn(&mut dyn RngCore) -> T + Send + Sync>;
pub type SamplerFrom<M, E> = Arc<dyn Fn(&M, &mut dyn RngCore) -> E + Send + Sync>;
pub type Resample<E> = Arc<dyn Fn(&E, &mut dyn RngCore) -> E + Send + Sync>;

/// A local Lie groupoid G ⇉ M.
///
/// `product` is the raw multiplication; [`LocalGroupoid::multiply`] only
/// calls it on pairs accepted by [`LocalGroupoid::gm_member`].
pub struct LocalGroupoid<E, M> {
    pub name: String,
    pub totally_intransitive: bool,
    /// G_m = G₂.
    pub fully_multiplicable: bool,
    pub alpha: Map<E, M>,
    pub beta: Map<E, M>,
    pub epsilon: Map<M, E>,
    pub inverse: Map<E, E>,
    pub product: Map2<E, Result<E>>,
    /// Extra condition on composable pairs defining G_m inside G₂.
    pub gm: Map2<E, bool>,
    /// Membership in the element set.
    pub contains: Map<E, bool>,
    pub elem_dist: Map2<E, f64>,
    pub base_dist: Map2<M, f64>,
    pub sample_base: Sampler<M>,
    /// A random element with the given source.
    pub sample_from: SamplerFrom<M, E>,
    /// Another representative of the same element, when elements are classes.
    pub resample: Option<Resample<E>>,
    /// Structural tolerance for deciding β(a) = α(b).
    pub tol: f64,
}

impl<E, M> Clone for LocalGroupoid<E, M> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            totally_intransitive: self.totally_intransitive,
            fully_multiplicable: self.fully_multiplicable,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            epsilon: self.epsilon.clone(),
            inverse: self.inverse.clone(),
            product: self.product.clone(),
            gm: self.gm.clone(),
            contains: self.contains.clone(),
            elem_dist: self.elem_dist.clone(),
            base_dist: self.base_dist.clone(),
            sample_base: self.sample_base.clone(),
            sample_from: self.sample_from.clone(),
            resample: self.resample.clone(),
            tol: self.tol,
        }
    }
}

impl<E, M> Debug for LocalGroupoid<E, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalGroupoid({})", self.name)
    }
}

impl<E: Value, M: Value> LocalGroupoid<E, M> {
    pub fn alpha(&self, g: &E) -> M {
        (self.alpha)(g)
    }
    pub fn beta(&self, g: &E) -> M {
        (self.beta)(g)
    }
    pub fn epsilon(&self, m: &M) -> E {
        (self.epsilon)(m)
    }
    pub fn inverse(&self, g: &E) -> E {
        (self.inverse)(g)
    }
    pub fn contains(&self, g: &E) -> bool {
        (self.contains)(g)
    }
    pub fn dist(&self, a: &E, b: &E) -> f64 {
        (self.elem_dist)(a, b)
    }
    pub fn base_dist(&self, a: &M, b: &M) -> f64 {
        (self.base_dist)(a, b)
    }

    /// β(a) = α(b) within the structural tolerance.
    pub fn composable(&self, a: &E, b: &E) -> bool {
        self.base_dist(&self.beta(a), &self.alpha(b)) <= self.tol
    }

    /// (a, b) ∈ G_m.
    pub fn gm_member(&self, a: &E, b: &E) -> bool {
        self.contains(a) && self.contains(b) && self.composable(a, b) && (self.gm)(a, b)
    }

    pub fn multiply(&self, a: &E, b: &E) -> Result<E> {
        if !self.gm_member(a, b) {
            return Err(Error::CompositionUndefined(format!(
                "{}: ({a:?}, {b:?}) not in G_m",
                self.name
            )));
        }
        (self.product)(a, b)
    }

    pub fn sample_element(&self, rng: &mut dyn RngCore) -> E {
        let m = (self.sample_base)(rng);
        (self.sample_from)(&m, rng)
    }

    /// An element with source `m`.
    pub fn sample_from(&self, m: &M, rng: &mut dyn RngCore) -> E {
        (self.sample_from)(m, rng)
    }

    /// A pair in G_m, if found.
    pub fn sample_gm_pair(&self, rng: &mut dyn RngCore) -> Option<(E, E)> {
        for _ in 0..32 {
            let a = self.sample_element(rng);
            let b = self.sample_from(&self.beta(&a), rng);
            if self.gm_member(&a, &b) {
                return Some((a, b));
            }
        }
        None
    }
}

/// Checks clauses (1)–(5) of a local Lie groupoid and the basic identities.
pub fn check_axioms<E: Value, M: Value>(
    g: &LocalGroupoid<E, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let mut rep = CheckReport::new(format!("groupoid axioms for {}", g.name));
    for _ in 0..samples {
        let m = (g.sample_base)(rng);
        let e = g.epsilon(&m);
        let d = g.base_dist(&g.alpha(&e), &m).max(g.base_dist(&g.beta(&e), &m));
        rep.defect("(1) alpha o eps = id = beta o eps", d, tol, || format!("{m:?}"));
        rep.defect("eps(m)^-1 = eps(m)", g.dist(&g.inverse(&e), &e), tol, || format!("{m:?}"));

        let x = g.sample_element(rng);
        rep.check("sampled elements are members", g.contains(&x), || format!("{x:?}"));
        let xi = g.inverse(&x);
        let d = g.base_dist(&g.alpha(&xi), &g.beta(&x)).max(g.base_dist(&g.beta(&xi), &g.alpha(&x)));
        rep.defect("alpha(g^-1) = beta(g)", d, tol, || format!("{x:?}"));
        if g.totally_intransitive {
            rep.defect("alpha = beta", g.base_dist(&g.alpha(&x), &g.beta(&x)), tol, || format!("{x:?}"));
        }

        // (3) identities
        let ea = g.epsilon(&g.alpha(&x));
        let eb = g.epsilon(&g.beta(&x));
        match (g.multiply(&ea, &x), g.multiply(&x, &eb)) {
            (Ok(l), Ok(r)) => rep.defect("(3) identity laws", g.dist(&l, &x).max(g.dist(&r, &x)), tol, || format!("{x:?}")),
            (Err(e), _) | (_, Err(e)) => rep.error("(3) identity laws", e),
        }

        // (4) inverses
        match (g.multiply(&x, &xi), g.multiply(&xi, &x)) {
            (Ok(l), Ok(r)) => rep.defect("(4) inverse laws", g.dist(&l, &ea).max(g.dist(&r, &eb)), tol, || format!("{x:?}")),
            (Err(e), _) | (_, Err(e)) => rep.error("(4) inverse laws", e),
        }

        // (2) and multiplication identities on a pair in G_m
        if let Some((a, b)) = g.sample_gm_pair(rng) {
            let ab = g.multiply(&a, &b);
            let (ai, bi) = (g.inverse(&a), g.inverse(&b));
            rep.check("(2) inverse pair in G_m", g.gm_member(&bi, &ai), || format!("({a:?}, {b:?})"));
            match (&ab, g.multiply(&bi, &ai)) {
                (Ok(ab), Ok(p)) => {
                    rep.defect("(2) (ab)^-1 = b^-1 a^-1", g.dist(&p, &g.inverse(ab)), tol, || format!("({a:?}, {b:?})"));
                    let d = g.base_dist(&g.alpha(ab), &g.alpha(&a)).max(g.base_dist(&g.beta(ab), &g.beta(&b)));
                    rep.defect("alpha(ab) = alpha(a), beta(ab) = beta(b)", d, tol, || format!("({a:?}, {b:?})"));
                    rep.check("products are members", g.contains(ab), || format!("({a:?}, {b:?})"));
                }
                (Err(e), _) => rep.error("(2) (ab)^-1 = b^-1 a^-1", e),
                (_, Err(e)) => rep.error("(2) (ab)^-1 = b^-1 a^-1", e),
            }
            if let (Some(rs), Ok(ab)) = (&g.resample, &ab) {
                let (a2, b2) = (rs(&a, rng), rs(&b, rng));
                match g.multiply(&a2, &b2) {
                    Ok(p) => rep.defect("representative independence", g.dist(&p, ab), tol, || format!("({a:?}, {b:?})")),
                    Err(e) => rep.error("representative independence", e),
                }
            }
        }

        // (5) conditional associativity
        let a = g.sample_element(rng);
        let b = g.sample_from(&g.beta(&a), rng);
        let c = g.sample_from(&g.beta(&b), rng);
        if g.gm_member(&a, &b) && g.gm_member(&b, &c) {
            if let Ok(bc) = g.multiply(&b, &c) {
                if g.gm_member(&a, &bc) {
                    let ab = g.multiply(&a, &b);
                    match &ab {
                        Ok(ab) if g.gm_member(ab, &c) => match (g.multiply(ab, &c), g.multiply(&a, &bc)) {
                            (Ok(l), Ok(r)) => rep.defect("(5) associativity", g.dist(&l, &r), tol, || format!("({a:?}, {b:?}, {c:?})")),
                            (Err(e), _) | (_, Err(e)) => rep.error("(5) associativity", e),
                        },
                        Ok(_) => rep.check("(5) associativity", false, || format!("(ab, c) not in G_m for ({a:?}, {b:?}, {c:?})")),
                        Err(e) => rep.error("(5) associativity", e),
                    }
                }
            }
        }
    }
    for c in ["(2) inverse pair in G_m", "(5) associativity"] {
        rep.touch(c);
    }
    rep.untested("G_m is open and the structure maps are smooth");
    rep
}

/// A map of local groupoids.
pub struct GroupoidMorphism<E1, M1, E2, M2> {
    pub name: String,
    pub source: Arc<LocalGroupoid<E1, M1>>,
    pub target: Arc<LocalGroupoid<E2, M2>>,
    pub map: Map<E1, Result<E2>>,
}

impl<E1, M1, E2, M2> Clone for GroupoidMorphism<E1, M1, E2, M2> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.clone(),
        }
    }
}

impl<E1: Value, M1: Value, E2: Value, M2: Value> GroupoidMorphism<E1, M1, E2, M2> {
    pub fn new(
        name: impl Into<String>,
        source: Arc<LocalGroupoid<E1, M1>>,
        target: Arc<LocalGroupoid<E2, M2>>,
        map: impl Fn(&E1) -> Result<E2> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            source,
            target,
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, g: &E1) -> Result<E2> {
        (self.map)(g)
    }

    /// F₀ = α′∘F∘ε.
    pub fn f0(&self, m: &M1) -> Result<M2> {
        Ok(self.target.alpha(&self.apply(&self.source.epsilon(m))?))
    }
}

/// The induced base map F₀ = α′∘F∘ε.
pub fn induced_f0<E1: Value, M1: Value, E2: Value, M2: Value>(
    f: &GroupoidMorphism<E1, M1, E2, M2>,
) -> impl Fn(&M1) -> Result<M2> + Send + Sync + 'static {
    let f = f.clone();
    move |m| f.f0(m)
}

/// Morphism laws at sampled elements and pairs.
pub fn check_morphism<E1: Value, M1: Value, E2: Value, M2: Value>(
    f: &GroupoidMorphism<E1, M1, E2, M2>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let (s, t) = (&f.source, &f.target);
    let mut rep = CheckReport::new(format!("morphism {}", f.name));
    for _ in 0..samples {
        let m = (s.sample_base)(rng);
        match (f.apply(&s.epsilon(&m)), f.f0(&m)) {
            (Ok(x), Ok(m2)) => rep.defect("F(eps(m)) = eps'(F0(m))", t.dist(&x, &t.epsilon(&m2)), tol, || format!("{m:?}")),
            (Err(e), _) | (_, Err(e)) => rep.error("F(eps(m)) = eps'(F0(m))", e),
        }

        let g = s.sample_element(rng);
        match (f.apply(&g), f.f0(&s.alpha(&g)), f.f0(&s.beta(&g)), f.apply(&s.inverse(&g))) {
            (Ok(fg), Ok(a0), Ok(b0), Ok(fgi)) => {
                rep.check("image in target", t.contains(&fg), || format!("{g:?}"));
                rep.defect("alpha' o F = F0 o alpha", t.base_dist(&t.alpha(&fg), &a0), tol, || format!("{g:?}"));
                rep.defect("beta' o F = F0 o beta", t.base_dist(&t.beta(&fg), &b0), tol, || format!("{g:?}"));
                rep.defect("F(g^-1) = F(g)^-1", t.dist(&fgi, &t.inverse(&fg)), tol, || format!("{g:?}"));
            }
            (Err(e), ..) | (_, Err(e), ..) | (_, _, Err(e), _) | (.., Err(e)) => rep.error("alpha' o F = F0 o alpha", e),
        }

        if let Some((a, b)) = s.sample_gm_pair(rng) {
            let w = || format!("({a:?}, {b:?})");
            match (f.apply(&a), f.apply(&b), s.multiply(&a, &b).and_then(|ab| f.apply(&ab))) {
                (Ok(fa), Ok(fb), Ok(fab)) => {
                    let inside = t.gm_member(&fa, &fb);
                    rep.check("(F x F)(G_m) in G'_m", inside, w);
                    if inside {
                        match t.multiply(&fa, &fb) {
                            Ok(p) => rep.defect("F(ab) = F(a)F(b)", t.dist(&p, &fab), tol, w),
                            Err(e) => rep.error("F(ab) = F(a)F(b)", e),
                        }
                    }
                }
                (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => rep.error("F(ab) = F(a)F(b)", e),
            }
        }
    }
    rep.touch("F(ab) = F(a)F(b)");
    rep
}

/// K = F⁻¹(ε′(M′)) with K_m = K₂ ∩ G_m, sampled by `sample_from`.
pub fn kernel<E1: Value, M1: Value, E2: Value, M2: Value>(
    f: &GroupoidMorphism<E1, M1, E2, M2>,
    tol: f64,
    sample_from: impl Fn(&M1, &mut dyn RngCore) -> E1 + Send + Sync + 'static,
) -> LocalGroupoid<E1, M1> {
    let mut k = (*f.source).clone();
    k.name = format!("ker {}", f.name);
    k.totally_intransitive = true;
    let (src, fc) = (f.source.clone(), f.clone());
    k.contains = Arc::new(move |g| {
        src.contains(g)
            && fc
                .apply(g)
                .map(|x| fc.target.dist(&x, &fc.target.epsilon(&fc.target.alpha(&x))) <= tol)
                .unwrap_or(false)
    });
    k.sample_from = Arc::new(sample_from);
    k
}

/// The image of an injective morphism, with membership decided by `preimage`.
pub fn image<E1: Value, M1: Value, E2: Value, M2: Value>(
    f: &GroupoidMorphism<E1, M1, E2, M2>,
    tol: f64,
    preimage: impl Fn(&E2) -> Option<E1> + Send + Sync + 'static,
    base_preimage: impl Fn(&M2) -> Option<M1> + Send + Sync + 'static,
) -> LocalGroupoid<E2, M2> {
    let mut im = (*f.target).clone();
    im.name = format!("im {}", f.name);
    let fc = f.clone();
    let pre = Arc::new(preimage);
    let pre2 = pre.clone();
    im.contains = Arc::new(move |g| {
        pre(g)
            .and_then(|p| fc.apply(&p).ok())
            .map(|x| fc.target.dist(&x, g) <= tol)
            .unwrap_or(false)
    });
    let fc = f.clone();
    im.gm = {
        let fc = f.clone();
        Arc::new(move |a, b| match (pre2(a), pre2(b)) {
            (Some(x), Some(y)) => fc.source.gm_member(&x, &y),
            _ => false,
        })
    };
    let src = f.source.clone();
    let fb = f.clone();
    im.sample_base = Arc::new(move |rng| {
        let m = (src.sample_base)(rng);
        fb.f0(&m).expect("F0 is defined on the base")
    });
    im.sample_from = Arc::new(move |m2, rng| match base_preimage(m2) {
        Some(m1) => fc
            .apply(&fc.source.sample_from(&m1, rng))
            .unwrap_or_else(|_| fc.target.epsilon(m2)),
        None => fc.target.epsilon(m2),
    });
    im
}

/// Narrows G to the elements accepted by `u`: U_m = U₂ ∩ m⁻¹(U).
/// Fails when a sampled identity or inverse leaves U.
pub fn restrict_to_open<E: Value, M: Value>(
    g: &LocalGroupoid<E, M>,
    name: impl Into<String>,
    u: impl Fn(&E) -> bool + Send + Sync + 'static,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<LocalGroupoid<E, M>> {
    let u: Map<E, bool> = Arc::new(u);
    for _ in 0..samples {
        let m = (g.sample_base)(rng);
        if !u(&g.epsilon(&m)) {
            return Err(Error::PreconditionFailed(format!("eps({m:?}) not in U")));
        }
        let x = g.sample_element(rng);
        if u(&x) && !u(&g.inverse(&x)) {
            return Err(Error::PreconditionFailed(format!("inverse of {x:?} not in U")));
        }
    }
    let mut r = g.clone();
    r.name = name.into();
    r.fully_multiplicable = false;
    let (parent, u1) = (g.clone(), u.clone());
    r.contains = Arc::new(move |x| parent.contains(x) && u1(x));
    let (parent, u2) = (g.clone(), u.clone());
    r.gm = Arc::new(move |a, b| {
        (parent.gm)(a, b) && (parent.product)(a, b).map(|p| u2(&p)).unwrap_or(false)
    });
    let (parent, u3) = (g.clone(), u);
    r.sample_from = Arc::new(move |m, rng| {
        for _ in 0..32 {
            let x = parent.sample_from(m, rng);
            if u3(&x) {
                return x;
            }
        }
        parent.epsilon(m)
    });
    Ok(r)
}

/// Pair groupoid M×M with m((m₀, m₁), (m₁, m₂)) = (m₀, m₂).
pub fn make_pair_groupoid<M: Value>(
    sample_base: impl Fn(&mut dyn RngCore) -> M + Send + Sync + 'static,
    base_dist: impl Fn(&M, &M) -> f64 + Send + Sync + 'static,
    tol: f64,
) -> LocalGroupoid<(M, M), M> {
    let sample: Sampler<M> = Arc::new(sample_base);
    let dist: Map2<M, f64> = Arc::new(base_dist);
    let (s2, d2) = (sample.clone(), dist.clone());
    LocalGroupoid {
        name: "pair groupoid".into(),
        totally_intransitive: false,
        fully_multiplicable: true,
        alpha: Arc::new(|p: &(M, M)| p.0.clone()),
        beta: Arc::new(|p: &(M, M)| p.1.clone()),
        epsilon: Arc::new(|m: &M| (m.clone(), m.clone())),
        inverse: Arc::new(|p: &(M, M)| (p.1.clone(), p.0.clone())),
        product: Arc::new(|a: &(M, M), b: &(M, M)| Ok((a.0.clone(), b.1.clone()))),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(move |a: &(M, M), b: &(M, M)| d2(&a.0, &b.0) + d2(&a.1, &b.1)),
        base_dist: dist,
        sample_base: sample,
        sample_from: Arc::new(move |m: &M, rng: &mut dyn RngCore| (m.clone(), s2(rng))),
        resample: None,
        tol,
    }
}

/// Pair groupoid of the base of `b`.
pub fn pair_groupoid<B: PrincipalBundle>(b: &B) -> LocalGroupoid<(B::Base, B::Base), B::Base> {
    let (b1, b2) = (b.clone(), b.clone());
    make_pair_groupoid(move |rng| b1.sample_base(rng), move |x, y| b2.base_dist(x, y), b.tol())
}

/// The base M as a groupoid with only identities.
pub fn base_groupoid<B: PrincipalBundle>(b: &B) -> LocalGroupoid<B::Base, B::Base> {
    let (b1, b2, b3) = (b.clone(), b.clone(), b.clone());
    let id = |m: &B::Base| m.clone();
    LocalGroupoid {
        name: "base groupoid".into(),
        totally_intransitive: true,
        fully_multiplicable: true,
        alpha: Arc::new(id),
        beta: Arc::new(id),
        epsilon: Arc::new(id),
        inverse: Arc::new(id),
        product: Arc::new(|a: &B::Base, _: &B::Base| Ok(a.clone())),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(move |x, y| b1.base_dist(x, y)),
        base_dist: Arc::new(move |x, y| b2.base_dist(x, y)),
        sample_base: Arc::new(move |rng| b3.sample_base(rng)),
        sample_from: Arc::new(|m: &B::Base, _: &mut dyn RngCore| m.clone()),
        resample: None,
        tol: b.tol(),
    }
}

/// The gauge groupoid (Q×Q)/G ⇉ Q/G.
pub fn make_gauge_groupoid<B: PrincipalBundle>(b: &B) -> LocalGroupoid<Gauge<B>, B::Base> {
    let bs: [B; 8] = std::array::from_fn(|_| b.clone());
    let [b0, b1, b2, b3, b4, b5, b6, b7] = bs;
    LocalGroupoid {
        name: format!("gauge groupoid of {}", b.name()),
        totally_intransitive: false,
        fully_multiplicable: true,
        alpha: Arc::new(move |a: &Gauge<B>| b0.project(&a.rep0)),
        beta: Arc::new(move |a: &Gauge<B>| b1.project(&a.rep1)),
        epsilon: Arc::new(move |r: &B::Base| sigma_gauge(&b2, r).expect("lift is defined on the base")),
        inverse: Arc::new(|a: &Gauge<B>| GaugeClass::new(a.rep1.clone(), a.rep0.clone())),
        product: Arc::new(move |x: &Gauge<B>, y: &Gauge<B>| {
            let g = b3
                .kappa(&y.rep0, &x.rep1)
                .map_err(|e| Error::CompositionUndefined(e.to_string()))?;
            Ok(GaugeClass::new(x.rep0.clone(), b3.act(&g, &y.rep1)))
        }),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(move |x, y| gauge_dist(&b4, x, y)),
        base_dist: Arc::new(move |x, y| b5.base_dist(x, y)),
        sample_base: Arc::new(move |rng| b6.sample_base(rng)),
        sample_from: Arc::new(move |r: &B::Base, rng: &mut dyn RngCore| {
            let q = b7.lift(r).expect("lift is defined on the base");
            GaugeClass::new(b7.act(&B::Group::sample(rng), &q), b7.sample_point(rng))
        }),
        resample: {
            let b = b.clone();
            Some(Arc::new(move |a: &Gauge<B>, rng: &mut dyn RngCore| {
                act_diag(&b, &B::Group::sample(rng), a)
            }))
        },
        tol: b.tol(),
    }
}

/// The conjugate-bundle groupoid (Q×G)/G ⇉ Q/G with
/// m([q₀, g₀], [g q₀, g₁]) = [q₀, g₀ g⁻¹ g₁ g].
pub fn make_conj_groupoid<B: PrincipalBundle>(b: &B) -> LocalGroupoid<Conj<B>, B::Base> {
    let bs: [B; 7] = std::array::from_fn(|_| b.clone());
    let [b0, b1, b2, b3, b4, b5, b6] = bs;
    let b0b = b0.clone();
    LocalGroupoid {
        name: format!("conjugate groupoid of {}", b.name()),
        totally_intransitive: true,
        fully_multiplicable: true,
        alpha: Arc::new(move |c: &Conj<B>| b0.project(&c.q)),
        beta: Arc::new(move |c: &Conj<B>| b0b.project(&c.q)),
        epsilon: Arc::new(move |r: &B::Base| sigma_conj(&b1, r).expect("lift is defined on the base")),
        inverse: Arc::new(|c: &Conj<B>| ConjClass::new(c.q.clone(), c.g.inv())),
        product: Arc::new(move |x: &Conj<B>, y: &Conj<B>| {
            let g = b2
                .kappa(&x.q, &y.q)
                .map_err(|e| Error::CompositionUndefined(e.to_string()))?;
            Ok(ConjClass::new(x.q.clone(), x.g.mul(&g.inv().conjugate(&y.g))))
        }),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(move |x, y| conj_dist(&b3, x, y)),
        base_dist: Arc::new(move |x, y| b4.base_dist(x, y)),
        sample_base: Arc::new(move |rng| b5.sample_base(rng)),
        sample_from: Arc::new(move |r: &B::Base, rng: &mut dyn RngCore| {
            let q = b6.lift(r).expect("lift is defined on the base");
            ConjClass::new(b6.act(&B::Group::sample(rng), &q), B::Group::sample(rng))
        }),
        resample: {
            let b = b.clone();
            Some(Arc::new(move |c: &Conj<B>, rng: &mut dyn RngCore| {
                act_conj(&b, &B::Group::sample(rng), c)
            }))
        },
        tol: b.tol(),
    }
}

fn group_groupoid_with<G: Group>(name: &str, product: fn(&G, &G) -> G) -> LocalGroupoid<G, ()> {
    LocalGroupoid {
        name: name.into(),
        totally_intransitive: true,
        fully_multiplicable: true,
        alpha: Arc::new(|_| ()),
        beta: Arc::new(|_| ()),
        epsilon: Arc::new(|_| G::identity()),
        inverse: Arc::new(|g: &G| g.inv()),
        product: Arc::new(move |a: &G, b: &G| Ok(product(a, b))),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(|a: &G, b: &G| a.distance(b)),
        base_dist: Arc::new(|_, _| 0.0),
        sample_base: Arc::new(|_| ()),
        sample_from: Arc::new(|_, rng: &mut dyn RngCore| G::sample(rng)),
        resample: None,
        tol: crate::groups::EPS,
    }
}

/// A Lie group as a groupoid over a point.
pub fn group_groupoid<G: Group>() -> LocalGroupoid<G, ()> {
    group_groupoid_with(&format!("{} over a point", G::name()), |a, b| a.mul(b))
}

/// The opposite group a * b = b a over a point.
pub fn opposite_group_groupoid<G: Group>() -> LocalGroupoid<G, ()> {
    group_groupoid_with(&format!("{}^op over a point", G::name()), |a, b| a.opposite_mul(b))
}

/// The constant group bundle M×G ⇉ M with fiberwise multiplication.
pub fn group_bundle_groupoid<B: PrincipalBundle>(b: &B) -> LocalGroupoid<(B::Base, B::Group), B::Base> {
    let (b1, b2, b3, b4) = (b.clone(), b.clone(), b.clone(), b.clone());
    LocalGroupoid {
        name: format!("M x {}", B::Group::name()),
        totally_intransitive: true,
        fully_multiplicable: true,
        alpha: Arc::new(|x: &(B::Base, B::Group)| x.0.clone()),
        beta: Arc::new(|x: &(B::Base, B::Group)| x.0.clone()),
        epsilon: Arc::new(|m: &B::Base| (m.clone(), B::Group::identity())),
        inverse: Arc::new(|x: &(B::Base, B::Group)| (x.0.clone(), x.1.inv())),
        product: Arc::new(|x: &(B::Base, B::Group), y: &(B::Base, B::Group)| Ok((x.0.clone(), x.1.mul(&y.1)))),
        gm: Arc::new(|_, _| true),
        contains: Arc::new(|_| true),
        elem_dist: Arc::new(move |x: &(B::Base, B::Group), y: &(B::Base, B::Group)| b1.base_dist(&x.0, &y.0) + x.1.distance(&y.1)),
        base_dist: Arc::new(move |x, y| b2.base_dist(x, y)),
        sample_base: Arc::new(move |rng| b3.sample_base(rng)),
        sample_from: Arc::new(move |m: &B::Base, rng: &mut dyn RngCore| {
            let _ = &b4;
            (m.clone(), B::Group::sample(rng))
        }),
        resample: None,
        tol: b.tol(),
    }
}

type Witness<A, B> = Arc<dyn Fn(&A) -> Result<B> + Send + Sync>;

/// A candidate extension G₁ → G₂ → G₃ over a common base.
pub struct Extension<E1, E2, E3, M> {
    pub eta1: GroupoidMorphism<E1, M, E2, M>,
    pub eta2: GroupoidMorphism<E2, M, E3, M>,
    /// Left inverse of η₁ on ker η₂.
    pub eta1_inverse: Witness<E2, E1>,
    /// Constructive preimage under η₂.
    pub eta2_section: Witness<E3, E2>,
    /// Random element of ker η₂ with the given source, built without η₁.
    pub kernel_sample: SamplerFrom<M, E2>,
}

impl<E1, E2, E3, M> Clone for Extension<E1, E2, E3, M> {
    fn clone(&self) -> Self {
        Self {
            eta1: self.eta1.clone(),
            eta2: self.eta2.clone(),
            eta1_inverse: self.eta1_inverse.clone(),
            eta2_section: self.eta2_section.clone(),
            kernel_sample: self.kernel_sample.clone(),
        }
    }
}

impl<E1: Value, E2: Value, E3: Value, M: Value> Extension<E1, E2, E3, M> {
    pub fn kernel_groupoid(&self) -> &Arc<LocalGroupoid<E1, M>> {
        &self.eta1.source
    }
    pub fn total(&self) -> &Arc<LocalGroupoid<E2, M>> {
        &self.eta1.target
    }
    pub fn quotient(&self) -> &Arc<LocalGroupoid<E3, M>> {
        &self.eta2.target
    }

    /// η₂(e) is an identity.
    pub fn in_kernel(&self, e: &E2, tol: f64) -> bool {
        let g3 = self.quotient();
        self.eta2
            .apply(e)
            .map(|x| g3.dist(&x, &g3.epsilon(&g3.alpha(&x))) <= tol)
            .unwrap_or(false)
    }
}

/// Morphism laws, injectivity of η₁, surjectivity of η₂, im η₁ = ker η₂ and
/// the pullback condition (η₁×η₁)⁻¹((G₂)_m) ⊂ (G₁)_m at sampled points.
pub fn check_llgpd_extension<E1: Value, E2: Value, E3: Value, M: Value>(
    ext: &Extension<E1, E2, E3, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let (g1, g2, g3) = (ext.kernel_groupoid(), ext.total(), ext.quotient());
    let mut rep = CheckReport::new("lLGpd extension");
    rep.merge(check_morphism(&ext.eta1, samples, tol, rng));
    rep.merge(check_morphism(&ext.eta2, samples, tol, rng));
    for _ in 0..samples {
        let h = g1.sample_element(rng);
        rep.defect("G1 totally intransitive", g1.base_dist(&g1.alpha(&h), &g1.beta(&h)), tol, || format!("{h:?}"));

        // Injectivity, with the explicit left inverse.
        let h2 = g1.sample_from(&g1.alpha(&h), rng);
        match (ext.eta1.apply(&h), ext.eta1.apply(&h2)) {
            (Ok(x), Ok(y)) => {
                if g1.dist(&h, &h2) > 1e3 * tol {
                    rep.check("eta1 injective", g2.dist(&x, &y) > tol, || format!("{h:?} and {h2:?}"));
                }
                match (ext.eta1_inverse)(&x) {
                    Ok(back) => rep.defect("eta1 has a left inverse", g1.dist(&back, &h), tol, || format!("{h:?}")),
                    Err(e) => rep.error("eta1 has a left inverse", e),
                }
                rep.check("im eta1 in ker eta2", ext.in_kernel(&x, tol), || format!("{h:?}"));
            }
            (Err(e), _) | (_, Err(e)) => rep.error("eta1 injective", e),
        }

        // Every kernel element has a preimage.
        let m = (g2.sample_base)(rng);
        let k = (ext.kernel_sample)(&m, rng);
        rep.check("kernel samples lie in ker eta2", ext.in_kernel(&k, tol), || format!("{k:?}"));
        match (ext.eta1_inverse)(&k).and_then(|p| ext.eta1.apply(&p)) {
            Ok(x) => rep.defect("ker eta2 in im eta1", g2.dist(&x, &k), tol, || format!("{k:?}")),
            Err(e) => rep.error("ker eta2 in im eta1", e),
        }

        // On generic elements both memberships agree.
        let e = g2.sample_element(rng);
        let has_pre = (ext.eta1_inverse)(&e)
            .and_then(|p| ext.eta1.apply(&p))
            .map(|x| g2.dist(&x, &e) <= tol)
            .unwrap_or(false);
        rep.check("im eta1 = ker eta2 at generic elements", has_pre == ext.in_kernel(&e, tol), || format!("{e:?}"));

        // Surjectivity of η₂.
        let y = g3.sample_element(rng);
        match (ext.eta2_section)(&y) {
            Ok(w) => {
                rep.check("eta2 section lands in G2", g2.contains(&w), || format!("{y:?}"));
                match ext.eta2.apply(&w) {
                    Ok(x) => rep.defect("eta2 onto sampled G3", g3.dist(&x, &y), tol, || format!("{y:?}")),
                    Err(e) => rep.error("eta2 onto sampled G3", e),
                }
            }
            Err(e) => rep.error("eta2 onto sampled G3", e),
        }

        // Pullback of G2_m lies in G1_m.
        let a = g1.sample_element(rng);
        let b = g1.sample_from(&g1.beta(&a), rng);
        if let (Ok(x), Ok(y)) = (ext.eta1.apply(&a), ext.eta1.apply(&b)) {
            if g2.gm_member(&x, &y) {
                rep.check("(eta1 x eta1)^-1(G2_m) in G1_m", g1.gm_member(&a, &b), || format!("({a:?}, {b:?})"));
            }
        }
    }
    rep.touch("(eta1 x eta1)^-1(G2_m) in G1_m");
    rep.untested("eta1 is an embedding and eta2 a surjective submersion");
    rep.untested("G3 is locally trivial");
    rep
}

/// The discrete Atiyah sequence as local groupoids over a D-type U:
/// (Q×G)/G → U/G → U″.
pub type DasExtension<B> = Extension<
    Conj<B>,
    Gauge<B>,
    (<B as PrincipalBundle>::Base, <B as PrincipalBundle>::Base),
    <B as PrincipalBundle>::Base,
>;

pub fn das_extension<B: PrincipalBundle>(
    b: &B,
    u: &PairSubset<B>,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<DasExtension<B>> {
    let conj = Arc::new(make_conj_groupoid(b));
    let u1 = u.clone();
    let ug = Arc::new(restrict_to_open(
        &make_gauge_groupoid(b),
        format!("U/G for {}", u.name),
        move |a: &Gauge<B>| u1.contains(&a.rep0, &a.rep1),
        samples,
        rng,
    )?);
    let (b1, u2) = (b.clone(), u.clone());
    let upp = Arc::new(restrict_to_open(
        &pair_groupoid(b),
        format!("U'' for {}", u.name),
        move |p: &(B::Base, B::Base)| in_u_second(&b1, &u2, &p.0, &p.1).unwrap_or(false),
        samples,
        rng,
    )?);
    let (b1, b2, b3, b4, b5) = (b.clone(), b.clone(), b.clone(), b.clone(), b.clone());
    Ok(Extension {
        eta1: GroupoidMorphism::new("F1", conj, ug.clone(), move |c| Ok(f1(&b1, c))),
        eta2: GroupoidMorphism::new("F2", ug, upp, move |a| Ok(f2(&b2, a))),
        eta1_inverse: Arc::new(move |a: &Gauge<B>| Ok(ConjClass::new(a.rep0.clone(), b3.kappa(&a.rep0, &a.rep1)?))),
        eta2_section: Arc::new(move |p: &(B::Base, B::Base)| Ok(GaugeClass::new(b4.lift(&p.0)?, b4.lift(&p.1)?))),
        kernel_sample: Arc::new(move |r: &B::Base, rng: &mut dyn RngCore| {
            let q = b5.lift(r).expect("lift is defined on the base");
            let q0 = b5.act(&B::Group::sample(rng), &q);
            GaugeClass::new(q0, b5.act(&B::Group::sample(rng), &q))
        }),
    })
}
