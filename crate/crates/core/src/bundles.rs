//! Principal G-bundles and subsets of Q×Q.
//!
//! Two bundles ship: the trivial bundle M×G over the plane or the flat
//! torus, and the Hopf bundle S³ → S² with structure group U(1).

use crate::error::{Error, Result};
use crate::groups::{reduce_angle, Group, EPS, U1};
use crate::report::CheckReport;
use crate::sampling;
use num_complex::Complex64;
use rand::RngCore;
use std::fmt::{self, Debug};
use std::sync::Arc;

pub trait PrincipalBundle: Clone + Debug + Send + Sync + 'static {
    type Group: Group;
    type Point: Clone + Debug + Send + Sync + 'static;
    type Base: Clone + Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    /// Tolerance for structural decisions such as fiber membership.
    fn tol(&self) -> f64;
    fn project(&self, q: &Self::Point) -> Self::Base;
    /// Left action l_g(q).
    fn act(&self, g: &Self::Group, q: &Self::Point) -> Self::Point;
    /// κ(q, q2) assuming both points lie in one fiber.
    fn kappa_unchecked(&self, q: &Self::Point, q2: &Self::Point) -> Self::Group;
    /// Chosen section of π.
    fn lift(&self, r: &Self::Base) -> Result<Self::Point>;
    fn point_dist(&self, a: &Self::Point, b: &Self::Point) -> f64;
    fn base_dist(&self, a: &Self::Base, b: &Self::Base) -> f64;
    fn sample_point(&self, rng: &mut dyn RngCore) -> Self::Point;
    fn sample_base(&self, rng: &mut dyn RngCore) -> Self::Base;

    /// The unique h with l_h(q) = q2.
    fn kappa(&self, q: &Self::Point, q2: &Self::Point) -> Result<Self::Group> {
        let d = self.base_dist(&self.project(q), &self.project(q2));
        if d > self.tol() {
            return Err(Error::FiberMismatch { distance: d });
        }
        Ok(self.kappa_unchecked(q, q2))
    }

    fn is_vertical(&self, q0: &Self::Point, q1: &Self::Point) -> bool {
        self.base_dist(&self.project(q0), &self.project(q1)) <= self.tol()
    }
}

/// Base manifold of a trivial bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarBase {
    /// R², sampled in a square of the configured radius.
    Plane,
    /// Flat torus of angle pairs in [0, 2π)².
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialPoint<G> {
    pub base: [f64; 2],
    pub fiber: G,
}

/// M × G with l_h(m, g) = (m, h g).
#[derive(Debug, Clone)]
pub struct TrivialBundle<G> {
    pub base: PlanarBase,
    pub tol: f64,
    /// Half-width of the sampling square for the plane.
    pub radius: f64,
    _group: std::marker::PhantomData<fn() -> G>,
}

impl<G: Group> TrivialBundle<G> {
    pub fn new(base: PlanarBase) -> Self {
        Self {
            base,
            tol: EPS,
            radius: 2.0,
            _group: std::marker::PhantomData,
        }
    }

    pub fn plane() -> Self {
        Self::new(PlanarBase::Plane)
    }

    pub fn torus() -> Self {
        Self::new(PlanarBase::Torus)
    }

    pub fn point(&self, base: [f64; 2], fiber: G) -> TrivialPoint<G> {
        TrivialPoint {
            base: self.normalize(base),
            fiber,
        }
    }

    fn normalize(&self, m: [f64; 2]) -> [f64; 2] {
        match self.base {
            PlanarBase::Plane => m,
            PlanarBase::Torus => m.map(|x| U1::new(x).angle()),
        }
    }
}

impl<G: Group> PrincipalBundle for TrivialBundle<G> {
    type Group = G;
    type Point = TrivialPoint<G>;
    type Base = [f64; 2];

    fn name(&self) -> String {
        let m = match self.base {
            PlanarBase::Plane => "R2",
            PlanarBase::Torus => "T2",
        };
        format!("{m} x {}", G::name())
    }
    fn tol(&self) -> f64 {
        self.tol
    }
    fn project(&self, q: &Self::Point) -> [f64; 2] {
        q.base
    }
    fn act(&self, g: &G, q: &Self::Point) -> Self::Point {
        TrivialPoint {
            base: q.base,
            fiber: g.mul(&q.fiber),
        }
    }
    fn kappa_unchecked(&self, q: &Self::Point, q2: &Self::Point) -> G {
        q2.fiber.mul(&q.fiber.inv())
    }
    fn lift(&self, r: &[f64; 2]) -> Result<Self::Point> {
        if !r.iter().all(|x| x.is_finite()) {
            return Err(Error::LiftUnavailable(format!("{r:?}")));
        }
        Ok(self.point(*r, G::identity()))
    }
    fn point_dist(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.base_dist(&a.base, &b.base).hypot(a.fiber.distance(&b.fiber))
    }
    fn base_dist(&self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        match self.base {
            PlanarBase::Plane => (a[0] - b[0]).hypot(a[1] - b[1]),
            PlanarBase::Torus => reduce_angle(a[0] - b[0]).hypot(reduce_angle(a[1] - b[1])),
        }
    }
    fn sample_point(&self, rng: &mut dyn RngCore) -> Self::Point {
        let base = self.sample_base(rng);
        TrivialPoint {
            base,
            fiber: G::sample(rng),
        }
    }
    fn sample_base(&self, rng: &mut dyn RngCore) -> [f64; 2] {
        match self.base {
            PlanarBase::Plane => [
                sampling::uniform_in(rng, -self.radius, self.radius),
                sampling::uniform_in(rng, -self.radius, self.radius),
            ],
            PlanarBase::Torus => [sampling::angle(rng), sampling::angle(rng)],
        }
    }
}

/// Unit vector (z₁, z₂) in C².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint(pub [Complex64; 2]);

impl HopfPoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Option<Self> {
        let n = (z1.norm_sqr() + z2.norm_sqr()).sqrt();
        if n < 1e-12 || !n.is_finite() {
            return None;
        }
        Some(HopfPoint([z1 / n, z2 / n]))
    }
}

/// ⟨a, b⟩ = ā₁b₁ + ā₂b₂, conjugate-linear in the first slot.
pub fn hopf_inner(a: &HopfPoint, b: &HopfPoint) -> Complex64 {
    a.0[0].conj() * b.0[0] + a.0[1].conj() * b.0[1]
}

/// Hopf bundle S³ → S², l_u(z) = (u z₁, u z₂).
#[derive(Debug, Clone)]
pub struct HopfBundle {
    pub tol: f64,
    /// Below −1 + `chart_margin` in the third coordinate the southern chart is used.
    pub chart_margin: f64,
}

impl Default for HopfBundle {
    fn default() -> Self {
        Self {
            tol: EPS,
            chart_margin: 1e-8,
        }
    }
}

impl HopfBundle {
    pub fn new() -> Self {
        Self::default()
    }
}

impl PrincipalBundle for HopfBundle {
    type Group = U1;
    type Point = HopfPoint;
    type Base = [f64; 3];

    fn name(&self) -> String {
        "Hopf S3 -> S2".into()
    }
    fn tol(&self) -> f64 {
        self.tol
    }
    fn project(&self, q: &HopfPoint) -> [f64; 3] {
        let [z1, z2] = q.0;
        let p = z1.conj() * z2;
        [2.0 * p.re, 2.0 * p.im, z1.norm_sqr() - z2.norm_sqr()]
    }
    fn act(&self, g: &U1, q: &HopfPoint) -> HopfPoint {
        let u = g.to_complex();
        HopfPoint([u * q.0[0], u * q.0[1]])
    }
    fn kappa_unchecked(&self, q: &HopfPoint, q2: &HopfPoint) -> U1 {
        U1::phase(hopf_inner(q, q2))
    }
    fn lift(&self, r: &[f64; 3]) -> Result<HopfPoint> {
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !(n > 1e-12 && n.is_finite()) {
            return Err(Error::LiftUnavailable(format!("{r:?}")));
        }
        let [x, y, w] = r.map(|c| c / n);
        let z = if w > -1.0 + self.chart_margin {
            let s = (2.0 * (1.0 + w)).sqrt();
            [Complex64::new((1.0 + w) / s, 0.0), Complex64::new(x / s, y / s)]
        } else {
            let s = (2.0 * (1.0 - w)).sqrt();
            [Complex64::new(x / s, -y / s), Complex64::new((1.0 - w) / s, 0.0)]
        };
        HopfPoint::new(z[0], z[1]).ok_or_else(|| Error::LiftUnavailable(format!("{r:?}")))
    }
    fn point_dist(&self, a: &HopfPoint, b: &HopfPoint) -> f64 {
        ((a.0[0] - b.0[0]).norm_sqr() + (a.0[1] - b.0[1]).norm_sqr()).sqrt()
    }
    fn base_dist(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
    fn sample_point(&self, rng: &mut dyn RngCore) -> HopfPoint {
        let v = sampling::unit_vector::<4>(rng);
        HopfPoint([Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])])
    }
    fn sample_base(&self, rng: &mut dyn RngCore) -> [f64; 3] {
        sampling::unit_vector::<3>(rng)
    }
}

/// Invariance type of a subset U ⊂ Q×Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubsetKind {
    /// Contains V_d, invariant under the diagonal action.
    PD,
    /// pD-type and G×G invariant.
    D,
    /// D-type and closed under swapping the slots.
    SymmetricD,
}

type PairPredicate<P> = Arc<dyn Fn(&P, &P) -> bool + Send + Sync>;

/// A subset of Q×Q given by a membership predicate.
pub struct PairSubset<B: PrincipalBundle> {
    pub name: String,
    pub kind: SubsetKind,
    pred: PairPredicate<B::Point>,
}

impl<B: PrincipalBundle> Clone for PairSubset<B> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            kind: self.kind,
            pred: self.pred.clone(),
        }
    }
}

impl<B: PrincipalBundle> Debug for PairSubset<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairSubset({}, {:?})", self.name, self.kind)
    }
}

impl<B: PrincipalBundle> PairSubset<B> {
    pub fn new(
        name: impl Into<String>,
        kind: SubsetKind,
        pred: impl Fn(&B::Point, &B::Point) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            kind,
            pred: Arc::new(pred),
        }
    }

    /// All of Q×Q.
    pub fn all() -> Self {
        Self::new("QxQ", SubsetKind::SymmetricD, |_, _| true)
    }

    pub fn contains(&self, q0: &B::Point, q1: &B::Point) -> bool {
        (self.pred)(q0, q1)
    }

    /// A random member: rejection sampling, falling back to a vertical pair.
    pub fn sample_member(&self, b: &B, rng: &mut dyn RngCore) -> (B::Point, B::Point) {
        for _ in 0..64 {
            let q0 = b.sample_point(rng);
            let q1 = b.sample_point(rng);
            if self.contains(&q0, &q1) {
                return (q0, q1);
            }
        }
        let q0 = b.sample_point(rng);
        let q1 = b.act(&B::Group::sample(rng), &q0);
        (q0, q1)
    }

    /// A random triple in U^(3), if one is found.
    pub fn sample_triple(
        &self,
        b: &B,
        rng: &mut dyn RngCore,
    ) -> Option<(B::Point, B::Point, B::Point)> {
        for _ in 0..64 {
            let q = [b.sample_point(rng), b.sample_point(rng), b.sample_point(rng)];
            if in_triple_domain(self, &q[0], &q[1], &q[2]) {
                let [q0, q1, q2] = q;
                return Some((q0, q1, q2));
            }
        }
        None
    }
}

/// U = {⟨q₀, q₁⟩ ≠ 0} on the Hopf bundle.
pub fn hopf_domain() -> PairSubset<HopfBundle> {
    PairSubset::new("<q0,q1> != 0", SubsetKind::SymmetricD, |a, b| {
        hopf_inner(a, b).norm() > EPS
    })
}

pub fn kappa<B: PrincipalBundle>(b: &B, q: &B::Point, q2: &B::Point) -> Result<B::Group> {
    b.kappa(q, q2)
}

pub fn is_vertical<B: PrincipalBundle>(b: &B, q0: &B::Point, q1: &B::Point) -> bool {
    b.is_vertical(q0, q1)
}

/// Samples the invariance clauses of `kind` for `u`.
pub fn check_subset_type<B: PrincipalBundle>(
    b: &B,
    u: &PairSubset<B>,
    kind: SubsetKind,
    samples: usize,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let mut rep = CheckReport::new(format!("subset {} as {:?}", u.name, kind));
    for _ in 0..samples {
        let q = b.sample_point(rng);
        let g = B::Group::sample(rng);
        let gq = b.act(&g, &q);
        rep.check("contains the diagonal", u.contains(&q, &q), || format!("{q:?}"));
        rep.check("contains V_d", u.contains(&q, &gq), || format!("({q:?}, {gq:?})"));

        let (q0, q1) = if sampling::coin(rng) {
            u.sample_member(b, rng)
        } else {
            (b.sample_point(rng), b.sample_point(rng))
        };
        let inside = u.contains(&q0, &q1);
        let h = B::Group::sample(rng);
        let diag = u.contains(&b.act(&h, &q0), &b.act(&h, &q1));
        rep.check("diagonal invariance", inside == diag, || {
            format!("({q0:?}, {q1:?}) with g = {h:?}")
        });
        if kind >= SubsetKind::D {
            let h1 = B::Group::sample(rng);
            let moved = u.contains(&b.act(&h, &q0), &b.act(&h1, &q1));
            rep.check("GxG invariance", inside == moved, || {
                format!("({q0:?}, {q1:?}) with (g0, g1) = ({h:?}, {h1:?})")
            });
        }
        if kind >= SubsetKind::SymmetricD {
            rep.check("symmetry", inside == u.contains(&q1, &q0), || {
                format!("({q0:?}, {q1:?})")
            });
        }
    }
    rep.untested("U is open");
    rep
}

/// (q, r) ∈ U′ for a D-type U, decided as (q, lift(r)) ∈ U.
pub fn in_u_prime<B: PrincipalBundle>(
    b: &B,
    u: &PairSubset<B>,
    q: &B::Point,
    r: &B::Base,
) -> Result<bool> {
    if u.kind < SubsetKind::D {
        return Err(Error::PreconditionFailed(format!(
            "{} is not flagged D-type",
            u.name
        )));
    }
    Ok(u.contains(q, &b.lift(r)?))
}

/// (r₀, r₁) ∈ U″ for a D-type U, decided on lifts.
pub fn in_u_second<B: PrincipalBundle>(
    b: &B,
    u: &PairSubset<B>,
    r0: &B::Base,
    r1: &B::Base,
) -> Result<bool> {
    in_u_prime(b, u, &b.lift(r0)?, r1)
}

/// All nine ordered pairs of the triple lie in U.
pub fn in_triple_domain<B: PrincipalBundle>(
    u: &PairSubset<B>,
    q0: &B::Point,
    q1: &B::Point,
    q2: &B::Point,
) -> bool {
    let q = [q0, q1, q2];
    q.iter()
        .all(|a| q.iter().all(|c| u.contains(a, c)))
}
