//! Orbit classes in (Q×Q)/G and the conjugate bundle (Q×G)/G.
//!
//! Classes keep raw representatives. Comparisons go through κ rather than
//! canonical forms, since the Hopf bundle has no continuous global
//! representative.

use crate::bundles::PrincipalBundle;
use crate::error::Result;
use crate::groups::Group;

/// Class of (rep0, rep1) under the diagonal action.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeClass<P> {
    pub rep0: P,
    pub rep1: P,
}

impl<P> GaugeClass<P> {
    pub fn new(rep0: P, rep1: P) -> Self {
        Self { rep0, rep1 }
    }
}

/// Class of (q, g) under (q, g) ↦ (h q, h g h⁻¹).
#[derive(Debug, Clone, PartialEq)]
pub struct ConjClass<P, G> {
    pub q: P,
    pub g: G,
}

impl<P, G> ConjClass<P, G> {
    pub fn new(q: P, g: G) -> Self {
        Self { q, g }
    }
}

pub type Gauge<B> = GaugeClass<<B as PrincipalBundle>::Point>;
pub type Conj<B> = ConjClass<<B as PrincipalBundle>::Point, <B as PrincipalBundle>::Group>;

/// Orbit distance between gauge classes. Classes over different base pairs
/// get the (positive) base mismatch.
pub fn gauge_dist<B: PrincipalBundle>(b: &B, a: &Gauge<B>, c: &Gauge<B>) -> f64 {
    let d0 = b.base_dist(&b.project(&a.rep0), &b.project(&c.rep0));
    if d0 > b.tol() {
        return d0 + b.base_dist(&b.project(&a.rep1), &b.project(&c.rep1));
    }
    let g = b.kappa_unchecked(&c.rep0, &a.rep0);
    b.point_dist(&a.rep1, &b.act(&g, &c.rep1))
}

pub fn gauge_eq<B: PrincipalBundle>(b: &B, a: &Gauge<B>, c: &Gauge<B>, tol: f64) -> bool {
    gauge_dist(b, a, c) <= tol
}

/// Orbit distance between conjugate-bundle classes.
pub fn conj_dist<B: PrincipalBundle>(b: &B, a: &Conj<B>, c: &Conj<B>) -> f64 {
    let d0 = b.base_dist(&b.project(&a.q), &b.project(&c.q));
    if d0 > b.tol() {
        return d0 + a.g.distance(&c.g);
    }
    let k = b.kappa_unchecked(&a.q, &c.q).inv();
    a.g.distance(&k.conjugate(&c.g))
}

pub fn conj_eq<B: PrincipalBundle>(b: &B, a: &Conj<B>, c: &Conj<B>, tol: f64) -> bool {
    conj_dist(b, a, c) <= tol
}

/// κ₂(q, [q′, g′]) = κ(q, q′)⁻¹ g′ κ(q, q′).
pub fn kappa2<B: PrincipalBundle>(b: &B, q: &B::Point, c: &Conj<B>) -> Result<B::Group> {
    Ok(b.kappa(q, &c.q)?.inv().conjugate(&c.g))
}

/// The representative of `a` whose first slot is `q`.
pub fn lambda<B: PrincipalBundle>(
    b: &B,
    q: &B::Point,
    a: &Gauge<B>,
) -> Result<(B::Point, B::Point)> {
    let k = b.kappa(&a.rep0, q)?;
    Ok((q.clone(), b.act(&k, &a.rep1)))
}

/// Diagonal action on a representative pair.
pub fn act_diag<B: PrincipalBundle>(b: &B, g: &B::Group, a: &Gauge<B>) -> Gauge<B> {
    GaugeClass::new(b.act(g, &a.rep0), b.act(g, &a.rep1))
}

/// Action (q, h) ↦ (g q, g h g⁻¹) on a representative.
pub fn act_conj<B: PrincipalBundle>(b: &B, g: &B::Group, c: &Conj<B>) -> Conj<B> {
    ConjClass::new(b.act(g, &c.q), g.conjugate(&c.g))
}

/// [lift(r), lift(r)]
pub fn sigma_gauge<B: PrincipalBundle>(b: &B, r: &B::Base) -> Result<Gauge<B>> {
    let q = b.lift(r)?;
    Ok(GaugeClass::new(q.clone(), q))
}

/// [lift(r), e]
pub fn sigma_conj<B: PrincipalBundle>(b: &B, r: &B::Base) -> Result<Conj<B>> {
    Ok(ConjClass::new(b.lift(r)?, B::Group::identity()))
}

/// (r, r)
pub fn sigma_pair<M: Clone>(r: &M) -> (M, M) {
    (r.clone(), r.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{HopfBundle, TrivialBundle};
    use crate::groups::{Su2, EPS, U1};
    use crate::sampling::seeded;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn gauge_eq_examples() {
        let b = TrivialBundle::<U1>::plane();
        let mut rng = seeded(1);
        let a = GaugeClass::new(b.sample_point(&mut rng), b.sample_point(&mut rng));
        assert!(gauge_eq(&b, &a, &a, EPS));
        let g = U1::sample(&mut rng);
        assert!(gauge_eq(&b, &a, &act_diag(&b, &g, &a), EPS));

        let e = U1::identity();
        let x = GaugeClass::new(b.point([0.0, 0.0], e), b.point([1.0, 1.0], e));
        let y = GaugeClass::new(b.point([0.0, 0.0], e), b.point([1.0, 1.0], U1::new(0.5)));
        assert!(!gauge_eq(&b, &x, &y, EPS));
    }

    #[test]
    fn kappa2_examples() {
        let b = TrivialBundle::<Su2>::plane();
        let g = Su2::i();
        let h = Su2::j();
        let q = b.point([1.0, 0.0], Su2::identity());
        assert_eq!(kappa2(&b, &q, &ConjClass::new(q, g)).unwrap(), g);
        // κ((m,e),(m,h)) = h, so κ₂ = h⁻¹ g h.
        let c = ConjClass::new(b.point([1.0, 0.0], h), g);
        let k = kappa2(&b, &q, &c).unwrap();
        assert!(k.approx_eq(&h.inv().mul(&g).mul(&h), 1e-15));

        let hb = HopfBundle::new();
        let mut rng = seeded(4);
        let p = hb.sample_point(&mut rng);
        let c = ConjClass::new(hb.sample_point(&mut rng), U1::new(0.7));
        let p_same = hb.lift(&hb.project(&c.q)).unwrap();
        assert!(kappa2(&hb, &p_same, &c).unwrap().approx_eq(&U1::new(0.7), EPS));
        assert!(kappa2(&hb, &p, &c).is_err());
    }

    #[test]
    fn lambda_examples() {
        let b = HopfBundle::new();
        let mut rng = seeded(5);
        let a = GaugeClass::new(b.sample_point(&mut rng), b.sample_point(&mut rng));
        let (x, y) = lambda(&b, &a.rep0, &a).unwrap();
        assert!(b.point_dist(&x, &a.rep0) < EPS && b.point_dist(&y, &a.rep1) < EPS);
        let i = U1::new(FRAC_PI_2);
        let iq = b.act(&i, &a.rep0);
        let (_, y) = lambda(&b, &iq, &a).unwrap();
        assert!(b.point_dist(&y, &b.act(&i, &a.rep1)) < EPS);
        let v = GaugeClass::new(a.rep0, a.rep0);
        let (x, y) = lambda(&b, &iq, &v).unwrap();
        assert!(b.point_dist(&x, &y) < EPS);
    }

    #[test]
    fn sections() {
        let b = HopfBundle::new();
        let mut rng = seeded(6);
        let q = b.sample_point(&mut rng);
        let r = b.project(&q);
        assert!(gauge_eq(&b, &sigma_gauge(&b, &r).unwrap(), &GaugeClass::new(q, q), EPS));
        let k = kappa2(&b, &b.lift(&r).unwrap(), &sigma_conj(&b, &r).unwrap()).unwrap();
        assert!(k.approx_eq(&U1::identity(), EPS));
        assert_eq!(sigma_pair(&r), (r, r));
    }

    proptest! {
        #[test]
        fn kappa2_equivariant(s in any::<u64>()) {
            let b = TrivialBundle::<Su2>::torus();
            let mut rng = seeded(s);
            let q = b.sample_point(&mut rng);
            let c = ConjClass::new(b.act(&Su2::sample(&mut rng), &q), Su2::sample(&mut rng));
            let g = Su2::sample(&mut rng);
            let lhs = kappa2(&b, &b.act(&g, &q), &c).unwrap();
            let rhs = g.conjugate(&kappa2(&b, &q, &c).unwrap());
            prop_assert!(lhs.approx_eq(&rhs, 2.0 * EPS));
            // Representative independence.
            let c2 = act_conj(&b, &Su2::sample(&mut rng), &c);
            prop_assert!(conj_eq(&b, &c, &c2, 2.0 * EPS));
            prop_assert!(kappa2(&b, &q, &c2).unwrap().approx_eq(&kappa2(&b, &q, &c).unwrap(), 2.0 * EPS));
        }

        #[test]
        fn lambda_equivariant(s in any::<u64>()) {
            let b = HopfBundle::new();
            let mut rng = seeded(s);
            let q = b.sample_point(&mut rng);
            let a = GaugeClass::new(b.act(&U1::sample(&mut rng), &q), b.sample_point(&mut rng));
            let g = U1::sample(&mut rng);
            let (x, y) = lambda(&b, &b.act(&g, &q), &a).unwrap();
            let (u, v) = lambda(&b, &q, &a).unwrap();
            prop_assert!(b.point_dist(&x, &b.act(&g, &u)) < 2.0 * EPS);
            prop_assert!(b.point_dist(&y, &b.act(&g, &v)) < 2.0 * EPS);
        }

        #[test]
        fn gauge_eq_is_an_equivalence(s in any::<u64>()) {
            let b = TrivialBundle::<Su2>::plane();
            let mut rng = seeded(s);
            let a = GaugeClass::new(b.sample_point(&mut rng), b.sample_point(&mut rng));
            let c = act_diag(&b, &Su2::sample(&mut rng), &a);
            let d = act_diag(&b, &Su2::sample(&mut rng), &c);
            let other = GaugeClass::new(a.rep0, b.sample_point(&mut rng));
            prop_assert!(gauge_eq(&b, &a, &a, EPS));
            prop_assert_eq!(gauge_eq(&b, &a, &c, EPS), gauge_eq(&b, &c, &a, EPS));
            prop_assert!(gauge_eq(&b, &a, &c, EPS) && gauge_eq(&b, &c, &d, EPS) && gauge_eq(&b, &a, &d, 3.0 * EPS));
            prop_assert!(!gauge_eq(&b, &a, &other, EPS));
        }
    }
}
