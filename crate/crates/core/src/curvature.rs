//! Discrete curvature B_d(q₀, q₁, q₂) = A(q₀, q₂)⁻¹ A(q₁, q₂) A(q₀, q₁),
//! flatness tests, the multiplicativity defect of s_R and the Bargmann
//! invariant of the Hopf bundle.

use crate::bundles::{hopf_inner, in_triple_domain, HopfPoint, PrincipalBundle};
use crate::connections::{DiscreteConnection, F_CH, F_HR};
use crate::error::{Error, Result};
use crate::groupoids::make_gauge_groupoid;
use crate::groups::{Group, EPS, U1};
use crate::quotients::lambda;
use crate::report::CheckReport;
use rand::RngCore;

/// A curvature value together with the triple it was evaluated at.
#[derive(Clone, Debug)]
pub struct CurvatureValue<B: PrincipalBundle> {
    pub triple: (B::Point, B::Point, B::Point),
    pub value: B::Group,
}

impl<B: PrincipalBundle> CurvatureValue<B> {
    pub fn compute(a: &DiscreteConnection<B>, q0: &B::Point, q1: &B::Point, q2: &B::Point) -> Result<Self> {
        Ok(Self {
            triple: (q0.clone(), q1.clone(), q2.clone()),
            value: bd(a, q0, q1, q2)?,
        })
    }
}

/// B_d at a triple of U^(3).
pub fn bd<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    q0: &B::Point,
    q1: &B::Point,
    q2: &B::Point,
) -> Result<B::Group> {
    if !in_triple_domain(&a.domain, q0, q1, q2) {
        return Err(Error::DomainViolation(format!(
            "({q0:?}, {q1:?}, {q2:?}) not in U^(3) for {}",
            a.name
        )));
    }
    let a02 = a.eval(q0, q2)?;
    let a12 = a.eval(q1, q2)?;
    let a01 = a.eval(q0, q1)?;
    Ok(a02.inv().mul(&a12).mul(&a01))
}

/// B_d = e at sampled triples of U^(3), with coincident-point triples forced.
pub fn is_flat<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &a.bundle;
    let mut rep = CheckReport::new(format!("flatness of {}", a.name));
    let clause = "B_d = e";
    for i in 0..samples {
        let triple = match i % 4 {
            0 => {
                let (q0, q2) = a.domain.sample_member(b, rng);
                if i % 8 == 0 {
                    Some((q0.clone(), q0, q2))
                } else {
                    Some((q0, q2.clone(), q2))
                }
            }
            _ => a.domain.sample_triple(b, rng),
        };
        let Some((q0, q1, q2)) = triple else { continue };
        match bd(a, &q0, &q1, &q2) {
            Ok(v) => rep.defect(clause, v.size(), tol, || format!("({q0:?}, {q1:?}, {q2:?})")),
            Err(e) => rep.error(clause, e),
        }
    }
    rep.touch(clause);
    rep
}

/// Degenerate-triple identities and G-equivariance of B_d.
pub fn check_curvature_identities<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &a.bundle;
    let mut rep = CheckReport::new(format!("curvature identities of {}", a.name));
    for _ in 0..samples {
        let (q0, q2) = a.domain.sample_member(b, rng);
        match (bd(a, &q0, &q0, &q2), bd(a, &q0, &q2, &q2), bd(a, &q0, &q0, &q0)) {
            (Ok(x), Ok(y), Ok(z)) => {
                rep.defect("B_d(q0,q0,q2) = e", x.size(), tol, || format!("({q0:?}, {q2:?})"));
                rep.defect("B_d(q0,q2,q2) = e", y.size(), tol, || format!("({q0:?}, {q2:?})"));
                rep.defect("B_d(q,q,q) = e", z.size(), tol, || format!("{q0:?}"));
            }
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => rep.error("B_d(q0,q0,q2) = e", e),
        }
        let Some((q0, q1, q2)) = a.domain.sample_triple(b, rng) else { continue };
        let g = B::Group::sample(rng);
        let moved = (b.act(&g, &q0), b.act(&g, &q1), b.act(&g, &q2));
        match (bd(a, &q0, &q1, &q2), bd(a, &moved.0, &moved.1, &moved.2)) {
            (Ok(v), Ok(w)) => rep.defect("B_d(gq) = g B_d(q) g^-1", w.distance(&g.conjugate(&v)), tol, || {
                format!("({q0:?}, {q1:?}, {q2:?}), g = {g:?}")
            }),
            (Err(e), _) | (_, Err(e)) => rep.error("B_d(gq) = g B_d(q) g^-1", e),
        }
    }
    rep.touch("B_d(gq) = g B_d(q) g^-1");
    rep
}

/// The group element d comparing s_R(r₀, r₂) with s_R(r₀, r₁) s_R(r₁, r₂)
/// in the gauge groupoid, both read with first slot lift(r₀).
/// Equals B_d(lift r₀, lift r₁, lift r₂)⁻¹.
pub fn sr_morphism_defect<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    r0: &B::Base,
    r1: &B::Base,
    r2: &B::Base,
) -> Result<B::Group> {
    let b = &a.bundle;
    let q = [b.lift(r0)?, b.lift(r1)?, b.lift(r2)?];
    if !in_triple_domain(&a.domain, &q[0], &q[1], &q[2]) {
        return Err(Error::DomainViolation(format!(
            "lifts of ({r0:?}, {r1:?}, {r2:?}) not in U^(3)"
        )));
    }
    let s = F_HR(&F_CH(a));
    let x = s.apply(&(r0.clone(), r1.clone()))?;
    let y = s.apply(&(r1.clone(), r2.clone()))?;
    let z = s.apply(&(r0.clone(), r2.clone()))?;
    let xy = make_gauge_groupoid(b).multiply(&x, &y)?;
    let (_, lhs) = lambda(b, &q[0], &z)?;
    let (_, rhs) = lambda(b, &q[0], &xy)?;
    b.kappa(&lhs, &rhs)
}

/// s_R is multiplicative at sampled base triples.
pub fn check_sr_morphism<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &a.bundle;
    let mut rep = CheckReport::new(format!("s_R multiplicativity for {}", a.name));
    let clause = "s_R(x y) = s_R(x) s_R(y)";
    for _ in 0..samples {
        let r = [b.sample_base(rng), b.sample_base(rng), b.sample_base(rng)];
        let q: Vec<_> = r.iter().filter_map(|x| b.lift(x).ok()).collect();
        if q.len() < 3 || !in_triple_domain(&a.domain, &q[0], &q[1], &q[2]) {
            continue;
        }
        match sr_morphism_defect(a, &r[0], &r[1], &r[2]) {
            Ok(d) => rep.defect(clause, d.size(), tol, || format!("({:?}, {:?}, {:?})", r[0], r[1], r[2])),
            Err(e) => rep.error(clause, e),
        }
    }
    rep.touch(clause);
    rep
}

/// phase(⟨q₀, q₁⟩⟨q₁, q₂⟩⟨q₂, q₀⟩).
pub fn bargmann_oracle(q0: &HopfPoint, q1: &HopfPoint, q2: &HopfPoint) -> Result<U1> {
    let p = [hopf_inner(q0, q1), hopf_inner(q1, q2), hopf_inner(q2, q0)];
    if p.iter().any(|z| z.norm() <= EPS) {
        return Err(Error::DomainViolation(format!(
            "orthogonal pair in ({q0:?}, {q1:?}, {q2:?})"
        )));
    }
    Ok(U1::phase(p[0] * p[1] * p[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{HopfBundle, TrivialBundle};
    use crate::connections::{flat_trivial, hopf_canonical, magnetic};
    use crate::groups::{reduce_angle, Su2};
    use crate::sampling::{seeded, uniform_in, unit_vector};
    use std::f64::consts::FRAC_PI_4;

    /// Van Oosterom–Strachee: tan(Ω/2) = a·(b×c) / (1 + a·b + b·c + c·a).
    fn half_solid_angle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
        let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let cross = [
            b[1] * c[2] - b[2] * c[1],
            b[2] * c[0] - b[0] * c[2],
            b[0] * c[1] - b[1] * c[0],
        ];
        dot(a, cross).atan2(1.0 + dot(a, b) + dot(b, c) + dot(c, a))
    }

    fn octant() -> (HopfPoint, HopfPoint, HopfPoint) {
        let b = HopfBundle::new();
        (
            b.lift(&[1.0, 0.0, 0.0]).unwrap(),
            b.lift(&[0.0, 1.0, 0.0]).unwrap(),
            b.lift(&[0.0, 0.0, 1.0]).unwrap(),
        )
    }

    #[test]
    fn octant_triple() {
        let a = hopf_canonical(HopfBundle::new());
        let (q0, q1, q2) = octant();
        let v = bd(&a, &q0, &q1, &q2).unwrap();
        assert!((v.signed_angle() - FRAC_PI_4).abs() < 1e-12);
        let o = half_solid_angle([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((o - FRAC_PI_4).abs() < 1e-12);
        assert!(bargmann_oracle(&q0, &q1, &q2).unwrap().distance(&v) < 1e-12);
        let rep = is_flat(&a, 100, 1e-9, &mut seeded(1));
        assert!(!rep.passed());
    }

    #[test]
    fn hopf_matches_both_oracles() {
        let b = HopfBundle::new();
        let a = hopf_canonical(b.clone());
        let mut rng = seeded(2);
        for _ in 0..2000 {
            let (q0, q1, q2) = a.domain.sample_triple(&b, &mut rng).unwrap();
            let v = bd(&a, &q0, &q1, &q2).unwrap();
            assert!(v.distance(&bargmann_oracle(&q0, &q1, &q2).unwrap()) < 1e-9);
            let o = half_solid_angle(b.project(&q0), b.project(&q1), b.project(&q2));
            assert!(reduce_angle(v.signed_angle() - o).abs() < 1e-9);
        }
    }

    #[test]
    fn one_fiber_gives_kappa_product() {
        let b = HopfBundle::new();
        let q = b.sample_point(&mut seeded(3));
        let (g1, g2) = (U1::new(0.7), U1::new(2.1));
        let (q1, q2) = (b.act(&g1, &q), b.act(&g2, &q));
        let expected = b.kappa(&q1, &q).unwrap().mul(&b.kappa(&q2, &q1).unwrap()).mul(&b.kappa(&q, &q2).unwrap());
        assert!(bargmann_oracle(&q, &q1, &q2).unwrap().distance(&expected) < 1e-12);
        assert!(bargmann_oracle(&q, &q, &q).unwrap().size() < 1e-15);
    }

    #[test]
    fn magnetic_shoelace() {
        let field = 0.8;
        let b = TrivialBundle::<U1>::plane();
        let a = magnetic(b.clone(), field);
        let mut rng = seeded(4);
        for _ in 0..1000 {
            let m: [[f64; 2]; 3] = std::array::from_fn(|_| [uniform_in(&mut rng, -1.5, 1.5), uniform_in(&mut rng, -1.5, 1.5)]);
            let q: Vec<_> = m.iter().map(|x| b.point(*x, U1::sample(&mut rng))).collect();
            let area = ((m[1][0] - m[0][0]) * (m[2][1] - m[0][1]) - (m[2][0] - m[0][0]) * (m[1][1] - m[0][1])) / 2.0;
            let v = bd(&a, &q[0], &q[1], &q[2]).unwrap();
            assert!(reduce_angle(v.signed_angle() - field * area).abs() < 1e-12);
            let d = sr_morphism_defect(&a, &m[0], &m[1], &m[2]).unwrap();
            assert!(d.distance(&v.inv()) < 1e-12);
        }
        let rep = is_flat(&a, 50, 1e-9, &mut rng);
        assert!(!rep.passed() && rep.witness().is_some());
        // Collinear points have zero area.
        let m = [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]];
        assert!(sr_morphism_defect(&a, &m[0], &m[1], &m[2]).unwrap().size() < 1e-12);
    }

    #[test]
    fn flat_connections_are_flat() {
        let mut rng = seeded(5);
        let a = flat_trivial(TrivialBundle::<Su2>::torus());
        assert!(is_flat(&a, 500, 1e-9, &mut rng).passed());
        assert!(check_sr_morphism(&a, 500, 1e-9, &mut rng).passed());
        assert!(check_curvature_identities(&a, 200, 1e-9, &mut rng).passed());
        let a = flat_trivial(TrivialBundle::<U1>::plane());
        assert!(is_flat(&a, 500, 1e-9, &mut rng).passed());
    }

    #[test]
    fn flat_form_composes_in_opposite_group() {
        let b = TrivialBundle::<Su2>::plane();
        let a = flat_trivial(b.clone());
        let mut rng = seeded(8);
        let mut plain: f64 = 0.0;
        for _ in 0..200 {
            let q: Vec<_> = (0..3).map(|_| b.sample_point(&mut rng)).collect();
            let a01 = a.eval(&q[0], &q[1]).unwrap();
            let a12 = a.eval(&q[1], &q[2]).unwrap();
            let a02 = a.eval(&q[0], &q[2]).unwrap();
            assert!(a02.distance(&a01.opposite_mul(&a12)) < 1e-12);
            plain = plain.max(a02.distance(&a01.mul(&a12)));
        }
        assert!(plain > 1e-3);
    }

    #[test]
    fn defect_is_inverse_curvature_on_hopf() {
        let b = HopfBundle::new();
        let a = hopf_canonical(b.clone());
        let mut rng = seeded(6);
        let mut biggest: f64 = 0.0;
        for _ in 0..500 {
            let r: [[f64; 3]; 3] = std::array::from_fn(|_| unit_vector::<3>(&mut rng));
            let q: Vec<_> = r.iter().map(|x| b.lift(x).unwrap()).collect();
            if !in_triple_domain(&a.domain, &q[0], &q[1], &q[2]) {
                continue;
            }
            let d = sr_morphism_defect(&a, &r[0], &r[1], &r[2]).unwrap();
            let v = bd(&a, &q[0], &q[1], &q[2]).unwrap();
            assert!(d.distance(&v.inv()) < 1e-9);
            biggest = biggest.max(d.size());
        }
        assert!(biggest > 1e-3);
        let rep = check_sr_morphism(&a, 200, 1e-9, &mut rng);
        assert!(!rep.passed());
        assert!(check_curvature_identities(&a, 200, 1e-9, &mut rng).passed());
    }

    #[test]
    fn outside_domain() {
        let b = HopfBundle::new();
        let a = hopf_canonical(b.clone());
        let n = b.lift(&[0.0, 0.0, 1.0]).unwrap();
        let s = b.lift(&[0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(bd(&a, &n, &n, &s), Err(Error::DomainViolation(_))));
        assert!(matches!(bargmann_oracle(&n, &n, &s), Err(Error::DomainViolation(_))));
    }
}
