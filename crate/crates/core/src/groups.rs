//! Concrete Lie groups: U(1), SU(2) and additive R^n.
//!
//! Equality is tolerance based. Each group carries a metric used for
//! defects: U(1) uses the reduced angle difference, SU(2) the geodesic
//! angle on S³, R^n the Euclidean norm.

use crate::error::{Error, Result};
use crate::sampling;
use num_complex::Complex64;
use rand::RngCore;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt::Debug;

/// Default comparison tolerance.
pub const EPS: f64 = 1e-9;
/// Normalization tolerance for payloads.
pub const EPS_NORM: f64 = 1e-12;

pub trait Group: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn name() -> String;
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    /// Group-distance metric.
    fn distance(&self, other: &Self) -> f64;
    fn sample(rng: &mut dyn RngCore) -> Self;
    fn is_abelian() -> bool;
    fn to_element(&self) -> GroupElement;

    /// g h g⁻¹
    fn conjugate(&self, h: &Self) -> Self {
        self.mul(h).mul(&self.inv())
    }

    /// Product in the opposite group: a * b = b · a.
    fn opposite_mul(&self, other: &Self) -> Self {
        other.mul(self)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Distance to the identity.
    fn size(&self) -> f64 {
        self.distance(&Self::identity())
    }
}

/// Reduces an angle to (−π, π].
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Unit complex number stored as an angle in [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U1(f64);

impl U1 {
    pub fn new(theta: f64) -> Self {
        let r = theta.rem_euclid(TAU);
        U1(if r >= TAU { 0.0 } else { r })
    }

    /// Phase of a nonzero complex number.
    pub fn phase(z: Complex64) -> Self {
        U1::new(z.arg())
    }

    pub fn angle(&self) -> f64 {
        self.0
    }

    /// Angle in (−π, π].
    pub fn signed_angle(&self) -> f64 {
        reduce_angle(self.0)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl Group for U1 {
    fn name() -> String {
        "U(1)".into()
    }
    fn identity() -> Self {
        U1(0.0)
    }
    fn mul(&self, other: &Self) -> Self {
        U1::new(self.0 + other.0)
    }
    fn inv(&self) -> Self {
        U1::new(-self.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        reduce_angle(self.0 - other.0).abs()
    }
    fn sample(rng: &mut dyn RngCore) -> Self {
        U1::new(sampling::angle(rng))
    }
    fn is_abelian() -> bool {
        true
    }
    fn to_element(&self) -> GroupElement {
        GroupElement::U1 { angle: self.0 }
    }
}

/// Unit quaternion (w, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2([f64; 4]);

impl Su2 {
    /// Normalizes `q` to unit length; `None` for the zero quaternion.
    pub fn new(q: [f64; 4]) -> Option<Self> {
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < EPS_NORM || !n.is_finite() {
            return None;
        }
        Some(Su2(q.map(|x| x / n)))
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    pub fn i() -> Self {
        Su2([0.0, 1.0, 0.0, 0.0])
    }
    pub fn j() -> Self {
        Su2([0.0, 0.0, 1.0, 0.0])
    }
    pub fn k() -> Self {
        Su2([0.0, 0.0, 0.0, 1.0])
    }

    pub fn neg(&self) -> Self {
        Su2(self.0.map(|x| -x))
    }

    /// exp(θ u) for a unit axis u.
    pub fn from_axis_angle(axis: [f64; 3], theta: f64) -> Self {
        let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (s, c) = theta.sin_cos();
        Su2([c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n])
    }

    fn product(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        let [a0, a1, a2, a3] = a;
        let [b0, b1, b2, b3] = b;
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ]
    }
}

impl Group for Su2 {
    fn name() -> String {
        "SU(2)".into()
    }
    fn identity() -> Self {
        Su2([1.0, 0.0, 0.0, 0.0])
    }
    fn mul(&self, other: &Self) -> Self {
        let p = Su2::product(self.0, other.0);
        Su2::new(p).unwrap_or_else(Su2::identity)
    }
    fn inv(&self) -> Self {
        let [w, x, y, z] = self.0;
        Su2([w, -x, -y, -z])
    }
    fn distance(&self, other: &Self) -> f64 {
        let d = Su2::product(self.inv().0, other.0);
        let im = (d[1] * d[1] + d[2] * d[2] + d[3] * d[3]).sqrt();
        im.atan2(d[0])
    }
    fn sample(rng: &mut dyn RngCore) -> Self {
        Su2(sampling::unit_vector::<4>(rng))
    }
    fn is_abelian() -> bool {
        false
    }
    fn to_element(&self) -> GroupElement {
        GroupElement::Su2 { quaternion: self.0 }
    }
}

/// Additive group R^N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rn<const N: usize>(pub [f64; N]);

impl<const N: usize> Group for Rn<N> {
    fn name() -> String {
        format!("R^{N}")
    }
    fn identity() -> Self {
        Rn([0.0; N])
    }
    fn mul(&self, other: &Self) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Rn(v)
    }
    fn inv(&self) -> Self {
        Rn(self.0.map(|x| -x))
    }
    fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
    fn sample(rng: &mut dyn RngCore) -> Self {
        let mut v = [0.0; N];
        for x in v.iter_mut() {
            *x = sampling::normal(rng);
        }
        Rn(v)
    }
    fn is_abelian() -> bool {
        true
    }
    fn to_element(&self) -> GroupElement {
        GroupElement::Rn {
            vector: self.0.to_vec(),
        }
    }
}

/// Group element tagged by its group, for heterogeneous values and reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum GroupElement {
    U1 { angle: f64 },
    Su2 { quaternion: [f64; 4] },
    Rn { vector: Vec<f64> },
}

impl GroupElement {
    pub fn group_name(&self) -> String {
        match self {
            GroupElement::U1 { .. } => U1::name(),
            GroupElement::Su2 { .. } => Su2::name(),
            GroupElement::Rn { vector } => format!("R^{}", vector.len()),
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::GroupMismatch {
            left: self.group_name(),
            right: other.group_name(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        use GroupElement::*;
        match (self, other) {
            (U1 { angle: a }, U1 { angle: b }) => Ok(self::U1::new(*a).mul(&self::U1::new(*b)).to_element()),
            (Su2 { quaternion: a }, Su2 { quaternion: b }) => {
                Ok(Su2 { quaternion: self::Su2::product(*a, *b) }.normalized())
            }
            (Rn { vector: a }, Rn { vector: b }) if a.len() == b.len() => Ok(Rn {
                vector: a.iter().zip(b).map(|(x, y)| x + y).collect(),
            }),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn inv(&self) -> Self {
        use GroupElement::*;
        match self {
            U1 { angle } => self::U1::new(-angle).to_element(),
            Su2 { quaternion: [w, x, y, z] } => Su2 { quaternion: [*w, -x, -y, -z] },
            Rn { vector } => Rn { vector: vector.iter().map(|x| -x).collect() },
        }
    }

    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        self.mul(h)?.mul(&self.inv())
    }

    pub fn opposite_mul(&self, other: &Self) -> Result<Self> {
        other.mul(self)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        use GroupElement::*;
        match (self, other) {
            (U1 { angle: a }, U1 { angle: b }) => Ok(reduce_angle(a - b).abs()),
            (Su2 { quaternion: a }, Su2 { quaternion: b }) => {
                Ok(self::Su2(*a).distance(&self::Su2(*b)))
            }
            (Rn { vector: a }, Rn { vector: b }) if a.len() == b.len() => {
                Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
            }
            _ => Err(self.mismatch(other)),
        }
    }

    fn normalized(self) -> Self {
        match self {
            GroupElement::Su2 { quaternion } => {
                let q = self::Su2::new(quaternion).unwrap_or_else(self::Su2::identity);
                q.to_element()
            }
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::seeded;
    use proptest::prelude::*;

    fn su2() -> impl Strategy<Value = Su2> {
        any::<u64>().prop_map(|s| Su2::sample(&mut seeded(s)))
    }

    fn u1() -> impl Strategy<Value = U1> {
        (0.0..TAU).prop_map(U1::new)
    }

    fn quat_close(a: Su2, b: [f64; 4]) -> bool {
        a.coords().iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn u1_angles_add() {
        let g = U1::new(0.3).mul(&U1::new(0.4));
        assert!((g.angle() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn u1_stays_in_range() {
        assert_eq!(U1::new(TAU).angle(), 0.0);
        assert_eq!(U1::new(-1e-300).angle(), 0.0);
        assert!((U1::new(-0.5).angle() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn quaternion_table() {
        // i j i⁻¹ = i j (−i) = k (−i) = −j
        assert!(quat_close(Su2::i().conjugate(&Su2::j()), [0.0, 0.0, -1.0, 0.0]));
        // j · i = −k
        assert!(quat_close(Su2::i().opposite_mul(&Su2::j()), [0.0, 0.0, 0.0, -1.0]));
        assert!(quat_close(Su2::i().mul(&Su2::j()), [0.0, 0.0, 0.0, 1.0]));
        assert!(quat_close(Su2::i().mul(&Su2::i()), [-1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn su2_keeps_sign() {
        // −1 is not the identity in SU(2).
        let m = Su2::i().mul(&Su2::i());
        assert!((m.size() - PI).abs() < 1e-12);
        assert!(!m.approx_eq(&Su2::identity(), EPS));
    }

    #[test]
    fn su2_distance_is_geodesic_angle() {
        let g = Su2::from_axis_angle([0.0, 0.0, 1.0], 0.25);
        assert!((g.size() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn q_times_conjugate_is_identity() {
        let mut rng = seeded(7);
        let q = Su2::sample(&mut rng);
        assert!(q.mul(&q.inv()).approx_eq(&Su2::identity(), EPS));
    }

    #[test]
    fn tagged_elements_reject_mixed_groups() {
        let a = U1::new(0.3).to_element();
        let b = Su2::i().to_element();
        assert!(matches!(a.mul(&b), Err(Error::GroupMismatch { .. })));
        assert!(matches!(a.conjugate(&b), Err(Error::GroupMismatch { .. })));
        let r2 = Rn([1.0, 2.0]).to_element();
        let r3 = Rn([1.0, 2.0, 3.0]).to_element();
        assert!(r2.mul(&r3).is_err());
    }

    #[test]
    fn tagged_elements_match_typed_ops() {
        let i = Su2::i().to_element();
        let j = Su2::j().to_element();
        let c = i.conjugate(&j).unwrap();
        assert!(c.distance(&Su2::j().neg().to_element()).unwrap() < 1e-15);
        let o = i.opposite_mul(&j).unwrap();
        assert!(o.distance(&Su2::k().neg().to_element()).unwrap() < 1e-15);
        let s = U1::new(0.3).to_element().mul(&U1::new(0.4).to_element()).unwrap();
        assert!(s.distance(&U1::new(0.7).to_element()).unwrap() < 1e-15);
    }

    #[test]
    fn rn_is_additive() {
        let a = Rn([1.0, -2.0]);
        let b = Rn([0.5, 0.5]);
        assert_eq!(a.mul(&b), Rn([1.5, -1.5]));
        assert_eq!(a.mul(&a.inv()), Rn::identity());
        assert_eq!(a.conjugate(&b), b);
    }

    proptest! {
        #[test]
        fn su2_associative(a in su2(), b in su2(), c in su2()) {
            prop_assert!(a.mul(&b).mul(&c).approx_eq(&a.mul(&b.mul(&c)), EPS));
        }

        #[test]
        fn su2_inverse_and_identity(g in su2()) {
            prop_assert!(g.mul(&g.inv()).approx_eq(&Su2::identity(), EPS));
            prop_assert!(g.mul(&Su2::identity()).approx_eq(&g, EPS));
            prop_assert!(g.conjugate(&Su2::identity()).approx_eq(&Su2::identity(), EPS));
            prop_assert!(Su2::identity().conjugate(&g).approx_eq(&g, EPS));
        }

        #[test]
        fn su2_payload_normalized(a in su2(), b in su2()) {
            let n: f64 = a.mul(&b).coords().iter().map(|x| x * x).sum();
            prop_assert!((n - 1.0).abs() < EPS_NORM);
        }

        #[test]
        fn opposite_is_reversed_product(a in su2(), b in su2()) {
            prop_assert_eq!(a.opposite_mul(&b), b.mul(&a));
        }

        #[test]
        fn u1_abelian_laws(a in u1(), b in u1(), c in u1()) {
            prop_assert!(a.mul(&b).mul(&c).approx_eq(&a.mul(&b.mul(&c)), EPS));
            prop_assert!(a.conjugate(&b).approx_eq(&b, EPS));
            prop_assert!(a.opposite_mul(&b).approx_eq(&a.mul(&b), EPS));
            prop_assert!(a.mul(&a.inv()).approx_eq(&U1::identity(), EPS));
            prop_assert!((0.0..TAU).contains(&a.mul(&b).angle()));
        }

        #[test]
        fn distance_is_symmetric(a in su2(), b in su2()) {
            prop_assert!((a.distance(&b) - b.distance(&a)).abs() < 1e-12);
            prop_assert!(a.distance(&a) < 1e-7);
        }
    }
}
