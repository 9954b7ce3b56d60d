//! External actions of a local groupoid G on a totally intransitive Lie
//! groupoid H, the semidirect product H⋊G, its canonical split extension,
//! and the passage between right splittings and semidirect products.

use crate::bundles::PrincipalBundle;
use crate::connections::{DiscreteConnection, F_CH, F_HR};
use crate::error::{Error, Result};
use crate::groupoids::{
    check_axioms, check_llgpd_extension, check_morphism, das_extension, Extension,
    GroupoidMorphism, LocalGroupoid, Value,
};
use crate::quotients::Gauge;
use crate::report::CheckReport;
use rand::RngCore;
use std::sync::Arc;

type Bullet<EG, EH> = Arc<dyn Fn(&EG, &EH) -> Result<EH> + Send + Sync>;

/// A partial map (g, h) ↦ g•h defined when β_G(g) = α_H(h).
pub struct ExternalAction<EH, EG, M> {
    pub name: String,
    pub h: Arc<LocalGroupoid<EH, M>>,
    pub g: Arc<LocalGroupoid<EG, M>>,
    pub bullet: Bullet<EG, EH>,
}

impl<EH, EG, M> Clone for ExternalAction<EH, EG, M> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            h: self.h.clone(),
            g: self.g.clone(),
            bullet: self.bullet.clone(),
        }
    }
}

impl<EH: Value, EG: Value, M: Value> ExternalAction<EH, EG, M> {
    pub fn new(
        name: impl Into<String>,
        h: Arc<LocalGroupoid<EH, M>>,
        g: Arc<LocalGroupoid<EG, M>>,
        bullet: impl Fn(&EG, &EH) -> Result<EH> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            h,
            g,
            bullet: Arc::new(bullet),
        }
    }

    pub fn act(&self, g: &EG, h: &EH) -> Result<EH> {
        let d = self.g.base_dist(&self.g.beta(g), &self.h.alpha(h));
        if d > self.g.tol {
            return Err(Error::DomainViolation(format!(
                "{}: beta(g) != alpha(h) for g = {g:?}, h = {h:?}",
                self.name
            )));
        }
        (self.bullet)(g, h)
    }
}

/// Clauses (1)–(4) of an external action plus two derived identities.
pub fn check_action<EH: Value, EG: Value, M: Value>(
    act: &ExternalAction<EH, EG, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let (h, g) = (&act.h, &act.g);
    let mut rep = CheckReport::new(format!("action {}", act.name));
    rep.check("H is a totally intransitive Lie groupoid", h.totally_intransitive && h.fully_multiplicable, || {
        h.name.clone()
    });
    for _ in 0..samples {
        let x = g.sample_element(rng);
        let y = h.sample_from(&g.beta(&x), rng);
        let w = || format!("g = {x:?}, h = {y:?}");
        match act.act(&x, &y) {
            Ok(xy) => {
                rep.defect("(1) alpha_H(g.h) = alpha_G(g)", h.base_dist(&h.alpha(&xy), &g.alpha(&x)), tol, w);
                match act.act(&x, &h.inverse(&y)) {
                    Ok(v) => rep.defect("(g.h)^-1 = g.h^-1", h.dist(&h.inverse(&xy), &v), tol, w),
                    Err(e) => rep.error("(g.h)^-1 = g.h^-1", e),
                }
            }
            Err(e) => rep.error("(1) alpha_H(g.h) = alpha_G(g)", e),
        }

        // (2)
        if let Some((g1, g2)) = g.sample_gm_pair(rng) {
            let y = h.sample_from(&g.beta(&g2), rng);
            let lhs = g.multiply(&g1, &g2).and_then(|p| act.act(&p, &y));
            let rhs = act.act(&g2, &y).and_then(|v| act.act(&g1, &v));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => rep.defect("(2) (g1 g2).h = g1.(g2.h)", h.dist(&l, &r), tol, || {
                    format!("g1 = {g1:?}, g2 = {g2:?}, h = {y:?}")
                }),
                (Err(e), _) | (_, Err(e)) => rep.error("(2) (g1 g2).h = g1.(g2.h)", e),
            }
        }

        // (3)
        let h1 = h.sample_from(&g.beta(&x), rng);
        let h2 = h.sample_from(&g.beta(&x), rng);
        let lhs = h.multiply(&h1, &h2).and_then(|p| act.act(&x, &p));
        let rhs = act
            .act(&x, &h1)
            .and_then(|a| act.act(&x, &h2).and_then(|b| h.multiply(&a, &b)));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => rep.defect("(3) g.(h1 h2) = (g.h1)(g.h2)", h.dist(&l, &r), tol, || {
                format!("g = {x:?}, h1 = {h1:?}, h2 = {h2:?}")
            }),
            (Err(e), _) | (_, Err(e)) => rep.error("(3) g.(h1 h2) = (g.h1)(g.h2)", e),
        }

        // (4)
        let y = h.sample_element(rng);
        match act.act(&g.epsilon(&h.alpha(&y)), &y) {
            Ok(v) => rep.defect("(4) eps_G(alpha_H(h)).h = h", h.dist(&v, &y), tol, || format!("{y:?}")),
            Err(e) => rep.error("(4) eps_G(alpha_H(h)).h = h", e),
        }

        match act.act(&x, &h.epsilon(&g.beta(&x))) {
            Ok(v) => rep.defect("g.eps_H(beta(g)) = eps_H(alpha(g))", h.dist(&v, &h.epsilon(&g.alpha(&x))), tol, || {
                format!("{x:?}")
            }),
            Err(e) => rep.error("g.eps_H(beta(g)) = eps_H(alpha(g))", e),
        }
    }
    rep.touch("(2) (g1 g2).h = g1.(g2.h)");
    rep
}

/// Elements (h, g) with β_H(h) = α_G(g).
pub type SemidirectElement<EH, EG> = (EH, EG);

/// H⋊G together with the action it was built from.
pub struct Semidirect<EH, EG, M> {
    pub action: ExternalAction<EH, EG, M>,
    pub groupoid: Arc<LocalGroupoid<SemidirectElement<EH, EG>, M>>,
}

impl<EH, EG, M> Clone for Semidirect<EH, EG, M> {
    fn clone(&self) -> Self {
        Self {
            action: self.action.clone(),
            groupoid: self.groupoid.clone(),
        }
    }
}

/// H⋊G without validating the action.
pub fn build_semidirect_unchecked<EH: Value, EG: Value, M: Value>(
    act: &ExternalAction<EH, EG, M>,
) -> Semidirect<EH, EG, M> {
    let (h, g) = (act.h.clone(), act.g.clone());
    let a = act.clone();
    let p = LocalGroupoid {
        name: format!("{} x| {}", h.name, g.name),
        totally_intransitive: false,
        fully_multiplicable: g.fully_multiplicable,
        alpha: { let g = g.clone(); Arc::new(move |x: &(EH, EG)| g.alpha(&x.1)) },
        beta: { let g = g.clone(); Arc::new(move |x: &(EH, EG)| g.beta(&x.1)) },
        epsilon: {
            let (h, g) = (h.clone(), g.clone());
            Arc::new(move |m: &M| (h.epsilon(m), g.epsilon(m)))
        },
        inverse: {
            let (h, g, a) = (h.clone(), g.clone(), a.clone());
            Arc::new(move |x: &(EH, EG)| {
                let gi = g.inverse(&x.1);
                let v = a.act(&gi, &x.0).expect("g^-1 acts on h");
                (h.inverse(&v), gi)
            })
        },
        product: {
            let (h, g, a) = (h.clone(), g.clone(), a.clone());
            Arc::new(move |x: &(EH, EG), y: &(EH, EG)| {
                let moved = a.act(&x.1, &y.0)?;
                Ok((h.multiply(&x.0, &moved)?, g.multiply(&x.1, &y.1)?))
            })
        },
        gm: { let g = g.clone(); Arc::new(move |x: &(EH, EG), y: &(EH, EG)| g.gm_member(&x.1, &y.1)) },
        contains: {
            let (h, g) = (h.clone(), g.clone());
            Arc::new(move |x: &(EH, EG)| {
                h.contains(&x.0) && g.contains(&x.1) && g.base_dist(&h.beta(&x.0), &g.alpha(&x.1)) <= g.tol
            })
        },
        elem_dist: {
            let (h, g) = (h.clone(), g.clone());
            Arc::new(move |x: &(EH, EG), y: &(EH, EG)| h.dist(&x.0, &y.0) + g.dist(&x.1, &y.1))
        },
        base_dist: g.base_dist.clone(),
        sample_base: g.sample_base.clone(),
        sample_from: {
            let (h, g) = (h.clone(), g.clone());
            Arc::new(move |m: &M, rng: &mut dyn RngCore| (h.sample_from(m, rng), g.sample_from(m, rng)))
        },
        resample: match (&h.resample, &g.resample) {
            (Some(rh), Some(rg)) => {
                let (rh, rg) = (rh.clone(), rg.clone());
                Some(Arc::new(move |x: &(EH, EG), rng: &mut dyn RngCore| (rh(&x.0, rng), rg(&x.1, rng))))
            }
            _ => None,
        },
        tol: g.tol,
    };
    Semidirect {
        action: act.clone(),
        groupoid: Arc::new(p),
    }
}

/// H⋊G with m_P((h₁, g₁), (h₂, g₂)) = (h₁(g₁•h₂), g₁g₂) on P_m = (ρ×ρ)⁻¹(G_m).
pub fn build_semidirect<EH: Value, EG: Value, M: Value>(
    act: &ExternalAction<EH, EG, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<Semidirect<EH, EG, M>> {
    let rep = check_action(act, samples, tol, rng);
    if !rep.passed() {
        return Err(Error::ActionInvalid(format!(
            "{}: {}",
            act.name,
            rep.witness().unwrap_or_default()
        )));
    }
    Ok(build_semidirect_unchecked(act))
}

/// An extension with a chosen morphism s satisfying ρ∘s = id.
pub struct SplitExtension<E1, E2, E3, M> {
    pub ext: Extension<E1, E2, E3, M>,
    pub s: GroupoidMorphism<E3, M, E2, M>,
}

impl<E1, E2, E3, M> Clone for SplitExtension<E1, E2, E3, M> {
    fn clone(&self) -> Self {
        Self {
            ext: self.ext.clone(),
            s: self.s.clone(),
        }
    }
}

pub type SemidirectSplit<EH, EG, M> = SplitExtension<EH, SemidirectElement<EH, EG>, EG, M>;

/// H → H⋊G → G with j⋊(h) = (h, ε_G(β_H h)), ρ⋊(h, g) = g and
/// s⋊(g) = (ε_H(α_G g), g).
pub fn semidirect_extension<EH: Value, EG: Value, M: Value>(p: &Semidirect<EH, EG, M>) -> SemidirectSplit<EH, EG, M> {
    let (h, g, pg) = (p.action.h.clone(), p.action.g.clone(), p.groupoid.clone());
    let j = {
        let (g, hh) = (g.clone(), h.clone());
        GroupoidMorphism::new("j", h.clone(), pg.clone(), move |x: &EH| Ok((x.clone(), g.epsilon(&hh.beta(x)))))
    };
    let rho = GroupoidMorphism::new("rho", pg.clone(), g.clone(), |x: &(EH, EG)| Ok(x.1.clone()));
    let s = {
        let (h, gg) = (h.clone(), g.clone());
        GroupoidMorphism::new("s", g.clone(), pg.clone(), move |x: &EG| Ok((h.epsilon(&gg.alpha(x)), x.clone())))
    };
    let s2 = s.clone();
    let (hk, gk) = (h.clone(), g.clone());
    SplitExtension {
        ext: Extension {
            eta1: j,
            eta2: rho,
            eta1_inverse: Arc::new(|x: &(EH, EG)| Ok(x.0.clone())),
            eta2_section: Arc::new(move |x: &EG| s2.apply(x)),
            kernel_sample: Arc::new(move |m: &M, rng: &mut dyn RngCore| (hk.sample_from(m, rng), gk.epsilon(m))),
        },
        s,
    }
}

/// Policy for the hypothesis E_m = (ρ×ρ)⁻¹(G_m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EmPolicy {
    #[default]
    HardFail,
    Ignore,
}

fn violated(hypothesis: &str, witness: String) -> Error {
    Error::HypothesisViolated {
        hypothesis: hypothesis.into(),
        witness,
    }
}

/// Validates ρ∘s = id, s as a morphism and E_m = (ρ×ρ)⁻¹(G_m) at samples.
pub fn check_splitting<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    policy: EmPolicy,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<()> {
    let (e, g) = (split.ext.total(), split.ext.quotient());
    let rho = &split.ext.eta2;
    for _ in 0..samples {
        let x = g.sample_element(rng);
        let back = split.s.apply(&x).and_then(|y| rho.apply(&y))?;
        if g.dist(&back, &x) > tol {
            return Err(violated("rho o s = id", format!("{x:?}")));
        }
    }
    let rep = check_morphism(&split.s, samples, tol, rng);
    if !rep.passed() {
        return Err(violated("s is a morphism", rep.witness().unwrap_or_default()));
    }
    if policy == EmPolicy::HardFail {
        for _ in 0..samples {
            let a = e.sample_element(rng);
            let b = e.sample_from(&e.beta(&a), rng);
            if !e.composable(&a, &b) || !e.contains(&a) || !e.contains(&b) {
                continue;
            }
            let (ra, rb) = (rho.apply(&a)?, rho.apply(&b)?);
            if e.gm_member(&a, &b) != g.gm_member(&ra, &rb) {
                return Err(violated("E_m = (rho x rho)^-1(G_m)", format!("({a:?}, {b:?})")));
            }
        }
    }
    Ok(())
}

/// g•h = j⁻¹(s(g) j(h) s(g)⁻¹).
pub fn action_from_splitting<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<ExternalAction<E1, E3, M>> {
    action_from_splitting_with(split, EmPolicy::default(), samples, tol, rng)
}

pub fn action_from_splitting_with<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    policy: EmPolicy,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<ExternalAction<E1, E3, M>> {
    check_splitting(split, policy, samples, tol, rng)?;
    let sp = split.clone();
    Ok(ExternalAction::new(
        format!("{} acting on {}", split.ext.quotient().name, split.ext.kernel_groupoid().name),
        split.ext.kernel_groupoid().clone(),
        split.ext.quotient().clone(),
        move |g: &E3, h: &E1| {
            let e = sp.ext.total();
            let sg = sp.s.apply(g)?;
            let x = e.multiply(&sg, &sp.ext.eta1.apply(h)?)?;
            let y = e.multiply(&x, &e.inverse(&sg))?;
            (sp.ext.eta1_inverse)(&y)
        },
    ))
}

/// Φ(e) = (j⁻¹(e s(ρ(e⁻¹))), ρ(e)).
pub fn phi_from_splitting<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    p: &Semidirect<E1, E3, M>,
) -> GroupoidMorphism<E2, M, SemidirectElement<E1, E3>, M> {
    let sp = split.clone();
    GroupoidMorphism::new("Phi", split.ext.total().clone(), p.groupoid.clone(), move |x: &E2| {
        let e = sp.ext.total();
        let r = sp.ext.eta2.apply(x)?;
        let back = sp.s.apply(&sp.ext.eta2.apply(&e.inverse(x))?)?;
        let k = e.multiply(x, &back)?;
        Ok(((sp.ext.eta1_inverse)(&k)?, r))
    })
}

/// Ψ(h, g) = j(h) s(g).
pub fn psi_inverse<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    p: &Semidirect<E1, E3, M>,
) -> GroupoidMorphism<SemidirectElement<E1, E3>, M, E2, M> {
    let sp = split.clone();
    GroupoidMorphism::new("Psi", p.groupoid.clone(), split.ext.total().clone(), move |x: &(E1, E3)| {
        sp.ext.total().multiply(&sp.ext.eta1.apply(&x.0)?, &sp.s.apply(&x.1)?)
    })
}

/// Φ, Ψ and the semidirect product they land in.
pub struct SplitData<E1, E2, E3, M> {
    pub action: ExternalAction<E1, E3, M>,
    pub semidirect: Semidirect<E1, E3, M>,
    pub phi: GroupoidMorphism<E2, M, SemidirectElement<E1, E3>, M>,
    pub psi: GroupoidMorphism<SemidirectElement<E1, E3>, M, E2, M>,
}

/// F_RI: the action, H⋊G and Φ from a splitting.
pub fn f_ri<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<SplitData<E1, E2, E3, M>> {
    let action = action_from_splitting(split, samples, tol, rng)?;
    let semidirect = build_semidirect(&action, samples, tol, rng)?;
    let phi = phi_from_splitting(split, &semidirect);
    let psi = psi_inverse(split, &semidirect);
    Ok(SplitData { action, semidirect, phi, psi })
}

/// F_IR: the splitting Φ⁻¹∘s⋊ of the original extension.
pub fn f_ir<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    data: &SplitData<E1, E2, E3, M>,
) -> SplitExtension<E1, E2, E3, M> {
    let s_rt = semidirect_extension(&data.semidirect).s;
    let psi = data.psi.clone();
    let s = GroupoidMorphism::new("Phi^-1 o s", split.ext.quotient().clone(), split.ext.total().clone(), move |g: &E3| {
        psi.apply(&s_rt.apply(g)?)
    });
    SplitExtension {
        ext: split.ext.clone(),
        s,
    }
}

/// Φ∘Ψ = id, Ψ∘Φ = id, Φ∘j = j⋊, ρ⋊∘Φ = ρ, F_IR∘F_RI = id and F_RI∘F_IR = id
/// at sampled elements.
pub fn roundtrip_ri_ir<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> Result<CheckReport> {
    let data = f_ri(split, samples, tol, rng)?;
    let canonical = semidirect_extension(&data.semidirect);
    let back = f_ir(split, &data);
    let again = f_ri(&back, samples, tol, rng)?;
    let (e, g, h) = (split.ext.total(), split.ext.quotient(), split.ext.kernel_groupoid());
    let p = &data.semidirect.groupoid;
    let mut rep = CheckReport::new("split extensions and semidirect products");
    for _ in 0..samples {
        let x = e.sample_element(rng);
        let w = || format!("{x:?}");
        match data.phi.apply(&x) {
            Ok(px) => {
                match data.psi.apply(&px) {
                    Ok(y) => rep.defect("Psi o Phi = id", e.dist(&y, &x), tol, w),
                    Err(err) => rep.error("Psi o Phi = id", err),
                }
                match (split.ext.eta2.apply(&x), canonical.ext.eta2.apply(&px)) {
                    (Ok(a), Ok(b)) => rep.defect("rho_rt o Phi = rho", g.dist(&a, &b), tol, w),
                    (Err(err), _) | (_, Err(err)) => rep.error("rho_rt o Phi = rho", err),
                }
                match again.phi.apply(&x) {
                    Ok(qx) => rep.defect("F_RI o F_IR = id", p.dist(&qx, &px), tol, w),
                    Err(err) => rep.error("F_RI o F_IR = id", err),
                }
            }
            Err(err) => rep.error("Psi o Phi = id", err),
        }

        let y = p.sample_element(rng);
        match data.psi.apply(&y).and_then(|v| data.phi.apply(&v)) {
            Ok(v) => rep.defect("Phi o Psi = id", p.dist(&v, &y), tol, || format!("{y:?}")),
            Err(err) => rep.error("Phi o Psi = id", err),
        }

        let k = h.sample_element(rng);
        match (split.ext.eta1.apply(&k).and_then(|v| data.phi.apply(&v)), canonical.ext.eta1.apply(&k)) {
            (Ok(a), Ok(b)) => rep.defect("Phi o j = j_rt", p.dist(&a, &b), tol, || format!("{k:?}")),
            (Err(err), _) | (_, Err(err)) => rep.error("Phi o j = j_rt", err),
        }

        let z = g.sample_element(rng);
        match (back.s.apply(&z), split.s.apply(&z)) {
            (Ok(a), Ok(b)) => rep.defect("F_IR o F_RI = id", e.dist(&a, &b), tol, || format!("{z:?}")),
            (Err(err), _) | (_, Err(err)) => rep.error("F_IR o F_RI = id", err),
        }

        let k2 = h.sample_from(&g.beta(&z), rng);
        let lhs = data.action.act(&z, &k2).and_then(|v| canonical.ext.eta1.apply(&v));
        let rhs = canonical.s.apply(&z).and_then(|sz| {
            let jk = canonical.ext.eta1.apply(&k2)?;
            let t = p.multiply(&sz, &jk)?;
            p.multiply(&t, &p.inverse(&sz))
        });
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => rep.defect("j_rt(g.h) = s_rt(g) j_rt(h) s_rt(g)^-1", p.dist(&a, &b), tol, || {
                format!("g = {z:?}, h = {k2:?}")
            }),
            (Err(err), _) | (_, Err(err)) => rep.error("j_rt(g.h) = s_rt(g) j_rt(h) s_rt(g)^-1", err),
        }
    }
    rep.merge(check_morphism(&data.phi, samples, tol, rng));
    Ok(rep)
}

/// The whole chain for a split extension: action, semidirect axioms, the
/// semidirect extension, and the round trips.
pub fn check_semidirect_pipeline<E1: Value, E2: Value, E3: Value, M: Value>(
    split: &SplitExtension<E1, E2, E3, M>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let mut rep = CheckReport::new("semidirect pipeline");
    let action = match action_from_splitting(split, samples, tol, rng) {
        Ok(a) => a,
        Err(e) => {
            rep.error("action from splitting", e);
            return rep;
        }
    };
    rep.check("action from splitting", true, String::new);
    rep.merge(check_action(&action, samples, tol, rng));
    let p = build_semidirect_unchecked(&action);
    rep.merge(check_axioms(&p.groupoid, samples, tol, rng));
    rep.merge(check_llgpd_extension(&semidirect_extension(&p).ext, samples, tol, rng));
    match roundtrip_ri_ir(split, samples, tol, rng) {
        Ok(r) => rep.merge(r),
        Err(e) => rep.error("round trips", e),
    }
    rep
}

/// The discrete Atiyah sequence over the connection's domain, split by s_R.
pub type DasSplit<B> = SplitExtension<
    crate::quotients::Conj<B>,
    Gauge<B>,
    (<B as PrincipalBundle>::Base, <B as PrincipalBundle>::Base),
    <B as PrincipalBundle>::Base,
>;

pub fn das_split_extension<B: PrincipalBundle>(
    a: &DiscreteConnection<B>,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<DasSplit<B>> {
    let ext = das_extension(&a.bundle, &a.domain, samples, rng)?;
    let s_r = F_HR(&F_CH(a));
    let s = GroupoidMorphism::new(
        format!("s_R[{}]", a.name),
        ext.quotient().clone(),
        ext.total().clone(),
        move |p: &(B::Base, B::Base)| s_r.apply(p),
    );
    Ok(SplitExtension { ext, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{HopfBundle, TrivialBundle};
    use crate::connections::{flat_trivial, hopf_canonical, magnetic};
    use crate::groupoids::{group_bundle_groupoid, pair_groupoid};
    use crate::groups::{Group, Su2, EPS, U1};
    use crate::quotients::{conj_dist, ConjClass};
    use crate::sampling::seeded;

    type Pt = [f64; 2];

    fn transport<G: Group>(
        b: &TrivialBundle<G>,
    ) -> ExternalAction<(Pt, G), (Pt, Pt), Pt> {
        ExternalAction::new(
            "transport",
            Arc::new(group_bundle_groupoid(b)),
            Arc::new(pair_groupoid(b)),
            |g: &(Pt, Pt), h: &(Pt, G)| Ok((g.0, h.1.clone())),
        )
    }

    #[test]
    fn transport_action_is_valid() {
        let mut rng = seeded(1);
        let b = TrivialBundle::<Su2>::plane();
        let act = transport(&b);
        assert!(check_action(&act, 300, EPS, &mut rng).passed());
        let p = build_semidirect(&act, 100, EPS, &mut rng).unwrap();
        assert!(check_axioms(&p.groupoid, 300, EPS, &mut rng).passed());
        let m = [0.2, -0.4];
        let e = p.groupoid.epsilon(&m);
        let ee = p.groupoid.multiply(&e, &e).unwrap();
        assert!(p.groupoid.dist(&ee, &e) < EPS);
        let x = p.groupoid.sample_element(&mut rng);
        let xi = p.groupoid.multiply(&x, &p.groupoid.inverse(&x)).unwrap();
        assert!(p.groupoid.dist(&xi, &p.groupoid.epsilon(&p.groupoid.alpha(&x))) < EPS);
        let split = semidirect_extension(&p);
        assert!(check_llgpd_extension(&split.ext, 300, EPS, &mut rng).passed());
        assert!(check_morphism(&split.s, 300, EPS, &mut rng).passed());
    }

    #[test]
    fn mutated_bullet_fails_clause_three() {
        let mut rng = seeded(2);
        let b = TrivialBundle::<U1>::plane();
        let mut act = transport(&b);
        act.bullet = Arc::new(|g: &(Pt, Pt), h: &(Pt, U1)| Ok((g.0, h.1.mul(&U1::new(0.5)))));
        let rep = check_action(&act, 100, EPS, &mut rng);
        let c = rep.clause("(3) g.(h1 h2) = (g.h1)(g.h2)").unwrap();
        assert!(!c.passed() && c.witness.is_some());
        assert!(matches!(build_semidirect(&act, 50, EPS, &mut rng), Err(Error::ActionInvalid(_))));
    }

    #[test]
    fn partial_h_is_rejected() {
        let mut rng = seeded(3);
        let b = TrivialBundle::<U1>::plane();
        let act = transport(&b);
        let mut h = (*act.h).clone();
        h.fully_multiplicable = false;
        let act = ExternalAction { h: Arc::new(h), ..act };
        assert!(!check_action(&act, 10, EPS, &mut rng).passed());
    }

    #[test]
    fn canonical_splitting_recovers_bullet() {
        let mut rng = seeded(4);
        let b = TrivialBundle::<Su2>::torus();
        let act = transport(&b);
        let p = build_semidirect(&act, 50, EPS, &mut rng).unwrap();
        let split = semidirect_extension(&p);
        let rec = action_from_splitting(&split, 100, EPS, &mut rng).unwrap();
        for _ in 0..200 {
            let g = act.g.sample_element(&mut rng);
            let h = act.h.sample_from(&act.g.beta(&g), &mut rng);
            let d = act.h.dist(&rec.act(&g, &h).unwrap(), &act.act(&g, &h).unwrap());
            assert!(d < EPS);
        }
        let rep = roundtrip_ri_ir(&split, 200, EPS, &mut rng).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn flat_das_pipeline() {
        let mut rng = seeded(5);
        let a = flat_trivial(TrivialBundle::<U1>::plane());
        let split = das_split_extension(&a, 50, &mut rng).unwrap();
        let rep = check_semidirect_pipeline(&split, 200, 1e-9, &mut rng);
        assert!(rep.passed(), "{rep}");
        let a = flat_trivial(TrivialBundle::<Su2>::torus());
        let split = das_split_extension(&a, 50, &mut rng).unwrap();
        let rep = check_semidirect_pipeline(&split, 200, 1e-9, &mut rng);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn das_phi_matches_connection() {
        let mut rng = seeded(6);
        let b = TrivialBundle::<Su2>::plane();
        let a = flat_trivial(b.clone());
        let split = das_split_extension(&a, 50, &mut rng).unwrap();
        let data = f_ri(&split, 100, 1e-9, &mut rng).unwrap();
        for _ in 0..100 {
            let x = split.ext.total().sample_element(&mut rng);
            let (c, pair) = data.phi.apply(&x).unwrap();
            let expected = ConjClass::new(x.rep0, a.eval(&x.rep0, &x.rep1).unwrap());
            assert!(conj_dist(&b, &c, &expected) < 1e-9);
            assert!(b.base_dist(&pair.0, &b.project(&x.rep0)) < 1e-12);
            assert!(b.base_dist(&pair.1, &b.project(&x.rep1)) < 1e-12);
        }
    }

    #[test]
    fn abelian_bullet_is_kappa_transport() {
        let mut rng = seeded(7);
        let b = TrivialBundle::<U1>::plane();
        let split = das_split_extension(&flat_trivial(b.clone()), 50, &mut rng).unwrap();
        let act = action_from_splitting(&split, 100, 1e-9, &mut rng).unwrap();
        for _ in 0..100 {
            let g = act.g.sample_element(&mut rng);
            let h = act.h.sample_from(&act.g.beta(&g), &mut rng);
            let v = act.act(&g, &h).unwrap();
            assert!(v.g.distance(&h.g) < 1e-12);
        }
    }

    #[test]
    fn curved_connections_give_no_action() {
        let mut rng = seeded(8);
        let split = das_split_extension(&magnetic(TrivialBundle::<U1>::plane(), 1.0), 50, &mut rng).unwrap();
        let err = action_from_splitting(&split, 100, 1e-9, &mut rng).err().unwrap();
        assert!(matches!(err, Error::HypothesisViolated { .. }));
        let split = das_split_extension(&hopf_canonical(HopfBundle::new()), 50, &mut rng).unwrap();
        assert!(action_from_splitting(&split, 100, 1e-9, &mut rng).is_err());
        assert!(!check_semidirect_pipeline(&split, 50, 1e-9, &mut rng).passed());
    }

    #[test]
    fn em_condition_is_enforced() {
        let mut rng = seeded(9);
        let b = TrivialBundle::<U1>::plane();
        let mut split = das_split_extension(&flat_trivial(b), 50, &mut rng).unwrap();
        let mut e = (*split.ext.eta1.target).clone();
        // Horizontal classes stay multiplicable, so s remains a morphism.
        e.gm = Arc::new(|x: &Gauge<TrivialBundle<U1>>, _: &Gauge<TrivialBundle<U1>>| {
            x.rep0.fiber.distance(&x.rep1.fiber) < 1e-9 || x.rep0.base[0] > 0.0
        });
        let e = Arc::new(e);
        split.ext.eta1.target = e.clone();
        split.ext.eta2.source = e.clone();
        split.s.target = e;
        let r = action_from_splitting(&split, 100, 1e-9, &mut rng);
        assert!(matches!(r, Err(Error::HypothesisViolated { ref hypothesis, .. }) if hypothesis.starts_with("E_m")));
        assert!(action_from_splitting_with(&split, EmPolicy::Ignore, 100, 1e-9, &mut rng).is_ok());
    }
}
