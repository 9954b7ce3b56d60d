//! Runs the selected suites of a scenario and assembles the report.

use crate::scenario::{BaseKind, ConnectionSpec, ResolvedBundle, ResolvedGroup, Scenario, Suite};
use atiyah_core::bundles::{HopfBundle, PrincipalBundle, TrivialBundle};
use atiyah_core::connections::{check_roundtrips, flat_trivial, hopf_canonical, magnetic, DiscreteConnection, F_CH};
use atiyah_core::curvature::{bargmann_oracle, bd, check_curvature_identities, check_sr_morphism, is_flat, sr_morphism_defect};
use atiyah_core::fbs::{check_fbs_extension, FbsSequence};
use atiyah_core::groupoids::{
    base_groupoid, check_axioms, check_llgpd_extension, das_extension, group_bundle_groupoid,
    group_groupoid, make_conj_groupoid, make_gauge_groupoid, opposite_group_groupoid, pair_groupoid,
};
use atiyah_core::groups::{Group, Rn, Su2, U1};
use atiyah_core::report::{CheckReport, ClauseReport};
use atiyah_core::sampling::{derive_seed, seeded};
use atiyah_core::semidirect::{check_semidirect_pipeline, das_split_extension};
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// A closed form for B_d, computed without the connection.
pub trait CurvatureOracle: PrincipalBundle {
    fn curvature_oracle(
        &self,
        field: Option<f64>,
        q0: &Self::Point,
        q1: &Self::Point,
        q2: &Self::Point,
    ) -> Option<Self::Group>;
}

impl CurvatureOracle for HopfBundle {
    fn curvature_oracle(&self, _: Option<f64>, q0: &Self::Point, q1: &Self::Point, q2: &Self::Point) -> Option<U1> {
        bargmann_oracle(q0, q1, q2).ok()
    }
}

impl CurvatureOracle for TrivialBundle<U1> {
    fn curvature_oracle(&self, field: Option<f64>, q0: &Self::Point, q1: &Self::Point, q2: &Self::Point) -> Option<U1> {
        let (a, b, c) = (q0.base, q1.base, q2.base);
        let area = ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) / 2.0;
        Some(U1::new(field.unwrap_or(0.0) * area))
    }
}

macro_rules! flat_oracle {
    ($($g:ty),*) => {$(
        impl CurvatureOracle for TrivialBundle<$g> {
            fn curvature_oracle(&self, _: Option<f64>, _: &Self::Point, _: &Self::Point, _: &Self::Point) -> Option<$g> {
                Some(<$g>::identity())
            }
        }
    )*};
}
flat_oracle!(Su2, Rn<1>, Rn<2>, Rn<3>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseSummary {
    pub clause: String,
    pub pass: bool,
    pub samples: usize,
    pub failures: usize,
    pub max_defect: f64,
    pub witness: Option<String>,
}

impl From<&ClauseReport> for ClauseSummary {
    fn from(c: &ClauseReport) -> Self {
        Self {
            clause: c.clause.clone(),
            pass: c.passed(),
            samples: c.samples,
            failures: c.failures,
            max_defect: c.max_defect,
            witness: c.witness.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub max_defect: f64,
    pub counterexample: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub clauses: Vec<ClauseSummary>,
    pub untested: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Scenario,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    /// The report with every wall-time field zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for s in &mut r.suites {
            s.wall_time_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }
}

fn run_suite<B: CurvatureOracle>(
    suite: Suite,
    a: &DiscreteConnection<B>,
    field: Option<f64>,
    samples: usize,
    tol: f64,
    rng: &mut dyn RngCore,
) -> CheckReport {
    let b = &a.bundle;
    let mut rep = CheckReport::new(suite.as_str());
    match suite {
        Suite::FbsExtension => {
            rep.merge(check_fbs_extension(b, &FbsSequence::atiyah(b), &a.domain, samples, tol, rng));
        }
        Suite::ConnectionAxioms => {
            rep.merge(a.check_axioms(samples, tol, rng));
            rep.merge(F_CH(a).check_axioms(samples, tol, rng));
        }
        Suite::Roundtrips => rep.merge(check_roundtrips(a, samples, tol, rng)),
        Suite::GroupoidAxioms => {
            rep.merge(check_axioms(&pair_groupoid(b), samples, tol, rng));
            rep.merge(check_axioms(&base_groupoid(b), samples, tol, rng));
            rep.merge(check_axioms(&make_gauge_groupoid(b), samples, tol, rng));
            rep.merge(check_axioms(&make_conj_groupoid(b), samples, tol, rng));
            rep.merge(check_axioms(&group_groupoid::<B::Group>(), samples, tol, rng));
            rep.merge(check_axioms(&opposite_group_groupoid::<B::Group>(), samples, tol, rng));
            rep.merge(check_axioms(&group_bundle_groupoid(b), samples, tol, rng));
            match das_extension(b, &a.domain, samples, rng) {
                Ok(ext) => {
                    rep.merge(check_axioms(ext.total(), samples, tol, rng));
                    rep.merge(check_axioms(ext.quotient(), samples, tol, rng));
                }
                Err(e) => rep.error("restriction to U", e),
            }
        }
        Suite::LlgpdExtension => match das_extension(b, &a.domain, samples, rng) {
            Ok(ext) => rep.merge(check_llgpd_extension(&ext, samples, tol, rng)),
            Err(e) => rep.error("restriction to U", e),
        },
        Suite::Curvature => {
            rep.merge(check_curvature_identities(a, samples, tol, rng));
            for _ in 0..samples {
                let Some((q0, q1, q2)) = a.domain.sample_triple(b, rng) else { continue };
                let w = || format!("({q0:?}, {q1:?}, {q2:?})");
                match (bd(a, &q0, &q1, &q2), b.curvature_oracle(field, &q0, &q1, &q2)) {
                    (Ok(v), Some(o)) => rep.defect("B_d matches closed form", v.distance(&o), tol, w),
                    (Ok(_), None) => rep.check("B_d matches closed form", false, w),
                    (Err(e), _) => rep.error("B_d matches closed form", e),
                }
                let r = [b.project(&q0), b.project(&q1), b.project(&q2)];
                match (sr_morphism_defect(a, &r[0], &r[1], &r[2]), lifted_bd(a, &r)) {
                    (Ok(d), Ok(v)) => rep.defect("s_R defect = B_d^-1", d.distance(&v.inv()), tol, w),
                    (Err(e), _) | (_, Err(e)) => rep.error("s_R defect = B_d^-1", e),
                }
            }
            rep.touch("B_d matches closed form");
        }
        Suite::Flatness => {
            rep.merge(is_flat(a, samples, tol, rng));
            rep.merge(check_sr_morphism(a, samples, tol, rng));
        }
        Suite::SemidirectPipeline => match das_split_extension(a, samples, rng) {
            Ok(split) => rep.merge(check_semidirect_pipeline(&split, samples, tol, rng)),
            Err(e) => rep.error("semidirect pipeline", e),
        },
    }
    rep
}

fn lifted_bd<B: PrincipalBundle>(a: &DiscreteConnection<B>, r: &[B::Base; 3]) -> atiyah_core::Result<B::Group> {
    let b = &a.bundle;
    bd(a, &b.lift(&r[0])?, &b.lift(&r[1])?, &b.lift(&r[2])?)
}

fn run_with<B: CurvatureOracle>(s: &Scenario, a: &DiscreteConnection<B>, field: Option<f64>) -> Report {
    let mut suites = s.suites.clone();
    suites.sort();
    suites.dedup();
    let reports: Vec<SuiteReport> = suites
        .par_iter()
        .map(|&suite| {
            let seed = derive_seed(s.seed, suite.index());
            let mut rng = seeded(seed);
            let start = Instant::now();
            let rep = run_suite(suite, a, field, s.samples, s.tolerance, &mut rng);
            SuiteReport {
                suite,
                pass: rep.passed(),
                max_defect: rep.max_defect(),
                counterexample: rep.witness(),
                samples: rep.total_samples(),
                seed,
                wall_time_ms: start.elapsed().as_millis() as u64,
                clauses: rep.clauses.iter().map(ClauseSummary::from).collect(),
                untested: rep.untested.clone(),
            }
        })
        .collect();
    Report {
        scenario: s.clone(),
        pass: reports.iter().all(|r| r.pass),
        suites: reports,
    }
}

fn trivial<G: Group>(base: BaseKind) -> TrivialBundle<G> {
    match base {
        BaseKind::Torus => TrivialBundle::torus(),
        _ => TrivialBundle::plane(),
    }
}

fn run_flat<G: Group>(s: &Scenario, base: BaseKind) -> Report
where
    TrivialBundle<G>: CurvatureOracle,
{
    run_with(s, &flat_trivial(trivial::<G>(base)), None)
}

/// Runs a validated scenario.
pub fn run(s: &Scenario) -> Report {
    let bundle = s.resolve_bundle().expect("scenario was validated");
    match (bundle, &s.connection) {
        (ResolvedBundle::Hopf, _) => run_with(s, &hopf_canonical(HopfBundle::new()), None),
        (ResolvedBundle::Trivial { base, .. }, ConnectionSpec::Magnetic { field }) => {
            run_with(s, &magnetic(trivial::<U1>(base), *field), Some(*field))
        }
        (ResolvedBundle::Trivial { base, group }, _) => match group {
            ResolvedGroup::U1 => run_flat::<U1>(s, base),
            ResolvedGroup::Su2 => run_flat::<Su2>(s, base),
            ResolvedGroup::Rn(1) => run_flat::<Rn<1>>(s, base),
            ResolvedGroup::Rn(2) => run_flat::<Rn<2>>(s, base),
            ResolvedGroup::Rn(_) => run_flat::<Rn<3>>(s, base),
        },
    }
}
