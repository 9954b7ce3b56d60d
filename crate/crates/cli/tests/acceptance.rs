//! Acceptance criteria at their pinned sample counts and tolerances.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use atiyah_cli::{run, Scenario};
use atiyah_core::bundles::{hopf_domain, HopfBundle, PrincipalBundle, TrivialBundle};
use atiyah_core::connections::{check_roundtrips, flat_trivial, hopf_canonical, magnetic, DiscreteConnection};
use atiyah_core::curvature::{bargmann_oracle, bd, sr_morphism_defect};
use atiyah_core::fbs::{check_fbs_extension, FbsSequence};
use atiyah_core::groupoids::{
    base_groupoid, check_axioms, check_llgpd_extension, das_extension, group_groupoid,
    make_conj_groupoid, make_gauge_groupoid, opposite_group_groupoid, pair_groupoid,
};
use atiyah_core::groups::{reduce_angle, Group, Su2, U1};
use atiyah_core::quotients::{Gauge, GaugeClass};
use atiyah_core::report::CheckReport;
use atiyah_core::sampling::{seeded, uniform_in};
use atiyah_core::semidirect::{check_semidirect_pipeline, das_split_extension};
use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn summary(rep: &CheckReport) -> String {
    match rep.witness() {
        Some(w) if !rep.passed() => format!("{}: {w}", rep.failed_clauses()[0].clause),
        _ => format!("max defect {:.2e}", rep.max_defect()),
    }
}

fn axioms<B: PrincipalBundle>(a: &DiscreteConnection<B>, seed: u64) -> Outcome {
    let start = Instant::now();
    let rep = a.check_axioms(10_000, 1e-9, &mut seeded(seed));
    let secs = start.elapsed().as_secs_f64();
    let ok = rep.passed()
        && ["A(q,q) = e", "A(q,gq) = g", "GxG equivariance"]
            .iter()
            .all(|c| rep.clause(c).is_some_and(|c| c.samples >= 10_000));
    (ok && secs < 10.0, format!("{} {} in {secs:.2}s", a.name, summary(&rep)))
}

fn criterion_1() -> Outcome {
    let parts = [
        axioms(&flat_trivial(TrivialBundle::<Su2>::plane()), 1),
        axioms(&magnetic(TrivialBundle::<U1>::plane(), 1.0), 2),
        axioms(&hopf_canonical(HopfBundle::new()), 3),
    ];
    (parts.iter().all(|p| p.0), parts.map(|p| p.1).join("; "))
}

fn roundtrips<B: PrincipalBundle>(a: &DiscreteConnection<B>, seed: u64) -> Outcome {
    let rep = check_roundtrips(a, 1000, 2e-9, &mut seeded(seed));
    let needed = ["F_HC o F_CH", "F_LC o F_CL", "F_UL o F_LU", "F_DR o F_RD", "Psi_A o Phi_A"];
    let ok = rep.passed() && needed.iter().all(|c| rep.clause(c).is_some_and(|c| c.samples >= 1000));
    (ok, format!("{} {}", a.name, summary(&rep)))
}

fn criterion_2() -> Outcome {
    let parts = [
        roundtrips(&flat_trivial(TrivialBundle::<Su2>::torus()), 4),
        roundtrips(&magnetic(TrivialBundle::<U1>::plane(), 1.0), 5),
        roundtrips(&hopf_canonical(HopfBundle::new()), 6),
    ];
    (parts.iter().all(|p| p.0), parts.map(|p| p.1).join("; "))
}

fn criterion_3() -> Outcome {
    let t = TrivialBundle::<Su2>::plane();
    let h = HopfBundle::new();
    let a = check_fbs_extension(&t, &FbsSequence::atiyah(&t), &atiyah_core::PairSubset::all(), 1000, 1e-9, &mut seeded(7));
    let b = check_fbs_extension(&h, &FbsSequence::atiyah(&h), &hopf_domain(), 1000, 1e-9, &mut seeded(8));
    (a.passed() && b.passed(), format!("trivial {}; hopf {}", summary(&a), summary(&b)))
}

fn criterion_4() -> Outcome {
    let mut rng = seeded(9);
    let h = HopfBundle::new();
    let t = TrivialBundle::<Su2>::plane();
    let n = 1000;
    let mut reports = vec![
        check_axioms(&pair_groupoid(&h), n, 1e-9, &mut rng),
        check_axioms(&base_groupoid(&h), n, 1e-9, &mut rng),
        check_axioms(&make_gauge_groupoid(&h), n, 1e-9, &mut rng),
        check_axioms(&make_gauge_groupoid(&t), n, 1e-9, &mut rng),
        check_axioms(&make_conj_groupoid(&t), n, 1e-9, &mut rng),
        check_axioms(&group_groupoid::<Su2>(), n, 1e-9, &mut rng),
        check_axioms(&opposite_group_groupoid::<Su2>(), n, 1e-9, &mut rng),
    ];
    match das_extension(&h, &hopf_domain(), n, &mut rng) {
        Ok(ext) => reports.push(check_axioms(ext.quotient(), n, 1e-9, &mut rng)),
        Err(e) => return (false, format!("restriction to U'' failed: {e}")),
    }
    let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.clone()).collect();

    let mut mutated = make_gauge_groupoid(&t);
    mutated.product = Arc::new(|x: &Gauge<TrivialBundle<Su2>>, y: &Gauge<TrivialBundle<Su2>>| Ok(GaugeClass::new(x.rep0, y.rep1)));
    let m = check_axioms(&mutated, n, 1e-9, &mut rng);
    let caught = !m.passed() && m.witness().is_some();
    (
        bad.is_empty() && caught,
        format!("{} instances pass, failing: {bad:?}; mutated multiplication caught: {caught}", reports.len() - bad.len()),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = seeded(10);
    let h = HopfBundle::new();
    match das_extension(&h, &hopf_domain(), 1000, &mut rng) {
        Ok(ext) => {
            let rep = check_llgpd_extension(&ext, 1000, 1e-9, &mut rng);
            (rep.passed(), summary(&rep))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(11);
    let field = 1.0;
    let t = TrivialBundle::<U1>::plane();
    let a = magnetic(t.clone(), field);
    let mut shoelace: f64 = 0.0;
    for _ in 0..1000 {
        let m: [[f64; 2]; 3] = std::array::from_fn(|_| [uniform_in(&mut rng, -1.5, 1.5), uniform_in(&mut rng, -1.5, 1.5)]);
        let q = m.map(|x| t.point(x, U1::sample(&mut rng)));
        let area = ((m[1][0] - m[0][0]) * (m[2][1] - m[0][1]) - (m[2][0] - m[0][0]) * (m[1][1] - m[0][1])) / 2.0;
        let v = bd(&a, &q[0], &q[1], &q[2]).map(|v| reduce_angle(v.signed_angle() - field * area).abs());
        shoelace = shoelace.max(v.unwrap_or(f64::INFINITY));
    }

    let h = HopfBundle::new();
    let ha = hopf_canonical(h.clone());
    let mut bargmann: f64 = 0.0;
    for _ in 0..10_000 {
        let (q0, q1, q2) = ha.domain.sample_triple(&h, &mut rng).expect("generic triples lie in U^(3)");
        let d = match (bd(&ha, &q0, &q1, &q2), bargmann_oracle(&q0, &q1, &q2)) {
            (Ok(v), Ok(o)) => v.distance(&o),
            _ => f64::INFINITY,
        };
        bargmann = bargmann.max(d);
    }

    let octant = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].map(|r| h.lift(&r).unwrap());
    let angle = bd(&ha, &octant[0], &octant[1], &octant[2]).map(|v| v.signed_angle()).unwrap_or(f64::NAN);
    let ok = shoelace <= 1e-12 && bargmann <= 1e-9 && (angle - FRAC_PI_4).abs() <= 1e-9;
    (ok, format!("shoelace {shoelace:.2e}, bargmann {bargmann:.2e}, octant angle {angle:.12}"))
}

fn worst_defect<B: PrincipalBundle>(a: &DiscreteConnection<B>, triples: usize, seed: u64) -> (f64, String) {
    let b = &a.bundle;
    let mut rng = seeded(seed);
    let (mut worst, mut witness) = (0.0, String::new());
    let mut done = 0;
    while done < triples {
        let r = [b.sample_base(&mut rng), b.sample_base(&mut rng), b.sample_base(&mut rng)];
        let Ok(d) = sr_morphism_defect(a, &r[0], &r[1], &r[2]) else { continue };
        done += 1;
        if d.size() > worst {
            worst = d.size();
            witness = format!("{r:?}");
        }
    }
    (worst, witness)
}

fn criterion_7() -> Outcome {
    let (flat, _) = worst_defect(&flat_trivial(TrivialBundle::<Su2>::plane()), 10_000, 12);
    let (mag, mw) = worst_defect(&magnetic(TrivialBundle::<U1>::plane(), 1.0), 100, 13);
    let (hopf, hw) = worst_defect(&hopf_canonical(HopfBundle::new()), 100, 14);
    (
        flat <= 1e-9 && mag > 1e-3 && hopf > 1e-3,
        format!("flat {flat:.2e}; magnetic {mag:.3} at {mw}; hopf {hopf:.3} at {hw}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = seeded(15);
    let a = flat_trivial(TrivialBundle::<Su2>::plane());
    match das_split_extension(&a, 1000, &mut rng) {
        Ok(split) => {
            let rep = check_semidirect_pipeline(&split, 1000, 1e-9, &mut rng);
            let needed = ["Phi o j = j_rt", "rho_rt o Phi = rho", "F_IR o F_RI = id", "F_RI o F_IR = id"];
            let present = needed.iter().all(|c| {
                rep.clauses.iter().any(|x| x.clause.ends_with(c) && x.samples >= 1000)
            });
            (rep.passed() && present, summary(&rep))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn criterion_9() -> Outcome {
    let all = r#"["fbs-extension","connection-axioms","roundtrips","groupoid-axioms","llgpd-extension","curvature","flatness","semidirect-pipeline"]"#;
    let scenarios = [
        (r#"{"kind": "trivial", "base": "torus", "group": "su2"}"#, r#"{"kind": "flat"}"#),
        (r#"{"kind": "trivial", "base": "r2", "group": "u1"}"#, r#"{"kind": "magnetic", "field": 0.5}"#),
        (r#"{"kind": "hopf"}"#, r#"{"kind": "hopf-canonical"}"#),
    ];
    let mut same = 0;
    for (bundle, conn) in scenarios {
        let text = format!(r#"{{"bundle": {bundle}, "connection": {conn}, "suites": {all}, "samples": 300, "seed": 2024}}"#);
        let s = Scenario::from_json(&text).expect("valid scenario");
        if run(&s).without_timing().to_json() == run(&s).without_timing().to_json() {
            same += 1;
        }
    }
    (same == 3, format!("{same}/3 scenarios byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("connection axioms", criterion_1),
        ("round trips", criterion_2),
        ("fbs extension", criterion_3),
        ("local groupoid axioms", criterion_4),
        ("lLGpd extension", criterion_5),
        ("curvature closed forms", criterion_6),
        ("flatness and s_R multiplicativity", criterion_7),
        ("semidirect pipeline", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        failed += usize::from(!ok);
        println!("criterion {} {name}: {} ({detail})", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
