//! Golden-file corpus: every fixture is a committed `input.json` plus the
//! byte-exact `report.json` the CLI must produce for it.
//!
//! Run with `UPDATE_FIXTURES=1` to regenerate the corpus from the
//! builders below; normal runs assert byte equality (and hence
//! determinism) against the committed files.

use std::path::PathBuf;

use serde_json::Value;

use folia_cli::inputs::{
    CycleSpec, DecomposeInput, DeformationInput, FormInput, RescaleInput, SeriesInput,
};
use folia_cli::{run_job, Command, JobOptions};
use folia_core::fiber::FactoredFiber;
use folia_core::form::{DiffForm, LogForm};
use folia_core::poly::{Monomial, Polynomial, Vars};
use folia_core::scalar::GaussianRational as G;
use folia_core::series::DeformationSeries;

fn mono(vars: &Vars, c: i64, exps: &[u32]) -> Polynomial {
    Polynomial::term(vars, Monomial::new(exps.to_vec()), G::from_int(c))
}

fn planar_fiber() -> FactoredFiber {
    let v = Vars::new(&["x", "y"]);
    FactoredFiber::new(vec![Polynomial::variable(&v, 0), Polynomial::variable(&v, 1)], None)
        .unwrap()
}

fn xyz_fiber() -> FactoredFiber {
    let v = Vars::new(&["x", "y", "z"]);
    let factors = (0..3).map(|i| Polynomial::variable(&v, i)).collect();
    FactoredFiber::new(factors, None).unwrap()
}

/// `ω₁ = x dy − λ·y dx` of the rotation family over `f = xy`.
fn rotation_term(lambda: i64) -> DiffForm {
    let v = Vars::new(&["x", "y"]);
    DiffForm::one_form(&v, vec![mono(&v, -lambda, &[0, 1]), mono(&v, 1, &[1, 0])])
}

fn rotation_series(lambda: i64) -> DeformationSeries {
    let base = planar_fiber().product().differential();
    DeformationSeries::new(vec![base, rotation_term(lambda)])
}

fn planar_torus(c: f64) -> CycleSpec {
    CycleSpec::StandardTorus {
        plane: ["x".into(), "y".into()],
        anchor: vec![G::zero(), G::zero()],
        fiber_value: [c, 0.0],
        fiber_tolerance: 1e-9,
    }
}

fn pretty(value: impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(&value).unwrap();
    s.push('\n');
    s
}

struct Fixture {
    name: &'static str,
    command: Command,
    input: String,
}

fn corpus() -> Vec<Fixture> {
    let mut fixtures = Vec::new();

    // The rotation family ω_t = d(xy) + t(x dy − 2y dx): integrable for
    // every t (all 3-forms in the plane vanish), but obstructed by the
    // residue λ₁ = −3, with period −6πi over the standard torus.
    fixtures.push(Fixture {
        name: "rotation-family-integrable",
        command: Command::CheckIntegrable,
        input: pretty(SeriesInput { series: rotation_series(2) }),
    });
    fixtures.push(Fixture {
        name: "rotation-family-decompose",
        command: Command::Decompose,
        input: pretty(DecomposeInput { fiber: planar_fiber(), omega: rotation_term(2) }),
    });
    fixtures.push(Fixture {
        name: "rotation-family-obstructed",
        command: Command::FirstIntegral,
        input: pretty(DeformationInput {
            fiber: planar_fiber(),
            series: rotation_series(2),
            cycles: vec![planar_torus(1.0)],
        }),
    });
    fixtures.push(Fixture {
        name: "rotation-family-exact",
        command: Command::FirstIntegral,
        input: pretty(DeformationInput {
            fiber: planar_fiber(),
            series: rotation_series(-1),
            cycles: vec![planar_torus(1.0)],
        }),
    });
    fixtures.push(Fixture {
        name: "rotation-family-classify",
        command: Command::ClassifyDegreeOne,
        input: pretty(folia_cli::inputs::ClassifyInput {
            fiber: planar_fiber(),
            omega1: rotation_term(2),
        }),
    });

    // The logarithmic family over f = xyz with residues (1, 2, 3): the
    // period over the (x,y)-torus is 2πi(1−2), over the (x,z)-torus
    // 2πi(1−3).
    let fiber = xyz_fiber();
    let theta = LogForm::new(
        fiber.vars(),
        [1, 2, 3]
            .into_iter()
            .map(G::from_int)
            .zip(fiber.factors().iter().cloned())
            .collect(),
    );
    let omega1 = theta.clear_against(fiber.product()).unwrap();
    let series =
        DeformationSeries::new(vec![fiber.product().differential(), omega1]);
    fixtures.push(Fixture {
        name: "log-family-periods",
        command: Command::Periods,
        input: pretty(DeformationInput {
            fiber: xyz_fiber(),
            series,
            cycles: vec![
                CycleSpec::StandardTorus {
                    plane: ["x".into(), "y".into()],
                    anchor: vec![G::zero(), G::zero(), G::one()],
                    fiber_value: [1.0, 0.0],
                    fiber_tolerance: 1e-9,
                },
                CycleSpec::StandardTorus {
                    plane: ["x".into(), "z".into()],
                    anchor: vec![G::zero(), G::one(), G::zero()],
                    fiber_value: [1.0, 0.0],
                    fiber_tolerance: 1e-9,
                },
            ],
        }),
    });

    // Degree growth: ω_t = dy + t·y dx has deg ω₁ = 1 > ν = 0 over f = y.
    let v = Vars::new(&["x", "y"]);
    let f = Polynomial::variable(&v, 1);
    let growth = DeformationSeries::new(vec![
        f.differential(),
        DiffForm::one_form(&v, vec![mono(&v, 1, &[0, 1]), Polynomial::zero(&v)]),
    ]);
    fixtures.push(Fixture {
        name: "degree-growth-rejected",
        command: Command::FirstIntegral,
        input: pretty(DeformationInput {
            fiber: FactoredFiber::new(vec![f], None).unwrap(),
            series: growth,
            cycles: vec![],
        }),
    });

    // Non-reduced fiber: x²y presented as the factor list [x, x, y] is
    // rejected during fiber validation.
    fixtures.push(Fixture {
        name: "non-reduced-fiber-rejected",
        command: Command::Decompose,
        input: r#"{
  "fiber": {
    "vars": ["x", "y"],
    "factors": [
      { "vars": ["x", "y"], "terms": [{ "coeff": ["1", "0"], "exps": [1, 0] }] },
      { "vars": ["x", "y"], "terms": [{ "coeff": ["1", "0"], "exps": [1, 0] }] },
      { "vars": ["x", "y"], "terms": [{ "coeff": ["1", "0"], "exps": [0, 1] }] }
    ]
  },
  "omega": {
    "p": 1,
    "vars": ["x", "y"],
    "components": {
      "dy": { "vars": ["x", "y"], "terms": [{ "coeff": ["1", "0"], "exps": [1, 1] }] }
    }
  }
}
"#
        .to_string(),
    });

    // Malformed JSON is rejected with exit 2.
    fixtures.push(Fixture {
        name: "malformed-input",
        command: Command::ClassifyDegreeOne,
        input: "{ \"fiber\": [not json\n".to_string(),
    });

    // Rescaling Ω = d(x² + y² + z²) + x² dy into dP + t·Ω₂.
    let v = Vars::new(&["x", "y", "z"]);
    let p = &(&mono(&v, 1, &[2, 0, 0]) + &mono(&v, 1, &[0, 2, 0])) + &mono(&v, 1, &[0, 0, 2]);
    let layer2 = DiffForm::one_form(
        &v,
        vec![Polynomial::zero(&v), mono(&v, 1, &[2, 0, 0]), Polynomial::zero(&v)],
    );
    fixtures.push(Fixture {
        name: "rescale-two-layers",
        command: Command::Rescale,
        input: pretty(RescaleInput {
            omega: p.differential() + layer2,
            nu: None,
            k: None,
        }),
    });

    // Radial dichotomy: the cleared logarithmic form has g = 6xyz ≠ 0 and
    // a closed quotient; the rotation annihilates R.
    let fiber = xyz_fiber();
    let theta = LogForm::new(
        fiber.vars(),
        [1, 2, 3]
            .into_iter()
            .map(G::from_int)
            .zip(fiber.factors().iter().cloned())
            .collect(),
    );
    fixtures.push(Fixture {
        name: "radial-log-family",
        command: Command::RadialTest,
        input: pretty(FormInput { omega: theta.clear_against(fiber.product()).unwrap() }),
    });
    fixtures.push(Fixture {
        name: "radial-rotation",
        command: Command::RadialTest,
        input: pretty(FormInput { omega: rotation_term(1) }),
    });

    fixtures
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn corpus_reports_are_byte_stable() {
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    let mut checked = 0usize;
    for fixture in corpus() {
        let dir = fixtures_dir().join(fixture.name);
        let input_path = dir.join("input.json");
        let report_path = dir.join("report.json");
        let outcome = run_job(fixture.command, &fixture.input, &JobOptions::default());
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&input_path, fixture.input.as_bytes()).unwrap();
            std::fs::write(&report_path, &outcome.report_json).unwrap();
            continue;
        }
        let committed_input = std::fs::read_to_string(&input_path)
            .unwrap_or_else(|e| panic!("missing {}: {e}", input_path.display()));
        assert_eq!(committed_input, fixture.input, "{}: input drifted", fixture.name);
        let committed_report = std::fs::read(&report_path)
            .unwrap_or_else(|e| panic!("missing {}: {e}", report_path.display()));
        assert_eq!(
            String::from_utf8_lossy(&outcome.report_json),
            String::from_utf8_lossy(&committed_report),
            "{}: report drifted",
            fixture.name
        );

        // Determinism: a second run is byte-identical.
        let again = run_job(fixture.command, &fixture.input, &JobOptions::default());
        assert_eq!(outcome.report_json, again.report_json, "{}: nondeterminism", fixture.name);
        assert_eq!(outcome.exit_code, again.exit_code);
        checked += 1;
    }
    if !update {
        assert!(checked >= 10, "corpus shrank unexpectedly: {checked} fixtures");
    }
}

#[test]
fn reports_embed_reparseable_inputs() {
    // The round-trip guarantee: the echoed input of a successful report
    // re-parses to the object the engines actually ran on.
    let input = pretty(DeformationInput {
        fiber: planar_fiber(),
        series: rotation_series(2),
        cycles: vec![planar_torus(4.0)],
    });
    let outcome = run_job(Command::FirstIntegral, &input, &JobOptions::default());
    let report: Value = serde_json::from_slice(&outcome.report_json).unwrap();
    let echoed: DeformationInput =
        serde_json::from_value(report["input"].clone()).expect("echo re-parses");
    assert_eq!(echoed.fiber, planar_fiber());
    assert_eq!(echoed.series, rotation_series(2));
    assert_eq!(echoed.cycles.len(), 1);
    // And the echo is the canonical serialization of that object.
    assert_eq!(serde_json::to_value(&echoed).unwrap(), report["input"]);
}

#[test]
fn exit_codes_cover_the_three_outcomes() {
    let opts = JobOptions::default();
    // Holds.
    let ok = run_job(
        Command::CheckIntegrable,
        &pretty(SeriesInput { series: rotation_series(2) }),
        &opts,
    );
    assert_eq!(ok.exit_code, 0);
    // Fails with witness: z dx over f = xy in three variables.
    let v = Vars::new(&["x", "y", "z"]);
    let f = &Polynomial::variable(&v, 0) * &Polynomial::variable(&v, 1);
    let bad = DeformationSeries::new(vec![
        f.differential(),
        DiffForm::one_form(
            &v,
            vec![mono(&v, 1, &[0, 0, 1]), Polynomial::zero(&v), Polynomial::zero(&v)],
        ),
    ]);
    let fails = run_job(Command::CheckIntegrable, &pretty(SeriesInput { series: bad }), &opts);
    assert_eq!(fails.exit_code, 1);
    let report: Value = serde_json::from_slice(&fails.report_json).unwrap();
    assert_eq!(report["result"]["integrability"]["first_defect_order"], 1);
    // Error.
    let err = run_job(Command::CheckIntegrable, "{}", &opts);
    assert_eq!(err.exit_code, 2);
}
