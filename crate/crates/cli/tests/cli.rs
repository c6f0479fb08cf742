use std::process::Command;

use paracr_cli::report::{AnalysisReport, EmbedReport, FiniteTypeReport, FlowsReport, KernelReport};
use paracr_cli::{run, Outcome, EXIT_FLOW, EXIT_OK, EXIT_USAGE};
use paracr_core::exactalg::rational::parse_rational;
use paracr_core::{ModelSurface, Poly};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("liealg_report").chain(args.iter().copied()))
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> (T, String) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = cli(&full);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    (serde_json::from_str(&out.stdout).unwrap(), out.stdout)
}

fn analyze(k: &str, gamma: &str) -> (AnalysisReport, String) {
    json(&["analyze", "--k", k, "--gamma", gamma])
}

#[test]
fn analyze_monomial() {
    let (r, _) = analyze("4", "0,1,0");
    assert_eq!(r.algebra.classification.as_deref(), Some("SL2_PLUS_CENTER"));
    assert_eq!(r.algebra.weights, vec![-4, 0, 0, 4]);
    assert_eq!(r.discrete_group.group, "Z2xZ2");
    assert_eq!(r.case.label, "MONOMIAL");
    assert_eq!(r.singular_locus.label, "PENCIL");
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    let names: Vec<&str> = r.flow_verification.flows.iter().map(|f| f.flow.as_str()).collect();
    assert_eq!(names, ["EXP_Vmk", "EXP_V0", "EXP_V0PRIME", "EXP_VK"]);
}

#[test]
fn analyze_binomial() {
    let (r, _) = analyze("3", "3,3");
    assert_eq!(r.algebra.classification.as_deref(), Some("SOLVABLE_3D_WEIGHTS_K_1"));
    assert_eq!(r.algebra.weights, vec![-3, -1, 0]);
    let n = r.normalization.expect("normalized form");
    assert_eq!(n.normal_surface.gamma, ["3/1", "3/1"]);
    // the printed flow formula is reported, not silently replaced
    let p = r.flow_verification.printed_vm1.clone().expect("printed formula check");
    assert!(!p.matches);
    assert!(p.conjugated_error < 1e-6);
    assert!(r.warnings.iter().any(|w| w.contains("EXP_Vm1")));
    assert!(r.flow_verification.passed());
}

#[test]
fn analyze_scaled_binomial_normal_form() {
    // gamma_i = C(4, i) 2 3^i
    let (r, _) = analyze("4", "24,108,216");
    assert_eq!(r.case.delta.as_deref(), Some("2/1"));
    assert_eq!(r.case.nu.as_deref(), Some("3/1"));
    let n = r.normalization.unwrap();
    assert_eq!(n.normal_surface.gamma, ["4/1", "6/1", "4/1"]);
}

#[test]
fn analyze_generic() {
    let (r, _) = analyze("4", "1,0,1");
    assert_eq!(r.algebra.classification.as_deref(), Some("AFFINE_LINE_2D"));
    assert_eq!(r.singular_locus.label, "POINT");
    assert_eq!(r.discrete_group.group, "Z2xZ2");
    assert!(r.warnings.is_empty());
}

#[test]
fn boundary_iota_is_flagged() {
    for (k, gamma) in [("3", "1,0"), ("4", "1,0,0")] {
        let (r, _) = analyze(k, gamma);
        assert_ne!(r.algebra.dimension, 4);
        assert!(
            r.warnings.iter().any(|w| w.contains("boundary iota=1")),
            "{:?}",
            r.warnings
        );
    }
}

#[test]
fn json_round_trip_is_lossless() {
    for (k, gamma) in [("4", "0,1,0"), ("3", "3,3"), ("5", "1,1,0,0")] {
        let (r, raw) = analyze(k, gamma);
        let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
        assert_eq!(again, raw);
        // rationals and polynomials parse back to exact values
        let gamma: Vec<_> = r.surface.gamma.iter().map(|g| parse_rational(g).unwrap()).collect();
        let s = ModelSurface::new(i64::from(r.surface.k), gamma).unwrap();
        assert_eq!(r.surface.p.parse::<Poly>().unwrap(), s.p());
        for g in &r.algebra.generators {
            assert!(g.field().unwrap().tangency_residual(&s).is_zero());
        }
        for b in &r.algebra.structure_constants {
            for c in &b.coeffs {
                parse_rational(c).unwrap();
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for fmt in ["text", "json"] {
        let a = cli(&["analyze", "--k", "5", "--gamma", "0,1,0,0", "--format", fmt]);
        let b = cli(&["analyze", "--k", "5", "--gamma", "0,1,0,0", "--format", fmt]);
        assert_eq!(a, b);
    }
}

#[test]
fn text_and_json_agree() {
    let (r, _) = analyze("4", "0,1,0");
    let text = cli(&["analyze", "--k", "4", "--gamma", "0,1,0"]).stdout;
    assert!(text.contains(&format!("dimension {}", r.algebra.dimension)));
    assert!(text.contains("classification: SL2_PLUS_CENTER"));
    for f in &r.flow_verification.flows {
        let e = f.oracle_max_error.unwrap();
        assert!(text.contains(&format!("rk4 max error: {e:e}")), "{e:e}");
        for run in &f.runs {
            for c in &run.checks {
                assert!(text.contains(&format!("{} ", c.check)));
                let shown = format!("{:e}", c.max_residual);
                assert_eq!(shown.parse::<f64>().unwrap(), c.max_residual);
            }
        }
    }
    let sc = &r.algebra.structure_constants;
    assert_eq!(text.matches("[e").count(), sc.len());
}

#[test]
fn solve_weight_minus_one() {
    let (r, _): (KernelReport, _) = json(&["solve-weight", "--k", "3", "--gamma", "3,3", "--weight", "-1"]);
    assert_eq!(r.dimension, 1);
    assert_eq!(r.generators.len(), 1);
    assert_eq!(r.generators[0].weight, -1);
}

#[test]
fn finite_type_examples() {
    let (r, _): (FiniteTypeReport, _) = json(&["finite-type", "--phi", "a*b"]);
    assert_eq!(r.result.result, "INFINITE");
    let (r, _): (FiniteTypeReport, _) = json(&["finite-type", "--phi", "b^2*x^2"]);
    assert_eq!((r.result.result.as_str(), r.result.k), ("FINITE", Some(4)));
    let (r, _): (FiniteTypeReport, _) = json(&["finite-type", "--phi", "x^3 + b*x^2"]);
    assert_eq!(r.result.k, Some(3));
}

#[test]
fn embed_exponential() {
    let (r, _): (EmbedReport, _) = json(&["embed", "--psi", "a", "--order", "4"]);
    let want = ["a", "-a", "1/2 a", "-1/6 a", "1/24 a"];
    let got: Vec<Poly> = r.coefficients.iter().map(|c| c.parse().unwrap()).collect();
    let want: Vec<Poly> = want.iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(got, want);
    assert!(r.solves_transport);
    assert!(r.induced_field.unwrap().matches_frame);
}

#[test]
fn singular_locus_and_discrete() {
    let out = cli(&["singular-locus", "--k", "4", "--gamma", "1,0,0"]);
    assert!(out.stdout.contains("singular locus: LINE"));
    let out = cli(&["discrete", "--k", "3", "--gamma", "1,1"]);
    assert!(out.stdout.contains("discrete group: Z2\n"));
}

#[test]
fn usage_errors() {
    let out = cli(&["analyze", "--k", "4", "--gamma", "1,q,0"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("position 2"), "{}", out.stderr);
    assert!(out.stderr.contains("\n    ^"), "{}", out.stderr);
    for args in [
        &["analyze", "--k", "2", "--gamma", "1"][..],
        &["analyze", "--k", "4", "--gamma", "0,0,0"],
        &["analyze", "--k", "4", "--gamma", "1,2"],
        &["analyze", "--k", "4"],
        &["finite-type", "--phi", "a b +"],
        &["finite-type", "--phi", "y"],
        &["embed", "--psi", "x^"],
        &["flows", "--k", "4", "--gamma", "0,1,0", "--tolerance", "-1"],
        &["nonsense"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn tolerance_failure_exits_with_flow_code() {
    // sampled residuals of EXP_VK are rounding-sized, not zero
    let out = cli(&["flows", "--k", "4", "--gamma", "0,1,0", "--tolerance", "1e-300", "--format", "json"]);
    assert_eq!(out.code, EXIT_FLOW);
    let r: FlowsReport = serde_json::from_str(&out.stdout).unwrap();
    let vk = r.verification.flows.iter().find(|f| f.flow == "EXP_VK").unwrap();
    assert!(!vk.passed && vk.failure.is_some());
    assert!(r.verification.flows.iter().filter(|f| f.flow != "EXP_VK").all(|f| f.passed));
}

#[test]
fn binary_exit_codes_and_seed() {
    let bin = env!("CARGO_BIN_EXE_liealg_report");
    let out = Command::new(bin)
        .args(["flows", "--k", "3", "--gamma", "3,3", "--format", "json"])
        .env("PARACR_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r: FlowsReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.verification.seed, 7);

    let out = Command::new(bin).args(["analyze", "--k", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin).args(["analyze", "--k", "4", "--gamma", "0,1,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(out.stdout).unwrap().contains("warnings: none"));
}
