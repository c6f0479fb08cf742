//! Human-readable rendering. Every number is printed from the same report
//! value that the JSON output serializes.

use std::fmt::Write;

use crate::report::*;

/// `p/1` is shown as `p`.
fn q(s: &str) -> &str {
    s.strip_suffix("/1").unwrap_or(s)
}

fn qs(v: &[String]) -> String {
    v.iter().map(|s| q(s)).collect::<Vec<_>>().join(", ")
}

fn surface_line(out: &mut String, s: &SurfaceInfo) {
    let _ = writeln!(out, "surface: y = a + {}", s.p);
    let _ = writeln!(out, "k: {}", s.k);
    let _ = writeln!(out, "gamma: ({})", qs(&s.gamma));
}

fn field(f: &FieldInfo) -> String {
    let parts: Vec<String> = [(&f.alpha, "d_a"), (&f.beta, "d_b"), (&f.xi, "d_x"), (&f.eta, "d_y")]
        .iter()
        .filter(|(p, _)| p.as_str() != "0")
        .map(|(p, d)| format!("({p}) {d}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn generators(out: &mut String, gens: &[FieldInfo]) {
    for (i, g) in gens.iter().enumerate() {
        let _ = writeln!(out, "  e{i} [weight {}]: {}", g.weight, field(g));
    }
}

fn bracket(b: &Bracket) -> String {
    let terms: Vec<String> = b
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0/1")
        .map(|(l, c)| format!("({}) e{l}", q(c)))
        .collect();
    format!("[e{}, e{}] = {}", b.i, b.j, terms.join(" + "))
}

fn sig(s: &[usize; 3]) -> String {
    format!("(pos={}, neg={}, zero={})", s[0], s[1], s[2])
}

fn finite_type(out: &mut String, t: &FiniteTypeInfo) {
    match (&t.k, &t.gamma) {
        (Some(k), Some(g)) => {
            let _ = writeln!(out, "finite type: {} k={k} gamma=({})", t.result, qs(g));
        }
        _ => {
            let _ = writeln!(out, "finite type: {}", t.result);
        }
    }
    let _ = writeln!(out, "  normalized: {}", t.normalized);
    let _ = writeln!(out, "  truncation degree: {}", t.truncation);
}

fn locus(out: &mut String, l: &LocusInfo) {
    let detail = match (&l.line, l.lines) {
        (Some(line), _) => format!(" ({line} = 0)"),
        (_, Some(n)) => format!(" ({n} real lines)"),
        _ => String::new(),
    };
    let _ = writeln!(out, "singular locus: {}{detail}", l.label);
    let _ = writeln!(out, "  P_xb = {}", l.p_xb);
}

fn discrete(out: &mut String, d: &DiscreteInfo) {
    let _ = writeln!(out, "discrete group: {}", d.group);
    for g in &d.generators {
        let _ = writeln!(out, "  {g}");
    }
    let _ = writeln!(out, "  preserves surface: {}", d.preserves_surface);
    let _ = writeln!(out, "  involutions: {}", d.involutions);
}

fn flow_verification(out: &mut String, v: &FlowVerification) {
    let _ = writeln!(
        out,
        "flow verification: seed {}, surface tolerance {:e}, oracle tolerance {:e}",
        v.seed, v.surface_tolerance, v.oracle_tolerance
    );
    for f in &v.flows {
        let _ = writeln!(out, "  {}: {}", f.flow, if f.passed { "ok" } else { "FAILED" });
        for r in &f.runs {
            let checks: Vec<String> = r
                .checks
                .iter()
                .map(|c| {
                    let how = if c.exact { "exact" } else { "sampled" };
                    format!("{} {how} {:e}", c.check, c.max_residual)
                })
                .collect();
            let _ = writeln!(out, "    param {}: {}", q(&r.param), checks.join("; "));
        }
        if let Some(e) = f.oracle_max_error {
            let _ = writeln!(out, "    rk4 max error: {e:e}");
        }
        if let Some(msg) = &f.failure {
            let _ = writeln!(out, "    failure: {msg}");
        }
    }
    if let Some(p) = &v.printed_vm1 {
        let _ = writeln!(
            out,
            "  printed EXP_Vm1: {} (displacement at t=0: {:e}, distance to rk4: {:e}, conjugated flow error: {:e})",
            if p.matches { "matches" } else { "MISMATCH" },
            p.deviation_at_zero,
            p.deviation_from_oracle,
            p.conjugated_error
        );
    }
}

fn warnings(out: &mut String, w: &[String]) {
    if w.is_empty() {
        out.push_str("warnings: none\n");
    } else {
        out.push_str("warnings:\n");
        for m in w {
            let _ = writeln!(out, "  WARNING: {m}");
        }
    }
}

pub trait Render {
    fn render(&self) -> String;
}

impl Render for AnalysisReport {
    fn render(&self) -> String {
        let mut out = String::new();
        surface_line(&mut out, &self.surface);
        let c = &self.case;
        let detail = match (&c.iota, &c.delta, &c.nu) {
            (Some(i), _, _) => format!(" iota={i}"),
            (_, Some(d), Some(n)) => format!(" delta={} nu={}", q(d), q(n)),
            _ => String::new(),
        };
        let _ = writeln!(out, "case: {}{detail}", c.label);
        finite_type(&mut out, &self.finite_type);
        locus(&mut out, &self.singular_locus);
        if let Some(n) = &self.normalization {
            let _ = writeln!(out, "normalization: delta={} nu={}", q(&n.delta), q(&n.nu));
            let names = ["x", "y", "a", "b"];
            for (v, img) in names.iter().zip(&n.star_map) {
                let _ = writeln!(out, "  {v}* = {img}");
            }
            let _ = writeln!(out, "  starred surface: {} = 0", n.star_defining);
            for (v, img) in names.iter().zip(&n.normal_map) {
                let _ = writeln!(out, "  {v}** = {img}");
            }
            let _ = writeln!(
                out,
                "  normal form: y = a + {} (gamma=({}))",
                n.normal_surface.p,
                qs(&n.normal_surface.gamma)
            );
        }
        let a = &self.algebra;
        let weights: Vec<String> = a.weights.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(
            out,
            "algebra: dimension {}, weights [{}], weight cap {}",
            a.dimension,
            weights.join(", "),
            a.weight_cap
        );
        generators(&mut out, &a.generators);
        out.push_str("structure constants:\n");
        for b in &a.structure_constants {
            let _ = writeln!(out, "  {}", bracket(b));
        }
        for (i, j) in &a.closure_violations {
            let _ = writeln!(out, "  [e{i}, e{j}] = NOT IN SPAN");
        }
        if let Some(p) = &a.profile {
            let derived: Vec<String> = p.derived_series_dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "profile:");
            let _ = writeln!(out, "  derived series: [{}]", derived.join(", "));
            let _ = writeln!(out, "  center dimension: {}", p.center_dim);
            let _ = writeln!(out, "  killing rank: {}", p.killing_rank);
            let _ = writeln!(out, "  killing signature: {}", sig(&p.killing_signature));
            let _ = writeln!(out, "  derived killing signature: {}", sig(&p.derived_killing_signature));
            let _ = writeln!(out, "  solvable: {}", p.is_solvable);
            if let Some(ev) = &p.ad_eigenvalues {
                let _ = writeln!(out, "  ad eigenvalues on derived algebra: [{}]", qs(ev));
            }
        }
        let _ = writeln!(
            out,
            "classification: {}",
            a.classification.as_deref().unwrap_or("UNAVAILABLE")
        );
        discrete(&mut out, &self.discrete_group);
        flow_verification(&mut out, &self.flow_verification);
        warnings(&mut out, &self.warnings);
        out
    }
}

impl Render for KernelReport {
    fn render(&self) -> String {
        let mut out = String::new();
        surface_line(&mut out, &self.surface);
        let _ = writeln!(
            out,
            "weight {}: {} equations in {} unknowns, kernel dimension {}",
            self.weight, self.equations, self.unknowns, self.dimension
        );
        generators(&mut out, &self.generators);
        out
    }
}

impl Render for FiniteTypeReport {
    fn render(&self) -> String {
        let mut out = format!("phi: {}\n", self.phi);
        finite_type(&mut out, &self.result);
        out
    }
}

impl Render for LocusReport {
    fn render(&self) -> String {
        let mut out = String::new();
        surface_line(&mut out, &self.surface);
        locus(&mut out, &self.locus);
        out
    }
}

impl Render for EmbedReport {
    fn render(&self) -> String {
        let mut out = format!("psi: {}\norder: {}\n", self.psi, self.order);
        for (n, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "  c{n} = {c}");
        }
        let _ = writeln!(out, "phi~ = {}", self.phi_tilde);
        let _ = writeln!(out, "transport residual vanishes below b^{}: {}", self.order, self.solves_transport);
        if let Some(y) = &self.induced_field {
            let _ = writeln!(
                out,
                "induced field: d_b + ({}) / ({}) d_a, matches frame: {}",
                y.numerator, y.denominator, y.matches_frame
            );
        }
        out
    }
}

impl Render for FlowsReport {
    fn render(&self) -> String {
        let mut out = String::new();
        surface_line(&mut out, &self.surface);
        flow_verification(&mut out, &self.verification);
        out
    }
}

impl Render for DiscreteReport {
    fn render(&self) -> String {
        let mut out = String::new();
        surface_line(&mut out, &self.surface);
        discrete(&mut out, &self.group);
        out
    }
}
