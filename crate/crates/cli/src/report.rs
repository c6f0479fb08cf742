//! Serializable reports. Rationals are `p/q` strings and polynomials use the
//! input grammar, so every field parses back into the exact value.

use serde::{Deserialize, Serialize};

use paracr_core::exactalg::rational::{int, rat, to_pq};
use paracr_core::flows::{self, CheckOutcome, FlowKind, FlowReport, VerifyOptions};
use paracr_core::liealg::{self, AlgebraProfile};
use paracr_core::normalform::{self, CaseDetection, DefiningFunction, SingularLocus, TypeKind, TypeResult};
use paracr_core::solver::{self, KernelBasis, SymmetryAlgebra};
use paracr_core::{embedding, ModelSurface, ParaVectorField, Poly, Rational};

pub fn pq(q: &Rational) -> String {
    to_pq(q)
}

fn pqs(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(pq).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceInfo {
    pub k: u32,
    pub gamma: Vec<String>,
    /// `P(x, b)`.
    pub p: String,
}

impl SurfaceInfo {
    pub fn new(s: &ModelSurface) -> Self {
        SurfaceInfo {
            k: s.k(),
            gamma: pqs(s.gamma()),
            p: s.p().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseInfo {
    pub label: String,
    pub iota: Option<u32>,
    pub delta: Option<String>,
    pub nu: Option<String>,
}

impl CaseInfo {
    pub fn new(d: &CaseDetection) -> Self {
        let (iota, delta, nu) = match d {
            CaseDetection::Monomial { iota } => (Some(*iota), None, None),
            CaseDetection::Binomial { delta, nu } => (None, Some(pq(delta)), Some(pq(nu))),
            CaseDetection::Generic => (None, None, None),
        };
        CaseInfo {
            label: d.label().into(),
            iota,
            delta,
            nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTypeInfo {
    /// `FINITE` or `INFINITE`.
    pub result: String,
    pub k: Option<u32>,
    pub gamma: Option<Vec<String>>,
    pub normalized: String,
    pub truncation: u32,
}

impl FiniteTypeInfo {
    pub fn new(t: &TypeResult) -> Self {
        let (result, k, gamma) = match &t.kind {
            TypeKind::Finite { k, gamma } => ("FINITE", Some(*k), Some(pqs(gamma))),
            TypeKind::Infinite => ("INFINITE", None, None),
        };
        FiniteTypeInfo {
            result: result.into(),
            k,
            gamma,
            normalized: t.normalized.to_string(),
            truncation: t.truncation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusInfo {
    pub label: String,
    pub p_xb: String,
    /// Linear form for `LINE`.
    pub line: Option<String>,
    /// Number of distinct real lines for `PENCIL`.
    pub lines: Option<usize>,
}

impl LocusInfo {
    pub fn new(s: &ModelSurface, l: &SingularLocus) -> Self {
        let (line, lines) = match l {
            SingularLocus::Point => (None, None),
            SingularLocus::Line(p) => (Some(p.to_string()), None),
            SingularLocus::Pencil(n) => (None, Some(*n)),
        };
        LocusInfo {
            label: l.label().into(),
            p_xb: s.p_xb().to_string(),
            line,
            lines,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationInfo {
    pub delta: String,
    pub nu: String,
    /// Images of `x, y, a, b` in the starred coordinates.
    pub star_map: Vec<String>,
    pub star_defining: String,
    /// Images of `x, y, a, b` in the coordinates without pure terms.
    pub normal_map: Vec<String>,
    pub normal_surface: SurfaceInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub weight: i64,
    pub alpha: String,
    pub beta: String,
    pub xi: String,
    pub eta: String,
}

impl FieldInfo {
    pub fn new(weight: i64, v: &ParaVectorField) -> Self {
        FieldInfo {
            weight,
            alpha: v.alpha().to_string(),
            beta: v.beta().to_string(),
            xi: v.xi().to_string(),
            eta: v.eta().to_string(),
        }
    }

    pub fn field(&self) -> paracr_core::Result<ParaVectorField> {
        ParaVectorField::parse(&self.alpha, &self.beta, &self.xi, &self.eta)
    }
}

/// `[e_i, e_j] = sum_l c_l e_l` for `i < j`; zero brackets are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileInfo {
    pub dimension: usize,
    pub derived_series_dims: Vec<usize>,
    pub center_dim: usize,
    pub killing_rank: usize,
    pub killing_signature: [usize; 3],
    pub is_solvable: bool,
    pub derived_killing_signature: [usize; 3],
    pub ad_eigenvalues: Option<Vec<String>>,
}

impl ProfileInfo {
    pub fn new(p: &AlgebraProfile) -> Self {
        let sig = |(a, b, c): (usize, usize, usize)| [a, b, c];
        ProfileInfo {
            dimension: p.dimension,
            derived_series_dims: p.derived_series_dims.clone(),
            center_dim: p.center_dim,
            killing_rank: p.killing_rank,
            killing_signature: sig(p.killing_signature),
            is_solvable: p.is_solvable,
            derived_killing_signature: sig(p.derived_killing_signature),
            ad_eigenvalues: p.ad_eigenvalues.as_deref().map(pqs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub dimension: usize,
    pub weight_cap: i64,
    pub weights: Vec<i64>,
    /// `(weight, dimension)` for every solved weight.
    pub weight_dims: Vec<(i64, usize)>,
    pub generators: Vec<FieldInfo>,
    pub structure_constants: Vec<Bracket>,
    pub closure_violations: Vec<(usize, usize)>,
    pub profile: Option<ProfileInfo>,
    pub classification: Option<String>,
}

impl AlgebraInfo {
    pub fn new(alg: &SymmetryAlgebra) -> Self {
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = &alg.structure_constants[i][j];
                if c.iter().any(|q| *q != int(0)) {
                    brackets.push(Bracket { i, j, coeffs: pqs(c) });
                }
            }
        }
        let (profile, classification) = match liealg::structure_constants(alg) {
            Ok(sc) => {
                let p = liealg::profile(&sc);
                let c = liealg::classify(&p, alg.surface.k());
                (Some(ProfileInfo::new(&p)), Some(c.label().to_string()))
            }
            Err(_) => (None, None),
        };
        AlgebraInfo {
            dimension: n,
            weight_cap: alg.weight_cap,
            weights: alg.weights(),
            weight_dims: alg.weight_dims.iter().map(|(w, d)| (*w, *d)).collect(),
            generators: alg.generators.iter().map(|g| FieldInfo::new(g.weight, &g.field)).collect(),
            structure_constants: brackets,
            closure_violations: alg.closure_violations.iter().map(|v| (v.i, v.j)).collect(),
            profile,
            classification,
        }
    }

    pub fn weight_dim(&self, w: i64) -> usize {
        self.weight_dims.iter().find(|(v, _)| *v == w).map_or(0, |(_, d)| *d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteInfo {
    pub group: String,
    pub generators: Vec<String>,
    pub preserves_surface: bool,
    pub involutions: bool,
}

impl DiscreteInfo {
    pub fn new(s: &ModelSurface) -> Self {
        let g = flows::discrete_group(s);
        DiscreteInfo {
            group: g.kind.label().into(),
            generators: g.generators.iter().map(|m| m.to_string()).collect(),
            preserves_surface: g.generators.iter().all(|m| m.preserves(s)),
            involutions: g.generators.iter().all(|m| m.is_involution()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckInfo {
    pub check: String,
    pub exact: bool,
    pub max_residual: f64,
}

impl CheckInfo {
    fn new(c: &CheckOutcome) -> Self {
        CheckInfo {
            check: c.check.into(),
            exact: c.exact,
            max_residual: c.max_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRun {
    pub param: String,
    pub checks: Vec<CheckInfo>,
}

impl FlowRun {
    fn new(r: &FlowReport) -> Self {
        FlowRun {
            param: pq(&r.param),
            checks: r.checks.iter().map(CheckInfo::new).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSummary {
    pub flow: String,
    pub passed: bool,
    pub runs: Vec<FlowRun>,
    /// Largest distance to RK4 integration of the generator.
    pub oracle_max_error: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedFormulaInfo {
    pub deviation_at_zero: f64,
    pub deviation_from_oracle: f64,
    pub conjugated_error: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowVerification {
    pub seed: u64,
    pub surface_tolerance: f64,
    pub oracle_tolerance: f64,
    pub flows: Vec<FlowSummary>,
    pub printed_vm1: Option<PrintedFormulaInfo>,
}

impl FlowVerification {
    pub fn passed(&self) -> bool {
        self.flows.iter().all(|f| f.passed)
    }
}

/// Parameters checked for each flow: additive times and dilation factors.
fn flow_params(kind: FlowKind) -> Vec<Rational> {
    if kind.is_multiplicative() {
        vec![rat(3, 2), rat(1, 5)]
    } else {
        vec![rat(1, 10), rat(-1, 7)]
    }
}

const ORACLE_TIMES: [f64; 2] = [0.05, 0.1];
const ORACLE_POINTS: usize = 5;

pub fn verify_flows(s: &ModelSurface, opts: &VerifyOptions) -> FlowVerification {
    let mut out = Vec::new();
    for kind in flows::admissible_flows(s) {
        let mut summary = FlowSummary {
            flow: kind.name().into(),
            passed: true,
            runs: Vec::new(),
            oracle_max_error: None,
            failure: None,
        };
        for p in flow_params(kind) {
            let res = flows::flow(kind, s, p).map_err(|e| e.to_string()).and_then(|f| {
                flows::verify_flow(&f, s, opts).map_err(|e| e.to_string())
            });
            match res {
                Ok(r) => summary.runs.push(FlowRun::new(&r)),
                Err(e) => {
                    summary.passed = false;
                    summary.failure = Some(e);
                    break;
                }
            }
        }
        if summary.passed {
            match flows::compare_with_oracle(kind, s, &ORACLE_TIMES, ORACLE_POINTS, opts.seed, opts.rk4_steps) {
                Ok(c) if c.max_error <= opts.tolerances.oracle => summary.oracle_max_error = Some(c.max_error),
                Ok(c) => {
                    summary.passed = false;
                    summary.oracle_max_error = Some(c.max_error);
                    summary.failure = Some(format!(
                        "closed form differs from RK4 by {:e} (tolerance {:e})",
                        c.max_error, opts.tolerances.oracle
                    ));
                }
                Err(e) => {
                    summary.passed = false;
                    summary.failure = Some(e.to_string());
                }
            }
        }
        out.push(summary);
    }
    let printed_vm1 = match normalform::detect_case(s) {
        CaseDetection::Binomial { .. } => {
            flows::check_printed_vm1(s, 0.1, ORACLE_POINTS, opts.seed, opts.tolerances.oracle)
                .ok()
                .map(|c| PrintedFormulaInfo {
                    deviation_at_zero: c.deviation_at_zero,
                    deviation_from_oracle: c.deviation_from_oracle,
                    conjugated_error: c.conjugated_error,
                    matches: c.matches,
                })
        }
        _ => None,
    };
    FlowVerification {
        seed: opts.seed,
        surface_tolerance: opts.tolerances.surface,
        oracle_tolerance: opts.tolerances.oracle,
        flows: out,
        printed_vm1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub surface: SurfaceInfo,
    pub case: CaseInfo,
    pub finite_type: FiniteTypeInfo,
    pub singular_locus: LocusInfo,
    pub normalization: Option<NormalizationInfo>,
    pub algebra: AlgebraInfo,
    pub discrete_group: DiscreteInfo,
    pub flow_verification: FlowVerification,
    pub warnings: Vec<String>,
}

/// Dimension expected for the detected case: 4 for monomials, 3 for
/// binomials and 2 otherwise.
pub fn expected_dimension(d: &CaseDetection) -> usize {
    match d {
        CaseDetection::Monomial { .. } => 4,
        CaseDetection::Binomial { .. } => 3,
        CaseDetection::Generic => 2,
    }
}

fn expected_label(d: &CaseDetection) -> &'static str {
    match d {
        CaseDetection::Monomial { .. } => "SL2_PLUS_CENTER",
        CaseDetection::Binomial { .. } => "SOLVABLE_3D_WEIGHTS_K_1",
        CaseDetection::Generic => "AFFINE_LINE_2D",
    }
}

fn normalization(s: &ModelSurface, d: &CaseDetection) -> Option<NormalizationInfo> {
    let n = normalform::normalize_binomial(s, d).ok()?;
    let strs = |m: &[Poly; 4]| m.iter().map(|p| p.to_string()).collect();
    Some(NormalizationInfo {
        delta: pq(&n.delta),
        nu: pq(&n.nu),
        star_map: strs(&n.star_map),
        star_defining: n.star_defining.to_string(),
        normal_map: strs(&n.normal_map),
        normal_surface: SurfaceInfo::new(&n.surface),
    })
}

pub fn analyze(s: &ModelSurface, weight_cap: i64, opts: &VerifyOptions) -> paracr_core::Result<AnalysisReport> {
    let case = normalform::detect_case(s);
    let finite = normalform::finite_type(&DefiningFunction::new(s.p())?);
    let locus = normalform::singular_locus(s);
    let alg = solver::solve_algebra(s, weight_cap)?;
    let algebra = AlgebraInfo::new(&alg);
    let flow_verification = verify_flows(s, opts);

    let mut warnings = Vec::new();
    for v in &alg.closure_violations {
        warnings.push(format!(
            "closure violation: [e{}, e{}] = {} is not in the computed span",
            v.i, v.j, v.bracket
        ));
    }
    let want = expected_dimension(&case);
    if algebra.dimension != want {
        let k = i64::from(s.k());
        let mut msg = format!(
            "algebra dimension {} differs from {} expected for {} surfaces",
            algebra.dimension,
            want,
            case.label().to_lowercase()
        );
        if let CaseDetection::Monomial { iota } = case {
            if iota == 1 || iota + 1 == s.k() {
                msg.push_str(&format!(
                    " (boundary iota={iota}: dim weight -1 = {}, dim weight {} = {})",
                    algebra.weight_dim(-1),
                    k - 1,
                    algebra.weight_dim(k - 1)
                ));
            }
        }
        warnings.push(msg);
    } else if let Some(label) = &algebra.classification {
        if label != expected_label(&case) {
            warnings.push(format!(
                "classification {label} differs from {} expected for {} surfaces",
                expected_label(&case),
                case.label().to_lowercase()
            ));
        }
    }
    if let Some(p) = &flow_verification.printed_vm1 {
        if !p.matches {
            warnings.push(format!(
                "printed EXP_Vm1 formula does not match the flow of the weight -1 generator \
                 (displacement at t=0: {:e}, distance to RK4 at t=1/10: {:e}); the conjugated flow is used instead",
                p.deviation_at_zero, p.deviation_from_oracle
            ));
        }
    }
    for f in flow_verification.flows.iter().filter(|f| !f.passed) {
        warnings.push(format!(
            "flow {} failed: {}",
            f.flow,
            f.failure.as_deref().unwrap_or("unknown")
        ));
    }

    Ok(AnalysisReport {
        surface: SurfaceInfo::new(s),
        case: CaseInfo::new(&case),
        finite_type: FiniteTypeInfo::new(&finite),
        singular_locus: LocusInfo::new(s, &locus),
        normalization: normalization(s, &case),
        algebra,
        discrete_group: DiscreteInfo::new(s),
        flow_verification,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub surface: SurfaceInfo,
    pub weight: i64,
    pub equations: usize,
    pub unknowns: usize,
    pub dimension: usize,
    pub generators: Vec<FieldInfo>,
}

impl KernelReport {
    pub fn new(s: &ModelSurface, kb: &KernelBasis) -> Self {
        KernelReport {
            surface: SurfaceInfo::new(s),
            weight: kb.weight,
            equations: kb.system_shape.0,
            unknowns: kb.system_shape.1,
            dimension: kb.dim(),
            generators: kb.basis.iter().map(|v| FieldInfo::new(kb.weight, v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTypeReport {
    pub phi: String,
    pub result: FiniteTypeInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub surface: SurfaceInfo,
    pub locus: LocusInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedInfo {
    pub numerator: String,
    pub denominator: String,
    pub matches_frame: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub psi: String,
    pub order: u32,
    /// `c_n(a, x)` in `phi~ = sum c_n b^n`.
    pub coefficients: Vec<String>,
    pub phi_tilde: String,
    /// Transport residual vanishes below `b^order`.
    pub solves_transport: bool,
    pub induced_field: Option<InducedInfo>,
}

pub fn embed(psi: &Poly, order: u32) -> paracr_core::Result<EmbedReport> {
    let e = embedding::solve_embedding(psi, order)?;
    let induced_field = embedding::induced_y(&e).ok().map(|y| InducedInfo {
        numerator: y.numerator.to_string(),
        denominator: y.denominator.to_string(),
        matches_frame: y.matches_frame(),
    });
    Ok(EmbedReport {
        psi: psi.to_string(),
        order,
        coefficients: e.coeffs.iter().map(|c| c.to_string()).collect(),
        phi_tilde: e.phi_tilde().to_string(),
        solves_transport: e.is_solution(),
        induced_field,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowsReport {
    pub surface: SurfaceInfo,
    pub verification: FlowVerification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteReport {
    pub surface: SurfaceInfo,
    pub group: DiscreteInfo,
}
