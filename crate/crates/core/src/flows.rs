//! Closed-form one-parameter groups of the named generators, their
//! verification (surface preservation, para-CR property, group law), an RK4
//! integrator used as an independent oracle, and the discrete automorphisms.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, int, rat, to_f64, Rational};
use crate::exactalg::{Poly, Var};
use crate::normalform::{detect_case, CaseDetection};
use crate::surface::{DirectionPair, ModelSurface, ParaVectorField};

/// Seed used when `PARACR_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Sampling seed from the `PARACR_SEED` environment variable.
pub fn default_seed() -> u64 {
    std::env::var("PARACR_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub type Point = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlowKind {
    /// `(x, y + t, a + t, b)`.
    ExpVmk,
    /// `(lambda x, lambda^k y, lambda^k a, lambda b)`.
    ExpV0,
    /// `(lambda^iota x, y, a, b / lambda^(k - iota))`.
    ExpV0Prime,
    /// `(x / (1 - t y)^(1/(k-iota)), y / (1 - t y), a / (1 - t a), b / (1 - t a)^(1/iota))`.
    ExpVk,
    /// Translation `(x*, b*) -> (x* - t, b* + t)` in the binomial normal coordinates.
    ExpVm1,
}

impl FlowKind {
    pub const ALL: [FlowKind; 5] = [
        FlowKind::ExpVmk,
        FlowKind::ExpV0,
        FlowKind::ExpV0Prime,
        FlowKind::ExpVk,
        FlowKind::ExpVm1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlowKind::ExpVmk => "EXP_Vmk",
            FlowKind::ExpV0 => "EXP_V0",
            FlowKind::ExpV0Prime => "EXP_V0PRIME",
            FlowKind::ExpVk => "EXP_VK",
            FlowKind::ExpVm1 => "EXP_Vm1",
        }
    }

    pub fn from_name(s: &str) -> Option<FlowKind> {
        FlowKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Multiplicative parameter `lambda` (identity at 1) instead of additive `t`.
    pub fn is_multiplicative(self) -> bool {
        matches!(self, FlowKind::ExpV0 | FlowKind::ExpV0Prime)
    }

    pub fn identity_param(self) -> Rational {
        if self.is_multiplicative() {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    /// Parameter of the composite `Phi_p o Phi_q`.
    pub fn compose_params(self, p: &Rational, q: &Rational) -> Rational {
        if self.is_multiplicative() {
            p * q
        } else {
            p + q
        }
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flow kinds admissible for the detected case of `s`.
pub fn admissible_flows(s: &ModelSurface) -> Vec<FlowKind> {
    let mut out = vec![FlowKind::ExpVmk, FlowKind::ExpV0];
    match detect_case(s) {
        CaseDetection::Monomial { .. } => out.extend([FlowKind::ExpV0Prime, FlowKind::ExpVk]),
        CaseDetection::Binomial { .. } => out.push(FlowKind::ExpVm1),
        CaseDetection::Generic => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CaseData {
    None,
    Monomial { iota: u32 },
    Binomial { delta: Rational, nu: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMap {
    kind: FlowKind,
    k: u32,
    param: Rational,
    data: CaseData,
}

/// Builds the closed-form flow of `kind` at parameter `param` (`t`, or
/// `lambda` for the dilations).
pub fn flow(kind: FlowKind, s: &ModelSurface, param: Rational) -> Result<FlowMap> {
    let case = detect_case(s);
    let data = match (kind, case) {
        (FlowKind::ExpVmk | FlowKind::ExpV0, _) => CaseData::None,
        (FlowKind::ExpV0Prime | FlowKind::ExpVk, CaseDetection::Monomial { iota }) => CaseData::Monomial { iota },
        (FlowKind::ExpVm1, CaseDetection::Binomial { delta, nu }) => CaseData::Binomial { delta, nu },
        (_, other) => {
            return Err(Error::InadmissibleFlow {
                flow: kind.name(),
                reason: format!("surface is {}", other.label()),
            })
        }
    };
    if kind.is_multiplicative() && !param.is_positive() {
        return Err(Error::DomainViolation(format!("{kind} requires lambda > 0, got {param}")));
    }
    Ok(FlowMap {
        kind,
        k: s.k(),
        param,
        data,
    })
}

/// Real `n`-th root; `None` for a negative radicand with even `n`.
fn real_root(w: f64, n: u32) -> Option<f64> {
    if w >= 0.0 {
        Some(w.powf(1.0 / f64::from(n)))
    } else if n % 2 == 1 {
        Some(-(-w).powf(1.0 / f64::from(n)))
    } else {
        None
    }
}

impl FlowMap {
    pub fn kind(&self) -> FlowKind {
        self.kind
    }

    pub fn param(&self) -> &Rational {
        &self.param
    }

    pub fn with_param(&self, param: Rational) -> Result<FlowMap> {
        if self.kind.is_multiplicative() && !param.is_positive() {
            return Err(Error::DomainViolation(format!("{} requires lambda > 0", self.kind)));
        }
        Ok(FlowMap { param, ..self.clone() })
    }

    fn iota(&self) -> u32 {
        match self.data {
            CaseData::Monomial { iota } => iota,
            _ => unreachable!("monomial flow without iota"),
        }
    }

    /// Images `(x', y', a', b')` as polynomials in `(x, y, a, b)`, indexed by
    /// [`Var::index`]; `None` for flows involving radicals.
    pub fn exact_map(&self) -> Option<[Poly; 4]> {
        let k = self.k;
        let p = &self.param;
        let mut m: [Poly; 4] = [Poly::x(), Poly::y(), Poly::a(), Poly::b()];
        match self.kind {
            FlowKind::ExpVmk => {
                m[Var::Y.index()] = &Poly::y() + &Poly::constant(p.clone());
                m[Var::A.index()] = &Poly::a() + &Poly::constant(p.clone());
            }
            FlowKind::ExpV0 => {
                let pk = rational::pow(p, k);
                m[Var::X.index()] = Poly::x().scale(p);
                m[Var::Y.index()] = Poly::y().scale(&pk);
                m[Var::A.index()] = Poly::a().scale(&pk);
                m[Var::B.index()] = Poly::b().scale(p);
            }
            FlowKind::ExpV0Prime => {
                let iota = self.iota();
                m[Var::X.index()] = Poly::x().scale(&rational::pow(p, iota));
                m[Var::B.index()] = Poly::b().scale(&rational::pow(p, k - iota).recip());
            }
            FlowKind::ExpVk => return None,
            FlowKind::ExpVm1 => {
                let CaseData::Binomial { delta, nu } = &self.data else {
                    unreachable!("binomial flow without data")
                };
                let t = Poly::constant(p.clone());
                let xs = &Poly::x() - &t;
                m[Var::X.index()] = xs.clone();
                m[Var::Y.index()] = &(&Poly::y() + &Poly::x().pow(k).scale(delta)) - &xs.pow(k).scale(delta);
                let nub = Poly::b().scale(nu);
                m[Var::A.index()] = &(&Poly::a() - &nub.pow(k).scale(delta)) + &(&nub + &t).pow(k).scale(delta);
                m[Var::B.index()] = &Poly::b() + &Poly::constant(p / nu);
            }
        }
        Some(m)
    }

    pub fn apply(&self, pt: &Point) -> Result<Point> {
        if let Some(m) = self.exact_map() {
            return Ok([0, 1, 2, 3].map(|i| m[i].eval_f64(pt)));
        }
        let (k, iota) = (self.k, self.iota());
        let t = to_f64(&self.param);
        let [x, y, a, b] = *pt;
        let (u, w) = (1.0 - t * y, 1.0 - t * a);
        let violation = |what: &str, v: f64| {
            Error::DomainViolation(format!("{}: 1 - t {what} = {v} at t = {}", self.kind, self.param))
        };
        if u == 0.0 {
            return Err(violation("y", u));
        }
        if w == 0.0 {
            return Err(violation("a", w));
        }
        let ru = real_root(u, k - iota).ok_or_else(|| violation("y", u))?;
        let rw = real_root(w, iota).ok_or_else(|| violation("a", w))?;
        Ok([x / ru, y / u, a / w, b / rw])
    }

    /// Jacobian `J[i][j] = d(image_i)/d(coord_j)` in `(x, y, a, b)` order.
    pub fn jacobian(&self, pt: &Point) -> Result<[[f64; 4]; 4]> {
        let mut j = [[0.0; 4]; 4];
        if let Some(m) = self.exact_map() {
            for (r, img) in m.iter().enumerate() {
                for v in Var::ALL {
                    j[r][v.index()] = img.diff(v).eval_f64(pt);
                }
            }
            return Ok(j);
        }
        self.apply(pt)?;
        let (k, iota) = (self.k, self.iota());
        let t = to_f64(&self.param);
        let [x, y, a, b] = *pt;
        let (u, w) = (1.0 - t * y, 1.0 - t * a);
        let ru = real_root(u, k - iota).unwrap();
        let rw = real_root(w, iota).unwrap();
        let (ex, eb) = (1.0 / f64::from(k - iota), 1.0 / f64::from(iota));
        j[0][0] = 1.0 / ru;
        j[0][1] = x * ex * t / (u * ru);
        j[1][1] = 1.0 / (u * u);
        j[2][2] = 1.0 / (w * w);
        j[3][3] = 1.0 / rw;
        j[3][2] = b * eb * t / (w * rw);
        Ok(j)
    }
}

/// Vector field whose flow is `kind` (derivative at the identity parameter,
/// with respect to `log lambda` for the dilations).
pub fn generator(kind: FlowKind, s: &ModelSurface) -> Result<ParaVectorField> {
    let k = s.k();
    let case = detect_case(s);
    match (kind, case) {
        (FlowKind::ExpVmk, _) => Ok(ParaVectorField::translation()),
        (FlowKind::ExpV0, _) => Ok(ParaVectorField::dilation(k)),
        (FlowKind::ExpV0Prime, CaseDetection::Monomial { iota }) => Ok(ParaVectorField::monomial_dilation(k, iota)),
        (FlowKind::ExpVk, CaseDetection::Monomial { iota }) => Ok(ParaVectorField::monomial_top(k, iota)),
        (FlowKind::ExpVm1, CaseDetection::Binomial { delta, nu }) => {
            Ok(ParaVectorField::binomial_shift(k, &delta, &nu).scale(&nu.recip()))
        }
        (_, other) => Err(Error::InadmissibleFlow {
            flow: kind.name(),
            reason: format!("surface is {}", other.label()),
        }),
    }
}

/// Classical fourth-order Runge-Kutta for `p' = V(p)`.
pub fn rk4_oracle(v: &ParaVectorField, p0: &Point, t: f64, steps: usize) -> Point {
    let steps = steps.max(1);
    let h = t / steps as f64;
    let vf = v.to_vector_field();
    let add = |p: &Point, d: &Point, s: f64| [0, 1, 2, 3].map(|i| p[i] + s * d[i]);
    let mut p = *p0;
    for _ in 0..steps {
        let k1 = vf.eval_f64(&p);
        let k2 = vf.eval_f64(&add(&p, &k1, h / 2.0));
        let k3 = vf.eval_f64(&add(&p, &k2, h / 2.0));
        let k4 = vf.eval_f64(&add(&p, &k3, h));
        p = [0, 1, 2, 3].map(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Surface residual and group law for maps with radicals.
    pub surface: f64,
    /// Closed form against the RK4 oracle and finite differences.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            surface: 1e-9,
            oracle: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Second parameters `q` for the group law `Phi_p o Phi_q = Phi_{p.q}`.
    pub group_params: Vec<Rational>,
    pub tolerances: Tolerances,
    pub rk4_steps: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 20,
            seed: default_seed(),
            group_params: vec![rat(1, 10), rat(-1, 10), rat(1, 7), rat(-1, 7)],
            tolerances: Tolerances::default(),
            rk4_steps: 1000,
        }
    }
}

/// Pushforward factors: `F_* X = lambda X'` and `F_* Y = mu Y'`.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Restricted to `S` (free of `y`).
    Exact(Poly),
    Sampled(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalityWitness {
    pub lambda: Witness,
    pub mu: Witness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub exact: bool,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub flow: FlowKind,
    pub param: Rational,
    pub checks: Vec<CheckOutcome>,
    pub witness: ProportionalityWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowFailure {
    pub flow: FlowKind,
    pub check: &'static str,
    pub point: Option<Point>,
    pub residual: f64,
    pub detail: String,
}

impl fmt::Display for FlowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed {} (residual {:e}", self.flow, self.check, self.residual)?;
        if let Some(p) = self.point {
            write!(f, " at {p:?}")?;
        }
        write!(f, "): {}", self.detail)
    }
}

impl std::error::Error for FlowFailure {}

fn random_small(rng: &mut impl Rng, bound: i64) -> Rational {
    let d = rng.gen_range(1..=16i64);
    rat(rng.gen_range(-bound * d..=bound * d), d)
}

/// Random points of `s` with `|x|, |b| <= 1` and `|a| <= 1/2`, in exact form.
pub fn sample_surface_points(s: &ModelSurface, n: usize, seed: u64) -> Vec<[Rational; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = s.p();
    (0..n)
        .map(|_| {
            let x = random_small(&mut rng, 1);
            let b = random_small(&mut rng, 1);
            let a = random_small(&mut rng, 1) / int(2);
            let pt0 = [x.clone(), Rational::zero(), a.clone(), b.clone()];
            let y = &a + p.eval(&pt0);
            [x, y, a, b]
        })
        .collect()
}

fn to_point(p: &[Rational; 4]) -> Point {
    [0, 1, 2, 3].map(|i| to_f64(&p[i]))
}

fn max_abs(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Verifier<'a> {
    f: &'a FlowMap,
    s: &'a ModelSurface,
    opts: &'a VerifyOptions,
    points: Vec<Point>,
    checks: Vec<CheckOutcome>,
}

impl Verifier<'_> {
    fn fail(&self, check: &'static str, point: Option<Point>, residual: f64, detail: String) -> FlowFailure {
        FlowFailure {
            flow: self.f.kind,
            check,
            point,
            residual,
            detail,
        }
    }

    fn exact(&mut self, m: &[Poly; 4]) -> Result<ProportionalityWitness, FlowFailure> {
        let s = self.s;
        let image = s.defining().compose(m).substitute_y(s);
        if !image.is_zero() {
            return Err(self.fail("surface_preservation", None, f64::NAN, format!("residual {image}")));
        }
        self.checks.push(CheckOutcome {
            check: "surface_preservation",
            exact: true,
            max_residual: 0.0,
        });

        let dp = DirectionPair::new(s);
        let (xp, yp, ap, bp) = (&m[0], &m[1], &m[2], &m[3]);
        let px_f = s.p_x().compose(m);
        let pb_f = s.p_b().compose(m);
        let lambda = dp.x.apply(xp).substitute_y(s);
        let mu = dp.y.apply(bp).substitute_y(s);
        let rx = (&dp.x.apply(yp) - &(&px_f * &dp.x.apply(xp))).substitute_y(s);
        let ry = (&dp.y.apply(ap) + &(&pb_f * &dp.y.apply(bp))).substitute_y(s);
        if !rx.is_zero() || !ry.is_zero() {
            return Err(self.fail("para_cr", None, f64::NAN, format!("X residual {rx}, Y residual {ry}")));
        }
        if lambda.is_zero() || mu.is_zero() {
            return Err(self.fail("para_cr", None, 0.0, "degenerate pushforward".into()));
        }
        self.checks.push(CheckOutcome {
            check: "para_cr",
            exact: true,
            max_residual: 0.0,
        });

        for q in &self.opts.group_params {
            let Ok(g) = self.f.with_param(q.clone()) else { continue };
            let pq = self.f.kind.compose_params(&self.f.param, q);
            let composite = self.f.with_param(pq).unwrap().exact_map().unwrap();
            let inner = g.exact_map().unwrap();
            for (i, outer) in m.iter().enumerate() {
                if outer.compose(&inner) != composite[i] {
                    return Err(self.fail(
                        "group_law",
                        None,
                        f64::NAN,
                        format!("component {} differs at second parameter {q}", Var::ALL[i].symbol()),
                    ));
                }
            }
        }
        self.checks.push(CheckOutcome {
            check: "group_law",
            exact: true,
            max_residual: 0.0,
        });
        Ok(ProportionalityWitness {
            lambda: Witness::Exact(lambda),
            mu: Witness::Exact(mu),
        })
    }

    fn sampled(&mut self) -> Result<ProportionalityWitness, FlowFailure> {
        let s = self.s;
        let tol = self.opts.tolerances.surface;
        let (def, px, pb) = (s.defining(), s.p_x(), s.p_b());
        let mut worst = 0.0f64;
        let mut lambdas = Vec::new();
        let mut mus = Vec::new();
        let mut worst_cr = 0.0f64;
        for p in &self.points {
            let img = self.f.apply(p).map_err(|e| self.fail("domain", Some(*p), f64::NAN, e.to_string()))?;
            let r = def.eval_f64(&img);
            let scale = 1.0 + max_abs(img);
            if !(r.abs() <= tol * scale) {
                return Err(self.fail("surface_preservation", Some(*p), r, "image leaves the surface".into()));
            }
            worst = worst.max(r.abs());

            let j = self.f.jacobian(p).unwrap();
            let xv = [1.0, px.eval_f64(p), 0.0, 0.0];
            let yv = [0.0, 0.0, -pb.eval_f64(p), 1.0];
            let push = |v: &[f64; 4]| [0, 1, 2, 3].map(|r| (0..4).map(|c| j[r][c] * v[c]).sum::<f64>());
            let (fx, fy) = (push(&xv), push(&yv));
            let rx = fx[1] - px.eval_f64(&img) * fx[0];
            let ry = fy[2] + pb.eval_f64(&img) * fy[3];
            let scale = 1.0 + max_abs(fx) + max_abs(fy);
            if !(rx.abs() <= tol * scale && ry.abs() <= tol * scale) {
                return Err(self.fail("para_cr", Some(*p), rx.abs().max(ry.abs()), "pushforward not proportional".into()));
            }
            if fx[0] == 0.0 || fy[3] == 0.0 {
                return Err(self.fail("para_cr", Some(*p), 0.0, "degenerate pushforward".into()));
            }
            worst_cr = worst_cr.max(rx.abs()).max(ry.abs());
            lambdas.push(fx[0]);
            mus.push(fy[3]);
        }
        self.checks.push(CheckOutcome {
            check: "surface_preservation",
            exact: false,
            max_residual: worst,
        });
        self.checks.push(CheckOutcome {
            check: "para_cr",
            exact: false,
            max_residual: worst_cr,
        });

        let mut worst_group = 0.0f64;
        for q in &self.opts.group_params {
            let g = self.f.with_param(q.clone()).unwrap();
            let pq = self.f.kind.compose_params(&self.f.param, q);
            let h = self.f.with_param(pq).unwrap();
            for p in &self.points {
                let (Ok(inner), Ok(direct)) = (g.apply(p), h.apply(p)) else { continue };
                let Ok(two) = self.f.apply(&inner) else { continue };
                let d = max_abs((0..4).map(|i| two[i] - direct[i]));
                if !(d <= tol * (1.0 + max_abs(direct))) {
                    return Err(self.fail("group_law", Some(*p), d, format!("second parameter {q}")));
                }
                worst_group = worst_group.max(d);
            }
        }
        self.checks.push(CheckOutcome {
            check: "group_law",
            exact: false,
            max_residual: worst_group,
        });
        Ok(ProportionalityWitness {
            lambda: Witness::Sampled(lambdas),
            mu: Witness::Sampled(mus),
        })
    }

    fn identity(&mut self) -> Result<(), FlowFailure> {
        let id = self.f.with_param(self.f.kind.identity_param()).unwrap();
        let mut worst = 0.0f64;
        for p in &self.points {
            let q = id.apply(p).map_err(|e| self.fail("identity", Some(*p), f64::NAN, e.to_string()))?;
            let d = max_abs((0..4).map(|i| q[i] - p[i]));
            if d != 0.0 {
                return Err(self.fail("identity", Some(*p), d, "identity parameter moves the point".into()));
            }
            worst = worst.max(d);
        }
        self.checks.push(CheckOutcome {
            check: "identity",
            exact: true,
            max_residual: worst,
        });
        Ok(())
    }
}

/// Checks surface preservation, the para-CR property and the group law;
/// symbolically for polynomial flows, at sampled points of `s` otherwise.
pub fn verify_flow(f: &FlowMap, s: &ModelSurface, opts: &VerifyOptions) -> Result<FlowReport, FlowFailure> {
    let points: Vec<Point> = sample_surface_points(s, opts.samples, opts.seed)
        .iter()
        .map(to_point)
        .collect();
    let mut v = Verifier {
        f,
        s,
        opts,
        points,
        checks: Vec::new(),
    };
    v.identity()?;
    let witness = match f.exact_map() {
        Some(m) => v.exact(&m)?,
        None => v.sampled()?,
    };
    Ok(FlowReport {
        flow: f.kind,
        param: f.param.clone(),
        checks: v.checks,
        witness,
    })
}

/// Parameter reached after flowing for time `t` (`lambda = e^t` for dilations).
fn param_at(kind: FlowKind, t: f64) -> f64 {
    if kind.is_multiplicative() {
        t.exp()
    } else {
        t
    }
}

fn flow_f64(base: &FlowMap, param: f64) -> Result<FlowMap> {
    let q = Rational::from_float(param).ok_or_else(|| Error::Invalid(format!("non-finite parameter {param}")))?;
    base.with_param(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub flow: FlowKind,
    pub max_error: f64,
    pub points: usize,
    pub times: Vec<f64>,
}

/// Compares the closed form with RK4 integration of its generator at
/// `times`, on `n` sampled points of `s`.
pub fn compare_with_oracle(
    kind: FlowKind,
    s: &ModelSurface,
    times: &[f64],
    n: usize,
    seed: u64,
    steps: usize,
) -> Result<OracleComparison> {
    let v = generator(kind, s)?;
    let base = flow(kind, s, kind.identity_param())?;
    let mut max_error = 0.0f64;
    for p in sample_surface_points(s, n, seed).iter().map(to_point) {
        for &t in times {
            let closed = flow_f64(&base, param_at(kind, t))?.apply(&p)?;
            let n_steps = ((steps as f64) * t.abs() / 0.1).ceil().max(1.0) as usize;
            let num = rk4_oracle(&v, &p, t, n_steps);
            max_error = max_error.max(max_abs((0..4).map(|i| closed[i] - num[i])));
        }
    }
    Ok(OracleComparison {
        flow: kind,
        max_error,
        points: n,
        times: times.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck {
    pub flow: FlowKind,
    /// `true` when the derivative was taken exactly (polynomial in the parameter).
    pub exact: bool,
    pub max_error: f64,
}

/// Lagrange weights `L_j'(x0)` for nodes `xs`.
fn lagrange_derivative_weights(xs: &[Rational], x0: &Rational) -> Vec<Rational> {
    let n = xs.len();
    (0..n)
        .map(|j| {
            let denom: Rational = (0..n).filter(|&m| m != j).map(|m| &xs[j] - &xs[m]).product();
            let mut num = Rational::zero();
            for i in (0..n).filter(|&i| i != j) {
                let prod: Rational = (0..n).filter(|&m| m != j && m != i).map(|m| x0 - &xs[m]).product();
                num += prod;
            }
            num / denom
        })
        .collect()
}

/// `d/dt Phi_t` at the identity equals the generator: exactly (by
/// interpolation in the parameter) for polynomial flows, by central
/// differences at sampled points otherwise.
pub fn check_generator(kind: FlowKind, s: &ModelSurface, seed: u64) -> Result<GeneratorCheck> {
    let v = generator(kind, s)?;
    let base = flow(kind, s, kind.identity_param())?;
    let comps = [v.xi(), v.eta(), v.alpha(), v.beta()];
    let polynomial_in_param = matches!(kind, FlowKind::ExpVmk | FlowKind::ExpV0 | FlowKind::ExpVm1);
    if polynomial_in_param {
        // components have degree <= k in the parameter
        let x0 = kind.identity_param();
        let nodes: Vec<Rational> = (0..=s.k() as i64).map(|j| &x0 + int(j)).collect();
        let w = lagrange_derivative_weights(&nodes, &x0);
        let maps: Vec<[Poly; 4]> = nodes
            .iter()
            .map(|q| base.with_param(q.clone()).map(|f| f.exact_map().unwrap()))
            .collect::<Result<_>>()?;
        let exact = (0..4).all(|i| {
            let mut d = Poly::zero();
            for (wj, m) in w.iter().zip(&maps) {
                d += &m[i].scale(wj);
            }
            // d/dlambda at lambda = 1 equals d/d(log lambda) at 0
            d == *comps[i]
        });
        return Ok(GeneratorCheck {
            flow: kind,
            exact: true,
            max_error: if exact { 0.0 } else { f64::INFINITY },
        });
    }
    let h = 1e-5;
    let mut max_error = 0.0f64;
    for p in sample_surface_points(s, 20, seed).iter().map(to_point) {
        let plus = flow_f64(&base, param_at(kind, h))?.apply(&p)?;
        let minus = flow_f64(&base, param_at(kind, -h))?.apply(&p)?;
        let field = v.eval_f64(&p);
        for i in 0..4 {
            max_error = max_error.max(((plus[i] - minus[i]) / (2.0 * h) - field[i]).abs());
        }
    }
    Ok(GeneratorCheck {
        flow: kind,
        exact: false,
        max_error,
    })
}

/// The flow as printed for the binomial case,
/// `(x - t, y - x^k + 2 (x - t)^k, a + b^k - 2 (b + t)^k, b + t)`.
pub fn printed_vm1(k: u32, t: f64, p: &Point) -> Point {
    let [x, y, a, b] = *p;
    let k = k as i32;
    [
        x - t,
        y - x.powi(k) + 2.0 * (x - t).powi(k),
        a + b.powi(k) - 2.0 * (b + t).powi(k),
        b + t,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrintedFormulaCheck {
    /// Largest displacement of the printed map at `t = 0`.
    pub deviation_at_zero: f64,
    /// Largest distance to RK4 integration of the weight `-1` generator.
    pub deviation_from_oracle: f64,
    /// Largest distance between the conjugation-derived flow and RK4.
    pub conjugated_error: f64,
    pub matches: bool,
}

/// Compares the printed binomial flow with the oracle; the surface must be
/// binomial with `nu = 1` for the two to be comparable.
pub fn check_printed_vm1(s: &ModelSurface, t: f64, n: usize, seed: u64, tol: f64) -> Result<PrintedFormulaCheck> {
    let v = generator(FlowKind::ExpVm1, s)?;
    let base = flow(FlowKind::ExpVm1, s, Rational::zero())?;
    let conj = flow_f64(&base, t)?;
    let (mut at_zero, mut dev, mut conj_err) = (0.0f64, 0.0f64, 0.0f64);
    for p in sample_surface_points(s, n, seed).iter().map(to_point) {
        let z = printed_vm1(s.k(), 0.0, &p);
        at_zero = at_zero.max(max_abs((0..4).map(|i| z[i] - p[i])));
        let num = rk4_oracle(&v, &p, t, 1000);
        let printed = printed_vm1(s.k(), t, &p);
        dev = dev.max(max_abs((0..4).map(|i| printed[i] - num[i])));
        let c = conj.apply(&p)?;
        conj_err = conj_err.max(max_abs((0..4).map(|i| c[i] - num[i])));
    }
    Ok(PrintedFormulaCheck {
        deviation_at_zero: at_zero,
        deviation_from_oracle: dev,
        conjugated_error: conj_err,
        matches: at_zero <= tol && dev <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteKind {
    Z2,
    Z2xZ2,
}

impl DiscreteKind {
    pub fn label(self) -> &'static str {
        match self {
            DiscreteKind::Z2 => "Z2",
            DiscreteKind::Z2xZ2 => "Z2xZ2",
        }
    }
}

/// `v -> signs[v.index()] * v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedMap {
    pub signs: [i8; 4],
}

impl SignedMap {
    pub fn images(&self) -> [Poly; 4] {
        Var::ALL.map(|v| Poly::var(v).scale(&int(i64::from(self.signs[v.index()]))))
    }

    /// `defining o g` restricted to `s` vanishes.
    pub fn preserves(&self, s: &ModelSurface) -> bool {
        s.defining().compose(&self.images()).substitute_y(s).is_zero()
    }

    pub fn is_involution(&self) -> bool {
        let m = self.images();
        Var::ALL
            .iter()
            .all(|&v| m[v.index()].compose(&m) == Poly::var(v))
    }
}

impl fmt::Display for SignedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Var::ALL
            .iter()
            .map(|&v| {
                let sign = if self.signs[v.index()] < 0 { "-" } else { "" };
                format!("{}{}", sign, v.symbol())
            })
            .collect();
        write!(f, "(x,y,a,b) -> ({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteGroup {
    pub kind: DiscreteKind,
    pub generators: Vec<SignedMap>,
}

fn parity_sign(n: u32) -> i8 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn discrete_group(s: &ModelSurface) -> DiscreteGroup {
    let k = s.k();
    let sk = parity_sign(k);
    let mut generators = vec![SignedMap { signs: [-1, sk, sk, -1] }];
    let support = s.support();
    let parity = support[0] % 2;
    if support.iter().all(|i| i % 2 == parity) {
        let si = parity_sign(support[0]);
        generators.push(SignedMap { signs: [1, si, si, -1] });
    }
    let kind = if generators.len() == 2 {
        DiscreteKind::Z2xZ2
    } else {
        DiscreteKind::Z2
    };
    DiscreteGroup { kind, generators }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: &Point, q: &Point, tol: f64) -> bool {
        (0..4).all(|i| (p[i] - q[i]).abs() <= tol)
    }

    #[test]
    fn flow_examples() {
        let s = ModelSurface::from_ints(3, &[3, 3]).unwrap();
        let f = flow(FlowKind::ExpVmk, &s, int(1)).unwrap();
        assert_eq!(f.apply(&[0.0; 4]).unwrap(), [0.0, 1.0, 1.0, 0.0]);
        let f = flow(FlowKind::ExpV0, &s, int(2)).unwrap();
        assert_eq!(f.apply(&[1.0; 4]).unwrap(), [2.0, 8.0, 8.0, 2.0]);
        assert!(flow(FlowKind::ExpV0, &s, int(-2)).is_err());
        assert!(matches!(
            flow(FlowKind::ExpVk, &s, int(1)),
            Err(Error::InadmissibleFlow { .. })
        ));
    }

    #[test]
    fn vk_domain() {
        let s = ModelSurface::monomial(4, 2).unwrap();
        let f = flow(FlowKind::ExpVk, &s, int(1)).unwrap();
        assert!(matches!(f.apply(&[1.0, 2.0, 0.5, 1.0]), Err(Error::DomainViolation(_))));
        let f = flow(FlowKind::ExpVk, &s, rat(1, 10)).unwrap();
        let p = [1.0, 2.0, 1.0, 1.0];
        let q = f.apply(&p).unwrap();
        let r = s.defining().eval_f64(&q);
        assert!(r.abs() < 1e-12, "{r}");
    }

    #[test]
    fn vk_odd_root_uses_real_branch() {
        let s = ModelSurface::monomial(4, 1).unwrap();
        let f = flow(FlowKind::ExpVk, &s, int(1)).unwrap();
        // 1 - t y < 0 under a cube root
        let p = [1.0, 3.0, 2.0, 1.0];
        let q = f.apply(&p).unwrap();
        assert!(q.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn rk4_examples() {
        let s = ModelSurface::monomial(4, 2).unwrap();
        let q = rk4_oracle(&ParaVectorField::translation(), &[0.0; 4], 1.0, 10);
        assert!(close(&q, &[0.0, 1.0, 1.0, 0.0], 1e-12));
        let q = rk4_oracle(&ParaVectorField::dilation(4), &[1.0; 4], 2f64.ln(), 2000);
        assert!(close(&q, &[2.0, 16.0, 16.0, 2.0], 1e-9));
        let p = [1.0, 2.0, 1.0, 1.0];
        let q = rk4_oracle(&ParaVectorField::monomial_top(4, 2), &p, 0.1, 1000);
        let c = flow(FlowKind::ExpVk, &s, rat(1, 10)).unwrap().apply(&p).unwrap();
        assert!(close(&q, &c, 1e-6));
    }

    #[test]
    fn verify_monomial_flows() {
        let s = ModelSurface::monomial(4, 2).unwrap();
        let opts = VerifyOptions {
            seed: 7,
            ..Default::default()
        };
        for (kind, p) in [
            (FlowKind::ExpVmk, rat(1, 3)),
            (FlowKind::ExpV0, rat(3, 2)),
            (FlowKind::ExpV0Prime, int(3)),
            (FlowKind::ExpVk, rat(1, 10)),
        ] {
            let f = flow(kind, &s, p).unwrap();
            let r = verify_flow(&f, &s, &opts).unwrap_or_else(|e| panic!("{e}"));
            assert_eq!(r.checks.len(), 4);
        }
    }

    #[test]
    fn verify_binomial_flow() {
        let s = ModelSurface::binomial(4, &int(2), &int(3)).unwrap();
        let f = flow(FlowKind::ExpVm1, &s, rat(1, 7)).unwrap();
        let opts = VerifyOptions {
            seed: 3,
            ..Default::default()
        };
        let r = verify_flow(&f, &s, &opts).unwrap();
        assert!(r.checks.iter().all(|c| c.exact));
    }

    #[test]
    fn broken_flow_is_reported() {
        // V0' data on a surface where it does not apply: fake by swapping iota
        let s = ModelSurface::monomial(4, 1).unwrap();
        let f = FlowMap {
            kind: FlowKind::ExpV0Prime,
            k: 4,
            param: int(2),
            data: CaseData::Monomial { iota: 2 },
        };
        let e = verify_flow(&f, &s, &VerifyOptions::default()).unwrap_err();
        assert_eq!(e.check, "surface_preservation");
    }

    #[test]
    fn generators_match_flows() {
        let m = ModelSurface::monomial(5, 2).unwrap();
        let b = ModelSurface::binomial(3, &int(2), &rat(1, 3)).unwrap();
        for (kind, s) in [
            (FlowKind::ExpVmk, &m),
            (FlowKind::ExpV0, &m),
            (FlowKind::ExpV0Prime, &m),
            (FlowKind::ExpVk, &m),
            (FlowKind::ExpVm1, &b),
        ] {
            let c = check_generator(kind, s, 11).unwrap();
            assert!(c.max_error <= 1e-6, "{kind}: {}", c.max_error);
            assert!(generator(kind, s).unwrap().tangency_residual(s).is_zero());
        }
    }

    #[test]
    fn printed_vm1_is_flagged() {
        let s = ModelSurface::binomial(3, &int(1), &int(1)).unwrap();
        let c = check_printed_vm1(&s, 0.1, 10, 5, 1e-6).unwrap();
        assert!(!c.matches);
        assert!(c.deviation_at_zero > 1e-3);
        assert!(c.conjugated_error < 1e-6);
    }

    #[test]
    fn discrete_examples() {
        let cases = [(4, vec![0, 1, 0], DiscreteKind::Z2xZ2), (3, vec![1, 1], DiscreteKind::Z2), (5, vec![1, 0, 1, 0], DiscreteKind::Z2xZ2)];
        for (k, g, kind) in cases {
            let s = ModelSurface::from_ints(k, &g).unwrap();
            let d = discrete_group(&s);
            assert_eq!(d.kind, kind);
            for gen in &d.generators {
                assert!(gen.preserves(&s));
                assert!(gen.is_involution());
            }
        }
        // b -> -b alone does not preserve a mixed-parity surface
        let s = ModelSurface::from_ints(3, &[1, 1]).unwrap();
        assert!(!SignedMap { signs: [1, -1, -1, -1] }.preserves(&s));
        assert!(!SignedMap { signs: [1, 1, 1, -1] }.preserves(&s));
    }

    #[test]
    fn lagrange_weights() {
        // derivative of t^2 at 0 from nodes 0, 1, 2
        let xs = [int(0), int(1), int(2)];
        let w = lagrange_derivative_weights(&xs, &int(0));
        let d: Rational = w.iter().zip(&xs).map(|(wi, x)| wi * x * x).sum();
        assert!(d.is_zero());
        let d: Rational = w.iter().zip(&xs).map(|(wi, x)| wi * x).sum();
        assert_eq!(d, int(1));
    }
}
