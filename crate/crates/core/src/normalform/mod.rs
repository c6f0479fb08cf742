//! Finite type of `y = a + phi(a, b, x)`, detection of the model case,
//! the binomial normal form, the singular locus of `P_xb`, and the ODE
//! description of a model surface.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, binomial, factorial, int, Rational};
use crate::exactalg::{Monomial, Poly, Var};
use crate::surface::ModelSurface;
use crate::univariate::UniPoly;

/// `phi` in `y = a + phi(a, b, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningFunction {
    phi: Poly,
}

impl DefiningFunction {
    pub fn new(phi: Poly) -> Result<Self> {
        if phi.involves(Var::Y) {
            return Err(Error::InvalidDefiningFunction("phi must not depend on y".into()));
        }
        if !phi.constant_term().is_zero() {
            return Err(Error::InvalidDefiningFunction("phi(0) must vanish".into()));
        }
        if !phi.coeff(&Monomial::var(Var::A)).is_zero() {
            return Err(Error::InvalidDefiningFunction("d(phi)/da must vanish at the origin".into()));
        }
        Ok(DefiningFunction { phi })
    }

    pub fn parse(src: &str) -> Result<Self> {
        DefiningFunction::new(crate::exactalg::parse_poly(src)?)
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeKind {
    /// `gamma[i - 1]` is the coefficient of `b^i x^(k-i)`.
    Finite { k: u32, gamma: Vec<Rational> },
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeResult {
    pub kind: TypeKind,
    /// `phi` after removing pure terms in `b` and `x`, truncated at `truncation`.
    pub normalized: Poly,
    pub truncation: u32,
}

impl TypeResult {
    pub fn k(&self) -> Option<u32> {
        match self.kind {
            TypeKind::Finite { k, .. } => Some(k),
            TypeKind::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == TypeKind::Infinite
    }

    /// Homogeneous model `y = a + P` of the leading part, when `k >= 3`.
    pub fn model(&self) -> Option<ModelSurface> {
        match &self.kind {
            TypeKind::Finite { k, gamma } => ModelSurface::new(i64::from(*k), gamma.clone()).ok(),
            TypeKind::Infinite => None,
        }
    }
}

impl fmt::Display for TypeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TypeKind::Finite { k, gamma } => {
                let g: Vec<String> = gamma.iter().map(|q| q.to_string()).collect();
                write!(f, "FINITE(k={k}, gamma=({}))", g.join(","))
            }
            TypeKind::Infinite => f.write_str("INFINITE"),
        }
    }
}

fn is_pure_b(m: &Monomial) -> bool {
    m.exp(Var::A) == 0 && m.exp(Var::X) == 0 && m.exp(Var::B) > 0
}

fn is_pure_x(m: &Monomial) -> bool {
    m.exp(Var::A) == 0 && m.exp(Var::B) == 0 && m.exp(Var::X) > 0
}

fn is_mixed_a_free(m: &Monomial) -> bool {
    m.exp(Var::A) == 0 && m.exp(Var::B) > 0 && m.exp(Var::X) > 0
}

fn min_degree(p: &Poly, keep: impl Fn(&Monomial) -> bool) -> Option<u32> {
    p.terms().filter(|(m, _)| keep(m)).map(|(m, _)| m.degree()).min()
}

/// Removes pure terms by `y -> y + phi(0,0,x)` and `a -> a + phi(0,b,0)`
/// until the lowest mixed `a`-free part can no longer change, then reads off
/// the type. Terms above total degree `4 deg(phi)` are discarded.
pub fn finite_type(phi: &DefiningFunction) -> TypeResult {
    let deg = phi.phi.total_degree().unwrap_or(0).max(1);
    let cap = 4 * deg;
    let mut cur = phi.phi.filter_terms(|m| m.degree() <= cap);
    loop {
        let pure_x = cur.filter_terms(is_pure_x);
        cur = &cur - &pure_x;
        let g = cur.filter_terms(is_pure_b);
        if g.is_zero() {
            break;
        }
        let mixed = min_degree(&cur, is_mixed_a_free);
        let pure = min_degree(&g, |_| true).unwrap_or(u32::MAX);
        if mixed.is_some_and(|d| pure > d) {
            // later substitutions only touch degrees above the leading part
            cur = &cur - &g;
            break;
        }
        let shifted = cur.substitute(Var::A, &(Poly::a() - g.clone()));
        cur = (&shifted - &g).filter_terms(|m| m.degree() <= cap);
    }
    let kind = match min_degree(&cur, is_mixed_a_free) {
        None => TypeKind::Infinite,
        Some(k) => TypeKind::Finite {
            k,
            gamma: (1..k)
                .map(|i| cur.coeff(&Monomial::new(k - i, 0, 0, i)))
                .collect(),
        },
    };
    TypeResult {
        kind,
        normalized: cur,
        truncation: cap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseDetection {
    Monomial { iota: u32 },
    /// `gamma_i = C(k,i) delta nu^i`.
    Binomial { delta: Rational, nu: Rational },
    Generic,
}

impl CaseDetection {
    pub fn label(&self) -> &'static str {
        match self {
            CaseDetection::Monomial { .. } => "MONOMIAL",
            CaseDetection::Binomial { .. } => "BINOMIAL",
            CaseDetection::Generic => "GENERIC",
        }
    }
}

impl fmt::Display for CaseDetection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseDetection::Monomial { iota } => write!(f, "MONOMIAL(iota={iota})"),
            CaseDetection::Binomial { delta, nu } => write!(f, "BINOMIAL(delta={delta}, nu={nu})"),
            CaseDetection::Generic => f.write_str("GENERIC"),
        }
    }
}

pub fn detect_case(s: &ModelSurface) -> CaseDetection {
    let support = s.support();
    if support.len() == 1 {
        return CaseDetection::Monomial { iota: support[0] };
    }
    let k = s.k();
    // delta, nu != 0 forces every gamma_i to be nonzero
    if support.len() != (k - 1) as usize {
        return CaseDetection::Generic;
    }
    let c = |i: u32| Rational::from_integer(binomial(k, i));
    let nu = (s.gamma_i(2) / c(2)) / (s.gamma_i(1) / c(1));
    let delta = s.gamma_i(1) / (c(1) * &nu);
    let fits = (1..k).all(|i| s.gamma_i(i) == c(i) * &delta * rational::pow(&nu, i));
    if fits {
        CaseDetection::Binomial { delta, nu }
    } else {
        CaseDetection::Generic
    }
}

/// Coordinate changes bringing a binomial surface to `y = a + (x + b)^k`
/// and then, after dropping pure terms, to `gamma_i = C(k, i)`.
#[derive(Debug, Clone)]
pub struct BinomialNormalization {
    pub delta: Rational,
    pub nu: Rational,
    /// Starred coordinates as polynomials in `(x, y, a, b)`, indexed by [`Var::index`]:
    /// `x* = x`, `y* = y/delta + x^k`, `a* = a/delta - nu^k b^k`, `b* = nu b`.
    pub star_map: [Poly; 4],
    /// `y - a - (x + b)^k` in starred variables.
    pub star_defining: Poly,
    /// `x** = x`, `y** = y/delta`, `a** = a/delta`, `b** = nu b`.
    pub normal_map: [Poly; 4],
    pub surface: ModelSurface,
}

fn pull_back_identity(s: &ModelSurface, inverse: &[Poly; 4], target: &Poly, delta: &Rational) -> bool {
    s.defining().compose(inverse) == target.scale(delta)
}

pub fn normalize_binomial(s: &ModelSurface, d: &CaseDetection) -> Result<BinomialNormalization> {
    let CaseDetection::Binomial { delta, nu } = d else {
        return Err(Error::NotBinomial);
    };
    if detect_case(s) != *d {
        return Err(Error::NotBinomial);
    }
    let k = s.k();
    let inv_delta = delta.recip();
    let nu_k = rational::pow(nu, k);
    let mut star_map: [Poly; 4] = Default::default();
    star_map[Var::X.index()] = Poly::x();
    star_map[Var::Y.index()] = &Poly::y().scale(&inv_delta) + &Poly::x().pow(k);
    star_map[Var::A.index()] = &Poly::a().scale(&inv_delta) - &Poly::b().pow(k).scale(&nu_k);
    star_map[Var::B.index()] = Poly::b().scale(nu);

    // original coordinates in terms of starred ones
    let inv_nu = nu.recip();
    let mut star_inverse: [Poly; 4] = Default::default();
    star_inverse[Var::X.index()] = Poly::x();
    star_inverse[Var::Y.index()] = (&Poly::y() - &Poly::x().pow(k)).scale(delta);
    star_inverse[Var::A.index()] = (&Poly::a() + &Poly::b().pow(k)).scale(delta);
    star_inverse[Var::B.index()] = Poly::b().scale(&inv_nu);

    let star_defining = &(Poly::y() - Poly::a()) - &(Poly::x() + Poly::b()).pow(k);
    if !pull_back_identity(s, &star_inverse, &star_defining, delta) {
        return Err(Error::Invalid("starred coordinate change does not produce y* = a* + (x* + b*)^k".into()));
    }

    let mut normal_map: [Poly; 4] = Default::default();
    normal_map[Var::X.index()] = Poly::x();
    normal_map[Var::Y.index()] = Poly::y().scale(&inv_delta);
    normal_map[Var::A.index()] = Poly::a().scale(&inv_delta);
    normal_map[Var::B.index()] = Poly::b().scale(nu);
    let mut normal_inverse: [Poly; 4] = Default::default();
    normal_inverse[Var::X.index()] = Poly::x();
    normal_inverse[Var::Y.index()] = Poly::y().scale(delta);
    normal_inverse[Var::A.index()] = Poly::a().scale(delta);
    normal_inverse[Var::B.index()] = Poly::b().scale(&inv_nu);

    let surface = ModelSurface::binomial(i64::from(k), &Rational::one(), &Rational::one())?;
    if !pull_back_identity(s, &normal_inverse, &surface.defining(), delta) {
        return Err(Error::Invalid("normalized surface is not y = a + sum C(k,i) b^i x^(k-i)".into()));
    }
    Ok(BinomialNormalization {
        delta: delta.clone(),
        nu: nu.clone(),
        star_map,
        star_defining,
        normal_map,
        surface,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularLocus {
    Point,
    /// `P_xb` is a constant multiple of a power of this linear form.
    Line(Poly),
    /// Number of distinct real lines through the origin.
    Pencil(usize),
}

impl SingularLocus {
    pub fn label(&self) -> &'static str {
        match self {
            SingularLocus::Point => "POINT",
            SingularLocus::Line(_) => "LINE",
            SingularLocus::Pencil(_) => "PENCIL",
        }
    }
}

impl fmt::Display for SingularLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularLocus::Point => f.write_str("POINT"),
            SingularLocus::Line(l) => write!(f, "LINE({l})"),
            SingularLocus::Pencil(n) => write!(f, "PENCIL({n})"),
        }
    }
}

/// Coefficients `c_j` of `b^j x^(d-j)` in a binary form of degree `d`.
fn binary_form_coeffs(p: &Poly, d: u32) -> Vec<Rational> {
    (0..=d).map(|j| p.coeff(&Monomial::new(d - j, 0, 0, j))).collect()
}

/// Number of distinct real lines in the zero set of the binary form
/// `sum_j c[j] b^j x^(d-j)` (`c` not all zero).
pub fn count_real_lines(c: &[Rational]) -> usize {
    let d = c.len() - 1;
    // t = x / b: f(t) = sum_j c[j] t^(d-j)
    let f = UniPoly::new(c.iter().rev().cloned().collect());
    let at_infinity = usize::from(c[0].is_zero());
    f.count_real_roots() + at_infinity * usize::from(d > 0)
}

pub fn singular_locus(s: &ModelSurface) -> SingularLocus {
    let d = s.k() - 2;
    let pxb = s.p_xb();
    let c = binary_form_coeffs(&pxb, d);
    let lines = count_real_lines(&c);
    if lines == 0 {
        return SingularLocus::Point;
    }
    if lines == 1 {
        let candidate = if c[0].is_zero() {
            Some(Poly::b())
        } else {
            // P_xb = c0 (x - r b)^d forces r = -c1 / (d c0)
            let r = -&c[1] / (&c[0] * int(i64::from(d)));
            Some(&Poly::x() - &Poly::b().scale(&r))
        };
        if let Some(line) = candidate {
            let lead = if c[0].is_zero() { c[d as usize].clone() } else { c[0].clone() };
            if line.pow(d).scale(&lead) == pxb {
                return SingularLocus::Line(primitive_linear(&line));
            }
        }
    }
    SingularLocus::Pencil(lines)
}

fn primitive_linear(l: &Poly) -> Poly {
    let coeffs: Vec<Rational> = [Var::X, Var::B].iter().map(|&v| l.coeff(&Monomial::var(v))).collect();
    let p = rational::primitive(&coeffs);
    &Poly::x().scale(&p[0]) + &Poly::b().scale(&p[1])
}

/// Result of rebuilding a model surface from the ODE `y^(k)(x) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeCheck {
    /// `y(0) = a, y'(0), ..., y^(k-1)(0)` as polynomials in `(a, b)`.
    pub initial_data: Vec<Poly>,
    /// `y(x)` with pure terms removed.
    pub reconstructed: Poly,
    pub expected: Poly,
    pub matches: bool,
}

/// `y^(j)(0) = j! gamma_{k-j} b^(k-j)` for `j = 1..k-1`, plus `y(0) = a`.
/// `gamma` has length `k - 1` or `k` (the latter adds a pure `gamma_k b^k`).
pub fn ode_initial_data(k: u32, gamma: &[Rational]) -> Result<Vec<Poly>> {
    if k < 3 {
        return Err(Error::DegreeTooSmall(i64::from(k)));
    }
    if gamma.len() + 1 != k as usize && gamma.len() != k as usize {
        return Err(Error::GammaLength {
            expected: (k - 1) as usize,
            got: gamma.len(),
        });
    }
    let g = |i: u32| gamma.get((i as usize).wrapping_sub(1)).cloned().unwrap_or_else(Rational::zero);
    let mut data = vec![&Poly::a() + &Poly::b().pow(k).scale(&g(k))];
    for j in 1..k {
        let c = Rational::from_integer(factorial(j)) * g(k - j);
        data.push(Poly::b().pow(k - j).scale(&c));
    }
    Ok(data)
}

/// Taylor polynomial `sum_j y^(j)(0) x^j / j!` from the initial data.
pub fn ode_solution(initial_data: &[Poly]) -> Poly {
    let mut y = Poly::zero();
    for (j, d) in initial_data.iter().enumerate() {
        let j = j as u32;
        let inv = Rational::from_integer(factorial(j)).recip();
        y += &(d * &Poly::x().pow(j)).scale(&inv);
    }
    y
}

/// Compares `y(x)` built from `initial_data` with `a + P` after discarding
/// pure `b` and `x` terms.
pub fn ode_check(s: &ModelSurface, initial_data: Vec<Poly>) -> OdeCheck {
    let strip = |p: &Poly| p.filter_terms(|m| !is_pure_b(m) && !is_pure_x(m));
    let reconstructed = strip(&ode_solution(&initial_data));
    let expected = &Poly::a() + &s.p();
    OdeCheck {
        matches: reconstructed == expected,
        initial_data,
        reconstructed,
        expected,
    }
}

pub fn ode_manifold(k: u32, gamma: &[Rational]) -> Result<OdeCheck> {
    let data = ode_initial_data(k, gamma)?;
    let s = ModelSurface::new(i64::from(k), gamma[..(k - 1) as usize].to_vec())?;
    Ok(ode_check(&s, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;
    use crate::exactalg::rational::rat;

    fn ft(src: &str) -> TypeResult {
        finite_type(&DefiningFunction::parse(src).unwrap())
    }

    #[test]
    fn finite_type_examples() {
        let r = ft("b^2 x^2");
        assert_eq!(r.kind, TypeKind::Finite { k: 4, gamma: vec![int(0), int(1), int(0)] });
        assert!(ft("a*b").is_infinite());
        let r = ft("x^3 + b x^2");
        assert_eq!(r.kind, TypeKind::Finite { k: 3, gamma: vec![int(1), int(0)] });
        assert_eq!(r.normalized, parse_poly("b x^2").unwrap());
    }

    #[test]
    fn pure_b_feeds_mixed_terms() {
        // a -> a - b^2 turns a x into -b^2 x, of lower degree than b x^4
        let r = ft("b^2 + a x + b x^4");
        assert_eq!(r.kind, TypeKind::Finite { k: 3, gamma: vec![int(0), int(-1)] });
    }

    #[test]
    fn finite_type_is_idempotent() {
        for src in ["x^3 + b x^2 + b^3", "b^2 + a x + b x^4", "a^2 + b^3 + b x^3 + a b x"] {
            let once = ft(src);
            let again = finite_type(&DefiningFunction::new(once.normalized.clone()).unwrap());
            assert_eq!(once.kind, again.kind, "{src}");
        }
    }

    #[test]
    fn defining_function_validation() {
        assert!(DefiningFunction::parse("1 + x^2").is_err());
        assert!(DefiningFunction::parse("a + x^2").is_err());
        assert!(DefiningFunction::parse("y x").is_err());
        assert!(DefiningFunction::parse("a x + b^2 x").is_ok());
    }

    #[test]
    fn case_detection() {
        let s = ModelSurface::from_ints(3, &[3, 3]).unwrap();
        assert_eq!(detect_case(&s), CaseDetection::Binomial { delta: int(1), nu: int(1) });
        let s = ModelSurface::from_ints(4, &[0, 1, 0]).unwrap();
        assert_eq!(detect_case(&s), CaseDetection::Monomial { iota: 2 });
        let s = ModelSurface::from_ints(4, &[1, 0, 1]).unwrap();
        assert_eq!(detect_case(&s), CaseDetection::Generic);
        let s = ModelSurface::binomial(5, &rat(-2, 3), &rat(5, 7)).unwrap();
        assert_eq!(detect_case(&s), CaseDetection::Binomial { delta: rat(-2, 3), nu: rat(5, 7) });
        let s = ModelSurface::from_ints(4, &[4, 6, 5]).unwrap();
        assert_eq!(detect_case(&s), CaseDetection::Generic);
    }

    #[test]
    fn detection_scales() {
        let s = ModelSurface::binomial(4, &int(2), &int(3)).unwrap();
        let c = rat(-5, 2);
        assert_eq!(
            detect_case(&s.scaled(&c).unwrap()),
            CaseDetection::Binomial { delta: int(2) * &c, nu: int(3) }
        );
    }

    #[test]
    fn normalization_examples() {
        let s = ModelSurface::from_ints(3, &[6, 6]).unwrap();
        let d = detect_case(&s);
        assert_eq!(d, CaseDetection::Binomial { delta: int(2), nu: int(1) });
        let n = normalize_binomial(&s, &d).unwrap();
        assert_eq!(n.star_map[Var::A.index()], parse_poly("1/2 a - b^3").unwrap());
        assert_eq!(n.star_map[Var::Y.index()], parse_poly("1/2 y + x^3").unwrap());
        assert_eq!(n.surface.gamma(), &[int(3), int(3)]);
        assert_eq!(detect_case(&n.surface), CaseDetection::Binomial { delta: int(1), nu: int(1) });
        assert!(normalize_binomial(&s, &CaseDetection::Generic).is_err());
        assert!(normalize_binomial(&s, &CaseDetection::Binomial { delta: int(1), nu: int(1) }).is_err());
    }

    #[test]
    fn singular_locus_examples() {
        let loc = |g: &[i64]| singular_locus(&ModelSurface::from_ints(g.len() as i64 + 1, g).unwrap());
        assert_eq!(loc(&[0, 1, 0]), SingularLocus::Pencil(2));
        assert_eq!(loc(&[1, 0, 0]), SingularLocus::Line(Poly::x()));
        assert_eq!(loc(&[0, 0, 1]), SingularLocus::Line(Poly::b()));
        assert_eq!(loc(&[1, 0, 1]), SingularLocus::Point);
        // binomial: P_xb = c (x + b)^(k-2)
        assert_eq!(loc(&[4, 6, 4]), SingularLocus::Line(parse_poly("x + b").unwrap()));
        // x (x^2 + b^2): one real line, not a pure power
        assert_eq!(loc(&[3, 0, 2, 0]), SingularLocus::Pencil(1));
    }

    #[test]
    fn singular_locus_swap_invariant() {
        for g in [[0, 1, 0, 0], [1, 0, 0, 0], [1, 0, 1, 0], [1, 2, 1, 0], [0, 1, 0, 1]] {
            let s = ModelSurface::from_ints(5, &g).unwrap();
            assert_eq!(singular_locus(&s).label(), singular_locus(&s.swapped()).label());
        }
    }

    #[test]
    fn ode_reconstruction() {
        let c = ode_manifold(3, &[int(1), int(1)]).unwrap();
        assert!(c.matches);
        assert_eq!(c.reconstructed, parse_poly("a + b x^2 + b^2 x").unwrap());
        let c = ode_manifold(5, &[int(0), int(0), int(0), int(1)]).unwrap();
        assert!(c.matches);
        // pure b^k term is discarded before comparison
        assert!(ode_manifold(3, &[int(1), int(1), int(7)]).unwrap().matches);
    }

    #[test]
    fn ode_negative_control() {
        let s = ModelSurface::from_ints(4, &[1, 2, 3]).unwrap();
        let mut data = ode_initial_data(4, s.gamma()).unwrap();
        // drop the factorial on the third derivative
        data[3] = data[3].scale(&rat(1, 6));
        assert!(!ode_check(&s, data).matches);
    }
}
