//! Model surfaces `S: y = a + P(x, b)`, para-holomorphic vector fields and the
//! tangency residual.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, binomial, int, Rational};
use crate::exactalg::{Grading, Monomial, Poly, Var};

/// `y = a + P(x, b)` with `P = sum_{i=1}^{k-1} gamma_i b^i x^{k-i}`, `k >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelSurface {
    k: u32,
    gamma: Vec<Rational>,
}

impl ModelSurface {
    /// `gamma[i - 1]` is the coefficient of `b^i x^(k-i)`.
    pub fn new(k: i64, gamma: Vec<Rational>) -> Result<Self> {
        if k < 3 {
            return Err(Error::DegreeTooSmall(k));
        }
        let k = u32::try_from(k).map_err(|_| Error::Invalid(format!("k = {k} too large")))?;
        if gamma.len() != (k - 1) as usize {
            return Err(Error::GammaLength {
                expected: (k - 1) as usize,
                got: gamma.len(),
            });
        }
        if gamma.iter().all(Zero::is_zero) {
            return Err(Error::ZeroSurface);
        }
        Ok(ModelSurface { k, gamma })
    }

    pub fn from_ints(k: i64, gamma: &[i64]) -> Result<Self> {
        ModelSurface::new(k, gamma.iter().map(|&g| int(g)).collect())
    }

    /// `P = b^iota x^(k - iota)`.
    pub fn monomial(k: i64, iota: usize) -> Result<Self> {
        let len = usize::try_from(k - 1).unwrap_or(0);
        if iota == 0 || iota > len {
            return Err(Error::Invalid(format!("iota = {iota} outside 1..{}", k - 1)));
        }
        let mut gamma = vec![Rational::zero(); len];
        gamma[iota - 1] = Rational::one();
        ModelSurface::new(k, gamma)
    }

    /// `P = delta [(x + nu b)^k - x^k - nu^k b^k]`, i.e. `gamma_i = C(k,i) delta nu^i`.
    pub fn binomial(k: i64, delta: &Rational, nu: &Rational) -> Result<Self> {
        if k < 3 {
            return Err(Error::DegreeTooSmall(k));
        }
        let gamma = (1..k as u32)
            .map(|i| Rational::from_integer(binomial(k as u32, i)) * delta * rational::pow(nu, i))
            .collect();
        ModelSurface::new(k, gamma)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }

    /// `gamma_i` with 1-based `i`; zero outside `1..k-1`.
    pub fn gamma_i(&self, i: u32) -> Rational {
        if i == 0 || i >= self.k {
            return Rational::zero();
        }
        self.gamma[(i - 1) as usize].clone()
    }

    /// 1-based indices with `gamma_i != 0`.
    pub fn support(&self) -> Vec<u32> {
        (1..self.k).filter(|&i| !self.gamma_i(i).is_zero()).collect()
    }

    pub fn grading(&self) -> Grading {
        Grading::new(self.k)
    }

    pub fn p(&self) -> Poly {
        Poly::from_terms((1..self.k).map(|i| (Monomial::new(self.k - i, 0, 0, i), self.gamma_i(i))))
    }

    pub fn p_x(&self) -> Poly {
        self.p().diff(Var::X)
    }

    pub fn p_b(&self) -> Poly {
        self.p().diff(Var::B)
    }

    pub fn p_xb(&self) -> Poly {
        self.p().diff(Var::X).diff(Var::B)
    }

    /// `y - a - P`.
    pub fn defining(&self) -> Poly {
        &(Poly::y() - Poly::a()) - &self.p()
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        ModelSurface::new(
            i64::from(self.k),
            self.gamma.iter().map(|g| g * c).collect(),
        )
    }

    /// Surface obtained by exchanging `x` and `b` (reverses `gamma`).
    pub fn swapped(&self) -> Self {
        let mut gamma = self.gamma.clone();
        gamma.reverse();
        ModelSurface { k: self.k, gamma }
    }

    pub fn describe(&self) -> String {
        let g: Vec<String> = self.gamma.iter().map(|q| q.to_string()).collect();
        format!("k={} gamma=({})", self.k, g.join(","))
    }
}

impl Poly {
    /// Replaces `y` by `a + P(x, b)`; the result is free of `y`.
    pub fn substitute_y(&self, s: &ModelSurface) -> Poly {
        self.substitute(Var::Y, &(Poly::a() + s.p()))
    }
}

/// General polynomial vector field on `R^4`; `comps` indexed by [`Var::index`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    pub comps: [Poly; 4],
}

impl VectorField {
    pub fn new(x: Poly, y: Poly, a: Poly, b: Poly) -> Self {
        VectorField { comps: [x, y, a, b] }
    }

    pub fn comp(&self, v: Var) -> &Poly {
        &self.comps[v.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for v in Var::ALL {
            let c = self.comp(v);
            if !c.is_zero() {
                out += &(c * &f.diff(v));
            }
        }
        out
    }

    /// `[V, W]` with components `V(W^v) - W(V^v)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: Var::ALL.map(|v| self.apply(other.comp(v)) - other.apply(self.comp(v))),
        }
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField {
            comps: self.comps.clone().map(|p| p.scale(c)),
        }
    }

    pub fn eval_f64(&self, point: &[f64; 4]) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.comps[i].eval_f64(point))
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: [0, 1, 2, 3].map(|i| &self.comps[i] + &rhs.comps[i]),
        }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: [0, 1, 2, 3].map(|i| &self.comps[i] - &rhs.comps[i]),
        }
    }
}

/// `V = alpha(a,b) d_a + beta(a,b) d_b + xi(x,y) d_x + eta(x,y) d_y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParaVectorField {
    alpha: Poly,
    beta: Poly,
    xi: Poly,
    eta: Poly,
}

fn check_vars(component: &'static str, p: &Poly, forbidden: [Var; 2]) -> Result<()> {
    for v in forbidden {
        if p.involves(v) {
            return Err(Error::MixedVariables {
                component,
                var: v.symbol(),
            });
        }
    }
    Ok(())
}

impl ParaVectorField {
    pub fn new(alpha: Poly, beta: Poly, xi: Poly, eta: Poly) -> Result<Self> {
        check_vars("alpha", &alpha, [Var::X, Var::Y])?;
        check_vars("beta", &beta, [Var::X, Var::Y])?;
        check_vars("xi", &xi, [Var::A, Var::B])?;
        check_vars("eta", &eta, [Var::A, Var::B])?;
        Ok(ParaVectorField {
            alpha,
            beta,
            xi,
            eta,
        })
    }

    pub fn zero() -> Self {
        ParaVectorField::default()
    }

    pub fn from_vector_field(v: &VectorField) -> Result<Self> {
        ParaVectorField::new(
            v.comp(Var::A).clone(),
            v.comp(Var::B).clone(),
            v.comp(Var::X).clone(),
            v.comp(Var::Y).clone(),
        )
    }

    /// Parses the four components from the polynomial grammar.
    pub fn parse(alpha: &str, beta: &str, xi: &str, eta: &str) -> Result<Self> {
        ParaVectorField::new(alpha.parse()?, beta.parse()?, xi.parse()?, eta.parse()?)
    }

    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    pub fn beta(&self) -> &Poly {
        &self.beta
    }

    pub fn xi(&self) -> &Poly {
        &self.xi
    }

    pub fn eta(&self) -> &Poly {
        &self.eta
    }

    /// Components in the order `alpha, beta, xi, eta`.
    pub fn components(&self) -> [&Poly; 4] {
        [&self.alpha, &self.beta, &self.xi, &self.eta]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|p| p.is_zero())
    }

    pub fn to_vector_field(&self) -> VectorField {
        VectorField::new(
            self.xi.clone(),
            self.eta.clone(),
            self.alpha.clone(),
            self.beta.clone(),
        )
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.to_vector_field().apply(f)
    }

    pub fn bracket(&self, other: &ParaVectorField) -> ParaVectorField {
        let w = self.to_vector_field().bracket(&other.to_vector_field());
        ParaVectorField::from_vector_field(&w)
            .expect("bracket of para-holomorphic fields is para-holomorphic")
    }

    pub fn scale(&self, c: &Rational) -> ParaVectorField {
        ParaVectorField {
            alpha: self.alpha.scale(c),
            beta: self.beta.scale(c),
            xi: self.xi.scale(c),
            eta: self.eta.scale(c),
        }
    }

    /// `eta(x, a+P) - alpha - beta P_b - xi(x, a+P) P_x`, i.e. `V(y - a - P)`
    /// restricted to `S`. Zero iff `V` is tangent to `S`.
    pub fn tangency_residual(&self, s: &ModelSurface) -> Poly {
        self.apply(&s.defining()).substitute_y(s)
    }

    pub fn weight_of(&self, g: &Grading) -> FieldWeight {
        let k = i64::from(g.k);
        // (component, shift from polynomial degree to field weight)
        let parts = [(&self.alpha, k), (&self.beta, 1), (&self.xi, 1), (&self.eta, k)];
        let mut weight = None;
        for (p, shift) in parts {
            if p.is_zero() {
                continue;
            }
            let Some(w) = p.homogeneous_weight(g) else {
                return FieldWeight::Mixed;
            };
            let m = w - shift;
            match weight {
                None => weight = Some(m),
                Some(prev) if prev != m => return FieldWeight::Mixed,
                _ => {}
            }
        }
        weight.map_or(FieldWeight::Zero, FieldWeight::Homogeneous)
    }

    pub fn eval_f64(&self, point: &[f64; 4]) -> [f64; 4] {
        self.to_vector_field().eval_f64(point)
    }

    /// `V_{-k} = d_a + d_y`.
    pub fn translation() -> Self {
        ParaVectorField {
            alpha: Poly::one(),
            eta: Poly::one(),
            ..Default::default()
        }
    }

    /// `V_0 = k a d_a + b d_b + x d_x + k y d_y`.
    pub fn dilation(k: u32) -> Self {
        let k = int(i64::from(k));
        ParaVectorField {
            alpha: Poly::a().scale(&k),
            beta: Poly::b(),
            xi: Poly::x(),
            eta: Poly::y().scale(&k),
        }
    }

    /// `V_0' = (iota - k) b d_b + iota x d_x`.
    pub fn monomial_dilation(k: u32, iota: u32) -> Self {
        ParaVectorField {
            beta: Poly::b().scale(&(int(i64::from(iota)) - int(i64::from(k)))),
            xi: Poly::x().scale(&int(i64::from(iota))),
            ..Default::default()
        }
    }

    /// `V_k = a^2 d_a + (1/iota) a b d_b + 1/(k - iota) x y d_x + y^2 d_y`.
    pub fn monomial_top(k: u32, iota: u32) -> Self {
        ParaVectorField {
            alpha: Poly::a().pow(2),
            beta: (Poly::a() * Poly::b()).scale(&rational::rat(1, i64::from(iota))),
            xi: (Poly::x() * Poly::y()).scale(&rational::rat(1, i64::from(k - iota))),
            eta: Poly::y().pow(2),
        }
    }

    /// Weight `-1` generator of the binomial surface
    /// `delta [(x + nu b)^k - x^k - nu^k b^k]`:
    /// `d_b - nu d_x + k delta nu^k b^(k-1) d_a + k delta nu x^(k-1) d_y`.
    pub fn binomial_shift(k: u32, delta: &Rational, nu: &Rational) -> Self {
        let kd = int(i64::from(k)) * delta;
        ParaVectorField {
            alpha: Poly::b().pow(k - 1).scale(&(&kd * rational::pow(nu, k))),
            beta: Poly::one(),
            xi: Poly::constant(-nu.clone()),
            eta: Poly::x().pow(k - 1).scale(&(&kd * nu)),
        }
    }
}

impl Add for &ParaVectorField {
    type Output = ParaVectorField;
    fn add(self, rhs: &ParaVectorField) -> ParaVectorField {
        ParaVectorField {
            alpha: &self.alpha + &rhs.alpha,
            beta: &self.beta + &rhs.beta,
            xi: &self.xi + &rhs.xi,
            eta: &self.eta + &rhs.eta,
        }
    }
}

impl Sub for &ParaVectorField {
    type Output = ParaVectorField;
    fn sub(self, rhs: &ParaVectorField) -> ParaVectorField {
        ParaVectorField {
            alpha: &self.alpha - &rhs.alpha,
            beta: &self.beta - &rhs.beta,
            xi: &self.xi - &rhs.xi,
            eta: &self.eta - &rhs.eta,
        }
    }
}

impl fmt::Display for ParaVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            (&self.alpha, "d_a"),
            (&self.beta, "d_b"),
            (&self.xi, "d_x"),
            (&self.eta, "d_y"),
        ]
        .iter()
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, d)| format!("({p}) {d}"))
        .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Weight of a vector field under the grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldWeight {
    Homogeneous(i64),
    Mixed,
    Zero,
}

/// `X = d_x + P_x d_y` and `Y = d_b - P_b d_a`.
#[derive(Debug, Clone)]
pub struct DirectionPair {
    pub x: VectorField,
    pub y: VectorField,
    pub p_xb: Poly,
}

impl DirectionPair {
    pub fn new(s: &ModelSurface) -> Self {
        let x = VectorField::new(Poly::one(), s.p_x(), Poly::zero(), Poly::zero());
        let y = VectorField::new(Poly::zero(), Poly::zero(), -s.p_b(), Poly::one());
        DirectionPair {
            x,
            y,
            p_xb: s.p_xb(),
        }
    }

    pub fn commutator(&self) -> VectorField {
        self.x.bracket(&self.y)
    }

    /// `[X, Y] + P_xb (d_a + d_y)`; zero for every model surface.
    pub fn commutator_defect(&self) -> VectorField {
        let expected = VectorField::new(
            Poly::zero(),
            -self.p_xb.clone(),
            -self.p_xb.clone(),
            Poly::zero(),
        );
        &self.commutator() - &expected
    }
}

pub fn direction_pair(s: &ModelSurface) -> DirectionPair {
    DirectionPair::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn surf(k: i64, g: &[i64]) -> ModelSurface {
        ModelSurface::from_ints(k, g).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(ModelSurface::from_ints(2, &[1]), Err(Error::DegreeTooSmall(2)));
        assert_eq!(
            ModelSurface::from_ints(4, &[1, 0]),
            Err(Error::GammaLength { expected: 3, got: 2 })
        );
        assert_eq!(ModelSurface::from_ints(3, &[0, 0]), Err(Error::ZeroSurface));
        assert!(matches!(
            ParaVectorField::parse("x", "0", "0", "0"),
            Err(Error::MixedVariables { component: "alpha", var: 'x' })
        ));
        assert!(ParaVectorField::parse("0", "0", "0", "a").is_err());
    }

    #[test]
    fn p_has_no_pure_terms() {
        let s = surf(4, &[2, -1, 3]);
        assert_eq!(s.p(), p("2 b x^3 - b^2 x^2 + 3 b^3 x"));
        assert!(s.p().coeff(&Monomial::new(4, 0, 0, 0)).is_zero());
    }

    #[test]
    fn substitute_y_examples() {
        let s = surf(4, &[0, 1, 0]);
        assert_eq!(Poly::y().substitute_y(&s), p("a + b^2 x^2"));
        assert_eq!(p("y^2").substitute_y(&s), p("a^2 + 2 a b^2 x^2 + b^4 x^4"));
        assert_eq!(Poly::x().substitute_y(&s), Poly::x());
    }

    #[test]
    fn apply_examples() {
        let t = ParaVectorField::translation();
        assert!(t.apply(&p("y - a")).is_zero());
        let euler = ParaVectorField::parse("0", "0", "x", "0").unwrap();
        assert_eq!(euler.apply(&p("x^5")), p("5 x^5"));
        for s in [surf(3, &[1, 1]), surf(3, &[-2, 7])] {
            let d = s.defining();
            assert_eq!(ParaVectorField::dilation(3).apply(&d), d.scale(&int(3)));
        }
    }

    #[test]
    fn bracket_examples() {
        for k in 3..7 {
            let t = ParaVectorField::translation();
            let v0 = ParaVectorField::dilation(k);
            assert_eq!(t.bracket(&v0), t.scale(&int(i64::from(k))));
            assert!(v0.bracket(&v0).is_zero());
        }
        let v0p = ParaVectorField::monomial_dilation(4, 2);
        let vk = ParaVectorField::monomial_top(4, 2);
        assert!(v0p.bracket(&vk).is_zero());
    }

    #[test]
    fn residual_examples() {
        for s in [surf(3, &[1, 1]), surf(5, &[0, 2, 0, -1])] {
            assert!(ParaVectorField::translation().tangency_residual(&s).is_zero());
        }
        let db = ParaVectorField::parse("0", "1", "0", "0").unwrap();
        assert_eq!(db.tangency_residual(&surf(4, &[0, 1, 0])), p("-2 b x^2"));
        let vk = ParaVectorField::monomial_top(4, 2);
        assert!(vk.tangency_residual(&surf(4, &[0, 1, 0])).is_zero());
    }

    #[test]
    fn binomial_shift_is_tangent() {
        for (k, d, n) in [(3, 1, 1), (4, 2, 3), (5, -1, 2)] {
            let (d, n) = (int(d), int(n));
            let s = ModelSurface::binomial(k, &d, &n).unwrap();
            let v = ParaVectorField::binomial_shift(k as u32, &d, &n);
            assert!(v.tangency_residual(&s).is_zero(), "k={k}");
        }
    }

    #[test]
    fn weight_examples() {
        let g = Grading::new(4);
        assert_eq!(ParaVectorField::translation().weight_of(&g), FieldWeight::Homogeneous(-4));
        assert_eq!(ParaVectorField::dilation(4).weight_of(&g), FieldWeight::Homogeneous(0));
        let mixed = ParaVectorField::parse("1", "b", "0", "0").unwrap();
        assert_eq!(mixed.weight_of(&g), FieldWeight::Mixed);
        assert_eq!(ParaVectorField::zero().weight_of(&g), FieldWeight::Zero);
        assert_eq!(ParaVectorField::monomial_top(4, 2).weight_of(&g), FieldWeight::Homogeneous(4));
    }

    #[test]
    fn direction_pair_examples() {
        let dp = direction_pair(&surf(4, &[0, 1, 0]));
        assert_eq!(dp.y.comp(Var::A), &p("-2 b x^2"));
        let dp = direction_pair(&surf(3, &[1, 1]));
        assert_eq!(dp.p_xb, p("2x + 2b"));
        let c = dp.commutator();
        assert_eq!(c.comp(Var::A), &p("-2x - 2b"));
        assert_eq!(c.comp(Var::Y), &p("-2x - 2b"));
        assert!(dp.commutator_defect().is_zero());
    }

    fn small_poly(vars: [Var; 2]) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..3, 0u32..3, -3i64..=3), 0..4).prop_map(move |ts| {
            Poly::from_terms(ts.into_iter().map(|(i, j, c)| {
                let mut m = Monomial::ONE;
                m.0[vars[0].index()] = i;
                m.0[vars[1].index()] = j;
                (m, int(c))
            }))
        })
    }

    fn field() -> impl Strategy<Value = ParaVectorField> {
        (
            small_poly([Var::A, Var::B]),
            small_poly([Var::A, Var::B]),
            small_poly([Var::X, Var::Y]),
            small_poly([Var::X, Var::Y]),
        )
            .prop_map(|(a, b, x, y)| ParaVectorField::new(a, b, x, y).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn jacobi(u in field(), v in field(), w in field()) {
            let j = &(&u.bracket(&v.bracket(&w)) + &v.bracket(&w.bracket(&u))) + &w.bracket(&u.bracket(&v));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn residual_is_linear(u in field(), v in field(), c in -5i64..=5) {
            let s = surf(4, &[1, -2, 3]);
            let lhs = (&u + &v.scale(&int(c))).tangency_residual(&s);
            let rhs = u.tangency_residual(&s) + v.tangency_residual(&s).scale(&int(c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn direction_pair_identity(g in proptest::collection::vec(-3i64..=3, 4)) {
            prop_assume!(g.iter().any(|&v| v != 0));
            let dp = direction_pair(&surf(5, &g));
            prop_assert!(dp.commutator_defect().is_zero());
        }
    }
}
