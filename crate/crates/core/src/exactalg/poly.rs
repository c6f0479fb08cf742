use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};

/// The closed variable set. Storage index order is `x, y, a, b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    A,
    B,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::A, Var::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::A => 'a',
            Var::B => 'b',
        }
    }

    pub fn from_symbol(c: char) -> Option<Var> {
        match c {
            'x' => Some(Var::X),
            'y' => Some(Var::Y),
            'a' => Some(Var::A),
            'b' => Some(Var::B),
            _ => None,
        }
    }
}

/// Exponent vector `(e_x, e_y, e_a, e_b)`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// on `(e_a, e_y, e_b, e_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(ex: u32, ey: u32, ea: u32, eb: u32) -> Self {
        Monomial([ex, ey, ea, eb])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `e_x + e_b + k (e_a + e_y)`.
    pub fn weight(&self, k: u32) -> i64 {
        let [ex, ey, ea, eb] = self.0;
        i64::from(ex) + i64::from(eb) + i64::from(k) * (i64::from(ea) + i64::from(ey))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    fn order_key(&self) -> (u32, u32, u32, u32, u32) {
        let [ex, ey, ea, eb] = self.0;
        (self.degree(), ea, ey, eb, ex)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // print order a, y, b, x to match the term order
        for v in [Var::A, Var::Y, Var::B, Var::X] {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.symbol())?;
            } else {
                write!(f, "{}^{}", v.symbol(), e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Weighted grading: `x, b` have weight 1, `a, y` have weight `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    pub k: u32,
}

impl Grading {
    pub fn new(k: u32) -> Self {
        Grading { k }
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        m.weight(self.k)
    }
}

/// Multivariate polynomial over `Rational` in `x, y, a, b`.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rational::int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn x() -> Self {
        Poly::var(Var::X)
    }

    pub fn y() -> Self {
        Poly::var(Var::Y)
    }

    pub fn a() -> Self {
        Poly::var(Var::A)
    }

    pub fn b() -> Self {
        Poly::var(Var::B)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, q)| (*m, q * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, q)| (n.mul(m), q.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> Poly {
        let i = v.index();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[i] -= 1;
            out.add_term(n, c * rational::int(i64::from(e)));
        }
        out
    }

    /// Simultaneous substitution of every variable; `images` is indexed by
    /// [`Var::index`].
    pub fn compose(&self, images: &[Poly; 4]) -> Poly {
        let mut powers: [Vec<Poly>; 4] = Default::default();
        for v in Var::ALL {
            let i = v.index();
            let d = self.degree_in(v) as usize;
            let mut pw = Vec::with_capacity(d + 1);
            pw.push(Poly::one());
            for j in 1..=d {
                let next = &pw[j - 1] * &images[i];
                pw.push(next);
            }
            powers[i] = pw;
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for v in Var::ALL {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t = &t * &powers[v.index()][e];
                }
            }
            out += &t;
        }
        out
    }

    /// Replaces a single variable by `image`.
    pub fn substitute(&self, v: Var, image: &Poly) -> Poly {
        let mut images = Var::ALL.map(Poly::var);
        images[v.index()] = image.clone();
        self.compose(&images)
    }

    /// Decomposes by weighted degree; the components sum to `self`.
    pub fn weighted_components(&self, g: &Grading) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(g.weight(m)).or_default().add_term(*m, c.clone());
        }
        out
    }

    /// `Some(w)` if every term has weighted degree `w`; `None` for zero or mixed.
    pub fn homogeneous_weight(&self, g: &Grading) -> Option<i64> {
        let mut ws = self.terms.keys().map(|m| g.weight(m));
        let w = ws.next()?;
        ws.all(|v| v == w).then_some(w)
    }

    /// Exact evaluation at `(x, y, a, b)`.
    pub fn eval(&self, point: &[Rational; 4]) -> Rational {
        let mut powers: [Vec<Rational>; 4] = Default::default();
        for v in Var::ALL {
            let i = v.index();
            let d = self.degree_in(v) as usize;
            let mut pw = vec![Rational::one()];
            for j in 1..=d {
                let next = &pw[j - 1] * &point[i];
                pw.push(next);
            }
            powers[i] = pw;
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t *= &powers[v.index()][e];
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating evaluation at `(x, y, a, b)`.
    pub fn eval_f64(&self, point: &[f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(rational::to_f64(c), |acc, (&e, &p)| acc * p.powi(e as i32))
            })
            .sum()
    }

    /// Terms whose exponent of `v` is below `n` (truncation modulo `v^n`).
    pub fn truncate_in(&self, v: Var, n: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) < n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `v^n`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: Var, n: u32) -> Poly {
        let i = v.index();
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] == n)
                .map(|(m, c)| {
                    let mut e = *m;
                    e.0[i] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Canonical text form: terms in descending canonical order, e.g.
    /// `b^2 x + 3 b x^2 - 1/2 a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = *m == Monomial::ONE;
            if is_const {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("x + b") + p("x - b"), p("2x"));
        assert_eq!(p("x^2 b") + Poly::zero(), p("x^2 b"));
        let s = p("3b x^2") + p("3b^2 x");
        assert_eq!(s.len(), 2);
        assert_eq!(s, p("3 b x^2 + 3 b^2 x"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("x + b") * p("x - b"), p("x^2 - b^2"));
        assert_eq!(p("x + b").pow(3), p("x^3 + 3b x^2 + 3b^2 x + b^3"));
        assert!(p("x + y").scale(&int(0)).is_zero());
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("b^2 x^2").diff(Var::X), p("2 b^2 x"));
        assert_eq!(p("b^2 x^2").diff(Var::B).diff(Var::X), p("4 b x"));
        assert!(p("7/3").diff(Var::X).is_zero());
    }

    #[test]
    fn weighted_components_examples() {
        let g = Grading::new(3);
        let c = p("a + b x^2").weighted_components(&g);
        assert_eq!(c.len(), 1);
        assert_eq!(c[&3], p("a + b x^2"));
        let c = p("a + b").weighted_components(&g);
        assert_eq!(c[&3], p("a"));
        assert_eq!(c[&1], p("b"));
        assert!(Poly::zero().weighted_components(&g).is_empty());
    }

    #[test]
    fn eval_examples() {
        let pt = [int(2), int(0), int(0), int(1)];
        assert_eq!(p("x^2 - b^2").eval(&pt), int(3));
        // a point on y = a + b^2 x^2
        let (x, a, b) = (rat(1, 3), rat(-2, 5), int(7));
        let y = &a + &b * &b * &x * &x;
        assert_eq!(p("y - a - b^2 x^2").eval(&[x, y, a, b]), int(0));
    }

    #[test]
    fn eval_float_matches_exact_on_integer_points() {
        let q = p("3 a^2 b - 1/7 x^3 y + 5 b^4 - 2");
        for pt in [[1, 2, 3, 4], [-2, 0, 5, -1], [7, -3, 2, 2]] {
            let exact = q.eval(&pt.map(int));
            let float = q.eval_f64(&pt.map(|v| v as f64));
            let e = rational::to_f64(&exact);
            assert!((float - e).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(p("3b x^2 + 3/1 b^2 x").to_string(), "3 b^2 x + 3 b x^2");
        assert_eq!(p("-a + 1/2").to_string(), "-a + 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("y^2 - a").to_string(), "y^2 - a");
    }

    #[test]
    fn compose_and_substitute() {
        let q = p("x y + b");
        let r = q.substitute(Var::Y, &p("a + b x"));
        assert_eq!(r, p("a x + b x^2 + b"));
    }
}
