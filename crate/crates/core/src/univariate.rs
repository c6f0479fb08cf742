//! Dense univariate polynomials over Q: Euclidean division, square-free
//! parts, Sturm sequences and rational roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::rational::{common_denominator, Rational};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::default();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&-Rational::one()));
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        match self.degree() {
            None => panic!("zero polynomial has infinitely many roots"),
            Some(0) => return 0,
            _ => {}
        }
        let seq = self.squarefree().sturm_sequence();
        let changes = |signs: Vec<i8>| {
            let s: Vec<i8> = signs.into_iter().filter(|&v| v != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |q: &Rational| -> i8 {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        };
        let at_pos_inf: Vec<i8> = seq.iter().map(|p| sign(&p.lead())).collect();
        let at_neg_inf: Vec<i8> = seq
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        changes(at_neg_inf) - changes(at_pos_inf)
    }

    /// All rational roots with multiplicity, ascending. Returns `None` if the
    /// constant or leading coefficient is too large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        let mut roots = Vec::new();
        let mut p = self.clone();
        while p.degree().is_some_and(|d| d > 0) && p.0[0].is_zero() {
            roots.push(Rational::zero());
            p = UniPoly::new(p.0[1..].to_vec());
        }
        loop {
            let Some(d) = p.degree() else { break };
            if d == 0 {
                break;
            }
            let den = common_denominator(&p.0);
            let ints: Vec<BigInt> = p.0.iter().map(|c| (c * &den).to_integer()).collect();
            let a0 = ints[0].abs().to_u64()?;
            let an = ints[d].abs().to_u64()?;
            if a0 > 1 << 40 || an > 1 << 40 {
                return None;
            }
            let mut found = None;
            'search: for num in divisors(a0) {
                for dn in divisors(an) {
                    for s in [1i64, -1] {
                        let cand = Rational::new(BigInt::from(num) * s, BigInt::from(dn));
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            let Some(r) = found else { break };
            let lin = UniPoly::new(vec![-r.clone(), Rational::one()]);
            p = p.div_rem(&lin).0;
            roots.push(r);
        }
        roots.sort();
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}
