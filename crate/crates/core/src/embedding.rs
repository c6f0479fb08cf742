//! Embedding of a para-CR structure with frame `X = d_x`, `Y = d_b + psi d_a`:
//! truncated power series in `b` for the Cauchy problem
//! `d(phi~)/db + psi d(phi~)/da = 0`, `phi~|_{b=0} = a`, the induced direction
//! field, and para-CR function residuals on model surfaces.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, Rational};
use crate::exactalg::{Poly, Var};
use crate::surface::{DirectionPair, ModelSurface};

pub const DEFAULT_ORDER: u32 = 8;

/// `psi(x, a, b)` of the frame `Y = d_b + psi d_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaCRStructureData {
    psi: Poly,
}

impl ParaCRStructureData {
    pub fn new(psi: Poly) -> Result<Self> {
        if psi.involves(Var::Y) {
            return Err(Error::Invalid("psi must be a polynomial in x, a, b".into()));
        }
        Ok(ParaCRStructureData { psi })
    }

    pub fn psi(&self) -> &Poly {
        &self.psi
    }

    /// `Y f = f_b + psi f_a`.
    pub fn apply_y(&self, f: &Poly) -> Poly {
        &f.diff(Var::B) + &(&self.psi * &f.diff(Var::A))
    }
}

/// `phi~ = sum_{n <= N} c_n(a, x) b^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSeries {
    pub order: u32,
    pub coeffs: Vec<Poly>,
    pub data: ParaCRStructureData,
}

impl EmbeddingSeries {
    pub fn phi_tilde(&self) -> Poly {
        let mut out = Poly::zero();
        for (n, c) in self.coeffs.iter().enumerate() {
            out += &(c * &Poly::b().pow(n as u32));
        }
        out
    }

    /// `d(phi~)/db + psi d(phi~)/da`.
    pub fn transport_residual(&self) -> Poly {
        self.data.apply_y(&self.phi_tilde())
    }

    /// Residual has no terms of `b`-degree below `order`.
    pub fn is_solution(&self) -> bool {
        self.transport_residual().truncate_in(Var::B, self.order).is_zero()
    }
}

/// Solves the Cauchy problem by `(n+1) c_{n+1} = -sum_{m+j=n} psi_m d(c_j)/da`
/// with `psi = sum_m psi_m(x, a) b^m`.
pub fn solve_embedding(psi: &Poly, order: u32) -> Result<EmbeddingSeries> {
    if order == 0 {
        return Err(Error::Invalid("series order must be at least 1".into()));
    }
    let data = ParaCRStructureData::new(psi.clone())?;
    let psi_m: Vec<Poly> = (0..order).map(|m| psi.coeff_of_power(Var::B, m)).collect();
    let mut coeffs = vec![Poly::a()];
    let mut da = vec![Poly::one()];
    for n in 0..order as usize {
        let mut s = Poly::zero();
        for j in 0..=n {
            let pm = &psi_m[n - j];
            if !pm.is_zero() && !da[j].is_zero() {
                s += &(pm * &da[j]);
            }
        }
        let c = s.scale(&(-Rational::one() / int(n as i64 + 1)));
        da.push(c.diff(Var::A));
        coeffs.push(c);
    }
    Ok(EmbeddingSeries { order, coeffs, data })
}

/// Direction field `d_b + (num / den) d_a` tangent to the embedded surface
/// inside the `(a, b)` plane, with `phi = phi~ - a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedField {
    /// `-phi_b`.
    pub numerator: Poly,
    /// `1 + phi_a`.
    pub denominator: Poly,
    /// `num - psi den`, truncated below `b^order`.
    pub residual: Poly,
}

impl InducedField {
    pub fn matches_frame(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn induced_y(series: &EmbeddingSeries) -> Result<InducedField> {
    let phi = &series.phi_tilde() - &Poly::a();
    let numerator = -phi.diff(Var::B);
    let denominator = &Poly::one() + &phi.diff(Var::A);
    // 1 + phi_a must be a unit in the power series ring
    if denominator.coeff_of_power(Var::B, 0) != Poly::one() {
        return Err(Error::NonUnitDenominator);
    }
    let residual = (&numerator - &(series.data.psi() * &denominator)).truncate_in(Var::B, series.order);
    Ok(InducedField {
        numerator,
        denominator,
        residual,
    })
}

/// `u(x, y)` and `v(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaCRFunctionPair {
    u: Poly,
    v: Poly,
}

impl ParaCRFunctionPair {
    pub fn new(u: Poly, v: Poly) -> Result<Self> {
        for (p, comp, bad) in [(&u, "u", [Var::A, Var::B]), (&v, "v", [Var::X, Var::Y])] {
            if let Some(var) = bad.into_iter().find(|&w| p.involves(w)) {
                return Err(Error::MixedVariables {
                    component: comp,
                    var: var.symbol(),
                });
            }
        }
        Ok(ParaCRFunctionPair { u, v })
    }

    pub fn parse(u: &str, v: &str) -> Result<Self> {
        ParaCRFunctionPair::new(u.parse()?, v.parse()?)
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }
}

/// `(X v, Y u)` on `s`, with `y = a + P` substituted in `u`.
pub fn paracr_residuals(f: &ParaCRFunctionPair, s: &ModelSurface) -> (Poly, Poly) {
    let dp = DirectionPair::new(s);
    let xv = dp.x.apply(&f.v).substitute_y(s);
    let yu = dp.y.apply(&f.u.substitute_y(s));
    (xv, yu)
}

/// `(X v, Y u)` for functions given on `s` in the coordinates `(x, a, b)`,
/// where `X = d_x` and `Y = d_b - P_b d_a`.
pub fn surface_function_residuals(u: &Poly, v: &Poly, s: &ModelSurface) -> Result<(Poly, Poly)> {
    if u.involves(Var::Y) || v.involves(Var::Y) {
        return Err(Error::Invalid("surface functions are written in x, a, b".into()));
    }
    let y = &u.diff(Var::B) - &(&s.p_b() * &u.diff(Var::A));
    Ok((v.diff(Var::X), y))
}
