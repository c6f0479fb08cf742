//! Weight-by-weight solution of the tangency equation.
//!
//! For a fixed weight `m` every component of a homogeneous field is a finite
//! combination of admissible monomials. Substituting this ansatz into the
//! tangency residual and collecting coefficients yields a linear system over Q
//! whose kernel is the space of infinitesimal automorphisms of weight `m`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, rat, Rational};
use crate::exactalg::{Monomial, Poly};
use crate::linalg;
use crate::surface::{ModelSurface, ParaVectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Alpha,
    Beta,
    Xi,
    Eta,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Alpha, Component::Beta, Component::Xi, Component::Eta];

    pub fn name(self) -> &'static str {
        match self {
            Component::Alpha => "alpha",
            Component::Beta => "beta",
            Component::Xi => "xi",
            Component::Eta => "eta",
        }
    }

    fn of(self, v: &ParaVectorField) -> &Poly {
        let [a, b, x, y] = v.components();
        match self {
            Component::Alpha => a,
            Component::Beta => b,
            Component::Xi => x,
            Component::Eta => y,
        }
    }
}

/// Symbolic homogeneous field of weight `m`: one unknown per admissible monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAnsatz {
    pub weight: i64,
    pub k: u32,
    pub unknowns: Vec<(Component, Monomial)>,
}

/// Monomials `u^i v^j` (`u` of weight `k`, `v` of weight 1) with `k i + j = target`.
fn graded_monomials(k: u32, target: i64, heavy: usize, light: usize) -> Vec<Monomial> {
    if target < 0 {
        return Vec::new();
    }
    let k = i64::from(k);
    let mut out: Vec<Monomial> = (0..=target / k)
        .map(|i| {
            let mut m = Monomial::ONE;
            m.0[heavy] = i as u32;
            m.0[light] = (target - k * i) as u32;
            m
        })
        .collect();
    out.sort();
    out
}

impl WeightAnsatz {
    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn monomials(&self, c: Component) -> Vec<Monomial> {
        self.unknowns
            .iter()
            .filter(|(d, _)| *d == c)
            .map(|(_, m)| *m)
            .collect()
    }

    /// Instantiates the field with the given unknown values.
    pub fn field(&self, values: &[Rational]) -> ParaVectorField {
        assert_eq!(values.len(), self.unknowns.len());
        let mut comps: BTreeMap<Component, Poly> = BTreeMap::new();
        for ((c, m), v) in self.unknowns.iter().zip(values) {
            comps.entry(*c).or_default().add_term(*m, v.clone());
        }
        let mut take = |c| comps.remove(&c).unwrap_or_default();
        ParaVectorField::new(
            take(Component::Alpha),
            take(Component::Beta),
            take(Component::Xi),
            take(Component::Eta),
        )
        .expect("ansatz monomials respect para-holomorphicity")
    }

    /// Field with a single unknown set to one.
    pub fn unit_field(&self, idx: usize) -> ParaVectorField {
        let mut v = vec![Rational::zero(); self.len()];
        v[idx] = Rational::one();
        self.field(&v)
    }

    /// Coordinates of a homogeneous field of this weight, or `None` if it has
    /// terms outside the ansatz.
    pub fn coordinates(&self, v: &ParaVectorField) -> Option<Vec<Rational>> {
        let mut covered = 0;
        let coords: Vec<Rational> = self
            .unknowns
            .iter()
            .map(|(c, m)| {
                let q = c.of(v).coeff(m);
                if !q.is_zero() {
                    covered += 1;
                }
                q
            })
            .collect();
        let total: usize = Component::ALL.iter().map(|c| c.of(v).len()).sum();
        (covered == total).then_some(coords)
    }
}

pub fn build_ansatz(s: &ModelSurface, m: i64) -> WeightAnsatz {
    let k = s.k();
    let ki = i64::from(k);
    let (x, y, a, b) = (0, 1, 2, 3);
    let mut unknowns = Vec::new();
    if m >= -ki {
        let groups = [
            (Component::Alpha, graded_monomials(k, m + ki, a, b)),
            (Component::Beta, graded_monomials(k, m + 1, a, b)),
            (Component::Xi, graded_monomials(k, m + 1, y, x)),
            (Component::Eta, graded_monomials(k, m + ki, y, x)),
        ];
        for (c, ms) in groups {
            unknowns.extend(ms.into_iter().map(|mono| (c, mono)));
        }
    }
    WeightAnsatz {
        weight: m,
        k,
        unknowns,
    }
}

/// Kernel of the weight-`m` system.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub weight: i64,
    pub basis: Vec<ParaVectorField>,
    /// Kernel vectors in the ansatz coordinates (primitive integer vectors).
    pub vectors: Vec<Vec<Rational>>,
    /// `(rows, cols)` of the solved linear system.
    pub system_shape: (usize, usize),
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn collect_system(columns: &[Poly]) -> Vec<Vec<Rational>> {
    let rows: BTreeSet<Monomial> = columns
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| *m))
        .collect();
    rows.iter()
        .map(|m| columns.iter().map(|p| p.coeff(m)).collect())
        .collect()
}

/// Exact solution space of the tangency equation in weight `m`.
pub fn solve_weight(s: &ModelSurface, m: i64) -> KernelBasis {
    let ansatz = build_ansatz(s, m);
    let n = ansatz.len();
    let columns: Vec<Poly> = (0..n)
        .map(|i| ansatz.unit_field(i).tangency_residual(s))
        .collect();
    let system = collect_system(&columns);
    let vectors = linalg::kernel(&system, n);
    KernelBasis {
        weight: m,
        basis: vectors.iter().map(|v| ansatz.field(v)).collect(),
        vectors,
        system_shape: (system.len(), n),
    }
}

pub const DEFAULT_ORACLE_SEED: u64 = 0x7061_7261_6372;

fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-40..=40), rng.gen_range(1..=3))
}

fn rpow(q: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * q)
}

/// Value of the residual of a single ansatz monomial at `(x, a, b)` on `S`,
/// computed pointwise without symbolic substitution.
fn pointwise_residual(s: &ModelSurface, c: Component, m: &Monomial, x: &Rational, a: &Rational, b: &Rational) -> Rational {
    let k = s.k();
    let mut p = Rational::zero();
    let mut p_x = Rational::zero();
    let mut p_b = Rational::zero();
    for i in 1..k {
        let g = s.gamma_i(i);
        if g.is_zero() {
            continue;
        }
        p += &g * rpow(b, i) * rpow(x, k - i);
        p_b += &g * int(i64::from(i)) * rpow(b, i - 1) * rpow(x, k - i);
        if k - i >= 1 {
            p_x += &g * int(i64::from(k - i)) * rpow(b, i) * rpow(x, k - i - 1);
        }
    }
    let y = a + &p;
    let ab = || rpow(a, m.0[2]) * rpow(b, m.0[3]);
    let xy = || rpow(x, m.0[0]) * rpow(&y, m.0[1]);
    match c {
        Component::Alpha => -ab(),
        Component::Beta => -(ab() * &p_b),
        Component::Xi => -(xy() * &p_x),
        Component::Eta => xy(),
    }
}

/// Independent re-derivation of [`solve_weight`]: the linear system is built
/// by evaluating the residual at random rational points of `S` and solved by
/// Gauss-Jordan elimination. Fails if kernel dimension or span disagree.
pub fn brute_force_check(s: &ModelSurface, m: i64) -> Result<KernelBasis> {
    brute_force_check_seeded(s, m, DEFAULT_ORACLE_SEED)
}

pub fn brute_force_check_seeded(s: &ModelSurface, m: i64, seed: u64) -> Result<KernelBasis> {
    let ansatz = build_ansatz(s, m);
    let n = ansatz.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9));
    let npoints = n + 8;
    let points: Vec<[Rational; 3]> = (0..npoints)
        .map(|_| [random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng)])
        .collect();
    let system: Vec<Vec<Rational>> = points
        .par_iter()
        .map(|[x, a, b]| {
            ansatz
                .unknowns
                .iter()
                .map(|(c, mono)| pointwise_residual(s, *c, mono, x, a, b))
                .collect()
        })
        .collect();
    let vectors = linalg::kernel_rref(&system, n);
    let oracle = KernelBasis {
        weight: m,
        basis: vectors.iter().map(|v| ansatz.field(v)).collect(),
        vectors,
        system_shape: (npoints, n),
    };

    let symbolic = solve_weight(s, m);
    if symbolic.dim() != oracle.dim() {
        return Err(Error::OracleMismatch {
            weight: m,
            detail: format!("dimension {} (symbolic) vs {} (pointwise)", symbolic.dim(), oracle.dim()),
        });
    }
    let mut both = symbolic.vectors.clone();
    both.extend(oracle.vectors.iter().cloned());
    if linalg::rank(&both, n) != oracle.dim() {
        return Err(Error::OracleMismatch {
            weight: m,
            detail: "kernel spans differ".into(),
        });
    }
    Ok(oracle)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub weight: i64,
    pub field: ParaVectorField,
}

/// A bracket that could not be expressed in the computed span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub i: usize,
    pub j: usize,
    pub bracket: ParaVectorField,
}

/// Graded basis of infinitesimal automorphisms up to `weight_cap` together with
/// the structure constants `[e_i, e_j] = sum_l c[i][j][l] e_l`.
#[derive(Debug, Clone)]
pub struct SymmetryAlgebra {
    pub surface: ModelSurface,
    pub weight_cap: i64,
    pub generators: Vec<Generator>,
    pub structure_constants: Vec<Vec<Vec<Rational>>>,
    pub closure_violations: Vec<ClosureViolation>,
    /// Kernel dimension for every weight in `[-k, weight_cap]`.
    pub weight_dims: BTreeMap<i64, usize>,
}

impl SymmetryAlgebra {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.closure_violations.is_empty()
    }

    pub fn of_weight(&self, w: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.generators[i].weight == w).collect()
    }

    /// Coordinates of `v` in the generator basis, if `v` lies in the span.
    pub fn express(&self, v: &ParaVectorField) -> Option<Vec<Rational>> {
        let n = self.dim();
        if v.is_zero() {
            return Some(vec![Rational::zero(); n]);
        }
        let w = match v.weight_of(&self.surface.grading()) {
            crate::surface::FieldWeight::Homogeneous(w) => w,
            _ => return express_general(&self.generators, v),
        };
        let idx = self.of_weight(w);
        if idx.is_empty() {
            return None;
        }
        let ansatz = build_ansatz(&self.surface, w);
        let target = ansatz.coordinates(v)?;
        let vecs: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| ansatz.coordinates(&self.generators[i].field).expect("generator in ansatz"))
            .collect();
        let c = linalg::solve_in_span(&vecs, &target)?;
        let mut out = vec![Rational::zero(); n];
        for (pos, &i) in idx.iter().enumerate() {
            out[i] = c[pos].clone();
        }
        Some(out)
    }
}

/// Fallback for inhomogeneous fields: expand every homogeneous piece.
fn express_general(gens: &[Generator], v: &ParaVectorField) -> Option<Vec<Rational>> {
    let mut keys: BTreeSet<(Component, Monomial)> = BTreeSet::new();
    let mut add_keys = |f: &ParaVectorField| {
        for c in Component::ALL {
            keys.extend(c.of(f).terms().map(|(m, _)| (c, *m)));
        }
    };
    add_keys(v);
    gens.iter().for_each(|g| add_keys(&g.field));
    let coords = |f: &ParaVectorField| -> Vec<Rational> { keys.iter().map(|(c, m)| c.of(f).coeff(m)).collect() };
    let vecs: Vec<Vec<Rational>> = gens.iter().map(|g| coords(&g.field)).collect();
    linalg::solve_in_span(&vecs, &coords(v))
}

/// Solves every weight in `[-k, weight_cap]` and assembles the algebra.
pub fn solve_algebra(s: &ModelSurface, weight_cap: i64) -> Result<SymmetryAlgebra> {
    let k = i64::from(s.k());
    if weight_cap < k {
        return Err(Error::Invalid(format!("weight_cap {weight_cap} must be >= k = {k}")));
    }
    let kernels: Vec<KernelBasis> = (-k..=weight_cap)
        .into_par_iter()
        .map(|m| solve_weight(s, m))
        .collect();
    let weight_dims = kernels.iter().map(|kb| (kb.weight, kb.dim())).collect();
    let generators: Vec<Generator> = kernels
        .into_iter()
        .flat_map(|kb| {
            let w = kb.weight;
            kb.basis.into_iter().map(move |field| Generator { weight: w, field })
        })
        .collect();

    let mut alg = SymmetryAlgebra {
        surface: s.clone(),
        weight_cap,
        generators,
        structure_constants: Vec::new(),
        closure_violations: Vec::new(),
        weight_dims,
    };
    let n = alg.dim();
    let mut table = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let br = alg.generators[i].field.bracket(&alg.generators[j].field);
            match alg.express(&br) {
                Some(c) => {
                    for (l, v) in c.into_iter().enumerate() {
                        table[j][i][l] = -v.clone();
                        table[i][j][l] = v;
                    }
                }
                None => alg.closure_violations.push(ClosureViolation { i, j, bracket: br }),
            }
        }
    }
    alg.structure_constants = table;
    Ok(alg)
}

pub fn default_weight_cap(s: &ModelSurface) -> i64 {
    3 * i64::from(s.k())
}
