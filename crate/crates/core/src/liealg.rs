//! Abstract analysis of a finite-dimensional Lie algebra given by structure
//! constants: derived series, center, Killing form and the matching against
//! the three isomorphism classes that occur for model surfaces.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, Rational};
use crate::linalg;
use crate::solver::SymmetryAlgebra;
use crate::univariate::UniPoly;

/// `[e_i, e_j] = sum_l table[i][j][l] e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    table: Vec<Vec<Vec<Rational>>>,
}

impl StructureConstants {
    pub fn new(table: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = table.len();
        let square = table
            .iter()
            .all(|row| row.len() == n && row.iter().all(|v| v.len() == n));
        if !square {
            return Err(Error::Invalid("structure constant table must be n x n x n".into()));
        }
        Ok(StructureConstants { n, table })
    }

    pub fn zero(n: usize) -> Self {
        StructureConstants {
            n,
            table: vec![vec![vec![Rational::zero(); n]; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> &Rational {
        &self.table[i][j][l]
    }

    pub fn table(&self) -> &[Vec<Vec<Rational>>] {
        &self.table
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for i in 0..self.n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if v[j].is_zero() {
                    continue;
                }
                let f = &u[i] * &v[j];
                for (l, o) in out.iter_mut().enumerate() {
                    let c = &self.table[i][j][l];
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.n];
        e[i] = Rational::one();
        e
    }

    /// Matrix of `ad e_i`: entry `[l][j]` is the `e_l` coefficient of `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|l| (0..self.n).map(|j| self.table[i][j][l].clone()).collect())
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| (0..self.n).all(|l| self.table[i][j][l] == -self.table[j][i][l].clone()))
        })
    }

    pub fn satisfies_jacobi(&self) -> bool {
        for i in 0..self.n {
            for j in i + 1..self.n {
                for l in j + 1..self.n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(l));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `B(e_i, e_j) = tr(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> Vec<Vec<Rational>> {
        let n = self.n;
        let mut b = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    for m in 0..n {
                        let (x, y) = (&self.table[i][m][l], &self.table[j][l][m]);
                        if !x.is_zero() && !y.is_zero() {
                            s += x * y;
                        }
                    }
                }
                b[j][i] = s.clone();
                b[i][j] = s;
            }
        }
        b
    }

    /// Structure constants in the basis `f_r = sum_s change[r][s] e_s`
    /// (`change` must be invertible).
    pub fn change_basis(&self, change: &[Vec<Rational>]) -> Result<StructureConstants> {
        let n = self.n;
        let mut table = vec![vec![vec![Rational::zero(); n]; n]; n];
        for r in 0..n {
            for s in 0..n {
                let br = self.bracket(&change[r], &change[s]);
                let c = linalg::solve_in_span(change, &br)
                    .ok_or_else(|| Error::Invalid("basis change is not invertible".into()))?;
                table[r][s] = c;
            }
        }
        Ok(StructureConstants { n, table })
    }

    /// Structure constants of the subalgebra spanned by the rows of `basis`.
    pub fn restrict(&self, basis: &[Vec<Rational>]) -> Option<StructureConstants> {
        let d = basis.len();
        let mut table = vec![vec![vec![Rational::zero(); d]; d]; d];
        for r in 0..d {
            for s in 0..d {
                table[r][s] = linalg::solve_in_span(basis, &self.bracket(&basis[r], &basis[s]))?;
            }
        }
        Some(StructureConstants { n: d, table })
    }

    /// Basis (rows) of `[U, U]` for the subspace `U` spanned by `basis`.
    fn commutator_space(&self, basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for r in 0..basis.len() {
            for s in r + 1..basis.len() {
                rows.push(self.bracket(&basis[r], &basis[s]));
            }
        }
        linalg::rref(&rows, self.n).0
    }

    fn identity_basis(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.unit(i)).collect()
    }

    pub fn derived_algebra(&self) -> Vec<Vec<Rational>> {
        self.commutator_space(&self.identity_basis())
    }

    /// Dimensions `dim g, dim g', dim g'', ...` until the series stabilizes.
    pub fn derived_series_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.n];
        let mut cur = self.identity_basis();
        loop {
            let next = self.commutator_space(&cur);
            if next.len() == cur.len() {
                break;
            }
            dims.push(next.len());
            if next.is_empty() {
                break;
            }
            cur = next;
        }
        dims
    }

    pub fn center(&self) -> Vec<Vec<Rational>> {
        let n = self.n;
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for l in 0..n {
                rows.push((0..n).map(|i| self.table[i][j][l].clone()).collect());
            }
        }
        linalg::kernel(&rows, n)
    }
}

/// `(positive, negative, zero)` counts of a symmetric rational matrix, by
/// symmetric congruence diagonalization.
pub fn signature(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.to_vec();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // row_i += row_j, col_i += col_j; new a_ii = 2 a_ij
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
            }
        }
        let p = a[i][i].clone();
        diag.push(p.clone());
        if p.is_zero() {
            continue;
        }
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &p;
            for c in 0..n {
                let v = &f * &a[i][c];
                a[j][c] -= v;
            }
            for row in a.iter_mut() {
                let v = &f * &row[i];
                row[j] -= v;
            }
        }
    }
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    let neg = diag.iter().filter(|d| d.is_negative()).count();
    (pos, neg, n - pos - neg)
}

/// Characteristic polynomial `det(t I - A)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> UniPoly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for step in 1..=n {
        // M <- A M + c_{n-step+1} I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - step + 1];
        }
        m = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - step] = -tr / int(step as i64);
    }
    UniPoly::new(coeffs)
}

/// Invariants of a Lie algebra that separate the cases of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraProfile {
    pub dimension: usize,
    pub derived_series_dims: Vec<usize>,
    pub center_dim: usize,
    pub killing_rank: usize,
    pub killing_signature: (usize, usize, usize),
    pub is_solvable: bool,
    /// Killing signature of the derived algebra as a Lie algebra in its own right.
    pub derived_killing_signature: (usize, usize, usize),
    /// Rational eigenvalues of `ad h` on the derived algebra, where `h` spans a
    /// complement of codimension one. `None` if the derived algebra has other
    /// codimension or some eigenvalue is irrational.
    pub ad_eigenvalues: Option<Vec<Rational>>,
}

impl AlgebraProfile {
    pub fn derived_dim(&self) -> usize {
        self.derived_series_dims.get(1).copied().unwrap_or(self.dimension)
    }

    pub fn second_derived_dim(&self) -> usize {
        match self.derived_series_dims.len() {
            0 | 1 => self.dimension,
            2 => self.derived_series_dims[1],
            _ => self.derived_series_dims[2],
        }
    }
}

pub fn structure_constants(a: &SymmetryAlgebra) -> Result<StructureConstants> {
    if let Some(v) = a.closure_violations.first() {
        return Err(Error::Invalid(format!(
            "closure violation: [e_{}, e_{}] = {} is not in the computed span",
            v.i, v.j, v.bracket
        )));
    }
    StructureConstants::new(a.structure_constants.clone())
}

fn ad_on_derived(sc: &StructureConstants, derived: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = sc.dim();
    if derived.is_empty() || derived.len() + 1 != n {
        return None;
    }
    let h = (0..n).map(|i| sc.unit(i)).find(|e| {
        let mut rows = derived.to_vec();
        rows.push(e.clone());
        linalg::rank(&rows, n) == n
    })?;
    let d = derived.len();
    // column s holds [h, d_s] in the derived basis
    let cols: Vec<Vec<Rational>> = derived
        .iter()
        .map(|ds| linalg::solve_in_span(derived, &sc.bracket(&h, ds)))
        .collect::<Option<_>>()?;
    let m: Vec<Vec<Rational>> = (0..d).map(|r| (0..d).map(|s| cols[s][r].clone()).collect()).collect();
    let roots = characteristic_polynomial(&m).rational_roots()?;
    (roots.len() == d).then_some(roots)
}

pub fn profile(sc: &StructureConstants) -> AlgebraProfile {
    let n = sc.dim();
    let derived_series_dims = sc.derived_series_dims();
    let killing = sc.killing_form();
    let killing_signature = signature(&killing);
    let derived = sc.derived_algebra();
    let derived_killing_signature = sc
        .restrict(&derived)
        .map(|d| signature(&d.killing_form()))
        .unwrap_or((0, 0, derived.len()));
    AlgebraProfile {
        dimension: n,
        is_solvable: derived_series_dims.last() == Some(&0) || n == 0,
        derived_series_dims,
        center_dim: sc.center().len(),
        killing_rank: killing_signature.0 + killing_signature.1,
        killing_signature,
        derived_killing_signature,
        ad_eigenvalues: ad_on_derived(sc, &derived),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// `sl(2,R) + R`.
    Sl2PlusCenter,
    /// Three-dimensional solvable, abelian two-dimensional derived algebra on
    /// which the grading element acts with eigenvalue ratio `k : 1`.
    Solvable3dWeightsK1,
    /// The non-abelian two-dimensional algebra.
    AffineLine2d,
    Other(Box<AlgebraProfile>),
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Sl2PlusCenter => "SL2_PLUS_CENTER",
            Classification::Solvable3dWeightsK1 => "SOLVABLE_3D_WEIGHTS_K_1",
            Classification::AffineLine2d => "AFFINE_LINE_2D",
            Classification::Other(_) => "OTHER",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Matches a profile against the three model cases; `k` is the degree of the
/// surface and fixes the expected eigenvalue ratio in the solvable case.
pub fn classify(p: &AlgebraProfile, k: u32) -> Classification {
    let sl2_plus_center = p.dimension == 4
        && p.derived_dim() == 3
        && p.second_derived_dim() == 3
        && p.derived_killing_signature == (2, 1, 0)
        && p.center_dim == 1;
    if sl2_plus_center {
        return Classification::Sl2PlusCenter;
    }
    let ratio_k = |ev: &[Rational]| -> bool {
        if ev.len() != 2 || ev.iter().any(Zero::is_zero) {
            return false;
        }
        let r = &ev[0] / &ev[1];
        let k = int(i64::from(k));
        r == k || r == k.recip()
    };
    if p.dimension == 3
        && p.is_solvable
        && p.derived_dim() == 2
        && p.second_derived_dim() == 0
        && p.ad_eigenvalues.as_deref().is_some_and(ratio_k)
    {
        return Classification::Solvable3dWeightsK1;
    }
    if p.dimension == 2 && p.derived_dim() == 1 {
        return Classification::AffineLine2d;
    }
    Classification::Other(Box::new(p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    /// sl(2) in the basis (h, e, f) plus a central element z.
    fn sl2_plus_r() -> StructureConstants {
        let mut sc = StructureConstants::zero(4);
        let mut set = |i: usize, j: usize, l: usize, v: i64| {
            sc.table[i][j][l] = int(v);
            sc.table[j][i][l] = int(-v);
        };
        set(0, 1, 1, 2);
        set(0, 2, 2, -2);
        set(1, 2, 0, 1);
        sc
    }

    #[test]
    fn sl2_profile() {
        let sc = sl2_plus_r();
        assert!(sc.is_antisymmetric());
        assert!(sc.satisfies_jacobi());
        let p = profile(&sc);
        assert_eq!(p.derived_series_dims, vec![4, 3]);
        assert_eq!(p.center_dim, 1);
        assert_eq!(p.killing_signature, (2, 1, 1));
        assert_eq!(p.killing_rank, 3);
        assert!(!p.is_solvable);
        assert_eq!(classify(&p, 4), Classification::Sl2PlusCenter);
    }

    #[test]
    fn compact_form_is_not_sl2() {
        // so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2, plus a center
        let mut sc = StructureConstants::zero(4);
        for (i, j, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            sc.table[i][j][l] = int(1);
            sc.table[j][i][l] = int(-1);
        }
        let p = profile(&sc);
        assert_eq!(p.derived_killing_signature, (0, 3, 0));
        assert!(matches!(classify(&p, 4), Classification::Other(_)));
    }

    #[test]
    fn abelian_is_other() {
        let sc = StructureConstants::zero(2);
        let p = profile(&sc);
        assert_eq!(p.derived_series_dims, vec![2, 0]);
        assert_eq!(p.center_dim, 2);
        assert!(matches!(classify(&p, 3), Classification::Other(_)));
    }

    #[test]
    fn solvable_ratio() {
        // [h, u] = 3u, [h, v] = v
        let mut sc = StructureConstants::zero(3);
        sc.table[0][1][1] = int(3);
        sc.table[1][0][1] = int(-3);
        sc.table[0][2][2] = int(1);
        sc.table[2][0][2] = int(-1);
        let p = profile(&sc);
        assert_eq!(p.ad_eigenvalues, Some(vec![int(1), int(3)]));
        assert_eq!(classify(&p, 3), Classification::Solvable3dWeightsK1);
        assert!(matches!(classify(&p, 4), Classification::Other(_)));
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(signature(&m), (1, 1, 0));
        let m = vec![vec![rat(1, 2), int(0)], vec![int(0), int(0)]];
        assert_eq!(signature(&m), (1, 0, 1));
    }

    #[test]
    fn charpoly() {
        let a = vec![vec![int(2), int(1)], vec![int(0), int(3)]];
        let p = characteristic_polynomial(&a);
        assert_eq!(p.coeffs(), &[int(6), int(-5), int(1)]);
    }

    #[test]
    fn killing_is_ad_invariant() {
        let sc = sl2_plus_r();
        let b = sc.killing_form();
        let n = sc.dim();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy = sc.bracket(&sc.unit(x), &sc.unit(y));
                    let xz = sc.bracket(&sc.unit(x), &sc.unit(z));
                    let lhs: Rational = (0..n).map(|i| &xy[i] * &b[i][z]).sum();
                    let rhs: Rational = (0..n).map(|i| &b[y][i] * &xz[i]).sum();
                    assert!((lhs + rhs).is_zero());
                }
            }
        }
    }
}
