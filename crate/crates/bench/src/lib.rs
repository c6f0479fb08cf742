//! Fixtures shared by the benchmarks.

use paracr_core::exactalg::rational::{int, rat};
use paracr_core::solver::build_ansatz;
use paracr_core::{ModelSurface, Poly, Rational};

/// One surface from each case: interior monomial, binomial, generic.
pub fn surfaces() -> Vec<(&'static str, ModelSurface)> {
    vec![
        ("monomial_k5_i2", ModelSurface::monomial(5, 2).unwrap()),
        ("binomial_k4_d2_n3", ModelSurface::binomial(4, &int(2), &int(3)).unwrap()),
        ("generic_k6", ModelSurface::from_ints(6, &[0, 1, 0, 1, 0]).unwrap()),
    ]
}

/// Dense `rows x cols` matrix with small rational entries and a kernel of
/// dimension at least `cols - rows`.
pub fn matrix(rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let n = ((i * 7 + j * 13 + i * j) % 11) as i64 - 5;
                    rat(n, 1 + ((i + j) % 3) as i64)
                })
                .collect()
        })
        .collect()
}

/// `(x + y + a + b + 1)^n`.
pub fn dense_poly(n: u32) -> Poly {
    let s = &(&(&(&Poly::x() + &Poly::y()) + &Poly::a()) + &Poly::b()) + &Poly::one();
    s.pow(n)
}

/// Size of the linear system at weight `m`.
pub fn ansatz_size(s: &ModelSurface, m: i64) -> usize {
    build_ansatz(s, m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(surfaces().len(), 3);
        assert_eq!(matrix(4, 6).len(), 4);
        assert_eq!(dense_poly(2).len(), 15);
        assert!(ansatz_size(&surfaces()[0].1, 0) > 0);
    }
}
