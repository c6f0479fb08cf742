//! Exact computation and classification of polynomial infinitesimal para-CR
//! automorphisms of model hypersurfaces `y = a + P(x, b)`.
//!
//! The pipeline is: build a [`ModelSurface`], solve the tangency equation
//! weight by weight ([`solver`]), analyse the resulting Lie algebra
//! ([`liealg`]), and cross-check with normal forms ([`normalform`]), explicit
//! flows ([`flows`]) and the embedding series ([`embedding`]).

pub mod embedding;
pub mod error;
pub mod exactalg;
pub mod flows;
pub mod liealg;
pub mod linalg;
pub mod normalform;
pub mod solver;
pub mod surface;
pub mod univariate;

pub use error::{Error, Result};
pub use exactalg::{parse_poly, Grading, Monomial, Poly, Rational, Var};
pub use liealg::{classify, profile, AlgebraProfile, Classification, StructureConstants};
pub use normalform::{CaseDetection, DefiningFunction, SingularLocus, TypeResult};
pub use solver::{solve_algebra, solve_weight, KernelBasis, SymmetryAlgebra, WeightAnsatz};
pub use surface::{DirectionPair, FieldWeight, ModelSurface, ParaVectorField, VectorField};
