//! Polynomials: univariate, commutative multivariate, bounded free-algebra
//! elements, and the vanishing-ideal and Krylov-relation computations built on
//! them.

mod algebra;
mod free;
mod ideal;
mod krylov;
mod multi;
mod ncform;
mod parse;
mod univariate;

pub use algebra::Algebra;
pub use free::{FreePoly, Word};
pub use ideal::{
    default_variables, evaluate_at_tuple, quotient_algebra, vanishing_ideal, IdealPresentation, QuotientAlgebra,
};
pub use krylov::{rational_krylov_relation, OperatorRelation, RationalFunctionVector};
pub use multi::{Monomial, MultiPoly};
pub use ncform::{nc_normal_form_degree4, xi_generators, xi_products, xi_relations, TruncatedIdeal};
pub use parse::{
    parse_free, parse_multi, parse_univariate, parse_univariate_matrix, univariate_matrix_entries, PolyEntry,
};
pub use univariate::{RatFunc, UniPoly};
