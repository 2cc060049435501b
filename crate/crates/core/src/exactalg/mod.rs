//! Exact polynomial arithmetic: monomial orders, Gröbner bases, ideal
//! membership, long division in one variable, dense linear algebra.

pub mod division;
pub mod groebner;
pub mod linalg;
pub mod order;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod univar;

pub use division::{basis_expand, reassemble, univar_divide, univar_rem};
pub use groebner::{groebner_basis, ideal_member, membership_cofactors, GroebnerOptions, IdealBasis};
pub use order::MonomialOrder;
pub use parse::{parse_poly, parse_ring_spec, RingSpec};
pub use poly::{Monomial, Polynomial, Ring, RingRef};
