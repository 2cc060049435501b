//! Exact residues, local cohomology, Cousin complexes and truncated de Rham
//! cohomology over ℚ and prime fields.
//!
//! ```
//! use residua::exactalg::{parse_poly, Ring};
//! use residua::residue::tate_residue_local;
//! use residua::{Rational, RationalField};
//!
//! let ring = Ring::<Rational>::new(&["t".to_string()], RationalField).unwrap();
//! let q = parse_poly(&ring, "t^2-1").unwrap();
//! let f = parse_poly(&ring, "3*t+5").unwrap();
//! assert_eq!(tate_residue_local(&f, &q, 1, 0).unwrap().to_string(), "3");
//! ```

pub mod corpus;
pub mod cousin;
pub mod derham;
pub mod error;
pub mod exactalg;
pub mod forms;
pub mod localcoh;
pub mod regdiff;
pub mod residue;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{CoefField, Field, Fp, PrimeField, Rational, RationalField};

/// Polynomials over ℚ.
pub type QPoly = exactalg::Polynomial<Rational>;
/// Polynomials over a prime field.
pub type FpPoly = exactalg::Polynomial<Fp>;
