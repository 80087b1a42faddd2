//! Exact computer algebra for D-modules on affine space: Weyl-algebra
//! arithmetic, commutative and Weyl Groebner bases, characteristic
//! varieties, GKZ hypergeometric systems and their reduction to classical
//! hypergeometric operators.

pub mod equivariant;
pub mod feasibility;
pub mod gkz;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod reduction;
pub mod scalar;
pub mod weyl;
pub mod weyl_groebner;

mod engine;

pub use groebner::{CIdeal, GroebnerBasis};
pub use linalg::IntMatrix;
pub use monomial::{MonomialOrder, MultiIndex};
pub use poly::{Poly, Ring};
pub use scalar::Scalar;
pub use weyl::{TwistedPower, WeylOp};
pub use weyl_groebner::{CharReport, WIdeal};
