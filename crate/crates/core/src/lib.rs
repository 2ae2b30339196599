//! Computational tools for C*-extreme points of unital completely positive
//! maps on finite-dimensional real C*-algebras.
//!
//! Algebras are represented concretely as unital `*`-closed spans of real
//! matrices ([`algebra::ConcreteAlgebra`]); maps into `M_m(R)` are stored by
//! their values on the algebra basis ([`cpmaps::UcpMap`]). On top of that
//! sit minimal Stinespring dilations, Radon–Nikodym densities, and the
//! extremality deciders for matrix and commutative domains.

pub mod algebra;
pub mod cpmaps;
pub mod error;
pub mod extremality;
pub mod numerics;
pub mod sampling;
pub mod skewconv;
pub mod stinespring;

pub use error::{Error, Result};
pub use numerics::{RealMatrix, Tolerance};
