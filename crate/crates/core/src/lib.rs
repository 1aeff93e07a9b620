//! Computable analysis on spaces of convergent power series.
//!
//! Germs of holomorphic functions at the origin of `ℂ^m` are represented by
//! their Taylor expansions truncated at a finite total degree. On top of that
//! representation the crate provides:
//!
//! - [`series`]: exact or floating truncated multivariate series arithmetic;
//! - [`norms`]: weighted `ℓ¹` norms `Σ a_n |f_n|`, the factorial family, and
//!   the optimal constants bounding products, compositions and derivatives;
//! - [`calculus`]: composition, compositional inversion, the maps
//!   `g ↦ z·exp(g)` and its logarithmic chart, directional derivatives, and
//!   commutators of germs of diffeomorphisms;
//! - [`coprimality`]: a rank test on Macaulay-like matrices that certifies
//!   coprimality of families of power series in finitely many steps;
//! - [`flows`]: Lie-series flows of vector fields and a solver for scalar
//!   ODEs through their companion field;
//! - [`foliation`]: blow-up of planar foliations with zero linear part and
//!   numerical holonomy of the exceptional divisor.
//!
//! The guide under `book/` walks through each module; its code listings
//! are compiled and run as doctests.

pub mod calculus;
pub mod coprimality;
pub mod error;
pub mod flows;
pub mod foliation;
pub mod io;
pub mod mindex;
pub mod norms;
pub mod scalar;
pub mod series;

pub use error::{GermError, Result};
pub use mindex::MultiIndex;
pub use scalar::{GaussianRational, Scalar};
pub use series::{Series, Valuation};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/calculus.md")]
    mod calculus {}
    #[doc = include_str!("../../../book/src/coprimality.md")]
    mod coprimality {}
    #[doc = include_str!("../../../book/src/flows.md")]
    mod flows {}
    #[doc = include_str!("../../../book/src/foliation.md")]
    mod foliation {}
}
