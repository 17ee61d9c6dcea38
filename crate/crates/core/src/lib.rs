//! Numerical laboratory for Markov semigroups with classical orthogonal
//! polynomial eigenfunctions (Hermite, Laguerre, Jacobi, Gegenbauer) and
//! their Bernstein subordinations.
//!
//! Every quantity that can overflow at high polynomial degree is carried as
//! a [`LogValue`]. Integrals against the invariant probability measures go
//! through Gauss rules built from the monic three-term recurrences.
//!
//! Only the one-dimensional families are modelled; tensorized Hermite
//! eigenfunctions in dimension `d` have the same `L^p` norms as their
//! one-dimensional factors, so every blow-up statement reduces to `d = 1`.

pub mod bernstein;
pub mod error;
pub mod limits;
pub mod logvalue;
pub mod norm_bounds;
pub mod obstruction;
pub mod orthopoly;
pub mod poincare;
pub mod quadrature;
pub mod special;
pub mod subordination;

pub use bernstein::{BernsteinFn, LevySpec};
pub use error::{Error, Result};
pub use logvalue::LogValue;
pub use orthopoly::PolyFamily;
pub use quadrature::{Measure, QuadratureRule};
