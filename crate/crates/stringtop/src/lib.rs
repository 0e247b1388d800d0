//! Exact-rational string topology workbench.
//!
//! Builds Sullivan and bar/Hochschild models of free loop spaces from finite
//! algebra presentations and computes loop products, loop coproducts,
//! intersection-with-fiber maps and diagonal Ext groups, all by exact linear
//! algebra over the rationals.
//!
//! ```
//! use stringtop::{fixtures, ops};
//!
//! // free-loop-space Betti numbers of the three-sphere, two independent ways
//! let sullivan = ops::loop_betti_sullivan(&fixtures::s3_sullivan(), 8).unwrap();
//! let hochschild = ops::loop_betti_hochschild(&fixtures::s3(), 8).unwrap();
//! assert_eq!(sullivan.betti_vec(), hochschild.betti_vec());
//!
//! // the loop coproduct of an odd sphere is trivial: χ = 0
//! let coproduct = ops::loop_coproduct_psi(&fixtures::s3(), 6).unwrap();
//! assert!(coproduct.trivial);
//! ```

pub mod bar;
pub mod cdga;
pub mod dga;
pub mod fixtures;
pub mod graded;
pub mod matrix;
pub mod ops;
pub mod parse;
pub mod pd;
pub mod scalar;
pub mod sullivan;

pub use cdga::FreeCdga;
pub use graded::{Degree, DegreeRange, GradedBasis, LinearMapByDegree};
pub use parse::{parse_algebra, serialize_algebra, AlgebraFile};
pub use pd::FinitePdAlgebra;
pub use scalar::{frac, rat, Rat, Scalar};
