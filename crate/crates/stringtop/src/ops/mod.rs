//! String operations assembled from the lower layers: loop homology by two
//! routes, the dual loop product and its module property, the loop coproduct
//! and its Euler-characteristic criterion, intersection with the fiber, the
//! classifying-space operations, and diagonal Ext groups.

mod bg;
mod coproduct;
mod ext;
mod fiber;
mod loop_homology;
mod product;

pub use bg::{bg_loop_coproduct, bg_loop_product, BgVerdict};
pub use coproduct::{loop_coproduct_psi, LoopCoproductReport};
pub use ext::{ext_diagonal, ExtDiagonalReport};
pub use fiber::{intersection_with_fiber, sullivan_fiber_ranks, FiberReport};
pub use loop_homology::{loop_betti_hochschild, loop_betti_sullivan, LoopHomologyTable, Provenance};
pub use product::{
    cap_action, cap_action_elem, check_module_property, dual_loop_product, DualLoopProduct,
    ModulePropertyReport, ProductTable,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("{0}")]
    Graded(#[from] crate::graded::GradedError),
    #[error("{0}")]
    Bar(#[from] crate::bar::BarError),
    #[error("{0}")]
    Cdga(#[from] crate::cdga::CdgaError),
    #[error("{0}")]
    Pd(#[from] crate::pd::PdError),
    #[error("{0}")]
    Sullivan(#[from] crate::sullivan::SullivanError),
    #[error("consistency failure: {0}")]
    Consistency(String),
}
