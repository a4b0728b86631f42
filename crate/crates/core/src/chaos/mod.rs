//! Diagnostics relating chaos to information gain.

mod alignment;
mod fisher;
mod husimi;
mod ordered;

pub use alignment::{alignment_trace, AlignmentMatrix};
pub use fisher::{fisher_information, fisher_series};
pub use husimi::{
    gauss_legendre, husimi_entropy, husimi_q, regularize_observable, GridNode, PhaseSpaceGrid,
};
pub use ordered::{
    measurement_order, ordered_basis_experiment, ordered_basis_experiment_with, Order, OrderedStep,
};
