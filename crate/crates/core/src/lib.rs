//! Exact simplicity checks for twisted groupoid algebras built from finite
//! directed graphs.
//!
//! The library models shift systems on finite graphs (and products of
//! them), their path groupoids, circle-valued 2-cocycles presented either
//! as degree pullbacks or as label-derived crossed-product cocycles, and
//! decides simplicity of the associated twisted algebra with exact
//! circle-group arithmetic. Every verdict carries machine-checkable
//! witness data, and randomized ε-net oracles cross-check the density
//! decisions.

pub mod angle;
pub mod cohomology;
pub mod graph;
pub mod groupoid;
pub mod lattice;
pub mod oracle;
pub mod spectral;

pub use angle::{AngleError, AngleVector, ExactAngle, IrrationalBasis};
pub use cohomology::{
    bicharacter_from_cocycle, centre, coboundary, flatten_to_constant, is_cohomologous,
    trace_canonical, vanish_on_centre_normalize, Bicharacter, Cocycle2, CocycleError, OneCochain,
    QuotientBicharacter,
};
pub use graph::{
    compute_p_t, forward_orbit_dense, h_tilde, is_minimal, is_path_space_uncountable, label_sum,
    EdgeLabeling, EpPoint, Graph, GraphError, PathWord, ProductSystem,
};
pub use groupoid::{
    conditional_expectation, convolve, eval_sigma, in_isotropy_interior, involution, tau,
    theta_apply, CocycleSpec, GroupoidElem, GroupoidError, TwistedFn,
};
pub use lattice::{
    hermite_normal_form, integer_kernel, rational_kernel_mod1, smith_normal_form, IntMatrix,
    Sublattice,
};
pub use spectral::{
    circle_dense, crossed_product_simple, rho_orbit_dense, simplicity_pipeline, torus_dense,
    TorusSubgroup, Verdict, VerdictReason, VerdictStatus,
};
