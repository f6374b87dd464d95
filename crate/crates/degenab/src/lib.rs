//! Exact combinatorial and algebraic computations around degenerating
//! abelian varieties.
//!
//! Everything here is exact: rationals, cyclotomic numbers, finite q-Laurent
//! sums, integer lattices. No floating point anywhere.
//!
//! The crate is organized around the objects it computes:
//! - [`exact`]: arithmetic in `Q`, `Z[zeta_N, 1/N]` and finite formal
//!   q-Laurent sums with lattice monomials,
//! - [`heisenberg`]: the finite Heisenberg group, its Schroedinger
//!   representations and linearization cocycles,
//! - [`delaunay`]: Delaunay cells and decompositions of `Z^g` for an even
//!   positive-definite form, with an independent lifted-hull oracle,
//! - [`degeneration`]: degeneration data, truncated theta series, tropical
//!   q -> 0 limits and rank <= 2 affine chart presentations,
//! - [`strata`]: the stratification of a totally degenerate special fiber,
//! - [`hesse`]: the Hesse pencil, its base points and Heisenberg action,
//! - [`cubic`]: singularity classification and GIT stability of plane cubics.

pub mod cubic;
pub mod degeneration;
pub mod delaunay;
pub mod exact;
pub mod heisenberg;
pub mod linalg;
pub mod strata;

pub use exact::{CycNum, QLaurent, Rat};
