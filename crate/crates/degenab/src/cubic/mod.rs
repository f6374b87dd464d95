//! Plane cubics over a cyclotomic field: exact singularity classification
//! into nine classes, GIT stability with stabilizer data, diagonal
//! one-parameter-subgroup weight checks, and the Hesse pencil scan.

mod classify;
mod stability;
pub mod ternary;

pub use classify::{
    classify, lie_stabilizer_dim, table_row, Certificates, CubicClass, CubicClassLabel,
    CubicError, Stability, StabilizerDim,
};
pub use stability::{
    hesse_cubic, hesse_pencil_scan, hilbert_mumford_check, PencilScan, ScanRow, WeightLine,
};
pub use ternary::TernaryForm;
