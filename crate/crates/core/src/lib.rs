//! Exact rational computations on the tree amplituhedron: twistor
//! coordinates, winding numbers for even m, crossing numbers for odd m, and
//! the identities and closed-form counts they satisfy.

pub mod combinatorics;
pub mod crossing;
pub mod error;
pub mod io;
pub mod matrix;
pub mod membership;
pub mod positivity;
pub mod scalar;
pub mod twistor;
pub mod verify;
pub mod winding;

pub use combinatorics::IndexList;
pub use crossing::{crossing_formula, crossing_number, Cell, CrossingResult};
pub use error::{Error, Result};
pub use io::{ContextJson, MatrixJson};
pub use matrix::Matrix;
pub use membership::{membership_m2, MembershipVerdict, Verdict};
pub use positivity::{GrassmannC, PositiveZ, PositivityClass, YPoint, DEFAULT_MAX_N};
pub use scalar::{Scalar, Sign};
pub use twistor::TwistorContext;
pub use verify::{parse_grid, verify_theorems, GridCell, VerificationReport, VerifyOptions};
pub use winding::{winding_formula, winding_number, RayDirection, WindingResult};
