//! Fixtures shared by the criterion benches.

use amplituhedron::verify::{sample_case, GridCell};
use amplituhedron::{Result, TwistorContext};

/// The same deterministic sample the verify harness draws for (n, k, m).
pub fn context(n: usize, k: usize, m: usize) -> Result<TwistorContext> {
    Ok(sample_case(GridCell { n, k, m }, 0)?.ctx)
}
