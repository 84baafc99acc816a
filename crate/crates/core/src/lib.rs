//! Exact bipartite entanglement measures on small multipartite states and
//! the monogamy-weight analysis built on top of them.
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, partial
//!   trace/transpose, Hermitian spectra, trace norm.
//! - [`states`]: pure states, density matrices, named and random states,
//!   tensor powers and the [`StateSpec`](states::StateSpec) input model.
//! - [`measures`]: tangle, concurrence, negativity, Wootters' formula and the
//!   numerical convex roof.
//! - [`monogamy`]: monogamy weight, region map, α thresholds, copy counts and
//!   the multipartite chain bound.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod states;

pub use error::{MonolabError, Result};
pub use linalg::{ComplexMatrix, Dims, DEFAULT_DIM_CAP};
pub use measures::{Bipartition, MeasureId, MeasureKind, StateRef};
pub use states::{DensityMatrix, PureState, SchmidtParams, StateSpec};
