//! Ground-truth signals, sampling distributions, link functions and
//! measurement generation for the single index model `yᵢ = f(⟨aᵢ, x*⟩)`.

mod distribution;
mod link;
mod measurement;
mod signal;

pub use distribution::{sample_vectors, DiscreteSymmetric, Distribution};
pub use link::{CustomLink, LinkFunction, DEFAULT_ONE_BIT_THRESHOLD};
pub use measurement::{generate, measure, MeasurementMeta, MeasurementSet};
pub use signal::{admissible, make_signal, Sign, Signal, SignalKind, SignalSpec};
