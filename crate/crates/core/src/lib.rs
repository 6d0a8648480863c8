//! Exact torus localization on Hilbert schemes of points of toric surfaces,
//! with the eta-product identities their generating series satisfy.

pub mod error;
pub mod exact;
pub mod geometry;
pub mod identities;
pub mod localize;
pub mod partition;
pub mod toric;
pub mod universal;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{xi_pow, BigRational, LinForm, QSeries, RatFunc};
pub use localize::{integrate, series, AssignmentKind, LimitOptions};
pub use partition::Partition;
pub use toric::{EqLineBundle, SurfaceInvariants, ToricSurface};
