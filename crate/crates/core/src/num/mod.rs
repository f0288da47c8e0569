//! Deterministic numerics: seeded RNG streams, dense tanh networks with
//! analytic gradients, diagonal-Gaussian operations, Adam, and the
//! checkpoint container shared by every training stage.

pub mod adam;
pub mod checkpoint;
pub mod gauss;
pub mod linalg;
pub mod net;
pub mod rng;

pub use adam::{Adam, AdamConfig};
pub use checkpoint::{Checkpoint, NetBundle, Section};
pub use gauss::DiagGaussian;
pub use linalg::Matrix;
pub use net::{NetParams, NetSpec, Trace};
pub use rng::{derive_rng, Rng64};
