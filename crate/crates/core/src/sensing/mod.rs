//! Observation corruption (uniform noise, frame dropouts, latency) and the
//! four-frame sliding-window ball-velocity estimator, both at the 50 Hz
//! control rate.

pub mod noise;
pub mod window;

pub use noise::{FieldClass, NoiseConfig, SensorChannel};
pub use window::{BallObsWindow, VelocityEstimate};
