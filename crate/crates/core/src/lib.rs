//! Desk-scale tennis-return stack: a 6-DoF simulated agent learns to return
//! launched balls by composing motion-fragment skills through a correctable
//! latent action space, with a barrier keeping exploration close to a
//! learned state-conditioned prior.
//!
//! Pipeline stages (each a CLI subcommand in the companion binary):
//! fragment generation → motion tracking → latent distillation → task
//! policy training → evaluation / ablations / appendix analyses.

pub mod error;
pub mod motion;
pub mod num;
pub mod rl;
pub mod sensing;
pub mod tracker;
pub mod sim;

pub use error::{Error, Result};
