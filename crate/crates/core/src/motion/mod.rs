//! Synthetic motion-fragment library: scripted primitive skills (strokes,
//! shuffles, sprint, ready pose) sampled at 50 Hz, with the wrist channel
//! deliberately corrupted. Fragments carry motor style only — no ball
//! information and no hit timing.

pub mod corrupt;
pub mod generate;
pub mod library;
pub mod sample;

pub use corrupt::{corrupt_wrist, WristCorruption};
pub use generate::{generate_fragment, MotionConfig, Skill, Style};
pub use library::{FragmentLibrary, MotionFragment, MotionFrame, Provenance};
pub use sample::sample_reference;

/// Fragment frame rate.
pub const FRAME_DT: f64 = 0.02;
/// Minimum remaining horizon when sampling a tracking start frame.
pub const MIN_HORIZON: usize = 25;

use crate::num::rng::{derive_rng, stream};

const GENERATOR_VERSION: u32 = 1;

/// Generate the full corrupted library for a config and seed.
pub fn build_library(cfg: &MotionConfig, seed: u64) -> crate::Result<FragmentLibrary> {
    let mut gen_rng = derive_rng(seed, &[stream::DATA, 0]);
    let mut corrupt_rng = derive_rng(seed, &[stream::DATA, 1]);
    let mut fragments = Vec::with_capacity(Skill::ALL.len() * cfg.fragments_per_skill);
    for skill in Skill::ALL {
        for _ in 0..cfg.fragments_per_skill {
            let style = Style::sample(cfg, &mut gen_rng);
            let clean =
                generate::generate_fragment_anchored(skill, &style, cfg.anchor, &mut gen_rng)?;
            fragments.push(corrupt_wrist(&clean, &cfg.wrist, &mut corrupt_rng));
        }
    }
    let lib = FragmentLibrary {
        fragments,
        provenance: Provenance { generator_version: GENERATOR_VERSION, corruption_seed: seed },
    };
    lib.validate()?;
    Ok(lib)
}
