//! Reference sampling for tracker episodes: uniform over fragments, then
//! uniform over start frames that leave at least MIN_HORIZON frames.

use rand::Rng;

use super::library::FragmentLibrary;
use super::MIN_HORIZON;
use crate::num::rng::Rng64;

/// Returns (fragment index, start frame index).
pub fn sample_reference(lib: &FragmentLibrary, rng: &mut Rng64) -> (usize, usize) {
    debug_assert!(!lib.fragments.is_empty());
    let idx = rng.random_range(0..lib.fragments.len());
    let len = lib.fragments[idx].frames.len();
    let max_start = len.saturating_sub(MIN_HORIZON + 1);
    let start = if max_start == 0 { 0 } else { rng.random_range(0..=max_start) };
    (idx, start)
}
