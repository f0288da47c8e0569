//! Fragment containers and the single-file binary library format:
//! a JSON text header (schema + counts + provenance) followed by raw
//! little-endian f64 frame data, 13 values per frame (q 6, qd 6, t).

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::generate::Skill;
use crate::error::{Error, Result};
use crate::num::checkpoint::atomic_write;
use crate::sim::agent::N_JOINTS;

const MAGIC: &[u8; 8] = b"MOTLIB\0\0";
const VERSION: u32 = 1;

/// One 50 Hz reference frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionFrame {
    pub q_ref: [f64; N_JOINTS],
    pub qd_ref: [f64; N_JOINTS],
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionFragment {
    pub skill: Skill,
    pub frames: Vec<MotionFrame>,
}

impl MotionFragment {
    pub fn duration(&self) -> f64 {
        self.frames.last().map_or(0.0, |f| f.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator_version: u32,
    pub corruption_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentLibrary {
    pub fragments: Vec<MotionFragment>,
    pub provenance: Provenance,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema_version: u32,
    frame_hz: u32,
    joints: u32,
    provenance: Provenance,
    /// (skill name, frame count) per fragment, in file order.
    fragments: Vec<(String, u32)>,
}

impl FragmentLibrary {
    pub fn skill_count(&self, skill: Skill) -> usize {
        self.fragments.iter().filter(|f| f.skill == skill).count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.fragments.is_empty() {
            return Err(Error::InvalidArg("fragment library is empty".into()));
        }
        for skill in Skill::ALL {
            if self.skill_count(skill) == 0 {
                return Err(Error::InvalidArg(format!("library has no {skill:?} fragments")));
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        self.validate()?;
        let header = Header {
            schema_version: VERSION,
            frame_hz: 50,
            joints: N_JOINTS as u32,
            provenance: self.provenance.clone(),
            fragments: self
                .fragments
                .iter()
                .map(|f| (f.skill.name().to_string(), f.frames.len() as u32))
                .collect(),
        };
        let header_json = serde_json::to_string(&header)
            .map_err(|e| Error::Format(format!("library header: {e}")))?;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(header_json.len() as u64).to_le_bytes());
        out.extend_from_slice(header_json.as_bytes());
        for frag in &self.fragments {
            for fr in &frag.frames {
                for v in fr.q_ref.iter().chain(&fr.qd_ref).chain(std::iter::once(&fr.t)) {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(Error::Format("bad motion library magic".into()));
        }
        let hlen = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if bytes.len() < 16 + hlen {
            return Err(Error::Format("truncated library header".into()));
        }
        let header: Header = serde_json::from_slice(&bytes[16..16 + hlen])
            .map_err(|e| Error::Format(format!("library header: {e}")))?;
        if header.schema_version != VERSION {
            return Err(Error::Format(format!(
                "unsupported library version {}",
                header.schema_version
            )));
        }
        if header.joints as usize != N_JOINTS {
            return Err(Error::Format("library joint count mismatch".into()));
        }
        let mut off = 16 + hlen;
        let stride = (2 * N_JOINTS + 1) * 8;
        let mut fragments = Vec::with_capacity(header.fragments.len());
        for (skill_name, n_frames) in &header.fragments {
            let skill = Skill::from_name(skill_name)
                .ok_or_else(|| Error::Format(format!("unknown skill '{skill_name}'")))?;
            let mut frames = Vec::with_capacity(*n_frames as usize);
            for _ in 0..*n_frames {
                if off + stride > bytes.len() {
                    return Err(Error::Format("truncated library frame data".into()));
                }
                let mut vals = [0.0f64; 13];
                for (i, v) in vals.iter_mut().enumerate() {
                    *v = f64::from_le_bytes(bytes[off + i * 8..off + i * 8 + 8].try_into().unwrap());
                }
                off += stride;
                let mut q_ref = [0.0; N_JOINTS];
                let mut qd_ref = [0.0; N_JOINTS];
                q_ref.copy_from_slice(&vals[..N_JOINTS]);
                qd_ref.copy_from_slice(&vals[N_JOINTS..2 * N_JOINTS]);
                frames.push(MotionFrame { q_ref, qd_ref, t: vals[12] });
            }
            fragments.push(MotionFragment { skill, frames });
        }
        if off != bytes.len() {
            return Err(Error::Format("trailing bytes in library".into()));
        }
        Ok(Self { fragments, provenance: header.provenance })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_bytes()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .map_err(|e| Error::Artifact(format!("cannot open {}: {e}", path.display())))?
            .read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Deterministic train/validation split: every `stride`-th fragment
    /// (per file order) goes to validation.
    pub fn split(&self, stride: usize) -> (FragmentLibrary, FragmentLibrary) {
        let mut train = Vec::new();
        let mut val = Vec::new();
        for (i, f) in self.fragments.iter().enumerate() {
            if i % stride == stride - 1 {
                val.push(f.clone());
            } else {
                train.push(f.clone());
            }
        }
        (
            FragmentLibrary { fragments: train, provenance: self.provenance.clone() },
            FragmentLibrary { fragments: val, provenance: self.provenance.clone() },
        )
    }
}
