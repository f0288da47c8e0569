//! Versioned binary checkpoint container.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic      8 bytes   "RSIMCKPT"
//! version    u32       currently 1
//! kind       u32 len + utf8          stage tag, e.g. "tracker"
//! meta       u64 len + utf8 JSON     stage metadata (sorted keys)
//! n_sections u32
//! section:
//!   name     u32 len + utf8
//!   tag      u8        0 = net bundle, 1 = f64 vector
//!   net bundle:
//!     n_widths u32, widths u64 × n_widths
//!     per layer: rows u32, cols u32, weights f64 × rows·cols (row-major),
//!                bias_len u32, bias f64 × bias_len
//!     has_opt  u8
//!     opt (if 1): step u64, lr f64, beta1 f64, beta2 f64, eps f64,
//!                 dim u64, m f64 × dim, v f64 × dim
//!   vector:
//!     len u64, values f64 × len
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::adam::{Adam, AdamConfig};
use super::linalg::Matrix;
use super::net::{Dense, NetParams, NetSpec};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"RSIMCKPT";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct NetBundle {
    pub params: NetParams,
    pub opt: Option<Adam>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Section {
    Net(NetBundle),
    Vector(Vec<f64>),
}

/// A named bag of nets and vectors plus JSON metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub kind: String,
    pub meta: serde_json::Value,
    pub sections: Vec<(String, Section)>,
}

impl Checkpoint {
    pub fn new(kind: &str, meta: serde_json::Value) -> Self {
        Self { kind: kind.to_string(), meta, sections: Vec::new() }
    }

    pub fn push_net(&mut self, name: &str, params: NetParams, opt: Option<Adam>) {
        self.sections.push((name.to_string(), Section::Net(NetBundle { params, opt })));
    }

    pub fn push_vector(&mut self, name: &str, v: Vec<f64>) {
        self.sections.push((name.to_string(), Section::Vector(v)));
    }

    pub fn net(&self, name: &str) -> Result<&NetBundle> {
        self.sections
            .iter()
            .find_map(|(n, s)| match s {
                Section::Net(b) if n == name => Some(b),
                _ => None,
            })
            .ok_or_else(|| Error::Artifact(format!("checkpoint missing net section '{name}'")))
    }

    pub fn vector(&self, name: &str) -> Result<&Vec<f64>> {
        self.sections
            .iter()
            .find_map(|(n, s)| match s {
                Section::Vector(v) if n == name => Some(v),
                _ => None,
            })
            .ok_or_else(|| Error::Artifact(format!("checkpoint missing vector section '{name}'")))
    }

    pub fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Artifact(format!(
                "checkpoint kind '{}' where '{kind}' is required",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, VERSION);
        put_str32(&mut out, &self.kind);
        let meta = serde_json::to_string(&self.meta).expect("meta serializes");
        put_u64(&mut out, meta.len() as u64);
        out.extend_from_slice(meta.as_bytes());
        put_u32(&mut out, self.sections.len() as u32);
        for (name, section) in &self.sections {
            put_str32(&mut out, name);
            match section {
                Section::Net(b) => {
                    out.push(0);
                    write_net(&mut out, b);
                }
                Section::Vector(v) => {
                    out.push(1);
                    put_u64(&mut out, v.len() as u64);
                    for x in v {
                        out.extend_from_slice(&x.to_le_bytes());
                    }
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Cursor { buf: bytes, pos: 0 };
        let magic = r.take(8)?;
        if magic != MAGIC {
            return Err(Error::Format("bad checkpoint magic".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported checkpoint version {version}")));
        }
        let kind = r.str32()?;
        let meta_len = r.u64()? as usize;
        let meta_bytes = r.take(meta_len)?;
        let meta: serde_json::Value = serde_json::from_slice(meta_bytes)
            .map_err(|e| Error::Format(format!("checkpoint meta: {e}")))?;
        let n = r.u32()? as usize;
        let mut sections = Vec::with_capacity(n);
        for _ in 0..n {
            let name = r.str32()?;
            let tag = r.u8()?;
            let section = match tag {
                0 => Section::Net(read_net(&mut r)?),
                1 => {
                    let len = r.u64()? as usize;
                    Section::Vector(r.f64s(len)?)
                }
                other => return Err(Error::Format(format!("unknown section tag {other}"))),
            };
            sections.push((name, section));
        }
        if r.pos != bytes.len() {
            return Err(Error::Format("trailing bytes in checkpoint".into()));
        }
        Ok(Self { kind, meta, sections })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .map_err(|e| Error::Artifact(format!("cannot open {}: {e}", path.display())))?
            .read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

/// Write to a temp file in the same directory, then rename into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_net(out: &mut Vec<u8>, b: &NetBundle) {
    let spec = b.params.spec();
    put_u32(out, spec.widths.len() as u32);
    for &w in &spec.widths {
        put_u64(out, w as u64);
    }
    for layer in &b.params.layers {
        put_u32(out, layer.w.rows as u32);
        put_u32(out, layer.w.cols as u32);
        for x in &layer.w.data {
            out.extend_from_slice(&x.to_le_bytes());
        }
        put_u32(out, layer.b.len() as u32);
        for x in &layer.b {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    match &b.opt {
        None => out.push(0),
        Some(adam) => {
            out.push(1);
            put_u64(out, adam.step);
            for x in [adam.cfg.lr, adam.cfg.beta1, adam.cfg.beta2, adam.cfg.eps] {
                out.extend_from_slice(&x.to_le_bytes());
            }
            put_u64(out, adam.dim() as u64);
            for x in adam.m.iter().chain(&adam.v) {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
    }
}

fn read_net(r: &mut Cursor) -> Result<NetBundle> {
    let n_widths = r.u32()? as usize;
    let mut widths = Vec::with_capacity(n_widths);
    for _ in 0..n_widths {
        widths.push(r.u64()? as usize);
    }
    let spec = NetSpec::new(widths).map_err(|e| Error::Format(format!("net spec: {e}")))?;
    let mut layers = Vec::with_capacity(spec.widths.len() - 1);
    for w in spec.widths.windows(2) {
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        if rows != w[1] || cols != w[0] {
            return Err(Error::Format("layer shape inconsistent with spec".into()));
        }
        let data = r.f64s(rows * cols)?;
        let b_len = r.u32()? as usize;
        if b_len != rows {
            return Err(Error::Format("bias length inconsistent".into()));
        }
        let b = r.f64s(b_len)?;
        layers.push(Dense { w: Matrix { rows, cols, data }, b });
    }
    let params = NetParams { layers };
    let opt = match r.u8()? {
        0 => None,
        1 => {
            let step = r.u64()?;
            let lr = r.f64()?;
            let beta1 = r.f64()?;
            let beta2 = r.f64()?;
            let eps = r.f64()?;
            let dim = r.u64()? as usize;
            if dim != params.param_count() {
                return Err(Error::Format("optimizer dim inconsistent with params".into()));
            }
            let m = r.f64s(dim)?;
            let v = r.f64s(dim)?;
            Some(Adam { cfg: AdamConfig { lr, beta1, beta2, eps }, step, m, v })
        }
        other => return Err(Error::Format(format!("bad has_opt flag {other}"))),
    };
    Ok(NetBundle { params, opt })
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format("truncated checkpoint".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(n * 8)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
    fn str32(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let raw = self.take(len)?;
        String::from_utf8(raw.to_vec()).map_err(|_| Error::Format("bad utf8 string".into()))
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str32(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::derive_rng;
    use serde_json::json;

    fn sample_checkpoint() -> Checkpoint {
        let spec = NetSpec::new(vec![4, 6, 2]).unwrap();
        let mut rng = derive_rng(5, &[0]);
        let params = NetParams::init(&spec, 0.01, &mut rng);
        let mut adam = Adam::new(spec.param_count(), AdamConfig::default());
        let mut flat = Vec::new();
        params.flatten_into(&mut flat);
        let grads = vec![0.01; flat.len()];
        adam.step(&mut flat, &grads).unwrap();
        let mut ck = Checkpoint::new("tracker", json!({"action_dim": 5, "obs_dim": 30}));
        ck.push_net("policy", params, Some(adam));
        ck.push_vector("log_std", vec![-0.5, -0.5, -0.5, -0.5, -0.5]);
        ck
    }

    #[test]
    fn byte_roundtrip_is_exact() {
        let ck = sample_checkpoint();
        let bytes = ck.to_bytes();
        let back = Checkpoint::from_bytes(&bytes).unwrap();
        assert_eq!(back, ck);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corrupt_magic_rejected() {
        let mut bytes = sample_checkpoint().to_bytes();
        bytes[0] ^= 0xff;
        assert!(matches!(Checkpoint::from_bytes(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn truncation_rejected() {
        let bytes = sample_checkpoint().to_bytes();
        let cut = &bytes[..bytes.len() - 7];
        assert!(Checkpoint::from_bytes(cut).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = std::env::temp_dir().join(format!("ckpt-test-{}", std::process::id()));
        let path = dir.join("a.ckpt");
        let ck = sample_checkpoint();
        ck.save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back, ck);
        std::fs::remove_dir_all(&dir).ok();
    }
}
