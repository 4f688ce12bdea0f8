//! Binary checkpoint: `"SEPN"`, `u32` version, spec header, then each
//! parameter array as a `u64` length followed by little-endian `f64`s.

use std::fs;
use std::path::Path;

use super::{NetParams, NetSpec};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"SEPN";
pub const CHECKPOINT_VERSION: u32 = 1;

fn put_u32(buf: &mut Vec<u8>, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::format(format!("{v} does not fit in u32")))?;
    buf.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

fn put_list(buf: &mut Vec<u8>, items: &[usize]) -> Result<()> {
    put_u32(buf, items.len())?;
    items.iter().try_for_each(|&v| put_u32(buf, v))
}

pub fn write_checkpoint(params: &NetParams) -> Result<Vec<u8>> {
    let spec = params.spec();
    let mut buf = Vec::with_capacity(64 + 8 * params.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    put_u32(&mut buf, spec.input_dim)?;
    put_list(&mut buf, &spec.hidden_dims)?;
    put_list(&mut buf, &spec.head_dims)?;
    put_u32(&mut buf, spec.cond_dim)?;
    put_list(&mut buf, &spec.cond_sites)?;
    let arrays: Vec<&[f64]> = params.arrays().collect();
    put_u32(&mut buf, arrays.len())?;
    for array in arrays {
        buf.extend_from_slice(&(array.len() as u64).to_le_bytes());
        for v in array {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(buf)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            Error::format(format!("checkpoint truncated at byte {} (wanted {n} more)", self.pos))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn list(&mut self) -> Result<Vec<usize>> {
        let n = self.u32()?;
        if n > self.bytes.len() {
            return Err(Error::format(format!("implausible list length {n}")));
        }
        (0..n).map(|_| self.u32()).collect()
    }
}

pub fn read_checkpoint(bytes: &[u8]) -> Result<NetParams> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::format("not a checkpoint: bad magic (expected \"SEPN\")"));
    }
    let version = r.u32()? as u32;
    if version != CHECKPOINT_VERSION {
        return Err(Error::format(format!(
            "unsupported checkpoint version {version} (this build reads version {CHECKPOINT_VERSION})"
        )));
    }
    let spec = NetSpec {
        input_dim: r.u32()?,
        hidden_dims: r.list()?,
        head_dims: r.list()?,
        cond_dim: r.u32()?,
        cond_sites: r.list()?,
    };
    spec.validate().map_err(|e| Error::format(format!("invalid spec header: {e}")))?;
    let mut params = NetParams::zeros(&spec)?;
    let slots = params.layout.arrays.clone();
    let count = r.u32()?;
    if count != slots.len() {
        return Err(Error::format(format!(
            "checkpoint has {count} arrays, spec implies {}",
            slots.len()
        )));
    }
    for (i, &(offset, len)) in slots.iter().enumerate() {
        let stored = r.u64()?;
        if stored != len as u64 {
            return Err(Error::format(format!("array {i} has length {stored}, spec implies {len}")));
        }
        let raw = r.take(8 * len)?;
        for (dst, chunk) in params.values_mut()[offset..offset + len].iter_mut().zip(raw.chunks_exact(8)) {
            *dst = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::format(format!("{} trailing bytes after checkpoint", bytes.len() - r.pos)));
    }
    Ok(params)
}

pub fn checkpoint_save(params: &NetParams, path: &Path) -> Result<()> {
    let bytes = write_checkpoint(params)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn checkpoint_load(path: &Path) -> Result<NetParams> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    read_checkpoint(&bytes)
}
