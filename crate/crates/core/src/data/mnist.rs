//! IDX ingestion and the overlapping two-digit composition.

use std::fs;
use std::path::Path;

use crate::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;
pub const CANVAS_SIDE: usize = 36;
const OVERLAP_OFFSET: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct MnistSet {
    pub rows: usize,
    pub cols: usize,
    pub images: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
}

fn be_u32(bytes: &[u8], at: usize) -> Result<usize> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes(b.try_into().expect("4 bytes")) as usize)
        .ok_or_else(|| Error::format("IDX header truncated"))
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<(usize, usize, Vec<Vec<u8>>)> {
    let magic = be_u32(bytes, 0)? as u32;
    if magic != IMAGES_MAGIC {
        return Err(Error::format(format!("IDX image magic {magic:#010x}, expected {IMAGES_MAGIC:#010x}")));
    }
    let (n, rows, cols) = (be_u32(bytes, 4)?, be_u32(bytes, 8)?, be_u32(bytes, 12)?);
    let size = rows * cols;
    let body = &bytes[16..];
    if body.len() != n * size {
        return Err(Error::format(format!(
            "IDX image body has {} bytes, header promises {n} x {rows} x {cols}",
            body.len()
        )));
    }
    Ok((rows, cols, body.chunks_exact(size.max(1)).map(<[u8]>::to_vec).collect()))
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = be_u32(bytes, 0)? as u32;
    if magic != LABELS_MAGIC {
        return Err(Error::format(format!("IDX label magic {magic:#010x}, expected {LABELS_MAGIC:#010x}")));
    }
    let n = be_u32(bytes, 4)?;
    let body = &bytes[8..];
    if body.len() != n {
        return Err(Error::format(format!("IDX label body has {} bytes, header promises {n}", body.len())));
    }
    Ok(body.to_vec())
}

pub fn load_mnist_idx(images_path: &Path, labels_path: &Path) -> Result<MnistSet> {
    let images = fs::read(images_path).map_err(|e| Error::io(images_path, e))?;
    let labels = fs::read(labels_path).map_err(|e| Error::io(labels_path, e))?;
    let (rows, cols, images) = parse_idx_images(&images)?;
    let labels = parse_idx_labels(&labels)?;
    if images.len() != labels.len() {
        return Err(Error::format(format!("{} images but {} labels", images.len(), labels.len())));
    }
    Ok(MnistSet { rows, cols, images, labels })
}

/// Place `a` top-left and `b` at offset (8, 8) on a 36x36 canvas, combine
/// by pixelwise max, and scale to `[0, 1]`. Returns the canvas and the
/// label pair.
pub fn compose_multi_overlap(a: (&[u8], u8), b: (&[u8], u8)) -> Result<(Vec<f64>, (u8, u8))> {
    let side = CANVAS_SIDE - OVERLAP_OFFSET;
    for img in [a.0, b.0] {
        if img.len() != side * side {
            return Err(Error::format(format!("expected a {side}x{side} image, got {} pixels", img.len())));
        }
    }
    let mut canvas = vec![0u8; CANVAS_SIDE * CANVAS_SIDE];
    for (img, offset) in [(a.0, 0), (b.0, OVERLAP_OFFSET)] {
        for r in 0..side {
            for c in 0..side {
                let dst = &mut canvas[(r + offset) * CANVAS_SIDE + c + offset];
                *dst = (*dst).max(img[r * side + c]);
            }
        }
    }
    Ok((canvas.into_iter().map(|p| f64::from(p) / 255.0).collect(), (a.1, b.1)))
}
