//! Big-endian IDX image and label files, the layout MNIST ships in.

use std::fs;
use std::path::Path;

use crate::error::BenchError;

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;
pub const SIDE: usize = 28;

/// Raw image stack: `count` images of 28x28 bytes, row-major per image.
#[derive(Debug)]
pub struct IdxImages {
    pub count: usize,
    pub pixels: Vec<u8>,
}

fn show(path: &Path) -> String {
    path.display().to_string()
}

fn be_u32(buf: &[u8], at: usize, path: &Path) -> Result<u32, BenchError> {
    match buf.get(at..at + 4) {
        Some(b) => Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]])),
        None => Err(BenchError::Truncated {
            path: show(path),
            wanted: at + 4,
            got: buf.len(),
        }),
    }
}

pub fn read_images(path: &Path) -> Result<IdxImages, BenchError> {
    let buf = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    let magic = be_u32(&buf, 0, path)?;
    if magic != IMAGE_MAGIC {
        return Err(BenchError::BadMagic {
            path: show(path),
            found: magic,
            expected: IMAGE_MAGIC,
        });
    }
    let count = be_u32(&buf, 4, path)? as usize;
    let rows = be_u32(&buf, 8, path)? as usize;
    let cols = be_u32(&buf, 12, path)? as usize;
    if rows != SIDE || cols != SIDE {
        return Err(BenchError::DimensionMismatch {
            path: show(path),
            rows,
            cols,
        });
    }
    let wanted = 16 + count * SIDE * SIDE;
    if buf.len() < wanted {
        return Err(BenchError::Truncated {
            path: show(path),
            wanted,
            got: buf.len(),
        });
    }
    Ok(IdxImages {
        count,
        pixels: buf[16..wanted].to_vec(),
    })
}

pub fn read_labels(path: &Path) -> Result<Vec<u8>, BenchError> {
    let buf = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    let magic = be_u32(&buf, 0, path)?;
    if magic != LABEL_MAGIC {
        return Err(BenchError::BadMagic {
            path: show(path),
            found: magic,
            expected: LABEL_MAGIC,
        });
    }
    let count = be_u32(&buf, 4, path)? as usize;
    let wanted = 8 + count;
    if buf.len() < wanted {
        return Err(BenchError::Truncated {
            path: show(path),
            wanted,
            got: buf.len(),
        });
    }
    let labels = buf[8..wanted].to_vec();
    if let Some(&bad) = labels.iter().find(|&&l| l > 9) {
        return Err(BenchError::BadLabel {
            path: show(path),
            value: bad,
        });
    }
    Ok(labels)
}

pub fn write_images(path: &Path, count: usize, pixels: &[u8]) -> Result<(), BenchError> {
    assert_eq!(pixels.len(), count * SIDE * SIDE);
    let mut buf = Vec::with_capacity(16 + pixels.len());
    buf.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    buf.extend_from_slice(&(count as u32).to_be_bytes());
    buf.extend_from_slice(&(SIDE as u32).to_be_bytes());
    buf.extend_from_slice(&(SIDE as u32).to_be_bytes());
    buf.extend_from_slice(pixels);
    fs::write(path, buf).map_err(|e| BenchError::io(path, e))
}

pub fn write_labels(path: &Path, labels: &[u8]) -> Result<(), BenchError> {
    assert!(labels.iter().all(|&l| l <= 9));
    let mut buf = Vec::with_capacity(8 + labels.len());
    buf.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    buf.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    buf.extend_from_slice(labels);
    fs::write(path, buf).map_err(|e| BenchError::io(path, e))
}
