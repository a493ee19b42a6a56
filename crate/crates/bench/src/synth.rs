//! Deterministic synthetic digit corpus in the same IDX layout as MNIST.
//!
//! Each class is a pair of strokes whose positions encode the class, with
//! per-sample jitter, intensity variation and speckle noise so the task is
//! learnable but not instant. Useful when the real corpus is not on disk;
//! identical seeds produce identical files.

use std::path::Path;

use genloss_core::XorShift64Star;

use crate::data::{self, Dataset};
use crate::error::BenchError;
use crate::idx;

const SIDE: usize = idx::SIDE;

fn paint(pixels: &mut [u8], label: usize, rng: &mut XorShift64Star) {
    let dx = rng.next_below(5) as isize - 2;
    let dy = rng.next_below(5) as isize - 2;
    let ink = 160 + rng.next_below(96) as u8;

    let mut put = |r: isize, c: isize| {
        if (0..SIDE as isize).contains(&r) && (0..SIDE as isize).contains(&c) {
            pixels[r as usize * SIDE + c as usize] = ink;
        }
    };
    // Vertical stroke column encodes label mod 5, horizontal stroke row
    // encodes label / 5.
    let col = 4 + (label % 5) as isize * 5 + dx;
    for r in 6..22 {
        put(r + dy, col);
        put(r + dy, col + 1);
    }
    let row = if label < 5 { 7 } else { 19 } + dy;
    for c in 6..22 {
        put(row, c + dx);
        put(row + 1, c + dx);
    }
    // Speckle noise over the whole canvas.
    for p in pixels.iter_mut() {
        if rng.next_below(16) == 0 {
            *p = p.saturating_add(rng.next_below(64) as u8);
        }
    }
}

/// `n` images with labels cycling 0..=9, so classes stay balanced.
pub fn synth_raw(n: usize, rng: &mut XorShift64Star) -> (Vec<u8>, Vec<u8>) {
    let mut pixels = vec![0u8; n * SIDE * SIDE];
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 10;
        labels.push(label as u8);
        paint(&mut pixels[i * SIDE * SIDE..(i + 1) * SIDE * SIDE], label, rng);
    }
    (pixels, labels)
}

/// In-memory synthetic dataset, already scaled like the IDX loader output.
pub fn synthetic_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = XorShift64Star::new(seed);
    let (pixels, labels) = synth_raw(n, &mut rng);
    Dataset::from_raw(&pixels, &labels).expect("generated counts always agree")
}

/// Writes the four standard IDX files into `dir`. Train and test samples
/// come from one seeded stream, so the two sets never share a sample.
pub fn write_synthetic_corpus(
    dir: &Path,
    train_n: usize,
    test_n: usize,
    seed: u64,
) -> Result<(), BenchError> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut rng = XorShift64Star::new(seed);
    let (train_px, train_lb) = synth_raw(train_n, &mut rng);
    let (test_px, test_lb) = synth_raw(test_n, &mut rng);
    idx::write_images(&dir.join(data::TRAIN_IMAGES), train_n, &train_px)?;
    idx::write_labels(&dir.join(data::TRAIN_LABELS), &train_lb)?;
    idx::write_images(&dir.join(data::TEST_IMAGES), test_n, &test_px)?;
    idx::write_labels(&dir.join(data::TEST_LABELS), &test_lb)?;
    Ok(())
}
