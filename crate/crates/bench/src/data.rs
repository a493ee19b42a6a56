//! Datasets as scaled tensors, plus deterministic stratified subsampling.

use std::path::Path;

use genloss_core::XorShift64Star;
use genloss_diff::Tensor;

use crate::error::BenchError;
use crate::idx;

pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

pub const CLASSES: usize = 10;

/// Images as a `[N x 784]` tensor with pixels scaled into [0,1], labels in
/// 0..=9.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub images: Tensor,
    pub labels: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn from_raw(pixels: &[u8], labels: &[u8]) -> Result<Self, BenchError> {
        let n = labels.len();
        if pixels.len() != n * idx::SIDE * idx::SIDE {
            return Err(BenchError::CountMismatch {
                images: pixels.len() / (idx::SIDE * idx::SIDE),
                labels: n,
            });
        }
        let data = pixels.iter().map(|&p| p as f64 / 255.0).collect();
        Ok(Dataset {
            images: Tensor::from_vec(&[n, idx::SIDE * idx::SIDE], data)?,
            labels: labels.iter().map(|&l| l as usize).collect(),
        })
    }
}

pub fn load_pair(images: &Path, labels: &Path) -> Result<Dataset, BenchError> {
    let imgs = idx::read_images(images)?;
    let labs = idx::read_labels(labels)?;
    if imgs.count != labs.len() {
        return Err(BenchError::CountMismatch {
            images: imgs.count,
            labels: labs.len(),
        });
    }
    Dataset::from_raw(&imgs.pixels, &labs)
}

/// Loads the four standard IDX files from a directory.
pub fn load_mnist_dir(dir: &Path) -> Result<(Dataset, Dataset), BenchError> {
    let train = load_pair(&dir.join(TRAIN_IMAGES), &dir.join(TRAIN_LABELS))?;
    let test = load_pair(&dir.join(TEST_IMAGES), &dir.join(TEST_LABELS))?;
    Ok((train, test))
}

/// Proportional per-class allocation of `n` slots by largest remainder,
/// so a balanced source yields equal counts and `n = len` keeps everything.
fn class_counts(sizes: &[usize], n: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut counts: Vec<usize> = sizes.iter().map(|&s| n * s / total).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse((n * sizes[c]) % total), c));
    for &c in order.iter().take(n - assigned) {
        counts[c] += 1;
    }
    counts
}

/// Class-stratified subset of `n` items, deterministic in `seed`. Per-class
/// picks and the final order are both seeded shuffles.
pub fn subsample(ds: &Dataset, n: usize, seed: u64) -> Result<Dataset, BenchError> {
    if n > ds.len() {
        return Err(BenchError::SubsampleTooLarge {
            want: n,
            have: ds.len(),
        });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); CLASSES];
    for (i, &l) in ds.labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let sizes: Vec<usize> = by_class.iter().map(Vec::len).collect();
    let counts = class_counts(&sizes, n);

    let mut rng = XorShift64Star::new(seed);
    let mut picked = Vec::with_capacity(n);
    for (members, &count) in by_class.iter_mut().zip(&counts) {
        rng.shuffle(members);
        picked.extend_from_slice(&members[..count]);
    }
    rng.shuffle(&mut picked);

    let cols = ds.images.cols();
    let mut data = Vec::with_capacity(n * cols);
    let mut labels = Vec::with_capacity(n);
    for &i in &picked {
        data.extend_from_slice(ds.images.row(i));
        labels.push(ds.labels[i]);
    }
    Ok(Dataset {
        images: Tensor::from_vec(&[n, cols], data)?,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(n: usize) -> Dataset {
        let labels: Vec<u8> = (0..n).map(|i| (i % 10) as u8).collect();
        let pixels: Vec<u8> = (0..n * 784).map(|i| (i % 256) as u8).collect();
        Dataset::from_raw(&pixels, &labels).unwrap()
    }

    #[test]
    fn byte_255_scales_to_one() {
        let ds = Dataset::from_raw(&[255; 784], &[4]).unwrap();
        assert_eq!(ds.images.data()[0], 1.0);
        assert_eq!(ds.labels, vec![4]);
    }

    #[test]
    fn balanced_thousand_gives_exactly_one_hundred_per_class() {
        let ds = balanced(4000);
        let sub = subsample(&ds, 1000, 7).unwrap();
        let mut per_class = [0usize; 10];
        for &l in &sub.labels {
            per_class[l] += 1;
        }
        assert_eq!(per_class, [100; 10]);
    }

    #[test]
    fn full_size_subsample_keeps_the_multiset() {
        let ds = balanced(200);
        let sub = subsample(&ds, 200, 3).unwrap();
        let mut a: Vec<usize> = sub.labels.clone();
        let mut b: Vec<usize> = ds.labels.clone();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        // Same rows, possibly reordered: compare sorted row checksums.
        let sum = |t: &Tensor| {
            let mut sums: Vec<u64> = (0..t.rows())
                .map(|i| t.row(i).iter().map(|v| v.to_bits()).fold(0u64, u64::wrapping_add))
                .collect();
            sums.sort_unstable();
            sums
        };
        assert_eq!(sum(&sub.images), sum(&ds.images));
    }

    #[test]
    fn same_seed_same_subset_different_seed_different_order() {
        let ds = balanced(500);
        let a = subsample(&ds, 120, 9).unwrap();
        let b = subsample(&ds, 120, 9).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.images.data(), b.images.data());
        let c = subsample(&ds, 120, 10).unwrap();
        assert_ne!(a.labels, c.labels);
    }

    #[test]
    fn oversampling_is_rejected() {
        let ds = balanced(50);
        assert!(matches!(
            subsample(&ds, 51, 0).unwrap_err(),
            BenchError::SubsampleTooLarge { want: 51, have: 50 }
        ));
    }

    #[test]
    fn unbalanced_sources_allocate_proportionally() {
        // 30 of class 0, 10 of class 1: asking for 20 keeps the 3:1 ratio.
        let labels: Vec<u8> = (0..40).map(|i| if i < 30 { 0 } else { 1 }).collect();
        let pixels = vec![0u8; 40 * 784];
        let ds = Dataset::from_raw(&pixels, &labels).unwrap();
        let sub = subsample(&ds, 20, 1).unwrap();
        let zeros = sub.labels.iter().filter(|&&l| l == 0).count();
        assert_eq!(zeros, 15);
        assert_eq!(sub.len() - zeros, 5);
    }
}
