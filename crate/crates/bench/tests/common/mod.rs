//! Shared corpus resolution for the integration suites.
//!
//! Real MNIST is preferred when present; otherwise a deterministic
//! synthetic corpus in the same IDX format is generated once under the
//! target tmpdir and reused. Creation goes through a scratch directory
//! plus an atomic rename so concurrent test binaries cannot observe a
//! half-written corpus.

use std::path::{Path, PathBuf};

use genloss_bench::data::{TEST_IMAGES, TEST_LABELS, TRAIN_IMAGES, TRAIN_LABELS};
use genloss_bench::write_synthetic_corpus;

fn has_all_idx_files(dir: &Path) -> bool {
    [TRAIN_IMAGES, TRAIN_LABELS, TEST_IMAGES, TEST_LABELS]
        .iter()
        .all(|name| dir.join(name).is_file())
}

/// Directory holding a corpus with at least `train_n` training and
/// `test_n` test examples.
pub fn corpus_dir(train_n: usize, test_n: usize, seed: u64) -> PathBuf {
    if let Ok(dir) = std::env::var("GENLOSS_MNIST_DIR") {
        let dir = PathBuf::from(dir);
        if has_all_idx_files(&dir) {
            return dir;
        }
    }
    for candidate in ["data", "../../data"] {
        let dir = PathBuf::from(candidate);
        if has_all_idx_files(&dir) {
            return dir;
        }
    }

    let root = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let dir = root.join(format!("synth-{train_n}-{test_n}-{seed}"));
    if has_all_idx_files(&dir) {
        return dir;
    }
    let scratch = root.join(format!(
        "synth-{train_n}-{test_n}-{seed}-pid{}",
        std::process::id()
    ));
    write_synthetic_corpus(&scratch, train_n, test_n, seed).expect("synthetic corpus");
    match std::fs::rename(&scratch, &dir) {
        Ok(()) => {}
        Err(_) if has_all_idx_files(&dir) => {
            let _ = std::fs::remove_dir_all(&scratch);
        }
        Err(e) => panic!("installing synthetic corpus: {e}"),
    }
    dir
}
