//! Reverse-mode differentiation and training for compiled fuzzy losses.
//!
//! The crate owns the numeric side of the pipeline: a row-major [`Tensor`],
//! a one-hidden-layer ReLU/softmax [`Network`], exact adjoints over the
//! loss-expression DAG, vanilla SGD, and a deterministic mini-batch
//! training loop. Everything is seeded and single-threaded per run, so a
//! fixed configuration reproduces its trajectory bit for bit.

mod error;
mod grad;
mod network;
mod optim;
mod tensor;
mod train;

pub use error::DiffError;
pub use grad::{backward, expr_input_gradients, gather_slot_inputs, loss_forward, Gradients};
pub use network::{ForwardCache, Network, MNIST_DIMS};
pub use optim::{sgd_step, OptimState};
pub use tensor::Tensor;
pub use train::{
    accuracy, minmax_supervision_expr, run_training, supervision_expr, EpochStat, TrainConfig,
};
