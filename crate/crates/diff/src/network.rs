//! One-hidden-layer ReLU network with a softmax head.

use genloss_core::XorShift64Star;

use crate::error::DiffError;
use crate::tensor::Tensor;

/// Input width, hidden units and classes of the benchmark classifier.
pub const MNIST_DIMS: (usize, usize, usize) = (784, 50, 10);

/// Dense `in -> hidden (ReLU) -> out (softmax)` classifier. The j-th softmax
/// output plays the role of the j-th task predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub(crate) w1: Tensor,
    pub(crate) b1: Tensor,
    pub(crate) w2: Tensor,
    pub(crate) b2: Tensor,
}

/// Per-batch activations retained for the backward pass.
pub struct ForwardCache {
    /// Pre-activation of the hidden layer, `[B x hidden]`.
    pub hidden_pre: Tensor,
    /// ReLU output, `[B x hidden]`.
    pub hidden: Tensor,
    /// Softmax probabilities, `[B x out]`.
    pub probs: Tensor,
}

impl Network {
    /// Fan-balanced uniform init: every weight drawn from
    /// `[-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))]` by the
    /// xorshift64* generator seeded once; biases zero. Draw order is W1
    /// row-major, then W2 row-major, so a seed pins every parameter.
    pub fn init_with_dims(in_dim: usize, hidden: usize, out: usize, seed: u64) -> Self {
        let mut rng = XorShift64Star::new(seed);
        let mut draw = |rows: usize, cols: usize| {
            let limit = (6.0 / (rows + cols) as f64).sqrt();
            let data = (0..rows * cols)
                .map(|_| rng.uniform(-limit, limit))
                .collect();
            Tensor::from_vec(&[rows, cols], data).unwrap()
        };
        let w1 = draw(in_dim, hidden);
        let w2 = draw(hidden, out);
        Network {
            w1,
            b1: Tensor::zeros(&[hidden]),
            w2,
            b2: Tensor::zeros(&[out]),
        }
    }

    /// The benchmark classifier shape.
    pub fn init(seed: u64) -> Self {
        let (i, h, o) = MNIST_DIMS;
        Self::init_with_dims(i, h, o, seed)
    }

    pub fn w1(&self) -> &Tensor {
        &self.w1
    }

    pub fn b1(&self) -> &Tensor {
        &self.b1
    }

    pub fn w2(&self) -> &Tensor {
        &self.w2
    }

    pub fn b2(&self) -> &Tensor {
        &self.b2
    }

    /// Total parameter count across all four tensors.
    pub fn param_count(&self) -> usize {
        self.w1.data().len()
            + self.b1.data().len()
            + self.w2.data().len()
            + self.b2.data().len()
    }

    /// Flat parameter view in W1, b1, W2, b2 order, for finite-difference
    /// probing and other whole-vector access.
    pub fn param(&self, i: usize) -> f64 {
        let order = [&self.w1, &self.b1, &self.w2, &self.b2];
        let mut i = i;
        for t in order {
            if i < t.data().len() {
                return t.data()[i];
            }
            i -= t.data().len();
        }
        panic!("parameter index out of range");
    }

    pub fn param_mut(&mut self, i: usize) -> &mut f64 {
        let order = [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2];
        let mut i = i;
        for t in order {
            let n = t.data().len();
            if i < n {
                return &mut t.data_mut()[i];
            }
            i -= n;
        }
        panic!("parameter index out of range");
    }

    pub fn in_dim(&self) -> usize {
        self.w1.shape()[0]
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.shape()[1]
    }

    pub fn out_dim(&self) -> usize {
        self.w2.shape()[1]
    }

    /// Softmax class probabilities for a batch, `[B x out]`.
    pub fn forward(&self, batch: &Tensor) -> Result<Tensor, DiffError> {
        Ok(self.forward_cached(batch)?.probs)
    }

    /// Forward pass keeping the activations needed by the backward pass.
    pub fn forward_cached(&self, batch: &Tensor) -> Result<ForwardCache, DiffError> {
        if batch.shape().len() != 2 || batch.cols() != self.in_dim() {
            return Err(DiffError::ShapeMismatch {
                context: "network forward",
                expected: self.in_dim(),
                found: if batch.shape().len() == 2 { batch.cols() } else { 0 },
            });
        }
        let b = batch.rows();
        let (h, o) = (self.hidden_dim(), self.out_dim());
        let mut hidden_pre = Tensor::zeros(&[b, h]);
        let mut hidden = Tensor::zeros(&[b, h]);
        let mut probs = Tensor::zeros(&[b, o]);
        for i in 0..b {
            let x = batch.row(i);
            let hp = &mut hidden_pre.data_mut()[i * h..(i + 1) * h];
            for j in 0..h {
                let mut acc = self.b1.data()[j];
                for (k, &xk) in x.iter().enumerate() {
                    acc += xk * self.w1.data()[k * h + j];
                }
                hp[j] = acc;
            }
            let hrow: Vec<f64> = hp.iter().map(|&v| v.max(0.0)).collect();
            hidden.data_mut()[i * h..(i + 1) * h].copy_from_slice(&hrow);

            let mut logits = vec![0.0; o];
            for j in 0..o {
                let mut acc = self.b2.data()[j];
                for (k, &hk) in hrow.iter().enumerate() {
                    acc += hk * self.w2.data()[k * o + j];
                }
                logits[j] = acc;
            }
            // Max-subtracted softmax keeps the exponentials in range.
            let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut z = 0.0;
            for l in logits.iter_mut() {
                *l = (*l - m).exp();
                z += *l;
            }
            let prow = &mut probs.data_mut()[i * o..(i + 1) * o];
            for (p, &e) in prow.iter_mut().zip(logits.iter()) {
                *p = e / z;
            }
        }
        Ok(ForwardCache {
            hidden_pre,
            hidden,
            probs,
        })
    }
}
