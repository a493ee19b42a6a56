//! Plain stochastic gradient descent.

use crate::grad::Gradients;
use crate::network::Network;

/// Optimizer state. SGD needs only the learning rate; the step counter
/// exists for reporting.
#[derive(Debug, Clone, Copy)]
pub struct OptimState {
    pub lr: f64,
    pub step: u64,
}

impl OptimState {
    pub fn new(lr: f64) -> Self {
        OptimState { lr, step: 0 }
    }
}

impl Default for OptimState {
    fn default() -> Self {
        OptimState::new(0.01)
    }
}

/// In-place update `theta -= lr * grad` over every parameter tensor.
pub fn sgd_step(net: &mut Network, grads: &Gradients, state: &mut OptimState) {
    let lr = state.lr;
    let pairs = [
        (net.w1.data_mut(), grads.w1.data()),
        (net.b1.data_mut(), grads.b1.data()),
        (net.w2.data_mut(), grads.w2.data()),
        (net.b2.data_mut(), grads.b2.data()),
    ];
    for (theta, g) in pairs {
        for (t, g) in theta.iter_mut().zip(g.iter()) {
            *t -= lr * g;
        }
    }
    state.step += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor;

    #[test]
    fn step_moves_against_the_gradient() {
        let mut net = Network::init_with_dims(1, 1, 1, 7);
        net.w1 = Tensor::from_vec(&[1, 1], vec![1.0]).unwrap();
        let mut grads = Gradients::zeros_like(&net);
        grads.w1.data_mut()[0] = 2.0;
        let mut state = OptimState::new(0.01);
        sgd_step(&mut net, &grads, &mut state);
        assert!((net.w1.data()[0] - 0.98).abs() < 1e-15);
        assert_eq!(state.step, 1);
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut net = Network::init_with_dims(3, 2, 2, 9);
        let before = net.clone();
        let grads = Gradients::zeros_like(&net);
        let mut state = OptimState::default();
        sgd_step(&mut net, &grads, &mut state);
        assert_eq!(net.w1.data(), before.w1.data());
        assert_eq!(net.w2.data(), before.w2.data());
        assert_eq!(net.b1.data(), before.b1.data());
        assert_eq!(net.b2.data(), before.b2.data());
    }
}
