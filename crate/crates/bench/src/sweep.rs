//! Runs one training per lambda with shared initialization, in parallel.

use genloss_core::{GeneratorSpec, TNormOp};
use genloss_diff::{run_training, EpochStat, Network, TrainConfig};
use genloss_logic::generator_of;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, FamilyChoice};
use crate::data::Dataset;
use crate::error::BenchError;

/// One trained curve plus the identity of the loss that produced it.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub run_id: String,
    pub family: FamilyChoice,
    pub lambda: Option<f64>,
    pub stats: Vec<EpochStat>,
}

impl RunResult {
    pub fn final_accuracy(&self) -> f64 {
        self.stats.last().map_or(0.0, |s| s.test_accuracy)
    }

    /// Whether this run's loss is arithmetically the softmax cross entropy.
    pub fn is_cross_entropy(&self) -> bool {
        match (self.family, self.lambda) {
            (FamilyChoice::Product, _) => true,
            (FamilyChoice::SchweizerSklar, Some(l)) => l == 0.0,
            (FamilyChoice::Frank, Some(l)) => l == 1.0,
            _ => false,
        }
    }
}

/// The t-norm a run trains with. Catalog families produce an op without a
/// generator; the compiler rejects those downstream.
pub fn op_for(
    family: FamilyChoice,
    lambda: Option<f64>,
    eps: f64,
) -> Result<TNormOp, BenchError> {
    let spec = match family {
        FamilyChoice::SchweizerSklar => {
            GeneratorSpec::schweizer_sklar(lambda.expect("ss sweeps carry a lambda"))?
        }
        FamilyChoice::Frank => GeneratorSpec::frank(lambda.expect("frank sweeps carry a lambda"))?,
        FamilyChoice::Lukasiewicz => GeneratorSpec::lukasiewicz(),
        FamilyChoice::Product => GeneratorSpec::product(),
        FamilyChoice::Godel => return Ok(TNormOp::godel()),
    };
    Ok(TNormOp::generated(spec.with_eps(eps)?))
}

/// Lambda slots for the sweep: the grid for parameterized families, a
/// single lambda-free run otherwise.
fn plan(cfg: &ExperimentConfig) -> Vec<Option<f64>> {
    if cfg.family.has_lambda() {
        cfg.lambdas.iter().copied().map(Some).collect()
    } else {
        vec![None]
    }
}

/// Trains every run of the sweep. All runs start from the same seed so the
/// loss is the only varying factor; runs execute in parallel and come back
/// in grid order.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    train: &Dataset,
    test: &Dataset,
) -> Result<Vec<RunResult>, BenchError> {
    let tcfg = TrainConfig {
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        lr: cfg.learning_rate,
        mode: cfg.quantifier,
    };
    plan(cfg)
        .into_par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let op = op_for(cfg.family, lambda, cfg.eps)?;
            let spec = generator_of(&op)?;
            let mut net = Network::init(cfg.seed);
            let stats = run_training(
                &mut net,
                spec,
                &train.images,
                &train.labels,
                &test.images,
                &test.labels,
                &tcfg,
            )?;
            Ok(RunResult {
                run_id: format!("run{i:02}"),
                family: cfg.family,
                lambda,
                stats,
            })
        })
        .collect()
}
