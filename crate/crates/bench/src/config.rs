//! Experiment configuration: built-in defaults, a flat key=value file, and
//! CLI flags, merged in that order of increasing precedence.

use std::path::{Path, PathBuf};

use genloss_core::DEFAULT_EPS;
use genloss_logic::QuantifierMode;

use crate::error::BenchError;

/// Which loss family a sweep trains. `ss` and `frank` take a lambda grid;
/// the others are parameter-free. `godel` has no additive generator and
/// exists to exercise the unsupported-generator failure path end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    SchweizerSklar,
    Frank,
    Lukasiewicz,
    Product,
    Godel,
}

impl FamilyChoice {
    pub fn parse(s: &str) -> Result<Self, BenchError> {
        match s {
            "ss" => Ok(FamilyChoice::SchweizerSklar),
            "frank" => Ok(FamilyChoice::Frank),
            "lukasiewicz" => Ok(FamilyChoice::Lukasiewicz),
            "product" => Ok(FamilyChoice::Product),
            "godel" => Ok(FamilyChoice::Godel),
            _ => Err(BenchError::InvalidValue {
                what: "family",
                raw: s.to_string(),
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyChoice::SchweizerSklar => "ss",
            FamilyChoice::Frank => "frank",
            FamilyChoice::Lukasiewicz => "lukasiewicz",
            FamilyChoice::Product => "product",
            FamilyChoice::Godel => "godel",
        }
    }

    pub fn has_lambda(self) -> bool {
        matches!(self, FamilyChoice::SchweizerSklar | FamilyChoice::Frank)
    }
}

pub fn default_lambdas(family: FamilyChoice) -> Vec<f64> {
    match family {
        FamilyChoice::SchweizerSklar => vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
        FamilyChoice::Frank => vec![0.5, 1.0, 2.0, 5.0, 10.0, f64::INFINITY],
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: FamilyChoice,
    pub lambdas: Vec<f64>,
    pub quantifier: QuantifierMode,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub train_size: usize,
    pub test_size: usize,
    pub seed: u64,
    pub eps: f64,
    pub data_dir: PathBuf,
    pub out: PathBuf,
}

/// Partial configuration; `None` means "not set at this layer".
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub family: Option<FamilyChoice>,
    pub lambdas: Option<Vec<f64>>,
    pub quantifier: Option<QuantifierMode>,
    pub epochs: Option<usize>,
    pub batch: Option<usize>,
    pub lr: Option<f64>,
    pub train_size: Option<usize>,
    pub test_size: Option<usize>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub data_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

pub fn parse_lambdas(s: &str) -> Result<Vec<f64>, BenchError> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let v = match tok {
            "inf" | "+inf" => f64::INFINITY,
            _ => tok.parse::<f64>().map_err(|_| BenchError::InvalidValue {
                what: "lambdas",
                raw: tok.to_string(),
            })?,
        };
        if v.is_nan() {
            return Err(BenchError::InvalidValue {
                what: "lambdas",
                raw: tok.to_string(),
            });
        }
        out.push(v);
    }
    Ok(out)
}

pub fn parse_quantifier(s: &str) -> Result<QuantifierMode, BenchError> {
    match s {
        "minmax" => Ok(QuantifierMode::MinMax),
        "generator" => Ok(QuantifierMode::Generator),
        _ => Err(BenchError::InvalidValue {
            what: "quantifier",
            raw: s.to_string(),
        }),
    }
}

/// Reads a flat `key = value` file with `#` comments. Keys mirror the CLI
/// flag names.
pub fn parse_config_file(path: &Path) -> Result<ConfigOverlay, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let mut overlay = ConfigOverlay::default();
    let err = |line: usize, message: String| BenchError::Config {
        path: path.display().to_string(),
        line,
        message,
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected key = value".to_string()))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| err(line_no, format!("invalid {what}: {value}"));
        match key {
            "family" => overlay.family = Some(FamilyChoice::parse(value).map_err(|_| bad("family"))?),
            "lambdas" => overlay.lambdas = Some(parse_lambdas(value).map_err(|_| bad("lambdas"))?),
            "quantifier" => {
                overlay.quantifier = Some(parse_quantifier(value).map_err(|_| bad("quantifier"))?)
            }
            "epochs" => overlay.epochs = Some(value.parse().map_err(|_| bad("epochs"))?),
            "batch" => overlay.batch = Some(value.parse().map_err(|_| bad("batch"))?),
            "lr" => overlay.lr = Some(value.parse().map_err(|_| bad("lr"))?),
            "train-size" => overlay.train_size = Some(value.parse().map_err(|_| bad("train-size"))?),
            "test-size" => overlay.test_size = Some(value.parse().map_err(|_| bad("test-size"))?),
            "seed" => overlay.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "eps" => overlay.eps = Some(value.parse().map_err(|_| bad("eps"))?),
            "data-dir" => overlay.data_dir = Some(PathBuf::from(value)),
            "out" => overlay.out = Some(PathBuf::from(value)),
            _ => return Err(err(line_no, format!("unknown key: {key}"))),
        }
    }
    Ok(overlay)
}

/// CLI beats file beats defaults. Validates the combination.
pub fn resolve(
    file: Option<ConfigOverlay>,
    cli: ConfigOverlay,
) -> Result<ExperimentConfig, BenchError> {
    let file = file.unwrap_or_default();
    let pick = |a: Option<PathBuf>, b: Option<PathBuf>, d: &str| {
        a.or(b).unwrap_or_else(|| PathBuf::from(d))
    };
    let family = cli.family.or(file.family).unwrap_or(FamilyChoice::SchweizerSklar);
    let lambdas = cli
        .lambdas
        .or(file.lambdas)
        .unwrap_or_else(|| default_lambdas(family));
    let cfg = ExperimentConfig {
        family,
        lambdas,
        quantifier: cli
            .quantifier
            .or(file.quantifier)
            .unwrap_or(QuantifierMode::Generator),
        epochs: cli.epochs.or(file.epochs).unwrap_or(30),
        batch_size: cli.batch.or(file.batch).unwrap_or(100),
        learning_rate: cli.lr.or(file.lr).unwrap_or(0.01),
        train_size: cli.train_size.or(file.train_size).unwrap_or(5000),
        test_size: cli.test_size.or(file.test_size).unwrap_or(1000),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        eps: cli.eps.or(file.eps).unwrap_or(DEFAULT_EPS),
        data_dir: pick(cli.data_dir, file.data_dir, "data"),
        out: pick(cli.out, file.out, "results.csv"),
    };
    if cfg.family.has_lambda() && cfg.lambdas.is_empty() {
        return Err(BenchError::InvalidValue {
            what: "lambdas",
            raw: "empty list".to_string(),
        });
    }
    if !cfg.family.has_lambda() && !cfg.lambdas.is_empty() {
        return Err(BenchError::InvalidValue {
            what: "lambdas",
            raw: format!("family {} takes no lambdas", cfg.family.name()),
        });
    }
    if cfg.batch_size == 0 {
        return Err(BenchError::InvalidValue {
            what: "batch",
            raw: "0".to_string(),
        });
    }
    if !(cfg.learning_rate.is_finite() && cfg.learning_rate > 0.0) {
        return Err(BenchError::InvalidValue {
            what: "lr",
            raw: cfg.learning_rate.to_string(),
        });
    }
    Ok(cfg)
}
