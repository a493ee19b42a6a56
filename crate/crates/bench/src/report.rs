//! CSV, gnuplot script and terminal summary for sweep results.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::FamilyChoice;
use crate::error::BenchError;
use crate::sweep::RunResult;

pub const CSV_HEADER: &str = "run_id,family,lambda,epoch,step,train_loss,test_accuracy,clamp_count";

/// Nine significant digits; infinity as the literal `inf`.
fn fmt_float(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.8e}")
}

fn fmt_lambda(lambda: Option<f64>) -> String {
    lambda.map(fmt_float).unwrap_or_default()
}

pub fn csv_string(results: &[RunResult]) -> Result<String, BenchError> {
    if results.is_empty() {
        return Err(BenchError::EmptyResults);
    }
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for run in results {
        for s in &run.stats {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                run.run_id,
                run.family.name(),
                fmt_lambda(run.lambda),
                s.epoch,
                s.step,
                fmt_float(s.train_loss),
                fmt_float(s.test_accuracy),
                s.clamp_count
            )
            .expect("writing to a string cannot fail");
        }
    }
    Ok(out)
}

pub fn emit_csv(results: &[RunResult], path: &Path) -> Result<(), BenchError> {
    let text = csv_string(results)?;
    std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
}

fn curve_title(run: &RunResult) -> String {
    match run.lambda {
        Some(l) => format!("lambda={l}"),
        None => run.family.name().to_string(),
    }
}

/// Gnuplot script reading the already-emitted CSV: one panel per family,
/// one accuracy-vs-epoch curve per run.
pub fn plot_script_string(results: &[RunResult], csv_path: &Path) -> Result<String, BenchError> {
    if results.is_empty() {
        return Err(BenchError::EmptyResults);
    }
    let csv = csv_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv_path.display().to_string());
    let png = Path::new(&csv)
        .with_extension("png")
        .to_string_lossy()
        .into_owned();

    let mut families: Vec<FamilyChoice> = Vec::new();
    for run in results {
        if !families.contains(&run.family) {
            families.push(run.family);
        }
    }

    let mut s = String::new();
    let _ = writeln!(s, "# Test accuracy by epoch, one panel per family.");
    let _ = writeln!(s, "# Run through gnuplot from the directory holding {csv}.");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size {},480", 640 * families.len());
    let _ = writeln!(s, "set output '{png}'");
    let _ = writeln!(s, "set multiplot layout 1,{}", families.len());
    let _ = writeln!(s, "set xlabel 'epoch'");
    let _ = writeln!(s, "set ylabel 'test accuracy'");
    let _ = writeln!(s, "set yrange [0:1]");
    let _ = writeln!(s, "set key bottom right");
    for family in families {
        let _ = writeln!(s, "set title '{}'", family.name());
        let runs: Vec<&RunResult> = results.iter().filter(|r| r.family == family).collect();
        let mut pieces = Vec::new();
        for (k, run) in runs.iter().enumerate() {
            let src = if k == 0 { format!("'{csv}'") } else { "''".to_string() };
            pieces.push(format!(
                "{src} every ::1 using 4:(strcol(1) eq '{id}' ? $7 : NaN) \
                 with linespoints title '{title}'",
                id = run.run_id,
                title = curve_title(run),
            ));
        }
        let _ = writeln!(s, "plot {}", pieces.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    Ok(s)
}

pub fn emit_plot_script(
    results: &[RunResult],
    csv_path: &Path,
    script_path: &Path,
) -> Result<(), BenchError> {
    let text = plot_script_string(results, csv_path)?;
    std::fs::write(script_path, text).map_err(|e| BenchError::io(script_path, e))
}

/// Human summary: one line per run plus a comparison against the
/// cross-entropy run when the sweep contains one.
pub fn summary_table(results: &[RunResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:<12} {:>8} {:>11} {:>10} {:>12}",
        "run", "family", "lambda", "final_acc", "best_acc", "final_loss"
    );
    for run in results {
        let best = run
            .stats
            .iter()
            .map(|st| st.test_accuracy)
            .fold(0.0f64, f64::max);
        let final_loss = run.stats.last().map_or(f64::NAN, |st| st.train_loss);
        let _ = writeln!(
            s,
            "{:<8} {:<12} {:>8} {:>11.4} {:>10.4} {:>12.6}",
            run.run_id,
            run.family.name(),
            run.lambda.map_or(String::new(), |l| l.to_string()),
            run.final_accuracy(),
            best,
            final_loss
        );
    }
    if let Some(base) = results.iter().find(|r| r.is_cross_entropy()) {
        let winners: Vec<&str> = results
            .iter()
            .filter(|r| r.run_id != base.run_id && r.final_accuracy() > base.final_accuracy())
            .map(|r| r.run_id.as_str())
            .collect();
        let _ = writeln!(
            s,
            "cross-entropy baseline: {} (final accuracy {:.4})",
            base.run_id,
            base.final_accuracy()
        );
        let _ = writeln!(
            s,
            "runs beating it at the final epoch: {}",
            if winners.is_empty() {
                "none".to_string()
            } else {
                winners.join(", ")
            }
        );
    }
    s
}
