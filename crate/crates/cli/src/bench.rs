//! `bench`: acceptance rates of both testers over a directory of reference
//! expressions, one CSV row per (case, mode, source) combination.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use stochlang::numfmt::g17;
use stochlang::sre::SreFile;
use stochlang::testing::harness::{run_test, TrialSummary};
use stochlang::testing::{SreSource, TestMode, TesterConfig};
use stochlang::{Alphabet, SreExpr};

use crate::commands::planted_expr;
use crate::input::{load_sre, write, CliError, CliResult};
use crate::{Cli, Command, EXIT_OK};

pub const CSV_HEADER: &str = "case,mode,ε,accept_rate,mean_N,mean_ms";

/// `*.sre` files of `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sre"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Input(format!("{}: no .sre files", dir.display())));
    }
    Ok(files)
}

struct Row {
    case: String,
    mode: TestMode,
    summary: TrialSummary,
    elapsed_ms: f64,
}

/// Runs `trials` seeded trials in parallel; the sum is order-independent.
fn trials(
    q: &SreExpr,
    p: &SreExpr,
    alphabet: &Alphabet,
    mode: TestMode,
    cfg: &TesterConfig,
    n: usize,
) -> CliResult<(TrialSummary, f64)> {
    let started = Instant::now();
    let outcomes: Vec<_> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut c = cfg.clone();
            c.seed = cfg.seed.wrapping_add(i);
            let mut src = SreSource::new(p.clone(), alphabet.clone(), c.seed)?;
            run_test(q, &mut src, mode, &c)
        })
        .collect::<Result<_, _>>()?;
    let mut summary = TrialSummary::default();
    for o in &outcomes {
        summary.record(o);
    }
    Ok((summary, started.elapsed().as_secs_f64() * 1e3 / n.max(1) as f64))
}

pub(crate) fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let Command::Bench {
        corpus,
        trials: n,
        out: path,
        epsilon,
        delta,
        seed,
        timing,
    } = &cli.command
    else {
        unreachable!("dispatched on Bench");
    };
    let cfg = TesterConfig::new(*epsilon, *delta, *seed);
    cfg.validate()?;
    let mut rows = Vec::new();
    for file in corpus_files(corpus)? {
        let SreFile { alphabet, expr: q } = load_sre(&file, cli.alphabet.as_deref())?;
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let (_, far) = cfg.thresholds();
        let planted = planted_expr(&q, &alphabet, *epsilon, far, cfg.enumeration_budget)?;
        for (suffix, p, mode) in [
            ("identical", &q, TestMode::L1),
            ("planted", &planted.expr, TestMode::L1),
            ("identical", &q, TestMode::Linf),
        ] {
            let (summary, elapsed_ms) = trials(&q, p, &alphabet, mode, &cfg, *n)?;
            rows.push(Row {
                case: format!("{name}/{suffix}"),
                mode,
                summary,
                elapsed_ms,
            });
        }
    }
    let mut csv = format!("{CSV_HEADER}\n");
    for r in &rows {
        let ms = if *timing { format!("{:.3}", r.elapsed_ms) } else { String::new() };
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.case,
            r.mode,
            g17(*epsilon),
            g17(r.summary.accept_rate()),
            g17(r.summary.mean_samples()),
            ms
        ));
    }
    match path {
        Some(p) => write(p, &csv)?,
        None => out.write_all(csv.as_bytes()).map_err(|e| CliError::Runtime(e.to_string()))?,
    }
    Ok(EXIT_OK)
}
