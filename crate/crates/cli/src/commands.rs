use std::io::Write;
use std::time::Instant;

use stochlang::cra::{compile_sre, is_stochastic, product_with_dfa, total_weight_with, Dfa, TotalWeightOptions};
use stochlang::geometric::{mixture_to_sre, universal_approx};
use stochlang::mass::EmpiricalNormalization;
use stochlang::numfmt::g17;
use stochlang::sre::{truncation_threshold, SreFile};
use stochlang::testing::{
    conservative_sample_count, harness::run_test, planted_alternative, ReplaySource, SampleSource, SreSource,
    TestMode, TesterConfig, Verdict,
};
use stochlang::{SreExpr, Word};

use crate::input::{load_automaton, load_sre, read, write, CliError, CliResult};
use crate::{bench, Cli, Command, Format, Mode, Normalization, EXIT_OK, EXIT_REJECT};

/// Ordered `key=value` pairs, rendered per `--format`.
#[derive(Debug, Default)]
pub(crate) struct Record(Vec<(String, String)>);

impl Record {
    pub(crate) fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn from_lines(text: &str) -> Self {
        let mut r = Record::default();
        for line in text.lines() {
            if let Some((k, v)) = line.split_once('=') {
                r.push(k, v);
            }
        }
        r
    }

    pub(crate) fn render(&self, format: Format) -> String {
        let width = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.0 {
            match format {
                Format::Records => out.push_str(&format!("{k}={v}\n")),
                Format::Human => out.push_str(&format!("{k:<width$}  {v}\n")),
            }
        }
        out
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Runtime(format!("writing output: {e}")))
}

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let alphabet = cli.alphabet.as_deref();
    match &cli.command {
        Command::Parse { file } => {
            let f = load_sre(file, alphabet)?;
            emit(out, &f.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Eval { file, word, via_cra } => {
            let f = load_sre(file, alphabet)?;
            let w = Word::parse(word, &f.alphabet)?;
            let value = if *via_cra {
                compile_sre(&f.expr, &f.alphabet)?.eval(&w)?
            } else {
                f.expr.eval(&w)
            };
            emit(out, &format!("{}\n", g17(value)))?;
            Ok(EXIT_OK)
        }
        Command::Compile { file } => {
            let f = load_sre(file, alphabet)?;
            emit(out, &compile_sre(&f.expr, &f.alphabet)?.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Mass {
            file,
            dfa,
            cross_check_length,
        } => {
            let mut a = load_automaton(file, alphabet)?;
            if let Some(path) = dfa {
                let d = Dfa::parse(&read(path)?)?;
                a = product_with_dfa(&a, &d)?;
            }
            let opts = TotalWeightOptions {
                cross_check_length: *cross_check_length,
                ..TotalWeightOptions::default()
            };
            let s = total_weight_with(&a, &opts)?;
            let mut r = Record::default();
            r.push("total", g17(s.total));
            r.push("validated", s.validated);
            r.push("nonnegative", s.nonnegative);
            r.push("min_entry", g17(s.min_entry));
            r.push("residual", g17(s.residual));
            r.push("empty_word", g17(s.empty_word_weight));
            r.push("cross_check_length", s.cross_check.length);
            r.push("truncated_sum", g17(s.cross_check.truncated_sum));
            r.push("relative_gap", g17(s.cross_check.relative_gap));
            if !s.nonnegative {
                r.push("warning", "negative-entry");
            }
            if !s.validated {
                r.push("warning", "unvalidated");
            }
            emit(out, &r.render(cli.format))?;
            Ok(EXIT_OK)
        }
        Command::Check { file, tol } => {
            let a = load_automaton(file, alphabet)?;
            let rep = is_stochastic(&a, *tol)?;
            let mut r = Record::default();
            r.push("stochastic", rep.stochastic);
            r.push("total", g17(rep.solution.total));
            r.push("tolerance", g17(rep.tolerance));
            r.push("min_entry", g17(rep.solution.min_entry));
            emit(out, &r.render(cli.format))?;
            Ok(if rep.stochastic { EXIT_OK } else { EXIT_REJECT })
        }
        Command::Sample {
            file,
            count,
            seed,
            out: path,
            replay_header,
        } => {
            let f = load_sre(file, alphabet)?;
            let mut src = SreSource::new(f.expr, f.alphabet.clone(), *seed)?;
            let mut text = String::new();
            if *replay_header {
                text.push_str(&format!("alphabet: {}\n", f.alphabet));
            }
            for _ in 0..*count {
                text.push_str(&src.draw()?.to_string());
                text.push('\n');
            }
            match path {
                Some(p) => write(p, &text)?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Test { .. } => test(cli, out),
        Command::Approx { file, epsilon, budget, sre } => {
            let f = load_sre(file, alphabet)?;
            let m = universal_approx(&f.expr, &f.alphabet, *epsilon, *budget)?;
            if *sre {
                let expr = mixture_to_sre(&m)?;
                let file = SreFile {
                    alphabet: f.alphabet.clone(),
                    expr,
                };
                emit(out, &file.to_string())?;
            } else {
                emit(out, &m.to_string())?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { .. } => bench::run(cli, out),
    }
}

/// How the unknown distribution is sampled in `test`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SourceSpec {
    SelfSample,
    Sre(std::path::PathBuf),
    Replay(std::path::PathBuf),
    Planted(f64),
}

impl SourceSpec {
    pub(crate) fn parse(s: &str) -> CliResult<Self> {
        if s == "self" {
            return Ok(SourceSpec::SelfSample);
        }
        let bad = || CliError::Input(format!("invalid --source '{s}': expected self, sre:<file>, replay:<file> or planted:<distance>"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "sre" => Ok(SourceSpec::Sre(arg.into())),
            "replay" => Ok(SourceSpec::Replay(arg.into())),
            "planted" => {
                let d: f64 = arg.parse().map_err(|_| bad())?;
                if !(d > 0.0 && d < 2.0) {
                    return Err(CliError::Input(format!("planted distance {d} must lie in (0,2)")));
                }
                Ok(SourceSpec::Planted(d))
            }
            _ => Err(bad()),
        }
    }
}

/// A perturbed copy of `q` at truncated ℓ1 distance at least `distance`.
pub(crate) fn planted_expr(
    q: &SreExpr,
    alphabet: &stochlang::Alphabet,
    epsilon: f64,
    distance: f64,
    budget: u64,
) -> CliResult<stochlang::testing::PlantedAlternative> {
    let theta = truncation_threshold(q, epsilon).theta;
    Ok(planted_alternative(q, alphabet, theta, distance, budget)?)
}

fn test(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let Command::Test {
        reference,
        source,
        mode,
        epsilon,
        delta,
        seed,
        samples,
        conservative,
        thresholds,
        normalization,
        budget,
        timing,
    } = &cli.command
    else {
        unreachable!("dispatched on Test");
    };
    let started = Instant::now();
    let reference = load_sre(reference, cli.alphabet.as_deref())?;
    let (q, alphabet) = (&reference.expr, &reference.alphabet);
    let mut cfg = TesterConfig::new(*epsilon, *delta, *seed);
    cfg.inner_thresholds = *thresholds;
    cfg.enumeration_budget = *budget;
    cfg.normalization = match normalization {
        Normalization::Retained => EmpiricalNormalization::Retained,
        Normalization::Drawn => EmpiricalNormalization::Drawn,
    };
    cfg.validate()?;
    let mode = match mode {
        Mode::L1 => TestMode::L1,
        Mode::Linf => TestMode::Linf,
    };
    cfg.sample_budget_override = *samples;
    if *conservative {
        if mode != TestMode::L1 {
            return Err(CliError::Input("--conservative applies to --mode l1 only".into()));
        }
        let plan = stochlang::testing::l1_plan(q, alphabet, &cfg)?;
        let (e1, e2) = cfg.thresholds();
        cfg.sample_budget_override = Some(conservative_sample_count(plan.domain.exact, e1, e2)?);
    }

    let mut extra = Record::default();
    let outcome = match SourceSpec::parse(source)? {
        SourceSpec::SelfSample => {
            let mut src = SreSource::new(q.clone(), alphabet.clone(), *seed)?;
            run_test(q, &mut src, mode, &cfg)?
        }
        SourceSpec::Sre(path) => {
            let p = SreFile::parse(&read(&path)?)?;
            let mut src = SreSource::new(p.expr, p.alphabet, *seed)?;
            run_test(q, &mut src, mode, &cfg)?
        }
        SourceSpec::Replay(path) => {
            let mut src = ReplaySource::parse(&read(&path)?)?;
            let outcome = run_test(q, &mut src, mode, &cfg)?;
            extra.push("replay_unused", src.remaining());
            outcome
        }
        SourceSpec::Planted(d) => {
            let planted = planted_expr(q, alphabet, *epsilon, d, *budget)?;
            extra.push("planted_weight", planted.weight_index);
            extra.push("planted_value", g17(planted.planted));
            extra.push("planted_distance", g17(planted.distance));
            let mut src = SreSource::new(planted.expr, alphabet.clone(), *seed)?;
            run_test(q, &mut src, mode, &cfg)?
        }
    };
    let mut record = Record::from_lines(&outcome.to_record(*seed));
    record.0.extend(extra.0);
    if *timing {
        record.push("wall_ms", started.elapsed().as_millis());
    }
    emit(out, &record.render(cli.format))?;
    Ok(match outcome.verdict {
        Verdict::Accept => EXIT_OK,
        Verdict::Reject => EXIT_REJECT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_specs() {
        assert_eq!(SourceSpec::parse("self").unwrap(), SourceSpec::SelfSample);
        assert_eq!(SourceSpec::parse("sre:x.sre").unwrap(), SourceSpec::Sre("x.sre".into()));
        assert_eq!(SourceSpec::parse("replay:r").unwrap(), SourceSpec::Replay("r".into()));
        assert_eq!(SourceSpec::parse("planted:0.5").unwrap(), SourceSpec::Planted(0.5));
        for bad in ["", "planted:2", "planted:x", "file:y", "selfish"] {
            assert!(SourceSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn record_rendering() {
        let mut r = Record::default();
        r.push("k", 6);
        r.push("verdict", "accept");
        assert_eq!(r.render(Format::Records), "k=6\nverdict=accept\n");
        assert_eq!(r.render(Format::Human), "k        6\nverdict  accept\n");
        let back = Record::from_lines("a=1\nnoise\nb=x=y\n");
        assert_eq!(back.render(Format::Records), "a=1\nb=x=y\n");
    }
}
