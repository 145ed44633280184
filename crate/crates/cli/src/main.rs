mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parseval_dilate::dynamics::max_splits_from_env;
use parseval_dilate::frame::{complement_gram, invariance_check, psd_report};
use parseval_dilate::pipeline::{self, DEFAULT_J_WINDOW, SCALING_MAX_ITER};
use parseval_dilate::wavelet::{
    scaling_set, semiorthogonal_complement, shannon_set, verify_wavelet_set,
};
use parseval_dilate::words::parse_bits;
use parseval_dilate::{
    filter::build_filter, ComponentFunction, DStrategy, Error, IntervalSet, Limits,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "parseval-dilate",
    version,
    about = "Exact orthonormal dilations of MRA Parseval wavelet sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that P is a Parseval wavelet set (exit 1 if not)
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_J_WINDOW, value_name = "N")]
        j_window: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the scaling set F of P
    Scaling {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Build the QMF filter set M
    Filter {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        strategy: Strategy,
        #[command(flatten)]
        output: Output,
    },
    /// Chosen paths and cycles of the filter
    Paths {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        strategy: Strategy,
        #[command(flatten)]
        output: Output,
    },
    /// Dilated scaling function and orthonormal super-wavelet
    Dilate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_J_WINDOW, value_name = "N")]
        j_window: u32,
        /// Write a figure of the component supports
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Semi-orthogonal complement F' inside an orthonormal wavelet set
    Complement {
        #[command(flatten)]
        input: Input,
        /// Orthonormal wavelet set to carve F' from [default: Shannon set]
        #[arg(long, value_name = "SET", value_parser = parse_set)]
        g_set: Option<IntervalSet>,
        #[arg(long, default_value_t = DEFAULT_J_WINDOW, value_name = "N")]
        j_window: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Positive semidefiniteness of the complement kernel over |j| <= J, |k| <= K
    Gram {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "J,K", default_value = "2,3", value_parser = parse_pair)]
        gram: (i64, i64),
        /// Sampled index tuples for the invariance relations
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Parseval wavelet set, e.g. "[-1/4,-1/8)u[1/8,1/4)"
    #[arg(short = 'P', long = "wavelet-set", value_name = "SET", value_parser = parse_set)]
    p: IntervalSet,
}

#[derive(Args)]
#[group(multiple = false)]
struct Strategy {
    /// Explicit completion D of the undecided zone
    #[arg(long, value_name = "SET", value_parser = parse_set)]
    d_set: Option<IntervalSet>,
    /// Default completion (the choice used when no flag is given)
    #[arg(long)]
    d_default: bool,
    /// Completion that places the cycle of this binary word inside M
    #[arg(long, value_name = "WORD", value_parser = parse_word)]
    d_cycle: Option<Word>,
}

/// A nonempty binary word given on the command line.
#[derive(Clone)]
struct Word(Vec<u8>);

impl Strategy {
    fn resolve(&self) -> DStrategy {
        match (&self.d_set, &self.d_cycle) {
            (Some(d), _) => DStrategy::ExplicitSet(d.clone()),
            (_, Some(w)) => DStrategy::CycleSeeded(w.0.clone()),
            _ => DStrategy::Standard,
        }
    }
}

#[derive(Args)]
#[group(multiple = false)]
struct Output {
    /// JSON output (default)
    #[arg(long)]
    json: bool,
    /// Human-readable output
    #[arg(long)]
    table: bool,
}

fn parse_set(s: &str) -> Result<IntervalSet, String> {
    s.parse()
        .map_err(|e: parseval_dilate::ParseError| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    let bits = parse_bits(s).map_err(|e| e.to_string())?;
    if bits.is_empty() {
        return Err("empty word".into());
    }
    Ok(Word(bits))
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (j, k) = s
        .split_once(',')
        .ok_or_else(|| format!("expected J,K, got {s:?}"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .ok()
            .filter(|n| (0..=64).contains(n))
            .ok_or_else(|| format!("expected an integer in 0..=64, got {t:?}"))
    };
    Ok((num(j)?, num(k)?))
}

/// A command result: JSON document, table text and whether the mathematical
/// check it stands for succeeded.
struct Report {
    json: Value,
    table: String,
    ok: bool,
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable output")
}

fn limits(j_window: u32) -> Limits {
    Limits {
        max_splits: max_splits_from_env(),
        j_window,
    }
}

fn components_table(name: &str, f: &ComponentFunction) -> Vec<(String, String)> {
    let mut rows = vec![(format!("{name} *"), f.real.to_string())];
    for (cycle, slots) in &f.cycles {
        for (j, slot) in slots.iter().enumerate() {
            rows.push((
                format!("{name} {}[{j}]", cycle.word_string()),
                slot.to_string(),
            ));
        }
    }
    rows
}

fn run(command: &Command) -> Result<Report, Error> {
    match command {
        Command::Verify {
            input, j_window, ..
        } => {
            let r = verify_wavelet_set(&input.p, *j_window)?;
            Ok(Report {
                json: to_json(&r),
                table: table(&[
                    ("multiplicative tile", r.is_multiplicative_tile.to_string()),
                    ("translation simple", r.is_translation_simple.to_string()),
                    ("covers line", r.covers_line.to_string()),
                    ("parseval", r.is_parseval.to_string()),
                    ("orthonormal", r.is_orthonormal.to_string()),
                ]),
                ok: r.is_parseval,
            })
        }
        Command::Scaling { input, .. } => {
            let s = scaling_set(&input.p, SCALING_MAX_ITER)?;
            Ok(Report {
                json: to_json(&s),
                table: table(&[
                    ("P", s.p.to_string()),
                    ("F", s.f.to_string()),
                    (
                        "F translation simple",
                        s.f_is_translation_simple.to_string(),
                    ),
                    ("iterations", s.iterations.to_string()),
                ]),
                ok: true,
            })
        }
        Command::Filter {
            input, strategy, ..
        } => {
            let f = scaling_set(&input.p, SCALING_MAX_ITER)?.f;
            let m = build_filter(&f, &strategy.resolve())?;
            Ok(Report {
                json: to_json(&m),
                table: table(&[
                    ("M", m.m.to_string()),
                    ("tau(F/2)", m.tau_f_half.to_string()),
                    ("C", m.c.to_string()),
                    ("D", m.d.to_string()),
                ]),
                ok: true,
            })
        }
        Command::Paths {
            input, strategy, ..
        } => {
            let data = pipeline::paths(&input.p, &strategy.resolve(), limits(DEFAULT_J_WINDOW))?;
            let mut rows: Vec<(String, String)> = vec![("M".into(), data.filter.m.to_string())];
            for (piece, path) in &data.paths.pieces {
                rows.push((format!("path on {piece}"), path.to_string()));
            }
            for c in &data.cycles {
                let points: Vec<String> = c.points().iter().map(ToString::to_string).collect();
                rows.push((format!("cycle {}", c.word_string()), points.join(", ")));
            }
            rows.push(("density".into(), data.density.passed.to_string()));
            let rows: Vec<(&str, String)> =
                rows.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            Ok(Report {
                json: to_json(&data),
                table: table(&rows),
                ok: data.density.passed,
            })
        }
        Command::Dilate {
            input,
            strategy,
            j_window,
            svg,
            ..
        } => {
            let d = pipeline::dilate(&input.p, &strategy.resolve(), limits(*j_window))?;
            if let Some(path) = svg {
                std::fs::write(path, svg::render(&d.phi, &d.psi)).map_err(|e| {
                    Error::Precondition(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            let v = &d.verification;
            let mut rows = vec![
                ("F".to_string(), d.scaling.f.to_string()),
                ("M".to_string(), d.filter().m.to_string()),
            ];
            rows.extend(components_table("phi", &d.phi));
            rows.extend(components_table("psi", &d.psi));
            rows.push((
                "translation tiling".into(),
                v.translation_tiling.to_string(),
            ));
            rows.push((
                format!("dilates disjoint |j|<={}", v.j_window),
                v.dilation_disjoint_window.to_string(),
            ));
            rows.push((
                "dilation certified".into(),
                v.dilation_certified.to_string(),
            ));
            rows.push(("real component is P".into(), v.real_matches_p.to_string()));
            let rows: Vec<(&str, String)> =
                rows.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            Ok(Report {
                json: to_json(&d),
                table: table(&rows),
                ok: v.passed && d.scaling_relation,
            })
        }
        Command::Complement {
            input,
            g_set,
            j_window,
            ..
        } => {
            let g = g_set.clone().unwrap_or_else(shannon_set);
            let (fp, r) = semiorthogonal_complement(&input.p, &g, *j_window)?;
            Ok(Report {
                json: json!({ "G": g, "F_prime": fp, "report": r }),
                table: table(&[
                    ("G", g.to_string()),
                    ("F'", fp.to_string()),
                    ("translation tiling", r.translation_tiling.to_string()),
                    ("dilates disjoint", r.dilates_disjoint.to_string()),
                ]),
                ok: r.translation_tiling && r.dilates_disjoint,
            })
        }
        Command::Gram {
            input,
            gram: (j, k),
            samples,
            seed,
            ..
        } => {
            let report = psd_report(&complement_gram(&input.p, *j, *k));
            let inv = invariance_check(&input.p, *samples, *seed);
            let mut json = to_json(&report);
            json["invariance"] = to_json(&inv);
            Ok(Report {
                table: table(&[
                    ("dimension", report.dimension.to_string()),
                    (
                        "smallest eigenvalue",
                        format!("{:e}", report.smallest_eigenvalue),
                    ),
                    ("max |entry|", format!("{:e}", report.max_abs_entry)),
                    ("violations", report.violations.len().to_string()),
                    ("invariance samples", inv.samples.to_string()),
                    ("invariance failures", inv.failures.len().to_string()),
                ]),
                ok: report.is_psd() && inv.passed(),
                json,
            })
        }
    }
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Verify { output, .. }
        | Command::Scaling { output, .. }
        | Command::Filter { output, .. }
        | Command::Paths { output, .. }
        | Command::Dilate { output, .. }
        | Command::Complement { output, .. }
        | Command::Gram { output, .. } => output,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_table = output_of(&cli.command).table;
    match run(&cli.command) {
        Ok(report) => {
            let text = if as_table {
                report.table
            } else {
                serde_json::to_string_pretty(&report.json).expect("valid JSON") + "\n"
            };
            // A closed pipe on stdout is not an error of the computation.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if !as_table {
                let doc = json!({ "error": e.kind(), "message": e.to_string() });
                let text = serde_json::to_string_pretty(&doc).expect("valid JSON") + "\n";
                let _ = std::io::stdout().lock().write_all(text.as_bytes());
            }
            ExitCode::from(if matches!(e, Error::Parse(_)) { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use parseval_dilate::words::bits_to_string;

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("2,3"), Ok((2, 3)));
        assert!(parse_pair("2").is_err());
        assert!(parse_pair("-1,3").is_err());
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("100").unwrap().0, vec![1, 0, 0]);
        assert!(parse_word("").is_err());
        assert!(parse_word("102").is_err());
        assert_eq!(bits_to_string(&parse_word("1001100").unwrap().0), "1001100");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
