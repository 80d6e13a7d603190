mod args;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ginedge::edgelaw::EdgeLaw;
use ginedge::identities::{self, IdentityReport};
use ginedge::mc::{self, McConfig, MAX_DIM, MIN_DIM};
use ginedge::tails::{self, TailCoefficients};
use ginedge::Execution;
use serde::Serialize;

use args::{check_gammas, Cli, Command, Common, Format, Invalid, TailsPart};
use output::{num, Csv};

/// Reference moments: mean, variance, skewness, excess kurtosis.
const TABLE1: [(f64, [f64; 4]); 4] = [
    (1.0, [-1.30319, 3.97536, -1.76969, 5.14560]),
    (0.8, [-1.94070, 6.87453, -1.86716, 5.57883]),
    (0.6, [-2.99680, 13.49947, -2.02286, 8.06831]),
    (0.4, [-5.12526, 36.37796, -3.02040, 22.14125]),
];
const TABLE1_TOL: [f64; 4] = [5e-4, 5e-4, 5e-3, 5e-3];
const TABLE1_NAMES: [&str; 4] = ["mean", "variance", "skewness", "excess_kurtosis"];

enum Failure {
    Usage(Invalid),
    Numerical(ginedge::Error),
    Io(std::io::Error),
    /// Output was written; some identity failed.
    Checks(usize),
}

impl From<Invalid> for Failure {
    fn from(e: Invalid) -> Self {
        Failure::Usage(e)
    }
}

impl From<ginedge::Error> for Failure {
    fn from(e: ginedge::Error) -> Self {
        Failure::Numerical(e)
    }
}

fn usage(flag: &'static str, message: String) -> Failure {
    Failure::Usage(Invalid { flag, message })
}

#[derive(Serialize)]
struct McReport<'a> {
    run: &'a mc::McRun,
    ks_distance: f64,
    mean: Option<f64>,
}

#[derive(Serialize)]
struct CheckLine<'a> {
    #[serde(flatten)]
    report: &'a IdentityReport,
    passed: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}

fn execution(common: &Common) -> Result<Execution, Failure> {
    match common.threads {
        1 => Ok(Execution::Sequential),
        0 => Ok(Execution::default()),
        n => {
            // only fails when a pool already exists, which cannot happen here
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| usage("--threads", e.to_string()))?;
            Ok(Execution::default())
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let common = &cli.common;
    common.validate()?;
    let exec = execution(common)?;
    let law = EdgeLaw::new(common.quad_points)?.with_execution(exec);
    let format = common.format;
    let csv_only = |name: &'static str| -> Result<(), Failure> {
        if format == Some(Format::Json) {
            Err(usage("--format", format!("{name} only writes csv")))
        } else {
            Ok(())
        }
    };

    match &cli.command {
        Command::Cdf { gamma, grid } | Command::Pdf { gamma, grid } => {
            let is_cdf = matches!(cli.command, Command::Cdf { .. });
            csv_only(if is_cdf { "cdf" } else { "pdf" })?;
            check_gammas("--gamma", gamma)?;
            let ts = grid.points()?;
            let mut csv = Csv::new(&["gamma", "t", if is_cdf { "cdf" } else { "pdf" }]);
            for &g in gamma {
                let values = if is_cdf {
                    law.curve(&ts, g)?.into_iter().map(|p| p.cdf).collect()
                } else {
                    ginedge::par::try_map(exec, &ts, |&t| law.pdf(t, g))?
                };
                for (t, v) in ts.iter().zip(values) {
                    csv.row(&[num(g), num(*t), num(v)]);
                }
            }
            Ok(csv.finish())
        }
        Command::Moments { gamma } => {
            csv_only("moments")?;
            check_gammas("--gamma", gamma)?;
            if gamma.contains(&0.0) {
                return Err(usage("--gamma", "gamma = 0 has no moments".into()));
            }
            let mut csv = Csv::new(&["gamma", "mean", "variance", "skewness", "kurtosis", "excess_kurtosis"]);
            for &g in gamma {
                let m = law.moments(g)?;
                csv.row(&[num(g), num(m.mean), num(m.variance), num(m.skewness), num(m.kurtosis), num(m.excess_kurtosis)]);
            }
            Ok(csv.finish())
        }
        Command::Tails { gamma, grid, only, series_terms } => {
            csv_only("tails")?;
            check_gammas("--gamma", gamma)?;
            if *series_terms < 100 {
                return Err(usage("--series-terms", format!("needs at least 100, got {series_terms}")));
            }
            let mut text = String::new();
            if *only != TailsPart::Constants {
                let ts = grid.points()?;
                let mut csv = Csv::new(&["gamma", "t", "exact", "right_tail", "left_tail"]);
                for &g in gamma {
                    let exact = law.curve(&ts, g)?;
                    for (t, p) in ts.iter().zip(exact) {
                        csv.row(&[
                            num(g),
                            num(*t),
                            num(p.cdf),
                            num(tails::right_tail(*t, g)?),
                            num(tails::left_tail(*t, g)?),
                        ]);
                    }
                }
                text.push_str(&csv.finish());
            }
            if *only == TailsPart::Both {
                text.push('\n');
            }
            if *only != TailsPart::Curve {
                let mut csv = Csv::new(&["gamma", "c1", "c0_integral", "c0_series"]);
                for &g in gamma {
                    let c = TailCoefficients::compute(g, *series_terms)?;
                    csv.row(&[num(g), num(c.c1), num(c.c0_integral), num(c.c0_series)]);
                }
                text.push_str(&csv.finish());
            }
            Ok(text)
        }
        Command::Mth { m, grid } => {
            csv_only("mth")?;
            if !(1..=ginedge::edgelaw::MAX_ORDER).contains(m) {
                return Err(usage("--m", format!("must lie in 1..={}, got {m}", ginedge::edgelaw::MAX_ORDER)));
            }
            let ts = grid.points()?;
            let rows = ginedge::par::try_map(exec, &ts, |&t| law.mth_largest_cdfs(*m, t))?;
            let names: Vec<String> = (1..=*m).map(|k| format!("F_{k}")).collect();
            let mut header = vec!["t"];
            header.extend(names.iter().map(String::as_str));
            let mut csv = Csv::new(&header);
            for (t, row) in ts.iter().zip(rows) {
                let mut fields = vec![num(*t)];
                fields.extend(row.into_iter().map(num));
                csv.row(&fields);
            }
            Ok(csv.finish())
        }
        Command::Gen { t, lambda } => {
            csv_only("gen")?;
            if !t.is_finite() {
                return Err(usage("--t", format!("value {t} is not finite")));
            }
            check_gammas("--lambda", lambda)?;
            let values = ginedge::par::try_map(exec, lambda, |&l| law.generating_function(*t, l))?;
            let mut csv = Csv::new(&["lambda", "generating_function"]);
            for (l, v) in lambda.iter().zip(values) {
                csv.row(&[num(*l), num(v)]);
            }
            Ok(csv.finish())
        }
        Command::Mc { gamma, matrix_size, samples, seed } => {
            check_gammas("--gamma", &[*gamma])?;
            if !(MIN_DIM..=MAX_DIM).contains(matrix_size) {
                return Err(usage("--matrix-size", format!("must lie in {MIN_DIM}..={MAX_DIM}, got {matrix_size}")));
            }
            if *samples == 0 {
                return Err(usage("--samples", "must be positive".into()));
            }
            let cfg = McConfig { n: *matrix_size, gamma: *gamma, num_samples: *samples, seed: *seed };
            let run = mc::run(cfg, exec)?;
            let ks = mc::ks_distance(&run, |t| Ok(law.cdf(t, *gamma)?.cdf), exec)?;
            let mean = run.mean();
            match format.unwrap_or(Format::Json) {
                Format::Json => Ok(json(&McReport { run: &run, ks_distance: ks, mean }) + "\n"),
                Format::Csv => {
                    let mut csv = Csv::new(&["matrix_size", "gamma", "samples", "seed", "empty_samples", "mean", "ks_distance"]);
                    csv.row(&[
                        matrix_size.to_string(),
                        num(*gamma),
                        samples.to_string(),
                        seed.to_string(),
                        run.empty_samples.to_string(),
                        mean.map_or("nan".into(), num),
                        num(ks),
                    ]);
                    Ok(csv.finish())
                }
            }
        }
        Command::Check { grid, tol } => {
            if grid != "default" {
                return Err(usage("--grid", format!("unknown grid {grid:?}; only \"default\" exists")));
            }
            if let Some(tol) = tol {
                if !(*tol > 0.0 && tol.is_finite()) {
                    return Err(usage("--tol", format!("must be positive, got {tol}")));
                }
            }
            let mut reports = identities::run_default_grid(exec)?;
            if let Some(tol) = tol {
                for r in &mut reports {
                    r.tolerance = *tol;
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => reports
                    .iter()
                    .map(|r| json(&CheckLine { report: r, passed: r.passed() }) + "\n")
                    .collect(),
                Format::Csv => {
                    let mut csv = Csv::new(&["name", "params", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "passed"]);
                    for r in &reports {
                        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
                        csv.row(&[
                            r.name.clone(),
                            params.join(";"),
                            num(r.lhs),
                            num(r.rhs),
                            num(r.abs_err),
                            num(r.rel_err),
                            num(r.tolerance),
                            r.passed().to_string(),
                        ]);
                    }
                    csv.finish()
                }
            };
            if failed > 0 {
                emit(common, &text).map_err(Failure::Io)?;
                return Err(Failure::Checks(failed));
            }
            Ok(text)
        }
        Command::Table1 { gamma } => {
            csv_only("table1")?;
            check_gammas("--gamma", gamma)?;
            let mut csv = Csv::new(&["gamma", "statistic", "computed", "reference", "deviation", "tolerance", "within"]);
            for &g in gamma {
                let Some((_, reference)) = TABLE1.iter().find(|(rg, _)| *rg == g) else {
                    return Err(usage("--gamma", format!("no reference row for {g}; choose from 1, 0.8, 0.6, 0.4")));
                };
                let m = law.moments(g)?;
                let computed = [m.mean, m.variance, m.skewness, m.excess_kurtosis];
                for i in 0..4 {
                    let dev = computed[i] - reference[i];
                    csv.row(&[
                        num(g),
                        TABLE1_NAMES[i].to_string(),
                        num(computed[i]),
                        num(reference[i]),
                        num(dev),
                        num(TABLE1_TOL[i]),
                        (dev.abs() <= TABLE1_TOL[i]).to_string(),
                    ]);
                }
            }
            Ok(csv.finish())
        }
    }
}

fn emit(common: &Common, text: &str) -> std::io::Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let common = cli.common.clone();
    match run(cli) {
        Ok(text) => match emit(&common, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(inv)) => {
            eprintln!("error: invalid {}: {}", inv.flag, inv.message);
            ExitCode::from(1)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Checks(n)) => {
            eprintln!("{n} identity checks failed");
            ExitCode::from(3)
        }
    }
}
