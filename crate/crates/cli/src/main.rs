mod args;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use zerolab::dist::{poisson_truncation, POISSON_TAIL};
use zerolab::text::split_basis;
use zerolab::{
    density_estimate, exact_distribution, gof_test, monte_carlo_distribution, parse_ring, parse_space_spec,
    poisson_limit_report, theoretical_distribution, Budget, DensityConfig, Error, Filtration, RunOptions,
    SampleSpace, SpaceSpec,
};

use args::{Cli, Command, DistCommand, Format, Method, SpaceArgs, SpaceCommand};
use render::Rendered;

/// Process exit status for each failure class.
const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = rendered.format(cli.global.format);
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn run_options(cli: &Cli) -> RunOptions {
    let opts = RunOptions::default().with_budget(Budget(cli.global.budget));
    match cli.global.workers {
        Some(w) => opts.with_workers(w as usize),
        None => opts,
    }
}

fn parse_space(tokens: &[String]) -> zerolab::Result<SpaceSpec> {
    match tokens {
        [spec] => parse_space_spec(spec),
        [kind, value] => match kind.as_str() {
            "custom-basis" => Ok(SpaceSpec::CustomBasis(split_basis(value))),
            "custom-file" => Ok(SpaceSpec::CustomFile(value.into())),
            "total" | "pervar" => {
                let d: u32 = value
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("degree '{value}' is not a nonnegative integer")))?;
                Ok(if kind == "total" {
                    SpaceSpec::TotalDegree(d)
                } else {
                    SpaceSpec::PerVariableDegree(d)
                })
            }
            _ => Err(Error::InvalidArgument(format!(
                "unknown space kind '{kind}', expected custom-basis, custom-file, total or pervar"
            ))),
        },
        _ => Err(Error::InvalidArgument("--space takes one or two values".into())),
    }
}

fn build_space(args: &SpaceArgs) -> zerolab::Result<SampleSpace> {
    let ring = parse_ring(&args.ring)?;
    let spec = parse_space(&args.space)?;
    SampleSpace::from_spec(&ring, args.n as usize, &spec)
}

fn run(cli: &Cli) -> zerolab::Result<Rendered> {
    let opts = run_options(cli);
    match &cli.command {
        Command::Space(SpaceCommand::Check(a)) => {
            let space = build_space(a)?;
            let budget = opts.budget;
            let extends = space.extends_ring(budget)?;
            let contains = if space.ring().is_field() {
                Some(space.contains_functions(budget)?)
            } else {
                None
            };
            let coverage = match space.function_coverage_count(budget) {
                Ok(c) => Some(c),
                Err(e @ Error::BudgetExceeded { .. }) => {
                    eprintln!("note: coverage count skipped: {e}");
                    None
                }
                Err(e) => return Err(e),
            };
            Ok(render::space_check(&space, extends, contains, coverage))
        }
        Command::Space(SpaceCommand::Vanish(a)) => {
            let space = build_space(&a.space)?;
            Ok(render::vanish(&space, a.max_points as usize, opts.budget)?)
        }
        Command::Dist(DistCommand::Exact(a)) => {
            let space = build_space(&a.space)?;
            Ok(Rendered::distribution(exact_distribution(&space, a.m as usize, &opts)?))
        }
        Command::Dist(DistCommand::Mc(a)) => {
            let space = build_space(&a.system.space)?;
            let d = monte_carlo_distribution(
                &space,
                a.system.m as usize,
                a.sampling.samples,
                a.sampling.seed,
                &opts,
            )?;
            Ok(Rendered::distribution(d))
        }
        Command::Dist(DistCommand::Theory(a)) => {
            Ok(Rendered::distribution(theoretical_distribution(a.q, a.n as usize, a.m as usize)?))
        }
        Command::Dist(DistCommand::Compare(a)) => {
            let space = build_space(&a.system.space)?;
            let ring = space.ring();
            if !ring.is_field() {
                return Err(Error::Precondition(format!(
                    "the binomial law is stated over fields, {ring} is not one"
                )));
            }
            let (n, m) = (space.nvars(), a.system.m as usize);
            let model = theoretical_distribution(ring.order(), n, m)?;
            let observed = match a.method {
                Method::Exact => exact_distribution(&space, m, &opts)?,
                Method::Mc => monte_carlo_distribution(&space, m, a.sampling.samples, a.sampling.seed, &opts)?,
            };
            let gof = match a.method {
                Method::Exact => None,
                Method::Mc => match gof_test(&observed, &model) {
                    Ok(r) => Some(r),
                    Err(e @ Error::TooFewBins(_)) => {
                        eprintln!("note: goodness of fit skipped: {e}");
                        None
                    }
                    Err(e) => return Err(e),
                },
            };
            Ok(render::compare(observed, model, gof))
        }
        Command::Density(a) => {
            let ring = parse_ring(&a.ring)?;
            let filtration = Filtration::full(&ring, a.n as usize, a.t_max)?;
            let config = DensityConfig {
                m: a.m as usize,
                tol: a.tol,
                stop_early: !a.no_early_stop,
                point: a.point.clone(),
            };
            let est = density_estimate(&filtration, &config, &opts)?;
            if let Some(e) = &est.error {
                let done: Vec<String> = est.per_t.iter().map(|s| s.t.to_string()).collect();
                eprintln!("note: truncations completed before the failure: [{}]", done.join(","));
                return Err(e.clone());
            }
            Ok(render::density(&ring, a.n as usize, a.t_max, est))
        }
        Command::Poisson(a) => {
            let rows = poisson_limit_report(a.n as usize, &a.q)?;
            let meta = json!({
                "n": a.n,
                "m": a.n,
                "poisson_tail": POISSON_TAIL,
                "poisson_terms": poisson_truncation(POISSON_TAIL) + 1,
            });
            Ok(render::poisson(meta, rows))
        }
    }
}

impl Rendered {
    pub fn format(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Table => self.table.clone(),
        }
    }
}
