use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};
use sympwave_harness::config::EXPERIMENTS;
use sympwave_harness::sweep::keys_of;
use sympwave_harness::{emit, fit_slope, run_sweep, to_csv, Format, HarnessError, Result, Spec};

fn about(experiment: &str) -> &'static str {
    match experiment {
        "cfun" => "Plancherel density |c(λ)|^-2 along a ray",
        "stphase" => "endpoint stationary-phase expansion against direct quadrature",
        "model" => "model integral ξ(r,h) and its remainder decomposition",
        "kernel" => "rank-one shifted wave kernel k_t(R)",
        "dispersive" => "Kunze–Stein dispersive bound against t",
        _ => "",
    }
}

fn cli() -> Command {
    let mut cmd = Command::new("sympwave")
        .about("Parameter sweeps for the sympwave numeric core")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("`key = value` file; flags override it"))
        .arg(Arg::new("out").long("out").short('o').global(true).value_name("FILE").help("CSV output (default stdout)"))
        .arg(Arg::new("svg").long("svg").global(true).value_name("FILE").help("also write a log-log SVG chart"))
        .arg(
            Arg::new("fit")
                .long("fit")
                .global(true)
                .value_name("X:Y")
                .help("print the log-log slope of column Y against X to stderr"),
        );
    for exp in EXPERIMENTS {
        let mut sub = Command::new(exp).about(about(exp));
        for key in keys_of(exp) {
            sub = sub.arg(Arg::new(*key).long(*key).value_name("VALUE").allow_hyphen_values(true));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn spec_from(experiment: &str, sub: &ArgMatches, config: Option<&String>) -> Result<Spec> {
    let mut spec = Spec::new(experiment)?;
    for key in keys_of(experiment) {
        if let Some(v) = sub.get_one::<String>(key) {
            spec.set(key, v);
        }
    }
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io { path: path.clone(), message: e.to_string() })?;
        spec.layer_config(&text)?;
    }
    Ok(spec)
}

fn run(matches: &ArgMatches) -> Result<()> {
    let (experiment, sub) = matches.subcommand().expect("subcommand required");
    let spec = spec_from(experiment, sub, sub.get_one::<String>("config"))?;
    let table = run_sweep(&spec)?;

    match sub.get_one::<String>("out") {
        Some(path) => emit(&table, Format::Csv, &PathBuf::from(path))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(to_csv(&table).as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| HarnessError::Io { path: "<stdout>".into(), message: e.to_string() })?;
        }
    }
    if let Some(path) = sub.get_one::<String>("svg") {
        emit(&table, Format::Svg, &PathBuf::from(path))?;
    }
    if let Some(pair) = sub.get_one::<String>("fit") {
        let (x, y) = pair
            .split_once(':')
            .ok_or_else(|| HarnessError::usage("fit", format!("`{pair}` is not X:Y")))?;
        let f = fit_slope(&table, x, y)?;
        eprintln!("slope {} intercept {} stderr {} npoints {}", f.slope, f.intercept, f.stderr, f.npoints);
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sympwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
