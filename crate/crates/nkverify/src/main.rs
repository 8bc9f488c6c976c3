use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nkverify::{
    report_exit_code, run_classify, run_immersion_report, run_structure_suite, sample, Backend, Format, RunConfig,
    VerificationReport, VerifyError,
};

#[derive(Parser)]
#[command(name = "nkverify", version, about = "Verification reports for the nearly Kähler S³×S³")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identities of g, J, P, G, the connection and the curvature.
    Structure(Common),
    /// Induced geometry of a catalog immersion (f1..f8) or a descriptor file.
    Immersion {
        source: String,
        #[command(flatten)]
        common: Common,
    },
    /// Roots of the classification cubic and their curvatures.
    Classify(Common),
    /// Residual distribution of a single check.
    Sample {
        #[arg(long)]
        check: String,
        /// Immersion for point checks.
        #[arg(long)]
        immersion: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draws (structure, sample) or chart points (immersion).
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance for closed-form identities.
    #[arg(long)]
    tol: Option<f64>,
    /// Tolerance for chart-derived quantities.
    #[arg(long)]
    tol_fd: Option<f64>,
    #[arg(long, default_value = "float")]
    backend: String,
    #[arg(long, default_value = "text")]
    format: String,
    /// Omit wall time, making reports byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

impl Common {
    fn config(&self, default_samples: usize) -> Result<RunConfig, VerifyError> {
        let base = RunConfig::default();
        let cfg = RunConfig {
            seed: self.seed,
            samples: self.samples.unwrap_or(default_samples),
            tol_algebraic: self.tol.unwrap_or(base.tol_algebraic),
            tol_fd: self.tol_fd.unwrap_or(base.tol_fd),
            backend: self.backend.parse::<Backend>()?,
            format: self.format.parse::<Format>()?,
            threads: None,
            timing: !self.no_timing,
        }
        .with_env_threads()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(VerificationReport, Format), VerifyError> {
    let (cfg, report) = match &cli.command {
        Command::Structure(c) => {
            let cfg = c.config(10_000)?;
            let r = run_structure_suite(&cfg)?;
            (cfg, r)
        }
        Command::Immersion { source, common } => {
            let cfg = common.config(50)?;
            let r = run_immersion_report(source, &cfg)?;
            (cfg, r)
        }
        Command::Classify(c) => {
            let cfg = c.config(1)?;
            let r = run_classify(&cfg)?;
            (cfg, r)
        }
        Command::Sample { check, immersion, common } => {
            let cfg = common.config(1000)?;
            let r = sample(&cfg, check, immersion.as_deref())?;
            (cfg, r)
        }
    };
    Ok((report, cfg.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((report, format)) => {
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report_exit_code(&report) as u8)
        }
        Err(e) => {
            eprintln!("nkverify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
