use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use adamsplit::assembly::{assemble_h2, load_stem_data};
use adamsplit::lines::{verify_chart, VanishingLine};
use adamsplit::module::{sphere, stunted_projective, y_module, GradedModule};
use adamsplit::resolution::minimal_resolution;
use adamsplit::splitrange::{range_tsv, reconcile_table, ConstraintVariant};

const AFTER_HELP: &str = "\
Formats:
  chart TSV      header `s<TAB>t<TAB>dim`, one row per nonzero bidegree, sorted by (t-s, s)
  chart SVG      dots at (t-s, s), vertical segments for h0 products
  violations     same columns as the chart TSV, followed by `# ` summary lines
  module text    `gen <label> <degree>` and `sq <i> <label> = <label>+<label>` lines,
                 `# window <lo> <hi>` and `# note <text>` comments
  stem data      `stem <i> = <term> + <term>` with terms Z, Z/m, (Z/m)^r; `#` comments

Module selectors: sphere | stunted:N (bottom cell in degree N) | y-module:n | file:PATH

Exit codes: 0 success, 1 verification failure, 2 usage or input error.";

#[derive(Debug, Parser)]
#[command(name = "adamsplit", version, about = "Adams E2 charts and splitting-range bookkeeping", after_help = AFTER_HELP)]
struct Cli {
    /// Upper bound on worker threads used by the resolver.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resolve a module and write its Ext chart.
    Resolve {
        #[arg(long)]
        module: ModuleSelector,
        #[arg(long)]
        smax: usize,
        #[arg(long)]
        tmax: i32,
        /// Write the chart TSV here instead of stdout.
        #[arg(long)]
        tsv: Option<PathBuf>,
        /// Also write an SVG drawing of the chart.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check that a chart vanishes above a line of slope 1/m.
    Vanishing {
        #[arg(long)]
        module: ModuleSelector,
        #[arg(long)]
        smax: usize,
        #[arg(long)]
        tmax: i32,
        /// Slope denominator m.
        #[arg(long, default_value_t = 2)]
        slope: i64,
        /// x-intercept of the line; defaults to 2n-3 for the built-in modules.
        #[arg(long, allow_hyphen_values = true)]
        intercept: Option<i64>,
        /// Stem t-s exempt from the check; may be repeated.
        #[arg(long = "exception", allow_hyphen_values = true)]
        exceptions: Vec<i32>,
    },
    /// Maximize l over k for n = 0..=n-max.
    Splitrange {
        #[arg(long)]
        n_max: i64,
        /// `star=<0|1>,ddag=<-4|-5|-6>`; star=1,ddag=-4 is the displayed form.
        #[arg(long, default_value = "star=1,ddag=-4")]
        variant: ConstraintVariant,
        /// Print the comparison of all six variants with the published values instead.
        #[arg(long)]
        reconcile: bool,
    },
    /// Assemble H2 from coker(J) stem data.
    Assemble {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        stems: PathBuf,
    },
    /// Print a module in the text format.
    DumpModule {
        #[arg(long)]
        module: ModuleSelector,
        #[arg(long)]
        tmax: i32,
    },
}

#[derive(Clone, Debug)]
enum ModuleSelector {
    Sphere,
    Stunted(i32),
    Y(u32),
    File(PathBuf),
}

impl FromStr for ModuleSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "sphere" {
            return Ok(ModuleSelector::Sphere);
        }
        if let Some(n) = s.strip_prefix("stunted:") {
            return n
                .parse()
                .map(ModuleSelector::Stunted)
                .map_err(|_| format!("bad bottom degree `{n}`"));
        }
        if let Some(n) = s.strip_prefix("y-module:") {
            return n
                .parse()
                .map(ModuleSelector::Y)
                .map_err(|_| format!("bad n `{n}`"));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(ModuleSelector::File(PathBuf::from(p)));
        }
        Err(format!(
            "unknown module `{s}`; expected sphere, stunted:N, y-module:n or file:PATH"
        ))
    }
}

impl fmt::Display for ModuleSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSelector::Sphere => write!(f, "sphere"),
            ModuleSelector::Stunted(n) => write!(f, "stunted:{n}"),
            ModuleSelector::Y(n) => write!(f, "y-module:{n}"),
            ModuleSelector::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl ModuleSelector {
    fn build(&self, tmax: i32) -> Result<GradedModule> {
        Ok(match self {
            ModuleSelector::Sphere => sphere(0, tmax)?,
            ModuleSelector::Stunted(n) => stunted_projective(*n, tmax.max(*n))?,
            ModuleSelector::Y(n) => y_module(*n, tmax.max(2 * *n as i32))?,
            ModuleSelector::File(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("module");
                GradedModule::from_text(name, &text).with_context(|| format!("parsing {}", p.display()))?
            }
        })
    }

    fn default_intercept(&self) -> Option<i64> {
        match self {
            ModuleSelector::Sphere => Some(-3),
            ModuleSelector::Stunted(n) => Some(*n as i64 - 3),
            ModuleSelector::Y(n) => Some(2 * *n as i64 - 3),
            ModuleSelector::File(_) => None,
        }
    }
}

enum Outcome {
    Pass,
    Fail,
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Resolve {
            module,
            smax,
            tmax,
            tsv,
            svg,
        } => {
            let m = module.build(tmax)?;
            let chart = minimal_resolution(&m, smax, tmax)?.ext_chart();
            for note in m.notes() {
                eprintln!("note: {note}");
            }
            write_or_print(&tsv, &chart.to_tsv())?;
            if let Some(p) = svg {
                fs::write(&p, chart.to_svg()).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(Outcome::Pass)
        }
        Command::Vanishing {
            module,
            smax,
            tmax,
            slope,
            intercept,
            exceptions,
        } => {
            if slope <= 0 {
                bail!("--slope must be positive");
            }
            let intercept = match intercept.or_else(|| module.default_intercept()) {
                Some(c) => c,
                None => bail!("--intercept is required for {module}"),
            };
            let line = VanishingLine::with_intercept(slope, intercept);
            let m = module.build(tmax)?;
            let chart = minimal_resolution(&m, smax, tmax)?.ext_chart();
            let report = verify_chart(&chart, |s, t| line.vanishes(s, t), &exceptions);
            print!("{}", report.to_tsv());
            println!(
                "# line m={} intercept={intercept}; checked {} bidegrees; {} violations",
                line.m,
                report.checked,
                report.violations.len()
            );
            for note in m.notes() {
                println!("# note: {note}");
            }
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Splitrange {
            n_max,
            variant,
            reconcile,
        } => {
            if reconcile {
                print!("{}", reconcile_table(&ConstraintVariant::grid()).to_tsv());
            } else {
                if n_max < 0 {
                    bail!("--n-max must be nonnegative");
                }
                print!("{}", range_tsv(n_max, variant)?);
            }
            Ok(Outcome::Pass)
        }
        Command::Assemble { n, g, stems } => {
            let data = load_stem_data(&stems)?;
            print!("{}", assemble_h2(n, g, &data)?.render());
            Ok(Outcome::Pass)
        }
        Command::DumpModule { module, tmax } => {
            print!("{}", module.build(tmax)?.to_text());
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
