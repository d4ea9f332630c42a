use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dualres::analysis::csv::{format_bool, format_float, Table};
use dualres::analysis::figures::{
    contour_table, figure, level_sweep, level_table, FigureOptions, FIGURE_NAMES,
};
use dualres::analysis::roots::{find_switchoff, find_zz_zero, CouplingKind, RootReport, SwitchOff};
use dualres::analysis::sweep::{
    run_sweep, Axis, Base, Quantity, SweepOptions, SweepSpec, DEFAULT_POINTS_1D, DEFAULT_POINTS_2D,
};
use dualres::analysis::validate::{oracle_equivalence, OracleOptions};
use dualres::config::Config;
use dualres::hamiltonian::{build_hamiltonian, BuildOptions, CouplingConvention, TruncationScheme};
use dualres::spectrum::{spectrum_at, zz_numeric};
use dualres::zz::ZzOptions;
use dualres::Error;

#[derive(Parser, Debug)]
#[command(
    name = "dualres",
    version,
    about = "Two transmons coupled through two resonators"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Parameter file (`key = value`); the reference parameters otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (directory for `figure`); stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Points per axis, overriding sweep and recipe defaults.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Include the cross-Kerr corrections in the static ZZ.
    #[arg(long, global = true)]
    cross_kerr: bool,

    /// Add diagonalization-based ZZ columns.
    #[arg(long, global = true)]
    numeric_zz: bool,

    /// Levels kept per mode, as a,x,y,b.
    #[arg(long, global = true, value_parser = parse_truncation)]
    truncation: Option<TruncationScheme>,

    /// Drop counter-rotating coupling terms.
    #[arg(long, global = true)]
    rwa: bool,

    /// Matrix elements of the qubit ladder operators.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Bosonic)]
    convention: Convention,

    /// Use the x ↔ y symmetric form of the mixed third-order ZZ term.
    #[arg(long, global = true)]
    symmetric_third_order: bool,

    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        conflicts_with = "omega_x"
    )]
    phi_x: Option<f64>,

    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        conflicts_with = "omega_y"
    )]
    phi_y: Option<f64>,

    /// Qubit x frequency in GHz (placed on the flux branch below its maximum).
    #[arg(long, global = true)]
    omega_x: Option<f64>,

    #[arg(long, global = true)]
    omega_y: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Convention {
    Bosonic,
    Uniform,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    #[value(name = "g_d")]
    Gd,
    #[value(name = "g_cr")]
    Gcr,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// variable:start:stop[:points] with variable one of phi_x, phi_y,
    /// omega_x, omega_y.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,

    /// Second axis for 2D grids.
    #[arg(long, allow_hyphen_values = true, requires = "sweep")]
    sweep2: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Labelled eigenenergies at one operating point, or level curves along a sweep.
    Spectrum {
        #[command(flatten)]
        sweep: SweepArgs,

        /// Write the Hamiltonian matrix (non-zero entries) to this file.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },
    /// Decoupled frequencies and effective qubit-qubit couplings.
    Coupling {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Static ZZ breakdown.
    Zz {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Zeros of the effective qubit-qubit coupling.
    Switchoff {
        #[command(flatten)]
        sweep: SweepArgs,

        #[arg(long, value_enum, default_value_t = Which::Gcr)]
        which: Which,
    },
    /// Zeros of the analytic static ZZ along one axis.
    Zzzero {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Datasets behind a figure panel (or `all`).
    Figure { name: String },
    /// Compare analytic and numeric static ZZ away from poles.
    Validate,
}

const DEFAULT_SWEEP: &str = "omega_y:4.2:5.0";

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. }
            | Error::Sweep(_)
            | Error::Truncation(_)
            | Error::IndexOutOfRange(_) => Failure::Input(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(format!("i/o error: {e}"))
    }
}

fn parse_truncation(s: &str) -> Result<TruncationScheme, String> {
    let n: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{t:?} is not a level count"))
        })
        .collect::<Result<_, _>>()?;
    match n[..] {
        [a, x, y, b] => TruncationScheme::new(a, x, y, b).map_err(|e| e.to_string()),
        _ => Err(format!("expected four counts a,x,y,b, got {s:?}")),
    }
}

impl Common {
    fn build(&self) -> BuildOptions {
        let convention = match self.convention {
            Convention::Bosonic => CouplingConvention::Bosonic,
            Convention::Uniform => CouplingConvention::Uniform,
        };
        BuildOptions {
            rwa: self.rwa,
            convention,
        }
    }

    fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            symmetric_third_order: self.symmetric_third_order,
            truncation: self.truncation.unwrap_or_default(),
            build: self.build(),
        }
    }

    fn zz(&self) -> ZzOptions {
        ZzOptions {
            include_cross_kerr: self.cross_kerr,
            symmetric_third_order: self.symmetric_third_order,
        }
    }

    fn config(&self) -> Result<Config, Failure> {
        let config = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::reference(),
        };
        for w in &config.warnings {
            log::warn!("{w}");
        }
        Ok(config)
    }

    fn base(&self, config: &Config) -> Base {
        let mut base = Base::new(config.params);
        if let Some(v) = self.phi_x {
            base = base.set(dualres::analysis::sweep::SweepVariable::PhiX, v);
        }
        if let Some(v) = self.phi_y {
            base = base.set(dualres::analysis::sweep::SweepVariable::PhiY, v);
        }
        if let Some(v) = self.omega_x {
            base = base.with_omega_x(v);
        }
        if let Some(v) = self.omega_y {
            base = base.with_omega_y(v);
        }
        base
    }

    fn spec(&self, args: &SweepArgs, default: Option<&str>) -> Result<Option<SweepSpec>, Failure> {
        let Some(first) = args.sweep.as_deref().or(default) else {
            return Ok(None);
        };
        let (d1, d2) = match args.sweep2 {
            Some(_) => (DEFAULT_POINTS_2D, DEFAULT_POINTS_2D),
            None => (DEFAULT_POINTS_1D, DEFAULT_POINTS_1D),
        };
        let axis = |s: &str, d: usize| -> Result<Axis, Failure> {
            let mut a = Axis::parse(s, d)?;
            if let Some(n) = self.grid {
                a.points = n;
            }
            Ok(a)
        };
        let spec = match &args.sweep2 {
            Some(second) => SweepSpec::grid(axis(first, d1)?, axis(second, d2)?),
            None => SweepSpec::line(axis(first, d1)?),
        };
        spec.validate()?;
        Ok(Some(spec))
    }

    fn emit(&self, table: &Table) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, table.to_csv_string())?,
            None => io::stdout()
                .lock()
                .write_all(table.to_csv_string().as_bytes())?,
        }
        Ok(())
    }
}

fn point_spectrum(common: &Common, config: &Config, dump: Option<&Path>) -> Result<Table, Failure> {
    let g = common.base(config).grid_point();
    let trunc = common.truncation.unwrap_or_default();
    let build = common.build();
    if let Some(path) = dump {
        let h = build_hamiltonian(&g.point, &trunc, &build)?;
        h.write_csv(io::BufWriter::new(fs::File::create(path)?))?;
    }
    let s = spectrum_at(&g.point, &trunc, &build)?;
    if let Ok(z) = zz_numeric(&s) {
        eprintln!(
            "numeric ZZ: {} MHz{}",
            format_float(z.value * 1e3),
            if z.unreliable {
                " (unreliable: hybridized state)"
            } else {
                ""
            }
        );
    }
    let mut t = Table::new([
        "phi_x",
        "phi_y",
        "label",
        "energy_ghz",
        "overlap",
        "hybridized",
    ]);
    for (k, &e) in s.eigen.values.iter().enumerate() {
        let overlap = s.overlaps[k];
        t.push(vec![
            format_float(g.phi_x),
            format_float(g.phi_y),
            s.label(k).to_string(),
            format_float(e),
            format_float(overlap),
            format_bool(overlap < dualres::spectrum::HYBRIDIZATION_THRESHOLD),
        ]);
    }
    Ok(t)
}

fn roots_table(report: &RootReport) -> Table {
    for d in &report.diagnostics {
        log::warn!("{d}");
    }
    if report.degenerate {
        eprintln!("function vanishes on the whole grid");
    }
    let mut t = Table::new([
        "root",
        "bracket_lo",
        "bracket_hi",
        "grid_lo",
        "grid_hi",
        "residual_hz",
    ]);
    for r in &report.roots {
        t.push(vec![
            format_float(r.location),
            format_float(r.bracket.0),
            format_float(r.bracket.1),
            format_float(r.grid_bracket.0),
            format_float(r.grid_bracket.1),
            format_float(r.residual * 1e9),
        ]);
    }
    eprintln!("{} root(s) ({})", report.roots.len(), report.method);
    t
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let common = &cli.common;
    let config = common.config()?;
    let base = common.base(&config);
    let opts = common.sweep_options();
    match &cli.command {
        Command::Spectrum { sweep, dump_matrix } => match common.spec(sweep, None)? {
            None => common.emit(&point_spectrum(common, &config, dump_matrix.as_deref())?),
            Some(spec) => {
                if dump_matrix.is_some() {
                    return Err(Failure::Input(
                        "--dump-matrix needs a single operating point".into(),
                    ));
                }
                let levels = level_sweep(&base, &spec, &opts)?;
                for w in &levels.warnings {
                    log::warn!("{w}");
                }
                let labels: Vec<_> = dualres::analysis::figures::SINGLE_EXCITATIONS
                    .iter()
                    .chain(dualres::analysis::figures::DOUBLE_EXCITATIONS.iter())
                    .copied()
                    .collect();
                common.emit(&level_table(&levels, &labels)?)
            }
        },
        Command::Coupling { sweep } => {
            let spec = common
                .spec(sweep, Some(DEFAULT_SWEEP))?
                .expect("default sweep");
            let q = [
                Quantity::Gd,
                Quantity::Gcr,
                Quantity::Induced,
                Quantity::Shifts,
            ];
            common.emit(&run_sweep(&base, &spec, &q, &opts)?)
        }
        Command::Zz { sweep } => {
            let spec = common
                .spec(sweep, Some(DEFAULT_SWEEP))?
                .expect("default sweep");
            let mut q = vec![if common.cross_kerr {
                Quantity::ZzCrossKerr
            } else {
                Quantity::Zz
            }];
            if common.numeric_zz {
                q.push(Quantity::NumericZz);
            }
            common.emit(&run_sweep(&base, &spec, &q, &opts)?)
        }
        Command::Switchoff { sweep, which } => {
            let spec = common
                .spec(sweep, Some(DEFAULT_SWEEP))?
                .expect("default sweep");
            let kind = match which {
                Which::Gd => CouplingKind::Gd,
                Which::Gcr => CouplingKind::Gcr,
            };
            match find_switchoff(&base, &spec, kind)? {
                SwitchOff::Roots(r) => common.emit(&roots_table(&r)),
                SwitchOff::Contour(c) => {
                    for d in &c.diagnostics {
                        log::warn!("{d}");
                    }
                    let second = spec.second.expect("2D grid").variable;
                    eprintln!("{} contour chain(s)", c.chains.len());
                    common.emit(&contour_table(&c, spec.first.variable, second))
                }
            }
        }
        Command::Zzzero { sweep } => {
            let spec = common
                .spec(sweep, Some(DEFAULT_SWEEP))?
                .expect("default sweep");
            common.emit(&roots_table(&find_zz_zero(&base, &spec, &common.zz())?))
        }
        Command::Figure { name } => {
            let names: Vec<&str> = if name == "all" {
                FIGURE_NAMES.to_vec()
            } else {
                vec![name.as_str()]
            };
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)?;
            let fopts = FigureOptions {
                grid: common.grid,
                sweep: opts,
            };
            for n in names {
                for ds in figure(n, &config.params, &fopts)? {
                    let path = dir.join(format!("{}.csv", ds.name));
                    fs::write(&path, ds.table.to_csv_string())?;
                    eprintln!("wrote {} ({} rows)", path.display(), ds.table.rows.len());
                }
            }
            Ok(())
        }
        Command::Validate => {
            let mut o = OracleOptions {
                truncation: opts.truncation,
                build: opts.build,
                ..Default::default()
            };
            o.zz.symmetric_third_order = common.symmetric_third_order;
            if let Some(n) = common.grid {
                o.axis.points = n;
            }
            let report = oracle_equivalence(&config.params, &o)?;
            common.emit(&report.table())?;
            eprintln!(
                "oracle equivalence: {} of {} points within tolerance, {} excluded near poles",
                report.samples.len() - report.failures(),
                report.samples.len(),
                report.excluded
            );
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Numeric(
                    "analytic and numeric static ZZ disagree".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
