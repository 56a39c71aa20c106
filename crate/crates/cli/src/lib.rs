//! The `learncurve` command line.
//!
//! Exit codes: 0 on success, 1 when the scenario or arguments fail
//! validation, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use learncurve_core::analysis::ComponentSelection;
use learncurve_core::io::{builtin_presets, load_scenario, scenario_to_json, FigureDataset, FigureId, LoadMode, PresetCatalog};
use learncurve_core::{CostCategory, DeploymentState, Error, LearningRateBand, Region, Scenario, StackVariant, Structure};
use learncurve_service::ops;

/// Colon-separated (`;` on Windows) directories with extra `*.json` presets.
pub const PRESET_DIR_VAR: &str = "LEARNCURVE_PRESET_DIR";

#[derive(Debug, Parser)]
#[command(name = "learncurve", version, about = "Electrolysis cost projections under alternative learning structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project stack and BoP/EPC costs at a deployment state.
    Project(ProjectCmd),
    /// Capacity and learning investment needed to reach a cost target.
    Target(TargetCmd),
    /// Capital-cost contribution to the levelized cost of hydrogen.
    Lcoh(LcohCmd),
    /// Cost trajectory over a deployment axis for a learning-rate band.
    Sweep(SweepCmd),
    /// Emit the source data of a benchmark figure.
    Figure(FigureCmd),
    /// List available presets, or print one as a scenario document.
    Presets(PresetsCmd),
    /// Run the HTTP API.
    Serve(ServeCmd),
}

#[derive(Debug, Args)]
struct SourceOpts {
    /// Scenario document (JSON).
    #[arg(long, value_name = "PATH", conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    /// Named preset (see `learncurve presets`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Warn about unknown keys instead of rejecting the document.
    #[arg(long)]
    lax: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputOpts {
    /// Write to a file instead of standard output (csv unless --format says otherwise).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct AtOpts {
    /// Added capacity in GW, split evenly across the four variants and four regions.
    #[arg(long, value_name = "GW")]
    at_total: Option<f64>,
    /// JSON file with added capacity: {"per_variant_gw": {...}, "per_region_gw": {...}}.
    #[arg(long, value_name = "PATH")]
    at_file: Option<PathBuf>,
    /// A pathway label of the scenario.
    #[arg(long, value_name = "LABEL")]
    point: Option<String>,
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_band(s: &str) -> Result<LearningRateBand, String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match values[..] {
        [low, base, high] => LearningRateBand::new(low, base, high).map_err(|e| e.at("band").to_string()),
        _ => Err(format!("expected LOW,BASE,HIGH, got {} values", values.len())),
    }
}

fn parse_token<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
struct ProjectCmd {
    #[command(flatten)]
    source: SourceOpts,
    /// shared | technology_fragmented | regionally_fragmented | local | global | hybrid
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    #[arg(long, value_parser = parse_token::<StackVariant>, conflicts_with = "region")]
    variant: Option<StackVariant>,
    #[arg(long, value_parser = parse_token::<Region>)]
    region: Option<Region>,
    #[arg(long, value_parser = parse_token::<CostCategory>, requires = "region")]
    category: Option<CostCategory>,
    #[command(flatten)]
    at: AtOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct TargetCmd {
    #[command(flatten)]
    source: SourceOpts,
    #[arg(long, value_parser = parse_token::<StackVariant>, conflicts_with = "region", required_unless_present = "region")]
    variant: Option<StackVariant>,
    #[arg(long, value_parser = parse_token::<Region>)]
    region: Option<Region>,
    /// bop | epc | bop_epc (regional targets only; default bop_epc)
    #[arg(long, value_parser = parse_token::<ComponentSelection>, requires = "region")]
    category: Option<ComponentSelection>,
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    /// Cost target, USD/kW.
    #[arg(long, value_name = "USD_PER_KW")]
    target_cost: f64,
    /// Override the curve's learning rate.
    #[arg(long)]
    learning_rate: Option<f64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct LcohCmd {
    #[command(flatten)]
    source: SourceOpts,
    /// Evaluate this capex directly, USD/kW.
    #[arg(long, value_name = "USD_PER_KW", conflicts_with_all = ["structure", "variant", "region", "at_total", "at_file", "point"])]
    capex: Option<f64>,
    /// Single utilization in (0, 1]; default 0.05..1.00 in steps of 0.05.
    #[arg(long)]
    utilization: Option<f64>,
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    #[arg(long, value_parser = parse_token::<StackVariant>, conflicts_with = "region")]
    variant: Option<StackVariant>,
    /// Report the region's combined BoP + EPC cost.
    #[arg(long, value_parser = parse_token::<Region>)]
    region: Option<Region>,
    #[command(flatten)]
    at: AtOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct SweepCmd {
    #[command(flatten)]
    source: SourceOpts,
    #[arg(long, value_parser = parse_token::<StackVariant>, conflicts_with = "region", required_unless_present = "region")]
    variant: Option<StackVariant>,
    #[arg(long, value_parser = parse_token::<Region>, requires = "category")]
    region: Option<Region>,
    #[arg(long, value_parser = parse_token::<CostCategory>, requires = "region")]
    category: Option<CostCategory>,
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    /// Family cumulative capacities in GW, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "GW,...", conflicts_with = "points")]
    axis: Option<Vec<f64>>,
    /// Points on the default axis.
    #[arg(long)]
    points: Option<usize>,
    /// Learning rates low,base,high.
    #[arg(long, value_name = "LOW,BASE,HIGH", value_parser = parse_band)]
    band: Option<LearningRateBand>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct FigureCmd {
    #[command(flatten)]
    source: SourceOpts,
    /// fig1 | fig2 | fig3 | fig4 | fig5
    #[arg(long, value_parser = parse_token::<FigureId>)]
    id: FigureId,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct PresetsCmd {
    /// Print this preset as a scenario document.
    #[arg(long, value_name = "NAME")]
    show: Option<String>,
}

#[derive(Debug, Args)]
struct ServeCmd {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Address to bind; loopback unless set.
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Allow cross-origin requests from this origin (`*` for any).
    #[arg(long, value_name = "ORIGIN")]
    cors_origin: Option<String>,
}

fn catalog() -> Result<PresetCatalog, Error> {
    let mut catalog = builtin_presets();
    if let Some(dirs) = std::env::var_os(PRESET_DIR_VAR) {
        for dir in std::env::split_paths(&dirs).filter(|d| !d.as_os_str().is_empty()) {
            catalog.extend_from_dir(&dir)?;
        }
    }
    Ok(catalog)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn resolve(source: &SourceOpts, err: &mut dyn Write) -> Result<Scenario, Error> {
    let mode = if source.lax { LoadMode::Lax } else { LoadMode::Strict };
    let (scenario, warnings) = match (&source.scenario, &source.preset) {
        (Some(path), _) => {
            let text = read(path)?;
            let loaded = load_scenario(&text, mode).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("{}: {message}", path.display()),
                },
                other => other,
            })?;
            (loaded.scenario, loaded.warnings)
        }
        (None, Some(name)) => (catalog()?.get(name)?.clone(), Vec::new()),
        (None, None) => unreachable!("clap requires a scenario source"),
    };
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(scenario)
}

fn at_args(at: &AtOpts) -> Result<ops::AtArgs, Error> {
    let added = match &at.at_file {
        Some(path) => {
            let text = read(path)?;
            let state: DeploymentState = serde_json::from_str(&text).map_err(|e| {
                let Error::Parse { line, column, message } = Error::from(e) else {
                    unreachable!("serde_json errors convert to parse errors")
                };
                Error::Parse {
                    line,
                    column,
                    message: format!("{}: {message}", path.display()),
                }
            })?;
            Some(state)
        }
        None => None,
    };
    Ok(ops::AtArgs {
        at_total_gw: at.at_total,
        at_added: added,
        point: at.point.clone(),
    })
}

fn emit(dataset: &FigureDataset, output: &OutputOpts, out: &mut dyn Write) -> Result<(), Error> {
    let format = output
        .format
        .unwrap_or(if output.out.is_some() { Format::Csv } else { Format::Table });
    let text = match format {
        Format::Table => dataset.to_table(),
        Format::Csv => dataset.to_csv(),
        Format::Json => dataset.to_json(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    match command {
        Command::Project(cmd) => {
            let scenario = resolve(&cmd.source, err)?;
            let ops::AtArgs {
                at_total_gw,
                at_added,
                point,
            } = at_args(&cmd.at)?;
            let args = ops::ProjectArgs {
                structure: cmd.structure,
                variant: cmd.variant,
                region: cmd.region,
                category: cmd.category,
                at_total_gw,
                at_added,
                point,
            };
            emit(&ops::project(&scenario, &args)?, &cmd.output, out)
        }
        Command::Target(cmd) => {
            let scenario = resolve(&cmd.source, err)?;
            let args = ops::TargetArgs {
                variant: cmd.variant,
                region: cmd.region,
                category: cmd.category,
                structure: cmd.structure,
                target_cost_usd_per_kw: cmd.target_cost,
                learning_rate: cmd.learning_rate,
            };
            emit(&ops::target(&scenario, &args)?, &cmd.output, out)
        }
        Command::Lcoh(cmd) => {
            let scenario = resolve(&cmd.source, err)?;
            let ops::AtArgs {
                at_total_gw,
                at_added,
                point,
            } = at_args(&cmd.at)?;
            let args = ops::LcohArgs {
                capex_usd_per_kw: cmd.capex,
                utilization: cmd.utilization,
                structure: cmd.structure,
                variant: cmd.variant,
                region: cmd.region,
                at_total_gw,
                at_added,
                point,
            };
            emit(&ops::lcoh(&scenario, &args)?, &cmd.output, out)
        }
        Command::Sweep(cmd) => {
            let scenario = resolve(&cmd.source, err)?;
            let args = ops::SweepArgs {
                variant: cmd.variant,
                region: cmd.region,
                category: cmd.category,
                structure: cmd.structure,
                axis_gw: cmd.axis,
                points: cmd.points,
                learning_rate_band: cmd.band,
            };
            emit(&ops::sweep(&scenario, &args)?, &cmd.output, out)
        }
        Command::Figure(cmd) => {
            let scenario = resolve(&cmd.source, err)?;
            emit(&ops::figure(&scenario, &ops::FigureArgs { id: cmd.id })?, &cmd.output, out)
        }
        Command::Presets(cmd) => {
            let catalog = catalog()?;
            let text = match cmd.show {
                Some(name) => scenario_to_json(catalog.get(&name)?) + "\n",
                None => {
                    let width = catalog.names().map(str::len).max().unwrap_or(0);
                    catalog
                        .iter()
                        .map(|(name, s)| format!("{name:<width$}  {}\n", s.metadata.description))
                        .collect()
                }
            };
            out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
        }
        Command::Serve(cmd) => {
            let catalog = catalog()?;
            let addr = SocketAddr::new(cmd.host, cmd.port);
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            runtime
                .block_on(learncurve_service::serve(addr, catalog, cmd.cors_origin.as_deref()))
                .map_err(|e| Error::Io(format!("cannot serve on {addr}: {e}")))
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                2
            } else {
                let _ = out.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
