use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use glidepath::bench::{
    generate_scenarios, load_records, run_benchmark, runtime_cdf, save_records, write_cdf_csv,
    write_polyline, write_records_csv,
};
use glidepath::config::AppConfig;
use glidepath::dubins::RiskMetric;
use glidepath::geodesy::{GeoPoint, GeoState};
use glidepath::landing_sites::{load_catalog, sample_catalog, Wind};
use glidepath::planner;
use glidepath::polyhedra::{load_polyhedra, query_point, PolyhedronSet};
use glidepath::population::PopulationRaster;
use glidepath::risk::RiskModel;
use glidepath::traffic_grid::{build_density_grid, read_adsb_csv, AirspaceGrid, GridFile};
use glidepath::Result;

#[derive(Parser)]
#[command(name = "glidepath", about = "Contingency landing planning toolkit", version)]
struct Cli {
    /// Configuration file (JSON); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Traffic-density and airspace-volume preprocessing.
    Heatmap {
        #[command(subcommand)]
        command: HeatmapCommand,
    },
    /// Plan a single emergency scenario.
    Plan(PlanArgs),
    /// Benchmark harness.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
}

#[derive(Subcommand)]
enum HeatmapCommand {
    /// Build a 3-D traffic density grid from ADS-B CSV logs.
    Build {
        /// Input ADS-B CSV file(s).
        #[arg(long, required = true, num_args = 1..)]
        adsb: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate an airspace-volume file and report per-volume geometry.
    Poly {
        #[arg(long)]
        file: PathBuf,
        /// Optional probe point `lat,lon,alt_ft` to query against every set.
        #[arg(long)]
        query: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Airspace,
    Joint,
}

impl Mode {
    fn metric(self) -> RiskMetric {
        match self {
            Mode::Airspace => RiskMetric::Airspace,
            Mode::Joint => RiskMetric::Joint,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Traffic grid file produced by `heatmap build`.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Airspace volumes JSON (corridors and no-fly zones).
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Population raster CSV.
    #[arg(long)]
    population: Option<PathBuf>,
    /// Generate a seeded synthetic population raster instead.
    #[arg(long, conflicts_with = "population")]
    synthetic_population: Option<u64>,
    /// Landing-site catalog JSON; the embedded sample catalog when omitted.
    #[arg(long)]
    sites: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// Scenario JSON: {lat, lon, alt_ft, course_deg, wind_kts, wind_from_deg}.
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "airspace")]
    mode: Mode,
    #[command(flatten)]
    model: ModelArgs,
    /// Write the full PlanResult JSON here (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plot-ready polylines next to `out`.
    #[arg(long)]
    polylines: bool,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Generate scenarios and run the full search-vs-Dubins comparison.
    Run {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "airspace")]
        mode: Mode,
        #[arg(long)]
        seed_offset: Option<u64>,
        #[command(flatten)]
        model: ModelArgs,
        /// Output directory for records, summary and CDF files.
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
    },
    /// Re-emit saved benchmark records in another format.
    Report {
        /// records.json produced by `bench run`.
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    lat: f64,
    lon: f64,
    alt_ft: f64,
    course_deg: f64,
    #[serde(default)]
    wind_kts: f64,
    #[serde(default)]
    wind_from_deg: f64,
}

#[derive(Serialize)]
struct PlanReport {
    status: planner::PlanStatus,
    search: Option<ResultReport>,
    dubins: Option<ResultReport>,
}

#[derive(Serialize)]
struct ResultReport {
    #[serde(flatten)]
    result: planner::PlanResult,
    /// Pointwise airspace risk at each path sample.
    ga: Vec<f64>,
    /// Normalized population density at each path sample.
    eta: Vec<f64>,
}

fn report_for(result: &planner::PlanResult, model: &RiskModel) -> ResultReport {
    ResultReport {
        result: result.clone(),
        ga: result.path.iter().map(|s| model.ga(&s.state.pos)).collect(),
        eta: result.path.iter().map(|s| model.eta(&s.state.pos)).collect(),
    }
}

fn build_model(args: &ModelArgs, cfg: &AppConfig) -> Result<(RiskModel, Vec<glidepath::landing_sites::LandingSite>)> {
    let grid = match &args.grid {
        Some(p) => GridFile::load(p)?.into_grid()?,
        None => AirspaceGrid::empty(cfg.grid.clone()),
    };
    let (corridors, noflys) = match &args.poly {
        Some(p) => load_polyhedra(p)?,
        None => (PolyhedronSet::default(), PolyhedronSet::default()),
    };
    let raster = match (&args.population, args.synthetic_population) {
        (Some(p), _) => PopulationRaster::from_csv(p)?,
        (None, Some(seed)) => PopulationRaster::synthetic(
            seed,
            cfg.grid.lat_min,
            cfg.grid.lat_max,
            cfg.grid.lon_min,
            cfg.grid.lon_max,
            50,
            50,
        ),
        (None, None) => PopulationRaster::zero(
            vec![cfg.grid.lat_min, cfg.grid.lat_max],
            vec![cfg.grid.lon_min, cfg.grid.lon_max],
        ),
    };
    let mut model = RiskModel::new(grid, corridors, noflys, raster, cfg.risk_weights, cfg.d_max_ft)?;
    model.adaptive_ground_weights = cfg.adaptive_ground_weights;
    model.additive_wa = cfg.additive_wa;
    let catalog = match &args.sites {
        Some(p) => load_catalog(p)?,
        None => sample_catalog(),
    };
    Ok((model, catalog))
}

fn planner_cfg_for(cfg: &AppConfig, mode: Mode) -> planner::PlannerConfig {
    let mut pc = cfg.planner.clone();
    pc.weights = match mode {
        Mode::Airspace => planner::airspace_only_weights(),
        Mode::Joint => planner::joint_weights(),
    };
    pc
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => AppConfig::load(p)?,
        None => AppConfig::default(),
    };

    match cli.command {
        Command::Heatmap { command } => heatmap(command, &cfg),
        Command::Plan(args) => plan(args, &cfg),
        Command::Bench { command } => bench(command, &cfg),
    }
}

fn heatmap(command: HeatmapCommand, cfg: &AppConfig) -> Result<()> {
    match command {
        HeatmapCommand::Build { adsb, out } => {
            let mut all = glidepath::traffic_grid::TrajectorySet::default();
            for path in &adsb {
                let (set, report) = read_adsb_csv(path, cfg.opensky, cfg.gap_s)?;
                eprintln!(
                    "{}: {} trajectories from {} rows ({} dropped)",
                    path.display(),
                    report.trajectories,
                    report.rows_read,
                    report.rows_dropped_bad_alt + report.rows_dropped_bad_coord
                );
                all.trajectories.extend(set.trajectories);
            }
            let mut grid = build_density_grid(&all, &cfg.grid, cfg.d_step_ft, cfg.parallelism())?;
            grid.mu_kappa = grid.mean_density_with(cfg.mean_denominator);
            println!(
                "cells {} kappa_max {} mu_kappa {:.6} occupancy {:.4}",
                grid.spec.cell_count(),
                grid.kappa_max,
                grid.mu_kappa,
                grid.occupancy_fraction()
            );
            GridFile::from_grid(&grid).save(&out)?;
            Ok(())
        }
        HeatmapCommand::Poly { file, query } => {
            let (corridors, noflys) = load_polyhedra(&file)?;
            println!(
                "corridors {} no-fly {}",
                corridors.members.len(),
                noflys.members.len()
            );
            if let Some(q) = query {
                let parts: Vec<f64> = q
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| glidepath::Error::Input(format!("bad query point: {e}")))?;
                if parts.len() != 3 {
                    return Err(glidepath::Error::Input("query needs lat,lon,alt_ft".into()));
                }
                let p = query_point(&GeoPoint::new(parts[0], parts[1], parts[2]));
                for (name, set) in [("corridor", &corridors), ("no-fly", &noflys)] {
                    println!(
                        "{name}: min_distance_ft {:.1} cost {:.4}",
                        set.min_distance_ft(p),
                        set.set_cost(p, cfg.d_max_ft)
                    );
                }
            }
            Ok(())
        }
    }
}

fn plan(args: PlanArgs, cfg: &AppConfig) -> Result<()> {
    let text = std::fs::read_to_string(&args.scenario)?;
    let sc: ScenarioFile = serde_json::from_str(&text)?;
    let s0 = GeoState::new(
        GeoPoint::new(sc.lat, sc.lon, sc.alt_ft),
        sc.course_deg.to_radians(),
    );
    let wind = Wind {
        speed_kts: sc.wind_kts,
        from_rad: sc.wind_from_deg.to_radians(),
    };
    let (model, catalog) = build_model(&args.model, cfg)?;
    let pc = planner_cfg_for(cfg, args.mode);
    let envelope = planner::plan(&s0, &catalog, &model, &wind, &pc, args.mode.metric())?;
    let report = PlanReport {
        status: envelope.status,
        search: envelope.search.as_ref().map(|r| report_for(r, &model)),
        dubins: envelope.dubins.as_ref().map(|r| report_for(r, &model)),
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(p) => std::fs::write(p, &json)?,
        None => println!("{json}"),
    }
    if args.polylines {
        let stem = args
            .out
            .as_deref()
            .unwrap_or(Path::new("plan"))
            .with_extension("");
        for (tag, result) in [("search", &envelope.search), ("dubins", &envelope.dubins)] {
            if let Some(r) = result {
                let path = PathBuf::from(format!("{}.{tag}.csv", stem.display()));
                let f = std::fs::File::create(&path)?;
                write_polyline(std::io::BufWriter::new(f), r)?;
            }
        }
    }
    eprintln!("status: {:?}", envelope.status);
    Ok(())
}

fn bench(command: BenchCommand, cfg: &AppConfig) -> Result<()> {
    match command {
        BenchCommand::Run { n, mode, seed_offset, model: margs, out } => {
            let (model, catalog) = build_model(&margs, cfg)?;
            let mut bc = cfg.bench.clone();
            if let Some(n) = n {
                bc.n = n;
            }
            if let Some(off) = seed_offset {
                bc.seed_offset = off;
            }
            let pc = planner_cfg_for(cfg, mode);
            let set = generate_scenarios(&bc, &catalog, &model, &pc)?;
            let (records, summary) = run_benchmark(
                &set,
                &catalog,
                &model,
                &pc,
                &bc,
                mode.metric(),
                cfg.parallelism(),
            )?;
            let cdf = runtime_cdf(&records, bc.t_max_ms, mode.metric(), bc.epsilon);
            std::fs::create_dir_all(&out)?;
            save_records(&out.join("records.json"), &records)?;
            std::fs::write(
                out.join("summary.json"),
                serde_json::to_string_pretty(&summary)?,
            )?;
            let f = std::fs::File::create(out.join("records.csv"))?;
            write_records_csv(std::io::BufWriter::new(f), &records)?;
            let f = std::fs::File::create(out.join("cdf.csv"))?;
            write_cdf_csv(std::io::BufWriter::new(f), &cdf)?;
            println!(
                "n {} categories {:?} F({} ms) = {:.4}",
                summary.n, summary.counts_airspace, bc.t_max_ms, cdf.value_at_t_max
            );
            Ok(())
        }
        BenchCommand::Report { records, format } => {
            let records = load_records(&records)?;
            match format {
                ReportFormat::Csv => {
                    write_records_csv(std::io::stdout().lock(), &records)?;
                }
                ReportFormat::Json => {
                    let summary = glidepath::bench::summarize(&records);
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
