//! `geoloop`: batch driver for orbit censuses and loop statistics.

mod config;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geoloop::boundary::BoxParameters;
use geoloop::census::{
    enumerate_orbit_with, extend_census, CensusError, CensusOptions, CensusSnapshot,
};
use geoloop::group::{build_surface_group, CosetScheme};
use geoloop::lemmas::{verify_inclusion_lemmas, verify_scaling_lemma, CHECK_WINDOW};
use geoloop::persist::{export_csv, load_census, save_census};
use geoloop::stats::{
    count_arcs, count_by_coset, count_sector, cover_lift_proportion, fit_with_bootstrap,
    write_plot_data, write_series_csv, CountSeries,
};
use serde::Serialize;

use config::RunConfig;
use output::{gnuplot_script, Sink};

#[derive(Parser)]
#[command(
    name = "geoloop",
    version,
    about = "Geodesic loop censuses on hyperbolic surfaces"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides GEOLOOP_OUT_DIR and the file).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seed for sampled verifiers and the bootstrap.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write a gnuplot script next to plot data.
    #[arg(long, global = true)]
    gnuplot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the orbit of the base point up to a displacement radius.
    Census(CensusArgs),
    /// Loop counts N(t) on the grid.
    Count(StatArgs),
    /// Counts restricted to outgoing and incoming sectors.
    Sector(SectorArgs),
    /// Counts split by homology coset.
    Homology(SchemeArgs),
    /// Proportion of loops that close in a finite cover.
    Cover(SchemeArgs),
    /// Fit N(t) ≈ a·e^{ht} with a bootstrap band for a.
    Fit(FitArgs),
    /// Check the boundary inclusion and scaling lemmas on a census.
    VerifyLemmas(LemmaArgs),
    /// Export census records as CSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    slack: Option<f64>,
    /// Maximum number of indexed elements.
    #[arg(long)]
    budget: Option<usize>,
    /// Extend this stored census instead of starting afresh.
    #[arg(long)]
    extend: Option<PathBuf>,
    /// Census file name inside the output directory.
    #[arg(long, default_value = "census.bin")]
    file: String,
}

#[derive(Args)]
struct Input {
    /// Census file; defaults to census.bin in the output directory.
    #[arg(long)]
    census: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    grid_start: Option<f64>,
    #[arg(long)]
    grid_end: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Args)]
struct StatArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct SectorArgs {
    #[command(flatten)]
    stat: StatArgs,
    /// Base angle of the outgoing sector.
    #[arg(long)]
    base: Option<f64>,
    /// Half-angle of the outgoing sector.
    #[arg(long)]
    theta: Option<f64>,
    /// Base angle of the incoming sector.
    #[arg(long)]
    base_prime: Option<f64>,
    /// Half-angle of the incoming sector.
    #[arg(long)]
    theta_prime: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemePreset {
    Mod2,
    Mod3,
    IndexTwo,
    Trivial,
}

#[derive(Args)]
struct SchemeArgs {
    #[command(flatten)]
    stat: StatArgs,
    /// Coset scheme; the configured scheme is used when absent.
    #[arg(long, value_enum)]
    scheme: Option<SchemePreset>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    stat: StatArgs,
    #[arg(long)]
    window_start: Option<f64>,
    #[arg(long)]
    window_end: Option<f64>,
    #[arg(long)]
    resamples: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoxPreset {
    Default,
    Wide,
}

#[derive(Args)]
struct LemmaArgs {
    #[command(flatten)]
    input: Input,
    /// Angles from a named preset; explicit flags still override them.
    #[arg(long, value_enum)]
    preset: Option<BoxPreset>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    theta_prime: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    rho_prime: Option<f64>,
    /// Comma-separated t values.
    #[arg(long, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
    /// Tangent samples for the full-branch check.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "census.csv")]
    file: String,
}

enum Failure {
    Usage(anyhow::Error),
    Verification,
    Budget(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.resolve_out_dir();
    if let Some(d) = &cli.out_dir {
        cfg.output.dir = d.clone();
    }
    if let Some(s) = cli.seed {
        cfg.output.seed = s;
    }
    cfg.output.gnuplot |= cli.gnuplot;
    match cli.command {
        Command::Census(a) => cmd_census(cfg, a),
        Command::Count(a) => cmd_count(cfg, a),
        Command::Sector(a) => cmd_sector(cfg, a),
        Command::Homology(a) => cmd_homology(cfg, a),
        Command::Cover(a) => cmd_cover(cfg, a),
        Command::Fit(a) => cmd_fit(cfg, a),
        Command::VerifyLemmas(a) => cmd_verify(cfg, a),
        Command::Export(a) => cmd_export(cfg, a),
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn open_census(cfg: &RunConfig, input: &Input) -> anyhow::Result<CensusSnapshot> {
    let path = input
        .census
        .clone()
        .unwrap_or_else(|| cfg.output.dir.join("census.bin"));
    load_census(&path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn apply_grid(cfg: &mut RunConfig, g: &GridArgs) {
    set(&mut cfg.grid.start, g.grid_start);
    if g.grid_end.is_some() {
        cfg.grid.end = g.grid_end;
    }
    set(&mut cfg.grid.step, g.grid_step);
}

fn cmd_census(mut cfg: RunConfig, a: CensusArgs) -> Outcome {
    set(&mut cfg.census.genus, a.genus);
    set(&mut cfg.census.radius, a.radius);
    set(&mut cfg.census.slack, a.slack);
    set(&mut cfg.census.budget, a.budget);
    cfg.validate()?;
    let sink = Sink::new(&cfg, "census")?;
    let group = build_surface_group(cfg.census.genus)?;
    let opts =
        CensusOptions::new(cfg.census.radius, cfg.census.slack).with_budget(cfg.census.budget);
    let result = match &a.extend {
        Some(p) => {
            let base = load_census(p).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
            extend_census(&group, &base, &opts)
        }
        None => enumerate_orbit_with(&group, &opts),
    };
    let path = sink.path(&a.file);
    let (mut snapshot, budget) = match result {
        Ok(s) => (s, None),
        Err(CensusError::BudgetExceeded {
            limit,
            reached,
            partial,
        }) => {
            let msg = format!(
                "record budget of {limit} exceeded at displacement {reached:.4}; partial census to radius {:.4} written to {}",
                partial.radius,
                path.display()
            );
            (*partial, Some(msg))
        }
        Err(e) => return Err(e.into()),
    };
    snapshot.config = output::fingerprint(&cfg);
    save_census(&path, &snapshot)?;
    let max = snapshot.records.last().map_or(0.0, |r| r.displacement);
    let st = &snapshot.stats;
    println!("census: {}", path.display());
    println!("records: {}", snapshot.len());
    println!("radius: {}", snapshot.radius);
    println!("max displacement: {max:.6}");
    println!(
        "dedup: generated {} duplicates {} pruned {} probes {} max word length {}",
        st.generated, st.duplicates, st.pruned, st.probes, st.max_word_length
    );
    match budget {
        Some(msg) => Err(Failure::Budget(msg)),
        None => Ok(()),
    }
}

fn emit_series(cfg: &RunConfig, sink: &Sink, stem: &str, series: &[CountSeries]) -> Outcome {
    let (csv_path, w) = sink.create(&format!("{stem}.csv"))?;
    write_series_csv(series, w, &sink.meta.comments())?;
    let mut plots = Vec::new();
    for (k, s) in series.iter().enumerate() {
        let name = if series.len() == 1 {
            format!("{stem}.dat")
        } else {
            format!("{stem}_{k:03}.dat")
        };
        let (_, mut w) = sink.create(&name)?;
        for c in sink.meta.comments() {
            writeln!(w, "# {c}")?;
        }
        write_plot_data(s, &mut w)?;
        w.flush()?;
        plots.push((name, s.filter.clone()));
    }
    if cfg.output.gnuplot {
        let script = gnuplot_script(stem, &plots, Path::new(&format!("{stem}.png")));
        let (_, mut w) = sink.create(&format!("{stem}.gp"))?;
        for c in sink.meta.comments() {
            writeln!(w, "# {c}")?;
        }
        w.write_all(script.as_bytes())?;
        w.flush()?;
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn cmd_count(mut cfg: RunConfig, a: StatArgs) -> Outcome {
    apply_grid(&mut cfg, &a.grid);
    cfg.validate()?;
    let census = open_census(&cfg, &a.input)?;
    let series = count_arcs(&census, &cfg.grid(census.radius))?;
    let sink = Sink::new(&cfg, "count")?;
    emit_series(&cfg, &sink, "count", &[series])
}

fn cmd_sector(mut cfg: RunConfig, a: SectorArgs) -> Outcome {
    apply_grid(&mut cfg, &a.stat.grid);
    set(&mut cfg.sector.base, a.base);
    set(&mut cfg.sector.theta, a.theta);
    set(&mut cfg.sector.base_prime, a.base_prime);
    set(&mut cfg.sector.theta_prime, a.theta_prime);
    cfg.validate()?;
    let census = open_census(&cfg, &a.stat.input)?;
    let (start, end) = cfg.sectors()?;
    let series = count_sector(&census, &start, &end, &cfg.grid(census.radius))?;
    let sink = Sink::new(&cfg, "sector")?;
    emit_series(&cfg, &sink, "sector", &[series])
}

fn apply_scheme(cfg: &mut RunConfig, preset: Option<SchemePreset>) {
    if let Some(p) = preset {
        cfg.cosets = match p {
            SchemePreset::Mod2 => CosetScheme::mod_m(2),
            SchemePreset::Mod3 => CosetScheme::mod_m(3),
            SchemePreset::IndexTwo => CosetScheme::index_two(cfg.census.genus),
            SchemePreset::Trivial => CosetScheme::trivial(),
        };
    }
}

fn cmd_homology(mut cfg: RunConfig, a: SchemeArgs) -> Outcome {
    apply_grid(&mut cfg, &a.stat.grid);
    apply_scheme(&mut cfg, a.scheme);
    let census = open_census(&cfg, &a.stat.input)?;
    cfg.census.genus = census.genus;
    cfg.validate()?;
    let parts = count_by_coset(&census, &cfg.cosets, &cfg.grid(census.radius))?;
    let series: Vec<CountSeries> = parts.into_iter().map(|(_, s)| s).collect();
    let sink = Sink::new(&cfg, "homology")?;
    emit_series(&cfg, &sink, "homology", &series)
}

fn cmd_cover(mut cfg: RunConfig, a: SchemeArgs) -> Outcome {
    apply_grid(&mut cfg, &a.stat.grid);
    apply_scheme(&mut cfg, a.scheme);
    let census = open_census(&cfg, &a.stat.input)?;
    cfg.census.genus = census.genus;
    cfg.validate()?;
    let grid = cfg.grid(census.radius);
    let props = cover_lift_proportion(&census, &cfg.cosets, &grid)?;
    let sink = Sink::new(&cfg, "cover")?;
    let (path, mut out) = sink.create("cover.csv")?;
    for c in sink.meta.comments() {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "# scheme {}", cfg.cosets.describe())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "proportion"])?;
    for (t, p) in grid.iter().zip(&props) {
        let p = p.map_or(String::new(), |p| format!("{p:.9}"));
        w.write_record([format!("{t:.6}"), p])?;
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_fit(mut cfg: RunConfig, a: FitArgs) -> Outcome {
    apply_grid(&mut cfg, &a.stat.grid);
    set(&mut cfg.fit.resamples, a.resamples);
    let census = open_census(&cfg, &a.stat.input)?;
    let (lo, hi) = cfg.fit_window(census.radius);
    cfg.fit.window = Some([a.window_start.unwrap_or(lo), a.window_end.unwrap_or(hi)]);
    cfg.validate()?;
    let series = count_arcs(&census, &cfg.grid(census.radius))?;
    let window = cfg.fit_window(census.radius);
    let fit = fit_with_bootstrap(&series, window, cfg.fit.resamples, cfg.output.seed)?;
    let sink = Sink::new(&cfg, "fit")?;
    let path = sink.json("fit.json", "fit", &fit)?;
    println!("h = {:.6}", fit.h_estimate);
    println!("a = {:.6}", fit.a_estimate);
    if let Some((l, u)) = fit.a_band {
        println!("a band = [{l:.6}, {u:.6}]");
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct LemmaReport<'a> {
    pass: bool,
    inconclusive: bool,
    inclusion: &'a geoloop::lemmas::InclusionReport,
    scaling: &'a geoloop::lemmas::ScalingReport,
}

fn cmd_verify(mut cfg: RunConfig, a: LemmaArgs) -> Outcome {
    if let Some(p) = a.preset {
        let angles = match p {
            BoxPreset::Default => BoxParameters::defaults(),
            BoxPreset::Wide => BoxParameters::wide(),
        };
        cfg.boxes.theta = angles.theta;
        cfg.boxes.theta_prime = angles.theta_prime;
    }
    let b = &mut cfg.boxes;
    set(&mut b.epsilon, a.epsilon);
    set(&mut b.alpha, a.alpha);
    set(&mut b.theta, a.theta);
    set(&mut b.theta_prime, a.theta_prime);
    set(&mut b.t_list, a.t_list);
    set(&mut b.samples, a.samples);
    if a.rho.is_some() {
        b.rho = a.rho;
    }
    if a.rho_prime.is_some() {
        b.rho_prime = a.rho_prime;
    }
    cfg.validate()?;
    let census = open_census(&cfg, &a.input)?;
    let params = cfg.box_parameters()?;
    let (rho, rho_prime) = cfg.rho();
    let inclusion = verify_inclusion_lemmas(&census, &params, rho, rho_prime, &cfg.boxes.t_list)?;
    let window: Vec<f64> = cfg
        .boxes
        .t_list
        .iter()
        .copied()
        .filter(|t| *t >= CHECK_WINDOW.0 && *t <= CHECK_WINDOW.1)
        .collect();
    let scaling = verify_scaling_lemma(
        &census,
        &params,
        &window,
        cfg.boxes.samples,
        cfg.output.seed,
    )?;
    let violated =
        !inclusion.pass || scaling.out_of_bounds > 0 || scaling.full_branch.disagreements > 0;
    let report = LemmaReport {
        pass: !violated,
        inconclusive: scaling.inconclusive,
        inclusion: &inclusion,
        scaling: &scaling,
    };
    let sink = Sink::new(&cfg, "verify-lemmas")?;
    let path = sink.json("lemmas.json", "report", &report)?;
    let t0 = |x: Option<f64>| x.map_or("none".to_string(), |v| v.to_string());
    println!(
        "inclusion: window violations {} over {} members, t0 vis1 {} vis2 {} vis3 {}",
        inclusion.window_violations,
        inclusion.window_members,
        t0(inclusion.t0_vis1),
        t0(inclusion.t0_vis2),
        t0(inclusion.t0_vis3)
    );
    println!(
        "scaling: out of bounds {}, full branch {} disagreements over {} samples{}",
        scaling.out_of_bounds,
        scaling.full_branch.disagreements,
        scaling.full_branch.samples,
        if scaling.inconclusive {
            " (inconclusive: no elements)"
        } else {
            ""
        }
    );
    println!("wrote {}", path.display());
    if violated {
        println!("verification failed");
        return Err(Failure::Verification);
    }
    Ok(())
}

fn cmd_export(cfg: RunConfig, a: ExportArgs) -> Outcome {
    cfg.validate()?;
    let census = open_census(&cfg, &a.input)?;
    let sink = Sink::new(&cfg, "export")?;
    let (path, mut w) = sink.create(&a.file)?;
    let mut comments = sink.meta.comments();
    comments.push(format!("census config {}", output::hex(&census.config)));
    export_csv(&census, &mut w, &comments)?;
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}
