use aklt_lab::channels::{catalog_noise, check_symmetry, classify_table1, rotated_rep, GroupRep, Verdict};
use aklt_lab::evolution::{default_thetas, evolve_channel, trajectory_states, write_csv, DEFAULT_N, DEFAULT_P, DEFAULT_STEPS};
use aklt_lab::kraus_file::load_kraus_file;
use aklt_lab::mpo_analysis::{diagonal_deviation, diagonal_invariance_check};
use aklt_lab::{
    edge_string_correlator, fidelity, string_order, DensityMpo, FidelityMode, GateAxis, GateSpec, KrausChannel,
    SpinAxis,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "aklt-lab", version, about = "Noisy AKLT resource states for measurement-based gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity trajectories under repeated noise sweeps, as CSV.
    Evolve(EvolveArgs),
    /// Gate fidelity of the state after a number of sweeps, as JSON.
    Fidelity(FidelityArgs),
    /// Strong and weak symmetry verdicts for a channel.
    CheckSymmetry(SymmetryArgs),
    /// String order parameters and edge correlators.
    StringOrder(StringOrderArgs),
    /// Whether a channel changes the diagonal wire-basis MPO blocks.
    MpoCheck(ChannelArgs),
    /// Verdicts for the four catalog noises.
    Table1(Table1Args),
}

#[derive(Args)]
struct ChannelArgs {
    /// Catalog noise 1-4.
    #[arg(long, conflicts_with = "kraus_file")]
    noise: Option<u8>,
    /// Kraus operators in plain-text form.
    #[arg(long)]
    kraus_file: Option<PathBuf>,
    /// Error rate.
    #[arg(long, default_value_t = DEFAULT_P)]
    p: f64,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Bulk sites.
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    /// Noise sweeps applied to the pure state.
    #[arg(long, default_value_t = 0)]
    steps: usize,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Rotation angle; repeat for several (default: seven angles in [0, pi]).
    #[arg(long)]
    theta: Vec<f64>,
    #[arg(long, default_value = "z")]
    axis: GateAxis,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long)]
    theta: Vec<f64>,
    #[arg(long, default_value = "z")]
    axis: GateAxis,
    /// oracle, grouped or strings.
    #[arg(long, default_value = "strings")]
    mode: FidelityMode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SymmetryArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Also test the rotated Z2xZ2 representation at this angle.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StringOrderArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Use the maximally mixed state instead of AKLT.
    #[arg(long)]
    mixed: bool,
    /// First site, 0-based (default 0).
    #[arg(long)]
    i: Option<usize>,
    /// Last site, 0-based (default n-1).
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = DEFAULT_P)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_channel(args: &ChannelArgs) -> Result<Option<(KrausChannel, String)>> {
    if !(0.0..=1.0).contains(&args.p) {
        bail!("--p must lie in [0, 1], got {}", args.p);
    }
    if let Some(path) = &args.kraus_file {
        let spec = load_kraus_file(path).with_context(|| format!("reading {}", path.display()))?;
        let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file").to_string();
        return Ok(Some((spec.into_channel(&label, args.p)?, label)));
    }
    match args.noise {
        Some(id) => Ok(Some((catalog_noise(id, args.p)?, id.to_string()))),
        None => Ok(None),
    }
}

fn require_channel(args: &ChannelArgs) -> Result<(KrausChannel, String)> {
    load_channel(args)?.context("one of --noise or --kraus-file is required")
}

fn noisy_state(args: &StateArgs) -> Result<(DensityMpo, String)> {
    let (ch, label) = load_channel(&args.channel)?.unwrap_or_else(|| (KrausChannel::identity_channel(), "none".into()));
    let mut states = trajectory_states(&ch, args.n, args.steps)?;
    Ok((states.pop().expect("step 0 present"), label))
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn thetas_or_default(t: &[f64]) -> Vec<f64> {
    if t.is_empty() {
        default_thetas()
    } else {
        t.to_vec()
    }
}

fn cmd_evolve(args: EvolveArgs) -> Result<()> {
    let (ch, label) = require_channel(&args.channel)?;
    let rows = evolve_channel(&ch, &label, args.n, args.steps, &thetas_or_default(&args.theta), args.axis)?;
    let mut w = sink(&args.out)?;
    write_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FidelityRow {
    theta: f64,
    axis: GateAxis,
    mode: String,
    noise: String,
    p: f64,
    n: usize,
    steps: usize,
    term_ii: f64,
    term_zz: f64,
    term_xx: f64,
    term_xz: f64,
    f: f64,
}

fn cmd_fidelity(args: FidelityArgs) -> Result<()> {
    let (state, noise) = noisy_state(&args.state)?;
    let mut rows = Vec::new();
    for theta in thetas_or_default(&args.theta) {
        let b = fidelity(&state, &GateSpec::new(args.axis, theta), args.mode)?;
        rows.push(FidelityRow {
            theta,
            axis: args.axis,
            mode: format!("{:?}", args.mode).to_lowercase(),
            noise: noise.clone(),
            p: args.state.channel.p,
            n: args.state.n,
            steps: args.state.steps,
            term_ii: b.term_ii,
            term_zz: b.term_zz,
            term_xx: b.term_xx,
            term_xz: b.term_xz,
            f: b.f,
        });
    }
    emit_json(&rows, &args.out)
}

#[derive(Serialize)]
struct SymmetryOutput {
    channel: String,
    p: f64,
    trace_scale: f64,
    tp_renormalize: bool,
    groups: Vec<GroupOutput>,
}

#[derive(Serialize)]
struct GroupOutput {
    verdict: Verdict,
    #[serde(flatten)]
    report: aklt_lab::SymmetryReport,
}

fn cmd_check_symmetry(args: SymmetryArgs) -> Result<()> {
    let (ch, label) = require_channel(&args.channel)?;
    let mut groups = vec![GroupRep::canonical(), GroupRep::time_reversal()];
    if let Some(theta) = args.theta {
        groups.push(rotated_rep(theta));
    }
    let mut reports = Vec::new();
    for g in &groups {
        let report = check_symmetry(&ch, g)?;
        reports.push(GroupOutput {
            verdict: report.verdict(),
            report,
        });
    }
    emit_json(
        &SymmetryOutput {
            channel: label,
            p: ch.p(),
            trace_scale: ch.trace_scale(),
            tp_renormalize: ch.tp_renormalize(),
            groups: reports,
        },
        &args.out,
    )
}

#[derive(Serialize)]
struct AxisValues {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize)]
struct StringOrderOutput {
    state: String,
    noise: String,
    n: usize,
    steps: usize,
    i: usize,
    j: usize,
    string_order: AxisValues,
    edge_correlator: AxisValues,
}

fn per_axis(mut f: impl FnMut(SpinAxis) -> aklt_lab::Result<f64>) -> Result<AxisValues> {
    Ok(AxisValues {
        x: f(SpinAxis::X)?,
        y: f(SpinAxis::Y)?,
        z: f(SpinAxis::Z)?,
    })
}

fn cmd_string_order(args: StringOrderArgs) -> Result<()> {
    let n = args.state.n;
    let (state, noise) = if args.mixed {
        (DensityMpo::maximally_mixed(n)?, "none".to_string())
    } else {
        noisy_state(&args.state)?
    };
    let i = args.i.unwrap_or(0);
    let j = args.j.unwrap_or(n.saturating_sub(1));
    let out = StringOrderOutput {
        state: if args.mixed { "maximally-mixed" } else { "aklt" }.into(),
        noise,
        n,
        steps: if args.mixed { 0 } else { args.state.steps },
        i,
        j,
        string_order: per_axis(|a| string_order(&state, a, i, j))?,
        edge_correlator: per_axis(|a| edge_string_correlator(&state, a))?,
    };
    emit_json(&out, &args.out)
}

#[derive(Serialize)]
struct MpoCheckOutput {
    channel: String,
    p: f64,
    diagonal_preserved: bool,
    max_diagonal_change: f64,
    strongly_symmetric: bool,
    summary: String,
}

fn cmd_mpo_check(args: ChannelArgs) -> Result<()> {
    let (ch, label) = require_channel(&args)?;
    let preserved = diagonal_invariance_check(&ch);
    let strong = check_symmetry(&ch, &GroupRep::canonical())?.verdict() == Verdict::Strong;
    let summary = match (preserved, strong) {
        (true, true) => "DIAGONAL PRESERVED / strongly symmetric",
        (false, false) => "DIAGONAL CHANGED / not strongly symmetric",
        (true, false) => "DIAGONAL PRESERVED / not strongly symmetric (inconsistent)",
        (false, true) => "DIAGONAL CHANGED / strongly symmetric (inconsistent)",
    };
    emit_json(
        &MpoCheckOutput {
            channel: label,
            p: ch.p(),
            diagonal_preserved: preserved,
            max_diagonal_change: diagonal_deviation(&ch),
            strongly_symmetric: strong,
            summary: summary.into(),
        },
        &None,
    )
}

fn cmd_table1(args: Table1Args) -> Result<()> {
    emit_json(&classify_table1(args.p)?, &args.out)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("AKLT_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("AKLT_LAB_THREADS must be a positive integer, got '{v}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Evolve(a) => cmd_evolve(a),
        Command::Fidelity(a) => cmd_fidelity(a),
        Command::CheckSymmetry(a) => cmd_check_symmetry(a),
        Command::StringOrder(a) => cmd_string_order(a),
        Command::MpoCheck(a) => cmd_mpo_check(a),
        Command::Table1(a) => cmd_table1(a),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
