//! `spp`: command-line front end. Every command prints one JSON document on
//! stdout; exit status is 0 when the checked property holds, 1 when it does
//! not, 2 on malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use pacing::dynamics::{convergence_report, simulate, Direction, DynamicsConfig};
use pacing::exactify::{
    build_lp, extract_exact, extract_support, solve_exact_pipeline, solve_lp_exact, Attempt, ExactifyError,
    PipelineConfig,
};
use pacing::game::ApproxParams;
use pacing::gen::{random_game, GenConfig};
use pacing::io::{fmt_mat, fmt_vec, parse_equilibrium, parse_game, serialize_equilibrium, serialize_game};
use pacing::reduction::{
    build_approx_gadget, build_exact_gadget, default_approx_params, extract_nash_approx, extract_nash_exact,
    parse_bimatrix, GadgetIndex, GadgetVariant,
};
use pacing::rounding::approx_to_gamma;
use pacing::sperner::{extract_profile, find_panchromatic, solve_smooth, Schedule, SmoothSolution, Strategy};
use pacing::verify::{verify_approx, verify_exact, verify_reserve, verify_smooth, verify_wsne};
use pacing::{Candidate, Game, Rational, Report, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "spp", version, about = "Pacing equilibria in second-price pacing games")]
struct Cli {
    /// Worker threads for the parallel stages (batch verification, grid search).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check equilibrium files against a game. Games with reserve prices are
    /// checked with the reserve conditions and need delta = gamma = 0.
    Verify {
        #[arg(long)]
        game: PathBuf,
        /// One or more equilibrium files; several are checked in parallel.
        #[arg(long, required = true, num_args = 1..)]
        eq: Vec<PathBuf>,
        #[arg(long, default_value = "0", value_parser = rational)]
        delta: Rational,
        #[arg(long, default_value = "0", value_parser = rational)]
        gamma: Rational,
    },
    /// Compute an exact equilibrium and write every stage's artifact.
    Solve {
        #[arg(long)]
        game: PathBuf,
        /// First slack tried; halved until the support LP closes.
        #[arg(long, default_value = "1/16", value_parser = rational)]
        gamma: Rational,
        /// Maximum number of halvings of gamma.
        #[arg(long, default_value_t = 12)]
        max_refine: u32,
        /// Resolution of the first grid level.
        #[arg(long)]
        grid: Option<u64>,
        /// Stage artifacts always land here.
        #[arg(long, default_value = "solve-out")]
        out_dir: PathBuf,
    },
    /// Find a panchromatic subsimplex and the smooth profile it yields.
    Sperner {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        #[arg(long, default_value = "0", value_parser = rational)]
        gamma: Rational,
        /// Grid resolution (first level for `zoom`).
        #[arg(long)]
        grid: Option<u64>,
        /// Zoom levels for `zoom`; restarts for `walk`.
        #[arg(long)]
        max_refine: Option<u32>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Zoom)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Round a (delta, gamma/2)-approximate equilibrium to a (0, gamma) one.
    Round {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        eq: PathBuf,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        #[arg(long, value_parser = rational)]
        gamma: Rational,
    },
    /// Build and solve the support LP of a (0, gamma)-approximate equilibrium.
    Exactify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        eq: PathBuf,
        #[arg(long, value_parser = rational)]
        gamma: Rational,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Turn a 0/1 bimatrix game into a gadget game plus its index map.
    Reduce {
        #[arg(long)]
        bimatrix: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Exact)]
        variant: VariantArg,
        /// Approximate variant only; defaults to 1/n^7.
        #[arg(long, value_parser = rational)]
        delta: Option<Rational>,
        /// Approximate variant only; defaults to 1/n^7.
        #[arg(long, value_parser = rational)]
        gamma: Option<Rational>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Read a mixed profile off a gadget equilibrium and check it.
    ExtractNash {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        eq: PathBuf,
        #[arg(long)]
        bimatrix: PathBuf,
        /// Well-supported slack; defaults to 0 (exact) or 1/n (approximate).
        #[arg(long, value_parser = rational)]
        epsilon: Option<Rational>,
    },
    /// Simulate adaptive pacing and certify any convergence.
    Dynamics {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value = "1/64", value_parser = rational)]
        eta: Rational,
        #[arg(long, default_value = "1/8", value_parser = rational)]
        delta: Rational,
        #[arg(long, default_value = "1/4", value_parser = rational)]
        gamma: Rational,
        #[arg(long, default_value_t = 3000)]
        horizon: usize,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[arg(long, value_enum, default_value_t = DirectionArg::Coherent)]
        direction: DirectionArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print a seeded random game.
    Gen {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        max_value: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        max_budget: u32,
        /// Values and budgets are multiples of 1/denominator.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        denominator: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Zoom,
    Exhaustive,
    Walk,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Coherent,
    Literal,
}

fn rational(text: &str) -> Result<Rational, String> {
    Rational::parse(text).map_err(|e| e.to_string())
}

/// Input problems exit with 2; everything else is a pass/fail verdict.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        Self(e.into())
    }
}

type Verdict = std::result::Result<bool, InputError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_game(path: &Path) -> Result<Game> {
    parse_game(&read(path)?).with_context(|| format!("game file {}", path.display()))
}

fn load_eq(path: &Path) -> Result<Candidate> {
    parse_equilibrium(&read(path)?).with_context(|| format!("equilibrium file {}", path.display()))
}

fn params(delta: &Rational, gamma: &Rational) -> Result<ApproxParams<Rational>> {
    Ok(ApproxParams::new(delta.clone(), gamma.clone())?)
}

fn fits(game: &Game, eq: &Candidate, path: &Path) -> Result<()> {
    if !eq.matches(game) {
        bail!(
            "equilibrium file {}: field `alpha`/`x` has shape {}x{}, game is {}x{}",
            path.display(),
            eq.alpha().len(),
            eq.x().first().map_or(0, Vec::len),
            game.n(),
            game.m()
        );
    }
    Ok(())
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn emit(v: Value) {
    println!("{}", pretty(&v));
}

fn candidate_json(c: &Candidate) -> Value {
    json!({ "alpha": fmt_vec(c.alpha()), "x": fmt_mat(c.x()) })
}

fn verify(game: PathBuf, eqs: Vec<PathBuf>, delta: Rational, gamma: Rational) -> Verdict {
    let game = load_game(&game)?;
    let params = params(&delta, &gamma)?;
    if game.has_reserves() && !(delta.is_zero() && gamma.is_zero()) {
        return Err(anyhow::anyhow!("flag `--delta`/`--gamma`: games with reserves are only checked exactly").into());
    }
    let mut loaded = Vec::with_capacity(eqs.len());
    for path in &eqs {
        let eq = load_eq(path)?;
        fits(&game, &eq, path)?;
        loaded.push(eq);
    }
    let reports: Vec<Report> = loaded
        .par_iter()
        .map(|eq| {
            if game.has_reserves() {
                verify_reserve(&game, eq)
            } else {
                verify_approx(&game, eq, &params)
            }
            .expect("shapes checked above")
        })
        .collect();
    let passed = reports.iter().all(Report::passed);
    let docs: Vec<Value> = eqs
        .iter()
        .zip(&reports)
        .map(|(p, r)| json!({ "file": p.display().to_string(), "report": r.to_json() }))
        .collect();
    emit(json!({ "passed": passed, "results": docs }));
    Ok(passed)
}

fn schedules(grid: Option<u64>) -> Vec<Schedule> {
    let mut ladder = Schedule::ladder();
    if let Some(k) = grid {
        for s in &mut ladder {
            s.initial = k;
        }
    }
    ladder
}

fn smooth_json(s: &SmoothSolution<Rational>) -> Value {
    json!({
        "resolution": s.resolution(),
        "vertices": s.simplex.vertices().iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
        "colors": s.colors,
        "vertex": s.vertex,
        "alpha": fmt_vec(&s.alpha),
        "x": fmt_mat(&s.allocation),
        "report": s.report.to_json(),
    })
}

fn write_attempt(dir: &Path, k: usize, a: &Attempt<Rational>) -> Result<()> {
    let sub = dir.join(format!("attempt-{k}"));
    fs::create_dir_all(&sub).with_context(|| format!("cannot create {}", sub.display()))?;
    let head = json!({ "gamma": a.gamma.canonical(), "delta": a.delta.canonical(), "tau": a.tau().canonical() });
    write(&sub, "attempt.json", &pretty(&head))?;
    write(&sub, "smooth.json", &pretty(&smooth_json(&a.smooth)))?;
    write(&sub, "rounded.json", &serialize_equilibrium(&a.rounded))?;
    write(&sub, "round_trace.json", &pretty(&a.round.trace_json()))?;
    write(&sub, "support.json", &pretty(&serde_json::to_value(&a.support)?))?;
    write(&sub, "lp.txt", &a.lp.program.to_text())?;
    let solution = json!({
        "values": fmt_vec(&a.solution.values),
        "objective": a.solution.objective.canonical(),
        "basis": a.solution.basis,
    });
    write(&sub, "solution.json", &pretty(&solution))?;
    Ok(())
}

fn solve(game: PathBuf, gamma: Rational, max_refine: u32, grid: Option<u64>, dir: PathBuf) -> Verdict {
    let game = load_game(&game)?;
    if !gamma.is_positive() || gamma >= Rational::one() {
        return Err(anyhow::anyhow!("flag `--gamma`: {} must lie in (0, 1)", gamma.canonical()).into());
    }
    if grid == Some(0) {
        return Err(anyhow::anyhow!("flag `--grid`: resolution must be positive").into());
    }
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let config = PipelineConfig {
        initial_gamma: gamma,
        max_halvings: max_refine,
        schedules: schedules(grid),
    };
    match solve_exact_pipeline(&game, &config) {
        Ok(out) => {
            let report = if game.has_reserves() {
                verify_reserve(&game, &out.candidate)
            } else {
                verify_exact(&game, &out.candidate)
            }
            .expect("pipeline output fits its game");
            for (k, a) in out.attempts.iter().enumerate() {
                write_attempt(&dir, k, a)?;
            }
            if let Some(t) = &out.transformed {
                write(&dir, "transformed_game.json", &serialize_game(t))?;
            }
            write(&dir, "report.json", &pretty(&report.to_json()))?;
            if report.passed() {
                write(&dir, "equilibrium.json", &serialize_equilibrium(&out.candidate))?;
            }
            let gammas: Vec<String> = out.attempts.iter().map(|a| a.gamma.canonical()).collect();
            let mut doc = json!({ "status": "exact", "attempts": gammas, "report": report.to_json() });
            if report.passed() {
                doc["equilibrium"] = candidate_json(&out.candidate);
            } else {
                doc["status"] = json!("unverified");
            }
            emit(doc);
            Ok(report.passed())
        }
        Err(ExactifyError::Exhausted {
            gamma,
            tau,
            reason,
            approximate,
        }) => {
            let mut doc = json!({ "status": "exhausted", "gamma": gamma, "tau": tau, "reason": reason });
            if let Some(pair) = approximate {
                let (g, c) = *pair;
                let p = ApproxParams::new(Rational::zero(), g.clone()).expect("gamma < 1");
                let rep = verify_approx(&game, &c, &p).expect("fits");
                doc["approximate"] = json!({ "gamma": g.canonical(), "candidate": candidate_json(&c), "report": rep.to_json() });
                write(&dir, "approximate.json", &serialize_equilibrium(&c))?;
            }
            emit(doc);
            Ok(false)
        }
        Err(e) => {
            emit(json!({ "status": "error", "reason": e.to_string() }));
            Ok(false)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn sperner(
    game: PathBuf,
    delta: Rational,
    gamma: Rational,
    grid: Option<u64>,
    max_refine: Option<u32>,
    strategy: StrategyArg,
    seed: u64,
) -> Verdict {
    let game = load_game(&game)?;
    let params = params(&delta, &gamma)?;
    if !delta.is_positive() {
        return Err(anyhow::anyhow!("flag `--delta`: the coloring needs delta > 0").into());
    }
    if game.has_reserves() {
        return Err(anyhow::anyhow!("game file: field `reserves` must be absent for the smooth search").into());
    }
    let resolution = grid.unwrap_or(8).max(game.n() as u64);
    let found = match strategy {
        StrategyArg::Zoom => {
            let mut schedule = Schedule {
                initial: resolution,
                ..Schedule::default()
            };
            if let Some(levels) = max_refine {
                schedule.levels = levels;
            }
            solve_smooth(&game, &params, &schedule)
        }
        StrategyArg::Exhaustive | StrategyArg::Walk => {
            let strat = match strategy {
                StrategyArg::Walk => Strategy::RestartWalk {
                    seed,
                    restarts: max_refine.unwrap_or(16),
                    max_points: 50_000,
                },
                _ => Strategy::Exhaustive,
            };
            single_level(&game, &params, resolution, strat)
        }
    };
    match found {
        Ok(s) => {
            let passed = s.report.passed();
            emit(smooth_json(&s));
            Ok(passed)
        }
        Err(e) => {
            emit(json!({ "status": "error", "reason": e.to_string() }));
            Ok(false)
        }
    }
}

/// One panchromatic subsimplex at a fixed resolution; reports the first
/// vertex that verifies, or vertex 0 with its failing report.
fn single_level(
    game: &Game,
    params: &ApproxParams<Rational>,
    resolution: u64,
    strategy: Strategy,
) -> Result<SmoothSolution<Rational>, pacing::sperner::SpernerError> {
    let (simplex, colors) = find_panchromatic(game, &params.delta, resolution, strategy)?;
    let mut first = None;
    for (vertex, v) in simplex.vertices().iter().enumerate() {
        let (alpha, _) = extract_profile(game, v, &params.delta)?;
        let report = verify_smooth(game, &alpha, params).expect("shapes agree");
        let passed = report.passed();
        let allocation = report.allocation.clone().expect("smooth report carries x");
        let s = SmoothSolution {
            alpha,
            allocation,
            simplex: simplex.clone(),
            colors: colors.clone(),
            vertex,
            report,
        };
        if passed {
            return Ok(s);
        }
        first.get_or_insert(s);
    }
    Ok(first.expect("a subsimplex has vertices"))
}

fn round(game: PathBuf, eq: PathBuf, delta: Rational, gamma: Rational) -> Verdict {
    let g = load_game(&game)?;
    let c = load_eq(&eq)?;
    fits(&g, &c, &eq)?;
    params(&delta, &gamma)?;
    if g.has_reserves() {
        return Err(anyhow::anyhow!("game file: field `reserves` must be absent for rounding").into());
    }
    match approx_to_gamma(&g, &c, &delta, &gamma) {
        Ok((rounded, outcome)) => {
            let p = ApproxParams::new(Rational::zero(), gamma).expect("checked");
            let report = verify_approx(&g, &rounded, &p).expect("fits");
            emit(json!({
                "trace": outcome.trace_json(),
                "rounded": candidate_json(&rounded),
                "report": report.to_json(),
            }));
            Ok(report.passed())
        }
        Err(e) => {
            emit(json!({ "status": "error", "reason": e.to_string() }));
            Ok(false)
        }
    }
}

fn exactify(game: PathBuf, eq: PathBuf, gamma: Rational, out_dir: Option<PathBuf>) -> Verdict {
    let g = load_game(&game)?;
    let c = load_eq(&eq)?;
    fits(&g, &c, &eq)?;
    params(&Rational::zero(), &gamma)?;
    if g.has_reserves() {
        return Err(anyhow::anyhow!("game file: field `reserves` must be absent; transform the game first").into());
    }
    let support = match extract_support(&g, c.alpha(), c.x(), &gamma) {
        Ok(s) => s,
        Err(e) => {
            emit(json!({ "status": "error", "reason": e.to_string() }));
            return Ok(false);
        }
    };
    let lp = build_lp(&g, &support);
    if let Some(dir) = &out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write(dir, "lp.txt", &lp.program.to_text())?;
        write(dir, "support.json", &pretty(&serde_json::to_value(&support)?))?;
    }
    let mut doc = json!({ "support": support, "constraints": lp.program.constraints.len() });
    let solution = match solve_lp_exact(&lp) {
        Ok(s) => s,
        Err(e) => {
            doc["status"] = json!("error");
            doc["reason"] = json!(e.to_string());
            emit(doc);
            return Ok(false);
        }
    };
    let tau = solution.values[lp.tau_var()].clone();
    doc["tau"] = json!(tau.canonical());
    doc["solution"] = json!(fmt_vec(&solution.values));
    let passed = match extract_exact(&g, &lp, &solution, &support) {
        Ok(cand) => {
            let report = verify_exact(&g, &cand).expect("fits");
            doc["equilibrium"] = candidate_json(&cand);
            doc["report"] = report.to_json();
            if let Some(dir) = &out_dir {
                write(dir, "equilibrium.json", &serialize_equilibrium(&cand))?;
            }
            report.passed()
        }
        Err(e) => {
            doc["reason"] = json!(e.to_string());
            false
        }
    };
    doc["status"] = json!(if passed { "exact" } else { "not-exact" });
    emit(doc);
    Ok(passed)
}

fn reduce(
    bimatrix: PathBuf,
    variant: VariantArg,
    delta: Option<Rational>,
    gamma: Option<Rational>,
    out_dir: PathBuf,
) -> Verdict {
    let bm = parse_bimatrix(&read(&bimatrix)?).with_context(|| format!("bimatrix file {}", bimatrix.display()))?;
    let (game, index) = match variant {
        VariantArg::Exact => {
            if delta.is_some() || gamma.is_some() {
                return Err(anyhow::anyhow!("flag `--delta`/`--gamma`: only the approx variant takes them").into());
            }
            build_exact_gadget::<Rational>(&bm)
        }
        VariantArg::Approx => {
            let (d0, g0, _) = default_approx_params::<Rational>(bm.n());
            build_approx_gadget(&bm, delta.unwrap_or(d0), gamma.unwrap_or(g0)).context("flag `--delta`/`--gamma`")?
        }
    };
    fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    write(&out_dir, "game.json", &serialize_game(&game))?;
    write(&out_dir, "index.json", &index.to_json())?;
    emit(json!({ "buyers": index.buyer_count(), "goods": index.good_count(), "out_dir": out_dir.display().to_string() }));
    Ok(true)
}

fn extract_nash(game: PathBuf, index: PathBuf, eq: PathBuf, bimatrix: PathBuf, epsilon: Option<Rational>) -> Verdict {
    let g = load_game(&game)?;
    let idx = GadgetIndex::<Rational>::from_json(&read(&index)?).with_context(|| format!("index file {}", index.display()))?;
    let c = load_eq(&eq)?;
    fits(&g, &c, &eq)?;
    let bm = parse_bimatrix(&read(&bimatrix)?).with_context(|| format!("bimatrix file {}", bimatrix.display()))?;
    if idx.buyer_count() != g.n() || idx.good_count() != g.m() || bm.n() != idx.n() {
        return Err(anyhow::anyhow!("index file {}: field `n` does not match the game and bimatrix", index.display()).into());
    }
    let (profile, default_eps) = match &idx.variant {
        GadgetVariant::Exact => (extract_nash_exact(&g, &idx, c.alpha()), Rational::zero()),
        GadgetVariant::Approx { .. } => (
            extract_nash_approx(&g, &idx, c.alpha()),
            Rational::one() / Rational::from_i64(bm.n() as i64),
        ),
    };
    let profile = match profile {
        Ok(p) => p,
        Err(e) => {
            emit(json!({ "status": "error", "reason": e.to_string() }));
            return Ok(false);
        }
    };
    let eps = epsilon.unwrap_or(default_eps);
    let report = verify_wsne(&bm.cost_a(), &bm.cost_b(), &profile.x, &profile.y, &eps).expect("shapes agree");
    emit(json!({ "profile": profile.to_json(), "epsilon": eps.canonical(), "report": report.to_json() }));
    Ok(report.passed())
}

#[allow(clippy::too_many_arguments)]
fn dynamics(
    game: PathBuf,
    eta: Rational,
    delta: Rational,
    gamma: Rational,
    horizon: usize,
    window: usize,
    direction: DirectionArg,
    seed: u64,
    out_dir: Option<PathBuf>,
) -> Verdict {
    let g = load_game(&game)?;
    let mut config = DynamicsConfig::new(eta, delta, gamma, horizon, window).context("dynamics flags")?;
    config.direction = match direction {
        DirectionArg::Coherent => Direction::Coherent,
        DirectionArg::Literal => Direction::Literal,
    };
    config.seed = seed;
    let trajectory = simulate(&g, &config).context("game file")?;
    let report = convergence_report(&trajectory, &g, &config.params());
    if let Some(dir) = &out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write(dir, "trajectory.json", &pretty(&trajectory.to_json()))?;
        write(dir, "convergence.json", &pretty(&report.to_json()))?;
    }
    let mut doc = report.to_json();
    doc["days"] = json!(trajectory.days());
    doc["final_alpha"] = json!(fmt_vec(trajectory.final_profile()));
    emit(doc);
    Ok(report.certified())
}

fn gen(seed: u64, n: u32, m: u32, max_value: u32, max_budget: u32, denominator: u32) -> Verdict {
    let cfg = GenConfig {
        n: n as usize,
        m: m as usize,
        max_value,
        max_budget,
        denominator,
    };
    let game: Game = random_game(seed, &cfg);
    println!("{}", serialize_game(&game));
    Ok(true)
}

fn run(cli: Cli) -> Verdict {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(anyhow::anyhow!("flag `--jobs`: must be at least 1").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("flag `--jobs`")?;
    }
    match cli.command {
        Command::Verify { game, eq, delta, gamma } => verify(game, eq, delta, gamma),
        Command::Solve {
            game,
            gamma,
            max_refine,
            grid,
            out_dir,
        } => solve(game, gamma, max_refine, grid, out_dir),
        Command::Sperner {
            game,
            delta,
            gamma,
            grid,
            max_refine,
            strategy,
            seed,
        } => sperner(game, delta, gamma, grid, max_refine, strategy, seed),
        Command::Round { game, eq, delta, gamma } => round(game, eq, delta, gamma),
        Command::Exactify {
            game,
            eq,
            gamma,
            out_dir,
        } => exactify(game, eq, gamma, out_dir),
        Command::Reduce {
            bimatrix,
            variant,
            delta,
            gamma,
            out_dir,
        } => reduce(bimatrix, variant, delta, gamma, out_dir),
        Command::ExtractNash {
            game,
            index,
            eq,
            bimatrix,
            epsilon,
        } => extract_nash(game, index, eq, bimatrix, epsilon),
        Command::Dynamics {
            game,
            eta,
            delta,
            gamma,
            horizon,
            window,
            direction,
            seed,
            out_dir,
        } => dynamics(game, eta, delta, gamma, horizon, window, direction, seed, out_dir),
        Command::Gen {
            seed,
            n,
            m,
            max_value,
            max_budget,
            denominator,
        } => gen(seed, n, m, max_value, max_budget, denominator),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
