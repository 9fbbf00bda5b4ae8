//! Command-line front end: solve games, evaluate and trace plays, and
//! generate instance families. Reports are line-oriented `key: value` pairs
//! (or one JSON object with `--json`); exit codes partition the outcomes:
//! 0 win, 1 lose, 2 unknown, 3 usage or input error, 4 resource error.

use std::path::PathBuf;
use std::process::ExitCode;

use aeg_core::ael::AelConfig;
use aeg_core::game::{random_game, GameGraph};
use aeg_core::mp;
use aeg_core::oracle;
use aeg_core::payoff::{lasso_payoffs, Objective};
use aeg_core::reduce::{self, CountdownGame, MemoryFamily, SubsetSumInstance};
use aeg_core::value::{rat_int, ExtRational, Rational};
use aeg_core::{ae, bounded, Player, SolveError, SolveOutcome, Status, Witness};
use aeg_tools::format::{parse_game, parse_lasso, parse_rational, render_game};
use aeg_tools::parallel::ael_incremental_with_jobs;
use aeg_tools::report;
use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

#[derive(Parser)]
#[command(name = "aeg", version, about = "Exact solvers for average-energy games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an objective on a game file.
    Solve(SolveArgs),
    /// Evaluate all payoffs of an ultimately-periodic play.
    Evaluate(EvaluateArgs),
    /// Emit the step/energy/average trace of a play as CSV.
    Trace(TraceArgs),
    /// Generate instance families as game files.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Game file.
    #[arg(long)]
    input: PathBuf,
    /// One of mp, egl, eglu, ae, aelu, ael.
    #[arg(long)]
    objective: String,
    /// Threshold `p/q` (mp, ae, aelu, ael).
    #[arg(long)]
    threshold: Option<String>,
    /// Energy upper bound U (eglu, aelu).
    #[arg(long = "upper-bound")]
    upper_bound: Option<String>,
    /// Initial credit (egl only, default 0).
    #[arg(long)]
    credit: Option<String>,
    /// Cap for the incremental two-player ael loop.
    #[arg(long = "u-max")]
    u_max: Option<String>,
    /// Print the witness strategy or play.
    #[arg(long)]
    witness: bool,
    /// Print the optimal value when the solver computes one.
    #[arg(long)]
    value: bool,
    /// Cross-check the verdict against a brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Emit one JSON object instead of key: value lines.
    #[arg(long)]
    json: bool,
    /// Worker threads for the incremental ael loop.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Play in the lasso syntax `a,c,a | a,b` (empty prefix: `| a,b`).
    #[arg(long)]
    lasso: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lasso: String,
    /// Last position to print; rows cover steps 0..=N.
    #[arg(long)]
    steps: usize,
}

#[derive(Args)]
struct GenerateArgs {
    /// One of mp2ae, subsetsum, countdown, fig5a, fig5b, fig8, random.
    #[arg(long)]
    family: String,
    /// Family parameter U (fig5a, fig5b).
    #[arg(long)]
    param: Option<String>,
    /// Subset-sum values, comma-separated.
    #[arg(long)]
    values: Option<String>,
    /// Subset-sum target.
    #[arg(long)]
    target: Option<String>,
    /// Countdown edges as `from:duration:to`, comma-separated.
    #[arg(long)]
    edges: Option<String>,
    /// Countdown initial counter.
    #[arg(long)]
    c0: Option<String>,
    /// Countdown initial vertex (defaults to the first mentioned).
    #[arg(long = "init-vertex")]
    init_vertex: Option<String>,
    /// Input game (mp2ae).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Threshold for mp2ae.
    #[arg(long)]
    threshold: Option<String>,
    /// Random family: number of states.
    #[arg(long)]
    states: Option<usize>,
    #[arg(long = "max-weight", default_value_t = 3)]
    max_weight: u32,
    #[arg(long = "p1-fraction", default_value_t = 0.5)]
    p1_fraction: f64,
    /// Random family: out-degree range `lo:hi`.
    #[arg(long = "out-degree", default_value = "1:3")]
    out_degree: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Resource(String),
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> CliError {
        match e {
            SolveError::BudgetExceeded(_) | SolveError::ExpansionTooLarge(_) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind;
            let benign = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn load_game(path: &PathBuf) -> Result<GameGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_game(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn need_rational(opt: &Option<String>, what: &str) -> Result<Rational, CliError> {
    let s = opt
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("--{what} is required for this objective")))?;
    parse_rational(s).map_err(CliError::Usage)
}

fn need_biguint(opt: &Option<String>, what: &str) -> Result<BigUint, CliError> {
    let s = opt
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("--{what} is required for this objective")))?;
    s.trim()
        .parse::<BigUint>()
        .map_err(|_| CliError::Usage(format!("--{what}: bad nonnegative integer `{s}`")))
}

fn status_code(s: Status) -> ExitCode {
    match s {
        Status::Win => ExitCode::SUCCESS,
        Status::Lose => ExitCode::from(1),
        Status::Unknown => ExitCode::from(2),
    }
}

const ORACLE_BUDGET: u64 = 2_000_000;

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    let g = load_game(&args.input)?;
    let one_player_p1 = g.sole_owner() == Some(Player::P1);

    let (outcome, oracle_obj): (SolveOutcome, Option<Objective>) = match args.objective.as_str() {
        "mp" => {
            let t = if args.threshold.is_none() && args.value {
                rat_of_value(&ae_mp_value(&g))
            } else {
                need_rational(&args.threshold, "threshold")?
            };
            let (winner, strategy) = mp::mp_decide(&g, &t);
            let status = if winner == Player::P1 {
                Status::Win
            } else {
                Status::Lose
            };
            let mut out = SolveOutcome::new(status, "mp-threshold").with_witness(
                Witness::Positional {
                    player: winner,
                    strategy,
                },
            );
            if args.value {
                out.value = Some(ExtRational::Fin(ae_mp_value(&g)));
            }
            (out, Some(Objective::Mp { threshold: t }))
        }
        "egl" => {
            let c0 = match &args.credit {
                Some(_) => need_biguint(&args.credit, "credit")?,
                None => BigUint::from(0u32),
            };
            let (credits, strategy) = mp::minimal_credit_strategy(&g);
            let (status, value) = match &credits[g.init().0] {
                mp::Credit::Finite(c) => (
                    if c <= &c0 { Status::Win } else { Status::Lose },
                    ExtRational::Fin(rat_int(BigInt::from(c.clone()))),
                ),
                mp::Credit::Unwinnable => (Status::Lose, ExtRational::PosInf),
            };
            let mut out = SolveOutcome::new(status, "energy-credit-fixpoint");
            if args.value {
                out.value = Some(value);
            }
            if status == Status::Win {
                out.witness = Some(Witness::Positional {
                    player: Player::P1,
                    strategy,
                });
            }
            (out, Some(Objective::Egl { initial_credit: c0 }))
        }
        "eglu" => {
            let u = need_biguint(&args.upper_bound, "upper-bound")?;
            let out = bounded::eglu_decide(&g, &u)?;
            (out, Some(Objective::Eglu { upper_bound: u }))
        }
        "ae" => {
            if args.threshold.is_none() && !args.value {
                return Err(CliError::Usage(
                    "--objective ae needs --threshold or --value".into(),
                ));
            }
            let value = if args.value || one_player_p1 {
                Some(solve_ae_value(&g)?)
            } else {
                None
            };
            let (status, out) = match &args.threshold {
                Some(ts) => {
                    let t = parse_rational(ts).map_err(CliError::Usage)?;
                    let out = if one_player_p1 {
                        let mut o = ae::ae_solve_one_player(&g)?;
                        let v = o.value.clone().unwrap();
                        o.status = if v <= ExtRational::Fin(t.clone()) {
                            Status::Win
                        } else {
                            Status::Lose
                        };
                        o
                    } else {
                        ae::ae_solve_two_player(&g, &t)?
                    };
                    (out.status, (out, Some(Objective::Ae { threshold: t })))
                }
                None => {
                    // value query: winning means some finite threshold works
                    let v = value.clone().unwrap();
                    let status = if v < ExtRational::PosInf {
                        Status::Win
                    } else {
                        Status::Lose
                    };
                    let route = if one_player_p1 {
                        "one-player-zero-cycle"
                    } else {
                        "offset-expansion-mp"
                    };
                    (status, (SolveOutcome::new(status, route), None))
                }
            };
            let (mut out, obj) = out;
            let _ = status;
            if args.value {
                out.value = value;
            }
            (out, obj)
        }
        "aelu" => {
            let u = need_biguint(&args.upper_bound, "upper-bound")?;
            let t = need_rational(&args.threshold, "threshold")?;
            let out = if g.sole_owner().is_some() {
                bounded::aelu_decide_one_player(&g, &u, &t)?
            } else {
                bounded::aelu_decide_two_player(&g, &u, &t)?
            };
            (
                out,
                Some(Objective::Aelu {
                    upper_bound: u,
                    threshold: t,
                }),
            )
        }
        "ael" => {
            let t = need_rational(&args.threshold, "threshold")?;
            let out = if g.sole_owner().is_some() {
                aeg_core::ael::ael_decide_one_player(&g, &t)?
            } else {
                let mut cfg = AelConfig::new(t.clone());
                if args.u_max.is_some() {
                    cfg = cfg.with_u_max(need_biguint(&args.u_max, "u-max")?);
                }
                ael_incremental_with_jobs(&g, &cfg, args.jobs)?
            };
            (out, None)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown objective `{other}` (expected mp|egl|eglu|ae|aelu|ael)"
            )))
        }
    };

    let oracle_line = if args.oracle {
        Some(run_oracle(&g, oracle_obj.as_ref(), outcome.status)?)
    } else {
        None
    };
    let oracle_ref = oracle_line
        .as_ref()
        .map(|(verdict, agree)| (verdict.as_str(), *agree));

    if args.json {
        let obj = report::outcome_json(&g, &outcome, args.witness, oracle_ref);
        println!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
    } else {
        print!(
            "{}",
            report::outcome_text(&g, &outcome, args.value, args.witness, oracle_ref)
        );
    }
    Ok(status_code(outcome.status))
}

fn ae_mp_value(g: &GameGraph) -> Rational {
    mp::mp_value(g).values[g.init().0].clone()
}

fn rat_of_value(r: &Rational) -> Rational {
    r.clone()
}

fn solve_ae_value(g: &GameGraph) -> Result<ExtRational, CliError> {
    if g.sole_owner() == Some(Player::P1) {
        Ok(ae::ae_solve_one_player(g)?.value.expect("value computed"))
    } else {
        Ok(ae::ae_value_two_player(g)?)
    }
}

fn run_oracle(
    g: &GameGraph,
    objective: Option<&Objective>,
    solver_status: Status,
) -> Result<(String, bool), CliError> {
    let Some(objective) = objective else {
        return Ok(("unavailable".to_string(), true));
    };
    let wins = match objective {
        Objective::Mp { .. } | Objective::Ae { .. } | Objective::Egl { .. } => {
            oracle::decide_positional(g, objective, ORACLE_BUDGET)?
        }
        Objective::Eglu { upper_bound } => {
            let t = rat_int(BigInt::from(upper_bound.clone()));
            let exp = bounded::ExpandedGame::build_lu(g, upper_bound, &t)?.to_mp();
            oracle::decide_positional(
                exp.game(),
                &Objective::Mp { threshold: t },
                ORACLE_BUDGET,
            )?
        }
        Objective::Aelu {
            upper_bound,
            threshold,
        } => {
            let exp = bounded::ExpandedGame::build_lu(g, upper_bound, threshold)?.to_mp();
            oracle::decide_positional(
                exp.game(),
                &Objective::Mp {
                    threshold: threshold.clone(),
                },
                ORACLE_BUDGET,
            )?
        }
        Objective::Ael { .. } => return Ok(("unavailable".to_string(), true)),
    };
    let verdict = if wins { Status::Win } else { Status::Lose };
    Ok((verdict.to_string(), verdict == solver_status))
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<ExitCode, CliError> {
    let g = load_game(&args.input)?;
    let l = parse_lasso(&g, &args.lasso).map_err(CliError::Usage)?;
    let p = lasso_payoffs(&g, &l);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report::payoffs_json(&p)).expect("serializable")
        );
    } else {
        print!("{}", report::payoffs_text(&p));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(args: TraceArgs) -> Result<ExitCode, CliError> {
    let g = load_game(&args.input)?;
    let l = parse_lasso(&g, &args.lasso).map_err(CliError::Usage)?;
    print!("{}", report::trace_csv(&g, &l, args.steps));
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, CliError> {
    let (text, note) = match args.family.as_str() {
        "fig5a" | "fig5b" => {
            let u = need_biguint(&args.param, "param")?;
            let kind = if args.family == "fig5a" {
                MemoryFamily::Fig5a
            } else {
                MemoryFamily::Fig5b
            };
            let g = reduce::memory_family(kind, Some(&u))?;
            (render_game(&g), format!("# family {} u {u}\n", args.family))
        }
        "fig8" => {
            let g = reduce::memory_family(MemoryFamily::Fig8, None)?;
            (render_game(&g), "# family fig8\n".to_string())
        }
        "subsetsum" => {
            let values = args
                .values
                .as_ref()
                .ok_or_else(|| CliError::Usage("--values is required".into()))?
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<BigUint>()
                        .map_err(|_| CliError::Usage(format!("bad value `{v}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let target = need_biguint(&args.target, "target")?;
            let inst = SubsetSumInstance::new(values, target)?;
            let (g, t) = reduce::subset_sum_to_ael(&inst);
            (
                render_game(&g),
                format!("# objective ael threshold {}\n", report::render_rational(&t)),
            )
        }
        "countdown" => {
            let spec = args
                .edges
                .as_ref()
                .ok_or_else(|| CliError::Usage("--edges is required".into()))?;
            let mut names: Vec<String> = Vec::new();
            let index = |n: &str, names: &mut Vec<String>| -> usize {
                match names.iter().position(|x| x == n) {
                    Some(i) => i,
                    None => {
                        names.push(n.to_string());
                        names.len() - 1
                    }
                }
            };
            let mut edges = Vec::new();
            for part in spec.split(',') {
                let mut it = part.trim().split(':');
                let (Some(from), Some(dur), Some(to), None) =
                    (it.next(), it.next(), it.next(), it.next())
                else {
                    return Err(CliError::Usage(format!(
                        "bad countdown edge `{part}` (expected from:duration:to)"
                    )));
                };
                let d = dur
                    .parse::<BigUint>()
                    .map_err(|_| CliError::Usage(format!("bad duration `{dur}`")))?;
                let f = index(from, &mut names);
                let t = index(to, &mut names);
                edges.push((f, d, t));
            }
            let init = match &args.init_vertex {
                Some(n) => names
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| CliError::Usage(format!("unknown vertex `{n}`")))?,
                None => 0,
            };
            let c0 = need_biguint(&args.c0, "c0")?;
            let cg = CountdownGame::new(names, edges, init, c0)?;
            let (g, t) = reduce::countdown_to_ael(&cg);
            (
                render_game(&g),
                format!("# objective ael threshold {}\n", report::render_rational(&t)),
            )
        }
        "mp2ae" => {
            let input = args
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("--input is required for mp2ae".into()))?;
            let g = load_game(input)?;
            let t = need_rational(&args.threshold, "threshold")?;
            let (h, t) = reduce::mp_to_ae(&g, &t);
            (
                render_game(&h),
                format!("# objective ae threshold {}\n", report::render_rational(&t)),
            )
        }
        "random" => {
            let n = args
                .states
                .ok_or_else(|| CliError::Usage("--states is required for random".into()))?;
            let seed = args
                .seed
                .ok_or_else(|| CliError::Usage("--seed is required for random".into()))?;
            let (lo, hi) = args
                .out_degree
                .split_once(':')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| CliError::Usage("--out-degree must be lo:hi".into()))?;
            let g = random_game(n, args.max_weight, args.p1_fraction, (lo, hi), seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            (render_game(&g), format!("# family random seed {seed}\n"))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown family `{other}` (expected mp2ae|subsetsum|countdown|fig5a|fig5b|fig8|random)"
            )))
        }
    };

    let content = format!("{note}{text}");
    match &args.output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{content}"),
    }
    Ok(ExitCode::SUCCESS)
}
