//! `rnf` — query and verify the rational-newform catalog.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use std::path::PathBuf;
use std::process::ExitCode;

use rnf_core::dims;
use rnf_core::heuristic;
use rnf_core::qseries::{naive_twist, QSeries};
use rnf_core::rings::Signs;
use rnf_core::shell::{Catalog, DEFAULT_PMAX, DEFAULT_PRECISION};
use rnf_core::verify;

#[derive(Parser)]
#[command(name = "rnf", version, about = "rational newform catalog tools")]
struct Cli {
    /// Directory with the data files (defaults to the embedded catalog)
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, default_value = "plain", value_parser = ["plain", "json"])]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact q-expansion of a cataloged form
    Expand(ExpandArgs),
    /// Run verification suites
    Verify(VerifyArgs),
    /// Exact signed new-space dimensions and masses
    Dims(DimsArgs),
    /// Ensemble volumes, splitting probabilities, lattice counts
    Heuristic(HeuristicArgs),
    /// Mod-ell matching and degeneracy reports
    Galrep(GalrepArgs),
    /// Query the twist-class tables and the form catalog
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Catalog label, e.g. Delta_22_3_plus_a
    #[arg(long)]
    label: String,
    /// Number of coefficients
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    prec: usize,
    /// Twist by a fundamental discriminant before printing
    #[arg(long, allow_negative_numbers = true)]
    twist: Option<i64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of rings, dims, heuristic, galrep, all
    #[arg(long, default_value = "all", value_parser = ["rings", "dims", "heuristic", "galrep", "all"])]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    prec: usize,
    #[arg(long, default_value_t = DEFAULT_PMAX)]
    pmax: u64,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    level: Option<u64>,
    #[arg(long)]
    weight: Option<i64>,
}

#[derive(Args)]
struct HeuristicArgs {
    /// Print the quadratic-ensemble totals and lattice points
    #[arg(long)]
    figure2: bool,
    /// Weight for splitting probabilities
    #[arg(long)]
    weight: Option<i64>,
    /// Degree split "r,s"
    #[arg(long)]
    rs: Option<String>,
}

#[derive(Args)]
struct GalrepArgs {
    #[arg(long, default_value_t = DEFAULT_PMAX)]
    pmax: u64,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    level: Option<u64>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    level: Option<u64>,
    #[arg(long)]
    weight: Option<i64>,
    /// Print the summatory count up to --xmax for --weight
    #[arg(long)]
    summatory: bool,
    #[arg(long, default_value_t = 30)]
    xmax: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn load_catalog(dir: &Option<PathBuf>) -> anyhow::Result<Catalog> {
    match dir {
        Some(d) => Catalog::load_dir(d).context("loading catalog from --data-dir"),
        None => Catalog::builtin().context("loading embedded catalog"),
    }
}

fn print_series(series: &QSeries, json: bool) {
    if json {
        let dense = series.to_dense_strings();
        println!("{}", serde_json::json!({ "dense": dense, "precision": series.precision() }));
    } else {
        println!("{}", series.to_sparse_string(usize::MAX));
        println!("[{}]", series.to_dense_strings().join(", "));
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let json = cli.format == "json";
    match &cli.command {
        Command::Expand(args) => {
            let cat = load_catalog(&cli.data_dir)?;
            let series = cat.expansion(&args.label, args.prec)?;
            match args.twist {
                None => print_series(&series, json),
                Some(d) => {
                    let form = cat.form(&args.label)?;
                    let t = naive_twist(&series, d, form.level)?;
                    print_series(&t.series, json);
                    println!(
                        "level bound {} ({})",
                        t.level_bound,
                        if t.exact { "attained at every prime" } else { "upper bound" }
                    );
                }
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let cat = load_catalog(&cli.data_dir)?;
            let checks = verify::run_suite(&cat, &args.suite, args.prec, args.pmax)?;
            let mut failures = 0usize;
            let mut by_suite: std::collections::BTreeMap<&str, (usize, usize)> = Default::default();
            for c in &checks {
                let e = by_suite.entry(c.suite).or_default();
                e.1 += 1;
                if c.pass {
                    e.0 += 1;
                } else {
                    failures += 1;
                }
                if json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "suite": c.suite, "name": c.name, "pass": c.pass, "detail": c.detail
                        })
                    );
                } else if !c.pass {
                    println!("FAIL {} [{}]: {}", c.name, c.suite, c.detail);
                }
            }
            if !json {
                for (suite, (pass, total)) in &by_suite {
                    println!("suite {}: {}/{} checks pass", suite, pass, total);
                }
                println!("total: {} checks, {} failures", checks.len(), failures);
            }
            Ok(failures == 0)
        }
        Command::Dims(args) => {
            let cat = load_catalog(&cli.data_dir)?;
            for row in &cat.table2.rows {
                if args.level.is_some_and(|n| row.level != n) {
                    continue;
                }
                let weights: Vec<i64> = match args.weight {
                    Some(k) => vec![k],
                    None => (2..=50).step_by(2).collect(),
                };
                for k in weights {
                    let dim = dims::dim_new_signed_exact(row.level, k, &row.signs)?;
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "level": row.level, "signs": row.signs.to_string(), "weight": k,
                                "dim": dim, "mass": row.mass,
                                "approx": dims::dim_new_approx(k, row.level).to_string(),
                            })
                        );
                    } else if dim != 0 || args.weight.is_some() {
                        println!(
                            "N={} eps={} k={}: dim {} (mass {}, approx {})",
                            row.level,
                            row.signs,
                            k,
                            dim,
                            row.mass,
                            dims::dim_new_approx(k, row.level)
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::Heuristic(args) => {
            if args.figure2 {
                let w2 = BigRational::from_integer(32.into());
                let (total, split) = heuristic::count_quadratics(&w2);
                let (all, split_pts) = heuristic::figure2_points(&w2);
                if json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "total": total, "split": split,
                            "points": all, "split_points": split_pts
                        })
                    );
                } else {
                    println!("total {} split {}", total, split);
                    println!("points: {:?}", all);
                    println!("split points: {:?}", split_pts);
                }
            }
            if let (Some(k), Some(rs)) = (args.weight, args.rs.as_deref()) {
                let (r, s) = rs
                    .split_once(',')
                    .ok_or_else(|| anyhow!("--rs expects r,s"))?;
                let (r, s): (u32, u32) = (r.trim().parse()?, s.trim().parse()?);
                let p = heuristic::pr_of_weight(r, s, k);
                if json {
                    println!("{}", serde_json::json!({"r": r, "s": s, "k": k, "pr": p}));
                } else {
                    println!("Pr_{},{}({}) = {:.6e}", r, s, k, p);
                }
            }
            Ok(true)
        }
        Command::Galrep(args) => {
            let cat = load_catalog(&cli.data_dir)?;
            let expansions = cat.expand_all(DEFAULT_PRECISION)?;
            let mut all_ok = true;
            for ell in rnf_core::galrep::ELLS {
                if args.ell.is_some_and(|e| e != ell) {
                    continue;
                }
                for level in rnf_core::rings::LEVELS {
                    if args.level.is_some_and(|n| n != level) {
                        continue;
                    }
                    let report = verify::governance(&cat, ell, level, args.pmax, &expansions)?;
                    let defective: Option<&str> = cat
                        .polys
                        .iter()
                        .find(|p| p.ell == ell && p.level == level && p.defect.is_some())
                        .map(|p| p.label.as_str());
                    for (label, assigned) in &report.assignment {
                        let degen = report.degenerate_pairs.get(label);
                        let by_elimination = assigned.is_none() && degen.is_none();
                        if by_elimination && defective.is_none() {
                            all_ok = false;
                        }
                        if json {
                            println!(
                                "{}",
                                serde_json::json!({
                                    "ell": ell, "label": label,
                                    "governed_by": assigned,
                                    "eisenstein_pair": degen,
                                    "by_elimination": if by_elimination { defective } else { None },
                                })
                            );
                        } else {
                            match (assigned, degen) {
                                (Some(p), _) => println!("ell={} {}: governed by {}", ell, label, p),
                                (None, Some((i, j))) => {
                                    println!("ell={} {}: degenerate, a_p = p^{} + p^{}", ell, label, i, j)
                                }
                                (None, None) => match defective {
                                    Some(d) => println!(
                                        "ell={} {}: attributed to {} by elimination (stored polynomial defective)",
                                        ell, label, d
                                    ),
                                    None => println!("ell={} {}: UNRESOLVED", ell, label),
                                },
                            }
                        }
                    }
                }
            }
            Ok(all_ok)
        }
        Command::Catalog(args) => {
            let cat = load_catalog(&cli.data_dir)?;
            if args.summatory {
                let k = args.weight.ok_or_else(|| anyhow!("--summatory needs --weight"))?;
                let total = cat.summatory(k, args.xmax)?;
                if json {
                    println!("{}", serde_json::json!({"weight": k, "xmax": args.xmax, "count": total}));
                } else {
                    println!("#_{}({}) = {}", k, args.xmax, total);
                }
                return Ok(true);
            }
            let entries = cat.query_table1(args.level, args.weight);
            for e in &entries {
                if json {
                    println!("{}", serde_json::to_string(e)?);
                } else {
                    println!(
                        "N={} k={}: {} twist classes ({} unforced)",
                        e.level, e.weight, e.count, e.unforced
                    );
                }
            }
            if args.level.is_some_and(|n| rnf_core::rings::LEVELS.contains(&n)) || args.level.is_none()
            {
                for f in cat.forms_at(args.level, args.weight, None) {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "label": f.label, "level": f.level,
                                "weight": f.weight, "signs": f.signs.to_string()
                            })
                        );
                    } else {
                        println!("form {} (N={}, k={}, eps={})", f.label, f.level, f.weight, f.signs);
                    }
                }
            }
            if entries.is_empty() && args.level.is_some() {
                println!("no stored twist classes for the requested cell(s)");
            }
            Ok(true)
        }
    }
}

fn _signs_unused(_: Signs) {}
