//! Command-line harness: generators, class checks, gadget reductions,
//! exact partition computations, and the experiment drivers, all with
//! reproducible seeds and machine-readable artifacts.

mod artifact;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::Ratio;
use serde_json::{json, Value};

use quasiline::decode::{decode_experiment, distinguisher, exact_z_oracle};
use quasiline::expander::certify_magnifier;
use quasiline::field::{field_polynomial, univariate_roots_in_z};
use quasiline::gadget::{
    build_reduction, fiber_count, h_gadget_graph, internal_cut_audit, j_gadget_graph, GadgetKind,
    ReductionOutput,
};
use quasiline::generate::{random_bipartite_cubic, random_cubic};
use quasiline::graph::{Graph, Multigraph};
use quasiline::maxcut::{flip_local_search, flip_local_search_randomized, maxcut_exact};
use quasiline::recognition::{is_claw_free, is_quasi_line, validate_krausz_cover, KrauszCover};
use quasiline::scalar::{parse_mu, ratio_string, MuSpec};
use quasiline::spin::{cut_polynomial_with_cap, partition_eval, SpinConfig, DEFAULT_ENUM_CAP};
use quasiline::torpid::{
    bottleneck_sums_of, escape_time_experiment, omega_conductance, EscapeConfig,
};
use quasiline::zsigma::{fiber_polynomial, sandwich_check_all};
use quasiline::Error;

use artifact::{out_dir, sha256_hex, wrap, write_atomic, write_json};

#[derive(Parser)]
#[command(
    name = "quasiline",
    version,
    about = "Exact Ising partition functions, Glauber dynamics diagnostics, and \
             cubic-graph gadget reductions",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    /// Output directory for artifacts (default: $QUASILINE_OUT or ".")
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for replicated experiments (1 = sequential baseline)
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (random cubic, random bipartite cubic, or named)
    Gen(GenArgs),
    /// Check claw-freeness, quasi-line structure, and optionally a Krausz cover
    CheckClass(CheckClassArgs),
    /// Build the gadget reduction of a cubic base graph
    BuildGstar(BuildGstarArgs),
    /// Exact cut polynomial by exhaustive enumeration
    Cutpoly(CutpolyArgs),
    /// Exact fiber weight polynomial Z_sigma over a gadget reduction
    Zsigma(ZsigmaArgs),
    /// Verify the fiber-weight envelope for every base configuration
    Sandwich(SandwichArgs),
    /// Magnifier certification plus exact balance-class partition sums
    Bottleneck(BottleneckArgs),
    /// Phase-escape experiment with a line-graph control
    Escape(EscapeArgs),
    /// Gibbs decoder experiment and distinguisher check
    Decode(DecodeArgs),
    /// Enumerate all configurations of a single gadget
    AuditGadget(AuditGadgetArgs),
    /// Maximum cut, exact or by flip local search
    Maxcut(MaxcutArgs),
    /// Complex roots of the uniform-field polynomial at fixed mu
    Roots(RootsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    H,
    J,
}

impl From<KindArg> for GadgetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::H => GadgetKind::H,
            KindArg::J => GadgetKind::J,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    what: GenWhat,
}

#[derive(Subcommand)]
enum GenWhat {
    /// Random connected cubic graph (pairing model)
    Cubic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
    /// Random bipartite cubic graph (three perfect matchings)
    BipartiteCubic {
        #[arg(long)]
        n_per_side: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
    /// Named graph: k4, k33, petersen, h-gadget, j-gadget, cycle:<n>,
    /// path:<n>, complete:<n>, star:<k>
    Named {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CheckClassArgs {
    #[arg(long)]
    graph: PathBuf,
    /// optional Krausz cover file: {"cliques": [[...], ...]}
    #[arg(long)]
    cover: Option<PathBuf>,
}

#[derive(Args)]
struct BuildGstarArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::H)]
    kind: KindArg,
    #[arg(long)]
    out_file: Option<PathBuf>,
}

#[derive(Args)]
struct CutpolyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    /// evaluate the polynomial at this exact mu as well
    #[arg(long)]
    mu: Option<String>,
}

#[derive(Args)]
struct ZsigmaArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::H)]
    kind: KindArg,
    /// base configuration as a +/- string, e.g. "++--"
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    mu: Option<String>,
}

#[derive(Args)]
struct SandwichArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::H)]
    kind: KindArg,
}

#[derive(Args)]
struct BottleneckArgs {
    /// bipartite cubic base graph file (must carry its bipartition)
    #[arg(long)]
    base: PathBuf,
    /// exact evaluation point, e.g. "2^76"
    #[arg(long, default_value = "2^76")]
    mu: String,
    /// expansion constant to certify, as p/q
    #[arg(long, default_value = "1/8")]
    certify_c: String,
}

#[derive(Args)]
struct EscapeArgs {
    /// JSON config file {sizes, mu, replicates, step_cap, seed}; flags
    /// override fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// comma-separated side sizes, e.g. "3,4"
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    step_cap: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    mu: String,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// near-optimality ratio p/q: success means cut > (p/q) * maxcut
    #[arg(long, default_value = "997/1000")]
    ratio: String,
    /// also run the distinguisher against the exact-Z oracle at this mu
    #[arg(long)]
    distinguish_mu: Option<String>,
}

#[derive(Args)]
struct AuditGadgetArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaxcutMethod {
    Exact,
    LocalSearch,
}

#[derive(Args)]
struct MaxcutArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = MaxcutMethod::Exact)]
    method: MaxcutMethod,
    /// start configuration for local search: a +/- string or "random"
    #[arg(long, default_value = "random")]
    start: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// randomize the scan order of the local search
    #[arg(long, default_value_t = false)]
    shuffle: bool,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "2")]
    mu: String,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

/// 0 on success, 2 on precondition/cap violations, 1 on internal errors.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

fn load_graph(path: &Path) -> Result<(Graph, String), Error> {
    let bytes = std::fs::read(path)?;
    let value: Value = serde_json::from_slice(&bytes)?;
    Ok((Graph::from_json(&value)?, sha256_hex(&bytes)))
}

#[allow(dead_code)]
fn load_multigraph(path: &Path) -> Result<(Multigraph, String), Error> {
    let bytes = std::fs::read(path)?;
    let value: Value = serde_json::from_slice(&bytes)?;
    Ok((Multigraph::from_json(&value)?, sha256_hex(&bytes)))
}

/// The reduction document is the graph JSON format itself (so any command
/// accepting a graph file can consume it) plus layout/krausz/base
/// sections.
fn reduction_json(out: &ReductionOutput) -> Value {
    let mut doc = out.graph.to_json();
    let obj = doc.as_object_mut().unwrap();
    obj.insert("layout".into(), serde_json::to_value(&out.layout).unwrap());
    obj.insert(
        "krausz".into(),
        serde_json::to_value(out.krausz.as_ref().map(|k| &k.cliques)).unwrap(),
    );
    obj.insert("base".into(), out.base.to_json());
    doc
}

fn parse_ratio_u64(s: &str) -> Result<Ratio<u64>, Error> {
    let err = || Error::Parse {
        what: "ratio",
        input: s.to_string(),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: u64 = p.trim().parse().map_err(|_| err())?;
            let q: u64 = q.trim().parse().map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            Ok(Ratio::new(p, q))
        }
        None => {
            let p: u64 = s.trim().parse().map_err(|_| err())?;
            Ok(Ratio::new(p, 1))
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let dir = out_dir(&cli.out);
    match cli.command {
        Command::Gen(args) => cmd_gen(args, &dir),
        Command::CheckClass(args) => cmd_check_class(args, &dir),
        Command::BuildGstar(args) => cmd_build_gstar(args, &dir),
        Command::Cutpoly(args) => cmd_cutpoly(args, &dir),
        Command::Zsigma(args) => cmd_zsigma(args, &dir),
        Command::Sandwich(args) => cmd_sandwich(args, &dir),
        Command::Bottleneck(args) => cmd_bottleneck(args, &dir),
        Command::Escape(args) => cmd_escape(args, &dir, cli.workers),
        Command::Decode(args) => cmd_decode(args, &dir),
        Command::AuditGadget(args) => cmd_audit_gadget(args, &dir),
        Command::Maxcut(args) => cmd_maxcut(args, &dir),
        Command::Roots(args) => cmd_roots(args, &dir),
    }
}

fn cmd_gen(args: GenArgs, dir: &Path) -> Result<(), Error> {
    let (graph, config, default_name) = match &args.what {
        GenWhat::Cubic { n, seed, .. } => (
            random_cubic(*n, *seed)?,
            json!({"kind": "cubic", "n": n, "seed": seed}),
            format!("cubic_n{n}_seed{seed}.json"),
        ),
        GenWhat::BipartiteCubic {
            n_per_side, seed, ..
        } => (
            random_bipartite_cubic(*n_per_side, *seed)?,
            json!({"kind": "bipartite-cubic", "n_per_side": n_per_side, "seed": seed}),
            format!("bipartite_cubic_s{n_per_side}_seed{seed}.json"),
        ),
        GenWhat::Named { name, .. } => (
            named_graph(name)?,
            json!({"kind": "named", "name": name}),
            format!("{}.json", name.replace(':', "_")),
        ),
    };
    let out_file = match &args.what {
        GenWhat::Cubic { out_file, .. }
        | GenWhat::BipartiteCubic { out_file, .. }
        | GenWhat::Named { out_file, .. } => out_file.clone(),
    };
    let path = out_file.unwrap_or_else(|| dir.join(default_name));

    // the graph document itself is the artifact; the generator config and
    // content hash ride along as extra keys that loaders ignore
    let mut doc = graph.to_json();
    let hash = graph.stable_hash();
    doc.as_object_mut().unwrap().insert("generator".into(), config);
    doc.as_object_mut()
        .unwrap()
        .insert("input_hash".into(), json!(hash));
    write_json(&path, &doc)?;
    println!(
        "wrote {} ({} vertices, {} edges)",
        path.display(),
        graph.n(),
        graph.m()
    );
    Ok(())
}

fn named_graph(name: &str) -> Result<Graph, Error> {
    let parse_param = |s: &str| -> Result<usize, Error> {
        s.parse().map_err(|_| Error::Parse {
            what: "graph name parameter",
            input: s.to_string(),
        })
    };
    Ok(match name {
        "k4" => Graph::complete(4),
        "k33" => Graph::complete_bipartite(3, 3),
        "petersen" => Graph::petersen(),
        "h-gadget" => h_gadget_graph(),
        "j-gadget" => j_gadget_graph(),
        _ => {
            let (kind, param) = name.split_once(':').ok_or_else(|| Error::Parse {
                what: "graph name",
                input: name.to_string(),
            })?;
            match kind {
                "cycle" => Graph::cycle(parse_param(param)?),
                "path" => Graph::path(parse_param(param)?),
                "complete" => Graph::complete(parse_param(param)?),
                "star" => Graph::star(parse_param(param)?),
                _ => {
                    return Err(Error::Parse {
                        what: "graph name",
                        input: name.to_string(),
                    })
                }
            }
        }
    })
}

fn cmd_check_class(args: CheckClassArgs, dir: &Path) -> Result<(), Error> {
    let (graph, hash) = load_graph(&args.graph)?;
    let (claw_free, claw_witness) = is_claw_free(&graph);
    let (quasi_line, ql_witness) = is_quasi_line(&graph);
    let mut result = json!({
        "claw_free": claw_free,
        "claw_witness": claw_witness,
        "quasi_line": quasi_line,
        "quasi_line_witness": ql_witness,
    });
    if let Some(cover_path) = &args.cover {
        let bytes = std::fs::read(cover_path)?;
        let cover: KrauszCover = serde_json::from_slice(&bytes)?;
        let (ok, violations) = validate_krausz_cover(&graph, &cover);
        result["krausz_valid"] = json!(ok);
        result["krausz_violations"] = serde_json::to_value(violations)?;
    }
    let config = json!({"graph": args.graph, "cover": args.cover});
    write_json(
        &dir.join("check_class.json"),
        &wrap("check-class", config, &hash, result),
    )?;
    println!(
        "claw-free: {claw_free}, quasi-line: {quasi_line}{}",
        if args.cover.is_some() {
            " (cover checked)"
        } else {
            ""
        }
    );
    Ok(())
}

fn cmd_build_gstar(args: BuildGstarArgs, dir: &Path) -> Result<(), Error> {
    let (base, hash) = load_graph(&args.base)?;
    let kind: GadgetKind = args.kind.into();
    let out = build_reduction(&base, kind)?;
    let path = args
        .out_file
        .unwrap_or_else(|| dir.join(format!("gstar_{}.json", kind.name().to_lowercase())));
    let config = json!({"base": args.base, "kind": kind.name()});
    let mut doc = reduction_json(&out);
    doc.as_object_mut().unwrap().insert("config".into(), config);
    doc.as_object_mut()
        .unwrap()
        .insert("input_hash".into(), json!(hash));
    write_json(&path, &doc)?;
    println!(
        "wrote {} ({} vertices, {} edges, max degree {})",
        path.display(),
        out.graph.n(),
        out.graph.m(),
        out.graph.max_degree()
    );
    Ok(())
}

fn cmd_cutpoly(args: CutpolyArgs, dir: &Path) -> Result<(), Error> {
    let (graph, hash) = load_graph(&args.graph)?;
    let poly = cut_polynomial_with_cap(&graph, args.cap)?;
    println!("{}", poly.display_compact());
    let mut result = json!({
        "coefficients": poly,
        "degree": poly.degree(),
        "mass": poly.total_mass().to_string(),
    });
    if let Some(mu_s) = &args.mu {
        let mu = parse_mu(mu_s)?;
        let value = partition_eval(&poly, &MuSpec::Exact(mu))?;
        result["evaluation"] = serde_json::to_value(&value)?;
        result["evaluation_ln"] = json!(value.ln());
    }
    let config = json!({"graph": args.graph, "cap": args.cap, "mu": args.mu});
    write_json(
        &dir.join("cutpoly.json"),
        &wrap("cutpoly", config, &hash, result),
    )?;
    Ok(())
}

fn cmd_zsigma(args: ZsigmaArgs, dir: &Path) -> Result<(), Error> {
    let (base, hash) = load_graph(&args.base)?;
    let kind: GadgetKind = args.kind.into();
    let out = build_reduction(&base, kind)?;
    let sigma = SpinConfig::parse(&args.sigma)?;
    let poly = fiber_polynomial(&out, &sigma)?;
    let fc = fiber_count(&out.layout);
    let mut result = json!({
        "sigma": args.sigma,
        "kind": kind.name(),
        "coefficients": poly,
        "degree": poly.degree(),
        "mass": poly.total_mass().to_string(),
        "fiber_size": fc.total.to_string(),
    });
    if let Some(mu_s) = &args.mu {
        let mu = parse_mu(mu_s)?;
        let value = partition_eval(&poly, &MuSpec::Exact(mu))?;
        result["evaluation"] = serde_json::to_value(&value)?;
        result["evaluation_ln"] = json!(value.ln());
    }
    println!(
        "Z_sigma degree {}, mass {}",
        poly.degree().map(|d| d.to_string()).unwrap_or_default(),
        poly.total_mass()
    );
    let config = json!({
        "base": args.base, "kind": kind.name(), "sigma": args.sigma, "mu": args.mu
    });
    write_json(
        &dir.join("zsigma.json"),
        &wrap("zsigma", config, &hash, result),
    )?;
    Ok(())
}

fn cmd_sandwich(args: SandwichArgs, dir: &Path) -> Result<(), Error> {
    let (base, hash) = load_graph(&args.base)?;
    let kind: GadgetKind = args.kind.into();
    let out = build_reduction(&base, kind)?;
    let reports = sandwich_check_all(&out)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("{passed}/{} configurations pass the envelope", reports.len());
    let config = json!({"base": args.base, "kind": kind.name()});
    write_json(
        &dir.join("sandwich.json"),
        &wrap("sandwich", config, &hash, serde_json::to_value(&reports)?),
    )?;
    if passed != reports.len() {
        return Err(Error::Precondition(
            "fiber-weight envelope violated; see sandwich.json".into(),
        ));
    }
    Ok(())
}

fn cmd_bottleneck(args: BottleneckArgs, dir: &Path) -> Result<(), Error> {
    let (base, hash) = load_graph(&args.base)?;
    let c = parse_ratio_u64(&args.certify_c)?;
    let cert = certify_magnifier(&base, c)?;
    if !cert.is_c_magnifier {
        return Err(Error::Precondition(format!(
            "base is not a {}-magnifier (worst ratio {})",
            args.certify_c, cert.worst_ratio
        )));
    }
    let mu = parse_mu(&args.mu)?;
    if !mu.is_integer() {
        return Err(Error::BadParameter(
            "bottleneck evaluation expects an integer mu".into(),
        ));
    }
    let mu_nat: BigUint = mu.to_integer().magnitude().clone();
    let out = build_reduction(&base, GadgetKind::H)?;
    let sums = bottleneck_sums_of(&out)?;
    let report = omega_conductance(&sums, &mu_nat);
    println!(
        "classes (=, +, -): {:?}; final 2^-n inequality at 2^76: {}; minimal mu: {}",
        sums.class_sizes,
        sums.final_inequality_at_2pow76,
        sums.minimal_mu
            .as_ref()
            .map(|m| m.to_string())
            .unwrap_or_else(|| "none".into()),
    );
    let result = json!({
        "certificate": cert,
        "class_sizes": sums.class_sizes,
        "class_polynomials": {
            "equal": sums.class_polys[0],
            "plus": sums.class_polys[1],
            "minus": sums.class_polys[2],
        },
        "equal_class_dominance": sums.equal_class_dominance,
        "unbalanced_peak_present": sums.unbalanced_peak_present,
        "final_inequality_at_2pow76": sums.final_inequality_at_2pow76,
        "minimal_mu": sums.minimal_mu.as_ref().map(|m| m.to_string()),
        "conductance_at_mu": {
            "mu": args.mu,
            "set_weight": report.set_weight,
            "boundary_weight": report.boundary_weight,
            "ratio": report.ratio,
            "mixing_time_lower_bound": report.mixing_time_lower_bound(),
            "description": report.description,
        },
    });
    let config = json!({"base": args.base, "mu": args.mu, "certify_c": args.certify_c});
    write_json(
        &dir.join("bottleneck.json"),
        &wrap("bottleneck", config, &hash, result),
    )?;
    Ok(())
}

#[derive(serde::Deserialize, Default)]
struct EscapeFileConfig {
    sizes: Option<Vec<usize>>,
    mu: Option<String>,
    replicates: Option<usize>,
    step_cap: Option<u64>,
    seed: Option<u64>,
}

fn cmd_escape(args: EscapeArgs, dir: &Path, workers: usize) -> Result<(), Error> {
    let file_cfg: EscapeFileConfig = match &args.config {
        Some(path) => serde_json::from_slice(&std::fs::read(path)?)?,
        None => EscapeFileConfig::default(),
    };
    let sizes = match &args.sizes {
        Some(s) => s
            .split(',')
            .map(|x| {
                x.trim().parse::<usize>().map_err(|_| Error::Parse {
                    what: "sizes",
                    input: s.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => file_cfg.sizes.unwrap_or_else(|| vec![3, 4]),
    };
    let mu_s = args.mu.or(file_cfg.mu).unwrap_or_else(|| "16".into());
    let cfg = EscapeConfig {
        sizes,
        mu: parse_mu(&mu_s)?,
        replicates: args.replicates.or(file_cfg.replicates).unwrap_or(20),
        step_cap: args.step_cap.or(file_cfg.step_cap).unwrap_or(100_000_000),
        seed: args.seed.or(file_cfg.seed).unwrap_or(0),
    };
    let outcome = escape_time_experiment(&cfg, workers)?;

    let csv = |rows: &[quasiline::torpid::EscapeRow]| {
        let mut s = String::from("size,replicate,hit_time,censored\n");
        for r in rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                r.size, r.replicate, r.hit_time, r.censored
            ));
        }
        s
    };
    write_atomic(&dir.join("escape.csv"), &csv(&outcome.rows))?;
    write_atomic(&dir.join("escape_control.csv"), &csv(&outcome.control_rows))?;

    let config = json!({
        "sizes": cfg.sizes,
        "mu": ratio_string(&cfg.mu),
        "replicates": cfg.replicates,
        "step_cap": cfg.step_cap,
        "seed": cfg.seed,
        "workers": workers,
    });
    let result = json!({
        "base_seeds": outcome.base_seeds,
        "medians": outcome.medians,
        "control_medians": outcome.control_medians,
        "quartiles": outcome.quartiles,
        "control_quartiles": outcome.control_quartiles,
        "rows_csv": "escape.csv",
        "control_csv": "escape_control.csv",
    });
    write_json(
        &dir.join("escape_meta.json"),
        &wrap("escape", config, "generated", result),
    )?;
    println!(
        "medians: {:?}; control medians: {:?}",
        outcome.medians, outcome.control_medians
    );
    Ok(())
}

fn cmd_decode(args: DecodeArgs, dir: &Path) -> Result<(), Error> {
    let (base, hash) = load_graph(&args.base)?;
    let mu = parse_mu(&args.mu)?;
    let ratio = parse_ratio_u64(&args.ratio)?;
    let report = decode_experiment(
        &base,
        &mu,
        args.samples,
        args.seed,
        (*ratio.numer(), *ratio.denom()),
    )?;
    println!(
        "maxcut {}, exact success probability {:.6}, minimal mu for 3/4: {}",
        report.max_cut,
        report.exact_success_probability_f64,
        report.minimal_mu.clone().unwrap_or_else(|| "none".into())
    );
    let mut result = serde_json::to_value(&report)?;
    if let Some(dmu_s) = &args.distinguish_mu {
        let dmu = parse_mu(dmu_s)?;
        let z = exact_z_oracle(&base, &dmu)?;
        let verdicts: Vec<Value> = (0..=report.max_cut + 1)
            .map(|cand| {
                let v = distinguisher(&base, &dmu, cand, &z);
                json!({"c": cand, "verdict": format!("{v:?}")})
            })
            .collect();
        result["distinguisher"] = json!({"mu": dmu_s, "verdicts": verdicts});
    }
    let config = json!({
        "base": args.base, "mu": args.mu, "samples": args.samples,
        "seed": args.seed, "ratio": args.ratio,
    });
    write_json(
        &dir.join("decode.json"),
        &wrap("decode", config, &hash, result),
    )?;
    Ok(())
}

fn cmd_audit_gadget(args: AuditGadgetArgs, dir: &Path) -> Result<(), Error> {
    let kind: GadgetKind = args.kind.into();
    let audit = internal_cut_audit(kind);
    println!(
        "kind {}: {} configurations, max internal cut {} attained by {}, runner-up {}",
        kind.name(),
        audit.config_count,
        audit.max_cut,
        audit.argmax.len(),
        audit.second_best
    );
    println!("cut histogram: {:?}", audit.histogram);
    let config = json!({"kind": kind.name()});
    write_json(
        &dir.join(format!("audit_gadget_{}.json", kind.name().to_lowercase())),
        &wrap("audit-gadget", config, "none", serde_json::to_value(&audit)?),
    )?;
    Ok(())
}

fn cmd_maxcut(args: MaxcutArgs, dir: &Path) -> Result<(), Error> {
    let (graph, hash) = load_graph(&args.graph)?;
    let result = match args.method {
        MaxcutMethod::Exact => maxcut_exact(&graph)?,
        MaxcutMethod::LocalSearch => {
            let start = if args.start == "random" {
                let mut rng = quasiline::rng::rng_stream(args.seed, 0, 2);
                SpinConfig::new(quasiline::generate::random_spins(graph.n(), &mut rng))?
            } else {
                SpinConfig::parse(&args.start)?
            };
            if args.shuffle {
                flip_local_search_randomized(&graph, &start, args.seed)?
            } else {
                flip_local_search(&graph, &start)?
            }
        }
    };
    println!("cut size {} ({:?})", result.cut_size, result.method);
    let config = json!({
        "graph": args.graph, "method": format!("{:?}", result.method),
        "start": args.start, "seed": args.seed, "shuffle": args.shuffle,
    });
    write_json(
        &dir.join("maxcut.json"),
        &wrap("maxcut", config, &hash, serde_json::to_value(&result)?),
    )?;
    Ok(())
}

fn cmd_roots(args: RootsArgs, dir: &Path) -> Result<(), Error> {
    let (graph, hash) = load_graph(&args.graph)?;
    let mu = parse_mu(&args.mu)?;
    let fp = field_polynomial(&graph)?;
    let report = univariate_roots_in_z(&fp, &MuSpec::Exact(mu))?;
    println!(
        "{} roots, max |Im| = {:.3e}, all converged: {}",
        report.roots.len(),
        report.max_abs_imag,
        report.converged.iter().all(|&c| c)
    );
    let roots: Vec<Value> = report
        .roots
        .iter()
        .zip(&report.residuals)
        .zip(&report.converged)
        .map(|((z, r), c)| json!({"re": z.re, "im": z.im, "residual": r, "converged": c}))
        .collect();
    let result = json!({
        "mu": args.mu,
        "roots": roots,
        "max_abs_imag": report.max_abs_imag,
    });
    let config = json!({"graph": args.graph, "mu": args.mu});
    write_json(
        &dir.join("roots.json"),
        &wrap("roots", config, &hash, result),
    )?;
    Ok(())
}
