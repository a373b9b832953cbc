use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tbclust::baselines::modularity;
use tbclust::dataio::{load_edge_list, load_labels_for, load_template, model_from_ground_truth};
use tbclust::harness::{aggregate, run_experiment, write_outputs, ExperimentConfig, ExperimentKind, Family, RealDataset, Workload};
use tbclust::metrics::{adjusted_rand_index, closest_orthonormal, indicator_matrix, projector_distance};
use tbclust::synth::{expected_model, sample_graph};
use tbclust::nalgebra::DMatrix;
use tbclust::{ClusterTask, Error, GroundTruth, MethodRegistry, TemplateModel};

#[derive(Parser)]
#[command(name = "tbclust", version, about = "Template-based graph clustering and baseline comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated experiments on synthetic community graphs.
    Synth(SynthArgs),
    /// Repeated experiments on a real graph with reference communities.
    Real(RealArgs),
    /// Cluster one graph once and print the labels.
    Cluster(ClusterArgs),
    /// List the registered clustering methods.
    Methods,
}

#[derive(Args)]
struct Common {
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', default_value = "tb,spectral,cnm,louvain")]
    methods: Vec<String>,
    /// Seed of the first repetition; repetition r uses seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for records.csv and summary.csv.
    #[arg(long)]
    out: PathBuf,
    /// Fill the runtime_ms column. Timed output is not reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Preset grid: basic, c2-sweep or bp-sweep. Explicit flags override it.
    #[arg(long, default_value = "basic")]
    preset: String,
    /// Comma-separated families among g3, g6, c2, bp.
    #[arg(long, value_delimiter = ',')]
    family: Option<Vec<String>>,
    /// Comma-separated community sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Comma-separated probabilities: central inter rate for c2, inter rate for bp.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// Intra rates for bp: bipartite or hub.
    #[arg(long, default_value = "bipartite")]
    intra_mode: String,
    #[arg(long)]
    reps: Option<usize>,
    /// Sample each graph once and vary only the methods' randomness.
    #[arg(long)]
    fixed_graph: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RealArgs {
    /// Edge list, one `u v` or `u v w` per line.
    #[arg(long)]
    edges: PathBuf,
    /// Reference communities, one `u c` per line.
    #[arg(long)]
    labels: PathBuf,
    /// Treat the edge list as directed and symmetrise it to unit weights.
    #[arg(long)]
    directed: bool,
    /// Dataset name used in the output.
    #[arg(long)]
    name: Option<String>,
    /// Comma-separated standard deviations of the template noise.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    sigma_list: Vec<f64>,
    /// Read sigmas as fractions of the mean nonzero template weight.
    #[arg(long)]
    sigma_relative: bool,
    #[arg(long, default_value_t = 40)]
    reps: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ClusterArgs {
    /// Edge list to cluster.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    edges: Option<PathBuf>,
    #[arg(long)]
    directed: bool,
    /// Sample a synthetic graph instead: g3, g6, c2 or bp.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 10)]
    size: usize,
    #[arg(long)]
    prob: Option<f64>,
    #[arg(long, default_value = "bipartite")]
    intra_mode: String,
    /// Template file with k rows of k weights.
    #[arg(long)]
    template: Option<PathBuf>,
    /// Reference communities; used for scoring and, without --template, to build the template.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Community count for methods that need one when no template is available.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "tb")]
    method: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_list<T: std::str::FromStr<Err = Error>>(items: &[String]) -> Result<Vec<T>, Error> {
    items.iter().map(|s| s.trim().parse()).collect()
}

fn synth(args: SynthArgs) -> Result<(), Error> {
    let kind: ExperimentKind = args.preset.parse()?;
    let (families, sizes, probs): (Vec<Family>, Vec<usize>, Vec<f64>) = match kind {
        ExperimentKind::Basic => (vec![Family::G3, Family::G6, Family::C2], vec![5, 10, 20, 40, 80], vec![0.42]),
        ExperimentKind::C2Sweep => (vec![Family::C2], vec![10, 20, 40], (0..9).map(|i| f64::from(20 + 5 * i) / 100.0).collect()),
        ExperimentKind::BpSweep => (vec![Family::Bp], vec![10, 20, 40], (0..9).map(|i| f64::from(40 + 5 * i) / 100.0).collect()),
        other => return Err(Error::Input(format!("`{}` is not a synthetic preset", other.as_str()))),
    };
    let families = match &args.family {
        Some(f) => parse_list(f)?,
        None => families,
    };
    let cfg = ExperimentConfig {
        kind,
        workload: Workload::Synthetic {
            families,
            sizes: args.sizes.unwrap_or(sizes),
            probs: args.probs.unwrap_or(probs),
            intra_mode: args.intra_mode.parse()?,
        },
        methods: MethodRegistry::with_builtins().resolve(&args.common.methods)?,
        repetitions: args.reps.unwrap_or(kind.default_repetitions()),
        base_seed: args.common.seed,
        fixed_graph: args.fixed_graph,
        record_timing: args.common.timing,
    };
    run_and_write(&cfg, &args.common.out)
}

fn real(args: RealArgs) -> Result<(), Error> {
    let loaded = load_edge_list(&args.edges, args.directed)?;
    let truth = load_labels_for(&args.labels, &loaded.vertex_ids)?;
    log::info!(
        "loaded {} vertices, {} edges, {} communities",
        loaded.graph.n(),
        loaded.graph.edge_count(),
        truth.k()
    );
    let name = args.name.unwrap_or_else(|| {
        args.edges
            .file_stem()
            .map_or_else(|| "real".to_string(), |s| s.to_string_lossy().into_owned())
    });
    let kind = if args.sigma_list.iter().all(|&s| s == 0.0) {
        ExperimentKind::Real
    } else {
        ExperimentKind::RealNoiseSweep
    };
    let cfg = ExperimentConfig {
        kind,
        workload: Workload::Real {
            dataset: Arc::new(RealDataset {
                name,
                graph: loaded.graph,
                truth,
            }),
            sigmas: args.sigma_list,
            sigma_relative: args.sigma_relative,
        },
        methods: MethodRegistry::with_builtins().resolve(&args.common.methods)?,
        repetitions: args.reps,
        base_seed: args.common.seed,
        fixed_graph: false,
        record_timing: args.common.timing,
    };
    run_and_write(&cfg, &args.common.out)
}

fn run_and_write(cfg: &ExperimentConfig, out: &Path) -> Result<(), Error> {
    let records = run_experiment(cfg)?;
    write_outputs(out, &records)?;
    for row in aggregate(&records) {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
        eprintln!(
            "{:<14} {:<9} size={:<4} prob={:<5} sigma={:<5} ari={} ± {} pd={} failed={}",
            row.point.dataset,
            row.method,
            row.point.size.map_or_else(|| "-".to_string(), |s| s.to_string()),
            fmt(row.point.prob),
            fmt(row.point.sigma),
            fmt(row.ari_mean),
            fmt(row.ari_std),
            fmt(row.pd_mean),
            row.failed,
        );
    }
    eprintln!("wrote {} records to {}", records.len(), out.display());
    Ok(())
}

fn cluster(args: ClusterArgs) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (graph, ids, mut truth, mut model): (_, Vec<u64>, Option<GroundTruth>, Option<TemplateModel>) =
        match (&args.edges, &args.family) {
            (Some(path), _) => {
                let loaded = load_edge_list(path, args.directed)?;
                (loaded.graph, loaded.vertex_ids, None, None)
            }
            (None, Some(family)) => {
                let spec = family.parse::<Family>()?.spec(args.size, args.prob, args.intra_mode.parse()?)?;
                let (g, gt) = sample_graph(&spec, &mut rng);
                let ids = (0..g.n() as u64).collect();
                (g, ids, Some(gt), Some(expected_model(&spec)))
            }
            (None, None) => unreachable!("clap requires one of --edges and --family"),
        };
    if let Some(path) = &args.labels {
        truth = Some(load_labels_for(path, &ids)?);
    }
    if let Some(path) = &args.template {
        model = Some(load_template(path)?);
    } else if args.edges.is_some() {
        if let Some(gt) = &truth {
            model = Some(model_from_ground_truth(&graph, gt)?);
        }
    }

    let method = MethodRegistry::with_builtins().get(&args.method)?;
    let model = match model {
        Some(m) => {
            if let Some(k) = args.k.filter(|&k| k != m.k()) {
                return Err(Error::Input(format!("--k {k} does not match the {}-community template", m.k())));
            }
            m
        }
        None if method.name() == "tb" => {
            return Err(Error::Input("tb needs --template, --labels or --family".into()));
        }
        // the other methods only read the community count from the template
        None => {
            let k = args
                .k
                .or(truth.as_ref().map(GroundTruth::k))
                .ok_or_else(|| Error::Input(format!("{} needs --k, --labels or --template", method.name())))?;
            TemplateModel::new(DMatrix::zeros(k, k))?
        }
    };

    let task = ClusterTask { graph: &graph, model: &model };
    let out = method.cluster(&task, &mut rng)?;
    for (id, label) in ids.iter().zip(out.partition.labels()) {
        println!("{id} {label}");
    }
    eprintln!("method: {}", method.name());
    eprintln!("communities found: {}", out.partition.k_found());
    if let Some(it) = out.iterations {
        eprintln!("iterations: {it}");
    }
    if let Ok(q) = modularity(&graph, out.partition.labels()) {
        eprintln!("modularity: {q}");
    }
    if let Some(gt) = &truth {
        eprintln!("ari: {}", adjusted_rand_index(out.partition.labels(), gt.labels())?);
        if let Some(p) = &out.embedding {
            let reference = closest_orthonormal(&indicator_matrix(gt.labels(), gt.k())?)?;
            eprintln!("projector distance: {}", projector_distance(p, &reference)?);
        }
    }
    Ok(())
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
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Real(a) => real(a),
        Command::Cluster(a) => cluster(a),
        Command::Methods => {
            for name in MethodRegistry::with_builtins().names() {
                println!("{name}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
