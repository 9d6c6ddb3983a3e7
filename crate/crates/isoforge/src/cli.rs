//! Command-line front end. Every command computes all of its output in
//! memory first and writes files only once nothing can fail any more.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoforge_core::analysis::{eval_sts, knn_group_purity, project_2d, tense_bias, Candidates, TenseBiasConfig};
use isoforge_core::config::Preset;
use isoforge_core::isotropy::store_isotropy;
use isoforge_core::kernels::center_columns;
use isoforge_core::{
    fit_cluster_based, fit_global, local_isotropy, EmbeddingStore, FittedTransform, IsotropyReport, Matrix, SignMode,
};

use crate::error::{Error, Result};
use crate::format::store::store_files;
use crate::format::{encode_transform, load_sts, load_store, load_transform};
use crate::report::{fixed, sci3, sci3_from_ln, Summary, Table};
use crate::{fsutil, parallel};

#[derive(Debug, Parser)]
#[command(name = "isoforge", version, about = "Measure and improve the isotropy of contextual embedding spaces")]
pub struct Cli {
    /// Cap on worker threads. Results are identical for every value [default: all cores]
    #[arg(long, global = true, env = "ISOFORGE_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropy score of one store, or of every layer in a directory
    Isotropy(IsotropyArgs),
    /// Fit a global or cluster-based transform and write the enhanced store
    Enhance(EnhanceArgs),
    /// Spearman correlation (x100) of sentence cosine similarity with gold STS scores
    EvalSts(EvalStsArgs),
    /// Percentage of nearest neighbours of a token that share its structural group
    KnnPurity(KnnPurityArgs),
    /// Mean distances between verb occurrences by tense and sense
    TenseBias(TenseBiasArgs),
    /// Coordinates on the top two principal components, with token frequency
    #[command(name = "project2d")]
    Project2d(Project2dArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    /// Evaluate u and -u for every eigenvector
    #[value(name = "both_signs")]
    BothSigns,
    /// Evaluate one sign per eigenvector (largest coordinate positive)
    #[value(name = "convention_signs")]
    ConventionSigns,
}

impl From<SignArg> for SignMode {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::BothSigns => SignMode::BothSigns,
            SignArg::ConventionSigns => SignMode::ConventionSigns,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Gpt2,
    Bert,
    Roberta,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Gpt2 => Preset::Gpt2,
            PresetArg::Bert => Preset::Bert,
            PresetArg::Roberta => Preset::Roberta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitMode {
    /// Center the whole space and remove its top-m principal components
    Global,
    /// k-means, center each cluster, remove each cluster's top-m components
    Cluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    /// Evaluate the store as is
    None,
    Global,
    Cluster,
}

#[derive(Debug, Args)]
pub struct IsotropyArgs {
    /// Embedding store (.isof, or .tsv)
    #[arg(required_unless_present = "layers", conflicts_with = "layers")]
    pub store: Option<PathBuf>,
    /// Directory of per-layer stores; layers are ordered by the number at the end of each file name
    #[arg(long)]
    pub layers: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both_signs")]
    pub sign_mode: SignArg,
    /// Subtract the column mean before scoring
    #[arg(long)]
    pub center: bool,
    /// Score after k-means with this many clusters and per-cluster centering, averaged over the seeds
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub clusters: Option<u32>,
    /// k-means seeds for --clusters
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    pub seeds: Vec<u64>,
    /// Write the CSV here instead of standard output
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    /// Embedding store to transform
    pub store: PathBuf,
    #[arg(long, value_enum, default_value = "cluster")]
    pub mode: FitMode,
    /// Number of clusters (cluster mode) [default: from --preset]
    #[arg(short = 'k', long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Principal components removed per cluster [default: from --preset]
    #[arg(short = 'm', long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,
    /// Tuned k and m: gpt2 (k=10, m=30; global m=30), bert (27, 12; 15), roberta (27, 12; 25)
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// Seeds; the first one seeds the k-means fit that is written
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    pub seeds: Vec<u64>,
    /// Store to fit the transform on [default: the input store]
    #[arg(long)]
    pub fit_on: Option<PathBuf>,
    /// Output prefix: writes <OUT>.isof (plus sidecar) and <OUT>.isot
    #[arg(short = 'o', long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "both_signs")]
    pub sign_mode: SignArg,
}

/// How an evaluation command transforms the store before measuring.
#[derive(Debug, Args)]
pub struct EnhanceOpts {
    #[arg(long, value_enum, default_value = "none")]
    pub mode: EvalMode,
    /// Number of clusters (cluster mode) [default: from --preset]
    #[arg(short = 'k', long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Principal components removed per cluster [default: from --preset]
    #[arg(short = 'm', long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,
    /// Tuned k and m: gpt2 (k=10, m=30; global m=30), bert (27, 12; 15), roberta (27, 12; 25)
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// One cluster-mode run per seed; mean and standard deviation are reported
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    pub seeds: Vec<u64>,
    /// Store to fit the transform on [default: the evaluated store]
    #[arg(long)]
    pub fit_on: Option<PathBuf>,
    /// Apply a saved transform (.isot) instead of fitting one
    #[arg(long, conflicts_with_all = ["k", "m", "preset", "fit_on"])]
    pub transform: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalStsArgs {
    /// Embedding store with sentence ids in its metadata
    pub store: PathBuf,
    /// Pair files (score<TAB>sentence_a<TAB>sentence_b), each scored separately
    #[arg(long, required = true, num_args = 1..)]
    pub pairs: Vec<PathBuf>,
    /// Sentence id mapping (id<TAB>text)
    #[arg(long)]
    pub sentences: PathBuf,
    #[command(flatten)]
    pub enhance: EnhanceOpts,
    /// Write the CSV here instead of standard output
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KnnPurityArgs {
    /// Embedding store with group ids in its metadata
    pub store: PathBuf,
    /// Surface token whose occurrences are analyzed
    #[arg(long, default_value = ".")]
    pub token: String,
    /// Neighbours per occurrence
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub neighbors: u32,
    /// Search neighbours among all rows, not only occurrences of the same token
    #[arg(long)]
    pub all_rows: bool,
    #[command(flatten)]
    pub enhance: EnhanceOpts,
    /// Write the CSV here instead of standard output
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TenseBiasArgs {
    /// Embedding store with lemma, tense and sense_id metadata
    pub store: PathBuf,
    /// Senses a lemma needs to qualify
    #[arg(long, default_value_t = 2)]
    pub min_senses: usize,
    /// Occurrences each of those senses needs
    #[arg(long, default_value_t = 10)]
    pub min_occurrences: usize,
    #[command(flatten)]
    pub enhance: EnhanceOpts,
    /// Write the CSV here instead of standard output
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Project2dArgs {
    /// Embedding store
    pub store: PathBuf,
    /// Transform before projecting; cluster mode uses the first seed
    #[command(flatten)]
    pub enhance: EnhanceOpts,
    /// Write the CSV here instead of standard output
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

/// A transform to fit: method plus resolved budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitSpec {
    pub mode: FitMode,
    pub k: usize,
    pub m: usize,
}

impl FitSpec {
    pub fn resolve(mode: FitMode, k: Option<u32>, m: Option<u32>, preset: Option<PresetArg>) -> Result<Self> {
        let preset = preset.map(Preset::from);
        let k = k.map(|v| v as usize);
        let m = m.map(|v| v as usize);
        match mode {
            FitMode::Global => {
                if k.is_some_and(|k| k != 1) {
                    return Err(Error::Usage("-k applies to cluster mode only".into()));
                }
                let m = m
                    .or(preset.map(Preset::global_components))
                    .ok_or_else(|| Error::Usage("global mode needs -m or --preset".into()))?;
                Ok(Self { mode, k: 1, m })
            }
            FitMode::Cluster => {
                let k = k
                    .or(preset.map(Preset::clusters))
                    .ok_or_else(|| Error::Usage("cluster mode needs -k or --preset".into()))?;
                let m = m
                    .or(preset.map(Preset::cluster_components))
                    .ok_or_else(|| Error::Usage("cluster mode needs -m or --preset".into()))?;
                Ok(Self { mode, k, m })
            }
        }
    }

    pub fn fit(&self, w: &Matrix, seed: u64) -> Result<FittedTransform> {
        Ok(match self.mode {
            FitMode::Global => fit_global(w, self.m)?,
            FitMode::Cluster => fit_cluster_based(w, self.k, self.m, seed)?,
        })
    }

    /// Seeds that give distinct results: the global fit does not use one.
    fn effective_seeds<'a>(&self, seeds: &'a [u64]) -> &'a [u64] {
        match self.mode {
            FitMode::Global => &seeds[..1],
            FitMode::Cluster => seeds,
        }
    }
}

enum Plan {
    Baseline,
    Fit { spec: FitSpec, seeds: Vec<u64>, fit_on: Option<EmbeddingStore> },
    Stored(FittedTransform),
}

impl Plan {
    fn from_opts(o: &EnhanceOpts) -> Result<Self> {
        check_seeds(&o.seeds)?;
        if let Some(path) = &o.transform {
            if o.mode != EvalMode::None {
                return Err(Error::Usage("--transform replaces --mode".into()));
            }
            return Ok(Plan::Stored(load_transform(path)?));
        }
        let mode = match o.mode {
            EvalMode::None => {
                if o.k.is_some() || o.m.is_some() || o.preset.is_some() || o.fit_on.is_some() {
                    return Err(Error::Usage("-k, -m, --preset and --fit-on need --mode global or cluster".into()));
                }
                return Ok(Plan::Baseline);
            }
            EvalMode::Global => FitMode::Global,
            EvalMode::Cluster => FitMode::Cluster,
        };
        let spec = FitSpec::resolve(mode, o.k, o.m, o.preset)?;
        let fit_on = o.fit_on.as_deref().map(load_store).transpose()?;
        Ok(Plan::Fit { spec, seeds: spec.effective_seeds(&o.seeds).to_vec(), fit_on })
    }

    fn label(&self) -> &'static str {
        match self {
            Plan::Baseline => "none",
            Plan::Fit { spec, .. } => match spec.mode {
                FitMode::Global => "global",
                FitMode::Cluster => "cluster",
            },
            Plan::Stored(_) => "stored",
        }
    }

    fn k_m(&self) -> (String, String) {
        match self {
            Plan::Baseline => (String::new(), String::new()),
            Plan::Fit { spec, .. } => (spec.k.to_string(), spec.m.to_string()),
            Plan::Stored(t) => (t.k().to_string(), t.m_requested().to_string()),
        }
    }

    /// Evaluates `metric` on every variant of `store` the plan produces, in
    /// seed order.
    fn run<R, F>(&self, store: &EmbeddingStore, threads: usize, metric: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(&EmbeddingStore) -> Result<R> + Sync,
    {
        match self {
            Plan::Baseline => Ok(vec![metric(store)?]),
            Plan::Stored(t) => {
                let w = store.to_matrix();
                if !t.fitted_on(&w) {
                    log::warn!("the transform was fitted on a different store");
                }
                Ok(vec![metric(&store.with_values(&t.apply(&w)?)?)?])
            }
            Plan::Fit { spec, seeds, fit_on } => {
                let w = store.to_matrix();
                let fit_w = fit_on.as_ref().map(EmbeddingStore::to_matrix);
                let fit_w = fit_w.as_ref().unwrap_or(&w);
                parallel::map(seeds, threads, |&seed| {
                    let t = spec.fit(fit_w, seed)?;
                    metric(&store.with_values(&t.apply(&w)?)?)
                })
            }
        }
    }
}

fn check_seeds(seeds: &[u64]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::Usage("--seeds must name at least one seed".into()));
    }
    Ok(())
}

fn emit(out: Option<&Path>, bytes: Vec<u8>) -> Result<()> {
    match out {
        Some(path) => fsutil::write_atomic(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads.map_or_else(parallel::default_threads, |t| t as usize);
    match cli.command {
        Command::Isotropy(a) => {
            let csv = cmd_isotropy(&a, threads)?;
            emit(a.out.as_deref(), csv)
        }
        Command::Enhance(a) => {
            let csv = cmd_enhance(&a)?;
            emit(None, csv)
        }
        Command::EvalSts(a) => {
            let csv = cmd_eval_sts(&a, threads)?;
            emit(a.out.as_deref(), csv)
        }
        Command::KnnPurity(a) => {
            let csv = cmd_knn_purity(&a, threads)?;
            emit(a.out.as_deref(), csv)
        }
        Command::TenseBias(a) => {
            let csv = cmd_tense_bias(&a, threads)?;
            emit(a.out.as_deref(), csv)
        }
        Command::Project2d(a) => {
            let csv = cmd_project2d(&a)?;
            emit(a.out.as_deref(), csv)
        }
    }
}

/// Trailing decimal digits of a file stem, e.g. 12 for `bert_layer12`.
fn layer_number(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let digits = stem.len() - stem.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    stem[stem.len() - digits..].parse().ok()
}

fn layer_files(dir: &Path) -> Result<Vec<(u64, PathBuf)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "isof" || e == "tsv") {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(Error::format(dir, "no .isof or .tsv layer files"));
    }
    files.sort_by(|a, b| (layer_number(a), a).cmp(&(layer_number(b), b)));
    let numbered = files.iter().all(|p| layer_number(p).is_some());
    Ok(files
        .into_iter()
        .enumerate()
        .map(|(i, p)| (if numbered { layer_number(&p).unwrap() } else { i as u64 }, p))
        .collect())
}

fn score_store(store: &EmbeddingStore, a: &IsotropyArgs) -> Result<Vec<IsotropyReport>> {
    let mode = SignMode::from(a.sign_mode);
    let w = store.to_matrix();
    match a.clusters {
        Some(k) => a
            .seeds
            .iter()
            .map(|&seed| Ok(local_isotropy(&w, k as usize, seed, mode)?))
            .collect(),
        None if a.center => Ok(vec![isoforge_core::isotropy_score(&center_columns(&w)?.0, mode)?]),
        None => Ok(vec![store_isotropy(store, mode)?]),
    }
}

pub fn cmd_isotropy(a: &IsotropyArgs, threads: usize) -> Result<Vec<u8>> {
    check_seeds(&a.seeds)?;
    if a.clusters.is_some() && a.center {
        return Err(Error::Usage("--clusters already centers each cluster; drop --center".into()));
    }
    let layers = match (&a.store, &a.layers) {
        (Some(p), _) => vec![(0, p.clone())],
        (None, Some(dir)) => layer_files(dir)?,
        (None, None) => return Err(Error::Usage("give a store or --layers".into())),
    };
    let loaded = parallel::map(&layers, threads, |(_, p)| load_store(p))?;
    if let Some(bad) = loaded.iter().find(|s| s.dim() != loaded[0].dim()) {
        return Err(isoforge_core::Error::Dim { expected: loaded[0].dim(), found: bad.dim() }.into());
    }
    let reports = parallel::map(&loaded, threads, |s| score_store(s, a))?;
    let mut table = match a.clusters {
        None => Table::new(&["layer", "log_f_min", "log_f_max", "score"]),
        Some(_) => Table::new(&["layer", "k", "runs", "score_mean", "score_std"]),
    };
    for ((layer, _), runs) in layers.iter().zip(&reports) {
        match a.clusters {
            None => {
                let r = runs[0];
                table.row([layer.to_string(), r.log_f_min.to_string(), r.log_f_max.to_string(), sci3_from_ln(r.log_score())]);
            }
            Some(k) => {
                let scores: Vec<f64> = runs.iter().map(|r| r.score).collect();
                let s = Summary::of(&scores);
                table.row([layer.to_string(), k.to_string(), s.runs.to_string(), sci3(s.mean), sci3(s.std)]);
            }
        }
    }
    Ok(table.into_bytes())
}

pub fn cmd_enhance(a: &EnhanceArgs) -> Result<Vec<u8>> {
    check_seeds(&a.seeds)?;
    let spec = FitSpec::resolve(a.mode, a.k, a.m, a.preset)?;
    let store = load_store(&a.store)?;
    let w = store.to_matrix();
    let fit_store = a.fit_on.as_deref().map(load_store).transpose()?;
    let fit_w = fit_store.as_ref().map_or_else(|| w.clone(), EmbeddingStore::to_matrix);
    let seed = a.seeds[0];
    let t = spec.fit(&fit_w, seed)?;
    let enhanced = store.with_values(&t.apply(&w)?)?;
    let mode = SignMode::from(a.sign_mode);
    let before = store_isotropy(&store, mode)?;
    let after = store_isotropy(&enhanced, mode)?;

    let out_store = with_suffix(&a.out, "isof");
    let mut files = store_files(&enhanced, &out_store);
    files.push((with_suffix(&a.out, "isot"), encode_transform(&t)));
    fsutil::write_all_atomic(&files)?;
    crate::format::store::clear_stale_sidecar(&enhanced, &out_store)?;

    let mut table = Table::new(&["mode", "k", "m", "seed", "isotropy_before", "isotropy_after"]);
    let seed_field = if spec.mode == FitMode::Cluster { seed.to_string() } else { String::new() };
    table.row([
        t.kind().as_str().to_owned(),
        spec.k.to_string(),
        spec.m.to_string(),
        seed_field,
        sci3_from_ln(before.log_score()),
        sci3_from_ln(after.log_score()),
    ]);
    Ok(table.into_bytes())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// The baseline plan, followed by the requested enhancement if any.
fn plans(o: &EnhanceOpts) -> Result<Vec<Plan>> {
    let plan = Plan::from_opts(o)?;
    Ok(match plan {
        Plan::Baseline => vec![Plan::Baseline],
        other => vec![Plan::Baseline, other],
    })
}

pub fn cmd_eval_sts(a: &EvalStsArgs, threads: usize) -> Result<Vec<u8>> {
    let store = load_store(&a.store)?;
    let datasets = a
        .pairs
        .iter()
        .map(|p| Ok((p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(), load_sts(p, &a.sentences)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["dataset", "mode", "k", "m", "runs", "spearman_mean", "spearman_std"]);
    for plan in plans(&a.enhance)? {
        let scores = plan.run(&store, threads, |s| {
            datasets.iter().map(|(_, ds)| Ok(eval_sts(s, ds)?)).collect::<Result<Vec<f64>>>()
        })?;
        let (k, m) = plan.k_m();
        for (i, (name, _)) in datasets.iter().enumerate() {
            let per_run: Vec<f64> = scores.iter().map(|run| run[i]).collect();
            let s = Summary::of(&per_run);
            table.row([name.clone(), plan.label().into(), k.clone(), m.clone(), s.runs.to_string(), fixed(s.mean, 1), fixed(s.std, 1)]);
        }
    }
    Ok(table.into_bytes())
}

pub fn cmd_knn_purity(a: &KnnPurityArgs, threads: usize) -> Result<Vec<u8>> {
    let store = load_store(&a.store)?;
    let candidates = if a.all_rows { Candidates::AllRows } else { Candidates::SameToken };
    let mut table = Table::new(&["token", "neighbors", "mode", "k", "m", "runs", "purity_mean", "purity_std"]);
    for plan in plans(&a.enhance)? {
        let values = plan.run(&store, threads, |s| Ok(knn_group_purity(s, &a.token, a.neighbors as usize, candidates)?))?;
        let s = Summary::of(&values);
        let (k, m) = plan.k_m();
        table.row([a.token.clone(), a.neighbors.to_string(), plan.label().into(), k, m, s.runs.to_string(), fixed(s.mean, 1), fixed(s.std, 1)]);
    }
    Ok(table.into_bytes())
}

pub fn cmd_tense_bias(a: &TenseBiasArgs, threads: usize) -> Result<Vec<u8>> {
    let store = load_store(&a.store)?;
    let cfg = TenseBiasConfig { min_senses: a.min_senses, min_occurrences: a.min_occurrences };
    let mut table = Table::new(&[
        "mode", "k", "m", "runs", "n_verbs", "n_occurrences", "st_sm_mean", "st_sm_std", "st_dm_mean", "st_dm_std",
        "dt_sm_mean", "dt_sm_std", "isotropy",
    ]);
    for plan in plans(&a.enhance)? {
        let reports = plan.run(&store, threads, |s| Ok(tense_bias(s, &cfg)?))?;
        let col = |f: fn(&isoforge_core::analysis::TenseBiasReport) -> f64| {
            Summary::of(&reports.iter().map(f).collect::<Vec<_>>())
        };
        let (st_sm, st_dm, dt_sm, iso) = (col(|r| r.st_sm), col(|r| r.st_dm), col(|r| r.dt_sm), col(|r| r.isotropy));
        let (k, m) = plan.k_m();
        table.row([
            plan.label().to_owned(),
            k,
            m,
            st_sm.runs.to_string(),
            reports[0].n_verbs.to_string(),
            reports[0].n_occurrences.to_string(),
            fixed(st_sm.mean, 2),
            fixed(st_sm.std, 2),
            fixed(st_dm.mean, 2),
            fixed(st_dm.std, 2),
            fixed(dt_sm.mean, 2),
            fixed(dt_sm.std, 2),
            sci3(iso.mean),
        ]);
    }
    Ok(table.into_bytes())
}

pub fn cmd_project2d(a: &Project2dArgs) -> Result<Vec<u8>> {
    let store = load_store(&a.store)?;
    let plan = match Plan::from_opts(&a.enhance)? {
        Plan::Fit { spec, seeds, fit_on } => Plan::Fit { spec, seeds: seeds[..1].to_vec(), fit_on },
        other => other,
    };
    let mut points = plan.run(&store, 1, |s| Ok(project_2d(s)?))?;
    let mut table = Table::new(&["x", "y", "frequency"]);
    for p in points.remove(0) {
        table.row([p.x.to_string(), p.y.to_string(), p.frequency.to_string()]);
    }
    Ok(table.into_bytes())
}
