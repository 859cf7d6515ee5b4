//! Run configuration: command-line flags layered over an optional TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use crouzeix_core::dilation::MAX_CB_LEVEL;
use crouzeix_core::geom::DomainSpec;
use crouzeix_core::linalg::MatrixFile;
use crouzeix_core::{Error, Matrix, Result};
use serde::{Deserialize, Serialize};

use crate::spec::{parse_domain, parse_seeds, Generator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Range,
    CpCheck,
    BasicBound,
    Xtx,
    OkuboAndo,
    BlockLemma,
    Projection,
    Dilate,
    Cb,
    Singleton,
    ShiftNorm,
    Equiv,
    SuiteAll,
}

impl Experiment {
    pub const SUITE: [Experiment; 12] = [
        Experiment::Range,
        Experiment::CpCheck,
        Experiment::BasicBound,
        Experiment::Xtx,
        Experiment::OkuboAndo,
        Experiment::BlockLemma,
        Experiment::Projection,
        Experiment::Dilate,
        Experiment::Cb,
        Experiment::Singleton,
        Experiment::ShiftNorm,
        Experiment::Equiv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Range => "range",
            Experiment::CpCheck => "cp-check",
            Experiment::BasicBound => "basic-bound",
            Experiment::Xtx => "xtx",
            Experiment::OkuboAndo => "okubo-ando",
            Experiment::BlockLemma => "block-lemma",
            Experiment::Projection => "projection",
            Experiment::Dilate => "dilate",
            Experiment::Cb => "cb",
            Experiment::Singleton => "singleton",
            Experiment::ShiftNorm => "shift-norm",
            Experiment::Equiv => "equiv",
            Experiment::SuiteAll => "suite-all",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Experiment::SUITE
            .iter()
            .copied()
            .chain([Experiment::SuiteAll])
            .find(|e| e.name() == name)
    }

    /// Matrix source used when none is configured.
    pub fn default_generator(self) -> Generator {
        match self {
            Experiment::Range | Experiment::CpCheck | Experiment::OkuboAndo => Generator::Ginibre { n: 4 },
            Experiment::Dilate | Experiment::Equiv => Generator::Ginibre { n: 3 },
            Experiment::Projection => Generator::Resolution { n: 4, k: 3 },
            _ => Generator::Nilpotent2 { a: [2.0, 0.0] },
        }
    }

    pub fn default_domain(self) -> DomainSpec {
        match self {
            Experiment::Singleton => DomainSpec::Disk {
                center: [0.0, 0.0],
                radius: 1.001,
            },
            _ => DomainSpec::Range {
                margin: 0.1,
                nodes: 256,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaArg {
    Cauchy,
    Scalar,
    Conj,
}

/// Flags shared by `run` and the `<experiment>` shorthand.  Flags override the file.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Experiment to run.
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// TOML file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Matrix file `{"dim": n, "re": [[..]], "im": [[..]]}`.
    #[arg(long, conflicts_with = "generator")]
    pub matrix: Option<PathBuf>,
    /// ginibre:N | jordan:N,LAMBDA | nilpotent2:A | normal:L1,L2,.. | skew | resolution:N,K
    #[arg(long)]
    pub generator: Option<String>,
    /// disk:C,R | ellipse:C,A,B[,ROT] | range:MARGIN[,NODES] | JSON
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, value_enum)]
    pub alpha: Option<AlphaArg>,
    /// A..B (inclusive), A..<B, or a comma list.
    #[arg(long)]
    pub seeds: Option<String>,
    /// Estimator trials per seed.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Boundary quadrature nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Highest power checked by dilations.
    #[arg(long)]
    pub order: Option<usize>,
    /// Highest matrix amplification level for cb estimates.
    #[arg(long)]
    pub level: Option<usize>,
    /// Dilation constant (1 or 2).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Scale of the point evaluation added in shift-norm.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Dilation pair `DIR/STEM` (as written by `dilate`) for equiv.
    #[arg(long)]
    pub pair: Option<PathBuf>,
    /// Tolerance override `EXPERIMENT=VALUE`; repeatable.
    #[arg(long = "tol", value_parser = parse_override)]
    pub tol: Vec<(String, f64)>,
    /// Skip SVG output.
    #[arg(long)]
    pub no_plots: bool,
}

fn parse_override(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected EXPERIMENT=VALUE")?;
    let v: f64 = v.parse().map_err(|_| format!("not a number: {v}"))?;
    Ok((k.to_string(), v))
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum SeedsField {
    #[default]
    Missing,
    Range(String),
    List(Vec<u64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    experiment: Option<String>,
    matrix: Option<PathBuf>,
    generator: Option<String>,
    domain: Option<String>,
    alpha: Option<AlphaArg>,
    #[serde(default)]
    seeds: SeedsField,
    budget: Option<usize>,
    nodes: Option<usize>,
    out: Option<PathBuf>,
    order: Option<usize>,
    level: Option<usize>,
    rho: Option<f64>,
    beta: Option<f64>,
    pair: Option<PathBuf>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    plots: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    Matrix { path: PathBuf, data: MatrixFile },
    Generator(Generator),
}

/// Validated configuration.  Serialized form feeds the manifest digest.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub source: Option<Source>,
    pub domain: Option<DomainSpec>,
    pub alpha: AlphaArg,
    pub seeds: Vec<u64>,
    pub budget: usize,
    pub nodes: usize,
    pub out: PathBuf,
    pub order: usize,
    pub level: usize,
    pub rho: f64,
    pub beta: f64,
    pub pair: Option<PathBuf>,
    pub tolerances: BTreeMap<String, f64>,
    pub plots: bool,
}

fn relative_to(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut file = FileConfig::default();
        let mut base = PathBuf::new();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("config {}: {e}", path.display())))?;
            file = toml::from_str(&text).map_err(|e| Error::Input(format!("config {}: {e}", path.display())))?;
            base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        }
        let experiment = match (args.experiment, &file.experiment) {
            (Some(e), _) => e,
            (None, Some(name)) => Experiment::from_name(name)
                .ok_or_else(|| Error::Input(format!("unknown experiment {name:?}")))?,
            (None, None) => return Err(Error::Input("no experiment given".into())),
        };
        let source = if let Some(p) = &args.matrix {
            Some(load_matrix(p.clone())?)
        } else if let Some(g) = &args.generator {
            Some(Source::Generator(Generator::parse(g)?))
        } else if let Some(p) = file.matrix {
            if file.generator.is_some() {
                return Err(Error::Input("config sets both matrix and generator".into()));
            }
            Some(load_matrix(relative_to(&base, p))?)
        } else if let Some(g) = &file.generator {
            Some(Source::Generator(Generator::parse(g)?))
        } else {
            None
        };
        let domain = args.domain.as_ref().or(file.domain.as_ref()).map(|d| parse_domain(d)).transpose()?;
        let seeds = match (&args.seeds, file.seeds) {
            (Some(s), _) => parse_seeds(s)?,
            (None, SeedsField::Range(s)) => parse_seeds(&s)?,
            (None, SeedsField::List(v)) => v,
            (None, SeedsField::Missing) => vec![0],
        };
        let mut tolerances = file.tolerances;
        tolerances.extend(args.tol.iter().cloned());
        let pair = args.pair.clone().or(file.pair.map(|p| relative_to(&base, p)));
        let cfg = RunConfig {
            experiment,
            source,
            domain,
            alpha: args.alpha.or(file.alpha).unwrap_or(AlphaArg::Cauchy),
            seeds,
            budget: args.budget.or(file.budget).unwrap_or(8),
            nodes: args.nodes.or(file.nodes).unwrap_or(512),
            out: args.out.clone().or(file.out.map(|p| relative_to(&base, p))).unwrap_or_else(|| "results".into()),
            order: args.order.or(file.order).unwrap_or(4),
            level: args.level.or(file.level).unwrap_or(MAX_CB_LEVEL),
            rho: args.rho.or(file.rho).unwrap_or(2.0),
            beta: args.beta.or(file.beta).unwrap_or(1.0),
            pair,
            tolerances,
            plots: !args.no_plots && file.plots.unwrap_or(true),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Input("seed list is empty".into()));
        }
        if self.budget == 0 {
            return Err(Error::Input("budget must be at least 1".into()));
        }
        if self.nodes < 16 {
            return Err(Error::Input("at least 16 quadrature nodes are needed".into()));
        }
        if self.order == 0 {
            return Err(Error::Input("dilation order must be at least 1".into()));
        }
        if self.level == 0 || self.level > MAX_CB_LEVEL {
            return Err(Error::Input(format!("cb level must be in 1..={MAX_CB_LEVEL}")));
        }
        if self.rho != 1.0 && self.rho != 2.0 {
            return Err(Error::Input(format!("rho must be 1 or 2, got {}", self.rho)));
        }
        if let Some(p) = &self.pair {
            let meta = PathBuf::from(format!("{}.json", p.display()));
            if !meta.is_file() {
                return Err(Error::Input(format!("dilation pair {} not found", meta.display())));
            }
        }
        for k in self.tolerances.keys() {
            if Experiment::from_name(k).is_none() {
                return Err(Error::Input(format!("tolerance override for unknown experiment {k:?}")));
            }
        }
        Ok(())
    }

    /// Configuration for one member of `suite-all`: per-experiment defaults for the
    /// matrix source and domain, everything else shared.
    pub fn for_suite(&self, experiment: Experiment) -> Self {
        RunConfig {
            experiment,
            source: None,
            domain: None,
            pair: None,
            ..self.clone()
        }
    }

    pub fn generator(&self) -> Generator {
        match &self.source {
            Some(Source::Generator(g)) => g.clone(),
            _ => self.experiment.default_generator(),
        }
    }

    /// Operator for `seed` and whether it may be rescaled to meet a hypothesis.
    pub fn matrix(&self, seed: u64) -> Result<(Matrix, bool)> {
        match &self.source {
            Some(Source::Matrix { data, .. }) => Ok((data.to_matrix()?, false)),
            _ => Ok((self.generator().matrix(seed)?, true)),
        }
    }

    pub fn domain_spec(&self) -> DomainSpec {
        self.domain.clone().unwrap_or_else(|| self.experiment.default_domain())
    }
}

fn load_matrix(path: PathBuf) -> Result<Source> {
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("matrix {}: {e}", path.display())))?;
    let data = MatrixFile::parse(&text)?;
    data.to_matrix::<f64>()?;
    Ok(Source::Matrix { path, data })
}
