//! Bench spec files.
//!
//! One `key = value` directive per line; `#` starts a comment. List values
//! are comma separated. Every list key may appear once; `graph` may repeat.
//!
//! ```text
//! graph = hp n=5000 p=0.8 q=0.5          # planted k defaults to the run's k
//! graph = cl n=20000 slope=2.5 avg_degree=10 sampling=skip
//! graph = file data/amazon0312.txt lcc=true
//! k = 4, 8, 16, 32
//! gamma = 1:4:0.25                       # start:stop:step, inclusive
//! order = random, bfs
//! heuristic = fennel, ldg
//! seeds = 0..5                           # or 0..=4, or 0, 1, 2
//! alpha = auto
//! nu = inf
//! marginal = derivative
//! tie_policy = lowest-index
//! threads = 4
//! timing = false                         # write runtime_ms as 0
//! out = results/hp.csv
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use streamcut::{Alpha, ClSampling, Heuristic, MarginalMode, StreamOrder, TiePolicy};

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    HiddenPartition {
        n: usize,
        /// Planted cluster count; `None` follows the run's `k`.
        k: Option<usize>,
        p: f64,
        q: f64,
    },
    ChungLu {
        n: usize,
        slope: f64,
        avg_degree: f64,
        sampling: ClSampling,
    },
    File {
        path: PathBuf,
        lcc: bool,
    },
}

impl GraphSource {
    /// Generated graphs are redrawn per seed; files are not.
    pub fn is_random(&self) -> bool {
        !matches!(self, GraphSource::File { .. })
    }

    /// Identifier used in the `graph` column.
    pub fn id(&self, run_k: usize) -> String {
        match self {
            GraphSource::HiddenPartition { n, k, p, q } => {
                format!("hp:n={n}:k={}:p={p}:q={q}", k.unwrap_or(run_k))
            }
            GraphSource::ChungLu { n, slope, avg_degree, .. } => {
                format!("cl:n={n}:slope={slope}:d={avg_degree}")
            }
            GraphSource::File { path, .. } => path.display().to_string(),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id(0))
    }
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or("empty graph directive")?;
        if kind == "file" {
            let path = words.next().ok_or("file graph needs a path")?;
            let mut lcc = true;
            for word in words {
                match word.split_once('=') {
                    Some(("lcc", v)) => lcc = parse_bool(v)?,
                    _ => return Err(format!("unexpected {word:?} after file path")),
                }
            }
            return Ok(GraphSource::File { path: path.into(), lcc });
        }

        let mut fields = Fields::default();
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {word:?}"))?;
            fields.0.push((key.to_string(), value.to_string()));
        }
        let source = match kind {
            "hp" => GraphSource::HiddenPartition {
                n: fields.take("n")?.ok_or("hp needs n")?,
                k: fields.take("k")?,
                p: fields.take("p")?.ok_or("hp needs p")?,
                q: fields.take("q")?.ok_or("hp needs q")?,
            },
            "cl" => GraphSource::ChungLu {
                n: fields.take("n")?.ok_or("cl needs n")?,
                slope: fields.take("slope")?.ok_or("cl needs slope")?,
                avg_degree: fields.take("avg_degree")?.unwrap_or(10.0),
                sampling: match fields.take::<String>("sampling")?.as_deref() {
                    None | Some("pairs") => ClSampling::PairLoop,
                    Some("skip") => ClSampling::Skip,
                    Some(other) => return Err(format!("unknown sampling {other:?} (pairs|skip)")),
                },
            },
            other => return Err(format!("unknown graph kind {other:?} (hp|cl|file)")),
        };
        if let Some((key, _)) = fields.0.first() {
            return Err(format!("unknown {kind} parameter {key:?}"));
        }
        Ok(source)
    }
}

#[derive(Default)]
struct Fields(Vec<(String, String)>);

impl Fields {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: fmt::Display,
    {
        let Some(i) = self.0.iter().position(|(k, _)| k == key) else {
            return Ok(None);
        };
        let (_, value) = self.0.remove(i);
        value
            .parse()
            .map(Some)
            .map_err(|e| format!("bad value for {key}: {e}"))
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got {s:?}")),
    }
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

fn parse_seeds(value: &str) -> Result<Vec<u64>, String> {
    let value = value.trim();
    if let Some((a, b)) = value.split_once("..") {
        let start: u64 = a.trim().parse().map_err(|e| format!("seed range start: {e}"))?;
        let (inclusive, end) = match b.strip_prefix('=') {
            Some(rest) => (true, rest),
            None => (false, b),
        };
        let end: u64 = end.trim().parse().map_err(|e| format!("seed range end: {e}"))?;
        return Ok(if inclusive { (start..=end).collect() } else { (start..end).collect() });
    }
    parse_list(value)
}

fn parse_gammas(value: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if parts.len() == 1 {
        return parse_list(value);
    }
    let [start, stop, step] = parts[..] else {
        return Err("gamma range is start:stop:step".into());
    };
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err("gamma range needs step > 0 and stop >= start".into());
    }
    // integer stepping keeps 1:4:0.25 free of accumulated drift
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub graphs: Vec<GraphSource>,
    pub ks: Vec<usize>,
    pub gammas: Vec<f64>,
    pub orders: Vec<StreamOrder>,
    pub heuristics: Vec<Heuristic>,
    pub seeds: Vec<u64>,
    pub alpha: Alpha,
    pub nu: f64,
    pub marginal_mode: MarginalMode,
    pub tie_policy: TiePolicy,
    pub threads: Option<usize>,
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            graphs: Vec::new(),
            ks: Vec::new(),
            gammas: vec![1.5],
            orders: vec![StreamOrder::Random],
            heuristics: vec![Heuristic::Fennel],
            seeds: vec![0],
            alpha: Alpha::Auto,
            nu: f64::INFINITY,
            marginal_mode: MarginalMode::default(),
            tie_policy: TiePolicy::default(),
            threads: None,
            timing: true,
            out: None,
        }
    }
}

impl BenchSpec {
    pub fn parse(text: &str) -> Result<BenchSpec, SpecError> {
        let mut spec = BenchSpec::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| SpecError { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "graph" {
                if seen.contains(&key) {
                    return Err(err(format!("{key} given twice")));
                }
                seen.push(key);
            }
            let result: Result<(), String> = (|| {
                match key {
                    "graph" => spec.graphs.push(value.parse()?),
                    "k" => spec.ks = parse_list(value)?,
                    "gamma" => spec.gammas = parse_gammas(value)?,
                    "order" => spec.orders = parse_list(value)?,
                    "heuristic" => spec.heuristics = parse_list(value)?,
                    "seeds" => spec.seeds = parse_seeds(value)?,
                    "alpha" => spec.alpha = value.parse().map_err(|e| format!("{e}"))?,
                    "nu" => spec.nu = value.parse().map_err(|e| format!("nu: {e}"))?,
                    "marginal" => spec.marginal_mode = value.parse().map_err(|e| format!("{e}"))?,
                    "tie_policy" => spec.tie_policy = value.parse().map_err(|e| format!("{e}"))?,
                    "threads" => spec.threads = Some(value.parse().map_err(|e| format!("threads: {e}"))?),
                    "timing" => spec.timing = parse_bool(value)?,
                    "out" => spec.out = Some(value.into()),
                    other => return Err(format!("unknown key {other:?}")),
                }
                Ok(())
            })();
            result.map_err(err)?;
        }
        spec.validate().map_err(|message| SpecError { line: 0, message })?;
        Ok(spec)
    }

    /// Rejects specs whose run matrix would be empty or ill-formed.
    pub fn validate(&self) -> Result<(), String> {
        let empty = [
            ("graph", self.graphs.is_empty()),
            ("k", self.ks.is_empty()),
            ("gamma", self.gammas.is_empty()),
            ("order", self.orders.is_empty()),
            ("heuristic", self.heuristics.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ];
        if let Some((key, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(format!("{key} list is empty"));
        }
        if self.ks.contains(&0) {
            return Err("k must be at least 1".into());
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g >= 1.0 && g.is_finite())) {
            return Err(format!("gamma must be >= 1, got {g}"));
        }
        if self.nu.is_nan() || self.nu < 1.0 {
            return Err(format!("nu must be >= 1, got {}", self.nu));
        }
        if self.threads == Some(0) {
            return Err("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.graphs.len() * self.ks.len() * self.gammas.len() * self.orders.len() * self.heuristics.len() * self.seeds.len()
    }
}
