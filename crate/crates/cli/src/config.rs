//! Experiment configuration: flat `key = value` pairs under `[section]`
//! headers, `#` comments. Unknown sections or keys are rejected so typos
//! fail loudly. The manifest written next to every output is this same
//! format, so a run can be reproduced from its manifest directly.

use crate::CliError;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Lz {
        delta: f64,
        lambda_start: f64,
        lambda_end: f64,
    },
    Ising {
        j: f64,
        n: usize,
        lambda_start: f64,
        lambda_end: f64,
    },
    Sphere {
        circle: Circle,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circle {
    Small,
    Large,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolKind {
    Linear,
    Optimal,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: ModelSpec,
    pub protocol: ProtocolKind,
    pub taus: Vec<f64>,
    pub samples: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub quad_tol: f64,
    pub workers: usize,
    pub out_dir: PathBuf,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> Result<Sections, CliError> {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (line_no, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            let name = line[1..line.len() - 1].trim().to_string();
            if !matches!(name.as_str(), "model" | "protocol" | "run" | "output") {
                return Err(usage(format!("unknown section [{name}]")));
            }
            sections.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "line {}: expected `key = value`, got `{line}`",
                line_no + 1
            )));
        };
        let Some(section) = &current else {
            return Err(usage(format!(
                "line {}: `{}` appears before any [section]",
                line_no + 1,
                key.trim()
            )));
        };
        sections
            .get_mut(section)
            .expect("section inserted on header")
            .insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(sections)
}

struct SectionReader {
    name: &'static str,
    map: BTreeMap<String, String>,
}

impl SectionReader {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String, CliError> {
        self.take(key)
            .ok_or_else(|| usage(format!("[{}] is missing `{key}`", self.name)))
    }

    fn f64(&mut self, key: &str) -> Result<f64, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| usage(format!("[{}] {key} = {raw}: not a number", self.name)))
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| usage(format!("[{}] {key} = {raw}: not a number", self.name))),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| usage(format!("[{}] {key} = {raw}: not an integer", self.name))),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(key) = self.map.keys().next() {
            return Err(usage(format!("[{}] has unknown key `{key}`", self.name)));
        }
        Ok(())
    }
}

fn reader(sections: &mut Sections, name: &'static str) -> Result<SectionReader, CliError> {
    let map = sections
        .remove(name)
        .ok_or_else(|| usage(format!("missing [{name}] section")))?;
    Ok(SectionReader { name, map })
}

fn parse_taus(run: &mut SectionReader) -> Result<Vec<f64>, CliError> {
    let single = run.take("tau");
    let list = run.take("tau_list");
    let range = run.take("tau_range");
    let given = [single.is_some(), list.is_some(), range.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given == 0 {
        return Err(usage("[run] needs one of tau, tau_list, tau_range"));
    }
    if given > 1 {
        return Err(usage(
            "[run] tau, tau_list, and tau_range are mutually exclusive",
        ));
    }
    let taus: Vec<f64> = if let Some(raw) = single {
        vec![raw
            .parse()
            .map_err(|_| usage(format!("[run] tau = {raw}: not a number")))?]
    } else if let Some(raw) = list {
        raw.split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| usage(format!("[run] tau_list entry `{v}`: not a number")))
            })
            .collect::<Result<_, _>>()?
    } else {
        let raw = range.expect("checked above");
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!(
                "[run] tau_range = {raw}: expected min:max:count"
            )));
        }
        let min: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| usage("tau_range min: not a number"))?;
        let max: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| usage("tau_range max: not a number"))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| usage("tau_range count: not an integer"))?;
        if count < 2 || max <= min {
            return Err(usage("tau_range needs max > min and count ≥ 2"));
        }
        (0..count)
            .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
            .collect()
    };
    if taus.is_empty() {
        return Err(usage("tau list is empty"));
    }
    if taus.iter().any(|&t| t <= 0.0 || !t.is_finite()) {
        return Err(usage("every tau must be positive and finite"));
    }
    Ok(taus)
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, CliError> {
        let mut sections = parse_sections(text)?;

        let mut model = reader(&mut sections, "model")?;
        let name = model.require("name")?;
        let model_spec = match name.as_str() {
            "lz" => ModelSpec::Lz {
                delta: model.f64("delta")?,
                lambda_start: model.f64("lambda_start")?,
                lambda_end: model.f64("lambda_end")?,
            },
            "ising" => ModelSpec::Ising {
                j: model.f64_or("j", 1.0)?,
                n: model.usize_or("n", 50)?,
                lambda_start: model.f64("lambda_start")?,
                lambda_end: model.f64("lambda_end")?,
            },
            "sphere" => {
                let circle = match model.require("circle")?.as_str() {
                    "small" => Circle::Small,
                    "large" => Circle::Large,
                    other => return Err(usage(format!("circle = {other}: use small or large"))),
                };
                ModelSpec::Sphere { circle }
            }
            other => {
                return Err(usage(format!(
                    "model name `{other}`: use lz, ising, sphere"
                )))
            }
        };
        model.finish()?;

        let mut protocol = reader(&mut sections, "protocol")?;
        let kind = match protocol.require("kind")?.as_str() {
            "linear" => ProtocolKind::Linear,
            "optimal" => ProtocolKind::Optimal,
            "file" => ProtocolKind::File(PathBuf::from(protocol.require("file")?)),
            other => {
                return Err(usage(format!(
                    "protocol kind `{other}`: use linear, optimal, file"
                )))
            }
        };
        protocol.finish()?;

        let mut run = reader(&mut sections, "run")?;
        let taus = parse_taus(&mut run)?;
        let samples = run.usize_or("samples", 501)?;
        if samples < 2 {
            return Err(usage("samples must be at least 2"));
        }
        let abs_tol = run.f64_or("abs_tol", 1e-10)?;
        let rel_tol = run.f64_or("rel_tol", 1e-10)?;
        let quad_tol = run.f64_or("quad_tol", 1e-8)?;
        let workers = run.usize_or("workers", 1)?.max(1);
        run.finish()?;

        let out_dir = match sections.remove("output") {
            None => PathBuf::from("out"),
            Some(map) => {
                let mut out = SectionReader {
                    name: "output",
                    map,
                };
                let dir = out
                    .take("dir")
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("out"));
                out.finish()?;
                dir
            }
        };

        if let Some(name) = sections.keys().next() {
            return Err(usage(format!("unknown section [{name}]")));
        }

        Ok(Self {
            model: model_spec,
            protocol: kind,
            taus,
            samples,
            abs_tol,
            rel_tol,
            quad_tol,
            workers,
            out_dir,
        })
    }

    /// Canonical echo: parsing the echo yields an identical `Config`.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[model]");
        match &self.model {
            ModelSpec::Lz {
                delta,
                lambda_start,
                lambda_end,
            } => {
                let _ = writeln!(s, "name = lz");
                let _ = writeln!(s, "delta = {delta}");
                let _ = writeln!(s, "lambda_start = {lambda_start}");
                let _ = writeln!(s, "lambda_end = {lambda_end}");
            }
            ModelSpec::Ising {
                j,
                n,
                lambda_start,
                lambda_end,
            } => {
                let _ = writeln!(s, "name = ising");
                let _ = writeln!(s, "j = {j}");
                let _ = writeln!(s, "n = {n}");
                let _ = writeln!(s, "lambda_start = {lambda_start}");
                let _ = writeln!(s, "lambda_end = {lambda_end}");
            }
            ModelSpec::Sphere { circle } => {
                let _ = writeln!(s, "name = sphere");
                let _ = writeln!(
                    s,
                    "circle = {}",
                    match circle {
                        Circle::Small => "small",
                        Circle::Large => "large",
                    }
                );
            }
        }
        let _ = writeln!(s, "\n[protocol]");
        match &self.protocol {
            ProtocolKind::Linear => {
                let _ = writeln!(s, "kind = linear");
            }
            ProtocolKind::Optimal => {
                let _ = writeln!(s, "kind = optimal");
            }
            ProtocolKind::File(path) => {
                let _ = writeln!(s, "kind = file");
                let _ = writeln!(s, "file = {}", path.display());
            }
        }
        let _ = writeln!(s, "\n[run]");
        if self.taus.len() == 1 {
            let _ = writeln!(s, "tau = {}", self.taus[0]);
        } else {
            let list: Vec<String> = self.taus.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(s, "tau_list = {}", list.join(","));
        }
        let _ = writeln!(s, "samples = {}", self.samples);
        let _ = writeln!(s, "abs_tol = {}", self.abs_tol);
        let _ = writeln!(s, "rel_tol = {}", self.rel_tol);
        let _ = writeln!(s, "quad_tol = {}", self.quad_tol);
        let _ = writeln!(s, "workers = {}", self.workers);
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "dir = {}", self.out_dir.display());
        s
    }
}
