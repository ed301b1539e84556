//! Run configuration: command-line flags layered over an optional
//! `key=value` file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use qmckay::{AdeType, DynkinGraph, HeightFunction};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Format as ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Config(format!("unknown format {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Fusion,
    Subgroup,
    OqTriangles,
    Kgroup,
    Serre,
    PropHom,
    MeshVsRep,
    BgpDiagram,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Fusion,
        Suite::Subgroup,
        Suite::OqTriangles,
        Suite::Kgroup,
        Suite::Serre,
        Suite::PropHom,
        Suite::MeshVsRep,
        Suite::BgpDiagram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fusion => "fusion",
            Suite::Subgroup => "subgroup",
            Suite::OqTriangles => "oq-triangles",
            Suite::Kgroup => "kgroup",
            Suite::Serre => "serre",
            Suite::PropHom => "prop-hom",
            Suite::MeshVsRep => "mesh-vs-rep",
            Suite::BgpDiagram => "bgp-diagram",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Suite as ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub graph: Option<String>,
    pub ade_type: Option<AdeType>,
    pub rank: Option<usize>,
    pub input: Option<PathBuf>,
    pub h: Option<usize>,
    pub format: Option<Format>,
    pub suites: Vec<Suite>,
    pub cap: Option<usize>,
    pub jobs: Option<usize>,
    pub height: Option<String>,
}

fn parse_num(key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|_| {
        CliError::Config(format!(
            "{key}: expected a non-negative integer, got {value:?}"
        ))
    })
}

impl Config {
    pub fn parse_file_text(text: &str) -> Result<Config, CliError> {
        let mut c = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "graph" => c.graph = Some(value.to_string()),
                "type" => {
                    c.ade_type = Some(
                        value
                            .parse()
                            .map_err(|e: qmckay::Error| CliError::Config(e.to_string()))?,
                    )
                }
                "rank" => c.rank = Some(parse_num(key, value)?),
                "input" => c.input = Some(PathBuf::from(value)),
                "h" => c.h = Some(parse_num(key, value)?),
                "format" => c.format = Some(value.parse()?),
                "suite" => {
                    for s in value.split(',') {
                        c.suites.push(s.trim().parse()?);
                    }
                }
                "cap" => c.cap = Some(parse_num(key, value)?),
                "jobs" => c.jobs = Some(parse_num(key, value)?),
                "height" => c.height = Some(value.to_string()),
                other => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown key {other:?}",
                        n + 1
                    )))
                }
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }

    /// Values set in `other` win.
    pub fn overlay(mut self, other: Config) -> Config {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(graph, ade_type, rank, input, h, format, cap, jobs, height);
        if !other.suites.is_empty() {
            self.suites = other.suites;
        }
        self
    }

    /// The graph, if one was specified, checked against the `h` override.
    pub fn graph(&self) -> Result<Option<DynkinGraph>, CliError> {
        let sources = [
            self.graph.is_some(),
            self.ade_type.is_some() || self.rank.is_some(),
            self.input.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() > 1 {
            return Err(CliError::Config(
                "give exactly one of graph, type/rank or input".into(),
            ));
        }
        let g = if let Some(label) = &self.graph {
            DynkinGraph::from_label(label)?
        } else if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            DynkinGraph::parse_graph_file(&text)?
        } else if self.ade_type.is_some() || self.rank.is_some() {
            match (self.ade_type, self.rank) {
                (Some(ty), Some(rank)) => DynkinGraph::build_ade(ty, rank)?,
                _ => {
                    return Err(CliError::Config(
                        "type and rank must be given together".into(),
                    ))
                }
            }
        } else {
            return Ok(None);
        };
        if let Some(h) = self.h {
            if h != g.h() {
                return Err(CliError::Config(format!(
                    "h = {h} does not match {} (h = {})",
                    g.name(),
                    g.h()
                )));
            }
        }
        Ok(Some(g))
    }

    pub fn require_graph(&self) -> Result<DynkinGraph, CliError> {
        self.graph()?.ok_or_else(|| {
            CliError::Config(
                "this command needs a graph (--graph, --input or a config file)".into(),
            )
        })
    }

    /// `h` from the override or the graph.
    pub fn coxeter_number(&self) -> Result<usize, CliError> {
        match (self.graph()?, self.h) {
            (Some(g), _) => Ok(g.h()),
            (None, Some(h)) if h >= 2 => Ok(h),
            (None, Some(h)) => Err(CliError::Config(format!("h must be at least 2, got {h}"))),
            (None, None) => Err(CliError::Config("this command needs --h or a graph".into())),
        }
    }

    /// `bipartite` (the default) or comma-separated values.
    pub fn height(&self, g: &DynkinGraph) -> Result<HeightFunction, CliError> {
        match self.height.as_deref() {
            None | Some("bipartite") => Ok(g.bipartite_height()),
            Some(text) => {
                let values = text
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<i64>()
                            .map_err(|_| CliError::Config(format!("bad height value {v:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(g.height(&values)?)
            }
        }
    }

    pub fn cap(&self, h: usize) -> Result<usize, CliError> {
        let cap = self.cap.unwrap_or(4 * h);
        if cap < 2 * h {
            return Err(CliError::Config(format!(
                "cap {cap} is below 2h = {}",
                2 * h
            )));
        }
        Ok(cap)
    }

    pub fn suites(&self) -> Vec<Suite> {
        if self.suites.is_empty() || self.suites.contains(&Suite::All) {
            return Suite::EACH.to_vec();
        }
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_format() {
        let c =
            Config::parse_file_text("# run\ngraph = D6\nsuite=serre, kgroup\ncap=40\n").unwrap();
        assert_eq!(c.graph.as_deref(), Some("D6"));
        assert_eq!(c.suites(), vec![Suite::Kgroup, Suite::Serre]);
        assert_eq!(c.cap(10).unwrap(), 40);
        assert!(Config::parse_file_text("colour=red").is_err());
        assert!(Config::parse_file_text("graph").is_err());
    }

    #[test]
    fn h_must_match() {
        let c = Config {
            graph: Some("E6".into()),
            h: Some(10),
            ..Config::default()
        };
        assert!(c.graph().is_err());
        let c = Config {
            ade_type: Some(AdeType::D),
            rank: Some(6),
            h: Some(10),
            ..Config::default()
        };
        assert_eq!(c.graph().unwrap().unwrap().name(), "D6");
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = Config::parse_file_text("graph=A3\njobs=2").unwrap();
        let flags = Config {
            graph: Some("A4".into()),
            ..Config::default()
        };
        let c = file.overlay(flags);
        assert_eq!(c.graph.as_deref(), Some("A4"));
        assert_eq!(c.jobs, Some(2));
    }
}
