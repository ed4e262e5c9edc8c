//! JSON models and teams, CSV relations.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use teamlogic_core::dbdeps::{DbError, DbRelation};
use teamlogic_core::model::{Elem, Model, ModelError, Team};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in {what}: {source}")]
    Json {
        what: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Db(#[from] DbError),
    #[error("{0}")]
    Format(String),
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_path_buf(), source })
}

/// A relation is either a list of tuples or, when it may be empty, an
/// object giving the arity explicitly.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RelationSpec {
    Tuples(Vec<Vec<String>>),
    Explicit { arity: usize, tuples: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub domain: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, String>,
    /// Keys are comma-joined argument labels.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relations: BTreeMap<String, RelationSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TeamFile {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn labels(m: &Model, row: &[String]) -> Result<Vec<Elem>, ModelError> {
    row.iter().map(|l| m.elem(l)).collect()
}

impl ModelFile {
    pub fn build(&self, allow_unit: bool) -> Result<Model, IoError> {
        if let Some(l) = self.domain.iter().find(|l| l.contains(',')) {
            return Err(IoError::Format(format!("domain label `{l}` contains a comma")));
        }
        let mut m = if allow_unit {
            Model::new_allowing_unit(self.domain.iter().cloned())?
        } else {
            Model::new(self.domain.iter().cloned())?
        };
        for (name, value) in &self.constants {
            let e = m.elem(value)?;
            m.add_constant(name, e)?;
        }
        for (name, table) in &self.functions {
            let mut arity = None;
            let mut map = BTreeMap::new();
            for (args, value) in table {
                let args: Vec<String> = args.split(',').map(|a| a.trim().to_string()).collect();
                match arity {
                    Some(k) if k != args.len() => {
                        return Err(IoError::Format(format!("function `{name}` mixes argument counts")));
                    }
                    _ => arity = Some(args.len()),
                }
                map.insert(labels(&m, &args)?, m.elem(value)?);
            }
            let arity = arity.ok_or_else(|| IoError::Format(format!("function `{name}` has an empty table")))?;
            m.add_function_map(name, arity, &map)?;
        }
        for (name, rel) in &self.relations {
            let (arity, tuples) = match rel {
                RelationSpec::Explicit { arity, tuples } => (*arity, tuples),
                RelationSpec::Tuples(tuples) => match tuples.first() {
                    Some(t) => (t.len(), tuples),
                    None => {
                        return Err(IoError::Format(format!(
                            "relation `{name}` is empty; give it as {{\"arity\": k, \"tuples\": []}}"
                        )))
                    }
                },
            };
            let rows = tuples.iter().map(|t| labels(&m, t)).collect::<Result<Vec<_>, _>>()?;
            m.add_relation(name, arity, rows)?;
        }
        Ok(m)
    }

    pub fn from_model(m: &Model) -> ModelFile {
        let label = |e: Elem| m.label(e).to_string();
        let n = m.size();
        ModelFile {
            domain: m.labels().to_vec(),
            constants: m.constants().map(|(k, v)| (k.clone(), label(v))).collect(),
            functions: m
                .functions()
                .map(|(name, f)| {
                    let table = teamlogic_core::model::all_tuples(n, f.arity)
                        .map(|args| {
                            let key: Vec<String> = args.iter().map(|&a| label(a)).collect();
                            (key.join(","), label(f.apply(n, &args)))
                        })
                        .collect();
                    (name.clone(), table)
                })
                .collect(),
            relations: m
                .relations()
                .map(|(name, r)| {
                    let tuples = r.tuples.iter().map(|t| t.iter().map(|&e| label(e)).collect()).collect();
                    (name.clone(), RelationSpec::Explicit { arity: r.arity, tuples })
                })
                .collect(),
        }
    }
}

impl TeamFile {
    pub fn build(&self, m: &Model) -> Result<Team, IoError> {
        let rows = self.rows.iter().map(|r| labels(m, r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Team::new(self.vars.iter().cloned(), rows)?)
    }

    pub fn from_team(m: &Model, t: &Team) -> TeamFile {
        TeamFile {
            vars: t.vars().to_vec(),
            rows: t.rows().iter().map(|r| r.iter().map(|&e| m.label(e).to_string()).collect()).collect(),
        }
    }
}

pub fn parse_model(text: &str, allow_unit: bool) -> Result<Model, IoError> {
    let f: ModelFile = serde_json::from_str(text).map_err(|source| IoError::Json { what: "model".into(), source })?;
    f.build(allow_unit)
}

pub fn load_model(path: &Path, allow_unit: bool) -> Result<Model, IoError> {
    let text = read_text(path)?;
    let f: ModelFile =
        serde_json::from_str(&text).map_err(|source| IoError::Json { what: path.display().to_string(), source })?;
    f.build(allow_unit)
}

pub fn parse_team(text: &str, m: &Model) -> Result<Team, IoError> {
    let f: TeamFile = serde_json::from_str(text).map_err(|source| IoError::Json { what: "team".into(), source })?;
    f.build(m)
}

pub fn load_team(path: &Path, m: &Model) -> Result<Team, IoError> {
    let text = read_text(path)?;
    let f: TeamFile =
        serde_json::from_str(&text).map_err(|source| IoError::Json { what: path.display().to_string(), source })?;
    f.build(m)
}

/// A relation from CSV text whose header row names the attributes.
pub fn parse_relation_csv(text: &str) -> Result<DbRelation, IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let attrs: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec?.iter().map(String::from).collect::<Vec<String>>());
    }
    Ok(DbRelation::new(attrs, rows)?)
}

pub fn load_relation_csv(path: &Path) -> Result<DbRelation, IoError> {
    parse_relation_csv(&read_text(path)?)
}

/// Universe values, one per line; blank lines are skipped.
pub fn load_universe(path: &Path) -> Result<Vec<String>, IoError> {
    Ok(read_text(path)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}
