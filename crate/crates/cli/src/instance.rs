//! JSON instance files: a group, a subgroup and a voltage graph.

use std::collections::HashMap;
use std::sync::Arc;

use liftspec::irreps::DEFAULT_RANK_TOL;
use liftspec::{
    builtin_irreps, compute_irreps, FiniteGroup, GroupFamily, IrrepSet, Permutation,
    SubgroupContext, Tolerances, VoltageGraph, DEFAULT_ORDER_CAP,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub group: GroupSpec,
    #[serde(default)]
    pub subgroup: SubgroupSpec,
    pub graph: GraphSpec,
    #[serde(default)]
    pub options: OptionsSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Generators {
        degree: usize,
        generators: Vec<String>,
    },
    Named {
        family: String,
        #[serde(default)]
        param: i64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Keyword(SubgroupKeyword),
    Tagged(TaggedSubgroup),
}

impl Default for SubgroupSpec {
    fn default() -> Self {
        Self::Keyword(SubgroupKeyword::Trivial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupKeyword {
    Trivial,
    Full,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TaggedSubgroup {
    /// Stabilizer of a 1-based point.
    Stabilizer {
        point: usize,
    },
    Generators {
        generators: Vec<String>,
    },
    Trivial,
    Full,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default)]
    pub directed: bool,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    #[serde(default = "identity_text")]
    pub voltage: String,
}

fn identity_text() -> String {
    "()".into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    pub seed: Option<u64>,
    pub tol_rank: Option<f64>,
    pub tol_residual: Option<f64>,
    pub tol_match: Option<f64>,
}

/// Tolerance overrides from the command line; these win over the file.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub tol_rank: Option<f64>,
    pub tol_residual: Option<f64>,
    pub tol_match: Option<f64>,
}

enum IrrepSource {
    Catalog(IrrepSet),
    Computed,
}

/// A parsed instance with every name resolved against the group.
pub struct Instance {
    pub group: Arc<FiniteGroup>,
    pub ctx: SubgroupContext,
    pub graph: VoltageGraph,
    pub tolerances: Tolerances,
    pub seed: u64,
    subgroup_is_trivial: bool,
    irreps: IrrepSource,
}

impl Instance {
    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let doc: InstanceDocument =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Self::resolve(doc, overrides)
    }

    fn resolve(doc: InstanceDocument, overrides: &Overrides) -> Result<Self, CliError> {
        let (group, irreps) = match &doc.group {
            GroupSpec::Generators { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Permutation::parse(g, *degree))
                    .collect::<liftspec::Result<Vec<_>>>()?;
                let group = if gens.is_empty() {
                    FiniteGroup::trivial(*degree)?
                } else {
                    FiniteGroup::generate(*degree, &gens, DEFAULT_ORDER_CAP)?
                };
                (Arc::new(group), IrrepSource::Computed)
            }
            GroupSpec::Named { family, param } => {
                let family: GroupFamily = family
                    .parse()
                    .map_err(|e: liftspec::Error| CliError::Parse(e.to_string()))?;
                let (group, set) = builtin_irreps(family, *param)?;
                (group, IrrepSource::Catalog(set))
            }
        };

        let element = |text: &str| -> Result<usize, CliError> {
            let p = Permutation::parse(text, group.degree())?;
            group.index_of(&p).ok_or_else(|| {
                CliError::Inconsistent(format!("{text} is not an element of the group"))
            })
        };

        let keyword = match &doc.subgroup {
            SubgroupSpec::Keyword(k) => Some(*k),
            SubgroupSpec::Tagged(TaggedSubgroup::Trivial) => Some(SubgroupKeyword::Trivial),
            SubgroupSpec::Tagged(TaggedSubgroup::Full) => Some(SubgroupKeyword::Full),
            _ => None,
        };
        let ctx = match (&doc.subgroup, keyword) {
            (_, Some(SubgroupKeyword::Trivial)) => SubgroupContext::trivial(group.clone()),
            (_, Some(SubgroupKeyword::Full)) => SubgroupContext::full(group.clone()),
            (SubgroupSpec::Tagged(TaggedSubgroup::Stabilizer { point }), None) => {
                SubgroupContext::new(group.clone(), &group.stabilizer(*point)?)?
            }
            (SubgroupSpec::Tagged(TaggedSubgroup::Generators { generators }), None) => {
                let gens = generators
                    .iter()
                    .map(|g| element(g))
                    .collect::<Result<Vec<_>, _>>()?;
                SubgroupContext::new(group.clone(), &group.subgroup_closure(&gens))?
            }
            _ => unreachable!("keyword forms handled above"),
        };
        let subgroup_is_trivial = ctx.subgroup().len() == 1;

        let mut names: HashMap<&str, usize> = HashMap::new();
        for (i, v) in doc.graph.vertices.iter().enumerate() {
            if names.insert(v.as_str(), i).is_some() {
                return Err(CliError::Inconsistent(format!("duplicate vertex {v:?}")));
            }
        }
        let vertex = |name: &str| {
            names
                .get(name)
                .copied()
                .ok_or_else(|| CliError::Inconsistent(format!("unknown vertex {name:?}")))
        };
        let edges = doc
            .graph
            .edges
            .iter()
            .map(|e| Ok((vertex(&e.from)?, vertex(&e.to)?, element(&e.voltage)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let vertices = doc.graph.vertices.clone();
        let graph = if doc.graph.directed {
            VoltageGraph::directed(vertices, &edges, &group)?
        } else {
            VoltageGraph::undirected(vertices, &edges, &group)?
        };

        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            rank: overrides
                .tol_rank
                .or(doc.options.tol_rank)
                .unwrap_or(defaults.rank),
            residual: overrides
                .tol_residual
                .or(doc.options.tol_residual)
                .unwrap_or(defaults.residual),
            matching: overrides
                .tol_match
                .or(doc.options.tol_match)
                .unwrap_or(defaults.matching),
        };
        for (name, value) in [
            ("rank", tolerances.rank),
            ("residual", tolerances.residual),
            ("match", tolerances.matching),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Parse(format!(
                    "tolerance {name} must be positive, got {value}"
                )));
            }
        }

        Ok(Self {
            group,
            ctx,
            graph,
            tolerances,
            seed: doc.options.seed.unwrap_or(0),
            subgroup_is_trivial,
            irreps,
        })
    }

    pub fn subgroup_is_trivial(&self) -> bool {
        self.subgroup_is_trivial
    }

    /// Catalog irreps for named groups, otherwise a seeded numerical decomposition.
    pub fn irreps(&self) -> Result<IrrepSet, CliError> {
        match &self.irreps {
            IrrepSource::Catalog(set) => Ok(set.clone()),
            IrrepSource::Computed => Ok(compute_irreps(
                self.group.clone(),
                self.seed,
                DEFAULT_RANK_TOL,
            )?),
        }
    }
}
