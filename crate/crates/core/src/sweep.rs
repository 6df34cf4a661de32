//! Random lift instances for cross-checking the spectral method against
//! explicit lifts.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::{FiniteGroup, Permutation, SubgroupContext, DEFAULT_ORDER_CAP};
use crate::irreps::{builtin_irreps, compute_irreps, GroupFamily, IrrepSet};
use crate::voltage::VoltageGraph;

/// A voltage group with a complete irrep set.
#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: String,
    pub irreps: Arc<IrrepSet>,
}

impl NamedGroup {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.irreps.group()
    }
}

/// Cyclic groups of order 2 to 6, dihedral groups of order 8 and 12,
/// `Sym(3)` from the catalog and `Sym(4)` with computed irreps.
pub fn standard_pool(seed: u64) -> Result<Vec<NamedGroup>> {
    let mut pool = Vec::new();
    let mut push = |name: String, (_, set): (Arc<FiniteGroup>, IrrepSet)| {
        pool.push(NamedGroup {
            name,
            irreps: Arc::new(set),
        });
    };
    for m in 2..=6 {
        push(
            format!("cyclic {m}"),
            builtin_irreps(GroupFamily::Cyclic, m)?,
        );
    }
    for order in [8, 12] {
        push(
            format!("dihedral {order}"),
            builtin_irreps(GroupFamily::Dihedral, order)?,
        );
    }
    push("sym3".into(), builtin_irreps(GroupFamily::Sym3, 0)?);

    let gens = [
        Permutation::parse("(1 2)", 4)?,
        Permutation::parse("(1 2 3 4)", 4)?,
    ];
    let sym4 = Arc::new(FiniteGroup::generate(4, &gens, DEFAULT_ORDER_CAP)?);
    push(
        "sym4".into(),
        (sym4.clone(), compute_irreps(sym4, seed, 1e-9)?),
    );
    Ok(pool)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub irreps: Arc<IrrepSet>,
    pub ctx: SubgroupContext,
    pub graph: VoltageGraph,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub max_vertices: usize,
    /// Upper bound on parallel edges between two distinct vertices.
    pub max_edges_per_pair: usize,
    /// Upper bound on loops at a vertex.
    pub max_loops: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_vertices: 5,
            max_edges_per_pair: 3,
            max_loops: 2,
        }
    }
}

/// Trivial, full, or generated by one or two random elements.
pub fn random_subgroup(group: &Arc<FiniteGroup>, rng: &mut impl Rng) -> SubgroupContext {
    match rng.random_range(0..4) {
        0 => SubgroupContext::trivial(group.clone()),
        1 => SubgroupContext::full(group.clone()),
        choice => {
            let gens: Vec<usize> = (0..choice - 1)
                .map(|_| rng.random_range(0..group.order()))
                .collect();
            let elements = group.subgroup_closure(&gens);
            SubgroupContext::new(group.clone(), &elements).expect("closure is a subgroup")
        }
    }
}

/// Undirected multigraph on `1..=max_vertices` vertices with random voltages.
pub fn random_graph(group: &FiniteGroup, config: &SweepConfig, rng: &mut impl Rng) -> VoltageGraph {
    let k = rng.random_range(1..=config.max_vertices);
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u..k {
            let cap = if u == v {
                config.max_loops
            } else {
                config.max_edges_per_pair
            };
            for _ in 0..rng.random_range(0..=cap) {
                edges.push((u, v, rng.random_range(0..group.order())));
            }
        }
    }
    let vertices = (0..k).map(|u| format!("v{u}")).collect();
    VoltageGraph::undirected(vertices, &edges, group).expect("generated edges are valid")
}

/// Same base graph, fresh uniformly random voltages.
pub fn randomize_voltages(
    graph: &VoltageGraph,
    group: &FiniteGroup,
    rng: &mut impl Rng,
) -> Result<VoltageGraph> {
    let voltages: Vec<usize> = graph
        .edges()
        .iter()
        .map(|_| rng.random_range(0..group.order()))
        .collect();
    graph.with_voltages(&voltages, group)
}

/// `count` instances, deterministic in `seed`.
pub fn generate_instances(
    pool: &[NamedGroup],
    count: usize,
    seed: u64,
    config: &SweepConfig,
) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|t| {
            let named = pool.choose(&mut rng).expect("non-empty pool");
            let group = named.group();
            let ctx = random_subgroup(group, &mut rng);
            let graph = random_graph(group, config, &mut rng);
            let label = format!(
                "#{t}: {} |H|={} k={} edges={}",
                named.name,
                ctx.subgroup().len(),
                graph.vertex_count(),
                graph.edges().len()
            );
            Instance {
                label,
                irreps: named.irreps.clone(),
                ctx,
                graph,
            }
        })
        .collect()
}
