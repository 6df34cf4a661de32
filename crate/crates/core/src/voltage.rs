//! Base graphs with voltage assignments, the base matrix over the group
//! algebra, and explicit lift construction.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::algebra::GroupAlgebraElement;
use crate::error::{Error, Result};
use crate::group::{orbit_under, FiniteGroup, SubgroupContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoltageArc {
    pub tail: usize,
    pub head: usize,
    /// Element index in the voltage group.
    pub voltage: usize,
    /// The reversed arc of an undirected edge.
    pub paired: Option<usize>,
}

/// A base (di)graph whose arcs carry group elements.
///
/// Undirected graphs are built from one entry per edge; the reverse arc
/// with the inverse voltage is added automatically, so a loop contributes
/// both `g` and `g^-1` at its vertex.
#[derive(Debug, Clone)]
pub struct VoltageGraph {
    vertices: Vec<String>,
    arcs: Vec<VoltageArc>,
    directed: bool,
}

impl VoltageGraph {
    /// `edges` are `(tail, head, voltage)` triples, one per undirected edge.
    pub fn undirected(
        vertices: Vec<String>,
        edges: &[(usize, usize, usize)],
        group: &FiniteGroup,
    ) -> Result<Self> {
        Self::check_input(&vertices, edges, group)?;
        let mut arcs = Vec::with_capacity(2 * edges.len());
        for &(tail, head, voltage) in edges {
            let a = arcs.len();
            arcs.push(VoltageArc {
                tail,
                head,
                voltage,
                paired: Some(a + 1),
            });
            arcs.push(VoltageArc {
                tail: head,
                head: tail,
                voltage: group.inverse(voltage),
                paired: Some(a),
            });
        }
        Ok(Self {
            vertices,
            arcs,
            directed: false,
        })
    }

    pub fn directed(
        vertices: Vec<String>,
        arcs: &[(usize, usize, usize)],
        group: &FiniteGroup,
    ) -> Result<Self> {
        Self::check_input(&vertices, arcs, group)?;
        let arcs = arcs
            .iter()
            .map(|&(tail, head, voltage)| VoltageArc {
                tail,
                head,
                voltage,
                paired: None,
            })
            .collect();
        Ok(Self {
            vertices,
            arcs,
            directed: true,
        })
    }

    fn check_input(
        vertices: &[String],
        edges: &[(usize, usize, usize)],
        group: &FiniteGroup,
    ) -> Result<()> {
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        for (i, &(t, h, v)) in edges.iter().enumerate() {
            if t >= vertices.len() || h >= vertices.len() {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} references a missing vertex"
                )));
            }
            if v >= group.order() {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} has a voltage outside the group"
                )));
            }
        }
        Ok(())
    }

    /// Same shape, new voltages (one per undirected edge, or per arc when directed).
    pub fn with_voltages(&self, voltages: &[usize], group: &FiniteGroup) -> Result<Self> {
        let edges: Vec<(usize, usize, usize)> = self
            .edges()
            .iter()
            .zip(voltages)
            .map(|(&(t, h, _), &v)| (t, h, v))
            .collect();
        if edges.len() != self.edges().len() {
            return Err(Error::InvalidGraph(
                "voltage count does not match edge count".into(),
            ));
        }
        if self.directed {
            Self::directed(self.vertices.clone(), &edges, group)
        } else {
            Self::undirected(self.vertices.clone(), &edges, group)
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[VoltageArc] {
        &self.arcs
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// The user-facing edge list: every arc when directed, every other arc otherwise.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let step = if self.directed { 1 } else { 2 };
        self.arcs
            .iter()
            .step_by(step)
            .map(|a| (a.tail, a.head, a.voltage))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let k = self.vertex_count();
        let mut adj = vec![Vec::new(); k];
        for a in &self.arcs {
            adj[a.tail].push(a.head);
            adj[a.head].push(a.tail);
        }
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == k
    }
}

/// `k x k` matrix over the group algebra: entry `(u, v)` sums the voltages of all arcs `u -> v`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMatrix {
    k: usize,
    entries: Vec<GroupAlgebraElement>,
    directed: bool,
}

impl BaseMatrix {
    pub fn new(k: usize, entries: Vec<GroupAlgebraElement>, directed: bool) -> Self {
        assert_eq!(entries.len(), k * k);
        Self {
            k,
            entries,
            directed,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, u: usize, v: usize) -> &GroupAlgebraElement {
        &self.entries[u * self.k + v]
    }

    /// True when built from an undirected graph (inverse-paired voltages).
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn mul(&self, other: &BaseMatrix, group: &FiniteGroup) -> BaseMatrix {
        let k = self.k;
        let mut entries = Vec::with_capacity(k * k);
        for u in 0..k {
            for v in 0..k {
                let mut acc = GroupAlgebraElement::zero();
                for w in 0..k {
                    let (a, b) = (self.entry(u, w), other.entry(w, v));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b, group));
                    }
                }
                entries.push(acc);
            }
        }
        BaseMatrix {
            k,
            entries,
            directed: self.directed || other.directed,
        }
    }

    pub fn trace(&self) -> GroupAlgebraElement {
        (0..self.k).fold(GroupAlgebraElement::zero(), |acc, u| {
            acc.add(self.entry(u, u))
        })
    }

    /// Applies `f` to every entry, e.g. a 1-dimensional representation.
    pub fn map<T: nalgebra::Scalar>(&self, f: impl Fn(&GroupAlgebraElement) -> T) -> DMatrix<T> {
        DMatrix::from_fn(self.k, self.k, |u, v| f(self.entry(u, v)))
    }
}

pub fn build_base_matrix(graph: &VoltageGraph) -> BaseMatrix {
    let k = graph.vertex_count();
    let mut entries = vec![GroupAlgebraElement::zero(); k * k];
    for a in graph.arcs() {
        entries[a.tail * k + a.head].add_term(a.voltage, 1.0.into());
    }
    BaseMatrix {
        k,
        entries,
        directed: graph.is_directed(),
    }
}

/// `B^power` with group-algebra multiplication; coefficients are checked to stay integral.
pub fn base_matrix_power(b: &BaseMatrix, power: usize, group: &FiniteGroup) -> Result<BaseMatrix> {
    assert!(power >= 1, "power must be positive");
    let mut acc = b.clone();
    for _ in 1..power {
        acc = acc.mul(b, group);
    }
    for e in &acc.entries {
        e.check_integral()?;
    }
    Ok(acc)
}

/// Traces `tr(B^l)` for `l = 1..=max_power`.
pub fn power_traces(
    b: &BaseMatrix,
    max_power: usize,
    group: &FiniteGroup,
) -> Result<Vec<GroupAlgebraElement>> {
    let mut out = Vec::with_capacity(max_power);
    let mut acc = b.clone();
    for l in 1..=max_power {
        if l > 1 {
            acc = acc.mul(b, group);
        }
        let t = acc.trace();
        t.check_integral()?;
        out.push(t);
    }
    Ok(out)
}

/// The lifted graph on `V x (G/H)`; rows are base-vertex-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftGraph {
    /// `(base vertex, coset index)` per lifted vertex.
    pub vertex_labels: Vec<(usize, usize)>,
    /// Arc multiplicities.
    pub adjacency: DMatrix<u32>,
}

impl LiftGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn adjacency_f64(&self) -> DMatrix<f64> {
        self.adjacency.map(f64::from)
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency == self.adjacency.transpose()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.adjacency.row_iter().map(|r| r.iter().sum()).collect()
    }
}

/// Explicit relative lift: arc `(a, J)` runs from `(u, J)` to `(v, J alpha(a))`.
pub fn build_lift(graph: &VoltageGraph, ctx: &SubgroupContext) -> LiftGraph {
    let n = ctx.index();
    let kn = graph.vertex_count() * n;
    let mut adjacency = DMatrix::<u32>::zeros(kn, kn);
    for a in graph.arcs() {
        for j in 0..n {
            adjacency[(a.tail * n + j, a.head * n + ctx.act(j, a.voltage))] += 1;
        }
    }
    let vertex_labels = (0..graph.vertex_count())
        .flat_map(|u| (0..n).map(move |j| (u, j)))
        .collect();
    LiftGraph {
        vertex_labels,
        adjacency,
    }
}

/// Ordinary lift over the whole group (trivial subgroup).
pub fn build_regular_lift(graph: &VoltageGraph, group: std::sync::Arc<FiniteGroup>) -> LiftGraph {
    build_lift(graph, &SubgroupContext::trivial(group))
}

/// Subgroup generated by voltages of closed walks at vertex 0, as sorted element indices.
pub fn local_group(graph: &VoltageGraph, group: &FiniteGroup) -> Result<Vec<usize>> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    // w[x] = voltage along a tree path from vertex 0 to x
    let k = graph.vertex_count();
    let mut w: Vec<Option<usize>> = vec![None; k];
    w[0] = Some(group.identity());
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let wu = w[u].unwrap();
        for a in graph.arcs() {
            if a.tail == u && w[a.head].is_none() {
                w[a.head] = Some(group.mul(wu, a.voltage));
                queue.push_back(a.head);
            } else if a.head == u && w[a.tail].is_none() {
                w[a.tail] = Some(group.mul(wu, group.inverse(a.voltage)));
                queue.push_back(a.tail);
            }
        }
    }
    let gens: Vec<usize> = graph
        .arcs()
        .iter()
        .map(|a| {
            let (wt, wh) = (w[a.tail].unwrap(), w[a.head].unwrap());
            group.mul(group.mul(wt, a.voltage), group.inverse(wh))
        })
        .filter(|&g| g != group.identity())
        .collect();
    Ok(group.subgroup_closure(&gens))
}

/// Whether the local group at vertex 0 is transitive on `{1..degree}`,
/// which decides connectivity of the permutation lift.
pub fn local_group_is_transitive(graph: &VoltageGraph, group: &FiniteGroup) -> Result<bool> {
    let local = local_group(graph, group)?;
    let orbit = orbit_under(group.degree(), 0, local.iter().map(|&g| group.element(g)));
    Ok(orbit.len() == group.degree())
}
