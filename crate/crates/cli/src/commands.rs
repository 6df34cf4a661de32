//! Command bodies; each returns the text printed on stdout.

use liftspec::sweep::randomize_voltages;
use liftspec::voltage::power_traces;
use liftspec::{
    build_base_matrix, build_lift, lift_eigenvectors, lift_spectrum,
    regular_spectrum_via_characters, verify_against_oracle, CMatrix,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Instance};

/// `[re, im]`, with negative zero folded to zero.
pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re + 0.0, z.im + 0.0]
}

fn pairs(zs: impl IntoIterator<Item = Complex64>) -> Vec<[f64; 2]> {
    zs.into_iter().map(pair).collect()
}

fn render<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct ProvenanceJson {
    irrep: usize,
    dim: usize,
    rank: usize,
}

#[derive(Serialize)]
struct EigenvalueJson {
    value: [f64; 2],
    count: usize,
    provenance: Vec<ProvenanceJson>,
}

#[derive(Serialize)]
struct SpectrumJson {
    kn: usize,
    eigenvalues: Vec<EigenvalueJson>,
}

pub fn spectrum(instance: &Instance) -> Result<String, CliError> {
    let irreps = instance.irreps()?;
    let b = build_base_matrix(&instance.graph);
    let report = lift_spectrum(&b, &irreps, &instance.ctx, &instance.tolerances)?;
    let eigenvalues = report
        .entries
        .iter()
        .map(|e| EigenvalueJson {
            value: pair(e.value),
            count: e.count,
            provenance: e
                .provenance
                .iter()
                .map(|p| ProvenanceJson {
                    irrep: p.irrep,
                    dim: p.dim,
                    rank: p.rank,
                })
                .collect(),
        })
        .collect();
    Ok(render(&SpectrumJson {
        kn: report.kn,
        eigenvalues,
    }))
}

#[derive(Serialize)]
struct ColumnJson {
    eigenvalue: [f64; 2],
    irrep: usize,
    j: usize,
    w: usize,
    i: usize,
    vector: Vec<[f64; 2]>,
    zero: bool,
    selected: bool,
}

#[derive(Serialize)]
struct EigvecsJson {
    kn: usize,
    max_residual: f64,
    columns: Vec<ColumnJson>,
}

pub fn eigvecs(instance: &Instance) -> Result<String, CliError> {
    let irreps = instance.irreps()?;
    let b = build_base_matrix(&instance.graph);
    let bundle = lift_eigenvectors(&b, &irreps, &instance.ctx, &instance.tolerances)?;
    let mut selected = vec![false; bundle.columns.len()];
    for &c in &bundle.selected {
        selected[c] = true;
    }
    let columns = bundle
        .columns
        .iter()
        .zip(selected)
        .map(|(c, selected)| ColumnJson {
            eigenvalue: pair(c.eigenvalue),
            irrep: c.irrep,
            j: c.j,
            w: c.w,
            i: c.i,
            vector: pairs(c.vector.iter().copied()),
            zero: c.zero,
            selected,
        })
        .collect();
    let kn = instance.graph.vertex_count() * instance.ctx.index();
    Ok(render(&EigvecsJson {
        kn,
        max_residual: bundle.max_residual,
        columns,
    }))
}

#[derive(Serialize)]
struct LiftJson {
    vertices: Vec<String>,
    adjacency: Vec<Vec<u32>>,
}

/// Edge list `tail head multiplicity`, one line per non-zero adjacency entry;
/// undirected lifts list each unordered pair once.
pub fn lift(instance: &Instance, emit_adjacency: bool) -> String {
    let lift = build_lift(&instance.graph, &instance.ctx);
    let names = instance.graph.vertices();
    let labels: Vec<String> = lift
        .vertex_labels
        .iter()
        .map(|&(u, j)| format!("{}@{j}", names[u]))
        .collect();
    let n = lift.vertex_count();
    if emit_adjacency {
        let adjacency = (0..n)
            .map(|r| (0..n).map(|c| lift.adjacency[(r, c)]).collect())
            .collect();
        return render(&LiftJson {
            vertices: labels,
            adjacency,
        });
    }
    let directed = instance.graph.is_directed();
    let mut text = String::new();
    for r in 0..n {
        for c in if directed { 0 } else { r }..n {
            let m = lift.adjacency[(r, c)];
            if m > 0 {
                text.push_str(&format!("{} {} {m}\n", labels[r], labels[c]));
            }
        }
    }
    text
}

#[derive(Serialize)]
struct TrialJson {
    trial: usize,
    kn: usize,
    spectral_distance: Option<f64>,
    max_residual: Option<f64>,
    selected: usize,
    rank_identity: [usize; 2],
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

#[derive(Serialize)]
struct VerifyJson {
    seed: u64,
    passed: bool,
    trials: Vec<TrialJson>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Runs `trials` randomized voltage assignments; returns whether all passed.
pub fn verify(instance: &Instance, trials: usize, seed: u64) -> Result<(bool, String), CliError> {
    if instance.graph.is_directed() {
        return Err(liftspec::Error::DirectedUnsupported.into());
    }
    let irreps = instance.irreps()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(trials);
    for trial in 0..trials {
        let graph = randomize_voltages(&instance.graph, &instance.group, &mut rng)?;
        let r = verify_against_oracle(&graph, &irreps, &instance.ctx, &instance.tolerances);
        reports.push(TrialJson {
            trial,
            kn: r.kn,
            spectral_distance: finite(r.spectral_distance),
            max_residual: finite(r.max_residual),
            selected: r.selected,
            rank_identity: [r.rank_identity.0, r.rank_identity.1],
            passed: r.passed,
            failure: r.failure,
        });
    }
    let passed = reports.iter().all(|t| t.passed);
    Ok((
        passed,
        render(&VerifyJson {
            seed,
            passed,
            trials: reports,
        }),
    ))
}

#[derive(Serialize)]
struct TermJson {
    element: String,
    coefficient: i64,
}

#[derive(Serialize)]
struct TraceJson {
    power: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize)]
struct ProfileJson {
    irrep: usize,
    dim: usize,
    power_sums: Vec<[f64; 2]>,
    roots: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CharactersJson {
    count: usize,
    traces: Vec<TraceJson>,
    irreps: Vec<ProfileJson>,
    spectrum: Vec<[f64; 2]>,
}

/// Regular-lift spectrum from power sums; only defined for the trivial subgroup.
pub fn characters(instance: &Instance) -> Result<String, CliError> {
    if !instance.subgroup_is_trivial() {
        return Err(CliError::Inconsistent(
            "the character method needs the trivial subgroup".into(),
        ));
    }
    let irreps = instance.irreps()?;
    let b = build_base_matrix(&instance.graph);
    let result = regular_spectrum_via_characters(&b, &irreps)?;
    let longest = result
        .profiles
        .iter()
        .map(|p| p.sums.len())
        .max()
        .unwrap_or(0);
    let group = &instance.group;
    let traces = power_traces(&b, longest, group)?
        .iter()
        .enumerate()
        .map(|(l, t)| {
            let mut terms = t.integer_terms()?;
            terms.sort();
            let terms = terms
                .into_iter()
                .map(|(g, coefficient)| TermJson {
                    element: group.element(g).to_string(),
                    coefficient,
                })
                .collect();
            Ok(TraceJson {
                power: l + 1,
                terms,
            })
        })
        .collect::<liftspec::Result<Vec<_>>>()?;
    let irreps = result
        .profiles
        .iter()
        .map(|p| ProfileJson {
            irrep: p.irrep,
            dim: p.dim,
            power_sums: pairs(p.sums.iter().copied()),
            roots: pairs(p.roots.iter().copied()),
        })
        .collect();
    Ok(render(&CharactersJson {
        count: result.values.len(),
        traces,
        irreps,
        spectrum: pairs(result.values.iter().copied()),
    }))
}

#[derive(Serialize)]
struct ClassJson {
    representative: String,
    size: usize,
}

#[derive(Serialize)]
struct IrrepJson {
    index: usize,
    dim: usize,
    character: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Serialize)]
struct IrrepsJson {
    order: usize,
    degree: usize,
    elements: Vec<String>,
    classes: Vec<ClassJson>,
    dims: Vec<usize>,
    irreps: Vec<IrrepJson>,
}

fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| pairs(r.iter().copied())).collect()
}

/// Group elements (indexed as in every other report) and the irreps; `dump`
/// adds the matrix of every element.
pub fn irreps(instance: &Instance, dump: bool) -> Result<String, CliError> {
    let set = instance.irreps()?;
    let group = &instance.group;
    let classes = group
        .conjugacy_classes()
        .into_iter()
        .map(|c| ClassJson {
            representative: group.element(c.representative).to_string(),
            size: c.size,
        })
        .collect();
    let irreps = set
        .irreps()
        .iter()
        .enumerate()
        .map(|(index, rho)| IrrepJson {
            index,
            dim: rho.dim(),
            character: pairs(rho.character().iter().copied()),
            matrices: dump.then(|| rho.matrices().iter().map(rows).collect()),
        })
        .collect();
    Ok(render(&IrrepsJson {
        order: group.order(),
        degree: group.degree(),
        elements: group.elements().iter().map(ToString::to_string).collect(),
        classes,
        dims: set.dims(),
        irreps,
    }))
}
