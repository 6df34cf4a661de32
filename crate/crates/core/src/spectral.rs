//! Spectrum and eigenvectors of a relative lift from the irreducible images
//! of its base matrix.
//!
//! Column layout of `S^H` (and of `S^H T`): irreps in canonical order; inside
//! irrep `rho` of dimension `d`, row index `j` in `0..d`, then base vertex `w`,
//! then intra-block index `i`. Column `(w, i)` of the `rho` block of `T` is
//! column `w * d + i` of `U_rho` and carries the eigenvalue at that position.

use std::sync::Arc;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupContext};
use crate::irreps::{subgroup_sum, Irrep, IrrepSet, DEFAULT_RANK_TOL};
use crate::linalg::{
    cmp_complex, eig_dense, max_abs, pivoted_column_selection, singular_values,
    sorted_multiset_distance, CMatrix, CVector,
};
use crate::voltage::{build_base_matrix, build_lift, BaseMatrix, VoltageGraph};

const ZERO_COLUMN_REL: f64 = 1e-10;
const SELECTION_REL_TOL: f64 = 1e-9;
const SINGULAR_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative cutoff for `rank(rho(H))`.
    pub rank: f64,
    /// Eigen-residual bound, relative to `max(1, |y|)` or `max|M|`.
    pub residual: f64,
    /// Two eigenvalues closer than this are reported as one entry.
    pub matching: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: DEFAULT_RANK_TOL,
            residual: 1e-8,
            matching: 1e-7,
        }
    }
}

/// `rho(B)`: a `k x k` grid of `d x d` blocks.
#[derive(Debug, Clone)]
pub struct RhoImage {
    pub irrep: usize,
    pub dim: usize,
    pub matrix: CMatrix,
}

pub fn rho_image(b: &BaseMatrix, irreps: &IrrepSet, irrep: usize) -> RhoImage {
    let rho = &irreps.irreps()[irrep];
    let (k, d) = (b.k(), rho.dim());
    let mut matrix = CMatrix::zeros(k * d, k * d);
    for u in 0..k {
        for v in 0..k {
            for (g, c) in b.entry(u, v).terms() {
                let mut block = matrix.view_mut((u * d, v * d), (d, d));
                block += rho.matrix(g) * c;
            }
        }
    }
    RhoImage {
        irrep,
        dim: d,
        matrix,
    }
}

/// Eigenvalues of `rho(B)` and a matching eigenvector matrix `U`.
#[derive(Debug, Clone)]
pub struct IrrepEigenData {
    pub irrep: usize,
    pub dim: usize,
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

pub fn irrep_eigendata(
    b: &BaseMatrix,
    irreps: &IrrepSet,
    irrep: usize,
    tol: &Tolerances,
) -> Result<IrrepEigenData> {
    let image = rho_image(b, irreps, irrep);
    let eig = eig_dense(&image.matrix, !b.is_directed(), tol.residual)?;
    Ok(IrrepEigenData {
        irrep,
        dim: image.dim,
        values: eig.values,
        vectors: eig.vectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub irrep: usize,
    pub dim: usize,
    /// `rank(rho(H))`, the number of times each eigenvalue of `rho(B)` is repeated.
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub count: usize,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub kn: usize,
    pub entries: Vec<SpectrumEntry>,
    /// All `kn` eigenvalues with multiplicity, sorted.
    pub values: Vec<Complex64>,
}

impl SpectrumReport {
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

fn check_same_group(a: &FiniteGroup, b: &FiniteGroup) -> Result<()> {
    if std::ptr::eq(a, b) || (a.degree() == b.degree() && a.elements() == b.elements()) {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

fn check_inputs(b: &BaseMatrix, irreps: &IrrepSet, ctx: &SubgroupContext) -> Result<()> {
    if b.is_directed() {
        return Err(Error::DirectedUnsupported);
    }
    check_same_group(irreps.group(), ctx.group())?;
    for u in 0..b.k() {
        for v in 0..b.k() {
            if b.entry(u, v).terms().any(|(g, _)| g >= ctx.group().order()) {
                return Err(Error::GroupMismatch);
            }
        }
    }
    Ok(())
}

/// `rank(rho(H))` for every irrep, checked against the index.
pub fn rank_factors(irreps: &IrrepSet, ctx: &SubgroupContext, rank_tol: f64) -> Result<Vec<usize>> {
    let ranks: Vec<usize> = irreps
        .irreps()
        .iter()
        .map(|rho| subgroup_sum(rho, ctx, rank_tol).rank)
        .collect();
    let sum: usize = irreps
        .irreps()
        .iter()
        .zip(&ranks)
        .map(|(rho, r)| rho.dim() * r)
        .sum();
    if sum != ctx.index() {
        return Err(Error::RankIdentity {
            sum,
            index: ctx.index(),
        });
    }
    Ok(ranks)
}

/// Lift spectrum as the union of `rank(rho(H))` copies of each `Sp(rho(B))`.
pub fn lift_spectrum(
    b: &BaseMatrix,
    irreps: &IrrepSet,
    ctx: &SubgroupContext,
    tol: &Tolerances,
) -> Result<SpectrumReport> {
    check_inputs(b, irreps, ctx)?;
    let ranks = rank_factors(irreps, ctx, tol.rank)?;

    let mut tagged: Vec<(Complex64, Provenance)> = Vec::new();
    for (index, (rho, &rank)) in irreps.irreps().iter().zip(&ranks).enumerate() {
        if rank == 0 {
            continue;
        }
        let data = irrep_eigendata(b, irreps, index, tol)?;
        let provenance = Provenance {
            irrep: index,
            dim: rho.dim(),
            rank,
        };
        tagged.extend(data.values.iter().map(|&v| (v, provenance)));
    }
    tagged.sort_by(|a, b| cmp_complex(&a.0, &b.0));

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for (value, prov) in &tagged {
        match entries.last_mut() {
            Some(last) if (last.value - value).norm() <= tol.matching => {
                last.count += prov.rank;
                if !last.provenance.contains(prov) {
                    last.provenance.push(*prov);
                }
            }
            _ => entries.push(SpectrumEntry {
                value: *value,
                count: prov.rank,
                provenance: vec![*prov],
            }),
        }
    }
    let values = tagged
        .iter()
        .flat_map(|(v, p)| std::iter::repeat_n(*v, p.rank))
        .collect();
    Ok(SpectrumReport {
        kn: b.k() * ctx.index(),
        entries,
        values,
    })
}

/// `rho(J) = sum_{g in J} rho(g)` for every coset `J`.
fn coset_sums(rho: &Irrep, ctx: &SubgroupContext) -> Vec<CMatrix> {
    ctx.cosets()
        .iter()
        .map(|coset| rho.sum_over(coset))
        .collect()
}

/// The `kn x k|G|` matrix `S^H`; see the module docs for the column layout.
pub fn build_sh(irreps: &IrrepSet, ctx: &SubgroupContext, k: usize) -> CMatrix {
    let n = ctx.index();
    let total: usize = irreps.dims().iter().map(|d| d * d * k).sum();
    let mut sh = CMatrix::zeros(k * n, total);
    let mut offset = 0;
    for rho in irreps.irreps() {
        let d = rho.dim();
        let sums = coset_sums(rho, ctx);
        for j in 0..d {
            for u in 0..k {
                for i in 0..d {
                    let col = offset + j * k * d + u * d + i;
                    for (coset, m) in sums.iter().enumerate() {
                        sh[(u * n + coset, col)] = m[(j, i)];
                    }
                }
            }
        }
        offset += d * d * k;
    }
    sh
}

/// Block-diagonal `T` with `d` copies of each `U_rho`.
pub fn build_t(eigendata: &[IrrepEigenData], k: usize) -> Result<CMatrix> {
    let total: usize = eigendata.iter().map(|e| e.dim * e.dim * k).sum();
    let mut t = CMatrix::zeros(total, total);
    let mut offset = 0;
    for data in eigendata {
        let size = data.dim * k;
        let sv = singular_values(&data.vectors);
        let (largest, smallest) = (
            sv.first().copied().unwrap_or(1.0),
            sv.last().copied().unwrap_or(1.0),
        );
        if smallest <= SINGULAR_REL_TOL * largest {
            return Err(Error::SingularEigenvectors {
                irrep: data.irrep,
                sigma_min: smallest,
            });
        }
        for _ in 0..data.dim {
            t.view_mut((offset, offset), (size, size))
                .copy_from(&data.vectors);
            offset += size;
        }
    }
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct EigenColumn {
    pub eigenvalue: Complex64,
    pub irrep: usize,
    pub j: usize,
    pub w: usize,
    pub i: usize,
    pub vector: CVector,
    pub zero: bool,
}

#[derive(Debug, Clone)]
pub struct EigenvectorBundle {
    /// Every column of `S^H T`, in layout order.
    pub columns: Vec<EigenColumn>,
    /// Indices into `columns` of `kn` independent eigenvectors.
    pub selected: Vec<usize>,
    /// Worst `|A y - mu y| / max(1, |y|)` over the selected columns.
    pub max_residual: f64,
}

/// Lift adjacency assembled from `B` and the coset action.
pub fn lift_adjacency(b: &BaseMatrix, ctx: &SubgroupContext) -> CMatrix {
    let n = ctx.index();
    let mut a = CMatrix::zeros(b.k() * n, b.k() * n);
    for u in 0..b.k() {
        for v in 0..b.k() {
            for (g, c) in b.entry(u, v).terms() {
                for j in 0..n {
                    a[(u * n + j, v * n + ctx.act(j, g))] += c;
                }
            }
        }
    }
    a
}

fn relative_residual(a: &CMatrix, y: &CVector, mu: Complex64) -> f64 {
    (a * y - y * mu).norm() / y.norm().max(1.0)
}

/// Eigenvectors of the lift as columns of `S^H T`, with `kn` independent ones selected.
pub fn lift_eigenvectors(
    b: &BaseMatrix,
    irreps: &IrrepSet,
    ctx: &SubgroupContext,
    tol: &Tolerances,
) -> Result<EigenvectorBundle> {
    check_inputs(b, irreps, ctx)?;
    rank_factors(irreps, ctx, tol.rank)?;
    let k = b.k();
    let kn = k * ctx.index();

    let eigendata = (0..irreps.len())
        .map(|index| irrep_eigendata(b, irreps, index, tol))
        .collect::<Result<Vec<_>>>()?;
    let product = build_sh(irreps, ctx, k) * build_t(&eigendata, k)?;
    let threshold = ZERO_COLUMN_REL * max_abs(&product);

    let mut columns = Vec::with_capacity(product.ncols());
    for data in &eigendata {
        let d = data.dim;
        for j in 0..d {
            for c in 0..d * k {
                let vector = product.column(columns.len()).into_owned();
                let zero = vector.iter().all(|z| z.norm() <= threshold);
                columns.push(EigenColumn {
                    eigenvalue: data.values[c],
                    irrep: data.irrep,
                    j,
                    w: c / d,
                    i: c % d,
                    vector,
                    zero,
                });
            }
        }
    }

    let candidates: Vec<usize> = (0..columns.len()).filter(|&c| !columns[c].zero).collect();
    let selected = pivoted_column_selection(&product, &candidates, kn, SELECTION_REL_TOL);
    if selected.len() < kn {
        return Err(Error::EigenbasisRank {
            found: selected.len(),
            expected: kn,
        });
    }

    let adjacency = lift_adjacency(b, ctx);
    let mut max_residual: f64 = 0.0;
    for &c in &selected {
        let col = &columns[c];
        max_residual = max_residual.max(relative_residual(&adjacency, &col.vector, col.eigenvalue));
    }
    if max_residual > tol.residual {
        return Err(Error::EigenResidual {
            residual: max_residual,
            tol: tol.residual,
        });
    }
    Ok(EigenvectorBundle {
        columns,
        selected,
        max_residual,
    })
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub kn: usize,
    /// Sorted-pairing distance between the oracle and the method spectra.
    pub spectral_distance: f64,
    /// Eigenvector residuals measured against the explicitly built lift.
    pub max_residual: f64,
    pub selected: usize,
    pub rank_identity: (usize, usize),
    pub passed: bool,
    pub failure: Option<String>,
}

/// Eigenvalues of the explicit lift adjacency (real symmetric solver).
pub fn oracle_spectrum(graph: &VoltageGraph, ctx: &SubgroupContext) -> Vec<f64> {
    let adjacency = build_lift(graph, ctx).adjacency_f64();
    let mut values: Vec<f64> = SymmetricEigen::new(adjacency)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Compares the method against a brute-force eigendecomposition of the lift.
pub fn verify_against_oracle(
    graph: &VoltageGraph,
    irreps: &IrrepSet,
    ctx: &SubgroupContext,
    tol: &Tolerances,
) -> VerificationReport {
    let b = build_base_matrix(graph);
    let kn = graph.vertex_count() * ctx.index();
    let mut report = VerificationReport {
        kn,
        spectral_distance: f64::INFINITY,
        max_residual: f64::INFINITY,
        selected: 0,
        rank_identity: (0, ctx.index()),
        passed: false,
        failure: None,
    };
    if graph.is_directed() {
        report.failure = Some(Error::DirectedUnsupported.to_string());
        return report;
    }
    report.rank_identity.0 = irreps
        .irreps()
        .iter()
        .map(|rho| rho.dim() * subgroup_sum(rho, ctx, tol.rank).rank)
        .sum();

    let oracle: Vec<Complex64> = oracle_spectrum(graph, ctx)
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let method = match lift_spectrum(&b, irreps, ctx, tol) {
        Ok(s) => s,
        Err(e) => {
            report.failure = Some(e.to_string());
            return report;
        }
    };
    report.spectral_distance =
        sorted_multiset_distance(&oracle, &method.values).unwrap_or(f64::INFINITY);

    let bundle = match lift_eigenvectors(&b, irreps, ctx, tol) {
        Ok(bundle) => bundle,
        Err(e) => {
            report.failure = Some(e.to_string());
            return report;
        }
    };
    let adjacency = build_lift(graph, ctx)
        .adjacency
        .map(|x| Complex64::new(f64::from(x), 0.0));
    report.selected = bundle.selected.len();
    report.max_residual = bundle
        .selected
        .iter()
        .map(|&c| {
            relative_residual(
                &adjacency,
                &bundle.columns[c].vector,
                bundle.columns[c].eigenvalue,
            )
        })
        .fold(0.0, f64::max);

    let spectra_agree = report.spectral_distance <= tol.matching;
    let vectors_ok = report.max_residual <= tol.residual && report.selected == kn;
    report.passed = spectra_agree && vectors_ok && report.rank_identity.0 == ctx.index();
    if !report.passed {
        report.failure = Some(format!(
            "spectral distance {:e}, eigenvector residual {:e}, {} of {kn} columns selected",
            report.spectral_distance, report.max_residual, report.selected
        ));
    }
    report
}

/// The quotient `G/H` for normal `H`, realized as permutations of the cosets,
/// together with the image index of every element of `G`.
pub fn quotient_action(ctx: &SubgroupContext) -> Result<(Arc<FiniteGroup>, Vec<usize>)> {
    if !ctx.is_normal() {
        return Err(Error::NotASubgroup(
            "quotient needs a normal subgroup".into(),
        ));
    }
    let group = ctx.group();
    let n = ctx.index();
    let perm =
        |g: usize| crate::group::Permutation::from_images((0..n).map(|j| ctx.act(j, g)).collect());
    let gens = group
        .generators()
        .iter()
        .map(|&g| perm(g))
        .collect::<Result<Vec<_>>>()?;
    let quotient = if gens.is_empty() {
        FiniteGroup::trivial(n)?
    } else {
        FiniteGroup::generate(n, &gens, group.order())?
    };
    let images = (0..group.order())
        .map(|g| {
            quotient
                .index_of(&perm(g)?)
                .ok_or_else(|| Error::NotASubgroup("coset action escapes".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Arc::new(quotient), images))
}
