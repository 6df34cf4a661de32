//! Numerical decomposition of the right regular representation.
//!
//! A random Hermitian matrix averaged over the group commutes with every
//! `R(g)`, so its eigenspaces are invariant. For a generic draw each
//! eigenspace carries exactly one irreducible copy; reducible leftovers
//! (accidental near-degeneracies) are split again with a fresh draw.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Irrep, IrrepSet};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{eig_dense, CMatrix};

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
const SPLIT_DRAWS: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct DecompositionOptions {
    /// Tolerance for the homomorphism, unitarity and `<chi,chi> = 1` checks.
    pub tol: f64,
    /// Eigenvalues closer than this are grouped; `None` means `1e-7 * |G|`.
    pub cluster_tol: Option<f64>,
    /// Number of independent seeds tried before giving up.
    pub max_retries: usize,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            cluster_tol: None,
            max_retries: 8,
        }
    }
}

/// Computes a complete set of unitary irreps of `group`; deterministic in `seed`.
pub fn compute_irreps(group: Arc<FiniteGroup>, seed: u64, tol: f64) -> Result<IrrepSet> {
    compute_irreps_with(
        group,
        seed,
        DecompositionOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn compute_irreps_with(
    group: Arc<FiniteGroup>,
    seed: u64,
    opts: DecompositionOptions,
) -> Result<IrrepSet> {
    let mut seeds = Vec::new();
    let mut last_reason = String::new();
    for attempt in 0..opts.max_retries.max(1) as u64 {
        let attempt_seed = seed.wrapping_add(attempt.wrapping_mul(SEED_STRIDE));
        seeds.push(attempt_seed);
        match decompose(&group, attempt_seed, &opts) {
            Ok(set) => return Ok(set),
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::IrrepDecomposition {
        seeds,
        reason: last_reason,
    })
}

struct Regular<'a> {
    group: &'a FiniteGroup,
    /// `right[g][x] = x g`
    right: Vec<Vec<usize>>,
}

impl Regular<'_> {
    /// `Q^H R(g) Q`, using `(R(g) Q)[x, :] = Q[x g, :]`.
    fn restrict(&self, basis: &CMatrix, g: usize) -> CMatrix {
        let rows = &self.right[g];
        let moved = CMatrix::from_fn(basis.nrows(), basis.ncols(), |x, c| basis[(rows[x], c)]);
        basis.adjoint() * moved
    }

    fn restrict_all(&self, basis: &CMatrix) -> Vec<CMatrix> {
        (0..self.group.order())
            .map(|g| self.restrict(basis, g))
            .collect()
    }
}

fn character_norm(matrices: &[CMatrix]) -> f64 {
    matrices.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / matrices.len() as f64
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&m + m.adjoint()).scale(0.5)
}

fn decompose(
    shared: &Arc<FiniteGroup>,
    seed: u64,
    opts: &DecompositionOptions,
) -> std::result::Result<IrrepSet, String> {
    let group = shared.as_ref();
    let order = group.order();
    let cluster_tol = opts.cluster_tol.unwrap_or(1e-7 * order as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regular = Regular {
        group,
        right: (0..order)
            .map(|g| (0..order).map(|x| group.mul(x, g)).collect())
            .collect(),
    };

    let mut pending = vec![CMatrix::identity(order, order)];
    let mut pieces: Vec<Vec<CMatrix>> = Vec::new();
    while let Some(basis) = pending.pop() {
        let restricted = regular.restrict_all(&basis);
        let norm = character_norm(&restricted);
        if (norm - 1.0).abs() <= opts.tol.max(1e-6) {
            pieces.push(restricted);
            continue;
        }
        if norm < 1.0 {
            return Err(format!("invariant subspace has character norm {norm} < 1"));
        }
        let split = split_once(&restricted, &basis, cluster_tol, &mut rng).ok_or_else(|| {
            format!(
                "could not split a subspace of dimension {} (norm {norm:.3})",
                basis.ncols()
            )
        })?;
        pending.extend(split.into_iter().rev());
    }

    // keep the first copy of each character
    let mut irreps: Vec<Irrep> = Vec::new();
    for matrices in pieces {
        let candidate = Irrep::new(matrices);
        let duplicate = irreps.iter().any(|known| {
            known.dim() == candidate.dim()
                && known
                    .character()
                    .iter()
                    .zip(candidate.character())
                    .all(|(a, b)| (a - b).norm() < 1e-6)
        });
        if !duplicate {
            irreps.push(candidate);
        }
    }

    let classes = group.conjugacy_classes().len();
    if irreps.len() != classes {
        return Err(format!(
            "found {} inequivalent irreps but the group has {classes} classes",
            irreps.len()
        ));
    }
    let set = IrrepSet::new(shared.clone(), irreps).map_err(|e| e.to_string())?;
    set.check_invariants(opts.tol).map_err(|e| e.to_string())?;
    Ok(set)
}

/// Splits an invariant subspace (given by its restricted matrices and
/// ambient basis) into eigenspaces of a random commuting Hermitian matrix.
fn split_once(
    restricted: &[CMatrix],
    basis: &CMatrix,
    cluster_tol: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<CMatrix>> {
    let dim = basis.ncols();
    for _ in 0..SPLIT_DRAWS {
        let seed_matrix = random_hermitian(dim, rng);
        let mut averaged = CMatrix::zeros(dim, dim);
        for m in restricted {
            averaged += m * &seed_matrix * m.adjoint();
        }
        averaged.unscale_mut(restricted.len() as f64);

        let eig = eig_dense(&averaged, true, 1e-8).ok()?;
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, v) in eig.values.iter().enumerate() {
            match groups.last_mut() {
                Some(last)
                    if (v.re - eig.values[*last.last().unwrap()].re).abs() <= cluster_tol =>
                {
                    last.push(i)
                }
                _ => groups.push(vec![i]),
            }
        }
        if groups.len() < 2 {
            continue;
        }
        let pieces = groups
            .iter()
            .map(|cols| {
                let sub = CMatrix::from_fn(dim, cols.len(), |r, c| eig.vectors[(r, cols[c])]);
                basis * sub
            })
            .collect();
        return Some(pieces);
    }
    None
}
