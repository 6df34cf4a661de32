//! Unitary irreducible representations of finite permutation groups.
//!
//! An [`IrrepSet`] is either taken from the closed-form [`catalog`] or computed
//! numerically by splitting the regular representation ([`compute_irreps`]).
//! Both paths end in the same canonical ordering: ascending dimension, ties
//! broken by the character on class representatives (larger values first, so
//! the trivial representation always leads).

mod catalog;
mod regular;

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{ConjugacyClass, FiniteGroup, SubgroupContext};
use crate::linalg::{numerical_rank, singular_values, CMatrix};

pub use catalog::{builtin_irreps, GroupFamily};
pub use regular::{compute_irreps, DecompositionOptions};

/// Default relative threshold for counting singular values as non-zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// A unitary representation, stored densely per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    dim: usize,
    matrices: Vec<CMatrix>,
    character: Vec<Complex64>,
}

impl Irrep {
    pub fn new(matrices: Vec<CMatrix>) -> Self {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        let character = matrices.iter().map(|m| m.trace()).collect();
        Self {
            dim,
            matrices,
            character,
        }
    }

    /// Extends generator images to the whole group along a breadth-first
    /// word search, then checks the result is a homomorphism.
    pub fn from_generator_images(
        group: &FiniteGroup,
        images: &[CMatrix],
        tol: f64,
    ) -> Result<Self> {
        assert_eq!(
            images.len(),
            group.generators().len(),
            "one image per generator"
        );
        let dim = images.first().map_or(1, |m| m.nrows());
        let mut matrices: Vec<Option<CMatrix>> = vec![None; group.order()];
        matrices[0] = Some(CMatrix::identity(dim, dim));
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (gen, image) in group.generators().iter().zip(images) {
                let y = group.mul(x, *gen);
                if matrices[y].is_none() {
                    matrices[y] = Some(matrices[x].as_ref().unwrap() * image);
                    queue.push_back(y);
                }
            }
        }
        let irrep = Self::new(matrices.into_iter().map(Option::unwrap).collect());
        let residual = irrep.homomorphism_residual(group);
        if residual > tol {
            return Err(Error::RepresentationCheck(format!(
                "generator images do not define a homomorphism (residual {residual:e})"
            )));
        }
        Ok(irrep)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, element: usize) -> &CMatrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn character(&self) -> &[Complex64] {
        &self.character
    }

    /// `rho(J) = sum_{g in J} rho(g)` for any element set `J`.
    pub fn sum_over(&self, elements: &[usize]) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for &g in elements {
            acc += &self.matrices[g];
        }
        acc
    }

    /// `max |rho(a) rho(b) - rho(ab)|` over all pairs.
    pub fn homomorphism_residual(&self, group: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..group.order() {
            for b in 0..group.order() {
                let diff = &self.matrices[a] * &self.matrices[b] - &self.matrices[group.mul(a, b)];
                worst = worst.max(crate::linalg::max_abs(&diff));
            }
        }
        worst
    }

    /// `max |rho(g) rho(g)^H - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| crate::linalg::max_abs(&(m * m.adjoint() - &id)))
            .fold(0.0, f64::max)
    }

    /// `<chi, chi> = (1/|G|) sum |chi(g)|^2`; equals 1 exactly for irreducibles.
    pub fn character_norm(&self) -> f64 {
        self.character.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.character.len() as f64
    }
}

/// A complete, canonically ordered set of inequivalent unitary irreps.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    group: Arc<FiniteGroup>,
    irreps: Vec<Irrep>,
}

impl IrrepSet {
    /// Sorts into canonical order and checks `sum d^2 = |G|`.
    pub fn new(group: Arc<FiniteGroup>, mut irreps: Vec<Irrep>) -> Result<Self> {
        let reps: Vec<usize> = group
            .conjugacy_classes()
            .iter()
            .map(|c| c.representative)
            .collect();
        irreps.sort_by(|a, b| canonical_cmp(a, b, &reps));
        let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
        if total != group.order() {
            return Err(Error::RepresentationCheck(format!(
                "sum of squared dimensions is {total}, group order is {}",
                group.order()
            )));
        }
        Ok(Self { group, irreps })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(Irrep::dim).collect()
    }

    /// Checks every irrep is a unitary homomorphism with `<chi,chi> = 1`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        for (i, rho) in self.irreps.iter().enumerate() {
            let hom = rho.homomorphism_residual(&self.group);
            let uni = rho.unitarity_residual();
            let norm = (rho.character_norm() - 1.0).abs();
            if hom > tol || uni > tol || norm > tol {
                return Err(Error::RepresentationCheck(format!(
                    "irrep {i}: homomorphism {hom:e}, unitarity {uni:e}, character norm deviation {norm:e}"
                )));
            }
        }
        Ok(())
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn canonical_cmp(a: &Irrep, b: &Irrep, class_reps: &[usize]) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| {
        for &g in class_reps {
            let (x, y) = (a.character[g], b.character[g]);
            let ord = quantize(y.re)
                .cmp(&quantize(x.re))
                .then(quantize(y.im).cmp(&quantize(x.im)));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}

/// `rho(H)` with its singular values and numerical rank.
#[derive(Debug, Clone)]
pub struct SubgroupSumImage {
    pub matrix_sum: CMatrix,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

pub fn subgroup_sum(irrep: &Irrep, ctx: &SubgroupContext, rank_tol: f64) -> SubgroupSumImage {
    let matrix_sum = irrep.sum_over(ctx.subgroup());
    let singular_values = singular_values(&matrix_sum);
    let rank = numerical_rank(&singular_values, rank_tol);
    SubgroupSumImage {
        matrix_sum,
        singular_values,
        rank,
    }
}

/// `sum_rho dim(rho) * rank(rho(H))`.
pub fn rank_identity_sum(irreps: &IrrepSet, ctx: &SubgroupContext, rank_tol: f64) -> usize {
    irreps
        .irreps()
        .iter()
        .map(|rho| rho.dim() * subgroup_sum(rho, ctx, rank_tol).rank)
        .sum()
}

/// True iff the rank-weighted dimension sum equals the index `|G:H|`.
pub fn verify_rank_identity(irreps: &IrrepSet, ctx: &SubgroupContext) -> bool {
    rank_identity_sum(irreps, ctx, DEFAULT_RANK_TOL) == ctx.index()
}

/// Worst deviation from `sum_g rho(g)_ij conj(rho'(g)_i'j') = |G|/d delta...`.
pub fn great_orthogonality_residual(irreps: &IrrepSet) -> f64 {
    let order = irreps.group().order();
    let mut worst: f64 = 0.0;
    for (p, rho) in irreps.irreps().iter().enumerate() {
        for (q, sigma) in irreps.irreps().iter().enumerate() {
            for i in 0..rho.dim() {
                for j in 0..rho.dim() {
                    for k in 0..sigma.dim() {
                        for l in 0..sigma.dim() {
                            let sum: Complex64 = (0..order)
                                .map(|g| rho.matrix(g)[(i, j)] * sigma.matrix(g)[(k, l)].conj())
                                .sum();
                            let expected = if p == q && i == k && j == l {
                                order as f64 / rho.dim() as f64
                            } else {
                                0.0
                            };
                            worst = worst.max((sum - expected).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

pub fn verify_great_orthogonality(irreps: &IrrepSet, tol: f64) -> bool {
    great_orthogonality_residual(irreps) <= tol
}

/// Worst deviation across the row and column orthogonality relations for
/// characters. The column form is evaluated on class representatives.
pub fn character_orthogonality_residual(irreps: &IrrepSet, classes: &[ConjugacyClass]) -> f64 {
    let order = irreps.group().order() as f64;
    let chars: Vec<&[Complex64]> = irreps.irreps().iter().map(Irrep::character).collect();
    let mut worst: f64 = 0.0;
    for (p, a) in chars.iter().enumerate() {
        for (q, b) in chars.iter().enumerate() {
            let sum: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
            let expected = if p == q { order } else { 0.0 };
            worst = worst.max((sum - expected).norm());
        }
    }
    for (s, cs) in classes.iter().enumerate() {
        for (t, ct) in classes.iter().enumerate() {
            let (g, h) = (cs.representative, ct.representative);
            let sum: Complex64 = chars.iter().map(|c| c[g] * c[h].conj()).sum();
            let expected = if s == t { order / cs.size as f64 } else { 0.0 };
            worst = worst.max((sum - expected).norm());
        }
    }
    worst
}

pub fn verify_character_orthogonality(
    irreps: &IrrepSet,
    classes: &[ConjugacyClass],
    tol: f64,
) -> bool {
    character_orthogonality_residual(irreps, classes) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Permutation, DEFAULT_ORDER_CAP};

    fn cyclic(m: usize) -> (Arc<FiniteGroup>, IrrepSet) {
        builtin_irreps(GroupFamily::Cyclic, m as i64).unwrap()
    }

    #[test]
    fn sym3_subgroup_sums() {
        let (g, set) = builtin_irreps(GroupFamily::Sym3, 0).unwrap();
        let ctx = SubgroupContext::new(g.clone(), &g.stabilizer(1).unwrap()).unwrap();
        let s3 = 3f64.sqrt();
        let sums: Vec<SubgroupSumImage> = set
            .irreps()
            .iter()
            .map(|r| subgroup_sum(r, &ctx, DEFAULT_RANK_TOL))
            .collect();
        assert_eq!(
            sums.iter().map(|s| s.rank).collect::<Vec<_>>(),
            vec![1, 0, 1]
        );
        assert!(crate::linalg::max_abs(&sums[1].matrix_sum) < 1e-15);
        let expected = [[0.5, -s3 / 2.0], [-s3 / 2.0, 1.5]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert!((sums[2].matrix_sum[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        // singular values cluster at 0 or |H|
        for s in &sums {
            for &v in &s.singular_values {
                assert!(v < 1e-9 || (v - 2.0).abs() < 1e-9, "{v}");
            }
        }
        assert!(verify_rank_identity(&set, &ctx));
    }

    #[test]
    fn trivial_subgroup_gives_identity_sums() {
        let (g, set) = builtin_irreps(GroupFamily::Dihedral, 8).unwrap();
        let ctx = SubgroupContext::trivial(g.clone());
        for rho in set.irreps() {
            let s = subgroup_sum(rho, &ctx, DEFAULT_RANK_TOL);
            assert_eq!(s.rank, rho.dim());
        }
        assert_eq!(rank_identity_sum(&set, &ctx, DEFAULT_RANK_TOL), 8);
    }

    #[test]
    fn rank_identity_cyclic_six() {
        // subgroup of order 2 in C6 is generated by the cube of the generator
        let (g, set) = cyclic(6);
        let r = g.generators()[0];
        let r3 = g.mul(r, g.mul(r, r));
        let ctx = SubgroupContext::new(g.clone(), &g.subgroup_closure(&[r3])).unwrap();
        // oracle: a 1-dim irrep sums to a non-zero value on H iff it is trivial on H
        let expected: usize = set
            .irreps()
            .iter()
            .filter(|rho| {
                ctx.subgroup()
                    .iter()
                    .all(|&h| (rho.character()[h] - 1.0).norm() < 1e-9)
            })
            .count();
        assert_eq!(expected, 3);
        assert_eq!(rank_identity_sum(&set, &ctx, DEFAULT_RANK_TOL), 3);
        assert!(verify_rank_identity(&set, &ctx));
    }

    #[test]
    fn orthogonality_checks_catch_corruption() {
        let (g, set) = builtin_irreps(GroupFamily::Sym3, 0).unwrap();
        let classes = g.conjugacy_classes();
        assert!(verify_great_orthogonality(&set, 1e-12));
        assert!(verify_character_orthogonality(&set, &classes, 1e-12));

        let mut irreps = set.irreps().to_vec();
        let mut mats = irreps[2].matrices().to_vec();
        mats[3][(0, 1)] += Complex64::new(0.1, 0.0);
        irreps[2] = Irrep::new(mats);
        let corrupted = IrrepSet {
            group: g.clone(),
            irreps,
        };
        assert!(!verify_great_orthogonality(&corrupted, 1e-8));
    }

    #[test]
    fn trivial_group_orthogonality() {
        let g = Arc::new(FiniteGroup::trivial(1).unwrap());
        let set =
            IrrepSet::new(g.clone(), vec![Irrep::new(vec![CMatrix::identity(1, 1)])]).unwrap();
        assert!(verify_great_orthogonality(&set, 1e-14));
        assert!(verify_character_orthogonality(
            &set,
            &g.conjugacy_classes(),
            1e-14
        ));
    }

    #[test]
    fn cyclic_five_character_table() {
        let (g, set) = cyclic(5);
        assert!(verify_character_orthogonality(
            &set,
            &g.conjugacy_classes(),
            1e-12
        ));
    }

    #[test]
    fn incomplete_sets_are_rejected() {
        let g = Arc::new(
            FiniteGroup::generate(
                2,
                &[Permutation::parse("(1 2)", 2).unwrap()],
                DEFAULT_ORDER_CAP,
            )
            .unwrap(),
        );
        let trivial = Irrep::new(vec![CMatrix::identity(1, 1); 2]);
        assert!(IrrepSet::new(g, vec![trivial]).is_err());
    }
}
