//! Regular-lift spectra from characters: power sums `chi(tr B^l)` are turned
//! into eigenvalues through Newton's identities and a companion matrix.
//! Works for directed bases too; gives no eigenvectors.

use num_complex::Complex64;

use crate::algebra::GroupAlgebraElement;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::irreps::Irrep;
use crate::irreps::IrrepSet;
use crate::linalg::{cmp_complex, eigenvalues_general, CMatrix};
use crate::voltage::{base_matrix_power, power_traces, BaseMatrix};

pub const MAX_POWER_SUMS: usize = 32;
const ROUNDTRIP_TOL: f64 = 1e-8;

pub fn apply_character(character: &[Complex64], elem: &GroupAlgebraElement) -> Complex64 {
    elem.apply(|g| character[g])
}

fn element_order(group: &FiniteGroup, g: usize) -> usize {
    let (mut x, mut order) = (g, 1);
    while x != group.identity() {
        x = group.mul(x, g);
        order += 1;
    }
    order
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        -result
    } else {
        result
    }
}

/// Character values recomputed from the eigenvalues of `rho(g)`, which are
/// roots of unity of order dividing `ord(g)`. Each eigenvalue is snapped to
/// the nearest such root. When the exponent counts are constant on every
/// Galois orbit the value is the integer `sum_e count_e * mu(e)` (primitive
/// `e`-th roots sum to `mu(e)`), so rational characters come out exact.
pub fn cyclotomic_character(irrep: &Irrep, group: &FiniteGroup) -> Result<Vec<Complex64>> {
    (0..group.order())
        .map(|g| {
            let order = element_order(group, g);
            let mut counts = vec![0usize; order];
            for z in eigenvalues_general(irrep.matrix(g))? {
                let turns = z.arg() / std::f64::consts::TAU * order as f64;
                counts[(turns.round() as i64).rem_euclid(order as i64) as usize] += 1;
            }
            let galois_stable = (0..order).all(|k| {
                (0..order).all(|j| gcd(k, order) != gcd(j, order) || counts[k] == counts[j])
            });
            if galois_stable {
                // the orbit of k consists of the primitive (order / gcd)-th roots
                let mut value = 0i64;
                let mut seen = vec![false; order + 1];
                for (k, &count) in counts.iter().enumerate() {
                    let e = order / gcd(k, order);
                    if !seen[e] {
                        seen[e] = true;
                        value += count as i64 * mobius(e);
                    }
                }
                Ok(Complex64::new(value as f64, 0.0))
            } else {
                let tau = std::f64::consts::TAU;
                Ok(counts
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| Complex64::from_polar(c as f64, tau * k as f64 / order as f64))
                    .sum())
            }
        })
        .collect()
}

/// Neumaier summation, applied to real and imaginary parts separately.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier_step(self.sum.re, x.re, &mut self.carry.re);
        self.sum.im = neumaier_step(self.sum.im, x.im, &mut self.carry.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier_step(sum: f64, x: f64, carry: &mut f64) -> f64 {
    let t = sum + x;
    *carry += if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    t
}

/// Elementary symmetric polynomials `e_0..=e_m` from power sums `p_1..=p_m`.
fn newton_elementary(sums: &[Complex64]) -> Vec<Complex64> {
    let m = sums.len();
    let mut e = vec![Complex64::new(1.0, 0.0); m + 1];
    for k in 1..=m {
        let mut acc = CompensatedSum::default();
        for i in 1..=k {
            let term = e[k - i] * sums[i - 1];
            acc.add(if i % 2 == 1 { term } else { -term });
        }
        e[k] = acc.total() / k as f64;
    }
    e
}

fn power_sum(roots: &[Complex64], l: i32) -> (Complex64, f64) {
    let mut acc = CompensatedSum::default();
    let mut magnitude = 0.0;
    for r in roots {
        acc.add(r.powi(l));
        magnitude += r.norm().powi(l);
    }
    (acc.total(), magnitude)
}

/// Worst relative deviation between the power sums of `roots` and `sums`,
/// scaled by `max(1, |p_l|, sum |r|^l)`.
fn roundtrip_residuals(roots: &[Complex64], sums: &[Complex64]) -> Vec<f64> {
    sums.iter()
        .enumerate()
        .map(|(l, &p)| {
            let (q, magnitude) = power_sum(roots, l as i32 + 1);
            (q - p).norm() / magnitude.max(p.norm()).max(1.0)
        })
        .collect()
}

fn worst(residuals: &[f64]) -> f64 {
    residuals.iter().copied().fold(0.0, f64::max)
}

/// Single-linkage components of `roots` at distance `threshold`, restricted to `active`.
fn components(roots: &[Complex64], active: &[usize], threshold: f64) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..active.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        parent[x] = root;
        root
    }
    for a in 0..active.len() {
        for b in a + 1..active.len() {
            if (roots[active[a]] - roots[active[b]]).norm() <= threshold {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; active.len()];
    for (a, &member) in active.iter().enumerate() {
        let r = find(&mut parent, a);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(member);
    }
    groups
}

/// A `q`-fold root comes back from the companion matrix as `q` roots spread
/// over a radius near `eps^(1/q)`, while their mean stays accurate. Clusters
/// are replaced by their mean, coarse to fine, whenever the merged multiset
/// still reproduces the power sums.
fn merge_multiple_roots(roots: &[Complex64], sums: &[Complex64]) -> Vec<Complex64> {
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let mut current = roots.to_vec();
    let mut active: Vec<usize> = (0..roots.len()).collect();
    for exponent in 1..=8 {
        let threshold = scale * 10f64.powi(-exponent);
        let mut still_active = Vec::new();
        for cluster in components(roots, &active, threshold) {
            if cluster.len() < 2 {
                still_active.extend(cluster);
                continue;
            }
            let mean = cluster.iter().map(|&i| roots[i]).sum::<Complex64>() / cluster.len() as f64;
            let mut trial = current.clone();
            for &i in &cluster {
                trial[i] = mean;
            }
            if worst(&roundtrip_residuals(&trial, sums)) <= ROUNDTRIP_TOL {
                current = trial;
            } else {
                still_active.extend(cluster);
            }
        }
        active = still_active;
    }
    current
}

/// Recovers the multiset of `m = sums.len()` numbers whose `l`-th power sums are `sums[l-1]`.
pub fn power_sums_to_roots(sums: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = sums.len();
    if m > MAX_POWER_SUMS {
        return Err(Error::TooManyPowerSums(m));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let e = newton_elementary(sums);
    // monic x^m + c_1 x^(m-1) + ... + c_m with c_k = (-1)^k e_k
    let mut companion = CMatrix::zeros(m, m);
    for k in 1..=m {
        let c = if k % 2 == 1 { -e[k] } else { e[k] };
        companion[(0, k - 1)] = -c;
    }
    for r in 1..m {
        companion[(r, r - 1)] = Complex64::new(1.0, 0.0);
    }
    let raw = eigenvalues_general(&companion)?;
    let residuals = roundtrip_residuals(&raw, sums);
    if worst(&residuals) > ROUNDTRIP_TOL {
        return Err(Error::PowerSumRoundtrip {
            worst: worst(&residuals),
            residuals,
        });
    }
    let mut roots = merge_multiple_roots(&raw, sums);
    roots.sort_by(cmp_complex);
    Ok(roots)
}

#[derive(Debug, Clone)]
pub struct PowerSumProfile {
    pub irrep: usize,
    pub dim: usize,
    /// `chi(tr B^l)` for `l = 1..=dim * k`.
    pub sums: Vec<Complex64>,
    pub roots: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct CharacterSpectrum {
    pub profiles: Vec<PowerSumProfile>,
    /// Regular-lift spectrum of size `k |G|`, each root repeated `dim` times, sorted.
    pub values: Vec<Complex64>,
}

/// Spectrum of the regular lift of `B` computed from group-algebra traces.
pub fn regular_spectrum_via_characters(
    b: &BaseMatrix,
    irreps: &IrrepSet,
) -> Result<CharacterSpectrum> {
    let k = b.k();
    let max_dim = irreps.dims().into_iter().max().unwrap_or(1);
    if max_dim * k > MAX_POWER_SUMS {
        return Err(Error::TooManyPowerSums(max_dim * k));
    }
    let group = irreps.group();
    let traces = power_traces(b, max_dim * k, group)?;

    let mut profiles = Vec::with_capacity(irreps.len());
    let mut values = Vec::with_capacity(k * group.order());
    for (index, rho) in irreps.irreps().iter().enumerate() {
        let m = rho.dim() * k;
        let character = cyclotomic_character(rho, group)?;
        let sums: Vec<Complex64> = traces[..m]
            .iter()
            .map(|t| apply_character(&character, t))
            .collect();
        let roots = power_sums_to_roots(&sums)?;
        for r in &roots {
            values.extend(std::iter::repeat_n(*r, rho.dim()));
        }
        profiles.push(PowerSumProfile {
            irrep: index,
            dim: rho.dim(),
            sums,
            roots,
        });
    }
    values.sort_by(cmp_complex);
    Ok(CharacterSpectrum { profiles, values })
}

/// `(1/|G|) sum_rho d_rho chi_rho((B^l)_{u,u})`, the identity coefficient of
/// `(B^l)_{u,u}` recovered from characters.
pub fn coefficient_of_identity(
    b: &BaseMatrix,
    irreps: &IrrepSet,
    u: usize,
    l: usize,
) -> Result<Complex64> {
    let group = irreps.group();
    let power = base_matrix_power(b, l, group)?;
    let entry = power.entry(u, u);
    let mut total = Complex64::new(0.0, 0.0);
    for rho in irreps.irreps() {
        total += apply_character(&cyclotomic_character(rho, group)?, entry) * rho.dim() as f64;
    }
    Ok(total / group.order() as f64)
}
