//! Finite permutation groups.
//!
//! Permutations act on the right: the image of point `p` under `a` is `p a`,
//! and a product `a * b` means "apply `a`, then `b`". Every table in this
//! module (multiplication, cosets, conjugation) uses that convention, so a
//! representation `rho` is a homomorphism in the sense
//! `rho(a * b) = rho(a) rho(b)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on the order of a generated group.
pub const DEFAULT_ORDER_CAP: usize = 10080;

/// Groups up to this order get a precomputed multiplication table.
const DENSE_TABLE_LIMIT: usize = 2048;

/// A permutation of `{0, .., degree-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for &p in &images {
            if p >= degree {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree,
                });
            }
            if seen[p] {
                return Err(Error::RepeatedPoint {
                    text: format!("{images:?}"),
                    point: p + 1,
                });
            }
            seen[p] = true;
        }
        Ok(Self { images })
    }

    /// Parses disjoint cycles of 1-based points, e.g. `"(1 2)(3 4)"` or `"()"`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let malformed = |reason: &str| Error::MalformedCycle {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(malformed("empty string"));
        }
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| malformed("expected '('"))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| malformed("unclosed cycle"))?;
            let body = &body_start[..close];
            rest = body_start[close + 1..].trim_start();

            let mut cycle = Vec::new();
            for token in body.split_whitespace() {
                let point: usize = token
                    .parse()
                    .map_err(|_| malformed(&format!("bad point {token:?}")))?;
                if point == 0 || point > degree {
                    return Err(Error::PointOutOfRange { point, degree });
                }
                if used[point - 1] {
                    return Err(Error::RepeatedPoint {
                        text: text.to_string(),
                        point,
                    });
                }
                used[point - 1] = true;
                cycle.push(point - 1);
            }
            if body.contains('(') {
                return Err(malformed("nested '('"));
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of a 0-based point.
    pub fn image(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|p| p + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&p| other.images[p]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q] = p;
        }
        Permutation { images }
    }

    /// Disjoint cycles (length >= 2) in 0-based points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite permutation group with its elements in canonical order.
///
/// Element 0 is the identity; the rest follow lexicographic order of their
/// image tuples. Elements are referred to by index everywhere else.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl FiniteGroup {
    /// Closure of `generators` under multiplication.
    pub fn generate(degree: usize, generators: &[Permutation], order_cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }

        let identity = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(identity.clone(), ());
        let mut found = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = found[i].then(g);
                if !seen.contains_key(&next) {
                    if found.len() >= order_cap {
                        return Err(Error::OrderCapExceeded { cap: order_cap });
                    }
                    seen.insert(next.clone(), ());
                    found.push(next);
                    queue.push_back(found.len() - 1);
                }
            }
        }

        // The identity is the lexicographically smallest image tuple, so a plain sort keeps it first.
        found.sort();
        let index: HashMap<Permutation, usize> = found
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let inverses = found.iter().map(|p| index[&p.inverse()]).collect();
        let mut gens = Vec::new();
        for g in generators {
            let i = index[g];
            if !gens.contains(&i) {
                gens.push(i);
            }
        }

        let mut group = Self {
            degree,
            elements: found,
            index,
            generators: gens,
            inverses,
            table: None,
        };
        let order = group.order();
        if order <= DENSE_TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(group.mul_slow(a, b) as u32);
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    /// The trivial group acting on `degree` points.
    pub fn trivial(degree: usize) -> Result<Self> {
        Self::generate(degree, &[], 1)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].then(&self.elements[b])]
    }

    /// `b^-1 a b`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inverse(b), a), b)
    }

    /// Closure of a set of element indices under multiplication, sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut found = vec![0];
        let mut i = 0;
        while i < found.len() {
            let x = found[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    found.push(y);
                }
            }
            i += 1;
        }
        found.sort_unstable();
        found
    }

    /// All elements fixing `point` (1-based).
    pub fn stabilizer(&self, point: usize) -> Result<Vec<usize>> {
        if point == 0 || point > self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok((0..self.order())
            .filter(|&i| self.elements[i].image(point - 1) == point - 1)
            .collect())
    }

    /// Orbit of a 0-based point under the group, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit_under(
            self.degree,
            point,
            self.generators.iter().map(|&g| &self.elements[g]),
        )
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// Transitive and sharply so: `|G| = degree`.
    pub fn is_regular_action(&self) -> bool {
        self.is_transitive() && self.order() == self.degree
    }

    /// Checks that `elements` is closed under products and inverses.
    pub fn check_subgroup(&self, elements: &[usize]) -> Result<()> {
        let mut member = vec![false; self.order()];
        for &e in elements {
            if e >= self.order() {
                return Err(Error::NotASubgroup(format!(
                    "element index {e} out of range"
                )));
            }
            member[e] = true;
        }
        if !member[0] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in elements {
            if !member[self.inverse(a)] {
                return Err(Error::NotASubgroup(format!(
                    "inverse of {} missing",
                    self.elements[a]
                )));
            }
            for &b in elements {
                if !member[self.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!(
                        "product {} * {} missing",
                        self.elements[a], self.elements[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for x in 0..order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            let mut centralizer = 0;
            for g in 0..order {
                let y = self.conjugate(x, g);
                if y == x {
                    centralizer += 1;
                }
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            members.sort_unstable();
            debug_assert_eq!(members.len() * centralizer, order);
            classes.push(ConjugacyClass {
                representative: x,
                size: members.len(),
                members,
            });
        }
        classes
    }
}

pub(crate) fn orbit_under<'a>(
    degree: usize,
    point: usize,
    gens: impl Iterator<Item = &'a Permutation> + Clone,
) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut stack = vec![point];
    let mut orbit = vec![point];
    while let Some(p) = stack.pop() {
        for g in gens.clone() {
            let q = g.image(p);
            if !seen[q] {
                seen[q] = true;
                orbit.push(q);
                stack.push(q);
            }
        }
    }
    orbit.sort_unstable();
    orbit
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Smallest member index.
    pub representative: usize,
    pub members: Vec<usize>,
    pub size: usize,
}

/// A subgroup `H` together with its right cosets `Hg` in a fixed order.
#[derive(Debug, Clone)]
pub struct SubgroupContext {
    group: Arc<FiniteGroup>,
    subgroup: Vec<usize>,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
}

impl SubgroupContext {
    /// Enumerates right cosets breadth-first from `H`, multiplying on the
    /// right by the group generators in generator order.
    pub fn new(group: Arc<FiniteGroup>, subgroup: &[usize]) -> Result<Self> {
        let mut subgroup = subgroup.to_vec();
        subgroup.sort_unstable();
        subgroup.dedup();
        group.check_subgroup(&subgroup)?;

        let order = group.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut reps = Vec::new();

        let mut add_coset =
            |rep: usize, cosets: &mut Vec<Vec<usize>>, reps: &mut Vec<usize>| -> bool {
                let mut members: Vec<usize> = subgroup.iter().map(|&h| group.mul(h, rep)).collect();
                members.sort_unstable();
                if coset_of[members[0]] != usize::MAX {
                    return false;
                }
                let id = cosets.len();
                for &m in &members {
                    coset_of[m] = id;
                }
                cosets.push(members);
                reps.push(rep);
                true
            };

        add_coset(0, &mut cosets, &mut reps);
        let mut head = 0;
        while head < cosets.len() {
            let rep = reps[head];
            for &g in group.generators() {
                add_coset(group.mul(rep, g), &mut cosets, &mut reps);
            }
            head += 1;
        }
        debug_assert_eq!(cosets.len() * subgroup.len(), order);

        Ok(Self {
            group,
            subgroup,
            cosets,
            coset_of,
        })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        Self::new(group, &[0]).expect("trivial subgroup")
    }

    pub fn full(group: Arc<FiniteGroup>) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        Self::new(group, &all).expect("whole group")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn coset_of(&self, element: usize) -> usize {
        self.coset_of[element]
    }

    /// Number of cosets, `|G| / |H|`.
    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    /// Coset reached from coset `j` by right multiplication with `g`.
    pub fn act(&self, j: usize, g: usize) -> usize {
        self.coset_of[self.group.mul(self.cosets[j][0], g)]
    }

    /// `g H g^-1 = H` for every `g`.
    pub fn is_normal(&self) -> bool {
        let mut member = vec![false; self.group.order()];
        for &h in &self.subgroup {
            member[h] = true;
        }
        (0..self.group.order()).all(|g| {
            self.subgroup
                .iter()
                .all(|&h| member[self.group.conjugate(h, g)])
        })
    }
}
