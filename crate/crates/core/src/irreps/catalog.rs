//! Closed-form unitary irreps for a few standard groups.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Irrep, IrrepSet};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Permutation, DEFAULT_ORDER_CAP};
use crate::linalg::CMatrix;

const CATALOG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    /// Cyclic group of order `param`, acting regularly on `param` points.
    Cyclic,
    /// Dihedral group of order `param` (even), acting on the `param/2`-gon.
    Dihedral,
    /// `Sym(3) = <(2 3), (1 2)>`; `param` is ignored.
    Sym3,
}

impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cyclic" => Ok(Self::Cyclic),
            "dihedral" => Ok(Self::Dihedral),
            "sym3" => Ok(Self::Sym3),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

fn scalar(z: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, c, d].map(|x| Complex64::new(x, 0.0)))
}

fn cycle_perm(text: &str, degree: usize) -> Permutation {
    Permutation::parse(text, degree).expect("catalog cycle notation")
}

/// The `m`-cycle `(1 2 .. m)`.
fn rotation(m: usize) -> Permutation {
    Permutation::from_images((0..m).map(|p| (p + 1) % m).collect()).expect("rotation")
}

/// Reflection of the `m`-gon fixing point 1.
fn reflection(m: usize) -> Permutation {
    Permutation::from_images((0..m).map(|p| (m - p) % m).collect()).expect("reflection")
}

pub fn builtin_irreps(family: GroupFamily, param: i64) -> Result<(Arc<FiniteGroup>, IrrepSet)> {
    let invalid = || Error::InvalidFamilyParam {
        family: format!("{family:?}").to_lowercase(),
        param,
    };
    let (group, images): (FiniteGroup, Vec<Vec<CMatrix>>) = match family {
        GroupFamily::Cyclic => {
            if param < 1 {
                return Err(invalid());
            }
            let m = param as usize;
            if m == 1 {
                (FiniteGroup::trivial(1)?, vec![vec![]])
            } else {
                let group = FiniteGroup::generate(m, &[rotation(m)], DEFAULT_ORDER_CAP)?;
                let images = (0..m)
                    .map(|j| {
                        vec![scalar(Complex64::from_polar(
                            1.0,
                            2.0 * PI * j as f64 / m as f64,
                        ))]
                    })
                    .collect();
                (group, images)
            }
        }
        GroupFamily::Dihedral => {
            if param < 2 || param % 2 != 0 {
                return Err(invalid());
            }
            let m = (param / 2) as usize;
            let gens = match m {
                1 => vec![Permutation::identity(2), cycle_perm("(1 2)", 2)],
                2 => vec![cycle_perm("(1 2)(3 4)", 4), cycle_perm("(1 3)(2 4)", 4)],
                _ => vec![rotation(m), reflection(m)],
            };
            let degree = gens[1].degree();
            let group = FiniteGroup::generate(degree, &gens, DEFAULT_ORDER_CAP)?;
            let one = |x: f64| scalar(Complex64::new(x, 0.0));
            let mut images = Vec::new();
            let rotation_signs: &[f64] = if m.is_multiple_of(2) {
                &[1.0, -1.0]
            } else {
                &[1.0]
            };
            for &r in rotation_signs {
                for s in [1.0, -1.0] {
                    images.push(vec![one(r), one(s)]);
                }
            }
            for k in 1..m {
                if 2 * k >= m {
                    break;
                }
                let theta = 2.0 * PI * k as f64 / m as f64;
                let (sin, cos) = theta.sin_cos();
                images.push(vec![real2(cos, -sin, sin, cos), real2(1.0, 0.0, 0.0, -1.0)]);
            }
            (group, images)
        }
        GroupFamily::Sym3 => {
            let group = FiniteGroup::generate(
                3,
                &[cycle_perm("(2 3)", 3), cycle_perm("(1 2)", 3)],
                DEFAULT_ORDER_CAP,
            )?;
            let s3 = 3f64.sqrt();
            let one = |x: f64| scalar(Complex64::new(x, 0.0));
            let images = vec![
                vec![one(1.0), one(1.0)],
                vec![one(-1.0), one(-1.0)],
                vec![
                    real2(-0.5, -s3 / 2.0, -s3 / 2.0, 0.5),
                    real2(-0.5, s3 / 2.0, s3 / 2.0, 0.5),
                ],
            ];
            (group, images)
        }
    };

    let irreps = images
        .iter()
        .map(|imgs| Irrep::from_generator_images(&group, imgs, CATALOG_TOL))
        .collect::<Result<Vec<_>>>()?;
    let group = Arc::new(group);
    let set = IrrepSet::new(group.clone(), irreps)?;
    set.check_invariants(CATALOG_TOL)?;
    Ok((group, set))
}
