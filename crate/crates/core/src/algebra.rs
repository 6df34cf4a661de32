//! Sparse elements of the complex group algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// `sum_g c_g g` with only non-zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupAlgebraElement {
    coeffs: BTreeMap<usize, Complex64>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(element: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(element, Complex64::new(1.0, 0.0));
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Complex64)>) -> Self {
        let mut out = Self::zero();
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    pub fn add_term(&mut self, element: usize, coeff: Complex64) {
        let entry = self
            .coeffs
            .entry(element)
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&element);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, element: usize) -> Complex64 {
        self.coeffs.get(&element).copied().unwrap_or_default()
    }

    /// Non-zero terms in element order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coeffs.iter().map(|(&g, &c)| (g, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g, c);
        }
        out
    }

    /// Convolution product; `self` is applied first.
    pub fn mul(&self, other: &Self, group: &FiniteGroup) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(group.mul(a, b), ca * cb);
            }
        }
        out
    }

    /// Evaluates a class function (or any element-indexed map) linearly.
    pub fn apply(&self, f: impl Fn(usize) -> Complex64) -> Complex64 {
        self.terms().map(|(g, c)| c * f(g)).sum()
    }

    /// Coefficients summed over each block of a partition (e.g. conjugacy classes).
    pub fn class_sums(&self, classes: &[Vec<usize>]) -> Vec<Complex64> {
        classes
            .iter()
            .map(|members| members.iter().map(|&g| self.coeff(g)).sum())
            .collect()
    }

    /// Errors unless every coefficient is an integer up to a relative `1e-9`.
    pub fn check_integral(&self) -> Result<()> {
        for (g, c) in self.terms() {
            let scale = c.norm().max(1.0);
            if c.im.abs() > 1e-9 * scale || (c.re - c.re.round()).abs() > 1e-9 * scale {
                return Err(Error::NonIntegralCoefficient {
                    element: g,
                    value: c.re,
                });
            }
        }
        Ok(())
    }

    /// Integer coefficients, after [`check_integral`](Self::check_integral).
    pub fn integer_terms(&self) -> Result<Vec<(usize, i64)>> {
        self.check_integral()?;
        Ok(self
            .terms()
            .map(|(g, c)| (g, c.re.round() as i64))
            .collect())
    }

    pub fn display<'a>(&'a self, group: &'a FiniteGroup) -> impl fmt::Display + 'a {
        DisplayElement { elem: self, group }
    }
}

struct DisplayElement<'a> {
    elem: &'a GroupAlgebraElement,
    group: &'a FiniteGroup,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.elem.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}{}", c.re, self.group.element(g))?;
            } else {
                write!(f, "({}){}", c, self.group.element(g))?;
            }
        }
        Ok(())
    }
}
