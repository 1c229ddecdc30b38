//! Univariate polynomials over a [`Field`] and exponent-vector monomials.
//!
//! Multivariate work in this crate never needs general polynomial algebra:
//! every construction substitutes a line or fiber parameter and continues
//! with univariate arithmetic. Monomials are therefore plain exponent vectors
//! evaluated at points.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, Field, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("interpolation nodes must be pairwise distinct (repeated x = {0})")]
    DuplicateNode(u32),
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error("the zero polynomial has every element as a root")]
    ZeroPolynomial,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.coeffs.iter().map(|c| c.value()).collect();
        write!(f, "UniPoly{v:?}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.value()) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, v) => write!(f, "{v}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, v) => write!(f, "{v}x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn trim(c: &mut Vec<Elem>) {
    while c.last().is_some_and(|e| e.is_zero()) {
        c.pop();
    }
}

/// Remainder of `a` modulo a monic-or-not `m` on raw coefficient slices.
/// Leaves the result trimmed.
pub(crate) fn rem_in_place(field: &Field, a: &mut Vec<Elem>, m: &[Elem], lead_inv: Elem) {
    trim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let top = a.len() - 1;
        let c = field.mul(a[top], lead_inv);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = field.sub(a[shift + i], field.mul(c, mi));
        }
        trim(a);
    }
}

pub(crate) fn mul_raw(field: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> UniPoly {
        trim(&mut coeffs);
        UniPoly { field: field.clone(), coeffs }
    }

    /// From integer-encoded coefficients, lowest degree first.
    pub fn from_ints(field: &Field, coeffs: &[u64]) -> Result<UniPoly, PolyError> {
        let c = coeffs.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(field, c))
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// c * x^deg
    pub fn monomial(field: &Field, c: Elem, deg: usize) -> UniPoly {
        let mut v = vec![Elem::ZERO; deg + 1];
        v[deg] = c;
        UniPoly::new(field, v)
    }

    pub fn x(field: &Field) -> UniPoly {
        UniPoly::monomial(field, Elem::ONE, 1)
    }

    /// `a*x + b`
    pub fn linear(field: &Field, a: Elem, b: Elem) -> UniPoly {
        UniPoly::new(field, vec![b, a])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn to_ints(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.value()).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(f, c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(f, c)
    }

    pub fn neg(&self) -> UniPoly {
        let c = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        UniPoly::new(&self.field, c)
    }

    pub fn scale(&self, s: Elem) -> UniPoly {
        let c = self.coeffs.iter().map(|&a| self.field.mul(a, s)).collect();
        UniPoly::new(&self.field, c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        UniPoly::new(&self.field, mul_raw(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut result = UniPoly::constant(&self.field, Elem::ONE);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Returns `(quotient, remainder)` with `self = quotient * d + remainder`
    /// and `deg remainder < deg d`.
    pub fn divmod(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let f = &self.field;
        let lead = d.leading().ok_or(PolyError::ZeroDivisor)?;
        let lead_inv = f.inv(lead)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            let shift = top - dd;
            q[shift] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
            }
            trim(&mut r);
        }
        Ok((UniPoly::new(f, q), UniPoly::new(f, r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly, PolyError> {
        let lead = d.leading().ok_or(PolyError::ZeroDivisor)?;
        let lead_inv = self.field.inv(lead)?;
        let mut r = self.coeffs.clone();
        rem_in_place(&self.field, &mut r, &d.coeffs, lead_inv);
        Ok(UniPoly { field: self.field.clone(), coeffs: r })
    }

    /// self^e mod m, without forming the full power.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> Result<UniPoly, PolyError> {
        let mut result = UniPoly::constant(&self.field, Elem::ONE).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(result)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Substitutes `inner` for the variable.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let f = &self.field;
        let mut acc = UniPoly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(f, c));
        }
        acc
    }

    /// Every field element at which the polynomial vanishes, in canonical
    /// order, found by exhaustive scan.
    pub fn roots(&self) -> Result<Vec<Elem>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.field.elements().filter(|&x| self.eval(x).is_zero()).collect())
    }

    /// The unique polynomial of degree below `points.len()` through the
    /// given `(x, y)` pairs.
    pub fn lagrange(field: &Field, points: &[(Elem, Elem)]) -> Result<UniPoly, PolyError> {
        if points.is_empty() {
            return Err(PolyError::NoPoints);
        }
        check_distinct(points.iter().map(|p| p.0))?;
        let mut acc = UniPoly::zero(field);
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut num = UniPoly::constant(field, Elem::ONE);
            let mut den = Elem::ONE;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&UniPoly::linear(field, Elem::ONE, field.neg(xj)));
                den = field.mul(den, field.sub(xi, xj));
            }
            let scale = field.mul(yi, field.inv(den)?);
            acc = acc.add(&num.scale(scale));
        }
        Ok(acc)
    }
}

fn check_distinct(xs: impl Iterator<Item = Elem>) -> Result<(), PolyError> {
    let mut seen = std::collections::HashSet::new();
    for x in xs {
        if !seen.insert(x) {
            return Err(PolyError::DuplicateNode(x.value()));
        }
    }
    Ok(())
}

/// Weights `w` with `h(target) = sum_j w_j * h(nodes[j])` for every
/// polynomial `h` of degree below `nodes.len()`.
pub fn lagrange_weights(field: &Field, nodes: &[Elem], target: Elem) -> Result<Vec<Elem>, PolyError> {
    if nodes.is_empty() {
        return Err(PolyError::NoPoints);
    }
    check_distinct(nodes.iter().copied())?;
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let mut num = Elem::ONE;
            let mut den = Elem::ONE;
            for (m, &xm) in nodes.iter().enumerate() {
                if m != j {
                    num = field.mul(num, field.sub(target, xm));
                    den = field.mul(den, field.sub(xj, xm));
                }
            }
            Ok(field.mul(num, field.inv(den)?))
        })
        .collect()
}

/// A monomial given by an exponent per coordinate, e.g. `[a, b]` for
/// `x^a y^b` or `[i, j, k]` for `x^i y^j z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn new(exps: impl Into<Vec<u32>>) -> Monomial {
        Monomial(exps.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Evaluates at a point; missing coordinates are treated as exponent 0.
    pub fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        self.0
            .iter()
            .zip(point)
            .fold(Elem::ONE, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)))
    }

    /// Checks every exponent against its cap.
    pub fn within(&self, caps: &[u32]) -> bool {
        self.0.len() == caps.len() && self.0.iter().zip(caps).all(|(e, c)| e <= c)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let mut wrote = false;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = NAMES.get(i).copied().unwrap_or("w");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}
