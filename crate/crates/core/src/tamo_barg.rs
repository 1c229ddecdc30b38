//! Good polynomials and the Tamo-Barg codes C_k(g).
//!
//! A polynomial g of degree r+1 that is constant on each block of a
//! partition of the domain into blocks of size r+1 gives the code spanned by
//! g^j x^i (i < r, j < k/r). On a block every codeword is a polynomial of
//! degree below r in x, so any symbol is the Lagrange interpolation of the
//! other r symbols in its block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalcode::{BasisFn, DesignDistance, EvaluationCode, Provenance};
use crate::gf::{Elem, Field};
use crate::poly::{lagrange_weights, UniPoly};
use crate::recovery::{RecoveryStructure, RepairGroup};

#[derive(Clone, Debug, PartialEq)]
pub struct GoodPolynomial {
    g: UniPoly,
    parts: Vec<Vec<Elem>>,
}

/// Why a (g, partition) pair is not good.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GoodViolation {
    EmptyPartition,
    /// Blocks must have at least two elements.
    TrivialBlocks,
    BlockSize { block: usize, size: usize, expected: usize },
    Degree { degree: Option<usize>, expected: usize },
    Overlap { element: u32 },
    NotConstant { a: u32, b: u32, ga: u32, gb: u32 },
}

/// Checks degree, block sizes, disjointness and constancy of `g` on blocks.
/// On failure returns the first violation found.
pub fn verify_good(g: &UniPoly, parts: &[Vec<Elem>]) -> std::result::Result<(), GoodViolation> {
    let Some(first) = parts.first() else {
        return Err(GoodViolation::EmptyPartition);
    };
    let size = first.len();
    if size < 2 {
        return Err(GoodViolation::TrivialBlocks);
    }
    for (i, p) in parts.iter().enumerate() {
        if p.len() != size {
            return Err(GoodViolation::BlockSize { block: i, size: p.len(), expected: size });
        }
    }
    if g.degree() != Some(size) {
        return Err(GoodViolation::Degree { degree: g.degree(), expected: size });
    }
    let mut seen = std::collections::HashSet::new();
    for &a in parts.iter().flatten() {
        if !seen.insert(a) {
            return Err(GoodViolation::Overlap { element: a.value() });
        }
    }
    for p in parts {
        let ga = g.eval(p[0]);
        if let Some(&b) = p[1..].iter().find(|&&b| g.eval(b) != ga) {
            return Err(GoodViolation::NotConstant { a: p[0].value(), b: b.value(), ga: ga.value(), gb: g.eval(b).value() });
        }
    }
    Ok(())
}

fn canonical_parts(mut parts: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    for p in parts.iter_mut() {
        p.sort();
    }
    parts.sort();
    parts
}

impl GoodPolynomial {
    /// Wraps a caller-supplied pair after checking it.
    pub fn new(g: UniPoly, parts: Vec<Vec<Elem>>) -> Result<GoodPolynomial> {
        verify_good(&g, &parts).map_err(|v| Error::invalid(format!("not a good polynomial: {v:?}")))?;
        Ok(GoodPolynomial { g, parts: canonical_parts(parts) })
    }

    pub fn g(&self) -> &UniPoly {
        &self.g
    }

    pub fn parts(&self) -> &[Vec<Elem>] {
        &self.parts
    }

    pub fn locality(&self) -> usize {
        self.parts[0].len() - 1
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    /// Union of the blocks in increasing element order.
    pub fn domain(&self) -> Vec<Elem> {
        let mut d: Vec<Elem> = self.parts.iter().flatten().copied().collect();
        d.sort();
        d
    }
}

/// g = x^(r+1) on the nonzero elements, with blocks the cosets of the
/// multiplicative subgroup of order r+1.
pub fn good_from_multiplicative(field: &Field, r: usize) -> Result<GoodPolynomial> {
    let q1 = field.order() as usize - 1;
    if r == 0 || q1 % (r + 1) != 0 {
        return Err(Error::invalid(format!("r+1 = {} must divide q-1 = {q1} with r >= 1", r + 1)));
    }
    let h = field.pow(field.primitive_element(), (q1 / (r + 1)) as u64);
    let subgroup: Vec<Elem> = (0..=r as u64).map(|e| field.pow(h, e)).collect();
    let mut covered = vec![false; field.order() as usize];
    let mut parts = Vec::new();
    for a in field.nonzero_elements() {
        if covered[a.value() as usize] {
            continue;
        }
        let coset: Vec<Elem> = subgroup.iter().map(|&s| field.mul(a, s)).collect();
        for c in &coset {
            covered[c.value() as usize] = true;
        }
        parts.push(coset);
    }
    let g = UniPoly::monomial(field, Elem::ONE, r + 1);
    GoodPolynomial::new(g, parts)
}

/// g = prod_{a in H} (x - a) on the whole field, where H is the additive
/// subgroup spanned over GF(p) by `generators`; blocks are the cosets of H.
pub fn good_from_additive(field: &Field, generators: &[Elem]) -> Result<GoodPolynomial> {
    if generators.is_empty() {
        return Err(Error::invalid("additive subgroup needs at least one generator"));
    }
    let p = field.p();
    let mut h = vec![Elem::ZERO];
    for &gen in generators {
        if h.contains(&gen) {
            return Err(Error::invalid(format!("generator {gen} lies in the span of the previous ones")));
        }
        let mut next = Vec::with_capacity(h.len() * p as usize);
        for c in 0..p {
            let step = field.mul(field.from_int(c as i64), gen);
            next.extend(h.iter().map(|&x| field.add(x, step)));
        }
        h = next;
    }
    let mut g = UniPoly::constant(field, Elem::ONE);
    for &a in &h {
        g = g.mul(&UniPoly::linear(field, Elem::ONE, field.neg(a)));
    }
    let mut covered = vec![false; field.order() as usize];
    let mut parts = Vec::new();
    for a in field.elements() {
        if covered[a.value() as usize] {
            continue;
        }
        let coset: Vec<Elem> = h.iter().map(|&s| field.add(a, s)).collect();
        for c in &coset {
            covered[c.value() as usize] = true;
        }
        parts.push(coset);
    }
    GoodPolynomial::new(g, parts)
}

#[derive(Clone, Debug)]
pub struct TamoBargCode {
    pub code: EvaluationCode,
    pub good: GoodPolynomial,
    pub k: usize,
    pub recovery: RecoveryStructure,
}

/// Builds C_k(g) on the blocks of `good`, with one repair group per
/// coordinate (the rest of its block, Lagrange coefficients).
pub fn build_tb(good: &GoodPolynomial, k: usize) -> Result<TamoBargCode> {
    let r = good.locality();
    let field = good.field().clone();
    if k == 0 || k % r != 0 {
        return Err(Error::invalid(format!("r = {r} must divide k = {k}")));
    }
    let blocks = good.parts().len();
    if k / r > blocks {
        return Err(Error::invalid(format!("k/r = {} exceeds the number of blocks {blocks}", k / r)));
    }
    let domain = good.domain();
    let n = domain.len();
    let index_of = |a: Elem| domain.binary_search(&a).expect("domain element");

    let mut basis = Vec::with_capacity(k);
    let mut gj = UniPoly::constant(&field, Elem::ONE);
    for _ in 0..k / r {
        for i in 0..r {
            let f = gj.mul(&UniPoly::monomial(&field, Elem::ONE, i));
            basis.push(BasisFn::Poly { var: 0, poly: f });
        }
        gj = gj.mul(good.g());
    }
    let points = domain.iter().map(|&a| vec![a]).collect();
    let code = EvaluationCode::build(&field, points, basis)?.with_design_distance(DesignDistance {
        value: n - k - k / r + 2,
        provenance: Provenance::Formula,
    });
    if code.dimension() != k {
        return Err(Error::invalid(format!("basis has rank {} instead of {k}", code.dimension())));
    }

    let mut groups = vec![Vec::new(); n];
    for part in good.parts() {
        for &t in part {
            let nodes: Vec<Elem> = part.iter().copied().filter(|&a| a != t).collect();
            let lambda = lagrange_weights(&field, &nodes, t)?;
            let target = index_of(t);
            groups[target].push(RepairGroup::new(target, nodes.iter().map(|&a| index_of(a)).collect(), lambda));
        }
    }
    let recovery = RecoveryStructure::new(n, groups)?;
    Ok(TamoBargCode { code, good: good.clone(), k, recovery })
}
