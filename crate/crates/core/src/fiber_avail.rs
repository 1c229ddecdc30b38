//! Fiber-product codes on the generalized Giulietti-Korchmaros curve
//!
//!   x^q + x = y^(q+1),   y^(q^2) - y = z^s,   s = (q^N + 1)/(q + 1)
//!
//! over GF(q^(2N)). Each point has two disjoint recovery sets: the other
//! points sharing (x, y) (a z-fiber, s - 1 helpers) and the other points
//! sharing (y, z) (an x-fiber, q - 1 helpers).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalcode::{BasisFn, EvaluationCode, Point};
use crate::gf::{prime_power, Elem, Field};
use crate::recovery::{fiber_groups, RecoveryStructure};

#[derive(Clone, Debug)]
pub struct GkCurve {
    pub q: u32,
    pub n_param: u32,
    pub s: u32,
    pub field: Field,
    /// Affine points `[x, y, z]` with z != 0, sorted.
    pub points: Vec<Point>,
    pub counts: GkCounts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GkCounts {
    pub evaluation: usize,
    pub z_zero_affine: usize,
    pub infinite: usize,
    /// q^(2N+2) - q^(N+3) + q^(N+2) + 1
    pub formula_total: u64,
}

impl GkCounts {
    pub fn reconciles(&self) -> bool {
        (self.evaluation + self.z_zero_affine + self.infinite) as u64 == self.formula_total
    }
}

pub fn gk_formula_total(q: u64, n: u32) -> u64 {
    q.pow(2 * n + 2) - q.pow(n + 3) + q.pow(n + 2) + 1
}

/// Enumerates the affine points; the evaluation set keeps z != 0.
pub fn gk_points(q: u32, n: u32) -> Result<GkCurve> {
    let (p, e) = prime_power(q as u64).ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid(format!("N = {n} must be odd and at least 3")));
    }
    let field = Field::new(p, 2 * e * n)?;
    let f = &field;
    let qq = q as u64;
    let s = ((qq.pow(n) + 1) / (qq + 1)) as u32;

    let mut by_x: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    let mut by_y: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for a in f.elements() {
        by_x.entry(f.add(f.pow(a, qq), a)).or_default().push(a);
        by_y.entry(f.sub(f.pow(a, qq * qq), a)).or_default().push(a);
    }
    let mut points = Vec::new();
    let mut z_zero = 0;
    for z in f.elements() {
        let Some(ys) = by_y.get(&f.pow(z, s as u64)) else { continue };
        for &y in ys {
            let Some(xs) = by_x.get(&f.pow(y, qq + 1)) else { continue };
            if z.is_zero() {
                z_zero += xs.len();
            } else {
                points.extend(xs.iter().map(|&x| vec![x, y, z]));
            }
        }
    }
    points.sort();
    let counts = GkCounts {
        evaluation: points.len(),
        z_zero_affine: z_zero,
        infinite: 1,
        formula_total: gk_formula_total(qq, n),
    };
    Ok(GkCurve { q, n_param: n, s, field, points, counts })
}

impl GkCurve {
    pub fn contains(&self, p: &[Elem]) -> bool {
        let f = &self.field;
        let q = self.q as u64;
        let (x, y, z) = (p[0], p[1], p[2]);
        f.add(f.pow(x, q), x) == f.pow(y, q + 1) && f.sub(f.pow(y, q * q), y) == f.pow(z, self.s as u64)
    }

    /// Largest admissible l (exclusive): q^(N+2) + q^(N+1) - q - 1.
    pub fn l_cap(&self) -> u64 {
        let q = self.q as u64;
        q.pow(self.n_param + 2) + q.pow(self.n_param + 1) - q - 1
    }

    /// Checks that the points over each y form a full grid of q x-values by
    /// s z-values; returns the number of distinct y.
    pub fn grid_structure(&self) -> Result<usize> {
        let mut by_y: BTreeMap<Elem, Vec<&Point>> = BTreeMap::new();
        for p in &self.points {
            by_y.entry(p[1]).or_default().push(p);
        }
        for (y, pts) in &by_y {
            let xs: BTreeSet<Elem> = pts.iter().map(|p| p[0]).collect();
            let zs: BTreeSet<Elem> = pts.iter().map(|p| p[2]).collect();
            if xs.len() != self.q as usize || zs.len() != self.s as usize || pts.len() != xs.len() * zs.len() {
                return Err(Error::invalid(format!("points over y = {y} are not a {} x {} grid", self.q, self.s)));
            }
        }
        Ok(by_y.len())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GkRank {
    /// Eliminate for l <= 2, structural above.
    #[default]
    Auto,
    Eliminate,
    Structural,
}

#[derive(Clone, Debug)]
pub struct GkCode {
    pub curve: GkCurve,
    pub l: u32,
    pub code: EvaluationCode,
    pub recovery: RecoveryStructure,
    /// (x, y) classes, s points each.
    pub z_fibers: Vec<Vec<usize>>,
    /// (y, z) classes, q points each.
    pub x_fibers: Vec<Vec<usize>>,
}

impl GkCode {
    /// Expected dimension (q-1)(s-1)(l+1).
    pub fn formula_dimension(&self) -> usize {
        (self.curve.q as usize - 1) * (self.curve.s as usize - 1) * (self.l as usize + 1)
    }
}

fn classes(points: &[Point], key: impl Fn(&Point) -> (Elem, Elem)) -> Vec<Vec<usize>> {
    let mut map: BTreeMap<(Elem, Elem), Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        map.entry(key(p)).or_default().push(i);
    }
    map.into_values().collect()
}

pub fn build_gk_lrc(q: u32, n: u32, l: u32) -> Result<GkCode> {
    build_gk_lrc_with(gk_points(q, n)?, l, GkRank::Auto)
}

/// Code spanned by x^i z^j y^k with i <= q-2, j <= s-2, k <= l.
///
/// Structural rank: over each y the points form a q x s grid, on which the
/// x^i z^j are independent (tensor of Vandermonde systems). A relation
/// sum P_ij(y) x^i z^j = 0 then forces every P_ij to vanish on all distinct
/// y-values, so rows with y-degree below that count are a basis.
pub fn build_gk_lrc_with(curve: GkCurve, l: u32, rank: GkRank) -> Result<GkCode> {
    if l as u64 >= curve.l_cap() {
        return Err(Error::invalid(format!("l = {l} must be below {}", curve.l_cap())));
    }
    let (q, s) = (curve.q, curve.s);
    let mut basis = Vec::new();
    let mut kappa = Vec::new();
    for k in 0..=l {
        for j in 0..=s - 2 {
            for i in 0..=q - 2 {
                basis.push(BasisFn::monomial(vec![i, k, j]));
                kappa.push(k);
            }
        }
    }
    let field = curve.field.clone();
    let points = curve.points.clone();
    let z_fibers = classes(&points, |p| (p[0], p[1]));
    let x_fibers = classes(&points, |p| (p[1], p[2]));
    if z_fibers.iter().any(|c| c.len() != s as usize) || x_fibers.iter().any(|c| c.len() != q as usize) {
        return Err(Error::invalid("fiber sizes do not match q and s"));
    }
    let mut groups = fiber_groups(&field, &points, &z_fibers, 2)?;
    for (g, extra) in groups.iter_mut().zip(fiber_groups(&field, &points, &x_fibers, 0)?) {
        g.extend(extra);
    }
    let recovery = RecoveryStructure::new(points.len(), groups)?;
    if !recovery.groups_pairwise_disjoint() {
        return Err(Error::invalid("recovery sets overlap"));
    }

    let eliminate = match rank {
        GkRank::Auto => l <= 2,
        GkRank::Eliminate => true,
        GkRank::Structural => false,
    };
    let code = if eliminate {
        EvaluationCode::build(&field, points, basis)?
    } else {
        let distinct_y = curve.grid_structure()?;
        let info: Vec<usize> = (0..basis.len()).filter(|&r| (kappa[r] as usize) < distinct_y).collect();
        let argument = format!(
            "points over each of the {distinct_y} y-values form a {q} x {s} grid; x^i z^j independent on grids, \
             polynomials in y of degree < {distinct_y} independent on the y-values"
        );
        EvaluationCode::build_structural(&field, points, basis, info, argument)?
    };
    Ok(GkCode { curve, l, code, recovery, z_fibers, x_fibers })
}
