//! Hermitian curve points and cover-based LRCs: a symbol is recovered from
//! the other points in its fiber under a projection of the curve.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalcode::{BasisFn, DesignDistance, EvaluationCode, Point, Provenance};
use crate::gf::{prime_power, Elem, Field};
use crate::recovery::{fiber_groups, RecoveryStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HermitianForm {
    /// x^q + x = y^(q+1)
    X,
    /// y^q + y = x^(q+1)
    Y,
}

#[derive(Clone, Debug)]
pub struct HermitianCurve {
    pub q: u32,
    pub field: Field,
    pub form: HermitianForm,
    /// Affine points `[x, y]`, sorted.
    pub points: Vec<Point>,
}

impl HermitianCurve {
    pub fn contains(&self, x: Elem, y: Elem) -> bool {
        let f = &self.field;
        let q = self.q as u64;
        let (u, v) = match self.form {
            HermitianForm::X => (x, y),
            HermitianForm::Y => (y, x),
        };
        f.add(f.pow(u, q), u) == f.pow(v, q + 1)
    }
}

fn subfield_order(q: u32) -> Result<(u64, u32)> {
    prime_power(q as u64).ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))
}

/// Field GF(q^2) for a prime power q.
pub fn hermitian_field(q: u32) -> Result<Field> {
    let (p, e) = subfield_order(q)?;
    Ok(Field::new(p, 2 * e)?)
}

/// All q^3 affine points of the Hermitian curve over GF(q^2).
pub fn hermitian_points(q: u32, form: HermitianForm) -> Result<HermitianCurve> {
    let field = hermitian_field(q)?;
    let f = &field;
    let qq = q as u64;
    // u^q + u = v^(q+1): bucket u by its trace value
    let mut by_trace: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for u in f.elements() {
        by_trace.entry(f.add(f.pow(u, qq), u)).or_default().push(u);
    }
    let mut points = Vec::new();
    for v in f.elements() {
        if let Some(us) = by_trace.get(&f.pow(v, qq + 1)) {
            for &u in us {
                points.push(match form {
                    HermitianForm::X => vec![u, v],
                    HermitianForm::Y => vec![v, u],
                });
            }
        }
    }
    points.sort();
    Ok(HermitianCurve { q, field, form, points })
}

/// Fibers of a projection on the evaluation set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    /// Common fiber size.
    pub d_phi: usize,
    /// Coordinate indices per fiber.
    pub fibers: Vec<Vec<usize>>,
}

impl CoverSpec {
    fn from_labels<K: Ord>(n: usize, label: impl Fn(usize) -> K) -> Result<CoverSpec> {
        let mut map: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            map.entry(label(i)).or_default().push(i);
        }
        let fibers: Vec<Vec<usize>> = map.into_values().collect();
        let d_phi = fibers.first().map_or(0, Vec::len);
        if let Some(bad) = fibers.iter().find(|f| f.len() != d_phi) {
            return Err(Error::invalid(format!("fiber of size {} where {d_phi} was expected", bad.len())));
        }
        Ok(CoverSpec { d_phi, fibers })
    }
}

/// Parameters published for a code family, echoed in reports only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedTarget {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

#[derive(Clone, Debug)]
pub struct CoverCode {
    pub code: EvaluationCode,
    pub recovery: RecoveryStructure,
    pub cover: CoverSpec,
    pub target: Option<PublishedTarget>,
}

impl CoverCode {
    pub fn locality(&self) -> usize {
        self.cover.d_phi - 1
    }
}

/// Code on all affine points of x^q + x = y^(q+1) spanned by x^i y^j with
/// i <= q-2 and j <= l. Points sharing y form a fiber of size q, and the
/// restriction to a fiber is a polynomial of degree <= q-2 in x.
pub fn build_hermitian_lrc(q: u32, l: u32) -> Result<CoverCode> {
    let curve = hermitian_points(q, HermitianForm::X)?;
    let f = curve.field.clone();
    let basis: Vec<BasisFn> = (0..=l)
        .flat_map(|j| (0..=q.saturating_sub(2)).map(move |i| BasisFn::monomial(vec![i, j])))
        .collect();
    let points = curve.points;
    let cover = CoverSpec::from_labels(points.len(), |i| points[i][1])?;
    let groups = fiber_groups(&f, &points, &cover.fibers, 0)?;
    let recovery = RecoveryStructure::new(points.len(), groups)?;
    let code = EvaluationCode::build(&f, points, basis)?;
    Ok(CoverCode { code, recovery, cover, target: None })
}

fn power_cover_exponents(q: u32, s: u32) -> Vec<u32> {
    (0..=q).filter(|a| a % s <= s - 2).collect()
}

fn published_power_cover(q: u32, s: u32) -> Option<PublishedTarget> {
    let d = match (q, s) {
        (11, 4) => 382,
        (11, 3) => 277,
        (11, 12) => 502,
        _ => return None,
    };
    Some(PublishedTarget { n: 1320, k: 660, d })
}

fn check_power_cover(q: u32, s: u32) -> Result<()> {
    if s < 2 || (q + 1) % s != 0 {
        return Err(Error::invalid(format!("s = {s} must divide q+1 = {} and be at least 2", q + 1)));
    }
    Ok(())
}

/// Code on the points of y^q + y = x^(q+1) with x != 0, spanned by x^a y^b
/// with a <= q, a mod s <= s-2 and b <= y_cap. Fibers of (x, y) -> (x^s, y)
/// have s points and recovery interpolates in x.
pub fn build_power_cover_lrc(q: u32, s: u32, y_cap: u32) -> Result<CoverCode> {
    check_power_cover(q, s)?;
    let curve = hermitian_points(q, HermitianForm::Y)?;
    let f = curve.field.clone();
    let points: Vec<Point> = curve.points.into_iter().filter(|p| !p[0].is_zero()).collect();
    let exps = power_cover_exponents(q, s);
    let basis: Vec<BasisFn> = (0..=y_cap)
        .flat_map(|b| exps.iter().map(move |&a| BasisFn::monomial(vec![a, b])))
        .collect();
    let cover = CoverSpec::from_labels(points.len(), |i| (f.pow(points[i][0], s as u64), points[i][1]))?;
    let groups = fiber_groups(&f, &points, &cover.fibers, 0)?;
    let recovery = RecoveryStructure::new(points.len(), groups)?;
    let mut code = EvaluationCode::build(&f, points, basis)?;
    let target = published_power_cover(q, s);
    if let Some(t) = target {
        if t.n == code.len() && t.k == code.dimension() {
            code = code.with_design_distance(DesignDistance { value: t.d, provenance: Provenance::PublishedTargetUnverified });
        }
    }
    Ok(CoverCode { code, recovery, cover, target })
}

/// Outcome of searching the y-degree cap for a target dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YCapSearch {
    pub target_k: usize,
    /// Cap reaching the target exactly, if any.
    pub exact: Option<u32>,
    /// Largest cap with dimension below the target, with its dimension.
    pub below: Option<(u32, usize)>,
    /// Smallest cap with dimension above the target, with its dimension.
    pub above: Option<(u32, usize)>,
}

/// Dimension of the power cover code as a function of the cap, without
/// elimination. On each y-fiber of the curve the x-values are the (q+1)-th
/// roots of a fixed nonzero constant, so x^a y^b splits into independent
/// x-parts (a <= q on q+1 points) times polynomials in y on the distinct
/// y-values.
pub fn power_cover_dimension(q: u32, s: u32, y_cap: u32) -> Result<usize> {
    check_power_cover(q, s)?;
    let distinct_y = (q as usize) * (q as usize) - q as usize;
    let a_count = power_cover_exponents(q, s).len();
    Ok(a_count * distinct_y.min(y_cap as usize + 1))
}

/// Finds caps around `target_k` using [`power_cover_dimension`].
pub fn search_y_cap(q: u32, s: u32, target_k: usize) -> Result<YCapSearch> {
    let max_cap = q * q - q;
    let mut out = YCapSearch { target_k, exact: None, below: None, above: None };
    for cap in 0..=max_cap {
        let k = power_cover_dimension(q, s, cap)?;
        match k.cmp(&target_k) {
            std::cmp::Ordering::Less => out.below = Some((cap, k)),
            std::cmp::Ordering::Equal => {
                out.exact = Some(cap);
                break;
            }
            std::cmp::Ordering::Greater => {
                out.above = Some((cap, k));
                break;
            }
        }
    }
    Ok(out)
}
