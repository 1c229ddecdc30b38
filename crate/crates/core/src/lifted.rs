//! Lifted codes on norm-trace curves
//!
//!   T(y) = y + y^q + ... + y^(q^(r-1)) = x^((q^r - 1)/(q - 1)) = N(x)
//!
//! over GF(q^r). r = 2 is the Hermitian curve y^q + y = x^(q+1); q = 2 gives
//! the binary norm-trace curves. A monomial x^a y^b is good when its
//! restriction to every non-horizontal line x = t, y = at + b reduces to a
//! polynomial of degree at most delta in t. The code spanned by good
//! monomials has one repair group per line through each point.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalcode::{BasisFn, EvaluationCode, Point};
use crate::gf::{prime_power, Elem, Field};
use crate::linalg::EchelonBasis;
use crate::poly::{lagrange_weights, UniPoly};
use crate::recovery::{group_holds, RecoveryStructure, RepairGroup};

#[derive(Clone, Debug)]
pub struct NormTraceCurve {
    q: u32,
    r: u32,
    /// q = p^e
    e: u32,
    field: Field,
    points: Vec<Point>,
    index: HashMap<(Elem, Elem), usize>,
}

/// A line y = alpha x + beta, parameterized by t = x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub alpha: Elem,
    pub beta: Elem,
    /// Indices of the curve points on the line, by increasing x.
    pub members: Vec<usize>,
}

/// Which polynomial a line restriction is reduced by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// T(alpha t + beta) - N(t), the curve equation on the line.
    #[default]
    CurveEquation,
    /// prod (t - t_i) over the rational intersection points. Equivalent to
    /// interpolating the values on the line.
    Intersection,
}

impl NormTraceCurve {
    pub fn new(q: u32, r: u32) -> Result<NormTraceCurve> {
        let (p, e) = prime_power(q as u64).ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
        if r < 2 {
            return Err(Error::invalid(format!("r = {r} must be at least 2")));
        }
        let field = Field::new(p, e * r)?;
        let mut by_trace: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
        for y in field.elements() {
            by_trace.entry(field.trace(y, e)?).or_default().push(y);
        }
        let mut points = Vec::new();
        for x in field.elements() {
            if let Some(ys) = by_trace.get(&field.norm(x, e)?) {
                points.extend(ys.iter().map(|&y| vec![x, y]));
            }
        }
        points.sort();
        let index = points.iter().enumerate().map(|(i, p)| ((p[0], p[1]), i)).collect();
        Ok(NormTraceCurve { q, r, e, field, points, index })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Affine points `[x, y]`, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn index_of(&self, x: Elem, y: Elem) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    /// (q^r - 1)/(q - 1)
    pub fn norm_exponent(&self) -> u64 {
        let q = self.q as u64;
        (q.pow(self.r) - 1) / (q - 1)
    }

    pub fn contains(&self, x: Elem, y: Elem) -> bool {
        self.field.trace(y, self.e).ok() == self.field.norm(x, self.e).ok()
    }

    /// Exponent caps (a, b): a below the norm exponent, b below q^r.
    pub fn exponent_caps(&self) -> (u32, u32) {
        (self.norm_exponent() as u32 - 1, self.field.order() - 1)
    }

    /// All lines with alpha != 0, alpha outer and beta inner by value.
    pub fn lines(&self) -> Vec<Line> {
        let f = &self.field;
        let order = f.order() as usize;
        let mut lines: Vec<Line> = f
            .nonzero_elements()
            .flat_map(|alpha| f.elements().map(move |beta| Line { alpha, beta, members: Vec::new() }))
            .collect();
        for (i, p) in self.points.iter().enumerate() {
            for alpha in f.nonzero_elements() {
                let beta = f.sub(p[1], f.mul(alpha, p[0]));
                lines[(alpha.value() as usize - 1) * order + beta.value() as usize].members.push(i);
            }
        }
        // points are sorted by x, so members already are
        lines
    }

    /// Horizontal lines y = beta, beta by value.
    pub fn horizontal_lines(&self) -> Vec<Line> {
        let f = &self.field;
        let mut lines: Vec<Line> =
            f.elements().map(|beta| Line { alpha: Elem::ZERO, beta, members: Vec::new() }).collect();
        for (i, p) in self.points.iter().enumerate() {
            lines[p[1].value() as usize].members.push(i);
        }
        lines
    }

    /// The curve equation restricted to a line, made monic:
    /// t^N - sum alpha^(q^i) t^(q^i) - T(beta).
    pub fn line_modulus(&self, alpha: Elem, beta: Elem) -> UniPoly {
        let f = &self.field;
        let mut c = vec![Elem::ZERO; self.norm_exponent() as usize + 1];
        c[self.norm_exponent() as usize] = Elem::ONE;
        let mut qi = 1u64;
        for _ in 0..self.r {
            let k = qi as usize;
            c[k] = f.sub(c[k], f.pow(alpha, qi));
            qi *= self.q as u64;
        }
        c[0] = f.sub(c[0], f.trace(beta, self.e).expect("subfield divides"));
        UniPoly::new(f, c)
    }

    pub fn reduction_modulus(&self, line: &Line, reduction: Reduction) -> UniPoly {
        match reduction {
            Reduction::CurveEquation => self.line_modulus(line.alpha, line.beta),
            Reduction::Intersection => {
                let f = &self.field;
                line.members.iter().fold(UniPoly::constant(f, Elem::ONE), |acc, &i| {
                    acc.mul(&UniPoly::linear(f, Elem::ONE, f.neg(self.points[i][0])))
                })
            }
        }
    }
}

/// Hermitian curve y^q + y = x^(q+1) over GF(q^2).
pub fn hermitian_curve(q: u32) -> Result<NormTraceCurve> {
    NormTraceCurve::new(q, 2)
}

/// Binary norm-trace curve over GF(2^r).
pub fn norm_trace_curve(r: u32) -> Result<NormTraceCurve> {
    if r > 16 {
        return Err(Error::invalid(format!("r = {r} exceeds 16")));
    }
    NormTraceCurve::new(2, r)
}

/// Sizes of line intersections and how many lines have each.
pub fn intersection_histogram(lines: &[Line]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for l in lines {
        *h.entry(l.members.len()).or_insert(0) += 1;
    }
    h
}

fn check_caps(curve: &NormTraceCurve, a: u32, b: u32) -> Result<()> {
    let (ca, cb) = curve.exponent_caps();
    if a > ca || b > cb {
        return Err(Error::invalid(format!("exponents ({a}, {b}) exceed caps ({ca}, {cb})")));
    }
    Ok(())
}

/// Degree of t^a (alpha t + beta)^b reduced on one line; `None` for the zero
/// polynomial. No exponent caps apply.
pub fn line_degree(curve: &NormTraceCurve, line: &Line, a: u64, b: u64, reduction: Reduction) -> Result<Option<usize>> {
    let f = curve.field();
    let m = curve.reduction_modulus(line, reduction);
    let base = UniPoly::x(f).pow_mod(a, &m)?;
    let lin = UniPoly::linear(f, line.alpha, line.beta).pow_mod(b, &m)?;
    Ok(base.mul(&lin).rem(&m)?.degree())
}

/// Reference test: reduces t^a (alpha t + beta)^b on every line with plain
/// polynomial arithmetic and compares the degree with `delta`.
pub fn monomial_is_good(curve: &NormTraceCurve, a: u32, b: u32, delta: usize, reduction: Reduction) -> Result<bool> {
    check_caps(curve, a, b)?;
    for line in curve.lines() {
        if line_degree(curve, &line, a as u64, b as u64, reduction)?.is_some_and(|d| d > delta) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (j, C(b, j) mod p) for every j with nonzero binomial, by Lucas.
fn lucas_terms(b: u32, p: u32) -> Vec<(u32, u32)> {
    let mut digits = Vec::new();
    let mut v = b;
    while v > 0 {
        digits.push(v % p);
        v /= p;
    }
    let mut out = vec![(0u32, 1u32)];
    let mut place = 1u32;
    for &d in &digits {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        let mut binom = 1u32;
        for k in 0..=d {
            if k > 0 {
                // C(d, k) mod p stays nonzero since d < p
                binom = binom * (d - k + 1) / k;
            }
            for &(j, c) in &out {
                next.push((j + k * place, (c * (binom % p)) % p));
            }
        }
        out = next;
        place *= p;
    }
    out
}

/// Per-line table of the coefficients above `delta` of t^e mod the line's
/// modulus, for e up to `e_max`. Empty rows when the modulus has degree at
/// most delta + 1, since every remainder then passes.
struct LineTable {
    alpha_pow: Vec<Elem>,
    beta_pow: Vec<Elem>,
    high: Vec<Vec<Elem>>,
    width: usize,
}

impl LineTable {
    fn new(f: &Field, modulus: &UniPoly, alpha: Elem, beta: Elem, delta: usize, e_max: usize, b_max: usize) -> LineTable {
        let d = modulus.degree().expect("nonzero modulus");
        let width = d.saturating_sub(delta + 1);
        let alpha_pow = (0..=b_max as u64).map(|k| f.pow(alpha, k)).collect();
        let beta_pow = (0..=b_max as u64).map(|k| f.pow(beta, k)).collect();
        let mut high = Vec::with_capacity(e_max + 1);
        if width > 0 {
            let m = modulus.coeffs();
            let mut cur = vec![Elem::ZERO; d];
            cur[0] = Elem::ONE;
            for _ in 0..=e_max {
                high.push(cur[delta + 1..].to_vec());
                // multiply by t, reduce t^d = -(m_0 + ... + m_{d-1} t^{d-1})
                let top = cur[d - 1];
                for i in (1..d).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = Elem::ZERO;
                if !top.is_zero() {
                    for i in 0..d {
                        cur[i] = f.sub(cur[i], f.mul(top, m[i]));
                    }
                }
            }
        }
        LineTable { alpha_pow, beta_pow, high, width }
    }

    fn passes(&self, f: &Field, a: u32, terms: &[(u32, u32)], b: u32) -> bool {
        if self.width == 0 {
            return true;
        }
        let mut acc = vec![Elem::ZERO; self.width];
        for &(j, c) in terms {
            let mut coef = f.mul(self.alpha_pow[j as usize], self.beta_pow[(b - j) as usize]);
            if c != 1 {
                coef = f.mul(coef, f.from_int(c as i64));
            }
            if coef.is_zero() {
                continue;
            }
            for (s, &h) in acc.iter_mut().zip(&self.high[(a + j) as usize]) {
                *s = f.add(*s, f.mul(coef, h));
            }
        }
        acc.iter().all(|x| x.is_zero())
    }
}

/// Fast goodness scan over the given candidates; returns a flag per
/// candidate. Lines are processed in chunks so failing candidates drop out
/// early.
pub fn scan_good(curve: &NormTraceCurve, candidates: &[(u32, u32)], delta: usize, reduction: Reduction) -> Result<Vec<bool>> {
    for &(a, b) in candidates {
        check_caps(curve, a, b)?;
    }
    let f = curve.field();
    let p = f.p();
    let terms: Vec<Vec<(u32, u32)>> = candidates.iter().map(|&(_, b)| lucas_terms(b, p)).collect();
    let e_max = candidates.iter().map(|&(a, b)| (a + b) as usize).max().unwrap_or(0);
    let b_max = candidates.iter().map(|&(_, b)| b as usize).max().unwrap_or(0);
    let lines = curve.lines();
    let mut alive: Vec<usize> = (0..candidates.len()).collect();
    for chunk in lines.chunks(64) {
        if alive.is_empty() {
            break;
        }
        let failed: Vec<Vec<usize>> = chunk
            .par_iter()
            .map(|line| {
                let m = curve.reduction_modulus(line, reduction);
                let table = LineTable::new(f, &m, line.alpha, line.beta, delta, e_max, b_max);
                alive
                    .iter()
                    .copied()
                    .filter(|&c| !table.passes(f, candidates[c].0, &terms[c], candidates[c].1))
                    .collect()
            })
            .collect();
        let mut dead = vec![false; candidates.len()];
        for c in failed.into_iter().flatten() {
            dead[c] = true;
        }
        alive.retain(|&c| !dead[c]);
    }
    let mut out = vec![false; candidates.len()];
    for c in alive {
        out[c] = true;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialClass {
    /// a + b <= delta
    Baseline,
    Sporadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodMonomial {
    pub a: u32,
    pub b: u32,
    pub class: MonomialClass,
    /// Whether its evaluation vector is independent of the earlier ones.
    pub independent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodMonomialSet {
    pub q: u32,
    pub r: u32,
    pub delta: usize,
    pub reduction: Reduction,
    pub monomials: Vec<GoodMonomial>,
    pub rank: usize,
}

impl GoodMonomialSet {
    pub fn count(&self) -> usize {
        self.monomials.len()
    }

    pub fn baseline_count(&self) -> usize {
        self.monomials.iter().filter(|m| m.class == MonomialClass::Baseline).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,class\n");
        for m in &self.monomials {
            let class = match m.class {
                MonomialClass::Baseline => "baseline",
                MonomialClass::Sporadic => "sporadic",
            };
            let _ = writeln!(s, "{},{},{class}", m.a, m.b);
        }
        s
    }
}

/// Candidate exponents in scan order: by a + b, then a.
pub fn candidates(curve: &NormTraceCurve) -> Vec<(u32, u32)> {
    let (ca, cb) = curve.exponent_caps();
    let mut c: Vec<(u32, u32)> = (0..=ca).flat_map(|a| (0..=cb).map(move |b| (a, b))).collect();
    c.sort_by_key(|&(a, b)| (a + b, a));
    c
}

/// Scans all candidates and records which good monomials give new
/// evaluation vectors on the curve points.
pub fn good_monomials(curve: &NormTraceCurve, delta: usize, reduction: Reduction) -> Result<GoodMonomialSet> {
    let cand = candidates(curve);
    let flags = scan_good(curve, &cand, delta, reduction)?;
    let f = curve.field();
    let mut basis = EchelonBasis::new(f, curve.points().len());
    let mut monomials = Vec::new();
    for (&(a, b), ok) in cand.iter().zip(flags) {
        if !ok {
            continue;
        }
        let row: Vec<Elem> = curve
            .points()
            .iter()
            .map(|p| f.mul(f.pow(p[0], a as u64), f.pow(p[1], b as u64)))
            .collect();
        let independent = basis.insert(&row);
        let class = if (a + b) as usize <= delta { MonomialClass::Baseline } else { MonomialClass::Sporadic };
        monomials.push(GoodMonomial { a, b, class, independent });
    }
    Ok(GoodMonomialSet { q: curve.q(), r: curve.r(), delta, reduction, monomials, rank: basis.rank() })
}

/// Exact goodness test for Hermitian curves in characteristic 2, done
/// symbolically in the line parameters.
///
/// (alpha t + beta)^b is expanded over the submasks of b (Lucas), and t^e is
/// reduced by t^(q+1) = alpha^q t^q + alpha t + beta^q + beta. Coefficients
/// are then polynomials over GF(2) in alpha and beta, kept reduced as
/// functions on alpha != 0 (exponents mod q^2 - 1) and beta (exponents
/// 1..q^2-1 wrap). A monomial is good iff every coefficient above delta is
/// the zero function.
#[derive(Clone, Debug)]
pub struct SymbolicFilter {
    q: u32,
    big_q: usize,
    delta: usize,
    /// t^e mod the line polynomial, for e up to q + q^2 - 1; each entry is
    /// the coefficient of t^i as a bitset over (alpha exp, beta exp).
    powers: Vec<Vec<Vec<u64>>>,
    words: usize,
}

impl SymbolicFilter {
    pub fn new(q: u32, delta: usize) -> Result<SymbolicFilter> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::invalid(format!("symbolic filter needs q a power of 2, got {q}")));
        }
        let big_q = (q * q) as usize;
        let bits = (big_q - 1) * big_q;
        let words = bits.div_ceil(64);
        let mut s = SymbolicFilter { q, big_q, delta, powers: Vec::new(), words };
        let deg = q as usize + 1;
        let mut cur = vec![vec![0u64; words]; deg];
        s.set(&mut cur[0], 0, 0);
        let e_max = q as usize + big_q - 1;
        for _ in 0..=e_max {
            s.powers.push(cur.clone());
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = vec![0u64; words];
            if top.iter().any(|&w| w != 0) {
                let qq = q as usize;
                s.add_shifted(&mut cur[qq], &top, qq, 0);
                s.add_shifted(&mut cur[1], &top, 1, 0);
                s.add_shifted(&mut cur[0], &top, 0, qq);
                s.add_shifted(&mut cur[0], &top, 0, 1);
            }
        }
        Ok(s)
    }

    fn beta_norm(&self, e: usize) -> usize {
        if e == 0 {
            0
        } else {
            (e - 1) % (self.big_q - 1) + 1
        }
    }

    fn set(&self, v: &mut [u64], i: usize, j: usize) {
        let bit = i * self.big_q + j;
        v[bit / 64] ^= 1 << (bit % 64);
    }

    /// dst += src * alpha^u beta^v
    fn add_shifted(&self, dst: &mut [u64], src: &[u64], u: usize, v: usize) {
        for (w, &word) in src.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let bit = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let (i, j) = (bit / self.big_q, bit % self.big_q);
                self.set(dst, (i + u) % (self.big_q - 1), self.beta_norm(j + v));
            }
        }
    }

    pub fn is_good(&self, a: u32, b: u32) -> bool {
        let deg = self.q as usize + 1;
        for e in self.delta + 1..deg {
            let mut acc = vec![0u64; self.words];
            let mut j = b;
            loop {
                // j runs over submasks of b
                let t = (a + j) as usize;
                self.add_shifted(&mut acc, &self.powers[t][e], j as usize, (b - j) as usize);
                if j == 0 {
                    break;
                }
                j = (j - 1) & b;
            }
            if acc.iter().any(|&w| w != 0) {
                return false;
            }
        }
        true
    }
}

/// Degree bound for binary norm-trace lifted codes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaConvention {
    /// delta = 2^(r-1) - 2
    Literal,
    /// delta = 2^(r-1) - 3: the smallest punctured line still interpolates.
    #[default]
    Interpolation,
}

impl DeltaConvention {
    pub fn delta(self, r: u32) -> usize {
        let half = 1usize << (r - 1);
        match self {
            DeltaConvention::Literal => half - 2,
            DeltaConvention::Interpolation => half - 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftedCode {
    pub curve: NormTraceCurve,
    pub monomials: GoodMonomialSet,
    pub code: EvaluationCode,
    pub recovery: RecoveryStructure,
    pub intersections: BTreeMap<usize, usize>,
}

impl LiftedCode {
    pub fn locality(&self) -> usize {
        self.recovery.locality()
    }

    /// Minimum number of line groups over coordinates.
    pub fn availability(&self) -> usize {
        (0..self.code.len()).map(|i| self.recovery.groups(i).len()).min().unwrap_or(0)
    }
}

/// For each point and each line through it with at least delta + 1 other
/// points: the first delta + 1 others, Lagrange in t.
fn line_groups(curve: &NormTraceCurve, lines: &[Line], delta: usize) -> Result<Vec<Vec<RepairGroup>>> {
    let f = curve.field();
    let pts = curve.points();
    let per_line: Vec<Vec<RepairGroup>> = lines
        .par_iter()
        .map(|line| {
            let mut out = Vec::new();
            if line.members.len() < delta + 2 {
                return Ok(out);
            }
            for &t in &line.members {
                let support: Vec<usize> = line.members.iter().copied().filter(|&j| j != t).take(delta + 1).collect();
                let nodes: Vec<Elem> = support.iter().map(|&j| pts[j][0]).collect();
                let lambda = lagrange_weights(f, &nodes, pts[t][0])?;
                out.push(RepairGroup::new(t, support, lambda));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut groups = vec![Vec::new(); pts.len()];
    for g in per_line.into_iter().flatten() {
        groups[g.target].push(g);
    }
    Ok(groups)
}

fn build_lifted(curve: NormTraceCurve, delta: usize, reduction: Reduction) -> Result<LiftedCode> {
    let monomials = good_monomials(&curve, delta, reduction)?;
    let lines = curve.lines();
    let intersections = intersection_histogram(&lines);
    let basis = monomials.monomials.iter().map(|m| BasisFn::monomial(vec![m.a, m.b])).collect();
    let code = EvaluationCode::build(curve.field(), curve.points().to_vec(), basis)?;
    let mut groups = line_groups(&curve, &lines, delta)?;
    // Horizontal lines play no part in goodness, so their groups are kept
    // only where they hold on the code. On the Hermitian curve they always
    // do and replace the tangent line lost at points with x != 0.
    let horizontal = line_groups(&curve, &curve.horizontal_lines(), delta)?;
    for (i, hs) in horizontal.into_iter().enumerate() {
        groups[i].extend(hs.into_iter().filter(|g| group_holds(&code, g)));
    }
    let recovery = RecoveryStructure::new(curve.points().len(), groups)?;
    Ok(LiftedCode { curve, monomials, code, recovery, intersections })
}

/// Hermitian-lifted code: length q^3, degree bound q - 1, one repair group
/// of q points per secant line with nonzero slope, plus the horizontal line
/// where it is a secant.
pub fn build_hermitian_lifted(q: u32) -> Result<LiftedCode> {
    if q < 2 {
        return Err(Error::invalid("q must be at least 2"));
    }
    build_lifted(hermitian_curve(q)?, q as usize - 1, Reduction::CurveEquation)
}

/// Binary norm-trace lifted code over GF(2^r).
pub fn build_nt_lifted(r: u32, convention: DeltaConvention, reduction: Reduction) -> Result<LiftedCode> {
    if !(3..=8).contains(&r) {
        return Err(Error::invalid(format!("r = {r} is outside the supported range 3..=8")));
    }
    build_lifted(norm_trace_curve(r)?, convention.delta(r), reduction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_point_counts() {
        assert_eq!(norm_trace_curve(2).unwrap().points().len(), 8);
        assert_eq!(norm_trace_curve(3).unwrap().points().len(), 32);
        assert_eq!(norm_trace_curve(4).unwrap().points().len(), 128);
        assert_eq!(hermitian_curve(4).unwrap().points().len(), 64);
    }

    #[test]
    fn r2_is_hermitian_h2() {
        let nt = norm_trace_curve(2).unwrap();
        let f = nt.field();
        for p in nt.points() {
            assert_eq!(f.add(f.pow(p[1], 2), p[1]), f.pow(p[0], 3));
        }
    }

    #[test]
    fn line_modulus_roots_are_intersections() {
        let c = hermitian_curve(4).unwrap();
        for line in c.lines().iter().step_by(7) {
            let m = c.line_modulus(line.alpha, line.beta);
            assert_eq!(m.degree(), Some(5));
            let roots = m.roots().unwrap();
            let xs: Vec<Elem> = line.members.iter().map(|&i| c.points()[i][0]).collect();
            assert_eq!(roots, xs);
        }
    }

    #[test]
    fn lucas_terms_match_binomials() {
        for p in [2u32, 3, 5] {
            for b in 0..40u32 {
                let mut want = Vec::new();
                let mut row = vec![1u64];
                for _ in 0..b {
                    let mut next = vec![1u64; row.len() + 1];
                    for i in 1..row.len() {
                        next[i] = (row[i - 1] + row[i]) % p as u64;
                    }
                    row = next;
                }
                for (j, &c) in row.iter().enumerate() {
                    if c % p as u64 != 0 {
                        want.push((j as u32, (c % p as u64) as u32));
                    }
                }
                let mut got = lucas_terms(b, p);
                got.sort();
                assert_eq!(got, want, "p={p} b={b}");
            }
        }
    }

    #[test]
    fn fast_scan_matches_reference_q4() {
        let c = hermitian_curve(4).unwrap();
        let cand = candidates(&c);
        let fast = scan_good(&c, &cand, 3, Reduction::CurveEquation).unwrap();
        for (&(a, b), &ok) in cand.iter().zip(&fast) {
            assert_eq!(ok, monomial_is_good(&c, a, b, 3, Reduction::CurveEquation).unwrap(), "({a},{b})");
        }
    }

    #[test]
    fn known_monomials_q4() {
        let c = hermitian_curve(4).unwrap();
        let lines = c.lines();
        let worst = lines
            .iter()
            .filter(|l| !l.beta.is_zero())
            .map(|l| line_degree(&c, l, 8, 2, Reduction::CurveEquation).unwrap().unwrap_or(0))
            .max()
            .unwrap();
        let all = lines.iter().map(|l| line_degree(&c, l, 8, 2, Reduction::CurveEquation).unwrap().unwrap_or(0)).max().unwrap();
        assert_eq!((worst, all), (3, 3));
        // regression fixture from the reference reduction
        assert!(!monomial_is_good(&c, 4, 3, 3, Reduction::CurveEquation).unwrap());
        for a in 0..4 {
            for b in 0..4 - a {
                assert!(monomial_is_good(&c, a, b, 3, Reduction::CurveEquation).unwrap());
            }
        }
        assert!(monomial_is_good(&c, 5, 0, 3, Reduction::CurveEquation).is_err());
    }

    #[test]
    fn symbolic_filter_matches_reference_q4() {
        let c = hermitian_curve(4).unwrap();
        let s = SymbolicFilter::new(4, 3).unwrap();
        for (a, b) in candidates(&c) {
            assert_eq!(s.is_good(a, b), monomial_is_good(&c, a, b, 3, Reduction::CurveEquation).unwrap(), "({a},{b})");
        }
    }

    #[test]
    fn tangent_lines_meet_once() {
        // at (a, b) with a != 0 the tangent y = a^q x + (b - a^(q+1)) has slope a^q != 0
        let c = hermitian_curve(4).unwrap();
        let f = c.field().clone();
        let lines = c.lines();
        for (i, p) in c.points().iter().enumerate() {
            if p[0].is_zero() {
                continue;
            }
            let alpha = f.pow(p[0], 4);
            let beta = f.sub(p[1], f.pow(p[0], 5));
            let line = lines.iter().find(|l| l.alpha == alpha && l.beta == beta).unwrap();
            assert_eq!(line.members, vec![i]);
        }
        assert_eq!(intersection_histogram(&lines), BTreeMap::from([(1, 60), (5, 180)]));
    }

    #[test]
    fn every_convention_certifies() {
        for conv in [DeltaConvention::Literal, DeltaConvention::Interpolation] {
            for red in [Reduction::CurveEquation, Reduction::Intersection] {
                let c = build_nt_lifted(4, conv, red).unwrap();
                crate::recovery::certify(&c.code, &c.recovery).unwrap();
            }
        }
    }

    #[test]
    fn horizontal_groups_fill_in_for_tangents() {
        let c = build_hermitian_lifted(4).unwrap();
        crate::recovery::certify(&c.code, &c.recovery).unwrap();
        for (i, p) in c.curve.points().iter().enumerate() {
            assert_eq!(c.recovery.groups(i).len(), 15);
            let horizontal = c.recovery.groups(i).iter().any(|g| g.support.iter().all(|&j| c.curve.points()[j][1] == p[1]));
            assert_eq!(horizontal, !p[0].is_zero());
        }
        assert!(c.recovery.groups_pairwise_disjoint());
        assert_eq!(c.availability(), 15);
    }

    #[test]
    fn norm_trace_r4_intersections() {
        let c = norm_trace_curve(4).unwrap();
        let lines = c.lines();
        assert_eq!(lines.len(), 240);
        assert!(lines.iter().all(|l| l.members.len() == 7 || l.members.len() == 9));
    }
}
