//! Construction specs: a tagged description of one code family instance,
//! building it with its recovery structure, and a summary of its parameters.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{classify, BoundReport, ParamTuple};
use crate::curve_cover::{build_hermitian_lrc, build_power_cover_lrc, search_y_cap};
use crate::error::{Error, Result};
use crate::evalcode::{DesignDistance, EvaluationCode, Point, Provenance, RankSource};
use crate::fiber_avail::build_gk_lrc;
use crate::gf::{prime_power, Elem, Field, FieldDescriptor};
use crate::lifted::{build_hermitian_lifted, build_nt_lifted, DeltaConvention, LiftedCode, Reduction};
use crate::recovery::{certify_coordinates, CertifiedStructure, RecoveryStructure};
use crate::tamo_barg::{build_tb, good_from_additive, good_from_multiplicative};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoodSource {
    /// Cosets of the order-r subgroup of GF(q)^*, g = x^r.
    #[default]
    Multiplicative,
    /// Cosets of an additive subgroup, g its subspace polynomial.
    Additive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Construction {
    TamoBarg {
        q: u32,
        r: usize,
        k: usize,
        #[serde(default)]
        source: GoodSource,
        /// Additive subgroup generators, as field integers.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<u64>>,
    },
    Hermitian {
        q: u32,
        l: u32,
    },
    PowerCover {
        q: u32,
        s: u32,
        y_cap: u32,
    },
    Gk {
        q: u32,
        #[serde(rename = "N")]
        n: u32,
        l: u32,
    },
    HermitianLifted {
        q: u32,
    },
    NtLifted {
        r: u32,
        #[serde(default)]
        delta_convention: DeltaConvention,
        #[serde(default)]
        reduction: Reduction,
    },
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::TamoBarg { .. } => "tamo-barg",
            Construction::Hermitian { .. } => "hermitian",
            Construction::PowerCover { .. } => "power-cover",
            Construction::Gk { .. } => "gk",
            Construction::HermitianLifted { .. } => "hermitian-lifted",
            Construction::NtLifted { .. } => "nt-lifted",
        }
    }
}

/// A construction plus an optional fixed coordinate order. `points` lists
/// every evaluation point once, each as its coordinate integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecFile {
    #[serde(flatten)]
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<u32>>>,
}

fn parse_value(v: &str) -> Value {
    if let Ok(n) = v.parse::<u64>() {
        return Value::from(n);
    }
    if v.contains(',') {
        let parts: Option<Vec<Value>> = v.split(',').map(|p| p.trim().parse::<u64>().ok().map(Value::from)).collect();
        if let Some(parts) = parts {
            return Value::Array(parts);
        }
    }
    Value::from(v)
}

impl CodeSpecFile {
    pub fn new(construction: Construction) -> CodeSpecFile {
        CodeSpecFile { construction, field: None, points: None }
    }

    /// Builds a spec from a tag and `key=value` arguments, for example
    /// `tamo-barg q=13 r=2 k=6`. Comma lists become integer arrays.
    pub fn from_pairs<S: AsRef<str>>(tag: &str, pairs: &[S]) -> Result<CodeSpecFile> {
        let mut obj = serde_json::Map::new();
        obj.insert("type".into(), Value::from(tag));
        for p in pairs {
            let p = p.as_ref();
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
            if obj.insert(k.trim().to_string(), parse_value(v.trim())).is_some() {
                return Err(Error::Parse(format!("parameter {k:?} given twice")));
            }
        }
        CodeSpecFile::from_value(Value::Object(obj))
    }

    pub fn from_value(v: Value) -> Result<CodeSpecFile> {
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<CodeSpecFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verify {
    /// Certify every repair group of every coordinate.
    #[default]
    Full,
    /// Certify the groups of a fixed sample of coordinates.
    Fast,
}

/// Coordinates certified under [`Verify::Fast`].
pub const FAST_SAMPLE: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub mode: Verify,
    pub coordinates: usize,
    pub groups_checked: usize,
}

#[derive(Clone, Debug)]
pub struct BuiltCode {
    pub spec: CodeSpecFile,
    pub code: EvaluationCode,
    pub recovery: RecoveryStructure,
    pub certification: Certification,
    /// Construction-specific facts for reports.
    pub details: Value,
    /// Whether every coordinate has its own repair groups.
    pub all_symbol_locality: bool,
}

fn field_for(q: u32) -> Result<Field> {
    let (p, e) = prime_power(q as u64).ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
    Ok(Field::new(p, e)?)
}

fn lifted_details(c: &LiftedCode) -> Value {
    json!({
        "delta": c.monomials.delta,
        "reduction": c.monomials.reduction,
        "good_monomials": c.monomials.count(),
        "baseline_monomials": c.monomials.baseline_count(),
        "line_intersections": c.intersections,
    })
}

fn sample_coordinates(n: usize) -> Vec<usize> {
    if n <= FAST_SAMPLE {
        return (0..n).collect();
    }
    let mut v: Vec<usize> = (0..FAST_SAMPLE).map(|i| i * (n - 1) / (FAST_SAMPLE - 1)).collect();
    v.dedup();
    v
}

/// Builds the code and recovery structure for `spec` and certifies the
/// repair groups (all of them, or a sample under [`Verify::Fast`]).
pub fn build(spec: &CodeSpecFile, verify: Verify) -> Result<BuiltCode> {
    let (code, recovery, details) = match &spec.construction {
        Construction::TamoBarg { q, r, k, source, generators } => {
            let f = field_for(*q)?;
            let good = match source {
                GoodSource::Multiplicative => {
                    if generators.is_some() {
                        return Err(Error::invalid("generators apply to the additive source only"));
                    }
                    good_from_multiplicative(&f, *r)?
                }
                GoodSource::Additive => {
                    let gens = generators.as_ref().ok_or_else(|| Error::invalid("additive source needs generators"))?;
                    let gens = gens.iter().map(|&g| f.elem(g)).collect::<std::result::Result<Vec<_>, _>>()?;
                    let good = good_from_additive(&f, &gens)?;
                    if good.locality() != *r {
                        return Err(Error::invalid(format!("generators span blocks of size {}, not r = {r}", good.locality())));
                    }
                    good
                }
            };
            let tb = build_tb(&good, *k)?;
            let parts: Vec<Vec<u32>> = good.parts().iter().map(|p| p.iter().map(|e| e.value()).collect()).collect();
            let details = json!({ "g": good.g().to_ints(), "partition": parts });
            (tb.code, tb.recovery, details)
        }
        Construction::Hermitian { q, l } => {
            let c = build_hermitian_lrc(*q, *l)?;
            let details = json!({ "fiber_size": c.cover.d_phi, "fibers": c.cover.fibers.len() });
            (c.code, c.recovery, details)
        }
        Construction::PowerCover { q, s, y_cap } => {
            let c = build_power_cover_lrc(*q, *s, *y_cap)?;
            let mut details = json!({ "fiber_size": c.cover.d_phi, "fibers": c.cover.fibers.len() });
            if let Some(t) = c.target {
                details["published"] = json!(t);
                details["y_cap_search"] = json!(search_y_cap(*q, *s, t.k)?);
            }
            (c.code, c.recovery, details)
        }
        Construction::Gk { q, n, l } => {
            let c = build_gk_lrc(*q, *n, *l)?;
            let details = json!({
                "s": c.curve.s,
                "counts": c.curve.counts,
                "counts_reconcile": c.curve.counts.reconciles(),
                "formula_dimension": c.formula_dimension(),
                "z_fiber_size": c.curve.s,
                "x_fiber_size": c.curve.q,
            });
            (c.code, c.recovery, details)
        }
        Construction::HermitianLifted { q } => {
            let c = build_hermitian_lifted(*q)?;
            let details = lifted_details(&c);
            (c.code, c.recovery, details)
        }
        Construction::NtLifted { r, delta_convention, reduction } => {
            let c = build_nt_lifted(*r, *delta_convention, *reduction)?;
            let mut details = lifted_details(&c);
            details["delta_convention"] = json!(delta_convention);
            (c.code, c.recovery, details)
        }
    };
    if let Some(fd) = &spec.field {
        if *fd != code.field().descriptor() {
            return Err(Error::invalid(format!("spec field {fd:?} does not match the construction field")));
        }
    }
    let (code, recovery) = match &spec.points {
        None => (code, recovery),
        Some(order) => {
            let perm = order_permutation(code.points(), order)?;
            (code.permuted(&perm)?, recovery.permuted(&perm)?)
        }
    };
    let coords: Vec<usize> = match verify {
        Verify::Full => (0..code.len()).collect(),
        Verify::Fast => sample_coordinates(code.len()),
    };
    let groups_checked = certify_coordinates(&code, &recovery, &coords)?;
    let all_symbol_locality = (0..recovery.len()).all(|i| !recovery.groups(i).is_empty());
    Ok(BuiltCode {
        spec: spec.clone(),
        code,
        recovery,
        certification: Certification { mode: verify, coordinates: coords.len(), groups_checked },
        details,
        all_symbol_locality,
    })
}

/// perm[i] = index of the i-th listed point among the generated points.
fn order_permutation(points: &[Point], order: &[Vec<u32>]) -> Result<Vec<usize>> {
    let index: BTreeMap<Vec<u32>, usize> =
        points.iter().enumerate().map(|(i, p)| (p.iter().map(|e| e.value()).collect(), i)).collect();
    if order.len() != points.len() {
        return Err(Error::invalid(format!("point order lists {} points, the construction has {}", order.len(), points.len())));
    }
    let mut seen = BTreeSet::new();
    order
        .iter()
        .map(|p| {
            let &i = index.get(p).ok_or_else(|| Error::invalid(format!("point {p:?} is not in the evaluation set")))?;
            if !seen.insert(i) {
                return Err(Error::invalid(format!("point {p:?} listed twice")));
            }
            Ok(i)
        })
        .collect()
}

/// `5` for a one-coordinate point, `(1,2,3)` otherwise.
pub fn point_label(p: &[Elem]) -> String {
    match p {
        [x] => x.value().to_string(),
        _ => {
            let parts: Vec<String> = p.iter().map(|e| e.value().to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub construction: &'static str,
    pub field: FieldDescriptor,
    pub field_order: u32,
    pub n: usize,
    pub k: usize,
    pub basis_size: usize,
    pub rank_source: RankSource,
    pub localities: BTreeSet<usize>,
    pub locality: usize,
    /// Minimum over coordinates of the number of pairwise-disjoint groups.
    pub availability: usize,
    pub rate: f64,
    pub design_distance: Option<DesignDistance>,
    pub certification: Certification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
    pub details: Value,
}

impl BuiltCode {
    pub fn availability(&self) -> usize {
        (0..self.recovery.len()).map(|i| self.recovery.disjoint_groups(i).len()).min().unwrap_or(0)
    }

    /// Bound check for a distance `d` with r = locality and t = availability.
    pub fn bound_report(&self, d: usize) -> Result<BoundReport> {
        let k = self.code.dimension() as u64;
        let r = (self.recovery.locality() as u64).min(k);
        let params = ParamTuple::new(self.code.len() as u64, k, d as u64, r, self.availability().max(1) as u64)?;
        classify(&params, self.all_symbol_locality)
    }

    /// Parameter summary. The bound report is included when the distance
    /// is a construction guarantee or was brute-forced.
    pub fn summary(&self) -> CodeSummary {
        let dd = self.code.design_distance();
        let bounds = dd
            .filter(|d| matches!(d.provenance, Provenance::Formula | Provenance::BruteForce))
            .and_then(|d| self.bound_report(d.value).ok());
        let f = self.code.field();
        CodeSummary {
            construction: self.spec.construction.tag(),
            field: f.descriptor(),
            field_order: f.order(),
            n: self.code.len(),
            k: self.code.dimension(),
            basis_size: self.code.basis().len(),
            rank_source: self.code.rank_source().clone(),
            localities: self.recovery.localities(),
            locality: self.recovery.locality(),
            availability: self.availability(),
            rate: self.code.dimension() as f64 / self.code.len() as f64,
            design_distance: dd,
            certification: self.certification.clone(),
            bounds,
            details: self.details.clone(),
        }
    }

    /// The certified recovery structure; runs the full check unless the
    /// build already did.
    pub fn certified(&self) -> Result<CertifiedStructure> {
        match self.certification.mode {
            Verify::Full => Ok(CertifiedStructure::from_checked(self.recovery.clone(), self.certification.groups_checked)),
            Verify::Fast => CertifiedStructure::new(&self.code, self.recovery.clone()),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.code.points().iter().map(|p| point_label(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;

    #[test]
    fn pairs_and_json_round_trip() {
        let s = CodeSpecFile::from_pairs("tamo-barg", &["q=13", "r=2", "k=6"]).unwrap();
        assert_eq!(
            s.construction,
            Construction::TamoBarg { q: 13, r: 2, k: 6, source: GoodSource::Multiplicative, generators: None }
        );
        assert_eq!(CodeSpecFile::from_json(&s.to_json()).unwrap(), s);
        let g = CodeSpecFile::from_pairs("gk", &["q=3", "N=3", "l=0"]).unwrap();
        assert!(g.to_json().contains("\"N\": 3"));
        let a = CodeSpecFile::from_pairs("tamo-barg", &["q=8", "r=4", "k=4", "source=additive", "generators=1,2"]).unwrap();
        assert_eq!(CodeSpecFile::from_json(&a.to_json()).unwrap(), a);
        let nt = CodeSpecFile::from_pairs("nt-lifted", &["r=4", "delta_convention=literal"]).unwrap();
        assert_eq!(CodeSpecFile::from_json(&nt.to_json()).unwrap(), nt);
    }

    #[test]
    fn malformed_specs() {
        assert!(CodeSpecFile::from_pairs("tamo-barg", &["q=13", "r=2"]).is_err());
        assert!(CodeSpecFile::from_pairs("nope", &["q=13"]).is_err());
        assert!(CodeSpecFile::from_pairs("hermitian", &["q"]).is_err());
        assert!(CodeSpecFile::from_pairs("hermitian", &["q=3", "q=4"]).is_err());
        assert!(CodeSpecFile::from_json("{\"q\": 3}").is_err());
    }

    #[test]
    fn tamo_barg_summary() {
        let s = CodeSpecFile::from_pairs("tamo-barg", &["q=13", "r=2", "k=6"]).unwrap();
        let b = build(&s, Verify::Full).unwrap();
        let sum = b.summary();
        assert_eq!((sum.n, sum.k, sum.locality, sum.availability), (12, 6, 2, 1));
        assert_eq!(sum.design_distance.unwrap().value, 5);
        assert_eq!(sum.bounds.unwrap().verdict, Verdict::Optimal);
        assert_eq!(b.labels()[4], "5");
    }

    #[test]
    fn point_order_permutes_coordinates() {
        let mut s = CodeSpecFile::from_pairs("tamo-barg", &["q=13", "r=2", "k=6"]).unwrap();
        let base = build(&s, Verify::Full).unwrap();
        let order: Vec<Vec<u32>> = (1..13).rev().map(|v| vec![v]).collect();
        s.points = Some(order);
        let b = build(&s, Verify::Full).unwrap();
        assert_eq!(b.labels()[0], "12");
        assert_eq!(b.code.dimension(), 6);
        // coordinate 0 (point 12) repairs from the rest of {4, 10, 12}
        let mut sup = b.recovery.groups(0)[0].support.clone();
        sup.sort();
        assert_eq!(sup, vec![2, 8]);
        assert_eq!(base.recovery.locality(), b.recovery.locality());
        s.points = Some(vec![vec![1]; 12]);
        assert!(build(&s, Verify::Full).is_err());
    }

    #[test]
    fn fast_verify_samples() {
        let s = CodeSpecFile::from_pairs("hermitian-lifted", &["q=4"]).unwrap();
        let b = build(&s, Verify::Fast).unwrap();
        assert_eq!(b.certification.coordinates, FAST_SAMPLE);
        assert_eq!(b.code.dimension(), 13);
        assert_eq!(point_label(&b.code.points()[1]), format!("({},{})", b.code.points()[1][0].value(), b.code.points()[1][1].value()));
    }

    #[test]
    fn field_mismatch_rejected() {
        let mut s = CodeSpecFile::from_pairs("hermitian", &["q=3", "l=1"]).unwrap();
        s.field = Some(Field::new(3, 1).unwrap().descriptor());
        assert!(build(&s, Verify::Full).is_err());
        s.field = Some(Field::new(3, 2).unwrap().descriptor());
        assert!(build(&s, Verify::Full).is_ok());
    }
}
