//! Upper bounds on the minimum distance of locally recoverable codes and
//! classification of parameter tuples against them. Integer arithmetic only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// n - k + 1 - (ceil(k/r) - 1)
pub fn singleton_lrc(n: u64, k: u64, r: u64) -> i64 {
    let (n, k, r) = (n as i64, k as i64, r as i64);
    n - k + 1 - (ceil_div(k, r) - 1)
}

/// n - k - ceil((t(k-1) + 1)/(t(r-1) + 1)) + 2, for t disjoint repair
/// groups per information symbol.
pub fn availability_bound_wz(n: u64, k: u64, r: u64, t: u64) -> i64 {
    let (n, k, r, t) = (n as i64, k as i64, r as i64, t as i64);
    n - k - ceil_div(t * (k - 1) + 1, t * (r - 1) + 1) + 2
}

/// n - sum_{i=0}^{t} floor((k-1)/r^i), for all-symbol locality.
pub fn availability_bound_ta(n: u64, k: u64, r: u64, t: u64) -> i64 {
    let mut sum: u64 = 0;
    let mut ri: u64 = 1;
    for _ in 0..=t {
        sum += (k - 1) / ri;
        ri = ri.saturating_mul(r);
    }
    n as i64 - sum as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTuple {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub r: u64,
    #[serde(default = "one")]
    pub t: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

fn one() -> u64 {
    1
}

impl ParamTuple {
    pub fn new(n: u64, k: u64, d: u64, r: u64, t: u64) -> Result<ParamTuple> {
        let p = ParamTuple { n, k, d, r, t, q: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = 1 <= self.k && self.k <= self.n && 1 <= self.d && self.d <= self.n && 1 <= self.r && self.r <= self.k && self.t >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "need 1 <= k <= n, 1 <= d <= n, 1 <= r <= k, t >= 1; got n={} k={} d={} r={} t={}",
                self.n, self.k, self.d, self.r, self.t
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Optimal,
    Feasible,
    Violates,
}

impl Verdict {
    fn from_slack(slack: i64) -> Verdict {
        match slack {
            0 => Verdict::Optimal,
            s if s > 0 => Verdict::Feasible,
            _ => Verdict::Violates,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Singleton-type bound for locality r.
    SingletonLrc,
    /// Availability bound for information-symbol repair groups.
    AvailabilityInfo,
    /// Availability bound for all-symbol locality.
    AvailabilityAllSymbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub bound: BoundKind,
    pub max_d: i64,
    pub slack: i64,
    pub verdict: Verdict,
    /// Reported but not used for the overall verdict.
    pub advisory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub params: ParamTuple,
    pub bounds: Vec<BoundEntry>,
    /// Smallest non-advisory bound.
    pub governing: BoundKind,
    pub verdict: Verdict,
}

/// Evaluates the Singleton-type bound, and for t >= 2 both availability
/// bounds. The all-symbol bound counts toward the verdict only when
/// `all_symbol_locality` has been established for the code.
pub fn classify(params: &ParamTuple, all_symbol_locality: bool) -> Result<BoundReport> {
    params.validate()?;
    let ParamTuple { n, k, d, r, t, .. } = *params;
    let entry = |bound, max_d: i64, advisory, note: Option<&str>| {
        let slack = max_d - d as i64;
        BoundEntry { bound, max_d, slack, verdict: Verdict::from_slack(slack), advisory, note: note.map(String::from) }
    };
    let mut bounds = vec![entry(BoundKind::SingletonLrc, singleton_lrc(n, k, r), false, None)];
    if t >= 2 {
        bounds.push(entry(BoundKind::AvailabilityInfo, availability_bound_wz(n, k, r, t), false, None));
        let note = (!all_symbol_locality).then_some("requires all-symbol locality, not established for these parameters");
        bounds.push(entry(BoundKind::AvailabilityAllSymbol, availability_bound_ta(n, k, r, t), !all_symbol_locality, note));
    }
    let gov = bounds
        .iter()
        .filter(|b| !b.advisory)
        .min_by_key(|b| b.max_d)
        .expect("the Singleton-type bound always applies");
    let (governing, verdict) = (gov.bound, gov.verdict);
    Ok(BoundReport { params: *params, bounds, governing, verdict })
}

/// Reads parameter rows from CSV with a header naming at least n, k, d, r;
/// t and q are optional and other columns are ignored.
pub fn parse_params_csv(text: &str) -> Result<Vec<ParamTuple>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<ParamTuple>().enumerate() {
        let p = row.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
        p.validate()?;
        out.push(p);
    }
    Ok(out)
}
