//! Evaluation codes C(D, V): codewords are the value vectors of the
//! functions in V at an ordered point list D.
//!
//! The generator matrix keeps one row per supplied basis function even when
//! the functions are dependent on D. The first maximal independent subset of
//! rows, in basis order, is the encoding basis, so encodings are
//! reproducible regardless of how redundant the supplied basis is.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, GfError};
use crate::linalg::{independent_rows, solve_left, EchelonBasis, Matrix};
use crate::poly::{Monomial, UniPoly};

/// One coordinate of a code: a point given by 1 to 3 field coordinates.
pub type Point = Vec<Elem>;

/// A function that can be evaluated at points of the evaluation set.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisFn {
    Monomial(Monomial),
    /// A univariate polynomial in coordinate `var`.
    Poly { var: usize, poly: UniPoly },
    /// `num / den`; evaluating where `den` vanishes is a pole.
    Ratio(Box<BasisFn>, Box<BasisFn>),
}

impl BasisFn {
    pub fn monomial(exps: impl Into<Vec<u32>>) -> BasisFn {
        BasisFn::Monomial(Monomial::new(exps))
    }

    pub fn eval(&self, field: &Field, point: &[Elem]) -> std::result::Result<Elem, GfError> {
        match self {
            BasisFn::Monomial(m) => Ok(m.eval(field, point)),
            BasisFn::Poly { var, poly } => Ok(poly.eval(point[*var])),
            BasisFn::Ratio(n, d) => field.div(n.eval(field, point)?, d.eval(field, point)?),
        }
    }

    pub fn descriptor(&self) -> BasisDescriptor {
        match self {
            BasisFn::Monomial(m) => BasisDescriptor::Monomial(m.0.clone()),
            BasisFn::Poly { var, poly } => BasisDescriptor::Poly { var: *var, coeffs: poly.to_ints() },
            BasisFn::Ratio(n, d) => BasisDescriptor::Ratio(Box::new(n.descriptor()), Box::new(d.descriptor())),
        }
    }

    pub fn from_descriptor(field: &Field, d: &BasisDescriptor) -> Result<BasisFn> {
        Ok(match d {
            BasisDescriptor::Monomial(e) => BasisFn::Monomial(Monomial(e.clone())),
            BasisDescriptor::Poly { var, coeffs } => {
                let c: Vec<u64> = coeffs.iter().map(|&v| v as u64).collect();
                BasisFn::Poly { var: *var, poly: UniPoly::from_ints(field, &c)? }
            }
            BasisDescriptor::Ratio(n, d) => BasisFn::Ratio(
                Box::new(BasisFn::from_descriptor(field, n)?),
                Box::new(BasisFn::from_descriptor(field, d)?),
            ),
        })
    }
}

impl fmt::Display for BasisFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisFn::Monomial(m) => write!(f, "{m}"),
            BasisFn::Poly { poly, .. } => write!(f, "{poly}"),
            BasisFn::Ratio(n, d) => write!(f, "({n})/({d})"),
        }
    }
}

/// Serialized basis function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisDescriptor {
    Monomial(Vec<u32>),
    Poly { var: usize, coeffs: Vec<u32> },
    Ratio(Box<BasisDescriptor>, Box<BasisDescriptor>),
}

/// Where a distance figure comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Construction guarantee (lower bound).
    Formula,
    /// Exhaustive scan; exact.
    BruteForce,
    /// Published value that was not reproduced here.
    PublishedTargetUnverified,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignDistance {
    pub value: usize,
    pub provenance: Provenance,
}

/// How the dimension was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankSource {
    Elimination,
    /// Independence follows from the structure of the point set; the string
    /// names the argument.
    Structural(String),
}

#[derive(Clone, Debug)]
pub struct EvaluationCode {
    field: Field,
    points: Vec<Point>,
    basis: Vec<BasisFn>,
    generator: Matrix,
    info_rows: Vec<usize>,
    rank_source: RankSource,
    design_distance: Option<DesignDistance>,
}

fn evaluate_rows(field: &Field, points: &[Point], basis: &[BasisFn]) -> Result<Matrix> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    let rows: Vec<Vec<Elem>> = basis
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            points
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    b.eval(field, p).map_err(|e| match e {
                        GfError::DivisionByZero => Error::Pole { function: i, point: j },
                        other => other.into(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, points.len()));
    }
    Ok(Matrix::from_rows(rows))
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::WordLength { got: perm.len(), expected: n });
    }
    for &j in perm {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::invalid("coordinate order is not a permutation"));
        }
    }
    Ok(())
}

impl EvaluationCode {
    /// Evaluates every basis function at every point and computes the rank
    /// by elimination.
    pub fn build(field: &Field, points: Vec<Point>, basis: Vec<BasisFn>) -> Result<EvaluationCode> {
        let generator = evaluate_rows(field, &points, &basis)?;
        let info_rows = independent_rows(field, &generator);
        Ok(EvaluationCode {
            field: field.clone(),
            points,
            basis,
            generator,
            info_rows,
            rank_source: RankSource::Elimination,
            design_distance: None,
        })
    }

    /// Like [`EvaluationCode::build`] but takes `info_rows` as a basis of the
    /// row space without elimination. The caller supplies the argument.
    pub fn build_structural(
        field: &Field,
        points: Vec<Point>,
        basis: Vec<BasisFn>,
        info_rows: Vec<usize>,
        argument: impl Into<String>,
    ) -> Result<EvaluationCode> {
        if let Some(&bad) = info_rows.iter().find(|&&r| r >= basis.len()) {
            return Err(Error::IndexOutOfRange { index: bad, n: basis.len() });
        }
        let generator = evaluate_rows(field, &points, &basis)?;
        Ok(EvaluationCode {
            field: field.clone(),
            points,
            basis,
            generator,
            info_rows,
            rank_source: RankSource::Structural(argument.into()),
            design_distance: None,
        })
    }

    pub fn with_design_distance(mut self, d: DesignDistance) -> EvaluationCode {
        self.design_distance = Some(d);
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn basis(&self) -> &[BasisFn] {
        &self.basis
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.info_rows.len()
    }

    /// Basis rows used for encoding, in basis order.
    pub fn info_rows(&self) -> &[usize] {
        &self.info_rows
    }

    /// Number of supplied basis functions that were dependent on D.
    pub fn dependent_rows(&self) -> usize {
        self.basis.len() - self.info_rows.len()
    }

    pub fn rank_source(&self) -> &RankSource {
        &self.rank_source
    }

    pub fn design_distance(&self) -> Option<DesignDistance> {
        self.design_distance
    }

    pub fn info_generator(&self) -> Matrix {
        self.generator.select_rows(&self.info_rows)
    }

    /// The same code with coordinates reordered: new coordinate `i` is old
    /// coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<EvaluationCode> {
        check_permutation(perm, self.len())?;
        let mut out = self.clone();
        out.points = perm.iter().map(|&j| self.points[j].clone()).collect();
        out.generator = self.generator.select_cols(perm);
        Ok(out)
    }

    /// `message` times the encoding rows.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.dimension() {
            return Err(Error::MessageLength { got: message.len(), expected: self.dimension() });
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.len()];
        for (&c, &r) in message.iter().zip(&self.info_rows) {
            if c.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.generator.row(r)) {
                *o = f.add(*o, f.mul(c, g));
            }
        }
        Ok(out)
    }

    /// A message encoding to `word`, if `word` is a codeword.
    pub fn message_for(&self, word: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if word.len() != self.len() {
            return Err(Error::WordLength { got: word.len(), expected: self.len() });
        }
        Ok(solve_left(&self.field, &self.info_generator(), word))
    }

    pub fn is_codeword(&self, word: &[Elem]) -> Result<bool> {
        if word.len() != self.len() {
            return Err(Error::WordLength { got: word.len(), expected: self.len() });
        }
        let mut basis = EchelonBasis::new(&self.field, self.len());
        for &r in &self.info_rows {
            basis.insert(self.generator.row(r));
        }
        Ok(basis.contains(word))
    }

    pub fn random_message<R: rand::Rng>(&self, rng: &mut R) -> Vec<Elem> {
        let q = self.field.order();
        (0..self.dimension()).map(|_| self.field.elem(rng.gen_range(0..q) as u64).unwrap()).collect()
    }

    pub fn random_codeword<R: rand::Rng>(&self, rng: &mut R) -> Vec<Elem> {
        self.encode(&self.random_message(rng)).expect("message has the right length")
    }

    /// Number of projective message classes, `(q^k - 1)/(q - 1)`, or `None`
    /// on overflow.
    pub fn scalar_classes(&self) -> Option<u128> {
        let q = self.field.order() as u128;
        let qk = q.checked_pow(self.dimension() as u32)?;
        Some((qk - 1) / (q - 1))
    }

    /// Exact minimum distance by scanning one message per scalar class, or
    /// `Refused` when that exceeds `work_budget` messages.
    pub fn min_distance_bruteforce(&self, work_budget: u128) -> Result<MinDistance> {
        let k = self.dimension();
        if k == 0 {
            return Err(Error::ZeroDimension);
        }
        match self.scalar_classes() {
            Some(c) if c <= work_budget => {}
            other => return Ok(MinDistance::Refused { required: other, budget: work_budget }),
        }
        let q = self.field.order() as u64;
        let g = self.info_generator();
        let n = self.len();
        let f = &self.field;
        // Messages whose first nonzero entry is a 1 at position `lead`.
        let best = (0..k)
            .map(|lead| {
                let tail = k - 1 - lead;
                let count = q.pow(tail as u32);
                (0..count)
                    .into_par_iter()
                    .map(|idx| {
                        let mut word: Vec<Elem> = g.row(lead).to_vec();
                        let mut r = idx;
                        for j in 0..tail {
                            let c = Elem::raw((r % q) as u32);
                            r /= q;
                            if c.is_zero() {
                                continue;
                            }
                            for (w, &v) in word.iter_mut().zip(g.row(lead + 1 + j)) {
                                *w = f.add(*w, f.mul(c, v));
                            }
                        }
                        word.iter().filter(|x| !x.is_zero()).count()
                    })
                    .min()
                    .unwrap_or(n)
            })
            .min()
            .unwrap_or(n);
        Ok(MinDistance::Exact(best))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinDistance {
    Exact(usize),
    Refused { required: Option<u128>, budget: u128 },
}

/// A received word: symbols or erasures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord(pub Vec<Option<Elem>>);

impl ReceivedWord {
    pub fn from_codeword(c: &[Elem]) -> ReceivedWord {
        ReceivedWord(c.iter().copied().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn erase(&mut self, i: usize) -> Result<()> {
        let n = self.0.len();
        *self.0.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, n })? = None;
        Ok(())
    }

    pub fn erasures(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(i, _)| i).collect()
    }

    /// The full word when nothing is erased.
    pub fn complete(&self) -> Option<Vec<Elem>> {
        self.0.iter().copied().collect()
    }

    /// Whitespace-separated decimal symbols, `?` for an erasure.
    pub fn parse(field: &Field, text: &str) -> Result<ReceivedWord> {
        text.split_whitespace()
            .map(|tok| {
                if tok == "?" {
                    return Ok(None);
                }
                let v: u64 = tok.parse().map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?;
                Ok(Some(field.elem(v)?))
            })
            .collect::<Result<Vec<_>>>()
            .map(ReceivedWord)
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| s.map_or_else(|| "?".to_string(), |e| e.value().to_string()))
            .collect();
        parts.join(" ")
    }
}
