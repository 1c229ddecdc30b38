//! Local recovery: repair groups as linear functionals, certification
//! against the generator matrix, and peeling repair of erasures.
//!
//! Every construction in this crate recovers a symbol by Lagrange
//! interpolation along a line or fiber, which is linear in the helper
//! symbols. A repair group is therefore stored as a support set plus
//! coefficients `lambda` with `c[target] = sum_j lambda[j] * c[support[j]]`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalcode::{EvaluationCode, ReceivedWord};
use crate::gf::{Elem, Field};
use crate::linalg::{solve, Matrix};
use crate::poly::lagrange_weights;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairGroup {
    pub target: usize,
    pub support: Vec<usize>,
    pub lambda: Vec<Elem>,
}

impl RepairGroup {
    pub fn new(target: usize, support: Vec<usize>, lambda: Vec<Elem>) -> RepairGroup {
        RepairGroup { target, support, lambda }
    }

    pub fn size(&self) -> usize {
        self.support.len()
    }

    /// Applies the functional to a full word.
    pub fn apply(&self, field: &Field, word: &[Elem]) -> Elem {
        self.support
            .iter()
            .zip(&self.lambda)
            .fold(Elem::ZERO, |acc, (&j, &l)| field.add(acc, field.mul(l, word[j])))
    }

    fn apply_partial(&self, field: &Field, word: &[Option<Elem>]) -> Option<Elem> {
        let mut acc = Elem::ZERO;
        for (&j, &l) in self.support.iter().zip(&self.lambda) {
            acc = field.add(acc, field.mul(l, word[j]?));
        }
        Some(acc)
    }

    fn is_disjoint(&self, other: &RepairGroup) -> bool {
        self.support.iter().all(|j| !other.support.contains(j))
    }
}

/// Order in which a coordinate's repair groups are tried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GroupOrder {
    /// Smallest support first, ties in declaration order.
    #[default]
    CheapestFirst,
    AsDeclared,
}

/// Per-coordinate repair groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryStructure {
    n: usize,
    groups: Vec<Vec<RepairGroup>>,
}

impl RecoveryStructure {
    /// Validates indices and orders each coordinate's groups cheapest first.
    pub fn new(n: usize, groups: Vec<Vec<RepairGroup>>) -> Result<RecoveryStructure> {
        Self::with_order(n, groups, GroupOrder::CheapestFirst)
    }

    pub fn with_order(n: usize, mut groups: Vec<Vec<RepairGroup>>, order: GroupOrder) -> Result<RecoveryStructure> {
        if groups.len() != n {
            return Err(Error::WordLength { got: groups.len(), expected: n });
        }
        for (i, gs) in groups.iter().enumerate() {
            for g in gs {
                if g.target != i {
                    return Err(Error::invalid(format!("group listed under {i} targets {}", g.target)));
                }
                if g.support.len() != g.lambda.len() {
                    return Err(Error::invalid(format!("group for {i}: support and coefficients differ in length")));
                }
                if let Some(&bad) = g.support.iter().find(|&&j| j >= n) {
                    return Err(Error::IndexOutOfRange { index: bad, n });
                }
                if g.support.contains(&i) {
                    return Err(Error::invalid(format!("group for {i} contains its own target")));
                }
            }
        }
        if order == GroupOrder::CheapestFirst {
            for gs in groups.iter_mut() {
                gs.sort_by_key(RepairGroup::size);
            }
        }
        Ok(RecoveryStructure { n, groups })
    }

    /// Relabels coordinates: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RecoveryStructure> {
        crate::evalcode::check_permutation(perm, self.n)?;
        let mut inv = vec![0; self.n];
        for (i, &j) in perm.iter().enumerate() {
            inv[j] = i;
        }
        let groups = perm
            .iter()
            .map(|&old| {
                self.groups[old]
                    .iter()
                    .map(|g| RepairGroup::new(inv[g.target], g.support.iter().map(|&j| inv[j]).collect(), g.lambda.clone()))
                    .collect()
            })
            .collect();
        Ok(RecoveryStructure { n: self.n, groups })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn groups(&self, i: usize) -> &[RepairGroup] {
        &self.groups[i]
    }

    pub fn all_groups(&self) -> impl Iterator<Item = &RepairGroup> {
        self.groups.iter().flatten()
    }

    /// Largest support size.
    pub fn locality(&self) -> usize {
        self.all_groups().map(RepairGroup::size).max().unwrap_or(0)
    }

    /// Distinct support sizes.
    pub fn localities(&self) -> BTreeSet<usize> {
        self.all_groups().map(RepairGroup::size).collect()
    }

    /// Indices of a pairwise-disjoint family of groups for coordinate `i`,
    /// chosen greedily in trial order among groups accepted by `usable`.
    pub fn disjoint_groups_where(&self, i: usize, usable: impl Fn(&RepairGroup) -> bool) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for (gi, g) in self.groups[i].iter().enumerate() {
            if usable(g) && chosen.iter().all(|&c| self.groups[i][c].is_disjoint(g)) {
                chosen.push(gi);
            }
        }
        chosen
    }

    pub fn disjoint_groups(&self, i: usize) -> Vec<usize> {
        self.disjoint_groups_where(i, |_| true)
    }

    /// Minimum over coordinates of the number of disjoint groups.
    pub fn availability(&self) -> usize {
        (0..self.n).map(|i| self.disjoint_groups(i).len()).min().unwrap_or(0)
    }

    /// Whether every coordinate's groups are pairwise disjoint.
    pub fn groups_pairwise_disjoint(&self) -> bool {
        self.groups.iter().all(|gs| {
            gs.iter().enumerate().all(|(a, ga)| gs[a + 1..].iter().all(|gb| ga.is_disjoint(gb)))
        })
    }
}

/// One repair group per fiber member: the other members of its fiber, with
/// Lagrange coefficients in coordinate `var` of the points. Fiber members
/// must have distinct values in that coordinate.
pub fn fiber_groups(field: &Field, points: &[Vec<Elem>], fibers: &[Vec<usize>], var: usize) -> Result<Vec<Vec<RepairGroup>>> {
    let mut groups = vec![Vec::new(); points.len()];
    for fiber in fibers {
        for &t in fiber {
            let support: Vec<usize> = fiber.iter().copied().filter(|&j| j != t).collect();
            let nodes: Vec<Elem> = support.iter().map(|&j| points[j][var]).collect();
            let lambda = lagrange_weights(field, &nodes, points[t][var])?;
            groups[t].push(RepairGroup::new(t, support, lambda));
        }
    }
    Ok(groups)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub groups_checked: usize,
    pub locality: usize,
    pub localities: Vec<usize>,
    pub availability: usize,
}

/// Checks every repair group against the generator matrix: column `target`
/// must equal `sum_j lambda_j * column support[j]`. Since codewords are
/// combinations of rows, this is equivalent to the identity holding for all
/// codewords.
pub fn certify(code: &EvaluationCode, structure: &RecoveryStructure) -> Result<CertificationReport> {
    let all: Vec<usize> = (0..structure.len()).collect();
    let groups_checked = certify_coordinates(code, structure, &all)?;
    Ok(CertificationReport {
        groups_checked,
        locality: structure.locality(),
        localities: structure.localities().into_iter().collect(),
        availability: structure.availability(),
    })
}

/// [`certify`] restricted to the groups of the given coordinates; returns
/// the number of groups checked.
pub fn certify_coordinates(code: &EvaluationCode, structure: &RecoveryStructure, coords: &[usize]) -> Result<usize> {
    if structure.len() != code.len() {
        return Err(Error::WordLength { got: structure.len(), expected: code.len() });
    }
    if let Some(&index) = coords.iter().find(|&&i| i >= code.len()) {
        return Err(Error::IndexOutOfRange { index, n: code.len() });
    }
    let failure = coords.par_iter().find_map_first(|&i| {
        structure.groups(i).iter().enumerate().find_map(|(gi, grp)| {
            (!group_holds(code, grp)).then_some(Error::CertificationFailed { target: i, group: gi })
        })
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(coords.iter().map(|&i| structure.groups(i).len()).sum()),
    }
}

/// Whether `group` reproduces its target on every generator row.
pub fn group_holds(code: &EvaluationCode, group: &RepairGroup) -> bool {
    let g = code.generator();
    let f = code.field();
    if group.target >= code.len() || group.support.iter().any(|&j| j >= code.len()) {
        return false;
    }
    (0..g.rows()).all(|r| {
        let row = g.row(r);
        let v = group.support.iter().zip(&group.lambda).fold(Elem::ZERO, |acc, (&j, &l)| f.add(acc, f.mul(l, row[j])));
        v == row[group.target]
    })
}

/// A structure that has passed [`certify`] for a particular code length.
#[derive(Clone, Debug)]
pub struct CertifiedStructure {
    structure: RecoveryStructure,
    report: CertificationReport,
}

impl CertifiedStructure {
    pub fn new(code: &EvaluationCode, structure: RecoveryStructure) -> Result<CertifiedStructure> {
        let report = certify(code, &structure)?;
        Ok(CertifiedStructure { structure, report })
    }

    /// Wraps a structure whose groups were all checked already.
    pub(crate) fn from_checked(structure: RecoveryStructure, groups_checked: usize) -> CertifiedStructure {
        let report = CertificationReport {
            groups_checked,
            locality: structure.locality(),
            localities: structure.localities().into_iter().collect(),
            availability: structure.availability(),
        };
        CertifiedStructure { structure, report }
    }

    pub fn structure(&self) -> &RecoveryStructure {
        &self.structure
    }

    pub fn report(&self) -> &CertificationReport {
        &self.report
    }
}

/// Solves for coefficients expressing column `target` through the
/// `support` columns of the encoding rows. `None` when `support` is not a
/// recovery set for `target`.
pub fn derive_lambda(code: &EvaluationCode, target: usize, support: &[usize]) -> Result<Option<Vec<Elem>>> {
    let n = code.len();
    for &j in support.iter().chain(std::iter::once(&target)) {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
    }
    if support.contains(&target) {
        return Err(Error::invalid("support contains the target"));
    }
    let g = code.info_generator();
    let a: Matrix = g.select_cols(support);
    Ok(solve(code.field(), &a, &g.column(target)))
}

/// Whether two coefficient vectors on the same support define the same
/// functional on the code, i.e. their difference annihilates every row.
pub fn same_functional(code: &EvaluationCode, support: &[usize], a: &[Elem], b: &[Elem]) -> bool {
    let f = code.field();
    let g = code.info_generator();
    (0..g.rows()).all(|r| {
        let row = g.row(r);
        let d = support.iter().zip(a.iter().zip(b)).fold(Elem::ZERO, |acc, (&j, (&x, &y))| {
            f.add(acc, f.mul(f.sub(x, y), row[j]))
        });
        d.is_zero()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairRecord {
    pub coordinate: usize,
    pub group: usize,
    pub support: Vec<usize>,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    /// Coordinates filled, in repair order.
    pub repaired: Vec<usize>,
    /// Symbols read across all repairs.
    pub bandwidth: usize,
    /// Erasures left when peeling stalled.
    pub residual: Vec<usize>,
    pub repairs: Vec<RepairRecord>,
}

/// Peeling repair: visit erased coordinates in index order, fill any whose
/// repair group is fully available, and repeat until nothing changes.
pub fn recover(field: &Field, received: &ReceivedWord, structure: &RecoveryStructure) -> Result<(ReceivedWord, RecoveryReport)> {
    let order: Vec<usize> = (0..received.len()).collect();
    recover_in_order(field, received, structure, &order)
}

/// [`recover`] visiting erased coordinates in the given order.
pub fn recover_in_order(
    field: &Field,
    received: &ReceivedWord,
    structure: &RecoveryStructure,
    order: &[usize],
) -> Result<(ReceivedWord, RecoveryReport)> {
    if received.len() != structure.len() {
        return Err(Error::WordLength { got: received.len(), expected: structure.len() });
    }
    let mut word = received.0.clone();
    let mut repairs = Vec::new();
    let mut bandwidth = 0;
    loop {
        let mut progress = false;
        for &i in order {
            if word[i].is_some() {
                continue;
            }
            for (gi, g) in structure.groups(i).iter().enumerate() {
                if let Some(v) = g.apply_partial(field, &word) {
                    word[i] = Some(v);
                    bandwidth += g.size();
                    repairs.push(RepairRecord { coordinate: i, group: gi, support: g.support.clone(), value: v.value() });
                    progress = true;
                    break;
                }
            }
        }
        if !progress {
            break;
        }
    }
    let residual = word.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(i, _)| i).collect();
    let report = RecoveryReport { repaired: repairs.iter().map(|r| r.coordinate).collect(), bandwidth, residual, repairs };
    Ok((ReceivedWord(word), report))
}
