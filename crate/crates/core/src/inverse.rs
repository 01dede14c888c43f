//! Partial test for whether a strong starter of order `3p` is a triplication image.
//!
//! The starter is reduced mod `p` and its pairs grouped by difference. The
//! single difference-0 pair fixes the key `t`; every other group must admit
//! an ordering `(u, v), (u', v'), (u'', v'')` with `u' + v'' = v' + u'' = 2t`
//! and `u' - u = v' - v = t`, which is exactly the shape of a table row.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};
use crate::sudoku::{check_solution, encode, SudokuSolution};
use crate::table::{build_table_with, check_base_order, TriplicationTable};
use crate::verify::{verify_pairing, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowGroup {
    pub difference: u32,
    /// Reduced pairs mod `p`, oriented so `first - second` lies in `[0, q]`.
    pub members: Vec<OrderedPair>,
    /// Index of each member's source pair in the starter.
    pub sources: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowGrouping {
    pub p: u32,
    pub key: u32,
    /// `groups[d]` is `R_d`, for `d` in `0..=q`.
    pub groups: Vec<RowGroup>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InverseStatus {
    False,
    Inconclusive,
}

impl InverseStatus {
    pub fn label(self) -> &'static str {
        match self {
            InverseStatus::False => "False",
            InverseStatus::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Candidate {
    pub base: Pairing,
    pub key: u32,
    pub report: VerificationReport,
    /// The starter reduced mod 3 and aligned with the candidate's extension.
    pub solution: Vec<(u8, u8)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InverseVerdict {
    pub status: InverseStatus,
    pub key: Option<u32>,
    /// Differences `d` whose group has no valid row ordering.
    pub failing_rows: Vec<u32>,
    pub candidates: Vec<Candidate>,
}

/// Checks that `n = 3p` with `p` a valid base order and returns `p`.
pub fn base_order_of(n: u32) -> Result<u32> {
    if n % 3 != 0 || check_base_order(n / 3).is_err() {
        return Err(Error::BadTripledOrder(n));
    }
    Ok(n / 3)
}

pub fn group_rows(starter: &Pairing) -> Result<RowGrouping> {
    let p = base_order_of(starter.modulus())?;
    if !verify_pairing(starter).is_starter {
        return Err(Error::NotAStarter);
    }
    let q = (p - 1) / 2;
    let mut groups: Vec<RowGroup> = (0..=q)
        .map(|d| RowGroup {
            difference: d,
            members: Vec::new(),
            sources: Vec::new(),
        })
        .collect();
    for (i, pair) in starter.iter().enumerate() {
        let r = pair.reduce(p).oriented(p);
        let g = &mut groups[r.difference(p) as usize];
        g.members.push(r);
        g.sources.push(i);
    }
    for g in &groups {
        let expected = if g.difference == 0 { 1 } else { 3 };
        if g.members.len() != expected {
            return Err(Error::Structural(format!(
                "group of difference {} has {} members, expected {expected}",
                g.difference,
                g.members.len()
            )));
        }
    }
    let top = groups[0].members[0];
    if top.first != top.second {
        return Err(Error::Structural(format!("difference-0 pair {top} is not of the form (t, t)")));
    }
    Ok(RowGrouping {
        p,
        key: top.first,
        groups,
    })
}

/// Every ordering of `members`, in either global orientation, that has the shape of a table row.
pub fn valid_row_orderings(members: &[OrderedPair], key: u32, p: u32) -> Vec<[OrderedPair; 3]> {
    let mut out = Vec::new();
    if members.len() != 3 {
        return out;
    }
    let t2 = (2 * key) % p;
    let sub = |a: u32, b: u32| (a + p - b) % p;
    for flip in [false, true] {
        for perm in members.iter().permutations(3) {
            let row: [OrderedPair; 3] = std::array::from_fn(|k| if flip { perm[k].swapped() } else { *perm[k] });
            let [(u, v), (u1, v1), (u2, v2)] = row.map(|x| (x.first, x.second));
            if (u1 + v2) % p == t2 && (v1 + u2) % p == t2 && sub(u1, u) == key && sub(v1, v) == key {
                out.push(row);
            }
        }
    }
    out
}

pub fn inverse_test(starter: &Pairing) -> Result<InverseVerdict> {
    let grouping = group_rows(starter)?;
    let failing_rows: Vec<u32> = grouping.groups[1..]
        .iter()
        .filter(|g| valid_row_orderings(&g.members, grouping.key, grouping.p).is_empty())
        .map(|g| g.difference)
        .collect();
    if !failing_rows.is_empty() {
        return Ok(InverseVerdict {
            status: InverseStatus::False,
            key: None,
            failing_rows,
            candidates: Vec::new(),
        });
    }
    let candidates = candidates_from_grouping(starter, &grouping)?;
    Ok(InverseVerdict {
        status: InverseStatus::Inconclusive,
        key: Some(grouping.key),
        failing_rows,
        candidates,
    })
}

/// Validated `(T, t)` reconstructions. Empty when the test answers False.
pub fn reconstruct_candidates(starter: &Pairing) -> Result<Vec<Candidate>> {
    Ok(inverse_test(starter)?.candidates)
}

fn candidates_from_grouping(starter: &Pairing, grouping: &RowGrouping) -> Result<Vec<Candidate>> {
    let (p, key) = (grouping.p, grouping.key);
    let firsts: Vec<Vec<OrderedPair>> = grouping.groups[1..]
        .iter()
        .map(|g| {
            valid_row_orderings(&g.members, key, p)
                .into_iter()
                .map(|row| row[0])
                .unique()
                .collect()
        })
        .collect();
    let mut seen = BTreeMap::new();
    for choice in firsts.into_iter().multi_cartesian_product() {
        let Ok(base) = Pairing::new(p, choice) else {
            continue;
        };
        let normal = base.normalized();
        if seen.contains_key(&normal) {
            continue;
        }
        let table = build_table_with(&base, key, true)?;
        if let Some(solution) = aligned_solution(starter, &table) {
            let report = verify_pairing(&base);
            seen.insert(
                normal,
                Candidate {
                    base,
                    key,
                    report,
                    solution,
                },
            );
        }
    }
    Ok(seen.into_values().collect())
}

/// Matches every table entry to a starter pair with the same reduction mod `p`
/// (possibly reversed) and returns the starter's residues mod 3 in table order,
/// provided they form a solution of the table's Sudoku instance.
pub fn aligned_solution(starter: &Pairing, table: &TriplicationTable) -> Option<Vec<(u8, u8)>> {
    let p = table.order();
    if starter.modulus() != 3 * p || starter.half() != table.len() {
        return None;
    }
    let mut by_reduction: HashMap<OrderedPair, Vec<usize>> = HashMap::new();
    for (i, pair) in starter.iter().enumerate() {
        by_reduction.entry(pair.reduce(p)).or_default().push(i);
    }
    let mut uv = Vec::with_capacity(table.len());
    for entry in table.extension() {
        let (idx, reversed) = if let Some(i) = by_reduction.get_mut(entry).and_then(Vec::pop) {
            (i, false)
        } else if let Some(i) = by_reduction.get_mut(&entry.swapped()).and_then(Vec::pop) {
            (i, true)
        } else {
            return None;
        };
        let src = starter.pairs()[idx];
        let (a, b) = ((src.first % 3) as u8, (src.second % 3) as u8);
        uv.push(if reversed { (b, a) } else { (a, b) });
    }
    let instance = encode(table);
    let solution = SudokuSolution::from_uv(&instance, &uv).ok()?;
    check_solution(&instance, &solution).ok()?.satisfied().then_some(uv)
}
