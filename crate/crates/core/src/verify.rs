//! Starter and strong-starter verification by definition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pairing::Pairing;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An element of `Z_n*` appears more than once.
    DuplicateElement { element: u32 },
    /// Zero appears as a pair entry.
    ZeroElement { pair: usize },
    /// An element of `Z_n*` is not covered by any pair.
    MissingElement { element: u32 },
    /// A nonzero residue is not produced as `±(a - b)`.
    MissingDifference { difference: u32 },
    /// A residue is produced as a difference more than once.
    RepeatedDifference { difference: u32 },
    /// Two pairs share the same sum.
    RepeatedSum { sum: u32 },
    /// A pair sums to zero.
    ZeroSum { pair: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateElement { element } => write!(f, "element {element} used more than once"),
            Self::ZeroElement { pair } => write!(f, "pair {pair} contains 0"),
            Self::MissingElement { element } => write!(f, "element {element} not covered"),
            Self::MissingDifference { difference } => write!(f, "difference {difference} missing"),
            Self::RepeatedDifference { difference } => {
                write!(f, "difference {difference} repeated")
            }
            Self::RepeatedSum { sum } => write!(f, "sum {sum} repeated"),
            Self::ZeroSum { pair } => write!(f, "pair {pair} sums to 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub order: u32,
    pub is_partition: bool,
    pub is_starter: bool,
    pub is_strong: bool,
    pub pair_sums: Vec<u32>,
    pub pair_differences: Vec<u32>,
    pub diagnostics: Vec<Violation>,
}

/// Checks the partition, starter and strong-starter conditions for `pairing`.
///
/// Diagnostics list every violation found, not only the first one. The flags
/// are nested: a pairing is only reported strong if it is a starter, and only
/// a starter if it is a partition.
pub fn verify_pairing(pairing: &Pairing) -> VerificationReport {
    let n = pairing.modulus();
    let nu = n as usize;
    let mut diagnostics = Vec::new();

    let mut seen = vec![0u32; nu];
    for (i, p) in pairing.iter().enumerate() {
        for x in [p.first, p.second] {
            if x == 0 {
                diagnostics.push(Violation::ZeroElement { pair: i });
            } else {
                seen[x as usize] += 1;
            }
        }
    }
    for x in 1..n {
        match seen[x as usize] {
            0 => diagnostics.push(Violation::MissingElement { element: x }),
            1 => {}
            _ => diagnostics.push(Violation::DuplicateElement { element: x }),
        }
    }
    let is_partition = diagnostics.is_empty();

    let mut diff_count = vec![0u32; nu];
    for p in pairing.iter() {
        diff_count[p.difference(n) as usize] += 1;
        diff_count[p.swapped().difference(n) as usize] += 1;
    }
    let mut differences_ok = diff_count[0] == 0;
    for d in 1..n {
        match diff_count[d as usize] {
            0 => {
                differences_ok = false;
                diagnostics.push(Violation::MissingDifference { difference: d });
            }
            1 => {}
            _ => {
                differences_ok = false;
                diagnostics.push(Violation::RepeatedDifference { difference: d });
            }
        }
    }
    let is_starter = is_partition && differences_ok;

    let pair_sums = pairing.pair_sums();
    let mut sums_ok = true;
    let mut sum_count = vec![0u32; nu];
    for (i, &s) in pair_sums.iter().enumerate() {
        if s == 0 {
            sums_ok = false;
            diagnostics.push(Violation::ZeroSum { pair: i });
        }
        sum_count[s as usize] += 1;
    }
    for (s, &c) in sum_count.iter().enumerate().skip(1) {
        if c > 1 {
            sums_ok = false;
            diagnostics.push(Violation::RepeatedSum { sum: s as u32 });
        }
    }

    VerificationReport {
        order: n,
        is_partition,
        is_starter,
        is_strong: is_starter && sums_ok,
        pair_sums,
        pair_differences: pairing.pair_differences(),
        diagnostics,
    }
}

/// `(a_i + b_i) mod n` for every pair, multiplicity preserved.
pub fn pair_sums(pairing: &Pairing) -> Vec<u32> {
    pairing.pair_sums()
}
