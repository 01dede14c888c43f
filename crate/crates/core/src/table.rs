//! The triplication table built from a base starter `T` of order `p` and a key `t`.
//!
//! Layout: the top pair `(t, t)` followed by `q` regular rows, row `i` being
//! `(x_i, y_i), (t + x_i, t + y_i), (t - y_i, t - x_i)` mod `p`. The extension
//! tuple reads the table row by row, left to right, so index `0` is the top
//! pair and index `j >= 1` sits in row `ceil(j / 3)`, column `(j - 1) % 3 + 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};
use crate::verify::verify_pairing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplicationTable {
    base: Pairing,
    key: u32,
    extension: Vec<OrderedPair>,
}

/// Checks that `p` is a valid base order: odd, at least 7, coprime to 6.
pub fn check_base_order(p: u32) -> Result<()> {
    if p < 7 || p % 2 == 0 || p % 3 == 0 {
        return Err(Error::BadBaseOrder(p));
    }
    Ok(())
}

/// Builds the table for a starter base. Non-starter bases are refused.
pub fn build_table(base: &Pairing, key: u32) -> Result<TriplicationTable> {
    build_table_with(base, key, false)
}

/// Like [`build_table`], but accepts any well-formed pairing as base when
/// `allow_non_starter` is set.
pub fn build_table_with(base: &Pairing, key: u32, allow_non_starter: bool) -> Result<TriplicationTable> {
    let p = base.modulus();
    check_base_order(p)?;
    if key >= p {
        return Err(Error::KeyOutOfRange { key, order: p });
    }
    if !allow_non_starter && !verify_pairing(base).is_starter {
        return Err(Error::NotAStarter);
    }
    let mut extension = Vec::with_capacity(3 * base.half() + 1);
    extension.push(OrderedPair::new(key, key));
    for xy in base.iter() {
        let (x, y) = (xy.first, xy.second);
        extension.push(xy);
        extension.push(OrderedPair::new((key + x) % p, (key + y) % p));
        extension.push(OrderedPair::new((key + p - y) % p, (key + p - x) % p));
    }
    Ok(TriplicationTable {
        base: base.clone(),
        key,
        extension,
    })
}

impl TriplicationTable {
    pub fn base(&self) -> &Pairing {
        &self.base
    }

    pub fn key(&self) -> u32 {
        self.key
    }

    /// Base order `p`.
    pub fn order(&self) -> u32 {
        self.base.modulus()
    }

    /// Number of regular rows, `(p - 1) / 2`.
    pub fn q(&self) -> usize {
        self.base.half()
    }

    pub fn extension(&self) -> &[OrderedPair] {
        &self.extension
    }

    pub fn len(&self) -> usize {
        self.extension.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extension.is_empty()
    }

    /// `(row, column)` of a linear index; the top pair is `(0, 2)`.
    pub fn cell(index: usize) -> (usize, usize) {
        if index == 0 {
            (0, 2)
        } else {
            (index.div_ceil(3), (index - 1) % 3 + 1)
        }
    }

    /// Linear indices of regular row `row` (1-based).
    pub fn row_indices(row: usize) -> [usize; 3] {
        [3 * row - 2, 3 * row - 1, 3 * row]
    }

    /// `delta_i = (u_i - v_i) mod p` for every index.
    pub fn row_differences(&self) -> Vec<u32> {
        let p = self.order();
        self.extension.iter().map(|uv| uv.difference(p)).collect()
    }

    /// `sigma_i = (u_i + v_i) mod p` for every index.
    pub fn sums(&self) -> Vec<u32> {
        let p = self.order();
        self.extension.iter().map(|uv| uv.sum(p)).collect()
    }

    /// Weak sets, sorted by sum.
    pub fn compute_weak_sets(&self) -> Vec<WeakSet> {
        let mut by_sum: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.sums().into_iter().enumerate() {
            by_sum.entry(s).or_default().push(i);
        }
        by_sum
            .into_iter()
            .filter(|(s, members)| *s == 0 || members.len() > 1)
            .map(|(sum, members)| WeakSet { sum, members })
            .collect()
    }

    pub fn compute_monochrome_sets(&self) -> MonochromeSets {
        let p = self.order();
        let mut sets: Vec<MonochromeSet> = (0..p)
            .map(|color| MonochromeSet {
                color,
                positions: Vec::new(),
            })
            .collect();
        for (i, uv) in self.extension.iter().enumerate() {
            sets[uv.first as usize].positions.push(Position::Entry { pair: i, slot: 0 });
            sets[uv.second as usize].positions.push(Position::Entry { pair: i, slot: 1 });
        }
        let violations = sets
            .iter()
            .filter_map(|m| {
                let expected = if m.color == 0 { 2 } else { 3 };
                (m.positions.len() != expected).then_some(CardinalityViolation {
                    color: m.color,
                    expected,
                    found: m.positions.len(),
                })
            })
            .collect();
        sets[0].positions.push(Position::Dummy);
        MonochromeSets { sets, violations }
    }

    /// Value stored at an entry position.
    pub fn value_at(&self, pair: usize, slot: u8) -> u32 {
        let uv = self.extension[pair];
        if slot == 0 {
            uv.first
        } else {
            uv.second
        }
    }
}

impl fmt::Display for TriplicationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.extension;
        writeln!(f, "          (0) {},{}", e[0].first, e[0].second)?;
        for row in 1..=self.q() {
            let [a, b, c] = Self::row_indices(row);
            writeln!(
                f,
                "({a}) {},{}  ({b}) {},{}  ({c}) {},{}",
                e[a].first, e[a].second, e[b].first, e[b].second, e[c].first, e[c].second
            )?;
        }
        Ok(())
    }
}

/// Position `<i, l>` of an entry in the extension, or the dummy `<*, *>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    Entry { pair: usize, slot: u8 },
    Dummy,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Entry { pair, slot } => write!(f, "<{pair},{slot}>"),
            Position::Dummy => write!(f, "<*,*>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakSet {
    pub sum: u32,
    /// Linear indices of the member pairs, ascending.
    pub members: Vec<usize>,
}

impl WeakSet {
    /// The type of the weak set, i.e. its cardinality.
    pub fn kind(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonochromeSet {
    pub color: u32,
    pub positions: Vec<Position>,
}

impl MonochromeSet {
    /// Positions excluding the dummy.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.positions.iter().filter_map(|p| match *p {
            Position::Entry { pair, slot } => Some((pair, slot)),
            Position::Dummy => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityViolation {
    pub color: u32,
    pub expected: usize,
    pub found: usize,
}

/// One monochrome set per color `0..p`; the color-0 set carries the dummy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromeSets {
    pub sets: Vec<MonochromeSet>,
    /// Colors whose cardinality (without the dummy) is not 3, or 2 for color 0.
    pub violations: Vec<CardinalityViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeyRejection {
    Zero,
    PairSum { pair: usize },
}

impl fmt::Display for KeyRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyRejection::Zero => write!(f, "key is zero"),
            KeyRejection::PairSum { pair } => write!(f, "key in pair sums (pair {pair})"),
        }
    }
}

/// A key is admissible iff it is neither 0 nor a pair sum of the base.
pub fn check_key_admissible(base: &Pairing, key: u32) -> std::result::Result<(), KeyRejection> {
    if key == 0 {
        return Err(KeyRejection::Zero);
    }
    match base.pair_sums().iter().position(|&s| s == key) {
        Some(pair) => Err(KeyRejection::PairSum { pair }),
        None => Ok(()),
    }
}

/// Admissible keys of `base` in ascending order.
pub fn admissible_keys(base: &Pairing) -> Vec<u32> {
    (1..base.modulus())
        .filter(|&t| check_key_admissible(base, t).is_ok())
        .collect()
}
