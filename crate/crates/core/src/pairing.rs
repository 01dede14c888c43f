//! Ordered residue pairs and pairings of `Z_n*`.
//!
//! A [`Pairing`] keeps pair order and within-pair order exactly as given.
//! Triplication is order-sensitive, so nothing here reorders pairs unless
//! [`Pairing::normalized`] is called explicitly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct OrderedPair {
    pub first: u32,
    pub second: u32,
}

impl OrderedPair {
    pub const fn new(first: u32, second: u32) -> Self {
        Self { first, second }
    }

    pub fn swapped(self) -> Self {
        Self::new(self.second, self.first)
    }

    /// `(first - second) mod n`.
    pub fn difference(self, n: u32) -> u32 {
        (self.first + n - self.second) % n
    }

    /// `(first + second) mod n`.
    pub fn sum(self, n: u32) -> u32 {
        (self.first + self.second) % n
    }

    pub fn reduce(self, m: u32) -> Self {
        Self::new(self.first % m, self.second % m)
    }

    /// Orients the pair so that `first - second` lies in `[0, (n-1)/2]`.
    pub fn oriented(self, n: u32) -> Self {
        if self.difference(n) <= (n - 1) / 2 {
            self
        } else {
            self.swapped()
        }
    }
}

impl From<[u32; 2]> for OrderedPair {
    fn from([a, b]: [u32; 2]) -> Self {
        Self::new(a, b)
    }
}

impl From<OrderedPair> for [u32; 2] {
    fn from(p: OrderedPair) -> Self {
        [p.first, p.second]
    }
}

impl From<(u32, u32)> for OrderedPair {
    fn from((a, b): (u32, u32)) -> Self {
        Self::new(a, b)
    }
}

impl fmt::Display for OrderedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// An ordered tuple of `(n-1)/2` ordered pairs with entries in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPairing", into = "RawPairing")]
pub struct Pairing {
    modulus: u32,
    pairs: Vec<OrderedPair>,
}

#[derive(Serialize, Deserialize)]
struct RawPairing {
    order: u32,
    pairs: Vec<OrderedPair>,
}

impl TryFrom<RawPairing> for Pairing {
    type Error = Error;

    fn try_from(raw: RawPairing) -> Result<Self> {
        Pairing::new(raw.order, raw.pairs)
    }
}

impl From<Pairing> for RawPairing {
    fn from(p: Pairing) -> Self {
        RawPairing {
            order: p.modulus,
            pairs: p.pairs,
        }
    }
}

impl Pairing {
    pub fn new(modulus: u32, pairs: Vec<OrderedPair>) -> Result<Self> {
        if modulus < 3 || modulus % 2 == 0 {
            return Err(Error::BadModulus(modulus));
        }
        let expected = (modulus as usize - 1) / 2;
        if pairs.len() != expected {
            return Err(Error::WrongLength {
                order: modulus,
                expected,
                found: pairs.len(),
            });
        }
        check_range(&pairs, modulus)?;
        Ok(Self { modulus, pairs })
    }

    /// Convenience constructor from tuples.
    pub fn from_tuples(modulus: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(modulus, pairs.iter().copied().map(OrderedPair::from).collect())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of pairs, `(n-1)/2`.
    pub fn half(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[OrderedPair] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = OrderedPair> + '_ {
        self.pairs.iter().copied()
    }

    /// Sums `(a_i + b_i) mod n` in pair order, multiplicity preserved.
    pub fn pair_sums(&self) -> Vec<u32> {
        self.iter().map(|p| p.sum(self.modulus)).collect()
    }

    /// Differences `(a_i - b_i) mod n` in pair order.
    pub fn pair_differences(&self) -> Vec<u32> {
        self.iter().map(|p| p.difference(self.modulus)).collect()
    }

    /// Entrywise reduction modulo a divisor of the order.
    pub fn reduce_mod(&self, m: u32) -> Result<ReducedTuple> {
        if m == 0 || self.modulus % m != 0 {
            return Err(Error::NotADivisor {
                divisor: m,
                modulus: self.modulus,
            });
        }
        Ok(ReducedTuple {
            modulus: m,
            pairs: self.iter().map(|p| p.reduce(m)).collect(),
        })
    }

    /// Canonical form for set-level comparison: each pair oriented so its
    /// difference lies in `[1, (n-1)/2]`, then pairs sorted.
    pub fn normalized(&self) -> Pairing {
        let mut pairs: Vec<_> = self.iter().map(|p| p.oriented(self.modulus)).collect();
        pairs.sort_unstable();
        Pairing {
            modulus: self.modulus,
            pairs,
        }
    }

    /// Equality as sets of unordered pairs.
    pub fn same_set(&self, other: &Pairing) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn into_pairs(self) -> Vec<OrderedPair> {
        self.pairs
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

fn check_range(pairs: &[OrderedPair], modulus: u32) -> Result<()> {
    for (index, p) in pairs.iter().enumerate() {
        for value in [p.first, p.second] {
            if value >= modulus {
                return Err(Error::OutOfRange {
                    index,
                    value,
                    modulus,
                });
            }
        }
    }
    Ok(())
}

/// A pairing reduced entrywise modulo a divisor `m` of its order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedTuple {
    modulus: u32,
    pairs: Vec<OrderedPair>,
}

impl ReducedTuple {
    pub fn new(modulus: u32, pairs: Vec<OrderedPair>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::BadModulus(modulus));
        }
        check_range(&pairs, modulus)?;
        Ok(Self { modulus, pairs })
    }

    pub fn from_tuples(modulus: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(modulus, pairs.iter().copied().map(OrderedPair::from).collect())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn pairs(&self) -> &[OrderedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn section2_s() -> Pairing {
        Pairing::from_tuples(
            21,
            &[
                (11, 18),
                (9, 17),
                (13, 14),
                (8, 2),
                (4, 20),
                (15, 3),
                (5, 7),
                (1, 12),
                (19, 16),
                (6, 10),
            ],
        )
        .unwrap()
    }

    #[test]
    fn reductions_of_order_21_example() {
        let s = section2_s();
        let mod3 = s.reduce_mod(3).unwrap();
        let expected3 = ReducedTuple::from_tuples(
            3,
            &[
                (2, 0),
                (0, 2),
                (1, 2),
                (2, 2),
                (1, 2),
                (0, 0),
                (2, 1),
                (1, 0),
                (1, 1),
                (0, 1),
            ],
        )
        .unwrap();
        assert_eq!(mod3, expected3);

        let mod7 = s.reduce_mod(7).unwrap();
        let expected7 = ReducedTuple::from_tuples(
            7,
            &[
                (4, 4),
                (2, 3),
                (6, 0),
                (1, 2),
                (4, 6),
                (1, 3),
                (5, 0),
                (1, 5),
                (5, 2),
                (6, 3),
            ],
        )
        .unwrap();
        assert_eq!(mod7, expected7);
    }

    #[test]
    fn reduce_by_own_modulus_is_identity() {
        let s = section2_s();
        assert_eq!(s.reduce_mod(21).unwrap().pairs(), s.pairs());
    }

    #[test]
    fn reduce_by_non_divisor_fails() {
        assert!(matches!(
            section2_s().reduce_mod(5),
            Err(Error::NotADivisor { divisor: 5, .. })
        ));
    }

    #[test]
    fn constructor_rejects_malformed() {
        assert!(matches!(Pairing::from_tuples(8, &[]), Err(Error::BadModulus(8))));
        assert!(matches!(
            Pairing::from_tuples(7, &[(1, 2)]),
            Err(Error::WrongLength { expected: 3, found: 1, .. })
        ));
        assert!(matches!(
            Pairing::from_tuples(7, &[(1, 2), (3, 4), (5, 7)]),
            Err(Error::OutOfRange { index: 2, value: 7, .. })
        ));
    }

    #[test]
    fn normalization_orients_and_sorts() {
        let p = Pairing::from_tuples(7, &[(5, 1), (3, 2), (6, 4)]).unwrap();
        let n = p.normalized();
        assert_eq!(n.pairs(), &[OrderedPair::new(1, 5), OrderedPair::new(3, 2), OrderedPair::new(6, 4)]);
        assert!(p.same_set(&Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap()));
    }
}
