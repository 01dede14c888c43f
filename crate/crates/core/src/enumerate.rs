//! Exhaustive enumeration of strong starters by backtracking.
//!
//! Starters are counted as sets of unordered pairs: the smallest uncovered
//! element is always paired next, and each pair is listed as `(a, b)` with
//! `a < b`, so every labeled strong starter is produced exactly once.

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};

pub const DEFAULT_ENUMERATION_BOUND: u32 = 21;

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Largest order accepted.
    pub bound: u32,
    /// Maximum number of starters to keep in the returned list.
    pub cap: Option<usize>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_ENUMERATION_BOUND,
            cap: Some(0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub order: u32,
    pub count: u64,
    pub starters: Vec<Pairing>,
}

pub fn enumerate_strong_starters(n: u32, options: EnumerationOptions) -> Result<Enumeration> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadModulus(n));
    }
    if n > options.bound {
        return Err(Error::AboveEnumerationBound {
            order: n,
            bound: options.bound,
        });
    }
    if n > DEFAULT_ENUMERATION_BOUND {
        log::warn!("enumerating strong starters of order {n}; this may take very long");
    }

    let mut search = Search {
        n,
        used: vec![false; n as usize],
        diff_used: vec![false; n as usize],
        sum_used: vec![false; n as usize],
        current: Vec::with_capacity((n as usize - 1) / 2),
        count: 0,
        keep: options.cap,
        starters: Vec::new(),
    };
    search.used[0] = true;
    search.sum_used[0] = true;
    search.diff_used[0] = true;
    search.run(1);

    Ok(Enumeration {
        order: n,
        count: search.count,
        starters: search.starters,
    })
}

struct Search {
    n: u32,
    used: Vec<bool>,
    diff_used: Vec<bool>,
    sum_used: Vec<bool>,
    current: Vec<OrderedPair>,
    count: u64,
    keep: Option<usize>,
    starters: Vec<Pairing>,
}

impl Search {
    fn run(&mut self, from: u32) {
        let n = self.n;
        let Some(a) = (from..n).find(|&x| !self.used[x as usize]) else {
            self.count += 1;
            if self.keep.is_none_or(|cap| self.starters.len() < cap) {
                let p = Pairing::new(n, self.current.clone()).expect("complete pairing is well formed");
                self.starters.push(p);
            }
            return;
        };
        self.used[a as usize] = true;
        for b in a + 1..n {
            if self.used[b as usize] {
                continue;
            }
            let d = (b - a) as usize;
            let s = ((a + b) % n) as usize;
            if self.diff_used[d] || self.sum_used[s] {
                continue;
            }
            let neg = n as usize - d;
            self.used[b as usize] = true;
            self.diff_used[d] = true;
            self.diff_used[neg] = true;
            self.sum_used[s] = true;
            self.current.push(OrderedPair::new(a, b));

            self.run(a + 1);

            self.current.pop();
            self.sum_used[s] = false;
            self.diff_used[neg] = false;
            self.diff_used[d] = false;
            self.used[b as usize] = false;
        }
        self.used[a as usize] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_pairing;

    fn count(n: u32) -> u64 {
        enumerate_strong_starters(n, EnumerationOptions::default())
            .unwrap()
            .count
    }

    #[test]
    fn small_orders() {
        assert_eq!(count(3), 0);
        assert_eq!(count(5), 0);
        assert_eq!(count(9), 0);
        assert_eq!(count(15), 32);
    }

    #[test]
    fn listed_starters_are_strong_and_distinct() {
        let e = enumerate_strong_starters(
            11,
            EnumerationOptions {
                cap: None,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.starters.len() as u64, e.count);
        assert!(e.count > 0);
        for s in &e.starters {
            assert!(verify_pairing(s).is_strong);
        }
        let mut normalized: Vec<_> = e.starters.iter().map(|s| s.normalized()).collect();
        normalized.sort_by(|a, b| a.pairs().cmp(b.pairs()));
        normalized.dedup();
        assert_eq!(normalized.len() as u64, e.count);
    }

    #[test]
    fn cap_limits_the_list_only() {
        let e = enumerate_strong_starters(
            13,
            EnumerationOptions {
                cap: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.starters.len(), 3);
        assert!(e.count > 3);
    }

    #[test]
    fn refuses_above_bound() {
        assert!(matches!(
            enumerate_strong_starters(23, EnumerationOptions::default()),
            Err(Error::AboveEnumerationBound { order: 23, bound: 21 })
        ));
        assert!(matches!(
            enumerate_strong_starters(8, EnumerationOptions::default()),
            Err(Error::BadModulus(8))
        ));
    }
}
