//! Chinese-remainder merge of a mod-`p` table and a mod-3 Sudoku solution.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};
use crate::sudoku::{check_solution, phi, SudokuInstance, SudokuSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Identity,
    Phi,
}

/// Precomputed CRT coefficients for moduli `p` and 3.
#[derive(Clone, Copy, Debug)]
pub struct Crt {
    p: u64,
    // x = rp * ep + r3 * e3 (mod 3p)
    ep: u64,
    e3: u64,
}

impl Crt {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 || p % 3 == 0 {
            return Err(Error::NotCoprimeToThree(p));
        }
        let inv = |a: i64, m: i64| a.extended_gcd(&m).x.rem_euclid(m) as u64;
        let p64 = p as u64;
        Ok(Self {
            p: p64,
            ep: 3 * inv(3, p as i64),
            e3: p64 * inv(p as i64 % 3, 3),
        })
    }

    pub fn combine(&self, rp: u32, r3: u8) -> u32 {
        let n = 3 * self.p;
        ((rp as u64 % self.p * self.ep + (r3 as u64 % 3) * self.e3) % n) as u32
    }
}

/// The unique `x` in `[0, 3p)` with `x ≡ rp (mod p)` and `x ≡ r3 (mod 3)`.
pub fn crt(rp: u32, r3: u8, p: u32) -> Result<u32> {
    Ok(Crt::new(p)?.combine(rp, r3))
}

/// Pairs up `extension` (mod `p`) with `uv` (mod 3) entrywise. No validity check.
pub fn merge_residues(extension: &[OrderedPair], uv: &[(u8, u8)], p: u32, variant: Variant) -> Result<Pairing> {
    if extension.len() != uv.len() {
        return Err(Error::WrongLength {
            order: 3 * p,
            expected: extension.len(),
            found: uv.len(),
        });
    }
    let crt = Crt::new(p)?;
    let map = |x: u8| match variant {
        Variant::Identity => x,
        Variant::Phi => phi(x),
    };
    let pairs = extension
        .iter()
        .zip(uv)
        .map(|(e, &(u, v))| OrderedPair::new(crt.combine(e.first, map(u)), crt.combine(e.second, map(v))))
        .collect();
    Pairing::new(3 * p, pairs)
}

/// Merges a checked solution with the instance's table into a pairing of order `3p`.
pub fn crt_merge(instance: &SudokuInstance, solution: &SudokuSolution, variant: Variant) -> Result<Pairing> {
    let report = check_solution(instance, solution)?;
    if !report.satisfied() {
        return Err(Error::InvalidSolution(report.violated.len()));
    }
    let table = instance.table();
    merge_residues(table.extension(), &solution.uv(instance), table.order(), variant)
}
