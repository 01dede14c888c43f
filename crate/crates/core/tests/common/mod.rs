//! Test-only oracles built from first definitions.
#![allow(dead_code)]

use std::collections::HashSet;

/// `x` in `[0, 3p)` with `x ≡ a (mod p)` and `x ≡ u (mod 3)`, by search.
pub fn lift(a: u32, u: u8, p: u32) -> u32 {
    (0..3 * p).find(|x| x % p == a && x % 3 == u as u32).unwrap()
}

/// Definition check: the pairs partition `Z_n \ {0}`, the differences `±(a-b)`
/// cover it, and the sums are nonzero and distinct.
pub fn is_strong_starter(n: u32, pairs: &[(u32, u32)]) -> bool {
    let mut points = HashSet::new();
    let mut diffs = HashSet::new();
    let mut sums = HashSet::new();
    for &(a, b) in pairs {
        let s = (a + b) % n;
        if !(points.insert(a) && points.insert(b)) || points.contains(&0) {
            return false;
        }
        if !(diffs.insert((a + n - b) % n) && diffs.insert((b + n - a) % n)) {
            return false;
        }
        if s == 0 || !sums.insert(s) {
            return false;
        }
    }
    points.len() == (n - 1) as usize && diffs.len() == (n - 1) as usize
}

/// Every mod-3 labeling `(U_i, V_i)` of `extension` (mod `p`) whose
/// entrywise lift to `Z_3p` is a strong starter. Stops after `limit` hits.
pub fn strong_lifts(extension: &[(u32, u32)], p: u32, limit: usize) -> Vec<Vec<(u8, u8)>> {
    struct State {
        n: u32,
        used: Vec<bool>,
        diff: Vec<bool>,
        sum: Vec<bool>,
        labels: Vec<(u8, u8)>,
        out: Vec<Vec<(u8, u8)>>,
    }
    fn go(st: &mut State, ext: &[(u32, u32)], p: u32, limit: usize) {
        if st.out.len() >= limit {
            return;
        }
        let i = st.labels.len();
        if i == ext.len() {
            st.out.push(st.labels.clone());
            return;
        }
        let n = st.n;
        for u in 0..3u8 {
            for v in 0..3u8 {
                let a = lift(ext[i].0, u, p);
                let b = lift(ext[i].1, v, p);
                let (d1, d2, s) = ((a + n - b) % n, (b + n - a) % n, (a + b) % n);
                if a == 0 || b == 0 || a == b || st.used[a as usize] || st.used[b as usize] {
                    continue;
                }
                if st.diff[d1 as usize] || st.diff[d2 as usize] || s == 0 || st.sum[s as usize] {
                    continue;
                }
                for (k, x) in [(0, a), (0, b), (1, d1), (1, d2), (2, s)] {
                    [&mut st.used, &mut st.diff, &mut st.sum][k][x as usize] = true;
                }
                st.labels.push((u, v));
                go(st, ext, p, limit);
                st.labels.pop();
                for (k, x) in [(0, a), (0, b), (1, d1), (1, d2), (2, s)] {
                    [&mut st.used, &mut st.diff, &mut st.sum][k][x as usize] = false;
                }
            }
        }
    }
    let n = 3 * p;
    let mut st = State {
        n,
        used: vec![false; n as usize],
        diff: vec![false; n as usize],
        sum: vec![false; n as usize],
        labels: Vec::new(),
        out: Vec::new(),
    };
    go(&mut st, extension, p, limit);
    st.out
}

/// The table extension written out from its defining formula.
pub fn extension_by_hand(base: &[(u32, u32)], t: u32, p: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(t, t)];
    for &(x, y) in base {
        out.push((x, y));
        out.push(((t + x) % p, (t + y) % p));
        out.push(((t + p - y) % p, (t + p - x) % p));
    }
    out
}

/// All `2^q` orientations of a pairing given as tuples.
pub fn orientations(base: &[(u32, u32)]) -> Vec<Vec<(u32, u32)>> {
    (0..1u32 << base.len())
        .map(|mask| {
            base.iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) })
                .collect()
        })
        .collect()
}

pub const DEMO_BASE: [(u32, u32); 3] = [(2, 3), (4, 6), (1, 5)];

pub const DEMO_RESIDUES: [(u8, u8); 10] =
    [(1, 2), (1, 0), (2, 0), (1, 1), (2, 2), (0, 2), (0, 1), (0, 2), (2, 0), (1, 1)];

pub const NON_IMAGE_21: [(u32, u32); 10] =
    [(13, 12), (19, 17), (7, 4), (10, 14), (15, 20), (3, 9), (1, 8), (5, 18), (11, 2), (16, 6)];

pub const IMAGE_39: [(u32, u32); 19] = [
    (2, 1), (36, 34), (6, 3), (8, 12), (38, 33), (16, 10), (18, 11), (29, 21), (22, 31), (25, 15),
    (13, 24), (20, 32), (30, 17), (23, 37), (19, 4), (28, 5), (26, 9), (14, 35), (7, 27),
];

pub const T13: [(u32, u32); 6] = [(11, 10), (6, 4), (2, 12), (9, 5), (8, 3), (7, 1)];

/// Solves a DIMACS document with varisat. `Some(model)` when satisfiable,
/// with `model[k]` the value of boolean variable `k + 1`.
pub fn varisat_solve(dimacs: &str, nvars: usize) -> Option<Vec<bool>> {
    let mut solver = varisat::Solver::new();
    solver.add_dimacs_cnf(dimacs.as_bytes()).expect("valid dimacs");
    if !solver.solve().expect("varisat runs") {
        return None;
    }
    let mut model = vec![false; nvars];
    for lit in solver.model().unwrap() {
        let v = lit.to_dimacs();
        if v > 0 && (v as usize) <= nvars {
            model[v as usize - 1] = true;
        }
    }
    Some(model)
}
