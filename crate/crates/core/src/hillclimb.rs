//! Randomized hill climbing for strong starters.
//!
//! The state is a partial strong starter: disjoint pairs with distinct
//! differences and distinct nonzero sums. Each step picks a random uncovered
//! point `x` and a random unused difference `d` and proposes `{x, x + d}`.
//! The proposal is added outright when it conflicts with nothing, swapped in
//! for the single pair it conflicts with (shared point or shared sum), and
//! dropped otherwise. Some partial states in `Z_n` with `3 | n` admit no
//! further move at all, so the walk restarts from empty after a run of steps
//! without growth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};

#[derive(Clone, Copy, Debug)]
pub struct HillClimbOptions {
    pub max_steps: u64,
    /// Steps without growth before restarting; `None` picks `50 * n`.
    pub stall_limit: Option<u64>,
}

impl Default for HillClimbOptions {
    fn default() -> Self {
        Self {
            max_steps: 1_000_000,
            stall_limit: None,
        }
    }
}

pub fn hill_climb(n: u32, seed: u64) -> Result<Pairing> {
    hill_climb_with(n, seed, &HillClimbOptions::default())
}

pub fn hill_climb_with(n: u32, seed: u64, options: &HillClimbOptions) -> Result<Pairing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    hill_climb_rng(n, &mut rng, options)
}

pub fn hill_climb_rng<R: Rng + ?Sized>(
    n: u32,
    rng: &mut R,
    options: &HillClimbOptions,
) -> Result<Pairing> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadModulus(n));
    }
    if matches!(n, 3 | 5 | 9) {
        return Err(Error::NoStrongStarter(n));
    }
    let stall_limit = options.stall_limit.unwrap_or(50 * n as u64);
    let mut state = Partial::new(n);
    let mut stall = 0u64;

    for _ in 0..options.max_steps {
        if state.pairs == state.target {
            return Ok(state.into_pairing());
        }
        stall += 1;
        if stall > stall_limit {
            state = Partial::new(n);
            stall = 0;
        }

        let x = state.live_points.choose(rng);
        let d = state.live_diffs.choose(rng);
        let y = (x + d) % n;
        let s = (x + y) % n;
        if y == 0 || s == 0 {
            continue;
        }

        let point_conflict = (state.partner[y as usize] != 0).then_some(y);
        let sum_conflict = (state.sum_owner[s as usize] != 0).then(|| state.sum_owner[s as usize]);
        match (point_conflict, sum_conflict) {
            (None, None) => {
                state.add(x, y);
                stall = 0;
            }
            (Some(a), None) | (None, Some(a)) => {
                state.remove(a);
                state.add(x, y);
            }
            (Some(a), Some(b)) => {
                if b == a || b == state.partner[a as usize] {
                    state.remove(a);
                    state.add(x, y);
                }
            }
        }
    }
    if state.pairs == state.target {
        return Ok(state.into_pairing());
    }
    Err(Error::HillClimbExhausted {
        order: n,
        steps: options.max_steps,
    })
}

/// Set of residues with O(1) insert, remove and uniform choice.
struct LiveSet {
    items: Vec<u32>,
    pos: Vec<usize>,
}

impl LiveSet {
    const ABSENT: usize = usize::MAX;

    fn full(n: u32) -> Self {
        let items: Vec<u32> = (1..n).collect();
        let mut pos = vec![Self::ABSENT; n as usize];
        for (i, &x) in items.iter().enumerate() {
            pos[x as usize] = i;
        }
        Self { items, pos }
    }

    fn insert(&mut self, x: u32) {
        if self.pos[x as usize] == Self::ABSENT {
            self.pos[x as usize] = self.items.len();
            self.items.push(x);
        }
    }

    fn remove(&mut self, x: u32) {
        let i = self.pos[x as usize];
        if i == Self::ABSENT {
            return;
        }
        let last = *self.items.last().unwrap();
        self.items.swap_remove(i);
        if last != x {
            self.pos[last as usize] = i;
        }
        self.pos[x as usize] = Self::ABSENT;
    }

    fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.items[rng.gen_range(0..self.items.len())]
    }
}

struct Partial {
    n: u32,
    target: usize,
    pairs: usize,
    // 0 marks "uncovered"; 0 is never a pair entry.
    partner: Vec<u32>,
    sum_owner: Vec<u32>,
    live_points: LiveSet,
    live_diffs: LiveSet,
}

impl Partial {
    fn new(n: u32) -> Self {
        Self {
            n,
            target: (n as usize - 1) / 2,
            pairs: 0,
            partner: vec![0; n as usize],
            sum_owner: vec![0; n as usize],
            live_points: LiveSet::full(n),
            live_diffs: LiveSet::full(n),
        }
    }

    fn add(&mut self, x: u32, y: u32) {
        let n = self.n;
        self.partner[x as usize] = y;
        self.partner[y as usize] = x;
        self.sum_owner[((x + y) % n) as usize] = x;
        self.live_points.remove(x);
        self.live_points.remove(y);
        let d = (x + n - y) % n;
        self.live_diffs.remove(d);
        self.live_diffs.remove(n - d);
        self.pairs += 1;
    }

    fn remove(&mut self, a: u32) {
        let n = self.n;
        let b = self.partner[a as usize];
        self.partner[a as usize] = 0;
        self.partner[b as usize] = 0;
        self.sum_owner[((a + b) % n) as usize] = 0;
        self.live_points.insert(a);
        self.live_points.insert(b);
        let d = (a + n - b) % n;
        self.live_diffs.insert(d);
        self.live_diffs.insert(n - d);
        self.pairs -= 1;
    }

    fn into_pairing(self) -> Pairing {
        let pairs: Vec<OrderedPair> = (1..self.n)
            .filter(|&a| a < self.partner[a as usize])
            .map(|a| OrderedPair::new(a, self.partner[a as usize]))
            .collect();
        Pairing::new(self.n, pairs).expect("complete hill-climb state is a full pairing")
    }
}
