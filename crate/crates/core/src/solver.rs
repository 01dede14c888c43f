//! Complete finite-domain solver for modular Sudoku instances.
//!
//! Chronological backtracking over the `U`/`V` variables with full arc
//! consistency on every constraint after each decision. Every constraint has
//! at most three variables over a three-value domain (larger all-different
//! constraints fail outright), so supports are found by enumerating the at
//! most 27 tuples in the product of the current domains.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sudoku::{check_solution, Constraint, ConstraintKind, Sign, SudokuInstance, SudokuSolution, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariableOrder {
    /// `U_0, V_0, U_1, V_1, ...` in extension order.
    LinearIndex,
    /// The first unfixed variable with the smallest domain, ties broken by linear index.
    SmallestDomain,
    /// A seeded random permutation of the `U`/`V` variables.
    Random(u64),
    /// Smallest domain over accumulated conflict weight. Constraints gain
    /// weight each time they wipe out a domain; a `U`/`V` variable is charged
    /// for its own constraints and for those on the `D`/`S` variables it binds.
    WeightedDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub variable_order: VariableOrder,
    /// Maximum number of solutions collected by enumeration.
    pub solution_cap: usize,
    /// Maximum number of decisions; `None` means unbounded.
    pub step_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            variable_order: VariableOrder::WeightedDegree,
            solution_cap: 1,
            step_budget: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub backtracks: u64,
    pub propagations: u64,
    pub duration: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(SudokuSolution),
    Unsat,
    BudgetExhausted,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Sat(_) => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::BudgetExhausted => "BUDGET",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SolveStatus::Sat(_))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub stats: SolveStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationEnd {
    /// The search space was exhausted; the list holds every solution.
    Complete,
    /// The cap was reached; more solutions may exist.
    CapReached,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub solutions: Vec<SudokuSolution>,
    pub end: EnumerationEnd,
    pub stats: SolveStats,
}

pub fn solve(instance: &SudokuInstance, config: &SolverConfig) -> SolveOutcome {
    let set = run(instance, config, 1);
    let status = match set.end {
        EnumerationEnd::BudgetExhausted => SolveStatus::BudgetExhausted,
        _ => match set.solutions.into_iter().next() {
            Some(s) => SolveStatus::Sat(s),
            None => SolveStatus::Unsat,
        },
    };
    SolveOutcome {
        status,
        stats: set.stats,
    }
}

/// Collects up to `cap` distinct solutions.
pub fn enumerate_solutions(instance: &SudokuInstance, cap: usize, config: &SolverConfig) -> SolutionSet {
    run(instance, config, cap.max(1))
}

fn run(instance: &SudokuInstance, config: &SolverConfig, cap: usize) -> SolutionSet {
    let start = Instant::now();
    let mut engine = Engine::new(instance, config, cap);
    let end = engine.start();
    let mut stats = engine.stats;
    stats.duration = start.elapsed();
    SolutionSet {
        solutions: engine.solutions,
        end,
        stats,
    }
}

enum Flow {
    Continue,
    Stop(EnumerationEnd),
}

struct Engine<'a> {
    instance: &'a SudokuInstance,
    constraints: &'a [Constraint],
    domains: Vec<u8>,
    watches: Vec<Vec<usize>>,
    trail: Vec<(VarId, u8)>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    order: Vec<VarId>,
    smallest_domain: bool,
    weighted: bool,
    weights: Vec<u64>,
    // constraints charged to each decision variable
    related: Vec<Vec<usize>>,
    budget: Option<u64>,
    cap: usize,
    solutions: Vec<SudokuSolution>,
    stats: SolveStats,
}

impl<'a> Engine<'a> {
    fn new(instance: &'a SudokuInstance, config: &SolverConfig, cap: usize) -> Self {
        let constraints = instance.constraints();
        let n = instance.num_vars();
        let mut watches = vec![Vec::new(); n];
        for (ci, c) in constraints.iter().enumerate() {
            for v in c.vars() {
                watches[v].push(ci);
            }
        }
        let mut order: Vec<VarId> = (0..2 * instance.pair_count()).collect();
        let related = order
            .iter()
            .map(|&v| {
                let mut cs = watches[v].clone();
                for &ci in &watches[v] {
                    if let ConstraintKind::LinearBinding { c, .. } = constraints[ci].kind {
                        cs.extend(watches[c].iter().copied().filter(|&cj| cj != ci));
                    }
                }
                cs.sort_unstable();
                cs.dedup();
                cs
            })
            .collect::<Vec<_>>();
        if let VariableOrder::Random(seed) = config.variable_order {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        Self {
            instance,
            constraints,
            domains: vec![0b111; n],
            watches,
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; constraints.len()],
            order,
            smallest_domain: config.variable_order == VariableOrder::SmallestDomain,
            weighted: config.variable_order == VariableOrder::WeightedDegree,
            weights: vec![1; constraints.len()],
            related,
            budget: config.step_budget,
            cap,
            solutions: Vec::new(),
            stats: SolveStats::default(),
        }
    }

    fn start(&mut self) -> EnumerationEnd {
        if self.instance.trivially_unsat().is_some() {
            return EnumerationEnd::Complete;
        }
        for ci in 0..self.constraints.len() {
            self.enqueue(ci);
        }
        if !self.propagate() {
            return EnumerationEnd::Complete;
        }
        match self.search() {
            Flow::Continue => EnumerationEnd::Complete,
            Flow::Stop(end) => end,
        }
    }

    fn enqueue(&mut self, ci: usize) {
        if !self.queued[ci] {
            self.queued[ci] = true;
            self.queue.push(ci);
        }
    }

    fn set_domain(&mut self, var: VarId, dom: u8) {
        self.trail.push((var, self.domains[var]));
        self.domains[var] = dom;
        for k in 0..self.watches[var].len() {
            let ci = self.watches[var][k];
            self.enqueue(ci);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, dom) = self.trail.pop().unwrap();
            self.domains[var] = dom;
        }
    }

    fn clear_queue(&mut self) {
        for ci in self.queue.drain(..) {
            self.queued[ci] = false;
        }
    }

    /// Runs revisions to a fixpoint. Returns `false` on a wipe-out.
    fn propagate(&mut self) -> bool {
        while let Some(ci) = self.queue.pop() {
            self.queued[ci] = false;
            self.stats.propagations += 1;
            if !self.revise(ci) {
                self.weights[ci] += 1;
                self.clear_queue();
                return false;
            }
        }
        true
    }

    fn revise(&mut self, ci: usize) -> bool {
        let constraints = self.constraints;
        let c = &constraints[ci];
        let mut vars = [0usize; 3];
        let arity = match &c.kind {
            ConstraintKind::FixZero(v) => {
                vars[0] = *v;
                1
            }
            ConstraintKind::LinearBinding { a, b, c, .. } => {
                vars = [*a, *b, *c];
                3
            }
            ConstraintKind::AllDifferent(vs) => {
                if vs.len() > 3 {
                    return false;
                }
                vars[..vs.len()].copy_from_slice(vs);
                vs.len()
            }
        };
        let doms: [u8; 3] = std::array::from_fn(|j| if j < arity { self.domains[vars[j]] } else { 1 });
        let mut support = [0u8; 3];
        for x in 0..3u8 {
            if doms[0] & (1 << x) == 0 {
                continue;
            }
            for y in 0..3u8 {
                if doms[1] & (1 << y) == 0 {
                    continue;
                }
                for z in 0..3u8 {
                    if doms[2] & (1 << z) == 0 {
                        continue;
                    }
                    if tuple_holds(&c.kind, arity, [x, y, z]) {
                        support[0] |= 1 << x;
                        support[1] |= 1 << y;
                        support[2] |= 1 << z;
                    }
                }
            }
        }
        for j in 0..arity {
            let narrowed = doms[j] & support[j];
            if narrowed == 0 {
                return false;
            }
            if narrowed != doms[j] {
                self.set_domain(vars[j], narrowed);
            }
        }
        true
    }

    fn pick(&self) -> Option<VarId> {
        if self.weighted {
            // minimize dom / wdeg, compared by cross-multiplication
            let mut best: Option<(u64, u64, VarId)> = None;
            for &v in &self.order {
                let size = self.domains[v].count_ones() as u64;
                if size < 2 {
                    continue;
                }
                let w: u64 = self.related[v].iter().map(|&ci| self.weights[ci]).sum();
                if best.is_none_or(|(bs, bw, _)| size * bw < bs * w) {
                    best = Some((size, w, v));
                }
            }
            best.map(|(_, _, v)| v)
        } else if self.smallest_domain {
            let mut best: Option<(u32, VarId)> = None;
            for &v in &self.order {
                let size = self.domains[v].count_ones();
                if size > 1 && best.is_none_or(|(s, _)| size < s) {
                    best = Some((size, v));
                    if size == 2 {
                        break;
                    }
                }
            }
            best.map(|(_, v)| v)
        } else {
            self.order.iter().copied().find(|&v| self.domains[v].count_ones() > 1)
        }
    }

    fn search(&mut self) -> Flow {
        let Some(var) = self.pick() else {
            return self.record();
        };
        let dom = self.domains[var];
        for value in 0..3u8 {
            if dom & (1 << value) == 0 {
                continue;
            }
            if self.budget.is_some_and(|b| self.stats.decisions >= b) {
                return Flow::Stop(EnumerationEnd::BudgetExhausted);
            }
            self.stats.decisions += 1;
            let mark = self.trail.len();
            self.set_domain(var, 1 << value);
            if self.propagate() {
                if let Flow::Stop(end) = self.search() {
                    self.undo_to(mark);
                    return Flow::Stop(end);
                }
            }
            self.undo_to(mark);
            self.stats.backtracks += 1;
        }
        Flow::Continue
    }

    fn record(&mut self) -> Flow {
        let values: Vec<u8> = self
            .domains
            .iter()
            .map(|&d| {
                debug_assert_eq!(d.count_ones(), 1);
                d.trailing_zeros() as u8
            })
            .collect();
        let solution = SudokuSolution::new(values);
        debug_assert!(check_solution(self.instance, &solution).unwrap().satisfied());
        self.solutions.push(solution);
        if self.solutions.len() >= self.cap {
            Flow::Stop(EnumerationEnd::CapReached)
        } else {
            Flow::Continue
        }
    }
}

fn tuple_holds(kind: &ConstraintKind, arity: usize, t: [u8; 3]) -> bool {
    match kind {
        ConstraintKind::FixZero(_) => t[0] == 0,
        ConstraintKind::LinearBinding { sign, .. } => {
            let lhs = match sign {
                Sign::Plus => (t[0] + t[1]) % 3,
                Sign::Minus => (t[0] + 3 - t[1]) % 3,
            };
            lhs == t[2]
        }
        ConstraintKind::AllDifferent(_) => match arity {
            1 => true,
            2 => t[0] != t[1],
            _ => t[0] != t[1] && t[0] != t[2] && t[1] != t[2],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::Pairing;
    use crate::sudoku::{apply_phi, encode};
    use crate::table::{build_table, build_table_with};

    fn t7() -> Pairing {
        Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap()
    }

    fn instance(key: u32) -> SudokuInstance {
        encode(&build_table(&t7(), key).unwrap())
    }

    #[test]
    fn demo_is_sat_and_solution_checks() {
        let inst = instance(1);
        let out = solve(&inst, &SolverConfig::default());
        let SolveStatus::Sat(sol) = out.status else {
            panic!("expected SAT");
        };
        assert!(check_solution(&inst, &sol).unwrap().satisfied());
        assert!(out.stats.decisions > 0);
    }

    #[test]
    fn inadmissible_keys_are_unsat() {
        for key in [0, 3, 5, 6] {
            let out = solve(&instance(key), &SolverConfig::default());
            assert_eq!(out.status, SolveStatus::Unsat, "key {key}");
        }
    }

    #[test]
    fn all_orders_agree() {
        for key in 0..7 {
            let inst = instance(key);
            let mut labels = Vec::new();
            for order in [
                VariableOrder::LinearIndex,
                VariableOrder::SmallestDomain,
                VariableOrder::WeightedDegree,
                VariableOrder::Random(3),
            ] {
                let cfg = SolverConfig {
                    variable_order: order,
                    ..Default::default()
                };
                labels.push(solve(&inst, &cfg).status.label());
            }
            assert!(labels.windows(2).all(|w| w[0] == w[1]), "key {key}: {labels:?}");
        }
    }

    #[test]
    fn enumeration_is_phi_closed_and_even() {
        let inst = instance(1);
        let set = enumerate_solutions(&inst, usize::MAX, &SolverConfig::default());
        assert_eq!(set.end, EnumerationEnd::Complete);
        assert!(!set.solutions.is_empty());
        assert_eq!(set.solutions.len() % 2, 0);
        let all: std::collections::HashSet<_> = set.solutions.iter().cloned().collect();
        assert_eq!(all.len(), set.solutions.len());
        for s in &set.solutions {
            assert!(all.contains(&apply_phi(s)));
        }
    }

    #[test]
    fn cap_and_budget() {
        let inst = instance(1);
        let one = enumerate_solutions(&inst, 1, &SolverConfig::default());
        assert_eq!(one.solutions.len(), 1);
        assert_eq!(one.end, EnumerationEnd::CapReached);

        let cfg = SolverConfig {
            step_budget: Some(0),
            ..Default::default()
        };
        assert_eq!(solve(&inst, &cfg).status, SolveStatus::BudgetExhausted);
        assert!(enumerate_solutions(&instance(0), 10, &SolverConfig::default()).solutions.is_empty());
    }

    #[test]
    fn oversize_weak_set_is_unsat() {
        let t13 = Pairing::from_tuples(13, &[(11, 10), (6, 4), (2, 12), (9, 5), (8, 3), (7, 1)]).unwrap();
        let inst = encode(&build_table_with(&t13, 3, true).unwrap());
        assert!(inst.trivially_unsat().is_some());
        assert_eq!(solve(&inst, &SolverConfig::default()).status, SolveStatus::Unsat);
    }

    #[test]
    fn deterministic_counters() {
        let inst = instance(2);
        let a = solve(&inst, &SolverConfig::default());
        let b = solve(&inst, &SolverConfig::default());
        assert_eq!(a.status, b.status);
        assert_eq!(
            (a.stats.decisions, a.stats.backtracks, a.stats.propagations),
            (b.stats.decisions, b.stats.backtracks, b.stats.propagations)
        );
    }
}
