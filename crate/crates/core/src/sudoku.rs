//! The modular Sudoku: ternary unknowns `U_i, V_i` attached to a triplication
//! table, auxiliary differences `D_i`, weak sums `S_i`, and a dummy `Z = 0`.
//!
//! Variable ids are laid out densely: `U_i = 2i`, `V_i = 2i + 1` for every
//! pair index, then `D_0..`, then one `S` per weak index (ascending), then `Z`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Position, TriplicationTable, WeakSet};

pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    U,
    V,
    D,
    S,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryVariable {
    pub id: VarId,
    pub role: Role,
    /// Pair index; `None` only for `Z`.
    pub index: Option<usize>,
}

impl fmt::Display for TernaryVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{:?}_{i}", self.role),
            None => write!(f, "{:?}", self.role),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintKind {
    FixZero(VarId),
    /// `a ± b - c ≡ 0 (mod 3)`.
    LinearBinding { a: VarId, b: VarId, sign: Sign, c: VarId },
    AllDifferent(Vec<VarId>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Dummy,
    DifferenceBinding { pair: usize },
    SumBinding { pair: usize },
    Row { row: usize },
    WeakSet { sum: u32 },
    Color { color: u32 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Dummy => write!(f, "Z = 0"),
            Provenance::DifferenceBinding { pair } => write!(f, "D_{pair} = U_{pair} - V_{pair}"),
            Provenance::SumBinding { pair } => write!(f, "S_{pair} = U_{pair} + V_{pair}"),
            Provenance::Row { row } => write!(f, "row {row}"),
            Provenance::WeakSet { sum } => write!(f, "weak set with sum {sum}"),
            Provenance::Color { color } => write!(f, "color {color}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub provenance: Provenance,
}

impl Constraint {
    pub fn vars(&self) -> Vec<VarId> {
        match &self.kind {
            ConstraintKind::FixZero(v) => vec![*v],
            ConstraintKind::LinearBinding { a, b, c, .. } => vec![*a, *b, *c],
            ConstraintKind::AllDifferent(vs) => vs.clone(),
        }
    }

    /// Evaluates the constraint on a total assignment.
    pub fn holds(&self, values: &[u8]) -> bool {
        match &self.kind {
            ConstraintKind::FixZero(v) => values[*v] == 0,
            ConstraintKind::LinearBinding { a, b, sign, c } => {
                let (a, b, c) = (values[*a], values[*b], values[*c]);
                let lhs = match sign {
                    Sign::Plus => (a + b) % 3,
                    Sign::Minus => (a + 3 - b) % 3,
                };
                lhs == c
            }
            ConstraintKind::AllDifferent(vs) => {
                let mut seen = 0u8;
                for &v in vs {
                    let bit = 1 << values[v];
                    if seen & bit != 0 {
                        return false;
                    }
                    seen |= bit;
                }
                true
            }
        }
    }
}

/// Constraint counts by class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub fix_zero: usize,
    pub difference_bindings: usize,
    pub sum_bindings: usize,
    pub rows: usize,
    pub weak_zero: usize,
    pub weak_nonzero: usize,
    pub colors: usize,
}

/// Why an instance cannot have a solution before any search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialUnsat {
    pub constraint: usize,
    pub provenance: Provenance,
    pub arity: usize,
}

impl fmt::Display for TrivialUnsat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} requires {} distinct values mod 3",
            self.provenance, self.arity
        )
    }
}

#[derive(Clone, Debug)]
pub struct SudokuInstance {
    table: TriplicationTable,
    weak_sets: Vec<WeakSet>,
    variables: Vec<TernaryVariable>,
    constraints: Vec<Constraint>,
    s_ids: Vec<Option<VarId>>,
    trivially_unsat: Option<TrivialUnsat>,
}

impl SudokuInstance {
    pub fn table(&self) -> &TriplicationTable {
        &self.table
    }

    pub fn weak_sets(&self) -> &[WeakSet] {
        &self.weak_sets
    }

    pub fn variables(&self) -> &[TernaryVariable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    /// Number of pairs in the extension, `3q + 1`.
    pub fn pair_count(&self) -> usize {
        self.table.len()
    }

    pub fn u(&self, i: usize) -> VarId {
        2 * i
    }

    pub fn v(&self, i: usize) -> VarId {
        2 * i + 1
    }

    pub fn d(&self, i: usize) -> VarId {
        2 * self.pair_count() + i
    }

    pub fn s(&self, i: usize) -> Option<VarId> {
        self.s_ids[i]
    }

    pub fn z(&self) -> VarId {
        self.variables.len() - 1
    }

    /// Variable for an entry position; the dummy maps to `Z`.
    pub fn var_at(&self, pos: Position) -> VarId {
        match pos {
            Position::Entry { pair, slot: 0 } => self.u(pair),
            Position::Entry { pair, .. } => self.v(pair),
            Position::Dummy => self.z(),
        }
    }

    /// Set when some all-different constraint has more than three variables.
    pub fn trivially_unsat(&self) -> Option<&TrivialUnsat> {
        self.trivially_unsat.as_ref()
    }

    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for con in &self.constraints {
            match con.provenance {
                Provenance::Dummy => c.fix_zero += 1,
                Provenance::DifferenceBinding { .. } => c.difference_bindings += 1,
                Provenance::SumBinding { .. } => c.sum_bindings += 1,
                Provenance::Row { .. } => c.rows += 1,
                Provenance::WeakSet { sum: 0 } => c.weak_zero += 1,
                Provenance::WeakSet { .. } => c.weak_nonzero += 1,
                Provenance::Color { .. } => c.colors += 1,
            }
        }
        c
    }

    pub fn var_name(&self, id: VarId) -> String {
        self.variables[id].to_string()
    }
}

/// Encodes the zero pin, the binding constraints and the all-different constraints of `table`.
pub fn encode(table: &TriplicationTable) -> SudokuInstance {
    let len = table.len();
    let weak_sets = table.compute_weak_sets();
    let monochrome = table.compute_monochrome_sets();

    let mut variables = Vec::with_capacity(3 * len + 8);
    for i in 0..len {
        variables.push(TernaryVariable { id: 2 * i, role: Role::U, index: Some(i) });
        variables.push(TernaryVariable { id: 2 * i + 1, role: Role::V, index: Some(i) });
    }
    for i in 0..len {
        variables.push(TernaryVariable { id: 2 * len + i, role: Role::D, index: Some(i) });
    }
    let mut weak_indices: Vec<usize> = weak_sets.iter().flat_map(|w| w.members.iter().copied()).collect();
    weak_indices.sort_unstable();
    let mut s_ids = vec![None; len];
    for &i in &weak_indices {
        let id = variables.len();
        s_ids[i] = Some(id);
        variables.push(TernaryVariable { id, role: Role::S, index: Some(i) });
    }
    let z = variables.len();
    variables.push(TernaryVariable { id: z, role: Role::Z, index: None });

    let mut constraints = Vec::new();
    constraints.push(Constraint {
        kind: ConstraintKind::FixZero(z),
        provenance: Provenance::Dummy,
    });
    for i in 0..len {
        constraints.push(Constraint {
            kind: ConstraintKind::LinearBinding { a: 2 * i, b: 2 * i + 1, sign: Sign::Minus, c: 2 * len + i },
            provenance: Provenance::DifferenceBinding { pair: i },
        });
    }
    for &i in &weak_indices {
        constraints.push(Constraint {
            kind: ConstraintKind::LinearBinding {
                a: 2 * i,
                b: 2 * i + 1,
                sign: Sign::Plus,
                c: s_ids[i].unwrap(),
            },
            provenance: Provenance::SumBinding { pair: i },
        });
    }
    for row in 1..=table.q() {
        let vars = TriplicationTable::row_indices(row).map(|i| 2 * len + i).to_vec();
        constraints.push(Constraint {
            kind: ConstraintKind::AllDifferent(vars),
            provenance: Provenance::Row { row },
        });
    }
    for w in &weak_sets {
        let mut vars: Vec<VarId> = w.members.iter().map(|&i| s_ids[i].unwrap()).collect();
        if w.sum == 0 {
            vars.push(z);
        }
        constraints.push(Constraint {
            kind: ConstraintKind::AllDifferent(vars),
            provenance: Provenance::WeakSet { sum: w.sum },
        });
    }
    for m in &monochrome.sets {
        let vars = m
            .positions
            .iter()
            .map(|&pos| match pos {
                Position::Entry { pair, slot: 0 } => 2 * pair,
                Position::Entry { pair, .. } => 2 * pair + 1,
                Position::Dummy => z,
            })
            .collect();
        constraints.push(Constraint {
            kind: ConstraintKind::AllDifferent(vars),
            provenance: Provenance::Color { color: m.color },
        });
    }

    let trivially_unsat = constraints.iter().enumerate().find_map(|(idx, c)| match &c.kind {
        ConstraintKind::AllDifferent(vs) if vs.len() > 3 => Some(TrivialUnsat {
            constraint: idx,
            provenance: c.provenance,
            arity: vs.len(),
        }),
        _ => None,
    });

    SudokuInstance {
        table: table.clone(),
        weak_sets,
        variables,
        constraints,
        s_ids,
        trivially_unsat,
    }
}

/// A total assignment of values in `{0, 1, 2}`, indexed by variable id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SudokuSolution {
    pub values: Vec<u8>,
}

impl SudokuSolution {
    pub fn new(values: Vec<u8>) -> Self {
        Self { values }
    }

    /// Builds the full assignment from the `(U_i, V_i)` tuple, deriving `D`, `S` and `Z`.
    pub fn from_uv(instance: &SudokuInstance, uv: &[(u8, u8)]) -> Result<Self> {
        if uv.len() != instance.pair_count() {
            return Err(Error::PartialAssignment(2 * uv.len().min(instance.pair_count())));
        }
        let mut values = vec![0u8; instance.num_vars()];
        for (i, &(u, v)) in uv.iter().enumerate() {
            for (id, x) in [(instance.u(i), u), (instance.v(i), v)] {
                if x > 2 {
                    return Err(Error::BadTernaryValue { var: id, value: x });
                }
                values[id] = x;
            }
            values[instance.d(i)] = (u + 3 - v) % 3;
            if let Some(s) = instance.s(i) {
                values[s] = (u + v) % 3;
            }
        }
        values[instance.z()] = 0;
        Ok(Self { values })
    }

    /// The `(U_i, V_i)` part.
    pub fn uv(&self, instance: &SudokuInstance) -> Vec<(u8, u8)> {
        (0..instance.pair_count())
            .map(|i| (self.values[instance.u(i)], self.values[instance.v(i)]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    /// Indices into `instance.constraints()` of every violated constraint.
    pub violated: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

impl CheckReport {
    pub fn satisfied(&self) -> bool {
        self.violated.is_empty()
    }
}

pub fn check_solution(instance: &SudokuInstance, candidate: &SudokuSolution) -> Result<CheckReport> {
    if candidate.values.len() < instance.num_vars() {
        return Err(Error::PartialAssignment(candidate.values.len()));
    }
    if let Some((var, &value)) = candidate.values.iter().enumerate().find(|(_, &x)| x > 2) {
        return Err(Error::BadTernaryValue { var, value });
    }
    let mut report = CheckReport {
        violated: Vec::new(),
        provenance: Vec::new(),
    };
    for (idx, c) in instance.constraints.iter().enumerate() {
        if !c.holds(&candidate.values) {
            report.violated.push(idx);
            report.provenance.push(c.provenance);
        }
    }
    Ok(report)
}

/// The value map `0 -> 0, 1 -> 2, 2 -> 1`, applied to every variable.
pub fn apply_phi(candidate: &SudokuSolution) -> SudokuSolution {
    SudokuSolution {
        values: candidate.values.iter().map(|&x| phi(x)).collect(),
    }
}

pub fn phi(x: u8) -> u8 {
    (3 - x) % 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::Pairing;
    use crate::table::build_table;

    fn demo() -> SudokuInstance {
        let t = Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap();
        encode(&build_table(&t, 1).unwrap())
    }

    const DEMO_RESIDUES: [(u8, u8); 10] = [
        (1, 2),
        (1, 0),
        (2, 0),
        (1, 1),
        (2, 2),
        (0, 2),
        (0, 1),
        (0, 2),
        (2, 0),
        (1, 1),
    ];

    #[test]
    fn demo_census() {
        let inst = demo();
        // 20 U/V + 10 D + 7 S + Z
        assert_eq!(inst.num_vars(), 38);
        let c = inst.census();
        assert_eq!(
            c,
            Census {
                fix_zero: 1,
                difference_bindings: 10,
                sum_bindings: 7,
                rows: 3,
                weak_zero: 1,
                weak_nonzero: 3,
                colors: 7,
            }
        );
        assert!(inst.trivially_unsat().is_none());
        let s_indices: Vec<usize> = (0..10).filter(|&i| inst.s(i).is_some()).collect();
        assert_eq!(s_indices, vec![1, 2, 4, 5, 6, 7, 9]);
    }

    #[test]
    fn demo_constraints_match_listing() {
        let inst = demo();
        let find = |p: Provenance| {
            inst.constraints()
                .iter()
                .find(|c| c.provenance == p)
                .map(|c| c.vars())
                .unwrap()
        };
        let names = |vs: Vec<VarId>| vs.into_iter().map(|v| inst.var_name(v)).collect::<Vec<_>>();
        assert_eq!(names(find(Provenance::Color { color: 0 })), ["V_5", "V_9", "Z"]);
        assert_eq!(names(find(Provenance::Color { color: 1 })), ["U_0", "V_0", "U_7"]);
        assert_eq!(names(find(Provenance::Color { color: 4 })), ["V_2", "U_4", "V_6"]);
        assert_eq!(names(find(Provenance::WeakSet { sum: 0 })), ["S_2", "Z"]);
        assert_eq!(names(find(Provenance::WeakSet { sum: 3 })), ["S_4", "S_9"]);
        assert_eq!(names(find(Provenance::Row { row: 2 })), ["D_4", "D_5", "D_6"]);
    }

    #[test]
    fn known_residues_satisfy_demo() {
        let inst = demo();
        let sol = SudokuSolution::from_uv(&inst, &DEMO_RESIDUES).unwrap();
        assert!(check_solution(&inst, &sol).unwrap().satisfied());
        assert_eq!(sol.uv(&inst), DEMO_RESIDUES.to_vec());
    }

    #[test]
    fn all_zero_violates_color_zero() {
        let inst = demo();
        let sol = SudokuSolution::new(vec![0; inst.num_vars()]);
        let report = check_solution(&inst, &sol).unwrap();
        assert!(!report.satisfied());
        assert!(report.provenance.contains(&Provenance::Color { color: 0 }));
    }

    #[test]
    fn partial_assignment_is_structural_error() {
        let inst = demo();
        let sol = SudokuSolution::new(vec![0; 5]);
        assert!(matches!(check_solution(&inst, &sol), Err(Error::PartialAssignment(5))));
    }

    #[test]
    fn phi_maps_values_and_is_an_involution() {
        let inst = demo();
        let sol = SudokuSolution::from_uv(&inst, &DEMO_RESIDUES).unwrap();
        let image = apply_phi(&sol);
        assert_eq!(image.uv(&inst)[0], (2, 1));
        assert_eq!(image.values[inst.z()], 0);
        assert_eq!(apply_phi(&image), sol);
        assert!(check_solution(&inst, &image).unwrap().satisfied());
        let zeros = SudokuSolution::new(vec![0; 4]);
        assert_eq!(apply_phi(&zeros), zeros);
    }

    #[test]
    fn s_variables_exist_exactly_for_weak_indices() {
        let inst = demo();
        let weak: Vec<usize> = inst.weak_sets().iter().flat_map(|w| w.members.clone()).collect();
        for i in 0..inst.pair_count() {
            assert_eq!(inst.s(i).is_some(), weak.contains(&i));
        }
    }
}
