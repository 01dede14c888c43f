//! Full triplication: base of order `p` plus key to a pair of strong starters of order `3p`.

use serde::{Deserialize, Serialize};

use crate::crt::{crt_merge, Variant};
use crate::error::{Error, Result};
use crate::format::StarterRecord;
use crate::pairing::{OrderedPair, Pairing};
use crate::solver::{solve, SolveStats, SolveStatus, SolverConfig};
use crate::sudoku::{encode, Provenance, SudokuInstance, SudokuSolution};
use crate::table::{build_table_with, check_key_admissible, KeyRejection, TriplicationTable};
use crate::verify::{verify_pairing, VerificationReport};

#[derive(Clone, Copy, Debug, Default)]
pub struct TriplicateOptions {
    pub config: SolverConfig,
    /// Run even when the key is known to be inadmissible.
    pub force: bool,
    /// Accept bases that are not strong starters (or not starters at all).
    pub allow_nonstrong: bool,
}

#[derive(Clone, Debug)]
pub struct TriplicationResult {
    pub starter_a: Pairing,
    /// The image of `starter_a` under the value swap `1 <-> 2` mod 3.
    pub starter_b: Pairing,
    pub table: TriplicationTable,
    pub instance: SudokuInstance,
    pub solution: SudokuSolution,
    pub reports: [VerificationReport; 2],
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnsatCause {
    Key { rejection: KeyRejection, message: String },
    OversizeWeakSet { sum: u32, members: Vec<usize> },
}

impl std::fmt::Display for UnsatCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnsatCause::Key { message, .. } => f.write_str(message),
            UnsatCause::OversizeWeakSet { sum, members } => {
                write!(f, "weak set of sum {sum} has {} members {members:?}", members.len())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum PipelineOutcome {
    Sat(Box<TriplicationResult>),
    Unsat {
        table: TriplicationTable,
        /// `None` when unsatisfiability was established by search alone.
        cause: Option<UnsatCause>,
        stats: SolveStats,
    },
    BudgetExhausted {
        table: TriplicationTable,
        stats: SolveStats,
    },
}

impl PipelineOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            PipelineOutcome::Sat(_) => "SAT",
            PipelineOutcome::Unsat { .. } => "UNSAT",
            PipelineOutcome::BudgetExhausted { .. } => "BUDGET",
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            PipelineOutcome::Sat(r) => &r.stats,
            PipelineOutcome::Unsat { stats, .. } | PipelineOutcome::BudgetExhausted { stats, .. } => stats,
        }
    }

    pub fn table(&self) -> &TriplicationTable {
        match self {
            PipelineOutcome::Sat(r) => &r.table,
            PipelineOutcome::Unsat { table, .. } | PipelineOutcome::BudgetExhausted { table, .. } => table,
        }
    }

    pub fn result(&self) -> Option<&TriplicationResult> {
        match self {
            PipelineOutcome::Sat(r) => Some(r),
            _ => None,
        }
    }
}

pub fn triplicate(base: &Pairing, key: u32, options: &TriplicateOptions) -> Result<PipelineOutcome> {
    let base_report = verify_pairing(base);
    if !options.allow_nonstrong {
        if !base_report.is_starter {
            return Err(Error::NotAStarter);
        }
        if !base_report.is_strong {
            return Err(Error::NotStrong);
        }
    }
    let table = build_table_with(base, key, options.allow_nonstrong)?;
    let key_cause = match check_key_admissible(base, key) {
        Ok(()) => None,
        Err(rejection) if !options.force => {
            return Err(Error::InadmissibleKey {
                key,
                reason: rejection.to_string(),
            })
        }
        Err(rejection) => Some(UnsatCause::Key {
            rejection,
            message: rejection.to_string(),
        }),
    };

    let instance = encode(&table);
    if let Some(trivial) = instance.trivially_unsat() {
        let cause = match trivial.provenance {
            Provenance::WeakSet { sum } => {
                let members = instance
                    .weak_sets()
                    .iter()
                    .find(|w| w.sum == sum)
                    .map(|w| w.members.clone())
                    .unwrap_or_default();
                Some(UnsatCause::OversizeWeakSet { sum, members })
            }
            _ => key_cause,
        };
        return Ok(PipelineOutcome::Unsat {
            table,
            cause,
            stats: SolveStats::default(),
        });
    }

    let outcome = solve(&instance, &options.config);
    let solution = match outcome.status {
        SolveStatus::Sat(s) => s,
        SolveStatus::Unsat => {
            return Ok(PipelineOutcome::Unsat {
                table,
                cause: key_cause,
                stats: outcome.stats,
            })
        }
        SolveStatus::BudgetExhausted => {
            return Ok(PipelineOutcome::BudgetExhausted {
                table,
                stats: outcome.stats,
            })
        }
    };

    let starter_a = crt_merge(&instance, &solution, Variant::Identity)?;
    let starter_b = crt_merge(&instance, &solution, Variant::Phi)?;
    let reports = [verify_pairing(&starter_a), verify_pairing(&starter_b)];
    if base_report.is_strong && !(reports[0].is_strong && reports[1].is_strong) {
        return Err(Error::Internal(format!(
            "merged pairing for key {key} is not a strong starter: {starter_a}"
        )));
    }
    Ok(PipelineOutcome::Sat(Box::new(TriplicationResult {
        starter_a,
        starter_b,
        table,
        instance,
        solution,
        reports,
        stats: outcome.stats,
    })))
}

/// Structured record of one pipeline run, serialized as JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub base: StarterRecord,
    pub key: u32,
    pub extension: Vec<OrderedPair>,
    pub status: String,
    pub cause: Option<UnsatCause>,
    /// `(U_i, V_i)` per extension entry.
    pub solution: Option<Vec<(u8, u8)>>,
    pub starter_a: Option<StarterRecord>,
    pub starter_b: Option<StarterRecord>,
    pub starter_a_strong: Option<bool>,
    pub starter_b_strong: Option<bool>,
    pub decisions: u64,
    pub backtracks: u64,
    pub solve_ms: u128,
}

impl PipelineReport {
    pub fn new(outcome: &PipelineOutcome) -> Self {
        let table = outcome.table();
        let stats = outcome.stats();
        let result = outcome.result();
        Self {
            base: table.base().into(),
            key: table.key(),
            extension: table.extension().to_vec(),
            status: outcome.label().to_string(),
            cause: match outcome {
                PipelineOutcome::Unsat { cause, .. } => cause.clone(),
                _ => None,
            },
            solution: result.map(|r| r.solution.uv(&r.instance)),
            starter_a: result.map(|r| (&r.starter_a).into()),
            starter_b: result.map(|r| (&r.starter_b).into()),
            starter_a_strong: result.map(|r| r.reports[0].is_strong),
            starter_b_strong: result.map(|r| r.reports[1].is_strong),
            decisions: stats.decisions,
            backtracks: stats.backtracks,
            solve_ms: stats.duration.as_millis(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
