pub mod crt;
pub mod dimacs;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod harness;
pub mod hillclimb;
pub mod inverse;
pub mod pairing;
pub mod pipeline;
pub mod solver;
pub mod sudoku;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use pairing::{OrderedPair, Pairing, ReducedTuple};
pub use solver::{solve, SolveOutcome, SolveStatus, SolverConfig, VariableOrder};
pub use sudoku::{check_solution, encode, SudokuInstance, SudokuSolution};
pub use table::{build_table, TriplicationTable};
pub use verify::{verify_pairing, VerificationReport};
