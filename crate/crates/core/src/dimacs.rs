//! One-hot CNF export of Sudoku instances and a bridge to external SAT solvers.
//!
//! Ternary variable `i` with value `v` maps to boolean variable `3i + v + 1`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::Command;

use crate::error::{Error, Result};
use crate::solver::SolveStatus;
use crate::sudoku::{check_solution, ConstraintKind, SudokuInstance, SudokuSolution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub ternary_count: usize,
    /// Names of the ternary variables, emitted as comments.
    pub names: Vec<String>,
    pub clauses: Vec<Vec<i64>>,
}

pub fn literal(var: usize, value: u8) -> i64 {
    (3 * var + value as usize + 1) as i64
}

impl CnfDocument {
    pub fn boolean_count(&self) -> usize {
        3 * self.ternary_count
    }

    /// A document with `ternary_count` variables and only the one-hot clauses.
    pub fn one_hot(ternary_count: usize) -> Self {
        let mut clauses = Vec::with_capacity(4 * ternary_count);
        for v in 0..ternary_count {
            clauses.push((0..3).map(|x| literal(v, x)).collect());
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                clauses.push(vec![-literal(v, a), -literal(v, b)]);
            }
        }
        Self {
            ternary_count,
            names: (0..ternary_count).map(|i| format!("x{i}")).collect(),
            clauses,
        }
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "c {name} = {} {} {}", literal(i, 0), literal(i, 1), literal(i, 2));
        }
        let _ = writeln!(out, "p cnf {} {}", self.boolean_count(), self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// Checks a boolean model (index `k` holds the value of variable `k + 1`) against every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&lit| {
                let val = model.get(lit.unsigned_abs() as usize - 1).copied().unwrap_or(false);
                val == (lit > 0)
            })
        })
    }
}

pub fn export_dimacs(instance: &SudokuInstance) -> CnfDocument {
    let mut doc = CnfDocument::one_hot(instance.num_vars());
    doc.names = (0..instance.num_vars()).map(|i| instance.var_name(i)).collect();
    for c in instance.constraints() {
        if let ConstraintKind::FixZero(v) = c.kind {
            doc.clauses.push(vec![literal(v, 0)]);
            continue;
        }
        let vars = c.vars();
        let mut values = vec![0u8; instance.num_vars()];
        let combos = 3usize.pow(vars.len() as u32);
        for code in 0..combos {
            let mut rest = code;
            let mut tuple = Vec::with_capacity(vars.len());
            for &v in &vars {
                let x = (rest % 3) as u8;
                rest /= 3;
                values[v] = x;
                tuple.push((v, x));
            }
            if !c.holds(&values) {
                doc.clauses.push(tuple.iter().map(|&(v, x)| -literal(v, x)).collect());
            }
        }
    }
    doc
}

/// Parses DIMACS text. Variable names are recovered from `c name = a b c` comments when present.
pub fn parse_dimacs(text: &str) -> Result<CnfDocument> {
    let mut header: Option<(usize, usize)> = None;
    let mut names = Vec::new();
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(comment) = content.strip_prefix('c') {
            if let Some((name, _)) = comment.trim().split_once(" = ") {
                names.push(name.to_string());
            }
            continue;
        }
        if content.starts_with('p') {
            let f: Vec<&str> = content.split_whitespace().collect();
            if f.len() != 4 || f[1] != "cnf" {
                return Err(Error::Dimacs {
                    line,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Dimacs {
                    line,
                    msg: format!("bad count `{s}`"),
                })
            };
            header = Some((parse(f[2])?, parse(f[3])?));
            continue;
        }
        let Some((nvars, _)) = header else {
            return Err(Error::Dimacs {
                line,
                msg: "clause before header".into(),
            });
        };
        for tok in content.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| Error::Dimacs {
                line,
                msg: format!("bad literal `{tok}`"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > nvars {
                return Err(Error::Dimacs {
                    line,
                    msg: format!("literal {lit} exceeds {nvars} variables"),
                });
            } else {
                current.push(lit);
            }
        }
    }
    let Some((nvars, nclauses)) = header else {
        return Err(Error::Dimacs {
            line: 1,
            msg: "missing header".into(),
        });
    };
    if !current.is_empty() {
        return Err(Error::Dimacs {
            line: text.lines().count(),
            msg: "unterminated clause".into(),
        });
    }
    if clauses.len() != nclauses {
        return Err(Error::Dimacs {
            line: 1,
            msg: format!("header declares {nclauses} clauses, found {}", clauses.len()),
        });
    }
    if nvars % 3 != 0 {
        return Err(Error::Dimacs {
            line: 1,
            msg: "variable count is not a multiple of 3".into(),
        });
    }
    let ternary_count = nvars / 3;
    if names.len() != ternary_count {
        names = (0..ternary_count).map(|i| format!("x{i}")).collect();
    }
    Ok(CnfDocument {
        ternary_count,
        names,
        clauses,
    })
}

/// Decodes a boolean model (index `k` holds variable `k + 1`) into ternary values.
pub fn import_dimacs_model(document: &CnfDocument, booleans: &[bool]) -> Result<SudokuSolution> {
    let mut values = Vec::with_capacity(document.ternary_count);
    for var in 0..document.ternary_count {
        let bits: Vec<u8> = (0..3u8)
            .filter(|&x| booleans.get(literal(var, x) as usize - 1).copied().unwrap_or(false))
            .collect();
        match bits[..] {
            [x] => values.push(x),
            _ => return Err(Error::NotOneHot(var)),
        }
    }
    Ok(SudokuSolution::new(values))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalStatus {
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

/// Parses SAT-competition output: `s ...` status line, `v ...` model lines, `c` comments.
pub fn parse_solver_output(text: &str, nvars: usize) -> Result<ExternalStatus> {
    let mut status = None;
    let mut model = vec![false; nvars];
    for raw in text.lines() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                other => {
                    return Err(Error::ExternalSolver(format!("unexpected status `{other}`")));
                }
            });
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::ExternalSolver(format!("bad model literal `{tok}`")))?;
                let idx = lit.unsigned_abs() as usize;
                if idx >= 1 && idx <= nvars {
                    model[idx - 1] = lit > 0;
                }
            }
        }
    }
    Ok(match status {
        Some(true) => ExternalStatus::Sat(model),
        Some(false) => ExternalStatus::Unsat,
        None => ExternalStatus::Unknown,
    })
}

/// Runs `template` through `sh -c`, substituting `{cnf}` with the CNF path
/// (appended when the placeholder is absent).
pub fn run_external(document: &CnfDocument, template: &str) -> Result<ExternalStatus> {
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(document.to_dimacs_string().as_bytes())?;
    file.flush()?;
    let path = file.path().display().to_string();
    let command = if template.contains("{cnf}") {
        template.replace("{cnf}", &path)
    } else {
        format!("{template} {path}")
    };
    let output = Command::new("sh").arg("-c").arg(&command).output()?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    let status = parse_solver_output(&stdout, document.boolean_count())?;
    if status == ExternalStatus::Unknown {
        return Err(Error::ExternalSolver(format!(
            "no status line from `{command}` (exit {:?})",
            output.status.code()
        )));
    }
    Ok(status)
}

/// Solves `instance` with an external solver and validates any model it returns.
pub fn solve_external(instance: &SudokuInstance, template: &str) -> Result<SolveStatus> {
    let doc = export_dimacs(instance);
    match run_external(&doc, template)? {
        ExternalStatus::Sat(model) => {
            let sol = import_dimacs_model(&doc, &model)?;
            if !check_solution(instance, &sol)?.satisfied() {
                return Err(Error::ExternalSolver("returned model violates the instance".into()));
            }
            Ok(SolveStatus::Sat(sol))
        }
        ExternalStatus::Unsat => Ok(SolveStatus::Unsat),
        ExternalStatus::Unknown => Err(Error::ExternalSolver("unknown status".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::Pairing;
    use crate::sudoku::encode;
    use crate::table::build_table;

    fn demo() -> SudokuInstance {
        let t = Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap();
        encode(&build_table(&t, 1).unwrap())
    }

    #[test]
    fn single_variable_one_hot() {
        let doc = CnfDocument::one_hot(1);
        assert_eq!(doc.boolean_count(), 3);
        assert_eq!(doc.clauses, vec![vec![1, 2, 3], vec![-1, -2], vec![-1, -3], vec![-2, -3]]);
    }

    #[test]
    fn text_round_trip() {
        let doc = export_dimacs(&demo());
        let text = doc.to_dimacs_string();
        assert!(text.contains(&format!("p cnf {} {}\n", doc.boolean_count(), doc.clauses.len())));
        assert_eq!(parse_dimacs(&text).unwrap(), doc);
    }

    #[test]
    fn clause_counts() {
        let inst = demo();
        let doc = export_dimacs(&inst);
        let c = inst.census();
        let expected = 4 * inst.num_vars()
            + c.fix_zero
            + 18 * (c.difference_bindings + c.sum_bindings)
            + inst
                .constraints()
                .iter()
                .filter_map(|k| match &k.kind {
                    ConstraintKind::AllDifferent(v) => Some(match v.len() {
                        2 => 3,
                        3 => 21,
                        _ => unreachable!(),
                    }),
                    _ => None,
                })
                .sum::<usize>();
        assert_eq!(doc.clauses.len(), expected);
    }

    #[test]
    fn decode_models() {
        let doc = CnfDocument::one_hot(2);
        let sol = import_dimacs_model(&doc, &[false, true, false, false, false, true]).unwrap();
        assert_eq!(sol.values, vec![1, 2]);
        assert!(matches!(
            import_dimacs_model(&doc, &[true, true, false, false, false, true]),
            Err(Error::NotOneHot(0))
        ));
        assert!(matches!(
            import_dimacs_model(&doc, &[false, true, false, false, false, false]),
            Err(Error::NotOneHot(1))
        ));
    }

    #[test]
    fn native_solution_satisfies_cnf() {
        let inst = demo();
        let doc = export_dimacs(&inst);
        let Some(sol) = (match crate::solver::solve(&inst, &Default::default()).status {
            SolveStatus::Sat(s) => Some(s),
            _ => None,
        }) else {
            panic!("demo is SAT");
        };
        let mut model = vec![false; doc.boolean_count()];
        for (v, &x) in sol.values.iter().enumerate() {
            model[literal(v, x) as usize - 1] = true;
        }
        assert!(doc.satisfied_by(&model));
        assert_eq!(import_dimacs_model(&doc, &model).unwrap(), sol);
    }

    #[test]
    fn solver_output_parsing() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2 -3\nv -4 5 -6 0\n";
        assert_eq!(
            parse_solver_output(out, 6).unwrap(),
            ExternalStatus::Sat(vec![true, false, false, false, true, false])
        );
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), ExternalStatus::Unsat);
        assert_eq!(parse_solver_output("c nothing\n", 3).unwrap(), ExternalStatus::Unknown);
    }

    #[test]
    fn malformed_dimacs() {
        assert!(matches!(parse_dimacs("1 2 0\n"), Err(Error::Dimacs { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 x 0\n"), Err(Error::Dimacs { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 4 0\n"), Err(Error::Dimacs { line: 2, .. })));
    }

    #[test]
    fn shell_stub_solver() {
        let doc = CnfDocument::one_hot(1);
        let st = run_external(&doc, "test -s {cnf} && printf 's SATISFIABLE\\nv -1 2 -3 0\\n'").unwrap();
        assert_eq!(st, ExternalStatus::Sat(vec![false, true, false]));
        assert!(run_external(&doc, "true").is_err());
    }
}
