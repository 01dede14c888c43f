use std::path::PathBuf;

use starter_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    /// A problem with a named input file.
    #[error("{}", input_message(.path, .source))]
    Input { path: PathBuf, source: Error },

    #[error("{0}")]
    Core(#[from] Error),

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

fn input_message(path: &PathBuf, source: &Error) -> String {
    match source {
        Error::Parse { line, msg } | Error::Dimacs { line, msg } => {
            format!("{}:{line}: {msg}", path.display())
        }
        other => format!("{}: {other}", path.display()),
    }
}

impl CliError {
    /// 1 for a refusal grounded in the mathematics, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Input { source, .. } => source,
            CliError::Core(e) => e,
            CliError::Output { .. } => return 2,
        };
        match core {
            Error::InadmissibleKey { .. }
            | Error::NotStrong
            | Error::NotAStarter
            | Error::NoStrongStarter(_)
            | Error::AboveEnumerationBound { .. }
            | Error::HillClimbExhausted { .. } => 1,
            _ => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_are_line_anchored() {
        let e = CliError::Input {
            path: "s.txt".into(),
            source: Error::Parse { line: 4, msg: "bad pair".into() },
        };
        assert_eq!(e.to_string(), "s.txt:4: bad pair");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn refusals_exit_one() {
        let e = CliError::Core(Error::InadmissibleKey { key: 0, reason: "key is zero".into() });
        assert_eq!(e.exit_code(), 1);
        assert_eq!(CliError::Core(Error::NotStrong).exit_code(), 1);
        assert_eq!(CliError::Core(Error::KeyOutOfRange { key: 9, order: 7 }).exit_code(), 2);
    }
}
