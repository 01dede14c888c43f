use std::fs::{self, File};
use std::path::{Path, PathBuf};

use starter_core::dimacs::{export_dimacs, solve_external};
use starter_core::enumerate::{enumerate_strong_starters, EnumerationOptions};
use starter_core::format::{read_starter, read_starters, to_json, write_starters};
use starter_core::harness::{
    run_inverse_sampling, run_key_sweep, run_order_sweep, run_repeat_subseries, write_means_csv,
    write_records_csv,
};
use starter_core::hillclimb::hill_climb;
use starter_core::inverse::inverse_test;
use starter_core::pipeline::{triplicate, PipelineOutcome, PipelineReport, TriplicateOptions};
use starter_core::{build_table, encode, solve, verify_pairing, Pairing, SolveStatus, SudokuInstance};

use crate::error::CliError;
use crate::{Command, Job, SeriesMode};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Verify { starter } => verify(&starter),
        Command::Enumerate { order, out } => enumerate(order, out.as_deref()),
        Command::Hillclimb { order, seed, samples, out } => hillclimb(order, seed, samples, out.as_deref()),
        Command::Triplicate { job, out, force, allow_nonstrong, solver } => {
            let base = load_starter(&job.base)?;
            let options = TriplicateOptions {
                config: solver.config(),
                force,
                allow_nonstrong,
            };
            let outcome = triplicate(&base, job.key, &options)?;
            write_triplication(&outcome, &out)
        }
        Command::Encode { job, cnf_out } => {
            let instance = load_instance(&job)?;
            let doc = export_dimacs(&instance);
            write_file(&cnf_out, &doc.to_dimacs_string())?;
            let c = instance.census();
            println!(
                "variables {} constraints {} booleans {} clauses {}",
                instance.num_vars(),
                instance.constraints().len(),
                doc.boolean_count(),
                doc.clauses.len()
            );
            println!(
                "rows {} weak_zero {} weak_nonzero {} colors {}",
                c.rows, c.weak_zero, c.weak_nonzero, c.colors
            );
            Ok(())
        }
        Command::Solve { job, external_solver, cnf_out, solver } => {
            let instance = load_instance(&job)?;
            if let Some(path) = &cnf_out {
                write_file(path, &export_dimacs(&instance).to_dimacs_string())?;
            }
            let status = match &external_solver {
                Some(template) => solve_external(&instance, template)?,
                None => {
                    let outcome = solve(&instance, &solver.config());
                    let s = &outcome.stats;
                    println!(
                        "decisions {} backtracks {} solve_ms {}",
                        s.decisions,
                        s.backtracks,
                        s.duration.as_millis()
                    );
                    outcome.status
                }
            };
            print_status(&instance, &status);
            Ok(())
        }
        Command::Invert { starter, out } => invert(&starter, out.as_deref()),
        Command::Series { mode } => series(mode),
    }
}

fn load_starter(path: &Path) -> Result<Pairing> {
    read_starter(path).map_err(|source| CliError::Input { path: path.into(), source })
}

fn load_instance(job: &Job) -> Result<SudokuInstance> {
    let base = load_starter(&job.base)?;
    Ok(encode(&build_table(&base, job.key)?))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Output { path: path.into(), source })
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| CliError::Output { path: path.into(), source })
}

fn verify(path: &Path) -> Result<()> {
    let starters = read_starters(path).map_err(|source| CliError::Input { path: path.into(), source })?;
    for (i, s) in starters.iter().enumerate() {
        let report = verify_pairing(s);
        let label = if report.is_strong {
            "strong starter"
        } else if report.is_starter {
            "starter, not strong"
        } else if report.is_partition {
            "partition, not a starter"
        } else {
            "not a partition"
        };
        println!("#{i} order {}: {label}", s.modulus());
        for d in &report.diagnostics {
            println!("  {d}");
        }
    }
    Ok(())
}

fn enumerate(order: u32, out: Option<&Path>) -> Result<()> {
    let options = EnumerationOptions {
        cap: if out.is_some() { None } else { Some(0) },
        ..Default::default()
    };
    let found = enumerate_strong_starters(order, options)?;
    println!("order {} strong starters {}", order, found.count);
    if let Some(path) = out {
        write_starters(path, &found.starters).map_err(|source| CliError::Input { path: path.into(), source })?;
    }
    Ok(())
}

fn hillclimb(order: u32, seed: u64, samples: u64, out: Option<&Path>) -> Result<()> {
    let starters = (0..samples)
        .map(|i| hill_climb(order, seed.wrapping_add(i)))
        .collect::<starter_core::Result<Vec<_>>>()?;
    match out {
        Some(path) => {
            write_starters(path, &starters).map_err(|source| CliError::Input { path: path.into(), source })?
        }
        None => starters.iter().for_each(|s| println!("{}", to_json(s))),
    }
    Ok(())
}

/// Paths of the two starters written beside `report`.
pub fn starter_paths(report: &Path) -> (PathBuf, PathBuf) {
    let stem = report.file_stem().and_then(|s| s.to_str()).unwrap_or("triplication");
    (
        report.with_file_name(format!("{stem}.a.json")),
        report.with_file_name(format!("{stem}.b.json")),
    )
}

fn write_triplication(outcome: &PipelineOutcome, out: &Path) -> Result<()> {
    write_file(out, &PipelineReport::new(outcome).to_json_pretty())?;
    let stats = outcome.stats();
    println!(
        "{} decisions {} backtracks {} solve_ms {}",
        outcome.label(),
        stats.decisions,
        stats.backtracks,
        stats.duration.as_millis()
    );
    match outcome {
        PipelineOutcome::Sat(r) => {
            let (a, b) = starter_paths(out);
            write_file(&a, &format!("{}\n", to_json(&r.starter_a)))?;
            write_file(&b, &format!("{}\n", to_json(&r.starter_b)))?;
            println!("strong {} {}", r.reports[0].is_strong, r.reports[1].is_strong);
            println!("wrote {} {} {}", out.display(), a.display(), b.display());
        }
        PipelineOutcome::Unsat { cause: Some(cause), .. } => {
            println!("cause: {cause}");
            println!("wrote {}", out.display());
        }
        _ => println!("wrote {}", out.display()),
    }
    Ok(())
}

fn print_status(instance: &SudokuInstance, status: &SolveStatus) {
    println!("{}", status.label());
    if let SolveStatus::Sat(solution) = status {
        let table = instance.table();
        for (pair, (u, v)) in table.extension().iter().zip(solution.uv(instance)) {
            println!("{} {} -> {u} {v}", pair.first, pair.second);
        }
    }
}

fn invert(path: &Path, out: Option<&Path>) -> Result<()> {
    let starter = load_starter(path)?;
    let verdict = inverse_test(&starter)?;
    println!("{}", verdict.status.label());
    if let Some(key) = verdict.key {
        println!("key {key}");
    }
    if !verdict.failing_rows.is_empty() {
        let rows: Vec<String> = verdict.failing_rows.iter().map(u32::to_string).collect();
        println!("failing rows {}", rows.join(" "));
    }
    for c in &verdict.candidates {
        println!("candidate key {} base {} strong {}", c.key, c.base, c.report.is_strong);
    }
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
        write_file(path, &json)?;
    }
    Ok(())
}

fn series(mode: SeriesMode) -> Result<()> {
    let config = Default::default();
    match mode {
        SeriesMode::Keys { base, out } => {
            let records = run_key_sweep(&load_starter(&base)?, &config)?;
            write_records_csv(create(&out)?, &records)?;
            println!("{} records", records.len());
        }
        SeriesMode::Orders { order, seed, out } => {
            let sweep = run_order_sweep(&order, seed, &config);
            write_records_csv(create(&out)?, &sweep.records)?;
            println!("{} records", sweep.records.len());
            for (p, why) in &sweep.failures {
                eprintln!("order {p}: {why}");
            }
        }
        SeriesMode::Repeat { base, repeats, out, means_out } => {
            let series = run_repeat_subseries(&load_starter(&base)?, repeats, &config)?;
            write_records_csv(create(&out)?, &series.records)?;
            let means_path = means_out.unwrap_or_else(|| out.with_extension("means.csv"));
            write_means_csv(create(&means_path)?, &series.means)?;
            println!("{} records, {} key means", series.records.len(), series.means.len());
        }
        SeriesMode::Sampling { order, samples, seed } => {
            let s = run_inverse_sampling(order, samples, seed)?;
            println!(
                "order {} samples {} inconclusive {} false {} failures {} fraction {:.5}",
                s.order, s.samples, s.inconclusive, s.false_count, s.generation_failures, s.fraction
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starter_files_sit_beside_the_report() {
        let (a, b) = starter_paths(Path::new("out/run.json"));
        assert_eq!(a, Path::new("out/run.a.json"));
        assert_eq!(b, Path::new("out/run.b.json"));
    }
}
