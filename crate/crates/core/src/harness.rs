//! Experiment sweeps and CSV output.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hillclimb::hill_climb;
use crate::inverse::{base_order_of, inverse_test, InverseStatus};
use crate::pairing::Pairing;
use crate::pipeline::{triplicate, PipelineOutcome, TriplicateOptions};
use crate::solver::SolverConfig;
use crate::table::admissible_keys;
use crate::verify::verify_pairing;

pub const CSV_HEADER: &str = "order_base,order_result,key,status,solve_ms,decisions,backtracks,starter_digest,seed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub order_base: u32,
    pub order_result: u32,
    pub key: u32,
    pub status: String,
    pub solve_ms: u128,
    pub decisions: u64,
    pub backtracks: u64,
    /// Present exactly when `status` is `SAT`.
    pub starter_digest: Option<String>,
    pub seed: Option<u64>,
}

/// SHA-256 of the normalized starter's text form, hex encoded.
pub fn starter_digest(starter: &Pairing) -> String {
    let n = starter.normalized();
    let mut h = Sha256::new();
    h.update(n.modulus().to_string());
    for p in n.iter() {
        h.update(format!(";{},{}", p.first, p.second));
    }
    hex::encode(h.finalize())
}

/// Derives the seed of sample `index` from a series seed.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    // splitmix64
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_one(base: &Pairing, key: u32, config: &SolverConfig, seed: Option<u64>) -> Result<RunRecord> {
    let options = TriplicateOptions {
        config: *config,
        ..Default::default()
    };
    let outcome = triplicate(base, key, &options).map_err(|e| Error::Internal(format!("key {key}: {e}")))?;
    let starter_digest = match &outcome {
        PipelineOutcome::Sat(r) => {
            if !verify_pairing(&r.starter_a).is_strong {
                return Err(Error::Internal(format!("key {key}: merged starter is not strong")));
            }
            Some(starter_digest(&r.starter_a))
        }
        _ => None,
    };
    let stats = outcome.stats();
    Ok(RunRecord {
        order_base: base.modulus(),
        order_result: 3 * base.modulus(),
        key,
        status: outcome.label().to_string(),
        solve_ms: stats.duration.as_millis(),
        decisions: stats.decisions,
        backtracks: stats.backtracks,
        starter_digest,
        seed,
    })
}

/// One record per admissible key, ascending.
pub fn run_key_sweep(base: &Pairing, config: &SolverConfig) -> Result<Vec<RunRecord>> {
    if !verify_pairing(base).is_strong {
        return Err(Error::NotStrong);
    }
    admissible_keys(base)
        .par_iter()
        .map(|&key| run_one(base, key, config, None))
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct OrderSweep {
    pub records: Vec<RunRecord>,
    /// Orders for which no base could be produced, with the reason.
    pub failures: Vec<(u32, String)>,
}

/// Per order: hill-climb a base, draw a random admissible key, run the pipeline.
pub fn run_order_sweep(orders: &[u32], seed: u64, config: &SolverConfig) -> OrderSweep {
    let results: Vec<(u32, Result<RunRecord>)> = orders
        .par_iter()
        .map(|&p| {
            let s = sample_seed(seed, p as u64);
            let run = || -> Result<RunRecord> {
                crate::table::check_base_order(p)?;
                let base = hill_climb(p, s)?;
                let keys = admissible_keys(&base);
                let key = *keys
                    .choose(&mut ChaCha8Rng::seed_from_u64(s))
                    .ok_or_else(|| Error::Internal(format!("no admissible key for order {p}")))?;
                run_one(&base, key, config, Some(s))
            };
            (p, run())
        })
        .collect();
    let mut sweep = OrderSweep::default();
    for (p, r) in results {
        match r {
            Ok(rec) => sweep.records.push(rec),
            Err(e) => sweep.failures.push((p, e.to_string())),
        }
    }
    sweep
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyMean {
    pub key: u32,
    pub runs: usize,
    pub mean_ms: f64,
}

#[derive(Clone, Debug)]
pub struct RepeatSeries {
    /// `repeats` consecutive subseries, each a full key sweep.
    pub records: Vec<RunRecord>,
    pub means: Vec<KeyMean>,
}

pub fn run_repeat_subseries(base: &Pairing, repeats: usize, config: &SolverConfig) -> Result<RepeatSeries> {
    let mut records = Vec::new();
    for _ in 0..repeats {
        records.extend(run_key_sweep(base, config)?);
    }
    let means = admissible_keys(base)
        .into_iter()
        .map(|key| {
            let ms: Vec<u128> = records.iter().filter(|r| r.key == key).map(|r| r.solve_ms).collect();
            KeyMean {
                key,
                runs: ms.len(),
                mean_ms: if ms.is_empty() {
                    0.0
                } else {
                    ms.iter().sum::<u128>() as f64 / ms.len() as f64
                },
            }
        })
        .collect();
    Ok(RepeatSeries { records, means })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub order: u32,
    pub samples: u64,
    pub seed: u64,
    pub inconclusive: u64,
    pub false_count: u64,
    /// Samples for which hill climbing gave up.
    pub generation_failures: u64,
    pub fraction: f64,
}

/// Hill-climbs `samples` strong starters of order `order` (repeats allowed) and runs the inverse test on each.
pub fn run_inverse_sampling(order: u32, samples: u64, seed: u64) -> Result<SamplingSummary> {
    base_order_of(order)?;
    let verdicts: Vec<Option<InverseStatus>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let starter = hill_climb(order, sample_seed(seed, i)).ok()?;
            inverse_test(&starter).ok().map(|v| v.status)
        })
        .collect();
    let count = |s: Option<InverseStatus>| verdicts.iter().filter(|&&v| v == s).count() as u64;
    let inconclusive = count(Some(InverseStatus::Inconclusive));
    let false_count = count(Some(InverseStatus::False));
    let tested = inconclusive + false_count;
    Ok(SamplingSummary {
        order,
        samples,
        seed,
        inconclusive,
        false_count,
        generation_failures: count(None),
        fraction: if tested == 0 { 0.0 } else { inconclusive as f64 / tested as f64 },
    })
}

pub fn write_records_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.write_record([
            r.order_base.to_string(),
            r.order_result.to_string(),
            r.key.to_string(),
            r.status.clone(),
            r.solve_ms.to_string(),
            r.decisions.to_string(),
            r.backtracks.to_string(),
            r.starter_digest.clone().unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header `{}`", header.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |field: &str| Error::Parse {
            line,
            msg: format!("bad {field}"),
        };
        let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
        out.push(RunRecord {
            order_base: row[0].parse().map_err(|_| bad("order_base"))?,
            order_result: row[1].parse().map_err(|_| bad("order_result"))?,
            key: row[2].parse().map_err(|_| bad("key"))?,
            status: row[3].to_string(),
            solve_ms: row[4].parse().map_err(|_| bad("solve_ms"))?,
            decisions: row[5].parse().map_err(|_| bad("decisions"))?,
            backtracks: row[6].parse().map_err(|_| bad("backtracks"))?,
            starter_digest: opt(&row[7]),
            seed: match opt(&row[8]) {
                Some(s) => Some(s.parse().map_err(|_| bad("seed"))?),
                None => None,
            },
        });
    }
    Ok(out)
}

pub fn write_means_csv<W: Write>(out: W, means: &[KeyMean]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["key", "runs", "mean_ms"])?;
    for m in means {
        w.write_record([m.key.to_string(), m.runs.to_string(), format!("{:.3}", m.mean_ms)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t7() -> Pairing {
        Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap()
    }

    #[test]
    fn key_sweep_demo() {
        let recs = run_key_sweep(&t7(), &SolverConfig::default()).unwrap();
        assert_eq!(recs.iter().map(|r| r.key).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(recs.iter().all(|r| r.status == "SAT" && r.starter_digest.is_some()));
    }

    #[test]
    fn csv_round_trip() {
        let recs = run_key_sweep(&t7(), &SolverConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
        assert_eq!(text.lines().count(), 4);
        assert_eq!(read_records_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn repeat_means() {
        let series = run_repeat_subseries(&t7(), 10, &SolverConfig::default()).unwrap();
        assert_eq!(series.records.len(), 30);
        assert_eq!(series.means.len(), 3);
        for m in &series.means {
            let ms: Vec<_> = series.records.iter().filter(|r| r.key == m.key).map(|r| r.solve_ms as f64).collect();
            assert_eq!(m.runs, 10);
            assert!((m.mean_ms - ms.iter().sum::<f64>() / 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn order_sweep_small() {
        let sweep = run_order_sweep(&[7, 11, 13], 5, &SolverConfig::default());
        assert!(sweep.failures.is_empty());
        assert_eq!(sweep.records.len(), 3);
        assert!(sweep.records.iter().all(|r| r.status == "SAT"));
        assert!(run_order_sweep(&[], 5, &SolverConfig::default()).records.is_empty());
        let bad = run_order_sweep(&[9], 5, &SolverConfig::default());
        assert_eq!(bad.failures.len(), 1);
    }

    #[test]
    fn digest_is_order_insensitive() {
        let a = Pairing::from_tuples(7, &[(2, 3), (4, 6), (1, 5)]).unwrap();
        let b = Pairing::from_tuples(7, &[(6, 4), (3, 2), (1, 5)]).unwrap();
        assert_eq!(starter_digest(&a), starter_digest(&b));
        assert_eq!(starter_digest(&a).len(), 64);
    }

    #[test]
    fn small_sampling_run() {
        let s = run_inverse_sampling(21, 200, 1).unwrap();
        assert_eq!(s.inconclusive + s.false_count + s.generation_failures, 200);
        assert!(run_inverse_sampling(25, 1, 1).is_err());
    }
}
