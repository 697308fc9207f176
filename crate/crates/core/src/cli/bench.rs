//! Timing of the conversions over a range of power-of-two sizes, as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::convert::CliError;
use crate::decomp::Decomposer;
use crate::expand::Expander;
use crate::field::{Fp, PrimeField};
use crate::poly::DensePoly;
use crate::recurrence::RecurrenceFamily;

pub const MIN_REPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchOp {
    Expand,
    Decomp,
    Texpand,
}

impl BenchOp {
    pub fn name(self) -> &'static str {
        match self {
            BenchOp::Expand => "expand",
            BenchOp::Decomp => "decomp",
            BenchOp::Texpand => "texpand",
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "expand" => Ok(BenchOp::Expand),
            "decomp" => Ok(BenchOp::Decomp),
            "texpand" => Ok(BenchOp::Texpand),
            _ => Err(format!(
                "unknown op {s:?}; expected expand, decomp or texpand"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub op: BenchOp,
    pub n: usize,
    pub reps: usize,
    pub median_ns: u128,
    pub modulus: u64,
}

impl BenchRecord {
    pub const HEADER: &'static str = "op,n,reps,median_ns,modulus";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.op, self.n, self.reps, self.median_ns, self.modulus
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub op: BenchOp,
    pub min_log_n: u32,
    pub max_log_n: u32,
    pub reps: usize,
    pub seed: u64,
    pub field: PrimeField,
    /// `None` draws a random family with nonzero `a_i`, `c_i` from the seed.
    pub family: Option<RecurrenceFamily>,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.reps < MIN_REPS {
            return Err(CliError::new(
                "reps",
                format!("at least {MIN_REPS} repetitions are required"),
            ));
        }
        if self.min_log_n > self.max_log_n {
            return Err(CliError::new("min-log-n", "must not exceed max-log-n"));
        }
        if self.max_log_n >= usize::BITS - 2 {
            return Err(CliError::new("max-log-n", "size does not fit in memory"));
        }
        // The largest products have length about 2n.
        let needed = 2usize << self.max_log_n;
        if needed > self.field.ntt_capacity() {
            return Err(CliError::new(
                "max-log-n",
                format!(
                    "size 2^{} needs transforms of length {needed}, the modulus supports {}",
                    self.max_log_n,
                    self.field.ntt_capacity()
                ),
            ));
        }
        Ok(())
    }
}

fn random_elems(field: &PrimeField, rng: &mut ChaCha8Rng, n: usize, nonzero: bool) -> Vec<Fp> {
    let low = u64::from(nonzero);
    (0..n)
        .map(|_| field.elem(rng.gen_range(low..field.modulus())))
        .collect()
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

/// Times one conversion of size `n`, setup of the tree and moments included.
fn time_once(cfg: &BenchConfig, family: &RecurrenceFamily, input: &[Fp]) -> Result<u128, CliError> {
    let field = &cfg.field;
    let n = input.len();
    let blame = |e: crate::Error| CliError::new("op", e.to_string());
    let start = Instant::now();
    match cfg.op {
        BenchOp::Expand => {
            let out = Expander::new(field, family, n)
                .and_then(|e| e.expand(input))
                .map_err(blame)?;
            std::hint::black_box(out);
        }
        BenchOp::Texpand => {
            let out = Expander::new(field, family, n)
                .and_then(|e| e.expand_transposed(input))
                .map_err(blame)?;
            std::hint::black_box(out);
        }
        BenchOp::Decomp => {
            let a = DensePoly::new(input.to_vec());
            let out = Decomposer::new(field, family, n)
                .and_then(|d| d.decomp(&a))
                .map_err(blame)?;
            std::hint::black_box(out);
        }
    }
    Ok(start.elapsed().as_nanos())
}

/// Runs the benchmark and returns one record per size, in increasing `n`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    cfg.validate()?;
    let field = &cfg.field;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_n = 1usize << cfg.max_log_n;
    let family = match &cfg.family {
        Some(f) => f.clone(),
        None => {
            let len = max_n + 1;
            let a = random_elems(field, &mut rng, len, true);
            let b = random_elems(field, &mut rng, len, false);
            let c = random_elems(field, &mut rng, len, true);
            RecurrenceFamily::custom(a, b, c).map_err(|e| CliError::new("family", e.to_string()))?
        }
    };
    let mut records = Vec::new();
    for log_n in cfg.min_log_n..=cfg.max_log_n {
        let n = 1usize << log_n;
        let input = random_elems(field, &mut rng, n, false);
        // One untimed run warms the transform plan cache.
        time_once(cfg, &family, &input)?;
        let samples = (0..cfg.reps)
            .map(|_| time_once(cfg, &family, &input))
            .collect::<Result<Vec<_>, _>>()?;
        records.push(BenchRecord {
            op: cfg.op,
            n,
            reps: cfg.reps,
            median_ns: median(samples),
            modulus: field.modulus(),
        });
    }
    Ok(records)
}

/// Writes the `# seed=` comment, the header and the rows.
pub fn write_csv(out: &mut impl Write, seed: u64, records: &[BenchRecord]) -> std::io::Result<()> {
    writeln!(out, "# seed={seed}")?;
    writeln!(out, "{}", BenchRecord::HEADER)?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
