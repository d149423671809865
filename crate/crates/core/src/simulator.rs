//! Monte-Carlo transmission over a q-ary symmetric channel with syndrome
//! checking and single-symbol correction.
//!
//! Every trial draws from its own ChaCha8 stream keyed by the master seed and
//! indexed by `(rate index, trial index)`, so results do not depend on how
//! trials are scheduled across threads.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agcode::{build_onepoint_code, EvalSet, LinearCode};
use crate::curve::{Curve, CurveSpec};
use crate::error::{Error, Result};
use crate::gf::{Felt, Field};

const CHUNK: u64 = 256;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeStatus {
    /// Zero syndrome on arrival.
    Success,
    /// A single substitution produced a codeword.
    Corrected,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub word: Option<Vec<Felt>>,
}

/// `message * G`
pub fn encode(code: &LinearCode, message: &[Felt]) -> Result<Vec<Felt>> {
    code.encode(message)
}

/// Replaces each symbol with probability `rate` by a uniformly chosen
/// different symbol. Returns the received word and the number of changed
/// positions.
pub fn apply_random_errors<R: Rng + ?Sized>(
    field: &Field,
    codeword: &[Felt],
    rate: f64,
    rng: &mut R,
) -> (Vec<Felt>, usize) {
    let q = field.order();
    let mut count = 0;
    let received = codeword
        .iter()
        .map(|&c| {
            if rng.random::<f64>() < rate {
                count += 1;
                let mut v = rng.random_range(0..q - 1);
                if v >= c.index() {
                    v += 1;
                }
                Felt::from_index(v)
            } else {
                c
            }
        })
        .collect();
    (received, count)
}

/// Zero syndrome means success; otherwise positions are scanned in order and
/// the first single-symbol substitution with zero syndrome is returned.
///
/// For a fixed position at most one substitute can zero the syndrome (it must
/// cancel `s` along that column), so the scan solves for it directly instead
/// of trying all `q - 1` symbols.
pub fn decode_goppa(received: &[Felt], code: &LinearCode) -> Result<DecodeOutcome> {
    let f = &**code.field();
    let h = code.parity_check();
    let s = code.syndrome(received)?;
    if s.iter().all(|v| v.is_zero()) {
        return Ok(DecodeOutcome { status: DecodeStatus::Success, word: Some(received.to_vec()) });
    }
    let t = s.iter().position(|v| !v.is_zero()).expect("nonzero syndrome");
    for i in 0..code.n() {
        let pivot = h.get(t, i);
        if pivot.is_zero() {
            continue;
        }
        // s + delta * h_i = 0 forces delta = -s_t / h_ti
        let delta = f.neg(f.div(s[t], pivot)?);
        if (0..h.rows()).all(|row| f.add(s[row], f.mul(delta, h.get(row, i))).is_zero()) {
            let mut word = received.to_vec();
            word[i] = f.add(word[i], delta);
            return Ok(DecodeOutcome { status: DecodeStatus::Corrected, word: Some(word) });
        }
    }
    Ok(DecodeOutcome { status: DecodeStatus::Failure, word: None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub error_rates: Vec<f64>,
    pub num_transmissions: u64,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_transmissions == 0 || self.num_transmissions > u32::MAX as u64 {
            return Err(Error::InvalidConfig("num_transmissions must be in [1, 2^32)".into()));
        }
        if let Some(r) = self.error_rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidConfig(format!("error rate {r} outside [0, 1]")));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Counts {
    success: u64,
    corrected: u64,
    failure: u64,
    miscorrected: u64,
    injected: u64,
}

impl Counts {
    fn merge(mut self, o: Counts) -> Counts {
        self.success += o.success;
        self.corrected += o.corrected;
        self.failure += o.failure;
        self.miscorrected += o.miscorrected;
        self.injected += o.injected;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub rate: f64,
    pub trials: u64,
    /// Trials decoded with status success or corrected.
    pub successful_decodes: u64,
    pub corrected: u64,
    pub detected_uncorrectable: u64,
    /// Successful decodes whose output differs from the transmitted codeword.
    pub miscorrected: u64,
    pub total_errors: u64,
    pub success_rate: f64,
    pub uncorrectable_rate: f64,
    pub avg_errors: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub seed: u64,
    pub rates: Vec<RateResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-trial generator: stream `(rate_index << 32) | trial` of the master key.
pub fn trial_rng(master_seed: u64, rate_index: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((rate_index as u64) << 32) | trial as u64);
    rng
}

fn run_trial(code: &LinearCode, rate: f64, rng: &mut ChaCha8Rng) -> Result<(DecodeStatus, bool, usize)> {
    let f = &**code.field();
    let message: Vec<Felt> = (0..code.k()).map(|_| Felt::from_index(rng.random_range(0..f.order()))).collect();
    let codeword = code.encode(&message)?;
    let (received, changed) = apply_random_errors(f, &codeword, rate, rng);
    let out = decode_goppa(&received, code)?;
    let wrong = out.word.as_ref().is_some_and(|w| *w != codeword);
    Ok((out.status, wrong, changed))
}

/// Runs `trials` transmissions at one error rate.
pub fn simulate_transmission(
    code: &LinearCode,
    rate: f64,
    trials: u64,
    seed: u64,
    rate_index: u32,
) -> Result<RateResult> {
    if trials == 0 || trials > u32::MAX as u64 {
        return Err(Error::InvalidConfig("trials must be in [1, 2^32)".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Counts> {
            let mut acc = Counts::default();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(seed, rate_index, t as u32);
                let (status, wrong, changed) = run_trial(code, rate, &mut rng)?;
                acc.injected += changed as u64;
                match status {
                    DecodeStatus::Success => acc.success += 1,
                    DecodeStatus::Corrected => acc.corrected += 1,
                    DecodeStatus::Failure => acc.failure += 1,
                }
                if wrong {
                    acc.miscorrected += 1;
                }
            }
            Ok(acc)
        })
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))?;
    let successful = counts.success + counts.corrected;
    let t = trials as f64;
    Ok(RateResult {
        rate,
        trials,
        successful_decodes: successful,
        corrected: counts.corrected,
        detected_uncorrectable: counts.failure,
        miscorrected: counts.miscorrected,
        total_errors: counts.injected,
        success_rate: successful as f64 / t,
        uncorrectable_rate: counts.failure as f64 / t,
        avg_errors: counts.injected as f64 / t,
    })
}

/// Short label `[n,k,d]_Q` (or `[n,k]_Q` when `d` is unknown).
pub fn code_label(code: &LinearCode, d: Option<usize>) -> String {
    match d {
        Some(d) => format!("[{},{},{}]_{}", code.n(), code.k(), d, code.field().order()),
        None => format!("[{},{}]_{}", code.n(), code.k(), code.field().order()),
    }
}

/// Runs every rate of `config` against `code`.
pub fn run_simulation(code: &LinearCode, d: Option<usize>, config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let go = || -> Result<Vec<RateResult>> {
        config
            .error_rates
            .iter()
            .enumerate()
            .map(|(i, &rate)| simulate_transmission(code, rate, config.num_transmissions, config.master_seed, i as u32))
            .collect()
    };
    let rates = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(go)?,
        None => go()?,
    };
    Ok(SimResult {
        code: code_label(code, d),
        n: code.n(),
        k: code.k(),
        d,
        seed: config.master_seed,
        rates,
        note: None,
    })
}

pub const RESULTS_HEADER: [&str; 10] =
    ["code", "n", "k", "d", "rate", "trials", "success_rate", "uncorrectable_rate", "avg_errors", "seed"];

/// One row per (code, rate).
pub fn write_results_csv<W: Write>(results: &[SimResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for res in results {
        for r in &res.rates {
            w.write_record([
                res.code.clone(),
                res.n.to_string(),
                res.k.to_string(),
                res.d.map(|d| d.to_string()).unwrap_or_default(),
                r.rate.to_string(),
                r.trials.to_string(),
                r.success_rate.to_string(),
                r.uncorrectable_rate.to_string(),
                r.avg_errors.to_string(),
                res.seed.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Error rate against decode success and detected-uncorrectable rates.
pub fn write_performance_csv<W: Write>(results: &[SimResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "error_rate", "decode_success_rate", "detected_uncorrectable_rate"])?;
    for res in results {
        for r in &res.rates {
            w.write_record([
                res.code.clone(),
                r.rate.to_string(),
                r.success_rate.to_string(),
                r.uncorrectable_rate.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Error rate against average injected errors per transmission.
pub fn write_avg_errors_csv<W: Write>(results: &[SimResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "error_rate", "avg_errors"])?;
    for res in results {
        for r in &res.rates {
            w.write_record([res.code.clone(), r.rate.to_string(), r.avg_errors.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// File names written by [`write_bundle`].
pub const RESULTS_FILE: &str = "simulation.csv";
pub const PERFORMANCE_FILE: &str = "performance.csv";
pub const AVG_ERRORS_FILE: &str = "avg_errors.csv";

/// Writes the results table and both plotting series into `dir`.
pub fn write_bundle(results: &[SimResult], dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let paths = [RESULTS_FILE, PERFORMANCE_FILE, AVG_ERRORS_FILE].map(|f| dir.join(f));
    write_results_csv(results, std::fs::File::create(&paths[0])?)?;
    write_performance_csv(results, std::fs::File::create(&paths[1])?)?;
    write_avg_errors_csv(results, std::fs::File::create(&paths[2])?)?;
    Ok(paths.to_vec())
}

/// A code entering the three-block sweep, with where it came from.
#[derive(Clone, Debug)]
pub struct PresetCode {
    pub code: LinearCode,
    pub d: Option<usize>,
    pub note: String,
}

/// The three codes of the default sweep. The lengths 8/16/32 over GF(16)
/// cannot be obtained from `y^((q+1)/2) = x^m + x`, so constructed codes of
/// increasing length stand in: Hermitian q=2 (r=3), `y^2 = x^3 + x` over GF(9)
/// (r=4), Hermitian q=4 over GF(16) (r=8).
pub fn preset_codes(budget: u128) -> Result<Vec<PresetCode>> {
    let specs = [(CurveSpec::hermitian(2)?, 3), (CurveSpec::superelliptic(3, 3)?, 4), (CurveSpec::hermitian(4)?, 8)];
    specs
        .into_iter()
        .map(|(spec, r)| {
            let note = format!("constructed C(D, {r}P) on {spec}; stands in for an unconstructible code");
            let curve = Curve::new(spec)?;
            let code = build_onepoint_code(&curve, r, &EvalSet::AllAffine)?;
            let d = code.min_distance(budget).d;
            Ok(PresetCode { code, d, note })
        })
        .collect()
}

/// Runs the sweep over `codes` (typically [`preset_codes`] or user matrices).
pub fn run_sweep(codes: &[PresetCode], config: &SimConfig) -> Result<Vec<SimResult>> {
    codes
        .iter()
        .map(|pc| {
            let mut res = run_simulation(&pc.code, pc.d, config)?;
            res.note = Some(pc.note.clone());
            Ok(res)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agcode::DEFAULT_BUDGET;

    fn example_two() -> LinearCode {
        let curve = Curve::new(CurveSpec::hermitian(2).unwrap()).unwrap();
        build_onepoint_code(&curve, 3, &EvalSet::AllAffine).unwrap()
    }

    // Literal scan: every position, every other symbol in canonical order.
    fn decode_reference(received: &[Felt], code: &LinearCode) -> DecodeOutcome {
        if code.contains(received).unwrap() {
            return DecodeOutcome { status: DecodeStatus::Success, word: Some(received.to_vec()) };
        }
        for i in 0..received.len() {
            for s in code.field().elements() {
                if s == received[i] {
                    continue;
                }
                let mut w = received.to_vec();
                w[i] = s;
                if code.contains(&w).unwrap() {
                    return DecodeOutcome { status: DecodeStatus::Corrected, word: Some(w) };
                }
            }
        }
        DecodeOutcome { status: DecodeStatus::Failure, word: None }
    }

    #[test]
    fn rate_extremes() {
        let code = example_two();
        let f = code.field();
        let cw = code.encode(&[Felt::ONE, Felt::from_index(2), Felt::ZERO]).unwrap();
        let mut rng = trial_rng(1, 0, 0);
        let (r0, c0) = apply_random_errors(f, &cw, 0.0, &mut rng);
        assert_eq!((r0, c0), (cw.clone(), 0));
        let (r1, c1) = apply_random_errors(f, &cw, 1.0, &mut rng);
        assert_eq!(c1, 8);
        assert!(r1.iter().zip(&cw).all(|(a, b)| a != b));
    }

    #[test]
    fn fast_decoder_matches_reference_scan() {
        let code = example_two();
        let f = code.field();
        for t in 0..2000 {
            let mut rng = trial_rng(7, 3, t);
            let msg: Vec<Felt> = (0..3).map(|_| Felt::from_index(rng.random_range(0..4))).collect();
            let cw = code.encode(&msg).unwrap();
            let (rx, _) = apply_random_errors(f, &cw, 0.3, &mut rng);
            assert_eq!(decode_goppa(&rx, &code).unwrap(), decode_reference(&rx, &code));
        }
    }

    #[test]
    fn config_validation() {
        let base = SimConfig { error_rates: vec![0.1], num_transmissions: 10, master_seed: 0, threads: None };
        assert!(base.validate().is_ok());
        assert!(SimConfig { num_transmissions: 0, ..base.clone() }.validate().is_err());
        assert!(SimConfig { error_rates: vec![1.5], ..base.clone() }.validate().is_err());
        assert!(SimConfig { error_rates: vec![f64::NAN], ..base.clone() }.validate().is_err());
        assert!(SimConfig { threads: Some(0), ..base }.validate().is_err());
    }

    #[test]
    fn rate_zero_is_perfect() {
        let code = example_two();
        let r = simulate_transmission(&code, 0.0, 500, 9, 0).unwrap();
        assert_eq!((r.success_rate, r.avg_errors, r.uncorrectable_rate), (1.0, 0.0, 0.0));
    }

    #[test]
    fn csv_header() {
        let code = example_two();
        let d = code.min_distance(DEFAULT_BUDGET).d;
        let cfg = SimConfig { error_rates: vec![0.0], num_transmissions: 3, master_seed: 5, threads: Some(1) };
        let res = run_simulation(&code, d, &cfg).unwrap();
        let mut buf = Vec::new();
        write_results_csv(&[res], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "code,n,k,d,rate,trials,success_rate,uncorrectable_rate,avg_errors,seed\n\
             \"[8,3,5]_4\",8,3,5,0,3,1,0,0,5\n"
        );
    }
}
