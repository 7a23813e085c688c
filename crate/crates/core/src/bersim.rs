//! Monte Carlo bit-error rates of index codes over a hard-decision binary
//! channel.
//!
//! Every transmitted symbol flips independently with probability `p`. A
//! receiver decodes by XOR-ing the received symbols of its plan with its
//! (error-free) side information, so it errs exactly when an odd number of
//! the used symbols flipped.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::IndexCode;
use crate::error::{Error, Result};
use crate::minmax::{first_plans, DecodingPlan};
use crate::problem::IndexCodingProblem;

const BLOCK: u64 = 4096;
const Z95: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum Channel {
    /// Coherent BPSK over Rayleigh fading; the SNR grid sets `p`.
    RayleighBpsk,
    /// Every point uses the same flip probability.
    FixedP(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerConfig {
    pub snr_grid_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub channel: Channel,
}

impl Default for BerConfig {
    fn default() -> Self {
        Self {
            snr_grid_db: (0..=20).map(|i| f64::from(2 * i)).collect(),
            trials: 100_000,
            seed: 0,
            channel: Channel::RayleighBpsk,
        }
    }
}

impl BerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if let Some(s) = self.snr_grid_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR value {s} is not finite")));
        }
        if let Channel::FixedP(p) = self.channel {
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::Config(format!("flip probability {p} outside [0, 0.5]")));
            }
        }
        Ok(())
    }

    /// Symbol flip probability at each grid point.
    pub fn flip_probabilities(&self) -> Vec<f64> {
        self.snr_grid_db
            .iter()
            .map(|&s| match self.channel {
                Channel::RayleighBpsk => symbol_error_prob(s),
                Channel::FixedP(p) => p,
            })
            .collect()
    }
}

/// `p = (1 - sqrt(g / (1 + g))) / 2` with `g` the linear average SNR.
pub fn symbol_error_prob(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    let g = 10f64.powf(snr_db / 10.0);
    0.5 * (1.0 - (g / (1.0 + g)).sqrt())
}

/// Probability that an odd number of `t_use` independent symbols flip.
pub fn analytic_receiver_ber(t_use: usize, p: f64) -> f64 {
    let t = i32::try_from(t_use).unwrap_or(i32::MAX);
    (1.0 - (1.0 - 2.0 * p).powi(t)) / 2.0
}

pub fn ci_halfwidth(ber: f64, trials: u64) -> f64 {
    Z95 * (ber * (1.0 - ber) / trials as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerResult {
    pub snr_db: Vec<f64>,
    pub flip_prob: Vec<f64>,
    pub trials: u64,
    /// (receiver, want) of each curve in `per_receiver`.
    pub streams: Vec<(usize, usize)>,
    pub t_use: Vec<usize>,
    /// `per_receiver[s][k]`: BER of stream `s` at grid point `k`.
    pub per_receiver: Vec<Vec<f64>>,
    pub errors: Vec<Vec<u64>>,
    pub ci: Vec<Vec<f64>>,
    pub worst_case: Vec<f64>,
    pub worst_ci: Vec<f64>,
}

fn block_rng(seed: u64, point: usize, block: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(point as u64).to_le_bytes());
    key[16..24].copy_from_slice(&block.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

struct Stream {
    want_bit: usize,
    tx_mask: u64,
    side_mask: u64,
}

fn run_block(
    code: &IndexCode,
    streams: &[Stream],
    p: f64,
    mut rng: ChaCha8Rng,
    trials: u64,
) -> Vec<u64> {
    let words = code.codewords();
    let mut errors = vec![0u64; streams.len()];
    for _ in 0..trials {
        let x: u64 = rng.random();
        let mut received = 0u64;
        for (j, &w) in words.iter().enumerate() {
            let bit = u64::from((w & x).count_ones() & 1);
            let flip = u64::from(rng.random::<f64>() < p);
            received |= (bit ^ flip) << j;
        }
        for (e, s) in errors.iter_mut().zip(streams) {
            let decoded = ((received & s.tx_mask).count_ones() + (x & s.side_mask).count_ones()) & 1;
            if u64::from(decoded) != x >> s.want_bit & 1 {
                *e += 1;
            }
        }
    }
    errors
}

/// Simulates `cfg.trials` uses of `code` at every grid point. Trial blocks
/// draw from generators keyed by (seed, point, block), so results do not
/// depend on thread count and codes simulated with the same seed see the
/// same message bits and channel draws.
pub fn simulate(
    p: &IndexCodingProblem,
    code: &IndexCode,
    plans: &[DecodingPlan],
    cfg: &BerConfig,
) -> Result<BerResult> {
    cfg.validate()?;
    if plans.is_empty() {
        return Err(Error::Config("no decoding plans given".into()));
    }
    if code.n() != p.messages() {
        return Err(Error::Config(format!(
            "code is over {} messages, problem has {}",
            code.n(),
            p.messages()
        )));
    }
    let mut streams = Vec::with_capacity(plans.len());
    for plan in plans {
        let valid_ref = plan.receiver >= 1
            && plan.receiver <= p.receivers().len()
            && plan.used_transmissions.iter().all(|&t| t >= 1 && t <= code.len());
        if !valid_ref || !plan.is_correct(code) {
            return Err(Error::Config(format!(
                "plan for receiver {} does not recover x{}",
                plan.receiver, plan.want
            )));
        }
        let knows = &p.receivers()[plan.receiver - 1].knows;
        if let Some(k) = plan.used_side_info.iter().find(|k| !knows.contains(k)) {
            return Err(Error::Config(format!(
                "receiver {} does not know x{k}",
                plan.receiver
            )));
        }
        streams.push(Stream {
            want_bit: plan.want - 1,
            tx_mask: plan.used_transmissions.iter().fold(0, |m, &t| m | 1 << (t - 1)),
            side_mask: plan.used_side_info.iter().fold(0, |m, &k| m | 1 << (k - 1)),
        });
    }

    let flip_prob = cfg.flip_probabilities();
    let blocks = cfg.trials.div_ceil(BLOCK);
    let jobs: Vec<(usize, u64)> = (0..flip_prob.len())
        .flat_map(|k| (0..blocks).map(move |b| (k, b)))
        .collect();
    let partial: Vec<(usize, Vec<u64>)> = jobs
        .par_iter()
        .map(|&(k, b)| {
            let n = BLOCK.min(cfg.trials - b * BLOCK);
            let rng = block_rng(cfg.seed, k, b);
            (k, run_block(code, &streams, flip_prob[k], rng, n))
        })
        .collect();
    let mut errors = vec![vec![0u64; flip_prob.len()]; streams.len()];
    for (k, counts) in partial {
        for (s, e) in counts.into_iter().enumerate() {
            errors[s][k] += e;
        }
    }

    let trials = cfg.trials;
    let per_receiver: Vec<Vec<f64>> = errors
        .iter()
        .map(|row| row.iter().map(|&e| e as f64 / trials as f64).collect())
        .collect();
    let ci: Vec<Vec<f64>> = per_receiver
        .iter()
        .map(|row| row.iter().map(|&b| ci_halfwidth(b, trials)).collect())
        .collect();
    let (worst_case, worst_ci) = (0..flip_prob.len())
        .map(|k| {
            let s = (0..streams.len())
                .max_by(|&a, &b| per_receiver[a][k].total_cmp(&per_receiver[b][k]))
                .expect("at least one stream");
            (per_receiver[s][k], ci[s][k])
        })
        .unzip();

    Ok(BerResult {
        snr_db: cfg.snr_grid_db.clone(),
        flip_prob,
        trials,
        streams: plans.iter().map(|pl| (pl.receiver, pl.want)).collect(),
        t_use: plans.iter().map(|pl| pl.t_use).collect(),
        per_receiver,
        errors,
        ci,
        worst_case,
        worst_ci,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeCurve {
    pub label: String,
    pub code: IndexCode,
    pub result: BerResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub curves: Vec<CodeCurve>,
    /// Indices into `curves`, best first: smallest mean worst-case BER.
    pub ranking: Vec<usize>,
}

impl Comparison {
    pub fn mean_worst(&self, i: usize) -> f64 {
        let w = &self.curves[i].result.worst_case;
        w.iter().sum::<f64>() / w.len() as f64
    }

    /// Curve `a` is nowhere worse than curve `b` beyond their combined
    /// confidence half-widths.
    pub fn dominates(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.curves[a].result, &self.curves[b].result);
        (0..ra.worst_case.len())
            .all(|k| ra.worst_case[k] <= rb.worst_case[k] + ra.worst_ci[k] + rb.worst_ci[k])
    }

    pub fn coincide(&self, a: usize, b: usize) -> bool {
        self.dominates(a, b) && self.dominates(b, a)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(["code", "snr_db", "receiver", "ber", "ci_halfwidth"]).map_err(io)?;
        for curve in &self.curves {
            let r = &curve.result;
            for k in 0..r.snr_db.len() {
                for (s, &(rec, want)) in r.streams.iter().enumerate() {
                    let name = if r.streams.iter().filter(|x| x.0 == rec).count() > 1 {
                        format!("R{rec}:x{want}")
                    } else {
                        format!("R{rec}")
                    };
                    w.write_record([
                        curve.label.clone(),
                        r.snr_db[k].to_string(),
                        name,
                        format!("{:.6e}", r.per_receiver[s][k]),
                        format!("{:.6e}", r.ci[s][k]),
                    ])
                    .map_err(io)?;
                }
                w.write_record([
                    curve.label.clone(),
                    r.snr_db[k].to_string(),
                    "worst".to_string(),
                    format!("{:.6e}", r.worst_case[k]),
                    format!("{:.6e}", r.worst_ci[k]),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
    }

    /// Gnuplot script drawing the worst-case curves of `csv_path` on a log
    /// BER axis.
    pub fn plot_script(&self, csv_path: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set logscale y");
        let _ = writeln!(s, "set format y '10^{{%L}}'");
        let _ = writeln!(s, "set xlabel 'SNR (dB)'");
        let _ = writeln!(s, "set ylabel 'Worst case BER'");
        let _ = writeln!(s, "set grid");
        let _ = writeln!(s, "set key top right");
        let plots: Vec<String> = self
            .curves
            .iter()
            .map(|c| {
                format!(
                    "'{csv_path}' using (strcol(1) eq '{0}' && strcol(3) eq 'worst' ? $2 : 1/0):($4 > 0 ? $4 : 1/0) with linespoints title '{0}'",
                    c.label
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}

/// Simulates each labeled code with its first minimal plans and the same
/// seed, then ranks them by mean worst-case BER.
pub fn compare_worst_case(
    p: &IndexCodingProblem,
    codes: &[(String, IndexCode)],
    cfg: &BerConfig,
) -> Result<Comparison> {
    if codes.is_empty() {
        return Err(Error::Config("no codes to compare".into()));
    }
    let curves = codes
        .iter()
        .map(|(label, code)| {
            let plans = first_plans(p, code)?;
            Ok(CodeCurve {
                label: label.clone(),
                code: code.clone(),
                result: simulate(p, code, &plans, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cmp = Comparison {
        ranking: (0..curves.len()).collect(),
        curves,
    };
    let means: Vec<f64> = (0..cmp.curves.len()).map(|i| cmp.mean_worst(i)).collect();
    cmp.ranking.sort_by(|&a, &b| means[a].total_cmp(&means[b]));
    Ok(cmp)
}
