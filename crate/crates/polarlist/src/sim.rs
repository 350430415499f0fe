//! Monte Carlo frame/bit error rate measurement.
//!
//! A sweep runs one experiment per (SNR point, variant). Every frame derives
//! its own random stream from `(master_seed, snr_index, frame_index)`, so
//! results are bit-identical no matter how many worker threads execute the
//! frames, and selection-scheme comparisons can share candidate lists frame
//! by frame. Frames run in deterministically sized batches; the stop rule
//! (maximum frames or minimum frame errors, whichever first) is evaluated at
//! batch boundaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::channel::{
    default_quant_step, llm_from_observation, quantize_channel, sigma_for_ebn0_db, transmit_awgn,
};
use crate::code::PolarCode;
use crate::crc::{select_output, CrcSpec, SelectOutcome, SelectionScheme};
use crate::decoder::{decode_scl, Candidate, ChannelMessages, DecoderConfig};
use crate::kernel::ArithmeticMode;
use crate::{Error, Result};

/// Full description of one simulation experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Block exponent n (N = 2^n).
    pub n: u32,
    /// Unfrozen positions K (CRC bits included).
    pub k: usize,
    /// Design erasure probability for the code construction.
    pub design_erasure: f64,
    /// Pinned frozen set overriding the construction, e.g. from a file.
    pub frozen_override: Option<Vec<usize>>,
    /// CRC carried in the data word; `None` for plain SC/SCL.
    pub crc: Option<CrcSpec>,
    /// List size L.
    pub list_size: usize,
    /// Decoder arithmetic.
    pub mode: ArithmeticMode,
    /// Fixed-point quantizer step; defaults to a per-SNR scale when absent.
    pub quant_step: Option<f64>,
    /// Final-candidate selection scheme.
    pub selection: SelectionScheme,
    /// Eb/N0 points in dB.
    pub snr_points: Vec<f64>,
    /// Frame cap per point.
    pub max_frames: u64,
    /// Early-stop threshold on frame errors.
    pub min_frame_errors: u64,
    /// Master seed of the per-frame random streams.
    pub master_seed: u64,
    /// When no candidate passes the CRC: pick pseudo-randomly instead of
    /// deterministically falling back to candidate 0.
    pub fallback_random: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.snr_points.is_empty() {
            return Err(Error::InvalidParameter("empty SNR list".into()));
        }
        if self.max_frames == 0 || self.min_frame_errors == 0 {
            return Err(Error::InvalidParameter(
                "max_frames and min_errors must be at least 1".into(),
            ));
        }
        if self.selection == SelectionScheme::Ideal && self.crc.is_none() {
            // The genie itself needs no CRC, but an IS variant without any
            // CRC column is almost certainly a misconfiguration; allow it.
        }
        Ok(())
    }

    /// Builds the polar code this experiment runs on.
    pub fn build_code(&self) -> Result<PolarCode> {
        let h = self.crc.map_or(0, |c| c.width());
        match &self.frozen_override {
            Some(frozen) => PolarCode::from_frozen_set(self.n, frozen.clone(), h),
            None => PolarCode::construct(self.n, self.k, self.design_erasure, h),
        }
    }

    /// Variant tag used in reports: `sc`, `scl4`, or scheme + list size in
    /// the style `ds4` / `ms8` / `is2`.
    pub fn variant_label(&self) -> String {
        if self.list_size == 1 && self.crc.is_none() {
            "sc".to_string()
        } else if self.crc.is_none() {
            format!("scl{}", self.list_size)
        } else {
            format!("{}{}", self.selection.as_str(), self.list_size)
        }
    }

    /// Arithmetic tag for reports, including the quantizer width.
    pub fn mode_label(&self) -> String {
        match self.mode {
            ArithmeticMode::Fixed { t } => format!("fixed-t{t}"),
            other => other.as_str().to_string(),
        }
    }

    /// Effective rate used for Eb/N0 normalization: payload bits over block
    /// length, CRC overhead excluded.
    pub fn effective_rate(&self, code: &PolarCode) -> f64 {
        code.effective_rate()
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            n: 10,
            k: 512,
            design_erasure: 0.5,
            frozen_override: None,
            crc: None,
            list_size: 1,
            mode: ArithmeticMode::FloatMax,
            quant_step: None,
            selection: SelectionScheme::MetricBased,
            snr_points: vec![2.0],
            max_frames: 10_000,
            min_frame_errors: 100,
            master_seed: 1,
            fallback_random: false,
        }
    }
}

/// Measurement of one (SNR, variant) point.
#[derive(Debug, Clone, PartialEq)]
pub struct FerRecord {
    pub snr_db: f64,
    pub variant: String,
    pub list_size: usize,
    pub mode: String,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub wilson_ci_low: f64,
    pub wilson_ci_high: f64,
    pub seed: u64,
}

/// CSV column header shared by all reports.
pub const CSV_HEADER: &str =
    "snr_db,variant,L,mode,frames,frame_errors,bit_errors,fer,ber,ci_low,ci_high,seed";

impl FerRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.variant,
            self.list_size,
            self.mode,
            self.frames,
            self.frame_errors,
            self.bit_errors,
            self.fer,
            self.ber,
            self.wilson_ci_low,
            self.wilson_ci_high,
            self.seed
        )
    }
}

/// Renders records as a CSV report with the pinned header.
pub fn to_csv(records: &[FerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// 95% Wilson score interval for `errors` successes in `frames` trials.
pub fn wilson_interval(errors: u64, frames: u64) -> (f64, f64) {
    if frames == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = frames as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn frame_rng(master_seed: u64, snr_index: usize, frame_index: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&frame_index.to_le_bytes());
    key[24..32].copy_from_slice(&0x706f_6c61_726c_6973u64.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Everything sampled and decoded for one frame; selection not yet applied.
struct FrameTrial {
    tx_info: Vec<u8>,
    tx_payload: Vec<u8>,
    candidates: Vec<Candidate>,
    fallback_draw: usize,
}

struct PointContext {
    code: PolarCode,
    config: DecoderConfig,
    crc: Option<CrcSpec>,
    sigma: f64,
    quant_step: Option<f64>,
}

impl PointContext {
    fn new(spec: &ExperimentSpec, snr_db: f64) -> Result<Self> {
        let code = spec.build_code()?;
        let sigma = sigma_for_ebn0_db(snr_db, spec.effective_rate(&code));
        let quant_step = match spec.mode {
            ArithmeticMode::Fixed { t } => {
                Some(spec.quant_step.unwrap_or_else(|| default_quant_step(t, sigma)))
            }
            _ => None,
        };
        Ok(Self {
            code,
            config: DecoderConfig {
                list_size: spec.list_size,
                mode: spec.mode,
            },
            crc: spec.crc,
            sigma,
            quant_step,
        })
    }

    fn run_frame(&self, spec: &ExperimentSpec, snr_index: usize, frame: u64) -> Result<FrameTrial> {
        let mut rng = frame_rng(spec.master_seed, snr_index, frame);
        let payload: Vec<u8> = (0..self.code.payload_len())
            .map(|_| rng.gen_range(0..2))
            .collect();
        let u = self.code.assemble_data_word(&payload, self.crc.as_ref())?;
        let x = self.code.encode(&u)?;
        let y = transmit_awgn(&x, self.sigma, &mut rng)?;
        let llms = match self.config.mode {
            ArithmeticMode::Fixed { t } => {
                let step = self.quant_step.expect("fixed mode sets a step");
                let pairs = y
                    .iter()
                    .map(|&obs| quantize_channel(&llm_from_observation(obs, self.sigma), t, step))
                    .collect::<Result<Vec<_>>>()?;
                ChannelMessages::Fixed(pairs)
            }
            _ => ChannelMessages::Float(
                y.iter().map(|&obs| llm_from_observation(obs, self.sigma)).collect(),
            ),
        };
        let candidates = decode_scl(&self.code, &llms, &self.config, self.crc.as_ref())?;
        let fallback_draw = rng.gen_range(0..candidates.len());
        Ok(FrameTrial {
            tx_info: self.code.extract_info_bits(&u)?,
            tx_payload: payload,
            candidates,
            fallback_draw,
        })
    }
}

/// Applies one selection scheme to a decoded frame and counts its errors.
fn judge(
    trial: &FrameTrial,
    scheme: SelectionScheme,
    crc: Option<&CrcSpec>,
    fallback_random: bool,
) -> Result<(bool, u64)> {
    let words: Vec<Vec<u8>> = trial.candidates.iter().map(|c| c.info_bits.clone()).collect();
    let metrics: Vec<f64> = trial.candidates.iter().map(|c| c.metric).collect();
    let outcome = select_output(&words, &metrics, scheme, crc, Some(&trial.tx_info))?;
    let chosen = match outcome {
        SelectOutcome::Chosen(i) => i,
        SelectOutcome::Failure => {
            if fallback_random {
                trial.fallback_draw
            } else {
                0
            }
        }
    };
    let chosen_word = &trial.candidates[chosen];
    let frame_error = chosen_word.info_bits != trial.tx_info;
    let payload_len = trial.tx_payload.len();
    let bit_errors = chosen_word.info_bits[..payload_len]
        .iter()
        .zip(&trial.tx_payload)
        .filter(|(a, b)| a != b)
        .count() as u64;
    Ok((frame_error, bit_errors))
}

fn batch_sizes(max_frames: u64) -> impl Iterator<Item = (u64, u64)> {
    // Deterministic batch schedule: 256, 512, ..., capped, independent of
    // worker count.
    let mut start = 0u64;
    let mut size = 256u64;
    std::iter::from_fn(move || {
        if start >= max_frames {
            return None;
        }
        let len = size.min(max_frames - start);
        let out = (start, len);
        start += len;
        size = (size * 2).min(65_536);
        Some(out)
    })
}

/// Measures one SNR point of the experiment. `snr_index` selects the point
/// and salts the per-frame random streams.
pub fn run_point(spec: &ExperimentSpec, snr_index: usize) -> Result<FerRecord> {
    spec.validate()?;
    let snr_db = *spec
        .snr_points
        .get(snr_index)
        .ok_or_else(|| Error::InvalidParameter(format!("no SNR point {snr_index}")))?;
    let ctx = PointContext::new(spec, snr_db)?;

    let mut frames = 0u64;
    let mut frame_errors = 0u64;
    let mut bit_errors = 0u64;
    for (start, len) in batch_sizes(spec.max_frames) {
        let batch: Vec<(bool, u64)> = (start..start + len)
            .into_par_iter()
            .map(|frame| {
                let trial = ctx.run_frame(spec, snr_index, frame)?;
                judge(&trial, spec.selection, ctx.crc.as_ref(), spec.fallback_random)
            })
            .collect::<Result<_>>()?;
        for (err, bits) in batch {
            frames += 1;
            frame_errors += u64::from(err);
            bit_errors += bits;
        }
        if frame_errors >= spec.min_frame_errors {
            break;
        }
    }

    let (ci_low, ci_high) = wilson_interval(frame_errors, frames);
    let payload_bits = frames * (ctx.code.payload_len() as u64);
    Ok(FerRecord {
        snr_db,
        variant: spec.variant_label(),
        list_size: spec.list_size,
        mode: spec.mode_label(),
        frames,
        frame_errors,
        bit_errors,
        fer: frame_errors as f64 / frames as f64,
        ber: bit_errors as f64 / payload_bits as f64,
        wilson_ci_low: ci_low,
        wilson_ci_high: ci_high,
        seed: spec.master_seed,
    })
}

/// Runs every SNR point of the experiment.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<FerRecord>> {
    spec.validate()?;
    (0..spec.snr_points.len()).map(|i| run_point(spec, i)).collect()
}

/// Selection-scheme comparison on shared frames.
#[derive(Debug, Clone)]
pub struct SchemeComparison {
    /// One record per scheme per SNR point, ordered ds, ms, is.
    pub records: Vec<FerRecord>,
    /// Frames where the genie erred but direct selection did not. The genie
    /// lower-bounds every scheme frame by frame, so this stays 0.
    pub is_errors_without_ds_error: u64,
}

/// Runs DS, MS and IS on identical frames and candidate lists, so the
/// per-frame dominance of ideal selection is exact rather than statistical.
pub fn compare_selection_schemes(spec: &ExperimentSpec) -> Result<SchemeComparison> {
    spec.validate()?;
    if spec.crc.is_none() {
        return Err(Error::InvalidParameter(
            "scheme comparison needs a CRC-carrying code".into(),
        ));
    }
    let schemes = [
        SelectionScheme::Direct,
        SelectionScheme::MetricBased,
        SelectionScheme::Ideal,
    ];
    let mut records = Vec::new();
    let mut violations = 0u64;

    for snr_index in 0..spec.snr_points.len() {
        let snr_db = spec.snr_points[snr_index];
        let ctx = PointContext::new(spec, snr_db)?;
        let mut frames = 0u64;
        let mut errs = [0u64; 3];
        let mut bits = [0u64; 3];
        for (start, len) in batch_sizes(spec.max_frames) {
            let batch: Vec<([bool; 3], [u64; 3])> = (start..start + len)
                .into_par_iter()
                .map(|frame| {
                    let trial = ctx.run_frame(spec, snr_index, frame)?;
                    let mut err = [false; 3];
                    let mut be = [0u64; 3];
                    for (s, scheme) in schemes.iter().enumerate() {
                        let (e, b) =
                            judge(&trial, *scheme, ctx.crc.as_ref(), spec.fallback_random)?;
                        err[s] = e;
                        be[s] = b;
                    }
                    Ok((err, be))
                })
                .collect::<Result<_>>()?;
            for (err, be) in batch {
                frames += 1;
                for s in 0..3 {
                    errs[s] += u64::from(err[s]);
                    bits[s] += be[s];
                }
                if err[2] && !err[0] {
                    violations += 1;
                }
            }
            if errs.iter().all(|&e| e >= spec.min_frame_errors) {
                break;
            }
        }
        let payload_bits = frames * ctx.code.payload_len() as u64;
        for (s, scheme) in schemes.iter().enumerate() {
            let (ci_low, ci_high) = wilson_interval(errs[s], frames);
            records.push(FerRecord {
                snr_db,
                variant: format!("{}{}", scheme.as_str(), spec.list_size),
                list_size: spec.list_size,
                mode: spec.mode_label(),
                frames,
                frame_errors: errs[s],
                bit_errors: bits[s],
                fer: errs[s] as f64 / frames as f64,
                ber: bits[s] as f64 / payload_bits as f64,
                wilson_ci_low: ci_low,
                wilson_ci_high: ci_high,
                seed: spec.master_seed,
            });
        }
    }
    Ok(SchemeComparison {
        records,
        is_errors_without_ds_error: violations,
    })
}

/// Parses a flat `key = value` experiment config (one pair per line, `#`
/// comments). Unknown keys are rejected; missing keys keep their defaults.
pub fn parse_experiment_config(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let mut t_bits: u32 = 4;
    let mut mode_name: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad =
            |what: &str| Error::Parse(format!("line {}: bad {what} {value:?}", lineno + 1));
        match key {
            "n" => spec.n = value.parse().map_err(|_| bad("n"))?,
            "k" => spec.k = value.parse().map_err(|_| bad("k"))?,
            "design_erasure" => {
                spec.design_erasure = value.parse().map_err(|_| bad("design_erasure"))?
            }
            "crc" => spec.crc = CrcSpec::preset(value)?,
            "list_size" => spec.list_size = value.parse().map_err(|_| bad("list_size"))?,
            "mode" => mode_name = Some(value.to_string()),
            "t_bits" => t_bits = value.parse().map_err(|_| bad("t_bits"))?,
            "quant_step" => {
                spec.quant_step = Some(value.parse().map_err(|_| bad("quant_step"))?)
            }
            "selection" => spec.selection = SelectionScheme::parse(value)?,
            "snr" => {
                spec.snr_points = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("snr list"))?
            }
            "max_frames" => spec.max_frames = value.parse().map_err(|_| bad("max_frames"))?,
            "min_errors" => {
                spec.min_frame_errors = value.parse().map_err(|_| bad("min_errors"))?
            }
            "seed" => spec.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "fallback_random" => {
                spec.fallback_random = value.parse().map_err(|_| bad("fallback_random"))?
            }
            other => return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1))),
        }
    }
    if let Some(name) = mode_name {
        spec.mode = ArithmeticMode::parse(&name, t_bits)?;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            n: 4,
            k: 8,
            crc: None,
            list_size: 2,
            mode: ArithmeticMode::FloatMax,
            selection: SelectionScheme::MetricBased,
            snr_points: vec![40.0, 2.0],
            max_frames: 200,
            min_frame_errors: 10,
            master_seed: 7,
            ..ExperimentSpec::default()
        }
    }

    #[test]
    fn noiseless_proxy_point_has_zero_errors() {
        let record = run_point(&tiny_spec(), 0).unwrap();
        assert_eq!(record.frame_errors, 0);
        assert_eq!(record.fer, 0.0);
        assert_eq!(record.frames, 200);
    }

    #[test]
    fn identical_seeds_reproduce_records_exactly() {
        let spec = tiny_spec();
        let a = run_point(&spec, 1).unwrap();
        let b = run_point(&spec, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_emits_one_row_per_point() {
        let records = run_sweep(&tiny_spec()).unwrap();
        assert_eq!(records.len(), 2);
        let csv = to_csv(&records);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn scheme_comparison_counts_and_dominance() {
        let spec = ExperimentSpec {
            n: 5,
            k: 22,
            crc: Some(CrcSpec::crc16_ccitt()),
            list_size: 4,
            snr_points: vec![1.5],
            max_frames: 600,
            min_frame_errors: 20,
            master_seed: 3,
            ..ExperimentSpec::default()
        };
        let cmp = compare_selection_schemes(&spec).unwrap();
        assert_eq!(cmp.records.len(), 3);
        assert_eq!(cmp.is_errors_without_ds_error, 0);
        let ds = &cmp.records[0];
        let is = &cmp.records[2];
        assert_eq!(ds.frames, is.frames);
        assert!(is.frame_errors <= ds.frame_errors);
    }

    #[test]
    fn wilson_interval_sanity() {
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.0 && hi < 0.06);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(hi - lo < 0.25);
    }

    #[test]
    fn config_text_round_trip() {
        let text = "
            # experiment
            n = 5
            k = 16
            crc = crc16-ccitt-0x1021
            list_size = 4
            mode = fixed
            t_bits = 4
            selection = ds
            snr = 1.0, 2.0, 3.0
            max_frames = 5000
            min_errors = 50
            seed = 42
        ";
        let spec = parse_experiment_config(text).unwrap();
        assert_eq!(spec.n, 5);
        assert_eq!(spec.k, 16);
        assert_eq!(spec.crc, Some(CrcSpec::crc16_ccitt()));
        assert_eq!(spec.list_size, 4);
        assert_eq!(spec.mode, ArithmeticMode::Fixed { t: 4 });
        assert_eq!(spec.selection, SelectionScheme::Direct);
        assert_eq!(spec.snr_points, vec![1.0, 2.0, 3.0]);
        assert_eq!(spec.max_frames, 5000);
        assert_eq!(spec.min_frame_errors, 50);
        assert_eq!(spec.master_seed, 42);
        assert!(parse_experiment_config("bogus = 1").is_err());
        assert!(parse_experiment_config("n : 5").is_err());
    }

    #[test]
    fn labels() {
        let mut spec = tiny_spec();
        spec.list_size = 1;
        assert_eq!(spec.variant_label(), "sc");
        spec.list_size = 4;
        assert_eq!(spec.variant_label(), "scl4");
        spec.crc = Some(CrcSpec::crc32c());
        spec.selection = SelectionScheme::Direct;
        assert_eq!(spec.variant_label(), "ds4");
        spec.mode = ArithmeticMode::Fixed { t: 4 };
        assert_eq!(spec.mode_label(), "fixed-t4");
    }
}
