//! Closed-form hardware cost analytics for the list decoder architecture:
//! per-PU bit-width profiling, decode cycle counts with throughput and
//! latency, the internal-message memory plan with its area estimate, the
//! partial-sum register count, and the FER-degradation bound of the direct
//! selection scheme.
//!
//! Everything here is analytical modeling, not synthesis. The area numbers
//! in particular come from a five-point area-per-bit table and a
//! nearest-depth lookup; treat them as coarse estimates.

use serde::Serialize;

use crate::{Error, Result};

/// Architecture parameters driving the analytical models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HwConfig {
    /// Block length N (power of two).
    pub block_len: usize,
    /// Processing units per decoding path, T (power of two, at most N/4).
    pub pus_per_path: usize,
    /// List size L (power of two).
    pub list_size: usize,
    /// Channel quantization bits t.
    pub channel_bits: u32,
    /// Pipeline stages inserted in the pruning path.
    pub pipeline_stages: u32,
    /// Clock frequency in Hz.
    pub clock_hz: f64,
}

impl HwConfig {
    pub fn validate(&self) -> Result<()> {
        let ok_pow2 = |v: usize| v >= 1 && v.is_power_of_two();
        if !ok_pow2(self.block_len) || self.block_len < 4 {
            return Err(Error::InvalidParameter(format!(
                "block length {} must be a power of two >= 4",
                self.block_len
            )));
        }
        if !ok_pow2(self.pus_per_path) || self.pus_per_path * 4 > self.block_len {
            return Err(Error::InvalidParameter(format!(
                "T = {} must be a power of two with T <= N/4 = {}",
                self.pus_per_path,
                self.block_len / 4
            )));
        }
        if !ok_pow2(self.list_size) {
            return Err(Error::InvalidParameter(format!(
                "list size {} must be a power of two",
                self.list_size
            )));
        }
        if self.channel_bits == 0 {
            return Err(Error::InvalidParameter("channel bits must be >= 1".into()));
        }
        if !(self.clock_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "clock frequency {} must be positive",
                self.clock_hz
            )));
        }
        Ok(())
    }

    /// Block exponent n.
    pub fn n(&self) -> u32 {
        self.block_len.trailing_zeros()
    }

    /// Memory split boundary `λ_o = n - log2 T - 1`; at least 1 for every
    /// valid config.
    pub fn lambda_o(&self) -> u32 {
        self.n() - self.pus_per_path.trailing_zeros() - 1
    }
}

/// Minimal no-overflow input widths for the T processing units of one array.
///
/// Unit j starts at `t + λ_o - 1` bits; each stage λ above the split
/// boundary then raises the first `2^(n-λ)` units to `t + λ - 1`, because
/// only those units take part in the narrower stages. The result is
/// non-increasing in j and peaks at `t + n - 1`.
pub fn fpp_profile(n: u32, t: u32, pus: usize) -> Result<Vec<u32>> {
    if t == 0 {
        return Err(Error::InvalidParameter("channel bits must be >= 1".into()));
    }
    if pus == 0 || !pus.is_power_of_two() || pus > (1usize << n) / 4 {
        return Err(Error::InvalidParameter(format!(
            "T = {pus} must be a power of two with T <= 2^(n-2) = {}",
            (1usize << n) / 4
        )));
    }
    let lambda_o = n - pus.trailing_zeros() - 1;
    let mut widths = vec![t + lambda_o - 1; pus];
    for lambda in lambda_o + 1..=n {
        for w in widths.iter_mut().take(1 << (n - lambda)) {
            *w = t + lambda - 1;
        }
    }
    Ok(widths)
}

/// Decode cycles for one codeword under partial-parallel processing:
/// `N_C = 2N + (N/T)·log2(N/(4T)) + n_p·R·N`, the middle term vanishing at
/// `T = N/4`.
pub fn cycle_count(cfg: &HwConfig, rate: f64) -> Result<f64> {
    cfg.validate()?;
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("rate {rate} not in (0, 1]")));
    }
    let n_blk = cfg.block_len as f64;
    let t = cfg.pus_per_path as f64;
    let log_term = (cfg.block_len / (4 * cfg.pus_per_path)).trailing_zeros() as f64;
    Ok(2.0 * n_blk + (n_blk / t) * log_term + f64::from(cfg.pipeline_stages) * rate * n_blk)
}

/// Throughput `TP = f·N·R / N_C` in bit/s and latency `T_D = N_C / f` in
/// seconds.
///
/// The cycle count depends on the code rate (the pruning pipeline stalls
/// once per unfrozen bit), while delivered throughput is normally accounted
/// at the effective payload rate; `payload_rate` equals `code_rate` when no
/// CRC is carried. Latency is reported in seconds: 3200 cycles at 500 MHz
/// are 6.4 µs.
pub fn throughput_latency(cfg: &HwConfig, code_rate: f64, payload_rate: f64) -> Result<(f64, f64)> {
    if !(payload_rate > 0.0 && payload_rate <= code_rate) {
        return Err(Error::InvalidParameter(format!(
            "payload rate {payload_rate} not in (0, code rate {code_rate}]"
        )));
    }
    let cycles = cycle_count(cfg, code_rate)?;
    let tp = cfg.clock_hz * cfg.block_len as f64 * payload_rate / cycles;
    let latency = cycles / cfg.clock_hz;
    Ok((tp, latency))
}

/// One regular memory instance of the split message memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemoryInstance {
    /// Words.
    pub depth: usize,
    /// Bits per word.
    pub width: usize,
    /// Capacity not backing any message bit.
    pub dummy_bits: u64,
}

impl MemoryInstance {
    pub fn total_bits(&self) -> u64 {
        self.depth as u64 * self.width as u64
    }
}

/// Plan of the internal message memory plus the channel memory shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemoryPlan {
    /// The `λ_o` regular instances; the first spans every word.
    pub instances: Vec<MemoryInstance>,
    /// Depth of the largest instance.
    pub n_w: usize,
    /// Channel memory: `N/(2T)` words.
    pub channel_words: usize,
    /// Channel memory word width: `2T(t+1)` bits (compressed messages).
    pub channel_width: usize,
}

impl MemoryPlan {
    /// Message bits actually stored: capacity minus dummies.
    pub fn stored_bits(&self) -> u64 {
        self.instances
            .iter()
            .map(|m| m.total_bits() - m.dummy_bits)
            .sum()
    }
}

/// Builds the message-memory plan.
///
/// Stage λ needs `2^(n-λ+1)·L` values of `t + λ` bits. Deep stages
/// (`λ < λ_o`) become sub-memories of `2^(n-λ-1)/T` words, each word packing
/// the `4LT` values one computation round touches; stages from `λ_o` up fit
/// in one word each. The concatenated irregular memory is covered by `λ_o`
/// regular instances: the first spans all `N_w` words at the stage-1 word
/// width `4LT(t+1)`, and every further instance adds a `4LT`-bit slab over
/// the words that still need width, with any slack booked as dummy bits.
pub fn memory_plan(cfg: &HwConfig) -> Result<MemoryPlan> {
    cfg.validate()?;
    let n = cfg.n();
    let lambda_o = cfg.lambda_o();
    let t = cfg.channel_bits as usize;
    let l = cfg.list_size;
    let pus = cfg.pus_per_path;

    // Rows of the concatenated memory as (count, useful bits per row).
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for lambda in 1..lambda_o as usize {
        let depth = (1usize << (n as usize - lambda - 1)) / pus;
        rows.push((depth, 4 * l * pus * (t + lambda)));
    }
    for lambda in lambda_o as usize..=n as usize {
        rows.push((1, (1usize << (n as usize - lambda + 1)) * l * (t + lambda)));
    }

    let base_width = 4 * l * pus * (t + 1);
    let slab_width = 4 * l * pus;
    let deep_rows: usize = rows[..lambda_o as usize - 1].iter().map(|r| r.0).sum();
    let n_w = deep_rows + (n - lambda_o + 1) as usize;

    let mut instances = Vec::with_capacity(lambda_o as usize);
    for k in 1..=lambda_o as usize {
        let width = if k == 1 { base_width } else { slab_width };
        // Instance k covers the rows of stages λ >= k.
        let covered = &rows[k - 1..];
        let depth: usize = covered.iter().map(|r| r.0).sum();
        let offset: usize = if k == 1 { 0 } else { base_width + (k - 2) * slab_width };
        let mut dummy = 0u64;
        for &(count, useful) in covered {
            let filled = useful.saturating_sub(offset).min(width);
            dummy += (count as u64) * (width - filled) as u64;
        }
        instances.push(MemoryInstance {
            depth,
            width,
            dummy_bits: dummy,
        });
    }
    debug_assert_eq!(instances[0].depth, n_w);

    Ok(MemoryPlan {
        instances,
        n_w,
        channel_words: cfg.block_len / (2 * pus),
        channel_width: 2 * pus * (t + 1),
    })
}

/// Area per bit (µm²) of a compiled register file by depth, 90 nm class.
const APB_TABLE: [(usize, f64); 5] = [(8, 23.7), (16, 13.1), (32, 7.9), (64, 5.2), (128, 3.89)];

/// Area per bit for a given instance depth: nearest tabulated depth, ties
/// toward the shallower (more conservative) entry, clamped at the ends.
pub fn area_per_bit(depth: usize) -> f64 {
    let mut best = APB_TABLE[0];
    let mut best_dist = usize::MAX;
    for &(d, apb) in &APB_TABLE {
        let dist = d.abs_diff(depth);
        if dist < best_dist {
            best = (d, apb);
            best_dist = dist;
        }
    }
    best.1
}

/// Coarse area estimate of a memory plan: every instance contributes its
/// full capacity (dummies included) at the APB of its depth.
pub fn area_estimate(plan: &MemoryPlan) -> f64 {
    plan.instances
        .iter()
        .map(|m| m.total_bits() as f64 * area_per_bit(m.depth))
        .sum()
}

/// Single-bit partial-sum registers needed per decoding path: `N/2 - 1`.
pub fn psu_register_count(block_len: usize) -> Result<usize> {
    if block_len < 2 || !block_len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "block length {block_len} must be a power of two >= 2"
        )));
    }
    Ok(block_len / 2 - 1)
}

/// Inputs of the direct-selection FER-degradation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeParams {
    /// Candidate bit error probability; the SC bit error rate at the
    /// operating SNR is the usual stand-in.
    pub p_b: f64,
    /// Data-word length K in bits.
    pub k: usize,
    /// Guaranteed-detectable error weight of the CRC.
    pub w: usize,
    /// List size L.
    pub list_size: usize,
    /// Optional override of the CRC-failure probability p2, otherwise
    /// derived from `p1 + p2 + p3 = 1`.
    pub p2_override: Option<f64>,
}

/// Upper bound on the FER increase of direct selection over ideal selection:
/// `P_e <= p3·(1 - p2^L)/(1 - p2) + p2^L - (1 - p1)^L`.
///
/// `p1 = (1-p_b)^K` is the probability a candidate equals the transmitted
/// word and `p3 ≈ C(K, w+1)·p_b^(w+1)·(1-p_b)^(K-w-1)` the probability the
/// CRC misses a corrupted candidate. Evaluated in log space so that K in the
/// hundreds and p_b near 1e-6 stay finite. The p3 approximation keeps only
/// the lightest undetectable error weight, so the bound is meaningful for
/// `p_b` well below `(w+1)/K`.
pub fn pe_estimate(params: &PeParams) -> Result<f64> {
    let PeParams { p_b, k, w, list_size, p2_override } = *params;
    if !(p_b > 0.0 && p_b < 1.0) {
        return Err(Error::InvalidParameter(format!("p_b = {p_b} not in (0, 1)")));
    }
    if w + 1 >= k {
        return Err(Error::InvalidParameter(format!(
            "detectable weight w = {w} must be below K - 1 = {}",
            k - 1
        )));
    }
    if list_size == 0 {
        return Err(Error::InvalidParameter("list size must be >= 1".into()));
    }
    let ln_q = (-p_b).ln_1p();
    let ln_p1 = k as f64 * ln_q;
    let p1 = ln_p1.exp();
    let one_minus_p1 = -ln_p1.exp_m1();
    let ln_p3 =
        ln_binomial(k, w + 1) + (w as f64 + 1.0) * p_b.ln() + (k - w - 1) as f64 * ln_q;
    let p3 = ln_p3.exp();
    let p2 = match p2_override {
        Some(v) => {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("p2 = {v} not in [0, 1]")));
            }
            v
        }
        None => (1.0 - p1 - p3).max(0.0),
    };

    // Geometric series sum_{j<L} p2^j; the p2 = 1 limit is L.
    let mut geometric = 0.0;
    let mut power = 1.0;
    for _ in 0..list_size {
        geometric += power;
        power *= p2;
    }
    let pe = p3 * geometric + p2.powi(list_size as i32) - one_minus_p1.powi(list_size as i32);
    Ok(pe)
}

fn ln_binomial(n: usize, r: usize) -> f64 {
    (1..=r)
        .map(|j| ((n - r + j) as f64).ln() - (j as f64).ln())
        .sum()
}

/// JSON-friendly summary emitted by the `hwmodel` CLI subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct HwReport {
    #[serde(rename = "N_C")]
    pub n_c: f64,
    #[serde(rename = "TP_bps")]
    pub tp_bps: f64,
    #[serde(rename = "T_D_s")]
    pub t_d_s: f64,
    #[serde(rename = "N_w")]
    pub n_w: usize,
    pub instances: Vec<MemoryInstance>,
    pub area_um2: f64,
    pub pu_widths: Vec<u32>,
    #[serde(rename = "P_e_bound")]
    pub p_e_bound: Option<f64>,
}

/// Runs every analytical model for one configuration.
pub fn hw_report(
    cfg: &HwConfig,
    code_rate: f64,
    payload_rate: f64,
    pe: Option<&PeParams>,
) -> Result<HwReport> {
    let n_c = cycle_count(cfg, code_rate)?;
    let (tp, latency) = throughput_latency(cfg, code_rate, payload_rate)?;
    let plan = memory_plan(cfg)?;
    let widths = fpp_profile(cfg.n(), cfg.channel_bits, cfg.pus_per_path)?;
    let bound = pe.map(pe_estimate).transpose()?;
    Ok(HwReport {
        n_c,
        tp_bps: tp,
        t_d_s: latency,
        n_w: plan.n_w,
        area_um2: area_estimate(&plan),
        instances: plan.instances,
        pu_widths: widths,
        p_e_bound: bound,
    })
}
