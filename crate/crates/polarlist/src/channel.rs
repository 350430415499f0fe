//! BPSK/AWGN transmission and channel message formation.
//!
//! Bit 0 maps to +1, bit 1 to -1. For each observation the two
//! log-likelihood messages are normalized against the less likely symbol, so
//! one entry of the pair is always 0 and the other is `2|y|/σ²`. That makes
//! the channel message compressible to a magnitude plus a one-bit symbol
//! index, and is also the starting point of the t-bit fixed-point quantizer.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::kernel::Pair;
use crate::{Error, Result};

/// Float channel message pair; `v0`/`v1` are the log-likelihood values for
/// bit 0 and bit 1.
pub type LlmPair = Pair<f64>;

/// Width-tagged unsigned channel message pair produced by the quantizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedLlmPair {
    pub v0: u32,
    pub v1: u32,
    /// Quantization width in bits; both entries are below `2^width`.
    pub width: u32,
}

impl FixedLlmPair {
    pub fn as_pair(&self) -> Pair<u32> {
        Pair::new(self.v0, self.v1)
    }
}

/// A channel message stored as its non-negative magnitude plus the index of
/// the more likely symbol: `t + 1` bits instead of `2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressedChannelMsg {
    /// The non-zero log-likelihood magnitude.
    pub msg: u32,
    /// Which slot carries the magnitude: `false` for bit 0, `true` for bit 1.
    pub s: bool,
}

/// BPSK-modulates a codeword and adds white Gaussian noise of standard
/// deviation `sigma`.
pub fn transmit_awgn<R: Rng + ?Sized>(
    codeword: &[u8],
    sigma: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise standard deviation {sigma} must be positive"
        )));
    }
    let noise = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("bad noise parameters: {e}")))?;
    Ok(codeword
        .iter()
        .map(|&bit| {
            let symbol = if bit == 0 { 1.0 } else { -1.0 };
            symbol + noise.sample(rng)
        })
        .collect())
}

/// Noise standard deviation for an Eb/N0 point (dB) at effective rate
/// `rate_eff`: `σ² = 1 / (2 · R · 10^(EbN0/10))`.
pub fn sigma_for_ebn0_db(ebn0_db: f64, rate_eff: f64) -> f64 {
    (1.0 / (2.0 * rate_eff * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// Log-likelihood message pair of one observation: `log Pr(y|j) - log
/// Pr(y|m)` with `m` the less likely symbol, which for BPSK/AWGN puts
/// `2|y|/σ²` on the favored bit and 0 on the other.
pub fn llm_from_observation(y: f64, sigma: f64) -> LlmPair {
    let magnitude = 2.0 * y.abs() / (sigma * sigma);
    if y >= 0.0 {
        Pair::new(magnitude, 0.0)
    } else {
        Pair::new(0.0, magnitude)
    }
}

/// Stores the non-zero entry of a channel pair together with its slot index.
///
/// Rejects pairs where neither entry is zero; those cannot occur at the
/// channel stage. The all-zero pair compresses canonically to `s = false`.
pub fn compress(pair: &FixedLlmPair) -> Result<CompressedChannelMsg> {
    if pair.v0 != 0 && pair.v1 != 0 {
        return Err(Error::Uncompressible {
            v0: pair.v0,
            v1: pair.v1,
        });
    }
    if pair.v1 != 0 {
        Ok(CompressedChannelMsg {
            msg: pair.v1,
            s: true,
        })
    } else {
        Ok(CompressedChannelMsg {
            msg: pair.v0,
            s: false,
        })
    }
}

/// Expands a compressed channel message back into a width-tagged pair;
/// exact inverse of [`compress`].
pub fn decompress(cm: &CompressedChannelMsg, width: u32) -> FixedLlmPair {
    if cm.s {
        FixedLlmPair {
            v0: 0,
            v1: cm.msg,
            width,
        }
    } else {
        FixedLlmPair {
            v0: cm.msg,
            v1: 0,
            width,
        }
    }
}

/// Quantizes a float channel pair to `t` bits: the magnitude is divided by
/// `step`, rounded half away from zero, and clamped to `2^t - 1`; the zero
/// entry stays zero.
pub fn quantize_channel(pair: &LlmPair, t: u32, step: f64) -> Result<FixedLlmPair> {
    if t == 0 || t > 16 {
        return Err(Error::InvalidParameter(format!(
            "channel quantization width {t} not in 1..=16"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quantization step {step} must be positive"
        )));
    }
    let max = (1u32 << t) - 1;
    let q = |v: f64| -> u32 {
        let scaled = (v / step).round();
        if scaled <= 0.0 {
            0
        } else if scaled >= f64::from(max) {
            max
        } else {
            scaled as u32
        }
    };
    Ok(FixedLlmPair {
        v0: q(pair.v0),
        v1: q(pair.v1),
        width: t,
    })
}

/// Default quantizer step at a given noise level: the t-bit range is scaled
/// to twice the mean channel-message magnitude, `step = 2·E[|LLM|] / 2^t`.
///
/// Overridable per experiment; documented so fixed-point error rates are
/// reproducible.
pub fn default_quant_step(t: u32, sigma: f64) -> f64 {
    // E|y| for y ~ N(±1, σ²) by symmetry of the constellation.
    let mean_abs_y = sigma * (2.0 / std::f64::consts::PI).sqrt()
        * (-1.0 / (2.0 * sigma * sigma)).exp()
        + erf(1.0 / (sigma * std::f64::consts::SQRT_2));
    let mean_abs_llm = 2.0 * mean_abs_y / (sigma * sigma);
    2.0 * mean_abs_llm / f64::from(1u32 << t)
}

/// Abramowitz-Stegun 7.1.26 rational approximation, |error| < 1.5e-7.
/// Plenty for picking a quantizer scale.
fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}
