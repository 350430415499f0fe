//! Serial-LFSR CRC generation/checking and final-candidate selection.
//!
//! The checksum engine models the classic bit-serial CRC shift register:
//! most-significant-bit first, register initialized to zero, no reflection
//! and no output inversion. Feeding message bits `m` yields
//! `m(x) · x^h mod p(x)`, so the published check value for CRC-16/0x1021
//! over ASCII `"123456789"` is `0x31C3`.
//!
//! During list decoding every path carries an incremental [`DataWordCrc`]:
//! the first `K - h` information bits clock the LFSR, the last `h` are
//! compared bit-by-bit against the captured checksum, mirroring the serial
//! checker's shift/compare phases.

use crate::{Error, Result};

/// A CRC polynomial `p(x) = x^h + p_{h-1} x^{h-1} + ... + p_1 x + 1`.
///
/// `poly` holds the low `h` coefficients (the `x^h` term is implicit), so the
/// CRC-16/CCITT polynomial is written `0x1021`. `detectable_weight` is the
/// guaranteed-detectable error weight `w` used by the analytical
/// FER-degradation bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcSpec {
    width: usize,
    poly: u64,
    detectable_weight: usize,
}

impl CrcSpec {
    /// Builds a spec from the low coefficients of `p(x)`.
    pub fn new(width: usize, poly: u64, detectable_weight: usize) -> Result<Self> {
        if width == 0 || width > 32 {
            return Err(Error::InvalidParameter(format!(
                "CRC width {width} not in 1..=32"
            )));
        }
        if poly & 1 == 0 {
            return Err(Error::InvalidParameter(
                "CRC polynomial must have a trailing 1 coefficient".into(),
            ));
        }
        if width < 64 && poly >> width != 0 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} wider than {width} bits"
            )));
        }
        Ok(Self {
            width,
            poly,
            detectable_weight,
        })
    }

    /// CRC-16 with generator 0x1021, detectable error weight 2.
    pub fn crc16_ccitt() -> Self {
        Self {
            width: 16,
            poly: 0x1021,
            detectable_weight: 2,
        }
    }

    /// CRC-32C (Castagnoli) with generator 0x1EDC6F41, detectable error
    /// weight 4.
    pub fn crc32c() -> Self {
        Self {
            width: 32,
            poly: 0x1EDC_6F41,
            detectable_weight: 4,
        }
    }

    /// Looks up a preset by its CLI name.
    pub fn preset(name: &str) -> Result<Option<Self>> {
        match name {
            "none" => Ok(None),
            "crc16-ccitt-0x1021" => Ok(Some(Self::crc16_ccitt())),
            "crc32c-0x1EDC6F41" => Ok(Some(Self::crc32c())),
            other => Err(Error::InvalidParameter(format!("unknown CRC preset {other:?}"))),
        }
    }

    /// Checksum width `h` in bits.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Low coefficients of the generator polynomial.
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Guaranteed-detectable error weight `w`.
    pub fn detectable_weight(&self) -> usize {
        self.detectable_weight
    }

    /// One-shot checksum of a bit sequence.
    pub fn checksum(&self, bits: &[u8]) -> u64 {
        let mut engine = CrcEngine::new(*self);
        for &b in bits {
            engine.feed(b);
        }
        engine.finalize()
    }

    /// One-shot checksum rendered MSB-first as individual bits.
    pub fn checksum_bits(&self, bits: &[u8]) -> Vec<u8> {
        let sum = self.checksum(bits);
        (0..self.width)
            .rev()
            .map(|k| ((sum >> k) & 1) as u8)
            .collect()
    }
}

/// Incremental serial CRC register.
#[derive(Debug, Clone, Copy)]
pub struct CrcEngine {
    spec: CrcSpec,
    reg: u64,
}

impl CrcEngine {
    pub fn new(spec: CrcSpec) -> Self {
        Self { spec, reg: 0 }
    }

    /// Clocks one message bit (0 or 1) into the register.
    pub fn feed(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        let h = self.spec.width;
        let feedback = ((self.reg >> (h - 1)) ^ u64::from(bit)) & 1;
        let mask = if h == 64 { u64::MAX } else { (1u64 << h) - 1 };
        self.reg = ((self.reg << 1) & mask) ^ (feedback * self.spec.poly);
    }

    /// Current register contents, i.e. the checksum of everything fed so far.
    pub fn finalize(&self) -> u64 {
        self.reg
    }
}

/// Checks a K-bit data word: the checksum over the first `K - h` bits must
/// equal the last `h` bits.
pub fn crc_check_data_word(info_bits: &[u8], spec: &CrcSpec) -> Result<bool> {
    let h = spec.width;
    if info_bits.len() < h {
        return Err(Error::InvalidParameter(format!(
            "data word of {} bits shorter than CRC width {h}",
            info_bits.len()
        )));
    }
    let (payload, checksum) = info_bits.split_at(info_bits.len() - h);
    Ok(spec.checksum_bits(payload) == checksum)
}

/// Per-path incremental data-word checker.
///
/// Cloned whenever a decoding path is duplicated, same as the checksum
/// registers travelling through the hardware switch network.
#[derive(Debug, Clone, Copy)]
pub struct DataWordCrc {
    engine: CrcEngine,
    payload_len: usize,
    fed: usize,
    captured: u64,
    mismatch: bool,
}

impl DataWordCrc {
    /// `payload_len` is `K - h`, the number of bits that clock the LFSR
    /// before the compare phase starts.
    pub fn new(spec: CrcSpec, payload_len: usize) -> Self {
        Self {
            engine: CrcEngine::new(spec),
            payload_len,
            fed: 0,
            captured: 0,
            mismatch: false,
        }
    }

    /// Feeds the next decoded information bit.
    pub fn feed(&mut self, bit: u8) {
        let h = self.engine.spec.width;
        if self.fed < self.payload_len {
            self.engine.feed(bit);
            if self.fed + 1 == self.payload_len {
                self.captured = self.engine.finalize();
            }
        } else {
            let pos = self.fed - self.payload_len;
            debug_assert!(pos < h, "fed more than K bits into the data-word checker");
            let expected = ((self.captured >> (h - 1 - pos)) & 1) as u8;
            if expected != bit {
                self.mismatch = true;
            }
        }
        self.fed += 1;
    }

    /// True once all `K` bits were fed and every compare matched.
    pub fn passed(&self) -> bool {
        let h = self.engine.spec.width;
        !self.mismatch && self.fed == self.payload_len + h
    }
}

/// How the final codeword is picked from the candidate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionScheme {
    /// Direct selection: the lowest-index candidate that passes the CRC.
    Direct,
    /// Metric-based selection: the CRC-passing candidate with the largest
    /// path metric.
    MetricBased,
    /// Ideal (genie) selection: the transmitted data word if listed.
    /// Simulation only.
    Ideal,
}

impl SelectionScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectionScheme::Direct => "ds",
            SelectionScheme::MetricBased => "ms",
            SelectionScheme::Ideal => "is",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ds" => Ok(SelectionScheme::Direct),
            "ms" => Ok(SelectionScheme::MetricBased),
            "is" => Ok(SelectionScheme::Ideal),
            other => Err(Error::InvalidParameter(format!(
                "unknown selection scheme {other:?}"
            ))),
        }
    }
}

/// Result of [`select_output`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectOutcome {
    /// Index of the chosen candidate.
    Chosen(usize),
    /// Decoding failure: no candidate passed (DS/MS) or the transmitted word
    /// was not in the list (IS). The caller decides whether to re-transmit or
    /// fall back to some candidate.
    Failure,
}

/// Picks the final output among candidate data words.
///
/// `data_words` are the K-bit information words of the surviving paths in
/// list order, `metrics` their path metrics. With `spec == None` (no CRC)
/// every candidate counts as passing. The ideal scheme needs `transmitted`.
pub fn select_output(
    data_words: &[Vec<u8>],
    metrics: &[f64],
    scheme: SelectionScheme,
    spec: Option<&CrcSpec>,
    transmitted: Option<&[u8]>,
) -> Result<SelectOutcome> {
    if data_words.len() != metrics.len() {
        return Err(Error::LengthMismatch {
            expected: data_words.len(),
            got: metrics.len(),
        });
    }
    let passes = |w: &Vec<u8>| -> Result<bool> {
        match spec {
            Some(s) => crc_check_data_word(w, s),
            None => Ok(true),
        }
    };
    match scheme {
        SelectionScheme::Direct => {
            for (l, w) in data_words.iter().enumerate() {
                if passes(w)? {
                    return Ok(SelectOutcome::Chosen(l));
                }
            }
            Ok(SelectOutcome::Failure)
        }
        SelectionScheme::MetricBased => {
            let mut best: Option<(usize, f64)> = None;
            for (l, w) in data_words.iter().enumerate() {
                if passes(w)? {
                    let better = match best {
                        Some((_, m)) => metrics[l] > m,
                        None => true,
                    };
                    if better {
                        best = Some((l, metrics[l]));
                    }
                }
            }
            Ok(best.map_or(SelectOutcome::Failure, |(l, _)| SelectOutcome::Chosen(l)))
        }
        SelectionScheme::Ideal => {
            let tx = transmitted.ok_or(Error::IdealSelectionNeedsTransmitted)?;
            for (l, w) in data_words.iter().enumerate() {
                if w.as_slice() == tx {
                    return Ok(SelectOutcome::Chosen(l));
                }
            }
            Ok(SelectOutcome::Failure)
        }
    }
}
