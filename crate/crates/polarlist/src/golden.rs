//! Golden-vector fixtures: a text (JSON) format pinning one decoded frame —
//! seed, noise level, codeword, per-bit channel messages and the expected
//! candidate list — so decoder regressions show up as fixture diffs.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::channel::{llm_from_observation, transmit_awgn};
use crate::code::PolarCode;
use crate::crc::CrcSpec;
use crate::decoder::{decode_scl, ChannelMessages, DecoderConfig};
use crate::kernel::{ArithmeticMode, Pair};
use crate::Result;

/// One pinned decode, self-contained enough to replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenFixture {
    pub seed: u64,
    pub sigma: f64,
    pub n: u32,
    pub frozen_set: Vec<usize>,
    pub crc_preset: Option<String>,
    pub list_size: usize,
    pub mode: String,
    pub t_bits: Option<u32>,
    pub codeword: Vec<u8>,
    /// Channel message pairs (v0, v1) per code bit.
    pub llms: Vec<(f64, f64)>,
    pub candidates: Vec<GoldenCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCandidate {
    pub u: Vec<u8>,
    pub metric: f64,
    pub crc_pass: Option<bool>,
}

impl GoldenFixture {
    /// Records a fixture by running the full pipeline on one seeded frame.
    pub fn record(
        code: &PolarCode,
        crc_preset: Option<&str>,
        config: &DecoderConfig,
        seed: u64,
        sigma: f64,
    ) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        let crc = match crc_preset {
            Some(name) => CrcSpec::preset(name)?,
            None => None,
        };
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let payload: Vec<u8> = (0..code.payload_len()).map(|_| rng.gen_range(0..2)).collect();
        let u = code.assemble_data_word(&payload, crc.as_ref())?;
        let codeword = code.encode(&u)?;
        let y = transmit_awgn(&codeword, sigma, &mut rng)?;
        let llms: Vec<(f64, f64)> = y
            .iter()
            .map(|&obs| {
                let p = llm_from_observation(obs, sigma);
                (p.v0, p.v1)
            })
            .collect();
        let candidates = Self::decode(code, crc.as_ref(), config, &llms)?;
        Ok(Self {
            seed,
            sigma,
            n: code.n(),
            frozen_set: code.frozen_set().to_vec(),
            crc_preset: crc_preset.map(str::to_string),
            list_size: config.list_size,
            mode: config.mode.as_str().to_string(),
            t_bits: match config.mode {
                ArithmeticMode::Fixed { t } => Some(t),
                _ => None,
            },
            codeword,
            llms,
            candidates,
        })
    }

    fn decode(
        code: &PolarCode,
        crc: Option<&CrcSpec>,
        config: &DecoderConfig,
        llms: &[(f64, f64)],
    ) -> Result<Vec<GoldenCandidate>> {
        let pairs = ChannelMessages::Float(
            llms.iter().map(|&(v0, v1)| Pair::new(v0, v1)).collect(),
        );
        let cands = decode_scl(code, &pairs, config, crc)?;
        Ok(cands
            .into_iter()
            .map(|c| GoldenCandidate {
                u: c.u,
                metric: c.metric,
                crc_pass: c.crc_pass,
            })
            .collect())
    }

    /// Re-runs the decoder on the recorded channel messages and returns the
    /// freshly produced candidates for comparison.
    pub fn replay(&self) -> Result<Vec<GoldenCandidate>> {
        let crc = match self.crc_preset.as_deref() {
            Some(name) => CrcSpec::preset(name)?,
            None => None,
        };
        let h = crc.map_or(0, |c| c.width());
        let code = PolarCode::from_frozen_set(self.n, self.frozen_set.clone(), h)?;
        let config = DecoderConfig {
            list_size: self.list_size,
            mode: ArithmeticMode::parse(&self.mode, self.t_bits.unwrap_or(4))?,
        };
        Self::decode(&code, crc.as_ref(), &config, &self.llms)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| crate::Error::Parse(e.to_string()))?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}
