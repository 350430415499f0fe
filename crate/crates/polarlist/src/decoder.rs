//! The SC/SCL/CA-SCL decoding engine.
//!
//! Decoding proceeds bit by bit. For decode index `i`, every surviving path
//! recomputes its message arrays from stage `φ(i)` up to stage `n`: the first
//! recomputed stage uses the G kernel fed by a partial sum, the rest use F.
//! At information bits each path splits in two and the L most reliable of
//! the 2L extensions survive.
//!
//! Paths are duplicated lazily. The message arrays of a path stay in their
//! physical slot forever; a path holds a reference index per stage saying
//! which slot physically stores the messages it logically owns. Duplicating
//! a path copies those references, the partial-sum arrays, the running CRC
//! register and the decoded prefix, but never the message arrays themselves.
//! A stage reference is only ever consumed by the next G computation at that
//! stage boundary, and every slot rewrites its own stage (and re-points its
//! reference at itself) before the values could go stale; the deep-copy
//! equivalence suite exercises exactly this property.

use crate::channel::{FixedLlmPair, LlmPair};
use crate::code::PolarCode;
use crate::crc::{CrcSpec, DataWordCrc};
use crate::kernel::{
    first_update_stage, ArithmeticMode, FixedPoint, FloatExact, FloatMax, Kernel, Message, Pair,
};
use crate::prune::{prune_by_sort, MetricEntry};
use crate::{Error, Result};

/// List decoder configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderConfig {
    /// List size L; a power of two, 1 for plain SC.
    pub list_size: usize,
    /// Message arithmetic.
    pub mode: ArithmeticMode,
}

impl DecoderConfig {
    fn validate(&self) -> Result<()> {
        if self.list_size == 0 || !self.list_size.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "list size {} must be a power of two >= 1",
                self.list_size
            )));
        }
        Ok(())
    }
}

/// Channel messages in the representation matching the arithmetic mode.
#[derive(Debug, Clone)]
pub enum ChannelMessages {
    Float(Vec<LlmPair>),
    Fixed(Vec<FixedLlmPair>),
}

impl ChannelMessages {
    pub fn len(&self) -> usize {
        match self {
            ChannelMessages::Float(v) => v.len(),
            ChannelMessages::Fixed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One surviving decoding path.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// The decoded input word, frozen positions included.
    pub u: Vec<u8>,
    /// The K information bits of `u` (payload followed by checksum).
    pub info_bits: Vec<u8>,
    /// Path metric of the final extension; integer-valued in fixed mode.
    pub metric: f64,
    /// Verdict of the per-path incremental CRC, when one was tracked.
    pub crc_pass: Option<bool>,
    /// The codeword accumulated by the partial-sum update; always equals the
    /// re-encoding of `u`.
    pub codeword: Vec<u8>,
}

/// Decodes one frame, returning all surviving candidates in list order.
///
/// The channel messages must match `config.mode`: float pairs for the float
/// modes, `t`-bit quantized pairs for `Fixed { t }`. Pass the code's CRC spec
/// to run the per-path incremental checksum; candidates then carry a
/// `crc_pass` verdict.
pub fn decode_scl(
    code: &PolarCode,
    llms: &ChannelMessages,
    config: &DecoderConfig,
    crc: Option<&CrcSpec>,
) -> Result<Vec<Candidate>> {
    config.validate()?;
    if llms.len() != code.block_len() {
        return Err(Error::LengthMismatch {
            expected: code.block_len(),
            got: llms.len(),
        });
    }
    if let Some(spec) = crc {
        if spec.width() != code.crc_width() {
            return Err(Error::InvalidParameter(format!(
                "CRC spec width {} does not match code h = {}",
                spec.width(),
                code.crc_width()
            )));
        }
    }
    match (config.mode, llms) {
        (ArithmeticMode::FloatExact, ChannelMessages::Float(pairs)) => {
            decode_scl_with_kernel(code, FloatExact, pairs.clone(), config.list_size, crc)
        }
        (ArithmeticMode::FloatMax, ChannelMessages::Float(pairs)) => {
            decode_scl_with_kernel(code, FloatMax, pairs.clone(), config.list_size, crc)
        }
        (ArithmeticMode::Fixed { t }, ChannelMessages::Fixed(pairs)) => {
            let mut channel = Vec::with_capacity(pairs.len());
            for p in pairs {
                if p.width != t {
                    return Err(Error::InvalidParameter(format!(
                        "channel pair width {} does not match mode t = {t}",
                        p.width
                    )));
                }
                if p.v0 >> t != 0 || p.v1 >> t != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "channel pair ({}, {}) does not fit {t} bits",
                        p.v0, p.v1
                    )));
                }
                channel.push(p.as_pair());
            }
            decode_scl_with_kernel(code, FixedPoint::new(t), channel, config.list_size, crc)
        }
        _ => Err(Error::InvalidParameter(
            "channel message representation does not match the arithmetic mode".into(),
        )),
    }
}

/// Kernel-generic list decode; the enum-dispatching [`decode_scl`] wraps
/// this. Public so tests can instrument the arithmetic.
pub fn decode_scl_with_kernel<K: Kernel>(
    code: &PolarCode,
    kernel: K,
    channel: Vec<Pair<K::Msg>>,
    list_size: usize,
    crc: Option<&CrcSpec>,
) -> Result<Vec<Candidate>> {
    let mut state = ListState::new(code, kernel, channel, list_size, crc.copied());
    for i in 0..code.block_len() {
        state.advance(i)?;
    }
    Ok(state.into_candidates())
}

/// Per-slot message storage: `stages[λ - 1]` holds the `2^(n-λ)` pairs of
/// stage λ. Slots never move; lazy copy points other paths at them.
struct Slot<M> {
    stages: Vec<Vec<Pair<M>>>,
}

impl<M: Message> Slot<M> {
    fn new(n: u32) -> Self {
        let stages = (1..=n)
            .map(|lambda| vec![Pair::<M>::default(); 1 << (n - lambda)])
            .collect();
        Self { stages }
    }

    #[inline]
    fn stage(&self, lambda: u32) -> &[Pair<M>] {
        &self.stages[lambda as usize - 1]
    }

    #[inline]
    fn stage_mut(&mut self, lambda: u32) -> &mut Vec<Pair<M>> {
        &mut self.stages[lambda as usize - 1]
    }
}

/// Logical path state: everything that is copied when a path is duplicated.
#[derive(Clone)]
struct PathMeta<M> {
    /// Partial-sum arrays; `c[λ][β]` is the two-slot group of stage λ.
    c: Vec<Vec<[u8; 2]>>,
    /// Per-stage reference: which slot physically holds this path's stage-λ
    /// messages. `refs[0]` is pinned to 0 (the shared channel stage).
    refs: Vec<usize>,
    /// Decoded input bits so far, frozen positions included.
    decoded: Vec<u8>,
    /// Running data-word checksum.
    crc: Option<DataWordCrc>,
    /// Metric of this path's latest extension.
    metric: M,
}

impl<M: Message> PathMeta<M> {
    fn new(code: &PolarCode, crc: Option<CrcSpec>) -> Self {
        let n = code.n();
        let c = (0..=n)
            .map(|lambda| vec![[0u8; 2]; 1 << (n - lambda)])
            .collect();
        Self {
            c,
            refs: vec![0; n as usize],
            decoded: Vec::with_capacity(code.block_len()),
            crc: crc.map(|spec| DataWordCrc::new(spec, code.payload_len())),
            metric: M::default(),
        }
    }
}

struct ListState<'a, K: Kernel> {
    code: &'a PolarCode,
    kernel: K,
    list_size: usize,
    channel: Vec<Pair<K::Msg>>,
    slots: Vec<Slot<K::Msg>>,
    meta: Vec<PathMeta<K::Msg>>,
    scratch: Vec<Pair<K::Msg>>,
}

impl<'a, K: Kernel> ListState<'a, K> {
    fn new(
        code: &'a PolarCode,
        kernel: K,
        channel: Vec<Pair<K::Msg>>,
        list_size: usize,
        crc: Option<CrcSpec>,
    ) -> Self {
        Self {
            code,
            kernel,
            list_size,
            channel,
            slots: vec![Slot::new(code.n())],
            meta: vec![PathMeta::new(code, crc)],
            scratch: Vec::with_capacity(code.block_len() / 2),
        }
    }

    fn active(&self) -> usize {
        self.meta.len()
    }

    /// Runs one decode index: reference refresh, message propagation,
    /// extension (with splitting at information bits), partial-sum update.
    fn advance(&mut self, i: usize) -> Result<()> {
        let n = self.code.n();
        let phi = first_update_stage(i, n);

        // Stages >= φ are about to be rewritten in place, so each path now
        // owns them physically.
        for l in 0..self.active() {
            for lambda in phi..n {
                self.meta[l].refs[lambda as usize] = l;
            }
        }
        for l in 0..self.active() {
            self.propagate_messages(l, i);
        }

        if self.code.is_frozen(i) {
            for l in 0..self.active() {
                let metric = self.slots[l].stage(n)[0].v0;
                self.extend(l, i, 0, metric, false);
            }
        } else {
            self.split_information_bit(i)?;
        }

        if i % 2 == 1 {
            for l in 0..self.active() {
                self.update_partial_sums(l, n, i);
            }
        }
        Ok(())
    }

    /// Recomputes the message arrays of path `l` for decode index `i`
    /// (stages φ(i) to n). The first stage uses G with the partial sum and
    /// reads from the referenced slot; the rest use F on the path's own
    /// freshly written arrays. Index 0 runs F only.
    fn propagate_messages(&mut self, l: usize, i: usize) {
        let n = self.code.n();
        let phi = first_update_stage(i, n);
        for lambda in phi..=n {
            let outputs = 1usize << (n - lambda);
            let use_g = i > 0 && lambda == phi;
            let src = if use_g {
                self.meta[l].refs[lambda as usize - 1]
            } else {
                l
            };

            let Self {
                channel,
                slots,
                meta,
                scratch,
                kernel,
                ..
            } = self;
            scratch.clear();
            let src_stage: &[Pair<K::Msg>] = if lambda == 1 {
                channel
            } else {
                slots[src].stage(lambda - 1)
            };
            let psums = &meta[l].c[lambda as usize];
            for k in 0..outputs {
                let even = src_stage[2 * k];
                let odd = src_stage[2 * k + 1];
                let out = if use_g {
                    kernel.g(even, odd, psums[k][0], lambda)
                } else {
                    kernel.f(even, odd, lambda)
                };
                scratch.push(out);
            }
            self.slots[l].stage_mut(lambda).copy_from_slice(&self.scratch);
        }
    }

    /// Splits every path on an information bit and keeps the best
    /// extensions. While fewer than L paths are live, both extensions of
    /// every path survive: the bit-0 child keeps its parent's slot and the
    /// bit-1 child opens a fresh one.
    fn split_information_bit(&mut self, i: usize) -> Result<()> {
        let n = self.code.n();
        let active = self.active();
        let metrics: Vec<Pair<K::Msg>> =
            (0..active).map(|l| self.slots[l].stage(n)[0]).collect();

        if 2 * active <= self.list_size {
            for l in 0..active {
                self.meta.push(self.meta[l].clone());
                self.slots.push(Slot::new(n));
            }
            for l in 0..active {
                self.extend(l, i, 0, metrics[l].v0, true);
                self.extend(active + l, i, 1, metrics[l].v1, true);
            }
            return Ok(());
        }

        let mut entries = Vec::with_capacity(2 * active);
        for (l, m) in metrics.iter().enumerate() {
            entries.push(MetricEntry::new(m.v0, l, 0));
            entries.push(MetricEntry::new(m.v1, l, 1));
        }
        let survivors = prune_by_sort(&entries)?;

        // Lazy copy: replace the logical path states, leave every message
        // slot where it is. Move instead of clone on the last use of each
        // source path.
        let mut uses = vec![0usize; active];
        for s in &survivors {
            uses[s.list_index] += 1;
        }
        let mut old: Vec<Option<PathMeta<K::Msg>>> =
            std::mem::take(&mut self.meta).into_iter().map(Some).collect();
        let mut new_meta = Vec::with_capacity(survivors.len());
        for s in &survivors {
            uses[s.list_index] -= 1;
            let source = if uses[s.list_index] == 0 {
                old[s.list_index].take().expect("source path consumed twice")
            } else {
                old[s.list_index].as_ref().expect("source path gone").clone()
            };
            new_meta.push(source);
        }
        self.meta = new_meta;
        for (l, s) in survivors.iter().enumerate() {
            self.extend(l, i, s.bit, s.metric, true);
        }
        Ok(())
    }

    /// Commits a decided bit on path `l`: records it, stores it as the
    /// stage-n partial sum, and clocks the data-word CRC on information
    /// bits.
    fn extend(&mut self, l: usize, i: usize, bit: u8, metric: K::Msg, is_info: bool) {
        let n = self.code.n();
        let meta = &mut self.meta[l];
        meta.decoded.push(bit);
        meta.c[n as usize][0][i % 2] = bit;
        meta.metric = metric;
        if is_info {
            if let Some(crc) = meta.crc.as_mut() {
                crc.feed(bit);
            }
        }
    }

    /// Recursive partial-sum propagation after an odd decode index.
    fn update_partial_sums(&mut self, l: usize, lambda: u32, i: usize) {
        if lambda == 0 {
            return;
        }
        let n = self.code.n();
        let j = i / 2;
        let groups = 1usize << (n - lambda);
        let meta = &mut self.meta[l];
        for beta in 0..groups {
            let pair = meta.c[lambda as usize][beta];
            meta.c[lambda as usize - 1][2 * beta][j % 2] = pair[0] ^ pair[1];
            meta.c[lambda as usize - 1][2 * beta + 1][j % 2] = pair[1];
        }
        if j % 2 == 1 {
            self.update_partial_sums(l, lambda - 1, j);
        }
    }

    fn into_candidates(self) -> Vec<Candidate> {
        let code = self.code;
        self.meta
            .into_iter()
            .map(|meta| {
                let info_bits = code
                    .extract_info_bits(&meta.decoded)
                    .expect("decoded word has block length");
                let codeword = meta.c[0].iter().map(|pair| pair[0]).collect();
                Candidate {
                    u: meta.decoded,
                    info_bits,
                    metric: meta.metric.as_f64(),
                    crc_pass: meta.crc.map(|c| c.passed()),
                    codeword,
                }
            })
            .collect()
    }
}

/// Float channel pairs for a noiseless transmission of `codeword`, handy for
/// tests and sanity checks: the transmitted hypothesis gets `strength`, the
/// other 0.
pub fn noiseless_llms(codeword: &[u8], strength: f64) -> Vec<LlmPair> {
    codeword
        .iter()
        .map(|&bit| {
            if bit == 0 {
                Pair::new(strength, 0.0)
            } else {
                Pair::new(0.0, strength)
            }
        })
        .collect()
}
