//! Polar code construction, encoding, and data-word assembly.
//!
//! A polar code of length `N = 2^n` is defined by the partition of the input
//! indices `0..N` into a frozen set (always transmitted as 0) and an
//! information set of size `K`. Encoding multiplies the input word by
//! `B_N F^{⊗n}` over GF(2), where `B_N` is the bit-reversal permutation and
//! `F = [[1,0],[1,1]]`; it is implemented as the usual butterfly in
//! `O(N log N)`.
//!
//! All indexing in this crate uses natural (pre-bit-reversal) input-domain
//! order; the bit reversal lives solely inside [`encode`].

use crate::crc::CrcSpec;
use crate::{Error, Result};

/// A polar code: block length, frozen/information index sets, and the width
/// of the CRC carried inside the information set.
///
/// Immutable after construction and safe to share across worker threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: u32,
    block_len: usize,
    frozen: Vec<usize>,
    info: Vec<usize>,
    crc_width: usize,
}

impl PolarCode {
    /// Builds a code by freezing the `N - K` least reliable bit channels of a
    /// binary erasure channel with erasure probability `design_erasure`.
    ///
    /// Channel reliabilities are the Bhattacharyya parameters obtained from
    /// the recursion `z -> {2z - z^2, z^2}` applied `n` times in natural index
    /// order. The `K` indices with the smallest parameters become the
    /// information set; ties go to the larger index, which polarizes toward
    /// the reliable end. The construction is deterministic.
    ///
    /// `crc_width` bits of every data word are a checksum, so the effective
    /// payload is `K - crc_width` bits. Use 0 for plain SC/SCL.
    pub fn construct(n: u32, k: usize, design_erasure: f64, crc_width: usize) -> Result<Self> {
        let block_len = 1usize
            .checked_shl(n)
            .ok_or_else(|| Error::InvalidParameter(format!("block exponent {n} too large")))?;
        if k == 0 || k > block_len {
            return Err(Error::InvalidParameter(format!(
                "K = {k} out of range for N = {block_len}"
            )));
        }
        if !(design_erasure > 0.0 && design_erasure < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "design erasure {design_erasure} not in (0, 1)"
            )));
        }
        let z = bhattacharyya_parameters(n, design_erasure);
        let mut order: Vec<usize> = (0..block_len).collect();
        // Ascending by parameter; on ties prefer the larger index.
        order.sort_by(|&a, &b| {
            z[a].partial_cmp(&z[b])
                .expect("erasure recursion stays in [0,1]")
                .then(b.cmp(&a))
        });
        let mut info: Vec<usize> = order[..k].to_vec();
        info.sort_unstable();
        let mut frozen: Vec<usize> = order[k..].to_vec();
        frozen.sort_unstable();
        Self::from_sets(n, frozen, info, crc_width)
    }

    /// Builds a code from an explicit frozen set, e.g. one loaded from a file
    /// pinned by an earlier run.
    pub fn from_frozen_set(n: u32, frozen: Vec<usize>, crc_width: usize) -> Result<Self> {
        let block_len = 1usize
            .checked_shl(n)
            .ok_or_else(|| Error::InvalidParameter(format!("block exponent {n} too large")))?;
        let mut is_frozen = vec![false; block_len];
        for &i in &frozen {
            if i >= block_len {
                return Err(Error::InvalidParameter(format!(
                    "frozen index {i} out of range for N = {block_len}"
                )));
            }
            if is_frozen[i] {
                return Err(Error::InvalidParameter(format!("duplicate frozen index {i}")));
            }
            is_frozen[i] = true;
        }
        let info: Vec<usize> = (0..block_len).filter(|&i| !is_frozen[i]).collect();
        let mut frozen = frozen;
        frozen.sort_unstable();
        Self::from_sets(n, frozen, info, crc_width)
    }

    fn from_sets(n: u32, frozen: Vec<usize>, info: Vec<usize>, crc_width: usize) -> Result<Self> {
        if info.is_empty() {
            return Err(Error::InvalidParameter("empty information set".into()));
        }
        if crc_width > info.len() {
            return Err(Error::InvalidParameter(format!(
                "CRC width {} exceeds K = {}",
                crc_width,
                info.len()
            )));
        }
        Ok(Self {
            n,
            block_len: 1 << n,
            frozen,
            info,
            crc_width,
        })
    }

    /// Block-size exponent `n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length `N = 2^n`.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Number of information (unfrozen) positions `K`.
    pub fn k(&self) -> usize {
        self.info.len()
    }

    /// CRC width `h` in bits (0 means plain SCL).
    pub fn crc_width(&self) -> usize {
        self.crc_width
    }

    /// Payload bits per data word: `K - h`.
    pub fn payload_len(&self) -> usize {
        self.info.len() - self.crc_width
    }

    /// Code rate `K / N`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.block_len as f64
    }

    /// Effective rate `(K - h) / N` once the CRC overhead is discounted.
    pub fn effective_rate(&self) -> f64 {
        self.payload_len() as f64 / self.block_len as f64
    }

    /// Frozen indices in increasing order.
    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen
    }

    /// Information indices in increasing order.
    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    /// Whether input position `i` is frozen.
    pub fn is_frozen(&self, i: usize) -> bool {
        self.info.binary_search(&i).is_err()
    }

    /// Renders the frozen set as text, one index per line, for pinning a code
    /// across runs.
    pub fn export_frozen_set(&self) -> String {
        let mut out = String::new();
        for i in &self.frozen {
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses a frozen-set file produced by [`export_frozen_set`].
    ///
    /// [`export_frozen_set`]: PolarCode::export_frozen_set
    pub fn parse_frozen_set(text: &str) -> Result<Vec<usize>> {
        let mut set = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let idx: usize = line
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index {line:?}", lineno + 1)))?;
            set.push(idx);
        }
        Ok(set)
    }

    /// Writes a data word: `payload` followed by its checksum into the
    /// information positions in increasing index order, zeros elsewhere.
    ///
    /// With `crc_width == 0` the payload occupies the whole information set.
    pub fn assemble_data_word(&self, payload: &[u8], crc: Option<&CrcSpec>) -> Result<Vec<u8>> {
        if payload.len() != self.payload_len() {
            return Err(Error::LengthMismatch {
                expected: self.payload_len(),
                got: payload.len(),
            });
        }
        let mut info_bits = payload.to_vec();
        if self.crc_width > 0 {
            let spec = crc.ok_or_else(|| {
                Error::InvalidParameter("code carries a CRC but no CrcSpec was given".into())
            })?;
            if spec.width() != self.crc_width {
                return Err(Error::InvalidParameter(format!(
                    "CRC spec width {} does not match code h = {}",
                    spec.width(),
                    self.crc_width
                )));
            }
            info_bits.extend_from_slice(&spec.checksum_bits(payload));
        }
        let mut u = vec![0u8; self.block_len];
        for (&pos, &bit) in self.info.iter().zip(info_bits.iter()) {
            u[pos] = bit;
        }
        Ok(u)
    }

    /// Extracts the payload back out of a data word; inverse of
    /// [`assemble_data_word`](PolarCode::assemble_data_word).
    pub fn extract_payload(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.block_len {
            return Err(Error::LengthMismatch {
                expected: self.block_len,
                got: u.len(),
            });
        }
        Ok(self.info[..self.payload_len()].iter().map(|&i| u[i]).collect())
    }

    /// The K information bits (payload + checksum) of a length-N word.
    pub fn extract_info_bits(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.block_len {
            return Err(Error::LengthMismatch {
                expected: self.block_len,
                got: u.len(),
            });
        }
        Ok(self.info.iter().map(|&i| u[i]).collect())
    }

    /// Encodes an N-bit input word: `x = u · B_N · F^{⊗n}` over GF(2).
    ///
    /// Frozen positions of `u` must be zero.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.block_len {
            return Err(Error::LengthMismatch {
                expected: self.block_len,
                got: u.len(),
            });
        }
        for &i in &self.frozen {
            if u[i] != 0 {
                return Err(Error::NonzeroFrozenBit(i));
            }
        }
        Ok(polar_transform(u, self.n))
    }
}

/// Bhattacharyya parameters of the `2^n` synthesized BEC channels, natural
/// index order.
///
/// Level by level, parameter `z` splits into `2z - z^2` (minus channel, even
/// child) and `z^2` (plus channel, odd child).
pub fn bhattacharyya_parameters(n: u32, design_erasure: f64) -> Vec<f64> {
    let mut z = vec![design_erasure];
    for _ in 0..n {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &zi in &z {
            next.push(2.0 * zi - zi * zi);
            next.push(zi * zi);
        }
        z = next;
    }
    z
}

/// `u · B_N · F^{⊗n}` over GF(2): bit-reversal permutation followed by the
/// n-stage XOR butterfly.
pub fn polar_transform(u: &[u8], n: u32) -> Vec<u8> {
    let len = u.len();
    debug_assert_eq!(len, 1 << n);
    let mut x = vec![0u8; len];
    for (i, &bit) in u.iter().enumerate() {
        x[bit_reverse(i, n)] = bit;
    }
    let mut h = 1;
    while h < len {
        let mut block = 0;
        while block < len {
            for j in block..block + h {
                x[j] ^= x[j + h];
            }
            block += 2 * h;
        }
        h *= 2;
    }
    x
}

/// Reverses the low `n` bits of `i`.
pub fn bit_reverse(i: usize, n: u32) -> usize {
    let mut out = 0;
    for b in 0..n {
        out |= ((i >> b) & 1) << (n - 1 - b);
    }
    out
}
