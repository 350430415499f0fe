//! Independent reference decoders used by the integration and acceptance
//! suites. They share the arithmetic kernels with the production decoder
//! (the kernels have their own hand-value tests) but none of its list
//! machinery: no reference arrays, no slots, no lazy copying.

use polarlist::code::{polar_transform, PolarCode};
use polarlist::crc::CrcSpec;
use polarlist::decoder::Candidate;
use polarlist::kernel::{Kernel, Message, Pair};
use polarlist::prune::{prune_by_sort, MetricEntry};

/// Plain successive cancellation by direct tree recursion: decide the first
/// half against F-combined messages, re-encode it, decide the second half
/// against G-combined messages. Ties pick bit 0, like the list decoder.
pub fn sc_oracle<K: Kernel>(kernel: &K, llms: &[Pair<K::Msg>], frozen: &[bool]) -> Vec<u8> {
    fn recurse<K: Kernel>(
        kernel: &K,
        llms: &[Pair<K::Msg>],
        frozen: &[bool],
        stage: u32,
    ) -> Vec<u8> {
        let len = llms.len();
        if len == 1 {
            let bit = if frozen[0] { 0 } else { u8::from(llms[0].v1 > llms[0].v0) };
            return vec![bit];
        }
        let half = len / 2;
        let upper: Vec<Pair<K::Msg>> = (0..half)
            .map(|k| kernel.f(llms[2 * k], llms[2 * k + 1], stage))
            .collect();
        let mut left = recurse(kernel, &upper, &frozen[..half], stage + 1);
        let partial = polar_transform(&left, half.trailing_zeros());
        let lower: Vec<Pair<K::Msg>> = (0..half)
            .map(|k| kernel.g(llms[2 * k], llms[2 * k + 1], partial[k], stage))
            .collect();
        let right = recurse(kernel, &lower, &frozen[half..], stage + 1);
        left.extend(right);
        left
    }
    recurse(kernel, llms, frozen, 1)
}

/// List decoder that duplicates paths by physically deep-copying every
/// message and partial-sum array. Mirrors the production decoder's
/// conventions (split order, tie-breaks, metric bookkeeping) so the two must
/// produce bit-identical candidate lists.
pub struct DeepCopyDecoder<'a, K: Kernel> {
    code: &'a PolarCode,
    kernel: K,
    list_size: usize,
    crc: Option<CrcSpec>,
}

#[derive(Clone)]
struct DeepPath<M> {
    /// Message arrays for stages 0..=n; stage 0 is the channel.
    p: Vec<Vec<Pair<M>>>,
    c: Vec<Vec<[u8; 2]>>,
    decoded: Vec<u8>,
    crc: Option<polarlist::crc::DataWordCrc>,
    metric: M,
}

impl<'a, K: Kernel> DeepCopyDecoder<'a, K> {
    pub fn new(
        code: &'a PolarCode,
        kernel: K,
        list_size: usize,
        crc: Option<CrcSpec>,
    ) -> Self {
        Self {
            code,
            kernel,
            list_size,
            crc,
        }
    }

    pub fn decode(&self, channel: &[Pair<K::Msg>]) -> Vec<Candidate> {
        let n = self.code.n();
        let block = self.code.block_len();
        let mut paths = vec![DeepPath {
            p: {
                let mut stages = vec![channel.to_vec()];
                for lambda in 1..=n {
                    stages.push(vec![Pair::<K::Msg>::default(); 1 << (n - lambda)]);
                }
                stages
            },
            c: (0..=n).map(|lambda| vec![[0u8; 2]; 1 << (n - lambda)]).collect(),
            decoded: Vec::with_capacity(block),
            crc: self
                .crc
                .map(|spec| polarlist::crc::DataWordCrc::new(spec, self.code.payload_len())),
            metric: K::Msg::default(),
        }];

        for i in 0..block {
            let phi = polarlist::kernel::first_update_stage(i, n);
            for path in paths.iter_mut() {
                for lambda in phi..=n {
                    let outputs = 1usize << (n - lambda);
                    let use_g = i > 0 && lambda == phi;
                    let mut fresh = Vec::with_capacity(outputs);
                    for k in 0..outputs {
                        let even = path.p[lambda as usize - 1][2 * k];
                        let odd = path.p[lambda as usize - 1][2 * k + 1];
                        fresh.push(if use_g {
                            let s = path.c[lambda as usize][k][0];
                            self.kernel.g(even, odd, s, lambda)
                        } else {
                            self.kernel.f(even, odd, lambda)
                        });
                    }
                    path.p[lambda as usize] = fresh;
                }
            }

            if self.code.is_frozen(i) {
                for path in paths.iter_mut() {
                    let metric = path.p[n as usize][0].v0;
                    Self::extend(path, n, i, 0, metric, false);
                }
            } else {
                let metrics: Vec<Pair<K::Msg>> =
                    paths.iter().map(|p| p.p[n as usize][0]).collect();
                if 2 * paths.len() <= self.list_size {
                    let parents = paths.clone();
                    for (path, m) in paths.iter_mut().zip(&metrics) {
                        Self::extend(path, n, i, 0, m.v0, true);
                    }
                    for (parent, m) in parents.into_iter().zip(&metrics) {
                        let mut child = parent;
                        Self::extend(&mut child, n, i, 1, m.v1, true);
                        paths.push(child);
                    }
                } else {
                    let mut entries = Vec::with_capacity(2 * paths.len());
                    for (l, m) in metrics.iter().enumerate() {
                        entries.push(MetricEntry::new(m.v0, l, 0));
                        entries.push(MetricEntry::new(m.v1, l, 1));
                    }
                    let survivors = prune_by_sort(&entries).unwrap();
                    paths = survivors
                        .iter()
                        .map(|s| {
                            let mut path = paths[s.list_index].clone();
                            Self::extend(&mut path, n, i, s.bit, s.metric, true);
                            path
                        })
                        .collect();
                }
            }

            if i % 2 == 1 {
                for path in paths.iter_mut() {
                    Self::propagate_sums(path, n, n, i);
                }
            }
        }

        paths
            .into_iter()
            .map(|path| Candidate {
                info_bits: self.code.extract_info_bits(&path.decoded).unwrap(),
                codeword: path.c[0].iter().map(|pair| pair[0]).collect(),
                metric: path.metric.as_f64(),
                crc_pass: path.crc.map(|c| c.passed()),
                u: path.decoded,
            })
            .collect()
    }

    fn extend(path: &mut DeepPath<K::Msg>, n: u32, i: usize, bit: u8, metric: K::Msg, info: bool) {
        path.decoded.push(bit);
        path.c[n as usize][0][i % 2] = bit;
        path.metric = metric;
        if info {
            if let Some(crc) = path.crc.as_mut() {
                crc.feed(bit);
            }
        }
    }

    fn propagate_sums(path: &mut DeepPath<K::Msg>, n: u32, lambda: u32, i: usize) {
        if lambda == 0 {
            return;
        }
        let j = i / 2;
        for beta in 0..(1usize << (n - lambda)) {
            let pair = path.c[lambda as usize][beta];
            path.c[lambda as usize - 1][2 * beta][j % 2] = pair[0] ^ pair[1];
            path.c[lambda as usize - 1][2 * beta + 1][j % 2] = pair[1];
        }
        if j % 2 == 1 {
            Self::propagate_sums(path, n, lambda - 1, j);
        }
    }
}

/// Exhaustive maximum-likelihood decoding: score every possible data word by
/// the summed log-likelihood of its codeword and return the best data word.
/// Only usable for tiny K.
pub fn ml_oracle(code: &PolarCode, llms: &[Pair<f64>]) -> Vec<u8> {
    assert!(code.payload_len() <= 16, "ML oracle is exhaustive");
    let mut best: Option<(f64, Vec<u8>)> = None;
    for word in 0..(1u32 << code.payload_len()) {
        let payload: Vec<u8> = (0..code.payload_len())
            .map(|b| ((word >> b) & 1) as u8)
            .collect();
        let u = code.assemble_data_word(&payload, None).unwrap();
        let x = code.encode(&u).unwrap();
        let score: f64 = x.iter().zip(llms).map(|(&bit, pair)| pair.get(bit)).sum();
        let better = match &best {
            Some((s, _)) => score > *s,
            None => true,
        };
        if better {
            best = Some((score, u));
        }
    }
    best.unwrap().1
}

/// Frozen mask in index order.
pub fn frozen_mask(code: &PolarCode) -> Vec<bool> {
    (0..code.block_len()).map(|i| code.is_frozen(i)).collect()
}
