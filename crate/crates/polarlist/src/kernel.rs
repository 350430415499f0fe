//! Log-domain message arithmetic for the decoder: the F and G kernels in
//! exact, max-approximated, and unsigned fixed-point form.
//!
//! Messages come in pairs: one log-likelihood value per bit hypothesis,
//! larger meaning more likely. The G kernel adds the two input messages
//! selected by the partial sum; the F kernel combines both hypotheses with
//! `max*` (exact) or plain `max` (approximated).
//!
//! In fixed-point mode all values are unsigned. A stage-λ value occupies
//! `t + λ` bits when the channel is quantized with `t` bits; both kernels
//! grow the width by one, so overflow is impossible by construction. The
//! fixed kernel still asserts the bound on every value it produces, which
//! turns that claim into an executable check.

use std::fmt::Debug;

/// One message slot: the log-likelihood values for bit 0 and bit 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pair<M> {
    pub v0: M,
    pub v1: M,
}

impl<M> Pair<M> {
    pub fn new(v0: M, v1: M) -> Self {
        Self { v0, v1 }
    }
}

impl<M: Copy> Pair<M> {
    #[inline]
    pub fn get(&self, bit: u8) -> M {
        if bit == 0 {
            self.v0
        } else {
            self.v1
        }
    }
}

/// Scalar message type used by a kernel.
pub trait Message: Copy + PartialOrd + Debug + Default + Send + Sync {
    /// Lossless view as f64, for reporting metrics uniformly.
    fn as_f64(self) -> f64;
}

impl Message for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

impl Message for u32 {
    fn as_f64(self) -> f64 {
        f64::from(self)
    }
}

/// The F/G arithmetic behind the decoder; one implementation per mode.
pub trait Kernel: Clone + Send + Sync {
    type Msg: Message;

    /// F kernel: combine the even and odd input slots.
    ///
    /// `out_stage` is the λ of the value being produced (inputs are stage
    /// λ - 1); only the fixed kernel uses it, for width checking.
    fn f(&self, even: Pair<Self::Msg>, odd: Pair<Self::Msg>, out_stage: u32) -> Pair<Self::Msg>;

    /// G kernel: add the input slots selected by partial sum `s`.
    fn g(
        &self,
        even: Pair<Self::Msg>,
        odd: Pair<Self::Msg>,
        s: u8,
        out_stage: u32,
    ) -> Pair<Self::Msg>;
}

/// `max*(x, y) = max(x, y) + ln(1 + e^{-|x-y|})`, the exact Jacobian sum.
#[inline]
pub fn max_star(x: f64, y: f64) -> f64 {
    x.max(y) + (-(x - y).abs()).exp().ln_1p()
}

/// Floating-point kernel with the exact `max*` F computation.
#[derive(Debug, Clone, Copy, Default)]
pub struct FloatExact;

/// Floating-point kernel with the `max` approximation of F.
#[derive(Debug, Clone, Copy, Default)]
pub struct FloatMax;

impl Kernel for FloatExact {
    type Msg = f64;

    fn f(&self, even: Pair<f64>, odd: Pair<f64>, _out_stage: u32) -> Pair<f64> {
        Pair::new(
            max_star(even.v0 + odd.v0, even.v1 + odd.v1),
            max_star(even.v1 + odd.v0, even.v0 + odd.v1),
        )
    }

    fn g(&self, even: Pair<f64>, odd: Pair<f64>, s: u8, _out_stage: u32) -> Pair<f64> {
        Pair::new(even.get(s) + odd.v0, even.get(1 ^ s) + odd.v1)
    }
}

impl Kernel for FloatMax {
    type Msg = f64;

    fn f(&self, even: Pair<f64>, odd: Pair<f64>, _out_stage: u32) -> Pair<f64> {
        Pair::new(
            (even.v0 + odd.v0).max(even.v1 + odd.v1),
            (even.v1 + odd.v0).max(even.v0 + odd.v1),
        )
    }

    fn g(&self, even: Pair<f64>, odd: Pair<f64>, s: u8, _out_stage: u32) -> Pair<f64> {
        Pair::new(even.get(s) + odd.v0, even.get(1 ^ s) + odd.v1)
    }
}

/// Unsigned fixed-point kernel with non-uniform widths: channel values use
/// `t` bits, stage-λ values `t + λ` bits.
///
/// Every produced value is checked against its stage width; a violation is a
/// program error and panics rather than wrapping silently.
#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    t: u32,
}

impl FixedPoint {
    pub fn new(t: u32) -> Self {
        assert!(t >= 1 && t + 32 > t, "channel quantization needs t >= 1");
        Self { t }
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    #[inline]
    fn check(&self, value: u32, out_stage: u32) -> u32 {
        let width = self.t + out_stage;
        assert!(
            width >= 32 || value < (1u32 << width),
            "stage-{out_stage} value {value} exceeds {width} bits"
        );
        value
    }
}

impl Kernel for FixedPoint {
    type Msg = u32;

    fn f(&self, even: Pair<u32>, odd: Pair<u32>, out_stage: u32) -> Pair<u32> {
        Pair::new(
            self.check((even.v0 + odd.v0).max(even.v1 + odd.v1), out_stage),
            self.check((even.v1 + odd.v0).max(even.v0 + odd.v1), out_stage),
        )
    }

    fn g(&self, even: Pair<u32>, odd: Pair<u32>, s: u8, out_stage: u32) -> Pair<u32> {
        Pair::new(
            self.check(even.get(s) + odd.v0, out_stage),
            self.check(even.get(1 ^ s) + odd.v1, out_stage),
        )
    }
}

/// Which arithmetic the decoder runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    /// f64 messages, exact `max*` F kernel.
    FloatExact,
    /// f64 messages, `max` approximation.
    FloatMax,
    /// Unsigned fixed point with `t`-bit channel quantization and `t + λ`
    /// bits at stage λ.
    Fixed { t: u32 },
}

impl ArithmeticMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArithmeticMode::FloatExact => "float-exact",
            ArithmeticMode::FloatMax => "float-max",
            ArithmeticMode::Fixed { .. } => "fixed",
        }
    }

    /// Parses a CLI mode name; `t` supplies the width for `"fixed"`.
    pub fn parse(s: &str, t: u32) -> crate::Result<Self> {
        match s {
            "float-exact" => Ok(ArithmeticMode::FloatExact),
            "float-max" => Ok(ArithmeticMode::FloatMax),
            "fixed" => Ok(ArithmeticMode::Fixed { t }),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown arithmetic mode {other:?}"
            ))),
        }
    }
}

/// The per-stage bits `(b_n, ..., b_1)` of a decode index, with
/// `i = Σ_j 2^j b_{n-j}`; the returned vector stores `b_λ` at `λ - 1`.
pub fn stage_bits(i: usize, n: u32) -> Vec<u8> {
    assert!(i < (1usize << n), "bit index {i} out of range for n = {n}");
    (1..=n).map(|lambda| ((i >> (n - lambda)) & 1) as u8).collect()
}

/// The lowest stage whose messages must be recomputed for decode index `i`:
/// the largest λ with `b_λ = 1`, and 1 for `i = 0`.
pub fn first_update_stage(i: usize, n: u32) -> u32 {
    assert!(i < (1usize << n), "bit index {i} out of range for n = {n}");
    if i == 0 {
        1
    } else {
        n - i.trailing_zeros()
    }
}
