//! Lossless GLS coding by exact interval refinement.
//!
//! Encoding a bitstream with skew `p` walks the skew-binary partition
//! backwards: starting from `[0, 1)`, a `0` keeps the lower fraction `p` of the
//! current interval and a `1` keeps the upper fraction `1 - p`. Any point of
//! the final interval, iterated forward through the skew-binary map, emits the
//! original bits as its branch itinerary. All arithmetic is on arbitrary
//! precision integers, so round trips are exact at any length.
//!
//! Internally an interval is `[L/D, (L+W)/D)` with `D = den(p)^n`; refining by
//! a bit only multiplies by small integers and never needs a gcd.

mod uat;

pub use uat::{uat_decode, uat_encode, UatCode};

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact skew `p = num / den` with `0 < p < 1`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Skew(Ratio<u64>);

impl Skew {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::param("p", if den == 0 { f64::NAN } else { num as f64 / den as f64 }));
        }
        Ok(Skew(Ratio::new(num, den)))
    }

    /// Empirical probability of `false` in `bits`; `None` if the stream is
    /// empty or constant.
    pub fn empirical(bits: &[bool]) -> Option<Self> {
        let zeros = bits.iter().filter(|&&b| !b).count() as u64;
        Skew::new(zeros, bits.len() as u64).ok()
    }

    pub fn num(&self) -> u64 {
        *self.0.numer()
    }

    pub fn den(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.num() as f64 / self.den() as f64
    }
}

impl fmt::Display for Skew {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

/// `[low, high)` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingInterval {
    low: BigUint,
    width: BigUint,
    denom: BigUint,
}

impl CodingInterval {
    pub fn unit() -> Self {
        CodingInterval { low: BigUint::zero(), width: BigUint::one(), denom: BigUint::one() }
    }

    pub fn low(&self) -> Ratio<BigUint> {
        Ratio::new(self.low.clone(), self.denom.clone())
    }

    pub fn high(&self) -> Ratio<BigUint> {
        Ratio::new(&self.low + &self.width, self.denom.clone())
    }

    pub fn width(&self) -> Ratio<BigUint> {
        Ratio::new(self.width.clone(), self.denom.clone())
    }

    pub fn midpoint(&self) -> Ratio<BigUint> {
        Ratio::new((&self.low << 1u32) + &self.width, &self.denom << 1u32)
    }

    pub fn contains(&self, x: &Ratio<BigUint>) -> bool {
        *x >= self.low() && *x < self.high()
    }

    fn refine(&mut self, bit: bool, p: Skew) {
        let (a, d) = (p.num(), p.den());
        self.low *= d;
        self.denom *= d;
        if bit {
            self.low += &self.width * a;
            self.width *= d - a;
        } else {
            self.width *= a;
        }
    }
}

pub fn encode(bits: &[bool], p: Skew) -> Result<CodingInterval> {
    if bits.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut interval = CodingInterval::unit();
    for &b in bits {
        interval.refine(b, p);
    }
    Ok(interval)
}

/// Iterates the exact skew-binary map from `x` for `n` steps, emitting
/// `false` on the left branch and `true` on the right.
pub fn decode(x: &Ratio<BigUint>, p: Skew, n: usize) -> Result<Vec<bool>> {
    if x.numer() >= x.denom() {
        return Err(Error::OutOfDomain(ratio_to_f64(x)));
    }
    let (a, d) = (p.num(), p.den());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // x < p  <=>  num * d < a * den
        num *= d;
        let split = &den * a;
        if num < split {
            den = split;
            out.push(false);
        } else {
            num -= split;
            den *= d - a;
            out.push(true);
        }
    }
    Ok(out)
}

pub fn code_length_bits(interval: &CodingInterval) -> f64 {
    log2_big(&interval.denom) - log2_big(&interval.width)
}

/// Binary Shannon entropy in bits of a source emitting `0` with probability `p`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * libm::log2(x) };
    term(p) + term(1.0 - p)
}

fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return libm::log2(n.to_u64().expect("fits") as f64);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("fits");
    libm::log2(top as f64) + shift as f64
}

fn ratio_to_f64(x: &Ratio<BigUint>) -> f64 {
    libm::exp2(log2_big(x.numer()) - log2_big(x.denom()))
}

/// A bitstream encoded with its own empirical skew. Constant streams have no
/// valid skew and are stored as the repeated bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodedBits {
    Constant { bit: bool, len: usize },
    Interval { x: Ratio<BigUint>, p: Skew, len: usize },
}

impl CodedBits {
    pub fn len(&self) -> usize {
        match self {
            CodedBits::Constant { len, .. } | CodedBits::Interval { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn encode_stream(bits: &[bool]) -> CodedBits {
    match Skew::empirical(bits) {
        Some(p) => {
            let interval = encode(bits, p).expect("non-empty");
            CodedBits::Interval { x: interval.midpoint(), p, len: bits.len() }
        }
        None => CodedBits::Constant { bit: bits.first().copied().unwrap_or(false), len: bits.len() },
    }
}

pub fn decode_stream(coded: &CodedBits) -> Result<Vec<bool>> {
    match coded {
        CodedBits::Constant { bit, len } => Ok(alloc::vec![*bit; *len]),
        CodedBits::Interval { x, p, len } => decode(x, *p, *len),
    }
}

/// Bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1)).collect()
}

/// Inverse of [`bytes_to_bits`]; a trailing partial byte is zero-filled.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8).map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn r(n: u64, d: u64) -> Ratio<BigUint> {
        Ratio::new(BigUint::from(n), BigUint::from(d))
    }

    #[test]
    fn encode_examples() {
        let half = Skew::new(1, 2).unwrap();
        let i = encode(&bits("0"), half).unwrap();
        assert_eq!((i.low(), i.high()), (r(0, 1), r(1, 2)));
        let i = encode(&bits("10"), half).unwrap();
        assert_eq!((i.low(), i.high()), (r(1, 2), r(3, 4)));
        let i = encode(&bits("00"), Skew::new(3, 4).unwrap()).unwrap();
        assert_eq!((i.low(), i.high()), (r(0, 1), r(9, 16)));
    }

    #[test]
    fn encode_rejects_empty_and_bad_skew() {
        assert_eq!(encode(&[], Skew::new(1, 2).unwrap()), Err(Error::EmptyInput));
        assert!(Skew::new(0, 3).is_err());
        assert!(Skew::new(3, 3).is_err());
        assert!(Skew::new(1, 0).is_err());
    }

    #[test]
    fn decode_examples() {
        let half = Skew::new(1, 2).unwrap();
        assert_eq!(decode(&r(1, 4), half, 2).unwrap(), bits("01"));
        assert!(decode(&r(1, 4), half, 0).unwrap().is_empty());
        let third = Skew::new(1, 3).unwrap();
        let s = bits("110100");
        assert_eq!(decode(&encode(&s, third).unwrap().midpoint(), third, 6).unwrap(), s);
        assert!(decode(&r(1, 1), half, 3).is_err());
    }

    #[test]
    fn code_length_examples() {
        let half = Skew::new(1, 2).unwrap();
        assert_eq!(code_length_bits(&encode(&bits("1"), half).unwrap()), 1.0);
        assert_eq!(code_length_bits(&encode(&bits("0011"), half).unwrap()), 4.0);
        let l = code_length_bits(&encode(&bits("0001"), Skew::new(3, 4).unwrap()).unwrap());
        assert!((l - 3.245_112_497_836_531_3).abs() < 1e-12);
    }

    #[test]
    fn constant_streams_out_of_band() {
        let c = encode_stream(&[true; 5]);
        assert_eq!(c, CodedBits::Constant { bit: true, len: 5 });
        assert_eq!(decode_stream(&c).unwrap(), [true; 5]);
        assert_eq!(decode_stream(&encode_stream(&[])).unwrap(), Vec::<bool>::new());
    }

    #[test]
    fn byte_bit_conversion() {
        assert_eq!(bytes_to_bits(&[0b1010_0001]), bits("10100001"));
        assert_eq!(bits_to_bytes(&bits("10100001")), [0b1010_0001]);
    }
}
