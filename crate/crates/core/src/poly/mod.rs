//! Bit-packed polynomials over GF(2).
//!
//! Coefficients are stored little-endian in 64-bit words: bit `i` of word `w`
//! is the coefficient of `x^(64w + i)`. The word vector never has trailing
//! zero words, so structural equality is polynomial equality and the zero
//! polynomial is the empty vector.

mod clmul;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use clmul::{clmul64, clmul64_soft};
pub use text::Format;

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    words: Words,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_u64(1)
    }

    pub fn x() -> Self {
        Poly::from_u64(0b10)
    }

    pub fn x_plus_one() -> Self {
        Poly::from_u64(0b11)
    }

    /// `M = x^2 + x + 1`.
    pub fn m() -> Self {
        Poly::from_u64(0b111)
    }

    /// `1 + M = x^2 + x = x(x+1)`.
    pub fn one_plus_m() -> Self {
        Poly::from_u64(0b110)
    }

    /// Polynomial whose coefficient of `x^i` is bit `i` of `bits`.
    pub fn from_u64(bits: u64) -> Self {
        let mut words = Words::new();
        if bits != 0 {
            words.push(bits);
        }
        Poly { words }
    }

    pub fn from_words(words: impl IntoIterator<Item = u64>) -> Self {
        let mut p = Poly {
            words: words.into_iter().collect(),
        };
        p.normalize();
        p
    }

    pub fn monomial(exp: usize) -> Self {
        let mut words: Words = SmallVec::from_elem(0, exp / WORD + 1);
        words[exp / WORD] = 1 << (exp % WORD);
        Poly { words }
    }

    /// Sum of `x^e` over the given exponents. Repeated exponents cancel.
    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> Self {
        let mut words = Words::new();
        for e in exps {
            let w = e / WORD;
            if words.len() <= w {
                words.resize(w + 1, 0);
            }
            words[w] ^= 1 << (e % WORD);
        }
        let mut p = Poly { words };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The coefficient vector as an integer, when it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    fn deg_opt(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - top.leading_zeros() as usize))
    }

    /// Degree; an error for the zero polynomial.
    pub fn degree(&self) -> Result<usize> {
        self.deg_opt().ok_or(Error::ZeroPolynomial("degree"))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..WORD)
                .filter(move |b| (w >> b) & 1 == 1)
                .map(move |b| wi * WORD + b)
        })
    }

    /// Multiplication by `x^n`.
    pub fn shl(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ws, bs) = (n / WORD, n % WORD);
        let mut out: Words = SmallVec::from_elem(0, self.words.len() + ws + 1);
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (WORD - bs);
            }
        }
        let mut p = Poly { words: out };
        p.normalize();
        p
    }

    /// Drops the `n` lowest coefficients, i.e. the quotient by `x^n`.
    pub fn shr(&self, n: usize) -> Poly {
        let (ws, bs) = (n / WORD, n % WORD);
        if ws >= self.words.len() {
            return Poly::zero();
        }
        let src = &self.words[ws..];
        let mut out: Words = SmallVec::with_capacity(src.len());
        for i in 0..src.len() {
            let mut w = src[i] >> bs;
            if bs != 0 {
                if let Some(&next) = src.get(i + 1) {
                    w |= next << (WORD - bs);
                }
            }
            out.push(w);
        }
        let mut p = Poly { words: out };
        p.normalize();
        p
    }

    fn xor_assign(&mut self, other: &Poly) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= b;
        }
        self.normalize();
    }

    /// `self ^= other * x^shift`, without allocating a shifted copy.
    fn xor_shifted_assign(&mut self, other: &Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let (ws, bs) = (shift / WORD, shift % WORD);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (WORD - bs);
            }
        }
        self.normalize();
    }

    /// Coefficient-wise XOR.
    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Carry-less product, word by word.
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (a, b) = (&self.words, &other.words);
        let mut out: Words = SmallVec::from_elem(0, a.len() + b.len());
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let (lo, hi) = clmul64(x, y);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        let mut p = Poly { words: out };
        p.normalize();
        p
    }

    /// `self^2`: coefficient `i` moves to `2i`.
    pub fn square(&self) -> Poly {
        let mut out: Words = SmallVec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            out.push(clmul::spread32(w));
            out.push(clmul::spread32(w >> 32));
        }
        let mut p = Poly { words: out };
        p.normalize();
        p
    }

    /// Euclidean division: `self = divisor * quotient + remainder` with
    /// `deg(remainder) < deg(divisor)`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.deg_opt().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(dr) = rem.deg_opt() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            rem.xor_shifted_assign(divisor, shift);
            quot.set_bit(shift);
        }
        Ok((quot, rem))
    }

    fn set_bit(&mut self, i: usize) {
        if self.words.len() <= i / WORD {
            self.words.resize(i / WORD + 1, 0);
        }
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    /// `self^n` by square-and-multiply; `0^0` is rejected.
    pub fn pow(&self, n: u64) -> Result<Poly> {
        if n == 0 {
            if self.is_zero() {
                return Err(Error::ZeroToTheZero);
            }
            return Ok(Poly::one());
        }
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        Ok(acc)
    }

    /// `self^(2^k)` by `k` squarings.
    pub fn pow2k(&self, k: u32) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.square())
    }

    /// Value at `0` (`false`) or `1` (`true`).
    pub fn eval01(&self, at_one: bool) -> bool {
        if at_one {
            self.weight() % 2 == 1
        } else {
            self.coeff(0)
        }
    }

    /// True when the polynomial has no root in `{0, 1}`, i.e. no linear factor.
    pub fn is_odd(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("parity"));
        }
        Ok(self.eval01(false) && self.eval01(true))
    }

    /// Largest `e` with `x^e | self`.
    pub fn val_x(&self) -> Result<usize> {
        let (i, w) = self
            .words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .ok_or(Error::ZeroPolynomial("valuation at x"))?;
        Ok(i * WORD + w.trailing_zeros() as usize)
    }

    /// Largest `e` with `(x+1)^e | self`, computed as `val_x(bar(self))`.
    pub fn val_x1(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("valuation at x+1"));
        }
        self.bar().val_x()
    }

    /// Substitution `x -> x + 1`.
    ///
    /// Writing a block of width `2k` as `lo + x^k hi`, the image is
    /// `bar(lo) + bar(hi) + x^k bar(hi)`; applied bottom-up over k = 1, 2, 4, ...
    /// this is a butterfly that only XORs the high half of each block onto
    /// the low half.
    pub fn bar(&self) -> Poly {
        const LOW: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0f0f_0f0f_0f0f_0f0f,
            0x00ff_00ff_00ff_00ff,
            0x0000_ffff_0000_ffff,
            0x0000_0000_ffff_ffff,
        ];
        let mut w = self.words.clone();
        for x in w.iter_mut() {
            for (lvl, mask) in LOW.iter().enumerate() {
                *x ^= (*x >> (1 << lvl)) & mask;
            }
        }
        let n = w.len();
        let mut stride = 1;
        while stride < n {
            let mut base = 0;
            while base + stride < n {
                for i in base..base + stride {
                    if i + stride < n {
                        w[i] ^= w[i + stride];
                    }
                }
                base += 2 * stride;
            }
            stride *= 2;
        }
        let mut p = Poly { words: w };
        p.normalize();
        p
    }

    /// Exact quotient by `x + 1`, or `None` when `x + 1` does not divide.
    ///
    /// The quotient's coefficients are the running parities of `self`.
    pub fn div_x_plus_one(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut out = self.words.clone();
        let mut carry = 0u64;
        for x in out.iter_mut() {
            let mut v = *x;
            v ^= v << 1;
            v ^= v << 2;
            v ^= v << 4;
            v ^= v << 8;
            v ^= v << 16;
            v ^= v << 32;
            if carry == 1 {
                v = !v;
            }
            carry = v >> 63;
            *x = v;
        }
        // Running parity past the top coefficient is self(1); it must vanish.
        let deg = self.deg_opt().unwrap();
        let q = Poly { words: out };
        if q.coeff(deg) {
            return None;
        }
        let mut q = q;
        q.normalize();
        Some(q)
    }

    /// `x^deg * self(1/x)`: coefficient reversal over `[0, deg]`.
    pub fn reciprocal(&self) -> Result<Poly> {
        let d = self.deg_opt().ok_or(Error::ZeroPolynomial("reciprocal"))?;
        Ok(Poly::from_exponents(self.exponents().map(|e| d - e)))
    }

    pub fn render(&self, format: Format) -> String {
        text::render(self, format)
    }

    pub fn hex(&self) -> String {
        self.render(Format::Hex)
    }

    /// Parses any of the accepted text forms; the zero polynomial is allowed.
    pub fn parse(s: &str) -> Result<Poly> {
        text::parse(s)
    }

    /// Like [`Poly::parse`], but rejects the zero polynomial.
    pub fn parse_nonzero(s: &str) -> Result<Poly> {
        let p = text::parse(s)?;
        if p.is_zero() {
            return Err(Error::Parse {
                pos: 0,
                msg: "the zero polynomial is not allowed here".into(),
            });
        }
        Ok(p)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

/// Orders by the coefficient vector read as an unsigned integer.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Symbolic))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render(Format::Hex))
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        Poly::parse(s)
    }
}
