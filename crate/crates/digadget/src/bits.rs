//! Bit-exact state strings and packed field readers/writers.
//!
//! Memory and message sizes in this crate are measured in bits, so
//! serialized algorithm state is kept as a [`BitString`] instead of being
//! rounded up to whole bytes. [`BitWriter`] and [`BitReader`] pack and
//! unpack fixed-width unsigned fields with no padding.

use std::fmt;

/// A finite sequence of bits. Its length is the measured working-memory
/// (or message) size.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    // MSB-first within each byte; bits past `len` are always zero, so the
    // derived equality is equality of bit content.
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len / 8 == self.bytes.len() {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i).unwrap())
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut out = Self::new();
        for bit in iter {
            out.push(bit);
        }
        out
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString[{}; ", self.len)?;
        for bit in self.iter().take(48) {
            write!(f, "{}", if bit { '1' } else { '0' })?;
        }
        if self.len > 48 {
            write!(f, "…")?;
        }
        write!(f, "]")
    }
}

/// Minimal field width that can hold every value in `0..count`.
///
/// `count` of 0 or 1 needs no bits at all: there is at most one possible
/// value, so nothing has to be stored.
pub fn width_for(count: usize) -> usize {
    match count {
        0 | 1 => 0,
        _ => (usize::BITS - (count - 1).leading_zeros()) as usize,
    }
}

/// Packs fixed-width unsigned fields into a [`BitString`].
#[derive(Default)]
pub struct BitWriter {
    out: BitString,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit(&mut self, bit: bool) {
        self.out.push(bit);
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn field(&mut self, value: u64, width: usize) {
        debug_assert!(
            width >= 64 || value < 1u64 << width,
            "value {value} does not fit in {width} bits"
        );
        for shift in (0..width).rev() {
            self.out.push(value >> shift & 1 == 1);
        }
    }

    pub fn finish(self) -> BitString {
        self.out
    }
}

/// Reads fixed-width unsigned fields back out of a [`BitString`].
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    /// Next bit, or `None` when the string is exhausted.
    pub fn bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }

    /// Next `width`-bit unsigned field, or `None` if fewer bits remain.
    /// A zero-width field always reads as 0 and consumes nothing.
    pub fn field(&mut self, width: usize) -> Option<u64> {
        if width > self.remaining() {
            return None;
        }
        let mut value = 0u64;
        for _ in 0..width {
            value = value << 1 | self.bit().unwrap() as u64;
        }
        Some(value)
    }
}
