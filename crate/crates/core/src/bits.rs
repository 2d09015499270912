//! Bit strings over N parties and the even/odd parity classes.

use std::fmt;

use crate::error::{Error, Result};

/// Largest party count handled by the enumerators.
pub const MAX_PARTIES: usize = 24;

/// An N-bit string, party 1 at the most significant position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: u32,
    bits: u64,
}

impl BitString {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::Size(format!("bit strings need 1..=63 parties, got {n}")));
        }
        if bits >> n != 0 {
            return Err(Error::Domain(format!("value {bits} does not fit in {n} bits")));
        }
        Ok(Self { n: n as u32, bits })
    }

    /// Parses `"0101"` with party 1 leftmost.
    pub fn from_label(label: &str) -> Result<Self> {
        let bits =
            u64::from_str_radix(label, 2).map_err(|_| Error::Domain(format!("'{label}' is not a bit string")))?;
        if label.starts_with(['+', '-']) {
            return Err(Error::Domain(format!("'{label}' is not a bit string")));
        }
        Self::new(label.len(), bits)
    }

    pub(crate) fn raw(n: usize, bits: u64) -> Self {
        Self { n: n as u32, bits }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Bit of party `l` (1-based).
    pub fn party(&self, l: usize) -> u8 {
        debug_assert!(l >= 1 && l <= self.n());
        ((self.bits >> (self.n() - l)) & 1) as u8
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.bits.count_ones() & 1) as u8
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, bits: self.bits ^ ((1u64 << self.n) - 1) }
    }

    /// `sum_l a_l b_l` as an integer.
    pub fn dot(&self, other: &BitString) -> u32 {
        (self.bits & other.bits).count_ones()
    }

    pub fn label(&self) -> String {
        format!("{:0width$b}", self.bits, width = self.n())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `S_0` (even parity) and `S_1` (odd parity), each ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityClasses {
    pub s0: Vec<BitString>,
    pub s1: Vec<BitString>,
}

pub fn parity_classes(n: usize) -> Result<ParityClasses> {
    check_parties(n)?;
    let (s0, s1) = (0..1u64 << n).map(|b| BitString::raw(n, b)).partition(|b| b.parity() == 0);
    Ok(ParityClasses { s0, s1 })
}

/// Ascending even-parity indices of an `n`-bit space.
pub fn even_indices(n: usize) -> impl Iterator<Item = usize> {
    (0..1usize << n).filter(|k| k.count_ones() % 2 == 0)
}

pub(crate) fn check_parties(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::Size(format!("party count must be in 1..={MAX_PARTIES}, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[BitString]) -> Vec<String> {
        v.iter().map(BitString::label).collect()
    }

    #[test]
    fn parity_class_examples() {
        let p1 = parity_classes(1).unwrap();
        assert_eq!(labels(&p1.s0), ["0"]);
        assert_eq!(labels(&p1.s1), ["1"]);
        let p2 = parity_classes(2).unwrap();
        assert_eq!(labels(&p2.s0), ["00", "11"]);
        assert_eq!(labels(&p2.s1), ["01", "10"]);
        let p3 = parity_classes(3).unwrap();
        assert_eq!(labels(&p3.s0), ["000", "011", "101", "110"]);
        assert!(matches!(parity_classes(0), Err(Error::Size(_))));
        assert!(matches!(parity_classes(25), Err(Error::Size(_))));
    }

    #[test]
    fn class_sizes() {
        for n in 1..=12 {
            let p = parity_classes(n).unwrap();
            assert_eq!(p.s0.len(), 1 << (n - 1));
            assert_eq!(p.s1.len(), 1 << (n - 1));
            assert!(p.s0.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(even_indices(n).collect::<Vec<_>>(), p.s0.iter().map(BitString::index).collect::<Vec<_>>());
        }
    }

    #[test]
    fn party_order_and_complement() {
        let b = BitString::from_label("0110").unwrap();
        assert_eq!(b.index(), 6);
        assert_eq!((1..=4).map(|l| b.party(l)).collect::<Vec<_>>(), [0, 1, 1, 0]);
        assert_eq!(b.complement().label(), "1001");
        assert_eq!(b.complement().bits(), b.bits() ^ 0b1111);
        assert_eq!(b.dot(&BitString::from_label("0011").unwrap()), 1);
        assert!(BitString::from_label("01a").is_err());
        assert!(BitString::new(2, 4).is_err());
    }
}
