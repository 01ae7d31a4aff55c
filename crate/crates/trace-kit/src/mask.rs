//! Subsets of `[n] = {1, ..., n}` as bit patterns.
//!
//! Element `e` corresponds to bit `e - 1`, so the integer value of the bit
//! pattern is exactly the colexicographic rank of the set: `A` precedes `B`
//! in colex order iff `A.bits() < B.bits()`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: u32 = 30;

/// A subset of `[n]` for some fixed universe size `n <= 30`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask {
    bits: u32,
    n: u32,
}

fn check_universe(n: u32) -> Result<()> {
    if n == 0 || n > MAX_UNIVERSE {
        return Err(Error::UnsupportedUniverse(n as u64));
    }
    Ok(())
}

impl SubsetMask {
    /// The empty subset of `[n]`.
    pub fn empty(n: u32) -> Result<Self> {
        check_universe(n)?;
        Ok(SubsetMask { bits: 0, n })
    }

    /// The full set `[n]`.
    pub fn full(n: u32) -> Result<Self> {
        check_universe(n)?;
        Ok(SubsetMask {
            bits: (1u32 << n) - 1,
            n,
        })
    }

    /// Builds a subset from 1-based element labels. Duplicates are fine.
    pub fn new(n: u32, elements: &[u32]) -> Result<Self> {
        check_universe(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::InvalidElement {
                    element: e as u64,
                    universe: n,
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask { bits, n })
    }

    /// Wraps a raw bit pattern; every set bit must lie below `n`.
    pub fn from_bits(n: u32, bits: u32) -> Result<Self> {
        check_universe(n)?;
        if n < 32 && bits >> n != 0 {
            return Err(Error::InvalidElement {
                element: (32 - bits.leading_zeros()) as u64,
                universe: n,
            });
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.n && self.bits >> (element - 1) & 1 == 1
    }

    /// 1-based element labels in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        (1..=self.n).filter(|&e| self.contains(e)).collect()
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & other.bits == self.bits
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.n, other.n);
        SubsetMask {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.n, other.n);
        SubsetMask {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn difference(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.n, other.n);
        SubsetMask {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    /// Complement within `[n]`.
    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & ((1u32 << self.n) - 1),
            n: self.n,
        }
    }

    pub fn with(&self, element: u32) -> Result<SubsetMask> {
        if element == 0 || element > self.n {
            return Err(Error::InvalidElement {
                element: element as u64,
                universe: self.n,
            });
        }
        Ok(SubsetMask {
            bits: self.bits | 1 << (element - 1),
            n: self.n,
        })
    }

    pub fn without(&self, element: u32) -> SubsetMask {
        if element == 0 || element > self.n {
            return *self;
        }
        SubsetMask {
            bits: self.bits & !(1 << (element - 1)),
            n: self.n,
        }
    }
}

/// Colex comparison: `a` strictly precedes `b` iff the largest element of the
/// symmetric difference lies in `b`. Equivalent to integer order on the bits.
pub fn colex_less(a: &SubsetMask, b: &SubsetMask) -> bool {
    a.bits < b.bits
}

/// Iterates over all submasks of `bits`, including `0` and `bits` itself,
/// in increasing integer order.
pub fn submasks(bits: u32) -> impl Iterator<Item = u32> {
    // Enumerating descending via (s - 1) & bits, then reversing, would need a
    // buffer; instead walk ascending by scattering a counter over the bits.
    let k = bits.count_ones();
    let positions: Vec<u32> = (0..32).filter(|i| bits >> i & 1 == 1).collect();
    (0u32..(1u32 << k)).map(move |counter| {
        let mut s = 0;
        for (j, &p) in positions.iter().enumerate() {
            if counter >> j & 1 == 1 {
                s |= 1 << p;
            }
        }
        s
    })
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let elems: Vec<String> = self.elements().iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", elems.join(","))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}
