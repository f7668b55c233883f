//! Exact arithmetic in GF(2^n) for 2 <= n <= 24.
//!
//! Elements are stored in polynomial basis: bit i of the encoding is the
//! coefficient of x^i, and all arithmetic happens modulo a fixed monic
//! irreducible polynomial chosen when the [`FieldSpec`] is built. Moduli and
//! elements print as hexadecimal integers under the same bit convention
//! (e.g. x^3 + x + 1 is `0xB`).

use std::fmt;

use crate::Error;

/// Smallest supported field degree.
pub const MIN_DEGREE: u32 = 2;
/// Largest supported field degree. Full-field iteration is O(2^n), so the
/// cap keeps every operation desk-scale.
pub const MAX_DEGREE: u32 = 24;

/// Lexicographically smallest irreducible polynomial of each degree
/// 2..=24, encoded with bit i = coefficient of x^i.
const DEFAULT_MODULI: [u32; 23] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x203, 0x409, 0x805, 0x1009,
    0x201B, 0x4021, 0x8003, 0x1002B, 0x20009, 0x40009, 0x80027, 0x100009,
    0x200005, 0x400003, 0x800021, 0x100001B,
];

/// Returns the built-in modulus for degree `n`: the lexicographically
/// smallest irreducible polynomial of that degree.
pub fn default_modulus(n: u32) -> Result<u64, Error> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(Error::DegreeOutOfRange { got: n });
    }
    Ok(u64::from(DEFAULT_MODULI[(n - MIN_DEGREE) as usize]))
}

/// Parses a hexadecimal integer, with or without a leading `0x`/`0X`.
pub fn parse_hex(s: &str) -> Result<u64, Error> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u64::from_str_radix(digits, 16).map_err(|_| Error::InvalidHex(s.to_string()))
}

/// Formats a bit-vector encoding as `0x…`.
pub fn format_hex(v: u64) -> String {
    format!("0x{v:X}")
}

fn poly_degree(p: u64) -> u32 {
    debug_assert!(p != 0);
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree 1..=n/2. A factorization of
/// a degree-n polynomial must contain a factor of degree at most n/2, so
/// this is a complete irreducibility test.
fn is_irreducible(m: u64) -> bool {
    let n = poly_degree(m);
    for d in 1..=n / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(m, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// A concrete GF(2^n): degree plus irreducible modulus.
///
/// Construction validates the modulus (monic of degree exactly n, irreducible
/// over GF(2)); a reducible modulus would silently corrupt every count built
/// on top of it. The struct is small and `Copy`, so elements carry their spec
/// by value and any two elements can be checked for field agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
}

impl FieldSpec {
    /// Builds GF(2^n) with an explicit modulus.
    pub fn new(n: u32, modulus: u64) -> Result<Self, Error> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange { got: n });
        }
        if modulus == 0 || poly_degree(modulus) != n {
            return Err(Error::ModulusDegree(modulus, n));
        }
        if !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }
        Ok(FieldSpec {
            n,
            modulus: modulus as u32,
        })
    }

    /// Builds GF(2^n) with the built-in modulus table.
    pub fn with_default_modulus(n: u32) -> Result<Self, Error> {
        Self::new(n, default_modulus(n)?)
    }

    /// The extension degree n.
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// The modulus polynomial, bit i = coefficient of x^i.
    pub fn modulus(&self) -> u64 {
        u64::from(self.modulus)
    }

    /// Number of field elements, 2^n.
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    /// The additive identity.
    pub fn zero(&self) -> FieldElement {
        FieldElement {
            bits: 0,
            spec: *self,
        }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> FieldElement {
        FieldElement {
            bits: 1,
            spec: *self,
        }
    }

    /// Wraps an encoding as an element, rejecting values with bits at
    /// position n or above.
    pub fn element(&self, bits: u64) -> Result<FieldElement, Error> {
        if bits >= self.order() {
            return Err(Error::ElementOutOfRange(bits, self.n));
        }
        Ok(FieldElement {
            bits: bits as u32,
            spec: *self,
        })
    }

    /// All 2^n elements in increasing order of their encoding, starting at 0.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let spec = *self;
        (0..self.order()).map(move |bits| FieldElement {
            bits: bits as u32,
            spec,
        })
    }

    pub(crate) fn element_unchecked(&self, bits: u32) -> FieldElement {
        debug_assert!(u64::from(bits) < self.order());
        FieldElement { bits, spec: *self }
    }

    #[inline]
    fn reduce_bits(&self, mut p: u64) -> u32 {
        let m = u64::from(self.modulus);
        while p >> self.n != 0 {
            let d = 63 - p.leading_zeros();
            p ^= m << (d - self.n);
        }
        p as u32
    }

    /// Carry-less product reduced modulo the field modulus.
    #[inline]
    pub(crate) fn mul_bits(&self, a: u32, b: u32) -> u32 {
        let mut acc = 0u64;
        let mut a = u64::from(a);
        let mut b = u64::from(b);
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        self.reduce_bits(acc)
    }

    #[inline]
    pub(crate) fn sqr_bits(&self, a: u32) -> u32 {
        self.mul_bits(a, a)
    }

    /// Square-and-multiply. The exponent is reduced modulo 2^n - 1 for
    /// nonzero bases; 0^d = 0 for d > 0 and x^0 = 1 (including 0^0 = 1).
    pub(crate) fn pow_bits(&self, x: u32, d: u64) -> u32 {
        if x == 0 {
            return if d == 0 { 1 } else { 0 };
        }
        let mut e = d % (self.order() - 1);
        let mut acc = 1u32;
        let mut base = x;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_bits(acc, base);
            }
            base = self.sqr_bits(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse as x^(2^n - 2), with the 1/0 := 0 convention.
    pub(crate) fn inv_bits(&self, x: u32) -> u32 {
        self.pow_bits(x, self.order() - 2)
    }

    /// Absolute trace to GF(2): the field sum of the n Frobenius conjugates.
    pub(crate) fn trace_bits(&self, x: u32) -> u8 {
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..self.n {
            acc ^= y;
            y = self.sqr_bits(y);
        }
        debug_assert!(acc <= 1);
        (acc & 1) as u8
    }

    /// Mask m with parity(x & m) = trace(x); the trace is GF(2)-linear in
    /// the coordinates, so one bit per basis element determines it. Used by
    /// the full-field exponential sums where a per-element Frobenius loop
    /// would dominate the cost.
    pub(crate) fn trace_mask(&self) -> u32 {
        let mut mask = 0u32;
        for i in 0..self.n {
            if self.trace_bits(1 << i) == 1 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod 0x{:X}", self.n, self.modulus)
    }
}

/// An element of GF(2^n) in polynomial basis.
///
/// Elements are immutable and `Copy`; all operations are pure, so values can
/// be shared freely across threads. `+` and `*` panic when their operands
/// come from different [`FieldSpec`]s, which is a usage bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u32,
    spec: FieldSpec,
}

impl FieldElement {
    /// The polynomial-basis encoding, bit i = coefficient of x^i.
    pub fn bits(&self) -> u64 {
        u64::from(self.bits)
    }

    /// The field this element belongs to.
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// x^d by square-and-multiply; see [`FieldSpec`] for the 0 and 0^0
    /// conventions.
    pub fn pow(&self, d: u64) -> FieldElement {
        FieldElement {
            bits: self.spec.pow_bits(self.bits, d),
            spec: self.spec,
        }
    }

    /// Multiplicative inverse, with inv(0) = 0.
    ///
    /// The 1/0 := 0 convention is adopted globally: the quotient-style
    /// expressions in this crate (Kloosterman summands, trace-condition
    /// witnesses) are all defined with it, and one convention everywhere
    /// avoids context-dependent branching.
    pub fn inv(&self) -> FieldElement {
        FieldElement {
            bits: self.spec.inv_bits(self.bits),
            spec: self.spec,
        }
    }

    pub fn square(&self) -> FieldElement {
        FieldElement {
            bits: self.spec.sqr_bits(self.bits),
            spec: self.spec,
        }
    }

    /// Absolute trace into GF(2), returned as 0 or 1.
    pub fn trace(&self) -> u8 {
        self.spec.trace_bits(self.bits)
    }
}

fn check_same_spec(a: &FieldElement, b: &FieldElement) {
    assert!(
        a.spec == b.spec,
        "cannot combine elements of {} and {}",
        a.spec,
        b.spec
    );
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    /// Characteristic-2 addition: coordinatewise XOR. Panics on a field
    /// mismatch.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        check_same_spec(&self, &rhs);
        FieldElement {
            bits: self.bits ^ rhs.bits,
            spec: self.spec,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;

    /// Polynomial product reduced modulo the field modulus. Panics on a
    /// field mismatch.
    fn mul(self, rhs: FieldElement) -> FieldElement {
        check_same_spec(&self, &rhs);
        FieldElement {
            bits: self.spec.mul_bits(self.bits, rhs.bits),
            spec: self.spec,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:X}", self.bits)
    }
}
