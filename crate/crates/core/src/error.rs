use thiserror::Error;

/// Errors reported by field construction, function construction and the
/// table/spectrum operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field degree must lie in {min}..={max}, got {got}", min = crate::field::MIN_DEGREE, max = crate::field::MAX_DEGREE)]
    DegreeOutOfRange { got: u32 },

    #[error("modulus 0x{0:X} is not a monic polynomial of degree {1}")]
    ModulusDegree(u64, u32),

    #[error("modulus 0x{0:X} is reducible over GF(2)")]
    ReducibleModulus(u64),

    #[error("value 0x{0:X} is not an element of GF(2^{1})")]
    ElementOutOfRange(u64, u32),

    #[error("cannot combine values from different fields")]
    FieldMismatch,

    #[error("lookup table must have exactly {expected} entries, got {got}")]
    TableLength { expected: usize, got: usize },

    #[error("power exponent must lie in 1..2^{n}, got {got}")]
    ExponentOutOfRange { got: u64, n: u32 },

    #[error("leading coefficient is zero, not a quadratic")]
    NotQuadratic,

    #[error("quartic requires a0 and a1 both nonzero")]
    QuarticHypothesis,

    #[error("degree {n} exceeds the brute-force cap of {cap}; power functions can use the ratio-reduced spectrum instead")]
    Capacity { n: u32, cap: u32 },

    #[error("the Kloosterman closed form requires 2 <= n <= 64, got {0}")]
    KloostermanDegree(u32),

    #[error("cannot parse {0:?} as a hexadecimal integer")]
    InvalidHex(String),
}
