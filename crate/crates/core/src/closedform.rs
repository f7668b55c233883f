//! Closed-form FBCT of the power function x^(2^(n-2)-1) over GF(2^n).
//!
//! For a non-trivial pair (a, b) put c = a/b and s = c^2 + c + 1. The entry
//! is decided by the traces of
//!
//! ```text
//! w1 = 1/s,    w2 = c^2/s,    w3 = w1 + w2 = (c^2+1)/s
//! ```
//!
//! (the 1/0 := 0 convention applies throughout): the entry is 0 unless
//! s != 0 and all three traces vanish, in which case it is 4, raised to 8
//! when 3 | n and c additionally lies in the cubic subfield GF(8) (its four
//! subfield points join the four generic solutions). The entry frequencies
//! over all pairs reduce to the binary Kloosterman sum
//!
//! ```text
//! K_n(1) = sum over x of (-1)^Tr(x + 1/x)
//! ```
//!
//! for which Carlitz's binomial form gives an O(n) big-integer evaluation.
//! Every formula here is exact integer arithmetic; the full-field sums exist
//! as independent cross-checks for the closed forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::analysis::{
    fbct_ratio_count, fbct_spectrum_bruteforce, fbct_spectrum_power, power_value_table,
    BoxedFunction, Spectrum,
};
use crate::field::{format_hex, FieldElement, FieldSpec};
use crate::parallel::run_chunks;
use crate::Error;

/// Degree above which the closed form is stated unconditionally. Smaller
/// fields still run, flagged as outside the hypothesis.
pub const HYPOTHESIS_MIN_DEGREE: u32 = 7;

/// The studied exponent, 2^(n-2) - 1.
pub fn target_exponent(n: u32) -> u64 {
    assert!(n >= 3, "the exponent 2^(n-2)-1 needs n >= 3 to be positive");
    (1u64 << (n - 2)) - 1
}

/// K_n(1) by the defining full-field sum, with 1/0 := 0.
pub fn kloosterman_direct(spec: FieldSpec) -> i64 {
    let mask = spec.trace_mask();
    let mut acc = 0i64;
    for x in 0..spec.order() {
        let x = x as u32;
        let v = x ^ spec.inv_bits(x);
        acc += if (v & mask).count_ones() & 1 == 0 {
            1
        } else {
            -1
        };
    }
    acc
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 1..=k {
        acc = acc * BigInt::from(n - k + j) / BigInt::from(j);
    }
    acc
}

/// K_n(1) by Carlitz's closed form
/// `1 + (-1)^(n-1)/2^(n-1) * sum_i (-1)^i C(n,2i) 7^i` for 2 <= n <= 64.
/// The division by 2^(n-1) is performed exactly in big-integer arithmetic;
/// a nonzero remainder would be an implementation bug and panics.
pub fn kloosterman_carlitz(n: u32) -> Result<i64, Error> {
    if !(2..=64).contains(&n) {
        return Err(Error::KloostermanDegree(n));
    }
    let mut sum = BigInt::zero();
    let mut seven_power = BigInt::one();
    for i in 0..=n / 2 {
        let term = binomial(u64::from(n), u64::from(2 * i)) * &seven_power;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        seven_power *= 7;
    }
    if n.is_multiple_of(2) {
        // (-1)^(n-1)
        sum = -sum;
    }
    let denom = BigInt::one() << (n - 1);
    let quotient = &sum / &denom;
    assert!(
        (&sum % &denom).is_zero(),
        "Carlitz numerator must be divisible by 2^(n-1)"
    );
    let k = BigInt::one() + quotient;
    Ok(k.to_i64().expect("K_n(1) fits an i64 for n <= 64"))
}

/// The exponential sum `sum over x of (-1)^Tr((x+1)/(x^2+x+1))` by direct
/// full-field evaluation, with 1/0 := 0 at the two points where the
/// denominator vanishes (even n only).
pub fn exponential_sum_direct(spec: FieldSpec) -> i64 {
    let mask = spec.trace_mask();
    let mut acc = 0i64;
    for x in 0..spec.order() {
        let x = x as u32;
        let denom = spec.sqr_bits(x) ^ x ^ 1;
        let h = spec.mul_bits(x ^ 1, spec.inv_bits(denom));
        acc += if (h & mask).count_ones() & 1 == 0 {
            1
        } else {
            -1
        };
    }
    acc
}

/// The same exponential sum in closed form: K_n(1) - 2 for odd n, K_n(1)
/// for even n.
pub fn exponential_sum_formula(n: u32) -> Result<i64, Error> {
    let k = kloosterman_carlitz(n)?;
    Ok(if n % 2 == 1 { k - 2 } else { k })
}

/// Which clause of the closed form decided a predicted entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionBranch {
    /// ab(a+b) = 0: the entry is 2^n by definition.
    Trivial,
    /// All three traces vanish and c lies in GF(8) with 3 | n: entry 8.
    TracesMetSubfield,
    /// All three traces vanish, generic c: entry 4.
    TracesMetGeneric,
    /// s = 0 or some trace is nonzero: entry 0.
    Failed,
}

impl std::fmt::Display for PredictionBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PredictionBranch::Trivial => "trivial",
            PredictionBranch::TracesMetSubfield => "trace-conditions-met-subfield",
            PredictionBranch::TracesMetGeneric => "trace-conditions-met-generic",
            PredictionBranch::Failed => "failed",
        })
    }
}

/// The trace bits that decided a non-trivial prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceWitness {
    pub tr_w1: u8,
    pub tr_w2: u8,
    pub tr_w3: u8,
    /// Whether c = a/b satisfies c^8 = c, the Frobenius fixed-point test for
    /// membership in GF(8).
    pub ratio_in_subfield: bool,
}

/// Closed-form verdict for one pair (a, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FbctPrediction {
    /// Predicted FBCT entry: 2^n, 0, 4 or 8.
    pub value: u64,
    pub branch: PredictionBranch,
    /// Absent for pairs decided before the traces are reached (trivial
    /// pairs and s = 0).
    pub witness: Option<TraceWitness>,
}

/// Predicts FBCT(a, b) for x^(2^(n-2)-1) without touching the function:
/// trivial pairs give 2^n; otherwise the trace conditions on w1, w2, w3 at
/// c = a/b decide 0, 4 or (for 3 | n with c in GF(8)) 8.
pub fn predict_fbct_entry(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FbctPrediction {
    assert!(
        a.spec() == spec && b.spec() == spec,
        "prediction arguments must come from {spec}"
    );
    if a.is_zero() || b.is_zero() || a == b {
        return FbctPrediction {
            value: spec.order(),
            branch: PredictionBranch::Trivial,
            witness: None,
        };
    }
    let c = a * b.inv();
    let s = c.square() + c + spec.one();
    if s.is_zero() {
        return FbctPrediction {
            value: 0,
            branch: PredictionBranch::Failed,
            witness: None,
        };
    }
    let w1 = s.inv();
    let w2 = c.square() * w1;
    let w3 = w1 + w2;
    let witness = TraceWitness {
        tr_w1: w1.trace(),
        tr_w2: w2.trace(),
        tr_w3: w3.trace(),
        ratio_in_subfield: spec.degree().is_multiple_of(3) && c.pow(8) == c,
    };
    let prediction = if witness.tr_w1 == 0 && witness.tr_w2 == 0 && witness.tr_w3 == 0 {
        if witness.ratio_in_subfield {
            (8, PredictionBranch::TracesMetSubfield)
        } else {
            (4, PredictionBranch::TracesMetGeneric)
        }
    } else {
        (0, PredictionBranch::Failed)
    };
    FbctPrediction {
        value: prediction.0,
        branch: prediction.1,
        witness: Some(witness),
    }
}

/// Predicted FBCT spectrum of x^(2^(n-2)-1), with every frequency derived
/// from K_n(1) in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPrediction {
    n: u32,
    kloosterman: i64,
    theta: BTreeMap<u64, u64>,
    outside_hypothesis: bool,
}

impl SpectrumPrediction {
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// The K_n(1) value the frequencies were computed from.
    pub fn kloosterman(&self) -> i64 {
        self.kloosterman
    }

    /// Predicted frequency per entry value. The keys 2^n, 0, 4 and 8 are
    /// always present; 8 carries frequency 0 when 3 does not divide n.
    pub fn theta(&self) -> &BTreeMap<u64, u64> {
        &self.theta
    }

    pub fn frequency(&self, value: u64) -> u64 {
        self.theta.get(&value).copied().unwrap_or(0)
    }

    /// Set when the degree is below the closed form's stated range (n <= 6);
    /// the prediction is still produced for comparison.
    pub fn outside_hypothesis(&self) -> bool {
        self.outside_hypothesis
    }

    /// Predicted maximum non-trivial entry.
    pub fn uniformity(&self) -> u64 {
        if self.frequency(8) > 0 {
            8
        } else if self.frequency(4) > 0 {
            4
        } else {
            0
        }
    }

    /// As a [`Spectrum`], dropping zero-frequency values so it compares
    /// directly against computed spectra.
    pub fn to_spectrum(&self) -> Spectrum {
        let counts: BTreeMap<u64, u64> = self
            .theta
            .iter()
            .filter(|(_, &f)| f > 0)
            .map(|(&v, &f)| (v, f))
            .collect();
        Spectrum::from_counts(self.n, counts)
    }
}

fn exact_quarter(num: BigInt) -> BigInt {
    let four = BigInt::from(4);
    let quotient = &num / &four;
    assert!(
        (&num % &four).is_zero(),
        "spectrum frequency must be divisible by 4"
    );
    quotient
}

fn to_frequency(v: BigInt) -> u64 {
    assert!(!v.is_negative(), "spectrum frequency must be non-negative");
    v.to_u64().expect("frequency fits u64 for n <= 24")
}

/// Predicted spectrum from the (n mod 2, n mod 3) branch of the closed form
/// and K_n(1) from Carlitz's formula. All divisions are exact by
/// construction and asserted.
pub fn predict_spectrum(spec: FieldSpec) -> SpectrumPrediction {
    let n = spec.degree();
    let k = kloosterman_carlitz(n).expect("field degrees are within the Carlitz range");
    let order = BigInt::one() << n;
    let q1 = &order - 1; // 2^n - 1
    let k3 = BigInt::from(3 * k);

    let theta0 = if n % 2 == 1 {
        exact_quarter(&q1 * (3 * &order + &k3 - 12))
    } else {
        exact_quarter(&q1 * (3 * &order - &k3 + 8))
    };
    let (theta4, theta8) = if !n.is_multiple_of(3) {
        let theta4 = if n % 2 == 1 {
            exact_quarter(&q1 * (&order - &k3 + 4))
        } else {
            exact_quarter(&q1 * (&order + &k3 - 16))
        };
        (theta4, BigInt::zero())
    } else {
        let theta4 = if n % 2 == 1 {
            exact_quarter(&q1 * (&order - &k3 - 20))
        } else {
            exact_quarter(&q1 * (&order + &k3 - 40))
        };
        (theta4, 6 * &q1)
    };
    let trivial = 3 * &order - 2;

    let total = &trivial + &theta0 + &theta4 + &theta8;
    assert_eq!(total, &order * &order, "frequencies must cover all pairs");

    let mut theta = BTreeMap::new();
    for (value, freq) in [
        (0u64, theta0),
        (4, theta4),
        (8, theta8),
        (spec.order(), trivial),
    ] {
        *theta.entry(value).or_insert(0) += to_frequency(freq);
    }
    SpectrumPrediction {
        n,
        kloosterman: k,
        theta,
        outside_hypothesis: n < HYPOTHESIS_MIN_DEGREE,
    }
}

/// Spectrum plus its maximum non-trivial entry, for report output.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub spectrum: Vec<(u64, u64)>,
    pub uniformity: u64,
}

/// Outcome of checking the closed form against direct computation.
/// `pass` requires the exact spectrum match, zero entry mismatches, the
/// uniformity agreement and zero mod-4 violations.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub n: u32,
    pub modulus: String,
    pub kloosterman: i64,
    pub predicted: SpectrumSummary,
    pub computed: SpectrumSummary,
    pub spectra_match: bool,
    pub entry_mismatches: u64,
    pub pairs_checked: u64,
    pub uniformity: u64,
    pub mod4_violations: u64,
    pub brute_force_checked: bool,
    pub outside_hypothesis: bool,
    pub pass: bool,
}

/// Checks the closed form for x^(2^(n-2)-1) against direct computation.
///
/// Always compares the predicted spectrum with the ratio-reduced computed
/// spectrum and every per-ratio count with the per-entry prediction (each
/// ratio c stands for the 2^n - 1 pairs (c*b, b), and trivial pairs are
/// 2^n on both sides by definition, so this covers all 2^(2n) pairs). For
/// n within the brute-force cap the spectrum is additionally recomputed by
/// the O(2^(3n)) scan and every pair (a, b) is compared individually.
/// Disagreement is a report outcome, not an error.
pub fn verify_closed_form(spec: FieldSpec, threads: usize) -> ClosedFormReport {
    let n = spec.degree();
    let order = spec.order();
    let d = target_exponent(n);
    let prediction = predict_spectrum(spec);
    let computed =
        fbct_spectrum_power(spec, d, threads).expect("target exponent is valid whenever n >= 3");
    let mut spectra_match = prediction.to_spectrum() == computed;

    let table = power_value_table(spec, d);
    let one = spec.one();

    // One pass over the ratios: per-entry agreement, uniformity, mod 4.
    let ratio_parts = run_chunks(order - 2, threads, |range| {
        let mut mismatches = 0u64;
        let mut mod4 = 0u64;
        let mut max = 0u64;
        for i in range {
            let c_bits = (i + 2) as u32;
            let count = fbct_ratio_count(&table, c_bits as usize);
            let c = spec.element_unchecked(c_bits);
            if predict_fbct_entry(spec, c, one).value != count {
                mismatches += 1;
            }
            if !count.is_multiple_of(4) {
                mod4 += 1;
            }
            max = max.max(count);
        }
        (mismatches, mod4, max)
    });
    let mut entry_mismatches = 0u64;
    let mut mod4_violations = 0u64;
    let mut computed_uniformity = 0u64;
    for (mismatches, mod4, max) in ratio_parts {
        // each ratio stands for 2^n - 1 pairs
        entry_mismatches += mismatches * (order - 1);
        mod4_violations += mod4 * (order - 1);
        computed_uniformity = computed_uniformity.max(max);
    }
    let pairs_checked = order * order;

    let brute_force_checked = n <= crate::analysis::BRUTE_FORCE_CAP;
    if brute_force_checked {
        let f = BoxedFunction::power(spec, d).expect("validated above");
        let brute = fbct_spectrum_bruteforce(&f, threads).expect("degree is under the cap");
        spectra_match = spectra_match && brute == computed;

        // Re-derive the per-pair tallies from scratch over all 2^(2n) pairs.
        let size = order as usize;
        let pair_parts = run_chunks(order, threads, |range| {
            let mut mismatches = 0u64;
            let mut mod4 = 0u64;
            for a in range {
                let a = a as usize;
                let elem_a = spec.element_unchecked(a as u32);
                for b in 0..size {
                    let count = (0..size)
                        .filter(|&x| table[x] ^ table[x ^ a] ^ table[x ^ b] ^ table[x ^ a ^ b] == 0)
                        .count() as u64;
                    let elem_b = spec.element_unchecked(b as u32);
                    if predict_fbct_entry(spec, elem_a, elem_b).value != count {
                        mismatches += 1;
                    }
                    if !count.is_multiple_of(4) {
                        mod4 += 1;
                    }
                }
            }
            (mismatches, mod4)
        });
        entry_mismatches = 0;
        mod4_violations = 0;
        for (mismatches, mod4) in pair_parts {
            entry_mismatches += mismatches;
            mod4_violations += mod4;
        }
    }

    let predicted_uniformity = prediction.uniformity();
    let pass = spectra_match
        && entry_mismatches == 0
        && predicted_uniformity == computed_uniformity
        && mod4_violations == 0;

    ClosedFormReport {
        n,
        modulus: format_hex(spec.modulus()),
        kloosterman: prediction.kloosterman(),
        predicted: SpectrumSummary {
            spectrum: prediction.to_spectrum().entries(),
            uniformity: predicted_uniformity,
        },
        computed: SpectrumSummary {
            spectrum: computed.entries(),
            uniformity: computed_uniformity,
        },
        spectra_match,
        entry_mismatches,
        pairs_checked,
        uniformity: computed_uniformity,
        mod4_violations,
        brute_force_checked,
        outside_hypothesis: prediction.outside_hypothesis(),
        pass,
    }
}
