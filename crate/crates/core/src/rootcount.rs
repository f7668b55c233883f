//! Root counting over GF(2^n) for quadratics and for quartics of the shape
//! x^4 + a2*x^2 + a1*x + a0 with a0*a1 != 0.
//!
//! Quadratic counts come from the classical trace criterion. Quartic counts
//! come from the factorization pattern of the companion cubic
//! y^3 + a2*y + a1 together with the traces of w_i = a0*r_i^2 / a1^2 at the
//! cubic's roots r_i. Cubic roots are found by a full-field scan: a single
//! scan is O(2^n), which is cheap at the supported degrees and leaves nothing
//! to trust but evaluation.

use std::fmt;

use crate::field::{FieldElement, FieldSpec};
use crate::Error;

/// Factorization shape of a cubic over the base field, by factor degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicPattern {
    /// Three linear factors: 1+1+1.
    ThreeLinear,
    /// One linear and one irreducible quadratic factor: 1+2.
    LinearQuadratic,
    /// Irreducible: 3.
    Irreducible,
}

impl fmt::Display for CubicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubicPattern::ThreeLinear => "1+1+1",
            CubicPattern::LinearQuadratic => "1+2",
            CubicPattern::Irreducible => "3",
        })
    }
}

/// Factorization shape of a quartic over the base field, by factor degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticPattern {
    /// 1+1+1+1
    FourLinear,
    /// 1+1+2
    TwoLinearQuadratic,
    /// 2+2
    TwoQuadratics,
    /// 1+3
    LinearCubic,
    /// 4
    Irreducible,
}

impl QuarticPattern {
    /// Number of degree-1 parts, i.e. roots in the base field.
    pub fn root_count(&self) -> u8 {
        match self {
            QuarticPattern::FourLinear => 4,
            QuarticPattern::TwoLinearQuadratic => 2,
            QuarticPattern::TwoQuadratics => 0,
            QuarticPattern::LinearCubic => 1,
            QuarticPattern::Irreducible => 0,
        }
    }
}

impl fmt::Display for QuarticPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuarticPattern::FourLinear => "1+1+1+1",
            QuarticPattern::TwoLinearQuadratic => "1+1+2",
            QuarticPattern::TwoQuadratics => "2+2",
            QuarticPattern::LinearCubic => "1+3",
            QuarticPattern::Irreducible => "4",
        })
    }
}

/// A quartic x^4 + a2*x^2 + a1*x + a0 with the hypothesis a0*a1 != 0
/// enforced at construction.
#[derive(Debug, Clone, Copy)]
pub struct QuarticShape {
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
}

impl QuarticShape {
    pub fn new(a2: FieldElement, a1: FieldElement, a0: FieldElement) -> Result<Self, Error> {
        if a2.spec() != a1.spec() || a1.spec() != a0.spec() {
            return Err(Error::FieldMismatch);
        }
        if a1.is_zero() || a0.is_zero() {
            return Err(Error::QuarticHypothesis);
        }
        Ok(QuarticShape { a2, a1, a0 })
    }

    pub fn spec(&self) -> FieldSpec {
        self.a2.spec()
    }

    pub fn coefficients(&self) -> (FieldElement, FieldElement, FieldElement) {
        (self.a2, self.a1, self.a0)
    }

    /// Evaluates x^4 + a2*x^2 + a1*x + a0.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let x2 = x.square();
        x2.square() + self.a2 * x2 + self.a1 * x + self.a0
    }
}

/// Classification result: the quartic's factorization pattern, its root
/// count, and the companion cubic's pattern that led there. `degenerate` is
/// set when the classifier had to fall back to exhaustive counting because
/// the trace configuration matched no tabulated case; under the a0*a1 != 0
/// hypothesis the w_i sum to zero, so an odd number of nonzero traces cannot
/// occur and the flag should never be observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorPattern {
    pub pattern: QuarticPattern,
    pub root_count: u8,
    pub cubic: CubicPattern,
    pub degenerate: bool,
}

/// Number of roots of a*x^2 + b*x + c with a != 0: one root when b = 0,
/// two when b != 0 and Tr(a*c/b^2) = 0, none otherwise.
pub fn quadratic_root_count(
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Result<u8, Error> {
    if a.spec() != b.spec() || b.spec() != c.spec() {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() {
        return Err(Error::NotQuadratic);
    }
    if b.is_zero() {
        // x^2 is a bijection in characteristic 2, so a*x^2 = c has exactly
        // one solution.
        return Ok(1);
    }
    let w = a * c * (b * b).inv();
    Ok(if w.trace() == 0 { 2 } else { 0 })
}

/// All roots of t^3 + p*t + q in the base field, with multiplicity, sorted
/// by encoding. Found by full-field scan; multiplicities follow from the
/// derivative t^2 + p.
pub fn cubic_roots(p: FieldElement, q: FieldElement) -> Vec<FieldElement> {
    assert!(
        p.spec() == q.spec(),
        "cannot combine elements of {} and {}",
        p.spec(),
        q.spec()
    );
    let spec = p.spec();
    let (pb, qb) = (p.bits() as u32, q.bits() as u32);
    let mut out = Vec::new();
    for t in 0..spec.order() as u32 {
        let t3 = spec.mul_bits(spec.sqr_bits(t), t);
        if t3 ^ spec.mul_bits(pb, t) ^ qb == 0 {
            // t is a repeated root iff the derivative t^2 + p vanishes; a
            // repeated root forces the remaining root to 0, and only t^3
            // itself has a triple root.
            let mult = if spec.sqr_bits(t) == pb {
                if t == 0 {
                    3
                } else {
                    2
                }
            } else {
                1
            };
            for _ in 0..mult {
                out.push(spec.element_unchecked(t));
            }
        }
    }
    out
}

fn exhaustive_root_count(q: &QuarticShape) -> u8 {
    q.spec()
        .elements()
        .filter(|&x| q.eval(x).is_zero())
        .count() as u8
}

/// Classifies the factorization of x^4 + a2*x^2 + a1*x + a0 from the
/// companion cubic y^3 + a2*y + a1 and the traces of w_i = a0*r_i^2/a1^2.
pub fn quartic_classify(quartic: &QuarticShape) -> FactorPattern {
    let (a2, a1, a0) = quartic.coefficients();
    let roots = cubic_roots(a2, a1);
    // a1 != 0 makes the companion cubic separable, so the scan sees each
    // root once and 0, 1 or 3 of them.
    debug_assert!(roots.windows(2).all(|w| w[0] != w[1]));
    let a1_sq_inv = (a1 * a1).inv();
    let omega = |r: FieldElement| a0 * r.square() * a1_sq_inv;
    match roots.len() {
        // An irreducible companion cubic forces factor type 1+3: the
        // Frobenius permutes the three root-pairings cyclically, so it
        // fixes exactly one of the quartic's four roots.
        0 => FactorPattern {
            pattern: QuarticPattern::LinearCubic,
            root_count: 1,
            cubic: CubicPattern::Irreducible,
            degenerate: false,
        },
        1 => {
            let pattern = if omega(roots[0]).trace() == 0 {
                QuarticPattern::TwoLinearQuadratic
            } else {
                QuarticPattern::Irreducible
            };
            FactorPattern {
                pattern,
                root_count: pattern.root_count(),
                cubic: CubicPattern::LinearQuadratic,
                degenerate: false,
            }
        }
        3 => {
            let ones = roots.iter().filter(|&&r| omega(r).trace() == 1).count();
            match ones {
                0 => FactorPattern {
                    pattern: QuarticPattern::FourLinear,
                    root_count: 4,
                    cubic: CubicPattern::ThreeLinear,
                    degenerate: false,
                },
                2 => FactorPattern {
                    pattern: QuarticPattern::TwoQuadratics,
                    root_count: 0,
                    cubic: CubicPattern::ThreeLinear,
                    degenerate: false,
                },
                _ => {
                    // Unreachable when a0*a1 != 0 (the w_i sum to 0, forcing
                    // even trace parity); count honestly instead of guessing.
                    let rc = exhaustive_root_count(quartic);
                    let pattern = match rc {
                        4 => QuarticPattern::FourLinear,
                        2 => QuarticPattern::TwoLinearQuadratic,
                        1 => QuarticPattern::LinearCubic,
                        _ => QuarticPattern::TwoQuadratics,
                    };
                    FactorPattern {
                        pattern,
                        root_count: rc,
                        cubic: CubicPattern::ThreeLinear,
                        degenerate: true,
                    }
                }
            }
        }
        _ => unreachable!("a separable cubic has 0, 1 or 3 roots in the field"),
    }
}

/// Number of base-field roots of the quartic, derived from its pattern.
pub fn quartic_root_count(quartic: &QuarticShape) -> u8 {
    quartic_classify(quartic).root_count
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::with_default_modulus(n).unwrap()
    }

    fn exhaustive_quadratic_count(a: FieldElement, b: FieldElement, c: FieldElement) -> u8 {
        a.spec()
            .elements()
            .filter(|&x| (a * x * x + b * x + c).is_zero())
            .count() as u8
    }

    #[test]
    fn quadratic_examples() {
        let f = gf(5); // odd degree: Tr(1) = 1
        let one = f.one();
        let zero = f.zero();
        // x^2 + x has roots {0, 1}
        assert_eq!(quadratic_root_count(one, one, zero).unwrap(), 2);
        // x^2 + x + 1 has no roots when Tr(1) = 1
        assert_eq!(quadratic_root_count(one, one, one).unwrap(), 0);
        // b = 0: exactly one root
        let c = f.element(0x15).unwrap();
        assert_eq!(quadratic_root_count(one, zero, c).unwrap(), 1);
        // a = 0 is not a quadratic
        assert_eq!(
            quadratic_root_count(zero, one, one),
            Err(Error::NotQuadratic)
        );
    }

    #[test]
    fn quadratic_counts_match_exhaustive_scan() {
        for n in [4, 6] {
            let f = gf(n);
            for a in f.elements().skip(1) {
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(
                            quadratic_root_count(a, b, c).unwrap(),
                            exhaustive_quadratic_count(a, b, c),
                            "n={n} a={a} b={b} c={c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_with_ratio_coefficients_has_the_three_known_roots() {
        // t^3 + (c^2+c+1)t + (c^2+c) = (t+1)(t+c)(t+c+1) for every c.
        for n in [4, 7, 9] {
            let f = gf(n);
            let one = f.one();
            for c in f.elements().skip(2) {
                let p = c.square() + c + one;
                let q = c.square() + c;
                let mut expected: Vec<u64> = vec![1, c.bits(), (c + one).bits()];
                expected.sort_unstable();
                let roots: Vec<u64> = cubic_roots(p, q).iter().map(|r| r.bits()).collect();
                assert_eq!(roots, expected, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn cubic_triple_root_at_zero() {
        let f = gf(6);
        let roots = cubic_roots(f.zero(), f.zero());
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn cubic_double_root_structure() {
        // t(t+r)^2 = t^3 + r^2 t: p = r^2, q = 0.
        let f = gf(5);
        let r = f.element(0b101).unwrap();
        let roots = cubic_roots(r.square(), f.zero());
        let bits: Vec<u64> = roots.iter().map(|x| x.bits()).collect();
        assert_eq!(bits, vec![0, r.bits(), r.bits()]);
    }

    #[test]
    fn cubic_roots_match_exhaustive_evaluation_and_refactor() {
        let f = gf(8);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let p = f.element(rng.gen_range(0..f.order())).unwrap();
            let q = f.element(rng.gen_range(0..f.order())).unwrap();
            let roots = cubic_roots(p, q);
            let evaluated: Vec<u64> = f
                .elements()
                .filter(|&t| (t.square() * t + p * t + q).is_zero())
                .map(|t| t.bits())
                .collect();
            let mut distinct: Vec<u64> = roots.iter().map(|r| r.bits()).collect();
            distinct.dedup();
            assert_eq!(distinct, evaluated);
            if roots.len() == 3 {
                // Multiply the factors back out: elementary symmetric
                // functions must reproduce the coefficients.
                let (r1, r2, r3) = (roots[0], roots[1], roots[2]);
                assert!((r1 + r2 + r3).is_zero());
                assert_eq!(r1 * r2 + r1 * r3 + r2 * r3, p);
                assert_eq!(r1 * r2 * r3, q);
            }
        }
    }

    #[test]
    fn quartic_hypothesis_is_enforced() {
        let f = gf(8);
        let a = f.element(3).unwrap();
        assert!(QuarticShape::new(a, f.zero(), a).is_err());
        assert!(QuarticShape::new(a, a, f.zero()).is_err());
        assert!(QuarticShape::new(a, a, a).is_ok());
    }

    /// The quartic arising from a ratio c: y^4 + (c^2+c+1)y^2 + (c^2+c)y
    /// + (c^4+c^2)/(c^2+c+1), defined whenever c^2+c+1 != 0.
    fn ratio_quartic(c: FieldElement) -> Option<QuarticShape> {
        let f = c.spec();
        let s = c.square() + c + f.one();
        if s.is_zero() {
            return None;
        }
        let a2 = s;
        let a1 = c.square() + c;
        let a0 = (c.square().square() + c.square()) * s.inv();
        QuarticShape::new(a2, a1, a0).ok()
    }

    #[test]
    fn ratio_quartic_omegas_match_their_closed_forms() {
        for n in [7, 9] {
            let f = gf(n);
            let one = f.one();
            for c in f.elements().skip(2) {
                let Some(q) = ratio_quartic(c) else { continue };
                let (a2, a1, a0) = q.coefficients();
                let s_inv = (c.square() + c + one).inv();
                let roots = cubic_roots(a2, a1);
                assert_eq!(roots.len(), 3);
                let a1_sq_inv = (a1 * a1).inv();
                let mut omegas: Vec<u64> = roots
                    .iter()
                    .map(|&r| (a0 * r.square() * a1_sq_inv).bits())
                    .collect();
                omegas.sort_unstable();
                let mut expected: Vec<u64> = vec![
                    s_inv.bits(),
                    (c.square() * s_inv).bits(),
                    ((c.square() + one) * s_inv).bits(),
                ];
                expected.sort_unstable();
                assert_eq!(omegas, expected, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn ratio_quartic_root_count_is_zero_or_the_trace_split() {
        let f = gf(7);
        let one = f.one();
        let mut saw_four = false;
        let mut saw_none = false;
        for c in f.elements().skip(2) {
            let Some(q) = ratio_quartic(c) else { continue };
            let s_inv = (c.square() + c + one).inv();
            let all_traces_zero = s_inv.trace() == 0
                && (c.square() * s_inv).trace() == 0
                && ((c.square() + one) * s_inv).trace() == 0;
            let pat = quartic_classify(&q);
            assert!(!pat.degenerate);
            assert_eq!(pat.cubic, CubicPattern::ThreeLinear);
            if all_traces_zero {
                assert_eq!(pat.pattern, QuarticPattern::FourLinear);
                assert_eq!(pat.root_count, 4);
                saw_four = true;
            } else {
                assert_eq!(pat.pattern, QuarticPattern::TwoQuadratics);
                assert_eq!(pat.root_count, 0);
                saw_none = true;
            }
            assert_eq!(pat.root_count, exhaustive_root_count(&q));
        }
        assert!(saw_four && saw_none);
    }

    #[test]
    fn irreducible_companion_cubic_gives_exactly_one_root() {
        let f = gf(8);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut seen = 0;
        while seen < 50 {
            let a2 = f.element(rng.gen_range(0..f.order())).unwrap();
            let a1 = f.element(rng.gen_range(1..f.order())).unwrap();
            let a0 = f.element(rng.gen_range(1..f.order())).unwrap();
            if !cubic_roots(a2, a1).is_empty() {
                continue;
            }
            let q = QuarticShape::new(a2, a1, a0).unwrap();
            let pat = quartic_classify(&q);
            assert_eq!(pat.cubic, CubicPattern::Irreducible);
            assert_eq!(pat.pattern, QuarticPattern::LinearCubic);
            assert_eq!(pat.root_count, 1);
            assert_eq!(exhaustive_root_count(&q), 1);
            seen += 1;
        }
    }

    #[test]
    fn random_quartics_match_exhaustive_counts() {
        let f = gf(8);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut produced = 0;
        while produced < 200 {
            let a2 = f.element(rng.gen_range(0..f.order())).unwrap();
            let a1 = f.element(rng.gen_range(1..f.order())).unwrap();
            let a0 = f.element(rng.gen_range(1..f.order())).unwrap();
            let q = QuarticShape::new(a2, a1, a0).unwrap();
            let pat = quartic_classify(&q);
            assert!(!pat.degenerate, "even trace parity must hold");
            assert_eq!(pat.root_count, exhaustive_root_count(&q));
            assert_eq!(pat.root_count, pat.pattern.root_count());
            assert_eq!(quartic_root_count(&q), pat.root_count);
            produced += 1;
        }
    }

    #[test]
    fn patterns_serialize_as_degree_sums() {
        assert_eq!(QuarticPattern::FourLinear.to_string(), "1+1+1+1");
        assert_eq!(QuarticPattern::TwoLinearQuadratic.to_string(), "1+1+2");
        assert_eq!(QuarticPattern::TwoQuadratics.to_string(), "2+2");
        assert_eq!(QuarticPattern::LinearCubic.to_string(), "1+3");
        assert_eq!(QuarticPattern::Irreducible.to_string(), "4");
        assert_eq!(CubicPattern::ThreeLinear.to_string(), "1+1+1");
        assert_eq!(CubicPattern::LinearQuadratic.to_string(), "1+2");
        assert_eq!(CubicPattern::Irreducible.to_string(), "3");
    }
}
