//! Difference, boomerang and Feistel-boomerang connectivity tables.
//!
//! All counts are brute-force by definition:
//!
//! * `DDT_F(a,b)`  = #{x : F(x+a) + F(x) = b}
//! * `BCT_F(a,b)`  = #{(x,y) : F(y) + F(x) = b and F(y+a) + F(x+a) = b}
//!   (the pair-counting formulation, so non-permutations are supported;
//!   ordered pairs are counted)
//! * `FBCT_F(a,b)` = #{x : F(x) + F(x+a) + F(x+b) + F(x+a+b) = 0}
//!
//! For power functions F(x) = x^d the FBCT entry at (a,b) with ab(a+b) != 0
//! depends only on the ratio c = a/b (substitute x = b*y and divide by b^d),
//! so the full spectrum collapses to one representative count per ratio.
//! That turns the O(2^(3n)) spectrum into O(2^(2n)) and is the only
//! full-spectrum path available above the brute-force cap.
//!
//! Spectrum and table scans partition their outer loop across worker threads;
//! each worker fills a private histogram over immutable inputs and the
//! partials are merged key-wise, so results do not depend on the thread
//! count.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::field::{format_hex, FieldElement, FieldSpec};
use crate::parallel::run_chunks;
use crate::Error;

/// Largest degree for which full-table brute force (O(2^(3n)) scans or
/// 2^n x 2^n dumps) is allowed.
pub const BRUTE_FORCE_CAP: u32 = 9;

enum FunctionBody {
    Power(u64),
    Table(Vec<u32>),
}

/// A function from GF(2^n) to itself: either a power x^d or an explicit
/// lookup table with 2^n entries.
///
/// Power bodies are evaluated by square-and-multiply, table bodies by index.
/// Table-wide operations materialize the full value table once per function
/// (cached), after which every scan is XORs and lookups.
pub struct BoxedFunction {
    spec: FieldSpec,
    body: FunctionBody,
    cache: OnceLock<Vec<u32>>,
}

impl BoxedFunction {
    /// The power function x^d, for 1 <= d < 2^n.
    pub fn power(spec: FieldSpec, d: u64) -> Result<Self, Error> {
        validate_exponent(spec, d)?;
        Ok(BoxedFunction {
            spec,
            body: FunctionBody::Power(d),
            cache: OnceLock::new(),
        })
    }

    /// A lookup-table function; `entries[i]` is the image of the element
    /// encoded by `i`. Requires exactly 2^n entries, all from `spec`.
    pub fn from_table(spec: FieldSpec, entries: Vec<FieldElement>) -> Result<Self, Error> {
        if entries.len() as u64 != spec.order() {
            return Err(Error::TableLength {
                expected: spec.order() as usize,
                got: entries.len(),
            });
        }
        let mut bits = Vec::with_capacity(entries.len());
        for e in &entries {
            if e.spec() != spec {
                return Err(Error::FieldMismatch);
            }
            bits.push(e.bits() as u32);
        }
        Ok(BoxedFunction {
            spec,
            body: FunctionBody::Table(bits),
            cache: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// The exponent, when this is a power function.
    pub fn exponent(&self) -> Option<u64> {
        match self.body {
            FunctionBody::Power(d) => Some(d),
            FunctionBody::Table(_) => None,
        }
    }

    /// Evaluates the function at one point.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        assert!(
            x.spec() == self.spec,
            "argument from {} given to a function over {}",
            x.spec(),
            self.spec
        );
        match &self.body {
            FunctionBody::Power(d) => x.pow(*d),
            FunctionBody::Table(t) => self
                .spec
                .element(u64::from(t[x.bits() as usize]))
                .expect("table entries are validated at construction"),
        }
    }

    /// Serialization metadata describing the body.
    pub fn meta(&self) -> FunctionMeta {
        match &self.body {
            FunctionBody::Power(d) => FunctionMeta::Power { power: *d },
            FunctionBody::Table(t) => FunctionMeta::Table { table: t.len() },
        }
    }

    pub(crate) fn values(&self) -> &[u32] {
        match &self.body {
            FunctionBody::Table(t) => t,
            FunctionBody::Power(d) => self
                .cache
                .get_or_init(|| power_value_table(self.spec, *d)),
        }
    }
}

impl Clone for BoxedFunction {
    fn clone(&self) -> Self {
        BoxedFunction {
            spec: self.spec,
            body: match &self.body {
                FunctionBody::Power(d) => FunctionBody::Power(*d),
                FunctionBody::Table(t) => FunctionBody::Table(t.clone()),
            },
            cache: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for BoxedFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.body {
            FunctionBody::Power(d) => write!(f, "BoxedFunction(x^{d} over {})", self.spec),
            FunctionBody::Table(_) => write!(f, "BoxedFunction(table over {})", self.spec),
        }
    }
}

/// Compact description of a function body for JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FunctionMeta {
    Power { power: u64 },
    Table { table: usize },
}

fn validate_exponent(spec: FieldSpec, d: u64) -> Result<(), Error> {
    if d == 0 || d >= spec.order() {
        return Err(Error::ExponentOutOfRange {
            got: d,
            n: spec.degree(),
        });
    }
    Ok(())
}

pub(crate) fn power_value_table(spec: FieldSpec, d: u64) -> Vec<u32> {
    (0..spec.order())
        .map(|x| spec.pow_bits(x as u32, d))
        .collect()
}

/// One representative FBCT count for the ratio c: the number of y with
/// F(y) + F(y+c) + F(y+1) + F(y+c+1) = 0.
pub(crate) fn fbct_ratio_count(table: &[u32], c: usize) -> u64 {
    let mut count = 0u64;
    for y in 0..table.len() {
        if table[y] ^ table[y ^ c] ^ table[y ^ 1] ^ table[y ^ c ^ 1] == 0 {
            count += 1;
        }
    }
    count
}

fn check_entry_args(f: &BoxedFunction, a: FieldElement, b: FieldElement) {
    assert!(
        a.spec() == f.spec && b.spec() == f.spec,
        "entry request uses elements outside the function's field {}",
        f.spec
    );
}

/// DDT entry: #{x : F(x+a) + F(x) = b}.
pub fn ddt_entry(f: &BoxedFunction, a: FieldElement, b: FieldElement) -> u64 {
    check_entry_args(f, a, b);
    let t = f.values();
    let (a, b) = (a.bits() as usize, b.bits() as u32);
    (0..t.len()).filter(|&x| t[x ^ a] ^ t[x] == b).count() as u64
}

/// Differential uniformity: the maximum DDT entry over a != 0.
pub fn ddt_uniformity(f: &BoxedFunction) -> u64 {
    let t = f.values();
    let size = t.len();
    let mut row = vec![0u64; size];
    let mut best = 0u64;
    for a in 1..size {
        for x in 0..size {
            row[(t[x ^ a] ^ t[x]) as usize] += 1;
        }
        best = best.max(*row.iter().max().expect("row is non-empty"));
        row.fill(0);
    }
    best
}

/// Full DDT as a row-major matrix indexed by (a, b). Brute-force only.
pub fn ddt_table(f: &BoxedFunction) -> Result<Vec<Vec<u64>>, Error> {
    check_brute_cap(f.spec)?;
    let t = f.values();
    let size = t.len();
    let mut rows = vec![vec![0u64; size]; size];
    for (a, row) in rows.iter_mut().enumerate() {
        for x in 0..size {
            row[(t[x ^ a] ^ t[x]) as usize] += 1;
        }
    }
    Ok(rows)
}

/// BCT entry in the pair-counting formulation:
/// #{(x,y) : F(y) + F(x) = b and F(y+a) + F(x+a) = b}, ordered pairs.
pub fn bct_entry(f: &BoxedFunction, a: FieldElement, b: FieldElement) -> u64 {
    check_entry_args(f, a, b);
    let t = f.values();
    let (a, b) = (a.bits() as usize, b.bits() as u32);
    let mut count = 0u64;
    for x in 0..t.len() {
        for y in 0..t.len() {
            if t[y] ^ t[x] == b && t[y ^ a] ^ t[x ^ a] == b {
                count += 1;
            }
        }
    }
    count
}

/// Full BCT as a row-major matrix indexed by (a, b). Brute-force only.
pub fn bct_table(f: &BoxedFunction) -> Result<Vec<Vec<u64>>, Error> {
    check_brute_cap(f.spec)?;
    let t = f.values();
    let size = t.len();
    let mut rows = vec![vec![0u64; size]; size];
    for (a, row) in rows.iter_mut().enumerate() {
        for x in 0..size {
            for y in 0..size {
                let b = t[y] ^ t[x];
                if t[y ^ a] ^ t[x ^ a] == b {
                    row[b as usize] += 1;
                }
            }
        }
    }
    Ok(rows)
}

/// FBCT entry: #{x : F(x) + F(x+a) + F(x+b) + F(x+a+b) = 0}. Equals 2^n
/// whenever ab(a+b) = 0.
pub fn fbct_entry(f: &BoxedFunction, a: FieldElement, b: FieldElement) -> u64 {
    check_entry_args(f, a, b);
    let t = f.values();
    let (a, b) = (a.bits() as usize, b.bits() as usize);
    (0..t.len())
        .filter(|&x| t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b] == 0)
        .count() as u64
}

/// Full FBCT as a row-major matrix indexed by (a, b). Brute-force only.
pub fn fbct_table(f: &BoxedFunction) -> Result<Vec<Vec<u64>>, Error> {
    check_brute_cap(f.spec)?;
    let t = f.values();
    let size = t.len();
    let mut rows = vec![vec![0u64; size]; size];
    for (a, row) in rows.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = (0..size)
                .filter(|&x| t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b] == 0)
                .count() as u64;
        }
    }
    Ok(rows)
}

fn check_brute_cap(spec: FieldSpec) -> Result<(), Error> {
    if spec.degree() > BRUTE_FORCE_CAP {
        return Err(Error::Capacity {
            n: spec.degree(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    Ok(())
}

/// Multiset of table entries: value -> frequency. For full-table spectra the
/// frequencies sum to 2^(2n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: u32,
    counts: BTreeMap<u64, u64>,
}

impl Spectrum {
    pub(crate) fn from_counts(n: u32, counts: BTreeMap<u64, u64>) -> Self {
        Spectrum { n, counts }
    }

    /// Field degree the spectrum was computed over.
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Frequency of one entry value (0 if absent).
    pub fn frequency(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// (value, frequency) pairs in ascending value order.
    pub fn entries(&self) -> Vec<(u64, u64)> {
        self.counts.iter().map(|(&v, &f)| (v, f)).collect()
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Total frequency mass.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Exact FBCT spectrum over all 2^(2n) pairs by direct counting.
/// Refuses n > [`BRUTE_FORCE_CAP`]; the ratio-reduced
/// [`fbct_spectrum_power`] covers power functions beyond that.
pub fn fbct_spectrum_bruteforce(f: &BoxedFunction, threads: usize) -> Result<Spectrum, Error> {
    check_brute_cap(f.spec)?;
    let t = f.values();
    let size = t.len();
    let parts = run_chunks(size as u64, threads, |range| {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for a in range {
            let a = a as usize;
            for b in 0..size {
                let count = (0..size)
                    .filter(|&x| t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b] == 0)
                    .count() as u64;
                *hist.entry(count).or_insert(0) += 1;
            }
        }
        hist
    });
    Ok(Spectrum::from_counts(f.spec.degree(), merge_histograms(parts)))
}

/// FBCT spectrum of x^d via ratio reduction: one count per ratio
/// c in GF(2^n)\{0,1\}, each standing for the 2^n - 1 pairs (c*b, b) with
/// b != 0, plus the 3*2^n - 2 trivial pairs at value 2^n. Identical to
/// [`fbct_spectrum_bruteforce`] wherever both run.
pub fn fbct_spectrum_power(spec: FieldSpec, d: u64, threads: usize) -> Result<Spectrum, Error> {
    validate_exponent(spec, d)?;
    let table = power_value_table(spec, d);
    let order = spec.order();
    let parts = run_chunks(order - 2, threads, |range| {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for i in range {
            let c = (i + 2) as usize;
            *hist.entry(fbct_ratio_count(&table, c)).or_insert(0) += 1;
        }
        hist
    });
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for (value, ratios) in merge_histograms(parts) {
        *counts.entry(value).or_insert(0) += ratios * (order - 1);
    }
    *counts.entry(order).or_insert(0) += 3 * order - 2;
    Ok(Spectrum::from_counts(spec.degree(), counts))
}

/// Feistel boomerang uniformity: the maximum FBCT entry over pairs with
/// ab(a+b) != 0. Power functions use the ratio reduction and work for every
/// supported degree; lookup tables fall back to brute force under the cap.
pub fn fbct_uniformity(f: &BoxedFunction, threads: usize) -> Result<u64, Error> {
    match f.body {
        FunctionBody::Power(_) => {
            let table = f.values();
            let order = f.spec.order();
            let maxima = run_chunks(order - 2, threads, |range| {
                range
                    .map(|i| fbct_ratio_count(table, (i + 2) as usize))
                    .max()
                    .unwrap_or(0)
            });
            Ok(maxima.into_iter().max().unwrap_or(0))
        }
        FunctionBody::Table(_) => {
            check_brute_cap(f.spec)?;
            let t = f.values();
            let size = t.len();
            let maxima = run_chunks(size as u64 - 1, threads, |range| {
                let mut best = 0u64;
                for i in range {
                    let a = (i + 1) as usize;
                    for b in 1..size {
                        if b == a {
                            continue;
                        }
                        let count = (0..size)
                            .filter(|&x| t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b] == 0)
                            .count() as u64;
                        best = best.max(count);
                    }
                }
                best
            });
            Ok(maxima.into_iter().max().unwrap_or(0))
        }
    }
}

fn merge_histograms(parts: Vec<BTreeMap<u64, u64>>) -> BTreeMap<u64, u64> {
    let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
    for part in parts {
        for (value, freq) in part {
            *merged.entry(value).or_insert(0) += freq;
        }
    }
    merged
}

/// JSON document for a spectrum:
/// `{"n":…, "modulus":"0x…", "function":…, "spectrum":[[value,frequency],…]}`
/// with the spectrum sorted ascending by value.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumDocument {
    pub n: u32,
    pub modulus: String,
    pub function: FunctionMeta,
    pub spectrum: Vec<(u64, u64)>,
}

impl SpectrumDocument {
    pub fn new(spec: FieldSpec, function: FunctionMeta, spectrum: &Spectrum) -> Self {
        SpectrumDocument {
            n: spec.degree(),
            modulus: format_hex(spec.modulus()),
            function,
            spectrum: spectrum.entries(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum documents always serialize")
    }
}

/// CSV form of a spectrum: header `value,frequency`, rows ascending by value.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from("value,frequency\n");
    for (value, freq) in spectrum.entries() {
        out.push_str(&format!("{value},{freq}\n"));
    }
    out
}
