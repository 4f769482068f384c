//! Exhaustive enumeration by degree.
//!
//! The polynomials of degree `d` are exactly the coefficient integers in
//! `[2^d, 2^(d+1))`. A scan cuts every such range into fixed-size blocks,
//! traces and audits each block independently, and merges the partial
//! reports in block order, so the result does not depend on the worker count.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::collatz::{self, check_trace, TraceOptions, ViolationKind};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::Poly;

pub const DEFAULT_SAFETY_LIMIT: u32 = 22;
const BLOCK: u64 = 1 << 12;
/// Violations kept verbatim in a report; the count covers all of them.
const MAX_STORED_VIOLATIONS: usize = 1000;
const MAX_STORED_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyClass {
    All,
    Odd,
    Even,
    /// `S(0) = 0`
    P00,
    /// `S(0) = 1`
    P01,
    /// `S(1) = 0`
    P10,
    /// `S(1) = 1`
    P11,
}

impl PolyClass {
    pub fn contains_bits(self, bits: u64) -> bool {
        let at0 = bits & 1 == 1;
        let at1 = bits.count_ones() % 2 == 1;
        match self {
            PolyClass::All => true,
            PolyClass::Odd => at0 && at1,
            PolyClass::Even => !(at0 && at1),
            PolyClass::P00 => !at0,
            PolyClass::P01 => at0,
            PolyClass::P10 => !at1,
            PolyClass::P11 => at1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolyClass::All => "all",
            PolyClass::Odd => "odd",
            PolyClass::Even => "even",
            PolyClass::P00 => "p00",
            PolyClass::P01 => "p01",
            PolyClass::P10 => "p10",
            PolyClass::P11 => "p11",
        }
    }
}

impl fmt::Display for PolyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolyClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "all" => PolyClass::All,
            "odd" => PolyClass::Odd,
            "even" => PolyClass::Even,
            "p00" => PolyClass::P00,
            "p01" => PolyClass::P01,
            "p10" => PolyClass::P10,
            "p11" => PolyClass::P11,
            _ => return Err(Error::Domain(format!("unknown class {s:?}"))),
        })
    }
}

/// Number of degree-`d` polynomials in a class, in closed form.
pub fn count_class(d: u32, class: PolyClass) -> Result<u64> {
    if d > 62 {
        return Err(Error::Domain(format!(
            "degree {d} too large to count in 64 bits"
        )));
    }
    let need = match class {
        PolyClass::All => 0,
        PolyClass::Odd | PolyClass::Even => 2,
        _ => 1,
    };
    if d < need {
        return Err(Error::Domain(format!(
            "count for class {class} needs degree >= {need}, got {d}"
        )));
    }
    Ok(match class {
        PolyClass::All => 1 << d,
        PolyClass::Odd => 1 << (d - 2),
        PolyClass::Even => (1 << d) - (1 << (d - 2)),
        _ => 1 << (d - 1),
    })
}

/// Degree-`d` members of a class in ascending coefficient order.
pub fn enumerate(d: u32, class: PolyClass) -> Result<impl Iterator<Item = Poly>> {
    if d > 62 {
        return Err(Error::Domain(format!("degree {d} too large to enumerate")));
    }
    let lo = 1u64 << d;
    Ok((lo..lo << 1)
        .filter(move |&b| class.contains_bits(b))
        .map(Poly::from_u64))
}

/// Exact nonnegative rational, compared by cross-multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    fn cmp_value(&self, other: &Ratio) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanViolation {
    #[serde(with = "crate::serde_poly")]
    pub poly: Poly,
    pub kind: ViolationKind,
    pub index: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub count: u64,
    /// Closed-form class size for this degree, when defined.
    pub expected_count: Option<u64>,
    pub max_length: u64,
    /// Smallest polynomial (by coefficient integer) reaching `max_length`.
    #[serde(with = "crate::serde_poly")]
    pub max_witness: Poly,
    pub max_witness_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub degree_range: (u32, u32),
    pub class: PolyClass,
    pub total: u64,
    pub per_degree: Vec<DegreeRow>,
    pub length_histogram: BTreeMap<u64, u64>,
    pub max_length: u64,
    /// First few polynomials reaching `max_length`, ascending.
    #[serde(with = "crate::serde_poly::vec")]
    pub max_length_witnesses: Vec<Poly>,
    pub max_length_witness_count: u64,
    /// Largest `length / degree` seen.
    pub max_ratio: Ratio,
    #[serde(with = "crate::serde_poly")]
    pub max_ratio_witness: Poly,
    pub violation_count: u64,
    pub violations: Vec<ScanViolation>,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }

    /// Per-degree table, a blank line, then the length histogram.
    pub fn to_csv(&self) -> Result<String> {
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "degree",
            "count",
            "expected_count",
            "max_length",
            "max_witness",
            "max_witness_count",
        ])
        .map_err(csv_err)?;
        for r in &self.per_degree {
            w.write_record([
                r.degree.to_string(),
                r.count.to_string(),
                r.expected_count.map(|c| c.to_string()).unwrap_or_default(),
                r.max_length.to_string(),
                r.max_witness.hex(),
                r.max_witness_count.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
            .expect("csv output is utf-8");
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["length", "count"]).map_err(csv_err)?;
        for (len, count) in &self.length_histogram {
            w.write_record([len.to_string(), count.to_string()])
                .map_err(csv_err)?;
        }
        out.push_str(
            &String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
                .expect("csv output is utf-8"),
        );
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub d_min: u32,
    pub d_max: u32,
    pub class: PolyClass,
    pub workers: usize,
    pub max_steps: u64,
    pub safety_limit: u32,
}

impl ScanConfig {
    pub fn new(d_min: u32, d_max: u32, class: PolyClass, workers: usize) -> Self {
        ScanConfig {
            d_min,
            d_max,
            class,
            workers,
            max_steps: collatz::DEFAULT_MAX_STEPS,
            safety_limit: DEFAULT_SAFETY_LIMIT,
        }
    }
}

/// Running statistics for one degree, and for a whole block range.
#[derive(Debug, Clone, Default)]
struct Partial {
    count: u64,
    histogram: BTreeMap<u64, u64>,
    max_length: u64,
    witnesses: Vec<Poly>,
    witness_count: u64,
    max_ratio: Option<(Ratio, Poly)>,
    violation_count: u64,
    violations: Vec<ScanViolation>,
}

impl Partial {
    fn record(&mut self, p: &Poly, degree: u64, length: u64) {
        self.count += 1;
        *self.histogram.entry(length).or_default() += 1;
        match length.cmp(&self.max_length) {
            Ordering::Greater => {
                self.max_length = length;
                self.witnesses.clear();
                self.witnesses.push(p.clone());
                self.witness_count = 1;
            }
            Ordering::Equal => {
                if self.witnesses.len() < MAX_STORED_WITNESSES {
                    self.witnesses.push(p.clone());
                }
                self.witness_count += 1;
            }
            Ordering::Less => {}
        }
        if degree > 0 {
            let r = Ratio {
                num: length,
                den: degree,
            };
            if self
                .max_ratio
                .as_ref()
                .is_none_or(|(m, _)| r.cmp_value(m) == Ordering::Greater)
            {
                self.max_ratio = Some((r, p.clone()));
            }
        }
    }

    fn violate(&mut self, v: ScanViolation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    /// Appends `later`, which covers strictly larger polynomials.
    fn merge(&mut self, later: Partial) {
        self.count += later.count;
        for (k, v) in later.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        match later.max_length.cmp(&self.max_length) {
            Ordering::Greater => {
                self.max_length = later.max_length;
                self.witnesses = later.witnesses;
                self.witness_count = later.witness_count;
            }
            Ordering::Equal if later.witness_count > 0 => {
                let room = MAX_STORED_WITNESSES - self.witnesses.len();
                self.witnesses
                    .extend(later.witnesses.into_iter().take(room));
                self.witness_count += later.witness_count;
            }
            _ => {}
        }
        if let Some((r, w)) = later.max_ratio {
            if self
                .max_ratio
                .as_ref()
                .is_none_or(|(m, _)| r.cmp_value(m) == Ordering::Greater)
            {
                self.max_ratio = Some((r, w));
            }
        }
        self.violation_count += later.violation_count;
        let room = MAX_STORED_VIOLATIONS - self.violations.len();
        self.violations
            .extend(later.violations.into_iter().take(room));
    }
}

fn scan_block(degree: u32, lo: u64, hi: u64, class: PolyClass, max_steps: u64) -> Partial {
    let mut part = Partial::default();
    let opts = TraceOptions {
        max_steps,
        ..TraceOptions::default()
    };
    for bits in lo..hi {
        if !class.contains_bits(bits) {
            continue;
        }
        let p = Poly::from_u64(bits);
        match collatz::trace_with(&p, opts) {
            Ok(t) => {
                for v in check_trace(&t) {
                    part.violate(ScanViolation {
                        poly: p.clone(),
                        kind: v.kind,
                        index: v.index,
                        detail: v.detail,
                    });
                }
                part.record(&p, degree as u64, t.length as u64);
            }
            Err(e) => {
                let kind = match e {
                    Error::StepBudget { .. } => ViolationKind::StepBudget,
                    _ => ViolationKind::EngineError,
                };
                part.count += 1;
                part.violate(ScanViolation {
                    poly: p,
                    kind,
                    index: None,
                    detail: e.to_string(),
                });
            }
        }
    }
    part
}

pub fn scan(d_min: u32, d_max: u32, class: PolyClass, workers: usize) -> Result<ScanReport> {
    scan_with(ScanConfig::new(d_min, d_max, class, workers))
}

pub fn scan_with(cfg: ScanConfig) -> Result<ScanReport> {
    if cfg.d_min < 1 || cfg.d_min > cfg.d_max {
        return Err(Error::Domain(format!(
            "need 1 <= d_min <= d_max, got {}..{}",
            cfg.d_min, cfg.d_max
        )));
    }
    if cfg.d_max > cfg.safety_limit || cfg.d_max > 62 {
        return Err(Error::Domain(format!(
            "d_max {} exceeds the safety limit {}",
            cfg.d_max, cfg.safety_limit
        )));
    }
    if !matches!(cfg.class, PolyClass::All | PolyClass::Odd | PolyClass::Even) {
        return Err(Error::Domain(format!(
            "scan class must be all, odd or even, got {}",
            cfg.class
        )));
    }

    let mut blocks = Vec::new();
    for d in cfg.d_min..=cfg.d_max {
        let (lo, hi) = (1u64 << d, 1u64 << (d + 1));
        let mut start = lo;
        while start < hi {
            let end = (start + BLOCK).min(hi);
            blocks.push((d, start, end));
            start = end;
        }
    }
    let parts = par::ordered_map(blocks, cfg.workers.max(1), |(d, lo, hi)| {
        (d, scan_block(d, lo, hi, cfg.class, cfg.max_steps))
    });

    let mut per_degree: BTreeMap<u32, Partial> = BTreeMap::new();
    for (d, part) in parts {
        per_degree.entry(d).or_default().merge(part);
    }
    let mut total = Partial::default();
    let mut rows = Vec::new();
    for (d, part) in per_degree {
        rows.push(DegreeRow {
            degree: d,
            count: part.count,
            expected_count: count_class(d, cfg.class).ok(),
            max_length: part.max_length,
            max_witness: part.witnesses.first().cloned().unwrap_or_default(),
            max_witness_count: part.witness_count,
        });
        total.merge(part);
    }
    let (max_ratio, max_ratio_witness) = total
        .max_ratio
        .unwrap_or((Ratio { num: 0, den: 1 }, Poly::zero()));
    Ok(ScanReport {
        degree_range: (cfg.d_min, cfg.d_max),
        class: cfg.class,
        total: total.count,
        per_degree: rows,
        length_histogram: total.histogram,
        max_length: total.max_length,
        max_length_witnesses: total.witnesses,
        max_length_witness_count: total.witness_count,
        max_ratio,
        max_ratio_witness,
        violation_count: total.violation_count,
        violations: total.violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarSample {
    #[serde(with = "crate::serde_poly")]
    pub poly: Poly,
    pub length: u64,
    pub bar_length: u64,
    /// Every odd and even term of the image trace is the image of the original term.
    pub equivariant: bool,
    /// Length of the reciprocal, when the constant term is 1.
    pub reciprocal_length: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarReport {
    pub d_max: u32,
    pub seed: u64,
    pub samples: Vec<BarSample>,
    pub passed: u64,
    pub failed: u64,
}

fn bar_sample(p: &Poly, max_steps: u64) -> Result<BarSample> {
    let opts = TraceOptions {
        max_steps,
        ..TraceOptions::default()
    };
    let t = collatz::trace_with(p, opts)?;
    let tb = collatz::trace_with(&p.bar(), opts)?;
    let same_odd = t.odd_terms.len() == tb.odd_terms.len()
        && t.odd_terms
            .iter()
            .zip(&tb.odd_terms)
            .all(|(a, b)| a.bar() == *b);
    let same_even = t.even_terms.len() == tb.even_terms.len()
        && t.even_terms
            .iter()
            .zip(&tb.even_terms)
            .all(|(a, b)| a.bar() == *b);
    let reciprocal_length = if p.eval01(false) {
        Some(collatz::length_with(&p.reciprocal()?, max_steps)? as u64)
    } else {
        None
    };
    Ok(BarSample {
        poly: p.clone(),
        length: t.length as u64,
        bar_length: tb.length as u64,
        equivariant: same_odd && same_even && t.length == tb.length,
        reciprocal_length,
    })
}

/// Compares the trace of `x -> x+1` images with the image of the trace.
///
/// `forced` polynomials are checked first; the remaining
/// `sample_size - forced.len()` samples are uniform nonzero polynomials of
/// degree at most `d_max`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn bar_sample_check(
    d_max: u32,
    sample_size: usize,
    seed: u64,
    forced: &[Poly],
    workers: usize,
) -> Result<BarReport> {
    if sample_size == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    if d_max > 63 {
        return Err(Error::Domain(format!("d_max {d_max} must be at most 63")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys: Vec<Poly> = forced.iter().filter(|p| !p.is_zero()).cloned().collect();
    let upper = if d_max == 63 {
        u64::MAX
    } else {
        (1u64 << (d_max + 1)) - 1
    };
    while polys.len() < sample_size {
        polys.push(Poly::from_u64(rng.random_range(1..=upper)));
    }
    let results = par::ordered_map(polys, workers.max(1), |p| {
        bar_sample(&p, collatz::DEFAULT_MAX_STEPS)
    });
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = samples.iter().filter(|s| s.equivariant).count() as u64;
    Ok(BarReport {
        d_max,
        seed,
        failed: samples.len() as u64 - passed,
        passed,
        samples,
    })
}
