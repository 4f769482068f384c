//! The transformation `P -> 1 + M P` on odd polynomials, alternated with
//! stripping every factor `x` and `x + 1`.
//!
//! For a nonzero input `A` the odd terms are `A_1 = strip(A)`, then
//! `A_{2k+1} = strip(1 + M A_{2k-1})`, stopping at the first odd term equal to 1.
//! The length of `A` is the number of odd terms, terminal 1 included.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub const DEFAULT_MAX_STEPS: u64 = 1 << 20;
pub const DEFAULT_RETAIN_DEGREE: usize = 4096;

/// `input = x^a (x+1)^b odd_part`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripResult {
    pub a: usize,
    pub b: usize,
    pub odd_part: Poly,
}

pub fn strip(p: &Poly) -> Result<StripResult> {
    let a = p.val_x()?;
    let shifted = p.shr(a);
    // Dividing by (x+1)^b is dividing the bar image by x^b.
    let flipped = shifted.bar();
    let b = flipped.val_x()?;
    let odd_part = flipped.shr(b).bar();
    Ok(StripResult { a, b, odd_part })
}

/// One transformation from an odd polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub even: Poly,
    pub a: usize,
    pub b: usize,
    pub next_odd: Poly,
}

/// `1 + M P` as `P + xP + x^2 P + 1`.
fn one_plus_m_times(p: &Poly) -> Poly {
    let mut e = p.add(&p.shl(1)).add(&p.shl(2));
    e = e.add(&Poly::one());
    e
}

/// Applies `P -> 1 + M P` and strips the result.
///
/// Both linear factors always divide the even term and its degree is
/// `deg(P) + 2`; a failure of either is reported as a theorem violation.
pub fn step(p: &Poly) -> Result<Step> {
    if !p.is_odd()? {
        return Err(Error::NotOdd(p.hex()));
    }
    let even = one_plus_m_times(p);
    let StripResult { a, b, odd_part } = strip(&even)?;
    let violation = |detail: String| Error::TheoremViolation {
        input: p.hex(),
        detail,
    };
    if a == 0 || b == 0 {
        return Err(violation(format!("even term has valuations a={a}, b={b}")));
    }
    let (dp, de) = (p.degree()?, even.degree()?);
    if de != dp + 2 {
        return Err(violation(format!(
            "even degree {de} != odd degree {dp} + 2"
        )));
    }
    Ok(Step {
        even,
        a,
        b,
        next_odd: odd_part,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    pub max_steps: u64,
    /// Terms are stored only when `deg(input)` does not exceed this.
    pub retain_degree: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            max_steps: DEFAULT_MAX_STEPS,
            retain_degree: DEFAULT_RETAIN_DEGREE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    #[serde(with = "crate::serde_poly")]
    pub input: Poly,
    /// Valuations of the input itself; either may be zero.
    pub input_val: (usize, usize),
    /// `A_1, A_3, ..., 1`; empty when terms were not retained.
    #[serde(with = "crate::serde_poly::vec")]
    pub odd_terms: Vec<Poly>,
    /// `A_2, A_4, ...`; empty when terms were not retained.
    #[serde(with = "crate::serde_poly::vec")]
    pub even_terms: Vec<Poly>,
    pub val_pairs: Vec<(usize, usize)>,
    pub odd_degrees: Vec<usize>,
    pub even_degrees: Vec<usize>,
    pub length: usize,
    pub terms_retained: bool,
}

/// `max(1, 2^(deg - 1))` for `deg >= 2`, saturating; `None` below degree 2.
pub fn length_bound(degree: usize) -> Option<u64> {
    if degree < 2 {
        return None;
    }
    Some(if degree > 64 {
        u64::MAX
    } else {
        1u64 << (degree - 1)
    })
}

pub fn trace(a: &Poly) -> Result<TraceRecord> {
    trace_with(a, TraceOptions::default())
}

pub fn trace_with(a: &Poly, opts: TraceOptions) -> Result<TraceRecord> {
    let deg = a.degree()?;
    let first = strip(a)?;
    let retain = deg <= opts.retain_degree;
    let bound = length_bound(deg);

    let mut rec = TraceRecord {
        input: a.clone(),
        input_val: (first.a, first.b),
        odd_terms: Vec::new(),
        even_terms: Vec::new(),
        val_pairs: Vec::new(),
        odd_degrees: vec![first.odd_part.degree()?],
        even_degrees: Vec::new(),
        length: 1,
        terms_retained: retain,
    };
    let mut current = first.odd_part;
    let mut steps = 0u64;
    while !current.is_one() {
        if steps == opts.max_steps {
            return Err(Error::StepBudget {
                budget: opts.max_steps,
                input: a.hex(),
            });
        }
        let s = step(&current)?;
        steps += 1;
        rec.length += 1;
        if let Some(bound) = bound {
            if rec.length as u64 > bound {
                return Err(Error::TheoremViolation {
                    input: a.hex(),
                    detail: format!("length exceeds 2^(deg-1) = {bound}"),
                });
            }
        }
        rec.val_pairs.push((s.a, s.b));
        rec.even_degrees.push(s.even.degree()?);
        rec.odd_degrees.push(s.next_odd.degree()?);
        if retain {
            rec.odd_terms
                .push(std::mem::replace(&mut current, s.next_odd));
            rec.even_terms.push(s.even);
        } else {
            current = s.next_odd;
        }
    }
    if retain {
        rec.odd_terms.push(current);
    }
    Ok(rec)
}

pub fn length(a: &Poly) -> Result<usize> {
    length_with(a, TraceOptions::default().max_steps)
}

/// Length without storing any terms.
pub fn length_with(a: &Poly, max_steps: u64) -> Result<usize> {
    Ok(trace_with(
        a,
        TraceOptions {
            max_steps,
            retain_degree: 0,
        },
    )?
    .length)
}

pub fn degree_sequence(a: &Poly) -> Result<Vec<usize>> {
    Ok(trace_with(
        a,
        TraceOptions {
            retain_degree: 0,
            ..TraceOptions::default()
        },
    )?
    .odd_degrees)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Odd sequence does not end in 1.
    Termination,
    /// Record fields disagree in size.
    Shape,
    /// An even term is missing the factor `x` or `x + 1`.
    EvenTermRoot,
    /// `deg(even) = deg(odd) + 2` or `deg(next) = deg(even) - a - b` fails.
    DegreeRelation,
    /// `even != 1 + M odd`.
    Reconstruction,
    /// Next odd term is not the odd part of the even term, or is not odd.
    Strip,
    /// The last even term is not of the form `x^a (x+1)^b`.
    TerminalEvenShape,
    /// One step from 1 does not give `x^2 + x`.
    TerminalCycle,
    /// Length above `2^(deg(A) - 1)`.
    LengthBound,
    /// Step budget exhausted (scanner only).
    StepBudget,
    /// Engine raised a theorem violation (scanner only).
    EngineError,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit enum serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub index: Option<usize>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, index: Option<usize>, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            index,
            detail: detail.into(),
        }
    }
}

/// Audits a trace record against every structural property of the iteration.
///
/// Recomputes `1 + M P` through general multiplication, independently of the
/// shift-and-add used by [`step`].
pub fn check_trace(t: &TraceRecord) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    let steps = t.length.saturating_sub(1);

    if t.length == 0
        || t.odd_degrees.len() != t.length
        || t.even_degrees.len() != steps
        || t.val_pairs.len() != steps
        || (t.terms_retained && (t.odd_terms.len() != t.length || t.even_terms.len() != steps))
    {
        out.push(Violation::new(Shape, None, "inconsistent record sizes"));
        return out;
    }
    if t.odd_degrees.last() != Some(&0) {
        out.push(Violation::new(
            Termination,
            None,
            "last odd degree is not 0",
        ));
    }

    for k in 0..steps {
        let (a, b) = t.val_pairs[k];
        if a == 0 || b == 0 {
            out.push(Violation::new(
                EvenTermRoot,
                Some(k),
                format!("valuations a={a}, b={b}; both must be at least 1"),
            ));
        }
        let (dodd, deven, dnext) = (t.odd_degrees[k], t.even_degrees[k], t.odd_degrees[k + 1]);
        if deven != dodd + 2 || deven != dnext + a + b {
            out.push(Violation::new(
                DegreeRelation,
                Some(k),
                format!("odd {dodd}, even {deven}, next {dnext}, a={a}, b={b}"),
            ));
        }
    }

    if let Some(bound) = t.input.degree().ok().and_then(length_bound) {
        if t.length as u64 > bound {
            out.push(Violation::new(
                LengthBound,
                None,
                format!("length {} > {bound}", t.length),
            ));
        }
    }

    if t.terms_retained {
        check_terms(t, &mut out);
    }

    // One probe step from 1 must land on x^2 + x and return to 1.
    match step(&Poly::one()) {
        Ok(s) if s.even == Poly::one_plus_m() && s.next_odd.is_one() && s.a == 1 && s.b == 1 => {}
        _ => out.push(Violation::new(
            TerminalCycle,
            None,
            "1 does not map to x^2+x",
        )),
    }
    out
}

fn check_terms(t: &TraceRecord, out: &mut Vec<Violation>) {
    use ViolationKind::*;
    let m = Poly::m();
    match strip(&t.input) {
        Ok(s) if s.odd_part == t.odd_terms[0] && (s.a, s.b) == t.input_val => {}
        _ => out.push(Violation::new(
            Strip,
            Some(0),
            "first odd term is not the odd part of the input",
        )),
    }
    if !t.odd_terms.last().is_some_and(Poly::is_one) {
        out.push(Violation::new(Termination, None, "last odd term is not 1"));
    }
    for (k, odd) in t.odd_terms.iter().enumerate() {
        if !odd.is_odd().unwrap_or(false) {
            out.push(Violation::new(
                Strip,
                Some(k),
                "odd term has a linear factor",
            ));
        }
        if odd.degree().ok() != Some(t.odd_degrees[k]) {
            out.push(Violation::new(
                DegreeRelation,
                Some(k),
                "stored odd degree is stale",
            ));
        }
    }
    for (k, even) in t.even_terms.iter().enumerate() {
        if even.eval01(false) || even.eval01(true) {
            out.push(Violation::new(
                EvenTermRoot,
                Some(k),
                "even term does not vanish at both 0 and 1",
            ));
        }
        if m.mul(&t.odd_terms[k]).add(&Poly::one()) != *even {
            out.push(Violation::new(
                Reconstruction,
                Some(k),
                "even term != 1 + M * odd term",
            ));
        }
        match strip(even) {
            Ok(s) => {
                if s.odd_part != t.odd_terms[k + 1] || (s.a, s.b) != t.val_pairs[k] {
                    out.push(Violation::new(
                        Strip,
                        Some(k),
                        "next odd term or valuations disagree with the even term",
                    ));
                }
            }
            Err(e) => out.push(Violation::new(Strip, Some(k), e.to_string())),
        }
        if even.degree().ok() != Some(t.even_degrees[k]) {
            out.push(Violation::new(
                DegreeRelation,
                Some(k),
                "stored even degree is stale",
            ));
        }
    }
    if let Some(last) = t.even_terms.last() {
        let (a, b) = *t.val_pairs.last().unwrap();
        let pure = Poly::monomial(a).mul(&Poly::x_plus_one().pow(b as u64).unwrap());
        if *last != pure {
            out.push(Violation::new(
                TerminalEvenShape,
                Some(t.even_terms.len() - 1),
                "last even term is not x^a (x+1)^b",
            ));
        }
    }
}
