//! Parametric families with closed-form lengths.
//!
//! Every family is a polynomial expression in `M = x^2 + x + 1`. Writing
//! `G(n) = M^n + ... + M + 1` for the geometric sum:
//!
//! | id                     | polynomial                  | length                           |
//! |------------------------|-----------------------------|----------------------------------|
//! | `GEOM_POW2`            | `G(2^r)`                    | `2^r`                            |
//! | `GEOM_POW2_POW`        | `G(2^r)^(2^u)`              | `2^u (2^r - 1) + 1`              |
//! | `GEOM_DEFICIT_POW`     | `G(2^r - 2v)^(2^u)`         | `2^u (2v - 1) + 1`, least `r` with `2^(r-1) < 2^r - 2v` |
//! | `GEOM_EVEN_POW`        | `G(2v)^(2^u)`               | `2^u (2^r - 2v - 1) + 1`, least `r` with `2v < 2^r` |
//! | `GEOM_GENERAL`         | `G(2^r - j)`                | `j`                              |
//! | `MN_PLUS1`             | `M^(2^r - j) + 1`           | `j + 1`                          |
//! | `MN`                   | `M^(2^r - j)`               | `j + 1`, or `2^r + 1` when `j = 0` |
//! | `ONE_PLUS_M_POW_PLUS1` | `(1 + M)^(2^r - j) + 1`     | `2^r + 1`                        |
//! | `MIXED_PRODUCT`        | `1 + M^a (1 + M)^b`         | depends on `a + b`, see [`predicted_length`] |
//! | `M2M1_POW`             | `(M^2 + M + 1)^n`           | `n + 1` (conjectured)            |
//! | `TRINOMIAL`            | `x^n + x + 1`               | `2^s + 1` (conjectured)          |

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collatz::{self, TraceOptions};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::Poly;

/// Family polynomials above this degree are refused.
pub const MAX_FAMILY_DEGREE: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyId {
    GeomPow2,
    GeomPow2Pow,
    GeomDeficitPow,
    GeomEvenPow,
    GeomGeneral,
    MnPlus1,
    Mn,
    OnePlusMPowPlus1,
    MixedProduct,
    M2m1Pow,
    Trinomial,
}

impl FamilyId {
    pub const ALL: [FamilyId; 11] = [
        FamilyId::GeomPow2,
        FamilyId::GeomPow2Pow,
        FamilyId::GeomDeficitPow,
        FamilyId::GeomEvenPow,
        FamilyId::GeomGeneral,
        FamilyId::MnPlus1,
        FamilyId::Mn,
        FamilyId::OnePlusMPowPlus1,
        FamilyId::MixedProduct,
        FamilyId::M2m1Pow,
        FamilyId::Trinomial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::GeomPow2 => "GEOM_POW2",
            FamilyId::GeomPow2Pow => "GEOM_POW2_POW",
            FamilyId::GeomDeficitPow => "GEOM_DEFICIT_POW",
            FamilyId::GeomEvenPow => "GEOM_EVEN_POW",
            FamilyId::GeomGeneral => "GEOM_GENERAL",
            FamilyId::MnPlus1 => "MN_PLUS1",
            FamilyId::Mn => "MN",
            FamilyId::OnePlusMPowPlus1 => "ONE_PLUS_M_POW_PLUS1",
            FamilyId::MixedProduct => "MIXED_PRODUCT",
            FamilyId::M2m1Pow => "M2M1_POW",
            FamilyId::Trinomial => "TRINOMIAL",
        }
    }

    /// Accepted parameter sets, canonical one first.
    pub fn param_sets(self) -> &'static [&'static [&'static str]] {
        match self {
            FamilyId::GeomPow2 => &[&["r"]],
            FamilyId::GeomPow2Pow => &[&["r", "u"]],
            FamilyId::GeomDeficitPow => &[&["r", "v", "u"]],
            FamilyId::GeomEvenPow => &[&["v", "u"]],
            FamilyId::GeomGeneral
            | FamilyId::MnPlus1
            | FamilyId::Mn
            | FamilyId::OnePlusMPowPlus1 => &[&["r", "j"], &["n"]],
            FamilyId::MixedProduct => &[&["a", "b"]],
            FamilyId::M2m1Pow | FamilyId::Trinomial => &[&["n"]],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == up)
            .ok_or_else(|| Error::Domain(format!("unknown family {s:?}")))
    }
}

pub type Params = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub params: Params,
}

impl FamilySpec {
    pub fn new(family: FamilyId, params: &[(&str, u64)]) -> Self {
        FamilySpec {
            family,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proven,
    Conjectured,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proven => "proven",
            Status::Conjectured => "conjectured",
        })
    }
}

/// A family member in canonical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Member {
    GeomPow2 { r: u32 },
    GeomPow2Pow { r: u32, u: u32 },
    GeomDeficitPow { r: u32, v: u64, u: u32 },
    GeomEvenPow { v: u64, u: u32 },
    GeomGeneral { r: u32, j: u64 },
    MnPlus1 { r: u32, j: u64 },
    Mn { r: u32, j: u64 },
    OnePlusMPowPlus1 { r: u32, j: u64 },
    MixedProduct { a: u64, b: u64 },
    M2m1Pow { n: u64 },
    Trinomial { n: u64 },
}

impl Member {
    pub fn family(&self) -> FamilyId {
        match self {
            Member::GeomPow2 { .. } => FamilyId::GeomPow2,
            Member::GeomPow2Pow { .. } => FamilyId::GeomPow2Pow,
            Member::GeomDeficitPow { .. } => FamilyId::GeomDeficitPow,
            Member::GeomEvenPow { .. } => FamilyId::GeomEvenPow,
            Member::GeomGeneral { .. } => FamilyId::GeomGeneral,
            Member::MnPlus1 { .. } => FamilyId::MnPlus1,
            Member::Mn { .. } => FamilyId::Mn,
            Member::OnePlusMPowPlus1 { .. } => FamilyId::OnePlusMPowPlus1,
            Member::MixedProduct { .. } => FamilyId::MixedProduct,
            Member::M2m1Pow { .. } => FamilyId::M2m1Pow,
            Member::Trinomial { .. } => FamilyId::Trinomial,
        }
    }

    /// Canonical parameters as a spec.
    pub fn spec(&self) -> FamilySpec {
        let f = self.family();
        match *self {
            Member::GeomPow2 { r } => FamilySpec::new(f, &[("r", r.into())]),
            Member::GeomPow2Pow { r, u } => FamilySpec::new(f, &[("r", r.into()), ("u", u.into())]),
            Member::GeomDeficitPow { r, v, u } => {
                FamilySpec::new(f, &[("r", r.into()), ("v", v), ("u", u.into())])
            }
            Member::GeomEvenPow { v, u } => FamilySpec::new(f, &[("v", v), ("u", u.into())]),
            Member::GeomGeneral { r, j }
            | Member::MnPlus1 { r, j }
            | Member::Mn { r, j }
            | Member::OnePlusMPowPlus1 { r, j } => FamilySpec::new(f, &[("r", r.into()), ("j", j)]),
            Member::MixedProduct { a, b } => FamilySpec::new(f, &[("a", a), ("b", b)]),
            Member::M2m1Pow { n } | Member::Trinomial { n } => FamilySpec::new(f, &[("n", n)]),
        }
    }

    /// Degree of the family polynomial, computed without building it.
    pub fn degree(&self) -> u128 {
        let p2 = |e: u32| 1u128 << e;
        match *self {
            Member::GeomPow2 { r } => 2 * p2(r),
            Member::GeomPow2Pow { r, u } => 2 * p2(r) * p2(u),
            Member::GeomDeficitPow { r, v, u } => 2 * (p2(r) - 2 * v as u128) * p2(u),
            Member::GeomEvenPow { v, u } => 4 * v as u128 * p2(u),
            Member::GeomGeneral { r, j }
            | Member::MnPlus1 { r, j }
            | Member::Mn { r, j }
            | Member::OnePlusMPowPlus1 { r, j } => 2 * (p2(r) - j as u128),
            Member::MixedProduct { a, b } => 2 * (a as u128 + b as u128),
            Member::M2m1Pow { n } => 4 * n as u128,
            Member::Trinomial { n } => n as u128,
        }
    }
}

/// A normalized spec: the member actually built, plus a note when the input
/// parameters were rewritten into a covering family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub member: Member,
    pub note: Option<String>,
}

/// `n = 2^t s` with `s` odd.
pub fn two_adic(n: u64) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::Domain("two_adic: n must be positive".into()));
    }
    let t = n.trailing_zeros();
    Ok((t, n >> t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cover {
    /// Unique `r >= 1` with `2^(r-1) < n <= 2^r`; needs `n >= 2`.
    Inclusive,
    /// Least `r >= 1` with `n < 2^r`.
    Strict,
}

pub fn cover_exponent(n: u64, mode: Cover) -> Result<u32> {
    match mode {
        Cover::Inclusive => {
            if n < 2 {
                return Err(Error::Domain(format!(
                    "inclusive cover exponent needs n >= 2, got {n}"
                )));
            }
            Ok(64 - (n - 1).leading_zeros())
        }
        Cover::Strict => Ok((64 - n.leading_zeros()).max(1)),
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn small_exp(name: &str, v: u64) -> Result<u32> {
    if v > 40 {
        return Err(domain(format!("{name}={v} is too large")));
    }
    Ok(v as u32)
}

fn pow2_u64(e: u32) -> u64 {
    1u64 << e
}

/// `(r, j)` with `n = 2^r - j`, from either parameterization.
fn r_j(params: &Params, has_n: bool) -> Result<(u32, u64)> {
    if has_n {
        let n = params["n"];
        let r = cover_exponent(n, Cover::Inclusive)?;
        Ok((r, pow2_u64(r) - n))
    } else {
        let r = small_exp("r", params["r"])?;
        Ok((r, params["j"]))
    }
}

fn check_j(r: u32, j: u64, lo: u64) -> Result<()> {
    if r == 0 {
        return Err(domain("r must be at least 1"));
    }
    let hi = pow2_u64(r - 1) - 1;
    if j < lo || j > hi {
        return Err(domain(format!(
            "need {lo} <= j <= 2^(r-1)-1 = {hi}, got j={j}"
        )));
    }
    Ok(())
}

/// Validates the parameters and rewrites them into canonical form.
///
/// Excluded boundary points are delegated to the family that covers them:
/// `GEOM_DEFICIT_POW` is rewritten with the least `r` such that
/// `2^(r-1) < 2^r - 2v` (the length formula holds only for that `r`), or
/// becomes `GEOM_POW2_POW` when `2^r - 2v` is a power of two; `GEOM_GENERAL` with `j = 0` becomes `GEOM_POW2`, and
/// `ONE_PLUS_M_POW_PLUS1` at a power of two becomes `MN` (since `(1+M)^(2^r) + 1 = M^(2^r)`).
pub fn normalize(spec: &FamilySpec) -> Result<Normalized> {
    let fam = spec.family;
    let keys: Vec<&str> = spec.params.keys().map(String::as_str).collect();
    let set = fam
        .param_sets()
        .iter()
        .find(|s| {
            let mut want: Vec<&str> = s.to_vec();
            want.sort_unstable();
            want == keys
        })
        .ok_or_else(|| {
            let sets: Vec<String> = fam.param_sets().iter().map(|s| s.join(",")).collect();
            domain(format!(
                "{fam} takes parameters {{{}}}, got {{{}}}",
                sets.join("} or {"),
                keys.join(",")
            ))
        })?;
    let has_n = set == &["n"];
    let p = &spec.params;
    let plain = |member: Member| Normalized { member, note: None };

    let out = match fam {
        FamilyId::GeomPow2 => {
            let r = small_exp("r", p["r"])?;
            if r < 1 {
                return Err(domain("GEOM_POW2 needs r >= 1"));
            }
            plain(Member::GeomPow2 { r })
        }
        FamilyId::GeomPow2Pow => {
            let (r, u) = (small_exp("r", p["r"])?, small_exp("u", p["u"])?);
            if r < 1 || u < 1 {
                return Err(domain("GEOM_POW2_POW needs r >= 1 and u >= 1"));
            }
            plain(Member::GeomPow2Pow { r, u })
        }
        FamilyId::GeomDeficitPow => {
            let (r, v, u) = (small_exp("r", p["r"])?, p["v"], small_exp("u", p["u"])?);
            if r < 2 || u < 1 || v < 1 {
                return Err(domain("GEOM_DEFICIT_POW needs r >= 2, u >= 1, v >= 1"));
            }
            if v.checked_mul(2).is_none_or(|tv| tv >= pow2_u64(r)) {
                return Err(domain(format!(
                    "GEOM_DEFICIT_POW needs 2v < 2^r, got v={v}, r={r}"
                )));
            }
            let top = pow2_u64(r) - 2 * v;
            if r == 2 || 2 * v < pow2_u64(r - 1) {
                plain(Member::GeomDeficitPow { r, v, u })
            } else if top.is_power_of_two() {
                let r2 = top.trailing_zeros();
                Normalized {
                    member: Member::GeomPow2Pow { r: r2, u },
                    note: Some(format!(
                        "2^r-2v = {top} is a power of two; delegated to GEOM_POW2_POW(r={r2}, u={u})"
                    )),
                }
            } else {
                // Same polynomial, written with the least r such that 2^(r-1) < 2^r - 2v.
                let r2 = cover_exponent(top, Cover::Inclusive)?;
                let v2 = (pow2_u64(r2) - top) / 2;
                Normalized {
                    member: Member::GeomDeficitPow { r: r2, v: v2, u },
                    note: Some(format!(
                        "2^r-2v = {top} rewritten with least r; GEOM_DEFICIT_POW(r={r2}, v={v2}, u={u})"
                    )),
                }
            }
        }
        FamilyId::GeomEvenPow => {
            let (v, u) = (p["v"], small_exp("u", p["u"])?);
            if v < 1 || u < 1 {
                return Err(domain("GEOM_EVEN_POW needs v >= 1 and u >= 1"));
            }
            if v > 1 << 40 {
                return Err(domain(format!("v={v} is too large")));
            }
            plain(Member::GeomEvenPow { v, u })
        }
        FamilyId::GeomGeneral => {
            let (r, j) = r_j(p, has_n)?;
            if r < 2 {
                return Err(domain("GEOM_GENERAL needs r >= 2"));
            }
            check_j(r, j, 0)?;
            if j == 0 {
                Normalized {
                    member: Member::GeomPow2 { r },
                    note: Some(format!(
                        "2^r-j = 2^{r} is a power of two; delegated to GEOM_POW2(r={r})"
                    )),
                }
            } else {
                plain(Member::GeomGeneral { r, j })
            }
        }
        FamilyId::MnPlus1 | FamilyId::Mn => {
            let (r, j) = r_j(p, has_n)?;
            check_j(r, j, 0)?;
            plain(if fam == FamilyId::Mn {
                Member::Mn { r, j }
            } else {
                Member::MnPlus1 { r, j }
            })
        }
        FamilyId::OnePlusMPowPlus1 => {
            let (r, j) = r_j(p, has_n)?;
            if r >= 1 && j == 0 {
                Normalized {
                    member: Member::Mn { r, j: 0 },
                    note: Some(format!(
                        "(1+M)^(2^{r})+1 = M^(2^{r}); delegated to MN(r={r}, j=0)"
                    )),
                }
            } else {
                if r < 2 {
                    return Err(domain("ONE_PLUS_M_POW_PLUS1 needs r >= 2"));
                }
                check_j(r, j, 1)?;
                plain(Member::OnePlusMPowPlus1 { r, j })
            }
        }
        FamilyId::MixedProduct => {
            let (a, b) = (p["a"], p["b"]);
            if a < 2 || b < 2 {
                return Err(domain("MIXED_PRODUCT needs a >= 2 and b >= 2"));
            }
            if a > 1 << 40 || b > 1 << 40 {
                return Err(domain("MIXED_PRODUCT exponent too large"));
            }
            plain(Member::MixedProduct { a, b })
        }
        FamilyId::M2m1Pow => {
            let n = p["n"];
            if n < 1 {
                return Err(domain("M2M1_POW needs n >= 1"));
            }
            plain(Member::M2m1Pow { n })
        }
        FamilyId::Trinomial => {
            let n = p["n"];
            if n < 3 {
                return Err(domain("TRINOMIAL needs n >= 3"));
            }
            plain(Member::Trinomial { n })
        }
    };
    let deg = out.member.degree();
    if deg > MAX_FAMILY_DEGREE {
        return Err(domain(format!(
            "family polynomial degree {deg} exceeds the limit {MAX_FAMILY_DEGREE}"
        )));
    }
    Ok(out)
}

/// `M^n + ... + M + 1` by Horner accumulation.
pub fn geometric_sum(n: u64) -> Poly {
    let one = Poly::one();
    let mut s = one.clone();
    for _ in 0..n {
        // s * M + 1
        s = s.add(&s.shl(1)).add(&s.shl(2)).add(&one);
    }
    s
}

fn m_pow(e: u64) -> Poly {
    Poly::m().pow(e).expect("M is nonzero")
}

fn one_plus_m_pow(e: u64) -> Poly {
    Poly::one_plus_m().pow(e).expect("1+M is nonzero")
}

/// `1 + M^a (1 + M)^b`.
fn one_plus_mixed(a: u64, b: u64) -> Poly {
    m_pow(a).mul(&one_plus_m_pow(b)).add(&Poly::one())
}

pub fn build_member(member: &Member) -> Poly {
    let one = Poly::one();
    match *member {
        Member::GeomPow2 { r } => geometric_sum(pow2_u64(r)),
        Member::GeomPow2Pow { r, u } => geometric_sum(pow2_u64(r)).pow2k(u),
        Member::GeomDeficitPow { r, v, u } => geometric_sum(pow2_u64(r) - 2 * v).pow2k(u),
        Member::GeomEvenPow { v, u } => geometric_sum(2 * v).pow2k(u),
        Member::GeomGeneral { r, j } => geometric_sum(pow2_u64(r) - j),
        Member::MnPlus1 { r, j } => m_pow(pow2_u64(r) - j).add(&one),
        Member::Mn { r, j } => m_pow(pow2_u64(r) - j),
        Member::OnePlusMPowPlus1 { r, j } => one_plus_m_pow(pow2_u64(r) - j).add(&one),
        Member::MixedProduct { a, b } => one_plus_mixed(a, b),
        Member::M2m1Pow { n } => geometric_sum(2).pow(n).expect("nonzero base"),
        Member::Trinomial { n } => Poly::from_exponents([n as usize, 1, 0]),
    }
}

pub fn build(spec: &FamilySpec) -> Result<Poly> {
    Ok(build_member(&normalize(spec)?.member))
}

/// Closed-form length and whether it is a theorem.
pub fn predict_member(member: &Member) -> (u64, Status) {
    use Status::*;
    let p2 = pow2_u64;
    match *member {
        Member::GeomPow2 { r } => (p2(r), Proven),
        Member::GeomPow2Pow { r, u } => (p2(u) * (p2(r) - 1) + 1, Proven),
        Member::GeomDeficitPow { v, u, .. } => (p2(u) * (2 * v - 1) + 1, Proven),
        Member::GeomEvenPow { v, u } => {
            let r = cover_exponent(2 * v, Cover::Strict).expect("strict cover is total");
            (p2(u) * (p2(r) - 2 * v - 1) + 1, Proven)
        }
        Member::GeomGeneral { r, j } => {
            let covered = if j == 1 {
                true
            } else if j % 2 == 0 {
                (r as u64) > j / 2
            } else {
                j >= 3 && (r as u64) > j
            };
            (j, if covered { Proven } else { Conjectured })
        }
        Member::MnPlus1 { j, .. } => (j + 1, Proven),
        Member::Mn { r, j } => (if j == 0 { p2(r) + 1 } else { j + 1 }, Proven),
        Member::OnePlusMPowPlus1 { r, .. } => (p2(r) + 1, Proven),
        Member::MixedProduct { a, b } => (mixed_length(a, b), Proven),
        Member::M2m1Pow { n } => (
            n + 1,
            if n.is_power_of_two() {
                Proven
            } else {
                Conjectured
            },
        ),
        Member::Trinomial { n } => (p2(trinomial_s(n)) + 1, Conjectured),
    }
}

/// Length of `1 + M^a (1 + M)^b`, by the shape of `a + b`:
///
/// - `a + b = 2^r`: `b + 1`;
/// - `a + b = 2^r u` with `u >= 3` odd: `b + 2^r (2^w - u) + 1`, `w` least with `u - 1 < 2^w`;
/// - `a + b = 2^t + 1`: `a + 2b - 1`;
/// - `a + b = 2v + 1`, `v` not a power of two: `b + 2^r - 2v`, `r` least with `2v < 2^r`.
pub fn mixed_length(a: u64, b: u64) -> u64 {
    let sum = a + b;
    if sum.is_power_of_two() {
        return b + 1;
    }
    if sum % 2 == 0 {
        let (r, u) = two_adic(sum).expect("sum >= 4");
        let w = cover_exponent(u - 1, Cover::Strict).expect("total");
        return b + pow2_u64(r) * (pow2_u64(w) - u) + 1;
    }
    let v = (sum - 1) / 2;
    if v.is_power_of_two() {
        a + 2 * b - 1
    } else {
        let r = cover_exponent(2 * v, Cover::Strict).expect("total");
        b + pow2_u64(r) - 2 * v
    }
}

/// Greatest `s` with `n - 2^(s+1) >= 1`; needs `n >= 3`.
pub fn trinomial_s(n: u64) -> u32 {
    debug_assert!(n >= 3);
    // 2^(s+1) <= n - 1
    63 - (n - 1).leading_zeros() - 1
}

pub fn predicted_length(spec: &FamilySpec) -> Result<(u64, Status)> {
    Ok(predict_member(&normalize(spec)?.member))
}

/// Indices `k` for which the `k`-th odd term has a closed form.
pub fn closed_form_range(member: &Member) -> Option<RangeInclusive<u64>> {
    let p2 = pow2_u64;
    match *member {
        Member::GeomPow2 { r } => Some(0..=p2(r) - 2),
        Member::GeomPow2Pow { r, u } => Some(0..=p2(u) * (p2(r) - 1) - 1),
        Member::OnePlusMPowPlus1 { r, j } => Some(0..=p2(r) - j - 1),
        Member::MixedProduct { b, .. } => Some(0..=b - 1),
        _ => None,
    }
}

/// The `k`-th odd term (`k = 0` is the first) from its closed form.
pub fn expected_odd_term_member(member: &Member, k: u64) -> Option<Poly> {
    if !closed_form_range(member)?.contains(&k) {
        return None;
    }
    let p2 = pow2_u64;
    Some(match *member {
        Member::GeomPow2 { r } => one_plus_mixed(k + 1, p2(r) - k - 1),
        Member::GeomPow2Pow { r, u } => one_plus_mixed(p2(u) + k, p2(u) * (p2(r) - 1) - k),
        Member::OnePlusMPowPlus1 { r, j } => one_plus_mixed(k, p2(r) - j - k),
        Member::MixedProduct { a, b } => one_plus_mixed(a + k, b - k),
        _ => unreachable!("closed_form_range filtered"),
    })
}

/// Closed-form odd term for a spec; `None` when no closed form applies.
pub fn expected_odd_term(spec: &FamilySpec, k: u64) -> Option<Poly> {
    let n = normalize(spec).ok()?;
    expected_odd_term_member(&n.member, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    /// Parameters as requested.
    pub spec: FamilySpec,
    /// Canonical member actually built (may be a covering family).
    pub canonical: FamilySpec,
    pub note: Option<String>,
    pub poly_degree: u64,
    pub predicted: u64,
    pub computed: u64,
    pub status: Status,
    #[serde(rename = "match")]
    pub matches: bool,
    pub odd_terms_checked: u64,
    /// Indices `k` whose trace odd term differs from the closed form.
    pub odd_term_mismatches: Vec<u64>,
    pub degree_sequence: Vec<usize>,
}

impl PredictionRecord {
    /// Everything the record asserts holds.
    pub fn is_consistent(&self) -> bool {
        self.matches && self.odd_term_mismatches.is_empty()
    }
}

pub fn check(spec: &FamilySpec) -> Result<PredictionRecord> {
    let norm = normalize(spec)?;
    let poly = build_member(&norm.member);
    let (predicted, status) = predict_member(&norm.member);
    let range = closed_form_range(&norm.member);
    let t = collatz::trace_with(
        &poly,
        TraceOptions {
            retain_degree: if range.is_some() {
                collatz::DEFAULT_RETAIN_DEGREE
            } else {
                0
            },
            ..TraceOptions::default()
        },
    )?;

    let mut checked = 0;
    let mut mismatches = Vec::new();
    if let (Some(range), true) = (range, t.terms_retained) {
        for k in range {
            let expected = expected_odd_term_member(&norm.member, k).expect("k in range");
            checked += 1;
            if t.odd_terms.get(k as usize) != Some(&expected) {
                mismatches.push(k);
            }
        }
    }
    let computed = t.length as u64;
    Ok(PredictionRecord {
        spec: spec.clone(),
        canonical: norm.member.spec(),
        note: norm.note,
        poly_degree: poly.degree()? as u64,
        predicted,
        computed,
        status,
        matches: predicted == computed,
        odd_terms_checked: checked,
        odd_term_mismatches: mismatches,
        degree_sequence: t.odd_degrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlateauBlock {
    pub size: usize,
    pub degrees: Vec<usize>,
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlateauReport {
    pub n: u64,
    pub s: u32,
    /// Odd degrees of `x^n + x + 1` without the terminal 0.
    pub degrees: Vec<usize>,
    /// Consecutive blocks of sizes `1, 1, 2, 4, ..., 2^(s-1)`.
    pub blocks: Vec<PlateauBlock>,
    /// Lengths of maximal runs of equal degree.
    pub runs: Vec<usize>,
    pub length: u64,
    pub predicted_length: u64,
    pub blocks_conform: bool,
    pub length_conforms: bool,
}

impl PlateauReport {
    pub fn conforming(&self) -> bool {
        self.blocks_conform && self.length_conforms
    }
}

/// Splits the odd degree sequence of `x^n + x + 1` into blocks of sizes
/// `1, 1, 2, ..., 2^(s-1)` and checks each block has a single degree.
pub fn check_plateau(n: u64) -> Result<PlateauReport> {
    if n < 5 {
        return Err(domain(format!(
            "plateau check needs s >= 1, i.e. n >= 5; got n={n}"
        )));
    }
    if n as u128 > MAX_FAMILY_DEGREE {
        return Err(domain(format!("n={n} exceeds the degree limit")));
    }
    let s = trinomial_s(n);
    let seq = collatz::degree_sequence(&Poly::from_exponents([n as usize, 1, 0]))?;
    let degrees = seq[..seq.len() - 1].to_vec();

    let sizes = std::iter::once(1usize).chain((0..s).map(|t| 1usize << t));
    let mut blocks = Vec::new();
    let mut pos = 0;
    for size in sizes {
        let end = (pos + size).min(degrees.len());
        let chunk = degrees[pos..end].to_vec();
        let constant = chunk.len() == size && chunk.windows(2).all(|w| w[0] == w[1]);
        blocks.push(PlateauBlock {
            size,
            degrees: chunk,
            constant,
        });
        pos = end;
    }
    let covered = pos == degrees.len();

    let mut runs: Vec<usize> = Vec::new();
    for (i, d) in degrees.iter().enumerate() {
        if i > 0 && degrees[i - 1] == *d {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
    }
    let predicted = pow2_u64(s) + 1;
    Ok(PlateauReport {
        n,
        s,
        length: seq.len() as u64,
        predicted_length: predicted,
        blocks_conform: covered && blocks.iter().all(|b| b.constant),
        length_conforms: seq.len() as u64 == predicted,
        degrees,
        blocks,
        runs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub params: Params,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<PredictionRecord>,
    pub skipped: Vec<SkippedPoint>,
    /// Engine failures (step budget, theorem violation); empty on a healthy build.
    pub errors: Vec<SkippedPoint>,
}

impl SweepResult {
    pub fn proven_mismatches(&self) -> impl Iterator<Item = &PredictionRecord> {
        self.records
            .iter()
            .filter(|r| r.status == Status::Proven && !r.is_consistent())
    }

    pub fn conjecture_findings(&self) -> impl Iterator<Item = &PredictionRecord> {
        self.records
            .iter()
            .filter(|r| r.status == Status::Conjectured && !r.is_consistent())
    }
}

/// Cartesian product of named inclusive ranges; the last range varies fastest.
pub fn grid(ranges: &[(&str, RangeInclusive<u64>)]) -> Vec<Params> {
    let mut points = vec![Params::new()];
    for (name, range) in ranges {
        let mut next = Vec::new();
        for p in &points {
            for v in range.clone() {
                let mut q = p.clone();
                q.insert(name.to_string(), v);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

pub fn sweep(
    family: FamilyId,
    ranges: &[(&str, RangeInclusive<u64>)],
    workers: usize,
) -> SweepResult {
    sweep_points(family, grid(ranges), workers)
}

/// Checks every point, in order; points outside the family domain are skipped.
pub fn sweep_points(family: FamilyId, points: Vec<Params>, workers: usize) -> SweepResult {
    let outcomes = par::ordered_map(points, workers, |params| {
        let spec = FamilySpec { family, params };
        let res = check(&spec);
        (spec, res)
    });
    let mut out = SweepResult::default();
    for (spec, res) in outcomes {
        match res {
            Ok(rec) => out.records.push(rec),
            Err(Error::Domain(reason)) => out.skipped.push(SkippedPoint {
                params: spec.params,
                reason,
            }),
            Err(e) => out.errors.push(SkippedPoint {
                params: spec.params,
                reason: e.to_string(),
            }),
        }
    }
    out
}
