//! Closed-form bounds on the minimum and maximum of `h_C(S)` over all
//! systems with given `(n, d, k)`.
//!
//! Values are exact: rationals, or `radicand^(1/index)/divisor + offset`
//! compared through integer roots. Floating point is only used for display.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tree::ProblemKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extremum {
    /// Least `h_C(S)` over the class.
    Min,
    /// Greatest `h_C(S)` over the class.
    Max,
}

impl FromStr for Extremum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Extremum::Min),
            "max" => Ok(Extremum::Max),
            _ => Err(Error::InvalidParameters(format!("unknown extremum {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub problem: ProblemKind,
    /// Restrict the class to reduced systems (`SR`-reduced for `SR`/`ESR`,
    /// `AD`-reduced for `AD`/`EAD`).
    pub reduced: bool,
    pub extremum: Extremum,
    pub n: usize,
    pub d: usize,
    pub k: usize,
}

/// An exact real number of one of the shapes the bounds need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Rational(BigRational),
    /// `radicand^(1/index) / divisor + offset`
    Radical {
        radicand: BigInt,
        index: u32,
        divisor: BigInt,
        offset: BigInt,
    },
}

fn int(v: usize) -> BigInt {
    BigInt::from(v)
}

fn ratio(v: usize) -> BigRational {
    BigRational::from_integer(int(v))
}

/// Smallest `w` with `w * q >= radicand^(1/index)`.
fn ceil_root_over(radicand: &BigInt, index: u32, divisor: &BigInt) -> BigInt {
    let s = radicand.nth_root(index);
    let root_ceil = if s.pow(index) == *radicand { s } else { s + 1 };
    let (w, rem) = (&root_ceil / divisor, &root_ceil % divisor);
    if rem.is_zero() {
        w
    } else {
        w + 1
    }
}

/// `⌈(nk)^(1/d) / k⌉`, exactly.
pub fn ceil_root_ratio(n: usize, d: usize, k: usize) -> usize {
    ceil_root_over(&int(n * k), d as u32, &int(k))
        .to_usize()
        .expect("fits usize")
}

impl BoundValue {
    pub fn integer(v: usize) -> Self {
        BoundValue::Rational(ratio(v))
    }

    /// Least integer `>=` the value.
    pub fn ceil(&self) -> BigInt {
        match self {
            BoundValue::Rational(r) => r.ceil().to_integer(),
            BoundValue::Radical {
                radicand,
                index,
                divisor,
                offset,
            } => ceil_root_over(radicand, *index, divisor) + offset,
        }
    }

    /// Greatest integer `<=` the value.
    pub fn floor(&self) -> BigInt {
        match self {
            BoundValue::Rational(r) => r.floor().to_integer(),
            BoundValue::Radical {
                radicand,
                index,
                divisor,
                offset,
            } => radicand.nth_root(*index) / divisor + offset,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            BoundValue::Radical {
                radicand,
                index,
                divisor,
                offset,
            } => {
                let r = radicand.to_f64().unwrap_or(f64::NAN);
                r.powf(1.0 / f64::from(*index)) / divisor.to_f64().unwrap_or(f64::NAN)
                    + offset.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, other: &BigRational) -> Ordering {
        match self {
            BoundValue::Rational(r) => r.cmp(other),
            BoundValue::Radical {
                radicand,
                index,
                divisor,
                offset,
            } => {
                // root/q + c  vs  x   ⇔   root  vs  (x - c) q
                let target = (other - BigRational::from_integer(offset.clone()))
                    * BigRational::from_integer(divisor.clone());
                if target.is_negative() {
                    return Ordering::Greater;
                }
                // root^m vs (a/b)^m  ⇔  r b^m vs a^m
                let lhs = radicand * target.denom().pow(*index);
                let rhs = target.numer().pow(*index);
                lhs.cmp(&rhs)
            }
        }
    }

    fn as_rational(&self) -> Option<&BigRational> {
        match self {
            BoundValue::Rational(r) => Some(r),
            BoundValue::Radical { .. } => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            BoundValue::Rational(r) => write!(f, "{r} (~{:.4})", self.to_f64()),
            BoundValue::Radical {
                radicand,
                index,
                divisor,
                offset,
            } => {
                write!(f, "{radicand}^(1/{index})")?;
                if !divisor.is_one() {
                    write!(f, "/{divisor}")?;
                }
                match offset.sign() {
                    num_bigint::Sign::Minus => write!(f, " - {}", -offset)?,
                    num_bigint::Sign::Plus => write!(f, " + {offset}")?,
                    num_bigint::Sign::NoSign => {}
                }
                write!(f, " (~{:.4})", self.to_f64())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundInterval {
    pub lower: BoundValue,
    pub upper: BigRational,
    /// `lower == upper`; the value is then an integer.
    pub exact: bool,
    /// The formula that produced the interval.
    pub case: String,
}

impl BoundInterval {
    fn exact(v: usize, case: impl Into<String>) -> Self {
        BoundInterval {
            lower: BoundValue::integer(v),
            upper: ratio(v),
            exact: true,
            case: case.into(),
        }
    }

    fn between(lower: BoundValue, upper: BigRational, case: impl Into<String>) -> Self {
        let exact = lower.as_rational() == Some(&upper);
        BoundInterval {
            lower,
            upper,
            exact,
            case: case.into(),
        }
    }

    /// Whether an integer depth lies in the interval.
    pub fn contains(&self, h: usize) -> bool {
        let h = ratio(h);
        self.lower.cmp_rational(&h) != Ordering::Greater && h <= self.upper
    }

    /// Whether a depth respects the lower end.
    pub fn admits_as_lower(&self, h: usize) -> bool {
        self.lower.cmp_rational(&ratio(h)) != Ordering::Greater
    }

    pub fn is_ordered(&self) -> bool {
        self.lower.cmp_rational(&self.upper) != Ordering::Greater
    }
}

impl fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "exact {}", self.lower)?;
        } else {
            write!(
                f,
                "[{}, {}]",
                self.lower,
                BoundValue::Rational(self.upper.clone())
            )?;
        }
        write!(f, "  ({})", self.case)
    }
}

fn max_rational(a: BigRational, b: BigRational) -> BigRational {
    if a >= b {
        a
    } else {
        b
    }
}

/// The bound for one class of systems.
pub fn class_bounds(q: &BoundQuery) -> Result<BoundInterval> {
    let BoundQuery { n, d, k, .. } = *q;
    if n == 0 || d == 0 || k == 0 {
        return Err(Error::InvalidParameters(
            "n, d and k must be positive".into(),
        ));
    }
    if d > n {
        return Err(Error::InvalidParameters(format!("d={d} exceeds n={n}")));
    }
    let semantics_ar = matches!(q.problem, ProblemKind::AR | ProblemKind::EAR);
    if q.reduced && semantics_ar {
        return Err(Error::InvalidParameters(format!(
            "reduced classes are not defined for {}",
            q.problem
        )));
    }
    let sr = q.problem == ProblemKind::SR;
    Ok(match q.extremum {
        Extremum::Max if sr && d == 1 => BoundInterval::exact(1, "max SR with d = 1: 1"),
        Extremum::Max if sr && k == 1 => BoundInterval::exact(d, "max SR with k = 1: d"),
        Extremum::Max if sr => BoundInterval::exact(n, "max SR with d, k > 1: n"),
        Extremum::Max => BoundInterval::exact(n, format!("max {}: n", q.problem)),
        Extremum::Min if semantics_ar && (d == 1 || k == 1) => {
            BoundInterval::exact(n, "min AR/EAR with d = 1 or k = 1: n")
        }
        Extremum::Min if semantics_ar => {
            let kd = int(k).pow(d as u32);
            let lower = max_rational(ratio(d), BigRational::new(int(n) * int(k - 1), kd));
            let upper = ratio(d) + BigRational::new(int(n), int(k).pow(d as u32 - 1));
            BoundInterval::between(
                BoundValue::Rational(lower),
                upper,
                "min AR/EAR with d, k > 1: max{d, n(k-1)/k^d} <= h <= d + n/k^(d-1)",
            )
        }
        Extremum::Min if !q.reduced => BoundInterval::exact(0, format!("min {}: 0", q.problem)),
        Extremum::Min if matches!(q.problem, ProblemKind::SR | ProblemKind::AD) => {
            if d == n {
                BoundInterval::exact(n, "min reduced SR/AD with d = n: n")
            } else {
                BoundInterval::exact(1, "min reduced SR/AD with d < n: 1")
            }
        }
        Extremum::Min => {
            let radical = BoundValue::Radical {
                radicand: int(n * k),
                index: d as u32,
                divisor: int(k),
                offset: -int(d),
            };
            let lower = if radical.cmp_rational(&ratio(d)) == Ordering::Greater {
                radical
            } else {
                BoundValue::integer(d)
            };
            let upper = ratio(2 * d * ceil_root_ratio(n, d, k));
            BoundInterval::between(
                lower,
                upper,
                "min reduced ESR/EAD: max{d, (nk)^(1/d)/k - d} <= h <= 2d*ceil((nk)^(1/d)/k)",
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(
        problem: ProblemKind,
        extremum: Extremum,
        reduced: bool,
        n: usize,
        d: usize,
        k: usize,
    ) -> BoundQuery {
        BoundQuery {
            problem,
            reduced,
            extremum,
            n,
            d,
            k,
        }
    }

    #[test]
    fn sr_max_with_unit_rules() {
        let b = class_bounds(&q(ProblemKind::SR, Extremum::Max, false, 5, 1, 3)).unwrap();
        assert!(b.exact);
        assert_eq!(b.upper, ratio(1));
    }

    #[test]
    fn ar_min_interval() {
        let b = class_bounds(&q(ProblemKind::AR, Extremum::Min, false, 8, 2, 2)).unwrap();
        assert_eq!(b.lower, BoundValue::integer(2));
        assert_eq!(b.upper, ratio(6));
        assert!(!b.exact);
    }

    #[test]
    fn reduced_sr_full_length() {
        let b = class_bounds(&q(ProblemKind::SR, Extremum::Min, true, 4, 4, 2)).unwrap();
        assert!(b.exact);
        assert_eq!(b.upper, ratio(4));
    }

    #[test]
    fn reduced_esr_interval() {
        let b = class_bounds(&q(ProblemKind::ESR, Extremum::Min, true, 4, 2, 2)).unwrap();
        assert_eq!(b.lower, BoundValue::integer(2));
        assert_eq!(b.upper, ratio(8));
    }

    #[test]
    fn invalid_queries() {
        assert!(class_bounds(&q(ProblemKind::AR, Extremum::Min, true, 3, 2, 2)).is_err());
        assert!(class_bounds(&q(ProblemKind::SR, Extremum::Min, false, 3, 4, 2)).is_err());
        assert!(class_bounds(&q(ProblemKind::SR, Extremum::Min, false, 0, 0, 2)).is_err());
    }

    #[test]
    fn ceil_root_ratio_is_exact() {
        // (8)^(1/2)/2 = 1.41…
        assert_eq!(ceil_root_ratio(4, 2, 2), 2);
        // (27)^(1/3)/3 = 1 exactly
        assert_eq!(ceil_root_ratio(9, 3, 3), 1);
        // (10·1)^(1/1)/1
        assert_eq!(ceil_root_ratio(10, 1, 1), 10);
    }

    #[test]
    fn radical_rounding() {
        let v = BoundValue::Radical {
            radicand: int(8),
            index: 2,
            divisor: int(2),
            offset: BigInt::from(-2),
        };
        // √8/2 − 2 ≈ −0.586
        assert_eq!(v.ceil(), int(0));
        assert_eq!(v.floor(), BigInt::from(-1));
        assert_eq!(v.cmp_rational(&ratio(0)), Ordering::Less);
        assert_eq!(
            v.cmp_rational(&BigRational::new(BigInt::from(-3), int(5))),
            Ordering::Greater
        );
    }

    #[test]
    fn intervals_are_ordered_on_grid() {
        for n in 1..=30 {
            for d in 1..=n.min(6) {
                for k in 1..=6 {
                    for p in ProblemKind::ALL {
                        for e in [Extremum::Min, Extremum::Max] {
                            for reduced in [false, true] {
                                if let Ok(b) = class_bounds(&q(p, e, reduced, n, d, k)) {
                                    assert!(b.is_ordered(), "{p} {e:?} {n} {d} {k}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
