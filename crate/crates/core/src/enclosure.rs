//! Rigorous two-endpoint enclosures with outward rounding.
//!
//! An [`Enclosure`] is a pair `[lo, hi]` of dyadic values guaranteed to
//! contain the mathematical quantity it stands for. Every arithmetic
//! operation rounds the lower endpoint toward -inf and the upper endpoint
//! toward +inf, so containment is preserved under composition. The stored
//! `precision_bits` is the requested working precision; endpoints carry a
//! few guard bits beyond it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

use crate::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// Guard bits carried beyond the requested precision.
pub(crate) const GUARD_BITS: u32 = 32;

/// Certified sign of an enclosed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    /// Exactly zero: both endpoints are zero.
    Zero,
    Positive,
    /// The enclosure straddles zero with nonzero width.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    /// Working mantissa size used when rounding endpoints at precision `prec`.
    pub(crate) fn working_bits(prec: u32) -> u32 {
        prec + GUARD_BITS
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(
                "enclosure endpoints out of order".into(),
            ));
        }
        Ok(Enclosure { lo, hi, prec })
    }

    /// Zero-width enclosure of an exactly representable value.
    pub fn point(value: Dyadic, prec: u32) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
            prec,
        }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_int(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_bigint(v.clone()), prec)
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_biguint(v), prec)
    }

    /// Tightest representable enclosure of an exact rational at this
    /// precision. Dyadic rationals (including integers) come out zero-width.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let w = Self::working_bits(prec);
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        let lo = num.div_rounded(&den, w, Rounding::Floor).expect("nonzero denominator");
        let hi = num.div_rounded(&den, w, Rounding::Ceil).expect("nonzero denominator");
        Enclosure { lo, hi, prec }
    }

    /// Parse a decimal literal as an exact scaled integer, then enclose it.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        Ok(Self::from_rational(&crate::dyadic::parse_decimal(s)?, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Same interval tagged with a different requested precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        Enclosure {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            prec,
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    /// Largest magnitude over the interval.
    pub fn mag_upper(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn sign(&self) -> Sign {
        if self.hi.signum() < 0 {
            Sign::Negative
        } else if self.lo.signum() > 0 {
            Sign::Positive
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Sign::Zero
        } else {
            Sign::Indeterminate
        }
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn bin_prec(&self, rhs: &Enclosure) -> u32 {
        self.prec.max(rhs.prec)
    }

    pub fn add(&self, rhs: &Enclosure) -> Self {
        let prec = self.bin_prec(rhs);
        let w = Self::working_bits(prec);
        Enclosure {
            lo: self.lo.add_rounded(&rhs.lo, w, Rounding::Floor),
            hi: self.hi.add_rounded(&rhs.hi, w, Rounding::Ceil),
            prec,
        }
    }

    pub fn sub(&self, rhs: &Enclosure) -> Self {
        let prec = self.bin_prec(rhs);
        let w = Self::working_bits(prec);
        Enclosure {
            lo: self.lo.add_rounded(&rhs.hi.neg(), w, Rounding::Floor),
            hi: self.hi.add_rounded(&rhs.lo.neg(), w, Rounding::Ceil),
            prec,
        }
    }

    pub fn neg(&self) -> Self {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            Sign::Negative => self.neg(),
            Sign::Positive | Sign::Zero => self.clone(),
            Sign::Indeterminate => Enclosure {
                lo: Dyadic::zero(),
                hi: self.mag_upper(),
                prec: self.prec,
            },
        }
    }

    pub fn mul(&self, rhs: &Enclosure) -> Self {
        let prec = self.bin_prec(rhs);
        let w = Self::working_bits(prec);
        // Exact endpoint products, then outward rounding of the extremes.
        let products = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let lo = products.iter().min().unwrap().round(w, Rounding::Floor);
        let hi = products.iter().max().unwrap().round(w, Rounding::Ceil);
        Enclosure { lo, hi, prec }
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Self {
        Enclosure {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Enclosure::from_int(k, self.prec))
    }

    pub fn add_int(&self, k: i64) -> Self {
        self.add(&Enclosure::from_int(k, self.prec))
    }

    pub fn sub_int(&self, k: i64) -> Self {
        self.sub(&Enclosure::from_int(k, self.prec))
    }

    pub fn div(&self, rhs: &Enclosure) -> Result<Self> {
        let prec = self.bin_prec(rhs);
        match rhs.sign() {
            Sign::Positive => Ok(self.div_positive(rhs, prec)),
            Sign::Negative => Ok(self.neg().div_positive(&rhs.neg(), prec)),
            _ => Err(Error::Domain(
                "division by an interval containing zero".into(),
            )),
        }
    }

    // Divisor certified positive: endpoint selection by dividend sign.
    fn div_positive(&self, rhs: &Enclosure, prec: u32) -> Self {
        let w = Self::working_bits(prec);
        let lo_den = if self.lo.signum() >= 0 { &rhs.hi } else { &rhs.lo };
        let hi_den = if self.hi.signum() >= 0 { &rhs.lo } else { &rhs.hi };
        let lo = self
            .lo
            .div_rounded(lo_den, w, Rounding::Floor)
            .expect("positive divisor");
        let hi = self
            .hi
            .div_rounded(hi_den, w, Rounding::Ceil)
            .expect("positive divisor");
        Enclosure { lo, hi, prec }
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        self.div(&Enclosure::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Enclosure::from_int(1, self.prec).div(self)
    }

    /// Square root; requires a non-negative lower endpoint.
    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.signum() < 0 {
            return Err(Error::Domain(
                "square root of an interval reaching below zero".into(),
            ));
        }
        let w = Self::working_bits(self.prec);
        Ok(Enclosure {
            lo: self.lo.sqrt_rounded(w, Rounding::Floor)?,
            hi: self.hi.sqrt_rounded(w, Rounding::Ceil)?,
            prec: self.prec,
        })
    }

    /// Interval power with a non-negative integer exponent (exact base
    /// endpoints raised directly; tight for single-occurrence bases).
    pub fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Enclosure::from_int(1, self.prec);
        }
        let mut acc = self.clone();
        // Square-and-multiply over interval arithmetic stays sound; the
        // slight over-estimation versus endpoint powers is irrelevant here
        // because callers only use positive bases.
        let mut result: Option<Enclosure> = None;
        let mut bits = n;
        while bits > 0 {
            if bits & 1 == 1 {
                result = Some(match &result {
                    Some(r) => r.mul(&acc),
                    None => acc.clone(),
                });
            }
            bits >>= 1;
            if bits > 0 {
                acc = acc.mul(&acc);
            }
        }
        result.unwrap()
    }

    /// Convex hull.
    pub fn hull(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.bin_prec(other),
        }
    }

    /// Symmetric widening by `slack` on both sides (used for series tails).
    pub fn widen(&self, slack: &Dyadic) -> Self {
        debug_assert!(slack.signum() >= 0);
        Enclosure {
            lo: self.lo.sub_exact(slack),
            hi: self.hi.add_exact(slack),
            prec: self.prec,
        }
    }

    /// Decimal endpoint strings at `sig` significant digits; the printed
    /// pair always contains the interval.
    pub fn endpoints_decimal(&self, sig: usize) -> (String, String) {
        (
            self.lo.to_decimal(sig, Rounding::Floor),
            self.hi.to_decimal(sig, Rounding::Ceil),
        )
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.endpoints_decimal(17);
        write!(f, "[{lo}, {hi}]")
    }
}

/// Certify the sign of `eval(precision)` by doubling precision up to `cap`.
///
/// `Zero` is accepted as definite only if exact; an indeterminate enclosure
/// triggers re-evaluation at twice the precision. Reports the precision that
/// settled the sign.
pub fn certify_sign<F>(mut eval: F, start_bits: u32, cap: u32) -> Result<(Sign, u32)>
where
    F: FnMut(u32) -> Result<Enclosure>,
{
    let mut p = start_bits.min(cap);
    loop {
        let enc = eval(p)?;
        match enc.sign() {
            Sign::Indeterminate => {
                if p >= cap {
                    return Err(Error::PrecisionExhausted { cap });
                }
                p = (p * 2).min(cap);
            }
            s => return Ok((s, p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn enc(lo: i64, elo: i64, hi: i64, ehi: i64) -> Enclosure {
        Enclosure::from_endpoints(
            Dyadic::new(BigInt::from(lo), elo),
            Dyadic::new(BigInt::from(hi), ehi),
            64,
        )
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn endpoint_order_enforced() {
        assert!(Enclosure::from_endpoints(Dyadic::one(), Dyadic::zero(), 64).is_err());
    }

    #[test]
    fn sign_classification() {
        assert_eq!(enc(-2, 0, -1, 0).sign(), Sign::Negative);
        assert_eq!(enc(-1, 0, 1, 0).sign(), Sign::Indeterminate);
        assert_eq!(enc(0, 0, 0, 0).sign(), Sign::Zero);
        assert_eq!(enc(1, 0, 2, 0).sign(), Sign::Positive);
        // Half-open straddles are indeterminate, not zero.
        assert_eq!(enc(0, 0, 1, 0).sign(), Sign::Indeterminate);
    }

    #[test]
    fn rational_points_are_contained() {
        let third = rat(1, 3);
        let e = Enclosure::from_rational(&third, 64);
        assert!(e.contains_rational(&third));
        assert!(e.width() < Dyadic::pow2(-90));
        // Dyadic rationals are exact.
        let half = Enclosure::from_rational(&rat(1, 2), 64);
        assert!(half.width().is_zero());
    }

    #[test]
    fn arithmetic_contains_rational_results() {
        let a = Enclosure::from_rational(&rat(1, 3), 64);
        let b = Enclosure::from_rational(&rat(2, 7), 64);
        assert!(a.add(&b).contains_rational(&(rat(1, 3) + rat(2, 7))));
        assert!(a.sub(&b).contains_rational(&(rat(1, 3) - rat(2, 7))));
        assert!(a.mul(&b).contains_rational(&(rat(1, 3) * rat(2, 7))));
        assert!(a.div(&b).unwrap().contains_rational(&(rat(1, 3) / rat(2, 7))));
        // Signs histories through products of mixed-sign intervals.
        let m = enc(-1, 0, 2, 0).mul(&enc(-3, 0, 5, 0));
        assert!(m.contains_rational(&rat(-6, 1)));
        assert!(m.contains_rational(&rat(10, 1)));
        assert!(m.contains_rational(&rat(-5, 1)));
    }

    #[test]
    fn division_by_straddling_interval_fails() {
        let a = Enclosure::from_int(1, 64);
        assert!(a.div(&enc(-1, 0, 1, 0)).is_err());
        // Negative divisor works.
        let q = a.div(&enc(-4, 0, -2, 0)).unwrap();
        assert!(q.contains_rational(&rat(-1, 3)));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Enclosure::from_int(2, 64);
        let r = two.sqrt().unwrap();
        assert!(r.mul(&r).contains_rational(&rat(2, 1)));
        assert!(enc(-1, 0, 4, 0).sqrt().is_err());
    }

    #[test]
    fn abs_of_straddle() {
        let a = enc(-3, 0, 2, 0).abs();
        assert!(a.lo().is_zero());
        assert_eq!(*a.hi(), Dyadic::from_int(3));
    }

    #[test]
    fn powi_matches_rational_power() {
        let b = Enclosure::from_rational(&rat(3, 7), 64);
        let p = b.powi(5);
        let want = rat(3, 7).pow(5);
        assert!(p.contains_rational(&want));
        assert_eq!(*b.powi(0).lo(), Dyadic::one());
    }

    #[test]
    fn certify_sign_escalates() {
        // Width 2^-p straddle around 2^-40 resolves once p > 40.
        let f = |p: u32| {
            Enclosure::from_endpoints(
                Dyadic::pow2(-40).sub_exact(&Dyadic::pow2(-(p as i64))),
                Dyadic::pow2(-40).add_exact(&Dyadic::pow2(-(p as i64))),
                p,
            )
        };
        let (s, bits) = certify_sign(f, 32, 4096).unwrap();
        assert_eq!(s, Sign::Positive);
        assert!(bits > 40 && bits <= 128);
        // Unreachable target errors out at the cap.
        let g = |p: u32| {
            Enclosure::from_endpoints(Dyadic::pow2(-(p as i64)).neg(), Dyadic::pow2(-(p as i64)), p)
        };
        assert!(matches!(
            certify_sign(g, 32, 64),
            Err(Error::PrecisionExhausted { cap: 64 })
        ));
    }
}
