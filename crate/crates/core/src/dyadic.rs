//! Dyadic scalars `mantissa * 2^exp` with explicit directed rounding.
//!
//! These are the endpoint values of every enclosure. Addition and
//! multiplication are exact; rounding happens only where requested, and
//! always toward a stated direction, never to-nearest. Representations are
//! kept canonical (odd mantissa, or zero with exponent 0) so structural
//! equality is value equality.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Rounding direction: `Floor` moves toward -inf, `Ceil` toward +inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

impl Rounding {
    pub fn opposite(self) -> Self {
        match self {
            Rounding::Floor => Rounding::Ceil,
            Rounding::Ceil => Rounding::Floor,
        }
    }
}

/// Exact binary value `mant * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Magnitude gap (in bits) beyond which an addend cannot influence a
/// rounded result except through its sign.
const STICKY_GAP: i64 = 8;

impl Dyadic {
    /// Canonical constructor: strips trailing zero bits from the mantissa.
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic {
                mant,
                exp: 0,
            };
        }
        match mant.trailing_zeros() {
            Some(tz) if tz > 0 => Dyadic {
                mant: mant >> tz,
                exp: exp.checked_add(tz as i64).expect("exponent overflow"),
            },
            _ => Dyadic { mant, exp },
        }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn one() -> Self {
        Dyadic::new(BigInt::one(), 0)
    }

    /// Exact power of two `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic::new(BigInt::one(), k)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Dyadic::new(BigInt::from(v.clone()), 0)
    }

    /// Exact conversion from a finite float (floats are dyadic rationals).
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        // Decompose into integer mantissa and power of two.
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * mant as i64), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Bit length of the mantissa magnitude (0 for zero).
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// floor(log2 |x|); `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp.checked_add(k).expect("exponent overflow"),
        }
    }

    /// Directed rounding to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as i64;
        let mant = match dir {
            // BigInt >> is an arithmetic shift: floor division by 2^drop.
            Rounding::Floor => &self.mant >> drop as u64,
            Rounding::Ceil => -((-&self.mant) >> drop as u64),
        };
        Dyadic::new(mant, self.exp + drop)
    }

    /// Exact sum. Mantissa size grows with the exponent gap, so callers on
    /// hot paths with wildly mismatched magnitudes should prefer
    /// [`Dyadic::add_rounded`].
    pub fn add_exact(&self, rhs: &Dyadic) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, rhs: &Dyadic) -> Self {
        self.add_exact(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul_exact(&self, rhs: &Dyadic) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(
            &self.mant * &rhs.mant,
            self.exp.checked_add(rhs.exp).expect("exponent overflow"),
        )
    }

    /// Directed sum rounded to `prec` bits. When the magnitudes are too far
    /// apart for the smaller operand to reach the rounded digits, it is
    /// replaced by a sub-ulp nudge in the rounding direction, which keeps the
    /// result sound without materializing the aligned mantissa.
    pub fn add_rounded(&self, rhs: &Dyadic, prec: u32, dir: Rounding) -> Self {
        if self.is_zero() {
            return rhs.round(prec, dir);
        }
        if rhs.is_zero() {
            return self.round(prec, dir);
        }
        let la = self.ilog2().unwrap();
        let lb = rhs.ilog2().unwrap();
        let (big, small, lbig) = if la >= lb {
            (self, rhs, la)
        } else {
            (rhs, self, lb)
        };
        let gap = (la - lb).abs();
        if gap > prec as i64 + STICKY_GAP {
            let r = big.round(prec, dir);
            // |small| < 2^(lbig - prec - STICKY_GAP + 1), so this step covers it.
            let step = Dyadic::pow2(lbig - prec as i64 - STICKY_GAP + 2);
            return match (dir, small.signum()) {
                (Rounding::Floor, -1) => r.sub_exact(&step),
                (Rounding::Ceil, 1) => r.add_exact(&step),
                _ => r,
            };
        }
        self.add_exact(rhs).round(prec, dir)
    }

    /// Directed quotient `self / rhs` with at least `prec` significant bits.
    pub fn div_rounded(&self, rhs: &Dyadic, prec: u32, dir: Rounding) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let scale = prec as i64 + 2 + rhs.bits() as i64 - self.bits() as i64;
        let scale = scale.max(0) as u64;
        let num = &self.mant << scale;
        let q = match dir {
            Rounding::Floor => num.div_floor(&rhs.mant),
            Rounding::Ceil => -(-num).div_floor(&rhs.mant),
        };
        let exp = self.exp - rhs.exp - scale as i64;
        Ok(Dyadic::new(q, exp).round(prec, dir))
    }

    /// Directed square root with at least `prec` significant bits.
    pub fn sqrt_rounded(&self, prec: u32, dir: Rounding) -> Result<Self> {
        if self.signum() < 0 {
            return Err(Error::Domain("square root of negative value".into()));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        // Scale the mantissa so its square root carries prec+2 bits and the
        // exponent to take out is even.
        let want = 2 * (prec as u64 + 2);
        let mut shift = want.saturating_sub(self.bits());
        if (self.exp - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let scaled = (&self.mant << shift).to_biguint().expect("non-negative");
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let mant = match (dir, exact) {
            (Rounding::Ceil, false) => BigInt::from(root + 1u32),
            _ => BigInt::from(root),
        };
        Ok(Dyadic::new(mant, (self.exp - shift as i64) / 2).round(prec, dir))
    }

    /// Compare against an exact rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // self = m * 2^exp vs p/q with q > 0.
        let (p, q) = (r.numer(), r.denom());
        let lhs;
        let rhs;
        if self.exp >= 0 {
            lhs = (&self.mant << self.exp as u64) * q;
            rhs = p.clone();
        } else {
            lhs = &self.mant * q;
            rhs = p << (-self.exp) as u64;
        }
        lhs.cmp(&rhs)
    }

    /// Nearest-value conversion for heuristics (step proposals, term count
    /// estimates). Never used on any soundness-bearing path.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (top, exp) = if bits > 64 {
            let drop = bits - 64;
            ((&self.mant >> drop).to_i128().unwrap(), self.exp + drop as i64)
        } else {
            (self.mant.to_i128().unwrap(), self.exp)
        };
        if exp > 2000 {
            return if top > 0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if exp < -2000 {
            // Preserve the sign for callers that branch on it.
            return if top > 0 { 0.0 } else { -0.0 };
        }
        top as f64 * (exp as f64).exp2()
    }

    /// Decimal rendering with `sig` significant digits, rounded in `dir`.
    /// Plain notation for moderate magnitudes, scientific otherwise. The
    /// printed value is always on the `dir` side of the true value.
    pub fn to_decimal(&self, sig: usize, dir: Rounding) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".into();
        }
        let ten = BigInt::from(10u32);
        // First guess for floor(log10 |x|) from the binary magnitude.
        let mut e10 = (self.ilog2().unwrap() as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let digits;
        let mut t; // exponent of the last rendered digit
        loop {
            t = e10 - sig as i64 + 1;
            // N = round_dir(x / 10^t) as a signed integer.
            let mut num = self.mant.clone();
            let mut den = BigInt::one();
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            if t >= 0 {
                den *= ten.pow(t as u32);
            } else {
                num *= ten.pow((-t) as u32);
            }
            let n = match dir {
                Rounding::Floor => num.div_floor(&den),
                Rounding::Ceil => -(-num).div_floor(&den),
            };
            let mag = n.magnitude().to_string();
            if mag.len() > sig {
                e10 += 1;
                continue;
            }
            if mag.len() < sig && mag != "0" {
                e10 -= 1;
                continue;
            }
            digits = (n.is_negative(), format!("{:0>width$}", mag, width = sig));
            break;
        }
        let (neg, ds) = digits;
        let point_exp = e10; // value = 0.d1 d2 ... * 10^(e10+1), d1 nonzero
        let body = if point_exp >= -4 && point_exp < sig as i64 + 6 {
            if point_exp >= sig as i64 - 1 {
                // Integral with trailing zeros.
                let zeros = point_exp - (sig as i64 - 1);
                format!("{}{}", ds, "0".repeat(zeros as usize))
            } else if point_exp >= 0 {
                let (int, frac) = ds.split_at(point_exp as usize + 1);
                format!("{int}.{frac}")
            } else {
                format!("0.{}{}", "0".repeat((-point_exp - 1) as usize), ds)
            }
        } else if sig == 1 {
            format!("{}e{}", ds, point_exp)
        } else {
            let (h, rest) = ds.split_at(1);
            format!("{h}.{rest}e{point_exp}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: magnitudes decide; compare ilog2 first to avoid
        // aligning wildly different exponents.
        let la = self.ilog2().unwrap();
        let lb = other.ilog2().unwrap();
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        self.sub_exact(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Rounding::Floor))
    }
}

/// Parse a decimal literal (`-12.34e-5` style) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty numeric literal".into()));
    }
    let (mantissa_part, exp_part) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], Some(&t[i + 1..])),
        None => (t, None),
    };
    let (sign, rest) = match mantissa_part.as_bytes().first() {
        Some(b'-') => (-1, &mantissa_part[1..]),
        Some(b'+') => (1, &mantissa_part[1..]),
        _ => (1, mantissa_part),
    };
    let (int_part, frac_part) = match rest.find('.') {
        Some(i) => (&rest[..i], &rest[i + 1..]),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid digits in {s:?}")));
    }
    let digits: String = [int_part, frac_part].concat();
    let mut num: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad mantissa in {s:?}")))?;
    if sign < 0 {
        num = -num;
    }
    let mut exp10: i64 = -(frac_part.len() as i64);
    if let Some(e) = exp_part {
        let parsed: i64 = e
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        exp10 += parsed;
    }
    let ten = BigInt::from(10u32);
    Ok(if exp10 >= 0 {
        BigRational::new(num * ten.pow(exp10 as u32), BigInt::one())
    } else {
        BigRational::new(num, ten.pow((-exp10) as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn bigint_shift_is_floor() {
        // The rounding code relies on >> flooring toward -inf.
        assert_eq!(BigInt::from(-5) >> 1u64, BigInt::from(-3));
        assert_eq!(BigInt::from(5) >> 1u64, BigInt::from(2));
    }

    #[test]
    fn canonical_representation() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(12, -2), d(3, 0));
        assert_eq!(Dyadic::zero().exponent(), 0);
    }

    #[test]
    fn round_directions() {
        // 0.1 is not dyadic; 7/64 rounded to 2 bits goes to 3/32 or 1/8.
        let x = d(7, -6); // 0.109375
        assert_eq!(x.round(2, Rounding::Floor), d(3, -5)); // 0.09375
        assert_eq!(x.round(2, Rounding::Ceil), d(1, -3)); // 0.125
        let y = x.neg();
        assert_eq!(y.round(2, Rounding::Floor), d(-1, -3));
        assert_eq!(y.round(2, Rounding::Ceil), d(-3, -5));
        // No-op when already short enough.
        assert_eq!(x.round(3, Rounding::Floor), x);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = d(3, -1); // 1.5
        let b = d(5, -2); // 1.25
        assert_eq!(a.add_exact(&b), d(11, -2));
        assert_eq!(a.sub_exact(&b), d(1, -2));
        assert_eq!(a.mul_exact(&b), d(15, -3));
    }

    #[test]
    fn add_rounded_sticky_is_sound() {
        // big = 1, small = ±2^-100, prec = 8: the sum must stay bracketed.
        let big = Dyadic::one();
        let small = Dyadic::pow2(-100);
        let down = big.add_rounded(&small.neg(), 8, Rounding::Floor);
        let up = big.add_rounded(&small, 8, Rounding::Ceil);
        assert!(down < big.sub_exact(&small).clone());
        assert!(up > big.add_exact(&small).clone());
        // And in the benign direction nothing moves.
        assert_eq!(big.add_rounded(&small, 8, Rounding::Floor), big);
    }

    #[test]
    fn div_rounded_brackets_quotient() {
        let a = Dyadic::one();
        let b = d(3, 0);
        let lo = a.div_rounded(&b, 30, Rounding::Floor).unwrap();
        let hi = a.div_rounded(&b, 30, Rounding::Ceil).unwrap();
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert_eq!(lo.cmp_rational(&third), Ordering::Less);
        assert_eq!(hi.cmp_rational(&third), Ordering::Greater);
        // Tight: within 2^-30 relative.
        assert!(hi.sub_exact(&lo) < Dyadic::pow2(-30));
        assert!(a.div_rounded(&Dyadic::zero(), 8, Rounding::Floor).is_err());
    }

    #[test]
    fn sqrt_rounded_brackets_root() {
        let two = d(2, 0);
        let lo = two.sqrt_rounded(40, Rounding::Floor).unwrap();
        let hi = two.sqrt_rounded(40, Rounding::Ceil).unwrap();
        assert!(lo.mul_exact(&lo) < two);
        assert!(hi.mul_exact(&hi) > two);
        assert!(hi.sub_exact(&lo) < Dyadic::pow2(-38));
        // Exact square stays exact.
        let nine = d(9, 0);
        assert_eq!(nine.sqrt_rounded(10, Rounding::Floor).unwrap(), d(3, 0));
        assert_eq!(nine.sqrt_rounded(10, Rounding::Ceil).unwrap(), d(3, 0));
        assert!(d(-1, 0).sqrt_rounded(8, Rounding::Floor).is_err());
    }

    #[test]
    fn ordering() {
        assert!(d(1, -1) < Dyadic::one());
        assert!(d(-3, 10) < d(1, -10));
        assert!(d(5, 2) > d(5, 1));
        assert_eq!(d(4, 1).cmp(&d(1, 3)), Ordering::Equal);
    }

    #[test]
    fn f64_roundtrip_exact() {
        for x in [0.5, -1.75, 3.0, 0.1, -1e300, 2e-308] {
            let dy = Dyadic::from_f64(x).unwrap();
            assert_eq!(dy.to_f64(), x);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn decimal_rendering_directed() {
        let third_lo = Dyadic::one()
            .div_rounded(&d(3, 0), 80, Rounding::Floor)
            .unwrap();
        let s = third_lo.to_decimal(10, Rounding::Floor);
        assert_eq!(s, "0.3333333333");
        let s_up = third_lo.to_decimal(10, Rounding::Ceil);
        assert_eq!(s_up, "0.3333333334");
        assert_eq!(d(1, 0).to_decimal(3, Rounding::Floor), "1.00");
        assert_eq!(d(-7, -3).to_decimal(4, Rounding::Floor), "-0.8750");
        // Scientific for tiny magnitudes.
        let tiny = Dyadic::pow2(-120);
        let t = tiny.to_decimal(6, Rounding::Floor);
        assert!(t.contains('e'), "{t}");
        // Large integers render exactly.
        assert_eq!(d(1, 20).to_decimal(8, Rounding::Floor), "1048576.0");
    }

    #[test]
    fn decimal_rendering_is_containment_true() {
        // printed(Floor) <= x <= printed(Ceil) for assorted values.
        for (m, e) in [(7i64, -6i64), (-7, -6), (123456789, -17), (-5, 40), (3, 100)] {
            let x = d(m, e);
            for sig in [1usize, 3, 10, 25] {
                let lo = parse_decimal(&x.to_decimal(sig, Rounding::Floor)).unwrap();
                let hi = parse_decimal(&x.to_decimal(sig, Rounding::Ceil)).unwrap();
                assert_ne!(x.cmp_rational(&lo), Ordering::Less, "sig={sig} x={x:?}");
                assert_ne!(x.cmp_rational(&hi), Ordering::Greater, "sig={sig} x={x:?}");
            }
        }
    }

    #[test]
    fn parse_decimal_forms() {
        let cases = [
            ("0.5", BigRational::new(BigInt::one(), BigInt::from(2))),
            ("-12.25", BigRational::new(BigInt::from(-49), BigInt::from(4))),
            ("1e-2", BigRational::new(BigInt::one(), BigInt::from(100))),
            ("3E2", BigRational::new(BigInt::from(300), BigInt::one())),
            (
                "0.428844044",
                BigRational::new(BigInt::from(428844044u64), BigInt::from(1_000_000_000u64)),
            ),
        ];
        for (s, want) in cases {
            assert_eq!(parse_decimal(s).unwrap(), want, "{s}");
        }
        for bad in ["", "abc", "1.2.3", "1e", "--5"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }
}
