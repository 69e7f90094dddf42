//! Ordered fields used by the linear-algebra, simplex and double-description engines.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Field element with a decidable sign.
///
/// Exact types compare exactly; `f64` uses an absolute tolerance.
pub trait Scalar: Clone + Debug + PartialEq + Num + Signed + Send + Sync {
    fn from_int(v: &BigInt) -> Self;
    fn from_ratio(v: &BigRational) -> Self;

    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn is_zero_s(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn cmp_s(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }

    /// Rescale a ray direction to a canonical representative.
    fn normalize_ray(v: &mut [Self]);

    fn to_f64(&self) -> f64;
}

fn bigint_to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("integer does not fit in i64")
}

impl Scalar for BigRational {
    fn from_int(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_ratio(v: &BigRational) -> Self {
        v.clone()
    }

    fn normalize_ray(v: &mut [Self]) {
        let mut den = BigInt::one();
        for x in v.iter() {
            den = den.lcm(x.denom());
        }
        let mut num_gcd = BigInt::zero();
        for x in v.iter() {
            let scaled = x.numer() * (&den / x.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        if num_gcd.is_zero() {
            return;
        }
        for x in v.iter_mut() {
            let scaled = x.numer() * (&den / x.denom());
            *x = BigRational::from_integer(scaled / &num_gcd);
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Rational64 {
    fn from_int(v: &BigInt) -> Self {
        Rational64::from_integer(bigint_to_i64(v))
    }

    fn from_ratio(v: &BigRational) -> Self {
        Rational64::new(bigint_to_i64(v.numer()), bigint_to_i64(v.denom()))
    }

    fn normalize_ray(v: &mut [Self]) {
        let den = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let g = v
            .iter()
            .fold(0i64, |acc, x| acc.gcd(&(x.numer() * (den / x.denom()))));
        if g == 0 {
            return;
        }
        for x in v.iter_mut() {
            *x = Rational64::from_integer(x.numer() * (den / x.denom()) / g);
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Absolute tolerance used by the `f64` instance.
pub const F64_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn from_int(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn from_ratio(v: &BigRational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> Ordering {
        if self.abs() <= F64_TOLERANCE {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn normalize_ray(v: &mut [Self]) {
        let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if m <= F64_TOLERANCE {
            return;
        }
        for x in v.iter_mut() {
            *x /= m;
            if x.abs() <= F64_TOLERANCE {
                *x = 0.0;
            }
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `"num/den"` rendering used by every JSON output.
pub fn rat_string(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Accepts `"a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Integral vector, if every entry has denominator one.
pub fn to_int_vec(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn int_vec_to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Primitive integer vector on the same ray (zero stays zero).
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut w = v.to_vec();
    BigRational::normalize_ray(&mut w);
    w.into_iter().map(|x| x.to_integer()).collect()
}
