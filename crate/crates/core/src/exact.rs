//! Small helpers around `BigInt`/`BigRational` shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(x: i64) -> Int {
    BigInt::from(x)
}

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(x: &Int) -> Rat {
    BigRational::from_integer(x.clone())
}

/// Renders a rational as `num/den`, always with an explicit (positive) denominator.
pub fn format_rational(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Inverse of [`format_rational`]; also accepts a bare integer.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::contract(format!("malformed rational {s:?}, expected \"num/den\""));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::contract(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

pub fn ceil_div(a: &Int, b: &Int) -> Int {
    -((-a).div_floor(b))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &Int) -> Int {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

pub fn is_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn floor_rat(q: &Rat) -> Int {
    q.floor().to_integer()
}

pub fn ceil_rat(q: &Rat) -> Int {
    q.ceil().to_integer()
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn is_one(x: &Int) -> bool {
    x.is_one()
}
