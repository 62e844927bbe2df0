//! Arbitrary-precision helpers on top of `dashu`.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

/// Binary floating point with round-half-even.
pub type Float = FBig<HalfEven, 2>;

pub fn int_to_float(i: IBig, prec: usize) -> Float {
    Float::from(i).with_precision(prec).value()
}

pub fn uint_to_float(u: UBig, prec: usize) -> Float {
    Float::from(u).with_precision(prec).value()
}

/// Correctly-rounded-ish conversion (one rounding per operand plus the division).
pub fn rational_to_float(r: &RBig, prec: usize) -> Float {
    let n = int_to_float(r.numerator().clone(), prec + 8);
    let d = uint_to_float(r.denominator().clone(), prec + 8);
    (n / d).with_precision(prec).value()
}

/// Natural log of a positive rational.
pub fn ln_rational(r: &RBig, prec: usize) -> Float {
    rational_to_float(r, prec + 16).ln().with_precision(prec).value()
}

pub fn factorial(n: usize) -> IBig {
    (1..=n as u64).fold(IBig::ONE, |acc, k| acc * IBig::from(k))
}

/// `ln(n!)` at the given precision.
pub fn ln_factorial(n: usize, prec: usize) -> Float {
    if n < 2 {
        return Float::ZERO.with_precision(prec).value();
    }
    int_to_float(factorial(n), prec + 16).ln().with_precision(prec).value()
}

pub fn pi(prec: usize) -> Float {
    Float::pi(prec)
}

pub fn to_f64(f: &Float) -> f64 {
    f.to_f64().value()
}

/// Fixed number of significant decimal digits for a float.
pub fn float_to_decimal(f: &Float, digits: usize) -> String {
    let d = f.to_decimal().value();
    d.with_precision(digits.max(1)).value().to_string()
}

/// Ten to an integer power, as a big integer.
fn pow10(e: usize) -> UBig {
    UBig::from(10u8).pow(e)
}

/// Scientific rendering `d.ddd…e±E` of an exact rational with `digits`
/// significant digits (round half away from zero).
pub fn rational_to_sci(r: &RBig, digits: usize) -> String {
    let digits = digits.max(1);
    let num = r.numerator();
    if *num == IBig::ZERO {
        return "0".to_string();
    }
    let neg = *num < IBig::ZERO;
    let a = num.unsigned_abs();
    let b = r.denominator().clone();
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    // scaled = round(a/b * 10^(digits-1-e))
    let scaled = |e: i64| -> UBig {
        let shift = digits as i64 - 1 - e;
        let (n, d) = if shift >= 0 {
            (&a * pow10(shift as usize), b.clone())
        } else {
            (a.clone(), &b * pow10((-shift) as usize))
        };
        (n * UBig::from(2u8) + &d) / (d * UBig::from(2u8))
    };
    let lo = pow10(digits - 1);
    let hi = pow10(digits);
    let mut s = scaled(e);
    for _ in 0..4 {
        if s >= hi {
            e += 1;
        } else if s < lo {
            e -= 1;
        } else {
            break;
        }
        s = scaled(e);
    }
    // rounding can carry into an extra digit
    if s >= hi {
        e += 1;
        s = scaled(e);
    }
    let ds = s.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&ds[..1]);
    if ds.len() > 1 {
        out.push('.');
        out.push_str(&ds[1..]);
    }
    out.push_str(&format!("e{e}"));
    out
}
