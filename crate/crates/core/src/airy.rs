//! Complex Airy function `Ai` and its derivative at double precision.
//!
//! `|z| ≤ 8`: Maclaurin series summed in 160-bit binary floating point (the
//! terms reach `e^{(2/3)|z|^{3/2}}` while `Ai` can be as small as its inverse).
//! `|z| > 8`, `|arg z| ≤ 2π/3`: the large-argument expansion.
//! `|z| > 8`, `|arg z| > 2π/3`: `Ai(z) = -ω Ai(ωz) - ω² Ai(ω²z)`, `ω = e^{2πi/3}`.

use std::f64::consts::PI;

use dashu_int::IBig;
use num_complex::Complex64;

use crate::bigmath::{self, Float};

type C64 = Complex64;

const SERIES_RADIUS: f64 = 8.0;
const SERIES_BITS: usize = 160;

/// `Ai(0)` and `-Ai′(0)` to 60 digits.
const AI0: &str = "0.355028053887817239260063186004183176397979174199177240583327";
const MAI0P: &str = "0.258819403792806798405183560189203963479091138354934582210002";

#[derive(Clone)]
struct Cf {
    re: Float,
    im: Float,
}

impl Cf {
    fn from_c64(z: C64, prec: usize) -> Self {
        let conv = |v: f64| {
            Float::try_from(v)
                .expect("finite input")
                .with_precision(prec)
                .value()
        };
        Cf { re: conv(z.re), im: conv(z.im) }
    }

    fn mul(&self, o: &Cf) -> Cf {
        Cf {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add(&self, o: &Cf) -> Cf {
        Cf { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn scale(&self, f: &Float) -> Cf {
        Cf { re: &self.re * f, im: &self.im * f }
    }

    fn div_int(&self, d: u64, prec: usize) -> Cf {
        let d = bigmath::int_to_float(IBig::from(d), prec);
        Cf { re: &self.re / &d, im: &self.im / &d }
    }

    fn to_c64(&self) -> C64 {
        C64::new(bigmath::to_f64(&self.re), bigmath::to_f64(&self.im))
    }

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
}

fn parse_const(s: &str, prec: usize) -> Float {
    let d: dashu_float::DBig = s.parse().expect("valid constant");
    d.with_base_and_precision::<2>(prec).value().with_rounding()
}

/// Maclaurin series for `(Ai(z), Ai′(z))`.
fn series(z: C64) -> (C64, C64) {
    let p = SERIES_BITS;
    let c1 = parse_const(AI0, p);
    let c2 = parse_const(MAI0P, p);
    let zc = Cf::from_c64(z, p);
    let z2 = zc.mul(&zc);
    let z3 = z2.mul(&zc);
    let zero = Float::ZERO.with_precision(p).value();
    let one = Cf { re: Float::ONE.with_precision(p).value(), im: zero.clone() };

    // f = Σ z^{3k}/…, g = Σ z^{3k+1}/…, and their derivatives
    let mut tf = one.clone();
    let mut tg = zc.clone();
    let mut tfp = z2.div_int(2, p);
    let mut tgp = one.clone();
    let (mut f, mut g, mut fp, mut gp) = (tf.clone(), tg.clone(), tfp.clone(), tgp.clone());
    let mut k: u64 = 1;
    loop {
        tf = tf.mul(&z3).div_int((3 * k - 1) * (3 * k), p);
        tg = tg.mul(&z3).div_int((3 * k) * (3 * k + 1), p);
        tgp = tgp.mul(&z3).div_int((3 * k - 2) * (3 * k), p);
        if k >= 2 {
            tfp = tfp.mul(&z3).div_int((3 * k - 3) * (3 * k - 1), p);
            fp = fp.add(&tfp);
        }
        f = f.add(&tf);
        g = g.add(&tg);
        gp = gp.add(&tgp);
        let small = 1e-45;
        if k > 3
            && tf.abs_f64() < small * f.abs_f64().max(1.0)
            && tg.abs_f64() < small * g.abs_f64().max(1.0)
            && tfp.abs_f64() < small * fp.abs_f64().max(1.0)
        {
            break;
        }
        k += 1;
        if k > 400 {
            break;
        }
    }
    let ai = f.scale(&c1).add(&g.scale(&(-c2.clone())));
    let aip = fp.scale(&c1).add(&gp.scale(&(-c2)));
    (ai.to_c64(), aip.to_c64())
}

/// Large-|z| expansion, valid for `|arg z| < π`, used for `|arg z| ≤ 2π/3`.
fn asymptotic(z: C64) -> (C64, C64) {
    let xi = 2.0 / 3.0 * z.powf(1.5);
    let z14 = z.powf(0.25);
    let pref = (-xi).exp() / (2.0 * PI.sqrt());
    let mut u = 1.0f64;
    let mut su = C64::new(1.0, 0.0);
    let mut sv = C64::new(1.0, 0.0);
    let mut xik = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        xik *= -xi;
        let tu = u / xik;
        let tv = v / xik;
        let mag = tu.norm().max(tv.norm());
        if mag > last {
            break;
        }
        su += tu;
        sv += tv;
        last = mag;
        if mag < 1e-17 {
            break;
        }
    }
    (pref / z14 * su, -pref * z14 * sv)
}

/// `(Ai(z), Ai′(z))`.
pub fn airy(z: C64) -> (C64, C64) {
    if z.norm() <= SERIES_RADIUS {
        return series(z);
    }
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        return asymptotic(z);
    }
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let w2 = w * w;
    let (a1, d1) = airy(w * z);
    let (a2, d2) = airy(w2 * z);
    (-w * a1 - w2 * a2, -w2 * d1 - w * d2)
}

pub fn ai(z: C64) -> C64 {
    airy(z).0
}

pub fn ai_prime(z: C64) -> C64 {
    airy(z).1
}
