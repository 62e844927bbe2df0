//! Equilibrium measure for the potential `V(s) = |s| - x s`.
//!
//! Support `[α, β]` with `α = -π tan(π(1-x)/4)`, `β = π tan(π(1+x)/4)`,
//! log-singular density at the origin, and the g-function
//! `g(z) = ∫ ln(z - s) dμ(s)` in closed form. All branches are principal;
//! boundary values on cuts come from offsets of ±1e-30 in the imaginary part.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::tanh_sinh;

pub type C64 = Complex64;

/// Imaginary offset used for boundary values.
pub const CUT_OFFSET: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Limit from the upper half plane.
    Plus,
    /// Limit from the lower half plane.
    Minus,
}

impl Side {
    fn offset(self) -> f64 {
        match self {
            Side::Plus => CUT_OFFSET,
            Side::Minus => -CUT_OFFSET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportEndpoints {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
}

fn check_x(x: f64) -> Result<()> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("|x| must be < 1, got {x}")));
    }
    Ok(())
}

pub fn endpoints(x: f64) -> Result<SupportEndpoints> {
    check_x(x)?;
    Ok(SupportEndpoints {
        x,
        alpha: -PI * (PI * (1.0 - x) / 4.0).tan(),
        beta: PI * (PI * (1.0 + x) / 4.0).tan(),
    })
}

fn csqrt(z: C64) -> C64 {
    z.sqrt()
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Closed-form equilibrium data at a fixed `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Lagrange multiplier `l = 2 ln(β-α) - 2(1 + 2 ln 2)`.
    pub l: f64,
}

impl Equilibrium {
    pub fn new(x: f64) -> Result<Self> {
        let e = endpoints(x)?;
        let l = 2.0 * (e.beta - e.alpha).ln() - 2.0 * (1.0 + 2.0 * 2f64.ln());
        Ok(Self { x, alpha: e.alpha, beta: e.beta, l })
    }

    pub fn endpoints(&self) -> SupportEndpoints {
        SupportEndpoints { x: self.x, alpha: self.alpha, beta: self.beta }
    }

    /// Density `ρ(z)` on `[α, β]`, zero at the endpoints.
    pub fn density(&self, z: f64) -> Result<f64> {
        let (a, b) = (self.alpha, self.beta);
        if !(a..=b).contains(&z) {
            return Err(Error::Domain(format!("z = {z} outside the support [{a}, {b}]")));
        }
        if z == 0.0 {
            return Err(Error::Singular);
        }
        let num = (b * (z - a)).max(0.0).sqrt() + (-a * (b - z)).max(0.0).sqrt();
        let den = (z.abs() * (b - a)).sqrt();
        Ok(2.0 / (PI * PI) * (num / den).ln().max(0.0))
    }

    /// `∫ρ` over the support, split at the origin.
    pub fn density_normalization(&self, tol: f64) -> Result<f64> {
        let f = |s: f64| self.density(s).unwrap_or(0.0);
        let left = tanh_sinh(f, self.alpha, 0.0, tol)?;
        let right = tanh_sinh(f, 0.0, self.beta, tol)?;
        Ok(left.value + right.value)
    }

    /// `∫_a^b ρ` for `α ≤ a ≤ b ≤ β`, split at 0 when needed.
    pub fn density_integral(&self, a: f64, b: f64, tol: f64) -> Result<f64> {
        let f = |s: f64| self.density(s).unwrap_or(0.0);
        if a < 0.0 && b > 0.0 {
            Ok(tanh_sinh(f, a, 0.0, tol)?.value + tanh_sinh(f, 0.0, b, tol)?.value)
        } else {
            Ok(tanh_sinh(f, a, b, tol)?.value)
        }
    }

    fn g_prime_raw(&self, z: C64) -> C64 {
        let (a, b) = (self.alpha, self.beta);
        let i = C64::i();
        let num = csqrt(re(b)) * csqrt(z - a) - i * csqrt(re(-a)) * csqrt(z - b);
        let den = csqrt(z) * csqrt(re(b - a));
        re((1.0 - self.x) / 2.0) + 2.0 / (PI * i) * (num / den).ln()
    }

    fn g_raw(&self, z: C64) -> C64 {
        let (a, b) = (self.alpha, self.beta);
        z * self.g_prime_raw(z) + 2.0 * (csqrt(z - a) + csqrt(z - b)).ln()
            - (1.0 + 2.0 * 2f64.ln())
    }

    /// `g(z)` off the cut `(-∞, β]`.
    pub fn g(&self, z: C64) -> Result<C64> {
        if z.im == 0.0 && z.re <= self.beta {
            return Err(Error::OnCut(format!("{z}")));
        }
        Ok(self.g_raw(z))
    }

    /// `g(z)` with principal branches everywhere, no cut check.
    pub(crate) fn g_unchecked(&self, z: C64) -> C64 {
        self.g_raw(z)
    }

    /// `g₊(t)` or `g₋(t)` for real `t`.
    pub fn g_boundary(&self, t: f64, side: Side) -> C64 {
        self.g_raw(C64::new(t, side.offset()))
    }

    /// `g′(z)` off `[α, β]`.
    pub fn g_prime(&self, z: C64) -> Result<C64> {
        if z.im == 0.0 && (self.alpha..=self.beta).contains(&z.re) {
            return Err(Error::OnCut(format!("{z}")));
        }
        Ok(self.g_prime_raw(z))
    }

    pub fn g_prime_boundary(&self, t: f64, side: Side) -> C64 {
        self.g_prime_raw(C64::new(t, side.offset()))
    }

    /// `V(s) = |s| - x s` on the real line.
    pub fn potential(&self, s: f64) -> f64 {
        s.abs() - self.x * s
    }

    /// Analytic continuation of `V` from either half line:
    /// `z(1-x)` for `Re z > 0`, `-z(1+x)` for `Re z < 0`.
    pub fn potential_c(&self, z: C64) -> C64 {
        if z.re >= 0.0 {
            z * (1.0 - self.x)
        } else {
            -z * (1.0 + self.x)
        }
    }

    /// `G(z) = 2g(z) - V(z) - l` above the real axis and `-(2g - V - l)` below;
    /// on the real axis the upper boundary value is used.
    pub fn big_g(&self, z: C64) -> C64 {
        if z.im < 0.0 {
            -(2.0 * self.g_raw(z) - self.potential_c(z) - self.l)
        } else {
            let zz = if z.im == 0.0 { C64::new(z.re, CUT_OFFSET) } else { z };
            2.0 * self.g_raw(zz) - self.potential_c(zz) - self.l
        }
    }

    /// `|G₊(z) - 2πi ∫_z^β ρ|` for real `z` in `[α, β]`.
    pub fn big_g_vs_integral(&self, z: f64, tol: f64) -> Result<f64> {
        if !(self.alpha..=self.beta).contains(&z) {
            return Err(Error::Domain(format!("z = {z} outside the support")));
        }
        let integral = self.density_integral(z, self.beta, tol)?;
        let want = C64::new(0.0, 2.0 * PI * integral);
        Ok((self.big_g(re(z)) - want).norm())
    }

    /// `h₁..h₄` at `y` (the vertical-segment exponents near the origin).
    pub fn aux_h(&self, y: f64) -> [C64; 4] {
        let (a, b) = (self.alpha, self.beta);
        let i = C64::i();
        let iy = i * y;
        let sba = (b - a).sqrt();
        let h1 = 4.0 / PI * ((csqrt(b * (iy - a)) + csqrt(-a * (b - iy))) / sba).ln();
        let h2 = 4.0 * ((csqrt(iy - a) + i * csqrt(b - iy)) / sba).ln();
        let h3 = 4.0 / PI * ((csqrt(b * (-iy - a)) + csqrt(-a * (b + iy))) / sba).ln();
        let h4 = -4.0 * ((csqrt(-iy - a) + i * csqrt(b + iy)) / sba).ln();
        [h1, h2, h3, h4]
    }

    /// Jump exponent `f₁` on the upper vertical segment.
    pub fn aux_f1(&self, z: C64) -> C64 {
        let (a, b) = (self.alpha, self.beta);
        let i = C64::i();
        let sba = (b - a).sqrt();
        4.0 * z / (PI * i) * ((csqrt(b * (z - a)) + csqrt(-a * (b - z))) / sba).ln()
            - 4.0 * ((csqrt(z - a) - i * csqrt(b - z)) / sba).ln()
            + z
            - 2.0 * z / (PI * i) * z.ln()
    }

    /// Jump exponent `f₂` on the lower vertical segment.
    pub fn aux_f2(&self, z: C64) -> C64 {
        let (a, b) = (self.alpha, self.beta);
        let i = C64::i();
        let sba = (b - a).sqrt();
        4.0 * (-z) / (PI * i) * ((csqrt(b * (z - a)) + csqrt(-a * (b - z))) / sba).ln()
            + 4.0 * ((csqrt(z - a) - i * csqrt(b - z)) / sba).ln()
            - z
            - 2.0 * (-z) / (PI * i) * (-z).ln()
    }

    pub fn aux_constants(&self) -> AuxConstants {
        let (a, b) = (self.alpha, self.beta);
        let ab = -a * b;
        let h1_0 = 4.0 / PI * (2.0 * ab.sqrt() / (b - a).sqrt()).ln();
        let phase = C64::new((-a).sqrt(), b.sqrt()) / (b - a).sqrt();
        let h2_0 = C64::new(0.0, 4.0 * phase.arg());
        AuxConstants { h1_0, h2_0, h2_prime_0: 2.0 / ab.sqrt(), h4_0: -h2_0 }
    }

    /// Residuals of `g₊ + g₋ - V - l` on and off the support.
    pub fn variational_check(&self, grid_size: usize) -> VariationalReport {
        let (a, b) = (self.alpha, self.beta);
        let guard = 1e-6 * (b - a);
        let lhs = |t: f64| {
            self.g_boundary(t, Side::Plus) + self.g_boundary(t, Side::Minus)
                - self.potential(t)
                - self.l
        };
        let mut eq = 0.0f64;
        for k in 0..grid_size {
            let t = a + (b - a) * (k as f64 + 0.5) / grid_size as f64;
            if (t - a).abs() < guard || t.abs() < guard || (b - t).abs() < guard {
                continue;
            }
            eq = eq.max(lhs(t).norm());
        }
        let mut off = f64::NEG_INFINITY;
        for k in 0..grid_size {
            let s = guard + 5.0 * k as f64 / grid_size as f64;
            for t in [a - s, b + s] {
                off = off.max(lhs(t).re);
            }
        }
        VariationalReport {
            x: self.x,
            grid_size,
            max_equality_residual: eq,
            max_outside_value: off,
            strictly_negative_outside: off < 0.0,
        }
    }

    /// Samples `(z, ρ, Re g₊, Im g₊)` on a uniform interior grid.
    pub fn sample(&self, points: usize) -> Vec<[f64; 4]> {
        let (a, b) = (self.alpha, self.beta);
        (0..points)
            .filter_map(|k| {
                let t = a + (b - a) * (k as f64 + 0.5) / points as f64;
                let rho = self.density(t).ok()?;
                let g = self.g_boundary(t, Side::Plus);
                Some([t, rho, g.re, g.im])
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxConstants {
    pub h1_0: f64,
    pub h2_0: C64,
    pub h2_prime_0: f64,
    pub h4_0: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationalReport {
    pub x: f64,
    pub grid_size: usize,
    pub max_equality_residual: f64,
    pub max_outside_value: f64,
    pub strictly_negative_outside: bool,
}

pub fn density(z: f64, x: f64) -> Result<f64> {
    Equilibrium::new(x)?.density(z)
}

pub fn density_normalization(x: f64) -> Result<f64> {
    Equilibrium::new(x)?.density_normalization(1e-13)
}

pub fn g_eval(z: C64, x: f64) -> Result<C64> {
    Equilibrium::new(x)?.g(z)
}

pub fn g_prime(z: C64, x: f64) -> Result<C64> {
    Equilibrium::new(x)?.g_prime(z)
}

pub fn variational_check(x: f64, grid_size: usize) -> Result<VariationalReport> {
    Ok(Equilibrium::new(x)?.variational_check(grid_size))
}

pub fn aux_h_functions(y: f64, x: f64) -> Result<[C64; 4]> {
    let e = Equilibrium::new(x)?;
    if y.abs() >= e.alpha.abs().min(e.beta) {
        return Err(Error::Domain(format!("|y| = {} too large", y.abs())));
    }
    Ok(e.aux_h(y))
}

pub fn aux_constants(x: f64) -> Result<AuxConstants> {
    Ok(Equilibrium::new(x)?.aux_constants())
}

/// CSV with columns `z, rho, re_g, im_g`.
pub fn write_samples_csv<W: std::io::Write>(e: &Equilibrium, points: usize, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["z", "rho", "re_g", "im_g"])?;
    for [z, rho, gr, gi] in e.sample(points) {
        wr.write_record([z, rho, gr, gi].map(|v| format!("{v:.17e}")))?;
    }
    wr.flush()?;
    Ok(())
}
