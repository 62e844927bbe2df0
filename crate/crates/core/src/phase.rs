//! Free energy near the line `Δ = -1` between the disordered (D) and
//! antiferroelectric (AF) phases, in the coordinates
//! `a/c = (1-x)/2 + y`, `b/c = (1+x)/2 + y`.
//!
//! D (`y > 0`): `a = sin(γ-t)`, `b = sin(γ+t)`, `c = sin 2γ`, `sin t = x sin γ`.
//! AF (`y < 0`): the same with `sinh`, `sinh t = x sinh γ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::ThetaEvaluator;

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    D,
    AF,
    #[serde(rename = "critical")]
    Critical,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::D => "D",
            Phase::AF => "AF",
            Phase::Critical => "critical",
        })
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("|x| must be < 1, got {x}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub a_over_c: f64,
    pub b_over_c: f64,
    pub delta: f64,
    pub phase: Phase,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        check_x(x)?;
        let (a, b) = ((1.0 - x) / 2.0 + y, (1.0 + x) / 2.0 + y);
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Domain(format!(
                "weights not positive at (x, y) = ({x}, {y})"
            )));
        }
        let delta = (a * a + b * b - 1.0) / (2.0 * a * b);
        let phase = if y > 0.0 {
            Phase::D
        } else if y < 0.0 {
            Phase::AF
        } else {
            Phase::Critical
        };
        Ok(Self { x, y, a_over_c: a, b_over_c: b, delta, phase })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaT {
    pub gamma: f64,
    pub t: f64,
    pub phase: Phase,
}

fn outside(x: f64, y: f64) -> Error {
    Error::Domain(format!("({x}, {y}) outside parameterization neighborhood"))
}

/// `(x, y) ↦ (γ, t)`; `y = 0` maps to the limit point `(0, 0)`.
pub fn coords_to_gamma_t(x: f64, y: f64) -> Result<GammaT> {
    let p = PhasePoint::new(x, y).map_err(|_| outside(x, y))?;
    let den = (1.0 + 2.0 * y).powi(2) - x * x;
    match p.phase {
        Phase::Critical => Ok(GammaT { gamma: 0.0, t: 0.0, phase: Phase::Critical }),
        Phase::D => {
            let s = 2.0 * (y * (1.0 + y) / den).sqrt();
            if !(s <= 1.0) {
                return Err(outside(x, y));
            }
            let gamma = s.asin();
            Ok(GammaT { gamma, t: (x * s).asin(), phase: Phase::D })
        }
        Phase::AF => {
            let r = -y * (1.0 + y) / den;
            if !(r > 0.0) || den <= 0.0 {
                return Err(outside(x, y));
            }
            let s = 2.0 * r.sqrt();
            Ok(GammaT { gamma: s.asinh(), t: (x * s).asinh(), phase: Phase::AF })
        }
    }
}

/// Weights `(a, b, c)` of the parameterization.
pub fn weights(gt: &GammaT) -> (f64, f64, f64) {
    let (g, t) = (gt.gamma, gt.t);
    match gt.phase {
        Phase::D => ((g - t).sin(), (g + t).sin(), (2.0 * g).sin()),
        Phase::AF => ((g - t).sinh(), (g + t).sinh(), (2.0 * g).sinh()),
        Phase::Critical => (1.0, 1.0, 2.0),
    }
}

/// `(γ, t) ↦ (x, y)` through the weight ratios.
pub fn gamma_t_to_coords(gt: &GammaT) -> (f64, f64) {
    let (a, b, c) = weights(gt);
    let (ac, bc) = (a / c, b / c);
    let x = bc - ac;
    (x, ac - (1.0 - x) / 2.0)
}

/// `f_D(x, k) = arcsin(2k √((1+k²)/((1+2k²)² - x²)))` on complex `k`.
pub fn f_d(x: f64, k: C64) -> C64 {
    let k2 = k * k;
    let one = C64::new(1.0, 0.0);
    (2.0 * k * ((one + k2) / ((one + 2.0 * k2).powi(2) - x * x)).sqrt()).asin()
}

/// `f_AF(x, k) = arcsinh(2k √((1-k²)/((1-2k²)² - x²)))` on complex `k`.
pub fn f_af(x: f64, k: C64) -> C64 {
    let k2 = k * k;
    let one = C64::new(1.0, 0.0);
    (2.0 * k * ((one - k2) / ((one - 2.0 * k2).powi(2) - x * x)).sqrt()).asinh()
}

/// `t = arcsin(x sin f_D)`.
pub fn g_d(x: f64, k: C64) -> C64 {
    (x * f_d(x, k).sin()).asin()
}

/// `t = arcsinh(x sinh f_AF)`.
pub fn g_af(x: f64, k: C64) -> C64 {
    (x * f_af(x, k).sinh()).asinh()
}

/// `πab / (2γc cos(πt/(2γ)))` in either parameterization.
pub fn free_energy_gamma_t(gt: &GammaT) -> f64 {
    let (a, b, c) = weights(gt);
    PI * a * b / (2.0 * gt.gamma * c * (PI * gt.t / (2.0 * gt.gamma)).cos())
}

#[allow(non_snake_case)]
/// Critical-line value `π(1-x²)/(4 cos(πx/2))`.
pub fn free_energy_C(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(PI * (1.0 - x * x) / (4.0 * (PI * x / 2.0).cos()))
}

#[allow(non_snake_case)]
pub fn free_energy_D(x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("D phase needs y > 0, got {y}")));
    }
    Ok(free_energy_gamma_t(&coords_to_gamma_t(x, y)?))
}

#[allow(non_snake_case)]
pub fn free_energy_AF_reg(x: f64, y: f64) -> Result<f64> {
    if !(y < 0.0) {
        return Err(Error::Domain(format!("AF phase needs y < 0, got {y}")));
    }
    Ok(free_energy_gamma_t(&coords_to_gamma_t(x, y)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPart {
    pub value: f64,
    pub q: f64,
    /// `q²` below the smallest normal double; `value` is then exactly 0.
    pub underflow: bool,
}

/// `πab/(2γc)·(θ₁′(0)/θ₁(ω) - 1/cos(πt/(2γ)))`, `q = e^{-π²/(2γ)}`, `ω = (π/2)(1 + t/γ)`.
#[allow(non_snake_case)]
pub fn free_energy_AF_sing_gamma_t(gamma: f64, t: f64) -> Result<SingularPart> {
    if !(gamma > 0.0 && t.abs() < gamma) {
        return Err(Error::Domain(format!("need 0 ≤ |t| < γ, got γ = {gamma}, t = {t}")));
    }
    let q = (-PI * PI / (2.0 * gamma)).exp();
    if q * q < f64::MIN_POSITIVE {
        return Ok(SingularPart { value: 0.0, q, underflow: true });
    }
    let gt = GammaT { gamma, t, phase: Phase::AF };
    let (a, b, c) = weights(&gt);
    let omega = PI / 2.0 * (1.0 + t / gamma);
    let excess = ThetaEvaluator::new(q)?.ratio_excess(omega);
    Ok(SingularPart { value: PI * a * b / (2.0 * gamma * c) * excess, q, underflow: false })
}

#[allow(non_snake_case)]
pub fn free_energy_AF_sing(x: f64, y: f64) -> Result<SingularPart> {
    if !(y < 0.0) {
        return Err(Error::Domain(format!("AF phase needs y < 0, got {y}")));
    }
    let gt = coords_to_gamma_t(x, y)?;
    free_energy_AF_sing_gamma_t(gt.gamma, gt.t)
}

/// Full AF free energy `F_reg + F_sing`.
#[allow(non_snake_case)]
pub fn free_energy_AF(x: f64, y: f64) -> Result<f64> {
    Ok(free_energy_AF_reg(x, y)? + free_energy_AF_sing(x, y)?.value)
}

/// Riemann `ζ(3/2)`.
pub const ZETA_3_2: f64 = 2.612_375_348_685_488_3;

/// Ferroelectric-phase constants `(C, G, F)` for `Z_N ≈ C F^{N²} G^N`,
/// weights `a = sinh(t-γ)`, `b = sinh(t+γ)`, `c = sinh 2γ`. Evaluator only.
pub fn ferroelectric_constants(gamma: f64, t: f64) -> Result<(f64, f64, f64)> {
    if !(gamma != 0.0 && gamma.abs() < t) {
        return Err(Error::Domain(format!("need 0 < |γ| < t, got γ = {gamma}, t = {t}")));
    }
    Ok((1.0 - (-4.0 * gamma).exp(), (gamma - t).exp(), (gamma + t).sinh()))
}

/// F-D line `a = (t-1)/2`, `b = (t+1)/2`, `c = 1`: `(F, G)` in
/// `Z_N ≈ C F^{N²} G^{√N} N^{1/4}`. Evaluator only.
pub fn fd_line_constants(t: f64) -> Result<(f64, f64)> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("need t > 1, got {t}")));
    }
    Ok(((t + 1.0) / 2.0, (-ZETA_3_2 * ((t - 1.0) / (2.0 * PI)).sqrt()).exp()))
}

/// Zeroth Taylor coefficient in `y`.
pub fn f0_closed(x: f64) -> f64 {
    PI * (1.0 - x * x) / (4.0 * (PI * x / 2.0).cos())
}

/// Reference closed form for the first Taylor coefficient, with `8 cos(πx/2)`.
pub fn f1_published(x: f64) -> f64 {
    f1_with(x, 8.0)
}

/// First Taylor coefficient obtained by expanding the coordinate change:
/// identical except `4 cos(πx/2)`.
pub fn f1_derived(x: f64) -> f64 {
    f1_with(x, 4.0)
}

fn f1_with(x: f64, k: f64) -> f64 {
    let (s, c) = (PI * x / 2.0).sin_cos();
    PI * (PI * x.powi(3) * s - PI * x * s + k * c) / (12.0 * c * c)
}

/// Least-squares polynomial coefficients (ascending) via Householder QR.
pub fn polyfit(u: &[f64], v: &[f64], degree: usize) -> Result<Vec<f64>> {
    let m = u.len();
    let n = degree + 1;
    if m < n {
        return Err(Error::Fit(format!("{m} points for degree {degree}")));
    }
    let mut a: Vec<Vec<f64>> = u.iter().map(|&x| (0..n).map(|j| x.powi(j as i32)).collect()).collect();
    let mut b = v.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Fit("rank deficient design".into()));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut w: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        w[0] -= alpha;
        let wn = w.iter().map(|x| x * x).sum::<f64>();
        for j in k..n {
            let d = (k..m).map(|i| w[i - k] * a[i][j]).sum::<f64>() * 2.0 / wn;
            for i in k..m {
                a[i][j] -= d * w[i - k];
            }
        }
        let d = (k..m).map(|i| w[i - k] * b[i]).sum::<f64>() * 2.0 / wn;
        for i in k..m {
            b[i] -= d * w[i - k];
        }
    }
    let mut c = vec![0.0; n];
    for k in (0..n).rev() {
        let s = b[k] - ((k + 1)..n).map(|j| a[k][j] * c[j]).sum::<f64>();
        if a[k][k].abs() < 1e-300 {
            return Err(Error::Fit("singular triangular factor".into()));
        }
        c[k] = s / a[k][k];
    }
    Ok(c)
}

pub const STENCIL_STEP: f64 = 1e-3;
pub const STENCIL_POINTS: usize = 8;
pub const FIT_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorMatch {
    pub x: f64,
    /// Joint fit through both sides, ascending powers of `y`.
    pub coefficients: Vec<f64>,
    pub d_side: Vec<f64>,
    pub af_side: Vec<f64>,
    pub f0_fit: f64,
    pub f1_fit: f64,
    pub f0_closed: f64,
    pub f1_published: f64,
    pub f1_derived: f64,
    pub f0_error: f64,
    pub f1_error_published: f64,
    pub f1_error_derived: f64,
    /// `max |D-side - AF-side|` over the constant and linear coefficients.
    pub side_gap: f64,
}

/// Fit `F_D` (y > 0) and `F_AF^reg` (y < 0) on a symmetric stencil around `y = 0`.
pub fn taylor_match(x: f64) -> Result<TaylorMatch> {
    if !(x.abs() <= 0.9) {
        return Err(Error::Domain(format!("|x| must be ≤ 0.9, got {x}")));
    }
    let mut points = STENCIL_POINTS;
    loop {
        match taylor_match_with(x, STENCIL_STEP, points) {
            Err(Error::Fit(_)) if points > FIT_DEGREE + 2 => points -= 1,
            r => return r,
        }
    }
}

fn taylor_match_with(x: f64, step: f64, points: usize) -> Result<TaylorMatch> {
    let mut up = Vec::with_capacity(points);
    let mut down = Vec::with_capacity(points);
    for j in 1..=points {
        let y = step * j as f64;
        up.push((j as f64, free_energy_D(x, y)?));
        down.push((-(j as f64), free_energy_AF_reg(x, -y)?));
    }
    let unscale = |c: Vec<f64>| -> Vec<f64> {
        c.into_iter().enumerate().map(|(k, v)| v / step.powi(k as i32)).collect()
    };
    let fit = |pts: &[(f64, f64)]| -> Result<Vec<f64>> {
        let (u, v): (Vec<f64>, Vec<f64>) = pts.iter().cloned().unzip();
        Ok(unscale(polyfit(&u, &v, FIT_DEGREE)?))
    };
    let both: Vec<(f64, f64)> = up.iter().chain(down.iter()).cloned().collect();
    let coefficients = fit(&both)?;
    let d_side = fit(&up)?;
    let af_side = fit(&down)?;
    let side_gap = (0..2).map(|k| (d_side[k] - af_side[k]).abs()).fold(0.0, f64::max);
    let (f0, f1) = (coefficients[0], coefficients[1]);
    let (c0, p1, d1) = (f0_closed(x), f1_published(x), f1_derived(x));
    Ok(TaylorMatch {
        x,
        f0_fit: f0,
        f1_fit: f1,
        f0_closed: c0,
        f1_published: p1,
        f1_derived: d1,
        f0_error: (f0 - c0).abs(),
        f1_error_published: (f1 - p1).abs(),
        f1_error_derived: (f1 - d1).abs(),
        side_gap,
        coefficients,
        d_side,
        af_side,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub x: f64,
    pub y: f64,
    pub gamma: f64,
    pub t: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_reg")]
    pub f_reg: f64,
    #[serde(rename = "F_sing")]
    pub f_sing: f64,
    pub phase: Phase,
}

pub fn phase_row(x: f64, y: f64) -> Result<PhaseRow> {
    let p = PhasePoint::new(x, y)?;
    let gt = coords_to_gamma_t(x, y)?;
    let (f, f_reg, f_sing) = match p.phase {
        Phase::Critical => {
            let f = free_energy_C(x)?;
            (f, f, 0.0)
        }
        Phase::D => {
            let f = free_energy_D(x, y)?;
            (f, f, 0.0)
        }
        Phase::AF => {
            let r = free_energy_AF_reg(x, y)?;
            let s = free_energy_AF_sing(x, y)?.value;
            (r + s, r, s)
        }
    };
    Ok(PhaseRow { x, y, gamma: gt.gamma, t: gt.t, delta: p.delta, f, f_reg, f_sing, phase: p.phase })
}

/// Rows for every `(x, y)` pair, in input order.
pub fn phase_scan(points: &[(f64, f64)]) -> Result<Vec<PhaseRow>> {
    points.par_iter().map(|&(x, y)| phase_row(x, y)).collect()
}

pub fn write_phase_csv<W: std::io::Write>(rows: &[PhaseRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}
