//! Model Riemann-Hilbert objects for the edge analysis: the outer solution
//! `M(z)`, the Airy assemblies, the local conformal maps at both support
//! edges, and the parametrices `U` (at β) and `V` (at α).
//!
//! Everything is double precision; the Airy evaluator lives in [`crate::airy`].

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy::airy;
use crate::equilibrium::{Equilibrium, Side, C64};
use crate::error::{Error, Result};

/// 2×2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C64; 2]; 2]);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, cc: f64, d: f64) -> Self {
        Mat2::new(c(a, 0.0), c(b, 0.0), c(cc, 0.0), c(d, 0.0))
    }

    pub fn identity() -> Self {
        Mat2::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), d)
    }

    pub fn sigma3() -> Self {
        Mat2::real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return Err(Error::Singular);
        }
        let m = &self.0;
        Ok(Mat2::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(r)
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        self.sub(&o.scale(c(-1.0, 0.0)))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Which support edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
}

impl std::str::FromStr for Edge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "l" | "alpha" => Ok(Edge::Left),
            "right" | "r" | "beta" => Ok(Edge::Right),
            _ => Err(Error::Parse { input: s.into(), reason: "expected left or right".into() }),
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Edge::Left => "left",
            Edge::Right => "right",
        })
    }
}

/// The outer model solution on `C \ [α, β]`.
#[derive(Clone, Copy, Debug)]
pub struct ModelSolution {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ModelSolution {
    pub fn new(x: f64) -> Result<Self> {
        let e = Equilibrium::new(x)?;
        Ok(Self { x, alpha: e.alpha, beta: e.beta })
    }

    fn on_cut(&self, z: C64) -> bool {
        z.im == 0.0 && z.re >= self.alpha && z.re <= self.beta
    }

    /// `δ(z) = ((z-α)/(z-β))^{1/4}`, tending to 1 at infinity.
    pub fn delta(&self, z: C64, side: Option<Side>) -> Result<C64> {
        if self.on_cut(z) {
            let side = side.ok_or_else(|| Error::OnCut(format!("{z}")))?;
            if z.re == self.alpha || z.re == self.beta {
                return Err(Error::Singular);
            }
            // ratio is negative here; its argument is -π from above, +π from below
            let m = ((z.re - self.alpha) / (self.beta - z.re)).powf(0.25);
            let ph = match side {
                Side::Plus => -PI / 4.0,
                Side::Minus => PI / 4.0,
            };
            return Ok(C64::from_polar(m, ph));
        }
        Ok(((z - self.alpha) / (z - self.beta)).powf(0.25))
    }

    pub fn eval(&self, z: C64, side: Option<Side>) -> Result<Mat2> {
        let d = self.delta(z, side)?;
        Ok(m_from_delta(d))
    }
}

fn m_from_delta(d: C64) -> Mat2 {
    let i = C64::i();
    let (s, t) = ((d + 1.0 / d) * 0.5, (d - 1.0 / d) * 0.5);
    Mat2::new(s, i * t, -i * t, s)
}

#[allow(non_snake_case)]
/// `M(z)`; points on `[α, β]` need a side.
pub fn model_M(z: C64, x: f64, side: Option<Side>) -> Result<Mat2> {
    ModelSolution::new(x)?.eval(z, side)
}

const OMEGA_ARG: f64 = 2.0 * PI / 3.0;

fn omega() -> C64 {
    C64::from_polar(1.0, OMEGA_ARG)
}

fn omega2() -> C64 {
    C64::from_polar(1.0, -OMEGA_ARG)
}

fn e_ipi3() -> C64 {
    C64::from_polar(1.0, PI / 3.0)
}

/// `A₀(ζ)`: first column `(Ai′(ζ), Ai(ζ))`, second column from `Ai(ω²ζ)`.
#[allow(non_snake_case)]
pub fn airy_A0(zeta: C64) -> Mat2 {
    let (a, ap) = airy(zeta);
    let (b, bp) = airy(omega2() * zeta);
    let k = e_ipi3();
    Mat2::new(ap, k * omega2() * bp, a, k * b)
}

/// `det A₀`, a constant by the Wronskian.
pub fn a0_determinant() -> C64 {
    C64::new(0.0, -1.0 / (2.0 * PI))
}

/// Sector-wise `A^RH(ζ)`, written so that every column is the recessive
/// combination in its sector (connection identity applied in closed form).
/// Rays: arg ζ ∈ {0, ±2π/3, π}; the ray π belongs to the upper sector.
#[allow(non_snake_case)]
pub fn airy_ARH(zeta: C64) -> Mat2 {
    let th = zeta.arg();
    let w = omega();
    let w2 = omega2();
    let k = e_ipi3();
    let upper_col = |z: C64| {
        let (b, bp) = airy(w2 * z);
        (k * w2 * bp, k * b)
    };
    let w_col = |z: C64| {
        let (b, bp) = airy(w * z);
        (bp, b)
    };
    if (0.0..=OMEGA_ARG).contains(&th) {
        airy_A0(zeta)
    } else if th > OMEGA_ARG {
        let (bp, b) = w_col(zeta);
        let (u1, u2) = upper_col(zeta);
        Mat2::new(-w2 * bp, u1, -w * b, u2)
    } else if th >= -OMEGA_ARG {
        let (a, ap) = airy(zeta);
        let (bp, b) = w_col(zeta);
        Mat2::new(ap, w2 * bp, a, w * b)
    } else {
        let (bp, b) = w_col(zeta);
        let (u1, u2) = upper_col(zeta);
        Mat2::new(u1, w2 * bp, u2, w * b)
    }
}

/// `Ã^RH(ζ) = -(0 1; 1 0) σ₃ A^RH(e^{-iπ}ζ) σ₃`, with `arg ζ ∈ (0, 2π)`.
#[allow(non_snake_case)]
pub fn airy_ARH_left(zeta: C64) -> Mat2 {
    reflect(&airy_ARH(-zeta))
}

fn reflect(a: &Mat2) -> Mat2 {
    let p = Mat2::real(0.0, -1.0, -1.0, 0.0);
    p.mul(&Mat2::sigma3()).mul(a).mul(&Mat2::sigma3())
}

/// Jump of `A^RH` across the outward ray at angle `theta`:
/// `A₊ = A₋ J` with `+` on the counterclockwise side.
pub fn arh_jump(theta: f64) -> Option<Mat2> {
    let t = |a: f64| (theta - a).abs() < 1e-12;
    if t(0.0) {
        Some(Mat2::real(1.0, 1.0, 0.0, 1.0))
    } else if t(OMEGA_ARG) || t(-OMEGA_ARG) {
        Some(Mat2::real(1.0, 0.0, -1.0, 1.0))
    } else if t(PI) || t(-PI) {
        Some(Mat2::real(0.0, -1.0, 1.0, 0.0))
    } else {
        None
    }
}

/// Jump of `Ã^RH` on the ray at angle `theta ∈ [0, 2π)`. The rays at
/// 0, π/3, 5π/3 point outward; the ray at π points toward the origin,
/// so its `+` side is the upper one (see [`arh_left_ray_inward`]).
pub fn arh_left_jump(theta: f64) -> Option<Mat2> {
    let t = |a: f64| (theta - a).abs() < 1e-12;
    if t(0.0) {
        Some(Mat2::real(0.0, 1.0, -1.0, 0.0))
    } else if t(PI / 3.0) || t(5.0 * PI / 3.0) {
        Some(Mat2::real(1.0, 0.0, 1.0, 1.0))
    } else if t(PI) {
        Some(Mat2::real(1.0, 1.0, 0.0, 1.0))
    } else {
        None
    }
}

pub fn arh_left_ray_inward(theta: f64) -> bool {
    (theta - PI).abs() < 1e-12
}

/// `max |A₊ - A₋J|` on the ray at `theta`, sampled at the given radii.
/// Boundary values come from angular offsets of `±eps`; `+` is the
/// counterclockwise side for an outward ray and the clockwise side otherwise.
pub fn ray_jump_residual<F>(
    a: F,
    jump: &Mat2,
    theta: f64,
    inward: bool,
    radii: &[f64],
    eps: f64,
) -> f64
where
    F: Fn(C64) -> Mat2 + Sync,
{
    let eps = if inward { -eps } else { eps };
    radii
        .par_iter()
        .map(|&r| {
            let plus = a(C64::from_polar(r, theta + eps));
            let minus = a(C64::from_polar(r, theta - eps));
            plus.sub(&minus.mul(jump)).max_abs() / plus.max_abs().max(1.0)
        })
        .reduce(|| 0.0, f64::max)
}

/// `A^RH(ζ) e^{(2/3)ζ^{3/2}σ₃}` against its two-term expansion at infinity;
/// returns the largest entry of `L⁻¹·(A^RH e^{…}) - (I + (1/48ζ^{3/2})(1 6i; 6i -1))`
/// where `L = ζ^{σ₃/4}(-1 i; 1 i)/(2√π)`.
pub fn arh_asymptotic_residual(zeta: C64) -> f64 {
    let z32 = zeta.powf(1.5);
    let e = (2.0 / 3.0) * z32;
    let lhs = airy_ARH(zeta).mul(&Mat2::diag(e.exp(), (-e).exp()));
    let z14 = zeta.powf(0.25);
    let l = Mat2::diag(z14, 1.0 / z14)
        .mul(&Mat2::new(c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)))
        .scale(c(1.0 / (2.0 * PI.sqrt()), 0.0));
    let core = l.inverse().expect("invertible").mul(&lhs);
    let first = Mat2::new(c(1.0, 0.0), c(0.0, 6.0), c(0.0, 6.0), c(-1.0, 0.0)).scale(1.0 / (48.0 * z32));
    core.sub(&Mat2::identity().add(&first)).max_abs()
}

/// Local coordinate at one edge for a fixed `N` and `x`.
#[derive(Clone, Copy, Debug)]
pub struct EdgeMap {
    pub edge: Edge,
    pub n: usize,
    pub eq: Equilibrium,
}

impl EdgeMap {
    pub fn new(edge: Edge, n: usize, x: f64) -> Result<Self> {
        Ok(Self { edge, n, eq: Equilibrium::new(x)? })
    }

    /// Largest admissible disc radius `min(1/2, |α|/2, β/2)` (open).
    pub fn max_radius(&self) -> f64 {
        0.5f64.min(-self.eq.alpha / 2.0).min(self.eq.beta / 2.0)
    }

    pub fn center(&self) -> f64 {
        match self.edge {
            Edge::Left => self.eq.alpha,
            Edge::Right => self.eq.beta,
        }
    }

    /// Closed-form `ζ′` at the edge: `(2N/(|edge|·√(β-α)))^{2/3}`.
    pub fn linear_coefficient(&self) -> f64 {
        let e = self.center().abs();
        (2.0 * self.n as f64 / (e * (self.eq.beta - self.eq.alpha).sqrt())).powf(2.0 / 3.0)
    }

    fn point(&self, z: C64, side: Side) -> C64 {
        if z.im == 0.0 {
            let off = match side {
                Side::Plus => crate::equilibrium::CUT_OFFSET,
                Side::Minus => -crate::equilibrium::CUT_OFFSET,
            };
            C64::new(z.re, off)
        } else {
            z
        }
    }

    /// `-2g + V + l`, plus `2πi·sgn(Im z)` at the left edge.
    pub fn phase(&self, z: C64, side: Side) -> C64 {
        let zz = self.point(z, side);
        let g = self.eq.g_unchecked(zz);
        let base = -2.0 * g + self.eq.potential_c(zz) + self.eq.l;
        match self.edge {
            Edge::Right => base,
            Edge::Left => base + C64::new(0.0, 2.0 * PI * zz.im.signum()),
        }
    }

    /// `ζ(z)`; real `z` on the support side is resolved by `side`.
    pub fn zeta(&self, z: C64, side: Side) -> Result<C64> {
        let c0 = self.center();
        let r = (z - c0).norm();
        if r >= self.max_radius() {
            return Err(Error::Domain(format!(
                "|z - edge| = {r} outside the disc of radius {}",
                self.max_radius()
            )));
        }
        if r == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let scale = (0.75 * self.n as f64).powf(2.0 / 3.0);
        let ph = self.phase(z, side);
        let zz = self.point(z, side);
        // ph = w·(±(z - edge))^{3/2} with w analytic and positive at the edge
        let u = match self.edge {
            Edge::Right => zz - c0,
            Edge::Left => c0 - zz,
        };
        let w = ph / u.powf(1.5);
        Ok(scale * (zz - c0) * w.powf(2.0 / 3.0))
    }

    /// `ζ′` at the edge from a Cauchy integral over a circle of radius `rho`.
    pub fn numeric_linear_coefficient(&self, rho: f64, points: usize) -> Result<C64> {
        let c0 = self.center();
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..points {
            let t = 2.0 * PI * (k as f64 + 0.5) / points as f64;
            let u = C64::from_polar(rho, t);
            acc += self.zeta(c0 + u, Side::Plus)? / u;
        }
        Ok(acc / points as f64)
    }

    /// `U(z)` at the right edge or `V(z)` at the left edge.
    pub fn parametrix(&self, z: C64, side: Side) -> Result<Mat2> {
        let zeta = self.zeta(z, side)?;
        let zz = self.point(z, side);
        let (a, b) = (self.eq.alpha, self.eq.beta);
        let i = C64::i();
        let q = Mat2::new(-i, i, c(1.0, 0.0), c(1.0, 0.0));
        match self.edge {
            Edge::Right => {
                let s = (zeta * (zz - a) / (zz - b)).powf(-0.25);
                let br = q.mul(&Mat2::diag(s, 1.0 / s));
                let e = (2.0 / 3.0) * zeta.powf(1.5);
                Ok(br
                    .scale(-i * PI.sqrt())
                    .mul(&airy_ARH(zeta))
                    .mul(&Mat2::diag(e.exp(), (-e).exp())))
            }
            Edge::Left => {
                let xi = -zeta;
                let s = (xi * (zz - b) / (zz - a)).powf(0.25);
                let bl = q.mul(&Mat2::diag(s, 1.0 / s));
                // i ζ^{3/2} on the (0, 2π) sheet equals ξ^{3/2} on the principal one
                let e = (2.0 / 3.0) * xi.powf(1.5);
                Ok(bl
                    .scale(i * PI.sqrt())
                    .mul(&Mat2::sigma3())
                    .mul(&reflect(&airy_ARH(xi)))
                    .mul(&Mat2::diag(e.exp(), (-e).exp())))
            }
        }
    }

    /// `U M⁻¹ - I` (or `V M⁻¹ - I`).
    pub fn matching_residual(&self, z: C64, side: Side) -> Result<Mat2> {
        let p = self.parametrix(z, side)?;
        let m = ModelSolution { x: self.eq.x, alpha: self.eq.alpha, beta: self.eq.beta }
            .eval(self.point(z, side), None)?;
        Ok(p.mul(&m.inverse()?).sub(&Mat2::identity()))
    }

    /// Leading two terms of the matching expansion.
    pub fn matching_prediction(&self, z: C64, side: Side) -> Result<Mat2> {
        let zeta = self.zeta(z, side)?;
        let zz = self.point(z, side);
        let ms = ModelSolution { x: self.eq.x, alpha: self.eq.alpha, beta: self.eq.beta };
        let d = ms.delta(zz, None)?;
        let (dm2, dp2) = (1.0 / (d * d), d * d);
        let i = C64::i();
        match self.edge {
            Edge::Right => {
                let z32 = zeta.powf(1.5);
                let p = dm2 * 7.0 - dp2 * 5.0;
                let s = dm2 * 7.0 + dp2 * 5.0;
                let first = Mat2::new(p, i * s, i * s, -p).scale(1.0 / (96.0 * z32));
                let second = Mat2::new(c(-1.0, 0.0), c(0.0, 12.0), c(0.0, -12.0), c(-1.0, 0.0))
                    .scale(35.0 / (4608.0 * z32 * z32));
                Ok(first.add(&second))
            }
            Edge::Left => {
                // ζ^{3/2} on the (0, 2π) sheet is -i ξ^{3/2}
                let z32 = -i * (-zeta).powf(1.5);
                let p = dm2 * 5.0 - dp2 * 7.0;
                let s = dm2 * 5.0 + dp2 * 7.0;
                let first = Mat2::new(p, i * s, i * s, -p).scale(i / (96.0 * z32));
                let second = Mat2::new(c(1.0, 0.0), c(0.0, 12.0), c(0.0, -12.0), c(1.0, 0.0))
                    .scale(35.0 / (4608.0 * z32 * z32));
                Ok(first.add(&second))
            }
        }
    }

    fn circle(&self, radius: f64, points: usize) -> Vec<C64> {
        (0..points)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / points as f64;
                self.center() + C64::from_polar(radius, t)
            })
            .collect()
    }

    pub fn max_residual(&self, radius: f64, points: usize) -> Result<f64> {
        let r: Result<Vec<f64>> = self
            .circle(radius, points)
            .into_par_iter()
            .map(|z| Ok(self.matching_residual(z, Side::Plus)?.max_abs()))
            .collect();
        Ok(r?.into_iter().fold(0.0, f64::max))
    }

    /// `max ‖R - P‖ / max ‖P‖` over the circle, `R` the residual and `P` the
    /// two-term prediction.
    pub fn structure_mismatch(&self, radius: f64, points: usize) -> Result<f64> {
        let rows: Result<Vec<(f64, f64)>> = self
            .circle(radius, points)
            .into_par_iter()
            .map(|z| {
                let r = self.matching_residual(z, Side::Plus)?;
                let p = self.matching_prediction(z, Side::Plus)?;
                Ok((r.sub(&p).max_abs(), p.max_abs()))
            })
            .collect();
        let rows = rows?;
        let num = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let den = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok(num / den)
    }
}

/// Evaluate `ζ(z)` for one edge.
pub fn edge_map(edge: Edge, z: C64, n: usize, x: f64) -> Result<C64> {
    EdgeMap::new(edge, n, x)?.zeta(z, Side::Plus)
}

/// Points per circle in [`parametrix_match`].
pub const CIRCLE_POINTS: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametrixReport {
    pub side: Edge,
    #[serde(rename = "N")]
    pub n: usize,
    pub x: f64,
    pub radius: f64,
    pub max_residual: f64,
    /// `max_residual(2N) / max_residual(N)`; about 1/2 for a `1/N` decay.
    pub scaling_ratio: f64,
}

pub fn parametrix_match(side: Edge, n: usize, x: f64, radius: f64) -> Result<ParametrixReport> {
    if n < 5 {
        return Err(Error::Domain(format!("N must be at least 5, got {n}")));
    }
    let map = EdgeMap::new(side, n, x)?;
    if !(radius > 0.0 && radius < map.max_radius()) {
        return Err(Error::Domain(format!(
            "radius {radius} outside (0, {})",
            map.max_radius()
        )));
    }
    let r1 = map.max_residual(radius, CIRCLE_POINTS)?;
    let r2 = EdgeMap::new(side, 2 * n, x)?.max_residual(radius, CIRCLE_POINTS)?;
    Ok(ParametrixReport { side, n, x, radius, max_residual: r1, scaling_ratio: r2 / r1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_solution_far_away_and_determinant() {
        let ms = ModelSolution::new(0.0).unwrap();
        let m = ms.eval(C64::new(1e8, 0.0), None).unwrap();
        assert!(m.sub(&Mat2::identity()).max_abs() < 1e-7);
        let b = ms.beta;
        assert!((ms.eval(C64::new(2.0 * b, 0.0), None).unwrap().det() - 1.0).norm() < 1e-12);
        for z in [C64::new(0.3, 0.2), C64::new(-5.0, -1.0), C64::new(1.0, 1e-9)] {
            assert!((ms.eval(z, None).unwrap().det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn model_solution_jump_on_support() {
        for x in [0.0, 0.4, -0.3] {
            let ms = ModelSolution::new(x).unwrap();
            let j = Mat2::real(0.0, 1.0, -1.0, 0.0);
            for t in [0.1, 0.37, 0.8] {
                let z = C64::new(ms.alpha + t * (ms.beta - ms.alpha), 0.0);
                let p = ms.eval(z, Some(Side::Plus)).unwrap();
                let m = ms.eval(z, Some(Side::Minus)).unwrap();
                assert!(p.sub(&m.mul(&j)).max_abs() < 1e-10);
                // and the boundary values are limits from off the cut
                let near = ms.eval(z + C64::new(0.0, 1e-13), None).unwrap();
                assert!(p.sub(&near).max_abs() < 1e-3);
            }
            assert!(matches!(ms.eval(C64::new(0.0, 0.0), None), Err(Error::OnCut(_))));
        }
    }

    #[test]
    fn a0_wronskian_constant() {
        let d0 = airy_A0(C64::new(0.0, 0.0)).det();
        assert!((d0 - a0_determinant()).norm() < 1e-15);
        for k in 0..10 {
            let z = C64::from_polar(0.5 + 0.6 * k as f64, -3.0 + 0.6 * k as f64);
            assert!((airy_A0(z).det() - d0).norm() < 1e-9 * d0.norm());
            assert!((airy_ARH(z).det() - d0).norm() < 1e-9 * d0.norm());
        }
    }

    #[test]
    fn arh_jumps() {
        let radii: Vec<f64> = (0..10).map(|k| 0.5 + 0.5 * k as f64).collect();
        for th in [0.0, OMEGA_ARG, -OMEGA_ARG, PI] {
            let j = arh_jump(th).unwrap();
            let r = ray_jump_residual(airy_ARH, &j, th, false, &radii, 1e-13);
            assert!(r < 1e-8, "ray {th}: {r:e}");
        }
    }

    #[test]
    fn arh_left_jumps_and_direct_definition() {
        let radii: Vec<f64> = (0..10).map(|k| 0.5 + 0.5 * k as f64).collect();
        for th in [0.0, PI / 3.0, PI, 5.0 * PI / 3.0] {
            let j = arh_left_jump(th).unwrap();
            let r = ray_jump_residual(airy_ARH_left, &j, th, arh_left_ray_inward(th), &radii, 1e-13);
            assert!(r < 1e-8, "ray {th}: {r:e}");
        }
        // direct products Ã₀·(sector matrix) at small |ζ|
        let a0t = |z: C64| reflect(&airy_A0(C64::from_polar(z.norm(), z.arg() - PI)));
        let arg_of = |z: C64| z.arg().rem_euclid(2.0 * PI);
        for k in 0..12 {
            let z = C64::from_polar(1.3, 0.2 + 0.5 * k as f64);
            let th = arg_of(z);
            let sector = if th < PI / 3.0 {
                Mat2::real(0.0, 1.0, -1.0, 1.0)
            } else if th < PI {
                Mat2::real(1.0, 1.0, 0.0, 1.0)
            } else if th < 5.0 * PI / 3.0 {
                Mat2::identity()
            } else {
                Mat2::real(1.0, 0.0, 1.0, 1.0)
            };
            let want = a0t(z).mul(&sector);
            assert!(airy_ARH_left(z).sub(&want).max_abs() < 1e-12);
        }
    }

    #[test]
    fn arh_expansion_at_twenty() {
        for k in 0..12 {
            let z = C64::from_polar(20.0, -PI + 0.05 + k as f64 * (2.0 * PI - 0.1) / 11.0);
            let r = arh_asymptotic_residual(z);
            assert!(r < 10.0 * 20f64.powi(-3), "{z}: {r:e}");
        }
    }

    #[test]
    fn edge_map_basics() {
        let m = EdgeMap::new(Edge::Right, 10, 0.0).unwrap();
        let want = (20.0 / (PI * (2.0 * PI).sqrt())).powf(2.0 / 3.0);
        assert!((m.linear_coefficient() - want).abs() < 1e-14);
        assert_eq!(m.zeta(C64::new(m.center(), 0.0), Side::Plus).unwrap(), C64::new(0.0, 0.0));
        for d in [0.05, 0.2, 0.4] {
            let z = m.zeta(C64::new(PI + d, 0.0), Side::Plus).unwrap();
            assert!(z.re > 0.0 && z.im.abs() < 1e-12 * z.re);
        }
        assert!(matches!(m.zeta(C64::new(PI + 0.6, 0.0), Side::Plus), Err(Error::Domain(_))));
    }

    #[test]
    fn edge_map_linear_coefficients() {
        for x in [0.0, 0.3, -0.45] {
            for edge in [Edge::Left, Edge::Right] {
                let m = EdgeMap::new(edge, 20, x).unwrap();
                let got = m.numeric_linear_coefficient(0.1, 128).unwrap();
                let want = m.linear_coefficient();
                assert!((got - want).norm() < 1e-10 * want, "{edge} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn left_map_continuous_across_real_axis() {
        let m = EdgeMap::new(Edge::Left, 30, 0.2).unwrap();
        for d in [-0.3, -0.1, 0.1, 0.3] {
            let z = C64::new(m.center() + d, 0.0);
            let a = m.zeta(z, Side::Plus).unwrap();
            let b = m.zeta(z, Side::Minus).unwrap();
            assert!((a - b).norm() < 1e-8, "{d}: {a} vs {b}");
        }
    }

    #[test]
    fn matching_scales_like_one_over_n() {
        for edge in [Edge::Right, Edge::Left] {
            for n in [20, 40] {
                let r = parametrix_match(edge, n, 0.0, 0.45).unwrap();
                assert!((0.4..=0.6).contains(&r.scaling_ratio), "{edge} {n}: {r:?}");
            }
        }
    }

    #[test]
    fn matching_structure_at_80() {
        for edge in [Edge::Right, Edge::Left] {
            let m = EdgeMap::new(edge, 80, 0.0).unwrap();
            let s = m.structure_mismatch(0.45, 128).unwrap();
            assert!(s < 0.2, "{edge}: {s}");
        }
    }

    #[test]
    fn left_right_symmetric_at_zero() {
        let l = EdgeMap::new(Edge::Left, 40, 0.0).unwrap();
        let r = EdgeMap::new(Edge::Right, 40, 0.0).unwrap();
        for k in 0..16 {
            let u = C64::from_polar(0.3, 0.1 + 0.39 * k as f64);
            let a = r.matching_residual(r.center() + u, Side::Plus).unwrap().max_abs();
            let b = l.matching_residual(l.center() - u, Side::Plus).unwrap().max_abs();
            assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
        }
    }
}
