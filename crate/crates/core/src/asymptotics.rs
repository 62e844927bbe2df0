//! Large-N formulas for `h_N` and `Z_N` and their comparison with exact values.

use std::f64::consts::PI;

use dashu_int::IBig;
use dashu_ratio::RBig;
use serde::{Deserialize, Serialize};

use crate::bigmath::{self, Float};
use crate::equilibrium::Equilibrium;
use crate::error::{Error, Result};
use crate::exact;
use crate::param::RationalParameter;

/// Euler–Mascheroni constant to 50 digits.
pub const EULER_GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992";
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431_042_159_335_939_92;

/// Below this N the nested logarithms are not yet in their asymptotic regime.
pub const ASYMPTOTIC_N_MIN: usize = 16;

fn check_x(x: f64) -> Result<()> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("|x| must be < 1, got {x}")));
    }
    Ok(())
}

/// `cos(πx/2)` written as `sin(π(1-|x|)/2)` to keep relative accuracy near `|x| = 1`.
fn cos_half_pi(x: f64) -> f64 {
    (PI * (1.0 - x.abs()) / 2.0).sin()
}

/// `F = π(1-x²) / (2 cos(πx/2))`.
#[allow(non_snake_case)]
pub fn free_energy_F(x: f64) -> Result<f64> {
    check_x(x)?;
    let s = 1.0 - x.abs();
    if s < 1e-6 {
        // (1-x²)/cos(πx/2) = (1+|x|) s / sin(πs/2), expanded in s
        let t = PI * s / 2.0;
        return Ok((1.0 + x.abs()) * (1.0 + t * t / 6.0));
    }
    Ok(PI * (1.0 - x * x) / (2.0 * cos_half_pi(x)))
}

/// `c₀(x) = 1 - 2γ - 4 ln 2 - 2 ln cos(πx/2)`.
pub fn c0(x: f64) -> f64 {
    1.0 - 2.0 * EULER_GAMMA - 4.0 * 2f64.ln() - 2.0 * cos_half_pi(x).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Terms {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: f64,
    /// `(π/(2cos(πx/2)))^(2N+1)`; may overflow to infinity for extreme N, see `ln_leading`.
    pub leading: f64,
    pub ln_leading: f64,
    /// `1/(12N)`.
    pub correction: f64,
    pub epsilon: f64,
    /// `leading · (1 + correction + epsilon)`.
    pub ratio: f64,
    /// `1 + correction + epsilon`.
    pub factor: f64,
    pub asymptotic_regime: bool,
}

/// Predicted oscillatory error `ε_N`.
pub fn epsilon_predicted(n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    if n < 2 {
        return Err(Error::Domain("N must be at least 2 for ln ln N".into()));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let bracket = 1.0 - 2.0 * ln.ln() / ln + c0(x) / ln;
    Ok(sign * (PI * x * (nf + 0.5)).cos() / (2.0 * nf * ln * ln) * bracket)
}

/// Predicted `h_N/(N!)²`.
#[allow(non_snake_case)]
pub fn hN_ratio_predicted(n: usize, x: f64) -> Result<Theorem1Terms> {
    let epsilon = epsilon_predicted(n, x)?;
    let ln_leading = (2 * n + 1) as f64 * (PI / (2.0 * cos_half_pi(x))).ln();
    let correction = 1.0 / (12.0 * n as f64);
    let factor = 1.0 + correction + epsilon;
    let leading = ln_leading.exp();
    Ok(Theorem1Terms {
        n,
        x,
        leading,
        ln_leading,
        correction,
        epsilon,
        ratio: leading * factor,
        factor,
        asymptotic_regime: n >= ASYMPTOTIC_N_MIN,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionA {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: f64,
    pub value: f64,
    pub h1_0: f64,
    pub h2_prime_0: f64,
    /// `3 - 2γ - 2 ln(2/π) - π(h₁(0) + h₂′(0))`, which equals `c₀(x)`.
    pub constant: f64,
    pub asymptotic_regime: bool,
}

#[allow(non_snake_case)]
pub fn A_correction(n: usize, x: f64) -> Result<CorrectionA> {
    if n < 2 {
        return Err(Error::Domain("N must be at least 2 for ln ln N".into()));
    }
    let aux = Equilibrium::new(x)?.aux_constants();
    let constant =
        3.0 - 2.0 * EULER_GAMMA - 2.0 * (2.0 / PI).ln() - PI * (aux.h1_0 + aux.h2_prime_0);
    let ln = (n as f64).ln();
    let value = (1.0 - 2.0 * ln.ln() / ln + constant / ln) / (n as f64 * ln * ln);
    Ok(CorrectionA {
        n,
        x,
        value,
        h1_0: aux.h1_0,
        h2_prime_0: aux.h2_prime_0,
        constant,
        asymptotic_regime: n >= ASYMPTOTIC_N_MIN,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseIdentity {
    pub arctan_form: f64,
    pub closed_form: f64,
    pub difference: f64,
}

/// `φ_N = 4N arg((√(-α) + i√β)/√(β-α))` against `πN(1+x)`.
#[allow(non_snake_case)]
pub fn phi_N_phase(n: usize, x: f64) -> Result<PhaseIdentity> {
    let e = Equilibrium::new(x)?;
    let arctan_form = 4.0 * n as f64 * e.beta.sqrt().atan2((-e.alpha).sqrt());
    let closed_form = PI * n as f64 * (1.0 + x);
    Ok(PhaseIdentity { arctan_form, closed_form, difference: (arctan_form - closed_form).abs() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Terms {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub exponent: f64,
    pub c0: f64,
    pub ln_z_predicted: f64,
}

/// `ln Z_N ≈ N² ln F + (1/12) ln N + (1/12) ln cos(πx/2) + ln C₀`.
#[allow(non_snake_case)]
pub fn zN_asymptotic(n: usize, x: f64, c0: f64) -> Result<Theorem2Terms> {
    if n < 2 {
        return Err(Error::Domain("N must be at least 2".into()));
    }
    if !(c0 > 0.0) {
        return Err(Error::Domain("C0 must be positive".into()));
    }
    let f = free_energy_F(x)?;
    let nf = n as f64;
    let ln_z_predicted =
        nf * nf * f.ln() + nf.ln() / 12.0 + cos_half_pi(x).ln() / 12.0 + c0.ln();
    Ok(Theorem2Terms { n, x, f, exponent: 1.0 / 12.0, c0, ln_z_predicted })
}

/// `ln Z_N - N² ln F - (1/12) ln N - (1/12) ln cos(πx/2)`, whose limit is `ln C₀`.
pub fn ln_c0_sequence(x: f64, ln_z: &[(usize, f64)]) -> Result<Vec<(usize, f64)>> {
    let lf = free_energy_F(x)?.ln();
    let lc = cos_half_pi(x).ln() / 12.0;
    Ok(ln_z
        .iter()
        .map(|&(n, l)| {
            let nf = n as f64;
            (n, l - nf * nf * lf - nf.ln() / 12.0 - lc)
        })
        .collect())
}

/// Ordinary least squares `y = c + d·u`; returns `(c, d, se_c, rss)`.
pub fn linear_fit(u: &[f64], y: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let n = u.len();
    if n < 3 || y.len() != n {
        return Err(Error::Fit("need at least 3 points".into()));
    }
    let nf = n as f64;
    let mu = u.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let suu: f64 = u.iter().map(|v| (v - mu) * (v - mu)).sum();
    if suu <= 0.0 {
        return Err(Error::Fit("degenerate abscissae".into()));
    }
    let suy: f64 = u.iter().zip(y).map(|(a, b)| (a - mu) * (b - my)).sum();
    let d = suy / suu;
    let c = my - d * mu;
    let rss: f64 = u.iter().zip(y).map(|(a, b)| (b - c - d * a).powi(2)).sum();
    let s2 = rss / (nf - 2.0);
    let se_c = (s2 * (1.0 / nf + mu * mu / suu)).sqrt();
    Ok((c, d, se_c, rss))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C0Fit {
    pub x: f64,
    pub ln_c0: f64,
    pub c0: f64,
    /// Coefficient `d` of the `d/N` term.
    pub d: f64,
    pub std_error: f64,
    /// Shift of the intercept when refitting on the upper half of the window.
    pub window_shift: f64,
    /// `sqrt(std_error² + window_shift²)`.
    pub uncertainty: f64,
    /// `(N, ln C₀ sequence value - fitted intercept)`.
    pub deviations: Vec<(usize, f64)>,
    /// Mean |deviation| over the first and last third of the window.
    pub early_deviation: f64,
    pub late_deviation: f64,
    /// Log-log slope of |deviation| against N (≈ -1 for an O(1/N) approach).
    pub decay_exponent: f64,
    pub flag: Option<String>,
}

/// Fit `ln C₀` from exact `(N, ln Z_N)` pairs with the model `c + d/N`.
#[allow(non_snake_case)]
pub fn fit_C0(x: f64, ln_z: &[(usize, f64)]) -> Result<C0Fit> {
    if ln_z.len() < 10 {
        return Err(Error::Fit("sequence length must be at least 10".into()));
    }
    let seq = ln_c0_sequence(x, ln_z)?;
    let u: Vec<f64> = seq.iter().map(|&(n, _)| 1.0 / n as f64).collect();
    let y: Vec<f64> = seq.iter().map(|&(_, v)| v).collect();
    let (c, d, se, _) = linear_fit(&u, &y)?;
    let h = seq.len() / 2;
    let (c_half, _, _, _) = linear_fit(&u[h..], &y[h..])?;
    let window_shift = (c - c_half).abs();
    let deviations: Vec<(usize, f64)> = seq.iter().map(|&(n, v)| (n, v - c)).collect();
    let third = (seq.len() / 3).max(1);
    let mean_abs = |s: &[(usize, f64)]| s.iter().map(|p| p.1.abs()).sum::<f64>() / s.len() as f64;
    let early = mean_abs(&deviations[..third]);
    let late = mean_abs(&deviations[deviations.len() - third..]);
    let lu: Vec<f64> = deviations.iter().map(|p| (p.0 as f64).ln()).collect();
    let ly: Vec<f64> = deviations.iter().map(|p| p.1.abs().max(1e-300).ln()).collect();
    let decay_exponent = linear_fit(&lu, &ly).map(|r| r.1).unwrap_or(f64::NAN);
    let flag = (late >= early).then(|| "asymptotic regime not reached".to_string());
    Ok(C0Fit {
        x,
        ln_c0: c,
        c0: c.exp(),
        d,
        std_error: se,
        window_shift,
        uncertainty: (se * se + window_shift * window_shift).sqrt(),
        deviations,
        early_deviation: early,
        late_deviation: late,
        decay_exponent,
        flag,
    })
}

/// `ln(π / (2 cos(πx/2)))` at `prec` bits for rational `x`.
pub fn ln_leading_base(x: &RationalParameter, prec: usize) -> Float {
    let wp = prec + 32;
    let pi = bigmath::pi(wp);
    let xf = bigmath::rational_to_float(x.value(), wp);
    let two = bigmath::int_to_float(IBig::from(2), wp);
    let cos = (&pi * xf / &two).cos();
    (pi / (two * cos)).ln().with_precision(prec).value()
}

/// Measured `ε_N = (h_N/(N!)²) / (π/(2cos(πx/2)))^(2N+1) - 1 - 1/(12N)` from an exact `h_N`.
pub fn epsilon_from_h(n: usize, x: &RationalParameter, h_n: &RBig, precision_bits: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("N must be at least 2".into()));
    }
    let nf = n as f64;
    let target = 1.0 / (nf * nf.ln().powi(2));
    // absolute error of r ≈ 2^-p times the size of the terms being cancelled
    let scale = (2.0 * nf + 1.0) * (nf.ln() + 4.0) * 4.0;
    let needed = ((scale / (target * 1e-6)).log2().ceil() as usize).max(64);
    if precision_bits < needed {
        return Err(Error::Precision { required_bits: needed });
    }
    let p = precision_bits;
    let lh = bigmath::ln_rational(h_n, p);
    let lf = bigmath::ln_factorial(n, p);
    let lb = ln_leading_base(x, p);
    let k = bigmath::int_to_float(IBig::from(2 * n + 1), p);
    let r = lh - &lf - &lf - lb * k;
    let rf = bigmath::to_f64(&r);
    Ok(rf.exp_m1() - 1.0 / (12.0 * nf))
}

/// Measured `ε_N` computed from the exact chain.
pub fn epsilon_measured(n: usize, x: &RationalParameter, precision_bits: usize) -> Result<f64> {
    let h = exact::h_sequence(n + 1, x)?;
    epsilon_from_h(n, x, &h[n], precision_bits)
}

/// `ln(h_N/(N!)²)` at `prec` bits.
pub fn ln_h_ratio_exact(n: usize, h_n: &RBig, prec: usize) -> Float {
    let lf = bigmath::ln_factorial(n, prec);
    bigmath::ln_rational(h_n, prec) - &lf - &lf
}

/// Render `exp(l)` in scientific notation without overflow.
pub fn sci_from_ln(l: f64) -> String {
    if !l.is_finite() {
        return format!("{l}");
    }
    let t = l / std::f64::consts::LN_10;
    let mut e = t.floor();
    let mut m = 10f64.powf(t - e);
    if m >= 9.999_999_999_999_5 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{m:.12}e{}", e as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: String,
    pub ln_exact: f64,
    pub ln_predicted: f64,
    /// predicted / exact for `h_N/(N!)²`.
    pub ratio: f64,
    pub measured_eps: f64,
    pub predicted_eps: f64,
    pub ln_z_exact: f64,
    /// `ln Z_N` minus the `C F^{N²} N^{1/12}` prediction with the fitted `C₀`.
    pub ln_z_residual: f64,
    pub asymptotic_regime: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub x: String,
    pub n_min: usize,
    pub n_max: usize,
    pub precision_bits: usize,
    pub fit: Option<C0Fit>,
    pub rows: Vec<CompareRow>,
}

/// One row per N in `[n_min, n_max]`: exact vs predicted `h_N/(N!)²`, measured
/// and predicted `ε_N`, and the `ln Z_N` residual after the `C₀` fit.
pub fn compare_report(
    x: &RationalParameter,
    n_min: usize,
    n_max: usize,
    precision_bits: usize,
) -> Result<CompareReport> {
    if n_min < 2 || n_max < n_min {
        return Err(Error::Domain(format!("bad N range [{n_min}, {n_max}]")));
    }
    let xf = x.to_f64();
    let h = exact::h_sequence(n_max + 1, x)?;
    let ln_z = exact::ln_partition_series(x, &h, precision_bits);
    let pairs: Vec<(usize, f64)> =
        (n_min..=n_max).map(|n| (n, bigmath::to_f64(&ln_z[n - 1]))).collect();
    let fit = if pairs.len() >= 10 { Some(fit_C0(xf, &pairs)?) } else { None };
    let mut rows = Vec::new();
    for (n, lz) in pairs {
        let pred = hN_ratio_predicted(n, xf)?;
        let ln_exact = bigmath::to_f64(&ln_h_ratio_exact(n, &h[n], precision_bits));
        let ln_pred = pred.ln_leading + pred.factor.ln();
        let measured = epsilon_from_h(n, x, &h[n], precision_bits.max(128))?;
        let residual = match &fit {
            Some(f) => lz - zN_asymptotic(n, xf, f.c0)?.ln_z_predicted,
            None => f64::NAN,
        };
        rows.push(CompareRow {
            n,
            x: x.to_pq(),
            ln_exact,
            ln_predicted: ln_pred,
            ratio: (ln_pred - ln_exact).exp(),
            measured_eps: measured,
            predicted_eps: pred.epsilon,
            ln_z_exact: lz,
            ln_z_residual: residual,
            asymptotic_regime: pred.asymptotic_regime,
        });
    }
    Ok(CompareReport { x: x.to_pq(), n_min, n_max, precision_bits, fit, rows })
}

/// CSV with columns `N, x, exact, predicted, ratio, measured_eps, predicted_eps`.
pub fn write_compare_csv<W: std::io::Write>(rows: &[CompareRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "N",
        "x",
        "exact",
        "predicted",
        "ratio",
        "measured_eps",
        "predicted_eps",
        "ln_z_exact",
        "ln_z_residual",
    ])?;
    for r in rows {
        wr.write_record([
            r.n.to_string(),
            r.x.clone(),
            sci_from_ln(r.ln_exact),
            sci_from_ln(r.ln_predicted),
            format!("{:.15e}", r.ratio),
            format!("{:.15e}", r.measured_eps),
            format!("{:.15e}", r.predicted_eps),
            format!("{:.15e}", r.ln_z_exact),
            format!("{:.6e}", r.ln_z_residual),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
