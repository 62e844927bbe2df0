//! Jacobi theta functions `θ₁`, `θ₄` for real argument and nome `0 < q < 1`.

use crate::error::{Error, Result};

/// Terms below this are dropped.
pub const TERM_CUTOFF: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaEvaluator {
    pub q: f64,
    /// Number of series terms kept (`n = 0..order`).
    pub order: usize,
}

impl ThetaEvaluator {
    /// Truncation chosen so that `q^{(n+1/2)²} < TERM_CUTOFF` for the first dropped `n`.
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("nome must lie in (0, 1), got {q}")));
        }
        let lq = q.ln();
        let mut n = 0usize;
        while ((n as f64 + 0.5).powi(2) * lq).exp() >= TERM_CUTOFF {
            n += 1;
        }
        Ok(Self { q, order: n.max(1) })
    }

    pub fn with_order(q: f64, order: usize) -> Result<Self> {
        let mut t = Self::new(q)?;
        t.order = order;
        Ok(t)
    }

    fn qpow(&self, e: f64) -> f64 {
        (e * self.q.ln()).exp()
    }

    /// `θ₁(z) = 2 Σ (-1)ⁿ q^{(n+1/2)²} sin((2n+1)z)`.
    pub fn theta1(&self, z: f64) -> f64 {
        let mut s = 0.0;
        for n in 0..self.order {
            let nf = n as f64;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sgn * self.qpow((nf + 0.5).powi(2)) * ((2.0 * nf + 1.0) * z).sin();
        }
        2.0 * s
    }

    /// `θ₁′(0) = 2 Σ (-1)ⁿ (2n+1) q^{(n+1/2)²}`.
    pub fn theta1_prime0(&self) -> f64 {
        let mut s = 0.0;
        for n in 0..self.order {
            let nf = n as f64;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sgn * (2.0 * nf + 1.0) * self.qpow((nf + 0.5).powi(2));
        }
        2.0 * s
    }

    /// `θ₄(z) = 1 + 2 Σ_{n≥1} (-1)ⁿ q^{n²} cos(2nz)`.
    pub fn theta4(&self, z: f64) -> f64 {
        let mut s = 0.0;
        for n in 1..=self.order {
            let nf = n as f64;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sgn * self.qpow(nf * nf) * (2.0 * nf * z).cos();
        }
        1.0 + 2.0 * s
    }

    /// `θ₁′(0)/θ₁(ω) - 1/sin ω`, summed without cancellation:
    /// with `θ₁′(0) = 2q^{1/4}(1 + T₁)` and `θ₁(ω) = 2q^{1/4}(sin ω + T₂)` this is
    /// `(T₁ sin ω - T₂) / (sin ω (sin ω + T₂))`.
    pub fn ratio_excess(&self, omega: f64) -> f64 {
        let s = omega.sin();
        let (mut t1, mut t2) = (0.0, 0.0);
        for n in 1..self.order {
            let nf = n as f64;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            let w = sgn * self.qpow(nf * nf + nf);
            t1 += w * (2.0 * nf + 1.0);
            t2 += w * ((2.0 * nf + 1.0) * omega).sin();
        }
        (t1 * s - t2) / (s * (s + t2))
    }
}

pub fn theta1(z: f64, q: f64) -> Result<f64> {
    Ok(ThetaEvaluator::new(q)?.theta1(z))
}

pub fn theta1_prime0(q: f64) -> Result<f64> {
    Ok(ThetaEvaluator::new(q)?.theta1_prime0())
}

pub fn theta4(z: f64, q: f64) -> Result<f64> {
    Ok(ThetaEvaluator::new(q)?.theta4(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_and_zero() {
        for q in [0.01, 0.2, 0.5, 0.9] {
            let t = ThetaEvaluator::new(q).unwrap();
            assert_eq!(t.theta1(0.0), 0.0);
            for z in [0.3, 1.1, 2.7] {
                assert!((t.theta1(-z) + t.theta1(z)).abs() < 1e-15);
                assert!((t.theta4(-z) - t.theta4(z)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn small_nome_laws() {
        let q = 1e-4;
        let t = ThetaEvaluator::new(q).unwrap();
        let lead = 2.0 * q.powf(0.25);
        assert!(((t.theta1_prime0() - lead) / lead).abs() < q * q * 10.0);
        for z in [0.2, 1.0, 2.0] {
            let d = (t.theta1(z) - lead * z.sin()).abs();
            assert!(d <= 4.0 * q.powf(2.25));
        }
        assert!((ThetaEvaluator::new(1e-12).unwrap().theta4(0.7) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn truncation_is_saturated() {
        for q in [0.05, 0.3, 0.5] {
            let a = ThetaEvaluator::new(q).unwrap();
            let b = ThetaEvaluator::with_order(q, a.order + 2).unwrap();
            for z in [0.4, 1.3] {
                assert!((a.theta1(z) - b.theta1(z)).abs() < 1e-25);
                assert!((a.theta4(z) - b.theta4(z)).abs() < 1e-25);
            }
            assert!((a.theta1_prime0() - b.theta1_prime0()).abs() < 1e-25);
        }
    }

    #[test]
    fn ratio_excess_matches_direct_form() {
        for q in [0.1, 0.3] {
            let t = ThetaEvaluator::new(q).unwrap();
            let w = 1.2;
            let direct = t.theta1_prime0() / t.theta1(w) - 1.0 / w.sin();
            assert!((t.ratio_excess(w) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_nome() {
        assert!(ThetaEvaluator::new(1.0).is_err());
        assert!(ThetaEvaluator::new(0.0).is_err());
    }
}
