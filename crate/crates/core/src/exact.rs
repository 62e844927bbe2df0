//! Exact moments, Hankel determinants, the `h_k` chain and the partition function.
//!
//! The moment sequence is `m_k = φ^(k)(x)` for `φ(x) = 2/(1 - x^2)`, i.e.
//! `m_k = k! [(1-x)^-(k+1) + (-1)^k (1+x)^-(k+1)]`, and
//! `Z_N = (1-x^2)^(N^2) ∏_{k<N} h_k/(k!)^2` with `τ_N = det(m_{i+j}) = ∏ h_k`.

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigmath::{self, Float};
use crate::error::{Error, Result};
use crate::param::{rbig_pq, rbig_pq_vec, render, RationalParameter};

/// `φ^(k)(x)` from the closed form.
pub fn moment(k: usize, x: &RationalParameter) -> RBig {
    let ua = RBig::ONE / x.a();
    let ub = RBig::ONE / x.b();
    let e = k + 1;
    let pa = pow_rational(&ua, e);
    let pb = pow_rational(&ub, e);
    let s = if k % 2 == 0 { pa + pb } else { pa - pb };
    s * RBig::from(bigmath::factorial(k))
}

fn pow_rational(r: &RBig, e: usize) -> RBig {
    RBig::from_parts(r.numerator().pow(e), r.denominator().pow(e))
}

/// Moments `m_0..m_{count-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub x: RationalParameter,
    #[serde(with = "rbig_pq_vec")]
    pub m: Vec<RBig>,
}

impl MomentSequence {
    pub fn new(count: usize, x: &RationalParameter) -> Self {
        let s = ScaledMoments::new(count, x);
        let m = s
            .m
            .iter()
            .enumerate()
            .map(|(k, mk)| RBig::from(mk.clone()) * pow_rational(&s.scale, k + 1))
            .collect();
        Self { x: x.clone(), m }
    }
}

/// Integer moments `M_k = k! [(q+p)^(k+1) + (-1)^k (q-p)^(k+1)]` for `x = p/q`,
/// related to the true moments by `m_k = M_k s^(k+1)` with `s = q/(q^2-p^2)`.
///
/// Consequently `τ_N = s^(N^2) det(M_{i+j})` and `h_k = s^(2k+1) h̃_k`.
#[derive(Clone, Debug)]
pub struct ScaledMoments {
    pub m: Vec<IBig>,
    pub scale: RBig,
}

impl ScaledMoments {
    pub fn new(count: usize, x: &RationalParameter) -> Self {
        let p = x.numerator().clone();
        let q = IBig::from(x.denominator().clone());
        let u = &q + &p;
        let v = &q - &p;
        let mut m = Vec::with_capacity(count);
        let mut fact = IBig::ONE;
        let mut pu = u.clone();
        let mut pv = v.clone();
        for k in 0..count {
            if k > 0 {
                fact *= IBig::from(k);
                pu *= &u;
                pv *= &v;
            }
            let s = if k % 2 == 0 { &pu + &pv } else { &pu - &pv };
            m.push(s * &fact);
        }
        let scale = RBig::from_parts_signed(q.clone(), &u * &v);
        Self { m, scale }
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<IBig>>) -> IBig {
    let n = a.len();
    if n == 0 {
        return IBig::ONE;
    }
    let mut sign = IBig::ONE;
    let mut prev = IBig::ONE;
    for k in 0..n - 1 {
        if a[k][k] == IBig::ZERO {
            match (k + 1..n).find(|&i| a[i][k] != IBig::ZERO) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return IBig::ZERO,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// `τ_N = det(m_{i+j})_{0≤i,j<N}` by Bareiss elimination on the integer-scaled
/// Hankel matrix. O(N^3); used as the independent route to check the chain.
pub fn hankel_tau(n: usize, x: &RationalParameter) -> Result<RBig> {
    if n == 0 {
        return Ok(RBig::ONE);
    }
    let s = ScaledMoments::new(2 * n - 1, x);
    let mat = (0..n)
        .map(|i| (0..n).map(|j| s.m[i + j].clone()).collect())
        .collect();
    let det = bareiss_det(mat);
    Ok(RBig::from(det) * pow_rational(&s.scale, n * n))
}

/// `h_0..h_{n-1}` by the Chebyshev algorithm (an O(n^2) LDLᵀ of the Hankel
/// matrix) run on the integer-scaled moments.
pub fn h_sequence(n: usize, x: &RationalParameter) -> Result<Vec<RBig>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = ScaledMoments::new(2 * n, x);
    let mom: Vec<RBig> = s.m.into_iter().map(RBig::from).collect();
    let ht = chebyshev_chain(&mom, n)?;
    // undo the scaling: h_k = s^(2k+1) h̃_k
    let s2 = &s.scale * &s.scale;
    let mut f = s.scale.clone();
    let mut out = Vec::with_capacity(n);
    for h in ht {
        out.push(h * &f);
        f = &f * &s2;
    }
    Ok(out)
}

/// Chebyshev recursion `σ_{k,l} = σ_{k-1,l+1} - a_{k-1}σ_{k-1,l} - b_{k-1}σ_{k-2,l}`
/// with `h_k = σ_{k,k}`. Needs `m_0..m_{2n-1}`.
fn chebyshev_chain(m: &[RBig], n: usize) -> Result<Vec<RBig>> {
    debug_assert!(m.len() >= 2 * n);
    let width = 2 * n;
    let pivot = |v: &RBig, k: usize| -> Result<()> {
        if v.is_zero() {
            Err(Error::Invariant(format!("zero pivot at k = {k}")))
        } else if *v.numerator() < IBig::ZERO {
            Err(Error::Invariant(format!("negative h_{k}")))
        } else {
            Ok(())
        }
    };
    let mut hs = Vec::with_capacity(n);
    pivot(&m[0], 0)?;
    hs.push(m[0].clone());
    if n == 1 {
        return Ok(hs);
    }
    let mut prev: Vec<RBig> = vec![RBig::ZERO; width];
    let mut cur: Vec<RBig> = m[..width].to_vec();
    let mut a = &m[1] / &m[0];
    let mut b = RBig::ZERO;
    for k in 1..n {
        let mut next = vec![RBig::ZERO; width];
        for l in k..(width - k) {
            let mut v = &cur[l + 1] - &a * &cur[l];
            if !b.is_zero() {
                v -= &b * &prev[l];
            }
            next[l] = v;
        }
        pivot(&next[k], k)?;
        hs.push(next[k].clone());
        if k + 1 < n {
            a = &next[k + 1] / &next[k] - &cur[k] / &cur[k - 1];
            b = &next[k] / &cur[k - 1];
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(hs)
}

/// Exact chain: `h_0..h_{N-1}` and `τ_1..τ_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelChain {
    pub x: RationalParameter,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "rbig_pq_vec")]
    pub tau: Vec<RBig>,
    #[serde(with = "rbig_pq_vec")]
    pub h: Vec<RBig>,
}

impl HankelChain {
    /// `τ_k` with the convention `τ_0 = 1`.
    pub fn tau_at(&self, k: usize) -> RBig {
        if k == 0 {
            RBig::ONE
        } else {
            self.tau[k - 1].clone()
        }
    }

    /// Re-check `τ_{k+1} = τ_k h_k` and positivity.
    pub fn check(&self) -> Result<()> {
        for k in 0..self.n {
            if self.h[k] <= RBig::ZERO {
                return Err(Error::Invariant(format!("h_{k} not positive")));
            }
            if self.tau_at(k + 1) != self.tau_at(k) * &self.h[k] {
                return Err(Error::Invariant(format!("tau_{} != tau_{k} h_{k}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn partition(&self) -> PartitionValue {
        partition_from_h(self.n, &self.x, &self.h)
    }
}

pub fn hankel_chain(n: usize, x: &RationalParameter) -> Result<HankelChain> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let h = h_sequence(n, x)?;
    let mut tau = Vec::with_capacity(n);
    let mut t = RBig::ONE;
    for hk in &h {
        t *= hk;
        tau.push(t.clone());
    }
    Ok(HankelChain { x: x.clone(), n, tau, h })
}

/// Chains for several parameters in parallel.
pub fn h_sequences_par(n: usize, xs: &[RationalParameter]) -> Result<Vec<Vec<RBig>>> {
    xs.par_iter().map(|x| h_sequence(n, x)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionValue {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: RationalParameter,
    #[serde(rename = "Z", with = "rbig_pq")]
    pub z: RBig,
}

fn partition_from_h(n: usize, x: &RationalParameter, h: &[RBig]) -> PartitionValue {
    let one_minus = x.a() * x.b();
    let mut z = pow_rational(&one_minus, n * n);
    let mut fact = UBig::ONE;
    for (k, hk) in h.iter().take(n).enumerate() {
        if k > 0 {
            fact *= UBig::from(k);
        }
        z = z * hk / RBig::from(&fact * &fact);
    }
    PartitionValue { n, x: x.clone(), z }
}

pub fn partition_exact(n: usize, x: &RationalParameter) -> Result<PartitionValue> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let h = h_sequence(n, x)?;
    Ok(partition_from_h(n, x, &h))
}

/// `ln Z_N` for every `N = 1..=h.len()` from an exact `h` sequence, evaluated
/// at `prec` bits without forming the huge products.
pub fn ln_partition_series(x: &RationalParameter, h: &[RBig], prec: usize) -> Vec<Float> {
    let wp = prec + 32;
    let ln1mx2 = bigmath::ln_rational(&(x.a() * x.b()), wp);
    let mut acc = Float::ZERO.with_precision(wp).value();
    let mut out = Vec::with_capacity(h.len());
    let mut lnfact = Float::ZERO.with_precision(wp).value();
    for (k, hk) in h.iter().enumerate() {
        if k > 1 {
            lnfact += bigmath::int_to_float(IBig::from(k), wp).ln();
        }
        acc = acc + bigmath::ln_rational(hk, wp) - &lnfact - &lnfact;
        let n = (k + 1) as u64;
        let nn = bigmath::int_to_float(IBig::from(n * n), wp);
        out.push((&acc + &ln1mx2 * nn).with_precision(prec).value());
    }
    out
}

/// Second-order truncated Taylor series `c0 + c1 ε + c2 ε^2` over the rationals.
#[derive(Clone, Debug, PartialEq)]
struct Jet([RBig; 3]);

impl Jet {
    fn mul(&self, o: &Jet) -> Jet {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Jet([a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a1 * b1 + a2 * b0])
    }

    fn sub(&self, o: &Jet) -> Jet {
        Jet([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }

    fn recip(&self) -> Option<Jet> {
        let [a0, a1, a2] = &self.0;
        if a0.is_zero() {
            return None;
        }
        let i0 = RBig::ONE / a0;
        let i1 = -(a1 * &i0 * &i0);
        let i2 = -((a1 * &i1 + a2 * &i0) * &i0);
        Some(Jet([i0, i1, i2]))
    }
}

/// `(τ_N, τ_N′, τ_N″)` exactly.
///
/// Differentiating the Hankel matrix entrywise bumps each moment index by one
/// (`m_k′ = m_{k+1}`), so the row-bump expansion of `τ_N′` and `τ_N″` is the
/// same as taking the determinant over the jet ring `Q[ε]/(ε^3)` with entries
/// `m_{i+j} + m_{i+j+1} ε + m_{i+j+2} ε^2/2`. Elimination without pivoting is
/// safe because every leading minor is positive.
pub fn tau_derivatives(n: usize, x: &RationalParameter) -> Result<(RBig, RBig, RBig)> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let m = MomentSequence::new(2 * n + 1, x).m;
    let half = RBig::from_parts(IBig::ONE, UBig::from(2u8));
    let entry = |k: usize| Jet([m[k].clone(), m[k + 1].clone(), &m[k + 2] * &half]);
    let mut a: Vec<Vec<Jet>> = (0..n).map(|i| (0..n).map(|j| entry(i + j)).collect()).collect();
    let mut det = Jet([RBig::ONE, RBig::ZERO, RBig::ZERO]);
    for k in 0..n {
        let piv = a[k][k].clone();
        det = det.mul(&piv);
        let inv = piv
            .recip()
            .ok_or_else(|| Error::Invariant(format!("zero leading minor at k = {k}")))?;
        for i in k + 1..n {
            let f = a[i][k].mul(&inv);
            for j in k + 1..n {
                let t = f.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    let [t0, t1, t2] = det.0;
    Ok((t0, t1, t2 * RBig::from(2u8)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TodaResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: RationalParameter,
    #[serde(with = "rbig_pq")]
    pub residual: RBig,
    pub holds: bool,
}

/// Exact residual of `τ_N τ_N″ - (τ_N′)^2 - τ_{N+1} τ_{N-1}` with `τ_0 = 1`.
pub fn toda_check(n: usize, x: &RationalParameter) -> Result<TodaResult> {
    let (t, t1, t2) = tau_derivatives(n, x)?;
    let chain = hankel_chain(n + 1, x)?;
    let residual = &t * &t2 - &t1 * &t1 - chain.tau_at(n + 1) * chain.tau_at(n - 1);
    Ok(TodaResult {
        n,
        x: x.clone(),
        holds: residual.is_zero(),
        residual,
    })
}

/// High-precision `ln Z_N` from the floating-point chain.
#[derive(Clone, Debug)]
pub struct FloatPartition {
    pub n: usize,
    pub x: RationalParameter,
    pub precision_bits: usize,
    pub working_bits: usize,
    pub ln_z: Float,
    /// `|ln Z(w) - ln Z(w')|` from two working precisions.
    pub error_estimate: f64,
    pub warning: Option<String>,
}

/// Guard bits added on top of the requested precision; the Chebyshev
/// recursion loses roughly two bits per step on these moment sequences.
pub fn guard_bits(n: usize) -> usize {
    3 * n + 64
}

fn ln_z_float(n: usize, x: &RationalParameter, wp: usize) -> Result<Float> {
    let s = ScaledMoments::new(2 * n, x);
    let m: Vec<Float> = s.m.into_iter().map(|v| bigmath::int_to_float(v, wp)).collect();
    let width = 2 * n;
    let zero = Float::ZERO.with_precision(wp).value();
    let mut hs: Vec<Float> = vec![m[0].clone()];
    let mut prev = vec![zero.clone(); width];
    let mut cur = m.clone();
    let mut a = &m[1] / &m[0];
    let mut b = zero.clone();
    for k in 1..n {
        let mut next = vec![zero.clone(); width];
        for l in k..(width - k) {
            next[l] = &cur[l + 1] - &a * &cur[l] - &b * &prev[l];
        }
        if next[k] <= zero {
            return Err(Error::Invariant(format!(
                "non-positive pivot at k = {k} in the float chain; raise precision"
            )));
        }
        hs.push(next[k].clone());
        if k + 1 < n {
            a = &next[k + 1] / &next[k] - &cur[k] / &cur[k - 1];
            b = &next[k] / &cur[k - 1];
        }
        prev = std::mem::replace(&mut cur, next);
    }
    // ln Z = Σ ln h̃_k - 2 Σ ln k! - N^2 ln q  (the s-powers and (1-x^2)^{N^2} collapse to q^{-N^2})
    let mut acc = zero.clone();
    let mut lnfact = zero.clone();
    for (k, h) in hs.iter().enumerate() {
        if k > 1 {
            lnfact += bigmath::int_to_float(IBig::from(k), wp).ln();
        }
        acc = acc + h.ln() - &lnfact - &lnfact;
    }
    let q = bigmath::uint_to_float(x.denominator().clone(), wp);
    let nn = bigmath::int_to_float(IBig::from(n * n), wp);
    Ok(acc - q.ln() * nn)
}

/// `ln Z_N` in floating point at `precision_bits` (≥ 64), with an error
/// estimate from two working precisions. `tol` defaults to `2^(-precision_bits/2)`.
pub fn partition_float(
    n: usize,
    x: &RationalParameter,
    precision_bits: usize,
    tol: Option<f64>,
) -> Result<FloatPartition> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if precision_bits < 64 {
        return Err(Error::Domain("precision_bits must be at least 64".into()));
    }
    let w1 = precision_bits + guard_bits(n);
    let w2 = w1 + n + 64;
    let (l1, l2) = rayon::join(|| ln_z_float(n, x, w1), || ln_z_float(n, x, w2));
    let (l1, l2) = (l1?, l2?);
    let err = bigmath::to_f64(&(&l1 - &l2)).abs();
    let tol = tol.unwrap_or_else(|| 2f64.powi(-(precision_bits as i32) / 2));
    let warning = (err > tol).then(|| {
        format!("precision loss: two-precision difference {err:.3e} exceeds tolerance {tol:.3e}")
    });
    Ok(FloatPartition {
        n,
        x: x.clone(),
        precision_bits,
        working_bits: w1,
        ln_z: l2.with_precision(precision_bits).value(),
        error_estimate: err,
        warning,
    })
}

/// JSON record `{N, x, tau, h, Z}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: RationalParameter,
    #[serde(with = "rbig_pq_vec")]
    pub tau: Vec<RBig>,
    #[serde(with = "rbig_pq_vec")]
    pub h: Vec<RBig>,
    #[serde(rename = "Z", with = "rbig_pq")]
    pub z: RBig,
}

impl From<&HankelChain> for ChainRecord {
    fn from(c: &HankelChain) -> Self {
        ChainRecord {
            n: c.n,
            x: c.x.clone(),
            tau: c.tau.clone(),
            h: c.h.clone(),
            z: c.partition().z,
        }
    }
}

/// CSV rows `k, h_k, tau_{k+1}` rendered with `digits` significant digits.
pub fn write_chain_csv<W: std::io::Write>(c: &HankelChain, digits: usize, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["k", "x", "h_k", "tau_k_plus_1", "h_k_exact"])?;
    for k in 0..c.n {
        wr.write_record([
            k.to_string(),
            c.x.to_pq(),
            bigmath::rational_to_sci(&c.h[k], digits),
            bigmath::rational_to_sci(&c.tau[k], digits),
            render(&c.h[k]),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
