//! Real Hermite, Laguerre and complex Hermite polynomials.
//!
//! `H^ν_{m,n}(z, z̄) = (-1)^{m+n} e^{ν z z̄} ∂^{m+n}/∂z̄^m ∂z^n e^{-ν z z̄}`.
//!
//! Reading off the `u^m v^n` coefficient of `exp(ν(uz + v z̄ - uv))` gives the
//! explicit sum used by [`chp_poly`],
//!
//! ```text
//! H^ν_{m,n} = Σ_{k=0}^{min(m,n)} (-1)^k k! C(m,k) C(n,k) ν^{m+n-k} z^{m-k} z̄^{n-k}
//! ```
//!
//! Differentiating the same generating function in `u` gives the index
//! recurrence behind [`chp_eval_recurrence`] and [`chp_table_normalized`]:
//!
//! ```text
//! H^ν_{m+1,n} = ν z H^ν_{m,n} - ν n H^ν_{m,n-1},   H^ν_{0,n} = (ν z̄)^n
//! ```
//!
//! Regrouping the explicit sum by powers of `|z|²` gives the Laguerre form
//! used by [`chp_eval`], for `m ≥ n`:
//!
//! ```text
//! H^ν_{m,n} = (-1)^n n! ν^m z^{m-n} L^{(m-n)}_n(ν|z|²)
//! ```

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::{factorial, C64};
use crate::tripoly::{Monomial, TriPoly};

/// A point `z` together with the magnetic parameter `ν > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    z: C64,
    nu: f64,
}

impl EvalPoint {
    pub fn new(z: C64, nu: f64) -> Result<Self> {
        check_nu(nu, "nu")?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("z must be finite"));
        }
        Ok(EvalPoint { z, nu })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

pub(crate) fn check_nu(nu: f64, name: &str) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be a positive real, got {nu}")))
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Exact `H^ν_{m,n}` from the explicit finite sum.
pub fn chp_poly(m: u32, n: u32) -> TriPoly {
    let mut out = TriPoly::zero();
    let mut k_fact = BigInt::one();
    for k in 0..=m.min(n) {
        if k > 0 {
            k_fact *= BigInt::from(k);
        }
        let mut c = &k_fact * binomial(m, k) * binomial(n, k);
        if k % 2 == 1 {
            c = -c;
        }
        out = &out + &TriPoly::monomial(c, Monomial::new(m - k, n - k, m + n - k));
    }
    out
}

/// Exact `H^ν_{m,n}` by repeated differentiation of `e^{-ν z z̄}`.
///
/// Writes `∂^j (e^{-ν z z̄}) = P e^{-ν z z̄}` and iterates
/// `P ← ∂z P - ν z̄ P` (resp. `∂z̄ P - ν z P`). Independent of the explicit sum
/// in [`chp_poly`]; used to cross-check it.
pub fn chp_poly_rodrigues(m: u32, n: u32) -> TriPoly {
    let nu_zbar = Monomial::new(0, 1, 1);
    let nu_z = Monomial::new(1, 0, 1);
    let mut p = TriPoly::one();
    for _ in 0..n {
        p = &p.d_z() - &p.mul_monomial(nu_zbar);
    }
    for _ in 0..m {
        p = &p.d_zbar() - &p.mul_monomial(nu_z);
    }
    if (m + n) % 2 == 1 {
        p = -&p;
    }
    p
}

/// `H^ν_{m,n}(z, z̄)` in double precision.
///
/// For `m ≥ n` this is `(-1)^n n! ν^m z^{m-n} L^{(m-n)}_n(ν|z|²)`, with the
/// Laguerre factor from its three-term recurrence in real arithmetic; `m < n`
/// follows by conjugation. All cancellation then happens in a real
/// recurrence of moderate size, and `H_{n,m} = conj(H_{m,n})` holds exactly.
pub fn chp_eval(m: u32, n: u32, p: EvalPoint) -> C64 {
    if m < n {
        return chp_eval(n, m, p).conj();
    }
    let (z, nu) = (p.z, p.nu);
    let d = m - n;
    let scale = signed_falling(n, nu) * nu.powi(d as i32);
    let l = laguerre_eval(n, d as f64, nu * z.norm_sqr());
    z.powu(d) * (scale * l)
}

/// `(-ν)^n n!`, accumulated one factor `-νk` at a time.
fn signed_falling(n: u32, nu: f64) -> f64 {
    (1..=n).fold(1.0, |acc: f64, k| -((nu * k as f64) * acc))
}

/// `H^ν_{m,n}(z, z̄)` by the index recurrence
/// `H_{m+1,n} = νz H_{m,n} - νn H_{m,n-1}`, `H_{0,n} = (νz̄)^n`.
///
/// Independent of [`chp_eval`]; it loses a few digits to complex
/// cancellation once `|z|` is large.
pub fn chp_eval_recurrence(m: u32, n: u32, p: EvalPoint) -> C64 {
    let (z, nu) = (p.z, p.nu);
    let step_zbar = z.conj() * nu;
    let step_z = z * nu;
    // row[k] holds H_{j,k} for the current j.
    let mut row = Vec::with_capacity(n as usize + 1);
    row.push(C64::new(1.0, 0.0));
    for k in 1..=n as usize {
        let prev = row[k - 1];
        row.push(step_zbar * prev);
    }
    for _ in 0..m {
        for k in (0..=n as usize).rev() {
            let lower = if k > 0 { row[k - 1] } else { C64::new(0.0, 0.0) };
            row[k] = step_z * row[k] - (nu * k as f64) * lower;
        }
    }
    row[n as usize]
}

/// Table of `H^ν_{m,n}(z) / sqrt(m! n!)` for `0 ≤ m, n ≤ max`, indexed `[m][n]`.
///
/// The normalisation keeps entries of moderate size for orders well past 100,
/// which the series evaluators need.
pub fn chp_table_normalized(max: usize, p: EvalPoint) -> Vec<Vec<C64>> {
    let (z, nu) = (p.z, p.nu);
    let mut table = vec![vec![C64::new(0.0, 0.0); max + 1]; max + 1];
    table[0][0] = C64::new(1.0, 0.0);
    for k in 1..=max {
        table[0][k] = table[0][k - 1] * z.conj() * (nu / (k as f64).sqrt());
    }
    for m in 0..max {
        let scale = 1.0 / ((m + 1) as f64).sqrt();
        for k in 0..=max {
            let lower = if k > 0 { table[m][k - 1] * (nu * (k as f64).sqrt()) } else { C64::new(0.0, 0.0) };
            table[m + 1][k] = (table[m][k] * z * nu - lower) * scale;
        }
    }
    table
}

/// `H^ν_{m,n}(0) = (-ν)^m m! δ_{m,n}`.
pub fn chp_zero_value(m: u32, n: u32, nu: f64) -> Result<C64> {
    check_nu(nu, "nu")?;
    if m != n {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(C64::new(signed_falling(m, nu), 0.0))
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn real_hermite_eval(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_k(x) / sqrt(2^k k!)` for `k = 0..=max`.
pub fn real_hermite_normalized(max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(max + 1);
    h.push(1.0);
    if max >= 1 {
        h.push(x * std::f64::consts::SQRT_2);
    }
    for k in 1..max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Generalised Laguerre polynomial `L^{(α)}_n(x)`.
pub fn laguerre_eval(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// The magnetic Laplacian `Δ_ν = -∂²/∂z∂z̄ + ν z ∂/∂z`, applied exactly.
pub fn magnetic_laplacian_apply(p: &TriPoly) -> TriPoly {
    let dz = p.d_z();
    &dz.mul_monomial(Monomial::new(1, 0, 1)) - &dz.d_zbar()
}

/// `(H^ν_{m,m}(z), (-1)^m m! ν^m L_m(ν|z|²))`.
///
/// The left side comes from [`chp_eval_recurrence`], so the two sides are
/// computed independently.
pub fn diagonal_laguerre_check(m: u32, p: EvalPoint) -> (C64, C64) {
    let lhs = chp_eval_recurrence(m, m, p);
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = sign * factorial(m as usize) * p.nu.powi(m as i32) * laguerre_eval(m, 0.0, p.nu * p.z.norm_sqr());
    (lhs, C64::new(rhs, 0.0))
}
