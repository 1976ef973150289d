//! Generating functions and Mehler-type kernels.
//!
//! Every kernel has a closed form and a truncated series. Series evaluators
//! sum each index over `0..=max_order` and report the size of the last two
//! shells (`max(m, n) = M` and `M - 1`) as the tail; the sum is accepted when
//! `tail ≤ tail_tol · (1 + |sum|)`.
//!
//! The Hermitian pairing is `⟨w, z⟩ = w z̄` throughout.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermite::{check_nu, chp_eval, chp_table_normalized, laguerre_eval, real_hermite_normalized, EvalPoint};
use crate::numeric::C64;

/// Series are refused up front when the expansion parameter is this close to a pole.
pub const MAX_SERIES_U: f64 = 0.95;
pub const MAX_SERIES_NU_NU_UV: f64 = 0.9;

/// Cutoff and tail-acceptance threshold for series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    max_order: usize,
    tail_tol: f64,
}

impl TruncationSpec {
    pub fn new(max_order: usize, tail_tol: f64) -> Result<Self> {
        if max_order < 1 {
            return Err(Error::InvalidArgument("max_order must be at least 1".into()));
        }
        if !(tail_tol > 0.0) {
            return Err(Error::InvalidArgument("tail_tol must be positive".into()));
        }
        Ok(TruncationSpec { max_order, tail_tol })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { max_order: 40, tail_tol: 1e-12 }
    }
}

/// A truncated sum together with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub tail: f64,
    pub max_order: usize,
}

/// Argument bundle for the generating functions and Mehler kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub u: C64,
    pub v: C64,
    pub z: C64,
    pub w: C64,
    pub nu: f64,
    pub nu_prime: f64,
}

impl Default for KernelArgs {
    fn default() -> Self {
        let zero = C64::new(0.0, 0.0);
        KernelArgs { u: zero, v: zero, z: zero, w: zero, nu: 1.0, nu_prime: 1.0 }
    }
}

impl KernelArgs {
    fn check(&self) -> Result<()> {
        check_nu(self.nu, "nu")?;
        check_nu(self.nu_prime, "nu_prime")
    }
}

/// Arguments of the magnetic heat kernel `K_ν(t; z, z₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatArgs {
    pub t: f64,
    pub z: C64,
    pub z0: C64,
    pub nu: f64,
}

impl HeatArgs {
    fn check(&self) -> Result<()> {
        check_nu(self.nu, "nu")?;
        if !(self.t > 0.0) {
            return Err(Error::domain(format!("heat kernel needs t > 0, got {}", self.t)));
        }
        Ok(())
    }

    /// `u = e^{-νt}`.
    pub fn u(&self) -> f64 {
        (-self.nu * self.t).exp()
    }
}

fn accept(value: C64, tail: f64, trunc: TruncationSpec) -> Result<SeriesValue> {
    if !value.re.is_finite() || !value.im.is_finite() || tail > trunc.tail_tol * (1.0 + value.norm()) {
        return Err(Error::NonConvergence {
            increment: tail,
            tail_tol: trunc.tail_tol,
            max_order: trunc.max_order,
        });
    }
    Ok(SeriesValue { value, tail, max_order: trunc.max_order })
}

fn single_series(trunc: TruncationSpec, term: impl Fn(usize) -> C64) -> Result<SeriesValue> {
    let mut sum = C64::new(0.0, 0.0);
    let mut last = [0.0f64; 2];
    for k in 0..=trunc.max_order {
        let t = term(k);
        sum += t;
        last = [last[1], t.norm()];
    }
    accept(sum, last[0].max(last[1]), trunc)
}

fn double_series(trunc: TruncationSpec, term: impl Fn(usize, usize) -> C64) -> Result<SeriesValue> {
    let order = trunc.max_order;
    let mut sum = C64::new(0.0, 0.0);
    let mut shells = vec![0.0f64; order + 1];
    for m in 0..=order {
        for n in 0..=order {
            let t = term(m, n);
            sum += t;
            shells[m.max(n)] += t.norm();
        }
    }
    let tail = shells[order].max(if order > 0 { shells[order - 1] } else { 0.0 });
    accept(sum, tail, trunc)
}

/// `p^k` for `k = 0..=max`.
fn powers(p: C64, max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(C64::new(1.0, 0.0));
    for k in 1..=max {
        out.push(out[k - 1] * p);
    }
    out
}

/// `p^k / sqrt(k!)` for `k = 0..=max`.
fn scaled_powers(p: C64, max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(C64::new(1.0, 0.0));
    for k in 1..=max {
        out.push(out[k - 1] * p / (k as f64).sqrt());
    }
    out
}

fn point(z: C64, nu: f64) -> Result<EvalPoint> {
    EvalPoint::new(z, nu)
}

// ---------------------------------------------------------------------------
// Classical real Mehler kernel
// ---------------------------------------------------------------------------

fn check_t(t: f64) -> Result<()> {
    if t.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("classical Mehler kernel needs |t| < 1, got {t}")))
    }
}

/// `E_t(x, y) = (1-t²)^{-1/2} exp((-t²(x²+y²) + 2txy) / (1-t²))`.
pub fn classical_mehler_closed(t: f64, x: f64, y: f64) -> Result<f64> {
    check_t(t)?;
    let d = 1.0 - t * t;
    Ok(((-t * t * (x * x + y * y) + 2.0 * t * x * y) / d).exp() / d.sqrt())
}

/// `Σ tⁿ Hₙ(x) Hₙ(y) / (2ⁿ n!)`.
pub fn classical_mehler_series(t: f64, x: f64, y: f64, trunc: TruncationSpec) -> Result<SeriesValue> {
    check_t(t)?;
    let hx = real_hermite_normalized(trunc.max_order, x);
    let hy = real_hermite_normalized(trunc.max_order, y);
    single_series(trunc, |n| C64::new(t.powi(n as i32) * hx[n] * hy[n], 0.0))
}

// ---------------------------------------------------------------------------
// Generating functions
// ---------------------------------------------------------------------------

/// `exp(ν(uz + v z̄ - uv))`.
pub fn egf_closed(args: &KernelArgs) -> Result<C64> {
    check_nu(args.nu, "nu")?;
    let KernelArgs { u, v, z, nu, .. } = *args;
    Ok(((u * z + v * z.conj() - u * v) * nu).exp())
}

/// `Σ u^m v^n / (m! n!) H^ν_{m,n}(z)`.
pub fn egf_series(args: &KernelArgs, trunc: TruncationSpec) -> Result<SeriesValue> {
    let h = chp_table_normalized(trunc.max_order, point(args.z, args.nu)?);
    let up = scaled_powers(args.u, trunc.max_order);
    let vp = scaled_powers(args.v, trunc.max_order);
    double_series(trunc, |m, n| up[m] * vp[n] * h[m][n])
}

/// `ν^{m'} (w̄ - ζ)^{m'} e^{ν ζ w}`.
pub fn gf_single_closed(m_prime: u32, zeta: C64, w: C64, nu: f64) -> Result<C64> {
    check_nu(nu, "nu")?;
    Ok(((w.conj() - zeta) * nu).powu(m_prime) * (zeta * w * nu).exp())
}

/// `Σ_n ζⁿ/n! H^ν_{n,m'}(w)`.
pub fn gf_single_series(m_prime: u32, zeta: C64, w: C64, nu: f64, trunc: TruncationSpec) -> Result<SeriesValue> {
    let mp = m_prime as usize;
    let h = chp_table_normalized(trunc.max_order.max(mp), point(w, nu)?);
    let zp = scaled_powers(zeta, trunc.max_order);
    let norm = crate::numeric::factorial(mp).sqrt();
    single_series(trunc, |n| zp[n] * h[n][mp] * norm)
}

/// `(-1)^{m'} H^ν_{m,m'}(z - w) e^{ν w z̄}`.
pub fn partial_mehler_closed(m: u32, m_prime: u32, z: C64, w: C64, nu: f64) -> Result<C64> {
    let sign = if m_prime.is_multiple_of(2) { 1.0 } else { -1.0 };
    let h = chp_eval(m, m_prime, point(z - w, nu)?);
    Ok(h * sign * (w * z.conj() * nu).exp())
}

/// `Σ_n H^ν_{m,n}(z) conj(H^ν_{m',n}(w)) / (νⁿ n!)`.
pub fn partial_mehler_series(
    m: u32,
    m_prime: u32,
    z: C64,
    w: C64,
    nu: f64,
    trunc: TruncationSpec,
) -> Result<SeriesValue> {
    let (m, mp) = (m as usize, m_prime as usize);
    let size = trunc.max_order.max(m).max(mp);
    let hz = chp_table_normalized(size, point(z, nu)?);
    let hw = chp_table_normalized(size, point(w, nu)?);
    let norm = (crate::numeric::factorial(m) * crate::numeric::factorial(mp)).sqrt();
    single_series(trunc, |n| hz[m][n] * hw[mp][n].conj() * norm / nu.powi(n as i32))
}

// ---------------------------------------------------------------------------
// First Mehler formula and the heat kernel
// ---------------------------------------------------------------------------

fn check_unit_disc(u: C64) -> Result<()> {
    if u.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("first Mehler kernel needs |u| < 1, got |u| = {}", u.norm())))
    }
}

/// `e^{ν w z̄} / (1-u) · exp(-ν u |z-w|² / (1-u))`.
pub fn mehler1_closed(args: &KernelArgs) -> Result<C64> {
    check_nu(args.nu, "nu")?;
    check_unit_disc(args.u)?;
    let KernelArgs { u, z, w, nu, .. } = *args;
    let one_minus = C64::new(1.0, 0.0) - u;
    Ok((w * z.conj() * nu).exp() / one_minus * (-u * nu * (z - w).norm_sqr() / one_minus).exp())
}

fn first_mehler_sum(u: C64, z: C64, w: C64, nu: f64, trunc: TruncationSpec) -> Result<SeriesValue> {
    let hz = chp_table_normalized(trunc.max_order, point(z, nu)?);
    let hw = chp_table_normalized(trunc.max_order, point(w, nu)?);
    let up = powers(u, trunc.max_order);
    let inv_nu = powers(C64::new(1.0 / nu, 0.0), 2 * trunc.max_order);
    double_series(trunc, |m, n| up[m] * hz[m][n] * hw[m][n].conj() * inv_nu[m + n])
}

/// `Σ u^m H^ν_{m,n}(z) conj(H^ν_{m,n}(w)) / (ν^{m+n} m! n!)`.
pub fn mehler1_series(args: &KernelArgs, trunc: TruncationSpec) -> Result<SeriesValue> {
    check_nu(args.nu, "nu")?;
    check_unit_disc(args.u)?;
    if args.u.norm() > MAX_SERIES_U {
        return Err(Error::domain(format!(
            "|u| = {} is too close to the pole for the series (limit {MAX_SERIES_U})",
            args.u.norm()
        )));
    }
    first_mehler_sum(args.u, args.z, args.w, args.nu, trunc)
}

/// `Σ_m u^m L_m(ν|z-w|²) e^{ν w z̄}`, the Laguerre-side route to the first
/// Mehler kernel for real `u`.
pub fn mehler1_laguerre_series(u: f64, z: C64, w: C64, nu: f64, trunc: TruncationSpec) -> Result<SeriesValue> {
    check_nu(nu, "nu")?;
    check_unit_disc(C64::new(u, 0.0))?;
    let x = nu * (z - w).norm_sqr();
    let phase = (w * z.conj() * nu).exp();
    single_series(trunc, |m| phase * (u.powi(m as i32) * laguerre_eval(m as u32, 0.0, x)))
}

/// `(ν/π) · E₁(e^{-νt}; z, z₀)`.
pub fn heat_kernel_closed(args: &HeatArgs) -> Result<C64> {
    args.check()?;
    let k = KernelArgs { u: C64::new(args.u(), 0.0), z: args.z, w: args.z0, nu: args.nu, ..Default::default() };
    Ok(mehler1_closed(&k)? * (args.nu / PI))
}

/// `(ν/π) Σ e^{-mνt} H^ν_{m,n}(z) conj(H^ν_{m,n}(z₀)) / (ν^{m+n} m! n!)`.
pub fn heat_kernel_series(args: &HeatArgs, trunc: TruncationSpec) -> Result<SeriesValue> {
    args.check()?;
    let u = args.u();
    if u > MAX_SERIES_U {
        return Err(Error::domain(format!(
            "e^(-nu t) = {u} is too close to the pole for the series (limit {MAX_SERIES_U})"
        )));
    }
    let s = first_mehler_sum(C64::new(u, 0.0), args.z, args.z0, args.nu, trunc)?;
    let scale = args.nu / PI;
    Ok(SeriesValue { value: s.value * scale, tail: s.tail * scale, ..s })
}

/// The heat kernel with the alternative prefactor
/// `(ν/π) e^{ν(t + z₀ z̄)} / (1 - e^{νt}) · exp(|z-z₀|² / (e^{νt} - 1))`.
///
/// Its prefactor is negative for every `t > 0`; kept only so the mismatch with
/// the spectral series can be checked.
pub fn heat_kernel_printed(args: &HeatArgs) -> Result<C64> {
    args.check()?;
    let HeatArgs { t, z, z0, nu } = *args;
    let e = (nu * t).exp();
    let pre = (C64::new(nu * t, 0.0) + z0 * z.conj() * nu).exp() / (1.0 - e);
    Ok(pre * ((z - z0).norm_sqr() / (e - 1.0)).exp() * (nu / PI))
}

// ---------------------------------------------------------------------------
// Second Mehler formula
// ---------------------------------------------------------------------------

fn real_product(u: C64, v: C64) -> Result<f64> {
    let uv = u * v;
    if uv.im.abs() > 1e-12 * (1.0 + uv.norm()) {
        return Err(Error::domain(format!("second Mehler kernel needs uv real, got uv = {uv}")));
    }
    Ok(uv.re)
}

fn check_mehler2(args: &KernelArgs) -> Result<f64> {
    args.check()?;
    let uv = real_product(args.u, args.v)?;
    let s = args.nu * args.nu_prime * uv;
    if !(1.0 - s > 0.0) {
        return Err(Error::domain(format!("second Mehler kernel needs 1 - nu nu' uv > 0, got nu nu' uv = {s}")));
    }
    Ok(uv)
}

/// `E^{ν,ν'}_{u,v}(z, w) = (1-νν'uv)^{-1} exp(-νν'[(ν|z|² + ν'|w|²)uv - uzw - v z̄ w̄] / (1-νν'uv))`.
pub fn mehler2_closed(args: &KernelArgs) -> Result<C64> {
    let uv = check_mehler2(args)?;
    let KernelArgs { u, v, z, w, nu, nu_prime } = *args;
    let nn = nu * nu_prime;
    let d = 1.0 - nn * uv;
    let bracket = C64::new((nu * z.norm_sqr() + nu_prime * w.norm_sqr()) * uv, 0.0) - u * z * w - v * z.conj() * w.conj();
    Ok((-bracket * nn / d).exp() / d)
}

/// `Σ u^m v^n / (m! n!) H^ν_{m,n}(z) H^{ν'}_{m,n}(w)` (no conjugation).
pub fn mehler2_series(args: &KernelArgs, trunc: TruncationSpec) -> Result<SeriesValue> {
    let uv = check_mehler2(args)?;
    if args.nu * args.nu_prime * uv > MAX_SERIES_NU_NU_UV {
        return Err(Error::domain(format!(
            "nu nu' uv = {} is too close to the pole for the series (limit {MAX_SERIES_NU_NU_UV})",
            args.nu * args.nu_prime * uv
        )));
    }
    let hz = chp_table_normalized(trunc.max_order, point(args.z, args.nu)?);
    let hw = chp_table_normalized(trunc.max_order, point(args.w, args.nu_prime)?);
    let up = powers(args.u, trunc.max_order);
    let vp = powers(args.v, trunc.max_order);
    double_series(trunc, |m, n| up[m] * vp[n] * hz[m][n] * hw[m][n])
}

/// The `ν = ν' = 1` case written out directly:
/// `(1-uv)^{-1} exp((uzw + v z̄ w̄ - (|z|² + |w|²)uv) / (1-uv))`.
pub fn mehler2_unit_closed(u: C64, v: C64, z: C64, w: C64) -> Result<C64> {
    let uv = real_product(u, v)?;
    if !(1.0 - uv > 0.0) {
        return Err(Error::domain(format!("needs 1 - uv > 0, got uv = {uv}")));
    }
    let d = 1.0 - uv;
    let num = u * z * w + v * z.conj() * w.conj() - (z.norm_sqr() + w.norm_sqr()) * uv;
    Ok((num / d).exp() / d)
}

/// Specialisations of the second Mehler formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Specialization {
    /// `u = v = 1`, requires `νν' < 1`.
    UnitWeights { z: C64, w: C64, nu: f64, nu_prime: f64 },
    /// `w = z̄`, `ν = ν'`: the squared modulus `|H^ν_{m,n}(z)|²`; requires `ν²uv < 1`.
    SquaredModulus { u: C64, v: C64, z: C64, nu: f64 },
    /// `w = z`, `ν = ν'`: the plain square `H^ν_{m,n}(z)²`; requires `ν²uv < 1`.
    Square { u: C64, v: C64, z: C64, nu: f64 },
    /// `w = 0`, `λ = -ν'uv`: the diagonal sum `Σ λ^m/m! H^ν_{m,m}(z)`; requires `|λν| < 1`.
    Diagonal { lambda: f64, z: C64, nu: f64 },
}

/// Returns `(series side, closed side)` of the specialised identity, computed
/// independently of each other and of [`mehler2_closed`].
pub fn specialized_identity(spec: &Specialization, trunc: TruncationSpec) -> Result<(C64, C64)> {
    let near_pole = |s: f64| -> Result<()> {
        if s > MAX_SERIES_NU_NU_UV {
            Err(Error::domain(format!("parameter product {s} too close to the pole (limit {MAX_SERIES_NU_NU_UV})")))
        } else {
            Ok(())
        }
    };
    match *spec {
        Specialization::UnitWeights { z, w, nu, nu_prime } => {
            check_nu(nu, "nu")?;
            check_nu(nu_prime, "nu_prime")?;
            let nn = nu * nu_prime;
            if !(nn < 1.0) {
                return Err(Error::domain(format!("needs nu nu' < 1, got {nn}")));
            }
            near_pole(nn)?;
            let hz = chp_table_normalized(trunc.max_order, point(z, nu)?);
            let hw = chp_table_normalized(trunc.max_order, point(w, nu_prime)?);
            let series = double_series(trunc, |m, n| hz[m][n] * hw[m][n])?.value;
            let d = 1.0 - nn;
            let q = C64::new(nu * z.norm_sqr() + nu_prime * w.norm_sqr() - 2.0 * (z * w).re, 0.0);
            let closed = (q * (-nn / d)).exp() / d;
            Ok((series, closed))
        }
        Specialization::SquaredModulus { u, v, z, nu } | Specialization::Square { u, v, z, nu } => {
            check_nu(nu, "nu")?;
            let uv = real_product(u, v)?;
            let s = nu * nu * uv;
            if !(s < 1.0) {
                return Err(Error::domain(format!("needs nu^2 uv < 1, got {s}")));
            }
            near_pole(s)?;
            let modulus = matches!(spec, Specialization::SquaredModulus { .. });
            let h = chp_table_normalized(trunc.max_order, point(z, nu)?);
            let up = powers(u, trunc.max_order);
            let vp = powers(v, trunc.max_order);
            let series = double_series(trunc, |m, n| {
                let hh = if modulus { C64::new(h[m][n].norm_sqr(), 0.0) } else { h[m][n] * h[m][n] };
                up[m] * vp[n] * hh
            })?
            .value;
            let d = 1.0 - s;
            let closed = if modulus {
                ((u + v - 2.0 * nu * uv) * (nu * nu * z.norm_sqr() / d)).exp() / d
            } else {
                ((u * z * z + v * z.conj() * z.conj() - 2.0 * nu * uv * z.norm_sqr()) * (nu * nu / d)).exp() / d
            };
            Ok((series, closed))
        }
        Specialization::Diagonal { lambda, z, nu } => {
            check_nu(nu, "nu")?;
            let s = lambda * nu;
            if !(s.abs() < 1.0) {
                return Err(Error::domain(format!("needs |lambda nu| < 1, got {s}")));
            }
            near_pole(s.abs())?;
            let h = chp_table_normalized(trunc.max_order, point(z, nu)?);
            let series = single_series(trunc, |m| h[m][m] * lambda.powi(m as i32))?.value;
            let closed = C64::new((lambda * nu * nu * z.norm_sqr() / (1.0 + s)).exp() / (1.0 + s), 0.0);
            Ok((series, closed))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_err;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn trunc(m: usize) -> TruncationSpec {
        TruncationSpec::new(m, 1e-12).unwrap()
    }

    #[test]
    fn truncation_spec_validates() {
        assert!(TruncationSpec::new(0, 1e-12).is_err());
        assert!(TruncationSpec::new(5, 0.0).is_err());
        assert!(TruncationSpec::new(5, f64::NAN).is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_mehler_closed(0.0, 0.3, -1.2).unwrap(), 1.0);
        let v = classical_mehler_closed(0.5, 0.0, 0.0).unwrap();
        assert!((v - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(classical_mehler_closed(1.0, 0.0, 0.0).is_err());
        assert!(classical_mehler_closed(-1.5, 0.0, 0.0).is_err());

        let s = classical_mehler_series(0.0, 0.7, 0.2, trunc(5)).unwrap();
        assert_eq!(s.value, c(1.0, 0.0));
        let s = classical_mehler_series(0.5, 0.0, 0.0, trunc(40)).unwrap();
        assert!((s.value.re - 2.0 / 3f64.sqrt()).abs() < 1e-10);
        let s = classical_mehler_series(0.3, 1.0, -1.0, trunc(40)).unwrap();
        assert!((s.value.re - classical_mehler_closed(0.3, 1.0, -1.0).unwrap()).abs() < 1e-10);
        assert!(matches!(
            classical_mehler_series(0.99, 1.0, 1.0, trunc(10)),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn egf_examples() {
        let a = KernelArgs { nu: 1.3, z: c(0.2, 0.9), ..Default::default() };
        assert_eq!(egf_closed(&a).unwrap(), c(1.0, 0.0));
        let a = KernelArgs { u: c(1.0, 0.0), z: c(2.0, 0.0), ..Default::default() };
        assert!((egf_closed(&a).unwrap() - c(2f64.exp(), 0.0)).norm() < 1e-14);
        let a = KernelArgs { u: c(0.3, 0.0), v: c(-0.4, 0.0), z: c(1.0, 1.0), nu: 1.5, ..Default::default() };
        let s = egf_series(&a, trunc(30)).unwrap();
        assert!(rel_err(s.value, egf_closed(&a).unwrap()) < 1e-11);
    }

    #[test]
    fn gf_single_examples() {
        let (zeta, w, nu) = (c(0.3, -0.2), c(0.5, 0.8), 1.7);
        assert!((gf_single_closed(0, zeta, w, nu).unwrap() - (zeta * w * nu).exp()).norm() < 1e-15);
        assert_eq!(gf_single_closed(1, w.conj(), w, nu).unwrap(), c(0.0, 0.0));
        let (zeta, w, nu) = (c(0.4, 0.0), c(1.0, -0.5), 2.0);
        let s = gf_single_series(2, zeta, w, nu, trunc(40)).unwrap();
        assert!(rel_err(s.value, gf_single_closed(2, zeta, w, nu).unwrap()) < 1e-10);
    }

    #[test]
    fn partial_mehler_examples() {
        let (z, w, nu) = (c(0.4, -0.3), c(-0.2, 0.6), 1.2);
        let closed = partial_mehler_closed(0, 0, z, w, nu).unwrap();
        assert!((closed - (w * z.conj() * nu).exp()).norm() < 1e-15);
        let m = 3;
        let closed = partial_mehler_closed(m, m, z, z, nu).unwrap();
        let expected = nu.powi(m as i32) * 6.0 * (nu * z.norm_sqr()).exp();
        assert!((closed.re - expected).abs() < 1e-13 * expected && closed.im.abs() < 1e-13);
        let (z, w) = (c(0.5, 0.0), c(0.0, 0.2));
        let s = partial_mehler_series(1, 2, z, w, 1.0, trunc(50)).unwrap();
        assert!(rel_err(s.value, partial_mehler_closed(1, 2, z, w, 1.0).unwrap()) < 1e-9);
    }

    #[test]
    fn mehler1_examples() {
        let (z, w, nu) = (c(0.3, 0.4), c(-0.5, 0.1), 0.8);
        let a = KernelArgs { z, w, nu, ..Default::default() };
        assert!(rel_err(mehler1_closed(&a).unwrap(), partial_mehler_closed(0, 0, z, w, nu).unwrap()) < 1e-15);
        let u = c(0.3, -0.2);
        let a = KernelArgs { u, z, w: z, nu, ..Default::default() };
        let expected = (nu * z.norm_sqr()).exp() / (1.0 - u);
        assert!(rel_err(mehler1_closed(&a).unwrap(), expected) < 1e-15);
        let a = KernelArgs { u: c(0.4, 0.0), z: c(0.5, 0.2), w: c(-0.3, 0.0), nu: 1.0, ..Default::default() };
        let s = mehler1_series(&a, trunc(40)).unwrap();
        assert!(rel_err(s.value, mehler1_closed(&a).unwrap()) < 1e-9);
        let bad = KernelArgs { u: c(1.2, 0.0), ..Default::default() };
        assert!(matches!(mehler1_closed(&bad), Err(Error::Domain(_))));
        let near = KernelArgs { u: c(0.97, 0.0), ..Default::default() };
        assert!(mehler1_closed(&near).is_ok());
        assert!(matches!(mehler1_series(&near, trunc(40)), Err(Error::Domain(_))));
    }

    #[test]
    fn mehler1_hermitian_symmetry() {
        for &u in &[-0.6, 0.0, 0.35, 0.8] {
            let (z, w) = (c(0.7, -0.4), c(-0.1, 1.1));
            let a = KernelArgs { u: c(u, 0.0), z, w, nu: 1.3, ..Default::default() };
            let b = KernelArgs { z: w, w: z, ..a };
            assert!(rel_err(mehler1_closed(&a).unwrap().conj(), mehler1_closed(&b).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn mehler1_laguerre_route() {
        for &(u, nu) in &[(0.5, 1.0), (-0.4, 0.6), (0.2, 2.0)] {
            let (z, w) = (c(0.6, 0.3), c(-0.4, 0.5));
            let a = KernelArgs { u: c(u, 0.0), z, w, nu, ..Default::default() };
            let s = mehler1_laguerre_series(u, z, w, nu, trunc(60)).unwrap();
            assert!(rel_err(s.value, mehler1_closed(&a).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn heat_examples() {
        let h = HeatArgs { t: 50.0, z: c(0.3, -0.2), z0: c(0.1, 0.4), nu: 1.0 };
        let limit = (h.z0 * h.z.conj()).exp() / PI;
        assert!(rel_err(heat_kernel_closed(&h).unwrap(), limit) < 1e-12);

        let h = HeatArgs { t: 0.7, z: c(0.4, 0.0), z0: c(0.1, 0.3), nu: 1.0 };
        let k = KernelArgs { u: c((-0.7f64).exp(), 0.0), z: h.z, w: h.z0, nu: 1.0, ..Default::default() };
        assert_eq!(heat_kernel_closed(&h).unwrap(), mehler1_closed(&k).unwrap() * (1.0 / PI));
        let s = heat_kernel_series(&h, TruncationSpec::new(40, 1e-10).unwrap()).unwrap();
        assert!(rel_err(s.value, heat_kernel_closed(&h).unwrap()) < 1e-9);

        assert!(heat_kernel_closed(&HeatArgs { t: 0.0, ..h }).is_err());
        assert!(heat_kernel_closed(&HeatArgs { t: -1.0, ..h }).is_err());
    }

    #[test]
    fn heat_diagonal_is_positive_and_printed_form_is_not() {
        for &t in &[0.1, 0.5, 1.0, 3.0] {
            for &z in &[c(0.0, 0.0), c(0.5, -0.7), c(1.5, 0.2)] {
                let h = HeatArgs { t, z, z0: z, nu: 0.9 };
                let k = heat_kernel_closed(&h).unwrap();
                assert!(k.re > 0.0 && k.im.abs() <= 1e-14 * k.re);
                assert!(heat_kernel_printed(&h).unwrap().re < 0.0);
            }
        }
    }

    #[test]
    fn mehler2_examples() {
        let a = KernelArgs { z: c(0.5, 0.5), w: c(-1.0, 0.2), nu: 0.7, nu_prime: 1.4, ..Default::default() };
        assert_eq!(mehler2_closed(&a).unwrap(), c(1.0, 0.0));

        let (u, v, z, w) = (c(0.3, 0.2), c(0.3, -0.2), c(0.4, -0.6), c(1.0, 0.3));
        let a = KernelArgs { u, v, z, w, ..Default::default() };
        assert!(rel_err(mehler2_closed(&a).unwrap(), mehler2_unit_closed(u, v, z, w).unwrap()) < 1e-15);

        let a = KernelArgs { u: c(1.0, 0.0), v: c(1.0, 0.0), z: c(1.0, 0.0), w: c(1.0, 0.0), nu: 0.5, nu_prime: 0.5 };
        let expected = 4.0 / 3.0 * (1.0f64 / 3.0).exp();
        assert!((mehler2_closed(&a).unwrap() - c(expected, 0.0)).norm() < 1e-14);
        let s = mehler2_series(&a, trunc(60)).unwrap();
        assert!(rel_err(s.value, c(expected, 0.0)) < 1e-9);

        let bad = KernelArgs { u: c(1.0, 0.0), v: c(0.0, 1.0), ..Default::default() };
        assert!(mehler2_closed(&bad).is_err());
        let bad = KernelArgs { u: c(2.0, 0.0), v: c(1.0, 0.0), ..Default::default() };
        assert!(mehler2_closed(&bad).is_err());
    }

    #[test]
    fn mehler2_exchange_symmetry() {
        let a = KernelArgs { u: c(0.3, 0.4), v: c(0.6, -0.8), z: c(0.2, -0.9), w: c(1.1, 0.3), nu: 0.6, nu_prime: 1.3 };
        let e = mehler2_closed(&a).unwrap();
        // (z, ν) <-> (w, ν')
        let b = KernelArgs { z: a.w, w: a.z, nu: a.nu_prime, nu_prime: a.nu, ..a };
        assert!(rel_err(e, mehler2_closed(&b).unwrap()) < 1e-14);
        // u <-> v together with z -> z̄, w -> w̄
        let b = KernelArgs { u: a.v, v: a.u, z: a.z.conj(), w: a.w.conj(), ..a };
        assert!(rel_err(e, mehler2_closed(&b).unwrap()) < 1e-14);
    }

    #[test]
    fn specialisations() {
        let z = c(0.8, -0.3);
        let (s, cl) = specialized_identity(&Specialization::Diagonal { lambda: 0.4, z: c(0.0, 0.0), nu: 1.5 }, trunc(60)).unwrap();
        assert!(rel_err(s, c(1.0 / 1.6, 0.0)) < 1e-12 && rel_err(cl, c(1.0 / 1.6, 0.0)) < 1e-15);

        let zero = c(0.0, 0.0);
        let (s, cl) = specialized_identity(&Specialization::SquaredModulus { u: zero, v: zero, z, nu: 1.2 }, trunc(40)).unwrap();
        assert_eq!((s, cl), (c(1.0, 0.0), c(1.0, 0.0)));

        let (s, cl) = specialized_identity(&Specialization::Square { u: c(0.2, 0.0), v: c(0.3, 0.0), z: c(1.0, 0.5), nu: 1.0 }, trunc(40)).unwrap();
        assert!(rel_err(s, cl) < 1e-9);

        let (s, cl) = specialized_identity(&Specialization::UnitWeights { z, w: c(0.1, 0.7), nu: 0.5, nu_prime: 0.8 }, trunc(60)).unwrap();
        assert!(rel_err(s, cl) < 1e-9);

        assert!(specialized_identity(&Specialization::Diagonal { lambda: -1.0, z, nu: 1.0 }, trunc(40)).is_err());
        assert!(specialized_identity(&Specialization::UnitWeights { z, w: z, nu: 1.0, nu_prime: 1.0 }, trunc(40)).is_err());
    }
}
