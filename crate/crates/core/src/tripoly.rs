//! Exact polynomials in the commuting symbols `z`, `z̄` and `ν`.
//!
//! `z̄` is an independent symbol here (Wirtinger calculus); numeric evaluation
//! substitutes `z̄ := conj(z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::C64;

/// Exponents of `z^z · z̄^zbar · ν^nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: u32,
    pub zbar: u32,
    pub nu: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { z: 0, zbar: 0, nu: 0 };

    pub fn new(z: u32, zbar: u32, nu: u32) -> Self {
        Monomial { z, zbar, nu }
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.z + other.z, self.zbar + other.zbar, self.nu + other.nu)
    }
}

/// Sparse polynomial with big-integer coefficients. No stored coefficient is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        TriPoly::monomial(BigInt::one(), Monomial::ONE)
    }

    pub fn monomial(coeff: impl Into<BigInt>, mono: Monomial) -> Self {
        let mut p = TriPoly::zero();
        p.add_term(mono, coeff.into());
        p
    }

    /// The symbol `z`.
    pub fn z() -> Self {
        TriPoly::monomial(1, Monomial::new(1, 0, 0))
    }

    /// The symbol `z̄`.
    pub fn zbar() -> Self {
        TriPoly::monomial(1, Monomial::new(0, 1, 0))
    }

    /// The symbol `ν`.
    pub fn nu() -> Self {
        TriPoly::monomial(1, Monomial::new(0, 0, 1))
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, mono: Monomial) -> BigInt {
        self.terms.get(&mono).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Largest `a + b` over the stored monomials `z^a z̄^b ν^c`; `None` for zero.
    pub fn zz_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.z + m.zbar).max()
    }

    pub fn scale(&self, c: &BigInt) -> TriPoly {
        if c.is_zero() {
            return TriPoly::zero();
        }
        TriPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: Monomial) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(m, k)| (m.times(mono), k.clone())).collect(),
        }
    }

    /// Wirtinger derivative `∂/∂z`.
    pub fn d_z(&self) -> TriPoly {
        let mut out = TriPoly::zero();
        for (m, k) in &self.terms {
            if m.z > 0 {
                out.add_term(Monomial::new(m.z - 1, m.zbar, m.nu), k * BigInt::from(m.z));
            }
        }
        out
    }

    /// Wirtinger derivative `∂/∂z̄`.
    pub fn d_zbar(&self) -> TriPoly {
        let mut out = TriPoly::zero();
        for (m, k) in &self.terms {
            if m.zbar > 0 {
                out.add_term(Monomial::new(m.z, m.zbar - 1, m.nu), k * BigInt::from(m.zbar));
            }
        }
        out
    }

    /// Floating-point evaluation at `z̄ = conj(z)`, Horner-free (term by term).
    pub fn eval(&self, z: C64, nu: f64) -> C64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|(m, k)| {
                let c = k.to_f64().unwrap_or(f64::NAN);
                z.powu(m.z) * zb.powu(m.zbar) * nu.powi(m.nu as i32) * c
            })
            .sum()
    }

    /// Evaluation in exact rational arithmetic (the binary inputs are exact
    /// dyadic rationals), rounded to `f64` only at the end.
    pub fn eval_exact(&self, z: C64, nu: f64) -> C64 {
        let exact = |x: f64| BigRational::from_float(x).expect("finite input");
        let (x, y, nu) = (exact(z.re), exact(z.im), exact(nu));
        let z = RatComplex { re: x.clone(), im: y.clone() };
        let zb = RatComplex { re: x, im: -y };

        let (max_a, max_b, max_c) = self.terms.keys().fold((0, 0, 0), |acc, m| {
            (acc.0.max(m.z), acc.1.max(m.zbar), acc.2.max(m.nu))
        });
        let zp = z.powers(max_a);
        let zbp = zb.powers(max_b);
        let mut nup = vec![BigRational::one()];
        for k in 0..max_c as usize {
            nup.push(&nup[k] * &nu);
        }

        let mut acc = RatComplex::zero();
        for (m, k) in &self.terms {
            let w = zp[m.z as usize].mul(&zbp[m.zbar as usize]);
            let s = &nup[m.nu as usize] * BigRational::from_integer(k.clone());
            acc.re += &w.re * &s;
            acc.im += &w.im * &s;
        }
        C64::new(rat_to_f64(&acc.re), rat_to_f64(&acc.im))
    }
}

#[derive(Clone)]
struct RatComplex {
    re: BigRational,
    im: BigRational,
}

impl RatComplex {
    fn zero() -> Self {
        RatComplex { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        RatComplex { re: BigRational::one(), im: BigRational::zero() }
    }

    fn mul(&self, o: &RatComplex) -> RatComplex {
        RatComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn powers(&self, max: u32) -> Vec<RatComplex> {
        let mut out = vec![RatComplex::one()];
        for k in 0..max as usize {
            let next = out[k].mul(self);
            out.push(next);
        }
        out
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    // Scale so the integer quotient carries ~80 significant bits, then round
    // once more to 53; the result is within one ulp of the exact value.
    if r.is_zero() {
        return 0.0;
    }
    let (num, den) = (r.numer(), r.denom());
    let shift = den.bits() as i64 - num.abs().bits() as i64 + 80;
    let q = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (m, k) in &rhs.terms {
            out.add_term(*m, k.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (m, k) in &rhs.terms {
            out.add_term(*m, -k);
        }
        out
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, -k)).collect(),
        }
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (ma, ka) in &self.terms {
            for (mb, kb) in &rhs.terms {
                out.add_term(ma.times(*mb), ka * kb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for TriPoly {
            type Output = TriPoly;
            fn $f(self, rhs: TriPoly) -> TriPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for TriPoly {
    /// Highest `(z, z̄)` degree first, e.g. `nu^3*z^2*zbar - 2*nu^2*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| {
            (b.z + b.zbar, b.z, b.nu).cmp(&(a.z + a.zbar, a.z, a.nu))
        });
        for (i, m) in keys.iter().enumerate() {
            let k = &self.terms[m];
            let neg = k.is_negative();
            let mag = k.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *m == Monomial::ONE {
                factors.push(mag.to_string());
            }
            for (sym, e) in [("nu", m.nu), ("z", m.z), ("zbar", m.zbar)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let p = TriPoly::z();
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q.len(), 0);
    }

    #[test]
    fn product_and_derivatives() {
        // (z + z̄)^2 = z^2 + 2 z z̄ + z̄^2
        let s = &TriPoly::z() + &TriPoly::zbar();
        let sq = &s * &s;
        assert_eq!(sq.coeff(Monomial::new(1, 1, 0)), BigInt::from(2));
        assert_eq!(sq.len(), 3);
        // ∂z (z^2 + 2 z z̄ + z̄^2) = 2z + 2z̄
        assert_eq!(sq.d_z(), s.scale(&BigInt::from(2)));
        assert_eq!(sq.d_zbar(), s.scale(&BigInt::from(2)));
        assert!(TriPoly::nu().d_z().is_zero());
    }

    #[test]
    fn exact_eval_matches_float_on_simple_input() {
        let p = &(&TriPoly::z() * &TriPoly::zbar()) - &TriPoly::one();
        let z = C64::new(1.5, -0.25);
        let v = p.eval_exact(z, 1.0);
        assert_eq!(v, C64::new(1.5 * 1.5 + 0.25 * 0.25 - 1.0, 0.0));
    }

    #[test]
    fn rat_to_f64_rounds_reasonably() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((rat_to_f64(&third) - 1.0 / 3.0).abs() <= f64::EPSILON / 3.0);
        let big = BigRational::from_integer(BigInt::from(10).pow(30));
        assert_eq!(rat_to_f64(&big), 1e30);
        assert_eq!(rat_to_f64(&-big), -1e30);
    }

    #[test]
    fn display_is_readable() {
        let p = &TriPoly::monomial(1, Monomial::new(2, 1, 3)) - &TriPoly::monomial(2, Monomial::new(1, 0, 2));
        assert_eq!(p.to_string(), "nu^3*z^2*zbar - 2*nu^2*z");
        assert_eq!(TriPoly::one().to_string(), "1");
        assert_eq!(TriPoly::zero().to_string(), "0");
    }
}
