//! Exact arithmetic in cyclotomic fields `ℚ(ζ_M)` over the power basis
//! `{ζ_M^j : 0 ≤ j < φ(M)}`, with reduction by the M-th cyclotomic
//! polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bignum::{Ctx, Cx};
use crate::{Error, Result};

pub type Rat = BigRational;

pub fn euler_phi(m: u64) -> u64 {
    crate::cuspcore::euler_phi(m as i64) as u64
}

/// Integer polynomial division, exact (ascending coefficients).
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut r = num.to_vec();
    let mut q = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let s = &c * dc;
            r[i - dd + j] -= s;
        }
    }
    assert!(r.iter().all(|x| x.is_zero()), "division not exact");
    q
}

/// The M-th cyclotomic polynomial, ascending integer coefficients.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^M − 1 divided by Π_{d|M, d<M} Φ_d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    let mut result = num;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            result = poly_div_exact_int(&result, &phi_d);
        }
    }
    result
}

/// An exact element of `ℚ(ζ_M)` in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicElement {
    pub modulus: u64,
    /// φ(M) rational coordinates over `{ζ^j}`, as strings when serialised.
    #[serde(serialize_with = "ser_coords")]
    pub coords: Vec<Rat>,
}

fn ser_coords<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

impl CyclotomicElement {
    pub fn new(modulus: u64, coords: Vec<Rat>) -> Result<Self> {
        let phi = euler_phi(modulus) as usize;
        if coords.len() != phi {
            return Err(Error::Parse(format!(
                "ℚ(ζ_{modulus}) needs {phi} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(CyclotomicElement { modulus, coords })
    }

    pub fn zero(modulus: u64) -> Self {
        CyclotomicElement {
            modulus,
            coords: vec![Rat::zero(); euler_phi(modulus) as usize],
        }
    }

    pub fn from_rational(modulus: u64, q: Rat) -> Self {
        let mut v = Self::zero(modulus);
        v.coords[0] = q;
        v
    }

    /// Reduce a polynomial in ζ of arbitrary degree into the power basis.
    pub fn from_poly(modulus: u64, poly: &[Rat]) -> Self {
        let phi_poly = cyclotomic_poly(modulus);
        let phi: Vec<Rat> = phi_poly
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let deg = phi.len() - 1;
        let mut r: Vec<Rat> = poly.to_vec();
        // long division by the monic Φ_M
        while r.len() > deg {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                let shift = top - deg;
                for (j, pc) in phi.iter().enumerate() {
                    let s = &c * pc;
                    r[shift + j] -= s;
                }
            }
            r.pop();
        }
        r.resize(deg, Rat::zero());
        CyclotomicElement { modulus, coords: r }
    }

    /// The basis element ζ_M^j.
    pub fn zeta_power(modulus: u64, j: u64) -> Self {
        let mut poly = vec![Rat::zero(); (j % modulus) as usize + 1];
        *poly.last_mut().unwrap() = Rat::one();
        Self::from_poly(modulus, &poly)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Largest coordinate denominator (the "denominator used" in reports).
    pub fn denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for c in &self.coords {
            d = num_integer::lcm(d, c.denom().clone());
        }
        d
    }

    /// Complex embedding ζ_M ↦ e^{2πi/M} at the context precision.
    pub fn embed(&self, ctx: &mut Ctx) -> Cx {
        let mut acc = Cx::zero(ctx);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let root = ctx.exp_2pi_i(&Rat::new(
                BigInt::from(j as i64),
                BigInt::from(self.modulus),
            ));
            let coef = ctx.from_rat(c);
            acc = acc.add(&root.mul_real(&coef, ctx), ctx);
        }
        acc
    }

    /// Rewrite over `ℚ(ζ_{M'})` for a multiple `M'` of the modulus (exact).
    pub fn lift_to(&self, new_modulus: u64) -> Result<Self> {
        if new_modulus % self.modulus != 0 {
            return Err(Error::precondition(format!(
                "{new_modulus} is not a multiple of {}",
                self.modulus
            )));
        }
        let stride = (new_modulus / self.modulus) as usize;
        let mut poly = vec![Rat::zero(); (self.coords.len() - 1) * stride + 1];
        for (j, c) in self.coords.iter().enumerate() {
            poly[j * stride] = c.clone();
        }
        Ok(Self::from_poly(new_modulus, &poly))
    }

    /// |coords|₁ — used to pick the simplest of several candidates.
    pub fn height(&self) -> Rat {
        self.coords.iter().map(|c| c.abs()).sum()
    }
}
