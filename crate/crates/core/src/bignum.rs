//! Extended-precision real and complex arithmetic on top of `astro-float`,
//! plus exact conversions from the crate's rational types.
//!
//! Values are computed with round-to-even at the context precision; error
//! *bounds* are computed separately at low precision with directed rounding
//! so they stay rigorous.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rat = BigRational;

/// Precision used for rigorous bound arithmetic.
pub const BOUND_P: usize = 64;

/// Evaluation context: working precision plus the constants cache.
/// One per thread; `Consts` caches π internally.
pub struct Ctx {
    pub p: usize,
    pub cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Self {
        Ctx {
            p,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i8(0, self.p)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        bigfloat_from_bigint(v, self.p)
    }

    pub fn from_rat(&self, q: &Rat) -> BigFloat {
        let n = bigfloat_from_bigint(q.numer(), self.p + 64);
        let d = bigfloat_from_bigint(q.denom(), self.p + 64);
        n.div(&d, self.p, RoundingMode::ToEven)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RoundingMode::ToEven)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RoundingMode::ToEven)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RoundingMode::ToEven)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RoundingMode::ToEven)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RoundingMode::ToEven)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RoundingMode::ToEven, &mut self.cc)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RoundingMode::ToEven, &mut self.cc)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.p, RoundingMode::ToEven)
    }

    /// e^{2πi·t} for an exact rational t; the angle is reduced mod 1
    /// exactly before any rounding.
    pub fn exp_2pi_i(&mut self, t: &Rat) -> Cx {
        let frac = t - t.floor();
        let angle = {
            let f = self.from_rat(&frac);
            let pi = self.pi();
            let two_pi = self.mul(&self.from_i64(2), &pi);
            self.mul(&two_pi, &f)
        };
        Cx {
            re: angle.cos(self.p, RoundingMode::ToEven, &mut self.cc),
            im: angle.sin(self.p, RoundingMode::ToEven, &mut self.cc),
        }
    }

    /// e^{-2π·y} for an exact rational y.
    pub fn exp_neg_2pi(&mut self, y: &Rat) -> BigFloat {
        let pi = self.pi();
        let two_pi = self.mul(&self.from_i64(2), &pi);
        let x = self.mul(&two_pi, &self.from_rat(y)).neg();
        self.exp(&x)
    }
}

/// Complex number at context precision.
#[derive(Debug, Clone)]
pub struct Cx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cx {
    pub fn zero(ctx: &Ctx) -> Self {
        Cx {
            re: ctx.zero(),
            im: ctx.zero(),
        }
    }

    pub fn from_rats(ctx: &Ctx, re: &Rat, im: &Rat) -> Self {
        Cx {
            re: ctx.from_rat(re),
            im: ctx.from_rat(im),
        }
    }

    pub fn add(&self, o: &Cx, ctx: &Ctx) -> Cx {
        Cx {
            re: ctx.add(&self.re, &o.re),
            im: ctx.add(&self.im, &o.im),
        }
    }

    pub fn sub(&self, o: &Cx, ctx: &Ctx) -> Cx {
        Cx {
            re: ctx.sub(&self.re, &o.re),
            im: ctx.sub(&self.im, &o.im),
        }
    }

    pub fn mul(&self, o: &Cx, ctx: &Ctx) -> Cx {
        Cx {
            re: ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im)),
            im: ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re)),
        }
    }

    pub fn mul_real(&self, r: &BigFloat, ctx: &Ctx) -> Cx {
        Cx {
            re: ctx.mul(&self.re, r),
            im: ctx.mul(&self.im, r),
        }
    }

    pub fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn abs_sq(&self, ctx: &Ctx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &Ctx) -> BigFloat {
        ctx.sqrt(&self.abs_sq(ctx))
    }

    pub fn div(&self, o: &Cx, ctx: &Ctx) -> Cx {
        let d = o.abs_sq(ctx);
        let num = self.mul(&o.conj(), ctx);
        Cx {
            re: ctx.div(&num.re, &d),
            im: ctx.div(&num.im, &d),
        }
    }

    pub fn powi(&self, mut e: u32, ctx: &Ctx) -> Cx {
        let mut base = self.clone();
        let mut acc = Cx {
            re: ctx.from_i64(1),
            im: ctx.zero(),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// Lossy conversion for reports and displays.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _n, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // value = 0.mantissa × 2^exp with the top word MSB-normalised
    let top = *words.last().unwrap();
    let mut v = (top as f64) / 18446744073709551616.0; // 2^64
    if words.len() > 1 {
        v += (words[words.len() - 2] as f64) / 18446744073709551616.0 / 18446744073709551616.0;
    }
    let e = exp as i32;
    let scaled = v * (e as f64).exp2();
    if sign == Sign::Neg {
        -scaled
    } else {
        scaled
    }
}

/// Convert an exact integer to a BigFloat with enough precision to be exact
/// at `p` bits (exact if `p` covers the integer's bit length).
pub fn bigfloat_from_bigint(v: &BigInt, p: usize) -> BigFloat {
    let mag: BigUint = v.abs().to_biguint().expect("abs is nonnegative");
    let digits = mag.to_u64_digits();
    let work_p = p.max(64 * digits.len() + 64);
    let two64 = BigFloat::from_f64(18446744073709551616.0, work_p);
    let mut acc = BigFloat::from_i8(0, work_p);
    for d in digits.iter().rev() {
        acc = acc.mul(&two64, work_p, RoundingMode::ToEven);
        acc = acc.add(
            &BigFloat::from_u64(*d, work_p),
            work_p,
            RoundingMode::ToEven,
        );
    }
    if v.is_negative() {
        acc = acc.neg();
    }
    // round to requested precision
    acc.add(&BigFloat::from_i8(0, p), p, RoundingMode::ToEven)
}

/// Round a BigFloat to the nearest BigInt (ties away from zero; exact).
pub fn to_bigint_rounded(x: &BigFloat) -> BigInt {
    if x.is_zero() || x.is_nan() {
        return BigInt::zero();
    }
    let (words, n, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let mut m = BigUint::zero();
    for w in words.iter().rev() {
        m = (m << 64) | BigUint::from(*w);
    }
    // value = m × 2^(exp - n)
    let shift = exp as i64 - n as i64;
    let mag = if shift >= 0 {
        m << (shift as usize)
    } else {
        let s = (-shift) as usize;
        let half = BigUint::from(1u8) << (s - 1);
        (m + half) >> s
    };
    let v = BigInt::from(mag);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// a ≤ b for finite values.
pub fn bf_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c <= 0)
}

pub fn bf_lt(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c < 0)
}

/// Upper-bound helpers at `BOUND_P` bits with directed rounding.
pub mod bound {
    use super::*;

    pub fn from_rat_up(q: &Rat) -> BigFloat {
        let n = bigfloat_from_bigint(q.numer(), BOUND_P + 64);
        let d = bigfloat_from_bigint(q.denom(), BOUND_P + 64);
        if q.is_negative() {
            n.div(&d, BOUND_P, RoundingMode::ToZero)
        } else {
            n.div(&d, BOUND_P, RoundingMode::Up)
        }
    }

    pub fn add_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, BOUND_P, RoundingMode::Up)
    }

    pub fn mul_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, BOUND_P, RoundingMode::Up)
    }

    pub fn div_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, BOUND_P, RoundingMode::Up)
    }

    pub fn sub_down(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, BOUND_P, RoundingMode::Down)
    }

    /// Inflate a nonnegative round-to-nearest value into a rigorous upper
    /// bound: multiply by (1 + 2⁻⁴⁸), far above any rounding error at the
    /// precisions in use.
    pub fn inflate(x: &BigFloat) -> BigFloat {
        let one_plus = BigFloat::from_f64(1.0 + 3.6e-15, BOUND_P);
        x.mul(&one_plus, BOUND_P, RoundingMode::Up)
    }

    /// Upper bound for e^x (directed rounding plus inflation).
    pub fn exp_up(x: &BigFloat, cc: &mut Consts) -> BigFloat {
        let v = x.exp(BOUND_P, RoundingMode::Up, cc);
        inflate(&v)
    }

    /// 2^k as a bound-precision value.
    pub fn pow2(k: i64) -> BigFloat {
        let mut v = BigFloat::from_i8(1, BOUND_P);
        let two = BigFloat::from_i8(2, BOUND_P);
        let half = BigFloat::from_f64(0.5, BOUND_P);
        if k >= 0 {
            for _ in 0..k {
                v = v.mul(&two, BOUND_P, RoundingMode::Up);
            }
        } else {
            for _ in 0..(-k) {
                v = v.mul(&half, BOUND_P, RoundingMode::Up);
            }
        }
        v
    }
}
