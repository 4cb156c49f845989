//! Numerical Fourier expansion of `f‖ₖσ` at a cusp.
//!
//! The function is sampled on one horizontal line in the cusp coordinate
//! and the coefficients are recovered by an exact inverse DFT, so the error
//! analysis has three rigorously bounded parts per coefficient:
//!
//! - the series tail and rounding error of each sample, amplified by
//!   `e^{2πnY/W}`;
//! - an aliasing bound for the indices `n + jP` folded onto `n`, derived
//!   from a sup bound for `|f‖ₖσ|` on a lower line;
//! - the DFT's own rounding, modelled with a fixed safety factor.
//!
//! The pulled-back sample points `σ·z_j` and the automorphy prefactors
//! `(cz_j+d)^{-k}` are computed in exact rational arithmetic; floating
//! point enters only in the series evaluation and the final DFT.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bignum::{bound, to_f64, Ctx, Cx, Rat, BOUND_P};
use crate::cuspcore::{self, IntegerMatrix2x2};
use crate::etaforms::{evaluate, tail_bound, NewformRecord};
use crate::{Error, Result};

/// Sampling plan for one expansion run.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingPlan {
    /// Height of the sampling line in the cusp coordinate (exact rational).
    #[serde(serialize_with = "ser_rat")]
    pub height: Rat,
    /// Number of sample points; a power of two, at least `4·n_max`.
    pub samples: usize,
    /// Series truncation used at every sample.
    pub truncation: usize,
    /// Highest coefficient index recovered.
    pub n_max: usize,
    /// Sampling period is `period_multiple · width`; values > 1 refine the
    /// index lattice for support checks.
    pub period_multiple: u64,
    /// Working precision in bits.
    pub precision: usize,
}

fn ser_rat<S: serde::Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        if !self.samples.is_power_of_two() {
            return Err(Error::precondition("sample count must be a power of two"));
        }
        if self.samples < 4 * self.n_max.max(1) {
            return Err(Error::precondition("need P ≥ 4·n_max samples"));
        }
        if !self.height.is_positive() {
            return Err(Error::precondition("sampling height must be positive"));
        }
        if self.period_multiple == 0 {
            return Err(Error::precondition("period multiple must be ≥ 1"));
        }
        if self.precision < 64 {
            return Err(Error::precondition("precision below 64 bits"));
        }
        Ok(())
    }
}

/// One recovered coefficient `b_n` of `Σ b_n e^{2πinz/W}` with its error
/// bound.
#[derive(Debug)]
pub struct Coefficient {
    pub n: usize,
    pub value: Cx,
    pub err: BigFloat,
}

impl Coefficient {
    pub fn err_f64(&self) -> f64 {
        to_f64(&self.err)
    }
}

/// The numerically recovered expansion of `f‖ₖσ`.
#[derive(Debug)]
pub struct ExpansionAtCusp {
    pub form: String,
    pub level: u64,
    pub weight: u32,
    pub sigma: IntegerMatrix2x2,
    /// Cusp width `w = N/gcd(L², N)`.
    pub width: u64,
    /// Sampling period `W = period_multiple · w`; coefficient `n` multiplies
    /// `e^{2πinz/W}`.
    pub period: u64,
    /// Classical field bound `N′ = N/gcd(cd, N)` for this σ.
    pub n_prime: u64,
    pub coefficients: Vec<Coefficient>,
    pub plan: SamplingPlan,
    /// The Shimura normalization factor `N(t_μ𝒪_F)^{-k₀/2}·ξ^{(k₀1−k)/2}`
    /// specialises to 1 over ℚ with t_μ = (1); recorded for the report.
    pub normalization_note: &'static str,
}

impl ExpansionAtCusp {
    pub fn coefficient(&self, n: usize) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.n == n)
    }

    pub fn max_err_f64(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.err_f64())
            .fold(0.0, f64::max)
    }

    /// Indices not on the width lattice (n not a multiple of the period
    /// multiple) whose recovered value exceeds its error bound — empty iff
    /// the support property holds at this resolution.
    pub fn support_violations(&self) -> Vec<usize> {
        let m = self.plan.period_multiple as usize;
        self.coefficients
            .iter()
            .filter(|c| c.n % m != 0)
            .filter(|c| {
                let ctx = Ctx::new(BOUND_P);
                let v = c.value.abs(&ctx);
                !crate::bignum::bf_le(&v, &c.err)
            })
            .map(|c| c.n)
            .collect()
    }

    /// Report rows in the external JSON schema.
    pub fn report_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .map(|c| {
                let (re, im) = c.value.to_f64_pair();
                serde_json::json!({"n": c.n, "re": re, "im": im, "err": c.err_f64()})
            })
            .collect();
        serde_json::json!({
            "form": self.form,
            "sigma": self.sigma.entries(),
            "width": self.width,
            "N_prime": self.n_prime,
            "period": self.period,
            "normalization": self.normalization_note,
            "coeffs": coeffs,
        })
    }
}

/// Exact rational complex pair.
#[derive(Debug, Clone)]
struct RatCx {
    re: Rat,
    im: Rat,
}

impl RatCx {
    fn mul(&self, o: &RatCx) -> RatCx {
        RatCx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn inv(&self) -> RatCx {
        let d = &self.re * &self.re + &self.im * &self.im;
        RatCx {
            re: &self.re / &d,
            im: -(&self.im / &d),
        }
    }

    fn powi(&self, e: u32) -> RatCx {
        let mut acc = RatCx {
            re: Rat::from_integer(BigInt::from(1)),
            im: Rat::zero(),
        };
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    fn abs_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// The pulled-back point `σ·(x+iy)` and the exact prefactor `(cz+d)^{-k}`.
fn pullback(sigma: &IntegerMatrix2x2, x: &Rat, y: &Rat, weight: u32) -> (Rat, Rat, RatCx) {
    let (a, b, c, d) = (sigma.a, sigma.b, sigma.c, sigma.d);
    if c == 0 {
        // σ = ±(1, b; 0, 1): σz = z + b/d, prefactor d^{-k} = 1 (k even).
        let shift = Rat::new(BigInt::from(b), BigInt::from(d));
        (
            x + shift,
            y.clone(),
            RatCx {
                re: Rat::from_integer(BigInt::from(1)),
                im: Rat::zero(),
            },
        )
    } else {
        let cz_d = RatCx {
            re: Rat::from_integer(BigInt::from(c)) * x + Rat::from_integer(BigInt::from(d)),
            im: Rat::from_integer(BigInt::from(c)) * y,
        };
        // σz = a/c − 1/(c(cz+d))
        let t = RatCx {
            re: Rat::from_integer(BigInt::from(c)) * &cz_d.re,
            im: Rat::from_integer(BigInt::from(c)) * &cz_d.im,
        };
        let t_inv = t.inv();
        let u = Rat::new(BigInt::from(a), BigInt::from(c)) - t_inv.re;
        let v = -t_inv.im;
        debug_assert!(v.is_positive());
        let prefactor = cz_d.powi(weight).inv();
        (u, v, prefactor)
    }
}

/// Sup bound for `|f‖ₖσ|` on the line at height `h_line` over one period
/// window centred on the cusp: `(|c|·h_line)^{-k} · B(h_min)` where `B` sums
/// `|a(n)|e^{-2πn·h_min}` plus the series tail.
fn sup_line_bound(
    record: &NewformRecord,
    sigma: &IntegerMatrix2x2,
    period: &Rat,
    h_line: &Rat,
    ctx: &mut Ctx,
) -> Result<BigFloat> {
    let c = sigma.c;
    let (h_min, pref_up) = if c == 0 {
        (h_line.clone(), BigFloat::from_i8(1, BOUND_P))
    } else {
        let cw2 =
            Rat::from_integer(BigInt::from(c.abs())) * period / Rat::from_integer(BigInt::from(2));
        let ch = Rat::from_integer(BigInt::from(c.abs())) * h_line;
        let h_min = h_line / (&cw2 * &cw2 + &ch * &ch);
        // |cz+d| ≥ |c|·h_line on the whole line
        let inv = (Rat::from_integer(BigInt::from(1)) / ch).abs();
        let mut p = Rat::from_integer(BigInt::from(1));
        for _ in 0..record.weight {
            p = &p * &inv;
        }
        (h_min, bound::from_rat_up(&p))
    };
    let tail = tail_bound(record.weight, record.truncation(), &h_min, ctx).ok_or_else(|| {
        Error::ToleranceUnachievable(format!(
            "aliasing sup bound needs more series terms at height {:.5}",
            to_f64(&bound::from_rat_up(&h_min))
        ))
    })?;
    // Σ |a(n)| rⁿ at BOUND_P with upward rounding (reverse Horner).
    let r = {
        let e = ctx.exp_neg_2pi(&h_min);
        bound::inflate(&e)
    };
    let mut acc = BigFloat::from_i8(0, BOUND_P);
    for n in (1..=record.truncation()).rev() {
        acc = bound::mul_up(&acc, &r);
        let a = record.coeff(n);
        if !a.is_zero() {
            acc = bound::add_up(
                &acc,
                &crate::bignum::bigfloat_from_bigint(&a.abs(), BOUND_P),
            );
        }
    }
    let series = bound::mul_up(&acc, &r);
    Ok(bound::mul_up(&pref_up, &bound::add_up(&series, &tail)))
}

/// Recover `b_0..b_{n_max}` of `f‖ₖσ(z) = Σ b_n e^{2πinz/W}`.
pub fn expand_at_cusp(
    record: &NewformRecord,
    sigma: &IntegerMatrix2x2,
    plan: &SamplingPlan,
) -> Result<ExpansionAtCusp> {
    if !sigma.is_unimodular() {
        return Err(Error::precondition("sigma must have determinant 1"));
    }
    plan.validate()?;
    if plan.truncation > record.truncation() {
        return Err(Error::precondition(format!(
            "plan needs {} series terms but the record carries {}",
            plan.truncation,
            record.truncation()
        )));
    }
    let n_level = record.level as i64;
    let w = cuspcore::width(n_level, sigma.c) as u64;
    let period = plan.period_multiple * w;
    let period_rat = Rat::from_integer(BigInt::from(period));
    let p_samples = plan.samples;
    let y = plan.height.clone();

    // Window centred on the pole −d/c (c ≠ 0); arbitrary for c = 0.
    let x0 = if sigma.c != 0 {
        Rat::new(BigInt::from(-sigma.d), BigInt::from(sigma.c))
            - &period_rat / Rat::from_integer(BigInt::from(2))
    } else {
        Rat::zero()
    };

    // --- samples (parallel; exact pullback per point) ---
    let sample_results: Vec<Result<(Cx, BigFloat)>> = (0..p_samples)
        .into_par_iter()
        .map_init(
            || Ctx::new(plan.precision),
            |ctx, j| {
                let xj = &x0
                    + &period_rat
                        * Rat::new(BigInt::from(j as i64), BigInt::from(p_samples as i64));
                let (u, v, prefactor) = pullback(sigma, &xj, &y, record.weight);
                let ev = evaluate(record, &u, &v, None, ctx)?;
                let pref = Cx::from_rats(ctx, &prefactor.re, &prefactor.im);
                let val = ev.value.mul(&pref, ctx);
                // |prefactor| upper bound scales the sample error.
                let pref_abs_sq = bound::from_rat_up(&prefactor.abs_sq());
                let pref_abs = pref_abs_sq.sqrt(BOUND_P, astro_float::RoundingMode::Up);
                let err = bound::mul_up(&pref_abs, &ev.total_error());
                Ok((val, err))
            },
        )
        .collect();
    let mut samples = Vec::with_capacity(p_samples);
    let mut sample_err_sum = BigFloat::from_i8(0, BOUND_P);
    let mut sample_abs_max = BigFloat::from_i8(0, BOUND_P);
    {
        let ctx = Ctx::new(BOUND_P);
        for r in sample_results {
            let (val, err) = r?;
            sample_err_sum = bound::add_up(&sample_err_sum, &err);
            let a = val.abs(&ctx);
            if crate::bignum::bf_lt(&sample_abs_max, &a) {
                sample_abs_max = a;
            }
            samples.push(val);
        }
    }
    let mean_sample_err = bound::div_up(
        &sample_err_sum,
        &BigFloat::from_u64(p_samples as u64, BOUND_P),
    );

    // --- aliasing bound ingredients (line at half height) ---
    let mut bound_ctx = Ctx::new(plan.precision.min(192));
    let half_height = &y / Rat::from_integer(BigInt::from(2));
    let sup_half = sup_line_bound(record, sigma, &period_rat, &half_height, &mut bound_ctx)?;
    // ρ = e^{−2πP(y − y/2)/W} = e^{−πPy/W}
    let rho = {
        let t = Rat::from_integer(BigInt::from(p_samples as i64)) * &half_height / &period_rat;
        bound::inflate(&bound_ctx.exp_neg_2pi(&t))
    };
    let one = BigFloat::from_i8(1, BOUND_P);
    if !crate::bignum::bf_lt(&rho, &one) {
        return Err(Error::ToleranceUnachievable(
            "aliasing ratio not contractive; raise P or the height".into(),
        ));
    }
    let alias_base = bound::mul_up(
        &sup_half,
        &bound::div_up(&rho, &bound::sub_down(&one, &rho)),
    );

    // --- inverse DFT ---
    let mut ctx = Ctx::new(plan.precision);
    let roots: Vec<Cx> = (0..p_samples)
        .map(|t| {
            ctx.exp_2pi_i(&Rat::new(
                BigInt::from(-(t as i64)),
                BigInt::from(p_samples as i64),
            ))
        })
        .collect();
    let inv_p = {
        let p_bf = ctx.from_i64(p_samples as i64);
        ctx.div(&ctx.from_i64(1), &p_bf)
    };
    let mut coefficients = Vec::with_capacity(plan.n_max + 1);
    for n in 0..=plan.n_max {
        let mut s = Cx::zero(&ctx);
        for (j, f) in samples.iter().enumerate() {
            let k = (n * j) % p_samples;
            s = s.add(&f.mul(&roots[k], &ctx), &ctx);
        }
        // phase from the window offset and the exponential amplification
        let phase =
            ctx.exp_2pi_i(&(-(&x0 * Rat::from_integer(BigInt::from(n as i64))) / &period_rat));
        let amp_arg = -(Rat::from_integer(BigInt::from(n as i64)) * &y / &period_rat);
        let amp = ctx.exp_neg_2pi(&amp_arg); // e^{+2πny/W}
        let value = s.mul(&phase, &ctx).mul_real(&ctx.mul(&amp, &inv_p), &ctx);

        // error bound
        let amp_up = {
            let t = Rat::from_integer(BigInt::from(n as i64)) * &y / &period_rat;
            bound::inflate(&bound_ctx.exp_neg_2pi(&-t))
        };
        let amplified_sample = bound::mul_up(&amp_up, &mean_sample_err);
        let alias_n = {
            // e^{2πn(y/2)/W} · alias_base
            let t = Rat::from_integer(BigInt::from(n as i64)) * &half_height / &period_rat;
            let e = bound::inflate(&bound_ctx.exp_neg_2pi(&-t));
            bound::mul_up(&e, &alias_base)
        };
        let dft_round = {
            let ops = BigFloat::from_u64((p_samples + 8) as u64, BOUND_P);
            let ulp = bound::pow2(6 - plan.precision as i64);
            bound::mul_up(
                &amp_up,
                &bound::mul_up(&sample_abs_max, &bound::mul_up(&ops, &ulp)),
            )
        };
        let err = bound::add_up(&bound::add_up(&amplified_sample, &alias_n), &dft_round);
        coefficients.push(Coefficient { n, value, err });
    }

    let n_prime = cuspcore::classical_field_bound(n_level, sigma)? as u64;
    Ok(ExpansionAtCusp {
        form: record.label.clone(),
        level: record.level,
        weight: record.weight,
        sigma: *sigma,
        width: w,
        period,
        n_prime,
        coefficients,
        plan: plan.clone(),
        normalization_note:
            "Shimura scaling N(t_mu)^{-k0/2} * xi^{(k0*1-k)/2} = 1 over Q with t_mu = (1)",
    })
}

/// Deterministic plan meeting `tol`: fixes the height at 3/10 of the
/// sampling period, then raises the truncation until the amplified tail
/// fits, the sample count until aliasing fits, and the precision until the
/// rounding model fits. With `precision` fixed by the caller the plan fails
/// (rather than degrades) when that precision cannot reach `tol`.
pub fn choose_plan(
    record: &NewformRecord,
    sigma: &IntegerMatrix2x2,
    n_max: usize,
    tol: f64,
    period_multiple: u64,
    precision: Option<usize>,
) -> Result<SamplingPlan> {
    if !(tol > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    if !sigma.is_unimodular() {
        return Err(Error::precondition("sigma must have determinant 1"));
    }
    let mut ctx = Ctx::new(BOUND_P);
    let w = cuspcore::width(record.level as i64, sigma.c) as u64;
    let period = Rat::from_integer(BigInt::from(period_multiple * w));
    let y = &period * Rat::new(BigInt::from(3), BigInt::from(10));
    let c = sigma.c;
    let h_min = if c == 0 {
        y.clone()
    } else {
        let cw2 =
            Rat::from_integer(BigInt::from(c.abs())) * &period / Rat::from_integer(BigInt::from(2));
        let ch = Rat::from_integer(BigInt::from(c.abs())) * &y;
        &y / (&cw2 * &cw2 + &ch * &ch)
    };

    // amplification A = e^{2π·n_max·y/W} = e^{0.6π·n_max}
    let amp = {
        let t = Rat::from_integer(BigInt::from(n_max as i64)) * &y / &period;
        bound::inflate(&ctx.exp_neg_2pi(&-t))
    };
    let tol_bf = BigFloat::from_f64(tol, BOUND_P);
    let quarter_tol = tol_bf.mul(
        &BigFloat::from_f64(0.25, BOUND_P),
        BOUND_P,
        astro_float::RoundingMode::ToZero,
    );
    let tail_target = quarter_tol.div(&amp, BOUND_P, astro_float::RoundingMode::ToZero);

    // truncation search
    let mut truncation = 64usize;
    loop {
        match tail_bound(record.weight, truncation, &h_min, &mut ctx) {
            Some(t) if crate::bignum::bf_le(&t, &tail_target) => break,
            _ => {
                truncation *= 2;
                if truncation > (1 << 22) {
                    return Err(Error::ToleranceUnachievable(format!(
                        "series truncation diverges at the window edge (height {:.6}); \
                         limiting sample is the period boundary",
                        to_f64(&bound::from_rat_up(&h_min))
                    )));
                }
            }
        }
    }

    // precision from the rounding model: A·(T+P)·2^{6−p}·margin ≤ tol/4
    let samples0 = (4 * n_max.max(1)).next_power_of_two().max(64);
    let log2_amp = to_f64(&amp).log2().max(0.0);
    let needed_bits =
        (log2_amp - tol.log2() + ((truncation + samples0) as f64).log2() + 48.0).ceil() as usize;
    let precision_bits = match precision {
        Some(p) => {
            if p < needed_bits {
                return Err(Error::ToleranceUnachievable(format!(
                    "fixed precision {p} bits cannot reach tol {tol:.3e}; need ≈ {needed_bits}"
                )));
            }
            p
        }
        None => needed_bits.next_multiple_of(64).max(192),
    };

    // sample count: raise until the aliasing bound fits
    let mut samples = samples0;
    loop {
        let rho_t = Rat::from_integer(BigInt::from(samples as i64))
            * (&y / Rat::from_integer(BigInt::from(2)))
            / &period;
        let rho = ctx.exp_neg_2pi(&rho_t);
        // crude sup estimate from the weight majorant at half height
        let h_half = if c == 0 {
            &y / Rat::from_integer(BigInt::from(2))
        } else {
            let cw2 = Rat::from_integer(BigInt::from(c.abs())) * &period
                / Rat::from_integer(BigInt::from(2));
            let yh = &y / Rat::from_integer(BigInt::from(2));
            let ch = Rat::from_integer(BigInt::from(c.abs())) * &yh;
            &yh / (&cw2 * &cw2 + &ch * &ch)
        };
        let majorant = series_majorant(record.weight, &h_half, &mut ctx)?;
        let pref = if c == 0 {
            BigFloat::from_i8(1, BOUND_P)
        } else {
            let ch =
                Rat::from_integer(BigInt::from(c.abs())) * &y / Rat::from_integer(BigInt::from(2));
            let inv = Rat::from_integer(BigInt::from(1)) / ch;
            let mut p = Rat::from_integer(BigInt::from(1));
            for _ in 0..record.weight {
                p = &p * &inv;
            }
            bound::from_rat_up(&p.abs())
        };
        // alias at the worst index n_max
        let lift = {
            let t = Rat::from_integer(BigInt::from(n_max as i64))
                * (&y / Rat::from_integer(BigInt::from(2)))
                / &period;
            ctx.exp_neg_2pi(&-t)
        };
        let alias = bound::mul_up(
            &bound::mul_up(&bound::mul_up(&majorant, &pref), &lift),
            &rho,
        );
        if crate::bignum::bf_le(&alias, &quarter_tol) {
            break;
        }
        samples *= 2;
        if samples > (1 << 16) {
            return Err(Error::ToleranceUnachievable(
                "aliasing bound will not contract; tolerance too small for this cusp".into(),
            ));
        }
    }

    Ok(SamplingPlan {
        height: y,
        samples,
        truncation,
        n_max,
        period_multiple,
        precision: precision_bits,
    })
}

/// Upper bound for Σ_{n≥1} n^{k/2+1} e^{-2πnh}.
fn series_majorant(weight: u32, h: &Rat, ctx: &mut Ctx) -> Result<BigFloat> {
    let m = (weight / 2 + 1) as u64;
    // find a T past the ratio hump, then partial sum + tail
    let mut t = 16usize;
    let tail = loop {
        if let Some(b) = tail_bound(weight, t, h, ctx) {
            break b;
        }
        t *= 2;
        if t > (1 << 22) {
            return Err(Error::ToleranceUnachievable(
                "majorant does not converge".into(),
            ));
        }
    };
    let r = bound::inflate(&ctx.exp_neg_2pi(h));
    let mut acc = BigFloat::from_i8(0, BOUND_P);
    for n in (1..=t).rev() {
        acc = bound::mul_up(&acc, &r);
        let mut nm = BigFloat::from_u64(n as u64, BOUND_P);
        let mut p = BigFloat::from_i8(1, BOUND_P);
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                p = bound::mul_up(&p, &nm);
            }
            nm = bound::mul_up(&nm, &nm);
            e >>= 1;
        }
        acc = bound::add_up(&acc, &p);
    }
    let partial = bound::mul_up(&acc, &r);
    Ok(bound::add_up(&partial, &tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaforms::corpus_form;

    fn plan_for(
        record: &NewformRecord,
        sigma: &IntegerMatrix2x2,
        n_max: usize,
        tol: f64,
    ) -> (NewformRecord, SamplingPlan) {
        let plan = choose_plan(record, sigma, n_max, tol, 1, None).unwrap();
        // re-expand to the required truncation
        let eq = corpus_form(&record.label).unwrap();
        let rec = eq.expand(plan.truncation.max(record.truncation())).unwrap();
        (rec, plan)
    }

    #[test]
    fn identity_roundtrip_level_eleven() {
        let rec0 = corpus_form("11a").unwrap().expand(64).unwrap();
        let sigma = IntegerMatrix2x2::identity();
        let (rec, plan) = plan_for(&rec0, &sigma, 12, 1e-20);
        let exp = expand_at_cusp(&rec, &sigma, &plan).unwrap();
        assert_eq!(exp.width, 1);
        assert_eq!(exp.n_prime, 1);
        let ctx = Ctx::new(96);
        for n in 1..=12 {
            let c = exp.coefficient(n).unwrap();
            let expect = ctx.from_bigint(rec.coeff(n));
            let diff = ctx.sub(&c.value.re, &expect);
            assert!(
                crate::bignum::bf_le(&diff.abs(), &c.err),
                "n={n}: re diff above err"
            );
            assert!(crate::bignum::bf_le(&c.value.im.abs(), &c.err));
            assert!(c.err_f64() < 1e-10);
        }
        // b0 below tolerance (cusp form)
        let b0 = exp.coefficient(0).unwrap();
        let b0abs = b0.value.abs(&ctx);
        assert!(crate::bignum::bf_le(&b0abs, &b0.err));
    }

    #[test]
    fn fricke_at_level_eleven_matches_eta_oracle() {
        // f|S at level 11: b_n = −a(n)/11 exactly.
        let rec0 = corpus_form("11a").unwrap().expand(64).unwrap();
        let sigma = IntegerMatrix2x2::new(0, -1, 1, 0);
        let (rec, plan) = plan_for(&rec0, &sigma, 10, 1e-18);
        let exp = expand_at_cusp(&rec, &sigma, &plan).unwrap();
        assert_eq!(exp.width, 11);
        let ctx = Ctx::new(128);
        let eleven = ctx.from_i64(11);
        for n in 1..=10 {
            let c = exp.coefficient(n).unwrap();
            let expect = ctx.div(&ctx.from_bigint(rec.coeff(n)).neg(), &eleven);
            let diff = ctx.sub(&c.value.re, &expect).abs();
            assert!(
                crate::bignum::bf_le(&diff, &c.err),
                "n={n}: {} vs {} (err {})",
                to_f64(&c.value.re),
                to_f64(&expect),
                c.err_f64()
            );
            assert!(crate::bignum::bf_le(&c.value.im.abs(), &c.err), "n={n} im");
        }
    }

    #[test]
    fn refinement_consistency() {
        // doubling P and T moves each coefficient by less than its bound
        let rec0 = corpus_form("20a").unwrap().expand(64).unwrap();
        let sigma = cuspcore::sigma_for_cusp(1, 2).unwrap();
        let (rec, plan) = plan_for(&rec0, &sigma, 8, 1e-16);
        let exp1 = expand_at_cusp(&rec, &sigma, &plan).unwrap();
        let mut plan2 = plan.clone();
        plan2.samples *= 2;
        plan2.truncation = (plan.truncation * 2).min(rec.truncation());
        let eq = corpus_form("20a").unwrap();
        let rec2 = eq.expand(plan2.truncation.max(rec.truncation())).unwrap();
        let exp2 = expand_at_cusp(&rec2, &sigma, &plan2).unwrap();
        let ctx = Ctx::new(128);
        for n in 0..=8 {
            let c1 = exp1.coefficient(n).unwrap();
            let c2 = exp2.coefficient(n).unwrap();
            let d = c1.value.sub(&c2.value, &ctx).abs(&ctx);
            assert!(crate::bignum::bf_le(&d, &c1.err), "n={n}");
        }
    }

    #[test]
    fn support_vanishing_at_doubled_resolution() {
        // sampling at period 2w must put everything on even indices
        let rec0 = corpus_form("20a").unwrap().expand(64).unwrap();
        let sigma = cuspcore::sigma_for_cusp(1, 2).unwrap();
        let plan = choose_plan(&rec0, &sigma, 8, 1e-14, 2, None).unwrap();
        let eq = corpus_form("20a").unwrap();
        let rec = eq.expand(plan.truncation.max(64)).unwrap();
        let exp = expand_at_cusp(&rec, &sigma, &plan).unwrap();
        assert_eq!(exp.period, 2 * exp.width);
        assert!(exp.support_violations().is_empty());
    }

    #[test]
    fn infeasible_tolerance_with_fixed_precision() {
        let rec = corpus_form("11a").unwrap().expand(32).unwrap();
        let sigma = IntegerMatrix2x2::identity();
        let res = choose_plan(&rec, &sigma, 8, 1e-300, 1, Some(128));
        assert!(matches!(res, Err(Error::ToleranceUnachievable(_))));
    }

    #[test]
    fn plan_validation() {
        let rec = corpus_form("11a").unwrap().expand(32).unwrap();
        let sigma = IntegerMatrix2x2::identity();
        let mut plan = choose_plan(&rec, &sigma, 4, 1e-10, 1, None).unwrap();
        plan.samples = 12; // not a power of two
        assert!(expand_at_cusp(&rec, &sigma, &plan).is_err());
    }
}
