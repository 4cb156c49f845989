//! Exact integer `q`-expansions of eta-quotient newforms, plus rigorous
//! point evaluation with tail bounds.
//!
//! The corpus is restricted to rational newforms that are pure eta
//! quotients, so every coefficient is an exact integer and the recognition
//! target downstream is exactly `ℚ(ζ_M)`.

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bignum::{bound, to_f64, Ctx, Cx, Rat, BOUND_P};
use crate::{Error, Result};

/// An eta quotient `∏_m η(mz)^{r_m}` on `Γ₀(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotient {
    pub label: String,
    #[serde(rename = "N")]
    pub level: u64,
    #[serde(rename = "k")]
    pub weight: u32,
    /// Factors `(m, r)` meaning `η(mz)^r`.
    pub eta: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(label: &str, level: u64, eta: Vec<(u64, i64)>) -> Result<Self> {
        let r_sum: i64 = eta.iter().map(|&(_, r)| r).sum();
        if r_sum <= 0 || r_sum % 2 != 0 {
            return Err(Error::InvalidEtaQuotient(format!(
                "weight ½Σr = {r_sum}/2 must be a positive integer"
            )));
        }
        let weight = (r_sum / 2) as u32;
        let q = EtaQuotient {
            label: label.to_string(),
            level,
            weight,
            eta,
        };
        q.validate()?;
        Ok(q)
    }

    /// Level/holomorphy congruences: every `m` divides `N`,
    /// `Σ m·r_m ≡ 0 (mod 24)` and `Σ (N/m)·r_m ≡ 0 (mod 24)`, and the
    /// weight is a positive even integer.
    pub fn validate(&self) -> Result<()> {
        if self.eta.is_empty() {
            return Err(Error::InvalidEtaQuotient("empty eta product".into()));
        }
        for &(m, _) in &self.eta {
            if m == 0 || self.level % m != 0 {
                return Err(Error::InvalidEtaQuotient(format!(
                    "{m} does not divide the level {}",
                    self.level
                )));
            }
        }
        let r_sum: i64 = self.eta.iter().map(|&(_, r)| r).sum();
        if r_sum != 2 * self.weight as i64 || self.weight == 0 || self.weight % 2 != 0 {
            return Err(Error::InvalidEtaQuotient(
                "weight must be a positive even integer equal to ½Σr".into(),
            ));
        }
        let s1: i64 = self.eta.iter().map(|&(m, r)| m as i64 * r).sum();
        let s2: i64 = self
            .eta
            .iter()
            .map(|&(m, r)| (self.level / m) as i64 * r)
            .sum();
        if s1 % 24 != 0 {
            return Err(Error::InvalidEtaQuotient(format!(
                "Σ m·r = {s1} ≢ 0 mod 24"
            )));
        }
        if s2 % 24 != 0 {
            return Err(Error::InvalidEtaQuotient(format!(
                "Σ (N/m)·r = {s2} ≢ 0 mod 24"
            )));
        }
        Ok(())
    }

    /// Leading exponent `Σ m·r_m / 24` of the `q`-expansion.
    pub fn leading_exponent(&self) -> i64 {
        self.eta.iter().map(|&(m, r)| m as i64 * r).sum::<i64>() / 24
    }

    /// Exact integer expansion `Σ_{n≥1} a(n) qⁿ` up to `q^T`.
    pub fn expand(&self, trunc: usize) -> Result<NewformRecord> {
        let lead = self.leading_exponent();
        if lead < 1 {
            return Err(Error::InvalidEtaQuotient(format!(
                "leading exponent {lead} must be ≥ 1"
            )));
        }
        if (lead as usize) > trunc {
            return Err(Error::InvalidEtaQuotient(format!(
                "truncation {trunc} below leading exponent {lead}"
            )));
        }
        // G(q) = ∏ (∏_{n}(1 − q^{mn}))^{r}: needs trunc − lead + 1 terms.
        let len = trunc - lead as usize + 1;
        let mut series = vec![BigInt::zero(); len];
        series[0] = BigInt::one();
        for &(m, r) in &self.eta {
            let sparse = scaled_euler_factor(m as usize, len);
            if r >= 0 {
                for _ in 0..r {
                    series = mul_sparse(&series, &sparse);
                }
            } else {
                for _ in 0..(-r) {
                    series = div_sparse(&series, &sparse);
                }
            }
        }
        // shift by q^lead: a(n) = series[n - lead]
        let mut coeffs = vec![BigInt::zero(); trunc];
        for (i, c) in series.into_iter().enumerate() {
            let n = i + lead as usize;
            if n <= trunc {
                coeffs[n - 1] = c;
            }
        }
        if !coeffs[0].is_one() {
            return Err(Error::InvalidEtaQuotient(format!(
                "{}: a(1) = {} ≠ 1, not a normalised newform expansion",
                self.label, coeffs[0]
            )));
        }
        Ok(NewformRecord {
            label: self.label.clone(),
            level: self.level,
            weight: self.weight,
            coeffs,
        })
    }
}

/// Pentagonal-number expansion of the Euler factor `∏_{n≥1}(1 − q^{mn})`,
/// as a sparse list of `(exponent, ±1)` below `len`.
fn scaled_euler_factor(m: usize, len: usize) -> Vec<(usize, BigInt)> {
    let mut out = vec![(0usize, BigInt::one())];
    let mut k = 1u64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        let sign = if k % 2 == 1 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let e1 = g1 as usize * m;
        if e1 >= len {
            break;
        }
        out.push((e1, sign.clone()));
        let e2 = g2 as usize * m;
        if e2 < len {
            out.push((e2, sign));
        }
        k += 1;
    }
    out.sort_by_key(|&(e, _)| e);
    out
}

/// Coefficients of `∏(1 − qⁿ)` up to `q^{len-1}` (the eta series without
/// its `q^{1/24}` prefactor).
pub fn eta_series(len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (e, c) in scaled_euler_factor(1, len) {
        out[e] = c;
    }
    out
}

fn mul_sparse(dense: &[BigInt], sparse: &[(usize, BigInt)]) -> Vec<BigInt> {
    let len = dense.len();
    let mut out = vec![BigInt::zero(); len];
    for &(e, ref c) in sparse {
        if c.is_one() {
            for i in 0..len - e {
                if !dense[i].is_zero() {
                    out[i + e] += &dense[i];
                }
            }
        } else {
            for i in 0..len - e {
                if !dense[i].is_zero() {
                    out[i + e] += c * &dense[i];
                }
            }
        }
    }
    out
}

/// Synthetic division by a sparse series with constant term 1.
fn div_sparse(dense: &[BigInt], sparse: &[(usize, BigInt)]) -> Vec<BigInt> {
    debug_assert!(sparse[0].0 == 0 && sparse[0].1.is_one());
    let len = dense.len();
    let mut out = vec![BigInt::zero(); len];
    for n in 0..len {
        let mut v = dense[n].clone();
        for &(e, ref c) in &sparse[1..] {
            if e > n {
                break;
            }
            v -= c * &out[n - e];
        }
        out[n] = v;
    }
    out
}

/// A rational newform with exact integer coefficients `a(1..=T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    coeffs: Vec<BigInt>,
}

impl NewformRecord {
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// The corpus is restricted to rational newforms: ℚ(f) = ℚ.
    pub fn coefficient_field_degree(&self) -> u32 {
        1
    }

    /// a(n) for 1 ≤ n ≤ T.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Hecke multiplicativity spot check: `a(mn) = a(m)a(n)` for coprime
    /// `m, n` with `mn` below the given cap.
    pub fn check_multiplicativity(&self, cap: usize) -> Result<()> {
        let cap = cap.min(self.coeffs.len());
        for m in 2..cap {
            for n in m + 1..=cap / m {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let lhs = self.coeff(m * n);
                let rhs = self.coeff(m) * self.coeff(n);
                if *lhs != rhs {
                    return Err(Error::InvalidEtaQuotient(format!(
                        "{}: a({m}·{n}) = {lhs} ≠ a({m})a({n}) = {rhs}",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Corpus file schema: the eta description plus an optional coefficient
/// cache (decimal strings).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusFile {
    #[serde(flatten)]
    pub eta: EtaQuotient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<String>>,
}

impl CorpusFile {
    pub fn to_record(&self, trunc: usize) -> Result<NewformRecord> {
        if let Some(cached) = &self.coeffs {
            if cached.len() >= trunc {
                let coeffs: Result<Vec<BigInt>> = cached[..trunc]
                    .iter()
                    .map(|s| {
                        s.parse()
                            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
                    })
                    .collect();
                return Ok(NewformRecord {
                    label: self.eta.label.clone(),
                    level: self.eta.level,
                    weight: self.eta.weight,
                    coeffs: coeffs?,
                });
            }
        }
        self.eta.expand(trunc)
    }

    pub fn from_record(eta: &EtaQuotient, record: &NewformRecord) -> Self {
        CorpusFile {
            eta: eta.clone(),
            coeffs: Some(record.coeffs.iter().map(|c| c.to_string()).collect()),
        }
    }
}

const BUILTIN_CORPUS: &[(&str, &str)] = &[
    ("1a", include_str!("../data/corpus/1a.json")),
    ("11a", include_str!("../data/corpus/11a.json")),
    ("20a", include_str!("../data/corpus/20a.json")),
    ("27a", include_str!("../data/corpus/27a.json")),
    ("32a", include_str!("../data/corpus/32a.json")),
    ("36a", include_str!("../data/corpus/36a.json")),
];

pub fn corpus_labels() -> Vec<&'static str> {
    BUILTIN_CORPUS.iter().map(|(l, _)| *l).collect()
}

/// One of the built-in eta-quotient newforms.
pub fn corpus_form(label: &str) -> Result<EtaQuotient> {
    for (l, json) in BUILTIN_CORPUS {
        if l.eq_ignore_ascii_case(label) {
            let file: CorpusFile = serde_json::from_str(json)?;
            file.eta.validate()?;
            return Ok(file.eta);
        }
    }
    Err(Error::Parse(format!(
        "unknown corpus form {label:?}; built-ins are {:?}",
        corpus_labels()
    )))
}

/// Resolve a CLI `--form` argument: a built-in label or a corpus JSON path.
pub fn load_form(arg: &str) -> Result<CorpusFile> {
    for (l, json) in BUILTIN_CORPUS {
        if l.eq_ignore_ascii_case(arg) {
            return Ok(serde_json::from_str(json)?);
        }
    }
    let text = std::fs::read_to_string(arg)?;
    let file: CorpusFile = serde_json::from_str(&text)?;
    file.eta.validate()?;
    Ok(file)
}

// ---------------------------------------------------------------------------
// rigorous evaluation
// ---------------------------------------------------------------------------

/// Result of evaluating the truncated series at a point, with a rigorous
/// tail bound and a rounding-error model.
#[derive(Debug)]
pub struct Evaluation {
    pub value: Cx,
    /// Bound on |Σ_{n>T} a(n)qⁿ| from |a(n)| ≤ d(n)·n^{(k−1)/2} ≤ n^{k/2+1}.
    pub tail: BigFloat,
    /// Bound on accumulated floating-point error (already includes the
    /// safety factor).
    pub rounding: BigFloat,
}

impl Evaluation {
    pub fn total_error(&self) -> BigFloat {
        bound::add_up(&self.tail, &self.rounding)
    }
}

/// Upper bound for `Σ_{n>T} n^m xⁿ` by geometric majorization, where
/// `m = k/2 + 1` majorizes `|a(n)| ≤ d(n)n^{(k−1)/2}`. Returns `None` when
/// the term ratio bound is ≥ 1 (T too small for the height).
pub fn tail_bound(weight: u32, terms: usize, y: &Rat, ctx: &mut Ctx) -> Option<BigFloat> {
    debug_assert!(y.is_positive());
    let m = (weight / 2 + 1) as i64;
    // r = e^{−2πy}, rounded up.
    let r = {
        let two_pi_down = {
            let pi = ctx.cc.pi(BOUND_P, RoundingMode::Down);
            pi.mul(&BigFloat::from_i8(2, BOUND_P), BOUND_P, RoundingMode::Down)
        };
        let y_down = {
            let n = crate::bignum::bigfloat_from_bigint(y.numer(), BOUND_P + 64);
            let d = crate::bignum::bigfloat_from_bigint(y.denom(), BOUND_P + 64);
            n.div(&d, BOUND_P, RoundingMode::Down)
        };
        let x = two_pi_down.mul(&y_down, BOUND_P, RoundingMode::Down).neg();
        bound::exp_up(&x, &mut ctx.cc)
    };
    let t1 = BigFloat::from_u64(terms as u64 + 1, BOUND_P);
    let t2 = BigFloat::from_u64(terms as u64 + 2, BOUND_P);
    // ratio bound r0 = ((T+2)/(T+1))^m · r
    let mut ratio = bound::div_up(&t2, &t1);
    let mut r0 = BigFloat::from_i8(1, BOUND_P);
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            r0 = bound::mul_up(&r0, &ratio);
        }
        ratio = bound::mul_up(&ratio, &ratio);
        e >>= 1;
    }
    r0 = bound::mul_up(&r0, &r);
    let one = BigFloat::from_i8(1, BOUND_P);
    if !crate::bignum::bf_lt(&r0, &one) {
        return None;
    }
    // first term (T+1)^m · r^{T+1}
    let mut tm = BigFloat::from_i8(1, BOUND_P);
    for _ in 0..m {
        tm = bound::mul_up(&tm, &t1);
    }
    let mut rp = BigFloat::from_i8(1, BOUND_P);
    let mut base = r;
    let mut e = terms as u64 + 1;
    while e > 0 {
        if e & 1 == 1 {
            rp = bound::mul_up(&rp, &base);
        }
        base = bound::mul_up(&base, &base);
        e >>= 1;
    }
    let first = bound::mul_up(&tm, &rp);
    let denom = bound::sub_down(&one, &r0);
    Some(bound::div_up(&first, &denom))
}

/// Evaluate `Σ_{n≤T} a(n)·e^{2πinz}` at `z = x + iy` (exact rational input)
/// by Horner recursion, returning the value together with rigorous error
/// data.
///
/// On request, errors when the tail bound exceeds `tol` — the caller must
/// then raise the truncation, not silently accept a degraded value.
pub fn evaluate(
    record: &NewformRecord,
    x: &Rat,
    y: &Rat,
    tol: Option<&BigFloat>,
    ctx: &mut Ctx,
) -> Result<Evaluation> {
    if !y.is_positive() {
        return Err(Error::precondition(
            "evaluation point must satisfy Im z > 0",
        ));
    }
    let terms = record.truncation();
    let tail = tail_bound(record.weight, terms, y, ctx).ok_or_else(|| {
        Error::ToleranceUnachievable(format!(
            "tail does not converge for T = {terms} at height {}",
            crate::bignum::to_f64(&bound::from_rat_up(y)),
        ))
    })?;
    if let Some(tol) = tol {
        if !crate::bignum::bf_le(&tail, tol) {
            return Err(Error::ToleranceUnachievable(format!(
                "tail bound {:.3e} exceeds tolerance {:.3e} at T = {terms}, height {:.4}",
                to_f64(&tail),
                to_f64(tol),
                to_f64(&bound::from_rat_up(y)),
            )));
        }
    }

    // q = e^{2πiz} = e^{−2πy}·e^{2πix}
    let phase = ctx.exp_2pi_i(x);
    let radius = ctx.exp_neg_2pi(y);
    let q = phase.mul_real(&radius, ctx);

    // Horner: value = q·(a_1 + q·(a_2 + … q·a_T))
    let mut acc = Cx::zero(ctx);
    for n in (1..=terms).rev() {
        acc = acc.mul(&q, ctx);
        let a = record.coeff(n);
        if !a.is_zero() {
            let c = ctx.from_bigint(a);
            acc = Cx {
                re: ctx.add(&acc.re, &c),
                im: acc.im,
            };
        }
    }
    let value = acc.mul(&q, ctx);

    // Rounding model: |q| < 1 and each Horner step is one complex
    // multiply-add, so accumulated error ≤ abs_sum · T · 2^(6−p) with
    // abs_sum = Σ|a(n)||q|ⁿ ≤ Σ|a(n)| (crude but cheap); the 2^6 factor
    // absorbs per-step constants and the ×8 safety margin.
    let mut abs_sum = BigFloat::from_i8(0, BOUND_P);
    for n in 1..=terms {
        let a = record.coeff(n);
        if !a.is_zero() {
            let av = crate::bignum::bigfloat_from_bigint(&a.abs(), BOUND_P);
            abs_sum = bound::add_up(&abs_sum, &av);
        }
    }
    let steps = BigFloat::from_u64(terms as u64, BOUND_P);
    let ulp = bound::pow2(6 - ctx.p as i64);
    let rounding = bound::mul_up(&bound::mul_up(&abs_sum, &steps), &ulp);

    Ok(Evaluation {
        value,
        tail,
        rounding,
    })
}
