//! The congruence subgroup `Γ_μ(𝔫)` over a totally real field, the field
//! bound `N₀` with `N₀ℤ = 𝔫/(cd·t_μ⁻¹𝔇_F⁻¹, 𝔫) ∩ ℤ`, the Fourier-support
//! ideal of `f_μ‖ₖσ`, and the conjugation conditions behind the sufficiency
//! proof.
//!
//! All primed-entry bookkeeping (the local decomposition `σ = x_μ y A y⁻¹
//! x_μ⁻¹`) is rewritten at the ideal level through the valuation identities
//! `(a′) = (a)` and `(c′) = (c)·t_μ⁻¹𝔇⁻¹`, so no uniformizers are ever
//! chosen.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::numberfield::{FieldElement, FractionalIdeal, NumberField, Rat};
use crate::{Error, Result};

/// Level data: the field, an integral level ideal `𝔫`, a narrow-class
/// representative ideal `t_μ` coprime to `𝔫`, and the cached different.
#[derive(Debug, Clone)]
pub struct HilbertLevel {
    field: Arc<NumberField>,
    level: FractionalIdeal,
    t_mu: FractionalIdeal,
    different: FractionalIdeal,
}

impl HilbertLevel {
    pub fn new(
        field: Arc<NumberField>,
        level: FractionalIdeal,
        t_mu: FractionalIdeal,
    ) -> Result<Self> {
        if level.is_zero() || !level.is_integral() {
            return Err(Error::precondition(
                "level ideal must be nonzero and integral",
            ));
        }
        if t_mu.is_zero() || !t_mu.is_integral() {
            return Err(Error::precondition("t_mu must be nonzero and integral"));
        }
        let one = FractionalIdeal::one(field.clone());
        if t_mu.sum(&level)? != one {
            return Err(Error::precondition("t_mu must be coprime to the level"));
        }
        let different = FractionalIdeal::different(field.clone())?;
        Ok(HilbertLevel {
            field,
            level,
            t_mu,
            different,
        })
    }

    /// Same field and t_μ, with the level replaced by `𝒪_F` (the group
    /// `Γ_μ(1)` that the bound computations require σ to lie in).
    pub fn with_unit_level(&self) -> Self {
        HilbertLevel {
            field: self.field.clone(),
            level: FractionalIdeal::one(self.field.clone()),
            t_mu: self.t_mu.clone(),
            different: self.different.clone(),
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn level(&self) -> &FractionalIdeal {
        &self.level
    }

    pub fn t_mu(&self) -> &FractionalIdeal {
        &self.t_mu
    }

    pub fn different(&self) -> &FractionalIdeal {
        &self.different
    }
}

/// 2×2 matrix over the field, determinant cached.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix2x2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    det: FieldElement,
}

impl FieldMatrix2x2 {
    pub fn new(
        field: &NumberField,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Self {
        let det = a.mul(&d, field).sub(&b.mul(&c, field));
        FieldMatrix2x2 { a, b, c, d, det }
    }

    pub fn det(&self) -> &FieldElement {
        &self.det
    }

    pub fn identity(field: &NumberField) -> Self {
        Self::new(
            field,
            FieldElement::one(field),
            FieldElement::zero(field),
            FieldElement::zero(field),
            FieldElement::one(field),
        )
    }

    /// Lift an integer matrix into the field.
    pub fn from_integer_matrix(field: &NumberField, m: &crate::cuspcore::IntegerMatrix2x2) -> Self {
        Self::new(
            field,
            FieldElement::from_integer(field, m.a),
            FieldElement::from_integer(field, m.b),
            FieldElement::from_integer(field, m.c),
            FieldElement::from_integer(field, m.d),
        )
    }
}

/// Determinant condition selecting the group: any unit of `𝒪_F`, or only
/// totally positive units (the operative choice for the field bound,
/// whose construction of `Γ_μ(𝔫)` goes through `GL₂⁺(F_∞)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum UnitConstraint {
    AnyUnit,
    #[default]
    TotallyPositiveUnit,
}

/// Membership in `Γ_μ(𝔫)`: `a, d ∈ 𝒪_F`, `b ∈ (t_μ)⁻¹𝔇_F⁻¹`,
/// `c ∈ 𝔫·t_μ·𝔇_F`, and `det ∈ 𝒪_F^×` (totally positive if required).
pub fn gamma_mu_member(m: &FieldMatrix2x2, lvl: &HilbertLevel, uc: UnitConstraint) -> Result<bool> {
    let field = lvl.field();
    if !m.a.is_integral() || !m.d.is_integral() {
        return Ok(false);
    }
    let b_lattice = lvl.t_mu().mul(lvl.different())?.inv()?;
    if !b_lattice.contains(&m.b) {
        return Ok(false);
    }
    let c_lattice = lvl.level().mul(lvl.t_mu())?.mul(lvl.different())?;
    if !c_lattice.contains(&m.c) {
        return Ok(false);
    }
    let det = m.det();
    if !det.is_unit(field) {
        return Ok(false);
    }
    if uc == UnitConstraint::TotallyPositiveUnit && !det.is_totally_positive(field) {
        return Ok(false);
    }
    Ok(true)
}

fn require_gamma_mu_one(sigma: &FieldMatrix2x2, lvl: &HilbertLevel) -> Result<()> {
    if gamma_mu_member(sigma, &lvl.with_unit_level(), UnitConstraint::default())? {
        Ok(())
    } else {
        Err(Error::precondition("sigma must lie in Γ_μ(1)"))
    }
}

/// The ideal `(c)(d)·t_μ⁻¹𝔇⁻¹` (zero when `cd = 0`).
fn cd_shifted_ideal(sigma: &FieldMatrix2x2, lvl: &HilbertLevel) -> Result<FractionalIdeal> {
    let field = lvl.field().clone();
    if sigma.c.is_zero() || sigma.d.is_zero() {
        return Ok(FractionalIdeal::zero(field));
    }
    let c_ideal = FractionalIdeal::principal(field.clone(), &sigma.c)?;
    let d_ideal = FractionalIdeal::principal(field, &sigma.d)?;
    let shift = lvl.t_mu().mul(lvl.different())?.inv()?;
    c_ideal.mul(&d_ideal)?.mul(&shift)
}

/// The field bound `N₀`: the positive integer with
/// `N₀ℤ = [𝔫 / gcd(cd·t_μ⁻¹𝔇⁻¹, 𝔫)] ∩ ℤ`.
///
/// Requires `σ ∈ Γ_μ(1)`; integrality of the quotient ideal (hence of `N₀`)
/// is guaranteed by membership and asserted.
pub fn field_bound_n0(sigma: &FieldMatrix2x2, lvl: &HilbertLevel) -> Result<u64> {
    require_gamma_mu_one(sigma, lvl)?;
    let cd = cd_shifted_ideal(sigma, lvl)?;
    let gcd = cd.sum(lvl.level())?;
    let quotient = lvl.level().mul(&gcd.inv()?)?;
    assert!(
        quotient.is_integral(),
        "quotient ideal 𝔫·gcd⁻¹ must be integral for σ ∈ Γ_μ(1)"
    );
    let m = quotient.intersect_integers()?;
    assert!(m.is_integer() && m.is_positive());
    m.to_integer()
        .to_u64()
        .ok_or_else(|| Error::precondition("N0 exceeds u64"))
}

/// The support lattice of the expansion of `f_μ‖ₖσ`: the Fourier indices ξ
/// run over the totally positive elements of `(t_μ𝒪_F)·𝔴(σ,𝔫)⁻¹` where
/// `𝔴(σ,𝔫) = 𝔫·gcd((a′)²𝔫, (c′)²)⁻¹`, computed on unprimed entries via
/// `(a′) = (a)` and `(c′) = (c)·t_μ⁻¹𝔇⁻¹`.
pub fn support_ideal(sigma: &FieldMatrix2x2, lvl: &HilbertLevel) -> Result<FractionalIdeal> {
    require_gamma_mu_one(sigma, lvl)?;
    let field = lvl.field().clone();
    let a_part = if sigma.a.is_zero() {
        FractionalIdeal::zero(field.clone())
    } else {
        FractionalIdeal::principal(field.clone(), &sigma.a)?
            .pow(2)?
            .mul(lvl.level())?
    };
    let c_part = if sigma.c.is_zero() {
        FractionalIdeal::zero(field.clone())
    } else {
        let shift = lvl.t_mu().mul(lvl.different())?.inv()?;
        FractionalIdeal::principal(field.clone(), &sigma.c)?
            .pow(2)?
            .mul(&shift.pow(2)?)?
    };
    let gcd = a_part.sum(&c_part)?;
    let w = lvl.level().mul(&gcd.inv()?)?;
    assert!(w.is_integral(), "𝔴(σ,𝔫) must be integral for σ ∈ Γ_μ(1)");
    lvl.t_mu().mul(&w.inv()?)
}

/// The three conditions of the sufficiency step: whether
/// `x_μ⁻¹·σ·a(α)·σ⁻¹·x_μ ∈ K_v(𝔫)` for all finite `v`, i.e.
///
/// 1. `a′b′(1−α) ∈ 𝒪` — at the ideal level `(a)(b)(1−α) ⊆ t_μ⁻¹𝔇⁻¹`;
/// 2. `c′d′(α−1) ∈ 𝔫` shifted back: `(c)(d)(α−1) ⊆ 𝔫·t_μ·𝔇`;
/// 3. `a′d′ − b′c′α = ad − bcα ∈ 𝒪` (an equality of field elements).
///
/// `α` must be integral and a unit at every prime dividing `𝔫`.
pub fn conjugation_check_hilbert(
    sigma: &FieldMatrix2x2,
    lvl: &HilbertLevel,
    alpha: &FieldElement,
) -> Result<bool> {
    require_gamma_mu_one(sigma, lvl)?;
    let field = lvl.field().clone();
    if !alpha.is_integral() || alpha.is_zero() {
        return Err(Error::precondition(
            "alpha must be a nonzero integral element",
        ));
    }
    let alpha_ideal = FractionalIdeal::principal(field.clone(), alpha)?;
    if alpha_ideal.sum(lvl.level())? != FractionalIdeal::one(field.clone()) {
        return Err(Error::precondition(
            "alpha must be a unit at all primes dividing the level",
        ));
    }

    let one = FieldElement::one(&field);
    let one_minus_alpha = one.sub(alpha);

    // (1) ab(1−α) ∈ t⁻¹𝔇⁻¹
    let cond1 = {
        let prod = sigma.a.mul(&sigma.b, &field).mul(&one_minus_alpha, &field);
        let target = lvl.t_mu().mul(lvl.different())?.inv()?;
        target.contains(&prod)
    };
    // (2) cd(α−1) ∈ 𝔫t𝔇
    let cond2 = {
        let prod = sigma
            .c
            .mul(&sigma.d, &field)
            .mul(&one_minus_alpha.neg(), &field);
        let target = lvl.level().mul(lvl.t_mu())?.mul(lvl.different())?;
        target.contains(&prod)
    };
    // (3) ad − bcα ∈ 𝒪
    let cond3 = {
        let ad = sigma.a.mul(&sigma.d, &field);
        let bca = sigma.b.mul(&sigma.c, &field).mul(alpha, &field);
        ad.sub(&bca).is_integral()
    };
    Ok(cond1 && cond2 && cond3)
}

/// Deterministic grid of integral `β` with coordinate height ≤ `height`,
/// used to sample `α = 1 + N₀β` for the sufficiency oracle.
pub fn beta_grid(field: &NumberField, height: i64, step: i64) -> Vec<FieldElement> {
    let n = field.degree();
    let mut values: Vec<i64> = Vec::new();
    let mut v = -height;
    while v <= height {
        values.push(v);
        v += step;
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let coords: Vec<Rat> = idx
            .iter()
            .map(|&i| Rat::from_integer(BigInt::from(values[i])))
            .collect();
        out.push(FieldElement::from_coords(field, coords).expect("grid coords"));
        // odometer increment
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                return out;
            }
        }
    }
}

/// Summary of one `hbound` evaluation, serialised by the CLI.
#[derive(Debug, Serialize)]
pub struct HboundReport {
    pub field: String,
    pub gamma_member: bool,
    #[serde(rename = "N0", skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(rename = "support_ideal_hnf", skip_serializing_if = "Option::is_none")]
    pub support_ideal: Option<FractionalIdeal>,
    pub checks: HboundChecks,
}

#[derive(Debug, Serialize)]
pub struct HboundChecks {
    pub det_is_unit: bool,
    pub det_totally_positive: bool,
    pub level_integral: bool,
    pub t_mu_coprime_to_level: bool,
}

/// Run the full bound computation for a matrix, tolerating non-membership
/// (reported rather than raised).
pub fn hbound_report(sigma: &FieldMatrix2x2, lvl: &HilbertLevel) -> Result<HboundReport> {
    let field = lvl.field();
    let member = gamma_mu_member(sigma, &lvl.with_unit_level(), UnitConstraint::default())?;
    let (n0, support) = if member {
        (
            Some(field_bound_n0(sigma, lvl)?),
            Some(support_ideal(sigma, lvl)?),
        )
    } else {
        (None, None)
    };
    Ok(HboundReport {
        field: field.name().to_string(),
        gamma_member: member,
        n0,
        support_ideal: support,
        checks: HboundChecks {
            det_is_unit: sigma.det().is_unit(field),
            det_totally_positive: sigma.det().is_totally_positive(field),
            level_integral: lvl.level().is_integral(),
            t_mu_coprime_to_level: lvl.t_mu().sum(lvl.level())?
                == FractionalIdeal::one(field.clone()),
        },
    })
}
