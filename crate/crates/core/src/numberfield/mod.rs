//! Totally real number fields with exact arithmetic.
//!
//! A field is described by the minimal polynomial of a primitive element θ
//! together with an integral basis given in the power basis of θ. All
//! element arithmetic is exact rational arithmetic in coordinates over the
//! integral basis; real embeddings are available as rational interval
//! enclosures at configurable precision.

mod fpfactor;
pub mod ideal;
pub mod roots;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};
use roots::{eval_interval, isolate_real_roots, poly_trim, refine_root, QPoly};

pub use ideal::{split_rational_prime, FractionalIdeal, PrimeFactor};
pub use roots::Rat;

/// A totally real number field of degree `n`, given by an integral basis
/// `ω₁ = 1, ω₂, …, ω_n` over ℤ expressed in the power basis of a primitive
/// element.
#[derive(Debug)]
pub struct NumberField {
    name: String,
    degree: usize,
    /// Monic integer minimal polynomial, ascending coefficients.
    min_poly: Vec<BigInt>,
    /// Integral basis in power-basis coordinates (rows).
    integral_basis: Vec<Vec<Rat>>,
    /// Conversion matrix power-basis coords → integral-basis coords.
    integral_from_power: Vec<Vec<Rat>>,
    /// Structure constants: ωᵢ·ωⱼ = Σ_k mult_table[i][j][k]·ω_k.
    mult_table: Vec<Vec<Vec<BigInt>>>,
    /// Tr(ωᵢ).
    traces: Vec<BigInt>,
    /// Gram matrix Tr(ωᵢωⱼ).
    trace_gram: Vec<Vec<BigInt>>,
    discriminant: BigInt,
    /// Isolating intervals for the real roots of `min_poly`, ascending.
    root_intervals: Vec<(Rat, Rat)>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.integral_basis == other.integral_basis
    }
}
impl Eq for NumberField {}

/// An element of a number field, stored as rational coordinates over the
/// integral basis. Coordinates are always in lowest terms (BigRational
/// canonicalises on construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    coords: Vec<Rat>,
}

// ---------------------------------------------------------------------------
// rational linear algebra helpers
// ---------------------------------------------------------------------------

fn mat_inverse(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut a: Vec<Vec<Rat>> = mat.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for x in inv[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let s = &f * &a[col][c];
                a[r][c] -= s;
                let s = &f * &inv[col][c];
                inv[r][c] -= s;
            }
        }
    }
    Some(inv)
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                let s = &a[i][t] * &b[t][j];
                out[i][j] += s;
            }
        }
    }
    out
}

fn mat_trace(a: &[Vec<Rat>]) -> Rat {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Characteristic polynomial of a rational matrix by Faddeev–LeVerrier.
/// Returns coefficients `[c_n, …, c_1, 1]` ascending, so
/// `p(t) = tⁿ + c₁tⁿ⁻¹ + … + c_n`.
fn charpoly(mat: &[Vec<Rat>]) -> Vec<Rat> {
    let n = mat.len();
    let mut coeffs_desc = vec![Rat::one()];
    let mut nmat: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for k in 1..=n {
        let mk = mat_mul(mat, &nmat);
        let ck = -mat_trace(&mk) / Rat::from_integer(BigInt::from(k as i64));
        nmat = mk;
        for i in 0..n {
            nmat[i][i] += &ck;
        }
        coeffs_desc.push(ck);
    }
    coeffs_desc.reverse();
    coeffs_desc
}

// ---------------------------------------------------------------------------
// NumberField
// ---------------------------------------------------------------------------

impl NumberField {
    /// Build and validate a field from its raw description.
    ///
    /// Validation enforces every invariant of the data model: ω₁ = 1, the
    /// basis spans, the basis is multiplicatively closed over ℤ (an order),
    /// the supplied discriminant matches det Tr(ωᵢωⱼ), and the minimal
    /// polynomial is squarefree with `n` real roots (totally real).
    pub fn new(
        name: impl Into<String>,
        min_poly: Vec<BigInt>,
        integral_basis: Vec<Vec<Rat>>,
        expected_disc: Option<&BigInt>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let min_poly = {
            let mut p = min_poly;
            while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
                p.pop();
            }
            p
        };
        if min_poly.len() < 2 {
            return Err(Error::InvalidField(
                "minimal polynomial must have degree ≥ 1".into(),
            ));
        }
        let n = min_poly.len() - 1;
        if !min_poly[n].is_one() {
            return Err(Error::InvalidField(
                "minimal polynomial must be monic".into(),
            ));
        }
        if integral_basis.len() != n || integral_basis.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidField(format!(
                "integral basis must be {n} vectors of length {n}"
            )));
        }
        // ω₁ = 1 exactly.
        let one_ok =
            integral_basis[0][0].is_one() && integral_basis[0][1..].iter().all(|c| c.is_zero());
        if !one_ok {
            return Err(Error::InvalidField("first basis element must be 1".into()));
        }

        let integral_from_power = mat_inverse(&integral_basis)
            .ok_or_else(|| Error::InvalidField("integral basis is singular".into()))?;

        let min_poly_q: QPoly = min_poly
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();

        // Multiplication table over the integral basis; entries must be
        // integers for the basis to define an order.
        let mut mult_table = vec![vec![vec![BigInt::zero(); n]; n]; n];
        for i in 0..n {
            for j in i..n {
                let prod_pw = poly_mul_mod(&integral_basis[i], &integral_basis[j], &min_poly_q);
                let coords = power_to_integral(&prod_pw, &integral_from_power, n);
                let mut as_int = Vec::with_capacity(n);
                for c in &coords {
                    if !c.is_integer() {
                        return Err(Error::InvalidField(format!(
                            "basis is not multiplicatively closed over ℤ (ω{}·ω{})",
                            i + 1,
                            j + 1
                        )));
                    }
                    as_int.push(c.to_integer());
                }
                mult_table[i][j] = as_int.clone();
                mult_table[j][i] = as_int;
            }
        }

        // Traces of basis elements: Tr(ωᵢ) = trace of multiplication-by-ωᵢ
        // in the regular representation, whose rows are mult_table[i][r].
        let traces: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|r| mult_table[i][r][r].clone()).sum())
            .collect();
        let trace_gram: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &mult_table[i][j][k] * &traces[k]).sum())
                    .collect()
            })
            .collect();
        let gram_q: Vec<Vec<Rat>> = trace_gram
            .iter()
            .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let disc_poly = charpoly(&gram_q);
        // det = (−1)ⁿ · constant coefficient of charpoly.
        let mut discriminant = disc_poly[0].to_integer();
        if n % 2 == 1 {
            discriminant = -discriminant;
        }
        if discriminant.is_zero() {
            return Err(Error::InvalidField("degenerate trace form".into()));
        }
        if let Some(expected) = expected_disc {
            if expected != &discriminant {
                return Err(Error::InvalidField(format!(
                    "declared discriminant {expected} does not match computed {discriminant}"
                )));
            }
        }

        // Totally real: the minimal polynomial must be squarefree with n
        // distinct real roots.
        let derivative = roots::poly_derivative(&min_poly_q);
        if roots::poly_deg(&roots::poly_gcd(&min_poly_q, &derivative)) != 0 {
            return Err(Error::InvalidField(
                "minimal polynomial is not squarefree".into(),
            ));
        }
        let root_intervals = isolate_real_roots(&min_poly_q);
        if root_intervals.len() != n {
            return Err(Error::InvalidField(format!(
                "field is not totally real: {} of {} roots are real",
                root_intervals.len(),
                n
            )));
        }
        if n == 2 {
            // Cheap irreducibility check for the quadratic case: the
            // polynomial discriminant must not be a perfect square.
            let b = &min_poly[1];
            let c = &min_poly[0];
            let d = b * b - BigInt::from(4) * c;
            if d.sqrt().pow(2) == d {
                return Err(Error::InvalidField(
                    "quadratic minimal polynomial is reducible".into(),
                ));
            }
        }

        Ok(Arc::new(NumberField {
            name,
            degree: n,
            min_poly,
            integral_basis,
            integral_from_power,
            mult_table,
            traces,
            trace_gram,
            discriminant,
            root_intervals,
        }))
    }

    /// The rational field ℚ as a degree-1 field.
    pub fn rationals() -> Arc<Self> {
        NumberField::new(
            "Q",
            vec![BigInt::zero(), BigInt::one()],
            vec![vec![Rat::one()]],
            Some(&BigInt::one()),
        )
        .expect("ℚ is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn trace_gram(&self) -> &[Vec<BigInt>] {
        &self.trace_gram
    }

    pub(crate) fn mult_table(&self) -> &[Vec<Vec<BigInt>>] {
        &self.mult_table
    }

    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }

    /// Real embeddings of the integral basis as rational interval
    /// enclosures of width ≤ 2^-prec_bits, ordered by the embedding of θ.
    pub fn basis_embeddings(&self, prec_bits: u32) -> Vec<Vec<(Rat, Rat)>> {
        let min_poly_q: QPoly = self
            .min_poly
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        self.root_intervals
            .iter()
            .map(|iv| {
                let (lo, hi) = refine_root(&min_poly_q, iv.clone(), prec_bits + 8);
                self.integral_basis
                    .iter()
                    .map(|b| eval_interval(&poly_trim(b.clone()), &lo, &hi))
                    .collect()
            })
            .collect()
    }

    /// Coordinates of θ^j in the integral basis (exact; integral since
    /// ℤ[θ] ⊆ 𝒪_F).
    pub fn theta_power(&self, j: usize) -> FieldElement {
        let n = self.degree;
        let mut pw = vec![Rat::zero(); n];
        if j < n {
            pw[j] = Rat::one();
        } else {
            // reduce θ^j mod the minimal polynomial
            let min_poly_q: QPoly = self
                .min_poly
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect();
            let mut p = vec![Rat::zero(); j + 1];
            p[j] = Rat::one();
            let r = roots::poly_rem(&p, &min_poly_q);
            for (k, c) in r.into_iter().enumerate() {
                pw[k] = c;
            }
        }
        FieldElement {
            coords: power_to_integral(&pw, &self.integral_from_power, n),
        }
    }
}

fn poly_mul_mod(a: &[Rat], b: &[Rat], min_poly: &QPoly) -> QPoly {
    let prod = roots::poly_mul(&a.to_vec(), &b.to_vec());
    if roots::poly_deg(&prod) < roots::poly_deg(min_poly) {
        prod
    } else {
        roots::poly_rem(&prod, min_poly)
    }
}

fn power_to_integral(pw: &[Rat], integral_from_power: &[Vec<Rat>], n: usize) -> Vec<Rat> {
    // Row vector times matrix: coords_k = Σ_j pw_j · M[j][k].
    let mut out = vec![Rat::zero(); n];
    for (j, c) in pw.iter().enumerate() {
        if j >= n || c.is_zero() {
            continue;
        }
        for k in 0..n {
            let s = c * &integral_from_power[j][k];
            out[k] += s;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

impl FieldElement {
    pub fn zero(field: &NumberField) -> Self {
        FieldElement {
            coords: vec![Rat::zero(); field.degree],
        }
    }

    pub fn one(field: &NumberField) -> Self {
        let mut coords = vec![Rat::zero(); field.degree];
        coords[0] = Rat::one();
        FieldElement { coords }
    }

    pub fn from_rational(field: &NumberField, q: Rat) -> Self {
        let mut coords = vec![Rat::zero(); field.degree];
        coords[0] = q;
        FieldElement { coords }
    }

    pub fn from_integer(field: &NumberField, v: i64) -> Self {
        Self::from_rational(field, Rat::from_integer(BigInt::from(v)))
    }

    pub fn from_coords(field: &NumberField, coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != field.degree {
            return Err(Error::Parse(format!(
                "element must have {} coordinates, got {}",
                field.degree,
                coords.len()
            )));
        }
        Ok(FieldElement { coords })
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True when all coordinates are integers, i.e. the element lies in 𝒪_F.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &Self) -> Self {
        FieldElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FieldElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self, field: &NumberField) -> Self {
        let n = field.degree;
        let mut out = vec![Rat::zero(); n];
        for i in 0..n {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if other.coords[j].is_zero() {
                    continue;
                }
                let f = &self.coords[i] * &other.coords[j];
                for k in 0..n {
                    let t = &field.mult_table[i][j][k];
                    if t.is_zero() {
                        continue;
                    }
                    let s = &f * Rat::from_integer(t.clone());
                    out[k] += s;
                }
            }
        }
        FieldElement { coords: out }
    }

    pub fn mul_rational(&self, q: &Rat) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Matrix of multiplication by this element in the integral basis.
    pub fn mult_matrix(&self, field: &NumberField) -> Vec<Vec<Rat>> {
        let n = field.degree;
        (0..n)
            .map(|r| {
                // row r: coords of x · ω_r
                let mut row = vec![Rat::zero(); n];
                for i in 0..n {
                    if self.coords[i].is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        let t = &field.mult_table[i][r][k];
                        if !t.is_zero() {
                            let s = &self.coords[i] * Rat::from_integer(t.clone());
                            row[k] += s;
                        }
                    }
                }
                row
            })
            .collect()
    }

    pub fn trace(&self, field: &NumberField) -> Rat {
        self.coords
            .iter()
            .zip(&field.traces)
            .map(|(c, t)| c * Rat::from_integer(t.clone()))
            .sum()
    }

    pub fn norm(&self, field: &NumberField) -> Rat {
        let cp = charpoly(&self.mult_matrix(field));
        let det = cp[0].clone();
        if field.degree % 2 == 1 {
            -det
        } else {
            det
        }
    }

    /// Characteristic polynomial of the multiplication map, ascending
    /// coefficients, monic of degree n.
    pub fn char_poly(&self, field: &NumberField) -> Vec<Rat> {
        charpoly(&self.mult_matrix(field))
    }

    /// Unit of 𝒪_F: integral with norm ±1.
    pub fn is_unit(&self, field: &NumberField) -> bool {
        if !self.is_integral() {
            return false;
        }
        let n = self.norm(field);
        n.abs().is_one()
    }

    /// All real embeddings positive. Decided exactly: the characteristic
    /// polynomial of a nonzero element of a totally real field is
    /// real-rooted, and it has all roots positive iff its coefficients
    /// alternate in sign strictly.
    pub fn is_totally_positive(&self, field: &NumberField) -> bool {
        if self.is_zero() {
            return false;
        }
        let cp = self.char_poly(field); // ascending: [c_n, ..., c_1, 1]
        let n = field.degree;
        for i in 1..=n {
            // coefficient of t^{n-i} is cp[n-i] and must have sign (−1)^i
            let c = &cp[n - i];
            let want_negative = i % 2 == 1;
            if c.is_zero() || c.is_negative() != want_negative {
                return false;
            }
        }
        true
    }

    /// Exact rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Approximate value under each real embedding (midpoints of interval
    /// enclosures); for diagnostics and displays.
    pub fn embed_f64(&self, field: &NumberField, prec_bits: u32) -> Vec<f64> {
        field
            .basis_embeddings(prec_bits)
            .iter()
            .map(|basis| {
                let mut lo = Rat::zero();
                let mut hi = Rat::zero();
                for (c, (blo, bhi)) in self.coords.iter().zip(basis) {
                    let (a, b) = if c.is_negative() {
                        (c * bhi, c * blo)
                    } else {
                        (c * blo, c * bhi)
                    };
                    lo += a;
                    hi += b;
                }
                ((lo + hi) / Rat::from_integer(BigInt::from(2)))
                    .to_f64()
                    .unwrap_or(f64::NAN)
            })
            .collect()
    }
}
