//! Fractional ideals as full-rank ℤ-lattices in Hermite normal form.
//!
//! An ideal is stored as a positive denominator `d` together with the HNF
//! basis of the integral ideal `d·𝔞` in integral-basis coordinates. The
//! representation is canonical: `d` is minimal and the HNF is unique, so
//! equal ideals compare bit-identically.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::intmat;
use crate::{Error, Result};

use super::{charpoly, mat_inverse, FieldElement, NumberField, Rat};

/// A fractional ideal of a number field (or the zero module).
#[derive(Debug, Clone)]
pub struct FractionalIdeal {
    field: Arc<NumberField>,
    /// Positive denominator, minimal such that `den·𝔞 ⊆ 𝒪_F`.
    den: BigInt,
    /// HNF rows of `den·𝔞`; empty for the zero ideal.
    hnf: Vec<Vec<BigInt>>,
}

impl PartialEq for FractionalIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.hnf == other.hnf
    }
}
impl Eq for FractionalIdeal {}

impl Serialize for FractionalIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FractionalIdeal", 2)?;
        s.serialize_field("den", &self.den.to_string())?;
        let rows: Vec<Vec<String>> = self
            .hnf
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        s.serialize_field("hnf", &rows)?;
        s.end()
    }
}

/// Multiply two integral elements given by integer coordinate vectors.
fn elem_mul_int(field: &NumberField, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = field.degree();
    let table = field.mult_table();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            let f = &a[i] * &b[j];
            for k in 0..n {
                let t = &table[i][j][k];
                if !t.is_zero() {
                    out[k] += &f * t;
                }
            }
        }
    }
    out
}

impl FractionalIdeal {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn zero(field: Arc<NumberField>) -> Self {
        FractionalIdeal {
            field,
            den: BigInt::one(),
            hnf: Vec::new(),
        }
    }

    pub fn one(field: Arc<NumberField>) -> Self {
        let n = field.degree();
        let mut hnf = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in hnf.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        FractionalIdeal {
            field,
            den: BigInt::one(),
            hnf,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hnf.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn hnf_rows(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    /// Normalise scaled generator rows into canonical `(den, hnf)` form.
    fn from_scaled_rows(
        field: Arc<NumberField>,
        den: BigInt,
        rows: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        debug_assert!(den.is_positive());
        let n = field.degree();
        let rows = intmat::drop_zero_rows(rows);
        if rows.is_empty() {
            return Ok(Self::zero(field));
        }
        let hnf = intmat::hnf_full_rank(&rows, n).ok_or_else(|| {
            Error::Precondition("generators do not span a full-rank lattice".into())
        })?;
        // Minimal denominator: divide out the common content shared with den.
        let mut content = BigInt::zero();
        for row in &hnf {
            for x in row {
                content = content.gcd(x);
            }
        }
        let g = content.gcd(&den);
        let (den, hnf) = if g.is_one() {
            (den, hnf)
        } else {
            (
                &den / &g,
                hnf.into_iter()
                    .map(|row| row.into_iter().map(|x| x / &g).collect())
                    .collect(),
            )
        };
        Ok(FractionalIdeal { field, den, hnf })
    }

    /// The fractional ideal generated by a set of field elements.
    pub fn from_generators(field: Arc<NumberField>, gens: &[FieldElement]) -> Result<Self> {
        let n = field.degree();
        let mut den = BigInt::one();
        for g in gens {
            for c in g.coords() {
                den = den.lcm(c.denom());
            }
        }
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let scaled: Vec<BigInt> = g
                .coords()
                .iter()
                .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
                .collect();
            for j in 0..n {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                rows.push(elem_mul_int(&field, &scaled, &e));
            }
        }
        if rows.is_empty() {
            return Ok(Self::zero(field));
        }
        Self::from_scaled_rows(field, den, rows)
    }

    pub fn principal(field: Arc<NumberField>, x: &FieldElement) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(x))
    }

    pub fn from_rational(field: Arc<NumberField>, q: &Rat) -> Result<Self> {
        let x = FieldElement::from_rational(&field, q.clone());
        Self::principal(field, &x)
    }

    pub fn from_integer(field: Arc<NumberField>, v: i64) -> Result<Self> {
        let x = FieldElement::from_integer(&field, v);
        Self::principal(field, &x)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::MismatchedFields)
        }
    }

    /// Ideal sum: the smallest fractional ideal containing both operands;
    /// the gcd in the divisibility lattice. `sum(0, b) = b`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.hnf.len() + other.hnf.len());
        rows.extend(
            self.hnf
                .iter()
                .map(|r| r.iter().map(|x| x * &fa).collect::<Vec<_>>()),
        );
        rows.extend(
            other
                .hnf
                .iter()
                .map(|r| r.iter().map(|x| x * &fb).collect::<Vec<_>>()),
        );
        Self::from_scaled_rows(self.field.clone(), den, rows)
    }

    /// Ideal product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.clone()));
        }
        let den = &self.den * &other.den;
        let mut rows = Vec::with_capacity(self.hnf.len() * other.hnf.len());
        for a in &self.hnf {
            for b in &other.hnf {
                rows.push(elem_mul_int(&self.field, a, b));
            }
        }
        Self::from_scaled_rows(self.field.clone(), den, rows)
    }

    /// Scale the ideal by a rational number.
    pub fn scale(&self, q: &Rat) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero(self.field.clone()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let den = &self.den * q.denom().abs();
        let f = q.numer().abs();
        let rows: Vec<Vec<BigInt>> = self
            .hnf
            .iter()
            .map(|r| r.iter().map(|x| x * &f).collect())
            .collect();
        Self::from_scaled_rows(self.field.clone(), den, rows)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Ideal inverse: `{x ∈ F : x·𝔞 ⊆ 𝒪_F}` for nonzero `𝔞`; exact, with
    /// `𝔞·𝔞⁻¹ = 𝒪_F`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal("inverse"));
        }
        let n = self.field.degree();
        let norm_b = intmat::det_abs(&self.hnf); // = [𝒪 : den·𝔞] > 0
                                                 // Solve {y ∈ ℤⁿ : y·A ≡ 0 mod N} where A stacks the multiplication
                                                 // matrices of the basis rows of the integral part 𝔟 = den·𝔞.
        let mut a_rows: Vec<Vec<BigInt>> = vec![Vec::with_capacity(n * self.hnf.len()); n];
        for b in &self.hnf {
            for (r, row) in a_rows.iter_mut().enumerate() {
                let mut e = vec![BigInt::zero(); n];
                e[r] = BigInt::one();
                row.extend(elem_mul_int(&self.field, b, &e));
            }
        }
        let cols = n * self.hnf.len();
        let mut stacked: Vec<Vec<BigInt>> = a_rows;
        for t in 0..cols {
            let mut row = vec![BigInt::zero(); cols];
            row[t] = norm_b.clone();
            stacked.push(row);
        }
        let kernel = intmat::kernel(&stacked);
        let proj: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
        // 𝔞⁻¹ = den · (1/N) · 𝔠 where 𝔠 is the projected lattice.
        let rows: Vec<Vec<BigInt>> = proj
            .iter()
            .map(|r| r.iter().map(|x| x * &self.den).collect())
            .collect();
        let result = Self::from_scaled_rows(self.field.clone(), norm_b, rows)?;
        debug_assert!({
            let prod = result.mul(self).unwrap();
            prod == Self::one(self.field.clone())
        });
        Ok(result)
    }

    /// Absolute norm; multiplicative, `|det hnf| / denⁿ`.
    pub fn norm(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal("norm"));
        }
        let det = intmat::det_abs(&self.hnf);
        let den_pow = num_traits::pow::pow(self.den.clone(), self.field.degree());
        Ok(Rat::new(det, den_pow))
    }

    /// Exact membership test.
    pub fn contains(&self, x: &FieldElement) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        let n = self.field.degree();
        // den·x must be an integer vector in the row lattice.
        let mut y: Vec<BigInt> = Vec::with_capacity(n);
        for c in x.coords() {
            let scaled = c * Rat::from_integer(self.den.clone());
            if !scaled.is_integer() {
                return false;
            }
            y.push(scaled.to_integer());
        }
        // Back-substitute against the lower-triangular HNF.
        for i in (0..n).rev() {
            if y[i].is_zero() {
                continue;
            }
            let (q, r) = y[i].div_rem(&self.hnf[i][i]);
            if !r.is_zero() {
                return false;
            }
            for k in 0..=i {
                y[k] -= &q * &self.hnf[i][k];
            }
        }
        y.iter().all(|v| v.is_zero())
    }

    /// `self ⊆ other` (the zero ideal is contained in everything).
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_same_field(other)?;
        if self.is_zero() {
            return Ok(true);
        }
        if other.is_zero() {
            return Ok(false);
        }
        let den_q = Rat::from_integer(self.den.clone());
        for row in &self.hnf {
            let coords: Vec<Rat> = row
                .iter()
                .map(|x| Rat::from_integer(x.clone()) / &den_q)
                .collect();
            let elem = FieldElement { coords };
            if !other.contains(&elem) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The positive rational `m` with `𝔞 ∩ ℚ = mℤ`: the smallest positive
    /// rational in the ideal. Equals the first HNF diagonal entry divided
    /// by the denominator.
    pub fn intersect_integers(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal("intersect_integers"));
        }
        Ok(Rat::new(self.hnf[0][0].clone(), self.den.clone()))
    }

    /// The different ideal `𝔇_F`: inverse of the trace-dual of `𝒪_F`.
    /// Integral, with `N(𝔇_F) = |disc F|`.
    pub fn different(field: Arc<NumberField>) -> Result<Self> {
        let n = field.degree();
        let gram: Vec<Vec<Rat>> = field
            .trace_gram()
            .iter()
            .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let inv = mat_inverse(&gram)
            .ok_or_else(|| Error::InvalidField("degenerate trace form".into()))?;
        // 𝔇⁻¹ has ℤ-basis the rows of G⁻¹; scale by disc (positive for a
        // totally real field) to land in 𝒪.
        let disc = field.discriminant().clone();
        debug_assert!(disc.is_positive());
        let mut rows = Vec::with_capacity(n);
        for r in inv {
            let row: Vec<BigInt> = r
                .iter()
                .map(|c| {
                    let v = c * Rat::from_integer(disc.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect();
            rows.push(row);
        }
        let codifferent = Self::from_scaled_rows(field, disc, rows)?;
        codifferent.inv()
    }

    /// Largest power of the prime `p` containing this integral ideal.
    pub fn valuation(&self, prime: &FractionalIdeal) -> Result<i64> {
        self.check_same_field(prime)?;
        if self.is_zero() {
            return Err(Error::ZeroIdeal("valuation"));
        }
        if !prime.is_integral() || prime.is_zero() {
            return Err(Error::precondition(
                "valuation requires an integral prime ideal",
            ));
        }
        // v(𝔞) = v(den·𝔞) − v(den·𝒪)
        let numerator = FractionalIdeal {
            field: self.field.clone(),
            den: BigInt::one(),
            hnf: self.hnf.clone(),
        };
        let den_ideal =
            Self::from_rational(self.field.clone(), &Rat::from_integer(self.den.clone()))?;
        Ok(integral_valuation(&numerator, prime)? - integral_valuation(&den_ideal, prime)?)
    }
}

fn integral_valuation(ideal: &FractionalIdeal, prime: &FractionalIdeal) -> Result<i64> {
    let mut v = 0i64;
    let mut power = prime.clone();
    loop {
        if !ideal.is_subset(&power)? {
            return Ok(v);
        }
        v += 1;
        power = power.mul(prime)?;
        if v > 4096 {
            return Err(Error::precondition(
                "valuation did not terminate; not a prime ideal?",
            ));
        }
    }
}

/// A prime ideal above a rational prime, with ramification and residue data.
#[derive(Debug, Clone)]
pub struct PrimeFactor {
    pub ideal: FractionalIdeal,
    pub ramification: u32,
    pub residue_degree: u32,
}

/// Factor `(p)` by trial splitting of the minimal polynomial mod `p`
/// (Kummer–Dedekind). Requires `p` coprime to the index `[𝒪_F : ℤ[θ]]`.
pub fn split_rational_prime(field: &Arc<NumberField>, p: u64) -> Result<Vec<PrimeFactor>> {
    let n = field.degree();
    if p < 2 {
        return Err(Error::precondition("p must be a prime ≥ 2"));
    }
    // disc(min_poly) via the power-sum Gram determinant det(Tr θ^{i+j}).
    let mut powers: Vec<Rat> = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        powers.push(field.theta_power(k).trace(field));
    }
    let gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| powers[i + j].clone()).collect())
        .collect();
    let cp = charpoly(&gram);
    let mut disc_poly = cp[0].clone();
    if n % 2 == 1 {
        disc_poly = -disc_poly;
    }
    let disc_poly = disc_poly.to_integer();
    let index_sq = &disc_poly / field.discriminant();
    let index = index_sq.sqrt();
    if (&index * &index) != index_sq {
        return Err(Error::InvalidField("index² is not a perfect square".into()));
    }
    if (&index % BigInt::from(p)).is_zero() {
        return Err(Error::precondition(format!(
            "{p} divides the index [𝒪:ℤ[θ]]; trial splitting unsupported"
        )));
    }

    // Reduce the minimal polynomial mod p and factor by trial division.
    let fp: Vec<u64> = field
        .min_poly()
        .iter()
        .map(|c| {
            let m = c.mod_floor(&BigInt::from(p));
            m.to_u64().expect("reduced coefficient fits")
        })
        .collect();
    let factors = crate::numberfield::fpfactor::factor_monic(&fp, p)?;
    let mut out = Vec::new();
    for (g, e) in factors {
        // 𝔭 = (p, g(θ))
        let deg = g.len() - 1;
        let mut gen = FieldElement::zero(field);
        for (j, &c) in g.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = field
                .theta_power(j)
                .mul_rational(&Rat::from_integer(BigInt::from(c)));
            gen = gen.add(&term);
        }
        let p_elem = FieldElement::from_integer(field, p as i64);
        let ideal = FractionalIdeal::from_generators(field.clone(), &[p_elem, gen])?;
        out.push(PrimeFactor {
            ideal,
            ramification: e,
            residue_degree: deg as u32,
        });
    }
    debug_assert_eq!(
        out.iter()
            .map(|f| (f.ramification * f.residue_degree) as usize)
            .sum::<usize>(),
        n
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields;

    fn ideal_from(field: &Arc<NumberField>, coords: &[(i64, i64)]) -> FractionalIdeal {
        // single generator with integer coords given as (num, den=1) pairs
        let elem = FieldElement::from_coords(
            field,
            coords
                .iter()
                .map(|&(a, b)| Rat::new(BigInt::from(a), BigInt::from(b)))
                .collect(),
        )
        .unwrap();
        FractionalIdeal::principal(field.clone(), &elem).unwrap()
    }

    #[test]
    fn sqrt5_ideal_golden_hnf() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let sqrt5 = ideal_from(&f.field, &[(-1, 1), (2, 1)]);
        assert!(sqrt5.is_integral());
        assert_eq!(sqrt5.den(), &BigInt::one());
        let rows: Vec<Vec<i64>> = sqrt5
            .hnf_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        assert_eq!(rows, vec![vec![5, 0], vec![2, 1]]);
        assert_eq!(sqrt5.norm().unwrap(), Rat::from_integer(BigInt::from(5)));
        assert_eq!(
            sqrt5.intersect_integers().unwrap(),
            Rat::from_integer(BigInt::from(5))
        );
    }

    #[test]
    fn different_of_quadratic_fields() {
        for (name, disc) in [("Qsqrt2", 8i64), ("Qsqrt3", 12), ("Qsqrt5", 5)] {
            let f = fields::builtin(name).unwrap();
            let d = FractionalIdeal::different(f.field.clone()).unwrap();
            assert!(d.is_integral(), "{name}: different must be integral");
            assert_eq!(
                d.norm().unwrap(),
                Rat::from_integer(BigInt::from(disc)),
                "{name}: N(𝔇) = |disc|"
            );
        }
        // ℚ(√2): 𝔇 = (2√2), basis {4, 2√2} in coordinates over {1, √2}
        let f = fields::builtin("Qsqrt2").unwrap();
        let d = FractionalIdeal::different(f.field.clone()).unwrap();
        let gen = FieldElement::from_coords(
            &f.field,
            vec![Rat::zero(), Rat::from_integer(BigInt::from(2))],
        )
        .unwrap();
        assert_eq!(
            d,
            FractionalIdeal::principal(f.field.clone(), &gen).unwrap()
        );
    }

    #[test]
    fn arithmetic_micro_examples() {
        // (2)·(3) = (6) over ℚ
        let q = fields::builtin("Q").unwrap();
        let two = FractionalIdeal::from_integer(q.field.clone(), 2).unwrap();
        let three = FractionalIdeal::from_integer(q.field.clone(), 3).unwrap();
        let six = FractionalIdeal::from_integer(q.field.clone(), 6).unwrap();
        assert_eq!(two.mul(&three).unwrap(), six);
        assert_eq!(
            two.intersect_integers().unwrap(),
            Rat::from_integer(BigInt::from(2))
        );

        let f5 = fields::builtin("Qsqrt5").unwrap();
        let ring = FractionalIdeal::one(f5.field.clone());
        assert_eq!(
            ring.intersect_integers().unwrap(),
            Rat::from_integer(BigInt::one())
        );
        assert_eq!(ring.norm().unwrap(), Rat::from_integer(BigInt::one()));
        // N((m)) = m² in a quadratic field
        let two5 = FractionalIdeal::from_integer(f5.field.clone(), 2).unwrap();
        assert_eq!(two5.norm().unwrap(), Rat::from_integer(BigInt::from(4)));
    }

    #[test]
    fn different_of_q_is_unit_ideal() {
        let f = fields::builtin("Q").unwrap();
        let d = FractionalIdeal::different(f.field.clone()).unwrap();
        assert_eq!(d, FractionalIdeal::one(f.field.clone()));
    }

    #[test]
    fn sqrt5_different_is_sqrt5() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let d = FractionalIdeal::different(f.field.clone()).unwrap();
        let sqrt5 = ideal_from(&f.field, &[(-1, 1), (2, 1)]);
        assert_eq!(d, sqrt5);
    }

    #[test]
    fn sum_of_coprime_ideals_is_ring() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let two = FractionalIdeal::from_integer(f.field.clone(), 2).unwrap();
        let sqrt5 = ideal_from(&f.field, &[(-1, 1), (2, 1)]);
        assert_eq!(
            two.sum(&sqrt5).unwrap(),
            FractionalIdeal::one(f.field.clone())
        );
    }

    #[test]
    fn integer_gcd_via_ideal_sum() {
        let f = fields::builtin("Q").unwrap();
        let six = FractionalIdeal::from_integer(f.field.clone(), 6).unwrap();
        let four = FractionalIdeal::from_integer(f.field.clone(), 4).unwrap();
        let two = FractionalIdeal::from_integer(f.field.clone(), 2).unwrap();
        assert_eq!(six.sum(&four).unwrap(), two);
    }

    #[test]
    fn zero_ideal_conventions() {
        let f = fields::builtin("Qsqrt2").unwrap();
        let zero = FractionalIdeal::zero(f.field.clone());
        let a = FractionalIdeal::from_integer(f.field.clone(), 3).unwrap();
        assert_eq!(zero.sum(&a).unwrap(), a);
        assert!(zero.mul(&a).unwrap().is_zero());
        assert!(zero.inv().is_err());
        assert!(zero.norm().is_err());
        assert!(zero.intersect_integers().is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let sqrt5 = ideal_from(&f.field, &[(-1, 1), (2, 1)]);
        let inv = sqrt5.inv().unwrap();
        assert_eq!(
            sqrt5.mul(&inv).unwrap(),
            FractionalIdeal::one(f.field.clone())
        );
        // (√5)·(√5) = (5)
        let five = FractionalIdeal::from_integer(f.field.clone(), 5).unwrap();
        assert_eq!(sqrt5.mul(&sqrt5).unwrap(), five);
    }

    #[test]
    fn membership_examples() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let field = &f.field;
        let one = FieldElement::one(field);
        let ring = FractionalIdeal::one(field.clone());
        assert!(ring.contains(&one));
        let sqrt5 = ideal_from(field, &[(-1, 1), (2, 1)]);
        assert!(!sqrt5.contains(&one));
        // 1/√5 = √5/5 ∈ 𝔇⁻¹
        let inv_sqrt5 = FieldElement::from_coords(
            field,
            vec![
                Rat::new(BigInt::from(-1), BigInt::from(5)),
                Rat::new(BigInt::from(2), BigInt::from(5)),
            ],
        )
        .unwrap();
        let codiff = FractionalIdeal::different(field.clone())
            .unwrap()
            .inv()
            .unwrap();
        assert!(codiff.contains(&inv_sqrt5));
    }

    #[test]
    fn representation_uniqueness() {
        let f = fields::builtin("Qsqrt5").unwrap();
        let field = &f.field;
        // (√5) from {√5} and from {√5·φ, 5·φ... } generating the same ideal
        let sqrt5 = ideal_from(field, &[(-1, 1), (2, 1)]);
        let phi = FieldElement::from_coords(field, vec![Rat::zero(), Rat::one()]).unwrap();
        let g1 =
            FieldElement::from_coords(field, vec![-Rat::one(), Rat::from_integer(BigInt::from(2))])
                .unwrap();
        let g2 = g1.mul(&phi, field);
        let five = FieldElement::from_integer(field, 5);
        let alt = FractionalIdeal::from_generators(field.clone(), &[g2, five]).unwrap();
        assert_eq!(sqrt5, alt);
        assert_eq!(sqrt5.den(), alt.den());
        assert_eq!(sqrt5.hnf_rows(), alt.hnf_rows());
    }

    #[test]
    fn mismatched_fields_error() {
        let f2 = fields::builtin("Qsqrt2").unwrap();
        let f5 = fields::builtin("Qsqrt5").unwrap();
        let a = FractionalIdeal::from_integer(f2.field.clone(), 2).unwrap();
        let b = FractionalIdeal::from_integer(f5.field.clone(), 2).unwrap();
        assert!(matches!(a.sum(&b), Err(Error::MismatchedFields)));
    }

    #[test]
    fn splitting_small_primes_in_qsqrt5() {
        let f = fields::builtin("Qsqrt5").unwrap();
        // 5 ramifies: (5) = (√5)²
        let fac5 = split_rational_prime(&f.field, 5).unwrap();
        assert_eq!(fac5.len(), 1);
        assert_eq!(fac5[0].ramification, 2);
        // 11 splits (11 ≡ ±1 mod 5)
        let fac11 = split_rational_prime(&f.field, 11).unwrap();
        assert_eq!(fac11.len(), 2);
        assert!(fac11
            .iter()
            .all(|p| p.ramification == 1 && p.residue_degree == 1));
        // 2 is inert
        let fac2 = split_rational_prime(&f.field, 2).unwrap();
        assert_eq!(fac2.len(), 1);
        assert_eq!(fac2[0].residue_degree, 2);
        // valuations
        let five = FractionalIdeal::from_integer(f.field.clone(), 5).unwrap();
        assert_eq!(five.valuation(&fac5[0].ideal).unwrap(), 2);
        let inv_five = five.inv().unwrap();
        assert_eq!(inv_five.valuation(&fac5[0].ideal).unwrap(), -2);
    }
}
