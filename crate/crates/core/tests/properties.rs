//! Property-based invariants: representation uniqueness of ideals, lattice
//! minimality of the rational intersection, recognition round trips, and
//! the classical conjugation sufficiency sample.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuspbound::bignum::{Ctx, Rat};
use cuspbound::cuspcore::{
    classical_field_bound, conjugation_check_classical, sigma_for_cusp, IntegerMatrix2x2,
};
use cuspbound::cyclotomic::{euler_phi, CyclotomicElement};
use cuspbound::fields;
use cuspbound::numberfield::{FieldElement, FractionalIdeal};
use cuspbound::recognize::recognize_value;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Constructing an ideal from different generating sets of the same
    /// ideal yields a bit-identical normalized form.
    #[test]
    fn ideal_representation_uniqueness(
        c0 in -12i64..=12,
        c1 in -12i64..=12,
        m in 1i64..=9,
        u in 0usize..4,
    ) {
        let f = fields::builtin("Qsqrt5").unwrap();
        let field = f.field.clone();
        let x = FieldElement::from_coords(&field, vec![rat(c0), rat(c1)]).unwrap();
        let mz = FieldElement::from_integer(&field, m);
        let a = FractionalIdeal::from_generators(field.clone(), &[x.clone(), mz.clone()]).unwrap();
        // same ideal from redundant and unit-scaled generators
        let phi = FieldElement::from_coords(&field, vec![Rat::zero(), Rat::one()]).unwrap();
        let unit_pow = match u {
            0 => FieldElement::one(&field),
            1 => phi.clone(),
            2 => phi.mul(&phi, &field),
            _ => phi.mul(&phi, &field).mul(&phi, &field),
        };
        let gens2 = [
            x.mul(&unit_pow, &field),
            mz.mul(&unit_pow, &field),
            x.add(&mz),
        ];
        let b = FractionalIdeal::from_generators(field.clone(), &gens2).unwrap();
        prop_assert_eq!(&a == &b, a.is_zero() == b.is_zero() && a.den() == b.den() && a.hnf_rows() == b.hnf_rows());
        // units do not change the ideal
        prop_assert_eq!(a, b);
    }

    /// intersect_integers is the smallest positive rational in the lattice:
    /// verified by brute enumeration of bounded coordinate combinations.
    #[test]
    fn intersect_integers_minimality(
        c0 in -10i64..=10,
        c1 in -10i64..=10,
        m in 1i64..=8,
    ) {
        let f = fields::builtin("Qsqrt2").unwrap();
        let field = f.field.clone();
        let x = FieldElement::from_coords(&field, vec![rat(c0), rat(c1)]).unwrap();
        let mz = FieldElement::from_integer(&field, m);
        let a = FractionalIdeal::from_generators(field.clone(), &[x, mz]).unwrap();
        prop_assume!(!a.is_zero());
        let claimed = a.intersect_integers().unwrap();
        // the claimed value is in the ideal and is rational
        let elem = FieldElement::from_rational(&field, claimed.clone());
        prop_assert!(a.contains(&elem));
        // enumerate lattice points v = s·row0 + t·row1 with |s|,|t| ≤ 40,
        // keep the rational ones, and confirm none is smaller
        let rows = a.hnf_rows();
        let den = Rat::from_integer(a.den().clone());
        let mut best: Option<Rat> = None;
        for s in -40i64..=40 {
            for t in -40i64..=40 {
                let coord1 = BigInt::from(s) * &rows[0][1] + BigInt::from(t) * &rows[1][1];
                if !coord1.is_zero() {
                    continue;
                }
                let coord0 = BigInt::from(s) * &rows[0][0] + BigInt::from(t) * &rows[1][0];
                if coord0.is_zero() {
                    continue;
                }
                let v = (Rat::from_integer(coord0) / &den).abs();
                best = Some(match best {
                    None => v,
                    Some(b) if v < b => v,
                    Some(b) => b,
                });
            }
        }
        prop_assert_eq!(best.unwrap(), claimed);
    }

    /// recognize(embed(v) + δ) returns v exactly for |δ| ≤ 1e-12 and a
    /// denominator bound covering v (the contract's `D ≥ denominators`).
    #[test]
    fn recognition_round_trip(
        modulus in prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 10, 12]),
        denom in 1i64..=12,
        seed in 0u64..1000,
        noise_exp in 13i32..30,
    ) {
        let phi = euler_phi(modulus) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<Rat> = (0..phi)
            .map(|_| Rat::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(denom)))
            .collect();
        let v = CyclotomicElement::new(modulus, coords).unwrap();
        let mut ctx = Ctx::new(256);
        let mut x = v.embed(&mut ctx);
        let delta = 10f64.powi(-noise_exp);
        x.re = ctx.add(&x.re, &astro_float::BigFloat::from_f64(delta * 0.6, 64));
        x.im = ctx.add(&x.im, &astro_float::BigFloat::from_f64(-delta * 0.3, 64));
        let eps = astro_float::BigFloat::from_f64(2.0 * delta, 64);
        let bound = BigInt::from(100).max(v.denominator() * 4);
        let r = recognize_value(&x, &eps, modulus, &bound, 1e-10, &mut ctx).unwrap();
        let got = r.value().expect("round trip must recognize");
        prop_assert_eq!(got, &v);
    }

    /// sigma_for_cusp always produces det 1 with the requested first column.
    #[test]
    fn sigma_first_column(a in -60i64..=60, l in 0i64..=60) {
        prop_assume!(a.gcd(&l) == 1);
        let s = sigma_for_cusp(a, l).unwrap();
        prop_assert_eq!(s.det(), 1);
        prop_assert_eq!((s.a, s.c), (a, l));
    }

    /// N′ divides N and degenerates to 1 when cd = 0.
    #[test]
    fn n_prime_divides_level(n in 1i64..=120, a in -30i64..=30, l in 0i64..=30) {
        prop_assume!(a.gcd(&l) == 1);
        let s = sigma_for_cusp(a, l).unwrap();
        let np = classical_field_bound(n, &s).unwrap();
        prop_assert_eq!(n % np, 0);
        if s.c == 0 || s.d == 0 {
            prop_assert_eq!(np, 1);
        }
    }
}

/// The sufficiency direction of the classical conjugation condition on a
/// 500-sample of (N, σ) with every admissible α ≡ 1 mod N′ up to 10N.
#[test]
fn classical_conjugation_sufficiency_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = 0usize;
    while sampled < 500 {
        let n = rng.gen_range(1..=100i64);
        let (a, b, c, d) = (
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
        );
        if a * d - b * c != 1 {
            continue;
        }
        let sigma = IntegerMatrix2x2::new(a, b, c, d);
        let np = classical_field_bound(n, &sigma).unwrap();
        let mut alpha = 1i64;
        while alpha <= 10 * n {
            if alpha.gcd(&n) == 1 {
                assert!(
                    conjugation_check_classical(n, &sigma, alpha).unwrap(),
                    "N={n} σ={sigma:?} α={alpha}"
                );
            }
            alpha += np;
        }
        sampled += 1;
    }
}

/// Monotonicity of N₀ under level enlargement coprime to cd (ℚ case).
#[test]
fn n0_monotone_under_coprime_level_growth() {
    let q = fields::builtin("Q").unwrap();
    let field = q.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(2..=40i64);
        let factor = rng.gen_range(2..=7i64);
        let (a, b, c, d) = (
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
        );
        if a * d - b * c != 1 || (c * d) % factor == 0 {
            continue;
        }
        if factor.gcd(&(c * d)) != 1 {
            continue;
        }
        let mk_lvl = |lev: i64| {
            cuspbound::hilbertbound::HilbertLevel::new(
                field.clone(),
                FractionalIdeal::from_integer(field.clone(), lev).unwrap(),
                FractionalIdeal::one(field.clone()),
            )
            .unwrap()
        };
        let sigma = cuspbound::hilbertbound::FieldMatrix2x2::from_integer_matrix(
            &field,
            &IntegerMatrix2x2::new(a, b, c, d),
        );
        let n0 = cuspbound::hilbertbound::field_bound_n0(&sigma, &mk_lvl(n)).unwrap();
        let n0_scaled =
            cuspbound::hilbertbound::field_bound_n0(&sigma, &mk_lvl(n * factor)).unwrap();
        // a factor coprime to cd multiplies N₀ exactly
        assert_eq!(n0_scaled, n0 * factor as u64, "N={n} factor={factor}");
    }
}

/// Exploratory: verifying 20a at the cusp 1/2 against M = 1 (instead of
/// the predicted N′ = 10) is expected to leave entries unrecognised — that
/// is evidence about the bound, reported but deliberately not asserted.
#[test]
fn rational_recognition_at_wrong_modulus_is_reported() {
    let file = cuspbound::etaforms::CorpusFile {
        eta: cuspbound::etaforms::corpus_form("20a").unwrap(),
        coeffs: None,
    };
    let sigma = sigma_for_cusp(1, 2).unwrap();
    let (_exp, report) =
        cuspbound::recognize::verify_at_cusp(&file, &sigma, 6, 1e-8, Some(1), None, None, 1)
            .unwrap();
    assert_eq!(report.modulus, 1);
    assert!(!report.entries.is_empty());
    let failed = report
        .entries
        .iter()
        .filter(|e| !e.outcome.is_recognized())
        .count();
    println!(
        "20a at 1/2 with M=1: {failed} of {} entries unrecognised",
        report.entries.len()
    );
}

/// Golden serialization of an ideal's HNF (bit-exact for golden tests).
#[test]
fn ideal_serialization_golden() {
    let f = fields::builtin("Qsqrt5").unwrap();
    let sqrt5 = FieldElement::from_coords(&f.field, vec![rat(-1), rat(2)]).unwrap();
    let ideal = FractionalIdeal::principal(f.field.clone(), &sqrt5).unwrap();
    let json = serde_json::to_string(&ideal).unwrap();
    assert_eq!(json, r#"{"den":"1","hnf":[["5","0"],["2","1"]]}"#);
    let one = FractionalIdeal::one(f.field.clone());
    let half = one
        .scale(&Rat::new(BigInt::one(), BigInt::from(2)))
        .unwrap();
    assert_eq!(
        serde_json::to_string(&half).unwrap(),
        r#"{"den":"2","hnf":[["1","0"],["0","1"]]}"#
    );
}
