//! Cusp arithmetic for `Γ₀(N)`: representatives, widths, scaling matrices,
//! the classical field bound `N′ = N/(cd, N)` and the conjugation condition
//! used in the sufficiency proof.

use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

/// A 2×2 integer matrix `(a b; c d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegerMatrix2x2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntegerMatrix2x2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntegerMatrix2x2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        IntegerMatrix2x2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det() == 1
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// A cusp `a/L` of `Γ₀(N)` with its width, canonical scaling matrix and
/// classical field bound.
#[derive(Debug, Clone, Serialize)]
pub struct CuspDatum {
    pub a: i64,
    #[serde(rename = "L")]
    pub l: i64,
    pub width: i64,
    pub sigma: [i64; 4],
    #[serde(rename = "N_prime")]
    pub field_bound: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Width of the cusp with denominator `l`: `N/gcd(L², N)` (`gcd(0, N) = N`
/// makes the `L = 0` encoding of ∞ come out as width 1).
pub fn width(n: i64, l: i64) -> i64 {
    n / gcd(l * l, n)
}

/// Canonical unimodular matrix with first column `(a, L)ᵀ`, so `σ∞ = a/L`.
/// Among all completions the one with the smallest `|b| + |d|` is chosen,
/// preferring `d > 0` on ties.
pub fn sigma_for_cusp(a: i64, l: i64) -> Result<IntegerMatrix2x2> {
    if gcd(a, l) != 1 {
        return Err(Error::precondition(format!("gcd({a}, {l}) must be 1")));
    }
    // extended gcd: find d0, b0 with a·d0 − l·b0 = 1
    let e = i64::extended_gcd(&a, &l);
    let (mut d0, mut b0) = (e.x, -e.y);
    if e.gcd == -1 {
        d0 = -d0;
        b0 = -b0;
    }
    debug_assert_eq!(a * d0 - l * b0, 1);
    // general solution: (d, b) = (d0 + t·l, b0 + t·a)
    let t0 = -((b0 * a + d0 * l) / (a * a + l * l).max(1));
    let mut best: Option<(i64, i64)> = None;
    for t in (t0 - 3)..=(t0 + 3) {
        let d = d0 + t * l;
        let b = b0 + t * a;
        let better = match best {
            None => true,
            Some((bb, bd)) => {
                let (new_cost, old_cost) = (b.abs() + d.abs(), bb.abs() + bd.abs());
                new_cost < old_cost || (new_cost == old_cost && d > 0 && bd <= 0)
            }
        };
        if better {
            best = Some((b, d));
        }
    }
    let (b, d) = best.unwrap();
    let sigma = IntegerMatrix2x2::new(a, b, l, d);
    debug_assert_eq!(sigma.det(), 1);
    Ok(sigma)
}

/// The classical field bound `N′ = N/gcd(cd, N)` attached to a scaling
/// matrix, with the convention `gcd(0, N) = N` (so `N′ = 1` when `cd = 0`).
pub fn classical_field_bound(n: i64, sigma: &IntegerMatrix2x2) -> Result<i64> {
    if !sigma.is_unimodular() {
        return Err(Error::precondition("sigma must have determinant 1"));
    }
    Ok(n / gcd(sigma.c * sigma.d, n))
}

/// One representative per `Γ₀(N)`-orbit of cusps, ordered by denominator
/// `L` ascending then by numerator. The count is `Σ_{d|N} φ(gcd(d, N/d))`.
///
/// The cusp `0` appears as `0/1` and `∞` as its equivalent `1/N`.
pub fn enumerate_cusps(n: i64) -> Vec<CuspDatum> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for l in 1..=n {
        if n % l != 0 {
            continue;
        }
        let g = gcd(l, n / l);
        let mut reps: Vec<i64> = Vec::new();
        if l == 1 {
            reps.push(0); // the cusp 0
        } else {
            for r in 1..=g {
                if gcd(r, g) != 1 {
                    continue;
                }
                // smallest positive a ≡ r (mod g) with gcd(a, L) = 1
                let mut a = r;
                while gcd(a, l) != 1 {
                    a += g;
                }
                reps.push(a);
            }
        }
        reps.sort_unstable();
        for a in reps {
            let sigma = sigma_for_cusp(a, l).expect("gcd(a, L) = 1 by construction");
            let field_bound = classical_field_bound(n, &sigma).expect("sigma unimodular");
            out.push(CuspDatum {
                a,
                l,
                width: width(n, l),
                sigma: sigma.entries(),
                field_bound,
            });
        }
    }
    out
}

/// Number of cusps by the divisor-sum formula (independent of the
/// enumeration; used as an oracle).
pub fn cusp_count(n: i64) -> usize {
    let mut total = 0usize;
    for d in 1..=n {
        if n % d == 0 {
            total += euler_phi(gcd(d, n / d)) as usize;
        }
    }
    total
}

pub fn euler_phi(mut n: i64) -> i64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Smallest `m > 0` with `σ·n(m)·σ⁻¹ ∈ Γ₀(N)`, found by bounded search.
/// Must agree with `width(N, L)` for `L` the bottom-left entry of `σ`.
pub fn brute_force_width(n: i64, sigma: &IntegerMatrix2x2) -> i64 {
    assert!(sigma.is_unimodular());
    let c = sigma.c;
    for m in 1..=n {
        // σ n(m) σ⁻¹ = (1 − acm, a²m; −c²m, 1 + acm): integral with det 1;
        // membership in Γ₀(N) reduces to N | c²m.
        if (c * c * m) % n == 0 {
            return m;
        }
    }
    n
}

/// Whether `σ·a(α)·σ⁻¹ = (adα−bc, ab(1−α); cd(α−1), ad−bcα)` lies in
/// `K_p(p^{n_p})` for every `p | N`: all entries integral (automatic),
/// bottom-left divisible by `N`, top-left coprime to `N`.
pub fn conjugation_check_classical(n: i64, sigma: &IntegerMatrix2x2, alpha: i64) -> Result<bool> {
    if !sigma.is_unimodular() {
        return Err(Error::precondition("sigma must have determinant 1"));
    }
    if gcd(alpha, n) != 1 {
        return Err(Error::precondition(format!(
            "alpha = {alpha} must be coprime to N = {n}"
        )));
    }
    let (a, b, c, d) = (sigma.a, sigma.b, sigma.c, sigma.d);
    let top_left = a * d * alpha - b * c;
    let bottom_left = c * d * (alpha - 1);
    Ok(bottom_left % n == 0 && gcd(top_left, n) == 1)
}
