//! Factorization in 𝔽_p[x] by trial division over enumerated monic
//! divisors. Only intended for the small primes that show up when splitting
//! `(p)` for valuation displays; the enumeration is capped accordingly.

use crate::{Error, Result};

const ENUMERATION_CAP: u64 = 2_000_000;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    f
}

fn deg(f: &[u64]) -> usize {
    f.len() - 1
}

/// Divide `f` by monic `g`; returns `(quotient, remainder)`.
fn divmod(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = deg(g);
    let mut r = f.to_vec();
    if deg(&r) < dg {
        return (vec![0], r);
    }
    let mut q = vec![0u64; deg(&r) - dg + 1];
    for i in (dg..=deg(&r)).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        q[i - dg] = c;
        for (j, &gc) in g.iter().enumerate() {
            let sub = mulmod(c, gc, p);
            let idx = i - dg + j;
            r[idx] = (r[idx] + p - sub) % p;
        }
    }
    (trim(q), trim(r))
}

fn is_zero(f: &[u64]) -> bool {
    f.iter().all(|&c| c == 0)
}

/// Factor a monic polynomial over 𝔽_p into monic irreducible factors with
/// multiplicities. Errors when `p^(deg/2)` exceeds the enumeration cap.
pub fn factor_monic(f: &[u64], p: u64) -> Result<Vec<(Vec<u64>, u32)>> {
    let mut f = trim(f.iter().map(|&c| c % p).collect());
    assert_eq!(*f.last().unwrap(), 1, "factor_monic requires a monic input");
    let n = deg(&f);
    let mut factors: Vec<(Vec<u64>, u32)> = Vec::new();
    for d in 1..=n / 2 {
        let combos = (p as u128).pow(d as u32);
        if combos > ENUMERATION_CAP as u128 {
            return Err(Error::precondition(format!(
                "trial splitting cap exceeded for p={p}, degree {d}"
            )));
        }
        for idx in 0..combos as u64 {
            if deg(&f) < d {
                break;
            }
            // monic candidate of degree d with lower coefficients the base-p
            // digits of idx
            let mut g = vec![0u64; d + 1];
            g[d] = 1;
            let mut t = idx;
            for c in g.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            let mut mult = 0u32;
            loop {
                let (q, r) = divmod(&f, &g, p);
                if is_zero(&r) && deg(&f) >= d {
                    f = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                factors.push((g, mult));
            }
        }
    }
    if deg(&f) > 0 {
        factors.push((f, 1));
    }
    factors.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(factors)
}
