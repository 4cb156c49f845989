//! Exact real-root isolation for rational polynomials via Sturm sequences
//! and bisection. Used to certify that a field is totally real and to give
//! rational interval enclosures of the real embeddings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
/// Polynomial with ascending coefficients.
pub type QPoly = Vec<Rat>;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn poly_trim(mut p: QPoly) -> QPoly {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn poly_deg(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn poly_is_zero(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn poly_eval(p: &QPoly, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn poly_derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
        .collect()
}

pub fn poly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    poly_trim(out)
}

/// Remainder of `a` divided by `b` (`b` nonzero).
pub fn poly_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let b = poly_trim(b.clone());
    let mut r = poly_trim(a.clone());
    let db = poly_deg(&b);
    let lead = b[db].clone();
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let q = &r[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate() {
            let s = &q * c;
            r[i + shift] -= s;
        }
        r = poly_trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

/// Monic gcd of two rational polynomials.
pub fn poly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = poly_trim(a.clone());
    let mut y = poly_trim(b.clone());
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let d = poly_deg(&x);
    if x[d].is_zero() {
        return vec![Rat::one()];
    }
    let lead = x[d].clone();
    x.into_iter().map(|c| c / &lead).collect()
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![poly_trim(p.clone()), poly_derivative(p)];
    loop {
        let k = chain.len();
        let r = poly_rem(&chain[k - 2], &chain[k - 1]);
        if poly_is_zero(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
        if poly_deg(chain.last().unwrap()) == 0 {
            break;
        }
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &Rat) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in chain {
        let v = poly_eval(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
fn count_roots(chain: &[QPoly], a: &Rat, b: &Rat) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// Cauchy bound: all real roots lie in `(-B, B]`.
pub fn root_bound(p: &QPoly) -> Rat {
    let p = poly_trim(p.clone());
    let d = poly_deg(&p);
    let lead = p[d].clone();
    let mut m = Rat::zero();
    for c in &p[..d] {
        let r = (c / &lead).abs();
        if r > m {
            m = r;
        }
    }
    m + rat_int(1)
}

/// Isolating intervals `(a, b]` for all distinct real roots of `p`
/// (`p` need not be squarefree; multiplicity is ignored).
pub fn isolate_real_roots(p: &QPoly) -> Vec<(Rat, Rat)> {
    let sqfree = {
        let g = poly_gcd(p, &poly_derivative(p));
        if poly_deg(&g) == 0 {
            poly_trim(p.clone())
        } else {
            poly_div_exact(p, &g)
        }
    };
    let chain = sturm_chain(&sqfree);
    let bound = root_bound(&sqfree);
    let mut stack = vec![(-bound.clone(), bound.clone())];
    let mut found = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match count_roots(&chain, &a, &b) {
            0 => {}
            1 => found.push((a, b)),
            _ => {
                let mid = (&a + &b) / rat_int(2);
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    found
}

/// Quotient of an exact polynomial division (`b | a`).
pub fn poly_div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let b = poly_trim(b.clone());
    let mut r = poly_trim(a.clone());
    let db = poly_deg(&b);
    let lead = b[db].clone();
    let mut q = vec![Rat::zero(); poly_deg(&r).saturating_sub(db) + 1];
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let c = &r[dr] / &lead;
        let shift = dr - db;
        q[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let s = &c * bc;
            r[i + shift] -= s;
        }
        r = poly_trim(r);
        if poly_is_zero(&r) {
            break;
        }
        if poly_deg(&r) < db && !poly_is_zero(&r) {
            panic!("poly_div_exact: division not exact");
        }
        if dr == 0 {
            break;
        }
    }
    poly_trim(q)
}

/// Shrink an isolating interval `(lo, hi]` of a squarefree polynomial until
/// its width is at most `2^-prec_bits`. Bisection decisions use the Sturm
/// chain, which stays correct when an endpoint lands on a rational root.
pub fn refine_root(p: &QPoly, interval: (Rat, Rat), prec_bits: u32) -> (Rat, Rat) {
    let (mut lo, mut hi) = interval;
    let width_target = Rat::new(BigInt::one(), BigInt::from(2u8).pow(prec_bits));
    let chain = sturm_chain(p);
    while &hi - &lo > width_target {
        let mid = (&lo + &hi) / rat_int(2);
        if poly_eval(p, &mid).is_zero() {
            return (mid.clone(), mid);
        }
        if count_roots(&chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Interval evaluation of a polynomial at `[lo, hi]` (naive Horner on
/// rational interval endpoints; exact and conservative).
pub fn eval_interval(p: &QPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc_lo = Rat::zero();
    let mut acc_hi = Rat::zero();
    for c in p.iter().rev() {
        // [acc_lo, acc_hi] * [lo, hi] + c
        let candidates = [&acc_lo * lo, &acc_lo * hi, &acc_hi * lo, &acc_hi * hi];
        let mut new_lo = candidates[0].clone();
        let mut new_hi = candidates[0].clone();
        for v in &candidates[1..] {
            if *v < new_lo {
                new_lo = v.clone();
            }
            if *v > new_hi {
                new_hi = v.clone();
            }
        }
        acc_lo = new_lo + c;
        acc_hi = new_hi + c;
    }
    (acc_lo, acc_hi)
}
