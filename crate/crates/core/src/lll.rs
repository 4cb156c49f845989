//! Exact LLL lattice basis reduction over the integers with rational
//! Gram–Schmidt data. Dimensions here are tiny (a handful of basis vectors
//! for integer-relation detection), so clarity beats asymptotics: the
//! orthogonalisation is recomputed after every swap.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Rat = BigRational;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_rat(x: &Rat) -> BigInt {
    // floor(x + 1/2)
    (x + Rat::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

struct Gso {
    /// μ[i][j] for j < i.
    mu: Vec<Vec<Rat>>,
    /// squared norms of the orthogonalised vectors.
    b_star_sq: Vec<Rat>,
}

fn gso(basis: &[Vec<BigInt>]) -> Gso {
    let n = basis.len();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b_star: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut b_star_sq = vec![Rat::zero(); n];
    for i in 0..n {
        let mut v: Vec<Rat> = basis[i]
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        for j in 0..i {
            if b_star_sq[j].is_zero() {
                continue;
            }
            let num: Rat = basis[i]
                .iter()
                .zip(&b_star[j])
                .map(|(x, y)| Rat::from_integer(x.clone()) * y)
                .sum();
            let m = num / &b_star_sq[j];
            for (vk, bj) in v.iter_mut().zip(&b_star[j]) {
                let s = &m * bj;
                *vk -= s;
            }
            mu[i][j] = m;
        }
        b_star_sq[i] = v.iter().map(|x| x * x).sum();
        b_star.push(v);
    }
    Gso { mu, b_star_sq }
}

/// LLL-reduce the rows of `basis` in place (δ = 99/100) and return them
/// ordered as produced by the reduction (shortest candidates first in
/// practice).
pub fn lll_reduce(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    let delta = Rat::new(BigInt::from(99), BigInt::from(100));
    let mut g = gso(&basis);
    let mut k = 1usize;
    let mut rounds = 0usize;
    while k < n {
        // size-reduce b_k against b_{k-1}, …, b_0
        for j in (0..k).rev() {
            if g.mu[k][j].abs() > Rat::new(BigInt::one(), BigInt::from(2)) {
                let q = round_rat(&g.mu[k][j]);
                if !q.is_zero() {
                    for t in 0..basis[k].len() {
                        let s = &q * &basis[j][t];
                        basis[k][t] -= s;
                    }
                    g = gso(&basis);
                }
            }
        }
        // Lovász condition
        let lhs = &g.b_star_sq[k];
        let rhs = (&delta - &g.mu[k][k - 1] * &g.mu[k][k - 1]) * &g.b_star_sq[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            g = gso(&basis);
            k = k.max(2) - 1;
        }
        rounds += 1;
        assert!(rounds < 100_000, "LLL failed to terminate");
    }
    // order by squared length, shortest first
    basis.sort_by_key(|row| dot(row, row));
    basis
}
