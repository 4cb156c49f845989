//! Integer matrix routines: Hermite normal form, unimodular transforms and
//! integer kernels.
//!
//! Rows are lattice generators. The normal form used throughout the crate is
//! row-style and lower triangular: `H[i][j] = 0` for `j > i`, positive
//! diagonal, and below-diagonal entries reduced into `[0, H[j][j])`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Row = Vec<BigInt>;

fn is_zero_row(row: &[BigInt]) -> bool {
    row.iter().all(|x| x.is_zero())
}

/// Row-reduce `mat` to Hermite normal form.
///
/// Returns `(rows, transform)` where `rows` contains the pivot rows ordered
/// by pivot column (so a full-rank square input yields the lower-triangular
/// normal form) and `transform`, when requested, is the unimodular matrix
/// `U` with `U * mat = full_rows`, its leading rows spanning the left kernel.
fn hnf_worker(mat: &[Row], want_transform: bool) -> (Vec<Row>, Option<Vec<Row>>, usize) {
    let m = mat.len();
    let n = if m == 0 { 0 } else { mat[0].len() };
    let mut work: Vec<Row> = mat.to_vec();
    let mut u: Option<Vec<Row>> = if want_transform {
        let mut id = vec![vec![BigInt::zero(); m]; m];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = BigInt::from(1);
        }
        Some(id)
    } else {
        None
    };

    let row_op =
        |work: &mut Vec<Row>, u: &mut Option<Vec<Row>>, dst: usize, src: usize, q: &BigInt| {
            if q.is_zero() {
                return;
            }
            for k in 0..n {
                let sub = q * &work[src][k];
                work[dst][k] -= sub;
            }
            if let Some(u) = u {
                for k in 0..m {
                    let sub = q * &u[src][k];
                    u[dst][k] -= sub;
                }
            }
        };

    let mut active_end = m;
    for col in (0..n).rev() {
        loop {
            // Pick the active row with the smallest nonzero entry in `col`.
            let mut pivot: Option<usize> = None;
            for r in 0..active_end {
                if !work[r][col].is_zero() {
                    pivot = match pivot {
                        Some(p) if work[p][col].abs() <= work[r][col].abs() => Some(p),
                        _ => Some(r),
                    };
                }
            }
            let Some(p) = pivot else { break };
            let mut others = false;
            for r in 0..active_end {
                if r != p && !work[r][col].is_zero() {
                    others = true;
                    let q = &work[r][col] / &work[p][col];
                    row_op(&mut work, &mut u, r, p, &q);
                }
            }
            if !others {
                // Lone pivot: normalise sign, park it at the end of the
                // active region and retire that position.
                if work[p][col].is_negative() {
                    for x in work[p].iter_mut() {
                        *x = -&*x;
                    }
                    if let Some(u) = &mut u {
                        for x in u[p].iter_mut() {
                            *x = -&*x;
                        }
                    }
                }
                active_end -= 1;
                work.swap(p, active_end);
                if let Some(u) = &mut u {
                    u.swap(p, active_end);
                }
                break;
            }
        }
    }

    // Pivot rows live at work[active_end..]; the pivot for the largest
    // column was parked last in the block, so the block is already ordered
    // by ascending pivot column.
    let mut pivots: Vec<Row> = work[active_end..].to_vec();
    let mut upiv: Option<Vec<Row>> = u.as_ref().map(|u| u[active_end..].to_vec());

    // Reduce entries below the diagonal of each pivot column.
    let pivot_col = |row: &Row| row.iter().rposition(|x| !x.is_zero()).expect("pivot row");
    let cols: Vec<usize> = pivots.iter().map(|r| pivot_col(r)).collect();
    for i in 0..pivots.len() {
        for j in (0..i).rev() {
            let cj = cols[j];
            let q = pivots[i][cj].div_floor(&pivots[j][cj]);
            if !q.is_zero() {
                for k in 0..n {
                    let sub = &q * &pivots[j][k];
                    pivots[i][k] -= sub;
                }
                if let Some(up) = &mut upiv {
                    let (a, b) = if i > j {
                        let (lo, hi) = up.split_at_mut(i);
                        (&mut hi[0], &lo[j])
                    } else {
                        unreachable!()
                    };
                    for k in 0..m {
                        let sub = &q * &b[k];
                        a[k] -= sub;
                    }
                }
            }
        }
    }

    let kernel_rows = active_end;
    let full_u = u.map(|u| {
        let mut rows: Vec<Row> = u[..active_end].to_vec();
        rows.extend(upiv.unwrap());
        rows
    });
    (pivots, full_u, kernel_rows)
}

/// Hermite normal form of the lattice spanned by the rows of `mat`.
/// Returns the pivot rows only (rank many), ordered by pivot column.
pub fn hnf(mat: &[Row]) -> Vec<Row> {
    hnf_worker(mat, false).0
}

/// HNF of a lattice expected to have full rank `n`; `None` if rank-deficient.
pub fn hnf_full_rank(mat: &[Row], n: usize) -> Option<Vec<Row>> {
    let rows = hnf(mat);
    if rows.len() != n {
        return None;
    }
    // Full rank with pivots ordered by column means pivot of row i is at
    // column i: the matrix is lower triangular.
    for (i, row) in rows.iter().enumerate() {
        if row[i].is_zero() || row.iter().skip(i + 1).any(|x| !x.is_zero()) {
            return None;
        }
    }
    Some(rows)
}

/// Basis of the left integer kernel `{v : v * mat = 0}`.
pub fn kernel(mat: &[Row]) -> Vec<Row> {
    let (_, u, k) = hnf_worker(mat, true);
    let u = u.expect("transform requested");
    u[..k].to_vec()
}

/// |det| of a full-rank lattice given by its triangular HNF rows.
pub fn det_abs(hnf_rows: &[Row]) -> BigInt {
    let mut d = BigInt::from(1);
    for (i, row) in hnf_rows.iter().enumerate() {
        d *= &row[i];
    }
    d
}

/// Matrix-vector product `v * mat` (row vector times row-major matrix).
pub fn row_times_mat(v: &[BigInt], mat: &[Row]) -> Row {
    let n = mat[0].len();
    let mut out = vec![BigInt::zero(); n];
    for (vi, row) in v.iter().zip(mat) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

/// Remove zero rows (convenience for generator lists).
pub fn drop_zero_rows(mat: Vec<Row>) -> Vec<Row> {
    mat.into_iter().filter(|r| !is_zero_row(r)).collect()
}
