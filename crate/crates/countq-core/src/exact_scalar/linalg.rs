//! Exact rational linear algebra, just enough for field-spec validation
//! (involutions, unit solving) and real-basis extraction.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![BigRational::zero(); p]; n];
    for (i, row) in a.iter().enumerate() {
        for (l,
            b_row) in b.iter().enumerate() {
            if row[l].is_zero() {
                continue;
            }
            for j in 0..p {
                let term = &row[l] * &b_row[j];
                out[i][j] = &out[i][j] + &term;
            }
        }
    }
    out
}

pub fn mat_vec(a: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (m, x)| acc + m * x)
        })
        .collect()
}

pub fn is_identity(a: &RatMatrix) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent
/// or underdetermined (no unique solution is needed by callers that pass a
/// full-rank square system; rectangular systems are solved in the
/// least-structured sense: any solution, or None when inconsistent).
#[allow(clippy::needless_range_loop)]
pub fn solve(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=cols {
                    let sub = &f * &aug[r][j];
                    aug[i][j] = &aug[i][j] - &sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistent row: 0 = nonzero
    for row in aug.iter().skip(r) {
        if row[cols] != BigRational::zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (rank_row, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[rank_row][cols].clone();
    }
    // verify (free variables were set to zero; the candidate must satisfy Ax=b)
    for (row, rhs) in a.iter().zip(b) {
        let got = row
            .iter()
            .zip(&x)
            .fold(BigRational::zero(), |acc, (m, v)| acc + m * v);
        if &got != rhs {
            return None;
        }
    }
    Some(x)
}

/// Indices of a maximal linearly independent subset of `vectors`, scanning
/// left to right.
pub fn independent_subset(vectors: &[Vec<BigRational>]) -> Vec<usize> {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut picked = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for b in &basis {
            if let Some(lead) = b.iter().position(|x| !x.is_zero()) {
                if !w[lead].is_zero() {
                    let f = &w[lead] / &b[lead];
                    for (wi, bi) in w.iter_mut().zip(b) {
                        let sub = &f * bi;
                        *wi = &*wi - &sub;
                    }
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
            picked.push(idx);
        }
    }
    picked
}
