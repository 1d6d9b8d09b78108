//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use omega_core::matrix::SparseMatrix;

/// Every composition with `norm <= d` and `norm = d (mod 2)`, by brute force.
pub fn brute_universe(d: u32) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, left: u32, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for x in 1..=left {
            prefix.push(x);
            go(prefix, left - x, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    go(&mut Vec::new(), d, &mut all);
    all.retain(|w| w.iter().sum::<u32>() % 2 == d % 2);
    all
}

/// The signed boundary written out term by term from the definition.
pub fn brute_boundary(w: &[u32], d: u32) -> BTreeMap<Vec<u32>, i64> {
    let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let s = w.len();
    for k in 1..s {
        let mut v = w[..k - 1].to_vec();
        v.push(w[k - 1] + w[k]);
        v.extend_from_slice(&w[k + 1..]);
        *out.entry(v).or_default() -= if k % 2 == 0 { 1 } else { -1 };
    }
    if w.iter().sum::<u32>() + 2 <= d {
        for k in 0..=s {
            let mut v = w[..k].to_vec();
            v.push(2);
            v.extend_from_slice(&w[k..]);
            *out.entry(v).or_default() += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Rank over the rationals (`p = 0`) or over `F_p`, by dense elimination.
pub fn rank_mod(m: &SparseMatrix<i64>, p: i64) -> usize {
    let mut a: Vec<Vec<i128>> = m.to_dense().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
    let rows = a.len();
    let cols = m.cols();
    if p > 0 {
        for row in &mut a {
            for x in row.iter_mut() {
                *x = x.rem_euclid(i128::from(p));
            }
        }
        let p = i128::from(p);
        let inv = |x: i128| {
            let (mut base, mut e, mut r) = (x, p - 2, 1);
            while e > 0 {
                if e & 1 == 1 {
                    r = r * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            r
        };
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, piv);
            let iv = inv(a[rank][c]);
            for x in a[rank].iter_mut() {
                *x = *x * iv % p;
            }
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let f = a[r][c];
                    for j in 0..cols {
                        a[r][j] = (a[r][j] - f * a[rank][j]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        return rank;
    }
    // Rationals: eliminate modulo a large prime; with entries this small the
    // rank agrees with the rational rank except with negligible probability,
    // so use two primes and take the max.
    rank_mod(m, 1_000_003).max(rank_mod(m, 998_244_353))
}

/// `dim H_n` with coefficients `F_p` (or `Q` for `p = 0`) for a lowering complex
/// given by its degree dimensions and maps keyed by source degree.
pub fn betti_mod(dims: &BTreeMap<usize, usize>, maps: &BTreeMap<usize, SparseMatrix<i64>>, p: i64) -> BTreeMap<usize, usize> {
    let ranks: BTreeMap<usize, usize> = maps.iter().map(|(n, m)| (*n, rank_mod(m, p))).collect();
    dims.iter()
        .map(|(&n, &dim)| {
            let out = ranks.get(&n).copied().unwrap_or(0);
            let inc = ranks.get(&(n + 1)).copied().unwrap_or(0);
            (n, dim - out - inc)
        })
        .filter(|(_, b)| *b > 0)
        .collect()
}
