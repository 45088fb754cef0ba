//! Rank numbers of `NC(G(d,d,n))` from the chunk structure.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cli_io::narayana;
use crate::error::{Error, Result};
use crate::poset_core::binomial;

fn nar(m: i64, k: i64) -> u128 {
    if m < 1 || k < 1 || k > m {
        return 0;
    }
    narayana(m as u64, k as u64)
}

/// Rank vector `(r_0, ..., r_n)` of `NC(G(d,d,n))`, counted chunk by chunk:
/// two copies of the rank-`n-1` lattice, the mixed products for `3 <= i < n`,
/// `d` copies of `NC(S_(n-1))`, and the two `NC(S_(n-2))` chunks.
pub fn rank_recursion(d: usize, n: usize) -> Result<Vec<u128>> {
    if d < 2 || n < 2 {
        return Err(Error::InvalidParams(format!("rank recursion needs d >= 2 and n >= 2 (got d={d}, n={n})")));
    }
    let mut table: Vec<Vec<u128>> = vec![Vec::new(), Vec::new(), vec![1, d as u128, 1]];
    for m in 3..=n {
        let prev = &table[m - 1];
        let get = |v: &Vec<u128>, k: i64| if k < 0 || k as usize >= v.len() { 0 } else { v[k as usize] };
        let mut row = vec![0u128; m + 1];
        for (k, slot) in row.iter_mut().enumerate() {
            let k = k as i64;
            let mi = m as i64;
            let mut r = get(prev, k - 1) + get(prev, k);
            for i in 3..m {
                let sub = &table[m - i + 1];
                for j in 0..k {
                    r += 2 * get(sub, j) * nar(i as i64 - 2, k - j);
                }
            }
            r += d as u128 * nar(mi - 1, k) + nar(mi - 2, k - 1) + nar(mi - 2, k);
            *slot = r;
        }
        table.push(row);
    }
    Ok(table.swap_remove(n))
}

/// The closed-form variant of the recursion in its printed form, for `2 <= k <= n-2`.
/// Evaluated exactly; it does not agree with the direct counts in general.
pub fn rank_recursion_printed(d: usize, n: usize, k: usize) -> Result<Ratio<i128>> {
    if d < 2 || n < 4 || k < 2 || k + 2 > n {
        return Err(Error::Precondition(format!("printed form needs d >= 2 and 2 <= k <= n-2 (got d={d}, n={n}, k={k})")));
    }
    let r = |m: usize, j: usize| -> Result<i128> { Ok(*rank_recursion(d, m)?.get(j).unwrap_or(&0) as i128) };
    let c = |a: usize, b: i64| -> i128 { if b < 0 { 0 } else { binomial(a as u64, b as u64) as i128 } };
    let one = |x: i128| Ratio::from_integer(x);
    let mut total = one(r(n - 1, k)? + r(n - 1, k - 1)?);
    for i in 1..=n - 3 {
        for j in 0..k {
            let kj = (k - j) as i64;
            total += Ratio::new(r(n - i - 1, j)?, i as i128) * one(c(i, kj) * c(i, kj - 1));
        }
    }
    let inner = Ratio::new(d as i128, k as i128) * one(c(n - 1, k as i64 - 1))
        + Ratio::new(c(n - 2, k as i64 - 2) + c(n - 2, k as i64), (n - 2) as i128);
    total += one(c(n - 2, k as i64 - 1)) * inner;
    Ok(total)
}

/// A point where the printed form and the direct count differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub printed: String,
    pub counted: u128,
}

pub fn printed_discrepancies(d_range: std::ops::RangeInclusive<usize>, n_range: std::ops::RangeInclusive<usize>) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for d in d_range {
        for n in n_range.clone() {
            if n < 4 {
                continue;
            }
            let counted = rank_recursion(d, n)?;
            for k in 2..=n - 2 {
                let printed = rank_recursion_printed(d, n, k)?;
                if printed != Ratio::from_integer(counted[k] as i128) {
                    out.push(Discrepancy { d, n, k, printed: printed.to_string(), counted: counted[k] });
                }
            }
        }
    }
    Ok(out)
}
