//! Exhaustive enumeration of every solution for a denominator `n`.
//!
//! For a sorted solution, `n/4 < x <= 3n/4`. Fixing `x` leaves
//! `a/N = 1/y + 1/z` with `a = 4x - n` and `N = n*x`, which is equivalent to
//! `(a*y - N)(a*z - N) = N^2`. So every `(y, z)` with `y <= z` comes from a
//! divisor `e <= N` of `N^2` via `y = (N + e)/a`, `z = (N + N^2/e)/a`. The
//! scan is one divisor walk per `x`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factorize;
use crate::error::{EsError, Result};
use crate::solution::Triple;

/// Default ceiling on `n` for the oracle at desk scale.
pub const DEFAULT_ORACLE_MAX_N: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub n: u64,
    pub triples: Vec<Triple>,
    /// Set when the cap cut the list short.
    pub truncated: bool,
}

/// Inclusive range of candidate smallest terms for denominator `n`.
pub fn x_bounds(n: u64) -> (u64, u64) {
    (n / 4 + 1, 3 * n / 4)
}

fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 <= b[j].0);
        let (p, e) = if take_a {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Divisors of `prod p^(2e)` not exceeding `limit`, unordered.
fn square_divisors_up_to(factors: &[(u64, u32)], limit: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in factors {
        let p = p as u128;
        let len = out.len();
        for i in 0..len {
            let mut v = out[i];
            for _ in 0..2 * e {
                v *= p;
                if v > limit {
                    break;
                }
                out.push(v);
            }
        }
    }
    out
}

fn solutions_with_x(n: u64, n_factors: &[(u64, u32)], x: u64) -> Result<Vec<Triple>> {
    let a = (4 * x - n) as u128;
    let big_n = n as u128 * x as u128;
    let factors = merge_factors(n_factors, &factorize(x));
    let mut found = Vec::new();
    for e in square_divisors_up_to(&factors, big_n) {
        if (big_n + e) % a != 0 {
            continue;
        }
        let f = big_n * big_n / e;
        if (big_n + f) % a != 0 {
            continue;
        }
        let y = (big_n + e) / a;
        if y < x as u128 {
            continue;
        }
        let z = (big_n + f) / a;
        let y = u64::try_from(y).map_err(|_| EsError::Overflow("oracle y"))?;
        let z = u64::try_from(z).map_err(|_| EsError::Overflow("oracle z"))?;
        found.push(Triple::new(n, x, y, z)?);
    }
    found.sort_unstable();
    Ok(found)
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(EsError::InvalidInput("n must be positive".into()));
    }
    // 4x - n and the N^2 divisor walk stay in range well past the desk bound
    if n > u32::MAX as u64 {
        return Err(EsError::InvalidInput(format!("n = {n} too large for the oracle")));
    }
    Ok(())
}

/// Every solution for `n`, in lexicographic order, optionally capped.
pub fn enumerate_all(n: u64, cap: Option<usize>) -> Result<Enumeration> {
    check_n(n)?;
    let nf = factorize(n);
    let (lo, hi) = x_bounds(n);
    let mut triples = Vec::new();
    for x in lo..=hi {
        triples.extend(solutions_with_x(n, &nf, x)?);
        if let Some(c) = cap {
            if triples.len() > c {
                triples.truncate(c);
                return Ok(Enumeration { n, triples, truncated: true });
            }
        }
    }
    Ok(Enumeration { n, triples, truncated: false })
}

/// Same set as [`enumerate_all`] with the `x` range split into `shards`
/// contiguous pieces run in parallel; pieces are concatenated in order.
pub fn enumerate_sharded(n: u64, cap: Option<usize>, shards: usize) -> Result<Enumeration> {
    check_n(n)?;
    let nf = factorize(n);
    let (lo, hi) = x_bounds(n);
    let shards = shards.max(1) as u64;
    let span = if hi >= lo { hi - lo + 1 } else { 0 };
    let per = span.div_ceil(shards).max(1);
    let pieces: Vec<Vec<Triple>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let start = lo + s * per;
            let end = (start + per).min(hi + 1);
            let mut v = Vec::new();
            for x in start..end {
                v.extend(solutions_with_x(n, &nf, x)?);
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut triples: Vec<Triple> = pieces.into_iter().flatten().collect();
    let mut truncated = false;
    if let Some(c) = cap {
        if triples.len() > c {
            triples.truncate(c);
            truncated = true;
        }
    }
    Ok(Enumeration { n, triples, truncated })
}

/// The lexicographically first solution, if any.
pub fn first_solution(n: u64) -> Result<Option<Triple>> {
    Ok(enumerate_all(n, Some(1))?.triples.into_iter().next())
}

pub fn is_egyptian_order3(n: u64) -> Result<bool> {
    Ok(first_solution(n)?.is_some())
}

pub fn count_solutions(n: u64) -> Result<usize> {
    Ok(enumerate_all(n, None)?.triples.len())
}
