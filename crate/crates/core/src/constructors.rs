//! Closed-form and congruence-driven solution builders.
//!
//! Each builder verifies its output through [`Triple::new`], so a formula
//! slip surfaces as an error instead of a wrong answer.

use serde::Serialize;

use crate::arith::{divisors, gcd};
use crate::error::{EsError, Result};
use crate::solution::{DuvWitness, Triple};

/// A duv-form solution together with the parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DuvSolution {
    pub witness: DuvWitness,
    pub triple: Triple,
}

/// Divisor-shift witness for `p = 4k + 1`: `w | k + 1 + t` and
/// `w = -1 (mod 3 + 4t)`, giving `d = (k + 1 + t)/w` and `n = (w + 1)/(3 + 4t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThmCWitness {
    pub t: u64,
    pub w: u64,
    pub d: u64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThmCHit {
    pub witness: ThmCWitness,
    pub solution: DuvSolution,
}

/// All gcd-form solutions sharing one smallest term `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdFormGroup {
    pub n: u64,
    pub triples: Vec<Triple>,
}

/// The two equal-term solutions of a prime `p = 3 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EqualTermPair {
    /// `(x1, x1, z1)`
    pub x_eq_y: Triple,
    /// `(x2, y2, y2)`
    pub y_eq_z: Triple,
    /// `x1 = 2*x2` and `2*z1 = z2`
    pub relations_hold: bool,
}

fn overflow(what: &'static str) -> EsError {
    EsError::Overflow(what)
}

fn require_1_mod_4(p: u64) -> Result<u64> {
    if p % 4 != 1 {
        return Err(EsError::InvalidInput(format!("{p} is not of the form 4k + 1")));
    }
    Ok((p - 1) / 4)
}

/// Builds the `(du, dv, duv)` solution from `p = -4d (mod 4dn - 1)`.
///
/// Returns `None` when the congruence fails, or when it holds but `du >= p`
/// (no solution of a prime has its smallest term at or above `p`).
pub fn thm_a_construct(p: u64, d: u64, n: u64) -> Result<Option<DuvSolution>> {
    if d == 0 || n == 0 {
        return Err(EsError::InvalidInput("d and n must be positive".into()));
    }
    let q = d
        .checked_mul(n)
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| overflow("4dn - 1"))?
        - 1;
    let four_d = (4 * d as u128 % q as u128) as u64;
    if (p % q + four_d) % q != 0 {
        return Ok(None);
    }
    let np = n.checked_mul(p).ok_or_else(|| overflow("n*p"))?;
    let u = (np as u128 + 1) / q as u128;
    let u = u64::try_from(u).map_err(|_| overflow("u"))?;
    let witness = DuvWitness { d, u, v: np, n };
    let du = d.checked_mul(u).ok_or_else(|| overflow("d*u"))?;
    if du >= p {
        return Ok(None);
    }
    let (du, dv, duv) = witness.terms().ok_or_else(|| overflow("(du, dv, duv)"))?;
    let triple = Triple::new(p, du, dv, duv)?;
    Ok(Some(DuvSolution { witness, triple }))
}

/// `k + 1 = 3dn - d (mod 4dn - 1)` for `p = 4k + 1`.
pub fn thm_b_check(p: u64, d: u64, n: u64) -> Result<bool> {
    let k = require_1_mod_4(p)?;
    if d == 0 || n == 0 {
        return Err(EsError::InvalidInput("d and n must be positive".into()));
    }
    let dn = d.checked_mul(n).ok_or_else(|| overflow("dn"))? as u128;
    let q = 4 * dn - 1;
    let rhs = (3 * dn - d as u128) % q;
    Ok((k as u128 + 1) % q == rhs)
}

/// Every divisor-shift witness for one fixed `t`, ordered by `w`.
pub fn thm_c_witnesses_at(p: u64, t: u64) -> Result<Vec<ThmCWitness>> {
    let k = require_1_mod_4(p)?;
    let m = 3 + 4 * t;
    let target = k + 1 + t;
    Ok(divisors(target)
        .into_iter()
        .filter(|w| (w + 1) % m == 0)
        .map(|w| ThmCWitness { t, w, d: target / w, n: (w + 1) / m })
        .collect())
}

/// Scans `t = 0..=t_max` and the divisors `w` of `k + 1 + t` for
/// `w = -1 (mod 3 + 4t)`, in `(t, w)` order, returning the first witness whose
/// `(d, n)` builds a solution. `None` only means nothing within `t_max`.
pub fn thm_c_search(p: u64, t_max: u64) -> Result<Option<ThmCHit>> {
    require_1_mod_4(p)?;
    for t in 0..=t_max {
        if let Some(witness) = thm_c_witnesses_at(p, t)?.into_iter().next() {
            let Some(solution) = thm_a_construct(p, witness.d, witness.n)? else {
                return Err(EsError::InvariantViolation {
                    p,
                    what: format!("divisor-shift witness {witness:?} did not yield a solution"),
                });
            };
            return Ok(Some(ThmCHit { witness, solution }));
        }
    }
    Ok(None)
}

/// Every gcd-form solution of `p`, grouped by smallest term `n`.
///
/// These are the `n >= ceil(p/4)` with `(4n - p) | (p + 1)`. Writing
/// `delta = 4n - p`, the candidates are exactly the divisors of `p + 1` with
/// `p + delta = 0 (mod 4)`, which keeps the scan at divisor cost.
pub fn thm_d_search(p: u64) -> Result<Vec<GcdFormGroup>> {
    if p < 2 {
        return Err(EsError::InvalidInput("p must be at least 2".into()));
    }
    let p1 = p.checked_add(1).ok_or_else(|| overflow("p + 1"))?;
    let mut groups = Vec::new();
    for delta in divisors(p1) {
        if (p + delta) % 4 != 0 {
            continue;
        }
        let n = (p + delta) / 4;
        let np = n.checked_mul(p).ok_or_else(|| overflow("n*p"))?;
        let c = p1 / delta;
        let y = n.checked_mul(c).ok_or_else(|| overflow("n(p+1)/(4n-p)"))?;
        let z = np.checked_mul(c).ok_or_else(|| overflow("np(p+1)/(4n-p)"))?;
        let mut triples = Vec::new();
        if delta == 1 {
            let two_np = np.checked_mul(2).ok_or_else(|| overflow("2np"))?;
            triples.push(Triple::new(p, n, two_np, two_np)?);
        }
        triples.push(Triple::new(p, n, y, z)?);
        if delta == 2 {
            triples.push(Triple::new(p, n, np, np)?);
        }
        triples.sort_unstable();
        triples.dedup();
        for t in &triples {
            if !t.is_gcd_form() {
                return Err(EsError::InvariantViolation {
                    p,
                    what: format!("{t} from the gcd-form builder is not gcd-form"),
                });
            }
        }
        groups.push(GcdFormGroup { n, triples });
    }
    Ok(groups)
}

/// Solutions of `m*x*y = p*(x + y)`, i.e. `m/p = 1/x + 1/y`, for `gcd(m, p) = 1`.
pub fn lemma_iv_solve(m: u64, p: u64) -> Result<Vec<(u64, u64)>> {
    if m < 2 {
        return Err(EsError::InvalidInput("m must be at least 2".into()));
    }
    if gcd(m, p) != 1 {
        return Err(EsError::InvalidInput(format!("gcd({m}, {p}) != 1")));
    }
    let p1 = p.checked_add(1).ok_or_else(|| overflow("p + 1"))?;
    if p1 % m != 0 {
        return Ok(Vec::new());
    }
    let x = p1 / m;
    let y = p.checked_mul(x).ok_or_else(|| overflow("p(p+1)/m"))?;
    let mut pairs = vec![(x, y)];
    if m == 2 {
        pairs.push((p, p));
    }
    for &(x, y) in &pairs {
        if m as u128 * x as u128 * y as u128 != p as u128 * (x as u128 + y as u128) {
            return Err(EsError::InvariantViolation {
                p,
                what: format!("({x}, {y}) does not solve {m}xy = p(x + y)"),
            });
        }
    }
    Ok(pairs)
}

fn require_odd_prime_input(p: u64) -> Result<()> {
    if p < 3 {
        return Err(EsError::InvalidInput(format!("p = {p} must be at least 3")));
    }
    Ok(())
}

/// `((p+1)/4, p(p+1)/2, p(p+1)/2)` for `p = 3 (mod 4)`, absent otherwise.
pub fn thm_e_y_eq_z(p: u64) -> Result<Option<Triple>> {
    require_odd_prime_input(p)?;
    if p % 4 != 3 {
        return Ok(None);
    }
    let u = (p + 1) / 4;
    let y = p.checked_mul(2 * u).ok_or_else(|| overflow("2up"))?;
    Triple::new(p, u, y, y).map(Some)
}

/// `((p+1)/2, (p+1)/2, p(p+1)/4)` for `p = 3 (mod 4)`, absent otherwise.
pub fn lemma_ii_x_eq_y(p: u64) -> Result<Option<Triple>> {
    require_odd_prime_input(p)?;
    if p % 4 != 3 {
        return Ok(None);
    }
    let x = (p + 1) / 2;
    let z = p.checked_mul((p + 1) / 4).ok_or_else(|| overflow("p(p+1)/4"))?;
    Triple::new(p, x, x, z).map(Some)
}

/// Both equal-term solutions, related by `x1 = 2*x2` and `2*z1 = z2`.
pub fn thm_f_pair(p: u64) -> Result<Option<EqualTermPair>> {
    let (Some(a), Some(b)) = (lemma_ii_x_eq_y(p)?, thm_e_y_eq_z(p)?) else {
        return Ok(None);
    };
    let relations_hold = a.x() == 2 * b.x() && 2 * a.z() == b.z();
    if !relations_hold {
        return Err(EsError::InvariantViolation {
            p,
            what: format!("{a} and {b} break x1 = 2x2, 2z1 = z2"),
        });
    }
    Ok(Some(EqualTermPair { x_eq_y: a, y_eq_z: b, relations_hold }))
}

/// `(n, (n+1)/3, n(n+1)/3)` for `n = 2 (mod 3)`.
pub fn identity_2mod3(n: u64) -> Result<Triple> {
    if n % 3 != 2 {
        return Err(EsError::InvalidInput(format!("{n} is not 2 mod 3")));
    }
    let b = (n + 1) / 3;
    let c = n.checked_mul(b).ok_or_else(|| overflow("n(n+1)/3"))?;
    Triple::new(n, n, b, c)
}

/// Residues mod 840 left uncovered by Mordell's identities.
pub const MORDELL_HARD_RESIDUES: [u64; 6] = [1, 121, 169, 289, 361, 529];

pub fn mordell_hard(p: u64) -> bool {
    MORDELL_HARD_RESIDUES.contains(&(p % 840))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;
    use crate::solution::duv_decompose;

    fn arr(t: &Triple) -> [u64; 3] {
        t.as_array()
    }

    #[test]
    fn thm_a_examples() {
        let s = thm_a_construct(1009, 11, 8).unwrap().unwrap();
        assert_eq!(arr(&s.triple), [253, 88792, 2042216]);
        assert_eq!(s.witness, DuvWitness { d: 11, u: 23, v: 8072, n: 8 });
        let s = thm_a_construct(1009, 23, 4).unwrap().unwrap();
        assert_eq!(arr(&s.triple), [253, 92828, 1021108]);
        let s = thm_a_construct(35617, 1781, 2).unwrap().unwrap();
        assert_eq!(arr(&s.triple), [8905, 126867754, 634338770]);
        assert_eq!(thm_a_construct(29, 1, 2).unwrap(), None);
    }

    #[test]
    fn thm_a_follows_the_congruence() {
        // du = d(1 + np)/(4dn - 1) stays below p for every d, n >= 1, so the
        // du < p gate never fires on a prime that satisfies the congruence.
        for p in [7u64, 23, 29, 1009] {
            for d in 1..200u64 {
                for n in 1..50u64 {
                    let q = 4 * d * n - 1;
                    let holds = (p + 4 * d) % q == 0;
                    let got = thm_a_construct(p, d, n).unwrap();
                    assert_eq!(got.is_some(), holds, "p={p} d={d} n={n}");
                    if let Some(s) = got {
                        assert!(s.triple.x() < p);
                        assert_eq!(s.witness.d * s.witness.u, s.triple.x());
                    }
                }
            }
        }
    }

    #[test]
    fn thm_b_examples() {
        assert!(thm_b_check(1009, 11, 8).unwrap());
        assert!(!thm_b_check(29, 1, 2).unwrap());
        // (8, 87, 696) decomposes with d = 1, n = 3
        let w = duv_decompose(&Triple::new(29, 8, 87, 696).unwrap(), 29)
            .unwrap()
            .unwrap();
        assert_eq!((w.d, w.n), (1, 3));
        assert!(thm_b_check(29, 1, 3).unwrap());
        assert!(!thm_b_check(73, 1, 5).unwrap());
        assert!(thm_b_check(23, 1, 1).is_err());
    }

    #[test]
    fn thm_b_agrees_with_thm_a_congruence() {
        for p in (5..2000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            for d in 1..=200u64 {
                for n in 1..=200 / d {
                    let q = 4 * d * n - 1;
                    let a = (p + 4 * d) % q == 0;
                    assert_eq!(thm_b_check(p, d, n).unwrap(), a, "p={p} d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn thm_c_examples() {
        let hit = thm_c_search(1009, 0).unwrap().unwrap();
        assert_eq!(hit.witness.t, 0);
        assert!(hit.witness.w == 11 || hit.witness.w == 23);
        assert_eq!(thm_c_search(73, 0).unwrap(), None);
        // (t, w) order reaches t = 1, w = 20 before t = 2, w = 21
        let hit = thm_c_search(73, 2).unwrap().unwrap();
        assert_eq!((hit.witness.t, hit.witness.w), (1, 20));
        let at_two = thm_c_witnesses_at(73, 2).unwrap();
        assert!(at_two.iter().any(|w| (w.w, w.d, w.n) == (21, 1, 2)));
        assert!(thm_a_construct(73, 1, 2).unwrap().is_some());
        let hit = thm_c_search(35617, 0).unwrap().unwrap();
        assert_eq!(hit.witness, ThmCWitness { t: 0, w: 5, d: 1781, n: 2 });
        assert!(thm_c_search(23, 5).is_err());
    }

    #[test]
    fn thm_c_witness_invariants() {
        for p in (5..3000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            if let Some(hit) = thm_c_search(p, 8).unwrap() {
                let ThmCWitness { t, w, d, n } = hit.witness;
                let k = (p - 1) / 4;
                assert_eq!((k + 1 + t) % w, 0);
                assert_eq!((w + 1) % (3 + 4 * t), 0);
                assert_eq!(d * w, k + 1 + t);
                assert_eq!(n * (3 + 4 * t), w + 1);
                assert_eq!((hit.solution.witness.d, hit.solution.witness.n), (d, n));
            }
        }
    }

    #[test]
    fn thm_d_examples() {
        let g = thm_d_search(29).unwrap();
        assert_eq!(g.iter().map(|g| g.n).collect::<Vec<_>>(), vec![8, 11]);
        let all: Vec<[u64; 3]> = g.iter().flat_map(|g| g.triples.iter().map(arr)).collect();
        assert!(all.contains(&[8, 80, 2320]));
        assert!(all.contains(&[11, 22, 638]));

        let g = thm_d_search(7).unwrap();
        assert_eq!(g[0].n, 2);
        let two: Vec<[u64; 3]> = g[0].triples.iter().map(arr).collect();
        assert!(two.contains(&[2, 28, 28]) && two.contains(&[2, 16, 112]));

        let g = thm_d_search(5).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].n, 2);
        assert_eq!(arr(&g[0].triples[0]), [2, 4, 20]);
    }

    #[test]
    fn thm_d_matches_linear_n_scan() {
        for p in (2..3000).filter(|&p| is_prime(p)) {
            let lo = p.div_ceil(4);
            let hi = (2 * p + 1) / 4 + 1;
            let want: Vec<u64> = (lo..=hi)
                .filter(|&n| 4 * n > p && (p + 1) % (4 * n - p) == 0)
                .collect();
            let got: Vec<u64> = thm_d_search(p).unwrap().iter().map(|g| g.n).collect();
            assert_eq!(got, want, "p = {p}");
        }
    }

    #[test]
    fn lemma_iv_examples() {
        assert_eq!(lemma_iv_solve(3, 5).unwrap(), vec![(2, 10)]);
        assert_eq!(lemma_iv_solve(2, 7).unwrap(), vec![(4, 28), (7, 7)]);
        assert!(lemma_iv_solve(5, 7).unwrap().is_empty());
        assert!(lemma_iv_solve(7, 7).is_err());
    }

    #[test]
    fn equal_term_examples() {
        assert_eq!(arr(&thm_e_y_eq_z(7).unwrap().unwrap()), [2, 28, 28]);
        assert_eq!(arr(&thm_e_y_eq_z(23).unwrap().unwrap()), [6, 276, 276]);
        assert_eq!(thm_e_y_eq_z(29).unwrap(), None);
        assert_eq!(arr(&lemma_ii_x_eq_y(7).unwrap().unwrap()), [4, 4, 14]);
        assert_eq!(arr(&lemma_ii_x_eq_y(3).unwrap().unwrap()), [2, 2, 3]);
        assert_eq!(lemma_ii_x_eq_y(5).unwrap(), None);

        let pair = thm_f_pair(7).unwrap().unwrap();
        assert_eq!((arr(&pair.x_eq_y), arr(&pair.y_eq_z)), ([4, 4, 14], [2, 28, 28]));
        assert!(pair.relations_hold);
        let pair = thm_f_pair(11).unwrap().unwrap();
        assert_eq!((arr(&pair.x_eq_y), arr(&pair.y_eq_z)), ([6, 6, 33], [3, 66, 66]));
        assert_eq!(thm_f_pair(13).unwrap(), None);
    }

    #[test]
    fn identity_2mod3_examples() {
        assert_eq!(arr(&identity_2mod3(2).unwrap()), [1, 2, 2]);
        assert_eq!(arr(&identity_2mod3(23).unwrap()), [8, 23, 184]);
        assert_eq!(arr(&identity_2mod3(29).unwrap()), [10, 29, 290]);
        assert!(identity_2mod3(7).is_err());
    }

    #[test]
    fn mordell_hard_examples() {
        assert!(mordell_hard(1009));
        assert!(!mordell_hard(23));
        let trial = |n: u64| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let first = (121..).step_by(840).find(|&p| trial(p)).unwrap();
        assert_eq!(first, 1801);
        assert!(mordell_hard(1801));
    }
}
