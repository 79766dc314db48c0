//! Prime-range surveys of solution structure.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_quadratic_residue, PrimeRange};
use crate::constructors::{
    identity_2mod3, lemma_ii_x_eq_y, mordell_hard, thm_d_search, thm_e_y_eq_z, DuvSolution,
};
use crate::error::{EsError, Result};
use crate::oracle::{count_solutions, first_solution, DEFAULT_ORACLE_MAX_N};
use crate::solution::{DuvWitness, Triple};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest `hi` accepted when duv fields are requested.
pub const DUV_CENSUS_MAX: u64 = 10_000_000;

/// `p = r (mod q)` with `q = 4dn - 1` and `r = -4d (mod q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CongruenceClass {
    pub q: u64,
    pub r: u64,
    pub d: u64,
    pub n: u64,
}

impl CongruenceClass {
    pub fn from_witness(w: &DuvWitness) -> Result<Self> {
        let q = w.modulus().ok_or(EsError::Overflow("4dn - 1"))?;
        let r = ((q as u128 - (4 * w.d as u128) % q as u128) % q as u128) as u64;
        Ok(CongruenceClass { q, r, d: w.d, n: w.n })
    }
}

impl fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "≡ {} (mod {})  [d={}, n={}]", self.r, self.q, self.d, self.n)
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(EsError::InvalidInput(format!("{p} is not prime")));
    }
    Ok(())
}

/// Walks every `(d, u)` with `ceil(p/4) <= du < p` and keeps those where
/// `v = p(1 + u)/(4du - p)` is integral and divisible by `p`. Since the
/// smallest term of a prime's solution is below `p` and is the `du` term of
/// any duv-form, this visits every duv-form solution exactly once.
fn duv_walk<F>(p: u64, mut visit: F) -> Result<()>
where
    F: FnMut(DuvSolution) -> Result<bool>,
{
    require_prime(p)?;
    let lo = p.div_ceil(4).max(1);
    for d in 1..p {
        let u_lo = lo.div_ceil(d).max(1);
        let u_hi = (p - 1) / d;
        for u in u_lo..=u_hi {
            let x = d * u;
            let a = (4 * x - p) as u128;
            let num = p as u128 * (1 + u as u128);
            if num % a != 0 {
                continue;
            }
            let v = num / a;
            if v % p as u128 != 0 {
                continue;
            }
            let v = u64::try_from(v).map_err(|_| EsError::Overflow("duv v"))?;
            let witness = DuvWitness { d, u, v, n: v / p };
            let (du, dv, duv) = witness.terms().ok_or(EsError::Overflow("duv terms"))?;
            let triple = Triple::new(p, du, dv, duv)?;
            if !visit(DuvSolution { witness, triple })? {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Every duv-form solution of prime `p`, ordered by triple. An empty list
/// proves there is none.
pub fn duv_complete_search(p: u64) -> Result<Vec<DuvSolution>> {
    let mut out = Vec::new();
    duv_walk(p, |s| {
        out.push(s);
        Ok(true)
    })?;
    out.sort_unstable_by_key(|s| s.triple);
    Ok(out)
}

/// Any one duv-form solution, stopping at the first found.
pub fn duv_first(p: u64) -> Result<Option<DuvSolution>> {
    let mut hit = None;
    duv_walk(p, |s| {
        hit = Some(s);
        Ok(false)
    })?;
    Ok(hit)
}

/// The congruence classes behind every duv-form solution of `p`, sorted by
/// modulus and deduplicated.
pub fn discover_congruence_classes(p: u64) -> Result<Vec<CongruenceClass>> {
    let mut classes = Vec::new();
    for s in duv_complete_search(p)? {
        let c = CongruenceClass::from_witness(&s.witness)?;
        if p % c.q != c.r {
            return Err(EsError::InvariantViolation {
                p,
                what: format!("p mod {} != -4d = {}", c.q, c.r),
            });
        }
        classes.push(c);
    }
    classes.sort_unstable();
    classes.dedup_by_key(|c| (c.q, c.r));
    Ok(classes)
}

/// True when `r` is a quadratic non-residue mod `q`, as Mordell's
/// obstruction requires of any class with a covering identity.
pub fn qr_obstruction_check(c: &CongruenceClass) -> bool {
    !is_quadratic_residue(c.r, c.q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Identity2Mod3,
    EqualTerms,
    GcdForm,
    DuvForm,
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Identity2Mod3 => "n = 2 (mod 3) identity",
            Route::EqualTerms => "equal-term pair (p = 3 mod 4)",
            Route::GcdForm => "gcd-form divisor search",
            Route::DuvForm => "duv-form search",
            Route::Oracle => "brute-force oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Existence {
    pub triple: Triple,
    pub route: Route,
}

/// A solution for prime `p` by the cheapest route that applies.
pub fn egyptian_existence(p: u64) -> Result<Existence> {
    require_prime(p)?;
    let found = |triple, route| Ok(Existence { triple, route });
    if p % 3 == 2 {
        return found(identity_2mod3(p)?, Route::Identity2Mod3);
    }
    if p % 4 == 3 {
        if let Some(t) = lemma_ii_x_eq_y(p)? {
            return found(t, Route::EqualTerms);
        }
    }
    if let Some(g) = thm_d_search(p)?.first() {
        return found(g.triples[0], Route::GcdForm);
    }
    if let Some(s) = duv_first(p)? {
        return found(s.triple, Route::DuvForm);
    }
    if let Some(t) = first_solution(p)? {
        return found(t, Route::Oracle);
    }
    Err(EsError::NoSolution(p))
}

/// Which record fields a census run fills in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    pub duv: bool,
    pub gcd: bool,
    pub pairs: bool,
    pub count: bool,
    pub exists: bool,
    /// Number of contiguous prime sub-ranges processed in parallel.
    #[serde(skip)]
    pub shards: usize,
}

/// Default shard count: a few per worker thread so uneven shards balance.
pub fn default_shards() -> usize {
    rayon::current_num_threads() * 4
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            duv: true,
            gcd: true,
            pairs: true,
            count: false,
            exists: false,
            shards: default_shards(),
        }
    }
}

/// Per-prime summary. Fields the run did not compute are `None` (`null`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub v: u32,
    pub p: u64,
    pub has_duv: Option<bool>,
    pub duv: Option<Vec<DuvWitness>>,
    pub gcd_ns: Option<Vec<u64>>,
    pub xy: Option<bool>,
    pub yz: Option<bool>,
    pub mordell_hard: bool,
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
}

pub fn census_record(p: u64, opts: &CensusOptions) -> Result<CensusRecord> {
    require_prime(p)?;
    let mut rec = CensusRecord {
        v: SCHEMA_VERSION,
        p,
        has_duv: None,
        duv: None,
        gcd_ns: None,
        xy: None,
        yz: None,
        mordell_hard: mordell_hard(p),
        count: None,
        exists: None,
    };
    if opts.duv {
        let w: Vec<DuvWitness> = duv_complete_search(p)?.iter().map(|s| s.witness).collect();
        rec.has_duv = Some(!w.is_empty());
        rec.duv = Some(w);
    }
    if opts.gcd {
        rec.gcd_ns = Some(thm_d_search(p)?.iter().map(|g| g.n).collect());
    }
    if opts.pairs {
        if p == 2 {
            // (1, 2, 2) is the only solution for 2
            rec.xy = Some(false);
            rec.yz = Some(true);
        } else {
            let xy = lemma_ii_x_eq_y(p)?.is_some();
            let yz = thm_e_y_eq_z(p)?.is_some();
            if xy != yz || xy != (p % 4 == 3) {
                return Err(EsError::InvariantViolation {
                    p,
                    what: "equal-term solutions must come in pairs exactly when p = 3 mod 4".into(),
                });
            }
            rec.xy = Some(xy);
            rec.yz = Some(yz);
        }
    }
    if opts.count {
        rec.count = Some(count_solutions(p)? as u64);
    }
    if opts.exists {
        egyptian_existence(p)?;
        rec.exists = Some(true);
    }
    Ok(rec)
}

fn check_bounds(range: &PrimeRange, opts: &CensusOptions) -> Result<()> {
    if opts.duv && range.hi() > DUV_CENSUS_MAX {
        return Err(EsError::InvalidInput(format!(
            "duv census is bounded by {DUV_CENSUS_MAX}"
        )));
    }
    if opts.count && range.hi() > DEFAULT_ORACLE_MAX_N {
        return Err(EsError::InvalidInput(format!(
            "solution counts are bounded by {DEFAULT_ORACLE_MAX_N}"
        )));
    }
    Ok(())
}

/// One record per prime in `range`, increasing. The output does not depend
/// on `opts.shards`.
pub fn run_census(range: PrimeRange, opts: &CensusOptions) -> Result<Vec<CensusRecord>> {
    check_bounds(&range, opts)?;
    let primes = range.primes();
    let shards = opts.shards.max(1);
    let per = primes.len().div_ceil(shards).max(1);
    let pieces: Vec<Vec<CensusRecord>> = primes
        .par_chunks(per)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&p| {
                    census_record(p, opts).map_err(|e| EsError::AtPrime { p, source: Box::new(e) })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<CensusRecord> = pieces.into_iter().flatten().collect();
    out.sort_by_key(|r| r.p);
    Ok(out)
}
