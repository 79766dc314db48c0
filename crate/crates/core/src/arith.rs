//! Exact integer primitives: primality, divisors, gcd, modular inverse,
//! quadratic residues and the overflow-checked identity test.
//!
//! Everything here is a pure function over `u64` with `u128` intermediates.

use crate::error::{EsError, Result};

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. The first twelve prime bases are a complete
/// witness set for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All divisors of `n` in increasing order. Trial division up to `sqrt(n)`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as `(prime, exponent)` pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Inverse of `a` modulo `m` in `[1, m - 1]`, or `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    assert!(m >= 2, "modulus must be at least 2");
    let m_i = m as i128;
    let (mut old_r, mut r) = ((a as i128).rem_euclid(m_i), m_i);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m_i) as u64)
}

/// Whether `s^2 = r (mod q)` has a solution, decided by scanning every `s`.
/// Works for composite `q`, where Euler's criterion says nothing.
pub fn is_quadratic_residue(r: u64, q: u64) -> bool {
    assert!(q >= 2, "modulus must be at least 2");
    let r = r % q;
    (0..q).any(|s| mul_mod(s, s, q) == r)
}

/// `4xyz == n(xy + yz + zx)` evaluated exactly in 128 bits.
///
/// Returns `Err(Overflow)` instead of wrapping when an intermediate does not
/// fit; every denominator in this crate's desk range (`n < 2^24`) is safe.
pub fn checked_triple_identity(n: u64, x: u64, y: u64, z: u64) -> Result<bool> {
    if n == 0 || x == 0 || y == 0 || z == 0 {
        return Err(EsError::InvalidInput(
            "denominators must be positive".to_string(),
        ));
    }
    let (n, x, y, z) = (n as u128, x as u128, y as u128, z as u128);
    let of = || EsError::Overflow("4xyz = n(xy + yz + zx)");
    let lhs = x
        .checked_mul(y)
        .and_then(|v| v.checked_mul(z))
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(of)?;
    let xy = x * y;
    let yz = y.checked_mul(z).ok_or_else(of)?;
    let zx = z.checked_mul(x).ok_or_else(of)?;
    let rhs = xy
        .checked_add(yz)
        .and_then(|v| v.checked_add(zx))
        .and_then(|v| v.checked_mul(n))
        .ok_or_else(of)?;
    Ok(lhs == rhs)
}

/// An inclusive range of integers whose primes can be iterated in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo < 2 || lo > hi {
            return Err(EsError::InvalidInput(format!(
                "prime range needs 2 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(PrimeRange { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn iter(&self) -> SegmentedPrimes {
        SegmentedPrimes::new(self.lo, self.hi)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl IntoIterator for PrimeRange {
    type Item = u64;
    type IntoIter = SegmentedPrimes;

    fn into_iter(self) -> SegmentedPrimes {
        self.iter()
    }
}

const SEGMENT: u64 = 1 << 16;

fn simple_sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Segmented sieve of Eratosthenes over `[lo, hi]`.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    seg_lo: u64,
    hi: u64,
    buf: Vec<u64>,
    pos: usize,
    done: bool,
}

impl SegmentedPrimes {
    fn new(lo: u64, hi: u64) -> Self {
        SegmentedPrimes {
            base: simple_sieve(isqrt(hi)),
            seg_lo: lo,
            hi,
            buf: Vec::new(),
            pos: 0,
            done: false,
        }
    }

    fn fill(&mut self) {
        self.buf.clear();
        self.pos = 0;
        let lo = self.seg_lo;
        let hi = self.hi.min(lo.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (hi - lo + 1) as usize];
        for &p in &self.base {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let v = lo + i as u64;
            if !c && v >= 2 {
                self.buf.push(v);
            }
        }
        if hi == self.hi {
            self.done = true;
        } else {
            self.seg_lo = hi + 1;
        }
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buf.len() {
                self.pos += 1;
                return Some(self.buf[self.pos - 1]);
            }
            if self.done {
                return None;
            }
            self.fill();
        }
    }
}
