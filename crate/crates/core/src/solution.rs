//! The solution data model and its structural predicates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_triple_identity, gcd, is_prime};
use crate::error::{EsError, Result};

/// A sorted solution `x <= y <= z` of `4/n = 1/x + 1/y + 1/z`.
///
/// The only way to build one is [`Triple::new`], which checks the identity,
/// so every `Triple` in circulation is a genuine solution for the `n` it was
/// built against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    x: u64,
    y: u64,
    z: u64,
}

impl Triple {
    /// Sorts `(a, b, c)` and validates it as a solution for `n`.
    pub fn new(n: u64, a: u64, b: u64, c: u64) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        let [x, y, z] = v;
        if checked_triple_identity(n, x, y, z)? {
            Ok(Triple { x, y, z })
        } else {
            Err(EsError::NotASolution { n, x, y, z })
        }
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }

    /// `gcd(x, y, z) == x`, i.e. `x` divides both other terms.
    pub fn is_gcd_form(&self) -> bool {
        gcd(self.x, gcd(self.y, self.z)) == self.x
    }

    pub fn is_x_eq_y(&self) -> bool {
        self.x == self.y
    }

    pub fn is_y_eq_z(&self) -> bool {
        self.y == self.z
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Alias kept for symmetry with the other constructors.
pub fn make_triple(n: u64, a: u64, b: u64, c: u64) -> Result<Triple> {
    Triple::new(n, a, b, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolutionType {
    /// `p` divides `z` only.
    TypeI,
    /// `p` divides `y` and `z`.
    TypeII,
    /// Composite denominator; not analysed further.
    Other,
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionType::TypeI => "Type I",
            SolutionType::TypeII => "Type II",
            SolutionType::Other => "Other",
        })
    }
}

/// Classifies a solution for a prime denominator.
///
/// For prime `p` every solution has `p | z`, `p ∤ x` and `x < p`; a triple
/// that breaks this is reported as [`EsError::InvariantViolation`].
pub fn classify_type(p: u64, t: &Triple) -> Result<SolutionType> {
    if !is_prime(p) {
        return Ok(SolutionType::Other);
    }
    if t.z % p != 0 || t.x % p == 0 || t.x >= p {
        return Err(EsError::InvariantViolation {
            p,
            what: format!("{t} must have p | z, p ∤ x and x < p"),
        });
    }
    Ok(if t.y % p == 0 {
        SolutionType::TypeII
    } else {
        SolutionType::TypeI
    })
}

/// Parameters certifying that a triple is the sorted form of
/// `(d*u, d*v, d*u*v)`, with `v = n*p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DuvWitness {
    pub d: u64,
    pub u: u64,
    pub v: u64,
    pub n: u64,
}

impl DuvWitness {
    /// The unsorted terms `(du, dv, duv)`, or `None` on overflow.
    pub fn terms(&self) -> Option<(u64, u64, u64)> {
        let du = self.d.checked_mul(self.u)?;
        let dv = self.d.checked_mul(self.v)?;
        let duv = du.checked_mul(self.v)?;
        Some((du, dv, duv))
    }

    /// Modulus `4dn - 1` of the congruence this witness satisfies.
    pub fn modulus(&self) -> Option<u64> {
        self.d.checked_mul(self.n)?.checked_mul(4).map(|v| v - 1)
    }
}

impl fmt::Display for DuvWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} u={} v={} n={}", self.d, self.u, self.v, self.n)
    }
}

/// Recovers the duv witness of a solution for prime `p`, if it has one.
///
/// A sorted triple is `(du, dv, duv)` exactly when `d = xy/z` is an integer
/// dividing both `x` and `y`. For a genuine solution `p` then divides `v`.
pub fn duv_decompose(t: &Triple, p: u64) -> Result<Option<DuvWitness>> {
    let xy = t.x as u128 * t.y as u128;
    let z = t.z as u128;
    if xy % z != 0 {
        return Ok(None);
    }
    let d = (xy / z) as u64;
    if d == 0 || t.x % d != 0 || t.y % d != 0 {
        return Ok(None);
    }
    let (u, v) = (t.x / d, t.y / d);
    if v % p != 0 {
        return Err(EsError::InvariantViolation {
            p,
            what: format!("duv witness of {t} has v = {v} not divisible by p"),
        });
    }
    Ok(Some(DuvWitness { d, u, v, n: v / p }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, a: u64, b: u64, c: u64) -> Triple {
        Triple::new(n, a, b, c).unwrap()
    }

    #[test]
    fn make_triple_sorts_and_validates() {
        assert_eq!(make_triple(2, 2, 1, 2).unwrap().as_array(), [1, 2, 2]);
        assert_eq!(make_triple(7, 4, 4, 14).unwrap().as_array(), [4, 4, 14]);
        assert!(matches!(
            make_triple(12, 2, 3, 4),
            Err(EsError::NotASolution { .. })
        ));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_type(23, &t(23, 8, 23, 184)).unwrap(),
            SolutionType::TypeII
        );
        assert_eq!(
            classify_type(29, &t(29, 10, 29, 290)).unwrap(),
            SolutionType::TypeII
        );
        assert_eq!(
            classify_type(5, &t(5, 2, 4, 20)).unwrap(),
            SolutionType::TypeI
        );
        // 4/6 = 1/2 + 1/12 + 1/12
        assert_eq!(
            classify_type(6, &t(6, 2, 12, 12)).unwrap(),
            SolutionType::Other
        );
    }

    #[test]
    fn classification_rejects_lemma_breakers() {
        // valid for 5 but fed with the wrong prime
        let tr = t(5, 2, 4, 20);
        assert!(matches!(
            classify_type(2, &tr),
            Err(EsError::InvariantViolation { .. })
        ));
    }

    #[test]
    fn duv_examples() {
        let w = duv_decompose(&t(1009, 253, 88792, 2042216), 1009).unwrap();
        assert_eq!(w, Some(DuvWitness { d: 11, u: 23, v: 8072, n: 8 }));
        let w = duv_decompose(&t(1009, 253, 92828, 1021108), 1009).unwrap();
        assert_eq!(w, Some(DuvWitness { d: 23, u: 11, v: 4036, n: 4 }));
        assert_eq!(duv_decompose(&t(5, 2, 4, 20), 5).unwrap(), None);
    }

    #[test]
    fn form_predicates() {
        assert!(t(29, 8, 80, 2320).is_gcd_form());
        assert!(t(29, 11, 22, 638).is_gcd_form());
        assert!(!t(23, 8, 23, 184).is_gcd_form());
        assert!(t(7, 4, 4, 14).is_x_eq_y());
        assert!(t(7, 2, 28, 28).is_y_eq_z());
        let plain = t(23, 8, 23, 184);
        assert!(!plain.is_x_eq_y() && !plain.is_y_eq_z());
    }

    #[test]
    fn serializes_as_plain_object() {
        let s = serde_json::to_string(&t(23, 8, 23, 184)).unwrap();
        assert_eq!(s, r#"{"x":8,"y":23,"z":184}"#);
        let w = DuvWitness { d: 11, u: 23, v: 8072, n: 8 };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"d":11,"u":23,"v":8072,"n":8}"#
        );
    }
}
