//! Finite-index subgroups of Z^2 in Hermite-style canonical form, with the
//! rectangle invariants used to classify the finite-index subgroups of F.
//!
//! A finite-index subgroup L of Z^2 has a unique basis {(g,h), (0,m)} with
//! g, m >= 1 and 0 <= h < m; the triple (g, h, m) is the canonical form and
//! g*m is the index. Inner(L) is the largest rectangle aZ x bZ inside L,
//! Outer(L) the smallest containing it, and L/Inner(L) is cyclic of order
//! m/gcd(h,m), the residue.

use std::fmt;

use num_integer::gcd;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("the given vectors do not span a finite-index subgroup of Z^2")]
    NotFiniteIndex,
    #[error("lattice computation overflows the 64-bit coefficient range")]
    Overflow,
    #[error("invalid canonical triple: {0}")]
    BadTriple(String),
    #[error("malformed pair {0:?}: expected \"(x,y)\"")]
    MalformedPair(String),
    #[error("subgroup index must be positive, got {0}")]
    InvalidIndex(i64),
}

/// A rectangle subgroup aZ x bZ of Z^2, written as its side pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RectPair {
    pub a: i128,
    pub b: i128,
}

impl fmt::Display for RectPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A finite-index subgroup of Z^2 in canonical form: the basis is
/// {(g, h), (0, m)} with g, m >= 1 and 0 <= h < m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriple")]
pub struct LatticeSubgroup {
    g: i64,
    h: i64,
    m: i64,
}

#[derive(Deserialize)]
struct RawTriple {
    g: i64,
    h: i64,
    m: i64,
}

impl TryFrom<RawTriple> for LatticeSubgroup {
    type Error = LatticeError;

    fn try_from(raw: RawTriple) -> Result<Self, LatticeError> {
        LatticeSubgroup::from_triple(raw.g, raw.h, raw.m)
    }
}

impl fmt::Display for LatticeSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} h={} m={}", self.g, self.h, self.m)
    }
}

/// Extended Euclid: returns (d, s, t) with s*a + t*b = d = gcd(a, b) >= 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (d, s, t) = ext_gcd(b, a % b);
        (d, t, s - (a / b) * t)
    }
}

fn checked(v: i128) -> Result<i64, LatticeError> {
    i64::try_from(v).map_err(|_| LatticeError::Overflow)
}

impl LatticeSubgroup {
    /// Builds the canonical form of a validated triple.
    pub fn from_triple(g: i64, h: i64, m: i64) -> Result<Self, LatticeError> {
        if g < 1 {
            return Err(LatticeError::BadTriple(format!("g must be >= 1, got {g}")));
        }
        if m < 1 {
            return Err(LatticeError::BadTriple(format!("m must be >= 1, got {m}")));
        }
        if h < 0 || h >= m {
            return Err(LatticeError::BadTriple(format!(
                "h must satisfy 0 <= h < m, got h={h} with m={m}"
            )));
        }
        Ok(Self { g, h, m })
    }

    /// Canonical form of the subgroup generated by the given vectors.
    ///
    /// Fails with `NotFiniteIndex` when the span has rank below two.
    pub fn from_generators(gens: &[(i64, i64)]) -> Result<Self, LatticeError> {
        let mut wx: i128 = 0;
        let mut wy: i128 = 0;
        for &(x, y) in gens {
            let (x, y) = (i128::from(x), i128::from(y));
            let (d, s, t) = ext_gcd(wx, x);
            let sw = s.checked_mul(wy).ok_or(LatticeError::Overflow)?;
            let ty = t.checked_mul(y).ok_or(LatticeError::Overflow)?;
            wy = sw.checked_add(ty).ok_or(LatticeError::Overflow)?;
            wx = d;
        }
        if wx == 0 {
            return Err(LatticeError::NotFiniteIndex);
        }
        let mut m: i128 = 0;
        for &(x, y) in gens {
            let (x, y) = (i128::from(x), i128::from(y));
            let q = x / wx;
            let qw = q.checked_mul(wy).ok_or(LatticeError::Overflow)?;
            let reduced = y.checked_sub(qw).ok_or(LatticeError::Overflow)?;
            m = gcd(m, reduced);
        }
        if m == 0 {
            return Err(LatticeError::NotFiniteIndex);
        }
        Self::from_triple(checked(wx)?, checked(wy.rem_euclid(m))?, checked(m)?)
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// The index of the subgroup in Z^2.
    pub fn index(&self) -> i128 {
        i128::from(self.g) * i128::from(self.m)
    }

    /// Membership test for a vector.
    pub fn contains(&self, v: (i64, i64)) -> bool {
        let (x, y) = (i128::from(v.0), i128::from(v.1));
        let (g, h, m) = (i128::from(self.g), i128::from(self.h), i128::from(self.m));
        x % g == 0 && (y - (x / g) * h) % m == 0
    }

    /// The largest rectangle subgroup aZ x bZ contained in this one.
    pub fn inner(&self) -> RectPair {
        let d = i128::from(gcd(self.h, self.m));
        RectPair { a: self.index() / d, b: i128::from(self.m) }
    }

    /// The smallest rectangle subgroup aZ x bZ containing this one.
    pub fn outer(&self) -> RectPair {
        RectPair { a: i128::from(self.g), b: i128::from(gcd(self.h, self.m)) }
    }

    /// The order of the cyclic quotient L / Inner(L), equal to m / gcd(h, m).
    pub fn residue(&self) -> i64 {
        self.m / gcd(self.h, self.m)
    }

    /// A generator of the cyclic quotient L / Inner(L): the image of (g, h)
    /// in Z_a x Z_b for (a, b) = Inner(L), together with its order.
    pub fn cyclic_quotient_generator(&self) -> ((i128, i128), i64) {
        let RectPair { a, b } = self.inner();
        ((i128::from(self.g) % a, i128::from(self.h) % b), self.residue())
    }

    /// The index-one-per-axis rescale: divides out gcd(h, m) and normalizes
    /// g to 1, yielding the triple (1, h/d, m/d) that classifies the
    /// subgroup up to rectangle rescaling.
    pub fn tau_rescale(&self) -> Self {
        let d = gcd(self.h, self.m);
        Self { g: 1, h: self.h / d, m: self.m / d }
    }

    /// The subgroup with the two coordinates swapped.
    pub fn rev(&self) -> Result<Self, LatticeError> {
        Self::from_generators(&[(self.h, self.g), (self.m, 0)])
    }

    /// All canonical triples of a given index, ordered by (g, h, m).
    pub fn enumerate_index(n: i64) -> Result<Vec<Self>, LatticeError> {
        if n < 1 {
            return Err(LatticeError::InvalidIndex(n));
        }
        let mut out = Vec::new();
        for g in 1..=n {
            if n % g != 0 {
                continue;
            }
            let m = n / g;
            for h in 0..m {
                out.push(Self { g, h, m });
            }
        }
        Ok(out)
    }
}

/// Parses a semicolon-separated list of integer pairs, e.g. "(3,7);(5,11)".
pub fn parse_phi_pairs(s: &str) -> Result<Vec<(i64, i64)>, LatticeError> {
    let malformed = |part: &str| LatticeError::MalformedPair(part.to_owned());
    let mut out = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| malformed(part))?;
        let (x, y) = inner.split_once(',').ok_or_else(|| malformed(part))?;
        let x = x.trim().parse::<i64>().map_err(|_| malformed(part))?;
        let y = y.trim().parse::<i64>().map_err(|_| malformed(part))?;
        out.push((x, y));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triple(g: i64, h: i64, m: i64) -> LatticeSubgroup {
        LatticeSubgroup::from_triple(g, h, m).unwrap()
    }

    #[test]
    fn canonical_form_of_a_phi_image_pair() {
        let l = LatticeSubgroup::from_generators(&[(3, 7), (5, 11)]).unwrap();
        assert_eq!(l, triple(1, 1, 2));
        assert_eq!(l.index(), 2);
        assert_eq!(l.inner(), RectPair { a: 2, b: 2 });
        assert_eq!(l.outer(), RectPair { a: 1, b: 1 });
        assert_eq!(l.residue(), 2);
        assert_eq!(l.cyclic_quotient_generator(), ((1, 1), 2));
    }

    #[test]
    fn membership_matches_the_canonical_basis() {
        let l = triple(1, 1, 2);
        assert!(l.contains((3, 7)));
        assert!(l.contains((5, 11)));
        assert!(l.contains((1, 1)));
        assert!(l.contains((0, 2)));
        assert!(!l.contains((1, 0)));
        assert!(!l.contains((0, 1)));

        let k = triple(3, 6, 15);
        assert!(k.contains((3, 6)));
        assert!(k.contains((0, 15)));
        assert!(k.contains((6, 12)));
        assert!(k.contains((3, -9)));
        assert!(!k.contains((3, 7)));
        assert!(!k.contains((1, 2)));
    }

    #[test]
    fn generator_order_and_signs_do_not_matter() {
        let a = LatticeSubgroup::from_generators(&[(3, 7), (5, 11)]).unwrap();
        let b = LatticeSubgroup::from_generators(&[(5, 11), (-3, -7)]).unwrap();
        let c = LatticeSubgroup::from_generators(&[(-5, -11), (8, 18), (3, 7)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn rank_deficient_spans_are_rejected() {
        for gens in [
            &[][..],
            &[(0, 0)][..],
            &[(2, 0)][..],
            &[(0, 3)][..],
            &[(2, 4), (-1, -2), (3, 6)][..],
        ] {
            assert_eq!(
                LatticeSubgroup::from_generators(gens),
                Err(LatticeError::NotFiniteIndex),
                "gens = {gens:?}"
            );
        }
    }

    #[test]
    fn triple_validation() {
        assert!(LatticeSubgroup::from_triple(0, 0, 1).is_err());
        assert!(LatticeSubgroup::from_triple(-1, 0, 1).is_err());
        assert!(LatticeSubgroup::from_triple(1, 0, 0).is_err());
        assert!(LatticeSubgroup::from_triple(1, 2, 2).is_err());
        assert!(LatticeSubgroup::from_triple(1, -1, 2).is_err());
        assert!(LatticeSubgroup::from_triple(1, 0, 1).is_ok());
    }

    #[test]
    fn rectangle_invariants_of_the_index_45_pair() {
        let l1 = triple(3, 3, 15);
        let l2 = triple(3, 6, 15);
        for l in [&l1, &l2] {
            assert_eq!(l.inner(), RectPair { a: 15, b: 15 });
            assert_eq!(l.outer(), RectPair { a: 3, b: 3 });
            assert_eq!(l.residue(), 5);
        }
        assert_eq!(l1.tau_rescale(), triple(1, 1, 5));
        assert_eq!(l2.tau_rescale(), triple(1, 2, 5));
        assert_eq!(l2.rev().unwrap(), triple(3, 9, 15));
    }

    #[test]
    fn rescale_and_swap_on_the_index_30_140_pair() {
        let l1 = triple(2, 6, 15);
        assert_eq!(l1.inner(), RectPair { a: 10, b: 15 });
        assert_eq!(l1.outer(), RectPair { a: 2, b: 3 });
        assert_eq!(l1.residue(), 5);
        assert_eq!(l1.tau_rescale(), triple(1, 2, 5));

        let l2 = triple(7, 12, 20);
        assert_eq!(l2.inner(), RectPair { a: 35, b: 20 });
        assert_eq!(l2.outer(), RectPair { a: 7, b: 4 });
        assert_eq!(l2.residue(), 5);
        assert_eq!(l2.tau_rescale(), triple(1, 3, 5));

        assert_eq!(triple(1, 3, 5).rev().unwrap(), triple(1, 2, 5));
        assert_eq!(triple(1, 2, 5).rev().unwrap(), triple(1, 3, 5));
    }

    #[test]
    fn swap_is_an_involution() {
        for l in [
            triple(1, 1, 2),
            triple(3, 6, 15),
            triple(7, 12, 20),
            triple(4, 0, 9),
            triple(5, 2, 3),
        ] {
            assert_eq!(l.rev().unwrap().rev().unwrap(), l);
        }
    }

    #[test]
    fn rescale_is_idempotent_and_preserves_residue() {
        for l in [triple(3, 6, 15), triple(7, 12, 20), triple(2, 0, 7)] {
            let t = l.tau_rescale();
            assert_eq!(t.tau_rescale(), t);
            assert_eq!(t.residue(), l.residue());
            assert_eq!(t.g(), 1);
        }
    }

    #[test]
    fn inner_and_outer_bracket_the_subgroup() {
        for l in [triple(1, 1, 2), triple(3, 6, 15), triple(7, 12, 20)] {
            let RectPair { a, b } = l.inner();
            assert!(l.contains((a as i64, 0)));
            assert!(l.contains((0, b as i64)));
            let RectPair { a, b } = l.outer();
            assert_eq!(i128::from(l.g()) % a, 0);
            assert_eq!(i128::from(l.h()) % b, 0);
            assert_eq!(i128::from(l.m()) % b, 0);
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        let one = LatticeSubgroup::enumerate_index(1).unwrap();
        assert_eq!(one, vec![triple(1, 0, 1)]);

        let two = LatticeSubgroup::enumerate_index(2).unwrap();
        assert_eq!(two, vec![triple(1, 0, 2), triple(1, 1, 2), triple(2, 0, 1)]);

        // sigma(12) = 1 + 2 + 3 + 4 + 6 + 12 = 28
        assert_eq!(LatticeSubgroup::enumerate_index(12).unwrap().len(), 28);
        assert_eq!(LatticeSubgroup::enumerate_index(0), Err(LatticeError::InvalidIndex(0)));
    }

    #[test]
    fn pair_list_parsing() {
        assert_eq!(parse_phi_pairs("(3,7);(5,11)").unwrap(), vec![(3, 7), (5, 11)]);
        assert_eq!(parse_phi_pairs(" ( 3 , -7 ) ").unwrap(), vec![(3, -7)]);
        assert!(parse_phi_pairs("3,7").is_err());
        assert!(parse_phi_pairs("(3;7)").is_err());
        assert!(parse_phi_pairs("(a,b)").is_err());
        assert!(parse_phi_pairs("").is_err());
        assert!(parse_phi_pairs("(1,2);").is_err());
    }

    #[test]
    fn display_and_serde_round_trip() {
        let l = triple(3, 6, 15);
        assert_eq!(l.to_string(), "g=3 h=6 m=15");
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, r#"{"g":3,"h":6,"m":15}"#);
        let back: LatticeSubgroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LatticeSubgroup>(r#"{"g":1,"h":5,"m":2}"#).is_err());
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let big = i64::MAX;
        let l = LatticeSubgroup::from_triple(big, 1, big).unwrap();
        assert_eq!(l.index(), i128::from(big) * i128::from(big));
        assert_eq!(l.rev(), Err(LatticeError::Overflow));
    }

    proptest! {
        #[test]
        fn canonical_basis_reconstructs_the_triple(
            g in 1i64..18, m in 1i64..18, h_seed in 0i64..1000
        ) {
            let h = h_seed % m;
            let l = triple(g, h, m);
            let rebuilt = LatticeSubgroup::from_generators(&[(g, h), (0, m)]).unwrap();
            prop_assert_eq!(rebuilt, l);
        }

        #[test]
        fn members_are_closed_under_the_group_operations(
            g in 1i64..12, m in 1i64..12, h_seed in 0i64..1000,
            c1 in -8i64..8, c2 in -8i64..8, d1 in -8i64..8, d2 in -8i64..8
        ) {
            let h = h_seed % m;
            let l = triple(g, h, m);
            let u = (c1 * g, c1 * h + c2 * m);
            let v = (d1 * g, d1 * h + d2 * m);
            prop_assert!(l.contains(u));
            prop_assert!(l.contains(v));
            prop_assert!(l.contains((u.0 + v.0, u.1 + v.1)));
            prop_assert!(l.contains((-u.0, -u.1)));
        }

        #[test]
        fn swap_preserves_index_and_is_involutive(
            g in 1i64..12, m in 1i64..12, h_seed in 0i64..1000
        ) {
            let h = h_seed % m;
            let l = triple(g, h, m);
            let r = l.rev().unwrap();
            prop_assert_eq!(r.index(), l.index());
            prop_assert_eq!(r.rev().unwrap(), l);
        }

        #[test]
        fn enumerated_triples_are_distinct_with_the_right_index(n in 1i64..30) {
            let all = LatticeSubgroup::enumerate_index(n).unwrap();
            let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
            prop_assert_eq!(set.len(), all.len());
            for l in &all {
                prop_assert_eq!(l.index(), i128::from(n));
            }
        }
    }
}
