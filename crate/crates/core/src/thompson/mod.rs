//! Thompson's group F: standard generators, the slope homomorphism phi,
//! word evaluation, and the worked elements used throughout the
//! classification of finite-index subgroups.
//!
//! Convention: elements act on the right (`t f` is the image of `t` under
//! `f`), so the product `f g` means "apply `f`, then `g`", `f^g = g^{-1} f g`
//! and `[f, g] = f g f^{-1} g^{-1}`.

mod kab;
pub mod word;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::plmap::{PLMap, PLMapError};

pub use kab::{kab_generators, verify_kab_certificate, CertificateCheck, CertificateReport};
pub use word::{eval_word, parse_word, WordExpr};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ThompsonError {
    #[error("unbound name `{0}` in word")]
    UnboundName(String),
    #[error("support is not contained in [3/8, 7/8]")]
    SupportOutOfRange,
    #[error(transparent)]
    PLMap(#[from] PLMapError),
}

/// Image of an element under the slope homomorphism: the log2 slopes at the
/// two endpoints of [0,1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhiImage {
    pub e0: i64,
    pub e1: i64,
}

impl fmt::Display for PhiImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e0, self.e1)
    }
}

fn dy(n: i64, exp: u64) -> Dyadic {
    Dyadic::new(n, exp)
}

/// The standard generating pair (x0, x1) of F.
pub fn standard_generators() -> (PLMap, PLMap) {
    let x0 = PLMap::from_breaks([(dy(1, 2), dy(1, 1)), (dy(1, 1), dy(3, 2))])
        .expect("x0 is a valid map");
    let x1 = PLMap::from_breaks([
        (dy(1, 1), dy(1, 1)),
        (dy(5, 3), dy(3, 2)),
        (dy(3, 2), dy(7, 3)),
    ])
    .expect("x1 is a valid map");
    (x0, x1)
}

/// The n-th generator of the infinite presentation:
/// x_n = x_1 conjugated by x_0^(n-1) for n >= 2.
pub fn x_n(n: u32) -> PLMap {
    let (x0, x1) = standard_generators();
    match n {
        0 => x0,
        1 => x1,
        _ => x1.conjugate(&x0.power(n as i64 - 1)),
    }
}

/// The slope homomorphism phi: F -> Z^2.
pub fn phi(f: &PLMap) -> PhiImage {
    PhiImage { e0: f.initial_slope_exponent(), e1: f.final_slope_exponent() }
}

/// Whether f lies in the commutator subgroup F' = ker(phi).
pub fn in_commutator_subgroup(f: &PLMap) -> bool {
    phi(f) == PhiImage { e0: 0, e1: 0 }
}

/// Whether f lies in the rectangular subgroup K_{a,b} (slope exponents
/// divisible by a at 0 and by b at 1). Requires a, b >= 1.
pub fn in_rectangular(f: &PLMap, a: u32, b: u32) -> bool {
    assert!(a >= 1 && b >= 1, "rectangular parameters must be positive");
    let p = phi(f);
    p.e0 % a as i64 == 0 && p.e1 % b as i64 == 0
}

/// The bump pair (g0, g1) supported on [3/8, 7/8] and [3/8, 5/8]; they are
/// the images of the commutator certificate and generate a copy of F
/// supported in [3/8, 7/8].
pub fn g0_g1() -> (PLMap, PLMap) {
    let g0 = PLMap::from_breaks([
        (dy(3, 3), dy(3, 3)),
        (dy(1, 1), dy(5, 3)),
        (dy(5, 3), dy(3, 2)),
        (dy(7, 3), dy(7, 3)),
    ])
    .expect("g0 is a valid map");
    let g1 = PLMap::from_breaks([
        (dy(3, 3), dy(3, 3)),
        (dy(7, 4), dy(1, 1)),
        (dy(1, 1), dy(9, 4)),
        (dy(5, 3), dy(5, 3)),
    ])
    .expect("g1 is a valid map");
    (g0, g1)
}

/// Rescales an element supported in [3/8, 7/8] to the whole interval by
/// conjugating with t -> (8t - 3)/4.
pub fn omega_rescale(f: &PLMap) -> Result<PLMap, ThompsonError> {
    let lo = dy(3, 3).to_rational();
    let hi = dy(7, 3).to_rational();
    let supported = f
        .orbitals()
        .iter()
        .all(|orb| orb.lo >= lo && orb.hi <= hi);
    if !supported {
        return Err(ThompsonError::SupportOutOfRange);
    }
    let (lo_d, hi_d) = (dy(3, 3), dy(7, 3));
    let rescale = |v: &Dyadic| (v - &lo_d).mul_pow2(1);
    let breaks = f
        .breaks()
        .iter()
        .filter(|(x, _)| *x >= lo_d && *x <= hi_d)
        .map(|(x, y)| (rescale(x), rescale(y)));
    Ok(PLMap::from_breaks(breaks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Rational;
    use crate::plmap::Orbital;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    #[test]
    fn standard_generators_have_the_expected_breaks() {
        let (x0, x1) = standard_generators();
        assert_eq!(x0.to_breaks_text(), "(1/4,1/2);(1/2,3/4)");
        assert_eq!(x1.to_breaks_text(), "(1/2,1/2);(5/8,3/4);(3/4,7/8)");
    }

    #[test]
    fn phi_of_the_generators() {
        let (x0, x1) = standard_generators();
        assert_eq!(phi(&x0), PhiImage { e0: 1, e1: -1 });
        assert_eq!(phi(&x1), PhiImage { e0: 0, e1: -1 });
        assert_eq!(phi(&PLMap::identity()), PhiImage { e0: 0, e1: 0 });
        // The two images span Z^2: the determinant is a unit.
        assert_eq!((1i64 * -1) - (-1 * 0), -1);
    }

    #[test]
    fn phi_display_format() {
        let (x0, _) = standard_generators();
        assert_eq!(phi(&x0).to_string(), "(1, -1)");
    }

    #[test]
    fn infinite_presentation_relations_hold_in_small_range() {
        for i in 0..3u32 {
            for j in (i + 1)..4 {
                assert_eq!(x_n(j).conjugate(&x_n(i)), x_n(j + 1), "x_{j}^(x_{i})");
            }
        }
    }

    #[test]
    fn finite_presentation_relators_are_trivial() {
        let (x0, x1) = standard_generators();
        let lhs = x0.compose(&x1.inverse());
        let r1 = lhs.commutator(&x1.conjugate(&x0));
        let r2 = lhs.commutator(&x1.conjugate(&x0.power(2)));
        assert_eq!(r1, PLMap::identity());
        assert_eq!(r2, PLMap::identity());
    }

    #[test]
    fn membership_predicates_follow_phi() {
        let (x0, x1) = standard_generators();
        assert!(!in_commutator_subgroup(&x0));
        assert!(in_commutator_subgroup(&x0.commutator(&x1)));
        assert!(in_rectangular(&x0, 1, 1));
        assert!(!in_rectangular(&x0, 2, 1));
        assert!(in_rectangular(&x1, 2, 1));
        assert!(in_rectangular(&x0.power(6), 3, 2));
    }

    #[test]
    fn bump_pair_supports() {
        let (g0, g1) = g0_g1();
        let three_eighths = Rational::new(BigInt::from(3), BigInt::from(8));
        assert_eq!(
            g0.orbitals(),
            vec![Orbital {
                lo: three_eighths.clone(),
                hi: Rational::new(BigInt::from(7), BigInt::from(8)),
            }]
        );
        assert_eq!(
            g1.orbitals(),
            vec![Orbital {
                lo: three_eighths,
                hi: Rational::new(BigInt::from(5), BigInt::from(8)),
            }]
        );
    }

    #[test]
    fn omega_rescale_sends_the_bump_pair_to_words_in_the_generators() {
        let (x0, _) = standard_generators();
        let (g0, g1) = g0_g1();
        assert_eq!(omega_rescale(&g0).unwrap(), x0);
        // g1 rescales to x0^2 x1^-1 x0^-1, with breaks worked out by hand.
        let expected = PLMap::from_breaks([
            (dy(1, 3), dy(1, 2)),
            (dy(1, 2), dy(3, 3)),
            (dy(1, 1), dy(1, 1)),
        ])
        .unwrap();
        assert_eq!(omega_rescale(&g1).unwrap(), expected);
        let env = word::default_env();
        let via_word = eval_word(&parse_word("x0^2 x1^-1 x0^-1").unwrap(), &env).unwrap();
        assert_eq!(omega_rescale(&g1).unwrap(), via_word);
    }

    #[test]
    fn omega_rescale_preserves_identity_and_rejects_wide_support() {
        assert_eq!(omega_rescale(&PLMap::identity()).unwrap(), PLMap::identity());
        let (x0, _) = standard_generators();
        assert_eq!(omega_rescale(&x0), Err(ThompsonError::SupportOutOfRange));
    }

    #[test]
    fn omega_rescale_conjugates_composition() {
        let (g0, g1) = g0_g1();
        let lhs = omega_rescale(&g0.compose(&g1)).unwrap();
        let rhs = omega_rescale(&g0).unwrap().compose(&omega_rescale(&g1).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_is_a_homomorphism_on_generators() {
        let (x0, x1) = standard_generators();
        let p = phi(&x0.compose(&x1));
        assert_eq!(p, PhiImage { e0: 1, e1: -2 });
        assert_eq!(phi(&x0.inverse()), PhiImage { e0: -1, e1: 1 });
        assert_eq!(phi(&x0.conjugate(&x1)), phi(&x0));
    }

    #[test]
    fn rev_swaps_phi_coordinates() {
        let (x0, x1) = standard_generators();
        for f in [x0.clone(), x1.clone(), x0.compose(&x1), x_n(3)] {
            let p = phi(&f);
            let q = phi(&f.rev());
            assert_eq!((q.e0, q.e1), (p.e1, p.e0));
        }
        let one = Rational::one();
        let zero = Rational::zero();
        let t = Rational::new(BigInt::from(1), BigInt::from(3));
        // rev is conjugation by t -> 1 - t.
        let lhs = x0.rev().evaluate(&t).unwrap();
        let rhs = &one - &x0.evaluate(&(&one - &t)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(x0.rev().evaluate(&zero).unwrap(), zero);
    }
}
