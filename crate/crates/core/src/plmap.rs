//! Piecewise-linear homeomorphisms of [0,1] with dyadic breakpoints and
//! power-of-two slopes, represented exactly by canonical breakpoint lists.
//!
//! A [`PLMap`] stores the full ordered breakpoint list from (0,0) to (1,1),
//! strictly increasing in both coordinates, with no redundant interior
//! breakpoint (adjacent segments always have different slopes). Two maps are
//! equal as functions if and only if their breakpoint lists are equal, so
//! `==` decides the word problem.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dyadic::{slope_exponent, Dyadic, NumberParseError, Rational};

/// Default bound on iterate counts in [`PLMap::push_to_end`].
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PLMapError {
    #[error("breakpoints are not strictly increasing in both coordinates")]
    NotMonotone,
    #[error("segment from ({x0},{y0}) to ({x1},{y1}) does not have a power-of-two slope")]
    SlopeNotPowerOfTwo { x0: Dyadic, y0: Dyadic, x1: Dyadic, y1: Dyadic },
    #[error("breakpoint ({x},{y}) lies outside the unit square")]
    CoordinateOutOfRange { x: Dyadic, y: Dyadic },
    #[error("evaluation point {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("point {0} does not lie strictly inside the orbital")]
    NotInOrbital(String),
    #[error("iteration cap {0} exceeded")]
    IterationCapExceeded(u64),
    #[error("bad interpolation input: {0}")]
    BadInput(String),
    #[error("malformed breakpoint pair `{0}`")]
    MalformedPair(String),
    #[error(transparent)]
    Number(#[from] NumberParseError),
}

/// A maximal open interval on which a map moves every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbital {
    pub lo: Rational,
    pub hi: Rational,
}

impl fmt::Display for Orbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// An element of Thompson's group F as an exact breakpoint list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    breaks: Vec<(Dyadic, Dyadic)>,
}

impl PLMap {
    /// The identity map.
    pub fn identity() -> Self {
        PLMap { breaks: vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())] }
    }

    /// Builds a map from a set of breakpoints, adding (0,0) and (1,1) if
    /// absent, sorting, validating, and dropping redundant interior points.
    pub fn from_breaks(
        points: impl IntoIterator<Item = (Dyadic, Dyadic)>,
    ) -> Result<Self, PLMapError> {
        let mut pts: Vec<(Dyadic, Dyadic)> = points.into_iter().collect();
        for (x, y) in &pts {
            let in_range = |v: &Dyadic| !v.numer().is_negative() && *v <= Dyadic::one();
            if !in_range(x) || !in_range(y) {
                return Err(PLMapError::CoordinateOutOfRange { x: x.clone(), y: y.clone() });
            }
        }
        let origin = (Dyadic::zero(), Dyadic::zero());
        let end = (Dyadic::one(), Dyadic::one());
        if !pts.contains(&origin) {
            pts.push(origin);
        }
        if !pts.contains(&end) {
            pts.push(end);
        }
        pts.sort();
        pts.dedup();
        for pair in pts.windows(2) {
            if pair[0].0 >= pair[1].0 || pair[0].1 >= pair[1].1 {
                return Err(PLMapError::NotMonotone);
            }
        }
        let mut exps = Vec::with_capacity(pts.len() - 1);
        for pair in pts.windows(2) {
            let dx = &pair[1].0 - &pair[0].0;
            let dy = &pair[1].1 - &pair[0].1;
            let e = slope_exponent(&dx, &dy).map_err(|_| PLMapError::SlopeNotPowerOfTwo {
                x0: pair[0].0.clone(),
                y0: pair[0].1.clone(),
                x1: pair[1].0.clone(),
                y1: pair[1].1.clone(),
            })?;
            exps.push(e);
        }
        // Drop interior breakpoints where the slope does not change.
        let mut keep = vec![true; pts.len()];
        for i in 1..pts.len() - 1 {
            if exps[i - 1] == exps[i] {
                keep[i] = false;
            }
        }
        let breaks = pts
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        Ok(PLMap { breaks })
    }

    /// The full breakpoint list, endpoints included.
    pub fn breaks(&self) -> &[(Dyadic, Dyadic)] {
        &self.breaks
    }

    /// The breakpoints strictly between the fixed endpoints.
    pub fn interior_breaks(&self) -> &[(Dyadic, Dyadic)] {
        &self.breaks[1..self.breaks.len() - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.len() == 2
    }

    fn segment_exponent(&self, i: usize) -> i64 {
        let dx = &self.breaks[i + 1].0 - &self.breaks[i].0;
        let dy = &self.breaks[i + 1].1 - &self.breaks[i].1;
        slope_exponent(&dx, &dy).expect("canonical maps have power-of-two slopes")
    }

    /// Log2 slope of the leftmost segment.
    pub fn initial_slope_exponent(&self) -> i64 {
        self.segment_exponent(0)
    }

    /// Log2 slope of the rightmost segment.
    pub fn final_slope_exponent(&self) -> i64 {
        self.segment_exponent(self.breaks.len() - 2)
    }

    /// Log2 slope immediately to the right of `t`, for rational `0 <= t < 1`.
    pub fn slope_exponent_right_of(&self, t: &Rational) -> Result<i64, PLMapError> {
        if t < &Rational::zero() || t >= &Rational::one() {
            return Err(PLMapError::OutOfRange(t.to_string()));
        }
        let i = self
            .breaks
            .partition_point(|(x, _)| x.to_rational() <= *t)
            .saturating_sub(1);
        Ok(self.segment_exponent(i))
    }

    /// Exact image of a rational point of [0,1].
    pub fn evaluate(&self, t: &Rational) -> Result<Rational, PLMapError> {
        if t < &Rational::zero() || t > &Rational::one() {
            return Err(PLMapError::OutOfRange(t.to_string()));
        }
        let i = self.breaks.partition_point(|(x, _)| x.to_rational() <= *t);
        if i == self.breaks.len() {
            return Ok(Rational::one());
        }
        let (x0, y0) = &self.breaks[i - 1];
        let e = self.segment_exponent(i - 1);
        Ok(y0.to_rational() + (t - x0.to_rational()) * pow2_rational(e))
    }

    /// Exact image of a dyadic point; dyadics always map to dyadics.
    pub fn evaluate_dyadic(&self, t: &Dyadic) -> Result<Dyadic, PLMapError> {
        if t.numer().is_negative() || *t > Dyadic::one() {
            return Err(PLMapError::OutOfRange(t.to_string()));
        }
        let i = self.breaks.partition_point(|(x, _)| x <= t);
        if i == self.breaks.len() {
            return Ok(Dyadic::one());
        }
        let (x0, y0) = &self.breaks[i - 1];
        let e = self.segment_exponent(i - 1);
        Ok(y0 + &(t - x0).mul_pow2(e))
    }

    /// Word-order composition: `self` applied first, then `g`.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        let inv = self.inverse();
        let mut xs: BTreeSet<Dyadic> = self.breaks.iter().map(|(x, _)| x.clone()).collect();
        for (gx, _) in &g.breaks {
            xs.insert(inv.evaluate_dyadic(gx).expect("break x in [0,1]"));
        }
        let breaks = xs.into_iter().map(|x| {
            let mid = self.evaluate_dyadic(&x).expect("x in [0,1]");
            let y = g.evaluate_dyadic(&mid).expect("image in [0,1]");
            (x, y)
        });
        PLMap::from_breaks(breaks).expect("composition of valid maps is valid")
    }

    pub fn inverse(&self) -> PLMap {
        PLMap { breaks: self.breaks.iter().map(|(x, y)| (y.clone(), x.clone())).collect() }
    }

    /// Word-order conjugate `self^g = g^{-1} self g`.
    pub fn conjugate(&self, g: &PLMap) -> PLMap {
        g.inverse().compose(self).compose(g)
    }

    /// Word-order commutator `[self, g] = self g self^{-1} g^{-1}`.
    pub fn commutator(&self, g: &PLMap) -> PLMap {
        self.compose(g).compose(&self.inverse()).compose(&g.inverse())
    }

    pub fn power(&self, n: i64) -> PLMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = PLMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Mirror conjugation by t -> 1 - t: breakpoints (1-x, 1-y) reversed.
    pub fn rev(&self) -> PLMap {
        let one = Dyadic::one();
        let breaks = self
            .breaks
            .iter()
            .rev()
            .map(|(x, y)| (&one - x, &one - y))
            .collect();
        PLMap { breaks }
    }

    /// Maximal open intervals on which the map moves every point, in order.
    pub fn orbitals(&self) -> Vec<Orbital> {
        // Collect the fixed-point set as closed intervals (points included),
        // then return the gaps between them.
        let mut fixed: Vec<(Rational, Rational)> = Vec::new();
        fixed.push((Rational::zero(), Rational::zero()));
        fixed.push((Rational::one(), Rational::one()));
        for i in 0..self.breaks.len() - 1 {
            let (x0, y0) = &self.breaks[i];
            let (x1, _) = &self.breaks[i + 1];
            let e = self.segment_exponent(i);
            let (x0r, y0r, x1r) = (x0.to_rational(), y0.to_rational(), x1.to_rational());
            if e == 0 {
                if x0 == y0 {
                    fixed.push((x0r, x1r));
                }
            } else {
                // y = y0 + s (t - x0) meets the diagonal at a unique point.
                let s = pow2_rational(e);
                let t = (y0r - &s * &x0r) / (Rational::one() - s);
                if t >= x0r && t <= x1r {
                    fixed.push((t.clone(), t));
                }
            }
        }
        fixed.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (lo, hi) in fixed {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        merged
            .windows(2)
            .map(|pair| Orbital { lo: pair[0].1.clone(), hi: pair[1].0.clone() })
            .collect()
    }

    /// Whether `self` and `g` agree pointwise on `[lo, hi]`.
    pub fn support_equals(&self, g: &PLMap, lo: &Dyadic, hi: &Dyadic) -> bool {
        debug_assert!(!lo.numer().is_negative() && lo < hi && *hi <= Dyadic::one());
        let mut grid: BTreeSet<&Dyadic> = BTreeSet::new();
        grid.insert(lo);
        grid.insert(hi);
        for (x, _) in self.breaks.iter().chain(&g.breaks) {
            if x > lo && x < hi {
                grid.insert(x);
            }
        }
        // Both maps are affine between consecutive grid points, so agreement
        // on the grid is agreement on the whole interval.
        grid.into_iter().all(|x| {
            self.evaluate_dyadic(x).expect("grid point in [0,1]")
                == g.evaluate_dyadic(x).expect("grid point in [0,1]")
        })
    }

    /// Smallest-magnitude iterate count `n` (with sign) such that
    /// `lo < evaluate(power(self, n), c) < lo + eps`, searching at most `cap`
    /// iterations.
    pub fn push_to_end(
        &self,
        orb: &Orbital,
        c: &Rational,
        eps: &Rational,
        cap: u64,
    ) -> Result<i64, PLMapError> {
        if !eps.is_positive() {
            return Err(PLMapError::BadInput(format!("eps must be positive, got {eps}")));
        }
        if c <= &orb.lo || c >= &orb.hi {
            return Err(PLMapError::NotInOrbital(c.to_string()));
        }
        let target = &orb.lo + eps;
        if *c < target {
            return Ok(0);
        }
        let image = self.evaluate(c)?;
        if image == *c {
            return Err(PLMapError::NotInOrbital(c.to_string()));
        }
        // Points of one orbital all move the same way; iterate whichever of
        // the map and its inverse moves c toward lo.
        let (step, sign) = if image < *c { (self.clone(), 1i64) } else { (self.inverse(), -1i64) };
        let mut t = c.clone();
        for k in 1..=cap {
            t = step.evaluate(&t)?;
            if t < target {
                debug_assert!(t > orb.lo);
                return Ok(sign * k as i64);
            }
        }
        Err(PLMapError::IterationCapExceeded(cap))
    }

    /// A map carrying each `xs[i]` to `ys[i]` exactly, for strictly
    /// increasing dyadic lists inside (0,1).
    ///
    /// Between consecutive constraints the source and target intervals are
    /// cut into equal counts of standard dyadic pieces (splitting the
    /// leftmost largest piece until the counts match) and matched affinely;
    /// the construction is deterministic.
    pub fn dyadic_interpolator(xs: &[Dyadic], ys: &[Dyadic]) -> Result<PLMap, PLMapError> {
        if xs.len() != ys.len() {
            return Err(PLMapError::BadInput(format!(
                "constraint lists have different lengths {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        for list in [xs, ys] {
            for v in list {
                if !v.is_positive() || *v >= Dyadic::one() {
                    return Err(PLMapError::BadInput(format!(
                        "constraint {v} lies outside (0,1)"
                    )));
                }
            }
            for pair in list.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(PLMapError::BadInput(format!(
                        "constraints {} and {} are not strictly increasing",
                        pair[0], pair[1]
                    )));
                }
            }
        }
        let mut corners = vec![(Dyadic::zero(), Dyadic::zero())];
        corners.extend(xs.iter().cloned().zip(ys.iter().cloned()));
        corners.push((Dyadic::one(), Dyadic::one()));
        let mut breaks = Vec::new();
        for pair in corners.windows(2) {
            fill_box(&mut breaks, &pair[0], &pair[1]);
        }
        breaks.push((Dyadic::one(), Dyadic::one()));
        PLMap::from_breaks(breaks)
    }

    /// Breakpoint list text format: `(x,y);(x,y);...` (empty for identity).
    pub fn to_breaks_text(&self) -> String {
        self.interior_breaks()
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the `(x,y);(x,y)` text format and validates the map.
    pub fn parse_breaks_text(s: &str) -> Result<PLMap, PLMapError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PLMap::identity());
        }
        let mut pts = Vec::new();
        for chunk in s.split(';') {
            let chunk = chunk.trim();
            let inner = chunk
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| PLMapError::MalformedPair(chunk.to_owned()))?;
            let (xs, ys) = inner
                .split_once(',')
                .ok_or_else(|| PLMapError::MalformedPair(chunk.to_owned()))?;
            pts.push((xs.trim().parse::<Dyadic>()?, ys.trim().parse::<Dyadic>()?));
        }
        PLMap::from_breaks(pts)
    }
}

fn pow2_rational(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << e.unsigned_abs())
    }
}

/// Appends the breakpoints of the canonical affine-by-pieces map carrying
/// `[a.0, b.0]` onto `[a.1, b.1]`, from the left corner inclusive to the
/// right corner exclusive.
pub(crate) fn fill_box(out: &mut Vec<(Dyadic, Dyadic)>, a: &(Dyadic, Dyadic), b: &(Dyadic, Dyadic)) {
    let mut src = standard_partition(&a.0, &b.0);
    let mut dst = standard_partition(&a.1, &b.1);
    while src.len() < dst.len() {
        split_leftmost_largest(&mut src);
    }
    while dst.len() < src.len() {
        split_leftmost_largest(&mut dst);
    }
    let (mut cx, mut cy) = (a.0.clone(), a.1.clone());
    out.push((cx.clone(), cy.clone()));
    for i in 0..src.len().saturating_sub(1) {
        cx = &cx + &src[i];
        cy = &cy + &dst[i];
        out.push((cx.clone(), cy.clone()));
    }
}

/// Greedy partition of `[lo, hi]` into standard dyadic intervals
/// `[m 2^-k, (m+1) 2^-k]`, returned as the list of piece widths.
fn standard_partition(lo: &Dyadic, hi: &Dyadic) -> Vec<Dyadic> {
    let mut widths = Vec::new();
    let mut cur = lo.clone();
    while cur < *hi {
        // cur is a multiple of 2^-k exactly when k >= cur.exp().
        let mut k = cur.exp();
        while &cur + &Dyadic::pow2(-(k as i64)) > *hi {
            k += 1;
        }
        let w = Dyadic::pow2(-(k as i64));
        cur = &cur + &w;
        widths.push(w);
    }
    widths
}

fn split_leftmost_largest(widths: &mut Vec<Dyadic>) {
    let mut best = 0;
    for i in 1..widths.len() {
        if widths[i] > widths[best] {
            best = i;
        }
    }
    let half = widths[best].mul_pow2(-1);
    widths[best] = half.clone();
    widths.insert(best + 1, half);
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_breaks_text())
    }
}

#[derive(Serialize, Deserialize)]
struct PLMapRepr {
    breaks: Vec<(Dyadic, Dyadic)>,
}

impl Serialize for PLMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PLMapRepr { breaks: self.interior_breaks().to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PLMapRepr::deserialize(deserializer)?;
        PLMap::from_breaks(repr.breaks).map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for PLMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.breaks.cmp(&other.breaks))
    }
}

impl Ord for PLMap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.breaks.cmp(&other.breaks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dy(n: i64, exp: u64) -> Dyadic {
        Dyadic::new(n, exp)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// The doubling-type map with breaks (1/4,1/2),(1/2,3/4).
    fn dbl() -> PLMap {
        PLMap::from_breaks([(dy(1, 2), dy(1, 1)), (dy(1, 1), dy(3, 2))]).unwrap()
    }

    #[test]
    fn identity_has_no_interior_breaks() {
        assert!(PLMap::identity().is_identity());
        assert_eq!(PLMap::identity().interior_breaks(), &[]);
    }

    #[test]
    fn from_breaks_adds_endpoints_and_canonicalizes() {
        let f = dbl();
        assert_eq!(f.breaks().len(), 4);
        // A collinear interior point is dropped.
        let g = PLMap::from_breaks([
            (dy(1, 2), dy(1, 1)),
            (dy(3, 3), dy(5, 3)), // on the slope-1 segment
            (dy(1, 1), dy(3, 2)),
        ])
        .unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn from_breaks_rejects_bad_input() {
        assert_eq!(
            PLMap::from_breaks([(dy(1, 2), dy(1, 1)), (dy(1, 2), dy(3, 2))]),
            Err(PLMapError::NotMonotone)
        );
        assert_eq!(
            PLMap::from_breaks([(dy(1, 2), dy(3, 2)), (dy(1, 1), dy(1, 1))]),
            Err(PLMapError::NotMonotone)
        );
        assert!(matches!(
            PLMap::from_breaks([(dy(1, 2), dy(1, 1)), (dy(1, 1), dy(5, 3))]),
            Err(PLMapError::SlopeNotPowerOfTwo { .. })
        ));
        assert!(matches!(
            PLMap::from_breaks([(dy(3, 1), dy(1, 1))]),
            Err(PLMapError::CoordinateOutOfRange { .. })
        ));
        assert!(matches!(
            PLMap::from_breaks([(dy(0, 0), dy(1, 1))]),
            Err(PLMapError::NotMonotone)
        ));
    }

    #[test]
    fn evaluate_is_exact() {
        let f = dbl();
        assert_eq!(f.evaluate_dyadic(&dy(1, 2)).unwrap(), dy(1, 1));
        assert_eq!(f.evaluate_dyadic(&dy(3, 3)).unwrap(), dy(5, 3));
        assert_eq!(f.evaluate(&rat(1, 3)).unwrap(), rat(7, 12));
        assert_eq!(f.evaluate(&Rational::one()).unwrap(), Rational::one());
        assert!(matches!(f.evaluate(&rat(3, 2)), Err(PLMapError::OutOfRange(_))));
        assert!(matches!(f.evaluate_dyadic(&dy(-1, 1)), Err(PLMapError::OutOfRange(_))));
    }

    #[test]
    fn compose_matches_hand_computation() {
        let f = dbl();
        let ff = f.compose(&f);
        let expected = PLMap::from_breaks([
            (dy(1, 3), dy(1, 1)),
            (dy(1, 2), dy(3, 2)),
            (dy(1, 1), dy(7, 3)),
        ])
        .unwrap();
        assert_eq!(ff, expected);
        assert_eq!(f.compose(&f.inverse()), PLMap::identity());
        assert_eq!(f.compose(&PLMap::identity()), f);
    }

    #[test]
    fn inverse_swaps_coordinates() {
        let inv = dbl().inverse();
        let expected =
            PLMap::from_breaks([(dy(1, 1), dy(1, 2)), (dy(3, 2), dy(1, 1))]).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn rev_reflects_both_axes() {
        let f = dbl();
        let r = f.rev();
        let expected =
            PLMap::from_breaks([(dy(1, 1), dy(1, 2)), (dy(3, 2), dy(1, 1))]).unwrap();
        assert_eq!(r, expected); // for this map, rev coincides with inverse
        assert_eq!(r.rev(), f);
        assert_eq!(PLMap::identity().rev(), PLMap::identity());
    }

    #[test]
    fn power_composes_signed_iterates() {
        let f = dbl();
        assert_eq!(f.power(0), PLMap::identity());
        assert_eq!(f.power(2), f.compose(&f));
        assert_eq!(f.power(-1), f.inverse());
        assert_eq!(f.power(3).compose(&f.power(-3)), PLMap::identity());
    }

    #[test]
    fn conjugate_and_commutator_use_word_order() {
        let f = dbl();
        let g = f.compose(&f);
        assert_eq!(f.conjugate(&PLMap::identity()), f);
        assert_eq!(f.conjugate(&g), g.inverse().compose(&f).compose(&g));
        assert_eq!(f.commutator(&f), PLMap::identity());
        assert_eq!(
            f.commutator(&g),
            f.compose(&g).compose(&f.inverse()).compose(&g.inverse())
        );
    }

    #[test]
    fn orbitals_of_simple_maps() {
        assert_eq!(PLMap::identity().orbitals(), vec![]);
        let f = dbl();
        assert_eq!(
            f.orbitals(),
            vec![Orbital { lo: Rational::zero(), hi: Rational::one() }]
        );
        let bump = PLMap::from_breaks([
            (dy(3, 3), dy(3, 3)),
            (dy(1, 1), dy(5, 3)),
            (dy(5, 3), dy(3, 2)),
            (dy(7, 3), dy(7, 3)),
        ])
        .unwrap();
        assert_eq!(bump.orbitals(), vec![Orbital { lo: rat(3, 8), hi: rat(7, 8) }]);
    }

    #[test]
    fn orbitals_find_non_dyadic_fixed_points() {
        // Slopes 1/2, 4, 1, 1/2: below the diagonal, then above, crossing at
        // the non-dyadic point 7/12.
        let f = PLMap::from_breaks([
            (dy(1, 1), dy(1, 2)),
            (dy(5, 3), dy(3, 2)),
            (dy(3, 2), dy(7, 3)),
        ])
        .unwrap();
        assert_eq!(
            f.orbitals(),
            vec![
                Orbital { lo: Rational::zero(), hi: rat(7, 12) },
                Orbital { lo: rat(7, 12), hi: Rational::one() },
            ]
        );
    }

    #[test]
    fn support_equals_compares_on_interval() {
        let f = dbl();
        let id = PLMap::identity();
        assert!(!f.support_equals(&id, &dy(0, 0), &dy(1, 3)));
        let bump = PLMap::from_breaks([
            (dy(3, 3), dy(3, 3)),
            (dy(1, 1), dy(5, 3)),
            (dy(5, 3), dy(3, 2)),
            (dy(7, 3), dy(7, 3)),
        ])
        .unwrap();
        assert!(bump.support_equals(&id, &dy(0, 0), &dy(3, 3)));
        assert!(bump.support_equals(&id, &dy(7, 3), &dy(1, 0)));
        assert!(!bump.support_equals(&id, &dy(0, 0), &dy(1, 1)));
    }

    #[test]
    fn push_to_end_walks_toward_lo() {
        let f = dbl();
        let orb = Orbital { lo: Rational::zero(), hi: Rational::one() };
        // f moves points up, so the iterate count is negative.
        let n = f.push_to_end(&orb, &rat(1, 2), &rat(1, 4), 100).unwrap();
        assert_eq!(n, -2);
        let image = f.power(n).evaluate(&rat(1, 2)).unwrap();
        assert!(Rational::zero() < image && image < rat(1, 4));
        // Already in range.
        assert_eq!(f.push_to_end(&orb, &rat(1, 2), &Rational::one(), 100).unwrap(), 0);
        // The inverse moves points down: positive count.
        let n = f.inverse().push_to_end(&orb, &rat(1, 2), &rat(1, 4), 100).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn push_to_end_errors() {
        let f = dbl();
        let orb = Orbital { lo: Rational::zero(), hi: Rational::one() };
        assert!(matches!(
            f.push_to_end(&orb, &rat(2, 1), &rat(1, 4), 100),
            Err(PLMapError::NotInOrbital(_))
        ));
        assert!(matches!(
            f.push_to_end(&orb, &rat(1, 2), &Rational::zero(), 100),
            Err(PLMapError::BadInput(_))
        ));
        assert!(matches!(
            f.push_to_end(&orb, &rat(1, 2), &rat(1, 1 << 30), 3),
            Err(PLMapError::IterationCapExceeded(3))
        ));
    }

    #[test]
    fn interpolator_hits_constraints() {
        let f = PLMap::dyadic_interpolator(&[dy(1, 2), dy(1, 1)], &[dy(1, 1), dy(3, 2)]).unwrap();
        assert_eq!(f, dbl());
        let g = PLMap::dyadic_interpolator(&[dy(5, 4)], &[dy(7, 3)]).unwrap();
        assert_eq!(g.evaluate_dyadic(&dy(5, 4)).unwrap(), dy(7, 3));
    }

    #[test]
    fn interpolator_identity_cases() {
        assert_eq!(PLMap::dyadic_interpolator(&[], &[]).unwrap(), PLMap::identity());
        assert_eq!(
            PLMap::dyadic_interpolator(&[dy(3, 3)], &[dy(3, 3)]).unwrap(),
            PLMap::identity()
        );
    }

    #[test]
    fn interpolator_rejects_bad_input() {
        assert!(matches!(
            PLMap::dyadic_interpolator(&[dy(1, 2)], &[]),
            Err(PLMapError::BadInput(_))
        ));
        assert!(matches!(
            PLMap::dyadic_interpolator(&[dy(1, 2), dy(1, 2)], &[dy(1, 3), dy(1, 1)]),
            Err(PLMapError::BadInput(_))
        ));
        assert!(matches!(
            PLMap::dyadic_interpolator(&[Dyadic::zero()], &[dy(1, 2)]),
            Err(PLMapError::BadInput(_))
        ));
        assert!(matches!(
            PLMap::dyadic_interpolator(&[Dyadic::one()], &[dy(1, 2)]),
            Err(PLMapError::BadInput(_))
        ));
    }

    #[test]
    fn breaks_text_round_trip() {
        let f = dbl();
        assert_eq!(f.to_breaks_text(), "(1/4,1/2);(1/2,3/4)");
        assert_eq!(PLMap::parse_breaks_text("(1/4,1/2);(1/2,3/4)").unwrap(), f);
        assert_eq!(PLMap::parse_breaks_text("").unwrap(), PLMap::identity());
        assert_eq!(PLMap::parse_breaks_text(" (1/4, 1/2) ; (1/2, 3/4) ").unwrap(), f);
        assert!(matches!(
            PLMap::parse_breaks_text("(1/4;1/2)"),
            Err(PLMapError::MalformedPair(_))
        ));
        assert!(matches!(
            PLMap::parse_breaks_text("(1/3,1/2)"),
            Err(PLMapError::Number(_))
        ));
    }

    #[test]
    fn json_round_trip_with_implicit_endpoints() {
        let f = dbl();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"breaks":[["1/4","1/2"],["1/2","3/4"]]}"#);
        assert_eq!(serde_json::from_str::<PLMap>(&json).unwrap(), f);
        assert_eq!(
            serde_json::to_string(&PLMap::identity()).unwrap(),
            r#"{"breaks":[]}"#
        );
        assert!(serde_json::from_str::<PLMap>(r#"{"breaks":[["1/4","1/3"]]}"#).is_err());
    }

    prop_compose! {
        fn arb_cut_list()(set in prop::collection::btree_set((1u32..64, 0u32..2), 0..5)) -> Vec<Dyadic> {
            let cuts: BTreeSet<Dyadic> = set
                .into_iter()
                .map(|(n, extra)| Dyadic::new(n as i64, 6 + extra as u64))
                .collect();
            cuts.into_iter().collect()
        }
    }

    prop_compose! {
        fn arb_plmap()(xs in arb_cut_list(), ys in arb_cut_list()) -> PLMap {
            let n = xs.len().min(ys.len());
            PLMap::dyadic_interpolator(&xs[..n], &ys[..n]).unwrap()
        }
    }

    proptest! {
        #[test]
        fn interpolator_maps_constraints_exactly(xs in arb_cut_list(), ys in arb_cut_list()) {
            let n = xs.len().min(ys.len());
            let f = PLMap::dyadic_interpolator(&xs[..n], &ys[..n]).unwrap();
            for (x, y) in xs[..n].iter().zip(&ys[..n]) {
                prop_assert_eq!(&f.evaluate_dyadic(x).unwrap(), y);
            }
        }

        #[test]
        fn group_laws(f in arb_plmap(), g in arb_plmap(), h in arb_plmap()) {
            prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
            prop_assert_eq!(f.compose(&f.inverse()), PLMap::identity());
            prop_assert_eq!(f.inverse().compose(&f), PLMap::identity());
            prop_assert_eq!(f.inverse().inverse(), f.clone());
        }

        #[test]
        fn rev_is_an_automorphism(f in arb_plmap(), g in arb_plmap()) {
            prop_assert_eq!(f.compose(&g).rev(), f.rev().compose(&g.rev()));
            prop_assert_eq!(f.inverse().rev(), f.rev().inverse());
        }

        #[test]
        fn evaluation_respects_composition(f in arb_plmap(), g in arb_plmap(), n in 1u32..63) {
            let t = Rational::new(BigInt::from(n), BigInt::from(64));
            let lhs = f.compose(&g).evaluate(&t).unwrap();
            let rhs = g.evaluate(&f.evaluate(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn canonical_form_has_no_redundant_breaks(f in arb_plmap(), g in arb_plmap()) {
            let h = f.compose(&g);
            for i in 0..h.breaks().len().saturating_sub(2) {
                prop_assert_ne!(h.segment_exponent(i), h.segment_exponent(i + 1));
            }
        }
    }
}
