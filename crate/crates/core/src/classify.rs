//! Classification of the finite-index subgroups of F.
//!
//! Every finite-index subgroup of F is the full phi-preimage of a
//! finite-index subgroup of Z^2, so it is determined by a canonical lattice
//! triple. Two of them are isomorphic as groups exactly when their rescaled
//! lattices agree, possibly after swapping the two coordinates; the swap
//! reflects the outer automorphism of F that reverses the interval.

use std::fmt;

use serde::Serialize;

use crate::lattice::{LatticeError, LatticeSubgroup, RectPair};
use crate::plmap::PLMap;
use crate::thompson::phi;

/// A finite-index subgroup of F, represented by its phi-image lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FIFSubgroup {
    lattice: LatticeSubgroup,
}

/// How two rescaled lattices were matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoWitness {
    EqualAfterTau,
    EqualAfterTauAndRev,
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoWitness::EqualAfterTau => write!(f, "equal-after-tau"),
            IsoWitness::EqualAfterTauAndRev => write!(f, "equal-after-tau-and-rev"),
        }
    }
}

/// The outcome of an isomorphism test, with the rescaled lattices that
/// decided it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub witness: Option<IsoWitness>,
    pub scaled: (LatticeSubgroup, LatticeSubgroup),
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scaled left: {}", self.scaled.0)?;
        writeln!(f, "scaled right: {}", self.scaled.1)?;
        writeln!(f, "isomorphic: {}", self.isomorphic)?;
        match self.witness {
            Some(w) => write!(f, "witness: {w}"),
            None => write!(f, "witness: none"),
        }
    }
}

/// Everything the analysis of one finite-index subgroup reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionSummary {
    pub lattice: LatticeSubgroup,
    pub index: i128,
    pub inner: RectPair,
    pub outer: RectPair,
    pub residue: i64,
    pub quotient_generator: (i128, i128),
    pub quotient_order: i64,
    pub isomorphic_to_f: bool,
}

impl fmt::Display for ExtensionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice: {}", self.lattice)?;
        writeln!(f, "index: {}", self.index)?;
        writeln!(f, "inner: {}", self.inner)?;
        writeln!(f, "outer: {}", self.outer)?;
        writeln!(f, "residue: {}", self.residue)?;
        writeln!(
            f,
            "quotient: generated by ({}, {}) of order {}",
            self.quotient_generator.0, self.quotient_generator.1, self.quotient_order
        )?;
        write!(f, "isomorphic to F: {}", self.isomorphic_to_f)
    }
}

impl fmt::Display for FIFSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lattice)
    }
}

impl FIFSubgroup {
    /// The subgroup whose phi-image is the given lattice.
    pub fn from_lattice(lattice: LatticeSubgroup) -> Self {
        Self { lattice }
    }

    /// The subgroup generated by the given elements together with the
    /// commutator subgroup: its phi-image is the span of their phi-values.
    pub fn from_f_generators(maps: &[PLMap]) -> Result<Self, LatticeError> {
        let pairs: Vec<(i64, i64)> =
            maps.iter().map(|f| { let p = phi(f); (p.e0, p.e1) }).collect();
        Self::from_phi_pairs(&pairs)
    }

    /// The subgroup whose phi-image is spanned by the given pairs.
    pub fn from_phi_pairs(pairs: &[(i64, i64)]) -> Result<Self, LatticeError> {
        Ok(Self { lattice: LatticeSubgroup::from_generators(pairs)? })
    }

    pub fn lattice(&self) -> LatticeSubgroup {
        self.lattice
    }

    /// The index in F, which equals the lattice index in Z^2.
    pub fn index(&self) -> i128 {
        self.lattice.index()
    }

    /// The cyclic quotient by the largest rectangle subgroup it contains:
    /// a generator in Z_a x Z_b and its order.
    pub fn quotient_by_rectangular(&self) -> ((i128, i128), i64) {
        self.lattice.cyclic_quotient_generator()
    }

    /// True exactly when the subgroup is isomorphic to F itself, i.e. when
    /// its lattice is a rectangle (residue one).
    pub fn isomorphic_to_f(&self) -> bool {
        self.lattice.residue() == 1
    }

    /// The full invariant report for this subgroup.
    pub fn summary(&self) -> ExtensionSummary {
        let (quotient_generator, quotient_order) = self.lattice.cyclic_quotient_generator();
        ExtensionSummary {
            lattice: self.lattice,
            index: self.index(),
            inner: self.lattice.inner(),
            outer: self.lattice.outer(),
            residue: self.lattice.residue(),
            quotient_generator,
            quotient_order,
            isomorphic_to_f: self.isomorphic_to_f(),
        }
    }

    /// Decides isomorphism by comparing rescaled lattices directly and
    /// after the coordinate swap.
    pub fn are_isomorphic(&self, other: &Self) -> IsoVerdict {
        let t1 = self.lattice.tau_rescale();
        let t2 = other.lattice.tau_rescale();
        let witness = if t1 == t2 {
            Some(IsoWitness::EqualAfterTau)
        } else if t1 == t2.rev().expect("rev of a rescaled triple stays in range") {
            Some(IsoWitness::EqualAfterTauAndRev)
        } else {
            None
        };
        IsoVerdict { isomorphic: witness.is_some(), witness, scaled: (t1, t2) }
    }
}

/// All canonical triples of a given index, grouped into isomorphism classes.
/// Classes are sorted by their smallest rescaled representative, members by
/// triple.
pub fn classify_index(n: i64) -> Result<Vec<Vec<LatticeSubgroup>>, LatticeError> {
    let mut classes: std::collections::BTreeMap<LatticeSubgroup, Vec<LatticeSubgroup>> =
        std::collections::BTreeMap::new();
    for l in LatticeSubgroup::enumerate_index(n)? {
        let t = l.tau_rescale();
        let key = t.min(t.rev().expect("rev of a rescaled triple stays in range"));
        classes.entry(key).or_default().push(l);
    }
    Ok(classes.into_values().collect())
}
