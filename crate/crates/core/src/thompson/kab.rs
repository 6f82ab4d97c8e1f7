//! Witness generator pairs (y0, y1) for the rectangular subgroups K_{a,b},
//! and the exact certificate that verifies them.
//!
//! y0 follows a fixed skeleton: slope 2^a out of (0,0) up to (a1,b1),
//! slope 1 from (a2,b2) = (1/8,3/8) to (a3,b3) = (5/8,7/8), and slope 2^-b
//! from (a4,b4) into (1,1). The two connector regions are filled with a
//! staircase of axis-aligned boxes whose floors clear the diagonal, so the
//! whole graph stays strictly above it; each box is then interpolated with
//! standard dyadic pieces. y1 is the identity up to 3/8, has slope 2 on
//! [3/8,5/8], and coincides with y0 from 5/8 on.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyadic::{Dyadic, Rational};
use crate::plmap::{fill_box, Orbital, PLMap};
use crate::thompson::{g0_g1, phi, PhiImage};

fn dy(n: i64, exp: u64) -> Dyadic {
    Dyadic::new(n, exp)
}

fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
    (a + b).mul_pow2(-1)
}

/// Monotone waypoints from `start` to `end` such that every consecutive box
/// keeps its y-floor at or above its x-ceiling; any monotone interpolation
/// through them stays strictly above the diagonal.
///
/// Requires start and end strictly above the diagonal with increasing
/// coordinates. Without an RNG the climb is by min(doubling, midpoint);
/// with one, the upward step is drawn from a few valid choices.
fn staircase(
    start: (Dyadic, Dyadic),
    end: (Dyadic, Dyadic),
    rng: &mut Option<ChaCha8Rng>,
) -> Vec<(Dyadic, Dyadic)> {
    let (c, d) = end;
    let mut z = start.1.clone();
    let mut pts = vec![start];
    loop {
        let u_next = z.clone().min(c.clone());
        if u_next == c {
            pts.push((c, d));
            return pts;
        }
        let step_up = match rng {
            None => midpoint(&z, &d),
            Some(r) => {
                let k = r.gen_range(1..=3u32);
                &z + &(&d - &z).mul_pow2(-(k as i64))
            }
        };
        z = z.mul_pow2(1).min(step_up);
        pts.push((u_next, z.clone()));
        assert!(pts.len() < 10_000, "staircase failed to terminate");
    }
}

fn fill_waypoints(out: &mut Vec<(Dyadic, Dyadic)>, pts: &[(Dyadic, Dyadic)]) {
    for pair in pts.windows(2) {
        fill_box(out, &pair[0], &pair[1]);
    }
    if let Some(last) = pts.last() {
        out.push(last.clone());
    }
}

/// Generating pair (y0, y1) for the rectangular subgroup K_{a,b}, a, b >= 1.
///
/// phi(y0) = (a, -b), phi(y1) = (0, -b), and the pair satisfies the
/// certificate of [`verify_kab_certificate`]. The connector completion is
/// deterministic; a seed varies it without changing any certificate value.
pub fn kab_generators(a: u32, b: u32, seed: Option<u64>) -> (PLMap, PLMap) {
    assert!(a >= 1 && b >= 1, "rectangular parameters must be positive");
    let one = Dyadic::one();
    let (a1, b1) = if a == 1 {
        (dy(1, 4), dy(1, 3))
    } else {
        (Dyadic::pow2(-2 * a as i64), Dyadic::pow2(-(a as i64)))
    };
    let (a2, b2) = (dy(1, 3), dy(3, 3));
    let (a3, b3) = (dy(5, 3), dy(7, 3));
    let (a4, b4) = if b == 1 {
        (dy(7, 3), dy(15, 4))
    } else {
        (&one - &Dyadic::pow2(-(b as i64)), &one - &Dyadic::pow2(-2 * b as i64))
    };

    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let lower = staircase((a1, b1), (a2, b2), &mut rng);
    let upper = staircase((a3.clone(), b3.clone()), (a4, b4), &mut rng);

    let mut breaks = vec![(Dyadic::zero(), Dyadic::zero())];
    fill_waypoints(&mut breaks, &lower);
    fill_waypoints(&mut breaks, &upper);
    breaks.push((one.clone(), one));
    let y0 = PLMap::from_breaks(breaks).expect("y0 skeleton and fills are valid");

    let mut y1_breaks = vec![(dy(3, 3), dy(3, 3)), (a3.clone(), b3)];
    y1_breaks.extend(y0.breaks().iter().filter(|(x, _)| *x > a3).cloned());
    let y1 = PLMap::from_breaks(y1_breaks).expect("y1 agrees with y0 past 5/8");
    (y0, y1)
}

/// One verified property of a candidate generating pair.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The outcome of every certificate check for a candidate K_{a,b} pair.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub a: u32,
    pub b: u32,
    pub checks: Vec<CertificateCheck>,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate for K_({},{})", self.a, self.b)?;
        for check in &self.checks {
            let status = if check.passed { "pass" } else { "FAIL" };
            writeln!(f, "  {}: {} ({})", check.name, status, check.detail)?;
        }
        let overall = if self.all_passed() { "pass" } else { "FAIL" };
        write!(f, "  overall: {overall}")
    }
}

/// Verifies, in exact arithmetic, the properties that make (y0, y1) a
/// generating pair of K_{a,b}: the phi-images, the support of y0 y1^-1 and
/// the commutations it forces, non-commutativity, the conjugates of
/// [y0, y1] landing exactly on the bump pair, and y0 lying strictly above
/// the diagonal.
pub fn verify_kab_certificate(a: u32, b: u32, y0: &PLMap, y1: &PLMap) -> CertificateReport {
    let mut checks = Vec::new();

    let p0 = phi(y0);
    let p1 = phi(y1);
    let want0 = PhiImage { e0: a as i64, e1: -(b as i64) };
    let want1 = PhiImage { e0: 0, e1: -(b as i64) };
    checks.push(CertificateCheck {
        name: "phi-images",
        passed: p0 == want0 && p1 == want1,
        detail: format!("phi(y0) = {p0}, phi(y1) = {p1}; expected {want0} and {want1}"),
    });

    let diff = y0.compose(&y1.inverse());
    let want_support = vec![Orbital {
        lo: Rational::zero(),
        hi: Rational::new(BigInt::from(5), BigInt::from(8)),
    }];
    let orbs = diff.orbitals();
    checks.push(CertificateCheck {
        name: "difference-support",
        passed: orbs == want_support,
        detail: format!(
            "Supp(y0 y1^-1) = {}; expected (0,5/8)",
            orbs.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" u ")
        ),
    });

    let c1 = diff.commutator(&y1.conjugate(y0));
    let c2 = diff.commutator(&y1.conjugate(&y0.power(2)));
    checks.push(CertificateCheck {
        name: "disjoint-support-commutation",
        passed: c1.is_identity() && c2.is_identity(),
        detail: format!(
            "[y0 y1^-1, y1^y0] trivial: {}; [y0 y1^-1, y1^(y0^2)] trivial: {}",
            c1.is_identity(),
            c2.is_identity()
        ),
    });

    let comm = y0.commutator(y1);
    let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
    let at_quarter = comm.evaluate(&quarter);
    checks.push(CertificateCheck {
        name: "non-commuting",
        passed: !comm.is_identity(),
        detail: match at_quarter {
            Ok(v) => format!("(1/4)[y0,y1] = {v}"),
            Err(e) => format!("evaluation failed: {e}"),
        },
    });

    let (g0, g1) = g0_g1();
    let to_g0 = comm.conjugate(y0);
    checks.push(CertificateCheck {
        name: "conjugate-to-g0",
        passed: to_g0 == g0,
        detail: format!("[y0,y1]^y0 = {}", to_g0.to_breaks_text()),
    });
    let to_g1 = comm.conjugate(&diff);
    checks.push(CertificateCheck {
        name: "conjugate-to-g1",
        passed: to_g1 == g1,
        detail: format!("[y0,y1]^(y0 y1^-1) = {}", to_g1.to_breaks_text()),
    });

    let above = y0.initial_slope_exponent() > 0
        && y0.final_slope_exponent() < 0
        && y0.interior_breaks().iter().all(|(x, y)| y > x);
    checks.push(CertificateCheck {
        name: "above-diagonal",
        passed: above,
        detail: "y0 strictly above the diagonal on (0,1)".to_owned(),
    });

    CertificateReport { a, b, checks }
}
