//! Rank-2 positive lattice, skew form, truncation context.
//!
//! `LatticeVector` ranges over N+ = { a1*e1 + a2*e2 : a1, a2 >= 0, (a1, a2) != 0 }.
//! The skew form is `{n, n'} = lambda * (a1*b2 - a2*b1)`; `lambda` is the value
//! on the basis pair `{e1, e2}` and is configurable per run.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::Error;
use crate::rat::{rat_int, Rat};

/// Point of N+. Invariant: `a1 + a2 > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    a1: u32,
    a2: u32,
}

impl LatticeVector {
    /// Panics when `(a1, a2) == (0, 0)`; use `try_new` for user input.
    pub fn new(a1: u32, a2: u32) -> Self {
        assert!(a1 > 0 || a2 > 0, "lattice vector (0, 0) is not in N+");
        LatticeVector { a1, a2 }
    }

    pub fn try_new(a1: i64, a2: i64) -> Result<Self, Error> {
        if a1 < 0 || a2 < 0 || (a1 == 0 && a2 == 0) || a1 > u32::MAX as i64 || a2 > u32::MAX as i64
        {
            return Err(Error::NotInPositiveLattice(a1, a2));
        }
        Ok(LatticeVector {
            a1: a1 as u32,
            a2: a2 as u32,
        })
    }

    pub fn e1() -> Self {
        LatticeVector { a1: 1, a2: 0 }
    }

    pub fn e2() -> Self {
        LatticeVector { a1: 0, a2: 1 }
    }

    pub fn a1(&self) -> u32 {
        self.a1
    }

    pub fn a2(&self) -> u32 {
        self.a2
    }

    /// Total degree `a1 + a2`; always >= 1.
    pub fn degree(&self) -> u32 {
        self.a1 + self.a2
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector::new(self.a1 + other.a1, self.a2 + other.a2)
    }

    /// `k * n` for `k >= 1`.
    pub fn scale(&self, k: u32) -> Self {
        assert!(k > 0, "scaling a lattice vector by 0 leaves N+");
        LatticeVector::new(self.a1 * k, self.a2 * k)
    }

    /// Primitive generator of the ray through `self`.
    pub fn primitive(&self) -> Self {
        let g = self.a1.gcd(&self.a2);
        LatticeVector::new(self.a1 / g, self.a2 / g)
    }

    /// True when `self = k * other` for some integer `k >= 1`.
    pub fn is_multiple_of(&self, other: &Self) -> bool {
        cross(self, other) == 0
            && other.a1 <= self.a1
            && other.a2 <= self.a2
            && self.primitive() == other.primitive()
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a1, self.a2)
    }
}

/// Graded-lexicographic: by total degree, then by first coordinate.
impl Ord for LatticeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.a1).cmp(&(other.degree(), other.a1))
    }
}

impl PartialOrd for LatticeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer cross product `a1*b2 - a2*b1` (the skew form at lambda = 1).
pub fn cross(n: &LatticeVector, m: &LatticeVector) -> i64 {
    i64::from(n.a1) * i64::from(m.a2) - i64::from(n.a2) * i64::from(m.a1)
}

/// `n` strictly precedes `m` in slope order when `n` is strictly closer to the
/// e1-axis, i.e. `cross(n, m) > 0`.
pub fn slope_precedes(n: &LatticeVector, m: &LatticeVector) -> bool {
    cross(n, m) > 0
}

/// Total preorder on rays: `Less` = closer to the e1-axis, `Equal` = parallel.
pub fn slope_cmp(n: &LatticeVector, m: &LatticeVector) -> Ordering {
    0i64.cmp(&cross(n, m))
}

/// Shape of a factor sequence with respect to slope order.
///
/// `Ordered`/`AntiOrdered` are non-strict: parallel neighbors are allowed.
/// A sequence that is entirely parallel (or has fewer than two factors) is
/// `Parallel`, which counts as both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductClass {
    Ordered,
    AntiOrdered,
    Parallel,
    Mixed,
}

/// Classifies consecutive slope comparisons of a factor sequence.
pub fn classify_product(ns: &[LatticeVector]) -> ProductClass {
    let mut saw_up = false; // some pair strictly ordered
    let mut saw_down = false; // some pair strictly anti-ordered
    for w in ns.windows(2) {
        match cross(&w[0], &w[1]) {
            c if c > 0 => saw_up = true,
            c if c < 0 => saw_down = true,
            _ => {}
        }
    }
    match (saw_up, saw_down) {
        (false, false) => ProductClass::Parallel,
        (true, false) => ProductClass::Ordered,
        (false, true) => ProductClass::AntiOrdered,
        (true, true) => ProductClass::Mixed,
    }
}

/// The skew form; `lambda = {e1, e2}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewForm {
    lambda: Rat,
}

impl SkewForm {
    pub fn new(lambda: Rat) -> Self {
        SkewForm { lambda }
    }

    /// The engine's default normalization `{e2, e1} = 1`.
    pub fn standard() -> Self {
        SkewForm {
            lambda: rat_int(-1),
        }
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn is_degenerate(&self) -> bool {
        self.lambda.is_zero()
    }

    /// `{n, m} = lambda * cross(n, m)`.
    pub fn skew(&self, n: &LatticeVector, m: &LatticeVector) -> Rat {
        &self.lambda * rat_int(cross(n, m))
    }
}

impl fmt::Debug for SkewForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewForm(lambda = {})", self.lambda)
    }
}

/// Truncation degree D >= 1; the working quotient kills all degrees > D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TruncationDegree(u32);

impl TruncationDegree {
    pub fn new(d: u32) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::BadCutoff);
        }
        Ok(TruncationDegree(d))
    }

    pub fn get(&self) -> u32 {
        self.0
    }
}

/// Shared truncation context: every series, group element and diagram carries
/// one, and binary operations panic on mismatch (mixing contexts is a bug in
/// the caller, not a data condition).
#[derive(Clone, PartialEq)]
pub struct Context {
    pub cutoff: TruncationDegree,
    pub form: SkewForm,
}

impl Context {
    pub fn new(cutoff: u32, lambda: Rat) -> Result<Self, Error> {
        Ok(Context {
            cutoff: TruncationDegree::new(cutoff)?,
            form: SkewForm::new(lambda),
        })
    }

    /// Default form `lambda = -1` at the given cutoff.
    pub fn standard(cutoff: u32) -> Self {
        Context {
            cutoff: TruncationDegree::new(cutoff).expect("cutoff >= 1"),
            form: SkewForm::standard(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.cutoff.get()
    }

    pub fn skew(&self, n: &LatticeVector, m: &LatticeVector) -> Rat {
        self.form.skew(n, m)
    }

    /// Same form, lower cutoff; used by degree-by-degree algorithms.
    pub fn truncated_to(&self, d: u32) -> Context {
        Context {
            cutoff: TruncationDegree::new(d.min(self.degree())).expect("cutoff >= 1"),
            form: self.form.clone(),
        }
    }

    pub fn check_same(&self, other: &Context) {
        assert!(
            self.cutoff == other.cutoff,
            "cutoff mismatch: {} vs {}",
            self.degree(),
            other.degree()
        );
        assert!(
            self.form == other.form,
            "skew form mismatch: lambda {} vs {}",
            self.form.lambda(),
            other.form.lambda()
        );
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Context(D = {}, lambda = {})",
            self.degree(),
            self.form.lambda()
        )
    }
}
