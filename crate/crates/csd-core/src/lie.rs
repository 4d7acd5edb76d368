//! The N+-graded Lie algebra and its truncated quotients.
//!
//! A `LieSeries` is a finite sum `Σ a_n X_n` over lattice points of degree
//! at most the context cutoff. The bracket is `[X_n, X_m] = {n, m} X_{n+m}`,
//! extended bilinearly and truncated; brackets strictly raise degree, so the
//! quotient is nilpotent and all exponentials below are finite sums.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::lattice::{Context, LatticeVector};
use crate::rat::{format_rat, rat, Rat};

#[derive(Clone, PartialEq)]
pub struct LieSeries {
    ctx: Context,
    terms: BTreeMap<LatticeVector, Rat>,
}

impl LieSeries {
    pub fn zero(ctx: &Context) -> Self {
        LieSeries {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Single term `c * X_n` (dropped silently when above the cutoff).
    pub fn generator(ctx: &Context, n: LatticeVector, c: Rat) -> Self {
        let mut s = LieSeries::zero(ctx);
        s.add_term(n, c);
        s
    }

    pub fn from_terms<I>(ctx: &Context, terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticeVector, Rat)>,
    {
        let mut s = LieSeries::zero(ctx);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, n: &LatticeVector) -> Rat {
        self.terms.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    /// Graded-lexicographic iteration (degree, then first coordinate).
    pub fn iter(&self) -> impl Iterator<Item = (&LatticeVector, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// First term in graded-lex order; its degree is minimal.
    pub fn lowest_term(&self) -> Option<(&LatticeVector, &Rat)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, n: LatticeVector, c: Rat) {
        if c.is_zero() || n.degree() > self.ctx.degree() {
            return;
        }
        match self.terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LieSeries) -> LieSeries {
        self.ctx.check_same(&other.ctx);
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LieSeries) -> LieSeries {
        self.ctx.check_same(&other.ctx);
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_term(*n, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LieSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> LieSeries {
        if k.is_zero() {
            return LieSeries::zero(&self.ctx);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k.clone();
        }
        out
    }

    /// Restriction to degrees <= `d` (projection along the truncation ideal
    /// filtration; the cutoff itself is unchanged).
    pub fn up_to_degree(&self, d: u32) -> LieSeries {
        let mut out = LieSeries::zero(&self.ctx);
        for (n, c) in self.iter() {
            if n.degree() <= d {
                out.terms.insert(*n, c.clone());
            }
        }
        out
    }

    /// The degree-`d` homogeneous part.
    pub fn homogeneous_part(&self, d: u32) -> LieSeries {
        let mut out = LieSeries::zero(&self.ctx);
        for (n, c) in self.iter() {
            if n.degree() == d {
                out.terms.insert(*n, c.clone());
            }
        }
        out
    }

    /// Same series in a different context (terms above the new cutoff drop).
    pub fn with_context(&self, ctx: &Context) -> LieSeries {
        let mut out = LieSeries::zero(ctx);
        for (n, c) in self.iter() {
            out.add_term(*n, c.clone());
        }
        out
    }

    /// True when every term lies on the ray through `prim`.
    pub fn supported_on_ray(&self, prim: &LatticeVector) -> bool {
        self.terms.keys().all(|n| n.is_multiple_of(prim))
    }

    /// `{"terms": [{"n": [a1, a2], "coeff": "p/q"}, ...], "cutoff": D}`
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .iter()
            .map(|(n, c)| json!({"n": [n.a1(), n.a2()], "coeff": format_rat(c)}))
            .collect();
        json!({"terms": terms, "cutoff": self.ctx.degree()})
    }
}

impl fmt::Debug for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let body: Vec<String> = self
            .iter()
            .map(|(n, c)| format!("{c}*X{n:?}"))
            .collect();
        write!(f, "{}", body.join(" + "))
    }
}

/// `[X, Y]` truncated at the shared cutoff. Panics when the operands carry
/// different contexts.
pub fn bracket(x: &LieSeries, y: &LieSeries) -> LieSeries {
    x.ctx.check_same(&y.ctx);
    let d = x.ctx.degree();
    let mut out = LieSeries::zero(&x.ctx);
    for (n, a) in x.iter() {
        if n.degree() >= d {
            continue; // n + m always overflows the cutoff
        }
        for (m, b) in y.iter() {
            if n.degree() + m.degree() > d {
                continue;
            }
            let s = x.ctx.skew(n, m);
            if s.is_zero() {
                continue;
            }
            out.add_term(n.add(m), a * b * s);
        }
    }
    out
}

/// Linear combination `Σ k_i * X_i`. All operands must share one context.
pub fn combine(parts: &[(Rat, &LieSeries)]) -> LieSeries {
    let ctx = parts
        .first()
        .map(|(_, s)| s.ctx.clone())
        .expect("combine of an empty list has no context");
    let mut out = LieSeries::zero(&ctx);
    for (k, s) in parts {
        ctx.check_same(&s.ctx);
        for (n, c) in s.iter() {
            out.add_term(*n, c * k);
        }
    }
    out
}

/// Logarithm of the dilogarithm element `[n]^c`:
/// `c * Σ_{j >= 1} (-1)^{j+1} / j^2 * X_{j n}`, truncated at the cutoff.
pub fn dilog_series(ctx: &Context, n: &LatticeVector, c: &Rat) -> LieSeries {
    let mut out = LieSeries::zero(ctx);
    if c.is_zero() {
        return out;
    }
    let mut j: u32 = 1;
    while j * n.degree() <= ctx.degree() {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let jj = i64::from(j);
        out.add_term(n.scale(j), c * rat(sign, jj * jj));
        j += 1;
    }
    out
}
