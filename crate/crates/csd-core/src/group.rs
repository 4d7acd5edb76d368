//! The pro-nilpotent structure group over a truncation context.
//!
//! Elements act faithfully on the truncated monoid ring: a group element `g`
//! is stored as the pair of unit series `(ux, uy)` with
//! `g(z^m) = z^m * ux^{m1} * uy^{m2}`. Multiplication is composition of
//! actions (`rho(g*h) = rho(g) ∘ rho(h)`: apply `h`'s substitution, then
//! rewrite through `g`), `exp` is the series exponential of the derivation
//! `X(z^m) = Σ a_n {n, m} z^{n+m}` (finite by nilpotency), and `log` is
//! recovered degree by degree: coefficients of degree d appear linearly in
//! the degree-d unit terms via `({n, e1}, {n, e2}) != (0, 0)`, below
//! corrections from already-known lower degrees.
//!
//! Degenerate form (`lambda == 0`): the group is abelian and an element is
//! just its logarithm; multiplication is series addition.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::lattice::{Context, LatticeVector};
use crate::lie::LieSeries;
use crate::rat::{format_rat, Rat};
use crate::series::{Mono, Series};

#[derive(Clone, PartialEq)]
enum Repr {
    Action { ux: Series, uy: Series },
    Abelian { log: LieSeries },
}

#[derive(Clone, PartialEq)]
pub struct GroupElement {
    ctx: Context,
    repr: Repr,
}

/// Outcome of an exact comparison; `Differs` reports the lowest-degree
/// lattice point where the logarithms disagree, with the exact coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum EqualityReport {
    Equal,
    Differs {
        point: LatticeVector,
        degree: u32,
        coefficient: Rat,
    },
}

impl EqualityReport {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityReport::Equal)
    }

    /// `{"status": "pass"}` or the discrepancy object.
    pub fn to_json(&self) -> Value {
        match self {
            EqualityReport::Equal => json!({"status": "pass"}),
            EqualityReport::Differs {
                point,
                degree,
                coefficient,
            } => json!({
                "status": "fail",
                "ray": [point.a1(), point.a2()],
                "degree": degree,
                "coefficient": format_rat(coefficient),
            }),
        }
    }
}

/// The derivation `X` applied to a ring series, truncated.
fn xhat(ctx: &Context, x: &LieSeries, f: &Series, trunc: u32) -> Series {
    let mut out = Series::zero();
    for (n, a) in x.iter() {
        let nd = n.degree();
        if nd > trunc {
            break; // graded-lex iteration: all later terms are no smaller
        }
        for (m, c) in f.iter_upto(trunc - nd) {
            // {n, m} with m a ring monomial (constants are killed)
            let s = ctx.form.lambda()
                * crate::rat::rat_int(
                    i64::from(n.a1()) * i64::from(m.y) - i64::from(n.a2()) * i64::from(m.x),
                );
            if s.is_zero() {
                continue;
            }
            out.add_term(Mono::new(m.x + n.a1(), m.y + n.a2()), a * c * s);
        }
    }
    out
}

/// Unit series of `exp(X)` on one generator, at ring truncation `trunc`.
///
/// In multiplier space the derivation becomes `u -> s*u + X(u)` where
/// `s = Σ a_n {n, e} z^n`; the exponential sum is finite because each
/// application raises the minimum degree.
fn exp_unit(ctx: &Context, x: &LieSeries, gen: &LatticeVector, trunc: u32) -> Series {
    let mut s = Series::zero();
    for (n, a) in x.iter() {
        if n.degree() > trunc {
            break;
        }
        s.add_term(Mono::new(n.a1(), n.a2()), a * ctx.skew(n, gen));
    }
    let mut total = Series::one();
    let mut term = Series::one();
    let mut k: u32 = 0;
    loop {
        k += 1;
        let next = s.mul(&term, trunc).add(&xhat(ctx, x, &term, trunc));
        term = next.scale(&Rat::new(1.into(), i64::from(k).into()));
        if term.is_zero() {
            break;
        }
        total.add_assign(&term);
        debug_assert!(k <= trunc + 1, "exponential failed to terminate");
    }
    total
}

/// Power table `u^0, u^1, ..., u^max` truncated at `d`.
fn powers(u: &Series, max: usize, d: u32) -> Vec<Series> {
    let mut p: Vec<Series> = Vec::with_capacity(max + 1);
    p.push(Series::one());
    for i in 1..=max {
        p.push(p[i - 1].mul(u, d));
    }
    p
}

fn max_exponents(fs: &[&Series]) -> (usize, usize) {
    let mut mx = 0;
    let mut my = 0;
    for f in fs {
        for (m, _) in f.iter() {
            mx = mx.max(m.x as usize);
            my = my.max(m.y as usize);
        }
    }
    (mx, my)
}

/// Substitute the generator images into `f` using precomputed power tables.
fn substitute(f: &Series, px: &[Series], py: &[Series], d: u32) -> Series {
    let mut out = Series::zero();
    for (m, c) in f.iter_upto(d) {
        let budget = d - m.degree();
        let unit = px[m.x as usize].mul(&py[m.y as usize], budget);
        for (u, uc) in unit.iter() {
            out.add_term(Mono::new(u.x + m.x, u.y + m.y), uc * c);
        }
    }
    out
}

impl GroupElement {
    pub fn identity(ctx: &Context) -> Self {
        let repr = if ctx.form.is_degenerate() {
            Repr::Abelian {
                log: LieSeries::zero(ctx),
            }
        } else {
            Repr::Action {
                ux: Series::one(),
                uy: Series::one(),
            }
        };
        GroupElement {
            ctx: ctx.clone(),
            repr,
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_identity(&self) -> bool {
        match &self.repr {
            Repr::Action { ux, uy } => ux.is_one() && uy.is_one(),
            Repr::Abelian { log } => log.is_zero(),
        }
    }

    /// Coefficient of `z^(m1, m2)` in the x-generator image multiplier.
    /// Only meaningful for a non-degenerate form.
    pub fn image_x_coeff(&self, m1: u32, m2: u32) -> Rat {
        match &self.repr {
            Repr::Action { ux, .. } => ux.coeff(&Mono::new(m1, m2)),
            Repr::Abelian { .. } => panic!("degenerate form has no action representation"),
        }
    }

    pub fn image_y_coeff(&self, m1: u32, m2: u32) -> Rat {
        match &self.repr {
            Repr::Action { uy, .. } => uy.coeff(&Mono::new(m1, m2)),
            Repr::Abelian { .. } => panic!("degenerate form has no action representation"),
        }
    }

    /// Exponential of a Lie series; total because the quotient is nilpotent.
    pub fn exp(x: &LieSeries) -> GroupElement {
        let ctx = x.context().clone();
        if ctx.form.is_degenerate() {
            return GroupElement {
                repr: Repr::Abelian { log: x.clone() },
                ctx,
            };
        }
        let d = ctx.degree();
        let ux = exp_unit(&ctx, x, &LatticeVector::e1(), d);
        let uy = exp_unit(&ctx, x, &LatticeVector::e2(), d);
        GroupElement {
            ctx,
            repr: Repr::Action { ux, uy },
        }
    }

    /// Inverse of `exp`: recovers the Lie series degree by degree. Fails with
    /// `MalformedElement` when the stored generator images are not the images
    /// of any single exponential (possible only for hand-built pairs).
    pub fn log(&self) -> Result<LieSeries, Error> {
        let (ux, uy) = match &self.repr {
            Repr::Abelian { log } => return Ok(log.clone()),
            Repr::Action { ux, uy } => (ux, uy),
        };
        let ctx = &self.ctx;
        let lambda = ctx.form.lambda().clone();
        let mut x = LieSeries::zero(ctx);
        for d in 1..=ctx.degree() {
            // predicted unit terms at degree d from the part already known
            let hx = exp_unit(ctx, &x, &LatticeVector::e1(), d);
            let hy = exp_unit(ctx, &x, &LatticeVector::e2(), d);
            for i in 0..=d {
                let n = LatticeVector::new(i, d - i);
                let m = Mono::new(i, d - i);
                let dx = ux.coeff(&m) - hx.coeff(&m);
                let dy = uy.coeff(&m) - hy.coeff(&m);
                // dx = a_n {n, e1} = -lambda*a2*a_n ; dy = a_n {n, e2} = lambda*a1*a_n
                let skew1 = -&lambda * crate::rat::rat_int(i64::from(n.a2()));
                let skew2 = &lambda * crate::rat::rat_int(i64::from(n.a1()));
                // cross-consistency of the two reads
                if &dx * &skew2 != &dy * &skew1 {
                    return Err(Error::MalformedElement(format!("{n:?}")));
                }
                let a = if !skew1.is_zero() {
                    dx / skew1
                } else if !skew2.is_zero() {
                    dy / skew2
                } else {
                    // lambda == 0 is the abelian representation, handled above
                    unreachable!("non-degenerate form with both skews zero")
                };
                x.add_term(n, a);
            }
        }
        // a well-formed pair is exactly reproduced by its exponential
        let back = GroupElement::exp(&x);
        if &back != self {
            return Err(Error::MalformedElement("above recovered degrees".into()));
        }
        Ok(x)
    }

    /// `self * other`, i.e. the action `rho(self) ∘ rho(other)`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        self.ctx.check_same(&other.ctx);
        match (&self.repr, &other.repr) {
            (Repr::Abelian { log: a }, Repr::Abelian { log: b }) => GroupElement {
                ctx: self.ctx.clone(),
                repr: Repr::Abelian { log: a.add(b) },
            },
            (Repr::Action { ux, uy }, Repr::Action { ux: vx, uy: vy }) => {
                let d = self.ctx.degree();
                // one shared power table serves both substitutions
                let (mx, my) = max_exponents(&[vx, vy]);
                let px = powers(ux, mx, d);
                let py = powers(uy, my, d);
                let nx = ux.mul(&substitute(vx, &px, &py, d), d);
                let ny = uy.mul(&substitute(vy, &px, &py, d), d);
                GroupElement {
                    ctx: self.ctx.clone(),
                    repr: Repr::Action { ux: nx, uy: ny },
                }
            }
            _ => unreachable!("representations are determined by the shared context"),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match &self.repr {
            Repr::Abelian { log } => GroupElement {
                ctx: self.ctx.clone(),
                repr: Repr::Abelian { log: log.neg() },
            },
            Repr::Action { .. } => {
                let x = self.log().expect("engine-built elements are well-formed");
                GroupElement::exp(&x.neg())
            }
        }
    }

    /// Rational power `g^c = exp(c * log g)`.
    pub fn pow(&self, c: &Rat) -> GroupElement {
        match &self.repr {
            Repr::Abelian { log } => GroupElement {
                ctx: self.ctx.clone(),
                repr: Repr::Abelian { log: log.scale(c) },
            },
            Repr::Action { .. } => {
                let x = self.log().expect("engine-built elements are well-formed");
                GroupElement::exp(&x.scale(c))
            }
        }
    }

    /// The dilogarithm element `[n]^c` in closed form: the wall-crossing
    /// substitution `z^m -> z^m (1 + z^n)^{c {n, m}}`. Definitionally equal
    /// to `exp` of the dilogarithm series; the equivalence of the two routes
    /// is enforced by tests rather than assumed anywhere.
    pub fn dilog(ctx: &Context, n: &LatticeVector, c: &Rat) -> GroupElement {
        if ctx.form.is_degenerate() {
            return GroupElement {
                ctx: ctx.clone(),
                repr: Repr::Abelian {
                    log: crate::lie::dilog_series(ctx, n, c),
                },
            };
        }
        let d = ctx.degree();
        let base = {
            let mut s = Series::one();
            if n.degree() <= d {
                s.add_term(Mono::new(n.a1(), n.a2()), Rat::one());
            }
            s
        };
        let ex = c * ctx.skew(n, &LatticeVector::e1());
        let ey = c * ctx.skew(n, &LatticeVector::e2());
        GroupElement {
            ctx: ctx.clone(),
            repr: Repr::Action {
                ux: base.pow_rat(&ex, d),
                uy: base.pow_rat(&ey, d),
            },
        }
    }

    /// Structural equality in the quotient group (the stored representation
    /// is canonical for both variants).
    pub fn equals(&self, other: &GroupElement) -> bool {
        self.ctx.check_same(&other.ctx);
        self.repr == other.repr
    }

    /// Exact comparison with a located first discrepancy on failure.
    pub fn compare(&self, other: &GroupElement) -> EqualityReport {
        self.ctx.check_same(&other.ctx);
        if self.repr == other.repr {
            return EqualityReport::Equal;
        }
        match (&self.repr, &other.repr) {
            (Repr::Abelian { log: a }, Repr::Abelian { log: b }) => {
                let diff = a.sub(b);
                let (n, c) = diff.lowest_term().expect("unequal elements differ");
                EqualityReport::Differs {
                    point: *n,
                    degree: n.degree(),
                    coefficient: c.clone(),
                }
            }
            _ => {
                // lowest-degree part of log(other^-1 * self) = log(self) - log(other)
                let k = other.inverse().mul(self);
                first_log_term(&k).expect("unequal elements differ")
            }
        }
    }

    /// Same element pushed down to a lower cutoff (quotient projection).
    pub fn with_context(&self, ctx: &Context) -> GroupElement {
        assert!(
            ctx.form == self.ctx.form && ctx.degree() <= self.ctx.degree(),
            "projection must keep the form and lower the cutoff"
        );
        let repr = match &self.repr {
            Repr::Action { ux, uy } => Repr::Action {
                ux: ux.truncate(ctx.degree()),
                uy: uy.truncate(ctx.degree()),
            },
            Repr::Abelian { log } => Repr::Abelian {
                log: log.with_context(ctx),
            },
        };
        GroupElement {
            ctx: ctx.clone(),
            repr,
        }
    }

    /// `{"ux": [...], "uy": [...], "cutoff": D, "lambda": "p/q"}`; the
    /// degenerate form serializes its logarithm instead of unit series.
    pub fn to_json(&self) -> Value {
        let lambda = format_rat(self.ctx.form.lambda());
        match &self.repr {
            Repr::Action { ux, uy } => {
                let ser = |s: &Series| -> Value {
                    s.iter()
                        .map(|(m, c)| json!({"n": [m.x, m.y], "coeff": format_rat(c)}))
                        .collect()
                };
                json!({
                    "ux": ser(ux),
                    "uy": ser(uy),
                    "cutoff": self.ctx.degree(),
                    "lambda": lambda,
                })
            }
            Repr::Abelian { log } => json!({
                "log": log.to_json()["terms"],
                "cutoff": self.ctx.degree(),
                "lambda": lambda,
            }),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Action { ux, uy } => write!(f, "GroupElement(ux = {ux:?}, uy = {uy:?})"),
            Repr::Abelian { log } => write!(f, "GroupElement(abelian, log = {log:?})"),
        }
    }
}

/// Lowest-degree term of `log k` for `k` whose log has no terms below that
/// degree: read directly off the unit series, where the coefficient appears
/// linearly with no lower-order corrections.
pub(crate) fn first_log_term(k: &GroupElement) -> Option<EqualityReport> {
    let (ux, uy) = match &k.repr {
        Repr::Action { ux, uy } => (ux, uy),
        Repr::Abelian { log } => {
            return log.lowest_term().map(|(n, c)| EqualityReport::Differs {
                point: *n,
                degree: n.degree(),
                coefficient: c.clone(),
            })
        }
    };
    let mut wx = ux.clone();
    wx.add_term(Mono::one(), -Rat::one());
    let mut wy = uy.clone();
    wy.add_term(Mono::one(), -Rat::one());
    let d = match (wx.min_degree(), wy.min_degree()) {
        (None, None) => return None,
        (a, b) => a.unwrap_or(u32::MAX).min(b.unwrap_or(u32::MAX)),
    };
    let lambda = k.ctx.form.lambda().clone();
    for i in 0..=d {
        let n = LatticeVector::new(i, d - i);
        let m = Mono::new(i, d - i);
        let skew1 = -&lambda * crate::rat::rat_int(i64::from(n.a2()));
        let skew2 = &lambda * crate::rat::rat_int(i64::from(n.a1()));
        let a = if !skew1.is_zero() {
            wx.coeff(&m) / skew1
        } else {
            wy.coeff(&m) / skew2
        };
        if !a.is_zero() {
            return Some(EqualityReport::Differs {
                point: n,
                degree: d,
                coefficient: a,
            });
        }
    }
    unreachable!("a nonzero lowest unit degree always yields a log term")
}

/// `log(exp(x) * exp(y))`: the Baker–Campbell–Hausdorff combination,
/// computed operationally through the action rather than from a term table.
pub fn bch_product(x: &LieSeries, y: &LieSeries) -> LieSeries {
    x.context().check_same(y.context());
    GroupElement::exp(x)
        .mul(&GroupElement::exp(y))
        .log()
        .expect("product of exponentials is well-formed")
}
