//! Named consistency identities between dilogarithm products.
//!
//! Every entry produces a (left, right) pair of product expressions over a
//! common parameter set (n, n', c) subject to the pairing constraint
//! {n', n} = 1/c — the exponent is tied to the skew value of the pair. The
//! catalog covers the generating five-term relation, its doubled-exponent
//! consequences, the bounded ladders obtained by iterating them, the
//! infinite-family limits of those ladders, the two full factorizations of
//! anti-ordered squares, and the two fixed affine instances with infinitely
//! many rays.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::group::EqualityReport;
use crate::lattice::{Context, LatticeVector, SkewForm};
use crate::product::{
    Direction, ExponentMap, Factor, Family, FamilyItem, ProductExpr, VectorMap,
};
use crate::rat::{format_rat, rat_int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `[n']^c [n]^c = [n]^c [n+n']^c [n']^c`
    Pentagon,
    /// `[n']^c [n]^c = [n]^c [n']^c` for {n', n} = 0
    Commute,
    /// `[n']^c [n]^2c = [n]^2c [2n+n']^c [n+n']^2c [n']^c`
    B2Lower,
    /// `[n']^2c [n]^c = [n]^c [n+n']^2c [n+2n']^c [n']^2c`
    B2Upper,
    /// bounded ladder over `[n+2pn']^c`, 0 <= p <= l
    Lem33,
    /// limit of the ladder: `[n']^2c ∏ [n+2pn']^c` rewritten in ordered form
    Lem34a,
    /// mirrored limit, families on the other side
    Lem34b,
    /// full factorization of `[n']^2c [n]^2c` into three ray families
    Thm31,
    /// bounded ladder over `[n+pn']^2c`, 0 <= p <= l
    Lem42,
    /// limit of that ladder
    Lem43a,
    /// mirrored limit
    Lem43b,
    /// full factorization of `[n']^c [n]^4c` into paired ray families
    Thm41,
    /// fixed instance: `[0,1]^2 [1,0]^2` against its ordered factorization
    A11,
    /// fixed instance: `[0,1]^4 [1,0]` against its ordered factorization
    A22,
}

impl IdentityId {
    pub const ALL: [IdentityId; 14] = [
        IdentityId::Pentagon,
        IdentityId::Commute,
        IdentityId::B2Lower,
        IdentityId::B2Upper,
        IdentityId::Lem33,
        IdentityId::Lem34a,
        IdentityId::Lem34b,
        IdentityId::Thm31,
        IdentityId::Lem42,
        IdentityId::Lem43a,
        IdentityId::Lem43b,
        IdentityId::Thm41,
        IdentityId::A11,
        IdentityId::A22,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Pentagon => "pentagon",
            IdentityId::Commute => "commute",
            IdentityId::B2Lower => "b2",
            IdentityId::B2Upper => "B2",
            IdentityId::Lem33 => "lem33",
            IdentityId::Lem34a => "lem34a",
            IdentityId::Lem34b => "lem34b",
            IdentityId::Thm31 => "thm31",
            IdentityId::Lem42 => "lem42",
            IdentityId::Lem43a => "lem43a",
            IdentityId::Lem43b => "lem43b",
            IdentityId::Thm41 => "thm41",
            IdentityId::A11 => "a11",
            IdentityId::A22 => "a22",
        }
    }

    /// Ladder identities take the bound `l`; everything else must not.
    pub fn takes_level(self) -> bool {
        matches!(self, IdentityId::Lem33 | IdentityId::Lem42)
    }

    /// The two affine instances have all parameters built in.
    pub fn is_fixed(self) -> bool {
        matches!(self, IdentityId::A11 | IdentityId::A22)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    // case-sensitive: `b2` and `B2` are distinct identities
    fn from_str(s: &str) -> Result<Self, Error> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdentityParams {
    pub n: Option<LatticeVector>,
    pub nprime: Option<LatticeVector>,
    pub c: Option<Rat>,
    /// ladder bound, `lem33`/`lem42` only
    pub l: Option<u32>,
}

impl IdentityParams {
    pub fn pair(n: LatticeVector, nprime: LatticeVector) -> Self {
        IdentityParams {
            n: Some(n),
            nprime: Some(nprime),
            ..Default::default()
        }
    }

    pub fn with_c(mut self, c: Rat) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_l(mut self, l: u32) -> Self {
        self.l = Some(l);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityInstance {
    pub id: IdentityId,
    pub params: IdentityParams,
    pub lhs: ProductExpr,
    pub rhs: ProductExpr,
}

impl IdentityInstance {
    /// Evaluates both sides and reports equality or the first discrepancy.
    pub fn verify(&self, ctx: &Context) -> Result<EqualityReport, Error> {
        let lhs = self.lhs.eval(ctx)?;
        let rhs = self.rhs.eval(ctx)?;
        Ok(lhs.compare(&rhs))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id.name(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        })
    }
}

/// `a*n + b*n'` as a lattice vector; the callers only form combinations that
/// stay in N+ when the inputs do.
fn comb(a: i64, n: &LatticeVector, b: i64, m: &LatticeVector) -> LatticeVector {
    LatticeVector::try_new(
        a * i64::from(n.a1()) + b * i64::from(m.a1()),
        a * i64::from(n.a2()) + b * i64::from(m.a2()),
    )
    .expect("combination left N+")
}

fn pair_i64(a: i64, n: &LatticeVector, b: i64, m: &LatticeVector) -> (i64, i64) {
    (
        a * i64::from(n.a1()) + b * i64::from(m.a1()),
        a * i64::from(n.a2()) + b * i64::from(m.a2()),
    )
}

fn affine_item(base: (i64, i64), step: (i64, i64), c: Rat) -> FamilyItem {
    FamilyItem {
        vector: VectorMap::Affine { base, step },
        exponent: ExponentMap::Const(c),
    }
}

fn pow2_item(base: (i64, i64), c: Rat) -> FamilyItem {
    FamilyItem {
        vector: VectorMap::Pow2 { base },
        exponent: ExponentMap::Halving(c),
    }
}

fn family(
    direction: Direction,
    start: i64,
    items: Vec<FamilyItem>,
) -> Result<Factor, Error> {
    Ok(Factor::Family(Family::new(direction, "p", start, items)?))
}

fn need_pair(
    id: IdentityId,
    params: &IdentityParams,
) -> Result<(LatticeVector, LatticeVector), Error> {
    let n = params.n.ok_or(Error::MissingParameter {
        id: id.name(),
        what: "n",
    })?;
    let nprime = params.nprime.ok_or(Error::MissingParameter {
        id: id.name(),
        what: "n'",
    })?;
    Ok((n, nprime))
}

/// Resolves the exponent scalar: checks {n', n} = 1/c when `c` is given,
/// derives c = 1/{n', n} when it is not.
fn resolve_c(
    id: IdentityId,
    params: &IdentityParams,
    form: &SkewForm,
    n: &LatticeVector,
    nprime: &LatticeVector,
) -> Result<Rat, Error> {
    let s = form.skew(nprime, n);
    match &params.c {
        Some(c) => {
            if c.is_zero() || &s * c != Rat::one() {
                Err(Error::ConstraintViolated {
                    id: id.name(),
                    constraint: "{n', n} = 1/c".into(),
                    got: format!("{{n', n}} = {}, c = {}", format_rat(&s), format_rat(c)),
                })
            } else {
                Ok(c.clone())
            }
        }
        None => {
            if s.is_zero() {
                Err(Error::ConstraintViolated {
                    id: id.name(),
                    constraint: "{n', n} != 0".into(),
                    got: "{n', n} = 0".into(),
                })
            } else {
                Ok(s.recip())
            }
        }
    }
}

fn reject_level(id: IdentityId, params: &IdentityParams) -> Result<(), Error> {
    if params.l.is_some() && !id.takes_level() {
        return Err(Error::UnexpectedParameter {
            id: id.name(),
            what: "l",
        });
    }
    Ok(())
}

fn reject_all_params(id: IdentityId, params: &IdentityParams) -> Result<(), Error> {
    let what = if params.n.is_some() {
        Some("n")
    } else if params.nprime.is_some() {
        Some("n'")
    } else if params.c.is_some() {
        Some("c")
    } else if params.l.is_some() {
        Some("l")
    } else {
        None
    };
    match what {
        Some(what) => Err(Error::UnexpectedParameter {
            id: id.name(),
            what,
        }),
        None => Ok(()),
    }
}

/// The affine instances hold for the skew normalization {e2, e1} = 1 only.
fn require_standard_form(id: IdentityId, form: &SkewForm) -> Result<(), Error> {
    let e1 = LatticeVector::e1();
    let e2 = LatticeVector::e2();
    if form.skew(&e2, &e1) != Rat::one() {
        return Err(Error::ConstraintViolated {
            id: id.name(),
            constraint: "{e2, e1} = 1".into(),
            got: format!("{{e2, e1}} = {}", format_rat(&form.skew(&e2, &e1))),
        });
    }
    Ok(())
}

pub fn build(
    id: IdentityId,
    params: &IdentityParams,
    ctx: &Context,
) -> Result<IdentityInstance, Error> {
    let form = &ctx.form;
    let params = params.clone();
    let (lhs, rhs) = match id {
        IdentityId::Pentagon => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let lhs = ProductExpr::explicit([(np, c.clone()), (n, c.clone())]);
            let rhs = ProductExpr::explicit([
                (n, c.clone()),
                (comb(1, &n, 1, &np), c.clone()),
                (np, c),
            ]);
            (lhs, rhs)
        }
        IdentityId::Commute => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let s = form.skew(&np, &n);
            if !s.is_zero() {
                return Err(Error::ConstraintViolated {
                    id: id.name(),
                    constraint: "{n', n} = 0".into(),
                    got: format!("{{n', n}} = {}", format_rat(&s)),
                });
            }
            let c = params.c.clone().unwrap_or_else(|| rat_int(1));
            let lhs = ProductExpr::explicit([(np, c.clone()), (n, c.clone())]);
            let rhs = ProductExpr::explicit([(n, c.clone()), (np, c)]);
            (lhs, rhs)
        }
        IdentityId::B2Lower => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let c2 = &c * rat_int(2);
            let lhs = ProductExpr::explicit([(np, c.clone()), (n, c2.clone())]);
            let rhs = ProductExpr::explicit([
                (n, c2.clone()),
                (comb(2, &n, 1, &np), c.clone()),
                (comb(1, &n, 1, &np), c2),
                (np, c),
            ]);
            (lhs, rhs)
        }
        IdentityId::B2Upper => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            (b2_upper_lhs(&n, &np, &c), b2_upper_rhs(&n, &np, &c))
        }
        IdentityId::Lem33 => {
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let l = params.l.ok_or(Error::MissingParameter {
                id: id.name(),
                what: "l",
            })?;
            let c2 = &c * rat_int(2);
            let mut lhs = ProductExpr::default();
            lhs.push(np, c2.clone());
            for p in 0..=i64::from(l) {
                lhs.push(comb(1, &n, 2 * p, &np), c.clone());
            }
            let mut rhs = ProductExpr::default();
            rhs.push(n, c.clone());
            for p in 1..=2 * i64::from(l) + 1 {
                rhs.push(comb(1, &n, p, &np), c2.clone());
            }
            rhs.push(comb(1, &n, 2 * i64::from(l) + 2, &np), c.clone());
            rhs.push(np, c2);
            (lhs, rhs)
        }
        IdentityId::Lem34a => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let c2 = &c * rat_int(2);
            let bn = pair_i64(1, &n, 0, &np);
            let bnp = pair_i64(0, &n, 1, &np);
            let step2 = pair_i64(0, &n, 2, &np);
            let lhs = ProductExpr::new(vec![
                Factor::Explicit {
                    n: np,
                    exponent: c2.clone(),
                },
                family(
                    Direction::Forward,
                    0,
                    vec![affine_item(bn, step2, c.clone())],
                )?,
            ]);
            let rhs = ProductExpr::new(vec![
                Factor::Explicit {
                    n,
                    exponent: c.clone(),
                },
                family(Direction::Forward, 1, vec![affine_item(bn, bnp, c2.clone())])?,
                Factor::Explicit {
                    n: np,
                    exponent: c2,
                },
            ]);
            (lhs, rhs)
        }
        IdentityId::Lem34b => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let c2 = &c * rat_int(2);
            let bn = pair_i64(1, &n, 0, &np);
            let bnp = pair_i64(0, &n, 1, &np);
            let step2 = pair_i64(2, &n, 0, &np);
            let lhs = ProductExpr::new(vec![
                family(
                    Direction::Backward,
                    0,
                    vec![affine_item(bnp, step2, c.clone())],
                )?,
                Factor::Explicit {
                    n,
                    exponent: c2.clone(),
                },
            ]);
            let rhs = ProductExpr::new(vec![
                Factor::Explicit { n, exponent: c2 },
                family(Direction::Backward, 1, vec![affine_item(bnp, bn, &c * rat_int(2))])?,
                Factor::Explicit {
                    n: np,
                    exponent: c,
                },
            ]);
            (lhs, rhs)
        }
        IdentityId::Thm31 => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            (thm31_lhs(&n, &np, &c), thm31_rhs(&n, &np, &c)?)
        }
        IdentityId::Lem42 => {
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let l = params.l.ok_or(Error::MissingParameter {
                id: id.name(),
                what: "l",
            })?;
            let c2 = &c * rat_int(2);
            let c4 = &c * rat_int(4);
            let mut lhs = ProductExpr::default();
            lhs.push(np, c.clone());
            for p in 0..=i64::from(l) {
                lhs.push(comb(1, &n, p, &np), c2.clone());
            }
            let mut rhs = ProductExpr::default();
            rhs.push(n, c2.clone());
            for p in 1..=i64::from(l) {
                rhs.push(comb(2, &n, 2 * p - 1, &np), c.clone());
                rhs.push(comb(1, &n, p, &np), c4.clone());
            }
            rhs.push(comb(2, &n, 2 * i64::from(l) + 1, &np), c.clone());
            rhs.push(comb(1, &n, i64::from(l) + 1, &np), c2);
            rhs.push(np, c);
            (lhs, rhs)
        }
        IdentityId::Lem43a => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            (lem43a_lhs(&n, &np, &c)?, lem43a_rhs(&n, &np, &c)?)
        }
        IdentityId::Lem43b => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            let c2 = &c * rat_int(2);
            let c4 = &c * rat_int(4);
            let bn = pair_i64(1, &n, 0, &np);
            let bnp = pair_i64(0, &n, 1, &np);
            let lhs = ProductExpr::new(vec![
                family(Direction::Backward, 0, vec![affine_item(bnp, bn, c2.clone())])?,
                Factor::Explicit {
                    n,
                    exponent: c.clone(),
                },
            ]);
            // per-index pair: [n'+pn]^4c [2n'+(2p-1)n]^c
            let rhs = ProductExpr::new(vec![
                Factor::Explicit {
                    n,
                    exponent: c.clone(),
                },
                family(
                    Direction::Backward,
                    1,
                    vec![
                        affine_item(bnp, bn, c4),
                        affine_item(pair_i64(-1, &n, 2, &np), pair_i64(2, &n, 0, &np), c),
                    ],
                )?,
                Factor::Explicit {
                    n: np,
                    exponent: c2,
                },
            ]);
            (lhs, rhs)
        }
        IdentityId::Thm41 => {
            reject_level(id, &params)?;
            let (n, np) = need_pair(id, &params)?;
            let c = resolve_c(id, &params, form, &n, &np)?;
            (thm41_lhs(&n, &np, &c), thm41_rhs(&n, &np, &c)?)
        }
        IdentityId::A11 => {
            reject_all_params(id, &params)?;
            require_standard_form(id, form)?;
            let n = LatticeVector::e1();
            let np = LatticeVector::e2();
            let c = rat_int(1);
            (thm31_lhs(&n, &np, &c), thm31_rhs(&n, &np, &c)?)
        }
        IdentityId::A22 => {
            reject_all_params(id, &params)?;
            require_standard_form(id, form)?;
            a22_sides()?
        }
    };
    Ok(IdentityInstance {
        id,
        params,
        lhs,
        rhs,
    })
}

fn b2_upper_lhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> ProductExpr {
    let c2 = c * rat_int(2);
    ProductExpr::explicit([(*np, c2), (*n, c.clone())])
}

fn b2_upper_rhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> ProductExpr {
    let c2 = c * rat_int(2);
    ProductExpr::explicit([
        (*n, c.clone()),
        (comb(1, n, 1, np), c2.clone()),
        (comb(1, n, 2, np), c.clone()),
        (*np, c2),
    ])
}

fn thm31_lhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> ProductExpr {
    let c2 = c * rat_int(2);
    ProductExpr::explicit([(*np, c2.clone()), (*n, c2)])
}

fn thm31_rhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> Result<ProductExpr, Error> {
    let c2 = c * rat_int(2);
    let c4 = c * rat_int(4);
    let s = pair_i64(1, n, 1, np);
    Ok(ProductExpr::new(vec![
        family(
            Direction::Forward,
            0,
            vec![affine_item(pair_i64(1, n, 0, np), s, c2.clone())],
        )?,
        family(Direction::Forward, 0, vec![pow2_item(s, c4)])?,
        family(
            Direction::Backward,
            0,
            vec![affine_item(pair_i64(0, n, 1, np), s, c2)],
        )?,
    ]))
}

fn lem43a_lhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> Result<ProductExpr, Error> {
    let c2 = c * rat_int(2);
    Ok(ProductExpr::new(vec![
        Factor::Explicit {
            n: *np,
            exponent: c.clone(),
        },
        family(
            Direction::Forward,
            0,
            vec![affine_item(pair_i64(1, n, 0, np), pair_i64(0, n, 1, np), c2)],
        )?,
    ]))
}

fn lem43a_rhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> Result<ProductExpr, Error> {
    let c2 = c * rat_int(2);
    let c4 = c * rat_int(4);
    // per-index pair: [2n+(2p-1)n']^c [n+pn']^4c
    Ok(ProductExpr::new(vec![
        Factor::Explicit {
            n: *n,
            exponent: c2,
        },
        family(
            Direction::Forward,
            1,
            vec![
                affine_item(pair_i64(2, n, -1, np), pair_i64(0, n, 2, np), c.clone()),
                affine_item(pair_i64(1, n, 0, np), pair_i64(0, n, 1, np), c4),
            ],
        )?,
        Factor::Explicit {
            n: *np,
            exponent: c.clone(),
        },
    ]))
}

fn thm41_lhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> ProductExpr {
    let c4 = c * rat_int(4);
    ProductExpr::explicit([(*np, c.clone()), (*n, c4)])
}

fn thm41_rhs(n: &LatticeVector, np: &LatticeVector, c: &Rat) -> Result<ProductExpr, Error> {
    let c2 = c * rat_int(2);
    let c4 = c * rat_int(4);
    let s = pair_i64(2, n, 1, np);
    let s2 = (2 * s.0, 2 * s.1);
    Ok(ProductExpr::new(vec![
        // per-index pair: [(2p+1)n + pn']^4c [(4p+4)n + (2p+1)n']^c
        family(
            Direction::Forward,
            0,
            vec![
                affine_item(pair_i64(1, n, 0, np), s, c4.clone()),
                affine_item(pair_i64(4, n, 1, np), s2, c.clone()),
            ],
        )?,
        Factor::Explicit {
            n: comb(2, n, 1, np),
            exponent: c2,
        },
        family(Direction::Forward, 0, vec![pow2_item(s, c4.clone())])?,
        // per-index pair: [(2p+1)n + (p+1)n']^4c [4pn + (2p+1)n']^c
        family(
            Direction::Backward,
            0,
            vec![
                affine_item(pair_i64(1, n, 1, np), s, c4),
                affine_item(pair_i64(0, n, 1, np), s2, c.clone()),
            ],
        )?,
    ]))
}

/// The second affine instance, written with every exponent positive. It is
/// the inversion of both sides of the paired-family factorization at
/// n = (0,1), n' = (1,0), c = -1, with the two parallel central factors
/// [1,2]^2 [1,2]^4 merged into the printed [1,2]^6.
fn a22_sides() -> Result<(ProductExpr, ProductExpr), Error> {
    let lhs = ProductExpr::explicit([
        (LatticeVector::e2(), rat_int(4)),
        (LatticeVector::e1(), rat_int(1)),
    ]);
    let rhs = ProductExpr::new(vec![
        Factor::Explicit {
            n: LatticeVector::e1(),
            exponent: rat_int(1),
        },
        // [(p+1, 2p+1)]^4 [(2p+3, 4p+4)]^1
        family(
            Direction::Forward,
            0,
            vec![
                affine_item((1, 1), (1, 2), rat_int(4)),
                affine_item((3, 4), (2, 4), rat_int(1)),
            ],
        )?,
        Factor::Explicit {
            n: LatticeVector::new(1, 2),
            exponent: rat_int(6),
        },
        family(Direction::Forward, 1, vec![pow2_item((1, 2), rat_int(4))])?,
        // [(2p+1, 4p+4)]^1 [(p, 2p+1)]^4
        family(
            Direction::Backward,
            0,
            vec![
                affine_item((1, 4), (2, 4), rat_int(1)),
                affine_item((0, 1), (1, 2), rat_int(4)),
            ],
        )?,
    ]);
    Ok((lhs, rhs))
}

pub fn verify(
    id: IdentityId,
    params: &IdentityParams,
    ctx: &Context,
) -> Result<EqualityReport, Error> {
    build(id, params, ctx)?.verify(ctx)
}

/// Deterministic pseudo-random parameter draws satisfying the id's
/// constraint: vectors of degree <= 3, with c derived from the skew value
/// (parallel pairs for `commute`, which needs no c).
pub fn enumerate_random_instances(
    id: IdentityId,
    count: usize,
    seed: u64,
    form: &SkewForm,
) -> Vec<IdentityParams> {
    assert!(!id.is_fixed(), "fixed instances take no parameters");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let draw_vector = |rng: &mut ChaCha8Rng| loop {
        let a1: u32 = rng.gen_range(0..=3);
        let a2: u32 = rng.gen_range(0..=3 - a1.min(3));
        if a1 + a2 >= 1 {
            return LatticeVector::new(a1, a2);
        }
    };
    while out.len() < count {
        let n = draw_vector(&mut rng);
        let np = draw_vector(&mut rng);
        let s = form.skew(&np, &n);
        let mut params = IdentityParams::pair(n, np);
        if id == IdentityId::Commute {
            if !s.is_zero() {
                continue;
            }
        } else {
            if s.is_zero() {
                continue;
            }
            params = params.with_c(s.recip());
        }
        if id.takes_level() {
            params = params.with_l(rng.gen_range(0..=4));
        }
        out.push(params);
    }
    out
}
