//! Product expressions: finite words in dilogarithm elements, with
//! degree-indexed infinite families that expand to finitely many factors
//! under any truncation.
//!
//! A family maps an index `p >= start` to one or more factors per index;
//! vector maps are affine (`base + p * step`) or geometric (`2^p * base`),
//! the two shapes that occur in the consistency relations. Expansion keeps a
//! factor when its vector degree fits under the cutoff; per-item degrees are
//! strictly increasing in `p`, so expansion always terminates.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::Error;
use crate::group::GroupElement;
use crate::lattice::{classify_product, Context, LatticeVector, ProductClass};
use crate::rat::{format_rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum VectorMap {
    /// `n(p) = base + p * step`
    Affine { base: (i64, i64), step: (i64, i64) },
    /// `n(p) = 2^p * base`
    Pow2 { base: (i64, i64) },
}

impl VectorMap {
    fn at(&self, p: i64) -> Result<LatticeVector, Error> {
        let (a, b) = match self {
            VectorMap::Affine { base, step } => (base.0 + p * step.0, base.1 + p * step.1),
            VectorMap::Pow2 { base } => {
                assert!((0..63).contains(&p), "geometric family index out of range");
                (base.0 << p, base.1 << p)
            }
        };
        LatticeVector::try_new(a, b).map_err(|_| Error::FamilyLeavesLattice(p))
    }

    /// Strict degree growth is required of every family item.
    fn is_increasing(&self) -> bool {
        match self {
            VectorMap::Affine { step, .. } => step.0 >= 0 && step.1 >= 0 && step.0 + step.1 > 0,
            VectorMap::Pow2 { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExponentMap {
    Const(Rat),
    /// `c(p) = value / 2^p`
    Halving(Rat),
}

impl ExponentMap {
    fn at(&self, p: i64) -> Rat {
        match self {
            ExponentMap::Const(c) => c.clone(),
            ExponentMap::Halving(c) => {
                assert!((0..63).contains(&p), "geometric family index out of range");
                c * Rat::new(BigInt::one(), BigInt::from(1i64 << p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyItem {
    pub vector: VectorMap,
    pub exponent: ExponentMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// index ascending, left to right
    Forward,
    /// index descending: the `start` factor is rightmost
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub direction: Direction,
    /// display name of the index variable
    pub index: String,
    pub start: i64,
    pub items: Vec<FamilyItem>,
}

impl Family {
    pub fn new(
        direction: Direction,
        index: impl Into<String>,
        start: i64,
        items: Vec<FamilyItem>,
    ) -> Result<Self, Error> {
        assert!(!items.is_empty(), "family needs at least one item");
        for item in &items {
            if !item.vector.is_increasing() {
                return Err(Error::FamilyNotIncreasing);
            }
            // membership at the start index implies membership forever
            item.vector.at(start)?;
        }
        Ok(Family {
            direction,
            index: index.into(),
            start,
            items,
        })
    }

    /// Factors with vector degree <= cutoff, in product order.
    fn expand(&self, cutoff: u32) -> Result<Vec<(LatticeVector, Rat)>, Error> {
        let mut groups: Vec<Vec<(LatticeVector, Rat)>> = Vec::new();
        let mut p = self.start;
        loop {
            let mut group = Vec::new();
            let mut all_out = true;
            for item in &self.items {
                if !item.vector.is_increasing() {
                    return Err(Error::FamilyNotIncreasing);
                }
                let n = item.vector.at(p)?;
                if n.degree() <= cutoff {
                    all_out = false;
                    group.push((n, item.exponent.at(p)));
                }
            }
            if all_out {
                break;
            }
            groups.push(group);
            p += 1;
        }
        if self.direction == Direction::Backward {
            groups.reverse();
        }
        Ok(groups.into_iter().flatten().collect())
    }

    /// Formal inverse: direction flips, per-index items reverse, exponents
    /// negate.
    pub fn inverse(&self) -> Family {
        let items = self
            .items
            .iter()
            .rev()
            .map(|it| FamilyItem {
                vector: it.vector.clone(),
                exponent: match &it.exponent {
                    ExponentMap::Const(c) => ExponentMap::Const(-c),
                    ExponentMap::Halving(c) => ExponentMap::Halving(-c),
                },
            })
            .collect();
        Family {
            direction: match self.direction {
                Direction::Forward => Direction::Backward,
                Direction::Backward => Direction::Forward,
            },
            index: self.index.clone(),
            start: self.start,
            items,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Explicit { n: LatticeVector, exponent: Rat },
    Family(Family),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProductExpr {
    pub factors: Vec<Factor>,
}

impl ProductExpr {
    pub fn new(factors: Vec<Factor>) -> Self {
        ProductExpr { factors }
    }

    /// Product of explicit factors only.
    pub fn explicit<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (LatticeVector, Rat)>,
    {
        ProductExpr {
            factors: factors
                .into_iter()
                .map(|(n, exponent)| Factor::Explicit { n, exponent })
                .collect(),
        }
    }

    pub fn push(&mut self, n: LatticeVector, exponent: Rat) {
        self.factors.push(Factor::Explicit { n, exponent });
    }

    pub fn push_family(&mut self, family: Family) {
        self.factors.push(Factor::Family(family));
    }

    /// Finite factor list under the cutoff: families are filtered by degree,
    /// explicit factors are kept as written (a factor above the cutoff
    /// evaluates to the identity anyway).
    pub fn expand(&self, cutoff: u32) -> Result<Vec<(LatticeVector, Rat)>, Error> {
        let mut out = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Explicit { n, exponent } => out.push((*n, exponent.clone())),
                Factor::Family(fam) => out.extend(fam.expand(cutoff)?),
            }
        }
        Ok(out)
    }

    /// Group value: the expanded dilogarithm factors multiplied in order.
    pub fn eval(&self, ctx: &Context) -> Result<GroupElement, Error> {
        let mut acc = GroupElement::identity(ctx);
        for (n, c) in self.expand(ctx.degree())? {
            acc = acc.mul(&GroupElement::dilog(ctx, &n, &c));
        }
        Ok(acc)
    }

    /// Formal inverse: reversed factors with inverted exponents; evaluates to
    /// the group inverse of the original.
    pub fn inverse(&self) -> ProductExpr {
        ProductExpr {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| match f {
                    Factor::Explicit { n, exponent } => Factor::Explicit {
                        n: *n,
                        exponent: -exponent,
                    },
                    Factor::Family(fam) => Factor::Family(fam.inverse()),
                })
                .collect(),
        }
    }

    /// Slope-order shape of the expansion under the cutoff.
    pub fn classify(&self, cutoff: u32) -> Result<ProductClass, Error> {
        let vs: Vec<LatticeVector> = self.expand(cutoff)?.into_iter().map(|(n, _)| n).collect();
        Ok(classify_product(&vs))
    }

    pub fn to_json(&self) -> Value {
        let arr: Vec<Value> = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Explicit { n, exponent } => {
                    json!({"n": [n.a1(), n.a2()], "exponent": format_rat(exponent)})
                }
                Factor::Family(fam) => {
                    let items: Vec<Value> = fam
                        .items
                        .iter()
                        .map(|it| {
                            let vector = match &it.vector {
                                VectorMap::Affine { base, step } => json!({
                                    "kind": "affine",
                                    "base": [base.0, base.1],
                                    "step": [step.0, step.1],
                                }),
                                VectorMap::Pow2 { base } => json!({
                                    "kind": "pow2",
                                    "base": [base.0, base.1],
                                }),
                            };
                            let exponent = match &it.exponent {
                                ExponentMap::Const(c) => {
                                    json!({"kind": "const", "value": format_rat(c)})
                                }
                                ExponentMap::Halving(c) => {
                                    json!({"kind": "halving", "value": format_rat(c)})
                                }
                            };
                            json!({"vector": vector, "exponent": exponent})
                        })
                        .collect();
                    json!({
                        "family": match fam.direction {
                            Direction::Forward => "forward",
                            Direction::Backward => "backward",
                        },
                        "index": fam.index,
                        "start": fam.start,
                        "items": items,
                    })
                }
            })
            .collect();
        Value::Array(arr)
    }
}
