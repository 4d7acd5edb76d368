//! Order-by-order consistency completion for rank-2 diagrams.
//!
//! A diagram assigns to finitely many rays (primitive directions) a log
//! series supported on multiples of the ray. It is consistent when the
//! slope-ordered product of the ray exponentials equals the anti-ordered
//! initial product. `complete` constructs the unique consistent diagram under
//! the cutoff: at each degree d the discrepancy `P^{-1} * target` has a
//! homogeneous degree-d logarithm (everything lower is already matched, the
//! cutoff kills everything higher), which is central at that stage, so its
//! terms can be credited to rays pointwise without ordering ambiguity.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::Error;
use crate::group::{EqualityReport, GroupElement};
use crate::lattice::{
    classify_product, slope_cmp, slope_precedes, Context, LatticeVector, ProductClass,
};
use crate::lie::{dilog_series, LieSeries};
use crate::product::ProductExpr;
use crate::rat::{format_rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringDiagram {
    ctx: Context,
    incoming: ProductExpr,
    rays: BTreeMap<LatticeVector, LieSeries>,
}

impl ScatteringDiagram {
    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn incoming(&self) -> &ProductExpr {
        &self.incoming
    }

    /// Rays in slope order (e1-axis first). Keys are primitive, so slopes
    /// are pairwise distinct.
    pub fn rays(&self) -> Vec<(&LatticeVector, &LieSeries)> {
        let mut out: Vec<_> = self.rays.iter().collect();
        out.sort_by(|a, b| slope_cmp(a.0, b.0));
        out
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// The wall series on the ray through `direction` (zero when absent).
    pub fn ray_element(&self, direction: &LatticeVector) -> LieSeries {
        self.rays
            .get(&direction.primitive())
            .cloned()
            .unwrap_or_else(|| LieSeries::zero(&self.ctx))
    }

    /// Adds `c * X_n` to the ray through `n`. Exposed so callers can probe
    /// how consistency fails under perturbation.
    pub fn add_to_ray(&mut self, n: &LatticeVector, c: Rat) {
        let prim = n.primitive();
        let entry = self
            .rays
            .entry(prim)
            .or_insert_with(|| LieSeries::zero(&self.ctx));
        entry.add_term(*n, c);
        if entry.is_zero() {
            self.rays.remove(&prim);
        }
    }

    /// Slope-ordered product of the ray exponentials.
    pub fn ordered_product(&self) -> GroupElement {
        let mut acc = GroupElement::identity(&self.ctx);
        for (_, xr) in self.rays() {
            acc = acc.mul(&GroupElement::exp(xr));
        }
        acc
    }

    /// Recomputes the ordered product and compares it with the incoming
    /// product.
    pub fn check_consistency(&self) -> Result<EqualityReport, Error> {
        let target = self.incoming.eval(&self.ctx)?;
        Ok(self.ordered_product().compare(&target))
    }

    /// Rays sorted by slope, with each series in full.
    pub fn to_json(&self) -> Value {
        let rays: Vec<Value> = self
            .rays()
            .into_iter()
            .map(|(p, s)| {
                json!({
                    "primitive": [p.a1(), p.a2()],
                    "series": s.to_json(),
                })
            })
            .collect();
        json!({
            "lambda": format_rat(self.ctx.form.lambda()),
            "cutoff": self.ctx.degree(),
            "incoming": self.incoming.to_json(),
            "rays": rays,
        })
    }
}

/// Per-ray logarithm totals of a product, ignoring factor order: each factor
/// `[n]^c` contributes its dilogarithm series to the ray through `n`.
///
/// For a slope-ordered product this is exactly its ray decomposition
/// (parallel factors commute, distinct slope classes stay separate), which
/// makes it the reference object for closed-form ray comparisons. For the
/// degenerate (abelian) form it is the completion itself.
pub fn ray_logs_of_product(
    expr: &ProductExpr,
    ctx: &Context,
) -> Result<BTreeMap<LatticeVector, LieSeries>, Error> {
    let mut rays: BTreeMap<LatticeVector, LieSeries> = BTreeMap::new();
    for (n, c) in expr.expand(ctx.degree())? {
        let contribution = dilog_series(ctx, &n, &c);
        if contribution.is_zero() {
            continue;
        }
        let entry = rays
            .entry(n.primitive())
            .or_insert_with(|| LieSeries::zero(ctx));
        *entry = entry.add(&contribution);
    }
    rays.retain(|_, s| !s.is_zero());
    Ok(rays)
}

/// Completes anti-ordered initial data to the consistent diagram under the
/// cutoff, degree by degree.
pub fn complete(initial: &ProductExpr, ctx: &Context) -> Result<ScatteringDiagram, Error> {
    let vs: Vec<LatticeVector> = initial
        .expand(ctx.degree())?
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    match classify_product(&vs) {
        ProductClass::AntiOrdered | ProductClass::Parallel => {}
        ProductClass::Ordered | ProductClass::Mixed => {
            let i = vs
                .windows(2)
                .position(|w| slope_precedes(&w[0], &w[1]))
                .expect("a non-anti-ordered sequence has an ascending pair");
            return Err(Error::NotAntiOrdered(i, i + 1));
        }
    }

    if ctx.form.is_degenerate() {
        // abelian group: factors commute, the input is already consistent
        return Ok(ScatteringDiagram {
            ctx: ctx.clone(),
            incoming: initial.clone(),
            rays: ray_logs_of_product(initial, ctx)?,
        });
    }

    let target = initial.eval(ctx)?;
    let mut rays: BTreeMap<LatticeVector, LieSeries> = BTreeMap::new();
    for d in 1..=ctx.degree() {
        // work in the degree-d quotient: cheaper, and it makes the
        // discrepancy logarithm homogeneous of degree d
        let cd = ctx.truncated_to(d);
        let mut sorted: Vec<_> = rays.values().collect();
        sorted.sort_by(|a, b| {
            let (n, m) = (a.lowest_term().unwrap().0, b.lowest_term().unwrap().0);
            slope_cmp(n, m)
        });
        let mut pinv = GroupElement::identity(&cd);
        for xr in sorted.into_iter().rev() {
            pinv = pinv.mul(&GroupElement::exp(&xr.with_context(&cd).neg()));
        }
        let k = pinv.mul(&target.with_context(&cd));
        let delta = k.log().expect("completion discrepancy is well-formed");
        for (n, a) in delta.iter() {
            debug_assert_eq!(n.degree(), d, "discrepancy failed to be homogeneous");
            rays.entry(n.primitive())
                .or_insert_with(|| LieSeries::zero(ctx))
                .add_term(*n, a.clone());
        }
    }
    rays.retain(|_, s| !s.is_zero());
    Ok(ScatteringDiagram {
        ctx: ctx.clone(),
        incoming: initial.clone(),
        rays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn v(a: u32, b: u32) -> LatticeVector {
        LatticeVector::new(a, b)
    }

    fn prod(factors: &[(u32, u32, i64)]) -> ProductExpr {
        ProductExpr::explicit(
            factors
                .iter()
                .map(|&(a, b, c)| (v(a, b), rat_int(c)))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn elementary_completion_inserts_one_ray() {
        let ctx = Context::standard(8);
        let diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        assert_eq!(diagram.ray_count(), 3);
        assert_eq!(
            diagram.ray_element(&v(1, 1)),
            dilog_series(&ctx, &v(1, 1), &rat_int(1))
        );
        assert_eq!(
            diagram.ray_element(&v(0, 1)),
            dilog_series(&ctx, &v(0, 1), &rat_int(1))
        );
        assert_eq!(
            diagram.ray_element(&v(1, 0)),
            dilog_series(&ctx, &v(1, 0), &rat_int(1))
        );
        assert!(diagram.check_consistency().unwrap().is_equal());
    }

    #[test]
    fn doubled_walls_accumulate_on_the_diagonal() {
        let ctx = Context::standard(6);
        let diagram = complete(&prod(&[(0, 1, 2), (1, 0, 2)]), &ctx).unwrap();
        // side rays at exponent 2
        for (a, b) in [(1, 0), (2, 1), (3, 2)] {
            assert_eq!(
                diagram.ray_element(&v(a, b)),
                dilog_series(&ctx, &v(a, b), &rat_int(2)),
                "side ray ({a}, {b})"
            );
            assert_eq!(
                diagram.ray_element(&v(b, a)),
                dilog_series(&ctx, &v(b, a), &rat_int(2)),
                "mirrored side ray ({b}, {a})"
            );
        }
        // diagonal ray: exponent 4 on (1,1) plus 2 on (2,2) (the (4,4) part
        // is invisible below degree 8)
        let want = dilog_series(&ctx, &v(1, 1), &rat_int(4))
            .add(&dilog_series(&ctx, &v(2, 2), &rat_int(2)));
        assert_eq!(diagram.ray_element(&v(1, 1)), want);
        assert_eq!(diagram.ray_count(), 7);
        assert!(diagram.check_consistency().unwrap().is_equal());
    }

    #[test]
    fn ray_lookup_uses_primitive_representative() {
        let ctx = Context::standard(6);
        let diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        assert_eq!(
            diagram.ray_element(&v(3, 3)),
            diagram.ray_element(&v(1, 1))
        );
        assert!(diagram.ray_element(&v(5, 1)).is_zero());
    }

    #[test]
    fn ordered_input_is_rejected() {
        let ctx = Context::standard(4);
        let err = complete(&prod(&[(1, 0, 1), (0, 1, 1)]), &ctx).unwrap_err();
        assert_eq!(err, Error::NotAntiOrdered(0, 1));
        let err = complete(&prod(&[(0, 1, 1), (1, 0, 1), (0, 1, 1)]), &ctx).unwrap_err();
        assert_eq!(err, Error::NotAntiOrdered(1, 2));
    }

    #[test]
    fn parallel_input_is_already_consistent() {
        let ctx = Context::standard(6);
        let diagram = complete(&prod(&[(1, 1, 1), (2, 2, 3)]), &ctx).unwrap();
        assert_eq!(diagram.ray_count(), 1);
        assert!(diagram.check_consistency().unwrap().is_equal());
        let empty = complete(&ProductExpr::default(), &ctx).unwrap();
        assert_eq!(empty.ray_count(), 0);
        assert!(empty.check_consistency().unwrap().is_equal());
    }

    #[test]
    fn degenerate_form_keeps_input_rays() {
        let ctx = Context::new(6, rat_int(0)).unwrap();
        let diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        assert_eq!(diagram.ray_count(), 2);
        assert!(diagram.ray_element(&v(1, 1)).is_zero());
        assert!(diagram.check_consistency().unwrap().is_equal());
    }

    #[test]
    fn completion_is_deterministic() {
        let ctx = Context::standard(7);
        let initial = prod(&[(0, 1, 2), (1, 0, 2)]);
        assert_eq!(complete(&initial, &ctx).unwrap(), complete(&initial, &ctx).unwrap());
    }

    #[test]
    fn perturbed_diagram_fails_at_the_perturbed_degree() {
        let ctx = Context::standard(6);
        let mut diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        diagram.add_to_ray(&v(1, 1), rat_int(1));
        match diagram.check_consistency().unwrap() {
            EqualityReport::Differs {
                point,
                degree,
                coefficient,
            } => {
                assert_eq!(point, v(1, 1));
                assert_eq!(degree, 2);
                assert_eq!(coefficient, rat_int(1));
            }
            EqualityReport::Equal => panic!("perturbation went unnoticed"),
        }
    }

    #[test]
    fn fractional_exponents_complete_exactly() {
        let ctx = Context::standard(6);
        let initial = ProductExpr::explicit(vec![
            (v(0, 1), rat(1, 2)),
            (v(1, 0), rat(-2, 3)),
        ]);
        let diagram = complete(&initial, &ctx).unwrap();
        assert!(diagram.check_consistency().unwrap().is_equal());
    }

    #[test]
    fn json_rays_are_slope_sorted() {
        let ctx = Context::standard(4);
        let diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        let json = diagram.to_json();
        let prims: Vec<(u64, u64)> = json["rays"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["primitive"][0].as_u64().unwrap(),
                    r["primitive"][1].as_u64().unwrap(),
                )
            })
            .collect();
        assert_eq!(prims, vec![(1, 0), (1, 1), (0, 1)]);
        assert_eq!(json["cutoff"], 4);
        assert_eq!(json["lambda"], "-1");
    }

    #[test]
    fn ray_logs_match_completion_for_ordered_side() {
        // the slope-ordered five-factor product decomposes ray-by-ray into
        // exactly the diagram completed from its anti-ordered side
        let ctx = Context::standard(8);
        let ordered = prod(&[(1, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let expected = ray_logs_of_product(&ordered, &ctx).unwrap();
        let diagram = complete(&prod(&[(0, 1, 1), (1, 0, 1)]), &ctx).unwrap();
        let got: BTreeMap<LatticeVector, LieSeries> = diagram
            .rays()
            .into_iter()
            .map(|(p, s)| (*p, s.clone()))
            .collect();
        assert_eq!(got, expected);
    }
}
