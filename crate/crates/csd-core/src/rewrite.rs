//! Verified rewriting of dilogarithm factor lists.
//!
//! A product is kept as a list of `(vector, exponent)` factors. Steps either
//! apply the pentagon relation (in both directions), swap commuting
//! neighbours, or regroup exponents on a single vector. Every step preserves
//! the group value under the ambient cutoff; `replay` re-checks the rewritten
//! window after each step so a defective step is caught at its index rather
//! than poisoning the rest of a derivation.

use crate::catalog::IdentityId;
use crate::error::Error;
use crate::group::{EqualityReport, GroupElement};
use crate::lattice::{cross, Context, LatticeVector};
use crate::rat::{format_rat, is_positive_integer, parse_rat, Rat};

use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
pub enum StepKind {
    /// `[n']^c [n]^c -> [n]^c [n+n']^c [n']^c`, valid when `skew(n',n)·c = 1`.
    PentagonExpand,
    /// Exact inverse of `PentagonExpand` on a matching triple.
    PentagonContract,
    /// Swaps two adjacent factors that commute under the cutoff: skew zero,
    /// or the sum of their vectors already exceeds the truncation degree.
    Commute,
    /// `[n]^a [n]^b -> [n]^{a+b}`; the factor disappears when `a + b = 0`.
    MergePow,
    /// `[n]^c -> [n]^x [n]^{c-x}` for the carried `x` (neither part empty).
    SplitPow(Rat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteStep {
    pub kind: StepKind,
    /// Index of the leftmost factor the step consumes.
    pub position: usize,
}

impl RewriteStep {
    pub fn pentagon_expand(position: usize) -> Self {
        RewriteStep {
            kind: StepKind::PentagonExpand,
            position,
        }
    }

    pub fn pentagon_contract(position: usize) -> Self {
        RewriteStep {
            kind: StepKind::PentagonContract,
            position,
        }
    }

    pub fn commute(position: usize) -> Self {
        RewriteStep {
            kind: StepKind::Commute,
            position,
        }
    }

    pub fn merge(position: usize) -> Self {
        RewriteStep {
            kind: StepKind::MergePow,
            position,
        }
    }

    pub fn split(position: usize, left: Rat) -> Self {
        RewriteStep {
            kind: StepKind::SplitPow(left),
            position,
        }
    }

    /// Number of consecutive factors the step consumes.
    fn consumed(&self) -> usize {
        match self.kind {
            StepKind::PentagonExpand | StepKind::Commute | StepKind::MergePow => 2,
            StepKind::PentagonContract => 3,
            StepKind::SplitPow(_) => 1,
        }
    }

    /// One-line script form, e.g. `pentagon+ 2` or `split 0 1/2`.
    pub fn format_line(&self) -> String {
        match &self.kind {
            StepKind::PentagonExpand => format!("pentagon+ {}", self.position),
            StepKind::PentagonContract => format!("pentagon- {}", self.position),
            StepKind::Commute => format!("commute {}", self.position),
            StepKind::MergePow => format!("merge {}", self.position),
            StepKind::SplitPow(x) => format!("split {} {}", self.position, format_rat(x)),
        }
    }

    fn parse_line(line: &str) -> Result<Self, String> {
        let mut words = line.split_whitespace();
        let name = words.next().expect("caller skips blank lines");
        let index = |w: Option<&str>| -> Result<usize, String> {
            let w = w.ok_or_else(|| format!("`{name}` needs a factor position"))?;
            w.parse::<usize>()
                .map_err(|_| format!("bad factor position `{w}`"))
        };
        let step = match name {
            "pentagon+" => RewriteStep::pentagon_expand(index(words.next())?),
            "pentagon-" => RewriteStep::pentagon_contract(index(words.next())?),
            "commute" => RewriteStep::commute(index(words.next())?),
            "merge" => RewriteStep::merge(index(words.next())?),
            "split" => {
                let position = index(words.next())?;
                let amount = words
                    .next()
                    .ok_or_else(|| "`split` needs a left exponent".to_string())?;
                let left = parse_rat(amount).map_err(|e| e.to_string())?;
                RewriteStep::split(position, left)
            }
            other => return Err(format!("unknown step `{other}`")),
        };
        if let Some(extra) = words.next() {
            return Err(format!("unexpected trailing `{extra}`"));
        }
        Ok(step)
    }
}

/// Parses a line-oriented script: one step per line, `#` starts a comment.
pub fn parse_script(text: &str) -> Result<Vec<RewriteStep>, Error> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let step = RewriteStep::parse_line(line).map_err(|msg| Error::Script {
            line: i + 1,
            msg,
        })?;
        steps.push(step);
    }
    Ok(steps)
}

pub fn format_script(steps: &[RewriteStep]) -> String {
    let mut out = String::new();
    for step in steps {
        out.push_str(&step.format_line());
        out.push('\n');
    }
    out
}

/// Product of the dilogarithm factors, evaluated in the truncated group.
pub fn eval_factors(ctx: &Context, factors: &[(LatticeVector, Rat)]) -> GroupElement {
    let mut acc = GroupElement::identity(ctx);
    for (n, c) in factors {
        acc = acc.mul(&GroupElement::dilog(ctx, n, c));
    }
    acc
}

fn invalid(position: usize, reason: String) -> Error {
    Error::InvalidStep {
        index: position,
        reason,
    }
}

/// Applies one step, checking its side condition at the position.
///
/// The error's `index` is the factor position; `replay` re-labels it with
/// the step's ordinal in the script.
pub fn apply_step(
    factors: &[(LatticeVector, Rat)],
    step: &RewriteStep,
    ctx: &Context,
) -> Result<Vec<(LatticeVector, Rat)>, Error> {
    let i = step.position;
    let need = step.consumed();
    if i + need > factors.len() {
        return Err(invalid(
            i,
            format!(
                "position {i} needs {need} factors but the product has {} from there",
                factors.len().saturating_sub(i)
            ),
        ));
    }
    let mut out = factors[..i].to_vec();
    match &step.kind {
        StepKind::PentagonExpand => {
            let (nprime, a) = &factors[i];
            let (n, b) = &factors[i + 1];
            if a != b {
                return Err(invalid(
                    i,
                    format!(
                        "pentagon expansion needs equal exponents, found {} and {}",
                        format_rat(a),
                        format_rat(b)
                    ),
                ));
            }
            let product = ctx.skew(nprime, n) * a;
            if product != Rat::from_integer(1.into()) {
                return Err(invalid(
                    i,
                    format!(
                        "pentagon expansion needs skew({nprime}, {n}) * c = 1, got {}",
                        format_rat(&product)
                    ),
                ));
            }
            out.push((*n, a.clone()));
            out.push((n.add(nprime), a.clone()));
            out.push((*nprime, a.clone()));
        }
        StepKind::PentagonContract => {
            let (x, a) = &factors[i];
            let (y, b) = &factors[i + 1];
            let (z, d) = &factors[i + 2];
            if a != b || b != d {
                return Err(invalid(
                    i,
                    format!(
                        "pentagon contraction needs equal exponents, found {}, {}, {}",
                        format_rat(a),
                        format_rat(b),
                        format_rat(d)
                    ),
                ));
            }
            if *y != x.add(z) {
                return Err(invalid(
                    i,
                    format!("pentagon contraction needs middle vector {x} + {z}, found {y}"),
                ));
            }
            let product = ctx.skew(z, x) * a;
            if product != Rat::from_integer(1.into()) {
                return Err(invalid(
                    i,
                    format!(
                        "pentagon contraction needs skew({z}, {x}) * c = 1, got {}",
                        format_rat(&product)
                    ),
                ));
            }
            out.push((*z, a.clone()));
            out.push((*x, a.clone()));
        }
        StepKind::Commute => {
            let (n, a) = &factors[i];
            let (m, b) = &factors[i + 1];
            let s = ctx.skew(n, m);
            if !s.is_zero() && n.degree() + m.degree() <= ctx.degree() {
                return Err(invalid(
                    i,
                    format!(
                        "factors {n} and {m} do not commute under cutoff {} (skew {})",
                        ctx.degree(),
                        format_rat(&s)
                    ),
                ));
            }
            out.push((*m, b.clone()));
            out.push((*n, a.clone()));
        }
        StepKind::MergePow => {
            let (n, a) = &factors[i];
            let (m, b) = &factors[i + 1];
            if n != m {
                return Err(invalid(
                    i,
                    format!("merge needs a repeated vector, found {n} and {m}"),
                ));
            }
            let sum = a + b;
            if !sum.is_zero() {
                out.push((*n, sum));
            }
        }
        StepKind::SplitPow(x) => {
            let (n, c) = &factors[i];
            if x.is_zero() || x == c {
                return Err(invalid(
                    i,
                    format!(
                        "splitting {} off exponent {} leaves an empty factor",
                        format_rat(x),
                        format_rat(c)
                    ),
                ));
            }
            out.push((*n, x.clone()));
            out.push((*n, c - x));
        }
    }
    out.extend_from_slice(&factors[i + need..]);
    Ok(out)
}

/// Replays a script, returning every intermediate product (`trace[0]` is the
/// initial list). Each step is validated, then its rewritten window is
/// re-evaluated in the group and compared against what it replaced; the
/// first failure halts the replay with the step's index.
pub fn replay(
    initial: &[(LatticeVector, Rat)],
    script: &[RewriteStep],
    ctx: &Context,
) -> Result<Vec<Vec<(LatticeVector, Rat)>>, Error> {
    let mut trace = vec![initial.to_vec()];
    for (k, step) in script.iter().enumerate() {
        let current = trace.last().expect("trace starts non-empty");
        let next = apply_step(current, step, ctx).map_err(|e| match e {
            Error::InvalidStep { reason, .. } => Error::InvalidStep {
                index: k,
                reason: format!("{}: {reason}", step.format_line()),
            },
            other => other,
        })?;
        let at = step.position;
        let old_span = step.consumed();
        let new_span = next.len() + old_span - current.len();
        let before = eval_factors(ctx, &current[at..at + old_span]);
        let after = eval_factors(ctx, &next[at..at + new_span]);
        if let EqualityReport::Differs {
            point,
            degree,
            coefficient,
        } = after.compare(&before)
        {
            return Err(Error::UnsoundStep {
                index: k,
                point: (point.a1(), point.a2()),
                degree,
                coefficient: format_rat(&coefficient),
            });
        }
        trace.push(next);
    }
    Ok(trace)
}

/// Inverse derivation: each step is inverted (expand <-> contract,
/// merge <-> split at the recorded exponent) and the order reversed, so the
/// result rewrites `replay(initial, script)`'s final product back to
/// `initial`. The forward script must replay cleanly to recover the split
/// amounts for inverted merges.
pub fn invert_script(
    initial: &[(LatticeVector, Rat)],
    script: &[RewriteStep],
    ctx: &Context,
) -> Result<Vec<RewriteStep>, Error> {
    let trace = replay(initial, script, ctx)?;
    let mut inverted: Vec<RewriteStep> = script
        .iter()
        .zip(&trace)
        .map(|(step, state)| {
            let i = step.position;
            match &step.kind {
                StepKind::PentagonExpand => RewriteStep::pentagon_contract(i),
                StepKind::PentagonContract => RewriteStep::pentagon_expand(i),
                StepKind::Commute => RewriteStep::commute(i),
                StepKind::MergePow => RewriteStep::split(i, state[i].1.clone()),
                StepKind::SplitPow(_) => RewriteStep::merge(i),
            }
        })
        .collect();
    inverted.reverse();
    Ok(inverted)
}

/// Built-in derivation scripts for the doubled-exponent pair.
///
/// `b2` is the six-step pentagon chain rewriting `[n']^{2c} [n]^c` into
/// `[n]^c [n+n']^{2c} [n+2n']^c [n']^{2c}`: split the doubled head, expand
/// three pentagon pairs left to right, and regroup the repeated factors.
/// `B2` is its formal inversion (steps reversed and individually inverted),
/// running the same rewrite right to left. Only the exponent enters the
/// script; positions are independent of the vectors. Returns `None` for
/// other identities or for `c = 0`, which admits no pentagon pair.
pub fn scripted_lemma(id: IdentityId, c: &Rat) -> Option<Vec<RewriteStep>> {
    if c.is_zero() {
        return None;
    }
    match id {
        IdentityId::B2Lower => Some(vec![
            RewriteStep::split(0, c.clone()),
            RewriteStep::pentagon_expand(1),
            RewriteStep::pentagon_expand(0),
            RewriteStep::pentagon_expand(2),
            RewriteStep::merge(1),
            RewriteStep::merge(3),
        ]),
        IdentityId::B2Upper => Some(vec![
            RewriteStep::split(3, c.clone()),
            RewriteStep::split(1, c.clone()),
            RewriteStep::pentagon_contract(2),
            RewriteStep::pentagon_contract(0),
            RewriteStep::pentagon_contract(1),
            RewriteStep::merge(0),
        ]),
        _ => None,
    }
}

const UNTANGLE_BUDGET: usize = 200_000;

fn untangle_stuck(constraint: &str, got: String) -> Error {
    Error::ConstraintViolated {
        id: "untangle",
        constraint: constraint.to_string(),
        got,
    }
}

/// Sorts an arbitrary product into slope order by iterating the pentagon
/// relation, returning the script together with the final factor list.
///
/// Each round applies the best available move: merging an adjacent repeated
/// vector (reuniting split leftovers before coarser crossings need them);
/// failing that, expanding a crossing whose exponents are both positive
/// integer multiples of the pentagon exponent `1/skew` — lowest interaction
/// degree first, ties towards smaller skew, mirroring the order-by-order
/// consistency completion; failing that, swapping a crossing whose sum
/// leaves the cutoff. To expand a crossing, both exponents are peeled down
/// to the pentagon exponent and the pair is expanded, pushing the inversion
/// into strictly higher degree. A crossing whose exponents do not yet match
/// its pentagon exponent simply waits for merges and swaps to reunite its
/// pieces. Parallel factors are finally ordered by degree and repeated
/// vectors merged, so an anti-ordered input ends at the unique ordered form
/// of its group value under the cutoff.
///
/// Fails (without a partial script) when only mismatched crossings remain;
/// such products are not pentagon-sortable by this scheme.
pub fn untangle_script(
    ctx: &Context,
    initial: &[(LatticeVector, Rat)],
) -> Result<(Vec<RewriteStep>, Vec<(LatticeVector, Rat)>), Error> {
    let mut factors = initial.to_vec();
    let mut steps: Vec<RewriteStep> = Vec::new();
    let push = |steps: &mut Vec<RewriteStep>,
                factors: &mut Vec<(LatticeVector, Rat)>,
                step: RewriteStep|
     -> Result<(), Error> {
        if steps.len() >= UNTANGLE_BUDGET {
            return Err(untangle_stuck(
                "script stays within the step budget",
                format!("{UNTANGLE_BUDGET} steps without reaching slope order"),
            ));
        }
        *factors = apply_step(factors, &step, ctx)?;
        steps.push(step);
        Ok(())
    };

    loop {
        if let Some(i) = factors.windows(2).position(|w| w[0].0 == w[1].0) {
            push(&mut steps, &mut factors, RewriteStep::merge(i))?;
            continue;
        }
        let mut expand: Option<(u32, i64, usize)> = None;
        let mut swap = None;
        let mut blocked = None;
        for (i, w) in factors.windows(2).enumerate() {
            if cross(&w[0].0, &w[1].0) >= 0 {
                continue;
            }
            let sum_degree = w[0].0.degree() + w[1].0.degree();
            if sum_degree > ctx.degree() {
                swap = swap.or(Some(i));
                continue;
            }
            let c = ctx.skew(&w[0].0, &w[1].0).recip();
            if is_positive_integer(&(&w[0].1 / &c)) && is_positive_integer(&(&w[1].1 / &c)) {
                let key = (sum_degree, -cross(&w[0].0, &w[1].0), i);
                if expand.as_ref().is_none_or(|best| key < *best) {
                    expand = Some(key);
                }
            } else {
                blocked = blocked.or(Some(i));
            }
        }
        let i = match (expand, swap, blocked) {
            (Some((_, _, i)), _, _) => i,
            (None, Some(i), _) => {
                push(&mut steps, &mut factors, RewriteStep::commute(i))?;
                continue;
            }
            (None, None, Some(i)) => {
                let (nprime, a) = &factors[i];
                let (n, b) = &factors[i + 1];
                return Err(untangle_stuck(
                    "crossing exponents are positive integer multiples of 1/skew",
                    format!(
                        "[{nprime}]^{} [{n}]^{} with pentagon exponent {}",
                        format_rat(a),
                        format_rat(b),
                        format_rat(&ctx.skew(nprime, n).recip())
                    ),
                ));
            }
            (None, None, None) => break,
        };
        // peel one pentagon exponent off each side, keeping the peeled
        // pieces adjacent, then expand them
        let (nprime, a) = factors[i].clone();
        let (_, b) = factors[i + 1].clone();
        let c = ctx.skew(&nprime, &factors[i + 1].0).recip();
        let mut pair_at = i;
        if a != c {
            push(&mut steps, &mut factors, RewriteStep::split(i, &a - &c))?;
            pair_at = i + 1;
        }
        if b != c {
            push(
                &mut steps,
                &mut factors,
                RewriteStep::split(pair_at + 1, c.clone()),
            )?;
        }
        push(&mut steps, &mut factors, RewriteStep::pentagon_expand(pair_at))?;
    }

    // order each parallel run by degree
    loop {
        let swap = factors.windows(2).position(|w| {
            cross(&w[0].0, &w[1].0) == 0 && w[0].0.degree() > w[1].0.degree()
        });
        let Some(i) = swap else { break };
        push(&mut steps, &mut factors, RewriteStep::commute(i))?;
    }
    // regroup repeated vectors
    loop {
        let pair = factors.windows(2).position(|w| w[0].0 == w[1].0);
        let Some(i) = pair else { break };
        push(&mut steps, &mut factors, RewriteStep::merge(i))?;
    }
    Ok((steps, factors))
}
