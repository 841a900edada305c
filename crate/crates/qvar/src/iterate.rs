//! The discounted descent iteration: pick successors with
//! f(x') + gamma d(x',x) <= f(x) and f(x') <= eta(f(x)) until the objective
//! hits zero or the step cap, certifying the telescoped distance bounds
//! gamma d(x_{n+k}, x_n) <= f(x_n) - f(x_{n+k}) along the way.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::catalog::{CatalogDistance, CatalogObjective, CatalogRule, CatalogSpace};
use crate::error::{QvarError, Result};
use crate::order::Objective;
use crate::rational::{format_rat, ExtendedRational, Finite, Rat};
use crate::space::FQuasiGauge;

/// A rational gain function on the nonnegative axis with eta(t) < t for all
/// t > 0, decidable because the form is (piecewise) linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaSpec {
    /// eta(t) = mu t with 0 < mu < 1.
    Linear { mu: Rat },
    /// Left-closed segments [start_i, start_{i+1}) with eta(t) = a + b t on
    /// each; the first start must be 0 and the last segment extends to
    /// infinity.
    PiecewiseLinear { segments: Vec<Segment> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Rat,
    pub intercept: Rat,
    pub slope: Rat,
}

impl Segment {
    fn value_at(&self, t: &Rat) -> Rat {
        &self.intercept + &self.slope * t
    }
}

impl EtaSpec {
    pub fn linear(mu: Rat) -> Result<Self> {
        let s = EtaSpec::Linear { mu };
        s.validate()?;
        Ok(s)
    }

    /// Symbolic admissibility check: eta maps into the nonnegative axis and
    /// eta(t) < t for every t > 0 (equivalently the only fixed point is 0).
    /// Linear segments make both decidable from endpoint values and slopes;
    /// upper semicontinuity at breakpoints requires the left-closed value
    /// to dominate the incoming left limit.
    pub fn validate(&self) -> Result<()> {
        match self {
            EtaSpec::Linear { mu } => {
                if !mu.is_positive() || *mu >= Rat::one() {
                    return Err(QvarError::InvalidArgument(format!(
                        "linear gain needs 0 < mu < 1, got {}",
                        format_rat(mu)
                    )));
                }
                Ok(())
            }
            EtaSpec::PiecewiseLinear { segments } => {
                if segments.is_empty() || !segments[0].start.is_zero() {
                    return Err(QvarError::InvalidArgument(
                        "segments must start at 0".into(),
                    ));
                }
                for w in segments.windows(2) {
                    if w[1].start <= w[0].start {
                        return Err(QvarError::InvalidArgument(
                            "segment starts must increase".into(),
                        ));
                    }
                }
                for (i, s) in segments.iter().enumerate() {
                    let left = s.value_at(&s.start);
                    // g(t) = eta(t) - t must be negative on the open part
                    // and at the closed left endpoint when it is positive.
                    let g_left = &left - &s.start;
                    if s.start.is_positive() && !g_left.is_negative() {
                        return Err(QvarError::InvalidArgument(format!(
                            "eta(t) >= t at segment {i} start {}",
                            format_rat(&s.start)
                        )));
                    }
                    if left.is_negative() {
                        return Err(QvarError::InvalidArgument(format!(
                            "eta negative at segment {i} start"
                        )));
                    }
                    match segments.get(i + 1) {
                        Some(next) => {
                            let r = &next.start;
                            let right = s.value_at(r);
                            if right.is_negative() {
                                return Err(QvarError::InvalidArgument(format!(
                                    "eta negative approaching segment {} end", i
                                )));
                            }
                            if &right - r > Rat::zero() {
                                return Err(QvarError::InvalidArgument(format!(
                                    "eta(t) >= t inside segment {i}"
                                )));
                            }
                            // Upper semicontinuity at the breakpoint.
                            if next.value_at(r) < right {
                                return Err(QvarError::InvalidArgument(format!(
                                    "eta not upper semicontinuous at {}",
                                    format_rat(r)
                                )));
                            }
                        }
                        None => {
                            // Unbounded tail: slope below 1 keeps eta(t) < t
                            // forever; slope exactly 1 needs a negative
                            // offset, which the nonnegativity check already
                            // excludes for large t unless intercept < 0.
                            if s.slope.is_negative() {
                                return Err(QvarError::InvalidArgument(
                                    "eta eventually negative on the final segment".into(),
                                ));
                            }
                            if s.slope >= Rat::one() {
                                return Err(QvarError::InvalidArgument(
                                    "final segment slope must stay below 1".into(),
                                ));
                            }
                        }
                    }
                }
                // Segment 0 starts at t = 0 where only eta(0) >= 0 is
                // required; g(0) = intercept may be 0 (fixed point at 0 is
                // the one allowed fixed point). Positive intercepts would
                // make eta(t) > t near 0, caught by the right-endpoint or
                // tail checks unless the first segment is degenerate: guard
                // explicitly.
                let first = &segments[0];
                if first.intercept.is_positive() {
                    return Err(QvarError::InvalidArgument(
                        "eta(t) > t near 0 (positive intercept at the origin)".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        if t.is_negative() {
            return Err(QvarError::InvalidArgument(
                "gain function argument must be nonnegative".into(),
            ));
        }
        match self {
            EtaSpec::Linear { mu } => Ok(mu * t),
            EtaSpec::PiecewiseLinear { segments } => {
                let seg = segments
                    .iter()
                    .rev()
                    .find(|s| s.start <= *t)
                    .expect("first segment starts at 0");
                Ok(seg.value_at(t))
            }
        }
    }
}

/// The successor choice, supplied as data and audited, never searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuccessorRule {
    /// Finite instance: partial map by point index, required wherever the
    /// objective is finite and positive.
    Table(BTreeMap<usize, usize>),
    /// Countable instance: a catalog closed form.
    Catalog(CatalogRule),
}

/// One audited step: both discounted-descent inequalities with their sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepAudit {
    pub from: String,
    pub to: String,
    /// max over members of f(x') + gamma d(x',x), against f(x).
    pub descent_lhs: ExtendedRational,
    pub descent_rhs: ExtendedRational,
    /// f(x') against eta(f(x)).
    pub gain_lhs: ExtendedRational,
    pub gain_rhs: ExtendedRational,
}

/// A telescoped bound gamma d(x_{n+k}, x_n) <= f(x_n) - f(x_{n+k}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopedBound {
    pub member: String,
    pub n: usize,
    pub k: usize,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub enum IterationOutcome {
    /// The objective reached exactly zero at step k.
    Terminated {
        x: usize,
        steps: usize,
        trajectory: Vec<usize>,
        audits: Vec<StepAudit>,
        bounds: Vec<TelescopedBound>,
    },
    /// Step cap hit with the objective still positive; residuals are the
    /// objective values along the trajectory (always nonincreasing).
    Converging {
        trajectory: Vec<usize>,
        residuals: Vec<ExtendedRational>,
        audits: Vec<StepAudit>,
        bounds: Vec<TelescopedBound>,
    },
}

pub const DEFAULT_CAP: usize = 10_000;

fn audit_step_finite(
    phi: &Objective,
    gauge: &FQuasiGauge,
    gamma: &Rat,
    eta: &EtaSpec,
    x: usize,
    y: usize,
) -> Result<StepAudit> {
    let fx = phi.at(x)?;
    let fy = phi.at(y)?;
    let Finite(fx_rat) = fx else {
        return Err(QvarError::Hypothesis(format!(
            "rule defined at point {x} with infinite objective value"
        )));
    };
    let mut worst = fy.clone();
    for d in &gauge.members {
        let v = fy.add_rat(&(gamma * d.at(y, x)?));
        if v > worst {
            worst = v;
        }
    }
    if worst > *fx {
        return Err(QvarError::Hypothesis(format!(
            "descent inequality fails at step {x} -> {y}"
        )));
    }
    let gain_rhs = Finite(eta.eval(fx_rat)?);
    if *fy > gain_rhs {
        return Err(QvarError::Hypothesis(format!(
            "gain inequality fails at step {x} -> {y}"
        )));
    }
    Ok(StepAudit {
        from: x.to_string(),
        to: y.to_string(),
        descent_lhs: worst,
        descent_rhs: fx.clone(),
        gain_lhs: fy.clone(),
        gain_rhs,
    })
}

fn telescoped_bounds_finite(
    phi: &Objective,
    gauge: &FQuasiGauge,
    gamma: &Rat,
    trajectory: &[usize],
) -> Result<Vec<TelescopedBound>> {
    let mut out = Vec::new();
    for n in 0..trajectory.len() {
        for m in (n + 1)..trajectory.len() {
            let (a, b) = (trajectory[n], trajectory[m]);
            let diff = phi.at(a)?.checked_sub(phi.at(b)?)?;
            let Finite(rhs) = diff else {
                return Err(QvarError::Arithmetic(
                    "infinite objective inside the trajectory".into(),
                ));
            };
            for d in &gauge.members {
                let lhs = gamma * d.at(b, a)?;
                if lhs > rhs {
                    return Err(QvarError::Verification(format!(
                        "telescoped bound fails for member {} between steps {n} and {m}",
                        d.name
                    )));
                }
                out.push(TelescopedBound {
                    member: d.name.clone(),
                    n,
                    k: m - n,
                    lhs,
                    rhs: rhs.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Runs the iteration on a finite instance. The whole rule table is audited
/// up front; the objective must be nonnegative with x0 in its domain.
pub fn eta_iterate(
    phi: &Objective,
    gauge: &FQuasiGauge,
    gamma: &Rat,
    eta: &EtaSpec,
    rule: &SuccessorRule,
    x0: usize,
    cap: usize,
) -> Result<IterationOutcome> {
    eta.validate()?;
    if !gamma.is_positive() {
        return Err(QvarError::InvalidArgument("gamma must be positive".into()));
    }
    let n = gauge.dim()?;
    if phi.len() != n {
        return Err(QvarError::Dimension(
            "objective length differs from point count".into(),
        ));
    }
    if phi.values.iter().any(|v| *v < ExtendedRational::zero()) {
        return Err(QvarError::Hypothesis(
            "iteration objective must be nonnegative".into(),
        ));
    }
    if !phi.at(x0)?.is_finite() {
        return Err(QvarError::Hypothesis(
            "start point has infinite objective value".into(),
        ));
    }
    let SuccessorRule::Table(table) = rule else {
        return Err(QvarError::NotApplicable(
            "catalog rules run on countable instances".into(),
        ));
    };
    // Up-front audit of every defined entry at a positive finite value.
    let mut audits_all = Vec::new();
    for (&x, &y) in table {
        if x >= n || y >= n {
            return Err(QvarError::Dimension(
                "rule table references points outside the instance".into(),
            ));
        }
        if *phi.at(x)? > ExtendedRational::zero() && phi.at(x)?.is_finite() {
            audits_all.push(audit_step_finite(phi, gauge, gamma, eta, x, y)?);
        }
    }
    let mut trajectory = vec![x0];
    let mut audits = Vec::new();
    let mut x = x0;
    for _ in 0..cap {
        if *phi.at(x)? == ExtendedRational::zero() {
            let bounds = telescoped_bounds_finite(phi, gauge, gamma, &trajectory)?;
            return Ok(IterationOutcome::Terminated {
                x,
                steps: trajectory.len() - 1,
                trajectory,
                audits,
                bounds,
            });
        }
        let &y = table.get(&x).ok_or_else(|| {
            QvarError::Hypothesis(format!(
                "rule undefined at point {x} with positive objective value"
            ))
        })?;
        audits.push(audit_step_finite(phi, gauge, gamma, eta, x, y)?);
        trajectory.push(y);
        x = y;
    }
    if *phi.at(x)? == ExtendedRational::zero() {
        let bounds = telescoped_bounds_finite(phi, gauge, gamma, &trajectory)?;
        return Ok(IterationOutcome::Terminated {
            x,
            steps: trajectory.len() - 1,
            trajectory,
            audits,
            bounds,
        });
    }
    let residuals: Vec<ExtendedRational> = trajectory
        .iter()
        .map(|&t| phi.at(t).cloned())
        .collect::<Result<_>>()?;
    if residuals.windows(2).any(|w| w[1] > w[0]) {
        return Err(QvarError::Verification(
            "residual sequence increased along the trajectory".into(),
        ));
    }
    let bounds = telescoped_bounds_finite(phi, gauge, gamma, &trajectory)?;
    Ok(IterationOutcome::Converging {
        trajectory,
        residuals,
        audits,
        bounds,
    })
}

/// Outcome on a countable catalog instance: rational iterates.
#[derive(Clone, Debug)]
pub enum CatalogIterationOutcome {
    Terminated {
        x: Rat,
        steps: usize,
        trajectory: Vec<Rat>,
        audits: Vec<StepAudit>,
        bounds: Vec<TelescopedBound>,
    },
    Converging {
        trajectory: Vec<Rat>,
        residuals: Vec<ExtendedRational>,
        audits: Vec<StepAudit>,
        bounds: Vec<TelescopedBound>,
        /// With a declared limit point: the distances d(limit, x_k), which
        /// must be nonincreasing, and the limit bound
        /// d(limit, x0) <= f(x0)/gamma.
        limit_check: Option<LimitCheck>,
    },
}

#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub limit: Rat,
    pub distances: Vec<Rat>,
    pub bound_lhs: Rat,
    pub bound_rhs: Rat,
}

fn audit_step_catalog(
    f: &CatalogObjective,
    d: CatalogDistance,
    gamma: &Rat,
    eta: &EtaSpec,
    x: &Rat,
    y: &Rat,
) -> Result<StepAudit> {
    let fx = f.eval(x);
    let fy = f.eval(y);
    let Finite(fx_rat) = &fx else {
        return Err(QvarError::Hypothesis(
            "rule visited a point with infinite objective value".into(),
        ));
    };
    let lhs = fy.add_rat(&(gamma * d.eval(y, x)));
    if lhs > fx {
        return Err(QvarError::Hypothesis(format!(
            "descent inequality fails at step {} -> {}",
            format_rat(x),
            format_rat(y)
        )));
    }
    let gain_rhs = Finite(eta.eval(fx_rat)?);
    if fy > gain_rhs {
        return Err(QvarError::Hypothesis(format!(
            "gain inequality fails at step {} -> {}",
            format_rat(x),
            format_rat(y)
        )));
    }
    Ok(StepAudit {
        from: format_rat(x),
        to: format_rat(y),
        descent_lhs: lhs,
        descent_rhs: fx,
        gain_lhs: fy,
        gain_rhs,
    })
}

/// Runs the iteration on a catalog countable instance, auditing each step
/// as it is visited.
#[allow(clippy::too_many_arguments)]
pub fn eta_iterate_catalog(
    space: CatalogSpace,
    dist: CatalogDistance,
    f: &CatalogObjective,
    gamma: &Rat,
    eta: &EtaSpec,
    rule: CatalogRule,
    x0: &Rat,
    cap: usize,
    declared_limit: Option<&Rat>,
) -> Result<CatalogIterationOutcome> {
    eta.validate()?;
    if !gamma.is_positive() {
        return Err(QvarError::InvalidArgument("gamma must be positive".into()));
    }
    if !space.contains(x0) {
        return Err(QvarError::InvalidArgument(
            "start point outside the ground set".into(),
        ));
    }
    if !f.eval(x0).is_finite() {
        return Err(QvarError::Hypothesis(
            "start point has infinite objective value".into(),
        ));
    }
    let zero = ExtendedRational::zero();
    let mut trajectory = vec![x0.clone()];
    let mut audits = Vec::new();
    let mut x = x0.clone();
    let mut terminated = false;
    for _ in 0..cap {
        if f.eval(&x) == zero {
            terminated = true;
            break;
        }
        let y = rule.successor(&x);
        if !space.contains(&y) {
            return Err(QvarError::Hypothesis(
                "rule left the ground set".into(),
            ));
        }
        audits.push(audit_step_catalog(f, dist, gamma, eta, &x, &y)?);
        trajectory.push(y.clone());
        x = y;
    }
    terminated = terminated || f.eval(&x) == zero;

    // Telescoped bounds over every trajectory pair, exact.
    let mut bounds = Vec::new();
    for n in 0..trajectory.len() {
        for m in (n + 1)..trajectory.len() {
            let diff = f
                .eval(&trajectory[n])
                .checked_sub(&f.eval(&trajectory[m]))?;
            let Finite(rhs) = diff else {
                return Err(QvarError::Arithmetic(
                    "infinite objective inside the trajectory".into(),
                ));
            };
            let lhs = gamma * dist.eval(&trajectory[m], &trajectory[n]);
            if lhs > rhs {
                return Err(QvarError::Verification(format!(
                    "telescoped bound fails between steps {n} and {m}"
                )));
            }
            bounds.push(TelescopedBound {
                member: dist.id().to_string(),
                n,
                k: m - n,
                lhs,
                rhs,
            });
        }
    }

    if terminated {
        return Ok(CatalogIterationOutcome::Terminated {
            x: x.clone(),
            steps: trajectory.len() - 1,
            trajectory,
            audits,
            bounds,
        });
    }

    let residuals: Vec<ExtendedRational> = trajectory.iter().map(|t| f.eval(t)).collect();
    if residuals.windows(2).any(|w| w[1] > w[0]) {
        return Err(QvarError::Verification(
            "residual sequence increased along the trajectory".into(),
        ));
    }
    let limit_check = match declared_limit {
        None => None,
        Some(lim) => {
            let distances: Vec<Rat> = trajectory.iter().map(|t| dist.eval(lim, t)).collect();
            if distances.windows(2).any(|w| w[1] > w[0]) {
                return Err(QvarError::Verification(
                    "distance to the declared limit increased".into(),
                ));
            }
            let Finite(f0) = f.eval(x0) else { unreachable!("checked finite") };
            let check = LimitCheck {
                bound_lhs: dist.eval(lim, x0),
                bound_rhs: &f0 / gamma,
                limit: lim.clone(),
                distances,
            };
            if check.bound_lhs > check.bound_rhs {
                return Err(QvarError::Verification(
                    "limit distance bound fails".into(),
                ));
            }
            Some(check)
        }
    };
    Ok(CatalogIterationOutcome::Converging {
        trajectory,
        residuals,
        audits,
        bounds,
        limit_check,
    })
}

/// The contraction specialization: hypotheses d(x',x) <= lambda f(x) and
/// f(x') <= mu f(x) with 0 < mu < 1, lambda > 0 reduce to the discounted
/// descent with gamma = (1-mu)/lambda and eta(t) = mu t. The reduction
/// identity (scale the first inequality by (1-mu)/lambda, the second by 1,
/// add) is re-checked on every visited pair.
#[derive(Clone, Debug)]
pub struct GelmanSpec {
    pub lambda: Rat,
    pub mu: Rat,
}

impl GelmanSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_positive() {
            return Err(QvarError::InvalidArgument("lambda must be positive".into()));
        }
        if !self.mu.is_positive() || self.mu >= Rat::one() {
            return Err(QvarError::InvalidArgument(
                "contraction factor needs 0 < mu < 1".into(),
            ));
        }
        Ok(())
    }

    pub fn gamma(&self) -> Rat {
        (Rat::one() - &self.mu) / &self.lambda
    }

    pub fn eta(&self) -> Result<EtaSpec> {
        EtaSpec::linear(self.mu.clone())
    }
}

/// Checks both contraction inequalities on a visited pair and the algebraic
/// combination that yields the descent inequality.
fn gelman_pair_check(
    spec: &GelmanSpec,
    fx: &Rat,
    fy: &Rat,
    dyx: &Rat,
) -> Result<()> {
    if dyx > &(&spec.lambda * fx) {
        return Err(QvarError::Hypothesis(
            "contraction distance inequality fails on a visited pair".into(),
        ));
    }
    if fy > &(&spec.mu * fx) {
        return Err(QvarError::Hypothesis(
            "contraction value inequality fails on a visited pair".into(),
        ));
    }
    // (1-mu)/lambda * d(y,x) <= (1-mu) f(x) and f(y) <= mu f(x) add to the
    // descent inequality; re-derive it exactly.
    let gamma = spec.gamma();
    if fy + &gamma * dyx > *fx {
        return Err(QvarError::Verification(
            "reduction identity failed on a visited pair".into(),
        ));
    }
    Ok(())
}

/// Runs the contraction iteration on a catalog instance by reduction to
/// the discounted descent, re-checking the reduction on every step.
#[allow(clippy::too_many_arguments)]
pub fn gelman_reduce_catalog(
    space: CatalogSpace,
    dist: CatalogDistance,
    f: &CatalogObjective,
    spec: &GelmanSpec,
    rule: CatalogRule,
    x0: &Rat,
    cap: usize,
    declared_limit: Option<&Rat>,
) -> Result<CatalogIterationOutcome> {
    spec.validate()?;
    let outcome = eta_iterate_catalog(
        space,
        dist,
        f,
        &spec.gamma(),
        &spec.eta()?,
        rule,
        x0,
        cap,
        declared_limit,
    )?;
    let trajectory = match &outcome {
        CatalogIterationOutcome::Terminated { trajectory, .. } => trajectory,
        CatalogIterationOutcome::Converging { trajectory, .. } => trajectory,
    };
    for w in trajectory.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let Finite(fx) = f.eval(x) else { unreachable!("audited finite") };
        let Finite(fy) = f.eval(y) else { unreachable!("audited finite") };
        gelman_pair_check(spec, &fx, &fy, &dist.eval(y, x))?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, ExtendedRational as ER};
    use crate::space::QuasiPseudometric;

    /// The finite chain: f = (1, 1/2, 1/4, 0) with d(p_{i+1}, p_i) matching
    /// the value drops and large distances elsewhere except along descent.
    fn chain_instance() -> (Objective, FQuasiGauge) {
        let f = Objective::new(
            "f",
            vec![ER::from_int(1), Finite(rat(1, 2)), Finite(rat(1, 4)), ER::zero()],
        )
        .unwrap();
        // d(j,i) for j > i equals f(p_i) - f(p_j) so gamma = 1 telescopes
        // exactly; upward distances large.
        let fv = [rat_int(1), rat(1, 2), rat(1, 4), rat_int(0)];
        let rows: Vec<Vec<Rat>> = (0..4)
            .map(|j| {
                (0..4)
                    .map(|i| {
                        if j == i {
                            Rat::zero()
                        } else if j > i {
                            &fv[i] - &fv[j]
                        } else {
                            rat_int(10)
                        }
                    })
                    .collect()
            })
            .collect();
        (f, FQuasiGauge::singleton(QuasiPseudometric::matrix("d", rows)))
    }

    fn chain_rule() -> SuccessorRule {
        SuccessorRule::Table(BTreeMap::from([(0, 1), (1, 2), (2, 3)]))
    }

    #[test]
    fn chain_terminates_in_three_steps_with_exact_bounds() {
        let (f, g) = chain_instance();
        let eta = EtaSpec::linear(rat(1, 2)).unwrap();
        match eta_iterate(&f, &g, &rat_int(1), &eta, &chain_rule(), 0, DEFAULT_CAP).unwrap() {
            IterationOutcome::Terminated { x, steps, trajectory, bounds, .. } => {
                assert_eq!(x, 3);
                assert_eq!(steps, 3);
                assert_eq!(trajectory, vec![0, 1, 2, 3]);
                for b in &bounds {
                    assert!(b.lhs <= b.rhs);
                }
                // The end-to-end bound d(p3, p0) <= f(p0) / gamma = 1.
                let full = bounds.iter().find(|b| b.n == 0 && b.k == 3).unwrap();
                assert_eq!(full.lhs, rat_int(1));
                assert_eq!(full.rhs, rat_int(1));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn zero_start_returns_immediately() {
        let (f, g) = chain_instance();
        let eta = EtaSpec::linear(rat(1, 2)).unwrap();
        match eta_iterate(&f, &g, &rat_int(1), &eta, &chain_rule(), 3, DEFAULT_CAP).unwrap() {
            IterationOutcome::Terminated { x, steps, .. } => {
                assert_eq!(x, 3);
                assert_eq!(steps, 0);
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn bad_rule_entry_caught_in_upfront_audit() {
        let (f, g) = chain_instance();
        let eta = EtaSpec::linear(rat(1, 2)).unwrap();
        // 2 -> 0 climbs the chain: descent inequality fails.
        let rule = SuccessorRule::Table(BTreeMap::from([(0, 1), (1, 2), (2, 0)]));
        assert!(matches!(
            eta_iterate(&f, &g, &rat_int(1), &eta, &rule, 0, DEFAULT_CAP),
            Err(QvarError::Hypothesis(_))
        ));
    }

    #[test]
    fn gain_factor_one_rejected() {
        assert!(EtaSpec::linear(rat_int(1)).is_err());
        assert!(EtaSpec::linear(rat_int(0)).is_err());
        assert!(EtaSpec::linear(rat(3, 2)).is_err());
    }

    #[test]
    fn piecewise_gain_validation() {
        // eta(t) = t/2 on [0,1), t/4 + 1/4 on [1,inf): usc, below identity.
        let ok = EtaSpec::PiecewiseLinear {
            segments: vec![
                Segment { start: rat_int(0), intercept: rat_int(0), slope: rat(1, 2) },
                Segment { start: rat_int(1), intercept: rat(1, 4), slope: rat(1, 4) },
            ],
        };
        assert!(ok.validate().is_ok());
        assert_eq!(ok.eval(&rat(1, 2)).unwrap(), rat(1, 4));
        assert_eq!(ok.eval(&rat_int(2)).unwrap(), rat(3, 4));
        //

        // eta(t) = t on the tail: fixed points above 0.
        let bad = EtaSpec::PiecewiseLinear {
            segments: vec![Segment {
                start: rat_int(0),
                intercept: rat_int(0),
                slope: rat_int(1),
            }],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn halving_on_the_unit_interval_converges() {
        let out = eta_iterate_catalog(
            CatalogSpace::UnitIntervalQ,
            CatalogDistance::StdAbs,
            &CatalogObjective::Identity,
            &rat(1, 2),
            &EtaSpec::linear(rat(1, 2)).unwrap(),
            CatalogRule::Halving,
            &rat_int(1),
            21,
            Some(&rat_int(0)),
        )
        .unwrap();
        match out {
            CatalogIterationOutcome::Converging { trajectory, residuals, limit_check, .. } => {
                assert_eq!(trajectory.len(), 22);
                assert_eq!(trajectory[21], rat(1, 1 << 21));
                assert!(residuals.last().unwrap() < &Finite(rat(1, 1 << 20)));
                let lc = limit_check.unwrap();
                assert_eq!(lc.bound_lhs, rat_int(1));
                assert_eq!(lc.bound_rhs, rat_int(2));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn contraction_reduction_matches_direct_iteration() {
        let spec = GelmanSpec { lambda: rat_int(1), mu: rat(1, 2) };
        assert_eq!(spec.gamma(), rat(1, 2));
        let a = gelman_reduce_catalog(
            CatalogSpace::UnitIntervalQ,
            CatalogDistance::StdAbs,
            &CatalogObjective::Identity,
            &spec,
            CatalogRule::Halving,
            &rat_int(1),
            21,
            Some(&rat_int(0)),
        )
        .unwrap();
        let b = eta_iterate_catalog(
            CatalogSpace::UnitIntervalQ,
            CatalogDistance::StdAbs,
            &CatalogObjective::Identity,
            &rat(1, 2),
            &EtaSpec::linear(rat(1, 2)).unwrap(),
            CatalogRule::Halving,
            &rat_int(1),
            21,
            Some(&rat_int(0)),
        )
        .unwrap();
        let ta = match a {
            CatalogIterationOutcome::Converging { trajectory, .. } => trajectory,
            _ => panic!(),
        };
        let tb = match b {
            CatalogIterationOutcome::Converging { trajectory, .. } => trajectory,
            _ => panic!(),
        };
        assert_eq!(ta, tb);
    }

    #[test]
    fn contraction_factor_at_least_one_rejected() {
        let spec = GelmanSpec { lambda: rat_int(1), mu: rat_int(1) };
        assert!(spec.validate().is_err());
    }
}
