//! Convergence, separation, Cauchy classification, semicontinuity classes
//! and the specialization preorder.
//!
//! Verdicts are exact wherever the sequence description permits (eventually
//! constant sequences on finite instances, catalog sequences with stored
//! closed forms); explicit finite prefixes only ever earn a verdict
//! qualified by the inspected depth and threshold schedule.

use std::collections::BTreeSet;

use num::Zero;

use crate::catalog::{
    self, CatalogDistance, CatalogObjective, CatalogSequence, CauchySide,
};
use crate::error::{QvarError, Result};
use crate::rational::{rat, ExtendedRational, Rat};
use crate::relation::Relation;
use crate::space::FQuasiGauge;

/// A sequence on a finite instance, by point index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    /// The first N terms only; nothing is known about the tail.
    Prefix(Vec<usize>),
    /// A finite prefix followed by the constant value `tail` forever. The
    /// tail makes limit and Cauchy questions exactly decidable.
    EventuallyConstant { prefix: Vec<usize>, tail: usize },
}

impl SequenceSpec {
    pub fn known_terms(&self) -> Vec<usize> {
        match self {
            SequenceSpec::Prefix(p) => p.clone(),
            SequenceSpec::EventuallyConstant { prefix, tail } => {
                let mut t = prefix.clone();
                t.push(*tail);
                t
            }
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let terms = self.known_terms();
        if terms.is_empty() {
            return Err(QvarError::InvalidArgument("empty sequence".into()));
        }
        if let Some(&bad) = terms.iter().find(|&&i| i >= n) {
            return Err(QvarError::Dimension(format!(
                "sequence term index {bad} out of range"
            )));
        }
        Ok(())
    }
}

/// Thresholds 1, 1/2, ..., 2^-10 used for depth-qualified verdicts.
pub fn default_epsilon_schedule() -> Vec<Rat> {
    (0..=10).map(|k| rat(1, 1 << k)).collect()
}

/// Outcome of a limit or Cauchy question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact(bool),
    /// Finite-prefix evidence only: for each threshold, the first 0-based
    /// index from which every remaining inspected term stays inside, or
    /// None if the prefix never settles below that threshold.
    ConsistentUpTo {
        depth: usize,
        settled: Vec<(Rat, Option<usize>)>,
    },
}

impl Verdict {
    /// True when the evidence is exact and positive.
    pub fn holds_exactly(&self) -> bool {
        matches!(self, Verdict::Exact(true))
    }
}

fn settle_indices(values_per_eps: &[Rat], schedule: &[Rat]) -> Vec<(Rat, Option<usize>)> {
    schedule
        .iter()
        .map(|eps| {
            let mut settled = None;
            for start in 0..values_per_eps.len() {
                if values_per_eps[start..].iter().all(|v| v < eps) {
                    settled = Some(start);
                    break;
                }
            }
            (eps.clone(), settled)
        })
        .collect()
}

/// Does the sequence converge to x in the gauge topology: d(x, x_n) -> 0
/// for every member.
pub fn converges_to(
    seq: &SequenceSpec,
    x: usize,
    gauge: &FQuasiGauge,
    schedule: &[Rat],
) -> Result<Verdict> {
    let n = gauge.dim()?;
    seq.validate(n)?;
    if x >= n {
        return Err(QvarError::Dimension(format!("limit index {x} out of range")));
    }
    match seq {
        SequenceSpec::EventuallyConstant { tail, .. } => {
            // Only the tail matters: exact iff d(x, tail) = 0 for all d.
            let mut ok = true;
            for d in &gauge.members {
                if !d.at(x, *tail)?.is_zero() {
                    ok = false;
                }
            }
            Ok(Verdict::Exact(ok))
        }
        SequenceSpec::Prefix(terms) => {
            // Worst member distance at each term.
            let mut worst: Vec<Rat> = Vec::with_capacity(terms.len());
            for &t in terms {
                let mut m = Rat::zero();
                for d in &gauge.members {
                    let v = d.at(x, t)?;
                    if *v > m {
                        m = v.clone();
                    }
                }
                worst.push(m);
            }
            Ok(Verdict::ConsistentUpTo {
                depth: terms.len(),
                settled: settle_indices(&worst, schedule),
            })
        }
    }
}

/// All candidates the sequence converges to (exact verdicts only count as
/// membership when positive; prefix evidence never certifies membership).
pub fn limit_set(
    seq: &SequenceSpec,
    gauge: &FQuasiGauge,
    candidates: &[usize],
    schedule: &[Rat],
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &c in candidates {
        if converges_to(seq, c, gauge, schedule)?.holds_exactly() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Exact convergence of a catalog sequence to a rational limit point under a
/// catalog distance: lim d(c, x_n) = 0.
pub fn converges_to_catalog(
    d: CatalogDistance,
    seq: &CatalogSequence,
    c: &Rat,
) -> Result<bool> {
    Ok(catalog::dist_limit(d, c, seq)?.is_zero())
}

/// Limit set of a catalog sequence over named rational candidates.
pub fn limit_set_catalog<'a>(
    d: CatalogDistance,
    seq: &CatalogSequence,
    candidates: &'a [(String, Rat)],
) -> Result<Vec<&'a str>> {
    let mut out = Vec::new();
    for (name, c) in candidates {
        if converges_to_catalog(d, seq, c)? {
            out.push(name.as_str());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationClass {
    T1,
    /// T0 but not T1; the witness pair (x,y) has d(x,y) = 0 for every member.
    T0 { t1_failure: (usize, usize) },
    /// Not even T0; the witness pair is indistinguishable in both directions.
    Neither { witness: (usize, usize) },
}

pub fn separation_class(gauge: &FQuasiGauge) -> Result<SeparationClass> {
    let n = gauge.dim()?;
    let mut t1_failure = None;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let mut forward = false;
            let mut backward = false;
            for d in &gauge.members {
                if !d.at(x, y)?.is_zero() {
                    forward = true;
                }
                if !d.at(y, x)?.is_zero() {
                    backward = true;
                }
            }
            if !forward && !backward {
                return Ok(SeparationClass::Neither { witness: (x, y) });
            }
            if !forward && t1_failure.is_none() {
                t1_failure = Some((x, y));
            }
        }
    }
    Ok(match t1_failure {
        None => SeparationClass::T1,
        Some(w) => SeparationClass::T0 { t1_failure: w },
    })
}

impl SeparationClass {
    pub fn is_t1(&self) -> bool {
        matches!(self, SeparationClass::T1)
    }

    pub fn at_least_t0(&self) -> bool {
        !matches!(self, SeparationClass::Neither { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            SeparationClass::T1 => "T1",
            SeparationClass::T0 { .. } => "T0",
            SeparationClass::Neither { .. } => "neither",
        }
    }
}

/// Left K-Cauchy: for every threshold, eventually d(x_n, x_{n+k}) < eps for
/// all k. Right K-Cauchy swaps the arguments.
pub fn is_k_cauchy(
    seq: &SequenceSpec,
    gauge: &FQuasiGauge,
    side: CauchySide,
    schedule: &[Rat],
) -> Result<Verdict> {
    let n = gauge.dim()?;
    seq.validate(n)?;
    match seq {
        SequenceSpec::EventuallyConstant { .. } => {
            // Increments are eventually d(t,t) = 0 in both directions.
            Ok(Verdict::Exact(true))
        }
        SequenceSpec::Prefix(terms) => {
            // Worst increment starting at each index within the prefix.
            let mut worst: Vec<Rat> = Vec::with_capacity(terms.len());
            for i in 0..terms.len() {
                let mut m = Rat::zero();
                for j in (i + 1)..terms.len() {
                    let (a, b) = match side {
                        CauchySide::Left => (terms[i], terms[j]),
                        CauchySide::Right => (terms[j], terms[i]),
                    };
                    for d in &gauge.members {
                        let v = d.at(a, b)?;
                        if *v > m {
                            m = v.clone();
                        }
                    }
                }
                worst.push(m);
            }
            Ok(Verdict::ConsistentUpTo {
                depth: terms.len(),
                settled: settle_indices(&worst, schedule),
            })
        }
    }
}

/// Per-(sequence, limit) semicontinuity report. `lsc` is always decided;
/// the class verdicts are None when the sequence does not satisfy that
/// class's hypothesis (the inequality is vacuous for this pair).
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub limit_value: ExtendedRational,
    pub value_at_limit: ExtendedRational,
    pub seq_strictly_decreasing: bool,
    pub seq_nonincreasing: bool,
    pub seq_pairwise_distinct: bool,
    pub lsc: bool,
    pub decreasingly_lsc: Option<bool>,
    pub strict_decreasingly_lsc: Option<bool>,
    pub nearly_lsc: Option<bool>,
}

fn class_report(
    value_at_limit: ExtendedRational,
    limit_value: ExtendedRational,
    seq_strictly_decreasing: bool,
    seq_nonincreasing: bool,
    seq_pairwise_distinct: bool,
) -> ClassReport {
    let lsc = value_at_limit <= limit_value;
    ClassReport {
        limit_value,
        value_at_limit,
        seq_strictly_decreasing,
        seq_nonincreasing,
        seq_pairwise_distinct,
        lsc,
        decreasingly_lsc: seq_nonincreasing.then_some(lsc),
        strict_decreasingly_lsc: seq_strictly_decreasing.then_some(lsc),
        nearly_lsc: seq_pairwise_distinct.then_some(lsc),
    }
}

/// Semicontinuity of a finite-instance objective along an eventually
/// constant sequence converging to y (the only finite sequences with an
/// exact value limit).
pub fn classify_semicontinuity(
    values: &[ExtendedRational],
    seq: &SequenceSpec,
    y: usize,
    gauge: &FQuasiGauge,
) -> Result<ClassReport> {
    let n = gauge.dim()?;
    seq.validate(n)?;
    if y >= n || values.len() != n {
        return Err(QvarError::Dimension("objective/limit shape mismatch".into()));
    }
    let tail = match seq {
        SequenceSpec::EventuallyConstant { tail, .. } => *tail,
        SequenceSpec::Prefix(_) => {
            return Err(QvarError::NotApplicable(
                "semicontinuity needs an exact value limit; prefix sequences have none".into(),
            ))
        }
    };
    if !converges_to(seq, y, gauge, &default_epsilon_schedule())?.holds_exactly() {
        return Err(QvarError::NotApplicable(
            "sequence does not converge to the given point".into(),
        ));
    }
    let terms = seq.known_terms();
    let fvals: Vec<&ExtendedRational> = terms.iter().map(|&t| &values[t]).collect();
    // The constant tail repeats equal values forever, so an eventually
    // constant sequence is never strictly decreasing or pairwise distinct.
    let strictly = false;
    let noninc = fvals.windows(2).all(|w| w[1] <= w[0]);
    let distinct = false;
    Ok(class_report(
        values[y].clone(),
        values[tail].clone(),
        strictly,
        noninc,
        distinct,
    ))
}

/// Semicontinuity of a catalog objective along a catalog sequence with an
/// exact convergence verdict to the rational point y.
pub fn classify_semicontinuity_catalog(
    f: &CatalogObjective,
    d: CatalogDistance,
    seq: &CatalogSequence,
    y: &Rat,
) -> Result<ClassReport> {
    if !converges_to_catalog(d, seq, y)? {
        return Err(QvarError::NotApplicable(
            "sequence does not converge to the given point".into(),
        ));
    }
    let behavior = catalog::objective_on_sequence(f, seq)?;
    Ok(class_report(
        f.eval(y),
        behavior.limit,
        behavior.strictly_decreasing,
        behavior.nonincreasing,
        seq.pairwise_distinct(),
    ))
}

/// s below t iff s lies in the closure of {t}: every gauge member gives
/// d(s,t) = 0.
pub fn specialization_preorder(gauge: &FQuasiGauge) -> Result<Relation> {
    let n = gauge.dim()?;
    let mut pairs = BTreeSet::new();
    for s in 0..n {
        for t in 0..n {
            let mut all_zero = true;
            for d in &gauge.members {
                if !d.at(s, t)?.is_zero() {
                    all_zero = false;
                    break;
                }
            }
            if all_zero {
                pairs.insert((s, t));
            }
        }
    }
    Ok(Relation { n, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_int, Finite};
    use crate::space::QuasiPseudometric;

    fn discrete_gauge(n: usize) -> FQuasiGauge {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| rat_int((i != j) as i64)).collect())
            .collect();
        FQuasiGauge::singleton(QuasiPseudometric::matrix("disc", rows))
    }

    fn zero_gauge(n: usize) -> FQuasiGauge {
        let rows: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
        FQuasiGauge::singleton(QuasiPseudometric::matrix("zero", rows))
    }

    /// d_u on the grid {0, 1}: d(i,j) = (j - i)^+ by index value.
    fn du_two_point_gauge() -> FQuasiGauge {
        let rows = vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ];
        FQuasiGauge::singleton(QuasiPseudometric::matrix("du", rows))
    }

    #[test]
    fn q4_catalog_sequence_has_two_limits() {
        let candidates = vec![
            ("0".to_string(), rat_int(0)),
            ("1/2".to_string(), rat(1, 2)),
            ("1".to_string(), rat_int(1)),
        ];
        let limits =
            limit_set_catalog(CatalogDistance::Q4, &CatalogSequence::OneOverN, &candidates)
                .unwrap();
        assert_eq!(limits, vec!["0", "1"]);
    }

    #[test]
    fn du_catalog_sequence_converges_only_to_zero() {
        let candidates = vec![
            ("0".to_string(), rat_int(0)),
            ("-1".to_string(), rat_int(-1)),
        ];
        let limits =
            limit_set_catalog(CatalogDistance::Du, &CatalogSequence::OneOverN, &candidates)
                .unwrap();
        assert_eq!(limits, vec!["0"]);
    }

    #[test]
    fn eventually_constant_sequence_converges_exactly() {
        let g = discrete_gauge(3);
        let seq = SequenceSpec::EventuallyConstant {
            prefix: vec![0, 1],
            tail: 2,
        };
        let sched = default_epsilon_schedule();
        assert_eq!(converges_to(&seq, 2, &g, &sched).unwrap(), Verdict::Exact(true));
        assert_eq!(converges_to(&seq, 0, &g, &sched).unwrap(), Verdict::Exact(false));
    }

    #[test]
    fn prefix_verdict_reports_settle_indices() {
        let g = discrete_gauge(2);
        let seq = SequenceSpec::Prefix(vec![1, 1, 0, 0, 0]);
        let sched = vec![rat_int(2), rat(1, 2)];
        match converges_to(&seq, 0, &g, &sched).unwrap() {
            Verdict::ConsistentUpTo { depth, settled } => {
                assert_eq!(depth, 5);
                assert_eq!(settled[0], (rat_int(2), Some(0)));
                assert_eq!(settled[1], (rat(1, 2), Some(2)));
            }
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn separation_classes_of_the_three_reference_gauges() {
        assert!(separation_class(&discrete_gauge(3)).unwrap().is_t1());
        assert_eq!(
            separation_class(&du_two_point_gauge()).unwrap(),
            SeparationClass::T0 { t1_failure: (1, 0) }
        );
        assert_eq!(
            separation_class(&zero_gauge(2)).unwrap(),
            SeparationClass::Neither { witness: (0, 1) }
        );
    }

    #[test]
    fn alternating_prefix_never_settles_below_one() {
        let g = discrete_gauge(2);
        let seq = SequenceSpec::Prefix(vec![0, 1, 0, 1, 0, 1]);
        let sched = vec![rat(1, 2)];
        for side in [CauchySide::Left, CauchySide::Right] {
            match is_k_cauchy(&seq, &g, side, &sched).unwrap() {
                Verdict::ConsistentUpTo { settled, .. } => {
                    // Only the final index (no successors) trivially settles.
                    assert_eq!(settled[0].1, Some(5));
                }
                v => panic!("unexpected verdict {v:?}"),
            }
        }
    }

    #[test]
    fn eventually_constant_is_k_cauchy_both_sides() {
        let g = discrete_gauge(3);
        let seq = SequenceSpec::EventuallyConstant {
            prefix: vec![0],
            tail: 1,
        };
        for side in [CauchySide::Left, CauchySide::Right] {
            assert_eq!(
                is_k_cauchy(&seq, &g, side, &default_epsilon_schedule()).unwrap(),
                Verdict::Exact(true)
            );
        }
    }

    #[test]
    fn step_function_fails_decreasing_lsc_at_zero() {
        // phi(x) = x for x >= 0, -1 for x < 0, along -1/n -> 0 under |.|.
        let r = classify_semicontinuity_catalog(
            &CatalogObjective::ExampleAPhi,
            CatalogDistance::StdAbs,
            &CatalogSequence::NegOneOverN,
            &rat_int(0),
        )
        .unwrap();
        assert_eq!(r.limit_value, ExtendedRational::from_int(-1));
        assert_eq!(r.value_at_limit, ExtendedRational::zero());
        assert_eq!(r.decreasingly_lsc, Some(false));
        assert!(!r.seq_strictly_decreasing);
        assert_eq!(r.strict_decreasingly_lsc, None);
    }

    #[test]
    fn second_step_function_is_decreasingly_lsc_at_zero() {
        // phi1(-1/n) = 1 for all n, phi1(0) = 1: inequality holds.
        let r = classify_semicontinuity_catalog(
            &CatalogObjective::ExampleAPhi1,
            CatalogDistance::StdAbs,
            &CatalogSequence::NegOneOverN,
            &rat_int(0),
        )
        .unwrap();
        assert_eq!(r.limit_value, ExtendedRational::from_int(1));
        assert_eq!(r.decreasingly_lsc, Some(true));
    }

    #[test]
    fn dirichlet_admits_no_strictly_decreasing_sequences() {
        for seq in [
            CatalogSequence::OneOverN,
            CatalogSequence::NegOneOverN,
            CatalogSequence::Constant(rat(1, 3)),
        ] {
            let b = catalog::objective_on_sequence(&CatalogObjective::Dirichlet, &seq).unwrap();
            assert!(!b.strictly_decreasing);
        }
        let r = classify_semicontinuity_catalog(
            &CatalogObjective::Dirichlet,
            CatalogDistance::StdAbs,
            &CatalogSequence::OneOverN,
            &rat_int(0),
        )
        .unwrap();
        assert_eq!(r.strict_decreasingly_lsc, None);
        assert!(r.lsc);
    }

    #[test]
    fn t1_gauge_specializes_to_diagonal() {
        let g = discrete_gauge(4);
        assert_eq!(specialization_preorder(&g).unwrap(), Relation::diagonal(4));
        assert_eq!(specialization_preorder(&zero_gauge(2)).unwrap(), Relation::full(2));
        let du = du_two_point_gauge();
        let r = specialization_preorder(&du).unwrap();
        assert!(r.contains(1, 0) && r.contains(0, 0) && r.contains(1, 1) && !r.contains(0, 1));
    }

    #[test]
    fn residual_limit_matches_value_at_zero() {
        let f = catalog::closed_graph_residual(
            crate::catalog::CatalogMap::Identity,
            crate::catalog::CatalogMap::Square,
            CatalogDistance::StdAbs,
            crate::catalog::CatalogSpace::UnitIntervalQ,
        )
        .unwrap();
        let r = classify_semicontinuity_catalog(
            &f,
            CatalogDistance::StdAbs,
            &CatalogSequence::OneOverN,
            &rat_int(0),
        )
        .unwrap();
        assert_eq!(r.limit_value, ExtendedRational::zero());
        assert_eq!(r.value_at_limit, ExtendedRational::zero());
        assert!(r.lsc);
        assert_eq!(r.value_at_limit, Finite(Rat::zero()));
    }
}
