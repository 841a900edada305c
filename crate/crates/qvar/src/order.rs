//! The objective-induced order, its lower sections, and the minimal-element
//! descent that powers every solver.
//!
//! Orientation, fixed once: `leq_phi(phi, gauge, x, y)` holds iff
//! phi(y) + d(y,x) <= phi(x) for every gauge member d, read as "y sits below
//! x". `lower_section(x)` collects everything below x, and a point is
//! minimal when its lower section is just itself.

use crate::error::{QvarError, Result};
use crate::rational::ExtendedRational;
use crate::space::FQuasiGauge;
use crate::topology::{separation_class, SeparationClass};

/// A proper, bounded-below objective on a finite instance, with the exact
/// infimum recorded at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub name: String,
    pub values: Vec<ExtendedRational>,
    /// inf over the point set; finite because the objective is proper and
    /// the instance finite.
    pub alpha: ExtendedRational,
}

impl Objective {
    pub fn new(name: &str, values: Vec<ExtendedRational>) -> Result<Self> {
        let alpha = values
            .iter()
            .filter(|v| v.is_finite())
            .min()
            .cloned()
            .ok_or_else(|| {
                QvarError::Hypothesis(format!("objective {name} is not proper (no finite value)"))
            })?;
        Ok(Objective {
            name: name.into(),
            values,
            alpha,
        })
    }

    pub fn at(&self, i: usize) -> Result<&ExtendedRational> {
        self.values
            .get(i)
            .ok_or_else(|| QvarError::Dimension(format!("point index {i} out of range")))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest-index point attaining the infimum.
    pub fn argmin(&self) -> usize {
        self.values
            .iter()
            .position(|v| *v == self.alpha)
            .expect("alpha is attained on a finite instance")
    }
}

/// phi(y) + d(y,x) <= phi(x) for every gauge member. Inequalities against
/// +inf on the right always hold; +inf on the left only against +inf.
pub fn leq_phi(phi: &Objective, gauge: &FQuasiGauge, x: usize, y: usize) -> Result<bool> {
    let fx = phi.at(x)?;
    let fy = phi.at(y)?;
    for d in &gauge.members {
        if fy.add_rat(d.at(y, x)?) > *fx {
            return Ok(false);
        }
    }
    Ok(true)
}

/// S_phi(x) = {y : leq_phi(x, y)}, ascending by index; always contains x.
pub fn lower_section(phi: &Objective, gauge: &FQuasiGauge, x: usize) -> Result<Vec<usize>> {
    let n = gauge.dim()?;
    let mut out = Vec::new();
    for y in 0..n {
        if leq_phi(phi, gauge, x, y)? {
            out.push(y);
        }
    }
    Ok(out)
}

pub fn is_minimal(phi: &Objective, gauge: &FQuasiGauge, z: usize) -> Result<bool> {
    Ok(lower_section(phi, gauge, z)? == vec![z])
}

/// The strictly descending chain visited by the descent, start first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentTrace {
    pub chain: Vec<usize>,
}

/// Descends from `start` to a minimal element of the order: at each step
/// the successor is the point of minimal objective value in the lower
/// section minus the point itself, ties broken by smallest index.
///
/// Requires a T1 instance (so the objective strictly decreases per step and
/// the descent terminates in at most n steps), a proper objective, and a
/// start inside its domain.
pub fn minimal_element(
    phi: &Objective,
    gauge: &FQuasiGauge,
    start: usize,
) -> Result<(usize, DescentTrace)> {
    let n = gauge.dim()?;
    if phi.len() != n {
        return Err(QvarError::Dimension(
            "objective length differs from point count".into(),
        ));
    }
    let sep = separation_class(gauge)?;
    if !sep.is_t1() {
        return Err(QvarError::Hypothesis(format!(
            "minimal-element descent requires a T1 instance, got {}",
            sep.label()
        )));
    }
    if !phi.at(start)?.is_finite() {
        return Err(QvarError::Hypothesis(
            "descent start has infinite objective value".into(),
        ));
    }
    let mut chain = vec![start];
    let mut x = start;
    for _ in 0..=n {
        let below: Vec<usize> = lower_section(phi, gauge, x)?
            .into_iter()
            .filter(|&y| y != x)
            .collect();
        let next = below.into_iter().min_by(|&a, &b| {
            phi.values[a].cmp(&phi.values[b]).then(a.cmp(&b))
        });
        match next {
            None => return Ok((x, DescentTrace { chain })),
            Some(y) => {
                chain.push(y);
                x = y;
            }
        }
    }
    // On T1 instances the objective strictly decreases along the chain, so
    // more than n steps means the preconditions were not really met.
    Err(QvarError::Verification(
        "descent failed to terminate within n steps".into(),
    ))
}

/// Convenience guard shared by the solvers.
pub fn require_t1(gauge: &FQuasiGauge) -> Result<SeparationClass> {
    let sep = separation_class(gauge)?;
    if !sep.is_t1() {
        return Err(QvarError::Hypothesis(format!(
            "solver requires a T1 instance, got {}",
            sep.label()
        )));
    }
    Ok(sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_int, ExtendedRational as ER, Infinity, Rat};
    use crate::space::QuasiPseudometric;
    use num::Zero;

    fn gauge_from(rows: Vec<Vec<Rat>>) -> FQuasiGauge {
        FQuasiGauge::singleton(QuasiPseudometric::matrix("d", rows))
    }

    /// The two-point reference: d(b,a) = 1, d(a,b) = 1, phi(a) = 2,
    /// phi(b) = 1.
    fn two_point() -> (Objective, FQuasiGauge) {
        let g = gauge_from(vec![
            vec![Rat::zero(), rat_int(1)],
            vec![rat_int(1), Rat::zero()],
        ]);
        let phi = Objective::new("phi", vec![ER::from_int(2), ER::from_int(1)]).unwrap();
        (phi, g)
    }

    #[test]
    fn two_point_order_table() {
        let (phi, g) = two_point();
        assert!(leq_phi(&phi, &g, 0, 1).unwrap());
        assert!(!leq_phi(&phi, &g, 1, 0).unwrap());
        assert!(leq_phi(&phi, &g, 0, 0).unwrap());
        assert_eq!(lower_section(&phi, &g, 0).unwrap(), vec![0, 1]);
        assert_eq!(lower_section(&phi, &g, 1).unwrap(), vec![1]);
    }

    #[test]
    fn infinite_value_points_sit_above_everything() {
        let g = gauge_from(vec![
            vec![Rat::zero(), rat_int(1)],
            vec![rat_int(1), Rat::zero()],
        ]);
        let phi = Objective::new("phi", vec![Infinity, ER::zero()]).unwrap();
        assert!(leq_phi(&phi, &g, 0, 1).unwrap());
        assert!(!leq_phi(&phi, &g, 1, 0).unwrap());
        assert!(leq_phi(&phi, &g, 0, 0).unwrap());
    }

    #[test]
    fn improper_objective_rejected() {
        assert!(Objective::new("bad", vec![Infinity, Infinity]).is_err());
    }

    #[test]
    fn constant_objective_with_positive_distances_is_pointwise_minimal() {
        let g = gauge_from(vec![
            vec![Rat::zero(), rat_int(1), rat_int(1)],
            vec![rat_int(1), Rat::zero(), rat_int(1)],
            vec![rat_int(1), rat_int(1), Rat::zero()],
        ]);
        let phi = Objective::new("c", vec![ER::zero(); 3]).unwrap();
        for x in 0..3 {
            assert_eq!(lower_section(&phi, &g, x).unwrap(), vec![x]);
            assert!(is_minimal(&phi, &g, x).unwrap());
        }
    }

    #[test]
    fn descent_reaches_the_two_point_minimum() {
        let (phi, g) = two_point();
        let (z, trace) = minimal_element(&phi, &g, 0).unwrap();
        assert_eq!(z, 1);
        assert_eq!(trace.chain, vec![0, 1]);
        let (z1, trace1) = minimal_element(&phi, &g, 1).unwrap();
        assert_eq!(z1, 1);
        assert_eq!(trace1.chain, vec![1]);
    }

    #[test]
    fn descent_refuses_non_t1_instances() {
        let g = gauge_from(vec![
            vec![Rat::zero(), Rat::zero()],
            vec![rat_int(1), Rat::zero()],
        ]);
        let phi = Objective::new("phi", vec![ER::zero(), ER::zero()]).unwrap();
        assert!(matches!(
            minimal_element(&phi, &g, 0),
            Err(QvarError::Hypothesis(_))
        ));
    }

    #[test]
    fn descent_tie_break_prefers_smaller_value_then_smaller_index() {
        // From point 0 both 1 and 2 are below with equal objective values;
        // index 1 must be chosen, and it is already minimal.
        let big = rat_int(10);
        let g = gauge_from(vec![
            vec![Rat::zero(), big.clone(), big.clone()],
            vec![rat_int(1), Rat::zero(), big.clone()],
            vec![rat_int(1), big.clone(), Rat::zero()],
        ]);
        let phi =
            Objective::new("phi", vec![ER::from_int(5), ER::zero(), ER::zero()]).unwrap();
        let (z, trace) = minimal_element(&phi, &g, 0).unwrap();
        assert_eq!(z, 1);
        assert_eq!(trace.chain, vec![0, 1]);
    }

    #[test]
    fn strict_value_decrease_along_order_on_t1() {
        let (phi, g) = two_point();
        // leq_phi(x,y) with x != y forces phi(y) < phi(x) on T1 instances.
        for x in 0..2 {
            for y in 0..2 {
                if x != y && leq_phi(&phi, &g, x, y).unwrap() {
                    assert!(phi.values[y] < phi.values[x]);
                }
            }
        }
    }
}
