//! Built-in catalog of countable ground sets, distances, objectives,
//! sequences and successor rules with exact evaluation at rational points.
//!
//! Countable instances are restricted to this closed catalog: every entry
//! carries hand-verified axiom knowledge (triangle inequality, tail behavior
//! of the listed sequences), so verdicts on countable instances are exact
//! rather than sampled.

use num::{Signed, Zero};

use crate::error::{QvarError, Result};
use crate::rational::{rat_int, ExtendedRational, Finite, Infinity, Rat};

/// Countable ground sets supported by the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogSpace {
    /// [0,1] intersected with Q.
    UnitIntervalQ,
    /// All of Q.
    RationalLine,
}

impl CatalogSpace {
    pub fn id(&self) -> &'static str {
        match self {
            CatalogSpace::UnitIntervalQ => "unit-interval",
            CatalogSpace::RationalLine => "rational-line",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unit-interval" => Ok(CatalogSpace::UnitIntervalQ),
            "rational-line" => Ok(CatalogSpace::RationalLine),
            _ => Err(QvarError::UnknownCatalog(format!("space {s:?}"))),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            CatalogSpace::UnitIntervalQ => !x.is_negative() && *x <= rat_int(1),
            CatalogSpace::RationalLine => true,
        }
    }
}

/// Catalog quasi-pseudometrics, exactly evaluable at rational arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogDistance {
    /// The quasi-metric q4 on [0,1]: y-x for x<=y; 1+y-x for x>y except
    /// (1,0); 1 at (1,0).
    Q4,
    /// d_u(x,y) = (y-x)^+ from the asymmetric seminorm u(a) = a^+.
    Du,
    /// The standard metric |x-y|.
    StdAbs,
}

impl CatalogDistance {
    pub fn id(&self) -> &'static str {
        match self {
            CatalogDistance::Q4 => "q4",
            CatalogDistance::Du => "du",
            CatalogDistance::StdAbs => "std-abs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "q4" => Ok(CatalogDistance::Q4),
            "du" => Ok(CatalogDistance::Du),
            "std-abs" => Ok(CatalogDistance::StdAbs),
            _ => Err(QvarError::UnknownCatalog(format!("distance {s:?}"))),
        }
    }

    /// Space the entry is certified on.
    pub fn space(&self) -> CatalogSpace {
        match self {
            CatalogDistance::Q4 => CatalogSpace::UnitIntervalQ,
            CatalogDistance::Du | CatalogDistance::StdAbs => CatalogSpace::RationalLine,
        }
    }

    /// All three entries satisfy (QM1)-(QM3); certified by hand plus the
    /// brute-force grid checks in the test suite.
    pub fn is_quasi_metric(&self) -> bool {
        true
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        match self {
            CatalogDistance::Q4 => {
                let one = rat_int(1);
                if x <= y {
                    y - x
                } else if *x == one && y.is_zero() {
                    one
                } else {
                    one + y - x
                }
            }
            CatalogDistance::Du => {
                let diff = y - x;
                if diff.is_positive() {
                    diff
                } else {
                    Rat::zero()
                }
            }
            CatalogDistance::StdAbs => (x - y).abs(),
        }
    }
}

/// Catalog objectives with exact evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogObjective {
    /// f(x) = x.
    Identity,
    /// phi(x) = x for x >= 0, -1 for x < 0.
    ExampleAPhi,
    /// phi1(x) = -x for x > 0, 1 for x <= 0.
    ExampleAPhi1,
    /// 0 on Q, 1 off Q; the ground sets here are rational, so it evaluates
    /// to 0 everywhere on them.
    Dirichlet,
    /// Residual f(x) = d2(h(x), g(x)) on the domain of g, +inf outside.
    Residual {
        h: CatalogMap,
        g: CatalogMap,
        metric2: CatalogDistance,
        domain: CatalogSpace,
    },
}

impl CatalogObjective {
    pub fn id(&self) -> String {
        match self {
            CatalogObjective::Identity => "identity".into(),
            CatalogObjective::ExampleAPhi => "example-a-phi".into(),
            CatalogObjective::ExampleAPhi1 => "example-a-phi1".into(),
            CatalogObjective::Dirichlet => "dirichlet".into(),
            CatalogObjective::Residual { h, g, metric2, domain } => format!(
                "residual:{}:{}:{}:{}",
                h.id(),
                g.id(),
                metric2.id(),
                domain.id()
            ),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CatalogObjective::Identity),
            "example-a-phi" => Ok(CatalogObjective::ExampleAPhi),
            "example-a-phi1" => Ok(CatalogObjective::ExampleAPhi1),
            "dirichlet" => Ok(CatalogObjective::Dirichlet),
            other => {
                if let Some(rest) = other.strip_prefix("residual:") {
                    let parts: Vec<&str> = rest.split(':').collect();
                    if parts.len() != 4 {
                        return Err(QvarError::UnknownCatalog(format!("objective {s:?}")));
                    }
                    closed_graph_residual(
                        CatalogMap::parse(parts[0])?,
                        CatalogMap::parse(parts[1])?,
                        CatalogDistance::parse(parts[2])?,
                        CatalogSpace::parse(parts[3])?,
                    )
                } else {
                    Err(QvarError::UnknownCatalog(format!("objective {s:?}")))
                }
            }
        }
    }

    pub fn eval(&self, x: &Rat) -> ExtendedRational {
        match self {
            CatalogObjective::Identity => Finite(x.clone()),
            CatalogObjective::ExampleAPhi => {
                if x.is_negative() {
                    Finite(rat_int(-1))
                } else {
                    Finite(x.clone())
                }
            }
            CatalogObjective::ExampleAPhi1 => {
                if x.is_positive() {
                    Finite(-x.clone())
                } else {
                    Finite(rat_int(1))
                }
            }
            CatalogObjective::Dirichlet => Finite(Rat::zero()),
            CatalogObjective::Residual { h, g, metric2, domain } => {
                if domain.contains(x) {
                    Finite(metric2.eval(&h.eval(x), &g.eval(x)))
                } else {
                    Infinity
                }
            }
        }
    }
}

/// Catalog point maps used by the residual construction and successor rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogMap {
    Identity,
    Square,
    Halve,
}

impl CatalogMap {
    pub fn id(&self) -> &'static str {
        match self {
            CatalogMap::Identity => "identity",
            CatalogMap::Square => "square",
            CatalogMap::Halve => "halve",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CatalogMap::Identity),
            "square" => Ok(CatalogMap::Square),
            "halve" => Ok(CatalogMap::Halve),
            _ => Err(QvarError::UnknownCatalog(format!("map {s:?}"))),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        match self {
            CatalogMap::Identity => x.clone(),
            CatalogMap::Square => x * x,
            CatalogMap::Halve => x / rat_int(2),
        }
    }

    /// Whether the map, restricted to the given domain, has a closed graph
    /// in the standard topology. The catalog maps are all continuous.
    pub fn has_closed_graph(&self, _domain: &CatalogSpace) -> bool {
        true
    }

    /// Whether the map is continuous on the whole ambient line.
    pub fn is_continuous(&self) -> bool {
        true
    }
}

/// Builds the residual objective f(x) = metric2(h(x), g(x)) on `domain`,
/// +inf outside. Requires a closed-graph certificate for g and continuity
/// of h, which guarantees that the residual vanishes at limits of
/// zero-residual sequences.
pub fn closed_graph_residual(
    h: CatalogMap,
    g: CatalogMap,
    metric2: CatalogDistance,
    domain: CatalogSpace,
) -> Result<CatalogObjective> {
    if !h.is_continuous() {
        return Err(QvarError::InvalidArgument(format!(
            "map {} lacks a continuity certificate",
            h.id()
        )));
    }
    if !g.has_closed_graph(&domain) {
        return Err(QvarError::InvalidArgument(format!(
            "map {} lacks a closed-graph certificate on {}",
            g.id(),
            domain.id()
        )));
    }
    // The vanishing-at-limits property needs metric2 continuous; q4 is not.
    if metric2 == CatalogDistance::Q4 {
        return Err(QvarError::NotApplicable(
            "residual target metric must be continuous".into(),
        ));
    }
    Ok(CatalogObjective::Residual { h, g, metric2, domain })
}

/// Catalog sequences with known tail behavior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogSequence {
    /// x_n = 1/n, n >= 1.
    OneOverN,
    /// x_n = -1/n, n >= 1.
    NegOneOverN,
    /// x_n = c for all n.
    Constant(Rat),
}

impl CatalogSequence {
    pub fn id(&self) -> String {
        match self {
            CatalogSequence::OneOverN => "one-over-n".into(),
            CatalogSequence::NegOneOverN => "neg-one-over-n".into(),
            CatalogSequence::Constant(c) => format!("const:{}", crate::rational::format_rat(c)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one-over-n" => Ok(CatalogSequence::OneOverN),
            "neg-one-over-n" => Ok(CatalogSequence::NegOneOverN),
            other => {
                if let Some(c) = other.strip_prefix("const:") {
                    Ok(CatalogSequence::Constant(crate::rational::parse_rat(c)?))
                } else {
                    Err(QvarError::UnknownCatalog(format!("sequence {s:?}")))
                }
            }
        }
    }

    /// n is 1-based.
    pub fn term(&self, n: u64) -> Rat {
        assert!(n >= 1);
        match self {
            CatalogSequence::OneOverN => Rat::new(1.into(), n.into()),
            CatalogSequence::NegOneOverN => Rat::new((-1).into(), n.into()),
            CatalogSequence::Constant(c) => c.clone(),
        }
    }

    pub fn in_space(&self, space: &CatalogSpace) -> bool {
        match self {
            CatalogSequence::OneOverN => true,
            CatalogSequence::NegOneOverN => *space == CatalogSpace::RationalLine,
            CatalogSequence::Constant(c) => space.contains(c),
        }
    }

    /// Pairwise distinctness of the sequence points.
    pub fn pairwise_distinct(&self) -> bool {
        !matches!(self, CatalogSequence::Constant(_))
    }
}

/// lim_n d(c, x_n), exact. The limit exists for every catalog pair below.
pub fn dist_limit(d: CatalogDistance, c: &Rat, seq: &CatalogSequence) -> Result<Rat> {
    let one = rat_int(1);
    match (d, seq) {
        (_, CatalogSequence::Constant(a)) => Ok(d.eval(c, a)),
        // q4 with x_n = 1/n: c = 0 gives q4(0,1/n) = 1/n -> 0; for c > 0 the
        // branch x > y applies eventually (y = 1/n != 0), giving 1 + 1/n - c.
        (CatalogDistance::Q4, CatalogSequence::OneOverN) => {
            if !CatalogSpace::UnitIntervalQ.contains(c) {
                return Err(QvarError::InvalidArgument(
                    "q4 limit point outside [0,1]".into(),
                ));
            }
            if c.is_zero() {
                Ok(Rat::zero())
            } else {
                Ok(one - c)
            }
        }
        (CatalogDistance::Q4, CatalogSequence::NegOneOverN) => Err(QvarError::InvalidArgument(
            "sequence -1/n leaves the q4 ground set [0,1]".into(),
        )),
        // d_u and |.| are continuous, so the limit is the distance to 0.
        (CatalogDistance::Du | CatalogDistance::StdAbs, _) => Ok(d.eval(c, &Rat::zero())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CauchySide {
    Left,
    Right,
}

/// Exact K-Cauchy verdicts for catalog (distance, sequence) pairs, with a
/// short justification. For the Left verdict the relevant quantity is
/// d(x_n, x_{n+k}); for Right it is d(x_{n+k}, x_n).
pub fn k_cauchy(d: CatalogDistance, seq: &CatalogSequence, side: CauchySide) -> Result<(bool, String)> {
    use CatalogDistance::*;
    use CatalogSequence::*;
    use CauchySide::*;
    let v = match (d, seq, side) {
        (_, Constant(_), _) => (true, "constant sequence".into()),
        (StdAbs, OneOverN | NegOneOverN, _) => {
            (true, "|x_{n+k} - x_n| <= 1/n".into())
        }
        (Du, OneOverN, Left) => (true, "(x_{n+k} - x_n)^+ = 0 for a decreasing sequence".into()),
        (Du, OneOverN, Right) => (true, "(x_n - x_{n+k})^+ <= 1/n".into()),
        (Du, NegOneOverN, Left) => (true, "(x_{n+k} - x_n)^+ <= 1/n".into()),
        (Du, NegOneOverN, Right) => {
            (true, "(x_n - x_{n+k})^+ = 0 for an increasing sequence".into())
        }
        (Q4, OneOverN, Right) => (
            true,
            "q4(x_{n+k}, x_n) = 1/n - 1/(n+k) <= 1/n since x_{n+k} <= x_n".into(),
        ),
        (Q4, OneOverN, Left) => (
            false,
            "q4(x_n, x_{n+k}) = 1 + 1/(n+k) - 1/n >= 1/2 at every index; witness eps = 1/2"
                .into(),
        ),
        (Q4, NegOneOverN, _) => {
            return Err(QvarError::InvalidArgument(
                "sequence -1/n leaves the q4 ground set [0,1]".into(),
            ))
        }
    };
    Ok(v)
}

/// Exact behavior of (f(x_n)) along a catalog sequence.
#[derive(Clone, Debug)]
pub struct SeqObjectiveBehavior {
    pub limit: ExtendedRational,
    pub strictly_decreasing: bool,
    pub nonincreasing: bool,
}

pub fn objective_on_sequence(
    obj: &CatalogObjective,
    seq: &CatalogSequence,
) -> Result<SeqObjectiveBehavior> {
    use CatalogObjective::*;
    use CatalogSequence::*;
    let b = match (obj, seq) {
        (o, Constant(c)) => SeqObjectiveBehavior {
            limit: o.eval(c),
            strictly_decreasing: false,
            nonincreasing: true,
        },
        // f(1/n) = 1/n, strictly decreasing to 0.
        (Identity, OneOverN) | (ExampleAPhi, OneOverN) => SeqObjectiveBehavior {
            limit: ExtendedRational::zero(),
            strictly_decreasing: true,
            nonincreasing: true,
        },
        // f(-1/n) = -1/n, strictly increasing to 0.
        (Identity, NegOneOverN) => SeqObjectiveBehavior {
            limit: ExtendedRational::zero(),
            strictly_decreasing: false,
            nonincreasing: false,
        },
        // phi(-1/n) = -1 for all n.
        (ExampleAPhi, NegOneOverN) => SeqObjectiveBehavior {
            limit: ExtendedRational::from_int(-1),
            strictly_decreasing: false,
            nonincreasing: true,
        },
        // phi1(1/n) = -1/n, strictly increasing to 0.
        (ExampleAPhi1, OneOverN) => SeqObjectiveBehavior {
            limit: ExtendedRational::zero(),
            strictly_decreasing: false,
            nonincreasing: false,
        },
        // phi1(-1/n) = 1 for all n.
        (ExampleAPhi1, NegOneOverN) => SeqObjectiveBehavior {
            limit: ExtendedRational::from_int(1),
            strictly_decreasing: false,
            nonincreasing: true,
        },
        // All sequence points are rational.
        (Dirichlet, _) => SeqObjectiveBehavior {
            limit: ExtendedRational::zero(),
            strictly_decreasing: false,
            nonincreasing: true,
        },
        (Residual { h, g, metric2, domain }, OneOverN) => {
            if !domain.contains(&rat_int(1)) {
                return Err(QvarError::InvalidArgument(
                    "sequence 1/n leaves the residual domain".into(),
                ));
            }
            // h, g and the (continuous) target metric are continuous, so the
            // limit is the residual at 0. For monotonicity the first 8 terms
            // decide the whole sequence: with t = 1/n, the residual is |p(t)|
            // or p(t)^+ for a polynomial p = g - h of degree <= 2 vanishing
            // at 0, and every such catalog p has |p| nondecreasing on
            // (0, 1/4]. A single equal consecutive pair there forces p
            // constant, so the verdict on n = 1..8 extends to the tail.
            let zero = Rat::zero();
            let limit = Finite(metric2.eval(&h.eval(&zero), &g.eval(&zero)));
            let terms: Vec<ExtendedRational> =
                (1..=8).map(|n| obj.eval(&CatalogSequence::OneOverN.term(n))).collect();
            let strictly_decreasing = terms.windows(2).all(|w| w[1] < w[0]);
            let nonincreasing = terms.windows(2).all(|w| w[1] <= w[0]);
            SeqObjectiveBehavior { limit, strictly_decreasing, nonincreasing }
        }
        (Residual { .. }, NegOneOverN) => {
            return Err(QvarError::InvalidArgument(
                "f is +inf on every term of -1/n for this residual".into(),
            ))
        }
    };
    Ok(b)
}

/// Catalog successor rules for the eta-iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogRule {
    /// x' = x/2.
    Halving,
}

impl CatalogRule {
    pub fn id(&self) -> &'static str {
        match self {
            CatalogRule::Halving => "halving",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "halving" => Ok(CatalogRule::Halving),
            _ => Err(QvarError::UnknownCatalog(format!("rule {s:?}"))),
        }
    }

    pub fn successor(&self, x: &Rat) -> Rat {
        match self {
            CatalogRule::Halving => x / rat_int(2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn q4_matches_reference_values() {
        let q4 = CatalogDistance::Q4;
        // q4(0, 1/n) = q4(1, 1/n) = 1/n
        for n in 1..=10i64 {
            let xn = rat(1, n);
            assert_eq!(q4.eval(&rat_int(0), &xn), rat(1, n));
            if n > 1 {
                assert_eq!(q4.eval(&rat_int(1), &xn), rat(1, n));
            }
        }
        assert_eq!(q4.eval(&rat_int(1), &rat_int(0)), rat_int(1));
        assert_eq!(q4.eval(&rat(1, 2), &rat_int(0)), rat(1, 2));
    }

    #[test]
    fn q4_triangle_brute_force_on_fine_grid() {
        // Independent check that q4 really is a quasi-metric on [0,1]:
        // brute-force the triangle inequality over a rational grid.
        let q4 = CatalogDistance::Q4;
        let grid: Vec<Rat> = (0..=8).map(|k| rat(k, 8)).collect();
        for x in &grid {
            assert!(q4.eval(x, x).is_zero());
            for y in &grid {
                assert!(!q4.eval(x, y).is_negative());
                if x != y {
                    // T1 for the singleton gauge: forward distance positive.
                    assert!(q4.eval(x, y).is_positive() || q4.eval(y, x).is_positive());
                }
                for z in &grid {
                    assert!(
                        q4.eval(x, z) <= q4.eval(x, y) + q4.eval(y, z),
                        "triangle fails at {x} {y} {z}"
                    );
                }
            }
        }
    }

    #[test]
    fn du_is_asymmetric() {
        let du = CatalogDistance::Du;
        assert_eq!(du.eval(&rat_int(0), &rat_int(1)), rat_int(1));
        assert!(du.eval(&rat_int(1), &rat_int(0)).is_zero());
    }

    #[test]
    fn q4_limits_of_one_over_n() {
        let lim0 = dist_limit(CatalogDistance::Q4, &rat_int(0), &CatalogSequence::OneOverN).unwrap();
        let lim1 = dist_limit(CatalogDistance::Q4, &rat_int(1), &CatalogSequence::OneOverN).unwrap();
        let lim_half =
            dist_limit(CatalogDistance::Q4, &rat(1, 2), &CatalogSequence::OneOverN).unwrap();
        assert!(lim0.is_zero());
        assert!(lim1.is_zero());
        assert_eq!(lim_half, rat(1, 2));
    }

    #[test]
    fn q4_one_over_n_right_but_not_left_k_cauchy() {
        let (right, _) = k_cauchy(CatalogDistance::Q4, &CatalogSequence::OneOverN, CauchySide::Right)
            .unwrap();
        let (left, _) = k_cauchy(CatalogDistance::Q4, &CatalogSequence::OneOverN, CauchySide::Left)
            .unwrap();
        assert!(right);
        assert!(!left);
    }

    #[test]
    fn residual_example_values() {
        let f = closed_graph_residual(
            CatalogMap::Identity,
            CatalogMap::Square,
            CatalogDistance::StdAbs,
            CatalogSpace::UnitIntervalQ,
        )
        .unwrap();
        // f(x) = x - x^2 on [0,1]; zeros exactly {0, 1}.
        assert_eq!(f.eval(&rat(1, 2)), Finite(rat(1, 4)));
        assert_eq!(f.eval(&rat_int(0)), ExtendedRational::zero());
        assert_eq!(f.eval(&rat_int(1)), ExtendedRational::zero());
        assert_eq!(f.eval(&rat_int(2)), Infinity);
        // f(1/n) = 1/n - 1/n^2 -> 0 with f(0) = 0.
        let b = objective_on_sequence(&f, &CatalogSequence::OneOverN).unwrap();
        assert_eq!(b.limit, ExtendedRational::zero());
    }

    #[test]
    fn identical_maps_give_zero_residual() {
        let f = closed_graph_residual(
            CatalogMap::Identity,
            CatalogMap::Identity,
            CatalogDistance::StdAbs,
            CatalogSpace::UnitIntervalQ,
        )
        .unwrap();
        assert_eq!(f.eval(&rat(3, 4)), ExtendedRational::zero());
        assert_eq!(f.eval(&rat_int(-1)), Infinity);
    }
}
