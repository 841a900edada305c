//! Finite binary relations on point indices: entourages generated by
//! distance thresholds, composition, inversion, sections, and the basis
//! axioms for a family of generators.

use std::collections::BTreeSet;

use num::Signed;

use crate::error::{QvarError, Result};
use crate::rational::Rat;
use crate::space::QuasiPseudometric;

/// A relation on {0..n-1}, stored as a sorted pair set so iteration order
/// and serialized form are deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub n: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            pairs: BTreeSet::new(),
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Relation {
            n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut pairs = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                pairs.insert((i, j));
            }
        }
        Relation { n, pairs }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn contains_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

/// V_{d,eps} = {(x,y) : d(x,y) < eps}; requires eps > 0.
pub fn entourage(d: &QuasiPseudometric, eps: &Rat) -> Result<Relation> {
    if !eps.is_positive() {
        return Err(QvarError::InvalidArgument(
            "entourage threshold must be positive".into(),
        ));
    }
    let rows = d.rows()?;
    let n = rows.len();
    let mut pairs = BTreeSet::new();
    for (x, row) in rows.iter().enumerate() {
        for (y, v) in row.iter().enumerate() {
            if v < eps {
                pairs.insert((x, y));
            }
        }
    }
    Ok(Relation { n, pairs })
}

/// R o S = {(x,z) : exists y with (x,y) in R and (y,z) in S}.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.n != s.n {
        return Err(QvarError::Dimension(
            "composing relations on different point sets".into(),
        ));
    }
    let mut pairs = BTreeSet::new();
    for &(x, y) in &r.pairs {
        for z in 0..s.n {
            if s.contains(y, z) {
                pairs.insert((x, z));
            }
        }
    }
    Ok(Relation { n: r.n, pairs })
}

pub fn invert(r: &Relation) -> Relation {
    Relation {
        n: r.n,
        pairs: r.pairs.iter().map(|&(x, y)| (y, x)).collect(),
    }
}

/// U(x) = {y : (x,y) in U}, ascending.
pub fn section(r: &Relation, x: usize) -> Result<Vec<usize>> {
    if x >= r.n {
        return Err(QvarError::Dimension(format!("point index {x} out of range")));
    }
    Ok(r.pairs
        .iter()
        .filter(|&&(a, _)| a == x)
        .map(|&(_, y)| y)
        .collect())
}

/// A finite list of (distance, positive threshold) generators, each standing
/// for the entourage V_{d,eps}.
#[derive(Clone, Debug)]
pub struct EntourageBasis {
    pub generators: Vec<(QuasiPseudometric, Rat)>,
}

impl EntourageBasis {
    pub fn relations(&self) -> Result<Vec<Relation>> {
        self.generators
            .iter()
            .map(|(d, eps)| entourage(d, eps))
            .collect()
    }

    /// Exhaustive check of the three basis axioms on the generated
    /// relations: each contains the diagonal; each pairwise intersection
    /// contains some generator; each generator B admits a generator C with
    /// C o C inside B. Returns one witness string per violation.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.generators.is_empty() {
            return Err(QvarError::InvalidArgument("empty entourage basis".into()));
        }
        let rels = self.relations()?;
        let n = rels[0].n;
        if rels.iter().any(|r| r.n != n) {
            return Err(QvarError::Dimension(
                "basis generators over different point sets".into(),
            ));
        }
        let mut violations = Vec::new();
        for (k, r) in rels.iter().enumerate() {
            if !r.contains_diagonal() {
                violations.push(format!("generator {k} does not contain the diagonal"));
            }
        }
        for (k, b) in rels.iter().enumerate() {
            let half = rels
                .iter()
                .any(|c| compose(c, c).map_or(false, |cc| cc.is_subset_of(b)));
            if !half {
                violations.push(format!(
                    "no generator C satisfies C o C inside generator {k}"
                ));
            }
        }
        for a in 0..rels.len() {
            for b in (a + 1)..rels.len() {
                let inter = Relation {
                    n,
                    pairs: rels[a].pairs.intersection(&rels[b].pairs).cloned().collect(),
                };
                if !rels.iter().any(|c| c.is_subset_of(&inter)) {
                    violations.push(format!(
                        "no generator inside the intersection of generators {a} and {b}"
                    ));
                }
            }
        }
        Ok(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::space::{conjugate, FQuasiGauge};

    fn discrete(n: usize) -> QuasiPseudometric {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| rat_int((i != j) as i64)).collect())
            .collect();
        QuasiPseudometric::matrix("disc", rows)
    }

    #[test]
    fn small_radius_on_discrete_metric_gives_diagonal() {
        let v = entourage(&discrete(4), &rat(1, 2)).unwrap();
        assert_eq!(v, Relation::diagonal(4));
    }

    #[test]
    fn nonpositive_threshold_rejected() {
        assert!(entourage(&discrete(2), &rat_int(0)).is_err());
        assert!(entourage(&discrete(2), &rat_int(-1)).is_err());
    }

    #[test]
    fn inverse_entourage_is_entourage_of_conjugate() {
        let d = QuasiPseudometric::matrix(
            "d",
            vec![
                vec![rat_int(0), rat(1, 3), rat_int(2)],
                vec![rat_int(1), rat_int(0), rat(1, 2)],
                vec![rat(1, 4), rat_int(3), rat_int(0)],
            ],
        );
        let dbar = conjugate(&d).unwrap();
        for eps in [rat(1, 4), rat(1, 2), rat_int(1), rat_int(3)] {
            assert_eq!(
                invert(&entourage(&d, &eps).unwrap()),
                entourage(&dbar, &eps).unwrap()
            );
        }
    }

    #[test]
    fn half_radius_composition_through_relax_witness() {
        // d with relax witness d' = 2d (a valid pair): V_{d',e/2} o V_{d',e/2}
        // must land inside V_{d,e}.
        let d = discrete(3);
        let rows2: Vec<Vec<Rat>> = d
            .rows()
            .unwrap()
            .iter()
            .map(|r| r.iter().map(|v| v * rat_int(2)).collect())
            .collect();
        let dp = QuasiPseudometric::matrix("d2", rows2);
        let g = FQuasiGauge {
            members: vec![d.clone(), dp.clone()],
            relax: vec![1, 1],
            symmetric: true,
        };
        assert!(crate::space::validate_f_quasi_gauge(&g, 3).unwrap().is_empty());
        for eps in [rat(1, 2), rat_int(1), rat_int(2)] {
            let half = entourage(&dp, &(&eps / rat_int(2))).unwrap();
            let target = entourage(&d, &eps).unwrap();
            assert!(compose(&half, &half).unwrap().is_subset_of(&target));
        }
    }

    #[test]
    fn section_lists_ascending() {
        let mut r = Relation::empty(4);
        r.pairs.extend([(1, 3), (1, 0), (1, 2), (2, 2)]);
        assert_eq!(section(&r, 1).unwrap(), vec![0, 2, 3]);
        assert_eq!(section(&r, 0).unwrap(), Vec::<usize>::new());
        assert!(section(&r, 4).is_err());
    }

    #[test]
    fn basis_axioms_hold_for_dyadic_thresholds_of_one_metric() {
        let d = discrete(3);
        let basis = EntourageBasis {
            generators: vec![
                (d.clone(), rat_int(2)),
                (d.clone(), rat_int(1)),
                (d, rat(1, 2)),
            ],
        };
        assert!(basis.validate().unwrap().is_empty());
    }

    #[test]
    fn missing_half_generator_is_flagged() {
        // A single generator whose relation composes to something larger
        // than itself: d(a,b) = d(b,c) = 1, d(a,c) = 3 (triangle fails), so
        // V_{d,2} o V_{d,2} contains (a,c) but V_{d,2} does not.
        let d = QuasiPseudometric::matrix(
            "d",
            vec![
                vec![rat_int(0), rat_int(1), rat_int(3)],
                vec![rat_int(3), rat_int(0), rat_int(1)],
                vec![rat_int(3), rat_int(3), rat_int(0)],
            ],
        );
        let basis = EntourageBasis {
            generators: vec![(d, rat_int(2))],
        };
        let v = basis.validate().unwrap();
        assert!(v.iter().any(|s| s.contains("C o C")), "{v:?}");
    }
}
