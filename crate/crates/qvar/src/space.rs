//! Point sets, asymmetric distances, gauges and their axiom validators.
//!
//! Everything here is exact: distances are finite rationals, axiom checks
//! are exhaustive loops over the finite instance, and every violation comes
//! with a concrete witness.

use num::{Signed, Zero};

use crate::catalog::{CatalogDistance, CatalogSpace};
use crate::error::{QvarError, Result};
use crate::rational::{format_rat, Rat};

/// The ground set of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSet {
    /// Named points with indices 0..n-1.
    Finite { names: Vec<String> },
    /// A catalog countable set plus finitely many named limit points
    /// (name, rational coordinate).
    Countable {
        space: CatalogSpace,
        limits: Vec<(String, Rat)>,
    },
}

impl PointSet {
    pub fn finite(names: &[&str]) -> Self {
        PointSet::Finite {
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            PointSet::Finite { names } => Some(names.len()),
            PointSet::Countable { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match self {
            PointSet::Finite { names } => names.iter().position(|n| n == name),
            PointSet::Countable { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PointSet::Finite { names } => {
                if names.is_empty() {
                    return Err(QvarError::InvalidArgument(
                        "finite point set must have n >= 1".into(),
                    ));
                }
                for (i, a) in names.iter().enumerate() {
                    if names[..i].contains(a) {
                        return Err(QvarError::InvalidArgument(format!(
                            "duplicate point name {a:?}"
                        )));
                    }
                }
                Ok(())
            }
            PointSet::Countable { space, limits } => {
                for (i, (name, x)) in limits.iter().enumerate() {
                    if limits[..i].iter().any(|(n, _)| n == name) {
                        return Err(QvarError::InvalidArgument(format!(
                            "duplicate limit point name {name:?}"
                        )));
                    }
                    if !space.contains(x) {
                        return Err(QvarError::InvalidArgument(format!(
                            "limit point {name:?} = {} outside {}",
                            format_rat(x),
                            space.id()
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// An exactly evaluable asymmetric distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPseudometric {
    pub name: String,
    pub form: DistanceForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceForm {
    /// Row-major n x n, entry [i][j] = d(p_i, p_j). Always finite.
    Matrix(Vec<Vec<Rat>>),
    Catalog(CatalogDistance),
}

impl QuasiPseudometric {
    pub fn matrix(name: &str, rows: Vec<Vec<Rat>>) -> Self {
        QuasiPseudometric {
            name: name.into(),
            form: DistanceForm::Matrix(rows),
        }
    }

    pub fn rows(&self) -> Result<&Vec<Vec<Rat>>> {
        match &self.form {
            DistanceForm::Matrix(rows) => Ok(rows),
            DistanceForm::Catalog(c) => Err(QvarError::NotApplicable(format!(
                "distance {} is a catalog formula ({}), not a matrix",
                self.name,
                c.id()
            ))),
        }
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.rows()?.len())
    }

    /// d(p_i, p_j) on a finite instance.
    pub fn at(&self, i: usize, j: usize) -> Result<&Rat> {
        let rows = self.rows()?;
        rows.get(i)
            .and_then(|r| r.get(j))
            .ok_or_else(|| QvarError::Dimension(format!("index ({i},{j}) out of range")))
    }

    fn check_shape(&self, n: usize) -> Result<()> {
        let rows = self.rows()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(QvarError::Dimension(format!(
                "distance {} is not {n}x{n}",
                self.name
            )));
        }
        Ok(())
    }
}

/// How much of the quasi-pseudometric axioms to require.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleMode {
    /// Zero diagonal, nonnegativity and the triangle inequality.
    Strict,
    /// Only zero diagonal and nonnegativity; the triangle inequality is the
    /// gauge's job via the relax witness.
    GaugeRelaxed,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Whether the separation axiom d(x,y)=0=d(y,x) => x=y holds, reported
    /// regardless of mode.
    pub is_quasi_metric: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive axiom check of a matrix-form distance over an n-point set.
pub fn validate_quasi_pseudometric(
    d: &QuasiPseudometric,
    n: usize,
    mode: TriangleMode,
) -> Result<ValidationReport> {
    d.check_shape(n)?;
    let rows = d.rows()?;
    let mut violations = Vec::new();
    for i in 0..n {
        if !rows[i][i].is_zero() {
            violations.push(Violation {
                axiom: "zero-diagonal",
                witness: format!("d({i},{i}) = {}", format_rat(&rows[i][i])),
            });
        }
        for j in 0..n {
            if rows[i][j].is_negative() {
                violations.push(Violation {
                    axiom: "nonnegativity",
                    witness: format!("d({i},{j}) = {}", format_rat(&rows[i][j])),
                });
            }
        }
    }
    let mut triangle_holds = true;
    'tri: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if rows[i][k] > &rows[i][j] + &rows[j][k] {
                    triangle_holds = false;
                    if mode == TriangleMode::Strict {
                        violations.push(Violation {
                            axiom: "triangle",
                            witness: format!(
                                "d({i},{k}) = {} > {} + {} = d({i},{j}) + d({j},{k})",
                                format_rat(&rows[i][k]),
                                format_rat(&rows[i][j]),
                                format_rat(&rows[j][k])
                            ),
                        });
                    }
                    break 'tri;
                }
            }
        }
    }
    let mut separated = true;
    'sep: for i in 0..n {
        for j in 0..n {
            if i != j && rows[i][j].is_zero() && rows[j][i].is_zero() {
                separated = false;
                break 'sep;
            }
        }
    }
    Ok(ValidationReport {
        violations,
        is_quasi_metric: triangle_holds && separated,
    })
}

/// A finite directed family of distances with an explicit relaxed-triangle
/// witness per member: relax[k] names the member d' with d_k <= d' pointwise
/// and d_k(x,y) <= d'(x,z) + d'(z,y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FQuasiGauge {
    pub members: Vec<QuasiPseudometric>,
    pub relax: Vec<usize>,
    pub symmetric: bool,
}

impl FQuasiGauge {
    /// Single genuine quasi-pseudometric; the relax witness is the member
    /// itself (the relaxed inequality reduces to its triangle inequality).
    pub fn singleton(d: QuasiPseudometric) -> Self {
        FQuasiGauge {
            members: vec![d],
            relax: vec![0],
            symmetric: false,
        }
    }

    pub fn dim(&self) -> Result<usize> {
        self.members
            .first()
            .ok_or_else(|| QvarError::InvalidArgument("empty gauge".into()))?
            .dim()
    }

    pub fn member_named(&self, name: &str) -> Option<(usize, &QuasiPseudometric)> {
        self.members
            .iter()
            .enumerate()
            .find(|(_, d)| d.name == name)
    }

    pub fn relax_of(&self, k: usize) -> &QuasiPseudometric {
        &self.members[self.relax[k]]
    }
}

fn pointwise_le(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    a.iter()
        .zip(b)
        .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| x <= y))
}

/// Exhaustive check of the gauge axioms on a finite n-point instance:
/// directedness, per-member nonnegativity and zero diagonal, the relaxed
/// triangle inequality through each designated witness, and symmetry if the
/// gauge is flagged symmetric. Returns the first witness per violated axiom.
pub fn validate_f_quasi_gauge(gauge: &FQuasiGauge, n: usize) -> Result<Vec<Violation>> {
    if gauge.members.is_empty() {
        return Err(QvarError::InvalidArgument("empty gauge".into()));
    }
    if gauge.relax.len() != gauge.members.len() {
        return Err(QvarError::Dimension(
            "relax map length differs from member count".into(),
        ));
    }
    if let Some(&bad) = gauge.relax.iter().find(|&&r| r >= gauge.members.len()) {
        return Err(QvarError::InvalidArgument(format!(
            "relax index {bad} out of range"
        )));
    }
    for d in &gauge.members {
        d.check_shape(n)?;
    }
    let mut violations = Vec::new();

    for d in &gauge.members {
        let report = validate_quasi_pseudometric(d, n, TriangleMode::GaugeRelaxed)?;
        if let Some(v) = report.violations.into_iter().next() {
            violations.push(Violation {
                axiom: v.axiom,
                witness: format!("member {}: {}", d.name, v.witness),
            });
        }
    }

    // Directedness: every pair has a pointwise upper bound among members.
    'pairs: for a in 0..gauge.members.len() {
        for b in (a + 1)..gauge.members.len() {
            let ra = gauge.members[a].rows()?;
            let rb = gauge.members[b].rows()?;
            let has_ub = gauge
                .members
                .iter()
                .any(|u| u.rows().map_or(false, |ru| pointwise_le(ra, ru) && pointwise_le(rb, ru)));
            if !has_ub {
                violations.push(Violation {
                    axiom: "directedness",
                    witness: format!(
                        "members {} and {} have no pointwise upper bound in the gauge",
                        gauge.members[a].name, gauge.members[b].name
                    ),
                });
                break 'pairs;
            }
        }
    }

    // Relaxed triangle through the designated witness.
    'relax: for (k, d) in gauge.members.iter().enumerate() {
        let rd = d.rows()?;
        let rp = gauge.relax_of(k).rows()?;
        if !pointwise_le(rd, rp) {
            violations.push(Violation {
                axiom: "relax-dominates",
                witness: format!(
                    "witness {} is not pointwise above member {}",
                    gauge.relax_of(k).name,
                    d.name
                ),
            });
            break 'relax;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if rd[x][y] > &rp[x][z] + &rp[z][y] {
                        violations.push(Violation {
                            axiom: "relaxed-triangle",
                            witness: format!(
                                "{}({x},{y}) = {} > {}({x},{z}) + {}({z},{y}) = {} + {}",
                                d.name,
                                format_rat(&rd[x][y]),
                                gauge.relax_of(k).name,
                                gauge.relax_of(k).name,
                                format_rat(&rp[x][z]),
                                format_rat(&rp[z][y])
                            ),
                        });
                        break 'relax;
                    }
                }
            }
        }
    }

    if gauge.symmetric {
        'sym: for d in &gauge.members {
            let rd = d.rows()?;
            for i in 0..n {
                for j in 0..n {
                    if rd[i][j] != rd[j][i] {
                        violations.push(Violation {
                            axiom: "symmetry",
                            witness: format!(
                                "{}({i},{j}) = {} != {} = {}({j},{i})",
                                d.name,
                                format_rat(&rd[i][j]),
                                format_rat(&rd[j][i]),
                                d.name
                            ),
                        });
                        break 'sym;
                    }
                }
            }
        }
    }

    Ok(violations)
}

/// The reversed distance: conjugate(d)(x,y) = d(y,x).
pub fn conjugate(d: &QuasiPseudometric) -> Result<QuasiPseudometric> {
    let rows = d.rows()?;
    let n = rows.len();
    let t: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| rows[j][i].clone()).collect())
        .collect();
    Ok(QuasiPseudometric::matrix(&format!("{}.conj", d.name), t))
}

/// Pointwise max of d and its conjugate; symmetric by construction.
pub fn symmetrize(d: &QuasiPseudometric) -> Result<QuasiPseudometric> {
    let rows = d.rows()?;
    let n = rows.len();
    let s: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| std::cmp::max(&rows[i][j], &rows[j][i]).clone())
                .collect()
        })
        .collect();
    Ok(QuasiPseudometric::matrix(&format!("{}.sym", d.name), s))
}

/// Conjugates every member; the relax map carries over unchanged (reversing
/// both sides of the relaxed triangle inequality preserves it).
pub fn conjugate_gauge(gauge: &FQuasiGauge) -> Result<FQuasiGauge> {
    let members = gauge
        .members
        .iter()
        .map(conjugate)
        .collect::<Result<Vec<_>>>()?;
    Ok(FQuasiGauge {
        members,
        relax: gauge.relax.clone(),
        symmetric: gauge.symmetric,
    })
}

/// Whether every ball of d contains a basis entourage of the gauge: for each
/// threshold eps in d's positive value set (plus one above the max), some
/// member's zero set must sit inside {(x,y): d(x,y) < eps}. Testing zero
/// sets suffices because shrinking a member's radius below its least
/// positive value yields exactly its zero set, the smallest entourage that
/// member generates.
pub fn gauge_compatibility(d: &QuasiPseudometric, gauge: &FQuasiGauge) -> Result<bool> {
    let rows = d.rows()?;
    let n = rows.len();
    for m in &gauge.members {
        m.check_shape(n)?;
    }
    let mut thresholds: Vec<Rat> = Vec::new();
    let mut max = Rat::zero();
    for r in rows {
        for v in r {
            if v.is_positive() && !thresholds.contains(v) {
                thresholds.push(v.clone());
            }
            if *v > max {
                max = v.clone();
            }
        }
    }
    thresholds.push(max + Rat::from_integer(1.into()));

    for eps in &thresholds {
        let covered = gauge.members.iter().any(|m| {
            let rm = m.rows().expect("shape checked above");
            (0..n).all(|x| (0..n).all(|y| !rm[x][y].is_zero() || rows[x][y] < *eps))
        });
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}
