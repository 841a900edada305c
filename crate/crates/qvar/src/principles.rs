//! Constructive solvers for the minimization and fixed-point principles,
//! each emitting an inequality certificate that the oracle re-checks from
//! raw data.
//!
//! Every solver audits its hypotheses exhaustively before doing anything
//! and refuses with a witness when they fail; certificates store both sides
//! of every claimed inequality so verification can compare stored against
//! recomputed values.

use num::{One, Signed, Zero};

use crate::error::{QvarError, Result};
use crate::order::{leq_phi, lower_section, minimal_element, require_t1, Objective};
use crate::rational::{format_rat, ExtendedRational, Finite, Rat};
use crate::space::{validate_f_quasi_gauge, FQuasiGauge, QuasiPseudometric};

/// One claimed inequality, tagged with the gauge member it was evaluated
/// against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberIneq {
    pub member: String,
    pub lhs: ExtendedRational,
    pub rhs: ExtendedRational,
    pub strict: bool,
}

/// A per-point strict witness: some gauge member separates x from z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointWitness {
    pub x: usize,
    pub member: String,
    pub lhs: ExtendedRational,
    pub rhs: ExtendedRational,
}

/// Output of the basic principle: a point z below the start whose strict
/// domination is witnessed member-by-member for every other point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkelandCertificate {
    pub x0: usize,
    pub z: usize,
    /// f(z) + d(z,x0) <= f(x0) for every gauge member d.
    pub part_i: Vec<MemberIneq>,
    /// For every x != z: f(z) < f(x) + d_x(x,z) for the chosen member d_x.
    pub part_ii: Vec<PointWitness>,
}

fn descent_inequalities(
    phi: &Objective,
    gauge: &FQuasiGauge,
    z: usize,
    x0: usize,
) -> Result<Vec<MemberIneq>> {
    let mut out = Vec::new();
    for d in &gauge.members {
        out.push(MemberIneq {
            member: d.name.clone(),
            lhs: phi.at(z)?.add_rat(d.at(z, x0)?),
            rhs: phi.at(x0)?.clone(),
            strict: false,
        });
    }
    Ok(out)
}

/// For each x != z, the smallest-index member making f(z) < f(x) + d(x,z)
/// strict; exists exactly when z is order-minimal.
fn strict_witnesses(
    phi: &Objective,
    gauge: &FQuasiGauge,
    z: usize,
) -> Result<Vec<PointWitness>> {
    let n = gauge.dim()?;
    let fz = phi.at(z)?;
    let mut out = Vec::new();
    for x in 0..n {
        if x == z {
            continue;
        }
        let mut found = None;
        for d in &gauge.members {
            let rhs = phi.at(x)?.add_rat(d.at(x, z)?);
            if *fz < rhs {
                found = Some(PointWitness {
                    x,
                    member: d.name.clone(),
                    lhs: fz.clone(),
                    rhs,
                });
                break;
            }
        }
        match found {
            Some(w) => out.push(w),
            None => {
                return Err(QvarError::Verification(format!(
                    "no gauge member strictly separates point {x} from {z}"
                )))
            }
        }
    }
    Ok(out)
}

/// Descends from x0 to an order-minimal z and certifies both conclusions.
/// Requires a T1 instance and a start in the objective's domain.
pub fn ekeland_point(
    phi: &Objective,
    gauge: &FQuasiGauge,
    x0: usize,
) -> Result<EkelandCertificate> {
    require_t1(gauge)?;
    if !phi.at(x0)?.is_finite() {
        return Err(QvarError::Hypothesis(
            "start point has infinite objective value".into(),
        ));
    }
    let (z, _trace) = minimal_element(phi, gauge, x0)?;
    Ok(EkelandCertificate {
        x0,
        z,
        part_i: descent_inequalities(phi, gauge, z, x0)?,
        part_ii: strict_witnesses(phi, gauge, z)?,
    })
}

/// Threshold and per-member scaling factors for the rescaled principle.
/// `xi[k]` must be positive and increasing with respect to the pointwise
/// order among members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingSpec {
    pub eps: Rat,
    pub xi: Vec<Rat>,
}

impl ScalingSpec {
    pub fn uniform(eps: Rat, xi: Rat, members: usize) -> Self {
        ScalingSpec {
            eps,
            xi: vec![xi; members],
        }
    }

    pub fn validate(&self, gauge: &FQuasiGauge) -> Result<()> {
        if !self.eps.is_positive() {
            return Err(QvarError::InvalidArgument("eps must be positive".into()));
        }
        if self.xi.len() != gauge.members.len() {
            return Err(QvarError::Dimension(
                "one scaling factor per gauge member required".into(),
            ));
        }
        if let Some(bad) = self.xi.iter().find(|x| !x.is_positive()) {
            return Err(QvarError::InvalidArgument(format!(
                "scaling factor {} is not positive",
                format_rat(bad)
            )));
        }
        // Increasing with the pointwise order among members.
        for a in 0..gauge.members.len() {
            for b in 0..gauge.members.len() {
                let ra = gauge.members[a].rows()?;
                let rb = gauge.members[b].rows()?;
                let le = ra
                    .iter()
                    .zip(rb)
                    .all(|(x, y)| x.iter().zip(y).all(|(p, q)| p <= q));
                if le && self.xi[a] > self.xi[b] {
                    return Err(QvarError::InvalidArgument(format!(
                        "scaling not increasing: {} <= {} pointwise but xi decreases",
                        gauge.members[a].name, gauge.members[b].name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The gauge with member k multiplied by eps * xi[k]; the relax map carries
/// over (factors on both sides of the relaxed triangle inequality agree
/// because xi is increasing).
pub fn scaled_gauge(gauge: &FQuasiGauge, spec: &ScalingSpec) -> Result<FQuasiGauge> {
    let mut members = Vec::with_capacity(gauge.members.len());
    for (k, d) in gauge.members.iter().enumerate() {
        let factor = &spec.eps * &spec.xi[k];
        let rows = d
            .rows()?
            .iter()
            .map(|r| r.iter().map(|v| v * &factor).collect())
            .collect();
        members.push(QuasiPseudometric {
            name: d.name.clone(),
            form: crate::space::DistanceForm::Matrix(rows),
        });
    }
    Ok(FQuasiGauge {
        members,
        relax: gauge.relax.clone(),
        symmetric: gauge.symmetric,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledEkeland {
    /// Certificate over the rescaled gauge (same member names).
    pub cert: EkelandCertificate,
    pub eps: Rat,
    pub xi: Vec<Rat>,
    /// d(z,x0) <= 1/xi(d) per original gauge member, exact.
    pub bounds: Vec<MemberIneq>,
    /// True when eps was not supplied and f(x0) already attains the
    /// infimum: the call returns x0 with no strict part claimed.
    pub degenerate: bool,
}

/// The rescaled principle: runs the descent on the gauge {eps * xi(d) * d}
/// and certifies the distance bound d(z,x0) <= 1/xi(d) for every member.
/// When no scaling is given, eps defaults to f(x0) - inf f; if that gap is
/// zero the call degenerates to x0.
pub fn ekeland_scaled(
    phi: &Objective,
    gauge: &FQuasiGauge,
    x0: usize,
    spec: Option<ScalingSpec>,
) -> Result<ScaledEkeland> {
    require_t1(gauge)?;
    let fx0 = phi.at(x0)?.clone();
    if !fx0.is_finite() {
        return Err(QvarError::Hypothesis(
            "start point has infinite objective value".into(),
        ));
    }
    let gap = fx0.checked_sub(&phi.alpha)?;
    let spec = match spec {
        Some(s) => s,
        None => {
            let Finite(g) = &gap else { unreachable!("fx0 is finite") };
            if g.is_zero() {
                // Degenerate: x0 already attains the infimum.
                let one = Rat::one();
                let bounds = gauge
                    .members
                    .iter()
                    .map(|d| {
                        Ok(MemberIneq {
                            member: d.name.clone(),
                            lhs: Finite(d.at(x0, x0)?.clone()),
                            rhs: Finite(one.clone()),
                            strict: false,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(ScaledEkeland {
                    cert: EkelandCertificate {
                        x0,
                        z: x0,
                        part_i: descent_inequalities(phi, gauge, x0, x0)?,
                        part_ii: Vec::new(),
                    },
                    eps: one.clone(),
                    xi: vec![one; gauge.members.len()],
                    bounds,
                    degenerate: true,
                });
            }
            ScalingSpec::uniform(g.clone(), Rat::one(), gauge.members.len())
        }
    };
    spec.validate(gauge)?;
    if gap > Finite(spec.eps.clone()) {
        return Err(QvarError::Hypothesis(format!(
            "not-epsilon-minimal: f(x0) exceeds inf f + eps by {}",
            (gap.checked_sub(&Finite(spec.eps.clone()))?)
        )));
    }
    let tilde = scaled_gauge(gauge, &spec)?;
    let n = gauge.dim()?;
    let still_valid = validate_f_quasi_gauge(&tilde, n)?;
    if !still_valid.is_empty() {
        return Err(QvarError::Verification(format!(
            "rescaled gauge failed revalidation: {:?}",
            still_valid[0]
        )));
    }
    let cert = ekeland_point(phi, &tilde, x0)?;
    let mut bounds = Vec::new();
    for (k, d) in gauge.members.iter().enumerate() {
        let lhs = Finite(d.at(cert.z, x0)?.clone());
        let rhs = Finite(Rat::one() / &spec.xi[k]);
        if lhs > rhs {
            return Err(QvarError::Verification(format!(
                "distance bound failed for member {}",
                d.name
            )));
        }
        bounds.push(MemberIneq {
            member: d.name.clone(),
            lhs,
            rhs,
            strict: false,
        });
    }
    Ok(ScaledEkeland {
        cert,
        eps: spec.eps,
        xi: spec.xi,
        bounds,
        degenerate: false,
    })
}

/// A set-valued self-map with nonempty images, images sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetValuedMap {
    pub images: Vec<Vec<usize>>,
}

impl SetValuedMap {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.images.len() != n {
            return Err(QvarError::Dimension(
                "one image per point required".into(),
            ));
        }
        for (x, img) in self.images.iter().enumerate() {
            if img.is_empty() {
                return Err(QvarError::InvalidArgument(format!(
                    "image of point {x} is empty"
                )));
            }
            if img.iter().any(|&y| y >= n) {
                return Err(QvarError::Dimension(format!(
                    "image of point {x} leaves the point set"
                )));
            }
        }
        Ok(())
    }

    pub fn selector(f: &[usize]) -> Self {
        SetValuedMap {
            images: f.iter().map(|&y| vec![y]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaristiVariant {
    /// Some image point sits in the lower section: z with z in F(z).
    Weak,
    /// Every image point sits in the lower section: z with F(z) = {z}.
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaristiCertificate {
    pub variant: CaristiVariant,
    pub z: usize,
    pub image_of_z: Vec<usize>,
}

/// Audits the chosen Caristi hypothesis exhaustively, then returns the
/// descent's minimal point, where the hypothesis forces the fixed point.
pub fn caristi_fixed_point(
    map: &SetValuedMap,
    phi: &Objective,
    gauge: &FQuasiGauge,
    variant: CaristiVariant,
) -> Result<CaristiCertificate> {
    require_t1(gauge)?;
    let n = gauge.dim()?;
    map.validate(n)?;
    if phi.len() != n {
        return Err(QvarError::Dimension(
            "objective length differs from point count".into(),
        ));
    }
    for x in 0..n {
        let ok = match variant {
            CaristiVariant::Weak => {
                let mut hit = false;
                for &y in &map.images[x] {
                    if leq_phi(phi, gauge, x, y)? {
                        hit = true;
                        break;
                    }
                }
                hit
            }
            CaristiVariant::Strong => {
                let mut all = true;
                for &y in &map.images[x] {
                    if !leq_phi(phi, gauge, x, y)? {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        if !ok {
            return Err(QvarError::Hypothesis(format!(
                "Caristi {} hypothesis fails at point {x}",
                match variant {
                    CaristiVariant::Weak => "weak",
                    CaristiVariant::Strong => "strong",
                }
            )));
        }
    }
    let (z, _) = minimal_element(phi, gauge, phi.argmin())?;
    // Minimality gives a singleton lower section, so the hypothesis pins
    // the image at z.
    let image = map.images[z].clone();
    match variant {
        CaristiVariant::Weak => {
            if !image.contains(&z) {
                return Err(QvarError::Verification(format!(
                    "minimal point {z} not in its own image"
                )));
            }
        }
        CaristiVariant::Strong => {
            if image != vec![z] {
                return Err(QvarError::Verification(format!(
                    "image of minimal point {z} is not the singleton"
                )));
            }
        }
    }
    Ok(CaristiCertificate {
        variant,
        z,
        image_of_z: image,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TakahashiCertificate {
    pub z: usize,
    pub f_z: ExtendedRational,
    pub alpha: ExtendedRational,
}

/// Audits the domination hypothesis (every point above the infimum is
/// strictly dominated in the order) and returns a point attaining the
/// infimum exactly.
pub fn takahashi_minimize(phi: &Objective, gauge: &FQuasiGauge) -> Result<TakahashiCertificate> {
    require_t1(gauge)?;
    let n = gauge.dim()?;
    if phi.len() != n {
        return Err(QvarError::Dimension(
            "objective length differs from point count".into(),
        ));
    }
    for x in 0..n {
        if *phi.at(x)? > phi.alpha && lower_section(phi, gauge, x)? == vec![x] {
            return Err(QvarError::Hypothesis(format!(
                "domination hypothesis fails at point {x}: above the infimum but undominated"
            )));
        }
    }
    let start = phi
        .values
        .iter()
        .position(|v| v.is_finite())
        .expect("objective is proper");
    let (z, _) = minimal_element(phi, gauge, start)?;
    let f_z = phi.at(z)?.clone();
    if f_z != phi.alpha {
        return Err(QvarError::Verification(format!(
            "descent ended at {z} with value above the infimum"
        )));
    }
    Ok(TakahashiCertificate {
        z,
        f_z,
        alpha: phi.alpha.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArutyunovCertificate {
    pub x0: usize,
    pub z: usize,
    pub gamma: Rat,
    pub alpha: ExtendedRational,
    pub f_z: ExtendedRational,
    /// d(z,x0) <= (f(x0) - alpha) / gamma per member, exact.
    pub bounds: Vec<MemberIneq>,
}

/// The Caristi-type minimization: audits that every point above the infimum
/// has a gamma-discounted successor, then locates a minimizer within the
/// stated distance of the start. Runs the rescaled descent with
/// eps = f(x0) - alpha and xi = gamma/eps, which turns the bound into
/// d(z,x0) <= eps/gamma.
pub fn arutyunov_minimize(
    phi: &Objective,
    gauge: &FQuasiGauge,
    gamma: &Rat,
    x0: usize,
) -> Result<ArutyunovCertificate> {
    require_t1(gauge)?;
    if !gamma.is_positive() {
        return Err(QvarError::InvalidArgument("gamma must be positive".into()));
    }
    let n = gauge.dim()?;
    let fx0 = phi.at(x0)?.clone();
    if !fx0.is_finite() {
        return Err(QvarError::Hypothesis(
            "start point has infinite objective value".into(),
        ));
    }
    // Hypothesis audit: x with f(x) > alpha needs x' != x with
    // f(x') + gamma d(x',x) <= f(x) for every member.
    for x in 0..n {
        if *phi.at(x)? <= phi.alpha {
            continue;
        }
        let mut dominated = false;
        'succ: for y in 0..n {
            if y == x {
                continue;
            }
            for d in &gauge.members {
                let lhs = phi.at(y)?.add_rat(&(gamma * d.at(y, x)?));
                if lhs > *phi.at(x)? {
                    continue 'succ;
                }
            }
            dominated = true;
            break;
        }
        if !dominated {
            return Err(QvarError::Hypothesis(format!(
                "discounted-domination hypothesis fails at point {x} for gamma {}",
                format_rat(gamma)
            )));
        }
    }
    let gap = match fx0.checked_sub(&phi.alpha)? {
        Finite(g) => g,
        _ => unreachable!("both sides finite"),
    };
    let (z, bound_rhs) = if gap.is_zero() {
        (x0, Rat::zero())
    } else {
        let spec = ScalingSpec::uniform(gap.clone(), gamma / &gap, gauge.members.len());
        let scaled = ekeland_scaled(phi, gauge, x0, Some(spec))?;
        (scaled.cert.z, &gap / gamma)
    };
    let f_z = phi.at(z)?.clone();
    if f_z != phi.alpha {
        return Err(QvarError::Verification(format!(
            "returned point {z} does not attain the infimum"
        )));
    }
    let mut bounds = Vec::new();
    for d in &gauge.members {
        let lhs = Finite(d.at(z, x0)?.clone());
        let rhs = Finite(bound_rhs.clone());
        if lhs > rhs {
            return Err(QvarError::Verification(format!(
                "distance bound failed for member {}",
                d.name
            )));
        }
        bounds.push(MemberIneq {
            member: d.name.clone(),
            lhs,
            rhs,
            strict: false,
        });
    }
    Ok(ArutyunovCertificate {
        x0,
        z,
        gamma: gamma.clone(),
        alpha: phi.alpha.clone(),
        f_z,
        bounds,
    })
}

/// An equilibrium bivariate on a finite instance: values[x][y] = F(x,y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate {
    pub values: Vec<Vec<ExtendedRational>>,
}

impl Bivariate {
    pub fn at(&self, x: usize, y: usize) -> Result<&ExtendedRational> {
        self.values
            .get(x)
            .and_then(|r| r.get(y))
            .ok_or_else(|| QvarError::Dimension(format!("pair ({x},{y}) out of range")))
    }

    pub fn from_objective_difference(phi: &Objective) -> Result<Self> {
        if phi.values.iter().any(|v| !v.is_finite()) {
            return Err(QvarError::NotApplicable(
                "difference bivariate needs a finite objective (no +inf values)".into(),
            ));
        }
        let n = phi.len();
        let mut values = Vec::with_capacity(n);
        for x in 0..n {
            let mut row = Vec::with_capacity(n);
            for y in 0..n {
                row.push(phi.at(y)?.checked_sub(phi.at(x)?)?);
            }
            values.push(row);
        }
        Ok(Bivariate { values })
    }

    /// Exhaustive audit of the equilibrium axioms: zero diagonal, the
    /// triangle inequality in the second slot, and a finite infimum of
    /// F(x0, .) (automatic on finite instances but recomputed and recorded).
    pub fn validate(&self, n: usize, x0: usize) -> Result<ExtendedRational> {
        if self.values.len() != n || self.values.iter().any(|r| r.len() != n) {
            return Err(QvarError::Dimension("bivariate is not n x n".into()));
        }
        for x in 0..n {
            if *self.at(x, x)? != ExtendedRational::zero() {
                return Err(QvarError::Hypothesis(format!(
                    "equilibrium diagonal fails: F({x},{x}) != 0"
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if *self.at(x, z)? > self.at(x, y)?.add(self.at(y, z)?) {
                        return Err(QvarError::Hypothesis(format!(
                            "equilibrium triangle fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        let inf = (0..n)
            .map(|y| self.at(x0, y))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .cloned()
            .expect("n >= 1");
        Ok(inf)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OettliTheraCertificate {
    pub x0: usize,
    pub z: usize,
    /// F(x0,z) + d(z,x0) <= 0 per member: z lies in the level set of x0.
    pub membership: Vec<MemberIneq>,
    /// For every x != z: F(z,x) + d_x(x,z) > 0 for the chosen member.
    pub witnesses: Vec<PointWitness>,
}

/// Equilibrium version: audits the bivariate axioms, minimizes
/// f(.) = F(x0, .) via the descent, and certifies strict positivity of the
/// residual against every other point by direct scan.
pub fn oettli_thera(
    bi: &Bivariate,
    gauge: &FQuasiGauge,
    x0: usize,
) -> Result<OettliTheraCertificate> {
    require_t1(gauge)?;
    let n = gauge.dim()?;
    bi.validate(n, x0)?;
    let f = Objective::new(
        "slice",
        (0..n).map(|y| bi.at(x0, y).cloned()).collect::<Result<Vec<_>>>()?,
    )?;
    let cert = ekeland_point(&f, gauge, x0)?;
    let z = cert.z;
    let zero = ExtendedRational::zero();
    let mut membership = Vec::new();
    for d in &gauge.members {
        let lhs = bi.at(x0, z)?.add_rat(d.at(z, x0)?);
        if lhs > zero {
            return Err(QvarError::Verification(format!(
                "level-set membership fails for member {}",
                d.name
            )));
        }
        membership.push(MemberIneq {
            member: d.name.clone(),
            lhs,
            rhs: zero.clone(),
            strict: false,
        });
    }
    let mut witnesses = Vec::new();
    for x in 0..n {
        if x == z {
            continue;
        }
        let mut found = None;
        for d in &gauge.members {
            let rhs = bi.at(z, x)?.add_rat(d.at(x, z)?);
            if rhs > zero {
                found = Some(PointWitness {
                    x,
                    member: d.name.clone(),
                    lhs: zero.clone(),
                    rhs,
                });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => {
                return Err(QvarError::Verification(format!(
                    "no member makes the equilibrium residual at {x} strictly positive"
                )))
            }
        }
    }
    Ok(OettliTheraCertificate {
        x0,
        z,
        membership,
        witnesses,
    })
}

/// The five implication demonstrations among the principles, materialized
/// as executable constructions on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceDirection {
    /// A minimal point fixes every weak selector into lower sections.
    MinimizationToFixedPoint,
    /// No minimal point: the section selector has no fixed point.
    NoMinimizationToNoFixedPoint,
    /// Under the domination hypothesis the minimal point attains the
    /// infimum.
    MinimizationToInfimum,
    /// No minimal point: every point is strictly dominated, so the
    /// domination descent never settles.
    NoMinimizationToNoInfimumWitness,
    /// The difference bivariate has level sets equal to lower sections.
    EquilibriumCorrespondence,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub direction: EquivalenceDirection,
    pub holds: bool,
    pub detail: String,
}

pub fn equivalence_witness(
    direction: EquivalenceDirection,
    phi: &Objective,
    gauge: &FQuasiGauge,
) -> Result<EquivalenceReport> {
    // The positive directions lean on the strict value decrease along the
    // order and so need T1; the negative constructions live precisely on
    // instances where minimality fails, which on finite point sets means
    // non-T1 gauges, so no separation is demanded there.
    match direction {
        EquivalenceDirection::MinimizationToFixedPoint
        | EquivalenceDirection::MinimizationToInfimum
        | EquivalenceDirection::EquilibriumCorrespondence => {
            require_t1(gauge)?;
        }
        EquivalenceDirection::NoMinimizationToNoFixedPoint
        | EquivalenceDirection::NoMinimizationToNoInfimumWitness => {}
    }
    let n = gauge.dim()?;
    if phi.len() != n {
        return Err(QvarError::Dimension(
            "objective length differs from point count".into(),
        ));
    }
    match direction {
        EquivalenceDirection::MinimizationToFixedPoint => {
            let start = phi
                .values
                .iter()
                .position(|v| v.is_finite())
                .expect("objective is proper");
            let (z, _) = minimal_element(phi, gauge, start)?;
            // Any selector into lower sections must send z to itself: the
            // canonical one (smallest index in the section) demonstrates it.
            let mut selector = Vec::with_capacity(n);
            for x in 0..n {
                selector.push(lower_section(phi, gauge, x)?[0]);
            }
            let holds = selector[z] == z && lower_section(phi, gauge, z)? == vec![z];
            Ok(EquivalenceReport {
                direction,
                holds,
                detail: format!("minimal point {z}; section selector fixes it: {holds}"),
            })
        }
        EquivalenceDirection::NoMinimizationToNoFixedPoint
        | EquivalenceDirection::NoMinimizationToNoInfimumWitness => {
            // Hypothesis: no point is order-minimal.
            for z in 0..n {
                if lower_section(phi, gauge, z)? == vec![z] {
                    return Err(QvarError::NotApplicable(format!(
                        "construction-not-applicable: point {z} is order-minimal"
                    )));
                }
            }
            // Selector y_z: the smallest strictly-below point of each z.
            let mut selector = Vec::with_capacity(n);
            for z in 0..n {
                let y = lower_section(phi, gauge, z)?
                    .into_iter()
                    .find(|&y| y != z)
                    .expect("non-minimality just audited");
                selector.push(y);
            }
            let descent_ok = (0..n).try_fold(true, |acc, z| -> Result<bool> {
                Ok(acc && leq_phi(phi, gauge, z, selector[z])?)
            })?;
            let fixed_point_free = (0..n).all(|z| selector[z] != z);
            let holds = descent_ok && fixed_point_free;
            let detail = match direction {
                EquivalenceDirection::NoMinimizationToNoFixedPoint => format!(
                    "selector satisfies the descent condition everywhere ({descent_ok}) and has no fixed point ({fixed_point_free})"
                ),
                _ => format!(
                    "every point strictly dominated ({fixed_point_free}): no order-minimal witness exists"
                ),
            };
            Ok(EquivalenceReport {
                direction,
                holds,
                detail,
            })
        }
        EquivalenceDirection::MinimizationToInfimum => {
            let cert = takahashi_minimize(phi, gauge)?;
            Ok(EquivalenceReport {
                direction,
                holds: cert.f_z == cert.alpha,
                detail: format!("minimal point {} attains the infimum", cert.z),
            })
        }
        EquivalenceDirection::EquilibriumCorrespondence => {
            let bi = Bivariate::from_objective_difference(phi)?;
            // Level set of x under the bivariate vs the lower section of x.
            let zero = ExtendedRational::zero();
            for x in 0..n {
                let mut level = Vec::new();
                for y in 0..n {
                    let mut inside = true;
                    for d in &gauge.members {
                        if bi.at(x, y)?.add_rat(d.at(y, x)?) > zero {
                            inside = false;
                            break;
                        }
                    }
                    if inside {
                        level.push(y);
                    }
                }
                if level != lower_section(phi, gauge, x)? {
                    return Ok(EquivalenceReport {
                        direction,
                        holds: false,
                        detail: format!("level set and lower section differ at point {x}"),
                    });
                }
            }
            Ok(EquivalenceReport {
                direction,
                holds: true,
                detail: "level sets equal lower sections at every point".into(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, ExtendedRational as ER, Infinity};

    fn gauge_from(rows: Vec<Vec<Rat>>) -> FQuasiGauge {
        FQuasiGauge::singleton(QuasiPseudometric::matrix("d", rows))
    }

    fn discrete_gauge(n: usize) -> FQuasiGauge {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| rat_int((i != j) as i64)).collect())
            .collect();
        gauge_from(rows)
    }

    /// Chain p0..p3 with f(p_i) = 3 - i, d(p_j, p_i) = j - i for j >= i and
    /// a large distance upward, so descent flows down the chain.
    fn chain4() -> (Objective, FQuasiGauge) {
        let n = 4;
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i >= j {
                            rat_int((i - j) as i64)
                        } else {
                            rat_int(n as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        let phi = Objective::new(
            "f",
            (0..n).map(|i| ER::from_int((n - 1 - i) as i64)).collect(),
        )
        .unwrap();
        (phi, gauge_from(rows))
    }

    #[test]
    fn chain_descent_certifies_both_parts() {
        let (phi, g) = chain4();
        let cert = ekeland_point(&phi, &g, 0).unwrap();
        assert_eq!(cert.z, 3);
        for ineq in &cert.part_i {
            assert!(ineq.lhs <= ineq.rhs);
        }
        assert_eq!(cert.part_ii.len(), 3);
        for w in &cert.part_ii {
            assert!(w.lhs < w.rhs);
        }
    }

    #[test]
    fn singleton_space_has_vacuous_strict_part() {
        let g = gauge_from(vec![vec![Rat::zero()]]);
        let phi = Objective::new("f", vec![ER::zero()]).unwrap();
        let cert = ekeland_point(&phi, &g, 0).unwrap();
        assert_eq!(cert.z, 0);
        assert!(cert.part_ii.is_empty());
    }

    #[test]
    fn infinite_start_rejected() {
        let g = discrete_gauge(2);
        let phi = Objective::new("f", vec![Infinity, ER::zero()]).unwrap();
        assert!(matches!(
            ekeland_point(&phi, &g, 0),
            Err(QvarError::Hypothesis(_))
        ));
    }

    #[test]
    fn scaled_default_gives_unit_distance_bound() {
        let (phi, g) = chain4();
        let s = ekeland_scaled(&phi, &g, 0, None).unwrap();
        assert!(!s.degenerate);
        for b in &s.bounds {
            assert!(b.lhs <= b.rhs);
            assert_eq!(b.rhs, ER::from_int(1));
        }
        // f(z) + eps*xi*d(z,x0) <= f(x0) on the rescaled gauge: here
        // eps = 3, xi = 1, z = 3, d(3,0) = 3 would give 0 + 9 > 3, so the
        // rescaled descent must stop earlier.
        assert!(s.cert.part_i.iter().all(|i| i.lhs <= i.rhs));
    }

    #[test]
    fn scaled_on_minimizer_start_degenerates() {
        let (phi, g) = chain4();
        let s = ekeland_scaled(&phi, &g, 3, None).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.cert.z, 3);
        assert!(s.cert.part_ii.is_empty());
    }

    #[test]
    fn scaled_rejects_non_epsilon_minimal_start() {
        let (phi, g) = chain4();
        let spec = ScalingSpec::uniform(rat(1, 2), Rat::one(), 1);
        assert!(matches!(
            ekeland_scaled(&phi, &g, 0, Some(spec)),
            Err(QvarError::Hypothesis(_))
        ));
    }

    #[test]
    fn caristi_strong_on_lower_section_map() {
        let (phi, g) = chain4();
        let n = 4;
        let images: Vec<Vec<usize>> = (0..n)
            .map(|x| lower_section(&phi, &g, x).unwrap())
            .collect();
        let map = SetValuedMap { images };
        let cert = caristi_fixed_point(&map, &phi, &g, CaristiVariant::Strong).unwrap();
        assert_eq!(cert.image_of_z, vec![cert.z]);
    }

    #[test]
    fn caristi_weak_identity_map() {
        let (phi, g) = chain4();
        let map = SetValuedMap::selector(&[0, 1, 2, 3]);
        let cert = caristi_fixed_point(&map, &phi, &g, CaristiVariant::Weak).unwrap();
        assert!(cert.image_of_z.contains(&cert.z));
    }

    #[test]
    fn caristi_hypothesis_failure_names_a_point() {
        let g = discrete_gauge(2);
        let phi = Objective::new("f", vec![ER::zero(), ER::zero()]).unwrap();
        // Sends each point to the other; sections are singletons, so the
        // weak hypothesis fails at 0.
        let map = SetValuedMap::selector(&[1, 0]);
        let err = caristi_fixed_point(&map, &phi, &g, CaristiVariant::Weak).unwrap_err();
        assert!(err.to_string().contains("point 0"), "{err}");
    }

    #[test]
    fn takahashi_chain_reaches_exact_infimum() {
        let (phi, g) = chain4();
        let cert = takahashi_minimize(&phi, &g).unwrap();
        assert_eq!(cert.z, 3);
        assert_eq!(cert.f_z, cert.alpha);
    }

    #[test]
    fn takahashi_constant_objective_is_vacuous() {
        let g = discrete_gauge(3);
        let phi = Objective::new("c", vec![ER::from_int(7); 3]).unwrap();
        let cert = takahashi_minimize(&phi, &g).unwrap();
        assert_eq!(cert.f_z, ER::from_int(7));
    }

    #[test]
    fn takahashi_isolated_non_minimizer_refused() {
        // Point 0 has value 1 > 0 = alpha but nothing below it: reaching it
        // from point 1 would cost distance 2 > 1.
        let g = gauge_from(vec![
            vec![Rat::zero(), rat_int(2)],
            vec![rat_int(2), Rat::zero()],
        ]);
        let phi = Objective::new("f", vec![ER::from_int(1), ER::zero()]).unwrap();
        let err = takahashi_minimize(&phi, &g).unwrap_err();
        assert!(err.to_string().contains("point 0"), "{err}");
    }

    #[test]
    fn arutyunov_chain_with_unit_discount() {
        let (phi, g) = chain4();
        let cert = arutyunov_minimize(&phi, &g, &rat_int(1), 0).unwrap();
        assert_eq!(cert.z, 3);
        assert_eq!(cert.f_z, cert.alpha);
        // d(3,0) = 3 <= (f(0) - 0)/1 = 3.
        assert_eq!(cert.bounds[0].lhs, ER::from_int(3));
        assert_eq!(cert.bounds[0].rhs, ER::from_int(3));
    }

    #[test]
    fn arutyunov_overscaled_discount_refused() {
        let (phi, g) = chain4();
        let err = arutyunov_minimize(&phi, &g, &rat_int(10), 0).unwrap_err();
        assert!(matches!(err, QvarError::Hypothesis(_)), "{err}");
    }

    #[test]
    fn arutyunov_start_at_minimizer_returns_it() {
        let (phi, g) = chain4();
        let cert = arutyunov_minimize(&phi, &g, &rat_int(1), 3).unwrap();
        assert_eq!(cert.z, 3);
        assert!(cert.bounds.iter().all(|b| b.lhs == ER::zero()));
    }

    #[test]
    fn zero_bivariate_with_discrete_gauge_pins_the_start() {
        let g = discrete_gauge(3);
        let bi = Bivariate {
            values: vec![vec![ER::zero(); 3]; 3],
        };
        let cert = oettli_thera(&bi, &g, 1).unwrap();
        assert_eq!(cert.z, 1);
        assert_eq!(cert.witnesses.len(), 2);
        for w in &cert.witnesses {
            assert!(w.rhs > w.lhs);
        }
    }

    #[test]
    fn difference_bivariate_reduces_to_the_descent() {
        let (phi, g) = chain4();
        let bi = Bivariate::from_objective_difference(&phi).unwrap();
        let ot = oettli_thera(&bi, &g, 0).unwrap();
        let ek = ekeland_point(&phi, &g, 0).unwrap();
        assert_eq!(ot.z, ek.z);
    }

    #[test]
    fn bivariate_triangle_violation_refused() {
        let g = discrete_gauge(2);
        // F(0,1) = 5 > F(0,0) + F(0,1) is fine; break it via F(0,1) >
        // F(0,1)+F(1,1)? Diagonal is 0, so use three points.
        let g3 = discrete_gauge(3);
        let mut values = vec![vec![ER::zero(); 3]; 3];
        values[0][2] = ER::from_int(5);
        values[0][1] = ER::from_int(1);
        values[1][2] = ER::from_int(1);
        let bi = Bivariate { values };
        assert!(matches!(
            oettli_thera(&bi, &g3, 0),
            Err(QvarError::Hypothesis(_))
        ));
        let _ = g;
    }

    #[test]
    fn equivalence_directions_on_the_chain() {
        let (phi, g) = chain4();
        for dir in [
            EquivalenceDirection::MinimizationToFixedPoint,
            EquivalenceDirection::MinimizationToInfimum,
            EquivalenceDirection::EquilibriumCorrespondence,
        ] {
            let r = equivalence_witness(dir, &phi, &g).unwrap();
            assert!(r.holds, "{dir:?}: {}", r.detail);
        }
        // The chain has a minimal point, so the negative constructions do
        // not apply.
        assert!(matches!(
            equivalence_witness(EquivalenceDirection::NoMinimizationToNoFixedPoint, &phi, &g),
            Err(QvarError::NotApplicable(_))
        ));
    }

    #[test]
    fn negative_construction_on_zero_distance_instance() {
        // On finite T1 instances a minimal element always exists, so the
        // negative directions are demonstrated on non-T1 gauges: with the
        // zero gauge and a constant objective everything sits below
        // everything, no point is minimal, and the section selector must
        // come out fixed-point-free.
        let rows = vec![vec![Rat::zero(); 2]; 2];
        let g = gauge_from(rows);
        let phi = Objective::new("c", vec![ER::zero(), ER::zero()]).unwrap();
        for dir in [
            EquivalenceDirection::NoMinimizationToNoFixedPoint,
            EquivalenceDirection::NoMinimizationToNoInfimumWitness,
        ] {
            let r = equivalence_witness(dir, &phi, &g).unwrap();
            assert!(r.holds, "{dir:?}: {}", r.detail);
        }
    }
}
