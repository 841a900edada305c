//! Brute-force ground truth: exhaustive solution-set enumeration by
//! definition unfolding and re-verification of solver certificates from raw
//! data.
//!
//! Nothing here calls a solver. Each enumeration is a direct loop over the
//! distance matrices and objective values, deliberately duplicating the
//! definitions so a solver bug cannot hide in shared code; each verifier
//! recomputes both sides of every claimed inequality and fails when a
//! stored side disagrees with the recomputed one.

use crate::error::Result;
use crate::order::Objective;
use crate::principles::{
    ArutyunovCertificate, Bivariate, CaristiCertificate, CaristiVariant, EkelandCertificate,
    OettliTheraCertificate, ScaledEkeland, SetValuedMap, TakahashiCertificate,
};
use crate::rational::{ExtendedRational, Finite, Rat};
use crate::space::FQuasiGauge;
use num::One;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Pass,
    Fail(String),
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }

    fn fail(msg: impl Into<String>) -> Self {
        CheckResult::Fail(msg.into())
    }
}

/// All order-minimal points: z such that no other y has
/// phi(y) + d(y,z) <= phi(z) for every member. Ascending.
pub fn enumerate_minimal(phi: &Objective, gauge: &FQuasiGauge) -> Result<Vec<usize>> {
    let n = gauge.dim()?;
    let mut out = Vec::new();
    for z in 0..n {
        let mut minimal = true;
        for y in 0..n {
            if y == z {
                continue;
            }
            let mut below = true;
            for d in &gauge.members {
                if phi.at(y)?.add_rat(d.at(y, z)?) > *phi.at(z)? {
                    below = false;
                    break;
                }
            }
            if below {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(z);
        }
    }
    Ok(out)
}

/// All points satisfying both conclusions with anchor x0: descent from x0
/// in every member, and strict separation from every other point by some
/// member. Ascending.
pub fn enumerate_ekeland(
    phi: &Objective,
    gauge: &FQuasiGauge,
    x0: usize,
) -> Result<Vec<usize>> {
    let n = gauge.dim()?;
    let mut out = Vec::new();
    'z: for z in 0..n {
        for d in &gauge.members {
            if phi.at(z)?.add_rat(d.at(z, x0)?) > *phi.at(x0)? {
                continue 'z;
            }
        }
        for x in 0..n {
            if x == z {
                continue;
            }
            let mut separated = false;
            for d in &gauge.members {
                if *phi.at(z)? < phi.at(x)?.add_rat(d.at(x, z)?) {
                    separated = true;
                    break;
                }
            }
            if !separated {
                continue 'z;
            }
        }
        out.push(z);
    }
    Ok(out)
}

/// All points attaining the exact infimum. Ascending.
pub fn enumerate_takahashi(phi: &Objective) -> Vec<usize> {
    (0..phi.len())
        .filter(|&z| phi.values[z] == phi.alpha)
        .collect()
}

/// All fixed points of the set-valued map under the chosen reading.
pub fn enumerate_caristi_fixed(map: &SetValuedMap, variant: CaristiVariant) -> Vec<usize> {
    (0..map.images.len())
        .filter(|&z| match variant {
            CaristiVariant::Weak => map.images[z].contains(&z),
            CaristiVariant::Strong => map.images[z] == vec![z],
        })
        .collect()
}

/// All points z in the level set of x0 whose equilibrium residual against
/// every other point is made strictly positive by some member. Ascending.
pub fn enumerate_oettli_thera(
    bi: &Bivariate,
    gauge: &FQuasiGauge,
    x0: usize,
) -> Result<Vec<usize>> {
    let n = gauge.dim()?;
    let zero = ExtendedRational::zero();
    let mut out = Vec::new();
    'z: for z in 0..n {
        for d in &gauge.members {
            if bi.at(x0, z)?.add_rat(d.at(z, x0)?) > zero {
                continue 'z;
            }
        }
        for x in 0..n {
            if x == z {
                continue;
            }
            let mut positive = false;
            for d in &gauge.members {
                if bi.at(z, x)?.add_rat(d.at(x, z)?) > zero {
                    positive = true;
                    break;
                }
            }
            if !positive {
                continue 'z;
            }
        }
        out.push(z);
    }
    Ok(out)
}

fn member_distance<'a>(
    gauge: &'a FQuasiGauge,
    name: &str,
) -> std::result::Result<&'a crate::space::QuasiPseudometric, String> {
    gauge
        .member_named(name)
        .map(|(_, d)| d)
        .ok_or_else(|| format!("certificate references unknown member {name:?}"))
}

/// Re-checks a descent certificate against the instance it claims to hold
/// on: part I must list every member once with recomputed sides, part II
/// must cover every other point with a strict witness.
pub fn verify_ekeland(
    phi: &Objective,
    gauge: &FQuasiGauge,
    cert: &EkelandCertificate,
) -> Result<CheckResult> {
    verify_ekeland_scaled_inner(phi, gauge, cert, None, false)
}

/// Shared core: `scaling` multiplies member k's distances by eps * xi[k]
/// before recomputation; `skip_part_ii` accepts degenerate certificates
/// that claim no strict part.
fn verify_ekeland_scaled_inner(
    phi: &Objective,
    gauge: &FQuasiGauge,
    cert: &EkelandCertificate,
    scaling: Option<(&Rat, &[Rat])>,
    skip_part_ii: bool,
) -> Result<CheckResult> {
    let n = gauge.dim()?;
    if cert.z >= n || cert.x0 >= n {
        return Ok(CheckResult::fail("certificate points outside the instance"));
    }
    let factor = |k: usize| -> Rat {
        match scaling {
            None => Rat::one(),
            Some((eps, xi)) => eps * &xi[k],
        }
    };
    if let Some((_, xi)) = scaling {
        if xi.len() != gauge.members.len() {
            return Ok(CheckResult::fail("scaling factor count mismatch"));
        }
    }
    // Part I: exactly the member set, each inequality recomputed.
    if cert.part_i.len() != gauge.members.len() {
        return Ok(CheckResult::fail("part I does not cover every member"));
    }
    for ineq in &cert.part_i {
        let (k, d) = match gauge.member_named(&ineq.member) {
            Some(kd) => kd,
            None => return Ok(CheckResult::fail("unknown member in part I")),
        };
        let lhs = phi
            .at(cert.z)?
            .add_rat(&(d.at(cert.z, cert.x0)?.clone() * factor(k)));
        let rhs = phi.at(cert.x0)?.clone();
        if lhs != ineq.lhs || rhs != ineq.rhs {
            return Ok(CheckResult::fail(format!(
                "part I sides disagree with recomputation for member {}",
                ineq.member
            )));
        }
        if lhs > rhs {
            return Ok(CheckResult::fail(format!(
                "part I inequality fails for member {}",
                ineq.member
            )));
        }
    }
    if skip_part_ii {
        return Ok(CheckResult::Pass);
    }
    // Part II: every x != z exactly once, strict.
    let mut covered = vec![false; n];
    covered[cert.z] = true;
    for w in &cert.part_ii {
        if w.x >= n || covered[w.x] {
            return Ok(CheckResult::fail("part II coverage broken"));
        }
        covered[w.x] = true;
        let (k, d) = match gauge.member_named(&w.member) {
            Some(kd) => kd,
            None => return Ok(CheckResult::fail("unknown member in part II")),
        };
        let lhs = phi.at(cert.z)?.clone();
        let rhs = phi
            .at(w.x)?
            .add_rat(&(d.at(w.x, cert.z)?.clone() * factor(k)));
        if lhs != w.lhs || rhs != w.rhs {
            return Ok(CheckResult::fail(format!(
                "part II sides disagree with recomputation at point {}",
                w.x
            )));
        }
        if lhs >= rhs {
            return Ok(CheckResult::fail(format!(
                "part II inequality not strict at point {}",
                w.x
            )));
        }
    }
    if covered.iter().any(|&c| !c) {
        return Ok(CheckResult::fail("part II misses a point"));
    }
    Ok(CheckResult::Pass)
}

/// Re-checks a rescaled certificate: the inner certificate against the
/// rescaled distances, plus the per-member bound d(z,x0) <= 1/xi(d) on the
/// original distances.
pub fn verify_scaled_ekeland(
    phi: &Objective,
    gauge: &FQuasiGauge,
    s: &ScaledEkeland,
) -> Result<CheckResult> {
    let inner = verify_ekeland_scaled_inner(
        phi,
        gauge,
        &s.cert,
        if s.degenerate { None } else { Some((&s.eps, &s.xi)) },
        s.degenerate,
    )?;
    if !inner.passed() {
        return Ok(inner);
    }
    if s.bounds.len() != gauge.members.len() {
        return Ok(CheckResult::fail("bound list does not cover every member"));
    }
    for (k, b) in s.bounds.iter().enumerate() {
        let d = match member_distance(gauge, &b.member) {
            Ok(d) => d,
            Err(e) => return Ok(CheckResult::fail(e)),
        };
        let lhs = Finite(d.at(s.cert.z, s.cert.x0)?.clone());
        let rhs = Finite(Rat::one() / &s.xi[k]);
        if lhs != b.lhs || rhs != b.rhs {
            return Ok(CheckResult::fail(format!(
                "bound sides disagree with recomputation for member {}",
                b.member
            )));
        }
        if lhs > rhs {
            return Ok(CheckResult::fail(format!(
                "distance bound fails for member {}",
                b.member
            )));
        }
    }
    Ok(CheckResult::Pass)
}

pub fn verify_takahashi(phi: &Objective, cert: &TakahashiCertificate) -> CheckResult {
    if cert.z >= phi.len() {
        return CheckResult::fail("certificate point outside the instance");
    }
    if phi.values[cert.z] != cert.f_z {
        return CheckResult::fail("stored value disagrees with the objective");
    }
    if phi.alpha != cert.alpha {
        return CheckResult::fail("stored infimum disagrees with recomputation");
    }
    if cert.f_z != cert.alpha {
        return CheckResult::fail("certified point does not attain the infimum");
    }
    CheckResult::Pass
}

pub fn verify_caristi(map: &SetValuedMap, cert: &CaristiCertificate) -> CheckResult {
    if cert.z >= map.images.len() {
        return CheckResult::fail("certificate point outside the instance");
    }
    if map.images[cert.z] != cert.image_of_z {
        return CheckResult::fail("stored image disagrees with the map");
    }
    let ok = match cert.variant {
        CaristiVariant::Weak => cert.image_of_z.contains(&cert.z),
        CaristiVariant::Strong => cert.image_of_z == vec![cert.z],
    };
    if ok {
        CheckResult::Pass
    } else {
        CheckResult::fail("fixed-point condition fails at the certified point")
    }
}

pub fn verify_arutyunov(
    phi: &Objective,
    gauge: &FQuasiGauge,
    cert: &ArutyunovCertificate,
) -> Result<CheckResult> {
    let n = gauge.dim()?;
    if cert.z >= n || cert.x0 >= n {
        return Ok(CheckResult::fail("certificate points outside the instance"));
    }
    if phi.alpha != cert.alpha || *phi.at(cert.z)? != cert.f_z || cert.f_z != cert.alpha {
        return Ok(CheckResult::fail(
            "infimum attainment disagrees with recomputation",
        ));
    }
    let Finite(fx0) = phi.at(cert.x0)? else {
        return Ok(CheckResult::fail("anchor has infinite objective value"));
    };
    let Finite(alpha) = &phi.alpha else {
        return Ok(CheckResult::fail("infimum is not finite"));
    };
    let rhs_expected = Finite((fx0 - alpha) / &cert.gamma);
    if cert.bounds.len() != gauge.members.len() {
        return Ok(CheckResult::fail("bound list does not cover every member"));
    }
    for b in &cert.bounds {
        let d = match member_distance(gauge, &b.member) {
            Ok(d) => d,
            Err(e) => return Ok(CheckResult::fail(e)),
        };
        let lhs = Finite(d.at(cert.z, cert.x0)?.clone());
        if lhs != b.lhs || b.rhs != rhs_expected {
            return Ok(CheckResult::fail(format!(
                "bound sides disagree with recomputation for member {}",
                b.member
            )));
        }
        if lhs > rhs_expected {
            return Ok(CheckResult::fail(format!(
                "distance bound fails for member {}",
                b.member
            )));
        }
    }
    Ok(CheckResult::Pass)
}

pub fn verify_oettli_thera(
    bi: &Bivariate,
    gauge: &FQuasiGauge,
    cert: &OettliTheraCertificate,
) -> Result<CheckResult> {
    let n = gauge.dim()?;
    if cert.z >= n || cert.x0 >= n {
        return Ok(CheckResult::fail("certificate points outside the instance"));
    }
    let zero = ExtendedRational::zero();
    if cert.membership.len() != gauge.members.len() {
        return Ok(CheckResult::fail(
            "membership list does not cover every member",
        ));
    }
    for m in &cert.membership {
        let d = match member_distance(gauge, &m.member) {
            Ok(d) => d,
            Err(e) => return Ok(CheckResult::fail(e)),
        };
        let lhs = bi.at(cert.x0, cert.z)?.add_rat(d.at(cert.z, cert.x0)?);
        if lhs != m.lhs || m.rhs != zero {
            return Ok(CheckResult::fail(format!(
                "membership sides disagree with recomputation for member {}",
                m.member
            )));
        }
        if lhs > zero {
            return Ok(CheckResult::fail(format!(
                "level-set membership fails for member {}",
                m.member
            )));
        }
    }
    let mut covered = vec![false; n];
    covered[cert.z] = true;
    for w in &cert.witnesses {
        if w.x >= n || covered[w.x] {
            return Ok(CheckResult::fail("witness coverage broken"));
        }
        covered[w.x] = true;
        let d = match member_distance(gauge, &w.member) {
            Ok(d) => d,
            Err(e) => return Ok(CheckResult::fail(e)),
        };
        let rhs = bi.at(cert.z, w.x)?.add_rat(d.at(w.x, cert.z)?);
        if w.lhs != zero || rhs != w.rhs {
            return Ok(CheckResult::fail(format!(
                "witness sides disagree with recomputation at point {}",
                w.x
            )));
        }
        if rhs <= zero {
            return Ok(CheckResult::fail(format!(
                "equilibrium residual not strictly positive at point {}",
                w.x
            )));
        }
    }
    if covered.iter().any(|&c| !c) {
        return Ok(CheckResult::fail("a point has no witness"));
    }
    Ok(CheckResult::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principles::{ekeland_point, ekeland_scaled, oettli_thera, takahashi_minimize};
    use crate::rational::{rat_int, ExtendedRational as ER};
    use crate::space::QuasiPseudometric;

    fn chain4() -> (Objective, FQuasiGauge) {
        let n = 4usize;
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
        (
            phi,
            FQuasiGauge::singleton(QuasiPseudometric::matrix("d", rows)),
        )
    }

    #[test]
    fn two_point_reference_has_the_expected_minimal_set() {
        let g = FQuasiGauge::singleton(QuasiPseudometric::matrix(
            "d",
            vec![
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(1), rat_int(0)],
            ],
        ));
        let phi = Objective::new("phi", vec![ER::from_int(2), ER::from_int(1)]).unwrap();
        assert_eq!(enumerate_minimal(&phi, &g).unwrap(), vec![1]);
    }

    #[test]
    fn constant_objective_with_positive_distances_makes_all_points_minimal() {
        let g = FQuasiGauge::singleton(QuasiPseudometric::matrix(
            "d",
            (0..3)
                .map(|i| (0..3).map(|j| rat_int((i != j) as i64)).collect())
                .collect(),
        ));
        let phi = Objective::new("c", vec![ER::zero(); 3]).unwrap();
        assert_eq!(enumerate_minimal(&phi, &g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn solver_point_is_in_the_enumerated_set_and_verifies() {
        let (phi, g) = chain4();
        let cert = ekeland_point(&phi, &g, 0).unwrap();
        let all = enumerate_ekeland(&phi, &g, 0).unwrap();
        assert!(all.contains(&cert.z));
        assert!(verify_ekeland(&phi, &g, &cert).unwrap().passed());
    }

    #[test]
    fn swapped_sides_fail_verification() {
        let (phi, g) = chain4();
        let mut cert = ekeland_point(&phi, &g, 0).unwrap();
        let w = &mut cert.part_ii[0];
        std::mem::swap(&mut w.lhs, &mut w.rhs);
        assert!(!verify_ekeland(&phi, &g, &cert).unwrap().passed());
        let mut cert2 = ekeland_point(&phi, &g, 0).unwrap();
        cert2.part_i[0].lhs = ER::from_int(-100);
        assert!(!verify_ekeland(&phi, &g, &cert2).unwrap().passed());
    }

    #[test]
    fn wrong_descent_point_fails_verification() {
        let (phi, g) = chain4();
        let mut cert = ekeland_point(&phi, &g, 0).unwrap();
        // Claim a z outside the descent set of x0 without fixing part I.
        cert.z = 0;
        assert!(!verify_ekeland(&phi, &g, &cert).unwrap().passed());
    }

    #[test]
    fn scaled_certificate_verifies_and_bound_tampering_fails() {
        let (phi, g) = chain4();
        let s = ekeland_scaled(&phi, &g, 0, None).unwrap();
        assert!(verify_scaled_ekeland(&phi, &g, &s).unwrap().passed());
        let mut bad = s.clone();
        bad.bounds[0].rhs = ER::from_int(100);
        assert!(!verify_scaled_ekeland(&phi, &g, &bad).unwrap().passed());
    }

    #[test]
    fn takahashi_certificate_round_trip_and_tamper() {
        let (phi, g) = chain4();
        let cert = takahashi_minimize(&phi, &g).unwrap();
        assert!(verify_takahashi(&phi, &cert).passed());
        assert_eq!(enumerate_takahashi(&phi), vec![3]);
        let mut bad = cert.clone();
        bad.z = 1;
        assert!(!verify_takahashi(&phi, &bad).passed());
    }

    #[test]
    fn equilibrium_enumeration_matches_descent_enumeration() {
        let (phi, g) = chain4();
        let bi = Bivariate::from_objective_difference(&phi).unwrap();
        assert_eq!(
            enumerate_oettli_thera(&bi, &g, 0).unwrap(),
            enumerate_ekeland(&phi, &g, 0).unwrap()
        );
        let cert = oettli_thera(&bi, &g, 0).unwrap();
        assert!(verify_oettli_thera(&bi, &g, &cert).unwrap().passed());
        let mut bad = cert.clone();
        bad.witnesses[0].rhs = ER::zero();
        assert!(!verify_oettli_thera(&bi, &g, &bad).unwrap().passed());
    }

    #[test]
    fn caristi_enumerations() {
        let map = SetValuedMap {
            images: vec![vec![1], vec![1, 2], vec![2]],
        };
        assert_eq!(enumerate_caristi_fixed(&map, CaristiVariant::Weak), vec![1, 2]);
        assert_eq!(enumerate_caristi_fixed(&map, CaristiVariant::Strong), vec![2]);
    }
}
