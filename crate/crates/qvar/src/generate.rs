//! Seeded random instance generation. Every profile constructs an instance
//! by design and then re-checks the claimed property with the validators,
//! so a generated instance is never silently out of spec.

use std::collections::BTreeMap;

use num::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand::{Rng, SeedableRng};

use crate::error::{QvarError, Result};
use crate::instance::{FiniteInstance, Instance};
use crate::principles::takahashi_minimize;
use crate::rational::{rat, rat_int, ExtendedRational, Finite, Rat};
use crate::space::{validate_f_quasi_gauge, FQuasiGauge, QuasiPseudometric};
use crate::topology::{separation_class, SeparationClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Random gauge whose topology separates every ordered pair.
    T1,
    /// Random gauge with exactly one ordered pair at distance zero in every
    /// member, so separation holds in one direction only.
    T0NotT1,
    /// A descending chain: moving to a smaller index is cheap, moving up
    /// costs a full lap.
    Chain,
    /// T1 gauge rescaled so the global minimizer dominates every point
    /// above the infimum.
    TakahashiValid,
    /// Same construction as `TakahashiValid`; the canonical image map
    /// (the full lower section at each point) then satisfies both
    /// fixed-point hypotheses.
    CaristiValid,
}

impl Profile {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "T1" | "t1" => Profile::T1,
            "T0-not-T1" | "t0-not-t1" => Profile::T0NotT1,
            "chain" => Profile::Chain,
            "takahashi-valid" => Profile::TakahashiValid,
            "caristi-valid" => Profile::CaristiValid,
            other => {
                return Err(QvarError::InvalidArgument(format!(
                    "unknown profile {other:?} (known: t1, t0-not-t1, chain, takahashi-valid, caristi-valid)"
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Profile::T1 => "t1",
            Profile::T0NotT1 => "t0-not-t1",
            Profile::Chain => "chain",
            Profile::TakahashiValid => "takahashi-valid",
            Profile::CaristiValid => "caristi-valid",
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(0..=12i64);
    let den = rng.gen_range(1..=4i64);
    rat(num, den)
}

fn zero_diag_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::zero() } else { random_rat(rng) })
                .collect()
        })
        .collect()
}

/// Random members capped by a constant "top" member. The top member is a
/// pointwise upper bound for the family, which settles directedness, and it
/// serves as every member's relax witness: for any z the right-hand side
/// d'(x,z) + d'(z,y) is either C (z an endpoint) or 2C, and C bounds every
/// entry of every member.
fn capped_gauge(rng: &mut ChaCha8Rng, n: usize, members: usize) -> FQuasiGauge {
    let random_count = members.saturating_sub(1);
    let mut matrices: Vec<Vec<Vec<Rat>>> =
        (0..random_count).map(|_| zero_diag_matrix(rng, n)).collect();
    let mut cap = Rat::one();
    for m in &matrices {
        for row in m {
            for v in row {
                if *v > cap {
                    cap = v.clone();
                }
            }
        }
    }
    let top: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::zero() } else { cap.clone() })
                .collect()
        })
        .collect();
    matrices.push(top);
    let top_index = matrices.len() - 1;
    let members: Vec<QuasiPseudometric> = matrices
        .into_iter()
        .enumerate()
        .map(|(k, m)| QuasiPseudometric::matrix(&format!("d{k}"), m))
        .collect();
    let relax = vec![top_index; members.len()];
    FQuasiGauge {
        members,
        relax,
        symmetric: false,
    }
}

fn set_entry(gauge: &mut FQuasiGauge, i: usize, j: usize, v: Rat) {
    for d in &mut gauge.members {
        if let crate::space::DistanceForm::Matrix(rows) = &mut d.form {
            rows[i][j] = v.clone();
        }
    }
}

fn random_objective(rng: &mut ChaCha8Rng, n: usize) -> Vec<ExtendedRational> {
    (0..n).map(|_| Finite(random_rat(rng))).collect()
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn max_member_distance(gauge: &FQuasiGauge, from: usize, to: usize) -> Result<Rat> {
    let mut best = Rat::zero();
    for d in &gauge.members {
        let v = d.at(from, to)?;
        if *v > best {
            best = v.clone();
        }
    }
    Ok(best)
}

/// Rescales the gauge so the smallest-index minimizer of `values` sits below
/// every point with a value above the infimum. The scale is the largest one
/// that keeps f(y*) + c d(y*, x) <= f(x) exact for all such x and members d.
fn dominate_by_minimizer(
    gauge: &mut FQuasiGauge,
    values: &[ExtendedRational],
) -> Result<()> {
    let alpha = values
        .iter()
        .filter(|v| v.is_finite())
        .min()
        .cloned()
        .expect("generated objectives are proper");
    let y_star = values.iter().position(|v| *v == alpha).unwrap();
    let mut scale: Option<Rat> = None;
    for (x, fx) in values.iter().enumerate() {
        let Finite(fx) = fx else { continue };
        let Finite(a) = &alpha else { unreachable!() };
        if fx <= a {
            continue;
        }
        let gap = fx - a;
        let dmax = max_member_distance(gauge, y_star, x)?;
        if dmax.is_zero() {
            continue;
        }
        let c = gap / dmax;
        if scale.as_ref().map(|s| c < *s).unwrap_or(true) {
            scale = Some(c);
        }
    }
    if let Some(c) = scale {
        if c < Rat::one() {
            for d in &mut gauge.members {
                if let crate::space::DistanceForm::Matrix(rows) = &mut d.form {
                    for row in rows {
                        for v in row.iter_mut() {
                            *v = &*v * &c;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn chain_instance(rng: &mut ChaCha8Rng, n: usize) -> FiniteInstance {
    let scale = rat(rng.gen_range(1..=4i64), rng.gen_range(1..=3i64));
    let lap = rat_int(n as i64);
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rat::zero()
                    } else if i > j {
                        &scale * rat_int((i - j) as i64)
                    } else {
                        &scale * &lap
                    }
                })
                .collect()
        })
        .collect();
    let values: Vec<ExtendedRational> = (0..n)
        .map(|i| Finite(&scale * rat_int((n - 1 - i) as i64)))
        .collect();
    FiniteInstance {
        points: point_names(n),
        gauge: FQuasiGauge::singleton(QuasiPseudometric::matrix("d0", rows)),
        objectives: BTreeMap::from([("f".to_string(), values)]),
        bivariates: BTreeMap::new(),
    }
}

/// Generates one instance of the given profile. `members` counts gauge
/// members including the constant cap (`chain` always has one member).
/// The result is re-validated before it is returned.
pub fn generate(profile: Profile, n: usize, members: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with(profile, n, members, &mut rng)
}

pub fn generate_with(
    profile: Profile,
    n: usize,
    members: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Instance> {
    if n == 0 {
        return Err(QvarError::InvalidArgument("need at least one point".into()));
    }
    if members == 0 && profile != Profile::Chain {
        return Err(QvarError::InvalidArgument(
            "need at least one gauge member".into(),
        ));
    }
    if profile == Profile::T0NotT1 && n < 2 {
        return Err(QvarError::InvalidArgument(
            "a one-point instance cannot fail separation".into(),
        ));
    }
    let inst = match profile {
        Profile::Chain => chain_instance(rng, n),
        Profile::T1 => FiniteInstance {
            points: point_names(n),
            gauge: capped_gauge(rng, n, members),
            objectives: BTreeMap::from([("f".to_string(), random_objective(rng, n))]),
            bivariates: BTreeMap::new(),
        },
        Profile::T0NotT1 => {
            let mut gauge = capped_gauge(rng, n, members);
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            set_entry(&mut gauge, i, j, Rat::zero());
            FiniteInstance {
                points: point_names(n),
                gauge,
                objectives: BTreeMap::from([("f".to_string(), random_objective(rng, n))]),
                bivariates: BTreeMap::new(),
            }
        }
        Profile::TakahashiValid | Profile::CaristiValid => {
            let mut gauge = capped_gauge(rng, n, members);
            let values = random_objective(rng, n);
            dominate_by_minimizer(&mut gauge, &values)?;
            FiniteInstance {
                points: point_names(n),
                gauge,
                objectives: BTreeMap::from([("f".to_string(), values)]),
                bivariates: BTreeMap::new(),
            }
        }
    };
    audit(profile, &inst)?;
    Ok(Instance::Finite(inst))
}

fn audit(profile: Profile, inst: &FiniteInstance) -> Result<()> {
    let violations = validate_f_quasi_gauge(&inst.gauge, inst.n())?;
    if !violations.is_empty() {
        return Err(QvarError::Verification(format!(
            "generated gauge violates {}",
            violations[0].axiom
        )));
    }
    let sep = separation_class(&inst.gauge)?;
    let sep_ok = match profile {
        Profile::T0NotT1 => matches!(sep, SeparationClass::T0 { .. }),
        _ => sep.is_t1(),
    };
    if !sep_ok {
        return Err(QvarError::Verification(format!(
            "generated instance has separation class {}",
            sep.label()
        )));
    }
    if matches!(profile, Profile::TakahashiValid | Profile::CaristiValid) {
        let phi = inst.objective("f")?;
        takahashi_minimize(&phi, &inst.gauge)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{is_minimal, lower_section, minimal_element};
    use crate::principles::{caristi_fixed_point, CaristiVariant, SetValuedMap};

    #[test]
    fn profiles_generate_and_self_audit() {
        for (k, profile) in [
            Profile::T1,
            Profile::T0NotT1,
            Profile::Chain,
            Profile::TakahashiValid,
            Profile::CaristiValid,
        ]
        .into_iter()
        .enumerate()
        {
            for seed in 0..20u64 {
                let n = 2 + (seed as usize % 7);
                let inst = generate(profile, n, 3, seed * 31 + k as u64).unwrap();
                let f = inst.as_finite().unwrap();
                assert_eq!(f.n(), n, "{}", profile.id());
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = generate(Profile::T1, 5, 3, 42).unwrap();
        let b = generate(Profile::T1, 5, 3, 42).unwrap();
        let c = generate(Profile::T1, 5, 3, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn one_point_t0_not_t1_is_unsatisfiable() {
        assert!(matches!(
            generate(Profile::T0NotT1, 1, 2, 7),
            Err(QvarError::InvalidArgument(_))
        ));
    }

    #[test]
    fn chain_profile_descends_to_the_last_point() {
        let inst = generate(Profile::Chain, 6, 1, 9).unwrap();
        let f = inst.as_finite().unwrap();
        let phi = f.objective("f").unwrap();
        let (z, trace) = minimal_element(&phi, &f.gauge, 0).unwrap();
        assert_eq!(z, 5);
        assert!(trace.chain.len() >= 2);
        assert!(is_minimal(&phi, &f.gauge, 5).unwrap());
    }

    #[test]
    fn caristi_valid_instances_accept_the_section_map() {
        for seed in 0..15u64 {
            let inst = generate(Profile::CaristiValid, 5, 3, seed).unwrap();
            let f = inst.as_finite().unwrap();
            let phi = f.objective("f").unwrap();
            let images: Vec<Vec<usize>> = (0..f.n())
                .map(|x| lower_section(&phi, &f.gauge, x).unwrap())
                .collect();
            let map = SetValuedMap { images };
            let strong =
                caristi_fixed_point(&map, &phi, &f.gauge, CaristiVariant::Strong).unwrap();
            assert_eq!(map.images[strong.z], vec![strong.z]);
            caristi_fixed_point(&map, &phi, &f.gauge, CaristiVariant::Weak).unwrap();
        }
    }
}
