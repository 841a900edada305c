//! Batch runs over generated instances with a deterministic plain-text
//! report. Same configuration and seed means a byte-identical report.

use std::fmt::Write as _;

use crate::error::{QvarError, Result};
use crate::generate::{generate, Profile};
use crate::instance::FiniteInstance;
use crate::oracle::{
    verify_arutyunov, verify_caristi, verify_ekeland, verify_oettli_thera, verify_scaled_ekeland,
    verify_takahashi, CheckResult,
};
use crate::order::lower_section;
use crate::principles::{
    arutyunov_minimize, caristi_fixed_point, ekeland_point, ekeland_scaled, oettli_thera,
    takahashi_minimize, Bivariate, CaristiVariant, SetValuedMap,
};
use crate::rational::rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrincipleKind {
    Ekeland,
    ScaledEkeland,
    Takahashi,
    Caristi,
    Arutyunov,
    OettliThera,
}

impl PrincipleKind {
    pub const ALL: [PrincipleKind; 6] = [
        PrincipleKind::Ekeland,
        PrincipleKind::ScaledEkeland,
        PrincipleKind::Takahashi,
        PrincipleKind::Caristi,
        PrincipleKind::Arutyunov,
        PrincipleKind::OettliThera,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ekeland" => PrincipleKind::Ekeland,
            "scaled-ekeland" => PrincipleKind::ScaledEkeland,
            "takahashi" => PrincipleKind::Takahashi,
            "caristi" => PrincipleKind::Caristi,
            "arutyunov" => PrincipleKind::Arutyunov,
            "oettli-thera" => PrincipleKind::OettliThera,
            other => {
                return Err(QvarError::InvalidArgument(format!(
                    "unknown principle {other:?} (known: ekeland, scaled-ekeland, takahashi, caristi, arutyunov, oettli-thera)"
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            PrincipleKind::Ekeland => "ekeland",
            PrincipleKind::ScaledEkeland => "scaled-ekeland",
            PrincipleKind::Takahashi => "takahashi",
            PrincipleKind::Caristi => "caristi",
            PrincipleKind::Arutyunov => "arutyunov",
            PrincipleKind::OettliThera => "oettli-thera",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub profile: Profile,
    pub count: usize,
    pub n: usize,
    pub members: usize,
    pub seed: u64,
    pub principles: Vec<PrincipleKind>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteTotals {
    pub solved: usize,
    pub refused: usize,
    pub verified: usize,
    pub failed: usize,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub text: String,
    pub totals: SuiteTotals,
}

impl SuiteReport {
    /// 0 all solved certificates verified, 2 nothing failed but at least one
    /// hypothesis refusal, 1 any verification failure.
    pub fn exit_code(&self) -> i32 {
        if self.totals.failed > 0 {
            1
        } else if self.totals.refused > 0 {
            2
        } else {
            0
        }
    }
}

enum Run {
    Solved { summary: String, check: CheckResult },
    Refused(String),
    Failed(String),
}

fn run_principle(kind: PrincipleKind, inst: &FiniteInstance) -> Result<Run> {
    let phi = inst.objective("f")?;
    let gauge = &inst.gauge;
    let x0 = phi
        .values
        .iter()
        .position(|v| v.is_finite())
        .expect("objective is proper");
    let outcome = match kind {
        PrincipleKind::Ekeland => ekeland_point(&phi, gauge, x0).map(|cert| {
            let check = verify_ekeland(&phi, gauge, &cert);
            (format!("x0={} z={}", cert.x0, cert.z), check)
        }),
        PrincipleKind::ScaledEkeland => ekeland_scaled(&phi, gauge, x0, None).map(|s| {
            let check = verify_scaled_ekeland(&phi, gauge, &s);
            (
                format!(
                    "x0={} z={}{}",
                    s.cert.x0,
                    s.cert.z,
                    if s.degenerate { " degenerate" } else { "" }
                ),
                check,
            )
        }),
        PrincipleKind::Takahashi => takahashi_minimize(&phi, gauge).map(|cert| {
            let check = Ok(verify_takahashi(&phi, &cert));
            (format!("z={}", cert.z), check)
        }),
        PrincipleKind::Caristi => {
            let images = (0..inst.n())
                .map(|x| lower_section(&phi, gauge, x))
                .collect::<Result<Vec<_>>>()?;
            let map = SetValuedMap { images };
            caristi_fixed_point(&map, &phi, gauge, CaristiVariant::Strong).map(|cert| {
                let check = Ok(verify_caristi(&map, &cert));
                (format!("z={}", cert.z), check)
            })
        }
        PrincipleKind::Arutyunov => {
            arutyunov_minimize(&phi, gauge, &rat(1, 2), x0).map(|cert| {
                let check = verify_arutyunov(&phi, gauge, &cert);
                (format!("x0={} z={}", cert.x0, cert.z), check)
            })
        }
        PrincipleKind::OettliThera => Bivariate::from_objective_difference(&phi)
            .and_then(|bi| {
                let cert = oettli_thera(&bi, gauge, x0)?;
                let check = verify_oettli_thera(&bi, gauge, &cert);
                Ok((format!("x0={} z={}", cert.x0, cert.z), check))
            }),
    };
    Ok(match outcome {
        Ok((summary, check)) => Run::Solved {
            summary,
            check: check?,
        },
        Err(QvarError::Hypothesis(msg)) | Err(QvarError::NotApplicable(msg)) => Run::Refused(msg),
        Err(QvarError::Verification(msg)) => Run::Failed(msg),
        Err(e) => return Err(e),
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut text = String::new();
    writeln!(
        text,
        "suite profile={} count={} n={} members={} seed={}",
        cfg.profile.id(),
        cfg.count,
        cfg.n,
        cfg.members,
        cfg.seed
    )
    .unwrap();
    let mut totals = SuiteTotals::default();
    for i in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(i as u64);
        let inst = generate(cfg.profile, cfg.n, cfg.members, seed)?;
        let finite = inst.as_finite()?;
        for kind in &cfg.principles {
            let line = match run_principle(*kind, finite)? {
                Run::Solved { summary, check } => {
                    totals.solved += 1;
                    match check {
                        CheckResult::Pass => {
                            totals.verified += 1;
                            format!("solved {summary} verified")
                        }
                        CheckResult::Fail(msg) => {
                            totals.failed += 1;
                            format!("solved {summary} FAILED: {msg}")
                        }
                    }
                }
                Run::Refused(msg) => {
                    totals.refused += 1;
                    format!("refused: {msg}")
                }
                Run::Failed(msg) => {
                    totals.failed += 1;
                    format!("FAILED: {msg}")
                }
            };
            writeln!(text, "[{:>4}] {:<14} {}", i, kind.id(), line).unwrap();
        }
    }
    writeln!(
        text,
        "totals: solved={} refused={} verified={} failed={}",
        totals.solved, totals.refused, totals.verified, totals.failed
    )
    .unwrap();
    Ok(SuiteReport { text, totals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(profile: Profile, principles: Vec<PrincipleKind>) -> SuiteConfig {
        SuiteConfig {
            profile,
            count: 8,
            n: 5,
            members: 3,
            seed: 11,
            principles,
        }
    }

    #[test]
    fn reports_are_byte_identical_per_seed() {
        let c = cfg(Profile::T1, PrincipleKind::ALL.to_vec());
        let a = run_suite(&c).unwrap();
        let b = run_suite(&c).unwrap();
        assert_eq!(a.text, b.text);
        assert_eq!(a.totals, b.totals);
    }

    #[test]
    fn takahashi_valid_profile_solves_everything() {
        let c = cfg(
            Profile::TakahashiValid,
            vec![
                PrincipleKind::Ekeland,
                PrincipleKind::Takahashi,
                PrincipleKind::Caristi,
                PrincipleKind::OettliThera,
            ],
        );
        let r = run_suite(&c).unwrap();
        assert_eq!(r.totals.failed, 0, "{}", r.text);
        assert_eq!(r.totals.refused, 0, "{}", r.text);
        assert_eq!(r.totals.solved, r.totals.verified);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn non_t1_profile_triggers_refusals_and_exit_two() {
        let c = cfg(Profile::T0NotT1, vec![PrincipleKind::Ekeland]);
        let r = run_suite(&c).unwrap();
        assert_eq!(r.totals.refused, 8, "{}", r.text);
        assert_eq!(r.totals.failed, 0);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn t1_profile_may_refuse_discounted_domination_but_never_fails() {
        let c = cfg(Profile::T1, PrincipleKind::ALL.to_vec());
        let r = run_suite(&c).unwrap();
        assert_eq!(r.totals.failed, 0, "{}", r.text);
        assert_eq!(r.totals.solved, r.totals.verified, "{}", r.text);
    }
}
