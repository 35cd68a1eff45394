use super::critical::{no_critical_points, CriticalSearch};
use super::exclusions::{hrc_excludes, vertex_parity_search, znak0_sign_change, znak_sign_change};
use super::infinity::{inf_typical, one_real_branch_at_infinity};
use super::sign::{jacobian_sign_status, SignStatus};
use super::{Certificate, CertifyConfig, DirectEvidence, PairVariant, Subject, Verdict, VerdictTag};
use crate::polyarith::{jacobian_det, Poly2};

fn with_variant(mut cert: Certificate, v: PairVariant) -> Certificate {
    match &mut cert {
        Certificate::Znak0 { variant, .. }
        | Certificate::Znak { variant, .. }
        | Certificate::VertexParity { variant, .. } => *variant = v,
        _ => {}
    }
    cert
}

fn with_subject(mut cert: Certificate, s: Subject) -> Certificate {
    if let Certificate::Hrc { subject, .. } = &mut cert {
        *subject = s;
    }
    cert
}

fn done(verdict: VerdictTag, cert: Certificate, mut trace: Vec<String>) -> Verdict {
    trace.push(format!("certificate: {}", cert.kind()));
    Verdict {
        verdict,
        certificates: vec![cert],
        trace,
    }
}

/// Runs the exclusion criteria in a fixed order and returns the first hit.
fn exclusions(f: &Poly2, g: &Poly2, cfg: &CertifyConfig, trace: &mut Vec<String>) -> Option<Certificate> {
    for s in [Subject::F, Subject::G, Subject::FTransposed, Subject::GTransposed] {
        if let Some(c) = hrc_excludes(&s.apply(f, g)) {
            return Some(with_subject(c, s));
        }
    }
    trace.push("hrc: no matching outer edge".into());
    type Check = fn(&Poly2, &Poly2, &CertifyConfig) -> Option<Certificate>;
    let checks: [(&str, Check); 3] = [
        ("znak0", |f, g, _| znak0_sign_change(f, g)),
        ("znak", |f, g, _| znak_sign_change(f, g)),
        ("vertex parity", |f, g, c| vertex_parity_search(f, g, c.xi_bound, c.xi_family_max)),
    ];
    for (name, check) in checks {
        for v in PairVariant::ALL {
            let (a, b) = v.apply(f, g);
            if let Some(c) = check(&a, &b, cfg) {
                return Some(with_variant(c, v));
            }
        }
        trace.push(format!("{name}: not applicable"));
    }
    for s in [Subject::F, Subject::G] {
        let p = s.apply(f, g);
        if p.is_constant() {
            continue;
        }
        match no_critical_points(&p, cfg.refine_depth) {
            Ok(CriticalSearch::Exists { evidence }) => {
                return Some(Certificate::CriticalPoint { subject: s, evidence });
            }
            Ok(CriticalSearch::None { .. }) => trace.push(format!("critical points of {s}: none")),
            Ok(CriticalSearch::Undecided { reason }) => trace.push(format!("critical points of {s}: undecided ({reason})")),
            Err(e) => trace.push(format!("critical points of {s}: {e}")),
        }
    }
    None
}

/// Decides typicality of `(f, g)` where the implemented criteria allow it.
pub fn certify_typical(f: &Poly2, g: &Poly2, cfg: &CertifyConfig) -> Verdict {
    let mut trace = Vec::new();
    let j = jacobian_det(f, g);
    let status = jacobian_sign_status(&j, &cfg.sampling);
    let direct = |evidence| Certificate::DirectWitness {
        jacobian: j.clone(),
        evidence,
    };
    let proven = match status {
        SignStatus::IdenticallyZero => {
            trace.push("jacobian: identically zero".into());
            return done(VerdictTag::NotAJacobianPair, direct(DirectEvidence::IdenticallyZero), trace);
        }
        SignStatus::SignChanges { positive, negative } => {
            trace.push("jacobian: sign change found by sampling".into());
            return done(
                VerdictTag::NotAJacobianPair,
                direct(DirectEvidence::SignChange { positive, negative }),
                trace,
            );
        }
        SignStatus::UndecidedNonconstant { summary } => {
            if let Some(point) = summary.zero_witness {
                trace.push("jacobian: real zero found by sampling".into());
                return done(VerdictTag::NotAJacobianPair, direct(DirectEvidence::Zero { point }), trace);
            }
            trace.push(format!(
                "jacobian: nonconstant, no sign change in {} samples",
                summary.samples
            ));
            false
        }
        SignStatus::PositiveConstant | SignStatus::NegativeConstant => true,
    };
    if proven {
        trace.push("jacobian pair: proven (J constant)".into());
    } else {
        if let Some(c) = exclusions(f, g, cfg, &mut trace) {
            return done(VerdictTag::NotAJacobianPair, c, trace);
        }
        trace.push("jacobian pair: assumed".into());
    }

    let mut subjects = vec![Subject::F, Subject::G];
    subjects.extend(cfg.mu_list.iter().filter(|m| !num_traits::Zero::is_zero(*m)).cloned().map(Subject::Pencil));
    let partner_for = |s: &Subject| proven.then(|| s.partner(f, g));

    for s in &subjects {
        let p = s.apply(f, g);
        match inf_typical(&p, partner_for(s).as_ref(), cfg.refine_depth) {
            Ok(evidence) => {
                let cert = Certificate::InfTypical {
                    subject: s.clone(),
                    polynomial: p,
                    evidence,
                };
                return done(VerdictTag::TypicalCertified, cert, trace);
            }
            Err(e) => trace.push(format!("inf_typical({s}): {e}")),
        }
    }
    for s in &subjects {
        let p = s.apply(f, g);
        match one_real_branch_at_infinity(&p, partner_for(s).as_ref(), cfg.refine_depth) {
            Ok((leading_form, point, critical)) => {
                let cert = Certificate::OneRealBranchAtInfinity {
                    subject: s.clone(),
                    polynomial: p,
                    leading_form,
                    point,
                    critical,
                };
                return done(VerdictTag::TypicalCertified, cert, trace);
            }
            Err(e) => trace.push(format!("one branch at infinity({s}): {e}")),
        }
    }
    Verdict {
        verdict: VerdictTag::Inconclusive,
        certificates: Vec::new(),
        trace,
    }
}
