//! Acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Exits non-zero on any FAIL only when `ACCEPTANCE_STRICT=1`, so a full workspace
//! run still reaches the remaining test targets.

use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jacpair_core::certify::{
    certify_typical, hrc_excludes, vertex_parity_sign_change, Certificate, CertifyConfig, DirectEvidence, Subject,
    VerdictTag,
};
use jacpair_core::enumerate::{audit_case, builtin_case, load_polygons, PAPER_POLYGONS_JSON};
use jacpair_core::newton::{quasi_leading_part, Direction};
use jacpair_core::pipeline::generate_tame_pair;
use jacpair_core::polyarith::rational::{rat, to_f64};
use jacpair_core::polyarith::{
    jacobian_det, multiple_factor_product, parse_expr, Poly2, Rational, RootRange, UniPoly, Var,
};

const SEED: u64 = 0x4A4143;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn p(s: &str) -> Poly2 {
    parse_expr(s).unwrap()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_uni(rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let d = rng.gen_range(0..=max_deg);
    UniPoly::from_coeffs((0..=d).map(|_| small_rational(rng)).collect())
}

fn random_poly2(rng: &mut ChaCha8Rng, max_deg: u32, density: f64) -> Poly2 {
    let mut terms = Vec::new();
    for i in 0..=max_deg {
        for j in 0..=max_deg - i {
            if rng.gen_bool(density) {
                terms.push(((i, j).into(), small_rational(rng)));
            }
        }
    }
    Poly2::from_terms(terms)
}

fn znak0_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let xy = p("x*y");
    for k in 0..100 {
        let big_f = random_uni(&mut rng, 3);
        let big_g = random_uni(&mut rng, 3);
        let f = &Poly2::x() * &Poly2::compose_uni(&big_f, &xy);
        let g = &Poly2::y() * &Poly2::compose_uni(&big_g, &xy);
        let h = &(&UniPoly::t() * &big_f) * &big_g;
        if jacobian_det(&f, &g) != Poly2::compose_uni(&h.derivative(), &xy) {
            return outcome(false, format!("mismatch at sample {k}"));
        }
    }
    outcome(true, "100/100 exact")
}

fn face_jacobian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut compared, mut skipped) = (0, 0);
    for k in 0..200 {
        let f = random_poly2(&mut rng, 5, 0.35);
        let g = random_poly2(&mut rng, 5, 0.35);
        let xi = loop {
            let d = Direction::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            if !d.is_zero() {
                break d;
            }
        };
        if f.is_zero() || g.is_zero() {
            skipped += 1;
            continue;
        }
        let fx = quasi_leading_part(&f, &xi).unwrap();
        let gx = quasi_leading_part(&g, &xi).unwrap();
        let jx = jacobian_det(&fx, &gx);
        if jx.is_zero() {
            skipped += 1;
            continue;
        }
        let j = jacobian_det(&f, &g);
        if quasi_leading_part(&j, &xi).unwrap() != jx {
            return outcome(false, format!("violation at sample {k}"));
        }
        compared += 1;
    }
    outcome(true, format!("{compared} compared, {skipped} with vanishing face jacobian, 0 violations"))
}

fn eval_f64(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Sign changes of a squarefree float polynomial on a dense grid, each bracket bisected.
fn float_root_count(coeffs: &[f64], lo: f64, hi: f64) -> usize {
    let steps = 100_000;
    let h = (hi - lo) / steps as f64;
    let mut count = 0;
    let mut prev = (lo, eval_f64(coeffs, lo));
    for k in 1..=steps {
        let t = lo + h * k as f64;
        let v = eval_f64(coeffs, t);
        if prev.1 == 0.0 {
            count += 1;
        } else if prev.1.signum() != v.signum() && v != 0.0 {
            let (mut a, mut b) = (prev.0, t);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if eval_f64(coeffs, m).signum() == eval_f64(coeffs, a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            if (lo..=hi).contains(&a) {
                count += 1;
            }
        }
        prev = (t, v);
    }
    if prev.1 == 0.0 {
        count += 1;
    }
    count
}

fn sturm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let range = RootRange::Interval(
        jacpair_core::polyarith::RationalInterval::new(rat(-100, 1), rat(100, 1)).unwrap(),
    );
    for k in 0..100 {
        // roots on a 1/4 grid, some repeated, times an optional root-free quadratic
        let distinct = rng.gen_range(0..=4usize);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < distinct {
            let r = rng.gen_range(-440..=440);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let mut full = UniPoly::constant(rat(rng.gen_range(1..=5), 1));
        let mut simple = full.clone();
        for r in &roots {
            let lin = UniPoly::from_coeffs(vec![rat(-*r, 4), rat(1, 1)]);
            let mult = if full.degree().unwrap_or(0) + 2 <= 6 && rng.gen_bool(0.4) { 2 } else { 1 };
            full = &full * &lin.pow(mult);
            simple = &simple * &lin;
        }
        if rng.gen_bool(0.5) {
            let q = UniPoly::from_coeffs(vec![rat(rng.gen_range(2..=9), 1), rat(rng.gen_range(-2..=2), 1), rat(1, 1)]);
            full = &full * &q;
            simple = &simple * &q;
        }
        let coeffs: Vec<f64> = simple.coeffs().iter().map(to_f64).collect();
        // grid offset keeps samples off the quarter-integer roots
        let want = float_root_count(&coeffs, -100.0 - 1e-7, 100.0 + 1e-7);
        let got = full.count_real_roots(&range).unwrap();
        if got != want {
            return outcome(false, format!("sample {k}: sturm {got}, oracle {want}, roots {roots:?}/4"));
        }
    }
    outcome(true, "100/100 counts agree")
}

fn case_audits() -> Outcome {
    let paper = load_polygons(PAPER_POLYGONS_JSON).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ["II", "III", "IV-x4", "IV-x2y2", "THM2"] {
        let start = Instant::now();
        let r = audit_case(&builtin_case(id).unwrap(), &paper).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let survivors_ok = match id {
            "III" => r.survivors == ["D12", "D13"],
            "IV-x4" => r.survivors == ["D20", "D21", "D24"],
            _ => true,
        };
        let case_ok = r.passed && r.missing.is_empty() && r.undismissed == 0 && survivors_ok && secs < 60.0;
        ok &= case_ok;
        parts.push(format!(
            "{id}: {} enumerated, {} missing, {} undismissed, survivors {:?}, {secs:.1}s",
            r.enumerated.len(),
            r.missing.len(),
            r.undismissed,
            r.survivors
        ));
    }
    outcome(ok, parts.join("; "))
}

fn end_to_end_positive() -> Outcome {
    let v = certify_typical(&p("x+(y+x^2)^2"), &p("y+x^2"), &CertifyConfig::default());
    let on_g = v
        .certificates
        .iter()
        .any(|c| matches!(c, Certificate::InfTypical { subject: Subject::G, .. }));
    outcome(
        v.verdict == VerdictTag::TypicalCertified && on_g,
        format!("{:?}, inf_typical on g: {on_g}", v.verdict),
    )
}

fn end_to_end_negative() -> Outcome {
    let (f, g) = (p("x^2*y-x"), p("x*y^2-y"));
    let v = certify_typical(&f, &g, &CertifyConfig::default());
    let j = jacobian_det(&f, &g);
    let pinned = j.eval(&rat(0, 1), &rat(0, 1)) == rat(1, 1) && j.eval(&rat(1, 1), &rat(1, 2)) == rat(-1, 4);
    let witnesses = v.certificates.iter().find_map(|c| match c {
        Certificate::DirectWitness {
            evidence: DirectEvidence::SignChange { positive, negative },
            ..
        } => Some((positive.clone(), negative.clone())),
        _ => None,
    });
    match witnesses {
        Some((pos, neg)) => {
            let exact = j.eval(&pos.point.x, &pos.point.y) == pos.value
                && j.eval(&neg.point.x, &neg.point.y) == neg.value
                && pos.value.is_positive()
                && neg.value.is_negative();
            outcome(
                v.verdict == VerdictTag::NotAJacobianPair && exact && pinned,
                format!(
                    "witnesses J({},{})={} and J({},{})={}; J(0,0)=1, J(1,1/2)=-1/4: {pinned}",
                    pos.point.x, pos.point.y, pos.value, neg.point.x, neg.point.y, neg.value
                ),
            )
        }
        None => outcome(false, format!("{:?} without sign-change witnesses", v.verdict)),
    }
}

fn tame_fuzz() -> Outcome {
    let cfg = CertifyConfig::default();
    let mut typical = 0;
    for seed in 0..50u64 {
        let steps = (seed % 5) as u32;
        let (f, g) = generate_tame_pair(seed, steps, 3);
        let j = jacobian_det(&f, &g);
        if !(j.is_constant() && !j.is_zero()) {
            return outcome(false, format!("seed {seed}: jacobian {j:?}"));
        }
        let v = certify_typical(&f, &g, &cfg);
        if v.verdict == VerdictTag::NotAJacobianPair {
            return outcome(false, format!("seed {seed}: NotAJacobianPair"));
        }
        typical += (v.verdict == VerdictTag::TypicalCertified) as usize;
    }
    outcome(true, format!("50/50 constant jacobian, {typical} certified typical, none rejected"))
}

fn unit_criteria() -> Outcome {
    let mut fails = Vec::new();
    if hrc_excludes(&p("x + x^5 + x^2*y^2")).is_none() {
        fails.push("hrc misses D49");
    }
    if hrc_excludes(&p("x + x^5 + x^2*y")).is_none() {
        fails.push("hrc misses D50");
    }
    if hrc_excludes(&p("1 + x^2 + y^2")).is_some() {
        fails.push("hrc fires on the triangle");
    }
    let cert = vertex_parity_sign_change(&p("x^2*y^3 + x + y"), &p("x^3*y^3 + x"), &Direction::new(5, 6));
    if !matches!(cert, Some(Certificate::VertexParity { .. })) {
        fails.push("no vertex parity certificate for (2,3),(3,3)");
    }
    if vertex_parity_sign_change(&p("x"), &p("y"), &Direction::new(1, 1)).is_some() {
        fails.push("vertex parity accepted (1,0)+(0,1)");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let forms = ["x", "y", "x+y", "x-y", "x+2*y", "x^2+y^2", "x^2+x*y+y^2", "x^2-2*y^2"].map(p);
    for _ in 0..500 {
        let mut d = Poly2::constant(small_rational(&mut rng).abs() + rat(1, 1));
        loop {
            let next = &forms[rng.gen_range(0..forms.len())];
            let cand = &d * next;
            if cand.total_degree().unwrap() > 5 {
                break;
            }
            d = cand;
            if rng.gen_bool(0.25) {
                break;
            }
        }
        if d.is_constant() {
            continue;
        }
        let h = multiple_factor_product(&d).unwrap();
        if h.total_degree().unwrap() == 1 {
            fails.push("multiple-factor product of degree one");
            break;
        }
    }
    outcome(fails.is_empty(), if fails.is_empty() { "all unit checks hold".into() } else { fails.join(", ") })
}

fn derivative_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f = random_poly2(&mut rng, 5, 0.5);
        let (x0, y0) = (rng.gen_range(-2.0..2.0f64), rng.gen_range(-2.0..2.0f64));
        let ev = |x: f64, y: f64| {
            f.terms()
                .map(|(m, c)| to_f64(c) * x.powi(m.i as i32) * y.powi(m.j as i32))
                .sum::<f64>()
        };
        let qx = Rational::from_float(x0).unwrap();
        let qy = Rational::from_float(y0).unwrap();
        let h = 1e-8;
        let base = ev(x0, y0);
        for (var, fd) in [
            (Var::X, (ev(x0 + h, y0) - base) / h),
            (Var::Y, (ev(x0, y0 + h) - base) / h),
        ] {
            let exact = to_f64(&f.partial(var).eval(&qx, &qy));
            worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
        }
    }
    outcome(worst <= 1e-6, format!("max relative error {worst:.2e}"))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("1 znak0 identity", Duration::from_secs(5), znak0_identity),
        ("2 face jacobian compatibility", Duration::from_secs(10), face_jacobian),
        ("3 sturm vs float oracle", Duration::from_secs(5), sturm_oracle),
        ("4 case audits", Duration::from_secs(300), case_audits),
        ("5 end-to-end positive", Duration::from_secs(1), end_to_end_positive),
        ("6 end-to-end negative", Duration::from_secs(1), end_to_end_negative),
        ("7 tame pair fuzz", Duration::from_secs(30), tame_fuzz),
        ("8 unit criteria", Duration::from_secs(30), unit_criteria),
        ("9 derivative finite differences", Duration::from_secs(5), derivative_check),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let ok = o.ok && took <= limit;
        failed += (!ok) as usize;
        println!(
            "{} {name} ({:.2}s, limit {}s): {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!("acceptance: {failed} failing");
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
