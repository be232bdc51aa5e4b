//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmshin::cli::{reproduce_example, AsymSetup};
use rmshin::cocycle::{
    cllr_sides, random_rm_pair, shin_rational_tau, shin_rm, shin_rm_via_limit, sigma_continued,
    verify_rm_identities,
};
use rmshin::modgroup::{CharVec, Mat2};
use rmshin::qfield::parse_quad;
use rmshin::special::{pi, Cx};
use rmshin::verify::{
    verify_double_sine, verify_exact_identities, verify_transformation_laws, IdentityReport,
};
use rug::{Float, Rational};

const P: u32 = 128;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite(report: rmshin::Result<IdentityReport>) -> Outcome {
    match report {
        Ok(r) => {
            let worst = r
                .checks
                .iter()
                .filter_map(|c| c.log2_max_dev)
                .fold(f64::NEG_INFINITY, f64::max);
            let failed: Vec<_> = r
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.clone())
                .collect();
            let worst = if worst.is_finite() {
                format!("worst 2^{worst:.1}")
            } else {
                "exact".into()
            };
            outcome(
                r.pass(),
                format!(
                    "{} instances, {} checks, {worst}, failed {failed:?}",
                    r.instances,
                    r.checks.len()
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c1_reproduction() -> Outcome {
    let start = Instant::now();
    match reproduce_example(P) {
        Ok(rep) => {
            let secs = start.elapsed().as_secs_f64();
            outcome(
                rep.nu_abs_error < 1e-18 && secs < 5.0,
                format!(
                    "nu = {}, |err| = {:.2e}, {secs:.2} s",
                    rep.nu, rep.nu_abs_error
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c2_phase() -> Outcome {
    let r = CharVec::new(0, Rational::from((4, 5)));
    let Ok(v) = shin_rm(&r, &parse_quad("sqrt(3)").unwrap(), P) else {
        return outcome(false, "shin_rm failed");
    };
    let target = Float::with_val(P, pi(P) * -7i32) / 20u32;
    let err = Float::with_val(P, v.shin.arg() - target).abs().to_f64();
    let exact = v.lambda4.as_ref().map(|l| Rational::from(&v.gamma24 + l));
    let diff = exact.clone().map(|x| x + Rational::from((7, 40)));
    let ok_exact = diff.map(|d| d.is_integer()).unwrap_or(false);
    outcome(
        err < 1e-20 && ok_exact,
        format!(
            "|arg + 7 pi/20| = {err:.2e}, gamma24 + lambda4 = {}",
            exact.map(|x| x.to_string()).unwrap_or_default()
        ),
    )
}

fn c3_polynomial() -> Outcome {
    match reproduce_example(P) {
        Ok(rep) => outcome(
            rep.poly_relative_residual < 1e-12,
            format!("relative residual {:.2e}", rep.poly_relative_residual),
        ),
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c4_limit_route() -> Outcome {
    let start = Instant::now();
    let y = Float::with_val(P, 1e-6);
    let mut pairs = vec![(
        CharVec::new(0, Rational::from((4, 5))),
        parse_quad("sqrt(3)").unwrap(),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    while pairs.len() < 11 {
        let (r, beta) = random_rm_pair(&mut rng, 500, 6, 12);
        if beta.discriminant().map(|d| d < 500).unwrap_or(false) {
            pairs.push((r, beta));
        }
    }
    let mut worst = 0f64;
    for (r, beta) in &pairs {
        let (Ok(v), Ok(lim)) = (shin_rm(r, beta, P), shin_rm_via_limit(r, beta, &y, P)) else {
            return outcome(
                false,
                format!("evaluation failed at r = {r}, beta = {beta}"),
            );
        };
        worst = worst.max(lim.rel_diff(&v.shin).to_f64());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-3 && secs < 60.0,
        format!("{} pairs, worst {worst:.2e}, {secs:.1} s", pairs.len()),
    )
}

fn c5_functional_equations() -> Outcome {
    suite(verify_rm_identities(5, 50, P))
}

fn c6_exact_identities() -> Outcome {
    suite(verify_exact_identities(6, 100))
}

fn c7_transformation_laws() -> Outcome {
    suite(verify_transformation_laws(7, 20, P))
}

fn c8_double_sine() -> Outcome {
    suite(verify_double_sine(8, 10, P))
}

fn c9_conductor_lowering() -> Outcome {
    let tol = Float::with_val(P, Float::i_exp(1, 16 - P as i32));
    let mut lines = Vec::new();
    let mut pass = true;
    for (r, beta) in [("0,1/2", "2*sqrt(3)"), ("1/3,0", "3*sqrt(3)")] {
        let r = CharVec::parse(r).unwrap();
        let beta = parse_quad(beta).unwrap();
        match cllr_sides(&r, &beta, P) {
            Ok((lhs, rhs)) => {
                let d = lhs.rel_diff(&rhs);
                pass &= d < tol;
                lines.push(format!("{beta}: {:.2e}", d.to_f64()));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{beta}: error {e}"));
            }
        }
    }
    outcome(pass, lines.join(", "))
}

fn c10_rational_tau() -> Outcome {
    let z = Cx::from_f64(P, 0.1, 0.4);
    let y = Float::with_val(P, 1e-5);
    let mut worst = 0f64;
    for (a, m, n) in [
        (Mat2::s(), 1, 2),
        (Mat2::new(1, 1, 1, 2), 2, 5),
        (Mat2::new(2, -1, 3, -1), 1, 1),
    ] {
        let tau = Cx::new(Float::with_val(P, Rational::from((m, n))), y.clone());
        let (Ok(formula), Ok(limit)) = (
            shin_rational_tau(&a, &z, m, n, P),
            sigma_continued(&a, &z, &tau, P),
        ) else {
            return outcome(false, format!("evaluation failed at A = {a}"));
        };
        worst = worst.max(formula.rel_diff(&limit).to_f64());
    }
    outcome(
        worst < 1e-3,
        format!("3 instances, worst {worst:.2e} against sigma at Im tau = 1e-5"),
    )
}

fn c11_asymptotics() -> Outcome {
    let r = CharVec::new(0, Rational::from((4, 5)));
    let beta = parse_quad("sqrt(3)").unwrap();
    let Ok(setup) = AsymSetup::new(&r, &beta, P) else {
        return outcome(false, "setup failed");
    };
    let mut norms = Vec::new();
    for t in 3..=7 {
        match setup.row(t as f64, P) {
            Ok(row) => norms.push(row.abs_norm),
            Err(e) => return outcome(false, format!("t = {t}: {e}")),
        }
    }
    let diffs: Vec<f64> = norms
        .windows(2)
        .map(|w| Float::with_val(P, &w[1] - &w[0]).abs().to_f64())
        .collect();
    let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = diffs.iter().map(|d| format!("{d:.2e}")).collect();
    outcome(
        decreasing,
        format!("|f(t+1) - f(t)| for t = 3..6: [{}]", shown.join(", ")),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 reproduction of nu", c1_reproduction),
        ("2 phase -7 pi/20", c2_phase),
        ("3 degree 8 polynomial residual", c3_polynomial),
        ("4 limit route vs cycle product", c4_limit_route),
        ("5 functional equation suite", c5_functional_equations),
        ("6 exact identity suite", c6_exact_identities),
        ("7 transformation law oracles", c7_transformation_laws),
        ("8 double sine identities", c8_double_sine),
        ("9 conductor lowering", c9_conductor_lowering),
        ("10 rational tau formula", c10_rational_tau),
        ("11 asymptotic periodicity", c11_asymptotics),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
