//! Subcommand implementations; each returns a finished report.

use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rvl_core::catalog::{catalogue, catalogue_reference_values, fixture, reference_row, Payload};
use rvl_core::games::{
    all_rows, build_game_g, build_game_h, build_restricted_game, extract_small_support, solve_zero_sum_game,
    unilateral_rows, verify_mixture_value, GameMatrix, GameSolution,
};
use rvl_core::limits::{fixed_reference_ratio, limit_entry, pessimize_profile};
use rvl_core::mechanism::{grid_valuations, ratio_on_profile, truthfulness_audit};
use rvl_core::qp::{minimize_qp, QpCertificate};
use rvl_core::qpcert::{
    below_golden_ratio, bracket_asymptotic_ratio, build_ordinal_ratio_qp, build_quadratic_lottery_qp,
    certify_majority_cases, lower_holds, meets_power_bound, min_entry_over_type_profiles, Outcome, PAIRS,
};
use rvl_core::quasi::{alternation_number, column_limit_from_env, enumerate_type_profiles};
use rvl_core::rational::{format, frac, int, parse};
use rvl_core::{Error, MechanismSpec, Profile, Rational, Result, TypeProfile};
use serde_json::json;

use crate::report::RunReport;
use crate::sampling::sample_check;

pub fn candidate_label(m: usize, c: usize) -> String {
    if m <= 26 {
        char::from(b'A' + c as u8).to_string()
    } else {
        format!("c{}", c + 1)
    }
}

fn labels(m: usize) -> impl Iterator<Item = String> {
    (0..m).map(move |c| candidate_label(m, c))
}

/// Inline JSON when the argument starts like JSON, otherwise a file path.
pub fn read_json_arg(arg: &str) -> Result<(String, String)> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    let text =
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))?;
    Ok((arg.to_string(), text))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let (source, text) = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{source}: {e}")))
}

pub fn load_mechanism(arg: &str) -> Result<MechanismSpec> {
    parse_json(arg)
}

pub fn load_profile(arg: &str) -> Result<Profile> {
    parse_json(arg)
}

/// `"3"`, `"2..5"` or `"2..=5"`.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("not a voter count: {t:?}")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(Error::Parse(format!("empty range {s:?}")));
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![num(s)?])
    }
}

fn solve_checked(r: &mut RunReport, name: &str, g: &GameMatrix) -> Result<GameSolution> {
    let s = solve_zero_sum_game(g)?;
    r.assert(
        format!("{name} certificate"),
        "verified",
        if s.certificate_checked { "verified" } else { "failed" },
        s.certificate_checked,
    );
    Ok(s)
}

fn report_mixture(r: &mut RunReport, name: &str, g: &GameMatrix, mixture: &[Rational]) {
    for (i, w) in mixture.iter().enumerate() {
        if !w.is_zero() {
            r.value(format!("{name}[{}]", g.row_label(i)), w);
        }
    }
}

pub fn tables(ns: &[u64]) -> Result<RunReport> {
    let start = Instant::now();
    if let Some(bad) = ns.iter().find(|n| !(2..=5).contains(*n)) {
        return Err(Error::InvalidInput(format!("tables covers 2 <= n <= 5, got {bad}")));
    }
    let mut r = RunReport::new(
        format!(
            "tables --n {}",
            ns.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        ),
        &json!({ "n": ns }),
    );
    for &n in ns {
        let reference = reference_row(n)?;
        for (family, g, want, published) in [
            (
                "OU",
                build_game_g(3, n)?,
                &reference.unilateral_value,
                &reference.unilateral_mixture,
            ),
            (
                "O",
                build_game_h(3, n)?,
                &reference.ordinal_value,
                &reference.ordinal_mixture,
            ),
        ] {
            let tag = format!("n={n} {family}");
            let s = solve_checked(&mut r, &tag, &g)?;
            r.value(format!("{tag} value"), &s.value);
            report_mixture(&mut r, &format!("{tag} mixture"), &g, &s.row_mixture);
            let guarantee = verify_mixture_value(&g, published)?;
            r.value(format!("{tag} published mixture guarantee"), &guarantee);
            r.assert_eq(format!("{tag} value"), &s.value, want);
            r.assert_eq(format!("{tag} published mixture"), &guarantee, want);
        }
    }
    Ok(r.finish(start.elapsed()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Certificate {
    #[value(name = "3")]
    PowerLaw,
    #[value(name = "4")]
    Unilateral,
    #[value(name = "5")]
    Majority,
    #[value(name = "6")]
    Catalogue,
    #[value(name = "9")]
    Quadratic,
    #[value(name = "golden")]
    Golden,
}

fn program_outputs(r: &mut RunReport, name: &str, cert: &QpCertificate) {
    r.value(format!("{name} minimum"), &cert.min_value);
    for (i, x) in cert.argmin.iter().enumerate() {
        if !x.is_zero() {
            r.value(format!("{name} argmin[x{}]", i + 1), x);
        }
    }
    r.text(format!("{name} faces examined"), cert.faces_examined.to_string());
}

fn assert_positive(r: &mut RunReport, name: &str, v: &Rational) {
    r.assert(name, "> 0", format(v), v.is_positive());
}

fn outcome_label(o: Outcome, (a, b): (usize, usize)) -> String {
    let (a, b) = (candidate_label(3, a), candidate_label(3, b));
    match o {
        Outcome::FirstWins => format!("{a}>{b}"),
        Outcome::SecondWins => format!("{b}>{a}"),
        Outcome::Tie => format!("{a}={b}"),
    }
}

pub fn certify(which: Certificate, name: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(format!("certify --theorem {name}"), &json!({ "theorem": name }));
    match which {
        Certificate::PowerLaw => {
            let c = frac(37, 100);
            let spec3 = MechanismSpec::mixture(vec![
                (frac(3, 4), MechanismSpec::Unilateral(3)),
                (frac(1, 4), MechanismSpec::Unilateral(1)),
            ])?;
            let lo = frac(162316, 1_000_000);
            r.value("m=3 certified lower bound", &lo);
            r.assert(
                "m=3 bound exceeds 0.37*3^(-3/4)",
                "true",
                meets_power_bound(&lo, &c, 3).to_string(),
                meets_power_bound(&lo, &c, 3),
            );
            let holds = lower_holds(&spec3, &lo)?;
            r.assert("m=3 program nonnegative", "true", holds.to_string(), holds);
            let spec4 = MechanismSpec::mixture(vec![
                (frac(3, 4), MechanismSpec::Unilateral(4)),
                (frac(1, 4), MechanismSpec::Unilateral(2)),
            ])?;
            for n in 1..=3 {
                let (v, tp) = min_entry_over_type_profiles(&spec4, 4, n, column_limit_from_env())?;
                r.value(format!("m=4 n={n} smallest entry"), &v);
                r.text(format!("m=4 n={n} worst type profile"), tp.label());
                r.assert(
                    format!("m=4 n={n} entry >= 0.37*4^(-3/4)"),
                    ">= 0.130815",
                    format(&v),
                    meets_power_bound(&v, &c, 4),
                );
            }
        }
        Certificate::Unilateral => {
            let c1 = parse("77066611/157737759")?;
            let c2 = parse("80671148/157737759")?;
            let c3 = int(1) - &c1 - &c2;
            let cert = minimize_qp(&build_ordinal_ratio_qp(&[c1, c2, c3], &frac(61, 100), false)?)?;
            program_outputs(&mut r, "r=61/100", &cert);
            assert_positive(&mut r, "minimum at r=61/100", &cert.min_value);
        }
        Certificate::Majority => {
            let res = certify_majority_cases(
                &[frac(476, 1000), frac(467, 1000), int(0)],
                &frac(57, 1000),
                &frac(616, 1000),
            )?;
            let mut worst: Option<Rational> = None;
            for (case, cert) in &res {
                let label = case
                    .outcomes
                    .iter()
                    .zip(PAIRS)
                    .map(|(o, p)| outcome_label(*o, p))
                    .collect::<Vec<_>>()
                    .join(",");
                match cert {
                    Some(cert) => {
                        r.value(format!("case {label} minimum"), &cert.min_value);
                        if worst.as_ref().is_none_or(|w| cert.min_value < *w) {
                            worst = Some(cert.min_value.clone());
                        }
                    }
                    None => r.text(format!("case {label} minimum"), "infeasible"),
                }
            }
            let worst = worst.unwrap_or_else(Rational::zero);
            r.value("smallest minimum", &worst);
            assert_positive(&mut r, "all 27 case minima at r=616/1000", &worst);
        }
        Certificate::Catalogue => {
            let (want_g, want_h) = catalogue_reference_values();
            let cols = catalogue()?;
            for (family, rows, want) in [("OU", unilateral_rows(3), want_g), ("O", all_rows(3, 23000), want_h)] {
                let g = build_restricted_game(rows, cols.clone())?;
                let s = solve_checked(&mut r, family, &g)?;
                r.value(format!("{family} catalogue value"), &s.value);
                report_mixture(&mut r, &format!("{family} mixture"), &g, &s.row_mixture);
                r.assert_eq(format!("{family} catalogue value"), &s.value, &want);
            }
        }
        Certificate::Quadratic => {
            let mixed = minimize_qp(&build_quadratic_lottery_qp(
                &frac(71, 100),
                &frac(29, 100),
                &frac(33, 50),
                false,
            )?)?;
            program_outputs(&mut r, "71/100 Q + 29/100 RF at r=33/50", &mixed);
            assert_positive(&mut r, "mixture minimum at r=33/50", &mixed.min_value);
            let pure = minimize_qp(&build_quadratic_lottery_qp(&int(1), &int(0), &frac(309, 500), false)?)?;
            program_outputs(&mut r, "Q at r=309/500", &pure);
            assert_positive(&mut r, "pure minimum at r=309/500", &pure.min_value);
        }
        Certificate::Golden => {
            let q = MechanismSpec::QuadraticLottery;
            let lo = minimize_qp(&build_quadratic_lottery_qp(
                &int(1),
                &int(0),
                &frac(6180, 10000),
                false,
            )?)?;
            r.value("minimum at r=0.6180", &lo.min_value);
            assert_positive(&mut r, "minimum at r=0.6180", &lo.min_value);
            let hi = minimize_qp(&build_quadratic_lottery_qp(&int(1), &int(0), &frac(6181, 10000), true)?)?;
            r.value("minimum at r=0.6181 with A optimal", &hi.min_value);
            r.assert(
                "minimum at r=0.6181 with A optimal",
                "< 0",
                format(&hi.min_value),
                hi.min_value.is_negative(),
            );
            let tol = frac(1, 10000);
            let (a, b) = bracket_asymptotic_ratio(&q, &frac(1, 2), &frac(2, 3), &tol)?;
            r.value("bracket low", &a);
            r.value("bracket high", &b);
            let width = &b - &a;
            r.assert("bracket width", "<= 1/10000", format(&width), width <= tol);
            let inside = below_golden_ratio(&a) && !below_golden_ratio(&b);
            r.assert("bracket contains (sqrt(5)-1)/2", "true", inside.to_string(), inside);
        }
    }
    Ok(r.finish(start.elapsed()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    #[value(name = "OU")]
    Unilateral,
    #[value(name = "O")]
    Ordinal,
}

pub fn solve_game(
    family: Family,
    m: usize,
    n: u64,
    catalogue_file: Option<&str>,
    matrix_out: Option<&Path>,
) -> Result<RunReport> {
    let start = Instant::now();
    let rows = match family {
        Family::Unilateral => unilateral_rows(m),
        Family::Ordinal => all_rows(m, n),
    };
    let (columns, source) = match catalogue_file {
        Some(arg) => {
            let cols: Vec<TypeProfile> = parse_json(arg)?;
            if let Some(bad) = cols.iter().find(|tp| tp.m() != m) {
                return Err(Error::InvalidInput(format!(
                    "catalogue profile {} has m = {}, expected {m}",
                    bad.label(),
                    bad.m()
                )));
            }
            (cols, serde_json::to_value(catalogue_value(arg)?).expect("JSON value"))
        }
        None => (
            enumerate_type_profiles(m, n, true, column_limit_from_env())?,
            json!("canonical"),
        ),
    };
    let fam = match family {
        Family::Unilateral => "OU",
        Family::Ordinal => "O",
    };
    let mut r = RunReport::new(
        format!("solve-game --family {fam} --m {m} --n {n}"),
        &json!({ "family": fam, "m": m, "n": n, "columns": source }),
    );
    let g = build_restricted_game(rows, columns)?;
    if let Some(path) = matrix_out {
        std::fs::write(path, g.to_csv())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    r.text("shape", format!("{}x{}", g.row_count(), g.column_count()));
    let s = solve_checked(&mut r, "game", &g)?;
    r.value("value", &s.value);
    report_mixture(&mut r, "row mixture", &g, &s.row_mixture);
    let small = extract_small_support(&g, &s)?;
    for c in small.column_support() {
        r.value(
            format!("worst columns[{}]", g.column_label(c)),
            &small.column_mixture[c],
        );
    }
    r.assert_eq("small-support value", &small.value, &s.value);
    Ok(r.finish(start.elapsed()))
}

fn catalogue_value(arg: &str) -> Result<serde_json::Value> {
    let (_, text) = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

pub struct EvalArgs<'a> {
    pub mechanism: &'a str,
    pub fixture: Option<&'a str>,
    pub profile: Option<&'a str>,
    pub audit: Option<u64>,
    pub seed: Option<u64>,
    pub draws: usize,
}

pub fn eval(a: &EvalArgs) -> Result<RunReport> {
    let start = Instant::now();
    let spec = load_mechanism(a.mechanism)?;
    let payload = match (a.fixture, a.profile) {
        (Some(name), None) => fixture(name)?.payload,
        (None, Some(arg)) => Payload::Profile(load_profile(arg)?),
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --fixture and --profile".into(),
            ))
        }
    };
    let inputs = json!({ "mechanism": spec, "payload": payload, "audit": a.audit, "seed": a.seed, "draws": a.seed.map(|_| a.draws) });
    let mut r = RunReport::new(format!("eval {spec}"), &inputs);
    match payload {
        Payload::TypeProfile(tp) => {
            if a.audit.is_some() || a.seed.is_some() {
                return Err(Error::InvalidInput(
                    "audits and sampling need a valuation profile, not a type profile".into(),
                ));
            }
            let e = limit_entry(&spec, &tp)?;
            r.note(format!("type profile {} evaluated in the limit", tp.label()));
            r.values("lottery", labels(3), e.lottery.probs());
            r.values("welfare", labels(3), &e.welfare);
            r.value("ratio", &e.ratio);
        }
        Payload::Profile(p) => {
            let m = p.m();
            let lot = spec.eval(&p)?;
            let w = p.welfare();
            let expected: Rational = lot.probs().iter().zip(&w).map(|(x, y)| x * y).sum();
            r.values("lottery", labels(m), lot.probs());
            r.values("welfare", labels(m), &w);
            r.value("expected welfare", &expected);
            r.value("ratio", &ratio_on_profile(&spec, &p)?);
            if let Some(k) = a.audit {
                let grid = grid_valuations(m, k, 200_000)?;
                r.note(format!("audit against {} misreports on the 1/{k} grid", grid.len()));
                for voter in 0..p.n() {
                    let rep = truthfulness_audit(&spec, &p, voter, &grid)?;
                    let gap = rep.min_gap().cloned().unwrap_or_else(Rational::zero);
                    r.value(format!("voter {} smallest gap", voter + 1), &gap);
                    r.assert(
                        format!("voter {} gains nothing by misreporting", voter + 1),
                        ">= 0",
                        format(&gap),
                        !gap.is_negative(),
                    );
                }
            }
            if let Some(seed) = a.seed {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let check = sample_check(&spec, &p, lot.probs(), a.draws, &mut rng);
                let d = BigInt::from(a.draws);
                let freqs: Vec<Rational> = check
                    .counts
                    .iter()
                    .map(|&c| Rational::new(BigInt::from(c), d.clone()))
                    .collect();
                r.values("sampled frequency", labels(m), &freqs);
                r.assert(
                    format!("{} seeded draws within 3 sigma", a.draws),
                    "<= 3",
                    format!("{:.3}", check.max_z),
                    check.max_z <= 3.0,
                );
            }
        }
    }
    Ok(r.finish(start.elapsed()))
}

pub fn pessimize(mechanism: &str, profile: &str, k: u64, out: Option<&Path>) -> Result<RunReport> {
    let start = Instant::now();
    let spec = load_mechanism(mechanism)?;
    let p = load_profile(profile)?;
    let mut r = RunReport::new(
        format!("pessimize {spec} --k {k}"),
        &json!({ "mechanism": spec, "profile": p, "k": k }),
    );
    let before = fixed_reference_ratio(&spec, &p)?;
    let q = pessimize_profile(&spec, &p, k)?;
    let after = fixed_reference_ratio(&spec, &q)?;
    r.value("fixed-reference ratio before", &before);
    r.value("fixed-reference ratio after", &after);
    r.value("ratio after", &ratio_on_profile(&spec, &q)?);
    let json = serde_json::to_string(&q).expect("profile serializes");
    r.text("profile", json.clone());
    if let Some(path) = out {
        std::fs::write(path, json + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    r.assert(
        "fixed-reference ratio does not increase",
        format!("<= {}", format(&before)),
        format(&after),
        after <= before,
    );
    let alternations = q
        .voters()
        .iter()
        .map(|u| alternation_number(u, k))
        .collect::<Result<Vec<_>>>()?;
    let ok = alternations.iter().all(|&a| a == 2);
    r.assert(
        "every voter quasi-combinatorial",
        "alternation 2",
        format!("{alternations:?}"),
        ok,
    );
    Ok(r.finish(start.elapsed()))
}

pub fn show_fixture(name: Option<&str>) -> Result<String> {
    match name {
        Some(n) => Ok(serde_json::to_string_pretty(&fixture(n)?).expect("fixture serializes") + "\n"),
        None => Ok(rvl_core::catalog::fixture_names().join("\n") + "\n"),
    }
}
