//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL`
//! line (run with `--nocapture` to see them) and then asserts, so a failing
//! criterion stays red.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use singscheme::clique_bounds::{
    brute_force_unicoloured_max, c_hat_0, closed_form_bound, is_m_clique, is_unicoloured, random_unicoloured_cliques,
};
use singscheme::enumeration::{build_stratification, enumerate_type, SubspaceLattice, DEFAULT_CAP};
use singscheme::exact_q::check_q_identities;
use singscheme::formula_check::{check_count_n, check_exact_meet, check_psi};
use singscheme::gf_space::{ty, Ambient};
use singscheme::report::CheckResult;
use singscheme::scheme::{
    build_c_matrices, build_scheme, check_partition, intersection_numbers, verify_bose_mesner, verify_c_expansion,
    verify_c_expansion_rank, verify_c_product_expansion,
};
use singscheme::semilattice_verify::{verify_property_i, verify_property_ii, verify_property_iii, Semilattice};
use singscheme::spectra::{eigen_p, verify_spectra, EigenData};
use singscheme::sweep::Sampling;

const SEED: u64 = 20240601;

/// Print the verdict line and return whether it passed.
fn verdict(id: u32, what: &str, checks: &[CheckResult], extra: &[(String, bool)], elapsed: Duration, limit: Duration) -> bool {
    let mut failing: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} [{}/{}]", c.property, c.failing_configurations, c.configurations_tested))
        .collect();
    failing.extend(extra.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()));
    let in_time = elapsed <= limit;
    if !in_time {
        failing.push(format!("runtime {elapsed:.2?} exceeds {limit:?}"));
    }
    let tested: u64 = checks.iter().map(|c| c.configurations_tested).sum();
    let ok = failing.is_empty();
    println!(
        "{} criterion {id}: {what} ({} checks, {tested} configurations, {elapsed:.2?}){}",
        if ok { "PASS" } else { "FAIL" },
        checks.len() + extra.len(),
        if ok { String::new() } else { format!(" failing: {}", failing.join("; ")) },
    );
    ok
}

fn semilattice(q: u32, n: usize, l: usize, m: usize) -> Semilattice {
    let a = Ambient::new(n, l, q).unwrap();
    Semilattice::new(build_stratification(a, m, DEFAULT_CAP, None).unwrap()).unwrap()
}

fn full_lattice(q: u32, n: usize, l: usize) -> SubspaceLattice {
    SubspaceLattice::full(Ambient::new(n, l, q).unwrap(), DEFAULT_CAP).unwrap()
}

fn tagged(mut c: CheckResult, tag: &str) -> CheckResult {
    c.property = format!("{} @ {tag}", c.property);
    c
}

#[test]
fn criterion_1_q_arithmetic() {
    let start = Instant::now();
    let identities = check_q_identities(12, &[2, 3, 5]).unwrap();
    let a = Ambient::new(4, 0, 2).unwrap();
    let counted = enumerate_type(a, ty(2, 0), DEFAULT_CAP).unwrap().len();
    let formula = singscheme::exact_q::gauss_binom(4, 2, 2).unwrap();
    let extra = vec![(format!("[4;2]_2 = {formula}, brute force {counted}"), formula == BigInt::from(35) && counted == 35)];
    let ok = verdict(1, "Gaussian binomial symmetry and both q-Pascal rules, [4;2]_2 = 35", &[identities], &extra, start.elapsed(), Duration::from_secs(1));
    assert!(ok);
}

#[test]
fn criterion_2_counting_formulas_against_brute_force() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (q, n, l, m, sampling, tag) in [
        (2, 2, 2, 2, Sampling::Full, "(2,2,2,2)"),
        (2, 3, 2, 2, Sampling::Full, "(2,3,2,2)"),
        (3, 2, 2, 2, Sampling::Sample { count: 4000, seed: SEED }, "(3,2,2,2) sampled"),
    ] {
        let lat = full_lattice(q, n, l);
        checks.push(tagged(check_count_n(&lat, sampling), tag));
        checks.push(tagged(check_exact_meet(&lat, sampling), tag));
        checks.push(tagged(check_psi(&lat, sampling), tag));
        let sl = semilattice(q, n, l, m);
        checks.push(tagged(verify_property_i(&sl, sampling), &format!("{tag} mu")));
        checks.push(tagged(verify_property_ii(&sl, sampling), &format!("{tag} nu")));
        checks.push(tagged(verify_property_iii(&sl, sampling), &format!("{tag} pi")));
    }
    let ok = verdict(2, "N', exact-meet count, mu, nu, pi and psi equal brute-force counts", &checks, &[], start.elapsed(), Duration::from_secs(300));
    assert!(ok);
}

#[test]
fn criterion_3_semilattice_properties() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (q, n, l, m, sampling, tag) in [
        (2, 2, 2, 2, Sampling::Full, "(2,2,2,2)"),
        (2, 3, 2, 2, Sampling::Sample { count: 2000, seed: SEED }, "(2,3,2,2) sampled"),
    ] {
        let sl = semilattice(q, n, l, m);
        checks.push(tagged(verify_property_i(&sl, sampling), tag));
        checks.push(tagged(verify_property_ii(&sl, sampling), tag));
        checks.push(tagged(verify_property_iii(&sl, sampling), tag));
    }
    let ok = verdict(3, "semilattice properties (i), (ii), (iii)", &checks, &[], start.elapsed(), Duration::from_secs(300));
    assert!(ok);
}

fn scheme_checks(q: u32, n: usize, l: usize, d: usize, d0: usize, points: usize) -> (Vec<CheckResult>, Vec<(String, bool)>) {
    let s = build_scheme(Ambient::new(n, l, q).unwrap(), d, d0, DEFAULT_CAP).unwrap();
    let tag = format!("({q},{n},{l},{d},{d0})");
    let (table, constancy) = intersection_numbers(&s);
    let checks = vec![
        tagged(check_partition(&s).unwrap(), &tag),
        tagged(constancy, &tag),
        tagged(verify_bose_mesner(&s, &table).unwrap(), &tag),
    ];
    (checks, vec![(format!("{tag} has {} points, expected {points}", s.len()), s.len() == points)])
}

#[test]
fn criterion_4_association_scheme() {
    let start = Instant::now();
    let (mut checks, mut extra) = scheme_checks(2, 2, 2, 2, 1, 18);
    let (c2, e2) = scheme_checks(2, 3, 2, 2, 1, 42);
    checks.extend(c2);
    extra.extend(e2);
    let ok = verdict(4, "partition, symmetry, constant p^k_ij, Bose-Mesner products", &checks, &extra, start.elapsed(), Duration::from_secs(60));
    assert!(ok);
}

#[test]
fn criterion_5_c_matrix_identities() {
    let start = Instant::now();
    let s = build_scheme(Ambient::new(2, 2, 2).unwrap(), 2, 1, DEFAULT_CAP).unwrap();
    let c = build_c_matrices(&s, DEFAULT_CAP).unwrap();
    let mut checks = Vec::new();
    for t in 0..=s.d() {
        checks.push(verify_c_expansion(&s, &c, t).unwrap());
    }
    checks.push(verify_c_expansion_rank(&s).unwrap());
    for r in 0..=s.d() {
        for t in 0..=s.d() {
            checks.push(verify_c_product_expansion(&s, &c, r, t).unwrap());
        }
    }
    let ok = verdict(5, "expansions of C_t and C_r C_s per (k, lambda), lambda-independence, rank d+1", &checks, &[], start.elapsed(), Duration::from_secs(300));
    assert!(ok);
}

#[test]
fn criterion_6_grassmann_spectra() {
    let start = Instant::now();
    let report = verify_spectra(4, 2, 2).unwrap();
    let want: Vec<Vec<BigInt>> = [[1, 1, 1], [18, 3, -3], [16, -4, 2]]
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let e = EigenData::new(4, 2, 2).unwrap();
    let sum: BigInt = e.m.iter().sum();
    let extra = vec![
        ("P = [[1,1,1],[18,3,-3],[16,-4,2]]".to_string(), e.p == want),
        (
            format!("multiplicities {:?} positive with sum 35", e.m.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            e.m.iter().all(|x| *x > BigInt::from(0)) && sum == BigInt::from(35),
        ),
        ("verified against the built scheme".to_string(), report.verified),
    ];
    let ok = verdict(6, "eigenmatrix of J_2(4,2) and character-table identity", &report.checks, &extra, start.elapsed(), Duration::from_secs(60));
    assert!(ok);
}

#[test]
fn criterion_7_clique_bound() {
    let start = Instant::now();
    let mut extra = Vec::new();
    let bound = closed_form_bound(4, 2, 2).unwrap();
    let eigen = EigenData::new(4, 2, 2).unwrap();
    let p11 = eigen_p(4, 2, 2, 1, 1).unwrap();
    let via_eigen = BigRational::from_integer(1.into()) + BigRational::new(&eigen.v[1] + &p11, p11.clone());
    let eight = BigRational::from_integer(8.into());
    extra.push((format!("closed form at (2,4,2) = {}", bound.value), bound.value == eight && via_eigen == eight));
    let mut identity_ok = true;
    for q in 2..=5u64 {
        for n in 1..=8i64 {
            for d in 1..=n {
                if closed_form_bound(n, d, q).is_err() {
                    identity_ok = false;
                }
            }
        }
    }
    extra.push(("two closed-form expressions agree for 2<=q<=5, 1<=d<=n<=8".into(), identity_ok));
    let s = build_scheme(Ambient::new(4, 0, 2).unwrap(), 2, 0, DEFAULT_CAP).unwrap();
    let m = BTreeSet::from([0, 1]);
    let found = brute_force_unicoloured_max(&s, &m, 1, DEFAULT_CAP).unwrap();
    extra.push((format!("largest unicoloured {{0,1}}-clique has {} points", found.size), found.size <= 8));
    let mut random = CheckResult::new("1000 random unicoloured clique vectors have c_hat_0 <= 8");
    for v in random_unicoloured_cliques(&s, &m, 1, 1000, SEED) {
        let c = c_hat_0(&v).unwrap();
        let ok = is_m_clique(&v, &s, &m).unwrap() && is_unicoloured(&v, &s, 0, 1) && c <= eight;
        random.record(ok, || serde_json::json!({"c_hat_0": c.to_string()}));
    }
    let ok = verdict(7, "closed-form clique bound, search and random vectors", &[random], &extra, start.elapsed(), Duration::from_secs(120));
    assert!(ok);
}

#[test]
fn criterion_8_reports_do_not_depend_on_jobs() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let mut codes = Vec::new();
    for jobs in ["1", "8"] {
        let path = dir.path().join(format!("all_{jobs}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_singscheme"))
            .args(["all", "--q", "2", "--n", "2", "--l", "2", "--m", "2", "--d", "2", "--d0", "1"])
            .args(["--jobs", jobs, "--seed", "7", "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        codes.push(status.code());
        outputs.push(std::fs::read(&path).unwrap());
    }
    let extra = vec![
        ("reports for --jobs 1 and --jobs 8 are byte-identical".to_string(), outputs[0] == outputs[1] && !outputs[0].is_empty()),
        (format!("exit codes {codes:?} agree"), codes[0] == codes[1]),
    ];
    let ok = verdict(8, "determinism of the full report", &[], &extra, start.elapsed(), Duration::from_secs(300));
    assert!(ok);
}
