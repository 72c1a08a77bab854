//! Command-line front end. Every command prints one JSON report; the exit
//! code is 0 when all checks pass, 1 on a mathematical failure, 2 on a usage
//! or parameter error and 3 when a resource cap is hit.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::clique_bounds::{
    brute_force_unicoloured_max, build_lp, c_hat_0, closed_form_bound, is_m_clique, is_unicoloured,
    random_unicoloured_cliques, solve_lp, Direction,
};
use crate::counting::{count_exact_meet, mu, nu, psi, Geometry, PiRange};
use crate::enumeration::{
    build_stratification, check_stratum_counts, enumerate_type, predicted_count, read_cached, write_cached,
    SubspaceLattice,
};
use crate::error::{Error, Result};
use crate::exact_q::{check_q_identities, rat_string, FieldOrder};
use crate::formula_check::{check_count_n, check_exact_meet, check_psi};
use crate::gf_space::{ty, Ambient};
use crate::report::{all_passed, CheckResult};
use crate::scheme::{build_scheme, check_intersection_invariants, check_partition, intersection_numbers, verify_scheme};
use crate::semilattice_verify::verify_semilattice;
use crate::spectra::{degree_v, eigen_p, verify_spectra_with_cap, EigenData};
use crate::sweep::Sampling;

/// Version of the report layout below.
pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "singscheme", version, about = "Exact counting and association-scheme checks over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Largest stratum (and neighbourhood) that may be enumerated.
    #[arg(long, global = true, default_value_t = crate::enumeration::DEFAULT_CAP)]
    pub max_points: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for sampled sweeps and random clique vectors.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for cached strata.
    #[arg(long, global = true, env = "SINGSCHEME_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Add wall-clock time to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one closed-form function.
    Params {
        #[command(subcommand)]
        function: ParamFn,
    },
    /// Enumerate the subspaces of one type.
    Enum(EnumArgs),
    /// Check the semilattice properties of L^m by brute force.
    VerifySemilattice(SemilatticeArgs),
    /// Build or verify the relations on X_d^{d0}.
    Scheme {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Eigenmatrix of the Grassmann scheme J_q(n, d).
    Spectra(SpectraArgs),
    /// Clique bound on J_q(n, d).
    Bound(BoundArgs),
    /// Every check at one instance.
    All(AllArgs),
}

#[derive(Subcommand, Debug)]
pub enum ParamFn {
    GaussBinom { #[arg(long)] n: i64, #[arg(long)] k: i64, #[arg(long)] q: u64 },
    CountN {
        #[arg(long)] m1: i64, #[arg(long)] k1: i64, #[arg(long)] m: i64, #[arg(long)] k: i64,
        #[arg(long)] n: i64, #[arg(long)] l: i64, #[arg(long)] q: u64,
    },
    ExactMeet {
        #[arg(long)] m1: i64, #[arg(long)] k1: i64, #[arg(long)] m2: i64, #[arg(long)] k2: i64,
        #[arg(long)] m3: i64, #[arg(long)] k3: i64, #[arg(long)] m: i64, #[arg(long)] k: i64,
        #[arg(long)] q: u64,
    },
    Mu {
        #[arg(long)] r: i64, #[arg(long)] r1: i64, #[arg(long)] s: i64, #[arg(long)] s1: i64,
        #[arg(long)] m: i64, #[arg(long)] m1: i64, #[arg(long)] q: u64,
    },
    Nu { #[arg(long)] r: i64, #[arg(long)] r1: i64, #[arg(long)] s: i64, #[arg(long)] s1: i64, #[arg(long)] q: u64 },
    Pi {
        #[arg(long)] j: i64, #[arg(long)] j1: i64, #[arg(long)] r: i64, #[arg(long)] r1: i64,
        #[arg(long)] s: i64, #[arg(long)] s1: i64, #[arg(long)] m: i64, #[arg(long)] mb: i64,
        #[arg(long)] md: i64, #[arg(long)] n: i64, #[arg(long)] l: i64, #[arg(long)] q: u64,
        /// Sum the inner index up to i instead of min(i, j1).
        #[arg(long)] full_range: bool,
    },
    Psi {
        #[arg(long)] j: i64, #[arg(long)] j1: i64, #[arg(long)] r: i64, #[arg(long)] r1: i64,
        #[arg(long)] s: i64, #[arg(long)] s1: i64, #[arg(long)] d: i64, #[arg(long)] d1: i64,
        #[arg(long)] q: u64,
    },
    EigenP { #[arg(long)] n: i64, #[arg(long)] d: i64, #[arg(long)] q: u64, #[arg(long)] i: i64, #[arg(long)] r: i64 },
    DegreeV { #[arg(long)] n: i64, #[arg(long)] d: i64, #[arg(long)] q: u64, #[arg(long)] i: i64 },
    ClosedFormBound { #[arg(long)] n: i64, #[arg(long)] d: i64, #[arg(long)] q: u64 },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnumArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub t: i64,
    #[arg(long)]
    pub t1: i64,
    /// Include the subspaces themselves.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SemilatticeArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    /// Check a seeded random sample of this many configurations per property.
    #[arg(long)]
    pub sample: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum SchemeAction {
    /// Points, relation sizes and intersection numbers.
    Build(SchemeArgs),
    /// Every scheme check.
    Verify(SchemeArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SchemeArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub d0: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectraArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub d: i64,
    /// Check the eigenmatrix against the built scheme.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub d: i64,
    /// Allowed relations of the clique.
    #[arg(long = "M", value_delimiter = ',', default_value = "0,1")]
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    /// Colour of the unicoloured vectors.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
    pub direction: DirectionArg,
    /// Run the exact maximum-clique search.
    #[arg(long)]
    pub search: bool,
    /// Also test this many seeded random clique vectors (with --search).
    #[arg(long, default_value_t = 0)]
    pub random: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AllArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub d0: usize,
    /// Sample this many configurations in each brute-force sweep.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Random clique vectors tested in the bound section.
    #[arg(long, default_value_t = 1000)]
    pub random: usize,
}

#[derive(Serialize)]
struct Report {
    schema_version: &'static str,
    command: String,
    config: Value,
    results: Value,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

/// Render every JSON number as a decimal string, so that values of any size
/// round-trip the same way.
fn stringify_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => *v = Value::String(n.to_string()),
        Value::Array(a) => a.iter_mut().for_each(stringify_numbers),
        Value::Object(o) => o.values_mut().for_each(stringify_numbers),
        _ => {}
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap { .. } => EXIT_CAP,
        Error::Param(_) | Error::AmbientMismatch | Error::Io(_) | Error::Json(_) | Error::Cache(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn sampling(sample: Option<usize>, seed: u64) -> Sampling {
    match sample {
        Some(count) => Sampling::Sample { count, seed },
        None => Sampling::Full,
    }
}

fn strs(args: &[(&str, i64)]) -> Value {
    Value::Object(args.iter().map(|(k, v)| ((*k).to_string(), json!(v.to_string()))).collect::<Map<_, _>>())
}

fn params(f: &ParamFn) -> Result<(String, Value, String)> {
    use ParamFn::*;
    let fo = FieldOrder::new;
    Ok(match *f {
        GaussBinom { n, k, q } => ("gauss_binom".into(), strs(&[("n", n), ("k", k), ("q", q as i64)]), fo(q)?.binom(n, k).to_string()),
        CountN { m1, k1, m, k, n, l, q } => (
            "count_n".into(),
            strs(&[("m1", m1), ("k1", k1), ("m", m), ("k", k), ("n", n), ("l", l), ("q", q as i64)]),
            Geometry::new(n, l, q)?.count_n(ty(m1, k1), ty(m, k))?.to_string(),
        ),
        ExactMeet { m1, k1, m2, k2, m3, k3, m, k, q } => (
            "exact_meet".into(),
            strs(&[("m1", m1), ("k1", k1), ("m2", m2), ("k2", k2), ("m3", m3), ("k3", k3), ("m", m), ("k", k), ("q", q as i64)]),
            count_exact_meet(ty(m1, k1), ty(m2, k2), ty(m3, k3), ty(m, k), fo(q)?)?.to_string(),
        ),
        Mu { r, r1, s, s1, m, m1, q } => (
            "mu".into(),
            strs(&[("r", r), ("r1", r1), ("s", s), ("s1", s1), ("m", m), ("m1", m1), ("q", q as i64)]),
            mu(ty(r, r1), ty(s, s1), ty(m, m1), fo(q)?)?.to_string(),
        ),
        Nu { r, r1, s, s1, q } => (
            "nu".into(),
            strs(&[("r", r), ("r1", r1), ("s", s), ("s1", s1), ("q", q as i64)]),
            nu(ty(r, r1), ty(s, s1), fo(q)?)?.to_string(),
        ),
        Pi { j, j1, r, r1, s, s1, m, mb, md, n, l, q, full_range } => {
            let range = if full_range { PiRange::Full } else { PiRange::Clipped };
            let mut args = strs(&[("j", j), ("j1", j1), ("r", r), ("r1", r1), ("s", s), ("s1", s1), ("m", m), ("mb", mb), ("md", md), ("n", n), ("l", l), ("q", q as i64)]);
            args["full_range"] = json!(full_range);
            let v = Geometry::new(n, l, q)?.pi_with_range(ty(j, j1), ty(r, r1), ty(s, s1), ty(m, mb), ty(m, md), range)?;
            ("pi".into(), args, v.to_string())
        }
        Psi { j, j1, r, r1, s, s1, d, d1, q } => (
            "psi".into(),
            strs(&[("j", j), ("j1", j1), ("r", r), ("r1", r1), ("s", s), ("s1", s1), ("d", d), ("d1", d1), ("q", q as i64)]),
            psi(ty(j, j1), ty(r, r1), ty(s, s1), ty(d, d1), fo(q)?)?.to_string(),
        ),
        EigenP { n, d, q, i, r } => (
            "eigen_p".into(),
            strs(&[("n", n), ("d", d), ("q", q as i64), ("i", i), ("r", r)]),
            eigen_p(n, d, q, i, r)?.to_string(),
        ),
        DegreeV { n, d, q, i } => (
            "degree_v".into(),
            strs(&[("n", n), ("d", d), ("q", q as i64), ("i", i)]),
            degree_v(n, d, q, i)?.to_string(),
        ),
        ClosedFormBound { n, d, q } => (
            "closed_form_bound".into(),
            strs(&[("n", n), ("d", d), ("q", q as i64)]),
            rat_string(&closed_form_bound(n, d, q)?.value),
        ),
    })
}

fn run_enum(g: &Global, a: &EnumArgs) -> Result<(Value, bool)> {
    let ambient = Ambient::new(a.n, a.l, a.q)?;
    let t = ty(a.t, a.t1);
    let cached = match &g.cache_dir {
        Some(dir) if ambient.admits(t) => read_cached(dir, ambient, t)?,
        _ => None,
    };
    let from_cache = cached.is_some();
    let list = match cached {
        Some(list) => list,
        None => enumerate_type(ambient, t, g.max_points)?,
    };
    if let (Some(dir), false, true) = (&g.cache_dir, from_cache, ambient.admits(t)) {
        write_cached(dir, ambient, t, &list)?;
    }
    let predicted = if ambient.admits(t) { predicted_count(ambient, t) } else { 0.into() };
    let ok = predicted == list.len().into();
    let mut out = json!({
        "type": t.to_string(),
        "count": list.len().to_string(),
        "predicted": predicted.to_string(),
        "from_cache": from_cache,
    });
    if a.list {
        out["subspaces"] = serde_json::to_value(&list)?;
    }
    Ok((out, ok))
}

fn run_semilattice(g: &Global, a: &SemilatticeArgs) -> Result<(Value, bool)> {
    let ambient = Ambient::new(a.n, a.l, a.q)?;
    let strat = build_stratification(ambient, a.m, g.max_points, g.cache_dir.as_deref())?;
    let report = verify_semilattice(strat, sampling(a.sample, g.seed))?;
    let ok = report.passed;
    Ok((serde_json::to_value(report)?, ok))
}

fn run_scheme(g: &Global, a: &SchemeArgs, verify: bool) -> Result<(Value, bool)> {
    let ambient = Ambient::new(a.n, a.l, a.q)?;
    let scheme = build_scheme(ambient, a.d, a.d0, g.max_points)?;
    if verify {
        let report = verify_scheme(&scheme, g.max_points)?;
        let ok = report.passed;
        return Ok((serde_json::to_value(report)?, ok));
    }
    let (table, constancy) = intersection_numbers(&scheme);
    let checks = vec![check_partition(&scheme)?, constancy, check_intersection_invariants(&scheme, &table)];
    let ok = all_passed(&checks);
    Ok((
        json!({
            "instance": scheme.params(),
            "point_count": scheme.len().to_string(),
            "points": scheme.points(),
            "class_sizes": scheme.class_sizes().iter().map(u64::to_string).collect::<Vec<_>>(),
            "warnings": scheme.warnings(),
            "intersection_numbers": table.to_json(),
            "checks": checks,
            "passed": ok,
        }),
        ok,
    ))
}

fn run_spectra(g: &Global, a: &SpectraArgs) -> Result<(Value, bool)> {
    let eigen = EigenData::new(a.n, a.d, a.q)?;
    let mut out = eigen.to_json();
    if a.verify {
        let report = verify_spectra_with_cap(a.n, a.d, a.q, g.max_points)?;
        out["verified"] = json!(report.verified);
        out["checks"] = serde_json::to_value(&report.checks)?;
        Ok((out, report.verified))
    } else {
        out["verified"] = json!(false);
        Ok((out, true))
    }
}

fn run_bound(g: &Global, a: &BoundArgs) -> Result<(Value, bool)> {
    let m: BTreeSet<usize> = a.m.iter().copied().collect();
    let bound = closed_form_bound(a.n, a.d, a.q)?;
    let eigen = EigenData::new(a.n, a.d, a.q)?;
    let lp = build_lp(&eigen, &m, a.s)?;
    let direction = match a.direction {
        DirectionArg::Max => Direction::Max,
        DirectionArg::Min => Direction::Min,
    };
    let full = solve_lp(&lp, direction);
    let restricted = match lp.restrict_to(1) {
        Ok(p) => Some(solve_lp(&p, direction)),
        Err(_) => None,
    };
    let mut checks = Vec::new();
    let mut out = json!({
        "closed_form": rat_string(&bound.value),
        "closed_form_detail": bound.to_json(),
        "K": lp.k_set,
        "b": lp.b.iter().map(rat_string).collect::<Vec<_>>(),
        "lp_value": full.value.as_ref().map(rat_string),
        "lp": full.to_json(),
        "restricted_lp": restricted.as_ref().map(|s| s.to_json()),
        "brute_force_max": Value::Null,
        "witness": Value::Null,
    });
    let bound_applies = m == BTreeSet::from([0, 1]) && a.s == 1;
    if a.search {
        if a.q > u32::MAX as u64 {
            return Err(Error::Param("q too large".into()));
        }
        let scheme = build_scheme(Ambient::new(a.n as usize, 0, a.q as u32)?, a.d as usize, 0, g.max_points)?;
        let found = brute_force_unicoloured_max(&scheme, &m, a.s, g.max_points)?;
        let mut search = CheckResult::new("maximum unicoloured clique");
        let w = crate::clique_bounds::WeightVector::indicator(found.witness.iter().copied());
        let valid = found.witness.is_empty()
            || (is_m_clique(&w, &scheme, &m)? && is_unicoloured(&w, &scheme, found.center, a.s));
        search.record(valid, || json!({"kind": "witness is not a unicoloured M-clique"}));
        if let Some((center, size)) = found.second_center {
            search.record(size == found.size, || json!({"kind": "center dependence", "center": center, "size": size.to_string(), "first_size": found.size.to_string()}));
        }
        if bound_applies {
            let size = num_rational::BigRational::from_integer(found.size.into());
            search.record(size <= bound.value, || json!({"kind": "clique exceeds the closed-form bound", "size": found.size.to_string()}));
        }
        checks.push(search);
        out["brute_force_max"] = json!(found.size.to_string());
        out["neighbourhood_size"] = json!(found.neighbourhood.to_string());
        out["witness"] = json!(found.witness.iter().map(|&i| scheme.points()[i].to_string()).collect::<Vec<_>>());
        if a.random > 0 {
            let mut rnd = CheckResult::new("random unicoloured clique vectors");
            let mut best = num_rational::BigRational::from_integer(0.into());
            for v in random_unicoloured_cliques(&scheme, &m, a.s, a.random, g.seed) {
                let c = c_hat_0(&v)?;
                let ok = is_m_clique(&v, &scheme, &m)?
                    && is_unicoloured(&v, &scheme, 0, a.s)
                    && (!bound_applies || c <= bound.value);
                rnd.record(ok, || json!({"c_hat_0": rat_string(&c), "support": v.support().count().to_string()}));
                if c > best {
                    best = c;
                }
            }
            rnd.note("max_c_hat_0", rat_string(&best));
            checks.push(rnd);
        }
    }
    let ok = all_passed(&checks);
    out["checks"] = serde_json::to_value(&checks)?;
    Ok((out, ok))
}

fn section(results: &mut Map<String, Value>, name: &str, r: Result<(Value, bool)>) -> Result<bool> {
    match r {
        Ok((v, ok)) => {
            results.insert(name.into(), v);
            Ok(ok)
        }
        Err(e @ Error::ResourceCap { .. }) => Err(e),
        Err(e) => {
            results.insert(name.into(), json!({"error": e.to_string()}));
            Ok(false)
        }
    }
}

fn run_all(g: &Global, a: &AllArgs) -> Result<(Value, bool)> {
    let mut results = Map::new();
    let mut ok = true;
    let samp = sampling(a.sample, g.seed);
    ok &= section(&mut results, "q_arithmetic", (|| {
        let c = check_q_identities(12, &[2, 3, 5])?;
        let p = c.passed;
        Ok((serde_json::to_value(vec![c])?, p))
    })())?;
    let ambient = Ambient::new(a.n, a.l, a.q)?;
    ok &= section(&mut results, "formulas", (|| {
        let full = crate::enumeration::Stratification::up_to_dim(ambient, ambient.dim(), g.max_points, g.cache_dir.as_deref())?;
        let counts = check_stratum_counts(&full);
        let lat = SubspaceLattice::new(&full)?;
        let checks = vec![counts, check_count_n(&lat, samp), check_exact_meet(&lat, samp), check_psi(&lat, samp)];
        let p = all_passed(&checks);
        Ok((serde_json::to_value(checks)?, p))
    })())?;
    ok &= section(
        &mut results,
        "semilattice",
        run_semilattice(g, &SemilatticeArgs { q: a.q, n: a.n, l: a.l, m: a.m, sample: a.sample }),
    )?;
    ok &= section(
        &mut results,
        "scheme",
        run_scheme(g, &SchemeArgs { q: a.q, n: a.n, l: a.l, d: a.d, d0: a.d0 }, true),
    )?;
    // The closed-form spectra and the clique bound concern the Grassmann
    // scheme of the whole ambient space.
    let (gn, gd, gq) = (ambient.dim() as i64, a.d as i64, a.q as u64);
    ok &= section(&mut results, "spectra", run_spectra(g, &SpectraArgs { q: gq, n: gn, d: gd, verify: true }))?;
    ok &= section(
        &mut results,
        "bound",
        run_bound(
            g,
            &BoundArgs { q: gq, n: gn, d: gd, m: vec![0, 1], s: 1, direction: DirectionArg::Max, search: true, random: a.random },
        ),
    )?;
    results.insert("grassmann_instance".into(), json!({"q": gq, "n": gn, "d": gd}));
    Ok((Value::Object(results), ok))
}

fn dispatch(g: &Global, command: &Command) -> Result<(String, Value, Value, bool)> {
    let cfg = |v: Value| -> Value {
        let mut v = v;
        v["max_points"] = json!(g.max_points.to_string());
        v["seed"] = json!(g.seed.to_string());
        v
    };
    Ok(match command {
        Command::Params { function } => {
            let (name, args, value) = params(function)?;
            let results = json!({"function": name, "args": args, "value": value});
            ("params".into(), cfg(json!({})), results, true)
        }
        Command::Enum(a) => {
            let (r, ok) = run_enum(g, a)?;
            ("enum".into(), cfg(serde_json::to_value(a)?), r, ok)
        }
        Command::VerifySemilattice(a) => {
            let (r, ok) = run_semilattice(g, a)?;
            ("verify-semilattice".into(), cfg(serde_json::to_value(a)?), r, ok)
        }
        Command::Scheme { action } => {
            let (name, a, verify) = match action {
                SchemeAction::Build(a) => ("scheme build", a, false),
                SchemeAction::Verify(a) => ("scheme verify", a, true),
            };
            let (r, ok) = run_scheme(g, a, verify)?;
            (name.into(), cfg(serde_json::to_value(a)?), r, ok)
        }
        Command::Spectra(a) => {
            let (r, ok) = run_spectra(g, a)?;
            ("spectra".into(), cfg(serde_json::to_value(a)?), r, ok)
        }
        Command::Bound(a) => {
            let (r, ok) = run_bound(g, a)?;
            ("bound".into(), cfg(serde_json::to_value(a)?), r, ok)
        }
        Command::All(a) => {
            let (r, ok) = run_all(g, a)?;
            ("all".into(), cfg(serde_json::to_value(a)?), r, ok)
        }
    })
}

/// Run one command and render its report. `params` prints the bare
/// `{function, args, value}` object.
pub fn execute(cli: &Cli) -> Result<(String, bool)> {
    let start = Instant::now();
    let work = || dispatch(&cli.global, &cli.command);
    let (command, mut config, mut results, pass) = match cli.global.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Param(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    stringify_numbers(&mut config);
    stringify_numbers(&mut results);
    if command == "params" {
        return Ok((serde_json::to_string_pretty(&results)? + "\n", pass));
    }
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        results,
        pass,
        timing_ms: cli.global.timing.then(|| start.elapsed().as_millis()),
    };
    Ok((serde_json::to_string_pretty(&report)? + "\n", pass))
}

/// Parse `argv`, run, write the report, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, pass)) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", json!({"error": e.to_string(), "exit_code": code}));
            code
        }
    }
}
