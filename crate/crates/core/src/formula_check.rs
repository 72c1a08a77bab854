//! Brute-force sweeps for the counts that are not semilattice properties:
//! `N'`, the three-subspace count of [`count_exact_meet`], and ψ. All three run
//! over the whole subspace lattice of `F_q^{n+l}`.

use std::collections::HashMap;

use serde_json::json;

use crate::counting::{count_exact_meet, psi, Geometry};
use crate::enumeration::SubspaceLattice;
use crate::exact_q::FieldOrder;
use crate::gf_space::{ty, SubspaceType};
use crate::report::CheckResult;
use crate::sweep::{self, key, Observation, Sampling};

fn field(lat: &SubspaceLattice) -> FieldOrder {
    FieldOrder::new(lat.ambient().q() as u64).expect("prime")
}

/// `N'(m1,k1;m,k)`: supersets of each type of every fixed subspace.
pub fn check_count_n(lat: &SubspaceLattice, sampling: Sampling) -> CheckResult {
    let a = lat.ambient();
    let geo = Geometry::new(a.n() as i64, a.l() as i64, a.q() as u64).expect("prime");
    let types: Vec<SubspaceType> = lat.types().collect();
    let configs = sampling.select(lat.ids().collect::<Vec<u32>>());
    let mut check = CheckResult::new("count-n");
    sweep::run(
        &mut check,
        &["m1", "k1", "m", "k"],
        &configs,
        |&p| {
            let tp = lat.ty(p);
            let mut counts: HashMap<SubspaceType, u64> = HashMap::new();
            for &u in lat.up(p) {
                *counts.entry(lat.ty(u)).or_default() += 1;
            }
            types
                .iter()
                .map(|t| Observation {
                    key: key(&[tp.t, tp.t1, t.t, t.t1]),
                    observed: counts.get(t).copied().unwrap_or(0),
                })
                .collect()
        },
        |k| geo.count_n(ty(k[0], k[1]), ty(k[2], k[3])),
        |&p| json!({"p": lat.elem(p)}),
    );
    check
}

/// For every chain `U1 <= U2 <= U` and every type of `U3 <= U`, the number of
/// `U3` with `U3 ∩ U2 = U1`.
///
/// The notes record how many keys agree with the formula once the count is
/// further restricted to `U3` with `U2 + U3` of type
/// `(m2 + m3 - m1, k2 + k3 - k1)`.
pub fn check_exact_meet(lat: &SubspaceLattice, sampling: Sampling) -> CheckResult {
    let q = field(lat);
    let configs: Vec<(u32, u32)> = lat
        .ids()
        .flat_map(|u| lat.down(u).iter().map(move |&u2| (u2, u)))
        .collect();
    let configs = sampling.select(configs);
    let mut check = CheckResult::new("exact-meet count");
    let types: Vec<SubspaceType> = lat.types().collect();
    let observe = |&(u2, u): &(u32, u32), refined: bool| {
        let tu2 = lat.ty(u2);
        let tu = lat.ty(u);
        let mut counts: HashMap<(u32, SubspaceType), u64> = HashMap::new();
        for &u3 in lat.down(u) {
            let t3 = lat.ty(u3);
            let u1 = lat.meet(u3, u2);
            if refined {
                let t1 = lat.ty(u1);
                let sum = lat.join(u2, u3).map(|w| lat.ty(w));
                if sum != Some(ty(tu2.t + t3.t - t1.t, tu2.t1 + t3.t1 - t1.t1)) {
                    continue;
                }
            }
            *counts.entry((u1, t3)).or_default() += 1;
        }
        let mut obs = Vec::new();
        for &u1 in lat.down(u2) {
            let t1 = lat.ty(u1);
            for &t3 in types.iter().filter(|t| t.t <= tu.t) {
                obs.push(Observation {
                    key: key(&[t1.t, t1.t1, tu2.t, tu2.t1, t3.t, t3.t1, tu.t, tu.t1]),
                    observed: counts.get(&(u1, t3)).copied().unwrap_or(0),
                });
            }
        }
        obs
    };
    let expected = |k: &sweep::Key| count_exact_meet(ty(k[0], k[1]), ty(k[2], k[3]), ty(k[4], k[5]), ty(k[6], k[7]), q);
    let names = ["m1", "k1", "m2", "k2", "m3", "k3", "m", "k"];
    sweep::run(
        &mut check,
        &names,
        &configs,
        |c| observe(c, false),
        expected,
        |&(u2, u)| json!({"u2": lat.elem(u2), "u": lat.elem(u)}),
    );
    let mut refined = CheckResult::new("exact-meet count with sum type");
    sweep::run(&mut refined, &names, &configs, |c| observe(c, true), expected, |_| json!(null));
    check.note("refined_sum_type_passed", refined.passed);
    check.note("refined_sum_type_failing_configurations", refined.failing_configurations);
    check
}

/// ψ: for every `B <= A` and every type of `D <= A`, the number of `D` whose
/// meet with `B` has each type.
pub fn check_psi(lat: &SubspaceLattice, sampling: Sampling) -> CheckResult {
    let q = field(lat);
    let types: Vec<SubspaceType> = lat.types().collect();
    let configs: Vec<(u32, u32)> = lat
        .ids()
        .flat_map(|a| lat.down(a).iter().map(move |&b| (b, a)))
        .collect();
    let configs = sampling.select(configs);
    let mut check = CheckResult::new("psi");
    sweep::run(
        &mut check,
        &["j", "j1", "r", "r1", "s", "s1", "d", "d1"],
        &configs,
        |&(b, a)| {
            let (tb, ta) = (lat.ty(b), lat.ty(a));
            let mut counts: HashMap<(SubspaceType, SubspaceType), u64> = HashMap::new();
            for &d in lat.down(a) {
                *counts.entry((lat.ty(d), lat.ty(lat.meet(b, d)))).or_default() += 1;
            }
            let mut obs = Vec::new();
            for &r in types.iter().filter(|t| t.t <= ta.t) {
                let h = r.t.min(tb.t);
                for j in 0..=h {
                    for j1 in 0..=j {
                        obs.push(Observation {
                            key: key(&[j, j1, r.t, r.t1, tb.t, tb.t1, ta.t, ta.t1]),
                            observed: counts.get(&(r, ty(j, j1))).copied().unwrap_or(0),
                        });
                    }
                }
            }
            obs
        },
        |k| psi(ty(k[0], k[1]), ty(k[2], k[3]), ty(k[4], k[5]), ty(k[6], k[7]), q),
        |&(b, a)| json!({"b": lat.elem(b), "a": lat.elem(a)}),
    );
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::DEFAULT_CAP;
    use crate::gf_space::Ambient;

    #[test]
    fn count_n_and_psi_hold() {
        let lat = SubspaceLattice::full(Ambient::new(2, 2, 2).unwrap(), DEFAULT_CAP).unwrap();
        let n = check_count_n(&lat, Sampling::Full);
        assert!(n.passed, "{:#?}", n.failures);
        let p = check_psi(&lat, Sampling::Full);
        assert!(p.passed, "{:#?}", p.failures);
    }

    #[test]
    fn exact_meet_needs_the_sum_type_condition() {
        let lat = SubspaceLattice::full(Ambient::new(2, 2, 2).unwrap(), DEFAULT_CAP).unwrap();
        let c = check_exact_meet(&lat, Sampling::Full);
        assert!(!c.passed);
        assert!(c.failures.iter().all(|f| f["kind"] == "formula-mismatch"));
        assert_eq!(c.notes["refined_sum_type_passed"], true);
        assert_eq!(c.notes["refined_sum_type_failing_configurations"], 0);
    }
}
