//! Deterministic brute-force sweeps: configurations are observed in parallel
//! chunks and merged sequentially in configuration order, so reports do not
//! depend on the thread count.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::report::CheckResult;

/// Exhaustive sweep or seeded random sample of configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Sampling {
    #[default]
    Full,
    Sample { count: usize, seed: u64 },
}

impl Sampling {
    /// Select configurations; sampled indices keep their original order.
    pub fn select<T: Clone>(&self, configs: Vec<T>) -> Vec<T> {
        match *self {
            Sampling::Full => configs,
            Sampling::Sample { count, seed } => {
                if count >= configs.len() {
                    return configs;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut idx = sample(&mut rng, configs.len(), count).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| configs[i].clone()).collect()
            }
        }
    }
}

pub(crate) const KEY_LEN: usize = 8;
pub(crate) type Key = [i64; KEY_LEN];

/// One brute-force count for one parameter key within a configuration.
pub(crate) struct Observation {
    pub key: Key,
    pub observed: u64,
}

const CHUNK: usize = 2048;

fn params(names: &[&str], key: &Key) -> Value {
    let mut m = Map::new();
    for (name, v) in names.iter().zip(key) {
        m.insert((*name).to_string(), json!(v));
    }
    Value::Object(m)
}

/// Run `observe` over every configuration and compare each observation with
/// `expected(key)`, also checking that the observed count for a key is the
/// same in every configuration.
pub(crate) fn run<C, O, E, D>(
    check: &mut CheckResult,
    names: &[&str],
    configs: &[C],
    observe: O,
    mut expected: E,
    describe: D,
) -> BTreeMap<Key, u64>
where
    C: Sync,
    O: Fn(&C) -> Vec<Observation> + Sync,
    E: FnMut(&Key) -> Result<BigInt>,
    D: Fn(&C) -> Value,
{
    let mut formula: BTreeMap<Key, std::result::Result<BigInt, String>> = BTreeMap::new();
    let mut first: BTreeMap<Key, (u64, usize)> = BTreeMap::new();
    let mut non_constant = 0u64;
    for (chunk_no, chunk) in configs.chunks(CHUNK).enumerate() {
        let observed: Vec<Vec<Observation>> = chunk.par_iter().map(&observe).collect();
        for (offset, obs) in observed.into_iter().enumerate() {
            let ci = chunk_no * CHUNK + offset;
            for o in obs {
                let f = formula
                    .entry(o.key)
                    .or_insert_with(|| expected(&o.key).map_err(|e| e.to_string()));
                match f {
                    Ok(v) if *v == BigInt::from(o.observed) => check.pass(),
                    Ok(v) => check.fail(json!({
                        "kind": "formula-mismatch",
                        "parameters": params(names, &o.key),
                        "observed": o.observed.to_string(),
                        "formula": v.to_string(),
                        "configuration": describe(&configs[ci]),
                    })),
                    Err(e) => check.fail(json!({
                        "kind": "formula-error",
                        "parameters": params(names, &o.key),
                        "observed": o.observed.to_string(),
                        "error": e.clone(),
                        "configuration": describe(&configs[ci]),
                    })),
                }
                match first.get(&o.key) {
                    None => {
                        first.insert(o.key, (o.observed, ci));
                    }
                    Some(&(prev, pci)) if prev != o.observed => {
                        non_constant += 1;
                        check.fail(json!({
                            "kind": "non-constant",
                            "parameters": params(names, &o.key),
                            "observed": o.observed.to_string(),
                            "previous_observed": prev.to_string(),
                            "configuration": describe(&configs[ci]),
                            "previous_configuration": describe(&configs[pci]),
                        }));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    check.note("non_constant_observations", non_constant);
    first.into_iter().map(|(k, (v, _))| (k, v)).collect()
}

pub(crate) fn key(parts: &[i64]) -> Key {
    let mut k = [0; KEY_LEN];
    k[..parts.len()].copy_from_slice(parts);
    k
}
