//! Target-function assignments, their enumeration, and crash-fault plans.
//!
//! An algorithm is a *set* of target functions; what each robot actually
//! runs is decided by an assignment, and an algorithm must work no matter
//! which surjective assignment the adversary picks. The helpers here
//! validate surjectivity, enumerate the assignment space (exhaustively or
//! by seeded sampling when it is too large), and describe crash faults.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::targets::TargetFunctionId;

use super::EngineError;

/// A mapping from robot ids to target functions, intended to be a
/// surjection onto some algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<usize, TargetFunctionId>,
}

impl Assignment {
    /// Wraps an explicit id → target-function map.
    pub fn new(map: BTreeMap<usize, TargetFunctionId>) -> Assignment {
        Assignment { map }
    }

    /// Builds the map from (id, target function) pairs; later pairs win.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, TargetFunctionId)>) -> Assignment {
        Assignment {
            map: pairs.into_iter().collect(),
        }
    }

    /// The target function assigned to robot `id`, if any.
    pub fn tf_for(&self, id: usize) -> Option<TargetFunctionId> {
        self.map.get(&id).copied()
    }

    /// The underlying map.
    pub fn map(&self) -> &BTreeMap<usize, TargetFunctionId> {
        &self.map
    }

    /// The set of target functions that actually occur.
    pub fn image(&self) -> BTreeSet<TargetFunctionId> {
        self.map.values().copied().collect()
    }
}

/// Whether `assignment` is a surjection onto `algorithm`: every robot runs
/// a member of the algorithm and every member is run by at least one
/// robot. An algorithm larger than the swarm can never pass.
pub fn validate_assignment(
    assignment: &Assignment,
    algorithm: &BTreeSet<TargetFunctionId>,
) -> bool {
    assignment.image() == *algorithm
}

/// Scheduled crash faults: robot id → the time at which the robot
/// permanently stops moving. A crash at time `t` already suppresses the
/// move of an activation at `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultPlan {
    crashes: BTreeMap<usize, u64>,
}

impl FaultPlan {
    /// A plan with no crashes.
    pub fn none() -> FaultPlan {
        FaultPlan::default()
    }

    /// Wraps an explicit id → crash-time map.
    pub fn new(crashes: BTreeMap<usize, u64>) -> FaultPlan {
        FaultPlan { crashes }
    }

    /// Adds (or replaces) one crash.
    pub fn crash(mut self, id: usize, time: u64) -> FaultPlan {
        self.crashes.insert(id, time);
        self
    }

    /// The underlying map.
    pub fn crashes(&self) -> &BTreeMap<usize, u64> {
        &self.crashes
    }

    /// Number of robots that crash under this plan.
    pub fn len(&self) -> usize {
        self.crashes.len()
    }

    /// Whether the plan crashes nobody.
    pub fn is_empty(&self) -> bool {
        self.crashes.is_empty()
    }
}

/// All surjective assignments of `algorithm` onto `ids` when there are at
/// most `cap` of them; otherwise a seeded random sample of up to `cap`
/// distinct ones. The algorithm must be nonempty, duplicate-free, and no
/// larger than the swarm.
pub fn enumerate_assignments(
    algorithm: &[TargetFunctionId],
    ids: &[usize],
    cap: usize,
    seed: u64,
) -> Result<Vec<Assignment>, EngineError> {
    check_algorithm(algorithm, ids)?;
    let m = algorithm.len();
    let n = ids.len();
    let exhaustive = matches!(surjection_count(m, n), Some(c) if c <= cap as u128);
    if exhaustive {
        let mut out = Vec::new();
        let mut code = vec![0usize; n];
        loop {
            if is_surjective(&code, m) {
                out.push(decode(algorithm, ids, &code));
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(out);
                }
                code[i] += 1;
                if code[i] < m {
                    break;
                }
                code[i] = 0;
                i += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut budget = (cap as u64).saturating_mul(10_000);
    while out.len() < cap && budget > 0 {
        budget -= 1;
        let code: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        if is_surjective(&code, m) && seen.insert(code.clone()) {
            out.push(decode(algorithm, ids, &code));
        }
    }
    Ok(out)
}

/// One representative assignment per multiplicity profile. When all robots
/// share identical frames they are interchangeable, so only how many
/// robots run each function matters: this yields every way of splitting
/// the swarm into nonempty blocks, one block per function, blocks taken in
/// ascending id order.
pub fn canonical_assignments(
    algorithm: &[TargetFunctionId],
    ids: &[usize],
) -> Result<Vec<Assignment>, EngineError> {
    check_algorithm(algorithm, ids)?;
    let mut sorted_ids = ids.to_vec();
    sorted_ids.sort_unstable();
    let mut out = Vec::new();
    let mut parts = Vec::new();
    compositions(sorted_ids.len(), algorithm.len(), &mut parts, &mut |parts| {
        let mut map = BTreeMap::new();
        let mut next = 0;
        for (tf, &count) in algorithm.iter().zip(parts) {
            for &id in &sorted_ids[next..next + count] {
                map.insert(id, *tf);
            }
            next += count;
        }
        out.push(Assignment::new(map));
    });
    Ok(out)
}

fn check_algorithm(algorithm: &[TargetFunctionId], ids: &[usize]) -> Result<(), EngineError> {
    if algorithm.is_empty() {
        return Err(EngineError::BadAssignment(
            "an algorithm needs at least one target function".into(),
        ));
    }
    let distinct: BTreeSet<_> = algorithm.iter().collect();
    if distinct.len() != algorithm.len() {
        return Err(EngineError::BadAssignment(
            "an algorithm is a set: duplicate target functions are not allowed".into(),
        ));
    }
    if algorithm.len() > ids.len() {
        return Err(EngineError::BadAssignment(format!(
            "no surjection exists: {} target functions but only {} robots",
            algorithm.len(),
            ids.len()
        )));
    }
    let distinct_ids: BTreeSet<_> = ids.iter().collect();
    if distinct_ids.len() != ids.len() {
        return Err(EngineError::BadAssignment(
            "duplicate robot ids in the assignment universe".into(),
        ));
    }
    Ok(())
}

fn is_surjective(code: &[usize], m: usize) -> bool {
    let mut hit = vec![false; m];
    for &c in code {
        hit[c] = true;
    }
    hit.into_iter().all(|h| h)
}

fn decode(algorithm: &[TargetFunctionId], ids: &[usize], code: &[usize]) -> Assignment {
    Assignment::from_pairs(
        ids.iter()
            .zip(code)
            .map(|(&id, &c)| (id, algorithm[c])),
    )
}

/// Number of surjections from an `n`-set onto an `m`-set, by
/// inclusion–exclusion; `None` when it overflows (treated as "huge").
fn surjection_count(m: usize, n: usize) -> Option<u128> {
    let mut total: i128 = 0;
    for j in 0..=m {
        let c = binomial(m, j)?;
        let p = checked_pow((m - j) as u128, n)?;
        let term = i128::try_from(c.checked_mul(p)?).ok()?;
        total = if j % 2 == 0 {
            total.checked_add(term)?
        } else {
            total.checked_sub(term)?
        };
    }
    u128::try_from(total).ok()
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn compositions(
    total: usize,
    parts: usize,
    prefix: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if parts == 1 {
        prefix.push(total);
        emit(prefix);
        prefix.pop();
        return;
    }
    for first in 1..=(total - parts + 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, emit);
        prefix.pop();
    }
}
