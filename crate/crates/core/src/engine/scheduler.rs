//! Activation schedulers: which robots act in each time slot.
//!
//! The semi-synchronous model lets an adversary pick any subset of robots
//! per slot (the empty set included) as long as every robot acts
//! infinitely often. The schedulers here are the constructive stand-ins
//! used by tests and scenarios: lockstep activation, seeded random subsets
//! with a hard fairness bound, a central one-robot-at-a-time rotation, and
//! verbatim replay of a scripted activation list.

use std::collections::{BTreeMap, BTreeSet};

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Scalar;

use super::{EngineError, World};

/// Blueprint for a [`Scheduler`].
#[derive(Debug, Clone)]
pub enum SchedulerKind {
    /// Every robot acts in every slot.
    Fsync,
    /// Each robot independently acts with probability `p` per slot, and a
    /// robot idle for `bound` consecutive slots is force-activated, making
    /// fairness a hard guarantee rather than a probabilistic one.
    FairRandom { seed: u64, p: Scalar, bound: u64 },
    /// Exactly one robot acts per slot, cycling through ids in ascending
    /// order.
    CentralRoundRobin,
    /// Replays a finite list of activation sets, repeating it forever.
    /// Fairness is the script author's responsibility.
    Scripted(Vec<Vec<usize>>),
}

/// Builds the scheduler described by `kind`, validating its parameters:
/// the activation probability must lie in `(0, 1]`, the fairness bound
/// must be at least 1, and a script must contain at least one set.
pub fn make_scheduler(kind: SchedulerKind) -> Result<Scheduler, EngineError> {
    Scheduler::new(kind)
}

/// A stateful activation source. Identical construction parameters yield
/// identical activation streams, so executions are reproducible.
#[derive(Debug, Clone)]
pub struct Scheduler {
    state: State,
}

#[derive(Debug, Clone)]
enum State {
    Fsync,
    FairRandom {
        rng: ChaCha8Rng,
        p_num: u32,
        p_den: u32,
        bound: u64,
        idle: BTreeMap<usize, u64>,
    },
    CentralRoundRobin {
        cursor: usize,
    },
    Scripted {
        sets: Vec<BTreeSet<usize>>,
        cursor: usize,
    },
}

impl Scheduler {
    /// See [`make_scheduler`].
    pub fn new(kind: SchedulerKind) -> Result<Scheduler, EngineError> {
        let state = match kind {
            SchedulerKind::Fsync => State::Fsync,
            SchedulerKind::FairRandom { seed, p, bound } => {
                if !p.is_positive() || p > Scalar::one() {
                    return Err(EngineError::BadScheduler(format!(
                        "activation probability must be in (0, 1], got {p}"
                    )));
                }
                if bound == 0 {
                    return Err(EngineError::BadScheduler(
                        "fairness bound must be at least 1".into(),
                    ));
                }
                let (p_num, p_den) = match (p.numer().to_u32(), p.denom().to_u32()) {
                    (Some(n), Some(d)) => (n, d),
                    _ => {
                        return Err(EngineError::BadScheduler(format!(
                            "activation probability {p} is too fine-grained"
                        )))
                    }
                };
                State::FairRandom {
                    rng: ChaCha8Rng::seed_from_u64(seed),
                    p_num,
                    p_den,
                    bound,
                    idle: BTreeMap::new(),
                }
            }
            SchedulerKind::CentralRoundRobin => State::CentralRoundRobin { cursor: 0 },
            SchedulerKind::Scripted(sets) => {
                if sets.is_empty() {
                    return Err(EngineError::BadScheduler(
                        "a scripted schedule needs at least one activation set".into(),
                    ));
                }
                State::Scripted {
                    sets: sets
                        .into_iter()
                        .map(|s| s.into_iter().collect())
                        .collect(),
                    cursor: 0,
                }
            }
        };
        Ok(Scheduler { state })
    }

    /// The activation set for the current slot; advances internal state.
    ///
    /// The random scheduler draws one coin per robot in ascending id order
    /// every slot, so the random stream consumed does not depend on
    /// earlier outcomes.
    pub fn next_activation(&mut self, world: &World) -> BTreeSet<usize> {
        let ids = world.ids();
        match &mut self.state {
            State::Fsync => ids.into_iter().collect(),
            State::FairRandom {
                rng,
                p_num,
                p_den,
                bound,
                idle,
            } => {
                let mut out = BTreeSet::new();
                for id in ids {
                    let coin = rng.gen_ratio(*p_num, *p_den);
                    let idle_slots = idle.entry(id).or_insert(0);
                    if coin || *idle_slots >= *bound {
                        out.insert(id);
                        *idle_slots = 0;
                    } else {
                        *idle_slots += 1;
                    }
                }
                out
            }
            State::CentralRoundRobin { cursor } => {
                let pick = ids[*cursor % ids.len()];
                *cursor += 1;
                BTreeSet::from([pick])
            }
            State::Scripted { sets, cursor } => {
                let set = sets[*cursor % sets.len()].clone();
                *cursor += 1;
                set
            }
        }
    }
}
