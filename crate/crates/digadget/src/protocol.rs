//! The one-way Alice→Bob protocol built on any streaming algorithm, plus
//! exhaustive verification and Monte-Carlo success estimation.
//!
//! Alice holds only `x`: she streams `e1` (which depends on `x` alone)
//! into the algorithm and ships the serialized state. Bob holds only `i`:
//! he restores the state, streams `e2` (which depends on `i` alone), and
//! maps the algorithm's verdict back to a claim about `x[i]`. The function
//! signatures enforce the information split — there is no way to hand Bob
//! the vector or Alice the index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::bits::BitString;
use crate::gadget::{
    build_e1, build_e2, ground_truth, BitVector, GadgetError, GadgetInstance, GadgetParams,
    IndexInstance, Property,
};
use crate::graph::Edge;
use crate::stream::{order_segment, PublicParams, StreamError, StreamOrder, StreamingAlgorithm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

/// Whether Alice and Bob derive their coins from one seed or from two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinMode {
    /// Both parties see the same seed; required by [`crate::algo::SampledIndex`].
    Shared,
    /// Independent seeds per party.
    Private,
}

impl std::str::FromStr for CoinMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared" => Ok(CoinMode::Shared),
            "private" => Ok(CoinMode::Private),
            other => Err(format!("unknown coin mode {other:?}, expected shared or private")),
        }
    }
}

impl std::fmt::Display for CoinMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoinMode::Shared => "shared",
            CoinMode::Private => "private",
        })
    }
}

/// Alice's half: stream `e1` for `x` into a fresh run of `alg` and return
/// the serialized state. The message length is the boundary state length.
pub fn alice_message(
    alg: &mut dyn StreamingAlgorithm,
    property: Property,
    x: &BitVector,
    order: StreamOrder,
    order_seed: u64,
    coin_seed: u64,
) -> BitString {
    let params = PublicParams::for_problem(property, x.len(), coin_seed);
    let mut edges: Vec<Edge> = build_e1(x).into_iter().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(order_seed);
    order_segment(&mut edges, order, &mut rng);
    alg.begin(&params);
    for edge in edges {
        alg.absorb(edge);
    }
    alg.snapshot()
}

/// Bob's half: restore from the message, stream `e2` for `(m, i)`, and map
/// the algorithm's verdict to the claimed value of `x[i]`.
#[allow(clippy::too_many_arguments)]
pub fn bob_decide(
    alg: &mut dyn StreamingAlgorithm,
    property: Property,
    message: &BitString,
    m: usize,
    i: usize,
    order: StreamOrder,
    order_seed: u64,
    coin_seed: u64,
) -> Result<bool, ProtocolError> {
    let params = PublicParams::for_problem(property, m, coin_seed);
    let gadget_params = GadgetParams::derive(m, i)?;
    let mut edges: Vec<Edge> = build_e2(property, gadget_params).into_iter().collect();
    let mut rng = ChaCha12Rng::seed_from_u64(order_seed);
    order_segment(&mut edges, order, &mut rng);
    alg.restore(&params, message)?;
    for edge in edges {
        alg.absorb(edge);
    }
    let verdict = alg.decide()?;
    Ok(property.bit_for_verdict(verdict))
}

/// Outcome of one full protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialResult {
    pub property: Property,
    pub m: usize,
    pub i: usize,
    /// Length of Alice's message: the state at the segment boundary.
    pub message_bits: usize,
    /// Bob's final property verdict.
    pub decision: bool,
    /// The property verdict the instance encodes.
    pub truth: bool,
    pub correct: bool,
}

/// Runs the complete protocol once: Alice on `x`, Bob on `i`.
pub fn run_trial(
    alice_alg: &mut dyn StreamingAlgorithm,
    bob_alg: &mut dyn StreamingAlgorithm,
    property: Property,
    inst: &IndexInstance,
    order: StreamOrder,
    order_seeds: (u64, u64),
    coin_seeds: (u64, u64),
) -> Result<TrialResult, ProtocolError> {
    let message = alice_message(alice_alg, property, inst.x(), order, order_seeds.0, coin_seeds.0);
    let claimed = bob_decide(
        bob_alg,
        property,
        &message,
        inst.m(),
        inst.index(),
        order,
        order_seeds.1,
        coin_seeds.1,
    )?;
    let decision = property.verdict_for_bit(claimed);
    let truth = ground_truth(property, inst);
    Ok(TrialResult {
        property,
        m: inst.m(),
        i: inst.index(),
        message_bits: message.len(),
        decision,
        truth,
        correct: decision == truth,
    })
}

/// Largest `m` the exhaustive sweep accepts; keeps the worst case near
/// 10^7 oracle calls.
pub const EXHAUSTIVE_M_LIMIT: usize = 14;

/// Outcome of an exhaustive sweep over all `(x, i)` pairs of a given `m`.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub property: Property,
    pub m: usize,
    /// Number of `(x, i)` pairs checked: `2^m * m`.
    pub cases: usize,
    /// Cases where the exact oracle on the built graph disagreed with the
    /// bit read straight from `x`.
    pub oracle_mismatches: usize,
    /// Cases where the full-store protocol failed to recover `x[i]`.
    pub protocol_mismatches: usize,
    /// Human-readable details for the first few failures.
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.oracle_mismatches == 0 && self.protocol_mismatches == 0
    }
}

/// Checks every `(x, i)` pair at length `m`, both ways: the exact oracle
/// against the encoded bit, and the full-store protocol against `x[i]`.
pub fn exhaustive_verify(property: Property, m: usize) -> VerifyReport {
    assert!(
        (1..=EXHAUSTIVE_M_LIMIT).contains(&m),
        "exhaustive verification supports 1 <= m <= {EXHAUSTIVE_M_LIMIT}"
    );
    const MAX_FAILURE_DETAILS: usize = 8;
    let mut report = VerifyReport {
        property,
        m,
        cases: 0,
        oracle_mismatches: 0,
        protocol_mismatches: 0,
        failures: Vec::new(),
    };
    for value in 0..1u64 << m {
        let x = BitVector::from_int(value, m);
        for i in 0..m {
            report.cases += 1;
            let inst = IndexInstance::new(x.clone(), i).expect("i < m by construction");
            let truth = ground_truth(property, &inst);

            let gadget = GadgetInstance::build(property, &inst);
            if gadget.oracle_verdict() != truth {
                report.oracle_mismatches += 1;
                if report.failures.len() < MAX_FAILURE_DETAILS {
                    report.failures.push(format!("oracle mismatch at x={x} i={i}"));
                }
            }

            let seed = value.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64);
            let mut alice = crate::algo::FullStore::new();
            let mut bob = crate::algo::FullStore::new();
            let trial = run_trial(
                &mut alice,
                &mut bob,
                property,
                &inst,
                StreamOrder::Canonical,
                (seed, seed ^ 1),
                (seed ^ 2, seed ^ 2),
            );
            let ok = matches!(&trial, Ok(t) if t.correct);
            if !ok {
                report.protocol_mismatches += 1;
                if report.failures.len() < MAX_FAILURE_DETAILS {
                    report.failures.push(match trial {
                        Ok(t) => format!("protocol mismatch at x={x} i={i}: decided {}", t.decision),
                        Err(e) => format!("protocol error at x={x} i={i}: {e}"),
                    });
                }
            }
        }
    }
    report
}

/// Empirical success rate of a protocol at a fixed memory budget.
///
/// Counts are stored raw; `rate`, the confidence half-width, and the
/// effective advantage `epsilon_hat = 2*rate - 1` derive from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuccessEstimate {
    pub trials: usize,
    pub successes: usize,
    pub memory_budget_bits: usize,
    /// Largest message observed across trials.
    pub max_message_bits: usize,
    /// Trials whose message exceeded the declared budget.
    pub budget_violations: usize,
}

impl SuccessEstimate {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Normal-approximation 95% half-width: `1.96 * sqrt(r(1-r)/trials)`.
    pub fn ci95_halfwidth(&self) -> f64 {
        let r = self.rate();
        1.96 * (r * (1.0 - r) / self.trials as f64).sqrt()
    }

    /// Advantage over a fair guess, in `[-1, 1]`.
    pub fn epsilon_hat(&self) -> f64 {
        2.0 * self.rate() - 1.0
    }
}

/// Per-trial generator seeded by `(master, trial)` alone, so trials are
/// reproducible in any execution order.
fn trial_rng(master_seed: u64, trial: u64) -> ChaCha12Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&trial.to_le_bytes());
    ChaCha12Rng::from_seed(seed)
}

/// Measures the protocol's success probability over uniformly random
/// `(x, i)` and fresh coins, one algorithm instance per party per trial.
#[allow(clippy::too_many_arguments)]
pub fn estimate_success(
    make_alg: &dyn Fn(usize) -> Box<dyn StreamingAlgorithm>,
    property: Property,
    m: usize,
    budget_bits: usize,
    trials: usize,
    coins: CoinMode,
    order: StreamOrder,
    master_seed: u64,
) -> Result<SuccessEstimate, ProtocolError> {
    assert!(trials >= 1, "at least one trial is required");
    assert!(m >= 1, "m must be at least 1");
    let mut estimate = SuccessEstimate {
        trials,
        successes: 0,
        memory_budget_bits: budget_bits,
        max_message_bits: 0,
        budget_violations: 0,
    };
    for trial in 0..trials {
        let mut rng = trial_rng(master_seed, trial as u64);
        let x = BitVector::random(m, &mut rng);
        let i = rng.random_range(0..m);
        let order_seeds = (rng.random(), rng.random());
        let alice_coin: u64 = rng.random();
        let bob_coin = match coins {
            CoinMode::Shared => alice_coin,
            CoinMode::Private => rng.random(),
        };
        let inst = IndexInstance::new(x, i).expect("i < m by construction");
        let mut alice = make_alg(budget_bits);
        let mut bob = make_alg(budget_bits);
        let trial_result = run_trial(
            alice.as_mut(),
            bob.as_mut(),
            property,
            &inst,
            order,
            order_seeds,
            (alice_coin, bob_coin),
        )?;
        if trial_result.correct {
            estimate.successes += 1;
        }
        estimate.max_message_bits = estimate.max_message_bits.max(trial_result.message_bits);
        if trial_result.message_bits > budget_bits {
            estimate.budget_violations += 1;
        }
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::{FullStore, SampledIndex};
    use crate::stream::{make_stream, run_streaming};

    fn full_store_factory() -> Box<dyn Fn(usize) -> Box<dyn StreamingAlgorithm>> {
        Box::new(|_| Box::new(FullStore::new()))
    }

    fn sampled_factory() -> Box<dyn Fn(usize) -> Box<dyn StreamingAlgorithm>> {
        Box::new(|budget| Box::new(SampledIndex::new(budget)))
    }

    #[test]
    fn alice_message_decodes_to_e1() {
        let x: BitVector = "001011010".parse().unwrap();
        let mut alg = FullStore::new();
        let message =
            alice_message(&mut alg, Property::Acyclicity, &x, StreamOrder::Canonical, 0, 0);
        let params = PublicParams::for_problem(Property::Acyclicity, x.len(), 0);
        let mut decoded = FullStore::new();
        decoded.restore(&params, &message).unwrap();
        let mut bob = FullStore::new();
        bob.restore(&params, &message).unwrap();
        // Decide on e1 alone: four bipartite edges, no cycle yet.
        assert!(bob.decide().unwrap());
    }

    #[test]
    fn bob_recovers_the_figure_bit() {
        let x: BitVector = "001011010".parse().unwrap();
        let mut alice = FullStore::new();
        let message =
            alice_message(&mut alice, Property::Acyclicity, &x, StreamOrder::Canonical, 0, 0);
        let mut bob = FullStore::new();
        let claimed =
            bob_decide(&mut bob, Property::Acyclicity, &message, 9, 5, StreamOrder::Canonical, 0, 0)
                .unwrap();
        assert!(claimed, "x[5] = 1 in the figure vector");
    }

    #[test]
    fn full_store_protocol_is_exact_for_m4() {
        for property in Property::ALL {
            for value in 0..16u64 {
                let x = BitVector::from_int(value, 4);
                for i in 0..4 {
                    let inst = IndexInstance::new(x.clone(), i).unwrap();
                    let mut alice = FullStore::new();
                    let mut bob = FullStore::new();
                    let trial = run_trial(
                        &mut alice,
                        &mut bob,
                        property,
                        &inst,
                        StreamOrder::Canonical,
                        (0, 1),
                        (2, 2),
                    )
                    .unwrap();
                    assert!(trial.correct, "{property} x={x} i={i}");
                }
            }
        }
    }

    #[test]
    fn message_length_equals_boundary_state() {
        let x: BitVector = "001011010".parse().unwrap();
        let inst = IndexInstance::new(x.clone(), 5).unwrap();
        for property in Property::ALL {
            let gadget = GadgetInstance::build(property, &inst);
            let stream = make_stream(&gadget, StreamOrder::Canonical, 0);
            let params = PublicParams::for_instance(&gadget, 9);
            let mut continuous = FullStore::new();
            let (_, profile) = run_streaming(&mut continuous, &stream, &params).unwrap();
            let mut alice = FullStore::new();
            let message = alice_message(&mut alice, property, &x, StreamOrder::Canonical, 0, 9);
            assert_eq!(message.len(), profile.boundary_state_bits, "{property}");
        }
    }

    #[test]
    fn exhaustive_verify_smallest_instances() {
        let report = exhaustive_verify(Property::StrongConnectivity, 1);
        assert_eq!(report.cases, 2);
        assert!(report.is_clean());
    }

    #[test]
    fn exhaustive_verify_acyclicity_m9() {
        let report = exhaustive_verify(Property::Acyclicity, 9);
        assert_eq!(report.cases, 512 * 9);
        assert!(report.is_clean(), "failures: {:?}", report.failures);
    }

    #[test]
    fn full_store_estimate_is_perfect() {
        let est = estimate_success(
            &*full_store_factory(),
            Property::ReachabilityFromS,
            9,
            1_000_000,
            10_000,
            CoinMode::Shared,
            StreamOrder::Canonical,
            31,
        )
        .unwrap();
        assert_eq!(est.successes, est.trials);
        assert_eq!(est.rate(), 1.0);
        assert_eq!(est.budget_violations, 0);
    }

    #[test]
    fn sampled_index_rate_is_monotone_in_the_budget() {
        let m = 64;
        let estimates: Vec<SuccessEstimate> = [0usize, m / 4, m / 2, m]
            .into_iter()
            .map(|budget| {
                estimate_success(
                    &*sampled_factory(),
                    Property::ReachabilityFromS,
                    m,
                    budget,
                    4_000,
                    CoinMode::Shared,
                    StreamOrder::Canonical,
                    8,
                )
                .unwrap()
            })
            .collect();
        for pair in estimates.windows(2) {
            let slack = pair[0].ci95_halfwidth() + pair[1].ci95_halfwidth();
            assert!(
                pair[1].rate() >= pair[0].rate() - slack,
                "rate dropped from {} to {} between budgets {} and {}",
                pair[0].rate(),
                pair[1].rate(),
                pair[0].memory_budget_bits,
                pair[1].memory_budget_bits
            );
        }
    }

    #[test]
    fn zero_budget_sampled_index_is_a_coin_flip() {
        let est = estimate_success(
            &*sampled_factory(),
            Property::StrongConnectivity,
            64,
            0,
            10_000,
            CoinMode::Shared,
            StreamOrder::Canonical,
            1,
        )
        .unwrap();
        assert_eq!(est.max_message_bits, 0);
        assert!((est.rate() - 0.5).abs() < 0.02, "rate {}", est.rate());
    }

    #[test]
    fn half_budget_sampled_index_hits_three_quarters() {
        let est = estimate_success(
            &*sampled_factory(),
            Property::StrongConnectivity,
            64,
            32,
            10_000,
            CoinMode::Shared,
            StreamOrder::Canonical,
            2,
        )
        .unwrap();
        assert_eq!(est.max_message_bits, 32);
        assert!((est.rate() - 0.75).abs() < 0.02, "rate {}", est.rate());
        assert!((est.epsilon_hat() - 0.5).abs() < 0.04);
    }

    #[test]
    fn estimates_are_reproducible() {
        let run = || {
            estimate_success(
                &*sampled_factory(),
                Property::Acyclicity,
                16,
                8,
                500,
                CoinMode::Shared,
                StreamOrder::Shuffled,
                77,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn private_coins_degrade_the_sampled_index() {
        let shared = estimate_success(
            &*sampled_factory(),
            Property::StrongConnectivity,
            64,
            48,
            4_000,
            CoinMode::Shared,
            StreamOrder::Canonical,
            5,
        )
        .unwrap();
        let private = estimate_success(
            &*sampled_factory(),
            Property::StrongConnectivity,
            64,
            48,
            4_000,
            CoinMode::Private,
            StreamOrder::Canonical,
            5,
        )
        .unwrap();
        assert!(shared.rate() > private.rate() + 0.05, "shared {} private {}", shared.rate(), private.rate());
    }
}
