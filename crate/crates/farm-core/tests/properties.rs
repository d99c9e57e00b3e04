//! Algebraic and cross-representation properties of the arbitrage
//! calculus, checked on randomized inputs.
//!
//! The load-bearing invariant is the two-route agreement: every chain
//! applied in integer exponent space must match the same chain applied
//! step by step in exact rational rate space, both in the states it
//! produces and in which steps fire. The exponent route is the fast
//! engine; the rational route is the independent oracle.

use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use farm_core::rates::{code_of, exponents_of, realize, BalancedBase, BalancedCode};
use farm_core::search::{reach, SearchConfig};
use farm_core::{
    apply_chain, apply_strong, apply_weak, Chain, Flavor, StrongId, WeakId, START,
};
use farm_core::arbitrage::{apply_strong_rates, apply_weak_rates};

fn any_state() -> impl Strategy<Value = farm_core::ExponentEnsemble> {
    prop::array::uniform6(-20i64..=20).prop_map(farm_core::ExponentEnsemble::new)
}

fn any_code() -> impl Strategy<Value = BalancedCode> {
    (-50i64..=50, -50i64..=50, -50i64..=50).prop_map(|(i, j, k)| BalancedCode::new(i, j, k))
}

proptest! {
    #[test]
    fn code_round_trips_through_exponents(code in any_code()) {
        let state = exponents_of(code);
        prop_assert!(state.is_balanced());
        prop_assert_eq!(code_of(&state), Some(code));
    }

    #[test]
    fn code_exists_exactly_for_balanced_states(state in any_state()) {
        prop_assert_eq!(code_of(&state).is_some(), state.is_balanced());
    }

    #[test]
    fn strong_arbitrages_are_idempotent(state in any_state(), id in 1u8..=12) {
        let id = StrongId::new(id).unwrap();
        let once = apply_strong(id, state);
        let twice = apply_strong(id, once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn weak_arbitrages_are_idempotent(state in any_state(), id in 1u8..=24) {
        let id = WeakId::new(id).unwrap();
        let (once, _) = apply_weak(id, state);
        let (twice, second_fire) = apply_weak(id, once);
        prop_assert_eq!(once, twice);
        prop_assert!(!second_fire, "a weak arbitrage never fires twice in a row");
    }

    #[test]
    fn balanced_states_are_fixed_by_everything(code in any_code()) {
        let state = exponents_of(code);
        for id in WeakId::all() {
            let (next, active) = apply_weak(id, state);
            prop_assert_eq!(next, state);
            prop_assert!(!active, "weak {} fired on balanced {}", id.get(), state);
        }
        for id in StrongId::all() {
            prop_assert_eq!(apply_strong(id, state), state);
        }
    }

    #[test]
    fn strong_step_equals_its_firing_weak_member(state in any_state(), id in 1u8..=12) {
        let strong = StrongId::new(id).unwrap();
        let (gt, lt) = strong.weak_pair();
        let end = apply_strong(strong, state);
        let (via_gt, gt_fired) = apply_weak(gt, state);
        let (via_lt, lt_fired) = apply_weak(lt, state);
        prop_assert!(!(gt_fired && lt_fired), "pair members watch opposite directions");
        if gt_fired {
            prop_assert_eq!(end, via_gt);
        } else if lt_fired {
            prop_assert_eq!(end, via_lt);
        } else {
            prop_assert_eq!(end, state, "at equality the strong step is the identity");
        }
    }

    #[test]
    fn weak_chain_agrees_with_rational_simulation(
        ids in prop::collection::vec(1u8..=24, 0..12),
        state in any_state(),
    ) {
        let base = BalancedBase::demo();
        let chain = Chain::weak(&ids).unwrap();
        let (end, trace) = apply_chain(&chain, state);
        let mut rates = realize(&state, &base);
        for (step, &id) in trace.steps.iter().zip(&ids) {
            let (next, active) = apply_weak_rates(WeakId::new(id).unwrap(), &rates);
            prop_assert_eq!(active, step.active, "firing decision for weak {}", id);
            prop_assert_eq!(&next, &realize(&step.state_after, &base));
            rates = next;
        }
        prop_assert_eq!(&rates, &realize(&end, &base));
    }

    #[test]
    fn strong_chain_agrees_with_rational_simulation(
        ids in prop::collection::vec(1u8..=12, 0..12),
        state in any_state(),
    ) {
        let base = BalancedBase::demo();
        let chain = Chain::strong(&ids).unwrap();
        let (end, trace) = apply_chain(&chain, state);
        let mut rates = realize(&state, &base);
        for (step, &id) in trace.steps.iter().zip(&ids) {
            let next = apply_strong_rates(StrongId::new(id).unwrap(), &rates);
            prop_assert_eq!(&next, &realize(&step.state_after, &base));
            rates = next;
        }
        prop_assert_eq!(&rates, &realize(&end, &base));
    }

    #[test]
    fn realized_rates_stay_balanced(state in any_state(), id in 1u8..=12) {
        let base = BalancedBase::demo();
        let end = apply_strong(StrongId::new(id).unwrap(), state);
        // Realization maps any exponent vector to rates; the balance of
        // the three mediation identities in rate space is equivalent to
        // the exponent balance identities.
        let rates = realize(&end, &base);
        prop_assert_eq!(rates.is_balanced(), end.is_balanced());
    }
}

#[test]
fn weak_pairs_cover_all_weak_ids_exactly_once() {
    let mut seen = [false; 24];
    for strong in StrongId::all() {
        let (gt, lt) = strong.weak_pair();
        for member in [gt, lt] {
            assert_eq!(member.strong_partner(), strong);
            let slot = &mut seen[member.pos()];
            assert!(!*slot, "weak {} claimed twice", member.get());
            *slot = true;
        }
        assert_eq!(
            gt.triple(),
            strong.triple(),
            "the greater-direction member shares the strong triple"
        );
    }
    assert!(seen.iter().all(|&s| s), "every weak id belongs to a pair");
}

#[test]
fn stored_witnesses_replay_at_depth_eight() {
    let report = reach(8, Flavor::Strong, START).expect("search in budget");
    let mut checked = 0usize;
    for state in report.states() {
        let chain = report.witness(&state).expect("member has witness");
        assert!(chain.len() <= 8, "witness within requested depth");
        let (end, _) = apply_chain(&chain, START);
        assert_eq!(end, state, "witness must replay to its state");
        checked += 1;
    }
    assert_eq!(checked, report.len());
    for pair in report.per_depth.windows(2) {
        assert!(pair[1].states >= pair[0].states, "reachable sets grow");
    }
}

#[test]
fn witnesses_realize_to_the_same_rates_as_simulation() {
    let base = BalancedBase::demo();
    let report = reach(6, Flavor::Strong, START).expect("search in budget");
    let all: Vec<_> = report.states().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0FA2_31AD);
    let sample = all.iter().choose_multiple(&mut rng, 100);
    assert!(!sample.is_empty());
    for &state in sample {
        let chain = report.witness(&state).expect("member has witness");
        let mut rates = realize(&START, &base);
        for id in chain.ids() {
            rates = apply_strong_rates(StrongId::new(id).unwrap(), &rates);
        }
        assert_eq!(
            rates,
            realize(&state, &base),
            "rational replay of the witness for {state}"
        );
    }
}

#[test]
fn exponent_one_realizes_to_alpha_scaled_rate() {
    let base = BalancedBase::demo();
    let rates = realize(&START, &base);
    let alpha: &BigRational = base.alpha();
    let expected = base.rates().principals()[0].clone() * alpha;
    assert_eq!(rates.principals()[0], expected);
    for i in 1..6 {
        assert_eq!(rates.principals()[i], base.rates().principals()[i]);
    }
}

#[test]
fn search_configs_do_not_change_results() {
    let sequential = SearchConfig {
        budget_states: 100_000,
        threads: 1,
    };
    let parallel = SearchConfig {
        budget_states: 100_000,
        threads: 3,
    };
    let a = farm_core::search::reach_with(6, Flavor::Weak, START, &sequential).unwrap();
    let b = farm_core::search::reach_with(6, Flavor::Weak, START, &parallel).unwrap();
    assert_eq!(a.per_depth, b.per_depth);
    for state in a.states() {
        assert_eq!(
            a.witness(&state).unwrap().ids(),
            b.witness(&state).unwrap().ids()
        );
    }
}
