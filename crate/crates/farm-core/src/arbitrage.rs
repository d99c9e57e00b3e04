//! Weak and strong arbitrages, chains, and traces.
//!
//! An arbitrage `A_XYZ` watches the exchange from `X` to `Y` through the
//! mediator `Z`. The *weak* form is conditional: when the mediated rate
//! strictly beats the direct rate, `r_XY` is reset to the mediated value,
//! otherwise nothing happens. The *strong* form resets unconditionally,
//! balancing the sub-economy `{X, Y, Z}` on that pair; at equality it is
//! the identity.
//!
//! There are 24 weak arbitrages (ordered triples of distinct goods) and
//! 12 strong ones (`X` before `Y` in good order, since `A_XYZ` and
//! `A_YXZ` coincide in strong form). On the exponent lattice every
//! arbitrage is an integer-linear reassignment of one coordinate,
//! independent of the scale `alpha`; the rate-space and exponent-space
//! routes are kept separate so they can be checked against each other.
//!
//! Chains apply left to right: `(k1, k2, ...)` applies `k1` first.

use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

use crate::rates::{Good, PrincipalIndex, RateEnsemble};
use crate::{Error, ExponentEnsemble, Result};

/// Identifier of a weak arbitrage, `1..=24` in the canonical name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeakId(u8);

/// Identifier of a strong arbitrage, `1..=12` in the canonical name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StrongId(u8);

/// Ordered triples naming the 24 weak arbitrages: `A_XYZ` resets the
/// `X -> Y` rate through mediator `Z`.
pub const WEAK_TRIPLES: [(Good, Good, Good); 24] = {
    use Good::{A, F, M, R};
    [
        (F, A, R),
        (F, A, M),
        (F, R, A),
        (F, R, M),
        (F, M, A),
        (F, M, R),
        (A, F, R),
        (A, F, M),
        (A, R, F),
        (A, R, M),
        (A, M, F),
        (A, M, R),
        (R, F, A),
        (R, F, M),
        (R, A, F),
        (R, A, M),
        (R, M, F),
        (R, M, A),
        (M, F, A),
        (M, F, R),
        (M, A, F),
        (M, A, R),
        (M, R, F),
        (M, R, A),
    ]
};

/// Ordered triples naming the 12 strong arbitrages; `X` precedes `Y` in
/// good order.
pub const STRONG_TRIPLES: [(Good, Good, Good); 12] = {
    use Good::{A, F, M, R};
    [
        (F, A, R),
        (F, A, M),
        (F, R, A),
        (F, R, M),
        (F, M, A),
        (F, M, R),
        (A, R, F),
        (A, R, M),
        (A, M, F),
        (A, M, R),
        (R, M, F),
        (R, M, A),
    ]
};

impl WeakId {
    /// Build from a 1-based id.
    pub fn new(id: u8) -> Result<Self> {
        if (1..=24).contains(&id) {
            Ok(WeakId(id))
        } else {
            Err(Error::IndexOutOfRange {
                what: "weak arbitrage id",
                range: "1..=24",
                got: i64::from(id),
            })
        }
    }

    /// All 24 ids in order.
    #[must_use]
    pub fn all() -> impl Iterator<Item = WeakId> {
        (1..=24).map(WeakId)
    }

    /// The 1-based id.
    #[must_use]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based position into the name table.
    #[must_use]
    pub fn pos(self) -> usize {
        usize::from(self.0) - 1
    }

    /// The goods triple `(X, Y, Z)`.
    #[must_use]
    pub fn triple(self) -> (Good, Good, Good) {
        WEAK_TRIPLES[self.pos()]
    }

    /// Name such as `"FAR"`.
    #[must_use]
    pub fn name(self) -> String {
        let (x, y, z) = self.triple();
        format!("{x}{y}{z}")
    }

    /// The strong arbitrage acting on the same pair through the same
    /// mediator.
    #[must_use]
    pub fn strong_partner(self) -> StrongId {
        STRONG_OF_WEAK[self.pos()]
    }
}

impl StrongId {
    /// Build from a 1-based id.
    pub fn new(id: u8) -> Result<Self> {
        if (1..=12).contains(&id) {
            Ok(StrongId(id))
        } else {
            Err(Error::IndexOutOfRange {
                what: "strong arbitrage id",
                range: "1..=12",
                got: i64::from(id),
            })
        }
    }

    /// All 12 ids in order.
    #[must_use]
    pub fn all() -> impl Iterator<Item = StrongId> {
        (1..=12).map(StrongId)
    }

    /// The 1-based id.
    #[must_use]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based position into the name table.
    #[must_use]
    pub fn pos(self) -> usize {
        usize::from(self.0) - 1
    }

    /// The goods triple `(X, Y, Z)`.
    #[must_use]
    pub fn triple(self) -> (Good, Good, Good) {
        STRONG_TRIPLES[self.pos()]
    }

    /// Name such as `"ARF"`.
    #[must_use]
    pub fn name(self) -> String {
        let (x, y, z) = self.triple();
        format!("{x}{y}{z}")
    }

    /// The two weak arbitrages on the same pair and mediator, as
    /// (member active when the mediated rate exceeds the direct one,
    /// member active when it falls short).
    #[must_use]
    pub fn weak_pair(self) -> (WeakId, WeakId) {
        WEAK_PAIRS[self.pos()]
    }
}

impl fmt::Display for WeakId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for StrongId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The exponent-lattice action of one arbitrage: with signs folded in,
/// the watched value is `tv = target_sign * n[target]` and the mediated
/// value is `e = sum of sign * n[coord] over terms`. A weak arbitrage
/// fires iff `e > tv`; firing (or a strong arbitrage unconditionally)
/// reassigns `n[target] = target_sign * e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    /// Zero-based coordinate being reassigned.
    pub target: usize,
    /// Sign of the target coordinate inside the watched rate.
    pub target_sign: i64,
    /// The two signed coordinates forming the mediated value.
    pub terms: [(usize, i64); 2],
}

impl Rule {
    /// Derive the rule for `A_XYZ` from its goods triple.
    fn derive(x: Good, y: Good, z: Good) -> Rule {
        let signed = |a: Good, b: Good| -> (usize, i64) {
            let (p, direct) = PrincipalIndex::of_pair(a, b).expect("distinct goods");
            (p.pos(), if direct { 1 } else { -1 })
        };
        let (target, target_sign) = signed(x, y);
        Rule {
            target,
            target_sign,
            terms: [signed(x, z), signed(z, y)],
        }
    }

    /// The mediated value `e` at a state.
    #[must_use]
    pub fn mediated(&self, n: &[i64; 6]) -> i64 {
        self.terms[0].1 * n[self.terms[0].0] + self.terms[1].1 * n[self.terms[1].0]
    }

    /// The watched value `tv` at a state.
    #[must_use]
    pub fn watched(&self, n: &[i64; 6]) -> i64 {
        self.target_sign * n[self.target]
    }
}

static WEAK_RULES: LazyLock<[Rule; 24]> = LazyLock::new(|| {
    std::array::from_fn(|pos| {
        let (x, y, z) = WEAK_TRIPLES[pos];
        Rule::derive(x, y, z)
    })
});

static STRONG_RULES: LazyLock<[Rule; 12]> = LazyLock::new(|| {
    std::array::from_fn(|pos| {
        let (x, y, z) = STRONG_TRIPLES[pos];
        Rule::derive(x, y, z)
    })
});

static WEAK_PAIRS: LazyLock<[(WeakId, WeakId); 12]> = LazyLock::new(|| {
    std::array::from_fn(|pos| {
        let (x, y, z) = STRONG_TRIPLES[pos];
        let find = |t: (Good, Good, Good)| {
            let p = WEAK_TRIPLES.iter().position(|&w| w == t).expect("triple");
            WeakId(p as u8 + 1)
        };
        (find((x, y, z)), find((y, x, z)))
    })
});

static STRONG_OF_WEAK: LazyLock<[StrongId; 24]> = LazyLock::new(|| {
    std::array::from_fn(|pos| {
        let (x, y, z) = WEAK_TRIPLES[pos];
        let canonical = if x < y { (x, y, z) } else { (y, x, z) };
        let p = STRONG_TRIPLES
            .iter()
            .position(|&s| s == canonical)
            .expect("triple");
        StrongId(p as u8 + 1)
    })
});

/// The exponent-lattice rule of a weak arbitrage.
#[must_use]
pub fn weak_rule(id: WeakId) -> Rule {
    WEAK_RULES[id.pos()]
}

/// The exponent-lattice rule of a strong arbitrage.
#[must_use]
pub fn strong_rule(id: StrongId) -> Rule {
    STRONG_RULES[id.pos()]
}

/// Apply a weak arbitrage to an exponent vector. Returns the new vector
/// and whether the arbitrage fired.
#[must_use]
pub fn apply_weak(id: WeakId, state: ExponentEnsemble) -> (ExponentEnsemble, bool) {
    let rule = WEAK_RULES[id.pos()];
    let mut n = state.exponents();
    let e = rule.mediated(&n);
    if e > rule.watched(&n) {
        n[rule.target] = rule.target_sign * e;
        (ExponentEnsemble::new(n), true)
    } else {
        (state, false)
    }
}

/// Apply a strong arbitrage to an exponent vector.
#[must_use]
pub fn apply_strong(id: StrongId, state: ExponentEnsemble) -> ExponentEnsemble {
    let rule = STRONG_RULES[id.pos()];
    let mut n = state.exponents();
    n[rule.target] = rule.target_sign * rule.mediated(&n);
    ExponentEnsemble::new(n)
}

/// Apply a weak arbitrage directly in rate space, with exact rational
/// arithmetic. Returns the new ensemble and whether the arbitrage fired.
#[must_use]
pub fn apply_weak_rates(id: WeakId, rates: &RateEnsemble) -> (RateEnsemble, bool) {
    let (x, y, z) = id.triple();
    let mediated = rates.rate(x, z) * rates.rate(z, y);
    if mediated > rates.rate(x, y) {
        (set_rate(rates, x, y, mediated), true)
    } else {
        (rates.clone(), false)
    }
}

/// Apply a strong arbitrage directly in rate space.
#[must_use]
pub fn apply_strong_rates(id: StrongId, rates: &RateEnsemble) -> RateEnsemble {
    let (x, y, z) = id.triple();
    let mediated = rates.rate(x, z) * rates.rate(z, y);
    set_rate(rates, x, y, mediated)
}

fn set_rate(
    rates: &RateEnsemble,
    x: Good,
    y: Good,
    value: num_rational::BigRational,
) -> RateEnsemble {
    let (p, direct) = PrincipalIndex::of_pair(x, y).expect("distinct goods");
    let mut principals = rates.principals().clone();
    principals[p.pos()] = if direct { value } else { value.recip() };
    RateEnsemble::new(principals).expect("positive rates stay positive")
}

/// Which family a chain draws its steps from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    /// Conditional arbitrages, ids `1..=24`.
    Weak,
    /// Unconditional arbitrages, ids `1..=12`.
    Strong,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Weak => write!(f, "weak"),
            Flavor::Strong => write!(f, "strong"),
        }
    }
}

/// A finite chain of arbitrages of one flavor, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Chain {
    /// A chain of weak arbitrages.
    Weak(Vec<WeakId>),
    /// A chain of strong arbitrages.
    Strong(Vec<StrongId>),
}

impl Chain {
    /// Build a weak chain from 1-based ids.
    pub fn weak(ids: &[u8]) -> Result<Chain> {
        ids.iter()
            .map(|&i| WeakId::new(i))
            .collect::<Result<Vec<_>>>()
            .map(Chain::Weak)
    }

    /// Build a strong chain from 1-based ids.
    pub fn strong(ids: &[u8]) -> Result<Chain> {
        ids.iter()
            .map(|&i| StrongId::new(i))
            .collect::<Result<Vec<_>>>()
            .map(Chain::Strong)
    }

    /// Number of steps.
    #[must_use]
    pub fn len(&self) -> usize {
        match self {
            Chain::Weak(v) => v.len(),
            Chain::Strong(v) => v.len(),
        }
    }

    /// Whether the chain has no steps.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The flavor of the chain.
    #[must_use]
    pub fn flavor(&self) -> Flavor {
        match self {
            Chain::Weak(_) => Flavor::Weak,
            Chain::Strong(_) => Flavor::Strong,
        }
    }

    /// The 1-based ids of the steps.
    #[must_use]
    pub fn ids(&self) -> Vec<u8> {
        match self {
            Chain::Weak(v) => v.iter().map(|w| w.get()).collect(),
            Chain::Strong(v) => v.iter().map(|s| s.get()).collect(),
        }
    }

    /// Parse a chain string: `w:` or `s:` prefix, then comma-separated
    /// ids. `w:` alone is the empty weak chain.
    pub fn parse(text: &str) -> Result<Chain> {
        let (prefix, rest) = text.split_once(':').ok_or_else(|| Error::MalformedChain {
            detail: format!("missing w:/s: prefix in {text:?}"),
        })?;
        let ids: Vec<u8> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim().parse::<u8>().map_err(|_| Error::MalformedChain {
                        detail: format!("invalid id {p:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        };
        match prefix.trim() {
            "w" | "W" => Chain::weak(&ids),
            "s" | "S" => Chain::strong(&ids),
            other => Err(Error::MalformedChain {
                detail: format!("unknown flavor prefix {other:?}, expected w or s"),
            }),
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self {
            Chain::Weak(_) => "w",
            Chain::Strong(_) => "s",
        };
        write!(f, "{prefix}:")?;
        for (pos, id) in self.ids().iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

/// One executed step of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    /// 1-based id of the arbitrage applied.
    pub id: u8,
    /// Weak: the condition held. Strong: the state changed.
    pub active: bool,
    /// State after the step.
    pub state_after: ExponentEnsemble,
}

/// The full record of a chain application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// Flavor of the chain.
    pub flavor: Flavor,
    /// State before the first step.
    pub start: ExponentEnsemble,
    /// Per-step records in application order.
    pub steps: Vec<StepRecord>,
}

impl Trace {
    /// The final state (the start state for an empty chain).
    #[must_use]
    pub fn end(&self) -> ExponentEnsemble {
        self.steps.last().map_or(self.start, |s| s.state_after)
    }

    /// Whether every step was active.
    #[must_use]
    pub fn all_active(&self) -> bool {
        self.steps.iter().all(|s| s.active)
    }
}

/// Apply a chain left to right, recording every step.
#[must_use]
pub fn apply_chain(chain: &Chain, start: ExponentEnsemble) -> (ExponentEnsemble, Trace) {
    let mut state = start;
    let mut steps = Vec::with_capacity(chain.len());
    match chain {
        Chain::Weak(ids) => {
            for &id in ids {
                let (next, active) = apply_weak(id, state);
                state = next;
                steps.push(StepRecord {
                    id: id.get(),
                    active,
                    state_after: state,
                });
            }
        }
        Chain::Strong(ids) => {
            for &id in ids {
                let next = apply_strong(id, state);
                let active = next != state;
                state = next;
                steps.push(StepRecord {
                    id: id.get(),
                    active,
                    state_after: state,
                });
            }
        }
    }
    (
        state,
        Trace {
            flavor: chain.flavor(),
            start,
            steps,
        },
    )
}

/// Rewrite a strong chain as a weak chain of the same length with the
/// same outcome from `start`: each strong step is replaced by the weak
/// pair member whose direction matches the state at that step; at
/// equality the lower-numbered member is chosen (it is inactive, exactly
/// as the strong step is the identity there).
#[must_use]
pub fn strong_to_weak(chain: &[StrongId], start: ExponentEnsemble) -> Vec<WeakId> {
    let mut state = start;
    let mut out = Vec::with_capacity(chain.len());
    for &id in chain {
        let rule = STRONG_RULES[id.pos()];
        let n = state.exponents();
        let (gt, lt) = id.weak_pair();
        let e = rule.mediated(&n);
        let tv = rule.watched(&n);
        out.push(if e < tv { lt } else { gt });
        state = apply_strong(id, state);
    }
    out
}

/// Rewrite a weak chain as a strong chain by replaying from `start`,
/// keeping each active step as its strong partner and dropping inactive
/// steps. The result may be shorter; it has the same outcome.
#[must_use]
pub fn weak_to_strong(chain: &[WeakId], start: ExponentEnsemble) -> Vec<StrongId> {
    let mut state = start;
    let mut out = Vec::new();
    for &id in chain {
        let (next, active) = apply_weak(id, state);
        if active {
            out.push(id.strong_partner());
        }
        state = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{exponents_of, realize, BalancedBase, BalancedCode};
    use crate::START;

    /// Hand-checked exponent semantics of the 24 weak arbitrages:
    /// (target, term, term, fires-on-greater), with each term `(coord, sign)`
    /// and the condition read as
    /// `sign_a*n[a] + sign_b*n[b] {>,<} n[target]` after normalizing the
    /// target sign away.
    const WEAK_NORMALIZED: [(usize, (usize, i64), (usize, i64), bool); 24] = [
        (0, (1, 1), (3, -1), true),
        (0, (2, 1), (4, -1), true),
        (1, (0, 1), (3, 1), true),
        (1, (2, 1), (5, -1), true),
        (2, (0, 1), (4, 1), true),
        (2, (1, 1), (5, 1), true),
        (0, (1, 1), (3, -1), false),
        (0, (2, 1), (4, -1), false),
        (3, (1, 1), (0, -1), true),
        (3, (4, 1), (5, -1), true),
        (4, (2, 1), (0, -1), true),
        (4, (3, 1), (5, 1), true),
        (1, (0, 1), (3, 1), false),
        (1, (2, 1), (5, -1), false),
        (3, (1, 1), (0, -1), false),
        (3, (4, 1), (5, -1), false),
        (5, (2, 1), (1, -1), true),
        (5, (4, 1), (3, -1), true),
        (2, (0, 1), (4, 1), false),
        (2, (1, 1), (5, 1), false),
        (4, (2, 1), (0, -1), false),
        (4, (3, 1), (5, 1), false),
        (5, (2, 1), (1, -1), false),
        (5, (4, 1), (3, -1), false),
    ];

    /// Hand-checked exponent reassignments of the 12 strong arbitrages.
    const STRONG_NORMALIZED: [(usize, (usize, i64), (usize, i64)); 12] = [
        (0, (1, 1), (3, -1)),
        (0, (2, 1), (4, -1)),
        (1, (0, 1), (3, 1)),
        (1, (2, 1), (5, -1)),
        (2, (0, 1), (4, 1)),
        (2, (1, 1), (5, 1)),
        (3, (1, 1), (0, -1)),
        (3, (4, 1), (5, -1)),
        (4, (2, 1), (0, -1)),
        (4, (3, 1), (5, 1)),
        (5, (2, 1), (1, -1)),
        (5, (4, 1), (3, -1)),
    ];

    fn probe_states() -> Vec<ExponentEnsemble> {
        let vals = [-2i64, -1, 0, 1, 2];
        let mut out = Vec::new();
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        for e in vals {
                            for f in vals {
                                out.push(ExponentEnsemble::new([a, b, c, d, e, f]));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn weak_rules_match_hand_normalized_table() {
        let states = probe_states();
        for id in WeakId::all() {
            let (t, (a, ca), (b, cb), gt) = WEAK_NORMALIZED[id.pos()];
            for s in &states {
                let n = s.exponents();
                let e = ca * n[a] + cb * n[b];
                let expect_active = if gt { e > n[t] } else { e < n[t] };
                let mut expect = n;
                if expect_active {
                    expect[t] = e;
                }
                let (got, active) = apply_weak(id, *s);
                assert_eq!(active, expect_active, "weak {} activity at {s}", id.get());
                assert_eq!(
                    got.exponents(),
                    expect,
                    "weak {} action at {s}",
                    id.get()
                );
            }
        }
    }

    #[test]
    fn strong_rules_match_hand_normalized_table() {
        let states = probe_states();
        for id in StrongId::all() {
            let (t, (a, ca), (b, cb)) = STRONG_NORMALIZED[id.pos()];
            for s in &states {
                let mut expect = s.exponents();
                expect[t] = ca * expect[a] + cb * expect[b];
                assert_eq!(
                    apply_strong(id, *s).exponents(),
                    expect,
                    "strong {} action at {s}",
                    id.get()
                );
            }
        }
    }

    #[test]
    fn weak_pairs_and_partners_match_expected_table() {
        let expected: [(u8, u8); 12] = [
            (1, 7),
            (2, 8),
            (3, 13),
            (4, 14),
            (5, 19),
            (6, 20),
            (9, 15),
            (10, 16),
            (11, 21),
            (12, 22),
            (17, 23),
            (18, 24),
        ];
        for (pos, &(gt, lt)) in expected.iter().enumerate() {
            let sid = StrongId::new(pos as u8 + 1).unwrap();
            let (g, l) = sid.weak_pair();
            assert_eq!((g.get(), l.get()), (gt, lt), "pair of strong {}", sid);
            assert_eq!(g.strong_partner(), sid);
            assert_eq!(l.strong_partner(), sid);
        }
    }

    #[test]
    fn balanced_states_are_fixed_by_every_arbitrage() {
        for i in -2..=2 {
            for j in -2..=2 {
                for k in -2..=2 {
                    let n = exponents_of(BalancedCode::new(i, j, k));
                    for id in WeakId::all() {
                        let (next, active) = apply_weak(id, n);
                        assert!(!active, "weak {} fired on balanced {n}", id.get());
                        assert_eq!(next, n);
                    }
                    for id in StrongId::all() {
                        assert_eq!(apply_strong(id, n), n, "strong {} moved balanced {n}", id.get());
                    }
                }
            }
        }
    }

    #[test]
    fn strong_arbitrages_are_idempotent() {
        for s in probe_states().iter().step_by(7) {
            for id in StrongId::all() {
                let once = apply_strong(id, *s);
                assert_eq!(apply_strong(id, once), once);
            }
        }
    }

    #[test]
    fn exactly_one_weak_pair_member_fires_unless_tied() {
        for s in probe_states().iter().step_by(3) {
            for sid in StrongId::all() {
                let (gt, lt) = sid.weak_pair();
                let (_, a) = apply_weak(gt, *s);
                let (_, b) = apply_weak(lt, *s);
                assert!(!(a && b), "both members fired at {s}");
                let strong_moves = apply_strong(sid, *s) != *s;
                assert_eq!(a || b, strong_moves, "pair coverage at {s}");
            }
        }
    }

    #[test]
    fn exponent_route_commutes_with_rate_route() {
        let base = BalancedBase::demo();
        let states = [
            ExponentEnsemble::new([1, 0, 0, 0, 0, 0]),
            ExponentEnsemble::new([2, -1, 0, 3, -2, 1]),
            ExponentEnsemble::new([-1, 4, 2, 0, -3, 5]),
            ExponentEnsemble::new([0, 0, 0, 0, 0, 0]),
        ];
        for s in states {
            for id in WeakId::all() {
                let (exp_next, exp_active) = apply_weak(id, s);
                let (rate_next, rate_active) = apply_weak_rates(id, &realize(&s, &base));
                assert_eq!(exp_active, rate_active, "weak {} activity at {s}", id.get());
                assert_eq!(realize(&exp_next, &base), rate_next, "weak {} at {s}", id.get());
            }
            for id in StrongId::all() {
                let exp_next = apply_strong(id, s);
                let rate_next = apply_strong_rates(id, &realize(&s, &base));
                assert_eq!(realize(&exp_next, &base), rate_next, "strong {} at {s}", id.get());
            }
        }
    }

    #[test]
    fn chain_application_is_left_to_right() {
        // s:7,10 from the start state: 7 sets n4 = n2-n1 = -1, then 10 sets
        // n5 = n4+n6 = -1.
        let chain = Chain::parse("s:7,10").unwrap();
        let (end, trace) = apply_chain(&chain, START);
        assert_eq!(end.exponents(), [1, 0, 0, -1, -1, 0]);
        assert!(trace.all_active());
        assert_eq!(trace.end(), end);
    }

    #[test]
    fn strong_to_weak_replays_to_the_same_states() {
        let chains: [&[u8]; 4] = [&[7, 10], &[5, 7, 12], &[3, 11, 5, 4, 8], &[4, 4, 6, 12]];
        for ids in chains {
            let strong: Vec<StrongId> = ids.iter().map(|&i| StrongId::new(i).unwrap()).collect();
            let weak = strong_to_weak(&strong, START);
            assert_eq!(weak.len(), strong.len());
            let (end_s, _) = apply_chain(&Chain::Strong(strong), START);
            let (end_w, _) = apply_chain(&Chain::Weak(weak), START);
            assert_eq!(end_s, end_w);
        }
    }

    #[test]
    fn strong_to_weak_picks_lower_id_at_equality() {
        // At the start state, strong 4 compares n3-n6 = 0 with n2 = 0: a tie,
        // so the rewrite must choose weak 4 (the lower pair member), which is
        // inactive there.
        let weak = strong_to_weak(&[StrongId::new(4).unwrap()], START);
        assert_eq!(weak[0].get(), 4);
        let (_, active) = apply_weak(weak[0], START);
        assert!(!active);
    }

    #[test]
    fn weak_to_strong_drops_inactive_steps() {
        // Weak 14, 6 are ties at the start state (dropped); weak 5 fires.
        let weak: Vec<WeakId> = [14u8, 6, 5]
            .iter()
            .map(|&i| WeakId::new(i).unwrap())
            .collect();
        let strong = weak_to_strong(&weak, START);
        assert_eq!(strong.len(), 1);
        assert_eq!(strong[0].get(), 5);
        let (end_w, _) = apply_chain(&Chain::Weak(weak), START);
        let (end_s, _) = apply_chain(&Chain::Strong(strong), START);
        assert_eq!(end_w, end_s);
    }

    #[test]
    fn chain_parse_and_display_round_trip() {
        for text in ["w:5,7,12", "s:10,3,6", "w:", "s:1"] {
            let chain = Chain::parse(text).unwrap();
            assert_eq!(chain.to_string(), text);
        }
        assert!(Chain::parse("x:1").is_err());
        assert!(Chain::parse("s:0").is_err());
        assert!(Chain::parse("s:13").is_err());
        assert!(Chain::parse("w:25").is_err());
        assert!(Chain::parse("7,10").is_err());
        assert!(Chain::parse("s:a").is_err());
    }

    #[test]
    fn empty_chain_is_identity() {
        let (end, trace) = apply_chain(&Chain::parse("w:").unwrap(), START);
        assert_eq!(end, START);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.end(), START);
    }

    #[test]
    fn names_follow_the_triple_tables() {
        assert_eq!(WeakId::new(1).unwrap().name(), "FAR");
        assert_eq!(WeakId::new(14).unwrap().name(), "RFM");
        assert_eq!(WeakId::new(24).unwrap().name(), "MRA");
        assert_eq!(StrongId::new(7).unwrap().name(), "ARF");
        assert_eq!(StrongId::new(12).unwrap().name(), "RMA");
    }
}
