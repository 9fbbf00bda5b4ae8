//! Average energy under a lower energy bound only.
//!
//! One-player games are decided completely: a winner never needs to push the
//! energy above `ceil(t) + N^2 + N^3` with `N = W * (|S| + 2)`, so the
//! problem reduces to the bounded solver at that cap. For two-player games
//! no complete algorithm is known; the incremental solver is sound (its WIN
//! answers carry winning strategies, its LOSE answers come only from
//! pre-checks that dominate the conjunction) but may return UNKNOWN.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::ae;
use crate::bounded;
use crate::game::{GameGraph, Player};
use crate::mp::{self, Credit};
use crate::outcome::{SolveOutcome, Status};
use crate::value::{ExtRational, Rational};
use crate::SolveError;

/// Expansions up to this many states run the exact bounded search directly;
/// beyond it the solver looks for early wins at doubled caps first.
const DIRECT_EXPANSION_LIMIT: usize = 60_000;

/// Configuration of the incremental two-player solver.
#[derive(Clone, Debug)]
pub struct AelConfig {
    pub threshold: Rational,
    /// Cap for the incremental loop; `None` uses [`AelConfig::DEFAULT_U_MAX`].
    pub u_max: Option<BigUint>,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, Default)]
pub enum Schedule {
    /// Doubled caps `1, 2, 4, ...`, then the cap itself.
    #[default]
    DoublingThenCap,
    /// Explicit list of caps to try, in order.
    Explicit(Vec<BigUint>),
}

impl AelConfig {
    pub const DEFAULT_U_MAX: u32 = 1024;

    pub fn new(threshold: Rational) -> AelConfig {
        AelConfig {
            threshold,
            u_max: None,
            schedule: Schedule::default(),
        }
    }

    pub fn with_u_max(mut self, u_max: BigUint) -> AelConfig {
        self.u_max = Some(u_max);
        self
    }

    fn caps(&self) -> Vec<BigUint> {
        let u_max = self
            .u_max
            .clone()
            .unwrap_or_else(|| BigUint::from(Self::DEFAULT_U_MAX));
        match &self.schedule {
            Schedule::Explicit(list) => list.clone(),
            Schedule::DoublingThenCap => {
                let mut caps = Vec::new();
                let mut u = BigUint::one();
                while u < u_max {
                    caps.push(u.clone());
                    u = &u * 2u32;
                }
                if u_max >= BigUint::one() {
                    caps.push(u_max);
                }
                caps
            }
        }
    }
}

/// Energy cap that suffices for one-player play: a winner can keep the
/// energy at or below `max(ceil(t), 0) + N^2 + N^3` where `N = W * (|S|+2)`.
pub fn ael_bound(g: &GameGraph, t: &Rational) -> BigUint {
    let w = g.max_abs_weight();
    let n_big = BigInt::from(g.num_states() + 2) * &w;
    let n = n_big.to_biguint().expect("nonnegative by construction");
    let ceil_t = t.ceil().numer().clone();
    let base = if ceil_t.is_negative() {
        BigUint::zero()
    } else {
        ceil_t.to_biguint().unwrap()
    };
    base + (&n * &n) + (&n * &n * &n)
}

/// Complete one-player decision of the lower-bounded average-energy
/// objective at threshold `t`, via the bounded solver at the sufficient cap.
///
/// With the sole owner `P2` the objective is a disjunction for the opponent,
/// so positional checks decide it: every play must respect the lower bound
/// and the worst average energy must still meet the threshold.
pub fn ael_decide_one_player(g: &GameGraph, t: &Rational) -> Result<SolveOutcome, SolveError> {
    match g.sole_owner() {
        Some(Player::P1) => {}
        Some(Player::P2) => return ael_universal_p2(g, t),
        None => return Err(SolveError::TwoPlayerInput),
    }

    // The generic cap can be clamped to the largest energy any play can
    // reach: beyond it the upper bound never binds, so the bounded and
    // unbounded objectives coincide.
    let mut bound = ael_bound(g, t);
    if let Some(peak) = mp::max_reachable_energy(g) {
        let peak = peak.to_biguint().expect("peaks are nonnegative");
        if peak < bound {
            bound = peak;
        }
    }
    let exp_states = (BigInt::from(bound.clone()) + 1) * BigInt::from(g.num_states()) + 1;
    if exp_states <= BigInt::from(DIRECT_EXPANSION_LIMIT) {
        let mut out = bounded::aelu_decide_one_player(g, &bound, t)?;
        out.diagnostics.route = "ael-one-player-bounded".to_string();
        out.diagnostics.winning_u = matches!(out.status, Status::Win).then(|| bound.clone());
        out.diagnostics.largest_u_tried = Some(bound);
        return Ok(out);
    }

    // Large cap: look for early wins first, then decide at the full cap.
    let mut u = BigUint::one();
    while (BigInt::from(u.clone()) + 1) * BigInt::from(g.num_states()) + 1
        <= BigInt::from(DIRECT_EXPANSION_LIMIT)
        && u < bound
    {
        let out = bounded::aelu_decide_one_player(g, &u, t)?;
        if out.status == Status::Win {
            let mut out = out;
            out.value = None; // optimal only w.r.t. the tried cap
            out.diagnostics.route = "ael-one-player-incremental".to_string();
            out.diagnostics.winning_u = Some(u.clone());
            out.diagnostics.largest_u_tried = Some(u);
            return Ok(out);
        }
        u = &u * 2u32;
    }
    let mut out = bounded::aelu_decide_one_player(g, &bound, t)?;
    out.value = None;
    out.diagnostics.route = "ael-one-player-bounded".to_string();
    out.diagnostics.largest_u_tried = Some(bound);
    Ok(out)
}

fn ael_universal_p2(g: &GameGraph, t: &Rational) -> Result<SolveOutcome, SolveError> {
    let route = "ael-one-player-disjunction";
    let credits = mp::minimal_credit(g);
    if credits[g.init().0] != Credit::Finite(BigUint::zero()) {
        return Ok(SolveOutcome::new(Status::Lose, route));
    }
    let worst = ae::ae_solve_one_player_max(g)?;
    let value = worst.value.clone().expect("max solver reports a value");
    let status = if value <= ExtRational::Fin(t.clone()) {
        Status::Win
    } else {
        Status::Lose
    };
    let mut out = SolveOutcome::new(status, route).with_value(value);
    out.witness = worst.witness;
    Ok(out)
}

/// Sound-but-incomplete incremental solver for two-player games.
///
/// LOSE can only come from the pre-checks (the unconstrained average-energy
/// game, and the zero-credit energy game, both dominated by the
/// conjunction). A WIN carries the winning strategy of the smallest cap the
/// schedule can certify. Otherwise UNKNOWN, with the guarantee that no
/// strategy wins while keeping the energy at or below the largest cap tried.
pub fn ael_incremental_two_player(
    g: &GameGraph,
    cfg: &AelConfig,
) -> Result<SolveOutcome, SolveError> {
    let t = &cfg.threshold;

    let unconstrained = ae::ae_solve_two_player(g, t)?;
    if unconstrained.status == Status::Lose {
        let mut out = SolveOutcome::new(Status::Lose, "ael-pre-check-ae");
        out.value = unconstrained.value;
        out.witness = unconstrained.witness;
        out.diagnostics
            .notes
            .push("opponent wins even without the lower energy bound".to_string());
        return Ok(out);
    }

    let credits = mp::minimal_credit(g);
    if credits[g.init().0] != Credit::Finite(BigUint::zero()) {
        let mut out = SolveOutcome::new(Status::Lose, "ael-pre-check-egl");
        out.diagnostics
            .notes
            .push("opponent wins the zero-credit energy game".to_string());
        return Ok(out);
    }

    let mut tried: Option<BigUint> = None;
    let mut last_losing = BigUint::zero();
    for u in cfg.caps() {
        let out = bounded::aelu_decide_two_player(g, &u, t)?;
        if out.status == Status::Win {
            // refine down to the smallest winning cap above the last loss
            let mut lo = last_losing.clone();
            let mut hi = u.clone();
            let mut witness = out.witness;
            while &hi - &lo > BigUint::one() {
                let mid = (&lo + &hi) / 2u32;
                let probe = bounded::aelu_decide_two_player(g, &mid, t)?;
                if probe.status == Status::Win {
                    hi = mid;
                    witness = probe.witness;
                } else {
                    lo = mid;
                }
            }
            let mut res = SolveOutcome::new(Status::Win, "ael-incremental");
            res.witness = witness;
            res.diagnostics.winning_u = Some(hi.clone());
            res.diagnostics.largest_u_tried = Some(tried.map_or(u.clone(), |t| t.max(u)));
            return Ok(res);
        }
        last_losing = u.clone();
        tried = Some(tried.map_or(u.clone(), |t| t.max(u)));
    }

    let mut res = SolveOutcome::new(Status::Unknown, "ael-incremental");
    res.diagnostics.largest_u_tried = tried.clone();
    if let Some(u) = tried {
        res.diagnostics.notes.push(format!(
            "no strategy wins while keeping the energy at most {u}"
        ));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{check_objective, Objective};
    use crate::reduce::{self, MemoryFamily, SubsetSumInstance};
    use crate::value::rat;

    #[test]
    fn bound_formula() {
        let g = GameGraph::of(
            &[("a", Player::P1), ("b", Player::P1), ("c", Player::P1)],
            &[
                ("a", "a", 2),
                ("a", "c", 1),
                ("c", "a", 0),
                ("a", "b", -3),
                ("b", "a", 0),
            ],
            "a",
        );
        // W = 3, |S| = 3: N = 15, bound = 1 + 225 + 3375
        assert_eq!(ael_bound(&g, &rat(1, 1)), BigUint::from(3601u32));

        let weightless = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(ael_bound(&weightless, &rat(0, 1)), BigUint::zero());

        // negative thresholds clamp the additive term at zero
        assert_eq!(ael_bound(&weightless, &rat(-7, 2)), BigUint::zero());
    }

    #[test]
    fn subset_sum_instances_decide_exactly() {
        let cases: &[(&[u32], u32, bool)] = &[
            (&[1, 3], 4, true),
            (&[1, 3], 5, false),
            (&[2], 1, false),
            (&[5], 5, true),
            (&[1, 2, 3], 4, true),
        ];
        for (values, target, expect) in cases {
            let inst = SubsetSumInstance::new(
                values.iter().map(|&v| BigUint::from(v)).collect(),
                BigUint::from(*target),
            )
            .unwrap();
            let (g, t) = reduce::subset_sum_to_ael(&inst);
            let out = ael_decide_one_player(&g, &t).unwrap();
            let won = out.status == Status::Win;
            assert_eq!(won, *expect, "values {values:?} target {target}");
            if won {
                let lasso = out.witness_lasso().expect("wins carry a witness");
                assert!(check_objective(
                    &g,
                    lasso,
                    &Objective::Ael { threshold: t.clone() }
                ));
            }
        }
    }

    #[test]
    fn trivial_zero_loop_wins_at_zero() {
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        let out = ael_decide_one_player(&g, &rat(0, 1)).unwrap();
        assert_eq!(out.status, Status::Win);
        assert_eq!(out.value, Some(ExtRational::from(0)));
    }

    #[test]
    fn incremental_on_the_pump_arena() {
        let g = GameGraph::of(
            &[("a", Player::P1), ("b", Player::P1), ("c", Player::P1)],
            &[
                ("a", "a", 2),
                ("a", "c", 1),
                ("c", "a", 0),
                ("a", "b", -3),
                ("b", "a", 0),
            ],
            "a",
        );
        let cfg = AelConfig::new(rat(1, 1)).with_u_max(BigUint::from(8u32));
        let out = ael_incremental_two_player(&g, &cfg).unwrap();
        assert_eq!(out.status, Status::Win);
        assert_eq!(out.diagnostics.winning_u, Some(BigUint::from(3u32)));
    }

    #[test]
    fn incremental_reports_unknown_on_the_switch_arena() {
        let g = reduce::memory_family(MemoryFamily::Fig8, None).unwrap();
        let cfg = AelConfig::new(rat(1, 1)).with_u_max(BigUint::from(5u32));
        let out = ael_incremental_two_player(&g, &cfg).unwrap();
        assert_eq!(out.status, Status::Unknown);
        assert_eq!(out.diagnostics.largest_u_tried, Some(BigUint::from(5u32)));
    }

    #[test]
    fn pre_check_dominance_fires() {
        // unconstrained value 2 > 1: the conjunction cannot be easier
        let g = GameGraph::of(&[("a", Player::P2)], &[("a", "a", 2)], "a");
        let cfg = AelConfig::new(rat(1, 1)).with_u_max(BigUint::from(4u32));
        let out = ael_incremental_two_player(&g, &cfg).unwrap();
        assert_eq!(out.status, Status::Lose);
        assert_eq!(out.diagnostics.route, "ael-pre-check-ae");

        // P2 can break the lower bound from credit zero
        let g = GameGraph::of(
            &[("a", Player::P2), ("b", Player::P1)],
            &[("a", "b", -1), ("a", "a", 0), ("b", "b", 0)],
            "a",
        );
        let out = ael_incremental_two_player(&g, &AelConfig::new(rat(5, 1))).unwrap();
        assert_eq!(out.status, Status::Lose);
        assert_eq!(out.diagnostics.route, "ael-pre-check-egl");
    }
}
