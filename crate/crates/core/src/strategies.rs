//! Deterministic answer strategies for the non-communicating players and the
//! analytic map from strategy mixtures to coincidence facts.
//!
//! Both players agree on one strategy per run: a fixed answer for each of the
//! three possible questions 0°, 30°, 60°. Because they always answer the same
//! question identically, `F1 = 1` for every mixture. The eight strategies
//! collapse into four classes (a strategy and its complement produce the
//! same agreement pattern), and only the class weights `(α, β, γ, δ)` are
//! observable in the long run.

use crate::error::{Error, Result};
use crate::quantum::FactsTriple;
use crate::Response;

use Response::{Absorb as A, Pass as P};

/// The three question angles the answer triples are indexed by.
pub const QUESTION_ANGLES_DEG: [f64; 3] = [0.0, 30.0, 60.0];

/// Components may dip this far below zero before a mixture counts as
/// infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// One pre-agreed answer rule: the responses to the questions 0°, 30°, 60°.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub answers: [Response; 3],
}

impl DeterministicStrategy {
    pub const fn new(answers: [Response; 3]) -> Self {
        Self { answers }
    }

    /// All eight strategies, ordered so that consecutive pairs form the four
    /// equivalence classes.
    pub const ALL: [DeterministicStrategy; 8] = [
        DeterministicStrategy::new([P, P, P]),
        DeterministicStrategy::new([A, A, A]),
        DeterministicStrategy::new([A, P, P]),
        DeterministicStrategy::new([P, A, A]),
        DeterministicStrategy::new([P, A, P]),
        DeterministicStrategy::new([A, P, A]),
        DeterministicStrategy::new([P, P, A]),
        DeterministicStrategy::new([A, A, P]),
    ];

    /// The class partner: every answer flipped.
    pub fn complement(self) -> Self {
        Self::new([self.answers[0].flip(), self.answers[1].flip(), self.answers[2].flip()])
    }

    /// Answer by question position (0 ↦ first angle, ...).
    pub fn answer_at(self, position: usize) -> Response {
        self.answers[position]
    }

    /// Answer to a question angle; the angle must be one of
    /// [`QUESTION_ANGLES_DEG`].
    pub fn answer(self, question_deg: f64) -> Result<Response> {
        let pos = QUESTION_ANGLES_DEG
            .iter()
            .position(|&a| (a - question_deg).abs() <= 1e-9)
            .ok_or(Error::InvalidQuestion(question_deg))?;
        Ok(self.answer_at(pos))
    }
}

/// The four coincidence-equivalence classes of strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyClass {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl StrategyClass {
    pub const ALL: [StrategyClass; 4] =
        [StrategyClass::Alpha, StrategyClass::Beta, StrategyClass::Gamma, StrategyClass::Delta];

    pub fn label(self) -> &'static str {
        match self {
            StrategyClass::Alpha => "alpha",
            StrategyClass::Beta => "beta",
            StrategyClass::Gamma => "gamma",
            StrategyClass::Delta => "delta",
        }
    }

    /// The two strategies of this class.
    pub fn members(self) -> [DeterministicStrategy; 2] {
        let base = 2 * self as usize;
        [DeterministicStrategy::ALL[base], DeterministicStrategy::ALL[base + 1]]
    }
}

/// The class a strategy belongs to.
pub fn class_of(strategy: DeterministicStrategy) -> StrategyClass {
    for class in StrategyClass::ALL {
        if class.members().contains(&strategy) {
            return class;
        }
    }
    unreachable!("every answer triple is one of the eight strategies")
}

/// Probability weights over the four strategy classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixturePoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MixturePoint {
    /// Validates non-negativity (within a floating-point guard, clamped) and
    /// unit sum within 1e-12.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let raw = [alpha, beta, gamma, delta];
        for w in raw {
            if !w.is_finite() || w < -FEASIBILITY_TOL {
                return Err(Error::InvalidInput(format!(
                    "mixture component {w} is negative"
                )));
            }
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "mixture components sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            alpha: alpha.max(0.0),
            beta: beta.max(0.0),
            gamma: gamma.max(0.0),
            delta: delta.max(0.0),
        })
    }

    pub fn weights(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn weight_of(self, class: StrategyClass) -> f64 {
        self.weights()[class as usize]
    }
}

/// Probabilities that the two answers differ for the question pairs
/// (0°, 30°), (30°, 60°) and (0°, 60°): `(β+γ, γ+δ, β+δ)`.
pub fn disagreements(mixture: &MixturePoint) -> (f64, f64, f64) {
    (
        mixture.beta + mixture.gamma,
        mixture.gamma + mixture.delta,
        mixture.beta + mixture.delta,
    )
}

/// The exact long-run facts of a strategy mixture under uniformly random
/// questions: `F1 = 1` always; `F2` averages the two 30°-offset disagreement
/// rates; `F3` complements the 60°-offset disagreement.
pub fn facts_of_mixture(mixture: &MixturePoint) -> FactsTriple {
    let (d01, d12, d02) = disagreements(mixture);
    FactsTriple::new(1.0, 1.0 - 0.5 * (d01 + d12), 1.0 - d02)
        .expect("mixture facts are probabilities")
}

/// Solution of the disagreement system for target facts, with possibly
/// negative components. `feasible` is the verdict of the sign check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityResult {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub feasible: bool,
}

impl FeasibilityResult {
    pub fn components(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    /// The solution as a valid mixture, when feasible.
    pub fn mixture(self) -> Option<MixturePoint> {
        if self.feasible {
            Some(
                MixturePoint::new(self.alpha, self.beta, self.gamma, self.delta)
                    .expect("feasible solution is a mixture"),
            )
        } else {
            None
        }
    }
}

/// Solves the symmetric disagreement system for a facts target `(f2, f3)`:
/// `β+γ = 1−F2`, `γ+δ = 1−F2`, `β+δ = 1−F3`. A negative component means no
/// strategy mixture reproduces the target.
pub fn solve_mixture_for_facts(f2: f64, f3: f64) -> Result<FeasibilityResult> {
    for (name, v) in [("f2", f2), ("f3", f3)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidInput(format!("{name} = {v} is not in [0, 1]")));
        }
    }
    let gamma = (2.0 * (1.0 - f2) - (1.0 - f3)) / 2.0;
    let beta = (1.0 - f3) / 2.0;
    let delta = beta;
    let alpha = 1.0 - beta - gamma - delta;
    let components = [alpha, beta, gamma, delta];
    let sum: f64 = components.iter().sum();
    let feasible =
        components.iter().all(|&w| w >= -FEASIBILITY_TOL) && (sum - 1.0).abs() <= 1e-10;
    Ok(FeasibilityResult { alpha, beta, gamma, delta, feasible })
}

/// Outcome of the classical-region test `|2 F2 − 1| ≤ F3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub satisfied: bool,
    /// `F3 − |2 F2 − 1|`; negative when the inequality is violated.
    pub margin: f64,
}

/// The inequality every strategy mixture obeys in the `(F2, F3)` plane.
pub fn classical_inequality(f2: f64, f3: f64) -> InequalityCheck {
    let margin = f3 - (2.0 * f2 - 1.0).abs();
    InequalityCheck { satisfied: margin >= -FEASIBILITY_TOL, margin }
}

/// An affine function `F2 = slope · F3 + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLine {
    pub slope: f64,
    pub intercept: f64,
}

impl BoundaryLine {
    pub fn eval(self, f3: f64) -> f64 {
        self.slope * f3 + self.intercept
    }
}

/// The two straight lines bounding the classical region:
/// upper `F2 = (F3 + 1)/2`, lower `F2 = (1 − F3)/2`.
pub fn boundary_lines() -> (BoundaryLine, BoundaryLine) {
    (
        BoundaryLine { slope: 0.5, intercept: 0.5 },
        BoundaryLine { slope: -0.5, intercept: 0.5 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact facts by brute force: enumerate every class, both members and
    /// all nine ordered question pairs, then average coincidences per offset
    /// class. Independent of `facts_of_mixture`'s closed form.
    fn facts_by_enumeration(mixture: &MixturePoint) -> [f64; 3] {
        let mut sums = [0.0f64; 3];
        let mut counts = [0u32; 3];
        for (qa, &angle_a) in QUESTION_ANGLES_DEG.iter().enumerate() {
            for (qb, &angle_b) in QUESTION_ANGLES_DEG.iter().enumerate() {
                let class_idx = match (angle_a - angle_b).abs() as i64 {
                    0 => 0,
                    30 => 1,
                    60 => 2,
                    _ => unreachable!(),
                };
                let mut agree = 0.0;
                for class in StrategyClass::ALL {
                    for member in class.members() {
                        if member.answer_at(qa) == member.answer_at(qb) {
                            agree += 0.5 * mixture.weight_of(class);
                        }
                    }
                }
                sums[class_idx] += agree;
                counts[class_idx] += 1;
            }
        }
        [sums[0] / counts[0] as f64, sums[1] / counts[1] as f64, sums[2] / counts[2] as f64]
    }

    fn quarter_grid() -> Vec<MixturePoint> {
        let mut points = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4 - a {
                for c in 0..=4 - a - b {
                    let d = 4 - a - b - c;
                    points.push(
                        MixturePoint::new(
                            a as f64 / 4.0,
                            b as f64 / 4.0,
                            c as f64 / 4.0,
                            d as f64 / 4.0,
                        )
                        .unwrap(),
                    );
                }
            }
        }
        points
    }

    #[test]
    fn eight_distinct_strategies_in_four_classes() {
        let mut seen = std::collections::HashSet::new();
        for s in DeterministicStrategy::ALL {
            assert!(seen.insert(s.answers));
        }
        assert_eq!(seen.len(), 8);
        for class in StrategyClass::ALL {
            let [first, second] = class.members();
            assert_eq!(first.complement(), second);
            assert_eq!(class_of(first), class);
            assert_eq!(class_of(second), class);
        }
    }

    #[test]
    fn answers_match_strategy_table() {
        assert_eq!(DeterministicStrategy::new([P, P, P]).answer(30.0).unwrap(), P);
        assert_eq!(DeterministicStrategy::new([A, P, P]).answer(0.0).unwrap(), A);
        assert_eq!(DeterministicStrategy::new([P, A, P]).answer(60.0).unwrap(), P);
        assert!(matches!(
            DeterministicStrategy::new([P, P, P]).answer(45.0),
            Err(crate::Error::InvalidQuestion(_))
        ));
    }

    #[test]
    fn disagreement_probabilities() {
        let pure_alpha = MixturePoint::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(disagreements(&pure_alpha), (0.0, 0.0, 0.0));
        let pure_beta = MixturePoint::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(disagreements(&pure_beta), (1.0, 0.0, 1.0));
    }

    #[test]
    fn mixture_facts_examples() {
        let cases = [
            ((1.0, 0.0, 0.0, 0.0), [1.0, 1.0, 1.0]),
            ((0.0, 0.0, 1.0, 0.0), [1.0, 0.0, 1.0]),
            ((0.0, 0.0, 0.0, 1.0), [1.0, 0.5, 0.0]),
        ];
        for ((a, b, c, d), want) in cases {
            let m = MixturePoint::new(a, b, c, d).unwrap();
            assert_eq!(facts_of_mixture(&m).as_array(), want);
        }
    }

    #[test]
    fn closed_form_matches_enumeration_on_quarter_grid() {
        for m in quarter_grid() {
            let closed = facts_of_mixture(&m).as_array();
            let oracle = facts_by_enumeration(&m);
            for k in 0..3 {
                assert!(
                    (closed[k] - oracle[k]).abs() <= 1e-12,
                    "facts mismatch at {m:?}: {closed:?} vs {oracle:?}"
                );
            }
        }
    }

    #[test]
    fn solver_reproduces_reference_values() {
        let r = solve_mixture_for_facts(0.75, 0.25).unwrap();
        assert_eq!(r.gamma, -0.125);
        assert!(!r.feasible);
        assert!(r.mixture().is_none());

        let r = solve_mixture_for_facts(1.0, 0.75).unwrap();
        assert_eq!(r.gamma, -0.125);
        assert!(!r.feasible);

        let r = solve_mixture_for_facts(0.5, 0.5).unwrap();
        assert_eq!(r.components(), [0.25, 0.25, 0.25, 0.25]);
        assert!(r.feasible);
    }

    #[test]
    fn solver_rejects_out_of_range_targets() {
        assert!(solve_mixture_for_facts(1.5, 0.5).is_err());
        assert!(solve_mixture_for_facts(0.5, -0.1).is_err());
        assert!(solve_mixture_for_facts(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn inequality_examples() {
        let violated = classical_inequality(0.75, 0.25);
        assert!(!violated.satisfied);
        assert_eq!(violated.margin, -0.25);

        for f3 in [0.0, 0.3, 1.0] {
            assert!(classical_inequality(0.5, f3).satisfied);
        }

        let boundary = classical_inequality(0.375, 0.25);
        assert!(boundary.satisfied);
        assert_eq!(boundary.margin, 0.0);
    }

    #[test]
    fn boundary_line_values() {
        let (upper, lower) = boundary_lines();
        assert_eq!(upper.eval(1.0), 1.0);
        assert_eq!(upper.eval(0.25), 0.625);
        assert_eq!(lower.eval(0.25), 0.375);
        assert_eq!(lower.eval(1.0), 0.0);
    }

    #[test]
    fn boundary_planes_map_onto_boundary_lines() {
        let (upper, lower) = boundary_lines();
        for m in quarter_grid() {
            let f = facts_of_mixture(&m);
            if m.gamma == 0.0 {
                assert!((f.f2 - upper.eval(f.f3)).abs() <= 1e-12);
            }
            if m.alpha == 0.0 {
                assert!((f.f2 - lower.eval(f.f3)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mixture_validation() {
        assert!(MixturePoint::new(0.5, 0.5, 0.1, 0.0).is_err());
        assert!(MixturePoint::new(-0.1, 0.5, 0.3, 0.3).is_err());
        assert!(MixturePoint::new(0.25, 0.25, 0.25, 0.25).is_ok());
        // Tiny negative values are a floating-point guard, clamped to zero.
        let m = MixturePoint::new(-1e-13, 0.5, 0.5, 1e-13).unwrap();
        assert_eq!(m.alpha, 0.0);
    }

    proptest! {
        #[test]
        fn complementing_preserves_agreement_pattern(idx in 0usize..8) {
            let s = DeterministicStrategy::ALL[idx];
            let t = s.complement();
            for qa in 0..3 {
                for qb in 0..3 {
                    prop_assert_eq!(
                        s.answer_at(qa) == s.answer_at(qb),
                        t.answer_at(qa) == t.answer_at(qb)
                    );
                }
            }
        }

        #[test]
        fn every_mixture_satisfies_the_inequality(
            raw in prop::array::uniform4(0.0..1.0f64).prop_filter("mass", |r| r.iter().sum::<f64>() > 1e-3)
        ) {
            let total: f64 = raw.iter().sum();
            let m = MixturePoint::new(
                raw[0] / total,
                raw[1] / total,
                raw[2] / total,
                raw[3] / total,
            ).unwrap();
            let f = facts_of_mixture(&m);
            prop_assert!(classical_inequality(f.f2, f.f3).satisfied);
        }

        #[test]
        fn feasible_solutions_round_trip(f3 in 0.0..1.0f64, spread in 0.0..1.0f64) {
            // Choose f2 inside the classical band at this f3 so the solver
            // must succeed, then map back.
            let (upper, lower) = boundary_lines();
            let f2 = lower.eval(f3) + spread * (upper.eval(f3) - lower.eval(f3));
            let solved = solve_mixture_for_facts(f2, f3).unwrap();
            prop_assert!(solved.feasible, "in-band target must be feasible");
            let back = facts_of_mixture(&solved.mixture().unwrap());
            prop_assert!((back.f1 - 1.0).abs() <= 1e-12);
            prop_assert!((back.f2 - f2).abs() <= 1e-12);
            prop_assert!((back.f3 - f3).abs() <= 1e-12);
        }
    }
}
