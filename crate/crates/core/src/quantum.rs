//! Born-rule probabilities for two-photon polarization states.
//!
//! States live on the 4-dimensional space spanned by (HH, HV, VH, VV). Each
//! photon is measured by a polarization analyzer; the photon either passes or
//! is absorbed. A *coincidence* is both photons passing or both being
//! absorbed. The facts triple `(F1, F2, F3)` collects the average coincidence
//! probability at analyzer offsets of 0°, 30° and 60° under the default
//! three-angle protocol.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat4, Vec4, C};
use crate::Response;
use std::fmt;

/// Tolerance for state normalization and Hermiticity checks.
const STATE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of a density matrix.
const EIGEN_TOL: f64 = -1e-10;
/// Probabilities may stray this far outside `[0, 1]` before the library
/// declares an internal inconsistency.
const PROB_GUARD: f64 = 1e-10;
/// Two analyzer offsets closer than this are the same offset class.
const OFFSET_TOL: f64 = 1e-9;

fn check_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be finite, got {value}")))
    }
}

/// Clamp a computed probability onto `[0, 1]`, rejecting anything that lies
/// outside by more than the floating-point guard.
pub(crate) fn clamp_probability(value: f64, what: &str) -> Result<f64> {
    if !value.is_finite() || value < -PROB_GUARD || value > 1.0 + PROB_GUARD {
        return Err(Error::Internal(format!("{what} = {value} is not a probability")));
    }
    Ok(value.clamp(0.0, 1.0))
}

fn cos_deg(deg: f64) -> f64 {
    deg.rem_euclid(360.0).to_radians().cos()
}

fn sin_deg(deg: f64) -> f64 {
    deg.rem_euclid(360.0).to_radians().sin()
}

/// One polarization analyzer orientation: polar angle `theta` and ellipticity
/// phase `phase`, both in degrees. Linear polarization has zero phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSetting {
    pub theta_deg: f64,
    pub phase_deg: f64,
}

impl AnalyzerSetting {
    pub fn new(theta_deg: f64, phase_deg: f64) -> Self {
        Self { theta_deg, phase_deg }
    }

    /// A linear analyzer at `theta_deg`.
    pub fn linear(theta_deg: f64) -> Self {
        Self::new(theta_deg, 0.0)
    }
}

/// Single-photon analyzer eigenstate in the (H, V) basis:
/// `cos θ |H⟩ + sin θ e^{iφ} |V⟩`, or the orthogonal companion
/// `sin θ |H⟩ − cos θ e^{iφ} |V⟩` when `orthogonal` is set. The companion
/// carries the same V phase so that the two states stay orthonormal for
/// every ellipticity, not just linear polarization.
pub fn analyzer_state(setting: AnalyzerSetting, orthogonal: bool) -> Result<[C; 2]> {
    check_finite(setting.theta_deg, "analyzer angle")?;
    check_finite(setting.phase_deg, "analyzer phase")?;
    let cos = cos_deg(setting.theta_deg);
    let sin = sin_deg(setting.theta_deg);
    let phase = C::cis(setting.phase_deg.rem_euclid(360.0).to_radians());
    Ok(if orthogonal {
        [C::new(sin, 0.0), -phase * cos]
    } else {
        [C::new(cos, 0.0), phase * sin]
    })
}

/// Joint outcome of one run: what happened on the signal side and on the
/// idler side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomePair {
    pub signal: Response,
    pub idler: Response,
}

impl OutcomePair {
    pub const fn new(signal: Response, idler: Response) -> Self {
        Self { signal, idler }
    }

    pub const BOTH_PASS: OutcomePair = OutcomePair::new(Response::Pass, Response::Pass);
    pub const BOTH_ABSORB: OutcomePair = OutcomePair::new(Response::Absorb, Response::Absorb);

    /// The four joint outcomes in a fixed order (PP, PA, AP, AA).
    pub const ALL: [OutcomePair; 4] = [
        OutcomePair::BOTH_PASS,
        OutcomePair::new(Response::Pass, Response::Absorb),
        OutcomePair::new(Response::Absorb, Response::Pass),
        OutcomePair::BOTH_ABSORB,
    ];

    /// Both photons pass or both are absorbed.
    pub fn is_coincidence(self) -> bool {
        self.signal == self.idler
    }
}

/// A two-photon polarization state: either a pure state vector or a density
/// matrix, both in the (HH, HV, VH, VV) ordering.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoPhotonState {
    Pure(Vec4),
    Mixed(Mat4),
}

impl TwoPhotonState {
    /// A pure state from four complex amplitudes; must be normalized.
    pub fn pure(amplitudes: Vec4) -> Result<Self> {
        let norm = linalg::norm_sq(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "pure state norm² = {norm}, expected 1 within {STATE_TOL}"
            )));
        }
        Ok(Self::Pure(amplitudes))
    }

    /// A mixed state from a density matrix; must be Hermitian, unit trace and
    /// positive semidefinite.
    pub fn mixed(rho: Mat4) -> Result<Self> {
        let herm = linalg::hermitian_defect(&rho);
        if !herm.is_finite() || herm > STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix is not Hermitian (defect {herm})"
            )));
        }
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix trace = {tr}, expected 1"
            )));
        }
        let lambda_min = linalg::hermitian_eigenvalues(&rho)[0];
        if lambda_min < EIGEN_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {lambda_min}"
            )));
        }
        Ok(Self::Mixed(rho))
    }
}

/// The six reference states: the four Bell states plus the maximally mixed
/// state and the equal H/V classical mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    RhoMax,
    Rho,
}

impl NamedState {
    pub const ALL: [NamedState; 6] = [
        NamedState::PhiPlus,
        NamedState::PhiMinus,
        NamedState::PsiPlus,
        NamedState::PsiMinus,
        NamedState::RhoMax,
        NamedState::Rho,
    ];

    /// Command-line tag.
    pub fn tag(self) -> &'static str {
        match self {
            NamedState::PhiPlus => "phi+",
            NamedState::PhiMinus => "phi-",
            NamedState::PsiPlus => "psi+",
            NamedState::PsiMinus => "psi-",
            NamedState::RhoMax => "rhomax",
            NamedState::Rho => "rho",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag.to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" => Some(NamedState::PhiPlus),
            "phi-" | "phiminus" => Some(NamedState::PhiMinus),
            "psi+" | "psiplus" => Some(NamedState::PsiPlus),
            "psi-" | "psiminus" => Some(NamedState::PsiMinus),
            "rhomax" | "rho_max" => Some(NamedState::RhoMax),
            "rho" => Some(NamedState::Rho),
            _ => None,
        }
    }

    /// The concrete state vector or density matrix.
    pub fn state(self) -> TwoPhotonState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = C::new(h, 0.0);
        let z = linalg::ZERO;
        match self {
            NamedState::PhiPlus => TwoPhotonState::Pure([a, z, z, a]),
            NamedState::PhiMinus => TwoPhotonState::Pure([a, z, z, -a]),
            NamedState::PsiPlus => TwoPhotonState::Pure([z, a, a, z]),
            NamedState::PsiMinus => TwoPhotonState::Pure([z, a, -a, z]),
            NamedState::RhoMax => {
                let mut rho = linalg::zeros();
                for (i, row) in rho.iter_mut().enumerate() {
                    row[i] = C::new(0.25, 0.0);
                }
                TwoPhotonState::Mixed(rho)
            }
            NamedState::Rho => {
                let mut rho = linalg::zeros();
                rho[0][0] = C::new(0.5, 0.0);
                rho[3][3] = C::new(0.5, 0.0);
                TwoPhotonState::Mixed(rho)
            }
        }
    }

    /// Human-readable closed form of the coincidence probability, as a
    /// function of the two linear analyzer angles.
    pub fn coincidence_formula(self) -> &'static str {
        match self {
            NamedState::PhiPlus => "cos^2(theta_s - theta_i)",
            NamedState::PhiMinus => "cos^2(theta_s + theta_i)",
            NamedState::PsiPlus => "sin^2(theta_s + theta_i)",
            NamedState::PsiMinus => "sin^2(theta_s - theta_i)",
            NamedState::RhoMax => "1/2",
            NamedState::Rho => "(cos(2 theta_s) cos(2 theta_i) + 1)/2",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The three coincidence facts; each component is a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactsTriple {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl FactsTriple {
    /// Build a facts triple, clamping each component onto `[0, 1]` within the
    /// floating-point guard.
    pub fn new(f1: f64, f2: f64, f3: f64) -> Result<Self> {
        Ok(Self {
            f1: clamp_probability(f1, "F1")?,
            f2: clamp_probability(f2, "F2")?,
            f3: clamp_probability(f3, "F3")?,
        })
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.f1, self.f2, self.f3]
    }
}

/// One offset class of a protocol: every ordered pair of analyzer settings
/// whose absolute angle difference equals `offset_deg`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetClass {
    pub offset_deg: f64,
    /// Ordered `(signal, idler)` index pairs into the protocol's angle list.
    pub pairs: Vec<(usize, usize)>,
}

/// A measurement protocol: the list of analyzer angles both sides draw from,
/// with the derived offset classes. The default protocol uses 0°, 30°, 60°,
/// whose nine ordered pairs split into offset classes of sizes 3, 4 and 2.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementProtocol {
    angles: Vec<f64>,
    classes: Vec<OffsetClass>,
    class_of_pair: Vec<Vec<usize>>,
}

impl MeasurementProtocol {
    pub fn new(angles: impl Into<Vec<f64>>) -> Result<Self> {
        let angles = angles.into();
        if angles.len() < 2 {
            return Err(Error::InvalidProtocol(
                "at least two analyzer angles are required".into(),
            ));
        }
        for &a in &angles {
            check_finite(a, "protocol angle")?;
        }
        for (i, &a) in angles.iter().enumerate() {
            for &b in &angles[i + 1..] {
                if (a - b).abs() <= OFFSET_TOL {
                    return Err(Error::InvalidProtocol(format!(
                        "protocol angles must be distinct, found {a}° twice"
                    )));
                }
            }
        }

        let n = angles.len();
        let mut classes: Vec<OffsetClass> = Vec::new();
        let mut class_of_pair = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let offset = (angles[i] - angles[j]).abs();
                let idx = classes
                    .iter()
                    .position(|c| (c.offset_deg - offset).abs() <= OFFSET_TOL)
                    .unwrap_or_else(|| {
                        classes.push(OffsetClass { offset_deg: offset, pairs: Vec::new() });
                        classes.len() - 1
                    });
                classes[idx].pairs.push((i, j));
                class_of_pair[i][j] = idx;
            }
        }
        classes.sort_by(|a, b| a.offset_deg.partial_cmp(&b.offset_deg).unwrap());
        // Re-derive the lookup table after sorting.
        for (k, class) in classes.iter().enumerate() {
            for &(i, j) in &class.pairs {
                class_of_pair[i][j] = k;
            }
        }
        Ok(Self { angles, classes, class_of_pair })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn classes(&self) -> &[OffsetClass] {
        &self.classes
    }

    /// Index of the offset class the ordered setting pair `(i, j)` falls in.
    pub fn class_of_pair(&self, signal: usize, idler: usize) -> usize {
        self.class_of_pair[signal][idler]
    }

    /// Position of a question angle in the protocol, if present.
    pub fn position_of(&self, angle_deg: f64) -> Option<usize> {
        self.angles.iter().position(|a| (a - angle_deg).abs() <= OFFSET_TOL)
    }

    /// Checks that the protocol has exactly three non-empty offset classes,
    /// as required to form a facts triple.
    fn facts_classes(&self) -> Result<&[OffsetClass]> {
        if self.classes.len() != 3 {
            return Err(Error::InvalidProtocol(format!(
                "facts need exactly 3 offset classes, protocol has {}",
                self.classes.len()
            )));
        }
        if self.classes.iter().any(|c| c.pairs.is_empty()) {
            return Err(Error::InvalidProtocol("empty offset class".into()));
        }
        Ok(&self.classes)
    }
}

impl Default for MeasurementProtocol {
    fn default() -> Self {
        Self::new([0.0, 30.0, 60.0]).expect("default protocol is valid")
    }
}

/// Rank-one projector onto the joint analyzer eigenstate selected by
/// `outcome`: the plain state for a passing photon, the orthogonal state for
/// an absorbed one.
pub fn projector(
    signal: AnalyzerSetting,
    idler: AnalyzerSetting,
    outcome: OutcomePair,
) -> Result<Mat4> {
    let v = joint_ket(signal, idler, outcome)?;
    Ok(linalg::outer(&v))
}

fn joint_ket(
    signal: AnalyzerSetting,
    idler: AnalyzerSetting,
    outcome: OutcomePair,
) -> Result<Vec4> {
    let s = analyzer_state(signal, outcome.signal == Response::Absorb)?;
    let i = analyzer_state(idler, outcome.idler == Response::Absorb)?;
    Ok(linalg::kron2(&s, &i))
}

/// Probability of a joint outcome: `|⟨ψ|e_s, e_i⟩|²` for pure states, the
/// trace rule `Tr(ρ Π)` for mixed ones.
pub fn outcome_probability(
    state: &TwoPhotonState,
    signal: AnalyzerSetting,
    idler: AnalyzerSetting,
    outcome: OutcomePair,
) -> Result<f64> {
    let v = joint_ket(signal, idler, outcome)?;
    let p = match state {
        TwoPhotonState::Pure(psi) => linalg::inner(psi, &v).norm_sqr(),
        // Tr(ρ |v⟩⟨v|) = ⟨v|ρ|v⟩, real for Hermitian ρ.
        TwoPhotonState::Mixed(rho) => linalg::quad_form(rho, &v).re,
    };
    clamp_probability(p, "outcome probability")
}

/// Coincidence probability with linear analyzers at `theta_s` and `theta_i`:
/// both photons pass, or both are absorbed.
pub fn coincidence_probability(
    state: &TwoPhotonState,
    theta_s_deg: f64,
    theta_i_deg: f64,
) -> Result<f64> {
    let s = AnalyzerSetting::linear(theta_s_deg);
    let i = AnalyzerSetting::linear(theta_i_deg);
    let pass = outcome_probability(state, s, i, OutcomePair::BOTH_PASS)?;
    let absorb = outcome_probability(state, s, i, OutcomePair::BOTH_ABSORB)?;
    clamp_probability(pass + absorb, "coincidence probability")
}

/// Closed-form coincidence probability for the six reference states.
pub fn closed_form_coincidence(state: NamedState, theta_s_deg: f64, theta_i_deg: f64) -> f64 {
    let diff = theta_s_deg - theta_i_deg;
    let sum = theta_s_deg + theta_i_deg;
    match state {
        NamedState::PhiPlus => cos_deg(diff).powi(2),
        NamedState::PhiMinus => cos_deg(sum).powi(2),
        NamedState::PsiPlus => sin_deg(sum).powi(2),
        NamedState::PsiMinus => sin_deg(diff).powi(2),
        NamedState::RhoMax => 0.5,
        NamedState::Rho => 0.5 * (cos_deg(2.0 * theta_s_deg) * cos_deg(2.0 * theta_i_deg) + 1.0),
    }
}

fn facts_with(
    protocol: &MeasurementProtocol,
    mut coincidence: impl FnMut(f64, f64) -> Result<f64>,
) -> Result<FactsTriple> {
    let classes = protocol.facts_classes()?;
    let mut means = [0.0f64; 3];
    for (k, class) in classes.iter().enumerate() {
        let mut sum = 0.0;
        for &(i, j) in &class.pairs {
            sum += coincidence(protocol.angles[i], protocol.angles[j])?;
        }
        means[k] = sum / class.pairs.len() as f64;
    }
    FactsTriple::new(means[0], means[1], means[2])
}

/// Facts triple computed from the full projector/Born-rule machinery: each
/// `F_k` is the uniform average of the coincidence probability over the
/// ordered setting pairs of offset class `k`.
pub fn facts_born(state: &TwoPhotonState, protocol: &MeasurementProtocol) -> Result<FactsTriple> {
    facts_with(protocol, |s, i| coincidence_probability(state, s, i))
}

/// Facts triple computed from the closed-form coincidence kernels.
pub fn facts_closed_form(
    state: NamedState,
    protocol: &MeasurementProtocol,
) -> Result<FactsTriple> {
    facts_with(protocol, |s, i| Ok(closed_form_coincidence(state, s, i)))
}
