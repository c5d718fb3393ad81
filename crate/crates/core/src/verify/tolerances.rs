//! The named tolerance profile for the verification suite.
//!
//! Every check compares one `max_violation` against one named bound
//! from this table, so precision experiments change a single struct.
//! Checks that aggregate parts with different bounds normalize each
//! part by its own bound and use tolerance 1.0; the per-part bounds
//! live next to the check that uses them.

/// One named tolerance per check. All slacks are absolute unless the
/// field documentation says otherwise.
#[derive(Clone, Debug)]
pub struct TolProfile {
    /// Donald identity residual over random splits.
    pub donald: f64,
    /// Joint convexity slack of relative entropy.
    pub joint_convexity: f64,
    /// Frobenius distance allowed for states whose relative entropy
    /// to the base was driven below 2.5e-13.
    pub strict_positivity: f64,
    /// Wrong finite/infinite branches of the support test (a count).
    pub support_dichotomy: f64,
    /// Chain rule residual, scalar and state Frobenius.
    pub chain_rule: f64,
    /// Frobenius residual of perturb-then-invert.
    pub inversion: f64,
    /// Normalized violation for gauge uniqueness (parts: state match
    /// within 1e-12, recovered perturbations within 1e-9).
    pub gauge_uniqueness: f64,
    /// Normalized violation for cumulant continuity (parts: value and
    /// entropy limits 1e-8 at step 2^-40, monotonicity slack 1e-13).
    pub continuity: f64,
    /// Gibbs variational slack: dominance and equality at the
    /// maximizer.
    pub variational: f64,
    /// Slack of the mean and log-moment cumulant bounds.
    pub cumulant_bounds: f64,
    /// Residual of the free-energy shift identity.
    pub shift_identity: f64,
    /// Normalized violation for scalar-shift covariance (parts: value
    /// within 1e-10, state invariance within 1e-12).
    pub scalar_shift: f64,
    /// Relative mismatch between the modular-vector oracle and the
    /// density shortcut.
    pub modular_oracle: f64,
    /// Relative central-difference mismatch of the Gateaux derivative.
    pub gateaux: f64,
    /// Young-function axiom slack on sampled sections; a failed
    /// unboundedness probe counts as violation 1.
    pub young_axioms: f64,
    /// Luxemburg norm axiom slack (homogeneity relative, triangle
    /// absolute).
    pub norm_axioms: f64,
    /// Slack of the centered/uncentered norm equivalence with constant
    /// 2/log 2.
    pub norm_equivalence: f64,
    /// Slack of the pointwise Young-function sandwich.
    pub young_sandwich: f64,
    /// Normalized violation of the cosh lower bounds (parts: entropy
    /// form 1e-9, mean form 1e-10).
    pub cosh_entropy_bound: f64,
    /// Slack of the normalized cosh domination of expectations.
    pub cosh_domination: f64,
    /// Slack of the norm-level lemmas and the frozen qubit norms.
    pub luxemburg_lemmas: f64,
    /// Absolute mismatch against the independent scalar implementation
    /// on commutative shapes.
    pub commutative_reduction: f64,
    /// Mismatch between the numeric centered-cumulant conjugate and
    /// its relative-entropy closed form (optimizer-limited).
    pub cumulant_conjugate: f64,
    /// Slack of the unnormalized free-energy conjugacy over sampled
    /// positive functionals.
    pub unnormalized_conjugacy: f64,
    /// Mismatch between the decomposition functional and twice the
    /// centered conjugate at half the argument (two optimizers).
    pub psi_conjugacy: f64,
    /// Slack of the Luxemburg-vs-dual norm sandwich (optimizer
    /// limited).
    pub dual_norm_equivalence: f64,
    /// Slack of the polar-set inner inclusion.
    pub polar_sandwich: f64,
    /// Slack of the dual unit-ball decomposition, forward direction;
    /// the converse uses the conservative factor 8.
    pub unit_ball: f64,
    /// Young inequality slack against sampled arguments.
    pub young_inequality: f64,
    /// Ceiling on the duality-gap certificates of conjugate runs.
    pub conjugate_gap: f64,
    /// Hoelder inequality slack with the factor-2 constant.
    pub hoelder: f64,
    /// Mismatch between the decomposition solver and the 1-D classical
    /// oracle on diagonal instances.
    pub psi_oracle: f64,
    /// Frobenius residual of chart round trips.
    pub chart_round_trip: f64,
    /// Normalized violation for transition maps (parts: state
    /// consistency 1e-9, affinity 1e-10, cocycle 1e-9).
    pub transition: f64,
    /// Transport cocycle and pairing-invariance residual.
    pub transport: f64,
    /// Injectivity failures of the chart map (a count).
    pub injectivity: f64,
    /// Ceiling on the measured base-change norm ratio. This is a
    /// sanity bound, not a theorem constant: the content of the check
    /// is that the ratio is finite, and the measured maximum is
    /// reported as the violation.
    pub base_change_ceiling: f64,
    /// Chart-inversion failures between faithful states (a count).
    pub connected_component: f64,
}

impl Default for TolProfile {
    fn default() -> Self {
        Self {
            donald: 1e-9,
            joint_convexity: 1e-9,
            strict_positivity: 1e-6,
            support_dichotomy: 0.0,
            chain_rule: 1e-9,
            inversion: 1e-9,
            gauge_uniqueness: 1.0,
            continuity: 1.0,
            variational: 1e-9,
            cumulant_bounds: 1e-10,
            shift_identity: 1e-9,
            scalar_shift: 1.0,
            modular_oracle: 1e-9,
            gateaux: 1e-6,
            young_axioms: 1e-8,
            norm_axioms: 1e-9,
            norm_equivalence: 1e-9,
            young_sandwich: 1e-10,
            cosh_entropy_bound: 1.0,
            cosh_domination: 1e-9,
            luxemburg_lemmas: 1e-9,
            commutative_reduction: 1e-12,
            cumulant_conjugate: 1e-5,
            unnormalized_conjugacy: 1e-8,
            psi_conjugacy: 1e-4,
            dual_norm_equivalence: 1e-4,
            polar_sandwich: 1e-6,
            unit_ball: 1e-4,
            young_inequality: 1e-9,
            conjugate_gap: 1e-6,
            hoelder: 1e-9,
            psi_oracle: 1e-6,
            chart_round_trip: 1e-9,
            transition: 1.0,
            transport: 1e-12,
            injectivity: 0.0,
            base_change_ceiling: 1e6,
            connected_component: 0.0,
        }
    }
}
