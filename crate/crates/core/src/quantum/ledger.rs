use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subroutine {
    /// Amplitude amplification while preparing the primal state `|y_t⟩`.
    StatePrep,
    /// Amplitude estimation of `‖A_{i_t}‖_p^p` and `‖y_t‖_q^q`.
    NormEstimation,
    /// Maximum finding on the primal coefficients before `|y_t⟩` is prepared.
    MinFinding,
    /// Preparation of the dual state `|p_{t+1}⟩`, maximum finding included.
    DualPrep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LedgerBreakdown {
    pub state_prep: u64,
    pub norm_estimation: u64,
    pub min_finding: u64,
    pub dual_prep: u64,
}

impl LedgerBreakdown {
    pub fn total(&self) -> u64 {
        self.state_prep
            .saturating_add(self.norm_estimation)
            .saturating_add(self.min_finding)
            .saturating_add(self.dual_prep)
    }
}

/// Modeled `O_A` invocations. `oracle_calls` always equals the breakdown total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryLedger {
    pub oracle_calls: u64,
    pub breakdown: LedgerBreakdown,
}

impl QueryLedger {
    pub fn charge(&mut self, kind: Subroutine, amount: u64) {
        let slot = match kind {
            Subroutine::StatePrep => &mut self.breakdown.state_prep,
            Subroutine::NormEstimation => &mut self.breakdown.norm_estimation,
            Subroutine::MinFinding => &mut self.breakdown.min_finding,
            Subroutine::DualPrep => &mut self.breakdown.dual_prep,
        };
        *slot = slot.saturating_add(amount);
        self.oracle_calls = self.breakdown.total();
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        let b = other.breakdown;
        self.charge(Subroutine::StatePrep, b.state_prep);
        self.charge(Subroutine::NormEstimation, b.norm_estimation);
        self.charge(Subroutine::MinFinding, b.min_finding);
        self.charge(Subroutine::DualPrep, b.dual_prep);
    }

    pub fn is_consistent(&self) -> bool {
        self.oracle_calls == self.breakdown.total()
    }
}
