/// Numerical tolerances shared by every computation in the crate.
///
/// The defaults suit double precision for dimensions up to a few dozen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermitian symmetry check (absolute, scaled by `max(1, max|H_ij|)`).
    pub herm: f64,
    /// Idempotency / orthogonality of projections.
    pub proj: f64,
    /// Relative threshold for numerical rank decisions.
    pub rank: f64,
    /// Absolute floor under the relative rank threshold.
    pub abs: f64,
    /// Relative gap below which eigenvalues are merged into one cluster.
    pub group: f64,
    /// Eigenvalues at most `zero * a_1` are treated as zero.
    pub zero: f64,
    /// Reconstruction residual.
    pub recon: f64,
    /// Slack for positive semidefiniteness and Loewner comparisons.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-12,
            proj: 1e-9,
            rank: 1e-9,
            abs: 1e-300,
            group: 1e-8,
            zero: 1e-12,
            recon: 1e-10,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_rank(mut self, rank: f64) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_group(mut self, group: f64) -> Self {
        self.group = group;
        self
    }
}
