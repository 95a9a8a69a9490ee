use crate::sim::Pmf;
use crate::{Error, Result};

/// Model probabilities below this are raised to it inside the logarithm.
pub const KL_FLOOR: f64 = 1e-8;

/// KL(p ‖ q) in nats: Σ_{pᵢ>0} pᵢ ln(pᵢ / max(qᵢ, floor)).
pub fn kl_divergence(p: &Pmf, q: &Pmf, floor: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if !(floor > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "KL floor must be positive, got {floor}"
        )));
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi * libm::log(pi / qi.max(floor)))
        .sum())
}

/// Divergence of `p` from the uniform distribution: the score of a model that
/// has learned nothing.
pub fn random_baseline(p: &Pmf) -> f64 {
    kl_divergence(p, &Pmf::uniform(p.len()), KL_FLOOR).expect("lengths agree and floor is positive")
}
