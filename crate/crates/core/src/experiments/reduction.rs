use crate::error::{Error, Result};
use crate::operators::{heat_profile_neg_derivative, REPRESENTATION_CUTOFF};
use crate::special::GaussLegendre;

/// `∫_0^∞ |h'(t)| t dt` for the unit heat profile, truncated at the
/// representation cutoff. The exact value is `1/2`.
pub fn exp_reduction_constant(nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::Config("at least one quadrature node is required".into()));
    }
    let gl = GaussLegendre::cached(nodes);
    Ok(gl.integrate(0.0, REPRESENTATION_CUTOFF, |t| t * heat_profile_neg_derivative(t)))
}
