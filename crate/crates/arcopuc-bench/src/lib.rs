//! Shared inputs for the benchmarks in `benches/`.

use arcopuc::{make_params, ExtensionParams, Rational};
use num_complex::Complex64;

pub fn params(p: u64, q: u64, m_dim: usize, n: usize) -> ExtensionParams {
    make_params(Rational::new(p, q).expect("valid period"), m_dim, n).expect("valid parameters")
}

/// Samples of a smooth non-periodic function on the lattice of `p`.
pub fn smooth_samples(p: &ExtensionParams) -> Vec<Complex64> {
    arcopuc::params_lattice::lattice_nodes(p)
        .nodes_x
        .iter()
        .map(|&x| Complex64::new((3.0 * x).exp() * x, (2.0 * x).cos()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_well_formed() {
        let p = params(2, 1, 16, 41);
        assert_eq!(smooth_samples(&p).len(), 41);
    }
}
