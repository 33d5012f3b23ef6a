//! Localization and Toeplitz operators on the Bargmann-Fock space as finite
//! Hermitian matrices in the orthonormal monomial basis.

mod assemble;
mod operator;
mod symbol;

pub use assemble::{
    annulus_spectrum_closed, assemble_indicator, assemble_indicator_quadrature,
    assemble_indicator_with, disk_spectrum_closed, normalized_monomial, recommended_basis_size,
};
pub use operator::{GalerkinOperator, Spectrum};
pub use symbol::{
    assemble_symbol, build_counterexample_symbol, radial_symbol_spectrum, CounterexampleSupport,
    SymbolFn,
};
