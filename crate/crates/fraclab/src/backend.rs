//! Backend selection: every operator is available through the spectral
//! multiplier path and through direct quadrature, and the verification
//! checks take the backend as a parameter.

use crate::error::{FraclabError, Result};
use crate::fields::{ScalarField, VectorField};
use crate::quadrature::{self, QuadratureConfig};
use crate::spectral::{self, Multiplier};

#[derive(Debug, Clone, Copy)]
pub enum Backend {
    Spectral { pad: usize },
    Quadrature(QuadratureConfig),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Spectral { pad: 4 }
    }
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Spectral { .. } => "spectral",
            Backend::Quadrature(_) => "quadrature",
        }
    }

    /// Fractional gradient; alpha = 0 is the Riesz transform, alpha = 1
    /// the classical gradient (spectral only).
    pub fn nabla(&self, f: &ScalarField, alpha: f64) -> Result<VectorField> {
        match self {
            Backend::Spectral { pad } => spectral::spectral_nabla(f, alpha, *pad),
            Backend::Quadrature(cfg) => {
                if alpha == 0.0 {
                    quadrature::quad_riesz(f, cfg)
                } else if alpha == 1.0 {
                    Err(FraclabError::domain(
                        "alpha = 1 has no quadrature form; use the spectral backend".to_string(),
                    ))
                } else {
                    quadrature::quad_nabla(f, alpha, cfg)
                }
            }
        }
    }

    pub fn div(&self, phi: &VectorField, alpha: f64) -> Result<ScalarField> {
        match self {
            Backend::Spectral { pad } => spectral::spectral_div(phi, alpha, *pad),
            Backend::Quadrature(cfg) => quadrature::quad_div(phi, alpha, cfg),
        }
    }

    pub fn riesz(&self, f: &ScalarField) -> Result<VectorField> {
        match self {
            Backend::Spectral { pad } => spectral::spectral_riesz(f, *pad),
            Backend::Quadrature(cfg) => quadrature::quad_riesz(f, cfg),
        }
    }

    pub fn frac_laplacian(&self, f: &ScalarField, alpha: f64) -> Result<ScalarField> {
        match self {
            Backend::Spectral { pad } => {
                spectral::apply_multiplier(f, &Multiplier::FracLaplacian { alpha }, *pad)
            }
            Backend::Quadrature(cfg) => quadrature::quad_frac_laplacian(f, alpha, cfg),
        }
    }

    pub fn riesz_potential(&self, f: &ScalarField, alpha: f64) -> Result<ScalarField> {
        match self {
            Backend::Spectral { pad } => {
                spectral::apply_multiplier(f, &Multiplier::RieszPotential { alpha }, *pad)
            }
            Backend::Quadrature(cfg) => quadrature::quad_riesz_potential(f, alpha, cfg),
        }
    }
}
