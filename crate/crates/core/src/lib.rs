//! Residuated-lattice computation: quantales and their modules, transforms
//! between free modules, the Łukasiewicz block image codec, t-norm
//! morphology and fuzzy transforms.

pub mod closure;
pub mod codec;
pub mod error;
pub mod fuzzy;
pub mod laws;
pub mod luk;
pub mod matrix;
pub mod module;
pub mod morphology;
pub mod quantale;
pub mod tnorm;
pub mod transform;
pub mod unit;

pub use codec::{build_scheme, compress, metrics, reconstruct, BlockScheme, CompressedImage, Image, Metrics};
pub use error::{Error, Result};
pub use fuzzy::{f_inverse, f_transform, validate_partition, Direction, FuzzyPartition};
pub use laws::{check_quantale_laws, check_quantale_laws_on, check_quantale_laws_sampled, check_tnorm_laws, LawEntry, LawReport};
pub use quantale::{
    finite_residuals, parse_monoid, parse_quantale, powerset_quantale, FiniteLattice, FiniteMonoid,
    FiniteQuantale, FixedLukasiewicz, Quantale, TNormQuantale,
};
pub use luk::{basis_value, build_coder, luk_inverse, luk_transform, LukCoder};
pub use module::{check_module_laws, FiniteModule, Nucleus};
pub use morphology::{dilate, erode, Boundary, Grid, StructuringElement};
pub use tnorm::{tnorm_apply, tnorm_residuum, TNormKind};
pub use unit::{Ratio, UnitValue};
pub use transform::{classify_coder, inverse_apply, transform_apply, CoderClass, Handedness, Kernel};
