//! Exact Hall-algebra computations for small extriangulated categories:
//! representations of acyclic quivers over F_p and graded vector spaces
//! viewed as zero-differential complexes.

pub mod error;
pub mod ff;
pub mod graded;
pub mod hall;
pub mod linrep;
pub mod model;
pub mod oracle;
pub mod quiver;
pub mod verify;

pub use error::{Budget, HallError, Result, DEFAULT_BUDGET};
pub use ff::{FFMatrix, FieldSpec};
pub use graded::{GradedModel, GradedObject, GradedVariant};
pub use hall::{ConstantRecord, HallAlgebra, HallElement, ProductKind};
pub use model::{
    Backend, BackendSpec, ClassPayload, IsoClass, Model, ModelCapabilities, NegVariant, UniverseBound,
};
pub use quiver::QuiverModel;
pub use verify::{Failure, SuiteConfig, SuiteName, VerificationReport};
