//! Locally recoverable codes built as evaluation codes over finite fields.

pub mod error;
pub mod evalcode;
pub mod gf;
pub mod linalg;
pub mod poly;
pub mod recovery;
pub mod tamo_barg;
pub mod curve_cover;
pub mod fiber_avail;
pub mod lifted;
pub mod bounds;
pub mod storesim;
pub mod construct;

pub use error::{Error, Result};
pub use evalcode::{BasisFn, EvaluationCode, MinDistance, ReceivedWord};
pub use gf::{Elem, Field, FieldElement};
pub use poly::{Monomial, UniPoly};
pub use recovery::{certify, recover, CertifiedStructure, RecoveryReport, RecoveryStructure, RepairGroup};
pub use bounds::{classify, BoundReport, ParamTuple, Verdict};
pub use construct::{build, BuiltCode, CodeSpecFile, CodeSummary, Construction, Verify};
pub use storesim::{simulate, ClusterModel, SimReport};
