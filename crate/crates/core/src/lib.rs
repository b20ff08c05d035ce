//! Exact computations in stated skein algebras of triangulated surfaces.

pub mod bigon;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod matrices;
pub mod qcoeff;
pub mod qtorus;
pub mod qtrace;
pub mod state;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};
pub use qcoeff::HalfPowerLaurent;
pub use matrices::LabeledMatrix;
pub use qtorus::{AntisymForm, ExpVec, TorusElement};
pub use state::Sign;
pub use surface::{Label, QuasiData, TriangulatedSurface};
