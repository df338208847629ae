//! Exact computation of the Wedderburn structure of `QG = Quot(Z_l[[G]])`
//! for pro-l groups `G = H ⋊ Γ`, where `H` is a finite l-group and `Γ ≅ Z_l`.
//!
//! Everything is computed over `Q` with exact big-rational coefficients:
//! l-power cyclotomic arithmetic, character tables of finite l-groups,
//! the orbit invariants that control each simple component (`w`, `v`, the
//! Schur index `w/v`, centres, cyclic-algebra presentations), the central
//! idempotents realising the components inside `(QΓ_0)[H]`, a truncated
//! power-series layer with Weierstrass preparation and Galois norms, and
//! the completion metadata of the component centres.

pub mod arith;
pub mod chartab;
pub mod clifford;
pub mod completion;
pub mod cyclotomic;
pub mod group;
pub mod idempotent;
pub mod series;

pub use chartab::{Character, CharacterTable};
pub use clifford::{ComponentDescriptor, Decomposition, OrbitInvariants, SkewFieldPresentation};
pub use completion::{CompletionDescriptor, PrimeKind};
pub use cyclotomic::{CyclotomicNumber, GaloisElement, Rational, Valuation};
pub use group::{FiniteLGroup, GroupAutomorphism, GroupSpec};
pub use idempotent::GroupAlgebraElement;
pub use series::{PreparationResult, TruncatedSeries};
