//! Actions of Aut(F_n) on representation varieties Hom(F_n, G) = G^n and on
//! their quotients by finite groups of automorphisms of G, over exact
//! arithmetic.
//!
//! The algebra is generic over a [`field::Field`]; the aliases below fix the
//! two fields in use, F_p and Q.

pub mod autf;
pub mod charvar;
pub mod faithfulness;
pub mod field;
pub mod freegroup;
pub mod groups;
pub mod matrix;
pub mod repvar;
pub mod weyl;

pub use autf::{AutElement, Endomorphism};
pub use charvar::{TracePolynomial, TraceSubstitution, TraceVar};
pub use faithfulness::{IdentityVerdict, KernelVerdict, SearchConfig, SearchMode};
pub use field::{Field, FiniteField, PrimeField, RationalField};
pub use freegroup::{Letter, Word};
pub use groups::{AnyGroup, AutSubgroup, Group, GroupAutomorphism, GroupKind, Rationals};
pub use matrix::Matrix;
pub use repvar::{Homomorphism, OrbitRep, Point};
pub use weyl::{CartanType, RootSystem, RootType};

/// Matrix group over a prime field.
pub type FpGroup = Group<PrimeField>;
/// Matrix group over the rationals.
pub type QGroup = Group<Rationals>;
pub type FpMatrix = Matrix<u64>;
pub type QMatrix = Matrix<<Rationals as Field>::Elem>;
pub type FpPoint = Point<u64>;
pub type QPoint = Point<<Rationals as Field>::Elem>;
pub type FpAutomorphism = GroupAutomorphism<u64>;
pub type FpAutSubgroup = AutSubgroup<u64>;
pub type FpIdentityVerdict = IdentityVerdict<u64>;
pub type FpKernelVerdict = KernelVerdict<u64>;
