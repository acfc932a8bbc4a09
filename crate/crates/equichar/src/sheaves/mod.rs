//! Equivariant sheaves on finite Galois G-sets as stabilizer representations.

mod checks;
mod ops;
mod rep;
mod sheaf;

pub use checks::{coinduced_rep_plain, coinduced_trace_check, pushforward_stalk_trace};
pub use ops::{
    adjunction_check, coinduce, extend_by_zero, inertia_invariants_class, internal_hom,
    invariants_coinvariants, mackey_decompose, mackey_summand, nearby_cycles_point, pullback,
    pushforward,
    pushforward_with_data, tate_twist, tensor, AdjunctionReport, CoinductionData,
    PushforwardData,
};
pub use ops::dual;
pub use rep::{left_inverse, reps_trace_equal, restrict_operator, WeilRep};
pub use sheaf::{classes_equal, EquivariantSheaf, TraceWitness, VirtualClass};

use crate::arith::ArithError;
use crate::cyclotomic::CycloError;
use crate::groups::GroupError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SheafError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("representation map is not multiplicative")]
    RepNotMultiplicative,
    #[error("Frobenius operator does not intertwine the kernel action with theta")]
    RepNotIntertwining,
    #[error("matrix dimensions disagree with the declared rank")]
    RepDimMismatch,
    #[error("representation table has wrong number of kernel entries")]
    RepKernelMismatch,
    #[error("operands live over different base sets")]
    BaseSetMismatch,
    #[error("operands use different cyclotomic conductors")]
    ConductorMismatch,
    #[error("stalk group at point {point} does not match the stabilizer there")]
    StalkMismatch { point: usize },
    #[error("split homomorphism fails validation")]
    HomNotValid,
    #[error("element does not lie in the expected stabilizer")]
    NotInStabilizer,
    #[error("map is not a clopen inclusion")]
    NotClopen,
    #[error("map is not a quotient by the kernel of its group homomorphism")]
    NotQuotient,
    #[error("operation requires a local base field")]
    LocalBaseRequired,
    #[error("morphisms do not share a target")]
    TargetMismatch,
    #[error("inertia structures of the operands are incompatible")]
    InertiaMismatch,
    #[error("inclusion of stabilizers expected (injective on the kernel)")]
    NotSubgroupInclusion,
    #[error("columns are not linearly independent")]
    DependentColumns,
    #[error("subspace is not stable under the operator")]
    UnstableSubspace,
}
