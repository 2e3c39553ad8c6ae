//! Exact combinatorics of two-dimensional cyclic quotient singularities.
//!
//! The crate works with Hirzebruch-Jung continued fractions `n/q = [b_1, ..., b_r]`,
//! their blow-down (contraction) behaviour, generalized T-singularities built from
//! cores by the T-chain algorithm, discrepancies and canonical-class (K²) ledgers,
//! and the accumulation-point families of stable-surface volumes.
//!
//! Every routine is exact. Integer routines are generic over [`Scalar`] (use
//! [`Int`] for arbitrary precision, `i64`/`i128` for speed when the sizes are
//! known to be bounded); the discrepancy solver is generic over any [`Field`],
//! with [`Rational`] as the exact default.

pub mod accumulation;
pub mod chain;
pub mod contraction;
mod error;
pub mod fraction;
pub mod geometry;
pub mod render;
pub mod tsing;

use std::fmt;
use std::hash::Hash;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub use accumulation::{
    blowup_family, example210_family, formation_family, formation_rule, limit_of, property_star,
    AccumSequence, AccumTerm, FamilyKind, FormationStep, LimitReport, Monotonicity, StarRecord,
    StepWitness,
};
pub use chain::{Chain, Convergents};
pub use contraction::{
    concat_with_ones, contract_fully, contract_once, is_admissible, is_admissible_for_chains,
    surviving_center, ContractionStep, ContractionTrace, InsertionPattern, SurvivingCenter,
};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use geometry::{
    bridge_degree, check_gen_t_delta_bound, check_main_bounds, correction_term, delta_from_case,
    discrepancies, k2_ledger, k2_step_value, BoundCheck, BoundReport, DeltaCase, Discrepancies,
    Verdict, VolumeLedger,
};
pub use tsing::{
    apply_tstep, decompose, enumerate_cores, enumerate_generalized_t, is_core,
    is_generalized_t, is_minimal_core, recognize_t, reduced_form, undo_tstep, Core,
    Decomposition, FamilyMember, GeneralizedTFamily, TSingularity, TStep, Undo,
};

/// Integer types the exact routines are generic over.
pub trait Scalar:
    num_integer::Integer
    + Signed
    + Clone
    + FromPrimitive
    + ToPrimitive
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    fn from_entry(v: i64) -> Self {
        Self::from_i64(v).expect("chain entry representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: num_integer::Integer
        + Signed
        + Clone
        + FromPrimitive
        + ToPrimitive
        + Hash
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Ordered fields the tridiagonal discrepancy solver runs over.
pub trait Field: Clone + Num + Neg<Output = Self> + PartialOrd + fmt::Debug {
    /// Builds `v` from `1` by doubling, so any `Num` type qualifies.
    fn from_entry(v: i64) -> Self {
        let (mut acc, mut pow) = (Self::zero(), Self::one());
        let mut x = v.unsigned_abs();
        while x > 0 {
            if x & 1 == 1 {
                acc = acc + pow.clone();
            }
            pow = pow.clone() + pow;
            x >>= 1;
        }
        if v < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Field for T where T: Clone + Num + Neg<Output = T> + PartialOrd + fmt::Debug {}

/// Arbitrary-precision integer used by the exact defaults.
pub type Int = num_bigint::BigInt;
/// Exact rational over [`Int`].
pub type Rational = num_rational::Ratio<Int>;
/// Fraction `n/q` with arbitrary-precision components.
pub type ExactFraction = Fraction<Int>;
/// Fraction `n/q` with machine-word components.
pub type SmallFraction = Fraction<i64>;
/// Discrepancies solved over [`Rational`].
pub type ExactDiscrepancies = Discrepancies<Rational>;
/// Volume ledger over [`Int`].
pub type ExactLedger = VolumeLedger<Int>;
/// Accumulation sequence over [`Int`].
pub type ExactSequence = AccumSequence<Int>;
