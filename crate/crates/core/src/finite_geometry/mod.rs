//! Finite fields, curves over them, Frobenius data and super-isolation tests.

pub mod census;
pub mod classify;
pub mod cm;
pub mod curve;
pub mod field;
pub mod frobenius;

pub use census::{extension_trace, isogeny_census, isogeny_census_in, ExtensionTrace, IsogenyCensus, IsogenyClassRow};
pub use classify::{
    class_number_imaginary, classify_elliptic, classify_ordinary_av, classify_weil_polynomial, find_root_in_catalog,
    SuperIsolatedVerdict, VerdictCase,
};
pub use cm::{cm_prime_from_alpha, cm_prime_search, CmPrime};
pub use curve::{brute_force_count, count_points, count_points_with_budget, CurveKind, CurveModel, COUNT_BUDGET};
pub use field::{Elem, FiniteField};
pub use frobenius::{frobenius_charpoly, frobenius_charpoly_with_budget, zeta_numerator, FrobeniusData};
