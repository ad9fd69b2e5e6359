//! Exact computations around generalized Euler characteristics of Selmer groups.
//!
//! * [`padics`]: exact rationals with p-adic valuations and magnitudes.
//! * [`lambda_algebra`]: truncated `Z_p[[T]]` arithmetic and Weierstrass preparation.
//! * [`gamma_modules`]: torsion `Λ(Γ)`-modules and their Γ-Euler characteristics.
//! * [`akashi`]: Akashi series and their leading terms.
//! * [`curves`]: elliptic-curve point counts, Euler factors, hypothesis checks.
//! * [`cyclotomic_fields`]: prime splitting in `Q(μ_p)` and inertia sets of false-Tate towers.
//! * [`euler_char`]: the product formula relating the false-Tate and cyclotomic characteristics.
//! * [`cli`]: the `iwasawa` command line front end.

pub mod akashi;
pub mod cli;
pub mod curves;
pub mod cyclotomic_fields;
pub mod error;
pub mod euler_char;
pub mod gamma_modules;
pub mod lambda_algebra;
mod modular;
pub mod padics;
mod poly_parse;

pub use akashi::{
    akashi_leading, akashi_series, check_multiplicativity, AkashiData, AkashiLeading, AkashiSeries,
};
pub use curves::{
    euler_factor, is_ordinary, parity_check, weil_weight_check, Curve, CurveLocalData,
};
pub use cyclotomic_fields::{infinite_inertia_set, split, ExtensionSpec, SplittingData};
pub use error::{Error, ErrorKind, Result};
pub use euler_char::{chi_gamma_jv, large_selmer_chi, local_cardinalities, theorem3_chi, ChiInput};
pub use gamma_modules::{finite_level_oracle, generalized_chi, ChiResult, TorsionModule};
pub use lambda_algebra::{LambdaSeries, LeadingTerm, WeierstrassForm};
pub use padics::{Convention, Magnitude, PadicScalar, PowerOfP, Valuation};
