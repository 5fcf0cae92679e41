//! Exact arithmetic for Iwasawa λ lower bounds of imaginary quadratic fields,
//! together with a brute-force calculus of generalized Bockstein maps and
//! Massey products over F_p on finite groups.
//!
//! Every result is exact: linear algebra runs over F_p, p-adic values carry an
//! explicit precision, and number-field elements are held with big-integer
//! coordinates.

pub mod cyclolayer;
pub mod error;
pub mod fp_linalg;
pub mod groupcoh;
pub mod massey;
pub mod padic;
pub mod par;
pub mod quadfield;
pub(crate) mod util;

pub use error::{Error, Result};
