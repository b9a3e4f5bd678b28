//! Exact Weil-Petersson volumes of moduli spaces of hyperbolic surfaces.
//!
//! `V_{g,n}(L)` is computed with Mirzakhani's recursion over exact rationals
//! in the variables `p = pi^2` and `x_k = L_k^2`. The crate also turns volumes
//! into psi/kappa intersection numbers and checks them against several
//! independent routes: the string and dilaton equations at `L = 2 pi i`,
//! the KdV and Virasoro constraints on psi-class correlators, Zograf's
//! genus-zero recursion and Kontsevich's ribbon-graph formula.
//!
//! ```
//! use wpvol::{compute_volume, VolumeCache};
//!
//! let cache = VolumeCache::new();
//! let v = compute_volume(1, 2, &cache).unwrap();
//! let table = wpvol::poly::render_symmetric(&v.to_monomial_symmetric().unwrap());
//! assert_eq!(table, "1/192 m_(2) + 1/96 m_(1,1) + π²/12 m_(1) + π⁴/4");
//! ```

pub mod asymptotics;
pub mod cache_file;
pub mod cli;
pub mod error;
pub mod exact;
pub mod intersection;
pub mod kdv;
pub mod kernel;
pub mod poly;
pub mod recursion;
pub mod reference;
pub mod ribbon;
pub mod report;
pub mod verify;
pub mod zograf;

pub use error::{Error, Result};
pub use exact::BigRational;
pub use poly::{Monomial, SymmetricTerm, VolumePolynomial};
pub use recursion::{compute_volume, VolumeCache};
