//! q-deformed rotational spectra.
//!
//! The crate builds the finite-dimensional su(2) and su_q(2) irreps on a
//! shared `|l, m>` basis, the rank-1 irreducible tensor operator under
//! su_q(2) together with the Hamiltonian built from its scalar square, the
//! exact and approximate `l(l+1)` power-series expansions of both deformed
//! spectra, and least-squares fits of six two-parameter rotational models to
//! a molecular band.
//!
//! Module map:
//!
//! * [`qnum`]: q-numbers, q-factorials and the deformation parameter.
//! * [`algebra`]: generator matrices, Casimir operators, commutator checks.
//! * [`ito`]: rank-1 tensor operator, q-Clebsch-Gordan table, `Z`, ITO Hamiltonian.
//! * [`series`]: spherical Bessel functions, Bernoulli numbers, spectrum expansions.
//! * [`spectra`]: closed-form energies of models I, I', II, II', III, IV.
//! * [`fitting`]: branch reduction, the sigma quality measure, model fits.
//! * [`data`]: CSV formats and the bundled HF band.
//! * [`cli`]: the `qrotor` command-line front end.

pub mod algebra;
pub mod cli;
pub mod data;
mod error;
pub mod fitting;
pub mod ito;
pub mod qnum;
pub mod series;
pub mod spectra;

pub use error::{Error, Result};
pub use qnum::{DeformationParameter, Regime};
