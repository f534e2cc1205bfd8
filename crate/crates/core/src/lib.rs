//! Single-spin readout through a Fano antiresonance in a spin-polarized
//! quantum wire.
//!
//! The dot holds one target electron. A wire electron tunnels into the
//! excited (L = 1) dot orbital only when its spin matches; the resulting
//! destructive interference backscatters it, and the antiparallel
//! configuration reflects exactly half as strongly. Spin-orbit splitting of
//! the excited orbital forbids the exchange flip-flop, so the measurement
//! leaves the target spin intact.
//!
//! Modules:
//! - [`units`], [`config`]: constants, validated device parameters, JSON schema
//! - [`spectrum`]: two-electron Hamiltonian, level diagram, readout criteria
//! - [`transport`]: Fano lineshape, spin-channel weights, multi-mode wire
//! - [`landauer`]: finite-temperature current and conductance
//! - [`oracle`]: tight-binding lattice used to check the lineshape
//! - [`readout`]: contrast, N-qubit scaling, non-demolition verdict
//!
//! Numerics are generic over [`Real`] (`f32`, `f64`); the aliases at the
//! crate root fix `f64`.

// `!(x > 0)` style guards are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod landauer;
pub mod oracle;
pub mod quadrature;
pub mod readout;
pub mod scalar;
pub mod spectrum;
pub mod transport;
pub mod units;

pub use config::{rashba_beta, validate, DotSpin, Mode, RawDeviceConfig, WireSpin};
pub use error::{Error, FieldError, Result, ValidationErrors};
pub use landauer::{current, current_parts, fermi, iv_curve, linear_conductance, optimal_bias};
pub use oracle::{compare_to_fano, effective_broadening, oracle_transmission};
pub use readout::{n_qubit_reflection, nondemolition_summary, readout_report, Arrangement, Verdict};
pub use scalar::Real;
pub use spectrum::{eigenlevels, target_level, two_electron_hamiltonian, SpinCharacter};
pub use transport::{fano_transmission, mean_reflection, spin_channel_reflection, SpinOrientation};
pub use units::{thermal_energy, PhysicalConstants};

pub type DeviceConfig = config::DeviceConfig<f64>;
pub type DeviceConfig32 = config::DeviceConfig<f32>;
pub type HamiltonianMatrix = spectrum::HamiltonianMatrix<f64>;
pub type LevelDiagram = spectrum::LevelDiagram<f64>;
pub type Level = spectrum::Level<f64>;
pub type ResonanceSpec = spectrum::ResonanceSpec<f64>;
pub type TransmissionModel = transport::TransmissionModel<f64>;
pub type TransmissionModel32 = transport::TransmissionModel<f32>;
pub type BiasPoint = landauer::BiasPoint<f64>;
pub type IVCurve = landauer::IVCurve<f64>;
pub type OracleLattice = oracle::OracleLattice<f64>;
pub type OracleComparison = oracle::OracleComparison<f64>;
pub type ReadoutReport = readout::ReadoutReport<f64>;
pub type ScalingModel = readout::ScalingModel<f64>;
pub type Quadrature = quadrature::Quadrature<f64>;
