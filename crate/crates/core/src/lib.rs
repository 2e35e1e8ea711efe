//! Secrecy analysis for classical and classical-quantum wiretap channels.
//!
//! Numeric modules are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation. The protocol simulator and the
//! property suite in [`verify`] work in `f64` only.

pub mod bounds;
pub mod channels;
pub mod error;
pub mod games;
pub mod info;
pub mod num;
pub mod holevo;
pub mod optimize;
pub mod polar;
pub mod protosim;
pub mod qstate;
pub mod rates;
pub mod rng;
pub mod secrecy;
pub mod verify;

pub use error::{Error, Result};
pub use num::Real;

pub type Dist64 = info::Dist<f64>;
pub type JointDist64 = info::JointDist<f64>;
pub type Bsc64 = channels::Bsc<f64>;
pub type Dmc64 = channels::Dmc<f64>;
pub type BroadcastModel64 = channels::BroadcastModel<f64>;
pub type DensityMatrix64 = qstate::DensityMatrix<f64>;
pub type KrausChannel64 = qstate::KrausChannel<f64>;
pub type CqChannel64 = holevo::CqChannel<f64>;
pub type Ensemble64 = holevo::Ensemble<f64>;
pub type SynthesizedChannel64 = polar::SynthesizedChannel<f64>;
pub type AlphabetSizes64 = rates::AlphabetSizes<f64>;
pub type RateResult64 = rates::RateResult<f64>;
pub type AdaptiveRates64 = rates::AdaptiveRates<f64>;
pub type XorGame64 = games::XorGame<f64>;
pub type QuantumStrategy64 = games::QuantumStrategy<f64>;
pub type XorGame3_64 = games::XorGame3<f64>;
pub type QuantumStrategy3_64 = games::QuantumStrategy3<f64>;
pub type Polarization64 = polar::Polarization<f64>;
