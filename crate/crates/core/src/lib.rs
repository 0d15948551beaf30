//! Bayesian and frequentist upper-confidence-bound bandits.
//!
//! The crate covers three pieces that are meant to be used together:
//!
//! * [`policy`]: BayesUCB for Gaussian, Bernoulli and linear-Gaussian bandits,
//!   and UCB1 as the flat-prior limit of the Gaussian policy.
//! * [`bounds`]: numerical evaluation of logarithmic and √n Bayes regret
//!   bounds, with Monte Carlo estimates of prior expectations.
//! * [`sim`]: a seeded, order-independent Monte Carlo engine that samples
//!   instances from the prior, runs policies and aggregates Bayes regret.

pub mod bounds;
pub mod environment;
mod error;
pub mod exec;
pub mod linalg;
pub mod model;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod stats;

pub use environment::{make_linear_action_set, Environment, NoiseModel};
pub use error::{Error, Result};
pub use model::{clip_gap, sample_instance, ActionSet, BanditInstance, GapProfile, Prior, PriorSampler};
pub use policy::{confidence_event_holds, PolicyConfig, PolicyState, PolicyVariant};
pub use rng::RngStream;
