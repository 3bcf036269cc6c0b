//! Multiple choice learning with deterministic annealing.
//!
//! A [`network::HypothesisBank`] predicts `n` hypotheses and scores per input.
//! [`trainer::train`] fits it with hard winner-takes-all, Relaxed-WTA or a
//! Boltzmann assignment cooled by a [`schedulers::ScheduleSpec`], recording a
//! trajectory of distortion, entropy, free energy and rate along the way.
//! [`diagnostics`] estimates critical temperatures from data and
//! [`assignment`] compares set-matching losses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod cli;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod losses;
pub mod metrics;
pub mod network;
pub mod numerics;
pub mod schedulers;
pub mod trainer;
