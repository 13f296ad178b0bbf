//! Scenario-driven scans of the one- and two-slit intensity curves.
//!
//! A [`Scenario`](scenario::Scenario) names a geometry, a screen grid and the
//! artifacts wanted; [`run::run`] evaluates it and writes CSV curves, a JSON
//! summary and a gnuplot script.

pub mod fixtures;
pub mod run;
pub mod scenario;
