//! Batch runner for seqpairs experiments.
//!
//! A TOML config lists systems and experiments; [`run::run_config`] turns it
//! into a [`report::Report`] whose CSV is byte-identical across reruns.

pub mod config;
pub mod report;
pub mod run;
pub mod selfcheck;

/// Configs shipped with the binary, addressed as `bundled:NAME`.
pub mod bundled {
    pub const CONFIGS: &[(&str, &str)] = &[
        ("acceptance", include_str!("../configs/acceptance.toml")),
        ("bernoulli_entropy", include_str!("../configs/bernoulli_entropy.toml")),
        ("goldenmean_independence", include_str!("../configs/goldenmean_independence.toml")),
    ];

    pub fn get(name: &str) -> Option<&'static str> {
        CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
    }
}

pub use seqpairs_core;
