//! Numeric caps guarding combinatorial blowup.
//!
//! Every cap is reported back when exceeded; nothing is silently truncated.

use serde::Serialize;

/// Environment variable overriding [`Caps::max_carrier`].
pub const MAX_CARRIER_ENV: &str = "SDW_MAX_CARRIER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest carrier (or product carrier) that may be materialized.
    pub max_carrier: u64,
    /// Largest number of congruences `con_lattice` will enumerate.
    pub max_congruences: usize,
    /// Step budget for one congruence generation call.
    pub cg_step_budget: u64,
    /// Largest commutator arity.
    pub max_commutator_arity: usize,
    /// Largest generated `M_A(α₁,…,α_k)`.
    pub max_cube_functions: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_carrier: 10_000_000,
            max_congruences: 100_000,
            cg_step_budget: 2_000_000_000,
            max_commutator_arity: 3,
            max_cube_functions: 1_000_000,
        }
    }
}

impl Caps {
    /// Defaults, with `max_carrier` taken from `SDW_MAX_CARRIER` when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var(MAX_CARRIER_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            caps.max_carrier = v;
        }
        caps
    }
}
