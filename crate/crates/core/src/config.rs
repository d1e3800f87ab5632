//! Budgets for exhaustive scans and guards for Witt computations.
//!
//! Defaults can be changed by a `key=value` config file and by the
//! `DKIT_BUDGET` environment variable, which caps every scan.

use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{parse_err, Error, Result};

pub const DEFAULT_MAX_P: u32 = 7;
pub const DEFAULT_MAX_N: u32 = 6;

static MAX_P: AtomicU32 = AtomicU32::new(DEFAULT_MAX_P);
static MAX_N: AtomicU32 = AtomicU32::new(DEFAULT_MAX_N);

/// Current `(max p, max n)` guard for structural polynomials.
pub fn witt_guard() -> (u32, usize) {
    (MAX_P.load(Ordering::Relaxed), MAX_N.load(Ordering::Relaxed) as usize)
}

pub fn set_witt_guard(max_p: u32, max_n: usize) {
    MAX_P.store(max_p, Ordering::Relaxed);
    MAX_N.store(max_n as u32, Ordering::Relaxed);
}

/// Caps on the number of candidates examined by exhaustive scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub presentations: u128,
    pub maps: u128,
    pub points: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { presentations: 1 << 16, maps: 1 << 12, points: 1 << 20 }
    }
}

impl Budgets {
    /// Every budget set to the same cap.
    pub fn uniform(cap: u128) -> Self {
        Budgets { presentations: cap, maps: cap, points: cap }
    }

    pub fn check(needed: u128, budget: u128) -> Result<()> {
        if needed > budget {
            Err(Error::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    }
}

/// Settings read from a config file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Config {
    pub budgets: Budgets,
    pub max_p: Option<u32>,
    pub max_n: Option<usize>,
}

fn parse_count(key: &str, value: &str) -> Result<u128> {
    let value = value.trim();
    let parsed = match value.strip_prefix("2^") {
        Some(e) => e.parse::<u32>().ok().and_then(|e| 1u128.checked_shl(e)),
        None => value.parse::<u128>().ok(),
    };
    parsed.ok_or_else(|| parse_err(format!("bad value `{value}` for `{key}`")))
}

impl Config {
    /// Parse `key=value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got `{line}`")))?;
            let key = key.trim();
            match key {
                "budget" => cfg.budgets = Budgets::uniform(parse_count(key, value)?),
                "budget.presentations" => cfg.budgets.presentations = parse_count(key, value)?,
                "budget.maps" => cfg.budgets.maps = parse_count(key, value)?,
                "budget.points" => cfg.budgets.points = parse_count(key, value)?,
                "guard.max_p" => cfg.max_p = Some(parse_count(key, value)? as u32),
                "guard.max_n" => cfg.max_n = Some(parse_count(key, value)? as usize),
                other => return Err(parse_err(format!("unknown config key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Apply `DKIT_BUDGET`, if set, on top of this config.
    pub fn with_env(mut self) -> Result<Config> {
        if let Ok(v) = std::env::var("DKIT_BUDGET") {
            self.budgets = Budgets::uniform(parse_count("DKIT_BUDGET", &v)?);
        }
        Ok(self)
    }

    /// Install the Witt guards globally.
    pub fn apply_guards(&self) {
        let (p, n) = witt_guard();
        set_witt_guard(self.max_p.unwrap_or(p), self.max_n.unwrap_or(n));
    }
}
