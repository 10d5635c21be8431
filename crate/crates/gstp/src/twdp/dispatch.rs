//! Routing an instance to the first solver whose caps it meets.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use super::{decide_tw, TreeDecomposition, TwConfig, TwError};
use crate::fnilp::{decide_by_fracture_with, FnConfig, FnError};
use crate::instance::GstpInstance;
use crate::oracle::{solve_exact, OracleConfig, OracleResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    TwDp,
    FnIlp,
    Oracle,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::TwDp => "twdp",
            Branch::FnIlp => "fnilp",
            Branch::Oracle => "oracle",
        })
    }
}

impl FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "twdp" => Ok(Branch::TwDp),
            "fnilp" => Ok(Branch::FnIlp),
            "oracle" => Ok(Branch::Oracle),
            other => Err(format!("unknown solver '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispatchConfig {
    pub order: Vec<Branch>,
    pub tw: TwConfig,
    pub fnilp: FnConfig,
    pub oracle: OracleConfig,
}

impl Default for DispatchConfig {
    fn default() -> Self {
        DispatchConfig {
            order: vec![Branch::TwDp, Branch::FnIlp, Branch::Oracle],
            tw: TwConfig::default(),
            fnilp: FnConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error("no solver applies: {0}")]
    NoSolver(String),
    #[error("expected a single terminal set, found {0}")]
    NotStp(usize),
    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },
}

impl DispatchConfig {
    /// Applies `key value` lines; `#` starts a comment.
    pub fn apply(&mut self, text: &str) -> Result<(), DispatchError> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| DispatchError::Config { line: k + 1, msg };
            let (key, value) =
                line.split_once(char::is_whitespace).ok_or_else(|| err(format!("missing value in '{line}'")))?;
            self.set(key, value.trim()).map_err(err)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = || value.parse::<usize>().map_err(|_| format!("'{value}' is not a number for {key}"));
        match key {
            "order" => {
                self.order = value.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            }
            "twdp.max_demand" => self.tw.max_total_demand = num()?,
            "twdp.max_width" => self.tw.max_width = num()?,
            "twdp.exact_cap" => self.tw.exact_cap = num()?,
            "fnilp.max_modulator" => self.fnilp.max_modulator = num()?,
            "fnilp.max_terminals_in_s" => self.fnilp.max_terminals_in_s = num()?,
            "oracle.edge_budget" => self.oracle.edge_budget = num()?,
            "oracle.demand_budget" => self.oracle.demand_budget = num()?,
            "oracle.time_ms" => self.oracle.time_budget = Some(Duration::from_millis(num()? as u64)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }
}

/// Tries the solvers in `cfg.order`; the first one within its caps decides.
pub fn dispatch(inst: &GstpInstance, cfg: &DispatchConfig) -> Result<(bool, Branch), DispatchError> {
    dispatch_with_td(inst, None, cfg)
}

/// [`dispatch`] handing `td` to the tree-decomposition solver.
pub fn dispatch_with_td(
    inst: &GstpInstance,
    td: Option<&TreeDecomposition>,
    cfg: &DispatchConfig,
) -> Result<(bool, Branch), DispatchError> {
    let mut skipped = Vec::new();
    for &branch in &cfg.order {
        let outcome = match branch {
            Branch::TwDp => match decide_tw(inst, td, &cfg.tw) {
                Ok(o) => Some(o.feasible),
                Err(TwError::Cap { what, value, cap }) => {
                    skipped.push(format!("twdp: {what} {value} > {cap}"));
                    None
                }
                Err(e) => return Err(DispatchError::NoSolver(e.to_string())),
            },
            Branch::FnIlp => match decide_by_fracture_with(inst, &cfg.fnilp) {
                Ok(r) => Some(r.feasible),
                Err(FnError::ScaleCap { what, value, cap }) => {
                    skipped.push(format!("fnilp: {what} {value} > {cap}"));
                    None
                }
                Err(e) => return Err(DispatchError::NoSolver(e.to_string())),
            },
            Branch::Oracle => {
                let r = solve_exact(inst, &cfg.oracle);
                if let OracleResult::BudgetExceeded(why) = &r {
                    skipped.push(format!("oracle: {why}"));
                }
                r.decision()
            }
        };
        if let Some(d) = outcome {
            return Ok((d, branch));
        }
    }
    Err(DispatchError::NoSolver(skipped.join("; ")))
}

/// [`dispatch`] for instances with exactly one terminal set.
pub fn stp_dispatch(inst: &GstpInstance, cfg: &DispatchConfig) -> Result<(bool, Branch), DispatchError> {
    if inst.terminal_count() != 1 {
        return Err(DispatchError::NotStp(inst.terminal_count()));
    }
    dispatch(inst, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::families::{complete, path, wall};
    use crate::instance::from_stp;
    use crate::oracle::decide;

    #[test]
    fn routes_by_caps() {
        let cfg = DispatchConfig::default();
        // Path with demand 6: twdp is over its demand cap, fnilp decides.
        let inst = from_stp(path(4), vec![0, 3], 6).unwrap();
        assert_eq!(stp_dispatch(&inst, &cfg), Ok((false, Branch::FnIlp)));
        let inst = from_stp(complete(4), vec![0, 1, 2, 3], 2).unwrap();
        assert_eq!(stp_dispatch(&inst, &cfg), Ok((true, Branch::TwDp)));
    }

    #[test]
    fn every_branch_agrees_on_tiny_instances() {
        for d in 1..=3 {
            let inst = from_stp(complete(4), vec![0, 2], d).unwrap();
            let expected = decide(&inst);
            for b in [Branch::TwDp, Branch::FnIlp, Branch::Oracle] {
                let cfg = DispatchConfig { order: vec![b], ..DispatchConfig::default() };
                assert_eq!(dispatch(&inst, &cfg), Ok((expected, b)));
            }
        }
    }

    #[test]
    fn huge_instance_is_refused() {
        let inst = from_stp(wall(6), (0..12).collect(), 1).unwrap();
        let r = stp_dispatch(&inst, &DispatchConfig::default());
        assert!(matches!(r, Err(DispatchError::NoSolver(_))), "{r:?}");
    }

    #[test]
    fn config_lines() {
        let mut cfg = DispatchConfig::default();
        cfg.apply("# comment\norder oracle, twdp\ntwdp.max_width 3\n").unwrap();
        assert_eq!(cfg.order, vec![Branch::Oracle, Branch::TwDp]);
        assert_eq!(cfg.tw.max_width, 3);
        assert_eq!(
            cfg.apply("\n\nbogus 1\n"),
            Err(DispatchError::Config { line: 3, msg: "unknown key 'bogus'".into() })
        );
    }
}
