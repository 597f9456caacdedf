//! Finite-m runs of the zigzag lower-bound constructions.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::bridge::{factorial, n_numbers, NMode};
use crate::factorize::{SearchConfig, SignSequence, Variant};
use crate::permcore::Partition;
use crate::zigzag::{build_component_chain, build_kmixed_cover, build_standard_universal, chain_types, count_for_signs};
use crate::{HurwitzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentFamily {
    /// Component chains; sum over chain orders of the minimum over simple splittings.
    SimpleSplitting,
    /// The standard universally monotone cover; minimum over all splittings.
    ArbitrarySplitting,
    /// The k-mixed gluing over a base type; minimum over all splittings.
    Kmixed,
}

impl ExperimentFamily {
    /// Coefficient `c` of the reference curve `c·m·log m`.
    fn curve_factor(self) -> f64 {
        match self {
            ExperimentFamily::ArbitrarySplitting => 1.0,
            ExperimentFamily::SimpleSplitting => 2.0,
            ExperimentFamily::Kmixed => 6.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ExperimentFamily::SimpleSplitting => "simple-splitting",
            ExperimentFamily::ArbitrarySplitting => "arbitrary-splitting",
            ExperimentFamily::Kmixed => "kmixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub family: ExperimentFamily,
    pub m_min: usize,
    pub m_max: usize,
    /// Offset in the k-mixed bound `(m − m₀)!⁴·(2m)!`.
    pub m0: usize,
    /// Base type of the k-mixed family.
    pub base_lambda: Partition,
    pub base_mu: Partition,
    pub search: SearchConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    pub m: usize,
    pub family: ExperimentFamily,
    pub count: u64,
    /// `ln(count)`; absent when the count is zero.
    pub log_count: Option<f64>,
    pub zero_count: bool,
    pub reference_curve: f64,
    /// The finite lower bound the construction promises.
    pub bound: u64,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentTable {
    pub family: ExperimentFamily,
    pub rows: Vec<ExperimentRow>,
    /// Set when a row hit a resource limit; later rows were not attempted.
    pub truncated: Option<String>,
}

fn saturating_factorial(n: usize) -> u64 {
    if n <= 20 {
        factorial(n as u32)
    } else {
        u64::MAX
    }
}

fn bound(cfg: &ExperimentConfig, m: usize) -> u64 {
    let f = saturating_factorial(m);
    match cfg.family {
        ExperimentFamily::ArbitrarySplitting => f,
        ExperimentFamily::SimpleSplitting => f.saturating_mul(f),
        ExperimentFamily::Kmixed => {
            let g = saturating_factorial(m.saturating_sub(cfg.m0));
            g.saturating_pow(4).saturating_mul(saturating_factorial(2 * m))
        }
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for i in 0..m {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}

fn simple_splitting_count(m: usize, cfg: &SearchConfig) -> Result<u64> {
    let mut seen = BTreeSet::new();
    let mut total = 0u64;
    for order in permutations(m) {
        let Ok(types) = chain_types(&order, true) else { continue };
        let plain = build_component_chain(&types, &order, None)?.cover;
        if !seen.insert(plain.cover_id()) {
            continue;
        }
        let r = plain.r();
        cfg.check(plain.degree() as usize, r)?;
        let mut best = u64::MAX;
        for s in 0..=r {
            let built = build_component_chain(&types, &order, Some(s))?;
            let n = count_for_signs(&built.cover, &SignSequence::simple(r, s), Variant::RealMonotone, cfg)?;
            best = best.min(n.unwrap_or(0));
        }
        total += best;
    }
    Ok(total)
}

fn row_count(cfg: &ExperimentConfig, m: usize) -> Result<u64> {
    let search = &cfg.search;
    match cfg.family {
        ExperimentFamily::SimpleSplitting => simple_splitting_count(m, search),
        ExperimentFamily::ArbitrarySplitting => {
            let cover = build_standard_universal(m, 0)?;
            search.check(cover.degree() as usize, cover.r())?;
            Ok(n_numbers(&cover, NMode::PerSequence, search)?.minimum)
        }
        ExperimentFamily::Kmixed => {
            let km = build_kmixed_cover(&cfg.base_lambda, &cfg.base_mu, &cfg.base_lambda, &cfg.base_mu, 0, m)?;
            search.check(km.cover.degree() as usize, km.cover.r())?;
            Ok(n_numbers(&km.cover, NMode::KMixed(km.k), search)?.minimum)
        }
    }
}

/// Runs `m = m_min..=m_max`. A resource limit ends the table early with a
/// truncation marker; any other error aborts.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentTable> {
    if cfg.m_min == 0 {
        return Err(HurwitzError::InvalidInput("m starts at 1; the constructions need m ≥ 1".into()));
    }
    if cfg.m_max < cfg.m_min {
        return Err(HurwitzError::InvalidInput(format!("m range {}..={} is empty", cfg.m_min, cfg.m_max)));
    }
    let mut rows = Vec::new();
    let mut truncated = None;
    for m in cfg.m_min..=cfg.m_max {
        let start = Instant::now();
        let count = match row_count(cfg, m) {
            Ok(c) => c,
            Err(HurwitzError::ResourceLimit(msg)) => {
                truncated = Some(format!("m = {m}: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let mf = m as f64;
        rows.push(ExperimentRow {
            m,
            family: cfg.family,
            count,
            log_count: (count > 0).then(|| (count as f64).ln()),
            zero_count: count == 0,
            reference_curve: cfg.family.curve_factor() * mf * mf.ln(),
            bound: bound(cfg, m),
            runtime_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(ExperimentTable { family: cfg.family, rows, truncated })
}

impl ExperimentTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,family,count,log_count,zero_count,reference_curve,bound,runtime_ms\n");
        for r in &self.rows {
            let log = r.log_count.map(|x| format!("{x:.6}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{log},{},{:.6},{},{}",
                r.m,
                r.family.name(),
                r.count,
                r.zero_count,
                r.reference_curve,
                r.bound,
                r.runtime_ms
            );
        }
        if let Some(t) = &self.truncated {
            let _ = writeln!(out, "# truncated: {t}");
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("family {}\n", self.family.name());
        let _ = writeln!(out, "{:>3} {:>12} {:>10} {:>10} {:>12} {:>10}", "m", "count", "log", "curve", "bound", "ms");
        for r in &self.rows {
            let log = match r.log_count {
                Some(x) => format!("{x:.4}"),
                None => "zero".into(),
            };
            let _ = writeln!(
                out,
                "{:>3} {:>12} {:>10} {:>10.4} {:>12} {:>10}",
                r.m, r.count, log, r.reference_curve, r.bound, r.runtime_ms
            );
        }
        if let Some(t) = &self.truncated {
            let _ = writeln!(out, "truncated at {t}");
        }
        out
    }
}
