//! Non-stationary systems: a schedule assigns a function system to every
//! level `ℓ ≥ 1`, and the backward trajectory `𝓕_1 ∘ 𝓕_2 ∘ ⋯ ∘ 𝓕_ℓ (F_0)`
//! converges when `Σ_ℓ Π_{j≤ℓ} Lip(𝓕_j)` is finite.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hmodule::{decimation_slack, PointSet};
use crate::ifs::{hutchinson, invariant_ball, sample_rng, Hifs, InvariantBall};

/// Which family is active at a given level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleRule {
    /// The same family at every level.
    Stationary(usize),
    /// `(family, repeat)` blocks, cycled forever.
    BlockPeriodic(Vec<(usize, usize)>),
}

#[derive(Clone, Debug)]
pub struct Schedule {
    families: Vec<(String, Hifs)>,
    rule: ScheduleRule,
}

impl Schedule {
    pub fn new(families: Vec<(String, Hifs)>, rule: ScheduleRule) -> Result<Self> {
        let (_, first) = families
            .first()
            .ok_or_else(|| Error::InvalidArgument("schedule without families".into()))?;
        let (alg, k) = (first.algebra(), first.k());
        if let Some((name, _)) = families
            .iter()
            .find(|(_, f)| f.algebra() != alg || f.k() != k)
        {
            return Err(Error::Shape(format!(
                "family `{name}` does not share the algebra {alg} with k = {k}"
            )));
        }
        let used: Vec<usize> = match &rule {
            ScheduleRule::Stationary(i) => vec![*i],
            ScheduleRule::BlockPeriodic(blocks) => {
                if blocks.is_empty() {
                    return Err(Error::InvalidArgument("block schedule without blocks".into()));
                }
                if blocks.iter().any(|&(_, rep)| rep == 0) {
                    return Err(Error::InvalidArgument("block repeat counts must be positive".into()));
                }
                blocks.iter().map(|&(i, _)| i).collect()
            }
        };
        if let Some(&bad) = used.iter().find(|&&i| i >= families.len()) {
            return Err(Error::InvalidArgument(format!(
                "schedule refers to family #{bad} of {}",
                families.len()
            )));
        }
        Ok(Schedule { families, rule })
    }

    pub fn stationary(name: impl Into<String>, ifs: Hifs) -> Self {
        Schedule {
            families: vec![(name.into(), ifs)],
            rule: ScheduleRule::Stationary(0),
        }
    }

    /// Block schedule given by family names.
    pub fn blocks(families: Vec<(String, Hifs)>, blocks: &[(&str, usize)]) -> Result<Self> {
        let resolved = blocks
            .iter()
            .map(|&(name, rep)| {
                families
                    .iter()
                    .position(|(n, _)| n == name)
                    .map(|i| (i, rep))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(families, ScheduleRule::BlockPeriodic(resolved))
    }

    pub fn families(&self) -> &[(String, Hifs)] {
        &self.families
    }

    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    pub fn dim(&self) -> usize {
        self.families[0].1.dim()
    }

    /// Number of levels after which the rule repeats.
    pub fn period(&self) -> usize {
        match &self.rule {
            ScheduleRule::Stationary(_) => 1,
            ScheduleRule::BlockPeriodic(blocks) => blocks.iter().map(|&(_, r)| r).sum(),
        }
    }

    /// Index of the family active at `level` (levels start at 1).
    pub fn family_index(&self, level: usize) -> usize {
        assert!(level >= 1, "levels start at 1");
        match &self.rule {
            ScheduleRule::Stationary(i) => *i,
            ScheduleRule::BlockPeriodic(blocks) => {
                let mut pos = (level - 1) % self.period();
                for &(i, rep) in blocks {
                    if pos < rep {
                        return i;
                    }
                    pos -= rep;
                }
                unreachable!("position is reduced modulo the period")
            }
        }
    }

    pub fn lookup(&self, level: usize) -> &Hifs {
        &self.families[self.family_index(level)].1
    }

    fn used_families(&self) -> Vec<&Hifs> {
        let mut idx: Vec<usize> = match &self.rule {
            ScheduleRule::Stationary(i) => vec![*i],
            ScheduleRule::BlockPeriodic(b) => b.iter().map(|&(i, _)| i).collect(),
        };
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(|i| &self.families[i].1).collect()
    }

    /// Invariant ball for every map of every family the rule uses.
    pub fn invariant_ball(&self) -> Result<InvariantBall> {
        invariant_ball(self.used_families().into_iter().flat_map(|f| f.maps()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Partial products `Π_{j≤ℓ} Lip(𝓕_j)` and the resulting series bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SummabilityReport {
    pub horizon: usize,
    /// `Lip(𝓕_ℓ)` for `ℓ = 1..=horizon`.
    pub level_lipschitz: Vec<f64>,
    /// `Π_{j≤ℓ} Lip(𝓕_j)` for `ℓ = 1..=horizon`.
    pub partial_products: Vec<f64>,
    pub partial_sum: f64,
    /// Product of the constants over one period of the rule.
    pub period_product: Option<f64>,
    /// `Σ_{ℓ>horizon} Π_{j≤ℓ} Lip(𝓕_j)`, exact for periodic rules.
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
}

impl SummabilityReport {
    /// `partial_sum + tail_bound` when the tail is known.
    pub fn total_bound(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.partial_sum + t)
    }

    /// `Π_{j≤ℓ} Lip(𝓕_j)`, with the empty product 1 at `ℓ = 0`.
    pub fn product(&self, level: usize) -> f64 {
        if level == 0 {
            1.0
        } else {
            self.partial_products[level - 1]
        }
    }
}

pub fn summability_report(s: &Schedule, horizon: usize) -> Result<SummabilityReport> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let lips: Option<Vec<f64>> = s.families.iter().map(|(_, f)| f.h()).collect();
    let Some(lips) = lips else {
        return Ok(SummabilityReport {
            horizon,
            level_lipschitz: Vec::new(),
            partial_products: Vec::new(),
            partial_sum: f64::NAN,
            period_product: None,
            tail_bound: None,
            verdict: Verdict::Inconclusive,
        });
    };
    let lip_at = |level: usize| lips[s.family_index(level)];
    let level_lipschitz: Vec<f64> = (1..=horizon).map(lip_at).collect();
    let mut partial_products = Vec::with_capacity(horizon);
    let mut prod = 1.0;
    for &l in &level_lipschitz {
        prod *= l;
        partial_products.push(prod);
    }
    let partial_sum = partial_products.iter().sum();

    let period = s.period();
    let period_product: f64 = (1..=period).map(lip_at).product();
    let all_contractive = s.used_families().iter().all(|f| f.h().is_some_and(|h| h < 1.0));

    // p_{ℓ+P} = ρ p_ℓ, so the tail is one period of terms over (1 − ρ)
    let tail_bound = (period_product < 1.0).then(|| {
        let mut p = prod;
        let mut window = 0.0;
        for level in horizon + 1..=horizon + period {
            p *= lip_at(level);
            window += p;
        }
        window / (1.0 - period_product)
    });
    let verdict = if period_product >= 1.0 {
        Verdict::Divergent
    } else if all_contractive {
        Verdict::Convergent
    } else {
        Verdict::Inconclusive
    };
    Ok(SummabilityReport {
        horizon,
        level_lipschitz,
        partial_products,
        partial_sum,
        period_product: Some(period_product),
        tail_bound,
        verdict,
    })
}

/// Certified data of a backward run.
#[derive(Clone, Debug, PartialEq)]
pub struct BackwardReport {
    pub depth: usize,
    /// `Π_{j≤depth} Lip(𝓕_j)`.
    pub product: f64,
    /// Diameter of the invariant ball, `2r`.
    pub diameter: f64,
    /// Decimation error carried to level 1, `Σ_ℓ slack·Π_{j<ℓ} Lip(𝓕_j)`.
    pub slack: f64,
    /// `product·diameter + slack`.
    pub tail_bound: f64,
    /// Largest norm over the initial, intermediate and final sets.
    pub max_norm: f64,
    pub ball: InvariantBall,
    pub points: usize,
}

fn check_convergent(s: &Schedule, depth: usize) -> Result<(SummabilityReport, InvariantBall)> {
    let report = summability_report(s, depth.max(1))?;
    if report.verdict != Verdict::Convergent {
        return Err(Error::Precondition(format!(
            "summability verdict is {}",
            report.verdict.as_str()
        )));
    }
    Ok((report, s.invariant_ball()?))
}

/// `Ψ_depth(F_0)`: applies `𝓕_depth` first and `𝓕_1` last, decimating at
/// `cell` after every level.
pub fn backward_attractor_sets(
    s: &Schedule,
    f0: &PointSet,
    depth: usize,
    cell: f64,
) -> Result<(PointSet, BackwardReport)> {
    if f0.is_empty() {
        return Err(Error::EmptySet);
    }
    if f0.dim() != s.dim() {
        return Err(Error::Shape(format!(
            "initial set of dimension {} for a schedule of dimension {}",
            f0.dim(),
            s.dim()
        )));
    }
    let (summary, ball) = check_convergent(s, depth)?;
    let start_norm = f0.max_norm();
    if start_norm > ball.r * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::Precondition(format!(
            "initial set reaches norm {start_norm}, outside the invariant ball of radius {}",
            ball.r
        )));
    }
    let step_slack = decimation_slack(cell, s.dim());
    let mut current = f0.clone();
    let mut max_norm = start_norm;
    for level in (1..=depth).rev() {
        current = hutchinson(s.lookup(level), &current, cell)?;
        max_norm = max_norm.max(current.max_norm());
    }
    let slack = (1..=depth).map(|l| step_slack * summary.product(l - 1)).sum();
    let product = if depth == 0 { 1.0 } else { summary.product(depth) };
    let diameter = 2.0 * ball.r;
    let report = BackwardReport {
        depth,
        product,
        diameter,
        slack,
        tail_bound: product * diameter + slack,
        max_norm,
        ball,
        points: current.len(),
    };
    Ok((current, report))
}

/// Smallest depth whose truncation error `Π_{j≤depth} Lip(𝓕_j)·2r` is at
/// most `target`.
pub fn depth_for_tolerance(s: &Schedule, target: f64, max_depth: usize) -> Result<usize> {
    let (summary, ball) = check_convergent(s, max_depth)?;
    let diameter = 2.0 * ball.r;
    (0..=max_depth)
        .find(|&d| summary.product(d) * diameter <= target)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no depth up to {max_depth} reaches truncation error {target}"
            ))
        })
}

/// Distance bound of [`backward_attractor_points`] output from the attractor.
pub fn backward_points_tolerance(s: &Schedule, depth: usize) -> Result<f64> {
    let (summary, ball) = check_convergent(s, depth)?;
    let product = if depth == 0 { 1.0 } else { summary.product(depth) };
    Ok(product * ball.r)
}

/// Stochastic backward trajectory: every sample draws one map per level and
/// evaluates `f_{i_1,1} ∘ ⋯ ∘ f_{i_depth,depth}` at the origin.
pub fn backward_attractor_points(
    s: &Schedule,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<PointSet> {
    check_convergent(s, depth)?;
    let dim = s.dim();
    let data: Vec<f64> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let mut x = vec![0.0; dim];
            let mut y = vec![0.0; dim];
            for level in (1..=depth).rev() {
                let maps = s.lookup(level).maps();
                maps[rng.gen_range(0..maps.len())].eval_into(&x, &mut y);
                std::mem::swap(&mut x, &mut y);
            }
            x
        })
        .collect();
    Ok(PointSet::new(dim, data)?.canonical())
}
