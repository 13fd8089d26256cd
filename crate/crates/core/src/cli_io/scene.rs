//! Scene files: JSON schema, parsing and validation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{AlgebraKind, Kind, Paravector};
use crate::error::{Error, Result};
use crate::hmodule::{HMatrix, HVector};
use crate::ifs::{Hifs, MapDesc, Monomial, Polynomial, SandwichComponent, SandwichTerm};
use crate::trajectory::Schedule;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub algebra: AlgebraSpec,
    #[serde(default = "default_k")]
    pub k: usize,
    pub families: BTreeMap<String, Vec<MapSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub engine: EngineSpec,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    /// `clifford-pi`, `quaternion` or `real`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

/// A paravector either as a raw coefficient array or as
/// `scale · coeffs / |coeffs|` when `normalize` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParavectorSpec {
    Coeffs(Vec<f64>),
    Built {
        coeffs: Vec<f64>,
        #[serde(default)]
        normalize: bool,
        #[serde(default = "default_scale")]
        scale: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    /// `ξ ↦ π(Hξ) + b` with `h` given row by row.
    RightAffine {
        h: Vec<Vec<ParavectorSpec>>,
        b: Vec<ParavectorSpec>,
    },
    Sandwich {
        components: Vec<SandwichSpec>,
    },
    /// Real kind only. `assume_contractive` is the asserted Lipschitz
    /// constant; `domain` is the box used for the sampled estimate.
    ScalarPoly {
        components: Vec<Vec<MonomialSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assume_contractive: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Vec<[f64; 2]>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichSpec {
    pub terms: Vec<TermSpec>,
    pub translation: ParavectorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub left: ParavectorSpec,
    #[serde(default)]
    pub source: usize,
    pub right: ParavectorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub coeff: f64,
    pub powers: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Stationary(String),
    /// `(family, repeat)` pairs, cycled.
    Blocks(Vec<(String, usize)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Deterministic,
    Chaos,
    BackwardSets,
    BackwardPoints,
}

impl Mode {
    pub fn is_stochastic(self) -> bool {
        matches!(self, Mode::Chaos | Mode::BackwardPoints)
    }

    pub fn is_backward(self) -> bool {
        matches!(self, Mode::BackwardSets | Mode::BackwardPoints)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSpec {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_cell")]
    pub cell: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

impl Default for EngineSpec {
    fn default() -> Self {
        EngineSpec {
            mode: default_mode(),
            tol: default_tol(),
            cell: default_cell(),
            samples: default_samples(),
            burn_in: None,
            depth: None,
            seed: None,
            threads: None,
            max_iter: default_max_iter(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum OutputSpec {
    /// Density image of a two-axis projection.
    Pgm {
        axes: [usize; 2],
        #[serde(default = "default_side")]
        width: usize,
        #[serde(default = "default_side")]
        height: usize,
        /// `[xmin, xmax, ymin, ymax]`; defaults to the invariant ball's box.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<[f64; 4]>,
        path: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
    /// Point cloud, optionally restricted to some axes.
    Csv {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axes: Option<Vec<usize>>,
        path: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
}

impl OutputSpec {
    pub fn path(&self) -> &str {
        match self {
            OutputSpec::Pgm { path, .. } | OutputSpec::Csv { path, .. } => path,
        }
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            OutputSpec::Pgm { depth, .. } | OutputSpec::Csv { depth, .. } => *depth,
        }
    }
}

fn default_k() -> usize {
    1
}
fn default_scale() -> f64 {
    1.0
}
fn default_mode() -> Mode {
    Mode::Deterministic
}
fn default_tol() -> f64 {
    1e-3
}
fn default_cell() -> f64 {
    1e-3
}
fn default_samples() -> usize {
    100_000
}
fn default_max_iter() -> usize {
    10_000
}
fn default_side() -> usize {
    512
}

/// Parses and validates a scene.
pub fn parse_scene(text: &str) -> Result<SceneConfig> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let cfg = scene_from_value(value)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Deserializes without semantic validation; schema errors name the field.
pub fn scene_from_value(value: serde_json::Value) -> Result<SceneConfig> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        Error::scene(field, e.into_inner().to_string())
    })
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl SceneConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene values are always serializable")
    }

    pub fn algebra_kind(&self) -> Result<AlgebraKind> {
        AlgebraKind::from_name(&self.algebra.kind, self.algebra.n)
            .map_err(|e| Error::scene("algebra", e.to_string()))
    }

    /// Flat dimension `(n + 1)·k`.
    pub fn dim(&self) -> Result<usize> {
        Ok(self.algebra_kind()?.paravector_len() * self.k)
    }

    /// Builds every family, in name order.
    pub fn families(&self) -> Result<Vec<(String, Hifs)>> {
        let alg = self.algebra_kind()?;
        if self.k == 0 {
            return Err(Error::scene("k", "must be at least 1"));
        }
        if self.families.is_empty() {
            return Err(Error::scene("families", "no families given"));
        }
        self.families
            .iter()
            .map(|(name, maps)| {
                let field = format!("families.{name}");
                if maps.is_empty() {
                    return Err(Error::scene(field, "family has no maps"));
                }
                let descs = maps
                    .iter()
                    .enumerate()
                    .map(|(i, m)| build_map(m, alg, self.k, &format!("{field}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let ifs = Hifs::new(descs).map_err(|e| Error::scene(&field, e.to_string()))?;
                Ok((name.clone(), ifs))
            })
            .collect()
    }

    pub fn schedule(&self) -> Result<Schedule> {
        let families = self.families()?;
        let resolve = |name: &str, field: String| {
            if self.families.contains_key(name) {
                Ok(())
            } else {
                Err(Error::scene(field, format!("unknown family `{name}`")))
            }
        };
        match &self.schedule {
            None => {
                if families.len() != 1 {
                    return Err(Error::scene(
                        "schedule",
                        "required when more than one family is given",
                    ));
                }
                let (name, ifs) = families.into_iter().next().expect("one family");
                Ok(Schedule::stationary(name, ifs))
            }
            Some(ScheduleSpec::Stationary(name)) => {
                resolve(name, "schedule.stationary".into())?;
                let (name, ifs) = families
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .expect("resolved above");
                Ok(Schedule::stationary(name, ifs))
            }
            Some(ScheduleSpec::Blocks(blocks)) => {
                for (i, (name, rep)) in blocks.iter().enumerate() {
                    resolve(name, format!("schedule.blocks[{i}]"))?;
                    if *rep == 0 {
                        return Err(Error::scene(
                            format!("schedule.blocks[{i}]"),
                            "repeat count must be positive",
                        ));
                    }
                }
                let named: Vec<(&str, usize)> =
                    blocks.iter().map(|(n, r)| (n.as_str(), *r)).collect();
                Schedule::blocks(families, &named).map_err(|e| Error::scene("schedule", e.to_string()))
            }
        }
    }

    /// Checks everything a run needs except the engine preconditions that
    /// depend on computed constants.
    pub fn validate(&self) -> Result<()> {
        let schedule = self.schedule()?;
        let dim = schedule.dim();
        let e = &self.engine;
        if !(e.tol > 0.0 && e.tol.is_finite()) {
            return Err(Error::scene("engine.tol", "must be positive"));
        }
        if !(e.cell > 0.0 && e.cell.is_finite()) {
            return Err(Error::scene("engine.cell", "must be positive"));
        }
        if e.mode.is_stochastic() {
            if e.seed.is_none() {
                return Err(Error::scene("engine.seed", "required for stochastic modes"));
            }
            if e.samples == 0 {
                return Err(Error::scene("engine.samples", "must be at least 1"));
            }
        }
        if e.threads == Some(0) {
            return Err(Error::scene("engine.threads", "must be at least 1"));
        }
        if let (Some(ScheduleSpec::Blocks(_)), false) = (&self.schedule, e.mode.is_backward()) {
            return Err(Error::scene(
                "engine.mode",
                "block schedules run with backward-sets or backward-points",
            ));
        }
        for (i, out) in self.outputs.iter().enumerate() {
            let field = format!("outputs[{i}]");
            if out.path().is_empty() {
                return Err(Error::scene(format!("{field}.path"), "empty path"));
            }
            if out.depth().is_some() && !e.mode.is_backward() {
                return Err(Error::scene(
                    format!("{field}.depth"),
                    "depth applies to backward modes only",
                ));
            }
            match out {
                OutputSpec::Pgm {
                    axes,
                    width,
                    height,
                    window,
                    ..
                } => {
                    check_axes(axes, dim, &format!("{field}.axes"))?;
                    if *width == 0 || *height == 0 {
                        return Err(Error::scene(field, "width and height must be positive"));
                    }
                    if let Some([x0, x1, y0, y1]) = window {
                        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
                        if !ok {
                            return Err(Error::scene(format!("{field}.window"), "degenerate window"));
                        }
                    }
                }
                OutputSpec::Csv { axes, .. } => {
                    if let Some(axes) = axes {
                        if axes.is_empty() {
                            return Err(Error::scene(format!("{field}.axes"), "no axes"));
                        }
                        check_axes(axes, dim, &format!("{field}.axes"))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_axes(axes: &[usize], dim: usize, field: &str) -> Result<()> {
    match axes.iter().find(|&&a| a >= dim) {
        Some(a) => Err(Error::scene(
            field,
            format!("axis {a} out of range for dimension {dim}"),
        )),
        None => Ok(()),
    }
}

fn build_paravector(p: &ParavectorSpec, alg: AlgebraKind, field: &str) -> Result<Paravector> {
    let (coeffs, normalize, scale) = match p {
        ParavectorSpec::Coeffs(c) => (c, false, 1.0),
        ParavectorSpec::Built {
            coeffs,
            normalize,
            scale,
        } => (coeffs, *normalize, *scale),
    };
    if coeffs.len() != alg.paravector_len() {
        return Err(Error::scene(
            field,
            format!(
                "{} coefficients, expected {} for {alg}",
                coeffs.len(),
                alg.paravector_len()
            ),
        ));
    }
    if coeffs.iter().any(|c| !c.is_finite()) || !scale.is_finite() {
        return Err(Error::scene(field, "non-finite coefficient"));
    }
    let mut v = Paravector::new(alg, coeffs.clone())?;
    if normalize {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::scene(field, "cannot normalize the zero paravector"));
        }
        v = v.scale(1.0 / n);
    }
    Ok(v.scale(scale))
}

fn build_map(m: &MapSpec, alg: AlgebraKind, k: usize, field: &str) -> Result<MapDesc> {
    let wrap = |e: Error| Error::scene(field, e.to_string());
    match m {
        MapSpec::RightAffine { h, b } => {
            if h.len() != k {
                return Err(Error::scene(format!("{field}.h"), format!("{} rows, expected {k}", h.len())));
            }
            let mut entries = Vec::with_capacity(k * k);
            for (i, row) in h.iter().enumerate() {
                if row.len() != k {
                    return Err(Error::scene(
                        format!("{field}.h[{i}]"),
                        format!("{} entries, expected {k}", row.len()),
                    ));
                }
                for (j, p) in row.iter().enumerate() {
                    entries.push(build_paravector(p, alg, &format!("{field}.h[{i}][{j}]"))?);
                }
            }
            if b.len() != k {
                return Err(Error::scene(format!("{field}.b"), format!("{} entries, expected {k}", b.len())));
            }
            let b = b
                .iter()
                .enumerate()
                .map(|(i, p)| build_paravector(p, alg, &format!("{field}.b[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let h = HMatrix::new(k, entries).map_err(wrap)?;
            MapDesc::right_affine(h, HVector::from_entries(&b).map_err(wrap)?).map_err(wrap)
        }
        MapSpec::Sandwich { components } => {
            if components.len() != k {
                return Err(Error::scene(
                    format!("{field}.components"),
                    format!("{} components, expected {k}", components.len()),
                ));
            }
            let comps = components
                .iter()
                .enumerate()
                .map(|(c, comp)| {
                    let cf = format!("{field}.components[{c}]");
                    let terms = comp
                        .terms
                        .iter()
                        .enumerate()
                        .map(|(t, term)| {
                            let tf = format!("{cf}.terms[{t}]");
                            if term.source >= k {
                                return Err(Error::scene(
                                    format!("{tf}.source"),
                                    format!("entry {} of a {k}-tuple", term.source),
                                ));
                            }
                            Ok(SandwichTerm {
                                left: build_paravector(&term.left, alg, &format!("{tf}.left"))?,
                                source: term.source,
                                right: build_paravector(&term.right, alg, &format!("{tf}.right"))?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(SandwichComponent {
                        terms,
                        translation: build_paravector(&comp.translation, alg, &format!("{cf}.translation"))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            MapDesc::sandwich(comps).map_err(wrap)
        }
        MapSpec::ScalarPoly {
            components,
            assume_contractive,
            domain,
        } => {
            if alg.kind() != Kind::Real {
                return Err(Error::scene(field, "scalar_poly maps require the real kind"));
            }
            if components.len() != k {
                return Err(Error::scene(
                    format!("{field}.components"),
                    format!("{} components, expected {k}", components.len()),
                ));
            }
            let Some(s) = assume_contractive else {
                return Err(Error::scene(
                    format!("{field}.assume_contractive"),
                    "polynomial maps carry no certificate; assert a Lipschitz constant below 1",
                ));
            };
            if let Some(d) = domain {
                if d.len() != k || d.iter().any(|[lo, hi]| !(lo < hi)) {
                    return Err(Error::scene(format!("{field}.domain"), format!("expected {k} intervals [lo, hi] with lo < hi")));
                }
            }
            let polys = components
                .iter()
                .map(|terms| Polynomial {
                    terms: terms
                        .iter()
                        .map(|m| Monomial {
                            coeff: m.coeff,
                            powers: m.powers.clone(),
                        })
                        .collect(),
                })
                .collect();
            MapDesc::scalar_poly(polys, Some(*s)).map_err(|e| Error::scene(format!("{field}.assume_contractive"), e.to_string()))
        }
    }
}
