//! Hypercomplex contraction maps, their real-linear form, Lipschitz
//! certification, the Hutchinson operator and the stationary attractor
//! engines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clifford::{AlgebraKind, CliffordNumber, Paravector};
use crate::error::{Error, Result};
use crate::hmodule::{self, decimate, decimation_slack, dist_sq, norm, HMatrix, HVector, PointSet};

/// One term `a · ξ_source · b` of a sandwich component.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichTerm {
    pub left: Paravector,
    pub source: usize,
    pub right: Paravector,
}

/// `ξ ↦ Σ_m π(a_m ξ_{j_m} b_m) + c` for one output entry.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichComponent {
    pub terms: Vec<SandwichTerm>,
    pub translation: Paravector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: Vec<u32>,
}

/// Real polynomial in the `k` components of a point of `R^k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.powers
                    .iter()
                    .zip(x)
                    .fold(m.coeff, |acc, (&p, &v)| acc * v.powi(p as i32))
            })
            .sum()
    }
}

/// Symbolic description of a map on `A_{n+1}^k`.
#[derive(Clone, Debug, PartialEq)]
pub enum MapDesc {
    /// `ξ ↦ π(Hξ) + b`.
    RightAffine { h: HMatrix, b: HVector },
    /// Two-sided products, one component per output entry.
    Sandwich { components: Vec<SandwichComponent> },
    /// Polynomial maps on `R^k` (real kind only). Not linear, so they carry
    /// no certificate; `assumed_lipschitz` is the caller's contractivity claim.
    ScalarPoly {
        components: Vec<Polynomial>,
        assumed_lipschitz: Option<f64>,
    },
}

impl MapDesc {
    pub fn right_affine(h: HMatrix, b: HVector) -> Result<Self> {
        if h.algebra() != b.algebra() || h.k() != b.k() {
            return Err(Error::Shape(format!(
                "{}x{} matrix over {} with translation k = {} over {}",
                h.k(),
                h.k(),
                h.algebra(),
                b.k(),
                b.algebra()
            )));
        }
        Ok(MapDesc::RightAffine { h, b })
    }

    pub fn sandwich(components: Vec<SandwichComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Shape("sandwich map needs at least one component".into()))?;
        let algebra = first.translation.algebra();
        let k = components.len();
        for (i, c) in components.iter().enumerate() {
            let mut algebras = vec![c.translation.algebra()];
            for t in &c.terms {
                if t.source >= k {
                    return Err(Error::Shape(format!(
                        "component {i} reads entry {} of a {k}-tuple",
                        t.source
                    )));
                }
                algebras.push(t.left.algebra());
                algebras.push(t.right.algebra());
            }
            if let Some(bad) = algebras.into_iter().find(|a| *a != algebra) {
                return Err(Error::AlgebraMismatch(algebra.to_string(), bad.to_string()));
            }
        }
        Ok(MapDesc::Sandwich { components })
    }

    pub fn scalar_poly(components: Vec<Polynomial>, assumed_lipschitz: Option<f64>) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(Error::Shape("polynomial map needs at least one component".into()));
        }
        for (i, p) in components.iter().enumerate() {
            if let Some(m) = p.terms.iter().find(|m| m.powers.len() != k) {
                return Err(Error::Shape(format!(
                    "component {i} has a monomial with {} exponents, expected {k}",
                    m.powers.len()
                )));
            }
        }
        if let Some(s) = assumed_lipschitz {
            if !(s >= 0.0 && s < 1.0) {
                return Err(Error::NotContractive(format!(
                    "assumed Lipschitz constant {s} is not in [0, 1)"
                )));
            }
        }
        Ok(MapDesc::ScalarPoly {
            components,
            assumed_lipschitz,
        })
    }

    pub fn algebra(&self) -> AlgebraKind {
        match self {
            MapDesc::RightAffine { h, .. } => h.algebra(),
            MapDesc::Sandwich { components } => components[0].translation.algebra(),
            MapDesc::ScalarPoly { .. } => AlgebraKind::real(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            MapDesc::RightAffine { h, .. } => h.k(),
            MapDesc::Sandwich { components } => components.len(),
            MapDesc::ScalarPoly { components, .. } => components.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra().paravector_len() * self.k()
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, MapDesc::ScalarPoly { .. })
    }

    /// Evaluates the map symbolically through the algebra.
    pub fn apply(&self, xi: &HVector) -> Result<HVector> {
        if xi.algebra() != self.algebra() || xi.k() != self.k() {
            return Err(Error::Shape(format!(
                "map on k = {} over {} applied to k = {} over {}",
                self.k(),
                self.algebra(),
                xi.k(),
                xi.algebra()
            )));
        }
        match self {
            MapDesc::RightAffine { h, b } => {
                let images: Vec<Paravector> = h
                    .apply(xi)?
                    .iter()
                    .map(CliffordNumber::pi_project)
                    .collect();
                HVector::from_entries(&images)?.add(b)
            }
            MapDesc::Sandwich { components } => {
                let entries = xi.entries();
                let out = components
                    .iter()
                    .map(|c| {
                        let mut acc = c.translation.clone();
                        for t in &c.terms {
                            let prod = t.left.mul(&entries[t.source])?.mul(&t.right.to_clifford())?;
                            acc = acc.add(&prod.pi_project())?;
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>>>()?;
                HVector::from_entries(&out)
            }
            MapDesc::ScalarPoly { components, .. } => {
                let flat = components.iter().map(|p| p.eval(xi.flat())).collect();
                HVector::from_flat(AlgebraKind::real(), components.len(), flat)
            }
        }
    }
}

/// `x ↦ Mx + t` on flat coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RealAffine {
    dim: usize,
    matrix: Vec<f64>,
    translation: Vec<f64>,
}

impl RealAffine {
    pub fn new(dim: usize, matrix: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        if matrix.len() != dim * dim || translation.len() != dim {
            return Err(Error::Shape(format!(
                "affine map of dimension {dim} needs {} matrix entries and {dim} offsets",
                dim * dim
            )));
        }
        Ok(RealAffine {
            dim,
            matrix,
            translation,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major `D × D` matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.dim).map(|r| self.matrix[r * self.dim + c]).collect()
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[r * self.dim..(r + 1) * self.dim];
            *o = self.translation[r] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.apply_into(x, &mut out);
        out
    }

    fn linear(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[r * self.dim..(r + 1) * self.dim];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn linear_transposed(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (r, &yr) in y.iter().enumerate() {
            let row = &self.matrix[r * self.dim..(r + 1) * self.dim];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yr;
            }
        }
    }
}

/// Real-linear form of a linear map variant: column `c` is `f(e_c) − f(0)`.
pub fn realify(m: &MapDesc) -> Result<RealAffine> {
    if !m.is_linear() {
        return Err(Error::NotLinear(
            "polynomial maps have no exact affine form".into(),
        ));
    }
    let (alg, k, dim) = (m.algebra(), m.k(), m.dim());
    let origin = m.apply(&HVector::zero(alg, k))?.into_flat();
    let mut matrix = vec![0.0; dim * dim];
    for c in 0..dim {
        let mut unit = vec![0.0; dim];
        unit[c] = 1.0;
        let image = m.apply(&HVector::from_flat(alg, k, unit)?)?;
        for (r, (v, o)) in image.flat().iter().zip(&origin).enumerate() {
            matrix[r * dim + c] = v - o;
        }
    }
    RealAffine::new(dim, matrix, origin)
}

/// Largest singular value together with a maximizing right singular vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralNorm {
    pub value: f64,
    pub right_vector: Vec<f64>,
    pub iterations: usize,
}

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

fn power_iteration(r: &RealAffine, start: Vec<f64>) -> Result<SpectralNorm> {
    let dim = r.dim;
    let mut v = start;
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);
    let mut mv = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    let mut prev = f64::NAN;
    let mut delta = f64::INFINITY;
    for it in 1..=POWER_MAX_ITER {
        r.linear(&v, &mut mv);
        // Rayleigh quotient of MᵀM at the unit vector v
        let rayleigh = mv.iter().map(|x| x * x).sum::<f64>();
        r.linear_transposed(&mv, &mut w);
        let wn = norm(&w);
        if wn == 0.0 {
            return Ok(SpectralNorm {
                value: rayleigh.sqrt(),
                right_vector: v,
                iterations: it,
            });
        }
        delta = (rayleigh - prev).abs();
        if delta <= POWER_TOL * rayleigh.max(1.0) {
            return Ok(SpectralNorm {
                value: rayleigh.sqrt(),
                right_vector: v,
                iterations: it,
            });
        }
        prev = rayleigh;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    Err(Error::NonConvergence {
        iterations: POWER_MAX_ITER,
        delta,
    })
}

/// Top singular value of the linear part by power iteration on `MᵀM`.
///
/// The primary start vector is the normalized all-ones vector. A second
/// fixed start (golden-ratio sequence) guards against the first being
/// orthogonal to the top singular subspace; the larger result wins.
pub fn spectral_norm(r: &RealAffine) -> Result<SpectralNorm> {
    let dim = r.dim;
    if dim == 0 {
        return Ok(SpectralNorm {
            value: 0.0,
            right_vector: Vec::new(),
            iterations: 0,
        });
    }
    let golden = 0.618_033_988_749_894_9_f64;
    let alt: Vec<f64> = (1..=dim)
        .map(|i| (i as f64 * golden).fract() - 0.5 + 1e-3)
        .collect();
    let a = power_iteration(r, vec![1.0; dim])?;
    let b = power_iteration(r, alt)?;
    Ok(if b.value > a.value { b } else { a })
}

/// Exact Lipschitz constant of an affine map: its top singular value.
pub fn lipschitz_exact(r: &RealAffine) -> Result<f64> {
    spectral_norm(r).map(|s| s.value)
}

/// Sampled lower estimate of a Lipschitz constant; never a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub samples: usize,
    pub certified: bool,
}

/// Maximum of `d(f(x), f(y)) / d(x, y)` over random pairs in a box.
///
/// Half of the pairs are drawn independently, the other half as close
/// neighbours so the estimate approaches the local slope.
pub fn lipschitz_sampled(
    m: &MapDesc,
    bounds: &[(f64, f64)],
    samples: usize,
    seed: u64,
) -> Result<LipschitzEstimate> {
    if bounds.len() != m.dim() {
        return Err(Error::Shape(format!(
            "box of dimension {} for a map of dimension {}",
            bounds.len(),
            m.dim()
        )));
    }
    if let Some((lo, hi)) = bounds
        .iter()
        .find(|(lo, hi)| !(lo < hi && lo.is_finite() && hi.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "degenerate box side [{lo}, {hi}]"
        )));
    }
    let (alg, k) = (m.algebra(), m.k());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for s in 0..samples {
        let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        let y: Vec<f64> = if s % 2 == 0 {
            bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect()
        } else {
            x.iter()
                .zip(bounds)
                .map(|(&v, &(lo, hi))| {
                    let step = 1e-4 * (hi - lo);
                    (v + rng.gen_range(-step..=step)).clamp(lo, hi)
                })
                .collect()
        };
        let d = dist_sq(&x, &y).sqrt();
        if d == 0.0 {
            continue;
        }
        let fx = m.apply(&HVector::from_flat(alg, k, x)?)?;
        let fy = m.apply(&HVector::from_flat(alg, k, y)?)?;
        best = best.max(fx.metric(&fy)? / d);
    }
    Ok(LipschitzEstimate {
        value: best,
        samples,
        certified: false,
    })
}

/// How contractivity of a map is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contractivity {
    /// Exact top singular value of the affine form.
    Certified(f64),
    /// Claimed by the caller for a nonlinear map.
    Assumed(f64),
    Unknown,
}

impl Contractivity {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Contractivity::Certified(v) | Contractivity::Assumed(v) => Some(v),
            Contractivity::Unknown => None,
        }
    }
}

/// A map together with its fast evaluation path and Lipschitz data.
#[derive(Clone, Debug)]
pub struct IfsMap {
    desc: MapDesc,
    affine: Option<RealAffine>,
    lipschitz: Contractivity,
}

impl IfsMap {
    pub fn new(desc: MapDesc) -> Result<Self> {
        let (affine, lipschitz) = match &desc {
            MapDesc::ScalarPoly {
                assumed_lipschitz, ..
            } => (
                None,
                assumed_lipschitz.map_or(Contractivity::Unknown, Contractivity::Assumed),
            ),
            _ => {
                let r = realify(&desc)?;
                let lip = lipschitz_exact(&r)?;
                (Some(r), Contractivity::Certified(lip))
            }
        };
        Ok(IfsMap {
            desc,
            affine,
            lipschitz,
        })
    }

    pub fn desc(&self) -> &MapDesc {
        &self.desc
    }

    pub fn affine(&self) -> Option<&RealAffine> {
        self.affine.as_ref()
    }

    pub fn lipschitz(&self) -> Contractivity {
        self.lipschitz
    }

    pub fn dim(&self) -> usize {
        self.desc.dim()
    }

    /// Evaluates on flat coordinates.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match (&self.affine, &self.desc) {
            (Some(r), _) => r.apply_into(x, out),
            (None, MapDesc::ScalarPoly { components, .. }) => {
                for (o, p) in out.iter_mut().zip(components) {
                    *o = p.eval(x);
                }
            }
            (None, _) => unreachable!("linear maps are always realified"),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.eval_into(x, &mut out);
        out
    }

    /// `f(0)`, the translation part for affine maps.
    pub fn offset(&self) -> Vec<f64> {
        self.eval(&vec![0.0; self.dim()])
    }
}

/// A finite family of maps on `A_{n+1}^k`.
#[derive(Clone, Debug)]
pub struct Hifs {
    algebra: AlgebraKind,
    k: usize,
    maps: Vec<IfsMap>,
}

impl Hifs {
    pub fn new(descs: Vec<MapDesc>) -> Result<Self> {
        let first = descs
            .first()
            .ok_or_else(|| Error::InvalidArgument("a function system needs at least one map".into()))?;
        let (algebra, k) = (first.algebra(), first.k());
        for d in &descs {
            if d.algebra() != algebra || d.k() != k {
                return Err(Error::Shape(format!(
                    "maps over {algebra} with k = {k} mixed with {} with k = {}",
                    d.algebra(),
                    d.k()
                )));
            }
        }
        let maps = descs.into_iter().map(IfsMap::new).collect::<Result<_>>()?;
        Ok(Hifs { algebra, k, maps })
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.algebra.paravector_len() * self.k
    }

    pub fn maps(&self) -> &[IfsMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `max Lip(f_i)`, or `None` when some map has no known constant.
    pub fn h(&self) -> Option<f64> {
        self.maps
            .iter()
            .map(|m| m.lipschitz.value())
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
    }

    /// `h`, provided the system is contractive.
    pub fn contraction_factor(&self) -> Result<f64> {
        match self.h() {
            Some(h) if h < 1.0 => Ok(h),
            Some(h) => Err(Error::NotContractive(format!("max Lipschitz constant {h} >= 1"))),
            None => Err(Error::NotContractive(
                "a polynomial map has no certified or assumed Lipschitz constant".into(),
            )),
        }
    }

    pub fn invariant_ball(&self) -> Result<InvariantBall> {
        invariant_ball(self.maps.iter())
    }

    fn check_dim(&self, e: &PointSet) -> Result<()> {
        if e.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "point set of dimension {} for a system of dimension {}",
                e.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Radius data for a ball around the origin that every map sends into itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantBall {
    /// Largest Lipschitz constant.
    pub s: f64,
    /// Largest translation norm `‖f(0)‖`.
    pub m: f64,
    /// `M / (1 − s)`; any larger ball is invariant.
    pub r: f64,
    /// False when some constant was assumed rather than certified.
    pub certified: bool,
}

pub fn invariant_ball<'a>(maps: impl IntoIterator<Item = &'a IfsMap>) -> Result<InvariantBall> {
    let mut s = 0.0f64;
    let mut m = 0.0f64;
    let mut certified = true;
    let mut any = false;
    for map in maps {
        any = true;
        let lip = match map.lipschitz {
            Contractivity::Certified(v) => v,
            Contractivity::Assumed(v) => {
                certified = false;
                v
            }
            Contractivity::Unknown => {
                return Err(Error::NotContractive(
                    "invariant radius needs a Lipschitz constant for every map".into(),
                ))
            }
        };
        s = s.max(lip);
        m = m.max(norm(&map.offset()));
    }
    if !any {
        return Err(Error::InvalidArgument("no maps given".into()));
    }
    if s >= 1.0 {
        return Err(Error::NotContractive(format!("s = {s} >= 1")));
    }
    Ok(InvariantBall {
        s,
        m,
        r: m / (1.0 - s),
        certified,
    })
}

/// `(s, M, r)` for a list of linear maps.
pub fn invariant_radius(maps: &[MapDesc]) -> Result<InvariantBall> {
    if let Some(bad) = maps.iter().find(|m| !m.is_linear()) {
        return Err(Error::NotLinear(format!("{bad:?}")));
    }
    let realified = maps
        .iter()
        .cloned()
        .map(IfsMap::new)
        .collect::<Result<Vec<_>>>()?;
    invariant_ball(realified.iter())
}

/// `⋃_f f(E)` without decimation.
pub fn hutchinson_image(ifs: &Hifs, e: &PointSet) -> Result<PointSet> {
    ifs.check_dim(e)?;
    let dim = ifs.dim();
    let data: Vec<f64> = (0..e.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = e.point(i);
            ifs.maps.iter().flat_map(move |m| m.eval(x))
        })
        .collect();
    PointSet::new(dim, data)
}

/// One Hutchinson step followed by decimation at `cell`.
pub fn hutchinson(ifs: &Hifs, e: &PointSet, cell: f64) -> Result<PointSet> {
    ifs.contraction_factor()?;
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    decimate(&hutchinson_image(ifs, e)?, cell)
}

/// Outcome of the deterministic engine.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorReport {
    pub iterations: usize,
    /// `d_H(F_n, F_{n−1})` at the stop.
    pub residual: f64,
    /// Certified `d_H(F_n, F) ≤ ε + slack/(1 − h)`.
    pub bound: f64,
    pub h: f64,
    pub slack: f64,
    pub points: usize,
}

/// Iterates `F_n = dec(𝓕(F_{n−1}))` until `d_H(F_n, F_{n−1}) ≤ ε(1 − h)`.
pub fn attractor_deterministic(
    ifs: &Hifs,
    f0: &PointSet,
    eps: f64,
    cell: f64,
    max_iter: usize,
) -> Result<(PointSet, AttractorReport)> {
    let h = ifs.contraction_factor()?;
    if !(eps > 0.0 && cell > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance and cell must be positive (eps = {eps}, cell = {cell})"
        )));
    }
    if f0.is_empty() {
        return Err(Error::EmptySet);
    }
    ifs.check_dim(f0)?;
    let slack = decimation_slack(cell, ifs.dim());
    let target = eps * (1.0 - h);
    let mut current = f0.clone().with_grid(cell)?;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let next = hutchinson(ifs, &current, cell)?.with_grid(cell)?;
        residual = if next == current {
            0.0
        } else {
            hmodule::hausdorff_grid(&next, &current)?
        };
        if residual <= target {
            let report = AttractorReport {
                iterations: it,
                residual,
                bound: eps + slack / (1.0 - h),
                h,
                slack,
                points: next.len(),
            };
            return Ok((next, report));
        }
        current = next;
    }
    Err(Error::MaxIterations(max_iter, residual))
}

/// Per-sample generator: stream `index` of the ChaCha keystream keyed by `seed`.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Smallest `b` with `h^b · R ≤ cell / 2`.
pub fn default_burn_in(h: f64, radius: f64, cell: f64) -> usize {
    let mut b = 0;
    let mut reach = radius;
    while reach > cell / 2.0 && b < 10_000 {
        reach *= h;
        b += 1;
    }
    b
}

/// Chaos-game sampler. Each sample starts at the origin and applies
/// `burn_in + 1` uniformly chosen maps; output is in canonical order.
pub fn attractor_chaos(ifs: &Hifs, samples: usize, burn_in: usize, seed: u64) -> Result<PointSet> {
    ifs.contraction_factor()?;
    let dim = ifs.dim();
    let count = ifs.maps.len();
    let data: Vec<f64> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let mut x = vec![0.0; dim];
            let mut y = vec![0.0; dim];
            for _ in 0..=burn_in {
                ifs.maps[rng.gen_range(0..count)].eval_into(&x, &mut y);
                std::mem::swap(&mut x, &mut y);
            }
            x
        })
        .collect();
    Ok(PointSet::new(dim, data)?.canonical())
}

/// Distance bound of chaos-game output from the attractor.
pub fn chaos_tolerance(h: f64, radius: f64, burn_in: usize) -> f64 {
    h.powi(burn_in as i32) * radius
}

/// Convenience: the right-affine maps `ξ ↦ diag(a,…,a)ξ + b`.
pub fn scaled_diagonal_map(a: &Paravector, b: HVector) -> Result<MapDesc> {
    MapDesc::right_affine(HMatrix::diagonal(b.k(), a), b)
}

/// Real affine maps on `R^k` as right-affine maps over the real kind.
pub fn real_affine_map(matrix: &[&[f64]], translation: &[f64]) -> Result<MapDesc> {
    let k = translation.len();
    let alg = AlgebraKind::real();
    let mut entries = Vec::with_capacity(k * k);
    for row in matrix {
        if row.len() != k {
            return Err(Error::Shape(format!("row of length {} in a {k}x{k} matrix", row.len())));
        }
        entries.extend(row.iter().map(|&v| Paravector::scalar(alg, v)));
    }
    let h = HMatrix::new(k, entries)?;
    let b = HVector::from_flat(alg, k, translation.to_vec())?;
    MapDesc::right_affine(h, b)
}
