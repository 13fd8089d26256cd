//! Arithmetic in the real Clifford algebra `Cl(n)` and its paravector subspace.
//!
//! Three backends share one value type and are selected by [`AlgebraKind`]:
//!
//! * `CliffordPi`: the full `2^n` dimensional algebra with `e_i e_j + e_j e_i = -2 δ_ij`.
//!   Coefficients are indexed by blade bitmask (bit `i - 1` set means `e_i` is a factor).
//! * `Quaternion`: the Hamilton table on `{e0, e1, e2, e3}`, indexed `0..4`.
//!   Unlike `Cl(3)`, paravectors are closed under this product.
//! * `Real`: the one-dimensional algebra `R` (`n = 0`).

use std::fmt;

use crate::error::{Error, Result};

/// Blade index set, encoded as a bitmask over the generators `e_1..e_n`.
pub type Blade = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    CliffordPi,
    Quaternion,
    Real,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::CliffordPi => "clifford-pi",
            Kind::Quaternion => "quaternion",
            Kind::Real => "real",
        }
    }
}

/// The algebra a value lives in: backend plus generator count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraKind {
    kind: Kind,
    n: usize,
}

impl AlgebraKind {
    /// Largest generator count supported by the dense representation.
    pub const MAX_GENERATORS: usize = 8;

    pub fn clifford(n: usize) -> Result<Self> {
        if n > Self::MAX_GENERATORS {
            return Err(Error::UnsupportedAlgebra(format!(
                "clifford-pi with n = {n} exceeds the cap of {}",
                Self::MAX_GENERATORS
            )));
        }
        Ok(AlgebraKind {
            kind: Kind::CliffordPi,
            n,
        })
    }

    pub const fn quaternion() -> Self {
        AlgebraKind {
            kind: Kind::Quaternion,
            n: 3,
        }
    }

    pub const fn real() -> Self {
        AlgebraKind {
            kind: Kind::Real,
            n: 0,
        }
    }

    /// Builds an algebra from its textual kind, checking the forced `n` of
    /// the quaternion and real kinds.
    pub fn from_name(name: &str, n: Option<usize>) -> Result<Self> {
        let alg = match name {
            "clifford-pi" | "clifford" => {
                let n = n.ok_or_else(|| {
                    Error::UnsupportedAlgebra("clifford-pi requires a generator count n".into())
                })?;
                return Self::clifford(n);
            }
            "quaternion" => Self::quaternion(),
            "real" => Self::real(),
            other => return Err(Error::UnsupportedAlgebra(format!("unknown kind `{other}`"))),
        };
        match n {
            Some(n) if n != alg.n => Err(Error::UnsupportedAlgebra(format!(
                "{} forces n = {}, got {n}",
                alg.kind.name(),
                alg.n
            ))),
            _ => Ok(alg),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored coefficients of a full algebra element.
    pub fn blade_count(&self) -> usize {
        match self.kind {
            Kind::CliffordPi => 1 << self.n,
            Kind::Quaternion => 4,
            Kind::Real => 1,
        }
    }

    /// Number of coefficients of a paravector, `n + 1`.
    pub fn paravector_len(&self) -> usize {
        self.n + 1
    }

    /// Position of paravector coefficient `j` (0 = scalar, `j` = `e_j`) in
    /// the full coefficient vector.
    fn paravector_slot(&self, j: usize) -> usize {
        match self.kind {
            Kind::CliffordPi if j > 0 => 1 << (j - 1),
            _ => j,
        }
    }

    fn check(&self, other: &AlgebraKind) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.kind.name(), self.n)
    }
}

/// Signed product of two basis blades in `Cl(n)`.
///
/// The sign is the parity of the transpositions needed to sort the
/// concatenated generator sequence, times `-1` for every generator that
/// appears in both factors (`e_i^2 = -1`). The resulting blade is `A △ B`.
pub fn blade_product(a: Blade, b: Blade) -> (f64, Blade) {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // generators of `a` above e_{j+1} must hop over it
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps += (a & b).count_ones();
    let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    (sign, a ^ b)
}

/// Product of quaternion basis elements `e_i e_j`, `i, j ∈ 0..4`.
pub fn quaternion_unit_product(i: usize, j: usize) -> (f64, usize) {
    const TABLE: [[(f64, usize); 4]; 4] = [
        [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
        [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
        [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
        [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
    ];
    TABLE[i][j]
}

/// An element of `Cl(n)` (or of the quaternions / reals) in dense form.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordNumber {
    algebra: AlgebraKind,
    coeffs: Vec<f64>,
}

impl CliffordNumber {
    pub fn zero(algebra: AlgebraKind) -> Self {
        CliffordNumber {
            algebra,
            coeffs: vec![0.0; algebra.blade_count()],
        }
    }

    pub fn scalar(algebra: AlgebraKind, s: f64) -> Self {
        let mut x = Self::zero(algebra);
        x.coeffs[0] = s;
        x
    }

    pub fn from_coeffs(algebra: AlgebraKind, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.blade_count() {
            return Err(Error::Shape(format!(
                "{algebra} needs {} coefficients, got {}",
                algebra.blade_count(),
                coeffs.len()
            )));
        }
        Ok(CliffordNumber { algebra, coeffs })
    }

    /// `coeff · e_A`. For the quaternion kind `blade` is the unit index `0..4`.
    pub fn blade(algebra: AlgebraKind, blade: Blade, coeff: f64) -> Self {
        let mut x = Self::zero(algebra);
        x.coeffs[blade as usize] = coeff;
        x
    }

    /// The generator `e_i` (`i ≥ 1`) or the unit (`i = 0`).
    pub fn generator(algebra: AlgebraKind, i: usize) -> Self {
        let mut x = Self::zero(algebra);
        x.coeffs[algebra.paravector_slot(i)] = 1.0;
        x
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> f64 {
        self.coeffs[blade as usize]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.algebra.check(&other.algebra)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.algebra.check(&other.algebra)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale(&self, s: f64) -> Self {
        CliffordNumber {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        CliffordNumber {
            algebra: self.algebra,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Algebra product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.algebra.check(&other.algebra)?;
        let mut out = vec![0.0; self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (sign, slot) = match self.algebra.kind {
                    Kind::Quaternion => quaternion_unit_product(i, j),
                    Kind::CliffordPi | Kind::Real => {
                        let (s, blade) = blade_product(i as Blade, j as Blade);
                        (s, blade as usize)
                    }
                };
                out[slot] += sign * a * b;
            }
        }
        Ok(CliffordNumber {
            algebra: self.algebra,
            coeffs: out,
        })
    }

    /// Clifford conjugation: reverse every blade and negate each generator.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let grade = match self.algebra.kind {
                    Kind::Quaternion => usize::from(i != 0),
                    _ => (i as Blade).count_ones() as usize,
                };
                // reversal contributes m(m-1)/2 swaps, negation m sign flips
                if (grade * (grade + 1) / 2) % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        CliffordNumber {
            algebra: self.algebra,
            coeffs,
        }
    }

    /// The paravector part `x_0 + Σ x_i e_i`.
    pub fn pi_project(&self) -> Paravector {
        let alg = self.algebra;
        let coeffs = (0..alg.paravector_len())
            .map(|j| self.coeffs[alg.paravector_slot(j)])
            .collect();
        Paravector {
            algebra: alg,
            coeffs,
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn cnorm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// A hypercomplex number `x_0 + Σ_{i=1}^n x_i e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Paravector {
    algebra: AlgebraKind,
    coeffs: Vec<f64>,
}

impl Paravector {
    pub fn new(algebra: AlgebraKind, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.paravector_len() {
            return Err(Error::Shape(format!(
                "{algebra} paravectors have {} coefficients, got {}",
                algebra.paravector_len(),
                coeffs.len()
            )));
        }
        Ok(Paravector { algebra, coeffs })
    }

    pub fn zero(algebra: AlgebraKind) -> Self {
        Paravector {
            algebra,
            coeffs: vec![0.0; algebra.paravector_len()],
        }
    }

    pub fn scalar(algebra: AlgebraKind, s: f64) -> Self {
        let mut p = Self::zero(algebra);
        p.coeffs[0] = s;
        p
    }

    /// `e_j` as a paravector, `e_0 = 1`.
    pub fn basis(algebra: AlgebraKind, j: usize) -> Self {
        let mut p = Self::zero(algebra);
        p.coeffs[j] = 1.0;
        p
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `Sc(x) = x_0`.
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// `Ve(x) = (x_1, …, x_n)`.
    pub fn vector_part(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    pub fn to_clifford(&self) -> CliffordNumber {
        let mut x = CliffordNumber::zero(self.algebra);
        for (j, &c) in self.coeffs.iter().enumerate() {
            x.coeffs[self.algebra.paravector_slot(j)] = c;
        }
        x
    }

    /// `x̄ = x_0 - 𝒙`.
    pub fn conj(&self) -> Self {
        let mut p = self.clone();
        for c in &mut p.coeffs[1..] {
            *c = -*c;
        }
        p
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.algebra.check(&other.algebra)?;
        Ok(Paravector {
            algebra: self.algebra,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Paravector {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Full product in the algebra; may leave the paravector subspace in `Cl(n)`.
    pub fn mul(&self, other: &Self) -> Result<CliffordNumber> {
        self.to_clifford().mul(&other.to_clifford())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    /// Independent sign oracle: write both blades as generator sequences,
    /// bubble-sort with adjacent swaps and cancel equal neighbours.
    fn naive_blade_product(a: Blade, b: Blade) -> (f64, Blade) {
        let mut seq: Vec<u32> = (0..32).filter(|i| a >> i & 1 == 1).collect();
        seq.extend((0..32).filter(|i| b >> i & 1 == 1));
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < seq.len() {
                if seq[i] > seq[i + 1] {
                    seq.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else if seq[i] == seq[i + 1] {
                    seq.drain(i..i + 2);
                    sign = -sign;
                    changed = true;
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        (sign, seq.iter().fold(0, |m, i| m | (1 << i)))
    }

    /// Full expansion over all blade pairs using the naive oracle.
    fn naive_mul(x: &CliffordNumber, y: &CliffordNumber) -> Vec<f64> {
        let mut out = vec![0.0; x.coeffs.len()];
        for i in 0..x.coeffs.len() {
            for j in 0..y.coeffs.len() {
                let (s, blade) = naive_blade_product(i as Blade, j as Blade);
                out[blade as usize] += s * x.coeffs[i] * y.coeffs[j];
            }
        }
        out
    }

    fn random(alg: AlgebraKind, rng: &mut ChaCha8Rng) -> CliffordNumber {
        let coeffs = (0..alg.blade_count())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        CliffordNumber::from_coeffs(alg, coeffs).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn blade_product_examples() {
        assert_eq!(blade_product(0b1, 0b1), (-1.0, 0));
        assert_eq!(blade_product(0, 0b11), (1.0, 0b11));
        assert_eq!(blade_product(0b10, 0b01), (-1.0, 0b11));
        assert_eq!(naive_blade_product(0b10, 0b01), (-1.0, 0b11));
    }

    #[test]
    fn blade_product_matches_oracle_exhaustively() {
        for a in 0..64 {
            for b in 0..64 {
                assert_eq!(blade_product(a, b), naive_blade_product(a, b), "{a:b} {b:b}");
            }
        }
    }

    #[test]
    fn quaternion_units() {
        let q = AlgebraKind::quaternion();
        let e = |i| CliffordNumber::generator(q, i);
        assert_eq!(e(1).mul(&e(2)).unwrap(), e(3));
        assert_eq!(e(2).mul(&e(3)).unwrap(), e(1));
        assert_eq!(e(3).mul(&e(1)).unwrap(), e(2));
        assert_eq!(e(2).mul(&e(1)).unwrap(), e(3).scale(-1.0));
    }

    #[test]
    fn mul_matches_naive_expansion() {
        let alg = AlgebraKind::clifford(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = random(alg, &mut rng);
            let y = random(alg, &mut rng);
            assert!(close(x.mul(&y).unwrap().coeffs(), &naive_mul(&x, &y), TOL));
        }
        // (e1 + e2)(e1 - e2) = -1 - e1e2 + e2e1 + 1 = -2 e1e2
        let e1 = CliffordNumber::generator(alg, 1);
        let e2 = CliffordNumber::generator(alg, 2);
        let p = e1.add(&e2).unwrap().mul(&e1.sub(&e2).unwrap()).unwrap();
        assert_eq!(p, CliffordNumber::blade(alg, 0b11, -2.0));
    }

    #[test]
    fn unit_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for alg in [
            AlgebraKind::quaternion(),
            AlgebraKind::clifford(4).unwrap(),
            AlgebraKind::real(),
        ] {
            let one = CliffordNumber::scalar(alg, 1.0);
            let x = random(alg, &mut rng);
            assert_eq!(one.mul(&x).unwrap(), x);
            assert_eq!(x.mul(&one).unwrap(), x);
        }
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = CliffordNumber::scalar(AlgebraKind::quaternion(), 1.0);
        let b = CliffordNumber::scalar(AlgebraKind::clifford(3).unwrap(), 1.0);
        assert!(matches!(a.mul(&b), Err(Error::AlgebraMismatch(..))));
    }

    #[test]
    fn conjugation_examples() {
        let alg = AlgebraKind::clifford(2).unwrap();
        let e1 = CliffordNumber::generator(alg, 1);
        assert_eq!(e1.conj(), e1.scale(-1.0));
        let one = CliffordNumber::scalar(alg, 1.0);
        assert_eq!(one.conj(), one);
        // conj(e1 e2) = ē2 ē1 = e2 e1 = -e1 e2
        let e12 = CliffordNumber::blade(alg, 0b11, 1.0);
        let e2 = CliffordNumber::generator(alg, 2);
        let oracle = e2.scale(-1.0).mul(&e1.scale(-1.0)).unwrap();
        assert_eq!(e12.conj(), oracle);
        assert_eq!(e12.conj(), e12.scale(-1.0));
    }

    #[test]
    fn conj_of_paravector_negates_vector_part() {
        for alg in [AlgebraKind::quaternion(), AlgebraKind::clifford(3).unwrap()] {
            let p = Paravector::new(alg, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
            assert_eq!(p.to_clifford().conj().pi_project(), p.conj());
            assert_eq!(p.conj().coeffs(), &[1.0, -2.0, -3.0, -4.0]);
        }
    }

    #[test]
    fn projection() {
        let alg = AlgebraKind::clifford(2).unwrap();
        let mut x = CliffordNumber::scalar(alg, 3.0);
        x = x.add(&CliffordNumber::generator(alg, 1).scale(2.0)).unwrap();
        x = x.add(&CliffordNumber::blade(alg, 0b11, 5.0)).unwrap();
        let p = x.pi_project();
        assert_eq!(p.coeffs(), &[3.0, 2.0, 0.0]);
        assert_eq!(p.to_clifford().pi_project(), p);
        assert_eq!(p.scalar_part(), 3.0);
        assert_eq!(p.vector_part(), &[2.0, 0.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let y = random(alg, &mut rng);
        assert_eq!(y.pi_project().to_clifford().pi_project(), y.pi_project());

        let q = AlgebraKind::quaternion();
        let z = random(q, &mut rng);
        assert_eq!(z.pi_project().coeffs(), z.coeffs());
    }

    #[test]
    fn norms() {
        let q = AlgebraKind::quaternion();
        let qv = Paravector::new(q, vec![0.3, -0.1, 0.4, -0.2]).unwrap();
        assert!((qv.to_clifford().cnorm() - 0.3f64.sqrt()).abs() < TOL);
        assert_eq!(CliffordNumber::generator(q, 1).cnorm(), 1.0);
        let hat = qv.scale((10.0f64 / 3.0).sqrt());
        assert!((hat.norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn algebra_constructors() {
        assert!(AlgebraKind::clifford(9).is_err());
        assert!(AlgebraKind::from_name("quaternion", Some(2)).is_err());
        assert_eq!(
            AlgebraKind::from_name("real", None).unwrap(),
            AlgebraKind::real()
        );
        assert!(AlgebraKind::from_name("octonion", None).is_err());
        assert_eq!(AlgebraKind::clifford(8).unwrap().blade_count(), 256);
        assert_eq!(AlgebraKind::real().blade_count(), 1);
    }
}
