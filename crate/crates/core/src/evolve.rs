//! Time evolution by products of one-sparse exponentials.
//!
//! A pair entry `h` of a one-sparse term couples two amplitudes through the
//! 2×2 block `exp(-i [[0, h], [h, 0]] dt)`. The block is formed from the
//! polar pieces of `h` (sign bit `s`, magnitude `|h|`); diagonal entries
//! contribute a phase `exp(-i h dt)`. Terms are combined by Lie, Strang or
//! Suzuki product formulas, and [`ExactPropagator`] provides a dense
//! eigendecomposition reference.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::OneSparseTerm;
use crate::error::{Error, Result};
use crate::slater::SparseCiMatrix;

/// Largest dimension accepted by the dense reference by default.
pub const DEFAULT_DENSE_CAP: usize = 512;

/// Maximum tolerated `‖HV − VΛ‖_max` in the reference eigendecomposition.
pub const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes indexed by configuration rank.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// `|q⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, q: usize) -> Result<Self> {
        if q >= dim {
            return Err(Error::RankOutOfRange {
                rank: q as u64,
                dimension: dim as u64,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[q] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Normalized state with uniform random components, deterministic per seed.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut s = Self { amps };
        s.normalize();
        s
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `q re im` per line, 17 significant digits.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (q, a) in self.amps.iter().enumerate() {
            writeln!(w, "{q} {:.16e} {:.16e}", a.re, a.im)?;
        }
        Ok(())
    }

    /// Reads `q re im` lines into a state of dimension `dim`; missing ranks are zero.
    pub fn read<R: BufRead>(r: R, dim: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut seen = vec![false; dim];
        for (n, line) in r.lines().enumerate() {
            let bad = |message: String| Error::StateFormat {
                line: n + 1,
                message,
            };
            let line = line.map_err(|e| bad(e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            let [q, re, im] = toks[..] else {
                return Err(bad(format!("expected `q re im`, found {t:?}")));
            };
            let q: usize = q.parse().map_err(|_| bad(format!("bad rank {q:?}")))?;
            let re: f64 = re
                .parse()
                .map_err(|_| bad(format!("bad real part {re:?}")))?;
            let im: f64 = im
                .parse()
                .map_err(|_| bad(format!("bad imaginary part {im:?}")))?;
            if q >= dim {
                return Err(bad(format!("rank {q} outside dimension {dim}")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(bad(format!("rank {q} given twice")));
            }
            amps[q] = Complex64::new(re, im);
        }
        Ok(Self { amps })
    }
}

fn same_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// `|⟨a|b⟩|`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

/// Sign bit and magnitude of a real matrix element, `h = e^{iπs}|h|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub sign: u8,
    pub magnitude: f64,
}

impl Polar {
    pub fn of(h: f64) -> Self {
        Self {
            sign: u8::from(h < 0.0),
            magnitude: h.abs(),
        }
    }

    fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.sign as f64)
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwoUnitary(pub [[Complex64; 2]; 2]);

impl TwoByTwoUnitary {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self([[o, z], [z, o]])
    }

    /// `exp(-iθσ_z/2)`.
    pub fn rz(theta: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self([
            [Complex64::from_polar(1.0, -theta / 2.0), z],
            [z, Complex64::from_polar(1.0, theta / 2.0)],
        ])
    }

    /// `exp(-iθσ_y/2)`.
    pub fn ry(theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        Self([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let cell = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Self([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        max_entry_diff(&p, &Self::identity())
    }

    /// `min_φ ‖self − e^{iφ}·other‖_max`, with `φ` fixed by the largest entry of `other`.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let (mut bi, mut bj, mut best) = (0, 0, -1.0);
        for i in 0..2 {
            for j in 0..2 {
                if other.0[i][j].norm() > best {
                    best = other.0[i][j].norm();
                    (bi, bj) = (i, j);
                }
            }
        }
        let ratio = self.0[bi][bj] / other.0[bi][bj];
        let phase = ratio / ratio.norm();
        let mut shifted = *other;
        for row in shifted.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= phase;
            }
        }
        max_entry_diff(self, &shifted)
    }
}

fn max_entry_diff(a: &TwoByTwoUnitary, b: &TwoByTwoUnitary) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a.0[i][j] - b.0[i][j]).norm());
        }
    }
    m
}

/// Closed-form block `exp(-i [[0, h], [h*, 0]] dt)` from the polar pieces of `h`.
pub fn pair_block(h: Polar, dt: f64) -> TwoByTwoUnitary {
    let theta = h.magnitude * dt;
    let (c, s) = (theta.cos(), theta.sin());
    let ph = h.phase();
    TwoByTwoUnitary([
        [Complex64::new(c, 0.0), -I * ph * s],
        [-I * ph.conj() * s, Complex64::new(c, 0.0)],
    ])
}

/// `R_z(-π/2) R_z(-πs) R_y(2|h|dt) R_z(πs) R_z(π/2)`.
pub fn rotation_sequence(h_abs: f64, s: u8, dt: f64) -> TwoByTwoUnitary {
    let s = s as f64;
    TwoByTwoUnitary::rz(-PI / 2.0)
        .mul(&TwoByTwoUnitary::rz(-PI * s))
        .mul(&TwoByTwoUnitary::ry(2.0 * h_abs * dt))
        .mul(&TwoByTwoUnitary::rz(PI * s))
        .mul(&TwoByTwoUnitary::rz(PI / 2.0))
}

fn term_extent(term: &OneSparseTerm) -> usize {
    term.fixed
        .iter()
        .map(|f| f.0.index() + 1)
        .chain(term.pairs.iter().map(|p| p.1.index() + 1))
        .max()
        .unwrap_or(0)
}

fn check_extent(extent: usize, dim: usize) -> Result<()> {
    if extent > dim {
        return Err(Error::DimensionMismatch {
            expected: extent,
            actual: dim,
        });
    }
    Ok(())
}

/// Applies `exp(-i H_m dt)` for one term in place.
pub fn apply_one_sparse(term: &OneSparseTerm, dt: f64, psi: &mut StateVector) -> Result<()> {
    check_extent(term_extent(term), psi.dim())?;
    apply_unchecked(term, dt, psi);
    Ok(())
}

fn apply_unchecked(term: &OneSparseTerm, dt: f64, psi: &mut StateVector) {
    let amps = &mut psi.amps;
    for &(q, v) in &term.fixed {
        amps[q.index()] *= Complex64::from_polar(1.0, -v * dt);
    }
    for &(a, b, h) in &term.pairs {
        let u = pair_block(Polar::of(h), dt).0;
        let (x, y) = (amps[a.index()], amps[b.index()]);
        amps[a.index()] = u[0][0] * x + u[0][1] * y;
        amps[b.index()] = u[1][0] * x + u[1][1] * y;
    }
}

/// `1 / (4 − 4^{1/(2ℓ−1)})`, the Suzuki weight at recursion level `ℓ ≥ 2`.
pub fn suzuki_coefficient(level: u32) -> Result<f64> {
    if level < 2 {
        return Err(Error::InvalidLevel(level));
    }
    Ok(1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * level as f64 - 1.0))))
}

/// One step of a product formula over a fixed, ordered term list.
#[derive(Debug, Clone)]
pub struct TrotterStep<'a> {
    terms: &'a [OneSparseTerm],
    order: u32,
    extent: usize,
}

/// Builds the step for `order` 1 (Lie), 2 (Strang) or any even `2k` (Suzuki recursion).
pub fn trotter_step(terms: &[OneSparseTerm], order: u32) -> Result<TrotterStep<'_>> {
    if order == 0 || (order > 1 && order % 2 == 1) {
        return Err(Error::UnsupportedOrder(order));
    }
    let extent = terms.iter().map(term_extent).max().unwrap_or(0);
    Ok(TrotterStep {
        terms,
        order,
        extent,
    })
}

impl TrotterStep<'_> {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Advances `psi` by `dt`.
    pub fn apply(&self, dt: f64, psi: &mut StateVector) -> Result<()> {
        check_extent(self.extent, psi.dim())?;
        if self.order == 1 {
            for t in self.terms {
                apply_unchecked(t, dt, psi);
            }
        } else {
            self.suzuki(self.order / 2, dt, psi);
        }
        Ok(())
    }

    fn strang(&self, dt: f64, psi: &mut StateVector) {
        for t in self.terms {
            apply_unchecked(t, dt / 2.0, psi);
        }
        for t in self.terms.iter().rev() {
            apply_unchecked(t, dt / 2.0, psi);
        }
    }

    fn suzuki(&self, k: u32, dt: f64, psi: &mut StateVector) {
        if k == 1 {
            return self.strang(dt, psi);
        }
        let s = suzuki_coefficient(k).expect("k >= 2");
        self.suzuki(k - 1, s * dt, psi);
        self.suzuki(k - 1, s * dt, psi);
        self.suzuki(k - 1, (1.0 - 4.0 * s) * dt, psi);
        self.suzuki(k - 1, s * dt, psi);
        self.suzuki(k - 1, s * dt, psi);
    }
}

/// Order, step count and duration of a product-formula run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    pub order: u32,
    pub steps: u64,
    pub t: f64,
}

impl TrotterPlan {
    pub fn dt(&self) -> f64 {
        self.t / self.steps as f64
    }

    pub fn run(&self, terms: &[OneSparseTerm], psi0: &StateVector) -> Result<Evolution> {
        if self.steps == 0 {
            return Err(Error::Numerical("step count must be at least 1".into()));
        }
        let step = trotter_step(terms, self.order)?;
        let dt = self.dt();
        let n0 = psi0.norm();
        let mut psi = psi0.clone();
        let mut norm_drift: f64 = 0.0;
        for _ in 0..self.steps {
            step.apply(dt, &mut psi)?;
            norm_drift = norm_drift.max((psi.norm() - n0).abs());
        }
        Ok(Evolution {
            state: psi,
            plan: *self,
            norm_drift,
        })
    }
}

/// Final state of a product-formula run.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: StateVector,
    pub plan: TrotterPlan,
    /// Largest `|‖ψ‖ − ‖ψ₀‖|` seen after any step.
    pub norm_drift: f64,
}

/// `steps` applications of the order-`order` step with `dt = t / steps`.
pub fn evolve(
    terms: &[OneSparseTerm],
    t: f64,
    steps: u64,
    order: u32,
    psi0: &StateVector,
) -> Result<Evolution> {
    TrotterPlan { order, steps, t }.run(terms, psi0)
}

/// Dense `exp(-iHt)` through `H = VΛVᵀ`.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
    residual: f64,
}

impl ExactPropagator {
    pub fn new(h: &SparseCiMatrix, dense_cap: usize) -> Result<Self> {
        if h.dimension() > dense_cap {
            return Err(Error::CapExceeded {
                what: "dense reference dimension",
                requested: h.dimension() as u64,
                cap: dense_cap as u64,
            });
        }
        Self::from_dense(h.to_dense())
    }

    /// Diagonalizes a real symmetric matrix and checks the residual.
    pub fn from_dense(m: DMatrix<f64>) -> Result<Self> {
        let eig = SymmetricEigen::new(m.clone());
        let lhs = &m * &eig.eigenvectors;
        let rhs = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues);
        let residual = (lhs - rhs).amax();
        if residual.is_nan() || residual >= EIGEN_RESIDUAL_TOLERANCE {
            return Err(Error::Numerical(format!(
                "eigendecomposition residual {residual:e} exceeds {EIGEN_RESIDUAL_TOLERANCE:e}"
            )));
        }
        Ok(Self {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues.iter().copied().collect(),
            residual,
        })
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn evolve(&self, t: f64, psi0: &StateVector) -> Result<StateVector> {
        let n = self.values.len();
        same_dim(n, psi0.dim())?;
        let v = &self.vectors;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let overlap: Complex64 = (0..n).map(|i| v[(i, k)] * psi0.amps[i]).sum();
            *c = overlap * Complex64::from_polar(1.0, -self.values[k] * t);
        }
        let amps = (0..n)
            .map(|i| (0..n).map(|k| v[(i, k)] * coeffs[k]).sum())
            .collect();
        Ok(StateVector { amps })
    }
}

/// `exp(-iHt)ψ₀` by dense eigendecomposition, refusing dimensions above `dense_cap`.
pub fn exact_reference(
    h: &SparseCiMatrix,
    t: f64,
    psi0: &StateVector,
    dense_cap: usize,
) -> Result<StateVector> {
    ExactPropagator::new(h, dense_cap)?.evolve(t, psi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{decompose, EdgeColor, Scheme};
    use crate::config_space::{Rank, SpaceParams};
    use crate::integrals::{synthetic_table, SyntheticKind};
    use crate::slater::{build_ci_matrix, SignMode};

    fn pair_term(a: u64, b: u64, h: f64) -> OneSparseTerm {
        OneSparseTerm {
            color: EdgeColor::single(1, 2),
            fixed: vec![],
            pairs: vec![(Rank(a), Rank(b), h)],
        }
    }

    fn instance(n: u32, e: u32, seed: u64) -> SparseCiMatrix {
        let t = synthetic_table(SyntheticKind::RandomSymmetric, seed, n).unwrap();
        build_ci_matrix(SpaceParams::new(n, e).unwrap(), &t, SignMode::Fermionic).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let psi = StateVector::random(6, 1);
        let mut out = psi.clone();
        apply_one_sparse(&pair_term(0, 3, 0.7), 0.0, &mut out).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn quarter_rotation_moves_amplitude() {
        let mut psi = StateVector::basis(4, 1).unwrap();
        let h = 2.0;
        apply_one_sparse(&pair_term(1, 2, h), PI / 2.0 / h, &mut psi).unwrap();
        let a = psi.amplitudes();
        assert!((a[2] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(a[1].norm() < 1e-15);
    }

    #[test]
    fn uniform_diagonal_is_global_phase() {
        let psi = StateVector::random(5, 2);
        let term = OneSparseTerm {
            color: EdgeColor::Diagonal,
            fixed: (0..5).map(|q| (Rank(q), 1.3)).collect(),
            pairs: vec![],
        };
        let mut out = psi.clone();
        apply_one_sparse(&term, 0.9, &mut out).unwrap();
        assert!((fidelity(&psi, &out).unwrap() - 1.0).abs() < 1e-14);
        let expected = Complex64::from_polar(1.0, -1.3 * 0.9);
        assert!((out.amplitudes()[3] - psi.amplitudes()[3] * expected).norm() < 1e-15);
    }

    #[test]
    fn dimension_checks() {
        let mut psi = StateVector::basis(3, 0).unwrap();
        assert!(apply_one_sparse(&pair_term(1, 4, 1.0), 0.1, &mut psi).is_err());
        assert!(fidelity(&psi, &StateVector::basis(4, 0).unwrap()).is_err());
        assert!(StateVector::basis(3, 3).is_err());
    }

    #[test]
    fn rotation_examples() {
        let id = rotation_sequence(0.0, 0, 0.4);
        assert!(id.distance_up_to_phase(&TwoByTwoUnitary::identity()) < 1e-15);
        let x = rotation_sequence(1.0, 0, PI / 2.0);
        let target = TwoByTwoUnitary([
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)],
        ]);
        assert!(x.distance_up_to_phase(&target) < 1e-15);
        // s = 1 flips the sign of the off-diagonal phase
        let a = rotation_sequence(0.8, 0, 0.3);
        let b = rotation_sequence(0.8, 1, 0.3);
        let mut flipped = a;
        flipped.0[0][1] = -flipped.0[0][1];
        flipped.0[1][0] = -flipped.0[1][0];
        assert!(b.distance_up_to_phase(&flipped) < 1e-15);
        assert!(b.unitarity_error() < 1e-15);
    }

    #[test]
    fn suzuki_values() {
        let s2 = suzuki_coefficient(2).unwrap();
        assert!((s2 - 0.41449077).abs() < 5e-9);
        assert_eq!(
            suzuki_coefficient(3).unwrap(),
            1.0 / (4.0 - 4f64.powf(1.0 / 5.0))
        );
        for level in 2..10 {
            let s = suzuki_coefficient(level).unwrap();
            assert!(4.0 * s < 2.0 && 1.0 - 4.0 * s < 0.0);
        }
        assert!(suzuki_coefficient(1).is_err());
    }

    #[test]
    fn orders_validated() {
        assert!(trotter_step(&[], 3).is_err());
        assert!(trotter_step(&[], 0).is_err());
        assert!(trotter_step(&[], 6).is_ok());
    }

    #[test]
    fn single_term_is_exact_for_every_order() {
        let term = pair_term(0, 2, -0.9);
        let exact = ExactPropagator::from_dense(term.to_dense(3)).unwrap();
        let psi = StateVector::random(3, 4);
        for order in [1, 2, 4, 6] {
            let got = evolve(std::slice::from_ref(&term), 1.7, 3, order, &psi).unwrap();
            let want = exact.evolve(1.7, &psi).unwrap();
            assert!(got.state.distance(&want).unwrap() < 1e-12, "order {order}");
        }
    }

    #[test]
    fn commuting_diagonal_is_exact_at_first_order() {
        let t = synthetic_table(SyntheticKind::DiagonalOneBody, 0, 4).unwrap();
        let h = build_ci_matrix(SpaceParams::new(4, 2).unwrap(), &t, SignMode::Fermionic).unwrap();
        let terms = decompose(&h, Scheme::Descriptor).unwrap();
        let psi = StateVector::random(6, 3);
        let got = evolve(&terms, 1.0, 1, 1, &psi).unwrap();
        let want = exact_reference(&h, 1.0, &psi, DEFAULT_DENSE_CAP).unwrap();
        assert!(got.state.distance(&want).unwrap() < 1e-12);
    }

    #[test]
    fn strang_is_time_reversible() {
        let h = instance(6, 3, 5);
        let terms = decompose(&h, Scheme::Descriptor).unwrap();
        let step = trotter_step(&terms, 2).unwrap();
        let psi = StateVector::random(20, 6);
        let mut out = psi.clone();
        step.apply(0.3, &mut out).unwrap();
        step.apply(-0.3, &mut out).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-13);
    }

    #[test]
    fn exact_reference_basics() {
        let h = instance(4, 2, 8);
        let psi = StateVector::random(6, 9);
        let same = exact_reference(&h, 0.0, &psi, DEFAULT_DENSE_CAP).unwrap();
        assert!(same.distance(&psi).unwrap() < 1e-14);
        let later = exact_reference(&h, 2.5, &psi, DEFAULT_DENSE_CAP).unwrap();
        assert!((later.norm() - psi.norm()).abs() < 1e-12);
        assert!(matches!(
            exact_reference(&h, 1.0, &psi, 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn zero_time_evolution() {
        let h = instance(4, 2, 8);
        let terms = decompose(&h, Scheme::PairLabel).unwrap();
        let psi = StateVector::random(6, 1);
        assert_eq!(evolve(&terms, 0.0, 4, 2, &psi).unwrap().state, psi);
        assert!(evolve(&terms, 1.0, 0, 2, &psi).is_err());
    }

    #[test]
    fn state_io_round_trips() {
        let psi = StateVector::random(7, 11);
        let mut buf = Vec::new();
        psi.write(&mut buf).unwrap();
        assert_eq!(StateVector::read(buf.as_slice(), 7).unwrap(), psi);
        assert!(StateVector::read("0 1 0\n0 1 0\n".as_bytes(), 2).is_err());
        assert!(StateVector::read("5 1 0\n".as_bytes(), 2).is_err());
        assert!(StateVector::read("0 x 0\n".as_bytes(), 2).is_err());
    }
}
