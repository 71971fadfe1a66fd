//! One- and two-electron integrals over spin orbitals.
//!
//! Two-electron values are addressed in physicist notation `⟨pq|rs⟩` and
//! stored once per real-orbital symmetry class, so every symmetry partner
//! reads back the same `f64`. Spin orbitals interleave spin: spatial orbital
//! `i` maps to `2i-1` (α) and `2i` (β).

mod fcidump;

pub use fcidump::{parse_fcidump, Fcidump, FcidumpHeader};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config_space::MAX_ORBITALS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Alpha,
    Beta,
}

/// Interleaved spatial/spin to spin-orbital map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinOrbitalMap {
    n_spatial: u32,
}

impl SpinOrbitalMap {
    pub fn new(n_spatial: u32) -> Self {
        Self { n_spatial }
    }

    pub fn n_spatial(&self) -> u32 {
        self.n_spatial
    }

    pub fn n_spin_orbitals(&self) -> u32 {
        2 * self.n_spatial
    }

    /// Spin orbital (1-based) for spatial orbital `spatial` (1-based).
    pub fn spin_orbital(&self, spatial: u32, spin: Spin) -> u32 {
        debug_assert!(spatial >= 1 && spatial <= self.n_spatial);
        match spin {
            Spin::Alpha => 2 * spatial - 1,
            Spin::Beta => 2 * spatial,
        }
    }

    pub fn spatial(&self, spin_orbital: u32) -> u32 {
        spin_orbital.div_ceil(2)
    }

    pub fn spin(&self, spin_orbital: u32) -> Spin {
        spin_of(spin_orbital)
    }
}

#[inline]
pub fn spin_of(spin_orbital: u32) -> Spin {
    if spin_orbital % 2 == 1 {
        Spin::Alpha
    } else {
        Spin::Beta
    }
}

#[inline]
fn pair_index(a: usize, b: usize) -> usize {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi * (hi + 1) / 2 + lo
}

/// Integral table over `n_so` spin orbitals; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTable {
    n_so: u32,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
    core_energy: f64,
}

impl IntegralTable {
    /// All-zero table.
    pub fn zeros(n_so: u32) -> Result<Self> {
        if n_so == 0 || n_so > MAX_ORBITALS {
            return Err(Error::InvalidSpace(format!(
                "integral table needs 1..={MAX_ORBITALS} spin orbitals, got {n_so}"
            )));
        }
        let n = n_so as usize;
        let pairs = n * (n + 1) / 2;
        Ok(Self {
            n_so,
            one_body: vec![0.0; pairs],
            two_body: vec![0.0; pairs * (pairs + 1) / 2],
            core_energy: 0.0,
        })
    }

    pub fn n_spin_orbitals(&self) -> u32 {
        self.n_so
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn set_core_energy(&mut self, e: f64) {
        self.core_energy = e;
    }

    fn check(&self, idx: &[u32]) -> Result<()> {
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > self.n_so) {
            return Err(Error::IndexOutOfRange(format!(
                "spin orbital {bad} outside [1, {}]",
                self.n_so
            )));
        }
        Ok(())
    }

    #[inline]
    fn one_slot(p: u32, q: u32) -> usize {
        pair_index(p as usize - 1, q as usize - 1)
    }

    // physicist ⟨pq|rs⟩ is chemist (pr|qs)
    #[inline]
    fn two_slot(p: u32, q: u32, r: u32, s: u32) -> usize {
        let a = pair_index(p as usize - 1, r as usize - 1);
        let b = pair_index(q as usize - 1, s as usize - 1);
        pair_index(a, b)
    }

    /// Sets `h_pq` (and `h_qp`). Values coupling opposite spins must be zero.
    pub fn set_one_electron(&mut self, p: u32, q: u32, value: f64) -> Result<()> {
        self.check(&[p, q])?;
        if spin_of(p) != spin_of(q) && value != 0.0 {
            return Err(Error::IndexOutOfRange(format!(
                "h({p},{q}) couples opposite spins"
            )));
        }
        self.one_body[Self::one_slot(p, q)] = value;
        Ok(())
    }

    /// Sets `⟨pq|rs⟩` and all of its real-orbital symmetry partners.
    pub fn set_two_electron(&mut self, p: u32, q: u32, r: u32, s: u32, value: f64) -> Result<()> {
        self.check(&[p, q, r, s])?;
        if (spin_of(p) != spin_of(r) || spin_of(q) != spin_of(s)) && value != 0.0 {
            return Err(Error::IndexOutOfRange(format!(
                "<{p}{q}|{r}{s}> violates spin selection"
            )));
        }
        self.two_body[Self::two_slot(p, q, r, s)] = value;
        Ok(())
    }

    /// `h_pq`; zero for unset entries and opposite spins.
    pub fn one_electron(&self, p: u32, q: u32) -> Result<f64> {
        self.check(&[p, q])?;
        Ok(self.h(p, q))
    }

    /// `⟨pq|rs⟩` in physicist notation.
    pub fn two_electron(&self, p: u32, q: u32, r: u32, s: u32) -> Result<f64> {
        self.check(&[p, q, r, s])?;
        Ok(self.g(p, q, r, s))
    }

    /// `⟨pq|rs⟩ − ⟨pq|sr⟩`.
    pub fn antisymmetrized(&self, p: u32, q: u32, r: u32, s: u32) -> Result<f64> {
        self.check(&[p, q, r, s])?;
        Ok(self.g_anti(p, q, r, s))
    }

    #[inline]
    pub(crate) fn h(&self, p: u32, q: u32) -> f64 {
        self.one_body[Self::one_slot(p, q)]
    }

    #[inline]
    pub(crate) fn g(&self, p: u32, q: u32, r: u32, s: u32) -> f64 {
        self.two_body[Self::two_slot(p, q, r, s)]
    }

    #[inline]
    pub(crate) fn g_anti(&self, p: u32, q: u32, r: u32, s: u32) -> f64 {
        self.g(p, q, r, s) - self.g(p, q, s, r)
    }

    /// Lists every quadruple whose value disagrees with a symmetry partner
    /// or breaks spin selection. Exhaustive, `O(n_so^4)`.
    pub fn audit(&self) -> Vec<String> {
        let n = self.n_so;
        let mut bad = Vec::new();
        for p in 1..=n {
            for q in 1..=n {
                let h = self.h(p, q);
                if h != self.h(q, p) {
                    bad.push(format!("h({p},{q}) != h({q},{p})"));
                }
                if spin_of(p) != spin_of(q) && h != 0.0 {
                    bad.push(format!("h({p},{q}) couples opposite spins"));
                }
                for r in 1..=n {
                    for s in 1..=n {
                        let v = self.g(p, q, r, s);
                        let partners = [
                            self.g(q, p, s, r),
                            self.g(r, s, p, q),
                            self.g(s, r, q, p),
                            self.g(r, q, p, s),
                            self.g(p, s, r, q),
                            self.g(q, r, s, p),
                            self.g(s, p, q, r),
                        ];
                        if partners.iter().any(|&w| w != v) {
                            bad.push(format!("<{p}{q}|{r}{s}> symmetry partners disagree"));
                        }
                        if (spin_of(p) != spin_of(r) || spin_of(q) != spin_of(s)) && v != 0.0 {
                            bad.push(format!("<{p}{q}|{r}{s}> violates spin selection"));
                        }
                    }
                }
            }
        }
        bad
    }
}

/// Deterministic test fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// `h_pp = p`, everything else zero.
    DiagonalOneBody,
    /// Every spin-allowed symmetry class drawn uniformly from `[-1, 1]`.
    RandomSymmetric,
}

pub fn synthetic_table(kind: SyntheticKind, seed: u64, n_so: u32) -> Result<IntegralTable> {
    if !n_so.is_multiple_of(2) {
        return Err(Error::InvalidSpace(format!(
            "synthetic tables need an even number of spin orbitals, got {n_so}"
        )));
    }
    let mut t = IntegralTable::zeros(n_so)?;
    match kind {
        SyntheticKind::DiagonalOneBody => {
            for p in 1..=n_so {
                t.set_one_electron(p, p, p as f64)?;
            }
        }
        SyntheticKind::RandomSymmetric => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for p in 1..=n_so {
                for q in 1..=p {
                    if spin_of(p) == spin_of(q) {
                        t.set_one_electron(p, q, rng.gen_range(-1.0..=1.0))?;
                    }
                }
            }
            let n = n_so as usize;
            let pairs = n * (n + 1) / 2;
            let mut drawn = vec![false; pairs * (pairs + 1) / 2];
            for p in 1..=n_so {
                for q in 1..=n_so {
                    for r in 1..=n_so {
                        for s in 1..=n_so {
                            let slot = IntegralTable::two_slot(p, q, r, s);
                            if drawn[slot] {
                                continue;
                            }
                            drawn[slot] = true;
                            if spin_of(p) == spin_of(r) && spin_of(q) == spin_of(s) {
                                t.set_two_electron(p, q, r, s, rng.gen_range(-1.0..=1.0))?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_fixture() {
        let t = synthetic_table(SyntheticKind::DiagonalOneBody, 0, 4).unwrap();
        assert_eq!(t.one_electron(2, 2).unwrap(), 2.0);
        assert_eq!(t.one_electron(3, 3).unwrap(), 3.0);
        assert_eq!(t.one_electron(1, 2).unwrap(), 0.0);
        assert_eq!(t.one_electron(1, 3).unwrap(), 0.0);
        assert_eq!(t.antisymmetrized(1, 2, 1, 2).unwrap(), 0.0);
    }

    #[test]
    fn random_fixture_is_symmetric_and_deterministic() {
        let a = synthetic_table(SyntheticKind::RandomSymmetric, 7, 8).unwrap();
        let b = synthetic_table(SyntheticKind::RandomSymmetric, 7, 8).unwrap();
        let c = synthetic_table(SyntheticKind::RandomSymmetric, 8, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for p in 1..=8 {
            for q in 1..=8 {
                assert_eq!(a.one_electron(p, q).unwrap(), a.one_electron(q, p).unwrap());
            }
        }
        assert!(a.audit().is_empty());
        // every spin-allowed slot was drawn
        assert_ne!(a.two_electron(1, 2, 3, 4).unwrap(), 0.0);
        assert_eq!(a.two_electron(1, 2, 4, 3).unwrap(), 0.0);
        assert_eq!(a.one_electron(1, 2).unwrap(), 0.0);
    }

    #[test]
    fn odd_synthetic_rejected() {
        assert!(synthetic_table(SyntheticKind::RandomSymmetric, 0, 5).is_err());
    }

    #[test]
    fn antisymmetrized_arithmetic() {
        let mut u = IntegralTable::zeros(8).unwrap();
        u.set_two_electron(1, 3, 5, 7, 0.7).unwrap();
        u.set_two_electron(1, 3, 7, 5, 0.2).unwrap();
        assert!((u.antisymmetrized(1, 3, 5, 7).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            IntegralTable::zeros(4)
                .unwrap()
                .antisymmetrized(1, 2, 3, 4)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn index_errors() {
        let t = IntegralTable::zeros(4).unwrap();
        assert!(t.one_electron(0, 1).is_err());
        assert!(t.one_electron(1, 5).is_err());
        assert!(t.antisymmetrized(1, 2, 3, 9).is_err());
        let mut t = t;
        assert!(t.set_one_electron(1, 2, 1.0).is_err());
        assert!(t.set_two_electron(1, 1, 2, 1, 1.0).is_err());
    }

    #[test]
    fn antisymmetry_exhaustive() {
        let t = synthetic_table(SyntheticKind::RandomSymmetric, 3, 8).unwrap();
        for p in 1..=8 {
            for q in 1..=8 {
                for r in 1..=8 {
                    for s in 1..=8 {
                        assert_eq!(t.g_anti(p, q, r, s), -t.g_anti(p, q, s, r));
                    }
                }
            }
        }
    }

    #[test]
    fn spin_map_is_bijective() {
        let m = SpinOrbitalMap::new(5);
        let mut seen = [false; 11];
        for i in 1..=5 {
            for s in [Spin::Alpha, Spin::Beta] {
                let k = m.spin_orbital(i, s);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
                assert_eq!(m.spatial(k), i);
                assert_eq!(m.spin(k), s);
            }
        }
        assert!(seen[1..].iter().all(|&b| b));
    }
}
