//! Fixed-electron-number configuration spaces.
//!
//! A configuration (one Slater determinant label) is the occupancy bitmask
//! `x = Σ 2^(χ-1)` over its occupied spin orbitals `χ ∈ [1, n_o]`. Ranks are
//! 0-based positions in the ascending list of all bitmasks with `n_e` set
//! bits, computed with the combinatorial number system. Because bitmasks of
//! equal popcount compare in colexicographic order, the rank map is monotone.

use std::fmt;

use crate::error::{Error, Result};

/// Widest space representable in a `u64` bitmask.
pub const MAX_ORBITALS: u32 = 63;

const fn pascal() -> [[u64; 64]; 64] {
    let mut t = [[0u64; 64]; 64];
    let mut n = 0;
    while n < 64 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; 64]; 64] = pascal();

/// `C(n, k)` for `n ≤ 63`; zero when `k > n`.
#[inline]
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        0
    } else {
        BINOMIAL[n as usize][k as usize]
    }
}

/// Number of spin orbitals and electrons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    n_orbitals: u32,
    n_electrons: u32,
}

impl SpaceParams {
    pub fn new(n_orbitals: u32, n_electrons: u32) -> Result<Self> {
        if n_orbitals == 0 {
            return Err(Error::InvalidSpace("need at least one orbital".into()));
        }
        if n_orbitals > MAX_ORBITALS {
            return Err(Error::InvalidSpace(format!(
                "{n_orbitals} orbitals exceeds the {MAX_ORBITALS}-bit mask width"
            )));
        }
        if n_electrons > n_orbitals {
            return Err(Error::InvalidSpace(format!(
                "{n_electrons} electrons do not fit in {n_orbitals} orbitals"
            )));
        }
        Ok(Self {
            n_orbitals,
            n_electrons,
        })
    }

    pub fn n_orbitals(&self) -> u32 {
        self.n_orbitals
    }

    pub fn n_electrons(&self) -> u32 {
        self.n_electrons
    }

    pub fn n_holes(&self) -> u32 {
        self.n_orbitals - self.n_electrons
    }

    fn full_mask(&self) -> u64 {
        (1u64 << self.n_orbitals) - 1
    }

    /// Number of determinants, `C(n_o, n_e)`.
    pub fn dimension(&self) -> Result<u64> {
        dimension(*self)
    }

    /// Structural nonzeros per CI-matrix row.
    pub fn sparsity(&self) -> u64 {
        sparsity(*self)
    }

    /// Whether `x` has exactly `n_e` electrons, all below `n_o`.
    pub fn contains(&self, x: Configuration) -> bool {
        x.0 & !self.full_mask() == 0 && x.0.count_ones() == self.n_electrons
    }

    pub fn check(&self, x: Configuration) -> Result<()> {
        if x.0 & !self.full_mask() != 0 {
            return Err(Error::InvalidConfiguration(format!(
                "bitmask {:#b} has orbitals above {}",
                x.0, self.n_orbitals
            )));
        }
        if x.0.count_ones() != self.n_electrons {
            return Err(Error::InvalidConfiguration(format!(
                "bitmask {:#b} holds {} electrons, expected {}",
                x.0,
                x.0.count_ones(),
                self.n_electrons
            )));
        }
        Ok(())
    }

    /// The lowest configuration, orbitals `1..=n_e`.
    pub fn first(&self) -> Configuration {
        Configuration((1u64 << self.n_electrons) - 1)
    }

    /// All configurations in rank order.
    pub fn configurations(&self) -> Configurations {
        Configurations {
            next: Some(self.first()),
            limit: self.full_mask(),
        }
    }
}

/// Iterator over every configuration of a space in ascending bitmask order.
#[derive(Debug, Clone)]
pub struct Configurations {
    next: Option<Configuration>,
    limit: u64,
}

impl Iterator for Configurations {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        let cur = self.next?;
        self.next = next_same_popcount(cur.0)
            .filter(|&n| n & !self.limit == 0)
            .map(Configuration);
        Some(cur)
    }
}

// Gosper's hack.
fn next_same_popcount(v: u64) -> Option<u64> {
    if v == 0 {
        return None;
    }
    let c = v & v.wrapping_neg();
    let r = v.checked_add(c)?;
    Some((((r ^ v) >> 2) / c) | r)
}

/// Occupancy bitmask of one determinant; bit `i-1` set means orbital `i` is occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(pub u64);

impl Configuration {
    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn n_electrons(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_occupied(self, orbital: u32) -> bool {
        (1..=64).contains(&orbital) && self.0 >> (orbital - 1) & 1 == 1
    }

    /// Occupied orbitals in ascending order (1-based).
    pub fn orbitals(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(b + 1)
            }
        })
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, o) in self.orbitals().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "}}")
    }
}

/// 0-based position of a configuration in ascending bitmask order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(pub u64);

impl Rank {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Occupied and unoccupied orbital counts strictly below a reference orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitalCounts {
    pub n_incl: u32,
    pub n_excl: u32,
}

impl OrbitalCounts {
    pub fn below(x: Configuration, orbital: u32) -> Self {
        Self {
            n_incl: n_incl(x, orbital),
            n_excl: n_excl(x, orbital),
        }
    }
}

/// Builds the bitmask for a set of orbitals, checking it against `p`.
pub fn encode(orbitals: &[u32], p: SpaceParams) -> Result<Configuration> {
    let mut bits = 0u64;
    for &o in orbitals {
        if o == 0 || o > p.n_orbitals {
            return Err(Error::InvalidConfiguration(format!(
                "orbital {o} outside [1, {}]",
                p.n_orbitals
            )));
        }
        let bit = 1u64 << (o - 1);
        if bits & bit != 0 {
            return Err(Error::InvalidConfiguration(format!(
                "orbital {o} listed twice"
            )));
        }
        bits |= bit;
    }
    if orbitals.len() != p.n_electrons as usize {
        return Err(Error::InvalidConfiguration(format!(
            "{} orbitals given for {} electrons",
            orbitals.len(),
            p.n_electrons
        )));
    }
    Ok(Configuration(bits))
}

pub fn orbital_list(x: Configuration) -> Vec<u32> {
    x.orbitals().collect()
}

/// `C(n_o, n_e)`, with overflow reported rather than wrapped.
pub fn dimension(p: SpaceParams) -> Result<u64> {
    let (n, k) = (p.n_orbitals as u128, p.n_electrons as u128);
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul(n - i)
            .ok_or_else(|| Error::Overflow(format!("C({}, {})", p.n_orbitals, p.n_electrons)))?
            / (i + 1);
    }
    u64::try_from(acc)
        .map_err(|_| Error::Overflow(format!("C({}, {})", p.n_orbitals, p.n_electrons)))
}

/// Combinatorial-number-system rank, `Σ_k C(c_k, k)` over the 0-based bit
/// positions `c_1 < c_2 < …` of `x`.
pub fn rank(x: Configuration, p: SpaceParams) -> Result<Rank> {
    p.check(x)?;
    let q = x
        .orbitals()
        .enumerate()
        .map(|(k, o)| binomial(o - 1, k as u32 + 1))
        .sum();
    Ok(Rank(q))
}

pub fn unrank(q: Rank, p: SpaceParams) -> Result<Configuration> {
    let dim = dimension(p)?;
    if q.0 >= dim {
        return Err(Error::RankOutOfRange {
            rank: q.0,
            dimension: dim,
        });
    }
    let mut rest = q.0;
    let mut bits = 0u64;
    let mut c = p.n_orbitals;
    for k in (1..=p.n_electrons).rev() {
        // largest c with C(c, k) <= rest
        c -= 1;
        while binomial(c, k) > rest {
            c -= 1;
        }
        rest -= binomial(c, k);
        bits |= 1u64 << c;
    }
    Ok(Configuration(bits))
}

/// Occupied orbitals strictly below `orbital`, i.e. `popcount(x mod 2^(i-1))`.
pub fn n_incl(x: Configuration, orbital: u32) -> u32 {
    debug_assert!(orbital >= 1);
    let below = if orbital >= 65 {
        u64::MAX
    } else {
        (1u64 << (orbital - 1)) - 1
    };
    (x.0 & below).count_ones()
}

/// Unoccupied orbitals strictly below `orbital`.
pub fn n_excl(x: Configuration, orbital: u32) -> u32 {
    (orbital - 1) - n_incl(x, orbital)
}

/// Configurations at excitation degree `degree` from `x`, ascending.
///
/// Degrees other than 1 and 2 return an empty list; degree 0 is `x` itself
/// and is never listed.
pub fn neighbors(x: Configuration, degree: u32, p: SpaceParams) -> Vec<Configuration> {
    let occ: Vec<u64> = bit_list(x.0);
    let vir: Vec<u64> = bit_list(!x.0 & p.full_mask());
    let mut out = Vec::new();
    match degree {
        1 => {
            out.reserve(occ.len() * vir.len());
            for &o in &occ {
                for &v in &vir {
                    out.push(Configuration(x.0 ^ o ^ v));
                }
            }
        }
        2 => {
            for (a, &o1) in occ.iter().enumerate() {
                for &o2 in &occ[a + 1..] {
                    for (b, &v1) in vir.iter().enumerate() {
                        for &v2 in &vir[b + 1..] {
                            out.push(Configuration(x.0 ^ o1 ^ o2 ^ v1 ^ v2));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out.sort_unstable();
    out
}

fn bit_list(mut v: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(v.count_ones() as usize);
    while v != 0 {
        out.push(v & v.wrapping_neg());
        v &= v - 1;
    }
    out
}

/// `C(n_e,2)·C(n_o-n_e,2) + n_e·(n_o-n_e) + 1`.
pub fn sparsity(p: SpaceParams) -> u64 {
    let ne = p.n_electrons as u64;
    let nh = p.n_holes() as u64;
    ne * ne.saturating_sub(1) * nh * nh.saturating_sub(1) / 4 + ne * nh + 1
}

/// Per-row neighbor count for one excitation class.
pub fn class_size(p: SpaceParams, degree: u32) -> u64 {
    binomial(p.n_electrons, degree) * binomial(p.n_holes(), degree)
}
