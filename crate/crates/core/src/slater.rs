//! CI-matrix elements from the Slater–Condon rules.
//!
//! [`matrix_element`] applies the four case rules directly on bitmasks.
//! [`second_quantized_oracle`] evaluates the same quantity by brute-force
//! fermionic operator algebra and shares no code with it beyond integral
//! lookups.

use std::io::{BufRead, Write};

use crate::config_space::{neighbors, rank, Configuration, Rank, SpaceParams};
use crate::error::{Error, Result};
use crate::integrals::IntegralTable;

/// Largest dimension [`build_ci_matrix`] accepts by default.
pub const DEFAULT_MAX_DIMENSION: u64 = 20_000;

/// Largest orbital count the brute-force oracle accepts.
pub const ORACLE_MAX_ORBITALS: u32 = 12;

/// Whether singles and doubles carry the determinant-alignment parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignMode {
    /// The case rules without any permutation sign.
    NoParity,
    /// Standard Slater–Condon rules with maximum-coincidence parity.
    #[default]
    Fermionic,
}

/// Number of orbitals occupied in `x` but not in `y`.
pub fn excitation_degree(x: Configuration, y: Configuration) -> u32 {
    (x.0 & !y.0).count_ones()
}

#[inline]
fn bit(orbital: u32) -> u64 {
    1u64 << (orbital - 1)
}

// bits strictly between two distinct orbitals
#[inline]
fn between(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (bit(hi) - 1) & !((bit(lo) << 1) - 1)
}

#[inline]
fn parity(bits: u64) -> f64 {
    if bits.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn lowest_two(v: u64) -> (u32, u32) {
    let a = v.trailing_zeros() + 1;
    let b = (v & (v - 1)).trailing_zeros() + 1;
    (a, b)
}

fn check_pair(x: Configuration, y: Configuration, t: &IntegralTable) -> Result<()> {
    if x.n_electrons() != y.n_electrons() {
        return Err(Error::SpaceMismatch(format!(
            "{x} has {} electrons, {y} has {}",
            x.n_electrons(),
            y.n_electrons()
        )));
    }
    let top = 64 - (x.0 | y.0).leading_zeros();
    if top > t.n_spin_orbitals() {
        return Err(Error::SpaceMismatch(format!(
            "orbital {top} not covered by a table of {} spin orbitals",
            t.n_spin_orbitals()
        )));
    }
    Ok(())
}

/// `⟨x|H|y⟩` by the Slater–Condon rules (core energy excluded).
pub fn matrix_element(
    x: Configuration,
    y: Configuration,
    t: &IntegralTable,
    mode: SignMode,
) -> Result<f64> {
    check_pair(x, y, t)?;
    Ok(element(x, y, t, mode))
}

pub(crate) fn element(
    x: Configuration,
    y: Configuration,
    t: &IntegralTable,
    mode: SignMode,
) -> f64 {
    let only_x = x.0 & !y.0;
    let only_y = y.0 & !x.0;
    match only_x.count_ones() {
        0 => {
            let occ: Vec<u32> = x.orbitals().collect();
            let mut e = 0.0;
            for (k, &i) in occ.iter().enumerate() {
                e += t.h(i, i);
                for &j in &occ[k + 1..] {
                    e += t.g_anti(i, j, i, j);
                }
            }
            e
        }
        1 => {
            let d = only_x.trailing_zeros() + 1;
            let u = only_y.trailing_zeros() + 1;
            let common = x.0 & y.0;
            let mut e = t.h(d, u);
            for l in Configuration(common).orbitals() {
                e += t.g_anti(d, l, u, l);
            }
            match mode {
                SignMode::NoParity => e,
                SignMode::Fermionic => parity(common & between(d, u)) * e,
            }
        }
        2 => {
            let (p, q) = lowest_two(only_x);
            let (r, s) = lowest_two(only_y);
            let e = t.g_anti(p, q, r, s);
            match mode {
                SignMode::NoParity => e,
                SignMode::Fermionic => {
                    let common = x.0 & y.0;
                    parity(common & between(p, r)) * parity(common & between(q, s)) * e
                }
            }
        }
        _ => 0.0,
    }
}

// a_p |state⟩ with the sign of the occupied orbitals below p
fn annihilate(state: u64, orbital: u32) -> Option<(u64, f64)> {
    let b = bit(orbital);
    (state & b != 0).then(|| (state ^ b, parity(state & (b - 1))))
}

fn create(state: u64, orbital: u32) -> Option<(u64, f64)> {
    let b = bit(orbital);
    (state & b == 0).then(|| (state | b, parity(state & (b - 1))))
}

/// `⟨x|H|y⟩` with `H = Σ h_pq a†_p a_q + ½ Σ ⟨pq|rs⟩ a†_p a†_q a_s a_r`,
/// applied term by term to `|y⟩`.
pub fn second_quantized_oracle(
    x: Configuration,
    y: Configuration,
    t: &IntegralTable,
) -> Result<f64> {
    check_pair(x, y, t)?;
    let n = t.n_spin_orbitals();
    if n > ORACLE_MAX_ORBITALS {
        return Err(Error::CapExceeded {
            what: "oracle spin-orbital count",
            requested: n as u64,
            cap: ORACLE_MAX_ORBITALS as u64,
        });
    }
    let mut total = 0.0;
    for p in 1..=n {
        for q in 1..=n {
            let h = t.h(p, q);
            if h == 0.0 {
                continue;
            }
            let Some((s1, f1)) = annihilate(y.0, q) else {
                continue;
            };
            let Some((s2, f2)) = create(s1, p) else {
                continue;
            };
            if s2 == x.0 {
                total += h * f1 * f2;
            }
        }
    }
    let mut two = 0.0;
    for p in 1..=n {
        for q in 1..=n {
            for r in 1..=n {
                for s in 1..=n {
                    let g = t.g(p, q, r, s);
                    if g == 0.0 {
                        continue;
                    }
                    let Some((s1, f1)) = annihilate(y.0, r) else {
                        continue;
                    };
                    let Some((s2, f2)) = annihilate(s1, s) else {
                        continue;
                    };
                    let Some((s3, f3)) = create(s2, q) else {
                        continue;
                    };
                    let Some((s4, f4)) = create(s3, p) else {
                        continue;
                    };
                    if s4 == x.0 {
                        two += g * f1 * f2 * f3 * f4;
                    }
                }
            }
        }
    }
    Ok(total + 0.5 * two)
}

/// One stored entry of the CI matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElement {
    pub row: Rank,
    pub col: Rank,
    pub value: f64,
}

/// Upper triangle (with diagonal) of the CI matrix, every structurally
/// allowed entry stored, sorted by `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCiMatrix {
    params: SpaceParams,
    dimension: u64,
    triplets: Vec<MatrixElement>,
    max_abs: f64,
    core_energy: f64,
}

impl SparseCiMatrix {
    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn dimension(&self) -> usize {
        self.dimension as usize
    }

    pub fn triplets(&self) -> &[MatrixElement] {
        &self.triplets
    }

    /// `‖H‖_max`, the largest stored magnitude.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Scalar shift from the integral table; not part of any stored entry.
    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    /// Stored value at `(row, col)` in either triangle.
    pub fn get(&self, row: Rank, col: Rank) -> Option<f64> {
        let (a, b) = if row <= col { (row, col) } else { (col, row) };
        self.triplets
            .binary_search_by(|e| (e.row, e.col).cmp(&(a, b)))
            .ok()
            .map(|i| self.triplets[i].value)
    }

    /// Structural entries in each row, counting both triangles.
    pub fn row_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.dimension()];
        for e in &self.triplets {
            counts[e.row.index()] += 1;
            if e.row != e.col {
                counts[e.col.index()] += 1;
            }
        }
        counts
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dimension();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for e in &self.triplets {
            m[(e.row.index(), e.col.index())] = e.value;
            m[(e.col.index(), e.row.index())] = e.value;
        }
        m
    }

    /// Writes `# n_o n_e dimension` then one `row col value` line per entry.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# {} {} {}",
            self.params.n_orbitals(),
            self.params.n_electrons(),
            self.dimension
        )?;
        for e in &self.triplets {
            writeln!(w, "{} {} {:.16e}", e.row, e.col, e.value)?;
        }
        Ok(())
    }
}

/// Parsed triplet file: header plus entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletFile {
    pub n_orbitals: u32,
    pub n_electrons: u32,
    pub dimension: u64,
    pub entries: Vec<MatrixElement>,
}

pub fn read_triplets<R: BufRead>(r: R) -> Result<TripletFile> {
    let bad = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = r.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| bad(1, "empty triplet file".into()))?;
    let first = first.map_err(|e| bad(1, e.to_string()))?;
    let head: Vec<u64> = first
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| bad(1, "missing `# n_o n_e dimension` header".into()))?
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad(1, "non-integer header field".into()))?;
    let [n_o, n_e, dim] = head[..] else {
        return Err(bad(1, "header needs three fields".into()));
    };
    let mut entries = Vec::new();
    for (n, line) in lines {
        let line = line.map_err(|e| bad(n + 1, e.to_string()))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let parsed = (|| {
            let [a, b, v] = toks[..] else { return None };
            Some(MatrixElement {
                row: Rank(a.parse().ok()?),
                col: Rank(b.parse().ok()?),
                value: v.parse().ok()?,
            })
        })();
        entries.push(parsed.ok_or_else(|| bad(n + 1, format!("bad triplet {line:?}")))?);
    }
    Ok(TripletFile {
        n_orbitals: n_o as u32,
        n_electrons: n_e as u32,
        dimension: dim,
        entries,
    })
}

pub fn build_ci_matrix(
    p: SpaceParams,
    t: &IntegralTable,
    mode: SignMode,
) -> Result<SparseCiMatrix> {
    build_ci_matrix_capped(p, t, mode, DEFAULT_MAX_DIMENSION)
}

/// Full CI matrix over `p`; refuses spaces larger than `max_dimension`.
pub fn build_ci_matrix_capped(
    p: SpaceParams,
    t: &IntegralTable,
    mode: SignMode,
    max_dimension: u64,
) -> Result<SparseCiMatrix> {
    let dim = p.dimension()?;
    if dim > max_dimension {
        return Err(Error::CapExceeded {
            what: "CI dimension",
            requested: dim,
            cap: max_dimension,
        });
    }
    if t.n_spin_orbitals() < p.n_orbitals() {
        return Err(Error::SpaceMismatch(format!(
            "space has {} orbitals, table only {}",
            p.n_orbitals(),
            t.n_spin_orbitals()
        )));
    }
    let mut triplets = Vec::new();
    let mut max_abs: f64 = 0.0;
    for (q, x) in p.configurations().enumerate() {
        let row = Rank(q as u64);
        let mut upper: Vec<(Rank, f64)> = vec![(row, element(x, x, t, mode))];
        for degree in [1, 2] {
            for y in neighbors(x, degree, p).into_iter().filter(|&y| y > x) {
                upper.push((rank(y, p)?, element(x, y, t, mode)));
            }
        }
        upper.sort_by_key(|&(c, _)| c);
        for (col, value) in upper {
            max_abs = max_abs.max(value.abs());
            triplets.push(MatrixElement { row, col, value });
        }
    }
    Ok(SparseCiMatrix {
        params: p,
        dimension: dim,
        triplets,
        max_abs,
        core_energy: t.core_energy(),
    })
}
