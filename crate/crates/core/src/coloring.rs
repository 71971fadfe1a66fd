//! Edge colorings of the CI interaction graph and the one-sparse split they induce.
//!
//! Two schemes are provided:
//!
//! * **Pair labels.** An edge `x < y` of excitation class `c` gets
//!   `(e_{x→y}, e_{y→x})`, where `e_{x→y}` counts the class-`c` neighbors of
//!   `x` that are `≤ y` and `e_{y→x}` counts the class-`c` neighbors of `y`
//!   that are `≤ x`. The counting definition is authoritative; the closed
//!   forms in [`pair_labels_formula`] are evaluated alongside it and every
//!   disagreement is reported.
//! * **Excitation descriptors.** An edge is colored by the orbitals it
//!   exchanges. Applying a descriptor to a configuration is an involution,
//!   so each color class is a perfect pairing on its support.
//!
//! Every node additionally carries the [`EdgeColor::Diagonal`] self-loop.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use crate::config_space::{
    binomial, n_excl, n_incl, neighbors, rank, unrank, Configuration, Rank, SpaceParams,
};
use crate::error::{Error, Result};
use crate::slater::{excitation_degree, SparseCiMatrix, DEFAULT_MAX_DIMENSION};

/// Color of one edge (or of the self-loop).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    Diagonal,
    PairLabel {
        class: u8,
        e_low_high: u64,
        e_high_low: u64,
    },
    /// The two orbitals whose occupancy differs, `a < b`.
    SingleDescriptor {
        a: u32,
        b: u32,
    },
    /// Two disjoint orbital pairs, each ascending, `first < second`.
    DoubleDescriptor {
        first: (u32, u32),
        second: (u32, u32),
    },
}

impl EdgeColor {
    /// Canonical double descriptor from two arbitrary disjoint pairs.
    pub fn double(a: (u32, u32), b: (u32, u32)) -> Self {
        let sort = |(p, q): (u32, u32)| if p <= q { (p, q) } else { (q, p) };
        let (a, b) = (sort(a), sort(b));
        let (first, second) = if a <= b { (a, b) } else { (b, a) };
        EdgeColor::DoubleDescriptor { first, second }
    }

    pub fn single(a: u32, b: u32) -> Self {
        EdgeColor::SingleDescriptor {
            a: a.min(b),
            b: a.max(b),
        }
    }

    /// Excitation class: 0 for the diagonal, else 1 or 2.
    pub fn class(&self) -> u8 {
        match *self {
            EdgeColor::Diagonal => 0,
            EdgeColor::PairLabel { class, .. } => class,
            EdgeColor::SingleDescriptor { .. } => 1,
            EdgeColor::DoubleDescriptor { .. } => 2,
        }
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeColor::Diagonal => write!(f, "diagonal"),
            EdgeColor::PairLabel {
                class,
                e_low_high,
                e_high_low,
            } => write!(f, "pair{class}({e_low_high},{e_high_low})"),
            EdgeColor::SingleDescriptor { a, b } => write!(f, "single({a},{b})"),
            EdgeColor::DoubleDescriptor { first, second } => write!(
                f,
                "double({},{}|{},{})",
                first.0, first.1, second.0, second.1
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Descriptor,
    PairLabel,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Descriptor => "descriptor",
            Scheme::PairLabel => "pairlabel",
        })
    }
}

fn edge_degree(x: Configuration, y: Configuration, p: SpaceParams) -> Result<u32> {
    p.check(x)?;
    p.check(y)?;
    let degree = excitation_degree(x, y);
    if degree == 0 || degree > 2 {
        return Err(Error::NotAnEdge {
            x: x.0,
            y: y.0,
            degree,
        });
    }
    Ok(degree)
}

fn ordered_edge(x: Configuration, y: Configuration, p: SpaceParams) -> Result<u32> {
    let degree = edge_degree(x, y, p)?;
    if x >= y {
        return Err(Error::InvalidConfiguration(format!(
            "pair labels need x < y, got {} >= {}",
            x.0, y.0
        )));
    }
    Ok(degree)
}

/// Pair labels by exhaustive neighbor counting; the normative definition.
pub fn pair_labels_oracle(
    x: Configuration,
    y: Configuration,
    p: SpaceParams,
) -> Result<(u64, u64)> {
    let degree = ordered_edge(x, y, p)?;
    let e_xy = neighbors(x, degree, p).iter().filter(|&&v| v <= y).count() as u64;
    let e_yx = neighbors(y, degree, p).iter().filter(|&&v| v <= x).count() as u64;
    Ok((e_xy, e_yx))
}

/// Closed-form pair labels next to the counting labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaLabels {
    pub formula: (u64, u64),
    pub oracle: (u64, u64),
}

impl FormulaLabels {
    pub fn agrees(&self) -> bool {
        self.formula == self.oracle
    }
}

fn top_two(v: u64) -> (u32, u32) {
    let hi = 64 - v.leading_zeros();
    let lo = 64 - (v & !(1u64 << (hi - 1))).leading_zeros();
    (hi, lo)
}

/// Occupied orbitals of `x` strictly above `orbital`.
fn occupied_above(x: Configuration, orbital: u32) -> impl Iterator<Item = u32> {
    x.orbitals().filter(move |&i| i > orbital)
}

/// The closed forms, evaluated term by term:
///
/// * singles: `e_xy = R1 + n_incl(u)·n_excl(u) + 1`, `e_yx = R1 + n_excl(d) + 1`,
///   with `R1 = Σ_{i occupied in x, i > u} n_excl(i)`;
/// * doubles: `e_xy = R2 + C(n_incl(u_h),2)·C(n_excl(u_h),2) + 1`,
///   `e_yx = R2 + C(n_excl(d_h),2) + n_excl(d_ℓ) + 1`,
///   with `R2 = Σ_{i occupied in x, i > u_h} n_incl(i)·C(n_excl(i),2)`.
///
/// All counts are taken on `x`, strictly below the reference orbital.
pub fn pair_labels_formula(
    x: Configuration,
    y: Configuration,
    p: SpaceParams,
) -> Result<FormulaLabels> {
    let degree = ordered_edge(x, y, p)?;
    let only_x = x.0 & !y.0;
    let only_y = y.0 & !x.0;
    let formula = if degree == 1 {
        let d = only_x.trailing_zeros() + 1;
        let u = only_y.trailing_zeros() + 1;
        let r1: u64 = occupied_above(x, u).map(|i| n_excl(x, i) as u64).sum();
        let e_xy = r1 + (n_incl(x, u) * n_excl(x, u)) as u64 + 1;
        let e_yx = r1 + n_excl(x, d) as u64 + 1;
        (e_xy, e_yx)
    } else {
        let (u_h, _u_l) = top_two(only_y);
        let (d_h, d_l) = top_two(only_x);
        let r2: u64 = occupied_above(x, u_h)
            .map(|i| n_incl(x, i) as u64 * binomial(n_excl(x, i), 2))
            .sum();
        let e_xy = r2 + binomial(n_incl(x, u_h), 2) * binomial(n_excl(x, u_h), 2) + 1;
        let e_yx = r2 + binomial(n_excl(x, d_h), 2) + n_excl(x, d_l) as u64 + 1;
        (e_xy, e_yx)
    };
    Ok(FormulaLabels {
        formula,
        oracle: pair_labels_oracle(x, y, p)?,
    })
}

/// Pair-label color from the counting labels.
pub fn pair_label_color(x: Configuration, y: Configuration, p: SpaceParams) -> Result<EdgeColor> {
    let degree = ordered_edge(x, y, p)?;
    let (e_low_high, e_high_low) = pair_labels_oracle(x, y, p)?;
    Ok(EdgeColor::PairLabel {
        class: degree as u8,
        e_low_high,
        e_high_low,
    })
}

/// Orbitals exchanged along the edge; symmetric in `x` and `y`.
pub fn descriptor_color(x: Configuration, y: Configuration, p: SpaceParams) -> Result<EdgeColor> {
    let degree = edge_degree(x, y, p)?;
    let only_x = x.0 & !y.0;
    let only_y = y.0 & !x.0;
    Ok(if degree == 1 {
        EdgeColor::single(only_x.trailing_zeros() + 1, only_y.trailing_zeros() + 1)
    } else {
        let (a1, a0) = top_two(only_x);
        let (b1, b0) = top_two(only_y);
        EdgeColor::double((a0, a1), (b0, b1))
    })
}

fn check_orbitals(p: SpaceParams, orbitals: &[u32]) -> Result<()> {
    match orbitals.iter().find(|&&o| o == 0 || o > p.n_orbitals()) {
        Some(o) => Err(Error::InvalidConfiguration(format!(
            "color names orbital {o} outside [1, {}]",
            p.n_orbitals()
        ))),
        None => Ok(()),
    }
}

fn mask(orbitals: &[u32]) -> u64 {
    orbitals.iter().fold(0, |m, &o| m | 1u64 << (o - 1))
}

/// The configuration joined to `x` by an edge of color `m`, if any.
pub fn col_oracle(x: Configuration, m: EdgeColor, p: SpaceParams) -> Result<Option<Configuration>> {
    p.check(x)?;
    match m {
        EdgeColor::Diagonal => Ok(Some(x)),
        EdgeColor::SingleDescriptor { a, b } => {
            check_orbitals(p, &[a, b])?;
            let pair = mask(&[a, b]);
            Ok(((x.0 & pair).count_ones() == 1).then_some(Configuration(x.0 ^ pair)))
        }
        EdgeColor::DoubleDescriptor { first, second } => {
            check_orbitals(p, &[first.0, first.1, second.0, second.1])?;
            let (f, s) = (mask(&[first.0, first.1]), mask(&[second.0, second.1]));
            let swap = (x.0 & f == f && x.0 & s == 0) || (x.0 & s == s && x.0 & f == 0);
            Ok(swap.then_some(Configuration(x.0 ^ f ^ s)))
        }
        EdgeColor::PairLabel {
            class,
            e_low_high,
            e_high_low,
        } => {
            if class != 1 && class != 2 {
                return Err(Error::InvalidConfiguration(format!(
                    "pair label class {class} is not 1 or 2"
                )));
            }
            let degree = class as u32;
            let own = neighbors(x, degree, p);
            let position = |of: Configuration, from: Configuration| {
                neighbors(from, degree, p)
                    .iter()
                    .filter(|&&v| v <= of)
                    .count() as u64
            };
            let pick = |k: u64| (k >= 1).then(|| own.get(k as usize - 1).copied()).flatten();
            // x as the lower endpoint: y is x's e_low_high-th neighbor
            let up = pick(e_low_high).filter(|&y| y > x && position(x, y) == e_high_low);
            // x as the upper endpoint: y is x's e_high_low-th neighbor
            let down = pick(e_high_low).filter(|&y| y < x && position(x, y) == e_low_high);
            match (up, down) {
                (Some(a), Some(b)) => Err(Error::ImproperColoring {
                    node: x.0,
                    color: m.to_string(),
                    first: b.0,
                    second: a.0,
                }),
                (a, b) => Ok(a.or(b)),
            }
        }
    }
}

/// Cached neighbor lists for labeling every edge of one space.
struct PairLabelIndex {
    params: SpaceParams,
    lists: [Vec<Vec<Configuration>>; 2],
}

impl PairLabelIndex {
    fn new(p: SpaceParams) -> Self {
        let build = |deg| p.configurations().map(|x| neighbors(x, deg, p)).collect();
        Self {
            params: p,
            lists: [build(1), build(2)],
        }
    }

    fn position(&self, of: Configuration, from: Configuration, degree: u32) -> Result<u64> {
        let list = &self.lists[degree as usize - 1][rank(from, self.params)?.index()];
        Ok(list.partition_point(|&v| v <= of) as u64)
    }

    fn color(&self, x: Configuration, y: Configuration, degree: u32) -> Result<EdgeColor> {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        Ok(EdgeColor::PairLabel {
            class: degree as u8,
            e_low_high: self.position(hi, lo, degree)?,
            e_high_low: self.position(lo, hi, degree)?,
        })
    }
}

/// Colors edges of one space under one scheme.
pub struct Colorer {
    params: SpaceParams,
    pair_index: Option<PairLabelIndex>,
}

impl Colorer {
    pub fn new(p: SpaceParams, scheme: Scheme) -> Self {
        Self {
            params: p,
            pair_index: (scheme == Scheme::PairLabel).then(|| PairLabelIndex::new(p)),
        }
    }

    pub fn scheme(&self) -> Scheme {
        if self.pair_index.is_some() {
            Scheme::PairLabel
        } else {
            Scheme::Descriptor
        }
    }

    /// Color of an edge or the self-loop, independent of argument order.
    pub fn color(&self, x: Configuration, y: Configuration) -> Result<EdgeColor> {
        if x == y {
            self.params.check(x)?;
            return Ok(EdgeColor::Diagonal);
        }
        match &self.pair_index {
            None => descriptor_color(x, y, self.params),
            Some(index) => index.color(x, y, edge_degree(x, y, self.params)?),
        }
    }
}

/// Two edges of the same color meeting at `node`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub node: Configuration,
    pub color: EdgeColor,
    pub first: Configuration,
    pub second: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormulaMismatch {
    pub x: Configuration,
    pub y: Configuration,
    pub formula: (u64, u64),
    pub oracle: (u64, u64),
}

/// Outcome of an exhaustive properness check.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringReport {
    pub scheme: Scheme,
    pub params: SpaceParams,
    pub dimension: u64,
    pub single_edges: u64,
    pub double_edges: u64,
    /// Distinct colors over the whole graph, diagonal included.
    pub colors_used: u64,
    /// Incident color count (diagonal included) → number of nodes.
    pub incident_colors: BTreeMap<u64, u64>,
    pub violations: Vec<Violation>,
    /// Paths `x < y < z` whose two edges share a pair label.
    pub trio_violations: Vec<(Configuration, Configuration, Configuration)>,
    pub formula_edges: u64,
    pub formula_mismatches: Vec<FormulaMismatch>,
}

impl ColoringReport {
    pub fn is_proper(&self) -> bool {
        self.violations.is_empty()
    }

    /// `key: value` lines.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "scheme: {}", self.scheme)?;
        writeln!(w, "n_orbitals: {}", self.params.n_orbitals())?;
        writeln!(w, "n_electrons: {}", self.params.n_electrons())?;
        writeln!(w, "dimension: {}", self.dimension)?;
        writeln!(w, "sparsity: {}", self.params.sparsity())?;
        writeln!(w, "single_edges: {}", self.single_edges)?;
        writeln!(w, "double_edges: {}", self.double_edges)?;
        writeln!(w, "colors_used: {}", self.colors_used)?;
        for (count, nodes) in &self.incident_colors {
            writeln!(w, "incident_colors.{count}: {nodes}")?;
        }
        writeln!(w, "proper: {}", self.is_proper())?;
        writeln!(w, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(
                w,
                "violation: node={} color={} first={} second={}",
                v.node.0, v.color, v.first.0, v.second.0
            )?;
        }
        writeln!(w, "trio_violations: {}", self.trio_violations.len())?;
        for (x, y, z) in &self.trio_violations {
            writeln!(w, "trio: {} {} {}", x.0, y.0, z.0)?;
        }
        writeln!(w, "formula_edges: {}", self.formula_edges)?;
        writeln!(w, "formula_mismatches: {}", self.formula_mismatches.len())?;
        for m in &self.formula_mismatches {
            writeln!(
                w,
                "mismatch: x={} y={} formula=({},{}) oracle=({},{})",
                m.x.0, m.y.0, m.formula.0, m.formula.1, m.oracle.0, m.oracle.1
            )?;
        }
        Ok(())
    }
}

pub fn verify_properness(p: SpaceParams, scheme: Scheme) -> Result<ColoringReport> {
    verify_properness_capped(p, scheme, DEFAULT_MAX_DIMENSION)
}

/// Checks every node for two incident edges of equal color.
pub fn verify_properness_capped(
    p: SpaceParams,
    scheme: Scheme,
    max_dimension: u64,
) -> Result<ColoringReport> {
    let dimension = p.dimension()?;
    if dimension > max_dimension {
        return Err(Error::CapExceeded {
            what: "enumeration dimension",
            requested: dimension,
            cap: max_dimension,
        });
    }
    let colorer = Colorer::new(p, scheme);
    let mut colors = BTreeSet::from([EdgeColor::Diagonal]);
    let mut incident_colors = BTreeMap::new();
    let mut violations = Vec::new();
    let mut trio_violations = Vec::new();
    let mut formula_mismatches = Vec::new();
    let (mut single_edges, mut double_edges, mut formula_edges) = (0, 0, 0);

    for x in p.configurations() {
        let mut incident: Vec<(EdgeColor, Configuration)> = Vec::new();
        for degree in [1, 2] {
            for y in neighbors(x, degree, p) {
                let c = colorer.color(x, y)?;
                incident.push((c, y));
                if y > x {
                    colors.insert(c);
                    if degree == 1 {
                        single_edges += 1;
                    } else {
                        double_edges += 1;
                    }
                    if scheme == Scheme::PairLabel {
                        formula_edges += 1;
                        let f = pair_labels_formula(x, y, p)?;
                        if !f.agrees() {
                            formula_mismatches.push(FormulaMismatch {
                                x,
                                y,
                                formula: f.formula,
                                oracle: f.oracle,
                            });
                        }
                    }
                }
            }
        }
        incident.sort();
        let mut distinct = 1u64;
        for (k, w) in incident.iter().enumerate() {
            if k > 0 && incident[k - 1].0 == w.0 {
                violations.push(Violation {
                    node: x,
                    color: w.0,
                    first: incident[k - 1].1,
                    second: w.1,
                });
                if incident[k - 1].1 < x && w.1 > x {
                    trio_violations.push((incident[k - 1].1, x, w.1));
                }
            } else {
                distinct += 1;
            }
        }
        *incident_colors.entry(distinct).or_insert(0) += 1;
    }
    violations.sort();
    trio_violations.sort();
    formula_mismatches.sort();
    Ok(ColoringReport {
        scheme,
        params: p,
        dimension,
        single_edges,
        double_edges,
        colors_used: colors.len() as u64,
        incident_colors,
        violations,
        trio_violations,
        formula_edges,
        formula_mismatches,
    })
}

/// One color class as a Hermitian one-sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OneSparseTerm {
    pub color: EdgeColor,
    pub fixed: Vec<(Rank, f64)>,
    pub pairs: Vec<(Rank, Rank, f64)>,
}

impl OneSparseTerm {
    /// No rank appears twice across `fixed` and `pairs`.
    pub fn is_one_sparse(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.fixed.iter().all(|&(q, _)| seen.insert(q))
            && self
                .pairs
                .iter()
                .all(|&(a, b, _)| a < b && seen.insert(a) && seen.insert(b))
    }

    pub fn to_dense(&self, dim: usize) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for &(q, v) in &self.fixed {
            m[(q.index(), q.index())] = v;
        }
        for &(a, b, v) in &self.pairs {
            m[(a.index(), b.index())] = v;
            m[(b.index(), a.index())] = v;
        }
        m
    }
}

/// Splits `h` into one term per color with nonempty support, diagonal first.
pub fn decompose(h: &SparseCiMatrix, scheme: Scheme) -> Result<Vec<OneSparseTerm>> {
    let p = h.params();
    let colorer = Colorer::new(p, scheme);
    let mut terms: BTreeMap<EdgeColor, (OneSparseTerm, BTreeMap<Rank, Rank>)> = BTreeMap::new();
    for e in h.triplets() {
        let x = unrank(e.row, p)?;
        let y = unrank(e.col, p)?;
        let color = colorer.color(x, y)?;
        let (term, owner) = terms.entry(color).or_insert_with(|| {
            (
                OneSparseTerm {
                    color,
                    fixed: Vec::new(),
                    pairs: Vec::new(),
                },
                BTreeMap::new(),
            )
        });
        for (q, other) in [(e.row, e.col), (e.col, e.row)] {
            if let Some(&prev) = owner.get(&q) {
                return Err(Error::ImproperColoring {
                    node: unrank(q, p)?.0,
                    color: color.to_string(),
                    first: unrank(prev, p)?.0,
                    second: unrank(other, p)?.0,
                });
            }
            owner.insert(q, other);
            if e.row == e.col {
                break;
            }
        }
        if e.row == e.col {
            term.fixed.push((e.row, e.value));
        } else {
            term.pairs.push((e.row, e.col, e.value));
        }
    }
    Ok(terms.into_values().map(|(t, _)| t).collect())
}

/// Coloring export: a `# legend id color` block, then `q_low q_high class id` per edge.
pub fn write_coloring<W: Write>(p: SpaceParams, scheme: Scheme, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Numerical(format!("write failed: {e}"));
    let colorer = Colorer::new(p, scheme);
    let mut edges = Vec::new();
    for x in p.configurations() {
        let qx = rank(x, p)?;
        for degree in [1, 2] {
            for y in neighbors(x, degree, p).into_iter().filter(|&y| y > x) {
                edges.push((qx, rank(y, p)?, degree, colorer.color(x, y)?));
            }
        }
    }
    let mut legend: BTreeSet<EdgeColor> = edges.iter().map(|e| e.3).collect();
    legend.insert(EdgeColor::Diagonal);
    let ids: BTreeMap<EdgeColor, usize> = legend.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    writeln!(
        w,
        "# scheme {scheme} n_o {} n_e {}",
        p.n_orbitals(),
        p.n_electrons()
    )
    .map_err(io)?;
    for (c, id) in &ids {
        writeln!(w, "# legend {id} {c}").map_err(io)?;
    }
    edges.sort();
    for (a, b, class, c) in edges {
        writeln!(w, "{a} {b} {class} {}", ids[&c]).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::{synthetic_table, IntegralTable, SyntheticKind};
    use crate::slater::{build_ci_matrix, SignMode};

    fn sp(n: u32, e: u32) -> SpaceParams {
        SpaceParams::new(n, e).unwrap()
    }

    const C: fn(u64) -> Configuration = Configuration;

    #[test]
    fn oracle_label_examples() {
        let p = sp(4, 2);
        assert_eq!(pair_labels_oracle(C(3), C(5), p).unwrap(), (1, 1));
        assert_eq!(pair_labels_oracle(C(3), C(6), p).unwrap(), (2, 1));
        assert_eq!(pair_labels_oracle(C(9), C(12), p).unwrap(), (4, 3));
        assert!(pair_labels_oracle(C(5), C(3), p).is_err());
        assert!(pair_labels_oracle(C(3), C(3), p).is_err());
    }

    // hand evaluation: x={1,2}, y={1,3}: u=3, d=2, R1=0, n_incl(u)=2, n_excl(u)=0
    // x={1,2}, y={2,3}: u=3, d=1, same counts, so e_xy=1 while the count is 2
    #[test]
    fn formula_examples() {
        let p = sp(4, 2);
        let f = pair_labels_formula(C(3), C(5), p).unwrap();
        assert_eq!(f.formula.0, 1);
        assert_eq!(f.oracle.0, 1);
        let f = pair_labels_formula(C(3), C(6), p).unwrap();
        assert_eq!(f.formula, (1, 1));
        assert_eq!(f.oracle, (2, 1));
        assert!(!f.agrees());
        assert!(pair_labels_formula(C(3), C(3), p).is_err());
    }

    #[test]
    fn pair_label_colors() {
        let p = sp(4, 2);
        let pl = |c, i, j| EdgeColor::PairLabel {
            class: c,
            e_low_high: i,
            e_high_low: j,
        };
        assert_eq!(pair_label_color(C(3), C(5), p).unwrap(), pl(1, 1, 1));
        assert_eq!(pair_label_color(C(3), C(12), p).unwrap(), pl(2, 1, 1));
        assert_eq!(pair_label_color(C(9), C(12), p).unwrap(), pl(1, 4, 3));
        let colorer = Colorer::new(p, Scheme::PairLabel);
        assert_eq!(colorer.color(C(12), C(9)).unwrap(), pl(1, 4, 3));
    }

    #[test]
    fn descriptor_examples() {
        let p = sp(4, 2);
        assert_eq!(
            descriptor_color(C(3), C(5), p).unwrap(),
            EdgeColor::single(2, 3)
        );
        assert_eq!(
            descriptor_color(C(3), C(12), p).unwrap(),
            EdgeColor::double((1, 2), (3, 4))
        );
        for x in p.configurations() {
            for y in p.configurations().filter(|&y| y != x) {
                assert_eq!(
                    descriptor_color(x, y, p).unwrap(),
                    descriptor_color(y, x, p).unwrap()
                );
            }
        }
    }

    #[test]
    fn col_oracle_examples() {
        let p = sp(4, 2);
        let m = EdgeColor::single(2, 3);
        assert_eq!(col_oracle(C(3), m, p).unwrap(), Some(C(5)));
        assert_eq!(col_oracle(C(12), m, p).unwrap(), Some(C(10)));
        assert_eq!(col_oracle(C(9), m, p).unwrap(), None);
        assert_eq!(
            col_oracle(C(9), EdgeColor::Diagonal, p).unwrap(),
            Some(C(9))
        );
        assert!(col_oracle(C(9), EdgeColor::single(2, 7), p).is_err());
    }

    #[test]
    fn col_oracle_agrees_with_colorer_for_pair_labels() {
        for (n, e) in [(4, 2), (5, 2), (6, 3)] {
            let p = sp(n, e);
            let colorer = Colorer::new(p, Scheme::PairLabel);
            for x in p.configurations() {
                for deg in [1, 2] {
                    for y in neighbors(x, deg, p) {
                        let c = colorer.color(x, y).unwrap();
                        assert_eq!(col_oracle(x, c, p).unwrap(), Some(y), "{x} {y} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn descriptor_involution() {
        let p = sp(6, 3);
        let mut colors = vec![];
        for a in 1..=6 {
            for b in a + 1..=6 {
                colors.push(EdgeColor::single(a, b));
            }
        }
        colors.push(EdgeColor::double((1, 4), (2, 6)));
        colors.push(EdgeColor::double((3, 5), (1, 2)));
        for x in p.configurations() {
            for &m in &colors {
                if let Some(y) = col_oracle(x, m, p).unwrap() {
                    assert_eq!(col_oracle(y, m, p).unwrap(), Some(x));
                    assert_eq!(descriptor_color(x, y, p).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn properness_small() {
        let p = sp(4, 2);
        let d = verify_properness(p, Scheme::Descriptor).unwrap();
        assert!(d.is_proper());
        assert_eq!(d.single_edges, 12);
        assert_eq!(d.double_edges, 3);
        assert_eq!(d.colors_used, 10);
        assert_eq!(d.incident_colors, BTreeMap::from([(6, 6)]));
        let l = verify_properness(p, Scheme::PairLabel).unwrap();
        assert!(l.is_proper(), "{:?}", l.violations);
        assert!(l.trio_violations.is_empty());
        assert_eq!(l.formula_edges, 15);
        assert!(l
            .formula_mismatches
            .iter()
            .any(|m| m.x == C(3) && m.y == C(6) && m.formula.0 == 1 && m.oracle.0 == 2));
    }

    #[test]
    fn cap_is_enforced() {
        let e = verify_properness_capped(sp(8, 4), Scheme::Descriptor, 10).unwrap_err();
        assert!(matches!(e, Error::CapExceeded { .. }));
    }

    #[test]
    fn monotone_first_label() {
        let p = sp(7, 3);
        for x in p.configurations() {
            for deg in [1, 2] {
                let ups: Vec<_> = neighbors(x, deg, p)
                    .into_iter()
                    .filter(|&y| y > x)
                    .collect();
                let labels: Vec<u64> = ups
                    .iter()
                    .map(|&y| pair_labels_oracle(x, y, p).unwrap().0)
                    .collect();
                assert!(labels.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn decompose_small_space() {
        let p = sp(4, 2);
        let t = synthetic_table(SyntheticKind::RandomSymmetric, 3, 4).unwrap();
        let h = build_ci_matrix(p, &t, SignMode::Fermionic).unwrap();
        let terms = decompose(&h, Scheme::Descriptor).unwrap();
        assert_eq!(terms.len(), 10);
        assert_eq!(terms[0].color, EdgeColor::Diagonal);
        assert_eq!(terms[0].fixed.len(), 6);
        assert!(terms.iter().all(|t| t.is_one_sparse()));
        assert_eq!(terms.iter().filter(|t| t.color.class() == 1).count(), 6);
        assert_eq!(terms.iter().filter(|t| t.color.class() == 2).count(), 3);
        let mut sum = nalgebra::DMatrix::zeros(6, 6);
        for t in &terms {
            sum += t.to_dense(6);
        }
        assert_eq!(sum, h.to_dense());

        let zero =
            build_ci_matrix(p, &IntegralTable::zeros(4).unwrap(), SignMode::Fermionic).unwrap();
        let zt = decompose(&zero, Scheme::Descriptor).unwrap();
        assert_eq!(zt.len(), 10);
        assert!(zt
            .iter()
            .all(|t| t.fixed.iter().all(|f| f.1 == 0.0) && t.pairs.iter().all(|q| q.2 == 0.0)));
    }

    #[test]
    fn coloring_export_format() {
        let p = sp(4, 2);
        let mut buf = Vec::new();
        write_coloring(p, Scheme::Descriptor, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# legend 0 diagonal\n"));
        let edges: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(edges.len(), 15);
        // {1,2}-{1,3} is rank 0 to rank 1, class 1
        assert!(edges[0].starts_with("0 1 1 "));
    }
}
