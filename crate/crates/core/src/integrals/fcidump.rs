//! FCIDUMP reader.
//!
//! Header keys `NORB`, `NELEC` and `MS2` are required; other keys are
//! ignored. Data lines are `value i j k l` over spatial orbitals in chemist
//! notation: `(ij|kl)` for four nonzero indices, `h_ij` for `i j 0 0`, the
//! core energy for `0 0 0 0`. Orbital-energy lines `i 0 0 0` are skipped.

use std::collections::HashMap;
use std::io::BufRead;

use super::{IntegralTable, Spin, SpinOrbitalMap};
use crate::error::{Error, Result};

const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FcidumpHeader {
    pub norb: u32,
    pub nelec: u32,
    pub ms2: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fcidump {
    pub header: FcidumpHeader,
    pub table: IntegralTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Core,
    One(u32, u32),
    Two(u32, u32, u32, u32),
}

fn canonical_pair(a: u32, b: u32) -> (u32, u32) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn key_for(i: u32, j: u32, k: u32, l: u32) -> Key {
    let p1 = canonical_pair(i, j);
    let p2 = canonical_pair(k, l);
    let (a, b) = if p1 >= p2 { (p1, p2) } else { (p2, p1) };
    Key::Two(a.0, a.1, b.0, b.1)
}

fn parse_value(tok: &str) -> Option<f64> {
    tok.replace(['D', 'd'], "E").parse().ok()
}

#[derive(Default)]
struct HeaderFields {
    norb: Option<u32>,
    nelec: Option<u32>,
    ms2: Option<i32>,
}

impl HeaderFields {
    fn absorb(&mut self, text: &str, line: usize) -> Result<()> {
        let cleaned = text.replace(',', " ");
        let mut toks = cleaned.split_whitespace().peekable();
        while let Some(tok) = toks.next() {
            let tok = tok.trim_start_matches('&');
            let Some((key, val)) = tok.split_once('=') else {
                continue;
            };
            let val = if val.is_empty() {
                match toks.peek() {
                    Some(next) if !next.contains('=') => toks.next().unwrap(),
                    _ => "",
                }
            } else {
                val
            };
            let bad = |what: &str| Error::Parse {
                line,
                message: format!("{what} value {val:?} is not an integer"),
            };
            match key.to_ascii_uppercase().as_str() {
                "NORB" => self.norb = Some(val.parse().map_err(|_| bad("NORB"))?),
                "NELEC" => self.nelec = Some(val.parse().map_err(|_| bad("NELEC"))?),
                "MS2" => self.ms2 = Some(val.parse().map_err(|_| bad("MS2"))?),
                _ => {}
            }
        }
        Ok(())
    }

    fn finish(self, line: usize) -> Result<FcidumpHeader> {
        let missing = |k: &str| Error::Parse {
            line,
            message: format!("header is missing {k}"),
        };
        let header = FcidumpHeader {
            norb: self.norb.ok_or_else(|| missing("NORB"))?,
            nelec: self.nelec.ok_or_else(|| missing("NELEC"))?,
            ms2: self.ms2.ok_or_else(|| missing("MS2"))?,
        };
        if header.norb == 0 || 2 * header.norb > crate::config_space::MAX_ORBITALS {
            return Err(Error::Parse {
                line,
                message: format!(
                    "NORB={} outside 1..={}",
                    header.norb,
                    crate::config_space::MAX_ORBITALS / 2
                ),
            });
        }
        if header.nelec > 2 * header.norb {
            return Err(Error::Parse {
                line,
                message: format!("NELEC={} exceeds 2*NORB", header.nelec),
            });
        }
        Ok(header)
    }
}

// A line is data if it is exactly five numeric tokens.
fn data_fields(text: &str) -> Option<(f64, [u32; 4])> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 5 {
        return None;
    }
    let v = parse_value(toks[0])?;
    let mut idx = [0u32; 4];
    for (slot, t) in idx.iter_mut().zip(&toks[1..]) {
        *slot = t.parse().ok()?;
    }
    Some((v, idx))
}

/// Reads an FCIDUMP stream into a spin-orbital table over `2·NORB` orbitals.
pub fn parse_fcidump<R: BufRead>(reader: R) -> Result<Fcidump> {
    let mut fields = HeaderFields::default();
    let mut header: Option<FcidumpHeader> = None;
    let mut seen: HashMap<Key, (f64, usize)> = HashMap::new();
    let mut entries: Vec<(Key, f64)> = Vec::new();
    let mut last_line = 0;

    for (n, line) in reader.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let text = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }

        if header.is_none() {
            let upper = trimmed.to_ascii_uppercase();
            let ends = upper.contains("&END") || upper == "/" || upper.ends_with('/');
            if ends || data_fields(trimmed).is_none() {
                let body = upper.replace("&END", " ").replace('/', " ");
                fields.absorb(&body, lineno)?;
                if ends {
                    header = Some(std::mem::take(&mut fields).finish(lineno)?);
                }
                continue;
            }
            // first data line closes an unterminated header
            header = Some(std::mem::take(&mut fields).finish(lineno)?);
        }
        let norb = header.as_ref().unwrap().norb;

        let (value, [i, j, k, l]) = data_fields(trimmed).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected `value i j k l`, found {trimmed:?}"),
        })?;
        if let Some(&bad) = [i, j, k, l].iter().find(|&&o| o > norb) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("orbital index {bad} exceeds NORB={norb}"),
            });
        }
        let key = match (i, j, k, l) {
            (0, 0, 0, 0) => Key::Core,
            (_, 0, 0, 0) => continue,
            (i, j, 0, 0) if i > 0 && j > 0 => {
                let (a, b) = canonical_pair(i, j);
                Key::One(a, b)
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => key_for(i, j, k, l),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unrecognized index pattern {i} {j} {k} {l}"),
                })
            }
        };
        match seen.get(&key) {
            Some(&(prev, at)) => {
                if (prev - value).abs() > DUPLICATE_TOLERANCE {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!(
                            "value {value} conflicts with {prev} given on line {at} for the same integral"
                        ),
                    });
                }
            }
            None => {
                seen.insert(key, (value, lineno));
                entries.push((key, value));
            }
        }
    }

    let header = match header {
        Some(h) => h,
        None => fields.finish(last_line)?,
    };
    let map = SpinOrbitalMap::new(header.norb);
    let mut table = IntegralTable::zeros(map.n_spin_orbitals())?;
    let spins = [Spin::Alpha, Spin::Beta];
    for (key, value) in entries {
        match key {
            Key::Core => table.set_core_energy(value),
            Key::One(i, j) => {
                for s in spins {
                    table.set_one_electron(
                        map.spin_orbital(i, s),
                        map.spin_orbital(j, s),
                        value,
                    )?;
                }
            }
            Key::Two(i, j, k, l) => {
                // chemist (ij|kl) with electron 1 on (i,j), electron 2 on (k,l) is ⟨ik|jl⟩
                for s1 in spins {
                    for s2 in spins {
                        table.set_two_electron(
                            map.spin_orbital(i, s1),
                            map.spin_orbital(k, s2),
                            map.spin_orbital(j, s1),
                            map.spin_orbital(l, s2),
                            value,
                        )?;
                    }
                }
            }
        }
    }
    Ok(Fcidump { header, table })
}
