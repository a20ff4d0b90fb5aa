//! Brute-force enumeration of flat configurations as chord diagrams.
//!
//! A degree-`d` diagram has boundary points `0..4d` in circular order, `d`
//! odd chords (endpoints congruent to 0 and 2 mod 4) and `d` even chords
//! (endpoints congruent to 1 and 3 mod 4). Each chord crosses exactly one
//! chord of the other parity, and no other pair of chords interleaves. Two
//! flat diagrams are equivalent exactly when their chord data coincide, so
//! each enumerated diagram is its own class.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORACLE_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("degree {0} exceeds the oracle limit of {MAX_ORACLE_DEGREE}")]
    DegreeTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn of_point(p: usize) -> Parity {
        if p.is_multiple_of(2) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Chord between two boundary points, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
    pub parity: Parity,
}

impl Chord {
    pub fn new(p: usize, q: usize, parity: Parity) -> Self {
        Chord {
            a: p.min(q),
            b: p.max(q),
            parity,
        }
    }

    /// Whether the two chords cross as straight segments in the disk.
    pub fn interleaves(&self, other: &Chord) -> bool {
        let inside = |p: usize| self.a < p && p < self.b;
        inside(other.a) != inside(other.b)
            && ![self.a, self.b].contains(&other.a)
            && ![self.a, self.b].contains(&other.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordDiagram {
    pub degree: usize,
    /// Sorted by left endpoint.
    pub chords: Vec<Chord>,
    /// Designated crossings as `(odd chord index, even chord index)`.
    pub crossings: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    WrongChordCount { expected: usize, found: usize },
    PointOutOfRange { point: usize },
    PointUnused { point: usize },
    PointReused { point: usize },
    BadParity { chord: usize },
    BadCrossingIndex { pair: usize },
    CrossingParity { pair: usize },
    NotPerfectPairing { chord: usize },
    DesignatedDoesNotCross { odd: usize, even: usize },
    UndesignatedInterleaving { first: usize, second: usize },
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Re-checks every invariant of a flat diagram from scratch.
#[allow(clippy::needless_range_loop)]
pub fn validate_diagram(diag: &ChordDiagram) -> Validation {
    let d = diag.degree;
    let n = 4 * d;
    let mut v = Vec::new();

    if diag.chords.len() != 2 * d {
        v.push(Violation::WrongChordCount {
            expected: 2 * d,
            found: diag.chords.len(),
        });
    }
    let mut seen = vec![0u32; n];
    for ch in &diag.chords {
        for p in [ch.a, ch.b] {
            if p >= n {
                v.push(Violation::PointOutOfRange { point: p });
            } else {
                seen[p] += 1;
            }
        }
    }
    for (p, &k) in seen.iter().enumerate() {
        match k {
            0 => v.push(Violation::PointUnused { point: p }),
            1 => {}
            _ => v.push(Violation::PointReused { point: p }),
        }
    }
    for (i, ch) in diag.chords.iter().enumerate() {
        let (ra, rb) = (ch.a % 4, ch.b % 4);
        let ok = match ch.parity {
            Parity::Odd => (ra == 0 && rb == 2) || (ra == 2 && rb == 0),
            Parity::Even => (ra == 1 && rb == 3) || (ra == 3 && rb == 1),
        };
        if !ok {
            v.push(Violation::BadParity { chord: i });
        }
    }

    let m = diag.chords.len();
    let mut partner = vec![None; m];
    let mut designated = vec![vec![false; m]; m];
    for (k, &(o, e)) in diag.crossings.iter().enumerate() {
        if o >= m || e >= m {
            v.push(Violation::BadCrossingIndex { pair: k });
            continue;
        }
        if diag.chords[o].parity != Parity::Odd || diag.chords[e].parity != Parity::Even {
            v.push(Violation::CrossingParity { pair: k });
        }
        for (x, y) in [(o, e), (e, o)] {
            if partner[x].is_some() {
                v.push(Violation::NotPerfectPairing { chord: x });
            }
            partner[x] = Some(y);
        }
        designated[o][e] = true;
        designated[e][o] = true;
        if !diag.chords[o].interleaves(&diag.chords[e]) {
            v.push(Violation::DesignatedDoesNotCross { odd: o, even: e });
        }
    }
    for (i, p) in partner.iter().enumerate() {
        if p.is_none() {
            v.push(Violation::NotPerfectPairing { chord: i });
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if !designated[i][j] && diag.chords[i].interleaves(&diag.chords[j]) {
                v.push(Violation::UndesignatedInterleaving {
                    first: i,
                    second: j,
                });
            }
        }
    }

    // Graph on chords with an edge per crossing; chords meet nowhere else, so the
    // union is a forest iff this graph is (union-find finds any repeated join).
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut pairs: Vec<(usize, usize)> = diag
        .crossings
        .iter()
        .filter(|(o, e)| *o < m && *e < m)
        .map(|&(o, e)| (o.min(e), o.max(e)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (o, e) in pairs {
        let (ro, re) = (root(&mut parent, o), root(&mut parent, e));
        if ro == re {
            v.push(Violation::Cycle);
            break;
        }
        parent[ro] = re;
    }

    Validation {
        valid: v.is_empty(),
        violations: v,
    }
}

struct Search {
    n: usize,
    used: Vec<bool>,
    chords: Vec<Chord>,
    out: Vec<ChordDiagram>,
}

impl Search {
    /// A new chord may cross at most one chord, which must have the opposite parity
    /// and not already be crossed.
    fn admissible(&self, ch: &Chord) -> bool {
        let mut crossed = 0;
        for other in &self.chords {
            if ch.interleaves(other) {
                if other.parity == ch.parity {
                    return false;
                }
                if self
                    .chords
                    .iter()
                    .any(|third| third != other && third.interleaves(other))
                {
                    return false;
                }
                crossed += 1;
                if crossed > 1 {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) {
        let Some(p) = self.used.iter().position(|u| !u) else {
            self.emit();
            return;
        };
        self.used[p] = true;
        let parity = Parity::of_point(p);
        let mut q = p + 1;
        while q < self.n {
            if !self.used[q] && (q % 4) == (p + 2) % 4 {
                let ch = Chord::new(p, q, parity);
                if self.admissible(&ch) {
                    self.used[q] = true;
                    self.chords.push(ch);
                    self.run();
                    self.chords.pop();
                    self.used[q] = false;
                }
            }
            q += 1;
        }
        self.used[p] = false;
    }

    fn emit(&mut self) {
        let mut chords = self.chords.clone();
        chords.sort();
        let mut crossings = Vec::new();
        for (i, a) in chords.iter().enumerate() {
            if a.parity != Parity::Odd {
                continue;
            }
            let hits: Vec<usize> = chords
                .iter()
                .enumerate()
                .filter(|(_, b)| a.interleaves(b))
                .map(|(j, _)| j)
                .collect();
            if hits.len() != 1 {
                return;
            }
            crossings.push((i, hits[0]));
        }
        let d = self.n / 4;
        // every even chord must be hit exactly once as well
        let mut hit = vec![0; chords.len()];
        for &(_, e) in &crossings {
            hit[e] += 1;
        }
        if crossings.len() != d
            || chords
                .iter()
                .zip(&hit)
                .any(|(c, &h)| c.parity == Parity::Even && h != 1)
        {
            return;
        }
        self.out.push(ChordDiagram {
            degree: d,
            chords,
            crossings,
        });
    }
}

/// All flat configurations of degree `d <= 4`.
pub fn enumerate_flat(d: usize) -> Result<Vec<ChordDiagram>, OracleError> {
    if d > MAX_ORACLE_DEGREE {
        return Err(OracleError::DegreeTooLarge(d));
    }
    let n = 4 * d;
    let mut s = Search {
        n,
        used: vec![false; n],
        chords: Vec::new(),
        out: Vec::new(),
    };
    s.run();
    Ok(s.out)
}
