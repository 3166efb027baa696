use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlegmaError {
    #[error("ragged rows: row {row} has length {len}, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("row {row} is not strictly increasing at position {j}")]
    NotIncreasing { row: usize, j: usize },
    #[error("empty family")]
    Empty,
    #[error("cannot parse rows {0:?}")]
    Parse(String),
    #[error("vector index ({i},{j}) lies outside an l={l}, k={k} family")]
    OutsideFamily { i: u64, j: u64, l: usize, k: usize },
    #[error("vector must use the interleaved scheme with l={0}")]
    WrongScheme(usize),
    #[error("target length {target} is below l*k = {need}")]
    TargetTooShort { target: usize, need: usize },
}

/// Which defining condition failed, with 1-based row and column indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `s_{i1}(j1) < s_{i2}(j2)` fails although `j1 < j2`.
    Interleave { i1: usize, j1: usize, i2: usize, j2: usize },
    /// Rows `i1 < i2` are out of order in column `j`.
    ColumnOrder { i1: usize, i2: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Interleave { i1, j1, i2, j2 } => {
                write!(f, "(i) fails: s_{i1}({j1}) >= s_{i2}({j2})")
            }
            Violation::ColumnOrder { i1, i2, j } => write!(f, "(ii) fails at j={j}: rows {i1} and {i2}"),
        }
    }
}

/// A validated plegma family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlegmaFamily {
    rows: Vec<Vec<u64>>,
    strict: bool,
}

impl PlegmaFamily {
    pub fn new(rows: Vec<Vec<u64>>, strict: bool) -> Result<PlegmaFamily, PlegmaError> {
        match validate(&rows, strict)? {
            Ok(()) => Ok(PlegmaFamily { rows, strict }),
            Err(v) => Err(PlegmaError::Parse(v.to_string())),
        }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn l(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `s_i(j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i - 1][j - 1]
    }

    /// `(t∘s)_i(j) = t_i(s_i(j))` with `self` as `t`. `None` when some
    /// `s_i(j)` exceeds `t`'s length or the result is not a family.
    pub fn compose(&self, s: &PlegmaFamily) -> Option<PlegmaFamily> {
        if s.l() != self.l() {
            return None;
        }
        let mut rows = Vec::with_capacity(s.l());
        for (ti, si) in self.rows.iter().zip(&s.rows) {
            let row: Option<Vec<u64>> = si
                .iter()
                .map(|&j| ti.get((j as usize).checked_sub(1)?).copied())
                .collect();
            rows.push(row?);
        }
        PlegmaFamily::new(rows, false).ok()
    }

    pub fn without_row(&self, i: usize) -> Option<PlegmaFamily> {
        if self.l() < 2 || i == 0 || i > self.l() {
            return None;
        }
        let mut rows = self.rows.clone();
        rows.remove(i - 1);
        Some(PlegmaFamily { rows, strict: self.strict })
    }
}

impl fmt::Display for PlegmaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Parses `"1,3;2,4"` into rows.
pub fn parse_rows(s: &str) -> Result<Vec<Vec<u64>>, PlegmaError> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| PlegmaError::Parse(s.to_string())))
                .collect()
        })
        .collect()
}

/// Checks both defining conditions. The outer error is for malformed input,
/// the inner one reports the first violated condition.
pub fn validate(rows: &[Vec<u64>], strict: bool) -> Result<Result<(), Violation>, PlegmaError> {
    let Some(first) = rows.first() else { return Err(PlegmaError::Empty) };
    let k = first.len();
    if k == 0 {
        return Err(PlegmaError::Empty);
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(PlegmaError::Ragged { row: r + 1, len: row.len(), expected: k });
        }
        if let Some(j) = row.windows(2).position(|w| w[0] >= w[1]) {
            return Err(PlegmaError::NotIncreasing { row: r + 1, j: j + 2 });
        }
    }
    for j in 0..k - 1 {
        let (hi_row, hi) = rows.iter().enumerate().map(|(i, r)| (i, r[j])).max_by_key(|p| (p.1, p.0)).unwrap();
        let (lo_row, lo) = rows.iter().enumerate().map(|(i, r)| (i, r[j + 1])).min_by_key(|p| (p.1, p.0)).unwrap();
        if hi >= lo {
            return Ok(Err(Violation::Interleave { i1: hi_row + 1, j1: j + 1, i2: lo_row + 1, j2: j + 2 }));
        }
    }
    for j in 0..k {
        for i in 0..rows.len() - 1 {
            let (a, b) = (rows[i][j], rows[i + 1][j]);
            if a > b || (strict && a == b) {
                return Ok(Err(Violation::ColumnOrder { i1: i + 1, i2: i + 2, j: j + 1 }));
            }
        }
    }
    Ok(Ok(()))
}

/// Lazily lists every family over `ground` in lexicographic order of the
/// concatenated rows.
pub struct PlegmaIter {
    ground: Vec<u64>,
    l: usize,
    k: usize,
    strict: bool,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn enumerate(ground: &[u64], l: usize, k: usize, strict: bool) -> PlegmaIter {
    let mut g = ground.to_vec();
    g.sort_unstable();
    g.dedup();
    PlegmaIter { ground: g, l, k, strict, cur: Vec::new(), started: false, done: l == 0 || k == 0 }
}

pub fn count(ground: &[u64], l: usize, k: usize, strict: bool) -> u64 {
    enumerate(ground, l, k, strict).count() as u64
}

impl PlegmaIter {
    // Can ground[c] go at row-major slot p given the slots already filled?
    fn fits(&self, p: usize, c: usize) -> bool {
        let j = p % self.k;
        let v = self.ground[c];
        for (q, &cq) in self.cur.iter().enumerate() {
            let jq = q % self.k;
            let w = self.ground[cq];
            let ok = if jq < j {
                w < v
            } else if jq > j {
                v < w
            } else if self.strict {
                w < v
            } else {
                w <= v
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn family(&self) -> PlegmaFamily {
        let rows = self
            .cur
            .chunks(self.k)
            .map(|ch| ch.iter().map(|&c| self.ground[c]).collect())
            .collect();
        PlegmaFamily { rows, strict: self.strict }
    }
}

impl Iterator for PlegmaIter {
    type Item = PlegmaFamily;

    fn next(&mut self) -> Option<PlegmaFamily> {
        if self.done {
            return None;
        }
        let total = self.l * self.k;
        let mut from = if self.started {
            match self.cur.pop() {
                Some(c) => c + 1,
                None => {
                    self.done = true;
                    return None;
                }
            }
        } else {
            self.started = true;
            0
        };
        loop {
            let p = self.cur.len();
            match (from..self.ground.len()).find(|&c| self.fits(p, c)) {
                Some(c) => {
                    self.cur.push(c);
                    if self.cur.len() == total {
                        return Some(self.family());
                    }
                    from = 0;
                }
                None => match self.cur.pop() {
                    Some(c) => from = c + 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}
