//! Counting and listing optimal-length codes, plus an independent
//! decodability oracle.
//!
//! Every basis of a minimum-rank fitting matrix's row space is an optimal
//! code, and every optimal code arises this way.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{count_bases, enumerate_bases, rank_of_rows};
use crate::optlen::minrank_of;
use crate::problem::IndexCodingProblem;
use crate::Limits;

/// An unordered set of codewords over `n <= 64` messages. Bit `j` of a
/// codeword is the coefficient of `x_{j+1}`. Stored sorted, so equal codes
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexCode {
    n: usize,
    codewords: Vec<u64>,
}

impl IndexCode {
    pub fn new(n: usize, mut codewords: Vec<u64>) -> Result<Self> {
        if n > 64 {
            return Err(Error::Shape(format!("{n} messages exceeds 64")));
        }
        let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if let Some(&w) = codewords.iter().find(|&&w| w == 0 || w > limit) {
            return Err(Error::InvalidCode(format!(
                "codeword {w:#b} is zero or uses messages beyond x{n}"
            )));
        }
        codewords.sort_unstable();
        if codewords.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode("repeated codeword".into()));
        }
        Ok(Self { n, codewords })
    }

    /// All `n` messages sent uncoded.
    pub fn uncoded(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|j| 1u64 << j).collect())
    }

    /// Parses codewords like `"x1+x2, x3"` over `n` messages.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let words = text
            .split([',', ';'])
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(|w| parse_codeword(w, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[u64] {
        &self.codewords
    }

    pub fn is_independent(&self) -> bool {
        rank_of_rows(&mut self.codewords.clone()) == self.len()
    }

    pub fn codeword_strings(&self) -> Vec<String> {
        self.codewords.iter().map(|&w| format_codeword(w)).collect()
    }

    /// Moves codeword bits through `labels`: bit `j` goes to message
    /// `labels[j]` (1-based) of an `n`-message problem.
    pub fn relabel(&self, n: usize, labels: &[usize]) -> Result<Self> {
        let words = self
            .codewords
            .iter()
            .map(|&w| {
                (0..self.n)
                    .filter(|j| w >> j & 1 == 1)
                    .fold(0u64, |acc, j| acc | 1 << (labels[j] - 1))
            })
            .collect();
        Self::new(n, words)
    }
}

pub fn format_codeword(w: u64) -> String {
    (0..64)
        .filter(|j| w >> j & 1 == 1)
        .map(|j| format!("x{}", j + 1))
        .join("+")
}

fn parse_codeword(text: &str, n: usize) -> Result<u64> {
    let mut w = 0u64;
    for term in text.split(['+', '^']) {
        let term = term.trim();
        let index: usize = term
            .strip_prefix('x')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::InvalidCode(format!("cannot read {term:?} as a message")))?;
        if index == 0 || index > n {
            return Err(Error::InvalidCode(format!("x{index} is outside 1..={n}")));
        }
        w ^= 1 << (index - 1);
    }
    Ok(w)
}

impl fmt::Display for IndexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.codeword_strings().join(", "))
    }
}

impl FromStr for IndexCode {
    type Err = Error;

    /// Infers `n` from the largest message mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|d| d.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Self::parse(n.min(64), s)
    }
}

impl Serialize for IndexCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IndexCode", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("codewords", &self.codeword_strings())?;
        st.end()
    }
}

fn big_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeCensus {
    pub c_opt: usize,
    pub mu: usize,
    #[serde(serialize_with = "big_string")]
    pub count_per_space: BigUint,
    #[serde(serialize_with = "big_string")]
    pub total: BigUint,
    /// Messages left out because nobody wants them.
    pub dropped_messages: Vec<usize>,
    /// Every optimal code over the original message labels, grouped by row
    /// space and in basis order inside each space. `None` when `total` is
    /// above the materialization cap.
    pub codes: Option<Vec<IndexCode>>,
}

/// `(mu / c!) * prod_{i<c} (2^c - 2^i)`.
pub fn count_optimal_codes(c: usize, mu: usize) -> BigUint {
    count_bases(c) * BigUint::from(mu)
}

pub fn enumerate_optimal_codes(p: &IndexCodingProblem, limits: &Limits) -> Result<CodeCensus> {
    let su = p.normalize()?;
    let minrank = minrank_of(&su, limits)?;
    let c = minrank.c_opt;
    let count_per_space = count_bases(c);
    let total = &count_per_space * BigUint::from(minrank.mu);

    let codes = if total <= BigUint::from(limits.codes) {
        let per_space: Vec<Vec<IndexCode>> = minrank
            .spaces
            .par_iter()
            .map(|space| {
                enumerate_bases(space, limits.codes)?
                    .map(|basis| {
                        let words = (0..basis.rows()).map(|r| basis.row_u64(r)).collect();
                        IndexCode::new(su.n(), words)?.relabel(p.messages(), su.message_labels())
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut seen = HashSet::new();
        let codes: Vec<IndexCode> = per_space
            .into_iter()
            .flatten()
            .filter(|code| seen.insert(code.clone()))
            .collect();
        if BigUint::from(codes.len()) != total {
            return Err(Error::Inconsistent(format!(
                "{} distinct codes listed, census says {total}",
                codes.len()
            )));
        }
        Some(codes)
    } else {
        log::info!("{total} optimal codes exceeds the cap of {}; census only", limits.codes);
        None
    };

    Ok(CodeCensus {
        c_opt: c,
        mu: minrank.mu,
        count_per_space,
        total,
        dropped_messages: su.dropped().to_vec(),
        codes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CodeValidity {
    Valid,
    /// 1-based receiver index and the message it cannot decode.
    Invalid { receiver: usize, want: usize },
}

impl CodeValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Self::Valid)
    }
}

/// Receiver `i` decodes `x_w` iff `e_w` lies in the span of the codewords
/// plus the unit vectors of its side information. Side-information
/// coordinates are projected away and `e_w` is reduced against the
/// remaining codeword span.
pub fn verify_code(p: &IndexCodingProblem, code: &IndexCode) -> CodeValidity {
    for (r, rec) in p.receivers().iter().enumerate() {
        let known = rec.knows.iter().fold(0u64, |m, &k| m | 1 << (k - 1));
        let mut basis: Vec<u64> = Vec::new();
        for &w in code.codewords() {
            let v = reduce(w & !known, &basis);
            if v != 0 {
                basis.push(v);
            }
        }
        for &w in &rec.wants {
            if reduce(1u64 << (w - 1), &basis) != 0 {
                return CodeValidity::Invalid {
                    receiver: r + 1,
                    want: w,
                };
            }
        }
    }
    CodeValidity::Valid
}

/// Reduces `v` by a list whose entries have distinct lowest set bits, each
/// absent from the entries after it.
fn reduce(mut v: u64, basis: &[u64]) -> u64 {
    for &b in basis {
        let low = b & b.wrapping_neg();
        if v & low != 0 {
            v ^= b;
        }
    }
    v
}

/// Counts every set of `c` independent codewords that solves `p`, by
/// trying all of them.
pub fn brute_force_census(p: &IndexCodingProblem, c: usize, limits: &Limits) -> Result<u64> {
    let n = p.messages();
    if n * c > limits.brute_force_bits || n > 63 {
        return Err(Error::cap(
            "brute-force census",
            format!("2^{} candidate tuples", n * c),
            format!("2^{}", limits.brute_force_bits),
        ));
    }
    let vectors: Vec<u64> = (1..1u64 << n).collect();
    let count = vectors
        .iter()
        .copied()
        .combinations(c)
        .filter(|words| rank_of_rows(&mut words.clone()) == c)
        .filter(|words| {
            let code = IndexCode::new(n, words.clone()).expect("distinct nonzero words");
            verify_code(p, &code).is_valid()
        })
        .count();
    Ok(count as u64)
}

/// Smallest `c` for which some length-`c` code solves `p`, by brute force.
pub fn brute_force_min_length(p: &IndexCodingProblem, limits: &Limits) -> Result<usize> {
    for c in 0..=p.messages() {
        if brute_force_census(p, c, limits)? > 0 {
            return Ok(c);
        }
    }
    Err(Error::Inconsistent("uncoded transmission should always decode".into()))
}
