//! Optimal linear code length.
//!
//! Three routes: the exhaustive minrank search over fitting matrices
//! `L = I + B_SI A_SI` (any unicast problem), the cycle decomposition of the
//! side-information permutation (single unicast, single uniprior), and
//! staged reductions that peel off uncoded transmissions until a cycle core
//! remains (single unicast with uniprior side information, and single
//! uniprior with unicast demands).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::enumerate::IndexCode;
use crate::error::{Error, Result};
use crate::gf2::{rank_of_rows, Gf2Matrix, RowSpace};
use crate::problem::{IndexCodingProblem, SingleUnicast};
use crate::Limits;

/// Free bits of `B_SI`: one per (receiver, known message) pair, numbered
/// receiver-major in band order. Bit `p` of a choice index is pair `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideInfoChoice {
    bits: Vec<bool>,
}

impl SideInfoChoice {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self {
            bits: (0..len).map(|p| index >> p & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, p: usize) -> bool {
        self.bits[p]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn index(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (p, &b)| acc | (b as u64) << p)
    }

    /// `B_SI` (`n x K`), nonzero only inside each receiver's band.
    pub fn b_si(&self, su: &SingleUnicast) -> Gf2Matrix {
        let mut b = Gf2Matrix::zeros(su.n(), self.len());
        let mut p = 0;
        for r in 0..su.n() {
            for _ in su.knows(r) {
                b.set(r, p, self.bits[p]);
                p += 1;
            }
        }
        b
    }

    /// `L = I + B_SI A_SI`: row `r` is `e_r` plus the chosen side
    /// information of receiver `r`.
    pub fn fitting_matrix(&self, su: &SingleUnicast) -> Gf2Matrix {
        let mut l = Gf2Matrix::identity(su.n());
        let mut p = 0;
        for r in 0..su.n() {
            for &k in su.knows(r) {
                if self.bits[p] {
                    l.set(r, k, !l.get(r, k));
                }
                p += 1;
            }
        }
        l
    }
}

impl fmt::Display for SideInfoChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for SideInfoChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug)]
pub struct FittingCandidate {
    pub choice: SideInfoChoice,
    pub l: Gf2Matrix,
    pub rank: usize,
}

fn searchable(su: &SingleUnicast, limits: &Limits) -> Result<()> {
    if su.n() > 64 {
        return Err(Error::Shape(format!("{} messages exceeds 64", su.n())));
    }
    let bits = su.side_info_total();
    if bits > limits.fitting_bits.min(63) {
        return Err(Error::cap(
            "fitting-matrix search",
            format!("{bits} side-information bits"),
            limits.fitting_bits,
        ));
    }
    Ok(())
}

/// Packed rows of `L` for choice index `index`.
fn fitting_rows(su: &SingleUnicast, index: u64, rows: &mut Vec<u64>) {
    rows.clear();
    let mut p = 0;
    for r in 0..su.n() {
        let mut row = 1u64 << r;
        for &k in su.knows(r) {
            if index >> p & 1 == 1 {
                row ^= 1 << k;
            }
            p += 1;
        }
        rows.push(row);
    }
}

/// Every fitting matrix of the normalized problem, in choice-index order.
pub fn fitting_candidates(
    p: &IndexCodingProblem,
    limits: &Limits,
) -> Result<impl Iterator<Item = FittingCandidate>> {
    let su = p.normalize()?;
    searchable(&su, limits)?;
    let bits = su.side_info_total();
    Ok((0..1u64 << bits).map(move |index| {
        let choice = SideInfoChoice::from_index(index, bits);
        let l = choice.fitting_matrix(&su);
        let rank = l.rank();
        FittingCandidate { choice, l, rank }
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct MinrankResult {
    pub c_opt: usize,
    /// Number of distinct row spaces among minimum-rank fitting matrices.
    pub mu: usize,
    /// Those row spaces, sorted by canonical form, over the normalized
    /// message numbering.
    pub spaces: Vec<RowSpace>,
    /// Every choice achieving the minimum, in choice-index order.
    pub choices: Vec<SideInfoChoice>,
    pub candidates: u64,
    #[serde(skip)]
    pub normal_form: SingleUnicast,
}

const CHUNK_BITS: u32 = 12;

pub fn optimal_length_minrank(p: &IndexCodingProblem, limits: &Limits) -> Result<MinrankResult> {
    let su = p.normalize()?;
    minrank_of(&su, limits)
}

pub(crate) fn minrank_of(su: &SingleUnicast, limits: &Limits) -> Result<MinrankResult> {
    searchable(su, limits)?;
    let bits = su.side_info_total();
    let total = 1u64 << bits;
    let chunk = 1u64 << CHUNK_BITS.min(bits as u32);
    let chunks = total / chunk;

    let per_chunk: Vec<(usize, Vec<u64>)> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut rows = Vec::with_capacity(su.n());
            let mut best = usize::MAX;
            let mut achievers = Vec::new();
            for index in ch * chunk..(ch + 1) * chunk {
                fitting_rows(su, index, &mut rows);
                let rank = rank_of_rows(&mut rows);
                if rank < best {
                    best = rank;
                    achievers.clear();
                }
                if rank == best {
                    achievers.push(index);
                }
            }
            (best, achievers)
        })
        .collect();

    let c_opt = per_chunk.iter().map(|c| c.0).min().unwrap_or(0);
    let winners: Vec<u64> = per_chunk
        .into_iter()
        .filter(|c| c.0 == c_opt)
        .flat_map(|c| c.1)
        .collect();

    let mut rows = Vec::new();
    let spaces: BTreeSet<RowSpace> = winners
        .iter()
        .map(|&index| {
            fitting_rows(su, index, &mut rows);
            Gf2Matrix::from_u64_rows(su.n(), &rows).rref()
        })
        .collect();

    Ok(MinrankResult {
        c_opt,
        mu: spaces.len(),
        spaces: spaces.into_iter().collect(),
        choices: winners
            .into_iter()
            .map(|i| SideInfoChoice::from_index(i, bits))
            .collect(),
        candidates: total,
        normal_form: su.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub c_opt: usize,
    /// Cycles of the map `wanted message -> known message`, each starting at
    /// its smallest label, sorted by that label. Labels are 1-based.
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }
}

fn cycles_of(map: &BTreeMap<usize, usize>) -> Result<Vec<Vec<usize>>> {
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in map.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while seen.insert(x) {
            cycle.push(x);
            x = *map.get(&x).ok_or_else(|| {
                Error::WrongClass(format!("x{x} is known but not wanted by anyone"))
            })?;
        }
        if x != start {
            return Err(Error::WrongClass(
                "side information does not form a permutation".into(),
            ));
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

fn cycle_length(cycles: &[Vec<usize>]) -> usize {
    cycles.iter().map(|c| c.len() - 1).sum()
}

/// Codewords `x_a + x_b` along each cycle, leaving out the closing edge.
fn cycle_code(n: usize, cycles: &[Vec<usize>]) -> Vec<u64> {
    assert!(n <= 64);
    cycles
        .iter()
        .flat_map(|c| c.windows(2).map(|w| 1u64 << (w[0] - 1) | 1u64 << (w[1] - 1)))
        .collect()
}

pub fn cycle_decomposition_length(p: &IndexCodingProblem) -> Result<CycleDecomposition> {
    let class = p.classify();
    if !(class.single_unicast && class.single_uniprior) {
        return Err(Error::WrongClass(format!(
            "cycle decomposition needs a single-unicast, single-uniprior problem, got {class}"
        )));
    }
    let map: BTreeMap<usize, usize> = p
        .receivers()
        .iter()
        .map(|r| (r.wants[0], r.knows[0]))
        .collect();
    let cycles = cycles_of(&map)?;
    Ok(CycleDecomposition {
        c_opt: cycle_length(&cycles),
        cycles,
    })
}

/// A receiver of a residual problem, keeping its original labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledReceiver {
    pub label: usize,
    pub wants: Vec<usize>,
    pub knows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStage {
    /// The problem at the start of the stage.
    pub receivers: Vec<LabeledReceiver>,
    /// Messages sent uncoded in this stage.
    pub uncoded: Vec<usize>,
    pub lambda: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub messages: usize,
    pub stages: Vec<ReductionStage>,
    /// Single-unicast, single-uniprior problem left after the stages.
    pub core: Vec<LabeledReceiver>,
    pub core_cycles: Vec<Vec<usize>>,
    pub core_length: usize,
    pub c_total: usize,
}

impl ReductionTrace {
    pub fn lambdas(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.lambda).collect()
    }

    /// The code the trace describes: every staged message uncoded, followed
    /// by the cycle code of the core.
    pub fn code(&self) -> Result<IndexCode> {
        if self.messages > 64 {
            return Err(Error::Shape(format!("{} messages exceeds 64", self.messages)));
        }
        let mut words: Vec<u64> = self
            .stages
            .iter()
            .flat_map(|s| s.uncoded.iter().map(|&x| 1u64 << (x - 1)))
            .collect();
        words.extend(cycle_code(self.messages, &self.core_cycles));
        IndexCode::new(self.messages, words)
    }

    fn finish(messages: usize, stages: Vec<ReductionStage>, core: Vec<LabeledReceiver>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in &core {
            if r.wants.len() != 1 || r.knows.len() != 1 {
                return Err(Error::Inconsistent(format!(
                    "reduction core receiver R{} wants {:?} and knows {:?}",
                    r.label, r.wants, r.knows
                )));
            }
            map.insert(r.wants[0], r.knows[0]);
        }
        let core_cycles =
            cycles_of(&map).map_err(|e| Error::Inconsistent(format!("reduction core: {e}")))?;
        let core_length = cycle_length(&core_cycles);
        let c_total = core_length + stages.iter().map(|s| s.lambda).sum::<usize>();
        Ok(Self {
            messages,
            stages,
            core,
            core_cycles,
            core_length,
            c_total,
        })
    }
}

fn labeled(p: &IndexCodingProblem) -> Vec<LabeledReceiver> {
    p.receivers()
        .iter()
        .enumerate()
        .map(|(i, r)| LabeledReceiver {
            label: i + 1,
            wants: r.wants.clone(),
            knows: r.knows.clone(),
        })
        .collect()
}

/// Single unicast with disjoint side information: receivers that know
/// nothing get their message uncoded; those messages then disappear from
/// everyone's side information; repeat until every receiver knows something.
pub fn reduce_unicast_uniprior(p: &IndexCodingProblem) -> Result<ReductionTrace> {
    let class = p.classify();
    if !(class.single_unicast && class.uniprior) {
        return Err(Error::WrongClass(format!(
            "this reduction needs a single-unicast, uniprior problem, got {class}"
        )));
    }
    let mut alive = labeled(p);
    let mut stages = Vec::new();
    loop {
        let mut uncoded: Vec<usize> = alive
            .iter()
            .filter(|r| r.knows.is_empty())
            .map(|r| r.wants[0])
            .collect();
        if uncoded.is_empty() {
            break;
        }
        uncoded.sort_unstable();
        let snapshot = alive.clone();
        alive.retain(|r| !r.knows.is_empty());
        for r in &mut alive {
            r.knows.retain(|k| uncoded.binary_search(k).is_err());
        }
        stages.push(ReductionStage {
            receivers: snapshot,
            lambda: uncoded.len(),
            uncoded,
        });
    }
    ReductionTrace::finish(p.messages(), stages, alive)
}

/// Single uniprior with unicast demands: wanted messages nobody knows are
/// sent uncoded; receivers with nothing left to want leave, taking their
/// side information with them; repeat until every wanted message is known.
pub fn reduce_uniprior_unicast(p: &IndexCodingProblem) -> Result<ReductionTrace> {
    let class = p.classify();
    if !(class.single_uniprior && class.unicast) {
        return Err(Error::WrongClass(format!(
            "this reduction needs a single-uniprior, unicast problem, got {class}"
        )));
    }
    let mut alive = labeled(p);
    alive.retain(|r| !r.wants.is_empty());
    let mut stages = Vec::new();
    loop {
        let known: BTreeSet<usize> = alive.iter().map(|r| r.knows[0]).collect();
        let uncoded: Vec<usize> = alive
            .iter()
            .flat_map(|r| r.wants.iter().copied())
            .filter(|w| !known.contains(w))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if uncoded.is_empty() {
            break;
        }
        let snapshot = alive.clone();
        for r in &mut alive {
            r.wants.retain(|w| uncoded.binary_search(w).is_err());
        }
        alive.retain(|r| !r.wants.is_empty());
        stages.push(ReductionStage {
            receivers: snapshot,
            lambda: uncoded.len(),
            uncoded,
        });
    }
    ReductionTrace::finish(p.messages(), stages, alive)
}
