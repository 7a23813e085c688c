//! Per-receiver transmission usage and min-max code selection.
//!
//! A receiver that XORs `t` received symbols sees an error whenever an odd
//! number of them flipped, so fewer used transmissions means a lower error
//! probability. The worst receiver of a code uses `t_max` transmissions;
//! codes with the smallest `t_max` are preferred.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{enumerate_optimal_codes, verify_code, CodeValidity, IndexCode};
use crate::error::{Error, Result};
use crate::problem::IndexCodingProblem;
use crate::Limits;

/// One way for a receiver to recover one wanted message. Indices are 1-based:
/// transmissions index the code's sorted codewords, side information and
/// `want` are message labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodingPlan {
    pub receiver: usize,
    pub want: usize,
    pub used_transmissions: Vec<usize>,
    pub used_side_info: Vec<usize>,
    pub t_use: usize,
}

impl DecodingPlan {
    /// XOR of the used codewords and side-information unit vectors.
    pub fn combination(&self, code: &IndexCode) -> u64 {
        let words = code.codewords();
        let tx = self
            .used_transmissions
            .iter()
            .fold(0u64, |acc, &t| acc ^ words[t - 1]);
        self.used_side_info
            .iter()
            .fold(tx, |acc, &k| acc ^ 1 << (k - 1))
    }

    pub fn is_correct(&self, code: &IndexCode) -> bool {
        self.combination(code) == 1u64 << (self.want - 1)
    }
}

fn receiver_index(p: &IndexCodingProblem, receiver: usize) -> Result<()> {
    if receiver == 0 || receiver > p.receivers().len() {
        return Err(Error::Index(format!(
            "receiver {receiver} outside 1..={}",
            p.receivers().len()
        )));
    }
    Ok(())
}

fn plans_for_want(code: &IndexCode, receiver: usize, known: u64, want: usize) -> Vec<DecodingPlan> {
    let words = code.codewords();
    let target = 1u64 << (want - 1);
    for size in 0..=words.len() {
        let plans: Vec<DecodingPlan> = (0..words.len())
            .combinations(size)
            .filter_map(|subset| {
                let rest = subset.iter().fold(target, |acc, &t| acc ^ words[t]);
                (rest & !known == 0).then(|| DecodingPlan {
                    receiver,
                    want,
                    used_transmissions: subset.iter().map(|t| t + 1).collect(),
                    used_side_info: (0..64).filter(|k| rest >> k & 1 == 1).map(|k| k + 1).collect(),
                    t_use: size,
                })
            })
            .collect();
        if !plans.is_empty() {
            return plans;
        }
    }
    Vec::new()
}

/// Every minimum-size decoding of each of receiver `receiver`'s (1-based)
/// wanted messages, grouped by want in the receiver's want order.
pub fn minimal_plans(
    p: &IndexCodingProblem,
    code: &IndexCode,
    receiver: usize,
) -> Result<Vec<DecodingPlan>> {
    receiver_index(p, receiver)?;
    let rec = &p.receivers()[receiver - 1];
    let known = rec.knows.iter().fold(0u64, |m, &k| m | 1 << (k - 1));
    let mut all = Vec::new();
    for &want in &rec.wants {
        let plans = plans_for_want(code, receiver, known, want);
        if plans.is_empty() {
            return Err(Error::Undecodable { receiver, want });
        }
        all.extend(plans);
    }
    Ok(all)
}

/// One minimal plan per (receiver, want), the first in subset order.
pub fn first_plans(p: &IndexCodingProblem, code: &IndexCode) -> Result<Vec<DecodingPlan>> {
    let mut out = Vec::new();
    for r in 1..=p.receivers().len() {
        let plans = minimal_plans(p, code, r)?;
        out.extend(plans.into_iter().unique_by(|plan| plan.want));
    }
    Ok(out)
}

/// Minimal `t_use` per receiver; a receiver with several wants counts its
/// most expensive one.
pub fn t_use_of_code(p: &IndexCodingProblem, code: &IndexCode) -> Result<Vec<usize>> {
    (1..=p.receivers().len())
        .map(|r| {
            let plans = minimal_plans(p, code, r)?;
            Ok(plans.iter().map(|plan| plan.t_use).max().unwrap_or(0))
        })
        .collect()
}

pub fn t_max_of_code(p: &IndexCodingProblem, code: &IndexCode) -> Result<usize> {
    if code.n() != p.messages() {
        return Err(Error::InvalidCode(format!(
            "code is over {} messages, problem has {}",
            code.n(),
            p.messages()
        )));
    }
    if let CodeValidity::Invalid { receiver, want } = verify_code(p, code) {
        return Err(Error::InvalidCode(format!(
            "receiver {receiver} cannot decode x{want}"
        )));
    }
    Ok(t_use_of_code(p, code)?.into_iter().max().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeUsage {
    /// 1-based position in the census order.
    pub id: usize,
    pub code: IndexCode,
    pub t_use: Vec<usize>,
    pub t_max: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinMaxReport {
    pub c_opt: usize,
    pub per_code: Vec<CodeUsage>,
    pub t_minmax: usize,
    /// Ids of the codes reaching `t_minmax`, ascending.
    pub winners: Vec<usize>,
}

impl MinMaxReport {
    pub fn winner_codes(&self) -> impl Iterator<Item = &CodeUsage> {
        self.per_code.iter().filter(|u| u.t_max == self.t_minmax)
    }
}

/// Scores the given codes, numbering them from 1 in the given order.
pub fn minmax_of_codes(p: &IndexCodingProblem, codes: &[IndexCode]) -> Result<MinMaxReport> {
    if codes.is_empty() {
        return Err(Error::Config("no codes to compare".into()));
    }
    let per_code = codes
        .par_iter()
        .enumerate()
        .map(|(i, code)| {
            let t_max = t_max_of_code(p, code)?;
            Ok(CodeUsage {
                id: i + 1,
                code: code.clone(),
                t_use: t_use_of_code(p, code)?,
                t_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let t_minmax = per_code.iter().map(|u| u.t_max).min().unwrap_or(0);
    let winners = per_code
        .iter()
        .filter(|u| u.t_max == t_minmax)
        .map(|u| u.id)
        .collect();
    let c_opt = codes.iter().map(IndexCode::len).max().unwrap_or(0);
    Ok(MinMaxReport {
        c_opt,
        per_code,
        t_minmax,
        winners,
    })
}

/// Scores every optimal-length code of `p`.
pub fn select_minmax(p: &IndexCodingProblem, limits: &Limits) -> Result<MinMaxReport> {
    let census = enumerate_optimal_codes(p, limits)?;
    let codes = census.codes.ok_or_else(|| {
        Error::cap(
            "optimal codes to score",
            census.total.to_string(),
            limits.codes.to_string(),
        )
    })?;
    let mut report = minmax_of_codes(p, &codes)?;
    report.c_opt = census.c_opt;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::gf2::Gf2Matrix;
    use crate::optlen::SideInfoChoice;
    use crate::problem::{sample, Receiver};
    use crate::transfer::{t_use_from_t, TransferComponents};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic3() -> IndexCodingProblem {
        IndexCodingProblem::from_lists(3, &[(&[1], &[2]), (&[2], &[3]), (&[3], &[1])]).unwrap()
    }

    fn four_message() -> IndexCodingProblem {
        // 4-cycle where R3 also knows x1
        IndexCodingProblem::new(
            4,
            vec![
                Receiver::new(vec![1], vec![2]),
                Receiver::new(vec![2], vec![3]),
                Receiver::new(vec![3], vec![4, 1]),
                Receiver::new(vec![4], vec![1]),
            ],
        )
        .unwrap()
    }

    fn code(n: usize, s: &str) -> IndexCode {
        IndexCode::parse(n, s).unwrap()
    }

    #[test]
    fn plans_for_three_cycle() {
        let p = cyclic3();
        let c = code(3, "x1+x2, x2+x3");
        let r1 = minimal_plans(&p, &c, 1).unwrap();
        assert_eq!(
            r1,
            vec![DecodingPlan {
                receiver: 1,
                want: 1,
                used_transmissions: vec![1],
                used_side_info: vec![2],
                t_use: 1,
            }]
        );
        let r3 = minimal_plans(&p, &c, 3).unwrap();
        assert_eq!(r3.len(), 1);
        assert_eq!(r3[0].t_use, 2);
        assert_eq!(r3[0].used_side_info, vec![1]);
        for r in 1..=3 {
            for plan in minimal_plans(&p, &c, r).unwrap() {
                assert!(plan.is_correct(&c));
            }
        }
    }

    #[test]
    fn undecodable_and_bad_index() {
        let p = cyclic3();
        let c = code(3, "x1+x2");
        assert!(matches!(
            minimal_plans(&p, &c, 3),
            Err(Error::Undecodable { receiver: 3, want: 3 })
        ));
        assert!(matches!(minimal_plans(&p, &c, 4), Err(Error::Index(_))));
        assert!(matches!(t_max_of_code(&p, &c), Err(Error::InvalidCode(_))));
    }

    #[test]
    fn three_cycle_codes_all_need_two() {
        let p = cyclic3();
        for s in ["x1+x2, x2+x3", "x1+x3, x3+x2", "x1+x3, x1+x2"] {
            assert_eq!(t_max_of_code(&p, &code(3, s)).unwrap(), 2);
        }
        let report = select_minmax(&p, &Limits::default()).unwrap();
        assert_eq!(report.t_minmax, 2);
        assert_eq!(report.winners, vec![1, 2, 3]);
        assert_eq!(report.c_opt, 2);
    }

    #[test]
    fn four_message_codes() {
        let p = four_message();
        assert_eq!(t_max_of_code(&p, &code(4, "x3+x2, x2+x1, x4")).unwrap(), 2);
        assert_eq!(t_max_of_code(&p, &code(4, "x3+x2, x2+x1, x1+x4+x3")).unwrap(), 3);
        let report = select_minmax(&p, &Limits::default()).unwrap();
        assert_eq!(report.per_code.len(), 56);
        assert_eq!(report.t_minmax, 2);
        for u in &report.per_code {
            assert!(1 <= u.t_max && u.t_max <= 3);
        }
    }

    #[test]
    fn uncoded_uses_one_transmission() {
        let p = four_message();
        let c = IndexCode::uncoded(4).unwrap();
        assert_eq!(t_use_of_code(&p, &c).unwrap(), vec![1; 4]);
    }

    #[test]
    fn first_plans_cover_every_want() {
        let p = IndexCodingProblem::from_lists(3, &[(&[1, 2], &[3]), (&[3], &[1])]).unwrap();
        let c = IndexCode::uncoded(3).unwrap();
        let plans = first_plans(&p, &c).unwrap();
        assert_eq!(plans.iter().map(|pl| (pl.receiver, pl.want)).collect::<Vec<_>>(), vec![(1, 1), (1, 2), (2, 3)]);
    }

    fn all_single_unicast(n: usize) -> Vec<IndexCodingProblem> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| (0..n).filter(move |&k| k != r).map(move |k| (r, k)))
            .collect();
        (0..1u64 << pairs.len())
            .map(|mask| {
                let mut knows = vec![Vec::new(); n];
                for (b, &(r, k)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        knows[r].push(k + 1);
                    }
                }
                let receivers = knows
                    .into_iter()
                    .enumerate()
                    .map(|(r, k)| Receiver::new(vec![r + 1], k))
                    .collect();
                IndexCodingProblem::new(n, receivers).unwrap()
            })
            .collect()
    }

    /// Minimum per-receiver indicator count over every transfer matrix in
    /// S(c) whose broadcast coefficients encode `code` in its sorted order.
    fn min_usage_over_transfer_matrices(p: &IndexCodingProblem, code: &IndexCode) -> Vec<usize> {
        let su = p.normalize().unwrap();
        let n = su.n();
        let c = code.len();
        let beta = Gf2Matrix::from_u64_rows(n, code.codewords());
        let mut best = vec![usize::MAX; n];
        for eps in 0..1u64 << (c * n) {
            let epsilon = Gf2Matrix::from_fn(c, n, |j, r| eps >> (j * n + r) & 1 == 1);
            for side in 0..1u64 << su.side_info_total() {
                let choice = SideInfoChoice::from_index(side, su.side_info_total());
                let tc = TransferComponents::new(&su, c, beta.clone(), epsilon.clone(), choice).unwrap();
                if !tc.is_solution().unwrap() {
                    continue;
                }
                let usage = t_use_from_t(&tc.t().unwrap(), &su, c).unwrap();
                for (b, u) in best.iter_mut().zip(usage) {
                    *b = (*b).min(u);
                }
            }
        }
        best
    }

    #[test]
    fn plan_search_matches_transfer_indicator() {
        let limits = Limits::default();
        for n in 1..=3 {
            for p in all_single_unicast(n) {
                let census = enumerate_optimal_codes(&p, &limits).unwrap();
                if census.c_opt > 2 {
                    continue;
                }
                for code in census.codes.unwrap() {
                    assert_eq!(
                        t_use_of_code(&p, &code).unwrap(),
                        min_usage_over_transfer_matrices(&p, &code),
                        "{p} with {code}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn relabeling_permutes_winners(seed in any::<u64>(), n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = sample::single_unicast(&mut rng, n, 0.4);
            let labels: Vec<usize> = sample::derangement(&mut rng, n).iter().map(|x| x + 1).collect();
            let q = p.relabel_messages(&labels).unwrap();
            let limits = Limits::default();
            let a = select_minmax(&p, &limits).unwrap();
            let b = select_minmax(&q, &limits).unwrap();
            prop_assert_eq!(a.t_minmax, b.t_minmax);
            let moved: BTreeSet<IndexCode> = a
                .winner_codes()
                .map(|u| u.code.relabel(n, &labels).unwrap())
                .collect();
            let direct: BTreeSet<IndexCode> = b.winner_codes().map(|u| u.code.clone()).collect();
            prop_assert_eq!(moved, direct);
            for u in &a.per_code {
                prop_assert!(1 <= u.t_max && u.t_max <= a.c_opt);
            }
        }
    }
}
