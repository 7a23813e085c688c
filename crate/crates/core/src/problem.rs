//! Index coding problem instances: parsing, validation, classification and
//! normalization to the single-unicast form used by the algebraic modules.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One receiver: the messages it wants and the messages it already has.
/// Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Receiver {
    pub wants: Vec<usize>,
    pub knows: Vec<usize>,
}

impl Receiver {
    pub fn new(wants: impl Into<Vec<usize>>, knows: impl Into<Vec<usize>>) -> Self {
        Self {
            wants: wants.into(),
            knows: knows.into(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    messages: usize,
    receivers: Vec<Receiver>,
}

/// A validated index coding problem over `messages` binary messages.
///
/// The order of `wants`/`knows` entries is preserved as written; it fixes the
/// column order of the side-information band of each receiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexCodingProblem {
    messages: usize,
    receivers: Vec<Receiver>,
}

impl<'de> Deserialize<'de> for IndexCodingProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawProblem::deserialize(d)?;
        IndexCodingProblem::new(raw.messages, raw.receivers).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProblemClass {
    pub single_unicast: bool,
    pub unicast: bool,
    pub uniprior: bool,
    pub single_uniprior: bool,
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        if self.single_unicast {
            names.push("single-unicast");
        } else if self.unicast {
            names.push("unicast");
        }
        if self.single_uniprior {
            names.push("single-uniprior");
        } else if self.uniprior {
            names.push("uniprior");
        }
        if names.is_empty() {
            names.push("general");
        }
        f.write_str(&names.join(", "))
    }
}

impl IndexCodingProblem {
    pub fn new(messages: usize, receivers: Vec<Receiver>) -> Result<Self> {
        let p = Self {
            messages,
            receivers,
        };
        p.validate()?;
        Ok(p)
    }

    /// Shorthand for tests and examples: `(wants, knows)` per receiver.
    pub fn from_lists(messages: usize, receivers: &[(&[usize], &[usize])]) -> Result<Self> {
        Self::new(
            messages,
            receivers
                .iter()
                .map(|(w, k)| Receiver::new(w.to_vec(), k.to_vec()))
                .collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        for (r, rec) in self.receivers.iter().enumerate() {
            let label = r + 1;
            for (what, list) in [("wants", &rec.wants), ("knows", &rec.knows)] {
                let mut seen = BTreeSet::new();
                for &x in list {
                    if x == 0 || x > self.messages {
                        return Err(Error::Validation(format!(
                            "receiver {label} {what} x{x}, outside 1..={}",
                            self.messages
                        )));
                    }
                    if !seen.insert(x) {
                        return Err(Error::Validation(format!(
                            "receiver {label} lists x{x} twice in {what}"
                        )));
                    }
                }
            }
            if let Some(x) = rec.wants.iter().find(|w| rec.knows.contains(w)) {
                return Err(Error::Validation(format!(
                    "receiver {label} both wants and knows x{x}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.messages, raw.receivers)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn side_info_total(&self) -> usize {
        self.receivers.iter().map(|r| r.knows.len()).sum()
    }

    /// Messages (1-based) that no receiver wants.
    pub fn unwanted_messages(&self) -> Vec<usize> {
        let wanted: BTreeSet<usize> = self
            .receivers
            .iter()
            .flat_map(|r| r.wants.iter().copied())
            .collect();
        (1..=self.messages).filter(|x| !wanted.contains(x)).collect()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.unwanted_messages()
            .into_iter()
            .map(|x| format!("x{x} is not wanted by any receiver and is left out of the analysis"))
            .collect()
    }

    /// First pair of receivers (1-based) wanting the same message.
    fn want_overlap(&self) -> Option<(usize, usize, usize)> {
        let mut owner = vec![0usize; self.messages + 1];
        for (r, rec) in self.receivers.iter().enumerate() {
            for &w in &rec.wants {
                if owner[w] != 0 {
                    return Some((w, owner[w], r + 1));
                }
                owner[w] = r + 1;
            }
        }
        None
    }

    pub fn check_unicast(&self) -> Result<()> {
        match self.want_overlap() {
            Some((message, first, second)) => Err(Error::NotUnicast {
                message,
                first,
                second,
            }),
            None => Ok(()),
        }
    }

    pub fn classify(&self) -> ProblemClass {
        let unicast = self.want_overlap().is_none();
        let single_unicast = unicast
            && self.receivers.iter().all(|r| r.wants.len() == 1)
            && self.receivers.len() == self.messages;
        let mut known = vec![false; self.messages + 1];
        let mut uniprior = true;
        for rec in &self.receivers {
            for &k in &rec.knows {
                if known[k] {
                    uniprior = false;
                }
                known[k] = true;
            }
        }
        let single_uniprior = uniprior && self.receivers.iter().all(|r| r.knows.len() == 1);
        ProblemClass {
            single_unicast,
            unicast,
            uniprior,
            single_uniprior,
        }
    }

    /// Splits every multi-want receiver into one receiver per wanted message,
    /// each keeping the original side information. Receiver order follows
    /// the input, wants in listed order.
    pub fn to_single_unicast(&self) -> Result<IndexCodingProblem> {
        self.check_unicast()?;
        let receivers = self
            .receivers
            .iter()
            .flat_map(|r| {
                r.wants
                    .iter()
                    .map(move |&w| Receiver::new(vec![w], r.knows.clone()))
            })
            .collect();
        IndexCodingProblem::new(self.messages, receivers)
    }

    /// The normalized single-unicast view used by the algebraic modules.
    pub fn normalize(&self) -> Result<SingleUnicast> {
        SingleUnicast::from_problem(self)
    }

    /// Applies a message relabeling: message `x` becomes `perm[x - 1]`.
    pub fn relabel_messages(&self, perm: &[usize]) -> Result<IndexCodingProblem> {
        if perm.len() != self.messages {
            return Err(Error::Shape(format!(
                "relabeling of {} messages given for {}",
                perm.len(),
                self.messages
            )));
        }
        let map = |xs: &[usize]| xs.iter().map(|&x| perm[x - 1]).collect::<Vec<_>>();
        let receivers = self
            .receivers
            .iter()
            .map(|r| Receiver::new(map(&r.wants), map(&r.knows)))
            .collect();
        IndexCodingProblem::new(self.messages, receivers)
    }
}

impl fmt::Display for IndexCodingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[usize]| {
            if xs.is_empty() {
                "-".to_string()
            } else {
                xs.iter().map(|x| format!("x{x}")).collect::<Vec<_>>().join(",")
            }
        };
        writeln!(f, "{:<10} {:<16} knows", "receiver", "wants")?;
        for (r, rec) in self.receivers.iter().enumerate() {
            writeln!(
                f,
                "{:<10} {:<16} {}",
                format!("R{}", r + 1),
                list(&rec.wants),
                list(&rec.knows)
            )?;
        }
        Ok(())
    }
}

/// Single-unicast normal form: receiver `i` wants message `i` (0-based).
///
/// Built by splitting multi-want receivers and dropping messages nobody
/// wants. Message `i` here is original message `message_labels[i]`, and the
/// receiver is original receiver `receiver_labels[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleUnicast {
    n: usize,
    knows: Vec<Vec<usize>>,
    message_labels: Vec<usize>,
    receiver_labels: Vec<usize>,
    dropped: Vec<usize>,
}

impl SingleUnicast {
    fn from_problem(p: &IndexCodingProblem) -> Result<Self> {
        p.check_unicast()?;
        let mut wanted: Vec<(usize, usize)> = p
            .receivers
            .iter()
            .enumerate()
            .flat_map(|(r, rec)| rec.wants.iter().map(move |&w| (w, r)))
            .collect();
        wanted.sort_unstable();
        let mut index_of = vec![usize::MAX; p.messages + 1];
        for (i, &(w, _)) in wanted.iter().enumerate() {
            index_of[w] = i;
        }
        let knows = wanted
            .iter()
            .map(|&(_, r)| {
                p.receivers[r]
                    .knows
                    .iter()
                    .filter_map(|&k| (index_of[k] != usize::MAX).then_some(index_of[k]))
                    .collect()
            })
            .collect();
        Ok(Self {
            n: wanted.len(),
            knows,
            message_labels: wanted.iter().map(|&(w, _)| w).collect(),
            receiver_labels: wanted.iter().map(|&(_, r)| r + 1).collect(),
            dropped: p.unwanted_messages(),
        })
    }

    /// Directly from 0-based side-information lists; receiver `i` wants `i`.
    pub fn from_knows(knows: Vec<Vec<usize>>) -> Result<Self> {
        let n = knows.len();
        let receivers = knows
            .iter()
            .enumerate()
            .map(|(i, k)| Receiver::new(vec![i + 1], k.iter().map(|x| x + 1).collect::<Vec<_>>()))
            .collect();
        IndexCodingProblem::new(n, receivers)?.normalize()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based side information of receiver `i`, in band order.
    pub fn knows(&self, i: usize) -> &[usize] {
        &self.knows[i]
    }

    pub fn all_knows(&self) -> &[Vec<usize>] {
        &self.knows
    }

    pub fn side_info_total(&self) -> usize {
        self.knows.iter().map(Vec::len).sum()
    }

    pub fn message_labels(&self) -> &[usize] {
        &self.message_labels
    }

    pub fn receiver_labels(&self) -> &[usize] {
        &self.receiver_labels
    }

    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    pub fn knows_mask(&self, i: usize) -> u64 {
        assert!(self.n <= 64);
        self.knows[i].iter().fold(0, |m, &k| m | 1 << k)
    }

    /// The normal form as a problem with messages numbered `1..=n`.
    pub fn to_problem(&self) -> IndexCodingProblem {
        let receivers = self
            .knows
            .iter()
            .enumerate()
            .map(|(i, k)| Receiver::new(vec![i + 1], k.iter().map(|x| x + 1).collect::<Vec<_>>()))
            .collect();
        IndexCodingProblem::new(self.n, receivers).expect("normal form is valid")
    }
}

/// Seeded random instances, for tests and benchmarks.
pub mod sample {
    use rand::seq::SliceRandom;
    use rand::Rng;

    use super::{IndexCodingProblem, Receiver};

    fn build(n: usize, receivers: Vec<Receiver>) -> IndexCodingProblem {
        IndexCodingProblem::new(n, receivers).expect("sampler builds valid problems")
    }

    /// Receiver `i` wants `x_i` and knows each other message with
    /// probability `density`.
    pub fn single_unicast<R: Rng>(rng: &mut R, n: usize, density: f64) -> IndexCodingProblem {
        let receivers = (1..=n)
            .map(|i| {
                let knows: Vec<usize> = (1..=n)
                    .filter(|&k| k != i && rng.random_bool(density))
                    .collect();
                Receiver::new(vec![i], knows)
            })
            .collect();
        build(n, receivers)
    }

    /// Uniform derangement of `0..n` (a permutation with no fixed point).
    pub fn derangement<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
        assert!(n != 1, "no derangement of one element");
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            perm.shuffle(rng);
            if perm.iter().enumerate().all(|(i, &p)| i != p) {
                return perm;
            }
        }
    }

    /// Receiver `i` wants `x_i` and knows the single message `x_{σ(i)}`
    /// for a random derangement σ. Requires `n >= 2`.
    pub fn single_unicast_single_uniprior<R: Rng>(rng: &mut R, n: usize) -> IndexCodingProblem {
        let perm = derangement(rng, n);
        let receivers = (0..n)
            .map(|i| Receiver::new(vec![i + 1], vec![perm[i] + 1]))
            .collect();
        build(n, receivers)
    }

    /// Single unicast with pairwise disjoint side information: each message
    /// is known by at most one receiver other than its wanter.
    pub fn single_unicast_uniprior<R: Rng>(rng: &mut R, n: usize) -> IndexCodingProblem {
        let mut knows = vec![Vec::new(); n];
        for j in 0..n {
            if rng.random_bool(0.8) {
                let owner = rng.random_range(0..n);
                if owner != j {
                    knows[owner].push(j + 1);
                }
            }
        }
        let receivers = knows
            .into_iter()
            .enumerate()
            .map(|(i, k)| Receiver::new(vec![i + 1], k))
            .collect();
        build(n, receivers)
    }

    /// Unicast problem in which every receiver knows exactly one message and
    /// no message is known twice. Some messages may be known by nobody and
    /// receivers may want several messages. Requires `n >= 2`.
    pub fn single_uniprior_unicast<R: Rng>(rng: &mut R, n: usize) -> IndexCodingProblem {
        assert!(n >= 2, "needs at least two messages");
        loop {
            let m = rng.random_range(1..=n);
            let mut pool: Vec<usize> = (1..=n).collect();
            pool.shuffle(rng);
            let known = &pool[..m];
            let mut wants = vec![Vec::new(); m];
            for j in 1..=n {
                let candidates: Vec<usize> = (0..m).filter(|&r| known[r] != j).collect();
                if !candidates.is_empty() && rng.random_bool(0.9) {
                    wants[candidates[rng.random_range(0..candidates.len())]].push(j);
                }
            }
            let receivers: Vec<Receiver> = wants
                .into_iter()
                .zip(known)
                .filter(|(w, _)| !w.is_empty())
                .map(|(w, &k)| Receiver::new(w, vec![k]))
                .collect();
            if !receivers.is_empty() {
                return build(n, receivers);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(n: usize) -> IndexCodingProblem {
        let receivers = (1..=n)
            .map(|i| Receiver::new(vec![i], vec![i % n + 1]))
            .collect();
        IndexCodingProblem::new(n, receivers).unwrap()
    }

    #[test]
    fn cyclic_three_is_single_unicast_single_uniprior() {
        let text = r#"{"messages": 3, "receivers": [
            {"wants": [1], "knows": [2]},
            {"wants": [2], "knows": [3]},
            {"wants": [3], "knows": [1]}]}"#;
        let p = IndexCodingProblem::from_json_str(text).unwrap();
        assert_eq!(p, cyclic(3));
        let class = p.classify();
        assert!(class.single_unicast && class.single_uniprior);
    }

    #[test]
    fn extra_side_information_breaks_uniprior() {
        let p = IndexCodingProblem::from_lists(
            4,
            &[(&[1], &[2]), (&[2], &[3]), (&[3], &[4, 1]), (&[4], &[1])],
        )
        .unwrap();
        let class = p.classify();
        assert!(class.single_unicast);
        assert!(!class.uniprior && !class.single_uniprior);
    }

    #[test]
    fn want_and_know_overlap_is_rejected() {
        let text = r#"{"messages": 2, "receivers": [{"wants": [2], "knows": [2]}]}"#;
        assert!(matches!(
            IndexCodingProblem::from_json_str(text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        for text in [
            "{",
            r#"{"messages": 2, "receivers": [], "extra": 1}"#,
            r#"{"messages": 2, "receivers": [{"wants": [1], "knows": [], "x": 0}]}"#,
            r#"{"messages": -1, "receivers": []}"#,
        ] {
            assert!(
                matches!(IndexCodingProblem::from_json_str(text), Err(Error::Parse(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn out_of_range_and_duplicates_are_rejected() {
        assert!(IndexCodingProblem::from_lists(2, &[(&[3], &[])]).is_err());
        assert!(IndexCodingProblem::from_lists(2, &[(&[0], &[])]).is_err());
        assert!(IndexCodingProblem::from_lists(2, &[(&[1], &[2, 2])]).is_err());
    }

    #[test]
    fn splitting_copies_side_information() {
        let p = IndexCodingProblem::from_lists(10, &[(&[5, 10], &[4]), (&[7, 6], &[8])]).unwrap();
        let s = p.to_single_unicast().unwrap();
        assert_eq!(
            s.receivers(),
            &[
                Receiver::new(vec![5], vec![4]),
                Receiver::new(vec![10], vec![4]),
                Receiver::new(vec![7], vec![8]),
                Receiver::new(vec![6], vec![8]),
            ]
        );
    }

    #[test]
    fn splitting_single_problem_is_identity() {
        let p = cyclic(5);
        assert_eq!(p.to_single_unicast().unwrap(), p);
    }

    #[test]
    fn splitting_groupcast_fails() {
        let p = IndexCodingProblem::from_lists(2, &[(&[1], &[]), (&[1], &[2])]).unwrap();
        assert!(matches!(
            p.to_single_unicast(),
            Err(Error::NotUnicast { message: 1, first: 1, second: 2 })
        ));
    }

    #[test]
    fn normalization_drops_unwanted_messages() {
        // x2 is wanted by nobody; R2 wants x3 and x1.
        let p = IndexCodingProblem::from_lists(3, &[(&[], &[2]), (&[3, 1], &[2])]).unwrap();
        assert_eq!(p.unwanted_messages(), vec![2]);
        assert_eq!(p.warnings().len(), 1);
        let s = p.normalize().unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.message_labels(), &[1, 3]);
        assert_eq!(s.receiver_labels(), &[2, 2]);
        assert!(s.knows(0).is_empty() && s.knows(1).is_empty());
        assert_eq!(s.dropped(), &[2]);
    }

    #[test]
    fn band_order_follows_input() {
        let p = IndexCodingProblem::from_lists(3, &[(&[1], &[3, 2]), (&[2], &[]), (&[3], &[])])
            .unwrap();
        assert_eq!(p.normalize().unwrap().knows(0), &[2, 1]);
    }

    fn problem_strategy() -> impl Strategy<Value = IndexCodingProblem> {
        (2usize..7, any::<u64>()).prop_map(|(n, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample::single_uniprior_unicast(&mut rng, n)
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(p in problem_strategy()) {
            let back = IndexCodingProblem::from_json_str(&p.to_json_string()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn split_problems_are_single_unicast(p in problem_strategy()) {
            let s = p.to_single_unicast().unwrap();
            let class = s.classify();
            prop_assert!(class.unicast);
            prop_assert!(s.receivers().iter().all(|r| r.wants.len() == 1));
            prop_assert_eq!(class.single_unicast, p.unwanted_messages().is_empty());
        }

        #[test]
        fn sampled_classes_hold(seed in any::<u64>(), n in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sample::single_unicast_single_uniprior(&mut rng, n).classify();
            prop_assert!(a.single_unicast && a.single_uniprior);
            let b = sample::single_unicast_uniprior(&mut rng, n).classify();
            prop_assert!(b.single_unicast && b.uniprior);
            let c = sample::single_uniprior_unicast(&mut rng, n).classify();
            prop_assert!(c.unicast && c.single_uniprior);
        }
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = std::env::temp_dir().join(format!("indexcode-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.json");
        let p = cyclic(4);
        p.save(&path).unwrap();
        assert_eq!(IndexCodingProblem::load(&path).unwrap(), p);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
