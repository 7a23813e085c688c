//! Fixed inputs for the benchmarks.

use indexcode_core::{IndexCodingProblem, Receiver};

pub fn bundled(name: &str) -> IndexCodingProblem {
    let text = match name {
        "ex1" => include_str!("../../../problems/ex1.json"),
        "ex2" => include_str!("../../../problems/ex2.json"),
        "ex3" => include_str!("../../../problems/ex3.json"),
        "ex4" => include_str!("../../../problems/ex4.json"),
        "ex5" => include_str!("../../../problems/ex5.json"),
        "ex6" => include_str!("../../../problems/ex6.json"),
        "ex7" => include_str!("../../../problems/ex7.json"),
        "ex8" => include_str!("../../../problems/ex8.json"),
        "ex9" => include_str!("../../../problems/ex9.json"),
        other => panic!("no bundled problem {other}"),
    };
    IndexCodingProblem::from_json_str(text).expect("bundled problems are valid")
}

/// Receiver `i` wants `x_i` and knows the next `k` messages cyclically.
pub fn circulant(n: usize, k: usize) -> IndexCodingProblem {
    let receivers = (1..=n)
        .map(|i| Receiver::new(vec![i], (1..=k).map(|d| (i - 1 + d) % n + 1).collect::<Vec<_>>()))
        .collect();
    IndexCodingProblem::new(n, receivers).expect("circulant problems are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_load() {
        for i in 1..=9 {
            bundled(&format!("ex{i}"));
        }
        assert_eq!(circulant(5, 2).side_info_total(), 10);
    }
}
