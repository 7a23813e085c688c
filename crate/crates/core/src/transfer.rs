//! Transfer-matrix view of a linear index code.
//!
//! For a single-unicast problem with `n` messages, code length `c` and
//! `K = sum |K_i|` side-information links, the network has `nc + K` edges
//! into the receivers' decoders:
//!
//! * `A` (`(nc + K) x n`) maps messages to edges. Edge `k*c + j` carries
//!   message `k` into transmission `j`; edge `nc + p` is the `p`-th
//!   side-information link, numbered receiver-major in band order.
//! * `F` (`(nc + K) x (nc + K)`) is `diag(F_BC, I)` where
//!   `F_BC[j*n + r][k*c + j] = beta[j][k]`: every one of the `n` copies of
//!   transmission `j` carries `g_j = sum_k beta[j][k] x_k`.
//! * `B` (`n x (nc + K)`) is `[B_BC | B_SI]` with
//!   `B_BC[r][j*n + r] = epsilon[j][r]`; `B_SI` is nonzero only in receiver
//!   `r`'s own band.
//!
//! The code is a solution iff `M = B F A = I`. Writing `T = B F`, the block
//! `R_j` collecting columns `{k*c + j}` of `T_BC` equals `epsilon_j beta_j^T`,
//! so `T` factors iff every `R_j` has rank at most one.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{self, AffineSolutionSet, Gf2Matrix};
use crate::optlen::SideInfoChoice;
use crate::problem::SingleUnicast;
use crate::Limits;

fn check_c(c: usize) -> Result<()> {
    if c == 0 {
        return Err(Error::Config("code length must be at least 1".into()));
    }
    Ok(())
}

fn edge_count(su: &SingleUnicast, c: usize) -> Result<usize> {
    let edges = su.n() * c + su.side_info_total();
    gf2::ensure_cols(edges)?;
    Ok(edges)
}

/// Message-to-edge incidence matrix.
pub fn build_a(su: &SingleUnicast, c: usize) -> Result<Gf2Matrix> {
    check_c(c)?;
    let n = su.n();
    let edges = edge_count(su, c)?;
    let mut a = Gf2Matrix::zeros(edges, n);
    for k in 0..n {
        for j in 0..c {
            a.set(k * c + j, k, true);
        }
    }
    let mut p = n * c;
    for i in 0..n {
        for &k in su.knows(i) {
            a.set(p, k, true);
            p += 1;
        }
    }
    Ok(a)
}

/// `diag(F_BC, I)` for coding coefficients `beta` (`c x n`, row `j` is
/// codeword `j`).
pub fn build_f(su: &SingleUnicast, c: usize, beta: &Gf2Matrix) -> Result<Gf2Matrix> {
    check_c(c)?;
    let n = su.n();
    if beta.shape() != (c, n) {
        return Err(Error::Shape(format!(
            "beta is {}x{}, expected {c}x{n}",
            beta.rows(),
            beta.cols()
        )));
    }
    let edges = edge_count(su, c)?;
    let mut f = Gf2Matrix::zeros(edges, edges);
    for j in 0..c {
        for k in 0..n {
            if beta.get(j, k) {
                for r in 0..n {
                    f.set(j * n + r, k * c + j, true);
                }
            }
        }
    }
    for e in n * c..edges {
        f.set(e, e, true);
    }
    Ok(f)
}

/// `[B_BC | B_SI]` for decoding coefficients `epsilon` (`c x n`,
/// `epsilon[j][r]` says receiver `r` uses transmission `j`) and the
/// side-information bits of `side_use`.
pub fn build_b(
    su: &SingleUnicast,
    c: usize,
    epsilon: &Gf2Matrix,
    side_use: &SideInfoChoice,
) -> Result<Gf2Matrix> {
    check_c(c)?;
    let n = su.n();
    if epsilon.shape() != (c, n) {
        return Err(Error::Shape(format!(
            "epsilon is {}x{}, expected {c}x{n}",
            epsilon.rows(),
            epsilon.cols()
        )));
    }
    if side_use.len() != su.side_info_total() {
        return Err(Error::Shape(format!(
            "{} side-information bits given, expected {}",
            side_use.len(),
            su.side_info_total()
        )));
    }
    let edges = edge_count(su, c)?;
    let mut b = Gf2Matrix::zeros(n, edges);
    for j in 0..c {
        for r in 0..n {
            if epsilon.get(j, r) {
                b.set(r, j * n + r, true);
            }
        }
    }
    let mut p = 0;
    for r in 0..n {
        for _ in su.knows(r) {
            if side_use.bit(p) {
                b.set(r, n * c + p, true);
            }
            p += 1;
        }
    }
    Ok(b)
}

/// Positions of `T` (`n x (nc + K)`) that must be zero: side-information
/// columns outside each receiver's own band.
pub fn zero_pattern(su: &SingleUnicast, c: usize) -> Result<Gf2Matrix> {
    let n = su.n();
    let edges = edge_count(su, c)?;
    let mut mask = Gf2Matrix::zeros(n, edges);
    let mut start = n * c;
    for r in 0..n {
        let end = start + su.knows(r).len();
        for row in 0..n {
            if row != r {
                for col in start..end {
                    mask.set(row, col, true);
                }
            }
        }
        start = end;
    }
    Ok(mask)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferComponents {
    pub c: usize,
    pub a: Gf2Matrix,
    pub f: Gf2Matrix,
    pub b: Gf2Matrix,
    pub beta: Gf2Matrix,
    pub epsilon: Gf2Matrix,
    pub side_use: SideInfoChoice,
}

impl TransferComponents {
    pub fn new(
        su: &SingleUnicast,
        c: usize,
        beta: Gf2Matrix,
        epsilon: Gf2Matrix,
        side_use: SideInfoChoice,
    ) -> Result<Self> {
        Ok(Self {
            c,
            a: build_a(su, c)?,
            f: build_f(su, c, &beta)?,
            b: build_b(su, c, &epsilon, &side_use)?,
            beta,
            epsilon,
            side_use,
        })
    }

    /// `M = B F A`; the code is a solution iff this is the identity.
    pub fn compose_m(&self) -> Result<Gf2Matrix> {
        self.b.mul(&self.f)?.mul(&self.a)
    }

    pub fn t(&self) -> Result<Gf2Matrix> {
        self.b.mul(&self.f)
    }

    pub fn is_solution(&self) -> Result<bool> {
        Ok(self.compose_m()? == Gf2Matrix::identity(self.a.cols()))
    }
}

/// `R_i` (1-based `i`): columns `{k*c + i - 1 : k < n}` of `T_BC`. Accepts
/// either `T_BC` or the full `T`.
pub fn extract_r(t: &Gf2Matrix, i: usize, n: usize, c: usize) -> Result<Gf2Matrix> {
    if i == 0 || i > c {
        return Err(Error::Index(format!("R_{i} requested with c = {c}")));
    }
    if t.rows() != n || t.cols() < n * c {
        return Err(Error::Shape(format!(
            "T is {}x{}, expected {n} rows and at least {} columns",
            t.rows(),
            t.cols(),
            n * c
        )));
    }
    let cols: Vec<usize> = (0..n).map(|k| k * c + i - 1).collect();
    t.select_columns(&cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RBlock {
    pub rank: usize,
    pub is_zero: bool,
}

/// A `(B, F)` pair realizing a member of S(c).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub beta: Gf2Matrix,
    pub epsilon: Gf2Matrix,
    pub side_use: SideInfoChoice,
}

#[derive(Clone, Debug, Serialize)]
pub struct SMembershipReport {
    pub t: Gf2Matrix,
    pub per_r: Vec<RBlock>,
    pub lambda: usize,
    pub in_s: bool,
    pub witness: Option<Witness>,
}

fn check_left_inverse(t: &Gf2Matrix, su: &SingleUnicast, c: usize) -> Result<()> {
    let a = build_a(su, c)?;
    if t.shape() != (su.n(), a.rows()) {
        return Err(Error::NotLeftInverse(format!(
            "T is {}x{}, expected {}x{}",
            t.rows(),
            t.cols(),
            su.n(),
            a.rows()
        )));
    }
    if t.mul(&a)? != Gf2Matrix::identity(su.n()) {
        return Err(Error::NotLeftInverse("T*A is not the identity".into()));
    }
    let mask = zero_pattern(su, c)?;
    for r in 0..t.rows() {
        for col in 0..t.cols() {
            if mask.get(r, col) && t.get(r, col) {
                return Err(Error::NotLeftInverse(format!(
                    "entry ({}, {}) lies outside receiver {}'s side-information band",
                    r + 1,
                    col + 1,
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

/// Rank-one test of every `R_i`; for members of S(c) also returns the
/// normal-form factorization: `beta_i` is the first nonzero row of `R_i` and
/// `epsilon_i` marks the nonzero rows.
pub fn check_membership_s(t: &Gf2Matrix, su: &SingleUnicast, c: usize) -> Result<SMembershipReport> {
    check_left_inverse(t, su, c)?;
    let n = su.n();
    let mut per_r = Vec::with_capacity(c);
    let mut beta = Gf2Matrix::zeros(c, n);
    let mut epsilon = Gf2Matrix::zeros(c, n);
    for i in 0..c {
        let r = extract_r(t, i + 1, n, c)?;
        let rank = r.rank();
        per_r.push(RBlock {
            rank,
            is_zero: r.is_zero(),
        });
        if let Some(first) = (0..n).find(|&row| !r.row_is_zero(row)) {
            for k in 0..n {
                beta.set(i, k, r.get(first, k));
            }
            for row in 0..n {
                epsilon.set(i, row, !r.row_is_zero(row));
            }
        }
    }
    let lambda = per_r.iter().filter(|b| b.is_zero).count();
    let in_s = per_r.iter().all(|b| b.rank <= 1);
    let witness = in_s.then(|| {
        let side_use = SideInfoChoice::from_bits(
            (0..su.side_info_total())
                .map(|p| {
                    let owner = band_owner(su, p);
                    t.get(owner, n * c + p)
                })
                .collect(),
        );
        Witness {
            beta,
            epsilon,
            side_use,
        }
    });
    Ok(SMembershipReport {
        t: t.clone(),
        per_r,
        lambda,
        in_s,
        witness,
    })
}

fn band_owner(su: &SingleUnicast, p: usize) -> usize {
    let mut start = 0;
    for r in 0..su.n() {
        start += su.knows(r).len();
        if p < start {
            return r;
        }
    }
    unreachable!("pair {p} outside every band")
}

/// S'(c): all left inverses of `A` obeying the side-information zero
/// pattern.
pub fn s_prime(su: &SingleUnicast, c: usize) -> Result<AffineSolutionSet> {
    let a = build_a(su, c)?;
    gf2::solve_constrained_left_inverses(&a, &zero_pattern(su, c)?)
}

/// `n^2 c - n^2 + K`: the dimension of S'(c).
pub fn s_prime_dimension(su: &SingleUnicast, c: usize) -> usize {
    let n = su.n();
    n * n * c - n * n + su.side_info_total()
}

pub fn s_prime_size(su: &SingleUnicast, c: usize) -> BigUint {
    BigUint::one() << s_prime_dimension(su, c)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OptimalityVerdict {
    /// S(c) is nonempty and none of its members has an all-zero `R_i`.
    Optimal { s_prime_size: u64, s_size: u64 },
    /// A member of S(c) with `lambda` all-zero blocks: a transmission can be
    /// dropped.
    NotOptimal {
        s_prime_size: u64,
        member_index: u64,
        lambda: usize,
        witness: Gf2Matrix,
    },
    /// No member of S'(c) factors, so no code of length `c` exists.
    NoSolution { s_prime_size: u64 },
}

impl OptimalityVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Optimal { .. } => "optimal",
            Self::NotOptimal { .. } => "not_optimal",
            Self::NoSolution { .. } => "no_solution",
        }
    }
}

/// `(in S, lambda)` from packed `R_i` rows, without allocation beyond one
/// scratch buffer.
fn lambda_profile(t: &Gf2Matrix, n: usize, c: usize, rows: &mut Vec<u64>) -> (bool, usize) {
    let mut lambda = 0;
    for i in 0..c {
        rows.clear();
        for r in 0..n {
            let mut bits = 0u64;
            for k in 0..n {
                if t.get(r, k * c + i) {
                    bits |= 1 << k;
                }
            }
            rows.push(bits);
        }
        let mut first = 0;
        for &row in rows.iter() {
            if row != 0 {
                if first == 0 {
                    first = row;
                } else if row != first {
                    return (false, 0);
                }
            }
        }
        if first == 0 {
            lambda += 1;
        }
    }
    (true, lambda)
}

const BLOCK_BITS: usize = 12;

/// Exhaustive check over S'(c). Members are visited in blocks of
/// consecutive selector indices (Gray order inside a block), in parallel;
/// the reported witness is the one with the smallest selector index.
pub fn verify_optimality_by_theorem1(
    su: &SingleUnicast,
    c: usize,
    limits: &Limits,
) -> Result<OptimalityVerdict> {
    check_c(c)?;
    let n = su.n();
    if n > 64 {
        return Err(Error::Shape(format!("{n} messages exceeds 64")));
    }
    let set = s_prime(su, c)?;
    let dim = set.dim();
    if dim > limits.sprime_dim {
        return Err(Error::cap("S'(c) enumeration", format!("dimension {dim}"), limits.sprime_dim));
    }
    let total = 1u64 << dim;
    let block_bits = BLOCK_BITS.min(dim);
    let blocks = 1u64 << (dim - block_bits);
    let basis = set.homogeneous_basis();

    let scan = |block: u64| -> (Option<(u64, usize, Gf2Matrix)>, u64) {
        let base = block << block_bits;
        let mut t = set.member(base);
        let mut rows = Vec::with_capacity(n);
        let mut best: Option<(u64, usize, Gf2Matrix)> = None;
        let mut in_s_count = 0;
        for step in 0..(1u64 << block_bits) {
            if step > 0 {
                let flip = step.trailing_zeros() as usize;
                t.xor_assign(&basis[flip]).expect("same shape");
            }
            let index = base | (step ^ (step >> 1));
            let (in_s, lambda) = lambda_profile(&t, n, c, &mut rows);
            if in_s {
                in_s_count += 1;
                if lambda > 0 && best.as_ref().map_or(true, |b| index < b.0) {
                    best = Some((index, lambda, t.clone()));
                }
            }
        }
        (best, in_s_count)
    };

    let found = (0..blocks).into_par_iter().find_map_first(|b| scan(b).0);
    if let Some((member_index, lambda, witness)) = found {
        return Ok(OptimalityVerdict::NotOptimal {
            s_prime_size: total,
            member_index,
            lambda,
            witness,
        });
    }
    let s_size: u64 = (0..blocks).into_par_iter().map(|b| scan(b).1).sum();
    Ok(if s_size == 0 {
        OptimalityVerdict::NoSolution {
            s_prime_size: total,
        }
    } else {
        OptimalityVerdict::Optimal {
            s_prime_size: total,
            s_size,
        }
    })
}

/// Per-receiver transmission usage read off a member of S(c): receiver `r`
/// uses transmission `j` iff some column `k*c + j` of its row is nonzero.
/// Accepts `T_BC` alone (only the rank condition is checked) or the full `T`.
pub fn t_use_from_t(t: &Gf2Matrix, su: &SingleUnicast, c: usize) -> Result<Vec<usize>> {
    let n = su.n();
    let full = n * c + su.side_info_total();
    if t.cols() == full && full != n * c {
        let report = check_membership_s(t, su, c)?;
        if !report.in_s {
            return Err(Error::NotFactorizable("some R_i has rank above one".into()));
        }
    } else if t.shape() == (n, n * c) {
        for i in 1..=c {
            if extract_r(t, i, n, c)?.rank() > 1 {
                return Err(Error::NotFactorizable(format!("R_{i} has rank above one")));
            }
        }
    } else {
        return Err(Error::Shape(format!(
            "T is {}x{}, expected {n}x{} or {n}x{full}",
            t.rows(),
            t.cols(),
            n * c
        )));
    }
    Ok((0..n)
        .map(|r| {
            (0..c)
                .filter(|&j| (0..n).any(|k| t.get(r, k * c + j)))
                .count()
        })
        .collect())
}
