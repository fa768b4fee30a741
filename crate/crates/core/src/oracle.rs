//! Brute-force ground truth on small hypercubes: exhaustive minimum
//! average distance, extremal Fourier weights, and noise-agreement
//! extremes, plus an exact duality sweep over the LP pair.
//!
//! Enumeration works in bit-string key order (key = word's string read as
//! a binary number), so the first optimum found is the lexicographically
//! smallest witness. XOR and popcount are preserved by the key map, so
//! distances are computed on keys directly.

use crate::arith::{binomial, rat};
use crate::code::BinaryCode;
use crate::fourier::{q_agree, weight_profile, wht, BooleanFunction};
use crate::krawtchouk::KrawtchoukTable;
use crate::lp::{
    build_avgdist_dual, build_avgdist_primal, simplex_solve, SolveStatus,
};
use crate::{Error, Int, Rational, Result};
use num::{One, Signed, Zero};
use serde::Serialize;

/// Leaf-count ceiling for the reduced n = 5 search.
const REDUCED_LEAF_LIMIT: u64 = 1 << 28;

#[derive(Debug, Clone)]
pub struct SearchResult<W> {
    pub optimum: Rational,
    /// With symmetry_reduced set, smallest within the reduced space only.
    pub witness: W,
    /// Candidates fully evaluated; monotone pruning may skip the rest.
    pub explored: u64,
    pub symmetry_reduced: bool,
}

fn key_to_mask(key: u64, n: usize) -> u64 {
    key.reverse_bits() >> (64 - n)
}

struct CodeSearch {
    /// total ordered-pair-normalized: D = 2 * pair_sum / M^2
    best_sum: Option<u64>,
    best: Vec<u64>,
    explored: u64,
}

impl CodeSearch {
    /// Extends `chosen` with `need` more keys from pool[from..], keeping
    /// the running sum of pairwise distances. Keys ascend, so candidates
    /// arrive in lexicographic bit-string order.
    fn recurse(&mut self, pool: &[u64], from: usize, chosen: &mut Vec<u64>, sum: u64, need: usize) {
        if let Some(b) = self.best_sum {
            if sum >= b {
                return; // distances only grow; no strict improvement left
            }
        }
        if need == 0 {
            self.explored += 1;
            self.best_sum = Some(sum);
            self.best = chosen.clone();
            return;
        }
        if pool.len() - from < need {
            return;
        }
        for idx in from..=pool.len() - need {
            let key = pool[idx];
            let added: u64 = chosen
                .iter()
                .map(|&c| u64::from((c ^ key).count_ones()))
                .sum();
            chosen.push(key);
            self.recurse(pool, idx + 1, chosen, sum + added, need - 1);
            chosen.pop();
        }
    }
}

/// Exact minimum of the average distance over all size-M codes on n
/// coordinates. Full enumeration for n <= 4; n = 5 runs a reduced search
/// over translation and coordinate-permutation orbits (every orbit has a
/// representative containing 0 and the left-packed word of the minimum
/// nonzero weight w, with no nonzero word lighter than w).
pub fn min_avg_distance_exhaustive(n: usize, m_size: u64) -> Result<SearchResult<BinaryCode>> {
    if n < 1 || n > 5 {
        let est = if n >= 6 {
            format!("about C(2^{n}, M) candidates")
        } else {
            "n >= 1 required".into()
        };
        return Err(Error::size_guard(
            format!("exhaustive distance search at n = {n}"),
            est,
        ));
    }
    let size = 1u64 << n;
    if m_size < 1 || m_size > size {
        return Err(Error::domain(format!("M = {m_size} outside [1:{size}]")));
    }
    let m = m_size as usize;

    let mut search = CodeSearch {
        best_sum: None,
        best: Vec::new(),
        explored: 0,
    };
    let reduced = n == 5;
    if !reduced {
        let pool: Vec<u64> = (0..size).collect();
        search.recurse(&pool, 0, &mut Vec::new(), 0, m);
    } else if m == 1 {
        search.best_sum = Some(0);
        search.best = vec![0];
        search.explored = 1;
    } else {
        // orbit representatives: 0 and e_w in the code, all weights >= w
        let mut estimate = Int::zero();
        let mut pools: Vec<(u64, Vec<u64>)> = Vec::new();
        for w in 1..=n {
            let e_key = ((1u64 << w) - 1) << (n - w); // string 1^w 0^(n-w)
            let pool: Vec<u64> = (1..size)
                .filter(|&k| k.count_ones() as usize >= w && k != e_key)
                .collect();
            if pool.len() + 2 >= m {
                estimate += binomial(pool.len() as u64, (m - 2) as u64);
                pools.push((e_key, pool));
            }
        }
        if estimate > Int::from(REDUCED_LEAF_LIMIT) {
            return Err(Error::size_guard(
                format!("reduced distance search at n = 5, M = {m_size}"),
                format!("about {estimate} candidates"),
            ));
        }
        for (e_key, pool) in pools {
            let w_dist = e_key.count_ones() as u64;
            let mut chosen = vec![0u64, e_key];
            search.recurse(&pool, 0, &mut chosen, w_dist, m - 2);
        }
    }

    let pair_sum = search
        .best_sum
        .ok_or_else(|| Error::internal("search found no candidate"))?;
    let optimum = rat(2 * pair_sum as i64, (m_size * m_size) as i64);
    let mut words: Vec<u64> = search.best.iter().map(|&k| key_to_mask(k, n)).collect();
    words.sort_unstable();
    Ok(SearchResult {
        optimum,
        witness: BinaryCode::new(n, words)?,
        explored: search.explored,
        symmetry_reduced: reduced,
    })
}

/// Iterator over all popcount-M masks of the given width, ascending.
fn gosper(width: u32, m: u64) -> impl Iterator<Item = u64> {
    let end = 1u64 << width;
    let mut next = if m == 0 { Some(0u64) } else { Some((1u64 << m) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= end {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some(r | (((cur ^ r) >> 2) / c))
        };
        Some(cur)
    })
}

/// Truth-table string order on support masks of width 2^n.
fn table_key(mask: u64, n: usize) -> u64 {
    mask.reverse_bits() >> (64 - (1usize << n))
}

/// Exact maximum of the level-m Fourier weight over all functions with
/// support size M on n coordinates, n <= 4.
pub fn max_fourier_weight_exhaustive(
    n: usize,
    m_size: u64,
    m: usize,
) -> Result<SearchResult<BooleanFunction>> {
    if n < 1 || n > 4 {
        return Err(Error::size_guard(
            format!("exhaustive weight search at n = {n}"),
            format!("about C(2^{n}, M) spectra"),
        ));
    }
    if m > n {
        return Err(Error::domain(format!("level m = {m} above n = {n}")));
    }
    let size = 1u64 << n;
    if m_size > size {
        return Err(Error::domain(format!("M = {m_size} above 2^n = {size}")));
    }
    let cells = 1usize << n;
    // (numerator of W_m * 4^n, string key, support mask)
    let mut best: Option<(i64, u64, u64)> = None;
    let mut explored = 0u64;
    for mask in gosper(cells as u32, m_size) {
        explored += 1;
        let mut v: Vec<i64> = (0..cells)
            .map(|t| if mask >> t & 1 == 1 { 1 } else { -1 })
            .collect();
        crate::code::fwht_i64(&mut v);
        let num: i64 = (0..cells)
            .filter(|s| s.count_ones() as usize == m)
            .map(|s| v[s] * v[s])
            .sum();
        let key = table_key(mask, n);
        let better = match best {
            None => true,
            Some((bn, bk, _)) => num > bn || (num == bn && key < bk),
        };
        if better {
            best = Some((num, key, mask));
        }
    }
    let (num, _, mask) = best.ok_or_else(|| Error::internal("empty enumeration"))?;
    let table: Vec<bool> = (0..cells).map(|t| mask >> t & 1 == 1).collect();
    Ok(SearchResult {
        optimum: Rational::new(Int::from(num), Int::from(1i64 << (2 * n))),
        witness: BooleanFunction::new(n, table)?,
        explored,
        symmetry_reduced: false,
    })
}

#[derive(Debug, Clone)]
pub struct NoiseExtremes {
    pub rho: Rational,
    pub min: Rational,
    pub max: Rational,
    pub min_witness: BooleanFunction,
    pub max_witness: BooleanFunction,
    pub explored: u64,
}

/// Exact extremes of the rho-correlated agreement probability
/// q = Pr[x in A, y in A] over all supports of size M, n <= 4.
pub fn noise_extremes_exhaustive(n: usize, m_size: u64, rho: &Rational) -> Result<NoiseExtremes> {
    if n < 1 || n > 4 {
        return Err(Error::size_guard(
            format!("exhaustive noise scan at n = {n}"),
            format!("about C(2^{n}, M) spectra"),
        ));
    }
    if rho.is_negative() || rho > &Rational::one() {
        return Err(Error::domain(format!("rho = {rho} outside [0, 1]")));
    }
    let size = 1u64 << n;
    if m_size > size {
        return Err(Error::domain(format!("M = {m_size} above 2^n = {size}")));
    }
    let cells = 1usize << n;
    let a = rat(m_size as i64, size as i64);
    let mut lo: Option<(Rational, u64, u64)> = None; // (q, key, mask)
    let mut hi: Option<(Rational, u64, u64)> = None;
    let mut explored = 0u64;
    for mask in gosper(cells as u32, m_size) {
        explored += 1;
        let table: Vec<bool> = (0..cells).map(|t| mask >> t & 1 == 1).collect();
        let f = BooleanFunction::new(n, table)?;
        let profile = weight_profile(&wht(&f), &a)?;
        let q = q_agree(&profile, rho)?;
        let key = table_key(mask, n);
        let lo_better = match &lo {
            None => true,
            Some((bq, bk, _)) => q < *bq || (q == *bq && key < *bk),
        };
        if lo_better {
            lo = Some((q.clone(), key, mask));
        }
        let hi_better = match &hi {
            None => true,
            Some((bq, bk, _)) => q > *bq || (q == *bq && key < *bk),
        };
        if hi_better {
            hi = Some((q, key, mask));
        }
    }
    let build = |mask: u64| -> Result<BooleanFunction> {
        BooleanFunction::new(n, (0..cells).map(|t| mask >> t & 1 == 1).collect())
    };
    let (min_q, _, min_mask) = lo.ok_or_else(|| Error::internal("empty enumeration"))?;
    let (max_q, _, max_mask) = hi.ok_or_else(|| Error::internal("empty enumeration"))?;
    Ok(NoiseExtremes {
        rho: rho.clone(),
        min: min_q,
        max: max_q,
        min_witness: build(min_mask)?,
        max_witness: build(max_mask)?,
        explored,
    })
}

/// One (n, M) row of the duality sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub m_size: u64,
    /// shared primal/dual optimum
    pub lambda: String,
    /// distance lower bound n/2 + 1/2 - 1/(2a) + lambda/2
    pub bound: String,
    /// exhaustive minimum, present for n <= 4
    pub oracle_min: Option<String>,
    /// M is 2^(n-1) or 2^(n-2), where the bound is known to be tight
    pub equality_expected: bool,
    pub equality_holds: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct DualitySweepReport {
    pub records: Vec<SweepRecord>,
}

impl DualitySweepReport {
    pub fn to_json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serialization"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// For every n <= n_max and M <= 2^(n-1): solves both LPs exactly,
/// requires their optima to coincide, and checks the resulting bound
/// against the exhaustive minimum where one is computable.
pub fn verify_duality_sweep(n_max: usize) -> Result<DualitySweepReport> {
    if !(2..=12).contains(&n_max) {
        return Err(Error::domain(format!("n_max = {n_max} outside [2:12]")));
    }
    let mut records = Vec::new();
    for n in 2..=n_max {
        let table = KrawtchoukTable::new(n);
        for m_size in 1..=(1u64 << (n - 1)) {
            let a = rat(m_size as i64, 1i64 << n);
            let primal = simplex_solve(&build_avgdist_primal(&table, &a)?)?;
            let dual = simplex_solve(&build_avgdist_dual(&table, &a)?)?;
            if primal.status != SolveStatus::Optimal || dual.status != SolveStatus::Optimal {
                return Err(Error::internal(format!(
                    "LP at n = {n}, M = {m_size} not optimal: {:?} / {:?}",
                    primal.status, dual.status
                )));
            }
            let lambda = primal.optimum.expect("optimal");
            let lambda_dual = dual.optimum.expect("optimal");
            if lambda != lambda_dual {
                return Err(Error::internal(format!(
                    "duality gap at n = {n}, M = {m_size}: {lambda} vs {lambda_dual}"
                )));
            }
            let bound = rat(n as i64, 2) + rat(1, 2) - a.recip() * rat(1, 2)
                + &lambda * rat(1, 2);
            let oracle_min = if n <= 4 {
                Some(min_avg_distance_exhaustive(n, m_size)?.optimum)
            } else {
                None
            };
            if let Some(o) = &oracle_min {
                if o < &bound {
                    return Err(Error::internal(format!(
                        "bound {bound} exceeds exhaustive minimum {o} at n = {n}, M = {m_size}"
                    )));
                }
            }
            let equality_expected =
                m_size == 1u64 << (n - 1) || (n >= 2 && m_size == 1u64 << (n - 2));
            records.push(SweepRecord {
                n,
                m_size,
                lambda: lambda.to_string(),
                bound: bound.to_string(),
                oracle_min: oracle_min.as_ref().map(|o| o.to_string()),
                equality_expected,
                equality_holds: oracle_min.map(|o| o == bound),
            });
        }
    }
    Ok(DualitySweepReport { records })
}
