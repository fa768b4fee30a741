//! Linear programs bounding the minimum average distance of a code of
//! density a, plus certificate machinery for their duals.
//!
//! The primal minimizes the tail mass sum u_i of a feasible dual distance
//! distribution; by strong duality its optimum equals the dual's, and any
//! feasible dual point certifies a lower bound on the primal optimum. The
//! average distance of every code A of density a on n coordinates then
//! obeys D(A) >= n/2 + 1/2 - 1/(2a) + lambda/2.

pub mod simplex;

use crate::arith::{dyadic_size, rat, rat_int};
use crate::krawtchouk::KrawtchoukTable;
use crate::{Error, Rational, Result};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
pub use simplex::{
    simplex_solve, Constraint, LinearProgramSpec, Relation, Sense, SimplexSolution, SolveStatus,
};

/// Exact solves above this n are impractically slow.
pub const SIMPLEX_LIMIT: usize = 14;

fn check_density_range(a: &Rational) -> Result<()> {
    if !a.is_positive() || a > &rat(1, 2) {
        return Err(Error::domain(format!("density {a} outside (0, 1/2]")));
    }
    Ok(())
}

/// Code-level statements need a realizable size M = a 2^n.
fn check_density(n: usize, a: &Rational) -> Result<()> {
    check_density_range(a)?;
    dyadic_size(n, a)?;
    Ok(())
}

fn check_lp_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    if n > SIMPLEX_LIMIT {
        return Err(Error::size_guard(
            format!("exact simplex on n = {n}"),
            format!("limit is n <= {SIMPLEX_LIMIT}"),
        ));
    }
    Ok(())
}

/// K_k(0) + (1/a - 1) K_k(m), the dual objective weight for degree k.
fn objective_weight(table: &KrawtchoukTable, a: &Rational, m: usize, k: usize) -> Rational {
    let inv_a_minus_1 = a.recip() - Rational::one();
    Rational::from(table.value(k, 0).clone())
        + inv_a_minus_1 * Rational::from(table.value(k, m).clone())
}

/// Distances i in [1:n] other than m, the constraint index set of the
/// weight-m problems. For m = 1 this is [2:n].
fn constrained_distances(n: usize, m: usize) -> Vec<usize> {
    (1..=n).filter(|&i| i != m).collect()
}

/// Primal program for the weight-m generalization: variables u_i over
/// i in [1:n]\{m}, minimizing their sum subject to one constraint per
/// Krawtchouk degree k in [1:n].
pub fn build_weight_primal(
    table: &KrawtchoukTable,
    a: &Rational,
    m: usize,
) -> Result<LinearProgramSpec> {
    let n = table.n();
    check_lp_size(n)?;
    check_density(n, a)?;
    if m < 1 || m > n {
        return Err(Error::domain(format!("weight m = {m} outside [1:{n}]")));
    }
    let distances = constrained_distances(n, m);
    let constraints = (1..=n)
        .map(|k| Constraint {
            coeffs: distances
                .iter()
                .map(|&i| {
                    Rational::from(table.value(k, m).clone() - table.value(k, i).clone())
                })
                .collect(),
            relation: Relation::Le,
            rhs: objective_weight(table, a, m, k),
        })
        .collect();
    Ok(LinearProgramSpec {
        sense: Sense::Minimize,
        objective: vec![Rational::one(); distances.len()],
        constraints,
        nonneg: vec![true; distances.len()],
    })
}

/// Dual of the weight-m primal: variables x_k over k in [1:n], maximizing
/// -sum_k [K_k(0) + (1/a - 1) K_k(m)] x_k subject to
/// sum_k [K_k(m) - K_k(i)] x_k >= -1 for every i in [1:n]\{m}.
pub fn build_weight_dual(
    table: &KrawtchoukTable,
    a: &Rational,
    m: usize,
) -> Result<LinearProgramSpec> {
    let n = table.n();
    check_lp_size(n)?;
    check_density(n, a)?;
    if m < 1 || m > n {
        return Err(Error::domain(format!("weight m = {m} outside [1:{n}]")));
    }
    let constraints = constrained_distances(n, m)
        .into_iter()
        .map(|i| Constraint {
            coeffs: (1..=n)
                .map(|k| {
                    Rational::from(table.value(k, m).clone() - table.value(k, i).clone())
                })
                .collect(),
            relation: Relation::Ge,
            rhs: -Rational::one(),
        })
        .collect();
    Ok(LinearProgramSpec {
        sense: Sense::Maximize,
        objective: (1..=n)
            .map(|k| -objective_weight(table, a, m, k))
            .collect(),
        constraints,
        nonneg: vec![true; n],
    })
}

/// The average-distance primal; the m = 1 case of the weight problems.
pub fn build_avgdist_primal(table: &KrawtchoukTable, a: &Rational) -> Result<LinearProgramSpec> {
    build_weight_primal(table, a, 1)
}

/// The average-distance dual; the m = 1 case of the weight problems.
pub fn build_avgdist_dual(table: &KrawtchoukTable, a: &Rational) -> Result<LinearProgramSpec> {
    build_weight_dual(table, a, 1)
}

/// A point for the dual program: x[k-1] multiplies the degree-k constraint
/// of the primal. Feasibility is independent of the density a; only the
/// objective value depends on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub n: usize,
    pub m: usize,
    pub x: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    n: usize,
    m: usize,
    x: Vec<String>,
}

impl DualCertificate {
    pub fn new(n: usize, m: usize, x: Vec<Rational>) -> Result<Self> {
        if n == 0 || m < 1 || m > n {
            return Err(Error::domain(format!("certificate shape n = {n}, m = {m}")));
        }
        if x.len() != n {
            return Err(Error::domain(format!(
                "certificate for n = {n} must have {n} entries, got {}",
                x.len()
            )));
        }
        Ok(DualCertificate { n, m, x })
    }

    pub fn to_json(&self) -> String {
        let dto = CertificateJson {
            n: self.n,
            m: self.m,
            x: self.x.iter().map(|v| v.to_string()).collect(),
        };
        serde_json::to_string(&dto).expect("certificate serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: CertificateJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("certificate: {e}")))?;
        let x = dto
            .x
            .iter()
            .map(|s| crate::arith::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        DualCertificate::new(dto.n, dto.m, x)
    }
}

/// The certificate (0, ..., 0, 1/2): only the degree-n coordinate is set.
/// Feasible for every n and m.
pub fn fwy_certificate(n: usize, m: usize) -> Result<DualCertificate> {
    let mut x = vec![Rational::zero(); n];
    if n == 0 {
        return Err(Error::domain("empty certificate"));
    }
    x[n - 1] = rat(1, 2);
    DualCertificate::new(n, m, x)
}

/// Two-sparse certificate supported on degrees k and k+1 with
/// k = 2*floor(beta*n/2), improving on the degree-n certificate for
/// densities below 1/4 when beta is tuned to 1/(2(1-sqrt(a))).
///
/// Entries, with K = k/n and e = 1/n:
///   x_k     = (1 + 2(K+e)^2 - 2(K+e) - e) / (C(n,k) * 2K * d)
///   x_{k+1} = (1 - K) / (C(n,k+1) * d)
/// where d = 2K - 1 + e(2K + 2e - 1).
pub fn improved_certificate(n: usize, beta: &Rational) -> Result<DualCertificate> {
    if beta <= &rat(1, 2) || beta >= &Rational::one() {
        return Err(Error::domain(format!("beta = {beta} outside (1/2, 1)")));
    }
    let bn2 = (beta * rat_int(n as i64) / rat_int(2)).floor();
    let k_int = bn2 * rat_int(2);
    let k = k_int
        .to_integer()
        .try_into()
        .map_err(|_| Error::internal("degree overflow"))?;
    improved_certificate_by_degree(n, k)
}

/// Same certificate, pinned directly to the even degree k.
pub fn improved_certificate_by_degree(n: usize, k: usize) -> Result<DualCertificate> {
    if k % 2 != 0 || k < 2 || k + 1 > n {
        return Err(Error::domain(format!(
            "degree k = {k} must be even with 2 <= k <= n-1 = {}",
            n.saturating_sub(1)
        )));
    }
    let kq = rat(k as i64, n as i64);
    let e = rat(1, n as i64);
    let two = rat_int(2);
    let d = &two * &kq - Rational::one() + &e * (&two * &kq + &two * &e - Rational::one());
    if d.is_zero() {
        return Err(Error::domain(format!("degenerate denominator at n = {n}, k = {k}")));
    }
    let ke = &kq + &e;
    let num_k = Rational::one() + &two * &ke * &ke - &two * &ke - &e;
    let c_k = Rational::from(crate::arith::binomial(n as u64, k as u64));
    let c_k1 = Rational::from(crate::arith::binomial(n as u64, (k + 1) as u64));
    let x_k = num_k / (&c_k * &two * &kq * &d);
    let x_k1 = (Rational::one() - &kq) / (&c_k1 * &d);
    let mut x = vec![Rational::zero(); n];
    x[k - 1] = x_k;
    x[k] = x_k1;
    DualCertificate::new(n, 1, x)
}

/// One violated dual constraint: the distance index and its exact slack
/// (negative means violated by that amount).
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub i: usize,
    pub slack: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub n: usize,
    pub m: usize,
    pub feasible: bool,
    pub violations: Vec<Violation>,
    /// Degrees k whose certificate entry is negative.
    pub negative_entries: Vec<usize>,
}

/// Checks every dual constraint exactly. Slack at distance i is
/// 1 + sum_k [K_k(m) - K_k(i)] x_k; feasibility needs all slacks >= 0 and
/// all entries >= 0. Scales to n in the hundreds since no LP is solved.
pub fn check_feasibility(cert: &DualCertificate, table: &KrawtchoukTable) -> Result<FeasibilityReport> {
    let n = table.n();
    if cert.n != n {
        return Err(Error::domain(format!(
            "certificate for n = {} against a table for n = {n}",
            cert.n
        )));
    }
    let m = cert.m;
    let support: Vec<usize> = (1..=n).filter(|&k| !cert.x[k - 1].is_zero()).collect();
    let negative_entries: Vec<usize> = (1..=n)
        .filter(|&k| cert.x[k - 1].is_negative())
        .collect();
    let mut violations = Vec::new();
    for i in constrained_distances(n, m) {
        let mut lhs = Rational::zero();
        for &k in &support {
            let diff = Rational::from(table.value(k, m).clone() - table.value(k, i).clone());
            lhs += diff * &cert.x[k - 1];
        }
        let slack = lhs + Rational::one();
        if slack.is_negative() {
            violations.push(Violation {
                i,
                slack: slack.to_string(),
            });
        }
    }
    Ok(FeasibilityReport {
        n,
        m,
        feasible: violations.is_empty() && negative_entries.is_empty(),
        violations,
        negative_entries,
    })
}

/// Dual objective -sum_k [K_k(0) + (1/a - 1) K_k(m)] x_k at the
/// certificate's point. A lower bound on the primal optimum whenever the
/// certificate is feasible. The density only scales the objective, so any
/// a in (0, 1/2] is accepted here, realizable as a code size or not.
pub fn dual_objective(cert: &DualCertificate, table: &KrawtchoukTable, a: &Rational) -> Result<Rational> {
    if cert.n != table.n() {
        return Err(Error::domain(format!(
            "certificate for n = {} against a table for n = {}",
            cert.n,
            table.n()
        )));
    }
    check_density_range(a)?;
    let mut total = Rational::zero();
    for k in 1..=table.n() {
        if !cert.x[k - 1].is_zero() {
            total += objective_weight(table, a, cert.m, k) * &cert.x[k - 1];
        }
    }
    Ok(-total)
}

/// Where the lambda value feeding the distance bound comes from.
pub enum LowerBoundMode<'a> {
    /// Solve the primal exactly (n <= SIMPLEX_LIMIT).
    Simplex,
    /// The degree-n certificate's objective, 1/(2a) - 1.
    Fwy,
    /// A caller-supplied feasible dual point.
    Certificate(&'a DualCertificate),
}

/// Lower bound n/2 + 1/2 - 1/(2a) + lambda/2 on the average distance of
/// every nonempty code of density a on n coordinates.
pub fn min_avgdist_lower_bound(n: usize, a: &Rational, mode: LowerBoundMode) -> Result<Rational> {
    check_density(n, a)?;
    let table = KrawtchoukTable::new(n);
    let lambda = match mode {
        LowerBoundMode::Simplex => {
            let spec = build_avgdist_primal(&table, a)?;
            let sol = simplex_solve(&spec)?;
            match sol.status {
                SolveStatus::Optimal => sol.optimum.expect("optimal solve carries a value"),
                other => {
                    return Err(Error::internal(format!(
                        "average-distance primal at n = {n}, a = {a} reported {other:?}"
                    )))
                }
            }
        }
        LowerBoundMode::Fwy => {
            let cert = fwy_certificate(n, 1)?;
            dual_objective(&cert, &table, a)?
        }
        LowerBoundMode::Certificate(cert) => {
            if cert.m != 1 {
                return Err(Error::domain(
                    "distance bound needs a certificate for m = 1",
                ));
            }
            let report = check_feasibility(cert, &table)?;
            if !report.feasible {
                return Err(Error::domain(format!(
                    "infeasible certificate: {} violations, {} negative entries",
                    report.violations.len(),
                    report.negative_entries.len()
                )));
            }
            dual_objective(cert, &table, a)?
        }
    };
    let half = rat(1, 2);
    Ok(rat_int(n as i64) * &half + &half - (a.recip() * &half) + lambda * &half)
}
