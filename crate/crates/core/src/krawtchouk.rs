//! Krawtchouk polynomials K_k^{(n)}(x) over the binary Hamming scheme.
//!
//! Three independent evaluation routes are kept on purpose: the defining
//! alternating sum, the alternative expansion in powers of -2, and a
//! three-term recurrence used by [`KrawtchoukTable`]. Tests pit them against
//! each other; callers pick whichever fits.

use std::cell::OnceCell;

use crate::arith::{binomial, binomial_rational, pow2};
use crate::{Error, Int, Rational, Result};
use num::integer::Roots;
use num::{One, Signed, Zero};

fn check_domain(n: usize, k: usize, x: usize) -> Result<()> {
    if k > n || x > n {
        return Err(Error::domain(format!(
            "krawtchouk arguments k = {k}, x = {x} outside [0:{n}]"
        )));
    }
    Ok(())
}

/// K_k^{(n)}(x) by the defining sum  sum_j (-1)^j C(x,j) C(n-x,k-j).
///
/// Binomial factors are updated incrementally across j, so the whole value
/// costs O(k) big-integer operations.
pub fn krawtchouk(n: usize, k: usize, x: usize) -> Result<Int> {
    check_domain(n, k, x)?;
    let m = n - x;
    // terms vanish outside j in [max(0, k-m) : min(k, x)]
    let j_lo = k.saturating_sub(m);
    let j_hi = k.min(x);
    if j_lo > j_hi {
        return Ok(Int::zero());
    }
    let mut c_x = binomial(x as u64, j_lo as u64);
    let mut c_m = binomial(m as u64, (k - j_lo) as u64);
    let mut acc = Int::zero();
    for j in j_lo..=j_hi {
        let term = &c_x * &c_m;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        if j < j_hi {
            // C(x, j+1) = C(x, j) (x-j) / (j+1)
            c_x = c_x * Int::from((x - j) as u64) / Int::from((j + 1) as u64);
            // C(m, r-1) = C(m, r) r / (m-r+1), r = k-j
            let r = k - j;
            c_m = c_m * Int::from(r as u64) / Int::from((m - r + 1) as u64);
        }
    }
    Ok(acc)
}

/// K_k^{(n)}(x) by the alternative expansion  sum_j (-2)^j C(x,j) C(n-j,k-j).
pub fn krawtchouk_alt(n: usize, k: usize, x: usize) -> Result<Int> {
    check_domain(n, k, x)?;
    let j_hi = k.min(x);
    let mut c_x = Int::one(); // C(x, 0)
    let mut c_n = binomial(n as u64, k as u64); // C(n-j, k-j) at j = 0
    let mut pow = Int::one(); // (-2)^j
    let mut acc = Int::zero();
    for j in 0..=j_hi {
        acc += &pow * &c_x * &c_n;
        if j < j_hi {
            c_x = c_x * Int::from((x - j) as u64) / Int::from((j + 1) as u64);
            // C(n-j-1, k-j-1) = C(n-j, k-j) (k-j) / (n-j)
            c_n = c_n * Int::from((k - j) as u64) / Int::from((n - j) as u64);
            pow *= Int::from(-2);
        }
    }
    Ok(acc)
}

/// K_k^{(n)}(t) for rational t, by the defining sum with generalized
/// binomial coefficients.
pub fn krawtchouk_real(n: usize, k: usize, t: &Rational) -> Result<Rational> {
    if k > n {
        return Err(Error::domain(format!("krawtchouk degree k = {k} > n = {n}")));
    }
    let n_rat = Rational::from(Int::from(n as u64));
    let mut acc = Rational::zero();
    for j in 0..=k {
        let term = binomial_rational(t, j as u64)
            * binomial_rational(&(&n_rat - t), (k - j) as u64);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Full table of K_k^{(n)}(x) for one n. Rows are materialized on first
/// access via the three-term recurrence
///   k K_k(x) = (n-2x) K_{k-1}(x) - (n-k+2) K_{k-2}(x),
/// whose division by k is always exact.
pub struct KrawtchoukTable {
    n: usize,
    rows: Vec<OnceCell<Vec<Int>>>,
}

impl KrawtchoukTable {
    pub fn new(n: usize) -> Self {
        KrawtchoukTable {
            n,
            rows: (0..=n).map(|_| OnceCell::new()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row k: K_k(x) for x in [0:n].
    pub fn row(&self, k: usize) -> &[Int] {
        assert!(k <= self.n, "row {k} out of range for n = {}", self.n);
        for j in 0..=k {
            if self.rows[j].get().is_none() {
                let row = self.compute_row(j);
                let _ = self.rows[j].set(row);
            }
        }
        self.rows[k].get().expect("row just filled")
    }

    pub fn value(&self, k: usize, x: usize) -> &Int {
        assert!(x <= self.n, "x = {x} out of range for n = {}", self.n);
        &self.row(k)[x]
    }

    fn compute_row(&self, k: usize) -> Vec<Int> {
        let n = self.n;
        match k {
            0 => vec![Int::one(); n + 1],
            1 => (0..=n)
                .map(|x| Int::from(n as i64 - 2 * x as i64))
                .collect(),
            _ => {
                let prev = self.rows[k - 1].get().expect("row k-1 present");
                let prev2 = self.rows[k - 2].get().expect("row k-2 present");
                let kk = Int::from(k as u64);
                (0..=n)
                    .map(|x| {
                        let num = Int::from(n as i64 - 2 * x as i64) * &prev[x]
                            - Int::from((n - k + 2) as u64) * &prev2[x];
                        debug_assert!((&num % &kk).is_zero());
                        num / &kk
                    })
                    .collect()
            }
        }
    }
}

/// Isolating interval for the smallest real root of K_k^{(n)}.
#[derive(Debug, Clone)]
pub struct RootBracket {
    pub n: usize,
    pub k: usize,
    pub lower: Rational,
    pub upper: Rational,
    pub width: Rational,
}

pub fn default_root_tol() -> Rational {
    pow2(-20)
}

/// Brackets the smallest root of K_k^{(n)} to within `tol`.
///
/// Scans half-integer points from just below n/2 - sqrt(k(n-k)) for the
/// first sign change, then bisects. The polynomial is positive at the
/// returned lower endpoint and negative at the upper one.
pub fn smallest_root(n: usize, k: usize, tol: &Rational) -> Result<RootBracket> {
    if k == 0 || k > n {
        return Err(Error::domain(format!(
            "smallest_root needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if !tol.is_positive() {
        return Err(Error::domain("root tolerance must be positive"));
    }
    let eval = |t: &Rational| krawtchouk_real(n, k, t).expect("degree in range");
    // roots live in [n/2 - sqrt(k(n-k)), n/2 + sqrt(k(n-k))]
    let radius = ((k * (n - k)) as u64).sqrt();
    let start2 = (n as i64).saturating_sub(2 * radius as i64 + 2).max(0); // doubled coordinates
    let mut prev = Rational::new(Int::from(start2), Int::from(2));
    let mut prev_val = eval(&prev);
    if !prev_val.is_positive() {
        // hint overshot the first root; fall back to 0 where K > 0 always
        prev = Rational::zero();
        prev_val = eval(&prev);
    }
    debug_assert!(prev_val.is_positive());
    let half = Rational::new(Int::one(), Int::from(2));
    let limit = Rational::from(Int::from(n as u64));
    let mut t = prev.clone();
    loop {
        t += &half;
        if t > limit {
            return Err(Error::internal(format!(
                "no sign change found for K_{k}^({n}) in [0:{n}]"
            )));
        }
        let v = eval(&t);
        if v.is_zero() {
            return exact_root_bracket(n, k, &t, tol, &eval);
        }
        if v.is_negative() {
            return bisect_bracket(n, k, prev, t, tol, &eval);
        }
        prev = t.clone();
    }
}

fn bisect_bracket(
    n: usize,
    k: usize,
    mut lo: Rational,
    mut hi: Rational,
    tol: &Rational,
    eval: &dyn Fn(&Rational) -> Rational,
) -> Result<RootBracket> {
    // invariant: eval(lo) > 0, eval(hi) < 0
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / Rational::from(Int::from(2));
        let v = eval(&mid);
        if v.is_zero() {
            return exact_root_bracket(n, k, &mid, tol, eval);
        }
        if v.is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = &hi - &lo;
    Ok(RootBracket {
        n,
        k,
        lower: lo,
        upper: hi,
        width,
    })
}

/// The root sits exactly at `t`; shrink a symmetric bracket until the signs
/// at its endpoints straddle the (simple) root.
fn exact_root_bracket(
    n: usize,
    k: usize,
    t: &Rational,
    tol: &Rational,
    eval: &dyn Fn(&Rational) -> Rational,
) -> Result<RootBracket> {
    let two = Rational::from(Int::from(2));
    let mut delta = tol / &two;
    for _ in 0..128 {
        let lo = t - &delta;
        let hi = t + &delta;
        if eval(&lo).is_positive() && eval(&hi).is_negative() {
            let width = &hi - &lo;
            return Ok(RootBracket {
                n,
                k,
                lower: lo,
                upper: hi,
                width,
            });
        }
        delta /= &two;
    }
    Err(Error::internal(format!(
        "could not straddle exact root {t} of K_{k}^({n})"
    )))
}

/// Binary entropy H(p) in bits, with H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Strict upper bound on |K_k^{(n)}(x)|:
///   2^{(n/2) (1 + H(k/n) - H(x/n) + log2(n+1)/n)}.
pub fn magnitude_bound(n: usize, k: usize, x: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("magnitude_bound needs n >= 1"));
    }
    check_domain(n, k, x)?;
    let nf = n as f64;
    let exponent = (nf / 2.0)
        * (1.0 + binary_entropy(k as f64 / nf) - binary_entropy(x as f64 / nf)
            + ((nf + 1.0).log2() / nf));
    Ok(exponent.exp2())
}
