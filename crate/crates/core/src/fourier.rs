//! Fourier analysis of Boolean functions f : {-1,1}^n -> {-1,1}.
//!
//! Truth tables are indexed so that bit i of the table index carries
//! coordinate x_{i+1}, with bit value 0 meaning -1. Under that convention a
//! code's indicator (+1 exactly on the code) has the same masks as the code
//! itself. All spectra are exact dyadic rationals out of an integer
//! Walsh-Hadamard butterfly.

use crate::arith::pow2;
use crate::code::{fwht_i64, BinaryCode, DualDistribution};
use crate::{Error, Int, Rational, Result};
use num::{One, Signed, Zero};

/// Truth-table paths materialize 2^n entries.
const TABLE_LIMIT: usize = 24;
/// The pairwise channel expectation is quadratic in the support size.
const CHANNEL_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>, // true = +1
}

impl BooleanFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 || n > TABLE_LIMIT {
            return Err(Error::domain(format!("dimension n = {n} outside [1:{TABLE_LIMIT}]")));
        }
        if table.len() != 1 << n {
            return Err(Error::domain(format!(
                "truth table has {} entries, expected 2^{n}",
                table.len()
            )));
        }
        Ok(BooleanFunction { n, table })
    }

    /// Indicator-style function: +1 exactly on the code's words.
    pub fn from_code(code: &BinaryCode) -> Result<Self> {
        let n = code.n();
        if n > TABLE_LIMIT {
            return Err(Error::size_guard(
                format!("truth table at n = {n}"),
                format!("2^{n} entries"),
            ));
        }
        let mut table = vec![false; 1 << n];
        for &w in code.words() {
            table[w as usize] = true;
        }
        BooleanFunction::new(n, table)
    }

    /// Parses a single line of 2^n characters over {0,1}; 1 means +1.
    pub fn parse(text: &str) -> Result<Self> {
        let line = text.trim();
        let len = line.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::parse(format!(
                "truth table length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        let mut table = Vec::with_capacity(len);
        for ch in line.bytes() {
            match ch {
                b'0' => table.push(false),
                b'1' => table.push(true),
                _ => {
                    return Err(Error::parse(format!(
                        "invalid truth table character {:?}",
                        ch as char
                    )))
                }
            }
        }
        BooleanFunction::new(n, table)
    }

    pub fn to_text(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, x: u64) -> i64 {
        if self.table[x as usize] {
            1
        } else {
            -1
        }
    }

    /// Density a = |f^{-1}(+1)| / 2^n.
    pub fn density(&self) -> Rational {
        let ones = self.table.iter().filter(|&&b| b).count() as u64;
        Rational::from(Int::from(ones)) * pow2(-(self.n as i64))
    }

    /// Masks where the function is +1, in ascending mask order.
    pub fn support(&self) -> Vec<u64> {
        (0..1u64 << self.n).filter(|&m| self.table[m as usize]).collect()
    }
}

/// Exact Fourier coefficients, indexed by character mask S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierSpectrum {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

impl FourierSpectrum {
    pub fn coeff(&self, s: u64) -> &Rational {
        &self.coeffs[s as usize]
    }
}

/// Walsh-Hadamard transform: hat f(S) = 2^{-n} sum_x f(x) chi_S(x).
///
/// The integer butterfly computes sum_x f(x) (-1)^{|S & x|}; with bit value
/// 0 encoding -1 the character picks up a factor (-1)^{|S|}.
pub fn wht(f: &BooleanFunction) -> FourierSpectrum {
    let n = f.n();
    let mut v: Vec<i64> = f.table.iter().map(|&b| if b { 1 } else { -1 }).collect();
    fwht_i64(&mut v);
    let scale = pow2(-(n as i64));
    let coeffs = v
        .into_iter()
        .enumerate()
        .map(|(s, w)| {
            let signed = if (s.count_ones() & 1) == 1 { -w } else { w };
            Rational::from(Int::from(signed)) * &scale
        })
        .collect();
    FourierSpectrum { n, coeffs }
}

/// Fourier weight by degree: W_m = sum_{|S|=m} hat f(S)^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub n: usize,
    pub a: Rational,
    pub w: Vec<Rational>,
}

impl WeightProfile {
    pub fn total(&self) -> Rational {
        self.w.iter().sum()
    }
}

/// Collapses a spectrum to weights by degree, verifying Parseval and that
/// the empty coefficient matches the claimed density (hat f(0) = 2a - 1).
pub fn weight_profile(spec: &FourierSpectrum, a: &Rational) -> Result<WeightProfile> {
    let expected0 = Rational::from(Int::from(2)) * a - Rational::one();
    if spec.coeffs[0] != expected0 {
        return Err(Error::domain(format!(
            "spectrum has hat f(0) = {}, but 2a - 1 = {}",
            spec.coeffs[0], expected0
        )));
    }
    let mut w = vec![Rational::zero(); spec.n + 1];
    let mut total = Rational::zero();
    for (s, c) in spec.coeffs.iter().enumerate() {
        let sq = c * c;
        total += &sq;
        w[s.count_ones() as usize] += sq;
    }
    if total != Rational::one() {
        return Err(Error::internal(format!(
            "Parseval violated: sum of squared coefficients is {total}"
        )));
    }
    Ok(WeightProfile {
        n: spec.n,
        a: a.clone(),
        w,
    })
}

/// Q(k) = W_k / (4 a^2) for k >= 1, Q(0) = 1. Exactly the dual distance
/// distribution of the support code.
pub fn dual_from_weights(profile: &WeightProfile) -> Result<DualDistribution> {
    let a = &profile.a;
    if !a.is_positive() {
        return Err(Error::domain("dual_from_weights needs density a > 0"));
    }
    let four_a2 = Rational::from(Int::from(4)) * a * a;
    let mut q = vec![Rational::one()];
    q.extend(profile.w.iter().skip(1).map(|wk| wk / &four_a2));
    Ok(DualDistribution { n: profile.n, q })
}

/// W_1 = 4 a^2 (n - 2 D): degree-1 weight from the average distance of the
/// support.
pub fn w1_from_distance(n: usize, a: &Rational, avg_distance: &Rational) -> Rational {
    let four_a2 = Rational::from(Int::from(4)) * a * a;
    four_a2 * (Rational::from(Int::from(n as u64)) - Rational::from(Int::from(2)) * avg_distance)
}

/// Noise stability  Stab_rho = sum_m rho^m W_m.
pub fn noise_stability(profile: &WeightProfile, rho: &Rational) -> Result<Rational> {
    check_rho(rho)?;
    let mut acc = Rational::zero();
    let mut rp = Rational::one();
    for wm in &profile.w {
        acc += wm * &rp;
        rp *= rho;
    }
    Ok(acc)
}

/// Probability that two rho-correlated inputs both land in f^{-1}(+1):
///   q = a^2 + (1/4) sum_{k >= 1} rho^k W_k.
pub fn q_agree(profile: &WeightProfile, rho: &Rational) -> Result<Rational> {
    check_rho(rho)?;
    let mut acc = Rational::zero();
    let mut rp = Rational::one();
    for wk in profile.w.iter().skip(1) {
        rp *= rho;
        acc += wk * &rp;
    }
    let quarter = Rational::new(Int::one(), Int::from(4));
    Ok(&profile.a * &profile.a + quarter * acc)
}

/// The same probability by direct expectation over the product channel:
/// each coordinate pair agrees with probability (1+rho)/2. Quadratic in the
/// support size, so guarded to small n; kept as an independent check of
/// `q_agree`.
pub fn q_agree_direct(f: &BooleanFunction, rho: &Rational) -> Result<Rational> {
    check_rho(rho)?;
    let n = f.n();
    if n > CHANNEL_LIMIT {
        return Err(Error::size_guard(
            format!("pairwise channel expectation at n = {n}"),
            format!("4^{n} input pairs"),
        ));
    }
    let one = Rational::one();
    let plus = &one + rho; // 4 P(x_i = y_i)
    let minus = &one - rho; // 4 P(x_i != y_i)
    // (1+rho)^{n-d} (1-rho)^d for every distance d
    let mut by_distance = Vec::with_capacity(n + 1);
    for d in 0..=n {
        by_distance.push(num::pow::pow(plus.clone(), n - d) * num::pow::pow(minus.clone(), d));
    }
    let support = f.support();
    let mut acc = Rational::zero();
    for &x in &support {
        for &y in &support {
            acc += &by_distance[(x ^ y).count_ones() as usize];
        }
    }
    Ok(acc * pow2(-2 * n as i64))
}

fn check_rho(rho: &Rational) -> Result<()> {
    if rho.is_negative() || rho > &Rational::one() {
        return Err(Error::domain(format!("correlation rho = {rho} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::code::{distance_distribution, dual_distribution_direct};
    use proptest::prelude::*;

    fn and2() -> BooleanFunction {
        // +1 only at x = (1,1)
        BooleanFunction::parse("0001").unwrap()
    }

    #[test]
    fn parse_and_render() {
        let f = and2();
        assert_eq!(f.n(), 2);
        assert_eq!(f.to_text(), "0001");
        assert_eq!(f.density(), rat(1, 4));
        assert!(BooleanFunction::parse("001").is_err());
        assert!(BooleanFunction::parse("0x01").is_err());
    }

    #[test]
    fn and_spectrum() {
        // AND = (-1 + x1 + x2 + x1 x2) / 2
        let s = wht(&and2());
        assert_eq!(s.coeff(0), &rat(-1, 2));
        assert_eq!(s.coeff(1), &rat(1, 2));
        assert_eq!(s.coeff(2), &rat(1, 2));
        assert_eq!(s.coeff(3), &rat(1, 2));
    }

    #[test]
    fn dictator_spectrum() {
        let f = BooleanFunction::parse("0101").unwrap(); // f(x) = x1
        let s = wht(&f);
        assert_eq!(s.coeff(1), &rat_int(1));
        for m in [0u64, 2, 3] {
            assert_eq!(s.coeff(m), &rat_int(0));
        }
        let w = weight_profile(&s, &rat(1, 2)).unwrap();
        assert_eq!(w.w, vec![rat_int(0), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn and_weights_and_q() {
        let f = and2();
        let w = weight_profile(&wht(&f), &rat(1, 4)).unwrap();
        assert_eq!(w.w, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);

        let q = q_agree(&w, &rat(1, 2)).unwrap();
        assert_eq!(q, rat(9, 64));
        assert_eq!(q_agree_direct(&f, &rat(1, 2)).unwrap(), rat(9, 64));

        // Stab_rho = 1 - 4a + 4q
        let stab = noise_stability(&w, &rat(1, 2)).unwrap();
        assert_eq!(stab, rat(9, 16));
        assert_eq!(stab, rat_int(1) - rat_int(4) * rat(1, 4) + rat_int(4) * q);
    }

    #[test]
    fn profile_rejects_wrong_density() {
        let s = wht(&and2());
        assert!(weight_profile(&s, &rat(1, 2)).is_err());
    }

    #[test]
    fn rho_domain() {
        let w = weight_profile(&wht(&and2()), &rat(1, 4)).unwrap();
        assert!(q_agree(&w, &rat(3, 2)).is_err());
        assert!(q_agree(&w, &rat(-1, 2)).is_err());
        assert!(noise_stability(&w, &rat_int(1)).is_ok());
    }

    #[test]
    fn dual_from_weights_is_singleton_dual() {
        // support of AND is the single word 11
        let w = weight_profile(&wht(&and2()), &rat(1, 4)).unwrap();
        let q = dual_from_weights(&w).unwrap();
        assert_eq!(q.q, vec![rat_int(1), rat_int(2), rat_int(1)]);
    }

    fn arb_fn() -> impl Strategy<Value = BooleanFunction> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), 1 << n)
                .prop_map(move |t| BooleanFunction::new(n, t).unwrap())
        })
    }

    proptest! {
        #[test]
        fn spectrum_invariants(f in arb_fn()) {
            let a = f.density();
            let s = wht(&f);
            let w = weight_profile(&s, &a).unwrap();
            // Parseval, W0
            prop_assert_eq!(w.total(), Rational::one());
            let expect0 = (rat_int(2) * &a - Rational::one()).pow(2);
            prop_assert_eq!(&w.w[0], &expect0);
            // Stab_1 = 1, Stab_0 = W0
            prop_assert_eq!(noise_stability(&w, &Rational::one()).unwrap(), Rational::one());
            prop_assert_eq!(noise_stability(&w, &Rational::zero()).unwrap(), w.w[0].clone());
        }

        #[test]
        fn bridge_to_code_side(f in arb_fn()) {
            let support = f.support();
            prop_assume!(!support.is_empty());
            let code = BinaryCode::new(f.n(), support).unwrap();
            let a = f.density();
            let w = weight_profile(&wht(&f), &a).unwrap();

            // W1 = 4 a^2 (n - 2 D)
            let d = distance_distribution(&code).unwrap().average();
            prop_assert_eq!(w1_from_distance(f.n(), &a, &d), w.w[1].clone());

            // Q(k) = W_k / 4a^2 matches the character-sum route
            let via_weights = dual_from_weights(&w).unwrap();
            let direct = dual_distribution_direct(&code).unwrap();
            prop_assert_eq!(via_weights.q, direct.q);
        }

        #[test]
        fn q_agree_routes_match(f in arb_fn(), num in 0i64..=4) {
            let a = f.density();
            let w = weight_profile(&wht(&f), &a).unwrap();
            let rho = rat(num, 4);
            prop_assert_eq!(
                q_agree(&w, &rho).unwrap(),
                q_agree_direct(&f, &rho).unwrap()
            );
        }
    }
}
