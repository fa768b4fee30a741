//! Binary codes as subsets of {0,1}^n and their exact distance statistics.
//!
//! Words are bit masks: coordinate i (1-based) lives in bit i-1, and the
//! text form prints coordinate 1 first, so mask 1 on n = 2 renders as "10".
//! The +-1 view used by the Fourier module identifies bit value 1 with +1.
//!
//! Pair counting switches between a direct O(M^2) popcount loop and an
//! O(n 2^n) XOR-convolution (Walsh-Hadamard squaring) when M^2 > n 2^n;
//! both produce exact integer pair counts.

use crate::arith::{binomial, pow2};
use crate::krawtchouk::KrawtchoukTable;
use crate::{Error, Int, Rational, Result};
use num::{One, Signed, Zero};

/// Cap for paths that materialize or sweep all 2^n masks.
const FULL_CUBE_LIMIT: usize = 24;
/// Cap for the convolution distance path, which holds two 2^n scratch vectors.
const CONV_LIMIT: usize = 22;
/// Rough operation ceiling for the quadratic fallbacks.
const OP_LIMIT: u128 = 1 << 33;

/// Reverses the low n bits, giving the numeric key of the text form.
fn string_key(w: u64, n: usize) -> u64 {
    w.reverse_bits() >> (64 - n)
}

/// A set of distinct words from {0,1}^n, kept sorted in bit-string order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    words: Vec<u64>,
}

impl BinaryCode {
    pub fn new(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::domain(format!("dimension n = {n} outside [1:63]")));
        }
        if words.is_empty() {
            return Err(Error::domain("a code must contain at least one word"));
        }
        let cap: u64 = 1 << n;
        if let Some(&w) = words.iter().find(|&&w| w >= cap) {
            return Err(Error::domain(format!("word {w:#b} does not fit in {n} bits")));
        }
        words.sort_unstable_by_key(|&w| string_key(w, n));
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::domain("duplicate codeword"));
        }
        Ok(BinaryCode { n, words })
    }

    /// All words of Hamming weight at most r.
    pub fn hamming_ball(n: usize, r: usize) -> Result<Self> {
        if n == 0 || n > 63 || r > n {
            return Err(Error::domain(format!("ball radius r = {r} outside [0:{n}]")));
        }
        let size: Int = (0..=r).map(|w| binomial(n as u64, w as u64)).sum();
        if size > Int::from(1u64 << FULL_CUBE_LIMIT) {
            return Err(Error::size_guard(
                format!("hamming_ball(n={n}, r={r})"),
                format!("{size} words"),
            ));
        }
        let mut words = Vec::new();
        for w in 0..=r {
            append_weight_class(n, w, &mut words);
        }
        BinaryCode::new(n, words)
    }

    /// The subcube fixing the first `fixed` coordinates to 1.
    pub fn subcube(n: usize, fixed: usize) -> Result<Self> {
        if n == 0 || n > 63 || fixed > n {
            return Err(Error::domain(format!(
                "subcube fixes {fixed} of {n} coordinates"
            )));
        }
        let free = n - fixed;
        if free > FULL_CUBE_LIMIT {
            return Err(Error::size_guard(
                format!("subcube(n={n}, fixed={fixed})"),
                format!("2^{free} words"),
            ));
        }
        let ones = if fixed == 0 { 0 } else { (1u64 << fixed) - 1 };
        let words = (0..1u64 << free).map(|s| ones | (s << fixed)).collect();
        BinaryCode::new(n, words)
    }

    /// Parses the text form: one 0/1 word per line, '#' lines and blank
    /// lines ignored, all words the same length.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut words = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let len = line.len();
            match n {
                None => {
                    if len == 0 || len > 63 {
                        return Err(Error::parse(format!(
                            "line {}: word length {len} outside [1:63]",
                            idx + 1
                        )));
                    }
                    n = Some(len);
                }
                Some(n0) if n0 != len => {
                    return Err(Error::parse(format!(
                        "line {}: word length {len} != {n0}",
                        idx + 1
                    )));
                }
                _ => {}
            }
            let mut w = 0u64;
            for (j, ch) in line.bytes().enumerate() {
                match ch {
                    b'1' => w |= 1 << j,
                    b'0' => {}
                    _ => {
                        return Err(Error::parse(format!(
                            "line {}: invalid character {:?}",
                            idx + 1,
                            ch as char
                        )))
                    }
                }
            }
            words.push(w);
        }
        let n = n.ok_or_else(|| Error::parse("no codewords in input"))?;
        BinaryCode::new(n, words)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (self.n + 1));
        for &w in &self.words {
            out.push_str(&self.word_string(w));
            out.push('\n');
        }
        out
    }

    pub fn word_string(&self, w: u64) -> String {
        (0..self.n)
            .map(|j| if w >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructors reject empty codes
    }

    /// Words in bit-string order.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Density a = M / 2^n.
    pub fn density(&self) -> Rational {
        Rational::from(Int::from(self.words.len() as u64)) * pow2(-(self.n as i64))
    }

    /// Set complement within {0,1}^n.
    pub fn complement(&self) -> Result<Self> {
        if self.n > FULL_CUBE_LIMIT {
            return Err(Error::size_guard(
                format!("complement at n = {}", self.n),
                format!("2^{} words", self.n),
            ));
        }
        if self.words.len() == 1 << self.n {
            return Err(Error::domain("complement of the full cube is empty"));
        }
        let mut present = vec![false; 1 << self.n];
        for &w in &self.words {
            present[w as usize] = true;
        }
        let words = (0..1u64 << self.n).filter(|&w| !present[w as usize]).collect();
        BinaryCode::new(self.n, words)
    }

    /// The product code A x {0,1}^k on n + k coordinates. Its average
    /// distance exceeds this code's by exactly k/2.
    pub fn extended(&self, k: usize) -> Result<Self> {
        let n2 = self.n + k;
        if n2 > 63 {
            return Err(Error::domain(format!(
                "extension to n = {n2} overflows the word width"
            )));
        }
        let added = self.words.len() as u128 * (1u128 << k);
        if added > 1 << FULL_CUBE_LIMIT {
            return Err(Error::size_guard(
                format!("extend by {k} coordinates"),
                format!("{added} words"),
            ));
        }
        let mut words = Vec::with_capacity(self.words.len() << k);
        for s in 0..1u64 << k {
            let high = s << self.n;
            words.extend(self.words.iter().map(|&w| w | high));
        }
        BinaryCode::new(n2, words)
    }

    pub fn contains(&self, w: u64) -> bool {
        self.words
            .binary_search_by_key(&string_key(w, self.n), |&v| string_key(v, self.n))
            .is_ok()
    }
}

fn append_weight_class(n: usize, w: usize, out: &mut Vec<u64>) {
    if w == 0 {
        out.push(0);
        return;
    }
    if w == n {
        out.push((1u64 << n) - 1);
        return;
    }
    // Gosper's hack over n-bit masks of weight w
    let mut v: u64 = (1 << w) - 1;
    let limit: u64 = 1 << n;
    while v < limit {
        out.push(v);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
}

/// Exact ordered-pair counts by distance: pairs[d] = #{(x,y) in A^2 : d(x,y) = d}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDistribution {
    pub n: usize,
    pub m: Int,
    pub pairs: Vec<Int>,
}

impl DistanceDistribution {
    /// P(i) = pairs[i] / M^2. P(0) >= 1/M with equality iff all pairwise
    /// distances are distinct words; sum_i P(i) = 1.
    pub fn p(&self) -> Vec<Rational> {
        let m2 = Rational::from(&self.m * &self.m);
        self.pairs
            .iter()
            .map(|c| Rational::from(c.clone()) / &m2)
            .collect()
    }

    /// Average distance D = sum_i i P(i).
    pub fn average(&self) -> Rational {
        let mut acc = Int::zero();
        for (i, c) in self.pairs.iter().enumerate() {
            acc += Int::from(i as u64) * c;
        }
        Rational::new(acc, &self.m * &self.m)
    }

    /// Distance enumerator  Gamma_z = sum_i P(i) z^i.
    pub fn enumerator(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut zp = Rational::one();
        for p in self.p() {
            acc += p * &zp;
            zp *= z;
        }
        acc
    }
}

/// Dual distance distribution Q(0..n); Q(0) = 1, Q >= 0, sum Q = 1/a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDistribution {
    pub n: usize,
    pub q: Vec<Rational>,
}

impl DualDistribution {
    /// Dual enumerator  Pi_z = sum_i Q(i) z^i.
    pub fn enumerator(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut zp = Rational::one();
        for q in &self.q {
            acc += q * &zp;
            zp *= z;
        }
        acc
    }

    pub fn sum(&self) -> Rational {
        self.q.iter().sum()
    }
}

/// Exact distance distribution of a code.
pub fn distance_distribution(code: &BinaryCode) -> Result<DistanceDistribution> {
    let n = code.n();
    let m = code.len() as u128;
    let quadratic_cost = m * m;
    let conv_cost = (n as u128) << n;
    let pairs = if quadratic_cost > conv_cost && n <= CONV_LIMIT {
        pair_counts_convolution(code)
    } else {
        if quadratic_cost > OP_LIMIT {
            return Err(Error::size_guard(
                format!("distance_distribution of {m} words at n = {n}"),
                format!("{quadratic_cost} word pairs"),
            ));
        }
        pair_counts_popcount(code)
    };
    Ok(DistanceDistribution {
        n,
        m: Int::from(code.len() as u64),
        pairs,
    })
}

fn pair_counts_popcount(code: &BinaryCode) -> Vec<Int> {
    let n = code.n();
    let words = code.words();
    let mut counts = vec![0u64; n + 1];
    counts[0] = words.len() as u64;
    for (i, &x) in words.iter().enumerate() {
        for &y in &words[i + 1..] {
            counts[(x ^ y).count_ones() as usize] += 2;
        }
    }
    counts.into_iter().map(Int::from).collect()
}

fn pair_counts_convolution(code: &BinaryCode) -> Vec<Int> {
    let n = code.n();
    let size = 1usize << n;
    let mut v = vec![0i64; size];
    for &w in code.words() {
        v[w as usize] = 1;
    }
    fwht(&mut v);
    let mut sq: Vec<i128> = v.into_iter().map(|x| (x as i128) * (x as i128)).collect();
    fwht(&mut sq);
    let mut counts = vec![0i128; n + 1];
    for (z, c) in sq.into_iter().enumerate() {
        debug_assert!(c >= 0 && c % (size as i128) == 0);
        counts[z.count_ones() as usize] += c >> n;
    }
    counts.into_iter().map(Int::from).collect()
}

/// In-place Walsh-Hadamard butterfly; length must be a power of two.
fn fwht<T>(v: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let len = v.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for chunk in v.chunks_mut(2 * h) {
            for i in 0..h {
                let (a, b) = (chunk[i], chunk[i + h]);
                chunk[i] = a + b;
                chunk[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

pub(crate) fn fwht_i64(v: &mut [i64]) {
    fwht(v)
}

/// Dual distribution straight from the definition: for each u, the squared
/// character sum (sum_{x in A} (-1)^{<u,x>})^2 bucketed by the weight of u.
/// Independent of the Krawtchouk transform route on purpose.
pub fn dual_distribution_direct(code: &BinaryCode) -> Result<DualDistribution> {
    let n = code.n();
    let m = code.len() as u128;
    let cost = m << n;
    if n > FULL_CUBE_LIMIT || cost > OP_LIMIT {
        return Err(Error::size_guard(
            format!("dual_distribution_direct at n = {n}, M = {m}"),
            format!("{cost} character evaluations"),
        ));
    }
    let mut sums = vec![Int::zero(); n + 1];
    for u in 0..1u64 << n {
        let mut s: i64 = 0;
        for &x in code.words() {
            s += 1 - 2 * ((u & x).count_ones() as i64 & 1);
        }
        sums[u.count_ones() as usize] += Int::from(s) * Int::from(s);
    }
    let m2 = Int::from(code.len() as u64).pow(2);
    Ok(DualDistribution {
        n,
        q: sums.into_iter().map(|s| Rational::new(s, m2.clone())).collect(),
    })
}

/// Q(k) = sum_i P(i) K_k(i).
pub fn krawtchouk_transform(
    dist: &DistanceDistribution,
    table: &KrawtchoukTable,
) -> Result<DualDistribution> {
    if table.n() != dist.n {
        return Err(Error::domain(format!(
            "table is for n = {}, distribution for n = {}",
            table.n(),
            dist.n
        )));
    }
    let p = dist.p();
    let q = (0..=dist.n)
        .map(|k| {
            let row = table.row(k);
            p.iter()
                .zip(row)
                .map(|(pi, kv)| pi * Rational::from(kv.clone()))
                .sum()
        })
        .collect();
    Ok(DualDistribution { n: dist.n, q })
}

/// P(i) = 2^{-n} sum_k Q(k) K_k(i); returns the P vector.
pub fn inverse_krawtchouk_transform(
    dual: &DualDistribution,
    table: &KrawtchoukTable,
) -> Result<Vec<Rational>> {
    if table.n() != dual.n {
        return Err(Error::domain(format!(
            "table is for n = {}, distribution for n = {}",
            table.n(),
            dual.n
        )));
    }
    let scale = pow2(-(dual.n as i64));
    Ok((0..=dual.n)
        .map(|k| {
            let row = table.row(k);
            let s: Rational = dual
                .q
                .iter()
                .zip(row)
                .map(|(qi, kv)| qi * Rational::from(kv.clone()))
                .sum();
            s * &scale
        })
        .collect())
}

/// Average distance recovered from the dual side:
///   D = (n+1)/2 - 1/(2a) + (1/2) sum_{i >= 2} Q(i).
pub fn avg_distance_from_dual(dual: &DualDistribution, a: &Rational) -> Result<Rational> {
    if !a.is_positive() {
        return Err(Error::domain("density must be positive"));
    }
    let inv_a = a.recip();
    if dual.sum() != inv_a {
        return Err(Error::domain(format!(
            "dual distribution sums to {}, expected 1/a = {}",
            dual.sum(),
            inv_a
        )));
    }
    let n = dual.n as i64;
    let half = Rational::new(Int::one(), Int::from(2));
    let tail: Rational = dual.q.iter().skip(2).sum();
    Ok(Rational::new(Int::from(n + 1), Int::from(2)) - &half * inv_a + &half * tail)
}
