//! Tableau combinatorics and the cyclic sieving verifier: integer
//! partitions, standard Young tableaux with the major index, the exact
//! q-hook-length polynomial, counts of tableaux with maj divisible by N, the
//! sieving polynomial, and its comparison against fixed-point counts of the
//! dynamics on all-refraction even cycles.

use serde::Serialize;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::graph::{BilliardsGraph, Material};

/// Polynomial in q with exact integer coefficients, ascending degree, no
/// trailing zero stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// q^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { coeffs }
    }

    /// `[k]_q = 1 + q + ... + q^{k-1}`.
    pub fn q_int(k: usize) -> Self {
        Self {
            coeffs: vec![1; k],
        }
    }

    /// `[k]_q! = [k]_q [k-1]_q ... [1]_q`.
    pub fn q_factorial(k: usize) -> Self {
        (1..=k).fold(Self::one(), |acc, j| acc.mul(&Self::q_int(j)))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = vec![0i64; self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(k).copied().unwrap_or(0)
                + other.coeffs.get(k).copied().unwrap_or(0);
        }
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in other.coeffs.iter().enumerate() {
                coeffs[j + k] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Exact division; `None` if the remainder is nonzero or a coefficient
    /// fails to divide. The q-integers used here are monic, so division over
    /// the integers stays exact whenever the quotient exists.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.coeffs.is_empty() {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let lead = *divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = self.coeffs.len() - divisor.coeffs.len() + 1;
        let mut quot = vec![0i64; qlen];
        for j in (0..qlen).rev() {
            let top = rem[j + divisor.coeffs.len() - 1];
            if top % lead != 0 {
                return None;
            }
            let c = top / lead;
            quot[j] = c;
            if c != 0 {
                for (k, &d) in divisor.coeffs.iter().enumerate() {
                    rem[j + k] -= c * d;
                }
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::new(quot))
    }

    pub fn eval_i64(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0i64, |acc, &c| acc * x + c)
    }

    /// Evaluates at `e^{2*pi*i*j/m}`, returning (re, im).
    pub fn eval_at_unit_root(&self, j: u64, m: u64) -> (f64, f64) {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (k, &c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (m as f64);
            re += c as f64 * angle.cos();
            im += c as f64 * angle.sin();
        }
        (re, im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }
}

/// Integer partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::BadInput("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadInput(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Vec<usize> {
        let cols = self.parts.first().copied().unwrap_or(0);
        (1..=cols)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect()
    }

    /// b(lambda) = sum over rows of (row - 1) * part.
    pub fn b_statistic(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i * p)
            .sum()
    }

    /// Hook lengths of every box, row by row.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size());
        for (r, &p) in self.parts.iter().enumerate() {
            for (c, &col_len) in conj.iter().enumerate().take(p) {
                hooks.push((p - c) + (col_len - r) - 1);
            }
        }
        hooks
    }
}

/// All partitions of `n` in lexicographically decreasing order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// Standard Young tableau: rows increase left to right, columns top to
/// bottom, entries 1..=N each once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
}

/// All standard Young tableaux of the given shape, generated by placing
/// 1..=N one at a time into every feasible row end.
pub fn standard_tableaux(lam: &Partition) -> Vec<Tableau> {
    let n = lam.size();
    let shape = lam.parts();
    let mut filled = vec![0usize; shape.len()];
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&p| Vec::with_capacity(p)).collect();
    let mut out = Vec::new();
    fn place(
        value: usize,
        n: usize,
        shape: &[usize],
        filled: &mut [usize],
        rows: &mut Vec<Vec<usize>>,
        out: &mut Vec<Tableau>,
    ) {
        if value > n {
            out.push(Tableau { rows: rows.clone() });
            return;
        }
        for r in 0..shape.len() {
            let col_ok = r == 0 || filled[r - 1] > filled[r];
            if filled[r] < shape[r] && col_ok {
                rows[r].push(value);
                filled[r] += 1;
                place(value + 1, n, shape, filled, rows, out);
                filled[r] -= 1;
                rows[r].pop();
            }
        }
    }
    place(1, n, shape, &mut filled, &mut rows, &mut out);
    out
}

/// Major index: the sum of all entries `i` such that `i + 1` sits in a
/// strictly lower row than `i`.
pub fn maj(t: &Tableau) -> u64 {
    let n: usize = t.rows.iter().map(Vec::len).sum();
    let mut row_of = vec![0usize; n + 1];
    for (r, row) in t.rows.iter().enumerate() {
        for &v in row {
            row_of[v] = r;
        }
    }
    (1..n).filter(|&i| row_of[i + 1] > row_of[i]).map(|i| i as u64).sum()
}

/// Generating function of maj over the standard tableaux of shape `lam`.
pub fn f_poly_by_maj(lam: &Partition) -> IntPolynomial {
    standard_tableaux(lam)
        .iter()
        .fold(IntPolynomial::zero(), |acc, t| {
            acc.add(&IntPolynomial::monomial(maj(t) as usize))
        })
}

/// The same polynomial from the q-hook-length product:
/// `q^{b(lam)} [N]_q! / prod [hook]_q`, by exact division.
pub fn f_poly_by_hooks(lam: &Partition) -> Result<IntPolynomial> {
    let numerator = IntPolynomial::q_factorial(lam.size());
    let denominator = lam
        .hook_lengths()
        .into_iter()
        .fold(IntPolynomial::one(), |acc, h| {
            acc.mul(&IntPolynomial::q_int(h))
        });
    let quotient = numerator.div_exact(&denominator).ok_or_else(|| {
        Error::InternalMismatch(format!(
            "hook product does not divide [N]_q! for shape {:?}",
            lam.parts()
        ))
    })?;
    Ok(IntPolynomial::monomial(lam.b_statistic()).mul(&quotient))
}

/// f^lambda(q), computed both as the maj generating function and by the
/// q-hook-length product; the two routes must agree coefficientwise.
pub fn f_poly(lam: &Partition) -> Result<IntPolynomial> {
    let by_maj = f_poly_by_maj(lam);
    let by_hooks = f_poly_by_hooks(lam)?;
    if by_maj != by_hooks {
        return Err(Error::InternalMismatch(format!(
            "maj generating function {:?} differs from hook form {:?} for shape {:?}",
            by_maj.coeffs(),
            by_hooks.coeffs(),
            lam.parts()
        )));
    }
    Ok(by_maj)
}

const ROOT_OF_UNITY_TOLERANCE: f64 = 1e-6;

/// Number of standard tableaux of shape `lam` whose maj is divisible by `m`,
/// cross-checked against the root-of-unity average
/// `(1/m) * sum_j f^lambda(e^{2*pi*i*j/m})`.
pub fn f_div_count(lam: &Partition, m: u64) -> Result<u64> {
    debug_assert!(m >= 1);
    let direct = standard_tableaux(lam)
        .iter()
        .filter(|t| maj(t).is_multiple_of(m))
        .count() as u64;
    let poly = f_poly(lam)?;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for j in 0..m {
        let (r, i) = poly.eval_at_unit_root(j, m);
        re += r;
        im += i;
    }
    let average = re / m as f64;
    let rounded = average.round();
    if (average - rounded).abs() > ROOT_OF_UNITY_TOLERANCE
        || (im / m as f64).abs() > ROOT_OF_UNITY_TOLERANCE
        || rounded as i64 != direct as i64
    {
        return Err(Error::RootOfUnityMismatch { average, direct });
    }
    Ok(direct)
}

/// Capacity bound for brute force over the symmetric group S_M.
pub const MAX_GAMMA_M: usize = 8;

/// Counts permutations `xi` of `1..=m` such that `c^k xi c^j = xi` for some
/// `j` in `0..m`, where `c` is the long cycle `(1 2 ... m)`; brute force.
pub fn gamma_count(m: usize, k: u64) -> Result<u64> {
    if m < 1 {
        return Err(Error::BadInput("gamma_count needs m >= 1".into()));
    }
    if m > MAX_GAMMA_M {
        return Err(Error::CapacityExceeded {
            what: "m",
            got: m,
            max: MAX_GAMMA_M,
        });
    }
    // c^t as a table: x -> x + t mod m.
    let cycle_pow = |t: u64| -> Vec<usize> {
        (1..=m)
            .map(|x| ((x as u64 - 1 + t) % m as u64) as usize + 1)
            .collect()
    };
    let ck = cycle_pow(k);
    let cjs: Vec<Vec<usize>> = (0..m as u64).map(cycle_pow).collect();
    let mut count = 0u64;
    for rank in 0..dynamics::factorial(m) {
        let xi = dynamics::lehmer_unrank(m, rank);
        let fixed = cjs.iter().any(|cj| {
            (1..=m).all(|x| ck[xi[cj[x - 1] - 1] - 1] == xi[x - 1])
        });
        if fixed {
            count += 1;
        }
    }
    Ok(count)
}

/// The sieving polynomial for the all-refraction cycle of even size `n`:
/// `2 n^2 (n-1) * sum over lambda of (n-1) of f^lambda_{n-1|maj} f^lambda(q)`.
pub fn csp_polynomial(n: usize) -> Result<IntPolynomial> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::EvenNRequired { n });
    }
    let m = (n - 1) as u64;
    let mut sum = IntPolynomial::zero();
    for lam in partitions_of(n - 1) {
        let weight = f_div_count(&lam, m)? as i64;
        if weight != 0 {
            sum = sum.add(&f_poly(&lam)?.scale(weight));
        }
    }
    Ok(sum.scale(2 * (n as i64) * (n as i64) * (n as i64 - 1)))
}

/// One row of the sieving report: fixed points of `Theta^{k n (n-1)}` versus
/// the polynomial evaluated at `e^{2 pi i k/(n-1)}`.
#[derive(Debug, Clone, Serialize)]
pub struct CspEntry {
    pub fixed: u64,
    #[serde(rename = "F_at_root")]
    pub f_at_root: i64,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CspReport {
    pub n: usize,
    pub k: Vec<CspEntry>,
    pub order: u64,
}

impl CspReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Capacity bound for the sieving verifier (full enumeration of the state
/// space of the n-cycle).
pub const MAX_CSP_N: usize = 7;

/// Verifies the cyclic sieving phenomenon on the all-refraction `n`-cycle:
/// every orbit size is divisible by `n(n-1)`, the order of `Theta^{n(n-1)}`
/// is 1 for n = 4 and n-1 otherwise, the fixed-point count of
/// `Theta^{k n(n-1)}` equals the polynomial at the k-th root of unity, and
/// the counts agree with `2n * n * gamma_count(n-1, k)`.
pub fn verify_csp(n: usize) -> Result<CspReport> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::EvenNRequired { n });
    }
    if n > MAX_CSP_N {
        return Err(Error::CapacityExceeded {
            what: "n",
            got: n,
            max: MAX_CSP_N,
        });
    }
    let g = BilliardsGraph::cycle(n, &vec![Material::Refract; n])?;
    let report = dynamics::orbit_decomposition(&g)?;
    let q = (n * (n - 1)) as u64;
    for class in &report.orbits {
        if class.size % q != 0 {
            return Err(Error::VerificationMismatch(format!(
                "orbit size {} is not divisible by n(n-1) = {q}",
                class.size
            )));
        }
    }
    let order = report.order_of_power(q);
    let expected_order = if n == 4 { 1 } else { (n - 1) as u64 };
    if order != expected_order {
        return Err(Error::VerificationMismatch(format!(
            "order of Theta^{q} is {order}, expected {expected_order}"
        )));
    }
    let poly = csp_polynomial(n)?;
    let m = (n - 1) as u64;
    let mut entries = Vec::with_capacity(n - 1);
    for k in 0..m {
        let fixed = report.fixed_by_power(k * q);
        let (re, im) = poly.eval_at_unit_root(k, m);
        let rounded = re.round();
        if (re - rounded).abs() > ROOT_OF_UNITY_TOLERANCE || im.abs() > ROOT_OF_UNITY_TOLERANCE {
            return Err(Error::VerificationMismatch(format!(
                "k = {k}: F at the root of unity is not near an integer: ({re}, {im})"
            )));
        }
        let f_at_root = rounded as i64;
        let matches = f_at_root == fixed as i64;
        if !matches {
            return Err(Error::VerificationMismatch(format!(
                "k = {k}: fixed count {fixed} differs from F value {f_at_root}"
            )));
        }
        let via_gamma = 2 * (n as u64) * (n as u64) * gamma_count(n - 1, k)?;
        if via_gamma != fixed {
            return Err(Error::VerificationMismatch(format!(
                "k = {k}: fixed count {fixed} differs from 2n*n*gamma = {via_gamma}"
            )));
        }
        entries.push(CspEntry {
            fixed,
            f_at_root,
            matches,
        });
    }
    Ok(CspReport {
        n,
        k: entries,
        order,
    })
}
