//! Monomial symmetric polynomials and rewriting in elementary symmetric
//! polynomials.
//!
//! Rewriting works in the monomial symmetric basis: a symmetric polynomial
//! is a combination of `m_λ` with coefficients in the remaining variables,
//! and each `m_λ` is expanded in `E1, ..., Er` once and cached. The
//! expansion of `m_λ` is found by the classical leading-term elimination,
//! carried out on partitions rather than on monomials.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::polyring::{CoefficientRing, Monomial, Polynomial, Var};

/// A weakly decreasing exponent tuple naming an orbit of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitIndex(Vec<u32>);

impl OrbitIndex {
    /// Sorts the exponents into weakly decreasing order.
    pub fn new(mut exps: Vec<u32>) -> Self {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        OrbitIndex(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Number of distinct permutations of the exponent tuple.
    pub fn orbit_size(&self) -> u64 {
        let n = self.0.len() as u64;
        let mut size: u64 = (1..=n).product();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            size /= (1..=(j - i) as u64).product::<u64>();
            i = j;
        }
        size
    }

    /// All distinct permutations, in lexicographically decreasing order.
    pub fn permutations(&self) -> Vec<Vec<u32>> {
        let mut cur = self.0.clone();
        let mut out = vec![cur.clone()];
        while prev_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }
}

/// Step to the previous permutation in lexicographic order; false when
/// `v` is already the smallest (weakly increasing).
fn prev_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] <= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] >= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The sum of the distinct monomials in the orbit of `orbit` under
/// permutations of `vars`.
pub fn monomial_symmetric(ring: CoefficientRing, orbit: &OrbitIndex, vars: &[Var]) -> Result<Polynomial> {
    if orbit.arity() != vars.len() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: orbit.arity() });
    }
    Ok(Polynomial::from_terms(
        ring,
        orbit.permutations().into_iter().map(|perm| (Monomial::from_pairs(vars.iter().copied().zip(perm)), ring.one())),
    ))
}

/// Invariance under the adjacent transpositions of `vars`.
pub fn check_symmetric(p: &Polynomial, vars: &[Var]) -> bool {
    for w in vars.windows(2) {
        let (a, b) = (w[0], w[1]);
        let swapped = p.rename(|v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        });
        if &swapped != p {
            return false;
        }
    }
    true
}

/// Exponent vector of `m` in `vars`.
fn exponents_in(m: &Monomial, vars: &[Var]) -> Vec<u32> {
    vars.iter().map(|&v| m.exponent(v)).collect()
}

/// Decompose a polynomial symmetric in `vars` as `Σ C_λ m_λ(vars)`, with
/// `C_λ` polynomials in the other variables.
pub fn monomial_basis(p: &Polynomial, vars: &[Var]) -> Result<BTreeMap<OrbitIndex, Polynomial>> {
    let in_vars = |v: Var| vars.contains(&v);
    let grouped = p.collect(in_vars);
    let mut out = BTreeMap::new();
    let mut seen: FxHashMap<Vec<u32>, &Polynomial> = FxHashMap::default();
    for (m, c) in &grouped {
        seen.insert(exponents_in(m, vars), c);
    }
    for (exps, c) in &seen {
        let orbit = OrbitIndex::new(exps.clone());
        if orbit.exponents() == exps.as_slice() {
            for perm in orbit.permutations() {
                if seen.get(&perm) != Some(c) {
                    return Err(Error::NotSymmetric);
                }
            }
            out.insert(orbit, (*c).clone());
        } else if !seen.contains_key(orbit.exponents()) {
            return Err(Error::NotSymmetric);
        }
    }
    Ok(out)
}

/// Rewrite a polynomial symmetric in `vars` in the elementary symmetric
/// polynomials `E1, ..., Er` (r = number of vars). Other variables are left
/// untouched.
pub fn to_elementary(p: &Polynomial, vars: &[Var]) -> Result<Polynomial> {
    let basis = monomial_basis(p, vars)?;
    let ring = p.ring();
    let mut out = Polynomial::zero(ring);
    for (orbit, c) in basis {
        let e = m_to_e(orbit.exponents(), ring);
        out = &out + &(&c * &e);
    }
    Ok(out)
}

/// `m_λ` written in `E1, ..., Er` for `r = λ.len()`, over `ring`.
pub fn m_to_e(lambda: &[u32], ring: CoefficientRing) -> Polynomial {
    let expansion = m_to_e_cached(lambda);
    Polynomial::from_terms(ring, expansion.iter().map(|(m, c)| (m.clone(), ring.from_int(c.clone()))))
}

type Expansion = Arc<Vec<(Monomial, Int)>>;

fn cache() -> &'static Mutex<FxHashMap<Vec<u32>, Expansion>> {
    static CACHE: OnceLock<Mutex<FxHashMap<Vec<u32>, Expansion>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(FxHashMap::default()))
}

fn m_to_e_cached(lambda: &[u32]) -> Expansion {
    let mut key = lambda.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(hit) = cache().lock().expect("symfun cache").get(&key) {
        return hit.clone();
    }
    let result = Arc::new(eliminate(&key));
    cache().lock().expect("symfun cache").insert(key, result.clone());
    result
}

/// A symmetric polynomial with integer coefficients in the monomial basis.
type MBasis = BTreeMap<Vec<u32>, Int>;

/// Leading-term elimination on partitions: repeatedly take the
/// lexicographically largest λ, subtract `c · e^(λ1−λ2) e^(λ2−λ3) ⋯`.
fn eliminate(lambda: &[u32]) -> Vec<(Monomial, Int)> {
    let r = lambda.len();
    let mut f: MBasis = BTreeMap::new();
    f.insert(lambda.to_vec(), Int::ONE);
    let mut out: Vec<(Monomial, Int)> = Vec::new();
    let mut products: FxHashMap<Vec<u32>, MBasis> = FxHashMap::default();
    while let Some((lead, c)) = f.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        // exponent of E_k is λ_k − λ_{k+1}
        let powers: Vec<u32> = (0..r).map(|k| lead[k] - lead.get(k + 1).copied().unwrap_or(0)).collect();
        let prod = products.entry(powers.clone()).or_insert_with(|| e_product(&powers, r));
        for (mu, d) in prod.iter() {
            let entry = f.entry(mu.clone()).or_insert(Int::ZERO);
            *entry -= &(&c * d);
        }
        f.retain(|_, v| !v.is_zero());
        let mon = Monomial::from_pairs(powers.iter().enumerate().map(|(k, &e)| (Var::elementary(k as u8 + 1), e)));
        out.push((mon, c));
    }
    out
}

/// `∏ E_k^{powers[k-1]}` in the monomial basis of r variables.
fn e_product(powers: &[u32], r: usize) -> MBasis {
    let mut acc: MBasis = BTreeMap::new();
    acc.insert(vec![0; r], Int::ONE);
    for (k, &e) in powers.iter().enumerate() {
        for _ in 0..e {
            acc = mul_e(&acc, k + 1, r);
        }
    }
    acc
}

/// `e_k · f` in the monomial basis: the coefficient of `m_λ` counts pairs
/// (α, S) with α a permutation of some μ in the support, |S| = k and
/// α + 1_S = λ.
fn mul_e(f: &MBasis, k: usize, r: usize) -> MBasis {
    let subsets: Vec<Vec<usize>> = subsets_of_size(r, k);
    let mut out: MBasis = BTreeMap::new();
    for (mu, c) in f {
        for alpha in OrbitIndex(mu.clone()).permutations() {
            for s in &subsets {
                let mut lam = alpha.clone();
                for &i in s {
                    lam[i] += 1;
                }
                if lam.windows(2).all(|w| w[0] >= w[1]) {
                    *out.entry(lam).or_insert(Int::ZERO) += c;
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `E_l ↦ e_l(vars)`: the inverse of [`to_elementary`].
pub fn from_elementary(p: &Polynomial, vars: &[Var]) -> Polynomial {
    let ring = p.ring();
    let r = vars.len();
    let mut map = FxHashMap::default();
    for l in 1..=r {
        let mut exps = vec![0u32; r];
        exps[..l].fill(1);
        let e = monomial_symmetric(ring, &OrbitIndex(exps), vars).expect("arity matches");
        map.insert(Var::elementary(l as u8), e);
    }
    p.substitute(&map)
}

/// Sum of `p` over all permutations of `vars` (not divided by the group order).
pub fn symmetrize(p: &Polynomial, vars: &[Var]) -> Polynomial {
    let idx: Vec<u32> = (0..vars.len() as u32).collect();
    let mut out = Polynomial::zero(p.ring());
    let mut perm = idx.clone();
    perm.reverse();
    loop {
        let image: Vec<Var> = perm.iter().map(|&i| vars[i as usize]).collect();
        let tmp: Vec<Var> = (0..vars.len()).map(|i| Var::root(200 + i as u8)).collect();
        // two-step rename avoids collisions between source and target
        let q = p
            .rename(|v| vars.iter().position(|&w| w == v).map_or(v, |i| tmp[i]))
            .rename(|v| tmp.iter().position(|&w| w == v).map_or(v, |i| image[i]));
        out = &out + &q;
        if !prev_permutation(&mut perm) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(z(), s).unwrap()
    }

    fn xyz() -> Vec<Var> {
        vec![Var::x(), Var::y(), Var::z()]
    }

    #[test]
    fn orbit_sums() {
        let m = monomial_symmetric(z(), &OrbitIndex::new(vec![2, 1, 0]), &xyz()).unwrap();
        assert_eq!(m, p("x^2*y+x^2*z+y^2*x+y^2*z+z^2*x+z^2*y"));
        assert_eq!(monomial_symmetric(z(), &OrbitIndex::new(vec![1, 0, 0]), &xyz()).unwrap(), p("x+y+z"));
        assert_eq!(monomial_symmetric(z(), &OrbitIndex::new(vec![1, 1, 1]), &xyz()).unwrap(), p("x*y*z"));
        assert!(monomial_symmetric(z(), &OrbitIndex::new(vec![1, 1]), &xyz()).is_err());
        assert_eq!(OrbitIndex::new(vec![2, 1, 0]).orbit_size(), 6);
        assert_eq!(OrbitIndex::new(vec![2, 2, 0, 0]).orbit_size(), 6);
    }

    #[test]
    fn symmetry_check() {
        assert!(check_symmetric(&p("x+y+z"), &xyz()));
        assert!(!check_symmetric(&p("x^2*y"), &xyz()));
    }

    #[test]
    fn small_rewrites() {
        let xy = [Var::x(), Var::y()];
        assert_eq!(to_elementary(&p("x^2+y^2"), &xy).unwrap(), p("E1^2-2*E2"));
        assert_eq!(to_elementary(&p("x^2*y+x*y^2"), &xy).unwrap(), p("E1*E2"));
        assert_eq!(to_elementary(&p("(x+y)^2+5*x*y"), &xy).unwrap(), p("E1^2+5*E2"));
        assert!(matches!(to_elementary(&p("x"), &xy), Err(Error::NotSymmetric)));
    }

    #[test]
    fn coefficients_in_other_variables_survive() {
        let xy = [Var::x(), Var::y()];
        let f = p("a*(x+y) + t*x*y + e");
        assert_eq!(to_elementary(&f, &xy).unwrap(), p("a*E1 + t*E2 + e"));
    }

    #[test]
    fn roundtrip_three_and_four_variables() {
        let vars = [Var::x(), Var::y(), Var::z(), Var::u()];
        let f = symmetrize(&p("3*x^4*y^2*z - x*y + 7*x^3"), &vars);
        let e = to_elementary(&f, &vars).unwrap();
        assert!(e.variables().iter().all(|v| !vars.contains(v)));
        assert_eq!(from_elementary(&e, &vars), f);
    }
}
