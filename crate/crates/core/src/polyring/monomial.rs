use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::var::Var;

/// A power product, stored as `(variable, exponent)` pairs sorted by
/// ascending variable priority. Zero exponents are never stored.
///
/// The `Ord` impl is degrevlex under the default variable priority; other
/// orders go through [`super::order::MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(Var, u32); 4]>,
    deg: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let mut exps = SmallVec::new();
        exps.push((v, e));
        Monomial { exps, deg: e }
    }

    /// Build from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Monomial {
        let mut exps: SmallVec<[(Var, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        exps.sort_by_key(|p| p.0);
        let mut merged: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        for (v, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        let deg = merged.iter().map(|p| p.1).sum();
        Monomial { exps: merged, deg }
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// `(variable, exponent)` pairs by ascending priority.
    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|p| p.0)
    }

    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.exps.iter().filter(|p| pred(p.0)).map(|p| p.1).sum()
    }

    pub fn grade(&self) -> i64 {
        self.exps.iter().map(|&(v, e)| v.grade() as i64 * e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut exps = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial { exps: self.exps.iter().map(|&(v, x)| (v, x * e)).collect(), deg: self.deg * e }
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg || self.exps.len() > other.exps.len() {
            return false;
        }
        let b = &other.exps;
        let mut j = 0;
        for &(v, e) in self.exps.iter() {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
            j += 1;
        }
        true
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = SmallVec::with_capacity(self.exps.len());
        let b = &other.exps;
        let mut j = 0;
        for &(v, e) in self.exps.iter() {
            if j < b.len() && b[j].0 == v {
                if e > b[j].1 {
                    exps.push((v, e - b[j].1));
                }
                j += 1;
            } else {
                exps.push((v, e));
            }
        }
        Some(Monomial { exps, deg: self.deg - other.deg })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, u32::min)
    }

    fn merge_with(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let mut exps = SmallVec::new();
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, a[i - 1].1, 0)
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, 0, b[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1, b[j - 1].1)
            };
            let e = f(ea, eb);
            if e > 0 {
                exps.push((v, e));
            }
        }
        let deg = exps.iter().map(|p: &(Var, u32)| p.1).sum();
        Monomial { exps, deg }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Split into the part in the selected variables and the rest.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (mut a, mut b) = (SmallVec::new(), SmallVec::new());
        let (mut da, mut db) = (0, 0);
        for &(v, e) in self.exps.iter() {
            if pred(v) {
                a.push((v, e));
                da += e;
            } else {
                b.push((v, e));
                db += e;
            }
        }
        (Monomial { exps: a, deg: da }, Monomial { exps: b, deg: db })
    }

    /// Rename variables; the map must be injective on this monomial's support
    /// or merging happens.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let e = self.exponent(v);
        if e == 0 {
            return (self.clone(), 0);
        }
        let exps: SmallVec<_> = self.exps.iter().copied().filter(|p| p.0 != v).collect();
        (Monomial { exps, deg: self.deg - e }, e)
    }

    /// Degrevlex comparison under the default priority.
    pub fn cmp_degrevlex(&self, other: &Monomial) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        self.cmp_revlex_tail(other)
    }

    pub(crate) fn cmp_revlex_tail(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        return Ordering::Less;
                    } else {
                        return Ordering::Greater;
                    }
                }
            }
        }
    }

    /// Lexicographic comparison under the default priority.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (a.len(), b.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (_, 0) => return Ordering::Greater,
                (0, _) => return Ordering::Less,
                _ => {
                    let (va, ea) = a[i - 1];
                    let (vb, eb) = b[j - 1];
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i -= 1;
                        j -= 1;
                    } else if va > vb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_degrevlex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        // most significant variable first
        for (n, &(v, e)) in self.exps.iter().rev().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(Var, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().copied())
    }

    #[test]
    fn division_and_lcm() {
        let (x, y, z) = (Var::x(), Var::y(), Var::z());
        let a = m(&[(x, 2), (y, 1)]);
        let b = m(&[(y, 3), (z, 1)]);
        assert_eq!(a.lcm(&b), m(&[(x, 2), (y, 3), (z, 1)]));
        assert_eq!(a.gcd(&b), m(&[(y, 1)]));
        assert!(a.divides(&a.mul(&b)));
        assert_eq!(a.mul(&b).div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert!(!a.is_coprime(&b));
        assert!(m(&[(x, 1)]).is_coprime(&m(&[(z, 4)])));
    }

    #[test]
    fn degrevlex_basics() {
        let (x, y, z) = (Var::x(), Var::y(), Var::z());
        // x > y > z; degrevlex: x*z < y^2 (z is the smallest variable and appears in x*z)
        assert!(m(&[(x, 1), (z, 1)]) < m(&[(y, 2)]));
        assert!(m(&[(x, 2)]) > m(&[(x, 1), (y, 1)]));
        assert!(m(&[(x, 1)]) < m(&[(z, 2)]));
        // lex: x > y^5
        assert_eq!(m(&[(x, 1)]).cmp_lex(&m(&[(y, 5)])), Ordering::Greater);
    }
}
