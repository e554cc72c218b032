use std::cmp::Ordering;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::var::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Degrevlex,
    Lex,
    /// Variables at least as significant as the split variable form the first
    /// block; each block is compared by degrevlex.
    Block(Var),
}

/// A monomial order: a kind plus an optional explicit variable priority.
///
/// Without a priority the numeric order of variable keys is used. Listed
/// variables outrank unlisted ones; among listed variables the first entry is
/// the most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Option<Arc<FxHashMap<Var, u32>>>,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::degrevlex()
    }
}

impl MonomialOrder {
    pub fn degrevlex() -> Self {
        MonomialOrder { kind: OrderKind::Degrevlex, priority: None }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: None }
    }

    pub fn block(split: Var) -> Self {
        MonomialOrder { kind: OrderKind::Block(split), priority: None }
    }

    pub fn with_priority(mut self, vars: &[Var]) -> Self {
        let n = vars.len() as u32;
        let map = vars.iter().enumerate().map(|(i, &v)| (v, n - i as u32)).collect();
        self.priority = Some(Arc::new(map));
        self
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn is_default(&self) -> bool {
        self.kind == OrderKind::Degrevlex && self.priority.is_none()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match (&self.priority, self.kind) {
            (None, OrderKind::Degrevlex) => a.cmp_degrevlex(b),
            (None, OrderKind::Lex) => a.cmp_lex(b),
            (None, OrderKind::Block(split)) => {
                let (a1, a2) = a.split(|v| v >= split);
                let (b1, b2) = b.split(|v| v >= split);
                a1.cmp_degrevlex(&b1).then_with(|| a2.cmp_degrevlex(&b2))
            }
            (Some(rank), kind) => {
                let ka = self.keyed(a, rank);
                let kb = self.keyed(b, rank);
                cmp_keyed(kind, &ka, &kb, a.degree(), b.degree(), |v| self.key(v, rank))
            }
        }
    }

    fn key(&self, v: Var, rank: &FxHashMap<Var, u32>) -> (u32, Var) {
        match rank.get(&v) {
            Some(&r) => (r, v),
            None => (0, v),
        }
    }

    fn keyed(&self, m: &Monomial, rank: &FxHashMap<Var, u32>) -> Vec<((u32, Var), u32)> {
        let mut out: Vec<_> = m.pairs().iter().map(|&(v, e)| (self.key(v, rank), e)).collect();
        out.sort_by_key(|x| x.0);
        out
    }

    /// Index of the leading term of a list of monomials.
    pub fn max_index<'a, I: IntoIterator<Item = &'a Monomial>>(&self, it: I) -> Option<usize> {
        let mut best: Option<(usize, &Monomial)> = None;
        for (i, m) in it.into_iter().enumerate() {
            match best {
                Some((_, b)) if self.cmp(m, b) != Ordering::Greater => {}
                _ => best = Some((i, m)),
            }
        }
        best.map(|b| b.0)
    }
}

type Keyed = Vec<((u32, Var), u32)>;

fn cmp_keyed(kind: OrderKind, a: &Keyed, b: &Keyed, da: u32, db: u32, key: impl Fn(Var) -> (u32, Var)) -> Ordering {
    match kind {
        OrderKind::Degrevlex => da.cmp(&db).then_with(|| revlex(a, b)),
        OrderKind::Lex => lex(a, b),
        OrderKind::Block(split) => {
            let s = key(split);
            let (a1, a2): (Keyed, Keyed) = a.iter().partition(|p| p.0 >= s);
            let (b1, b2): (Keyed, Keyed) = b.iter().partition(|p| p.0 >= s);
            let deg = |k: &Keyed| k.iter().map(|p| p.1).sum::<u32>();
            deg(&a1)
                .cmp(&deg(&b1))
                .then_with(|| revlex(&a1, &b1))
                .then_with(|| deg(&a2).cmp(&deg(&b2)))
                .then_with(|| revlex(&a2, &b2))
        }
    }
}

fn revlex(a: &Keyed, b: &Keyed) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                if x.0 == y.0 {
                    if x.1 != y.1 {
                        return y.1.cmp(&x.1);
                    }
                    i += 1;
                    j += 1;
                } else {
                    return x.0.cmp(&y.0);
                }
            }
        }
    }
}

fn lex(a: &Keyed, b: &Keyed) -> Ordering {
    let mut ia = a.iter().rev();
    let mut ib = b.iter().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(x), Some(y)) => {
                if x.0 != y.0 {
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority_reorders_lex() {
        let (x, y) = (Var::x(), Var::y());
        let ord = MonomialOrder::lex().with_priority(&[y, x]);
        assert_eq!(ord.cmp(&Monomial::var(y), &Monomial::var_pow(x, 3)), Ordering::Greater);
        assert_eq!(MonomialOrder::lex().cmp(&Monomial::var(y), &Monomial::var_pow(x, 3)), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let (x, y, z) = (Var::x(), Var::y(), Var::z());
        let ord = MonomialOrder::block(y);
        // y is in the first block, z is not
        assert_eq!(ord.cmp(&Monomial::var(y), &Monomial::var_pow(z, 5)), Ordering::Greater);
        assert_eq!(ord.cmp(&Monomial::var(x), &Monomial::var(y)), Ordering::Greater);
    }
}
