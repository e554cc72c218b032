//! One-dimensional commutative formal group laws and the functors into
//! 2-valued formal groups.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::mvseries::{MSeries, SeriesMorphism};
use crate::polyring::{CoefficientRing, Polynomial, Truncation, Var};
use crate::symfun;

/// A formal group law `F(x, y)` truncated at total degree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fgl {
    f: Polynomial,
    trunc: u32,
}

fn xy() -> [Var; 2] {
    [Var::x(), Var::y()]
}

fn deg_trunc(vars: &[Var], d: u32) -> Truncation {
    Truncation::total_degree(vars, d as i64)
}

fn subst(p: &Polynomial, pairs: &[(Var, Polynomial)], vars: &[Var], d: u32) -> Polynomial {
    let map: FxHashMap<Var, Polynomial> = pairs.iter().cloned().collect();
    p.substitute_truncated(&map, &deg_trunc(vars, d))
}

impl Fgl {
    /// Validate `F ≡ x + y`, symmetry and associativity up to `trunc`.
    pub fn new(f: Polynomial, trunc: u32) -> Result<Self> {
        let law = Fgl::new_unchecked(f, trunc);
        law.check()?;
        Ok(law)
    }

    /// Wrap without checking the axioms (used for laws with free
    /// coefficients).
    pub fn new_unchecked(f: Polynomial, trunc: u32) -> Self {
        let f = f.truncate(&deg_trunc(&xy(), trunc));
        Fgl { f, trunc }
    }

    fn check(&self) -> Result<()> {
        let r = self.ring();
        let linear = self.f.filter_terms(|m| m.degree_in(|v| v.is_geometric()) <= 1);
        let expected = &Polynomial::var(r, Var::x()) + &Polynomial::var(r, Var::y());
        if linear != expected {
            return Err(Error::NotFgl(format!("F is not x + y modulo degree 2: {linear}")));
        }
        if !symfun::check_symmetric(&self.f, &xy()) {
            return Err(Error::NotFgl("F is not symmetric".into()));
        }
        let res = self.associativity_residual();
        if !res.is_zero() {
            return Err(Error::NotFgl(format!("associativity fails: {res}")));
        }
        Ok(())
    }

    pub fn additive(ring: CoefficientRing, trunc: u32) -> Self {
        Fgl::new_unchecked(Polynomial::parse(ring, "x + y").expect("literal"), trunc)
    }

    /// `x + y − a·x·y`.
    pub fn multiplicative(a: &Polynomial, trunc: u32) -> Self {
        let r = a.ring();
        let xy = Polynomial::parse(r, "x*y").expect("literal");
        let f = &Polynomial::parse(r, "x + y").expect("literal") - &(a * &xy);
        Fgl::new_unchecked(f, trunc)
    }

    /// `x + y + Σ a_ij x^i y^j` with free symmetric coefficients `a_ij = a_ji`
    /// for `2 ≤ i + j ≤ trunc`. Not associative without relations.
    pub fn universal(ring: CoefficientRing, trunc: u32) -> Self {
        let mut f = Polynomial::parse(ring, "x + y").expect("literal");
        for n in 2..=trunc {
            for i in 1..n {
                let j = n - i;
                let c = Var::fgl_coeff(i.max(j) as u8, i.min(j) as u8);
                let m = crate::polyring::Monomial::from_pairs([(c, 1), (Var::x(), i), (Var::y(), j)]);
                f = &f + &Polynomial::monomial(ring, m, ring.one());
            }
        }
        Fgl::new_unchecked(f, trunc)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.f.ring()
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    /// `F(a, b)` for series `a, b` in `vars`, truncated at `d`.
    pub fn apply(&self, a: &Polynomial, b: &Polynomial, vars: &[Var], d: u32) -> Polynomial {
        // rename first so that a and b may themselves mention x and y
        let (p, q) = (Var::geometric(60), Var::geometric(61));
        let f = self.f.rename(|v| {
            if v == Var::x() {
                p
            } else if v == Var::y() {
                q
            } else {
                v
            }
        });
        subst(&f, &[(p, a.clone()), (q, b.clone())], vars, d)
    }

    /// `F(F(x,y),z) − F(x,F(y,z))`.
    pub fn associativity_residual(&self) -> Polynomial {
        let r = self.ring();
        let vars = [Var::x(), Var::y(), Var::z()];
        let (x, y, z) = (Polynomial::var(r, vars[0]), Polynomial::var(r, vars[1]), Polynomial::var(r, vars[2]));
        let d = self.trunc;
        let left = self.apply(&self.apply(&x, &y, &vars, d), &z, &vars, d);
        let right = self.apply(&x, &self.apply(&y, &z, &vars, d), &vars, d);
        &left - &right
    }

    /// The formal inverse `x̄(x)` with `F(x, x̄) = 0`, solved order by order.
    pub fn formal_inverse(&self) -> Polynomial {
        let r = self.ring();
        let x = Polynomial::var(r, Var::x());
        let mut inv = -&x;
        for _ in 1..self.trunc {
            let err = self.apply(&x, &inv, &[Var::x()], self.trunc);
            if err.is_zero() {
                break;
            }
            inv = &inv - &err;
        }
        inv
    }

    /// The successive approximations `G_0 = 0, G_1 = −u s, …` of the series
    /// `G` with `x + x̄ = G(x x̄)`, written in the variable `x`. The last entry
    /// is exact up to order `⌊D/2⌋`.
    pub fn g_series_steps(&self) -> Result<Vec<Polynomial>> {
        let r = self.ring();
        let k = self.trunc / 2;
        let e1 = Var::elementary(1);
        let e2 = Var::elementary(2);
        let fe = symfun::to_elementary(&self.f, &xy())?;
        let u = fe.coefficient_of(e1, 0).coefficient_of(e2, 1);
        // Σ a_ij E1^i E2^j without the E1 and u·E2 terms
        let rest = fe.filter_terms(|m| {
            let (i, j) = (m.exponent(e1), m.exponent(e2));
            !((i == 1 && j == 0) || (i == 0 && j == 1))
        });
        let s = Polynomial::var(r, Var::x());
        let tr = deg_trunc(&[Var::x()], k as i64 as u32);
        let mut steps = vec![Polynomial::zero(r)];
        let lin = -&(&u * &s);
        for n in 1..=k.max(1) {
            let prev = steps.last().expect("nonempty").clone();
            let map: FxHashMap<Var, Polynomial> = [(e1, prev), (e2, s.clone())].into_iter().collect();
            let step_tr = deg_trunc(&[Var::x()], n);
            let g = (&lin - &rest.substitute_truncated(&map, &step_tr)).truncate(&step_tr).truncate(&tr);
            steps.push(g);
        }
        Ok(steps)
    }

    pub fn g_series(&self) -> Result<Polynomial> {
        Ok(self.g_series_steps()?.pop().expect("nonempty"))
    }

    /// `Θ(F(x,y)) − G(Θ(x), Θ(y))`.
    pub fn morphism_residual(theta: &SeriesMorphism, f: &Fgl, g: &Fgl) -> Polynomial {
        let r = f.ring();
        let d = f.trunc.min(g.trunc);
        let vars = xy();
        let (x, y) = (Polynomial::var(r, Var::x()), Polynomial::var(r, Var::y()));
        let th = |p: &Polynomial| {
            let mut t = theta.clone();
            t.trunc = d;
            t.apply(p, &vars)
        };
        let lhs = th(&f.apply(&x, &y, &vars, d));
        let rhs = g.apply(&th(&x), &th(&y), &vars, d);
        &lhs - &rhs
    }
}

/// Solve `T(−x x̄, −y ȳ, …) = S` for `T`, degree by degree, where `x̄` is the
/// formal inverse of `f`. `S` must be known up to degree `2·d_out` in `vars`;
/// `T` is returned in the same variable names, truncated at `d_out`.
pub fn phi_preimage(s: &Polynomial, f: &Fgl, vars: &[Var], d_out: u32) -> Result<Polynomial> {
    let r = s.ring();
    let d_in = 2 * d_out;
    let inv = f.formal_inverse();
    let x = Polynomial::var(r, Var::x());
    let w = -&(&x * &inv);
    let w = w.truncate(&deg_trunc(&[Var::x()], d_in));
    // w(v) for each variable, and its powers
    let wv: Vec<Polynomial> = vars.iter().map(|&v| w.rename(|u| if u == Var::x() { v } else { u })).collect();
    let tr_in = deg_trunc(vars, d_in);
    let mut powers: Vec<Vec<Polynomial>> = wv.iter().map(|p| vec![Polynomial::one(r), p.clone()]).collect();
    let mut rem = s.truncate(&tr_in);
    let mut out: Vec<(crate::polyring::Monomial, crate::polyring::Coeff)> = Vec::new();
    let is_var = |v: Var| vars.contains(&v);
    for k in 0..=d_in {
        let part = rem.filter_terms(|m| m.degree_in(is_var) == k);
        for t in part.terms() {
            let (geo, coeff_part) = t.mon.split(is_var);
            let mut exps = Vec::with_capacity(vars.len());
            for &v in vars {
                let e = geo.exponent(v);
                if e % 2 == 1 {
                    return Err(Error::NotInImage(k));
                }
                exps.push(e / 2);
            }
            let mut val = Polynomial::monomial(r, coeff_part.clone(), t.coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_truncated(&wv[i], &tr_in);
                    powers[i].push(next);
                }
                val = val.mul_truncated(&powers[i][e as usize], &tr_in);
            }
            rem = &rem - &val;
            let mon = coeff_part.mul(&crate::polyring::Monomial::from_pairs(vars.iter().copied().zip(exps)));
            out.push((mon, t.coeff.clone()));
        }
    }
    Ok(Polynomial::from_terms(r, out).truncate(&deg_trunc(vars, d_out)))
}

/// `σ(F) = (1 + F t)²`: a split 2-valued formal group of type II.
pub fn functor_sigma(f: &Fgl) -> MSeries {
    let r = f.ring();
    let two_f = f.f.scale_i64(2);
    let sq = f.f.mul_truncated(&f.f, &deg_trunc(&xy(), f.trunc));
    MSeries::new(r, xy().to_vec(), vec![two_f, sq], f.trunc).expect("valid series")
}

/// `N(F)`: the type-I 2-valued formal group with roots `−F(x,y)F(x̄,ȳ)` and
/// `−F(x̄,y)F(x,ȳ)` in `X = −x x̄, Y = −y ȳ`. An input law truncated at `D`
/// yields an output truncated at `⌊D/2⌋`.
pub fn functor_n(f: &Fgl) -> Result<MSeries> {
    let r = f.ring();
    let d_in = f.trunc;
    let d_out = d_in / 2;
    let vars = xy();
    let inv_x = f.formal_inverse();
    let inv_y = inv_x.rename(|v| if v == Var::x() { Var::y() } else { v });
    let (x, y) = (Polynomial::var(r, Var::x()), Polynomial::var(r, Var::y()));
    let tr = deg_trunc(&vars, d_in);
    let f_xy = f.apply(&x, &y, &vars, d_in);
    let f_bb = f.apply(&inv_x, &inv_y, &vars, d_in);
    let f_bx = f.apply(&inv_x, &y, &vars, d_in);
    let f_xb = f.apply(&x, &inv_y, &vars, d_in);
    let rho1 = -&f_xy.mul_truncated(&f_bb, &tr);
    let rho2 = -&f_bx.mul_truncated(&f_xb, &tr);
    let c1 = &rho1 + &rho2;
    let c2 = rho1.mul_truncated(&rho2, &tr);
    let n1 = phi_preimage(&c1, f, &vars, d_out).map_err(|e| Error::InvalidArgument(format!("N: {e}")))?;
    let n2 = phi_preimage(&c2, f, &vars, d_out).map_err(|e| Error::InvalidArgument(format!("N: {e}")))?;
    MSeries::new(r, vars.to_vec(), vec![n1, n2], d_out)
}

/// `φ(Θ)` for a morphism `Θ: F → G`: the composable series with
/// `φ(Θ)(−x x̄^F) = −Θ(x)·Θ(x̄^F)`. Output truncated at `⌊D/2⌋`.
pub fn functor_phi_morphism(theta: &SeriesMorphism, f: &Fgl, g: &Fgl) -> Result<SeriesMorphism> {
    let res = Fgl::morphism_residual(theta, f, g);
    if !res.is_zero() {
        return Err(Error::NotAMorphism(format!("residual {res}")));
    }
    let r = f.ring();
    let d_in = f.trunc.min(g.trunc);
    let d_out = d_in / 2;
    let vars = [Var::x()];
    let mut th = theta.clone();
    th.trunc = d_in;
    let inv = f.formal_inverse();
    let a = th.apply(&Polynomial::var(r, Var::x()), &vars);
    let b = th.apply(&inv, &vars);
    let s = -&a.mul_truncated(&b, &deg_trunc(&vars, d_in));
    let t = phi_preimage(&s, f, &vars, d_out)?;
    SeriesMorphism::new(t, Var::x(), d_out)
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

    #[test]
    fn inverses() {
        assert_eq!(Fgl::additive(z(), 6).formal_inverse(), p("-x"));
        let m = Fgl::multiplicative(&p("a"), 6);
        assert_eq!(m.formal_inverse(), p("-x - a*x^2 - a^2*x^3 - a^3*x^4 - a^4*x^5 - a^5*x^6"));
    }

    #[test]
    fn validation() {
        assert!(Fgl::new(p("x+y-a*x*y"), 6).is_ok());
        assert!(Fgl::new(p("x+y+x^2*y"), 6).is_err());
        assert!(Fgl::new(p("x+2*y"), 6).is_err());
    }

    #[test]
    fn g_series_examples() {
        assert!(Fgl::additive(z(), 8).g_series().unwrap().is_zero());
        assert_eq!(Fgl::multiplicative(&p("a"), 8).g_series().unwrap(), p("a*x"));
        let steps = Fgl::multiplicative(&p("a"), 8).g_series_steps().unwrap();
        assert_eq!(steps[1], p("a*x"));
    }

    #[test]
    fn preimages() {
        let add = Fgl::additive(z(), 8);
        let xy = [Var::x(), Var::y()];
        assert_eq!(phi_preimage(&p("x^2*y^2"), &add, &xy, 4).unwrap(), p("x*y"));
        assert!(matches!(phi_preimage(&p("x"), &add, &xy, 4), Err(Error::NotInImage(1))));
    }

    #[test]
    fn n_of_additive() {
        let n = functor_n(&Fgl::additive(z(), 8)).unwrap();
        assert_eq!(n.component(1), p("2*x + 2*y"));
        assert_eq!(n.component(2), p("(x-y)^2"));
        assert_eq!(n.truncation(), 4);
    }

    #[test]
    fn sigma_of_additive() {
        let s = functor_sigma(&Fgl::additive(z(), 4));
        assert_eq!(s.to_t_polynomial(), p("1 + 2*(x+y)*t + (x+y)^2*t^2"));
    }

    #[test]
    fn phi_of_simple_morphisms() {
        let add = Fgl::additive(z(), 8);
        let neg = SeriesMorphism::new(p("-x"), Var::x(), 8).unwrap();
        assert_eq!(functor_phi_morphism(&neg, &add, &add).unwrap().theta, p("x"));
        let m = Fgl::multiplicative(&p("a"), 8);
        let inv = SeriesMorphism::new(m.formal_inverse(), Var::x(), 8).unwrap();
        assert_eq!(functor_phi_morphism(&inv, &m, &m).unwrap().theta, p("x"));
        let id = SeriesMorphism::identity(z(), 8);
        assert_eq!(functor_phi_morphism(&id, &m, &m).unwrap().theta, p("x"));
        let bad = SeriesMorphism::new(p("x+x^2"), Var::x(), 8).unwrap();
        assert!(matches!(functor_phi_morphism(&bad, &add, &add), Err(Error::NotAMorphism(_))));
    }
}
