//! Named, graded polynomial variables.
//!
//! A [`Var`] is a 64-bit key. The numeric order of keys *is* the default
//! variable priority (larger key = more significant), so monomial comparison
//! never needs a lookup table. Structured variables (coefficients, geometric
//! variables, markers) encode their whole identity in the key; only free-form
//! user variables go through the global name registry.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `e`, the class ε with ε² = 1 in ℤ_ε.
    Epsilon,
    /// `al_ijk`: coefficient of x^i y^j z^k t^l of a (4,3)-series.
    FtlCoeff {
        l: u8,
        i: u8,
        j: u8,
        k: u8,
    },
    /// `bl_ij`: coefficient of x^i y^j t^l of a (2,2)-series.
    TwoFglCoeff {
        l: u8,
        i: u8,
        j: u8,
    },
    /// `a_ij`: coefficient of x^i y^j of a one-valued formal group law.
    FglCoeff {
        i: u8,
        j: u8,
    },
    /// Formal (geometric) series variables `x, y, z, u, v, w, x6, x7, ...`.
    Geometric(u8),
    /// The marker `t` of a multivalued series.
    TMarker,
    /// `alpha`, used with the generator `2*alpha - 1` to invert 2.
    AuxInverter,
    /// `El`: the l-th elementary symmetric polynomial in some set of roots.
    Elementary(u8),
    /// `ri`: an auxiliary formal root.
    Root(u8),
    User(u32),
}

// Class ranks, ascending significance.
const C_ALPHA: u64 = 1;
const C_EPS: u64 = 2;
const C_USER: u64 = 3;
const C_FGL: u64 = 4;
const C_ELEM: u64 = 5;
const C_ROOT: u64 = 6;
const C_TWO: u64 = 7;
const C_FTL: u64 = 8;
const C_GEOM: u64 = 9;
const C_T: u64 = 10;

const GEOM_LETTERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

struct UserVar {
    name: String,
    grade: i32,
}

struct Registry {
    users: Vec<UserVar>,
    by_name: HashMap<String, u32>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg = Registry { users: Vec::new(), by_name: HashMap::new() };
        // Pre-registered so their relative priority does not depend on the
        // order in which a program happens to mention them.
        for (name, grade) in [("a", 1), ("g", 0), ("tau", -1), ("ginv", 2)] {
            let id = reg.users.len() as u32;
            reg.users.push(UserVar { name: name.to_string(), grade });
            reg.by_name.insert(name.to_string(), id);
        }
        RwLock::new(reg)
    })
}

fn coeff_payload(grade: i32, l: u8, idx: [u8; 3]) -> u64 {
    (((grade + 128) as u64) << 32)
        | ((l as u64) << 24)
        | ((idx[0] as u64) << 16)
        | ((idx[1] as u64) << 8)
        | idx[2] as u64
}

impl Var {
    fn from_parts(class: u64, payload: u64) -> Var {
        Var((class << 56) | payload)
    }

    fn class(self) -> u64 {
        self.0 >> 56
    }

    fn payload(self) -> u64 {
        self.0 & ((1 << 56) - 1)
    }

    pub fn epsilon() -> Var {
        Var::from_parts(C_EPS, 0)
    }

    pub fn alpha() -> Var {
        Var::from_parts(C_ALPHA, 0)
    }

    pub fn t() -> Var {
        Var::from_parts(C_T, 0)
    }

    /// Geometric variable number `idx` (0 = x, 1 = y, 2 = z, 3 = u, 4 = v, 5 = w).
    pub fn geometric(idx: u8) -> Var {
        Var::from_parts(C_GEOM, 255 - idx as u64)
    }

    pub fn x() -> Var {
        Var::geometric(0)
    }
    pub fn y() -> Var {
        Var::geometric(1)
    }
    pub fn z() -> Var {
        Var::geometric(2)
    }
    pub fn u() -> Var {
        Var::geometric(3)
    }
    pub fn v() -> Var {
        Var::geometric(4)
    }

    pub fn elementary(l: u8) -> Var {
        Var::from_parts(C_ELEM, 255 - l as u64)
    }

    pub fn root(i: u8) -> Var {
        Var::from_parts(C_ROOT, 255 - i as u64)
    }

    /// The FTL coefficient `a^l_{ijk}`; the indices are sorted into orbit
    /// order `i >= j >= k` by the caller's choice, not here.
    pub fn ftl_coeff(l: u8, i: u8, j: u8, k: u8) -> Var {
        let grade = i as i32 + j as i32 + k as i32 - l as i32;
        Var::from_parts(C_FTL, coeff_payload(grade, l, [i, j, k]))
    }

    pub fn two_fgl_coeff(l: u8, i: u8, j: u8) -> Var {
        let grade = i as i32 + j as i32 - l as i32;
        Var::from_parts(C_TWO, coeff_payload(grade, l, [i, j, 0]))
    }

    pub fn fgl_coeff(i: u8, j: u8) -> Var {
        let grade = i as i32 + j as i32 - 1;
        Var::from_parts(C_FGL, coeff_payload(grade, 1, [i, j, 0]))
    }

    /// A free-form variable, registered on first use with grade 0.
    pub fn user(name: &str) -> Var {
        Var::user_with_grade(name, 0)
    }

    /// A free-form variable; `grade` is only used the first time the name is seen.
    pub fn user_with_grade(name: &str, grade: i32) -> Var {
        {
            let reg = registry().read().expect("registry lock");
            if let Some(&id) = reg.by_name.get(name) {
                return Var::from_parts(C_USER, id as u64);
            }
        }
        let mut reg = registry().write().expect("registry lock");
        if let Some(&id) = reg.by_name.get(name) {
            return Var::from_parts(C_USER, id as u64);
        }
        let id = reg.users.len() as u32;
        reg.users.push(UserVar { name: name.to_string(), grade });
        reg.by_name.insert(name.to_string(), id);
        Var::from_parts(C_USER, id as u64)
    }

    pub fn kind(self) -> VarKind {
        let p = self.payload();
        let idx = |shift: u32| ((p >> shift) & 0xff) as u8;
        match self.class() {
            C_ALPHA => VarKind::AuxInverter,
            C_EPS => VarKind::Epsilon,
            C_USER => VarKind::User(p as u32),
            C_FGL => VarKind::FglCoeff { i: idx(16), j: idx(8) },
            C_ELEM => VarKind::Elementary((255 - p) as u8),
            C_ROOT => VarKind::Root((255 - p) as u8),
            C_TWO => VarKind::TwoFglCoeff { l: idx(24), i: idx(16), j: idx(8) },
            C_FTL => VarKind::FtlCoeff { l: idx(24), i: idx(16), j: idx(8), k: idx(0) },
            C_GEOM => VarKind::Geometric((255 - p) as u8),
            C_T => VarKind::TMarker,
            _ => unreachable!("corrupt variable key"),
        }
    }

    /// The grading used for homogeneity of relations.
    pub fn grade(self) -> i32 {
        match self.kind() {
            VarKind::Epsilon | VarKind::AuxInverter => 0,
            VarKind::FtlCoeff { l, i, j, k } => i as i32 + j as i32 + k as i32 - l as i32,
            VarKind::TwoFglCoeff { l, i, j } => i as i32 + j as i32 - l as i32,
            VarKind::FglCoeff { i, j } => i as i32 + j as i32 - 1,
            VarKind::Geometric(_) | VarKind::Root(_) => 1,
            VarKind::TMarker => -1,
            VarKind::Elementary(l) => l as i32,
            VarKind::User(id) => registry().read().expect("registry lock").users[id as usize].grade,
        }
    }

    /// Coefficient variables of a law (the unknowns of a relation ideal).
    pub fn is_law_coefficient(self) -> bool {
        matches!(self.kind(), VarKind::FtlCoeff { .. } | VarKind::TwoFglCoeff { .. } | VarKind::FglCoeff { .. })
    }

    pub fn is_geometric(self) -> bool {
        matches!(self.kind(), VarKind::Geometric(_))
    }

    pub fn name(self) -> String {
        fn join(idx: &[u8]) -> String {
            if idx.iter().all(|&d| d < 10) {
                idx.iter().map(|d| d.to_string()).collect()
            } else {
                idx.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("_")
            }
        }
        match self.kind() {
            VarKind::Epsilon => "e".to_string(),
            VarKind::AuxInverter => "alpha".to_string(),
            VarKind::TMarker => "t".to_string(),
            VarKind::FtlCoeff { l, i, j, k } => format!("a{l}_{}", join(&[i, j, k])),
            VarKind::TwoFglCoeff { l, i, j } => format!("b{l}_{}", join(&[i, j])),
            VarKind::FglCoeff { i, j } => format!("a_{}", join(&[i, j])),
            VarKind::Geometric(idx) => match GEOM_LETTERS.get(idx as usize) {
                Some(s) => s.to_string(),
                None => format!("x{idx}"),
            },
            VarKind::Elementary(l) => format!("E{l}"),
            VarKind::Root(i) => format!("r{i}"),
            VarKind::User(id) => registry().read().expect("registry lock").users[id as usize].name.clone(),
        }
    }

    /// Resolve a variable name, registering unknown identifiers as user variables.
    pub fn parse(name: &str) -> Result<Var> {
        if name.is_empty() || !name.chars().next().unwrap().is_ascii_alphabetic() {
            return Err(Error::Parse(format!("bad variable name `{name}`")));
        }
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad variable name `{name}`")));
        }
        match name {
            "e" => return Ok(Var::epsilon()),
            "alpha" => return Ok(Var::alpha()),
            "t" => return Ok(Var::t()),
            _ => {}
        }
        if let Some(pos) = GEOM_LETTERS.iter().position(|s| *s == name) {
            return Ok(Var::geometric(pos as u8));
        }
        if let Some(v) = parse_structured(name).or_else(|| parse_indexed(name)) {
            return Ok(v);
        }
        Ok(Var::user(name))
    }
}

fn split_indices(s: &str, count: usize) -> Option<Vec<u8>> {
    if s.contains('_') {
        let parts: Vec<_> = s.split('_').collect();
        if parts.len() != count {
            return None;
        }
        parts.iter().map(|p| p.parse::<u8>().ok()).collect()
    } else if s.len() == count && s.chars().all(|c| c.is_ascii_digit()) {
        Some(s.bytes().map(|b| b - b'0').collect())
    } else {
        None
    }
}

fn parse_structured(name: &str) -> Option<Var> {
    let (head, rest) = name.split_once('_')?;
    if let Some(l) = head.strip_prefix('a') {
        if l.is_empty() {
            let idx = split_indices(rest, 2)?;
            return Some(Var::fgl_coeff(idx[0], idx[1]));
        }
        let l: u8 = l.parse().ok()?;
        let idx = split_indices(rest, 3)?;
        return Some(Var::ftl_coeff(l, idx[0], idx[1], idx[2]));
    }
    if let Some(l) = head.strip_prefix('b') {
        let l: u8 = l.parse().ok()?;
        let idx = split_indices(rest, 2)?;
        return Some(Var::two_fgl_coeff(l, idx[0], idx[1]));
    }
    None
}

/// Names with a structural prefix (`E3`, `r2`, `x7`) are parsed here so that
/// they are not mistaken for user variables.
fn parse_indexed(name: &str) -> Option<Var> {
    let (prefix, digits) = name.split_at(1);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: u8 = digits.parse().ok()?;
    match prefix {
        "E" => Some(Var::elementary(n)),
        "r" => Some(Var::root(n)),
        "x" if n >= 6 => Some(Var::geometric(n)),
        _ => None,
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for v in [
            Var::epsilon(),
            Var::alpha(),
            Var::t(),
            Var::ftl_coeff(3, 1, 1, 1),
            Var::ftl_coeff(4, 12, 0, 0),
            Var::two_fgl_coeff(2, 1, 1),
            Var::fgl_coeff(1, 2),
            Var::geometric(4),
            Var::geometric(9),
            Var::elementary(3),
            Var::root(2),
            Var::user("tau"),
        ] {
            let name = v.name();
            let back = Var::parse(&name).unwrap();
            assert_eq!(back, v, "{name}");
        }
    }

    #[test]
    fn grades_follow_index_sums() {
        assert_eq!(Var::ftl_coeff(3, 1, 1, 1).grade(), 0);
        assert_eq!(Var::ftl_coeff(4, 0, 0, 0).grade(), -4);
        assert_eq!(Var::two_fgl_coeff(2, 1, 1).grade(), 0);
        assert_eq!(Var::epsilon().grade(), 0);
        assert_eq!(Var::user("ginv").grade(), 2);
    }

    #[test]
    fn default_priority() {
        // coefficients by descending grade, then ε, then α
        assert!(Var::ftl_coeff(1, 1, 1, 1) > Var::ftl_coeff(3, 1, 1, 1));
        assert!(Var::ftl_coeff(3, 1, 1, 1) > Var::epsilon());
        assert!(Var::epsilon() > Var::alpha());
        assert!(Var::x() > Var::y());
    }
}
