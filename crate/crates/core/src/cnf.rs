//! Structure of base-Λ Cantor normal forms: components, head and tail
//! exponents, parts, the sequence orders, step-downs, `<_lx,k`,
//! irreducibility and Λ-towers.
//!
//! Sequence arguments given as slices use logical indices starting at 2,
//! like [`CoeffSeq`]; a `k` argument is such a logical index.

use std::cmp::Ordering;

use crate::error::{OtError, Result};
use crate::term::{CoeffSeq, ExponentTerm, KSet, LamTerm, OrdinalTerm};
use crate::Notation;

/// Default cap on the height of [`lam_tower`].
pub const TOWER_CAP: usize = 64;

/// `K(ξ)`.
pub fn components(x: &ExponentTerm) -> KSet {
    let mut out = KSet::new();
    collect_components(x, &mut out);
    out
}

/// `K(ξ⃗) = ⋃ K(ξ_i)`.
pub fn components_seq(xs: &[ExponentTerm]) -> KSet {
    let mut out = KSet::new();
    for x in xs {
        collect_components(x, &mut out);
    }
    out
}

fn collect_components(x: &ExponentTerm, out: &mut KSet) {
    match x {
        ExponentTerm::Zero => {}
        ExponentTerm::Ord(a) => {
            out.insert(a.clone());
        }
        ExponentTerm::LamSum(ts) => {
            for t in ts.iter() {
                out.insert(t.coeff.clone());
                collect_components(&t.exp, out);
            }
        }
    }
}

/// Head and tail data of a nonzero exponent term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadTail {
    pub he: ExponentTerm,
    pub te: ExponentTerm,
    pub hd: ExponentTerm,
    pub tl: ExponentTerm,
}

pub fn head_tail(x: &ExponentTerm) -> Result<HeadTail> {
    let ts = x.cnf();
    let (first, last) = match (ts.first(), ts.last()) {
        (Some(f), Some(l)) => (f.clone(), l.clone()),
        _ => return Err(OtError::UndefinedOnZero),
    };
    Ok(HeadTail {
        he: first.exp.clone(),
        te: last.exp.clone(),
        hd: single(first),
        tl: single(last),
    })
}

fn single(t: LamTerm) -> ExponentTerm {
    ExponentTerm::lam(t.exp, t.coeff)
}

pub fn he(x: &ExponentTerm) -> Result<ExponentTerm> {
    match x {
        ExponentTerm::Zero => Err(OtError::UndefinedOnZero),
        ExponentTerm::Ord(_) => Ok(ExponentTerm::Zero),
        ExponentTerm::LamSum(ts) => Ok(ts[0].exp.clone()),
    }
}

pub fn te(x: &ExponentTerm) -> Result<ExponentTerm> {
    match x {
        ExponentTerm::Zero => Err(OtError::UndefinedOnZero),
        ExponentTerm::Ord(_) => Ok(ExponentTerm::Zero),
        ExponentTerm::LamSum(ts) => Ok(ts[ts.len() - 1].exp.clone()),
    }
}

/// `he^{(i)}(ξ)`; `he^{(0)}` is the identity.
pub fn he_iter(x: &ExponentTerm, i: usize) -> Result<ExponentTerm> {
    let mut cur = x.clone();
    for _ in 0..i {
        cur = he(&cur)?;
    }
    Ok(cur)
}

/// `te^{(i)}(ξ)`; `te^{(0)}` is the identity.
pub fn te_iter(x: &ExponentTerm, i: usize) -> Result<ExponentTerm> {
    let mut cur = x.clone();
    for _ in 0..i {
        cur = te(&cur)?;
    }
    Ok(cur)
}

/// `ξ - Tl(ξ)`; zero stays zero.
pub fn drop_tail(x: &ExponentTerm) -> ExponentTerm {
    let mut ts = x.cnf();
    ts.pop();
    ExponentTerm::from_cnf(ts).expect("prefix of a normal form is a normal form")
}

/// All parts of `x`, longest first and ending with 0.
pub fn parts(x: &ExponentTerm) -> Vec<ExponentTerm> {
    let ts = x.cnf();
    (0..=ts.len())
        .rev()
        .map(|n| ExponentTerm::from_cnf(ts[..n].to_vec()).expect("prefix of a normal form"))
        .collect()
}

/// `z ≤_pt x`.
pub fn is_part(z: &ExponentTerm, x: &ExponentTerm) -> bool {
    let (zs, xs) = (z.cnf(), x.cnf());
    zs.len() <= xs.len() && zs[..] == xs[..zs.len()]
}

/// `z <_pt x`.
pub fn is_proper_part(z: &ExponentTerm, x: &ExponentTerm) -> bool {
    z != x && is_part(z, x)
}

/// `μ⃗ ⊂_pt x`.
pub fn iterated_tail_parts(mu: &[ExponentTerm], x: &ExponentTerm) -> bool {
    let Some(first) = mu.first() else {
        return false;
    };
    if !is_part(first, x) {
        return false;
    }
    mu.windows(2).all(|w| match te(&w[0]) {
        Ok(t) => is_part(&w[1], &t),
        Err(_) => false,
    })
}

/// Drops trailing zero entries but keeps at least one entry.
pub fn strip_trailing_zeros(v: &[ExponentTerm]) -> &[ExponentTerm] {
    let keep = v.iter().rposition(|e| !e.is_zero()).map_or(1, |p| p + 1);
    &v[..keep.min(v.len())]
}

/// `Λ_i(ξ)`, the `i`-fold Λ-exponential.
pub fn lam_tower(x: &ExponentTerm, i: usize) -> Result<ExponentTerm> {
    lam_tower_capped(x, i, TOWER_CAP)
}

pub fn lam_tower_capped(x: &ExponentTerm, i: usize, cap: usize) -> Result<ExponentTerm> {
    if i > cap {
        return Err(OtError::CapExceeded(i, cap));
    }
    let mut cur = x.clone();
    for _ in 0..i {
        cur = ExponentTerm::lam(cur, OrdinalTerm::one());
    }
    Ok(cur)
}

fn check_index(k: usize, len: usize) -> Result<usize> {
    if k < 2 || k > len + 1 {
        return Err(OtError::IndexOutOfRange {
            index: k,
            lo: 2,
            hi: len + 1,
        });
    }
    Ok(k - 2)
}

impl Notation {
    fn exp_lt(&self, x: &ExponentTerm, y: &ExponentTerm) -> bool {
        self.cmp_exp(x, y) == Ordering::Less
    }

    /// `ν⃗*0⃗ < ξ`: some iterated tail parts of `x` dominate `ν⃗` pointwise.
    pub fn seq_lt(&self, nu: &[ExponentTerm], x: &ExponentTerm) -> bool {
        let nu = strip_trailing_zeros(nu);
        if nu.is_empty() {
            return !x.is_zero();
        }
        self.seq_lt_rec(nu, x)
    }

    fn seq_lt_rec(&self, nu: &[ExponentTerm], x: &ExponentTerm) -> bool {
        parts(x).iter().any(|mu| {
            self.exp_lt(&nu[0], mu)
                && (nu.len() == 1 || te(mu).is_ok_and(|t| self.seq_lt_rec(&nu[1..], &t)))
        })
    }

    /// `ν⃗ <_k ξ⃗`.
    pub fn seq_lt_k(&self, nu: &[ExponentTerm], xi: &[ExponentTerm], k: usize) -> Result<bool> {
        if nu.len() != xi.len() {
            return Err(OtError::LengthMismatch(nu.len(), xi.len()));
        }
        let p = check_index(k, nu.len())?;
        if p >= nu.len() {
            return Err(OtError::IndexOutOfRange {
                index: k,
                lo: 2,
                hi: nu.len() + 1,
            });
        }
        let head_ok = nu[..p]
            .iter()
            .zip(&xi[..p])
            .all(|(a, b)| self.cmp_exp(a, b) != Ordering::Greater);
        Ok(head_ok && self.seq_lt(&nu[p..], &xi[p]))
    }

    /// `z <_sd x`: `z` keeps every summand of `x` but the last, lowers the
    /// last coefficient, and continues with anything below `Λ^{te(x)}`.
    pub fn step_down(&self, z: &ExponentTerm, x: &ExponentTerm) -> bool {
        let xs = x.cnf();
        let Some(last) = xs.last() else {
            return false;
        };
        let prefix = &xs[..xs.len() - 1];
        let zs = z.cnf();
        if zs.len() < prefix.len() || zs[..prefix.len()] != *prefix {
            return false;
        }
        let rest = &zs[prefix.len()..];
        match rest.first() {
            None => true,
            Some(r) => match self.cmp_exp(&r.exp, &last.exp) {
                Ordering::Less => true,
                Ordering::Equal => self.cmp(&r.coeff, &last.coeff) == Ordering::Less,
                Ordering::Greater => false,
            },
        }
    }

    /// `ζ ≤_sd ξ`, the reflexive closure of [`Notation::step_down`].
    pub fn step_down_eq(&self, z: &ExponentTerm, x: &ExponentTerm) -> bool {
        z == x || self.step_down(z, x)
    }

    /// `ν⃗*0⃗ <_sd ξ`: `ν_i <_sd te^{(i)}(ξ)` for every retained entry.
    pub fn vec_step_down(&self, nu: &[ExponentTerm], x: &ExponentTerm) -> bool {
        let nu = strip_trailing_zeros(nu);
        let mut t = x.clone();
        for (i, v) in nu.iter().enumerate() {
            if i > 0 {
                t = match te(&t) {
                    Ok(t) => t,
                    Err(_) => return false,
                };
            }
            if !self.step_down(v, &t) {
                return false;
            }
        }
        true
    }

    /// `z ≤_sp x` (or `z <_sp x` when `strict`).
    pub fn sp_rel(&self, z: &ExponentTerm, x: &ExponentTerm, strict: bool) -> bool {
        parts(x).iter().any(|mu| {
            if strict {
                self.step_down(z, mu)
            } else {
                self.step_down_eq(z, mu)
            }
        })
    }

    /// `ν⃗ <_sp ξ`.
    pub fn vec_sp(&self, nu: &[ExponentTerm], x: &ExponentTerm) -> bool {
        parts(x).iter().any(|mu| self.vec_step_down(nu, mu))
    }

    /// `p(ν⃗, ξ)` for the longest witnessing part.
    pub fn sp_position(&self, nu: &[ExponentTerm], x: &ExponentTerm) -> Result<usize> {
        parts(x)
            .iter()
            .position(|mu| self.vec_step_down(nu, mu))
            .ok_or(OtError::NoWitness)
    }

    /// `ν⃗ <_lx,k ξ⃗`, comparing entries from logical index `k` on.
    pub fn lx_lt(&self, nu: &[ExponentTerm], xi: &[ExponentTerm], k: usize) -> Result<bool> {
        if nu.len() != xi.len() {
            return Err(OtError::LengthMismatch(nu.len(), xi.len()));
        }
        let start = check_index(k, nu.len())?;
        let Some(i) = (start..nu.len()).find(|&j| nu[j] != xi[j]) else {
            return Ok(false);
        };
        let first_nonzero = |v: &[ExponentTerm]| (i..v.len()).find(|&j| !v[j].is_zero());
        let Some(k1) = first_nonzero(xi) else {
            return Ok(false);
        };
        let Some(k0) = first_nonzero(nu) else {
            return Ok(true);
        };
        if i == k0 && k0 < k1 {
            return Ok(he_iter(&nu[k0], k1 - k0)
                .is_ok_and(|h| self.cmp_exp(&h, &xi[k1]) != Ordering::Greater));
        }
        if k0 >= k1 && k1 == i {
            return Ok(he_iter(&xi[k1], k0 - k1).is_ok_and(|h| self.exp_lt(&nu[k0], &h)));
        }
        Ok(false)
    }

    /// `t ≥ Λ_j(y + 1)`, decided without building the tower.
    fn ge_tower_succ(&self, t: &ExponentTerm, y: &ExponentTerm, j: usize) -> bool {
        if j == 0 {
            return self.cmp_exp(t, y) == Ordering::Greater;
        }
        match he(t) {
            Ok(h) => self.ge_tower_succ(&h, y, j - 1),
            Err(_) => false,
        }
    }

    /// First `(position, k)` with `ξ_i > 0` and `Tl(ξ_i) < Λ_k(ξ_{i+k} + 1)`.
    fn irreducibility_violation(&self, xi: &[ExponentTerm]) -> Option<(usize, usize)> {
        for i in 0..xi.len() {
            let Ok(t) = te(&xi[i]) else {
                continue;
            };
            for k in 1..xi.len() - i {
                // Tl(ξ_i) = Λ^t·c ≥ Λ^{Λ_{k-1}(y+1)} iff t ≥ Λ_{k-1}(y+1)
                if !self.ge_tower_succ(&t, &xi[i + k], k - 1) {
                    return Some((i, k));
                }
            }
        }
        None
    }

    pub fn irreducible(&self, xi: &[ExponentTerm]) -> bool {
        self.irreducibility_violation(xi).is_none()
    }

    /// Repeatedly drops `Tl(ξ_i)` at the first violation of irreducibility.
    pub fn irreducible_reduct(&self, xi: &CoeffSeq) -> CoeffSeq {
        let mut v = xi.entries().to_vec();
        while let Some((i, _)) = self.irreducibility_violation(&v) {
            v[i] = drop_tail(&v[i]);
        }
        CoeffSeq::new(v)
    }

    /// Ordinal sum `x + y` of exponent terms. `None` when the result mixes
    /// a `Λ^0` summand with higher ones, which lies outside `E`.
    pub fn exp_add(&self, x: &ExponentTerm, y: &ExponentTerm) -> Option<ExponentTerm> {
        let ys = y.cnf();
        let Some(head) = ys.first() else {
            return Some(x.clone());
        };
        let mut out: Vec<LamTerm> = Vec::new();
        for t in x.cnf() {
            match self.cmp_exp(&t.exp, &head.exp) {
                Ordering::Greater => out.push(t),
                Ordering::Equal => {
                    out.push(LamTerm {
                        exp: t.exp,
                        coeff: self.add(&t.coeff, &head.coeff),
                    });
                    out.extend(ys[1..].iter().cloned());
                    return ExponentTerm::from_cnf(out);
                }
                Ordering::Less => break,
            }
        }
        out.extend(ys);
        ExponentTerm::from_cnf(out)
    }

    /// Exponent term plus one.
    pub fn exp_succ(&self, x: &ExponentTerm) -> Option<ExponentTerm> {
        self.exp_add(x, &ExponentTerm::ord(OrdinalTerm::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_exp;

    fn n4() -> Notation {
        Notation::with_n(4).unwrap()
    }

    fn e(s: &str) -> ExponentTerm {
        parse_exp(s).unwrap()
    }

    fn v(xs: &[&str]) -> Vec<ExponentTerm> {
        xs.iter().map(|s| e(s)).collect()
    }

    #[test]
    fn components_examples() {
        assert!(components(&ExponentTerm::Zero).is_empty());
        let k = components(&e("psi(K; 0)"));
        assert_eq!(k.len(), 1);
        let k = components(&e("L^(L^(1)*(1))*(2)"));
        let mut got: Vec<String> = k.iter().map(|t| t.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["1", "2"]);
    }

    #[test]
    fn head_tail_examples() {
        let x = e("L^(2)*(3)+L^(1)*(2)");
        let h = head_tail(&x).unwrap();
        assert_eq!(h.he, e("2"));
        assert_eq!(h.te, e("1"));
        assert_eq!(h.hd, e("L^(2)*(3)"));
        assert_eq!(h.tl, e("L^(1)*(2)"));
        let h = head_tail(&e("3")).unwrap();
        assert!(h.he.is_zero() && h.te.is_zero());
        assert_eq!(he_iter(&e("L^(L^(1)*(1))*(1)"), 2).unwrap(), e("1"));
        assert!(matches!(head_tail(&ExponentTerm::Zero), Err(OtError::UndefinedOnZero)));
    }

    #[test]
    fn part_examples() {
        let x = e("L^(2)*(3)+L^(1)*(2)");
        assert!(is_part(&e("L^(2)*(3)"), &x));
        assert!(is_part(&ExponentTerm::Zero, &x));
        assert!(!is_part(&e("L^(1)*(2)"), &x));
        assert!(is_proper_part(&e("L^(2)*(3)"), &x));
        assert!(!is_proper_part(&x, &x));
        assert_eq!(parts(&x).len(), 3);
    }

    #[test]
    fn iterated_tail_part_examples() {
        let x = e("L^(2)*(3)+L^(1)*(2)");
        assert!(iterated_tail_parts(std::slice::from_ref(&x), &x));
        assert!(iterated_tail_parts(&[x.clone(), te(&x).unwrap()], &x));
        assert!(!iterated_tail_parts(&v(&["L^(1)*(2)", "5"]), &x));
    }

    #[test]
    fn seq_lt_examples() {
        let o = n4();
        let x = e("L^(2)*(1)");
        assert_eq!(o.seq_lt(&v(&["3"]), &x), o.cmp_exp(&e("3"), &x) == Ordering::Less);
        assert!(o.seq_lt(&v(&["0", "0"]), &e("1")));
        // (1, 0) < Λ^2: strip to (1); 1 < Λ^2
        assert!(o.seq_lt(&v(&["1", "0"]), &x));
        // (1, 1): need μ_1 ≤_pt te(μ_0) = 2 with 1 < μ_1
        assert!(o.seq_lt(&v(&["1", "1"]), &x));
        assert!(!o.seq_lt(&v(&["1", "2"]), &x));
    }

    #[test]
    fn seq_lt_k_examples() {
        let o = n4();
        let a = v(&["1", "0"]);
        assert!(!o.seq_lt_k(&a, &a, 2).unwrap());
        assert!(o.seq_lt_k(&v(&["0", "0"]), &v(&["0", "1"]), 3).unwrap());
        assert!(!o.seq_lt_k(&v(&["1", "0"]), &v(&["0", "1"]), 2).unwrap());
        assert!(o.seq_lt_k(&a, &a, 5).is_err());
    }

    #[test]
    fn step_down_examples() {
        let o = n4();
        assert!(o.step_down(&e("L^(2)*(2)+L^(1)*(5)"), &e("L^(2)*(3)")));
        assert!(o.step_down(&e("2"), &e("3")));
        assert!(!o.step_down(&e("3"), &e("3")));
        assert!(o.step_down(&ExponentTerm::Zero, &e("3")));
        assert!(!o.step_down(&ExponentTerm::Zero, &ExponentTerm::Zero));
        assert!(!o.step_down(&e("L^(1)*(2)"), &e("L^(2)*(3)+L^(1)*(2)")));
    }

    #[test]
    fn vec_step_down_examples() {
        let o = n4();
        assert!(o.vec_step_down(&v(&["0"]), &e("3")));
        assert!(o.vec_step_down(&v(&["L^(1)*(1)", "0"]), &e("L^(1)*(2)")));
        assert!(!o.vec_step_down(&v(&["1"]), &e("1")));
    }

    #[test]
    fn sp_examples() {
        let o = n4();
        let x = e("L^(1)*(2)");
        assert!(o.sp_rel(&x, &x, false));
        assert!(!o.sp_rel(&x, &x, true));
        assert!(o.vec_sp(&v(&["L^(1)*(1)", "0"]), &x));
        assert_eq!(o.sp_position(&v(&["L^(1)*(1)", "0"]), &x).unwrap(), 0);
        assert!(!o.sp_rel(&e("3"), &ExponentTerm::Zero, true));
        let y = e("L^(3)*(1)+L^(2)*(1)");
        // only the part Λ^3 admits Λ^2·5
        assert_eq!(o.sp_position(&v(&["L^(2)*(5)"]), &y).unwrap(), 1);
        assert!(matches!(
            o.sp_position(&v(&["L^(4)*(1)"]), &y),
            Err(OtError::NoWitness)
        ));
    }

    #[test]
    fn lx_examples() {
        let o = n4();
        assert!(o.lx_lt(&v(&["0", "0"]), &v(&["L^(1)*(1)", "0"]), 2).unwrap());
        assert!(!o.lx_lt(&v(&["0", "1"]), &v(&["L^(1)*(1)", "0"]), 2).unwrap());
        assert!(o.lx_lt(&v(&["0", "1"]), &v(&["L^(2)*(1)", "0"]), 2).unwrap());
        assert!(!o.lx_lt(&v(&["0", "1"]), &v(&["0", "1"]), 2).unwrap());
        assert!(!o.lx_lt(&v(&["0", "1"]), &v(&["0", "0"]), 2).unwrap());
        assert!(o.lx_lt(&v(&["0"]), &v(&["0", "1"]), 2).is_err());
    }

    #[test]
    fn tower_examples() {
        let x = e("L^(1)*(2)");
        assert_eq!(lam_tower(&x, 0).unwrap(), x);
        assert_eq!(lam_tower(&e("1"), 1).unwrap(), e("L^(1)*(1)"));
        assert_eq!(lam_tower(&ExponentTerm::Zero, 1).unwrap(), e("1"));
        assert_eq!(lam_tower(&ExponentTerm::Zero, 2).unwrap(), e("L^(1)*(1)"));
        assert!(matches!(lam_tower(&x, TOWER_CAP + 1), Err(OtError::CapExceeded(_, _))));
    }

    #[test]
    fn irreducible_examples() {
        let o = n4();
        assert!(o.irreducible(&v(&["0", "0"])));
        assert!(o.irreducible(&v(&["L^(2)*(1)", "1"])));
        assert!(!o.irreducible(&v(&["L^(1)*(1)", "1"])));
        let r = o.irreducible_reduct(&CoeffSeq::new(v(&["L^(1)*(1)", "1"])));
        assert_eq!(r.entries(), &v(&["0", "1"])[..]);
        let ok = CoeffSeq::new(v(&["L^(2)*(1)", "1"]));
        assert_eq!(o.irreducible_reduct(&ok), ok);
    }

    #[test]
    fn exp_add_merges_and_absorbs() {
        let o = n4();
        let x = e("L^(2)*(1)+L^(1)*(1)");
        assert_eq!(o.exp_add(&x, &e("L^(2)*(3)")).unwrap(), e("L^(2)*(4)"));
        assert_eq!(o.exp_add(&x, &e("L^(1)*(1)")).unwrap(), e("L^(2)*(1)+L^(1)*(2)"));
        assert_eq!(o.exp_add(&e("2"), &e("L^(1)*(1)")).unwrap(), e("L^(1)*(1)"));
        assert_eq!(o.exp_add(&e("2"), &e("3")).unwrap(), e("5"));
        assert!(o.exp_add(&x, &e("1")).is_none());
    }
}
