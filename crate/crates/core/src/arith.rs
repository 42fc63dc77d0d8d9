//! Normalizing constructors and the collapsing-bound terms.

use std::cmp::Ordering;

use crate::error::{OtError, Result};
use crate::term::{CoeffSeq, ExponentTerm, OrdKind, OrdinalTerm};
use crate::Notation;

impl Notation {
    /// Ordinal sum `a + b`.
    pub fn add(&self, a: &OrdinalTerm, b: &OrdinalTerm) -> OrdinalTerm {
        let Some(head) = b.parts().first() else {
            return a.clone();
        };
        let mut parts: Vec<OrdinalTerm> = a
            .parts()
            .iter()
            .take_while(|p| self.le(head, p))
            .cloned()
            .collect();
        parts.extend(b.parts().iter().cloned());
        OrdinalTerm::from_parts(parts)
    }

    /// Natural (commutative) sum `a # b`.
    pub fn natural_sum(&self, a: &OrdinalTerm, b: &OrdinalTerm) -> OrdinalTerm {
        let (xs, ys) = (a.parts(), b.parts());
        let mut out = Vec::with_capacity(xs.len() + ys.len());
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            if self.cmp(&xs[i], &ys[j]) != Ordering::Less {
                out.push(xs[i].clone());
                i += 1;
            } else {
                out.push(ys[j].clone());
                j += 1;
            }
        }
        out.extend(xs[i..].iter().cloned());
        out.extend(ys[j..].iter().cloned());
        OrdinalTerm::from_parts(out)
    }

    /// The `x` with `c + x = d`, when `c ≤ d`.
    pub fn left_sub(&self, c: &OrdinalTerm, d: &OrdinalTerm) -> Option<OrdinalTerm> {
        let (cs, ds) = (c.parts(), d.parts());
        let mut i = 0;
        while i < cs.len() && i < ds.len() && cs[i] == ds[i] {
            i += 1;
        }
        if i < cs.len() && (i == ds.len() || self.cmp(&cs[i], &ds[i]) != Ordering::Less) {
            return None;
        }
        Some(OrdinalTerm::from_parts(ds[i..].to_vec()))
    }

    /// `ω^b`.
    pub fn omega_exp(&self, b: &OrdinalTerm) -> OrdinalTerm {
        if b.is_zero() {
            return OrdinalTerm::one();
        }
        let k = OrdinalTerm::big_k();
        match self.cmp(b, &k) {
            Ordering::Equal => k,
            Ordering::Greater => OrdinalTerm::raw_omega_exp(b.clone()),
            Ordering::Less => match b.kind() {
                OrdKind::OmegaIdx(_) | OrdKind::Psi { .. } => b.clone(),
                OrdKind::Veblen(x, _) if !x.is_zero() => b.clone(),
                _ => OrdinalTerm::raw_veblen(OrdinalTerm::zero(), b.clone()),
            },
        }
    }

    /// `φ b g` for `b, g < K`.
    pub fn veblen(&self, b: &OrdinalTerm, g: &OrdinalTerm) -> Result<OrdinalTerm> {
        let k = OrdinalTerm::big_k();
        if !(self.lt(b, &k) && self.lt(g, &k)) {
            return Err(OtError::ArgsNotBelowK);
        }
        match g.kind() {
            OrdKind::Veblen(b2, _) if self.lt(b, b2) => return Ok(g.clone()),
            OrdKind::OmegaIdx(_) | OrdKind::Psi { .. } if self.lt(b, g) => return Ok(g.clone()),
            OrdKind::Zero if b.is_critical() => return Ok(b.clone()),
            _ => {}
        }
        Ok(OrdinalTerm::raw_veblen(b.clone(), g.clone()))
    }

    /// `Ω_b` for `0 < b < K`.
    pub fn omega_idx(&self, b: &OrdinalTerm) -> Result<OrdinalTerm> {
        if b.is_zero() || !self.lt(b, &OrdinalTerm::big_k()) {
            return Err(OtError::OutOfRange(b.to_string()));
        }
        let t = OrdinalTerm::raw_omega_idx(b.clone());
        Ok(if self.lt(b, &t) { t } else { b.clone() })
    }

    fn validated(&self, t: OrdinalTerm) -> Result<OrdinalTerm> {
        let r = self.validate(&t);
        if r.ok {
            Ok(t)
        } else {
            Err(OtError::Invalid(Box::new((*r).clone())))
        }
    }

    /// Validates a term built elsewhere.
    pub fn build(&self, t: OrdinalTerm) -> Result<OrdinalTerm> {
        self.validated(t)
    }

    /// `ψ_π^ν(a)`; a zero `ν` gives the plain form `ψ_π(a)`.
    pub fn psi(&self, pi: &OrdinalTerm, nu: CoeffSeq, a: &OrdinalTerm) -> Result<OrdinalTerm> {
        if nu.len() != self.params().seq_len() {
            return Err(OtError::Arity {
                found: nu.len(),
                expected: self.params().seq_len(),
            });
        }
        let nu = (!nu.is_zero()).then_some(nu);
        self.validated(OrdinalTerm::raw_psi(pi.clone(), nu, a.clone()))
    }

    /// `ψ_π(a)` for a regular `π`.
    pub fn psi0(&self, pi: &OrdinalTerm, a: &OrdinalTerm) -> Result<OrdinalTerm> {
        self.validated(OrdinalTerm::raw_psi(pi.clone(), None, a.clone()))
    }

    /// `ψ_K^{0⃗*(b)}(a)`.
    pub fn psi_k(&self, b: &OrdinalTerm, a: &OrdinalTerm) -> Result<OrdinalTerm> {
        let nu = CoeffSeq::zeros_then(self.params(), ExponentTerm::ord(b.clone()));
        self.validated(OrdinalTerm::raw_psi(OrdinalTerm::big_k(), Some(nu), a.clone()))
    }

    /// `ψ_π^ν(a)` with `ν_k = m_k(π) + Λ^{m_{k+1}(π)} b` for the largest
    /// `k+1` carrying a nonzero `m_{k+1}(π)`.
    pub fn psi_step(&self, pi: &OrdinalTerm, b: &OrdinalTerm, a: &OrdinalTerm) -> Result<OrdinalTerm> {
        let not_mahlo = || OtError::NotMahloTerm(pi.to_string());
        let m = self.m_vec(pi).ok_or_else(not_mahlo)?;
        let j = m.last_nonzero_index().filter(|&j| j >= 3).ok_or_else(not_mahlo)?;
        let (pk, e) = (j - 3, m.entries());
        let mut nu: Vec<ExponentTerm> = e[..pk].to_vec();
        let step = ExponentTerm::lam(e[pk + 1].clone(), b.clone());
        let nk = self.exp_add(&e[pk], &step).ok_or_else(not_mahlo)?;
        nu.push(nk);
        nu.resize(m.len(), ExponentTerm::Zero);
        self.validated(OrdinalTerm::raw_psi(pi.clone(), Some(CoeffSeq::new(nu)), a.clone()))
    }

    /// `ψ_π^ν(a)` with `ν⃗ ∈ SD` and `ν⃗ <_sp m_2(π)`.
    pub fn psi_sd(&self, pi: &OrdinalTerm, nu: CoeffSeq, a: &OrdinalTerm) -> Result<OrdinalTerm> {
        self.validated(OrdinalTerm::raw_psi(pi.clone(), Some(nu), a.clone()))
    }

    /// `ω_n(a)`: `ω_0(a) = a`, `ω_{n+1}(a) = ω^{ω_n(a)}`.
    pub fn omega_tower(&self, a: &OrdinalTerm, n: usize) -> OrdinalTerm {
        (0..n).fold(a.clone(), |t, _| self.omega_exp(&t))
    }

    /// `ψ_{Ω_1}(ω_n(K+1))`.
    pub fn theorem_bound(&self, n: usize) -> Result<OrdinalTerm> {
        let k1 = self.add(&OrdinalTerm::big_k(), &OrdinalTerm::one());
        let om1 = self.omega_idx(&OrdinalTerm::one())?;
        self.psi0(&om1, &self.omega_tower(&k1, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_ord;
    use crate::validate::Rule;

    fn n4() -> Notation {
        Notation::with_n(4).unwrap()
    }

    fn o(s: &str) -> OrdinalTerm {
        parse_ord(s, 4).unwrap()
    }

    #[test]
    fn add_examples() {
        let n = n4();
        let one = OrdinalTerm::one();
        assert_eq!(n.add(&OrdinalTerm::zero(), &one), one);
        assert_eq!(n.add(&one, &OrdinalTerm::zero()), one);
        assert_eq!(n.add(&one, &one), OrdinalTerm::nat(2));
        assert_eq!(n.add(&one, &OrdinalTerm::big_k()), OrdinalTerm::big_k());
        assert_eq!(n.add(&o("K+1"), &o("K")), o("K+K"));
    }

    #[test]
    fn natural_sum_examples() {
        let n = n4();
        assert_eq!(n.natural_sum(&o("K"), &o("1")), o("K+1"));
        assert_eq!(n.natural_sum(&o("1"), &o("K")), o("K+1"));
        assert_eq!(n.natural_sum(&o("K+1"), &o("K+2")), o("K+K+3"));
    }

    #[test]
    fn left_sub_examples() {
        let n = n4();
        assert_eq!(n.left_sub(&o("2"), &o("5")), Some(o("3")));
        assert_eq!(n.left_sub(&o("2"), &o("K")), Some(o("K")));
        assert_eq!(n.left_sub(&o("K"), &o("2")), None);
        assert_eq!(n.left_sub(&o("2"), &o("2")), Some(o("0")));
    }

    #[test]
    fn omega_exp_examples() {
        let n = n4();
        assert_eq!(n.omega_exp(&o("0")), o("1"));
        assert_eq!(n.omega_exp(&o("K")), o("K"));
        assert_eq!(n.omega_exp(&o("K+1")), o("w^(K+1)"));
        assert_eq!(n.omega_exp(&o("Om(1)")), o("Om(1)"));
        assert_eq!(n.omega_exp(&o("1")), o("phi(0,1)"));
        assert_eq!(n.omega_exp(&o("phi(1,0)")), o("phi(1,0)"));
    }

    #[test]
    fn veblen_examples() {
        let n = n4();
        assert_eq!(n.veblen(&o("0"), &o("0")).unwrap(), OrdinalTerm::one());
        assert_eq!(n.veblen(&o("0"), &o("Om(1)")).unwrap(), o("Om(1)"));
        let e0 = n.veblen(&o("1"), &o("0")).unwrap();
        assert!(matches!(e0.kind(), OrdKind::Veblen(_, _)));
        assert!(n.is_valid(&e0));
        assert_eq!(n.veblen(&o("0"), &e0).unwrap(), e0);
        assert_eq!(n.veblen(&o("Om(1)"), &o("0")).unwrap(), o("Om(1)"));
        assert!(matches!(n.veblen(&o("K"), &o("0")), Err(OtError::ArgsNotBelowK)));
    }

    #[test]
    fn omega_idx_examples() {
        let n = n4();
        assert_eq!(n.omega_idx(&o("1")).unwrap(), o("Om(1)"));
        assert_eq!(n.omega_idx(&o("psi(K; 0)")).unwrap(), o("psi(K; 0)"));
        let t = o("psi(Om(2); 0)");
        assert_eq!(n.omega_idx(&t).unwrap(), o("Om(psi(Om(2); 0))"));
        assert!(matches!(n.omega_idx(&o("K")), Err(OtError::OutOfRange(_))));
        assert!(matches!(n.omega_idx(&o("0")), Err(OtError::OutOfRange(_))));
    }

    #[test]
    fn psi_builders() {
        let n = n4();
        let (one, two, three) = (o("1"), o("2"), o("3"));
        assert_eq!(n.psi0(&o("K"), &o("0")).unwrap(), o("psi(K; 0)"));
        let p1 = n.psi_k(&one, &one).unwrap();
        assert_eq!(p1, o("psi(K; [0,1]; 1)"));
        let p2 = n.psi_step(&p1, &two, &two).unwrap();
        assert_eq!(p2, o("psi(psi(K; [0,1]; 1); [L^(1)*(2),0]; 2)"));
        let nu = CoeffSeq::new(vec![ExponentTerm::lam(ExponentTerm::ord(one.clone()), one.clone()), ExponentTerm::Zero]);
        let p3 = n.psi_sd(&p2, nu, &three).unwrap();
        assert_eq!(n.check_ot(&p3).rule, Rule::Psi12);
        assert!(n.psi_k(&o("0"), &one).is_err());
        assert!(n.psi_step(&o("K"), &one, &one).is_err());
    }

    #[test]
    fn towers_and_bounds() {
        let n = n4();
        let k1 = o("K+1");
        assert_eq!(n.omega_tower(&k1, 0), k1);
        assert_eq!(n.omega_tower(&k1, 1), o("w^(K+1)"));
        assert_eq!(n.omega_tower(&k1, 2), o("w^(w^(K+1))"));
        assert_eq!(n.theorem_bound(0).unwrap(), o("psi(Om(1); K+1)"));
        assert_eq!(n.theorem_bound(1).unwrap(), o("psi(Om(1); w^(K+1))"));
        let (b1, b2) = (n.theorem_bound(1).unwrap(), n.theorem_bound(2).unwrap());
        assert_eq!(n.cmp(&b1, &b2), Ordering::Less);
    }
}
