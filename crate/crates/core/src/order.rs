//! The term order on `OT` and `E`.

use std::cmp::Ordering;

use crate::cnf::components_seq;
use crate::error::{OtError, Result};
use crate::term::{ExponentTerm, KSet, OrdKind, OrdinalTerm};
use crate::Notation;

fn level(t: &OrdinalTerm) -> u8 {
    match t.kind() {
        OrdKind::OmegaExp(_) => 2,
        OrdKind::BigK => 1,
        _ => 0,
    }
}

impl Notation {
    /// Compares two validated terms.
    pub fn cmp_ord(&self, s: &OrdinalTerm, t: &OrdinalTerm) -> Result<Ordering> {
        for x in [s, t] {
            if !self.is_valid(x) {
                return Err(OtError::UnvalidatedInput(x.to_string()));
            }
        }
        Ok(self.cmp(s, t))
    }

    /// Compares two validated exponent terms.
    pub fn cmp_exp_checked(&self, x: &ExponentTerm, y: &ExponentTerm) -> Result<Ordering> {
        for z in [x, y] {
            if !self.is_valid_exp(z) {
                return Err(OtError::UnvalidatedInput(z.to_string()));
            }
        }
        Ok(self.cmp_exp(x, y))
    }

    /// The term order without the membership check. On terms outside `OT`
    /// the answer is unspecified but the call still terminates.
    pub fn cmp(&self, s: &OrdinalTerm, t: &OrdinalTerm) -> Ordering {
        if s == t {
            return Ordering::Equal;
        }
        let (ps, pt) = (s.parts(), t.parts());
        for (x, y) in ps.iter().zip(pt) {
            match self.cmp_principal(x, y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        ps.len().cmp(&pt.len())
    }

    pub fn lt(&self, s: &OrdinalTerm, t: &OrdinalTerm) -> bool {
        self.cmp(s, t) == Ordering::Less
    }

    pub fn le(&self, s: &OrdinalTerm, t: &OrdinalTerm) -> bool {
        self.cmp(s, t) != Ordering::Greater
    }

    fn cmp_principal(&self, x: &OrdinalTerm, y: &OrdinalTerm) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        match level(x).cmp(&level(y)) {
            Ordering::Equal => {}
            o => return o,
        }
        use OrdKind::*;
        match (x.kind(), y.kind()) {
            (OmegaExp(a), OmegaExp(b)) => self.cmp(a, b),
            (BigK, BigK) => Ordering::Equal,
            (Veblen(a, b), Veblen(c, d)) => match self.cmp(a, c) {
                Ordering::Less => self.cmp(b, y),
                Ordering::Equal => self.cmp(b, d),
                Ordering::Greater => self.cmp(x, d),
            },
            (Veblen(a, b), _) => self.veblen_vs_critical(a, b, y),
            (_, Veblen(a, b)) => self.veblen_vs_critical(a, b, x).reverse(),
            (OmegaIdx(a), OmegaIdx(b)) => self.cmp(a, b),
            (OmegaIdx(a), Psi { .. }) => self.omega_vs_psi(a, y),
            (Psi { .. }, OmegaIdx(a)) => self.omega_vs_psi(a, x).reverse(),
            (Psi { pi: px, .. }, Psi { pi: py, .. }) => {
                // β < π ≤ α settles the comparison before the other clauses
                if self.le(px, y) {
                    return Ordering::Less;
                }
                if self.le(py, x) {
                    return Ordering::Greater;
                }
                let lt = self.psi_lt(x, y);
                let gt = self.psi_lt(y, x);
                match (lt, gt) {
                    (true, _) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    (false, false) => Ordering::Equal,
                }
            }
            _ => unreachable!("principal terms of level 0 are Veblen, Omega or psi terms"),
        }
    }

    /// `φab` against a strongly critical `s`: below iff both arguments are.
    fn veblen_vs_critical(&self, a: &OrdinalTerm, b: &OrdinalTerm, s: &OrdinalTerm) -> Ordering {
        if self.lt(a, s) && self.lt(b, s) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// `Ω_α` against a ψ-term.
    fn omega_vs_psi(&self, alpha: &OrdinalTerm, psi: &OrdinalTerm) -> Ordering {
        if let Some(OrdKind::OmegaIdx(sigma)) = psi.pd().map(OrdinalTerm::kind) {
            if let Some(gamma) = sigma.predecessor() {
                // Ω_γ < ψ_{Ω_{γ+1}}(a) < Ω_{γ+1}
                return if self.le(alpha, &gamma) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.cmp(alpha, psi)
    }

    /// `β < α` for ψ-terms by the comparison clauses other than `π ≤ α`,
    /// which the caller has already ruled out in both directions.
    fn psi_lt(&self, beta: &OrdinalTerm, alpha: &OrdinalTerm) -> bool {
        let key = (beta.clone(), alpha.clone());
        if let Some(v) = self.psi_lt.get(&key) {
            return *v;
        }
        let v = self.psi_lt_uncached(beta, alpha);
        self.trim_memo();
        self.psi_lt.insert(key, v);
        v
    }

    fn psi_lt_uncached(&self, beta: &OrdinalTerm, alpha: &OrdinalTerm) -> bool {
        let (OrdKind::Psi { pi, nu, a: b }, OrdKind::Psi { pi: kappa, nu: xi, a }) =
            (beta.kind(), alpha.kind())
        else {
            unreachable!("psi_lt on non-psi terms")
        };
        let nu_v = self.seq_or_zero(nu.as_ref());
        let xi_v = self.seq_or_zero(xi.as_ref());
        let ba = self.cmp(b, a);
        if ba == Ordering::Less && self.lt(beta, kappa) {
            let mut set: KSet = [pi.clone(), b.clone()].into_iter().collect();
            set.extend(components_seq(&nu_v));
            if self.k_delta_set_below(alpha, &set, a) {
                return true;
            }
        }
        if ba != Ordering::Less {
            let mut set: KSet = [kappa.clone(), a.clone()].into_iter().collect();
            set.extend(components_seq(&xi_v));
            if self.k_delta_set_reaches(beta, &set, b) {
                return true;
            }
        }
        ba == Ordering::Equal
            && pi == kappa
            && self.k_delta_set_below(alpha, &components_seq(&nu_v), a)
            && self.lx_lt(&nu_v, &xi_v, 2).unwrap_or(false)
    }

    pub(crate) fn seq_or_zero(&self, s: Option<&crate::CoeffSeq>) -> Vec<ExponentTerm> {
        match s {
            Some(s) => s.entries().to_vec(),
            None => vec![ExponentTerm::Zero; self.params().seq_len()],
        }
    }

    /// The order on `E`, lexicographic over base-Λ normal forms.
    pub fn cmp_exp(&self, x: &ExponentTerm, y: &ExponentTerm) -> Ordering {
        match (x, y) {
            (ExponentTerm::Zero, ExponentTerm::Zero) => Ordering::Equal,
            (ExponentTerm::Zero, _) => Ordering::Less,
            (_, ExponentTerm::Zero) => Ordering::Greater,
            (ExponentTerm::Ord(a), ExponentTerm::Ord(b)) => self.cmp(a, b),
            (ExponentTerm::Ord(_), ExponentTerm::LamSum(_)) => Ordering::Less,
            (ExponentTerm::LamSum(_), ExponentTerm::Ord(_)) => Ordering::Greater,
            (ExponentTerm::LamSum(xs), ExponentTerm::LamSum(ys)) => {
                for (s, t) in xs.iter().zip(ys.iter()) {
                    let o = self
                        .cmp_exp(&s.exp, &t.exp)
                        .then_with(|| self.cmp(&s.coeff, &t.coeff));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                xs.len().cmp(&ys.len())
            }
        }
    }
}
