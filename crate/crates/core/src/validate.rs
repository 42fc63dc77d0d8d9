//! Membership in `OT` and `E`, the sets `K_δ`, coefficient sequences `m⃗`,
//! and formation-rule classification.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::cnf::{components, components_seq};
use crate::error::{OtError, Result};
use crate::term::{CoeffSeq, ExponentTerm, KSet, OrdKind, OrdinalTerm};
use crate::Notation;

/// The formation rule a term was matched against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Atom,
    Sum,
    Veblen,
    OmegaExp,
    OmegaIdx,
    /// ψ_π(a) with π regular.
    Psi9,
    /// ψ_K^{0⃗*(b)}(a).
    Psi10,
    /// ψ_π^ν(a) with ν_k = m_k(π) + Λ^{m_{k+1}(π)} b.
    Psi11,
    /// ψ_π^ν(a) with ν⃗ ∈ SD and ν⃗ <_sp m_2(π).
    Psi12,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Atom => "atom",
            Rule::Sum => "sum",
            Rule::Veblen => "veblen",
            Rule::OmegaExp => "omega-exp",
            Rule::OmegaIdx => "omega-idx",
            Rule::Psi9 => "psi-plain",
            Rule::Psi10 => "psi-k",
            Rule::Psi11 => "psi-step",
            Rule::Psi12 => "psi-sd",
        };
        f.write_str(s)
    }
}

/// One side condition of a formation rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub rule: Rule,
    pub checks: Vec<Check>,
    /// `m⃗` of the term; `None` for K and for failed reports.
    pub m_vec: Option<CoeffSeq>,
}

impl ValidationReport {
    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.pass).map(|c| c.name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: &'static str, pass: bool) -> bool {
        self.checks.push(Check {
            name,
            pass,
            witness: None,
        });
        pass
    }

    fn check_with(&mut self, name: &'static str, r: std::result::Result<(), String>) -> bool {
        let pass = r.is_ok();
        self.checks.push(Check {
            name,
            pass,
            witness: r.err(),
        });
        pass
    }

    fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn all_valid<'a>(
    o: &Notation,
    ts: impl IntoIterator<Item = &'a OrdinalTerm>,
) -> std::result::Result<(), String> {
    for t in ts {
        if !o.is_valid(t) {
            return Err(t.to_string());
        }
    }
    Ok(())
}

impl Notation {
    /// `K_δ(α)` for `δ` equal to 0, K or a ψ-term.
    pub fn k_delta(&self, delta: &OrdinalTerm, alpha: &OrdinalTerm) -> Result<KSet> {
        if !(delta.is_zero() || delta.is_big_k() || delta.is_psi()) {
            return Err(OtError::BadDelta(delta.to_string()));
        }
        let mut out = KSet::new();
        self.kd_into(delta, alpha, &mut out);
        Ok(out)
    }

    /// `K_δ` of every element of `set`.
    pub fn k_delta_set(&self, delta: &OrdinalTerm, set: &KSet) -> KSet {
        let mut out = KSet::new();
        for t in set.iter() {
            self.kd_into(delta, t, &mut out);
        }
        out
    }

    /// `K_δ(set) < γ`.
    pub fn k_delta_set_below(&self, delta: &OrdinalTerm, set: &KSet, gamma: &OrdinalTerm) -> bool {
        self.k_delta_set(delta, set).iter().all(|x| self.lt(x, gamma))
    }

    /// `β ≤ K_δ(set)`: some element reaches `β`.
    pub fn k_delta_set_reaches(&self, delta: &OrdinalTerm, set: &KSet, beta: &OrdinalTerm) -> bool {
        self.k_delta_set(delta, set).iter().any(|x| self.le(beta, x))
    }

    fn kd_into(&self, delta: &OrdinalTerm, alpha: &OrdinalTerm, out: &mut KSet) {
        match alpha.kind() {
            OrdKind::Zero | OrdKind::BigK => {}
            OrdKind::Sum(ps) => {
                for p in ps {
                    self.kd_into(delta, p, out);
                }
            }
            OrdKind::Veblen(b, g) => {
                self.kd_into(delta, b, out);
                self.kd_into(delta, g, out);
            }
            OrdKind::OmegaExp(b) | OrdKind::OmegaIdx(b) => self.kd_into(delta, b, out),
            OrdKind::Psi { pi, nu, a } => {
                if self.lt(alpha, delta) {
                    return;
                }
                out.insert(a.clone());
                self.kd_into(delta, a, out);
                self.kd_into(delta, pi, out);
                if let Some(nu) = nu {
                    for c in components_seq(nu.entries()).iter() {
                        self.kd_into(delta, c, out);
                    }
                }
            }
        }
    }

    /// `α ∈ H_γ(δ)`, read as `K_δ(α) < γ`.
    pub fn hull_member(&self, gamma: &OrdinalTerm, delta: &OrdinalTerm, alpha: &OrdinalTerm) -> Result<bool> {
        Ok(self.k_delta(delta, alpha)?.iter().all(|x| self.lt(x, gamma)))
    }

    /// `m⃗(α)`; `None` for K, which every rule treats separately.
    pub fn m_vec(&self, alpha: &OrdinalTerm) -> Option<CoeffSeq> {
        let p = self.params();
        match alpha.kind() {
            OrdKind::BigK => None,
            OrdKind::OmegaIdx(b) if b.predecessor().is_some() => {
                let mut v = vec![ExponentTerm::Zero; p.seq_len()];
                v[0] = ExponentTerm::ord(OrdinalTerm::one());
                Some(CoeffSeq::new(v))
            }
            OrdKind::Psi { nu: Some(nu), .. } => Some(nu.clone()),
            _ => Some(CoeffSeq::zeros(p)),
        }
    }

    /// Regular terms: K, Ω_{β+1}, and ψ-terms with nonzero `m⃗`.
    pub fn is_regular(&self, t: &OrdinalTerm) -> bool {
        self.m_vec(t).is_none_or(|m| !m.is_zero())
    }

    pub fn is_valid(&self, t: &OrdinalTerm) -> bool {
        self.validate(t).ok
    }

    /// Membership in `E`.
    pub fn is_valid_exp(&self, x: &ExponentTerm) -> bool {
        self.check_exp(x).is_ok()
    }

    fn check_exp(&self, x: &ExponentTerm) -> std::result::Result<(), String> {
        match x {
            ExponentTerm::Zero => Ok(()),
            ExponentTerm::Ord(a) => {
                if a.is_zero() {
                    Err("0 wrapped as an exponent".into())
                } else {
                    all_valid(self, [a])
                }
            }
            ExponentTerm::LamSum(ts) => {
                if ts.is_empty() {
                    return Err("empty Λ-sum".into());
                }
                for t in ts.iter() {
                    if t.exp.is_zero() || t.coeff.is_zero() {
                        return Err(x.to_string());
                    }
                    self.check_exp(&t.exp)?;
                    all_valid(self, [&t.coeff])?;
                }
                for w in ts.windows(2) {
                    if self.cmp_exp(&w[0].exp, &w[1].exp) != Ordering::Greater {
                        return Err(x.to_string());
                    }
                }
                Ok(())
            }
        }
    }

    /// The full validation report for `α`.
    pub fn check_ot(&self, alpha: &OrdinalTerm) -> ValidationReport {
        (*self.validate(alpha)).clone()
    }

    /// Cached validation.
    pub fn validate(&self, alpha: &OrdinalTerm) -> Arc<ValidationReport> {
        if let Some(r) = self.reports.get(alpha) {
            return r.clone();
        }
        let r = Arc::new(self.build_report(alpha));
        self.reports.insert(alpha.clone(), r.clone());
        r
    }

    fn build_report(&self, alpha: &OrdinalTerm) -> ValidationReport {
        let mut b = Builder::new();
        let k = OrdinalTerm::big_k();
        let rule = match alpha.kind() {
            OrdKind::Zero | OrdKind::BigK => Rule::Atom,
            OrdKind::Sum(ps) => {
                b.check_with("parts in OT", all_valid(self, ps));
                b.check("parts principal", ps.len() >= 2 && ps.iter().all(OrdinalTerm::is_principal));
                b.check(
                    "parts weakly decreasing",
                    ps.windows(2).all(|w| self.le(&w[1], &w[0])),
                );
                Rule::Sum
            }
            OrdKind::Veblen(x, y) => {
                b.check_with("args in OT", all_valid(self, [x, y]));
                b.check("args below K", self.lt(x, &k) && self.lt(y, &k));
                b.check("args below phi", self.lt(x, alpha) && self.lt(y, alpha));
                Rule::Veblen
            }
            OrdKind::OmegaExp(x) => {
                b.check_with("exponent in OT", all_valid(self, [x]));
                b.check("K<b", self.lt(&k, x));
                b.check("b<w^b", self.lt(x, alpha));
                Rule::OmegaExp
            }
            OrdKind::OmegaIdx(x) => {
                b.check_with("index in OT", all_valid(self, [x]));
                b.check("0<b", !x.is_zero());
                b.check("b<K", self.lt(x, &k));
                b.check("b<Om(b)", self.lt(x, alpha));
                Rule::OmegaIdx
            }
            OrdKind::Psi { pi, nu, a } => self.check_psi(&mut b, alpha, pi, nu.as_ref(), a),
        };
        let ok = b.ok();
        ValidationReport {
            ok,
            rule,
            checks: b.checks,
            m_vec: if ok { self.m_vec(alpha) } else { None },
        }
    }

    fn check_psi(
        &self,
        b: &mut Builder,
        alpha: &OrdinalTerm,
        pi: &OrdinalTerm,
        nu: Option<&CoeffSeq>,
        a: &OrdinalTerm,
    ) -> Rule {
        let p = self.params();
        b.check_with("pi in OT", all_valid(self, [pi]));
        b.check_with("a in OT", all_valid(self, [a]));
        let Some(nu) = nu else {
            b.check("pi regular", self.is_regular(pi));
            let set: KSet = [pi.clone(), a.clone()].into_iter().collect();
            b.check_with("K_a(pi,a)<a", self.kset_below(alpha, &set, a));
            return Rule::Psi9;
        };
        if !b.check("lh(nu)=N-2", nu.len() == p.seq_len()) {
            return if pi.is_big_k() { Rule::Psi10 } else { Rule::Psi12 };
        }
        let nu_in_e = nu
            .entries()
            .iter()
            .try_for_each(|x| self.check_exp(x));
        b.check_with("nu in E", nu_in_e);

        if pi.is_big_k() {
            let (init, last) = nu.entries().split_at(p.seq_len() - 1);
            b.check("nu=0*(b)", init.iter().all(ExponentTerm::is_zero));
            let bb = match &last[0] {
                ExponentTerm::Zero => Some(OrdinalTerm::zero()),
                ExponentTerm::Ord(x) => Some(x.clone()),
                ExponentTerm::LamSum(_) => None,
            };
            if !b.check("b in OT", bb.is_some()) {
                return Rule::Psi10;
            }
            let bb = bb.unwrap();
            b.check("0<b", !bb.is_zero());
            b.check("b<=a", self.le(&bb, a));
            let set: KSet = [bb, a.clone()].into_iter().collect();
            b.check_with("K_a(b,a)<a", self.kset_below(alpha, &set, a));
            return Rule::Psi10;
        }

        b.check("pi<K", self.lt(pi, &OrdinalTerm::big_k()));
        let m_pi = self.m_vec(pi).unwrap_or_else(|| CoeffSeq::zeros(p));
        match m_pi.last_nonzero_index() {
            Some(j) if j >= 3 => {
                self.check_psi_step(b, alpha, pi, &m_pi, j - 1, nu, a);
                Rule::Psi11
            }
            j => {
                b.check("m_2(pi)!=0", j == Some(2));
                if j == Some(2) {
                    self.check_psi_sd(b, alpha, pi, &m_pi, nu, a);
                }
                Rule::Psi12
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_psi_step(
        &self,
        b: &mut Builder,
        alpha: &OrdinalTerm,
        pi: &OrdinalTerm,
        m_pi: &CoeffSeq,
        k: usize,
        nu: &CoeffSeq,
        a: &OrdinalTerm,
    ) {
        let (pk, n) = (k - 2, nu.len());
        let m = m_pi.entries();
        let v = nu.entries();
        b.check("nu_i=m_i(pi) for i<k", v[..pk] == m[..pk]);
        b.check("nu_i=0 for i>k", v[pk + 1..n].iter().all(ExponentTerm::is_zero));
        let recovered = self.recover_step_coeff(&m[pk], &m[pk + 1], &v[pk]);
        let Some(bb) = recovered else {
            b.check_with(
                "nu_k=m_k(pi)+L^(m_{k+1}(pi))b",
                Err(v[pk].to_string()),
            );
            return;
        };
        b.check("nu_k=m_k(pi)+L^(m_{k+1}(pi))b", true);
        b.check("0<b", !bb.is_zero());
        b.check("b<=a", self.le(&bb, a));
        let mut set: KSet = [pi.clone(), a.clone(), bb].into_iter().collect();
        set.extend(components_seq(m));
        b.check_with("K_a(pi,a,b)+K_a(K(m(pi)))<a", self.kset_below(alpha, &set, a));
    }

    /// Recovers `b` from `ν_k = m_k + Λ^e·b`, if the equation has a solution.
    fn recover_step_coeff(
        &self,
        mk: &ExponentTerm,
        e: &ExponentTerm,
        nuk: &ExponentTerm,
    ) -> Option<OrdinalTerm> {
        let last = nuk.cnf().pop()?;
        if &last.exp != e {
            return None;
        }
        let same_exp = mk.cnf().into_iter().find(|t| &t.exp == e);
        let bb = match same_exp {
            Some(c) => self.left_sub(&c.coeff, &last.coeff)?,
            None => last.coeff,
        };
        let rebuilt = self.exp_add(mk, &ExponentTerm::lam(e.clone(), bb.clone()))?;
        (&rebuilt == nuk).then_some(bb)
    }

    fn check_psi_sd(
        &self,
        b: &mut Builder,
        alpha: &OrdinalTerm,
        pi: &OrdinalTerm,
        m_pi: &CoeffSeq,
        nu: &CoeffSeq,
        a: &OrdinalTerm,
    ) {
        let v = nu.entries();
        b.check("nu!=0", !nu.is_zero());
        b.check("nu in SD", self.in_sd(v).is_some());
        let m2 = &m_pi.entries()[0];
        b.check("nu<_sp m_2(pi)", self.vec_sp(v, m2));
        let set: KSet = [pi.clone(), a.clone()].into_iter().collect();
        b.check_with("K_a(pi,a)<a", self.kset_below(alpha, &set, a));
        let eq15 = v.iter().filter(|x| !x.is_zero()).try_for_each(|x| {
            let ks = components(x);
            let top = ks
                .iter()
                .max_by(|s, t| self.cmp(s, t))
                .expect("nonzero exponent has components")
                .clone();
            self.kset_below(alpha, &ks, &top)
        });
        b.check_with("K_a(nu_k)<max K(nu_k)", eq15);
        let bound = components_seq(v)
            .iter()
            .find(|c| self.lt(a, c))
            .map(|c| c.to_string());
        b.check_with("max K(nu)<=a", bound.map_or(Ok(()), Err));
    }

    fn kset_below(
        &self,
        delta: &OrdinalTerm,
        set: &KSet,
        gamma: &OrdinalTerm,
    ) -> std::result::Result<(), String> {
        match self.k_delta_set(delta, set).iter().find(|x| !self.lt(x, gamma)) {
            Some(x) => Err(x.to_string()),
            None => Ok(()),
        }
    }

    /// Checks that the formation rule of a Mahlo term matches its
    /// collapsing-series length `L`.
    pub fn rule_vs_series(&self, alpha: &OrdinalTerm) -> Result<bool> {
        let is_mahlo = matches!(alpha.kind(), OrdKind::Psi { nu: Some(nu), .. } if !nu.is_zero());
        if !is_mahlo {
            return Err(OtError::NotMahloTerm(alpha.to_string()));
        }
        let report = self.validate(alpha);
        if !report.ok {
            return Err(OtError::UnvalidatedInput(alpha.to_string()));
        }
        let l = alpha.collapsing_series()?.len() - 1;
        let period = self.params().seq_len();
        let expected = if l == 1 {
            Rule::Psi10
        } else if (l - 1) % period == 0 {
            Rule::Psi12
        } else {
            Rule::Psi11
        };
        Ok(report.rule == expected)
    }
}
