//! Term grammars for ordinal terms (`OT`, below Λ = ε_{K+1}) and exponent
//! terms (`E`, below ε(Λ)), plus structural size and predecessor chains.
//!
//! Terms are immutable, reference counted and hash-consed only in the weak
//! sense that every node caches its hash and size. Equality is structural.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::{OtError, Result};

/// The fixed integer `N >= 3`. Coefficient sequences have `N - 2` entries
/// carrying the logical indices `2..=N-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemParams {
    n: usize,
}

impl SystemParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(OtError::InvalidParams(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seq_len(&self) -> usize {
        self.n - 2
    }

    /// Logical indices of a coefficient sequence.
    pub fn indices(&self) -> RangeInclusive<usize> {
        2..=self.n - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrdKind {
    Zero,
    BigK,
    /// At least two principal parts, weakly decreasing.
    Sum(Vec<OrdinalTerm>),
    Veblen(OrdinalTerm, OrdinalTerm),
    /// ω^β for β > K.
    OmegaExp(OrdinalTerm),
    /// Ω_β for 0 < β < K.
    OmegaIdx(OrdinalTerm),
    /// ψ_π^ν(a). `nu == None` is the plain form ψ_π(a) with ν = 0⃗; an
    /// explicit sequence claims one of the Mahlo formation rules.
    Psi {
        pi: OrdinalTerm,
        nu: Option<CoeffSeq>,
        a: OrdinalTerm,
    },
}

#[derive(Debug)]
struct Node {
    kind: OrdKind,
    hash: u64,
    size: usize,
}

/// An ordinal term. Cheap to clone.
#[derive(Clone)]
pub struct OrdinalTerm(Arc<Node>);

impl PartialEq for OrdinalTerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for OrdinalTerm {}

impl Hash for OrdinalTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for OrdinalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for OrdinalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_ord(self))
    }
}

impl OrdinalTerm {
    fn from_kind(kind: OrdKind) -> Self {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let size = kind_size(&kind);
        OrdinalTerm(Arc::new(Node {
            kind,
            hash: h.finish(),
            size,
        }))
    }

    pub fn kind(&self) -> &OrdKind {
        &self.0.kind
    }

    pub fn zero() -> Self {
        Self::from_kind(OrdKind::Zero)
    }

    pub fn big_k() -> Self {
        Self::from_kind(OrdKind::BigK)
    }

    pub(crate) fn raw_sum(parts: Vec<OrdinalTerm>) -> Self {
        debug_assert!(parts.len() >= 2);
        Self::from_kind(OrdKind::Sum(parts))
    }

    /// Sum over principal parts; collapses to the single part or zero.
    pub(crate) fn from_parts(mut parts: Vec<OrdinalTerm>) -> Self {
        match parts.len() {
            0 => Self::zero(),
            1 => parts.pop().unwrap(),
            _ => Self::raw_sum(parts),
        }
    }

    pub(crate) fn raw_veblen(b: OrdinalTerm, g: OrdinalTerm) -> Self {
        Self::from_kind(OrdKind::Veblen(b, g))
    }

    pub(crate) fn raw_omega_exp(b: OrdinalTerm) -> Self {
        Self::from_kind(OrdKind::OmegaExp(b))
    }

    pub(crate) fn raw_omega_idx(b: OrdinalTerm) -> Self {
        Self::from_kind(OrdKind::OmegaIdx(b))
    }

    pub(crate) fn raw_psi(pi: OrdinalTerm, nu: Option<CoeffSeq>, a: OrdinalTerm) -> Self {
        Self::from_kind(OrdKind::Psi { pi, nu, a })
    }

    /// The canonical notation for 1, namely φ00.
    pub fn one() -> Self {
        Self::raw_veblen(Self::zero(), Self::zero())
    }

    /// The natural number `n` as a sum of `n` copies of φ00.
    pub fn nat(n: usize) -> Self {
        Self::from_parts(vec![Self::one(); n])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), OrdKind::Zero)
    }

    pub fn is_big_k(&self) -> bool {
        matches!(self.kind(), OrdKind::BigK)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), OrdKind::Veblen(b, g) if b.is_zero() && g.is_zero())
    }

    pub fn is_psi(&self) -> bool {
        matches!(self.kind(), OrdKind::Psi { .. })
    }

    /// Additively principal: anything but zero and sums.
    pub fn is_principal(&self) -> bool {
        !matches!(self.kind(), OrdKind::Zero | OrdKind::Sum(_))
    }

    /// Strongly critical terms below K: Ω- and ψ-terms.
    pub(crate) fn is_critical(&self) -> bool {
        matches!(self.kind(), OrdKind::OmegaIdx(_) | OrdKind::Psi { .. })
    }

    /// The principal parts of the additive normal form (empty for zero).
    pub fn parts(&self) -> &[OrdinalTerm] {
        match self.kind() {
            OrdKind::Zero => &[],
            OrdKind::Sum(ps) => ps,
            _ => std::slice::from_ref(self),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// If this term is a successor `γ + 1`, returns `γ`.
    pub fn predecessor(&self) -> Option<OrdinalTerm> {
        let ps = self.parts();
        match ps.last() {
            Some(last) if last.is_one() => Some(Self::from_parts(ps[..ps.len() - 1].to_vec())),
            _ => None,
        }
    }

    /// The subscript π of a ψ-term.
    pub fn pd(&self) -> Option<&OrdinalTerm> {
        match self.kind() {
            OrdKind::Psi { pi, .. } => Some(pi),
            _ => None,
        }
    }

    /// `pd^(k)`; `None` once a non-ψ term is reached before `k` steps.
    pub fn pd_iter(&self, k: usize) -> Option<OrdinalTerm> {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.pd()?.clone();
        }
        Some(cur)
    }

    /// `(π_0, …, π_L)` with `π_L = self`, `π_i = pd(π_{i+1})` and `π_0 = K`.
    pub fn collapsing_series(&self) -> Result<Vec<OrdinalTerm>> {
        if !self.is_psi() {
            return Err(OtError::MalformedChain(self.to_string()));
        }
        let mut chain = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(pi) = cur.pd() {
            let pi = pi.clone();
            chain.push(pi.clone());
            if pi.is_big_k() {
                chain.reverse();
                return Ok(chain);
            }
            if !pi.is_psi() {
                return Err(OtError::MalformedChain(pi.to_string()));
            }
            cur = pi;
        }
        unreachable!("loop only continues through psi-terms")
    }

    /// `self ≺ other`: `other = pd^(n)(self)` for some `n >= 1`.
    pub fn prec(&self, other: &OrdinalTerm) -> bool {
        let mut cur = self.pd();
        while let Some(t) = cur {
            if t == other {
                return true;
            }
            cur = t.pd();
        }
        false
    }

    pub fn prec_eq(&self, other: &OrdinalTerm) -> bool {
        self == other || self.prec(other)
    }

    /// The coefficient sequence recorded in a ψ-term (`None` for ν = 0⃗ or non-ψ).
    pub fn psi_nu(&self) -> Option<&CoeffSeq> {
        match self.kind() {
            OrdKind::Psi { nu, .. } => nu.as_ref(),
            _ => None,
        }
    }
}

fn kind_size(kind: &OrdKind) -> usize {
    match kind {
        OrdKind::Zero | OrdKind::BigK => 1,
        OrdKind::Sum(ps) => ps.iter().map(OrdinalTerm::size).sum::<usize>() + ps.len() - 1,
        OrdKind::Veblen(b, g) => 1 + b.size() + g.size(),
        OrdKind::OmegaExp(b) | OrdKind::OmegaIdx(b) => 1 + b.size(),
        OrdKind::Psi { pi, nu, a } => {
            1 + pi.size() + a.size() + nu.as_ref().map_or(0, CoeffSeq::size)
        }
    }
}

/// One summand `Λ^exp · coeff` of a base-Λ Cantor normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LamTerm {
    pub exp: ExponentTerm,
    pub coeff: OrdinalTerm,
}

/// An exponent term: zero, an ordinal term `a > 0` (read as `Λ^0·a`), or a
/// base-Λ sum `Λ^{ξ_m}b_m + ⋯ + Λ^{ξ_0}b_0` with `ξ_m > ⋯ > ξ_0 > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExponentTerm {
    Zero,
    Ord(OrdinalTerm),
    LamSum(Arc<[LamTerm]>),
}

impl fmt::Debug for ExponentTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExponentTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_exp(self))
    }
}

impl ExponentTerm {
    pub fn zero() -> Self {
        ExponentTerm::Zero
    }

    /// Wraps an ordinal term; zero maps to [`ExponentTerm::Zero`].
    pub fn ord(a: OrdinalTerm) -> Self {
        if a.is_zero() {
            ExponentTerm::Zero
        } else {
            ExponentTerm::Ord(a)
        }
    }

    /// `Λ^exp · coeff` as a single-summand term (`exp` may be zero).
    pub fn lam(exp: ExponentTerm, coeff: OrdinalTerm) -> Self {
        Self::from_cnf(vec![LamTerm { exp, coeff }]).expect("single summand is always representable")
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExponentTerm::Zero)
    }

    pub fn as_ord(&self) -> Option<&OrdinalTerm> {
        match self {
            ExponentTerm::Ord(a) => Some(a),
            _ => None,
        }
    }

    /// The base-Λ normal form as a summand list; `Ord(a)` is `[Λ^0·a]`.
    pub fn cnf(&self) -> Vec<LamTerm> {
        match self {
            ExponentTerm::Zero => Vec::new(),
            ExponentTerm::Ord(a) => vec![LamTerm {
                exp: ExponentTerm::Zero,
                coeff: a.clone(),
            }],
            ExponentTerm::LamSum(ts) => ts.to_vec(),
        }
    }

    pub fn cnf_len(&self) -> usize {
        match self {
            ExponentTerm::Zero => 0,
            ExponentTerm::Ord(_) => 1,
            ExponentTerm::LamSum(ts) => ts.len(),
        }
    }

    /// Rebuilds a term from summands. `None` when a `Λ^0` summand is not the
    /// only one (such values lie outside `E`).
    pub fn from_cnf(mut ts: Vec<LamTerm>) -> Option<Self> {
        match ts.len() {
            0 => Some(ExponentTerm::Zero),
            1 if ts[0].exp.is_zero() => Some(ExponentTerm::ord(ts.pop().unwrap().coeff)),
            _ if ts.iter().any(|t| t.exp.is_zero()) => None,
            _ => Some(ExponentTerm::LamSum(ts.into())),
        }
    }

    pub(crate) fn raw_lam_sum(ts: Vec<LamTerm>) -> Self {
        ExponentTerm::LamSum(ts.into())
    }

    pub fn size(&self) -> usize {
        match self {
            ExponentTerm::Zero => 1,
            ExponentTerm::Ord(a) => a.size(),
            ExponentTerm::LamSum(ts) => {
                ts.iter()
                    .map(|t| 1 + t.exp.size() + t.coeff.size())
                    .sum::<usize>()
                    + ts.len()
                    - 1
            }
        }
    }
}

/// Coefficient sequence `(ν_2, …, ν_{N-1})`; storage position 0 is logical index 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffSeq {
    entries: Vec<ExponentTerm>,
}

impl fmt::Debug for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_seq(self.entries()))
    }
}

impl CoeffSeq {
    pub fn new(entries: Vec<ExponentTerm>) -> Self {
        Self { entries }
    }

    pub fn zeros(params: SystemParams) -> Self {
        Self::new(vec![ExponentTerm::Zero; params.seq_len()])
    }

    /// `0⃗ * (b)`: zeros everywhere except the last entry.
    pub fn zeros_then(params: SystemParams, last: ExponentTerm) -> Self {
        let mut s = Self::zeros(params);
        *s.entries.last_mut().expect("N >= 3 gives a nonempty sequence") = last;
        s
    }

    pub fn entries(&self) -> &[ExponentTerm] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ExponentTerm> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at logical index `i` (2-based).
    pub fn get(&self, i: usize) -> Option<&ExponentTerm> {
        i.checked_sub(2).and_then(|p| self.entries.get(p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExponentTerm::is_zero)
    }

    /// Largest logical index holding a nonzero entry.
    pub fn last_nonzero_index(&self) -> Option<usize> {
        self.entries.iter().rposition(|e| !e.is_zero()).map(|p| p + 2)
    }

    pub fn size(&self) -> usize {
        self.entries.iter().map(ExponentTerm::size).sum()
    }
}

/// A finite, duplicate-free set of ordinal terms in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KSet {
    elems: Vec<OrdinalTerm>,
}

impl KSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: OrdinalTerm) -> bool {
        if self.elems.contains(&t) {
            false
        } else {
            self.elems.push(t);
            true
        }
    }

    pub fn extend(&mut self, other: KSet) {
        for t in other.elems {
            self.insert(t);
        }
    }

    pub fn contains(&self, t: &OrdinalTerm) -> bool {
        self.elems.contains(t)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &OrdinalTerm> {
        self.elems.iter()
    }

    pub fn into_vec(self) -> Vec<OrdinalTerm> {
        self.elems
    }
}

impl FromIterator<OrdinalTerm> for KSet {
    fn from_iter<I: IntoIterator<Item = OrdinalTerm>>(iter: I) -> Self {
        let mut s = KSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(pi: OrdinalTerm, nu: Option<CoeffSeq>, a: OrdinalTerm) -> OrdinalTerm {
        OrdinalTerm::raw_psi(pi, nu, a)
    }

    fn lam(e: ExponentTerm, c: OrdinalTerm) -> ExponentTerm {
        ExponentTerm::lam(e, c)
    }

    fn p4() -> SystemParams {
        SystemParams::new(4).unwrap()
    }

    // ψ_K^(0,1)(1)
    fn mahlo1() -> OrdinalTerm {
        let one = OrdinalTerm::one();
        psi(
            OrdinalTerm::big_k(),
            Some(CoeffSeq::zeros_then(p4(), ExponentTerm::ord(one.clone()))),
            one,
        )
    }

    // ψ_{ψ_K^(0,1)(1)}^(Λ^1·2, 0)(2)
    fn step_term() -> OrdinalTerm {
        let nu = CoeffSeq::new(vec![
            lam(ExponentTerm::ord(OrdinalTerm::one()), OrdinalTerm::nat(2)),
            ExponentTerm::Zero,
        ]);
        psi(mahlo1(), Some(nu), OrdinalTerm::nat(2))
    }

    #[test]
    fn params_reject_small_n() {
        assert!(SystemParams::new(2).is_err());
        assert_eq!(SystemParams::new(5).unwrap().seq_len(), 3);
    }

    #[test]
    fn sizes() {
        assert_eq!(OrdinalTerm::zero().size(), 1);
        assert_eq!(psi(OrdinalTerm::big_k(), None, OrdinalTerm::zero()).size(), 3);
        // φ00 = 3 symbols, 2 = φ00+φ00 = 7 symbols, Λ^1·2 = Λ + 3 + 7.
        assert_eq!(OrdinalTerm::one().size(), 3);
        assert_eq!(OrdinalTerm::nat(2).size(), 7);
        let l = lam(ExponentTerm::ord(OrdinalTerm::one()), OrdinalTerm::nat(2));
        assert_eq!(l.size(), 11);
        // ψ + K + [0, φ00] + φ00
        assert_eq!(mahlo1().size(), 1 + 1 + 1 + 3 + 3);
    }

    #[test]
    fn size_decreases_to_subterms() {
        let t = step_term();
        if let OrdKind::Psi { pi, a, .. } = t.kind() {
            assert!(pi.size() < t.size());
            assert!(a.size() < t.size());
        }
    }

    #[test]
    fn pd_and_series() {
        let k = OrdinalTerm::big_k();
        let base = psi(k.clone(), None, OrdinalTerm::zero());
        assert_eq!(base.pd(), Some(&k));
        assert_eq!(k.pd(), None);
        assert_eq!(step_term().pd(), Some(&mahlo1()));
        assert_eq!(base.collapsing_series().unwrap(), vec![k.clone(), base.clone()]);
        let s = step_term().collapsing_series().unwrap();
        assert_eq!(s.len() - 1, 2);
        assert_eq!(s[0], k);
        assert!(matches!(
            OrdinalTerm::raw_omega_idx(OrdinalTerm::one()).collapsing_series(),
            Err(OtError::MalformedChain(_))
        ));
        assert_eq!(step_term().pd_iter(2), Some(k.clone()));
        assert_eq!(step_term().pd_iter(3), None);
    }

    #[test]
    fn prec_relation() {
        let k = OrdinalTerm::big_k();
        let base = psi(k.clone(), None, OrdinalTerm::zero());
        assert!(base.prec(&k));
        assert!(!k.prec(&base));
        assert!(step_term().prec(&k));
        assert!(!base.prec(&base));
        assert!(base.prec_eq(&base));
    }

    #[test]
    fn predecessor_of_successors() {
        assert_eq!(OrdinalTerm::one().predecessor(), Some(OrdinalTerm::zero()));
        assert_eq!(OrdinalTerm::nat(3).predecessor(), Some(OrdinalTerm::nat(2)));
        assert_eq!(OrdinalTerm::big_k().predecessor(), None);
    }

    #[test]
    fn from_cnf_rejects_inner_lambda_zero() {
        let one = OrdinalTerm::one();
        let ts = vec![
            LamTerm { exp: ExponentTerm::ord(one.clone()), coeff: one.clone() },
            LamTerm { exp: ExponentTerm::Zero, coeff: one.clone() },
        ];
        assert!(ExponentTerm::from_cnf(ts).is_none());
        assert_eq!(
            ExponentTerm::from_cnf(vec![LamTerm { exp: ExponentTerm::Zero, coeff: one.clone() }]),
            Some(ExponentTerm::Ord(one))
        );
    }

    #[test]
    fn kset_dedupes() {
        let mut s = KSet::new();
        assert!(s.insert(OrdinalTerm::one()));
        assert!(!s.insert(OrdinalTerm::one()));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn coeff_seq_indices() {
        let s = CoeffSeq::zeros_then(p4(), ExponentTerm::ord(OrdinalTerm::one()));
        assert_eq!(s.get(2), Some(&ExponentTerm::Zero));
        assert!(s.get(3).unwrap().as_ord().is_some());
        assert_eq!(s.get(4), None);
        assert_eq!(s.last_nonzero_index(), Some(3));
        assert!(CoeffSeq::zeros(p4()).is_zero());
    }
}
