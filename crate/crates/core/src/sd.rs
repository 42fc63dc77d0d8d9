//! The class SD of coefficient sequences: derivation search, replay, and
//! the necessary conditions every member satisfies.

use std::fmt;
use std::sync::Arc;

use crate::cnf::{drop_tail, te, te_iter};
use crate::term::{ExponentTerm, OrdinalTerm};
use crate::Notation;

/// Which conclusion of the extension rule was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `(ξ_2,…,ξ_{k-1}, ξ_k + Λ^ζ a, ξ_{k+1},…)`.
    KeepTail,
    /// `(ξ_2,…,ξ_{k-1}, ξ_k + Λ^ζ a)*0⃗`.
    ZeroTail,
}

/// A derivation tree for membership in SD.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SdDerivation {
    /// `0⃗*(a)` with `a < Λ`.
    Base { len: usize, a: ExponentTerm },
    /// Adds `Λ^ζ·coeff` at logical index `k` of the main premise; `side`
    /// derives `(ξ_2,…,ξ_k,ζ)*0⃗`.
    Extend {
        k: usize,
        zeta: ExponentTerm,
        coeff: OrdinalTerm,
        variant: Variant,
        main: Arc<SdDerivation>,
        side: Arc<SdDerivation>,
    },
}

impl SdDerivation {
    /// Rebuilds the derived sequence, re-checking every rule application.
    pub fn replay(&self, o: &Notation) -> Option<Vec<ExponentTerm>> {
        match self {
            SdDerivation::Base { len, a } => {
                if *len == 0 || matches!(a, ExponentTerm::LamSum(_)) {
                    return None;
                }
                let mut v = vec![ExponentTerm::Zero; *len];
                v[len - 1] = a.clone();
                Some(v)
            }
            SdDerivation::Extend {
                k,
                zeta,
                coeff,
                variant,
                main,
                side,
            } => {
                let xi = main.replay(o)?;
                let pk = k.checked_sub(2)?;
                if pk + 1 >= xi.len() || coeff.is_zero() {
                    return None;
                }
                let mut expect_side = xi[..=pk].to_vec();
                expect_side.push(zeta.clone());
                expect_side.resize(xi.len(), ExponentTerm::Zero);
                if side.replay(o)? != expect_side || !o.vec_step_down(&xi[pk + 1..], zeta) {
                    return None;
                }
                let mut out = xi.clone();
                out[pk] = o.exp_add(&xi[pk], &ExponentTerm::lam(zeta.clone(), coeff.clone()))?;
                if *variant == Variant::ZeroTail {
                    for e in &mut out[pk + 1..] {
                        *e = ExponentTerm::Zero;
                    }
                }
                Some(out)
            }
        }
    }

    /// The rule applications in pre-order, one line each.
    pub fn steps(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.push_steps(0, &mut out);
        out
    }

    fn push_steps(&self, depth: usize, out: &mut Vec<String>) {
        let pad = "  ".repeat(depth);
        match self {
            SdDerivation::Base { len, a } => {
                let mut v = vec!["0".to_string(); *len];
                v[len - 1] = a.to_string();
                out.push(format!("{pad}base [{}]", v.join(",")));
            }
            SdDerivation::Extend {
                k,
                zeta,
                coeff,
                variant,
                main,
                side,
            } => {
                let tag = match variant {
                    Variant::KeepTail => "keep-tail",
                    Variant::ZeroTail => "zero-tail",
                };
                out.push(format!("{pad}extend k={k} zeta={zeta} a={coeff} {tag}"));
                main.push_steps(depth + 1, out);
                side.push_steps(depth + 1, out);
            }
        }
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        match self {
            SdDerivation::Base { .. } => 1,
            SdDerivation::Extend { main, side, .. } => 1 + main.size() + side.size(),
        }
    }
}

/// The four necessary conditions for membership in SD.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SdConditions {
    pub prefixes_in_sd: bool,
    pub no_zero_gap: bool,
    pub tail_step_down: bool,
    pub irreducible: bool,
}

impl SdConditions {
    pub fn all(&self) -> bool {
        self.prefixes_in_sd && self.no_zero_gap && self.tail_step_down && self.irreducible
    }
}

impl fmt::Display for SdConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "prefixes={} no-gap={} tail-step-down={} irreducible={}",
            self.prefixes_in_sd, self.no_zero_gap, self.tail_step_down, self.irreducible
        )
    }
}

impl Notation {
    /// A derivation of `ξ⃗ ∈ SD`, or `None`.
    pub fn in_sd(&self, xi: &[ExponentTerm]) -> Option<Arc<SdDerivation>> {
        if let Some(r) = self.sd.get(xi) {
            return r.clone();
        }
        let r = self.search_sd(xi).map(Arc::new);
        self.sd.insert(xi.to_vec(), r.clone());
        r
    }

    fn search_sd(&self, g: &[ExponentTerm]) -> Option<SdDerivation> {
        let len = g.len();
        let last = g.last()?;
        if g[..len - 1].iter().all(ExponentTerm::is_zero) && !matches!(last, ExponentTerm::LamSum(_)) {
            return Some(SdDerivation::Base {
                len,
                a: last.clone(),
            });
        }
        for pk in 0..len - 1 {
            let Some(tl) = g[pk].cnf().pop() else {
                continue;
            };
            if tl.exp.is_zero() {
                continue;
            }
            let zeta = tl.exp;
            let xi_k = drop_tail(&g[pk]);
            let mut side_seq = g[..pk].to_vec();
            side_seq.push(xi_k.clone());
            side_seq.push(zeta.clone());
            side_seq.resize(len, ExponentTerm::Zero);

            let mut tails = vec![(Variant::KeepTail, g[pk + 1..].to_vec())];
            if g[pk + 1..].iter().all(ExponentTerm::is_zero) {
                for t in zero_tail_candidates(&zeta, len - pk - 1) {
                    tails.push((Variant::ZeroTail, t));
                }
            }
            for (variant, tail) in tails {
                if !self.vec_step_down(&tail, &zeta) {
                    continue;
                }
                let mut main_seq = g[..pk].to_vec();
                main_seq.push(xi_k.clone());
                main_seq.extend(tail);
                let Some(main) = self.in_sd(&main_seq) else {
                    continue;
                };
                let Some(side) = self.in_sd(&side_seq) else {
                    break;
                };
                return Some(SdDerivation::Extend {
                    k: pk + 2,
                    zeta,
                    coeff: tl.coeff,
                    variant,
                    main,
                    side,
                });
            }
        }
        None
    }

    /// Checks the four necessary conditions for `ξ⃗ ∈ SD`.
    pub fn sd_necessary_conditions(&self, xi: &[ExponentTerm]) -> SdConditions {
        let len = xi.len();
        let prefixes_in_sd = (1..=len).all(|i| {
            let mut p = xi[..i].to_vec();
            p.resize(len, ExponentTerm::Zero);
            self.in_sd(&p).is_some()
        });
        let nz: Vec<usize> = (0..len).filter(|&i| !xi[i].is_zero()).collect();
        let no_zero_gap = nz.windows(2).all(|w| w[1] == w[0] + 1);
        let tail_step_down = (0..len).all(|i| match te(&xi[i]) {
            Ok(t) => self.vec_step_down(&xi[i + 1..], &t),
            Err(_) => true,
        });
        SdConditions {
            prefixes_in_sd,
            no_zero_gap,
            tail_step_down,
            irreducible: self.irreducible(xi),
        }
    }
}

/// Tails `(T_1,…,T_ℓ)*0⃗` with `T_j = ζ^{(j-1)} - Tl(ζ^{(j-1)})` for the
/// iterated tail exponents `ζ^{(j)}` of `ζ`; these are the least tails
/// that step down from `ζ`.
fn zero_tail_candidates(zeta: &ExponentTerm, width: usize) -> Vec<Vec<ExponentTerm>> {
    let mut out = Vec::new();
    for l in 1..=width {
        let mut t = Vec::with_capacity(width);
        for j in 0..l {
            match te_iter(zeta, j) {
                Ok(x) => t.push(drop_tail(&x)),
                Err(_) => break,
            }
        }
        if t.len() < l || t.iter().all(ExponentTerm::is_zero) {
            continue;
        }
        t.resize(width, ExponentTerm::Zero);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}
