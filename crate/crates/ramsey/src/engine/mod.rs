//! Knowledge base of Ramsey-number bounds with rule closure and provenance.
//!
//! Facts are keyed by canonical [`Params`] and carry optional lower/upper
//! bounds as arbitrary-precision integers (the recurrences here reach
//! factorial scale). [`derive_closure`] tightens the base under a set of
//! inequality rules until nothing changes; every derived bound remembers the
//! rule and premises that produced it, so [`explain`] can replay the
//! derivation tree with its arithmetic.
//!
//! The base is single-writer: closure runs as one logical transaction over
//! `&mut KnowledgeBase`, and reads are freely shareable (`&KnowledgeBase`).

mod rules;

pub use rules::{derive_closure, RuleId, RuleSet};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::params::Params;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("no {kind} bound recorded for {params}")]
    MissingFact { params: Params, kind: BoundKind },
    #[error("{p1} is not reachable from {p2} by one off-diagonal move")]
    NotAdjacent { p1: Params, p2: Params },
    #[error("stored value for {kind} {params} does not reproduce under {rule}: {stored} vs {recomputed}")]
    ArithmeticMismatch {
        params: Params,
        kind: BoundKind,
        rule: RuleId,
        stored: BigUint,
        recomputed: BigUint,
    },
}

/// Which side of a bound a statement concerns.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BoundKind {
    Lower,
    Upper,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        })
    }
}

/// What an assertion claims: one side, or both at once.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AssertKind {
    Lower,
    Upper,
    Exact,
}

/// A premise reference inside a stored derivation: the fact it points at may
/// later improve, but at a closure fixpoint the recorded conclusion always
/// reproduces from the premises' current values (an improved premise would
/// have re-fired the rule).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Premise {
    pub params: Params,
    pub kind: BoundKind,
}

/// Where a stored bound came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Source {
    /// Asserted from outside, with a free-text citation (possibly empty).
    External { src: String },
    /// Concluded by a rule from zero or more premises (zero = axiom schema).
    Rule { rule: RuleId, premises: Vec<Premise> },
}

/// One side of a bound with its provenance. `depth` is 0 for external facts
/// and axioms, else one more than the deepest premise at recording time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundEntry {
    pub value: BigUint,
    pub source: Source,
    pub depth: u32,
}

/// Both known sides for one parameter list.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BoundFact {
    pub lower: Option<BoundEntry>,
    pub upper: Option<BoundEntry>,
}

impl BoundFact {
    pub fn bound(&self, kind: BoundKind) -> Option<&BoundEntry> {
        match kind {
            BoundKind::Lower => self.lower.as_ref(),
            BoundKind::Upper => self.upper.as_ref(),
        }
    }
}

/// Caps on the parameter lists closure may create: at most `max_r` colors,
/// no clique size above `max_k`. Externally asserted facts may exceed the
/// budget; derived ones never do.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Budget {
    pub max_r: usize,
    pub max_k: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_r: 10, max_k: 17 }
    }
}

impl Budget {
    pub fn admits(&self, p: &Params) -> bool {
        p.r() <= self.max_r && p.max_entry() <= self.max_k
    }
}

/// Toggleable assumptions. The off-diagonal move rule only fires when `dc`
/// is set; `dc_strict` sharpens it from "does not increase" to "strictly
/// decreases" and implies `dc`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Assumptions {
    pub dc: bool,
    pub dc_strict: bool,
}

impl Assumptions {
    pub fn dc_active(&self) -> bool {
        self.dc || self.dc_strict
    }
}

/// A lower bound exceeding an upper bound for the same parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Inconsistency {
    pub params: Params,
    pub lower: BigUint,
    pub upper: BigUint,
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inconsistent: {} has lower {} > upper {}",
            self.params, self.lower, self.upper
        )
    }
}

/// Counters from one closure run. `improved` counts every absorbed
/// conclusion (new entry or strictly better value); `created` is the subset
/// that introduced a parameter list not seen before. `budget_skipped` counts
/// conclusions dropped (silently) because their parameters exceed the budget.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ClosureStats {
    pub rounds: u32,
    pub created: u64,
    pub improved: u64,
    pub budget_skipped: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Absorb {
    Improved { created: bool },
    Dropped,
}

/// The fact store. Keys are canonical, so permuted parameter lists share an
/// entry; bounds only ever tighten (lower grows, upper shrinks).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KnowledgeBase {
    facts: BTreeMap<Params, BoundFact>,
    pub assumptions: Assumptions,
    pub budget: Budget,
    inconsistency: Option<Inconsistency>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        KnowledgeBase::default()
    }

    pub fn fact(&self, params: &Params) -> Option<&BoundFact> {
        self.facts.get(params)
    }

    pub fn facts(&self) -> impl Iterator<Item = (&Params, &BoundFact)> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// First lower > upper collision seen, if any. Asserting or deriving
    /// through an inconsistency never clears the flag.
    pub fn inconsistency(&self) -> Option<&Inconsistency> {
        self.inconsistency.as_ref()
    }

    /// Best known bounds under canonical lookup.
    pub fn best_bounds(&self, params: &Params) -> (Option<&BigUint>, Option<&BigUint>) {
        match self.facts.get(params) {
            None => (None, None),
            Some(f) => (
                f.lower.as_ref().map(|e| &e.value),
                f.upper.as_ref().map(|e| &e.value),
            ),
        }
    }

    /// Record an external bound. Updates are monotone: a lower bound only
    /// replaces a smaller one, an upper only a larger one; `Exact` asserts
    /// both sides. A lower bound crossing above an upper (or vice versa)
    /// flags the base as inconsistent rather than erroring.
    pub fn assert_fact(&mut self, params: Params, kind: AssertKind, value: BigUint, src: &str) {
        let source = Source::External { src: src.to_string() };
        match kind {
            AssertKind::Lower => {
                self.absorb(params, BoundKind::Lower, value, source);
            }
            AssertKind::Upper => {
                self.absorb(params, BoundKind::Upper, value, source);
            }
            AssertKind::Exact => {
                self.absorb(params.clone(), BoundKind::Lower, value.clone(), source.clone());
                self.absorb(params, BoundKind::Upper, value, source);
            }
        }
    }

    /// Monotone update shared by assertions and rule conclusions. Equal
    /// values are dropped, keeping the first derivation found.
    fn absorb(&mut self, params: Params, kind: BoundKind, value: BigUint, source: Source) -> Absorb {
        let depth = match &source {
            Source::External { .. } => 0,
            Source::Rule { premises, .. } => premises
                .iter()
                .filter_map(|p| self.facts.get(&p.params).and_then(|f| f.bound(p.kind)))
                .map(|e| e.depth)
                .max()
                .map_or(0, |d| d + 1),
        };
        let created = !self.facts.contains_key(&params);
        let fact = self.facts.entry(params.clone()).or_default();
        let slot = match kind {
            BoundKind::Lower => &mut fact.lower,
            BoundKind::Upper => &mut fact.upper,
        };
        let improves = match (&slot, kind) {
            (None, _) => true,
            (Some(cur), BoundKind::Lower) => value > cur.value,
            (Some(cur), BoundKind::Upper) => value < cur.value,
        };
        if !improves {
            if created {
                self.facts.remove(&params);
            }
            return Absorb::Dropped;
        }
        *slot = Some(BoundEntry { value, source, depth });
        if self.inconsistency.is_none() {
            if let (Some(lo), Some(hi)) = (&fact.lower, &fact.upper) {
                if lo.value > hi.value {
                    self.inconsistency = Some(Inconsistency {
                        params,
                        lower: lo.value.clone(),
                        upper: hi.value.clone(),
                    });
                }
            }
        }
        Absorb::Improved { created }
    }
}

/// One off-diagonal move: in canonical `p`, replace an entry pair `(a, b)`
/// with `a <= b` and `a >= 3` by `(a - 1, b + 1)`. Returns the distinct
/// results in canonical order.
pub fn dc_moves(p: &Params) -> Vec<Params> {
    let ks = p.ks();
    let mut out = std::collections::BTreeSet::new();
    for i in 0..ks.len() {
        for j in (i + 1)..ks.len() {
            let (a, b) = (ks[i], ks[j]);
            if a >= 3 {
                out.insert(
                    p.with_replaced(i, j, a - 1, b + 1)
                        .expect("entries stay >= 2"),
                );
            }
        }
    }
    out.into_iter().collect()
}

/// Status of one DC-adjacent pair under the current bounds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DcStatus {
    /// The moved-away lower bound exceeds the original's upper bound: the
    /// assumption is refuted by these facts.
    Contradiction,
    /// No contradiction, but the moved-away lower bound exceeds the
    /// original's — the known bounds point the other way.
    NotFollowed,
    Consistent,
}

impl fmt::Display for DcStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DcStatus::Contradiction => "contradiction",
            DcStatus::NotFollowed => "not-followed",
            DcStatus::Consistent => "consistent",
        })
    }
}

/// One row of a DC consistency report. `moved` is the off-diagonal side
/// (`P1`), `original` the starting parameters (`P2`); the bound snapshots
/// are those the status was judged on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DcReport {
    pub moved: Params,
    pub original: Params,
    pub status: DcStatus,
    pub moved_lower: Option<BigUint>,
    pub original_lower: Option<BigUint>,
    pub original_upper: Option<BigUint>,
}

/// Judge DC-adjacent pairs against the recorded bounds.
///
/// With `pairs = None`, every adjacent pair whose two parameter lists are
/// both present in the base (and within budget) is enumerated, ordered by
/// (original, moved). Explicit pairs are given as `(moved, original)` and
/// must be adjacent.
pub fn check_dc(
    kb: &KnowledgeBase,
    pairs: Option<&[(Params, Params)]>,
) -> Result<Vec<DcReport>, EngineError> {
    let mut list: Vec<(Params, Params)> = Vec::new();
    match pairs {
        Some(explicit) => {
            for (p1, p2) in explicit {
                if !dc_moves(p2).contains(p1) {
                    return Err(EngineError::NotAdjacent { p1: p1.clone(), p2: p2.clone() });
                }
                list.push((p1.clone(), p2.clone()));
            }
        }
        None => {
            for (p2, _) in kb.facts() {
                if !kb.budget.admits(p2) {
                    continue;
                }
                for p1 in dc_moves(p2) {
                    if kb.budget.admits(&p1) && kb.fact(&p1).is_some() {
                        list.push((p1, p2.clone()));
                    }
                }
            }
            list.sort_by(|x, y| (&x.1, &x.0).cmp(&(&y.1, &y.0)));
        }
    }
    Ok(list
        .into_iter()
        .map(|(p1, p2)| {
            let value = |p: &Params, k: BoundKind| {
                kb.fact(p).and_then(|f| f.bound(k)).map(|e| e.value.clone())
            };
            let moved_lower = value(&p1, BoundKind::Lower);
            let original_lower = value(&p2, BoundKind::Lower);
            let original_upper = value(&p2, BoundKind::Upper);
            let gt = |a: &Option<BigUint>, b: &Option<BigUint>| match (a, b) {
                (Some(x), Some(y)) => x > y,
                _ => false,
            };
            let status = if gt(&moved_lower, &original_upper) {
                DcStatus::Contradiction
            } else if gt(&moved_lower, &original_lower) {
                DcStatus::NotFollowed
            } else {
                DcStatus::Consistent
            };
            DcReport { moved: p1, original: p2, status, moved_lower, original_lower, original_upper }
        })
        .collect())
}

/// `x^(1/r)` with roughly 1e-12 relative accuracy for values of any size:
/// the top 53 bits give an exact mantissa and the rest enters through the
/// exponent, so precision does not degrade with magnitude.
pub fn nth_root_f64(x: &BigUint, r: usize) -> f64 {
    assert!(r >= 1);
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(53);
    let top = (x >> shift).to_f64().expect("53-bit value");
    let ln = top.ln() + shift as f64 * std::f64::consts::LN_2;
    (ln / r as f64).exp()
}

/// One row of a ratio report: decimal approximations of
/// `(bound - 1)^(1/r)` for the diagonal entry at `r` colors.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct RatioRow {
    pub r: usize,
    pub lower_root: Option<f64>,
    pub upper_root: Option<f64>,
}

/// Root-growth report for diagonal parameters `(k, ..., k)`: the sequence
/// `R - 1` is supermultiplicative in the color count, so the running best
/// `(lower - 1)^(1/r)` is itself a valid lower estimate of the limit rate.
#[derive(Clone, PartialEq, Debug)]
pub struct RatioReport {
    pub k: u32,
    pub rows: Vec<RatioRow>,
    pub sup_lower: Option<f64>,
}

/// Collect `(bound - 1)^(1/r)` for every diagonal fact on clique size `k`
/// with `r <= r_max`, plus the supremum over the lower column.
pub fn ratio_report(kb: &KnowledgeBase, k: u32, r_max: usize) -> RatioReport {
    assert!(k >= 2, "roots of one-entry parameters are not meaningful");
    let mut rows = Vec::new();
    let mut sup: Option<f64> = None;
    for r in 1..=r_max {
        let p = Params::diagonal(k, r);
        let Some(fact) = kb.fact(&p) else { continue };
        let root = |e: &BoundEntry| nth_root_f64(&(&e.value - 1u32), r);
        let lower_root = fact.lower.as_ref().map(root);
        let upper_root = fact.upper.as_ref().map(root);
        if let Some(lr) = lower_root {
            sup = Some(sup.map_or(lr, |s: f64| s.max(lr)));
        }
        rows.push(RatioRow { r, lower_root, upper_root });
    }
    RatioReport { k, rows, sup_lower: sup }
}

/// A replayed derivation tree: leaves are external sources or axiom rules,
/// inner nodes carry the rule and its premise subtrees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub params: Params,
    pub kind: BoundKind,
    pub value: BigUint,
    pub step: DerivationStep,
    pub depth: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DerivationStep {
    External { src: String },
    Rule { rule: RuleId, premises: Vec<Derivation> },
}

impl Derivation {
    fn render(&self, indent: usize, out: &mut String) {
        use std::fmt::Write;
        let rel = match self.kind {
            BoundKind::Lower => ">=",
            BoundKind::Upper => "<=",
        };
        let _ = write!(out, "{:indent$}{} {} {} {}", "", self.kind, self.params, rel, self.value);
        match &self.step {
            DerivationStep::External { src } if src.is_empty() => {
                let _ = writeln!(out, "  [external]");
            }
            DerivationStep::External { src } => {
                let _ = writeln!(out, "  [src=\"{src}\"]");
            }
            DerivationStep::Rule { rule, premises } => {
                let _ = writeln!(out, "  [{rule}]");
                for p in premises {
                    p.render(indent + 2, out);
                }
            }
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(s.trim_end_matches('\n'))
    }
}

/// Rebuild the derivation tree behind a stored bound, re-checking each
/// node's arithmetic against the premises' current values. Duplicate
/// premises (the same fact used for several summands) appear once.
pub fn explain(kb: &KnowledgeBase, params: &Params, kind: BoundKind) -> Result<Derivation, EngineError> {
    let entry = kb
        .fact(params)
        .and_then(|f| f.bound(kind))
        .ok_or_else(|| EngineError::MissingFact { params: params.clone(), kind })?;
    let (step, depth) = match &entry.source {
        Source::External { src } => (DerivationStep::External { src: src.clone() }, 0),
        Source::Rule { rule, premises } => {
            let recomputed = rules::replay(*rule, params, kind, premises, kb)?;
            if recomputed != entry.value {
                return Err(EngineError::ArithmeticMismatch {
                    params: params.clone(),
                    kind,
                    rule: *rule,
                    stored: entry.value.clone(),
                    recomputed,
                });
            }
            let mut seen = Vec::new();
            let mut children = Vec::new();
            for p in premises {
                if seen.contains(&(&p.params, p.kind)) {
                    continue;
                }
                seen.push((&p.params, p.kind));
                children.push(explain_premise(kb, p)?);
            }
            let depth = children.iter().map(|c| c.depth).max().map_or(0, |d| d + 1);
            (DerivationStep::Rule { rule: *rule, premises: children }, depth)
        }
    };
    Ok(Derivation { params: params.clone(), kind, value: entry.value.clone(), step, depth })
}

/// Premises normally point at stored facts; a one-entry premise `(k)` with no
/// stored fact is the definitional `R(k) = k`, rendered as a base-rule leaf.
fn explain_premise(kb: &KnowledgeBase, p: &Premise) -> Result<Derivation, EngineError> {
    if kb.fact(&p.params).and_then(|f| f.bound(p.kind)).is_some() {
        return explain(kb, &p.params, p.kind);
    }
    if let [k] = p.params.ks() {
        return Ok(Derivation {
            params: p.params.clone(),
            kind: p.kind,
            value: BigUint::from(*k),
            step: DerivationStep::Rule { rule: RuleId::Base, premises: Vec::new() },
            depth: 0,
        });
    }
    Err(EngineError::MissingFact { params: p.params.clone(), kind: p.kind })
}

/// Value of a premise for rule arithmetic: the stored bound, or the
/// definitional `R(k) = k` for an absent one-entry list.
pub(crate) fn premise_value(kb: &KnowledgeBase, p: &Premise) -> Option<BigUint> {
    if let Some(e) = kb.fact(&p.params).and_then(|f| f.bound(p.kind)) {
        return Some(e.value.clone());
    }
    match p.params.ks() {
        [k] => Some(BigUint::from(*k)),
        _ => None,
    }
}

pub(crate) fn big(v: u64) -> BigUint {
    BigUint::from(v)
}
