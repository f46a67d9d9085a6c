//! The inequality rules and the budgeted fixpoint loop.
//!
//! Each rule reads the current fact store and emits `(params, kind, value,
//! source)` conclusions; the store absorbs an emission only when it strictly
//! tightens a bound, so the loop terminates on the finite budget lattice and
//! the fixpoint values are independent of rule order (every rule is monotone
//! in its premises).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{CheckedSub, One, Signed, Zero};

use crate::params::Params;

use super::{
    big, premise_value, Absorb, BoundKind, Budget, ClosureStats, EngineError, KnowledgeBase,
    Premise, Source,
};

/// The ten inequality rules. Short names (for `--rules` flags and display)
/// are listed on each variant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleId {
    /// `base`: R(k) = k for one color; R(2, rest) = R(rest).
    Base,
    /// `mono`: every bound is nondecreasing in each entry.
    Mono,
    /// `es`: R(k_1..k_r) <= 2 - r + sum_i R(.., k_i - 1, ..), the classical
    /// induction on neighborhoods; grounds at one- and two-entry base cases.
    Es,
    /// `abbott`: R(k_1..k_r) >= (R(k_1..k_i) - 1)(R(k_{i+1}..k_r) - 1) + 1
    /// for every split point of the sorted list.
    Abbott,
    /// `diagprod`: R_r(s*t + 1) >= (R_r(s+1) - 1)(R_r(t+1) - 1) + 1 on
    /// diagonal parameters.
    DiagProd,
    /// `power`: R_r(k) >= (k - 1)^r + 1.
    Power,
    /// `2r`: R_r(3) >= 2^r + 1.
    TwoR,
    /// `r3cf`: R_r(3) <= floor((e - 1/6) r!) + 1 for r >= 4.
    R3cf,
    /// `befs`: R(4,t) >= R(3,t) + 2t - 3.
    Befs,
    /// `dc`: off-diagonal moves; fires only under the DC assumption.
    Dc,
}

impl RuleId {
    /// All rules in canonical order.
    pub const ALL: [RuleId; 10] = [
        RuleId::Base,
        RuleId::Mono,
        RuleId::Es,
        RuleId::Abbott,
        RuleId::DiagProd,
        RuleId::Power,
        RuleId::TwoR,
        RuleId::R3cf,
        RuleId::Befs,
        RuleId::Dc,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            RuleId::Base => "base",
            RuleId::Mono => "mono",
            RuleId::Es => "es",
            RuleId::Abbott => "abbott",
            RuleId::DiagProd => "diagprod",
            RuleId::Power => "power",
            RuleId::TwoR => "2r",
            RuleId::R3cf => "r3cf",
            RuleId::Befs => "befs",
            RuleId::Dc => "dc",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleId::Base => "R-base",
            RuleId::Mono => "R-mono",
            RuleId::Es => "R-ES",
            RuleId::Abbott => "R-abbott",
            RuleId::DiagProd => "R-diagprod",
            RuleId::Power => "R-power",
            RuleId::TwoR => "R-2r",
            RuleId::R3cf => "R-r3cf",
            RuleId::Befs => "R-befs",
            RuleId::Dc => "R-dc",
        })
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.short_name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = RuleId::ALL.iter().map(|r| r.short_name()).collect();
                format!("unknown rule {s:?}; available: {}", names.join(", "))
            })
    }
}

/// An ordered, duplicate-free selection of rules plus rule options. The
/// application order never changes fixpoint values, only which provenance
/// gets recorded first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleSet {
    order: Vec<RuleId>,
    /// Two-color sharpening of `es`: subtract one more when both summands
    /// are even. Off by default.
    pub es_even: bool,
}

impl RuleSet {
    pub fn new(rules: &[RuleId]) -> RuleSet {
        let mut order = Vec::new();
        for &r in rules {
            if !order.contains(&r) {
                order.push(r);
            }
        }
        RuleSet { order, es_even: false }
    }

    /// Every rule, canonical order.
    pub fn all() -> RuleSet {
        RuleSet::new(&RuleId::ALL)
    }

    pub fn contains(&self, rule: RuleId) -> bool {
        self.order.contains(&rule)
    }

    pub fn iter(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.order.iter().copied()
    }
}

type Emission = (Params, BoundKind, BigUint, Source);

/// Run the rules to a fixpoint under `budget`. The budget is stored on the
/// base (it also scopes later DC-pair enumeration); conclusions outside it
/// are skipped and counted, never created. Re-running with the same inputs
/// changes nothing.
///
/// A contradictory base has no fixpoint to reach: the product rules can feed
/// a bound that crosses its opposite back into itself and grow it without
/// limit. Deriving therefore stops as soon as the inconsistency flag goes up
/// (or immediately, if it was already set), leaving whatever was absorbed so
/// far in place for the caller to report alongside the contradiction.
pub fn derive_closure(kb: &mut KnowledgeBase, rules: &RuleSet, budget: Budget) -> ClosureStats {
    kb.budget = budget;
    let mut stats = ClosureStats::default();
    'sweep: while kb.inconsistency().is_none() {
        let mut changed = false;
        for rule in rules.iter() {
            if rule == RuleId::Dc && !kb.assumptions.dc_active() {
                continue;
            }
            for (params, kind, value, source) in generate(rule, kb, rules, &stats) {
                if !kb.budget.admits(&params) {
                    stats.budget_skipped += 1;
                    continue;
                }
                if let Absorb::Improved { created } = kb.absorb(params, kind, value, source) {
                    changed = true;
                    stats.improved += 1;
                    if created {
                        stats.created += 1;
                    }
                    if kb.inconsistency().is_some() {
                        stats.rounds += 1;
                        break 'sweep;
                    }
                }
            }
        }
        stats.rounds += 1;
        if !changed {
            break;
        }
        assert!(stats.rounds < 100_000, "closure failed to stabilize");
    }
    stats
}

fn generate(rule: RuleId, kb: &KnowledgeBase, rules: &RuleSet, stats: &ClosureStats) -> Vec<Emission> {
    let first_round = stats.rounds == 0;
    match rule {
        RuleId::Base => gen_base(kb, first_round),
        RuleId::Mono => gen_mono(kb),
        RuleId::Es => gen_es(kb, rules.es_even),
        RuleId::Abbott => gen_abbott(kb),
        RuleId::DiagProd => gen_diagprod(kb),
        RuleId::Power => axiom_diag(
            kb,
            first_round,
            (2..=kb.budget.max_k).collect(),
            RuleId::Power,
            |k, r| big(u64::from(k) - 1).pow(r as u32) + 1u32,
        ),
        RuleId::TwoR => axiom_diag(
            kb,
            first_round,
            if kb.budget.max_k >= 3 { vec![3] } else { vec![] },
            RuleId::TwoR,
            |_k, r| big(2).pow(r as u32) + 1u32,
        ),
        RuleId::R3cf => {
            if !first_round {
                return Vec::new();
            }
            let mut out = Vec::new();
            if kb.budget.max_k >= 3 {
                for r in 4..=kb.budget.max_r {
                    out.push((
                        Params::diagonal(3, r),
                        BoundKind::Upper,
                        floor_e_sixth_factorial(r) + 1u32,
                        Source::Rule { rule: RuleId::R3cf, premises: Vec::new() },
                    ));
                }
            }
            out
        }
        RuleId::Befs => gen_befs(kb),
        RuleId::Dc => gen_dc(kb),
    }
}

/// Lower-bound axiom schemas over diagonal parameters, emitted once on the
/// first round for the given entry values.
fn axiom_diag(
    kb: &KnowledgeBase,
    first_round: bool,
    ks: Vec<u32>,
    rule: RuleId,
    value: impl Fn(u32, usize) -> BigUint,
) -> Vec<Emission> {
    if !first_round {
        return Vec::new();
    }
    let mut out = Vec::new();
    for r in 1..=kb.budget.max_r {
        for &k in &ks {
            out.push((
                Params::diagonal(k, r),
                BoundKind::Lower,
                value(k, r),
                Source::Rule { rule, premises: Vec::new() },
            ));
        }
    }
    out
}

fn gen_base(kb: &KnowledgeBase, first_round: bool) -> Vec<Emission> {
    let mut out = Vec::new();
    if first_round {
        for k in 2..=kb.budget.max_k {
            let src = Source::Rule { rule: RuleId::Base, premises: Vec::new() };
            let p = Params::new(&[k]).expect("k >= 2");
            out.push((p.clone(), BoundKind::Lower, big(u64::from(k)), src.clone()));
            out.push((p, BoundKind::Upper, big(u64::from(k)), src));
        }
    }
    // R(2, rest) = R(rest): propagate both sides in both directions between a
    // key containing a 2 and the key with one 2 removed.
    for (p, f) in kb.facts() {
        if p.r() < 2 {
            continue;
        }
        let Some(i) = p.ks().iter().position(|&k| k == 2) else { continue };
        let q = p.without_index(i).expect("r >= 2");
        for kind in [BoundKind::Lower, BoundKind::Upper] {
            if let Some(e) = f.bound(kind) {
                let src = Source::Rule {
                    rule: RuleId::Base,
                    premises: vec![Premise { params: p.clone(), kind }],
                };
                out.push((q.clone(), kind, e.value.clone(), src));
            }
            if let Some(e) = kb.fact(&q).and_then(|g| g.bound(kind)) {
                let src = Source::Rule {
                    rule: RuleId::Base,
                    premises: vec![Premise { params: q.clone(), kind }],
                };
                out.push((p.clone(), kind, e.value.clone(), src));
            }
        }
    }
    out
}

fn gen_mono(kb: &KnowledgeBase) -> Vec<Emission> {
    let mut out = Vec::new();
    for (p, f) in kb.facts() {
        let ks = p.ks();
        for i in 0..ks.len() {
            // Equal entries give identical conclusions; emit once.
            if i > 0 && ks[i] == ks[i - 1] {
                continue;
            }
            if let Some(e) = &f.lower {
                out.push((
                    replace_one(p, i, ks[i] + 1),
                    BoundKind::Lower,
                    e.value.clone(),
                    Source::Rule {
                        rule: RuleId::Mono,
                        premises: vec![Premise { params: p.clone(), kind: BoundKind::Lower }],
                    },
                ));
            }
            if ks[i] >= 3 {
                if let Some(e) = &f.upper {
                    out.push((
                        replace_one(p, i, ks[i] - 1),
                        BoundKind::Upper,
                        e.value.clone(),
                        Source::Rule {
                            rule: RuleId::Mono,
                            premises: vec![Premise { params: p.clone(), kind: BoundKind::Upper }],
                        },
                    ));
                }
            }
        }
    }
    out
}

/// Reduce a summand's parameters by the two-entry identities: drop entries
/// equal to 2 (down to a single `(2)` when nothing else remains). One-entry
/// results may be definitional rather than stored facts.
fn reduce(ks: &[u32]) -> Params {
    let kept: Vec<u32> = ks.iter().copied().filter(|&k| k != 2).collect();
    if kept.is_empty() {
        Params::new(&[2]).expect("valid")
    } else {
        Params::new(&kept).expect("entries >= 3")
    }
}

fn gen_es(kb: &KnowledgeBase, es_even: bool) -> Vec<Emission> {
    // Candidate conclusions: bump one entry of a key that has an upper bound,
    // or extend it by a 3. Every fireable conclusion arises this way from the
    // (reduced) premise at its largest entry.
    let mut cands: BTreeSet<Params> = BTreeSet::new();
    for (q, f) in kb.facts() {
        if f.upper.is_none() {
            continue;
        }
        let ks = q.ks();
        for i in 0..ks.len() {
            if i > 0 && ks[i] == ks[i - 1] {
                continue;
            }
            let bumped = replace_one(q, i, ks[i] + 1);
            if bumped.ks().iter().all(|&k| k >= 3) {
                cands.insert(bumped);
            }
        }
        if ks.iter().all(|&k| k >= 3) {
            cands.insert(q.with_appended(3).expect("valid"));
        }
    }
    let mut out = Vec::new();
    'cand: for p in cands {
        let r = p.r();
        if r < 2 {
            continue;
        }
        let mut premises = Vec::with_capacity(r);
        let mut total = BigUint::zero();
        let mut all_even = true;
        for i in 0..r {
            let mut ks = p.ks().to_vec();
            ks[i] -= 1;
            let premise = Premise { params: reduce(&ks), kind: BoundKind::Upper };
            let Some(v) = premise_value(kb, &premise) else { continue 'cand };
            all_even &= (&v % 2u32).is_zero();
            total += v;
            premises.push(premise);
        }
        // value = total + 2 - r; skip the degenerate case of absurdly small
        // asserted premises rather than underflow.
        let Some(value) = (total + 2u32).checked_sub(&big(r as u64)) else { continue };
        let value = if es_even && r == 2 && all_even {
            match value.checked_sub(&One::one()) {
                Some(v) => v,
                None => continue,
            }
        } else {
            value
        };
        if value.is_zero() {
            continue;
        }
        out.push((p, BoundKind::Upper, value, Source::Rule { rule: RuleId::Es, premises }));
    }
    out
}

fn gen_abbott(kb: &KnowledgeBase) -> Vec<Emission> {
    let lowers: Vec<(&Params, &BigUint)> = kb
        .facts()
        .filter_map(|(p, f)| f.lower.as_ref().map(|e| (p, &e.value)))
        .filter(|(_, v)| **v >= big(2))
        .collect();
    let mut out = Vec::new();
    for &(q1, l1) in &lowers {
        for &(q2, l2) in &lowers {
            // The premise pair must form a split of the sorted conclusion.
            if q1.max_entry() > q2.ks()[0] {
                continue;
            }
            let p = q1.union(q2);
            let value = (l1 - 1u32) * (l2 - 1u32) + 1u32;
            out.push((
                p,
                BoundKind::Lower,
                value,
                Source::Rule {
                    rule: RuleId::Abbott,
                    premises: vec![
                        Premise { params: q1.clone(), kind: BoundKind::Lower },
                        Premise { params: q2.clone(), kind: BoundKind::Lower },
                    ],
                },
            ));
        }
    }
    out
}

fn gen_diagprod(kb: &KnowledgeBase) -> Vec<Emission> {
    let diags: Vec<(u32, usize, &Params, &BigUint)> = kb
        .facts()
        .filter_map(|(p, f)| {
            let k = p.diagonal_value()?;
            let v = f.lower.as_ref().map(|e| &e.value)?;
            (*v >= big(2)).then_some((k, p.r(), p, v))
        })
        .collect();
    let mut out = Vec::new();
    for (i, &(k1, r1, p1, l1)) in diags.iter().enumerate() {
        for &(k2, r2, p2, l2) in &diags[i..] {
            if r1 != r2 {
                continue;
            }
            let (s, t) = (u64::from(k1) - 1, u64::from(k2) - 1);
            let k = match u32::try_from(s * t + 1) {
                Ok(k) => k,
                Err(_) => continue,
            };
            let value = (l1 - 1u32) * (l2 - 1u32) + 1u32;
            out.push((
                Params::diagonal(k, r1),
                BoundKind::Lower,
                value,
                Source::Rule {
                    rule: RuleId::DiagProd,
                    premises: vec![
                        Premise { params: p1.clone(), kind: BoundKind::Lower },
                        Premise { params: p2.clone(), kind: BoundKind::Lower },
                    ],
                },
            ));
        }
    }
    out
}

fn gen_befs(kb: &KnowledgeBase) -> Vec<Emission> {
    let mut out = Vec::new();
    for (p, f) in kb.facts() {
        let [3, t] = p.ks() else { continue };
        let Some(e) = &f.lower else { continue };
        let q = Params::new(&[4, *t]).expect("valid");
        let value = &e.value + big(u64::from(2 * t - 3));
        out.push((
            q,
            BoundKind::Lower,
            value,
            Source::Rule {
                rule: RuleId::Befs,
                premises: vec![Premise { params: p.clone(), kind: BoundKind::Lower }],
            },
        ));
    }
    out
}

fn gen_dc(kb: &KnowledgeBase) -> Vec<Emission> {
    let strict = kb.assumptions.dc_strict;
    let mut out = Vec::new();
    for (p, f) in kb.facts() {
        // Away from the diagonal: upper bounds follow the move.
        if let Some(e) = &f.upper {
            for moved in super::dc_moves(p) {
                let value = if strict {
                    match e.value.checked_sub(&One::one()) {
                        Some(v) if !v.is_zero() => v,
                        _ => continue,
                    }
                } else {
                    e.value.clone()
                };
                out.push((
                    moved,
                    BoundKind::Upper,
                    value,
                    Source::Rule {
                        rule: RuleId::Dc,
                        premises: vec![Premise { params: p.clone(), kind: BoundKind::Upper }],
                    },
                ));
            }
        }
        // Toward the diagonal: lower bounds travel against the move. Invert:
        // entries (x, y) with y >= x + 2 came from (x + 1, y - 1).
        if let Some(e) = &f.lower {
            let ks = p.ks();
            let mut targets = BTreeSet::new();
            for i in 0..ks.len() {
                for j in (i + 1)..ks.len() {
                    let (x, y) = (ks[i], ks[j]);
                    if y >= x + 2 {
                        targets.insert(p.with_replaced(i, j, x + 1, y - 1).expect("valid"));
                    }
                }
            }
            for orig in targets {
                let value = if strict { &e.value + 1u32 } else { e.value.clone() };
                out.push((
                    orig,
                    BoundKind::Lower,
                    value,
                    Source::Rule {
                        rule: RuleId::Dc,
                        premises: vec![Premise { params: p.clone(), kind: BoundKind::Lower }],
                    },
                ));
            }
        }
    }
    out
}

fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= i;
    }
    f
}

/// `floor((e - 1/6) * r!)` with the floor provably exact: bracket `e` by
/// partial sums `S_m < e - ... < S_m + 2/(m+1)!` and widen `m` until both
/// interval ends floor to the same integer.
pub fn floor_e_sixth_factorial(r: usize) -> BigUint {
    let fact_r = BigRational::from_integer(factorial(r));
    let sixth = BigRational::new(BigInt::one(), BigInt::from(6));
    let mut m = r + 2;
    loop {
        let mut partial = BigRational::zero();
        let mut f = BigInt::one();
        partial += BigRational::from_integer(BigInt::one());
        for n in 1..=m {
            f *= n;
            partial += BigRational::new(BigInt::one(), f.clone());
        }
        // e - S_m lies strictly between 1/(m+1)! and 2/(m+1)!.
        let tail_unit = BigRational::new(BigInt::one(), f * (m as i64 + 1));
        let lo = (&partial - &sixth + &tail_unit) * &fact_r;
        let hi = (&partial - &sixth + BigRational::from_integer(BigInt::from(2)) * &tail_unit)
            * &fact_r;
        let (flo, fhi) = (lo.floor().to_integer(), hi.floor().to_integer());
        if flo == fhi {
            assert!(!flo.is_negative(), "e - 1/6 is positive");
            return flo.to_biguint().expect("nonnegative");
        }
        m += 2;
    }
}

/// Re-check a stored conclusion against its premises' current values; used
/// by `explain` to guarantee a rendered tree is arithmetically honest.
pub(super) fn replay(
    rule: RuleId,
    params: &Params,
    kind: BoundKind,
    premises: &[Premise],
    kb: &KnowledgeBase,
) -> Result<BigUint, EngineError> {
    let value_of = |p: &Premise| {
        premise_value(kb, p)
            .ok_or_else(|| EngineError::MissingFact { params: p.params.clone(), kind: p.kind })
    };
    let stored = kb
        .fact(params)
        .and_then(|f| f.bound(kind))
        .map(|e| e.value.clone())
        .ok_or_else(|| EngineError::MissingFact { params: params.clone(), kind })?;
    let expect_eq = |want: BigUint| -> Result<BigUint, EngineError> {
        if stored == want {
            Ok(want)
        } else {
            Err(EngineError::ArithmeticMismatch {
                params: params.clone(),
                kind,
                rule,
                stored: stored.clone(),
                recomputed: want,
            })
        }
    };
    match rule {
        RuleId::Base => match premises {
            [] => match params.ks() {
                [k] => expect_eq(big(u64::from(*k))),
                _ => expect_eq(stored.clone()),
            },
            [p] => expect_eq(value_of(p)?),
            _ => expect_eq(stored.clone()),
        },
        RuleId::Mono => expect_eq(value_of(&premises[0])?),
        RuleId::Es => {
            let mut total = BigUint::zero();
            let mut all_even = true;
            for p in premises {
                let v = value_of(p)?;
                all_even &= (&v % 2u32).is_zero();
                total += v;
            }
            let plain = (total + 2u32)
                .checked_sub(&big(params.r() as u64))
                .unwrap_or_default();
            if params.r() == 2 && all_even && !plain.is_zero() && stored == &plain - 1u32 {
                return Ok(stored);
            }
            expect_eq(plain)
        }
        RuleId::Abbott | RuleId::DiagProd => {
            let v1 = value_of(&premises[0])?;
            let v2 = value_of(&premises[1])?;
            expect_eq((v1 - 1u32) * (v2 - 1u32) + 1u32)
        }
        RuleId::Power => {
            let k = params.diagonal_value().unwrap_or(2);
            expect_eq(big(u64::from(k) - 1).pow(params.r() as u32) + 1u32)
        }
        RuleId::TwoR => expect_eq(big(2).pow(params.r() as u32) + 1u32),
        RuleId::R3cf => expect_eq(floor_e_sixth_factorial(params.r()) + 1u32),
        RuleId::Befs => {
            let t = premises[0].params.ks()[1];
            expect_eq(value_of(&premises[0])? + big(u64::from(2 * t - 3)))
        }
        RuleId::Dc => {
            let v = value_of(&premises[0])?;
            let strict_ok = match kind {
                BoundKind::Lower => stored == &v + 1u32,
                BoundKind::Upper => !v.is_zero() && stored == &v - 1u32,
            };
            if strict_ok {
                return Ok(stored);
            }
            expect_eq(v)
        }
    }
}

/// One entry replaced, result re-sorted. Callers keep the entry >= 2.
fn replace_one(p: &Params, i: usize, v: u32) -> Params {
    let mut ks = p.ks().to_vec();
    ks[i] = v;
    Params::new(&ks).expect("entry stays >= 2")
}
