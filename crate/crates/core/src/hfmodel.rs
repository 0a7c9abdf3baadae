//! Evaluation over hereditarily finite sets with urelements.
//!
//! Every operation is total on sets and on urelements: wherever a set is
//! expected a non-set behaves as `∅`, membership in a non-set is false, and
//! undefined descriptions denote `∅`. Two operations can diverge or blow up
//! over finite sets, so evaluation is bounded by [`EvalConfig`]:
//! iterative reach that has not closed after `max_iter` applications is
//! [`EvalError::NonTerminating`], and a powerset larger than
//! `max_powerset_card` is [`EvalError::ResourceExceeded`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::context::{LogicalContext, Sequent};
use crate::kernel::{instantiate_axiom, AxiomInstance};
use crate::syntax::{Bind2, Formula, Name, Term};

/// An urelement or a finite set of values. Every urelement orders before
/// every set. Set contents are shared, so iterating `x ∪ {x}` stays linear
/// in size.
#[derive(Debug, Clone, Hash)]
pub enum Value {
    Atom(u32),
    Set(Arc<BTreeSet<Value>>),
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Atom(a), Value::Atom(b)) => a.cmp(b),
            (Value::Atom(_), Value::Set(_)) => Ordering::Less,
            (Value::Set(_), Value::Atom(_)) => Ordering::Greater,
            (Value::Set(a), Value::Set(b)) if Arc::ptr_eq(a, b) => Ordering::Equal,
            (Value::Set(a), Value::Set(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl Value {
    pub fn empty() -> Value {
        Value::Set(Arc::default())
    }

    pub fn set(items: impl IntoIterator<Item = Value>) -> Value {
        Value::Set(Arc::new(items.into_iter().collect()))
    }

    pub fn singleton(v: Value) -> Value {
        Value::set([v])
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Value::Set(_))
    }

    /// Elements, with a non-set treated as `∅`.
    pub fn elements(&self) -> impl Iterator<Item = &Value> {
        let set = match self {
            Value::Set(s) => Some(s.iter()),
            Value::Atom(_) => None,
        };
        set.into_iter().flatten()
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self {
            Value::Set(s) => s.contains(v),
            Value::Atom(_) => false,
        }
    }

    pub fn card(&self) -> usize {
        match self {
            Value::Set(s) => s.len(),
            Value::Atom(_) => 0,
        }
    }

    /// Rank: urelements and `∅` have rank 0, a nonempty set has one more
    /// than the largest rank of its elements.
    pub fn rank(&self) -> usize {
        fn go(v: &Value, memo: &mut HashMap<*const BTreeSet<Value>, usize>) -> usize {
            let Value::Set(s) = v else { return 0 };
            if let Some(&r) = memo.get(&Arc::as_ptr(s)) {
                return r;
            }
            let r = s.iter().map(|x| go(x, memo) + 1).max().unwrap_or(0);
            memo.insert(Arc::as_ptr(s), r);
            r
        }
        go(self, &mut HashMap::new())
    }

    /// The von Neumann numeral `n`.
    pub fn numeral(n: usize) -> Value {
        let mut acc = BTreeSet::new();
        for _ in 0..n {
            let next = Value::Set(Arc::new(acc.clone()));
            acc.insert(next);
        }
        Value::Set(Arc::new(acc))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(i) => write!(f, "u{i}"),
            Value::Set(s) => {
                f.write_str("{")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

pub type Valuation = BTreeMap<Name, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub max_iter: usize,
    pub max_powerset_card: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            max_iter: 64,
            max_powerset_card: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("iterative reach did not close within {0} steps")]
    NonTerminating(usize),
    #[error("powerset of a {card}-element set exceeds the bound {limit}")]
    ResourceExceeded { card: usize, limit: usize },
    #[error("`{0}` has no value")]
    Unbound(Name),
    #[error("placeholder ?{0} cannot be evaluated")]
    Hole(usize),
    #[error("{0}")]
    IllFormed(String),
}

impl EvalError {
    pub fn name(&self) -> &'static str {
        match self {
            EvalError::NonTerminating(_) => "NonTerminating",
            EvalError::ResourceExceeded { .. } => "ResourceExceeded",
            EvalError::Unbound(_) => "Unbound",
            EvalError::Hole(_) => "Hole",
            EvalError::IllFormed(_) => "IllFormed",
        }
    }
}

struct Eval<'a> {
    rho: &'a Valuation,
    scope: Vec<(Name, Value)>,
    cfg: EvalConfig,
}

impl Eval<'_> {
    fn lookup(&self, x: &Name) -> Result<Value, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, v)| v.clone())
            .or_else(|| self.rho.get(x).cloned())
            .ok_or_else(|| EvalError::Unbound(x.clone()))
    }

    fn with<T>(
        &mut self,
        binds: &[(&Name, Value)],
        f: impl FnOnce(&mut Self) -> Result<T, EvalError>,
    ) -> Result<T, EvalError> {
        let mark = self.scope.len();
        self.scope
            .extend(binds.iter().map(|(x, v)| ((*x).clone(), v.clone())));
        let out = f(self);
        self.scope.truncate(mark);
        out
    }

    fn relation(&mut self, rel: &Bind2<Formula>, a: &Value, b: &Value) -> Result<bool, EvalError> {
        self.with(&[(&rel.first, a.clone()), (&rel.second, b.clone())], |e| {
            e.formula(&rel.body)
        })
    }

    fn term(&mut self, t: &Term) -> Result<Value, EvalError> {
        match t {
            Term::Var(x) => self.lookup(x),
            Term::Hole(i) => Err(EvalError::Hole(*i)),
            Term::Empty => Ok(Value::empty()),
            Term::Union(a, b) => {
                let a = self.term(a)?;
                let b = self.term(b)?;
                Ok(Value::set(a.elements().chain(b.elements()).cloned()))
            }
            Term::IndexedUnion { var, domain, body } => {
                let domain = self.term(domain)?;
                let mut out = BTreeSet::new();
                for a in domain.elements() {
                    let b = self.with(&[(var, a.clone())], |e| e.term(body))?;
                    // Non-set family members are discarded.
                    if let Value::Set(items) = b {
                        out.extend(items.iter().cloned());
                    }
                }
                Ok(Value::Set(Arc::new(out)))
            }
            Term::CondSingleton(r, phi) => {
                let r = self.term(r)?;
                if self.formula(phi)? {
                    Ok(Value::singleton(r))
                } else {
                    Ok(Value::empty())
                }
            }
            Term::UniqueElement(a) => {
                let a = self.term(a)?;
                match &a {
                    Value::Set(s) if s.len() == 1 => Ok(s.iter().next().cloned().unwrap()),
                    _ => Ok(Value::empty()),
                }
            }
            Term::IterReach { start, var, step } => {
                let mut cur = self.term(start)?;
                let mut seen = BTreeSet::from([cur.clone()]);
                for _ in 0..self.cfg.max_iter {
                    let next = self.with(&[(var, cur.clone())], |e| e.term(step))?;
                    if !seen.insert(next.clone()) {
                        return Ok(Value::Set(Arc::new(seen)));
                    }
                    cur = next;
                }
                Err(EvalError::NonTerminating(self.cfg.max_iter))
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                let carrier = self.term(domain)?;
                let s = self.term(arg)?;
                let layers = wf_layers(&carrier, |b, a| self.relation(rel, b, a))?;
                if !layers.iter().flatten().any(|v| *v == s) {
                    return Ok(Value::empty());
                }
                let mut done: BTreeMap<Value, Value> = BTreeMap::new();
                for a in layers.iter().flatten() {
                    let mut below = BTreeSet::new();
                    for b in carrier.elements() {
                        if self.relation(rel, b, a)? {
                            below.insert(done[b].clone());
                        }
                    }
                    let v = self.with(
                        &[
                            (&step.first, a.clone()),
                            (&step.second, Value::Set(Arc::new(below))),
                        ],
                        |e| e.term(&step.body),
                    )?;
                    if *a == s {
                        return Ok(v);
                    }
                    done.insert(a.clone(), v);
                }
                unreachable!("s lies in some layer")
            }
            Term::Powerset(a) => {
                let a = self.term(a)?;
                powerset(&a, self.cfg.max_powerset_card)
            }
        }
    }

    fn formula(&mut self, phi: &Formula) -> Result<bool, EvalError> {
        match phi {
            Formula::False => Ok(false),
            Formula::True => Ok(true),
            Formula::Or(a, b) => Ok(self.formula(a)? || self.formula(b)?),
            Formula::And(a, b) => Ok(self.formula(a)? && self.formula(b)?),
            Formula::Implies(a, b) => Ok(!self.formula(a)? || self.formula(b)?),
            Formula::Not(a) => Ok(!self.formula(a)?),
            Formula::ExistsIn { var, domain, body } => {
                let domain = self.term(domain)?;
                for a in domain.elements() {
                    if self.with(&[(var, a.clone())], |e| e.formula(body))? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::ForallIn { var, domain, body } => {
                let domain = self.term(domain)?;
                for a in domain.elements() {
                    if !self.with(&[(var, a.clone())], |e| e.formula(body))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Eq(s, t) => Ok(self.term(s)? == self.term(t)?),
            Formula::IsSet(a) => Ok(self.term(a)?.is_set()),
            Formula::In(s, a) => {
                let s = self.term(s)?;
                Ok(self.term(a)?.contains(&s))
            }
            Formula::WfElem { elem, domain, rel } => {
                let s = self.term(elem)?;
                let carrier = self.term(domain)?;
                is_wf_element(&s, &carrier, |b, a| self.relation(rel, b, a))
            }
        }
    }
}

fn powerset(a: &Value, limit: usize) -> Result<Value, EvalError> {
    let items: Vec<&Value> = a.elements().collect();
    let n = items.len();
    let card = 1usize
        .checked_shl(n as u32)
        .filter(|_| n < usize::BITS as usize);
    match card {
        Some(c) if c <= limit => {}
        _ => {
            return Err(EvalError::ResourceExceeded { card: n, limit });
        }
    }
    // 𝒫 of a non-set is {∅}, which the loop yields for n = 0.
    let mut out = BTreeSet::new();
    for mask in 0..(1usize << n) {
        out.insert(Value::set(
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| (*v).clone()),
        ));
    }
    Ok(Value::Set(Arc::new(out)))
}

/// The well-founded part of `carrier` under `rel(b, a)` ("b precedes a"),
/// split into generation layers: every element of layer k has all of its
/// predecessors in layers below k.
pub fn wf_layers(
    carrier: &Value,
    mut rel: impl FnMut(&Value, &Value) -> Result<bool, EvalError>,
) -> Result<Vec<Vec<Value>>, EvalError> {
    let items: Vec<&Value> = carrier.elements().collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); items.len()];
    for (ai, a) in items.iter().enumerate() {
        for (bi, b) in items.iter().enumerate() {
            if rel(b, a)? {
                preds[ai].push(bi);
            }
        }
    }
    let mut in_w = vec![false; items.len()];
    let mut layers = Vec::new();
    loop {
        let layer: Vec<usize> = (0..items.len())
            .filter(|&i| !in_w[i] && preds[i].iter().all(|&p| in_w[p]))
            .collect();
        if layer.is_empty() {
            break;
        }
        for &i in &layer {
            in_w[i] = true;
        }
        layers.push(layer.into_iter().map(|i| items[i].clone()).collect());
    }
    Ok(layers)
}

/// Membership of `a` in the least set `W ⊆ carrier` such that `a ∈ W`
/// whenever every `b ∈ carrier` with `rel(b, a)` is in `W`.
pub fn is_wf_element(
    a: &Value,
    carrier: &Value,
    rel: impl FnMut(&Value, &Value) -> Result<bool, EvalError>,
) -> Result<bool, EvalError> {
    if !carrier.contains(a) {
        return Ok(false);
    }
    Ok(wf_layers(carrier, rel)?.iter().flatten().any(|v| v == a))
}

pub fn eval_term(rho: &Valuation, t: &Term, cfg: &EvalConfig) -> Result<Value, EvalError> {
    Eval {
        rho,
        scope: Vec::new(),
        cfg: *cfg,
    }
    .term(t)
}

pub fn eval_formula(rho: &Valuation, phi: &Formula, cfg: &EvalConfig) -> Result<bool, EvalError> {
    Eval {
        rho,
        scope: Vec::new(),
        cfg: *cfg,
    }
    .formula(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Skipped(EvalError),
}

impl Verdict {
    fn of(r: Result<bool, EvalError>) -> Verdict {
        match r {
            Ok(true) => Verdict::True,
            Ok(false) => Verdict::False,
            Err(e) => Verdict::Skipped(e),
        }
    }
}

/// Truth of `Γ ⊢ instance` under `ρ`, read through the sequent meaning.
pub fn check_axiom_instance(
    inst: &AxiomInstance,
    ctx: &LogicalContext,
    rho: &Valuation,
    cfg: &EvalConfig,
) -> Verdict {
    let formula = match instantiate_axiom(inst, ctx) {
        Ok(f) => f,
        Err(e) => return Verdict::Skipped(EvalError::IllFormed(e.to_string())),
    };
    match Sequent::new(ctx.clone(), formula) {
        Ok(s) => Verdict::of(eval_formula(rho, &s.meaning(), cfg)),
        Err(e) => Verdict::Skipped(EvalError::IllFormed(e.to_string())),
    }
}

/// One application of a logical rule, as sequents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

/// True iff the conclusion's meaning holds whenever every premise's does.
pub fn check_rule_soundness(inst: &RuleInstance, rho: &Valuation, cfg: &EvalConfig) -> Verdict {
    let run = || -> Result<bool, EvalError> {
        for p in &inst.premises {
            if !eval_formula(rho, &p.meaning(), cfg)? {
                return Ok(true);
            }
        }
        eval_formula(rho, &inst.conclusion.meaning(), cfg)
    };
    Verdict::of(run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{AxiomId, Param};
    use crate::sugar::subseteq;
    use crate::syntax::{AbstractedTerm, Fresh};

    fn e() -> Value {
        Value::empty()
    }

    fn rho(pairs: &[(&str, Value)]) -> Valuation {
        pairs
            .iter()
            .map(|(x, v)| (Name::new(x), v.clone()))
            .collect()
    }

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn powerset_of_urelement() {
        let r = rho(&[("u", Value::Atom(0))]);
        let got = eval_term(&r, &Term::powerset(v("u")), &cfg()).unwrap();
        assert_eq!(got, Value::singleton(e()));
    }

    #[test]
    fn uniqel_of_pair_is_empty() {
        let r = rho(&[("A", Value::set([e(), Value::singleton(e())]))]);
        assert_eq!(eval_term(&r, &Term::uniqel(v("A")), &cfg()).unwrap(), e());
    }

    #[test]
    fn itset_identity_closes() {
        let t = Term::iter_reach(Term::Empty, "x", v("x"));
        assert_eq!(
            eval_term(&rho(&[]), &t, &cfg()).unwrap(),
            Value::singleton(e())
        );
    }

    #[test]
    fn itset_powerset_diverges() {
        let t = Term::iter_reach(Term::Empty, "x", Term::powerset(v("x")));
        let small = EvalConfig {
            max_iter: 3,
            ..cfg()
        };
        assert_eq!(
            eval_term(&rho(&[]), &t, &small),
            Err(EvalError::NonTerminating(3))
        );
    }

    #[test]
    fn successor_iteration_shares_structure() {
        // Unshared, the 200th numeral would have 2^200 nodes.
        let succ = Term::union(v("x"), Term::singleton(v("x")));
        let t = Term::uniqel(Term::cond_singleton(
            Term::iter_reach(Term::Empty, "x", succ),
            Formula::True,
        ));
        let big = EvalConfig {
            max_iter: 200,
            ..cfg()
        };
        assert_eq!(
            eval_term(&rho(&[]), &t, &big),
            Err(EvalError::NonTerminating(200))
        );
        let n = Value::numeral(200);
        assert_eq!(n.card(), 200);
        assert_eq!(n.rank(), 200);
        let top = n.elements().max().unwrap().clone();
        assert!(n.contains(&top));
        assert_eq!(top.card(), 199);
    }

    #[test]
    fn wrec_membership_identity_step() {
        let a = Value::set([e(), Value::singleton(e())]);
        let r = rho(&[("A", a), ("s", Value::singleton(e()))]);
        let t = Term::wf_rec(
            v("A"),
            Bind2::new("x", "y", Formula::member(v("x"), v("y"))),
            Bind2::new("z", "Y", v("Y")),
            v("s"),
        );
        assert_eq!(eval_term(&r, &t, &cfg()).unwrap(), Value::singleton(e()));
    }

    #[test]
    fn membership_in_urelement_is_false() {
        let r = rho(&[("a", Value::Atom(1)), ("b", e())]);
        let phi = Formula::member(v("b"), v("a"));
        assert!(!eval_formula(&r, &phi, &cfg()).unwrap());
    }

    #[test]
    fn urelement_is_subset_of_anything() {
        let r = rho(&[("a", Value::Atom(1)), ("b", e())]);
        let phi = subseteq(&mut Fresh::new(Default::default()), v("a"), v("b"));
        assert!(eval_formula(&r, &phi, &cfg()).unwrap());
    }

    #[test]
    fn forall_over_empty() {
        let phi = Formula::forall_in("x", Term::Empty, Formula::False);
        assert!(eval_formula(&rho(&[]), &phi, &cfg()).unwrap());
    }

    #[test]
    fn wf_examples() {
        let one = Value::singleton(e());
        assert!(is_wf_element(&e(), &one, |_, _| Ok(false)).unwrap());
        assert!(!is_wf_element(&e(), &one, |_, _| Ok(true)).unwrap());
        let carrier = Value::set([e(), one.clone()]);
        let mem = |b: &Value, a: &Value| Ok(a.contains(b));
        assert!(is_wf_element(&one, &carrier, mem).unwrap());
        let layers = wf_layers(&carrier, mem).unwrap();
        assert_eq!(layers, vec![vec![e()], vec![one]]);
    }

    #[test]
    fn axiom_examples() {
        let ctx = LogicalContext::default();
        let r = rho(&[]);
        let one = Term::singleton(Term::Empty);
        let inst = AxiomInstance::new(
            AxiomId::PowersetElement,
            vec![Param::Term(one.clone()), Param::Term(one.clone())],
        )
        .unwrap();
        assert_eq!(check_axiom_instance(&inst, &ctx, &r, &cfg()), Verdict::True);
        let inst = AxiomInstance::new(AxiomId::EmptySet, vec![]).unwrap();
        assert_eq!(check_axiom_instance(&inst, &ctx, &r, &cfg()), Verdict::True);
        let inst = AxiomInstance::new(
            AxiomId::Choice,
            vec![
                Param::Term(Term::singleton(one)),
                Param::AbsTerm(AbstractedTerm::new(1, Term::Hole(0))),
            ],
        )
        .unwrap();
        assert_eq!(check_axiom_instance(&inst, &ctx, &r, &cfg()), Verdict::True);
    }

    #[test]
    fn powerset_bound() {
        let big = Value::set((0..13).map(Value::Atom));
        let r = rho(&[("A", big)]);
        assert!(matches!(
            eval_term(&r, &Term::powerset(v("A")), &cfg()),
            Err(EvalError::ResourceExceeded { card: 13, .. })
        ));
    }

    #[test]
    fn display_and_rank() {
        let val = Value::set([Value::Atom(0), e()]);
        assert_eq!(val.to_string(), "{u0, {}}");
        assert_eq!(Value::numeral(3).rank(), 3);
        assert_eq!(Value::numeral(3).card(), 3);
    }
}
