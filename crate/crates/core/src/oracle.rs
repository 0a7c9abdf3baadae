//! Randomized soundness suites over the finite-model evaluator.
//!
//! Each axiom scheme and each logical rule gets its own suite. A trial draws
//! a base of one to three variables with hereditarily finite values of
//! bounded rank, a short logical context, and parameters over that context,
//! then asks [`hfmodel`](crate::hfmodel) whether the instance holds. Trials
//! whose evaluation hits a resource bound are counted as skips.
//!
//! Every suite seeds its own ChaCha stream from the run seed and the suite
//! index, so reports are reproducible and independent of suite order.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::context::{Entry, LogicalContext, Sequent};
use crate::hfmodel::{
    check_axiom_instance, check_rule_soundness, eval_formula, eval_term, EvalConfig, RuleInstance,
    Valuation, Value, Verdict,
};
use crate::kernel::{AxiomId, AxiomInstance, Param, ParamKind, Rule, RuleKind};
use crate::sugar;
use crate::syntax::{
    is_formula_over, is_term_over, AbstractedFormula, AbstractedTerm, Bind2, DeclContext, Formula,
    Fresh, Name, Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub trials: usize,
    /// Maximum rank of sampled values.
    pub rank: usize,
    pub seed: u64,
    pub eval: EvalConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trials: 100,
            rank: 3,
            seed: 0,
            eval: EvalConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub trials: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteRow {
    fn new(name: impl Into<String>) -> Self {
        SuiteRow {
            name: name.into(),
            ..SuiteRow::default()
        }
    }

    fn record(&mut self, verdict: Verdict, describe: impl FnOnce() -> String) {
        self.trials += 1;
        match verdict {
            Verdict::True => self.pass += 1,
            Verdict::Skipped(_) => self.skip += 1,
            Verdict::False => {
                self.fail += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(describe());
                }
            }
        }
    }

    pub fn skip_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.skip as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub rank: usize,
    pub axioms: Vec<SuiteRow>,
    pub rules: Vec<SuiteRow>,
}

impl OracleReport {
    pub fn failures(&self) -> usize {
        self.axioms.iter().chain(&self.rules).map(|r| r.fail).sum()
    }
}

// ---------------------------------------------------------------------------
// Generators

const BASE: [&str; 3] = ["a", "b", "c"];
const BOUND: [&str; 4] = ["x", "y", "z", "w"];

/// Source of random values, contexts and ASTs.
pub struct Gen {
    rng: ChaCha8Rng,
    rank: usize,
}

impl Gen {
    pub fn new(seed: u64, rank: usize) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rank,
        }
    }

    fn stream(seed: u64, suite: u64, rank: usize) -> Self {
        Gen::new(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite, rank)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty")
    }

    /// A value of rank at most `rank`, with at most three elements per set.
    pub fn value_of_rank(&mut self, rank: usize) -> Value {
        if rank == 0 || self.chance(0.2) {
            return if self.chance(0.3) {
                Value::Atom(self.rng.gen_range(0..2))
            } else {
                Value::empty()
            };
        }
        let n = self.rng.gen_range(0..=3);
        Value::set((0..n).map(|_| self.value_of_rank(rank - 1)))
    }

    pub fn value(&mut self) -> Value {
        let r = self.rank;
        self.value_of_rank(r)
    }

    /// One to three base variables.
    pub fn base(&mut self) -> Vec<Name> {
        let n = self.rng.gen_range(1..=BASE.len());
        BASE[..n].iter().map(Name::new).collect()
    }

    pub fn valuation(&mut self, base: &[Name]) -> Valuation {
        base.iter().map(|x| (x.clone(), self.value())).collect()
    }

    fn leaf(&mut self, scope: &[Name]) -> Term {
        if scope.is_empty() || self.chance(0.2) {
            if self.chance(0.8) {
                Term::Empty
            } else {
                Term::singleton(Term::Empty)
            }
        } else {
            Term::Var(self.pick(scope).clone())
        }
    }

    fn bound(&mut self) -> Name {
        Name::new(self.pick(&BOUND))
    }

    fn extend(scope: &[Name], x: &Name) -> Vec<Name> {
        let mut s = scope.to_vec();
        s.push(x.clone());
        s
    }

    /// A term over `scope`.
    pub fn term(&mut self, scope: &[Name], depth: usize) -> Term {
        if depth == 0 {
            return self.leaf(scope);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..11) {
            0 | 1 => self.leaf(scope),
            2 => Term::union(self.term(scope, d), self.term(scope, d)),
            3 => {
                let x = self.bound();
                let domain = self.term(scope, d);
                let body = self.term(&Gen::extend(scope, &x), d);
                Term::indexed_union(x, domain, body)
            }
            4 => Term::cond_singleton(self.term(scope, d), self.formula(scope, d)),
            5 => Term::uniqel(self.term(scope, d)),
            6 => {
                let x = self.bound();
                let start = self.term(scope, d);
                let step = self.cycling_step(scope, &Term::Var(x.clone()), d);
                Term::iter_reach(start, x, step)
            }
            7 => self.wf_rec(scope, d),
            8 if depth <= 2 => Term::powerset(self.leaf(scope)),
            _ => Term::union(self.leaf(scope), self.term(scope, d)),
        }
    }

    fn wf_rec(&mut self, scope: &[Name], d: usize) -> Term {
        let domain = self.term(scope, d);
        let rel = self.relation(scope, d);
        let (z, y) = (Name::new("z"), Name::new("Y"));
        let step_body = match self.rng.gen_range(0..4) {
            0 => Term::var("Y"),
            1 => Term::union(Term::var("z"), Term::var("Y")),
            2 => Term::singleton(Term::var("Y")),
            _ => {
                let inner = [scope, &[z.clone(), y.clone()]].concat();
                self.term(&inner, d.min(1))
            }
        };
        let arg = self.term(scope, d);
        Term::wf_rec(domain, rel, Bind2::new(z, y, step_body), arg)
    }

    fn relation(&mut self, scope: &[Name], d: usize) -> Bind2<Formula> {
        let (x, y) = (Name::new("x"), Name::new("y"));
        let (vx, vy) = (Term::Var(x.clone()), Term::Var(y.clone()));
        let body = match self.rng.gen_range(0..5) {
            0 | 1 => Formula::member(vx, vy),
            2 => Formula::False,
            3 => Formula::eq(vx, vy),
            _ => {
                let inner = [scope, &[x.clone(), y.clone()]].concat();
                self.formula(&inner, d.min(1))
            }
        };
        Bind2::new(x, y, body)
    }

    /// A step function of `arg` whose iterates provably revisit a value:
    /// identity, constants, idempotent joins and meets, and maps into a
    /// fixed finite range.
    fn cycling_step(&mut self, scope: &[Name], arg: &Term, d: usize) -> Term {
        let mut fresh = Fresh::new(scope.iter().cloned().collect());
        fresh.avoid_term(arg);
        match self.rng.gen_range(0..7) {
            0 => arg.clone(),
            1 => self.term(scope, d.min(1)),
            2 => Term::union(arg.clone(), self.leaf(scope)),
            3 => Term::uniqel(arg.clone()),
            4 => Term::cond_singleton(
                self.leaf(scope),
                Formula::member(self.leaf(scope), arg.clone()),
            ),
            5 => sugar::intersection(&mut fresh, arg.clone(), self.leaf(scope)),
            _ => {
                let x = Name::new("x");
                let x = if arg.has_free(&x) { Name::new("w") } else { x };
                Term::indexed_union(x.clone(), arg.clone(), Term::Var(x))
            }
        }
    }

    /// A formula over `scope`.
    pub fn formula(&mut self, scope: &[Name], depth: usize) -> Formula {
        if depth == 0 {
            return self.atom(scope);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 | 1 => self.atom(scope),
            2 => Formula::or(self.formula(scope, d), self.formula(scope, d)),
            3 => Formula::and(self.formula(scope, d), self.formula(scope, d)),
            4 => Formula::implies(self.formula(scope, d), self.formula(scope, d)),
            5 => Formula::not(self.formula(scope, d)),
            6 | 7 => {
                let x = self.bound();
                let domain = self.term(scope, d);
                let body = self.formula(&Gen::extend(scope, &x), d);
                if self.chance(0.5) {
                    Formula::exists_in(x, domain, body)
                } else {
                    Formula::forall_in(x, domain, body)
                }
            }
            8 => {
                let elem = self.term(scope, d);
                let domain = self.term(scope, d);
                let rel = self.relation(scope, d);
                Formula::wf_elem(elem, domain, rel)
            }
            _ => self.atom(scope),
        }
    }

    fn atom(&mut self, scope: &[Name]) -> Formula {
        match self.rng.gen_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::eq(self.term(scope, 1), self.term(scope, 1)),
            3 => Formula::is_set(self.term(scope, 1)),
            _ => Formula::member(self.term(scope, 1), self.term(scope, 1)),
        }
    }

    /// Zero to two entries over `base`, declaring `d0`, `d1`.
    pub fn context(&mut self, base: &[Name]) -> LogicalContext {
        let mut scope = base.to_vec();
        let mut entries = Vec::new();
        for i in 0..self.rng.gen_range(0..=2) {
            if self.chance(0.5) {
                let x = Name::new(format!("d{i}"));
                entries.push(Entry::Decl(x.clone(), self.term(&scope, 1)));
                scope.push(x);
            } else {
                entries.push(Entry::Hyp(self.formula(&scope, 1)));
            }
        }
        LogicalContext::new(base.iter().cloned().collect(), entries).expect("generated over prefix")
    }

    fn abs_names(n: usize) -> Vec<Name> {
        (0..n).map(|i| Name::new(format!("p{i}"))).collect()
    }

    pub fn abs_term(&mut self, scope: &[Name], arity: usize, depth: usize) -> AbstractedTerm {
        let vars = Gen::abs_names(arity);
        let body = self.term(&[scope, &vars].concat(), depth);
        AbstractedTerm::abstracting(&vars, &body)
    }

    pub fn abs_formula(&mut self, scope: &[Name], arity: usize, depth: usize) -> AbstractedFormula {
        let vars = Gen::abs_names(arity);
        let body = self.formula(&[scope, &vars].concat(), depth);
        AbstractedFormula::abstracting(&vars, &body)
    }

    fn unary_step(&mut self, scope: &[Name]) -> AbstractedTerm {
        let p = Name::new("p0");
        let body = self.cycling_step(scope, &Term::Var(p.clone()), 1);
        AbstractedTerm::abstracting(&[p], &body)
    }

    fn params(&mut self, scheme: AxiomId, scope: &[Name]) -> Vec<Param> {
        let iterative = matches!(
            scheme,
            AxiomId::IRSet
                | AxiomId::IRBaseGeneration
                | AxiomId::IRStepGeneration
                | AxiomId::IRInduction
        );
        scheme
            .signature()
            .iter()
            .map(|kind| match kind {
                ParamKind::Term => Param::Term(self.term(scope, 2)),
                ParamKind::Formula => Param::Formula(self.formula(scope, 2)),
                ParamKind::AbsTerm(1) if iterative => Param::AbsTerm(self.unary_step(scope)),
                ParamKind::AbsTerm(n) => Param::AbsTerm(self.abs_term(scope, *n, 2)),
                ParamKind::AbsFormula(n) => Param::AbsFormula(self.abs_formula(scope, *n, 2)),
            })
            .collect()
    }
}

fn scope_of(ctx: &LogicalContext) -> Vec<Name> {
    ctx.decls().iter().cloned().collect()
}

fn fresh_user_name(ctx: &LogicalContext, stem: &str) -> Name {
    (0..)
        .map(|i| Name::new(format!("{stem}{i}")))
        .find(|n| !ctx.decls().contains(n))
        .expect("unbounded")
}

// ---------------------------------------------------------------------------
// Suites

fn describe_valuation(rho: &Valuation) -> String {
    rho.iter()
        .map(|(x, v)| format!("{x}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `trials` random instances of one scheme.
pub fn axiom_suite(scheme: AxiomId, cfg: &OracleConfig) -> SuiteRow {
    let index = AxiomId::ALL.iter().position(|a| *a == scheme).unwrap() as u64;
    let mut g = Gen::stream(cfg.seed, index, cfg.rank);
    let mut row = SuiteRow::new(scheme.name());
    for _ in 0..cfg.trials {
        let base = g.base();
        let rho = g.valuation(&base);
        let ctx = g.context(&base);
        let params = g.params(scheme, &scope_of(&ctx));
        let inst = AxiomInstance::new(scheme, params).expect("signature respected");
        let verdict = check_axiom_instance(&inst, &ctx, &rho, &cfg.eval);
        row.record(verdict, || {
            let params: Vec<String> = inst.params.iter().map(describe_param).collect();
            format!(
                "{} [{}] under {}",
                scheme,
                params.join(", "),
                describe_valuation(&rho)
            )
        });
    }
    row
}

fn describe_param(p: &Param) -> String {
    match p {
        Param::Term(t) => t.to_string(),
        Param::Formula(f) => f.to_string(),
        Param::AbsTerm(t) => t.body.to_string(),
        Param::AbsFormula(f) => f.body.to_string(),
    }
}

/// A random application of `kind` as premise and conclusion sequents.
pub fn rule_instance(g: &mut Gen, kind: RuleKind, base: &[Name]) -> RuleInstance {
    let mut ctx = g.context(base);
    if kind == RuleKind::Hypothesis && ctx.is_empty() {
        let phi = g.formula(&scope_of(&ctx), 1);
        ctx = ctx.with_hyp(phi).expect("over decls");
    }
    let scope = scope_of(&ctx);
    let f = |g: &mut Gen| g.formula(&scope, 2);
    let t = |g: &mut Gen| g.term(&scope, 2);
    let (rule, premises): (Rule, Vec<Formula>) = match kind {
        RuleKind::Hypothesis => (Rule::Hypothesis(g.rng.gen_range(0..ctx.len())), vec![]),
        RuleKind::FalseE => (Rule::FalseE(f(g)), vec![Formula::False]),
        RuleKind::TrueI => (Rule::TrueI, vec![]),
        RuleKind::OrIL => (Rule::OrIL(f(g)), vec![f(g)]),
        RuleKind::OrIR => (Rule::OrIR(f(g)), vec![f(g)]),
        RuleKind::OrE => {
            let c = f(g);
            (Rule::OrE, vec![Formula::or(f(g), f(g)), c.clone(), c])
        }
        RuleKind::AndI => (Rule::AndI, vec![f(g), f(g)]),
        RuleKind::AndEL => (Rule::AndEL, vec![Formula::and(f(g), f(g))]),
        RuleKind::AndER => (Rule::AndER, vec![Formula::and(f(g), f(g))]),
        RuleKind::ImpI => (Rule::ImpI(f(g)), vec![f(g)]),
        RuleKind::ImpE => {
            let a = f(g);
            (Rule::ImpE, vec![Formula::implies(a.clone(), f(g)), a])
        }
        RuleKind::NegQuodlibet => {
            let a = f(g);
            (Rule::NegQuodlibet(f(g)), vec![a.clone(), Formula::not(a)])
        }
        RuleKind::NegCases => {
            let c = f(g);
            (Rule::NegCases(f(g)), vec![c.clone(), c])
        }
        RuleKind::ExistsInI => {
            let x = g.bound();
            let a = t(g);
            let body = g.formula(&Gen::extend(&scope, &x), 2);
            let witness = if g.chance(0.5) { t(g) } else { g.leaf(&scope) };
            let instance = body.subst(&x, &witness);
            let goal = Formula::exists_in(x, a.clone(), body);
            (
                Rule::ExistsInI(goal),
                vec![Formula::member(witness, a), instance],
            )
        }
        RuleKind::ExistsInE => {
            let x = g.bound();
            let a = t(g);
            let body = g.formula(&Gen::extend(&scope, &x), 2);
            let e = fresh_user_name(&ctx, "e");
            (
                Rule::ExistsInE(e),
                vec![Formula::exists_in(x, a, body), f(g)],
            )
        }
        RuleKind::ForallInI => {
            let x = fresh_user_name(&ctx, "e");
            let a = t(g);
            let body = g.formula(&Gen::extend(&scope, &x), 2);
            (Rule::ForallInI(x, a), vec![body])
        }
        RuleKind::ForallInE => {
            let x = g.bound();
            let a = t(g);
            let body = g.formula(&Gen::extend(&scope, &x), 2);
            let witness = if g.chance(0.5) { t(g) } else { g.leaf(&scope) };
            (
                Rule::ForallInE,
                vec![
                    Formula::forall_in(x, a.clone(), body),
                    Formula::member(witness, a),
                ],
            )
        }
        RuleKind::EqI => (Rule::EqI(t(g)), vec![]),
        RuleKind::EqE => {
            let motive = g.abs_formula(&scope, 1, 2);
            let r = t(g);
            let s = if g.chance(0.5) { r.clone() } else { t(g) };
            let before = motive.apply(std::slice::from_ref(&r)).expect("unary");
            (
                Rule::EqE {
                    motive,
                    from: r.clone(),
                    to: s.clone(),
                },
                vec![Formula::eq(r, s), before],
            )
        }
    };
    // Premise contexts come from the kernel, as during checking.
    let mut sequents = Vec::new();
    for (i, phi) in premises.iter().enumerate() {
        let pctx = rule
            .premise_context(&ctx, i, &premises[..i])
            .expect("generated premises fit the rule");
        sequents.push(Sequent::new(pctx, phi.clone()).expect("premise over its context"));
    }
    let conclusion = rule
        .conclude(&ctx, &premises)
        .expect("generated premises fit the rule");
    RuleInstance {
        premises: sequents,
        conclusion: Sequent::new(ctx, conclusion).expect("conclusion over context"),
    }
}

/// `trials` random applications of one rule.
pub fn rule_suite(kind: RuleKind, cfg: &OracleConfig) -> SuiteRow {
    let index = RuleKind::ALL.iter().position(|r| *r == kind).unwrap() as u64;
    let mut g = Gen::stream(cfg.seed, 1000 + index, cfg.rank);
    let mut row = SuiteRow::new(kind.name());
    for _ in 0..cfg.trials {
        let base = g.base();
        let rho = g.valuation(&base);
        let inst = rule_instance(&mut g, kind, &base);
        let verdict = check_rule_soundness(&inst, &rho, &cfg.eval);
        row.record(verdict, || {
            format!(
                "{kind}: {} under {}",
                inst.conclusion.meaning(),
                describe_valuation(&rho)
            )
        });
    }
    row
}

pub fn run(cfg: &OracleConfig) -> OracleReport {
    OracleReport {
        schema: 1,
        seed: cfg.seed,
        trials: cfg.trials,
        rank: cfg.rank,
        axioms: AxiomId::ALL.iter().map(|a| axiom_suite(*a, cfg)).collect(),
        rules: RuleKind::ALL.iter().map(|r| rule_suite(*r, cfg)).collect(),
    }
}

// ---------------------------------------------------------------------------
// Syntactic and semantic laws on random ASTs

/// An α-variant of `t`: some binders renamed to names that occur nowhere.
pub fn alpha_variant_formula(g: &mut Gen, phi: &Formula, fresh: &mut Fresh) -> Formula {
    let rename = |g: &mut Gen, x: &Name, body: &Formula, fresh: &mut Fresh| {
        if g.chance(0.5) {
            let y = fresh.name();
            (y.clone(), body.subst(x, &Term::Var(y)))
        } else {
            (x.clone(), body.clone())
        }
    };
    match phi {
        Formula::Or(a, b) => Formula::or(
            alpha_variant_formula(g, a, fresh),
            alpha_variant_formula(g, b, fresh),
        ),
        Formula::And(a, b) => Formula::and(
            alpha_variant_formula(g, a, fresh),
            alpha_variant_formula(g, b, fresh),
        ),
        Formula::Implies(a, b) => Formula::implies(
            alpha_variant_formula(g, a, fresh),
            alpha_variant_formula(g, b, fresh),
        ),
        Formula::Not(a) => Formula::not(alpha_variant_formula(g, a, fresh)),
        Formula::ExistsIn { var, domain, body } => {
            let (x, body) = rename(g, var, body, fresh);
            Formula::exists_in(
                x,
                (**domain).clone(),
                alpha_variant_formula(g, &body, fresh),
            )
        }
        Formula::ForallIn { var, domain, body } => {
            let (x, body) = rename(g, var, body, fresh);
            Formula::forall_in(
                x,
                (**domain).clone(),
                alpha_variant_formula(g, &body, fresh),
            )
        }
        other => other.clone(),
    }
}

fn law_row(name: &str, trials: usize, mut trial: impl FnMut() -> Verdict) -> SuiteRow {
    let mut row = SuiteRow::new(name);
    for i in 0..trials {
        let v = trial();
        row.record(v, || format!("trial {i}"));
    }
    row
}

fn holds(b: bool) -> Verdict {
    if b {
        Verdict::True
    } else {
        Verdict::False
    }
}

/// Weakening, preservation of well-formedness under substitution,
/// substitution/α congruence, the free-variable equation and the semantic
/// substitution lemma, each over `trials` random ASTs.
pub fn law_suites(cfg: &OracleConfig) -> Vec<SuiteRow> {
    let pool: Vec<Name> = ["a", "b", "c", "x"].iter().map(Name::new).collect();
    let subset =
        |g: &mut Gen| -> DeclContext { pool.iter().filter(|_| g.chance(0.5)).cloned().collect() };
    let mut rows = Vec::new();

    let mut g = Gen::stream(cfg.seed, 2000, cfg.rank);
    rows.push(law_row("Weakening", cfg.trials, || {
        let t = g.term(&pool, 3);
        let phi = g.formula(&pool, 3);
        let small = subset(&mut g);
        let mut large = small.clone();
        large.extend(subset(&mut g));
        let fv_t = t.free_vars().is_subset(&small);
        let fv_phi = phi.free_vars().is_subset(&small);
        holds(
            is_term_over(&small, &t) == fv_t
                && is_formula_over(&small, &phi) == fv_phi
                && (!fv_t || is_term_over(&large, &t))
                && (!fv_phi || is_formula_over(&large, &phi)),
        )
    }));

    let mut g = Gen::stream(cfg.seed, 2001, cfg.rank);
    rows.push(law_row("SubstitutionWellFormed", cfg.trials, || {
        let x = Name::new("x");
        let gamma: Vec<Name> = pool.iter().filter(|n| **n != x).cloned().collect();
        let t = g.term(&pool, 3);
        let phi = g.formula(&pool, 3);
        let s = g.term(&gamma, 2);
        let gamma: DeclContext = gamma.into_iter().collect();
        holds(is_term_over(&gamma, &t.subst(&x, &s)) && is_formula_over(&gamma, &phi.subst(&x, &s)))
    }));

    let mut g = Gen::stream(cfg.seed, 2002, cfg.rank);
    rows.push(law_row("SubstitutionAlphaCongruence", cfg.trials, || {
        let x = Name::new(g.pick(&["a", "b", "x"]));
        let phi = g.formula(&pool, 3);
        let s = g.term(&pool, 2);
        let mut fresh = Fresh::new(BTreeSet::new());
        fresh.avoid_formula(&phi);
        fresh.avoid_term(&s);
        let variant = alpha_variant_formula(&mut g, &phi, &mut fresh);
        holds(
            phi.alpha_eq(&variant)
                && variant.alpha_eq(&phi)
                && phi.subst(&x, &s).alpha_eq(&variant.subst(&x, &s))
                && phi.subst(&x, &Term::Var(x.clone())).alpha_eq(&phi),
        )
    }));

    let mut g = Gen::stream(cfg.seed, 2003, cfg.rank);
    rows.push(law_row("FreeVariableEquation", cfg.trials, || {
        let x = Name::new(g.pick(&["a", "x"]));
        let phi = g.formula(&pool, 3);
        let s = g.term(&pool, 2);
        let got = phi.subst(&x, &s).free_vars();
        let mut bound: BTreeSet<Name> = phi.free_vars();
        bound.remove(&x);
        bound.extend(s.free_vars());
        let ok = if phi.has_free(&x) {
            got == bound
        } else {
            got.is_subset(&bound) && got == phi.free_vars()
        };
        holds(ok)
    }));

    let mut g = Gen::stream(cfg.seed, 2004, cfg.rank);
    rows.push(law_row("SubstitutionLemma", cfg.trials, || {
        let base: Vec<Name> = pool.clone();
        let rho = g.valuation(&base);
        let x = Name::new("x");
        let phi = g.formula(&base, 3);
        let t = g.term(&base, 2);
        let lhs = eval_formula(&rho, &phi.subst(&x, &t), &cfg.eval);
        let value = match eval_term(&rho, &t, &cfg.eval) {
            Ok(v) => v,
            Err(e) => return Verdict::Skipped(e),
        };
        let mut updated = rho.clone();
        updated.insert(x.clone(), value);
        let rhs = eval_formula(&updated, &phi, &cfg.eval);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => holds(l == r),
            (Err(e), _) | (_, Err(e)) => Verdict::Skipped(e),
        }
    }));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> OracleConfig {
        OracleConfig {
            trials: 20,
            rank: 2,
            seed: 3,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn values_respect_rank() {
        let mut g = Gen::new(1, 2);
        for _ in 0..200 {
            assert!(g.value().rank() <= 2);
        }
    }

    #[test]
    fn generated_terms_are_over_scope() {
        let mut g = Gen::new(5, 2);
        let scope: Vec<Name> = ["a", "b"].iter().map(Name::new).collect();
        let gamma: DeclContext = scope.iter().cloned().collect();
        for _ in 0..200 {
            assert!(is_term_over(&gamma, &g.term(&scope, 3)));
            assert!(is_formula_over(&gamma, &g.formula(&scope, 3)));
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = axiom_suite(AxiomId::IRInduction, &small());
        let b = axiom_suite(AxiomId::IRInduction, &small());
        assert_eq!(a, b);
        assert_eq!(a.trials, 20);
    }

    #[test]
    fn small_run_has_no_failures() {
        let report = run(&small());
        for row in report.axioms.iter().chain(&report.rules) {
            assert_eq!(row.fail, 0, "{row:?}");
        }
    }

    #[test]
    fn rule_suites_are_not_vacuous() {
        let cfg = small();
        for kind in RuleKind::ALL {
            let mut g = Gen::stream(cfg.seed, 7, cfg.rank);
            let mut live = 0;
            for _ in 0..100 {
                let base = g.base();
                let rho = g.valuation(&base);
                let inst = rule_instance(&mut g, kind, &base);
                let all = inst
                    .premises
                    .iter()
                    .all(|p| eval_formula(&rho, &p.meaning(), &cfg.eval) == Ok(true));
                if all {
                    live += 1;
                }
            }
            assert!(
                live >= 5,
                "{kind}: only {live} of 100 trials have true premises"
            );
        }
    }

    #[test]
    fn unsound_rule_is_caught() {
        // OrIL with the conclusion weakened to the added disjunct alone.
        let cfg = small();
        let mut g = Gen::new(11, 2);
        let mut caught = false;
        for _ in 0..200 {
            let base = g.base();
            let rho = g.valuation(&base);
            let mut inst = rule_instance(&mut g, RuleKind::OrIL, &base);
            let Formula::Or(_, right) = inst.conclusion.conclusion().clone() else {
                unreachable!()
            };
            inst.conclusion = Sequent::new(inst.conclusion.context().clone(), *right).unwrap();
            if check_rule_soundness(&inst, &rho, &cfg.eval) == Verdict::False {
                caught = true;
                break;
            }
        }
        assert!(caught);
    }
}
