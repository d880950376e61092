//! Burst-mode asynchronous control machine.
//!
//! Two independent descriptions of the same controller live here:
//!
//! - [`Equations`]: the feedback-output Boolean equations, where REQ and SEL
//!   double as state variables. They are stored as data (sums of products of
//!   literals) so that single-literal mutants can be generated.
//! - [`ARCS`]: the four-state burst graph. State 0 tracks with the comparators
//!   on; the falling-crossing path is 0 → 1 → 3 → 0 and the rising-crossing
//!   path is 0 → 2 → 3 → 0.
//!
//! [`check_equivalence`] walks every burst sequence of the graph, applies each
//! burst's input transitions in every order, and checks that the equations
//! produce exactly the arc's output transitions, do so only once the burst is
//! complete, and settle in one evaluation pass.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    Inc,
    Dec,
    Ack,
    On,
    Req,
    Sel,
    L,
}

impl Wire {
    pub fn name(self) -> &'static str {
        match self {
            Wire::Inc => "INC",
            Wire::Dec => "DEC",
            Wire::Ack => "ACK",
            Wire::On => "ON",
            Wire::Req => "REQ",
            Wire::Sel => "SEL",
            Wire::L => "L",
        }
    }
}

/// A single `+` (0 → 1) or `-` (1 → 0) edge on a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub wire: Wire,
    pub rising: bool,
}

impl Transition {
    pub const fn rise(wire: Wire) -> Self {
        Transition { wire, rising: true }
    }

    pub const fn fall(wire: Wire) -> Self {
        Transition { wire, rising: false }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.wire.name(), if self.rising { '+' } else { '-' })
    }
}

struct TransitionSet<'a>(&'a [Transition]);

impl fmt::Display for TransitionSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

/// The seven controller wires.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AfsmSignals {
    pub inc: bool,
    pub dec: bool,
    pub ack: bool,
    pub on: bool,
    pub req: bool,
    pub sel: bool,
    pub l: bool,
}

impl AfsmSignals {
    /// Configuration after reset: all inputs low, settled into the tracking state.
    pub fn reset() -> Self {
        afsm_eval(&AfsmSignals::default(), false, false, false)
    }

    pub fn get(&self, wire: Wire) -> bool {
        match wire {
            Wire::Inc => self.inc,
            Wire::Dec => self.dec,
            Wire::Ack => self.ack,
            Wire::On => self.on,
            Wire::Req => self.req,
            Wire::Sel => self.sel,
            Wire::L => self.l,
        }
    }

    pub fn set(&mut self, wire: Wire, value: bool) {
        match wire {
            Wire::Inc => self.inc = value,
            Wire::Dec => self.dec = value,
            Wire::Ack => self.ack = value,
            Wire::On => self.on = value,
            Wire::Req => self.req = value,
            Wire::Sel => self.sel = value,
            Wire::L => self.l = value,
        }
    }

    pub fn outputs(&self) -> Outputs {
        Outputs { on: self.on, req: self.req, sel: self.sel, l: self.l }
    }

    /// Graph state implied by the wire values, if they correspond to one.
    pub fn state(&self) -> Option<AfsmState> {
        match (self.on, self.req, self.sel, self.l) {
            (true, false, false, false) => Some(AfsmState::S0),
            (false, true, true, false) => Some(AfsmState::S1),
            (false, true, false, false) => Some(AfsmState::S2),
            (false, false, false, true) => Some(AfsmState::S3),
            _ => None,
        }
    }
}

impl fmt::Display for AfsmSignals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |v: bool| if v { 1 } else { 0 };
        write!(
            f,
            "INC={} DEC={} ACK={} | ON={} REQ={} SEL={} L={}",
            b(self.inc),
            b(self.dec),
            b(self.ack),
            b(self.on),
            b(self.req),
            b(self.sel),
            b(self.l)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub on: bool,
    pub req: bool,
    pub sel: bool,
    pub l: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AfsmState {
    S0,
    S1,
    S2,
    S3,
}

impl fmt::Display for AfsmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            AfsmState::S0 => 0,
            AfsmState::S1 => 1,
            AfsmState::S2 => 2,
            AfsmState::S3 => 3,
        };
        write!(f, "S{n}")
    }
}

// ---------------------------------------------------------------------------
// Boolean equations

/// Variables an equation may read: the three inputs and the two fed-back outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Inc,
    Dec,
    Ack,
    Req,
    Sel,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::Inc => "INC",
            Var::Dec => "DEC",
            Var::Ack => "ACK",
            Var::Req => "REQ",
            Var::Sel => "SEL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: Var,
    pub negated: bool,
}

const fn pos(var: Var) -> Literal {
    Literal { var, negated: false }
}

const fn neg(var: Var) -> Literal {
    Literal { var, negated: true }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        f.write_str(self.var.name())
    }
}

/// `output = [~](term_1 + term_2 + ...)`, each term a product of literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub output: Wire,
    pub inverted: bool,
    pub terms: Vec<Vec<Literal>>,
}

impl Equation {
    fn eval(&self, env: &Env) -> bool {
        let sum = self.terms.iter().any(|term| term.iter().all(|lit| env.get(lit.var) != lit.negated));
        sum != self.inverted
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.output.name())?;
        if self.inverted {
            f.write_str("~(")?;
        }
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            for (j, lit) in term.iter().enumerate() {
                if j > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{lit}")?;
            }
        }
        if self.inverted {
            f.write_str(")")?;
        }
        Ok(())
    }
}

struct Env {
    inc: bool,
    dec: bool,
    ack: bool,
    req: bool,
    sel: bool,
}

impl Env {
    fn get(&self, v: Var) -> bool {
        match v {
            Var::Inc => self.inc,
            Var::Dec => self.dec,
            Var::Ack => self.ack,
            Var::Req => self.req,
            Var::Sel => self.sel,
        }
    }
}

/// Upper bound on delta cycles before an evaluation is declared oscillating.
pub const MAX_PASSES: u32 = 8;

/// Result of settling the equations after an input change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settled {
    pub signals: AfsmSignals,
    /// Passes that changed at least one output.
    pub passes: u32,
    pub converged: bool,
}

/// The four output equations, in the order REQ, ON, SEL, L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equations {
    pub eqs: [Equation; 4],
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub description: String,
    pub equations: Equations,
}

impl Equations {
    pub fn standard() -> Self {
        use Var::*;
        Equations {
            eqs: [
                Equation {
                    output: Wire::Req,
                    inverted: false,
                    terms: vec![vec![pos(Inc)], vec![pos(Dec)], vec![neg(Ack), pos(Req)]],
                },
                Equation {
                    output: Wire::On,
                    inverted: true,
                    terms: vec![vec![pos(Inc)], vec![pos(Dec)], vec![pos(Ack)], vec![pos(Req)]],
                },
                Equation { output: Wire::Sel, inverted: false, terms: vec![vec![pos(Dec)], vec![neg(Ack), pos(Sel)]] },
                Equation { output: Wire::L, inverted: false, terms: vec![vec![neg(Inc), neg(Dec), pos(Ack)]] },
            ],
        }
    }

    /// One combinational pass over the outputs given inputs and fed-back REQ/SEL.
    fn pass(&self, s: &AfsmSignals) -> AfsmSignals {
        let env = Env { inc: s.inc, dec: s.dec, ack: s.ack, req: s.req, sel: s.sel };
        let mut next = *s;
        for eq in &self.eqs {
            next.set(eq.output, eq.eval(&env));
        }
        next
    }

    /// Applies new input levels and re-evaluates until the outputs are stable.
    pub fn settle(&self, prev: &AfsmSignals, inc: bool, dec: bool, ack: bool) -> Settled {
        let mut cur = AfsmSignals { inc, dec, ack, ..*prev };
        let mut passes = 0;
        for _ in 0..MAX_PASSES {
            let next = self.pass(&cur);
            if next == cur {
                return Settled { signals: cur, passes, converged: true };
            }
            passes += 1;
            cur = next;
        }
        Settled { signals: cur, passes, converged: false }
    }

    /// Copy with term `term` of the equation driving `output` removed.
    pub fn without_term(&self, output: Wire, term: usize) -> Self {
        let mut out = self.clone();
        if let Some(eq) = out.eqs.iter_mut().find(|e| e.output == output) {
            if term < eq.terms.len() {
                eq.terms.remove(term);
            }
        }
        out
    }

    /// Every variant obtained by negating or deleting exactly one literal.
    /// Deleting the only literal of a term deletes the term.
    pub fn single_literal_mutations(&self) -> Vec<Mutation> {
        let mut out = Vec::new();
        for (e, eq) in self.eqs.iter().enumerate() {
            for (t, term) in eq.terms.iter().enumerate() {
                for (l, lit) in term.iter().enumerate() {
                    let mut negated = self.clone();
                    negated.eqs[e].terms[t][l].negated = !lit.negated;
                    out.push(Mutation {
                        description: format!("{}: negate {} in term {}", eq.output.name(), lit, t + 1),
                        equations: negated,
                    });

                    let mut deleted = self.clone();
                    if term.len() == 1 {
                        deleted.eqs[e].terms.remove(t);
                    } else {
                        deleted.eqs[e].terms[t].remove(l);
                    }
                    out.push(Mutation {
                        description: format!("{}: delete {} from term {}", eq.output.name(), lit, t + 1),
                        equations: deleted,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for Equations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.eqs.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{eq}")?;
        }
        Ok(())
    }
}

fn standard_equations() -> &'static Equations {
    static EQS: OnceLock<Equations> = OnceLock::new();
    EQS.get_or_init(Equations::standard)
}

/// Evaluates the controller equations for new input levels, iterated to a fixpoint.
pub fn afsm_eval(prev: &AfsmSignals, inc: bool, dec: bool, ack: bool) -> AfsmSignals {
    standard_equations().settle(prev, inc, dec, ack).signals
}

/// A running controller instance.
#[derive(Debug, Clone)]
pub struct Afsm {
    signals: AfsmSignals,
}

impl Default for Afsm {
    fn default() -> Self {
        Afsm { signals: AfsmSignals::reset() }
    }
}

impl Afsm {
    pub fn signals(&self) -> AfsmSignals {
        self.signals
    }

    pub fn drive(&mut self, inc: bool, dec: bool, ack: bool) -> AfsmSignals {
        self.signals = afsm_eval(&self.signals, inc, dec, ack);
        self.signals
    }
}

// ---------------------------------------------------------------------------
// State graph

#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub from: AfsmState,
    pub to: AfsmState,
    pub burst: &'static [Transition],
    pub outputs: &'static [Transition],
}

use Transition as T;
use Wire as W;

/// The burst graph. Arcs leaving a state are listed falling-crossing first.
pub const ARCS: [Arc; 5] = [
    Arc {
        from: AfsmState::S0,
        to: AfsmState::S1,
        burst: &[T::rise(W::Dec)],
        outputs: &[T::fall(W::On), T::rise(W::Req), T::rise(W::Sel)],
    },
    Arc {
        from: AfsmState::S0,
        to: AfsmState::S2,
        burst: &[T::rise(W::Inc)],
        outputs: &[T::fall(W::On), T::rise(W::Req)],
    },
    Arc {
        from: AfsmState::S1,
        to: AfsmState::S3,
        burst: &[T::fall(W::Dec), T::rise(W::Ack)],
        outputs: &[T::fall(W::Req), T::rise(W::L), T::fall(W::Sel)],
    },
    Arc {
        from: AfsmState::S2,
        to: AfsmState::S3,
        burst: &[T::fall(W::Inc), T::rise(W::Ack)],
        outputs: &[T::fall(W::Req), T::rise(W::L)],
    },
    Arc {
        from: AfsmState::S3,
        to: AfsmState::S0,
        burst: &[T::fall(W::Ack)],
        outputs: &[T::fall(W::L), T::rise(W::On)],
    },
];

pub fn enabled_arcs(state: AfsmState) -> impl Iterator<Item = &'static Arc> {
    ARCS.iter().filter(move |a| a.from == state)
}

fn same_set(a: &[Transition], b: &[Transition]) -> bool {
    a.len() == b.len() && a.iter().all(|t| b.contains(t))
}

/// Follows the arc leaving `state` labelled with `burst` (order-insensitive).
pub fn graph_step(state: AfsmState, burst: &[Transition]) -> Result<(AfsmState, Vec<Transition>)> {
    enabled_arcs(state)
        .find(|a| same_set(a.burst, burst))
        .map(|a| (a.to, a.outputs.to_vec()))
        .ok_or_else(|| Error::BurstNotEnabled { state: state.to_string(), burst: TransitionSet(burst).to_string() })
}

// ---------------------------------------------------------------------------
// Equivalence checking

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// States visited before the failing arc, starting at S0.
    pub path: Vec<AfsmState>,
    pub from: AfsmState,
    pub to: AfsmState,
    /// Input transition order that exposed the failure.
    pub ordering: Vec<Transition>,
    pub reason: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(ToString::to_string).collect();
        write!(
            f,
            "arc {} -> {} via {} after path [{}]: {}",
            self.from,
            self.to,
            TransitionSet(&self.ordering),
            path.join(" "),
            self.reason
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub max_depth: usize,
    /// Burst sequences of exactly `max_depth` arcs that were walked.
    pub sequences: usize,
    /// Arc traversals checked, counting every input ordering separately.
    pub orderings_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth:              {}", self.max_depth)?;
        writeln!(f, "burst sequences:    {}", self.sequences)?;
        writeln!(f, "orderings checked:  {}", self.orderings_checked)?;
        match &self.counterexample {
            None => write!(f, "result:             PASS (0 counterexamples)"),
            Some(c) => write!(f, "result:             FAIL\ncounterexample:     {c}"),
        }
    }
}

pub fn check_equivalence(max_depth: usize) -> EquivalenceReport {
    check_equivalence_with(standard_equations(), max_depth)
}

/// Exhaustively compares `eqs` against [`ARCS`] over every burst sequence of
/// length `max_depth` (and therefore every shorter prefix).
pub fn check_equivalence_with(eqs: &Equations, max_depth: usize) -> EquivalenceReport {
    let mut report = EquivalenceReport { max_depth, sequences: 0, orderings_checked: 0, counterexample: None };

    let reset = eqs.settle(&AfsmSignals::default(), false, false, false);
    let expected = Outputs { on: true, req: false, sel: false, l: false };
    let reset_problem = if !reset.converged {
        Some("reset configuration does not settle".to_owned())
    } else if reset.signals.outputs() != expected {
        Some(format!("reset settles to {} instead of the tracking state", reset.signals))
    } else {
        None
    };
    if let Some(reason) = reset_problem {
        report.counterexample =
            Some(Counterexample { path: vec![], from: AfsmState::S0, to: AfsmState::S0, ordering: vec![], reason });
        return report;
    }

    let mut path = vec![AfsmState::S0];
    walk(eqs, AfsmState::S0, reset.signals, max_depth, &mut path, &mut report);
    report
}

fn walk(
    eqs: &Equations,
    state: AfsmState,
    signals: AfsmSignals,
    remaining: usize,
    path: &mut Vec<AfsmState>,
    report: &mut EquivalenceReport,
) {
    if report.counterexample.is_some() {
        return;
    }
    if remaining == 0 {
        report.sequences += 1;
        return;
    }
    for arc in enabled_arcs(state) {
        let mut landed = None;
        for ordering in permutations(arc.burst) {
            report.orderings_checked += 1;
            match run_burst(eqs, arc, &signals, &ordering) {
                Ok(end) => match landed {
                    None => landed = Some(end),
                    Some(prev) if prev != end => {
                        report.counterexample = Some(Counterexample {
                            path: path.clone(),
                            from: arc.from,
                            to: arc.to,
                            ordering,
                            reason: format!("ordering-dependent result: {end} vs {prev}"),
                        });
                        return;
                    }
                    Some(_) => {}
                },
                Err(reason) => {
                    report.counterexample =
                        Some(Counterexample { path: path.clone(), from: arc.from, to: arc.to, ordering, reason });
                    return;
                }
            }
        }
        let end = landed.expect("every arc has at least one input ordering");
        path.push(arc.to);
        walk(eqs, arc.to, end, remaining - 1, path, report);
        path.pop();
        if report.counterexample.is_some() {
            return;
        }
    }
}

/// Applies one ordering of `arc`'s input burst, returning the settled wires.
fn run_burst(
    eqs: &Equations,
    arc: &Arc,
    start: &AfsmSignals,
    ordering: &[Transition],
) -> std::result::Result<AfsmSignals, String> {
    let mut expected = start.outputs();
    for t in arc.outputs {
        let mut probe = AfsmSignals { on: expected.on, req: expected.req, sel: expected.sel, l: expected.l, ..*start };
        if probe.get(t.wire) == t.rising {
            return Err(format!("graph expects {t} but the wire is already at that level"));
        }
        probe.set(t.wire, t.rising);
        expected = probe.outputs();
    }

    let mut cur = *start;
    for (i, t) in ordering.iter().enumerate() {
        if cur.get(t.wire) == t.rising {
            return Err(format!("input {t} is not a transition from {cur}"));
        }
        let mut inputs = cur;
        inputs.set(t.wire, t.rising);
        let settled = eqs.settle(&cur, inputs.inc, inputs.dec, inputs.ack);
        if !settled.converged {
            return Err(format!("does not settle after {t}"));
        }
        if settled.passes > 1 {
            return Err(format!("needs {} evaluation passes after {t}", settled.passes));
        }
        let s = settled.signals;
        if s.l && !(s.ack && !s.inc && !s.dec) {
            return Err(format!("L high outside an acknowledged update: {s}"));
        }
        if s.on != (!s.inc && !s.dec && !s.ack && !s.req) {
            return Err(format!("ON inconsistent with the tracking configuration: {s}"));
        }
        let last = i + 1 == ordering.len();
        if !last && s.outputs() != start.outputs() {
            return Err(format!("outputs changed before the burst completed, after {t}: {s}"));
        }
        if last && s.outputs() != expected {
            return Err(format!("settled to {s}, expected outputs {expected:?}"));
        }
        cur = s;
    }
    if cur.state() != Some(arc.to) {
        return Err(format!("landed in {:?}, expected {}", cur.state(), arc.to));
    }
    Ok(cur)
}

fn permutations(items: &[Transition]) -> Vec<Vec<Transition>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(inc: u8, dec: u8, ack: u8, req: u8, sel: u8) -> AfsmSignals {
        AfsmSignals { inc: inc == 1, dec: dec == 1, ack: ack == 1, req: req == 1, sel: sel == 1, ..Default::default() }
    }

    #[test]
    fn tracking_idle() {
        let s = afsm_eval(&AfsmSignals::default(), false, false, false);
        assert!(s.on && !s.req && !s.sel && !s.l);
        assert_eq!(s.state(), Some(AfsmState::S0));
    }

    #[test]
    fn rising_crossing_burst() {
        let s = afsm_eval(&AfsmSignals::reset(), true, false, false);
        assert!(s.req && !s.on && !s.sel && !s.l);
    }

    #[test]
    fn ack_rise_loads_register() {
        // after a dec burst, with the comparator outputs already discharged
        let prev = sig(0, 0, 0, 1, 1);
        let s = afsm_eval(&prev, false, false, true);
        assert!(!s.req && s.l && !s.on);
        assert!(!s.sel);
    }

    #[test]
    fn ack_fall_returns_to_tracking() {
        let prev = afsm_eval(&sig(0, 0, 0, 1, 1), false, false, true);
        let s = afsm_eval(&prev, false, false, false);
        assert!(s.on && !s.req && !s.l);
    }

    #[test]
    fn graph_examples() {
        let (to, out) = graph_step(AfsmState::S0, &[T::rise(W::Dec)]).unwrap();
        assert_eq!(to, AfsmState::S1);
        assert!(same_set(&out, &[T::fall(W::On), T::rise(W::Req), T::rise(W::Sel)]));

        let (to, out) = graph_step(AfsmState::S2, &[T::rise(W::Ack), T::fall(W::Inc)]).unwrap();
        assert_eq!(to, AfsmState::S3);
        assert!(same_set(&out, &[T::fall(W::Req), T::rise(W::L)]));

        let (to, out) = graph_step(AfsmState::S3, &[T::fall(W::Ack)]).unwrap();
        assert_eq!(to, AfsmState::S0);
        assert!(same_set(&out, &[T::fall(W::L), T::rise(W::On)]));
    }

    #[test]
    fn burst_not_enabled() {
        let err = graph_step(AfsmState::S1, &[T::rise(W::Inc)]).unwrap_err();
        assert!(matches!(err, Error::BurstNotEnabled { .. }));
        assert!(graph_step(AfsmState::S0, &[T::rise(W::Ack)]).is_err());
    }

    #[test]
    fn equivalence_depths() {
        for depth in [1, 2, 6, 9] {
            let r = check_equivalence(depth);
            assert!(r.passed(), "depth {depth}: {r}");
            assert!(r.sequences > 0);
        }
        // S0 branches two ways, other states are deterministic
        assert_eq!(check_equivalence(1).sequences, 2);
        assert_eq!(check_equivalence(6).sequences, 4);
    }

    #[test]
    fn req_hold_term_is_needed() {
        let broken = Equations::standard().without_term(Wire::Req, 2);
        assert_eq!(broken.eqs[0].to_string(), "REQ = INC + DEC");
        let r = check_equivalence_with(&broken, 6);
        let c = r.counterexample.expect("mutant must be caught");
        assert_eq!((c.from, c.to), (AfsmState::S1, AfsmState::S3));
    }

    #[test]
    fn every_single_literal_mutant_is_caught() {
        let muts = Equations::standard().single_literal_mutations();
        // 14 literals, each negated or deleted
        assert_eq!(muts.len(), 28);
        for m in muts {
            let r = check_equivalence_with(&m.equations, 6);
            assert!(!r.passed(), "mutant survived: {}\n{}", m.description, m.equations);
        }
    }

    #[test]
    fn l_implies_acknowledged_update() {
        for bits in 0u8..32 {
            let prev = sig(0, 0, 0, bits & 1, (bits >> 1) & 1);
            let s = afsm_eval(&prev, bits & 4 != 0, bits & 8 != 0 && bits & 4 == 0, bits & 16 != 0);
            if s.l {
                assert!(s.ack && !s.inc && !s.dec);
            }
        }
    }

    #[test]
    fn display_equations() {
        let text = Equations::standard().to_string();
        assert_eq!(
            text,
            "REQ = INC + DEC + ~ACK.REQ\nON = ~(INC + DEC + ACK + REQ)\nSEL = DEC + ~ACK.SEL\nL = ~INC.~DEC.ACK"
        );
    }
}
