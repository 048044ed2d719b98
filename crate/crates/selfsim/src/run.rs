//! Executes scripts statement by statement against one engine.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use selfsim_core::adic::{reduce_mod_r, PowerSeries};
use selfsim_core::closure::{extract_relations, minimal_exponent, state_closure, zeta, DEFAULT_STATE_CAP};
use selfsim_core::repr::{conjugates_to_adding_machine, phi_rep, prop4_conjugator, DEFAULT_MACHINE_CAP};
use selfsim_core::tree::{AutExpr, Base, Context, Engine, Factor, Forest, GenId, Portrait, System};
use selfsim_core::Permutation;
use serde_json::{json, Value};

use crate::ast::{BaseAst, Command, ContextAst, Script, SeriesAst, Statement, WordAst};
use crate::error::CliError;
use crate::formats::{
    closure_json, portrait_dot, portrait_json, presentation_json, quotient_text, series_json, TripleFile,
};
use crate::suites;

/// Default for each of `K`, `D` and `L`.
pub const DEFAULT_PRECISION: usize = 8;
/// Default cap on the exponent searched by `order`.
pub const DEFAULT_ORDER_CAP: u64 = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// One JSON object per command.
    #[default]
    Json,
    /// Human-readable text.
    Pretty,
}

/// Settings from the command line. Values given here take precedence over a
/// script's `context` line.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub context: ContextAst,
    pub format: Format,
    /// Print portraits as Graphviz instead of JSON.
    pub dot: bool,
    pub node_cap: Option<usize>,
    /// Directory that `represent` paths are relative to.
    pub base_dir: PathBuf,
}

impl Options {
    /// Fills unset fields from `script`, then from the defaults, and checks the result.
    pub fn resolve_context(&self, script: &ContextAst) -> Result<Context, selfsim_core::Error> {
        let m = self.context.m.or(script.m).unwrap_or(2);
        let l = self.context.l.or(script.l).unwrap_or(DEFAULT_PRECISION);
        let k = self.context.k.or(script.k).unwrap_or(DEFAULT_PRECISION.max(l));
        let d = self.context.d.or(script.d).unwrap_or(DEFAULT_PRECISION.max(l));
        Context::new(m, k, d, l)
    }
}

/// What a finished run reports besides its output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    /// Failed `verify` checks, `assert`s and unverified conjugators.
    pub failures: Vec<String>,
}

struct Session<'a> {
    opts: &'a Options,
    out: &'a mut dyn Write,
    script_ctx: ContextAst,
    engine: Option<Engine>,
    declared: HashMap<String, usize>,
    defined: HashSet<String>,
    lets: HashMap<String, AutExpr>,
    failures: Vec<String>,
}

/// Runs every statement in order, writing one record per command to `out`.
pub fn run(script: &Script, opts: &Options, out: &mut dyn Write) -> Result<Summary, CliError> {
    let mut s = Session {
        opts,
        out,
        script_ctx: ContextAst::default(),
        engine: None,
        declared: HashMap::new(),
        defined: HashSet::new(),
        lets: HashMap::new(),
        failures: Vec::new(),
    };
    for located in &script.statements {
        let line = located.line;
        match &located.statement {
            Statement::Context(c) => {
                if s.engine.is_some() {
                    return Err(script_err(line, "context must come before definitions and commands"));
                }
                s.script_ctx = c.clone();
                opts.resolve_context(&s.script_ctx).map_err(|e| CliError::from_core(line, e))?;
            }
            other => {
                s.ensure_engine(script, line)?;
                s.statement(other, line)?;
            }
        }
    }
    s.out.flush().map_err(io_err)?;
    Ok(Summary { failures: s.failures })
}

fn script_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Script { line, message: msg.into() }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

impl Session<'_> {
    fn engine(&mut self) -> &mut Engine {
        self.engine.as_mut().expect("engine created before statements")
    }

    fn ctx(&self) -> Context {
        self.engine.as_ref().expect("engine created before statements").context()
    }

    /// Creates the engine and declares every generator of the script, so
    /// that recursions may refer to generators defined further down.
    fn ensure_engine(&mut self, script: &Script, line: usize) -> Result<(), CliError> {
        if self.engine.is_some() {
            return Ok(());
        }
        let ctx = self.opts.resolve_context(&self.script_ctx).map_err(|e| CliError::from_core(line, e))?;
        let mut sys = System::new(ctx);
        for l in &script.statements {
            if let Statement::Gen { name, .. } = &l.statement {
                if self.declared.contains_key(name) {
                    return Err(script_err(l.line, format!("generator {name} defined twice")));
                }
                sys.declare(name).map_err(|e| CliError::from_core(l.line, e))?;
                self.declared.insert(name.clone(), l.line);
            }
        }
        let mut engine = Engine::new(sys);
        if let Some(cap) = self.opts.node_cap {
            engine.set_node_cap(cap);
        }
        self.engine = Some(engine);
        Ok(())
    }

    fn series(&self, s: &SeriesAst) -> PowerSeries {
        let c = self.ctx();
        PowerSeries::from_bigints(c.m, c.k, c.d, &s.coeffs)
    }

    fn perm(&self, cycles: &[Vec<u32>], line: usize) -> Result<Permutation, CliError> {
        Permutation::from_cycles(self.ctx().m as usize, cycles).map_err(|e| CliError::from_core(line, e))
    }

    fn word(&self, w: &WordAst, line: usize) -> Result<AutExpr, CliError> {
        let m = self.ctx().m as usize;
        let mut factors = Vec::with_capacity(w.factors.len());
        for f in &w.factors {
            let base = match &f.base {
                BaseAst::Name(n) => {
                    if let Some(e) = self.lets.get(n) {
                        Base::Word(e.clone())
                    } else if self.declared.contains_key(n) {
                        let sys = self.engine.as_ref().expect("engine").system();
                        Base::Gen(sys.lookup(n).map_err(|e| CliError::from_core(line, e))?)
                    } else {
                        return Err(script_err(line, format!("undefined name {n}")));
                    }
                }
                BaseAst::Rooted(c) => Base::Rooted(self.perm(c, line)?),
                BaseAst::Tuple(items) => {
                    if items.len() != m {
                        return Err(script_err(line, format!("tuple has {} entries, expected {m}", items.len())));
                    }
                    Base::Tuple(items.iter().map(|i| self.word(i, line)).collect::<Result<_, _>>()?)
                }
                BaseAst::Group(inner) => Base::Word(self.word(inner, line)?),
            };
            factors.push(Factor {
                base,
                exp: f.exp.as_ref().map(|s| self.series(s)),
                shift: f.shift,
                inverse: f.inverse,
            });
        }
        Ok(AutExpr::from_factors(factors))
    }

    /// A word for a command: every generator in it must already be defined.
    fn command_word(&self, w: &WordAst, line: usize) -> Result<AutExpr, CliError> {
        let e = self.word(w, line)?;
        let mut gens = Vec::new();
        e.generators(&mut gens);
        let sys = self.engine.as_ref().expect("engine").system();
        if let Some(g) = gens.iter().find(|g| !sys.is_defined(**g)) {
            let name = sys.name(*g);
            return Err(script_err(line, format!("generator {name} is used before its definition")));
        }
        Ok(e)
    }

    fn emit(&mut self, record: Value, pretty: &str) -> Result<(), CliError> {
        match self.opts.format {
            Format::Json => writeln!(self.out, "{record}"),
            Format::Pretty => writeln!(self.out, "{}", pretty.trim_end()),
        }
        .map_err(io_err)
    }

    fn fail(&mut self, line: usize, what: String) {
        self.failures.push(format!("line {line}: {what}"));
    }

    fn statement(&mut self, st: &Statement, line: usize) -> Result<(), CliError> {
        match st {
            Statement::Context(_) => unreachable!("handled by run"),
            Statement::Gen { name, entries, cycles } => {
                let m = self.ctx().m as usize;
                if entries.len() != m {
                    return Err(script_err(line, format!("{name} has {} entries, expected {m}", entries.len())));
                }
                let root = self.perm(cycles, line)?;
                let words = entries.iter().map(|w| self.word(w, line)).collect::<Result<Vec<_>, _>>()?;
                let sys = self.engine().system_mut();
                let id = sys.lookup(name).map_err(|e| CliError::from_core(line, e))?;
                sys.define(id, root, Some(words), None).map_err(|e| CliError::from_core(line, e))?;
                self.defined.insert(name.clone());
                Ok(())
            }
            Statement::Let { name, word } => {
                if self.declared.contains_key(name) || self.lets.contains_key(name) {
                    return Err(script_err(line, format!("name {name} is already in use")));
                }
                let e = self.word(word, line)?;
                self.lets.insert(name.clone(), e);
                Ok(())
            }
            Statement::Command(c) => self.command(c, line),
        }
    }

    fn command(&mut self, c: &Command, line: usize) -> Result<(), CliError> {
        let core = |e| CliError::from_core(line, e);
        let ctx = self.ctx();
        match c {
            Command::Portrait { word, depth } => {
                let w = self.command_word(word, line)?;
                let depth = depth.unwrap_or(ctx.l);
                let p = self.engine().portrait(&w, depth).map_err(core)?;
                let shown = self.engine().system().show(&w).to_string();
                if self.opts.dot {
                    return write!(self.out, "{}", portrait_dot(&p, &shown)).map_err(io_err);
                }
                let record = json!({ "cmd": "portrait", "line": line, "word": shown, "portrait": portrait_json(&p) });
                self.emit(record, &pretty_portrait(&shown, &p))
            }
            Command::Act { word, path } => {
                let w = self.command_word(word, line)?;
                if let Some(y) = path.iter().find(|&&y| y == 0 || y > ctx.m) {
                    return Err(script_err(line, format!("letter {y} outside 1..={}", ctx.m)));
                }
                let u: Vec<u32> = path.iter().map(|y| y - 1).collect();
                let (image, state) = self.engine().act(&w, &u).map_err(core)?;
                let image: Vec<u32> = image.iter().map(|y| y + 1).collect();
                let sys = self.engine().system();
                let (shown, state) = (sys.show(&w).to_string(), sys.show(&state).to_string());
                let pretty = format!("{shown} sends {} to {}, state {state}", join(path), join(&image));
                self.emit(json!({ "cmd": "act", "line": line, "word": shown, "vertex": path, "image": image, "state": state }), &pretty)
            }
            Command::Order { word, cap } => {
                let w = self.command_word(word, line)?;
                let cap = cap.unwrap_or(DEFAULT_ORDER_CAP);
                let n = minimal_exponent(self.engine(), std::slice::from_ref(&w), ctx.l, cap).map_err(core)?;
                let shown = self.engine().system().show(&w).to_string();
                let pretty = match n {
                    Some(n) => format!("order of {shown} is {n} to depth {}", ctx.l),
                    None => format!("{shown} has no order up to {cap} to depth {}", ctx.l),
                };
                self.emit(
                    json!({ "cmd": "order", "line": line, "word": shown, "order": n, "cap": cap, "depth": ctx.l }),
                    &pretty,
                )
            }
            Command::Zeta { word } => {
                let w = self.command_word(word, line)?;
                let z = zeta(self.engine(), &w, ctx.l).map_err(core)?;
                let shown = self.engine().system().show(&w).to_string();
                self.emit(
                    json!({ "cmd": "zeta", "line": line, "word": shown, "zeta": z }),
                    &format!("zeta({shown}) = {z}"),
                )
            }
            Command::Closure { words } => {
                let ws = words.iter().map(|w| self.command_word(w, line)).collect::<Result<Vec<_>, _>>()?;
                self.engine().enable_abelian_normalization().map_err(core)?;
                let report = state_closure(self.engine(), &ws, DEFAULT_STATE_CAP).map_err(core)?;
                let body = closure_json(&report, self.engine().system());
                let mut pretty = format!(
                    "closure: {} states, abelian {}, transitive {}, recurrent witnessed {}\n",
                    report.elements.len(),
                    report.abelian,
                    report.transitive,
                    report.recurrent_witnessed
                );
                for (i, e) in report.elements.iter().enumerate() {
                    let states: Vec<String> = e.states.iter().map(|s| format!("s{s}")).collect();
                    let sys = self.engine().system();
                    writeln!(pretty, "  s{i} = {} = ({}) {}", sys.show(&e.expr), states.join(", "), e.root).unwrap();
                }
                self.emit(json!({ "cmd": "closure", "line": line, "report": body }), &pretty)
            }
            Command::Present { words } => {
                let ws = words.iter().map(|w| self.command_word(w, line)).collect::<Result<Vec<_>, _>>()?;
                self.engine().enable_abelian_normalization().map_err(core)?;
                let p = extract_relations(self.engine(), &ws).map_err(core)?;
                let checks = (0..ws.len())
                    .map(|i| self.engine().is_identity_to_depth(&p.relation_word(i), ctx.l))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(core)?;
                for (i, ok) in checks.iter().enumerate() {
                    if !ok {
                        self.fail(line, format!("relation {i} does not hold"));
                    }
                }
                let body = presentation_json(&p, self.engine().system(), &checks);
                let mut pretty = format!("annihilator r = {}\n", p.annihilator);
                for (i, (rel, &ok)) in p.relations.iter().zip(&checks).enumerate() {
                    let rhs: Vec<String> = rel.iter().map(|q| format!("x({q})")).collect();
                    writeln!(pretty, "  b{i}^{} = prod b^[{}]  {}", p.orders[i], rhs.join(", "), pass_word(ok))
                        .unwrap();
                }
                self.emit(json!({ "cmd": "present", "line": line, "presentation": body }), &pretty)
            }
            Command::Reduce { value, r } => {
                let (v, r) = (self.series(value), self.series(r));
                let q = reduce_mod_r(&v, &r).map_err(core)?;
                let text = quotient_text(&q);
                let record = json!({
                    "cmd": "reduce", "line": line, "value": value.to_string(), "r": r.to_string(),
                    "result": text, "digits": q.digits(), "normal_form": series_json(&q.to_series()),
                });
                self.emit(record, &format!("{value} = {text} mod {r}"))
            }
            Command::Conjugate { name, j } => {
                if !self.defined.contains(name) {
                    return Err(script_err(line, format!("{name} is not a defined generator")));
                }
                let g: GenId = self.engine().system().lookup(name).map_err(core)?;
                self.engine().enable_abelian_normalization().map_err(core)?;
                let h = prop4_conjugator(self.engine(), g, *j).map_err(core)?;
                let verified = conjugates_to_adding_machine(self.engine(), g, &h.expr(), *j).map_err(core)?;
                if !verified {
                    self.fail(line, format!("conjugator for {name} does not reach the adding machine"));
                }
                let sys = self.engine().system();
                let stages: Vec<Value> = h
                    .stages
                    .iter()
                    .enumerate()
                    .map(|(n, st)| {
                        json!({
                            "level": n * j,
                            "rooted": st.rooted.to_string(),
                            "tuple": st.tuple.iter().map(|w| sys.show(w).to_string()).collect::<Vec<_>>(),
                            "exponent": st.exponent.to_string(),
                        })
                    })
                    .collect();
                let mut pretty =
                    format!("conjugator for {name} (j = {j}), verified to depth {}: {}\n", ctx.l, pass_word(verified));
                for (n, st) in h.stages.iter().enumerate() {
                    let t: Vec<String> = st.tuple.iter().map(|w| sys.show(w).to_string()).collect();
                    writeln!(
                        pretty,
                        "  stage {n}: exponent {}, rooted {}, tuple ({})",
                        st.exponent,
                        st.rooted,
                        t.join(", ")
                    )
                    .unwrap();
                }
                let record = json!({ "cmd": "conjugate", "line": line, "name": name, "j": j, "depth": ctx.l, "verified": verified, "stages": stages });
                self.emit(record, &pretty)
            }
            Command::Represent { file } => self.represent(file, line),
            Command::Verify { suite } => {
                let checks = suites::run_suite(suite).map_err(|e| match e {
                    suites::SuiteError::Unknown(s) => script_err(line, format!("unknown suite {s}")),
                    suites::SuiteError::Core(e) => CliError::from_core(line, e),
                })?;
                for c in checks.iter().filter(|c| !c.pass) {
                    self.fail(line, format!("{suite}: {}", c.name));
                }
                let pass = checks.iter().all(|c| c.pass);
                let mut pretty = format!("verify {suite}: {}\n", pass_word(pass));
                for c in &checks {
                    writeln!(pretty, "  {} {} {}", pass_word(c.pass), c.name, c.detail).unwrap();
                }
                let record = json!({ "cmd": "verify", "line": line, "suite": suite, "pass": pass, "checks": checks });
                self.emit(record, &pretty)
            }
            Command::Assert { lhs, rhs, depth } => {
                let (a, b) = (self.command_word(lhs, line)?, self.command_word(rhs, line)?);
                let depth = depth.unwrap_or(ctx.l);
                let holds = self.engine().equal_to_depth(&a, &b, depth).map_err(core)?;
                if !holds {
                    self.fail(line, format!("assert {lhs} = {rhs}"));
                }
                let pretty = format!("{} {lhs} = {rhs} to depth {depth}", pass_word(holds));
                let record = json!({ "cmd": "assert", "line": line, "lhs": lhs.to_string(), "rhs": rhs.to_string(), "depth": depth, "pass": holds });
                self.emit(record, &pretty)
            }
        }
    }

    /// Reads a triple file and writes the machine as `gen` lines with portraits of the basis.
    fn represent(&mut self, file: &str, line: usize) -> Result<(), CliError> {
        let core = |e| CliError::from_core(line, e);
        let path = self.opts.base_dir.join(file);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let triple: TripleFile =
            serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let (endo, t) = triple.build().map_err(core)?;
        let session = self.ctx();
        let ctx = Context::new(endo.index() as u32, session.k, session.d, session.l).map_err(core)?;
        let mut mach = phi_rep(&endo, &t);
        let basis = endo.group().basis();
        let mut sys = System::new(ctx);
        let mat = mach.materialize(&mut sys, "g", &basis, ctx.l, DEFAULT_MACHINE_CAP).map_err(core)?;
        let mut forest = Forest::new(ctx.m as usize);
        let kernel = mach.kernel_witnesses(&mut forest, &basis, ctx.l, DEFAULT_MACHINE_CAP).map_err(core)?;

        let mut gens = Vec::new();
        let mut script = format!("context m={} K={} D={} L={}\n", ctx.m, ctx.k, ctx.d, ctx.l);
        let mut by_id: Vec<(&Vec<i64>, &GenId)> = mat.ids.iter().collect();
        by_id.sort_by_key(|(_, id)| **id);
        for (element, &id) in by_id {
            let def = sys.show_def(id).ok();
            if let Some(d) = &def {
                writeln!(script, "gen {} = {d}", sys.name(id)).unwrap();
            }
            gens.push(json!({ "name": sys.name(id), "element": element, "definition": def }));
        }
        let mut engine = Engine::new(sys);
        let mut seeds = Vec::new();
        let mut pretty = script.clone();
        for (b, &id) in basis.iter().zip(&mat.seeds) {
            let p = engine.portrait(&AutExpr::gen(id), ctx.l).map_err(core)?;
            let name = engine.system().name(id).to_string();
            pretty.push_str(&pretty_portrait(&name, &p));
            seeds.push(json!({ "element": b, "name": name, "portrait": portrait_json(&p) }));
        }
        if !mat.closed {
            pretty.push_str("# not closed: frontier states are only valid to the stated depth\n");
        }
        let record = json!({
            "cmd": "represent", "line": line, "file": file, "index": endo.index(), "closed": mat.closed,
            "generators": gens, "seeds": seeds, "kernel_witnesses": kernel, "script": if mat.closed { Some(script) } else { None },
        });
        self.emit(record, &pretty)
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Labels level by level, vertices in breadth-first order.
fn pretty_portrait(name: &str, p: &Portrait) -> String {
    let mut out = format!("portrait of {name} (m = {}, depth {})\n", p.degree(), p.depth());
    let mut start = 0;
    for t in 0..p.depth() {
        let n = p.degree().pow(t as u32);
        let labels: Vec<String> = p.labels()[start..start + n].iter().map(ToString::to_string).collect();
        writeln!(out, "  level {t}: {}", labels.join(" ")).unwrap();
        start += n;
    }
    out
}
