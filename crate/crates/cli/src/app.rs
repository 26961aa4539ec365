//! Command-line interface: argument definitions and command dispatch.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cohere_core::coherence::{check_coherence, extension_interval, Assessment, ProbabilityInterval};
use cohere_core::conditionals::{parse_conditional, quasi_conjunction, quasi_disjunction};
use cohere_core::inference::{
    loop_context, loop_entails, loop_family, p_consistent, p_entails, qc_entailment,
    rule_bounds, GammaRegion, KnowledgeBase, QcReason, RegionKind, RuleKind,
};
use cohere_core::oracle::{extension_interval_bruteforce, is_coherent_bruteforce, DEFAULT_VERTEX_LIMIT};
use cohere_core::rational::{format_rational, format_wire, parse_rational, to_f64, Rational};
use cohere_core::tnorms::{tconorm, tnorm, Lambda, OperatorFamily, UnitValue};
use cohere_core::{constituents, ConditionalEvent, Context, TruthValue3};
use serde::Serialize;
use serde_json::{json, Value};

use crate::kb::KbFile;

#[derive(Debug, Parser)]
#[command(
    name = "cohere",
    version,
    about = "Coherence checking, probability propagation and p-entailment for conditional events",
    after_help = "Conditionals are written `E | H`. The first top-level `|` that splits the text \
                  into two events is the conditioning bar, so `(A | B) | H` is the disjunction \
                  A or B given H."
)]
pub struct Cli {
    /// Knowledge-base file.
    #[arg(long, global = true, value_name = "FILE")]
    pub kb: Option<PathBuf>,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Exit with status 1 on negative verdicts.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Use vertex enumeration instead of the simplex method.
    #[arg(long, global = true, hide = true)]
    pub oracle: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check coherence of the probabilities in the knowledge base.
    Check,
    /// Check that the knowledge base is p-consistent.
    Consistent,
    /// Decide p-entailment of targets, or of the file's queries.
    Entails {
        targets: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
    },
    /// Coherent probability interval of a target given the knowledge base.
    Extend { target: String },
    /// Bounds of an inference rule's conclusion.
    Bounds {
        /// One of qc, qd, or, gn, compound, dual, bic.
        #[arg(value_parser = parse_rule)]
        rule: RuleKind,
        /// Premise probabilities; taken from the knowledge base when omitted.
        probs: Vec<String>,
    },
    /// Membership of premise probabilities in a gamma region.
    Region {
        /// One of Lqc, Uqc, Lqd, Uqd.
        #[arg(value_parser = parse_region)]
        kind: RegionKind,
        #[arg(long)]
        gamma: String,
        probs: Vec<String>,
        /// Sample the two-premise region on a grid with this many steps.
        #[arg(long, value_name = "STEPS", conflicts_with = "probs")]
        grid: Option<usize>,
    },
    /// Loop family A2|A1, ..., A1|An.
    Loop {
        #[arg(long)]
        n: usize,
        /// Compare with the family A_s(j)|A_j, as comma-separated s(1),...,s(n).
        #[arg(long, value_delimiter = ',')]
        derangement: Option<Vec<usize>>,
    },
    /// Truth table of conditionals with their quasi conjunction and disjunction.
    TruthTable { family: Vec<String> },
    /// Evaluate a t-norm.
    Tnorm(OperatorArgs),
    /// Evaluate a t-conorm.
    Tconorm(OperatorArgs),
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// minimum, product, lukasiewicz, drastic or hamacher.
    pub family: String,
    /// Hamacher parameter, a nonnegative rational or `inf`.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(required = true)]
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Lp,
    Qc,
    Both,
}

fn parse_rule(s: &str) -> std::result::Result<RuleKind, String> {
    s.parse().map_err(|e: cohere_core::Error| e.to_string())
}

fn parse_region(s: &str) -> std::result::Result<RegionKind, String> {
    s.parse().map_err(|e: cohere_core::Error| e.to_string())
}

/// Rendered result of a command.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    /// Whether the verdict is negative, for `--strict`.
    pub negative: bool,
    pub warnings: Vec<String>,
}

impl Output {
    fn new(text: String, negative: bool) -> Output {
        Output { text, negative, warnings: Vec::new() }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let kb = cli.kb.as_deref().map(KbFile::load).transpose()?;
    let r = Runner { cli, kb };
    match &cli.command {
        Command::Check => r.check(),
        Command::Consistent => r.consistent(),
        Command::Entails { targets, method } => r.entails(targets, *method),
        Command::Extend { target } => r.extend(target),
        Command::Bounds { rule, probs } => r.bounds(*rule, probs),
        Command::Region { kind, gamma, probs, grid } => r.region(*kind, gamma, probs, *grid),
        Command::Loop { n, derangement } => r.loop_family(*n, derangement.as_deref()),
        Command::TruthTable { family } => r.truth_table(family),
        Command::Tnorm(args) => r.operator(args, false),
        Command::Tconorm(args) => r.operator(args, true),
    }
}

fn unit(text: &str) -> Result<UnitValue> {
    let value = parse_rational(text)?;
    Ok(UnitValue::new(value)?)
}

fn units(texts: &[String]) -> Result<Vec<UnitValue>> {
    texts.iter().map(|t| unit(t)).collect()
}

fn wire(r: &Rational) -> Value {
    Value::String(format_wire(r))
}

fn json_text(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn verdict(positive: bool, yes: &str, no: &str) -> String {
    if positive { yes } else { no }.to_string()
}

struct Runner<'a> {
    cli: &'a Cli,
    kb: Option<KbFile>,
}

impl Runner<'_> {
    fn kb(&self) -> Result<&KbFile> {
        self.kb.as_ref().ok_or_else(|| anyhow!("this command needs --kb FILE"))
    }

    fn knowledge_base(&self) -> Result<KnowledgeBase> {
        Ok(self.kb()?.knowledge_base()?)
    }

    fn assessment(&self) -> Result<(Context, Assessment)> {
        let kb = self.kb()?;
        let a = kb
            .assessment()?
            .ok_or_else(|| anyhow!("the knowledge base has no probabilities"))?;
        Ok((kb.context()?, a))
    }

    fn target(&self, text: &str) -> Result<ConditionalEvent> {
        parse_conditional(text).with_context(|| format!("in target `{text}`"))
    }

    fn interval(&self, ctx: &Context, a: &Assessment, target: &ConditionalEvent) -> Result<(ProbabilityInterval, Vec<String>)> {
        if self.cli.oracle {
            let limit = ctx.max_constituents().min(DEFAULT_VERTEX_LIMIT);
            return Ok((extension_interval_bruteforce(ctx, a, target, limit)?, Vec::new()));
        }
        let ext = extension_interval(ctx, a, target)?;
        Ok((ext.interval, ext.warnings))
    }

    fn check(&self) -> Result<Output> {
        let (ctx, a) = self.assessment()?;
        let names = self.kb()?.names();
        if self.cli.oracle {
            let coherent = is_coherent_bruteforce(&ctx, &a, DEFAULT_VERTEX_LIMIT)?;
            let text = if self.cli.json {
                json_text(&json!({ "coherent": coherent }))?
            } else {
                verdict(coherent, "COHERENT", "INCOHERENT") + "\n"
            };
            return Ok(Output::new(text, !coherent));
        }
        let v = check_coherence(&ctx, &a)?;
        if self.cli.json {
            #[derive(Serialize)]
            struct Report<'a> {
                names: &'a [String],
                #[serde(flatten)]
                verdict: &'a cohere_core::CoherenceVerdict,
            }
            let text = json_text(&Report { names: &names, verdict: &v })?;
            return Ok(Output::new(text, !v.coherent));
        }
        let list = |idx: &[usize]| {
            if idx.is_empty() {
                "-".to_string()
            } else {
                idx.iter().map(|&j| names[j].as_str()).collect::<Vec<_>>().join(" ")
            }
        };
        let mut text = verdict(v.coherent, "COHERENT", "INCOHERENT") + "\n";
        for (k, level) in v.trace.iter().enumerate() {
            let _ = write!(text, "level {k}: {}", list(&level.indices));
            if level.feasible {
                let _ = writeln!(text, "; zero upper probability: {}", list(&level.i0));
            } else {
                let _ = writeln!(text, "; no solution");
            }
        }
        if let Some(c) = &v.certificate {
            let stakes: Vec<String> = c
                .indices
                .iter()
                .zip(&c.stakes)
                .map(|(&j, s)| format!("{}={}", names[j], format_rational(s)))
                .collect();
            let min = c.gains.iter().min().expect("certificates have gains");
            let _ = writeln!(text, "sure-win stakes: {}", stakes.join(", "));
            let _ = writeln!(text, "least gain: {}", format_rational(min));
        }
        Ok(Output::new(text, !v.coherent))
    }

    fn consistent(&self) -> Result<Output> {
        let kb = self.knowledge_base()?;
        let ok = if self.cli.oracle {
            let a = Assessment::all_ones(kb.conditionals().to_vec())?;
            is_coherent_bruteforce(kb.context(), &a, DEFAULT_VERTEX_LIMIT)?
        } else {
            p_consistent(&kb)?
        };
        let text = if self.cli.json {
            json_text(&json!({ "p_consistent": ok }))?
        } else {
            verdict(ok, "P-CONSISTENT", "NOT P-CONSISTENT") + "\n"
        };
        Ok(Output::new(text, !ok))
    }

    fn lp_entails(&self, kb: &KnowledgeBase, target: &ConditionalEvent) -> Result<bool> {
        if !self.cli.oracle {
            return Ok(p_entails(kb, target)?);
        }
        let a = Assessment::all_ones(kb.conditionals().to_vec())?;
        if !is_coherent_bruteforce(kb.context(), &a, DEFAULT_VERTEX_LIMIT)? {
            return Err(cohere_core::Error::NotPConsistent.into());
        }
        let interval = extension_interval_bruteforce(kb.context(), &a, target, DEFAULT_VERTEX_LIMIT)?;
        Ok(interval.lo() == &Rational::from_integer(1.into()))
    }

    fn entails(&self, targets: &[String], method: Method) -> Result<Output> {
        let kb = self.knowledge_base()?;
        let targets: Vec<ConditionalEvent> = if targets.is_empty() {
            self.kb()?.queries.clone()
        } else {
            targets.iter().map(|t| self.target(t)).collect::<Result<_>>()?
        };
        if targets.is_empty() {
            bail!("no target given and the knowledge base has no queries");
        }
        #[derive(Serialize)]
        struct Row {
            target: String,
            entailed: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            premises: Option<Vec<String>>,
        }
        let mut rows = Vec::new();
        for target in &targets {
            target.validate(kb.context()).with_context(|| format!("in target `{target}`"))?;
            let lp = match method {
                Method::Qc => None,
                _ => Some(self.lp_entails(&kb, target)?),
            };
            let qc = match method {
                Method::Lp => None,
                _ => Some(qc_entailment(&kb, target)?),
            };
            if let (Some(lp), Some(qc)) = (lp, &qc) {
                if lp != qc.is_some() {
                    bail!("the two procedures disagree on `{target}`");
                }
            }
            let premises = qc.flatten().map(|reason| match reason {
                QcReason::Tautological => Vec::new(),
                QcReason::Subset(s) => s.iter().map(|&j| kb.names()[j].clone()).collect(),
            });
            rows.push(Row {
                target: target.to_string(),
                entailed: lp.unwrap_or(premises.is_some()),
                premises,
            });
        }
        let negative = rows.iter().any(|r| !r.entailed);
        if self.cli.json {
            return Ok(Output::new(json_text(&rows)?, negative));
        }
        let mut text = String::new();
        for row in &rows {
            let v = verdict(row.entailed, "P-ENTAILED", "NOT P-ENTAILED");
            if rows.len() == 1 {
                text += &v;
            } else {
                let _ = write!(text, "{v:<16}{}", row.target);
            }
            if let Some(p) = &row.premises {
                if p.is_empty() {
                    text += "  (tautological)";
                } else {
                    let _ = write!(text, "  (quasi conjunction of {})", p.join(", "));
                }
            }
            text += "\n";
        }
        Ok(Output::new(text, negative))
    }

    fn extend(&self, target: &str) -> Result<Output> {
        let (ctx, a) = self.assessment()?;
        let target = self.target(target)?;
        let (interval, warnings) = self.interval(&ctx, &a, &target)?;
        let text = if self.cli.json {
            json_text(&json!({ "target": target.to_string(), "interval": interval }))?
        } else {
            format!("{interval}\n")
        };
        Ok(Output { text, negative: false, warnings })
    }

    fn bounds(&self, rule: RuleKind, probs: &[String]) -> Result<Output> {
        let mut warnings = Vec::new();
        let (premises, interval) = if probs.is_empty() {
            let (ctx, a) = self.assessment().context("give premise probabilities or --kb")?;
            let conclusion = match rule {
                RuleKind::QuasiAnd => quasi_conjunction(&a.family)?,
                RuleKind::QuasiOr => quasi_disjunction(&a.family)?,
                other => bail!("`bounds {other}` needs premise probabilities on the command line"),
            };
            let (lp, lp_warnings) = self.interval(&ctx, &a, &conclusion)?;
            warnings.extend(lp_warnings);
            if ctx.has_constraints() {
                warnings.push(
                    "the knowledge base has logical constraints; closed-form bounds assume \
                     logically independent premises, so the linear-programming path is used"
                        .into(),
                );
            } else {
                let closed = rule_bounds(rule, &a.probs)?.interval;
                if closed != lp {
                    warnings.push(format!(
                        "the premises are logically dependent; the closed form {closed} does not apply"
                    ));
                }
            }
            (a.probs.clone(), lp)
        } else {
            if self.kb.is_some() {
                bail!("give premise probabilities either on the command line or in --kb, not both");
            }
            let p = units(probs)?;
            let b = rule_bounds(rule, &p)?;
            (p, b.interval)
        };
        let text = if self.cli.json {
            json_text(&json!({ "rule": rule.keyword(), "premises": premises, "interval": interval }))?
        } else {
            format!("{interval}\n")
        };
        Ok(Output { text, negative: false, warnings })
    }

    fn region(&self, kind: RegionKind, gamma: &str, probs: &[String], grid: Option<usize>) -> Result<Output> {
        let region = GammaRegion::new(kind, unit(gamma)?);
        if let Some(steps) = grid {
            return self.region_grid(&region, steps);
        }
        if probs.is_empty() {
            bail!("give premise probabilities or --grid");
        }
        let inside = region.contains(&units(probs)?)?;
        let text = if self.cli.json {
            json_text(&json!({ "region": kind.to_string(), "gamma": region.gamma, "inside": inside }))?
        } else {
            verdict(inside, "IN", "NOT IN") + "\n"
        };
        Ok(Output::new(text, !inside))
    }

    fn region_grid(&self, region: &GammaRegion, steps: usize) -> Result<Output> {
        if steps == 0 || steps > 200 {
            bail!("--grid takes between 1 and 200 steps");
        }
        let n = steps as i64;
        let point = |k: i64| UnitValue::new(Rational::new(k.into(), n.into())).expect("grid points lie in [0, 1]");
        let mut cells = Vec::new();
        let mut text = format!("{} at gamma {}; x to the right, y upwards\n", region.kind, region.gamma);
        for j in (0..=n).rev() {
            let y = point(j);
            let _ = write!(text, "{:>6.3} ", to_f64(y.value()));
            for i in 0..=n {
                let x = point(i);
                let inside = region.contains(&[x.clone(), y.clone()])?;
                text.push(if inside { '#' } else { '.' });
                cells.push(json!({ "x": wire(x.value()), "y": wire(y.value()), "inside": inside }));
            }
            text.push('\n');
        }
        if self.cli.json {
            text = json_text(&json!({
                "region": region.kind.to_string(),
                "gamma": region.gamma,
                "points": cells,
            }))?;
        }
        Ok(Output::new(text, false))
    }

    fn loop_family(&self, n: usize, derangement: Option<&[usize]>) -> Result<Output> {
        if !(2..=5).contains(&n) {
            bail!("loop size must be between 2 and 5");
        }
        if let Some(sigma) = derangement {
            let ok = loop_entails(n, sigma)?;
            let text = if self.cli.json {
                json_text(&json!({ "n": n, "derangement": sigma, "equivalent": ok }))?
            } else {
                verdict(ok, "P-EQUIVALENT", "NOT P-EQUIVALENT") + "\n"
            };
            return Ok(Output::new(text, !ok));
        }
        let kb = KnowledgeBase::unnamed(loop_context(n)?, loop_family(n)?)?;
        let mut rows = Vec::new();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let target = self.target(&format!("A{i} | A{j}"))?;
                rows.push((target.to_string(), self.lp_entails(&kb, &target)?));
            }
        }
        let negative = rows.iter().any(|(_, ok)| !ok);
        let text = if self.cli.json {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(t, ok)| json!({ "target": t, "entailed": ok }))
                .collect();
            json_text(&rows)?
        } else {
            let mut text = String::new();
            for (t, ok) in &rows {
                let _ = writeln!(text, "{:<16}{t}", verdict(*ok, "P-ENTAILED", "NOT P-ENTAILED"));
            }
            text
        };
        Ok(Output::new(text, negative))
    }

    fn truth_table(&self, family: &[String]) -> Result<Output> {
        let (ctx, family, names) = if family.is_empty() {
            let kb = self.kb().context("give conditionals or --kb")?;
            let family: Vec<ConditionalEvent> = kb.conditionals.iter().map(|e| e.conditional.clone()).collect();
            (kb.context()?, family, kb.names())
        } else {
            let family: Vec<ConditionalEvent> = family.iter().map(|t| self.target(t)).collect::<Result<_>>()?;
            let ctx = match &self.kb {
                Some(kb) => kb.context()?,
                None => {
                    let events: Vec<&cohere_core::Event> =
                        family.iter().flat_map(|c| [&c.consequent, &c.antecedent]).collect();
                    Context::independent_over(&events)?
                }
            };
            let names = family.iter().map(ToString::to_string).collect();
            (ctx, family, names)
        };
        for c in &family {
            c.validate(&ctx)?;
        }
        let qc = quasi_conjunction(&family)?;
        let qd = quasi_disjunction(&family)?;
        let mut headers: Vec<String> = names;
        headers.push("C".into());
        headers.push("D".into());
        let mut table = Vec::new();
        for &w in ctx.worlds() {
            let mut row = Vec::with_capacity(headers.len());
            for c in family.iter().chain([&qc, &qd]) {
                row.push(c.truth_value(&ctx, w)?);
            }
            table.push((ctx.describe_world(w), row));
        }
        let set = constituents(&ctx, &family)?;
        if self.cli.json {
            let rows: Vec<Value> = table
                .iter()
                .map(|(world, row)| {
                    let values: Vec<String> = row.iter().map(ToString::to_string).collect();
                    json!({ "world": world, "values": values })
                })
                .collect();
            let text = json_text(&json!({
                "columns": headers,
                "quasi_conjunction": qc.to_string(),
                "quasi_disjunction": qd.to_string(),
                "rows": rows,
                "constituents": set.len(),
            }))?;
            return Ok(Output::new(text, false));
        }
        let world_width = table.iter().map(|(w, _)| w.chars().count()).max().unwrap_or(5).max(5);
        let widths: Vec<usize> = headers.iter().map(|h| h.chars().count().max(1)).collect();
        let mut text = format!("{:<world_width$}", "world");
        for (h, w) in headers.iter().zip(&widths) {
            let _ = write!(text, "  {h:>w$}");
        }
        text += "\n";
        for (world, row) in &table {
            let _ = write!(text, "{world:<world_width$}");
            for (v, w) in row.iter().zip(&widths) {
                let _ = write!(text, "  {:>w$}", symbol(*v));
            }
            text += "\n";
        }
        let _ = writeln!(text, "C = {qc}");
        let _ = writeln!(text, "D = {qd}");
        let _ = writeln!(text, "{} constituents", set.len());
        Ok(Output::new(text, false))
    }

    fn operator(&self, args: &OperatorArgs, conorm: bool) -> Result<Output> {
        let lambda = args.lambda.as_deref().map(str::parse::<Lambda>).transpose()?;
        let family = OperatorFamily::parse(&args.family, lambda)?;
        let values = units(&args.args)?;
        let result = if conorm { tconorm(&family, &values)? } else { tnorm(&family, &values)? };
        let text = if self.cli.json {
            json_text(&json!({
                "family": family.name(),
                "operator": if conorm { "tconorm" } else { "tnorm" },
                "arguments": values,
                "value": result,
                "approx": to_f64(result.value()),
            }))?
        } else {
            format!("{} ≈ {:.6}\n", format_rational(result.value()), to_f64(result.value()))
        };
        Ok(Output::new(text, false))
    }
}

fn symbol(v: TruthValue3) -> &'static str {
    match v {
        TruthValue3::True => "1",
        TruthValue3::False => "0",
        TruthValue3::Void => "-",
    }
}
