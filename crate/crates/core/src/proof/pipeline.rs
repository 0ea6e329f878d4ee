use num_bigint::BigUint;
use serde::Serialize;

use super::digraph::{colour_digraph, select_a, ASelection, ColouredDigraph};
use super::embed::{embed_tree, EmbedOutcome};
use super::ordering::popular_ordering;
use super::procedure::{refine_families, ConstantsMode, OutcomeKind, ProcedureConfig, TraceStep};
use super::rainbow::{rainbow_partition, RainbowStrategy};
use crate::blowup::{blow_up, exponent_r, ExponentProfile};
use crate::error::{Error, Result};
use crate::graph::{degeneracy_ordering, is_tree, Graph};
use crate::subgraph::{contains_copy, count_copies, Embedding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum ConstantsSpec {
    PaperScale,
    DeskUniform(u64),
    Desk(#[serde(serialize_with = "ser_constants")] Vec<BigUint>),
}

fn ser_constants<S: serde::Serializer>(cs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(cs.iter().map(|c| c.to_str_radix(10)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    pub constants: ConstantsSpec,
    pub rainbow: RainbowStrategy,
}

impl PipelineConfig {
    pub fn paper_scale() -> Self {
        PipelineConfig { constants: ConstantsSpec::PaperScale, rainbow: RainbowStrategy::Derandomized }
    }

    pub fn desk_uniform(c: u64) -> Self {
        PipelineConfig { constants: ConstantsSpec::DeskUniform(c), rainbow: RainbowStrategy::Derandomized }
    }

    pub fn procedure_config(&self, h_graph: &Graph, t: usize) -> Result<ProcedureConfig> {
        Ok(match &self.constants {
            ConstantsSpec::PaperScale => ProcedureConfig::paper_scale(h_graph, t)?,
            ConstantsSpec::DeskUniform(c) => ProcedureConfig::desk_uniform(h_graph, t, *c),
            ConstantsSpec::Desk(cs) => ProcedureConfig { t, constants: cs.clone(), mode: ConstantsMode::DeskScale },
        })
    }
}

/// One inequality the argument relies on, evaluated on the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdCheck {
    pub name: String,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub lhs: BigUint,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub rhs: BigUint,
    pub holds: bool,
}

impl ThresholdCheck {
    fn at_least(name: &str, lhs: BigUint, rhs: BigUint) -> Self {
        let holds = lhs >= rhs;
        ThresholdCheck { name: name.to_string(), lhs, rhs, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseReport {
    /// Components of `H`.
    pub a: usize,
    pub r: usize,
    pub a_at_most_r: bool,
    pub family_size: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub bound: BigUint,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuredReport {
    pub digraph: ColouredDigraph,
    pub selection: ASelection,
    /// `|A| > r`.
    pub a_exceeds_r: bool,
    pub gamma_vertices: usize,
    /// An embedding of `T` into the `(U, t)`-blow-up, if there is one.
    pub gamma_embedding: Option<Embedding>,
    pub embedding: Option<EmbedOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcedureSummary {
    pub kind: OutcomeKind,
    pub l: usize,
    pub remaining_red: Vec<(usize, usize)>,
    pub family_sizes: Vec<usize>,
    pub iterations: usize,
    pub config: ProcedureConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub h: usize,
    pub t: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub m: BigUint,
    pub exponent: ExponentProfile,
    pub h0_size: Option<usize>,
    pub degeneracy: Option<usize>,
    pub order_h: Option<Vec<usize>>,
    pub h1_size: Option<usize>,
    pub procedure: Option<ProcedureSummary>,
    #[serde(skip)]
    pub trace: Vec<TraceStep>,
    pub sparse: Option<SparseReport>,
    pub structured: Option<StructuredReport>,
    pub thresholds: Vec<ThresholdCheck>,
    /// A copy of `T` found in `G`, which shows `G` is not `T`-free.
    pub t_copy: Option<Embedding>,
    pub flags: Vec<String>,
}

impl PipelineReport {
    pub fn trace_jsonl(&self) -> String {
        self.trace.iter().map(|s| serde_json::to_string(s).expect("trace serializes") + "\n").collect()
    }

    fn start(g: &Graph, h_graph: &Graph, tree: &Graph, m: BigUint, exponent: ExponentProfile) -> Self {
        PipelineReport {
            n: g.n(),
            h: h_graph.n(),
            t: tree.n(),
            m,
            exponent,
            h0_size: None,
            degeneracy: None,
            order_h: None,
            h1_size: None,
            procedure: None,
            trace: Vec::new(),
            sparse: None,
            structured: None,
            thresholds: Vec::new(),
            t_copy: None,
            flags: Vec::new(),
        }
    }
}

pub const FLAG_NOT_T_FREE: &str = "input not T-free";

fn at(stage: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Validation(m) => Error::Validation(format!("{stage}: {m}")),
        Error::UnsupportedSize(m) => Error::UnsupportedSize(format!("{stage}: {m}")),
        Error::Input(m) => Error::Input(format!("{stage}: {m}")),
        Error::Internal(m) => Error::Internal(format!("{stage}: {m}")),
        other => other,
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

/// Runs every stage of the upper-bound argument on `G` and reports each
/// intermediate quantity next to the inequality it is supposed to satisfy.
pub fn run_pipeline(g: &Graph, h_graph: &Graph, tree: &Graph, config: &PipelineConfig) -> Result<PipelineReport> {
    h_graph.ensure_pattern("H").map_err(at("input"))?;
    tree.ensure_pattern("T").map_err(at("input"))?;
    if !is_tree(tree) {
        return Err(Error::validation("input: T is not a tree"));
    }
    let (h, t, e) = (h_graph.n(), tree.n(), h_graph.edge_count());
    let exponent = exponent_r(h_graph, tree).map_err(at("exponent"))?;
    let m = count_copies(g, h_graph).map_err(at("count"))?;
    let mut report = PipelineReport::start(g, h_graph, tree, m.clone(), exponent.clone());

    if m == BigUint::from(0u32) {
        report.flags.push("no copies of H; the bound holds vacuously".into());
        return Ok(report);
    }
    let r = match exponent {
        ExponentProfile::Zero { .. } => {
            // H contains T, so any copy of H carries a copy of T
            let in_h = contains_copy(h_graph, tree)?.ok_or_else(|| Error::internal("exponent: Zero without T in H"))?;
            let h_copy = contains_copy(g, h_graph)?.ok_or_else(|| Error::internal("count: m > 0 but no copy"))?;
            let t_copy = Embedding(in_h.as_slice().iter().map(|&v| h_copy.image(v)).collect());
            if !t_copy.is_valid(g, tree) {
                return Err(Error::internal("zero profile: composed T-copy is invalid"));
            }
            report.t_copy = Some(t_copy);
            report.flags.push("H contains T, Ex = 0".into());
            report.flags.push(FLAG_NOT_T_FREE.into());
            return Ok(report);
        }
        ExponentProfile::Finite { r, .. } => r,
    };
    let proc_config = config.procedure_config(h_graph, t).map_err(at("constants"))?;
    proc_config.validate(h_graph).map_err(at("constants"))?;
    let paper = proc_config.mode == ConstantsMode::PaperScale;
    let check = |report: &mut PipelineReport, c: ThresholdCheck, strict: bool| -> Result<()> {
        if !c.holds {
            if strict && paper {
                return Err(Error::internal(format!("threshold {} failed: {} < {}", c.name, c.lhs, c.rhs)));
            }
            report.flags.push(format!("threshold {} not met", c.name));
        }
        report.thresholds.push(c);
        Ok(())
    };

    let rainbow = rainbow_partition(g, h_graph, config.rainbow).map_err(at("rainbow"))?;
    let h0 = rainbow.family.len();
    report.h0_size = Some(h0);
    let hh = BigUint::from(h).pow(h as u32);
    let derandomized = config.rainbow == RainbowStrategy::Derandomized;
    check(&mut report, ThresholdCheck::at_least("|H0|*h^h >= m", BigUint::from(h0) * &hh, m.clone()), derandomized)?;
    if h0 == 0 {
        report.flags.push("rainbow family is empty; nothing to refine".into());
        return Ok(report);
    }

    let g0 = rainbow.family.union_graph(g.n(), h_graph);
    let ordering = degeneracy_ordering(&g0);
    report.degeneracy = Some(ordering.bound);
    if t >= 2 && ordering.bound > t - 2 {
        report.flags.push(format!("G0 is {}-degenerate, above t-2 = {}", ordering.bound, t - 2));
    }
    let popular = popular_ordering(&rainbow.family, &ordering).map_err(at("ordering"))?;
    let h1 = popular.family.len();
    report.order_h = Some(popular.order_h.clone());
    report.h1_size = Some(h1);
    check(&mut report, ThresholdCheck::at_least("|H1|*h! >= |H0|", BigUint::from(h1) * factorial(h), BigUint::from(h0)), true)?;

    let outcome = refine_families(h_graph, &popular.family, &popular.order_h, &proc_config).map_err(at("procedure"))?;
    let f1 = outcome.families[0].len();
    let shrink = BigUint::from(2 * e).pow((t * e) as u32);
    check(&mut report, ThresholdCheck::at_least("|F1|*(2e)^(t*e) >= |H1|", BigUint::from(f1) * shrink, BigUint::from(h1)), true)?;
    if outcome.trace.iter().any(|s| !s.retention_ok) {
        return Err(Error::internal("procedure: a step broke its retention bound"));
    }
    report.procedure = Some(ProcedureSummary {
        kind: outcome.kind,
        l: outcome.l,
        remaining_red: outcome.remaining_red.clone(),
        family_sizes: outcome.families.iter().map(|f| f.len()).collect(),
        iterations: outcome.trace.len(),
        config: proc_config.clone(),
    });
    report.trace = outcome.trace.clone();

    match outcome.kind {
        OutcomeKind::Sparse => {
            let sc = outcome.sparse_check.clone().ok_or_else(|| Error::internal("procedure: sparse without check"))?;
            if !sc.holds {
                report.flags.push("counting bound |F| <= c^(h^2) * n^a not met".into());
            }
            if sc.a > r {
                report.flags.push("a > r".into());
            }
            report.sparse = Some(SparseReport {
                a: sc.a,
                r,
                a_at_most_r: sc.a <= r,
                family_size: sc.family_size,
                bound: sc.bound,
                bound_holds: sc.holds,
            });
        }
        OutcomeKind::Structured => {
            let digraph = colour_digraph(h_graph, &outcome.remaining_red).map_err(at("digraph"))?;
            let selection = select_a(&digraph).map_err(at("select_A"))?;
            let a_exceeds_r = selection.a.len() > r;
            let gamma = blow_up(h_graph, &selection.u, t).map_err(at("blow-up"))?;
            let gamma_embedding = contains_copy(&gamma.graph, tree).map_err(at("blow-up"))?;
            // H \ U has |A| components, so |A| > r forces T into the blow-up
            if a_exceeds_r && gamma_embedding.is_none() {
                return Err(Error::internal("blow-up: |A| > r but the blow-up is T-free"));
            }
            let mut embedding = None;
            if let Some(gamma_emb) = &gamma_embedding {
                let out = embed_tree(g, h_graph, tree, gamma_emb, &gamma, &outcome.families, &rainbow.partition, &digraph)
                    .map_err(at("embed_tree"))?;
                match &out {
                    EmbedOutcome::Embedded(cert) => {
                        let ok = tree.edges().all(|(x, y)| g.has_edge(cert.tree_map.image(x), cert.tree_map.image(y)));
                        if !ok || !cert.tree_map.is_valid(g, tree) {
                            return Err(Error::internal("embed_tree: certificate does not re-verify"));
                        }
                        report.t_copy = Some(cert.tree_map.clone());
                        report.flags.push(FLAG_NOT_T_FREE.into());
                    }
                    EmbedOutcome::Failed(fail) => {
                        report.flags.push(format!("tree embedding starved at step {}: {}", fail.step, fail.reason));
                    }
                }
                embedding = Some(out);
            } else {
                report.flags.push("the (U, t)-blow-up is T-free".into());
            }
            report.structured = Some(StructuredReport {
                digraph,
                selection,
                a_exceeds_r,
                gamma_vertices: gamma.graph.n(),
                gamma_embedding,
                embedding,
            });
        }
    }
    Ok(report)
}
