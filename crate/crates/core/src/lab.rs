//! Extremal constructions, exhaustive evaluation of `Ex(n, H, T)` at small
//! `n`, and growth-rate reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{blow_up, exponent_r, ExponentProfile};
use crate::error::{Error, Result};
use crate::graph::{canonical_form, is_tree, parse_graph, serialize_graph, Graph, GraphFormat, PATTERN_CAP};
use crate::subgraph::{contains_copy, count_copies};

/// Largest `n` for the built-in exhaustive search.
pub const INTERNAL_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSource {
    InternalEnumeration,
    Graph6Stream,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExSearchResult {
    pub n: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub max_count: BigUint,
    pub witness: Graph,
    pub graphs_examined: u64,
    pub source: SearchSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// `log(count[i+1] / count[i]) / log(n[i+1] / n[i])` for consecutive rows.
    pub slopes: Vec<f64>,
    pub r_claimed: usize,
}

impl GrowthReport {
    /// Columns `n,count,slope`; the slope of a row is measured from the previous row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,slope\n");
        for (i, row) in self.rows.iter().enumerate() {
            let slope = if i == 0 { String::new() } else { format!("{:.6}", self.slopes[i - 1]) };
            let _ = writeln!(out, "{},{},{}", row.n, row.count, slope);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub n: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub oracle: BigUint,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub construction: BigUint,
}

fn check_pair(h: &Graph, tree: &Graph) -> Result<()> {
    h.ensure_pattern("H")?;
    tree.ensure_pattern("T")?;
    if !is_tree(tree) {
        return Err(Error::validation("T is not a tree"));
    }
    Ok(())
}

fn finite(profile: ExponentProfile) -> Result<(usize, Vec<usize>)> {
    match profile {
        ExponentProfile::Finite { r, witness, .. } => Ok((r, witness)),
        ExponentProfile::Zero { .. } => Err(Error::ZeroProfile),
    }
}

/// The blow-up of `H` along the exponent witness `U` with as many copies as
/// fit in `n` vertices, padded with isolated vertices to exactly `n`.
pub fn lower_bound_construction(h: &Graph, tree: &Graph, n: usize) -> Result<Graph> {
    let (_, witness) = finite(exponent_r(h, tree)?)?;
    construction_for(h, tree, &witness, n)
}

fn construction_for(h: &Graph, tree: &Graph, witness: &[usize], n: usize) -> Result<Graph> {
    let hn = h.n();
    if n < hn {
        return Err(Error::validation(format!("n = {n} is smaller than |H| = {hn}")));
    }
    let g = if witness.len() == hn {
        h.clone()
    } else {
        let copies = (n - witness.len()) / (hn - witness.len());
        blow_up(h, witness, copies)?.graph
    }
    .padded(n);
    if contains_copy(&g, tree)?.is_some() {
        return Err(Error::internal("extremal construction contains T"));
    }
    Ok(g)
}

/// Exhaustive maximum of `count_copies(G, H)` over `T`-free graphs on `n` vertices.
///
/// Isomorphism classes are grown one vertex at a time and deduplicated by
/// canonical form. Since `T`-freeness is inherited by induced subgraphs,
/// only `T`-free classes are extended; `graphs_examined` counts the `T`-free
/// classes on `n` vertices.
pub fn brute_force_ex(n: usize, h: &Graph, tree: &Graph) -> Result<ExSearchResult> {
    check_pair(h, tree)?;
    if n > INTERNAL_CAP {
        return Err(Error::UnsupportedSize(format!(
            "internal enumeration supports n <= {INTERNAL_CAP}; use stream mode beyond"
        )));
    }
    let classes = t_free_classes(n, tree)?;
    let mut best: Option<(BigUint, &Graph)> = None;
    let counts: Vec<BigUint> = classes
        .par_iter()
        .map(|(_, g)| count_copies(g, h))
        .collect::<Result<_>>()?;
    // BTreeMap order = canonical order, so the first maximum has the smallest canonical form
    for ((_, g), c) in classes.iter().zip(counts) {
        if best.as_ref().is_none_or(|(b, _)| c > *b) {
            best = Some((c, g));
        }
    }
    let (max_count, witness) = best.ok_or_else(|| Error::internal("no graphs enumerated"))?;
    Ok(ExSearchResult {
        n,
        max_count,
        witness: witness.clone(),
        graphs_examined: classes.len() as u64,
        source: SearchSource::InternalEnumeration,
    })
}

/// `T`-free graphs on `n` vertices, one per isomorphism class, keyed by canonical form.
pub fn t_free_classes(n: usize, tree: &Graph) -> Result<BTreeMap<String, Graph>> {
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    level.insert(canonical_form(&Graph::empty(0))?, Graph::empty(0));
    for k in 0..n {
        let parents: Vec<&Graph> = level.values().collect();
        let children: Vec<(String, Graph)> = parents
            .par_iter()
            .flat_map_iter(|g| (0u32..1 << k).map(move |nbrs| (*g, nbrs)))
            .map(|(g, nbrs)| -> Result<Option<(String, Graph)>> {
                let mut child = g.padded(k + 1);
                for v in 0..k {
                    if nbrs >> v & 1 == 1 {
                        child.add_edge(v, k);
                    }
                }
                if contains_copy(&child, tree)?.is_some() {
                    return Ok(None);
                }
                let (canon, perm) = crate::graph::canonical_labeling(&child)?;
                Ok(Some((canon, child.permute(&perm))))
            })
            .filter_map(|r| r.transpose())
            .collect::<Result<_>>()?;
        level = children.into_iter().collect();
    }
    Ok(level)
}

/// Stream variant: examines every graph6 line of `input` (each must have `n` vertices).
pub fn brute_force_ex_stream<R: BufRead>(input: R, n: usize, h: &Graph, tree: &Graph) -> Result<ExSearchResult> {
    check_pair(h, tree)?;
    let mut best: Option<(BigUint, String, Graph)> = None;
    let mut examined = 0u64;
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Input(format!("reading stream: {e}")))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let g = parse_graph(text, GraphFormat::Graph6)
            .map_err(|e| Error::Input(format!("line {}: {e}", lineno + 1)))?;
        if g.n() != n {
            return Err(Error::Input(format!("line {}: graph has {} vertices, expected {n}", lineno + 1, g.n())));
        }
        examined += 1;
        if contains_copy(&g, tree)?.is_some() {
            continue;
        }
        let count = count_copies(&g, h)?;
        let key = if n <= PATTERN_CAP { canonical_form(&g)? } else { serialize_graph(&g, GraphFormat::Graph6) };
        let better = match &best {
            None => true,
            Some((c, k, _)) => count > *c || (count == *c && key < *k),
        };
        if better {
            best = Some((count, key, g));
        }
    }
    let (max_count, _, witness) = best.ok_or_else(|| Error::Input("stream contains no T-free graph".into()))?;
    Ok(ExSearchResult { n, max_count, witness, graphs_examined: examined, source: SearchSource::Graph6Stream })
}

pub fn growth_report(h: &Graph, tree: &Graph, ns: &[usize]) -> Result<GrowthReport> {
    let (r, witness) = finite(exponent_r(h, tree)?)?;
    if let Some(&bad) = ns.iter().find(|&&n| n < h.n()) {
        return Err(Error::validation(format!("n = {bad} is below h = {}", h.n())));
    }
    let steady = h.n() * tree.n();
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("ns must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let g = construction_for(h, tree, &witness, n)?;
        let count = count_copies(&g, h)?;
        let lower = BigUint::from(n / h.n()).pow(r as u32);
        if count < lower {
            return Err(Error::internal(format!("construction at n = {n} has {count} copies, below (n/h)^r = {lower}")));
        }
        if let Some(prev) = rows.last().filter(|row: &&GrowthRow| row.n >= steady) {
            if count <= prev.count {
                return Err(Error::internal(format!("copy count did not increase at n = {n}")));
            }
        }
        rows.push(GrowthRow { n, count });
    }
    let slopes = rows
        .windows(2)
        .map(|w| {
            let ratio = ratio_f64(&w[1].count, &w[0].count);
            ratio.ln() / (w[1].n as f64 / w[0].n as f64).ln()
        })
        .collect();
    Ok(GrowthReport { rows, slopes, r_claimed: r })
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    // scale both down so the conversion stays finite
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (a, b) = (num >> shift, den >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact optimum next to the construction's count; the optimum can never be smaller.
pub fn oracle_vs_construction(n: usize, h: &Graph, tree: &Graph) -> Result<Comparison> {
    let oracle = brute_force_ex(n, h, tree)?.max_count;
    let construction = count_copies(&lower_bound_construction(h, tree, n)?, h)?;
    if oracle < construction {
        return Err(Error::internal(format!(
            "construction count {construction} exceeds exhaustive optimum {oracle} at n = {n}"
        )));
    }
    debug_assert!(!oracle.is_zero() || construction.is_zero());
    Ok(Comparison { n, oracle, construction })
}
