//! The `treealpha` command line. Text output uses 1-based vertex and node ids
//! like the file formats; `--json` emits one record per line with the
//! library's 0-based ids.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::decomposition::{
    alpha_of_decomposition, mu_of_decomposition, validate, MeasureReport, MeasureWitness,
    TreeDecomposition,
};
use crate::error::{Error, Result};
use crate::experiments::{
    kst_exhaustive_check, lemma51_batch, ExperimentConfig, LowerBoundOutcome,
};
use crate::extraction::{
    extract_independent_sets, extract_induced_matching, threshold_k, threshold_m, threshold_n,
    MatchingOutcome,
};
use crate::graph::{kst_threshold, Biclique, Graph, VertexSet};
use crate::io;
use crate::solver::{self, Solver};
use crate::transform::{theorem_pipeline, transform_with_threshold, PipelineReport};

#[derive(Debug, Parser)]
#[command(
    name = "treealpha",
    version,
    about = "Tree decompositions measured by independent sets and induced matchings"
)]
struct Cli {
    /// Emit JSON lines instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphTd {
    /// Graph in `.gr` format.
    #[arg(long)]
    graph: PathBuf,
    /// Decomposition in `.td` format.
    #[arg(long)]
    td: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Param {
    Treealpha,
    Mutw,
}

impl From<Param> for solver::Measure {
    fn from(p: Param) -> Self {
        match p {
            Param::Treealpha => solver::Measure::Alpha,
            Param::Mutw => solver::Measure::Mu,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    SubsetDp,
    Permutations,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a decomposition is a tree decomposition of the graph.
    Validate(GraphTd),
    /// Evaluate α(T) and/or μ(T) of a valid decomposition.
    Measure {
        #[command(flatten)]
        io: GraphTd,
        /// Only this measure; both by default.
        #[arg(long, value_enum)]
        param: Option<Param>,
    },
    /// Exact tree-independence number or induced matching treewidth.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        param: Param,
        #[arg(long, value_enum, default_value = "subset-dp")]
        strategy: StrategyArg,
        /// Largest vertex count attempted; defaults to the strategy's limit.
        #[arg(long)]
        limit: Option<usize>,
        /// Write the witness decomposition here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induced matching or K_{t,t} out of a matching of a bipartite graph.
    ExtractMatching {
        #[arg(long)]
        graph: PathBuf,
        /// One edge `u v` per line.
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u32,
    },
    /// Large subsets of independent sets whose union is independent.
    ExtractSets {
        #[arg(long)]
        graph: PathBuf,
        /// One independent set per line.
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to 50(s+1).
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Evaluate the threshold constants n_t, M, N, C and K.
    Thresholds {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        mu: Option<u64>,
    },
    /// Rebuild a decomposition around light vertices and certify the result.
    Transform {
        #[command(flatten)]
        io: GraphTd,
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        t: u32,
        /// Light/heavy cut-off; without it the certified pipeline runs with C(μ,t).
        #[arg(long)]
        threshold: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random bipartite instances: the three properties and the separator bound.
    Lowerbound {
        #[arg(long)]
        t: usize,
        /// Number of instances.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Seed of the first instance; instance i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also search for induced K_{t,t} anywhere, ignoring the sides.
        #[arg(long)]
        strict: bool,
    },
    /// Exhaustive edge-count check over all labelled graphs up to max-n vertices.
    KstCheck {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        t: usize,
    },
}

/// Runs the command line and returns the exit code: 0 on success, 1 when the
/// answer is a verified negative, 2 on usage, input or parse errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        out,
        json: cli.json,
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            if ctx.json {
                let _ = writeln!(ctx.out, "{}", error_record(&e));
            }
            let _ = writeln!(err, "error: {}", error_text(&e));
            code
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDecomposition(_)
        | Error::BicliquePresent { .. }
        | Error::MuExceeded { .. }
        | Error::ExtractionFailed(_)
        | Error::GuaranteeViolated(_) => 1,
        _ => 2,
    }
}

/// Error text with witnesses in 1-based ids.
fn error_text(e: &Error) -> String {
    match e {
        Error::InvalidDecomposition(v) => {
            format!("decomposition is not valid: {}", v.one_based())
        }
        Error::BicliquePresent { t, witness } => {
            format!(
                "graph contains an induced K_{{{t},{t}}}: {}",
                biclique_text(witness)
            )
        }
        Error::MuExceeded {
            node,
            found,
            bound,
            matching,
        } => format!(
            "bag of node {} admits an induced matching of size {found} > {bound}: {}",
            node + 1,
            edges_text(matching)
        ),
        Error::ExtractionFailed(f) => {
            let mut text = format!(
                "no draw with few enough edges in {} iterations (fewest {})",
                f.iterations, f.min_edges
            );
            if let Some((i, j, edges)) = f.densest_pair {
                text.push_str(&format!(
                    "; densest pair of sets ({}, {}) spans {edges} edges",
                    i + 1,
                    j + 1
                ));
            }
            text
        }
        _ => e.to_string(),
    }
}

fn error_record(e: &Error) -> serde_json::Value {
    let detail = match e {
        Error::InvalidDecomposition(v) => json!(v),
        Error::BicliquePresent { t, witness } => json!({ "t": t, "witness": witness }),
        Error::MuExceeded {
            node,
            found,
            bound,
            matching,
        } => json!({ "node": node, "found": found, "bound": bound, "matching": matching }),
        Error::ExtractionFailed(f) => json!(f),
        _ => serde_json::Value::Null,
    };
    json!({ "error": e.to_string(), "detail": detail })
}

fn ids(set: &VertexSet) -> String {
    let parts: Vec<String> = set.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", parts.join(" "))
}

fn edges_text(edges: &[(usize, usize)]) -> String {
    let parts: Vec<String> = edges
        .iter()
        .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
        .collect();
    parts.join(" ")
}

fn biclique_text(b: &Biclique) -> String {
    format!(
        "{} x {}",
        ids(&b.left.iter().copied().collect()),
        ids(&b.right.iter().copied().collect())
    )
}

fn witness_text(w: &MeasureWitness) -> String {
    match w {
        MeasureWitness::IndependentSet(s) => ids(s),
        MeasureWitness::InducedMatching(m) => edges_text(m.edges()),
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Ctx<'_> {
    fn record<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let line = serde_json::to_string(value).expect("records serialize");
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn line(&mut self, text: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", text.as_ref())?;
        Ok(())
    }

    fn load(&self, io: &GraphTd) -> Result<(Graph, TreeDecomposition)> {
        let g = io::parse_graph_file(&io.graph)?;
        let td = io::parse_td_file(&io.td, &g)?;
        Ok((g, td))
    }

    fn dispatch(&mut self, command: Command) -> Result<i32> {
        match command {
            Command::Validate(io) => self.validate(&io),
            Command::Measure { io, param } => self.measure(&io, param),
            Command::Solve {
                graph,
                param,
                strategy,
                limit,
                out,
            } => self.solve(graph, param, strategy, limit, out),
            Command::ExtractMatching {
                graph,
                matching,
                s,
                t,
            } => self.extract_matching(graph, matching, s, t),
            Command::ExtractSets {
                graph,
                sets,
                s,
                t,
                seed,
                max_iterations,
            } => self.extract_sets(graph, sets, s, t, seed, max_iterations),
            Command::Thresholds { t, s, m, mu } => self.thresholds(t, s, m, mu),
            Command::Transform {
                io,
                mu,
                t,
                threshold,
                out,
            } => self.transform(&io, mu, t, threshold, out),
            Command::Lowerbound {
                t,
                seeds,
                seed,
                strict,
            } => self.lowerbound(t, seeds, seed, strict),
            Command::KstCheck { max_n, t } => self.kst_check(max_n, t),
        }
    }

    fn validate(&mut self, io: &GraphTd) -> Result<i32> {
        let (g, td) = self.load(io)?;
        let result = validate(&g, &td);
        if self.json {
            self.record(&json!({ "valid": result.is_ok(), "violation": result.as_ref().err() }))?;
        } else {
            match &result {
                Ok(()) => self.line("valid")?,
                Err(v) => self.line(format!("invalid: {}", v.one_based()))?,
            }
        }
        Ok(if result.is_ok() { 0 } else { 1 })
    }

    fn measure(&mut self, io: &GraphTd, param: Option<Param>) -> Result<i32> {
        let (g, td) = self.load(io)?;
        validate(&g, &td).map_err(Error::InvalidDecomposition)?;
        let wanted: Vec<Param> = param.map_or(vec![Param::Treealpha, Param::Mutw], |p| vec![p]);
        for p in wanted {
            let report = match p {
                Param::Treealpha => alpha_of_decomposition(&g, &td)?,
                Param::Mutw => mu_of_decomposition(&g, &td)?,
            };
            self.measure_line(solver::Measure::from(p), &report)?;
        }
        Ok(0)
    }

    fn measure_line(&mut self, measure: solver::Measure, r: &MeasureReport) -> Result<()> {
        if self.json {
            self.record(&json!({ "measure": measure.to_string(), "report": r }))
        } else {
            self.line(format!(
                "{measure}={} node={} witness={}",
                r.value,
                r.node + 1,
                witness_text(&r.witness)
            ))
        }
    }

    fn solve(
        &mut self,
        graph: PathBuf,
        param: Param,
        strategy: StrategyArg,
        limit: Option<usize>,
        out: Option<PathBuf>,
    ) -> Result<i32> {
        let g = io::parse_graph_file(graph)?;
        let strategy = match strategy {
            StrategyArg::SubsetDp => solver::Strategy::SubsetDp,
            StrategyArg::Permutations => solver::Strategy::Permutations,
        };
        let mut solver = Solver::new(param.into()).strategy(strategy);
        if let Some(l) = limit {
            solver = solver.limit(l);
        }
        let r = solver.solve(&g)?;
        let mut text = io::write_td(&r.witness, g.vertex_count());
        text.push_str(&format!("value={}\n", r.value));
        if let Some(path) = &out {
            std::fs::write(path, &text)?;
        }
        if self.json {
            self.record(&json!({
                "measure": r.measure.to_string(),
                "value": r.value,
                "ordering": r.ordering.as_slice(),
                "explored": r.explored,
                "td": io::write_td(&r.witness, g.vertex_count()),
            }))?;
        } else if out.is_some() {
            self.line(format!("value={}", r.value))?;
        } else {
            self.out.write_all(text.as_bytes())?;
        }
        Ok(0)
    }

    fn extract_matching(
        &mut self,
        graph: PathBuf,
        matching: PathBuf,
        s: u64,
        t: u32,
    ) -> Result<i32> {
        let g = io::parse_graph_file(graph)?;
        let m = io::parse_matching_file(matching, g.vertex_count())?;
        let r = extract_induced_matching(&g, &m, s, t)?;
        if self.json {
            self.record(&r)?;
            return Ok(0);
        }
        match &r.outcome {
            MatchingOutcome::Biclique { witness, induced } => {
                self.line(format!(
                    "biclique {} induced={induced}",
                    biclique_text(witness)
                ))?;
            }
            MatchingOutcome::InducedMatching {
                matching,
                target,
                insufficient,
            } => {
                self.line(format!(
                    "induced_matching size={} target={target} edges={}",
                    matching.len(),
                    edges_text(matching.edges())
                ))?;
                if let Some(sigma) = r.sigma {
                    self.line(format!("sigma={sigma}"))?;
                }
                if let Some(i) = insufficient {
                    self.line(format!(
                        "note: matching of size {} is below M(s,t)={}; the target is not promised",
                        i.matching_size, i.required
                    ))?;
                }
            }
        }
        Ok(0)
    }

    fn extract_sets(
        &mut self,
        graph: PathBuf,
        sets: PathBuf,
        s: usize,
        t: u32,
        seed: u64,
        max_iterations: Option<usize>,
    ) -> Result<i32> {
        let g = io::parse_graph_file(graph)?;
        let sets = io::parse_sets_file(sets, g.vertex_count())?;
        let max_iterations = max_iterations.unwrap_or(50 * (s + 1));
        match extract_independent_sets(&g, &sets, s, t, seed, max_iterations) {
            Ok(r) => {
                if self.json {
                    self.record(&r)?;
                } else {
                    self.line(format!(
                        "iterations={} meets_size_threshold={} required_size={}",
                        r.iterations, r.meets_size_threshold, r.required_size
                    ))?;
                    for (i, u) in r.survivors.iter().enumerate() {
                        self.line(format!("U{}={}", i + 1, ids(u)))?;
                    }
                }
                Ok(0)
            }
            Err(Error::ExtractionFailed(f)) => {
                if self.json {
                    self.record(&json!({ "failure": f }))?;
                } else {
                    self.line(format!(
                        "failed iterations={} min_edges={}",
                        f.iterations, f.min_edges
                    ))?;
                    if let Some((i, j, e)) = f.densest_pair {
                        self.line(format!("densest_pair={} {} edges={e}", i + 1, j + 1))?;
                    }
                }
                Ok(1)
            }
            Err(e) => Err(e),
        }
    }

    fn thresholds(
        &mut self,
        t: u32,
        s: Option<u64>,
        m: Option<u64>,
        mu: Option<u64>,
    ) -> Result<i32> {
        if t == 0 {
            return Err(Error::InvalidArgument("t must be at least 1".into()));
        }
        let mut rows: Vec<(String, BigUint)> = vec![(format!("n_{t}"), kst_threshold(t).into())];
        if let Some(s) = s {
            let big = BigUint::from(s);
            rows.push((format!("M({s},{t})"), threshold_m(&big, t)));
            if let Some(m) = m {
                rows.push((
                    format!("N({s},{t},{m})"),
                    threshold_n(&big, t, &BigUint::from(m)),
                ));
            }
        }
        if let Some(mu) = mu {
            let k = threshold_k(mu, t);
            rows.push((format!("M({mu},{t})"), k.matching.clone()));
            let mm = &k.matching;
            rows.push((format!("N({mm},{t},{mm})"), k.light.clone()));
            rows.push((format!("C({mu},{t})"), k.light.clone()));
            rows.push((format!("K({mu},{t})"), k.width.clone()));
        }
        rows.dedup();
        for (name, value) in rows {
            if self.json {
                self.record(&json!({ "name": name, "value": value.to_string() }))?;
            } else {
                self.line(format!("{name}={value}"))?;
            }
        }
        Ok(0)
    }

    fn transform(
        &mut self,
        io: &GraphTd,
        mu: u64,
        t: u32,
        threshold: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<i32> {
        let (g, td) = self.load(io)?;
        let r = match threshold {
            None => theorem_pipeline(&g, &td, mu, t)?,
            Some(c) => transform_with_threshold(&g, &td, mu, t, c.into())?,
        };
        let text = io::write_td(&r.transformed, g.vertex_count());
        if let Some(path) = &out {
            std::fs::write(path, &text)?;
        }
        if self.json {
            self.record(&r)?;
        } else {
            if out.is_none() {
                self.out.write_all(text.as_bytes())?;
            }
            // comment lines keep standard output a readable `.td` file
            for l in report_lines(&r, threshold.is_none()) {
                self.line(format!("c {l}"))?;
            }
        }
        Ok(if r.all_hold { 0 } else { 1 })
    }

    fn lowerbound(&mut self, t: usize, seeds: usize, seed: u64, strict: bool) -> Result<i32> {
        let mut cfg = ExperimentConfig::new(t, seed, seeds);
        cfg.strict = strict;
        let records = lemma51_batch(&cfg)?;
        let passing = records.iter().filter(|r| r.properties.all_hold()).count();
        for r in &records {
            if self.json {
                self.record(r)?;
                continue;
            }
            let p = &r.properties;
            let bound = match &r.lower_bound {
                None => format!("none ({})", r.note.as_deref().unwrap_or("")),
                Some(b) => match &b.outcome {
                    LowerBoundOutcome::Vacuous => {
                        format!("0 (vacuous: n-2t={})", b.separator_limit)
                    }
                    LowerBoundOutcome::Certified => {
                        format!("{} (checked {} sets)", b.bound, b.checked)
                    }
                    LowerBoundOutcome::Partition { witness } => format!(
                        "0 (split S={} W={} Z={})",
                        ids(&witness.removed),
                        ids(&witness.part_w),
                        ids(&witness.part_z)
                    ),
                    LowerBoundOutcome::SmallSeparator { separator } => {
                        format!("0 (balanced separator {})", ids(separator))
                    }
                },
            };
            let mut line = format!(
                "seed={} n={} edges={} biclique_free={} co_biclique_free={} no_t_matching={}",
                r.seed, r.side, r.edges, p.biclique_free, p.co_biclique_free, p.no_t_matching
            );
            if let Some(s) = p.strict_biclique_free {
                line.push_str(&format!(" strict_biclique_free={s}"));
            }
            line.push_str(&format!(" bound={bound}"));
            self.line(line)?;
        }
        if self.json {
            self.record(&json!({ "t": t, "instances": records.len(), "all_properties": passing }))?;
        } else {
            self.line(format!("all_properties={passing}/{}", records.len()))?;
        }
        Ok(0)
    }

    fn kst_check(&mut self, max_n: usize, t: usize) -> Result<i32> {
        let r = kst_exhaustive_check(max_n, t)?;
        if self.json {
            self.record(&r)?;
        } else {
            for row in &r.rows {
                self.line(format!(
                    "n={} graphs={} max_free_edges={} bound={:.3} violations={}",
                    row.n,
                    row.graphs,
                    row.max_free_edges,
                    row.bound,
                    row.violations.len()
                ))?;
            }
            self.line(format!("violations={}", r.violation_count()))?;
        }
        Ok(if r.violation_count() == 0 { 0 } else { 1 })
    }
}

fn report_lines(r: &PipelineReport, certified: bool) -> Vec<String> {
    let th = &r.thresholds;
    let mut lines = vec![
        format!(
            "mode={}",
            if certified {
                "certified"
            } else {
                "explicit-threshold"
            }
        ),
        format!(
            "mu={} t={} M={} C={} K={}",
            th.mu, th.t, th.matching, th.light, th.width
        ),
        format!("input_mu={} node={}", r.input_mu.value, r.input_mu.node + 1),
        format!(
            "S={} light_threshold={} light={} heavy={}",
            ids(&r.state.s),
            r.state.light_threshold,
            ids(&r.state.s_light),
            ids(&r.state.s_heavy)
        ),
    ];
    for claim in [&r.outside_s, &r.light_neighbourhood, &r.heavy_count] {
        lines.push(format!(
            "{} max={} bound={} holds={}",
            claim.claim,
            claim.max_value(),
            claim.bound,
            claim.holds()
        ));
    }
    lines.push(match &r.validity {
        None => "valid=true".to_string(),
        Some(v) => format!("valid=false violation={}", v.one_based()),
    });
    lines.push(format!(
        "alpha={} node={} bound={} holds={}",
        r.alpha.value,
        r.alpha.node + 1,
        th.width,
        BigUint::from(r.alpha.value) < th.width
    ));
    lines.push(format!("node_count_ok={}", r.node_count_ok));
    lines.push(format!("all_hold={}", r.all_hold));
    lines
}
