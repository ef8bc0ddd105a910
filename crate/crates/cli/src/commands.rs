use anyhow::{anyhow, bail, Context, Result};
use ramsey_core::arrowing::{
    check_arrows, extendable, is_minimal, min_degree_stats, minimalize, ExtendVerdict, MinimalityVerdict,
    MinimizeError, SearchStats, Verdict,
};
use ramsey_core::constructions::{
    build_3connected_abundant, build_clique_gtilde, build_cycle_abundant, build_ktk2_abundant, clique_ladder,
    p4_abundant, star_arrow_predicate, star_degree_one_count_check, AbundanceRecipe, ConstructionError,
    ThreeConnectedSeed,
};
use ramsey_core::gadgets::{
    build_gni, build_indicator, build_pattern_gadget, check_robust, load_sender_dir, search_sender, verify_gni,
    verify_indicator, verify_pattern_gadget, verify_sender, GniSpec, IndicatorSpec, LibraryProvider,
    PatternGadgetSpec, PropertyStatus, RobustOptions, SenderProvider, SenderSidecar, StubProvider,
    VerificationReport,
};
use ramsey_core::graph::{families, girth, is_connected, is_k_connected, ColorPattern, FamilyMode, PatternFamily};
use ramsey_core::Graph;
use serde_json::{json, Value};

use crate::report::{coloring_json, graph_json, Outcome, Report};
use crate::select;
use crate::{Cli, Command, Common, Construct, GniArgs, HostTarget, IndicatorArgs, PatternArgs, SenderSource, Verify};

pub fn run(cli: &Cli) -> Result<Report> {
    let params = serde_json::to_value(cli)?;
    let c = &cli.common;
    let (name, (outcome, result)) = match &cli.command {
        Command::Arrow(ht) => ("arrow", arrow(c, ht)?),
        Command::Color(ht) => ("color", color(c, ht)?),
        Command::Extend { ht, partial } => ("extend", extend(c, ht, partial)?),
        Command::Minimalize(ht) => ("minimalize", minimal_subgraph(c, ht)?),
        Command::CheckMinimal(ht) => ("check-minimal", check_minimal(c, ht)?),
        Command::Construct(k) => ("construct", construct(c, k)?),
        Command::Verify(v) => ("verify", verify(c, v)?),
        Command::SearchSender { target, d, polarity, max_order, corpus, sender_out } => {
            let h = select::graph(target)?;
            let d = d.unwrap_or(h.n() + 1);
            let corpus = select::corpus(corpus.as_deref())?;
            let s = search_sender(&h, c.q, d, (*polarity).into(), *max_order, &corpus, &c.verify())?;
            let found = match &s.found {
                Some(spec) => {
                    let side = SenderSidecar::of(spec)?;
                    if let Some(p) = sender_out {
                        std::fs::write(p, serde_json::to_string_pretty(&side)?)
                            .with_context(|| format!("writing {}", p.display()))?;
                    }
                    serde_json::to_value(&side)?
                }
                None => Value::Null,
            };
            let outcome = match (&s.found, s.complete) {
                (Some(_), _) => Outcome::Succeeded,
                (None, true) => Outcome::Refuted,
                (None, false) => Outcome::Unknown,
            };
            let result = json!({
                "target": graph_json(&h), "d": d, "found": found, "graphs_checked": s.graphs_checked,
                "pairs_checked": s.pairs_checked, "complete": s.complete, "max_order": s.max_order,
                "stats": stats_json(&s.stats),
            });
            ("search-sender", (outcome, result))
        }
        Command::StarCheck { host, m } => ("star-check", star_check(c, host, *m)?),
        Command::Stats { host } => {
            let g = select::graph(host)?;
            write_graph(c, &g)?;
            let result = json!({
                "graph": graph_json(&g),
                "degrees": min_degree_stats(&g),
                "girth": girth(&g),
                "connected": g.n() > 0 && is_connected(&g),
                "three_connected": is_k_connected(&g, 3),
            });
            ("stats", (Outcome::Succeeded, result))
        }
    };
    Ok(Report::new(name, params, outcome, result))
}

type Res = (Outcome, Value);

fn stats_json(s: &SearchStats) -> Value {
    json!({ "nodes": s.nodes, "copies": s.copies, "workers": s.workers })
}

fn write_graph(c: &Common, g: &Graph) -> Result<()> {
    if let Some(p) = &c.graph_out {
        std::fs::write(p, format!("{}\n", select::g6(g))).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn pair_of(ht: &HostTarget) -> Result<(Graph, Graph)> {
    Ok((select::graph(&ht.host)?, select::graph(&ht.target)?))
}

/// Engine verdict, treating an edgeless host as trivially colorable.
fn decide(c: &Common, g: &Graph, h: &Graph) -> Result<(Verdict, Value, Value)> {
    if g.m() == 0 {
        return Ok((Verdict::DoesNotArrow, json!([]), stats_json(&SearchStats::default())));
    }
    let r = check_arrows(g, h, c.q, c.solve())?;
    let w = r.witness.as_ref().map_or(Value::Null, |w| coloring_json(g, w));
    Ok((r.verdict, w, stats_json(&r.stats)))
}

fn arrow(c: &Common, ht: &HostTarget) -> Result<Res> {
    let (g, h) = pair_of(ht)?;
    let (verdict, witness, stats) = decide(c, &g, &h)?;
    let outcome = match verdict {
        Verdict::Arrows => Outcome::Verified,
        Verdict::DoesNotArrow => Outcome::Refuted,
        Verdict::Unknown => Outcome::Unknown,
    };
    let result = json!({
        "host": graph_json(&g), "target": graph_json(&h), "q": c.q,
        "verdict": verdict, "witness": witness, "stats": stats,
    });
    Ok((outcome, result))
}

fn color(c: &Common, ht: &HostTarget) -> Result<Res> {
    let (g, h) = pair_of(ht)?;
    let (verdict, witness, stats) = decide(c, &g, &h)?;
    let outcome = match verdict {
        Verdict::DoesNotArrow => Outcome::Succeeded,
        Verdict::Arrows => Outcome::Refuted,
        Verdict::Unknown => Outcome::Unknown,
    };
    let result = json!({
        "host": graph_json(&g), "target": graph_json(&h), "q": c.q,
        "verdict": verdict, "coloring": witness, "stats": stats,
    });
    Ok((outcome, result))
}

fn extend(c: &Common, ht: &HostTarget, partial: &str) -> Result<Res> {
    let (g, h) = pair_of(ht)?;
    let p = select::partial_coloring(&g, c.q, partial)?;
    let r = extendable(&g, &p, &h, c.solve())?;
    let outcome = match r.verdict {
        ExtendVerdict::Extendable => Outcome::Succeeded,
        ExtendVerdict::NotExtendable => Outcome::Refuted,
        ExtendVerdict::Unknown => Outcome::Unknown,
    };
    let mono = r
        .monochromatic_copy
        .as_ref()
        .map_or(Value::Null, |cp| json!(cp.iter().map(|&e| g.endpoints(e)).collect::<Vec<_>>()));
    let result = json!({
        "host": graph_json(&g), "target": graph_json(&h), "q": c.q,
        "partial": coloring_json(&g, &p), "verdict": r.verdict,
        "extension": r.witness.as_ref().map_or(Value::Null, |w| coloring_json(&g, w)),
        "monochromatic_copy": mono, "stats": stats_json(&r.stats),
    });
    Ok((outcome, result))
}

fn minimal_subgraph(c: &Common, ht: &HostTarget) -> Result<Res> {
    let (g, h) = pair_of(ht)?;
    let m = match minimalize(&g, &h, c.q, c.solve()) {
        Ok(m) => m,
        Err(MinimizeError::NotArrowing) => {
            let (_, witness, stats) = decide(c, &g, &h)?;
            let result = json!({
                "host": graph_json(&g), "target": graph_json(&h), "q": c.q,
                "error": "host does not arrow the target", "witness": witness, "stats": stats,
            });
            return Ok((Outcome::Refuted, result));
        }
        Err(e) => return Err(e.into()),
    };
    let Some(min) = &m.graph else {
        let result = json!({ "host": graph_json(&g), "target": graph_json(&h), "stats": stats_json(&m.stats) });
        return Ok((Outcome::Unknown, result));
    };
    write_graph(c, min)?;
    let kept: Vec<_> = m.kept_edges.iter().map(|&e| g.endpoints(e)).collect();
    let result = json!({
        "host": graph_json(&g), "target": graph_json(&h), "q": c.q,
        "minimal": graph_json(min), "kept_edges": kept, "vertex_map": m.vertex_map,
        "degrees": min_degree_stats(min), "stats": stats_json(&m.stats),
    });
    Ok((Outcome::Succeeded, result))
}

fn check_minimal(c: &Common, ht: &HostTarget) -> Result<Res> {
    let (g, h) = pair_of(ht)?;
    let r = is_minimal(&g, &h, c.q, c.solve())?;
    let checked = &r.graph;
    let (outcome, detail) = match &r.verdict {
        MinimalityVerdict::Minimal => (Outcome::Verified, Value::Null),
        MinimalityVerdict::NotArrowing => {
            (Outcome::Refuted, json!({ "witness": r.witness.as_ref().map(|w| coloring_json(checked, w)) }))
        }
        MinimalityVerdict::RemovableEdge { edge } => {
            (Outcome::Refuted, json!({ "removable_edge": checked.endpoints(*edge) }))
        }
        MinimalityVerdict::Unknown => (Outcome::Unknown, Value::Null),
    };
    let result = json!({
        "host": graph_json(checked), "target": graph_json(&h), "q": c.q,
        "verdict": r.verdict, "detail": detail, "degrees": min_degree_stats(checked),
        "stats": stats_json(&r.stats),
    });
    Ok((outcome, result))
}

fn star_check(c: &Common, host: &str, m: usize) -> Result<Res> {
    let g = select::graph(host)?;
    let predicted = star_arrow_predicate(&g, m)?;
    let (verdict, _, stats) = decide(c, &g, &families::star(m))?;
    if verdict == Verdict::Unknown {
        return Ok((Outcome::Unknown, json!({ "host": graph_json(&g), "m": m, "predicate": predicted })));
    }
    let agree = predicted == (verdict == Verdict::Arrows);
    let degree_one = match star_degree_one_count_check(&g, m, c.q, c.solve()) {
        Ok(d) => serde_json::to_value(d)?,
        Err(ConstructionError::NotMinimal(why)) => json!({ "not_minimal": why }),
        Err(ConstructionError::Budget(why)) => json!({ "unknown_budget_exhausted": why }),
        Err(e) => return Err(e.into()),
    };
    let holds = degree_one.get("holds").and_then(Value::as_bool).unwrap_or(true);
    let outcome = if agree && holds { Outcome::Verified } else { Outcome::Refuted };
    let result = json!({
        "host": graph_json(&g), "m": m, "q": c.q, "predicate": predicted, "engine": verdict,
        "agree": agree, "degree_one": degree_one, "stats": stats,
    });
    Ok((outcome, result))
}

fn provider(src: &SenderSource) -> Result<Box<dyn SenderProvider>> {
    Ok(match &src.senders {
        Some(dir) => Box::new(LibraryProvider::new(load_sender_dir(dir)?)),
        None => Box::new(StubProvider),
    })
}

fn recipe_json(r: &AbundanceRecipe) -> Result<Value> {
    Ok(json!({
        "graph": graph_json(&r.graph),
        "record": r.record(),
        "status": r.status(),
        "special": r.special,
        "claimed_degree": r.claimed_degree,
        "degrees_hold": r.degrees_hold(),
        "degrees": min_degree_stats(&r.graph),
    }))
}

fn build_ind(c: &Common, a: &IndicatorArgs) -> Result<IndicatorSpec> {
    let h = select::graph(&a.target)?;
    let f = select::graph(&a.f)?;
    let d = a.d.unwrap_or(h.n() + 1);
    Ok(build_indicator(&h, &f, c.q, d, a.polarity.into(), provider(&a.source)?.as_ref())?)
}

fn build_g(c: &Common, a: &GniArgs) -> Result<GniSpec> {
    let h = select::graph(&a.target)?;
    let f = select::graph(&a.f)?;
    let g = select::graph(&a.g)?;
    if c.q < 2 {
        bail!("q must be at least 2");
    }
    let parts = c.q as usize - 1;
    let classes = match &a.classes {
        Some(s) => select::classes(s)?,
        None => (0..parts).map(|k| g.edge_ids().filter(|e| e.index() % parts == k).collect()).collect(),
    };
    let d = a.d.unwrap_or(h.n() + 1);
    Ok(build_gni(&h, &f, &g, &classes, c.q, d, provider(&a.source)?.as_ref())?)
}

fn build_p(c: &Common, a: &PatternArgs) -> Result<PatternGadgetSpec> {
    let h = select::graph(&a.target)?;
    let g = select::graph(&a.g)?;
    let pats = select::patterns(&a.patterns)?
        .into_iter()
        .map(|cl| ColorPattern::from_classes(g.m(), c.q as usize, cl))
        .collect::<Result<Vec<_>, _>>()?;
    let fam = PatternFamily::new(g, pats, FamilyMode::Exact);
    let d = a.d.unwrap_or(h.n() + 1);
    Ok(build_pattern_gadget(&h, &fam, c.q, d, provider(&a.source)?.as_ref())?)
}

fn gadget_json(graph: &Graph, status: impl serde::Serialize, extra: Value, manifest: impl serde::Serialize) -> Value {
    json!({ "graph": graph_json(graph), "status": status, "interface": extra, "manifest": manifest })
}

fn construct(c: &Common, k: &Construct) -> Result<Res> {
    let value = match k {
        Construct::Cycle { t, k, source } => {
            let r = build_cycle_abundant(c.q, *t, *k, provider(source)?.as_ref())?;
            write_graph(c, &r.graph)?;
            recipe_json(&r)?
        }
        Construct::Ktk2 { t, k, source } => {
            if c.q != 2 {
                bail!("the clique-with-pendant construction is two-color only");
            }
            let r = build_ktk2_abundant(*t, *k, provider(source)?.as_ref())?;
            write_graph(c, &r.graph)?;
            recipe_json(&r)?
        }
        Construct::ThreeConn { target, seed_graph, v, e, k, source } => {
            let h = select::graph(target)?;
            let f = select::graph(seed_graph)?;
            let e = select::edge(&f, e)?;
            let mut seed = ThreeConnectedSeed::new(f, *v, e, h, c.q)?;
            seed.verify(c.solve())?;
            let r = build_3connected_abundant(&seed, *k, provider(source)?.as_ref())?;
            write_graph(c, &r.graph)?;
            let mut out = recipe_json(&r)?;
            out["seed"] = json!({ "flags": seed.flags, "c1_checks": seed.c1_checks });
            out
        }
        Construct::Clique { t, source } => {
            let g = build_clique_gtilde(*t, c.q, None, provider(source)?.as_ref())?;
            write_graph(c, &g.graph)?;
            let structure = g.structure();
            let failed = structure.iter().any(|p| p.status == PropertyStatus::Fail);
            let value = json!({
                "graph": graph_json(&g.graph), "t": g.t, "d": g.d, "v": g.v,
                "base": graph_json(&g.base), "base_optimal": g.base_optimal,
                "matching": g.matching.iter().map(|&e| g.graph.endpoints(e)).collect::<Vec<_>>(),
                "status": g.status, "provenance": g.provenance, "structure": structure,
                "manifest": g.manifest,
            });
            return Ok((if failed { Outcome::Refuted } else { Outcome::Succeeded }, value));
        }
        Construct::P4 { k } => {
            let g = p4_abundant(*k)?;
            write_graph(c, &g)?;
            json!({ "graph": graph_json(&g), "degrees": min_degree_stats(&g) })
        }
        Construct::Phi { t } | Construct::Psi { t } => {
            let l = clique_ladder(c.q, *t)?;
            let (n, col) = match k {
                Construct::Phi { .. } => (l.n, &l.phi),
                _ => (l.n + 1, &l.psi),
            };
            let kn = families::complete(n);
            write_graph(c, &kn)?;
            json!({ "graph": graph_json(&kn), "t": t, "blocks": l.blocks, "coloring": coloring_json(&kn, col) })
        }
        Construct::Indicator(a) => {
            let s = build_ind(c, a)?;
            write_graph(c, &s.graph)?;
            let iface = json!({ "f_map": s.f_map, "e": s.graph.endpoints(s.e), "polarity": s.polarity, "d": s.d,
                "provenance": s.provenance });
            gadget_json(&s.graph, s.status, iface, &s.manifest)
        }
        Construct::Gni(a) => {
            let s = build_g(c, a)?;
            write_graph(c, &s.graph)?;
            let iface = json!({ "f_map": s.f_map, "g_map": s.g_map, "d": s.d, "provenance": s.provenance });
            gadget_json(&s.graph, s.status, iface, &s.manifest)
        }
        Construct::PatternGadget(a) => {
            let s = build_p(c, a)?;
            write_graph(c, &s.graph)?;
            let iface = json!({ "g_map": s.g_map, "r": s.r, "d": s.d, "provenance": s.provenance });
            gadget_json(&s.graph, s.status, iface, &s.manifest)
        }
    };
    let mut value = value;
    value["construction"] = json!(k.name());
    Ok((Outcome::Succeeded, value))
}

fn verified(r: VerificationReport, graph: &Graph) -> Result<Res> {
    let outcome = Outcome::of(&r);
    Ok((outcome, json!({ "graph": graph_json(graph), "report": r })))
}

fn verify(c: &Common, v: &Verify) -> Result<Res> {
    let opts = c.verify();
    match v {
        Verify::Sender { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let side: SenderSidecar =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
            let s = side.to_spec()?;
            verified(verify_sender(&s, &opts), &s.graph)
        }
        Verify::Indicator(a) => {
            let s = build_ind(c, a)?;
            verified(verify_indicator(&s, &opts), &s.graph)
        }
        Verify::Gni(a) => {
            let s = build_g(c, a)?;
            verified(verify_gni(&s, &opts), &s.graph)
        }
        Verify::PatternGadget(a) => {
            let s = build_p(c, a)?;
            verified(verify_pattern_gadget(&s, &opts), &s.graph)
        }
        Verify::Robust { ht, inner, trials, s_max } => {
            let (g, h) = pair_of(ht)?;
            let inner = select::vertices(inner)?;
            if let Some(&bad) = inner.iter().find(|&&x| x as usize >= g.n()) {
                return Err(anyhow!("inner vertex {bad} is not in the host"));
            }
            let ro = RobustOptions { trials: *trials, s_max: *s_max, seed: c.seed, ..RobustOptions::default() };
            verified(check_robust(&g, &inner, &h, &ro), &g)
        }
    }
}
