use std::collections::BTreeMap;

use sector_doubler::analysis::Analysis;
use sector_doubler::double::Mode;
use sector_doubler::graph::{compare_golden, emit_dot, load_golden, parse_dot, BipartiteGraph};
use sector_doubler::tolerance::Tolerances;

fn graph(name: &str) -> BipartiteGraph {
    Analysis::load(name, Mode::Chiral, &Tolerances::default()).unwrap().graph().unwrap()
}

fn names(g: &BipartiteGraph, top: &str) -> Vec<String> {
    let mut v: Vec<String> = g.neighbors(top).into_iter().map(|(n, m)| format!("{n}x{m}")).collect();
    v.sort();
    v
}

#[test]
fn e6_neighbourhoods() {
    let g = graph("e6");
    assert_eq!(names(&g, "0"), ["(0,0)x1", "(3,1)x1", "(6,0)x1"]);
    assert_eq!(names(&g, "10"), ["(10,0)x1", "(3,1)x1", "(4,0)x1"]);
    assert_eq!(g.degree("2"), 8);
}

#[test]
fn e6_dot_counts() {
    let g = graph("e6");
    let text = emit_dot(&g);
    let back = parse_dot(&text).unwrap();
    assert_eq!(back.node_count(), 13);
    assert_eq!(back.edge_count(), 14);
    assert_eq!(emit_dot(&back), text);
}

#[test]
fn e6_golden() {
    let report = compare_golden(&graph("e6"), &load_golden("e6_dual_graph.json").unwrap());
    assert!(report.matched, "{report}");
}

#[test]
fn e8_golden() {
    let g = graph("e8");
    assert_eq!(g.top, ["0", "2", "4", "6^(1)"]);
    assert_eq!(g.bottom.len(), 18);
    let report = compare_golden(&g, &load_golden("e8_dual_graph.json").unwrap());
    assert!(report.matched, "{report}");
}

#[test]
fn e8cc_golden() {
    let report = compare_golden(&graph("e8cc"), &load_golden("e8cc_dual_graph.json").unwrap());
    assert!(report.matched, "{report}");
}

#[test]
fn deleting_a_golden_edge_is_reported() {
    let g = graph("e6");
    let mut golden = load_golden("e6_dual_graph.json").unwrap();
    let removed = golden.edges.remove(3);
    let report = compare_golden(&g, &golden);
    assert!(!report.matched);
    assert!(report.missing.is_empty());
    assert_eq!(report.extra.len(), 1);
    assert_eq!(report.extra[0].top, golden.top[removed.top]);
    assert_eq!(report.extra[0].bottom, golden.bottom[removed.bottom]);
}

#[test]
fn split_siblings_have_identical_edges() {
    for name in ["e6", "e8"] {
        let g = graph(name);
        let mut by_base: BTreeMap<String, Vec<Vec<(usize, u32)>>> = BTreeMap::new();
        for (b, bottom) in g.bottom.iter().enumerate() {
            if let Some((base, _)) = bottom.rsplit_once('_') {
                let edges: Vec<(usize, u32)> =
                    g.edges.iter().filter(|e| e.bottom == b).map(|e| (e.top, e.mult)).collect();
                by_base.entry(base.to_string()).or_default().push(edges);
            }
        }
        assert!(!by_base.is_empty(), "{name}");
        for (base, vecs) in by_base {
            assert!(vecs.windows(2).all(|w| w[0] == w[1]), "{name} {base}");
        }
    }
}

#[test]
fn every_graph_is_connected_balanced_and_covers_delta() {
    for name in ["e6", "e8", "e8cc", "e12", "e24"] {
        let a = Analysis::load(name, Mode::Chiral, &Tolerances::default()).unwrap();
        let g = a.graph().unwrap();
        assert!(g.is_connected(), "{name}");
        assert_eq!(g.top.len(), a.chiral.as_ref().unwrap().color_zero_vertices().len(), "{name}");
        assert_eq!(g.bottom.len(), a.system.irreducibles.len(), "{name}");
        assert!(g.perron_balance_deviation().unwrap() < 1e-8, "{name}");
        assert!(g.edges.iter().all(|e| e.mult > 0));
    }
}

#[test]
fn output_is_deterministic() {
    assert_eq!(emit_dot(&graph("e12")), emit_dot(&graph("e12")));
}
